//! Closed-form Raman sideband spectra of a long probe: the exact
//! Bessel-product series, its dominant single-Bessel term, and the
//! weak-modulation limit, side by side.

use num_complex::Complex64;
use raman_beat::analytic::{
    bessel_spectrum, sideband_orders, BeatParameters, SpectrumMode,
};
use raman_beat::cli::write_csv;
use raman_beat::core::Frequency;

fn main() -> raman_beat::Result<()> {
    let omega_m = 7.8165889e14;
    let alpha_z = 0.6;
    let ratio = 5.2;
    let p = BeatParameters::bare(alpha_z, omega_m, 20e-6)?;
    let w0 = Frequency::from_rad_per_s(ratio * omega_m)?;
    let one = Complex64::new(1.0, 0.0);

    let orders = sideband_orders(&p, w0);
    println!("αz = {alpha_z}, ω₀/ω_m = {ratio}");
    println!(
        "order estimates: anti-Stokes {:.2}, Stokes {:.2}, γz = {:.2}\n",
        orders.q_anti_stokes,
        orders.q_stokes,
        orders.gamma * p.z
    );

    let q_range = -8..=12;
    let full = bessel_spectrum(&p, w0, q_range.clone(), SpectrumMode::FullProduct, one)?;
    let single = bessel_spectrum(&p, w0, q_range.clone(), SpectrumMode::SingleBessel, one)?;
    let linear = bessel_spectrum(&p, w0, q_range.clone(), SpectrumMode::Linearized, one)?;
    if let Some(v) = &single.validity {
        println!(
            "reduced-mode validity: tanh(αz/2) = {:.3}, (ω₀/ω_m)·tanh² = {:.3} → {}",
            v.tanh_half,
            v.bandwidth_ratio,
            if v.satisfied { "in regime" } else { "out of regime (reduced forms are rough)" }
        );
    }

    println!("\n  q   full product   single Bessel   linearized");
    let mut rows = Vec::new();
    for ((q, f), ((_, s), (_, l))) in
        full.iter().zip(single.iter().zip(linear.iter()))
    {
        println!("{q:3}   {:+12.5}   {:+13.5}   {:+10.5}", f.re, s.re, l.re);
        rows.push(vec![q as f64, f.re, f.im, s.re, l.re]);
    }
    let out = std::path::Path::new("out/bessel_sidebands");
    std::fs::create_dir_all(out)?;
    write_csv(
        out.join("sidebands.csv"),
        &["q", "full_re", "full_im", "single_bessel_re", "linearized_re"],
        rows.into_iter(),
    )?;
    println!("\nwrote {}", out.join("sidebands.csv").display());
    Ok(())
}
