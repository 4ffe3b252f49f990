//! The dispersionless beat conserves the pulse area, the photon number,
//! the duration × mean-frequency product, and the number of optical
//! oscillations, while the energy and the peak amplitude grow.

use raman_beat::analytic::{conservation_report, propagate_dispersionless, BeatParameters};
use raman_beat::core::{Frequency, SampledField, TimeGrid, WidthConvention};

fn main() -> raman_beat::Result<()> {
    let omega_m = 7.8165889e14;
    let tm = 2.0 * std::f64::consts::PI / omega_m;
    let w0 = Frequency::from_rad_per_s(5.2 * omega_m)?;
    let grid = TimeGrid::centered(64.0 * tm, 1 << 16)?;
    let input = SampledField::gaussian(
        grid,
        w0,
        0.0,
        10.0 * tm,
        WidthConvention::IntensityFwhm,
        1.0,
        0.0,
    )?;

    for alpha_z in [0.3, 0.6, 1.0, 1.4] {
        let p = BeatParameters::bare(alpha_z, omega_m, 20e-6)?;
        let output = propagate_dispersionless(&input, &p)?;
        let r = conservation_report(&input, &output, w0, &p)?;
        println!("αz = {alpha_z}");
        println!("  photons  in {:.6e}  out {:.6e}  (rel err {:.1e})",
            r.photons_in, r.photons_out, r.photon_error());
        println!("  ω̄·Δη    in {:.6e}  out {:.6e}  (rel err {:.1e})",
            r.product_in, r.product_out, r.product_error());
        println!("  area     in {:+.3e}  out {:+.3e}  (err/scale {:.1e})",
            r.area_in, r.area_out, r.area_error());
        println!("  oscillations in {}  out {}  | energy gain {:.3}",
            r.oscillation_count_in(), r.oscillation_count_out(),
            output.energy_integral() / input.energy_integral());
    }
    Ok(())
}
