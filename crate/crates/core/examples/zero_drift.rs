//! Condition a GAF to vanish at `a` and follow that zero to time `τ`: it lands
//! near `a + τā`, and the residual has the same law for every anchor.

use gafheat::gaf::residual_experiment;
use gafheat::stats::two_sample_energy;
use gafheat::C64;

fn main() -> gafheat::Result<()> {
    let tau = 0.3;
    let trials = 400;
    let base = residual_experiment(C64::new(0.0, 0.0), tau, trials, 100, 7)?;
    println!("{:>10} {:>10} {:>22} {:>8}", "anchor", "aborted", "mean residual", "p");
    for (k, a) in [C64::new(0.0, 0.0), C64::new(2.0, 0.0), C64::new(0.0, 2.0), C64::new(3.0, 1.0)]
        .into_iter()
        .enumerate()
    {
        let r = residual_experiment(a, tau, trials, 100, 7)?;
        let mean = r.residuals.iter().sum::<C64>() / r.residuals.len() as f64;
        let p = if k == 0 {
            String::from("-")
        } else {
            format!("{:.3}", two_sample_energy(&r.residuals, &base.residuals, 300, k as u64)?.p_value)
        };
        println!("{a:>10} {:>10} {mean:>22.4} {p:>8}", r.aborted());
    }
    Ok(())
}
