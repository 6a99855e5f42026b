//! Partial sums of `Σ ρⁿ Heₙ(x)Heₙ(y)/n!` against the Mehler kernel.

use gafheat::heatflow::mehler_check;
use gafheat::C64;

fn main() {
    let (x, y) = (C64::new(0.8, 0.0), C64::new(-1.1, 0.3));
    let rho = C64::from_polar(0.6, 0.4);
    println!("{:>6}  {:>12}", "terms", "rel. error");
    for n in [5, 10, 20, 40, 80, 160] {
        let (sum, closed) = mehler_check(x, y, rho, n);
        println!("{n:>6}  {:>12.3e}", (sum - closed).norm() / closed.norm());
    }
}
