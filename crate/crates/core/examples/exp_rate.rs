//! Fitting the exponential-convergence exponent alpha/d.
//!
//! ln ln(1/e(n, d)) is asymptotically linear in ln n with slope alpha/d;
//! in dimension one the relation is exact on even n, so the residual
//! collapses to rounding noise.

use gevrey::complexity::Setting;
use gevrey::tractability::exp_rate_fit;
use gevrey::{Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let grid: Vec<u128> = (1..=40).map(|i| 20 + 10 * i).map(|n| n & !1).collect();
    println!("{:>6} {:>3} {:>10} {:>12} {:>10}", "alpha", "d", "alpha/d", "fitted", "residual");
    for (alpha, beta, p, d) in [
        (1.0, 0.5, 1.0, 1usize),
        (1.5, 0.02, 1.0, 1),
        (2.0, 5e-4, 1.0, 1),
        (2.0, 1.0, 2.0, 2),
    ] {
        let params = KernelParams::new(alpha, beta, p, d)?;
        let usable: Vec<u128> = grid.iter().copied().filter(|&n| n >= 1 << d).collect();
        let fit = exp_rate_fit(&params, Setting::Worst, &usable, &Budget::default())?;
        println!(
            "{alpha:>6} {d:>3} {:>10.4} {:>12.6} {:>10.2e}",
            alpha / d as f64,
            fit.fitted_exponent,
            fit.fit_residual
        );
    }
    Ok(())
}
