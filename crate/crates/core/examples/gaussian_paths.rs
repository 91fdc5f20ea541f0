//! Drawing random functions from the Gaussian measure.
//!
//! A path is a finite random Fourier series with conjugate-symmetric
//! coefficients: E |a_k|^2 equals the eigenvalue of k. Truncating to the n
//! largest-eigenvalue modes is the optimal rank-n approximation, and the
//! residual norm comes from Parseval without any quadrature.

use gevrey::{sampler, spectrum, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let params = KernelParams::new(2.0, 1.0, 2.0, 2)?;
    let budget = Budget::default();
    let path = sampler::sample_path(&params, 1e-8, 42, &budget)?;
    println!(
        "path with {} modes, excluded tail <= {:.2e}",
        path.modes().len(),
        path.excluded_tail()
    );
    println!(
        "||f||^2 = {:.6} for this draw (the mean over draws is the trace)",
        path.squared_norm()
    );

    // pointwise evaluation is real and periodic
    let x = [1.0, 2.0];
    let shifted = [1.0 + 2.0 * std::f64::consts::PI, 2.0];
    println!(
        "f(x) = {:.6}, f(x + 2 pi e_1) = {:.6}",
        path.evaluate(&x)?,
        path.evaluate(&shifted)?
    );

    // residuals of the optimal truncations shrink monotonically
    let spec = spectrum::build_spectrum(&params, path.modes().len() as u128, 0.5, &budget)?;
    println!("{:>4} {:>14}", "n", "residual^2");
    for n in [0u128, 1, 5, 9, 13, 21] {
        let truncated = path.truncate_to(&spec, n)?;
        let residual = path.squared_norm() - truncated.squared_norm();
        println!("{n:>4} {residual:>14.6e}");
    }
    Ok(())
}
