//! Minimal-error decay in both settings.
//!
//! The worst-case error is the square root of the (n+1)-st eigenvalue; the
//! average-case error is the square root of the eigenvalue tail sum. Both
//! fall super-exponentially in n for fixed d.

use gevrey::{complexity, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let params = KernelParams::new(2.0, 1.0, 2.0, 2)?;
    let budget = Budget::default();
    println!("{:>5} {:>14} {:>14} {:>14}", "n", "e_wor", "e_avg_lo", "e_avg_hi");
    for n in [0u128, 1, 2, 5, 10, 20, 50, 100, 200] {
        let wor = complexity::wor_error(&params, n, &budget)?;
        let avg = complexity::avg_error(&params, n, &budget)?;
        println!("{n:>5} {wor:>14.6e} {:>14.6e} {:>14.6e}", avg.lower, avg.upper);
    }
    Ok(())
}
