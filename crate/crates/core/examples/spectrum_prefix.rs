//! Build the sorted eigenvalue sequence for a small instance and print the
//! leading runs together with the certified tail bound.

use gevrey::{spectrum, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let params = KernelParams::new(2.0, 1.0, 2.0, 2)?;
    let spec = spectrum::build_spectrum(&params, 50, 1e-10, &Budget::default())?;

    println!(
        "spectrum of alpha={} beta={} p={} d={}",
        params.alpha(),
        params.beta(),
        params.p(),
        params.d()
    );
    println!("{:>12} {:>6} {:>10}", "eigenvalue", "mult", "value");
    for run in spec.runs().iter().take(8) {
        println!(
            "{:>12.6e} {:>6} {:>10.3}",
            run.eigenvalue, run.multiplicity, run.value
        );
    }
    println!(
        "... {} eigenvalues enumerated, horizon {} (all |k|_p^p <= horizon included)",
        spec.enumerated_count(),
        spec.value_horizon()
    );
    println!(
        "partial sum {:.12}, unenumerated tail <= {:.3e}",
        spec.partial_sum(),
        spec.tail_upper()
    );
    Ok(())
}
