//! Lattice-point counting and the class stream.
//!
//! Classes group lattice points by their magnitude multiset; multiplicities
//! are exact integers, so ball counts are exact however large they get.

use gevrey::{lattice, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    // the first few classes of Z^3 under the l1 ball
    let list = lattice::enumerate_classes(3, 1.0, 3.0, None, &Budget::default())?;
    println!("{:>22} {:>8} {:>6}", "magnitudes", "value", "mult");
    for class in &list.classes {
        println!(
            "{:>22} {:>8} {:>6}",
            format!("{:?}", class.runs()),
            class.value(),
            class.multiplicity(3)?
        );
    }

    // exact counts grow fast with dimension but stay exact
    println!("\npoints with sum |k_i| <= 6:");
    for d in [2usize, 4, 8, 16, 32] {
        println!("  d = {d:>2}: {}", lattice::grid_count(6.0, d, 1.0, &Budget::default())?);
    }

    // kernel values pair with the same enumeration
    let params = KernelParams::new(1.0, 0.5, 1.0, 2)?;
    let x = [std::f64::consts::PI, 0.0];
    let y = [0.0, 0.0];
    let k = gevrey::kernel::kernel_value(&params, &x, &y, 1e-10, &Budget::default())?;
    println!("\nK(x, y) = {:.12} (excluded tail <= {:.1e})", k.value, k.tail_bound);
    Ok(())
}
