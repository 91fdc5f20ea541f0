//! Trace enclosures versus the factorized closed form.
//!
//! At alpha = p the eigenvalues factor over coordinates, so the trace
//! equals (1 + 2 sum_h exp(-2 beta h^p))^d. The enclosure below comes from
//! explicit enumeration plus a certified tail bound; containing the
//! independently summed power is a strong end-to-end check.

use gevrey::{spectrum, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let (beta, p) = (1.0, 2.0);
    let one_dim: f64 = 1.0
        + 2.0 * (1..100).map(|h| (-2.0 * beta * ((h * h) as f64)).exp()).sum::<f64>();

    println!("alpha = p = {p}, beta = {beta}");
    println!("{:>3} {:>22} {:>22} {:>14}", "d", "enclosure lower", "upper", "A^d");
    for d in [1usize, 2, 5, 10, 20] {
        let params = KernelParams::new(p, beta, p, d)?;
        let t = spectrum::trace(&params, 1e-10, &Budget::default())?;
        let a_d = one_dim.powi(d as i32);
        assert!(t.contains(a_d));
        println!("{d:>3} {:>22.15} {:>22.15} {a_d:>14.8}", t.lower, t.upper);
    }

    // power traces reduce to traces of a rescaled kernel
    let params = KernelParams::new(p, beta, p, 3)?;
    let pt = spectrum::power_trace(&params, 0.5, 1e-10, &Budget::default())?;
    let tr = spectrum::trace(&params.with_beta(0.5 * beta)?, 1e-10, &Budget::default())?;
    println!(
        "\npower trace tau=0.5 d=3: [{:.12}, {:.12}]",
        pt.lower, pt.upper
    );
    println!("trace at beta/2        : [{:.12}, {:.12}]", tr.lower, tr.upper);
    Ok(())
}
