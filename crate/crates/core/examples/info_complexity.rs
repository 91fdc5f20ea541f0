//! Certified information complexity under both criteria.
//!
//! Decisions compare error enclosures against the threshold; a result is
//! certified only when n qualifies provably and n-1 provably does not. The
//! normalized criterion can never beat the absolute one.

use gevrey::complexity::{info_complexity, ComplexityQuery, Criterion, Setting};
use gevrey::{complexity, Budget, KernelParams};

fn main() -> Result<(), gevrey::Error> {
    let params = KernelParams::new(1.0, 0.5, 1.0, 2)?;
    let budget = Budget::default();

    println!("{:>6} {:>10} {:>10} {:>10}", "eps", "worst", "avg ABS", "avg NOR");
    for eps in [0.7, 0.5, 0.3, 0.1, 0.05] {
        let wor = info_complexity(
            &ComplexityQuery::new(params, eps, Setting::Worst, Criterion::Abs)?,
            &budget,
        )?;
        let abs = info_complexity(
            &ComplexityQuery::new(params, eps, Setting::Average, Criterion::Abs)?,
            &budget,
        )?;
        let nor = info_complexity(
            &ComplexityQuery::new(params, eps, Setting::Average, Criterion::Nor)?,
            &budget,
        )?;
        assert!(wor.certified && abs.certified && nor.certified);
        assert!(nor.n <= abs.n);
        println!("{eps:>6} {:>10} {:>10} {:>10}", wor.n, abs.n, nor.n);
    }

    // the worst-case count has a second, purely counting-based route
    let eps = 0.2;
    let by_count = complexity::wor_complexity_via_count(&params, eps, &budget)?;
    let by_spectrum = info_complexity(
        &ComplexityQuery::new(params, eps, Setting::Worst, Criterion::Abs)?,
        &budget,
    )?;
    println!("\nworst-case routes at eps={eps}: spectrum {} == count {by_count}", by_spectrum.n);
    assert_eq!(by_spectrum.n, by_count);

    // lower bound for the normalized criterion
    let bound = complexity::nor_lower_bound(&params, 0.5, &budget)?;
    println!("NOR lower bound (1 - 1/4) Lambda_d = {bound:.4}");
    Ok(())
}
