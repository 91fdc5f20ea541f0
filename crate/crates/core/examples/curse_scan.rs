//! Empirical complexity growth across dimensions: evidence for the curse
//! at alpha <= p and for its absence at alpha > p.
//!
//! At alpha = p = 1 the trace grows like A^d with A = 1 + 2/(e - 1), and
//! the normalized complexity must track 0.75 A^d from below. With
//! alpha = 2 > p = 1 the growth is visibly subgeometric.

use gevrey::complexity::{Criterion, Setting};
use gevrey::tractability::{scan, ScanSpec};
use gevrey::Budget;

fn main() -> Result<(), gevrey::Error> {
    let a = 1.0 + 2.0 / (std::f64::consts::E - 1.0);
    for (alpha, label) in [(1.0, "alpha = p (curse)"), (2.0, "alpha > p (tractable side)")] {
        let spec = ScanSpec {
            alpha,
            beta: 0.5,
            p: 1.0,
            epsilons: vec![0.5],
            dims: (1..=6).collect(),
            setting: Setting::Average,
            criterion: Criterion::Nor,
            s: 1.0,
            t: 1.0,
        };
        let rows = scan(&spec, &Budget::default(), 2)?;
        println!("{label}:");
        println!(
            "{:>3} {:>10} {:>10} {:>12} {:>12}",
            "d", "n(1/2,d)", "0.75 A^d", "ln n/(2+d)", "ratio"
        );
        let mut prev: Option<u128> = None;
        for row in &rows {
            let r = row.result.expect("cells certify at this scale");
            let ratio = prev.map_or(f64::NAN, |p| r.n as f64 / p as f64);
            println!(
                "{:>3} {:>10} {:>10.1} {:>12.4} {:>12.3}",
                row.d,
                r.n,
                0.75 * a.powi(row.d as i32),
                row.alg_ratio.unwrap_or(f64::NAN),
                ratio
            );
            prev = Some(r.n);
        }
        println!();
    }
    Ok(())
}
