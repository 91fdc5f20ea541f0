//! Tractability truth tables for a smooth and a rough parameter pair.
//!
//! The decisive quantity is alpha versus p: strict smoothness surplus
//! (alpha > p) buys uniform weak tractability in the average case, while
//! alpha <= p brings the curse of dimensionality.

use gevrey::complexity::{Criterion, Setting};
use gevrey::tractability::classify;

fn main() -> Result<(), gevrey::Error> {
    for (alpha, p) in [(2.0, 1.0), (1.0, 2.0), (1.5, 1.5)] {
        let profile = classify(alpha, 1.0, p, Setting::Average, Criterion::Nor)?;
        println!("{}", profile.report());
        // the (s,t) family as a predicate
        for (s, t) in [(0.5, 1.5), (0.5, 1.0), (1.2, 0.8)] {
            let alg = profile.alg_st_wt(s, t)?;
            let exp = profile.exp_st_wt(s, t)?;
            println!(
                "  ALG-({s},{t})-WT: {:<5}  EXP-({s},{t})-WT: {}",
                alg.holds, exp.holds
            );
        }
        println!();
    }

    // the settings genuinely differ at the boundary alpha = p
    let worst = classify(1.5, 1.0, 1.5, Setting::Worst, Criterion::Abs)?;
    let avg = classify(1.5, 1.0, 1.5, Setting::Average, Criterion::Abs)?;
    println!(
        "boundary alpha = p: worst-case ALG-QPT = {}, average-case ALG-UWT = {}",
        worst.alg_qpt.holds, avg.alg_uwt.holds
    );
    Ok(())
}
