//! Certified upper bounds on unenumerated eigenvalue mass.
//!
//! After all classes with value `v = sum |k_i|^p <= V` have been emitted,
//! the remaining mass `sum of lambda over v > V` is bounded by the minimum
//! of two rigorous majorants:
//!
//! * **Shell majorant.** Every point with `|k|_inf = r` has
//!   `lambda <= exp(-2 beta r^alpha)`. Shells with `r > floor(V^(1/p))`
//!   contain no enumerated point and are charged wholesale; shells at or
//!   below that radius are only partially enumerated, so the tracker keeps
//!   the enumerated count per shell and charges the difference. The infinite
//!   shell sum is truncated with a telescoped dyadic-block remainder whose
//!   geometric-decay condition is checked, not assumed, so it terminates for
//!   every `alpha > 0`.
//!
//! * **Chernoff product majorant** (requires `alpha >= p`). For `v >= V`,
//!   `v^(alpha/p) >= V^(alpha/p - 1) v`, so each tail eigenvalue is bounded
//!   by `exp(-c* v)` with `c* = 2 beta V^(alpha/p - 1)`, and for any
//!   `0 < c < c*` the tail is at most `exp(-(c* - c) V) * Abar(c)^d` where
//!   `Abar(c) = 1 + 2 sum exp(-c h^p)` is a one-dimensional series. The
//!   bound is optimized over a fixed grid of `c` values; every grid point is
//!   a valid bound, so taking the minimum is rigorous.
//!
//! All bounds are evaluated in binary64; certification is up to f64
//! rounding, consistent with the rest of the crate.

use std::collections::HashMap;

use crate::kernel::KernelParams;

/// Inflation factor absorbing f64 conversion slop in count arithmetic.
const COUNT_SLOP: f64 = 1.0 + 4e-15;

/// Upper bound for the one-dimensional series `sum_{h>=1} exp(-c h^p)`.
///
/// Explicit summation until the terms are negligible, then a dyadic-block
/// remainder: the block `[a, 2a)` contributes at most `a exp(-c a^p)`, and
/// consecutive block bounds decay by `2 exp(-c a^p (2^p - 1))`, which is
/// checked against 1/2 before the geometric remainder is applied.
pub fn one_dim_series_upper(c: f64, p: f64) -> f64 {
    assert!(c > 0.0 && p > 0.0);
    let mut acc = 0.0;
    let mut h: u64 = 1;
    let explicit_cap = 200_000;
    while h <= explicit_cap {
        let term = (-c * (h as f64).powf(p)).exp();
        acc += term;
        if term <= acc * 1e-18 {
            return acc * (1.0 + 1e-12);
        }
        h += 1;
    }
    // dyadic remainder from h
    let two_p = 2f64.powf(p) - 1.0;
    let mut a = h as f64;
    for _ in 0..300 {
        let block = a * (-c * a.powf(p)).exp();
        if c * a.powf(p) * two_p >= 2.0 * std::f64::consts::LN_2 {
            // provable ratio <= 1/2 from here on
            return (acc + 2.0 * block) * (1.0 + 1e-12);
        }
        acc += block;
        a *= 2.0;
    }
    f64::INFINITY
}

/// `ln((2b+1)^d - (2a-1)^d)`: the number of lattice points with
/// `a <= |k|_inf <= b`, in log space. Requires `a >= 1`.
fn ln_box_difference(a: u64, b: u64, d: usize) -> f64 {
    let hi = 2.0 * b as f64 + 1.0;
    let lo = 2.0 * a as f64 - 1.0;
    let d_f = d as f64;
    let ratio_pow_ln = d_f * (lo / hi).ln();
    let correction = if ratio_pow_ln < -700.0 {
        0.0
    } else {
        (-ratio_pow_ln.exp()).ln_1p()
    };
    d_f * hi.ln() + correction
}

/// Tracks enumeration progress and produces certified tail bounds.
pub struct TailTracker {
    alpha: f64,
    beta: f64,
    p: f64,
    d: usize,
    /// enumerated point count per l_infinity shell radius (f64 accumulation)
    per_shell: Vec<f64>,
    abar_memo: HashMap<u64, f64>,
}

impl TailTracker {
    pub fn new(params: &KernelParams) -> Self {
        TailTracker {
            alpha: params.alpha(),
            beta: params.beta(),
            p: params.p(),
            d: params.d(),
            per_shell: vec![0.0],
            abar_memo: HashMap::new(),
        }
    }

    /// Records one emitted class (multiplicity as f64; rounding is absorbed
    /// by `COUNT_SLOP` on the other side of the subtraction).
    pub fn record(&mut self, top_magnitude: u64, multiplicity: f64) {
        let r = top_magnitude as usize;
        if r >= self.per_shell.len() {
            self.per_shell.resize(r + 1, 0.0);
        }
        self.per_shell[r] += multiplicity;
    }

    /// Certified upper bound on `sum lambda` over all lattice points with
    /// value strictly above `horizon` (all classes with value <= horizon
    /// must already be recorded).
    pub fn tail_upper(&mut self, horizon: f64) -> f64 {
        let shell = self.shell_bound(horizon);
        let chernoff = self.chernoff_bound(horizon);
        shell.min(chernoff)
    }

    fn lambda_cap(&self, r: f64) -> f64 {
        (-2.0 * self.beta * r.powf(self.alpha)).exp()
    }

    fn shell_bound(&self, horizon: f64) -> f64 {
        let d = self.d as f64;
        // largest magnitude any class with value <= horizon can contain
        let r_edge = (horizon * (1.0 + crate::lattice::VALUE_EPS)).powf(1.0 / self.p);
        let r_edge = if r_edge >= u64::MAX as f64 {
            return f64::INFINITY;
        } else {
            r_edge.floor() as u64
        };

        let mut acc = 0.0;
        // partially covered shells: charge the not-yet-enumerated points
        for r in 1..=r_edge {
            let ln_shell = ln_box_difference(r, r, self.d);
            if ln_shell > 700.0 {
                return f64::INFINITY;
            }
            let shell_total = ln_shell.exp() * COUNT_SLOP;
            let enumerated = self
                .per_shell
                .get(r as usize)
                .copied()
                .unwrap_or(0.0);
            let unenumerated = (shell_total - enumerated).max(0.0);
            acc += unenumerated * self.lambda_cap(r as f64);
        }
        // fully uncovered shells, explicit part
        let mut r = r_edge + 1;
        loop {
            let term_ln = ln_box_difference(r, r, self.d) - 2.0 * self.beta * (r as f64).powf(self.alpha);
            if term_ln > 700.0 {
                return f64::INFINITY;
            }
            let term = term_ln.exp();
            acc += term;
            if term <= acc.max(f64::MIN_POSITIVE) * 1e-18 || r > r_edge + 2_000_000 {
                r += 1;
                break;
            }
            r += 1;
        }
        // dyadic-block remainder: block [a, 2a) holds
        // (4a+1)^d - (2a-1)^d points, each with lambda <= cap(a); consecutive
        // block bounds shrink by at least 2^(d+1) exp(-2 beta a^alpha (2^alpha - 1)),
        // so once that factor is <= 1/2 the remainder is two more blocks.
        let two_alpha = 2f64.powf(self.alpha) - 1.0;
        let mut a = r;
        for _ in 0..300 {
            let block_ln =
                ln_box_difference(a, 2 * a - 1, self.d) - 2.0 * self.beta * (a as f64).powf(self.alpha);
            if block_ln > 700.0 {
                return f64::INFINITY;
            }
            let block = block_ln.exp();
            if 2.0 * self.beta * (a as f64).powf(self.alpha) * two_alpha
                >= (d + 2.0) * std::f64::consts::LN_2
            {
                return (acc + 2.0 * block) * (1.0 + 1e-12);
            }
            acc += block;
            match a.checked_mul(2) {
                Some(next) => a = next,
                None => return f64::INFINITY,
            }
        }
        f64::INFINITY
    }

    /// Chernoff majorant alone; cheap to evaluate at hypothetical horizons
    /// (no per-shell scan), used for feasibility projection.
    pub(crate) fn chernoff_bound(&mut self, horizon: f64) -> f64 {
        if self.alpha < self.p || horizon <= 0.0 {
            return f64::INFINITY;
        }
        let theta = self.alpha / self.p;
        let c_star = 2.0 * self.beta * horizon.powf(theta - 1.0);
        let mut best = f64::INFINITY;
        for i in 1..20 {
            let c = c_star * (i as f64) / 20.0;
            let series = match self.abar_memo.get(&c.to_bits()) {
                Some(&s) => s,
                None => {
                    let s = one_dim_series_upper(c, self.p);
                    self.abar_memo.insert(c.to_bits(), s);
                    s
                }
            };
            let ln_bound = -(c_star - c) * horizon + self.d as f64 * (2.0 * series).ln_1p();
            if ln_bound < 700.0 {
                best = best.min(ln_bound.exp());
            }
        }
        best * (1.0 + 1e-12)
    }
}
