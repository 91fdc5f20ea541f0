//! Compensated accumulation.
//!
//! Traces mix magnitudes from above 1e6 down to denormal eigenvalues, so
//! every sum over the spectrum goes through a Neumaier accumulator instead
//! of a bare `+=`.

/// Kahan summation with Neumaier's improvement (handles addends larger than
/// the running sum).
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }

    pub fn sum_iter<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc.value()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_cancelled_small_terms() {
        let mut s = NeumaierSum::new();
        s.add(1.0);
        s.add(1e100);
        s.add(1.0);
        s.add(-1e100);
        assert_eq!(s.value(), 2.0);
    }

    #[test]
    fn matches_exact_sum_on_geometric_series() {
        let terms: Vec<f64> = (0..200).map(|i| 0.5f64.powi(i)).collect();
        let got = NeumaierSum::sum_iter(terms.iter().copied());
        assert!((got - 2.0).abs() < 1e-15);
    }
}
