//! Exact spectral analysis of multivariate L2-approximation with periodic
//! Gevrey covariance kernels.
//!
//! The kernel on the d-torus is the stationary series
//!
//! ```text
//! K(x, y) = sum over k in Z^d of exp(-2 beta |k|_p^alpha) * exp(i k (x - y))
//! ```
//!
//! so the covariance operator's eigenvalues are the nonincreasing
//! rearrangement of `exp(-2 beta |k|_p^alpha)` over the integer lattice.
//! Everything this crate computes flows from that sequence:
//!
//! * [`lattice`] enumerates lattice points grouped into equivalence classes
//!   of equal `|k|_p^p` value, in ascending value order, with exact
//!   multiplicities.
//! * [`spectrum`] turns the class stream into the sorted eigenvalue sequence
//!   with a certified upper bound on the unenumerated tail, plus trace and
//!   power-trace enclosures.
//! * [`complexity`] evaluates the n-th minimal errors in the worst and
//!   average case settings and the information complexity `n(eps, d)` under
//!   the absolute and normalized error criteria, with certified decisions.
//! * [`tractability`] encodes the known tractability truth tables for this
//!   kernel family and provides empirical growth scans, exponential-rate
//!   fits, and a power-trace diagnostic.
//! * [`sampler`] draws truncated random Fourier paths from the underlying
//!   Gaussian measure and Monte Carlo-validates the average-case error
//!   formula.
//!
//! The `gevrey` binary exposes each computation as a subcommand with CSV or
//! JSON output; the crate's `examples/` directory is the guided tour.

pub mod accum;
pub mod bounds;
pub mod cli;
pub mod complexity;
pub mod error;
pub mod kernel;
pub mod lattice;
pub mod output;
pub mod sampler;
pub mod spectrum;
pub mod tractability;

pub use complexity::{ComplexityQuery, ComplexityResult, Criterion, Setting};
pub use error::Error;
pub use kernel::{KernelParams, LatticePoint};
pub use lattice::LevelClass;
pub use spectrum::{Enclosure, Spectrum};
pub use tractability::TractabilityProfile;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Resource limits for lattice enumeration.
///
/// Enumeration cost grows combinatorially with dimension and with the value
/// horizon, so every operation that walks the class stream takes an explicit
/// budget. The class cap is deterministic; the optional time cap trades
/// reproducibility of *failures* for a hard stop and is therefore off by
/// default in library use.
#[derive(Debug, Clone, Copy)]
pub struct Budget {
    /// Maximum number of level classes to enumerate.
    pub max_classes: u64,
    /// Optional soft wall-clock cap.
    pub time_cap: Option<std::time::Duration>,
}

impl Budget {
    pub const DEFAULT_MAX_CLASSES: u64 = 1_000_000;

    pub fn classes(max_classes: u64) -> Self {
        Budget {
            max_classes,
            time_cap: None,
        }
    }

    pub fn with_time_cap(mut self, cap: std::time::Duration) -> Self {
        self.time_cap = Some(cap);
        self
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::classes(Self::DEFAULT_MAX_CLASSES)
    }
}
