//! Error type shared by all modules.
//!
//! Errors split into two classes: *validation* (the input violates a
//! precondition — broken divisibility chain, out-of-range coefficient,
//! malformed rational, …) and *resource* (the input is valid but the requested
//! computation exceeded its enumeration budget or could not be certified at
//! working precision). [`Error::is_resource`] distinguishes them so callers —
//! in particular the CLI exit-code mapping — never have to match on variants.

use thiserror::Error;

/// Everything that can go wrong in this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// `ell` must have exactly `d` entries.
    #[error("expected {expected} lattice divisors for d = {expected}, got {got}")]
    EllLength { expected: usize, got: usize },

    /// Divisors must be positive integers.
    #[error("lattice divisors must be positive, found 0 at position {index}")]
    EllZero { index: usize },

    /// The chain `ell_1 | ell_2 | … | ell_d` is broken.
    #[error("broken divisibility chain: ell[{left}] = {left_value} does not divide ell[{right}] = {right_value}")]
    Divisibility {
        left: usize,
        left_value: u64,
        right: usize,
        right_value: u64,
    },

    /// A quantity that must be strictly positive was not.
    #[error("{what} must be strictly positive")]
    NonPositive { what: &'static str },

    /// A quantity that must be finite (no NaN/infinity) was not.
    #[error("{what} must be finite")]
    NonFinite { what: &'static str },

    /// The spectral coefficient is outside the closed interval `[-d, d]`.
    #[error("alpha = {alpha} lies outside [-{d}, {d}]")]
    AlphaRange { alpha: String, d: u32 },

    /// `n = 0` does not index a type (a) eigenvalue.
    #[error("the type (a) family is indexed by nonzero n")]
    ZeroCenterIndex,

    /// Form bidegree outside the admissible box.
    #[error("form degree (p = {p}, q = {q}) is not admissible for d = {d}: need 0 <= p <= d, 0 < q < d, d >= 2")]
    FormDegree { p: u32, q: u32, d: u32 },

    /// Lattice dimension disagrees with the ambient `2d`.
    #[error("lattice dimension {got} does not match 2d = {expected}")]
    LatticeDimension { expected: usize, got: usize },

    /// Heat times below this floor are numerically meaningless here.
    #[error("t = {t:e} is below the minimum supported heat time 1e-8")]
    TimeTooSmall { t: f64 },

    /// Relative tolerances must be meaningful: strictly positive, below 1/2.
    #[error("tolerance {tol:e} lies outside the supported range (0, 0.5)")]
    TolRange { tol: f64 },

    /// A grid that must be nonempty, positive and strictly ascending was not.
    #[error("{what} must be a nonempty, positive, strictly ascending list")]
    BadGrid { what: &'static str },

    /// Cannot parse a rational literal.
    #[error("cannot parse {input:?} as a rational number (expected \"num\" or \"num/den\")")]
    RationalParse { input: String },

    /// Enumeration/series work exceeded the caller-supplied budget.
    #[error("computation exceeded the budget of {budget} enumeration steps; raise --budget or lower the threshold")]
    BudgetExceeded { budget: u64 },

    /// Adaptive quadrature could not certify the requested tolerance.
    #[error("quadrature error {achieved:e} did not reach the requested tolerance {requested:e}")]
    QuadratureTolerance { requested: f64, achieved: f64 },

    /// A float threshold landed too close to a spectral value to decide the
    /// comparison at the working precision of the π enclosure.
    #[error("threshold is too close to a spectral value to decide at working precision; pass an exact threshold in spectral units instead")]
    ThresholdPrecision,
}

impl Error {
    /// `true` for errors of the resource class (budget/precision exhaustion on
    /// otherwise valid input), `false` for validation errors.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::BudgetExceeded { .. }
                | Error::QuadratureTolerance { .. }
                | Error::ThresholdPrecision
        )
    }
}
