use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("modulus must satisfy Im(tau) > 0, got tau = {0}")]
    InvalidModulus(crate::C64),
    #[error("theta series does not converge: |nome| = {0} too close to 1")]
    NonConvergent(f64),
    #[error("derivative order {0} exceeds the supported maximum {1}")]
    DerivOrderTooHigh(usize, usize),
    #[error("argument reduces to a lattice point (pole)")]
    PoleArgument,
    #[error("argument lies on the zero set of sigma (branch point of log)")]
    BranchPoint,
    #[error("Eisenstein series of odd weight {0} requested")]
    OddWeight(u32),
    #[error("Eisenstein weight {0} outside supported range 2..=30")]
    WeightOutOfRange(u32),
    #[error("coefficient vector too short: index {0} requested, length {1}")]
    IndexOutOfRange(usize, usize),
    #[error("invalid Bell order: k = {k} exceeds n = {n}")]
    InvalidOrder { n: usize, k: usize },
    #[error("leading coefficient x_1 must be nonzero")]
    ZeroLeadingCoefficient,
    #[error("R_{{mu,k}} undefined for mu = k - 1 (mu = {0}, k = {1})")]
    ForbiddenOrder(usize, usize),
    #[error("Gram matrix singular or ill-conditioned (cond ~ {0:.3e})")]
    SingularGram(f64),
    #[error("degenerate modulus: |1 + q tau| < 1e-12")]
    DegenerateModulus,
    #[error("invalid Hurwitz point: {0}")]
    InvalidPoint(String),
}

pub type Result<T> = std::result::Result<T, Error>;
