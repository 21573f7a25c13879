use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("syntax error at {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown function `{name}` at {pos}")]
    UnknownFunction { name: String, pos: usize },
    #[error("exponent at {pos} is not an integer literal")]
    NonIntegerExponent { pos: usize },
    #[error("parameter `{0}` is not bound")]
    UnboundParameter(String),
    #[error("parameter `{0}` has a non-finite value")]
    NonFiniteParameter(String),
    #[error("division by zero")]
    DivisionByZero,

    #[error("expression is not a sum of monomials in x, 1/x, |x|, sign(x): {0}")]
    NonMonomial(String),
    #[error("operator product has derivative order {0} > 2")]
    OrderOverflow(usize),
    #[error("W1*W2 = {0} is not an even function")]
    EvenProductViolation(String),
    #[error("convention {convention} takes {expected} superpotential(s), got {got}")]
    ConventionArity {
        convention: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("operator product disagrees with the closed form for {0}")]
    ClosedFormMismatch(String),

    #[error("radicand {0} is not positive")]
    RadicandNonpositive(f64),
    #[error("operator is not of the quadratic SU(1,1) form: {0}")]
    NotQuadraticForm(String),
    #[error("outside the domain: {0}")]
    Domain(String),

    #[error("coefficient has a pole at x = 0 (1/x terms need a half-line grid)")]
    PoleInCoefficient,
    #[error("quadrature produced non-finite nodes or weights")]
    QuadratureBreakdown,
    #[error("grid node at x = {0} hits a pole or a kink of a coefficient")]
    PoleOnGrid(f64),
    #[error("contour angle {0} is outside (-pi/4, pi/4)")]
    ThetaOutOfRange(f64),
    #[error("invalid discretization: {0}")]
    InvalidScheme(String),

    #[error("matrix contains non-finite entries")]
    NonFiniteMatrix,
    #[error("QR iteration did not converge: {found} of {dimension} eigenvalues found")]
    NoConvergence { found: usize, dimension: usize },
    #[error("dense eigensolver limited to dimension {limit}, got {dimension}")]
    TooLargeForDense { dimension: usize, limit: usize },
    #[error("need at least {needed} converged eigenvalues, have {have}")]
    InsufficientConverged { needed: usize, have: usize },
    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
