//! Matrix realizations of differential operators: harmonic-oscillator basis
//! projection and finite differences on real or complex contours.

mod fd;
mod ho;
mod quadrature;

use std::f64::consts::FRAC_PI_4;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{BandMatrix, Matrix};
use crate::operator::DiffOperator;
use crate::scalar::Real;

pub use fd::fd_matrix;
pub use ho::{ho_matrix, sign_matrix_exact};
pub use quadrature::{gauss_hermite_nodes, sign_matrix_quadrature};

/// How the matrix of `sign(x)` is obtained in the oscillator basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SignMethod {
    /// Closed-form Wronskian expression at the origin.
    #[default]
    Exact,
    /// Gauss–Hermite quadrature with `2 n_build` nodes.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Full,
    Half,
}

/// Path in the complex `x` plane parametrized by the real grid variable `u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Contour {
    /// `x = exp(i theta) u`.
    #[default]
    Straight,
    /// `x = u + i tan(theta) sqrt(u^2 + 1)`: arg x tends to `theta` as
    /// `u -> +inf` and to `pi - theta` as `u -> -inf`.
    PtSymmetric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum Scheme {
    OscillatorBasis {
        n_keep: usize,
        n_build: usize,
        omega: f64,
        #[serde(default)]
        sign_method: SignMethod,
    },
    FiniteDifference {
        x_min: f64,
        x_max: f64,
        points: usize,
        theta: f64,
        domain: Domain,
        #[serde(default)]
        contour: Contour,
    },
}

impl Scheme {
    /// Oscillator basis with `n_build = 2 n_keep`.
    pub fn oscillator(n_keep: usize, omega: f64) -> Self {
        Scheme::OscillatorBasis {
            n_keep,
            n_build: 2 * n_keep,
            omega,
            sign_method: SignMethod::Exact,
        }
    }

    /// Real-axis grid on `[x_min, x_max]`.
    pub fn grid(x_min: f64, x_max: f64, points: usize, domain: Domain) -> Self {
        Scheme::FiniteDifference {
            x_min,
            x_max,
            points,
            theta: 0.0,
            domain,
            contour: Contour::Straight,
        }
    }

    /// Grid on a complex contour.
    pub fn contour(u_max: f64, points: usize, theta: f64, contour: Contour) -> Self {
        Scheme::FiniteDifference {
            x_min: -u_max,
            x_max: u_max,
            points,
            theta,
            domain: Domain::Full,
            contour,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            Scheme::OscillatorBasis { n_keep, .. } => *n_keep,
            Scheme::FiniteDifference { points, .. } => *points,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Scheme::OscillatorBasis {
                n_keep,
                n_build,
                omega,
                ..
            } => {
                if n_keep == 0 || n_build < 2 * n_keep {
                    return Err(Error::InvalidScheme(format!(
                        "need n_keep > 0 and n_build >= 2 n_keep, got {n_keep} and {n_build}"
                    )));
                }
                if !(omega > 0.0) || !omega.is_finite() {
                    return Err(Error::InvalidScheme(format!(
                        "omega must be positive, got {omega}"
                    )));
                }
            }
            Scheme::FiniteDifference {
                x_min,
                x_max,
                points,
                theta,
                domain,
                ..
            } => {
                if points < 3 {
                    return Err(Error::InvalidScheme(format!(
                        "need at least 3 points, got {points}"
                    )));
                }
                if !(x_max > x_min) || !x_min.is_finite() || !x_max.is_finite() {
                    return Err(Error::InvalidScheme(format!(
                        "bad interval [{x_min}, {x_max}]"
                    )));
                }
                if domain == Domain::Half && !(x_min > 0.0) {
                    return Err(Error::InvalidScheme(format!(
                        "half-line grid needs x_min > 0, got {x_min}"
                    )));
                }
                if !(theta.abs() < FRAC_PI_4) {
                    return Err(Error::ThetaOutOfRange(theta));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scheme::OscillatorBasis {
                n_keep,
                n_build,
                omega,
                sign_method,
            } => {
                write!(f, "ho(n_keep={n_keep}, n_build={n_build}, omega={omega}")?;
                if *sign_method == SignMethod::Quadrature {
                    write!(f, ", sign=quadrature")?;
                }
                write!(f, ")")
            }
            Scheme::FiniteDifference {
                x_min,
                x_max,
                points,
                theta,
                domain,
                contour,
            } => {
                let dom = match domain {
                    Domain::Full => "full",
                    Domain::Half => "half",
                };
                write!(f, "fd([{x_min}, {x_max}], points={points}, {dom}")?;
                if *theta != 0.0 {
                    let kind = match contour {
                        Contour::Straight => "rotated",
                        Contour::PtSymmetric => "pt_contour",
                    };
                    write!(f, ", {kind} theta={theta}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Storage of a discretized operator.
#[derive(Debug, Clone)]
pub enum MatrixData<T: Real = f64> {
    Dense(Matrix<T>),
    Band(BandMatrix<T>),
}

/// A discretized operator together with the scheme that produced it.
#[derive(Debug, Clone)]
pub struct OperatorMatrix<T: Real = f64> {
    pub data: MatrixData<T>,
    pub scheme: Scheme,
    pub provenance: String,
}

impl<T: Real> OperatorMatrix<T> {
    pub fn dim(&self) -> usize {
        match &self.data {
            MatrixData::Dense(m) => m.rows(),
            MatrixData::Band(b) => b.dim(),
        }
    }

    pub fn to_dense(&self) -> Matrix<T> {
        match &self.data {
            MatrixData::Dense(m) => m.clone(),
            MatrixData::Band(b) => b.to_dense(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match &self.data {
            MatrixData::Dense(m) => m.is_finite(),
            MatrixData::Band(b) => b.is_finite(),
        }
    }

    /// `||M - M^H|| / ||M||` in the Frobenius norm.
    pub fn hermiticity_defect(&self) -> f64 {
        let m = self.to_dense();
        let nrm = m.norm_fro().as_f64();
        if nrm == 0.0 {
            return 0.0;
        }
        m.sub(&m.adjoint()).norm_fro().as_f64() / nrm
    }
}

/// Discretizes with whichever scheme is given.
pub fn discretize<T: Real>(h: &DiffOperator<T>, scheme: &Scheme) -> Result<OperatorMatrix<T>> {
    scheme.validate()?;
    let data = match *scheme {
        Scheme::OscillatorBasis {
            n_keep,
            n_build,
            omega,
            sign_method,
        } => MatrixData::Dense(ho_matrix(h, n_keep, n_build, omega, sign_method)?),
        Scheme::FiniteDifference {
            x_min,
            x_max,
            points,
            theta,
            domain,
            contour,
        } => MatrixData::Band(fd_matrix(h, x_min, x_max, points, theta, domain, contour)?),
    };
    let out = OperatorMatrix {
        data,
        scheme: scheme.clone(),
        provenance: h.to_string(),
    };
    if !out.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    Ok(out)
}
