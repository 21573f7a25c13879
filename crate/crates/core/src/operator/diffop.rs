use std::fmt;

use num_complex::Complex;
use serde::Serialize;

use super::coeff::{join_terms, CoeffFn};
use crate::error::{Error, Result};
use crate::expr::{parse, ParamEnv};
use crate::scalar::Real;

/// `sum_m f_m(x) D^m` with `m <= 2`, coefficients to the left.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffOperator<T: Real = f64> {
    coeffs: [CoeffFn<T>; 3],
}

impl<T: Real> Default for DiffOperator<T> {
    fn default() -> Self {
        DiffOperator {
            coeffs: [CoeffFn::zero(), CoeffFn::zero(), CoeffFn::zero()],
        }
    }
}

/// Symmetry of an operator on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Symmetry {
    pub hermitian: bool,
    pub pt_symmetric: bool,
}

impl Symmetry {
    /// Single label, preferring `hermitian` when both hold.
    pub fn tag(&self) -> &'static str {
        if self.hermitian {
            "hermitian"
        } else if self.pt_symmetric {
            "pt_symmetric"
        } else {
            "neither"
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.hermitian, self.pt_symmetric) {
            (true, true) => write!(f, "hermitian, pt_symmetric"),
            _ => write!(f, "{}", self.tag()),
        }
    }
}

fn i_pow<T: Real>(m: usize) -> Complex<T> {
    let (o, z) = (T::one(), T::zero());
    match m % 4 {
        0 => Complex::new(o, z),
        1 => Complex::new(z, o),
        2 => Complex::new(-o, z),
        _ => Complex::new(z, -o),
    }
}

impl<T: Real> DiffOperator<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    /// Multiplication by `f`.
    pub fn multiplication(f: CoeffFn<T>) -> Self {
        Self::from_coeffs(f, CoeffFn::zero(), CoeffFn::zero())
    }

    /// `D = d/dx`.
    pub fn d() -> Self {
        Self::from_coeffs(CoeffFn::zero(), CoeffFn::real(1.0), CoeffFn::zero())
    }

    /// `f0 + f1 D + f2 D^2`.
    pub fn from_coeffs(f0: CoeffFn<T>, f1: CoeffFn<T>, f2: CoeffFn<T>) -> Self {
        DiffOperator {
            coeffs: [f0, f1, f2],
        }
    }

    /// `g2 p^2 + g1 p + g0` with `p = -iD`.
    pub fn from_p_form(g2: CoeffFn<T>, g1: CoeffFn<T>, g0: CoeffFn<T>) -> Self {
        // g p^m = g (-i)^m D^m
        Self::from_coeffs(g0, g1.scale(i_pow(3)), g2.scale(i_pow(2)))
    }

    /// `p^2 + g1 p + g0` from expression text.
    pub fn parse_p_form(p1: &str, p0: &str, env: &ParamEnv) -> Result<Self> {
        let g1 = CoeffFn::lower(&parse(p1)?, env)?;
        let g0 = CoeffFn::lower(&parse(p0)?, env)?;
        Ok(Self::from_p_form(CoeffFn::real(1.0), g1, g0))
    }

    /// `p^2 + V(x)`.
    pub fn from_potential(v: CoeffFn<T>) -> Self {
        Self::from_p_form(CoeffFn::real(1.0), CoeffFn::zero(), v)
    }

    /// Coefficient of `D^m`.
    pub fn coeff(&self, m: usize) -> &CoeffFn<T> {
        &self.coeffs[m]
    }

    /// Coefficient of `p^m`, i.e. `f_m i^m`.
    pub fn p_coeff(&self, m: usize) -> CoeffFn<T> {
        self.coeffs[m].scale(i_pow(m))
    }

    /// Highest derivative order with a nonzero coefficient.
    pub fn order(&self) -> usize {
        (0..3)
            .rev()
            .find(|&m| !self.coeffs[m].is_zero())
            .unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(CoeffFn::is_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        DiffOperator {
            coeffs: std::array::from_fn(|m| self.coeffs[m].add(&other.coeffs[m])),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        DiffOperator {
            coeffs: std::array::from_fn(|m| self.coeffs[m].sub(&other.coeffs[m])),
        }
    }

    /// Composition `self * other` by the Leibniz rule
    /// `(f D^j)(g D^k) = sum_l C(j,l) f g^(l) D^(j+k-l)`.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        let mut out: [CoeffFn<T>; 5] = std::array::from_fn(|_| CoeffFn::zero());
        for j in 0..3 {
            let f = &self.coeffs[j];
            if f.is_zero() {
                continue;
            }
            for k in 0..3 {
                let mut g = other.coeffs[k].clone();
                if g.is_zero() {
                    continue;
                }
                for l in 0..=j {
                    let binom = if l == 1 && j == 2 { 2.0 } else { 1.0 };
                    let term = f.mul(&g).scale(Complex::new(T::lit(binom), T::zero()));
                    out[j + k - l] = out[j + k - l].add(&term);
                    g = g.derivative();
                }
            }
        }
        if let Some(m) = (3..5).rev().find(|&m| !out[m].is_zero()) {
            return Err(Error::OrderOverflow(m));
        }
        let [f0, f1, f2, _, _] = out;
        Ok(Self::from_coeffs(f0, f1, f2))
    }

    /// Multiplies every coefficient by a nonzero real factor.
    pub fn scale(&self, factor: f64) -> Result<Self> {
        if factor == 0.0 || !factor.is_finite() {
            return Err(Error::InvalidArgument(format!("scale factor {factor}")));
        }
        let c = Complex::new(T::lit(factor), T::zero());
        Ok(DiffOperator {
            coeffs: std::array::from_fn(|m| self.coeffs[m].scale(c)),
        })
    }

    /// Formal adjoint `sum_m (-D)^m f_m*` on the real line.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero();
        for m in 0..3 {
            let fbar = self.coeffs[m].conj();
            // (-D)^m fbar = (-1)^m sum_l C(m,l) fbar^(l) D^(m-l)
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            let mut g = fbar;
            for l in 0..=m {
                let binom = if l == 1 && m == 2 { 2.0 } else { 1.0 };
                let term = g.scale(Complex::new(T::lit(sign * binom), T::zero()));
                out.coeffs[m - l] = out.coeffs[m - l].add(&term);
                g = g.derivative();
            }
        }
        out
    }

    /// Image under `x -> -x`, `i -> -i`.
    pub fn pt(&self) -> Self {
        DiffOperator {
            coeffs: std::array::from_fn(|m| {
                let f = self.coeffs[m].conj_reflect();
                if m % 2 == 1 {
                    f.neg()
                } else {
                    f
                }
            }),
        }
    }

    pub fn classify(&self) -> Symmetry {
        Symmetry {
            hermitian: self.adjoint().approx_eq(self, 1e-12),
            pt_symmetric: self.pt().approx_eq(self, 1e-12),
        }
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        (0..3).all(|m| self.coeffs[m].approx_eq(&other.coeffs[m], tol))
    }

    pub fn has_pole(&self) -> bool {
        self.coeffs.iter().any(CoeffFn::has_pole)
    }

    pub fn has_sign(&self) -> bool {
        self.coeffs.iter().any(CoeffFn::has_sign)
    }

    pub fn cast<U: Real>(&self) -> DiffOperator<U> {
        DiffOperator {
            coeffs: std::array::from_fn(|m| self.coeffs[m].cast()),
        }
    }
}

/// Prints in momentum form, e.g. `p^2 + ix^3p - ixp + 3x^2 + x^4`.
impl<T: Real> fmt::Display for DiffOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = self.p_coeff(2).display_terms("p^2");
        terms.extend(self.p_coeff(1).display_terms("p"));
        terms.extend(self.p_coeff(0).display_terms(""));
        write!(f, "{}", join_terms(&terms))
    }
}
