use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::coeff::CoeffFn;
use super::diffop::{DiffOperator, Symmetry};
use crate::error::{Error, Result};
use crate::expr::{Expr, ParamEnv};
use crate::scalar::Real;

/// Generator conventions.
///
/// * `TypeI`: `A = -D + iW`, `B = D + iW*(-x)`.
/// * `TypeII`: `A = -ip - W1 = -D - W1`, `B = ip - W2 = D - W2`, with `W1 W2` even.
/// * `TypeIII`: `A = iD + W`, `B = iD + W*(-x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    #[serde(rename = "type1")]
    TypeI,
    #[serde(rename = "type2")]
    TypeII,
    #[serde(rename = "type3")]
    TypeIII,
}

impl Convention {
    pub fn arity(self) -> usize {
        match self {
            Convention::TypeII => 2,
            _ => 1,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::TypeI => "type1",
            Convention::TypeII => "type2",
            Convention::TypeIII => "type3",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "type1" | "i" | "typei" => Ok(Convention::TypeI),
            "type2" | "ii" | "typeii" => Ok(Convention::TypeII),
            "type3" | "iii" | "typeiii" => Ok(Convention::TypeIII),
            _ => Err(Error::InvalidArgument(format!("unknown convention `{s}`"))),
        }
    }
}

/// First-order generators `A`, `B` and the superpotentials they came from.
#[derive(Debug, Clone)]
pub struct GeneratorPair<T: Real = f64> {
    pub a: DiffOperator<T>,
    pub b: DiffOperator<T>,
    pub convention: Convention,
    pub sources: Vec<Expr>,
    /// Lowered superpotentials: `[W]` or `[W1, W2]`.
    pub w: Vec<CoeffFn<T>>,
}

/// `H+ = AB`, `H- = BA` with their symmetry tags.
#[derive(Debug, Clone)]
pub struct HamiltonianPair<T: Real = f64> {
    pub h_plus: DiffOperator<T>,
    pub h_minus: DiffOperator<T>,
    pub symmetry_plus: Symmetry,
    pub symmetry_minus: Symmetry,
    /// `A` and `B` commute (e.g. `W = 0`).
    pub trivial: bool,
}

fn imag<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::one())
}

/// Builds `A`, `B` for the given convention.
pub fn make_generators<T: Real>(
    convention: Convention,
    sources: &[Expr],
    env: &ParamEnv,
) -> Result<GeneratorPair<T>> {
    if sources.len() != convention.arity() {
        return Err(Error::ConventionArity {
            convention: convention.name(),
            expected: convention.arity(),
            got: sources.len(),
        });
    }
    let w: Vec<CoeffFn<T>> = sources
        .iter()
        .map(|e| CoeffFn::lower(e, env))
        .collect::<Result<_>>()?;
    let one = CoeffFn::real(1.0);
    let zero = CoeffFn::zero;
    let (a, b) = match convention {
        Convention::TypeI => {
            let v = w[0].conj_reflect();
            (
                DiffOperator::from_coeffs(w[0].scale(imag()), one.neg(), zero()),
                DiffOperator::from_coeffs(v.scale(imag()), one, zero()),
            )
        }
        Convention::TypeII => {
            let prod = w[0].mul(&w[1]);
            if !prod.is_even() {
                return Err(Error::EvenProductViolation(prod.to_string()));
            }
            (
                DiffOperator::from_coeffs(w[0].neg(), one.neg(), zero()),
                DiffOperator::from_coeffs(w[1].neg(), one, zero()),
            )
        }
        Convention::TypeIII => {
            let v = w[0].conj_reflect();
            let id = CoeffFn::constant(imag());
            (
                DiffOperator::from_coeffs(w[0].clone(), id.clone(), zero()),
                DiffOperator::from_coeffs(v, id, zero()),
            )
        }
    };
    Ok(GeneratorPair {
        a,
        b,
        convention,
        sources: sources.to_vec(),
        w,
    })
}

/// Closed forms of `AB` and `BA` written directly in terms of the
/// superpotentials, in `D` form.
fn closed_form<T: Real>(gen: &GeneratorPair<T>) -> (DiffOperator<T>, DiffOperator<T>) {
    let i = imag();
    let m1 = CoeffFn::real(-1.0);
    match gen.convention {
        Convention::TypeI => {
            // H+ = -D^2 + i(W - V) D - iV' - WV,  H- = ... + iW' - WV
            let w = &gen.w[0];
            let v = w.conj_reflect();
            let d1 = w.sub(&v).scale(i);
            let wv = w.mul(&v);
            let hp = v.derivative().scale(-i).sub(&wv);
            let hm = w.derivative().scale(i).sub(&wv);
            (
                DiffOperator::from_coeffs(hp, d1.clone(), m1.clone()),
                DiffOperator::from_coeffs(hm, d1, m1),
            )
        }
        Convention::TypeII => {
            // H+ = -D^2 + (W2 - W1) D + W2' + W1 W2,  H- = ... - W1' + W1 W2
            let (w1, w2) = (&gen.w[0], &gen.w[1]);
            let d1 = w2.sub(w1);
            let prod = w1.mul(w2);
            (
                DiffOperator::from_coeffs(w2.derivative().add(&prod), d1.clone(), m1.clone()),
                DiffOperator::from_coeffs(w1.derivative().neg().add(&prod), d1, m1),
            )
        }
        Convention::TypeIII => {
            // H+ = -D^2 + i(W + V) D + iV' + WV,  H- = ... + iW' + WV
            let w = &gen.w[0];
            let v = w.conj_reflect();
            let d1 = w.add(&v).scale(i);
            let wv = w.mul(&v);
            (
                DiffOperator::from_coeffs(v.derivative().scale(i).add(&wv), d1.clone(), m1.clone()),
                DiffOperator::from_coeffs(w.derivative().scale(i).add(&wv), d1, m1),
            )
        }
    }
}

/// Forms `H+ = AB`, `H- = BA` and checks both against the closed forms.
pub fn hamiltonian_pair<T: Real>(gen: &GeneratorPair<T>) -> Result<HamiltonianPair<T>> {
    let h_plus = gen.a.multiply(&gen.b)?;
    let h_minus = gen.b.multiply(&gen.a)?;
    let (cp, cm) = closed_form(gen);
    let tol = T::eps().as_f64() * 64.0;
    if !h_plus.approx_eq(&cp, tol) {
        return Err(Error::ClosedFormMismatch(format!("H+ = {h_plus} vs {cp}")));
    }
    if !h_minus.approx_eq(&cm, tol) {
        return Err(Error::ClosedFormMismatch(format!("H- = {h_minus} vs {cm}")));
    }
    Ok(HamiltonianPair {
        symmetry_plus: h_plus.classify(),
        symmetry_minus: h_minus.classify(),
        trivial: h_plus.approx_eq(&h_minus, tol),
        h_plus,
        h_minus,
    })
}

/// Convenience wrapper: parse, build generators and form the pair.
pub fn factor(
    convention: Convention,
    sources: &[&str],
    env: &ParamEnv,
) -> Result<HamiltonianPair<f64>> {
    let exprs: Vec<Expr> = sources
        .iter()
        .map(|s| crate::expr::parse(s))
        .collect::<Result<_>>()?;
    hamiltonian_pair(&make_generators(convention, &exprs, env)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pf(p1: &str, p0: &str, env: &ParamEnv) -> DiffOperator {
        DiffOperator::parse_p_form(p1, p0, env).unwrap()
    }

    #[test]
    fn type1_harmonic() {
        let env = ParamEnv::new();
        let gen = make_generators::<f64>(
            Convention::TypeI,
            &[crate::expr::parse("i*x").unwrap()],
            &env,
        )
        .unwrap();
        assert_eq!(gen.a.to_string(), "-ip - x");
        assert_eq!(gen.b.to_string(), "ip - x");
        let pair = hamiltonian_pair(&gen).unwrap();
        assert_eq!(pair.h_plus.to_string(), "p^2 + x^2 + 1");
        assert_eq!(pair.h_minus.to_string(), "p^2 + x^2 - 1");
        assert!(pair.symmetry_plus.hermitian && pair.symmetry_minus.hermitian);
    }

    #[test]
    fn type1_sextic() {
        let env = ParamEnv::new().with("k", 1.0).with("g", 1.0);
        let pair = factor(Convention::TypeI, &["i*k*x^3 - i*g*x^2"], &env).unwrap();
        let want = pf("2*i*x^2", "x^6 - x^4 - 3*x^2 + 2*x", &env);
        assert!(pair.h_minus.approx_eq(&want, 0.0), "{}", pair.h_minus);
    }

    #[test]
    fn type2_cases() {
        let env = ParamEnv::new();
        let pair = factor(Convention::TypeII, &["x", "x^3"], &env).unwrap();
        assert!(pair
            .h_plus
            .approx_eq(&pf("i*x^3 - i*x", "3*x^2 + x^4", &env), 0.0));
        assert!(pair
            .h_minus
            .approx_eq(&pf("i*x^3 - i*x", "-1 + x^4", &env), 0.0));
        assert_eq!(pair.symmetry_plus.tag(), "pt_symmetric");
        assert!(matches!(
            factor(Convention::TypeII, &["x", "x^2"], &env),
            Err(Error::EvenProductViolation(_))
        ));
        assert!(matches!(
            factor(Convention::TypeII, &["x"], &env),
            Err(Error::ConventionArity {
                expected: 2,
                got: 1,
                ..
            })
        ));
    }

    #[test]
    fn type3_square_modulus() {
        let env = ParamEnv::new();
        let pair = factor(Convention::TypeIII, &["i*abs(x)^2"], &env).unwrap();
        // d(i x^2)/dx = 2ix gives a linear, not |x|, term
        assert!(pair.h_plus.approx_eq(&pf("0", "2*x + x^4", &env), 0.0));
        assert!(pair.h_minus.approx_eq(&pf("0", "-2*x + x^4", &env), 0.0));
    }

    #[test]
    fn zero_superpotential_is_trivial() {
        let pair = factor(Convention::TypeI, &["0"], &ParamEnv::new()).unwrap();
        assert!(pair.trivial);
        assert_eq!(pair.h_plus.to_string(), "p^2");
    }

    #[test]
    fn type1_first_order_coefficients_agree() {
        let env = ParamEnv::new().with("g", 0.3);
        for w in ["i*x - i*g", "x^2", "i*x^3 + x^2 - 2*i", "i*x + i*g/x"] {
            let pair = factor(Convention::TypeI, &[w], &env).unwrap();
            assert_eq!(pair.h_plus.coeff(1), pair.h_minus.coeff(1));
            assert_eq!(pair.h_plus.coeff(2), pair.h_minus.coeff(2));
        }
    }
}
