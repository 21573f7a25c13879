//! Closed-form spectra of the solvable cases and their ground states.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::ParamEnv;
use crate::operator::{factor, Convention, DiffOperator, MonoKey};

/// Coefficients of `h11 p^2 + h22 x^2 + i h12 (xp + px) + i h1 p + h2 x + c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Su11Coefficients {
    pub h11: f64,
    pub h22: f64,
    pub h12: f64,
    pub h1: f64,
    pub h2: f64,
    pub c0: f64,
}

impl Su11Coefficients {
    pub fn radicand(&self) -> f64 {
        self.h11 * self.h22 + self.h12 * self.h12
    }

    /// Rebuilds the operator.
    pub fn to_operator(&self) -> DiffOperator {
        use crate::operator::CoeffFn;
        let re = |v: f64| Complex::new(v, 0.0);
        let x = |n: i32| MonoKey::new(n, false);
        // i h12 (xp + px) = 2 i h12 x p + h12
        let g1 = CoeffFn::monomial(Complex::new(0.0, 2.0 * self.h12), x(1))
            .add(&CoeffFn::constant(Complex::new(0.0, self.h1)));
        let g0 = CoeffFn::monomial(re(self.h22), x(2))
            .add(&CoeffFn::monomial(re(self.h2), x(1)))
            .add(&CoeffFn::real(self.h12 + self.c0));
        DiffOperator::from_p_form(CoeffFn::real(self.h11), g1, g0)
    }
}

/// Level `n` of the quadratic form, including the offset `c0`.
pub fn su11_energy(c: &Su11Coefficients, n: usize) -> Result<f64> {
    let r = c.radicand();
    if r <= 0.0 || c.h11 <= 0.0 {
        return Err(Error::RadicandNonpositive(r));
    }
    let shift = (c.h1 * c.h1 * c.h22 - c.h2 * c.h2 * c.h11 - 2.0 * c.h1 * c.h2 * c.h12) / (4.0 * r);
    Ok(r.sqrt() * (2 * n + 1) as f64 + shift + c.c0)
}

/// Reads the quadratic-form coefficients off an operator.
pub fn decompose_su11(h: &DiffOperator) -> Result<Su11Coefficients> {
    let bad = || Error::NotQuadraticForm(h.to_string());
    let real_at = |f: &crate::operator::CoeffFn, allowed: &[i32]| -> Result<Vec<f64>> {
        let mut out = vec![0.0; allowed.len()];
        for (k, c) in f.terms() {
            let slot = allowed
                .iter()
                .position(|&p| p == k.power && !k.odd_sign)
                .ok_or_else(bad)?;
            if c.im != 0.0 {
                return Err(bad());
            }
            out[slot] = c.re;
        }
        Ok(out)
    };
    let f2 = real_at(h.coeff(2), &[0])?;
    let h11 = -f2[0];
    if h11 <= 0.0 {
        return Err(bad());
    }
    // f1 D = i f1 p must equal i (2 h12 x + h1) p
    let f1 = real_at(h.coeff(1), &[0, 1])?;
    let (h1, h12) = (f1[0], f1[1] / 2.0);
    let f0 = real_at(h.coeff(0), &[0, 1, 2])?;
    Ok(Su11Coefficients {
        h11,
        h22: f0[2],
        h12,
        h1,
        h2: f0[1],
        c0: f0[0] - h12,
    })
}

/// The four shape-invariant families with the inverse-linear superpotential.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ShapeInvariantKind {
    /// `W = ix - i lam/x`, member `H-`.
    IidMinus,
    /// `W = ix - i lam/x`, member `H+`.
    IidPlus,
    /// `W = ix + i lam/x`, member `H-`.
    IieMinus,
    /// `W = ix + i lam/x`, member `H+`.
    IiePlus,
}

impl FromStr for ShapeInvariantKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace(['-', '_'], "").as_str() {
            "iidminus" => Ok(Self::IidMinus),
            "iidplus" => Ok(Self::IidPlus),
            "iieminus" => Ok(Self::IieMinus),
            "iieplus" => Ok(Self::IiePlus),
            _ => Err(Error::InvalidArgument(format!(
                "unknown shape-invariant case `{s}`"
            ))),
        }
    }
}

/// Where `lam` sits relative to the two validity thresholds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LambdaRegime {
    /// `lam <= 1`: the radical no longer simplifies to `2 lam - 1`.
    BelowThreshold,
    /// `1 < lam <= 2`: the formulas hold but the published claim is stated for `lam > 2`.
    WarningBand,
    /// `lam > 2`.
    Claimed,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeInvariantCase {
    pub kind: ShapeInvariantKind,
    pub lambda: f64,
}

impl ShapeInvariantCase {
    pub fn new(kind: ShapeInvariantKind, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) || !lambda.is_finite() {
            return Err(Error::Domain(format!("lambda = {lambda}")));
        }
        let case = ShapeInvariantCase { kind, lambda };
        let r = case.radicand();
        if r < 0.0 {
            return Err(Error::RadicandNonpositive(r));
        }
        Ok(case)
    }

    /// `+1` when the centrifugal term is `lam(lam+1)/x^2`, `-1` for `lam(lam-1)`.
    fn centrifugal_sign(&self) -> f64 {
        match self.kind {
            ShapeInvariantKind::IidPlus | ShapeInvariantKind::IieMinus => 1.0,
            ShapeInvariantKind::IidMinus | ShapeInvariantKind::IiePlus => -1.0,
        }
    }

    fn radicand(&self) -> f64 {
        let l = self.lambda;
        1.0 + 4.0 * l * (l + self.centrifugal_sign())
    }

    pub fn regime(&self) -> LambdaRegime {
        if self.lambda <= 1.0 {
            LambdaRegime::BelowThreshold
        } else if self.lambda <= 2.0 {
            LambdaRegime::WarningBand
        } else {
            LambdaRegime::Claimed
        }
    }

    pub fn superpotential(&self) -> &'static str {
        match self.kind {
            ShapeInvariantKind::IidMinus | ShapeInvariantKind::IidPlus => "i*x - i*lam/x",
            ShapeInvariantKind::IieMinus | ShapeInvariantKind::IiePlus => "i*x + i*lam/x",
        }
    }

    pub fn is_plus(&self) -> bool {
        matches!(
            self.kind,
            ShapeInvariantKind::IidPlus | ShapeInvariantKind::IiePlus
        )
    }

    /// Unscaled member of the Type-I pair; the published form is half of it.
    pub fn unscaled_hamiltonian(&self) -> Result<DiffOperator> {
        let env = ParamEnv::new().with("lam", self.lambda);
        let pair = factor(Convention::TypeI, &[self.superpotential()], &env)?;
        Ok(if self.is_plus() {
            pair.h_plus
        } else {
            pair.h_minus
        })
    }

    /// The published, half-scaled Hamiltonian.
    pub fn hamiltonian(&self) -> Result<DiffOperator> {
        self.unscaled_hamiltonian()?.scale(0.5)
    }

    /// Exponent `a` of the ground state `x^a exp(-x^2/2)`.
    pub fn ground_exponent(&self) -> f64 {
        let l = self.lambda;
        0.5 + (0.25 + l * (l + self.centrifugal_sign())).sqrt()
    }
}

impl fmt::Display for ShapeInvariantCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}(lam={})", self.kind, self.lambda)
    }
}

/// Level `n` of the half-scaled Hamiltonian.
pub fn shape_invariant_energy(case: &ShapeInvariantCase, n: usize) -> Result<f64> {
    let r = case.radicand();
    if r < 0.0 {
        return Err(Error::RadicandNonpositive(r));
    }
    let l = case.lambda;
    let base = if case.is_plus() { 1.5 } else { 0.5 };
    let offset = match case.kind {
        ShapeInvariantKind::IidMinus | ShapeInvariantKind::IidPlus => -l,
        _ => l,
    };
    Ok(2.0 * n as f64 + base + 0.5 * r.sqrt() + offset)
}

/// Unnormalized ground state `x^a exp(-x^2/2)` on the half-line.
pub fn ground_state_eval(case: &ShapeInvariantCase, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ground state needs x > 0, got {x}")));
    }
    Ok(x.powf(case.ground_exponent()) * (-0.5 * x * x).exp())
}

/// First two derivatives of the ground state.
fn ground_state_derivs(case: &ShapeInvariantCase, x: f64) -> (f64, f64, f64) {
    let a = case.ground_exponent();
    let psi = x.powf(a) * (-0.5 * x * x).exp();
    // psi' = (a/x - x) psi,  psi'' = ((a/x - x)^2 - a/x^2 - 1) psi
    let u = a / x - x;
    (psi, u * psi, (u * u - a / (x * x) - 1.0) * psi)
}

/// `|(op psi0)(x)| / |psi0(x)|` for a real-line operator of order at most 2.
pub fn ground_state_residual(case: &ShapeInvariantCase, op: &DiffOperator, x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::Domain(format!("ground state needs x > 0, got {x}")));
    }
    let (p0, p1, p2) = ground_state_derivs(case, x);
    let xc = Complex::new(x, 0.0);
    let v = op.coeff(0).eval(xc)? * p0 + op.coeff(1).eval(xc)? * p1 + op.coeff(2).eval(xc)? * p2;
    Ok(v.norm() / p0.abs())
}

/// Residual of the ground state: `|A psi0| / |psi0|` when the generator
/// `A = -D + iW` annihilates it, else `|(H - E0) psi0| / |psi0|` on the
/// half-scaled Hamiltonian.
pub fn annihilation_residual(case: &ShapeInvariantCase, x: f64) -> Result<f64> {
    let env = ParamEnv::new().with("lam", case.lambda);
    let w = crate::expr::parse(case.superpotential())?;
    let gen = crate::operator::make_generators::<f64>(Convention::TypeI, &[w], &env)?;
    if case.kind == ShapeInvariantKind::IidMinus {
        return ground_state_residual(case, &gen.a, x);
    }
    let e0 = shape_invariant_energy(case, 0)?;
    let h = case.hamiltonian()?.sub(&DiffOperator::multiplication(
        crate::operator::CoeffFn::real(e0),
    ));
    ground_state_residual(case, &h, x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ParamEnv;
    use crate::operator::factor;

    fn c(h11: f64, h22: f64, h12: f64, h1: f64, h2: f64, c0: f64) -> Su11Coefficients {
        Su11Coefficients {
            h11,
            h22,
            h12,
            h1,
            h2,
            c0,
        }
    }

    #[test]
    fn su11_examples() {
        for n in 0..6 {
            let e = su11_energy(&c(1.0, 1.0, 0.0, 0.0, 0.0, 0.0), n).unwrap();
            assert_eq!(e, (2 * n + 1) as f64);
            let g: f64 = 0.7;
            let minus = su11_energy(&c(1.0, 1.0, 0.0, 2.0 * g, 0.0, -g * g - 1.0), n).unwrap();
            let plus = su11_energy(&c(1.0, 1.0, 0.0, 2.0 * g, 0.0, -g * g + 1.0), n).unwrap();
            assert!((minus - 2.0 * n as f64).abs() < 1e-14);
            assert!((plus - (2 * n + 2) as f64).abs() < 1e-14);
        }
        assert!(matches!(
            su11_energy(&c(1.0, -1.0, 0.0, 0.0, 0.0, 0.0), 0),
            Err(Error::RadicandNonpositive(_))
        ));
    }

    #[test]
    fn decompose_examples() {
        let g = 0.5;
        let env = ParamEnv::new().with("g", g);
        let pair = factor(Convention::TypeI, &["i*x - i*g"], &env).unwrap();
        let d = decompose_su11(&pair.h_minus).unwrap();
        assert_eq!(d, c(1.0, 1.0, 0.0, 2.0 * g, 0.0, -g * g - 1.0));
        let d = decompose_su11(&pair.h_plus).unwrap();
        assert_eq!(d, c(1.0, 1.0, 0.0, 2.0 * g, 0.0, -g * g + 1.0));
        let sextic = DiffOperator::parse_p_form("0", "x^6", &env).unwrap();
        assert!(matches!(
            decompose_su11(&sextic),
            Err(Error::NotQuadraticForm(_))
        ));
    }

    #[test]
    fn decompose_round_trip() {
        let co = c(1.5, 0.8, 0.3, -0.4, 0.2, 2.0);
        let back = decompose_su11(&co.to_operator()).unwrap();
        assert_eq!(
            (back.h11, back.h22, back.h12, back.h1, back.h2),
            (1.5, 0.8, 0.3, -0.4, 0.2)
        );
        assert!((back.c0 - 2.0).abs() < 1e-15);
    }

    #[test]
    fn shape_invariant_examples() {
        let iid_m = ShapeInvariantCase::new(ShapeInvariantKind::IidMinus, 3.0).unwrap();
        assert_eq!(shape_invariant_energy(&iid_m, 2).unwrap(), 4.0);
        let iid_p = ShapeInvariantCase::new(ShapeInvariantKind::IidPlus, 3.0).unwrap();
        assert_eq!(shape_invariant_energy(&iid_p, 0).unwrap(), 2.0);
        let iie_p = ShapeInvariantCase::new(ShapeInvariantKind::IiePlus, 3.0).unwrap();
        assert_eq!(shape_invariant_energy(&iie_p, 1).unwrap(), 9.0);
    }

    #[test]
    fn ground_states() {
        let iid_m = ShapeInvariantCase::new(ShapeInvariantKind::IidMinus, 3.0).unwrap();
        assert_eq!(iid_m.ground_exponent(), 3.0);
        assert!((ground_state_eval(&iid_m, 1.0).unwrap() - (-0.5f64).exp()).abs() < 1e-15);
        assert!(ground_state_eval(&iid_m, 0.0).is_err());
        let iie_m = ShapeInvariantCase::new(ShapeInvariantKind::IieMinus, 2.0).unwrap();
        assert_eq!(iie_m.ground_exponent(), 3.0);
        for kind in [
            ShapeInvariantKind::IidMinus,
            ShapeInvariantKind::IidPlus,
            ShapeInvariantKind::IieMinus,
            ShapeInvariantKind::IiePlus,
        ] {
            let case = ShapeInvariantCase::new(kind, 3.0).unwrap();
            for j in 1..=20 {
                let x = 0.2 * j as f64;
                let r = annihilation_residual(&case, x).unwrap();
                assert!(r < 1e-8, "{case} at {x}: {r}");
            }
        }
    }

    #[test]
    fn published_scaled_forms() {
        let case = ShapeInvariantCase::new(ShapeInvariantKind::IidMinus, 3.0).unwrap();
        let env = ParamEnv::new();
        let want = DiffOperator::parse_p_form("0", "x^2 + 6/x^2 - 7", &env)
            .unwrap()
            .scale(0.5)
            .unwrap();
        assert_eq!(case.hamiltonian().unwrap(), want);
    }
}
