use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::expr::{Expr, ParamEnv};
use crate::scalar::Real;

/// Monomial `x^power * sign(x)^(odd_sign as i32)`.
///
/// Every product of `x`, `1/x`, `|x|` and `sign(x)` reduces to this form via
/// `|x| = x sign(x)` and `sign(x)^2 = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MonoKey {
    pub power: i32,
    pub odd_sign: bool,
}

impl MonoKey {
    pub const ONE: MonoKey = MonoKey {
        power: 0,
        odd_sign: false,
    };

    pub fn new(power: i32, odd_sign: bool) -> Self {
        MonoKey { power, odd_sign }
    }

    /// `(a, b, s)` of `x^a |x|^b sign(x)^s`, with `b` and `s` at most 1.
    pub fn canonical(self) -> (i32, u32, u32) {
        match (self.odd_sign, self.power) {
            (false, n) => (n, 0, 0),
            (true, 0) => (0, 0, 1),
            (true, n) => (n - 1, 1, 0),
        }
    }

    /// Parity under `x -> -x`.
    pub fn is_even(self) -> bool {
        (self.power + self.odd_sign as i32) % 2 == 0
    }

    fn times(self, other: MonoKey) -> MonoKey {
        MonoKey {
            power: self.power + other.power,
            odd_sign: self.odd_sign ^ other.odd_sign,
        }
    }
}

impl fmt::Display for MonoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b, s) = self.canonical();
        let mut parts = Vec::new();
        match a {
            0 => {}
            1 => parts.push("x".to_string()),
            n if n < 0 => parts.push(format!("x^({n})")),
            n => parts.push(format!("x^{n}")),
        }
        if b == 1 {
            parts.push("|x|".to_string());
        }
        if s == 1 {
            parts.push("sign(x)".to_string());
        }
        write!(f, "{}", parts.join(""))
    }
}

/// Coefficient function: a finite sum of complex multiples of monomials.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFn<T: Real = f64> {
    terms: BTreeMap<MonoKey, Complex<T>>,
}

impl<T: Real> Default for CoeffFn<T> {
    fn default() -> Self {
        CoeffFn {
            terms: BTreeMap::new(),
        }
    }
}

fn cz<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> CoeffFn<T> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::monomial(c, MonoKey::ONE)
    }

    pub fn real(v: f64) -> Self {
        Self::constant(Complex::new(T::lit(v), T::zero()))
    }

    pub fn monomial(c: Complex<T>, key: MonoKey) -> Self {
        let mut out = Self::zero();
        out.accumulate(key, c);
        out
    }

    /// The function `x`.
    pub fn x() -> Self {
        Self::monomial(Complex::new(T::one(), T::zero()), MonoKey::new(1, false))
    }

    fn accumulate(&mut self, key: MonoKey, c: Complex<T>) {
        let slot = self.terms.entry(key).or_insert_with(cz);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: MonoKey) -> Complex<T> {
        self.terms.get(&key).copied().unwrap_or_else(cz)
    }

    /// Terms in ascending key order.
    pub fn terms(&self) -> impl Iterator<Item = (MonoKey, Complex<T>)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, *c))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms() {
            out.accumulate(k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|_, c| -c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (ka, ca) in self.terms() {
            for (kb, cb) in other.terms() {
                out.accumulate(ka.times(kb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: Complex<T>) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        self.map_coeffs(|_, v| v * c)
    }

    fn map_coeffs(&self, f: impl Fn(MonoKey, Complex<T>) -> Complex<T>) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            out.accumulate(k, f(k, c));
        }
        out
    }

    /// `f^n`; negative `n` is allowed only for a single monomial.
    pub fn powi(&self, n: i32) -> Result<Self> {
        if n < 0 {
            return self.reciprocal()?.powi(-n);
        }
        let mut out = Self::real(1.0);
        for _ in 0..n {
            out = out.mul(self);
        }
        Ok(out)
    }

    /// `1/f` for a single monomial.
    pub fn reciprocal(&self) -> Result<Self> {
        let (k, c) = self
            .single_term()
            .ok_or_else(|| Error::NonMonomial(format!("1/({self})")))?;
        Ok(Self::monomial(
            Complex::new(T::one(), T::zero()) / c,
            MonoKey::new(-k.power, k.odd_sign),
        ))
    }

    fn single_term(&self) -> Option<(MonoKey, Complex<T>)> {
        if self.terms.len() == 1 {
            self.terms().next()
        } else {
            None
        }
    }

    /// d/dx on the real line away from 0: `d(x^n sign^t) = n x^(n-1) sign^t`.
    pub fn derivative(&self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms() {
            if k.power != 0 {
                out.accumulate(
                    MonoKey::new(k.power - 1, k.odd_sign),
                    c * T::lit(k.power as f64),
                );
            }
        }
        out
    }

    /// Pointwise complex conjugate for real `x`.
    pub fn conj(&self) -> Self {
        self.map_coeffs(|_, c| c.conj())
    }

    /// `f(x) -> f*(-x)`.
    pub fn conj_reflect(&self) -> Self {
        self.map_coeffs(|k, c| if k.is_even() { c.conj() } else { -c.conj() })
    }

    /// `f(x) -> f(-x)`.
    pub fn reflect(&self) -> Self {
        self.map_coeffs(|k, c| if k.is_even() { c } else { -c })
    }

    /// True when every monomial is even under `x -> -x`.
    pub fn is_even(&self) -> bool {
        self.terms.keys().all(|k| k.is_even())
    }

    pub fn has_pole(&self) -> bool {
        self.terms.keys().any(|k| k.power < 0)
    }

    pub fn has_sign(&self) -> bool {
        self.terms.keys().any(|k| k.odd_sign)
    }

    /// Largest power of `x` present, `None` when zero.
    pub fn degree(&self) -> Option<i32> {
        self.terms.keys().map(|k| k.power).max()
    }

    /// Evaluates at a complex point; `sign` acts on the real part.
    pub fn eval(&self, x: Complex<T>) -> Result<Complex<T>> {
        let s = if x.re > T::zero() {
            T::one()
        } else if x.re < T::zero() {
            -T::one()
        } else {
            T::zero()
        };
        let mut acc = cz();
        for (k, c) in self.terms() {
            if k.power < 0 && x.is_zero() {
                return Err(Error::DivisionByZero);
            }
            let mut v = c * x.powi(k.power);
            if k.odd_sign {
                v *= s;
            }
            acc += v;
        }
        Ok(acc)
    }

    /// Equal up to `tol` relative to the largest coefficient magnitude.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let diff = self.sub(other);
        let scale = self
            .terms()
            .chain(other.terms())
            .map(|(_, c)| c.norm().as_f64())
            .fold(1.0, f64::max);
        let ok = diff.terms().all(|(_, c)| c.norm().as_f64() <= tol * scale);
        ok
    }

    /// Converts the coefficients to another precision.
    pub fn cast<U: Real>(&self) -> CoeffFn<U> {
        let mut out = CoeffFn::<U>::zero();
        for (k, c) in self.terms() {
            out.accumulate(
                k,
                Complex::new(U::lit(c.re.as_f64()), U::lit(c.im.as_f64())),
            );
        }
        out
    }

    /// Lowers a parsed expression to monomial form after substituting
    /// parameter values.
    pub fn lower(expr: &Expr, env: &ParamEnv) -> Result<Self> {
        let non_mono = || Error::NonMonomial(expr.to_string());
        Ok(match expr {
            Expr::Num(v) => Self::real(*v),
            Expr::Imag => Self::constant(Complex::new(T::zero(), T::one())),
            Expr::X => Self::x(),
            Expr::Param(p) => Self::real(env.get(p)?),
            Expr::Neg(a) => Self::lower(a, env)?.neg(),
            Expr::Add(v) => {
                let mut acc = Self::zero();
                for t in v {
                    acc = acc.add(&Self::lower(t, env)?);
                }
                acc
            }
            Expr::Sub(a, b) => Self::lower(a, env)?.sub(&Self::lower(b, env)?),
            Expr::Mul(v) => {
                let mut acc = Self::real(1.0);
                for t in v {
                    acc = acc.mul(&Self::lower(t, env)?);
                }
                acc
            }
            Expr::Div(a, b) => {
                let den = Self::lower(b, env)?;
                if den.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                let inv = den.reciprocal().map_err(|_| non_mono())?;
                Self::lower(a, env)?.mul(&inv)
            }
            Expr::Pow(a, n) => {
                let base = Self::lower(a, env)?;
                if *n < 0 && base.is_zero() {
                    return Err(Error::DivisionByZero);
                }
                base.powi(*n).map_err(|_| non_mono())?
            }
            Expr::Abs(a) => {
                let inner = Self::lower(a, env)?;
                if inner.is_zero() {
                    return Ok(inner);
                }
                let (k, c) = inner.single_term().ok_or_else(non_mono)?;
                // |c x^n sign^t| = |Re c| |x|^n
                Self::monomial(
                    Complex::new(c.re.abs(), T::zero()),
                    MonoKey::new(k.power, k.power % 2 != 0),
                )
            }
            Expr::Sign(a) => {
                let inner = Self::lower(a, env)?;
                if inner.is_zero() {
                    return Ok(inner);
                }
                let (k, c) = inner.single_term().ok_or_else(non_mono)?;
                let s = if c.re > T::zero() {
                    T::one()
                } else if c.re < T::zero() {
                    -T::one()
                } else {
                    return Ok(Self::zero());
                };
                Self::monomial(Complex::new(s, T::zero()), MonoKey::new(0, !k.is_even()))
            }
        })
    }
}

pub(crate) fn fmt_real(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.10}");
        let s = s.trim_end_matches('0');
        s.trim_end_matches('.').to_string()
    }
}

/// Splits a coefficient into a leading sign and a magnitude string; the
/// magnitude is empty for a unit coefficient when `elide_one` is set.
pub(crate) fn fmt_coeff(c: Complex<f64>, elide_one: bool) -> (bool, String) {
    let (re, im) = (c.re, c.im);
    if im == 0.0 {
        let neg = re < 0.0;
        let m = re.abs();
        let s = if m == 1.0 && elide_one {
            String::new()
        } else {
            fmt_real(m)
        };
        (neg, s)
    } else if re == 0.0 {
        let neg = im < 0.0;
        let m = im.abs();
        let s = if m == 1.0 {
            "i".to_string()
        } else {
            format!("{}i", fmt_real(m))
        };
        (neg, s)
    } else {
        let op = if im < 0.0 { "-" } else { "+" };
        (
            false,
            format!("({} {op} {}i)", fmt_real(re), fmt_real(im.abs())),
        )
    }
}

/// Joins signed terms as `a + b - c`.
pub(crate) fn join_terms(terms: &[(bool, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (neg, body)) in terms.iter().enumerate() {
        match (k, neg) {
            (0, true) => out.push_str(&format!("-{body}")),
            (0, false) => out.push_str(body),
            (_, true) => out.push_str(&format!(" - {body}")),
            (_, false) => out.push_str(&format!(" + {body}")),
        }
    }
    out
}

impl<T: Real> CoeffFn<T> {
    /// Signed display terms with an optional trailing factor, ordered by
    /// descending power with the constant last.
    pub(crate) fn display_terms(&self, suffix: &str) -> Vec<(bool, String)> {
        let mut keys: Vec<(MonoKey, Complex<T>)> = self.terms().collect();
        keys.sort_by(|(a, _), (b, _)| {
            let rank = |k: &MonoKey| (*k == MonoKey::ONE, std::cmp::Reverse(k.power), k.odd_sign);
            rank(a).cmp(&rank(b))
        });
        keys.into_iter()
            .map(|(k, c)| {
                let mono = k.to_string();
                let bare = mono.is_empty() && suffix.is_empty();
                let (neg, mag) = fmt_coeff(Complex::new(c.re.as_f64(), c.im.as_f64()), !bare);
                (neg, format!("{mag}{mono}{suffix}"))
            })
            .collect()
    }
}

impl<T: Real> fmt::Display for CoeffFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", join_terms(&self.display_terms("")))
    }
}
