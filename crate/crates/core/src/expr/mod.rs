//! Superpotential expressions: parsing, evaluation, symbolic derivative and
//! the PT map `W(x) -> W*(-x)`.

mod env;
mod parse;

use std::fmt;

use num_complex::Complex;

pub use env::ParamEnv;
pub use parse::parse;

use crate::error::{Error, Result};
use crate::operator::CoeffFn;
use crate::scalar::Real;

/// Expression tree over complex constants, `x` and real parameters.
///
/// `Add` and `Mul` are n-ary and kept flat; `Num` literals are non-negative
/// (negative values are spelled `Neg(Num)`).
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Num(f64),
    Imag,
    X,
    Param(String),
    Neg(Box<Expr>),
    Add(Vec<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Vec<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
    Abs(Box<Expr>),
    Sign(Box<Expr>),
}

/// The superpotential type of the public API.
pub type SuperpotentialExpr = Expr;

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Num(v) if *v == 1.0)
}

impl Expr {
    /// Numeric literal; negative values become `Neg(Num)`.
    pub fn num(v: f64) -> Expr {
        if v < 0.0 {
            Expr::Neg(Box::new(Expr::Num(-v)))
        } else {
            Expr::Num(v)
        }
    }

    /// Flattening n-ary sum.
    pub fn add(terms: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(terms.len());
        for t in terms {
            match t {
                Expr::Add(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Expr::Add(flat)
        }
    }

    /// Flattening n-ary product.
    pub fn mul(factors: Vec<Expr>) -> Expr {
        let mut flat = Vec::with_capacity(factors.len());
        for f in factors {
            match f {
                Expr::Mul(inner) => flat.extend(inner),
                other => flat.push(other),
            }
        }
        if flat.len() == 1 {
            flat.pop().unwrap()
        } else {
            Expr::Mul(flat)
        }
    }

    /// Negation that cancels a double minus.
    pub fn negate(e: Expr) -> Expr {
        match e {
            Expr::Neg(inner) => *inner,
            other => Expr::Neg(Box::new(other)),
        }
    }

    // Folding constructors used by the derivative; they never build 0*u or 1*u.

    fn add_folded(terms: Vec<Expr>) -> Expr {
        let kept: Vec<Expr> = terms.into_iter().filter(|t| !is_zero(t)).collect();
        if kept.is_empty() {
            Expr::Num(0.0)
        } else {
            Expr::add(kept)
        }
    }

    fn mul_folded(factors: Vec<Expr>) -> Expr {
        if factors.iter().any(is_zero) {
            return Expr::Num(0.0);
        }
        let mut constant = 1.0;
        let mut negate = false;
        let mut rest = Vec::new();
        for f in factors {
            match f {
                Expr::Num(v) => constant *= v,
                Expr::Neg(inner) if matches!(*inner, Expr::Num(_)) => {
                    if let Expr::Num(v) = *inner {
                        constant *= v;
                    }
                    negate = !negate;
                }
                Expr::Neg(inner) => {
                    negate = !negate;
                    rest.push(*inner);
                }
                other => rest.push(other),
            }
        }
        let mut out = Vec::new();
        if constant != 1.0 || rest.is_empty() {
            out.push(Expr::Num(constant));
        }
        out.extend(rest);
        let prod = Expr::mul(out);
        if negate {
            Expr::negate(prod)
        } else {
            prod
        }
    }

    fn neg_folded(e: Expr) -> Expr {
        if is_zero(&e) {
            e
        } else {
            Expr::negate(e)
        }
    }

    fn sub_folded(a: Expr, b: Expr) -> Expr {
        if is_zero(&b) {
            a
        } else if is_zero(&a) {
            Expr::neg_folded(b)
        } else {
            Expr::Sub(Box::new(a), Box::new(b))
        }
    }

    fn div_folded(a: Expr, b: Expr) -> Expr {
        if is_zero(&a) || is_one(&b) {
            a
        } else {
            Expr::Div(Box::new(a), Box::new(b))
        }
    }

    fn pow_folded(base: Expr, n: i32) -> Expr {
        match n {
            0 => Expr::Num(1.0),
            1 => base,
            _ => Expr::Pow(Box::new(base), n),
        }
    }

    /// Names of all parameters referenced, sorted and deduplicated.
    pub fn params(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.visit(&mut |e| {
            if let Expr::Param(p) = e {
                out.push(p.clone());
            }
        });
        out.sort();
        out.dedup();
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match self {
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Abs(a) | Expr::Sign(a) => a.visit(f),
            Expr::Add(v) | Expr::Mul(v) => v.iter().for_each(|e| e.visit(f)),
            Expr::Sub(a, b) | Expr::Div(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            _ => {}
        }
    }

    /// Evaluates at a (possibly complex) point. `abs` and `sign` act on the
    /// real part of their argument.
    pub fn eval<T: Real>(&self, x: Complex<T>, env: &ParamEnv) -> Result<Complex<T>> {
        let zero = Complex::new(T::zero(), T::zero());
        Ok(match self {
            Expr::Num(v) => Complex::new(T::lit(*v), T::zero()),
            Expr::Imag => Complex::new(T::zero(), T::one()),
            Expr::X => x,
            Expr::Param(p) => Complex::new(T::lit(env.get(p)?), T::zero()),
            Expr::Neg(a) => -a.eval(x, env)?,
            Expr::Add(v) => {
                let mut acc = zero;
                for t in v {
                    acc += t.eval(x, env)?;
                }
                acc
            }
            Expr::Sub(a, b) => a.eval(x, env)? - b.eval(x, env)?,
            Expr::Mul(v) => {
                let mut acc = Complex::new(T::one(), T::zero());
                for t in v {
                    acc *= t.eval(x, env)?;
                }
                acc
            }
            Expr::Div(a, b) => {
                let den = b.eval(x, env)?;
                if den == zero {
                    return Err(Error::DivisionByZero);
                }
                a.eval(x, env)? / den
            }
            Expr::Pow(a, n) => {
                let base = a.eval(x, env)?;
                if *n < 0 && base == zero {
                    return Err(Error::DivisionByZero);
                }
                base.powi(*n)
            }
            Expr::Abs(a) => Complex::new(a.eval(x, env)?.re.abs(), T::zero()),
            Expr::Sign(a) => {
                let re = a.eval(x, env)?.re;
                let s = if re > T::zero() {
                    T::one()
                } else if re < T::zero() {
                    -T::one()
                } else {
                    T::zero()
                };
                Complex::new(s, T::zero())
            }
        })
    }

    /// Symbolic d/dx. `d|u|/dx = sign(u) u'`; `d sign(u)/dx = 0` (the delta at
    /// the kink is dropped).
    pub fn differentiate(&self) -> Expr {
        match self {
            Expr::Num(_) | Expr::Imag | Expr::Param(_) | Expr::Sign(_) => Expr::Num(0.0),
            Expr::X => Expr::Num(1.0),
            Expr::Neg(a) => Expr::neg_folded(a.differentiate()),
            Expr::Add(v) => Expr::add_folded(v.iter().map(Expr::differentiate).collect()),
            Expr::Sub(a, b) => Expr::sub_folded(a.differentiate(), b.differentiate()),
            Expr::Mul(v) => {
                let mut terms = Vec::new();
                for (i, fi) in v.iter().enumerate() {
                    let d = fi.differentiate();
                    if is_zero(&d) {
                        continue;
                    }
                    let mut factors = v.clone();
                    factors[i] = d;
                    terms.push(Expr::mul_folded(factors));
                }
                Expr::add_folded(terms)
            }
            Expr::Div(a, b) => {
                let da = a.differentiate();
                let db = b.differentiate();
                if is_zero(&db) {
                    return Expr::div_folded(da, (**b).clone());
                }
                let num = Expr::sub_folded(
                    Expr::mul_folded(vec![da, (**b).clone()]),
                    Expr::mul_folded(vec![(**a).clone(), db]),
                );
                Expr::div_folded(num, Expr::pow_folded((**b).clone(), 2))
            }
            Expr::Pow(a, n) => {
                let da = a.differentiate();
                Expr::mul_folded(vec![
                    Expr::num(*n as f64),
                    Expr::pow_folded((**a).clone(), n - 1),
                    da,
                ])
            }
            Expr::Abs(a) => Expr::mul_folded(vec![Expr::Sign(a.clone()), a.differentiate()]),
        }
    }

    /// `W(x) -> W*(-x)` for real parameters: `x -> -x`, `i -> -i`, then
    /// sign-normalized.
    pub fn conj_reflect(&self) -> Expr {
        self.reflect_raw().simplify()
    }

    fn reflect_raw(&self) -> Expr {
        match self {
            Expr::X => Expr::negate(Expr::X),
            Expr::Imag => Expr::negate(Expr::Imag),
            Expr::Num(_) | Expr::Param(_) => self.clone(),
            Expr::Neg(a) => Expr::negate(a.reflect_raw()),
            Expr::Add(v) => Expr::add(v.iter().map(Expr::reflect_raw).collect()),
            Expr::Sub(a, b) => Expr::Sub(Box::new(a.reflect_raw()), Box::new(b.reflect_raw())),
            Expr::Mul(v) => Expr::mul(v.iter().map(Expr::reflect_raw).collect()),
            Expr::Div(a, b) => Expr::Div(Box::new(a.reflect_raw()), Box::new(b.reflect_raw())),
            Expr::Pow(a, n) => Expr::Pow(Box::new(a.reflect_raw()), *n),
            Expr::Abs(a) => Expr::Abs(Box::new(a.reflect_raw())),
            Expr::Sign(a) => Expr::Sign(Box::new(a.reflect_raw())),
        }
    }

    /// Pulls negations outward: `(-a)(-b) -> ab`, `(-a)^2 -> a^2`,
    /// `|-a| -> |a|`, `a - (-b) -> a + b`. Leaves everything else alone.
    pub fn simplify(&self) -> Expr {
        let (negative, core) = self.split_sign();
        if negative {
            Expr::negate(core)
        } else {
            core
        }
    }

    fn split_sign(&self) -> (bool, Expr) {
        fn signed(neg: bool, e: Expr) -> Expr {
            if neg {
                Expr::negate(e)
            } else {
                e
            }
        }
        match self {
            Expr::Num(v) if *v < 0.0 => (true, Expr::Num(-v)),
            Expr::Num(_) | Expr::Imag | Expr::X | Expr::Param(_) => (false, self.clone()),
            Expr::Neg(a) => {
                let (s, c) = a.split_sign();
                (!s, c)
            }
            Expr::Add(v) => {
                let parts: Vec<(bool, Expr)> = v.iter().map(Expr::split_sign).collect();
                if parts.iter().all(|(s, _)| *s) {
                    (true, Expr::add(parts.into_iter().map(|(_, c)| c).collect()))
                } else {
                    (
                        false,
                        Expr::add(parts.into_iter().map(|(s, c)| signed(s, c)).collect()),
                    )
                }
            }
            Expr::Sub(a, b) => {
                let (sa, ca) = a.split_sign();
                let (sb, cb) = b.split_sign();
                match (sa, sb) {
                    (false, false) => (false, Expr::Sub(Box::new(ca), Box::new(cb))),
                    (false, true) => (false, Expr::add(vec![ca, cb])),
                    (true, false) => (true, Expr::add(vec![ca, cb])),
                    (true, true) => (false, Expr::Sub(Box::new(cb), Box::new(ca))),
                }
            }
            Expr::Mul(v) => {
                let mut neg = false;
                let mut cores = Vec::with_capacity(v.len());
                for f in v {
                    let (s, c) = f.split_sign();
                    neg ^= s;
                    cores.push(c);
                }
                (neg, Expr::mul(cores))
            }
            Expr::Div(a, b) => {
                let (sa, ca) = a.split_sign();
                let (sb, cb) = b.split_sign();
                (sa ^ sb, Expr::Div(Box::new(ca), Box::new(cb)))
            }
            Expr::Pow(a, n) => {
                let (s, c) = a.split_sign();
                (s && n % 2 != 0, Expr::Pow(Box::new(c), *n))
            }
            Expr::Abs(a) => (false, Expr::Abs(Box::new(a.split_sign().1))),
            Expr::Sign(a) => {
                let (s, c) = a.split_sign();
                (s, Expr::Sign(Box::new(c)))
            }
        }
    }

    /// True when `W*(-x) = W(x)` on the real line.
    ///
    /// Compares the canonical monomial forms when the expression lowers to
    /// one (sign-normalized trees otherwise), then confirms at 16 real
    /// points away from x = 0.
    pub fn is_pt_invariant(&self, env: &ParamEnv) -> Result<bool> {
        let reflected = self.conj_reflect();
        let symbolic = match (
            CoeffFn::<f64>::lower(self, env),
            CoeffFn::<f64>::lower(&reflected, env),
        ) {
            (Ok(a), Ok(b)) => a.approx_eq(&b, 1e-12),
            _ => self.simplify() == reflected,
        };
        let mut numeric = true;
        for k in 0..16 {
            let mag = 0.13 + 0.37 * (k / 2) as f64;
            let xr = if k % 2 == 0 { mag } else { -mag };
            let x = Complex::new(xr, 0.0);
            let lhs = reflected.eval(x, env)?;
            let rhs = self.eval(x, env)?;
            if (lhs - rhs).norm() > 1e-10 * (1.0 + rhs.norm()) {
                numeric = false;
                break;
            }
        }
        Ok(symbolic && numeric)
    }
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl Expr {
    fn is_atomic(&self) -> bool {
        matches!(
            self,
            Expr::Num(_) | Expr::Imag | Expr::X | Expr::Param(_) | Expr::Abs(_) | Expr::Sign(_)
        )
    }

    /// Operand of `-`, `*` or `/`: parenthesized unless it binds at least as
    /// tight as unary minus.
    fn fmt_tight(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            e if e.is_atomic() => write!(f, "{e}"),
            Expr::Pow(..) => write!(f, "{self}"),
            _ => write!(f, "({self})"),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(v) if *v < 0.0 => write!(f, "({})", fmt_num(*v)),
            Expr::Num(v) => write!(f, "{}", fmt_num(*v)),
            Expr::Imag => write!(f, "i"),
            Expr::X => write!(f, "x"),
            Expr::Param(p) => write!(f, "{p}"),
            Expr::Neg(a) => {
                write!(f, "-")?;
                a.fmt_tight(f)
            }
            Expr::Add(v) => {
                for (k, t) in v.iter().enumerate() {
                    if k == 0 {
                        match t {
                            Expr::Add(_) => write!(f, "({t})")?,
                            _ => write!(f, "{t}")?,
                        }
                    } else {
                        match t {
                            Expr::Add(_) | Expr::Sub(..) => write!(f, " + ({t})")?,
                            _ => write!(f, " + {t}")?,
                        }
                    }
                }
                Ok(())
            }
            Expr::Sub(a, b) => {
                match **a {
                    Expr::Add(_) | Expr::Sub(..) | Expr::Neg(_) | Expr::Mul(_) | Expr::Div(..) => {
                        write!(f, "{a}")?
                    }
                    _ => write!(f, "{a}")?,
                }
                match **b {
                    Expr::Add(_) | Expr::Sub(..) => write!(f, " - ({b})"),
                    _ => write!(f, " - {b}"),
                }
            }
            Expr::Mul(v) => {
                for (k, t) in v.iter().enumerate() {
                    if k > 0 {
                        write!(f, "*")?;
                    }
                    match t {
                        Expr::Div(..) if k > 0 => write!(f, "({t})")?,
                        Expr::Div(..) | Expr::Neg(_) if k == 0 => write!(f, "{t}")?,
                        Expr::Mul(_) => write!(f, "({t})")?,
                        _ => t.fmt_tight(f)?,
                    }
                }
                Ok(())
            }
            Expr::Div(a, b) => {
                match **a {
                    Expr::Mul(_) | Expr::Div(..) | Expr::Neg(_) => write!(f, "{a}")?,
                    _ => a.fmt_tight(f)?,
                }
                write!(f, "/")?;
                b.fmt_tight(f)
            }
            Expr::Pow(a, n) => {
                if a.is_atomic() && !matches!(**a, Expr::Num(v) if v < 0.0) {
                    write!(f, "{a}")?;
                } else {
                    write!(f, "({a})")?;
                }
                if *n < 0 {
                    write!(f, "^({n})")
                } else {
                    write!(f, "^{n}")
                }
            }
            Expr::Abs(a) => write!(f, "abs({a})"),
            Expr::Sign(a) => write!(f, "sign({a})"),
        }
    }
}
