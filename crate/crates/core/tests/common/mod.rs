//! Strategies and property checks shared by the property suite and the
//! acceptance run.
#![allow(dead_code)]

use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use susyfactory::discretize::{discretize, Scheme};
use susyfactory::expr::{parse, Expr, ParamEnv};
use susyfactory::linalg::{Lu, Matrix};
use susyfactory::operator::{make_generators, CoeffFn, Convention, DiffOperator, MonoKey};
use susyfactory::spectra::{eigenvalues_dense, eigenvector, residual};
use susyfactory::Matrix64;

type Check = Result<(), TestCaseError>;

fn env() -> ParamEnv {
    ParamEnv::new()
        .with("g", 0.7)
        .with("k", 1.3)
        .with("lam", 2.5)
}

fn leaf() -> impl Strategy<Value = Expr> {
    prop_oneof![
        (0u32..40).prop_map(|n| Expr::Num(n as f64 / 4.0)),
        Just(Expr::Imag),
        Just(Expr::X),
        prop::sample::select(vec!["g", "k", "lam"]).prop_map(|p| Expr::Param(p.into())),
    ]
}

/// Random expression trees; `with_kinks` adds `abs` and `sign` nodes.
pub fn tree(with_kinks: bool) -> impl Strategy<Value = Expr> {
    leaf().prop_recursive(4, 24, 3, move |inner| {
        let mut arms: Vec<BoxedStrategy<Expr>> = vec![
            inner.clone().prop_map(|e| Expr::Neg(Box::new(e))).boxed(),
            prop::collection::vec(inner.clone(), 2..4)
                .prop_map(Expr::Add)
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Sub(Box::new(a), Box::new(b)))
                .boxed(),
            prop::collection::vec(inner.clone(), 2..4)
                .prop_map(Expr::Mul)
                .boxed(),
            (inner.clone(), inner.clone())
                .prop_map(|(a, b)| Expr::Div(Box::new(a), Box::new(b)))
                .boxed(),
            (inner.clone(), -2i32..4)
                .prop_map(|(a, n)| Expr::Pow(Box::new(a), n))
                .boxed(),
        ];
        if with_kinks {
            arms.push(inner.clone().prop_map(|e| Expr::Abs(Box::new(e))).boxed());
            arms.push(inner.prop_map(|e| Expr::Sign(Box::new(e))).boxed());
        }
        prop::strategy::Union::new(arms)
    })
}

fn eval(e: &Expr, x: f64) -> Option<Complex64> {
    e.eval(Complex64::new(x, 0.0), &env())
        .ok()
        .filter(|z| z.re.is_finite() && z.im.is_finite())
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * (1.0 + a.norm().max(b.norm()))
}

const POINTS: [f64; 4] = [-1.7, -0.45, 0.3, 1.15];

pub fn round_trip(e: &Expr) -> Check {
    let first = parse(&e.to_string()).map_err(|err| TestCaseError::fail(format!("{e}: {err}")))?;
    let again = parse(&first.to_string()).unwrap();
    prop_assert_eq!(&again, &first);
    for x in POINTS {
        match (eval(e, x), eval(&first, x)) {
            (Some(a), Some(b)) => {
                prop_assert!(close(a, b, 1e-12), "{} at {}: {} vs {}", e, x, a, b)
            }
            (None, None) => {}
            (a, b) => prop_assert!(false, "{} at {}: {:?} vs {:?}", e, x, a, b),
        }
    }
    Ok(())
}

pub fn involution(e: &Expr) -> Check {
    let once = e.conj_reflect();
    let twice = once.conj_reflect();
    for x in POINTS {
        if let (Some(a), Some(b)) = (eval(e, x), eval(&twice, x)) {
            prop_assert!(close(a, b, 1e-12), "{} at {}", e, x);
        }
        // W*(-x) evaluated directly
        if let (Some(a), Some(b)) = (eval(&once, x), eval(e, -x)) {
            prop_assert!(close(a, b.conj(), 1e-12), "{} at {}", e, x);
        }
    }
    Ok(())
}

pub fn derivative(e: &Expr) -> Check {
    let d = e.differentiate();
    let h = 1e-5;
    for x in POINTS {
        let at = |t: f64| eval(e, x + t * h);
        let (Some(f1), Some(f_1), Some(f2), Some(f_2), Some(dv)) =
            (at(1.0), at(-1.0), at(2.0), at(-2.0), eval(&d, x))
        else {
            continue;
        };
        // skip points near a pole, where the difference quotient means nothing
        if f1.norm().max(f_1.norm()) > 1e4 {
            continue;
        }
        let fd = (8.0 * (f1 - f_1) - (f2 - f_2)) / (12.0 * h);
        prop_assert!(close(fd, dv, 1e-6), "{} at {}: fd {} vs {}", e, x, fd, dv);
    }
    Ok(())
}

pub fn coeff() -> impl Strategy<Value = CoeffFn> {
    prop::collection::vec((-2i32..4, any::<bool>(), -3i32..4, -3i32..4), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(CoeffFn::zero(), |acc, (p, s, re, im)| {
                let c = CoeffFn::monomial(
                    Complex64::new(re as f64 / 2.0, im as f64 / 2.0),
                    MonoKey::new(p, s),
                );
                acc.add(&c)
            })
    })
}

/// `(AB)C = A(BC)` for first-order `A`, `B` and a multiplication operator `C`.
pub fn associativity(a: [CoeffFn; 2], b: [CoeffFn; 2], c: CoeffFn) -> Check {
    let [a0, a1] = a;
    let [b0, b1] = b;
    let a = DiffOperator::from_coeffs(a0, a1, CoeffFn::zero());
    let b = DiffOperator::from_coeffs(b0, b1, CoeffFn::zero());
    let c = DiffOperator::multiplication(c);
    let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
    let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
    prop_assert!(left.approx_eq(&right, 1e-12), "{} vs {}", left, right);
    Ok(())
}

pub fn random_matrix(n: usize, seed: u64, scale: f64) -> Matrix64 {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    Matrix::from_fn(n, n, |_, _| Complex64::new(next(), next()) * scale)
}

/// Largest distance after pairing every value of `a` with its nearest unused
/// partner in `b`.
pub fn mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for z in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, w)| (j, (z - w).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d);
    }
    worst
}

/// Spectrum, trace and eigenvector residuals under `M -> S^-1 M S`.
pub fn similarity(n: usize, seed: u64) -> Check {
    let m = random_matrix(n, seed, 2.0);
    let s = Matrix::identity(n).add(&random_matrix(n, seed ^ 0x9e37, 0.3));
    let lu = Lu::new(&s).unwrap();
    let ms = m.matmul(&s);
    let cols: Vec<Vec<Complex64>> = (0..n)
        .map(|j| lu.solve(&(0..n).map(|i| ms[(i, j)]).collect::<Vec<_>>()))
        .collect();
    let sim = Matrix::from_fn(n, n, |i, j| cols[j][i]);
    let ev = eigenvalues_dense(&m).unwrap();
    let ev_sim = eigenvalues_dense(&sim).unwrap();
    let d = mismatch(&ev, &ev_sim);
    prop_assert!(d < 1e-9, "n = {}: {:e}", n, d);
    let sum: Complex64 = ev.iter().sum();
    prop_assert!((sum - m.trace()).norm() < 1e-11 * n as f64);
    let scale = m.norm_fro();
    for &lam in ev.iter().take(3) {
        let v = eigenvector(&m, lam).unwrap();
        prop_assert!(residual(&m, lam, &v) < 1e-10 * scale);
    }
    Ok(())
}

/// Oscillator-basis matrices of a random generator pair: `AB` and `BA` have
/// the same spectrum.
pub fn ab_ba(n: usize, c: [i32; 4], omega: f64) -> Check {
    let w = format!(
        "i*({})*x + ({})*x^2 + i*({})*x^3 + ({})",
        c[0], c[1], c[2], c[3]
    );
    let w = parse(&w).unwrap();
    let gen = make_generators::<f64>(Convention::TypeI, &[w], &ParamEnv::new()).unwrap();
    let scheme = Scheme::oscillator(n, omega);
    let a = discretize(&gen.a, &scheme).unwrap().to_dense();
    let b = discretize(&gen.b, &scheme).unwrap().to_dense();
    let ab = eigenvalues_dense(&a.matmul(&b)).unwrap();
    let ba = eigenvalues_dense(&b.matmul(&a)).unwrap();
    let scale = ab.iter().chain(&ba).map(|z| z.norm()).fold(1.0, f64::max);
    let d = mismatch(&ab, &ba);
    prop_assert!(d <= 1e-8 * scale, "n = {}: {:e} at scale {:e}", n, d, scale);
    Ok(())
}

pub fn ab_ba_args() -> impl Strategy<Value = (usize, [i32; 4], f64)> {
    (
        8usize..=60,
        prop::array::uniform4(-4i32..=4),
        prop::sample::select(vec![0.5, 1.0, 2.0]),
    )
}
