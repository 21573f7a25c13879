//! Dense general complex eigensolver: balancing, Householder reduction to
//! Hessenberg form and single-shift complex QR with deflation.

use std::cmp::Ordering;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{BandLu, BandMatrix, Lu, Matrix};
use crate::scalar::{abs1, Real};

/// Iterations allowed per eigenvalue before giving up.
pub const MAX_ITER_PER_EIGENVALUE: usize = 30;

fn cz<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

/// Ascending real part, ties broken by imaginary part.
pub fn sort_spectrum<T: Real>(v: &mut [Complex<T>]) {
    v.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(Ordering::Equal))
    });
}

/// Diagonal similarity scaling by powers of two so that row and column
/// norms are comparable.
fn balance<T: Real>(a: &mut [Complex<T>], n: usize) {
    let two = T::lit(2.0);
    let four = T::lit(4.0);
    loop {
        let mut done = true;
        for i in 0..n {
            let mut c = T::zero();
            let mut r = T::zero();
            for j in 0..n {
                if j != i {
                    c += abs1(a[j * n + i]);
                    r += abs1(a[i * n + j]);
                }
            }
            if c.is_zero() || r.is_zero() {
                continue;
            }
            let total = c + r;
            let mut f = T::one();
            let mut g = r / two;
            while c < g {
                f *= two;
                c *= four;
            }
            g = r * two;
            while c >= g {
                f /= two;
                c /= four;
            }
            if (c + r) / f < T::lit(0.95) * total {
                done = false;
                let inv = T::one() / f;
                for j in 0..n {
                    a[i * n + j] *= inv;
                    a[j * n + i] *= f;
                }
            }
        }
        if done {
            break;
        }
    }
}

/// In-place reduction to upper Hessenberg form.
fn hessenberg<T: Real>(a: &mut [Complex<T>], n: usize) {
    if n < 3 {
        return;
    }
    let mut v = vec![cz::<T>(); n];
    let mut s = vec![cz::<T>(); n];
    for k in 0..n - 2 {
        let m = n - k - 1;
        let mut xnorm2 = T::zero();
        for i in 0..m {
            xnorm2 += a[(k + 1 + i) * n + k].norm_sqr();
        }
        let tail2 = xnorm2 - a[(k + 1) * n + k].norm_sqr();
        if tail2 <= T::zero() {
            continue;
        }
        let xnorm = xnorm2.sqrt();
        let x0 = a[(k + 1) * n + k];
        let phase = if x0.norm() > T::zero() {
            x0 / x0.norm()
        } else {
            Complex::new(T::one(), T::zero())
        };
        let beta = -phase * xnorm;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        v[0] -= beta;
        let vn2 = v[..m].iter().fold(T::zero(), |acc, z| acc + z.norm_sqr());
        if vn2.is_zero() {
            continue;
        }
        let tau = T::lit(2.0) / vn2;
        // left: rows k+1.., columns k..
        for sj in s[k..n].iter_mut() {
            *sj = cz();
        }
        for i in 0..m {
            let vi = v[i].conj();
            let row = &a[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k..n {
                s[j] += vi * row[j];
            }
        }
        for i in 0..m {
            let f = v[i] * tau;
            let row = &mut a[(k + 1 + i) * n..(k + 2 + i) * n];
            for j in k..n {
                row[j] -= f * s[j];
            }
        }
        // right: all rows, columns k+1..
        for i in 0..n {
            let row = &mut a[i * n..(i + 1) * n];
            let mut t = cz::<T>();
            for l in 0..m {
                t += row[k + 1 + l] * v[l];
            }
            let t = t * tau;
            for l in 0..m {
                row[k + 1 + l] -= t * v[l].conj();
            }
        }
        a[(k + 1) * n + k] = beta;
        for i in 1..m {
            a[(k + 1 + i) * n + k] = cz();
        }
    }
}

/// `(c, s, r)` with `[c s; -conj(s) c] [a; b] = [r; 0]`, `c` real.
fn givens<T: Real>(a: Complex<T>, b: Complex<T>) -> (T, Complex<T>, Complex<T>) {
    let na = a.norm();
    let nb = b.norm();
    if nb.is_zero() {
        return (T::one(), cz(), a);
    }
    if na.is_zero() {
        return (T::zero(), Complex::new(T::one(), T::zero()), b);
    }
    let rho = na.hypot(nb);
    let phase = a / na;
    (na / rho, phase * b.conj() / rho, phase * rho)
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson<T: Real>(a: Complex<T>, b: Complex<T>, c: Complex<T>, d: Complex<T>) -> Complex<T> {
    let half = T::lit(0.5);
    let mid = (a + d) * half;
    let diff = (a - d) * half;
    let disc = (diff * diff + b * c).sqrt();
    let mu1 = mid + disc;
    let mu2 = mid - disc;
    if (mu1 - d).norm() <= (mu2 - d).norm() {
        mu1
    } else {
        mu2
    }
}

/// QR iteration on an upper Hessenberg matrix; returns the eigenvalues in
/// deflation order.
fn hessenberg_qr<T: Real>(a: &mut [Complex<T>], n: usize) -> Result<Vec<Complex<T>>> {
    let eps = T::eps();
    let norm_est = a.iter().fold(T::zero(), |m, z| m.max(abs1(*z)));
    let small = T::min_positive_value() / eps;
    let mut eig = vec![cz::<T>(); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut rot: Vec<(T, Complex<T>)> = Vec::with_capacity(n);
    loop {
        if hi == 0 {
            eig[0] = a[0];
            return Ok(eig);
        }
        let mut l = 0;
        for k in (1..=hi).rev() {
            let sub = abs1(a[k * n + k - 1]);
            let mut d = abs1(a[(k - 1) * n + k - 1]) + abs1(a[k * n + k]);
            if d.is_zero() {
                d = norm_est;
            }
            if sub <= eps * d || sub <= small {
                a[k * n + k - 1] = cz();
                l = k;
                break;
            }
        }
        if l == hi {
            eig[hi] = a[hi * n + hi];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > MAX_ITER_PER_EIGENVALUE {
            return Err(Error::NoConvergence {
                found: n - 1 - hi,
                dimension: n,
            });
        }
        let sigma = if iter.is_multiple_of(10) {
            a[hi * n + hi] + Complex::new(T::lit(0.75) * abs1(a[hi * n + hi - 1]), T::zero())
        } else {
            wilkinson(
                a[(hi - 1) * n + hi - 1],
                a[(hi - 1) * n + hi],
                a[hi * n + hi - 1],
                a[hi * n + hi],
            )
        };
        for i in l..=hi {
            a[i * n + i] -= sigma;
        }
        rot.clear();
        for k in l..hi {
            let (c, s, r) = givens(a[k * n + k], a[(k + 1) * n + k]);
            a[k * n + k] = r;
            a[(k + 1) * n + k] = cz();
            let sc = s.conj();
            for j in k + 1..=hi {
                let x = a[k * n + j];
                let y = a[(k + 1) * n + j];
                a[k * n + j] = x * c + s * y;
                a[(k + 1) * n + j] = y * c - sc * x;
            }
            rot.push((c, s));
        }
        for (idx, &(c, s)) in rot.iter().enumerate() {
            let k = l + idx;
            let sc = s.conj();
            for i in l..=(k + 1) {
                let x = a[i * n + k];
                let y = a[i * n + k + 1];
                a[i * n + k] = x * c + sc * y;
                a[i * n + k + 1] = y * c - s * x;
            }
        }
        for i in l..=hi {
            a[i * n + i] += sigma;
        }
    }
}

/// All eigenvalues of a square matrix, sorted.
pub fn eigenvalues_dense<T: Real>(m: &Matrix<T>) -> Result<Vec<Complex<T>>> {
    if !m.is_square() || m.rows() == 0 {
        return Err(Error::InvalidArgument(format!(
            "eigenvalues need a nonempty square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if !m.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let n = m.rows();
    let mut a: Vec<Complex<T>> = (0..n).flat_map(|i| m.row(i).to_vec()).collect();
    balance(&mut a, n);
    hessenberg(&mut a, n);
    let mut eig = hessenberg_qr(&mut a, n)?;
    sort_spectrum(&mut eig);
    Ok(eig)
}

fn start_vector<T: Real>(n: usize) -> Vec<Complex<T>> {
    // rough start so no symmetry class of eigenvectors is missed
    let mut state: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    (0..n)
        .map(|_| Complex::new(T::lit(next()), T::lit(next())))
        .collect()
}

fn normalize<T: Real>(v: &mut [Complex<T>]) -> T {
    let nrm = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    if nrm > T::zero() {
        for z in v.iter_mut() {
            *z /= nrm;
        }
    }
    nrm
}

/// `||M v - lam v|| / ||v||`.
pub fn residual<T: Real>(m: &Matrix<T>, lam: Complex<T>, v: &[Complex<T>]) -> T {
    let mv = m.mul_vec(v);
    let r = mv
        .iter()
        .zip(v)
        .fold(T::zero(), |a, (x, y)| a + (*x - lam * *y).norm_sqr())
        .sqrt();
    let nv = v.iter().fold(T::zero(), |a, z| a + z.norm_sqr()).sqrt();
    r / nv
}

/// Right eigenvector for a computed eigenvalue by inverse iteration.
pub fn eigenvector<T: Real>(m: &Matrix<T>, lam: Complex<T>) -> Result<Vec<Complex<T>>> {
    let n = m.rows();
    let scale = m.norm_fro().max(T::one());
    let sigma = lam + Complex::new(T::eps() * scale, T::zero());
    let shifted = m.sub(&Matrix::identity(n).scale(sigma));
    let lu = Lu::new(&shifted)?;
    let mut v = start_vector::<T>(n);
    normalize(&mut v);
    for _ in 0..4 {
        v = lu.solve(&v);
        if normalize(&mut v).is_zero() || !v.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFiniteMatrix);
        }
    }
    Ok(v)
}

/// Refines approximate eigenvalues of a band matrix by shift-invert
/// iteration with Rayleigh-quotient shift updates. Each seed yields the
/// eigenvalue its iteration settles on, in seed order.
pub fn refine_banded<T: Real>(m: &BandMatrix<T>, seeds: &[Complex<T>]) -> Result<Vec<Complex<T>>> {
    if !m.is_finite() {
        return Err(Error::NonFiniteMatrix);
    }
    let n = m.dim();
    let tol = T::eps() * T::lit(64.0);
    seeds
        .iter()
        .map(|&seed| {
            let nudge = Complex::new(T::eps().sqrt(), T::eps().sqrt()) * (T::one() + seed.norm());
            let mut sigma = seed + nudge * T::lit(1e-3);
            let mut lu = BandLu::new(&m.shifted(sigma))?;
            let mut x = start_vector::<T>(n);
            normalize(&mut x);
            let mut lam = seed;
            let mut settled = 0;
            for it in 0..60 {
                let y = lu.solve(&x);
                let mu = x
                    .iter()
                    .zip(&y)
                    .fold(cz::<T>(), |a, (xi, yi)| a + xi.conj() * *yi);
                if mu.norm().is_zero() || !mu.re.is_finite() {
                    break;
                }
                let next = sigma + Complex::new(T::one(), T::zero()) / mu;
                x = y;
                normalize(&mut x);
                let step = (next - lam).norm();
                lam = next;
                if step <= tol * (T::one() + lam.norm()) {
                    settled += 1;
                    if settled >= 2 {
                        break;
                    }
                } else {
                    settled = 0;
                }
                if it >= 2 && step > tol * (T::one() + lam.norm()) {
                    sigma = lam + nudge * T::lit(1e-6);
                    lu = BandLu::new(&m.shifted(sigma))?;
                }
            }
            if !lam.re.is_finite() || !lam.im.is_finite() {
                return Err(Error::NonFiniteMatrix);
            }
            Ok(lam)
        })
        .collect()
}
