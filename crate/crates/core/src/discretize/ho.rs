use num_complex::Complex;

use super::quadrature::sign_matrix_quadrature;
use super::SignMethod;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::operator::DiffOperator;
use crate::scalar::Real;

/// Real dense square matrix, row-major.
struct RealMat<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Real> RealMat<T> {
    fn identity(n: usize) -> Self {
        let mut a = vec![T::zero(); n * n];
        for i in 0..n {
            a[i * n + i] = T::one();
        }
        RealMat { n, a }
    }

    fn at(&self, i: usize, j: usize) -> T {
        self.a[i * self.n + j]
    }

    /// `self * X` for the tridiagonal position matrix with off-diagonal
    /// entries `x_off[k] = X[k][k+1] = X[k+1][k]`.
    fn times_tridiag(&self, x_off: &[T]) -> Self {
        let n = self.n;
        let mut out = vec![T::zero(); n * n];
        for i in 0..n {
            let row = &self.a[i * n..(i + 1) * n];
            let orow = &mut out[i * n..(i + 1) * n];
            for j in 0..n {
                let mut s = T::zero();
                if j > 0 {
                    s += row[j - 1] * x_off[j - 1];
                }
                if j + 1 < n {
                    s += row[j + 1] * x_off[j];
                }
                orow[j] = s;
            }
        }
        RealMat { n, a: out }
    }
}

/// Matrix of `sign(x)` between the first `n` Hermite functions.
///
/// `S_mn = (psi_m'(0) psi_n(0) - psi_m(0) psi_n'(0)) / (m - n)` for `m + n`
/// odd and zero otherwise; it does not depend on the basis frequency.
pub fn sign_matrix_exact<T: Real>(n: usize) -> Vec<T> {
    let mut psi = vec![T::zero(); n + 2];
    psi[0] = T::one() / T::PI().sqrt().sqrt();
    for k in 2..n + 2 {
        psi[k] = -(T::lit((k - 1) as f64) / T::lit(k as f64)).sqrt() * psi[k - 2];
    }
    let half = T::lit(0.5);
    let dpsi: Vec<T> = (0..n)
        .map(|k| {
            let up = (T::lit((k + 1) as f64) * half).sqrt() * psi[k + 1];
            let down = if k > 0 {
                (T::lit(k as f64) * half).sqrt() * psi[k - 1]
            } else {
                T::zero()
            };
            down - up
        })
        .collect();
    let mut s = vec![T::zero(); n * n];
    for i in 0..n {
        for j in 0..n {
            if (i + j) % 2 == 1 {
                s[i * n + j] = (dpsi[i] * psi[j] - psi[i] * dpsi[j]) / T::lit(i as f64 - j as f64);
            }
        }
    }
    s
}

/// Projects `h` onto the first `n_keep` oscillator states of frequency
/// `omega`. Operator products are formed in dimension `n_build` and then
/// truncated.
pub fn ho_matrix<T: Real>(
    h: &DiffOperator<T>,
    n_keep: usize,
    n_build: usize,
    omega: f64,
    sign_method: SignMethod,
) -> Result<Matrix<T>> {
    if h.has_pole() {
        return Err(Error::PoleInCoefficient);
    }
    let nb = n_build;
    let nk = n_keep;
    let w = T::lit(omega);
    let half = T::lit(0.5);
    let x_off: Vec<T> = (1..nb)
        .map(|k| (T::lit(k as f64) / (T::lit(2.0) * w)).sqrt())
        .collect();
    let d_off: Vec<T> = (1..nb)
        .map(|k| (w * half * T::lit(k as f64)).sqrt())
        .collect();
    let max_pow = (0..3)
        .filter_map(|m| h.coeff(m).degree())
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let mut xpow = vec![RealMat::identity(nb)];
    for p in 1..=max_pow {
        let next = xpow[p - 1].times_tridiag(&x_off);
        xpow.push(next);
    }
    let sign = if h.has_sign() {
        Some(match sign_method {
            SignMethod::Exact => sign_matrix_exact::<T>(nb),
            SignMethod::Quadrature => sign_matrix_quadrature::<T>(nb, 2 * nb)?,
        })
    } else {
        None
    };
    // columns of G_m that D^m can reach from the kept block
    let wcols = (nk + 2).min(nb);
    let cz = Complex::new(T::zero(), T::zero());
    let mut out = Matrix::<T>::zeros(nk, nk);
    for m in 0..3 {
        let f = h.coeff(m);
        if f.is_zero() {
            continue;
        }
        let mut g = vec![cz; nk * wcols];
        for (key, c) in f.terms() {
            let xp = &xpow[key.power as usize];
            let band = key.power as usize;
            for i in 0..nk {
                let lo = i.saturating_sub(band);
                let hi = (i + band).min(nb - 1);
                for k in 0..wcols {
                    let v = match (&sign, key.odd_sign) {
                        (Some(s), true) => {
                            (lo..=hi).fold(T::zero(), |acc, l| acc + xp.at(i, l) * s[l * nb + k])
                        }
                        _ => xp.at(i, k),
                    };
                    if !v.is_zero() {
                        g[i * wcols + k] += c * v;
                    }
                }
            }
        }
        // multiply by D^m, which is banded with half-width m
        for i in 0..nk {
            for j in 0..nk {
                let mut acc = cz;
                let lo = j.saturating_sub(m);
                let hi = (j + m).min(wcols - 1);
                for k in lo..=hi {
                    let dm = d_power(&d_off, m, k, j);
                    if !dm.is_zero() {
                        acc += g[i * wcols + k] * dm;
                    }
                }
                out[(i, j)] += acc;
            }
        }
    }
    Ok(out)
}

/// `(D^m)[k][j]` for `m <= 2` from the off-diagonal entries
/// `D[k][k+1] = d_off[k]`, `D[k+1][k] = -d_off[k]`.
fn d_power<T: Real>(d_off: &[T], m: usize, k: usize, j: usize) -> T {
    let nb = d_off.len() + 1;
    let d = |r: usize, c: usize| -> T {
        if c == r + 1 {
            d_off[r]
        } else if r == c + 1 {
            -d_off[c]
        } else {
            T::zero()
        }
    };
    match m {
        0 => {
            if k == j {
                T::one()
            } else {
                T::zero()
            }
        }
        1 => d(k, j),
        _ => {
            let lo = k.saturating_sub(1);
            let hi = (k + 1).min(nb - 1);
            (lo..=hi).fold(T::zero(), |acc, l| acc + d(k, l) * d(l, j))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::ParamEnv;
    use crate::spectra::eigenvalues_dense;

    #[test]
    fn harmonic_is_exact() {
        let h = DiffOperator::<f64>::parse_p_form("0", "x^2", &ParamEnv::new()).unwrap();
        for omega in [0.5, 1.0, 2.0] {
            let m = ho_matrix(&h, 32, 64, omega, SignMethod::Exact).unwrap();
            let ev = eigenvalues_dense(&m).unwrap();
            for (n, e) in ev.iter().take(6).enumerate() {
                assert!(
                    (e.re - (2 * n + 1) as f64).abs() < 1e-7 && e.im.abs() < 1e-7,
                    "{omega} {n} {e}"
                );
            }
        }
    }

    #[test]
    fn sign_matrix_squares_to_identity_on_low_block() {
        let n = 160;
        let s = sign_matrix_exact::<f64>(n);
        for i in 0..10 {
            for j in 0..10 {
                let v: f64 = (0..n).map(|k| s[i * n + k] * s[k * n + j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 0.06, "{i} {j} {v}");
            }
        }
        // <0|sign|1> = 2 int_0^inf psi0 psi1 = sqrt(2/pi)
        assert!((s[1] - (2.0 / std::f64::consts::PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn poles_are_rejected() {
        let h = DiffOperator::<f64>::parse_p_form("0", "x^2 + 2/x^2", &ParamEnv::new()).unwrap();
        assert_eq!(
            ho_matrix(&h, 8, 16, 1.0, SignMethod::Exact).unwrap_err(),
            Error::PoleInCoefficient
        );
    }

    #[test]
    fn abs_potential_agrees_between_sign_methods() {
        let h = DiffOperator::<f64>::parse_p_form("0", "2*|x| + x^4", &ParamEnv::new()).unwrap();
        let exact =
            eigenvalues_dense(&ho_matrix(&h, 60, 120, 2.0, SignMethod::Exact).unwrap()).unwrap();
        let quad = eigenvalues_dense(&ho_matrix(&h, 60, 120, 2.0, SignMethod::Quadrature).unwrap())
            .unwrap();
        assert!((exact[0].re - 1.9695075).abs() < 1e-5, "{}", exact[0]);
        assert!((exact[0] - quad[0]).norm() < 5e-3);
    }
}
