use num_complex::Complex;
use num_traits::Zero;

use super::dense::Matrix;
use crate::error::{Error, Result};
use crate::scalar::{abs1, Real};

/// Square band matrix with `kl` sub- and `ku` super-diagonals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix<T: Real = f64> {
    n: usize,
    kl: usize,
    ku: usize,
    data: Vec<Complex<T>>,
}

fn cz<T: Real>() -> Complex<T> {
    Complex::new(T::zero(), T::zero())
}

impl<T: Real> BandMatrix<T> {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        BandMatrix {
            n,
            kl,
            ku,
            data: vec![cz(); n * (kl + ku + 1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn bandwidths(&self) -> (usize, usize) {
        (self.kl, self.ku)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        j + self.kl >= i && j <= i + self.ku
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        i * (self.kl + self.ku + 1) + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> Complex<T> {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            cz()
        }
    }

    /// Adds `v` at `(i, j)`, which must lie inside the band.
    pub fn add_at(&mut self, i: usize, j: usize, v: Complex<T>) {
        assert!(self.in_band(i, j), "({i}, {j}) outside the band");
        let s = self.slot(i, j);
        self.data[s] += v;
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn norm_fro(&self) -> T {
        self.data
            .iter()
            .fold(T::zero(), |a, z| a + z.norm_sqr())
            .sqrt()
    }

    pub fn to_dense(&self) -> Matrix<T> {
        let mut m = Matrix::zeros(self.n, self.n);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            for j in lo..=hi {
                m[(i, j)] = self.get(i, j);
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).fold(cz(), |acc, j| acc + self.get(i, j) * v[j])
            })
            .collect()
    }

    /// `self - sigma I`.
    pub fn shifted(&self, sigma: Complex<T>) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            out.add_at(i, i, -sigma);
        }
        out
    }
}

/// Band LU with partial pivoting; `U` gets bandwidth `kl + ku`.
#[derive(Debug, Clone)]
pub struct BandLu<T: Real = f64> {
    n: usize,
    kl: usize,
    w: usize,
    // row `pos` holds columns pos - kl ..= pos + kl + ku
    u: Vec<Complex<T>>,
    l: Vec<Complex<T>>,
    piv: Vec<usize>,
}

impl<T: Real> BandLu<T> {
    pub fn new(a: &BandMatrix<T>) -> Result<Self> {
        let (n, kl, ku) = (a.n, a.kl, a.ku);
        if n == 0 {
            return Err(Error::InvalidArgument("empty band matrix".into()));
        }
        let w = 2 * kl + ku + 1;
        let mut u = vec![cz(); n * w];
        let idx = |i: usize, j: usize| i * w + (j + kl - i);
        for i in 0..n {
            let lo = i.saturating_sub(kl);
            let hi = (i + ku).min(n - 1);
            for j in lo..=hi {
                u[idx(i, j)] = a.get(i, j);
            }
        }
        let tiny = T::eps() * a.norm_fro().max(T::min_positive_value());
        let mut l = vec![cz(); n * kl.max(1)];
        let mut piv = vec![0; n];
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let p = (k..=last)
                .max_by(|&x, &y| abs1(u[idx(x, k)]).partial_cmp(&abs1(u[idx(y, k)])).unwrap())
                .unwrap();
            piv[k] = p;
            let jhi = (k + kl + ku).min(n - 1);
            if p != k {
                for j in k..=jhi {
                    u.swap(idx(k, j), idx(p, j));
                }
            }
            if abs1(u[idx(k, k)]).is_zero() {
                u[idx(k, k)] = Complex::new(tiny, T::zero());
            }
            let pivot = u[idx(k, k)];
            for i in k + 1..=last {
                let f = u[idx(i, k)] / pivot;
                u[idx(i, k)] = cz();
                l[k * kl.max(1) + (i - k - 1)] = f;
                if f.is_zero() {
                    continue;
                }
                for j in k + 1..=jhi {
                    let v = u[idx(k, j)];
                    u[idx(i, j)] -= f * v;
                }
            }
        }
        Ok(BandLu {
            n,
            kl,
            w,
            u,
            l,
            piv,
        })
    }

    pub fn solve(&self, b: &[Complex<T>]) -> Vec<Complex<T>> {
        let (n, kl, w) = (self.n, self.kl, self.w);
        let idx = |i: usize, j: usize| i * w + (j + kl - i);
        let mut x = b.to_vec();
        for k in 0..n {
            x.swap(k, self.piv[k]);
            let xk = x[k];
            for i in k + 1..=(k + kl).min(n - 1) {
                x[i] -= self.l[k * kl.max(1) + (i - k - 1)] * xk;
            }
        }
        let ubw = w - kl - 1;
        for i in (0..n).rev() {
            let mut s = x[i];
            for j in i + 1..=(i + ubw).min(n - 1) {
                s -= self.u[idx(i, j)] * x[j];
            }
            x[i] = s / self.u[idx(i, i)];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn band_lu_matches_dense_product() {
        let n = 9;
        let mut a = BandMatrix::<f64>::zeros(n, 2, 1);
        for i in 0..n {
            for j in i.saturating_sub(2)..=(i + 1).min(n - 1) {
                // weak diagonal forces pivoting
                let v = Complex::new(
                    ((i * 7 + j * 3) % 5) as f64 - 2.0,
                    (i as f64 - j as f64) * 0.3,
                );
                a.add_at(i, j, v);
            }
        }
        let x: Vec<_> = (0..n)
            .map(|k| Complex::new(1.0 + k as f64, -(k as f64) * 0.5))
            .collect();
        let b = a.mul_vec(&x);
        assert_eq!(a.to_dense().mul_vec(&x), b);
        let got = BandLu::new(&a).unwrap().solve(&b);
        for (g, want) in got.iter().zip(&x) {
            assert!((g - want).norm() < 1e-10, "{g} vs {want}");
        }
    }
}
