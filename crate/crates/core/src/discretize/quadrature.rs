use crate::error::{Error, Result};
use crate::scalar::Real;

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `d` and
/// off-diagonal `e` (`e[i]` couples `i` and `i + 1`) by implicit QL.
fn tridiag_eigenvalues<T: Real>(mut d: Vec<T>, off: &[T]) -> Result<Vec<T>> {
    let n = d.len();
    let mut e = off.to_vec();
    e.resize(n, T::zero());
    let two = T::lit(2.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::eps() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::QuadratureBreakdown);
            }
            let mut g = (d[l + 1] - d[l]) / (two * e[l]);
            let mut r = g.hypot(T::one());
            let sr = if g >= T::zero() { r } else { -r };
            g = d[m] - d[l] + e[l] / (g + sr);
            let (mut s, mut c, mut p) = (T::one(), T::one(), T::zero());
            let mut early = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r.is_zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    early = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + two * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if early {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Nodes of the `n`-point Gauss–Hermite rule (weight `exp(-x^2)`).
pub fn gauss_hermite_nodes<T: Real>(n: usize) -> Result<Vec<T>> {
    let off: Vec<T> = (1..n)
        .map(|k| (T::lit(k as f64) * T::lit(0.5)).sqrt())
        .collect();
    let nodes = tridiag_eigenvalues(vec![T::zero(); n], &off)?;
    if nodes.iter().any(|x| !x.is_finite()) {
        return Err(Error::QuadratureBreakdown);
    }
    Ok(nodes)
}

/// Hermite-function values `psi_0..psi_{nq-1}` at `y`, normalized to unit
/// length. With Christoffel weights `1 / sum psi_l(y)^2` the weighted
/// products `w psi_i psi_j` equal `u_i u_j` for this vector.
fn unit_hermite_vector<T: Real>(y: T, nq: usize) -> Vec<T> {
    let mut u = vec![T::zero(); nq];
    u[0] = T::one();
    if nq > 1 {
        u[1] = T::lit(2.0).sqrt() * y;
    }
    let big = T::lit(1e100);
    for k in 1..nq - 1 {
        let kf = T::lit(k as f64);
        u[k + 1] = (T::lit(2.0) / (kf + T::one())).sqrt() * y * u[k]
            - (kf / (kf + T::one())).sqrt() * u[k - 1];
        if u[k + 1].abs() > big {
            for v in u[..=k + 1].iter_mut() {
                *v /= big;
            }
        }
    }
    let norm = u.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
    for v in u.iter_mut() {
        *v /= norm;
    }
    u
}

/// Matrix of `sign(x)` between the first `n` Hermite functions by
/// Gauss–Hermite quadrature with `nq` nodes.
pub fn sign_matrix_quadrature<T: Real>(n: usize, nq: usize) -> Result<Vec<T>> {
    if nq < n {
        return Err(Error::InvalidScheme(format!(
            "{nq} quadrature nodes for {n} functions"
        )));
    }
    let nodes = gauss_hermite_nodes::<T>(nq)?;
    let mut s = vec![T::zero(); n * n];
    for y in nodes {
        if y.is_zero() {
            continue;
        }
        let sg = if y > T::zero() { T::one() } else { -T::one() };
        let u = unit_hermite_vector(y, nq);
        if u.iter().any(|v| !v.is_finite()) {
            return Err(Error::QuadratureBreakdown);
        }
        for i in 0..n {
            let ui = sg * u[i];
            if ui.is_zero() {
                continue;
            }
            for j in 0..n {
                s[i * n + j] += ui * u[j];
            }
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_rules() {
        let x = gauss_hermite_nodes::<f64>(3).unwrap();
        let r = (1.5f64).sqrt();
        assert!((x[0] + r).abs() < 1e-14 && x[1].abs() < 1e-14 && (x[2] - r).abs() < 1e-14);
        // weights from the unit vectors reproduce sqrt(pi) sum = int exp(-x^2)
        let nodes = gauss_hermite_nodes::<f64>(40).unwrap();
        assert!(nodes.iter().all(|v| v.is_finite()));
    }

    #[test]
    fn large_rule_stays_finite() {
        let s = sign_matrix_quadrature::<f64>(20, 1200).unwrap();
        assert!(s.iter().all(|v| v.is_finite()));
        assert!((s[1] - (2.0 / std::f64::consts::PI).sqrt()).abs() < 5e-3);
    }
}
