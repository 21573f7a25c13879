use num_complex::Complex;

use super::{Contour, Domain};
use crate::error::{Error, Result};
use crate::linalg::BandMatrix;
use crate::operator::DiffOperator;
use crate::scalar::Real;

/// Point `x(u)` and the derivatives `x'(u)`, `x''(u)` of the contour.
fn contour_point<T: Real>(
    u: T,
    theta: T,
    contour: Contour,
) -> (Complex<T>, Complex<T>, Complex<T>) {
    let zero = T::zero();
    match contour {
        Contour::Straight => {
            let e = Complex::new(theta.cos(), theta.sin());
            (e * u, e, Complex::new(zero, zero))
        }
        Contour::PtSymmetric => {
            let t = theta.tan();
            let r = (u * u + T::one()).sqrt();
            (
                Complex::new(u, t * r),
                Complex::new(T::one(), t * u / r),
                Complex::new(zero, t / (r * r * r)),
            )
        }
    }
}

/// Second-order central differences with Dirichlet ends on the interior
/// nodes `u_j = x_min + (j + 1) h`, `h = (x_max - x_min) / (points + 1)`.
///
/// On a contour the chain rule gives `d/dx = (1/x') d/du` and
/// `d2/dx2 = (1/x'^2) d2/du2 - (x''/x'^3) d/du`.
pub fn fd_matrix<T: Real>(
    h: &DiffOperator<T>,
    x_min: f64,
    x_max: f64,
    points: usize,
    theta: f64,
    domain: Domain,
    contour: Contour,
) -> Result<BandMatrix<T>> {
    if !(theta.abs() < std::f64::consts::FRAC_PI_4) {
        return Err(Error::ThetaOutOfRange(theta));
    }
    if points < 3 {
        return Err(Error::InvalidScheme(format!(
            "need at least 3 points, got {points}"
        )));
    }
    if domain == Domain::Half && !(x_min > 0.0) {
        return Err(Error::InvalidScheme(format!(
            "half-line grid needs x_min > 0, got {x_min}"
        )));
    }
    if domain == Domain::Full && h.has_pole() {
        return Err(Error::PoleInCoefficient);
    }
    if domain == Domain::Full && h.has_sign() && x_min == -x_max && points % 2 == 1 {
        return Err(Error::InvalidScheme(
            "a centred grid needs an even number of points when coefficients have a kink at 0"
                .into(),
        ));
    }
    let n = points;
    let step = (T::lit(x_max) - T::lit(x_min)) / T::lit((n + 1) as f64);
    let th = T::lit(theta);
    let one = Complex::new(T::one(), T::zero());
    let mut m = BandMatrix::zeros(n, 1, 1);
    for j in 0..n {
        let u = T::lit(x_min) + step * T::lit((j + 1) as f64);
        let (x, xp, xpp) = contour_point(u, th, contour);
        if (h.has_pole() || h.has_sign()) && x.re.is_zero() {
            return Err(Error::PoleOnGrid(x.re.as_f64()));
        }
        let f0 = h.coeff(0).eval(x)?;
        let f1 = h.coeff(1).eval(x)?;
        let f2 = h.coeff(2).eval(x)?;
        let inv = one / xp;
        let d1 = inv / (step * T::lit(2.0));
        let d2 = inv * inv / (step * step);
        let skew = xpp * inv * inv * inv / (step * T::lit(2.0));
        // row stencil on (j-1, j, j+1)
        let lower = f2 * (d2 + skew) - f1 * d1;
        let diag = f0 - f2 * d2 * T::lit(2.0);
        let upper = f2 * (d2 - skew) + f1 * d1;
        m.add_at(j, j, diag);
        if j > 0 {
            m.add_at(j, j - 1, lower);
        }
        if j + 1 < n {
            m.add_at(j, j + 1, upper);
        }
    }
    Ok(m)
}
