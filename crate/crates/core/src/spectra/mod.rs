//! Eigenvalues of discretized operators and convergence studies.

mod eigen;

use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discretize::{discretize, Domain, MatrixData, OperatorMatrix, Scheme};
use crate::error::{Error, Result};
use crate::operator::DiffOperator;
use crate::scalar::{from_c64, to_c64, Real};

pub use eigen::{
    eigenvalues_dense, eigenvector, refine_banded, residual, sort_spectrum, MAX_ITER_PER_EIGENVALUE,
};

/// Largest matrix handed to the dense QR solver. Bigger finite-difference
/// grids only get the low end of their spectrum, by shift-invert refinement.
pub const DENSE_LIMIT: usize = 1500;

/// Grid size used to seed shift-invert refinement when no coarser scheme
/// precedes a large one.
const SEED_POINTS: usize = 800;

/// Digits reported when successive schemes agree exactly.
const MAX_DIGITS: f64 = 16.0;

/// Sorted eigenvalues with convergence metadata.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    pub scheme: String,
    /// Length of the leading run of eigenvalues that agreed across schemes.
    pub converged_count: usize,
    pub stability_digits: f64,
    /// Only the low end of the spectrum was computed.
    pub partial: bool,
    /// Eigenvalues removed by [`filter_physical`].
    pub dropped: usize,
}

impl Spectrum {
    fn raw(eigenvalues: Vec<Complex64>, scheme: String, partial: bool) -> Self {
        Spectrum {
            eigenvalues,
            scheme,
            converged_count: 0,
            stability_digits: 0.0,
            partial,
            dropped: 0,
        }
    }

    /// Spectrum with every value marked converged, for values known exactly.
    pub fn exact(eigenvalues: Vec<Complex64>) -> Self {
        let mut v = eigenvalues;
        sort_spectrum(&mut v);
        Spectrum {
            converged_count: v.len(),
            stability_digits: MAX_DIGITS,
            eigenvalues: v,
            scheme: "exact".into(),
            partial: false,
            dropped: 0,
        }
    }

    /// Real values, all marked converged.
    pub fn from_real(values: &[f64]) -> Self {
        Self::exact(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn converged(&self) -> &[Complex64] {
        &self.eigenvalues[..self.converged_count.min(self.eigenvalues.len())]
    }

    pub fn is_converged(&self, k: usize) -> bool {
        self.converged_count >= k
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} values, {} converged, {:.1} digits)",
            self.scheme,
            self.len(),
            self.converged_count,
            self.stability_digits
        )
    }
}

/// All eigenvalues of a matrix of dimension at most [`DENSE_LIMIT`].
pub fn eigenvalues<T: Real>(m: &OperatorMatrix<T>) -> Result<Spectrum> {
    let n = m.dim();
    if n > DENSE_LIMIT {
        return Err(Error::TooLargeForDense {
            dimension: n,
            limit: DENSE_LIMIT,
        });
    }
    let ev = eigenvalues_dense(&m.to_dense())?;
    Ok(Spectrum::raw(
        ev.into_iter().map(to_c64).collect(),
        m.scheme.to_string(),
        false,
    ))
}

/// Eigenvalues nearest to `seeds`, by shift-invert iteration on the banded
/// matrix. The result is sorted and flagged partial.
pub fn eigenvalues_near<T: Real>(m: &OperatorMatrix<T>, seeds: &[Complex64]) -> Result<Spectrum> {
    let seeds: Vec<_> = seeds.iter().map(|&s| from_c64::<T>(s)).collect();
    let mut ev: Vec<Complex64> = match &m.data {
        MatrixData::Band(b) => refine_banded(b, &seeds)?,
        MatrixData::Dense(d) => {
            let all = eigenvalues_dense(d)?;
            seeds
                .iter()
                .map(|&s| {
                    *all.iter()
                        .min_by(|a, b| (**a - s).norm().partial_cmp(&(**b - s).norm()).unwrap())
                        .expect("nonempty spectrum")
                })
                .collect()
        }
    }
    .into_iter()
    .map(to_c64)
    .collect();
    sort_spectrum(&mut ev);
    Ok(Spectrum::raw(ev, m.scheme.to_string(), true))
}

/// Keeps eigenvalues with `|Im| <= max_imag`.
pub fn filter_physical(s: &Spectrum, max_imag: f64) -> Spectrum {
    let keep: Vec<bool> = s
        .eigenvalues
        .iter()
        .map(|z| z.im.abs() <= max_imag)
        .collect();
    let kept_converged = keep[..s.converged_count.min(keep.len())]
        .iter()
        .filter(|&&k| k)
        .count();
    let eigenvalues: Vec<_> = s
        .eigenvalues
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(z, _)| *z)
        .collect();
    Spectrum {
        dropped: s.dropped + (s.eigenvalues.len() - eigenvalues.len()),
        eigenvalues,
        scheme: s.scheme.clone(),
        converged_count: kept_converged,
        stability_digits: s.stability_digits,
        partial: s.partial,
    }
}

/// Settings for [`converge_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergeOptions {
    pub tol: f64,
    /// Number of low-lying eigenvalues to track.
    pub k: usize,
    /// Drop eigenvalues with larger imaginary part from every scheme before
    /// comparing; needed when truncation adds spurious complex pairs.
    pub max_imag: Option<f64>,
}

/// [`converge_with`] without filtering.
pub fn converge<T: Real>(
    h: &DiffOperator<T>,
    schemes: &[Scheme],
    tol: f64,
    k: usize,
) -> Result<Spectrum> {
    converge_with(
        h,
        schemes,
        ConvergeOptions {
            tol,
            k,
            max_imag: None,
        },
    )
}

/// Solves `h` under each scheme in order of increasing resolution and
/// returns the finest spectrum. Its lowest values count as converged while
/// every pair of successive schemes agrees on them within `tol`.
pub fn converge_with<T: Real>(
    h: &DiffOperator<T>,
    schemes: &[Scheme],
    opts: ConvergeOptions,
) -> Result<Spectrum> {
    if schemes.len() < 2 {
        return Err(Error::InvalidArgument(format!(
            "convergence needs at least 2 schemes, got {}",
            schemes.len()
        )));
    }
    let min_dim = schemes.iter().map(Scheme::dimension).min().unwrap_or(0);
    if opts.k == 0 || opts.k > min_dim {
        return Err(Error::InvalidArgument(format!(
            "depth {} must be between 1 and the smallest dimension {min_dim}",
            opts.k
        )));
    }
    let post = |s: Spectrum| match opts.max_imag {
        Some(m) => filter_physical(&s, m),
        None => s,
    };
    // dense schemes are independent; large grids need seeds and run after
    let dense: Vec<Option<Result<Spectrum>>> = schemes
        .par_iter()
        .map(|s| {
            (s.dimension() <= DENSE_LIMIT).then(|| {
                let m = discretize(h, s)?;
                eigenvalues(&m).map(post)
            })
        })
        .collect();
    let mut spectra: Vec<Spectrum> = Vec::with_capacity(schemes.len());
    for (scheme, d) in schemes.iter().zip(dense) {
        let s = match d {
            Some(r) => r?,
            None => {
                let seeds = match spectra.last() {
                    Some(prev) => prev
                        .eigenvalues
                        .iter()
                        .take(opts.k + 2)
                        .copied()
                        .collect::<Vec<_>>(),
                    None => {
                        let coarse = eigenvalues(&discretize(h, &coarsen(scheme))?).map(post)?;
                        coarse
                            .eigenvalues
                            .iter()
                            .take(opts.k + 2)
                            .copied()
                            .collect()
                    }
                };
                let m = discretize(h, scheme)?;
                post(eigenvalues_near(&m, &seeds)?)
            }
        };
        spectra.push(s);
    }
    let mut worst = vec![0.0f64; opts.k];
    for pair in spectra.windows(2) {
        let (coarse, fine) = (&pair[0], &pair[1]);
        for (i, w) in worst.iter_mut().enumerate() {
            let d = match fine.eigenvalues.get(i) {
                Some(z) => nearest_distance(*z, &coarse.eigenvalues),
                None => f64::INFINITY,
            };
            *w = w.max(d);
        }
    }
    let converged = worst.iter().take_while(|&&d| d <= opts.tol).count();
    let max_dev = worst.iter().copied().fold(0.0f64, f64::max);
    let mut out = spectra.pop().expect("at least two schemes");
    out.converged_count = converged;
    out.stability_digits = if max_dev > 0.0 {
        (-max_dev.log10()).min(MAX_DIGITS)
    } else {
        MAX_DIGITS
    };
    Ok(out)
}

fn nearest_distance(z: Complex64, set: &[Complex64]) -> f64 {
    set.iter()
        .map(|w| (z - w).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Same grid with [`SEED_POINTS`] nodes.
fn coarsen(s: &Scheme) -> Scheme {
    match *s {
        Scheme::FiniteDifference {
            x_min,
            x_max,
            points,
            theta,
            domain,
            contour,
        } => {
            let mut p = SEED_POINTS.min(points);
            // keep the parity so a kink at 0 stays off the grid
            if domain == Domain::Full && p % 2 != points % 2 {
                p -= 1;
            }
            Scheme::FiniteDifference {
                x_min,
                x_max,
                points: p,
                theta,
                domain,
                contour,
            }
        }
        ref other => other.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discretize::Contour;
    use crate::expr::ParamEnv;

    fn op(p1: &str, p0: &str) -> DiffOperator {
        DiffOperator::parse_p_form(p1, p0, &ParamEnv::new()).unwrap()
    }

    #[test]
    fn shifted_oscillator() {
        let m = discretize(&op("0", "x^2 - 1"), &Scheme::oscillator(64, 1.0)).unwrap();
        let s = eigenvalues(&m).unwrap();
        assert_eq!(s.len(), 64);
        for n in 0..10 {
            assert!((s.eigenvalues[n] - Complex64::new(2.0 * n as f64, 0.0)).norm() < 1e-10);
        }
    }

    #[test]
    fn harmonic_converges() {
        let s = converge(
            &op("0", "x^2"),
            &[Scheme::oscillator(32, 1.0), Scheme::oscillator(64, 1.0)],
            1e-8,
            5,
        )
        .unwrap();
        assert_eq!(s.converged_count, 5);
        assert!(s.stability_digits >= 8.0);
    }

    #[test]
    fn converge_rejects_bad_arguments() {
        let h = op("0", "x^2");
        assert!(converge(&h, &[Scheme::oscillator(8, 1.0)], 1e-8, 2).is_err());
        assert!(converge(
            &h,
            &[Scheme::oscillator(8, 1.0), Scheme::oscillator(16, 1.0)],
            1e-8,
            9
        )
        .is_err());
    }

    #[test]
    fn unresolved_levels_are_not_flagged() {
        let s = converge(
            &op("0", "x^6"),
            &[Scheme::oscillator(10, 1.0), Scheme::oscillator(12, 1.0)],
            1e-10,
            8,
        )
        .unwrap();
        assert!(s.converged_count < 8);
    }

    #[test]
    fn filter_keeps_real_values() {
        let s = Spectrum::exact(vec![
            Complex64::new(1.0, 0.0),
            Complex64::new(2.0, 3.0),
            Complex64::new(4.0, 1e-9),
        ]);
        let f = filter_physical(&s, 1e-6);
        assert_eq!(f.eigenvalues.len(), 2);
        assert_eq!(f.dropped, 1);
        assert_eq!(f.converged_count, 2);
        let real = Spectrum::from_real(&[0.0, 2.0]);
        assert_eq!(filter_physical(&real, 1e-6), real);
        assert!(filter_physical(&Spectrum::from_real(&[]), 1e-6).is_empty());
    }

    #[test]
    fn half_line_radial_oscillator() {
        // p^2 + x^2 + 6/x^2 has levels 4n + 7 on x > 0
        let h = op("0", "x^2 + 6/x^2");
        let m = discretize(&h, &Scheme::grid(1e-3, 12.0, 4000, Domain::Half)).unwrap();
        let seeds: Vec<_> = (0..4)
            .map(|n| Complex64::new(4.0 * n as f64 + 7.2, 0.0))
            .collect();
        let s = eigenvalues_near(&m, &seeds).unwrap();
        for n in 0..4 {
            assert!(
                (s.eigenvalues[n].re - (4 * n + 7) as f64).abs() < 1e-4,
                "{}",
                s.eigenvalues[n]
            );
        }
    }

    #[test]
    fn large_grid_uses_refinement() {
        let h = op("0", "x^2");
        let s = converge(
            &h,
            &[
                Scheme::grid(-10.0, 10.0, 1200, Domain::Full),
                Scheme::grid(-10.0, 10.0, 2400, Domain::Full),
            ],
            1e-3,
            4,
        )
        .unwrap();
        assert!(s.partial);
        assert_eq!(s.converged_count, 4);
        assert!((s.eigenvalues[3].re - 7.0).abs() < 1e-3);
    }

    #[test]
    fn inverted_quartic_on_contour() {
        // p^2 - x^4 + 2ix, the W = x^2 partner: ground level 0
        let h = op("0", "-x^4 + 2*i*x");
        let m = discretize(
            &h,
            &Scheme::contour(8.0, 1200, std::f64::consts::FRAC_PI_6, Contour::PtSymmetric),
        )
        .unwrap();
        let s = filter_physical(&eigenvalues(&m).unwrap(), 1e-6);
        assert!(s.eigenvalues[0].norm() < 1e-3, "{}", s.eigenvalues[0]);
        assert!(
            (s.eigenvalues[1].re - 3.39814).abs() < 1e-2,
            "{}",
            s.eigenvalues[1]
        );
    }

    #[test]
    fn serde_round_trip() {
        let s = Spectrum::from_real(&[0.0, 1.5]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(serde_json::from_str::<Spectrum>(&text).unwrap(), s);
    }
}
