//! Classification of the relation between computed spectra.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectra::Spectrum;

/// Levels compared by default.
pub const DEFAULT_DEPTH: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    /// `E+_n = E-_{n+1}` and `E-_0 = 0`.
    SusyShift,
    /// `E+_n = E-_n`.
    IsoSpectral,
    Twins,
    Quadruplet,
    None,
}

impl Relation {
    pub fn name(self) -> &'static str {
        match self {
            Relation::SusyShift => "susy_shift",
            Relation::IsoSpectral => "iso_spectral",
            Relation::Twins => "twins",
            Relation::Quadruplet => "quadruplet",
            Relation::None => "none",
        }
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Relation a caller expects to find.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Expectation {
    Susy,
    Iso,
    Twins,
    Quadruplet,
    Any,
}

impl Expectation {
    pub fn accepts(self, r: &PairingReport) -> bool {
        match self {
            Expectation::Any => true,
            Expectation::Susy => r.susy_shift,
            Expectation::Iso => r.iso_spectral,
            Expectation::Twins => r.relation == Relation::Twins,
            Expectation::Quadruplet => r.relation == Relation::Quadruplet,
        }
    }
}

impl fmt::Display for Expectation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expectation::Susy => "susy",
            Expectation::Iso => "iso",
            Expectation::Twins => "twins",
            Expectation::Quadruplet => "quadruplet",
            Expectation::Any => "any",
        })
    }
}

impl FromStr for Expectation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "susy" | "susy_shift" => Expectation::Susy,
            "iso" | "iso_spectral" => Expectation::Iso,
            "twins" => Expectation::Twins,
            "quadruplet" => Expectation::Quadruplet,
            "any" => Expectation::Any,
            _ => {
                return Err(Error::InvalidArgument(format!(
                    "expected relation must be susy, iso, twins, quadruplet or any, got `{s}`"
                )))
            }
        })
    }
}

/// Two matched levels and their distance in the complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Pair {
    pub index_plus: usize,
    pub index_minus: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairingReport {
    pub relation: Relation,
    pub susy_shift: bool,
    pub iso_spectral: bool,
    pub ground_zero: bool,
    /// Pairs behind the reported relation; empty for `none`.
    pub pairs: Vec<Pair>,
    pub ground_energy: Complex64,
    pub tolerance: f64,
    /// Number of levels compared.
    pub depth: usize,
    /// Largest mismatch of the shift and level-by-level tests; absent when
    /// the test does not apply.
    pub susy_deviation: Option<f64>,
    pub iso_deviation: Option<f64>,
}

/// `d <= tol`, forgiving the rounding of differences of decimal inputs.
fn within(d: f64, tol: f64) -> bool {
    d <= tol * (1.0 + 1e-9)
}

fn require(spectra: &[&Spectrum], needed: usize) -> Result<usize> {
    let have = spectra
        .iter()
        .map(|s| s.converged().len())
        .min()
        .unwrap_or(0);
    if have < needed {
        return Err(Error::InsufficientConverged { needed, have });
    }
    Ok(have.min(DEFAULT_DEPTH))
}

fn shift_pairs(plus: &[Complex64], minus: &[Complex64], k: usize) -> Vec<Pair> {
    (0..k - 1)
        .map(|n| Pair {
            index_plus: n,
            index_minus: n + 1,
            delta: (plus[n] - minus[n + 1]).norm(),
        })
        .collect()
}

fn level_pairs(plus: &[Complex64], minus: &[Complex64], k: usize) -> Vec<Pair> {
    (0..k)
        .map(|n| Pair {
            index_plus: n,
            index_minus: n,
            delta: (plus[n] - minus[n]).norm(),
        })
        .collect()
}

fn max_delta(p: &[Pair]) -> f64 {
    p.iter().map(|p| p.delta).fold(0.0, f64::max)
}

/// Tests the shift and level-by-level relations on the converged prefixes.
pub fn match_spectra(s_plus: &Spectrum, s_minus: &Spectrum, tol: f64) -> Result<PairingReport> {
    let k = require(&[s_plus, s_minus], 2)?;
    match_at_depth(s_plus, s_minus, tol, k)
}

/// [`match_spectra`] at a fixed depth `k`.
pub fn match_at_depth(
    s_plus: &Spectrum,
    s_minus: &Spectrum,
    tol: f64,
    k: usize,
) -> Result<PairingReport> {
    let have = s_plus.converged().len().min(s_minus.converged().len());
    if k < 2 || have < k {
        return Err(Error::InsufficientConverged {
            needed: k.max(2),
            have,
        });
    }
    let (p, m) = (s_plus.converged(), s_minus.converged());
    let ground = m[0];
    let ground_zero = within(ground.norm(), tol);
    let shift = shift_pairs(p, m, k);
    let level = level_pairs(p, m, k);
    let susy_deviation = max_delta(&shift).max(ground.norm());
    let iso_deviation = max_delta(&level);
    let susy_shift = within(susy_deviation, tol);
    let iso_spectral = within(iso_deviation, tol);
    let (relation, pairs) = if susy_shift {
        (Relation::SusyShift, shift)
    } else if iso_spectral {
        (Relation::IsoSpectral, level)
    } else {
        (Relation::None, Vec::new())
    };
    Ok(PairingReport {
        relation,
        susy_shift,
        iso_spectral,
        ground_zero,
        pairs,
        ground_energy: ground,
        tolerance: tol,
        depth: k,
        susy_deviation: Some(susy_deviation),
        iso_deviation: Some(iso_deviation),
    })
}

/// Two partner pairs are twins when their plus members share a spectrum,
/// their minus members share a spectrum, and each pair is a shift pair.
pub fn twins_check(
    h1p: &Spectrum,
    h1m: &Spectrum,
    h2p: &Spectrum,
    h2m: &Spectrum,
    tol: f64,
) -> Result<PairingReport> {
    let k = require(&[h1p, h1m, h2p, h2m], 4)?;
    let first = match_at_depth(h1p, h1m, tol, k)?;
    let second = match_at_depth(h2p, h2m, tol, k)?;
    let plus_iso = max_delta(&level_pairs(h1p.converged(), h2p.converged(), k));
    let minus_iso = max_delta(&level_pairs(h1m.converged(), h2m.converged(), k));
    let twins =
        first.susy_shift && second.susy_shift && within(plus_iso, tol) && within(minus_iso, tol);
    let mut report = first.clone();
    report.susy_shift = first.susy_shift && second.susy_shift;
    report.susy_deviation = first
        .susy_deviation
        .zip(second.susy_deviation)
        .map(|(a, b)| a.max(b));
    report.iso_deviation = Some(plus_iso.max(minus_iso));
    if twins {
        report.relation = Relation::Twins;
    } else {
        report.relation = Relation::None;
        report.pairs.clear();
    }
    Ok(report)
}

/// Four spectra agreeing level by level.
pub fn quadruplet_check(
    s1: &Spectrum,
    s2: &Spectrum,
    s3: &Spectrum,
    s4: &Spectrum,
    tol: f64,
) -> Result<PairingReport> {
    let all = [s1, s2, s3, s4];
    let k = require(&all, 4)?;
    let base = s1.converged();
    let pairs: Vec<Pair> = (0..k)
        .map(|n| Pair {
            index_plus: n,
            index_minus: n,
            delta: all[1..]
                .iter()
                .map(|s| (s.converged()[n] - base[n]).norm())
                .fold(0.0, f64::max),
        })
        .collect();
    let spread = max_delta(&pairs);
    let ok = within(spread, tol);
    let ground = base[0];
    Ok(PairingReport {
        relation: if ok {
            Relation::Quadruplet
        } else {
            Relation::None
        },
        susy_shift: false,
        iso_spectral: ok,
        ground_zero: within(ground.norm(), tol),
        pairs: if ok { pairs } else { Vec::new() },
        ground_energy: ground,
        tolerance: tol,
        depth: k,
        susy_deviation: None,
        iso_deviation: Some(spread),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[f64]) -> Spectrum {
        Spectrum::from_real(v)
    }

    #[test]
    fn harmonic_pair_is_shifted() {
        let r = match_spectra(&s(&[2.0, 4.0, 6.0]), &s(&[0.0, 2.0, 4.0, 6.0]), 1e-9).unwrap();
        assert_eq!(r.relation, Relation::SusyShift);
        assert!(r.ground_zero && !r.iso_spectral);
        assert_eq!(r.depth, 3);
        assert!(r
            .pairs
            .iter()
            .all(|p| p.index_minus == p.index_plus + 1 && p.delta <= 1e-9));
    }

    #[test]
    fn identical_columns_are_iso() {
        let t = s(&[0.0, 3.398150, 8.700453, 14.977808, 21.999556]);
        let r = match_spectra(&t, &t, 1e-3).unwrap();
        assert_eq!(r.relation, Relation::IsoSpectral);
        assert!(r.ground_zero);
    }

    #[test]
    fn unrelated_levels() {
        let r = match_spectra(&s(&[1.0, 2.0]), &s(&[1.5, 2.5]), 1e-3).unwrap();
        assert_eq!(r.relation, Relation::None);
        assert!(r.pairs.is_empty());
    }

    #[test]
    fn needs_converged_levels() {
        let mut a = s(&[1.0, 2.0, 3.0]);
        a.converged_count = 1;
        assert_eq!(
            match_spectra(&a, &a, 1e-3).unwrap_err(),
            Error::InsufficientConverged { needed: 2, have: 1 }
        );
    }

    #[test]
    fn imaginary_parts_count() {
        let a = Spectrum::exact(vec![Complex64::new(1.0, 0.0), Complex64::new(2.0, 0.0)]);
        let b = Spectrum::exact(vec![Complex64::new(1.0, 1e-2), Complex64::new(2.0, 0.0)]);
        assert_eq!(
            match_spectra(&a, &b, 1e-3).unwrap().relation,
            Relation::None
        );
    }

    #[test]
    fn twins_and_quadruplets() {
        let p = s(&[2.0679992, 5.6318273, 9.9952299, 15.0475601]);
        let m = s(&[0.0, 2.0679992, 5.6318273, 9.9952299, 15.0475601]);
        assert_eq!(
            twins_check(&p, &m, &p, &m, 1e-5).unwrap().relation,
            Relation::Twins
        );
        let shifted = s(&[2.1679992, 5.7318273, 10.0952299, 15.1475601]);
        assert_eq!(
            twins_check(&p, &m, &shifted, &m, 1e-5).unwrap().relation,
            Relation::None
        );

        let q = s(&[0.5370379, 4.0060227, 9.0199248, 15.2151670]);
        let stray = s(&[0.5370379, 4.0070227, 9.0199248, 15.2151670]);
        assert_eq!(
            quadruplet_check(&q, &q, &q, &stray, 1e-5).unwrap().relation,
            Relation::None
        );
        assert_eq!(
            quadruplet_check(&q, &q, &q, &stray, 1e-3).unwrap().relation,
            Relation::Quadruplet
        );
        let up = s(&[1.5370379, 5.0060227, 10.0199248, 16.2151670]);
        assert_eq!(
            quadruplet_check(&q, &up, &q, &q, 1e-3).unwrap().relation,
            Relation::None
        );
    }

    #[test]
    fn equal_ladders_are_a_quadruplet_not_twins() {
        let e = s(&[0.0, 2.0, 4.0, 6.0]);
        assert_eq!(
            twins_check(&e, &e, &e, &e, 1e-6).unwrap().relation,
            Relation::None
        );
        assert_eq!(
            quadruplet_check(&e, &e, &e, &e, 1e-6).unwrap().relation,
            Relation::Quadruplet
        );
    }

    #[test]
    fn classification_is_scale_free() {
        let p = s(&[2.0, 4.0, 6.0]);
        let m = s(&[0.0, 2.0001, 4.0, 6.0]);
        for scale in [1e-3, 1.0, 1e4] {
            let sp = s(&[2.0 * scale, 4.0 * scale, 6.0 * scale]);
            let sm = s(&[0.0, 2.0001 * scale, 4.0 * scale, 6.0 * scale]);
            let a = match_spectra(&p, &m, 1e-3).unwrap();
            let b = match_spectra(&sp, &sm, 1e-3 * scale).unwrap();
            assert_eq!(a.relation, b.relation);
        }
    }

    #[test]
    fn report_serializes() {
        let r = match_spectra(&s(&[2.0, 4.0]), &s(&[0.0, 2.0, 4.0]), 1e-9).unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"relation\":\"susy_shift\""));
        assert_eq!(serde_json::from_str::<PairingReport>(&text).unwrap(), r);
        assert_eq!("iso".parse::<Expectation>().unwrap(), Expectation::Iso);
    }
}
