use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use susyfactory::discretize::{Contour, Domain, Scheme, SignMethod};
use susyfactory::expr::ParamEnv;
use susyfactory::operator::Convention;
use susyfactory::verify::Expectation;

use crate::Failure;

/// Run settings; every key may come from the config file or a flag.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub preset: Option<String>,
    pub w: Option<String>,
    pub w1: Option<String>,
    pub w2: Option<String>,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
    pub convention: Option<String>,
    pub scale: Option<f64>,
    pub method: Option<String>,
    pub n_keep: Option<usize>,
    pub omega: Option<f64>,
    pub sign_method: Option<String>,
    pub grid: Option<String>,
    pub theta: Option<f64>,
    pub domain: Option<String>,
    pub contour: Option<String>,
    pub tol: Option<f64>,
    pub depth: Option<usize>,
    pub max_imag: Option<f64>,
    pub expect: Option<String>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_DEPTH: usize = 5;

fn invalid(msg: impl Into<String>) -> Failure {
    Failure::Invalid(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, Failure> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid(format!("{}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))
    }

    /// Fields set in `flags` replace those of `self`; parameters merge.
    pub fn overridden_by(mut self, flags: RunConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => {
                $(if flags.$f.is_some() {
                    self.$f = flags.$f;
                })*
            };
        }
        take!(
            preset,
            w,
            w1,
            w2,
            convention,
            scale,
            method,
            n_keep,
            omega,
            sign_method,
            grid,
            theta,
            domain,
            contour,
            tol,
            depth,
            max_imag,
            expect,
            out,
            format
        );
        self.params.extend(flags.params);
        self
    }

    pub fn env(&self) -> Result<ParamEnv, Failure> {
        let mut env = ParamEnv::new();
        for (k, v) in &self.params {
            env.set(k, *v).map_err(|e| invalid(e.to_string()))?;
        }
        Ok(env)
    }

    /// Convention and superpotential sources.
    pub fn sources(&self) -> Result<(Convention, Vec<String>), Failure> {
        let conv = match &self.convention {
            Some(c) => c
                .parse::<Convention>()
                .map_err(|e| invalid(e.to_string()))?,
            None if self.w1.is_some() || self.w2.is_some() => Convention::TypeII,
            None => Convention::TypeI,
        };
        let sources = match conv {
            Convention::TypeII => match (&self.w1, &self.w2, &self.w) {
                (Some(a), Some(b), None) => vec![a.clone(), b.clone()],
                _ => return Err(invalid("type2 needs --w1 and --w2 (and no --w)")),
            },
            _ => match (&self.w, &self.w1, &self.w2) {
                (Some(w), None, None) => vec![w.clone()],
                _ => {
                    return Err(invalid(format!(
                        "{conv} needs exactly one superpotential, given by --w"
                    )))
                }
            },
        };
        Ok((conv, sources))
    }

    pub fn tol(&self) -> Result<f64, Failure> {
        let t = self.tol.unwrap_or(DEFAULT_TOL);
        if t.is_nan() || t <= 0.0 || !t.is_finite() {
            return Err(invalid(format!("tolerance must be positive, got {t}")));
        }
        Ok(t)
    }

    pub fn depth(&self) -> Result<usize, Failure> {
        let d = self.depth.unwrap_or(DEFAULT_DEPTH);
        if d < 2 {
            return Err(invalid(format!("depth must be at least 2, got {d}")));
        }
        Ok(d)
    }

    pub fn expect(&self) -> Result<Option<Expectation>, Failure> {
        self.expect
            .as_deref()
            .map(|e| e.parse::<Expectation>().map_err(|e| invalid(e.to_string())))
            .transpose()
    }

    pub fn format(&self) -> Result<Format, Failure> {
        match self.format.as_deref() {
            None | Some("csv") => Ok(Format::Csv),
            Some("json") => Ok(Format::Json),
            Some(f) => Err(invalid(format!("format must be csv or json, got `{f}`"))),
        }
    }

    /// Schemes of increasing resolution: a coarser companion and the
    /// requested one.
    pub fn schemes(&self) -> Result<Vec<Scheme>, Failure> {
        let method =
            self.method
                .as_deref()
                .unwrap_or(if self.grid.is_some() { "fd" } else { "ho" });
        let schemes = match method {
            "ho" => {
                let n = self.n_keep.unwrap_or(64);
                let omega = self.omega.unwrap_or(1.0);
                let sign_method = match self.sign_method.as_deref() {
                    None | Some("exact") => SignMethod::Exact,
                    Some("quadrature") => SignMethod::Quadrature,
                    Some(s) => {
                        return Err(invalid(format!(
                            "sign method must be exact or quadrature, got `{s}`"
                        )))
                    }
                };
                [(2 * n).div_ceil(3), n]
                    .iter()
                    .map(|&n_keep| Scheme::OscillatorBasis {
                        n_keep,
                        n_build: 2 * n_keep,
                        omega,
                        sign_method,
                    })
                    .collect::<Vec<_>>()
            }
            "fd" => {
                let (x_min, x_max, points) =
                    parse_grid(self.grid.as_deref().unwrap_or("-10:10:1000"))?;
                let domain = match self.domain.as_deref() {
                    None if x_min > 0.0 => Domain::Half,
                    None | Some("full") => Domain::Full,
                    Some("half") => Domain::Half,
                    Some(d) => {
                        return Err(invalid(format!("domain must be full or half, got `{d}`")))
                    }
                };
                let contour = match self.contour.as_deref() {
                    None | Some("straight") => Contour::Straight,
                    Some("pt") | Some("pt_symmetric") => Contour::PtSymmetric,
                    Some(c) => {
                        return Err(invalid(format!(
                            "contour must be straight or pt, got `{c}`"
                        )))
                    }
                };
                let theta = self.theta.unwrap_or(0.0);
                // halving keeps the parity of the point count
                let coarse = points / 2 - (points / 2 + points) % 2;
                [coarse, points]
                    .iter()
                    .map(|&points| Scheme::FiniteDifference {
                        x_min,
                        x_max,
                        points,
                        theta,
                        domain,
                        contour,
                    })
                    .collect()
            }
            m => return Err(invalid(format!("method must be ho or fd, got `{m}`"))),
        };
        for s in &schemes {
            s.validate().map_err(|e| invalid(e.to_string()))?;
        }
        Ok(schemes)
    }
}

/// `MIN:MAX:PTS`.
pub fn parse_grid(text: &str) -> Result<(f64, f64, usize), Failure> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = || invalid(format!("grid must look like MIN:MAX:PTS, got `{text}`"));
    if parts.len() != 3 {
        return Err(bad());
    }
    let lo = parts[0].trim().parse::<f64>().map_err(|_| bad())?;
    let hi = parts[1].trim().parse::<f64>().map_err(|_| bad())?;
    let n = parts[2].trim().parse::<usize>().map_err(|_| bad())?;
    Ok((lo, hi, n))
}

/// `name=value`.
pub fn parse_param(text: &str) -> Result<(String, f64), String> {
    let (k, v) = text
        .split_once('=')
        .ok_or_else(|| format!("expected NAME=VALUE, got `{text}`"))?;
    let v: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}
