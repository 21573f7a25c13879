mod config;
mod output;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::json;
use susyfactory::expr::parse;
use susyfactory::operator::{
    hamiltonian_pair, make_generators, DiffOperator, GeneratorPair, HamiltonianPair,
};
use susyfactory::presets::{preset, Preset, PresetOutcome};
use susyfactory::spectra::{converge_with, ConvergeOptions, Spectrum};
use susyfactory::verify::{match_at_depth, Expectation, PairingReport};
use susyfactory::Error;

use config::{parse_param, Format, RunConfig};

/// Everything that ends a run early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Mismatch(String),
    Invalid(String),
    NotConverged(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Invalid(_) => 2,
            Failure::NotConverged(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Invalid(m) | Failure::NotConverged(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InsufficientConverged { .. } | Error::NoConvergence { .. } => {
                Failure::NotConverged(e.to_string())
            }
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "susyfactory",
    version,
    about = "Factorized partner Hamiltonians and their spectra"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the generators and H+ = AB, H- = BA.
    Factor(Flags),
    /// Compute the low-lying spectra of H+ and H-.
    Spectrum(Flags),
    /// Classify the relation between the partner spectra.
    Verify(Flags),
    /// Report PT invariance of W and the symmetry of H+ and H-.
    Classify(Flags),
    /// Reproduce a published table (table1 .. table5).
    Table {
        name: String,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(clap::Args, Default)]
struct Flags {
    /// TOML file with any of the keys below; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    preset: Option<String>,
    /// Superpotential for type1 and type3.
    #[arg(long)]
    w: Option<String>,
    #[arg(long)]
    w1: Option<String>,
    #[arg(long)]
    w2: Option<String>,
    /// Parameter binding NAME=VALUE; repeatable.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// type1, type2 or type3.
    #[arg(long)]
    convention: Option<String>,
    /// ho (oscillator basis) or fd (finite differences).
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    n_keep: Option<usize>,
    #[arg(long)]
    omega: Option<f64>,
    /// exact or quadrature.
    #[arg(long)]
    sign_method: Option<String>,
    /// MIN:MAX:PTS.
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// full or half.
    #[arg(long)]
    domain: Option<String>,
    /// straight or pt.
    #[arg(long)]
    contour: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    scale: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    depth: Option<usize>,
    /// Drop eigenvalues with a larger imaginary part.
    #[arg(long)]
    max_imag: Option<f64>,
    /// susy, iso, twins, quadruplet or any.
    #[arg(long)]
    expect: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv or json.
    #[arg(long)]
    format: Option<String>,
}

impl Flags {
    fn resolve(self) -> Result<RunConfig, Failure> {
        let base = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        let flags = RunConfig {
            preset: self.preset,
            w: self.w,
            w1: self.w1,
            w2: self.w2,
            params: self.params.into_iter().collect(),
            convention: self.convention,
            scale: self.scale,
            method: self.method,
            n_keep: self.n_keep,
            omega: self.omega,
            sign_method: self.sign_method,
            grid: self.grid,
            theta: self.theta,
            domain: self.domain,
            contour: self.contour,
            tol: self.tol,
            depth: self.depth,
            max_imag: self.max_imag,
            expect: self.expect,
            out: self.out,
            format: self.format,
        };
        Ok(base.overridden_by(flags))
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), Failure> {
    match &cfg.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Invalid(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Invalid(e.to_string()))
        }
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

fn generators(cfg: &RunConfig) -> Result<GeneratorPair, Failure> {
    let (conv, sources) = cfg.sources()?;
    let env = cfg.env()?;
    let exprs = sources
        .iter()
        .map(|s| parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(make_generators(conv, &exprs, &env)?)
}

fn hamiltonians(cfg: &RunConfig) -> Result<(GeneratorPair, HamiltonianPair), Failure> {
    let gen = generators(cfg)?;
    let mut pair = hamiltonian_pair(&gen)?;
    if let Some(s) = cfg.scale {
        pair.h_plus = pair.h_plus.scale(s)?;
        pair.h_minus = pair.h_minus.scale(s)?;
    }
    Ok((gen, pair))
}

fn cmd_factor(cfg: &RunConfig) -> Result<(), Failure> {
    let (gen, pair) = hamiltonians(cfg)?;
    let text = match cfg.format()? {
        Format::Json => to_json(&json!({
            "convention": gen.convention.name(),
            "a": gen.a.to_string(),
            "b": gen.b.to_string(),
            "h_plus": pair.h_plus.to_string(),
            "h_minus": pair.h_minus.to_string(),
            "symmetry_plus": pair.symmetry_plus,
            "symmetry_minus": pair.symmetry_minus,
            "trivial": pair.trivial,
        })),
        Format::Csv => {
            let mut t = format!("H+ = {} ; H- = {}\n", pair.h_plus, pair.h_minus);
            t += &format!("A = {}\nB = {}\n", gen.a, gen.b);
            t += &format!(
                "H+ symmetry: {}\nH- symmetry: {}\n",
                pair.symmetry_plus, pair.symmetry_minus
            );
            if pair.trivial {
                t += "trivial pair: A and B commute\n";
            }
            t
        }
    };
    emit(cfg, &text)
}

fn solve(cfg: &RunConfig, h: &DiffOperator) -> Result<Spectrum, Failure> {
    let schemes = cfg.schemes()?;
    Ok(converge_with(
        h,
        &schemes,
        ConvergeOptions {
            tol: cfg.tol()?,
            k: cfg.depth()?,
            max_imag: cfg.max_imag,
        },
    )?)
}

fn partner_spectra(cfg: &RunConfig) -> Result<(Spectrum, Spectrum), Failure> {
    let (_, pair) = hamiltonians(cfg)?;
    let (plus, minus) = rayon::join(|| solve(cfg, &pair.h_plus), || solve(cfg, &pair.h_minus));
    Ok((plus?, minus?))
}

fn load_preset(name: &str, cfg: &RunConfig) -> Result<Preset, Failure> {
    let mut p = preset(name, &cfg.env()?)?;
    if let Some(t) = cfg.tol {
        p.relation_tol = t;
    }
    if let Some(d) = cfg.depth {
        p.depth = d;
    }
    Ok(p)
}

fn run_preset(name: &str, cfg: &RunConfig) -> Result<(Preset, PresetOutcome), Failure> {
    let p = load_preset(name, cfg)?;
    let out = p.run()?;
    Ok((p, out))
}

fn cmd_spectrum(cfg: &RunConfig) -> Result<(), Failure> {
    if let Some(name) = &cfg.preset {
        let (p, out) = run_preset(name, cfg)?;
        let text = match cfg.format()? {
            Format::Csv => output::preset_csv(&out, p.depth),
            Format::Json => to_json(&out),
        };
        return emit(cfg, &text);
    }
    let depth = cfg.depth()?;
    let (plus, minus) = partner_spectra(cfg)?;
    let text = match cfg.format()? {
        Format::Csv => output::spectrum_csv(&plus, &minus, depth),
        Format::Json => to_json(&json!({ "plus": plus, "minus": minus })),
    };
    emit(cfg, &text)?;
    if cfg.expect()?.is_some() && !(plus.is_converged(depth) && minus.is_converged(depth)) {
        return Err(Failure::NotConverged(format!(
            "only {} and {} of {depth} levels converged",
            plus.converged_count, minus.converged_count
        )));
    }
    Ok(())
}

fn check(report: &PairingReport, expect: Expectation) -> Result<(), Failure> {
    if expect.accepts(report) {
        Ok(())
    } else {
        Err(Failure::Mismatch(format!(
            "expected {expect}, found {}",
            report.relation
        )))
    }
}

fn cmd_verify(cfg: &RunConfig) -> Result<(), Failure> {
    let (report, expect) = match &cfg.preset {
        Some(name) => {
            let (p, out) = run_preset(name, cfg)?;
            (out.report, cfg.expect()?.unwrap_or(p.expect))
        }
        None => {
            let (plus, minus) = partner_spectra(cfg)?;
            let k = cfg
                .depth()?
                .min(plus.converged_count)
                .min(minus.converged_count);
            (
                match_at_depth(&plus, &minus, cfg.tol()?, k)?,
                cfg.expect()?.unwrap_or(Expectation::Any),
            )
        }
    };
    emit(cfg, &to_json(&report))?;
    check(&report, expect)
}

fn cmd_classify(cfg: &RunConfig) -> Result<(), Failure> {
    let (gen, pair) = hamiltonians(cfg)?;
    let env = cfg.env()?;
    let sources = gen
        .sources
        .iter()
        .map(|w| Ok((w.to_string(), w.is_pt_invariant(&env)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let text = match cfg.format()? {
        Format::Json => to_json(&json!({
            "superpotentials": sources
                .iter()
                .map(|(w, pt)| json!({ "w": w, "pt_invariant": pt }))
                .collect::<Vec<_>>(),
            "h_plus": { "operator": pair.h_plus.to_string(), "symmetry": pair.symmetry_plus },
            "h_minus": { "operator": pair.h_minus.to_string(), "symmetry": pair.symmetry_minus },
        })),
        Format::Csv => {
            let mut t = String::new();
            for (w, pt) in &sources {
                let tag = if *pt {
                    "PT-invariant"
                } else {
                    "not PT-invariant"
                };
                t += &format!("W = {w}: {tag}\n");
            }
            t += &format!("H+ = {}: {}\n", pair.h_plus, pair.symmetry_plus);
            t += &format!("H- = {}: {}\n", pair.h_minus, pair.symmetry_minus);
            t
        }
    };
    emit(cfg, &text)
}

fn cmd_table(name: &str, cfg: &RunConfig) -> Result<(), Failure> {
    let (p, out) = run_preset(name, cfg)?;
    let text = match cfg.format()? {
        Format::Csv => output::preset_csv(&out, p.depth),
        Format::Json => to_json(&out),
    };
    emit(cfg, &text)?;
    eprintln!("{}: {}", p.name, p.title);
    for m in &out.members {
        match m.max_deviation {
            Some(d) => eprintln!(
                "  {} max deviation from published {d:.2e} (tolerance {:.0e})",
                m.label, p.value_tol
            ),
            None => eprintln!("  {} no published values for these parameters", m.label),
        }
    }
    eprintln!(
        "  relation {} at tolerance {:.0e}",
        out.report.relation, out.report.tolerance
    );
    check(&out.report, cfg.expect()?.unwrap_or(p.expect))?;
    if out.values_ok == Some(false) {
        return Err(Failure::Mismatch("published values not reproduced".into()));
    }
    Ok(())
}

fn init_threads() -> Result<(), Failure> {
    if let Ok(v) = std::env::var("SUSYFACTORY_THREADS") {
        let n: usize = v.trim().parse().map_err(|_| {
            Failure::Invalid(format!(
                "SUSYFACTORY_THREADS must be a positive integer, got `{v}`"
            ))
        })?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::Invalid(e.to_string()))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<(), Failure> {
    init_threads()?;
    match cli.command {
        Command::Factor(f) => cmd_factor(&f.resolve()?),
        Command::Spectrum(f) => cmd_spectrum(&f.resolve()?),
        Command::Verify(f) => cmd_verify(&f.resolve()?),
        Command::Classify(f) => cmd_classify(&f.resolve()?),
        Command::Table { name, flags } => cmd_table(&name, &flags.resolve()?),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
