use std::fmt::Write as _;

use susyfactory::presets::PresetOutcome;
use susyfactory::spectra::Spectrum;

/// Fixed notation with 9 significant digits.
pub fn sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    if !v.is_finite() {
        return v.to_string();
    }
    let mag = v.abs().log10().floor() as i32;
    let decimals = (8 - mag).max(0) as usize;
    let s = format!("{v:.decimals$}");
    if s.trim_start_matches('-')
        .chars()
        .all(|c| c == '0' || c == '.')
    {
        "0".into()
    } else {
        s
    }
}

fn cell(s: &Spectrum, n: usize) -> [String; 3] {
    match s.eigenvalues.get(n) {
        Some(z) => [sig9(z.re), sig9(z.im), (n < s.converged_count).to_string()],
        None => [String::new(), String::new(), "false".into()],
    }
}

/// Rows `n, re(E+), im(E+), re(E-), im(E-), converged flags`.
pub fn spectrum_csv(plus: &Spectrum, minus: &Spectrum, depth: usize) -> String {
    let mut out =
        String::from("n,re_plus,im_plus,re_minus,im_minus,converged_plus,converged_minus\n");
    for n in 0..depth {
        let [pr, pi, pc] = cell(plus, n);
        let [mr, mi, mc] = cell(minus, n);
        let _ = writeln!(out, "{n},{pr},{pi},{mr},{mi},{pc},{mc}");
    }
    out
}

/// One row per level: for each member its computed real part, imaginary
/// part and published value.
pub fn preset_csv(o: &PresetOutcome, depth: usize) -> String {
    let mut out = String::from("n");
    for m in &o.members {
        let l = &m.label;
        let _ = write!(out, ",re_{l},im_{l},published_{l}");
    }
    out.push('\n');
    for n in 0..depth {
        let _ = write!(out, "{n}");
        for m in &o.members {
            let [re, im, _] = cell(&m.spectrum, n);
            let p = m.published.get(n).map(|&v| sig9(v)).unwrap_or_default();
            let _ = write!(out, ",{re},{im},{p}");
        }
        out.push('\n');
    }
    out
}
