//! Solves the named presets (all of them by default) and prints timings
//! and the low spectra.

use std::time::Instant;

use susyfactory::expr::ParamEnv;
use susyfactory::presets::{preset, PRESET_NAMES};

fn main() {
    let names: Vec<String> = std::env::args().skip(1).collect();
    let names: Vec<&str> = if names.is_empty() {
        PRESET_NAMES.to_vec()
    } else {
        names.iter().map(String::as_str).collect()
    };
    for name in names {
        let t = Instant::now();
        let out = preset(name, &ParamEnv::new()).unwrap().run().unwrap();
        println!(
            "{name}: {:.1}s relation_ok={} values_ok={:?} {:?}",
            t.elapsed().as_secs_f64(),
            out.relation_ok,
            out.values_ok,
            out.report.relation
        );
        for m in &out.members {
            let ev: Vec<String> = m
                .spectrum
                .eigenvalues
                .iter()
                .take(5)
                .map(|z| format!("{:.7}{:+.1e}i", z.re, z.im))
                .collect();
            println!(
                "  {} conv={} digits={:.1} dev={:?} {}",
                m.label,
                m.spectrum.converged_count,
                m.spectrum.stability_digits,
                m.max_deviation,
                ev.join(" ")
            );
        }
    }
}
