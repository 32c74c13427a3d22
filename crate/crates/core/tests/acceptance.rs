//! One PASS/FAIL line per acceptance criterion over the built-in corpus.
//!
//! All comparisons are exact. The only pinned tolerances are wall-clock
//! budgets for criteria 1 and 8, and the corpus floor below.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use annular_skein::corpus;
use annular_skein::selfcheck::{self, SuiteCheck};

/// Budget for criterion 1, in seconds.
const DIFFERENTIAL_BUDGET: f64 = 120.0;
/// Budget for criterion 8, in seconds.
const MODULI_BUDGET: f64 = 300.0;
/// The moduli sweep must see at least this many decorated configurations.
const MODULI_FLOOR: usize = 1000;

const TITLES: [&str; 10] = [
    "differential validity",
    "decomposition into skein part and f-2 part",
    "worked braid s1 s2^-1",
    "extreme filtration sweep",
    "j_min formula, j_min = sl, extreme bucket",
    "invariance on curated pairs",
    "Markov stabilization maps",
    "moduli checks",
    "spectral bound over Z2",
    "crossing-order robustness",
];

fn main() -> ExitCode {
    let start = Instant::now();
    let entries = corpus::builtin();
    let braids = entries.iter().filter(|e| e.braid.is_some()).count();
    println!("corpus: {} diagrams, {braids} braids", entries.len());

    let mut lines = match selfcheck::run_suite(&entries) {
        Ok(lines) => lines,
        Err(e) => {
            println!("FAIL suite did not run: {e}");
            return ExitCode::FAILURE;
        }
    };
    pin_budgets(&mut lines);

    let mut by_criterion: BTreeMap<u8, Vec<&SuiteCheck>> = BTreeMap::new();
    for line in &lines {
        by_criterion.entry(line.criterion).or_default().push(line);
    }
    let mut failed = 0;
    for (k, title) in TITLES.iter().enumerate() {
        let criterion = k as u8 + 1;
        let checks = by_criterion.remove(&criterion).unwrap_or_default();
        let holds = !checks.is_empty() && checks.iter().all(|c| c.holds);
        if !holds {
            failed += 1;
        }
        let seconds: f64 = checks.iter().map(|c| c.seconds).fold(0.0, f64::max);
        println!("{} criterion {criterion}: {title} ({seconds:.1}s)", if holds { "PASS" } else { "FAIL" });
        for c in &checks {
            println!("    [{}] {} ({}/{} failing)", if c.holds { "ok" } else { "no" }, c.name, c.failed, c.checked);
            if !c.note.is_empty() {
                println!("        {}", c.note);
            }
            if let Some(x) = &c.counterexample {
                println!("        counterexample: {x}");
            }
        }
    }
    println!("{} of {} criteria pass in {:.1}s", TITLES.len() - failed, TITLES.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn pin_budgets(lines: &mut [SuiteCheck]) {
    for line in lines.iter_mut() {
        let over_budget = match line.criterion {
            1 => line.seconds > DIFFERENTIAL_BUDGET,
            8 => line.seconds > MODULI_BUDGET,
            _ => false,
        };
        if over_budget {
            line.holds = false;
            line.note = format!("over the time budget: {:.1}s", line.seconds);
        }
        if line.criterion == 8 && line.name.starts_with("index-") && line.checked < MODULI_FLOOR {
            line.holds = false;
            line.note = format!("only {} decorated configurations", line.checked);
        }
    }
}
