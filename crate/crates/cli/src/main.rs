//! `annular-skein`: homology tables, transverse data and moduli checks for
//! annular link diagrams.
//!
//! Exit status: 0 when the run succeeds and every checked property holds,
//! 1 when a property is falsified, 2 on unreadable or malformed input.
//! Nothing is written to stdout on an input error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use annular_skein::corpus::{self, CorpusEntry};
use annular_skein::diagram::{
    parse_braid_file, parse_slice_file, BraidWord, CrossingPermutation, InputKind, SliceWord,
};
use annular_skein::khovanov::{decompose, extreme_map_of, khovanov_homology, ComplexPair};
use annular_skein::moduli::{verify_moduli, Convention};
use annular_skein::selfcheck::run_suite;
use annular_skein::skein::{skein_homology, HomologyTable, StateCube};
use annular_skein::transverse::{diagram_extremes, table_difference, transverse_report};
use annular_skein::{algebra::Ring, Error};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Debug, Parser)]
#[command(name = "annular-skein", version, about = "Annular Khovanov skein homology engine")]
struct Cli {
    /// Coefficient ring: Z or Z2.
    #[arg(long, global = true, default_value = "Z")]
    ring: Ring,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Worker threads (at least 1); defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..))]
    jobs: Option<u16>,
    /// Rerun under another crossing order and require equal homology:
    /// `reverse`, `shuffle:SEED` or a comma-separated permutation.
    #[arg(long, global = true)]
    permute_crossings: Option<CrossingPermutation>,
    /// Input kind; inferred from the extension (`.slice` or `.braid`) when absent.
    #[arg(long, global = true, value_enum)]
    kind: Option<Kind>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Braid,
    Slice,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Tri-graded skein homology H^{h,q,f}.
    SkeinHomology { input: PathBuf },
    /// Bi-graded Khovanov homology H^{h,q}.
    KhovanovHomology { input: PathBuf },
    /// Split the Khovanov differential into its f-preserving and f-2 parts.
    Decompose { input: PathBuf },
    /// Transverse invariant, extreme gradings and the extreme map (braids only).
    Transverse { input: PathBuf },
    /// The map from the lowest filtration level of the skein bucket into Khovanov homology.
    ExtremeMap {
        input: PathBuf,
        /// Quantum grading; defaults to sl for braids and to j_min otherwise.
        #[arg(long, allow_hyphen_values = true)]
        q: Option<i64>,
    },
    /// Chain counts, boundary graphs and duality for decorated configurations.
    VerifyModuli {
        /// Diagrams to harvest; the corpus when none are given.
        inputs: Vec<PathBuf>,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u8).range(2..=3))]
        index: u8,
        /// Ladybug matching: `right` or `opposite`.
        #[arg(long, default_value = "right")]
        convention: Convention,
    },
    /// Compare the skein homology tables of two diagrams.
    Compare { a: PathBuf, b: PathBuf },
    /// Run the invariant suite on the corpus.
    Selfcheck,
}

/// What a subcommand produced: a report and whether its properties hold.
struct Outcome {
    report: Report,
    holds: bool,
}

enum Report {
    Table(HomologyTable),
    Json(Value),
}

enum Failure {
    Input(Error),
    Property(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_input_error() {
            Failure::Input(e)
        } else {
            Failure::Property(e)
        }
    }
}

struct Diagram {
    name: String,
    word: SliceWord,
    braid: Option<BraidWord>,
}

fn read_diagram(path: &Path, kind: Option<Kind>) -> Result<Diagram, Error> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let kind = kind.map_or_else(
        || match path.extension().and_then(|e| e.to_str()) {
            Some("slice") => InputKind::Slice,
            _ => InputKind::Braid,
        },
        |k| match k {
            Kind::Braid => InputKind::Braid,
            Kind::Slice => InputKind::Slice,
        },
    );
    let name = path.display().to_string();
    Ok(match kind {
        InputKind::Braid => {
            let braid = parse_braid_file(&text)?;
            Diagram { name, word: braid.to_slice_word(), braid: Some(braid) }
        }
        InputKind::Slice => Diagram { name, word: parse_slice_file(&text)?, braid: None },
    })
}

fn to_json<T: serde::Serialize>(value: &T) -> Value {
    serde_json::to_value(value).expect("reports serialize")
}

/// Recomputes `table` after permuting the crossing order; the difference, if any.
fn permuted_difference(
    cli: &Cli,
    word: &SliceWord,
    table: &HomologyTable,
    compute: fn(&SliceWord, Ring) -> annular_skein::Result<HomologyTable>,
) -> Result<Option<Value>, Failure> {
    let Some(p) = &cli.permute_crossings else { return Ok(None) };
    let permuted = compute(&p.apply(word)?, cli.ring)?;
    Ok(table_difference(table, &permuted).map(|d| json!({ "permutation": format!("{p:?}"), "difference": d })))
}

fn homology(cli: &Cli, input: &Path, compute: fn(&SliceWord, Ring) -> annular_skein::Result<HomologyTable>) -> Result<Outcome, Failure> {
    let d = read_diagram(input, cli.kind)?;
    let table = compute(&d.word, cli.ring)?;
    if let Some(diff) = permuted_difference(cli, &d.word, &table, compute)? {
        eprintln!("homology changed under crossing reordering: {diff}");
        return Ok(Outcome { report: Report::Table(table), holds: false });
    }
    Ok(Outcome { report: Report::Table(table), holds: true })
}

fn run(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::SkeinHomology { input } => homology(cli, input, skein_homology),
        Command::KhovanovHomology { input } => homology(cli, input, khovanov_homology),
        Command::Decompose { input } => {
            let d = read_diagram(input, cli.kind)?;
            let pair = ComplexPair::new(&d.word)?;
            let report = decompose(&pair)?.report;
            let holds = report.d0_entries == report.skein_entries;
            Ok(Outcome { report: Report::Json(json!({ "diagram": d.name, "decomposition": report })), holds })
        }
        Command::Transverse { input } => {
            let d = read_diagram(input, cli.kind)?;
            let braid = d.braid.ok_or(Error::NotBraid)?;
            let report = transverse_report(&braid, cli.ring)?;
            for c in report.failures() {
                eprintln!("falsified: {} ({})", c.name, c.detail);
            }
            Ok(Outcome { holds: report.all_hold(), report: Report::Json(to_json(&report)) })
        }
        Command::ExtremeMap { input, q } => {
            let d = read_diagram(input, cli.kind)?;
            let q = match (q, &d.braid) {
                (Some(q), _) => *q,
                (None, Some(b)) => b.self_linking(),
                (None, None) => diagram_extremes(&StateCube::new(&d.word)?).j_min_formula,
            };
            let pair = ComplexPair::new(&d.word)?;
            let map = extreme_map_of(&pair, q, cli.ring).map_err(|e| match e {
                Error::EmptyGrading(_) => Failure::Input(e),
                e => e.into(),
            })?;
            Ok(Outcome { report: Report::Json(to_json(&map)), holds: true })
        }
        Command::VerifyModuli { inputs, index, convention } => {
            let words: Vec<SliceWord> = if inputs.is_empty() {
                corpus::corpus()?.into_iter().map(|e| e.word).collect()
            } else {
                inputs.iter().map(|p| read_diagram(p, cli.kind).map(|d| d.word)).collect::<Result<_, _>>()?
            };
            let report = verify_moduli(&words, *index as usize, *convention)?;
            Ok(Outcome { holds: report.holds(), report: Report::Json(to_json(&report)) })
        }
        Command::Compare { a, b } => {
            let (a, b) = (read_diagram(a, cli.kind)?, read_diagram(b, cli.kind)?);
            let (ta, tb) = (skein_homology(&a.word, cli.ring)?, skein_homology(&b.word, cli.ring)?);
            let difference = table_difference(&ta, &tb);
            if let Some(d) = &difference {
                eprintln!("tables differ at (h, q, f) = ({}, {}, {:?}): {} vs {}", d.h, d.q, d.f, d.left, d.right);
            }
            let report = json!({
                "left": a.name,
                "right": b.name,
                "ring": cli.ring,
                "equal": difference.is_none(),
                "difference": difference,
            });
            Ok(Outcome { holds: difference.is_none(), report: Report::Json(report) })
        }
        Command::Selfcheck => {
            let entries: Vec<CorpusEntry> = corpus::corpus()?;
            let lines = run_suite(&entries)?;
            for l in lines.iter().filter(|l| !l.holds) {
                eprintln!("falsified [{}] {}: {}", l.criterion, l.name, l.counterexample.as_deref().unwrap_or("-"));
            }
            let holds = lines.iter().all(|l| l.holds);
            Ok(Outcome {
                report: Report::Json(json!({ "diagrams": entries.len(), "holds": holds, "checks": lines })),
                holds,
            })
        }
    }
}

/// Leaves of a JSON value as `(path, scalar)` pairs in document order.
fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    let join = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match v {
        Value::Object(m) => m.iter().for_each(|(k, v)| flatten(&join(k), v, out)),
        Value::Array(a) => a.iter().enumerate().for_each(|(i, v)| flatten(&join(&i.to_string()), v, out)),
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        v => out.push((prefix.to_string(), v.to_string())),
    }
}

fn render(report: &Report, format: Format) -> String {
    match (report, format) {
        (Report::Table(t), Format::Json) => serde_json::to_string_pretty(t).expect("tables serialize") + "\n",
        (Report::Table(t), Format::Csv) => t.to_csv(),
        (Report::Table(t), Format::Table) => t.to_text(),
        (Report::Json(v), Format::Json) => serde_json::to_string_pretty(v).expect("reports serialize") + "\n",
        (Report::Json(v), format) => {
            let mut rows = Vec::new();
            flatten("", v, &mut rows);
            let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut out = String::new();
            if format == Format::Csv {
                out.push_str("key,value\n");
            }
            for (k, v) in rows {
                match format {
                    Format::Csv if v.contains([',', '"', '\n']) => {
                        writeln!(out, "{k},\"{}\"", v.replace('"', "\"\"")).unwrap()
                    }
                    Format::Csv => writeln!(out, "{k},{v}").unwrap(),
                    _ => writeln!(out, "{k:width$}  {v}").unwrap(),
                }
            }
            out
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(outcome) => {
            print!("{}", render(&outcome.report, cli.format));
            if outcome.holds {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Property(e)) => {
            eprintln!("falsified: {e}");
            ExitCode::from(1)
        }
    }
}
