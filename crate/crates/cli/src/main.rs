use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use derlie::parse::{parse_derivation, parse_derivation_list};
use derlie::random::random_nilpotent;
use derlie::report::{
    BracketReport, EmbeddingReport, FuzzEntry, FuzzReport, StructureReport, VerdictReport, WitnessReport,
};
use derlie::triangular::non_nilpotency_witness;
use derlie::{bracket, build_l1, build_l2, classify, embed, Error, SpannedLieAlgebra, VerdictCase};

const EXIT_GOLDEN_MISMATCH: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_HYPOTHESIS: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser, Debug)]
#[command(name = "derlie", version, about = "Exact Lie algebras of polynomial vector fields")]
struct Cli {
    /// Write the output to this directory on first use, compare against it afterwards.
    #[arg(long, global = true, value_name = "DIR")]
    golden: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    verb: Verb,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(clap::Args, Debug)]
struct Input {
    /// Semicolon-separated derivations, e.g. "d1; x3*d1 + d2".
    #[arg(required_unless_present = "file")]
    text: Option<String>,

    /// Read the derivations from a file instead.
    #[arg(short, long, conflicts_with = "text")]
    file: Option<PathBuf>,

    /// Number of variables (default: largest index used).
    #[arg(short, long)]
    n: Option<usize>,

    #[arg(long, default_value_t = derlie::lie::DEFAULT_MAX_DIM)]
    max_dim: usize,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Family {
    L1,
    L2,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Bracket of two derivations.
    Bracket {
        left: String,
        right: String,
        #[arg(short, long)]
        n: Option<usize>,
    },
    /// Basis, structure constants, rank, center, corank and nilpotency class.
    Structure(Input),
    /// Classification verdict.
    Classify(Input),
    /// Verified embedding into the triangular algebra.
    Embed(Input),
    /// Truncated model algebras.
    Build {
        #[arg(value_enum)]
        family: Family,
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        k: usize,
    },
    /// Non-nilpotency chain in u_n.
    Witness {
        #[arg(short, long)]
        n: usize,
        #[arg(short, long)]
        len: usize,
    },
    /// Classify and embed seeded random nilpotent algebras.
    Fuzz {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        count: u64,
        #[arg(short, long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 3)]
        size: usize,
    },
}

/// What a verb produced: the report and the exit status it implies.
struct Outcome {
    json: serde_json::Value,
    text: String,
    code: u8,
}

impl Outcome {
    fn ok<T: Serialize>(report: &T, text: String) -> Self {
        Outcome {
            json: serde_json::to_value(report).expect("reports serialize"),
            text,
            code: 0,
        }
    }
}

struct Failure {
    code: u8,
    kind: &'static str,
    check: Option<String>,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (code, kind, check) = match e {
            Error::Parse { .. }
            | Error::DimensionMismatch { .. }
            | Error::IndexOutOfRange { .. }
            | Error::DivisionByZero => (EXIT_PARSE, "parse", None),
            Error::Hypothesis { check, .. } => (EXIT_HYPOTHESIS, "hypothesis", Some(check)),
            Error::NotFiniteDimensional { .. } => (EXIT_HYPOTHESIS, "hypothesis", Some("finite_dimensional".into())),
            Error::NotNilpotent => (EXIT_HYPOTHESIS, "hypothesis", Some("nilpotent".into())),
            Error::NotLocallyNilpotent { .. } => (EXIT_HYPOTHESIS, "hypothesis", Some("locally_nilpotent".into())),
            Error::NoSlice(_) => (EXIT_HYPOTHESIS, "hypothesis", Some("slice_exists".into())),
            Error::KernelNotSimple(_) => (EXIT_HYPOTHESIS, "hypothesis", Some("kernel_one_dimensional".into())),
            Error::NotPolynomial(_) => (EXIT_HYPOTHESIS, "hypothesis", Some("polynomial_coefficients".into())),
            Error::InvariantViolation(_) | Error::NotInvariant | Error::NotInSpan => {
                (EXIT_INVARIANT, "invariant", None)
            }
        };
        Failure {
            code,
            kind,
            check,
            message,
        }
    }
}

fn read_input(input: &Input) -> Result<String, Failure> {
    match (&input.text, &input.file) {
        (Some(t), _) => Ok(t.clone()),
        (None, Some(p)) => fs::read_to_string(p).map_err(|e| Failure {
            code: EXIT_PARSE,
            kind: "parse",
            check: None,
            message: format!("cannot read {}: {}", p.display(), e),
        }),
        (None, None) => unreachable!("clap requires one of them"),
    }
}

fn algebra(input: &Input) -> Result<SpannedLieAlgebra, Failure> {
    let text = read_input(input)?;
    let ds = parse_derivation_list(&text, input.n)?;
    let n = match (input.n, ds.first()) {
        (Some(n), _) => n,
        (None, Some(d)) => d.num_vars(),
        (None, None) => 0,
    };
    Ok(SpannedLieAlgebra::close_under_bracket(n, &ds, input.max_dim)?)
}

fn structure_text(r: &StructureReport) -> String {
    let mut s = String::new();
    s += &format!("dim {}  rank {}  corank {}  ", r.dim, r.rank, r.corank);
    s += &match r.nilpotency_class {
        Some(c) => format!("class {}\n", c),
        None => "not nilpotent\n".to_string(),
    };
    for (i, b) in r.basis.iter().enumerate() {
        s += &format!("b{} = {}\n", i, b);
    }
    for t in &r.structure_constants {
        s += &format!("[b{}, b{}] += {} b{}\n", t.i, t.j, t.coeff, t.k);
    }
    s += &format!("center: {}\n", r.center.join("; "));
    s
}

fn verdict_text(r: &VerdictReport) -> String {
    let mut s = r.case.clone();
    if let Some(c) = &r.failed_check {
        s += &format!(" (failed check: {})", c);
    }
    s += "\n";
    for (i, d) in r.adapted_basis.iter().enumerate() {
        s += &format!("D{} = {}\n", i + 1, d);
    }
    if let Some(a) = &r.a {
        s += &format!("a = {}\n", a);
    }
    if let Some(b) = &r.b {
        s += &format!("b = {}\n", b);
    }
    s
}

fn run(verb: &Verb) -> Result<Outcome, Failure> {
    match verb {
        Verb::Bracket { left, right, n } => {
            let n = match n {
                Some(n) => Some(*n),
                None => Some(derlie::parse::max_index(left)?.max(derlie::parse::max_index(right)?)),
            };
            let l = parse_derivation(left, n)?;
            let r = parse_derivation(right, n)?;
            let b = bracket(&l, &r)?;
            let report = BracketReport {
                left: l.to_string(),
                right: r.to_string(),
                bracket: b.to_string(),
            };
            Ok(Outcome::ok(&report, format!("{}\n", b)))
        }
        Verb::Structure(input) => {
            let alg = algebra(input)?;
            let r = StructureReport::new(&alg);
            let text = structure_text(&r);
            Ok(Outcome::ok(&r, text))
        }
        Verb::Classify(input) => {
            let alg = algebra(input)?;
            let v = classify(&alg)?;
            let r = VerdictReport::new(&v);
            let text = verdict_text(&r);
            let mut out = Outcome::ok(&r, text);
            if v.is_out_of_scope() {
                out.code = EXIT_HYPOTHESIS;
            }
            Ok(out)
        }
        Verb::Embed(input) => {
            let alg = algebra(input)?;
            let v = classify(&alg)?;
            if let VerdictCase::OutOfScope { check, detail } = &v.case {
                return Err(Failure {
                    code: EXIT_HYPOTHESIS,
                    kind: "hypothesis",
                    check: Some(check.clone()),
                    message: detail.clone(),
                });
            }
            let m = embed(&v, &alg)?;
            let r = EmbeddingReport::new(&v.case, &m);
            let text = r
                .table
                .iter()
                .map(|e| format!("{} -> {}\n", e.source, e.image))
                .collect();
            Ok(Outcome::ok(&r, text))
        }
        Verb::Build { family, n, k } => {
            let (name, alg) = match family {
                Family::L1 => ("L1", build_l1(*n, *k)?),
                Family::L2 => ("L2", build_l2(*n, *k)?),
            };
            let r = StructureReport::new(&alg);
            let text = structure_text(&r);
            let report = json!({ "family": name, "n": n, "k": k, "structure": r });
            Ok(Outcome::ok(&report, text))
        }
        Verb::Witness { n, len } => {
            let chain = non_nilpotency_witness(*n, *len)?;
            let r = WitnessReport {
                n: *n,
                length: chain.len(),
                chain: chain.iter().map(|d| d.to_string()).collect(),
            };
            let text = r.chain.iter().map(|d| format!("{}\n", d)).collect();
            Ok(Outcome::ok(&r, text))
        }
        Verb::Fuzz { seed, count, n, size } => {
            let entries: Vec<FuzzEntry> = (*seed..seed.saturating_add(*count))
                .map(|s| fuzz_one(*n, s, *size))
                .collect();
            let passed = entries.iter().filter(|e| e.passed).count();
            let r = FuzzReport {
                n: *n,
                size: *size,
                failed: entries.len() - passed,
                passed,
                entries,
            };
            let text = r
                .entries
                .iter()
                .map(|e| format!("seed {} dim {} {} {}\n", e.seed, e.dim, e.case, if e.passed { "ok" } else { "FAIL" }))
                .collect();
            let code = if r.failed == 0 { 0 } else { EXIT_INVARIANT };
            let mut out = Outcome::ok(&r, text);
            out.code = code;
            Ok(out)
        }
    }
}

fn fuzz_one(n: usize, seed: u64, size: usize) -> FuzzEntry {
    let mut entry = FuzzEntry {
        seed,
        dim: 0,
        case: String::new(),
        passed: false,
        error: None,
    };
    let result = (|| -> derlie::Result<()> {
        let alg = random_nilpotent(n, seed, size)?;
        entry.dim = alg.dim();
        let v = classify(&alg)?;
        entry.case = v.case.tag().to_string();
        if !v.is_out_of_scope() {
            embed(&v, &alg)?;
        }
        Ok(())
    })();
    match result {
        Ok(()) => entry.passed = true,
        Err(e) => entry.error = Some(e.to_string()),
    }
    entry
}

fn golden_path(dir: &Path, args: &[String]) -> PathBuf {
    let key = args.join("\u{1f}");
    let digest = Sha256::digest(key.as_bytes());
    let verb = args.iter().find(|a| !a.starts_with('-')).map_or("output", String::as_str);
    let hex: String = digest.iter().take(8).map(|b| format!("{:02x}", b)).collect();
    dir.join(format!("{}-{}.json", verb, hex))
}

/// Writes the golden file if absent; otherwise reports whether `out` matches it.
fn check_golden(dir: &Path, out: &str) -> Result<bool, String> {
    let args: Vec<String> = std::env::args()
        .skip(1)
        .scan(false, |skip, a| {
            // The golden directory itself does not identify the output.
            let keep = !*skip && a != "--golden" && !a.starts_with("--golden=");
            *skip = a == "--golden";
            Some(keep.then_some(a))
        })
        .flatten()
        .collect();
    let path = golden_path(dir, &args);
    match fs::read_to_string(&path) {
        Ok(expected) => Ok(expected == out),
        Err(_) => {
            fs::create_dir_all(dir).map_err(|e| e.to_string())?;
            fs::write(&path, out).map_err(|e| e.to_string())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code) = match run(&cli.verb) {
        Ok(o) => {
            let s = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&o.json).expect("valid json")),
                Format::Text => o.text,
            };
            (s, o.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            let mut body = json!({ "error": f.kind, "message": f.message });
            if let Some(c) = &f.check {
                body["failed_check"] = json!(c);
            }
            let s = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&body).expect("valid json")),
                Format::Text => match &f.check {
                    Some(c) => format!("failed check: {}\n", c),
                    None => String::new(),
                },
            };
            (s, f.code)
        }
    };
    print!("{}", out);
    if let Some(dir) = &cli.golden {
        match check_golden(dir, &out) {
            Ok(true) => {}
            Ok(false) => {
                eprintln!("error: output differs from the golden file in {}", dir.display());
                return ExitCode::from(EXIT_GOLDEN_MISMATCH);
            }
            Err(e) => {
                eprintln!("error: cannot write golden file: {}", e);
                return ExitCode::from(EXIT_GOLDEN_MISMATCH);
            }
        }
    }
    ExitCode::from(code)
}
