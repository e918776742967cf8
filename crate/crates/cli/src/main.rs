//! Command-line front end: parse and compile expressions, manipulate
//! systems in the JSON interchange format and decide equality.

use std::io::{Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use freefield::json::{export_value, import_als};
use freefield::regular::{coeff, hankel_slice, is_regular};
use freefield::{
    compare_systems, compile, equality_pipeline, format_scalar, minimal_inverse, minimize_regular, parse, Alphabet,
    Als, Assignment, Certificate, CompileOptions, Error, KMatrix, PipelineOptions, Verdict, VerdictKind,
};
use serde_json::{json, Map, Value};

/// Writes to stdout, ignoring failures such as a closed pipe.
macro_rules! out {
    ($($arg:tt)*) => {{
        let _ = write!(std::io::stdout().lock(), $($arg)*);
    }};
}

macro_rules! outln {
    ($($arg:tt)*) => {{
        let _ = writeln!(std::io::stdout().lock(), $($arg)*);
    }};
}

const EXIT_NOT_EQUAL: u8 = 1;
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATA: u8 = 65;
const EXIT_INTERNAL: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "freefield", version, about = "Exact computations with linear representations of free-field elements")]
struct Cli {
    /// Emit machine-readable JSON.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Source {
    /// Expression, e.g. "x*y + y*x" or "inv(x) - 3/2*y".
    #[arg(conflicts_with = "als")]
    expr: Option<String>,

    /// Read a system from a JSON file, or `-` for stdin.
    #[arg(long, value_name = "FILE")]
    als: Option<String>,

    /// Alphabet, comma-separated (`x,y`) or as single letters (`xyz`).
    #[arg(long)]
    alphabet: Option<String>,

    /// Keep certification flags of the imported system.
    #[arg(long)]
    trusted: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse an expression and print it back.
    Parse { expr: String },
    /// Build a system for an expression.
    Compile {
        #[command(flatten)]
        src: Source,
        /// Minimize regular parts and use minimal inverses.
        #[arg(long)]
        minimize: bool,
    },
    /// Minimize a regular element.
    Minimize {
        #[command(flatten)]
        src: Source,
    },
    /// Rank (minimal dimension) of an element, when it can be certified.
    Rank {
        #[command(flatten)]
        src: Source,
    },
    /// Invert an element.
    Invert {
        #[command(flatten)]
        src: Source,
        /// Produce a minimal system from a minimal one.
        #[arg(long)]
        minimal: bool,
    },
    /// Decide whether two elements are equal.
    Eq {
        /// Expressions to compare; `--als` files take the remaining slots.
        exprs: Vec<String>,
        /// System files (or `-` for stdin, at most once).
        #[arg(long, value_name = "FILE")]
        als: Vec<String>,
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long)]
        trusted: bool,
        /// Seed for the witness search.
        #[arg(long, env = "FREEFIELD_SEED", default_value_t = 0)]
        seed: u64,
        /// Random matrix points to try.
        #[arg(long, default_value_t = 20)]
        trials: usize,
    },
    /// Coefficients of a regular element.
    Coeff {
        #[command(flatten)]
        src: Source,
        /// A single word, e.g. `xy`; `1` or an empty string for the empty word.
        #[arg(long, conflicts_with = "maxlen")]
        word: Option<String>,
        /// All words up to this length.
        #[arg(long)]
        maxlen: Option<usize>,
    },
    /// Hankel section of a regular element.
    Hankel {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        maxlen: usize,
    },
    /// Evaluate at a point of square matrices.
    Eval {
        #[command(flatten)]
        src: Source,
        /// JSON object mapping letters to matrices of scalars.
        #[arg(long, value_name = "FILE")]
        matrices: String,
    },
    /// Print a system as plain-text matrices.
    Show {
        #[command(flatten)]
        src: Source,
    },
}

/// Failure with an exit code and a message for stderr.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_DATA, message: e.to_string() }
    }
}

fn data_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_DATA, message: message.into() }
}

fn usage_error(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, message: message.into() }
}

type Outcome = Result<u8, Failure>;

fn parse_alphabet(text: &str) -> Result<Alphabet, Failure> {
    let ab = if text.contains(',') {
        Alphabet::new(text.split(',').map(str::trim))
    } else {
        Alphabet::from_chars(text.trim())
    };
    ab.map_err(|e| usage_error(e.to_string()))
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| data_error(format!("reading stdin: {e}")))?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| data_error(format!("reading {path}: {e}")))
    }
}

/// Imports a system document; a wrapper object with an `als` key (as
/// written by `invert --json`) is accepted too.
fn import_document(text: &str, trusted: bool) -> Result<Als, Failure> {
    let value: Value = serde_json::from_str(text).map_err(|e| data_error(format!("invalid JSON: {e}")))?;
    let doc = match value.get("als") {
        Some(inner) => inner.clone(),
        None => value,
    };
    Ok(import_als(&doc.to_string(), trusted)?)
}

fn load_als(path: &str, alphabet: Option<&Alphabet>, trusted: bool) -> Result<Als, Failure> {
    let f = import_document(&read_input(path)?, trusted)?;
    match alphabet {
        Some(ab) => Ok(f.over_alphabet(&f.alphabet().union(ab))?),
        None => Ok(f),
    }
}

fn compile_expr(text: &str, alphabet: Option<&Alphabet>, minimize: bool) -> Result<Als, Failure> {
    let e = parse(text)?;
    Ok(compile(&e, &CompileOptions { minimize, alphabet: alphabet.cloned() })?)
}

fn load(src: &Source, minimize: bool) -> Result<Als, Failure> {
    let ab = src.alphabet.as_deref().map(parse_alphabet).transpose()?;
    match (&src.expr, &src.als) {
        (Some(e), None) => compile_expr(e, ab.as_ref(), minimize),
        (None, Some(path)) => load_als(path, ab.as_ref(), src.trusted),
        _ => Err(usage_error("give either an expression or --als FILE")),
    }
}

/// A certified-minimal version of the input, minimizing regular systems.
fn certified(f: Als) -> Result<Option<Als>, Failure> {
    if f.is_certified_minimal() {
        Ok(Some(f))
    } else if is_regular(&f) {
        Ok(Some(minimize_regular(&f)?))
    } else {
        Ok(None)
    }
}

fn matrix_json(m: &KMatrix) -> Value {
    Value::Array(
        m.to_rows().iter().map(|r| Value::Array(r.iter().map(|x| Value::String(format_scalar(x))).collect())).collect(),
    )
}

fn point_json(p: &Assignment) -> Value {
    Value::Object(p.iter().map(|(k, m)| (k.clone(), matrix_json(m))).collect::<Map<_, _>>())
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Transformation { t, u, swapped } => {
            json!({"type": "transformation", "T": matrix_json(t), "U": matrix_json(u), "swapped": swapped})
        }
        Certificate::RankMismatch { left, right } => json!({"type": "rank_mismatch", "left": left, "right": right}),
        Certificate::NoTransformation => json!({"type": "no_transformation"}),
        Certificate::Witness { point, left, right } => json!({
            "type": "witness",
            "point": point_json(point),
            "left": matrix_json(left),
            "right": matrix_json(right),
        }),
    }
}

fn verdict_name(kind: VerdictKind) -> &'static str {
    match kind {
        VerdictKind::Equal => "equal",
        VerdictKind::NotEqual => "not_equal",
        VerdictKind::Inconclusive => "inconclusive",
    }
}

fn verdict_json(v: &Verdict) -> Value {
    json!({
        "verdict": verdict_name(v.kind),
        "method": v.method.map(|m| m.as_str()),
        "certificate": v.certificate.as_ref().map(certificate_json),
    })
}

fn print_json(v: &Value) {
    outln!("{}", serde_json::to_string_pretty(v).expect("values always serialize"));
}

fn print_als(f: &Als) {
    print_json(&export_value(f));
}

fn run_eq(
    exprs: &[String],
    files: &[String],
    alphabet: Option<&str>,
    trusted: bool,
    opts: &PipelineOptions,
) -> Result<Verdict, Failure> {
    if exprs.len() + files.len() != 2 {
        return Err(usage_error("eq needs exactly two operands (expressions or --als files)"));
    }
    if files.iter().filter(|f| *f == "-").count() > 1 {
        return Err(usage_error("stdin can be read only once"));
    }
    let ab = alphabet.map(parse_alphabet).transpose()?;
    if files.is_empty() {
        let (e1, e2) = (parse(&exprs[0])?, parse(&exprs[1])?);
        return Ok(match &ab {
            // an explicit alphabet restricts the letters of both sides
            Some(a) => {
                for e in [&e1, &e2] {
                    compile(e, &CompileOptions { minimize: false, alphabet: Some(a.clone()) })?;
                }
                equality_pipeline(&e1, &e2, opts)?
            }
            None => equality_pipeline(&e1, &e2, opts)?,
        });
    }
    let mut sides = Vec::with_capacity(2);
    for e in exprs {
        sides.push(compile_expr(e, ab.as_ref(), true)?);
    }
    for path in files {
        sides.push(load_als(path, ab.as_ref(), trusted)?);
    }
    Ok(compare_systems(&sides[0], &sides[1], opts)?)
}

fn parse_point(text: &str) -> Result<Assignment, Failure> {
    let value: Value = serde_json::from_str(text).map_err(|e| data_error(format!("invalid JSON: {e}")))?;
    let obj = value.as_object().ok_or_else(|| data_error("matrices file must be a JSON object"))?;
    let mut point = Assignment::new();
    for (letter, rows) in obj {
        let rows =
            rows.as_array().ok_or_else(|| data_error(format!("matrix for {letter} must be an array of rows")))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let row =
                row.as_array().ok_or_else(|| data_error(format!("matrix for {letter} must be an array of rows")))?;
            let cells: Result<Vec<_>, Failure> = row
                .iter()
                .map(|c| match c {
                    Value::String(s) => Ok(freefield::parse_scalar(s)?),
                    Value::Number(n) if n.is_i64() => Ok(freefield::int(n.as_i64().unwrap_or_default())),
                    other => Err(data_error(format!("bad scalar {other}"))),
                })
                .collect();
            parsed.push(cells?);
        }
        point.insert(letter.clone(), KMatrix::from_rows(parsed)?);
    }
    Ok(point)
}

fn run(cli: Cli) -> Outcome {
    let json_out = cli.json;
    match cli.command {
        Command::Parse { expr } => {
            let e = parse(&expr)?;
            if json_out {
                print_json(&json!({"expr": e.to_string(), "letters": e.letters()}));
            } else {
                outln!("{e}");
            }
        }
        Command::Compile { src, minimize } => {
            let f = load(&src, minimize)?;
            let f = if minimize && !f.is_certified_minimal() && is_regular(&f) { minimize_regular(&f)? } else { f };
            print_als(&f);
        }
        Command::Minimize { src } => {
            let f = load(&src, false)?;
            print_als(&minimize_regular(&f)?);
        }
        Command::Rank { src } => {
            let Some(f) = certified(load(&src, true)?)? else {
                if json_out {
                    print_json(&json!({"rank": Value::Null, "certified": false}));
                } else {
                    eprintln!("rank unknown: no certified minimal system could be built");
                }
                return Ok(EXIT_INCONCLUSIVE);
            };
            if json_out {
                print_json(&json!({"rank": f.dim(), "certified": true}));
            } else {
                outln!("{}", f.dim());
            }
        }
        Command::Invert { src, minimal } => {
            let (g, method) = if minimal {
                let f = certified(load(&src, true)?)?.ok_or_else(|| {
                    data_error("the minimal inverse needs a system certified minimal; this one cannot be certified")
                })?;
                let inv = minimal_inverse(&f)?;
                (inv.als, inv.method.to_string())
            } else {
                (load(&src, false)?.std_inverse()?, "standard".to_string())
            };
            if json_out {
                print_json(&json!({"method": method, "als": export_value(&g)}));
            } else {
                eprintln!("method: {method}");
                print_als(&g);
            }
        }
        Command::Eq { exprs, als, alphabet, trusted, seed, trials } => {
            let opts = PipelineOptions { seed, trials, ..PipelineOptions::default() };
            let v = run_eq(&exprs, &als, alphabet.as_deref(), trusted, &opts)?;
            if json_out {
                print_json(&verdict_json(&v));
            } else {
                match v.method {
                    Some(m) => outln!("{} ({})", verdict_name(v.kind), m.as_str()),
                    None => outln!("{}", verdict_name(v.kind)),
                }
            }
            return Ok(match v.kind {
                VerdictKind::Equal => 0,
                VerdictKind::NotEqual => EXIT_NOT_EQUAL,
                VerdictKind::Inconclusive => EXIT_INCONCLUSIVE,
            });
        }
        Command::Coeff { src, word, maxlen } => {
            let f = load(&src, false)?;
            let ab = f.alphabet().clone();
            let words = match (word, maxlen) {
                (Some(w), None) => vec![if w.is_empty() || w == "1" { vec![] } else { ab.parse_word(&w)? }],
                (None, Some(l)) => ab.words_up_to(l),
                _ => return Err(usage_error("give --word W or --maxlen L")),
            };
            let mut rows = Vec::with_capacity(words.len());
            for w in &words {
                rows.push((ab.format_word(w), format_scalar(&coeff(&f, w)?)));
            }
            if json_out {
                let rows: Vec<Value> = rows.into_iter().map(|(w, c)| json!({"word": w, "coeff": c})).collect();
                print_json(&Value::Array(rows));
            } else {
                for (w, c) in rows {
                    outln!("{w}\t{c}");
                }
            }
        }
        Command::Hankel { src, maxlen } => {
            let f = load(&src, false)?;
            let h = hankel_slice(&f, maxlen)?;
            let ab = f.alphabet();
            let names = |ws: &[Vec<usize>]| ws.iter().map(|w| ab.format_word(w)).collect::<Vec<_>>();
            let rank = h.entries.rank();
            if json_out {
                print_json(&json!({
                    "max_len": maxlen,
                    "row_words": names(&h.row_words),
                    "col_words": names(&h.col_words),
                    "entries": matrix_json(&h.entries),
                    "rank": rank,
                }));
            } else {
                outln!("columns: {}", names(&h.col_words).join(" "));
                out!("{}", h.entries);
                outln!("rank: {rank}");
            }
        }
        Command::Eval { src, matrices } => {
            let f = load(&src, false)?;
            let point = parse_point(&read_input(&matrices)?)?;
            let value = f
                .eval_at_matrices(&point)?
                .ok_or_else(|| data_error("the system is not defined at this point (singular pencil)"))?;
            if json_out {
                print_json(&json!({"value": matrix_json(&value)}));
            } else {
                out!("{value}");
            }
        }
        Command::Show { src } => {
            let f = load(&src, false)?;
            if json_out {
                print_als(&f);
            } else {
                out!("{f}");
            }
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    std::panic::set_hook(Box::new(|info| eprintln!("internal error: {info}")));
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(code)) => ExitCode::from(code),
        Ok(Err(f)) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
        Err(_) => ExitCode::from(EXIT_INTERNAL),
    }
}
