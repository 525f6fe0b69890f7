//! The `matrep` command line.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

use crate::bounds::{
    conjecture_log2_count, d_of_n, delta, knuth_log2_lower, log2_k, log2_k_prime, main_theorem_check,
    rbg_pattern_bound, theorem2_matroid_instance, CheckStatus,
};
use crate::census_file::{format_matroid, parse_census, serialize_census};
use crate::enumerate::{
    census_representability, enumerate_matroids, sample_nonbasis_candidates, EnumOptions, DEFAULT_ENUM_CAP,
};
use crate::error::{Error, Result};
use crate::gf::GfContext;
use crate::patterns::{enumerate_patterns, PatternSet, DEFAULT_EVAL_BUDGET};
use crate::polyfile::parse_system;
use crate::report::{self, Report};
use crate::represent::{SearchOptions, DEFAULT_NODE_BUDGET};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "matrep", version, about = "Matroid censuses, finite-field representability and counting bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON report here; `-` sends it to stdout and the summary to stderr.
    #[arg(long, global = true)]
    report: Option<PathBuf>,
    /// Add wall-clock timings to the JSON report.
    #[arg(long, global = true)]
    timings: bool,
    /// Decimal digits for logarithmic quantities.
    #[arg(long, global = true, default_value_t = 12)]
    precision: usize,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate all matroids of rank r on n elements and write a census file.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        r: usize,
        /// Census file to write; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Mode::Unlabeled)]
        mode: Mode,
        /// Refuse censuses with n above this.
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP)]
        max_n: usize,
    },
    /// Decide representability of every matroid in a census file.
    CheckRep {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Enumerate the zero patterns of a polynomial-system file.
    ZeroPatterns {
        #[arg(long)]
        system: PathBuf,
        #[arg(long, default_value = "2,3")]
        fields: String,
        /// Maximum number of points evaluated per field.
        #[arg(long, default_value_t = DEFAULT_EVAL_BUDGET)]
        budget: u64,
    },
    /// Print k(n,r), k'(n,r), d(n), the Knuth lower bound and the conjectured count.
    Bounds {
        #[arg(long)]
        n: u64,
        /// Defaults to floor(n/2).
        #[arg(long)]
        r: Option<u64>,
    },
    /// Check the dimension-count hypothesis and the aggregate bound over a range of n.
    VerifyTheorem2 {
        /// Inclusive range such as `12..16`, or a single value.
        #[arg(long, default_value = "12..20")]
        n_range: String,
    },
    /// Sample random nonbasis families of size d(n) - 1.
    ConjectureSample {
        #[arg(long)]
        n: usize,
        /// Defaults to floor(n/2).
        #[arg(long)]
        r: Option<usize>,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        search: SearchArgs,
    },
}

#[derive(Args, Debug)]
struct SearchArgs {
    /// Comma-separated field orders (prime powers up to 16).
    #[arg(long, default_value = "2,3,4,5,7,8")]
    fields: String,
    /// Node limit per representability search.
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget: u64,
    /// Also normalize rows along a spanning forest of the support.
    #[arg(long)]
    row_normalization: bool,
}

impl SearchArgs {
    fn options(&self) -> SearchOptions {
        SearchOptions {
            budget: self.budget,
            row_normalization: self.row_normalization,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Unlabeled,
    Labeled,
}

/// Parses `2,3,4` into field contexts, sorted and deduplicated.
pub fn parse_fields(list: &str) -> Result<Vec<GfContext>> {
    let mut orders = Vec::new();
    for part in list.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let q: u64 = part
            .parse()
            .map_err(|_| Error::InvalidInput(format!("field order `{part}` is not an integer")))?;
        orders.push(q);
    }
    orders.sort_unstable();
    orders.dedup();
    orders.into_iter().map(GfContext::of_order).collect()
}

/// Parses `a..b`, `a..=b` or `a` as an inclusive range.
pub fn parse_range(s: &str) -> Result<(u64, u64)> {
    let bad = || Error::InvalidInput(format!("range `{s}` is not of the form a..b"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a, b.strip_prefix('=').unwrap_or(b)),
        None => (s, s),
    };
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BudgetExceeded { .. } => EXIT_BUDGET,
        Error::Internal(_) => EXIT_VERIFICATION,
        _ => EXIT_USAGE,
    }
}

struct Output {
    report: Report,
    summary: String,
    status: i32,
    /// Census text destined for stdout.
    payload: Option<Vec<u8>>,
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn field_orders(fields: &[GfContext]) -> Vec<usize> {
    fields.iter().map(GfContext::order).collect()
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            return code;
        }
    };
    let result = match cli.workers {
        Some(w) => match rayon::ThreadPoolBuilder::new().num_threads(w.max(1)).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => Err(Error::Internal(format!("worker pool: {e}"))),
        },
        None => dispatch(&cli),
    };
    match result {
        Ok(out) => {
            if let Some(bytes) = &out.payload {
                if let Err(e) = stdout.write_all(bytes) {
                    let _ = writeln!(stderr, "error: {e}");
                    return EXIT_VERIFICATION;
                }
            }
            let json = out.report.to_json();
            let written = match cli.report.as_deref() {
                Some(p) if p == Path::new("-") => stdout
                    .write_all(json.as_bytes())
                    .and_then(|_| stderr.write_all(out.summary.as_bytes()))
                    .map_err(|e| Error::Internal(e.to_string())),
                Some(p) => write_file(p, json.as_bytes())
                    .and_then(|_| stdout.write_all(out.summary.as_bytes()).map_err(|e| Error::Internal(e.to_string()))),
                None => stdout
                    .write_all(out.summary.as_bytes())
                    .map_err(|e| Error::Internal(e.to_string())),
            };
            match written {
                Ok(()) => out.status,
                Err(e) => {
                    let _ = writeln!(stderr, "error: {e}");
                    exit_code(&e)
                }
            }
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Output> {
    let start = Instant::now();
    let mut out = match &cli.command {
        Command::Enumerate {
            n,
            r,
            out,
            mode,
            max_n,
        } => cmd_enumerate(*n, *r, out.as_deref(), *mode, *max_n)?,
        Command::CheckRep { input, search } => cmd_check_rep(input, search)?,
        Command::ZeroPatterns { system, fields, budget } => cmd_zero_patterns(system, fields, *budget)?,
        Command::Bounds { n, r } => cmd_bounds(*n, *r, cli.precision)?,
        Command::VerifyTheorem2 { n_range } => cmd_verify_theorem2(n_range, cli.precision)?,
        Command::ConjectureSample {
            n,
            r,
            trials,
            seed,
            search,
        } => cmd_conjecture_sample(*n, *r, *trials, *seed, search)?,
    };
    if cli.command_uses_precision() {
        out.report.param("precision", cli.precision);
    }
    let elapsed = start.elapsed().as_secs_f64();
    if cli.timings {
        out.report.timing("total_seconds", elapsed);
    }
    out.summary.push_str(&format!("elapsed: {elapsed:.3}s\n"));
    Ok(out)
}

impl Cli {
    fn command_uses_precision(&self) -> bool {
        matches!(self.command, Command::Bounds { .. } | Command::VerifyTheorem2 { .. })
    }
}

fn cmd_enumerate(
    n: usize,
    r: usize,
    out: Option<&Path>,
    mode: Mode,
    max_n: usize,
) -> Result<Output> {
    let census = enumerate_matroids(n, r, EnumOptions { max_n })?;
    let census = match mode {
        Mode::Unlabeled => census,
        Mode::Labeled => census.to_labeled()?,
    };
    let bytes = serialize_census(&census)?;
    let payload = match out {
        Some(p) => {
            write_file(p, &bytes)?;
            None
        }
        None => Some(bytes),
    };
    let mut report = Report::new("enumerate");
    report
        .param("n", n)
        .param("r", r)
        .param("mode", census.mode.as_str())
        .param("max_n", max_n);
    report
        .aggregate("items", census.items.len())
        .aggregate("labeled_count", report::big(&census.labeled_count));
    let summary = format!(
        "census n={n} r={r} mode={}: {} items, {} labeled matroids\n",
        census.mode.as_str(),
        census.items.len(),
        census.labeled_count
    );
    Ok(Output {
        report,
        summary,
        status: EXIT_OK,
        payload,
    })
}

fn cmd_check_rep(input: &Path, search: &SearchArgs) -> Result<Output> {
    let fields = parse_fields(&search.fields)?;
    let census = parse_census(&read_file(input)?)?;
    let result = census_representability(std::slice::from_ref(&census), &fields, search.options())?;
    let mut report = Report::new("check-rep");
    report
        .param("input_n", census.n)
        .param("input_r", census.r)
        .param("input_mode", census.mode.as_str())
        .param("budget", search.budget)
        .param("row_normalization", search.row_normalization);
    report.fields = field_orders(&fields);
    report.verdicts = report::census_verdicts(&result);
    report.aggregates = report::census_aggregates(&result);

    let mut summary = format!(
        "census n={} r={} ({} items) over GF({:?})\n",
        census.n,
        census.r,
        census.items.len(),
        report.fields
    );
    for v in &result.items {
        let found: Vec<String> = v
            .per_field
            .iter()
            .filter(|(_, st)| st.as_str() == "found")
            .map(|(q, _)| q.to_string())
            .collect();
        summary.push_str(&format!(
            "  {}  {}  found over: {}\n",
            format_matroid(&v.matroid),
            v.verdict.as_str(),
            if found.is_empty() { "-".to_string() } else { found.join(",") }
        ));
    }
    summary.push_str(&format!(
        "representable: {}/{} unlabeled, {}/{} labeled; inconclusive: {}\n",
        result.unlabeled_representable,
        result.unlabeled_total,
        result.labeled_representable,
        result.labeled_total,
        result.inconclusive
    ));
    Ok(Output {
        report,
        summary,
        status: EXIT_OK,
        payload: None,
    })
}

fn cmd_zero_patterns(system: &Path, fields: &str, budget: u64) -> Result<Output> {
    let fields = parse_fields(fields)?;
    let text = String::from_utf8(read_file(system)?)
        .map_err(|_| Error::Parse { offset: 0, message: "file is not text".into() })?;
    let sys = parse_system(&text)?;
    let bound = rbg_pattern_bound(
        &BigUint::from(sys.len()),
        u64::from(sys.max_degree()),
        sys.num_vars() as u64,
    );
    let mut union = PatternSet::new(sys.len());
    let mut per_field = Vec::new();
    let mut within = true;
    for ctx in &fields {
        let set = enumerate_patterns(&sys, ctx, budget)?;
        if !set.verify(&sys)? {
            return Err(Error::Internal(format!("pattern witnesses over {ctx} do not verify")));
        }
        within &= BigUint::from(set.len()) <= bound;
        per_field.push(json!({ "q": ctx.order(), "count": set.len() }));
        union.union_with(set);
    }
    let mut report = Report::new("zero-patterns");
    report
        .param("polynomials", sys.len())
        .param("variables", sys.num_vars())
        .param("max_degree", sys.max_degree())
        .param("system", sys.polys().iter().map(|p| p.to_string()).collect::<Vec<_>>())
        .param("budget", budget);
    report.fields = field_orders(&fields);
    report.verdicts = report::pattern_verdicts(&union);
    report
        .aggregate("per_field", Value::Array(per_field.clone()))
        .aggregate("union_count", union.len())
        .aggregate("bound", report::big(&bound))
        .aggregate("within_bound", within);
    let mut summary = format!(
        "{} polynomials, {} variables, degree <= {}; bound C(Nd+m, m) = {bound}\n",
        sys.len(),
        sys.num_vars(),
        sys.max_degree()
    );
    for f in &per_field {
        summary.push_str(&format!("  GF({}): {} patterns\n", f["q"], f["count"]));
    }
    for (p, w) in union.iter() {
        let set: Vec<String> = crate::patterns::pattern_indices(p).iter().map(|i| i.to_string()).collect();
        summary.push_str(&format!("  {{{}}}  witness GF({}) {:?}\n", set.join(","), w.q, w.point));
    }
    Ok(Output {
        report,
        summary,
        status: if within { EXIT_OK } else { EXIT_VERIFICATION },
        payload: None,
    })
}

fn value_or_error(r: Result<crate::bounds::LogBound>, digits: usize) -> Value {
    match r {
        Ok(b) => report::log_bound(&b, digits),
        Err(e) => json!({ "error": e.to_string() }),
    }
}

fn show(v: &Value) -> String {
    match v.get("value") {
        Some(Value::String(s)) => format!("{s} (± {:e})", v["radius"].as_f64().unwrap_or(f64::NAN)),
        _ => v["error"].as_str().unwrap_or("n/a").to_string(),
    }
}

fn cmd_bounds(n: u64, r: Option<u64>, digits: usize) -> Result<Output> {
    let r = r.unwrap_or(n / 2);
    if n == 0 || r > n {
        return Err(Error::InvalidInput(format!("need 1 <= n and r <= n (got n={n}, r={r})")));
    }
    let entries: Vec<(&str, Value)> = vec![
        ("log2_k", value_or_error(log2_k(n, r), digits)),
        ("log2_k_prime", value_or_error(log2_k_prime(n, r), digits)),
        ("knuth_log2_lower", value_or_error(knuth_log2_lower(n), digits)),
        ("conjecture_log2_count", value_or_error(conjecture_log2_count(n), digits)),
    ];
    let d = d_of_n(n).ok();
    let mut report = Report::new("bounds");
    report.param("n", n).param("r", r);
    let mut summary = format!("n = {n}, r = {r}\n");
    for (name, v) in &entries {
        summary.push_str(&format!("  {name} = {}\n", show(v)));
        report.aggregate(name, v.clone());
    }
    report.aggregate("d", json!(d)).aggregate("delta", delta(n));
    summary.push_str(&format!(
        "  d(n) = {}\n  delta(n) = {}\n",
        d.map_or("n/a".to_string(), |d| d.to_string()),
        delta(n)
    ));
    Ok(Output {
        report,
        summary,
        status: EXIT_OK,
        payload: None,
    })
}

fn cmd_verify_theorem2(n_range: &str, digits: usize) -> Result<Output> {
    let (lo, hi) = parse_range(n_range)?;
    if lo < 4 {
        return Err(Error::InvalidInput("verify-theorem2 needs n >= 4".into()));
    }
    let mut report = Report::new("verify-theorem2");
    report.param("n_min", lo).param("n_max", hi);
    let mut summary = String::new();
    let mut all_hold = true;
    let mut instances = 0u64;
    for n in lo..=hi {
        for r in 2..=n / 2 {
            let check = theorem2_matroid_instance(n, r)?;
            all_hold &= check.status == CheckStatus::Holds;
            instances += 1;
            report.verdicts.push(json!({
                "kind": "dimension-count",
                "n": n,
                "r": r,
                "status": check.status.as_str(),
                "margin": check.margin.as_ref().map(|m| report::log_bound(m, digits)),
            }));
        }
        match main_theorem_check(n) {
            Ok(check) => {
                all_hold &= check.status == CheckStatus::Holds;
                report.verdicts.push(json!({
                    "kind": "aggregate",
                    "n": n,
                    "status": check.status.as_str(),
                    "margin": report::log_bound(&check.margin, digits),
                    "maximizing_rank": check.maximizing_rank,
                }));
                summary.push_str(&format!(
                    "  n={n}: aggregate {} (margin {})\n",
                    check.status.as_str(),
                    check.margin.to_decimal(digits.min(6))
                ));
            }
            Err(Error::Precondition(msg)) => {
                report.verdicts.push(json!({ "kind": "aggregate", "n": n, "status": "skipped", "reason": msg }));
            }
            Err(e) => return Err(e),
        }
    }
    report
        .aggregate("dimension_count_instances", instances)
        .aggregate("all_hold", all_hold);
    summary.insert_str(
        0,
        &format!(
            "n in {lo}..={hi}: {instances} dimension-count instances, all hold: {all_hold}\n"
        ),
    );
    Ok(Output {
        report,
        summary,
        status: if all_hold { EXIT_OK } else { EXIT_VERIFICATION },
        payload: None,
    })
}

fn cmd_conjecture_sample(n: usize, r: Option<usize>, trials: usize, seed: u64, search: &SearchArgs) -> Result<Output> {
    let fields = parse_fields(&search.fields)?;
    let r = r.unwrap_or(n / 2);
    let sample = sample_nonbasis_candidates(n, r, trials, seed, &fields, search.options())?;
    let mut report = Report::new("conjecture-sample");
    report
        .param("n", n)
        .param("r", r)
        .param("trials", trials)
        .param("budget", search.budget)
        .param("row_normalization", search.row_normalization);
    report.seed = Some(seed);
    report.fields = field_orders(&fields);
    report.verdicts = report::sample_verdicts(&sample);
    report.aggregates = report::sample_aggregates(&sample);
    let rate = |x: Option<f64>| x.map_or("n/a".to_string(), |v| format!("{v:.4}"));
    let summary = format!(
        "n={n} r={r} seed={seed}: {} trials with {} nonbases each\n  matroid rate {} ({}), representable rate among matroids {} ({})\n",
        sample.trials.len(),
        sample.nonbasis_count,
        rate(sample.matroid_rate()),
        sample.matroids,
        rate(sample.representable_rate()),
        sample.representable
    );
    Ok(Output {
        report,
        summary,
        status: EXIT_OK,
        payload: None,
    })
}
