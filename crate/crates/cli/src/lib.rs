//! `sigma-lab` command line: argument parsing, dispatch and output formats.
//!
//! Exit status: 0 on success, 1 if any verification claim fails, 2 on an undecided
//! claim or any error (including usage errors).

pub mod cache;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sigma_lab::decimal::{parse_decimal, render};
use sigma_lab::verifier::{enclosure_string, SuiteConfig};
use sigma_lab::{
    n_a_of_rational, run_suite, sigma_bracket, sigma_exact, BoundedReal, ChangePointFinder,
    ChangePointRecord, CheckReport, PrecisionPolicy, Suite, Verdict,
};

#[derive(Debug, Parser)]
#[command(name = "sigma-lab", version, about = "Certified sigma_n, change points and n_a")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,

    /// Starting working precision in bits.
    #[arg(long, global = true, value_name = "BITS")]
    pub precision_bits: Option<u32>,

    /// Precision cap for escalation.
    #[arg(long, global = true, value_name = "BITS", env = "SIGMA_LAB_MAX_BITS")]
    pub max_precision_bits: Option<u32>,

    /// Change-point cache file (line-delimited JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,

    /// Ignore existing cache contents; a fresh cache is still written if `--cache` is set.
    #[arg(long, global = true)]
    pub no_cache: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certified sigma_n.
    Sigma { n: u64 },
    /// Candidate bracket for sigma_n.
    Bracket { n: u64 },
    /// Change points n_i up to a bound.
    Changepoints {
        #[arg(long, default_value_t = 200_000)]
        max_n: u64,
    },
    /// n_a for a > 1 (decimal or p/q, read exactly).
    Na { a: String },
    /// Run a verification suite.
    Verify {
        #[arg(long, default_value = "all", value_parser = clap::builder::PossibleValuesParser::new(Suite::NAMES))]
        suite: String,
        /// Change points used by the f3x and ffff checks.
        #[arg(long, default_value_t = 200_000)]
        max_n: u64,
        /// Upper end of the per-n scans (robbins, sn).
        #[arg(long, default_value_t = 10_000)]
        scan_to: u64,
    },
    /// sigma_n for every n in a range, read off the change points.
    Table {
        #[arg(long, default_value_t = 1)]
        from: u64,
        #[arg(long)]
        to: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Serialize)]
struct Enclosure {
    lo: String,
    hi: String,
}

impl From<&BoundedReal> for Enclosure {
    fn from(x: &BoundedReal) -> Self {
        let (lo, hi) = render(x);
        Enclosure { lo, hi }
    }
}

#[derive(Debug, Serialize)]
struct SigmaOut {
    n: u64,
    sigma: u64,
    bits_used: u32,
    method: &'static str,
}

#[derive(Debug, Serialize)]
struct BracketOut {
    n: u64,
    lower: Enclosure,
    upper: Enclosure,
    candidates: Vec<u64>,
}

#[derive(Debug, Serialize)]
struct ChangePointOut {
    index: u64,
    n: u64,
    sigma_at: u64,
    gap: Option<u64>,
    quotient: Option<Enclosure>,
    bits_used: u32,
}

#[derive(Debug, Serialize)]
struct NaOut {
    a: String,
    n_a: u64,
    n_env: u64,
    r: i64,
}

#[derive(Debug, Serialize)]
struct ClaimOut<'a> {
    label: &'a str,
    verdict: &'static str,
}

#[derive(Debug, Serialize)]
struct ReportOut<'a> {
    check_id: &'a str,
    verdict: &'static str,
    params: &'a [(String, String)],
    claims: Vec<ClaimOut<'a>>,
    witnesses: &'a [(String, String)],
}

#[derive(Debug, Serialize)]
struct TableRow {
    n: u64,
    sigma: u64,
}

/// Parses `argv` (including the program name), runs the command and returns the
/// exit status.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(rendered.as_bytes())
            } else {
                out.write_all(rendered.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "sigma-lab: {e:#}");
            2
        }
    }
}

fn policy(cli: &Cli) -> Result<PrecisionPolicy> {
    let d = PrecisionPolicy::default();
    let (initial, max) = match (cli.precision_bits, cli.max_precision_bits) {
        (Some(i), Some(m)) => (i, m),
        (Some(i), None) => (i, d.max_bits().max(i)),
        (None, Some(m)) => (d.initial_bits().min(m), m),
        (None, None) => (d.initial_bits(), d.max_bits()),
    };
    PrecisionPolicy::new(initial, max, d.growth_factor()).context("invalid precision flags")
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    let policy = policy(cli)?;
    match &cli.command {
        Command::Sigma { n } => {
            let c = sigma_exact(*n, &policy)?;
            let row = SigmaOut {
                n: c.n,
                sigma: c.sigma,
                bits_used: c.bits_used,
                method: c.method.as_str(),
            };
            emit_one(cli.format, out, &row, || {
                format!("sigma_{} = {} ({}, {} bits)", c.n, c.sigma, c.method, c.bits_used)
            })?;
        }
        Command::Bracket { n } => {
            let b = sigma_bracket(*n)?;
            let row = BracketOut {
                n: b.n,
                lower: (&b.lower).into(),
                upper: (&b.upper).into(),
                candidates: b.candidates.clone(),
            };
            match cli.format {
                Format::Json => json_line(out, &row)?,
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    w.write_record(["n", "lower_lo", "lower_hi", "upper_lo", "upper_hi", "candidates"])?;
                    let cands: Vec<String> = row.candidates.iter().map(u64::to_string).collect();
                    w.write_record([
                        row.n.to_string(),
                        row.lower.lo.clone(),
                        row.lower.hi.clone(),
                        row.upper.lo.clone(),
                        row.upper.hi.clone(),
                        cands.join(" "),
                    ])?;
                    w.flush()?;
                }
                Format::Text => writeln!(
                    out,
                    "{} < sigma_{} < {}; candidates {:?}",
                    enclosure_string(&b.lower),
                    b.n,
                    enclosure_string(&b.upper),
                    b.candidates
                )?,
            }
        }
        Command::Changepoints { max_n } => {
            let records = change_points(cli, &policy, *max_n)?;
            emit_changepoints(cli.format, out, &records)?;
        }
        Command::Na { a } => {
            let q = parse_decimal(a)?;
            let r = n_a_of_rational(&q, &policy)?;
            let row = NaOut {
                a: a.clone(),
                n_a: r.n_a,
                n_env: r.n_env,
                r: r.r,
            };
            emit_one(cli.format, out, &row, || {
                format!("n_a = {} for a = {} (n = {}, r = {})", r.n_a, a, r.n_env, r.r)
            })?;
        }
        Command::Verify {
            suite,
            max_n,
            scan_to,
        } => {
            let suite: Suite = suite.parse()?;
            let records = if suite.needs_records() {
                change_points(cli, &policy, *max_n)?
            } else {
                Vec::new()
            };
            let config = SuiteConfig {
                robbins: (1, *scan_to),
                sn: (1, *scan_to),
            };
            let reports = run_suite(suite, &records, &config, &policy)?;
            emit_reports(cli.format, out, &reports)?;
            let overall = Verdict::all(reports.iter().map(|r| r.verdict));
            return Ok(match overall {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Undecided => 2,
            });
        }
        Command::Table { from, to } => {
            if *from == 0 || from > to {
                bail!("table needs 1 <= --from <= --to");
            }
            let records = change_points(cli, &policy, *to)?;
            let rows = table_rows(&records, *from, *to);
            match cli.format {
                Format::Json => json_line(out, &rows)?,
                Format::Csv => csv_rows(out, &rows)?,
                Format::Text => {
                    for r in &rows {
                        writeln!(out, "{} {}", r.n, r.sigma)?;
                    }
                }
            }
        }
    }
    Ok(0)
}

/// `sigma_n = 2 + #{i : n_i < n}`, since sigma starts at 2 and steps by one after
/// each change point.
fn table_rows(records: &[ChangePointRecord], from: u64, to: u64) -> Vec<TableRow> {
    let mut below = records.iter().filter(|r| r.n_i < from).count() as u64;
    let mut next = below as usize;
    (from..=to)
        .map(|n| {
            while next < records.len() && records[next].n_i < n {
                next += 1;
                below += 1;
            }
            TableRow { n, sigma: 2 + below }
        })
        .collect()
}

/// Enumerates change points up to `max_n`, reading and refreshing the cache.
fn change_points(cli: &Cli, policy: &PrecisionPolicy, max_n: u64) -> Result<Vec<ChangePointRecord>> {
    let finder = ChangePointFinder::new(*policy);
    let cached = match (&cli.cache, cli.no_cache) {
        (Some(path), false) => cache::read(path)?,
        _ => Vec::new(),
    };
    let preload: Vec<ChangePointRecord> = cached.iter().map(cache::CacheLine::to_record).collect();
    finder.preload(&preload)?;
    let records = finder.enumerate(max_n)?;
    if let Some(path) = &cli.cache {
        let merged = cache::merge(&cached, &records);
        if merged != cached {
            cache::write(path, &merged)?;
        }
    }
    Ok(records)
}

fn json_line<T: Serialize + ?Sized>(out: &mut dyn Write, value: &T) -> Result<()> {
    serde_json::to_writer(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn csv_rows<T: Serialize>(out: &mut dyn Write, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(&mut *out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

fn emit_one<T: Serialize>(format: Format, out: &mut dyn Write, row: &T, text: impl FnOnce() -> String) -> Result<()> {
    match format {
        Format::Json => json_line(out, row),
        Format::Csv => csv_rows(out, std::slice::from_ref(row)),
        Format::Text => {
            writeln!(out, "{}", text())?;
            Ok(())
        }
    }
}

fn emit_changepoints(format: Format, out: &mut dyn Write, records: &[ChangePointRecord]) -> Result<()> {
    let rows: Vec<ChangePointOut> = records
        .iter()
        .map(|r| ChangePointOut {
            index: r.index,
            n: r.n_i,
            sigma_at: r.sigma_at,
            gap: r.gap,
            quotient: r.quotient.as_ref().map(Enclosure::from),
            bits_used: r.bits_used,
        })
        .collect();
    match format {
        Format::Json => json_line(out, &rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["index", "n", "sigma_at", "gap", "quotient_lo", "quotient_hi", "bits_used"])?;
            for r in &rows {
                let (qlo, qhi) = r
                    .quotient
                    .as_ref()
                    .map_or((String::new(), String::new()), |q| (q.lo.clone(), q.hi.clone()));
                w.write_record([
                    r.index.to_string(),
                    r.n.to_string(),
                    r.sigma_at.to_string(),
                    r.gap.map_or(String::new(), |g| g.to_string()),
                    qlo,
                    qhi,
                    r.bits_used.to_string(),
                ])?;
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for r in &rows {
                write!(out, "n_{} = {} (sigma {})", r.index, r.n, r.sigma_at)?;
                if let (Some(g), Some(q)) = (r.gap, &r.quotient) {
                    write!(out, ", gap {g}, quotient [{}, {}]", q.lo, q.hi)?;
                }
                writeln!(out)?;
            }
            Ok(())
        }
    }
}

fn emit_reports(format: Format, out: &mut dyn Write, reports: &[CheckReport]) -> Result<()> {
    match format {
        Format::Json => {
            let rows: Vec<ReportOut> = reports
                .iter()
                .map(|r| ReportOut {
                    check_id: &r.check_id,
                    verdict: r.verdict.as_str(),
                    params: &r.params,
                    claims: r
                        .claims
                        .iter()
                        .map(|c| ClaimOut {
                            label: &c.label,
                            verdict: c.verdict.as_str(),
                        })
                        .collect(),
                    witnesses: &r.witnesses,
                })
                .collect();
            json_line(out, &rows)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["check_id", "claim", "verdict"])?;
            for r in reports {
                for c in &r.claims {
                    w.write_record([r.check_id.as_str(), c.label.as_str(), c.verdict.as_str()])?;
                }
            }
            w.flush()?;
            Ok(())
        }
        Format::Text => {
            for r in reports {
                writeln!(out, "{} {}", r.check_id, r.verdict)?;
                for (k, v) in &r.params {
                    writeln!(out, "  param {k} = {v}")?;
                }
                for c in &r.claims {
                    writeln!(out, "  {:<9} {}", c.verdict.as_str(), c.label)?;
                }
                for (k, v) in &r.witnesses {
                    writeln!(out, "    {k}: {v}")?;
                }
            }
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("sigma-lab").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn table_rows_from_change_points() {
        let recs: Vec<_> = [3u64, 54]
            .iter()
            .enumerate()
            .map(|(i, &n)| ChangePointRecord::bare(i as u64 + 1, n, 128))
            .collect();
        let rows = table_rows(&recs, 1, 56);
        assert_eq!(rows[0].sigma, 2);
        assert_eq!(rows[2].sigma, 2);
        assert_eq!(rows[3].sigma, 3);
        assert_eq!(rows[53].sigma, 3);
        assert_eq!(rows[54].sigma, 4);
        let tail = table_rows(&recs, 55, 55);
        assert_eq!(tail[0].sigma, 4);
    }

    #[test]
    fn precision_flags_are_validated() {
        let (code, _, err) = run_str(&["sigma", "5", "--precision-bits", "512", "--max-precision-bits", "256"]);
        assert_eq!(code, 2);
        assert!(err.contains("precision"), "{err}");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_str(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("changepoints"));
    }
}
