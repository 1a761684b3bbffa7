//! Command-line front end for the `fluxspec` binary.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::checks::{run_suite, tolerance_scale, CheckOutcome, Suite};
use crate::error::{Error, Result};
use crate::format::{fmt_float, spectrum_csv, to_json, towers_csv, towers_svg};
use crate::modes::{build_families, default_m_range, tower_lines, FluxConfig, Sector};
use crate::operators::{flux_integral, hermiticity_defect};
use crate::oracle::{rayleigh_ritz_eigen, s3_laplacian_check, sturm_liouville_eigen, witten_sqm_check, Boundary, DiscretizationSpec};
use crate::quadrature::DEFAULT_POINTS;
use crate::susy::{assemble_sector, pairing_report, ranges_for_cutoff, susy_breaking_witness, witten_index, HilbertPolicy};

#[derive(Debug, Parser)]
#[command(name = "fluxspec", version, about = "Spectra of a charged particle on a punctured sphere at arbitrary flux")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Csv,
    Json,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
enum PolicyArg {
    RegularOnly,
    SquareIntegrable,
    BundleSections,
}

impl From<PolicyArg> for HilbertPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::RegularOnly => HilbertPolicy::RegularOnly,
            PolicyArg::SquareIntegrable => HilbertPolicy::SquareIntegrable,
            PolicyArg::BundleSections => HilbertPolicy::BundleSections,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SectorArg {
    #[value(name = "0")]
    #[serde(rename = "0")]
    Zero,
    #[value(name = "1")]
    #[serde(rename = "1")]
    One,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Problem {
    Sturm,
    Ritz,
    S3,
    Witten,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum BoundaryArg {
    Regular,
    Normalizable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SuiteArg {
    Jacobi,
    Quadrature,
    Modes,
    Operators,
    Susy,
    #[value(alias = "footnotes")]
    Counterexamples,
    All,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args, Serialize)]
struct Common {
    /// Output format (each command has its own default)
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write output to this file instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,
    /// Gauss-Jacobi nodes for inner products and operator checks
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    quad_points: usize,
    /// Print the resolved configuration as JSON and exit
    #[arg(long)]
    #[serde(skip)]
    dry_run: bool,
}

/// Inclusive angular-momentum window written `a..b` or `a`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
struct MRange(i64, i64);

fn parse_m_range(s: &str) -> std::result::Result<MRange, String> {
    let parse = |t: &str| t.trim().parse::<i64>().map_err(|e| format!("bad integer {t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
        None => {
            let v = parse(s)?;
            (v, v)
        }
    };
    if a > b {
        return Err(format!("empty range {a}..{b}"));
    }
    Ok(MRange(a, b))
}

fn parse_finite(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("bad number {s:?}: {e}"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("{s} is not finite"))
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List admitted eigenmodes in both sectors
    Spectrum {
        #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_enum, default_value = "both")]
        sector: SectorArg,
        /// Angular momenta `a..b` (default: floor(q)-3 .. ceil(q)+3)
        #[arg(long, value_parser = parse_m_range, allow_hyphen_values = true)]
        m: Option<MRange>,
        /// Jacobi degrees above the reduction per family
        #[arg(long, default_value_t = 4)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "square-integrable")]
        policy: PolicyArg,
        #[command(flatten)]
        common: Common,
    },
    /// Puncture exponent gamma of every family line over a q sweep
    Towers {
        #[arg(long, default_value_t = 0.0, value_parser = parse_finite, allow_hyphen_values = true)]
        q_min: f64,
        #[arg(long, default_value_t = 3.0, value_parser = parse_finite, allow_hyphen_values = true)]
        q_max: f64,
        #[arg(long, default_value_t = 61)]
        steps: usize,
        #[arg(long, value_enum, default_value = "0")]
        sector: SectorArg,
        #[arg(long, value_parser = parse_m_range, allow_hyphen_values = true, default_value = "-2..4")]
        m: MRange,
        #[command(flatten)]
        common: Common,
    },
    /// Overlap and hermiticity defect of the two families at one (m, n)
    Hermiticity {
        #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, default_value_t = 0)]
        n: usize,
        #[arg(long, value_enum, default_value = "0")]
        sector: SectorArg,
        #[command(flatten)]
        common: Common,
    },
    /// Supercharge pairing report (and breaking witness at fractional q)
    Susy {
        #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, value_enum, default_value = "regular-only")]
        policy: PolicyArg,
        /// Only levels below this eigenvalue are paired
        #[arg(long, default_value_t = 30.0, value_parser = parse_finite)]
        cutoff: f64,
        /// Angular momenta `a..b` (default: wide enough for the cutoff)
        #[arg(long, value_parser = parse_m_range, allow_hyphen_values = true)]
        m: Option<MRange>,
        #[arg(long)]
        n_max: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Witten index at integer flux
    Index {
        #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Total flux of the monopole field divided by 2 pi
    Flux {
        #[arg(long, value_parser = parse_finite, allow_hyphen_values = true)]
        q: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Independent numerical checks
    Oracle {
        #[arg(long, value_enum)]
        problem: Problem,
        #[arg(long, default_value_t = 0.5, value_parser = parse_finite, allow_hyphen_values = true)]
        q: f64,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        m: i64,
        #[arg(long, value_enum, default_value = "0")]
        sector: SectorArg,
        /// Number of eigenvalues (sturm) or basis size (ritz)
        #[arg(long, default_value_t = 4)]
        count: usize,
        #[arg(long, value_enum, default_value = "regular")]
        boundary: BoundaryArg,
        #[arg(long, value_enum, default_value = "square-integrable")]
        policy: PolicyArg,
        /// Finite-difference grid size (sturm, witten) or quadrature nodes (s3)
        #[arg(long, default_value_t = 2048)]
        grid_size: usize,
        #[arg(long, default_value_t = 1.0, value_parser = parse_finite)]
        omega: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Run self-check suites; exit code 2 when any check fails
    Check {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[command(flatten)]
        common: Common,
    },
}

enum Outcome {
    Done,
    ChecksFailed,
}

fn sectors(s: SectorArg) -> Vec<Sector> {
    match s {
        SectorArg::Zero => vec![Sector::F0],
        SectorArg::One => vec![Sector::F1],
        SectorArg::Both => vec![Sector::F0, Sector::F1],
    }
}

fn single_sector(s: SectorArg) -> Result<Sector> {
    match s {
        SectorArg::Zero => Ok(Sector::F0),
        SectorArg::One => Ok(Sector::F1),
        SectorArg::Both => Err(Error::InvalidArgument("this command needs --sector 0 or 1".into())),
    }
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

fn emit(common: &Common, text: &str) -> Result<()> {
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| invalid(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            let newline: &[u8] = if text.ends_with('\n') { b"" } else { b"\n" };
            match out.write_all(text.as_bytes()).and_then(|_| out.write_all(newline)).and_then(|_| out.flush()) {
                // a closed reader (e.g. `| head`) is not an error
                Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(Error::Internal(e.to_string())),
                _ => Ok(()),
            }
        }
    }
}

fn format_or(common: &Common, default: Format, allowed: &[Format]) -> Result<Format> {
    let f = common.format.unwrap_or(default);
    if allowed.contains(&f) {
        Ok(f)
    } else {
        Err(invalid(format!("format {f:?} is not available for this command")))
    }
}

fn check_points(common: &Common) -> Result<()> {
    if common.quad_points == 0 || common.quad_points > 4096 {
        return Err(invalid(format!("--quad-points must be in 1..=4096, got {}", common.quad_points)));
    }
    Ok(())
}

/// Validated settings echoed by `--dry-run`.
#[derive(Debug, Serialize)]
struct RunConfig<'a> {
    command: &'static str,
    #[serde(flatten)]
    params: serde_json::Value,
    quad_points: usize,
    tolerance_scale: f64,
    format: Option<Format>,
    output: &'a Option<PathBuf>,
}

fn dry_run(command: &'static str, params: serde_json::Value, common: &Common) -> Result<Outcome> {
    let cfg = RunConfig {
        command,
        params,
        quad_points: common.quad_points,
        tolerance_scale: tolerance_scale(),
        format: common.format,
        output: &common.output,
    };
    println!("{}", to_json(&cfg)?);
    Ok(Outcome::Done)
}

fn dispatch(cmd: Command) -> Result<Outcome> {
    match cmd {
        Command::Spectrum { q, sector, m, n_max, policy, common } => {
            check_points(&common)?;
            let MRange(lo, hi) = m.unwrap_or_else(|| {
                let (a, b) = default_m_range(q);
                MRange(a, b)
            });
            if n_max > 200 {
                return Err(invalid("--n-max must be at most 200"));
            }
            let fmt = format_or(&common, Format::Csv, &[Format::Csv, Format::Json])?;
            let policy: HilbertPolicy = policy.into();
            policy.check_flux(&FluxConfig::new(q, Sector::F0))?;
            if common.dry_run {
                return dry_run("spectrum", json!({"q": q, "sector": sector, "m": [lo, hi], "n_max": n_max, "policy": policy}), &common);
            }
            let mut entries = Vec::new();
            for s in sectors(sector) {
                entries.extend(assemble_sector(FluxConfig::new(q, s), (lo, hi), n_max, policy)?);
            }
            let text = match fmt {
                Format::Csv => spectrum_csv(&entries),
                _ => to_json(&json!({"q": q, "policy": policy, "entries": entries}))?,
            };
            emit(&common, &text)?;
        }
        Command::Towers { q_min, q_max, steps, sector, m, common } => {
            if steps < 2 || steps > 100_000 {
                return Err(invalid("--steps must be in 2..=100000"));
            }
            if q_max <= q_min {
                return Err(invalid("--q-max must exceed --q-min"));
            }
            let fmt = format_or(&common, Format::Csv, &[Format::Csv, Format::Json, Format::Svg])?;
            if common.dry_run {
                return dry_run("towers", json!({"q_min": q_min, "q_max": q_max, "steps": steps, "sector": sector, "m": [m.0, m.1]}), &common);
            }
            let mut rows = Vec::new();
            for s in sectors(sector) {
                rows.extend(tower_lines(q_min, q_max, steps, s, (m.0, m.1))?);
            }
            let text = match fmt {
                Format::Csv => towers_csv(&rows),
                Format::Json => to_json(&rows)?,
                Format::Svg => {
                    let label = match sector {
                        SectorArg::Zero => "F = 0",
                        SectorArg::One => "F = 1",
                        SectorArg::Both => "F = 0 and F = 1",
                    };
                    towers_svg(&rows, &format!("puncture exponent gamma versus flux q, {label}"))
                }
            };
            emit(&common, &text)?;
        }
        Command::Hermiticity { q, m, n, sector, common } => {
            check_points(&common)?;
            format_or(&common, Format::Json, &[Format::Json])?;
            let sector = single_sector(sector)?;
            if common.dry_run {
                return dry_run("hermiticity", json!({"q": q, "m": m, "n": n, "sector": sector.index()}), &common);
            }
            let pair = build_families(FluxConfig::new(q, sector), m, n);
            let (plain, tilde) = (pair.plain?, pair.tilde?);
            let overlap = crate::modes::inner_product(&tilde, &plain, common.quad_points)?;
            let defect = hermiticity_defect(&tilde, &plain, common.quad_points)?;
            let report = json!({
                "q": q,
                "sector": sector.index(),
                "m": m,
                "n": n,
                "lambda_tilde": tilde.eigenvalue,
                "lambda_plain": plain.eigenvalue,
                "gamma_tilde": tilde.gamma,
                "gamma_plain": plain.gamma,
                "overlap": overlap,
                "defect": defect,
                "defect_magnitude": defect.abs(),
                "substitution_defect": (plain.eigenvalue - tilde.eigenvalue) * overlap,
            });
            emit(&common, &to_json(&report)?)?;
        }
        Command::Susy { q, policy, cutoff, m, n_max, common } => {
            format_or(&common, Format::Json, &[Format::Json])?;
            if cutoff <= 0.0 || cutoff > 1e4 {
                return Err(invalid("--cutoff must be in (0, 10000]"));
            }
            let policy: HilbertPolicy = policy.into();
            let config = FluxConfig::new(q, Sector::F0);
            policy.check_flux(&config)?;
            let ((lo, hi), auto_n) = ranges_for_cutoff(q, cutoff);
            let (lo, hi) = m.map(|r| (r.0, r.1)).unwrap_or((lo, hi));
            let n_max = n_max.unwrap_or(auto_n);
            if common.dry_run {
                return dry_run("susy", json!({"q": q, "policy": policy, "cutoff": cutoff, "m": [lo, hi], "n_max": n_max}), &common);
            }
            let report = pairing_report(q, policy, cutoff, (lo, hi), n_max)?;
            let mut value = serde_json::to_value(&report).map_err(|e| Error::Internal(e.to_string()))?;
            if !config.is_integer_flux() {
                let w = susy_breaking_witness(q, policy)?;
                value["witness"] = serde_json::to_value(&w).map_err(|e| Error::Internal(e.to_string()))?;
            }
            emit(&common, &to_json(&value)?)?;
        }
        Command::Index { q, common } => {
            format_or(&common, Format::Json, &[Format::Json])?;
            if !FluxConfig::new(q, Sector::F0).is_integer_flux() {
                return Err(invalid(format!(
                    "the index needs integer flux, got q = {q}; use `susy --q {q}` for the breaking witness instead"
                )));
            }
            if common.dry_run {
                return dry_run("index", json!({"q": q}), &common);
            }
            emit(&common, &to_json(&witten_index(q)?)?)?;
        }
        Command::Flux { q, common } => {
            check_points(&common)?;
            format_or(&common, Format::Json, &[Format::Json])?;
            if common.dry_run {
                return dry_run("flux", json!({"q": q}), &common);
            }
            emit(&common, &to_json(&json!({"q": q, "flux": flux_integral(q, common.quad_points)?}))?)?;
        }
        Command::Oracle { problem, q, m, sector, count, boundary, policy, grid_size, omega, common } => {
            check_points(&common)?;
            format_or(&common, Format::Json, &[Format::Json])?;
            if grid_size < 32 || grid_size > 1 << 20 {
                return Err(invalid("--grid-size must be in 32..=1048576"));
            }
            if count == 0 || count > 64 {
                return Err(invalid("--count must be in 1..=64"));
            }
            if omega <= 0.0 {
                return Err(invalid("--omega must be positive"));
            }
            let sector = single_sector(sector)?;
            if common.dry_run {
                return dry_run(
                    "oracle",
                    json!({"problem": problem, "q": q, "m": m, "sector": sector.index(), "count": count,
                           "boundary": boundary, "policy": HilbertPolicy::from(policy), "grid_size": grid_size, "omega": omega}),
                    &common,
                );
            }
            let config = FluxConfig::new(q, sector);
            let text = match problem {
                Problem::Sturm => {
                    let b = match boundary {
                        BoundaryArg::Regular => Boundary::RegularBothEnds,
                        BoundaryArg::Normalizable => Boundary::NormalizableOnly,
                    };
                    to_json(&sturm_liouville_eigen(config, m, count, DiscretizationSpec::finite_difference(grid_size, b))?)?
                }
                Problem::Ritz => {
                    let policy: HilbertPolicy = policy.into();
                    let entries = assemble_sector(config, (m, m), count, policy)?;
                    let basis: Vec<_> = entries.into_iter().take(count).map(|e| e.descriptor).collect();
                    let r = rayleigh_ritz_eigen(config, m, &basis, common.quad_points)?;
                    to_json(&json!({"basis": basis, "result": r}))?
                }
                Problem::S3 => to_json(&s3_laplacian_check(grid_size.max(256))?)?,
                Problem::Witten => to_json(&witten_sqm_check(omega, grid_size.max(64))?)?,
            };
            emit(&common, &text)?;
        }
        Command::Check { suite, common } => {
            let fmt = format_or(&common, Format::Csv, &[Format::Csv, Format::Json])?;
            let suites: Vec<Suite> = match suite {
                SuiteArg::All => Suite::ALL.to_vec(),
                SuiteArg::Jacobi => vec![Suite::Jacobi],
                SuiteArg::Quadrature => vec![Suite::Quadrature],
                SuiteArg::Modes => vec![Suite::Modes],
                SuiteArg::Operators => vec![Suite::Operators],
                SuiteArg::Susy => vec![Suite::Susy],
                SuiteArg::Counterexamples => vec![Suite::Counterexamples],
            };
            if common.dry_run {
                let names: Vec<&str> = suites.iter().map(|s| s.name()).collect();
                return dry_run("check", json!({"suites": names}), &common);
            }
            let outcomes: Vec<CheckOutcome> = suites.into_iter().flat_map(run_suite).collect();
            let text = match fmt {
                Format::Json => to_json(&outcomes)?,
                _ => {
                    let mut s = String::from("status,suite,check,value,tolerance\n");
                    for o in &outcomes {
                        s.push_str(&format!(
                            "{},{},\"{}\",{},{}\n",
                            if o.passed { "pass" } else { "FAIL" },
                            o.suite.name(),
                            o.name,
                            fmt_float(o.value),
                            fmt_float(o.tolerance)
                        ));
                    }
                    s
                }
            };
            emit(&common, &text)?;
            if outcomes.iter().any(|o| !o.passed) {
                return Ok(Outcome::ChecksFailed);
            }
        }
    }
    Ok(Outcome::Done)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code: 0 on success, 1 on invalid input or a
/// failed computation, 2 when a check suite reports a failure.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
        }
    };
    match dispatch(cli.command) {
        Ok(Outcome::Done) => 0,
        Ok(Outcome::ChecksFailed) => 2,
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}
