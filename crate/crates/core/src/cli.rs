//! Command-line front end.
//!
//! Every JSON artifact is wrapped in the same envelope:
//!
//! ```json
//! { "kind": "...", "tool": {"name": "...", "version": "..."},
//!   "config": {...}, "content_hash": "<sha256 of config + result>", "result": {...} }
//! ```
//!
//! and validates against `schemas/<kind>.schema.json`. CSV files carry the
//! same information in leading `#` comment lines. Wall-clock data goes only
//! to the sidecar log `attractor-lab.log` in the output directory.
//!
//! Exit codes: 0 on success, 1 for numerical failures, 2 for usage errors
//! and invalid input. Failures also write `diagnostic.json`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use rug::Rational;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::attractor::{
    certification_order, density_scan, solve_attractor, AttractorCertificate, AttractorTarget, SolverOptions,
};
use crate::curve::{genus, hodge_profile, PointConfiguration};
use crate::cyclotomic::{totient, CycloElement};
use crate::error::{Error, Result};
use crate::monodromy::{
    check_braid_relation, check_invariance, continue_schwarz, hermitian_form, recognize_if_possible, BraidWord,
};
use crate::mp::{Complex, Precision};
use crate::periods::{period_matrix, schwarz_jacobian, schwarz_map, ComplexJson};
use crate::shimura::{counterexample_dimensions, gap_report, GapReport};

/// Environment variable holding the default output directory.
pub const OUTPUT_DIR_ENV: &str = "ATTRACTOR_LAB_OUT";
pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");
/// Attractor commands refuse to run below this many digits.
pub const MIN_ATTRACTOR_DIGITS: u32 = 30;
const LOG_FILE: &str = "attractor-lab.log";

#[derive(Parser, Debug)]
#[command(name = "attractor-lab", version, about = "Periods, attractor points and Shimura numerology of cyclic covers")]
pub struct Cli {
    #[command(flatten)]
    pub run: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

/// Parameters shared by every subcommand.
#[derive(Args, Clone, Debug, Serialize)]
pub struct RunConfig {
    /// Cover degree.
    #[arg(long, global = true)]
    pub n: Option<u32>,
    /// Working precision in decimal digits.
    #[arg(long, global = true, default_value_t = 60)]
    pub precision: u32,
    /// Height bound for cyclotomic recognition.
    #[arg(long, global = true, default_value_t = 100)]
    pub height_bound: u64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, env = OUTPUT_DIR_ENV, default_value = "attractor-out")]
    #[serde(skip)]
    pub output_dir: PathBuf,
    /// Worker threads, or `auto`.
    #[arg(long, global = true, default_value = "auto")]
    pub threads: Threads,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threads {
    Auto,
    Fixed(usize),
}

impl FromStr for Threads {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(Threads::Auto);
        }
        match s.parse::<usize>() {
            Ok(k) if k > 0 => Ok(Threads::Fixed(k)),
            _ => Err(format!("expected a positive integer or `auto`, got {s:?}")),
        }
    }
}

impl Serialize for Threads {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Threads::Auto => s.serialize_str("auto"),
            Threads::Fixed(k) => s.serialize_u64(*k as u64),
        }
    }
}

/// A configuration given inline or as a JSON file.
#[derive(Args, Clone, Debug, Serialize)]
pub struct ConfigArgs {
    /// Free coordinate `re,im`; repeat for each of the 2n-3 points.
    #[arg(long = "free", allow_hyphen_values = true)]
    pub free: Vec<String>,
    /// JSON file holding a configuration `{"n", "free"}`.
    #[arg(long)]
    pub config: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Hodge numbers of every eigenspace.
    HodgeTable,
    /// Eigenspace period matrix of a configuration.
    Periods {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long, default_value_t = 1)]
        eigenspace: u32,
        /// Add the conjugates of the complementary eigenspace's forms.
        #[arg(long)]
        complement: bool,
    },
    /// Schwarz vector, optionally with its Jacobian.
    Schwarz {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        jacobian: bool,
    },
    /// Newton solve for a configuration hitting a cyclotomic target.
    FindAttractors {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Target entry as comma-separated rational coordinates on 1, ζ, ζ^2, ...
        #[arg(long = "target", required = true, allow_hyphen_values = true)]
        target: Vec<String>,
        #[arg(long, default_value_t = 40)]
        max_iter: usize,
    },
    /// Solve for many random targets near the equally spaced configuration.
    DensityScan {
        #[arg(long, default_value_t = 20)]
        targets: usize,
    },
    /// Monodromy of a braid word (rightmost letter first) and the invariant form.
    Monodromy {
        #[command(flatten)]
        cfg: ConfigArgs,
        /// Letters such as `1 -2 3`; empty for the identity.
        #[arg(long, default_value = "", allow_hyphen_values = true)]
        word: String,
        /// Also compute every generator and check the braid relations.
        #[arg(long)]
        generators: bool,
    },
    /// Dimension-gap report.
    ShimuraReport {
        /// Report every degree from 2 up to this one instead of just `--n`.
        #[arg(long)]
        n_max: Option<u32>,
    },
    /// Certify a configuration, or re-check a certificate at raised precision.
    Certify {
        #[command(flatten)]
        cfg: ConfigArgs,
        #[arg(long)]
        certificate: Option<PathBuf>,
        /// Extra digits for the re-check.
        #[arg(long, default_value_t = 20)]
        escalate: u32,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::HodgeTable => "hodge-table",
            Command::Periods { .. } => "periods",
            Command::Schwarz { .. } => "schwarz",
            Command::FindAttractors { .. } => "find-attractors",
            Command::DensityScan { .. } => "density-scan",
            Command::Monodromy { .. } => "monodromy",
            Command::ShimuraReport { .. } => "shimura-report",
            Command::Certify { .. } => "certify",
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let started = Instant::now();
    let dir = cli.run.output_dir.clone();
    let name = cli.command.name();
    let code = match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            let diag = diagnostic(&e);
            eprintln!("error: {e}");
            if let Ok(text) = serde_json::to_string_pretty(&diag) {
                eprintln!("{text}");
            }
            let config = config_json(&cli);
            if let Err(write_err) = write_artifact(&dir, "diagnostic.json", "diagnostic", &config, diag) {
                eprintln!("could not write diagnostic: {write_err}");
            }
            code
        }
    };
    log_run(&dir, name, code, started);
    code
}

/// 2 for bad input, 1 for numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_)
        | Error::Parse(_)
        | Error::InvalidEmbedding { .. }
        | Error::InvalidAutomorphism { .. }
        | Error::InsufficientPrecision { .. }
        | Error::Io { .. }
        | Error::Json(_) => 2,
        _ => 1,
    }
}

fn diagnostic(e: &Error) -> Value {
    let kind = match e {
        Error::Domain(_) => "domain",
        Error::InvalidEmbedding { .. } => "invalid-embedding",
        Error::InvalidAutomorphism { .. } => "invalid-automorphism",
        Error::InsufficientPrecision { .. } => "insufficient-precision",
        Error::DegenerateConfiguration(_) => "degenerate-configuration",
        Error::PathTooClose { .. } => "path-too-close",
        Error::PrecisionFailure(_) => "precision-failure",
        Error::SingularJacobian { .. } => "singular-jacobian",
        Error::DomainExit { .. } => "domain-exit",
        Error::NoConvergence { .. } => "no-convergence",
        Error::DegenerateForm(_) => "degenerate-form",
        Error::NotCertified(_) => "not-certified",
        Error::Parse(_) => "parse",
        Error::Io { .. } => "io",
        Error::Json(_) => "json",
    };
    let mut d = json!({ "error": kind, "message": e.to_string(), "exit_code": exit_code(e) });
    match e {
        Error::DomainExit { last, iterations, trace } => {
            d["last_configuration"] = serde_json::to_value(last.as_ref()).unwrap_or(Value::Null);
            d["iterations"] = json!(iterations);
            d["residual_trace"] = json!(trace);
        }
        Error::NoConvergence { iterations, trace } => {
            d["iterations"] = json!(iterations);
            d["residual_trace"] = json!(trace);
        }
        _ => {}
    }
    d
}

fn log_run(dir: &Path, command: &str, code: i32, started: Instant) {
    let stamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let line = format!(
        "unix_time={stamp} command={command} exit={code} elapsed_ms={}\n",
        started.elapsed().as_millis()
    );
    let _ = fs::create_dir_all(dir);
    if let Ok(mut f) = fs::OpenOptions::new().create(true).append(true).open(dir.join(LOG_FILE)) {
        let _ = f.write_all(line.as_bytes());
    }
}

fn config_json(cli: &Cli) -> Value {
    let mut v = serde_json::to_value(&cli.run).expect("run config serializes");
    v["command"] = json!(cli.command.name());
    let extra = match &cli.command {
        Command::HodgeTable => json!({}),
        Command::Periods { cfg, eigenspace, complement } => {
            json!({ "configuration": cfg, "eigenspace": eigenspace, "complement": complement })
        }
        Command::Schwarz { cfg, jacobian } => json!({ "configuration": cfg, "jacobian": jacobian }),
        Command::FindAttractors { cfg, target, max_iter } => {
            json!({ "configuration": cfg, "target": target, "max_iter": max_iter })
        }
        Command::DensityScan { targets } => json!({ "targets": targets }),
        Command::Monodromy { cfg, word, generators } => {
            json!({ "configuration": cfg, "word": word, "generators": generators })
        }
        Command::ShimuraReport { n_max } => json!({ "n_max": n_max }),
        Command::Certify { cfg, certificate, escalate } => json!({
            "configuration": cfg,
            "certificate": certificate.as_ref().map(|p| p.display().to_string()),
            "escalate": escalate,
        }),
    };
    v["arguments"] = extra;
    v
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Wraps `result` in the artifact envelope.
pub fn envelope(kind: &str, config: &Value, result: Value) -> Value {
    let body = json!({ "config": config, "result": result });
    let hash = sha256_hex(serde_json::to_string(&body).expect("json serializes").as_bytes());
    json!({
        "kind": kind,
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "config": body["config"],
        "content_hash": hash,
        "result": body["result"],
    })
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io { path: path.to_path_buf(), source }
}

fn write_file(dir: &Path, name: &str, contents: &[u8]) -> Result<PathBuf> {
    let path = dir.join(name);
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent).map_err(io_err(parent))?;
    }
    fs::write(&path, contents).map_err(io_err(&path))?;
    Ok(path)
}

fn write_artifact(dir: &Path, name: &str, kind: &str, config: &Value, result: Value) -> Result<PathBuf> {
    let doc = envelope(kind, config, result);
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    write_file(dir, name, text.as_bytes())
}

/// CSV with provenance comment lines; the hash covers the data rows.
fn write_csv(dir: &Path, name: &str, config: &Value, body: &str) -> Result<PathBuf> {
    let text = format!(
        "# tool: {TOOL_NAME} {TOOL_VERSION}\n# config: {}\n# content_sha256: {}\n{body}",
        serde_json::to_string(config)?,
        sha256_hex(body.as_bytes())
    );
    write_file(dir, name, text.as_bytes())
}

fn require_n(run: &RunConfig) -> Result<u32> {
    run.n.ok_or_else(|| Error::domain("this command needs --n"))
}

fn precision(run: &RunConfig, attractor: bool) -> Result<Precision> {
    if attractor && run.precision < MIN_ATTRACTOR_DIGITS {
        return Err(Error::domain(format!(
            "attractor commands need --precision >= {MIN_ATTRACTOR_DIGITS}, got {}",
            run.precision
        )));
    }
    Precision::digits(run.precision)
}

fn parse_pair(s: &str) -> Result<(String, String)> {
    let mut parts = s.split(',').map(str::trim);
    match (parts.next(), parts.next(), parts.next()) {
        (Some(re), Some(im), None) if !re.is_empty() && !im.is_empty() => Ok((re.to_string(), im.to_string())),
        (Some(re), None, None) if !re.is_empty() => Ok((re.to_string(), "0".to_string())),
        _ => Err(Error::Parse(format!("expected `re,im`, got {s:?}"))),
    }
}

/// The configuration from `--config`, `--free`, or the equally spaced default.
fn load_configuration(args: &ConfigArgs, run: &RunConfig, precision: Precision) -> Result<PointConfiguration> {
    let bits = precision.bits();
    let cfg = if let Some(path) = &args.config {
        if !args.free.is_empty() {
            return Err(Error::domain("give either --config or --free, not both"));
        }
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let cfg: PointConfiguration = serde_json::from_str(&text)?;
        cfg.with_prec(cfg.prec().max(bits))
    } else if !args.free.is_empty() {
        let free = args
            .free
            .iter()
            .map(|s| {
                let (re, im) = parse_pair(s)?;
                Complex::parse(bits, &re, &im)
            })
            .collect::<Result<Vec<_>>>()?;
        let n = (free.len() as u32 + 3) / 2;
        if free.len() % 2 == 0 {
            return Err(Error::domain(format!("{} free coordinates do not fit any degree (need 2n - 3)", free.len())));
        }
        PointConfiguration::new(n, free)?
    } else {
        PointConfiguration::equally_spaced(require_n(run)?, bits)?
    };
    if let Some(n) = run.n {
        if n != cfg.n() {
            return Err(Error::domain(format!("--n {n} does not match a configuration of degree {}", cfg.n())));
        }
    }
    Ok(cfg)
}

fn parse_target(entries: &[String], order: u32) -> Result<AttractorTarget> {
    let phi = totient(order) as usize;
    let v = entries
        .iter()
        .map(|e| {
            let mut coeffs = e
                .split(',')
                .map(|c| {
                    let c = c.trim();
                    let text = if c.contains('/') { c.to_string() } else { format!("{c}/1") };
                    Rational::from_str(&text).map_err(|err| Error::Parse(format!("bad rational {c:?}: {err}")))
                })
                .collect::<Result<Vec<_>>>()?;
            if coeffs.len() > phi {
                return Err(Error::Parse(format!("Q(zeta_{order}) elements have {phi} coordinates, got {}", coeffs.len())));
            }
            coeffs.resize(phi, Rational::new());
            CycloElement::from_coeffs(order, coeffs)
        })
        .collect::<Result<Vec<_>>>()?;
    AttractorTarget::new(v)
}

fn setup_threads(threads: Threads) {
    if let Threads::Fixed(k) = threads {
        // A second initialization (e.g. repeated in-process runs) keeps the first pool.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
}

fn execute(cli: &Cli) -> Result<()> {
    let run = &cli.run;
    setup_threads(run.threads);
    let config = config_json(cli);
    let dir = &run.output_dir;
    match &cli.command {
        Command::HodgeTable => {
            let n = require_n(run)?;
            let profile = hodge_profile(n)?;
            println!("i\th10\th01");
            let rows: Vec<Value> = profile
                .rows
                .iter()
                .enumerate()
                .map(|(k, &(h10, h01))| {
                    println!("{}\t{h10}\t{h01}", k + 1);
                    json!({ "i": k + 1, "h10": h10, "h01": h01 })
                })
                .collect();
            let g = genus(n)?;
            println!("genus {g}");
            write_artifact(dir, "hodge-table.json", "hodge-table", &config, json!({ "n": n, "rows": rows, "genus": g }))?;
        }
        Command::Periods { cfg, eigenspace, complement } => {
            let p = precision(run, false)?;
            let cfg = load_configuration(cfg, run, p)?;
            let pm = period_matrix(&cfg, *eigenspace, *complement, p)?;
            write_artifact(dir, "period-matrix.json", "period-matrix", &config, pm.to_json())?;
            write_csv(dir, "period-matrix.csv", &config, &pm.to_csv())?;
            println!(
                "period matrix {}x{} for eigenspace {eigenspace}, max error {:.3e}",
                pm.entries.rows(),
                pm.entries.cols(),
                pm.max_error()
            );
        }
        Command::Schwarz { cfg, jacobian } => {
            let p = precision(run, false)?;
            let cfg = load_configuration(cfg, run, p)?;
            let s = schwarz_map(&cfg, p)?;
            let digits = p.get() as usize;
            let pivot = s.pivot();
            let mut result = json!({
                "schema": "schwarz/1",
                "configuration": cfg,
                "values": s.values.iter().map(|z| ComplexJson::new(z, digits)).collect::<Vec<_>>(),
                "errors": s.errors,
                "pivot": pivot,
                "ratios": s.ratios(pivot).iter().map(|r| ComplexJson::new(&r.value, digits)).collect::<Vec<_>>(),
            });
            for (k, z) in s.values.iter().enumerate() {
                let (re, im) = z.to_strings(20);
                println!("S_{} = {re} + {im} i", k + 1);
            }
            if *jacobian {
                let j = schwarz_jacobian(&cfg, p)?;
                println!("jacobian rank {} of {}", j.rank, j.matrix.cols());
                result["jacobian"] = json!({ "rank": j.rank, "singular_values": j.singular_values, "step": j.step });
            }
            write_artifact(dir, "schwarz.json", "schwarz", &config, result)?;
        }
        Command::FindAttractors { cfg, target, max_iter } => {
            let p = precision(run, true)?;
            let initial = load_configuration(cfg, run, p)?;
            let target = parse_target(target, certification_order(initial.n()))?;
            let options = SolverOptions { max_iterations: *max_iter, height_bound: run.height_bound, ..SolverOptions::default() };
            let cert = solve_attractor(&target, &initial, p, options)?;
            println!(
                "{} after {} iterations, residual {:.3e}, ratios match target: {}",
                cert.status,
                cert.iterations,
                cert.residual,
                cert.matches_target()
            );
            write_artifact(dir, "certificate.json", "attractor-cert", &config, serde_json::to_value(&cert)?)?;
        }
        Command::DensityScan { targets } => {
            let p = precision(run, true)?;
            let n = require_n(run)?;
            let report = density_scan(n, *targets, run.height_bound, run.seed, p)?;
            for o in &report.outcomes {
                if let Some(cert) = &o.certificate {
                    let name = format!("certificates/cert-{:03}.json", o.index);
                    write_artifact(dir, &name, "attractor-cert", &config, serde_json::to_value(cert)?)?;
                }
            }
            write_artifact(dir, "density-scan.json", "density-scan", &config, serde_json::to_value(&report)?)?;
            write_csv(dir, "density-summary.csv", &config, &report.summary_csv())?;
            println!("certified {} of {}, distinct {}", report.certified, targets, report.distinct);
        }
        Command::Monodromy { cfg, word, generators } => {
            let p = precision(run, false)?;
            let cfg = load_configuration(cfg, run, p)?;
            let word = BraidWord::parse(word)?;
            let form = hermitian_form(&cfg, p)?;
            let mut words = vec![word];
            if *generators {
                words.extend((1..=2 * cfg.n() as usize - 2).map(BraidWord::generator));
            }
            let mut matrices = Vec::new();
            for w in &words {
                let m = continue_schwarz(&cfg, w, p)?;
                let exact = recognize_if_possible(&m, run.height_bound, p)?;
                let defect = check_invariance(&m.matrix, &form.matrix);
                println!("word [{w}]: invariance defect {defect:.3e}, exact: {}", exact.is_some());
                let mut j = m.to_json(exact.as_ref());
                j["invariance_defect"] = json!(defect);
                matrices.push(j);
            }
            let mut relations = Vec::new();
            if *generators {
                for j in 1..2 * cfg.n() as usize - 2 {
                    let r = check_braid_relation(&cfg, j, run.height_bound, p)?;
                    println!("braid relation {j}: defect {:.3e}, exact {:?}", r.numeric_defect, r.exact);
                    relations.push(serde_json::to_value(&r)?);
                }
            }
            println!("hermitian form signature {:?}", form.signature);
            let result = json!({
                "schema": "monodromy/1",
                "configuration": cfg,
                "hermitian_form": {
                    "signature": [form.signature.0, form.signature.1],
                    "hermitian_defect": form.hermitian_defect,
                    "null_residual": form.null_residual,
                },
                "matrices": matrices,
                "braid_relations": relations,
            });
            write_artifact(dir, "monodromy.json", "monodromy", &config, result)?;
        }
        Command::ShimuraReport { n_max } => {
            let degrees: Vec<u32> = match (n_max, run.n) {
                (Some(m), _) => (2..=*m).collect(),
                (None, Some(n)) => vec![n],
                (None, None) => return Err(Error::domain("shimura-report needs --n or --n-max")),
            };
            let reports = degrees.iter().map(|&n| gap_report(n)).collect::<Result<Vec<GapReport>>>()?;
            for r in &reports {
                println!("{}", r.summary_line());
            }
            println!("{}", GapReport::TABLE_HEADER);
            for r in &reports {
                println!("{}", r.table_row());
            }
            let top = *degrees.last().expect("at least one degree");
            let result = json!({
                "schema": "shimura-report/1",
                "reports": reports,
                "counterexample_dimensions": if top >= 2 { counterexample_dimensions(top)? } else { Vec::new() },
            });
            write_artifact(dir, "shimura-report.json", "shimura-report", &config, result)?;
        }
        Command::Certify { cfg, certificate, escalate } => {
            let p = precision(run, true)?;
            match certificate {
                Some(path) => {
                    let text = fs::read_to_string(path).map_err(io_err(path))?;
                    let doc: Value = serde_json::from_str(&text)?;
                    let cert_value = if doc.get("kind").is_some() { doc["result"].clone() } else { doc };
                    let cert: AttractorCertificate = serde_json::from_value(cert_value)?;
                    let raised = Precision::digits(cert.precision + escalate)?;
                    let again = cert.recheck(raised)?;
                    let inflation = again.map(|r| r / cert.residual.max(f64::MIN_POSITIVE));
                    let holds = matches!(inflation, Some(x) if x <= 10.0);
                    println!(
                        "recheck at {} digits: {}",
                        raised.get(),
                        match again {
                            Some(r) => format!("residual {r:.3e} (inflation {:.2})", inflation.unwrap_or(f64::NAN)),
                            None => "ratios no longer recognized".to_string(),
                        }
                    );
                    let result = json!({
                        "schema": "certify/1",
                        "original_residual": cert.residual,
                        "recheck_precision": raised.get(),
                        "recheck_residual": again,
                        "inflation": inflation,
                        "holds": holds,
                    });
                    write_artifact(dir, "certify.json", "certify", &config, result)?;
                    if !holds {
                        return Err(Error::NotCertified("certificate did not survive precision escalation".into()));
                    }
                }
                None => {
                    let cfg = load_configuration(cfg, run, p)?;
                    match AttractorCertificate::certify(&cfg, run.height_bound, p)? {
                        Some(cert) => {
                            println!("certified, residual {:.3e}", cert.residual);
                            write_artifact(dir, "certificate.json", "attractor-cert", &config, serde_json::to_value(&cert)?)?;
                        }
                        None => {
                            return Err(Error::NotCertified(format!(
                                "no ratio vector of height <= {} matches this configuration",
                                run.height_bound
                            )))
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
