//! The `xray-cover` command line.
//!
//! Exit codes: 0 success, 1 usage or I/O error, 2 invalid certificate,
//! 3 failed verification. Errors go to standard error as
//! `error[<kind>]: <message>`.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::certify::{
    certify_with, constant_width_radius, jung_radius, schramm_bound, BodyClass, BodyKind,
    TOOLKIT_VERSION,
};
use crate::constructions::{config_to_json, named_config, orthogonal_join, ConfigFile};
use crate::covering::{AntipodalConfig, RadiusMethod};
use crate::optimize::{optimize_antipodal_covering, Schedule};
use crate::polytope::{corpus, verify_xray_lines, wna_check, xray_upper_bound, LineSet, Polytope};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID_CERTIFICATE: i32 = 2;
pub const EXIT_VERIFICATION_FAILED: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "xray-cover",
    version,
    about = "Antipodal spherical coverings and X-ray / illumination certificates"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a named antipodal configuration, or the orthogonal join of two.
    Construct(ConstructArgs),
    /// Covering radius of a configuration.
    Radius(RadiusArgs),
    /// Certify X <= m for a body class from a covering configuration.
    Certify(CertifyArgs),
    /// Search for an antipodal configuration with small covering radius.
    Optimize(OptimizeArgs),
    /// Polytope checks: facets and pair tests, X-ray line verification and search.
    #[command(subcommand)]
    Polytope(PolytopeCommand),
    /// Table of face radii, class limits and Schramm's bound.
    Thresholds(ThresholdArgs),
}

#[derive(Args, Debug)]
pub struct ConstructArgs {
    /// cross-polytope-<d>, polygon-<k>, hexagon-pair, s2-8, s2-16, d5, d6, or `join`
    pub name: String,
    /// Left factor of a join (name or config path)
    #[arg(long, required_if_eq("name", "join"))]
    pub left: Option<String>,
    /// Right factor of a join (name or config path)
    #[arg(long, required_if_eq("name", "join"))]
    pub right: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct RadiusArgs {
    /// Config file path or construction name
    pub config: String,
    /// Hull-based exact radius (default)
    #[arg(long, conflicts_with = "samples")]
    pub exact: bool,
    /// Monte Carlo lower estimate from N uniform samples
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct CertifyArgs {
    /// almost_smooth or constant_width
    pub class: String,
    /// Dimension d >= 3
    pub dim: usize,
    /// Config file path (a config or an optimizer run) or construction name
    #[arg(long)]
    pub config: String,
    /// Samples for the fallback when the exact radius fails
    #[arg(long, default_value_t = crate::certify::FALLBACK_SAMPLES)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct OptimizeArgs {
    pub dim: usize,
    /// Number of antipodal pairs
    pub pairs: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Annealing proposals per restart
    #[arg(long)]
    pub budget: Option<usize>,
    #[arg(long)]
    pub restarts: Option<usize>,
    /// Run artifact (loadable by `certify --config` and `radius`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// CSV of the winning restart's history: iteration,radius_rad
    #[arg(long)]
    pub plot_data: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum PolytopeCommand {
    /// Facet count and the antipodal / weakly neighbourly report
    Check(PolytopeArgs),
    /// Check that a line set X-rays every face
    XrayVerify(XrayVerifyArgs),
    /// Search for a small verified X-ray line set
    XraySearch(XraySearchArgs),
}

#[derive(Args, Debug)]
pub struct PolytopeArgs {
    /// Polytope JSON path or corpus name (cube-3, triangle, cube-minus-face-4, ...)
    pub polytope: String,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct XrayVerifyArgs {
    pub polytope: String,
    /// Line set JSON: {"dim": d, "lines": [[...], ...]}
    #[arg(long)]
    pub lines: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct XraySearchArgs {
    pub polytope: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random directions added to the candidate pool
    #[arg(long, default_value_t = 256)]
    pub pool: usize,
    /// Where to write the verified line set
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct ThresholdArgs {
    /// First dimension (>= 3)
    pub from: usize,
    /// Last dimension (defaults to the first)
    pub to: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Provenance block embedded in every JSON artifact. Contains no
/// timestamps, so identical runs give identical files.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub tolerance_overrides: BTreeMap<String, f64>,
    pub toolkit_version: String,
    pub input_hashes: BTreeMap<String, String>,
    pub output_paths: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, arguments: &[String]) -> Self {
        RunManifest {
            command: command.to_string(),
            arguments: arguments.to_vec(),
            seed: None,
            tolerance_overrides: BTreeMap::new(),
            toolkit_version: TOOLKIT_VERSION.to_string(),
            input_hashes: BTreeMap::new(),
            output_paths: Vec::new(),
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Io(String),
    InvalidCertificate(String),
    VerificationFailed(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::InvalidCertificate(_) => EXIT_INVALID_CERTIFICATE,
            CliError::VerificationFailed(_) => EXIT_VERIFICATION_FAILED,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::InvalidCertificate(_) => "invalid-certificate",
            CliError::VerificationFailed(_) => "verification-failed",
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m)
            | CliError::Io(m)
            | CliError::InvalidCertificate(m)
            | CliError::VerificationFailed(m) => m,
        }
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let text = e.render().to_string();
                    let mut lines = text.lines();
                    let first = lines.next().unwrap_or("").trim_start_matches("error: ");
                    let _ = writeln!(err, "error[usage]: {first}");
                    for l in lines {
                        let _ = writeln!(err, "{l}");
                    }
                    EXIT_USAGE
                }
            };
        }
    };
    let args: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    match dispatch(cli.command, &args, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {}", e.kind(), e.message());
            e.code()
        }
    }
}

fn dispatch(command: Command, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Construct(a) => construct(a, args, out),
        Command::Radius(a) => radius(a, args, out),
        Command::Certify(a) => certify_cmd(a, args, out),
        Command::Optimize(a) => optimize(a, args, out),
        Command::Polytope(PolytopeCommand::Check(a)) => polytope_check(a, args, out),
        Command::Polytope(PolytopeCommand::XrayVerify(a)) => xray_verify(a, args, out),
        Command::Polytope(PolytopeCommand::XraySearch(a)) => xray_search(a, args, out),
        Command::Thresholds(a) => thresholds(a, args, out),
    }
}

fn io_err(path: &Path, e: impl std::fmt::Display) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn say(out: &mut dyn Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io(format!("stdout: {e}")))
}

/// Writes `payload` with the manifest under the key `manifest`.
fn write_artifact(path: &Path, payload: Value, manifest: &mut RunManifest) -> Result<(), CliError> {
    manifest.output_paths.push(path.display().to_string());
    let mut obj = match payload {
        Value::Object(m) => m,
        other => {
            let mut m = serde_json::Map::new();
            m.insert("result".into(), other);
            m
        }
    };
    obj.insert(
        "manifest".into(),
        serde_json::to_value(&*manifest).expect("manifest"),
    );
    let text = serde_json::to_string_pretty(&Value::Object(obj)).expect("json") + "\n";
    fs::write(path, text).map_err(|e| io_err(path, e))
}

/// A config from a file (plain config or optimizer run) or a construction name.
fn resolve_config(
    spec: &str,
    manifest: &mut RunManifest,
) -> Result<(AntipodalConfig, Vec<String>), CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        manifest
            .input_hashes
            .insert(spec.to_string(), sha256_hex(&bytes));
        let value: Value =
            serde_json::from_slice(&bytes).map_err(|e| usage(format!("{spec}: not JSON: {e}")))?;
        let body = value.get("best").cloned().unwrap_or(value);
        let file: ConfigFile = serde_json::from_value(body)
            .map_err(|e| usage(format!("{spec}: not a config file: {e}")))?;
        let loaded = file
            .into_config()
            .map_err(|e| usage(format!("{spec}: {e}")))?;
        return Ok((loaded.config, loaded.warnings));
    }
    match named_config(spec) {
        Ok(c) => {
            manifest.input_hashes.insert(
                format!("construction:{spec}"),
                sha256_hex(config_to_json(&c).as_bytes()),
            );
            Ok((c, Vec::new()))
        }
        Err(e) => Err(usage(format!(
            "{spec} is neither a readable file nor a construction ({e})"
        ))),
    }
}

fn resolve_polytope(spec: &str, manifest: &mut RunManifest) -> Result<Polytope, CliError> {
    let path = Path::new(spec);
    if path.is_file() {
        let bytes = fs::read(path).map_err(|e| io_err(path, e))?;
        manifest
            .input_hashes
            .insert(spec.to_string(), sha256_hex(&bytes));
        let text = String::from_utf8_lossy(&bytes);
        return Polytope::from_json(&text).map_err(|e| usage(format!("{spec}: {e}")));
    }
    corpus::named(spec).ok_or_else(|| {
        usage(format!(
            "{spec} is neither a readable file nor a corpus polytope"
        ))
    })
}

fn fmt_angle(rad: f64) -> String {
    format!("{:.6}° ({rad:.12} rad)", rad.to_degrees())
}

fn construct(a: ConstructArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("construct", args);
    let config = if a.name == "join" {
        let (l, _) = resolve_config(a.left.as_deref().unwrap_or_default(), &mut manifest)?;
        let (r, _) = resolve_config(a.right.as_deref().unwrap_or_default(), &mut manifest)?;
        orthogonal_join(&l, &r)
    } else {
        named_config(&a.name).map_err(usage)?
    };
    let config = config.with_exact_radius().map_err(usage)?;
    say(
        out,
        &format!(
            "{}: d = {}, {} antipodal pairs, covering radius {}\n",
            config.provenance,
            config.dim(),
            config.pairs(),
            fmt_angle(config.covering_radius.expect("filled"))
        ),
    )?;
    if let Some(path) = &a.out {
        let payload = serde_json::to_value(ConfigFile::from(&config)).expect("json");
        write_artifact(path, payload, &mut manifest)?;
        say(out, &format!("wrote {}\n", path.display()))?;
    }
    Ok(EXIT_OK)
}

fn radius(a: RadiusArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("radius", args);
    let (config, warnings) = resolve_config(&a.config, &mut manifest)?;
    for w in warnings {
        say(out, &format!("warning: {w}\n"))?;
    }
    let result = match a.samples {
        Some(n) if n > 0 => {
            manifest.seed = Some(a.seed);
            config.covering_radius_sampled(n, a.seed)
        }
        Some(_) => return Err(usage("--samples must be positive")),
        None => config.covering_radius_exact().map_err(usage)?,
    };
    let mut text = format!("covering radius {}\n", fmt_angle(result.radius));
    if let RadiusMethod::Sampled { samples, bound, .. } = result.method {
        text += &format!(
            "sampled lower estimate from {samples} points; true radius below estimate + {} with probability 1 - 1e-6\n",
            fmt_angle(bound)
        );
    } else {
        text += "exact (hull facets)\n";
    }
    text += &format!("farthest point {}\n", result.witness);
    say(out, &text)?;
    if let Some(path) = &a.out {
        let payload = json!({
            "covering_radius": result.radius,
            "method": result.method,
            "witness": result.witness,
            "config_reference": config.provenance.to_string(),
        });
        write_artifact(path, payload, &mut manifest)?;
    }
    Ok(EXIT_OK)
}

fn certify_cmd(a: CertifyArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("certify", args);
    manifest.seed = Some(a.seed);
    let kind = BodyKind::parse(&a.class).map_err(usage)?;
    let class = BodyClass::new(kind, a.dim).map_err(usage)?;
    let (config, warnings) = resolve_config(&a.config, &mut manifest)?;
    for w in warnings {
        say(out, &format!("warning: {w}\n"))?;
    }
    let cert = certify_with(class, &config, a.samples, a.seed).map_err(usage)?;
    say(out, &cert.summary())?;
    if let Some(path) = &a.out {
        write_artifact(
            path,
            serde_json::to_value(&cert).expect("json"),
            &mut manifest,
        )?;
    }
    if cert.valid {
        Ok(EXIT_OK)
    } else {
        Err(CliError::InvalidCertificate(format!(
            "margin {:.6}° is negative",
            cert.margin.to_degrees()
        )))
    }
}

fn optimize(a: OptimizeArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("optimize", args);
    manifest.seed = Some(a.seed);
    let mut schedule = Schedule::default();
    if let Some(b) = a.budget {
        schedule.budget = b;
    }
    if let Some(r) = a.restarts {
        schedule.restarts = r;
    }
    let run = optimize_antipodal_covering(a.dim, a.pairs, a.seed, &schedule).map_err(usage)?;
    let mut text = format!(
        "d = {}, m = {}: covering radius {}\n",
        a.dim,
        a.pairs,
        fmt_angle(run.best_radius)
    );
    for r in &run.restarts {
        text += &format!("  restart {:>20}  {:.6}°\n", r.seed, r.radius.to_degrees());
    }
    say(out, &text)?;
    if let Some(path) = &a.plot_data {
        let mut csv = String::from("iteration,radius_rad\n");
        for h in &run.history {
            csv += &format!("{},{}\n", h.iteration, h.radius);
        }
        fs::write(path, csv).map_err(|e| io_err(path, e))?;
        manifest.output_paths.push(path.display().to_string());
    }
    if let Some(path) = &a.out {
        write_artifact(
            path,
            serde_json::to_value(&run).expect("json"),
            &mut manifest,
        )?;
        say(out, &format!("wrote {}\n", path.display()))?;
    }
    Ok(EXIT_OK)
}

fn polytope_check(a: PolytopeArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("polytope check", args);
    let p = resolve_polytope(&a.polytope, &mut manifest)?;
    let report = wna_check(&p).map_err(usage)?;
    say(
        out,
        &format!(
            "facets               {}\n{}",
            p.facets().len(),
            report.summary()
        ),
    )?;
    if let Some(path) = &a.out {
        let mut payload = serde_json::to_value(&report).expect("json");
        payload["facet_count"] = json!(p.facets().len());
        write_artifact(path, payload, &mut manifest)?;
    }
    Ok(EXIT_OK)
}

fn xray_verify(a: XrayVerifyArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("polytope xray-verify", args);
    let p = resolve_polytope(&a.polytope, &mut manifest)?;
    let bytes = fs::read(&a.lines).map_err(|e| io_err(&a.lines, e))?;
    manifest
        .input_hashes
        .insert(a.lines.display().to_string(), sha256_hex(&bytes));
    let lines = LineSet::from_json(&String::from_utf8_lossy(&bytes)).map_err(usage)?;
    let report = verify_xray_lines(&p, &lines).map_err(usage)?;
    let mut text = format!(
        "{} lines, {} vertices: {}\n",
        lines.len(),
        p.vertex_count(),
        if report.covered {
            "every face is X-rayed"
        } else {
            "NOT covered"
        }
    );
    if !report.failing_vertices.is_empty() {
        text += &format!("uncovered vertices {:?}\n", report.failing_vertices);
    }
    if !report.marginal_vertices.is_empty() {
        text += &format!(
            "marginal vertices {:?} (some inner product below 1e-8; perturb the lines)\n",
            report.marginal_vertices
        );
    }
    say(out, &text)?;
    if let Some(path) = &a.out {
        write_artifact(
            path,
            serde_json::to_value(&report).expect("json"),
            &mut manifest,
        )?;
    }
    if report.covered {
        Ok(EXIT_OK)
    } else {
        Err(CliError::VerificationFailed(format!(
            "vertices {:?} are not X-rayed by any line",
            report.failing_vertices
        )))
    }
}

fn xray_search(a: XraySearchArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("polytope xray-search", args);
    manifest.seed = Some(a.seed);
    let p = resolve_polytope(&a.polytope, &mut manifest)?;
    let search = xray_upper_bound(&p, a.pool, a.seed)
        .map_err(|e| CliError::VerificationFailed(e.to_string()))?;
    let mut text = format!(
        "X <= {} ({} candidate lines, {} set cover)\n",
        search.count,
        search.candidates,
        if search.exact { "exact" } else { "greedy" }
    );
    for l in &search.lines.lines {
        text += &format!("  {l}\n");
    }
    say(out, &text)?;
    if let Some(path) = &a.out {
        let mut payload = serde_json::to_value(&search.lines).expect("json");
        payload["count"] = json!(search.count);
        payload["exact"] = json!(search.exact);
        write_artifact(path, payload, &mut manifest)?;
    }
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct ThresholdRow {
    dim: usize,
    jung_radius: f64,
    almost_smooth_limit: f64,
    constant_width_radius: f64,
    constant_width_limit: f64,
    schramm_bound: f64,
}

fn thresholds(a: ThresholdArgs, args: &[String], out: &mut dyn Write) -> Result<i32, CliError> {
    let mut manifest = RunManifest::new("thresholds", args);
    let to = a.to.unwrap_or(a.from);
    if a.from < 3 || to < a.from {
        return Err(usage(format!("need 3 <= from <= to, got {}..{to}", a.from)));
    }
    let rows: Vec<ThresholdRow> = (a.from..=to)
        .map(|d| ThresholdRow {
            dim: d,
            jung_radius: jung_radius(d),
            almost_smooth_limit: std::f64::consts::FRAC_PI_2 - jung_radius(d),
            constant_width_radius: constant_width_radius(d),
            constant_width_limit: std::f64::consts::FRAC_PI_2 - constant_width_radius(d),
            schramm_bound: schramm_bound(d),
        })
        .collect();
    let mut text = format!(
        "{:>3}  {:>12}  {:>14}  {:>12}  {:>14}  {:>12}\n",
        "d", "jung r", "smooth limit", "width r", "width limit", "schramm"
    );
    for r in &rows {
        text += &format!(
            "{:>3}  {:>11.4}°  {:>13.4}°  {:>11.4}°  {:>13.4}°  {:>12.3}\n",
            r.dim,
            r.jung_radius.to_degrees(),
            r.almost_smooth_limit.to_degrees(),
            r.constant_width_radius.to_degrees(),
            r.constant_width_limit.to_degrees(),
            r.schramm_bound
        );
    }
    say(out, &text)?;
    if let Some(path) = &a.out {
        write_artifact(path, json!({ "rows": rows }), &mut manifest)?;
    }
    Ok(EXIT_OK)
}
