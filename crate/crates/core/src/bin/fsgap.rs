use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use fsgap::criteria::{closed_form_bound, default_lambda, threshold, LatticeKind, ThresholdReport};
use fsgap::gapver::{self, Boundary, EdOptions};
use fsgap::profiles::CoefficientProfile;
use fsgap::scalars::QuadraticScalar;
use fsgap::tuner::{self, TableRow, TuneConfig};
use fsgap::weight_oracle::{self, CensusSummary, ComparisonReport};

#[derive(Parser, Debug)]
#[command(
    name = "fsgap",
    version,
    about = "Finite-size spectral gap criteria: thresholds, oracles and ED checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimized thresholds t_ℓ over a range of ℓ.
    Tables(TablesArgs),
    /// Exact t_ℓ at the default λ against the closed-form bound.
    Bound(BoundArgs),
    /// Brute-force pair-weight census compared with the closed-form constants.
    Census(CensusArgs),
    /// Exact diagonalization gap of a torus or open box.
    Gap(GapArgs),
    /// One-magnon (half Laplacian) gaps.
    Spinwave(SpinwaveArgs),
    /// End-to-end criterion check: torus gap, open-box gap and threshold.
    Verify(VerifyArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Lattice {
    Hypercubic,
    Honeycomb,
    Triangular,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Compare {
    Paper,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Bc {
    Open,
    Periodic,
}

#[derive(Args, Debug, Clone)]
struct Common {
    #[arg(long, value_enum)]
    lattice: Lattice,
    /// Dimension for the hypercubic lattice.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Binary precision for rendering exact values (at least 53).
    #[arg(long, default_value_t = 53)]
    precision: u32,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    jobs: Option<usize>,
    /// Write output files and manifest.json into this directory.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ProfileChoice {
    /// Exact λ override: `A` or `A,B,K` for A + B√K.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "uniform")]
    lambda: Option<String>,
    /// Use the uniform profile c = d = 1.
    #[arg(long)]
    uniform: bool,
}

#[derive(Args, Debug)]
struct TablesArgs {
    #[command(flatten)]
    common: Common,
    /// `A..B` or `N`.
    #[arg(long)]
    ell: String,
    #[command(flatten)]
    profile: ProfileChoice,
    #[arg(long, value_enum)]
    compare: Option<Compare>,
}

#[derive(Args, Debug)]
struct BoundArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    ell: String,
}

#[derive(Args, Debug)]
struct CensusArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long)]
    ell: String,
    /// Torus side; defaults to 2ℓ+1.
    #[arg(long = "L")]
    l: Option<usize>,
    #[command(flatten)]
    profile: ProfileChoice,
    /// Include every pair weight in the output.
    #[arg(long)]
    pairs: bool,
}

#[derive(Args, Debug)]
struct GapArgs {
    #[command(flatten)]
    common: Common,
    /// Torus side.
    #[arg(long = "L", conflicts_with = "ell")]
    l: Option<usize>,
    /// Open box side.
    #[arg(long)]
    ell: Option<String>,
    /// Number of lowest eigenvalues kept per dense block.
    #[arg(long, default_value_t = 0)]
    dump: usize,
    #[arg(long, default_value_t = EdOptions::default().dense_max)]
    dense_max: usize,
}

#[derive(Args, Debug)]
struct SpinwaveArgs {
    #[command(flatten)]
    common: Common,
    /// Side range, `A..B` or `N`.
    #[arg(long = "L")]
    l: String,
    #[arg(long, value_enum, default_value_t = Bc::Periodic)]
    bc: Bc,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long = "L", default_value_t = 4)]
    l: usize,
    #[arg(long, default_value = "2")]
    ell: String,
    #[command(flatten)]
    profile: ProfileChoice,
}

/// Bad input that should exit with status 2.
#[derive(Debug)]
struct Usage(String);

impl std::fmt::Display for Usage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    Usage(msg.into()).into()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: BTreeMap<String, String>,
    pub version: String,
    pub outputs: Vec<String>,
    pub timestamp: u64,
}

struct Output {
    command: &'static str,
    parameters: BTreeMap<String, String>,
    files: Vec<(String, String)>,
}

impl Output {
    fn new(command: &'static str) -> Self {
        Output {
            command,
            parameters: BTreeMap::new(),
            files: Vec::new(),
        }
    }

    fn param(&mut self, k: &str, v: impl ToString) {
        self.parameters.insert(k.to_string(), v.to_string());
    }

    fn emit(self, out: Option<&Path>) -> Result<()> {
        match out {
            None => {
                let mut so = std::io::stdout().lock();
                for (_, body) in &self.files {
                    so.write_all(body.as_bytes())?;
                }
            }
            Some(dir) => {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let mut outputs = Vec::new();
                for (name, body) in &self.files {
                    let p = dir.join(name);
                    fs::write(&p, body).with_context(|| format!("writing {}", p.display()))?;
                    outputs.push(p.display().to_string());
                }
                let m = RunManifest {
                    command: self.command.to_string(),
                    parameters: self.parameters,
                    version: env!("CARGO_PKG_VERSION").to_string(),
                    outputs,
                    timestamp: SystemTime::now()
                        .duration_since(UNIX_EPOCH)
                        .map(|d| d.as_secs())
                        .unwrap_or(0),
                };
                fs::write(
                    dir.join("manifest.json"),
                    serde_json::to_string_pretty(&m)? + "\n",
                )?;
            }
        }
        Ok(())
    }
}

fn lattice_kind(c: &Common) -> Result<LatticeKind> {
    match c.lattice {
        Lattice::Hypercubic => LatticeKind::hypercubic(c.dim).map_err(|e| usage(e.to_string())),
        Lattice::Honeycomb => Ok(LatticeKind::Honeycomb),
        Lattice::Triangular => Ok(LatticeKind::Triangular),
    }
}

fn parse_range(s: &str, min: usize, what: &str) -> Result<Vec<usize>> {
    let bad = || usage(format!("invalid {what} `{s}`; expected N or A..B"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (
            a.trim().parse::<usize>().map_err(|_| bad())?,
            b.trim().parse::<usize>().map_err(|_| bad())?,
        ),
        None => {
            let n = s.trim().parse::<usize>().map_err(|_| bad())?;
            (n, n)
        }
    };
    if a > b {
        return Err(bad());
    }
    if a < min {
        return Err(usage(format!("{what} must be at least {min}, got {a}")));
    }
    Ok((a..=b).collect())
}

fn parse_single(s: &str, min: usize, what: &str) -> Result<usize> {
    let v = parse_range(s, min, what)?;
    if v.len() != 1 {
        return Err(usage(format!("{what} must be a single value here")));
    }
    Ok(v[0])
}

fn parse_lambda(s: &str) -> Result<QuadraticScalar> {
    s.parse::<QuadraticScalar>()
        .map_err(|e| usage(format!("invalid --lambda `{s}`: {e}")))
}

fn check_precision(p: u32) -> Result<()> {
    if p < 53 {
        return Err(usage(format!(
            "--precision must be at least 53 bits, got {p}"
        )));
    }
    Ok(())
}

fn render(x: &QuadraticScalar, precision: u32) -> Result<String> {
    if precision <= 53 {
        return Ok(format!("{}", x.to_float_bits(precision)?));
    }
    let digits = (precision as f64 * std::f64::consts::LOG10_2).ceil() as u32;
    Ok(x.to_decimal_string(digits))
}

/// Profile for one ℓ under the chosen override, or `None` for the tuner.
fn fixed_profile(choice: &ProfileChoice, ell: usize) -> Result<Option<CoefficientProfile>> {
    if choice.uniform {
        return Ok(Some(CoefficientProfile::uniform(ell)?));
    }
    match &choice.lambda {
        Some(s) => Ok(Some(CoefficientProfile::quadratic(ell, parse_lambda(s)?)?)),
        None => Ok(None),
    }
}

fn profile_label(choice: &ProfileChoice) -> String {
    if choice.uniform {
        "uniform".into()
    } else if let Some(l) = &choice.lambda {
        format!("lambda={l}")
    } else {
        "tuned".into()
    }
}

fn row_from_report(
    lattice: LatticeKind,
    ell: usize,
    lambda: f64,
    r: Option<&ThresholdReport>,
) -> TableRow {
    match r {
        Some(r) => TableRow {
            lattice: lattice.name().to_string(),
            dim: lattice.dim(),
            ell,
            t_ell: r.t_float,
            ell_sq_t: (&r.t_ell * &QuadraticScalar::from_integer((ell * ell) as i64)).to_f64(),
            lambda_star: lambda,
            feasible: r.feasible,
        },
        None => TableRow {
            lattice: lattice.name().to_string(),
            dim: lattice.dim(),
            ell,
            t_ell: f64::NAN,
            ell_sq_t: f64::NAN,
            lambda_star: lambda,
            feasible: false,
        },
    }
}

fn cmd_tables(a: TablesArgs) -> Result<u8> {
    let lattice = lattice_kind(&a.common)?;
    let ells = parse_range(&a.ell, 2, "--ell")?;
    let mut out = Output::new("tables");
    out.param("lattice", lattice);
    out.param("ell", &a.ell);
    out.param("profile", profile_label(&a.profile));
    let rows: Vec<TableRow> = if a.profile.uniform || a.profile.lambda.is_some() {
        let lam = a.profile.lambda.as_deref().map(parse_lambda).transpose()?;
        ells.iter()
            .map(|&ell| {
                let p = fixed_profile(&a.profile, ell)?.expect("fixed profile");
                let valid = p.validate().is_valid();
                let r = if valid {
                    Some(threshold(lattice, &p)?)
                } else {
                    None
                };
                let lf = lam.as_ref().map(|l| l.to_f64()).unwrap_or(f64::NAN);
                Ok(row_from_report(
                    lattice,
                    ell,
                    lf,
                    r.as_ref().filter(|r| r.feasible),
                ))
            })
            .collect::<Result<_>>()?
    } else {
        tuner::reproduce_table(lattice, ells[0]..=*ells.last().unwrap())?
    };
    let body = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            tuner::write_table_csv(&rows, &mut buf)?;
            String::from_utf8(buf)?
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    let ext = if a.common.format == Some(Format::Json) {
        "json"
    } else {
        "csv"
    };
    out.files.push((format!("tables.{ext}"), body));
    let mut code = 0;
    if a.compare == Some(Compare::Paper) {
        out.param("compare", "paper");
        let cmp = tuner::compare_with_published(lattice, &rows);
        let mut failed = 0;
        for c in &cmp {
            let status = if c.within_tolerance { "ok" } else { "MISMATCH" };
            match c.published {
                Some(p) => eprintln!(
                    "{lattice} ell={:>3} computed={} published={p:.3} diff={:.4} {status}",
                    c.ell,
                    c.computed_rounded,
                    c.abs_diff.unwrap_or(f64::NAN)
                ),
                None => eprintln!(
                    "{lattice} ell={:>3} computed={} no published value {status}",
                    c.ell, c.computed_rounded
                ),
            }
            if !c.within_tolerance {
                failed += 1;
            }
        }
        eprintln!(
            "compare: {}/{} rows within ±{}",
            cmp.len() - failed,
            cmp.len(),
            tuner::TABLE_TOLERANCE
        );
        if failed > 0 {
            code = 1;
        }
    }
    out.emit(a.common.out.as_deref())?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct BoundRow {
    lattice: String,
    #[serde(rename = "D")]
    dim: Option<usize>,
    ell: usize,
    t_ell: QuadraticScalar,
    bound: QuadraticScalar,
    dominated: bool,
}

fn cmd_bound(a: BoundArgs) -> Result<u8> {
    let lattice = lattice_kind(&a.common)?;
    check_precision(a.common.precision)?;
    let ells = parse_range(&a.ell, 10, "--ell")?;
    let mut out = Output::new("bound");
    out.param("lattice", lattice);
    out.param("ell", &a.ell);
    out.param("precision", a.common.precision);
    let rows: Vec<BoundRow> = ells
        .iter()
        .map(|&ell| {
            let r = tuner::default_threshold_unfiltered(lattice, ell)?;
            let b = QuadraticScalar::rational(closed_form_bound(lattice, ell)?);
            let dominated = r.t_ell.cmp_exact(&b)? != std::cmp::Ordering::Greater;
            Ok(BoundRow {
                lattice: lattice.name().to_string(),
                dim: lattice.dim(),
                ell,
                t_ell: r.t_ell,
                bound: b,
                dominated,
            })
        })
        .collect::<Result<_>>()?;
    let body = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["lattice", "D", "ell", "t_ell", "bound", "dominated"])?;
            for r in &rows {
                w.write_record([
                    r.lattice.clone(),
                    r.dim.map(|d| d.to_string()).unwrap_or_default(),
                    r.ell.to_string(),
                    render(&r.t_ell, a.common.precision)?,
                    render(&r.bound, a.common.precision)?,
                    r.dominated.to_string(),
                ])?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    let ext = if a.common.format == Some(Format::Json) {
        "json"
    } else {
        "csv"
    };
    out.files.push((format!("bound.{ext}"), body));
    let bad: Vec<usize> = rows
        .iter()
        .filter(|r| !r.dominated)
        .map(|r| r.ell)
        .collect();
    if !bad.is_empty() {
        eprintln!("bound exceeded at ell = {bad:?}");
    }
    out.emit(a.common.out.as_deref())?;
    Ok(if bad.is_empty() { 0 } else { 1 })
}

#[derive(Debug, Serialize)]
struct CensusOutput {
    profile: String,
    summary: CensusSummary,
    comparison: ComparisonReport,
}

fn cmd_census(a: CensusArgs) -> Result<u8> {
    let lattice = lattice_kind(&a.common)?;
    if a.common.format == Some(Format::Csv) {
        return Err(usage("census output is JSON only"));
    }
    let ell = parse_single(&a.ell, 2, "--ell")?;
    if let Some(l) = a.l {
        if l <= 2 * ell {
            return Err(usage(format!("--L must exceed 2ℓ = {}, got {l}", 2 * ell)));
        }
    }
    let p = match fixed_profile(&a.profile, ell)? {
        Some(p) => p,
        None => CoefficientProfile::quadratic(ell, default_lambda(lattice, ell))?,
    };
    let label = if a.profile.uniform || a.profile.lambda.is_some() {
        profile_label(&a.profile)
    } else {
        "default".into()
    };
    let mut out = Output::new("census");
    out.param("lattice", lattice);
    out.param("ell", ell);
    out.param("L", a.l.unwrap_or(2 * ell + 1));
    out.param("profile", &label);
    let (g, c) = weight_oracle::run_census(lattice, &p, a.l)?;
    let k = fsgap::criteria::kset(lattice, &p)?;
    let comparison = weight_oracle::census_vs_kset(&c, &k)?;
    for r in &comparison.rows {
        if !r.equal {
            eprintln!(
                "{}: census {} vs closed form {}",
                r.name,
                r.census
                    .as_ref()
                    .map(|x| x.to_string())
                    .unwrap_or_else(|| "-".into()),
                r.formula
            );
        }
    }
    if !comparison.residual_ok {
        eprintln!(
            "a residual pair weight exceeds the dominating {}",
            comparison.dominating
        );
    }
    let passed = comparison.passed();
    eprintln!(
        "census: {}",
        if passed {
            "all constants equal"
        } else {
            "MISMATCH"
        }
    );
    let body = CensusOutput {
        profile: label,
        summary: CensusSummary::new(&c, &g, ell, a.pairs),
        comparison,
    };
    out.files.push((
        "census.json".into(),
        serde_json::to_string_pretty(&body)? + "\n",
    ));
    out.emit(a.common.out.as_deref())?;
    Ok(if passed { 0 } else { 1 })
}

fn cmd_gap(a: GapArgs) -> Result<u8> {
    let lattice = lattice_kind(&a.common)?;
    let mut out = Output::new("gap");
    out.param("lattice", lattice);
    let g = match (a.l, &a.ell) {
        (Some(l), None) => {
            if l < 2 {
                return Err(usage("--L must be at least 2"));
            }
            out.param("L", l);
            weight_oracle::build_torus(lattice, l)?.to_graph()
        }
        (None, Some(e)) => {
            let ell = parse_single(e, 1, "--ell")?;
            out.param("ell", ell);
            weight_oracle::open_box_graph(lattice, ell)?
        }
        _ => return Err(usage("give exactly one of --L (torus) or --ell (open box)")),
    };
    if g.n > gapver::MAX_SITES {
        return Err(usage(format!(
            "{} sites exceed the ED cap of {}; use `spinwave` instead",
            g.n,
            gapver::MAX_SITES
        )));
    }
    let opts = EdOptions {
        dense_max: a.dense_max,
        dump: a.dump,
        ..EdOptions::default()
    };
    let sys = gapver::SpinSystem::heisenberg(g)?;
    let rep = gapver::spectral_gap_with(&sys, &opts)?;
    let body = match a.common.format.unwrap_or(Format::Json) {
        Format::Json => serde_json::to_string_pretty(&rep)? + "\n",
        Format::Csv => format!(
            "gamma,method,dimension,residual,ground_degeneracy\n{},{},{},{},{}\n",
            rep.gamma,
            serde_json::to_value(rep.method)?.as_str().unwrap_or(""),
            rep.dimension,
            rep.residual,
            rep.ground_degeneracy
        ),
    };
    let ext = if a.common.format == Some(Format::Csv) {
        "csv"
    } else {
        "json"
    };
    out.files.push((format!("gap.{ext}"), body));
    out.emit(a.common.out.as_deref())?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct SpinwaveRow {
    lattice: String,
    bc: &'static str,
    size: usize,
    gap: f64,
    size_sq_gap: f64,
}

fn cmd_spinwave(a: SpinwaveArgs) -> Result<u8> {
    let lattice = lattice_kind(&a.common)?;
    let sizes = parse_range(&a.l, 2, "--L")?;
    let (bc, bcs) = match a.bc {
        Bc::Open => (Boundary::Open, "open"),
        Bc::Periodic => (Boundary::Periodic, "periodic"),
    };
    let mut out = Output::new("spinwave");
    out.param("lattice", lattice);
    out.param("L", &a.l);
    out.param("bc", bcs);
    let rows: Vec<SpinwaveRow> = sizes
        .iter()
        .map(|&l| {
            let gap = gapver::one_magnon_gap(lattice, l, bc)?;
            Ok(SpinwaveRow {
                lattice: lattice.name().to_string(),
                bc: bcs,
                size: l,
                gap,
                size_sq_gap: gap * (l * l) as f64,
            })
        })
        .collect::<Result<_>>()?;
    let body = match a.common.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            String::from_utf8(w.into_inner()?)?
        }
        Format::Json => serde_json::to_string_pretty(&rows)? + "\n",
    };
    let ext = if a.common.format == Some(Format::Json) {
        "json"
    } else {
        "csv"
    };
    out.files.push((format!("spinwave.{ext}"), body));
    out.emit(a.common.out.as_deref())?;
    Ok(0)
}

#[derive(Debug, Serialize)]
struct VerifyOutput {
    profile: String,
    t_ell: QuadraticScalar,
    prefactor: QuadraticScalar,
    result: gapver::PipelineResult,
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    let lattice = lattice_kind(&a.common)?;
    if a.common.format == Some(Format::Csv) {
        return Err(usage("verify output is JSON only"));
    }
    let ell = parse_single(&a.ell, 2, "--ell")?;
    if a.l < 2 {
        return Err(usage("--L must be at least 2"));
    }
    let report = match fixed_profile(&a.profile, ell)? {
        Some(p) => {
            if !p.validate().is_valid() {
                return Err(usage(
                    "the chosen profile violates the weighting requirements",
                ));
            }
            threshold(lattice, &p)?
        }
        None => tuner::optimize_lambda(&TuneConfig::new(lattice, ell))?.report,
    };
    if !report.feasible {
        return Err(usage("the chosen profile is infeasible for this lattice"));
    }
    let mut out = Output::new("verify");
    out.param("lattice", lattice);
    out.param("L", a.l);
    out.param("ell", ell);
    out.param("profile", profile_label(&a.profile));
    let res = gapver::verify_pipeline(lattice, a.l, ell, &report, &EdOptions::default())?;
    let v = &res.verdict;
    eprintln!(
        "gamma_L={:.6} gamma_ell={:.6} t_ell={:.6} prefactor={:.6} margin={:.6} holds={} certifying={}",
        v.gamma_l, v.gamma_ell, v.t_ell, v.prefactor, v.margin, v.holds, v.certifying
    );
    let holds = v.holds;
    let body = VerifyOutput {
        profile: profile_label(&a.profile),
        t_ell: report.t_ell.clone(),
        prefactor: report.prefactor.clone(),
        result: res,
    };
    out.files.push((
        "verify.json".into(),
        serde_json::to_string_pretty(&body)? + "\n",
    ));
    out.emit(a.common.out.as_deref())?;
    Ok(if holds { 0 } else { 1 })
}

fn common(c: &Command) -> &Common {
    match c {
        Command::Tables(a) => &a.common,
        Command::Bound(a) => &a.common,
        Command::Census(a) => &a.common,
        Command::Gap(a) => &a.common,
        Command::Spinwave(a) => &a.common,
        Command::Verify(a) => &a.common,
    }
}

fn run(cli: Cli) -> Result<u8> {
    let c = common(&cli.command);
    check_precision(c.precision)?;
    if let Some(j) = c.jobs {
        if j == 0 {
            return Err(usage("--jobs must be positive"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(j)
            .build_global()
            .map_err(|e| anyhow!("thread pool: {e}"))?;
    }
    match cli.command {
        Command::Tables(a) => cmd_tables(a),
        Command::Bound(a) => cmd_bound(a),
        Command::Census(a) => cmd_census(a),
        Command::Gap(a) => cmd_gap(a),
        Command::Spinwave(a) => cmd_spinwave(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<Usage>().is_some() {
                eprintln!("run `fsgap --help` for usage");
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
