//! Command-line front end: argument parsing, the census cache and report
//! rendering.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::num::NonZeroUsize;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::{info, warn};

use crate::census::{
    enumerate, load_census, write_census, Census, CensusError, EnumerateOptions, SCHEMA_VERSION,
};
use crate::limits::{
    compare_appendix_b, comparison_json, hyperelliptic_constants, kappa, reference_rows,
    reference_table, sweep_json, sweep_with, write_sweep_csv, ComparisonRow, HyperellipticShape,
    ReferenceRow, Scope, SweepReport, SweepRow,
};
use crate::orbits::{
    components_json, decompose, write_components_csv, ComponentSummary, CUSP_CONVENTION,
};
use crate::origami::{Origami, StratumSignature};
use crate::perm::Permutation;
use crate::rational::Rational;
use crate::spin::spin_parity;

pub const CACHE_ENV: &str = "ORIGAMI_CACHE_DIR";

#[derive(Debug, Parser)]
#[command(
    name = "origami",
    version,
    about = "Square-tiled surfaces, their SL(2,Z) orbits and slopes"
)]
pub struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Census cache directory (default: $ORIGAMI_CACHE_DIR, then the user cache directory).
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    pub workers: Option<NonZeroUsize>,
    /// Maximum number of pairs or classes held in memory.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Enumerate the covering set and print N and M.
    Census(DegreeArgs),
    /// Decompose the covering set into SL(2,Z) orbits.
    Orbits(DegreeArgs),
    /// Report on a single origami.
    Classify(ClassifyArgs),
    /// Finite-degree estimates and the reference table comparison.
    Limits(LimitsArgs),
    /// Print the reference table of limiting slopes.
    Table(TableArgs),
}

#[derive(Debug, Args)]
pub struct DegreeArgs {
    /// Degree `d`, or an inclusive range `a..b`.
    #[arg(long, value_parser = parse_degrees)]
    pub degree: RangeInclusive<usize>,
    /// Zero orders, comma separated (e.g. `4` or `1,1`).
    #[arg(long, value_parser = parse_mu)]
    pub mu: StratumSignature,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    /// `α` in cycle notation, e.g. `(1,2,3,4)(5)`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: String,
    /// `β` in cycle notation.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// Degree (default: the largest letter used).
    #[arg(long)]
    pub degree: Option<usize>,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("target").required(true).args(["mu", "genus"]))]
pub struct LimitsArgs {
    /// Sweep one stratum.
    #[arg(long, value_parser = parse_mu, requires = "dmax")]
    pub mu: Option<StratumSignature>,
    /// Compare against the reference rows of this genus.
    #[arg(long)]
    pub genus: Option<usize>,
    /// Show the reference table for `--genus`.
    #[arg(long, requires = "genus")]
    pub table: bool,
    /// Largest degree to enumerate.
    #[arg(long)]
    pub dmax: Option<usize>,
    #[arg(long, value_enum, default_value_t = ScopeArg::Whole)]
    pub scope: ScopeArg,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub genus: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScopeArg {
    Whole,
    Hyp,
    Class,
}

impl From<ScopeArg> for Scope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::Whole => Scope::WholeStratum,
            ScopeArg::Hyp => Scope::HyperellipticOnly,
            ScopeArg::Class => Scope::PerComponentClass,
        }
    }
}

fn parse_degrees(s: &str) -> Result<RangeInclusive<usize>, String> {
    let one = |t: &str| -> Result<usize, String> {
        match t.trim().parse::<usize>() {
            Ok(d) if d >= 1 => Ok(d),
            _ => Err(format!("invalid degree {t:?}")),
        }
    };
    let range = match s.split_once("..") {
        Some((a, b)) => one(a)?..=one(b.trim_start_matches('='))?,
        None => one(s)?..=one(s)?,
    };
    if range.is_empty() {
        return Err(format!("empty degree range {s:?}"));
    }
    Ok(range)
}

fn parse_mu(s: &str) -> Result<StratumSignature, String> {
    s.parse().map_err(|e| format!("{e}"))
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Runtime(anyhow::Error),
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Runtime(e.into())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs the command line and returns the process exit code: 0 on success,
/// 1 on a runtime or resource failure, 2 on a usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            if e.use_stderr() {
                let _ = e.print();
            } else {
                let _ = write!(out, "{}", e.render());
            }
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            1
        }
    }
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), Failure> {
    let mut opts = match cli.workers {
        Some(w) => EnumerateOptions::with_workers(w.get()),
        None => EnumerateOptions::default(),
    };
    opts.budget = cli.budget;
    let cache = CensusCache::new(cli.cache_dir.clone().unwrap_or_else(default_cache_dir));
    let text = match &cli.command {
        Command::Census(a) => cmd_census(a, cli.format, &cache, &opts)?,
        Command::Orbits(a) => cmd_orbits(a, cli.format, &cache, &opts)?,
        Command::Classify(a) => cmd_classify(a, cli.format)?,
        Command::Limits(a) => cmd_limits(a, cli.format, &cache, &opts)?,
        Command::Table(a) => cmd_table(a, cli.format)?,
    };
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

/// On-disk census cache keyed by schema version, degree and stratum.
#[derive(Debug, Clone)]
pub struct CensusCache {
    dir: PathBuf,
}

pub fn default_cache_dir() -> PathBuf {
    if let Some(dir) = std::env::var_os(CACHE_ENV).filter(|v| !v.is_empty()) {
        return PathBuf::from(dir);
    }
    if let Some(dir) = std::env::var_os("XDG_CACHE_HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(dir).join("origami");
    }
    if let Some(home) = std::env::var_os("HOME").filter(|v| !v.is_empty()) {
        return PathBuf::from(home).join(".cache").join("origami");
    }
    std::env::temp_dir().join("origami-cache")
}

impl CensusCache {
    pub fn new(dir: PathBuf) -> Self {
        CensusCache { dir }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn path(&self, degree: usize, mu: &StratumSignature) -> PathBuf {
        let parts: Vec<String> = mu.mu().iter().map(usize::to_string).collect();
        self.dir.join(format!(
            "census-v{SCHEMA_VERSION}-d{degree}-mu{}.jsonl",
            parts.join("_")
        ))
    }

    /// Loads the cached census or computes and stores it.
    pub fn census(
        &self,
        degree: usize,
        mu: &StratumSignature,
        opts: &EnumerateOptions,
    ) -> Result<Census, CensusError> {
        let path = self.path(degree, mu);
        if path.exists() {
            match load_census(&path) {
                Ok(c) => {
                    info!("cache hit: {}", path.display());
                    return Ok(c);
                }
                Err(e) => warn!(
                    "recomputing, cache file {} is unusable: {e}",
                    path.display()
                ),
            }
        }
        info!("computing census d={degree} mu={}", mu.parts_string());
        let c = enumerate(degree, mu, opts)?;
        self.store(&c, &path)?;
        Ok(c)
    }

    fn store(&self, c: &Census, path: &Path) -> Result<(), CensusError> {
        fs::create_dir_all(&self.dir)?;
        let name = path
            .file_name()
            .expect("cache paths have a file name")
            .to_string_lossy();
        let tmp = self.dir.join(format!(".{name}.{}.tmp", std::process::id()));
        let written = fs::File::create(&tmp)
            .map_err(CensusError::from)
            .and_then(|f| write_census(c, io::BufWriter::new(f)))
            .and_then(|()| fs::rename(&tmp, path).map_err(CensusError::from));
        if written.is_err() {
            let _ = fs::remove_file(&tmp);
        }
        written
    }
}

fn approx(r: &Rational) -> String {
    format!("{} (approx {:.6})", r, r.to_f64())
}

fn cmd_census(
    a: &DegreeArgs,
    format: Format,
    cache: &CensusCache,
    opts: &EnumerateOptions,
) -> Result<String, Failure> {
    let mut censuses = Vec::new();
    for d in a.degree.clone() {
        censuses.push(cache.census(d, &a.mu, opts)?);
    }
    let mut s = String::new();
    match format {
        Format::Text => {
            for c in &censuses {
                writeln!(
                    s,
                    "d={} mu=({}) g={} N={} M={}",
                    c.degree(),
                    a.mu.parts_string(),
                    a.mu.genus(),
                    c.n(),
                    approx(c.m())
                )?;
            }
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = censuses
                .iter()
                .map(|c| {
                    serde_json::json!({
                        "degree": c.degree(),
                        "mu": a.mu.mu(),
                        "genus": a.mu.genus(),
                        "n": c.n(),
                        "m": c.m().to_fraction_string(),
                    })
                })
                .collect();
            s = json_string(one_or_many(rows));
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["degree", "mu", "genus", "N", "M_num", "M_den"])?;
            for c in &censuses {
                w.write_record([
                    c.degree().to_string(),
                    a.mu.parts_string(),
                    a.mu.genus().to_string(),
                    c.n().to_string(),
                    c.m().numer().to_string(),
                    c.m().denom().to_string(),
                ])?;
            }
            s = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(s)
}

fn one_or_many(mut rows: Vec<serde_json::Value>) -> serde_json::Value {
    if rows.len() == 1 {
        rows.pop().expect("one row")
    } else {
        serde_json::Value::Array(rows)
    }
}

fn json_string(v: serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

fn cmd_orbits(
    a: &DegreeArgs,
    format: Format,
    cache: &CensusCache,
    opts: &EnumerateOptions,
) -> Result<String, Failure> {
    let mut reports: Vec<(Census, Vec<ComponentSummary>)> = Vec::new();
    for d in a.degree.clone() {
        let c = cache.census(d, &a.mu, opts)?;
        let comps = if c.is_empty() {
            Vec::new()
        } else {
            decompose(&c)?
        };
        reports.push((c, comps));
    }
    let mut s = String::new();
    match format {
        Format::Text => {
            writeln!(s, "# {CUSP_CONVENTION}")?;
            for (c, comps) in &reports {
                writeln!(
                    s,
                    "d={} mu=({}) g={} N={} M={} components={}",
                    c.degree(),
                    a.mu.parts_string(),
                    a.mu.genus(),
                    c.n(),
                    approx(c.m()),
                    comps.len()
                )?;
                for k in comps {
                    let parity = k.parity.map_or("-".to_string(), |p| p.to_string());
                    let label = if k.label.as_str().is_empty() {
                        "-"
                    } else {
                        k.label.as_str()
                    };
                    writeln!(
                        s,
                        "  component {}: size={} M={} slope={} hyperelliptic={} parity={} label={} cusps={}",
                        k.component_id,
                        k.size(),
                        approx(&k.m),
                        approx(&k.slope),
                        k.hyperelliptic,
                        parity,
                        label,
                        k.cusp_count()
                    )?;
                }
            }
        }
        Format::Json => {
            let rows = reports
                .iter()
                .map(|(c, comps)| components_json(c, comps))
                .collect();
            s = json_string(one_or_many(rows));
        }
        Format::Csv => {
            let refs: Vec<(&Census, &[ComponentSummary])> =
                reports.iter().map(|(c, k)| (c, k.as_slice())).collect();
            let mut buf = Vec::new();
            write_components_csv(&refs, &mut buf)?;
            s = String::from_utf8(buf)?;
        }
    }
    Ok(s)
}

fn parse_origami(a: &ClassifyArgs) -> Result<Origami, Failure> {
    let degree = match a.degree {
        Some(d) => d,
        None => {
            let alpha: Permutation = a.alpha.parse().map_err(|e| usage(format!("alpha: {e}")))?;
            let beta: Permutation = a.beta.parse().map_err(|e| usage(format!("beta: {e}")))?;
            alpha.degree().max(beta.degree())
        }
    };
    Origami::parse(&a.alpha, &a.beta, degree).map_err(|e| usage(e.to_string()))
}

fn cmd_classify(a: &ClassifyArgs, format: Format) -> Result<String, Failure> {
    let o = parse_origami(a)?;
    let involutions = o.find_anti_involutions();
    let parity = spin_parity(&o).ok();
    let cylinders = o.horizontal_cylinders();
    let mut s = String::new();
    match format {
        Format::Text => {
            writeln!(s, "alpha={} beta={} d={}", o.alpha(), o.beta(), o.degree())?;
            writeln!(
                s,
                "commutator={} stratum={} g={}",
                o.commutator(),
                o.stratum(),
                o.genus()
            )?;
            writeln!(s, "weight={}", approx(o.weight()))?;
            let cyl: Vec<String> = cylinders
                .iter()
                .map(|c| format!("{}x{}", c.width, c.height))
                .collect();
            writeln!(
                s,
                "horizontal cylinders (width x height): {}",
                cyl.join(" ")
            )?;
            writeln!(s, "key={}", o.canonical_key())?;
            if involutions.is_empty() {
                writeln!(s, "anti-involutions: none")?;
            }
            for r in &involutions {
                writeln!(
                    s,
                    "anti-involution tau={}: n={} n_a={} n_b={} n_ba={} fixed_zeros={} total={}",
                    r.tau, r.n, r.n_a, r.n_b, r.n_ba, r.fixed_zeros, r.total_fixed
                )?;
            }
            writeln!(
                s,
                "hyperelliptic={} (2g+2={})",
                o.is_hyperelliptic(),
                2 * o.genus() + 2
            )?;
            writeln!(
                s,
                "hyperelliptic_component={}",
                o.in_hyperelliptic_component()
            )?;
            writeln!(
                s,
                "order_two_automorphism={}",
                o.has_order_two_automorphism()
            )?;
            match parity {
                Some(p) => writeln!(
                    s,
                    "spin_parity={p} ({})",
                    if p == 0 { "even" } else { "odd" }
                )?,
                None => writeln!(s, "spin_parity=undefined")?,
            }
        }
        Format::Json | Format::Csv => {
            if format == Format::Csv {
                return Err(usage("classify supports text and json output"));
            }
            let v = serde_json::json!({
                "alpha": o.alpha().to_string(),
                "beta": o.beta().to_string(),
                "degree": o.degree(),
                "commutator": o.commutator().to_string(),
                "mu": o.stratum().mu(),
                "genus": o.genus(),
                "weight": o.weight().to_fraction_string(),
                "cylinders": cylinders.iter().map(|c| serde_json::json!({"width": c.width, "height": c.height})).collect::<Vec<_>>(),
                "key": o.canonical_key().to_hex(),
                "anti_involutions": involutions.iter().map(|r| serde_json::json!({
                    "tau": r.tau.to_string(),
                    "n": r.n,
                    "n_a": r.n_a,
                    "n_b": r.n_b,
                    "n_ba": r.n_ba,
                    "fixed_zeros": r.fixed_zeros,
                    "total_fixed": r.total_fixed,
                })).collect::<Vec<_>>(),
                "hyperelliptic": o.is_hyperelliptic(),
                "hyperelliptic_component": o.in_hyperelliptic_component(),
                "order_two_automorphism": o.has_order_two_automorphism(),
                "spin_parity": parity,
            });
            s = json_string(v);
        }
    }
    Ok(s)
}

fn cmd_limits(
    a: &LimitsArgs,
    format: Format,
    cache: &CensusCache,
    opts: &EnumerateOptions,
) -> Result<String, Failure> {
    let census_for = |mu: &StratumSignature| {
        let mu = mu.clone();
        move |d: usize| cache.census(d, &mu, opts)
    };
    if let Some(g) = a.genus {
        let refs = reference_rows(g).map_err(|e| usage(e.to_string()))?;
        let mut sweeps: Vec<SweepReport> = Vec::new();
        if let Some(dmax) = a.dmax {
            let mut strata: Vec<&StratumSignature> = refs.iter().map(|r| &r.stratum).collect();
            strata.dedup();
            for mu in strata {
                let connected = refs
                    .iter()
                    .any(|r| &r.stratum == mu && r.label.as_str().is_empty());
                let scope = if connected {
                    Scope::WholeStratum
                } else {
                    Scope::PerComponentClass
                };
                sweeps.push(sweep_with(mu, dmax, scope, census_for(mu))?);
            }
        }
        let rows = compare_appendix_b(g, &sweeps)?;
        return render_comparison(g, &rows, &sweeps, format);
    }
    let mu = a.mu.as_ref().expect("clap requires --mu or --genus");
    let dmax = a.dmax.expect("clap requires --dmax with --mu");
    let report = sweep_with(mu, dmax, a.scope.into(), census_for(mu))?;
    let mut s = String::new();
    match format {
        Format::Text => {
            write_constants_text(&mut s, mu)?;
            write_sweep_text(&mut s, &report)?;
        }
        Format::Json => s = json_string(sweep_json(&report)),
        Format::Csv => {
            let mut buf = Vec::new();
            write_sweep_csv(std::slice::from_ref(&report), &mut buf)?;
            s = String::from_utf8(buf)?;
        }
    }
    if let Some(t) = &report.truncated {
        warn!("sweep truncated at d={}: {}", t.at_degree, t.reason);
    }
    Ok(s)
}

fn write_constants_text(s: &mut String, mu: &StratumSignature) -> std::fmt::Result {
    writeln!(s, "stratum {} g={} kappa={}", mu, mu.genus(), kappa(mu))?;
    if let Some(h) =
        HyperellipticShape::of(mu).and_then(|shape| hyperelliptic_constants(mu.genus(), shape).ok())
    {
        writeln!(s, "hyperelliptic component: c={} L={} s={}", h.c, h.l, h.s)?;
    }
    Ok(())
}

fn write_sweep_row(s: &mut String, r: &SweepRow) -> std::fmt::Result {
    let label = if r.label.as_str().is_empty() {
        "-"
    } else {
        r.label.as_str()
    };
    writeln!(
        s,
        "d={} class={} N={} M={} M/N={} slope={}",
        r.d,
        label,
        r.n,
        r.m,
        approx(&r.ratio_mn),
        approx(&r.slope)
    )
}

fn write_sweep_text(s: &mut String, rep: &SweepReport) -> std::fmt::Result {
    for r in &rep.rows {
        write_sweep_row(s, r)?;
    }
    if let Some(t) = &rep.truncated {
        writeln!(s, "TRUNCATED at d={}: {}", t.at_degree, t.reason)?;
    }
    Ok(())
}

fn reference_line(s: &mut String, r: &ReferenceRow) -> std::fmt::Result {
    let label = if r.label.as_str().is_empty() {
        "-"
    } else {
        r.label.as_str()
    };
    write!(
        s,
        "g={} {} {} s={}",
        r.genus,
        r.stratum,
        label,
        approx(&r.s)
    )
}

fn render_comparison(
    g: usize,
    rows: &[ComparisonRow],
    sweeps: &[SweepReport],
    format: Format,
) -> Result<String, Failure> {
    let mut s = String::new();
    match format {
        Format::Text => {
            writeln!(s, "reference slopes, genus {g}")?;
            for c in rows {
                reference_line(&mut s, &c.reference)?;
                if let Some(exact) = &c.exact_s {
                    write!(
                        s,
                        " exact={} match={}",
                        exact,
                        c.exact_matches == Some(true)
                    )?;
                }
                if let Some(e) = &c.estimate {
                    write!(
                        s,
                        " estimate(d={})={} deviation={:+.6}",
                        e.d,
                        approx(&e.slope),
                        c.deviation().unwrap_or(0.0)
                    )?;
                }
                writeln!(s)?;
            }
            for rep in sweeps {
                if let Some(t) = &rep.truncated {
                    writeln!(
                        s,
                        "TRUNCATED {} at d={}: {}",
                        rep.stratum, t.at_degree, t.reason
                    )?;
                }
            }
        }
        Format::Json => {
            s = json_string(serde_json::json!({
                "genus": g,
                "comparison": comparison_json(rows),
                "sweeps": sweeps.iter().map(sweep_json).collect::<Vec<_>>(),
            }));
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record([
                "genus",
                "stratum",
                "component_label",
                "ref_s_num",
                "ref_s_den",
                "exact_match",
                "d",
                "slope_num",
                "slope_den",
            ])?;
            for c in rows {
                let e = c.estimate.as_ref();
                w.write_record([
                    g.to_string(),
                    c.reference.stratum.to_string(),
                    c.reference.label.as_str().to_string(),
                    c.reference.s.numer().to_string(),
                    c.reference.s.denom().to_string(),
                    c.exact_matches.map(|b| b.to_string()).unwrap_or_default(),
                    e.map(|e| e.d.to_string()).unwrap_or_default(),
                    e.map(|e| e.slope.numer().to_string()).unwrap_or_default(),
                    e.map(|e| e.slope.denom().to_string()).unwrap_or_default(),
                ])?;
            }
            s = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(s)
}

fn cmd_table(a: &TableArgs, format: Format) -> Result<String, Failure> {
    let rows: Vec<&ReferenceRow> = match a.genus {
        Some(g) => reference_rows(g).map_err(|e| usage(e.to_string()))?,
        None => reference_table().iter().collect(),
    };
    let mut s = String::new();
    match format {
        Format::Text => {
            for r in rows {
                reference_line(&mut s, r)?;
                writeln!(s)?;
            }
        }
        Format::Json => {
            let v: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| {
                    serde_json::json!({
                        "genus": r.genus,
                        "mu": r.stratum.mu(),
                        "label": r.label.as_str(),
                        "s": r.s.to_fraction_string(),
                    })
                })
                .collect();
            s = json_string(serde_json::Value::Array(v));
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["genus", "mu", "label", "s_num", "s_den"])?;
            for r in rows {
                w.write_record([
                    r.genus.to_string(),
                    r.stratum.parts_string(),
                    r.label.as_str().to_string(),
                    r.s.numer().to_string(),
                    r.s.denom().to_string(),
                ])?;
            }
            s = String::from_utf8(w.into_inner().map_err(|e| e.into_error())?)?;
        }
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String) {
        let mut out = Vec::new();
        let code = run(
            std::iter::once("origami").chain(args.iter().copied()),
            &mut out,
        );
        (code, String::from_utf8(out).unwrap())
    }

    #[test]
    fn degree_ranges() {
        assert_eq!(parse_degrees("5").unwrap(), 5..=5);
        assert_eq!(parse_degrees("3..7").unwrap(), 3..=7);
        assert_eq!(parse_degrees("3..=7").unwrap(), 3..=7);
        assert!(parse_degrees("0").is_err());
        assert!(parse_degrees("7..3").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        assert_eq!(
            run_capture(&["census", "--degree", "5", "--mu", "0", "--cache-dir", d]).0,
            2
        );
        assert_eq!(run_capture(&["limits", "--genus", "9", "--table"]).0, 2);
        assert_eq!(
            run_capture(&["classify", "--alpha", "(12)", "--beta", "(34)"]).0,
            2
        );
        assert_eq!(run_capture(&["frobnicate"]).0, 2);
    }

    #[test]
    fn census_text() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, out) = run_capture(&["census", "--degree", "2", "--mu", "2", "--cache-dir", d]);
        assert_eq!(code, 0);
        assert!(out.contains("N=0"), "{out}");
    }

    #[test]
    fn budget_failure_exits_one_without_leftovers() {
        let dir = tempfile::tempdir().unwrap();
        let d = dir.path().to_str().unwrap();
        let (code, _) = run_capture(&[
            "census",
            "--degree",
            "5",
            "--mu",
            "4",
            "--budget",
            "3",
            "--cache-dir",
            d,
        ]);
        assert_eq!(code, 1);
        assert_eq!(fs::read_dir(dir.path()).map(|r| r.count()).unwrap_or(0), 0);
    }
}
