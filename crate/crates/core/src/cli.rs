//! Command-line front end.
//!
//! Exit codes: 0 on success, 1 on usage or I/O errors (including exceeded
//! caps), 2 when a computed value contradicts an expected one.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::galois_model::{self, DegreeReport, MatrixGroup};
use crate::modring::{is_prime, MatrixMod, ResidueRing};
use crate::mumford;
use crate::symplectic::SymplecticSpace;
use crate::torsion::{parse_generator_rows, TorsionSubgroup};
use crate::DEFAULT_CAP;

#[derive(Debug, Parser)]
#[command(
    name = "mu-torsion",
    version,
    about = "Finite Galois-image models for torsion of abelian varieties"
)]
pub struct Cli {
    #[command(subcommand)]
    command: CommandArgs,
}

#[derive(Debug, Subcommand)]
enum CommandArgs {
    /// Compute m1(H) for generator rows given with --H.
    M1(CommonArgs),
    /// Pointwise stabilizer of H in a scenario group.
    Stabilizer(ScenarioArgs),
    /// Degree report plus the per-level cyclotomic degrees.
    Degrees(ScenarioArgs),
    /// Degree reports for a named scenario or a scenario file.
    Scenario(ScenarioArgs),
    /// Tensor-cube stabilizer and the failure of the strong property.
    VerifyMumford(CommonArgs),
    /// Run a scenario over every prime in --ell and summarize the ratios.
    Sweep(ScenarioArgs),
}

#[derive(Debug, Args)]
struct ScenarioArgs {
    /// cm, selfproduct, mumford or custom (custom needs --scenario-file).
    name: Option<ScenarioKind>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Debug, Args)]
struct CommonArgs {
    /// Comma-separated primes.
    #[arg(long, value_delimiter = ',')]
    ell: Vec<u64>,
    #[arg(long)]
    level: Option<u32>,
    #[arg(long)]
    g: Option<usize>,
    /// Generator rows, e.g. "[[1,0],[0,1]]".
    #[arg(long = "H")]
    h: Option<String>,
    #[arg(long)]
    scenario_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: u64,
    /// Worker threads; 0 lets the runtime decide.
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Constant C used for the weak-property witness, as "p" or "p/q".
    #[arg(long, default_value = "2")]
    mu_w_constant: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScenarioKind {
    Cm,
    Selfproduct,
    Mumford,
    Custom,
}

impl ScenarioKind {
    fn name(self) -> &'static str {
        match self {
            Self::Cm => "cm",
            Self::Selfproduct => "selfproduct",
            Self::Mumford => "mumford",
            Self::Custom => "custom",
        }
    }

    fn parse(text: &str) -> Option<Self> {
        Some(match text.trim() {
            "cm" => Self::Cm,
            "selfproduct" => Self::Selfproduct,
            "mumford" => Self::Mumford,
            "custom" => Self::Custom,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    M1,
    Stabilizer,
    Degrees,
    Scenario,
    VerifyMumford,
    Sweep,
}

/// Validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub scenario: Option<ScenarioKind>,
    pub ell_list: Vec<u64>,
    pub level: u32,
    pub g: Option<usize>,
    pub h_rows: Option<Vec<Vec<i64>>>,
    pub generators: Option<Vec<Vec<Vec<i64>>>>,
    pub input_path: Option<PathBuf>,
    pub output_path: Option<PathBuf>,
    pub format: Format,
    pub cap: u64,
    pub threads: usize,
    pub mu_w_constant: Ratio<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("{context}: {source}")]
    Compute { context: String, source: Error },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Compute {
                source: Error::ExpectationFailed(_),
                ..
            } => 2,
            _ => 1,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn compute(context: impl Into<String>) -> impl FnOnce(Error) -> CliError {
    let context = context.into();
    move |source| CliError::Compute { context, source }
}

/// Contents of a scenario file: `key = value` lines, `#` comments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScenarioFile {
    pub scenario: Option<ScenarioKind>,
    pub ell: Vec<u64>,
    pub level: Option<u32>,
    pub g: Option<usize>,
    pub generators: Option<Vec<Vec<Vec<i64>>>>,
    pub h: Option<Vec<Vec<i64>>>,
}

pub fn parse_scenario_file(text: &str) -> Result<ScenarioFile, CliError> {
    let mut out = ScenarioFile::default();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            usage(format!(
                "scenario file line {}: expected key = value",
                lineno + 1
            ))
        })?;
        let (key, value) = (key.trim(), value.trim());
        let bad = |what: &str| {
            usage(format!(
                "scenario file line {}: bad {what}: {value}",
                lineno + 1
            ))
        };
        match key {
            "scenario" => {
                out.scenario = Some(ScenarioKind::parse(value).ok_or_else(|| bad("scenario"))?)
            }
            "ell" => {
                out.ell = value
                    .trim_matches(|c| c == '[' || c == ']')
                    .split(',')
                    .map(|s| s.trim().parse::<u64>())
                    .collect::<Result<_, _>>()
                    .map_err(|_| bad("ell"))?
            }
            "level" => out.level = Some(value.parse().map_err(|_| bad("level"))?),
            "g" => out.g = Some(value.parse().map_err(|_| bad("g"))?),
            "generators" => {
                out.generators = Some(serde_json::from_str(value).map_err(|_| bad("generators"))?)
            }
            "H" => out.h = Some(parse_generator_rows(value).map_err(|_| bad("H"))?),
            other => {
                return Err(usage(format!(
                    "scenario file line {}: unknown key {other}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(out)
}

fn parse_ratio(text: &str) -> Option<Ratio<u64>> {
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p.trim().parse().ok()?, q.trim().parse().ok()?),
        None => (text.trim().parse().ok()?, 1),
    };
    (q != 0).then(|| Ratio::new(p, q))
}

impl RunConfig {
    fn from_args(
        command: Command,
        scenario: Option<ScenarioKind>,
        args: CommonArgs,
    ) -> Result<Self, CliError> {
        let file = match &args.scenario_file {
            Some(path) => parse_scenario_file(&std::fs::read_to_string(path)?)?,
            None => ScenarioFile::default(),
        };
        let h_rows = match &args.h {
            Some(text) => Some(parse_generator_rows(text).map_err(|e| usage(e.to_string()))?),
            None => file.h,
        };
        let ell_list = if args.ell.is_empty() {
            file.ell
        } else {
            args.ell
        };
        let config = Self {
            command,
            scenario: scenario.or(file.scenario),
            ell_list,
            level: args.level.or(file.level).unwrap_or(1),
            g: args.g.or(file.g),
            h_rows,
            generators: file.generators,
            input_path: args.scenario_file,
            output_path: args.out,
            format: args.format,
            cap: args.cap,
            threads: args.threads,
            mu_w_constant: parse_ratio(&args.mu_w_constant)
                .filter(|c| *c >= Ratio::from_integer(1))
                .ok_or_else(|| usage("--mu-w-constant must be a rational >= 1"))?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.ell_list.is_empty() {
            return Err(usage("--ell needs at least one prime"));
        }
        if let Some(&bad) = self.ell_list.iter().find(|&&l| !is_prime(l)) {
            return Err(usage(format!("{bad} is not prime")));
        }
        if self.cap == 0 {
            return Err(usage("--cap must be at least 1"));
        }
        if self.level == 0 {
            return Err(usage("--level must be at least 1"));
        }
        let needs_scenario = matches!(
            self.command,
            Command::Stabilizer | Command::Degrees | Command::Scenario | Command::Sweep
        );
        if needs_scenario && self.scenario.is_none() {
            return Err(usage(
                "a scenario name or --scenario-file with `scenario = ...` is required",
            ));
        }
        if self.command == Command::M1 && self.h_rows.is_none() {
            return Err(usage("m1 needs --H"));
        }
        Ok(())
    }
}

/// Top-level JSON document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub scenario: String,
    pub reports: Vec<DegreeReport>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<SweepSummary>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSummary {
    #[serde(with = "galois_model::ratio_string")]
    pub max_ratio: Ratio<u64>,
    #[serde(with = "galois_model::ratio_string")]
    pub min_ratio: Ratio<u64>,
    /// Ratios strictly increase along the prime list.
    pub monotone: bool,
}

impl SweepSummary {
    pub fn from_reports(reports: &[DegreeReport]) -> Option<Self> {
        let ratios: Vec<Ratio<u64>> = reports.iter().map(|r| r.ratio).collect();
        Some(Self {
            max_ratio: *ratios.iter().max()?,
            min_ratio: *ratios.iter().min()?,
            monotone: ratios.windows(2).all(|w| w[0] < w[1]),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct M1Line {
    ell: u64,
    level: u32,
    m1: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct StabilizerLine {
    ell: u64,
    level: u32,
    stabilizer_size: u64,
    stabilizer_elements: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct LevelDegrees {
    ell: u64,
    m: u32,
    cyclo_degree: u64,
    cyclo_intersection_degree: u64,
}

struct Built {
    group: MatrixGroup,
    h: TorsionSubgroup,
    stabilizer: MatrixGroup,
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn ratio_display(r: &Ratio<u64>) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn build(config: &RunConfig, kind: ScenarioKind, ell: u64) -> Result<Built, CliError> {
    let ctx = format!(
        "{} scenario, l = {ell}, level = {}",
        kind.name(),
        config.level
    );
    let cap = config.cap;
    let (group, default_h) = match kind {
        ScenarioKind::Cm => {
            galois_model::scenario_cm(config.g.unwrap_or(2), ell, config.level, cap)
                .map_err(compute(&ctx))?
        }
        ScenarioKind::Selfproduct => {
            galois_model::scenario_selfproduct(ell, config.level, cap).map_err(compute(&ctx))?
        }
        ScenarioKind::Mumford => {
            if config.level != 1 {
                return Err(usage(
                    "the mumford scenario is defined over F_l only (level 1)",
                ));
            }
            if config.h_rows.is_some() {
                return Err(usage(
                    "the mumford scenario always uses its Lagrangian subgroup",
                ));
            }
            let group = mumford::mumford_group(ell, cap).map_err(compute(&ctx))?;
            let h = mumford::lagrangian_h(ell).map_err(compute(&ctx))?;
            let stab = mumford::pointwise_stabilizer_in_image(ell, cap).map_err(compute(&ctx))?;
            let stabilizer =
                MatrixGroup::from_closed_set(group.space().clone(), stab).map_err(compute(&ctx))?;
            return Ok(Built {
                group,
                h,
                stabilizer,
            });
        }
        ScenarioKind::Custom => {
            let gens = config.generators.as_ref().ok_or_else(|| {
                usage("custom scenario needs `generators = [...]` in the scenario file")
            })?;
            let dim = gens
                .first()
                .map(Vec::len)
                .or(config.g.map(|g| 2 * g))
                .unwrap_or(2);
            if dim % 2 != 0 {
                return Err(usage("generators must act on an even-dimensional space"));
            }
            let ring = ResidueRing::new(ell, config.level).map_err(compute(&ctx))?;
            let space = SymplecticSpace::standard(dim / 2, ring).map_err(compute(&ctx))?;
            let mats = gens
                .iter()
                .map(|rows| MatrixMod::from_rows(ring, rows))
                .collect::<Result<Vec<_>, _>>()
                .map_err(compute(&ctx))?;
            let group = galois_model::close(&space, mats, cap).map_err(compute(&ctx))?;
            let h = TorsionSubgroup::trivial(ring, dim);
            (group, h)
        }
    };
    let h = match &config.h_rows {
        Some(rows) => TorsionSubgroup::from_rows(group.ring(), group.space().dim(), rows)
            .map_err(compute(&ctx))?,
        None if kind == ScenarioKind::Custom => return Err(usage("custom scenario needs H")),
        None => default_h,
    };
    let stabilizer = galois_model::stabilizer(&group, &h).map_err(compute(&ctx))?;
    Ok(Built {
        group,
        h,
        stabilizer,
    })
}

fn report_for(config: &RunConfig, kind: ScenarioKind, ell: u64) -> Result<DegreeReport, CliError> {
    if kind == ScenarioKind::Mumford {
        let mut reports = mumford::verify_mu_s_failure(&[ell], config.mu_w_constant, config.cap)
            .map_err(compute(format!("mumford scenario, l = {ell}")))?;
        return Ok(reports.remove(0));
    }
    let built = build(config, kind, ell)?;
    galois_model::degree_report_with_stabilizer(
        &built.group,
        &built.stabilizer,
        &built.h,
        config.mu_w_constant,
    )
    .map_err(compute(format!("{} scenario, l = {ell}", kind.name())))
}

fn render_reports(doc: &ReportDocument, notes: &[String], format: Format) -> String {
    if format == Format::Json {
        return to_json(doc);
    }
    let mut out = String::new();
    let _ = writeln!(out, "scenario: {}", doc.scenario);
    let _ = writeln!(
        out,
        "{:>5} {:>5} {:>3} {:>14} {:>12} {:>10} {:>8} {:>6}",
        "ell", "level", "m1", "deg_KH", "deg_cap_mu", "deg_mu_m1", "ratio", "mu_w_n"
    );
    for r in &doc.reports {
        let witness = r.mu_w_witness_n.map_or("-".to_string(), |n| n.to_string());
        let _ = writeln!(
            out,
            "{:>5} {:>5} {:>3} {:>14} {:>12} {:>10} {:>8} {:>6}",
            r.ell,
            r.level,
            r.m1,
            r.deg_kh,
            r.deg_cyclo_intersection,
            r.deg_cyclo_at_m1,
            ratio_display(&r.ratio),
            witness
        );
        if let (Some(size), Some(order)) = (r.stabilizer_size, r.image_order) {
            let _ = writeln!(
                out,
                "      stabilizer size {size} within an image of order {order}"
            );
        }
    }
    if let Some(s) = &doc.summary {
        let _ = writeln!(
            out,
            "summary: min ratio {}, max ratio {}, strictly increasing: {}",
            ratio_display(&s.min_ratio),
            ratio_display(&s.max_ratio),
            s.monotone
        );
    }
    for note in notes {
        let _ = writeln!(out, "note: {note}");
    }
    out
}

fn scenario_notes(config: &RunConfig, kind: ScenarioKind) -> Result<Vec<String>, CliError> {
    let mut notes = Vec::new();
    for &ell in &config.ell_list {
        if kind == ScenarioKind::Mumford {
            if ell == 2 {
                notes.push(
                    "l = 2 is degenerate: -1 = 1 and the stabilizer collapses to the identity"
                        .into(),
                );
            }
            continue;
        }
        let built = build(config, kind, ell)?;
        if !galois_model::multiplier_surjective(&built.group)
            .map_err(compute("multiplier image"))?
        {
            notes.push(format!(
                "l = {ell}: ramified-type (multiplier not surjective)"
            ));
        }
    }
    Ok(notes)
}

/// Runs a validated configuration and returns the rendered output.
pub fn execute(config: &RunConfig) -> Result<String, CliError> {
    let body = || -> Result<String, CliError> {
        match config.command {
            Command::M1 => run_m1(config),
            Command::Stabilizer => run_stabilizer(config),
            Command::Degrees => run_degrees(config),
            Command::Scenario | Command::Sweep => run_scenario(config),
            Command::VerifyMumford => {
                let mut cfg = config.clone();
                cfg.scenario = Some(ScenarioKind::Mumford);
                cfg.level = 1;
                run_scenario(&cfg)
            }
        }
    };
    if config.threads > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| usage(e.to_string()))?;
        pool.install(body)
    } else {
        body()
    }
}

fn run_m1(config: &RunConfig) -> Result<String, CliError> {
    let rows = config.h_rows.as_ref().expect("validated");
    let dim = rows
        .first()
        .map(Vec::len)
        .unwrap_or(2 * config.g.unwrap_or(1));
    let g = config.g.unwrap_or(dim / 2);
    if dim != 2 * g {
        return Err(usage(format!(
            "--H rows have length {dim} but --g {g} needs {}",
            2 * g
        )));
    }
    let mut lines = Vec::new();
    for &ell in &config.ell_list {
        let ctx = format!("m1, l = {ell}");
        let ring = ResidueRing::new(ell, config.level).map_err(compute(&ctx))?;
        let space = SymplecticSpace::standard(g, ring).map_err(compute(&ctx))?;
        let h = TorsionSubgroup::from_rows(ring, dim, rows).map_err(compute(&ctx))?;
        let m1 = space.m1(&h).map_err(compute(&ctx))?;
        lines.push(M1Line {
            ell,
            level: config.level,
            m1,
        });
    }
    Ok(match config.format {
        Format::Json => to_json(&lines),
        Format::Table => lines
            .iter()
            .map(|l| format!("ell = {}, level = {}: m1 = {}\n", l.ell, l.level, l.m1))
            .collect(),
    })
}

fn run_stabilizer(config: &RunConfig) -> Result<String, CliError> {
    let kind = config.scenario.expect("validated");
    let mut lines = Vec::new();
    for &ell in &config.ell_list {
        let built = build(config, kind, ell)?;
        let mut elements: Vec<Vec<u64>> = built
            .stabilizer
            .elements()
            .expect("stabilizers are materialized")
            .map(|m| m.entries().to_vec())
            .collect();
        elements.sort();
        lines.push(StabilizerLine {
            ell,
            level: built.group.ring().level(),
            stabilizer_size: elements.len() as u64,
            stabilizer_elements: elements,
        });
    }
    Ok(match config.format {
        Format::Json => to_json(&lines),
        Format::Table => {
            let mut out = String::new();
            for l in &lines {
                let _ = writeln!(
                    out,
                    "ell = {}, level = {}: stabilizer size {}",
                    l.ell, l.level, l.stabilizer_size
                );
                for e in &l.stabilizer_elements {
                    let _ = writeln!(out, "  {e:?}");
                }
            }
            out
        }
    })
}

fn run_degrees(config: &RunConfig) -> Result<String, CliError> {
    let kind = config.scenario.expect("validated");
    let mut levels = Vec::new();
    for &ell in &config.ell_list {
        let built = build(config, kind, ell)?;
        let ctx = format!("degrees, l = {ell}");
        for m in 0..=built.group.ring().level() {
            levels.push(LevelDegrees {
                ell,
                m,
                cyclo_degree: galois_model::cyclo_degree(&built.group, m).map_err(compute(&ctx))?,
                cyclo_intersection_degree: galois_model::cyclo_intersection_degree_with(
                    &built.group,
                    &built.stabilizer,
                    m,
                )
                .map_err(compute(&ctx))?,
            });
        }
    }
    let reports = run_scenario(config)?;
    Ok(match config.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc {
                document: ReportDocument,
                levels: Vec<LevelDegrees>,
            }
            let document: ReportDocument = serde_json::from_str(&reports).expect("own output");
            to_json(&Doc { document, levels })
        }
        Format::Table => {
            let mut out = reports;
            let _ = writeln!(
                out,
                "{:>5} {:>3} {:>12} {:>14}",
                "ell", "m", "deg_mu_m", "deg_cap_mu_m"
            );
            for l in &levels {
                let _ = writeln!(
                    out,
                    "{:>5} {:>3} {:>12} {:>14}",
                    l.ell, l.m, l.cyclo_degree, l.cyclo_intersection_degree
                );
            }
            out
        }
    })
}

fn run_scenario(config: &RunConfig) -> Result<String, CliError> {
    let kind = config.scenario.expect("validated");
    let reports = config
        .ell_list
        .iter()
        .map(|&ell| report_for(config, kind, ell))
        .collect::<Result<Vec<_>, _>>()?;
    let summary = (config.command == Command::Sweep)
        .then(|| SweepSummary::from_reports(&reports))
        .flatten();
    let doc = ReportDocument {
        scenario: kind.name().to_string(),
        reports,
        summary,
    };
    let notes = if config.format == Format::Table {
        scenario_notes(config, kind)?
    } else {
        Vec::new()
    };
    Ok(render_reports(&doc, &notes, config.format))
}

/// Executes the configuration, writes the output and returns the exit code.
pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(text) => {
            let written = match &config.output_path {
                Some(path) => std::fs::write(path, &text),
                None => {
                    print!("{text}");
                    Ok(())
                }
            };
            match written {
                Ok(()) => 0,
                Err(e) => {
                    eprintln!("error: {e}");
                    1
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Parses arguments into a [`RunConfig`].
pub fn parse_config<I, T>(args: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(args).map_err(|e| usage(e.to_string()))?;
    let (command, scenario, common) = match cli.command {
        CommandArgs::M1(c) => (Command::M1, None, c),
        CommandArgs::VerifyMumford(c) => (Command::VerifyMumford, Some(ScenarioKind::Mumford), c),
        CommandArgs::Stabilizer(s) => (Command::Stabilizer, s.name, s.common),
        CommandArgs::Degrees(s) => (Command::Degrees, s.name, s.common),
        CommandArgs::Scenario(s) => (Command::Scenario, s.name, s.common),
        CommandArgs::Sweep(s) => (Command::Sweep, s.name, s.common),
    };
    RunConfig::from_args(command, scenario, common)
}

/// Entry point used by the binary.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    match Cli::try_parse_from(&args) {
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let _ = e.print();
            return 1;
        }
        Ok(_) => {}
    }
    match parse_config(args) {
        Ok(config) => run(&config),
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
