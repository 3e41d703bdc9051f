//! Command-line front end: generate example measures, run pin and hull
//! experiments, summarize files, and drive the randomized property suites.
//!
//! Exit codes: 0 success, 1 input or contract error, 2 non-convergence.
//! All outputs are written atomically and serialize canonically, so equal
//! configurations and seeds produce byte-identical files.

use std::path::{Path as FsPath, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::generate::{generate, GeneratorKind};
use crate::group::{ActionSide, FiniteGroup};
use crate::hull::{run_hull, verify_hull_element, HullReport, HullRun, SubsetOrdering};
use crate::io::{
    atomic_write, load_group, load_measure, load_space, save_measure, to_canonical_json,
    AnyMeasure,
};
use crate::markov::{is_markov, markov_defect, markovianise_set};
use crate::measure::PathMeasure;
use crate::selfcheck::{self, CheckProfile, CheckReport};
use crate::space::{Path, PathSpace};
use crate::weight::{Exact, Mode, Weight};

#[derive(Parser)]
#[command(name = "markovhull", version, about = "Exact path measures, pin operators, and Markov hulls")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a measure from one of the named families.
    Generate(GenerateArgs),
    /// Apply the pin operator for each listed grid index in order.
    Markovianise(MarkovianiseArgs),
    /// Iterate pins to the hull, writing the limit, a trace, and a report.
    Hull(HullArgs),
    /// Run the randomized property suites and print a JSON report.
    Check(CheckArgs),
    /// Summarize a space or measure file.
    Info(InfoArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Dirac,
    CorrelatedPair,
    Chain,
    RandomMuInvariant,
    GroupInvariant,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Left,
    Right,
}

impl From<SideArg> for ActionSide {
    fn from(side: SideArg) -> ActionSide {
        match side {
            SideArg::Left => ActionSide::Left,
            SideArg::Right => ActionSide::Right,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Exact,
    Float,
}

#[derive(Args)]
struct GenerateArgs {
    /// Path-space file.
    #[arg(long)]
    space: PathBuf,
    /// Measure family.
    #[arg(long, value_enum)]
    kind: KindArg,
    /// State labels of the single path, comma separated (dirac only).
    #[arg(long, value_delimiter = ',')]
    path: Option<Vec<String>>,
    /// Group for group-invariant: z<N>, s3, or a multiplication-table file.
    #[arg(long)]
    group: Option<String>,
    /// Side the group translates from.
    #[arg(long, value_enum, default_value = "left")]
    side: SideArg,
    /// Arithmetic of the generated weights.
    #[arg(long, value_enum, default_value = "exact")]
    mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output measure file.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct MarkovianiseArgs {
    /// Input measure file.
    #[arg(long)]
    input: PathBuf,
    /// Grid indices to pin, comma separated, applied left to right.
    #[arg(long, value_delimiter = ',', num_args = 0.., default_value = "")]
    pins: Vec<String>,
    /// Output measure file.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct HullArgs {
    /// Input measure file.
    #[arg(long)]
    input: PathBuf,
    /// "sweep", "random:<seed>", or an explicit comma list of pins.
    #[arg(long, default_value = "sweep")]
    ordering: String,
    /// Fixed-point tolerance: a rational in exact mode, a float otherwise.
    #[arg(long)]
    tol: Option<String>,
    /// Pin applications before giving up. Defaults to six sweeps.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Output file for the limit measure.
    #[arg(long)]
    output: PathBuf,
    /// Trace CSV path. Defaults to the output stem plus ".trace.csv".
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Report JSON path. Defaults to the output stem plus ".report.json".
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Tensor,
    Markov,
    Invariance,
    All,
}

#[derive(Args)]
struct CheckArgs {
    /// Which property suites to run.
    #[arg(long, value_enum, default_value = "all")]
    suite: SuiteArg,
    /// Randomized cases per suite.
    #[arg(long, default_value_t = 50)]
    cases: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
struct InfoArgs {
    /// Measure file to summarize.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Space file to summarize.
    #[arg(long)]
    space: Option<PathBuf>,
}

/// Parse arguments and dispatch, returning the process exit code.
pub fn run() -> u8 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Generate(args) => cmd_generate(args),
        Command::Markovianise(args) => cmd_markovianise(args),
        Command::Hull(args) => cmd_hull(args),
        Command::Check(args) => cmd_check(args),
        Command::Info(args) => cmd_info(args),
    }
}

fn fmt_weight<W: Weight>(w: &W) -> String {
    match w.to_json() {
        serde_json::Value::String(s) => s,
        other => other.to_string(),
    }
}

fn enum_cap_from_env() -> Result<Option<u64>> {
    match std::env::var("MARKOVHULL_ENUM_CAP") {
        Ok(raw) => raw
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::Parse(format!("MARKOVHULL_ENUM_CAP must be an integer, got '{raw}'"))),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(Error::Parse(format!("MARKOVHULL_ENUM_CAP: {e}"))),
    }
}

fn cmd_generate(args: GenerateArgs) -> Result<u8> {
    let space = load_space(&args.space)?;
    let measure = match args.mode {
        ModeArg::Exact => AnyMeasure::Exact(build_measure::<Exact>(&space, &args)?),
        ModeArg::Float => AnyMeasure::Float(build_measure::<f64>(&space, &args)?),
    };
    save_measure(&args.output, &measure)?;
    println!(
        "wrote {} ({} atoms, mass {})",
        args.output.display(),
        measure.atom_count(),
        measure.total_mass_string()
    );
    Ok(0)
}

fn build_measure<W: Weight>(space: &Arc<PathSpace>, args: &GenerateArgs) -> Result<PathMeasure<W>> {
    if let Some(labels) = &args.path {
        if !matches!(args.kind, KindArg::Dirac) {
            return Err(Error::Parse("--path only applies to --kind dirac".into()));
        }
        let ids = labels
            .iter()
            .map(|l| {
                space.states().index_of(l).ok_or_else(|| Error::UnknownLabel(l.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        return PathMeasure::dirac(space.clone(), Path::new(ids));
    }
    let kind = match args.kind {
        KindArg::Dirac => GeneratorKind::Dirac,
        KindArg::CorrelatedPair => GeneratorKind::CorrelatedPair,
        KindArg::Chain => GeneratorKind::Chain,
        KindArg::RandomMuInvariant => GeneratorKind::MuInvariant,
        KindArg::GroupInvariant => {
            let spec = args.group.as_deref().ok_or_else(|| {
                Error::Parse("--kind group-invariant needs --group".into())
            })?;
            GeneratorKind::GroupInvariant { group: parse_group_ref(spec)?, side: args.side.into() }
        }
    };
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    generate(space, &kind, &mut rng)
}

fn parse_group_ref(spec: &str) -> Result<FiniteGroup> {
    if let Some(rest) = spec.strip_prefix('z').or_else(|| spec.strip_prefix('Z')) {
        if let Ok(n) = rest.parse::<usize>() {
            return FiniteGroup::cyclic(n);
        }
    }
    if spec.eq_ignore_ascii_case("s3") {
        return Ok(FiniteGroup::symmetric3());
    }
    load_group(FsPath::new(spec))
}

fn parse_pins(raw: &[String]) -> Result<Vec<usize>> {
    raw.iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| {
            s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad pin index '{s}'")))
        })
        .collect()
}

fn cmd_markovianise(args: MarkovianiseArgs) -> Result<u8> {
    let pins = parse_pins(&args.pins)?;
    let measure = load_measure(&args.input)?;
    let image = match &measure {
        AnyMeasure::Exact(m) => AnyMeasure::Exact(apply_pins(m, &pins)?),
        AnyMeasure::Float(m) => AnyMeasure::Float(apply_pins(m, &pins)?),
    };
    save_measure(&args.output, &image)?;
    println!("wrote {} ({} atoms)", args.output.display(), image.atom_count());
    Ok(0)
}

fn apply_pins<W: Weight>(m: &PathMeasure<W>, pins: &[usize]) -> Result<PathMeasure<W>> {
    let image = markovianise_set(m, pins)?;
    for &pin in pins {
        let before = markov_defect(m, pin)?;
        let after = markov_defect(&image, pin)?;
        println!("pin {pin}: defect {} -> {}", fmt_weight(&before), fmt_weight(&after));
    }
    Ok(image)
}

fn parse_ordering(spec: &str) -> Result<SubsetOrdering> {
    if spec == "sweep" {
        return Ok(SubsetOrdering::FullSweep);
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed =
            seed.parse::<u64>().map_err(|_| Error::Parse(format!("bad seed in '{spec}'")))?;
        return Ok(SubsetOrdering::Random { seed });
    }
    let pins = spec
        .split(',')
        .map(|p| {
            p.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad pin index '{p}'")))
        })
        .collect::<Result<Vec<usize>>>()?;
    Ok(SubsetOrdering::Explicit(pins))
}

fn parse_tol<W: Weight>(spec: Option<&str>) -> Result<W> {
    let Some(spec) = spec else {
        return Ok(W::default_tol());
    };
    let value = match W::MODE {
        Mode::Exact => serde_json::Value::String(spec.to_string()),
        Mode::Float => {
            let f: f64 =
                spec.parse().map_err(|_| Error::Parse(format!("bad tolerance '{spec}'")))?;
            serde_json::Value::from(f)
        }
    };
    let tol = W::from_json(&value)?;
    if tol.is_negative() {
        return Err(Error::BadWeight);
    }
    Ok(tol)
}

fn cmd_hull(args: HullArgs) -> Result<u8> {
    let ordering = parse_ordering(&args.ordering)?;
    match load_measure(&args.input)? {
        AnyMeasure::Exact(m) => hull_impl(&m, &args, &ordering, AnyMeasure::Exact),
        AnyMeasure::Float(m) => hull_impl(&m, &args, &ordering, AnyMeasure::Float),
    }
}

fn hull_impl<W: Weight>(
    m: &PathMeasure<W>,
    args: &HullArgs,
    ordering: &SubsetOrdering,
    wrap: fn(PathMeasure<W>) -> AnyMeasure,
) -> Result<u8> {
    let tol = parse_tol::<W>(args.tol.as_deref())?;
    let max_steps = args.max_steps.unwrap_or(6 * m.space().len() + 6);
    let run = run_hull(m, ordering, &tol, max_steps)?;
    let report = verify_hull_element(&run.measure, m, &tol)?;
    let trace_path =
        args.trace.clone().unwrap_or_else(|| args.output.with_extension("trace.csv"));
    let report_path =
        args.report.clone().unwrap_or_else(|| args.output.with_extension("report.json"));
    save_measure(&args.output, &wrap(run.measure.clone()))?;
    atomic_write(&trace_path, run.trace.to_csv().as_bytes())?;
    atomic_write(&report_path, to_canonical_json(&report_json(&run, &report))?.as_bytes())?;
    println!(
        "{} after {} steps; max defect {}",
        if run.converged { "converged" } else { "did not converge" },
        run.steps,
        fmt_weight(&report.max_defect)
    );
    Ok(if run.converged && report.all_hold() { 0 } else { 2 })
}

fn report_json<W: Weight>(run: &HullRun<W>, report: &HullReport<W>) -> serde_json::Value {
    serde_json::json!({
        "converged": run.converged,
        "steps": run.steps,
        "max_defect": fmt_weight(&report.max_defect),
        "is_markov": report.is_markov,
        "is_strong_markov": report.is_strong_markov,
        "chain_distance": fmt_weight(&report.chain_distance),
        "matches_chain_product": report.matches_chain_product,
        "mass_preserved": report.mass_preserved,
        "marginals_preserved": report.marginals_preserved,
        "verified": report.all_hold(),
    })
}

fn cmd_check(args: CheckArgs) -> Result<u8> {
    if args.cases == 0 {
        return Err(Error::Parse("--cases must be at least 1".into()));
    }
    let profile = CheckProfile::scaled(args.cases);
    let seed = args.seed;
    let reports: Vec<CheckReport> = match args.suite {
        SuiteArg::Tensor => vec![
            selfcheck::tensor_characterization_suite(profile.tensor_cases, seed)?,
            selfcheck::bilinearity_suite(profile.bilinearity_cases, seed.wrapping_add(1))?,
            selfcheck::associativity_suite(profile.associativity_cases, seed.wrapping_add(2))?,
        ],
        SuiteArg::Markov => vec![
            selfcheck::commutativity_suite(profile.commutativity_measures, seed.wrapping_add(3))?,
            selfcheck::marginal_preservation_suite(
                profile.marginal_measures,
                seed.wrapping_add(4),
            )?,
            selfcheck::hull_suite(profile.hull_runs, profile.hull_orderings, seed.wrapping_add(5))?,
            selfcheck::limit_stability_suite(
                profile.stability_sequences,
                seed.wrapping_add(7),
            )?,
            selfcheck::shift_equivariance_suite(
                profile.equivariance_cases,
                seed.wrapping_add(8),
            )?,
            selfcheck::worked_fixture_suite()?,
        ],
        SuiteArg::Invariance => vec![selfcheck::invariance_suite(
            profile.invariance_measures,
            seed.wrapping_add(6),
        )?],
        SuiteArg::All => selfcheck::run_all(&profile, seed)?,
    };
    for report in &reports {
        eprintln!(
            "{} {} ({})",
            if report.passed { "pass" } else { "FAIL" },
            report.name,
            report.detail
        );
    }
    let doc: Vec<serde_json::Value> = reports
        .iter()
        .map(|r| {
            serde_json::json!({
                "name": r.name,
                "cases": r.cases,
                "passed": r.passed,
                "detail": r.detail,
            })
        })
        .collect();
    print!("{}", to_canonical_json(&doc)?);
    Ok(if reports.iter().all(|r| r.passed) { 0 } else { 1 })
}

fn cmd_info(args: InfoArgs) -> Result<u8> {
    if args.input.is_none() && args.space.is_none() {
        return Err(Error::Parse("info needs --input or --space".into()));
    }
    let cap = enum_cap_from_env()?;
    if let Some(path) = &args.space {
        print_space_info(&load_space(path)?, cap)?;
    }
    if let Some(path) = &args.input {
        match load_measure(path)? {
            AnyMeasure::Exact(m) => print_measure_info(&m, cap)?,
            AnyMeasure::Float(m) => print_measure_info(&m, cap)?,
        }
    }
    Ok(0)
}

fn print_space_info(space: &Arc<PathSpace>, cap: Option<u64>) -> Result<()> {
    let times: Vec<String> = space.grid().times().iter().map(|t| t.to_string()).collect();
    println!("grid: [{}]", times.join(", "));
    println!("states: [{}]", space.states().labels().join(", "));
    println!("cyclic: {}", space.is_cyclic());
    match space.step_bound() {
        Some(bound) => println!("step bound: {bound}"),
        None => println!("step bound: none"),
    }
    match space.count_paths(cap) {
        Ok(count) => println!("admissible paths: {count}"),
        Err(Error::EnumerationTooLarge(..)) => {
            println!("admissible paths: not counted (raw bound exceeds cap)");
        }
        Err(e) => return Err(e),
    }
    Ok(())
}

fn print_measure_info<W: Weight>(m: &PathMeasure<W>, cap: Option<u64>) -> Result<()> {
    print_space_info(m.space(), cap)?;
    println!("mode: {}", W::MODE);
    println!("atoms: {}", m.atom_count());
    println!("total mass: {}", fmt_weight(&m.total_mass()));
    for pin in m.space().interior_pins() {
        println!("defect at pin {pin}: {}", fmt_weight(&markov_defect(m, pin)?));
    }
    println!("markov: {}", is_markov(m, &W::default_tol())?);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ordering_specs_parse() {
        assert_eq!(parse_ordering("sweep").unwrap(), SubsetOrdering::FullSweep);
        assert_eq!(parse_ordering("random:9").unwrap(), SubsetOrdering::Random { seed: 9 });
        assert_eq!(parse_ordering("2,1,2").unwrap(), SubsetOrdering::Explicit(vec![2, 1, 2]));
        assert!(parse_ordering("random:x").is_err());
        assert!(parse_ordering("1,no").is_err());
    }

    #[test]
    fn tolerance_parses_per_mode() {
        let exact: Exact = parse_tol(Some("1/4")).unwrap();
        assert_eq!(exact, <Exact as Weight>::ratio(1, 4));
        let default_exact: Exact = parse_tol(None).unwrap();
        assert!(default_exact.is_zero());
        let float: f64 = parse_tol(Some("1e-9")).unwrap();
        assert_eq!(float, 1e-9);
        assert!(parse_tol::<Exact>(Some("-1/2")).is_err());
    }

    #[test]
    fn group_refs_resolve_builtins() {
        assert_eq!(parse_group_ref("z4").unwrap().order(), 4);
        assert_eq!(parse_group_ref("s3").unwrap().order(), 6);
        assert!(parse_group_ref("/nonexistent/table.json").is_err());
    }

    #[test]
    fn pin_lists_parse() {
        assert_eq!(parse_pins(&["1".into(), "2".into()]).unwrap(), vec![1, 2]);
        assert_eq!(parse_pins(&[String::new()]).unwrap(), Vec::<usize>::new());
        assert!(parse_pins(&["x".into()]).is_err());
    }
}
