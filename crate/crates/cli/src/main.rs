//! `keller-lab`: catalog validation, single operations and experiment runs.
//!
//! Exit codes: 0 success, 2 assertion failure or module error, 3 input
//! error, 4 numerical non-convergence. Numbers are printed to 12
//! significant digits.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use keller_core::autgroup::{decompose_automorphism, expand_word, invert_word, json::word_to_json, TameWord};
use keller_core::charset::build_characteristic_set;
use keller_core::fibercount::{geometric_degree_report, DEFAULT_TOL, DEFAULT_TRIALS};
use keller_core::lab::{
    parse_catalog, run_experiment_with_workers, sig, with_workers, CatalogEntry, DomainSpec, ErrorClass,
    ExperimentConfig, ExperimentKind, MapCatalog, Report, EXIT_ASSERTION, EXIT_INPUT, EXIT_PASS,
};
use keller_core::polycore::json::{map_to_json, MapJson};
use keller_core::polycore::{compose_maps, PlanarPolyMap};
use keller_core::tracts::{dual_map, tract_search_report, SearchBounds, TractJson};
use keller_core::volmetric::{rho_d, SamplingDomain};

#[derive(Parser)]
#[command(name = "keller-lab", version, about = "Experiments on planar polynomial maps with constant Jacobian")]
struct Cli {
    /// Map catalog (JSON). The bundled catalog is used when omitted.
    #[arg(long, global = true, value_name = "FILE")]
    catalog: Option<PathBuf>,
    /// Worker threads. Changes wall time only, never results.
    #[arg(long, global = true, value_name = "N")]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a catalog and re-derive every tag.
    Validate { catalog: PathBuf },
    /// Exact composition f ∘ g.
    Compose {
        f: String,
        g: String,
        /// Print the result as map JSON.
        #[arg(long)]
        json: bool,
    },
    /// Geometric degree by fiber counting at random targets.
    Degree {
        name: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tame decomposition of an automorphism.
    Decompose {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Exact inverse of an automorphism.
    Invert {
        name: String,
        #[arg(long)]
        json: bool,
    },
    /// Monte Carlo estimate of the distance between two maps.
    Rho(RhoArgs),
    /// Run one experiment and write its report.
    Experiment(ExperimentArgs),
    /// Asymptotic tracts.
    Tracts {
        #[command(subcommand)]
        command: TractsCommand,
    },
    /// Characteristic sets.
    Charset {
        #[command(subcommand)]
        command: CharsetCommand,
    },
}

#[derive(Args)]
struct RhoArgs {
    f: String,
    g: String,
    /// `ball:R` or `charset:FILE`.
    #[arg(long, default_value = "ball:1")]
    domain: DomainSpec,
    #[arg(long, default_value_t = 100_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write the measurement as JSON.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    kind: ExperimentKind,
    /// Experiment config, or an earlier report to replay.
    #[arg(long, value_name = "FILE")]
    config: PathBuf,
    /// Report destination.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Contraction ratios as CSV, one row per scale.
    #[arg(long, value_name = "FILE")]
    csv: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TractsCommand {
    /// Search canonical tracts within degree bounds.
    Search {
        name: String,
        #[arg(long)]
        alpha_max: u32,
        #[arg(long)]
        beta_max: u32,
        #[arg(long)]
        phi_deg: u32,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum CharsetCommand {
    /// Build a characteristic set, verify it and write it as JSON.
    Build {
        #[arg(long, value_name = "FILE")]
        out: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        radius: f64,
        #[arg(long, default_value_t = 3)]
        slices: usize,
        #[arg(long, default_value_t = 2)]
        bundles: usize,
        #[arg(long, default_value_t = 0.0)]
        fatten: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Why a command stopped early.
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn module(class: ErrorClass, message: impl Into<String>) -> Self {
        Failure { code: class.exit_code(), message: message.into() }
    }
}

type Outcome = Result<i32, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT as u8 } else { EXIT_PASS as u8 });
        }
    };
    let code = match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    };
    ExitCode::from(code as u8)
}

fn run(cli: Cli) -> Outcome {
    if let Command::Validate { catalog } = &cli.command {
        return validate(catalog);
    }
    let catalog = load_catalog(cli.catalog.as_deref())?;
    let workers = cli.workers;
    with_workers(workers, || dispatch(cli.command, &catalog)).map_err(|e| Failure::input(e.to_string()))?
}

fn dispatch(command: Command, catalog: &MapCatalog) -> Outcome {
    match command {
        Command::Validate { .. } => unreachable!("handled before loading a catalog"),
        Command::Compose { f, g, json } => compose(catalog, &f, &g, json),
        Command::Degree { name, trials, seed } => degree(catalog, &name, trials, seed),
        Command::Decompose { name, json } => decompose(catalog, &name, json),
        Command::Invert { name, json } => invert(catalog, &name, json),
        Command::Rho(args) => rho(catalog, args),
        Command::Experiment(args) => experiment(catalog, args),
        Command::Tracts { command: TractsCommand::Search { name, alpha_max, beta_max, phi_deg, out } } => {
            tracts_search(catalog, &name, SearchBounds::new(alpha_max, beta_max, phi_deg), out.as_deref())
        }
        Command::Charset { command: CharsetCommand::Build { out, radius, slices, bundles, fatten, seed } } => {
            charset_build(&out, radius, slices, bundles, fatten, seed)
        }
    }
}

fn load_catalog(path: Option<&Path>) -> Result<MapCatalog, Failure> {
    match path {
        None => Ok(MapCatalog::bundled()),
        Some(p) => parse_catalog(p).map_err(|e| Failure::input(format!("{}: {e}", p.display()))),
    }
}

fn entry<'a>(catalog: &'a MapCatalog, name: &str) -> Result<&'a CatalogEntry, Failure> {
    catalog
        .get(name)
        .ok_or_else(|| Failure::input(format!("no map named `{name}`; known maps: {}", catalog.names().join(", "))))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    let mut text = contents.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    std::fs::write(path, text).map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}

fn print_map(label: &str, f: &PlanarPolyMap, json: bool) {
    if json {
        println!("{}", map_to_json(f));
    } else {
        println!("{label} = {f}");
    }
}

fn validate(path: &Path) -> Outcome {
    let catalog = parse_catalog(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    println!("{}: {} maps, tags consistent", path.display(), catalog.len());
    for e in &catalog.entries {
        let tags: Vec<String> =
            e.tags.iter().map(|t| serde_json::to_value(t).expect("tag").as_str().unwrap_or("").to_string()).collect();
        let degree = e.expected_degree.map(|d| format!(" degree {d}")).unwrap_or_default();
        println!("  {:<14} [{}]{degree}  {}", e.name, tags.join(", "), e.map);
    }
    Ok(EXIT_PASS)
}

fn compose(catalog: &MapCatalog, f: &str, g: &str, json: bool) -> Outcome {
    let h = compose_maps(&entry(catalog, f)?.map, &entry(catalog, g)?.map);
    print_map(&format!("{f}∘{g}"), &h, json);
    if !json {
        println!("degree {}, keller: {}", h.degree(), h.is_keller());
    }
    Ok(EXIT_PASS)
}

fn degree(catalog: &MapCatalog, name: &str, trials: usize, seed: u64) -> Outcome {
    if trials == 0 {
        return Err(Failure::input("trials must be positive"));
    }
    let e = entry(catalog, name)?;
    let r = geometric_degree_report(&e.map, trials, seed, DEFAULT_TOL)
        .map_err(|err| Failure::module(ErrorClass::of_fiber(&err), format!("degree({name}): {err}")))?;
    println!("geometric degree of {name}: {}", r.degree);
    println!("Bezout bound: {}", r.bezout_bound);
    println!("trials: {trials} (seed {seed}), agreement: {}", sig(r.agreement()));
    match e.expected_degree {
        Some(d) if d as usize != r.degree => {
            println!("expected degree {d}: MISMATCH");
            Ok(EXIT_ASSERTION)
        }
        Some(d) => {
            println!("expected degree {d}: ok");
            Ok(EXIT_PASS)
        }
        None => Ok(EXIT_PASS),
    }
}

fn decompose_entry(catalog: &MapCatalog, name: &str) -> Result<(PlanarPolyMap, TameWord), Failure> {
    let f = entry(catalog, name)?.map.clone();
    let w = decompose_automorphism(&f)
        .map_err(|err| Failure::module(ErrorClass::Module, format!("decompose({name}): {err}")))?;
    Ok((f, w))
}

fn decompose(catalog: &MapCatalog, name: &str, json: bool) -> Outcome {
    let (f, w) = decompose_entry(catalog, name)?;
    let exact = expand_word(&w) == f;
    if json {
        println!("{}", word_to_json(&w));
    } else {
        println!("{name} = {w}");
        println!("{} factors; expansion reproduces the map: {exact}", w.len());
    }
    Ok(if exact { EXIT_PASS } else { EXIT_ASSERTION })
}

fn invert(catalog: &MapCatalog, name: &str, json: bool) -> Outcome {
    let (f, w) = decompose_entry(catalog, name)?;
    let inv = expand_word(&invert_word(&w));
    let exact = compose_maps(&f, &inv) == PlanarPolyMap::identity();
    print_map(&format!("{name}⁻¹"), &inv, json);
    if !json {
        println!("{name}∘{name}⁻¹ = id exactly: {exact}");
    }
    Ok(if exact { EXIT_PASS } else { EXIT_ASSERTION })
}

fn domain(spec: &DomainSpec) -> Result<SamplingDomain, Failure> {
    spec.build().map_err(|e| Failure::input(e.to_string()))
}

fn rho(catalog: &MapCatalog, a: RhoArgs) -> Outcome {
    let (f, g) = (entry(catalog, &a.f)?, entry(catalog, &a.g)?);
    let d = domain(&a.domain)?;
    let start = Instant::now();
    let e = rho_d(&f.map, &g.map, &d, a.samples, a.seed).map_err(|err| {
        let class = ErrorClass::of_vol(&err);
        match err {
            keller_core::volmetric::VolError::TooFewSamples { .. } => Failure::input(err.to_string()),
            _ => Failure::module(class, format!("rho({}, {}): {err}", a.f, a.g)),
        }
    })?;
    let wall_time_ms = start.elapsed().as_millis() as u64;
    println!("rho({}, {}) = {} ± {}", a.f, a.g, sig(e.value), sig(e.stderr));
    println!("domain {}, samples {}, seed {}", d.describe(), a.samples, a.seed);
    if let Some(out) = &a.out {
        let doc = json!({
            "operation": "rho",
            "inputs": [a.f, a.g, d.describe()],
            "seed": a.seed,
            "samples": a.samples,
            "value": e.value,
            "stderr": e.stderr,
            "wall_time_ms": wall_time_ms,
        });
        write_file(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    }
    Ok(EXIT_PASS)
}

fn experiment(catalog: &MapCatalog, a: ExperimentArgs) -> Outcome {
    let text = std::fs::read_to_string(&a.config)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", a.config.display())))?;
    let cfg = ExperimentConfig::from_json(&text).map_err(|e| Failure::input(format!("{}: {e}", a.config.display())))?;
    if cfg.kind != a.kind {
        return Err(Failure::input(format!("{} describes a {} experiment, not {}", a.config.display(), cfg.kind, a.kind)));
    }
    if a.csv.is_some() && cfg.kind != ExperimentKind::Contraction {
        return Err(Failure::input("--csv applies to contraction experiments only"));
    }
    // Already inside the requested pool.
    let report = run_experiment_with_workers(&cfg, catalog, None).map_err(|e| Failure::input(e.to_string()))?;
    print!("{}", report.summary());
    if let Some(out) = &a.out {
        write_file(out, &report.to_json())?;
    }
    if let Some(csv) = &a.csv {
        write_file(csv, &ratio_csv(&report))?;
    }
    Ok(report.exit_code)
}

fn ratio_csv(report: &Report) -> String {
    let mut out = String::from("outer,g1,g2,scale,ratio,ratio_stderr,samples,seed\n");
    for m in report.measurements.iter().filter(|m| m.operation == "contraction_ratio") {
        let scale = m.extra.get("scale").and_then(|s| s.as_f64()).unwrap_or(f64::NAN);
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            m.inputs[0],
            m.inputs[1],
            m.inputs[2],
            sig(scale),
            sig(m.value),
            m.stderr.map(sig).unwrap_or_default(),
            m.samples.unwrap_or(0),
            m.seed
        );
    }
    out
}

fn tracts_search(catalog: &MapCatalog, name: &str, bounds: SearchBounds, out: Option<&Path>) -> Outcome {
    if bounds.alpha_max == 0 {
        return Err(Failure::input("--alpha-max must be at least 1"));
    }
    let f = &entry(catalog, name)?.map;
    let found = tract_search_report(f, bounds);
    println!(
        "{} tracts of {name} within α ≤ {}, β ≤ {}, deg Φ ≤ {}",
        found.tracts.len(),
        bounds.alpha_max,
        bounds.beta_max,
        bounds.phi_deg_max
    );
    let mut records = Vec::new();
    for t in &found.tracts {
        let dual = dual_map(f, &t.tract)
            .map_err(|err| Failure::module(ErrorClass::Module, format!("dual map of {}: {err}", t.tract)))?;
        let flags: Vec<String> = t.validation.flags.iter().map(|fl| format!("{fl:?}")).collect();
        let note = if flags.is_empty() { String::new() } else { format!("  [{}]", flags.join(", ")) };
        println!("  R = {}  →  {name}∘R = {dual}{note}", t.tract);
        records.push(json!({
            "tract": TractJson::from(&t.tract),
            "dual_map": MapJson::from(&dual),
            "flags": flags,
        }));
    }
    if !found.unresolved.is_empty() {
        eprintln!("warning: unresolved (α, β) cells: {:?}", found.unresolved);
    }
    if let Some(out) = out {
        let doc = json!({
            "operation": "tract_search",
            "inputs": [name],
            "map": MapJson::from(f),
            "bounds": bounds,
            "tracts": records,
            "unresolved": found.unresolved,
        });
        write_file(out, &serde_json::to_string_pretty(&doc).expect("serializable"))?;
    }
    Ok(EXIT_PASS)
}

fn charset_build(out: &Path, radius: f64, slices: usize, bundles: usize, fatten: f64, seed: u64) -> Outcome {
    use keller_core::charset::CharsetError;
    let set = build_characteristic_set(radius, slices, bundles, fatten, seed).map_err(|err| match err {
        CharsetError::InvalidParameters(_) => Failure::input(err.to_string()),
        _ => Failure::module(ErrorClass::Module, err.to_string()),
    })?;
    write_file(out, &set.to_json())?;
    let d = SamplingDomain::charset(set.clone());
    println!("characteristic set: ball radius {}, {} stars, fattening {}", sig(radius), set.star_count(), sig(fatten));
    println!("removed volume {}", sig(set.removed_volume()));
    println!("volume {}", sig(d.exact_volume()));
    println!("truncated: {}", set.truncated);
    println!("written to {}", out.display());
    Ok(EXIT_PASS)
}
