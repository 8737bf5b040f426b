mod error;
mod specfile;

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use orbital_forge::amalgam::{validate, ValidatedAmalgam};
use orbital_forge::canonical::{check_equivalence, enumerate_canonical, refine_to_canonical, RefinementOutcome};
use orbital_forge::decomposition::{block_cut_tree, classify_ends, lobes, EndSource};
use orbital_forge::graph::{expand_ball, suborbits, CanonicalGraph, OrbitalHandle, VertexId};
use orbital_forge::limits::{Limits, MAX_VERTICES_ENV};
use orbital_forge::suite::{run_suite, SuiteConfig};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Parser)]
#[command(name = "orbital-forge", version, about = "Realize and check connectivity-one orbital digraphs of amalgams")]
struct Cli {
    /// Skip the primitivity, regularity and domain-size checks.
    #[arg(long, global = true, hide = true)]
    unchecked: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a spec file.
    Validate { spec: PathBuf },
    /// Export the ball of radius r around the root.
    Expand {
        spec: PathBuf,
        #[arg(long)]
        radius: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ends, lobes, block-cut tree and subdegrees up to a radius.
    Analyze {
        spec: PathBuf,
        #[arg(long, default_value_t = 2)]
        radius: usize,
    },
    /// Enumerate, refine to, or compare canonical digraphs.
    Canonical {
        spec: PathBuf,
        #[arg(long, conflicts_with_all = ["refine", "equiv"])]
        enumerate: bool,
        /// Address of the second seed vertex; the first is the root.
        #[arg(long, value_name = "ADDRESS", conflicts_with = "equiv")]
        refine: Option<String>,
        #[arg(long, num_args = 2, value_names = ["I", "J"])]
        equiv: Option<Vec<usize>>,
    },
    /// Run the property suite and print one line per check.
    Verify {
        spec: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

struct Loaded {
    am: ValidatedAmalgam,
    digest: String,
    limits: Limits,
    max_radius: Option<usize>,
}

fn load(path: &Path, unchecked: bool) -> Result<Loaded, CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|e| CliError::Parse {
        line: 0,
        message: e.to_string(),
    })?;
    let file = specfile::parse(&text)?;
    let am = if unchecked {
        ValidatedAmalgam::assume_valid(file.spec)?
    } else {
        validate(file.spec)?
    };
    let mut limits = Limits::default();
    if let Some(cap) = file.limits.max_vertices {
        limits = limits.with_max_vertices(cap);
    }
    if std::env::var_os(MAX_VERTICES_ENV).is_some() {
        limits = limits.with_max_vertices(Limits::from_env().max_vertices);
    }
    Ok(Loaded {
        am,
        digest: hex::encode(Sha256::digest(&bytes)),
        limits,
        max_radius: file.limits.max_radius,
    })
}

impl Loaded {
    fn check_radius(&self, radius: usize) -> Result<(), CliError> {
        match self.max_radius {
            Some(cap) if radius > cap => Err(CliError::RadiusCap { radius, cap }),
            _ => Ok(()),
        }
    }
}

fn envelope(command: &str, loaded: &Loaded, payload: Value, started: Instant) -> String {
    let env = json!({
        "command": command,
        "input_sha256": loaded.digest,
        "version": env!("CARGO_PKG_VERSION"),
        "payload": payload,
        "timing_ms": started.elapsed().as_secs_f64() * 1000.0,
    });
    serde_json::to_string_pretty(&env).expect("envelope serializes")
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn analyze(loaded: &Loaded, radius: usize) -> Result<Value, CliError> {
    let am = &loaded.am;
    let limits = &loaded.limits;
    let graph = CanonicalGraph::new(am);
    let ball = graph.ball(&VertexId::root(), radius, limits)?;
    let ends = match classify_ends(EndSource::Canonical(&graph), radius, limits) {
        Ok(rep) => to_value(&rep),
        Err(orbital_forge::Error::Unresolved(msg)) => json!({ "unresolved": msg }),
        Err(e) => return Err(e.into()),
    };
    let lobe_set = lobes(&ball)?;
    let tree = block_cut_tree(&ball)?;
    let report = suborbits(&graph, radius, limits)?;
    Ok(json!({
        "radius": radius,
        "m": am.m(),
        "lobe_degree": am.lobe_degree(),
        "ends": ends,
        "lobes": {
            "certified": lobe_set.certified.len(),
            "boundary_blocks": lobe_set.boundary_blocks.len(),
            "cut_vertices": lobe_set.cut_vertices.len(),
        },
        "block_cut_tree": {
            "cut_vertices": tree.cut_vertices.len(),
            "lobes": tree.lobes.len(),
            "incidences": tree.incidences.len(),
            "root_degree": tree.root.map(|r| tree.cut_degree(r)),
            "is_forest": tree.is_forest(),
        },
        "sphere_sizes": report.sphere_sizes,
        "subdegrees": report.subdegrees(),
        "suborbits": report.suborbits,
    }))
}

/// The payload and, for unresolved outcomes, the error to exit with after printing it.
fn canonical(
    loaded: &Loaded,
    enumerate: bool,
    refine: Option<String>,
    equiv: Option<Vec<usize>>,
) -> Result<(Value, Option<CliError>), CliError> {
    let am = &loaded.am;
    let limits = &loaded.limits;
    if let Some(addr) = refine {
        let beta: VertexId = addr.parse().map_err(CliError::Core)?;
        let handle = OrbitalHandle::new(am, VertexId::root(), beta)?;
        let r = refine_to_canonical(&handle, limits)?;
        let pending = match &r.outcome {
            RefinementOutcome::Unresolved(msg) => Some(CliError::Core(orbital_forge::Error::Unresolved(msg.clone()))),
            RefinementOutcome::Terminal { .. } => None,
        };
        return Ok((json!({ "refinement": r, "stages": r.trace.len() }), pending));
    }
    let all = enumerate_canonical(am)?;
    if let Some(ij) = equiv {
        let (i, j) = (ij[0], ij[1]);
        let n = all.len();
        let get = |k: usize| {
            all.get(k).ok_or_else(|| CliError::Core(orbital_forge::Error::Input(format!(
                "descriptor index {k} out of range (have {n})"
            ))))
        };
        return match check_equivalence(am, get(i)?, get(j)?, 3, limits) {
            Ok(eq) => Ok((json!({ "i": i, "j": j, "radius": 3, "equivalent": eq }), None)),
            Err(orbital_forge::Error::Unresolved(msg)) => Ok((
                json!({ "i": i, "j": j, "radius": 3, "equivalent": null }),
                Some(CliError::Core(orbital_forge::Error::Unresolved(msg))),
            )),
            Err(e) => Err(e.into()),
        };
    }
    let _ = enumerate;
    let list: Vec<Value> = all
        .iter()
        .enumerate()
        .map(|(k, d)| {
            json!({
                "index": k,
                "m": d.m,
                "lobe_arcs": d.lobe.arcs(),
                "seed": [d.seed.0.to_string(), d.seed.1.to_string()],
                "root_lobe": d.root_lobe,
            })
        })
        .collect();
    Ok((json!({ "count": list.len(), "descriptors": list }), None))
}

fn write_output(output: Option<&Path>, text: &str) -> Result<(), CliError> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let started = Instant::now();
    match cli.command {
        Command::Validate { spec } => {
            let loaded = load(&spec, cli.unchecked)?;
            let am = &loaded.am;
            println!(
                "valid: m={}, |Δ|={}, |A|={}, |H|={}, |P|={}",
                am.m(),
                am.lobe_degree(),
                am.vertex_group_elements().len(),
                am.stabilizer_order(),
                am.lobe_group_elements().len()
            );
        }
        Command::Expand { spec, radius, format, output } => {
            let loaded = load(&spec, cli.unchecked)?;
            loaded.check_radius(radius)?;
            let ball = expand_ball(&loaded.am, radius, &loaded.limits)?;
            let text = match format {
                Format::Dot => ball.to_dot(),
                Format::Json => serde_json::to_string_pretty(&ball).expect("balls serialize"),
            };
            write_output(output.as_deref(), &text)?;
        }
        Command::Analyze { spec, radius } => {
            let loaded = load(&spec, cli.unchecked)?;
            loaded.check_radius(radius)?;
            let payload = analyze(&loaded, radius)?;
            println!("{}", envelope("analyze", &loaded, payload, started));
        }
        Command::Canonical { spec, enumerate, refine, equiv } => {
            let loaded = load(&spec, cli.unchecked)?;
            let (payload, pending) = canonical(&loaded, enumerate, refine, equiv)?;
            println!("{}", envelope("canonical", &loaded, payload, started));
            if let Some(e) = pending {
                return Err(e);
            }
        }
        Command::Verify { spec, seed } => {
            let loaded = load(&spec, cli.unchecked)?;
            let config = SuiteConfig { seed, ..SuiteConfig::default() };
            let results = run_suite(&loaded.am, &config, &loaded.limits);
            let width = results.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in &results {
                let status = if c.passed { "PASS" } else { "FAIL" };
                println!("{status}  {:width$}  {}", c.name, c.detail);
            }
            let failed: Vec<String> = results
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}: {}", c.name, c.detail))
                .collect();
            if !failed.is_empty() {
                return Err(CliError::Verify(failed));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
