mod dendrogram;
mod overrides;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use cvdv_bench::report::{config_header, features_csv, noisy_csv, parse_features_csv, SuiteResult};
use cvdv_bench::suite::{run_benchmark, run_suite};
use cvdv_bench::{find, BenchError, Config};
use cvdv_core::engine::run_pure;
use cvdv_core::gates::coherent_amplitudes;
use cvdv_core::hilbert::product_state;
use cvdv_core::linalg::c;
use cvdv_core::metrics::{cut_tree, ward_cluster, wigner, wigner_integral, wigner_negativity, GridSpec};
use cvdv_core::{fock_state, vacuum_state, MixedState, SystemLayout};
use serde_json::json;

#[derive(Parser)]
#[command(name = "cvdv", version, about = "Benchmarks for hybrid qubit-qumode circuits")]
struct Cli {
    /// TOML config; every field is optional.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for the suite.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "results")]
    out: PathBuf,
    /// Print the default config and exit.
    #[arg(long)]
    print_defaults: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Subcommand)]
enum Command {
    /// Run one benchmark. Extra `--key value` pairs override its config
    /// section (`--alpha 2`) or any field (`--noise.kappa 2000`).
    Run {
        benchmark: String,
        /// Skip the density-matrix comparison.
        #[arg(long)]
        no_noise: bool,
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Run the selected benchmarks and write both tables.
    Suite {
        #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
        overrides: Vec<String>,
    },
    /// Wigner grid of a benchmark output mode or of `vacuum`, `fock:N`,
    /// `coherent:RE,IM`.
    Wigner {
        source: String,
        #[arg(long, default_value_t = 0)]
        mode: usize,
        #[arg(long, default_value_t = 32)]
        cutoff: usize,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        half_width: Option<f64>,
    },
    /// Ward clustering of a feature table.
    Cluster {
        features: PathBuf,
        #[arg(long, default_value_t = 4)]
        k: usize,
    },
}

fn exit_code(e: &BenchError) -> u8 {
    match e {
        BenchError::Config(_) => 2,
        e if e.is_resource_cap() => 3,
        BenchError::Task { .. } | BenchError::Optimizer(_) | BenchError::Core(_) => 4,
        BenchError::Io(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn base_config(cli: &Cli) -> cvdv_bench::Result<Config> {
    let mut cfg = match &cli.config {
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| BenchError::Config(format!("{}: {e}", p.display())))?;
            Config::from_toml(&text)?
        }
        None => Config::default(),
    };
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn write(dir: &Path, name: &str, body: &str) -> cvdv_bench::Result<()> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, body)?;
    eprintln!("wrote {}", path.display());
    Ok(())
}

fn json_doc(cfg: &Config, body: serde_json::Value) -> String {
    let doc = json!({"seed": cfg.seed, "config": cfg, "result": body});
    serde_json::to_string_pretty(&doc).expect("report serializes") + "\n"
}

fn dispatch(cli: Cli) -> cvdv_bench::Result<u8> {
    if cli.print_defaults {
        print!("{}", Config::default().to_toml());
        return Ok(0);
    }
    let Some(command) = &cli.command else {
        return Err(BenchError::Config("no command given; see --help".into()));
    };
    let base = base_config(&cli)?;
    match command {
        Command::Run { benchmark, no_noise, overrides } => {
            let b = find(benchmark)?;
            let cfg = overrides::apply(&base, Some(benchmark), &overrides::parse_pairs(overrides)?)?;
            let report = run_benchmark(b.as_ref(), &cfg, !no_noise)?;
            let suite = SuiteResult { reports: vec![report.clone()], failures: vec![], notes: vec![] };
            write(&cli.out, &format!("{benchmark}.json"), &json_doc(&cfg, serde_json::to_value(&report).expect("serializes")))?;
            write(&cli.out, &format!("{benchmark}_features.csv"), &features_csv(&cfg, &suite))?;
            if !report.noisy.is_empty() {
                write(&cli.out, &format!("{benchmark}_noisy.csv"), &noisy_csv(&cfg, &suite))?;
            }
            println!("{}", summary_line(&report));
            Ok(0)
        }
        Command::Suite { overrides } => {
            let cfg = overrides::apply(&base, None, &overrides::parse_pairs(overrides)?)?;
            let suite = run_suite(&cfg)?;
            write(&cli.out, "features.csv", &features_csv(&cfg, &suite))?;
            write(&cli.out, "noisy.csv", &noisy_csv(&cfg, &suite))?;
            write(&cli.out, "suite.json", &json_doc(&cfg, serde_json::to_value(&suite).expect("serializes")))?;
            for r in &suite.reports {
                println!("{}", summary_line(r));
            }
            for f in &suite.failures {
                println!("{}: FAILED: {}", f.name, f.error);
            }
            Ok(if suite.failures.is_empty() { 0 } else { 4 })
        }
        Command::Wigner { source, mode, cutoff, points, half_width } => {
            let (label, rho) = wigner_source(&base, source, *mode, *cutoff)?;
            let n = rho.dim();
            let defaults = GridSpec::for_cutoff(n);
            let grid = GridSpec {
                half_width: half_width.unwrap_or(defaults.half_width),
                points: points.unwrap_or(base.metrics.grid_points),
            };
            let w = wigner(&rho, &grid)?;
            let mut body = config_header(&base);
            body.push_str(&format!("# source = {source}, mode = {mode}, cutoff = {n}\nx,p,w\n"));
            for (i, x) in w.x.iter().enumerate() {
                for (j, p) in w.p.iter().enumerate() {
                    body.push_str(&format!("{x:.6},{p:.6},{:.9e}\n", w.values[i][j]));
                }
            }
            write(&cli.out, &format!("wigner_{label}.csv"), &body)?;
            println!("integral {:.6} negativity {:.6}", wigner_integral(&w), wigner_negativity(&w));
            Ok(0)
        }
        Command::Cluster { features, k } => {
            let text = fs::read_to_string(features).map_err(|e| BenchError::Config(format!("{}: {e}", features.display())))?;
            let (names, rows) = parse_features_csv(&text).map_err(BenchError::Config)?;
            let link = ward_cluster(&rows).map_err(|e| BenchError::Config(e.to_string()))?;
            let labels = cut_tree(&link, *k);
            let mut body = config_header(&base);
            body.push_str(&format!("# input = {}\nstep,a,b,distance,size\n", features.display()));
            for (i, m) in link.merges.iter().enumerate() {
                body.push_str(&format!("{i},{},{},{:.6},{}\n", m.a, m.b, m.distance, m.size));
            }
            write(&cli.out, "linkage.csv", &body)?;
            let mut body = config_header(&base);
            body.push_str(&format!("# input = {}, k = {k}\nbenchmark,cluster\n", features.display()));
            for (name, l) in names.iter().zip(&labels) {
                body.push_str(&format!("\"{}\",{l}\n", name.replace('"', "\"\"")));
            }
            write(&cli.out, "clusters.csv", &body)?;
            print!("{}", dendrogram::render(&link, &names));
            for cl in 0..labels.iter().max().map_or(0, |m| m + 1) {
                let members: Vec<&str> =
                    names.iter().zip(&labels).filter(|(_, &l)| l == cl).map(|(n, _)| n.as_str()).collect();
                println!("cluster {cl}: {}", members.join(", "));
            }
            Ok(0)
        }
    }
}

fn summary_line(r: &cvdv_bench::report::BenchmarkReport) -> String {
    let s = &r.features.structural;
    let mut line = format!(
        "{}: qubits {} qumodes {} gates {}/{}/{} depth {}",
        r.name, s.qubits, s.qumodes, s.qubit_gates, s.qumode_gates, s.hybrid_gates, s.depth
    );
    if let Some(f) = r.fidelity {
        line.push_str(&format!(" fidelity {f:.4}"));
    }
    for n in &r.noisy {
        if let Some(f) = n.fidelity {
            line.push_str(&format!(" noisy {f:.4}"));
        }
    }
    line
}

fn wigner_source(cfg: &Config, source: &str, mode: usize, cutoff: usize) -> cvdv_bench::Result<(String, MixedState)> {
    let single = SystemLayout::new(0, vec![cutoff])?;
    let bad = |m: String| BenchError::Config(m);
    let (kind, arg) = source.split_once(':').unwrap_or((source, ""));
    let state = match kind {
        "vacuum" => vacuum_state(&single)?,
        "fock" => {
            let n: usize = arg.parse().map_err(|_| bad(format!("fock:N needs an integer, got '{arg}'")))?;
            fock_state(&single, 0, n)?
        }
        "coherent" => {
            let parts: Vec<f64> = arg
                .split(',')
                .map(|s| s.trim().parse::<f64>())
                .collect::<Result<_, _>>()
                .map_err(|_| bad(format!("coherent:RE,IM needs two numbers, got '{arg}'")))?;
            let (re, im) = match parts.as_slice() {
                [re] => (*re, 0.0),
                [re, im] => (*re, *im),
                _ => return Err(bad(format!("coherent:RE,IM needs two numbers, got '{arg}'"))),
            };
            product_state(&single, &[coherent_amplitudes(c(re, im), cutoff)])?
        }
        name => {
            let b = find(name)?;
            let out = b.execute(cfg)?;
            let psi = run_pure(&out.circuit, &out.initial, None)?;
            if mode >= psi.layout.modes() {
                return Err(bad(format!("{name} has {} modes, asked for mode {mode}", psi.layout.modes())));
            }
            return Ok((format!("{name}_mode{mode}"), psi.mode_reduced(mode)?));
        }
    };
    let label = source.replace([':', ','], "_");
    Ok((label, state.to_density()?))
}
