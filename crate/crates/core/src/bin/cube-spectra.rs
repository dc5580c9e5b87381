use std::fs;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use cube_spectra::components::{case4_shape_check, connected_components, k0_cutoff};
use cube_spectra::degree_theory::{kappa, DegreeProfile, DegreeTheoryConfig};
use cube_spectra::eigensolve::lanczos_lambda1;
use cube_spectra::experiment::{
    format_real, persist_run, plot_ratio, read_records, run_experiment_full, summarize, tail_table,
    write_records_to, write_summary_to, write_tail_csv, ExperimentConfig,
};
use cube_spectra::locality::{cluster_stat_i, cluster_stat_ii, VertexScan};
use cube_spectra::spectral_bounds::BoundReport;
use cube_spectra::verify::{verify_records, verify_suite, VerifyConfig, VerifyReport};
use cube_spectra::{sample_subgraph, Error, HypercubeSubgraph, SampleParams};

const EXIT_VIOLATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cube-spectra",
    version,
    about = "Largest eigenvalue of random subgraphs of the n-cube"
)]
struct Cli {
    /// Master seed for all sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format for records and summaries.
    #[arg(long, global = true)]
    format: Option<String>,
    /// key = value configuration file; flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GraphArgs {
    #[arg(long, required_unless_present = "edges")]
    n: Option<u32>,
    #[arg(long, required_unless_present = "edges")]
    p: Option<f64>,
    #[arg(long, default_value_t = 0, conflicts_with = "edges")]
    trial: u64,
    /// Read the graph from an edge-list file instead of sampling.
    #[arg(long, conflicts_with_all = ["n", "p"])]
    edges: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverArgs {
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    max_iter: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LocalityModeArg {
    I,
    Ii,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one graph and describe it.
    Sample {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        trial: u64,
        /// Write the edge list to this file.
        #[arg(long)]
        emit_edges: Option<PathBuf>,
    },
    /// Largest eigenvalue of one graph.
    Eig {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
        /// Write the unit Ritz vector, one entry per line.
        #[arg(long)]
        emit_vector: Option<PathBuf>,
    },
    /// Eigenvalue bounds and sandwich checks for one graph.
    Bounds {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Maximum-degree profile for (n, p).
    Kappa {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
    },
    /// Maximum-degree tail bounds against Monte Carlo frequencies (CSV).
    Tails {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 500)]
        trials: u64,
    },
    /// Component census for one graph.
    Components {
        #[command(flatten)]
        graph: GraphArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Distance-{1,2} clustering of high-degree vertices.
    Locality {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        a: f64,
        /// Degree exponent, required for mode i.
        #[arg(long)]
        b: Option<f64>,
        #[arg(long, value_enum, default_value = "i")]
        mode: LocalityModeArg,
        /// Scan a uniform sample of this many vertices instead of all.
        #[arg(long)]
        sample: Option<u64>,
    },
    /// Batch Monte Carlo run.
    Run {
        /// Comma-separated dimensions.
        #[arg(long)]
        n_values: Option<String>,
        /// Comma-separated p-rules: const:x, pow:e, sparse:k, or a number.
        #[arg(long)]
        p_values: Option<String>,
        #[arg(long)]
        trials: Option<u64>,
        /// Record the component census for every trial.
        #[arg(long)]
        census: bool,
        /// Comma-separated a:b pairs for the clustering statistic.
        #[arg(long)]
        locality: Option<String>,
        /// Write the ratio plot to this SVG file.
        #[arg(long)]
        plot: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Per-(n, p) summary of a records file.
    Summarize { records: PathBuf },
    /// Ratio scatter plot of a records file (SVG, requires --out).
    Plot { records: PathBuf },
    /// Run the invariant suite; exits 1 on any violation.
    Verify {
        /// Also check a records file.
        #[arg(long)]
        records: Option<PathBuf>,
        #[arg(long, default_value_t = 12)]
        max_n: u32,
        #[arg(long, default_value_t = 8)]
        graphs_per_cell: u64,
        #[arg(long, default_value_t = 14)]
        full_cube_max: u32,
        #[command(flatten)]
        solver: SolverArgs,
    },
}

enum Failure {
    Lib(Error),
    Usage(String),
    Violation,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CliResult<T = ()> = std::result::Result<T, Failure>;

fn exit_code(e: &Error) -> u8 {
    let io = match e {
        Error::Json(j) => j.is_io(),
        other => other.is_io(),
    };
    if io {
        EXIT_IO
    } else {
        EXIT_USAGE
    }
}

fn with_path(path: &Path, e: Error) -> Failure {
    match e {
        Error::Io(io) => Failure::Lib(Error::Io(io::Error::new(
            io.kind(),
            format!("{}: {io}", path.display()),
        ))),
        other => Failure::Lib(other),
    }
}

fn read_text(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| with_path(path, Error::Io(e)))
}

fn load_records(path: &Path) -> CliResult<Vec<cube_spectra::experiment::TrialRecord>> {
    read_records(path).map_err(|e| with_path(path, e))
}

/// Writes to `--out` when given, stdout otherwise.
fn emit(
    out: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> cube_spectra::Result<()>,
) -> CliResult {
    match out {
        Some(path) => {
            let mut w = BufWriter::new(fs::File::create(path)?);
            f(&mut w)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            f(&mut w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> CliResult {
    emit(out, |w| {
        serde_json::to_writer_pretty(&mut *w, value)?;
        w.write_all(b"\n")?;
        Ok(())
    })
}

struct Context {
    config: ExperimentConfig,
    out: Option<PathBuf>,
}

impl Context {
    fn solver(&self, args: &SolverArgs) -> cube_spectra::SolverConfig {
        let mut s = self.config.solver.clone();
        if let Some(t) = args.tol {
            s.tol = t;
        }
        if let Some(m) = args.max_iter {
            s.max_iter = m;
        }
        s
    }

    fn out(&self) -> Option<&Path> {
        self.out.as_deref()
    }

    /// Graph plus the edge probability it was drawn with. For edge-list
    /// input the probability is the observed edge density.
    fn graph(&self, args: &GraphArgs) -> CliResult<(HypercubeSubgraph, f64, Option<u64>)> {
        match &args.edges {
            Some(path) => {
                let file = fs::File::open(path).map_err(|e| with_path(path, Error::Io(e)))?;
                let g = HypercubeSubgraph::read_edge_list(BufReader::new(file))?;
                let total = f64::from(g.n()) * 2f64.powi(g.n() as i32 - 1);
                let p = g.edge_count() as f64 / total;
                Ok((g, p, None))
            }
            None => {
                let (n, p) = (args.n.unwrap_or_default(), args.p.unwrap_or_default());
                let params = SampleParams::new(n, p, self.config.master_seed, args.trial);
                Ok((sample_subgraph(&params)?, p, Some(params.derived_seed())))
            }
        }
    }
}

fn run(cli: Cli) -> CliResult {
    let mut config = match &cli.config {
        Some(path) => ExperimentConfig::from_kv_str(&read_text(path)?)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.master_seed = s;
    }
    if let Some(t) = cli.threads {
        config.threads = Some(t);
    }
    if let Some(f) = &cli.format {
        config.format = f.parse()?;
    }
    if let Some(o) = &cli.out {
        config.output_path = Some(o.clone());
    }
    if let Some(t) = config.threads {
        if t == 0 {
            return Err(Failure::Usage("--threads must be >= 1".into()));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let ctx = Context {
        out: config.output_path.clone(),
        config,
    };

    match cli.command {
        Command::Sample {
            n,
            p,
            trial,
            emit_edges,
        } => {
            let params = SampleParams::new(n, p, ctx.config.master_seed, trial);
            let g = sample_subgraph(&params)?;
            if let Some(path) = emit_edges {
                let mut w = BufWriter::new(fs::File::create(&path)?);
                g.write_edge_list(&mut w)?;
                w.flush()?;
            }
            emit_json(
                ctx.out(),
                &json!({
                    "n": n,
                    "p": p,
                    "trial_index": trial,
                    "derived_seed": params.derived_seed(),
                    "algorithm": params.algorithm().tag(),
                    "m": g.edge_count(),
                    "delta": g.max_degree(),
                    "degree_histogram": g.degree_histogram(),
                }),
            )
        }
        Command::Eig {
            graph,
            solver,
            emit_vector,
        } => {
            let (g, _, _) = ctx.graph(&graph)?;
            let mut cfg = ctx.solver(&solver);
            cfg.keep_vector = emit_vector.is_some();
            let r = lanczos_lambda1(&g, &cfg)?;
            if let (Some(path), Some(v)) = (emit_vector, &r.vector) {
                let mut w = BufWriter::new(fs::File::create(&path)?);
                for x in v {
                    writeln!(w, "{}", format_real(*x))?;
                }
                w.flush()?;
            }
            emit_json(ctx.out(), &r)
        }
        Command::Bounds { graph, solver } => {
            let (g, p, _) = ctx.graph(&graph)?;
            let r = lanczos_lambda1(&g, &ctx.solver(&solver))?;
            let b = BoundReport::compute(&g, p);
            let slack = cube_spectra::thresholds::BOUND_SLACK;
            emit_json(
                ctx.out(),
                &json!({
                    "bounds": b,
                    "lambda1": r.lambda1,
                    "converged": r.converged,
                    "checks": {
                        "lambda1_ge_sqrt_max_degree": r.lambda1 >= b.sqrt_max_degree - slack,
                        "lambda1_ge_avg_degree": r.lambda1 >= b.avg_degree - slack,
                        "lambda1_le_max_degree": r.lambda1 <= b.max_degree_bound + slack,
                        "lambda1_le_sqrt_edges": r.lambda1 <= b.sqrt_edges + slack,
                        "lambda1_le_walk2": r.lambda1 <= b.walk2_bound + slack,
                        "lambda1_le_parity_product": r.lambda1 <= b.parity_product_bound + slack,
                    },
                }),
            )
        }
        Command::Kappa { n, p } => {
            let prof = DegreeProfile::compute(n, p, &DegreeTheoryConfig::default())?;
            emit_json(ctx.out(), &prof)
        }
        Command::Tails { n, p, trials } => {
            let rows = tail_table(n, p, trials, ctx.config.master_seed)?;
            emit(ctx.out(), |w| write_tail_csv(&rows, w))
        }
        Command::Components { graph, solver } => {
            let (g, p, _) = ctx.graph(&graph)?;
            let cfg = ctx.solver(&solver);
            let census = connected_components(&g);
            let r = lanczos_lambda1(&g, &cfg)?;
            let check = case4_shape_check(&g, &census, r.lambda1, &cfg)?;
            let k = kappa(g.n(), p)?;
            emit_json(
                ctx.out(),
                &json!({
                    "yk": census.yk,
                    "largest_component_edges": census.largest_component_edges,
                    "star_fraction": census.star_fraction(&g),
                    "case4_check": check,
                    "kappa": k,
                    "k0": k.and_then(k0_cutoff),
                }),
            )
        }
        Command::Locality {
            graph,
            a,
            b,
            mode,
            sample,
        } => {
            let (g, p, seed) = ctx.graph(&graph)?;
            let scan = match sample {
                None => VertexScan::All,
                Some(count) => VertexScan::Sample {
                    count,
                    seed: seed.unwrap_or(ctx.config.master_seed),
                },
            };
            let report = match mode {
                LocalityModeArg::I => {
                    let b = b.ok_or_else(|| Failure::Usage("--b is required for mode i".into()))?;
                    cluster_stat_i(&g, p, a, b, scan)?
                }
                LocalityModeArg::Ii => cluster_stat_ii(&g, p, a, scan)?,
            };
            emit_json(ctx.out(), &report)
        }
        Command::Run {
            n_values,
            p_values,
            trials,
            census,
            locality,
            plot,
            solver,
        } => {
            let mut config = ctx.config.clone();
            config.solver = ctx.solver(&solver);
            let overrides = [
                ("n_values", n_values),
                ("p_values", p_values),
                ("trials", trials.map(|t| t.to_string())),
                ("locality", locality),
            ];
            for (key, value) in overrides {
                if let Some(v) = value {
                    config.set(key, &v).map_err(|msg| {
                        Failure::Usage(format!("--{}: {msg}", key.replace('_', "-")))
                    })?;
                }
            }
            if census {
                config.census = true;
            }
            if plot.is_some() {
                config.plot_path = plot;
            }
            let output = run_experiment_full(&config)?;
            persist_run(&config, &output)?;
            if config.output_path.is_none() {
                emit(None, |w| {
                    write_records_to(&output.records, w, config.format)
                })?;
            }
            Ok(())
        }
        Command::Summarize { records } => {
            let recs = load_records(&records)?;
            let rows = summarize(&recs)?;
            emit(ctx.out(), |w| write_summary_to(&rows, w, ctx.config.format))
        }
        Command::Plot { records } => {
            let out = ctx
                .out()
                .ok_or_else(|| Failure::Usage("plot requires --out <file.svg>".into()))?;
            let recs = load_records(&records)?;
            plot_ratio(&recs, out)?;
            Ok(())
        }
        Command::Verify {
            records,
            max_n,
            graphs_per_cell,
            full_cube_max,
            solver,
        } => {
            let solver = ctx.solver(&solver);
            let tol = solver.tol;
            let cfg = VerifyConfig {
                master_seed: ctx.config.master_seed,
                graphs_per_cell,
                max_n,
                max_full_cube_n: full_cube_max,
                solver,
            };
            let mut report = verify_suite(&cfg)?;
            if let Some(path) = records {
                let recs = load_records(&path)?;
                report.checks.extend(verify_records(&recs, tol).checks);
            }
            print_verify(&report);
            emit_json(ctx.out(), &report)?;
            if report.passed() {
                Ok(())
            } else {
                Err(Failure::Violation)
            }
        }
    }
}

fn print_verify(report: &VerifyReport) {
    for c in &report.checks {
        let status = if c.passed() { "PASS" } else { "FAIL" };
        eprintln!(
            "{status} {} ({} cases, {} failures)",
            c.name, c.cases, c.failures
        );
        if let Some(f) = &c.first_failure {
            eprintln!("     first failure: {f}");
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Violation) => ExitCode::from(EXIT_VIOLATION),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
