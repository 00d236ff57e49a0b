use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use vrpstw::bench::{aggregate, aggregate_csv, router_config, run_batch, run_pipeline, DirectionChoice, PipelineConfig};
use vrpstw::gen::{generate, DepotPlacement, GenConfig};
use vrpstw::io::{
    cluster_from_json, instance_to_json, read_instance, read_schedule, schedule_to_json, to_canonical_json, write_text,
};
use vrpstw::model::{schedule_objective, validate_schedule, Instance};
use vrpstw::router::{self, RoutingMode, RoutingRequest, RoutingStatus};
use vrpstw::Variant;

#[derive(Parser)]
#[command(name = "vrpstw", version, about = "Sweep heuristics for the capacitated VRP with structured time windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a benchmark instance.
    Gen(GenArgs),
    /// Solve one instance and write its schedule and report.
    Solve(SolveArgs),
    /// Run a batch of generated instances and aggregate the results.
    Bench(BenchArgs),
    /// Check a schedule against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        schedule: PathBuf,
    },
    /// Route a single cluster.
    Route {
        #[arg(long)]
        instance: PathBuf,
        /// JSON file of the form {"customers": [ids]}.
        #[arg(long)]
        cluster: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Optimize)]
        mode: ModeArg,
        #[arg(long)]
        router_budget_s: Option<f64>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    capacity: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 20_000.0)]
    grid: f64,
    /// Travel speed in km/h.
    #[arg(long, default_value_t = 20.0)]
    speed: f64,
    #[arg(long, default_value_t = 10)]
    windows: usize,
    /// Window length in seconds.
    #[arg(long, default_value_t = 3600)]
    window_len: i64,
    /// Service time in seconds.
    #[arg(long, default_value_t = 300)]
    service: i64,
    #[arg(long, value_enum, default_value_t = DepotArg::Center)]
    depot: DepotArg,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GenArgs {
    fn config(&self) -> GenConfig {
        GenConfig {
            grid: self.grid,
            speed_kmh: self.speed,
            window_count: self.windows,
            window_len: self.window_len,
            service: self.service,
            depot: match self.depot {
                DepotArg::Center => DepotPlacement::Center,
                DepotArg::Corner => DepotPlacement::Corner,
            },
            ..GenConfig::new(self.n, self.capacity, self.seed)
        }
    }
}

#[derive(Args)]
struct PipelineArgs {
    #[arg(long, value_enum, default_value_t = VariantArg::A)]
    variant: VariantArg,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    improve: Toggle,
    /// Wall-clock limit per routing call in seconds.
    #[arg(long)]
    router_budget_s: Option<f64>,
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file; when omitted one is generated from --n, --capacity and --seed.
    #[arg(long)]
    instance: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    capacity: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    pipeline: PipelineArgs,
    /// Output directory for schedule.json and report.json.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, value_delimiter = ',', default_values_t = vec![250])]
    n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![200.0])]
    capacity: Vec<f64>,
    /// First seed.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of seeds per (n, capacity) cell.
    #[arg(long, default_value_t = 5)]
    seeds: u64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = vec![VariantArg::A, VariantArg::B, VariantArg::C])]
    variant: Vec<VariantArg>,
    #[arg(long, value_enum, default_value_t = DirectionArg::Both)]
    direction: DirectionArg,
    #[arg(long, value_enum, default_value_t = Toggle::Off)]
    improve: Toggle,
    #[arg(long)]
    router_budget_s: Option<f64>,
    /// Output directory for per-run reports and aggregate.csv.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Traditional,
    A,
    B,
    C,
}

impl From<VariantArg> for Variant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Traditional => Variant::Traditional,
            VariantArg::A => Variant::A,
            VariantArg::B => Variant::B,
            VariantArg::C => Variant::C,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Ccw,
    Cw,
    Both,
}

impl From<DirectionArg> for DirectionChoice {
    fn from(d: DirectionArg) -> Self {
        match d {
            DirectionArg::Ccw => DirectionChoice::Ccw,
            DirectionArg::Cw => DirectionChoice::Cw,
            DirectionArg::Both => DirectionChoice::Both,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
    /// Bench only: run with and without improvement.
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Feasibility,
    Optimize,
}

#[derive(Clone, Copy, ValueEnum)]
enum DepotArg {
    Center,
    Corner,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_text(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<Instance> {
    read_instance(path).with_context(|| format!("reading instance {}", path.display()))
}

/// Returns whether every produced schedule validated.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => {
            let instance = generate(&args.config())?;
            emit(args.out.as_deref(), &instance_to_json(&instance)?)?;
            Ok(true)
        }
        Command::Solve(args) => solve(args),
        Command::Bench(args) => bench(args),
        Command::Validate { instance, schedule } => {
            let instance = load(&instance)?;
            let schedule = read_schedule(&schedule, &instance)?;
            match validate_schedule(&schedule, &instance) {
                Ok(()) => {
                    println!("ok {}", schedule_objective(&schedule, &instance)?);
                    Ok(true)
                }
                Err(violations) => {
                    for v in &violations {
                        println!("{v}");
                    }
                    Ok(false)
                }
            }
        }
        Command::Route {
            instance,
            cluster,
            mode,
            router_budget_s,
        } => {
            let instance = load(&instance)?;
            let text = std::fs::read_to_string(&cluster).with_context(|| format!("reading {}", cluster.display()))?;
            let customers = cluster_from_json(&text, &instance)?;
            let result = router::solve(&RoutingRequest {
                instance: &instance,
                customers: &customers,
                mode: match mode {
                    ModeArg::Feasibility => RoutingMode::Feasibility,
                    ModeArg::Optimize => RoutingMode::Optimize,
                },
                budget: router_config(router_budget_s).budget,
            })?;
            let status = match result.status {
                RoutingStatus::Feasible => "feasible",
                RoutingStatus::Infeasible => "infeasible",
                RoutingStatus::BudgetExhausted => "budget_exhausted",
            };
            let tour = result.tour.as_ref().map(|t| {
                serde_json::json!({
                    "customers": t.customers.iter().map(|&i| instance.customer(i).id).collect::<Vec<_>>(),
                    "arrivals_s": t.arrivals,
                })
            });
            let out = serde_json::json!({
                "status": status,
                "tour": tour,
                "duration_s": result.objective.map(|o| o.0),
                "travel_s": result.objective.map(|o| o.1),
            });
            print!("{}", to_canonical_json(&out)?);
            Ok(result.status == RoutingStatus::Feasible)
        }
    }
}

fn pipeline_config(args: &PipelineArgs) -> Result<PipelineConfig> {
    let improve = match args.improve {
        Toggle::On => true,
        Toggle::Off => false,
        Toggle::Both => bail!("--improve both is only meaningful for bench"),
    };
    Ok(PipelineConfig {
        variant: args.variant.into(),
        direction: args.direction.into(),
        improve,
        router: router_config(args.router_budget_s),
    })
}

fn solve(args: SolveArgs) -> Result<bool> {
    let (instance, label) = match (&args.instance, args.n, args.capacity) {
        (Some(path), _, _) => (load(path)?, path.display().to_string()),
        (None, Some(n), Some(capacity)) => (
            generate(&GenConfig::new(n, capacity, args.seed))?,
            format!("n{n}-c{capacity}-s{}", args.seed),
        ),
        _ => bail!("pass --instance, or --n and --capacity to generate one"),
    };
    let config = pipeline_config(&args.pipeline)?;
    let (schedule, report) = run_pipeline(&instance, &label, &config);
    match &report.objective {
        Some(o) => println!("{label}: {o} in {:.3} s", report.wall_time_s),
        None => println!("{label}: failed: {}", report.diagnostics.join("; ")),
    }
    if let Some(dir) = &args.out {
        if let Some(schedule) = &schedule {
            write_text(&dir.join("schedule.json"), &schedule_to_json(schedule, &instance)?)?;
        }
        write_text(&dir.join("report.json"), &to_canonical_json(&report)?)?;
    }
    Ok(report.is_ok())
}

fn bench(args: BenchArgs) -> Result<bool> {
    let mut instances = Vec::new();
    for &n in &args.n {
        for &capacity in &args.capacity {
            for seed in args.seed..args.seed + args.seeds {
                instances.push(GenConfig::new(n, capacity, seed));
            }
        }
    }
    let improve_flags: &[bool] = match args.improve {
        Toggle::On => &[true],
        Toggle::Off => &[false],
        Toggle::Both => &[false, true],
    };
    let mut pipelines = Vec::new();
    for &v in &args.variant {
        for &improve in improve_flags {
            pipelines.push(PipelineConfig {
                variant: v.into(),
                direction: args.direction.into(),
                improve,
                router: router_config(args.router_budget_s),
            });
        }
    }
    let reports = run_batch(&instances, &pipelines)?;
    let rows = aggregate(&reports);
    let csv = aggregate_csv(&rows);
    print!("{csv}");
    let failed: Vec<_> = reports.iter().filter(|r| !r.is_ok()).collect();
    for r in &failed {
        eprintln!(
            "failed: {} variant {} improve {}: {}",
            r.instance,
            r.variant.name(),
            r.improve,
            r.diagnostics.join("; ")
        );
    }
    if let Some(dir) = &args.out {
        for r in &reports {
            let name = format!(
                "{}-{}-{}.json",
                r.instance,
                r.variant.name(),
                if r.improve { "improve" } else { "plain" }
            );
            write_text(&dir.join("runs").join(name), &to_canonical_json(r)?)?;
        }
        write_text(&dir.join("aggregate.csv"), &csv)?;
    }
    Ok(failed.is_empty())
}
