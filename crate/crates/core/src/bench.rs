//! The three-step pipeline (sweep, optional improvement, per-cluster optimal
//! routing) with run reports, batch execution and table aggregation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gen::{generate, GenConfig};
use crate::geometry::Direction;
use crate::improve::{improve, AcceptedMove};
use crate::model::{schedule_objective, validate_schedule, Instance, Objective, Schedule, Weight};
use crate::router::{optimize_clusters, RouterConfig};
use crate::sweep::{best_of_directions, sweep, DirectedClustering, Variant};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DirectionChoice {
    Ccw,
    Cw,
    #[default]
    Both,
}

impl std::str::FromStr for DirectionChoice {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ccw" | "counterclockwise" => Ok(DirectionChoice::Ccw),
            "cw" | "clockwise" => Ok(DirectionChoice::Cw),
            "both" => Ok(DirectionChoice::Both),
            other => Err(Error::Config(format!("unknown direction {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PipelineConfig {
    pub variant: Variant,
    pub direction: DirectionChoice,
    pub improve: bool,
    pub router: RouterConfig,
}

impl PipelineConfig {
    pub fn new(variant: Variant, improve: bool) -> Self {
        PipelineConfig {
            variant,
            direction: DirectionChoice::Both,
            improve,
            router: RouterConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PhaseTimings {
    pub sweep_s: f64,
    pub improve_s: f64,
    pub routing_s: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub instance: String,
    pub seed: Option<u64>,
    pub n: usize,
    pub capacity: f64,
    pub variant: Variant,
    pub direction: DirectionChoice,
    /// Direction whose clustering was kept.
    pub chosen_direction: Option<Direction>,
    pub improve: bool,
    pub wall_time_s: f64,
    pub timings: PhaseTimings,
    /// Objective of the sweep clustering before improvement.
    pub initial_objective: Option<Objective>,
    pub objective: Option<Objective>,
    pub status: RunStatus,
    pub diagnostics: Vec<String>,
    pub moves: usize,
    pub improve_scans: usize,
    pub improve_skipped: usize,
    pub trace: Vec<AcceptedMove>,
}

impl RunReport {
    pub fn is_ok(&self) -> bool {
        self.status == RunStatus::Ok
    }
}

fn seed_of(instance: &Instance) -> Option<u64> {
    instance.provenance.as_ref()?.get("generator")?.get("seed")?.as_u64()
}

/// Runs sweep, improvement and routing on `instance`. A schedule is returned
/// only if it passes validation.
pub fn run_pipeline(instance: &Instance, label: &str, config: &PipelineConfig) -> (Option<Schedule>, RunReport) {
    let started = Instant::now();
    let mut report = RunReport {
        instance: label.to_string(),
        seed: seed_of(instance),
        n: instance.len(),
        capacity: instance.capacity().units(),
        variant: config.variant,
        direction: config.direction,
        chosen_direction: None,
        improve: config.improve,
        wall_time_s: 0.0,
        timings: PhaseTimings::default(),
        initial_objective: None,
        objective: None,
        status: RunStatus::Failed,
        diagnostics: Vec::new(),
        moves: 0,
        improve_scans: 0,
        improve_skipped: 0,
        trace: Vec::new(),
    };
    let schedule = match pipeline_steps(instance, config, &mut report) {
        Ok(schedule) => Some(schedule),
        Err(e) => {
            report.diagnostics.push(e.to_string());
            None
        }
    };
    if schedule.is_some() {
        report.status = RunStatus::Ok;
    }
    report.wall_time_s = started.elapsed().as_secs_f64();
    (schedule, report)
}

fn pipeline_steps(instance: &Instance, config: &PipelineConfig, report: &mut RunReport) -> Result<Schedule> {
    let t = Instant::now();
    let swept: DirectedClustering = match config.direction {
        DirectionChoice::Both => best_of_directions(instance, config.variant, config.router)?,
        DirectionChoice::Ccw => sweep(instance, config.variant, Direction::Counterclockwise, config.router)?,
        DirectionChoice::Cw => sweep(instance, config.variant, Direction::Clockwise, config.router)?,
    };
    report.timings.sweep_s = t.elapsed().as_secs_f64();
    report.chosen_direction = Some(swept.direction());
    report.initial_objective = swept.objective();

    let Some((routed, initial)) = swept.routed else {
        return Err(Error::Domain(format!(
            "{} clusters of the {} sweep have no time-feasible tour",
            swept.clustering.len(),
            config.variant.name()
        )));
    };

    let (schedule, objective) = if config.improve {
        let t = Instant::now();
        let outcome = improve(&swept.clustering, &swept.order, instance, config.router)?;
        report.timings.improve_s = t.elapsed().as_secs_f64();
        report.moves = outcome.trace.len();
        report.improve_scans = outcome.scans;
        report.improve_skipped = outcome.skipped;
        report.trace = outcome.trace;
        if outcome.skipped > 0 {
            report
                .diagnostics
                .push(format!("{} candidate moves skipped on router budget", outcome.skipped));
        }
        let t = Instant::now();
        let routed = optimize_clusters(instance, outcome.clustering.clusters(), config.router)?
            .ok_or_else(|| Error::Domain("improved clustering is not routable".into()))?;
        report.timings.routing_s = t.elapsed().as_secs_f64();
        if routed.1 != outcome.final_objective {
            return Err(Error::Domain(format!(
                "routing gave {} but improvement tracked {}",
                routed.1, outcome.final_objective
            )));
        }
        routed
    } else {
        (routed, initial)
    };

    if let Err(violations) = validate_schedule(&schedule, instance) {
        for v in violations.iter().take(20) {
            report.diagnostics.push(v.to_string());
        }
        return Err(Error::Domain(format!("schedule has {} violations", violations.len())));
    }
    let recomputed = schedule_objective(&schedule, instance)?;
    if recomputed != objective {
        return Err(Error::Domain(format!("objective mismatch: {recomputed} vs {objective}")));
    }
    report.objective = Some(objective);
    Ok(schedule)
}

/// Generates every instance and runs every pipeline on it, instances in
/// parallel. Reports come back in `(instance, pipeline)` order.
pub fn run_batch(instances: &[GenConfig], pipelines: &[PipelineConfig]) -> Result<Vec<RunReport>> {
    let per_instance: Vec<Result<Vec<RunReport>>> = instances
        .par_iter()
        .map(|cfg| {
            let instance = generate(cfg)?;
            let label = format!("n{}-c{}-s{}", cfg.n, cfg.capacity, cfg.seed);
            Ok(pipelines
                .iter()
                .map(|p| run_pipeline(&instance, &label, p).1)
                .collect())
        })
        .collect();
    let mut reports = Vec::new();
    for r in per_instance {
        reports.extend(r?);
    }
    Ok(reports)
}

/// One cell of the summary table; durations in hours.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub variant: Variant,
    pub capacity: f64,
    pub improve: bool,
    pub runs: usize,
    pub mean_t_s: f64,
    pub mean_vehicles: f64,
    pub mean_duration_h: f64,
    pub mean_travel_h: f64,
}

/// Means per `(variant, capacity, improve)` over successful reports. Cells
/// without a successful run are omitted with a warning.
pub fn aggregate(reports: &[RunReport]) -> Vec<AggregateRow> {
    type Key = (usize, i64, bool);
    let variant_rank = |v: Variant| Variant::ALL.iter().position(|&x| x == v).unwrap();
    let mut cells: BTreeMap<Key, (Variant, f64, Vec<&RunReport>)> = BTreeMap::new();
    for r in reports {
        let key = (variant_rank(r.variant), Weight::from_units(r.capacity).milli(), r.improve);
        cells.entry(key).or_insert_with(|| (r.variant, r.capacity, Vec::new())).2.push(r);
    }
    let mut rows = Vec::new();
    for ((_, _, improve), (variant, capacity, runs)) in cells {
        let ok: Vec<&RunReport> = runs.into_iter().filter(|r| r.is_ok()).collect();
        if ok.is_empty() {
            log::warn!("no successful runs for variant {} capacity {capacity} improve {improve}", variant.name());
            continue;
        }
        let k = ok.len() as f64;
        let mean = |f: &dyn Fn(&RunReport) -> f64| ok.iter().map(|r| f(r)).sum::<f64>() / k;
        let obj = |r: &RunReport| r.objective.expect("successful runs carry an objective");
        rows.push(AggregateRow {
            variant,
            capacity,
            improve,
            runs: ok.len(),
            mean_t_s: mean(&|r| r.wall_time_s),
            mean_vehicles: mean(&|r| obj(r).vehicles as f64),
            mean_duration_h: mean(&|r| obj(r).duration as f64 / 3600.0),
            mean_travel_h: mean(&|r| obj(r).travel as f64 / 3600.0),
        });
    }
    rows
}

pub fn aggregate_csv(rows: &[AggregateRow]) -> String {
    let mut out = String::from("variant,capacity,improve,runs,t_s,lambda1,lambda2_h,lambda3_h\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{:.3},{:.2},{:.2},{:.2}",
            r.variant.name(),
            r.capacity,
            r.improve,
            r.runs,
            r.mean_t_s,
            r.mean_vehicles,
            r.mean_duration_h,
            r.mean_travel_h
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Router budget from seconds; zero or negative disables the budget.
pub fn router_config(budget_s: Option<f64>) -> RouterConfig {
    RouterConfig {
        budget: budget_s.filter(|s| *s > 0.0).map(Duration::from_secs_f64),
    }
}
