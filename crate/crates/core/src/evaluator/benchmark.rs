//! Repeated plan-and-execute trials over a set of objects.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::evaluator::{execute_and_evaluate, NoiseModel};
use crate::geometry::{generate_object, IndexedCloud, NamedObject};
use crate::planner::{plan, PlanConfig};
use crate::rng::stream_seed;
use crate::Real;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct TrialRow<T> {
    pub object: String,
    pub trial: usize,
    pub coverage_percent: T,
    pub waypoints: usize,
    pub path_length_m: T,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct SummaryRow<T> {
    pub object: String,
    pub coverage_percent: T,
    pub waypoints: T,
    pub path_length_m: T,
}

/// Per-trial rows in `(object, trial)` order, per-object means and an `All`
/// row averaging the object means.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(bound = "T: Real")]
pub struct BenchmarkTable<T> {
    pub rows: Vec<TrialRow<T>>,
    pub summary: Vec<SummaryRow<T>>,
    pub all: SummaryRow<T>,
}

impl<T: Real> BenchmarkTable<T> {
    pub fn trials_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "object",
            "trial",
            "coverage_percent",
            "waypoints",
            "path_length_m",
        ])?;
        for r in &self.rows {
            w.write_record([
                r.object.clone(),
                r.trial.to_string(),
                format!("{:.4}", r.coverage_percent.to_f64_lossy()),
                r.waypoints.to_string(),
                format!("{:.6}", r.path_length_m.to_f64_lossy()),
            ])?;
        }
        finish(w)
    }

    pub fn summary_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["object", "coverage_percent", "waypoints", "path_length_m"])?;
        for r in self.summary.iter().chain(std::iter::once(&self.all)) {
            w.write_record([
                r.object.clone(),
                format!("{:.4}", r.coverage_percent.to_f64_lossy()),
                format!("{:.2}", r.waypoints.to_f64_lossy()),
                format!("{:.6}", r.path_length_m.to_f64_lossy()),
            ])?;
        }
        finish(w)
    }
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Invariant(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::Invariant(e.to_string()))
}

/// Planner seed of one benchmark trial.
pub fn trial_plan_seed(seed: u64, object: usize, trial: usize) -> u64 {
    stream_seed(
        seed,
        "benchmark-plan",
        ((object as u64) << 32) | trial as u64,
    )
}

/// Execution-noise seed of one benchmark trial.
pub fn trial_noise_seed(seed: u64, object: usize, trial: usize) -> u64 {
    stream_seed(
        seed,
        "benchmark-noise",
        ((object as u64) << 32) | trial as u64,
    )
}

/// Plans each object `trials` times with re-seeded planners and executes
/// every plan under `noise`.
pub fn benchmark<T: Real>(
    objects: &[NamedObject<T>],
    trials: usize,
    config: &PlanConfig<T>,
    noise: &NoiseModel<T>,
) -> Result<BenchmarkTable<T>> {
    let mut tables = benchmark_noise_levels(objects, trials, config, std::slice::from_ref(noise))?;
    Ok(tables.remove(0))
}

/// Like [`benchmark`], executing the same plans under several noise models.
/// Trial `t` of object `o` uses the same noise seed for every model whose
/// `seed` matches, so comparisons across noise levels are paired.
pub fn benchmark_noise_levels<T: Real>(
    objects: &[NamedObject<T>],
    trials: usize,
    config: &PlanConfig<T>,
    noises: &[NoiseModel<T>],
) -> Result<Vec<BenchmarkTable<T>>> {
    if trials == 0 {
        return Err(Error::Parameter("trials must be >= 1".into()));
    }
    if objects.is_empty() {
        return Err(Error::Parameter(
            "benchmark needs at least one object".into(),
        ));
    }
    config.validate()?;
    for n in noises {
        n.validate()?;
    }
    let scenes = objects
        .iter()
        .map(|o| generate_object(&o.spec).map(IndexedCloud::new))
        .collect::<Result<Vec<_>>>()?;

    let jobs: Vec<(usize, usize)> = (0..objects.len())
        .flat_map(|o| (0..trials).map(move |t| (o, t)))
        .collect();
    let per_job: Vec<Vec<TrialRow<T>>> = jobs
        .par_iter()
        .map(|&(o, t)| {
            let trial_config = PlanConfig {
                seed: trial_plan_seed(config.seed, o, t),
                ..config.clone()
            };
            let trajectory = plan(&scenes[o], &trial_config)?;
            noises
                .iter()
                .map(|noise| {
                    let noise = noise.with_seed(trial_noise_seed(noise.seed, o, t));
                    let report =
                        execute_and_evaluate(&scenes[o], &trajectory, &config.sponge, &noise)?;
                    Ok(TrialRow {
                        object: objects[o].name.clone(),
                        trial: t,
                        coverage_percent: report.coverage_percent,
                        waypoints: report.waypoint_count,
                        path_length_m: report.path_length,
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    Ok((0..noises.len())
        .map(|k| {
            let rows: Vec<TrialRow<T>> = per_job.iter().map(|r| r[k].clone()).collect();
            summarize(objects, trials, rows)
        })
        .collect())
}

fn summarize<T: Real>(
    objects: &[NamedObject<T>],
    trials: usize,
    rows: Vec<TrialRow<T>>,
) -> BenchmarkTable<T> {
    let nt = T::from_usize_lossy(trials);
    let summary: Vec<SummaryRow<T>> = rows
        .chunks(trials)
        .zip(objects)
        .map(|(chunk, o)| SummaryRow {
            object: o.name.clone(),
            coverage_percent: chunk.iter().map(|r| r.coverage_percent).sum::<T>() / nt,
            waypoints: chunk
                .iter()
                .map(|r| T::from_usize_lossy(r.waypoints))
                .sum::<T>()
                / nt,
            path_length_m: chunk.iter().map(|r| r.path_length_m).sum::<T>() / nt,
        })
        .collect();
    let no = T::from_usize_lossy(summary.len());
    let all = SummaryRow {
        object: "All".to_string(),
        coverage_percent: summary.iter().map(|r| r.coverage_percent).sum::<T>() / no,
        waypoints: summary.iter().map(|r| r.waypoints).sum::<T>() / no,
        path_length_m: summary.iter().map(|r| r.path_length_m).sum::<T>() / no,
    };
    BenchmarkTable { rows, summary, all }
}
