use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use wipeplan::catalog::default_objects;
use wipeplan::contact::{ContactMapRecord, PressPredictor, SpongeModel};
use wipeplan::dataset::{
    evaluate_predictor, generate_dataset, read_manifest, read_records, write_dataset, Dataset,
    PredictorEvaluation, Split, MANIFEST_FILE,
};
use wipeplan::evaluator::{
    benchmark, execute_and_evaluate, f1_contact, CoverageReport, NoiseModel, DEFAULT_DEFICIT_FACTOR,
};
use wipeplan::geometry::{
    generate_object, load_cloud, save_cloud, CloudFormat, IndexedCloud, NamedObject, ObjectSpec,
    DEFAULT_SAMPLE_COUNT,
};
use wipeplan::planner::{plan, PlanConfig, TrajectoryDocument};
use wipeplan::{PointCloud64, SCHEMA_VERSION};

use crate::args::{BenchmarkArgs, EvaluateArgs, F1Args, GenDatasetArgs, GenObjectArgs, PlanArgs};
use crate::config::{
    parent_dir, pick, read_json, require, resolve_sponge, sponge_overridden, write_json,
    write_text, RunConfig,
};
use crate::error::{CliError, CliResult};

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_CONTACTS: usize = 1000;
pub const DEFAULT_TRIALS: usize = 20;
pub const BENCHMARK_CSV: &str = "benchmark.csv";
pub const SUMMARY_CSV: &str = "summary.csv";

/// Global options after merging flags with the config file.
pub struct Globals {
    pub seed_flag: Option<u64>,
    pub seed: u64,
    pub threads: Option<usize>,
    pub file: RunConfig,
}

impl Globals {
    pub fn new(seed_flag: Option<u64>, threads_flag: Option<usize>, file: RunConfig) -> Self {
        Self {
            seed_flag,
            seed: seed_flag.or(file.seed).unwrap_or(DEFAULT_SEED),
            threads: threads_flag.or(file.threads),
            file,
        }
    }

    /// Seed precedence: flag, config file, `fallback`, default.
    pub fn seed_or(&self, fallback: Option<u64>) -> u64 {
        self.seed_flag
            .or(self.file.seed)
            .or(fallback)
            .unwrap_or(DEFAULT_SEED)
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ObjectsFile {
    List(Vec<NamedObject<f64>>),
    Wrapped { objects: Vec<NamedObject<f64>> },
}

fn load_objects(path: Option<&Path>) -> CliResult<Vec<NamedObject<f64>>> {
    let objects = match path {
        None => default_objects(),
        Some(p) => match read_json::<ObjectsFile>(p)? {
            ObjectsFile::List(v) | ObjectsFile::Wrapped { objects: v } => v,
        },
    };
    if objects.is_empty() {
        let source = path.map_or_else(|| "catalog".to_string(), |p| p.display().to_string());
        return Err(CliError::Core(wipeplan::Error::EmptyInput(PathBuf::from(
            source,
        ))));
    }
    Ok(objects)
}

fn load_scene(path: &Path) -> CliResult<IndexedCloud<f64>> {
    let cloud: PointCloud64 = load_cloud(path, CloudFormat::from_path(path))?;
    Ok(IndexedCloud::new(cloud))
}

fn object_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "object".into())
}

fn noise_model(
    g: &Globals,
    sigma: Option<f64>,
    prob: Option<f64>,
    factor: Option<f64>,
) -> NoiseModel<f64> {
    NoiseModel {
        position_sigma: pick(sigma, &g.file.noise_sigma).unwrap_or(0.0),
        force_deficit_prob: pick(prob, &g.file.force_deficit).unwrap_or(0.0),
        deficit_factor: pick(factor, &g.file.deficit_factor).unwrap_or(DEFAULT_DEFICIT_FACTOR),
        seed: g.seed,
    }
}

fn emit<S: Serialize>(value: &S, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => write_json(path, value),
        None => {
            let text = serde_json::to_string_pretty(value).map_err(|e| {
                CliError::Core(wipeplan::Error::Invariant(format!(
                    "serializing output: {e}"
                )))
            })?;
            println!("{text}");
            Ok(())
        }
    }
}

pub fn gen_object(g: &Globals, args: GenObjectArgs) -> CliResult<()> {
    let f = &g.file;
    let preset_name = pick(args.preset, &f.preset);
    let preset = match &preset_name {
        None => None,
        Some(name) => Some(
            default_objects::<f64>()
                .into_iter()
                .find(|o| &o.name == name)
                .ok_or_else(|| CliError::Usage(format!("unknown preset '{name}'")))?,
        ),
    };
    let base = preset.as_ref().map(|o| o.spec.clone());
    let spec = ObjectSpec {
        kind: require(
            pick(args.kind.map(Into::into), &f.kind).or(base.as_ref().map(|s| s.kind)),
            "kind",
        )?,
        radius: require(
            pick(args.radius, &f.radius).or(base.as_ref().map(|s| s.radius)),
            "radius",
        )?,
        depth: pick(args.depth, &f.depth)
            .or(base.as_ref().map(|s| s.depth))
            .unwrap_or(0.0),
        rim_curvature: pick(args.rim_curvature, &f.rim_curvature)
            .or(base.as_ref().map(|s| s.rim_curvature))
            .unwrap_or(2.0),
        sample_count: pick(args.samples, &f.samples)
            .or(base.as_ref().map(|s| s.sample_count))
            .unwrap_or(DEFAULT_SAMPLE_COUNT),
        seed: g.seed_or(base.as_ref().map(|s| s.seed)),
    };
    let out = require(pick(args.out, &f.out), "out")?;
    let cloud = generate_object(&spec)?;
    save_cloud(&cloud, &out, CloudFormat::from_path(&out))?;

    let mut rc = RunConfig::resolved("gen-object", spec.seed, g.threads);
    rc.preset = preset_name;
    rc.kind = Some(spec.kind);
    rc.radius = Some(spec.radius);
    rc.depth = Some(spec.depth);
    rc.rim_curvature = Some(spec.rim_curvature);
    rc.samples = Some(spec.sample_count);
    rc.out = Some(out.clone());
    rc.write_into(&parent_dir(&out))?;
    println!("wrote {} points to {}", cloud.len(), out.display());
    Ok(())
}

pub fn gen_dataset(g: &Globals, args: GenDatasetArgs) -> CliResult<()> {
    let f = &g.file;
    let objects_path = pick(args.objects, &f.objects);
    let objects = load_objects(objects_path.as_deref())?;
    let contacts = pick(args.contacts, &f.contacts).unwrap_or(DEFAULT_CONTACTS);
    let out = require(pick(args.out, &f.out), "out")?;
    let sponge = resolve_sponge(SpongeModel::default(), &f.sponge, &args.sponge);

    let dataset = generate_dataset(&objects, contacts, &sponge, g.seed)?;
    let files = write_dataset(&dataset, &out)?;

    let mut rc = RunConfig::resolved("gen-dataset", g.seed, g.threads);
    rc.objects = objects_path;
    rc.contacts = Some(contacts);
    rc.out = Some(out.clone());
    rc.sponge = Some(sponge);
    rc.write_into(&out)?;
    let records: usize = dataset.records.iter().map(Vec::len).sum();
    println!(
        "wrote {records} records in {} files to {}",
        files.len(),
        out.display()
    );
    Ok(())
}

pub fn plan_cmd(g: &Globals, args: PlanArgs) -> CliResult<()> {
    let f = &g.file;
    let cloud_path = require(pick(args.cloud, &f.cloud), "cloud")?;
    let out = require(pick(args.out, &f.out), "out")?;
    let config = PlanConfig {
        n_sets: pick(args.n_sets, &f.n_sets).unwrap_or(PlanConfig::<f64>::default().n_sets),
        seed: g.seed,
        sponge: resolve_sponge(SpongeModel::default(), &f.sponge, &args.sponge),
        closed_tour: args.closed || f.closed_tour.unwrap_or(false),
        ..PlanConfig::default()
    };
    config.validate()?;
    let scene = load_scene(&cloud_path)?;
    let trajectory = plan(&scene, &config)?;
    let doc = TrajectoryDocument::new(
        object_name(&cloud_path),
        scene.cloud(),
        &config,
        &trajectory,
    );
    write_json(&out, &doc)?;

    let mut rc = RunConfig::resolved("plan", g.seed, g.threads);
    rc.cloud = Some(cloud_path);
    rc.out = Some(out.clone());
    rc.n_sets = Some(config.n_sets);
    rc.closed_tour = Some(config.closed_tour);
    rc.sponge = Some(config.sponge);
    rc.write_into(&parent_dir(&out))?;
    println!(
        "planned {} waypoints, path length {:.6} m, written to {}",
        trajectory.len(),
        trajectory.path_length,
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct EvaluationDocument<'a> {
    schema_version: u32,
    object: &'a str,
    cloud: &'a Path,
    traj: &'a Path,
    sponge: &'a SpongeModel<f64>,
    noise: &'a NoiseModel<f64>,
    report: &'a CoverageReport<f64>,
}

pub fn evaluate_cmd(g: &Globals, args: EvaluateArgs) -> CliResult<()> {
    let f = &g.file;
    let cloud_path = require(pick(args.cloud, &f.cloud), "cloud")?;
    let traj_path = require(pick(args.traj, &f.traj), "traj")?;
    let out = pick(args.out, &f.out);
    let scene = load_scene(&cloud_path)?;
    let doc: TrajectoryDocument<f64> = read_json(&traj_path)?;
    if doc.schema_version != SCHEMA_VERSION {
        return Err(wipeplan::Error::Parse {
            path: traj_path,
            line: 1,
            message: format!("schema_version {} is not supported", doc.schema_version),
        }
        .into());
    }
    let trajectory = doc.to_trajectory(scene.cloud())?;
    let sponge = resolve_sponge(doc.config.sponge.clone(), &f.sponge, &args.sponge);
    let noise = noise_model(g, args.noise_sigma, args.force_deficit, args.deficit_factor);
    let report = execute_and_evaluate(&scene, &trajectory, &sponge, &noise)?;

    emit(
        &EvaluationDocument {
            schema_version: SCHEMA_VERSION,
            object: &doc.object,
            cloud: &cloud_path,
            traj: &traj_path,
            sponge: &sponge,
            noise: &noise,
            report: &report,
        },
        out.as_deref(),
    )?;
    if let Some(out) = &out {
        let mut rc = RunConfig::resolved("evaluate", g.seed, g.threads);
        rc.cloud = Some(cloud_path.clone());
        rc.traj = Some(traj_path.clone());
        rc.out = Some(out.clone());
        rc.noise_sigma = Some(noise.position_sigma);
        rc.force_deficit = Some(noise.force_deficit_prob);
        rc.deficit_factor = Some(noise.deficit_factor);
        if sponge_overridden(&args.sponge) || f.sponge.is_some() {
            rc.sponge = Some(sponge.clone());
        }
        rc.write_into(&parent_dir(out))?;
        println!(
            "coverage {:.4} % with {} waypoints, written to {}",
            report.coverage_percent,
            report.waypoint_count,
            out.display()
        );
    }
    Ok(())
}

pub fn benchmark_cmd(g: &Globals, args: BenchmarkArgs) -> CliResult<()> {
    let f = &g.file;
    let objects_path = pick(args.objects, &f.objects);
    let objects = load_objects(objects_path.as_deref())?;
    let trials = pick(args.trials, &f.trials).unwrap_or(DEFAULT_TRIALS);
    let out = pick(args.out, &f.out).unwrap_or_else(|| PathBuf::from("."));
    let config = PlanConfig {
        n_sets: pick(args.n_sets, &f.n_sets).unwrap_or(PlanConfig::<f64>::default().n_sets),
        seed: g.seed,
        sponge: resolve_sponge(SpongeModel::default(), &f.sponge, &args.sponge),
        ..PlanConfig::default()
    };
    let noise = noise_model(g, args.noise_sigma, args.force_deficit, args.deficit_factor);
    let table = benchmark(&objects, trials, &config, &noise)?;
    write_text(&out.join(BENCHMARK_CSV), &table.trials_csv()?)?;
    write_text(&out.join(SUMMARY_CSV), &table.summary_csv()?)?;

    let mut rc = RunConfig::resolved("benchmark", g.seed, g.threads);
    rc.objects = objects_path;
    rc.trials = Some(trials);
    rc.n_sets = Some(config.n_sets);
    rc.noise_sigma = Some(noise.position_sigma);
    rc.force_deficit = Some(noise.force_deficit_prob);
    rc.deficit_factor = Some(noise.deficit_factor);
    rc.out = Some(out.clone());
    rc.sponge = Some(config.sponge);
    rc.write_into(&out)?;
    println!(
        "{} objects x {trials} trials: mean coverage {:.4} %, mean waypoints {:.2}; tables in {}",
        objects.len(),
        table.all.coverage_percent,
        table.all.waypoints,
        out.display()
    );
    Ok(())
}

#[derive(Serialize)]
struct MapScoreDocument<'a> {
    schema_version: u32,
    predicted: &'a Path,
    truth: &'a Path,
    precision: f64,
    recall: f64,
    f1: f64,
}

#[derive(Serialize)]
struct SplitScoreDocument<'a> {
    schema_version: u32,
    dataset: &'a Path,
    sponge: &'a SpongeModel<f64>,
    #[serde(flatten)]
    evaluation: &'a PredictorEvaluation,
}

pub fn f1_cmd(g: &Globals, args: F1Args) -> CliResult<()> {
    let f = &g.file;
    let out = pick(args.out, &f.out);
    let predicted = pick(args.predicted, &f.predicted);
    let truth = pick(args.truth, &f.truth);
    let dataset_dir = pick(args.dataset, &f.dataset);
    let mut rc = RunConfig::resolved("f1", g.seed, g.threads);
    rc.out = out.clone();

    match (predicted, truth, dataset_dir) {
        (Some(p), Some(t), None) => {
            let pm: ContactMapRecord<f64> = read_json(&p)?;
            let tm: ContactMapRecord<f64> = read_json(&t)?;
            let score = f1_contact(&pm.to_map()?, &tm.to_map()?)?;
            emit(
                &MapScoreDocument {
                    schema_version: SCHEMA_VERSION,
                    predicted: &p,
                    truth: &t,
                    precision: score.precision,
                    recall: score.recall,
                    f1: score.f1,
                },
                out.as_deref(),
            )?;
            rc.predicted = Some(p);
            rc.truth = Some(t);
        }
        (None, None, Some(dir)) => {
            let manifest = read_manifest::<f64>(&dir.join(MANIFEST_FILE))?;
            let records = manifest
                .objects
                .iter()
                .map(|o| read_records::<f64>(&dir.join(&o.records_file)))
                .collect::<wipeplan::Result<Vec<_>>>()?;
            let sponge = resolve_sponge(manifest.sponge.clone(), &f.sponge, &args.sponge);
            let split: Split = pick(args.split.map(Into::into), &f.split).unwrap_or(Split::Test);
            let dataset = Dataset { manifest, records };
            let evaluation =
                evaluate_predictor(&dataset, split, &PressPredictor::new(sponge.clone()))?;
            emit(
                &SplitScoreDocument {
                    schema_version: SCHEMA_VERSION,
                    dataset: &dir,
                    sponge: &sponge,
                    evaluation: &evaluation,
                },
                out.as_deref(),
            )?;
            rc.dataset = Some(dir);
            rc.split = Some(split);
            rc.sponge = Some(sponge);
        }
        _ => {
            return Err(CliError::Usage(
                "give either --predicted and --truth, or --dataset".into(),
            ))
        }
    }
    if let Some(out) = &out {
        rc.write_into(&parent_dir(out))?;
    }
    Ok(())
}
