//! Labeled press interactions over synthetic objects, split 70/15/15 per
//! object into train, validation and test.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::contact::{
    label_contact, press, ContactMap, ContactMapRecord, MapSource, SpongeModel, ToolPose,
};
use crate::error::{Error, Result};
use crate::geometry::{generate_object, IndexedCloud, NamedObject, ObjectSpec, PointCloud};
use crate::{rng, Real, SCHEMA_VERSION};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Split {
    Train,
    Val,
    Test,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RecordFlags {
    pub force_unreached: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct InteractionRecord<T> {
    pub object_id: String,
    pub record: usize,
    pub pose: ToolPose<T>,
    /// `[sin(theta), cos(theta)]` of the pose.
    pub feature: [T; 2],
    pub ground_truth: ContactMapRecord<T>,
    pub press_depth: T,
    pub net_force: T,
    pub flags: RecordFlags,
}

impl<T: Real> InteractionRecord<T> {
    pub fn ground_truth_map(&self) -> Result<ContactMap> {
        self.ground_truth.to_map()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct ObjectManifest<T> {
    pub object_id: String,
    pub spec: ObjectSpec<T>,
    pub pose_seed: u64,
    pub record_count: usize,
    pub records_file: String,
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

impl<T> ObjectManifest<T> {
    pub fn split_of(&self, record: usize) -> Option<Split> {
        if self.train.contains(&record) {
            Some(Split::Train)
        } else if self.val.contains(&record) {
            Some(Split::Val)
        } else if self.test.contains(&record) {
            Some(Split::Test)
        } else {
            None
        }
    }

    pub fn split(&self, split: Split) -> &[usize] {
        match split {
            Split::Train => &self.train,
            Split::Val => &self.val,
            Split::Test => &self.test,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Real")]
pub struct DatasetManifest<T> {
    pub schema_version: u32,
    pub seed: u64,
    pub contacts_per_object: usize,
    pub sponge: SpongeModel<T>,
    pub objects: Vec<ObjectManifest<T>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset<T> {
    pub manifest: DatasetManifest<T>,
    /// Records per object, in manifest order.
    pub records: Vec<Vec<InteractionRecord<T>>>,
}

/// Uniform contact point and uniform yaw in `[0, 2pi)`.
pub fn pose_sampler<T: Real, R: Rng + ?Sized>(cloud: &PointCloud<T>, rng: &mut R) -> ToolPose<T> {
    let index = rng.random_range(0..cloud.len());
    let yaw: f64 = rng.random::<f64>() * std::f64::consts::TAU;
    ToolPose::new(index, T::lit(yaw))
}

/// Train/val/test sizes for `n` records: `round(0.7 n)`, `round(0.15 n)`
/// and the remainder.
pub fn split_sizes(n: usize) -> (usize, usize, usize) {
    let train = (7 * n + 5) / 10;
    let val = ((15 * n + 50) / 100).min(n - train);
    (train, val, n - train - val)
}

fn assign_splits(n: usize, seed: u64) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = rng::stream(seed, "split", 0);
    // Fisher-Yates
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        order.swap(i, j);
    }
    let (train, val, _) = split_sizes(n);
    let mut t = order[..train].to_vec();
    let mut v = order[train..train + val].to_vec();
    let mut s = order[train + val..].to_vec();
    t.sort_unstable();
    v.sort_unstable();
    s.sort_unstable();
    (t, v, s)
}

fn records_file_name(object_id: &str) -> String {
    let safe: String = object_id
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || c == '-' || c == '_' {
                c
            } else {
                '_'
            }
        })
        .collect();
    format!("records_{safe}.jsonl")
}

/// Samples `contacts_per_object` presses on every object, labels them with
/// the press model and assigns splits. Objects run in parallel; each uses
/// streams derived from `seed` and its position in `objects`.
pub fn generate_dataset<T: Real>(
    objects: &[NamedObject<T>],
    contacts_per_object: usize,
    sponge: &SpongeModel<T>,
    seed: u64,
) -> Result<Dataset<T>> {
    if contacts_per_object == 0 {
        return Err(Error::Parameter("contacts_per_object must be >= 1".into()));
    }
    sponge.validate()?;
    let per_object: Vec<(ObjectManifest<T>, Vec<InteractionRecord<T>>)> = objects
        .par_iter()
        .enumerate()
        .map(|(k, object)| {
            let scene = IndexedCloud::new(generate_object(&object.spec)?);
            let pose_seed = rng::stream_seed(seed, "dataset-poses", k as u64);
            let mut rng = rng::StreamRng::seed_from_u64(pose_seed);
            let mut records = Vec::with_capacity(contacts_per_object);
            for record in 0..contacts_per_object {
                let pose = pose_sampler(scene.cloud(), &mut rng);
                let result = press(sponge, &scene, &pose)?;
                let map = label_contact(&result, sponge, &scene);
                debug_assert_eq!(map.source, MapSource::GroundTruth);
                records.push(InteractionRecord {
                    object_id: object.name.clone(),
                    record,
                    pose,
                    feature: pose.feature(),
                    ground_truth: ContactMapRecord::new(object.name.clone(), &pose, &map),
                    press_depth: result.press_depth,
                    net_force: result.net_force,
                    flags: RecordFlags {
                        force_unreached: result.force_unreached,
                    },
                });
            }
            let (train, val, test) = assign_splits(
                contacts_per_object,
                rng::stream_seed(seed, "dataset-split", k as u64),
            );
            let manifest = ObjectManifest {
                object_id: object.name.clone(),
                spec: object.spec.clone(),
                pose_seed,
                record_count: contacts_per_object,
                records_file: records_file_name(&object.name),
                train,
                val,
                test,
            };
            Ok((manifest, records))
        })
        .collect::<Result<_>>()?;

    let (manifests, records): (Vec<_>, Vec<_>) = per_object.into_iter().unzip();
    Ok(Dataset {
        manifest: DatasetManifest {
            schema_version: SCHEMA_VERSION,
            seed,
            contacts_per_object,
            sponge: sponge.clone(),
            objects: manifests,
        },
        records,
    })
}

/// Writes `manifest.json` and one JSON-lines record file per object into
/// `dir`. Files written before a failure are removed.
pub fn write_dataset<T: Real>(dataset: &Dataset<T>, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let outcome = write_files(dataset, dir, &mut written);
    if outcome.is_err() {
        for path in &written {
            let _ = fs::remove_file(path);
        }
        written.clear();
    }
    outcome.map(|_| written)
}

fn write_files<T: Real>(
    dataset: &Dataset<T>,
    dir: &Path,
    written: &mut Vec<PathBuf>,
) -> Result<()> {
    for (object, records) in dataset.manifest.objects.iter().zip(&dataset.records) {
        let path = dir.join(&object.records_file);
        let mut file = fs::File::create(&path).map_err(|e| Error::io(&path, e))?;
        written.push(path.clone());
        let mut buf = Vec::new();
        for r in records {
            serde_json::to_writer(&mut buf, r).map_err(|e| Error::json(&path, e))?;
            buf.push(b'\n');
        }
        file.write_all(&buf).map_err(|e| Error::io(&path, e))?;
    }
    let path = dir.join(MANIFEST_FILE);
    let json =
        serde_json::to_string_pretty(&dataset.manifest).map_err(|e| Error::json(&path, e))?;
    fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
    written.push(path);
    Ok(())
}

pub fn read_manifest<T: Real>(path: &Path) -> Result<DatasetManifest<T>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::json(path, e))
}

pub fn read_records<T: Real>(path: &Path) -> Result<Vec<InteractionRecord<T>>> {
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let record = serde_json::from_str(&line).map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message: e.to_string(),
        })?;
        out.push(record);
    }
    Ok(out)
}


/// F1 of a predictor against stored ground truth over one split.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PredictorEvaluation {
    pub predictor: String,
    pub split: Split,
    pub records: usize,
    /// Mean of the per-record F1 scores.
    pub mean_f1: f64,
    /// Scores over all points of all records pooled together.
    pub pooled: crate::evaluator::F1Score,
}

pub fn evaluate_predictor<T, P>(
    dataset: &Dataset<T>,
    split: Split,
    predictor: &P,
) -> Result<PredictorEvaluation>
where
    T: Real,
    P: crate::contact::ContactPredictor<T> + ?Sized,
{
    use crate::evaluator::Confusion;

    let mut pooled = Confusion::default();
    let mut f1_sum = 0.0;
    let mut count = 0;
    for (object, records) in dataset.manifest.objects.iter().zip(&dataset.records) {
        let scene = IndexedCloud::new(generate_object(&object.spec)?);
        for &k in object.split(split) {
            let record = records
                .get(k)
                .ok_or_else(|| Error::Invariant(format!("split references missing record {k}")))?;
            let truth = record.ground_truth_map()?;
            let predicted = crate::contact::predict_contact(predictor, &scene, &record.pose)?;
            let c = Confusion::of(&predicted, &truth)?;
            f1_sum += c.score().f1;
            pooled = pooled.merge(c);
            count += 1;
        }
    }
    Ok(PredictorEvaluation {
        predictor: predictor.id(),
        split,
        records: count,
        mean_f1: if count > 0 {
            f1_sum / count as f64
        } else {
            0.0
        },
        pooled: pooled.score(),
    })
}
