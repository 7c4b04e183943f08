use serde::{Deserialize, Serialize};

use crate::contact::ContactMap;
use crate::error::{Error, Result};
use crate::Real;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct F1Score {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Confusion counts of a predicted mask against a reference mask.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Confusion {
    pub true_positive: usize,
    pub false_positive: usize,
    pub false_negative: usize,
}

impl Confusion {
    pub fn of(predicted: &ContactMap, truth: &ContactMap) -> Result<Self> {
        if predicted.len() != truth.len() {
            return Err(Error::Parameter(format!(
                "masks differ in length: {} vs {}",
                predicted.len(),
                truth.len()
            )));
        }
        let mut c = Confusion::default();
        for (&p, &t) in predicted.mask.iter().zip(&truth.mask) {
            match (p, t) {
                (true, true) => c.true_positive += 1,
                (true, false) => c.false_positive += 1,
                (false, true) => c.false_negative += 1,
                (false, false) => {}
            }
        }
        Ok(c)
    }

    pub fn merge(self, other: Confusion) -> Confusion {
        Confusion {
            true_positive: self.true_positive + other.true_positive,
            false_positive: self.false_positive + other.false_positive,
            false_negative: self.false_negative + other.false_negative,
        }
    }

    /// Both masks empty scores 1; otherwise zero true positives score 0.
    pub fn score(&self) -> F1Score {
        let tp = self.true_positive as f64;
        let predicted = tp + self.false_positive as f64;
        let actual = tp + self.false_negative as f64;
        if predicted == 0.0 && actual == 0.0 {
            return F1Score {
                precision: 1.0,
                recall: 1.0,
                f1: 1.0,
            };
        }
        if self.true_positive == 0 {
            return F1Score {
                precision: 0.0,
                recall: 0.0,
                f1: 0.0,
            };
        }
        let precision = tp / predicted;
        let recall = tp / actual;
        F1Score {
            precision,
            recall,
            f1: 2.0 * precision * recall / (precision + recall),
        }
    }
}

/// Per-point precision, recall and F1 of `predicted` against `truth`.
pub fn f1_contact(predicted: &ContactMap, truth: &ContactMap) -> Result<F1Score> {
    Ok(Confusion::of(predicted, truth)?.score())
}

/// Cleaning coverage from marker pixel counts, `(1 - after / before) * 100`.
///
/// More pixels after than before gives a negative value, which is returned
/// as is and logged.
pub fn pixel_coverage<T: Real>(n_before: u64, n_after: u64) -> Result<T> {
    if n_before == 0 {
        return Err(Error::Parameter("n_before must be > 0".into()));
    }
    let before = T::from_u64(n_before).unwrap_or_else(T::nan);
    let after = T::from_u64(n_after).unwrap_or_else(T::nan);
    let coverage = (T::one() - after / before) * T::lit(100.0);
    if n_after > n_before {
        log::warn!(
            "pixel count grew from {n_before} to {n_after}; coverage {coverage} is negative"
        );
    }
    Ok(coverage)
}
