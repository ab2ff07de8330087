//! Sequence-level scoring of model predictions.
//!
//! SCAN predictions must equal the gold action sequence. NACS predictions are
//! correct when they parse and interpret back to the source actions; the gold
//! command itself is never required.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::corpus::{self, Direction, OrientedExample};
use crate::error::{Error, Result};
use crate::grammar::{self, Command};
use crate::semantics;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FailureReason {
    /// SCAN: the prediction differs from the gold actions.
    Mismatch,
    /// NACS: the prediction is not a command of the language.
    ParseFailure,
    /// NACS: the prediction parses but interprets to other actions.
    SemanticMismatch,
}

/// A raw model output for the test example at `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Prediction {
    pub index: usize,
    pub text: String,
}

impl Prediction {
    /// Trimmed, with whitespace runs collapsed to one space.
    pub fn normalized(&self) -> String {
        self.text.split_whitespace().collect::<Vec<_>>().join(" ")
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub index: usize,
    pub correct: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<FailureReason>,
    pub prediction: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub direction: Direction,
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub reasons: BTreeMap<FailureReason, usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub verdicts: Vec<Verdict>,
}

impl EvalReport {
    fn from_verdicts(direction: Direction, verdicts: Vec<Verdict>) -> Self {
        let total = verdicts.len();
        let correct = verdicts.iter().filter(|v| v.correct).count();
        let mut reasons = BTreeMap::new();
        for reason in verdicts.iter().filter_map(|v| v.reason) {
            *reasons.entry(reason).or_insert(0) += 1;
        }
        EvalReport {
            direction,
            total,
            correct,
            accuracy: if total == 0 {
                0.0
            } else {
                correct as f64 / total as f64
            },
            reasons,
            verdicts,
        }
    }

    /// JSON form; the per-example verdicts are included only on request.
    pub fn to_json(&self, include_verdicts: bool) -> Result<String> {
        let mut json = if include_verdicts {
            serde_json::to_string_pretty(self)?
        } else {
            serde_json::to_string_pretty(&EvalReport {
                verdicts: Vec::new(),
                ..self.clone()
            })?
        };
        json.push('\n');
        Ok(json)
    }

    pub fn write(&self, path: &Path, include_verdicts: bool) -> Result<()> {
        fs::write(path, self.to_json(include_verdicts)?).map_err(|e| Error::io(path, e))
    }
}

fn check_inputs(
    expected: Direction,
    gold: &[OrientedExample<'_>],
    preds: &[Prediction],
) -> Result<()> {
    if gold.len() != preds.len() {
        return Err(Error::Alignment {
            expected: gold.len(),
            found: preds.len(),
        });
    }
    match gold.iter().find(|g| g.direction != expected) {
        Some(g) => Err(Error::DirectionMismatch {
            expected,
            found: g.direction,
        }),
        None => Ok(()),
    }
}

/// Exact match against the gold action sequence.
pub fn eval_scan(gold: &[OrientedExample<'_>], preds: &[Prediction]) -> Result<EvalReport> {
    check_inputs(Direction::Scan, gold, preds)?;
    let verdicts = gold
        .iter()
        .zip(preds)
        .map(|(example, pred)| {
            let prediction = pred.normalized();
            let correct = prediction == example.target();
            Verdict {
                index: pred.index,
                correct,
                reason: (!correct).then_some(FailureReason::Mismatch),
                prediction,
            }
        })
        .collect();
    Ok(EvalReport::from_verdicts(Direction::Scan, verdicts))
}

/// Parse the predicted command and compare its interpretation with the
/// source actions.
pub fn eval_nacs(gold: &[OrientedExample<'_>], preds: &[Prediction]) -> Result<EvalReport> {
    check_inputs(Direction::Nacs, gold, preds)?;
    let verdicts = gold
        .iter()
        .zip(preds)
        .map(|(example, pred)| {
            let prediction = pred.normalized();
            let reason = nacs_failure(&prediction, example);
            Verdict {
                index: pred.index,
                correct: reason.is_none(),
                reason,
                prediction,
            }
        })
        .collect();
    Ok(EvalReport::from_verdicts(Direction::Nacs, verdicts))
}

fn nacs_failure(prediction: &str, example: &OrientedExample<'_>) -> Option<FailureReason> {
    let tree = prediction
        .parse::<Command>()
        .and_then(|command| grammar::parse(&command));
    match tree {
        Err(_) => Some(FailureReason::ParseFailure),
        Ok(tree) if semantics::interpret(&tree) != example.pair.actions => {
            Some(FailureReason::SemanticMismatch)
        }
        Ok(_) => None,
    }
}

pub fn evaluate(
    direction: Direction,
    gold: &[OrientedExample<'_>],
    preds: &[Prediction],
) -> Result<EvalReport> {
    match direction {
        Direction::Scan => eval_scan(gold, preds),
        Direction::Nacs => eval_nacs(gold, preds),
    }
}

/// One prediction per line, in test-file order.
pub fn read_predictions(path: &Path) -> Result<Vec<Prediction>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(index, line)| Prediction {
            index,
            text: line.to_owned(),
        })
        .collect())
}

/// Scores `predictions_path` against the test side of the dataset in
/// `dataset_dir`. The direction defaults to the one the dataset was written
/// in, and must agree with it when given. The report is written to
/// `report_path` when set.
pub fn score_files(
    dataset_dir: &Path,
    predictions_path: &Path,
    direction: Option<Direction>,
    report_path: Option<&Path>,
    include_verdicts: bool,
) -> Result<EvalReport> {
    let dataset = corpus::read_dataset(dataset_dir)?;
    let written = dataset.manifest.direction;
    let direction = direction.unwrap_or(written);
    if direction != written {
        return Err(Error::DirectionMismatch {
            expected: direction,
            found: written,
        });
    }
    let preds = read_predictions(predictions_path)?;
    let gold = corpus::orient(&dataset.test, direction);
    let report = evaluate(direction, &gold, &preds)?;
    if let Some(path) = report_path {
        report.write(path, include_verdicts)?;
    }
    Ok(report)
}
