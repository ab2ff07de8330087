//! Python bindings for `scan_nacs`.
//!
//! Commands and action sequences cross the boundary as space-separated
//! strings.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyOSError, PyValueError};
use pyo3::prelude::*;

use scan_nacs::corpus::{self, Direction, HeldOutPrimitive, SplitSpec};
use scan_nacs::{evaluator, grammar, semantics, stats, Error};

fn to_py(err: Error) -> PyErr {
    match err {
        Error::Io { .. } => PyOSError::new_err(err.to_string()),
        _ => PyValueError::new_err(err.to_string()),
    }
}

fn direction(name: &str) -> PyResult<Direction> {
    name.parse().map_err(to_py)
}

/// The grammar's productions, one per string, in canonical order.
#[pyfunction]
fn productions() -> Vec<String> {
    grammar::productions()
        .iter()
        .map(|p| p.to_string())
        .collect()
}

/// Every command derivable from `root` (C, S, V, D or U), sorted.
#[pyfunction]
#[pyo3(signature = (root = "C"))]
fn enumerate(root: &str) -> PyResult<Vec<String>> {
    let root: grammar::Nonterminal = root.parse().map_err(to_py)?;
    Ok(grammar::enumerate_trees(root)
        .iter()
        .map(|t| t.render().to_string())
        .collect())
}

/// The derivation tree of `command` as an s-expression.
#[pyfunction]
fn parse(command: &str) -> PyResult<String> {
    grammar::parse_str(command)
        .map(|t| t.to_string())
        .map_err(to_py)
}

/// The action sequence a command denotes.
#[pyfunction]
fn translate(command: &str) -> PyResult<String> {
    let command: grammar::Command = command.parse().map_err(to_py)?;
    semantics::translate(&command)
        .map(|a| a.to_string())
        .map_err(to_py)
}

/// All (command, actions) pairs of the universe.
#[pyfunction]
fn build_universe() -> Vec<(String, String)> {
    corpus::build_universe()
        .iter()
        .map(|p| (p.command.to_string(), p.actions.to_string()))
        .collect()
}

/// JSON statistics of the universe and the length and primitive splits.
#[pyfunction]
fn stats_json() -> PyResult<String> {
    let universe = corpus::build_universe();
    let specs = [
        SplitSpec::length(corpus::DEFAULT_LENGTH_THRESHOLD, Direction::Scan).map_err(to_py)?,
        SplitSpec::primitive(HeldOutPrimitive::Jump, Direction::Scan),
        SplitSpec::primitive(HeldOutPrimitive::TurnLeft, Direction::Scan),
    ];
    let datasets = specs
        .iter()
        .map(|s| corpus::split(s, &universe))
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    let refs: Vec<_> = datasets.iter().collect();
    serde_json::to_string(&stats::summarize(&universe, &refs))
        .map_err(|e| PyValueError::new_err(e.to_string()))
}

#[pyclass(frozen)]
struct InverseIndex {
    inner: semantics::InverseIndex,
}

#[pymethods]
impl InverseIndex {
    #[new]
    fn new() -> Self {
        InverseIndex {
            inner: semantics::build_inverse_index(),
        }
    }

    /// Commands interpreting to `actions`; empty for unreachable sequences.
    fn commands_for(&self, actions: &str) -> PyResult<Vec<String>> {
        let actions: semantics::ActionSequence = actions.parse().map_err(to_py)?;
        Ok(self
            .inner
            .commands_for(&actions)
            .iter()
            .map(|c| c.to_string())
            .collect())
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }
}

#[pyclass(frozen)]
struct Dataset {
    inner: corpus::Dataset,
}

#[pymethods]
impl Dataset {
    /// Splits the universe. `split` is `simple`, `length` or `primitive`.
    #[new]
    #[pyo3(signature = (split, direction = "scan", fraction = None, threshold = None, primitive = None, seed = None))]
    fn new(
        split: &str,
        direction: &str,
        fraction: Option<f64>,
        threshold: Option<usize>,
        primitive: Option<&str>,
        seed: Option<u64>,
    ) -> PyResult<Self> {
        let direction = self::direction(direction)?;
        let spec = match split {
            "simple" => {
                let seed =
                    seed.ok_or_else(|| PyValueError::new_err("simple split needs a seed"))?;
                SplitSpec::simple(
                    fraction.unwrap_or(corpus::DEFAULT_TRAIN_FRACTION),
                    seed,
                    direction,
                )
                .map_err(to_py)?
            }
            "length" => SplitSpec::length(
                threshold.unwrap_or(corpus::DEFAULT_LENGTH_THRESHOLD),
                direction,
            )
            .map_err(to_py)?,
            "primitive" => {
                let primitive = match primitive {
                    Some("jump") => HeldOutPrimitive::Jump,
                    Some("turn-left") => HeldOutPrimitive::TurnLeft,
                    other => {
                        return Err(PyValueError::new_err(format!(
                            "primitive must be `jump` or `turn-left`, got {other:?}"
                        )))
                    }
                };
                SplitSpec::primitive(primitive, direction)
            }
            other => return Err(PyValueError::new_err(format!("unknown split `{other}`"))),
        };
        let universe = corpus::build_universe();
        corpus::split(&spec, &universe)
            .map(|inner| Dataset { inner })
            .map_err(to_py)
    }

    #[staticmethod]
    fn read(directory: PathBuf) -> PyResult<Self> {
        corpus::read_dataset(&directory)
            .map(|inner| Dataset { inner })
            .map_err(to_py)
    }

    /// Writes train.txt, test.txt and manifest.json, oriented as `direction`
    /// (the split's own direction by default).
    #[pyo3(signature = (directory, direction = None))]
    fn write(&self, directory: PathBuf, direction: Option<&str>) -> PyResult<()> {
        let direction = match direction {
            Some(d) => self::direction(d)?,
            None => self.inner.spec.direction,
        };
        corpus::write_dataset(&self.inner, direction, &directory).map_err(to_py)
    }

    /// (source, target) lines of the train side in the split's direction.
    fn train(&self) -> Vec<(String, String)> {
        oriented(&self.inner.train, self.inner.spec.direction)
    }

    fn test(&self) -> Vec<(String, String)> {
        oriented(&self.inner.test, self.inner.spec.direction)
    }

    fn manifest_json(&self) -> PyResult<String> {
        serde_json::to_string_pretty(&self.inner.manifest)
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset({} train, {} test, {})",
            self.inner.train.len(),
            self.inner.test.len(),
            self.inner.spec.direction
        )
    }
}

fn oriented(pairs: &[corpus::TaskPair], direction: Direction) -> Vec<(String, String)> {
    corpus::orient(pairs, direction)
        .iter()
        .map(|e| (e.source(), e.target()))
        .collect()
}

#[pyclass(frozen)]
struct EvalReport {
    inner: evaluator::EvalReport,
}

#[pymethods]
impl EvalReport {
    #[getter]
    fn direction(&self) -> String {
        self.inner.direction.to_string()
    }

    #[getter]
    fn total(&self) -> usize {
        self.inner.total
    }

    #[getter]
    fn correct(&self) -> usize {
        self.inner.correct
    }

    #[getter]
    fn accuracy(&self) -> f64 {
        self.inner.accuracy
    }

    #[getter]
    fn reasons(&self) -> BTreeMap<String, usize> {
        self.inner
            .reasons
            .iter()
            .map(|(reason, count)| {
                let name = serde_json::to_value(reason)
                    .ok()
                    .and_then(|v| v.as_str().map(str::to_owned))
                    .unwrap_or_default();
                (name, *count)
            })
            .collect()
    }

    #[pyo3(signature = (include_verdicts = false))]
    fn to_json(&self, include_verdicts: bool) -> PyResult<String> {
        self.inner.to_json(include_verdicts).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "EvalReport({} accuracy={:.4} {}/{})",
            self.inner.direction, self.inner.accuracy, self.inner.correct, self.inner.total
        )
    }
}

/// Scores `predictions` against the gold commands. In `scan` the predictions
/// are action sequences; in `nacs` they are commands for the gold commands'
/// action sequences.
#[pyfunction]
fn score(
    direction: &str,
    gold_commands: Vec<String>,
    predictions: Vec<String>,
) -> PyResult<EvalReport> {
    let direction = self::direction(direction)?;
    let pairs = gold_commands
        .iter()
        .map(|c| {
            c.parse()
                .and_then(|c: grammar::Command| corpus::TaskPair::from_command(&c))
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    let preds: Vec<_> = predictions
        .into_iter()
        .enumerate()
        .map(|(index, text)| evaluator::Prediction { index, text })
        .collect();
    let gold = corpus::orient(&pairs, direction);
    evaluator::evaluate(direction, &gold, &preds)
        .map(|inner| EvalReport { inner })
        .map_err(to_py)
}

/// Scores a predictions file against a dataset directory's test side.
#[pyfunction]
#[pyo3(signature = (dataset_dir, predictions_path, direction = None, report_path = None, include_verdicts = false))]
fn score_files(
    dataset_dir: PathBuf,
    predictions_path: PathBuf,
    direction: Option<&str>,
    report_path: Option<PathBuf>,
    include_verdicts: bool,
) -> PyResult<EvalReport> {
    let direction = direction.map(self::direction).transpose()?;
    evaluator::score_files(
        &dataset_dir,
        &predictions_path,
        direction,
        report_path.as_deref(),
        include_verdicts,
    )
    .map(|inner| EvalReport { inner })
    .map_err(to_py)
}

#[pymodule]
fn scan_nacs_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(productions, m)?)?;
    m.add_function(wrap_pyfunction!(enumerate, m)?)?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(translate, m)?)?;
    m.add_function(wrap_pyfunction!(build_universe, m)?)?;
    m.add_function(wrap_pyfunction!(stats_json, m)?)?;
    m.add_function(wrap_pyfunction!(score, m)?)?;
    m.add_function(wrap_pyfunction!(score_files, m)?)?;
    m.add_class::<InverseIndex>()?;
    m.add_class::<Dataset>()?;
    m.add_class::<EvalReport>()?;
    Ok(())
}
