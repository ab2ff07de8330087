//! The task universe, train/test splits and the on-disk dataset format.
//!
//! A dataset directory holds `train.txt`, `test.txt` and `manifest.json`.
//! Every example line is `IN: <source> OUT: <target>\n` with single spaces.
//! In the `scan` direction the source is the command; in `nacs` the two
//! fields are swapped.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::grammar::{self, Command, CommandToken, DerivationTree, Nonterminal, Rule};
use crate::semantics::{self, ActionSequence};

pub const DEFAULT_TRAIN_FRACTION: f64 = 0.8;
pub const DEFAULT_LENGTH_THRESHOLD: usize = 22;

pub const TRAIN_FILE: &str = "train.txt";
pub const TEST_FILE: &str = "test.txt";
pub const MANIFEST_FILE: &str = "manifest.json";

const RNG_DESCRIPTION: &str =
    "ChaCha8 (rand_chacha 0.9) keyed by the seed as 8 little-endian bytes \
followed by 24 zero bytes; Fisher-Yates from the last index down, each draw \
next_u64() with rejection above the largest multiple of the range";

const DIGEST_DESCRIPTION: &str =
    "sha256 over the sorted, concatenated sha256 digests of `<command>\\t<actions>` per pair";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    /// command -> actions
    Scan,
    /// actions -> command
    Nacs,
}

impl Direction {
    pub fn flipped(self) -> Self {
        match self {
            Direction::Scan => Direction::Nacs,
            Direction::Nacs => Direction::Scan,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::Scan => "scan",
            Direction::Nacs => "nacs",
        })
    }
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "scan" => Ok(Direction::Scan),
            "nacs" => Ok(Direction::Nacs),
            _ => Err(Error::InvalidSplit(format!("unknown direction `{s}`"))),
        }
    }
}

/// One example: a command, its derivation and its interpretation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TaskPair {
    pub command: Command,
    pub actions: ActionSequence,
    pub derivation: DerivationTree,
}

impl TaskPair {
    pub fn from_tree(derivation: DerivationTree) -> Self {
        TaskPair {
            command: derivation.render(),
            actions: semantics::interpret(&derivation),
            derivation,
        }
    }

    pub fn from_command(command: &Command) -> Result<Self> {
        grammar::parse(command).map(TaskPair::from_tree)
    }

    fn digest(&self) -> [u8; 32] {
        Sha256::digest(format!("{}\t{}", self.command, self.actions)).into()
    }
}

/// All 20,910 pairs in canonical (command string) order.
pub fn build_universe() -> Vec<TaskPair> {
    grammar::enumerate_trees(Nonterminal::START)
        .into_iter()
        .map(TaskPair::from_tree)
        .collect()
}

/// The primitive held out of training by a primitive split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum HeldOutPrimitive {
    Jump,
    TurnLeft,
}

impl HeldOutPrimitive {
    /// The production whose use marks a pair as containing the primitive.
    pub fn rule(self) -> Rule {
        match self {
            HeldOutPrimitive::Jump => Rule::Jump,
            HeldOutPrimitive::TurnLeft => Rule::TurnLeft,
        }
    }

    /// The isolated command that stays in training.
    pub fn bare_command(self) -> Command {
        match self {
            HeldOutPrimitive::Jump => Command::new(vec![CommandToken::Jump]),
            HeldOutPrimitive::TurnLeft => {
                Command::new(vec![CommandToken::Turn, CommandToken::Left])
            }
        }
    }
}

impl fmt::Display for HeldOutPrimitive {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            HeldOutPrimitive::Jump => "jump",
            HeldOutPrimitive::TurnLeft => "turn-left",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SplitKind {
    Simple { train_fraction: f64, seed: u64 },
    Length { max_train_action_length: usize },
    Primitive { primitive: HeldOutPrimitive },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    pub kind: SplitKind,
    pub direction: Direction,
}

impl SplitSpec {
    pub fn simple(train_fraction: f64, seed: u64, direction: Direction) -> Result<Self> {
        SplitSpec {
            kind: SplitKind::Simple {
                train_fraction,
                seed,
            },
            direction,
        }
        .validated()
    }

    pub fn length(max_train_action_length: usize, direction: Direction) -> Result<Self> {
        SplitSpec {
            kind: SplitKind::Length {
                max_train_action_length,
            },
            direction,
        }
        .validated()
    }

    pub fn primitive(primitive: HeldOutPrimitive, direction: Direction) -> Self {
        SplitSpec {
            kind: SplitKind::Primitive { primitive },
            direction,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SplitKind::Simple { train_fraction, .. }
                if !(train_fraction > 0.0 && train_fraction < 1.0) =>
            {
                Err(Error::InvalidSplit(format!(
                    "train fraction {train_fraction} is not strictly between 0 and 1"
                )))
            }
            SplitKind::Length {
                max_train_action_length: 0,
            } => Err(Error::InvalidSplit(
                "length threshold must be positive".to_owned(),
            )),
            _ => Ok(()),
        }
    }

    fn validated(self) -> Result<Self> {
        self.validate().map(|()| self)
    }
}

/// Reproducibility record written next to the example files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub direction: Direction,
    pub split: SplitKind,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub defaults: Defaults,
    pub universe_size: usize,
    pub train_count: usize,
    pub test_count: usize,
    pub digest_algorithm: String,
    pub train_digest: String,
    pub test_digest: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Defaults {
    pub train_fraction: f64,
    pub length_threshold: usize,
}

impl Default for Defaults {
    fn default() -> Self {
        Defaults {
            train_fraction: DEFAULT_TRAIN_FRACTION,
            length_threshold: DEFAULT_LENGTH_THRESHOLD,
        }
    }
}

impl Manifest {
    fn new(spec: &SplitSpec, universe_size: usize, train: &[TaskPair], test: &[TaskPair]) -> Self {
        let (seed, rng) = match spec.kind {
            SplitKind::Simple { seed, .. } => (Some(seed), Some(RNG_DESCRIPTION.to_owned())),
            _ => (None, None),
        };
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_owned(),
            version: env!("CARGO_PKG_VERSION").to_owned(),
            direction: spec.direction,
            split: spec.kind,
            seed,
            rng,
            defaults: Defaults::default(),
            universe_size,
            train_count: train.len(),
            test_count: test.len(),
            digest_algorithm: DIGEST_DESCRIPTION.to_owned(),
            train_digest: content_digest(train),
            test_digest: content_digest(test),
        }
    }
}

/// Order-independent digest of a set of pairs, hex encoded.
pub fn content_digest(pairs: &[TaskPair]) -> String {
    let mut digests: Vec<[u8; 32]> = pairs.iter().map(TaskPair::digest).collect();
    digests.sort_unstable();
    let mut hasher = Sha256::new();
    for digest in &digests {
        hasher.update(digest);
    }
    format!("{:x}", hasher.finalize())
}

#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    pub train: Vec<TaskPair>,
    pub test: Vec<TaskPair>,
    pub spec: SplitSpec,
    pub manifest: Manifest,
}

impl Dataset {
    fn from_partition(
        spec: &SplitSpec,
        universe: &[TaskPair],
        in_train: impl Fn(usize, &TaskPair) -> bool,
    ) -> Result<Self> {
        let (train, test): (Vec<_>, Vec<_>) = universe
            .iter()
            .enumerate()
            .partition(|(i, pair)| in_train(*i, pair));
        let train: Vec<TaskPair> = train.into_iter().map(|(_, p)| p.clone()).collect();
        let test: Vec<TaskPair> = test.into_iter().map(|(_, p)| p.clone()).collect();
        if train.is_empty() || test.is_empty() {
            return Err(Error::DegenerateSplit {
                train: train.len(),
                test: test.len(),
            });
        }
        let manifest = Manifest::new(spec, universe.len(), &train, &test);
        Ok(Dataset {
            train,
            test,
            spec: *spec,
            manifest,
        })
    }
}

/// Applies whichever split `spec` describes.
pub fn split(spec: &SplitSpec, universe: &[TaskPair]) -> Result<Dataset> {
    match spec.kind {
        SplitKind::Simple { .. } => split_simple(spec, universe),
        SplitKind::Length { .. } => split_length(spec, universe),
        SplitKind::Primitive { .. } => split_primitive(spec, universe),
    }
}

/// Uniform random split: `floor(fraction * N)` pairs go to train. Both sides
/// keep the universe order.
pub fn split_simple(spec: &SplitSpec, universe: &[TaskPair]) -> Result<Dataset> {
    spec.validate()?;
    let SplitKind::Simple {
        train_fraction,
        seed,
    } = spec.kind
    else {
        return Err(wrong_kind("simple", spec));
    };
    let train_count = (train_fraction * universe.len() as f64).floor() as usize;
    let mut in_train = vec![false; universe.len()];
    for i in shuffled_indices(universe.len(), seed)
        .into_iter()
        .take(train_count)
    {
        in_train[i] = true;
    }
    Dataset::from_partition(spec, universe, |i, _| in_train[i])
}

/// Train on pairs whose action sequence is at most the threshold long.
pub fn split_length(spec: &SplitSpec, universe: &[TaskPair]) -> Result<Dataset> {
    spec.validate()?;
    let SplitKind::Length {
        max_train_action_length,
    } = spec.kind
    else {
        return Err(wrong_kind("length", spec));
    };
    Dataset::from_partition(spec, universe, |_, pair| {
        pair.actions.len() <= max_train_action_length
    })
}

/// Hold out every composed use of a primitive. Membership is decided on the
/// derivation: `U -> jump` for jump, `D -> turn left` for turn left. The
/// isolated primitive command stays in training.
pub fn split_primitive(spec: &SplitSpec, universe: &[TaskPair]) -> Result<Dataset> {
    let SplitKind::Primitive { primitive } = spec.kind else {
        return Err(wrong_kind("primitive", spec));
    };
    let rule = primitive.rule();
    let bare = primitive.bare_command();
    Dataset::from_partition(spec, universe, |_, pair| {
        !pair.derivation.uses(rule) || pair.command == bare
    })
}

fn wrong_kind(expected: &str, spec: &SplitSpec) -> Error {
    Error::InvalidSplit(format!("expected a {expected} split, got {:?}", spec.kind))
}

/// A random permutation of `0..n`, fully determined by `seed`.
fn shuffled_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    let mut rng = ChaCha8Rng::from_seed(key);
    let mut indices: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = uniform_below(&mut rng, i as u64 + 1) as usize;
        indices.swap(i, j);
    }
    indices
}

fn uniform_below(rng: &mut impl RngCore, bound: u64) -> u64 {
    let zone = u64::MAX - u64::MAX % bound;
    loop {
        let draw = rng.next_u64();
        if draw < zone {
            return draw % bound;
        }
    }
}

/// A pair posed in one direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientedExample<'a> {
    pub direction: Direction,
    pub pair: &'a TaskPair,
}

impl<'a> OrientedExample<'a> {
    pub fn source(&self) -> String {
        match self.direction {
            Direction::Scan => self.pair.command.to_string(),
            Direction::Nacs => self.pair.actions.to_string(),
        }
    }

    pub fn target(&self) -> String {
        match self.direction {
            Direction::Scan => self.pair.actions.to_string(),
            Direction::Nacs => self.pair.command.to_string(),
        }
    }

    /// The same pair with source and target exchanged.
    pub fn swapped(self) -> Self {
        OrientedExample {
            direction: self.direction.flipped(),
            pair: self.pair,
        }
    }

    /// The dataset line, without its newline.
    pub fn line(&self) -> String {
        format!("IN: {} OUT: {}", self.source(), self.target())
    }
}

/// Poses pairs in `direction`, keeping order and duplicates.
pub fn orient(pairs: &[TaskPair], direction: Direction) -> Vec<OrientedExample<'_>> {
    pairs
        .iter()
        .map(|pair| OrientedExample { direction, pair })
        .collect()
}

/// Writes `train.txt`, `test.txt` and `manifest.json` into `directory`,
/// oriented as `direction`.
pub fn write_dataset(dataset: &Dataset, direction: Direction, directory: &Path) -> Result<()> {
    fs::create_dir_all(directory).map_err(|e| Error::io(directory, e))?;
    for (name, pairs) in [(TRAIN_FILE, &dataset.train), (TEST_FILE, &dataset.test)] {
        let mut text = String::new();
        for example in orient(pairs, direction) {
            text.push_str(&example.line());
            text.push('\n');
        }
        let path = directory.join(name);
        fs::write(&path, text).map_err(|e| Error::io(path, e))?;
    }
    let mut manifest = dataset.manifest.clone();
    manifest.direction = direction;
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    let path = directory.join(MANIFEST_FILE);
    fs::write(&path, json).map_err(|e| Error::io(path, e))
}

/// Reads a dataset directory back, re-deriving every pair and checking it
/// against the manifest counts and digests.
pub fn read_dataset(directory: &Path) -> Result<Dataset> {
    let manifest_path = directory.join(MANIFEST_FILE);
    let text = fs::read_to_string(&manifest_path).map_err(|e| Error::io(&manifest_path, e))?;
    let manifest: Manifest = serde_json::from_str(&text)?;
    let direction = manifest.direction;
    let train = read_side(&directory.join(TRAIN_FILE), direction)?;
    let test = read_side(&directory.join(TEST_FILE), direction)?;

    let checks = [
        (
            "train count",
            manifest.train_count.to_string(),
            train.len().to_string(),
        ),
        (
            "test count",
            manifest.test_count.to_string(),
            test.len().to_string(),
        ),
        (
            "train digest",
            manifest.train_digest.clone(),
            content_digest(&train),
        ),
        (
            "test digest",
            manifest.test_digest.clone(),
            content_digest(&test),
        ),
    ];
    for (what, recorded, actual) in checks {
        if recorded != actual {
            return Err(Error::ManifestMismatch(format!(
                "{what}: manifest records {recorded}, files give {actual}"
            )));
        }
    }

    Ok(Dataset {
        train,
        test,
        spec: SplitSpec {
            kind: manifest.split,
            direction,
        },
        manifest,
    })
}

/// Reads one example file in the given orientation.
pub fn read_side(path: &Path, direction: Direction) -> Result<Vec<TaskPair>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_examples(&text, direction).map_err(|(line, message)| Error::FormatViolation {
        path: path.to_owned(),
        line,
        message,
    })
}

fn parse_examples(
    text: &str,
    direction: Direction,
) -> std::result::Result<Vec<TaskPair>, (usize, String)> {
    let mut pairs = Vec::new();
    let lines = text.split_inclusive('\n').enumerate();
    for (i, raw) in lines {
        let number = i + 1;
        let line = raw
            .strip_suffix('\n')
            .ok_or((number, "missing trailing newline".to_owned()))?;
        let (source, target) = split_line(line).map_err(|m| (number, m))?;
        let (command, actions) = match direction {
            Direction::Scan => (source, target),
            Direction::Nacs => (target, source),
        };
        let command: Command = command
            .parse()
            .map_err(|e: Error| (number, e.to_string()))?;
        let actions: ActionSequence = actions
            .parse()
            .map_err(|e: Error| (number, e.to_string()))?;
        let pair = TaskPair::from_command(&command).map_err(|e| (number, e.to_string()))?;
        if pair.actions != actions {
            return Err((
                number,
                format!(
                    "`{command}` interprets to `{}`, not `{actions}`",
                    pair.actions
                ),
            ));
        }
        pairs.push(pair);
    }
    Ok(pairs)
}

/// Splits `IN: <source> OUT: <target>`, requiring single-space separation.
fn split_line(line: &str) -> std::result::Result<(&str, &str), String> {
    let rest = line
        .strip_prefix("IN: ")
        .ok_or_else(|| "line does not start with `IN: `".to_owned())?;
    let (source, target) = rest
        .split_once(" OUT: ")
        .ok_or_else(|| "missing ` OUT: ` separator".to_owned())?;
    for field in [source, target] {
        if field.is_empty() || field.split(' ').any(str::is_empty) {
            return Err("fields must be nonempty tokens separated by single spaces".to_owned());
        }
    }
    Ok((source, target))
}

/// Builds the universe, applies `spec` and writes the result to `directory`.
pub fn generate(spec: &SplitSpec, directory: &Path) -> Result<Dataset> {
    let universe = build_universe();
    let dataset = split(spec, &universe)?;
    write_dataset(&dataset, spec.direction, directory)?;
    Ok(dataset)
}

/// Paths of the three files of a dataset directory.
pub fn dataset_files(directory: &Path) -> [PathBuf; 3] {
    [TRAIN_FILE, TEST_FILE, MANIFEST_FILE].map(|name| directory.join(name))
}
