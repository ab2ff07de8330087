//! Structural statistics of the universe: how ambiguous the inverse mapping
//! is, vocabulary sizes on each side and length distributions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::{Dataset, Direction, SplitKind, TaskPair};
use crate::semantics::InverseIndex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VocabularySizes {
    pub source: usize,
    pub target: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitRow {
    pub split: String,
    pub direction: Direction,
    pub train: usize,
    pub test: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatsReport {
    pub command_count: usize,
    pub distinct_action_sequences: usize,
    /// pre-image size -> number of action sequences with that many commands
    pub ambiguity_histogram: BTreeMap<usize, usize>,
    pub max_ambiguity: usize,
    pub scan_vocabulary: VocabularySizes,
    pub nacs_vocabulary: VocabularySizes,
    pub action_length_histogram: BTreeMap<usize, usize>,
    pub command_length_histogram: BTreeMap<usize, usize>,
    pub splits: Vec<SplitRow>,
}

pub fn summarize(universe: &[TaskPair], splits: &[&Dataset]) -> StatsReport {
    let index = InverseIndex::from_commands(
        universe
            .iter()
            .map(|p| (p.command.clone(), p.actions.clone())),
    );
    let ambiguity_histogram = index.ambiguity_histogram();
    let command_words: BTreeSet<_> = universe
        .iter()
        .flat_map(|p| p.command.tokens().iter().copied())
        .collect();
    let action_words: BTreeSet<_> = universe
        .iter()
        .flat_map(|p| p.actions.actions().iter().copied())
        .collect();

    StatsReport {
        command_count: universe.len(),
        distinct_action_sequences: index.len(),
        max_ambiguity: ambiguity_histogram.keys().copied().max().unwrap_or(0),
        ambiguity_histogram,
        scan_vocabulary: VocabularySizes {
            source: command_words.len(),
            target: action_words.len(),
        },
        nacs_vocabulary: VocabularySizes {
            source: action_words.len(),
            target: command_words.len(),
        },
        action_length_histogram: histogram(universe.iter().map(|p| p.actions.len())),
        command_length_histogram: histogram(universe.iter().map(|p| p.command.len())),
        splits: splits
            .iter()
            .map(|d| SplitRow {
                split: describe(&d.spec.kind),
                direction: d.spec.direction,
                train: d.train.len(),
                test: d.test.len(),
            })
            .collect(),
    }
}

fn histogram(values: impl Iterator<Item = usize>) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    for v in values {
        *counts.entry(v).or_insert(0) += 1;
    }
    counts
}

fn describe(kind: &SplitKind) -> String {
    match kind {
        SplitKind::Simple {
            train_fraction,
            seed,
        } => format!("simple(fraction={train_fraction}, seed={seed})"),
        SplitKind::Length {
            max_train_action_length,
        } => format!("length(max_train_actions={max_train_action_length})"),
        SplitKind::Primitive { primitive } => format!("primitive({primitive})"),
    }
}

impl fmt::Display for StatsReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "commands                   {}", self.command_count)?;
        writeln!(
            f,
            "distinct action sequences  {}",
            self.distinct_action_sequences
        )?;
        writeln!(f, "max pre-image size         {}", self.max_ambiguity)?;
        writeln!(
            f,
            "vocabulary (source/target) scan {}/{}  nacs {}/{}",
            self.scan_vocabulary.source,
            self.scan_vocabulary.target,
            self.nacs_vocabulary.source,
            self.nacs_vocabulary.target
        )?;
        write_histogram(f, "pre-image size", "sequences", &self.ambiguity_histogram)?;
        write_histogram(
            f,
            "action length",
            "commands",
            &self.action_length_histogram,
        )?;
        write_histogram(
            f,
            "command length",
            "commands",
            &self.command_length_histogram,
        )?;
        if !self.splits.is_empty() {
            writeln!(f)?;
            writeln!(
                f,
                "{:<40} {:>9} {:>7} {:>7}",
                "split", "direction", "train", "test"
            )?;
            for row in &self.splits {
                writeln!(
                    f,
                    "{:<40} {:>9} {:>7} {:>7}",
                    row.split, row.direction, row.train, row.test
                )?;
            }
        }
        Ok(())
    }
}

fn write_histogram(
    f: &mut fmt::Formatter<'_>,
    key: &str,
    value: &str,
    histogram: &BTreeMap<usize, usize>,
) -> fmt::Result {
    writeln!(f)?;
    writeln!(f, "{key:>15} {value:>10}")?;
    for (k, v) in histogram {
        writeln!(f, "{k:>15} {v:>10}")?;
    }
    Ok(())
}
