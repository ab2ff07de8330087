//! Generator, parser and evaluator for the SCAN command-to-action task and
//! its inverse, NACS (actions to commands).
//!
//! The command language is finite: [`grammar`] enumerates all 20,910
//! commands, [`semantics`] interprets them, [`corpus`] builds the standard
//! train/test splits in either direction, [`evaluator`] scores predictions and
//! [`stats`] summarizes the structure of the universe.

pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluator;
pub mod grammar;
pub mod semantics;
pub mod stats;

pub use corpus::{
    build_universe, orient, read_dataset, split, write_dataset, Dataset, Direction,
    HeldOutPrimitive, Manifest, OrientedExample, SplitKind, SplitSpec, TaskPair,
};
pub use error::{Error, Result};
pub use evaluator::{eval_nacs, eval_scan, score_files, EvalReport, FailureReason, Prediction};
pub use grammar::{
    enumerate_trees, parse, productions, Command, CommandToken, DerivationTree, Nonterminal,
    Production, Rule,
};
pub use semantics::{
    build_inverse_index, interpret, translate, ActionSequence, ActionToken, InverseIndex,
};
pub use stats::{summarize, StatsReport};
