//! Interpretation of commands as action sequences, and the inverse index that
//! maps each action sequence back to every command producing it.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grammar::{self, Command, DerivationTree, Nonterminal, Rule};

/// Variants are ordered by spelling, like [`grammar::CommandToken`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ActionToken {
    Jump,
    Look,
    #[serde(rename = "LTURN")]
    LTurn,
    #[serde(rename = "RTURN")]
    RTurn,
    Run,
    Walk,
}

impl ActionToken {
    pub const ALL: [ActionToken; 6] = [
        ActionToken::Jump,
        ActionToken::Look,
        ActionToken::LTurn,
        ActionToken::RTurn,
        ActionToken::Run,
        ActionToken::Walk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ActionToken::Jump => "JUMP",
            ActionToken::Look => "LOOK",
            ActionToken::LTurn => "LTURN",
            ActionToken::RTurn => "RTURN",
            ActionToken::Run => "RUN",
            ActionToken::Walk => "WALK",
        }
    }
}

impl fmt::Display for ActionToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ActionToken {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ActionToken::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::UnknownAction(s.to_owned()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActionSequence(Vec<ActionToken>);

impl ActionSequence {
    pub fn new(actions: Vec<ActionToken>) -> Self {
        ActionSequence(actions)
    }

    pub fn actions(&self) -> &[ActionToken] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<ActionToken>> for ActionSequence {
    fn from(actions: Vec<ActionToken>) -> Self {
        ActionSequence(actions)
    }
}

impl fmt::Display for ActionSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, action) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(action.as_str())?;
        }
        Ok(())
    }
}

impl FromStr for ActionSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(ActionSequence)
    }
}

/// Interprets a tree rooted at any nonterminal by structural recursion.
pub fn interpret(tree: &DerivationTree) -> ActionSequence {
    let mut actions = Vec::new();
    interpret_into(tree, &mut actions);
    ActionSequence(actions)
}

/// Parses and interprets a command.
pub fn translate(command: &Command) -> Result<ActionSequence> {
    grammar::parse(command).map(|tree| interpret(&tree))
}

fn interpret_into(tree: &DerivationTree, out: &mut Vec<ActionToken>) {
    match tree.rule() {
        Rule::And => {
            interpret_into(tree.subtree(0), out);
            interpret_into(tree.subtree(2), out);
        }
        // x1 after x2 => [x2] [x1]
        Rule::After => {
            interpret_into(tree.subtree(2), out);
            interpret_into(tree.subtree(0), out);
        }
        Rule::Sentence | Rule::Once | Rule::Directed | Rule::Bare => {
            interpret_into(tree.subtree(0), out)
        }
        Rule::Twice => repeat(tree.subtree(0), 2, out),
        Rule::Thrice => repeat(tree.subtree(0), 3, out),
        Rule::Opposite => {
            let (turn, primitive) = turn_and_primitive(tree.subtree(0));
            out.extend([turn, turn]);
            if let Some(u) = primitive {
                interpret_into(u, out);
            }
        }
        Rule::Around => {
            let (turn, primitive) = turn_and_primitive(tree.subtree(0));
            for _ in 0..4 {
                out.push(turn);
                if let Some(u) = primitive {
                    interpret_into(u, out);
                }
            }
        }
        Rule::TurnLeft => out.push(ActionToken::LTurn),
        Rule::TurnRight => out.push(ActionToken::RTurn),
        Rule::PrimitiveLeft => {
            out.push(ActionToken::LTurn);
            interpret_into(tree.subtree(0), out);
        }
        Rule::PrimitiveRight => {
            out.push(ActionToken::RTurn);
            interpret_into(tree.subtree(0), out);
        }
        Rule::Walk => out.push(ActionToken::Walk),
        Rule::Look => out.push(ActionToken::Look),
        Rule::Run => out.push(ActionToken::Run),
        Rule::Jump => out.push(ActionToken::Jump),
    }
}

fn repeat(tree: &DerivationTree, times: usize, out: &mut Vec<ActionToken>) {
    let start = out.len();
    interpret_into(tree, out);
    let end = out.len();
    for _ in 1..times {
        out.extend_from_within(start..end);
    }
}

/// The turn of a `D` expansion and, for `U left`/`U right`, its primitive.
fn turn_and_primitive(d: &DerivationTree) -> (ActionToken, Option<&DerivationTree>) {
    match d.rule() {
        Rule::TurnLeft => (ActionToken::LTurn, None),
        Rule::TurnRight => (ActionToken::RTurn, None),
        Rule::PrimitiveLeft => (ActionToken::LTurn, Some(d.subtree(0))),
        Rule::PrimitiveRight => (ActionToken::RTurn, Some(d.subtree(0))),
        other => unreachable!("{other:?} is not a D production"),
    }
}

/// Every command of the universe grouped by its interpretation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InverseIndex {
    preimages: BTreeMap<ActionSequence, Vec<Command>>,
}

impl InverseIndex {
    /// Builds the index over the full command universe.
    pub fn build() -> Self {
        InverseIndex::from_commands(
            grammar::enumerate_trees(Nonterminal::START)
                .iter()
                .map(|tree| (tree.render(), interpret(tree))),
        )
    }

    pub fn from_commands<I>(pairs: I) -> Self
    where
        I: IntoIterator<Item = (Command, ActionSequence)>,
    {
        let mut preimages: BTreeMap<ActionSequence, Vec<Command>> = BTreeMap::new();
        for (command, actions) in pairs {
            preimages.entry(actions).or_default().push(command);
        }
        for commands in preimages.values_mut() {
            commands.sort();
            commands.dedup();
        }
        InverseIndex { preimages }
    }

    /// Commands interpreting to `actions`, sorted; empty when unreachable.
    pub fn commands_for(&self, actions: &ActionSequence) -> &[Command] {
        self.preimages
            .get(actions)
            .map(Vec::as_slice)
            .unwrap_or_default()
    }

    /// Number of distinct action sequences.
    pub fn len(&self) -> usize {
        self.preimages.len()
    }

    pub fn is_empty(&self) -> bool {
        self.preimages.is_empty()
    }

    pub fn command_count(&self) -> usize {
        self.preimages.values().map(Vec::len).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&ActionSequence, &[Command])> {
        self.preimages.iter().map(|(k, v)| (k, v.as_slice()))
    }

    /// Pre-image size mapped to how many action sequences have it.
    pub fn ambiguity_histogram(&self) -> BTreeMap<usize, usize> {
        let mut histogram = BTreeMap::new();
        for commands in self.preimages.values() {
            *histogram.entry(commands.len()).or_insert(0) += 1;
        }
        histogram
    }
}

pub fn build_inverse_index() -> InverseIndex {
    InverseIndex::build()
}
