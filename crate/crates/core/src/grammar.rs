//! The SCAN phrase-structure grammar.
//!
//! The grammar has five nonterminals and no recursion, so its language is
//! finite. This module holds the production table, exhaustive enumeration of
//! derivation trees, rendering of trees to commands and a recursive-descent
//! parser for the reverse direction.
//!
//! ```text
//! C -> S and S | S after S | S
//! S -> V twice | V thrice | V
//! V -> D[1] opposite D[2] | D[1] around D[2] | D | U
//! D -> turn left | turn right | U left | U right
//! U -> walk | look | run | jump
//! ```
//!
//! The two indexed `V` productions wrap a whole `D` expansion and place their
//! keyword between its action part (`D[1]`) and its direction part (`D[2]`).
//! Every `D` production is tagged with the position of that split.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A terminal of the command language.
///
/// Variants are declared in alphabetical order of their spelling, so the
/// derived `Ord` on token lists is the lexicographic order of the rendered
/// strings (no token is a prefix of another).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CommandToken {
    After,
    And,
    Around,
    Jump,
    Left,
    Look,
    Opposite,
    Right,
    Run,
    Thrice,
    Turn,
    Twice,
    Walk,
}

impl CommandToken {
    pub const ALL: [CommandToken; 13] = [
        CommandToken::After,
        CommandToken::And,
        CommandToken::Around,
        CommandToken::Jump,
        CommandToken::Left,
        CommandToken::Look,
        CommandToken::Opposite,
        CommandToken::Right,
        CommandToken::Run,
        CommandToken::Thrice,
        CommandToken::Turn,
        CommandToken::Twice,
        CommandToken::Walk,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CommandToken::After => "after",
            CommandToken::And => "and",
            CommandToken::Around => "around",
            CommandToken::Jump => "jump",
            CommandToken::Left => "left",
            CommandToken::Look => "look",
            CommandToken::Opposite => "opposite",
            CommandToken::Right => "right",
            CommandToken::Run => "run",
            CommandToken::Thrice => "thrice",
            CommandToken::Turn => "turn",
            CommandToken::Twice => "twice",
            CommandToken::Walk => "walk",
        }
    }

    pub fn from_word(word: &str) -> Option<Self> {
        CommandToken::ALL.into_iter().find(|t| t.as_str() == word)
    }
}

impl fmt::Display for CommandToken {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CommandToken {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CommandToken::from_word(s)
            .ok_or_else(|| Error::NotInLanguage(format!("unknown token `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nonterminal {
    C,
    S,
    V,
    D,
    U,
}

impl Nonterminal {
    pub const ALL: [Nonterminal; 5] = [
        Nonterminal::C,
        Nonterminal::S,
        Nonterminal::V,
        Nonterminal::D,
        Nonterminal::U,
    ];

    pub const START: Nonterminal = Nonterminal::C;
}

impl fmt::Display for Nonterminal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Nonterminal::C => "C",
            Nonterminal::S => "S",
            Nonterminal::V => "V",
            Nonterminal::D => "D",
            Nonterminal::U => "U",
        };
        f.write_str(name)
    }
}

impl FromStr for Nonterminal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Nonterminal::ALL
            .into_iter()
            .find(|n| n.to_string() == s)
            .ok_or_else(|| Error::NotInLanguage(format!("unknown nonterminal `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Symbol {
    Nonterminal(Nonterminal),
    Terminal(CommandToken),
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Nonterminal(n) => n.fmt(f),
            Symbol::Terminal(t) => t.fmt(f),
        }
    }
}

/// Identifies one production. Declaration order is the canonical order of
/// [`productions`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// `C -> S and S`
    And,
    /// `C -> S after S`
    After,
    /// `C -> S`
    Sentence,
    /// `S -> V twice`
    Twice,
    /// `S -> V thrice`
    Thrice,
    /// `S -> V`
    Once,
    /// `V -> D[1] opposite D[2]`
    Opposite,
    /// `V -> D[1] around D[2]`
    Around,
    /// `V -> D`
    Directed,
    /// `V -> U`
    Bare,
    /// `D -> turn left`
    TurnLeft,
    /// `D -> turn right`
    TurnRight,
    /// `D -> U left`
    PrimitiveLeft,
    /// `D -> U right`
    PrimitiveRight,
    /// `U -> walk`
    Walk,
    /// `U -> look`
    Look,
    /// `U -> run`
    Run,
    /// `U -> jump`
    Jump,
}

impl Rule {
    pub fn production(self) -> &'static Production {
        &PRODUCTIONS[self as usize]
    }

    pub fn lhs(self) -> Nonterminal {
        self.production().lhs
    }
}

/// Where a production's right-hand side is cut for the indexed rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitMarker {
    /// A `D` expansion: `rhs[..at]` is the action part, `rhs[at..]` the
    /// direction part.
    Direction { at: usize },
    /// An indexed `V` production: its `D` child is rendered with the keyword
    /// inserted at the child's direction split.
    Interleave,
}

#[derive(Debug, PartialEq, Eq)]
pub struct Production {
    pub rule: Rule,
    pub lhs: Nonterminal,
    pub rhs: &'static [Symbol],
    pub split_marker: Option<SplitMarker>,
}

impl fmt::Display for Production {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ->", self.lhs)?;
        match self.split_marker {
            Some(SplitMarker::Interleave) => {
                // rhs is [D, keyword]
                write!(f, " {}[1] {} {}[2]", self.rhs[0], self.rhs[1], self.rhs[0])
            }
            _ => self.rhs.iter().try_for_each(|s| write!(f, " {s}")),
        }
    }
}

mod sym {
    use super::{CommandToken, Nonterminal, Symbol};

    pub const S: Symbol = Symbol::Nonterminal(Nonterminal::S);
    pub const V: Symbol = Symbol::Nonterminal(Nonterminal::V);
    pub const D: Symbol = Symbol::Nonterminal(Nonterminal::D);
    pub const U: Symbol = Symbol::Nonterminal(Nonterminal::U);

    pub const fn t(token: CommandToken) -> Symbol {
        Symbol::Terminal(token)
    }
}

const fn production(
    rule: Rule,
    lhs: Nonterminal,
    rhs: &'static [Symbol],
    split_marker: Option<SplitMarker>,
) -> Production {
    Production {
        rule,
        lhs,
        rhs,
        split_marker,
    }
}

static PRODUCTIONS: [Production; 18] = {
    use sym::*;
    use CommandToken as T;
    use Nonterminal as N;
    const DIRECTION: Option<SplitMarker> = Some(SplitMarker::Direction { at: 1 });
    const INTERLEAVE: Option<SplitMarker> = Some(SplitMarker::Interleave);
    [
        production(Rule::And, N::C, &[S, t(T::And), S], None),
        production(Rule::After, N::C, &[S, t(T::After), S], None),
        production(Rule::Sentence, N::C, &[S], None),
        production(Rule::Twice, N::S, &[V, t(T::Twice)], None),
        production(Rule::Thrice, N::S, &[V, t(T::Thrice)], None),
        production(Rule::Once, N::S, &[V], None),
        production(Rule::Opposite, N::V, &[D, t(T::Opposite)], INTERLEAVE),
        production(Rule::Around, N::V, &[D, t(T::Around)], INTERLEAVE),
        production(Rule::Directed, N::V, &[D], None),
        production(Rule::Bare, N::V, &[U], None),
        production(Rule::TurnLeft, N::D, &[t(T::Turn), t(T::Left)], DIRECTION),
        production(Rule::TurnRight, N::D, &[t(T::Turn), t(T::Right)], DIRECTION),
        production(Rule::PrimitiveLeft, N::D, &[U, t(T::Left)], DIRECTION),
        production(Rule::PrimitiveRight, N::D, &[U, t(T::Right)], DIRECTION),
        production(Rule::Walk, N::U, &[t(T::Walk)], None),
        production(Rule::Look, N::U, &[t(T::Look)], None),
        production(Rule::Run, N::U, &[t(T::Run)], None),
        production(Rule::Jump, N::U, &[t(T::Jump)], None),
    ]
};

/// The fixed production table in canonical order.
pub fn productions() -> &'static [Production] {
    &PRODUCTIONS
}

/// A token sequence over the command vocabulary.
///
/// Ordering is lexicographic over the rendered string.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Command(Vec<CommandToken>);

impl Command {
    pub fn new(tokens: Vec<CommandToken>) -> Self {
        Command(tokens)
    }

    pub fn tokens(&self) -> &[CommandToken] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<CommandToken>> for Command {
    fn from(tokens: Vec<CommandToken>) -> Self {
        Command(tokens)
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, token) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            f.write_str(token.as_str())?;
        }
        Ok(())
    }
}

/// Whitespace tokenization. Fails on any word outside the vocabulary; does not
/// check grammaticality.
impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(Command)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Child {
    Node(DerivationTree),
    Leaf(CommandToken),
}

/// A derivation under the grammar. Children line up one-to-one with the
/// right-hand side of the node's production.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DerivationTree {
    rule: Rule,
    children: Vec<Child>,
}

impl DerivationTree {
    /// Builds a node, checking the children against the production.
    pub fn new(rule: Rule, children: Vec<Child>) -> Result<Self> {
        let rhs = rule.production().rhs;
        let fits = rhs.len() == children.len()
            && rhs
                .iter()
                .zip(&children)
                .all(|(sym, child)| match (sym, child) {
                    (Symbol::Terminal(t), Child::Leaf(leaf)) => t == leaf,
                    (Symbol::Nonterminal(n), Child::Node(node)) => node.root() == *n,
                    _ => false,
                });
        if fits {
            Ok(DerivationTree { rule, children })
        } else {
            Err(Error::NotInLanguage(format!(
                "children do not match production {}",
                rule.production()
            )))
        }
    }

    fn node(rule: Rule, children: Vec<Child>) -> Self {
        debug_assert!(DerivationTree::new(rule, children.clone()).is_ok());
        DerivationTree { rule, children }
    }

    pub fn rule(&self) -> Rule {
        self.rule
    }

    pub fn root(&self) -> Nonterminal {
        self.rule.lhs()
    }

    pub fn children(&self) -> &[Child] {
        &self.children
    }

    /// The `i`th child, which must be a subtree.
    pub(crate) fn subtree(&self, i: usize) -> &DerivationTree {
        match &self.children[i] {
            Child::Node(node) => node,
            Child::Leaf(token) => panic!("child {i} of {:?} is the leaf {token}", self.rule),
        }
    }

    /// Whether `rule` is applied anywhere in the tree.
    pub fn uses(&self, rule: Rule) -> bool {
        self.rule == rule
            || self.children.iter().any(|c| match c {
                Child::Node(node) => node.uses(rule),
                Child::Leaf(_) => false,
            })
    }

    pub fn render(&self) -> Command {
        let mut tokens = Vec::with_capacity(9);
        self.frontier(&mut tokens);
        Command(tokens)
    }

    fn frontier(&self, out: &mut Vec<CommandToken>) {
        if self.rule.production().split_marker == Some(SplitMarker::Interleave) {
            let Child::Leaf(keyword) = self.children[1] else {
                unreachable!("indexed production without keyword")
            };
            let (action, direction) = self.subtree(0).split_children();
            Self::frontier_of(action, out);
            out.push(keyword);
            Self::frontier_of(direction, out);
        } else {
            Self::frontier_of(&self.children, out);
        }
    }

    fn frontier_of(children: &[Child], out: &mut Vec<CommandToken>) {
        for child in children {
            match child {
                Child::Node(node) => node.frontier(out),
                Child::Leaf(token) => out.push(*token),
            }
        }
    }

    /// Children of a `D` node cut into (action part, direction part).
    fn split_children(&self) -> (&[Child], &[Child]) {
        match self.rule.production().split_marker {
            Some(SplitMarker::Direction { at }) => self.children.split_at(at),
            _ => panic!("{:?} has no direction split", self.rule),
        }
    }
}

/// S-expression form, e.g. `(C (S (V (U walk))))`.
impl fmt::Display for DerivationTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.root())?;
        for child in &self.children {
            match child {
                Child::Node(node) => write!(f, " {node}")?,
                Child::Leaf(token) => write!(f, " {token}")?,
            }
        }
        f.write_str(")")
    }
}

/// Every derivation tree rooted at `root`, ordered by rendered string.
pub fn enumerate_trees(root: Nonterminal) -> Vec<DerivationTree> {
    let mut trees = expand(root);
    trees.sort_by_cached_key(DerivationTree::render);
    trees.dedup();
    trees
}

fn expand(root: Nonterminal) -> Vec<DerivationTree> {
    let mut trees = Vec::new();
    for production in PRODUCTIONS.iter().filter(|p| p.lhs == root) {
        let mut partial: Vec<Vec<Child>> = vec![Vec::new()];
        for symbol in production.rhs {
            let options: Vec<Child> = match *symbol {
                Symbol::Terminal(t) => vec![Child::Leaf(t)],
                Symbol::Nonterminal(n) => expand(n).into_iter().map(Child::Node).collect(),
            };
            partial = partial
                .iter()
                .flat_map(|prefix| {
                    options.iter().map(move |option| {
                        let mut children = prefix.clone();
                        children.push(option.clone());
                        children
                    })
                })
                .collect();
        }
        trees.extend(
            partial
                .into_iter()
                .map(|children| DerivationTree::node(production.rule, children)),
        );
    }
    trees
}

/// Parses a complete command (root `C`).
pub fn parse(command: &Command) -> Result<DerivationTree> {
    parse_sentence(command.tokens())
        .map_err(|reason| Error::NotInLanguage(format!("`{command}`: {reason}")))
}

/// Tokenizes on whitespace, then [`parse`]s.
pub fn parse_str(text: &str) -> Result<DerivationTree> {
    parse(&text.parse()?)
}

type Parsed = std::result::Result<DerivationTree, &'static str>;

fn parse_sentence(tokens: &[CommandToken]) -> Parsed {
    let connectives: Vec<usize> = tokens
        .iter()
        .enumerate()
        .filter(|(_, t)| matches!(t, CommandToken::And | CommandToken::After))
        .map(|(i, _)| i)
        .collect();
    match connectives[..] {
        [] => Ok(DerivationTree::node(
            Rule::Sentence,
            vec![Child::Node(parse_clause(tokens)?)],
        )),
        [i] => {
            let rule = if tokens[i] == CommandToken::And {
                Rule::And
            } else {
                Rule::After
            };
            Ok(DerivationTree::node(
                rule,
                vec![
                    Child::Node(parse_clause(&tokens[..i])?),
                    Child::Leaf(tokens[i]),
                    Child::Node(parse_clause(&tokens[i + 1..])?),
                ],
            ))
        }
        _ => Err("more than one connective"),
    }
}

fn parse_clause(tokens: &[CommandToken]) -> Parsed {
    let (rule, verb_phrase) = match tokens.split_last() {
        Some((CommandToken::Twice, rest)) => (Rule::Twice, rest),
        Some((CommandToken::Thrice, rest)) => (Rule::Thrice, rest),
        _ => (Rule::Once, tokens),
    };
    let mut children = vec![Child::Node(parse_verb_phrase(verb_phrase)?)];
    if rule != Rule::Once {
        children.push(Child::Leaf(tokens[tokens.len() - 1]));
    }
    Ok(DerivationTree::node(rule, children))
}

fn parse_verb_phrase(tokens: &[CommandToken]) -> Parsed {
    use CommandToken as T;
    match *tokens {
        [] => Err("empty phrase"),
        [verb] => Ok(DerivationTree::node(
            Rule::Bare,
            vec![Child::Node(parse_primitive(verb)?)],
        )),
        [action, direction] => Ok(DerivationTree::node(
            Rule::Directed,
            vec![Child::Node(parse_directed(action, direction)?)],
        )),
        [action, keyword @ (T::Opposite | T::Around), direction] => {
            let rule = if keyword == T::Opposite {
                Rule::Opposite
            } else {
                Rule::Around
            };
            Ok(DerivationTree::node(
                rule,
                vec![
                    Child::Node(parse_directed(action, direction)?),
                    Child::Leaf(keyword),
                ],
            ))
        }
        [_, _, _] => Err("expected `opposite` or `around` between action and direction"),
        _ => Err("phrase too long"),
    }
}

fn parse_directed(action: CommandToken, direction: CommandToken) -> Parsed {
    use CommandToken as T;
    let left = match direction {
        T::Left => true,
        T::Right => false,
        _ => return Err("expected `left` or `right`"),
    };
    let tree = if action == T::Turn {
        let rule = if left {
            Rule::TurnLeft
        } else {
            Rule::TurnRight
        };
        DerivationTree::node(rule, vec![Child::Leaf(action), Child::Leaf(direction)])
    } else {
        let rule = if left {
            Rule::PrimitiveLeft
        } else {
            Rule::PrimitiveRight
        };
        DerivationTree::node(
            rule,
            vec![
                Child::Node(parse_primitive(action)?),
                Child::Leaf(direction),
            ],
        )
    };
    Ok(tree)
}

fn parse_primitive(token: CommandToken) -> Parsed {
    let rule = match token {
        CommandToken::Walk => Rule::Walk,
        CommandToken::Look => Rule::Look,
        CommandToken::Run => Rule::Run,
        CommandToken::Jump => Rule::Jump,
        _ => return Err("expected one of walk, look, run, jump"),
    };
    Ok(DerivationTree::node(rule, vec![Child::Leaf(token)]))
}

#[cfg(test)]
mod tests {
    use std::collections::HashSet;

    use super::*;

    fn cmd(s: &str) -> Command {
        s.parse().unwrap()
    }

    #[test]
    fn token_order_matches_spelling() {
        let mut words: Vec<&str> = CommandToken::ALL.iter().map(|t| t.as_str()).collect();
        words.sort();
        let spelled: Vec<&str> = CommandToken::ALL.iter().map(|t| t.as_str()).collect();
        assert_eq!(words, spelled);
        for a in CommandToken::ALL {
            for b in CommandToken::ALL {
                assert!(!(a != b && b.as_str().starts_with(a.as_str())));
            }
        }
    }

    #[test]
    fn production_table() {
        let table = productions();
        // 3 C + 3 S + 4 V + 4 D + 4 U
        assert_eq!(table.len(), 18);
        for (i, p) in table.iter().enumerate() {
            assert_eq!(p.rule as usize, i);
            assert_eq!(p.rule.production(), p);
        }
        assert!(table.iter().any(|p| p.to_string() == "C -> S after S"));
        assert_eq!(
            Rule::Opposite.production().to_string(),
            "V -> D[1] opposite D[2]"
        );
        assert_eq!(table.iter().filter(|p| p.lhs == Nonterminal::C).count(), 3);
    }

    #[test]
    fn sublanguage_sizes() {
        let sizes: Vec<usize> = [
            Nonterminal::U,
            Nonterminal::D,
            Nonterminal::V,
            Nonterminal::S,
        ]
        .into_iter()
        .map(|n| enumerate_trees(n).len())
        .collect();
        assert_eq!(sizes, vec![4, 10, 34, 102]);
    }

    #[test]
    fn render_indexed_production() {
        let tree = parse(&cmd("walk opposite left")).unwrap();
        assert_eq!(tree.render().to_string(), "walk opposite left");
        assert_eq!(tree.to_string(), "(C (S (V (D (U walk) left) opposite)))");
        let around = parse(&cmd("turn around right")).unwrap();
        assert_eq!(around.render().to_string(), "turn around right");
    }

    #[test]
    fn smallest_command() {
        let tree = parse(&cmd("walk")).unwrap();
        assert_eq!(tree.to_string(), "(C (S (V (U walk))))");
        assert_eq!(tree.root(), Nonterminal::C);
    }

    #[test]
    fn rejects_ungrammatical() {
        for bad in [
            "jump twice twice",
            "run and walk after look",
            "around walk left",
            "walk left left",
            "turn",
            "turn twice",
            "walk opposite",
            "twice jump",
            "and walk",
            "walk and",
            "",
        ] {
            assert!(
                matches!(parse(&cmd(bad)), Err(Error::NotInLanguage(_))),
                "{bad:?} accepted"
            );
        }
        assert!(matches!(
            parse_str("jump quickly"),
            Err(Error::NotInLanguage(_))
        ));
        assert!(matches!(parse_str("Jump"), Err(Error::NotInLanguage(_))));
    }

    #[test]
    fn tree_constructor_checks_children() {
        let u = DerivationTree::new(Rule::Jump, vec![Child::Leaf(CommandToken::Jump)]).unwrap();
        assert!(DerivationTree::new(Rule::Walk, vec![Child::Leaf(CommandToken::Jump)]).is_err());
        assert!(DerivationTree::new(Rule::Once, vec![Child::Node(u.clone())]).is_err());
        let v = DerivationTree::new(Rule::Bare, vec![Child::Node(u)]).unwrap();
        assert_eq!(v.render().to_string(), "jump");
    }

    #[test]
    fn enumeration_round_trips() {
        let trees = enumerate_trees(Nonterminal::C);
        assert_eq!(trees.len(), 102 + 2 * 102 * 102);
        let mut seen = HashSet::new();
        for pair in trees.windows(2) {
            assert!(pair[0].render() < pair[1].render());
        }
        for tree in &trees {
            let command = tree.render();
            assert!(command.len() <= 9);
            assert_eq!(&parse(&command).unwrap(), tree);
            assert!(seen.insert(command));
        }
    }
}
