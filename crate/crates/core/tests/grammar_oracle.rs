mod common;

use std::collections::{BTreeSet, HashMap};

use proptest::prelude::*;
use scan_nacs::grammar::{enumerate_trees, parse, parse_str, Command, CommandToken, Nonterminal};
use scan_nacs::{DerivationTree, Error};
use std::sync::LazyLock;

static LANGUAGE: LazyLock<BTreeSet<String>> = LazyLock::new(common::full_language);
static TREES: LazyLock<Vec<DerivationTree>> = LazyLock::new(|| enumerate_trees(Nonterminal::C));

#[test]
fn enumeration_matches_bottom_up_tables() {
    let rendered: Vec<String> = enumerate_trees(Nonterminal::C)
        .iter()
        .map(|t| t.render().to_string())
        .collect();
    let oracle: Vec<String> = common::full_language().into_iter().collect();
    // same strings, same (lexicographic) order
    assert_eq!(rendered, oracle);
    assert_eq!(rendered.len(), common::closed_form_count(4, 10));
}

#[test]
fn rendering_is_injective_so_parse_is_unambiguous() {
    let mut trees_per_string: HashMap<String, usize> = HashMap::new();
    for tree in enumerate_trees(Nonterminal::C) {
        *trees_per_string
            .entry(tree.render().to_string())
            .or_default() += 1;
    }
    assert_eq!(trees_per_string.len(), 20_910);
    assert!(trees_per_string.values().all(|&n| n == 1));
}

#[test]
fn every_command_has_at_most_one_connective() {
    for tree in enumerate_trees(Nonterminal::C) {
        let connectives = tree
            .render()
            .tokens()
            .iter()
            .filter(|t| matches!(t, CommandToken::And | CommandToken::After))
            .count();
        assert!(connectives <= 1);
    }
    assert!(matches!(
        parse_str("run and walk after look"),
        Err(Error::NotInLanguage(_))
    ));
}

#[test]
fn command_lengths() {
    let lengths: BTreeSet<usize> = enumerate_trees(Nonterminal::C)
        .iter()
        .map(|t| t.render().len())
        .collect();
    assert_eq!(lengths, (1..=9).collect());
}

#[test]
fn language_membership_on_neighbours() {
    // every one-token deletion, insertion or substitution of a command is
    // accepted exactly when the oracle contains it
    let language = common::full_language();
    let sample: Vec<_> = enumerate_trees(Nonterminal::C)
        .into_iter()
        .step_by(97)
        .collect();
    for tree in sample {
        let tokens = tree.render().tokens().to_vec();
        let mut variants = Vec::new();
        for i in 0..tokens.len() {
            let mut deleted = tokens.clone();
            deleted.remove(i);
            variants.push(deleted);
            for t in CommandToken::ALL {
                let mut substituted = tokens.clone();
                substituted[i] = t;
                variants.push(substituted);
                let mut inserted = tokens.clone();
                inserted.insert(i, t);
                variants.push(inserted);
            }
        }
        for variant in variants {
            let command = Command::new(variant);
            assert_eq!(
                parse(&command).is_ok(),
                language.contains(&command.to_string()),
                "{command}"
            );
        }
    }
}

fn token() -> impl Strategy<Value = CommandToken> {
    proptest::sample::select(CommandToken::ALL.to_vec())
}

proptest! {
    #[test]
    fn parse_accepts_exactly_the_language(tokens in proptest::collection::vec(token(), 0..10)) {
        let command = Command::new(tokens);
        let accepted = parse(&command);
        let member = LANGUAGE.contains(&command.to_string());
        prop_assert_eq!(accepted.is_ok(), member);
        if let Ok(tree) = accepted {
            prop_assert_eq!(tree.render(), command);
        }
    }

    #[test]
    fn round_trip(index in 0usize..20_910) {
        let tree = &TREES[index];
        let text = tree.render().to_string();
        prop_assert_eq!(&parse_str(&text).unwrap(), tree);
        prop_assert_eq!(&parse_str(&format!("  {}  ", text.replace(' ', "   "))).unwrap(), tree);
    }
}
