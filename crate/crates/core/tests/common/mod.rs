//! Reference implementations that share no code with the library: a
//! bottom-up string enumeration of the language and a rewriting interpreter
//! over rendered commands.

#![allow(dead_code)]

use std::collections::BTreeSet;

pub const PRIMITIVES: [&str; 4] = ["walk", "look", "run", "jump"];

/// Closed-form language size for `u` primitives and `d` expansions of D.
pub fn closed_form_count(u: usize, d: usize) -> usize {
    let v = 3 * d + u;
    let s = 3 * v;
    s + 2 * s * s
}

/// All commands built from sub-language tables, with the given primitives
/// and optionally without `turn left` as a D expansion.
pub fn enumerate_strings(primitives: &[&str], with_turn_left: bool) -> BTreeSet<String> {
    let mut d: Vec<(String, String)> = Vec::new();
    if with_turn_left {
        d.push(("turn".into(), "left".into()));
    }
    d.push(("turn".into(), "right".into()));
    for u in primitives {
        for dir in ["left", "right"] {
            d.push((u.to_string(), dir.to_string()));
        }
    }
    let mut v: Vec<String> = Vec::new();
    for (action, dir) in &d {
        v.push(format!("{action} opposite {dir}"));
        v.push(format!("{action} around {dir}"));
        v.push(format!("{action} {dir}"));
    }
    v.extend(primitives.iter().map(|u| u.to_string()));
    let mut s: Vec<String> = Vec::new();
    for x in &v {
        s.push(x.clone());
        s.push(format!("{x} twice"));
        s.push(format!("{x} thrice"));
    }
    let mut c: BTreeSet<String> = s.iter().cloned().collect();
    for a in &s {
        for b in &s {
            c.insert(format!("{a} and {b}"));
            c.insert(format!("{a} after {b}"));
        }
    }
    c
}

pub fn full_language() -> BTreeSet<String> {
    enumerate_strings(&PRIMITIVES, true)
}

#[derive(Clone, Debug, PartialEq)]
enum Item {
    Word(String),
    Acts(Vec<String>),
}

fn turn_of(direction: &str) -> Option<&'static str> {
    match direction {
        "left" => Some("LTURN"),
        "right" => Some("RTURN"),
        _ => None,
    }
}

/// Interprets a rendered command by rewriting innermost constructs first:
/// primitives, then direction phrases, then repetition, then connectives.
/// Returns `None` when the rewriting gets stuck.
pub fn rewrite_interpret(command: &str) -> Option<String> {
    let mut items: Vec<Item> = command
        .split(' ')
        .map(|w| match w {
            "walk" | "look" | "run" | "jump" => Item::Acts(vec![w.to_uppercase()]),
            _ => Item::Word(w.to_owned()),
        })
        .collect();

    // direction phrases
    let mut i = 0;
    while i < items.len() {
        let word = |k: usize| match items.get(k) {
            Some(Item::Word(w)) => Some(w.as_str()),
            _ => None,
        };
        let subject = match &items[i] {
            Item::Word(w) if w == "turn" => Some(Vec::new()),
            Item::Acts(a) => Some(a.clone()),
            Item::Word(_) => None,
        };
        let Some(subject) = subject else {
            i += 1;
            continue;
        };
        let replacement = match (word(i + 1), word(i + 2)) {
            (Some(kw @ ("opposite" | "around")), Some(dir)) if turn_of(dir).is_some() => {
                let turn = turn_of(dir).unwrap().to_owned();
                let mut acts = Vec::new();
                if kw == "opposite" {
                    acts.push(turn.clone());
                    acts.push(turn);
                    acts.extend(subject);
                } else {
                    for _ in 0..4 {
                        acts.push(turn.clone());
                        acts.extend(subject.iter().cloned());
                    }
                }
                Some((3, acts))
            }
            (Some(dir), _) if turn_of(dir).is_some() => {
                let mut acts = vec![turn_of(dir).unwrap().to_owned()];
                acts.extend(subject);
                Some((2, acts))
            }
            _ => None,
        };
        match replacement {
            Some((width, acts)) => {
                items.splice(i..i + width, [Item::Acts(acts)]);
            }
            None if matches!(items[i], Item::Word(_)) => return None,
            None => {}
        }
        i += 1;
    }

    // repetition
    let mut i = 0;
    while i + 1 < items.len() {
        let times = match &items[i + 1] {
            Item::Word(w) if w == "twice" => 2,
            Item::Word(w) if w == "thrice" => 3,
            _ => {
                i += 1;
                continue;
            }
        };
        let Item::Acts(acts) = &items[i] else {
            return None;
        };
        let repeated: Vec<String> = (0..times).flat_map(|_| acts.iter().cloned()).collect();
        items.splice(i..i + 2, [Item::Acts(repeated)]);
        i += 1;
    }

    // connectives
    match items.as_slice() {
        [Item::Acts(a)] => Some(a.join(" ")),
        [Item::Acts(a), Item::Word(w), Item::Acts(b)] if w == "and" => {
            Some(format!("{} {}", a.join(" "), b.join(" ")))
        }
        [Item::Acts(a), Item::Word(w), Item::Acts(b)] if w == "after" => {
            Some(format!("{} {}", b.join(" "), a.join(" ")))
        }
        _ => None,
    }
}

/// Whether a rendered command uses `D -> turn left`, by pattern alone.
pub fn mentions_turn_left(command: &str) -> bool {
    let words: Vec<&str> = command.split(' ').collect();
    words.windows(2).any(|w| w == ["turn", "left"])
        || words
            .windows(3)
            .any(|w| w[0] == "turn" && matches!(w[1], "opposite" | "around") && w[2] == "left")
}

pub fn mentions_jump(command: &str) -> bool {
    command.split(' ').any(|w| w == "jump")
}
