//! Line-oriented text format.
//!
//! ```text
//! # comment
//! width 2
//! states 6
//! initial 0
//! finals 4
//! sink 5
//! trans 0 0 10 -> 3
//! ```
//!
//! `mode nondet` marks a nondeterministic table; the default is
//! deterministic, with unlisted transitions going to the sink. State ids may
//! carry an `a` prefix (`a3`). A deterministic table that leaves some symbol
//! uncovered but names no sink gets a fresh sink state appended. A width-0
//! guard is written `_`.

use std::fmt::Write as _;

use super::{partition, AutomatonError, Guard, Result, StateId, TreeAutomaton};

impl TreeAutomaton {
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "width {}", self.width).unwrap();
        writeln!(out, "states {}", self.num_states).unwrap();
        writeln!(out, "initial {}", self.initial).unwrap();
        let finals: Vec<String> = self.finals().map(|q| q.to_string()).collect();
        if finals.is_empty() {
            out.push_str("finals\n");
        } else {
            writeln!(out, "finals {}", finals.join(" ")).unwrap();
        }
        if let Some(s) = self.sink {
            writeln!(out, "sink {s}").unwrap();
        }
        if !self.deterministic {
            out.push_str("mode nondet\n");
        }
        for (l, r, g, t) in self.transitions() {
            let guard = if self.width == 0 { "_".to_string() } else { g.to_string() };
            writeln!(out, "trans {l} {r} {guard} -> {t}").unwrap();
        }
        out
    }

    pub fn from_text(text: &str) -> Result<TreeAutomaton> {
        let mut width = None;
        let mut states = None;
        let mut initial = None;
        let mut finals = Vec::new();
        let mut sink = None;
        let mut deterministic = true;
        let mut rules = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |msg: String| AutomatonError::Syntax { line: line_no, msg };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let keyword = words.next().expect("non-empty line");
            let rest: Vec<&str> = words.collect();
            let single = match rest[..] {
                [w] => Some(w),
                _ => None,
            };
            let one = || single.ok_or_else(|| err(format!("`{keyword}` takes exactly one argument")));
            match keyword {
                "width" => {
                    let w = one()?;
                    width = Some(w.parse::<usize>().map_err(|_| err(format!("bad width `{w}`")))?);
                }
                "states" => {
                    let w = one()?;
                    states = Some(w.parse::<usize>().map_err(|_| err(format!("bad state count `{w}`")))?);
                }
                "initial" => initial = Some(state_id(one()?).ok_or_else(|| err("bad state id".into()))?),
                "finals" => {
                    for w in rest {
                        finals.push(state_id(w).ok_or_else(|| err(format!("bad state id `{w}`")))?);
                    }
                }
                "sink" => sink = Some(state_id(one()?).ok_or_else(|| err("bad state id".into()))?),
                "mode" => {
                    deterministic = match one()? {
                        "det" => true,
                        "nondet" => false,
                        m => return Err(err(format!("unknown mode `{m}`"))),
                    }
                }
                "trans" => {
                    let [l, r, g, arrow, t] = rest[..] else {
                        return Err(err("expected `trans <left> <right> <guard> -> <target>`".into()));
                    };
                    if arrow != "->" {
                        return Err(err("expected `->`".into()));
                    }
                    let id = |w: &str| state_id(w).ok_or_else(|| err(format!("bad state id `{w}`")));
                    let guard = Guard::parse(g).ok_or_else(|| err(format!("bad guard `{g}`")))?;
                    rules.push((id(l)?, id(r)?, guard, id(t)?, line_no));
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }

        let missing = |what: &str| AutomatonError::Syntax {
            line: 0,
            msg: format!("missing `{what}` line"),
        };
        let width = width.ok_or_else(|| missing("width"))?;
        let mut states = states.ok_or_else(|| missing("states"))?;
        let initial = initial.ok_or_else(|| missing("initial"))?;
        for &(_, _, g, _, line) in &rules {
            if g.width() != width {
                return Err(AutomatonError::Syntax {
                    line,
                    msg: format!("guard `{g}` does not have width {width}"),
                });
            }
        }

        if deterministic && sink.is_none() {
            let mut by_pair: std::collections::BTreeMap<(StateId, StateId), Vec<(Guard, StateId)>> = Default::default();
            for &(l, r, g, t, _) in &rules {
                by_pair.entry((l, r)).or_default().push((g, t));
            }
            let total = (0..states).all(|l| {
                (0..states).all(|r| by_pair.get(&(l, r)).is_some_and(|e| partition::is_total(width, e)))
            });
            if !total {
                sink = Some(states);
                states += 1;
            }
        }
        TreeAutomaton::from_parts(
            width,
            states,
            initial,
            finals,
            sink,
            deterministic,
            rules.into_iter().map(|(l, r, g, t, _)| (l, r, g, t)),
        )
    }
}

fn state_id(word: &str) -> Option<StateId> {
    word.strip_prefix('a').unwrap_or(word).parse().ok()
}
