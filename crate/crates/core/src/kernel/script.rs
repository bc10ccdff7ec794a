//! Line-oriented proof scripts.
//!
//! ```text
//! # comments and blank lines are ignored
//! 1: axiom :: P(c) |- P(c)
//! 2: eps_intro 1 [term: c] :: P(c) |- P(eps x. P(x))
//! ```
//!
//! Each line is `label: rule premise... [key: value]... :: sequent`. Premises
//! refer to earlier labels; payload keys are `term`, `var` and `motive`.
//! A sequent is `hyp; hyp |- conclusion`, with `|- conclusion` for no
//! hypotheses. The last line is the root of the derivation.

use std::collections::{BTreeMap, HashMap, HashSet};

use thiserror::Error;

use super::{Derivation, Payload, Rule, Sequent};
use crate::syntax::{parse_formula, parse_term, Formula};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ScriptError {
    pub line: usize,
    pub message: String,
}

/// A parsed script: the root derivation and the line of every label.
#[derive(Clone, Debug)]
pub struct Script {
    pub root: Derivation,
    pub lines: BTreeMap<String, usize>,
}

impl Script {
    pub fn line_of(&self, label: &str) -> Option<usize> {
        self.lines.get(label).copied()
    }
}

pub fn parse_script(src: &str) -> Result<Script, ScriptError> {
    let mut steps: HashMap<String, Derivation> = HashMap::new();
    let mut lines = BTreeMap::new();
    let mut last = None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let text = raw.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let err = |message: String| ScriptError { line, message };
        let (head, sequent) = text
            .split_once("::")
            .ok_or_else(|| err("expected `label: rule ... :: sequent`".into()))?;
        let (label, rest) = head
            .split_once(':')
            .ok_or_else(|| err("missing `label:` at the start of the line".into()))?;
        let label = label.trim();
        if label.is_empty() || label.contains(char::is_whitespace) {
            return Err(err(format!("bad label `{label}`")));
        }
        if lines.contains_key(label) {
            return Err(err(format!("label `{label}` is used twice")));
        }
        let (words, payload_src) = match rest.find('[') {
            Some(at) => rest.split_at(at),
            None => (rest, ""),
        };
        let mut words = words.split_whitespace();
        let rule_name = words.next().ok_or_else(|| err("missing rule name".into()))?;
        let rule = Rule::from_name(rule_name).ok_or_else(|| err(format!("unknown rule `{rule_name}`")))?;
        let premises = words
            .map(|w| {
                steps
                    .get(w)
                    .cloned()
                    .ok_or_else(|| err(format!("premise `{w}` is not an earlier label")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let payload = parse_payload(payload_src).map_err(err)?;
        let conclusion = parse_sequent(sequent).map_err(err)?;
        let d = Derivation {
            rule,
            premises,
            conclusion,
            payload,
            label: Some(label.to_string()),
        };
        steps.insert(label.to_string(), d);
        lines.insert(label.to_string(), line);
        last = Some(label.to_string());
    }
    let root = last
        .and_then(|l| steps.remove(&l))
        .ok_or(ScriptError {
            line: 0,
            message: "script has no steps".into(),
        })?;
    Ok(Script { root, lines })
}

fn parse_payload(src: &str) -> Result<Payload, String> {
    let mut payload = Payload::default();
    let mut rest = src.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('[')
            .and_then(|r| r.split_once(']'))
            .ok_or_else(|| format!("expected `[key: value]`, found `{rest}`"))?;
        let (group, tail) = inner;
        let (key, value) = group
            .split_once(':')
            .ok_or_else(|| format!("payload `[{group}]` lacks a `key:`"))?;
        let value = value.trim();
        match key.trim() {
            "term" => payload.term = Some(parse_term(value).map_err(|e| format!("in term payload: {e}"))?),
            "var" => {
                if value.is_empty() || !value.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                    return Err(format!("bad variable `{value}`"));
                }
                payload.var = Some(value.to_string());
            }
            "motive" => {
                payload.motive = Some(parse_formula(value).map_err(|e| format!("in motive payload: {e}"))?)
            }
            other => return Err(format!("unknown payload key `{other}`")),
        }
        rest = tail.trim();
    }
    Ok(payload)
}

fn parse_sequent(src: &str) -> Result<Sequent, String> {
    let (hyps, concl) = src.split_once("|-").ok_or("sequent lacks `|-`")?;
    let formula = |s: &str| parse_formula(s.trim()).map_err(|e| format!("in `{}`: {e}", s.trim()));
    let hypotheses = hyps
        .split(';')
        .filter(|h| !h.trim().is_empty())
        .map(formula)
        .collect::<Result<Vec<Formula>, _>>()?;
    Ok(Sequent::new(hypotheses, formula(concl)?))
}

impl Derivation {
    /// Renders the tree as a proof script, premises first. Step labels are
    /// kept when unique; other steps are numbered.
    pub fn to_script(&self) -> String {
        let mut out = String::new();
        let mut used = HashSet::new();
        let mut counter = 0;
        self.write_steps(&mut out, &mut used, &mut counter);
        out
    }

    fn write_steps(&self, out: &mut String, used: &mut HashSet<String>, counter: &mut usize) -> String {
        let premises: Vec<String> = self.premises.iter().map(|p| p.write_steps(out, used, counter)).collect();
        let label = match &self.label {
            Some(l) if !used.contains(l) && !l.contains([':', '[', ' ']) => l.clone(),
            _ => loop {
                *counter += 1;
                let candidate = counter.to_string();
                if !used.contains(&candidate) {
                    break candidate;
                }
            },
        };
        used.insert(label.clone());
        let mut line = format!("{label}: {}", self.rule);
        for p in &premises {
            line.push(' ');
            line.push_str(p);
        }
        if let Some(t) = &self.payload.term {
            line.push_str(&format!(" [term: {t}]"));
        }
        if let Some(v) = &self.payload.var {
            line.push_str(&format!(" [var: {v}]"));
        }
        if let Some(m) = &self.payload.motive {
            line.push_str(&format!(" [motive: {m}]"));
        }
        line.push_str(&format!(" :: {}\n", self.conclusion));
        out.push_str(&line);
        label
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_example() {
        let script = parse_script(
            "# witness\n1: axiom :: P(c) |- P(c)\n\n2: eps_intro 1 [term: c] :: P(c) |- P(eps x. P(x))\n",
        )
        .unwrap();
        assert_eq!(script.line_of("2"), Some(4));
        let end = script.root.check().unwrap();
        assert_eq!(end.to_string(), "P(c) |- P(eps x. P(x))");
    }

    #[test]
    fn round_trip_through_text() {
        let d = Derivation::axiom(parse_formula("P(x)").unwrap())
            .imp_intro(&parse_formula("P(x)").unwrap())
            .unwrap()
            .tau_intro("x");
        let text = d.to_script();
        let back = parse_script(&text).unwrap();
        assert!(back.root.check().is_ok());
        assert_eq!(back.root.conclusion, d.conclusion);
        assert_eq!(back.root.to_script(), text);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let e = parse_script("1: axiom :: P(c) |- P(c)\n2: and_intro 1 9 :: |- P(c)").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(parse_script("1: nonsense :: |- P(c)").is_err());
        assert!(parse_script("1: axiom :: P(c) |- P(c)\n1: axiom :: P(c) |- P(c)").is_err());
        assert!(parse_script("1: axiom [color: red] :: P(c) |- P(c)").is_err());
        assert!(parse_script("1: axiom :: P(c)").is_err());
        assert!(parse_script("# nothing\n").is_err());
    }
}
