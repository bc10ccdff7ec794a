//! Controlled English for the four categorical forms.
//!
//! Exactly five patterns are recognized (keywords case-insensitive, `is`
//! and `are` interchangeable, an optional `a`/`an` before the predicate):
//!
//! | form      | pattern             | epsilon reading   |
//! |-----------|---------------------|-------------------|
//! | A         | every X is Y        | `Y(tau x. X(x))`  |
//! | I         | some X is Y         | `Y(eps x. X(x))`  |
//! | E         | no X is Y           | `~Y(eps x. X(x))` |
//! | O         | not all X are Y     | `~Y(tau x. X(x))` |
//! | O         | some X are not Y    | `~Y(tau x. X(x))` |
//!
//! The two O patterns differ only in focus and share their epsilon reading.
//! Nouns are looked up in a [`Lexicon`], so plural entries defined as their
//! singular translate to the same predicate.

use std::fmt;

use thiserror::Error;

use crate::montague::{beta_normalize, reify, LambdaTerm, Lexicon, MontagueError, SemType};
use crate::syntax::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SentenceForm {
    EveryA,
    SomeI,
    NoE,
    NotAllO,
    SomeNotO,
}

impl SentenceForm {
    /// The corner of the square: 'A', 'E', 'I' or 'O'.
    pub fn letter(self) -> char {
        match self {
            SentenceForm::EveryA => 'A',
            SentenceForm::SomeI => 'I',
            SentenceForm::NoE => 'E',
            SentenceForm::NotAllO | SentenceForm::SomeNotO => 'O',
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SentencePattern {
    pub form: SentenceForm,
    pub subject: String,
    pub predicate: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Epsilon,
    Montague,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Epsilon => "epsilon",
            Mode::Montague => "montague",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum TranslateError {
    #[error("unrecognized sentence `{0}`; expected every/some/no X is Y, not all X are Y, or some X are not Y")]
    UnrecognizedPattern(String),
    #[error("unknown word `{0}`")]
    UnknownWord(String),
    #[error("`{0}` is not a one-place predicate")]
    NotAPredicate(String),
    #[error(transparent)]
    Montague(#[from] MontagueError),
}

fn is_copula(w: &str) -> bool {
    w == "is" || w == "are"
}

/// Matches one of the five patterns.
pub fn recognize(sentence: &str) -> Result<SentencePattern, TranslateError> {
    let unrecognized = || TranslateError::UnrecognizedPattern(sentence.trim().to_string());
    let words: Vec<&str> = sentence
        .trim()
        .trim_end_matches(['.', '!', '?'])
        .split_whitespace()
        .collect();
    let lower: Vec<String> = words.iter().map(|w| w.to_lowercase()).collect();
    let l: Vec<&str> = lower.iter().map(String::as_str).collect();
    let (form, subject, rest) = match l.as_slice() {
        ["not", "all", _, ..] => (SentenceForm::NotAllO, words[2], 3),
        ["every", _, ..] => (SentenceForm::EveryA, words[1], 2),
        ["no", _, ..] => (SentenceForm::NoE, words[1], 2),
        ["some", _, ..] => (SentenceForm::SomeI, words[1], 2),
        _ => return Err(unrecognized()),
    };
    let tail = &l[rest..];
    let (form, predicate_at) = match tail {
        [cop, "not", ..] if is_copula(cop) && form == SentenceForm::SomeI => (SentenceForm::SomeNotO, rest + 2),
        [cop, ..] if is_copula(cop) => (form, rest + 1),
        _ => return Err(unrecognized()),
    };
    let predicate = match &l[predicate_at..] {
        ["a" | "an", _] => words[predicate_at + 1],
        [_] => words[predicate_at],
        _ => return Err(unrecognized()),
    };
    Ok(SentencePattern {
        form,
        subject: subject.to_string(),
        predicate: predicate.to_string(),
    })
}

/// Lexicon meaning of a noun, trying the word as written and then in lower case.
fn noun_meaning(lex: &Lexicon, word: &str) -> Result<LambdaTerm, TranslateError> {
    let term = lex
        .get(word)
        .or_else(|| lex.get(&word.to_lowercase()))
        .ok_or_else(|| TranslateError::UnknownWord(word.to_string()))?;
    if term.typecheck()? != SemType::predicate() {
        return Err(TranslateError::NotAPredicate(word.to_string()));
    }
    Ok(beta_normalize(term)?)
}

/// Name of the predicate constant a noun denotes, either `c` or `\x:e. c x`.
fn predicate_name(lex: &Lexicon, word: &str) -> Result<String, TranslateError> {
    let meaning = noun_meaning(lex, word)?;
    let head = match &meaning {
        LambdaTerm::Abs(v, _, body) => match &**body {
            LambdaTerm::App(f, arg) if **arg == LambdaTerm::var(v.clone(), SemType::E) => &**f,
            _ => body,
        },
        other => other,
    };
    match head {
        LambdaTerm::Const(name, _) => Ok(name.clone()),
        _ => Err(TranslateError::NotAPredicate(word.to_string())),
    }
}

pub fn translate(sentence: &str, mode: Mode, lex: &Lexicon) -> Result<Formula, TranslateError> {
    translate_pattern(&recognize(sentence)?, mode, lex)
}

pub fn translate_pattern(pat: &SentencePattern, mode: Mode, lex: &Lexicon) -> Result<Formula, TranslateError> {
    match mode {
        Mode::Epsilon => {
            let s = predicate_name(lex, &pat.subject)?;
            let p = predicate_name(lex, &pat.predicate)?;
            let x_is_s = Formula::unary(s, Term::var("x"));
            let of = |t: Term| Formula::unary(p.clone(), t);
            Ok(match pat.form {
                SentenceForm::EveryA => of(Term::tau("x", x_is_s)),
                SentenceForm::SomeI => of(Term::eps("x", x_is_s)),
                SentenceForm::NoE => Formula::not(of(Term::eps("x", x_is_s))),
                SentenceForm::NotAllO | SentenceForm::SomeNotO => Formula::not(of(Term::tau("x", x_is_s))),
            })
        }
        Mode::Montague => {
            let s = noun_meaning(lex, &pat.subject)?;
            let p = noun_meaning(lex, &pat.predicate)?;
            let word = |w: &str| lex.get(w).cloned().ok_or_else(|| TranslateError::UnknownWord(w.into()));
            let not = || LambdaTerm::constant("not", SemType::arrow(SemType::T, SemType::T));
            let term = match pat.form {
                SentenceForm::EveryA => LambdaTerm::apply(word("every")?, [s, p]),
                SentenceForm::SomeI => LambdaTerm::apply(word("some")?, [s, p]),
                SentenceForm::NoE => LambdaTerm::app(not(), LambdaTerm::apply(word("some")?, [s, p])),
                SentenceForm::NotAllO => LambdaTerm::app(not(), LambdaTerm::apply(word("every")?, [s, p])),
                SentenceForm::SomeNotO => {
                    let y = LambdaTerm::var("y", SemType::E);
                    let not_p = LambdaTerm::abs("y", SemType::E, LambdaTerm::app(not(), LambdaTerm::app(p, y)));
                    LambdaTerm::apply(word("some")?, [s, not_p])
                }
            };
            Ok(reify(&beta_normalize(&term)?)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_formula};

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn recognizes_exactly_five_patterns() {
        let cases = [
            ("every S is P", SentenceForm::EveryA),
            ("Some S is P", SentenceForm::SomeI),
            ("NO S are P.", SentenceForm::NoE),
            ("not all S are P", SentenceForm::NotAllO),
            ("some S are not P", SentenceForm::SomeNotO),
            ("every politician is a crook", SentenceForm::EveryA),
        ];
        for (s, form) in cases {
            assert_eq!(recognize(s).unwrap().form, form, "{s}");
        }
        for bad in ["most S are P", "every S P", "some S is not", "all S are P", "every big S is P", ""] {
            assert!(matches!(recognize(bad), Err(TranslateError::UnrecognizedPattern(_))), "{bad}");
        }
    }

    #[test]
    fn epsilon_table() {
        let lex = Lexicon::standard();
        let cases = [
            ("every S is P", "P(tau x. S(x))"),
            ("some S is P", "P(eps x. S(x))"),
            ("no S is P", "~P(eps x. S(x))"),
            ("not all S are P", "~P(tau x. S(x))"),
            ("some S are not P", "~P(tau x. S(x))"),
        ];
        for (s, want) in cases {
            assert_eq!(translate(s, Mode::Epsilon, &lex).unwrap(), f(want), "{s}");
        }
    }

    #[test]
    fn plurals_collapse() {
        let lex = Lexicon::standard();
        let got = translate("some politicians are crooks", Mode::Epsilon, &lex).unwrap();
        assert_eq!(got.to_string(), "crook(eps x. politician(x))");
        assert_eq!(got, translate("Some politician is a crook", Mode::Epsilon, &lex).unwrap());
    }

    #[test]
    fn montague_readings() {
        let lex = Lexicon::standard();
        let cases = [
            ("every S is P", "forall x. S(x) -> P(x)"),
            ("some S is P", "exists x. S(x) & P(x)"),
            ("no S is P", "~exists x. S(x) & P(x)"),
            ("not all S are P", "~forall x. S(x) -> P(x)"),
            ("some S are not P", "exists x. S(x) & ~P(x)"),
        ];
        for (s, want) in cases {
            let got = translate(s, Mode::Montague, &lex).unwrap();
            assert!(alpha_eq(&got, &f(want)), "{s}: {got}");
        }
    }

    #[test]
    fn unknown_and_non_nouns() {
        let lex = Lexicon::standard();
        assert_eq!(
            translate("every unicorn is P", Mode::Epsilon, &lex),
            Err(TranslateError::UnknownWord("unicorn".into()))
        );
        assert_eq!(
            translate("every keith is P", Mode::Epsilon, &lex),
            Err(TranslateError::NotAPredicate("keith".into()))
        );
    }
}
