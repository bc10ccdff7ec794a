//! The A/E/I/O sentences read through epsilon and tau, and the conditions a
//! square of opposition has to meet:
//!
//! 1. contradictories: `A -||- ~O` and `E -||- ~I`;
//! 2. contraries: never both `|- A` and `|- E`;
//! 3. subcontraries: never both `I |- false` and `E |- false`;
//! 4. subalterns: `A |- I` and `E |- O`.
//!
//! Conditions are evaluated against an [`Oracle`]: bounded model checking,
//! optionally relative to a theory, or lookup in the kernel's library.

mod check;
mod oracle;
mod remark;

pub use check::{bivalence, check_square, proposition_check, Bivalence, Check, PropositionOutcome, SquareReport};
pub use oracle::{Judgement, KernelOracle, Oracle, SemanticOracle, Witness};
pub use remark::{random_closed_formula, remark_check, remark_pool, Quadruple, RemarkReport, RemarkViolation};

use serde::Serialize;
use thiserror::Error;

use crate::kernel::{library, KernelError};
use crate::model::{EntailError, EnumerateError, EvalError};
use crate::syntax::{parse_formula, Formula, ParseError, Signature, SignatureError, SymbolKind};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SquareError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("oracle budget exceeded: {0}")]
    OracleBudgetExceeded(EnumerateError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("bivalence fails both ways: neither P(eps S) |- P(tau S) nor P(tau S) |- P(eps S) holds")]
    HypothesisNotMet,
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("theory line {line}: {error}")]
    Theory { line: usize, error: ParseError },
}

impl From<EntailError> for SquareError {
    fn from(e: EntailError) -> Self {
        match e {
            EntailError::Signature(e) => SquareError::Signature(e),
            EntailError::Enumerate(e) => SquareError::OracleBudgetExceeded(e),
            EntailError::Eval(e) => SquareError::Eval(e),
        }
    }
}

/// The four corners for subject `S` and predicate `P` (or `~P`):
/// `A = P(tau x. S(x))`, `I = P(eps x. S(x))`, `E = ~I`, `O = ~A`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AieoSquare {
    pub a: Formula,
    pub e: Formula,
    pub i: Formula,
    pub o: Formula,
    pub subject: String,
    pub predicate: String,
    pub negated: bool,
}

impl AieoSquare {
    pub fn new(s: &str, p: &str, negate: bool) -> AieoSquare {
        let [a, e, i, o] = library::square_sentences(s, p, negate);
        AieoSquare {
            a,
            e,
            i,
            o,
            subject: s.to_string(),
            predicate: p.to_string(),
            negated: negate,
        }
    }

    /// `S(S,P)` or `S(S,~P)`.
    pub fn name(&self) -> String {
        format!("S({}, {}{})", self.subject, if self.negated { "~" } else { "" }, self.predicate)
    }

    pub fn corners(&self) -> [(&'static str, &Formula); 4] {
        [("A", &self.a), ("E", &self.e), ("I", &self.i), ("O", &self.o)]
    }
}

/// Builds the square after checking that `s` and `p` are unary in `sig`.
pub fn build_square(sig: &Signature, s: &str, p: &str, negate: bool) -> Result<AieoSquare, SquareError> {
    for name in [s, p] {
        match sig.predicate_arity(name) {
            Some(1) => {}
            Some(found) => {
                return Err(SignatureError::ArityError {
                    kind: SymbolKind::Predicate,
                    symbol: name.to_string(),
                    expected: 1,
                    found,
                }
                .into())
            }
            None => {
                return Err(SignatureError::Unknown {
                    kind: SymbolKind::Predicate,
                    symbol: name.to_string(),
                }
                .into())
            }
        }
    }
    Ok(AieoSquare::new(s, p, negate))
}

/// One formula per line; blank lines and `#` comments are skipped.
pub fn parse_theory(text: &str) -> Result<Vec<Formula>, SquareError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        out.push(parse_formula(line).map_err(|error| SquareError::Theory { line: i + 1, error })?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn corners() {
        let sq = AieoSquare::new("S", "P", false);
        assert_eq!(sq.a, f("P(tau x. S(x))"));
        assert_eq!(sq.i, f("P(eps x. S(x))"));
        assert_eq!(sq.e, f("~P(eps x. S(x))"));
        assert_eq!(sq.o, f("~P(tau x. S(x))"));
        let neg = AieoSquare::new("S", "P", true);
        assert_eq!(neg.i, f("~P(eps x. S(x))"));
        assert_eq!(neg.i, sq.e);
        assert_eq!(neg.a, f("~P(tau x. S(x))"));
        assert_eq!(neg.o, f("~~P(tau x. S(x))"));
        assert_eq!(neg.name(), "S(S, ~P)");
    }

    #[test]
    fn arity_is_checked() {
        let mut sig = Signature::unary_predicates(["S"]);
        sig.add_predicate("R", 2).unwrap();
        assert!(build_square(&sig, "S", "S", false).is_ok());
        assert!(matches!(
            build_square(&sig, "S", "R", false),
            Err(SquareError::Signature(SignatureError::ArityError { .. }))
        ));
        assert!(build_square(&sig, "S", "Q", false).is_err());
    }

    #[test]
    fn theory_files() {
        let t = parse_theory("# bivalence\nP(tau x. S(x)) -> P(eps x. S(x))\n\n").unwrap();
        assert_eq!(t, vec![f("P(tau x. S(x)) -> P(eps x. S(x))")]);
        assert!(matches!(parse_theory("P(\n"), Err(SquareError::Theory { line: 1, .. })));
    }
}
