//! Natural deduction for classical logic with Hilbert's subnectors.
//!
//! Derivations are explicit trees. Each node names its rule, carries the
//! sequent it concludes and any payload the rule needs (a witness term, an
//! eigenvariable, an equality motive). [`check_derivation`] validates every
//! node locally and returns the end-sequent.
//!
//! Hypotheses form a multiset compared up to alpha-equivalence. Axioms have
//! exactly one hypothesis; extra hypotheses come from explicit weakening, and
//! the two- and three-premise rules share their context.
//!
//! Quantification is handled through the subnectors only:
//!
//! * `tau_intro`: from `G |- F` with `x` not free in `G`, infer `G |- F[x := tau x. F]`;
//! * `tau_elim`: from `G |- F[x := tau x. F]`, infer `G |- F[x := t]`;
//! * `eps_intro`: from `G |- F[x := t]`, infer `G |- F[x := eps x. F]`;
//! * `dual_rewrite`: replace one subterm `eps x. F` by `tau x. ~F` or back,
//!   in a hypothesis or in the conclusion.
//!
//! There is no primitive epsilon elimination; it goes through
//! `dual_rewrite` and the tau rules.

mod build;
mod check;
pub mod library;
mod script;

pub use check::{check_derivation, dual_rewrites, KernelError, KernelErrorKind};
pub use script::{parse_script, Script, ScriptError};

use std::fmt;

use crate::syntax::{canonical, Formula, Term};

/// `hypotheses |- conclusion`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sequent {
    pub hypotheses: Vec<Formula>,
    pub conclusion: Formula,
}

impl Sequent {
    pub fn new(hypotheses: Vec<Formula>, conclusion: Formula) -> Self {
        Sequent {
            hypotheses,
            conclusion,
        }
    }

    /// Equality with hypotheses as a multiset, formulas up to alpha.
    pub fn same_as(&self, other: &Sequent) -> bool {
        multiset_eq(&self.hypotheses, &other.hypotheses)
            && canonical(&self.conclusion) == canonical(&other.conclusion)
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, h) in self.hypotheses.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{h}")?;
        }
        if !self.hypotheses.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "|- {}", self.conclusion)
    }
}

pub(crate) fn sorted_canonical(fs: &[Formula]) -> Vec<Formula> {
    let mut v: Vec<Formula> = fs.iter().map(canonical).collect();
    v.sort();
    v
}

pub(crate) fn multiset_eq(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && sorted_canonical(a) == sorted_canonical(b)
}

/// `big` minus `small` as multisets, or `None` when `small` is not contained.
pub(crate) fn multiset_minus(big: &[Formula], small: &[Formula]) -> Option<Vec<Formula>> {
    let mut rest: Vec<(Formula, &Formula)> = big.iter().map(|f| (canonical(f), f)).collect();
    for f in small {
        let key = canonical(f);
        let at = rest.iter().position(|(c, _)| *c == key)?;
        rest.remove(at);
    }
    Some(rest.into_iter().map(|(_, f)| f.clone()).collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Axiom,
    Weakening,
    AndIntro,
    AndElimLeft,
    AndElimRight,
    OrIntroLeft,
    OrIntroRight,
    OrElim,
    ImpIntro,
    ImpElim,
    NotIntro,
    NotElim,
    FalsumElim,
    DoubleNegElim,
    EqRefl,
    EqSubst,
    TauIntro,
    TauElim,
    EpsIntro,
    DualRewrite,
}

impl Rule {
    pub const ALL: [Rule; 20] = [
        Rule::Axiom,
        Rule::Weakening,
        Rule::AndIntro,
        Rule::AndElimLeft,
        Rule::AndElimRight,
        Rule::OrIntroLeft,
        Rule::OrIntroRight,
        Rule::OrElim,
        Rule::ImpIntro,
        Rule::ImpElim,
        Rule::NotIntro,
        Rule::NotElim,
        Rule::FalsumElim,
        Rule::DoubleNegElim,
        Rule::EqRefl,
        Rule::EqSubst,
        Rule::TauIntro,
        Rule::TauElim,
        Rule::EpsIntro,
        Rule::DualRewrite,
    ];

    /// Name used in proof scripts.
    pub fn name(self) -> &'static str {
        match self {
            Rule::Axiom => "axiom",
            Rule::Weakening => "weaken",
            Rule::AndIntro => "and_intro",
            Rule::AndElimLeft => "and_elim_left",
            Rule::AndElimRight => "and_elim_right",
            Rule::OrIntroLeft => "or_intro_left",
            Rule::OrIntroRight => "or_intro_right",
            Rule::OrElim => "or_elim",
            Rule::ImpIntro => "imp_intro",
            Rule::ImpElim => "imp_elim",
            Rule::NotIntro => "not_intro",
            Rule::NotElim => "not_elim",
            Rule::FalsumElim => "falsum_elim",
            Rule::DoubleNegElim => "dne",
            Rule::EqRefl => "eq_refl",
            Rule::EqSubst => "eq_subst",
            Rule::TauIntro => "tau_intro",
            Rule::TauElim => "tau_elim",
            Rule::EpsIntro => "eps_intro",
            Rule::DualRewrite => "dual_rewrite",
        }
    }

    pub fn from_name(name: &str) -> Option<Rule> {
        Rule::ALL.into_iter().find(|r| r.name() == name)
    }

    pub fn premise_count(self) -> usize {
        match self {
            Rule::Axiom | Rule::EqRefl => 0,
            Rule::AndIntro | Rule::ImpElim | Rule::NotElim | Rule::EqSubst => 2,
            Rule::OrElim => 3,
            _ => 1,
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Rule-specific data that cannot be read off the sequents.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Payload {
    /// Witness for `tau_elim` and `eps_intro`.
    pub term: Option<Term>,
    /// Eigenvariable for `tau_intro`, hole variable for `eq_subst`.
    pub var: Option<String>,
    /// Formula with a hole at `var`, for `eq_subst`.
    pub motive: Option<Formula>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: Rule,
    pub premises: Vec<Derivation>,
    pub conclusion: Sequent,
    pub payload: Payload,
    /// Name of the step, as given in a proof script.
    pub label: Option<String>,
}

impl Derivation {
    pub fn new(rule: Rule, premises: Vec<Derivation>, conclusion: Sequent) -> Self {
        Derivation {
            rule,
            premises,
            conclusion,
            payload: Payload::default(),
            label: None,
        }
    }

    pub fn with_payload(mut self, payload: Payload) -> Self {
        self.payload = payload;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        1 + self.premises.iter().map(Derivation::size).sum::<usize>()
    }

    /// Checks the derivation; see [`check_derivation`].
    pub fn check(&self) -> Result<Sequent, KernelError> {
        check_derivation(self)
    }
}
