use std::fmt;

use serde::Serialize;

use super::{AieoSquare, Judgement, Oracle, SquareError};
use crate::kernel::library::{eps_of, tau_of};
use crate::syntax::Formula;

/// One oracle call made while checking a square.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    /// Condition number and the sequent asked, e.g. `iv: A |- I`.
    pub condition: String,
    pub premises: Vec<Formula>,
    pub goal: Formula,
    #[serde(flatten)]
    pub judgement: Judgement,
}

#[derive(Clone, Debug, Serialize)]
pub struct SquareReport {
    pub square: AieoSquare,
    pub oracle: String,
    /// `A -||- ~O`, `E -||- ~I`
    pub contradictories_ok: [bool; 2],
    /// Not both `|- A` and `|- E`.
    pub contraries_ok: bool,
    /// Not both `I |- false` and `E |- false`.
    pub subcontraries_ok: bool,
    /// `A |- I`, `E |- O`
    pub subalterns_ok: [bool; 2],
    /// Related readings reported for information only.
    pub derived_condition_notes: Vec<String>,
    pub witnesses: Vec<Check>,
}

impl SquareReport {
    pub fn all_ok(&self) -> bool {
        self.contradictories_ok.iter().all(|&b| b)
            && self.contraries_ok
            && self.subcontraries_ok
            && self.subalterns_ok.iter().all(|&b| b)
    }
}

struct Asker<'a> {
    oracle: &'a dyn Oracle,
    checks: Vec<Check>,
}

impl Asker<'_> {
    fn ask(&mut self, condition: &str, premises: &[&Formula], goal: &Formula) -> Result<bool, SquareError> {
        let premises: Vec<Formula> = premises.iter().map(|&p| p.clone()).collect();
        let judgement = self.oracle.entails(&premises, goal)?;
        let holds = judgement.holds;
        self.checks.push(Check {
            condition: condition.to_string(),
            premises,
            goal: goal.clone(),
            judgement,
        });
        Ok(holds)
    }
}

/// Evaluates the four conditions of a square of opposition.
pub fn check_square(sq: &AieoSquare, oracle: &dyn Oracle) -> Result<SquareReport, SquareError> {
    let (a, e, i, o) = (&sq.a, &sq.e, &sq.i, &sq.o);
    let not = |f: &Formula| Formula::not(f.clone());
    let (not_o, not_i) = (not(o), not(i));
    let mut q = Asker { oracle, checks: Vec::new() };

    let a_o = q.ask("i: A |- ~O", &[a], &not_o)? & q.ask("i: ~O |- A", &[&not_o], a)?;
    let e_i = q.ask("i: E |- ~I", &[e], &not_i)? & q.ask("i: ~I |- E", &[&not_i], e)?;
    let a_valid = q.ask("ii: |- A", &[], a)?;
    let e_valid = q.ask("ii: |- E", &[], e)?;
    let i_absurd = q.ask("iii: I |- false", &[i], &Formula::False)?;
    let e_absurd = q.ask("iii: E |- false", &[e], &Formula::False)?;
    let a_i = q.ask("iv: A |- I", &[a], i)?;
    let e_o = q.ask("iv: E |- O", &[e], o)?;

    let mut notes = vec![
        "condition iii is checked as stated: not both I |- false and E |- false".to_string(),
    ];
    let mut note = |what: &str, premises: &[Formula], goal: Formula| -> Result<(), SquareError> {
        let verdict = if oracle.holds(premises, &goal)? { "holds" } else { "does not hold" };
        notes.push(format!("{what}: {verdict}"));
        Ok(())
    };
    note("A and E never both true (|- ~(A & E))", &[], not(&Formula::and(a.clone(), e.clone())))?;
    note("I and O never both false (|- I | O)", &[], Formula::or(i.clone(), o.clone()))?;
    note("falsity of I gives falsity of A (~I |- ~A)", &[not_i.clone()], not(a))?;
    note("falsity of O gives falsity of E (~O |- ~E)", &[not_o.clone()], not(e))?;

    Ok(SquareReport {
        square: sq.clone(),
        oracle: oracle.describe(),
        contradictories_ok: [a_o, e_i],
        contraries_ok: !(a_valid && e_valid),
        subcontraries_ok: !(i_absurd && e_absurd),
        subalterns_ok: [a_i, e_o],
        derived_condition_notes: notes,
        witnesses: q.checks,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Bivalence {
    /// Only `P(eps S) |- P(tau S)`.
    LeftToRight,
    /// Only `P(tau S) |- P(eps S)`.
    RightToLeft,
    Both,
    Neither,
}

impl fmt::Display for Bivalence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bivalence::LeftToRight => "P(eps S) |- P(tau S)",
            Bivalence::RightToLeft => "P(tau S) |- P(eps S)",
            Bivalence::Both => "both directions",
            Bivalence::Neither => "neither direction",
        })
    }
}

/// Which of `P(eps S) |- P(tau S)` and `P(tau S) |- P(eps S)` the oracle accepts.
pub fn bivalence(s: &str, p: &str, oracle: &dyn Oracle) -> Result<Bivalence, SquareError> {
    let eps = Formula::unary(p, eps_of(s));
    let tau = Formula::unary(p, tau_of(s));
    let l2r = oracle.holds(std::slice::from_ref(&eps), &tau)?;
    let r2l = oracle.holds(std::slice::from_ref(&tau), &eps)?;
    Ok(match (l2r, r2l) {
        (true, true) => Bivalence::Both,
        (true, false) => Bivalence::LeftToRight,
        (false, true) => Bivalence::RightToLeft,
        (false, false) => Bivalence::Neither,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct PropositionOutcome {
    pub bivalence: Bivalence,
    pub chosen: String,
    pub report: SquareReport,
}

/// Picks the square the bivalence hypothesis makes work and checks it:
/// `S(S,P)` when `P(tau S) |- P(eps S)`, otherwise `S(S,~P)`.
pub fn proposition_check(s: &str, p: &str, oracle: &dyn Oracle) -> Result<PropositionOutcome, SquareError> {
    let biv = bivalence(s, p, oracle)?;
    let negate = match biv {
        Bivalence::RightToLeft | Bivalence::Both => false,
        Bivalence::LeftToRight => true,
        Bivalence::Neither => return Err(SquareError::HypothesisNotMet),
    };
    let sq = AieoSquare::new(s, p, negate);
    Ok(PropositionOutcome {
        bivalence: biv,
        chosen: sq.name(),
        report: check_square(&sq, oracle)?,
    })
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "[ok]"
    } else {
        "[no]"
    }
}

const LEFT: usize = 12;
const RIGHT: usize = 46;
const MID: usize = (LEFT + RIGHT) / 2;

/// Fixed-size canvas for the square diagram.
struct Canvas(Vec<Vec<char>>);

impl Canvas {
    fn new(rows: usize) -> Canvas {
        Canvas(vec![vec![' '; RIGHT + 12]; rows])
    }

    fn put(&mut self, row: usize, col: usize, text: &str) {
        for (k, c) in text.chars().enumerate() {
            self.0[row][col + k] = c;
        }
    }

    fn centered(&mut self, row: usize, text: &str) {
        self.put(row, MID - text.chars().count() / 2, text);
    }

    fn edge(&mut self, row: usize, left: &str, label: &str, right: &str) {
        self.put(row, LEFT, left);
        self.put(row, LEFT + 2, &"-".repeat(RIGHT - LEFT - 3));
        self.put(row, RIGHT, right);
        self.centered(row, &format!(" {label} "));
    }

    fn render(&self) -> String {
        let lines: Vec<String> = self.0.iter().map(|r| r.iter().collect::<String>().trim_end().to_string()).collect();
        lines.join("\n")
    }
}

impl fmt::Display for SquareReport {
    /// The square drawn with each edge labelled by its verdict, then the
    /// corner formulas.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sq = &self.square;
        let [cd1, cd2] = self.contradictories_ok;
        let [sa1, sa2] = self.subalterns_ok;
        let mut c = Canvas::new(7);
        c.edge(0, "A", &format!("contraries {}", mark(self.contraries_ok)), "E");
        c.edge(6, "I", &format!("subcontraries {}", mark(self.subcontraries_ok)), "O");
        for row in 1..6 {
            c.put(row, LEFT, "|");
            c.put(row, RIGHT, "|");
        }
        c.put(5, LEFT, "v");
        c.put(5, RIGHT, "v");
        for (row, d) in [(1, 3), (2, 6), (4, 6), (5, 3)] {
            let (l, r) = if row < 3 { ("\\", "/") } else { ("/", "\\") };
            c.put(row, LEFT + d, l);
            c.put(row, RIGHT - d, r);
        }
        c.centered(2, "contradictories");
        c.centered(3, &format!("A-O {}  E-I {}", mark(cd1), mark(cd2)));
        c.put(2, 1, "subaltern");
        c.put(3, 1, &format!("A->I {}", mark(sa1)));
        c.put(2, RIGHT + 2, "subaltern");
        c.put(3, RIGHT + 2, &format!("E->O {}", mark(sa2)));
        writeln!(f, "{} ({})", sq.name(), self.oracle)?;
        writeln!(f)?;
        writeln!(f, "{}", c.render())?;
        writeln!(f)?;
        for (letter, formula) in sq.corners() {
            writeln!(f, "  {letter} = {formula}")?;
        }
        writeln!(f)?;
        for note in &self.derived_condition_notes {
            writeln!(f, "note: {note}")?;
        }
        write!(f, "square of opposition: {}", if self.all_ok() { "yes" } else { "no" })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::square::{KernelOracle, SemanticOracle, Witness};
    use crate::syntax::{parse_formula, Signature};

    fn sp() -> Signature {
        Signature::unary_predicates(["S", "P"])
    }

    fn f(src: &str) -> Formula {
        parse_formula(src).unwrap()
    }

    #[test]
    fn plain_square_fails_subalternation() {
        let oracle = SemanticOracle::new(&sp(), vec![], 2).unwrap();
        let report = check_square(&AieoSquare::new("S", "P", false), &oracle).unwrap();
        assert_eq!(report.contradictories_ok, [true, true]);
        assert!(!report.subalterns_ok[0]);
        let a_i = report.witnesses.iter().find(|c| c.condition == "iv: A |- I").unwrap();
        let Some(Witness::Countermodel(cm)) = &a_i.judgement.witness else { panic!("no countermodel") };
        assert!(cm.refutes(&a_i.premises, &a_i.goal));
        assert_eq!(cm.model.size(), 2);
    }

    #[test]
    fn first_theory_gives_the_plain_square() {
        let oracle = SemanticOracle::new(&sp(), vec![f("P(tau x. S(x)) -> P(eps x. S(x))")], 3).unwrap();
        let out = proposition_check("S", "P", &oracle).unwrap();
        assert_eq!(out.chosen, "S(S, P)");
        assert!(out.report.all_ok(), "{}", out.report);
    }

    #[test]
    fn second_theory_gives_the_negated_square() {
        let oracle = SemanticOracle::new(&sp(), vec![f("P(eps x. S(x)) -> P(tau x. S(x))")], 3).unwrap();
        let out = proposition_check("S", "P", &oracle).unwrap();
        assert_eq!(out.bivalence, Bivalence::LeftToRight);
        assert_eq!(out.chosen, "S(S, ~P)");
        assert!(out.report.all_ok(), "{}", out.report);
    }

    #[test]
    fn no_theory_no_hypothesis() {
        let oracle = SemanticOracle::new(&sp(), vec![], 2).unwrap();
        assert_eq!(bivalence("S", "P", &oracle).unwrap(), Bivalence::Neither);
        assert_eq!(proposition_check("S", "P", &oracle).unwrap_err(), SquareError::HypothesisNotMet);
    }

    #[test]
    fn pointwise_bivalent_predicate() {
        let oracle = SemanticOracle::new(&sp(), vec![f("forall x. P(x)")], 3).unwrap();
        assert_eq!(bivalence("S", "P", &oracle).unwrap(), Bivalence::Both);
    }

    #[test]
    fn kernel_oracle_agrees_on_both_squares() {
        let g1 = f("P(tau x. S(x)) -> P(eps x. S(x))");
        let k = KernelOracle::for_square("S", "P", vec![g1]).unwrap();
        let report = check_square(&AieoSquare::new("S", "P", false), &k).unwrap();
        assert!(report.all_ok(), "{report}");
        let g2 = f("P(eps x. S(x)) -> P(tau x. S(x))");
        let k = KernelOracle::for_square("S", "P", vec![g2]).unwrap();
        let report = check_square(&AieoSquare::new("S", "P", true), &k).unwrap();
        assert!(report.all_ok(), "{report}");
        let a_i = report.witnesses.iter().find(|c| c.condition == "iv: A |- I").unwrap();
        assert!(matches!(a_i.judgement.witness, Some(Witness::Derivation { .. })));
    }

    #[test]
    fn rendering_mentions_every_edge() {
        let oracle = SemanticOracle::new(&sp(), vec![f("P(tau x. S(x)) -> P(eps x. S(x))")], 2).unwrap();
        let text = check_square(&AieoSquare::new("S", "P", false), &oracle).unwrap().to_string();
        for word in ["contraries [ok]", "subcontraries [ok]", "A->I [ok]", "E->O [ok]", "A-O [ok]  E-I [ok]", "A = P(tau x. S(x))", "O = ~P(tau x. S(x))"] {
            assert!(text.contains(word), "{word} missing from\n{text}");
        }
    }
}
