mod common;

use std::sync::OnceLock;

use aieo_core::model::{enumerate_models, Assignment, ChoiceModel};
use aieo_core::square::{
    bivalence, check_square, proposition_check, random_closed_formula, AieoSquare, Bivalence, SemanticOracle,
};
use aieo_core::syntax::{alpha_eq, dual_normalize, substitute, Formula, Signature, Term};
use proptest::prelude::*;
use proptest::sample::select;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn all_models() -> &'static [ChoiceModel] {
    static MODELS: OnceLock<Vec<ChoiceModel>> = OnceLock::new();
    MODELS.get_or_init(|| {
        enumerate_models(&Signature::unary_predicates(["S", "P"]), 3)
            .unwrap()
            .collect()
    })
}

fn strip_double_negation(f: &Formula) -> &Formula {
    match f {
        Formula::Not(g) => match g.as_ref() {
            Formula::Not(h) => strip_double_negation(h),
            _ => f,
        },
        _ => f,
    }
}

/// A random theory over `S` and `P`, sometimes including one direction of
/// the bivalence hypothesis so that the interesting cases come up often.
fn random_theory(seed: u64) -> Vec<Formula> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut theory: Vec<Formula> = (0..rng.gen_range(1..=2))
        .map(|_| random_closed_formula(&mut rng, 2))
        .collect();
    let eps = Formula::unary("P", Term::eps("x", Formula::unary("S", Term::var("x"))));
    let tau = Formula::unary("P", Term::tau("x", Formula::unary("S", Term::var("x"))));
    match rng.gen_range(0..4) {
        0 => theory.push(Formula::implies(tau, eps)),
        1 => theory.push(Formula::implies(eps, tau)),
        _ => {}
    }
    theory
}

/// Runs the proposition on one theory; `None` when it does not apply
/// (no model up to size 3, or neither direction of bivalence).
fn proposition_on(seed: u64) -> Result<Option<Bivalence>, String> {
    let sig = Signature::unary_predicates(["S", "P"]);
    let theory = random_theory(seed);
    let shown: Vec<String> = theory.iter().map(|f| f.to_string()).collect();
    let oracle = SemanticOracle::new(&sig, theory, 3).map_err(|e| e.to_string())?;
    if oracle.model_count() == Some(0) {
        return Ok(None);
    }
    let biv = bivalence("S", "P", &oracle).map_err(|e| e.to_string())?;
    if biv == Bivalence::Neither {
        return Ok(None);
    }
    let out = proposition_check("S", "P", &oracle).map_err(|e| e.to_string())?;
    if !out.report.all_ok() {
        return Err(format!("theory {:?} chose {} but:\n{}", shown, out.chosen, out.report));
    }
    Ok(Some(biv))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bivalence_makes_a_square(seed in any::<u64>()) {
        if let Err(e) = proposition_on(seed) {
            prop_assert!(false, "{}", e);
        }
    }

    /// `G(tau x. F)` and `G(eps x. ~F)` agree in every model of size <= 3.
    #[test]
    fn tau_is_epsilon_of_the_negation(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let body = common::formula_in_x(&mut rng, 2);
        let context = common::formula_in_x(&mut rng, 2);
        let lhs = substitute(&context, "x", &Term::tau("x", body.clone()));
        let rhs = substitute(&context, "x", &Term::eps("x", Formula::not(body)));
        let env = Assignment::new();
        for m in all_models() {
            prop_assert_eq!(
                m.eval_formula(&env, &lhs).unwrap(),
                m.eval_formula(&env, &rhs).unwrap(),
                "{} vs {} in {}", lhs, rhs, m.to_json()
            );
        }
    }

    #[test]
    fn a_and_not_o_share_a_dual_normal_form(
        s in select(vec!["S", "P", "Q", "R"]),
        p in select(vec!["S", "P", "Q", "R"]),
        negate in any::<bool>(),
    ) {
        let sq = AieoSquare::new(s, p, negate);
        let not_o = dual_normalize(&Formula::not(sq.o.clone()));
        prop_assert!(alpha_eq(&dual_normalize(&sq.a), strip_double_negation(&not_o)));
        let not_e = dual_normalize(&Formula::not(sq.e.clone()));
        prop_assert!(alpha_eq(&dual_normalize(&sq.i), strip_double_negation(&not_e)));
    }

    #[test]
    fn contradictories_need_no_theory(
        s in select(vec!["S", "P", "Q"]),
        p in select(vec!["S", "P", "Q"]),
        negate in any::<bool>(),
    ) {
        let sig = Signature::unary_predicates(["S", "P", "Q"]);
        let oracle = SemanticOracle::new(&sig, Vec::new(), 2).unwrap();
        let report = check_square(&AieoSquare::new(s, p, negate), &oracle).unwrap();
        prop_assert_eq!(report.contradictories_ok, [true, true]);
    }
}

#[test]
fn random_theories_reach_every_case() {
    let mut seen = Vec::new();
    for seed in 0..40 {
        if let Some(b) = proposition_on(seed).unwrap() {
            seen.push(b);
        }
    }
    for want in [Bivalence::LeftToRight, Bivalence::RightToLeft, Bivalence::Both] {
        assert!(seen.contains(&want), "{want:?} never came up in {seen:?}");
    }
}
