//! Three shortcomings of the standard quantifier meanings, each computed
//! rather than asserted.

use std::fmt;

use serde::Serialize;

use super::{beta_normalize, reify, reify_term, LambdaTerm, Lexicon, MontagueError, SemType};
use crate::model::{enumerate_models, entails, ChoiceModel, ModelDoc};
use crate::syntax::{Formula, Signature, Term};

/// Bracketed constituent structure over words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tree {
    Leaf(String),
    Node(Vec<Tree>),
    /// `λx. words...`, an abstraction over a gap.
    Lambda(String, Vec<Tree>),
}

impl Tree {
    fn leaf(w: &str) -> Tree {
        Tree::Leaf(w.into())
    }

    /// Words under this node, in order, without bound variables.
    pub fn yield_words(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect(&mut Vec::new(), &mut out);
        out
    }

    fn collect(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        match self {
            Tree::Leaf(w) if !bound.contains(w) => out.push(w.clone()),
            Tree::Leaf(_) => {}
            Tree::Node(kids) => kids.iter().for_each(|k| k.collect(bound, out)),
            Tree::Lambda(x, kids) => {
                bound.push(x.clone());
                kids.iter().for_each(|k| k.collect(bound, out));
                bound.pop();
            }
        }
    }

    /// Word yields of every subtree.
    pub fn constituents(&self) -> Vec<Vec<String>> {
        let mut out = vec![self.yield_words()];
        if let Tree::Node(kids) | Tree::Lambda(_, kids) = self {
            for k in kids {
                out.extend(k.constituents());
            }
        }
        out
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words = |f: &mut fmt::Formatter<'_>, kids: &[Tree]| {
            kids.iter()
                .enumerate()
                .try_for_each(|(i, k)| write!(f, "{}{k}", if i > 0 { " " } else { "" }))
        };
        match self {
            Tree::Leaf(w) => f.write_str(w),
            Tree::Node(kids) => {
                f.write_str("(")?;
                words(f, kids)?;
                f.write_str(")")
            }
            Tree::Lambda(x, kids) => {
                write!(f, "(λ{x}. ")?;
                words(f, kids)?;
                f.write_str(")")
            }
        }
    }
}

fn serialize_model<S: serde::Serializer>(m: &ChoiceModel, s: S) -> Result<S::Ok, S::Error> {
    ModelDoc::from(m).serialize(s)
}

fn display<T: fmt::Display, S: serde::Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Clone, Debug, Serialize)]
#[serde(tag = "problem", rename_all = "snake_case")]
pub enum InadequacyReport {
    /// Swapping restriction and predicate changes the epsilon reading but
    /// not the standard one.
    Asymmetry {
        left: Formula,
        right: Formula,
        #[serde(serialize_with = "serialize_model")]
        model: ChoiceModel,
        left_value: bool,
        right_value: bool,
        standard_left: Formula,
        standard_right: Formula,
        standard_equivalent: bool,
    },
    /// The standard reading abstracts over a non-constituent; the epsilon
    /// reading follows the syntax.
    Constituency {
        sentence: String,
        #[serde(serialize_with = "display")]
        syntax_tree: Tree,
        semantic_tree: String,
        standard_formula: Formula,
        non_constituents: Vec<String>,
        #[serde(serialize_with = "display")]
        epsilon_tree: Tree,
        epsilon_formula: Formula,
        epsilon_non_constituents: Vec<String>,
    },
    /// A bare noun phrase denotes an individual under epsilon and a type
    /// raised quantifier under the standard reading.
    NounPhrase {
        phrase: String,
        #[serde(serialize_with = "display")]
        epsilon_term: LambdaTerm,
        #[serde(serialize_with = "display")]
        epsilon_type: SemType,
        epsilon_reading: Term,
        presupposition: Formula,
        #[serde(serialize_with = "display")]
        standard_term: LambdaTerm,
        #[serde(serialize_with = "display")]
        standard_type: SemType,
    },
}

impl fmt::Display for InadequacyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InadequacyReport::Asymmetry {
                left,
                right,
                model,
                left_value,
                right_value,
                standard_left,
                standard_right,
                standard_equivalent,
            } => {
                writeln!(f, "(1) restriction and predicate are not interchangeable")?;
                writeln!(f, "  standard:  {standard_left}  vs  {standard_right}")?;
                writeln!(f, "  equivalent up to size 2: {standard_equivalent}")?;
                writeln!(f, "  epsilon:   {left}  vs  {right}")?;
                writeln!(f, "  model: {}", serde_json::to_string(&ModelDoc::from(model)).map_err(|_| fmt::Error)?)?;
                write!(f, "  values: {left_value} vs {right_value}")
            }
            InadequacyReport::Constituency {
                sentence,
                syntax_tree,
                semantic_tree,
                standard_formula,
                non_constituents,
                epsilon_tree,
                epsilon_formula,
                epsilon_non_constituents,
            } => {
                writeln!(f, "(2) {sentence}")?;
                writeln!(f, "  syntax:    {syntax_tree}")?;
                writeln!(f, "  semantics: {semantic_tree}")?;
                writeln!(f, "  standard reading: {standard_formula}")?;
                writeln!(f, "  not constituents: {}", non_constituents.join(", "))?;
                writeln!(f, "  epsilon:   {epsilon_tree}")?;
                writeln!(f, "  epsilon reading: {epsilon_formula}")?;
                write!(f, "  epsilon non-constituents: {}", epsilon_non_constituents.len())
            }
            InadequacyReport::NounPhrase {
                phrase,
                epsilon_term,
                epsilon_type,
                epsilon_reading,
                presupposition,
                standard_term,
                standard_type,
            } => {
                writeln!(f, "(3) {phrase}")?;
                writeln!(f, "  epsilon:  {epsilon_term} : {epsilon_type}  =  {epsilon_reading}")?;
                writeln!(f, "  presupposition: {presupposition}")?;
                write!(f, "  standard: {standard_term} : {standard_type}")
            }
        }
    }
}

/// Runs demonstration 1, 2 or 3.
pub fn demonstrate_inadequacy(which: u8) -> Result<InadequacyReport, MontagueError> {
    let lex = Lexicon::standard();
    match which {
        1 => asymmetry(&lex),
        2 => constituency(&lex),
        3 => noun_phrase(&lex),
        other => Err(MontagueError::NoSuchDemonstration(other)),
    }
}

fn normalized(lex: &Lexicon, src: &str) -> Result<LambdaTerm, MontagueError> {
    beta_normalize(&lex.parse_term(src)?)
}

fn asymmetry(lex: &Lexicon) -> Result<InadequacyReport, MontagueError> {
    let left = reify(&normalized(lex, "P (eps S)")?)?;
    let right = reify(&normalized(lex, "S (eps P)")?)?;
    let standard_left = reify(&normalized(lex, "some S P")?)?;
    let standard_right = reify(&normalized(lex, "some P S")?)?;
    let sig = Signature::unary_predicates(["S", "P"]);
    let unexpected = |e: &dyn fmt::Display| MontagueError::NotFirstOrder(e.to_string());
    let both_ways = |a: &Formula, b: &Formula| -> Result<bool, MontagueError> {
        let ab = entails(std::slice::from_ref(a), b, &sig, 2).map_err(|e| unexpected(&e))?;
        let ba = entails(std::slice::from_ref(b), a, &sig, 2).map_err(|e| unexpected(&e))?;
        Ok(ab.is_valid() && ba.is_valid())
    };
    let standard_equivalent = both_ways(&standard_left, &standard_right)?;
    let models = enumerate_models(&sig, 2).map_err(|e| unexpected(&e))?;
    for model in models {
        let l = model.holds(&left).map_err(|e| unexpected(&e))?;
        let r = model.holds(&right).map_err(|e| unexpected(&e))?;
        if l != r {
            return Ok(InadequacyReport::Asymmetry {
                left,
                right,
                model,
                left_value: l,
                right_value: r,
                standard_left,
                standard_right,
                standard_equivalent,
            });
        }
    }
    Err(MontagueError::NotFirstOrder("no distinguishing model up to size 2".into()))
}

fn non_constituents(syntax: &Tree, semantic: &Tree, rename: impl Fn(&str) -> String) -> Vec<String> {
    let available = syntax.constituents();
    let mut out = Vec::new();
    if let Tree::Node(kids) | Tree::Lambda(_, kids) = semantic {
        for k in kids {
            collect_missing(k, &available, &rename, &mut out);
        }
    }
    out
}

/// Inner nodes of `t` whose words do not form a syntactic constituent.
fn collect_missing(t: &Tree, available: &[Vec<String>], rename: &impl Fn(&str) -> String, out: &mut Vec<String>) {
    if let Tree::Leaf(_) = t {
        return;
    }
    let words: Vec<String> = t.yield_words().iter().map(|w| rename(w)).collect();
    if !available.contains(&words) {
        out.push(t.to_string());
    }
    if let Tree::Node(kids) | Tree::Lambda(_, kids) = t {
        for k in kids {
            collect_missing(k, available, rename, out);
        }
    }
}

fn constituency(lex: &Lexicon) -> Result<InadequacyReport, MontagueError> {
    let l = Tree::leaf;
    let np = |det: &str| Tree::Node(vec![l(det), Tree::Node(vec![l("hits")])]);
    let syntax = Tree::Node(vec![l("Keith"), Tree::Node(vec![l("composed"), np("some")])]);
    let gap = Tree::Lambda("x".into(), vec![l("Keith"), l("composed"), l("x")]);
    let semantic = Tree::Node(vec![np("some"), gap.clone()]);
    let epsilon = Tree::Node(vec![l("Keith"), Tree::Node(vec![l("composed"), np("eps")])]);

    let standard_formula = reify(&normalized(lex, r"some hits (\x:e. composed x keith)")?)?;
    let epsilon_formula = reify(&normalized(lex, "composed (eps hits) keith")?)?;
    let as_syntax = |w: &str| if w == "eps" { "some".to_string() } else { w.to_string() };
    let semantic_tree = match &semantic {
        Tree::Node(kids) => format!("{} {}", kids[0], kids[1]),
        other => other.to_string(),
    };
    Ok(InadequacyReport::Constituency {
        sentence: "Keith composed some hits.".into(),
        non_constituents: non_constituents(&syntax, &semantic, str::to_string),
        epsilon_non_constituents: non_constituents(&syntax, &epsilon, as_syntax),
        syntax_tree: syntax,
        semantic_tree,
        standard_formula,
        epsilon_tree: epsilon,
        epsilon_formula,
    })
}

fn noun_phrase(lex: &Lexicon) -> Result<InadequacyReport, MontagueError> {
    let epsilon_term = lex.parse_term("eps goat")?;
    let epsilon_type = epsilon_term.typecheck()?;
    let epsilon_reading = reify_term(&beta_normalize(&epsilon_term)?)?;
    let presupposition = Formula::unary("goat", epsilon_reading.clone());
    let standard_term = normalized(lex, "some goat")?;
    let standard_type = standard_term.typecheck()?;
    Ok(InadequacyReport::NounPhrase {
        phrase: "A goat!".into(),
        epsilon_term,
        epsilon_type,
        epsilon_reading,
        presupposition,
        standard_term,
        standard_type,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_formula;

    #[test]
    fn asymmetry_is_witnessed() {
        let InadequacyReport::Asymmetry { left, right, model, left_value, right_value, standard_equivalent, .. } =
            demonstrate_inadequacy(1).unwrap()
        else {
            panic!("wrong report")
        };
        assert_eq!(left, parse_formula("P(eps x. S(x))").unwrap());
        assert_eq!(right, parse_formula("S(eps x. P(x))").unwrap());
        assert!(model.size() <= 2);
        assert_ne!(left_value, right_value);
        assert_eq!(model.holds(&left).unwrap(), left_value);
        assert!(standard_equivalent);
    }

    #[test]
    fn constituency_mismatch() {
        let InadequacyReport::Constituency {
            syntax_tree,
            semantic_tree,
            non_constituents,
            epsilon_non_constituents,
            standard_formula,
            epsilon_formula,
            ..
        } = demonstrate_inadequacy(2).unwrap()
        else {
            panic!("wrong report")
        };
        assert_eq!(syntax_tree.to_string(), "(Keith (composed (some (hits))))");
        assert_eq!(semantic_tree, "(some (hits)) (λx. Keith composed x)");
        assert_eq!(non_constituents, vec!["(λx. Keith composed x)".to_string()]);
        assert!(epsilon_non_constituents.is_empty());
        assert_eq!(standard_formula.to_string(), "exists x. hit(x) & compose(keith, x)");
        assert_eq!(epsilon_formula.to_string(), "compose(keith, eps x. hit(x))");
    }

    #[test]
    fn goat_is_an_individual() {
        let InadequacyReport::NounPhrase { epsilon_type, epsilon_reading, standard_type, .. } =
            demonstrate_inadequacy(3).unwrap()
        else {
            panic!("wrong report")
        };
        assert_eq!(epsilon_type, SemType::E);
        assert_eq!(epsilon_reading.to_string(), "eps x. goat(x)");
        assert_eq!(standard_type, SemType::quantifier());
    }

    #[test]
    fn only_three_demonstrations() {
        assert!(demonstrate_inadequacy(4).is_err());
    }

    #[test]
    fn reports_serialize() {
        for which in 1..=3 {
            let json = serde_json::to_value(demonstrate_inadequacy(which).unwrap()).unwrap();
            assert!(json.get("problem").is_some());
        }
    }
}
