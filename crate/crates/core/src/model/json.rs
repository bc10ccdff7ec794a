//! JSON form of a choice model:
//!
//! ```json
//! {"domain": [1, 2],
//!  "predicates": {"P": {"arity": 1, "tuples": [[2]]}, "S": {"arity": 1, "tuples": [[1]]}},
//!  "constants": {},
//!  "choice": [[[1], 1], [[2], 2], [[1, 2], 1]],
//!  "default": 1}
//! ```
//!
//! `functions` is omitted when empty. The choice list covers every nonempty
//! subset exactly once; the empty set is covered by `default`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{ChoiceModel, Element, ModelError};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationDoc {
    pub arity: usize,
    pub tuples: Vec<Vec<Element>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctionDoc {
    pub arity: usize,
    pub table: Vec<(Vec<Element>, Element)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelDoc {
    pub domain: Vec<Element>,
    pub predicates: BTreeMap<String, RelationDoc>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, FunctionDoc>,
    #[serde(default)]
    pub constants: BTreeMap<String, Element>,
    pub choice: Vec<(Vec<Element>, Element)>,
    pub default: Element,
}

fn subsets_in_display_order(n: usize) -> Vec<Vec<Element>> {
    let mut subsets: Vec<Vec<Element>> = (1usize..1 << n)
        .map(|mask| (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i + 1).collect())
        .collect();
    subsets.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    subsets
}

impl From<&ChoiceModel> for ModelDoc {
    fn from(m: &ChoiceModel) -> Self {
        let predicates = m
            .predicates
            .iter()
            .map(|(name, rel)| {
                let doc = RelationDoc {
                    arity: rel.arity,
                    tuples: m.extension(name).unwrap_or_default(),
                };
                (name.clone(), doc)
            })
            .collect();
        let functions = m
            .functions
            .iter()
            .map(|(name, table)| {
                let rows = table
                    .values
                    .iter()
                    .enumerate()
                    .map(|(code, &v)| (m.decode(code, table.arity), v))
                    .collect();
                let doc = FunctionDoc {
                    arity: table.arity,
                    table: rows,
                };
                (name.clone(), doc)
            })
            .collect();
        let choice = subsets_in_display_order(m.size)
            .into_iter()
            .map(|s| {
                let chosen = m.choose(&s).expect("subset drawn from the domain");
                (s, chosen)
            })
            .collect();
        ModelDoc {
            domain: m.domain().collect(),
            predicates,
            functions,
            constants: m.constants.clone(),
            choice,
            default: m.default_element(),
        }
    }
}

impl TryFrom<ModelDoc> for ChoiceModel {
    type Error = ModelError;

    fn try_from(doc: ModelDoc) -> Result<Self, ModelError> {
        let n = doc.domain.len();
        if doc.domain.iter().copied().ne(1..=n) {
            return Err(ModelError::Malformed(format!(
                "domain must be [1, ..., n], got {:?}",
                doc.domain
            )));
        }
        let mut m = ChoiceModel::new(n)?;
        for (name, rel) in &doc.predicates {
            m.set_predicate(name, rel.arity, &rel.tuples)?;
        }
        for (name, fun) in &doc.functions {
            let mut rows = BTreeMap::new();
            for (args, v) in &fun.table {
                if args.len() != fun.arity {
                    return Err(ModelError::TupleArity {
                        symbol: name.clone(),
                        arity: fun.arity,
                        found: args.len(),
                    });
                }
                if rows.insert(args.clone(), *v).is_some() {
                    return Err(ModelError::Malformed(format!("{name}{args:?} given twice")));
                }
            }
            if rows.len() != n.pow(fun.arity as u32) {
                return Err(ModelError::Malformed(format!("function {name} is not total")));
            }
            m.set_function(name, fun.arity, |args| rows[args])?;
        }
        for (name, &v) in &doc.constants {
            m.set_constant(name, v)?;
        }
        let mut seen = vec![false; 1 << n];
        for (subset, element) in &doc.choice {
            let mask = m.mask(subset)?;
            if std::mem::replace(&mut seen[mask], true) {
                return Err(ModelError::Malformed(format!("choice on {subset:?} given twice")));
            }
            m.set_choice(subset, *element)?;
        }
        if seen.iter().skip(1).any(|s| !s) {
            return Err(ModelError::Malformed(
                "choice must be given on every nonempty subset".into(),
            ));
        }
        m.set_default(doc.default)?;
        Ok(m)
    }
}

impl ChoiceModel {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(ModelDoc::from(self)).expect("model documents serialize")
    }

    pub fn from_json(value: serde_json::Value) -> Result<Self, ModelError> {
        let doc: ModelDoc =
            serde_json::from_value(value).map_err(|e| ModelError::Malformed(e.to_string()))?;
        ChoiceModel::try_from(doc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::enumerate_models;
    use crate::syntax::Signature;
    use serde_json::json;

    #[test]
    fn documented_shape() {
        let m = ChoiceModel::new(2)
            .unwrap()
            .with_unary("S", &[1])
            .unwrap()
            .with_unary("P", &[2])
            .unwrap();
        assert_eq!(
            m.to_json(),
            json!({
                "domain": [1, 2],
                "predicates": {"P": {"arity": 1, "tuples": [[2]]}, "S": {"arity": 1, "tuples": [[1]]}},
                "constants": {},
                "choice": [[[1], 1], [[2], 2], [[1, 2], 1]],
                "default": 1
            })
        );
    }

    #[test]
    fn enumerated_models_survive_json() {
        let mut sig = Signature::unary_predicates(["S"]);
        sig.add_constant("c").unwrap();
        sig.add_function("f", 1).unwrap();
        for m in enumerate_models(&sig, 2).unwrap() {
            assert_eq!(ChoiceModel::from_json(m.to_json()).unwrap(), m);
        }
    }

    #[test]
    fn incomplete_or_bad_documents_are_rejected() {
        let missing = json!({"domain": [1, 2], "predicates": {}, "choice": [[[1], 1]], "default": 1});
        assert!(ChoiceModel::from_json(missing).is_err());
        let gap = json!({"domain": [1, 3], "predicates": {}, "choice": [], "default": 1});
        assert!(ChoiceModel::from_json(gap).is_err());
        let wrong = json!({"domain": [1], "predicates": {}, "choice": [[[1], 2]], "default": 1});
        assert!(ChoiceModel::from_json(wrong).is_err());
    }
}
