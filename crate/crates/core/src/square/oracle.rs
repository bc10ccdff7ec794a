use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;

use super::SquareError;
use crate::kernel::{library, Derivation};
use crate::model::{entails_capped, ChoiceModel, CompiledFormula, Countermodel, EntailmentVerdict, ModelSpace, DEFAULT_BUDGET};
use crate::syntax::{alpha_eq, free_vars, Formula, Signature};

/// Evidence behind an oracle answer.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// No countermodel up to this size.
    ValidUpTo { bound: usize },
    Countermodel(Countermodel),
    /// A library derivation, as a proof script.
    Derivation { name: String, script: String },
}

#[derive(Clone, Debug, Serialize)]
pub struct Judgement {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// An entailment relation `premises |- goal`.
pub trait Oracle {
    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<Judgement, SquareError>;

    /// Just the verdict; implementations may skip building witnesses.
    fn holds(&self, premises: &[Formula], goal: &Formula) -> Result<bool, SquareError> {
        Ok(self.entails(premises, goal)?.holds)
    }

    fn describe(&self) -> String;
}

/// Models kept in memory for cached evaluation; larger spaces are streamed.
const MAX_CACHED_MODELS: u128 = 200_000;

/// Bounded semantic consequence, optionally relative to a theory: the goal
/// must hold in every model of size at most `bound` satisfying the theory
/// and the premises.
///
/// For closed formulas truth values over the theory's models are computed
/// once and cached; open formulas go through [`entails_capped`].
pub struct SemanticOracle {
    sig: Signature,
    theory: Vec<Formula>,
    bound: usize,
    cap: u64,
    models: Option<Vec<ChoiceModel>>,
    cache: Mutex<HashMap<Formula, Arc<Vec<u64>>>>,
}

impl SemanticOracle {
    pub fn new(sig: &Signature, theory: Vec<Formula>, bound: usize) -> Result<Self, SquareError> {
        Self::with_budget(sig, theory, bound, DEFAULT_BUDGET)
    }

    /// The signature is extended by the symbols of the theory.
    pub fn with_budget(sig: &Signature, theory: Vec<Formula>, bound: usize, cap: u64) -> Result<Self, SquareError> {
        let mut sig = sig.clone();
        for f in &theory {
            sig.absorb_formula(f)?;
        }
        let space = ModelSpace::with_budget(&sig, bound, cap).map_err(SquareError::OracleBudgetExceeded)?;
        let closed_theory = theory.iter().all(|f| free_vars(f).is_empty());
        let models = if closed_theory && space.count() <= MAX_CACHED_MODELS {
            let compiled: Vec<CompiledFormula> = theory.iter().map(CompiledFormula::new).collect();
            let mut kept = Vec::new();
            for m in space.iter() {
                let mut ok = true;
                for f in &compiled {
                    if !f.holds(&m)? {
                        ok = false;
                        break;
                    }
                }
                if ok {
                    kept.push(m);
                }
            }
            Some(kept)
        } else {
            None
        };
        Ok(SemanticOracle {
            sig,
            theory,
            bound,
            cap,
            models,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn signature(&self) -> &Signature {
        &self.sig
    }

    pub fn theory(&self) -> &[Formula] {
        &self.theory
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    /// Number of models of the theory, when they are held in memory.
    pub fn model_count(&self) -> Option<usize> {
        self.models.as_ref().map(Vec::len)
    }

    fn truth(&self, models: &[ChoiceModel], f: &Formula) -> Result<Arc<Vec<u64>>, SquareError> {
        if let Some(v) = self.cache.lock().expect("cache lock").get(f) {
            return Ok(Arc::clone(v));
        }
        let compiled = CompiledFormula::new(f);
        let mut bits = vec![0u64; models.len().div_ceil(64)];
        for (i, m) in models.iter().enumerate() {
            if compiled.holds(m)? {
                bits[i / 64] |= 1 << (i % 64);
            }
        }
        let bits = Arc::new(bits);
        self.cache.lock().expect("cache lock").insert(f.clone(), Arc::clone(&bits));
        Ok(bits)
    }

    /// Index of the first cached model where the premises hold and the goal fails.
    fn first_counterexample(
        &self,
        models: &[ChoiceModel],
        premises: &[Formula],
        goal: &Formula,
    ) -> Result<Option<usize>, SquareError> {
        let words = models.len().div_ceil(64);
        let mut live: Vec<u64> = (0..words)
            .map(|w| {
                let rem = models.len() - w * 64;
                if rem >= 64 {
                    u64::MAX
                } else {
                    (1u64 << rem) - 1
                }
            })
            .collect();
        for p in premises {
            let t = self.truth(models, p)?;
            live.iter_mut().zip(t.iter()).for_each(|(l, b)| *l &= b);
        }
        let g = self.truth(models, goal)?;
        Ok(live
            .iter()
            .zip(g.iter())
            .enumerate()
            .find(|(_, (l, b))| *l & !*b != 0)
            .map(|(w, (l, b))| w * 64 + (l & !b).trailing_zeros() as usize))
    }

    fn cached_models(&self, premises: &[Formula], goal: &Formula) -> Option<&[ChoiceModel]> {
        let closed = premises.iter().chain([goal]).all(|f| free_vars(f).is_empty());
        self.models.as_deref().filter(|_| closed)
    }

    fn check_symbols(&self, premises: &[Formula], goal: &Formula) -> Result<(), SquareError> {
        for f in premises.iter().chain([goal]) {
            self.sig.check_formula(f)?;
        }
        Ok(())
    }
}

impl Oracle for SemanticOracle {
    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<Judgement, SquareError> {
        self.check_symbols(premises, goal)?;
        if let Some(models) = self.cached_models(premises, goal) {
            return Ok(match self.first_counterexample(models, premises, goal)? {
                None => Judgement {
                    holds: true,
                    witness: Some(Witness::ValidUpTo { bound: self.bound }),
                },
                Some(i) => Judgement {
                    holds: false,
                    witness: Some(Witness::Countermodel(Countermodel {
                        model: models[i].clone(),
                        assignment: Default::default(),
                    })),
                },
            });
        }
        let mut all = self.theory.clone();
        all.extend(premises.iter().cloned());
        Ok(match entails_capped(&all, goal, &self.sig, self.bound, self.cap)? {
            EntailmentVerdict::ValidUpTo(bound) => Judgement {
                holds: true,
                witness: Some(Witness::ValidUpTo { bound }),
            },
            EntailmentVerdict::Countermodel(c) => Judgement {
                holds: false,
                witness: Some(Witness::Countermodel(c)),
            },
        })
    }

    fn holds(&self, premises: &[Formula], goal: &Formula) -> Result<bool, SquareError> {
        self.check_symbols(premises, goal)?;
        match self.cached_models(premises, goal) {
            Some(models) => Ok(self.first_counterexample(models, premises, goal)?.is_none()),
            None => Ok(self.entails(premises, goal)?.holds),
        }
    }

    fn describe(&self) -> String {
        if self.theory.is_empty() {
            format!("semantic, models up to size {}", self.bound)
        } else {
            let theory: Vec<String> = self.theory.iter().map(ToString::to_string).collect();
            format!("semantic, models up to size {} of {{{}}}", self.bound, theory.join("; "))
        }
    }
}

/// Derivability by lookup in a library of checked derivations: the goal
/// holds when some derivation concludes it from hypotheses drawn from the
/// premises and the theory. A negative answer only means that the library
/// has no such derivation.
pub struct KernelOracle {
    library: Vec<(String, Derivation)>,
    theory: Vec<Formula>,
}

impl KernelOracle {
    /// Checks every derivation up front.
    pub fn new(library: Vec<(String, Derivation)>, theory: Vec<Formula>) -> Result<Self, SquareError> {
        for (_, d) in &library {
            d.check()?;
        }
        Ok(KernelOracle { library, theory })
    }

    /// The shipped square derivations for `s` and `p`.
    pub fn for_square(s: &str, p: &str, theory: Vec<Formula>) -> Result<Self, SquareError> {
        Self::new(library::square_library(s, p)?, theory)
    }
}

impl Oracle for KernelOracle {
    fn entails(&self, premises: &[Formula], goal: &Formula) -> Result<Judgement, SquareError> {
        let mut available: Vec<Formula> = premises.to_vec();
        available.extend(self.theory.iter().cloned());
        for (name, d) in &self.library {
            let end = &d.conclusion;
            let usable = end
                .hypotheses
                .iter()
                .all(|h| available.iter().any(|a| alpha_eq(a, h)));
            if usable && alpha_eq(&end.conclusion, goal) {
                return Ok(Judgement {
                    holds: true,
                    witness: Some(Witness::Derivation {
                        name: name.clone(),
                        script: d.to_script(),
                    }),
                });
            }
        }
        Ok(Judgement {
            holds: false,
            witness: None,
        })
    }

    fn describe(&self) -> String {
        format!("derivation library ({} derivations)", self.library.len())
    }
}
