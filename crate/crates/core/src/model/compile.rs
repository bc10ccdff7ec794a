//! Formulas lowered for repeated evaluation: symbols resolved to indices
//! once per model, variables to stack slots once per formula.

use std::cell::Cell;
use std::collections::BTreeSet;

use super::{Assignment, ChoiceModel, Element, EvalError, Relation, Table};
use crate::syntax::{free_vars, Formula, SymbolKind, Term};

#[derive(Clone, Debug)]
enum Expr {
    Const(bool),
    Pred(usize, Vec<Val>),
    Eq(Val, Val),
    Not(Box<Expr>),
    And(Box<Expr>, Box<Expr>),
    Or(Box<Expr>, Box<Expr>),
    Implies(Box<Expr>, Box<Expr>),
    Exists(Box<Expr>),
    Forall(Box<Expr>),
}

#[derive(Clone, Debug)]
enum Val {
    /// Stack position, counted from the bottom.
    Slot(usize),
    Const(usize),
    App(usize, Vec<Val>),
    Eps(Box<Expr>),
    Tau(Box<Expr>),
    /// A binder term that mentions no enclosing bound variable, so its value
    /// is fixed for the whole evaluation: computed once, cached by index.
    Fixed(usize, Box<Val>),
}

/// Symbol table built while lowering: name and number of arguments at use.
#[derive(Clone, Debug, Default)]
struct Symbols {
    predicates: Vec<(String, usize)>,
    functions: Vec<(String, usize)>,
    constants: Vec<String>,
}

fn intern(table: &mut Vec<(String, usize)>, name: &str, arity: usize) -> usize {
    match table.iter().position(|(n, a)| n == name && *a == arity) {
        Some(i) => i,
        None => {
            table.push((name.to_string(), arity));
            table.len() - 1
        }
    }
}

/// A formula prepared for evaluation in many models.
///
/// Agrees with [`ChoiceModel::eval_formula`] on every model and assignment;
/// symbol errors are reported before evaluation starts.
#[derive(Clone, Debug)]
pub struct CompiledFormula {
    root: Expr,
    symbols: Symbols,
    free: Vec<String>,
    fixed: usize,
}

impl CompiledFormula {
    pub fn new(f: &Formula) -> CompiledFormula {
        let free: Vec<String> = free_vars(f).into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut lo = Lowering {
            symbols: Symbols::default(),
            scope: free.clone(),
            base: free.len(),
            fixed: 0,
        };
        let (root, _) = lo.formula(f);
        CompiledFormula {
            root,
            symbols: lo.symbols,
            free,
            fixed: lo.fixed,
        }
    }

    /// Free variables, in the order their values are read from an assignment.
    pub fn free_vars(&self) -> &[String] {
        &self.free
    }

    pub fn eval(&self, m: &ChoiceModel, env: &Assignment) -> Result<bool, EvalError> {
        let mut stack = Vec::with_capacity(self.free.len() + 4);
        for x in &self.free {
            let v = env.get(x).copied().ok_or_else(|| EvalError::UnboundVariable(x.clone()))?;
            stack.push(v);
        }
        self.eval_slots(m, stack)
    }

    /// Like [`eval`](Self::eval) with one value per free variable, in the
    /// order of [`free_vars`](Self::free_vars).
    pub fn eval_values(&self, m: &ChoiceModel, values: &[Element]) -> Result<bool, EvalError> {
        if let Some(x) = self.free.get(values.len()) {
            return Err(EvalError::UnboundVariable(x.clone()));
        }
        self.eval_slots(m, values[..self.free.len()].to_vec())
    }

    /// Closed formulas only; see [`ChoiceModel::holds`].
    pub fn holds(&self, m: &ChoiceModel) -> Result<bool, EvalError> {
        if let Some(x) = self.free.first() {
            return Err(EvalError::UnboundVariable(x.clone()));
        }
        self.eval_slots(m, Vec::with_capacity(4))
    }

    fn eval_slots(&self, m: &ChoiceModel, mut stack: Vec<Element>) -> Result<bool, EvalError> {
        if let Some((i, &value)) = stack.iter().enumerate().find(|(_, &v)| !(1..=m.size).contains(&v)) {
            return Err(EvalError::OutOfDomain {
                var: self.free[i].clone(),
                value,
                size: m.size,
            });
        }
        let ctx = Ctx::resolve(m, &self.symbols, self.fixed)?;
        Ok(ctx.formula(&mut stack, &self.root))
    }
}

/// Lowest bound-variable slot a subtree reads; `usize::MAX` when none.
type Reads = usize;

struct Lowering {
    symbols: Symbols,
    scope: Vec<String>,
    /// Slots below this hold free variables, constant during one evaluation.
    base: usize,
    fixed: usize,
}

impl Lowering {
    fn formula(&mut self, f: &Formula) -> (Expr, Reads) {
        match f {
            Formula::True => (Expr::Const(true), Reads::MAX),
            Formula::False => (Expr::Const(false), Reads::MAX),
            Formula::Pred(p, args) => {
                let (vals, reads) = self.terms(args);
                (Expr::Pred(intern(&mut self.symbols.predicates, p, args.len()), vals), reads)
            }
            Formula::Eq(l, r) => {
                let ((l, a), (r, b)) = (self.term(l), self.term(r));
                (Expr::Eq(l, r), a.min(b))
            }
            Formula::Not(g) => {
                let (g, r) = self.formula(g);
                (Expr::Not(Box::new(g)), r)
            }
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                let ((a, ra), (b, rb)) = (self.formula(a), self.formula(b));
                let (a, b) = (Box::new(a), Box::new(b));
                let e = match f {
                    Formula::And(..) => Expr::And(a, b),
                    Formula::Or(..) => Expr::Or(a, b),
                    _ => Expr::Implies(a, b),
                };
                (e, ra.min(rb))
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let (body, r) = self.binder(x, body);
                let e = if matches!(f, Formula::Exists(..)) { Expr::Exists(body) } else { Expr::Forall(body) };
                (e, r)
            }
        }
    }

    /// Lowers `body` under a new slot for `x`; reads of that slot are dropped.
    fn binder(&mut self, x: &str, body: &Formula) -> (Box<Expr>, Reads) {
        let slot = self.scope.len();
        self.scope.push(x.to_string());
        let (e, r) = self.formula(body);
        self.scope.pop();
        (Box::new(e), if r >= slot { Reads::MAX } else { r })
    }

    fn terms(&mut self, ts: &[Term]) -> (Vec<Val>, Reads) {
        let mut reads = Reads::MAX;
        let vals = ts
            .iter()
            .map(|t| {
                let (v, r) = self.term(t);
                reads = reads.min(r);
                v
            })
            .collect();
        (vals, reads)
    }

    fn term(&mut self, t: &Term) -> (Val, Reads) {
        match t {
            Term::Var(x) => {
                let slot = self.scope.iter().rposition(|v| v == x).expect("free variables are in scope");
                (Val::Slot(slot), if slot < self.base { Reads::MAX } else { slot })
            }
            Term::Const(c) => {
                let consts = &mut self.symbols.constants;
                let i = consts.iter().position(|n| n == c).unwrap_or_else(|| {
                    consts.push(c.clone());
                    consts.len() - 1
                });
                (Val::Const(i), Reads::MAX)
            }
            Term::App(g, args) => {
                let (vals, reads) = self.terms(args);
                (Val::App(intern(&mut self.symbols.functions, g, args.len()), vals), reads)
            }
            Term::Eps(x, body) | Term::Tau(x, body) => {
                let (body, r) = self.binder(x, body);
                let v = if matches!(t, Term::Eps(..)) { Val::Eps(body) } else { Val::Tau(body) };
                if r == Reads::MAX {
                    self.fixed += 1;
                    (Val::Fixed(self.fixed - 1, Box::new(v)), r)
                } else {
                    (v, r)
                }
            }
        }
    }
}

struct Ctx<'m> {
    size: usize,
    /// Values of `Val::Fixed` terms, 0 until computed.
    fixed: Vec<Cell<Element>>,
    choice: &'m [Element],
    predicates: Vec<&'m Relation>,
    functions: Vec<&'m Table>,
    constants: Vec<Element>,
}

impl<'m> Ctx<'m> {
    fn resolve(m: &'m ChoiceModel, sy: &Symbols, fixed: usize) -> Result<Ctx<'m>, EvalError> {
        let mismatch = |symbol: &str, arity: usize, found: usize| EvalError::ArityMismatch {
            symbol: symbol.to_string(),
            arity,
            found,
        };
        let mut predicates = Vec::with_capacity(sy.predicates.len());
        for (name, n) in &sy.predicates {
            let rel = m.predicates.get(name).ok_or_else(|| EvalError::Uninterpreted {
                kind: SymbolKind::Predicate,
                symbol: name.clone(),
            })?;
            if rel.arity != *n {
                return Err(mismatch(name, rel.arity, *n));
            }
            predicates.push(rel);
        }
        let mut functions = Vec::with_capacity(sy.functions.len());
        for (name, n) in &sy.functions {
            let table = m.functions.get(name).ok_or_else(|| EvalError::Uninterpreted {
                kind: SymbolKind::Function,
                symbol: name.clone(),
            })?;
            if table.arity != *n {
                return Err(mismatch(name, table.arity, *n));
            }
            functions.push(table);
        }
        let constants = sy
            .constants
            .iter()
            .map(|c| {
                m.constants.get(c).copied().ok_or_else(|| EvalError::Uninterpreted {
                    kind: SymbolKind::Constant,
                    symbol: c.clone(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(Ctx {
            size: m.size,
            fixed: vec![Cell::new(0); fixed],
            choice: &m.choice,
            predicates,
            functions,
            constants,
        })
    }

    fn code(&self, stack: &mut Vec<Element>, args: &[Val]) -> usize {
        args.iter().rev().fold(0, |code, a| code * self.size + (self.term(stack, a) - 1))
    }

    fn term(&self, stack: &mut Vec<Element>, v: &Val) -> Element {
        match v {
            Val::Slot(i) => stack[*i],
            Val::Const(i) => self.constants[*i],
            Val::App(g, args) => self.functions[*g].values[self.code(stack, args)],
            Val::Eps(body) => self.choice[self.mask(stack, body, true)],
            Val::Tau(body) => self.choice[self.mask(stack, body, false)],
            Val::Fixed(i, v) => match self.fixed[*i].get() {
                0 => {
                    let value = self.term(stack, v);
                    self.fixed[*i].set(value);
                    value
                }
                value => value,
            },
        }
    }

    fn mask(&self, stack: &mut Vec<Element>, body: &Expr, polarity: bool) -> usize {
        let mut mask = 0;
        for d in 1..=self.size {
            stack.push(d);
            if self.formula(stack, body) == polarity {
                mask |= 1 << (d - 1);
            }
            stack.pop();
        }
        mask
    }

    fn formula(&self, stack: &mut Vec<Element>, e: &Expr) -> bool {
        match e {
            Expr::Const(b) => *b,
            Expr::Pred(p, args) => self.predicates[*p].holds[self.code(stack, args)],
            Expr::Eq(l, r) => self.term(stack, l) == self.term(stack, r),
            Expr::Not(g) => !self.formula(stack, g),
            Expr::And(a, b) => self.formula(stack, a) && self.formula(stack, b),
            Expr::Or(a, b) => self.formula(stack, a) || self.formula(stack, b),
            Expr::Implies(a, b) => !self.formula(stack, a) || self.formula(stack, b),
            Expr::Exists(body) => self.mask(stack, body, true) != 0,
            Expr::Forall(body) => self.mask(stack, body, false) == 0,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::enumerate_models;
    use crate::syntax::{parse_formula, Signature};

    #[test]
    fn agrees_with_the_interpreter() {
        let sig = Signature::unary_predicates(["S", "P"]);
        let sources = [
            "P(eps x. S(x) & ~P(x)) | exists y. S(y) & P(tau z. S(z))",
            "forall x. S(x) -> P(eps y. S(y) -> x = y)",
            "P(x) -> S(tau y. P(y) | S(x))",
        ];
        for src in sources {
            let f = parse_formula(src).unwrap();
            let c = CompiledFormula::new(&f);
            for m in enumerate_models(&sig, 2).unwrap() {
                for d in m.domain() {
                    let env = Assignment::from([("x".to_string(), d)]);
                    assert_eq!(c.eval(&m, &env), m.eval_formula(&env, &f), "{src}");
                }
            }
        }
    }

    #[test]
    fn symbol_errors_come_first() {
        let m = ChoiceModel::new(1).unwrap().with_unary("P", &[1]).unwrap();
        let c = CompiledFormula::new(&parse_formula("P(c)").unwrap());
        assert!(matches!(c.holds(&m), Err(EvalError::Uninterpreted { .. })));
        let c = CompiledFormula::new(&parse_formula("P(x)").unwrap());
        assert_eq!(c.holds(&m), Err(EvalError::UnboundVariable("x".into())));
        let c = CompiledFormula::new(&parse_formula("P(eps x. P(x), c)").unwrap());
        assert!(matches!(c.holds(&m), Err(EvalError::ArityMismatch { .. })));
        let c = CompiledFormula::new(&parse_formula("P(x)").unwrap());
        assert_eq!(c.eval_values(&m, &[1]), Ok(true));
        assert!(matches!(c.eval_values(&m, &[2]), Err(EvalError::OutOfDomain { value: 2, .. })));
        let env = Assignment::from([("x".to_string(), 2)]);
        assert_eq!(c.eval(&m, &env), m.eval_formula(&env, &parse_formula("P(x)").unwrap()));
    }
}
