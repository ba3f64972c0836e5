//! Representations (models) of a signature, the builtin ones, and the fold
//! out of the initial representation.

use std::fmt;

use thiserror::Error;

use crate::modalg::ProdElem;
use crate::report::Report;
use crate::sample::{sample_seed, Sampler};
use crate::sigspec::{OpId, Signature1, Signature2};
use crate::term::{self, canonical_context, print_term, Ctx, Renaming, SubstMap, Term};

/// Answer of a model's order oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Order {
    Yes,
    No,
    Unknown,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Order::Yes => "yes",
            Order::No => "no",
            Order::Unknown => "unknown",
        })
    }
}

/// A representation of a 1-signature: a context-indexed carrier with unit,
/// substitution, renaming, one operation per arity and a preorder.
///
/// The monad and module laws are not assumed; [`crate::modalg`] checks them.
pub trait Model {
    type Carrier: Clone + fmt::Debug;

    fn signature(&self) -> &Signature1;

    /// The variable `var` of context `ctx`.
    fn eta(&self, ctx: Ctx, var: usize) -> Self::Carrier;

    /// Substitutes `f` into `x`, which lives over `f.source()`.
    fn kleisli(&self, f: &SubstMap<Self::Carrier>, x: &Self::Carrier) -> Self::Carrier;

    fn rename(&self, f: &Renaming, x: &Self::Carrier) -> Self::Carrier;

    /// The operation for `op`, applied to a tuple over `op`'s arity.
    fn op(&self, op: OpId, args: &ProdElem<Self::Carrier>) -> Self::Carrier;

    fn leq(&self, ctx: Ctx, a: &Self::Carrier, b: &Self::Carrier) -> Order;

    fn eq(&self, ctx: Ctx, a: &Self::Carrier, b: &Self::Carrier) -> bool;

    fn render(&self, ctx: Ctx, x: &Self::Carrier) -> String;
}

/// How a builtin term model orders its carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ModelKind<'a> {
    /// Reduction order of a 2-signature, searched with the given fuel.
    Syntactic { sig2: &'a Signature2, fuel: usize },
    /// Diagonal order.
    Discrete,
    /// Every pair related.
    Chaotic,
    /// Chaotic order; each listed operator permutes its arguments.
    Permuted(Vec<Option<Vec<usize>>>),
}

/// Term-carried models: the syntax itself under different orders, or with
/// permuted operations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BuiltinModel<'a> {
    sig: &'a Signature1,
    kind: ModelKind<'a>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelSelectorError {
    #[error("unknown model `{0}` (expected syntactic, discrete, chaotic or permuted:<op>=<perm>,...)")]
    Unknown(String),
    #[error("unknown operator `{0}` in permutation table")]
    UnknownOp(String),
    #[error("bad permutation for `{op}`: {reason}")]
    BadPermutation { op: String, reason: String },
}

impl<'a> BuiltinModel<'a> {
    pub fn syntactic(sig2: &'a Signature2, fuel: usize) -> Self {
        BuiltinModel {
            sig: &sig2.sig,
            kind: ModelKind::Syntactic { sig2, fuel },
        }
    }

    pub fn discrete(sig: &'a Signature1) -> Self {
        BuiltinModel {
            sig,
            kind: ModelKind::Discrete,
        }
    }

    pub fn chaotic(sig: &'a Signature1) -> Self {
        BuiltinModel {
            sig,
            kind: ModelKind::Chaotic,
        }
    }

    /// `perms` lists `(op, p)`; `op` then sends its tuple `e` to `Con(op, [e[p[0]], e[p[1]], ...])`.
    /// A permutation may only exchange arguments of equal binding depth.
    pub fn permuted(sig: &'a Signature1, perms: &[(&str, Vec<usize>)]) -> Result<Self, ModelSelectorError> {
        let mut table = vec![None; sig.len()];
        for (name, p) in perms {
            let op = sig
                .lookup(name)
                .ok_or_else(|| ModelSelectorError::UnknownOp(name.to_string()))?;
            let arity = sig.arity(op);
            let bad = |reason: String| ModelSelectorError::BadPermutation {
                op: name.to_string(),
                reason,
            };
            if p.len() != arity.len() {
                return Err(bad(format!("expected {} entries, got {}", arity.len(), p.len())));
            }
            let mut seen = vec![false; p.len()];
            for (k, &j) in p.iter().enumerate() {
                if j >= p.len() || std::mem::replace(&mut seen[j], true) {
                    return Err(bad("not a permutation".into()));
                }
                if arity[j] != arity[k] {
                    return Err(bad(format!(
                        "argument {j} binds {} but slot {k} binds {}",
                        arity[j], arity[k]
                    )));
                }
            }
            table[op.0] = Some(p.clone());
        }
        Ok(BuiltinModel {
            sig,
            kind: ModelKind::Permuted(table),
        })
    }

    /// Parses `syntactic`, `discrete`, `chaotic` or `permuted:app=1,0,...`.
    pub fn from_selector(sig2: &'a Signature2, selector: &str, fuel: usize) -> Result<Self, ModelSelectorError> {
        match selector {
            "syntactic" => Ok(Self::syntactic(sig2, fuel)),
            "discrete" => Ok(Self::discrete(&sig2.sig)),
            "chaotic" => Ok(Self::chaotic(&sig2.sig)),
            _ => {
                let Some(spec) = selector.strip_prefix("permuted:") else {
                    return Err(ModelSelectorError::Unknown(selector.to_string()));
                };
                let mut perms: Vec<(&str, Vec<usize>)> = Vec::new();
                for tok in spec.split(',').map(str::trim) {
                    let (name, first) = match tok.split_once('=') {
                        Some((name, first)) => (Some(name.trim()), first.trim()),
                        None => (None, tok),
                    };
                    let bad = |op: &str| ModelSelectorError::BadPermutation {
                        op: op.to_string(),
                        reason: format!("`{first}` is not an index"),
                    };
                    match name {
                        Some(name) => {
                            let j = first.parse().map_err(|_| bad(name))?;
                            perms.push((name, vec![j]));
                        }
                        None => {
                            let Some((name, p)) = perms.last_mut() else {
                                return Err(ModelSelectorError::Unknown(selector.to_string()));
                            };
                            p.push(first.parse().map_err(|_| bad(name))?);
                        }
                    }
                }
                Self::permuted(&sig2.sig, &perms)
            }
        }
    }

    pub fn kind(&self) -> &ModelKind<'a> {
        &self.kind
    }
}

impl Model for BuiltinModel<'_> {
    type Carrier = Term;

    fn signature(&self) -> &Signature1 {
        self.sig
    }

    fn eta(&self, _ctx: Ctx, var: usize) -> Term {
        Term::Var(var)
    }

    fn kleisli(&self, f: &SubstMap, x: &Term) -> Term {
        term::subst(self.sig, f, x)
    }

    fn rename(&self, f: &Renaming, x: &Term) -> Term {
        term::rename(self.sig, f, x)
    }

    fn op(&self, op: OpId, args: &ProdElem<Term>) -> Term {
        match &self.kind {
            ModelKind::Permuted(table) => match &table[op.0] {
                Some(p) => Term::Con(op, p.iter().map(|&j| args.values[j].clone()).collect()),
                None => Term::Con(op, args.values.clone()),
            },
            _ => Term::Con(op, args.values.clone()),
        }
    }

    fn leq(&self, ctx: Ctx, a: &Term, b: &Term) -> Order {
        match &self.kind {
            ModelKind::Syntactic { sig2, fuel } => crate::reduction::leq(sig2, ctx, a, b, *fuel).answer,
            ModelKind::Discrete => {
                if a == b {
                    Order::Yes
                } else {
                    Order::No
                }
            }
            ModelKind::Chaotic | ModelKind::Permuted(_) => Order::Yes,
        }
    }

    fn eq(&self, _ctx: Ctx, a: &Term, b: &Term) -> bool {
        a == b
    }

    fn render(&self, ctx: Ctx, x: &Term) -> String {
        print_term(self.sig, &canonical_context(ctx), x)
    }
}

/// The initial morphism at context `n`: variables to the model's unit,
/// constructors to the model's operations on the folded arguments.
///
/// Runs on an explicit stack, so term depth is not bounded by the call stack.
pub fn init_fold<M: Model>(model: &M, n: Ctx, t: &Term) -> M::Carrier {
    enum Task<'t> {
        Visit(&'t Term, Ctx),
        Build(OpId, Ctx),
    }
    let sig = model.signature();
    let mut tasks = vec![Task::Visit(t, n)];
    let mut done: Vec<M::Carrier> = Vec::new();
    while let Some(task) = tasks.pop() {
        match task {
            Task::Visit(Term::Var(i), ctx) => done.push(model.eta(ctx, *i)),
            Task::Visit(Term::Con(op, args), ctx) => {
                tasks.push(Task::Build(*op, ctx));
                let arity = sig.arity(*op);
                for (a, k) in args.iter().zip(arity).rev() {
                    tasks.push(Task::Visit(a, ctx + k));
                }
            }
            Task::Build(op, ctx) => {
                let arity = sig.arity(op);
                let values = done.split_off(done.len() - arity.len());
                let e = ProdElem {
                    desc: arity.into(),
                    ctx,
                    values,
                };
                done.push(model.op(op, &e));
            }
        }
    }
    done.pop().expect("fold produces one value")
}

/// Folds every component of a term tuple.
pub fn prod_map<M: Model>(model: &M, e: &ProdElem<Term>) -> ProdElem<M::Carrier> {
    ProdElem {
        desc: e.desc.clone(),
        ctx: e.ctx,
        values: e
            .desc
            .slots()
            .iter()
            .zip(&e.values)
            .map(|(k, v)| init_fold(model, e.ctx + k, v))
            .collect(),
    }
}

/// Checks that the fold commutes with substitution and renaming.
pub fn check_init_monad_morphism<M: Model>(model: &M, samples: usize, seed: u64) -> Vec<Report> {
    let sig = model.signature();
    let canon = |n| canonical_context(n);
    let mut kl = Report::new("init.kleisli");
    let mut lift = Report::new("init.lift");
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(sig, s);
        let m = g.ctx(3);
        let n = g.ctx(3);
        let (Some(v), Some(f), Some(r)) = (g.term(m), g.subst_map(m, n), g.renaming(m, n.max(1))) else {
            continue;
        };
        let lhs = init_fold(model, n, &term::subst(sig, &f, &v));
        let fm = f.map(|x| init_fold(model, n, x));
        let rhs = model.kleisli(&fm, &init_fold(model, m, &v));
        kl.record(s, model.eq(n, &lhs, &rhs), || {
            let imgs: Vec<_> = f.images().iter().map(|x| print_term(sig, &canon(n), x)).collect();
            (
                format!(
                    "v = {} over {m}; f = [{}] into {n}",
                    print_term(sig, &canon(m), &v),
                    imgs.join(", ")
                ),
                model.render(n, &lhs),
                model.render(n, &rhs),
            )
        });

        let rt = r.target();
        let lhs = init_fold(model, rt, &term::rename(sig, &r, &v));
        let rhs = model.rename(&r, &init_fold(model, m, &v));
        lift.record(s, model.eq(rt, &lhs, &rhs), || {
            (
                format!(
                    "v = {} over {m}; r = {:?} into {rt}",
                    print_term(sig, &canon(m), &v),
                    r.map()
                ),
                model.render(rt, &lhs),
                model.render(rt, &rhs),
            )
        });
    }
    vec![kl, lift]
}

/// For sampled one-step reductions `x -> y`, checks `init x <= init y` in a
/// model that satisfies every inequation. Not applicable otherwise.
pub fn check_init_monotone<M: Model>(model: &M, sig2: &Signature2, samples: usize, seed: u64) -> Report {
    const LAW: &str = "init.monotone";
    for q in sig2.ineqs() {
        let v = crate::halfeq::satisfies(model, q, samples.max(1), seed);
        if !v.holds() {
            return Report::not_applicable(LAW, format!("model does not satisfy `{}`", q.name));
        }
    }
    let sig = model.signature();
    let mut report = Report::new(LAW);
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(sig, s);
        let Some((n, x, y)) = crate::reduction::sample_step(sig2, &mut g) else {
            continue;
        };
        let (ix, iy) = (init_fold(model, n, &x), init_fold(model, n, &y));
        let answer = model.leq(n, &ix, &iy);
        let describe = || {
            (
                format!(
                    "{} -> {} over {n}",
                    print_term(sig, &canonical_context(n), &x),
                    print_term(sig, &canonical_context(n), &y)
                ),
                model.render(n, &ix),
                model.render(n, &iy),
            )
        };
        match answer {
            Order::Unknown => {
                report.samples += 1;
                let (input, lhs, rhs) = describe();
                report.inconclusive.push(crate::report::Failure {
                    seed: s,
                    input,
                    lhs,
                    rhs,
                });
            }
            _ => report.record(s, answer == Order::Yes, describe),
        }
    }
    report
}
