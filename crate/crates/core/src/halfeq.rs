//! Evaluation of half-equations in a model, satisfaction of inequations,
//! and naturality along the initial morphism.

use crate::modalg::ProdElem;
use crate::models::{prod_map, BuiltinModel, Model, Order};
use crate::report::{Failure, Report, Verdict};
use crate::sample::{sample_seed, Sampler};
use crate::sigspec::{HExp, Inequation, ModDescriptor, ShapeError};
use crate::term::{Renaming, SubstMap};

fn mismatch(expected: impl Into<String>, found: impl Into<String>) -> ShapeError {
    ShapeError {
        path: Vec::new(),
        expected: expected.into(),
        found: found.into(),
    }
}

/// `e` at `model`, applied to `input`. Substitution, weakening and the fresh
/// variable are derived from the model's unit, kleisli and renaming.
pub fn eval_hexp<M: Model>(
    model: &M,
    e: &HExp,
    input: &ProdElem<M::Carrier>,
) -> Result<ProdElem<M::Carrier>, ShapeError> {
    let n = input.ctx;
    let desc = &input.desc;
    let one = |k: usize, v: M::Carrier| ProdElem::new(ModDescriptor(vec![k]), n, vec![v]);
    match e {
        HExp::Id(d) => {
            if let Some(d) = d {
                if d != desc {
                    return Err(mismatch(format!("domain {d}"), format!("domain {desc}")));
                }
            }
            Ok(input.clone())
        }
        HExp::Bang(d) => {
            if let Some(d) = d {
                if d != desc {
                    return Err(mismatch(format!("domain {d}"), format!("domain {desc}")));
                }
            }
            Ok(ProdElem::empty(n))
        }
        HExp::Comp(a, b) => eval_hexp(model, b, &eval_hexp(model, a, input)?),
        HExp::Pair(es) => {
            let mut slots = Vec::new();
            let mut values = Vec::new();
            for c in es {
                let out = eval_hexp(model, c, input)?;
                slots.extend(out.desc.0);
                values.extend(out.values);
            }
            Ok(ProdElem::new(ModDescriptor(slots), n, values))
        }
        HExp::Proj(j) => match (desc.slots().get(*j), input.values.get(*j)) {
            (Some(&k), Some(v)) => Ok(one(k, v.clone())),
            _ => Err(mismatch(
                format!("a slot index below {}", desc.len()),
                format!("proj {j}"),
            )),
        },
        HExp::Ctor(op) => {
            let sig = model.signature();
            if !sig.contains(*op) || sig.arity(*op) != desc.slots() {
                return Err(mismatch("the operator's arity", format!("domain {desc}")));
            }
            Ok(one(0, model.op(*op, input)))
        }
        HExp::Subst1 => {
            if desc.slots() != [1, 0] {
                return Err(mismatch("domain [1,0]", format!("domain {desc}")));
            }
            let mut images: Vec<M::Carrier> = (0..n).map(|v| model.eta(n, v)).collect();
            images.push(input.values[1].clone());
            Ok(one(0, model.kleisli(&SubstMap::new(n, images), &input.values[0])))
        }
        HExp::Weaken => {
            let Some(k) = desc.single() else {
                return Err(mismatch("a single-slot domain", format!("domain {desc}")));
            };
            let inc = Renaming::inclusion(n + k, 1);
            Ok(one(k + 1, model.rename(&inc, &input.values[0])))
        }
        HExp::Fresh => {
            if !desc.is_empty() {
                return Err(mismatch("domain []", format!("domain {desc}")));
            }
            Ok(one(1, model.eta(n + 1, n)))
        }
        HExp::Deriv(a) => {
            let Some(inner) = desc.underived() else {
                return Err(mismatch("a domain with every slot >= 1", format!("domain {desc}")));
            };
            let shifted = ProdElem::new(inner, n + 1, input.values.clone());
            let out = eval_hexp(model, a, &shifted)?;
            Ok(ProdElem::new(out.desc.derived(), n, out.values))
        }
    }
}

/// Samples tuples at the inequation's domain (as folds of random terms) and
/// compares both sides with the model's order. The first `No` is a
/// violation; otherwise any `Unknown` makes the verdict inconclusive.
pub fn satisfies<M: Model>(model: &M, ineq: &Inequation, samples: usize, seed: u64) -> Verdict {
    let sig = model.signature();
    let mut undecided: Option<Failure> = None;
    let mut taken = 0;
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(sig, s);
        let n = g.ctx(2);
        let Some(tuple) = g.tuple(&ineq.dom, n) else { continue };
        let terms = ProdElem::new(ineq.dom.clone(), n, tuple);
        let x = prod_map(model, &terms);
        let lhs = eval_hexp(model, &ineq.lhs, &x).expect("inequations are shape-checked at load");
        let rhs = eval_hexp(model, &ineq.rhs, &x).expect("inequations are shape-checked at load");
        let ctx = n + ineq.cod();
        taken += 1;
        let witness = || Failure {
            seed: s,
            input: terms.render(sig),
            lhs: model.render(ctx, &lhs.values[0]),
            rhs: model.render(ctx, &rhs.values[0]),
        };
        match model.leq(ctx, &lhs.values[0], &rhs.values[0]) {
            Order::Yes => {}
            Order::No => {
                return Verdict::Violated {
                    samples: taken,
                    witness: witness(),
                }
            }
            Order::Unknown => {
                if undecided.is_none() {
                    undecided = Some(witness());
                }
            }
        }
    }
    match undecided {
        Some(witness) => Verdict::Inconclusive {
            samples: taken,
            witness,
        },
        None => Verdict::Holds { samples: taken },
    }
}

/// For sampled term tuples `x` at `dom`: `init(e_syntax(x)) = e_model(init(x))`.
pub fn naturality_check<M: Model>(e: &HExp, dom: &ModDescriptor, model: &M, samples: usize, seed: u64) -> Report {
    let sig = model.signature();
    let syntax = BuiltinModel::discrete(sig);
    let mut report = Report::new(format!("naturality[{}]", e.display(sig)));
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(sig, s);
        let n = g.ctx(2);
        let Some(tuple) = g.tuple(dom, n) else { continue };
        let x = ProdElem::new(dom.clone(), n, tuple);
        let (lhs, rhs) = match (eval_hexp(&syntax, e, &x), eval_hexp(model, e, &prod_map(model, &x))) {
            (Ok(a), Ok(b)) => (prod_map(model, &a), b),
            (Err(err), _) | (_, Err(err)) => {
                report.record(s, false, || (x.render(sig), err.to_string(), String::new()));
                continue;
            }
        };
        let ok = lhs.desc == rhs.desc
            && (0..lhs.values.len()).all(|k| model.eq(lhs.slot_ctx(k), &lhs.values[k], &rhs.values[k]));
        report.record(s, ok, || {
            let render = |p: &ProdElem<M::Carrier>| {
                let parts: Vec<String> = (0..p.values.len())
                    .map(|k| model.render(p.slot_ctx(k), &p.values[k]))
                    .collect();
                format!("({})", parts.join(", "))
            };
            (x.render(sig), render(&lhs), render(&rhs))
        });
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sigspec::lambda_beta;
    use crate::term::Term::{self, Var};

    fn d(v: &[usize]) -> ModDescriptor {
        ModDescriptor(v.to_vec())
    }

    #[test]
    fn identity_is_identity() {
        let s2 = lambda_beta();
        let m = BuiltinModel::discrete(&s2.sig);
        let x = ProdElem::new(d(&[1, 0]), 1, vec![Var(1), Var(0)]);
        assert_eq!(eval_hexp(&m, &HExp::Id(None), &x).unwrap(), x);
    }

    #[test]
    fn beta_sides_on_witness() {
        let s2 = lambda_beta();
        let (_, beta) = s2.ineq("beta").unwrap();
        let m = BuiltinModel::discrete(&s2.sig);
        let app = s2.sig.lookup("app").unwrap();
        let abs = s2.sig.lookup("abs").unwrap();
        let x = ProdElem::new(d(&[1, 0]), 1, vec![Var(1), Var(0)]);
        let lhs = eval_hexp(&m, &beta.lhs, &x).unwrap();
        assert_eq!(lhs.values, vec![Term::con(app, [Term::con(abs, [Var(1)]), Var(0)])]);
        assert_eq!(lhs.desc, d(&[0]));
        let rhs = eval_hexp(&m, &beta.rhs, &x).unwrap();
        assert_eq!(rhs.values, vec![Var(0)]);
    }

    #[test]
    fn weaken_fresh_deriv() {
        let s2 = lambda_beta();
        let m = BuiltinModel::discrete(&s2.sig);
        let abs = s2.sig.lookup("abs").unwrap();
        // weaken moves the bound variable of a [0]-slot value over ctx 1
        let x = ProdElem::new(d(&[0]), 1, vec![Term::con(abs, [Var(1)])]);
        let w = eval_hexp(&m, &HExp::Weaken, &x).unwrap();
        assert_eq!(w.desc, d(&[1]));
        assert_eq!(w.values, vec![Term::con(abs, [Var(2)])]);

        let f = eval_hexp(&m, &HExp::Fresh, &ProdElem::empty(2)).unwrap();
        assert_eq!((f.desc.clone(), f.values.clone()), (d(&[1]), vec![Var(2)]));

        let df = eval_hexp(&m, &HExp::deriv(HExp::Fresh), &ProdElem::empty(2)).unwrap();
        assert_eq!((df.desc, df.values), (d(&[2]), vec![Var(3)]));

        // deriv(subst) on [2,1]: substitutes the top variable of ctx n+2 by a value over n+1
        let x = ProdElem::new(d(&[2, 1]), 0, vec![Var(1), Var(0)]);
        let out = eval_hexp(&m, &HExp::deriv(HExp::Subst1), &x).unwrap();
        assert_eq!((out.desc, out.values), (d(&[1]), vec![Var(0)]));
    }

    #[test]
    fn shape_errors_at_eval() {
        let s2 = lambda_beta();
        let m = BuiltinModel::discrete(&s2.sig);
        let x = ProdElem::new(d(&[0]), 1, vec![Var(0)]);
        assert!(eval_hexp(&m, &HExp::Subst1, &x).is_err());
        assert!(eval_hexp(&m, &HExp::Proj(3), &x).is_err());
        assert!(eval_hexp(&m, &HExp::Fresh, &x).is_err());
        assert!(eval_hexp(&m, &HExp::deriv(HExp::Id(None)), &x).is_err());
        assert!(eval_hexp(&m, &HExp::Id(Some(d(&[1]))), &x).is_err());
    }

    #[test]
    fn satisfaction_examples() {
        let s2 = lambda_beta();
        let (_, beta) = s2.ineq("beta").unwrap();
        assert!(satisfies(&BuiltinModel::chaotic(&s2.sig), beta, 50, 0).holds());
        assert!(satisfies(&BuiltinModel::syntactic(&s2, 10), beta, 50, 0).holds());
        let v = satisfies(&BuiltinModel::discrete(&s2.sig), beta, 50, 1);
        assert!(v.is_violated(), "{v:?}");
    }

    #[test]
    fn starved_order_is_inconclusive() {
        let s2 = lambda_beta();
        let (_, beta) = s2.ineq("beta").unwrap();
        let v = satisfies(&BuiltinModel::syntactic(&s2, 0), beta, 20, 0);
        assert!(matches!(v, Verdict::Inconclusive { .. }), "{v:?}");
    }

    #[test]
    fn naturality_identity_and_subst() {
        let s2 = lambda_beta();
        let m = BuiltinModel::from_selector(&s2, "permuted:app=1,0", 0).unwrap();
        assert!(naturality_check(&HExp::Id(None), &d(&[1, 0]), &m, 30, 0).passed());
        assert!(naturality_check(&HExp::Subst1, &d(&[1, 0]), &BuiltinModel::syntactic(&s2, 1), 30, 0).passed());
    }
}
