//! Algebraic modules (products of derived tautological modules) over any
//! model, and the executable law suites for monads, modules and
//! representation morphisms.

use crate::models::{init_fold, prod_map, Model, Order};
use crate::report::Report;
use crate::sample::{sample_seed, Sampler};
use crate::sigspec::{ModDescriptor, ShapeError};
use crate::term::{canonical_context, print_term, Ctx, Renaming, SubstMap, Term};

/// An element of `M^desc` at context `ctx`: the `k`-th value lives over
/// `ctx + desc[k]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ProdElem<C> {
    pub desc: ModDescriptor,
    pub ctx: Ctx,
    pub values: Vec<C>,
}

impl<C> ProdElem<C> {
    pub fn new(desc: ModDescriptor, ctx: Ctx, values: Vec<C>) -> Self {
        debug_assert_eq!(desc.len(), values.len());
        ProdElem { desc, ctx, values }
    }

    pub fn empty(ctx: Ctx) -> Self {
        ProdElem {
            desc: ModDescriptor::terminal(),
            ctx,
            values: Vec::new(),
        }
    }

    /// Context of the `k`-th component.
    pub fn slot_ctx(&self, k: usize) -> Ctx {
        self.ctx + self.desc.slots()[k]
    }
}

impl ProdElem<Term> {
    /// Every component well-scoped at its extended context.
    pub fn is_valid(&self, sig: &crate::sigspec::Signature1) -> bool {
        self.values.len() == self.desc.len()
            && self
                .values
                .iter()
                .enumerate()
                .all(|(k, v)| crate::term::scope_check(sig, self.slot_ctx(k), v))
    }

    pub fn render(&self, sig: &crate::sigspec::Signature1) -> String {
        let parts: Vec<String> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, v)| {
                format!(
                    "{} over {}",
                    print_term(sig, &canonical_context(self.slot_ctx(k)), v),
                    self.slot_ctx(k)
                )
            })
            .collect();
        format!("({})", parts.join(", "))
    }
}

fn render_elem<M: Model>(model: &M, e: &ProdElem<M::Carrier>) -> String {
    let parts: Vec<String> = e
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| model.render(e.slot_ctx(k), v))
        .collect();
    format!("({})", parts.join(", "))
}

/// `shift(f)` iterated `k` times in an arbitrary model: old images renamed
/// along the inclusion, new variables sent to the model's unit.
pub fn shift_in<M: Model>(model: &M, f: &SubstMap<M::Carrier>, k: usize) -> SubstMap<M::Carrier> {
    if k == 0 {
        return f.clone();
    }
    let n = f.target();
    let inc = Renaming::inclusion(n, k);
    let mut images: Vec<M::Carrier> = f.images().iter().map(|x| model.rename(&inc, x)).collect();
    images.extend((n..n + k).map(|v| model.eta(n + k, v)));
    SubstMap::new(n + k, images)
}

fn shape_mismatch(expected: impl Into<String>, found: impl Into<String>) -> ShapeError {
    ShapeError {
        path: Vec::new(),
        expected: expected.into(),
        found: found.into(),
    }
}

/// Module substitution on `M^desc`: component `k` is substituted with `shift(f, desc[k])`.
pub fn prod_subst<M: Model>(
    model: &M,
    desc: &ModDescriptor,
    f: &SubstMap<M::Carrier>,
    e: &ProdElem<M::Carrier>,
) -> Result<ProdElem<M::Carrier>, ShapeError> {
    if e.desc != *desc || e.values.len() != desc.len() {
        return Err(shape_mismatch(
            format!("an element of {desc}"),
            format!("an element of {}", e.desc),
        ));
    }
    if f.source() != e.ctx {
        return Err(shape_mismatch(
            format!("a map out of {} variable(s)", e.ctx),
            format!("a map out of {}", f.source()),
        ));
    }
    let values = desc
        .slots()
        .iter()
        .zip(&e.values)
        .map(|(&k, v)| model.kleisli(&shift_in(model, f, k), v))
        .collect();
    Ok(ProdElem {
        desc: desc.clone(),
        ctx: f.target(),
        values,
    })
}

/// Componentwise order: `Yes` if every component is related, `No` if some
/// component is not, `Unknown` otherwise. The empty tuple is related.
pub fn prod_leq<M: Model>(
    model: &M,
    desc: &ModDescriptor,
    a: &ProdElem<M::Carrier>,
    b: &ProdElem<M::Carrier>,
) -> Result<Order, ShapeError> {
    for e in [a, b] {
        if e.desc != *desc || e.values.len() != desc.len() {
            return Err(shape_mismatch(
                format!("an element of {desc}"),
                format!("an element of {}", e.desc),
            ));
        }
    }
    if a.ctx != b.ctx {
        return Err(shape_mismatch(
            format!("context {}", a.ctx),
            format!("context {}", b.ctx),
        ));
    }
    let mut out = Order::Yes;
    for k in 0..desc.len() {
        match model.leq(a.slot_ctx(k), &a.values[k], &b.values[k]) {
            Order::No => return Ok(Order::No),
            Order::Unknown => out = Order::Unknown,
            Order::Yes => {}
        }
    }
    Ok(out)
}

fn prod_eq<M: Model>(model: &M, a: &ProdElem<M::Carrier>, b: &ProdElem<M::Carrier>) -> bool {
    a.desc == b.desc
        && a.ctx == b.ctx
        && a.values.len() == b.values.len()
        && (0..a.values.len()).all(|k| model.eq(a.slot_ctx(k), &a.values[k], &b.values[k]))
}

/// Model values are sampled as folds of random terms.
struct Draw<'m, 's, M: Model> {
    model: &'m M,
    g: Sampler<'s>,
}

impl<M: Model> Draw<'_, '_, M> {
    fn value(&mut self, ctx: Ctx) -> Option<(Term, M::Carrier)> {
        let t = self.g.term(ctx)?;
        let v = init_fold(self.model, ctx, &t);
        Some((t, v))
    }

    fn map(&mut self, source: Ctx, target: Ctx) -> Option<(SubstMap, SubstMap<M::Carrier>)> {
        let f = self.g.subst_map(source, target)?;
        let fm = f.map(|x| init_fold(self.model, target, x));
        Some((f, fm))
    }
}

fn render_map(sig: &crate::sigspec::Signature1, f: &SubstMap) -> String {
    let ctx = canonical_context(f.target());
    let imgs: Vec<String> = f.images().iter().map(|x| print_term(sig, &ctx, x)).collect();
    format!("[{}] into {}", imgs.join(", "), f.target())
}

/// The three monad diagrams, plus renaming-as-substitution and
/// shift-preserves-unit.
pub fn check_monad_laws<M: Model>(model: &M, samples: usize, seed: u64) -> Vec<Report> {
    let sig = model.signature();
    let mut unit_left = Report::new("monad.unit-left");
    let mut unit_right = Report::new("monad.unit-right");
    let mut assoc = Report::new("monad.assoc");
    let mut rename_kl = Report::new("monad.rename-as-kleisli");
    let mut shift_unit = Report::new("monad.shift-unit");
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut d = Draw {
            model,
            g: Sampler::new(sig, s),
        };
        let m = d.g.ctx(3).max(1);
        let n = d.g.ctx(3);
        let p = d.g.ctx(3);
        let (Some((xt, x)), Some((ft, f)), Some((gt, g))) = (d.value(m), d.map(m, n), d.map(n, p)) else {
            continue;
        };
        let var = rand::Rng::gen_range(d.g.rng(), 0..m);
        let input = || {
            format!(
                "x = {} over {m}; f = {}; g = {}",
                print_term(sig, &canonical_context(m), &xt),
                render_map(sig, &ft),
                render_map(sig, &gt)
            )
        };

        // kleisli(f) . eta = f
        let lhs = model.kleisli(&f, &model.eta(m, var));
        unit_left.record(s, model.eq(n, &lhs, f.get(var)), || {
            (
                format!("var {var}; {}", input()),
                model.render(n, &lhs),
                model.render(n, f.get(var)),
            )
        });

        // kleisli(eta) = id
        let units = SubstMap::new(m, (0..m).map(|v| model.eta(m, v)).collect());
        let lhs = model.kleisli(&units, &x);
        unit_right.record(s, model.eq(m, &lhs, &x), || {
            (input(), model.render(m, &lhs), model.render(m, &x))
        });

        // kleisli(g) . kleisli(f) = kleisli(kleisli(g) . f)
        let lhs = model.kleisli(&g, &model.kleisli(&f, &x));
        let fg = SubstMap::new(g.target(), f.images().iter().map(|y| model.kleisli(&g, y)).collect());
        let rhs = model.kleisli(&fg, &x);
        assoc.record(s, model.eq(p, &lhs, &rhs), || {
            (input(), model.render(p, &lhs), model.render(p, &rhs))
        });

        // rename(r) = kleisli(eta . r)
        if let Some(r) = d.g.renaming(m, n.max(1)) {
            let rt = r.target();
            let lhs = model.rename(&r, &x);
            let as_map = SubstMap::new(rt, r.map().iter().map(|&v| model.eta(rt, v)).collect());
            let rhs = model.kleisli(&as_map, &x);
            rename_kl.record(s, model.eq(rt, &lhs, &rhs), || {
                (
                    format!("r = {:?} into {rt}; {}", r.map(), input()),
                    model.render(rt, &lhs),
                    model.render(rt, &rhs),
                )
            });
        }

        // shift(eta_m, 1) = eta_{m+1}
        let shifted = shift_in(model, &units, 1);
        let ok = shifted.target() == m + 1
            && shifted.source() == m + 1
            && (0..=m).all(|v| model.eq(m + 1, shifted.get(v), &model.eta(m + 1, v)));
        shift_unit.record(s, ok, || {
            let imgs: Vec<String> = shifted.images().iter().map(|y| model.render(m + 1, y)).collect();
            (format!("m = {m}"), imgs.join(", "), format!("units of {}", m + 1))
        });
    }
    vec![unit_left, unit_right, assoc, rename_kl, shift_unit]
}

/// The two module diagrams for `prod_subst` on `desc`.
pub fn check_module_laws<M: Model>(model: &M, desc: &ModDescriptor, samples: usize, seed: u64) -> Vec<Report> {
    let sig = model.signature();
    let mut unit = Report::new(format!("module{desc}.unit"));
    let mut assoc = Report::new(format!("module{desc}.assoc"));
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut d = Draw {
            model,
            g: Sampler::new(sig, s),
        };
        let m = d.g.ctx(3);
        let n = d.g.ctx(3);
        let p = d.g.ctx(3);
        let Some(tuple) = d.g.tuple(desc, m) else { continue };
        let e_terms = ProdElem::new(desc.clone(), m, tuple);
        let e = prod_map(model, &e_terms);
        let (Some((ft, f)), Some((gt, g))) = (d.map(m, n), d.map(n, p)) else {
            continue;
        };
        let input = || {
            format!(
                "e = {}; f = {}; g = {}",
                e_terms.render(sig),
                render_map(sig, &ft),
                render_map(sig, &gt)
            )
        };

        let units = SubstMap::new(m, (0..m).map(|v| model.eta(m, v)).collect());
        let lhs = prod_subst(model, desc, &units, &e).expect("shapes agree");
        unit.record(s, prod_eq(model, &lhs, &e), || {
            (input(), render_elem(model, &lhs), render_elem(model, &e))
        });

        let lhs =
            prod_subst(model, desc, &g, &prod_subst(model, desc, &f, &e).expect("shapes agree")).expect("shapes agree");
        let fg = SubstMap::new(g.target(), f.images().iter().map(|y| model.kleisli(&g, y)).collect());
        let rhs = prod_subst(model, desc, &fg, &e).expect("shapes agree");
        assoc.record(s, prod_eq(model, &lhs, &rhs), || {
            (input(), render_elem(model, &lhs), render_elem(model, &rhs))
        });
    }
    vec![unit, assoc]
}

/// For every arity `s` and sampled term tuple `e`:
/// `init(Con(s, e)) = model.op(s, init^s(e))`.
pub fn check_rep_morphism<M: Model>(model: &M, samples: usize, seed: u64) -> Report {
    let sig = model.signature();
    let mut report = Report::new("rep-morphism");
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(sig, s);
        for op in sig.op_ids() {
            let desc = ModDescriptor(sig.arity(op).to_vec());
            let n = g.ctx(3);
            let Some(tuple) = g.tuple(&desc, n) else { continue };
            let e = ProdElem::new(desc, n, tuple);
            let lhs = init_fold(model, n, &Term::Con(op, e.values.clone()));
            let rhs = model.op(op, &prod_map(model, &e));
            report.record(s, model.eq(n, &lhs, &rhs), || {
                (
                    format!("{} at {}", sig.name(op), e.render(sig)),
                    model.render(n, &lhs),
                    model.render(n, &rhs),
                )
            });
        }
    }
    report
}
