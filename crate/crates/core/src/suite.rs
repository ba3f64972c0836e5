//! The full law suite run by `syn laws`.

use crate::halfeq::naturality_check;
use crate::modalg::{check_module_laws, check_monad_laws, check_rep_morphism};
use crate::models::{check_init_monad_morphism, check_init_monotone, init_fold, BuiltinModel, Model};
use crate::report::Report;
use crate::sample::{sample_seed, Sampler};
use crate::sigspec::{HExp, ModDescriptor, Signature1, Signature2};
use crate::term::{self, canonical_context, print_term, SubstMap};

/// Descriptors at which the module diagrams are checked.
pub const MODULE_DESCRIPTORS: [&[usize]; 3] = [&[0], &[1], &[2, 0]];

/// A permuted model exchanging the first two equal-depth arguments of the
/// first operator that has them.
pub fn swap_model(sig: &Signature1) -> Option<BuiltinModel<'_>> {
    sig.op_ids().find_map(|op| {
        let arity = sig.arity(op);
        let (a, b) = (0..arity.len())
            .flat_map(|a| (a + 1..arity.len()).map(move |b| (a, b)))
            .find(|&(a, b)| arity[a] == arity[b])?;
        let mut p: Vec<usize> = (0..arity.len()).collect();
        p.swap(a, b);
        BuiltinModel::permuted(sig, &[(sig.name(op), p)]).ok()
    })
}

fn tagged(prefix: &str, mut reports: Vec<Report>) -> Vec<Report> {
    for r in &mut reports {
        r.law = format!("{prefix}/{}", r.law);
    }
    reports
}

/// `subst1(body, arg) = subst([eta.., arg], body)` and
/// `rename(r, t) = subst(eta . r, t)` on raw terms.
pub fn check_kernel_laws(sig: &Signature1, samples: usize, seed: u64) -> Vec<Report> {
    let mut single = Report::new("kernel.subst1-vs-parallel");
    let mut rename = Report::new("kernel.rename-as-subst");
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(sig, s);
        let n = g.ctx(3);
        let (Some(body), Some(arg)) = (g.term(n + 1), g.term_at_depth(n, crate::sample::MAP_IMAGE_DEPTH)) else {
            continue;
        };
        let lhs = term::subst1(sig, n, &body, &arg);
        let rhs = term::subst(sig, &SubstMap::single(n, arg.clone()), &body);
        single.record(s, lhs == rhs, || {
            (
                format!(
                    "body = {} over {}; arg = {}",
                    print_term(sig, &canonical_context(n + 1), &body),
                    n + 1,
                    print_term(sig, &canonical_context(n), &arg)
                ),
                print_term(sig, &canonical_context(n), &lhs),
                print_term(sig, &canonical_context(n), &rhs),
            )
        });

        let m = g.ctx(3);
        let Some(t) = g.term(m) else { continue };
        let Some(r) = g.renaming(m, n.max(1)) else { continue };
        let lhs = term::rename(sig, &r, &t);
        let rhs = term::subst(sig, &SubstMap::from_renaming(&r), &t);
        let ctx = canonical_context(r.target());
        rename.record(s, lhs == rhs, || {
            (
                format!(
                    "t = {} over {m}; r = {:?}",
                    print_term(sig, &canonical_context(m), &t),
                    r.map()
                ),
                print_term(sig, &ctx, &lhs),
                print_term(sig, &ctx, &rhs),
            )
        });
    }
    vec![single, rename]
}

/// `init_fold` into the syntactic model is the identity.
pub fn check_fold_identity(sig2: &Signature2, samples: usize, seed: u64) -> Report {
    let model = BuiltinModel::syntactic(sig2, 0);
    let mut report = Report::new("init.identity");
    for i in 0..samples {
        let s = sample_seed(seed, i);
        let mut g = Sampler::new(&sig2.sig, s);
        let n = g.ctx(3);
        let Some(t) = g.term(n) else { continue };
        let folded = init_fold(&model, n, &t);
        report.record(s, folded == t, || {
            let ctx = canonical_context(n);
            (
                print_term(&sig2.sig, &ctx, &t),
                print_term(&sig2.sig, &ctx, &folded),
                print_term(&sig2.sig, &ctx, &t),
            )
        });
    }
    report
}

fn model_laws<M: Model>(name: &str, model: &M, sig2: &Signature2, samples: usize, seed: u64) -> Vec<Report> {
    let mut out = check_init_monad_morphism(model, samples, seed);
    out.push(check_rep_morphism(model, samples, seed));
    out.push(check_init_monotone(model, sig2, samples, seed));
    for q in sig2.ineqs() {
        for (side, e) in [("lhs", &q.lhs), ("rhs", &q.rhs), ("id", &HExp::Id(None))] {
            let mut r = naturality_check(e, &q.dom, model, samples, seed);
            r.law = format!("naturality[{}.{side}]", q.name);
            out.push(r);
        }
    }
    tagged(name, out)
}

/// Every law family, in a fixed order.
pub fn run_laws(sig2: &Signature2, samples: usize, seed: u64, fuel: usize) -> Vec<Report> {
    let sig = &sig2.sig;
    let syntactic = BuiltinModel::syntactic(sig2, fuel);
    let mut out = check_monad_laws(&syntactic, samples, seed);
    for d in MODULE_DESCRIPTORS {
        out.extend(check_module_laws(&syntactic, &ModDescriptor(d.to_vec()), samples, seed));
    }
    out.extend(check_kernel_laws(sig, samples, seed));
    out.push(check_fold_identity(sig2, samples, seed));
    out.extend(model_laws("syntactic", &syntactic, sig2, samples, seed));
    out.extend(model_laws(
        "discrete",
        &BuiltinModel::discrete(sig),
        sig2,
        samples,
        seed,
    ));
    out.extend(model_laws("chaotic", &BuiltinModel::chaotic(sig), sig2, samples, seed));
    if let Some(m) = swap_model(sig) {
        out.extend(model_laws("permuted", &m, sig2, samples, seed));
    }
    out
}
