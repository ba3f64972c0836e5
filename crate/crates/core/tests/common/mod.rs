//! Shared test helpers: a textbook de Bruijn-index kernel used as an oracle,
//! a choice-stream term decoder for proptest, and Church numerals.
#![allow(dead_code)]

use synbind::sigspec::{OpId, Signature1};
use synbind::term::{Ctx, SubstMap, Term};

/// Terms with classical de Bruijn indices: `I(0)` is the innermost binder.
/// Each argument records how many variables it binds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Ix {
    I(usize),
    C(usize, Vec<(usize, Ix)>),
}

pub fn to_ix(sig: &Signature1, ctx: Ctx, t: &Term) -> Ix {
    match t {
        Term::Var(l) => Ix::I(ctx - 1 - l),
        Term::Con(op, args) => Ix::C(
            op.0,
            args.iter()
                .zip(sig.arity(*op))
                .map(|(a, &k)| (k, to_ix(sig, ctx + k, a)))
                .collect(),
        ),
    }
}

pub fn from_ix(ctx: Ctx, t: &Ix) -> Term {
    match t {
        Ix::I(i) => Term::Var(ctx - 1 - i),
        Ix::C(op, args) => Term::Con(OpId(*op), args.iter().map(|(k, a)| from_ix(ctx + k, a)).collect()),
    }
}

/// Adds `d` to every index at or above `cutoff`.
pub fn shift(d: isize, cutoff: usize, t: &Ix) -> Ix {
    match t {
        Ix::I(i) if *i >= cutoff => Ix::I((*i as isize + d) as usize),
        Ix::I(i) => Ix::I(*i),
        Ix::C(op, args) => Ix::C(*op, args.iter().map(|(k, a)| (*k, shift(d, cutoff + k, a))).collect()),
    }
}

/// `sigma[i]` replaces free index `i`.
pub fn apply(sigma: &[Ix], depth: usize, t: &Ix) -> Ix {
    match t {
        Ix::I(i) if *i < depth => Ix::I(*i),
        Ix::I(i) => shift(depth as isize, 0, &sigma[i - depth]),
        Ix::C(op, args) => Ix::C(
            *op,
            args.iter().map(|(k, a)| (*k, apply(sigma, depth + k, a))).collect(),
        ),
    }
}

/// Oracle for parallel substitution on level-based terms.
pub fn oracle_subst(sig: &Signature1, f: &SubstMap, t: &Term) -> Term {
    let m = f.source();
    let n = f.target();
    // free index i of a term over m is level m - 1 - i
    let sigma: Vec<Ix> = (0..m).map(|i| to_ix(sig, n, f.get(m - 1 - i))).collect();
    from_ix(n, &apply(&sigma, 0, &to_ix(sig, m, t)))
}

/// `body[0 := arg]` in index form, the textbook beta contraction.
pub fn beta_ix(body: &Ix, arg: &Ix) -> Ix {
    let mut sigma = vec![shift(1, 0, arg)];
    // indices above 0 are kept (after the shift down below)
    let free = max_free(body);
    sigma.extend((1..free.max(1)).map(Ix::I));
    shift(-1, 0, &apply(&sigma, 0, body))
}

/// One past the largest free index.
fn max_free(t: &Ix) -> usize {
    match t {
        Ix::I(i) => i + 1,
        Ix::C(_, args) => args
            .iter()
            .map(|(k, a)| max_free(a).saturating_sub(*k))
            .max()
            .unwrap_or(0),
    }
}

pub fn oracle_subst1(sig: &Signature1, n: Ctx, body: &Term, arg: &Term) -> Term {
    from_ix(n, &beta_ix(&to_ix(sig, n + 1, body), &to_ix(sig, n, arg)))
}

/// Leftmost-outermost beta reduction for a signature with `app = [0,0]` and `abs = [1]`.
pub struct LambdaOracle {
    pub app: usize,
    pub abs: usize,
}

impl LambdaOracle {
    pub fn new(sig: &Signature1) -> Self {
        LambdaOracle {
            app: sig.lookup("app").unwrap().0,
            abs: sig.lookup("abs").unwrap().0,
        }
    }

    fn as_redex<'a>(&self, t: &'a Ix) -> Option<(&'a Ix, &'a Ix)> {
        if let Ix::C(op, args) = t {
            if *op == self.app {
                if let Ix::C(op2, inner) = &args[0].1 {
                    if *op2 == self.abs {
                        return Some((&inner[0].1, &args[1].1));
                    }
                }
            }
        }
        None
    }

    /// One normal-order step.
    pub fn step(&self, t: &Ix) -> Option<Ix> {
        if let Some((body, arg)) = self.as_redex(t) {
            return Some(beta_ix(body, arg));
        }
        match t {
            Ix::I(_) => None,
            Ix::C(op, args) => {
                for (k, (b, a)) in args.iter().enumerate() {
                    if let Some(a2) = self.step(a) {
                        let mut args = args.clone();
                        args[k] = (*b, a2);
                        return Some(Ix::C(*op, args));
                    }
                }
                None
            }
        }
    }

    /// Every one-step reduct, in any order.
    pub fn all_steps(&self, t: &Ix) -> Vec<Ix> {
        let mut out = Vec::new();
        if let Some((body, arg)) = self.as_redex(t) {
            out.push(beta_ix(body, arg));
        }
        if let Ix::C(op, args) = t {
            for (k, (b, a)) in args.iter().enumerate() {
                for a2 in self.all_steps(a) {
                    let mut args = args.clone();
                    args[k] = (*b, a2);
                    out.push(Ix::C(*op, args));
                }
            }
        }
        out
    }

    pub fn normalize(&self, t: &Ix, fuel: usize) -> Option<(Ix, usize)> {
        let mut cur = t.clone();
        for steps in 0..=fuel {
            match self.step(&cur) {
                None => return Some((cur, steps)),
                Some(next) => cur = next,
            }
        }
        None
    }
}

/// Decodes a stream of choices into a well-scoped term over `ctx`; an
/// exhausted stream yields variables (or the first closing operator).
pub struct Decoder<'a> {
    sig: &'a Signature1,
    choices: &'a [u32],
    at: usize,
}

impl<'a> Decoder<'a> {
    pub fn new(sig: &'a Signature1, choices: &'a [u32]) -> Self {
        Decoder { sig, choices, at: 0 }
    }

    fn next(&mut self) -> Option<u32> {
        let c = self.choices.get(self.at).copied();
        self.at += 1;
        c
    }

    pub fn term(&mut self, ctx: Ctx, depth: usize) -> Term {
        let closer = self.sig.op_ids().find(|&op| self.sig.arity(op).iter().all(|&k| k > 0));
        let choice = self.next();
        let ops = self.sig.len() as u32;
        match choice {
            Some(c) if depth > 0 && (ctx == 0 || c % (ops + 2) >= 2) => {
                let op = OpId((c % ops.max(1)) as usize);
                let op = if ctx == 0 && self.sig.arity(op).contains(&0) {
                    closer.unwrap_or(op)
                } else {
                    op
                };
                let arity = self.sig.arity(op).to_vec();
                Term::Con(op, arity.into_iter().map(|k| self.term(ctx + k, depth - 1)).collect())
            }
            Some(c) if ctx > 0 => Term::Var(c as usize % ctx),
            _ if ctx > 0 => Term::Var(ctx - 1),
            _ => {
                let op = closer.expect("signature has closed terms");
                let arity = self.sig.arity(op).to_vec();
                Term::Con(op, arity.into_iter().map(|k| self.term(ctx + k, 0)).collect())
            }
        }
    }
}

pub fn decode(sig: &Signature1, ctx: Ctx, choices: &[u32]) -> Term {
    Decoder::new(sig, choices).term(ctx, 6)
}

/// Church numeral `k` as a closed lambda term: `\f.\x. f (f ... x)`.
pub fn church_src(k: usize) -> String {
    let mut body = "x".to_string();
    for _ in 0..k {
        body = format!("(app f {body})");
    }
    format!("(abs (bind (f) (abs (bind (x) {body}))))")
}

pub const PLUS_SRC: &str =
    "(abs (bind (m) (abs (bind (n) (abs (bind (f) (abs (bind (x) (app (app m f) (app (app n f) x))))))))))";
