//! Well-scoped terms of the initial representation.
//!
//! A context is a natural `n`; its variables are `0..n`. Extending a context
//! appends the fresh variable at the top, so under a binder of depth `k` the
//! bound variables are `n..n+k` and the outer variables keep their indices.

mod syntax;

use thiserror::Error;

use crate::sigspec::{OpId, Signature1};

pub use syntax::{canonical_context, parse_term, print_term, validate_context, TermSyntaxError};

/// Size of a context.
pub type Ctx = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(usize),
    Con(OpId, Vec<Term>),
}

impl Term {
    pub fn con(op: OpId, args: impl Into<Vec<Term>>) -> Term {
        Term::Con(op, args.into())
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        let mut stack = vec![self];
        let mut n = 0;
        while let Some(t) = stack.pop() {
            n += 1;
            if let Term::Con(_, args) = t {
                stack.extend(args);
            }
        }
        n
    }

    /// Number of occurrences of variable `var`. Bound variables never alias
    /// free ones, so no depth bookkeeping is needed.
    pub fn occurrences(&self, var: usize) -> usize {
        let mut stack = vec![self];
        let mut n = 0;
        while let Some(t) = stack.pop() {
            match t {
                Term::Var(i) if *i == var => n += 1,
                Term::Var(_) => {}
                Term::Con(_, args) => stack.extend(args),
            }
        }
        n
    }

    pub fn mentions(&self, var: usize) -> bool {
        self.occurrences(var) > 0
    }

    /// The subterm at `path`, if it exists.
    pub fn at(&self, path: &[usize]) -> Option<&Term> {
        let mut t = self;
        for &k in path {
            match t {
                Term::Con(_, args) => t = args.get(k)?,
                Term::Var(_) => return None,
            }
        }
        Some(t)
    }

    /// Replaces the subterm at `path`. Panics if the path does not exist.
    pub fn replace_at(&self, path: &[usize], new: Term) -> Term {
        match path.split_first() {
            None => new,
            Some((&k, rest)) => match self {
                Term::Con(op, args) => {
                    let mut args = args.clone();
                    args[k] = args[k].replace_at(rest, new);
                    Term::Con(*op, args)
                }
                Term::Var(_) => panic!("path runs through a variable"),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScopeError {
    #[error("term is not well-scoped in a context of {ctx} variable(s)")]
    Term { ctx: Ctx },
    #[error("map entry {index} is out of range for a target context of {target}")]
    MapEntry { index: usize, target: Ctx },
    #[error("expected a map out of {expected} variable(s), got {found}")]
    MapSource { expected: Ctx, found: Ctx },
}

/// Whether `t` is well-scoped in context `n` over `sig`.
pub fn scope_check(sig: &Signature1, n: Ctx, t: &Term) -> bool {
    let mut stack = vec![(t, n)];
    while let Some((t, n)) = stack.pop() {
        match t {
            Term::Var(i) => {
                if *i >= n {
                    return false;
                }
            }
            Term::Con(op, args) => {
                if !sig.contains(*op) {
                    return false;
                }
                let arity = sig.arity(*op);
                if arity.len() != args.len() {
                    return false;
                }
                stack.extend(args.iter().zip(arity).map(|(a, k)| (a, n + k)));
            }
        }
    }
    true
}

/// A map `m -> n` on variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Renaming {
    target: Ctx,
    map: Vec<usize>,
}

impl Renaming {
    pub fn new(target: Ctx, map: Vec<usize>) -> Result<Self, ScopeError> {
        if let Some(index) = map.iter().position(|&v| v >= target) {
            return Err(ScopeError::MapEntry { index, target });
        }
        Ok(Renaming { target, map })
    }

    pub fn identity(n: Ctx) -> Self {
        Renaming {
            target: n,
            map: (0..n).collect(),
        }
    }

    /// The inclusion `n -> n + k`.
    pub fn inclusion(n: Ctx, k: usize) -> Self {
        Renaming {
            target: n + k,
            map: (0..n).collect(),
        }
    }

    pub fn source(&self) -> Ctx {
        self.map.len()
    }

    pub fn target(&self) -> Ctx {
        self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    /// The renaming lifted under `k` binders: `i < m` goes to `f(i)`, `m + j` to `n + j`.
    pub fn lift(&self, k: usize) -> Renaming {
        let mut map = self.map.clone();
        map.extend((0..k).map(|j| self.target + j));
        Renaming {
            target: self.target + k,
            map,
        }
    }
}

/// A substitution `m -> C(n)`: one image per source variable, each living in
/// the target context. No monotonicity is asked of the map.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SubstMap<C = Term> {
    target: Ctx,
    images: Vec<C>,
}

impl<C> SubstMap<C> {
    /// The caller is responsible for the images living at `target`.
    pub fn new(target: Ctx, images: Vec<C>) -> Self {
        SubstMap { target, images }
    }

    pub fn source(&self) -> Ctx {
        self.images.len()
    }

    pub fn target(&self) -> Ctx {
        self.target
    }

    pub fn images(&self) -> &[C] {
        &self.images
    }

    pub fn get(&self, i: usize) -> &C {
        &self.images[i]
    }

    pub fn map<D>(&self, f: impl FnMut(&C) -> D) -> SubstMap<D> {
        SubstMap {
            target: self.target,
            images: self.images.iter().map(f).collect(),
        }
    }
}

impl SubstMap<Term> {
    pub fn checked(sig: &Signature1, target: Ctx, images: Vec<Term>) -> Result<Self, ScopeError> {
        if let Some(index) = images.iter().position(|t| !scope_check(sig, target, t)) {
            return Err(ScopeError::MapEntry { index, target });
        }
        Ok(SubstMap { target, images })
    }

    /// The unit `i -> Var i` on `n`.
    pub fn unit(n: Ctx) -> Self {
        SubstMap {
            target: n,
            images: (0..n).map(Term::Var).collect(),
        }
    }

    /// `defaultmap(unit, arg)`: `n + 1 -> n`, the old variables to themselves
    /// and the top one to `arg`.
    pub fn single(n: Ctx, arg: Term) -> Self {
        let mut images: Vec<Term> = (0..n).map(Term::Var).collect();
        images.push(arg);
        SubstMap { target: n, images }
    }

    pub fn from_renaming(f: &Renaming) -> Self {
        SubstMap {
            target: f.target,
            images: f.map.iter().map(|&v| Term::Var(v)).collect(),
        }
    }
}

/// Renames the free variables of `t` (over `f.source()`) along `f`.
pub fn rename(sig: &Signature1, f: &Renaming, t: &Term) -> Term {
    debug_assert!(scope_check(sig, f.source(), t));
    rename_unchecked(f, t)
}

/// Bound variables sit above the source context at every depth, so the lifted
/// map `f ^^ k` is the same offset rule whatever `k` is.
fn rename_unchecked(f: &Renaming, t: &Term) -> Term {
    match t {
        Term::Var(i) if *i < f.source() => Term::Var(f.map[*i]),
        Term::Var(i) => Term::Var(f.target + (i - f.source())),
        Term::Con(op, args) => Term::Con(*op, args.iter().map(|a| rename_unchecked(f, a)).collect()),
    }
}

pub fn rename_checked(sig: &Signature1, f: &Renaming, t: &Term) -> Result<Term, ScopeError> {
    if !scope_check(sig, f.source(), t) {
        return Err(ScopeError::Term { ctx: f.source() });
    }
    Ok(rename_unchecked(f, t))
}

/// Weakens `t` from context `n` to `n + k`; old variables keep their indices.
pub fn weaken_term(sig: &Signature1, n: Ctx, t: &Term, k: usize) -> Term {
    if k == 0 {
        return t.clone();
    }
    rename(sig, &Renaming::inclusion(n, k), t)
}

/// Inverse of a one-step weakening of `t` in context `n + 1`: `None` if `t`
/// mentions the top variable `n`.
pub fn strengthen(sig: &Signature1, n: Ctx, t: &Term) -> Option<Term> {
    debug_assert!(scope_check(sig, n + 1, t));
    fn go(n: Ctx, t: &Term) -> Option<Term> {
        match t {
            Term::Var(i) if *i < n => Some(Term::Var(*i)),
            Term::Var(i) if *i == n => None,
            Term::Var(i) => Some(Term::Var(i - 1)),
            Term::Con(op, args) => Some(Term::Con(*op, args.iter().map(|a| go(n, a)).collect::<Option<_>>()?)),
        }
    }
    go(n, t)
}

/// `shift(f)` iterated `k` times: `(m + k) -> (n + k)`, the old images weakened
/// and the new variables sent to `Var(n) .. Var(n + k - 1)`.
pub fn shift(sig: &Signature1, f: &SubstMap, k: usize) -> SubstMap {
    if k == 0 {
        return f.clone();
    }
    let n = f.target;
    let mut images: Vec<Term> = f.images.iter().map(|t| weaken_term(sig, n, t, k)).collect();
    images.extend((n..n + k).map(Term::Var));
    SubstMap { target: n + k, images }
}

/// Parallel substitution of `f` into `t` (over `f.source()`).
pub fn subst(sig: &Signature1, f: &SubstMap, t: &Term) -> Term {
    debug_assert!(scope_check(sig, f.source(), t));
    subst_under(sig, f, 0, t)
}

/// Substitutes with `shift(f, depth)` without materialising the shifted map.
fn subst_under(sig: &Signature1, f: &SubstMap, depth: usize, t: &Term) -> Term {
    match t {
        Term::Var(i) if *i < f.source() => weaken_term(sig, f.target, &f.images[*i], depth),
        Term::Var(i) => Term::Var(f.target + (i - f.source())),
        Term::Con(op, args) => Term::Con(
            *op,
            args.iter()
                .zip(sig.arity(*op))
                .map(|(a, k)| subst_under(sig, f, depth + k, a))
                .collect(),
        ),
    }
}

pub fn subst_checked(sig: &Signature1, f: &SubstMap, t: &Term) -> Result<Term, ScopeError> {
    if !scope_check(sig, f.source(), t) {
        return Err(ScopeError::Term { ctx: f.source() });
    }
    if let Some(index) = f.images.iter().position(|x| !scope_check(sig, f.target, x)) {
        return Err(ScopeError::MapEntry {
            index,
            target: f.target,
        });
    }
    Ok(subst_under(sig, f, 0, t))
}

/// `body[* := arg]` where `body` lives in `n + 1` and `arg` in `n`.
///
/// Walks `body` once, replacing the top variable directly rather than going
/// through a materialised map.
pub fn subst1(sig: &Signature1, n: Ctx, body: &Term, arg: &Term) -> Term {
    debug_assert!(scope_check(sig, n + 1, body) && scope_check(sig, n, arg));
    instantiate(sig, n, body, arg, 0)
}

fn instantiate(sig: &Signature1, n: Ctx, t: &Term, arg: &Term, depth: usize) -> Term {
    match t {
        Term::Var(i) if *i < n => Term::Var(*i),
        Term::Var(i) if *i == n => weaken_term(sig, n, arg, depth),
        Term::Var(i) => Term::Var(i - 1),
        Term::Con(op, args) => Term::Con(
            *op,
            args.iter()
                .zip(sig.arity(*op))
                .map(|(a, k)| instantiate(sig, n, a, arg, depth + k))
                .collect(),
        ),
    }
}

pub fn subst1_checked(sig: &Signature1, n: Ctx, body: &Term, arg: &Term) -> Result<Term, ScopeError> {
    if !scope_check(sig, n, arg) {
        return Err(ScopeError::Term { ctx: n });
    }
    subst_checked(sig, &SubstMap::single(n, arg.clone()), body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use Term::Var;

    fn lambda() -> (Signature1, OpId, OpId) {
        let s = Signature1::from_pairs([("app", &[0, 0][..]), ("abs", &[1][..])]).unwrap();
        let app = s.lookup("app").unwrap();
        let abs = s.lookup("abs").unwrap();
        (s, app, abs)
    }

    #[test]
    fn scope_examples() {
        let (s, app, abs) = lambda();
        assert!(scope_check(&s, 1, &Var(0)));
        assert!(!scope_check(&s, 0, &Var(0)));
        let t = Term::con(app, [Term::con(abs, [Var(1)]), Var(0)]);
        assert!(scope_check(&s, 1, &t));
        assert!(!scope_check(&s, 1, &Term::con(abs, [Var(2)])));
        assert!(!scope_check(&s, 1, &Term::con(app, [Var(0)])));
        assert!(!scope_check(&s, 1, &Term::con(OpId(7), [])));
    }

    #[test]
    fn rename_examples() {
        let (s, _, abs) = lambda();
        let t = Term::con(abs, [Var(1)]);
        assert_eq!(rename(&s, &Renaming::identity(1), &t), t);
        assert_eq!(rename(&s, &Renaming::new(2, vec![1, 0]).unwrap(), &Var(0)), Var(1));
        // bound index moves from m to n under the binder
        assert_eq!(
            rename(&s, &Renaming::new(2, vec![1]).unwrap(), &t),
            Term::con(abs, [Var(2)])
        );
    }

    #[test]
    fn renaming_rejects_out_of_range() {
        assert_eq!(
            Renaming::new(1, vec![0, 1]),
            Err(ScopeError::MapEntry { index: 1, target: 1 })
        );
    }

    #[test]
    fn shift_examples() {
        let (s, _, abs) = lambda();
        let f = SubstMap::new(1, vec![Var(0)]);
        assert_eq!(shift(&s, &f, 0), f);
        assert_eq!(shift(&s, &f, 1).images(), &[Var(0), Var(1)]);
        let g = SubstMap::new(1, vec![Term::con(abs, [Var(1)])]);
        let sh = shift(&s, &g, 1);
        assert_eq!(sh.target(), 2);
        assert_eq!(sh.images(), &[Term::con(abs, [Var(2)]), Var(1)]);
    }

    #[test]
    fn subst_examples() {
        let (s, app, _) = lambda();
        let t = Term::con(app, [Var(1), Var(0)]);
        assert_eq!(subst(&s, &SubstMap::unit(2), &t), t);
        let f = SubstMap::new(1, vec![Var(0), Term::con(app, [Var(0), Var(0)])]);
        assert_eq!(subst(&s, &f, &Var(1)), f.get(1).clone());
        assert_eq!(
            subst(&s, &f, &t),
            Term::con(app, [Term::con(app, [Var(0), Var(0)]), Var(0)])
        );
    }

    #[test]
    fn subst1_examples() {
        let (s, app, abs) = lambda();
        let a = Term::con(abs, [Var(1)]);
        assert_eq!(subst1(&s, 1, &Var(1), &a), a);
        assert_eq!(subst1(&s, 1, &Var(0), &a), Var(0));
        assert_eq!(
            subst1(&s, 1, &Term::con(app, [Var(1), Var(0)]), &a),
            Term::con(app, [a.clone(), Var(0)])
        );
    }

    #[test]
    fn subst_under_binder_shifts_image() {
        let (s, app, abs) = lambda();
        // (abs x1) over ctx 1 with x0 := (abs (app x0 x0)) over ctx 0; the image is weakened under the binder
        let img = Term::con(abs, [Term::con(app, [Var(0), Var(0)])]);
        let body = Term::con(abs, [Term::con(app, [Var(0), Var(1)])]);
        let out = subst(&s, &SubstMap::new(0, vec![img]), &body);
        assert_eq!(
            out,
            Term::con(
                abs,
                [Term::con(
                    app,
                    [Term::con(abs, [Term::con(app, [Var(1), Var(1)])]), Var(0)]
                )]
            )
        );
        assert!(scope_check(&s, 0, &out));
    }

    #[test]
    fn weaken_examples() {
        let (s, _, abs) = lambda();
        let t = Term::con(abs, [Var(1)]);
        assert_eq!(weaken_term(&s, 1, &t, 0), t);
        assert_eq!(weaken_term(&s, 1, &Var(0), 2), Var(0));
        assert_eq!(weaken_term(&s, 1, &t, 1), Term::con(abs, [Var(2)]));
    }

    #[test]
    fn strengthen_inverts_weaken() {
        let (s, app, abs) = lambda();
        let t = Term::con(abs, [Term::con(app, [Var(0), Var(1)])]);
        let w = weaken_term(&s, 1, &t, 1);
        assert_eq!(strengthen(&s, 1, &w), Some(t));
        assert_eq!(strengthen(&s, 1, &Term::con(app, [Var(1), Var(0)])), None);
    }

    #[test]
    fn checked_variants_report_scope() {
        let (s, _, _) = lambda();
        assert_eq!(
            subst_checked(&s, &SubstMap::unit(1), &Var(3)),
            Err(ScopeError::Term { ctx: 1 })
        );
        assert_eq!(
            subst_checked(&s, &SubstMap::new(1, vec![Var(5)]), &Var(0)),
            Err(ScopeError::MapEntry { index: 0, target: 1 })
        );
        assert!(rename_checked(&s, &Renaming::identity(0), &Var(0)).is_err());
        assert!(subst1_checked(&s, 0, &Var(0), &Var(0)).is_err());
        assert!(SubstMap::checked(&s, 0, vec![Var(0)]).is_err());
    }

    #[test]
    fn paths() {
        let (_, app, abs) = lambda();
        let t = Term::con(app, [Term::con(abs, [Var(1)]), Var(0)]);
        assert_eq!(t.at(&[0, 0]), Some(&Var(1)));
        assert_eq!(t.at(&[1, 0]), None);
        assert_eq!(
            t.replace_at(&[1], Var(7)),
            Term::con(app, [Term::con(abs, [Var(1)]), Var(7)])
        );
        assert_eq!(t.size(), 4);
        assert_eq!(t.occurrences(0), 1);
    }
}
