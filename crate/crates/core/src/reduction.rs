//! The reduction preorder of a 2-signature, operationally: one-step
//! rewriting by inequation instances, closed under congruence, queried by
//! fuel-bounded search.
//!
//! Inequations are oriented: the declared pattern side is matched, the other
//! side is the contractum.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::halfeq::eval_hexp;
use crate::modalg::ProdElem;
use crate::models::{BuiltinModel, Order};
use crate::sample::Sampler;
use crate::sigspec::{check_pattern, shape_check, HExp, ModDescriptor, OpId, PatternError, Signature1, Signature2};
use crate::term::{print_term, strengthen, Ctx, Term};

/// Path of argument indices from the root.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Position(pub Vec<usize>);

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "root");
        }
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "{}", parts.join("."))
    }
}

/// An instance of an inequation's pattern side inside a term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Redex {
    pub pos: Position,
    pub ineq: usize,
    /// Matched tuple at the inequation's domain.
    pub binding: ProdElem<Term>,
}

/// A pattern with every node annotated by its typing.
#[derive(Debug, Clone)]
pub struct CompiledPattern {
    root: Node,
    cod: usize,
}

#[derive(Debug, Clone)]
struct Node {
    dom: ModDescriptor,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Id,
    Bang,
    Proj(usize),
    Ctor(OpId),
    Weaken,
    Fresh,
    Pair(Vec<(Node, usize)>),
    Comp(Box<Node>, Box<Node>),
    Deriv(Box<Node>),
}

type Partial = Vec<Option<Term>>;

impl CompiledPattern {
    /// Checks the pattern discipline and annotates the tree.
    pub fn new(sig: &Signature1, pattern: &HExp, dom: &ModDescriptor) -> Result<Self, PatternError> {
        check_pattern(sig, pattern, dom)?;
        let cod = shape_check(sig, pattern, Some(dom))?
            .cod
            .single()
            .ok_or(PatternError::Forbidden("multi-slot codomain"))?;
        Ok(CompiledPattern {
            root: compile(sig, pattern, dom)?,
            cod,
        })
    }

    pub fn dom(&self) -> &ModDescriptor {
        &self.root.dom
    }

    /// Decomposes `t` (over `t_ctx`) along the pattern. The binding lives at
    /// `t_ctx - k` for a pattern landing in `[k]`.
    pub fn matches(&self, sig: &Signature1, t_ctx: Ctx, t: &Term) -> Option<ProdElem<Term>> {
        let ctx = t_ctx.checked_sub(self.cod)?;
        let values = invert(sig, &self.root, ctx, vec![Some(t.clone())])?
            .into_iter()
            .collect::<Option<Vec<_>>>()?;
        Some(ProdElem::new(self.root.dom.clone(), ctx, values))
    }
}

fn compile(sig: &Signature1, e: &HExp, dom: &ModDescriptor) -> Result<Node, PatternError> {
    let kind = match e {
        HExp::Id(_) => Kind::Id,
        HExp::Bang(_) => Kind::Bang,
        HExp::Proj(j) => Kind::Proj(*j),
        HExp::Ctor(op) => Kind::Ctor(*op),
        HExp::Weaken => Kind::Weaken,
        HExp::Fresh => Kind::Fresh,
        HExp::Subst1 => return Err(PatternError::Forbidden("subst")),
        HExp::Pair(es) => Kind::Pair(
            es.iter()
                .map(|c| {
                    let width = shape_check(sig, c, Some(dom))?.cod.len();
                    Ok((compile(sig, c, dom)?, width))
                })
                .collect::<Result<_, PatternError>>()?,
        ),
        HExp::Comp(a, b) => {
            let mid = shape_check(sig, a, Some(dom))?.cod;
            Kind::Comp(Box::new(compile(sig, a, dom)?), Box::new(compile(sig, b, &mid)?))
        }
        HExp::Deriv(a) => {
            let inner = dom
                .underived()
                .ok_or(PatternError::Forbidden("deriv at a degree-0 slot"))?;
            Kind::Deriv(Box::new(compile(sig, a, &inner)?))
        }
    };
    Ok(Node { dom: dom.clone(), kind })
}

/// Runs a node backwards: from (partially known) outputs at context `ctx` to
/// (partially known) inputs. `None` means the outputs are not in the image.
fn invert(sig: &Signature1, node: &Node, ctx: Ctx, out: Partial) -> Option<Partial> {
    let width = node.dom.len();
    let unknown = || vec![None; width];
    match &node.kind {
        Kind::Id => Some(out),
        Kind::Bang => Some(unknown()),
        Kind::Proj(j) => {
            let mut v = unknown();
            v[*j] = out.into_iter().next()?;
            Some(v)
        }
        Kind::Ctor(op) => match out.into_iter().next()? {
            None => Some(unknown()),
            Some(Term::Con(head, args)) if head == *op => Some(args.into_iter().map(Some).collect()),
            Some(_) => None,
        },
        Kind::Weaken => match out.into_iter().next()? {
            None => Some(unknown()),
            Some(t) => {
                let k = node.dom.slots()[0];
                Some(vec![Some(strengthen(sig, ctx + k, &t)?)])
            }
        },
        Kind::Fresh => match out.into_iter().next()? {
            Some(Term::Var(v)) if v == ctx => Some(Vec::new()),
            None => Some(Vec::new()),
            Some(_) => None,
        },
        Kind::Pair(parts) => {
            let mut acc = unknown();
            let mut rest = out.into_iter();
            for (child, w) in parts {
                let chunk: Partial = rest.by_ref().take(*w).collect();
                merge(&mut acc, invert(sig, child, ctx, chunk)?)?;
            }
            Some(acc)
        }
        Kind::Comp(a, b) => {
            let mid = invert(sig, b, ctx, out)?;
            invert(sig, a, ctx, mid)
        }
        Kind::Deriv(a) => invert(sig, a, ctx + 1, out),
    }
}

fn merge(acc: &mut Partial, more: Partial) -> Option<()> {
    for (slot, v) in acc.iter_mut().zip(more) {
        match (slot.as_ref(), v) {
            (_, None) => {}
            (None, Some(v)) => *slot = Some(v),
            (Some(a), Some(b)) if *a == b => {}
            _ => return None,
        }
    }
    Some(())
}

/// Matches `pattern` (with domain `dom`) against `t` over `t_ctx`.
pub fn match_pattern(
    sig: &Signature1,
    pattern: &HExp,
    dom: &ModDescriptor,
    t_ctx: Ctx,
    t: &Term,
) -> Result<Option<ProdElem<Term>>, PatternError> {
    Ok(CompiledPattern::new(sig, pattern, dom)?.matches(sig, t_ctx, t))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    /// The first redex in `redexes` order: shallowest, then leftmost.
    Outermost,
    /// Leftmost among redexes containing no other redex.
    Innermost,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEntry {
    pub term: Term,
    /// The redex whose contraction produced `term`; `None` for the start term.
    pub redex: Option<(Position, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormStatus {
    NormalForm,
    FuelExhausted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Normalization {
    pub status: NormStatus,
    pub term: Term,
    pub trace: Vec<TraceEntry>,
    pub steps: usize,
}

/// Result of a reachability query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeqOutcome {
    /// `Yes` or `Unknown`; never `No`.
    pub answer: Order,
    /// The reduction path from `x` to `y` when the answer is `Yes`.
    pub path: Option<Vec<Term>>,
    /// Distinct terms seen.
    pub visited: usize,
    /// Whether the whole reachable set was explored.
    pub exhausted: bool,
}

/// Rewriting engine for one 2-signature; compiles the patterns once.
pub struct Rewriter<'a> {
    sig2: &'a Signature2,
    patterns: Vec<CompiledPattern>,
}

impl<'a> Rewriter<'a> {
    pub fn new(sig2: &'a Signature2) -> Self {
        let patterns = sig2
            .ineqs()
            .iter()
            .map(|q| CompiledPattern::new(&sig2.sig, q.pattern(), &q.dom).expect("patterns are checked at load"))
            .collect();
        Rewriter { sig2, patterns }
    }

    pub fn signature(&self) -> &'a Signature2 {
        self.sig2
    }

    /// All redexes, shallowest first and left to right within a depth; at
    /// one position, inequations in declaration order.
    pub fn redexes(&self, n: Ctx, t: &Term) -> Vec<Redex> {
        let mut out = Vec::new();
        self.collect(n, t, &mut Vec::new(), Strategy::Outermost, &mut out);
        // pre-order is already lexicographic within a depth
        out.sort_by_key(|r| r.pos.0.len());
        out
    }

    fn redexes_in(&self, n: Ctx, t: &Term, strategy: Strategy) -> Vec<Redex> {
        match strategy {
            Strategy::Outermost => self.redexes(n, t),
            Strategy::Innermost => {
                let mut out = Vec::new();
                self.collect(n, t, &mut Vec::new(), strategy, &mut out);
                out
            }
        }
    }

    fn collect(&self, ctx: Ctx, t: &Term, path: &mut Vec<usize>, strategy: Strategy, out: &mut Vec<Redex>) {
        let sig = &self.sig2.sig;
        if strategy == Strategy::Outermost {
            self.here(ctx, t, path, out);
        }
        if let Term::Con(op, args) = t {
            for (k, (a, b)) in args.iter().zip(sig.arity(*op)).enumerate() {
                path.push(k);
                self.collect(ctx + b, a, path, strategy, out);
                path.pop();
            }
        }
        if strategy == Strategy::Innermost {
            self.here(ctx, t, path, out);
        }
    }

    fn here(&self, ctx: Ctx, t: &Term, path: &[usize], out: &mut Vec<Redex>) {
        for (ineq, p) in self.patterns.iter().enumerate() {
            if let Some(binding) = p.matches(&self.sig2.sig, ctx, t) {
                out.push(Redex {
                    pos: Position(path.to_vec()),
                    ineq,
                    binding,
                });
            }
        }
    }

    /// The contractum of `r`: the non-pattern side evaluated on the binding.
    pub fn contractum(&self, r: &Redex) -> Term {
        let q = &self.sig2.ineqs()[r.ineq];
        let syntax = BuiltinModel::discrete(&self.sig2.sig);
        let mut out = eval_hexp(&syntax, q.contractum(), &r.binding).expect("inequations are shape-checked at load");
        out.values.pop().expect("single-slot codomain")
    }

    pub fn contract(&self, t: &Term, r: &Redex) -> Term {
        t.replace_at(&r.pos.0, self.contractum(r))
    }

    /// One result per redex, in redex order, duplicates removed.
    pub fn step(&self, n: Ctx, t: &Term) -> Vec<Term> {
        let mut seen = HashSet::new();
        self.redexes(n, t)
            .iter()
            .map(|r| self.contract(t, r))
            .filter(|u| seen.insert(u.clone()))
            .collect()
    }

    /// Breadth-first search from `x` for `y`, expanding at most `fuel` terms.
    pub fn leq(&self, n: Ctx, x: &Term, y: &Term, fuel: usize) -> LeqOutcome {
        if x == y {
            return LeqOutcome {
                answer: Order::Yes,
                path: Some(vec![x.clone()]),
                visited: 1,
                exhausted: false,
            };
        }
        let mut parent: HashMap<Term, Option<Term>> = HashMap::new();
        parent.insert(x.clone(), None);
        let mut queue = VecDeque::from([x.clone()]);
        let mut expansions = 0;
        while expansions < fuel {
            let Some(cur) = queue.pop_front() else {
                return LeqOutcome {
                    answer: Order::Unknown,
                    path: None,
                    visited: parent.len(),
                    exhausted: true,
                };
            };
            expansions += 1;
            for next in self.step(n, &cur) {
                if parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some(cur.clone()));
                if next == *y {
                    let mut path = vec![next];
                    while let Some(Some(p)) = parent.get(path.last().unwrap()) {
                        path.push(p.clone());
                    }
                    path.reverse();
                    return LeqOutcome {
                        answer: Order::Yes,
                        path: Some(path),
                        visited: parent.len(),
                        exhausted: false,
                    };
                }
                queue.push_back(next);
            }
        }
        LeqOutcome {
            answer: Order::Unknown,
            path: None,
            visited: parent.len(),
            exhausted: queue.is_empty(),
        }
    }

    /// Contracts the first redex in strategy order until none is left or
    /// `fuel` contractions have been made. Redexes of constructor-free
    /// patterns whose contractum equals the redex are skipped.
    pub fn normalize(&self, n: Ctx, t: &Term, strategy: Strategy, fuel: usize) -> Normalization {
        let mut cur = t.clone();
        let mut trace = vec![TraceEntry {
            term: cur.clone(),
            redex: None,
        }];
        let mut steps = 0;
        loop {
            let chosen = self.redexes_in(n, &cur, strategy).into_iter().find_map(|r| {
                let c = self.contractum(&r);
                let degenerate = !self.sig2.ineqs()[r.ineq].pattern().has_ctor();
                if degenerate && cur.at(&r.pos.0) == Some(&c) {
                    None
                } else {
                    Some((r, c))
                }
            });
            let Some((r, c)) = chosen else {
                return Normalization {
                    status: NormStatus::NormalForm,
                    term: cur,
                    trace,
                    steps,
                };
            };
            if steps == fuel {
                return Normalization {
                    status: NormStatus::FuelExhausted,
                    term: cur,
                    trace,
                    steps,
                };
            }
            cur = cur.replace_at(&r.pos.0, c);
            steps += 1;
            trace.push(TraceEntry {
                term: cur.clone(),
                redex: Some((r.pos, r.ineq)),
            });
        }
    }
}

pub fn redexes(sig2: &Signature2, n: Ctx, t: &Term) -> Vec<Redex> {
    Rewriter::new(sig2).redexes(n, t)
}

pub fn step(sig2: &Signature2, n: Ctx, t: &Term) -> Vec<Term> {
    Rewriter::new(sig2).step(n, t)
}

pub fn leq(sig2: &Signature2, n: Ctx, x: &Term, y: &Term, fuel: usize) -> LeqOutcome {
    Rewriter::new(sig2).leq(n, x, y, fuel)
}

pub fn normalize(sig2: &Signature2, n: Ctx, t: &Term, strategy: Strategy, fuel: usize) -> Normalization {
    Rewriter::new(sig2).normalize(n, t, strategy, fuel)
}

/// One line of a serialised trace.
#[derive(Debug, Clone, Serialize)]
pub struct TraceLine {
    pub step: usize,
    pub position: Option<Vec<usize>>,
    pub inequation: Option<String>,
    pub term: String,
}

pub fn trace_lines(sig2: &Signature2, context: &[String], trace: &[TraceEntry]) -> Vec<TraceLine> {
    trace
        .iter()
        .enumerate()
        .map(|(step, e)| TraceLine {
            step,
            position: e.redex.as_ref().map(|(p, _)| p.0.clone()),
            inequation: e.redex.as_ref().map(|(_, q)| sig2.ineqs()[*q].name.clone()),
            term: print_term(&sig2.sig, context, &e.term),
        })
        .collect()
}

/// A random term with at least one redex, paired with one of its one-step
/// reducts. The redex is an instance of a random inequation placed under a
/// random stack of constructors.
pub fn sample_step(sig2: &Signature2, g: &mut Sampler<'_>) -> Option<(Ctx, Term, Term)> {
    let n = g.ctx(2);
    sample_step_in(sig2, g, n)
}

/// As `sample_step`, over a given context.
pub fn sample_step_in(sig2: &Signature2, g: &mut Sampler<'_>, n: Ctx) -> Option<(Ctx, Term, Term)> {
    sample_redex_term(sig2, g, n).and_then(|(n, x)| {
        let succ = step(sig2, n, &x);
        if succ.is_empty() {
            return None;
        }
        let y = succ[g.rng().gen_range(0..succ.len())].clone();
        Some((n, x, y))
    })
}

/// A term over `n` that contains an instance of an inequation's pattern.
pub fn sample_redex_term(sig2: &Signature2, g: &mut Sampler<'_>, n: Ctx) -> Option<(Ctx, Term)> {
    const ARG_DEPTH: usize = 3;
    const BINDING_DEPTH: usize = 4;
    let sig = &sig2.sig;
    if sig2.ineqs().is_empty() {
        return None;
    }
    let wrappers: Vec<OpId> = sig.op_ids().filter(|&op| !sig.arity(op).is_empty()).collect();
    let syntax = BuiltinModel::discrete(sig);
    for _ in 0..16 {
        let layers = if wrappers.is_empty() {
            0
        } else {
            g.rng().gen_range(0..=3)
        };
        let mut frames = Vec::new();
        let mut ctx = n;
        for _ in 0..layers {
            let op = wrappers[g.rng().gen_range(0..wrappers.len())];
            let arity = sig.arity(op).to_vec();
            let hole = g.rng().gen_range(0..arity.len());
            let mut args = Vec::with_capacity(arity.len());
            for (k, &b) in arity.iter().enumerate() {
                args.push(if k == hole {
                    None
                } else {
                    Some(g.term_at_depth(ctx + b, ARG_DEPTH)?)
                });
            }
            frames.push((op, args));
            ctx += arity[hole];
        }
        let q = &sig2.ineqs()[g.rng().gen_range(0..sig2.ineqs().len())];
        let Some(base) = ctx.checked_sub(q.cod()) else { continue };
        let Some(values) = q
            .dom
            .slots()
            .iter()
            .map(|&k| g.term_at_depth(base + k, BINDING_DEPTH))
            .collect::<Option<Vec<_>>>()
        else {
            continue;
        };
        let binding = ProdElem::new(q.dom.clone(), base, values);
        let mut t = eval_hexp(&syntax, q.pattern(), &binding)
            .expect("inequations are shape-checked at load")
            .values
            .pop()
            .expect("single-slot codomain");
        for (op, args) in frames.into_iter().rev() {
            let args = args.into_iter().map(|a| a.unwrap_or_else(|| t.clone())).collect();
            t = Term::Con(op, args);
        }
        return Some((n, t));
    }
    None
}
