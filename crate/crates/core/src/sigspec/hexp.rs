//! Half-equation expressions: a typed combinator language for module
//! morphisms that are defined uniformly over every model.

use std::fmt;

use thiserror::Error;

use super::{ModDescriptor, OpId, Signature1};
use crate::sexp::{self, Pos, Sexp};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum HExp {
    /// Identity; the descriptor is inferred from the ambient domain when absent.
    Id(Option<ModDescriptor>),
    /// `Comp(a, b)` runs `a` then `b`.
    Comp(Box<HExp>, Box<HExp>),
    Pair(Vec<HExp>),
    Proj(usize),
    Ctor(OpId),
    /// Single-variable substitution `[1,0] -> [0]`.
    Subst1,
    /// Renaming along the inclusion `[k] -> [k+1]`.
    Weaken,
    /// The fresh variable, `[] -> [1]`.
    Fresh,
    /// Unique map into the terminal module.
    Bang(Option<ModDescriptor>),
    /// The same morphism one context further in.
    Deriv(Box<HExp>),
}

impl HExp {
    pub fn comp(a: HExp, b: HExp) -> HExp {
        HExp::Comp(Box::new(a), Box::new(b))
    }

    pub fn deriv(a: HExp) -> HExp {
        HExp::Deriv(Box::new(a))
    }

    /// Renders in the s-expression surface syntax.
    pub fn display<'a>(&'a self, sig: &'a Signature1) -> impl fmt::Display + 'a {
        DisplayHExp { e: self, sig }
    }

    /// Whether the expression contains a constructor.
    pub fn has_ctor(&self) -> bool {
        match self {
            HExp::Ctor(_) => true,
            HExp::Comp(a, b) => a.has_ctor() || b.has_ctor(),
            HExp::Pair(es) => es.iter().any(HExp::has_ctor),
            HExp::Deriv(a) => a.has_ctor(),
            _ => false,
        }
    }
}

struct DisplayHExp<'a> {
    e: &'a HExp,
    sig: &'a Signature1,
}

impl fmt::Display for DisplayHExp<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |e| DisplayHExp { e, sig: self.sig };
        let slots = |f: &mut fmt::Formatter<'_>, d: &ModDescriptor| -> fmt::Result {
            for n in d.slots() {
                write!(f, " {n}")?;
            }
            Ok(())
        };
        match self.e {
            HExp::Id(None) => write!(f, "(id)"),
            HExp::Id(Some(d)) => {
                write!(f, "(id")?;
                slots(f, d)?;
                write!(f, ")")
            }
            HExp::Bang(None) => write!(f, "(bang)"),
            HExp::Bang(Some(d)) => {
                write!(f, "(bang")?;
                slots(f, d)?;
                write!(f, ")")
            }
            HExp::Comp(a, b) => write!(f, "(comp {} {})", sub(a), sub(b)),
            HExp::Pair(es) => {
                write!(f, "(pair")?;
                for e in es {
                    write!(f, " {}", sub(e))?;
                }
                write!(f, ")")
            }
            HExp::Proj(j) => write!(f, "(proj {j})"),
            HExp::Ctor(op) if self.sig.contains(*op) => write!(f, "(ctor {})", self.sig.name(*op)),
            HExp::Ctor(op) => write!(f, "(ctor #{})", op.0),
            HExp::Subst1 => write!(f, "subst"),
            HExp::Weaken => write!(f, "weaken"),
            HExp::Fresh => write!(f, "fresh"),
            HExp::Deriv(a) => write!(f, "(deriv {})", sub(a)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct HExpSyntaxError {
    pub pos: Pos,
    pub msg: String,
}

impl From<sexp::SexpError> for HExpSyntaxError {
    fn from(e: sexp::SexpError) -> Self {
        HExpSyntaxError { pos: e.pos, msg: e.msg }
    }
}

/// Parses the s-expression form, resolving constructor names against `sig`.
pub fn parse_hexp(sig: &Signature1, src: &str) -> Result<HExp, HExpSyntaxError> {
    let s = sexp::parse(src)?;
    from_sexp(sig, &s)
}

fn from_sexp(sig: &Signature1, s: &Sexp) -> Result<HExp, HExpSyntaxError> {
    let err = |pos, msg: String| HExpSyntaxError { pos, msg };
    match s {
        Sexp::Atom(a, pos) => match a.as_str() {
            "subst" => Ok(HExp::Subst1),
            "weaken" => Ok(HExp::Weaken),
            "fresh" => Ok(HExp::Fresh),
            "id" => Ok(HExp::Id(None)),
            "bang" => Ok(HExp::Bang(None)),
            other => Err(err(*pos, format!("unknown atom `{other}`"))),
        },
        Sexp::List(items, pos) => {
            let Some((head, args)) = items.split_first() else {
                return Err(err(*pos, "empty list".into()));
            };
            let Some(head) = head.as_atom() else {
                return Err(err(*pos, "expected a combinator name".into()));
            };
            let arity = |n: usize| {
                if args.len() == n {
                    Ok(())
                } else {
                    Err(err(*pos, format!("`{head}` takes {n} argument(s), got {}", args.len())))
                }
            };
            let nat = |s: &Sexp| -> Result<usize, HExpSyntaxError> {
                s.as_atom()
                    .and_then(|a| a.parse::<usize>().ok())
                    .ok_or_else(|| err(s.pos(), "expected a natural number".into()))
            };
            let descriptor = || -> Result<Option<ModDescriptor>, HExpSyntaxError> {
                if args.is_empty() {
                    return Ok(None);
                }
                // `(id 0)` with explicit slots; the empty list `(id)` stays inferred.
                Ok(Some(ModDescriptor(args.iter().map(nat).collect::<Result<_, _>>()?)))
            };
            match head {
                "comp" => {
                    arity(2)?;
                    Ok(HExp::comp(from_sexp(sig, &args[0])?, from_sexp(sig, &args[1])?))
                }
                "pair" => Ok(HExp::Pair(
                    args.iter().map(|a| from_sexp(sig, a)).collect::<Result<_, _>>()?,
                )),
                "proj" => {
                    arity(1)?;
                    Ok(HExp::Proj(nat(&args[0])?))
                }
                "ctor" => {
                    arity(1)?;
                    let name = args[0]
                        .as_atom()
                        .ok_or_else(|| err(args[0].pos(), "expected an operator name".into()))?;
                    sig.lookup(name)
                        .map(HExp::Ctor)
                        .ok_or_else(|| err(args[0].pos(), format!("unknown operator `{name}`")))
                }
                "deriv" => {
                    arity(1)?;
                    Ok(HExp::deriv(from_sexp(sig, &args[0])?))
                }
                "id" => Ok(HExp::Id(descriptor()?)),
                "bang" => Ok(HExp::Bang(descriptor()?)),
                "subst" | "weaken" | "fresh" => {
                    arity(0)?;
                    from_sexp(sig, &Sexp::Atom(head.to_string(), *pos))
                }
                other => Err(err(*pos, format!("unknown combinator `{other}`"))),
            }
        }
    }
}

/// Domain and codomain of a well-typed expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Typing {
    pub dom: ModDescriptor,
    pub cod: ModDescriptor,
}

/// An ill-typed subexpression. `path` lists child indices from the root
/// (`comp` children are 0 and 1, `pair` children by position, `deriv` is 0).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("at {}: expected {expected}, found {found}", fmt_path(.path))]
pub struct ShapeError {
    pub path: Vec<usize>,
    pub expected: String,
    pub found: String,
}

fn fmt_path(path: &[usize]) -> String {
    if path.is_empty() {
        return "root".into();
    }
    path.iter().map(|i| format!("/{i}")).collect()
}

/// Synthesises the unique typing of `e`. `ambient` fixes the domain where the
/// expression alone does not (`id`, `proj`, `weaken`, `bang`, `pair`).
pub fn shape_check(sig: &Signature1, e: &HExp, ambient: Option<&ModDescriptor>) -> Result<Typing, ShapeError> {
    let mut path = Vec::new();
    synth(sig, e, ambient, &mut path)
}

fn shape_err(path: &[usize], expected: impl Into<String>, found: impl Into<String>) -> ShapeError {
    ShapeError {
        path: path.to_vec(),
        expected: expected.into(),
        found: found.into(),
    }
}

fn fixed_dom(path: &[usize], ambient: Option<&ModDescriptor>, dom: ModDescriptor) -> Result<ModDescriptor, ShapeError> {
    match ambient {
        Some(a) if *a != dom => Err(shape_err(path, format!("domain {a}"), format!("domain {dom}"))),
        _ => Ok(dom),
    }
}

fn need_ambient<'a>(
    path: &[usize],
    ambient: Option<&'a ModDescriptor>,
    what: &str,
) -> Result<&'a ModDescriptor, ShapeError> {
    ambient.ok_or_else(|| {
        shape_err(
            path,
            "a known domain",
            format!("`{what}` with nothing to infer it from"),
        )
    })
}

fn synth(
    sig: &Signature1,
    e: &HExp,
    ambient: Option<&ModDescriptor>,
    path: &mut Vec<usize>,
) -> Result<Typing, ShapeError> {
    let typing = |dom: ModDescriptor, cod: ModDescriptor| Ok(Typing { dom, cod });
    match e {
        HExp::Id(Some(d)) => {
            let d = fixed_dom(path, ambient, d.clone())?;
            typing(d.clone(), d)
        }
        HExp::Id(None) => {
            let d = need_ambient(path, ambient, "id")?;
            typing(d.clone(), d.clone())
        }
        HExp::Bang(Some(d)) => typing(fixed_dom(path, ambient, d.clone())?, ModDescriptor::terminal()),
        HExp::Bang(None) => typing(need_ambient(path, ambient, "bang")?.clone(), ModDescriptor::terminal()),
        HExp::Comp(a, b) => {
            path.push(0);
            let ta = synth(sig, a, ambient, path)?;
            path.pop();
            path.push(1);
            let tb = synth(sig, b, Some(&ta.cod), path)?;
            path.pop();
            typing(ta.dom, tb.cod)
        }
        HExp::Pair(es) => {
            let mut dom = ambient.cloned();
            let mut cod = Vec::new();
            for (i, c) in es.iter().enumerate() {
                path.push(i);
                let t = synth(sig, c, dom.as_ref(), path)?;
                path.pop();
                dom = Some(t.dom);
                cod.extend(t.cod.0);
            }
            let dom =
                dom.ok_or_else(|| shape_err(path, "a known domain", "empty `pair` with nothing to infer it from"))?;
            typing(dom, ModDescriptor(cod))
        }
        HExp::Proj(j) => {
            let d = need_ambient(path, ambient, "proj")?;
            match d.slots().get(*j) {
                Some(&n) => typing(d.clone(), ModDescriptor(vec![n])),
                None => Err(shape_err(
                    path,
                    format!("a slot index below {}", d.len()),
                    format!("proj {j}"),
                )),
            }
        }
        HExp::Ctor(op) => {
            if !sig.contains(*op) {
                return Err(shape_err(path, "a declared operator", format!("operator #{}", op.0)));
            }
            let d = fixed_dom(path, ambient, ModDescriptor(sig.arity(*op).to_vec()))?;
            typing(d, ModDescriptor(vec![0]))
        }
        HExp::Subst1 => typing(
            fixed_dom(path, ambient, ModDescriptor(vec![1, 0]))?,
            ModDescriptor(vec![0]),
        ),
        HExp::Fresh => typing(
            fixed_dom(path, ambient, ModDescriptor::terminal())?,
            ModDescriptor(vec![1]),
        ),
        HExp::Weaken => {
            let d = need_ambient(path, ambient, "weaken")?;
            match d.single() {
                Some(k) => typing(d.clone(), ModDescriptor(vec![k + 1])),
                None => Err(shape_err(path, "a single-slot domain", format!("domain {d}"))),
            }
        }
        HExp::Deriv(a) => {
            let inner = match ambient {
                Some(d) => Some(
                    d.underived()
                        .ok_or_else(|| shape_err(path, "a domain with every slot >= 1", format!("domain {d}")))?,
                ),
                None => None,
            };
            path.push(0);
            let t = synth(sig, a, inner.as_ref(), path)?;
            path.pop();
            typing(t.dom.derived(), t.cod.derived())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("`{0}` cannot appear in a rewrite pattern")]
    Forbidden(&'static str),
    #[error("domain slot {slot} is not bound by the pattern")]
    Unbound { slot: usize },
    #[error("domain slot {slot} is bound {count} times; patterns must be linear")]
    NonLinear { slot: usize, count: u32 },
    #[error(transparent)]
    Shape(#[from] ShapeError),
}

/// Checks the matching discipline: only invertible combinators, and every
/// domain slot reaches the output exactly once.
pub fn check_pattern(sig: &Signature1, e: &HExp, dom: &ModDescriptor) -> Result<(), PatternError> {
    let (_, flow) = flow(sig, e, dom)?;
    for (slot, row) in flow.iter().enumerate() {
        match row.iter().sum::<u32>() {
            0 => return Err(PatternError::Unbound { slot }),
            1 => {}
            count => return Err(PatternError::NonLinear { slot, count }),
        }
    }
    Ok(())
}

/// Usage counts: entry `[i][c]` says how often domain slot `i` flows into codomain slot `c`.
type Flow = Vec<Vec<u32>>;

fn flow(sig: &Signature1, e: &HExp, dom: &ModDescriptor) -> Result<(ModDescriptor, Flow), PatternError> {
    let m = dom.len();
    let cod = shape_check(sig, e, Some(dom))?.cod;
    let zeros = |cols: usize| vec![vec![0u32; cols]; m];
    let matrix = match e {
        HExp::Id(_) => {
            let mut f = zeros(m);
            for (i, row) in f.iter_mut().enumerate() {
                row[i] = 1;
            }
            f
        }
        HExp::Bang(_) | HExp::Fresh => zeros(cod.len()),
        HExp::Proj(j) => {
            let mut f = zeros(1);
            f[*j][0] = 1;
            f
        }
        HExp::Ctor(_) | HExp::Weaken => vec![vec![1]; m],
        HExp::Subst1 => return Err(PatternError::Forbidden("subst")),
        HExp::Deriv(a) => {
            let inner = dom.underived().expect("typed above");
            flow(sig, a, &inner)?.1
        }
        HExp::Pair(es) => {
            let mut f: Flow = vec![Vec::new(); m];
            for c in es {
                let (_, g) = flow(sig, c, dom)?;
                for (row, grow) in f.iter_mut().zip(g) {
                    row.extend(grow);
                }
            }
            f
        }
        HExp::Comp(a, b) => {
            let (mid, fa) = flow(sig, a, dom)?;
            let (_, fb) = flow(sig, b, &mid)?;
            fa.iter()
                .map(|row| {
                    (0..cod.len())
                        .map(|c| row.iter().zip(&fb).map(|(x, brow)| x * brow[c]).sum())
                        .collect()
                })
                .collect()
        }
    };
    Ok((cod, matrix))
}
