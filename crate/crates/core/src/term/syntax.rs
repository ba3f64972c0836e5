//! Named surface syntax for terms: `(op arg ...)`, with binding arguments
//! written `(bind (x1 ... xk) body)`. Free variables resolve against a
//! declared context, left to right as indices `0, 1, ...`.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Ctx, Term};
use crate::sexp::{self, is_identifier, Pos, Sexp};
use crate::sigspec::{OpId, Signature1};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{pos}: {msg}")]
pub struct TermSyntaxError {
    pub pos: Pos,
    pub msg: String,
}

impl From<sexp::SexpError> for TermSyntaxError {
    fn from(e: sexp::SexpError) -> Self {
        TermSyntaxError { pos: e.pos, msg: e.msg }
    }
}

fn err(pos: Pos, msg: impl Into<String>) -> TermSyntaxError {
    TermSyntaxError { pos, msg: msg.into() }
}

/// Context names must be distinct identifiers other than `bind`.
pub fn validate_context(names: &[String]) -> Result<(), String> {
    for (i, n) in names.iter().enumerate() {
        if !is_identifier(n) || n == "bind" {
            return Err(format!("invalid variable name `{n}`"));
        }
        if names[..i].contains(n) {
            return Err(format!("variable `{n}` declared twice"));
        }
    }
    Ok(())
}

/// `v0, v1, ...`, used wherever a context has no user-given names.
pub fn canonical_context(n: Ctx) -> Vec<String> {
    (0..n).map(|i| format!("v{i}")).collect()
}

pub fn parse_term(sig: &Signature1, context: &[String], src: &str) -> Result<Term, TermSyntaxError> {
    validate_context(context).map_err(|m| err(Pos { line: 1, col: 1 }, m))?;
    let s = sexp::parse(src)?;
    let mut scope: Vec<&str> = context.iter().map(String::as_str).collect();
    from_sexp(sig, &mut scope, &s)
}

fn from_sexp<'s>(sig: &Signature1, scope: &mut Vec<&'s str>, s: &'s Sexp) -> Result<Term, TermSyntaxError> {
    match s {
        Sexp::Atom(a, pos) => {
            if let Some(i) = scope.iter().rposition(|n| n == a) {
                return Ok(Term::Var(i));
            }
            match sig.lookup(a) {
                Some(op) if sig.arity(op).is_empty() => Ok(Term::Con(op, Vec::new())),
                Some(_) => Err(err(*pos, format!("operator `{a}` needs arguments"))),
                None => Err(err(*pos, format!("unbound variable `{a}`"))),
            }
        }
        Sexp::List(items, pos) => {
            let Some((head, args)) = items.split_first() else {
                return Err(err(*pos, "empty application"));
            };
            let Some(name) = head.as_atom() else {
                return Err(err(head.pos(), "expected an operator name"));
            };
            if name == "bind" {
                return Err(err(*pos, "`bind` is only allowed as an operator argument"));
            }
            let op = sig
                .lookup(name)
                .ok_or_else(|| err(head.pos(), format!("unknown operator `{name}`")))?;
            let arity = sig.arity(op);
            if arity.len() != args.len() {
                return Err(err(
                    *pos,
                    format!("`{name}` takes {} argument(s), got {}", arity.len(), args.len()),
                ));
            }
            let mut out = Vec::with_capacity(args.len());
            for (arg, &k) in args.iter().zip(arity) {
                out.push(argument(sig, scope, arg, k, name)?);
            }
            Ok(Term::Con(op, out))
        }
    }
}

fn argument<'s>(
    sig: &Signature1,
    scope: &mut Vec<&'s str>,
    arg: &'s Sexp,
    k: usize,
    op: &str,
) -> Result<Term, TermSyntaxError> {
    let binder = match arg {
        Sexp::List(items, pos) if items.first().and_then(Sexp::as_atom) == Some("bind") => Some((items, *pos)),
        _ => None,
    };
    let Some((items, pos)) = binder else {
        if k > 0 {
            return Err(err(
                arg.pos(),
                format!("argument of `{op}` binds {k} variable(s); write `(bind (...) body)`"),
            ));
        }
        return from_sexp(sig, scope, arg);
    };
    let [_, Sexp::List(names, _), body] = items.as_slice() else {
        return Err(err(pos, "expected `(bind (x ...) body)`"));
    };
    if names.len() != k {
        return Err(err(
            pos,
            format!("argument of `{op}` binds {k} variable(s), got {}", names.len()),
        ));
    }
    let base = scope.len();
    for n in names {
        match n.as_atom() {
            Some(a) if is_identifier(a) && a != "bind" => {
                if scope[base..].contains(&a) {
                    scope.truncate(base);
                    return Err(err(n.pos(), format!("`{a}` bound twice")));
                }
                scope.push(a);
            }
            _ => {
                scope.truncate(base);
                return Err(err(n.pos(), "expected a variable name"));
            }
        }
    }
    let t = from_sexp(sig, scope, body);
    scope.truncate(base);
    t
}

/// Prints `t` (over `context.len()` variables). Binder names are chosen fresh
/// with respect to every visible name, so the output re-parses to `t`.
pub fn print_term(sig: &Signature1, context: &[String], t: &Term) -> String {
    let mut names: Vec<String> = context.to_vec();
    let mut out = String::new();
    print(sig, &mut names, t, &mut out);
    out
}

fn fresh_name(names: &[String]) -> String {
    const BASE: [&str; 6] = ["x", "y", "z", "w", "u", "v"];
    for round in 0.. {
        for b in BASE {
            let cand = if round == 0 {
                b.to_string()
            } else {
                format!("{b}{round}")
            };
            if !names.contains(&cand) {
                return cand;
            }
        }
    }
    unreachable!()
}

fn print(sig: &Signature1, names: &mut Vec<String>, t: &Term, out: &mut String) {
    match t {
        Term::Var(i) => match names.get(*i) {
            Some(n) => out.push_str(n),
            None => {
                let _ = write!(out, "?{i}");
            }
        },
        Term::Con(op, args) => {
            out.push('(');
            out.push_str(op_name(sig, *op).as_str());
            for (a, &k) in args.iter().zip(sig.arity(*op)) {
                out.push(' ');
                if k == 0 {
                    print(sig, names, a, out);
                    continue;
                }
                let base = names.len();
                out.push_str("(bind (");
                for j in 0..k {
                    let n = fresh_name(names);
                    if j > 0 {
                        out.push(' ');
                    }
                    out.push_str(&n);
                    names.push(n);
                }
                out.push_str(") ");
                print(sig, names, a, out);
                out.push(')');
                names.truncate(base);
            }
            out.push(')');
        }
    }
}

fn op_name(sig: &Signature1, op: OpId) -> String {
    if sig.contains(op) {
        sig.name(op).to_string()
    } else {
        format!("#{}", op.0)
    }
}
