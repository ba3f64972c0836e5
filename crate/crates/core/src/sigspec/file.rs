//! The JSON signature file format.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::hexp::{parse_hexp, HExpSyntaxError, PatternError, ShapeError};
use super::{Arity, Inequation, ModDescriptor, OpDecl, PatternSide, Signature1, Signature2};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SigFile {
    name: String,
    ops: Vec<OpFile>,
    #[serde(default)]
    inequations: Vec<IneqFile>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct OpFile {
    name: String,
    arity: Vec<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct IneqFile {
    name: String,
    dom: Vec<usize>,
    pattern_side: SideFile,
    lhs: String,
    rhs: String,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum SideFile {
    Lhs,
    Rhs,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ValidationError {
    #[error("invalid name `{0}`")]
    BadName(String),
    #[error("duplicate operator `{0}`")]
    DuplicateOp(String),
    #[error("duplicate inequation `{0}`")]
    DuplicateIneq(String),
    #[error("inequation `{ineq}`, {side}: {err}")]
    HExpSyntax {
        ineq: String,
        side: &'static str,
        err: HExpSyntaxError,
    },
    #[error("inequation `{ineq}`, {side}: {err}")]
    Shape {
        ineq: String,
        side: &'static str,
        err: ShapeError,
    },
    #[error("inequation `{ineq}`, {side}: declared domain {declared} but the expression has domain {found}")]
    DomMismatch {
        ineq: String,
        side: &'static str,
        declared: ModDescriptor,
        found: ModDescriptor,
    },
    #[error("inequation `{ineq}`, {side}: codomain {cod} is not a single slot")]
    NotSingleSlot {
        ineq: String,
        side: &'static str,
        cod: ModDescriptor,
    },
    #[error("inequation `{ineq}`: sides land in [{lhs}] and [{rhs}]")]
    CodMismatch { ineq: String, lhs: usize, rhs: usize },
    #[error("inequation `{ineq}`: bad pattern: {err}")]
    Pattern { ineq: String, err: PatternError },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("invalid signature: {0}")]
    Validation(#[from] ValidationError),
}

/// Loads a signature file. Either the whole file is accepted or an error is returned.
pub fn parse_signature_file(text: &[u8]) -> Result<Signature2, SignatureError> {
    let file: SigFile = serde_json::from_slice(text).map_err(|e| SignatureError::Syntax {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    Ok(build(file)?)
}

pub fn parse_signature_str(text: &str) -> Result<Signature2, SignatureError> {
    parse_signature_file(text.as_bytes())
}

fn build(file: SigFile) -> Result<Signature2, ValidationError> {
    let sig = Signature1::new(
        file.ops
            .into_iter()
            .map(|o| OpDecl {
                name: o.name,
                arity: Arity(o.arity),
            })
            .collect(),
    )?;
    let mut ineqs = Vec::with_capacity(file.inequations.len());
    for q in file.inequations {
        let side = |side: &'static str, src: &str| {
            parse_hexp(&sig, src).map_err(|err| ValidationError::HExpSyntax {
                ineq: q.name.clone(),
                side,
                err,
            })
        };
        let lhs = side("lhs", &q.lhs)?;
        let rhs = side("rhs", &q.rhs)?;
        let pattern_side = match q.pattern_side {
            SideFile::Lhs => PatternSide::Lhs,
            SideFile::Rhs => PatternSide::Rhs,
        };
        ineqs.push(Inequation::new(
            &sig,
            q.name,
            ModDescriptor(q.dom),
            lhs,
            rhs,
            pattern_side,
        )?);
    }
    Signature2::new(file.name, sig, ineqs)
}

/// Canonical serialisation; [`parse_signature_file`] inverts it.
pub fn to_json(s: &Signature2) -> String {
    let file = SigFile {
        name: s.name.clone(),
        ops: s
            .sig
            .ops()
            .iter()
            .map(|o| OpFile {
                name: o.name.clone(),
                arity: o.arity.0.clone(),
            })
            .collect(),
        inequations: s
            .ineqs()
            .iter()
            .map(|q| IneqFile {
                name: q.name.clone(),
                dom: q.dom.0.clone(),
                pattern_side: match q.pattern_side {
                    PatternSide::Lhs => SideFile::Lhs,
                    PatternSide::Rhs => SideFile::Rhs,
                },
                lhs: q.lhs.display(&s.sig).to_string(),
                rhs: q.rhs.display(&s.sig).to_string(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&file).expect("plain data serialises")
}
