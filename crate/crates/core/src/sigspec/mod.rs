//! Signatures: operator arities, half-equation expressions and inequations.

mod file;
mod hexp;

use std::fmt;

pub use file::{parse_signature_file, parse_signature_str, to_json, SignatureError, ValidationError};
pub use hexp::{check_pattern, parse_hexp, shape_check, HExp, HExpSyntaxError, PatternError, ShapeError, Typing};

/// Binding depths of a constructor's arguments: entry `k` is the number of
/// variables bound in argument `k`. The empty arity is a constant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Arity(pub Vec<usize>);

impl Arity {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

/// Index of an operator in its [`Signature1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpId(pub usize);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpDecl {
    pub name: String,
    pub arity: Arity,
}

/// A family of arities, one per named operator.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Signature1 {
    ops: Vec<OpDecl>,
}

/// Operator names that would be ambiguous in the term syntax.
pub const RESERVED_OP_NAMES: &[&str] = &["bind"];

impl Signature1 {
    /// Builds a signature, rejecting bad or duplicate names.
    pub fn new(ops: Vec<OpDecl>) -> Result<Self, ValidationError> {
        for (i, op) in ops.iter().enumerate() {
            if !crate::sexp::is_identifier(&op.name) || RESERVED_OP_NAMES.contains(&op.name.as_str()) {
                return Err(ValidationError::BadName(op.name.clone()));
            }
            if ops[..i].iter().any(|o| o.name == op.name) {
                return Err(ValidationError::DuplicateOp(op.name.clone()));
            }
        }
        Ok(Signature1 { ops })
    }

    /// Convenience constructor from `(name, arity)` pairs.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a [usize])>) -> Result<Self, ValidationError> {
        Signature1::new(
            pairs
                .into_iter()
                .map(|(name, arity)| OpDecl {
                    name: name.to_string(),
                    arity: Arity(arity.to_vec()),
                })
                .collect(),
        )
    }

    pub fn ops(&self) -> &[OpDecl] {
        &self.ops
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    pub fn op_ids(&self) -> impl Iterator<Item = OpId> {
        (0..self.ops.len()).map(OpId)
    }

    pub fn lookup(&self, name: &str) -> Option<OpId> {
        self.ops.iter().position(|o| o.name == name).map(OpId)
    }

    /// Panics on an id from another signature.
    pub fn arity(&self, op: OpId) -> &[usize] {
        &self.ops[op.0].arity.0
    }

    pub fn name(&self, op: OpId) -> &str {
        &self.ops[op.0].name
    }

    pub fn contains(&self, op: OpId) -> bool {
        op.0 < self.ops.len()
    }
}

/// An algebraic module `M^{n1} x ... x M^{nm}`; `[]` is the terminal module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct ModDescriptor(pub Vec<usize>);

impl ModDescriptor {
    pub fn terminal() -> Self {
        ModDescriptor(Vec::new())
    }

    pub fn slots(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Adds one to every slot.
    pub fn derived(&self) -> Self {
        ModDescriptor(self.0.iter().map(|n| n + 1).collect())
    }

    /// Inverse of [`derived`](Self::derived); `None` if some slot is zero.
    pub fn underived(&self) -> Option<Self> {
        self.0
            .iter()
            .map(|&n| n.checked_sub(1))
            .collect::<Option<Vec<_>>>()
            .map(ModDescriptor)
    }

    pub fn single(&self) -> Option<usize> {
        match self.0.as_slice() {
            [k] => Some(*k),
            _ => None,
        }
    }
}

impl From<&[usize]> for ModDescriptor {
    fn from(s: &[usize]) -> Self {
        ModDescriptor(s.to_vec())
    }
}

impl From<Vec<usize>> for ModDescriptor {
    fn from(v: Vec<usize>) -> Self {
        ModDescriptor(v)
    }
}

impl fmt::Display for ModDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

/// Which side of an inequation is matched when rewriting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PatternSide {
    Lhs,
    Rhs,
}

impl PatternSide {
    pub fn as_str(self) -> &'static str {
        match self {
            PatternSide::Lhs => "lhs",
            PatternSide::Rhs => "rhs",
        }
    }
}

/// `lhs <= rhs`, two parallel half-equations out of `dom` into a single-slot module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Inequation {
    pub name: String,
    pub dom: ModDescriptor,
    pub lhs: HExp,
    pub rhs: HExp,
    pub pattern_side: PatternSide,
    cod: usize,
}

impl Inequation {
    /// Type-checks both sides against `dom` and the pattern side against the
    /// pattern discipline.
    pub fn new(
        sig: &Signature1,
        name: impl Into<String>,
        dom: ModDescriptor,
        lhs: HExp,
        rhs: HExp,
        pattern_side: PatternSide,
    ) -> Result<Self, ValidationError> {
        let name = name.into();
        if !crate::sexp::is_identifier(&name) {
            return Err(ValidationError::BadName(name));
        }
        let side_typing = |side: &'static str, e: &HExp| -> Result<usize, ValidationError> {
            let t = shape_check(sig, e, Some(&dom)).map_err(|err| ValidationError::Shape {
                ineq: name.clone(),
                side,
                err,
            })?;
            if t.dom != dom {
                return Err(ValidationError::DomMismatch {
                    ineq: name.clone(),
                    side,
                    declared: dom.clone(),
                    found: t.dom,
                });
            }
            t.cod.single().ok_or_else(|| ValidationError::NotSingleSlot {
                ineq: name.clone(),
                side,
                cod: t.cod.clone(),
            })
        };
        let lk = side_typing("lhs", &lhs)?;
        let rk = side_typing("rhs", &rhs)?;
        if lk != rk {
            return Err(ValidationError::CodMismatch {
                ineq: name,
                lhs: lk,
                rhs: rk,
            });
        }
        let pattern = match pattern_side {
            PatternSide::Lhs => &lhs,
            PatternSide::Rhs => &rhs,
        };
        hexp::check_pattern(sig, pattern, &dom).map_err(|err| ValidationError::Pattern {
            ineq: name.clone(),
            err,
        })?;
        Ok(Inequation {
            name,
            dom,
            lhs,
            rhs,
            pattern_side,
            cod: lk,
        })
    }

    /// The `k` of the shared codomain `[k]`.
    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn pattern(&self) -> &HExp {
        match self.pattern_side {
            PatternSide::Lhs => &self.lhs,
            PatternSide::Rhs => &self.rhs,
        }
    }

    pub fn contractum(&self) -> &HExp {
        match self.pattern_side {
            PatternSide::Lhs => &self.rhs,
            PatternSide::Rhs => &self.lhs,
        }
    }
}

/// A 1-signature together with named inequations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature2 {
    pub name: String,
    pub sig: Signature1,
    ineqs: Vec<Inequation>,
}

impl Signature2 {
    pub fn new(name: impl Into<String>, sig: Signature1, ineqs: Vec<Inequation>) -> Result<Self, ValidationError> {
        let name = name.into();
        if !crate::sexp::is_identifier(&name) {
            return Err(ValidationError::BadName(name));
        }
        for (i, q) in ineqs.iter().enumerate() {
            if ineqs[..i].iter().any(|p| p.name == q.name) {
                return Err(ValidationError::DuplicateIneq(q.name.clone()));
            }
        }
        Ok(Signature2 { name, sig, ineqs })
    }

    pub fn ineqs(&self) -> &[Inequation] {
        &self.ineqs
    }

    pub fn ineq(&self, name: &str) -> Option<(usize, &Inequation)> {
        self.ineqs.iter().enumerate().find(|(_, q)| q.name == name)
    }
}

/// The untyped lambda calculus with the beta inequation, as shipped in
/// `signatures/lambda-beta.sig.json`.
pub const LAMBDA_BETA_JSON: &str = include_str!("../../signatures/lambda-beta.sig.json");

pub fn lambda_beta() -> Signature2 {
    parse_signature_str(LAMBDA_BETA_JSON).expect("bundled signature is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_op_rejected() {
        let err = Signature1::from_pairs([("a", &[][..]), ("a", &[0][..])]).unwrap_err();
        assert!(matches!(err, ValidationError::DuplicateOp(n) if n == "a"));
    }

    #[test]
    fn bad_op_names_rejected() {
        assert!(Signature1::from_pairs([("", &[][..])]).is_err());
        assert!(Signature1::from_pairs([("9x", &[][..])]).is_err());
        assert!(Signature1::from_pairs([("bind", &[1][..])]).is_err());
    }

    #[test]
    fn empty_arity_is_constant() {
        let s = Signature1::from_pairs([("c", &[][..])]).unwrap();
        assert!(s.arity(OpId(0)).is_empty());
    }

    #[test]
    fn descriptor_derivation() {
        let d = ModDescriptor(vec![1, 0]);
        assert_eq!(d.derived(), ModDescriptor(vec![2, 1]));
        assert_eq!(d.underived(), None);
        assert_eq!(d.derived().underived(), Some(d));
        assert_eq!(ModDescriptor::terminal().underived(), Some(ModDescriptor::terminal()));
    }

    #[test]
    fn bundled_lambda_beta() {
        let s = lambda_beta();
        assert_eq!(s.name, "lambda-beta");
        assert_eq!(s.sig.arity(s.sig.lookup("app").unwrap()), &[0, 0]);
        assert_eq!(s.sig.arity(s.sig.lookup("abs").unwrap()), &[1]);
        assert_eq!(s.ineqs().len(), 1);
        let (_, beta) = s.ineq("beta").unwrap();
        assert_eq!(beta.dom, ModDescriptor(vec![1, 0]));
        assert_eq!(beta.cod(), 0);
        assert_eq!(beta.rhs, HExp::Subst1);
    }
}
