//! Seeded random generation of well-scoped terms, tuples and maps.
//!
//! Terms are depth-bounded; constructors are drawn uniformly and the chance
//! of a variable rises as the remaining depth falls.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sigspec::{ModDescriptor, OpId, Signature1};
use crate::term::{Ctx, Renaming, SubstMap, Term};

pub const DEFAULT_MAX_DEPTH: usize = 7;

/// Depth used for substitution images, which multiply term size.
pub const MAP_IMAGE_DEPTH: usize = 3;

/// Per-sample seed derived from the run seed (splitmix64 finaliser).
pub fn sample_seed(seed: u64, index: usize) -> u64 {
    let mut z = seed ^ (index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub struct Sampler<'a> {
    sig: &'a Signature1,
    rng: ChaCha8Rng,
    max_depth: usize,
    /// Operators usable at depth 0 in the empty context: every argument binds.
    closers: Vec<OpId>,
}

impl<'a> Sampler<'a> {
    pub fn new(sig: &'a Signature1, seed: u64) -> Self {
        let closers = sig
            .op_ids()
            .filter(|&op| sig.arity(op).iter().all(|&k| k > 0))
            .collect();
        Sampler {
            sig,
            rng: ChaCha8Rng::seed_from_u64(seed),
            max_depth: DEFAULT_MAX_DEPTH,
            closers,
        }
    }

    pub fn with_max_depth(mut self, depth: usize) -> Self {
        self.max_depth = depth;
        self
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    /// Whether closed terms exist at all.
    pub fn has_closed_terms(&self) -> bool {
        !self.closers.is_empty()
    }

    /// Smallest context size worth sampling in.
    pub fn min_ctx(&self) -> Ctx {
        usize::from(!self.has_closed_terms())
    }

    /// A context size in `min_ctx()..=max`.
    pub fn ctx(&mut self, max: Ctx) -> Ctx {
        let lo = self.min_ctx();
        self.rng.gen_range(lo..=max.max(lo))
    }

    /// A random term over `ctx`; `None` only if no term exists there.
    pub fn term(&mut self, ctx: Ctx) -> Option<Term> {
        let depth = self.max_depth;
        self.term_at_depth(ctx, depth)
    }

    pub fn term_at_depth(&mut self, ctx: Ctx, depth: usize) -> Option<Term> {
        if ctx == 0 && !self.has_closed_terms() {
            return None;
        }
        Some(self.gen(ctx, depth, depth))
    }

    fn gen(&mut self, ctx: Ctx, budget: usize, max: usize) -> Term {
        let p_var = if ctx == 0 {
            0.0
        } else if budget == 0 || self.sig.is_empty() {
            1.0
        } else {
            (max - budget + 1) as f64 / (max + 1) as f64
        };
        if self.rng.gen_bool(p_var) {
            return Term::Var(self.rng.gen_range(0..ctx));
        }
        let op = if budget == 0 {
            // ctx == 0 here: only constructors whose arguments all bind
            self.closers[self.rng.gen_range(0..self.closers.len())]
        } else {
            OpId(self.rng.gen_range(0..self.sig.len()))
        };
        let args = self
            .sig
            .arity(op)
            .to_vec()
            .into_iter()
            .map(|k| self.gen(ctx + k, budget.saturating_sub(1), max))
            .collect();
        Term::Con(op, args)
    }

    /// Values for each slot of `desc` over `ctx`.
    pub fn tuple(&mut self, desc: &ModDescriptor, ctx: Ctx) -> Option<Vec<Term>> {
        desc.slots().iter().map(|&k| self.term(ctx + k)).collect()
    }

    pub fn subst_map(&mut self, source: Ctx, target: Ctx) -> Option<SubstMap> {
        let images = (0..source)
            .map(|_| self.term_at_depth(target, MAP_IMAGE_DEPTH))
            .collect::<Option<Vec<_>>>()?;
        Some(SubstMap::new(target, images))
    }

    /// A random renaming; `None` if `source > 0` and `target == 0`.
    pub fn renaming(&mut self, source: Ctx, target: Ctx) -> Option<Renaming> {
        if source > 0 && target == 0 {
            return None;
        }
        let map = (0..source).map(|_| self.rng.gen_range(0..target)).collect();
        Some(Renaming::new(target, map).expect("entries drawn below target"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::scope_check;

    #[test]
    fn terms_are_well_scoped_and_reproducible() {
        let sig = Signature1::from_pairs([("app", &[0, 0][..]), ("abs", &[1][..])]).unwrap();
        for seed in 0..50 {
            let mut a = Sampler::new(&sig, seed);
            let mut b = Sampler::new(&sig, seed);
            for ctx in 0..3 {
                let t = a.term(ctx).unwrap();
                assert!(scope_check(&sig, ctx, &t));
                assert_eq!(Some(t), b.term(ctx));
            }
        }
    }

    #[test]
    fn no_closed_terms_without_closers() {
        let sig = Signature1::from_pairs([("app", &[0, 0][..])]).unwrap();
        let mut s = Sampler::new(&sig, 1);
        assert_eq!(s.term(0), None);
        assert_eq!(s.min_ctx(), 1);
        assert!(s.term(1).is_some());
    }

    #[test]
    fn constants_close_terms() {
        let sig = Signature1::from_pairs([("z", &[][..]), ("s", &[0][..])]).unwrap();
        let mut s = Sampler::new(&sig, 3);
        for _ in 0..20 {
            assert!(scope_check(&sig, 0, &s.term(0).unwrap()));
        }
    }

    #[test]
    fn sample_seeds_differ() {
        assert_ne!(sample_seed(0, 0), sample_seed(0, 1));
        assert_ne!(sample_seed(0, 1), sample_seed(1, 1));
        assert_eq!(sample_seed(7, 3), sample_seed(7, 3));
    }
}
