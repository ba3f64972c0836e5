mod common;

use common::decode;
use proptest::prelude::*;
use synbind::sigspec::{
    lambda_beta, parse_hexp, parse_signature_str, to_json, Arity, HExp, ModDescriptor, OpDecl, OpId, Signature1,
    Signature2,
};
use synbind::term::{canonical_context, parse_term, print_term};

const BUNDLED: [&str; 3] = [
    include_str!("../signatures/lambda-beta.sig.json"),
    include_str!("../signatures/lambda-beta-eta.sig.json"),
    include_str!("../signatures/bool-let.sig.json"),
];

#[test]
fn bundled_signatures_round_trip() {
    for src in BUNDLED {
        let s = parse_signature_str(src).unwrap();
        let again = parse_signature_str(&to_json(&s)).unwrap();
        assert_eq!(s, again);
        assert_eq!(to_json(&s), to_json(&again));
    }
}

fn hexp_strategy(ops: usize) -> impl Strategy<Value = HExp> {
    // `(id)` and `(bang)` are the inferred forms, so explicit descriptors are non-empty
    let desc = prop::collection::vec(0usize..3, 1..3).prop_map(ModDescriptor);
    let leaf = prop_oneof![
        Just(HExp::Id(None)),
        desc.clone().prop_map(|d| HExp::Id(Some(d))),
        Just(HExp::Bang(None)),
        desc.prop_map(|d| HExp::Bang(Some(d))),
        (0usize..4).prop_map(HExp::Proj),
        (0..ops).prop_map(|i| HExp::Ctor(OpId(i))),
        Just(HExp::Subst1),
        Just(HExp::Weaken),
        Just(HExp::Fresh),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| HExp::comp(a, b)),
            prop::collection::vec(inner.clone(), 0..4).prop_map(HExp::Pair),
            inner.prop_map(HExp::deriv),
        ]
    })
}

fn sig_strategy() -> impl Strategy<Value = Signature1> {
    prop::collection::vec(prop::collection::vec(0usize..3, 0..4), 1..5).prop_map(|arities| {
        let ops = arities
            .into_iter()
            .enumerate()
            .map(|(i, a)| OpDecl {
                name: format!("op{i}"),
                arity: Arity(a),
            })
            .collect();
        Signature1::new(ops).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn terms_print_and_reparse(n in 0usize..4, t in prop::collection::vec(any::<u32>(), 0..50)) {
        let s2 = lambda_beta();
        let t = decode(&s2.sig, n, &t);
        let ctx = canonical_context(n);
        let printed = print_term(&s2.sig, &ctx, &t);
        prop_assert_eq!(parse_term(&s2.sig, &ctx, &printed).unwrap(), t);
    }

    #[test]
    fn terms_reparse_under_clashing_context_names(t in prop::collection::vec(any::<u32>(), 0..50)) {
        // context names that the printer would otherwise pick for binders
        let s2 = parse_signature_str(BUNDLED[2]).unwrap();
        let ctx: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let t = decode(&s2.sig, 3, &t);
        let printed = print_term(&s2.sig, &ctx, &t);
        prop_assert_eq!(parse_term(&s2.sig, &ctx, &printed).unwrap(), t);
    }

    #[test]
    fn hexp_display_reparses(e in hexp_strategy(2)) {
        let sig = lambda_beta().sig;
        let shown = e.display(&sig).to_string();
        prop_assert_eq!(parse_hexp(&sig, &shown).unwrap(), e);
    }

    #[test]
    fn generated_signatures_round_trip(sig in sig_strategy()) {
        let s = Signature2::new("gen", sig, Vec::new()).unwrap();
        let again = parse_signature_str(&to_json(&s)).unwrap();
        prop_assert_eq!(s, again);
    }
}
