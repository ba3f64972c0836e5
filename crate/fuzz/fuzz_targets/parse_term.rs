#![no_main]

use libfuzzer_sys::fuzz_target;
use synbind::reduction::{Rewriter, Strategy};
use synbind::sigspec::lambda_beta;
use synbind::term::{parse_term, print_term, scope_check};

fuzz_target!(|data: &str| {
    let s2 = lambda_beta();
    let ctx: Vec<String> = vec!["y".into(), "z".into()];
    if let Ok(t) = parse_term(&s2.sig, &ctx, data) {
        assert!(scope_check(&s2.sig, 2, &t));
        let printed = print_term(&s2.sig, &ctx, &t);
        assert_eq!(parse_term(&s2.sig, &ctx, &printed).as_ref(), Ok(&t));
        let res = Rewriter::new(&s2).normalize(2, &t, Strategy::Outermost, 20);
        assert!(scope_check(&s2.sig, 2, &res.term));
    }
});
