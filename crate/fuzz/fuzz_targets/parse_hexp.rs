#![no_main]

use libfuzzer_sys::fuzz_target;
use synbind::sigspec::{lambda_beta, parse_hexp, shape_check};

fuzz_target!(|data: &str| {
    let s2 = lambda_beta();
    if let Ok(e) = parse_hexp(&s2.sig, data) {
        let shown = e.display(&s2.sig).to_string();
        assert_eq!(parse_hexp(&s2.sig, &shown).as_ref(), Ok(&e));
        let _ = shape_check(&s2.sig, &e, None);
    }
});
