#![no_main]

use libfuzzer_sys::fuzz_target;
use synbind::models::{init_fold, BuiltinModel};
use synbind::sigspec::lambda_beta;
use synbind::term::Term;

fuzz_target!(|data: &str| {
    let s2 = lambda_beta();
    if let Ok(m) = BuiltinModel::from_selector(&s2, data, 10) {
        let app = s2.sig.lookup("app").unwrap();
        let _ = init_fold(&m, 2, &Term::con(app, [Term::Var(0), Term::Var(1)]));
    }
});
