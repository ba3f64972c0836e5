#![no_main]

use libfuzzer_sys::fuzz_target;
use synbind::sigspec::{parse_signature_file, parse_signature_str, to_json};

fuzz_target!(|data: &[u8]| {
    if let Ok(s) = parse_signature_file(data) {
        // anything accepted must survive the canonical serializer
        let again = parse_signature_str(&to_json(&s)).expect("canonical output reparses");
        assert_eq!(s, again);
    }
});
