#![no_main]

use libfuzzer_sys::fuzz_target;
use scopeforge::disambig::DrsBox;
use scopeforge::modeleval::{evaluate_box, Model};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(m) = Model::parse(s) {
        assert_eq!(evaluate_box(&DrsBox::default(), &m), Ok(true));
    }
});
