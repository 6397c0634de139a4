#![no_main]

use libfuzzer_sys::fuzz_target;
use scopeforge::udrs::text;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(u) = text::parse(s) {
        let printed = text::print(&u);
        let again = text::parse(&printed).expect("printed store parses");
        assert_eq!(text::print(&again), printed);
        let _ = text::canonicalize(&u);
    }
});
