#![no_main]

use libfuzzer_sys::fuzz_target;
use scopeforge::disambig::PluralPolicy;
use scopeforge::lexicon::Lexicon;
use scopeforge::pipeline;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.split_whitespace().count() > 12 {
        return;
    }
    let _ = pipeline::sentence_readings(&Lexicon::fragment(), s, &[], PluralPolicy::Branch);
});
