#![no_main]

use libfuzzer_sys::fuzz_target;
use scopeforge::disambig::PluralPolicy;
use scopeforge::lexicon::Lexicon;
use scopeforge::pipeline::{self, DirectiveSpec};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let spec = if s.contains('=') { DirectiveSpec::parse(s) } else { DirectiveSpec::parse_cumulative(s) };
    if let Ok(spec) = spec {
        let lex = Lexicon::fragment();
        for sentence in ["Die Rechtsanwälte stellten eine Sekretärin ein", "Three breweries supplied five inns"] {
            let _ = pipeline::sentence_readings(&lex, sentence, &[spec.clone()], PluralPolicy::Fixed);
        }
    }
});
