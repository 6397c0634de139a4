#![no_main]

use libfuzzer_sys::fuzz_target;
use scopeforge::lexicon::Lexicon;
use scopeforge::pipeline;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(lex) = Lexicon::load(s) {
        let forms: Vec<String> = lex.entries().take(4).map(|e| e.form.clone()).collect();
        let _ = pipeline::analyze(&lex, &forms.join(" "));
    }
});
