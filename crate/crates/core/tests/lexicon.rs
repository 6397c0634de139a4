use scopeforge::disambig::{enumerate_readings, PluralPolicy};
use scopeforge::lexicon::{segment, words, Lexicon, LexiconError};
use scopeforge::pipeline;
use scopeforge::udrs::IdGen;

const SMALL: &str = r#"
[[entry]]
form = "everyone"
kind = "det_quant"
case = "nom"
num = "sg"
quant = "every"
standalone = true

[[entry]]
form = "didn't"
kind = "neg"

[[entry]]
form = "sleep"
kind = "verb"
vform = "inf"
rel = "sleep"
head_initial = true
subcat = [{ case = "nom", type = "dp" }]
"#;

#[test]
fn fragment_loads() {
    let lex = Lexicon::fragment();
    assert!(!lex.is_empty());
    assert!(lex.max_tokens() >= 2);
    assert_eq!(lex.lookup("fast jedem").len(), 1);
    assert!(lex.lookup("Fast Jedem").is_empty());
    assert!(lex.entries().all(|e| !e.form.is_empty()));
}

#[test]
fn custom_lexicon_drives_the_pipeline() {
    let lex = Lexicon::load(SMALL).unwrap();
    assert_eq!(lex.len(), 3);
    let a = pipeline::analyze(&lex, "Everyone didn't sleep").unwrap();
    assert_eq!(a.len(), 1);
    assert_eq!(enumerate_readings(&a[0].store, PluralPolicy::Branch).unwrap().len(), 2);
}

#[test]
fn schema_errors_name_line_and_field() {
    let cases = [
        ("[[entry]]\nform = \"x\"\nkind = \"widget\"\n", "kind"),
        ("[[entry]]\nform = \"x\"\nkind = \"verb\"\nrel = \"x\"\nsubcat = [{ case = \"nom\", type = \"dp\" }]\n", "vform"),
        ("[[entry]]\nform = \"x\"\nkind = \"verb\"\nvform = \"fin\"\nrel = \"x\"\n", "subcat"),
        ("[[entry]]\nform = \"x\"\nkind = \"det_quant\"\nnum = \"sg\"\n", "quant"),
        ("[[entry]]\nform = \"x\"\nkind = \"noun\"\nnum = \"sg\"\n", "rel"),
        ("[[entry]]\nform = \"x\"\nkind = \"neg\"\nhead_initial = true\n", "head_initial"),
        ("[[entry]]\nform = \"  \"\nkind = \"neg\"\n", "form"),
    ];
    for (src, want) in cases {
        match Lexicon::load(src) {
            Err(LexiconError::Schema { line, field, .. }) => {
                assert_eq!(field, want, "{src}");
                assert_eq!(line, 1, "{src}");
            }
            other => panic!("{src}: {other:?}"),
        }
    }
}

#[test]
fn malformed_toml_is_rejected() {
    assert!(Lexicon::load("[[entry]\n").is_err());
    assert!(Lexicon::load("[[entry]]\nform = \"x\"\nkind = \"neg\"\ncolour = \"red\"\n").is_err());
}

#[test]
fn second_entry_reports_its_own_line() {
    let src = format!("{SMALL}\n[[entry]]\nform = \"y\"\nkind = \"gizmo\"\n");
    match Lexicon::load(&src) {
        Err(LexiconError::Schema { line, .. }) => assert_eq!(line, SMALL.lines().count() + 2),
        other => panic!("{other:?}"),
    }
}

#[test]
fn words_drop_punctuation() {
    assert_eq!(words("Ja, daß  es geht."), ["Ja", "daß", "es", "geht"]);
    assert!(words(" , . ").is_empty());
}

#[test]
fn segmentation_prefers_longest_match() {
    let lex = Lexicon::fragment();
    let toks = segment(&lex, "Ich habe fast jedem Mitarbeiter mindestens einen Bewerber vorgestellt").unwrap();
    let texts: Vec<&str> = toks.iter().map(|t| t.text.as_str()).collect();
    assert_eq!(texts, ["Ich", "habe", "fast jedem", "Mitarbeiter", "mindestens einen", "Bewerber", "vorgestellt"]);
    assert_eq!((toks[2].start, toks[2].end), (2, 4));
    let err = segment(&lex, "Ich habe Hunger").unwrap_err();
    assert_eq!((err.word.as_str(), err.position), ("Hunger", 2));
}

#[test]
fn templates_are_fresh_per_instance() {
    let lex = Lexicon::fragment();
    let e = &lex.lookup("fast jedem")[0];
    let mut g = IdGen::starting_at(1);
    let a = scopeforge::lexicon::instantiate_template(e, &mut g);
    let b = scopeforge::lexicon::instantiate_template(e, &mut g);
    assert!(a.store.labels().is_disjoint(&b.store.labels().into_iter().filter(|l| *l != a.store.top).collect()));
    assert_ne!(a.referent, b.referent);
}
