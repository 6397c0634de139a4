//! Acceptance criteria, one line of output each. Exits nonzero if any fails.

mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};

use common::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use scopeforge::disambig::{
    self, accessible, brute_force_readings, candidate_placements, enumerate_readings, pl_dis, plural_sites,
    Directive, DrsArg, DrsCond, PluralPolicy, PluralReading,
};
use scopeforge::modeleval::{self, Model};
use scopeforge::pipeline::{self, DirectiveSpec};
use scopeforge::udrs::{iso, text, Label, Provenance, Sort, SubordConstraint, UdrsStore};

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn spec(s: &str) -> DirectiveSpec {
    if s.contains('=') {
        DirectiveSpec::parse(s).unwrap()
    } else {
        DirectiveSpec::parse_cumulative(s).unwrap()
    }
}

fn readings_with(sentence: &str, specs: &[&str], policy: PluralPolicy) -> Vec<disambig::Reading> {
    let specs: Vec<DirectiveSpec> = specs.iter().map(|s| spec(s)).collect();
    pipeline::sentence_readings(&lex(), sentence, &specs, policy).unwrap()
}

fn label_named(u: &UdrsStore, name: &str) -> Label {
    u.labels().into_iter().find(|l| text::label_name(u, *l) == name).unwrap()
}

fn c1() -> Outcome {
    let built = store(S01);
    let p08 = text::parse(&golden("p08_underspecified.udrs")).unwrap();
    let map = iso::isomorphism(&built, &p08).ok_or("built store is not isomorphic to the reference")?;
    let back: BTreeMap<Label, Label> = map.iter().map(|(a, b)| (*b, *a)).collect();
    let rs = enumerate_readings(&built, PluralPolicy::Branch).unwrap();
    ensure(rs.len() == 2, format!("{} readings, expected 2", rs.len()))?;
    let neg = back[&label_named(&p08, "l_2")];
    let scope = back[&label_named(&p08, "l_1_2")];
    let narrowed = built.add_constraint(SubordConstraint::Leq(neg, scope)).unwrap();
    let rs = enumerate_readings(&narrowed, PluralPolicy::Branch).unwrap();
    ensure(rs.len() == 1, format!("{} readings after narrowing, expected 1", rs.len()))?;
    let p06 = text::parse(&golden("p06_scoped.udrs")).unwrap();
    let want = enumerate_readings(&p06, PluralPolicy::Branch).unwrap();
    ensure(want.len() == 1 && want[0].text == rs[0].text, "narrowed reading differs from the scoped reference")?;
    ensure(
        outscopes(&rs[0].root, &|c| is_every(c), &|c| matches!(c, DrsCond::Neg(_))),
        "narrowed reading does not put every over not",
    )?;
    Ok("isomorphic, 2 readings, 1 after narrowing".into())
}

fn c2() -> Outcome {
    let a = analysis(S20);
    let br = a.derivation.bracketing();
    ensure(
        br == "[[Mindestens einen Bewerber]_1 habe [ich fast jedem Mitarbeiter t_1 vorgestellt]]",
        format!("bracketing {br}"),
    )?;
    let rs = enumerate_readings(&a.store, PluralPolicy::Branch).unwrap();
    ensure(rs.len() == 2, format!("(20) has {} readings", rs.len()))?;
    ensure(
        rs.iter().any(|r| outscopes(&r.root, &|c| is_every(c), &|c| is_diamond(c)))
            && rs.iter().any(|r| outscopes(&r.root, &|c| is_diamond(c), &|c| is_every(c))),
        "(20) does not cover both scope orders",
    )?;
    let rs = enumerate_readings(&store(S22), PluralPolicy::Branch).unwrap();
    ensure(rs.len() == 1, format!("(22) has {} readings", rs.len()))?;
    ensure(outscopes(&rs[0].root, &|c| is_every(c), &|c| is_diamond(c)), "(22) reading is not every > atleast")?;
    Ok("trace bracketing, 2 vs 1 readings".into())
}

fn c3() -> Outcome {
    let rs = readings_with(S24, &["die Kinder=distributive"], PluralPolicy::Fixed);
    ensure(rs.len() == 1, format!("{} readings", rs.len()))?;
    let root = &rs[0].root;
    ensure(outscopes(root, &|c| is_belief(c), &|c| is_distribution(c)), "distribution escapes the belief")?;
    ensure(outscopes(root, &|c| is_diamond(c), &|c| is_belief(c)), "belief is not under the subject")?;
    Ok("distribution stays inside the complement".into())
}

fn c4() -> Outcome {
    let dis = "die Gemälde=distributive";
    let a = readings_with(S25A, &[dis], PluralPolicy::Fixed);
    ensure(a.len() == 1, format!("(25a) has {} readings", a.len()))?;
    ensure(outscopes(&a[0].root, &|c| is_diamond(c), &|c| is_distribution(c)), "(25a) is not dat > pl")?;
    let b = readings_with(S25B, &[dis], PluralPolicy::Fixed);
    ensure(b.len() == 2, format!("(25b) has {} readings", b.len()))?;
    ensure(
        b.iter().any(|r| outscopes(&r.root, &|c| is_diamond(c), &|c| is_distribution(c)))
            && b.iter().any(|r| outscopes(&r.root, &|c| is_distribution(c), &|c| is_diamond(c))),
        "(25b) does not cover both orders",
    )?;
    for s in [S25A, S25B] {
        let n = readings_with(s, &["die Gemälde=collective"], PluralPolicy::Fixed).len();
        ensure(n == 1, format!("collective {s}: {n} readings"))?;
    }
    Ok("1 vs 2 distributive readings, collective 1 each".into())
}

fn c5() -> Outcome {
    let built = store(S11);
    let p40 = text::parse(&golden("p40_lawyers.udrs")).unwrap();
    ensure(iso::is_isomorphic(&built, &p40), "built store is not isomorphic to the reference")?;
    ensure(built.slots().all(|s| s.source_ls.is_some()), "a slot has no source")?;
    let pending: Vec<_> = built.slots().filter(|s| !s.is_resolved()).collect();
    ensure(pending.len() == 1, format!("{} pending slots, expected 1", pending.len()))?;
    let np = "die Rechtsanwälte";
    let col = readings_with(S11, &[&format!("{np}=collective")], PluralPolicy::Fixed).len();
    let dis = readings_with(S11, &[&format!("{np}=distributive")], PluralPolicy::Fixed).len();
    let all = readings_with(S11, &[], PluralPolicy::Branch).len();
    ensure((col, dis, all) == (1, 2, 3), format!("counts {col}/{dis}/{all}"))?;
    Ok("isomorphic, 1/2/3 readings".into())
}

fn c6() -> Outcome {
    let rs = readings_with(S10, &[], PluralPolicy::Branch);
    ensure(rs.len() == 1, format!("{} readings", rs.len()))?;
    let gather = rs[0].root.conds.iter().find_map(|c| match c {
        DrsCond::Atom { rel, args } if rel == "gather" => Some(args),
        _ => None,
    });
    let args = gather.ok_or("no gather condition at top")?;
    ensure(
        matches!(args.first(), Some(DrsArg::Ref(r)) if r.sort == Sort::Group),
        "gather does not take the group referent",
    )?;
    Ok("1 collective reading".into())
}

/// Bi-coverage read straight off the model file.
fn cumulative_oracle(src: &str) -> bool {
    let mut groups: BTreeMap<String, BTreeSet<String>> = BTreeMap::new();
    let mut rels: BTreeMap<String, BTreeSet<Vec<String>>> = BTreeMap::new();
    for line in src.lines().map(|l| l.split('#').next().unwrap().trim()) {
        if let Some(rest) = line.strip_prefix("group ") {
            let (name, set) = rest.split_once('=').unwrap();
            let set = set.trim().trim_start_matches('{').trim_end_matches('}');
            groups.insert(name.trim().into(), set.split(',').map(|s| s.trim().to_string()).collect());
        } else if let Some(rest) = line.strip_prefix("rel ") {
            let (name, tuples) = rest.split_once(':').unwrap();
            let e = rels.entry(name.trim().into()).or_default();
            for t in tuples.split(';').map(str::trim).filter(|t| !t.is_empty()) {
                let t = t.trim_start_matches('(').trim_end_matches(')');
                e.insert(t.split(',').map(|s| s.trim().to_string()).collect());
            }
        }
    }
    let empty = BTreeSet::new();
    let supply = rels.get("supply").unwrap_or(&empty);
    let of = |rel: &str| -> Vec<BTreeSet<String>> {
        rels.get(rel)
            .map(|ts| ts.iter().filter_map(|t| groups.get(&t[0]).cloned()).collect())
            .unwrap_or_default()
    };
    of("brewery").iter().filter(|b| b.len() == 3).any(|bs| {
        of("inn").iter().filter(|i| i.len() == 5).any(|is| {
            bs.iter().all(|b| is.iter().any(|i| supply.contains(&vec![b.clone(), i.clone()])))
                && is.iter().all(|i| bs.iter().any(|b| supply.contains(&vec![b.clone(), i.clone()])))
        })
    })
}

fn c7() -> Outcome {
    let rs = readings_with(S17, &["three breweries,five inns"], PluralPolicy::Fixed);
    ensure(rs.len() == 1, format!("{} readings", rs.len()))?;
    let mut truths = Vec::new();
    for name in ["s17_true_spread", "s17_true_hub", "s17_false_idle_brewery", "s17_false_unsupplied_inns"] {
        let src = std::fs::read_to_string(data_dir().join(format!("models/{name}.model"))).unwrap();
        let m = Model::parse(&src).unwrap();
        let got = modeleval::evaluate(&rs[0], &m).map_err(|e| format!("{name}: {e}"))?;
        let want = cumulative_oracle(&src);
        ensure(got == want, format!("{name}: evaluated {got}, oracle {want}"))?;
        truths.push(got);
    }
    ensure(truths == [true, true, false, false], format!("truth values {truths:?}"))?;
    Ok("4 models agree with the bi-coverage oracle".into())
}

fn c8() -> Outcome {
    let mut rng = StdRng::seed_from_u64(8);
    let mut checked = 0;
    for i in 0..20 {
        let u = random_store(&mut rng, 4);
        let before = texts(&enumerate_readings(&u, PluralPolicy::Branch).map_err(|e| format!("store {i}: {e}"))?);
        let sites = plural_sites(&u);
        for _ in 0..50 {
            let (v, d) = if !sites.is_empty() && rng.gen_bool(0.2) {
                let site = sites[rng.gen_range(0..sites.len())];
                let r = if rng.gen_bool(0.5) { PluralReading::Collective } else { PluralReading::Distributive };
                (pl_dis(&u, Directive::new(site.ls.l_max, r)).map_err(|e| e.to_string()), format!("{r} directive"))
            } else {
                let c = random_constraint(&mut rng, &u);
                (u.add_constraint(c.clone()).map_err(|e| e.to_string()), format!("{c:?}"))
            };
            let Ok(v) = v else { continue };
            let after = texts(&enumerate_readings(&v, PluralPolicy::Branch).map_err(|e| format!("store {i}: {e}"))?);
            ensure(after.is_subset(&before), format!("store {i}: adding {d} created a reading"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} consistent constraints and directives, none added a reading"))
}

fn c9() -> Outcome {
    for s in SENTENCES {
        let u = store(s);
        let a = texts(&enumerate_readings(&u, PluralPolicy::Branch).unwrap());
        let b = texts(&brute_force_readings(&u, PluralPolicy::Branch).map_err(|e| format!("{s}: {e}"))?);
        ensure(a == b, format!("{s}: enumerate {} vs brute {}", a.len(), b.len()))?;
    }
    let mut rng = StdRng::seed_from_u64(9);
    for i in 0..100 {
        let u = random_store(&mut rng, 4);
        let a = texts(&enumerate_readings(&u, PluralPolicy::Branch).unwrap());
        let b = texts(&brute_force_readings(&u, PluralPolicy::Branch).map_err(|e| format!("store {i}: {e}"))?);
        ensure(a == b, format!("random store {i}: enumerate {} vs brute {}", a.len(), b.len()))?;
    }
    Ok(format!("{} sentences and 100 random stores agree", SENTENCES.len()))
}

fn c10() -> Outcome {
    let mut n = 0;
    for s in SENTENCES {
        for r in enumerate_readings(&store(s), PluralPolicy::Branch).unwrap() {
            ensure(drs_closed(&r.root), format!("{s}: unbound referent in\n{}", r.text))?;
            n += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(10);
    for _ in 0..50 {
        for r in enumerate_readings(&random_store(&mut rng, 4), PluralPolicy::Branch).unwrap() {
            ensure(drs_closed(&r.root), format!("unbound referent in\n{}", r.text))?;
            n += 1;
        }
    }
    let u = store(S01);
    let closed: Vec<SubordConstraint> = u
        .subord()
        .filter(|(_, p)| *p == Provenance::ClosedFormula)
        .map(|(c, _)| c.clone())
        .collect();
    ensure(!closed.is_empty(), "no closed-formula constraints to delete")?;
    for c in &closed {
        let m = u.without(c);
        let bad = candidate_placements(&m).unwrap().iter().any(|p| !accessible(&m, p).unwrap());
        ensure(bad, format!("deleting {c:?} leaves every placement accessible"))?;
    }
    Ok(format!("{n} readings closed, each of {} clause IV deletions breaks accessibility", closed.len()))
}

fn c11() -> Outcome {
    let mut n = 0;
    for e in std::fs::read_dir(golden_dir()).unwrap() {
        let p = e.unwrap().path();
        let t = std::fs::read_to_string(&p).unwrap();
        let u = text::parse(&t).map_err(|e| format!("{}: {e}", p.display()))?;
        ensure(text::print(&u) == t, format!("{} does not round-trip", p.display()))?;
        n += 1;
    }
    Ok(format!("{n} golden files round-trip byte-exact"))
}

fn main() {
    let criteria: [fn() -> Outcome; 11] = [c1, c2, c3, c4, c5, c6, c7, c8, c9, c10, c11];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let out = panic::catch_unwind(AssertUnwindSafe(c)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        match out {
            Ok(m) => println!("criterion {}: PASS {m}", i + 1),
            Err(m) => {
                failed += 1;
                println!("criterion {}: FAIL {m}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
