//! Acceptance criteria, one line each. Runs without the test harness so the
//! report is always printed.

use std::process::ExitCode;
use std::time::Instant;

use frobcat::corpus::{cyclic_groups, left_zero_adjoined, standard_corpus, CorpusEntry};
use frobcat::decision::{decide_mod, decide_set, invertible, Certificate, RingSpec};
use frobcat::invariant::{brute_force_find_is, find_is, verify_is, InvariantSystem, IsStructure};
use frobcat::mod_oracle::{free_probe_family, sample_check_mod, witness_mod, ModWitness, NaturalityOutcome};
use frobcat::set_oracle::sample_check_set;
use frobcat::FinCategory;

const SEED: u64 = 20_240_601;
const SAMPLES: usize = 100;
const BUDGET: usize = 12;

fn rings() -> Vec<RingSpec> {
    vec![
        RingSpec::Integers,
        RingSpec::Rationals,
        RingSpec::integers_mod(6).unwrap(),
        RingSpec::prime_field(2).unwrap(),
        RingSpec::prime_field(3).unwrap(),
        RingSpec::prime_field(5).unwrap(),
    ]
}

fn components(cat: &FinCategory) -> Vec<FinCategory> {
    cat.connected_components()
        .all_members()
        .iter()
        .map(|m| cat.full_subcategory(m).0)
        .collect()
}

fn brute(cat: &FinCategory) -> Vec<InvariantSystem> {
    brute_force_find_is(cat, BUDGET).expect("corpus fits the brute-force budget")
}

/// Collects failure messages; a criterion passes when none were recorded.
struct Criterion {
    failures: Vec<String>,
    checks: usize,
}

impl Criterion {
    fn new() -> Self {
        Criterion {
            failures: Vec::new(),
            checks: 0,
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }
}

fn set_conformance(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    for e in corpus {
        let cat = &e.category;
        let expected = !cat.is_empty() && cat.is_connected() && brute(cat).iter().any(InvariantSystem::is_singleton);
        let got = decide_set(cat).unwrap().answer;
        c.check(got == expected, || format!("{}: decide_set {got}, brute force {expected}", e.name));
    }
    c
}

fn mod_conformance(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    for e in corpus {
        let comps = components(&e.category);
        for ring in rings() {
            let expected = comps
                .iter()
                .all(|sub| brute(sub).iter().any(|s| ring.invertible(s.cardinality() as u64)));
            let got = decide_mod(&e.category, ring).unwrap().answer;
            c.check(got == expected, || format!("{} over {ring}: decide_mod {got}, brute force {expected}", e.name));
        }
    }
    c
}

fn group_criterion() -> Criterion {
    let mut c = Criterion::new();
    for e in cyclic_groups(8) {
        let n = e.category.n_morphisms() as u64;
        for ring in rings() {
            let got = decide_mod(&e.category, ring).unwrap().answer;
            let expected = invertible(ring, n);
            c.check(got == expected, || format!("{} over {ring}: {got} vs {expected}", e.name));
        }
    }
    c
}

fn set_oracle(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    for e in corpus {
        let r = sample_check_set(&e.category, SAMPLES, SEED, 4).unwrap();
        c.check(r.samples == SAMPLES, || format!("{}: only {} samples", e.name, r.samples));
        c.check(r.is_consistent(), || format!("{}: {:?}", e.name, r.inconsistencies));
        if r.verdict.answer {
            c.check(r.bijective == SAMPLES, || format!("{}: {} bijective", e.name, r.bijective));
            c.check(r.transforms > 0, || format!("{}: no transformations sampled", e.name));
        } else {
            let sep = r.witness.as_ref().is_some_and(|w| w.separates());
            c.check(sep, || format!("{}: witness does not separate", e.name));
        }
    }
    c
}

fn mod_oracle(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    for e in corpus {
        for p in [2u64, 3] {
            let r = sample_check_mod(&e.category, p, SAMPLES, SEED, 6).unwrap();
            let tag = format!("{} over F_{p}", e.name);
            c.check(r.is_consistent(), || format!("{tag}: {:?}", r.inconsistencies));
            c.check(!r.is_inconclusive(), || format!("{tag}: inconclusive"));
            if r.verdict.answer {
                c.check(r.invertible == SAMPLES, || format!("{tag}: {} invertible", r.invertible));
                if !r.verdict.systems().is_empty() {
                    c.check(r.norm_checks > 0, || format!("{tag}: no averaging check"));
                }
            } else {
                let sep = r.witness.as_ref().is_some_and(ModWitness::separates);
                c.check(sep, || format!("{tag}: witness does not separate"));
                if matches!(r.verdict.certificate, Certificate::CardinalityNotInvertible { .. }) {
                    let infeasible = matches!(
                        r.witness,
                        Some(ModWitness::Naturality {
                            outcome: NaturalityOutcome::Infeasible(_),
                            ..
                        })
                    );
                    c.check(infeasible, || format!("{tag}: augmentation diagram not infeasible"));
                }
            }
        }
    }
    let c2 = FinCategory::from_group_cyclic(2).unwrap();
    let forced_zero = match witness_mod(&c2, 2) {
        Ok(ModWitness::Naturality {
            outcome: NaturalityOutcome::Infeasible(why),
            ..
        }) => why.contains("forced to zero"),
        _ => false,
    };
    c.check(forced_zero, || "C2 over F_2: ψ not forced to zero".into());
    c
}

fn small_cases(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    let m = FinCategory::idempotent_monoid();
    c.check(decide_set(&m).unwrap().answer, || "idempotent monoid: Set verdict negative".into());
    for ring in rings() {
        c.check(decide_mod(&m, ring).unwrap().answer, || format!("idempotent monoid over {ring}: negative"));
    }
    for n in 2..=4usize {
        let cn = FinCategory::from_group_cyclic(n).unwrap();
        let au = FinCategory::adjoin_unit(&cn).unwrap();
        for ring in rings().into_iter().filter(|r| r.invertible(n as u64)) {
            let (a, b) = (decide_mod(&cn, ring).unwrap().answer, decide_mod(&au, ring).unwrap().answer);
            c.check(a == b, || format!("C{n} vs unit+C{n} over {ring}: {a} vs {b}"));
        }
    }
    for e in corpus.iter().filter(|e| (2..=3).contains(&e.category.connected_components().count)) {
        let r = sample_check_set(&e.category, SAMPLES, SEED ^ 1, 4).unwrap();
        c.check(r.is_consistent(), || format!("{}: {:?}", e.name, r.inconsistencies));
    }
    c
}

fn is_machinery(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    for e in corpus {
        for sub in components(&e.category) {
            let search = find_is(&sub).unwrap();
            let all = brute(&sub);
            c.check(search.found.is_empty() == all.is_empty(), || {
                format!("{}: closure finds {}, brute force {}", e.name, search.found.len(), all.len())
            });
            for is in &search.found {
                c.check(all.contains(is), || format!("{}: closure system missing from brute force", e.name));
            }
            let min_closure = search.found.iter().map(InvariantSystem::cardinality).min();
            let min_all = all.iter().map(InvariantSystem::cardinality).min();
            c.check(min_closure == min_all, || format!("{}: minimal cardinalities differ", e.name));
            for is in &all {
                let n = sub.n_objects();
                let card = is.cardinality();
                let equal = (0..n).all(|i| (0..n).all(|j| is.slot(i, j).len() == card));
                c.check(equal, || format!("{}: unequal slots", e.name));
                let st = IsStructure::new(&sub, is);
                c.check(st.is_ok(), || format!("{}: {}: {:?}", e.name, is.render(&sub), st.as_ref().err()));
            }
        }
    }
    c
}

fn free_probe(corpus: &[CorpusEntry]) -> Criterion {
    let mut c = Criterion::new();
    let f3 = RingSpec::prime_field(3).unwrap();
    for e in corpus.iter().filter(|e| decide_mod(&e.category, f3).unwrap().answer) {
        for sub in components(&e.category) {
            let (probes, family) = free_probe_family(&sub, 3).unwrap();
            c.check(probes.iter().all(|p| p.dim == 1), || format!("{}: probe dimension not 1", e.name));
            let ok = family.as_ref().is_some_and(|f| verify_is(&sub, f).is_ok());
            c.check(ok, || format!("{}: supports are not an invariant system", e.name));
        }
    }
    let lz = left_zero_adjoined();
    let (probes, family) = free_probe_family(&lz, 3).unwrap();
    let fails = probes.iter().any(|p| p.dim != 1) || family.is_some_and(|f| verify_is(&lz, &f).is_err());
    c.check(fails, || "left-zero monoid: probe unexpectedly succeeds".into());
    c
}

fn main() -> ExitCode {
    let corpus = standard_corpus();
    let start = Instant::now();
    let criteria: Vec<(&str, Box<dyn Fn() -> Criterion>)> = vec![
        ("1 Set verdicts match singleton systems", Box::new(|| set_conformance(&corpus))),
        ("2 module verdicts match invertible systems", Box::new(|| mod_conformance(&corpus))),
        ("3 cyclic groups match order invertibility", Box::new(group_criterion)),
        ("4 Set oracle consistency", Box::new(|| set_oracle(&corpus))),
        ("5 module oracle consistency over F_2, F_3", Box::new(|| mod_oracle(&corpus))),
        ("6 idempotent monoid, adjoined units, components", Box::new(|| small_cases(&corpus))),
        ("7 invariant system structure and search", Box::new(|| is_machinery(&corpus))),
        ("8 free-functor probe", Box::new(|| free_probe(&corpus))),
    ];
    let mut all_pass = true;
    println!("acceptance on {} corpus categories", corpus.len());
    for (name, run) in &criteria {
        let t = Instant::now();
        let c = run();
        let pass = c.failures.is_empty();
        all_pass &= pass;
        println!(
            "criterion {name}: {} ({} checks, {:.2}s)",
            if pass { "PASS" } else { "FAIL" },
            c.checks,
            t.elapsed().as_secs_f64()
        );
        for f in &c.failures {
            println!("    {f}");
        }
    }
    println!("total {:.2}s", start.elapsed().as_secs_f64());
    if all_pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
