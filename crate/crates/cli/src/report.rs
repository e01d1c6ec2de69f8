//! Report assembly. Every command fills a [`Report`]; `--machine` prints the
//! fields as `key: value` lines, human mode prints a headline first.

use std::fmt::{self, Display};

use frobcat::decision::{Certificate, ComponentSystem, Verdict};
use frobcat::invariant::{find_is, IsStructure};
use frobcat::mod_oracle::{free_probe_family, ModOracleReport, ModWitness, NaturalityOutcome};
use frobcat::set_oracle::SetOracleReport;
use frobcat::{FinCategory, StrongConnectivity};

pub struct Report {
    headline: String,
    fields: Vec<(String, String)>,
}

impl Report {
    pub fn new(headline: impl Into<String>) -> Self {
        Report {
            headline: headline.into(),
            fields: Vec::new(),
        }
    }

    pub fn field(&mut self, key: impl Into<String>, value: impl Display) {
        self.fields.push((key.into(), value.to_string()));
    }

    pub fn render(&self, machine: bool) -> String {
        let mut out = String::new();
        if !machine {
            out.push_str(&self.headline);
            out.push('\n');
        }
        let indent = if machine { "" } else { "  " };
        for (k, v) in &self.fields {
            out.push_str(&format!("{indent}{k}: {v}\n"));
        }
        out
    }
}

fn list<T: Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|x| x.to_string()).collect();
    if parts.is_empty() {
        "-".into()
    } else {
        parts.join(" ")
    }
}

fn names(cat: &FinCategory, ms: &[usize]) -> String {
    list(ms.iter().map(|&m| cat.name(m)))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

/// Slots of a component system, listed with object indices of the whole
/// category.
struct Slots<'a>(&'a ComponentSystem);

impl Display for Slots<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cs = self.0;
        let objs = &cs.embedding.objects;
        let mut first = true;
        for (a, &i) in objs.iter().enumerate() {
            for (b, &j) in objs.iter().enumerate() {
                if !first {
                    f.write_str(" ")?;
                }
                first = false;
                let ns: Vec<&str> = cs.system.slot(a, b).iter().map(|&m| cs.subcategory.name(m)).collect();
                write!(f, "S({i},{j})={{{}}}", ns.join(","))?;
            }
        }
        Ok(())
    }
}

pub fn category_summary(r: &mut Report, cat: &FinCategory) {
    r.field("objects", cat.n_objects());
    r.field("morphisms", cat.n_morphisms());
}

pub fn analyze(cat: &FinCategory) -> Report {
    let parts = cat.connected_components();
    let mut r = Report::new(format!(
        "{} objects, {} morphisms, {} connected components",
        cat.n_objects(),
        cat.n_morphisms(),
        parts.count
    ));
    category_summary(&mut r, cat);
    r.field("components", parts.count);
    for c in 0..parts.count {
        let members = parts.members(c);
        let (sub, emb) = cat.full_subcategory(&members);
        let key = format!("component.{c}");
        r.field(format!("{key}.objects"), list(&members));
        let search = find_is(&sub).expect("components are connected");
        match &search.connectivity {
            StrongConnectivity::Strong => r.field(format!("{key}.strongly-connected"), "yes"),
            StrongConnectivity::Split { source, rest } => {
                r.field(format!("{key}.strongly-connected"), "no");
                r.field(format!("{key}.source"), list(source.iter().map(|&o| emb.objects[o])));
                r.field(format!("{key}.rest"), list(rest.iter().map(|&o| emb.objects[o])));
                continue;
            }
        }
        r.field(format!("{key}.invariant-systems"), search.found.len());
        for (k, is) in search.found.iter().enumerate() {
            let cs = ComponentSystem {
                component: c,
                subcategory: sub.clone(),
                embedding: emb.clone(),
                system: is.clone(),
            };
            let key = format!("{key}.is.{k}");
            r.field(&key, Slots(&cs));
            r.field(format!("{key}.cardinality"), is.cardinality());
            match IsStructure::new(&sub, is) {
                Ok(st) => {
                    r.field(format!("{key}.group-order"), st.group.order());
                    r.field(format!("{key}.idempotents"), names(&sub, &st.idempotents));
                    let tau = (0..sub.n_morphisms())
                        .map(|f| format!("{}->{}", sub.name(f), sub.name(st.groupoid.to_parent[st.tau[f]])));
                    r.field(format!("{key}.tau"), list(tau));
                }
                Err(e) => r.field(format!("{key}.structure-error"), e),
            }
        }
    }
    r
}

fn certificate_fields(r: &mut Report, cat: &FinCategory, verdict: &Verdict) {
    r.field("certificate", verdict.certificate.kind());
    match &verdict.certificate {
        Certificate::Systems(systems) => {
            for cs in systems {
                let key = format!("component.{}", cs.component);
                r.field(format!("{key}.system"), Slots(cs));
                r.field(format!("{key}.cardinality"), cs.cardinality());
            }
        }
        Certificate::EmptyCategory { zero_object } => {
            let reason = if *zero_object {
                "the empty diagram has the zero object as limit and colimit"
            } else {
                "the empty diagram has limit a point and colimit empty"
            };
            r.field("reason", reason);
        }
        Certificate::NotConnected(parts) => {
            r.field("reason", format!("{} connected components", parts.count));
            r.field("component-of-object", list(&parts.component));
        }
        Certificate::NotStronglyConnected { component, source, rest } => {
            r.field("reason", format!("component {component} is not strongly connected"));
            r.field("source", list(source));
            r.field("rest", list(rest));
        }
        Certificate::NoInvariantSystem { component, trace } => {
            r.field("reason", format!("component {component} has no invariant system"));
            let members = cat.connected_components().members(*component);
            let (sub, _) = cat.full_subcategory(&members);
            for s in trace {
                let outcome = match &s.result {
                    Ok(k) => format!("system {k}"),
                    Err(v) => v.to_string(),
                };
                r.field(format!("seed.{}", sub.name(s.seed)), outcome);
            }
        }
        Certificate::NoSingletonSystem { cardinalities } => {
            r.field("reason", "no invariant system consists of singletons");
            r.field("cardinalities", list(cardinalities));
        }
        Certificate::CardinalityNotInvertible {
            component,
            cardinalities,
            ring,
        } => {
            let cs: Vec<String> = cardinalities.iter().map(usize::to_string).collect();
            r.field("reason", format!("|G_I|={} not invertible in {ring}", cs.join(",")));
            r.field("component", component);
        }
    }
}

pub fn decide(cat: &FinCategory, target: &str, verdict: &Verdict) -> Report {
    let mut r = Report::new(yes_no(verdict.answer));
    r.field("verdict", yes_no(verdict.answer));
    r.field("target", target);
    category_summary(&mut r, cat);
    certificate_fields(&mut r, cat, verdict);
    r
}

fn status(r: &mut Report, inconsistencies: &[String]) {
    r.field("status", if inconsistencies.is_empty() { "consistent" } else { "inconsistent" });
    for (k, msg) in inconsistencies.iter().enumerate() {
        r.field(format!("inconsistency.{k}"), msg);
    }
}

pub fn oracle_set(cat: &FinCategory, seed: u64, rep: &SetOracleReport) -> Report {
    let headline = format!(
        "{} (decision {}), {} samples",
        if rep.is_consistent() { "consistent" } else { "INCONSISTENT" },
        yes_no(rep.verdict.answer),
        rep.samples
    );
    let mut r = Report::new(headline);
    r.field("verdict", yes_no(rep.verdict.answer));
    r.field("target", "set");
    category_summary(&mut r, cat);
    certificate_fields(&mut r, cat, &rep.verdict);
    r.field("seed", seed);
    r.field("samples", rep.samples);
    r.field("transforms", rep.transforms);
    r.field("bijective", rep.bijective);
    if let Some(w) = &rep.witness {
        r.field("witness", &w.description);
        r.field("witness.sizes", list(w.functor.sizes()));
        r.field("witness.limit", w.limit_size);
        r.field("witness.colimit", w.colimit_size);
        r.field("witness.separates", yes_no(w.separates()));
    }
    status(&mut r, &rep.inconsistencies);
    r
}

fn outcome(o: &NaturalityOutcome) -> String {
    match o {
        NaturalityOutcome::Feasible(_) => "feasible".into(),
        NaturalityOutcome::Infeasible(why) => format!("infeasible: {why}"),
        NaturalityOutcome::Inconclusive { solution_dim, trials } => {
            format!("inconclusive: solution space of dimension {solution_dim}, {trials} trials")
        }
    }
}

pub fn oracle_mod(cat: &FinCategory, seed: u64, rep: &ModOracleReport) -> Report {
    let headline = format!(
        "{} (decision {} over F_{}), {} samples",
        if rep.is_consistent() { "consistent" } else { "INCONSISTENT" },
        yes_no(rep.verdict.answer),
        rep.p,
        rep.samples
    );
    let mut r = Report::new(headline);
    r.field("verdict", yes_no(rep.verdict.answer));
    r.field("target", format!("fp:{}", rep.p));
    category_summary(&mut r, cat);
    certificate_fields(&mut r, cat, &rep.verdict);
    r.field("seed", seed);
    r.field("samples", rep.samples);
    r.field("pulled-back", rep.pulled_back);
    r.field("transforms", rep.transforms);
    r.field("invertible", rep.invertible);
    r.field("norm-checks", rep.norm_checks);
    match &rep.witness {
        Some(ModWitness::Dimension {
            description,
            functor,
            limit_dim,
            colimit_dim,
        }) => {
            r.field("witness", description);
            r.field("witness.dims", list(functor.dims()));
            r.field("witness.limit", limit_dim);
            r.field("witness.colimit", colimit_dim);
        }
        Some(ModWitness::Naturality {
            description,
            problem,
            outcome: o,
        }) => {
            r.field("witness", description);
            r.field("witness.functors", problem.functors.len());
            r.field("witness.transforms", problem.transforms.len());
            r.field("witness.outcome", outcome(o));
        }
        None => {}
    }
    if let Some(w) = &rep.witness {
        r.field("witness.separates", yes_no(w.separates()));
    }
    if let Certificate::NoInvariantSystem { component, .. } = &rep.verdict.certificate {
        let members = cat.connected_components().members(*component);
        let (sub, _) = cat.full_subcategory(&members);
        if let Ok((probes, family)) = free_probe_family(&sub, rep.p) {
            for pr in &probes {
                let key = format!("probe.{}", members[pr.object]);
                r.field(format!("{key}.limit-dim"), pr.dim);
                if let Some(supports) = &pr.supports {
                    let s = supports.iter().map(|ms| {
                        let ns: Vec<&str> = ms.iter().map(|&m| sub.name(m)).collect();
                        format!("{{{}}}", ns.join(","))
                    });
                    r.field(format!("{key}.supports"), list(s));
                }
            }
            r.field("probe.family", family.map_or("-".into(), |f| f.render(&sub)));
        }
    }
    status(&mut r, &rep.inconsistencies);
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn machine_mode_has_no_headline() {
        let mut r = Report::new("yes");
        r.field("verdict", "yes");
        assert_eq!(r.render(true), "verdict: yes\n");
        assert_eq!(r.render(false), "yes\n  verdict: yes\n");
    }

    #[test]
    fn analyze_idempotent_monoid() {
        let out = analyze(&FinCategory::idempotent_monoid()).render(true);
        assert!(out.contains("component.0.is.0: S(0,0)={e}"), "{out}");
        assert!(out.contains("component.0.is.0.group-order: 1"), "{out}");
    }
}
