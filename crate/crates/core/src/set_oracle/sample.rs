//! Random set functors and the sampled consistency check.

use thiserror::Error;

use super::{
    canonical_map, colimit_set, limit_set, representable, representable_witness,
    witness_not_connected, witness_not_strongly_connected, ComponentCanonical, SetColimit,
    SetFunctor, SetNatTransform,
};
use crate::category::FinCategory;
use crate::decision::{decide_set, Certificate, Verdict};
use crate::rng::XorShift64Star;
use crate::CategoryError;

pub const DEFAULT_SAMPLES: usize = 100;
pub const DEFAULT_MAX_SIZE: usize = 4;

const SIZE_ATTEMPTS: usize = 500;
const NODE_BUDGET: usize = 20_000;

#[derive(Debug, Error)]
pub enum SamplingError {
    #[error("no functor found after {0} size draws")]
    Exhausted(usize),
    #[error(transparent)]
    Category(#[from] CategoryError),
}

type Table = Vec<Vec<Option<usize>>>;

struct Budget(usize);

impl Budget {
    fn spend(&mut self) -> bool {
        if self.0 == 0 {
            return false;
        }
        self.0 -= 1;
        true
    }
}

/// Composable pairs `(g, f, g∘f)` with neither factor an identity.
fn proper_pairs(cat: &FinCategory) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for f in 0..cat.n_morphisms() {
        if cat.is_identity(f) {
            continue;
        }
        for g in cat.outgoing(cat.cod(f)) {
            if !cat.is_identity(g) {
                out.push((g, f, cat.compose(g, f)));
            }
        }
    }
    out
}

/// Forces every entry implied by `F(h)(x) = F(g)(F(f)(x))`. `false` on a
/// contradiction.
fn propagate_functor(pairs: &[(usize, usize, usize)], act: &mut Table) -> bool {
    let mut changed = true;
    while changed {
        changed = false;
        for &(g, f, h) in pairs {
            for x in 0..act[f].len() {
                let Some(y) = act[f][x] else { continue };
                match (act[g][y], act[h][x]) {
                    (Some(z), Some(w)) if z != w => return false,
                    (Some(z), None) => {
                        act[h][x] = Some(z);
                        changed = true;
                    }
                    (None, Some(w)) => {
                        act[g][y] = Some(w);
                        changed = true;
                    }
                    _ => {}
                }
            }
        }
    }
    true
}

fn first_open(table: &Table) -> Option<(usize, usize)> {
    table
        .iter()
        .enumerate()
        .find_map(|(f, row)| row.iter().position(Option::is_none).map(|x| (f, x)))
}

fn search_functor(
    pairs: &[(usize, usize, usize)],
    codomain_sizes: &[usize],
    act: Table,
    rng: &mut XorShift64Star,
    budget: &mut Budget,
) -> Option<Table> {
    let Some((f, x)) = first_open(&act) else {
        return Some(act);
    };
    let mut values: Vec<usize> = (0..codomain_sizes[f]).collect();
    rng.shuffle(&mut values);
    for v in values {
        if !budget.spend() {
            return None;
        }
        let mut next = act.clone();
        next[f][x] = Some(v);
        if propagate_functor(pairs, &mut next) {
            if let Some(done) = search_functor(pairs, codomain_sizes, next, rng, budget) {
                return Some(done);
            }
        }
    }
    None
}

fn functor_with_sizes(
    cat: &FinCategory,
    pairs: &[(usize, usize, usize)],
    sizes: &[usize],
    rng: &mut XorShift64Star,
) -> Option<SetFunctor> {
    let mut act: Table = (0..cat.n_morphisms()).map(|f| vec![None; sizes[cat.dom(f)]]).collect();
    for o in 0..cat.n_objects() {
        act[cat.identity(o)] = (0..sizes[o]).map(Some).collect();
    }
    if (0..cat.n_morphisms()).any(|f| sizes[cat.dom(f)] > 0 && sizes[cat.cod(f)] == 0) {
        return None;
    }
    if !propagate_functor(pairs, &mut act) {
        return None;
    }
    let cod_sizes: Vec<usize> = (0..cat.n_morphisms()).map(|f| sizes[cat.cod(f)]).collect();
    let table = search_functor(pairs, &cod_sizes, act, rng, &mut Budget(NODE_BUDGET))?;
    let action = table
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.expect("complete")).collect())
        .collect();
    Some(SetFunctor::new(cat, sizes.to_vec(), action).expect("search respects the composition table"))
}

/// Draws sizes uniformly from `0..=max_size`, then fills in the morphism
/// tables by randomized search with forward propagation through the
/// composition table. Size vectors admitting no functor are redrawn.
pub fn random_set_functor(
    cat: &FinCategory,
    rng: &mut XorShift64Star,
    max_size: usize,
) -> Result<SetFunctor, SamplingError> {
    let pairs = proper_pairs(cat);
    for _ in 0..SIZE_ATTEMPTS {
        let sizes: Vec<usize> = (0..cat.n_objects()).map(|_| rng.range_inclusive(0, max_size)).collect();
        if let Some(f) = functor_with_sizes(cat, &pairs, &sizes, rng) {
            return Ok(f);
        }
    }
    Err(SamplingError::Exhausted(SIZE_ATTEMPTS))
}

fn propagate_nat(cat: &FinCategory, source: &SetFunctor, target: &SetFunctor, eta: &mut Table) -> bool {
    let mut changed = true;
    while changed {
        changed = false;
        for f in 0..cat.n_morphisms() {
            let (i, j) = (cat.dom(f), cat.cod(f));
            for x in 0..source.size(i) {
                let Some(y) = eta[i][x] else { continue };
                let want = target.apply(f, y);
                let slot = &mut eta[j][source.apply(f, x)];
                match *slot {
                    Some(v) if v != want => return false,
                    Some(_) => {}
                    None => {
                        *slot = Some(want);
                        changed = true;
                    }
                }
            }
        }
    }
    true
}

fn search_nat(
    cat: &FinCategory,
    source: &SetFunctor,
    target: &SetFunctor,
    eta: Table,
    rng: &mut XorShift64Star,
    budget: &mut Budget,
) -> Option<Table> {
    let Some((o, x)) = first_open(&eta) else {
        return Some(eta);
    };
    let mut values: Vec<usize> = (0..target.size(o)).collect();
    rng.shuffle(&mut values);
    for v in values {
        if !budget.spend() {
            return None;
        }
        let mut next = eta.clone();
        next[o][x] = Some(v);
        if propagate_nat(cat, source, target, &mut next) {
            if let Some(done) = search_nat(cat, source, target, next, rng, budget) {
                return Some(done);
            }
        }
    }
    None
}

/// A random natural transformation, or `None` when the search finds none
/// within its budget.
pub fn random_nat_transform(
    cat: &FinCategory,
    source: &SetFunctor,
    target: &SetFunctor,
    rng: &mut XorShift64Star,
) -> Option<SetNatTransform> {
    let eta: Table = (0..cat.n_objects()).map(|o| vec![None; source.size(o)]).collect();
    let eta = search_nat(cat, source, target, eta, rng, &mut Budget(NODE_BUDGET))?;
    let components = eta
        .into_iter()
        .map(|row| row.into_iter().map(|v| v.expect("complete")).collect())
        .collect();
    Some(SetNatTransform::new(cat, source, target, components).expect("search respects naturality"))
}

/// A functor whose limit and colimit have different sizes.
#[derive(Clone, Debug)]
pub struct SetWitness {
    pub description: String,
    pub functor: SetFunctor,
    pub limit_size: usize,
    pub colimit_size: usize,
}

impl SetWitness {
    fn new(cat: &FinCategory, description: String, functor: SetFunctor) -> Self {
        SetWitness {
            description,
            limit_size: limit_set(cat, &functor).len(),
            colimit_size: colimit_set(cat, &functor).count,
            functor,
        }
    }

    pub fn separates(&self) -> bool {
        self.limit_size != self.colimit_size
    }
}

/// The witness functor shipped with a negative verdict.
pub fn witness_for(cat: &FinCategory, verdict: &Verdict) -> Option<SetWitness> {
    if verdict.answer {
        return None;
    }
    match &verdict.certificate {
        Certificate::EmptyCategory { .. } => Some(SetWitness::new(
            cat,
            "the empty diagram".into(),
            SetFunctor::constant(cat, 0),
        )),
        Certificate::NotConnected(parts) => Some(SetWitness::new(
            cat,
            "empty set on component 0, a point elsewhere".into(),
            witness_not_connected(cat, parts),
        )),
        Certificate::NotStronglyConnected { source, .. } => Some(SetWitness::new(
            cat,
            format!("empty set on source objects {source:?}, a point elsewhere"),
            witness_not_strongly_connected(cat, source),
        )),
        _ => representable_witness(cat).map(|(i, functor, _)| {
            let description = if cat.n_objects() == 1 {
                "regular action Hom(0, -)".to_string()
            } else {
                format!("representable Hom({i}, -)")
            };
            SetWitness::new(cat, description, functor)
        }),
    }
}

/// Outcome of [`sample_check_set`].
#[derive(Clone, Debug)]
pub struct SetOracleReport {
    pub verdict: Verdict,
    pub samples: usize,
    pub transforms: usize,
    pub bijective: usize,
    pub witness: Option<SetWitness>,
    pub inconsistencies: Vec<String>,
}

impl SetOracleReport {
    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }
}

fn decomposition_check(cat: &FinCategory, f: &SetFunctor, lim: usize, colim: usize) -> Option<String> {
    let parts = cat.connected_components();
    let (mut lim_prod, mut colim_sum) = (1usize, 0usize);
    for members in parts.all_members() {
        let (sub, emb) = cat.full_subcategory(&members);
        let g = f.restrict(&emb);
        lim_prod *= limit_set(&sub, &g).len();
        colim_sum += colimit_set(&sub, &g).count;
    }
    (lim_prod != lim || colim_sum != colim).then(|| {
        format!("component decomposition: lim {lim} vs product {lim_prod}, colim {colim} vs sum {colim_sum}")
    })
}

/// `|lim F|` against the limit over the endomorphism monoid `S(i,i) ∪ {id}`.
fn restriction_check(cat: &FinCategory, verdict: &Verdict, f: &SetFunctor, lim: usize) -> Vec<String> {
    let mut out = Vec::new();
    for cs in verdict.systems() {
        for (local, &i) in cs.embedding.objects.iter().enumerate() {
            let mut mors: Vec<usize> = cs
                .system
                .slot(local, local)
                .iter()
                .map(|&m| cs.embedding.morphisms[m])
                .collect();
            mors.push(cat.identity(i));
            mors.sort_unstable();
            mors.dedup();
            match cat.subcategory(&[i], &mors) {
                Ok((sub, emb)) => {
                    let n = limit_set(&sub, &f.restrict(&emb)).len();
                    if n != lim {
                        out.push(format!("restriction to object {i}: {n} vs {lim}"));
                    }
                }
                Err(e) => out.push(format!("S({i},{i}) with identity is not a monoid: {e}")),
            }
        }
    }
    out
}

/// Whether the canonical maps of `source` and `target` commute with `eta`.
fn naturality_check(
    cat: &FinCategory,
    eta: &SetNatTransform,
    source: (&[ComponentCanonical], &SetColimit),
    target: (&[ComponentCanonical], &SetColimit),
) -> Result<(), String> {
    let (src_canon, src_colim) = source;
    let (tgt_canon, tgt_colim) = target;
    // induced map on colimit classes
    let mut on_class = vec![usize::MAX; src_colim.count];
    for o in 0..cat.n_objects() {
        for (x, &y) in eta.component(o).iter().enumerate() {
            let (c, d) = (src_colim.class(o, x), tgt_colim.class(o, y));
            if on_class[c] != usize::MAX && on_class[c] != d {
                return Err(format!("map on colimits not well defined at class {c}"));
            }
            on_class[c] = d;
        }
    }
    for (sc, tc) in src_canon.iter().zip(tgt_canon) {
        for (t, &img) in sc.limit.iter().zip(&sc.image) {
            let mapped: Vec<usize> = sc.objects.iter().zip(t).map(|(&o, &x)| eta.component(o)[x]).collect();
            let Some(pos) = tc.limit.iter().position(|u| *u == mapped) else {
                return Err("image of a limit tuple is not compatible".into());
            };
            if tc.image[pos] != on_class[img] {
                return Err(format!("canonical map not natural on tuple {t:?}"));
            }
        }
    }
    Ok(())
}

/// Re-checks the Set verdict on random functors. Sample `k` draws from
/// stream `k` of `seed`; the transformation from sample `k - 1` to sample `k`
/// continues that stream.
pub fn sample_check_set(
    cat: &FinCategory,
    n_samples: usize,
    seed: u64,
    max_size: usize,
) -> Result<SetOracleReport, SamplingError> {
    let verdict = decide_set(cat)?;
    let mut report = SetOracleReport {
        witness: witness_for(cat, &verdict),
        verdict,
        samples: 0,
        transforms: 0,
        bijective: 0,
        inconsistencies: Vec::new(),
    };
    let answer = report.verdict.answer;
    match &report.witness {
        Some(w) if !w.separates() => report.inconsistencies.push(format!(
            "witness `{}` has |lim| = |colim| = {}",
            w.description, w.limit_size
        )),
        None if !answer => report.inconsistencies.push("negative verdict without a witness".into()),
        _ => {}
    }
    if answer {
        for i in 0..cat.n_objects() {
            let n = limit_set(cat, &representable(cat, i)).len();
            if n != 1 {
                report.inconsistencies.push(format!("limit of Hom({i}, -) has {n} elements"));
            }
        }
    }

    let mut prev: Option<(SetFunctor, Vec<ComponentCanonical>, SetColimit)> = None;
    for k in 0..n_samples {
        let mut rng = XorShift64Star::for_stream(seed, k as u64);
        let f = random_set_functor(cat, &mut rng, max_size)?;
        let colim = colimit_set(cat, &f);
        let canon = canonical_map(cat, &f);
        let lim = limit_set(cat, &f).len();
        report.samples += 1;

        if canon.iter().any(|c| !c.well_defined) {
            report.inconsistencies.push(format!("sample {k}: canonical map depends on the object"));
        }
        if let Some(msg) = decomposition_check(cat, &f, lim, colim.count) {
            report.inconsistencies.push(format!("sample {k}: {msg}"));
        }
        for msg in restriction_check(cat, &report.verdict, &f, lim) {
            report.inconsistencies.push(format!("sample {k}: {msg}"));
        }
        let bijective = canon.iter().all(ComponentCanonical::is_bijective);
        if bijective {
            report.bijective += 1;
        } else if answer {
            report.inconsistencies.push(format!("sample {k}: canonical map not bijective"));
        }
        if let Some((pf, pcanon, pcolim)) = &prev {
            if let Some(eta) = random_nat_transform(cat, pf, &f, &mut rng) {
                report.transforms += 1;
                if let Err(msg) = naturality_check(cat, &eta, (pcanon, pcolim), (&canon, &colim)) {
                    report.inconsistencies.push(format!("sample {k}: {msg}"));
                }
            }
        }
        prev = Some((f, canon, colim));
    }
    Ok(report)
}
