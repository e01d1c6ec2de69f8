//! Random linear functors and the sampled consistency check over `F_p`.

use thiserror::Error;

use super::{
    canonical_is_natural, lim_colim_vect, limit_constraints, norm_splitting, witness_mod, LimColimVect, ModWitness,
    VectError, VectFunctor, VectNatTransform,
};
use crate::category::{Embedding, FinCategory};
use crate::decision::{decide_mod, RingError, RingSpec, Verdict};
use crate::invariant::IsStructure;
use crate::linalg::MatrixFp;
use crate::rng::XorShift64Star;
use crate::set_oracle::{random_set_functor, SamplingError};
use crate::CategoryError;

pub const DEFAULT_MAX_DIM: usize = 6;

#[derive(Debug, Error)]
pub enum ModOracleError {
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Category(#[from] CategoryError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Vect(#[from] VectError),
}

fn random_matrix(p: u64, rows: usize, cols: usize, rng: &mut XorShift64Star) -> MatrixFp {
    let data = (0..rows * cols).map(|_| rng.below(p)).collect();
    MatrixFp::new(p, rows, cols, data).expect("prime")
}

fn random_invertible(p: u64, n: usize, rng: &mut XorShift64Star) -> MatrixFp {
    loop {
        let m = random_matrix(p, n, n, rng);
        if m.is_invertible() {
            return m;
        }
    }
}

fn conjugate_randomly(cat: &FinCategory, f: &VectFunctor, rng: &mut XorShift64Star) -> Result<VectFunctor, VectError> {
    let bases: Vec<MatrixFp> = f.dims().iter().map(|&d| random_invertible(f.p(), d, rng)).collect();
    f.conjugate(cat, &bases)
}

/// The free vector space on a random set functor (sets of at most
/// `min(max_dim, 4)` elements) in a random basis per object.
pub fn random_vect_functor(
    cat: &FinCategory,
    rng: &mut XorShift64Star,
    p: u64,
    max_dim: usize,
) -> Result<VectFunctor, ModOracleError> {
    let set = random_set_functor(cat, rng, max_dim.min(4))?;
    let lin = VectFunctor::linearize(cat, &set, p)?;
    Ok(conjugate_randomly(cat, &lin, rng)?)
}

/// A uniformly random element of the space of natural transformations.
pub fn random_vect_transform(
    cat: &FinCategory,
    source: &VectFunctor,
    target: &VectFunctor,
    rng: &mut XorShift64Star,
) -> Result<VectNatTransform, VectError> {
    let p = source.p();
    let n = cat.n_objects();
    let mut offsets = Vec::with_capacity(n);
    let mut total = 0;
    for o in 0..n {
        offsets.push(total);
        total += target.dim(o) * source.dim(o);
    }
    let var = |o: usize, r: usize, c: usize| offsets[o] + r * source.dim(o) + c;
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for f in (0..cat.n_morphisms()).filter(|&f| !cat.is_identity(f)) {
        let (i, j) = (cat.dom(f), cat.cod(f));
        let (af, ag) = (source.action(f), target.action(f));
        // (η_j · F(f) − G(f) · η_i)[r][c] = 0
        for r in 0..target.dim(j) {
            for c in 0..source.dim(i) {
                let mut row = vec![0u64; total];
                for m in 0..source.dim(j) {
                    let v = var(j, r, m);
                    row[v] = (row[v] + af.get(m, c)) % p;
                }
                for m in 0..target.dim(i) {
                    let v = var(i, m, c);
                    row[v] = (row[v] + p - ag.get(r, m)) % p;
                }
                rows.push(row);
            }
        }
    }
    let system = if rows.is_empty() {
        MatrixFp::zeros(p, 0, total)?
    } else {
        MatrixFp::new(p, rows.len(), total, rows.concat())?
    };
    let basis = system.nullspace();
    let coeffs: Vec<u64> = (0..basis.cols()).map(|_| rng.below(p)).collect();
    let x = basis.mul_vec(&coeffs)?;
    let components = (0..n)
        .map(|o| MatrixFp::new(p, target.dim(o), source.dim(o), x[offsets[o]..offsets[o] + target.dim(o) * source.dim(o)].to_vec()))
        .collect::<Result<Vec<_>, _>>()?;
    VectNatTransform::new(cat, source, target, components)
}

/// Reduction of one component to its group.
struct Reduction {
    embedding: Embedding,
    sub: FinCategory,
    structure: IsStructure,
    group: FinCategory,
}

fn reductions(verdict: &Verdict) -> Result<Vec<Reduction>, VectError> {
    verdict
        .systems()
        .iter()
        .map(|cs| {
            let structure = IsStructure::new(&cs.subcategory, &cs.system)
                .map_err(|e| VectError::Precondition(e.to_string()))?;
            Ok(Reduction {
                group: structure.group.as_category(&cs.subcategory),
                embedding: cs.embedding.clone(),
                sub: cs.subcategory.clone(),
                structure,
            })
        })
        .collect()
}

/// Glues functors defined on the components into one functor.
fn assemble(cat: &FinCategory, p: u64, parts: &[(&Embedding, VectFunctor)]) -> Result<VectFunctor, VectError> {
    let mut dims = vec![0; cat.n_objects()];
    let mut action: Vec<Option<MatrixFp>> = vec![None; cat.n_morphisms()];
    for (emb, f) in parts {
        for (k, &o) in emb.objects.iter().enumerate() {
            dims[o] = f.dim(k);
        }
        for (k, &m) in emb.morphisms.iter().enumerate() {
            action[m] = Some(f.action(k).clone());
        }
    }
    let action = action
        .into_iter()
        .enumerate()
        .map(|(m, a)| match a {
            Some(a) => Ok(a),
            None => MatrixFp::zeros(p, dims[cat.cod(m)], dims[cat.dom(m)]),
        })
        .collect::<Result<Vec<_>, _>>()?;
    VectFunctor::new(cat, p, dims, action)
}

/// Outcome of [`sample_check_mod`].
#[derive(Clone, Debug)]
pub struct ModOracleReport {
    pub p: u64,
    pub verdict: Verdict,
    pub samples: usize,
    /// Samples pulled back from a representation of the group of a component.
    pub pulled_back: usize,
    pub invertible: usize,
    pub transforms: usize,
    pub norm_checks: usize,
    pub witness: Option<ModWitness>,
    pub inconsistencies: Vec<String>,
}

impl ModOracleReport {
    pub fn is_consistent(&self) -> bool {
        self.inconsistencies.is_empty()
    }

    pub fn is_inconclusive(&self) -> bool {
        self.witness.as_ref().is_some_and(ModWitness::is_inconclusive)
    }
}

/// Re-checks the verdict over `F_p` on random functors. Odd samples of a
/// positive verdict are pulled back from random representations of the
/// component groups, whose averaging splittings are checked as well.
pub fn sample_check_mod(
    cat: &FinCategory,
    p: u64,
    n_samples: usize,
    seed: u64,
    max_dim: usize,
) -> Result<ModOracleReport, ModOracleError> {
    let ring = RingSpec::prime_field(p)?;
    let verdict = decide_mod(cat, ring)?;
    let reds = reductions(&verdict)?;
    let mut report = ModOracleReport {
        p,
        witness: None,
        samples: 0,
        pulled_back: 0,
        invertible: 0,
        transforms: 0,
        norm_checks: 0,
        inconsistencies: Vec::new(),
        verdict,
    };
    let answer = report.verdict.answer;
    if !answer {
        match witness_mod(cat, p) {
            Ok(w) => {
                if !w.separates() && !w.is_inconclusive() {
                    report.inconsistencies.push(format!("witness `{}` does not separate", w.description()));
                }
                report.witness = Some(w);
            }
            Err(e) => report.inconsistencies.push(format!("no witness: {e}")),
        }
    }
    let discrete = (0..cat.n_morphisms()).all(|f| cat.is_identity(f));

    let mut prev: Option<(VectFunctor, LimColimVect)> = None;
    for k in 0..n_samples {
        let mut rng = XorShift64Star::for_stream(seed, k as u64);
        let f = if !reds.is_empty() && k % 2 == 1 {
            let mut parts = Vec::with_capacity(reds.len());
            for red in &reds {
                let rep = random_vect_functor(&red.group, &mut rng, p, max_dim)?;
                let ns = norm_splitting(&red.group, &rep)?;
                report.norm_checks += 1;
                if !ns.holds() {
                    report.inconsistencies.push(format!("sample {k}: averaging does not split the canonical map"));
                }
                parts.push((&red.embedding, VectFunctor::pullback(&red.sub, &rep, &red.structure.to_group)?));
            }
            report.pulled_back += 1;
            assemble(cat, p, &parts)?
        } else {
            random_vect_functor(cat, &mut rng, p, max_dim)?
        };
        let data = lim_colim_vect(cat, &f);
        report.samples += 1;

        let rank = limit_constraints(cat, &f).rank();
        if data.limit.cols() + rank != f.total_dim() {
            report.inconsistencies.push(format!("sample {k}: rank-nullity fails"));
        }
        if !data.canonical.well_defined {
            report.inconsistencies.push(format!("sample {k}: canonical map depends on the object"));
        }
        if data.canonical.is_invertible() {
            report.invertible += 1;
        } else if answer || discrete {
            report.inconsistencies.push(format!("sample {k}: canonical map not invertible"));
        }
        if let Some((pf, pdata)) = &prev {
            let eta = random_vect_transform(cat, pf, &f, &mut rng)?;
            report.transforms += 1;
            if !canonical_is_natural(&eta, (pf, pdata), (&f, &data)) {
                report.inconsistencies.push(format!("sample {k}: canonical map not natural"));
            }
        }
        prev = Some((f, data));
    }
    Ok(report)
}
