//! Module-side certificates: the averaging splitting for groups, witness
//! diagrams for negative verdicts, and the free-functor probe.

use super::{
    canonical_map_vect, colimit_vect, limit_vect, solve_naturality, NaturalityOutcome, NaturalityProblem,
    VectError, VectFunctor, VectNatTransform,
};
use crate::category::{Embedding, FinCategory};
use crate::decision::{decide_mod, Certificate, RingSpec};
use crate::invariant::{find_is, Family, IsStructure};
use crate::linalg::{inv_mod, MatrixFp};
use crate::set_oracle::representable;

/// Left regular representation of a one-object category: `g` sends the basis
/// vector of `h` to that of `g ∘ h`.
pub fn regular_representation(cat: &FinCategory, p: u64) -> Result<VectFunctor, VectError> {
    if cat.n_objects() != 1 {
        return Err(VectError::Precondition("expected a one-object category".into()));
    }
    let n = cat.n_morphisms();
    let action = (0..n)
        .map(|g| {
            let mut a = MatrixFp::zeros(p, n, n)?;
            for h in 0..n {
                a.set(cat.compose(g, h), h, 1);
            }
            Ok(a)
        })
        .collect::<Result<Vec<_>, crate::linalg::LinalgError>>()?;
    VectFunctor::new(cat, p, vec![n], action)
}

/// `j ↦ F_p^{hom(i, j)}` with post-composition.
pub fn free_functor(cat: &FinCategory, i: usize, p: u64) -> Result<VectFunctor, VectError> {
    VectFunctor::linearize(cat, &representable(cat, i), p)
}

/// The map `j* → i*` induced by `f: i → j`, sending `h` to `h ∘ f`.
fn precomposition(
    cat: &FinCategory,
    f: usize,
    source: &VectFunctor,
    target: &VectFunctor,
    p: u64,
) -> Result<VectNatTransform, VectError> {
    let (i, j) = (cat.dom(f), cat.cod(f));
    let components = (0..cat.n_objects())
        .map(|k| {
            let (from, to) = (cat.hom(j, k), cat.hom(i, k));
            let mut m = MatrixFp::zeros(p, to.len(), from.len())?;
            for (c, &h) in from.iter().enumerate() {
                let hf = cat.compose(h, f);
                let r = to.iter().position(|&u| u == hf).expect("h ∘ f lies in hom(i, k)");
                m.set(r, c, 1);
            }
            Ok(m)
        })
        .collect::<Result<Vec<_>, crate::linalg::LinalgError>>()?;
    VectNatTransform::new(cat, source, target, components)
}

/// Limit of the free functor on `i`, with supports when it is a line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeProbe {
    pub object: usize,
    pub dim: usize,
    /// `supports[j]`: morphisms of `hom(i, j)` with a nonzero coefficient in
    /// a spanning limit vector. Present when `dim == 1`.
    pub supports: Option<Vec<Vec<usize>>>,
}

pub fn free_probe(cat: &FinCategory, i: usize, p: u64) -> Result<FreeProbe, VectError> {
    let f = free_functor(cat, i, p)?;
    let lim = limit_vect(cat, &f);
    let supports = (lim.cols() == 1).then(|| {
        let v = lim.column(0);
        let off = f.offsets();
        (0..cat.n_objects())
            .map(|j| {
                cat.hom(i, j)
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| v[off[j] + k] != 0)
                    .map(|(_, &m)| m)
                    .collect()
            })
            .collect()
    });
    Ok(FreeProbe {
        object: i,
        dim: lim.cols(),
        supports,
    })
}

/// Probes every object; when every limit is a line, the supports assemble
/// into a family `S(i, j)` to be checked with `verify_is`.
pub fn free_probe_family(cat: &FinCategory, p: u64) -> Result<(Vec<FreeProbe>, Option<Family>), VectError> {
    let probes = (0..cat.n_objects())
        .map(|i| free_probe(cat, i, p))
        .collect::<Result<Vec<_>, _>>()?;
    let family = probes
        .iter()
        .map(|pr| pr.supports.clone())
        .collect::<Option<Vec<_>>>()
        .map(Family::from_slots);
    Ok((probes, family))
}

/// The averaging operator of a group representation and the inverse of the
/// canonical map it induces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormSplitting {
    /// `|G|⁻¹ · Σ_g F(g)`.
    pub norm: MatrixFp,
    /// Coinvariants to invariants, in the oracle's bases.
    pub splitting: Option<MatrixFp>,
    pub idempotent: bool,
    pub image_is_invariants: bool,
    /// `ψ · M = 1` and `M · ψ = 1`.
    pub inverts: bool,
}

impl NormSplitting {
    pub fn holds(&self) -> bool {
        self.idempotent && self.image_is_invariants && self.inverts
    }
}

fn is_group(cat: &FinCategory) -> bool {
    cat.n_objects() == 1 && {
        let id = cat.identity(0);
        (0..cat.n_morphisms()).all(|f| (0..cat.n_morphisms()).any(|g| cat.compose(g, f) == id && cat.compose(f, g) == id))
    }
}

pub fn norm_splitting(cat: &FinCategory, f: &VectFunctor) -> Result<NormSplitting, VectError> {
    let p = f.p();
    if !is_group(cat) {
        return Err(VectError::Precondition("norm splitting needs a group".into()));
    }
    let order = cat.n_morphisms() as u64;
    if order % p == 0 {
        return Err(VectError::Precondition(format!("{p} divides the group order {order}")));
    }
    let d = f.dim(0);
    let mut sum = MatrixFp::zeros(p, d, d)?;
    for g in 0..cat.n_morphisms() {
        sum = sum.add(f.action(g))?;
    }
    let norm = sum.scale(inv_mod(order % p, p));
    let limit = limit_vect(cat, f);
    let colim = colimit_vect(cat, f);
    let canonical = canonical_map_vect(cat, f).matrix;
    let idempotent = norm.mul(&norm)? == norm;
    let image_is_invariants = norm.rank() == limit.cols() && norm.mul(&limit)? == limit;
    let splitting = limit.solve_matrix(&norm.mul(&colim.section)?)?;
    let inverts = match &splitting {
        Some(m) => {
            canonical.mul(m)? == MatrixFp::identity(p, colim.dim())?
                && m.mul(&canonical)? == MatrixFp::identity(p, limit.cols())?
        }
        None => false,
    };
    Ok(NormSplitting {
        norm,
        splitting,
        idempotent,
        image_is_invariants,
        inverts,
    })
}

/// Evidence that limits and colimits of `F_p`-vector spaces disagree.
#[derive(Clone, Debug)]
pub enum ModWitness {
    /// A single functor whose limit and colimit have different dimensions.
    Dimension {
        description: String,
        functor: VectFunctor,
        limit_dim: usize,
        colimit_dim: usize,
    },
    /// A diagram of functors on which no natural family of isomorphisms
    /// exists.
    Naturality {
        description: String,
        problem: NaturalityProblem,
        outcome: NaturalityOutcome,
    },
}

impl ModWitness {
    pub fn separates(&self) -> bool {
        match self {
            ModWitness::Dimension {
                limit_dim, colimit_dim, ..
            } => limit_dim != colimit_dim,
            ModWitness::Naturality { outcome, .. } => outcome.is_infeasible(),
        }
    }

    pub fn is_inconclusive(&self) -> bool {
        matches!(
            self,
            ModWitness::Naturality {
                outcome: NaturalityOutcome::Inconclusive { .. },
                ..
            }
        )
    }

    pub fn description(&self) -> &str {
        match self {
            ModWitness::Dimension { description, .. } | ModWitness::Naturality { description, .. } => description,
        }
    }
}

/// Extends a functor on a connected component by zero elsewhere.
fn extend_by_zero(cat: &FinCategory, emb: &Embedding, f: &VectFunctor) -> Result<VectFunctor, VectError> {
    let p = f.p();
    let mut dims = vec![0; cat.n_objects()];
    for (k, &o) in emb.objects.iter().enumerate() {
        dims[o] = f.dim(k);
    }
    let mut action = (0..cat.n_morphisms())
        .map(|m| MatrixFp::zeros(p, dims[cat.cod(m)], dims[cat.dom(m)]))
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &m) in emb.morphisms.iter().enumerate() {
        action[m] = f.action(k).clone();
    }
    VectFunctor::new(cat, p, dims, action)
}

fn extend_transform(
    cat: &FinCategory,
    emb: &Embedding,
    eta: &VectNatTransform,
    source: &VectFunctor,
    target: &VectFunctor,
) -> Result<VectNatTransform, VectError> {
    let p = source.p();
    let mut components = (0..cat.n_objects())
        .map(|o| MatrixFp::zeros(p, target.dim(o), source.dim(o)))
        .collect::<Result<Vec<_>, _>>()?;
    for (k, &o) in emb.objects.iter().enumerate() {
        components[o] = eta.component(k).clone();
    }
    VectNatTransform::new(cat, source, target, components)
}

fn dimension_witness(cat: &FinCategory, description: String, functor: VectFunctor) -> ModWitness {
    ModWitness::Dimension {
        description,
        limit_dim: limit_vect(cat, &functor).cols(),
        colimit_dim: colimit_vect(cat, &functor).dim(),
        functor,
    }
}

/// Free functors and the precomposition maps between them, on one component.
fn free_witness(cat: &FinCategory, sub: &FinCategory, emb: &Embedding, p: u64) -> Result<ModWitness, VectError> {
    let free = (0..sub.n_objects())
        .map(|i| free_functor(sub, i, p))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, f) in free.iter().enumerate() {
        if limit_vect(sub, f).cols() != 1 {
            let ext = extend_by_zero(cat, emb, f)?;
            return Ok(dimension_witness(
                cat,
                format!("free functor on object {}", emb.objects[i]),
                ext,
            ));
        }
    }
    let functors = free
        .iter()
        .map(|f| extend_by_zero(cat, emb, f))
        .collect::<Result<Vec<_>, _>>()?;
    let mut transforms = Vec::new();
    for m in (0..sub.n_morphisms()).filter(|&m| !sub.is_identity(m)) {
        let (i, j) = (sub.dom(m), sub.cod(m));
        let eta = precomposition(sub, m, &free[j], &free[i], p)?;
        transforms.push((j, i, extend_transform(cat, emb, &eta, &functors[j], &functors[i])?));
    }
    let problem = NaturalityProblem { p, functors, transforms };
    Ok(ModWitness::Naturality {
        description: "free functors with all precomposition maps".into(),
        outcome: solve_naturality(cat, &problem),
        problem,
    })
}

/// Regular representation and augmentation of `G_I`, pulled back to one
/// component.
fn group_witness(cat: &FinCategory, sub: &FinCategory, emb: &Embedding, p: u64) -> Result<ModWitness, VectError> {
    let search = find_is(sub).map_err(|e| VectError::Precondition(e.to_string()))?;
    let is = search
        .preferred()
        .ok_or_else(|| VectError::Precondition("component has no invariant system".into()))?;
    let st = IsStructure::new(sub, is).map_err(|e| VectError::Precondition(e.to_string()))?;
    let gcat = st.group.as_category(sub);
    let n = gcat.n_morphisms();
    let reg = regular_representation(&gcat, p)?;
    let triv = VectFunctor::new(&gcat, p, vec![1], vec![MatrixFp::identity(p, 1)?; n])?;
    let reg_i = VectFunctor::pullback(sub, &reg, &st.to_group)?;
    let triv_i = VectFunctor::pullback(sub, &triv, &st.to_group)?;
    let ones = MatrixFp::new(p, 1, n, vec![1; n])?;
    let eps = VectNatTransform::new(sub, &reg_i, &triv_i, vec![ones; sub.n_objects()])?;
    let (f, g) = (extend_by_zero(cat, emb, &reg_i)?, extend_by_zero(cat, emb, &triv_i)?);
    let eps = extend_transform(cat, emb, &eps, &f, &g)?;
    let problem = NaturalityProblem {
        p,
        functors: vec![f, g],
        transforms: vec![(0, 1, eps)],
    };
    Ok(ModWitness::Naturality {
        description: format!("regular representation of a group of order {n} and its augmentation"),
        outcome: solve_naturality(cat, &problem),
        problem,
    })
}

/// Witness for a negative verdict over `F_p`. Fails when the verdict is
/// positive.
pub fn witness_mod(cat: &FinCategory, p: u64) -> Result<ModWitness, VectError> {
    let ring = RingSpec::prime_field(p).map_err(|e| VectError::Precondition(e.to_string()))?;
    let verdict = decide_mod(cat, ring).map_err(|e| VectError::Precondition(e.to_string()))?;
    if verdict.answer {
        return Err(VectError::Precondition("limits and colimits agree".into()));
    }
    let component_of = |c: usize| cat.full_subcategory(&cat.connected_components().members(c));
    match &verdict.certificate {
        Certificate::NotStronglyConnected { source, .. } => {
            let dims: Vec<usize> = (0..cat.n_objects()).map(|o| usize::from(!source.contains(&o))).collect();
            let action = (0..cat.n_morphisms())
                .map(|m| {
                    let (r, c) = (dims[cat.cod(m)], dims[cat.dom(m)]);
                    MatrixFp::new(p, r, c, vec![1; r * c])
                })
                .collect::<Result<Vec<_>, _>>()?;
            let functor = VectFunctor::new(cat, p, dims, action)?;
            Ok(dimension_witness(
                cat,
                format!("zero on source objects {source:?}, F_{p} elsewhere"),
                functor,
            ))
        }
        Certificate::NoInvariantSystem { component, .. } => {
            let (sub, emb) = component_of(*component);
            free_witness(cat, &sub, &emb, p)
        }
        Certificate::CardinalityNotInvertible { component, .. } => {
            let (sub, emb) = component_of(*component);
            group_witness(cat, &sub, &emb, p)
        }
        other => Err(VectError::Precondition(format!(
            "no module witness for certificate `{}`",
            other.kind()
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> FinCategory {
        FinCategory::from_group_cyclic(n).unwrap()
    }

    fn left_zero_adjoined() -> FinCategory {
        FinCategory::from_semigroup_adjoin_unit(&["e", "f"], &[vec![0, 0], vec![1, 1]]).unwrap()
    }

    #[test]
    fn norm_on_c2_over_f3() {
        let c2 = c(2);
        let reg = regular_representation(&c2, 3).unwrap();
        let ns = norm_splitting(&c2, &reg).unwrap();
        assert_eq!(ns.norm.to_rows(), vec![vec![2, 2], vec![2, 2]]);
        assert!(ns.holds());
    }

    #[test]
    fn norm_on_c3_over_f2() {
        let c3 = c(3);
        let reg = regular_representation(&c3, 2).unwrap();
        let ns = norm_splitting(&c3, &reg).unwrap();
        assert_eq!(ns.norm.to_rows(), vec![vec![1; 3]; 3]);
        assert!(ns.holds());
    }

    #[test]
    fn norm_on_trivial_group() {
        let c1 = c(1);
        let f = VectFunctor::new(&c1, 5, vec![2], vec![MatrixFp::identity(5, 2).unwrap()]).unwrap();
        let ns = norm_splitting(&c1, &f).unwrap();
        assert_eq!(ns.norm, MatrixFp::identity(5, 2).unwrap());
        assert!(ns.holds());
    }

    #[test]
    fn norm_rejects_bad_order() {
        let c2 = c(2);
        let reg = regular_representation(&c2, 2).unwrap();
        assert!(matches!(norm_splitting(&c2, &reg), Err(VectError::Precondition(_))));
        let m = FinCategory::idempotent_monoid();
        let reg = regular_representation(&m, 3).unwrap();
        assert!(matches!(norm_splitting(&m, &reg), Err(VectError::Precondition(_))));
    }

    #[test]
    fn group_witnesses_are_infeasible() {
        let w = witness_mod(&c(2), 2).unwrap();
        assert!(w.separates(), "{w:?}");
        let au = FinCategory::adjoin_unit(&c(2)).unwrap();
        let w = witness_mod(&au, 2).unwrap();
        assert!(matches!(w, ModWitness::Naturality { .. }));
        assert!(w.separates(), "{w:?}");
        let w = witness_mod(&c(6), 3).unwrap();
        assert!(w.separates());
    }

    #[test]
    fn witness_needs_negative_verdict() {
        assert!(matches!(
            witness_mod(&FinCategory::idempotent_monoid(), 2),
            Err(VectError::Precondition(_))
        ));
        assert!(witness_mod(&c(2), 3).is_err());
    }

    #[test]
    fn split_witness_has_dimension_gap() {
        let w = witness_mod(&FinCategory::parallel(2), 5).unwrap();
        assert!(matches!(w, ModWitness::Dimension { limit_dim: 0, colimit_dim: 1, .. }));
    }

    #[test]
    fn free_witness_for_left_zero() {
        let cat = left_zero_adjoined();
        let w = witness_mod(&cat, 3).unwrap();
        assert!(w.separates(), "{w:?}");
    }

    #[test]
    fn probe_on_idempotent_monoid() {
        let m = FinCategory::idempotent_monoid();
        let e = m.find_morphism("e").unwrap();
        let probe = free_probe(&m, 0, 3).unwrap();
        assert_eq!(probe.dim, 1);
        assert_eq!(probe.supports, Some(vec![vec![e]]));
    }

    #[test]
    fn probe_on_c2_over_f3() {
        let probe = free_probe(&c(2), 0, 3).unwrap();
        assert_eq!(probe.dim, 1);
        assert_eq!(probe.supports, Some(vec![vec![0, 1]]));
    }

    #[test]
    fn probe_on_left_zero_fails() {
        let cat = left_zero_adjoined();
        let (probes, family) = free_probe_family(&cat, 3).unwrap();
        assert_ne!(probes[0].dim, 1);
        assert!(family.is_none());
    }

    #[test]
    fn probe_family_recovers_system() {
        let cat = FinCategory::adjoin_unit(&c(2)).unwrap();
        let (_, family) = free_probe_family(&cat, 3).unwrap();
        let family = family.unwrap();
        assert!(crate::invariant::verify_is(&cat, &family).is_ok());
    }
}
