//! Limits, colimits and the canonical map for diagrams of `F_p`-vector spaces.
//!
//! A functor assigns each object a dimension and each morphism a matrix. The
//! direct sum `⊕_i F(i)` is laid out block by block in object order; the limit
//! is a subspace of it and the colimit a quotient of it.

mod naturality;
mod sample;
mod witness;

use thiserror::Error;

use crate::category::{Embedding, FinCategory};
use crate::linalg::{LinalgError, MatrixFp};
use crate::set_oracle::SetFunctor;

pub use naturality::{solve_naturality, NaturalityOutcome, NaturalityProblem, EXHAUSTIVE_LIMIT, SAMPLING_TRIALS};
pub use sample::{
    random_vect_functor, random_vect_transform, sample_check_mod, ModOracleError, ModOracleReport, DEFAULT_MAX_DIM,
};
pub use witness::{
    free_functor, free_probe, free_probe_family, norm_splitting, regular_representation, witness_mod, FreeProbe,
    ModWitness, NormSplitting,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VectError {
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("matrix of morphism {0} has the wrong shape")]
    MatrixShape(usize),
    #[error("identity morphism {0} does not act as the identity")]
    Identity(usize),
    #[error("composition fails for ({g}, {f})")]
    Composition { g: usize, f: usize },
    #[error("naturality square fails at morphism {0}")]
    Naturality(usize),
    #[error("{0}")]
    Precondition(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A functor into finite-dimensional `F_p`-vector spaces.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectFunctor {
    p: u64,
    dims: Vec<usize>,
    action: Vec<MatrixFp>,
}

impl VectFunctor {
    pub fn new(cat: &FinCategory, p: u64, dims: Vec<usize>, action: Vec<MatrixFp>) -> Result<Self, VectError> {
        if dims.len() != cat.n_objects() {
            return Err(VectError::Shape {
                expected: cat.n_objects(),
                got: dims.len(),
            });
        }
        if action.len() != cat.n_morphisms() {
            return Err(VectError::Shape {
                expected: cat.n_morphisms(),
                got: action.len(),
            });
        }
        for (f, a) in action.iter().enumerate() {
            if a.p() != p || a.shape() != (dims[cat.cod(f)], dims[cat.dom(f)]) {
                return Err(VectError::MatrixShape(f));
            }
        }
        for o in 0..cat.n_objects() {
            let id = cat.identity(o);
            if action[id] != MatrixFp::identity(p, dims[o])? {
                return Err(VectError::Identity(id));
            }
        }
        for f in 0..cat.n_morphisms() {
            for g in cat.outgoing(cat.cod(f)) {
                if action[cat.compose(g, f)] != action[g].mul(&action[f])? {
                    return Err(VectError::Composition { g, f });
                }
            }
        }
        Ok(VectFunctor { p, dims, action })
    }

    /// Free vector space on a set functor; morphisms act by the induced
    /// 0/1 matrices.
    pub fn linearize(cat: &FinCategory, f: &SetFunctor, p: u64) -> Result<Self, VectError> {
        let action = (0..cat.n_morphisms())
            .map(|m| {
                let mut a = MatrixFp::zeros(p, f.size(cat.cod(m)), f.size(cat.dom(m)))?;
                for (x, &y) in f.table(m).iter().enumerate() {
                    a.set(y, x, 1);
                }
                Ok(a)
            })
            .collect::<Result<Vec<_>, LinalgError>>()?;
        Self::new(cat, p, f.sizes().to_vec(), action)
    }

    /// `F ∘ φ` for a functor `φ` into a one-object category, given by its
    /// morphism map.
    pub fn pullback(cat: &FinCategory, rep: &VectFunctor, on_morphisms: &[usize]) -> Result<Self, VectError> {
        let d = rep.dims[0];
        let action = on_morphisms.iter().map(|&g| rep.action[g].clone()).collect();
        Self::new(cat, rep.p, vec![d; cat.n_objects()], action)
    }

    /// Transports the functor along invertible matrices `P_i`:
    /// `f ↦ P_j · F(f) · P_i⁻¹`.
    pub fn conjugate(&self, cat: &FinCategory, bases: &[MatrixFp]) -> Result<Self, VectError> {
        let inverses = bases
            .iter()
            .map(|b| b.inverse().ok_or_else(|| VectError::Precondition("change of basis is singular".into())))
            .collect::<Result<Vec<_>, _>>()?;
        let action = (0..cat.n_morphisms())
            .map(|f| bases[cat.cod(f)].mul(&self.action[f])?.mul(&inverses[cat.dom(f)]))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(cat, self.p, self.dims.clone(), action)
    }

    pub fn restrict(&self, embedding: &Embedding) -> VectFunctor {
        VectFunctor {
            p: self.p,
            dims: embedding.objects.iter().map(|&o| self.dims[o]).collect(),
            action: embedding.morphisms.iter().map(|&f| self.action[f].clone()).collect(),
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self, object: usize) -> usize {
        self.dims[object]
    }

    pub fn action(&self, f: usize) -> &MatrixFp {
        &self.action[f]
    }

    /// Start of each object's block in the direct sum.
    pub fn offsets(&self) -> Vec<usize> {
        self.dims
            .iter()
            .scan(0, |acc, &d| {
                let start = *acc;
                *acc += d;
                Some(start)
            })
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }
}

/// A natural transformation between linear functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectNatTransform {
    components: Vec<MatrixFp>,
}

impl VectNatTransform {
    pub fn new(
        cat: &FinCategory,
        source: &VectFunctor,
        target: &VectFunctor,
        components: Vec<MatrixFp>,
    ) -> Result<Self, VectError> {
        if components.len() != cat.n_objects() {
            return Err(VectError::Shape {
                expected: cat.n_objects(),
                got: components.len(),
            });
        }
        for (o, c) in components.iter().enumerate() {
            if c.shape() != (target.dim(o), source.dim(o)) {
                return Err(VectError::MatrixShape(cat.identity(o)));
            }
        }
        for f in 0..cat.n_morphisms() {
            let (i, j) = (cat.dom(f), cat.cod(f));
            if components[j].mul(source.action(f))? != target.action(f).mul(&components[i])? {
                return Err(VectError::Naturality(f));
            }
        }
        Ok(VectNatTransform { components })
    }

    pub fn component(&self, object: usize) -> &MatrixFp {
        &self.components[object]
    }

    /// Block-diagonal map between the direct sums.
    pub fn total(&self, source: &VectFunctor, target: &VectFunctor) -> MatrixFp {
        let mut m = MatrixFp::zeros(source.p, target.total_dim(), source.total_dim()).expect("prime");
        let (so, to) = (source.offsets(), target.offsets());
        for (o, c) in self.components.iter().enumerate() {
            for r in 0..c.rows() {
                for s in 0..c.cols() {
                    m.set(to[o] + r, so[o] + s, c.get(r, s));
                }
            }
        }
        m
    }
}

/// The stacked constraints `F(f)·x_i − x_j = 0`, one block row per
/// non-identity morphism.
pub fn limit_constraints(cat: &FinCategory, f: &VectFunctor) -> MatrixFp {
    let p = f.p;
    let off = f.offsets();
    let total = f.total_dim();
    let mut rows = MatrixFp::zeros(p, 0, total).expect("prime");
    for m in (0..cat.n_morphisms()).filter(|&m| !cat.is_identity(m)) {
        let (i, j) = (cat.dom(m), cat.cod(m));
        let a = f.action(m);
        let mut block = MatrixFp::zeros(p, f.dims[j], total).expect("prime");
        for r in 0..a.rows() {
            for c in 0..a.cols() {
                block.set(r, off[i] + c, a.get(r, c));
            }
            let cur = block.get(r, off[j] + r);
            block.set(r, off[j] + r, (cur + p - 1) % p);
        }
        rows = rows.vstack(&block).expect("same width");
    }
    rows
}

/// Columns `ι_j F(f) e_c − ι_i e_c`, one per non-identity morphism and basis
/// vector of its domain.
pub fn colimit_relations(cat: &FinCategory, f: &VectFunctor) -> MatrixFp {
    let p = f.p;
    let off = f.offsets();
    let total = f.total_dim();
    let mut cols = Vec::new();
    for m in (0..cat.n_morphisms()).filter(|&m| !cat.is_identity(m)) {
        let (i, j) = (cat.dom(m), cat.cod(m));
        let a = f.action(m);
        for c in 0..a.cols() {
            let mut v = vec![0u64; total];
            for r in 0..a.rows() {
                v[off[j] + r] = a.get(r, c);
            }
            v[off[i] + c] = (v[off[i] + c] + p - 1) % p;
            cols.push(v);
        }
    }
    MatrixFp::from_columns(p, total, &cols).expect("prime")
}

/// Basis of the limit as the columns of a `total × k` matrix.
pub fn limit_vect(cat: &FinCategory, f: &VectFunctor) -> MatrixFp {
    limit_constraints(cat, f).nullspace()
}

/// The colimit as a quotient of the direct sum.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectColimit {
    /// Basis of the relation subspace spanned by `ι_j F(f) v − ι_i v`.
    pub relations: MatrixFp,
    /// `k × total`: coordinates of a vector's class.
    pub projection: MatrixFp,
    /// `total × k`: standard basis vectors representing each class; the
    /// complement of the relations chosen by pivot columns.
    pub section: MatrixFp,
}

impl VectColimit {
    pub fn dim(&self) -> usize {
        self.projection.rows()
    }
}

pub fn colimit_vect(cat: &FinCategory, f: &VectFunctor) -> VectColimit {
    let p = f.p;
    let total = f.total_dim();
    let relations = colimit_relations(cat, f).image();
    let r = relations.cols();
    let id = MatrixFp::identity(p, total).expect("prime");
    let (_, pivots) = relations.hstack(&id).expect("same height").rref();
    let complement: Vec<usize> = pivots.iter().filter(|&&c| c >= r).map(|&c| c - r).collect();
    let cols: Vec<Vec<u64>> = complement
        .iter()
        .map(|&c| (0..total).map(|x| u64::from(x == c)).collect())
        .collect();
    let section = MatrixFp::from_columns(p, total, &cols).expect("prime");
    let basis = relations.hstack(&section).expect("same height");
    let inv = basis.inverse().expect("relations plus complement form a basis");
    VectColimit {
        projection: inv.row_block(r, total),
        relations,
        section,
    }
}

/// The canonical map `lim F → colim F` in the bases chosen by
/// [`limit_vect`] and [`colimit_vect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CanonicalVect {
    pub matrix: MatrixFp,
    /// Whether every object of each component yields the same map.
    pub well_defined: bool,
}

impl CanonicalVect {
    pub fn is_invertible(&self) -> bool {
        self.matrix.is_invertible()
    }
}

/// `Q · E_i · L`, the route through object `i`.
fn route(f: &VectFunctor, colim: &VectColimit, limit: &MatrixFp, object: usize) -> MatrixFp {
    let off = f.offsets()[object];
    let mut e = MatrixFp::zeros(f.p, f.total_dim(), f.total_dim()).expect("prime");
    for k in off..off + f.dims[object] {
        e.set(k, k, 1);
    }
    colim.projection.mul(&e).and_then(|m| m.mul(limit)).expect("shapes agree")
}

fn canonical_from(cat: &FinCategory, f: &VectFunctor, limit: &MatrixFp, colim: &VectColimit) -> CanonicalVect {
    let mut matrix = MatrixFp::zeros(f.p, colim.dim(), limit.cols()).expect("prime");
    let mut well_defined = true;
    for members in cat.connected_components().all_members() {
        let first = route(f, colim, limit, members[0]);
        well_defined &= members[1..].iter().all(|&o| route(f, colim, limit, o) == first);
        matrix = matrix.add(&first).expect("same shape");
    }
    CanonicalVect { matrix, well_defined }
}

pub fn canonical_map_vect(cat: &FinCategory, f: &VectFunctor) -> CanonicalVect {
    let limit = limit_vect(cat, f);
    let colim = colimit_vect(cat, f);
    canonical_from(cat, f, &limit, &colim)
}

/// Limit, colimit and canonical map of one functor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimColimVect {
    pub limit: MatrixFp,
    pub colimit: VectColimit,
    pub canonical: CanonicalVect,
}

pub fn lim_colim_vect(cat: &FinCategory, f: &VectFunctor) -> LimColimVect {
    let limit = limit_vect(cat, f);
    let colimit = colimit_vect(cat, f);
    LimColimVect {
        canonical: canonical_from(cat, f, &limit, &colimit),
        limit,
        colimit,
    }
}

/// `lim(η)` in the chosen limit bases.
pub fn limit_map(
    eta: &VectNatTransform,
    source: (&VectFunctor, &MatrixFp),
    target: (&VectFunctor, &MatrixFp),
) -> MatrixFp {
    let image = eta.total(source.0, target.0).mul(source.1).expect("shapes agree");
    target
        .1
        .solve_matrix(&image)
        .expect("shapes agree")
        .expect("a natural map sends compatible families to compatible families")
}

/// `colim(η)` in the chosen colimit coordinates.
pub fn colimit_map(
    eta: &VectNatTransform,
    source: (&VectFunctor, &VectColimit),
    target: (&VectFunctor, &VectColimit),
) -> MatrixFp {
    target
        .1
        .projection
        .mul(&eta.total(source.0, target.0))
        .and_then(|m| m.mul(&source.1.section))
        .expect("shapes agree")
}

/// Whether `colim(η)·ψ_F = ψ_G·lim(η)`.
pub fn canonical_is_natural(
    eta: &VectNatTransform,
    source: (&VectFunctor, &LimColimVect),
    target: (&VectFunctor, &LimColimVect),
) -> bool {
    let lm = limit_map(eta, (source.0, &source.1.limit), (target.0, &target.1.limit));
    let cm = colimit_map(eta, (source.0, &source.1.colimit), (target.0, &target.1.colimit));
    cm.mul(&source.1.canonical.matrix) == target.1.canonical.matrix.mul(&lm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> FinCategory {
        FinCategory::from_group_cyclic(n).unwrap()
    }

    #[test]
    fn trivial_action_limit() {
        let c2 = c(2);
        let id = MatrixFp::identity(3, 2).unwrap();
        let f = VectFunctor::new(&c2, 3, vec![2], vec![id.clone(), id]).unwrap();
        assert_eq!(limit_vect(&c2, &f).cols(), 2);
        assert_eq!(colimit_vect(&c2, &f).dim(), 2);
        assert!(canonical_map_vect(&c2, &f).is_invertible());
    }

    #[test]
    fn regular_c2_over_f3_and_f2() {
        let c2 = c(2);
        let f3 = regular_representation(&c2, 3).unwrap();
        let lim = limit_vect(&c2, &f3);
        assert_eq!(lim.columns(), vec![vec![1, 1]]);
        assert_eq!(colimit_vect(&c2, &f3).dim(), 1);
        let canon = canonical_map_vect(&c2, &f3);
        assert_eq!(canon.matrix.to_rows(), vec![vec![2]]);
        let f2 = regular_representation(&c2, 2).unwrap();
        assert_eq!(limit_vect(&c2, &f2).cols(), 1);
        assert_eq!(colimit_vect(&c2, &f2).dim(), 1);
        assert!(canonical_map_vect(&c2, &f2).matrix.is_zero());
    }

    #[test]
    fn discrete_biproduct() {
        let d2 = FinCategory::discrete(2);
        let f = VectFunctor::new(
            &d2,
            5,
            vec![1, 2],
            vec![MatrixFp::identity(5, 1).unwrap(), MatrixFp::identity(5, 2).unwrap()],
        )
        .unwrap();
        let r = lim_colim_vect(&d2, &f);
        assert_eq!((r.limit.cols(), r.colimit.dim()), (3, 3));
        assert!(r.canonical.is_invertible());
        assert!(r.canonical.well_defined);
    }

    #[test]
    fn trivial_group_is_identity() {
        let c1 = c(1);
        let f = VectFunctor::new(&c1, 7, vec![3], vec![MatrixFp::identity(7, 3).unwrap()]).unwrap();
        assert_eq!(canonical_map_vect(&c1, &f).matrix, MatrixFp::identity(7, 3).unwrap());
    }

    #[test]
    fn functoriality_is_checked() {
        let c2 = c(2);
        let id = MatrixFp::identity(3, 1).unwrap();
        let two = id.scale(2);
        assert!(VectFunctor::new(&c2, 3, vec![1], vec![id.clone(), two.clone()]).is_ok());
        assert_eq!(
            VectFunctor::new(&c2, 3, vec![1], vec![two.clone(), id.clone()]),
            Err(VectError::Identity(0))
        );
        let zero = MatrixFp::zeros(3, 1, 1).unwrap();
        assert_eq!(
            VectFunctor::new(&c2, 3, vec![1], vec![id, zero]),
            Err(VectError::Composition { g: 1, f: 1 })
        );
    }

    #[test]
    fn arrow_and_linearized_sets() {
        let arrow = FinCategory::arrow();
        let f = SetFunctor::new(&arrow, vec![2, 1], vec![vec![0, 1], vec![0], vec![0, 0]]).unwrap();
        let v = VectFunctor::linearize(&arrow, &f, 2).unwrap();
        assert_eq!(limit_vect(&arrow, &v).cols(), 2);
        assert_eq!(colimit_vect(&arrow, &v).dim(), 1);
    }

    #[test]
    fn canonical_natural_for_augmentation() {
        let c2 = c(2);
        for p in [2, 3] {
            let reg = regular_representation(&c2, p).unwrap();
            let triv = VectFunctor::new(&c2, p, vec![1], vec![MatrixFp::identity(p, 1).unwrap(); 2]).unwrap();
            let eps = VectNatTransform::new(&c2, &reg, &triv, vec![MatrixFp::from_rows(p, &[vec![1, 1]]).unwrap()])
                .unwrap();
            let (a, b) = (lim_colim_vect(&c2, &reg), lim_colim_vect(&c2, &triv));
            assert!(canonical_is_natural(&eps, (&reg, &a), (&triv, &b)));
            let lm = limit_map(&eps, (&reg, &a.limit), (&triv, &b.limit));
            assert_eq!(lm.to_rows(), vec![vec![2 % p]]);
        }
    }
}
