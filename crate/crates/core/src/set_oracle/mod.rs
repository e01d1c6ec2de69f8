//! Brute-force limits and colimits of finite-set-valued functors.
//!
//! Sets are `{0, ..., size - 1}`. Limits are enumerated per connected
//! component by backtracking and combined as a product; colimits are computed
//! with union-find over the disjoint union of all the sets.

mod sample;

use thiserror::Error;

use crate::category::{ComponentPartition, FinCategory};

pub use sample::{
    random_nat_transform, random_set_functor, sample_check_set, SamplingError, SetOracleReport,
    SetWitness, witness_for, DEFAULT_MAX_SIZE, DEFAULT_SAMPLES,
};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FunctorError {
    #[error("expected {expected} entries, got {got}")]
    Shape { expected: usize, got: usize },
    #[error("action of morphism {0} is not a function between the right sets")]
    NotAFunction(usize),
    #[error("identity morphism {0} does not act as the identity")]
    Identity(usize),
    #[error("composition fails for ({g}, {f})")]
    Composition { g: usize, f: usize },
    #[error("naturality square fails at morphism {0}")]
    Naturality(usize),
}

/// A functor into finite sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFunctor {
    sizes: Vec<usize>,
    action: Vec<Vec<usize>>,
}

impl SetFunctor {
    /// Checks that the tables are functions and that identities and
    /// composition are preserved.
    pub fn new(cat: &FinCategory, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self, FunctorError> {
        if sizes.len() != cat.n_objects() {
            return Err(FunctorError::Shape {
                expected: cat.n_objects(),
                got: sizes.len(),
            });
        }
        if action.len() != cat.n_morphisms() {
            return Err(FunctorError::Shape {
                expected: cat.n_morphisms(),
                got: action.len(),
            });
        }
        for (f, table) in action.iter().enumerate() {
            if table.len() != sizes[cat.dom(f)] || table.iter().any(|&y| y >= sizes[cat.cod(f)]) {
                return Err(FunctorError::NotAFunction(f));
            }
        }
        for o in 0..cat.n_objects() {
            let id = cat.identity(o);
            if action[id].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(FunctorError::Identity(id));
            }
        }
        for f in 0..cat.n_morphisms() {
            for g in cat.outgoing(cat.cod(f)) {
                let h = cat.compose(g, f);
                if (0..sizes[cat.dom(f)]).any(|x| action[h][x] != action[g][action[f][x]]) {
                    return Err(FunctorError::Composition { g, f });
                }
            }
        }
        Ok(SetFunctor { sizes, action })
    }

    /// Every object goes to a set of `size` elements, every morphism to the
    /// identity.
    pub fn constant(cat: &FinCategory, size: usize) -> Self {
        Self::constant_per_object(cat, vec![size; cat.n_objects()])
    }

    /// Sizes given per object, with identity actions. Only functorial when
    /// every morphism joins objects of equal size (or starts at an empty
    /// set); the caller is responsible for that.
    fn constant_per_object(cat: &FinCategory, sizes: Vec<usize>) -> Self {
        let action = (0..cat.n_morphisms())
            .map(|f| (0..sizes[cat.dom(f)]).map(|x| x.min(sizes[cat.cod(f)].saturating_sub(1))).collect())
            .collect();
        SetFunctor::new(cat, sizes, action).expect("constant functor")
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn size(&self, object: usize) -> usize {
        self.sizes[object]
    }

    pub fn apply(&self, f: usize, x: usize) -> usize {
        self.action[f][x]
    }

    pub fn table(&self, f: usize) -> &[usize] {
        &self.action[f]
    }

    /// Restriction along a subcategory embedding.
    pub fn restrict(&self, embedding: &crate::category::Embedding) -> SetFunctor {
        SetFunctor {
            sizes: embedding.objects.iter().map(|&o| self.sizes[o]).collect(),
            action: embedding.morphisms.iter().map(|&f| self.action[f].clone()).collect(),
        }
    }
}

/// A natural transformation between set functors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetNatTransform {
    components: Vec<Vec<usize>>,
}

impl SetNatTransform {
    pub fn new(
        cat: &FinCategory,
        source: &SetFunctor,
        target: &SetFunctor,
        components: Vec<Vec<usize>>,
    ) -> Result<Self, FunctorError> {
        if components.len() != cat.n_objects() {
            return Err(FunctorError::Shape {
                expected: cat.n_objects(),
                got: components.len(),
            });
        }
        for (o, c) in components.iter().enumerate() {
            if c.len() != source.size(o) || c.iter().any(|&y| y >= target.size(o)) {
                return Err(FunctorError::NotAFunction(cat.identity(o)));
            }
        }
        for f in 0..cat.n_morphisms() {
            let (i, j) = (cat.dom(f), cat.cod(f));
            for x in 0..source.size(i) {
                if components[j][source.apply(f, x)] != target.apply(f, components[i][x]) {
                    return Err(FunctorError::Naturality(f));
                }
            }
        }
        Ok(SetNatTransform { components })
    }

    pub fn component(&self, object: usize) -> &[usize] {
        &self.components[object]
    }

    /// Induced map on limit tuples.
    pub fn on_tuple(&self, tuple: &[usize]) -> Vec<usize> {
        tuple.iter().enumerate().map(|(o, &x)| self.components[o][x]).collect()
    }
}

/// Compatible tuples of one component, objects listed in `objects` order.
fn component_limit(cat: &FinCategory, f: &SetFunctor, objects: &[usize]) -> Vec<Vec<usize>> {
    let n = objects.len();
    let mut out = Vec::new();
    let mut values = vec![usize::MAX; cat.n_objects()];
    fn consistent(cat: &FinCategory, f: &SetFunctor, values: &[usize], o: usize) -> bool {
        let x = values[o];
        for g in cat.outgoing(o) {
            let t = cat.cod(g);
            if values[t] != usize::MAX && f.apply(g, x) != values[t] {
                return false;
            }
        }
        for g in cat.incoming(o) {
            let s = cat.dom(g);
            if s != o && values[s] != usize::MAX && f.apply(g, values[s]) != x {
                return false;
            }
        }
        true
    }
    fn go(
        cat: &FinCategory,
        f: &SetFunctor,
        objects: &[usize],
        depth: usize,
        values: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        if depth == objects.len() {
            out.push(objects.iter().map(|&o| values[o]).collect());
            return;
        }
        let o = objects[depth];
        let forced = cat
            .incoming(o)
            .find(|&g| cat.dom(g) != o && values[cat.dom(g)] != usize::MAX)
            .map(|g| f.apply(g, values[cat.dom(g)]));
        let candidates: Vec<usize> = match forced {
            Some(x) => vec![x],
            None => (0..f.size(o)).collect(),
        };
        for x in candidates {
            values[o] = x;
            if consistent(cat, f, values, o) {
                go(cat, f, objects, depth + 1, values, out);
            }
        }
        values[o] = usize::MAX;
    }
    if n > 0 {
        go(cat, f, objects, 0, &mut values, &mut out);
    }
    out
}

/// All compatible families `(x_i)`, as full tuples indexed by object, in
/// lexicographic order.
pub fn limit_set(cat: &FinCategory, f: &SetFunctor) -> Vec<Vec<usize>> {
    let parts = cat.connected_components();
    let mut tuples: Vec<Vec<usize>> = vec![vec![0; cat.n_objects()]];
    for members in parts.all_members() {
        let local = component_limit(cat, f, &members);
        let mut next = Vec::with_capacity(tuples.len() * local.len());
        for t in &tuples {
            for l in &local {
                let mut t = t.clone();
                for (k, &o) in members.iter().enumerate() {
                    t[o] = l[k];
                }
                next.push(t);
            }
        }
        tuples = next;
    }
    tuples.sort();
    tuples
}

/// Colimit of a set functor as a partition of the disjoint union.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetColimit {
    /// Start of each object's block in the disjoint union.
    pub offsets: Vec<usize>,
    /// Class of each element of the disjoint union.
    pub class_of: Vec<usize>,
    pub count: usize,
}

impl SetColimit {
    pub fn class(&self, object: usize, x: usize) -> usize {
        self.class_of[self.offsets[object] + x]
    }
}

pub fn colimit_set(cat: &FinCategory, f: &SetFunctor) -> SetColimit {
    let mut offsets = Vec::with_capacity(cat.n_objects());
    let mut total = 0;
    for o in 0..cat.n_objects() {
        offsets.push(total);
        total += f.size(o);
    }
    let mut uf = crate::UnionFind::new(total);
    for g in 0..cat.n_morphisms() {
        let (i, j) = (cat.dom(g), cat.cod(g));
        for x in 0..f.size(i) {
            uf.union(offsets[i] + x, offsets[j] + f.apply(g, x));
        }
    }
    let (class_of, count) = uf.canonical_labels();
    SetColimit {
        offsets,
        class_of,
        count,
    }
}

/// The comparison map from the limit to the colimit of one component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentCanonical {
    pub objects: Vec<usize>,
    /// Limit tuples restricted to `objects`.
    pub limit: Vec<Vec<usize>>,
    /// Colimit class (global id) of each limit tuple.
    pub image: Vec<usize>,
    /// Colimit classes meeting this component, ascending.
    pub classes: Vec<usize>,
    /// Whether every object of the component gives the same image.
    pub well_defined: bool,
}

impl ComponentCanonical {
    pub fn is_bijective(&self) -> bool {
        let mut img = self.image.clone();
        img.sort_unstable();
        img.dedup();
        img.len() == self.image.len() && img == self.classes
    }
}

/// The canonical map, one block per connected component. A tuple `(x_i)`
/// goes to the class of `x_{i*}` for the smallest object `i*`; every other
/// object of the component is checked to agree.
pub fn canonical_map(cat: &FinCategory, f: &SetFunctor) -> Vec<ComponentCanonical> {
    canonical_map_with(cat, f, &colimit_set(cat, f), &cat.connected_components())
}

fn canonical_map_with(
    cat: &FinCategory,
    f: &SetFunctor,
    colim: &SetColimit,
    parts: &ComponentPartition,
) -> Vec<ComponentCanonical> {
    parts
        .all_members()
        .into_iter()
        .map(|objects| {
            let limit = component_limit(cat, f, &objects);
            let mut image = Vec::with_capacity(limit.len());
            let mut well_defined = true;
            for t in &limit {
                let first = colim.class(objects[0], t[0]);
                well_defined &= objects
                    .iter()
                    .zip(t)
                    .all(|(&o, &x)| colim.class(o, x) == first);
                image.push(first);
            }
            let mut classes: Vec<usize> = objects
                .iter()
                .flat_map(|&o| (0..f.size(o)).map(move |x| (o, x)))
                .map(|(o, x)| colim.class(o, x))
                .collect();
            classes.sort_unstable();
            classes.dedup();
            ComponentCanonical {
                objects,
                limit,
                image,
                classes,
                well_defined,
            }
        })
        .collect()
}

/// Limit, colimit and canonical map together.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimColimResult {
    pub limit: Vec<Vec<usize>>,
    pub colimit: SetColimit,
    pub canonical: Vec<ComponentCanonical>,
}

pub fn lim_colim(cat: &FinCategory, f: &SetFunctor) -> LimColimResult {
    let parts = cat.connected_components();
    let colimit = colimit_set(cat, f);
    LimColimResult {
        limit: limit_set(cat, f),
        canonical: canonical_map_with(cat, f, &colimit, &parts),
        colimit,
    }
}

/// Empty set on `source`, a point everywhere else. Every morphism touching
/// `source` must start there.
pub fn witness_not_strongly_connected(cat: &FinCategory, source: &[usize]) -> SetFunctor {
    let mut sizes = vec![1; cat.n_objects()];
    for &o in source {
        sizes[o] = 0;
    }
    SetFunctor::constant_per_object(cat, sizes)
}

/// Empty set on the first component, a point on every other one.
pub fn witness_not_connected(cat: &FinCategory, parts: &ComponentPartition) -> SetFunctor {
    let sizes = parts.component.iter().map(|&c| usize::from(c != 0)).collect();
    SetFunctor::constant_per_object(cat, sizes)
}

/// The covariant representable `Hom(i, -)`; element `k` of the set at `j` is
/// the `k`-th morphism of `hom(i, j)`.
pub fn representable(cat: &FinCategory, i: usize) -> SetFunctor {
    let n = cat.n_objects();
    let sizes = (0..n).map(|j| cat.hom(i, j).len()).collect();
    let action = (0..cat.n_morphisms())
        .map(|f| {
            let (j, k) = (cat.dom(f), cat.cod(f));
            cat.hom(i, j)
                .iter()
                .map(|&s| {
                    let t = cat.compose(f, s);
                    cat.hom(i, k).iter().position(|&u| u == t).expect("composite lies in hom(i, k)")
                })
                .collect()
        })
        .collect();
    SetFunctor::new(cat, sizes, action).expect("representable functor")
}

/// First object whose representable has a limit with other than one element,
/// with that limit's size.
pub fn representable_witness(cat: &FinCategory) -> Option<(usize, SetFunctor, usize)> {
    (0..cat.n_objects()).find_map(|i| {
        let f = representable(cat, i);
        let size = limit_set(cat, &f).len();
        (size != 1).then_some((i, f, size))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: usize) -> FinCategory {
        FinCategory::from_group_cyclic(n).unwrap()
    }

    /// `x ↦ x + k mod n` for the element `g^k`.
    fn regular(cat: &FinCategory, n: usize) -> SetFunctor {
        let action = (0..n).map(|k| (0..n).map(|x| (x + k) % n).collect()).collect();
        SetFunctor::new(cat, vec![n], action).unwrap()
    }

    fn parallel_functor() -> (FinCategory, SetFunctor) {
        let cat = FinCategory::parallel(2);
        // F(0) = {x, y}, F(1) = {u, v}; a0 = (x↦u, y↦v), a1 = (x↦u, y↦u)
        let f = SetFunctor::new(
            &cat,
            vec![2, 2],
            vec![vec![0, 1], vec![0, 1], vec![0, 1], vec![0, 0]],
        )
        .unwrap();
        (cat, f)
    }

    #[test]
    fn functoriality_is_checked() {
        let c2 = c(2);
        assert_eq!(
            SetFunctor::new(&c2, vec![2], vec![vec![1, 0], vec![1, 0]]),
            Err(FunctorError::Identity(0))
        );
        // g acting as a constant breaks g∘g = e
        assert_eq!(
            SetFunctor::new(&c2, vec![2], vec![vec![0, 1], vec![0, 0]]),
            Err(FunctorError::Composition { g: 1, f: 1 })
        );
        assert!(matches!(
            SetFunctor::new(&c2, vec![2], vec![vec![0, 1], vec![0, 2]]),
            Err(FunctorError::NotAFunction(1))
        ));
    }

    #[test]
    fn limit_examples() {
        let c3 = c(3);
        assert_eq!(limit_set(&c3, &SetFunctor::constant(&c3, 1)).len(), 1);
        let c2 = c(2);
        assert!(limit_set(&c2, &regular(&c2, 2)).is_empty());
        let (cat, f) = parallel_functor();
        assert_eq!(limit_set(&cat, &f), vec![vec![0, 0]]);
    }

    #[test]
    fn colimit_examples() {
        let c2 = c(2);
        assert_eq!(colimit_set(&c2, &regular(&c2, 2)).count, 1);
        let d2 = FinCategory::discrete(2);
        let f = SetFunctor::new(&d2, vec![2, 3], vec![vec![0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(colimit_set(&d2, &f).count, 5);
        let (cat, f) = parallel_functor();
        assert_eq!(colimit_set(&cat, &f).count, 1);
    }

    #[test]
    fn canonical_on_idempotent_action() {
        // e acts on {0,1,2,3} by 0,1 fixed, 2 ↦ 0, 3 ↦ 1.
        let m = FinCategory::idempotent_monoid();
        let f = SetFunctor::new(&m, vec![4], vec![vec![0, 1, 2, 3], vec![0, 1, 0, 1]]).unwrap();
        let canon = canonical_map(&m, &f);
        assert_eq!(canon.len(), 1);
        assert_eq!(canon[0].limit.len(), 2);
        assert_eq!(canon[0].classes.len(), 2);
        assert!(canon[0].is_bijective());
        assert!(canon[0].well_defined);
    }

    #[test]
    fn canonical_on_regular_c2_is_empty() {
        let c2 = c(2);
        let canon = canonical_map(&c2, &regular(&c2, 2));
        assert!(canon[0].image.is_empty());
        assert_eq!(canon[0].classes.len(), 1);
        assert!(!canon[0].is_bijective());
        let one = SetFunctor::constant(&c2, 1);
        assert!(canonical_map(&c2, &one)[0].is_bijective());
    }

    #[test]
    fn split_witnesses() {
        for cat in [FinCategory::arrow(), FinCategory::parallel(2), FinCategory::parallel(3)] {
            let w = witness_not_strongly_connected(&cat, &[0]);
            assert_eq!(limit_set(&cat, &w).len(), 0);
            assert_eq!(colimit_set(&cat, &w).count, 1);
        }
        let d2 = FinCategory::discrete(2);
        let w = witness_not_connected(&d2, &d2.connected_components());
        assert_eq!(w.sizes(), &[0, 1]);
        assert_eq!(limit_set(&d2, &w).len(), 0);
        assert_eq!(colimit_set(&d2, &w).count, 1);
    }

    #[test]
    fn representables() {
        for cat in [c(2), c(3), FinCategory::idempotent_monoid(), FinCategory::arrow()] {
            for i in 0..cat.n_objects() {
                assert_eq!(colimit_set(&cat, &representable(&cat, i)).count, 1);
            }
        }
        let c2 = c(2);
        assert!(limit_set(&c2, &representable(&c2, 0)).is_empty());
        let m = FinCategory::idempotent_monoid();
        let e = m.find_morphism("e").unwrap();
        let lim = limit_set(&m, &representable(&m, 0));
        assert_eq!(lim.len(), 1);
        assert_eq!(m.hom(0, 0)[lim[0][0]], e);
        assert!(representable_witness(&m).is_none());
        assert_eq!(representable_witness(&c2).map(|w| (w.0, w.2)), Some((0, 0)));
    }

    #[test]
    fn nat_transform_checks_naturality() {
        let c2 = c(2);
        let reg = regular(&c2, 2);
        let pt = SetFunctor::constant(&c2, 1);
        assert!(SetNatTransform::new(&c2, &reg, &pt, vec![vec![0, 0]]).is_ok());
        assert_eq!(
            SetNatTransform::new(&c2, &pt, &reg, vec![vec![0]]),
            Err(FunctorError::Naturality(1))
        );
    }

    #[test]
    fn group_actions_match_fixed_points_and_orbits() {
        // C_4 acting on Z/4 ⊔ Z/2 ⊔ {*} through rotations.
        let n = 4;
        let cat = c(n);
        let action: Vec<Vec<usize>> = (0..n)
            .map(|k| {
                let mut t: Vec<usize> = (0..4).map(|x| (x + k) % 4).collect();
                t.extend((0..2).map(|x| 4 + (x + k) % 2));
                t.push(6);
                t
            })
            .collect();
        let f = SetFunctor::new(&cat, vec![7], action.clone()).unwrap();
        let fixed: Vec<usize> = (0..7).filter(|&x| action.iter().all(|t| t[x] == x)).collect();
        let lim: Vec<usize> = limit_set(&cat, &f).into_iter().map(|t| t[0]).collect();
        assert_eq!(lim, fixed);
        let mut orbit_reps: Vec<usize> = (0..7)
            .map(|x| action.iter().map(|t| t[x]).min().unwrap())
            .collect();
        orbit_reps.sort_unstable();
        orbit_reps.dedup();
        assert_eq!(colimit_set(&cat, &f).count, orbit_reps.len());
    }

    #[test]
    fn limit_of_disconnected_is_product() {
        let cat = FinCategory::disjoint_union(&FinCategory::idempotent_monoid(), &c(2));
        // e: {0,1,2} → fixes 0,1 ; C_2 swaps {0,1} and fixes 2
        let f = SetFunctor::new(
            &cat,
            vec![3, 3],
            vec![vec![0, 1, 2], vec![0, 1, 1], vec![0, 1, 2], vec![1, 0, 2]],
        )
        .unwrap();
        let lim = limit_set(&cat, &f);
        assert_eq!(lim, vec![vec![0, 2], vec![1, 2]]);
        assert_eq!(colimit_set(&cat, &f).count, 2 + 2);
    }

    #[test]
    fn empty_category_limits() {
        let cat = FinCategory::discrete(0);
        let f = SetFunctor::new(&cat, vec![], vec![]).unwrap();
        assert_eq!(limit_set(&cat, &f), vec![Vec::<usize>::new()]);
        assert_eq!(colimit_set(&cat, &f).count, 0);
    }
}
