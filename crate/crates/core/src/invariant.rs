//! Invariant systems: families `S(i, j) ⊆ Hom(i, j)` of nonempty finite sets
//! on which every left and every right composition acts bijectively.
//!
//! Besides verification and search, this module extracts the finite group
//! carried by an invariant system, the idempotents `e_i ∈ S(i, i)`, the
//! groupoid spanned by the system, and the retraction `f ↦ e_j ∘ f ∘ e_i`.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::category::{CategoryError, FinCategory, StrongConnectivity};

/// Default morphism budget for [`brute_force_find_is`].
pub const DEFAULT_BRUTE_FORCE_BUDGET: usize = 12;

/// A family of morphism sets indexed by object pairs. Slots may be empty;
/// see [`InvariantSystem`] for the verified form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Family {
    n_objects: usize,
    slots: Vec<Vec<usize>>,
}

impl Family {
    pub fn empty(n_objects: usize) -> Self {
        Family {
            n_objects,
            slots: vec![Vec::new(); n_objects * n_objects],
        }
    }

    /// `slots[i][j]` holds the morphisms in slot `(i, j)`; each is sorted and
    /// deduplicated here.
    pub fn from_slots(slots: Vec<Vec<Vec<usize>>>) -> Self {
        let n = slots.len();
        let mut fam = Family::empty(n);
        for (i, row) in slots.into_iter().enumerate() {
            assert_eq!(row.len(), n, "family must be square");
            for (j, mut set) in row.into_iter().enumerate() {
                set.sort_unstable();
                set.dedup();
                fam.slots[i * n + j] = set;
            }
        }
        fam
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn slot(&self, i: usize, j: usize) -> &[usize] {
        &self.slots[i * self.n_objects + j]
    }

    fn insert(&mut self, i: usize, j: usize, f: usize) -> bool {
        let slot = &mut self.slots[i * self.n_objects + j];
        match slot.binary_search(&f) {
            Ok(_) => false,
            Err(pos) => {
                slot.insert(pos, f);
                true
            }
        }
    }

    pub fn contains(&self, f: usize, cat: &FinCategory) -> bool {
        self.slot(cat.dom(f), cat.cod(f)).binary_search(&f).is_ok()
    }

    /// All members of all slots, ascending.
    pub fn members(&self) -> Vec<usize> {
        let mut all: Vec<usize> = self.slots.iter().flatten().copied().collect();
        all.sort_unstable();
        all
    }

    pub fn render(&self, cat: &FinCategory) -> String {
        let mut parts = Vec::new();
        for i in 0..self.n_objects {
            for j in 0..self.n_objects {
                let names: Vec<&str> = self.slot(i, j).iter().map(|&f| cat.name(f)).collect();
                parts.push(format!("S({i},{j})={{{}}}", names.join(",")));
            }
        }
        parts.join(" ")
    }
}

/// First failed axiom found by [`verify_is`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum IsViolation {
    #[error("family is indexed by {got} objects, category has {expected}")]
    Shape { expected: usize, got: usize },
    #[error("slot ({i},{j}) contains morphism {morphism}, which is not in Hom({i},{j})")]
    NotInHom { i: usize, j: usize, morphism: usize },
    #[error("slot ({i},{j}) is empty")]
    EmptySlot { i: usize, j: usize },
    /// Composing `S(i, j)` on the left with `f: j → k` is not a bijection onto `S(i, k)`.
    #[error("left composition with morphism {f} does not map S({i},{j}) bijectively onto S({i},{k})")]
    Left { i: usize, j: usize, k: usize, f: usize },
    /// Composing `S(i, j)` on the right with `f: k → i` is not a bijection onto `S(k, j)`.
    #[error("right composition with morphism {f} does not map S({i},{j}) bijectively onto S({k},{j})")]
    Right { i: usize, j: usize, k: usize, f: usize },
}

fn is_bijection_onto(images: impl Iterator<Item = usize>, src_len: usize, target: &[usize]) -> bool {
    if src_len != target.len() {
        return false;
    }
    let set: BTreeSet<usize> = images.collect();
    set.len() == src_len && set.iter().zip(target).all(|(a, b)| a == b)
}

pub fn verify_is(cat: &FinCategory, family: &Family) -> Result<(), IsViolation> {
    let n = cat.n_objects();
    if family.n_objects() != n {
        return Err(IsViolation::Shape {
            expected: n,
            got: family.n_objects(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let slot = family.slot(i, j);
            if let Some(&morphism) = slot.iter().find(|&&f| cat.dom(f) != i || cat.cod(f) != j) {
                return Err(IsViolation::NotInHom { i, j, morphism });
            }
            if slot.is_empty() {
                return Err(IsViolation::EmptySlot { i, j });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            let src = family.slot(i, j);
            for k in 0..n {
                for &f in cat.hom(j, k) {
                    let images = src.iter().map(|&s| cat.compose(f, s));
                    if !is_bijection_onto(images, src.len(), family.slot(i, k)) {
                        return Err(IsViolation::Left { i, j, k, f });
                    }
                }
                for &f in cat.hom(k, i) {
                    let images = src.iter().map(|&s| cat.compose(s, f));
                    if !is_bijection_onto(images, src.len(), family.slot(k, j)) {
                        return Err(IsViolation::Right { i, j, k, f });
                    }
                }
            }
        }
    }
    Ok(())
}

/// A verified invariant system.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InvariantSystem(Family);

impl InvariantSystem {
    pub fn new(cat: &FinCategory, family: Family) -> Result<Self, IsViolation> {
        verify_is(cat, &family)?;
        Ok(InvariantSystem(family))
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    pub fn slot(&self, i: usize, j: usize) -> &[usize] {
        self.0.slot(i, j)
    }

    /// The common size of all slots.
    pub fn cardinality(&self) -> usize {
        self.0.slot(0, 0).len()
    }

    pub fn is_singleton(&self) -> bool {
        self.cardinality() == 1
    }

    pub fn render(&self, cat: &FinCategory) -> String {
        self.0.render(cat)
    }
}

/// Smallest family containing `seed` and closed under composition with
/// arbitrary morphisms on either side.
pub fn closure(cat: &FinCategory, seed: usize) -> Family {
    let mut fam = Family::empty(cat.n_objects());
    let mut queue = VecDeque::new();
    fam.insert(cat.dom(seed), cat.cod(seed), seed);
    queue.push_back(seed);
    while let Some(s) = queue.pop_front() {
        let (a, b) = (cat.dom(s), cat.cod(s));
        for f in cat.outgoing(b) {
            let t = cat.compose(f, s);
            if fam.insert(a, cat.cod(f), t) {
                queue.push_back(t);
            }
        }
        for f in cat.incoming(a) {
            let t = cat.compose(s, f);
            if fam.insert(cat.dom(f), b, t) {
                queue.push_back(t);
            }
        }
    }
    fam
}

/// Result of closing one seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedOutcome {
    pub seed: usize,
    /// Index into [`IsSearch::found`] on success.
    pub result: Result<usize, IsViolation>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsSearch {
    pub connectivity: StrongConnectivity,
    /// Distinct closure invariant systems, in order of first discovery.
    pub found: Vec<InvariantSystem>,
    pub trace: Vec<SeedOutcome>,
}

impl IsSearch {
    /// The first system of minimal cardinality.
    pub fn preferred(&self) -> Option<&InvariantSystem> {
        let min = self.found.iter().map(InvariantSystem::cardinality).min()?;
        self.found.iter().find(|s| s.cardinality() == min)
    }

    pub fn cardinalities(&self) -> Vec<usize> {
        self.found.iter().map(InvariantSystem::cardinality).collect()
    }
}

/// Searches for invariant systems of a connected category by closing every
/// endomorphism of object 0. Any invariant system contains the closure of
/// each of its members, and every invariant system meets `End(0)`, so this
/// finds one whenever one exists.
pub fn find_is(cat: &FinCategory) -> Result<IsSearch, CategoryError> {
    let connectivity = cat.is_strongly_connected()?;
    let mut search = IsSearch {
        connectivity,
        found: Vec::new(),
        trace: Vec::new(),
    };
    if !search.connectivity.is_strong() {
        return Ok(search);
    }
    for &seed in cat.hom(0, 0) {
        let fam = closure(cat, seed);
        let result = match InvariantSystem::new(cat, fam) {
            Ok(is) => match search.found.iter().position(|f| *f == is) {
                Some(k) => Ok(k),
                None => {
                    search.found.push(is);
                    Ok(search.found.len() - 1)
                }
            },
            Err(v) => Err(v),
        };
        search.trace.push(SeedOutcome { seed, result });
    }
    Ok(search)
}

#[derive(Debug, Error)]
#[error("brute-force search needs {needed} morphisms, budget is {budget}")]
pub struct BudgetExceeded {
    pub needed: usize,
    pub budget: usize,
}

/// Every invariant system, by exhaustive enumeration of slot subsets.
pub fn brute_force_find_is(
    cat: &FinCategory,
    budget: usize,
) -> Result<Vec<InvariantSystem>, BudgetExceeded> {
    if cat.n_morphisms() > budget {
        return Err(BudgetExceeded {
            needed: cat.n_morphisms(),
            budget,
        });
    }
    let n = cat.n_objects();
    if n == 0 {
        return Ok(Vec::new());
    }
    let homs: Vec<&[usize]> = (0..n * n).map(|s| cat.hom(s / n, s % n)).collect();
    if homs.iter().any(|h| h.is_empty()) {
        return Ok(Vec::new());
    }
    let limits: Vec<u64> = homs.iter().map(|h| 1u64 << h.len()).collect();
    let mut masks = vec![1u64; n * n];
    let mut out = Vec::new();
    loop {
        let slots = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s = i * n + j;
                        homs[s]
                            .iter()
                            .enumerate()
                            .filter(|(bit, _)| masks[s] >> bit & 1 == 1)
                            .map(|(_, &f)| f)
                            .collect()
                    })
                    .collect()
            })
            .collect();
        if let Ok(is) = InvariantSystem::new(cat, Family::from_slots(slots)) {
            out.push(is);
        }
        let mut pos = 0;
        loop {
            if pos == masks.len() {
                return Ok(out);
            }
            masks[pos] += 1;
            if masks[pos] < limits[pos] {
                break;
            }
            masks[pos] = 1;
            pos += 1;
        }
    }
}

/// Internal consistency failures. Any of these means the invariant system was
/// not actually one, or an extraction step is wrong.
#[derive(Debug, Error)]
pub enum StructureError {
    #[error("S({0},{0}) has no idempotent")]
    NoIdempotent(usize),
    #[error("S({object},{object}) has {count} idempotents")]
    ManyIdempotents { object: usize, count: usize },
    #[error("S({0},{0}) is not closed under composition")]
    NotClosed(usize),
    #[error("element {0} of S(0,0) has no inverse")]
    NoInverse(usize),
    #[error("e_{object} does not act as identity on morphism {morphism}")]
    IdempotentAction { object: usize, morphism: usize },
    #[error("groupoid failed validation: {0}")]
    Groupoid(CategoryError),
    #[error("groupoid morphism {0} has no inverse")]
    GroupoidInverse(usize),
    #[error("retraction is not a functor at {0}")]
    RetractionNotFunctor(String),
}

/// The finite group carried by `S(0, 0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupData {
    /// Morphisms of `S(0, 0)`, ascending.
    pub elements: Vec<usize>,
    /// `table[a][b]` is the index of `elements[a] ∘ elements[b]`.
    pub table: Vec<Vec<usize>>,
    /// Index of the idempotent `e_0` in `elements`.
    pub unit: usize,
}

impl GroupData {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index_of(&self, f: usize) -> Option<usize> {
        self.elements.binary_search(&f).ok()
    }

    pub fn inverse(&self, a: usize) -> usize {
        (0..self.order())
            .find(|&b| self.table[a][b] == self.unit)
            .expect("group element has an inverse")
    }

    /// The group as a one-object category, named after the morphisms of the
    /// source category.
    pub fn as_category(&self, cat: &FinCategory) -> FinCategory {
        let names: Vec<&str> = self.elements.iter().map(|&f| cat.name(f)).collect();
        FinCategory::from_monoid_table(&names, &self.table).expect("group table is a monoid")
    }
}

fn unique_idempotent(cat: &FinCategory, is: &InvariantSystem, i: usize) -> Result<usize, StructureError> {
    let found: Vec<usize> = is
        .slot(i, i)
        .iter()
        .copied()
        .filter(|&s| cat.compose(s, s) == s)
        .collect();
    match found.len() {
        0 => Err(StructureError::NoIdempotent(i)),
        1 => Ok(found[0]),
        count => Err(StructureError::ManyIdempotents { object: i, count }),
    }
}

pub fn group_of(cat: &FinCategory, is: &InvariantSystem) -> Result<GroupData, StructureError> {
    let elements = is.slot(0, 0).to_vec();
    let order = elements.len();
    let mut table = vec![vec![0; order]; order];
    for a in 0..order {
        for b in 0..order {
            let h = cat.compose(elements[a], elements[b]);
            table[a][b] = elements
                .binary_search(&h)
                .map_err(|_| StructureError::NotClosed(0))?;
        }
    }
    let unit_mor = unique_idempotent(cat, is, 0)?;
    let unit = elements.binary_search(&unit_mor).expect("idempotent is an element");
    for a in 0..order {
        if table[unit][a] != a || table[a][unit] != a {
            return Err(StructureError::IdempotentAction {
                object: 0,
                morphism: elements[a],
            });
        }
        if !(0..order).any(|b| table[a][b] == unit && table[b][a] == unit) {
            return Err(StructureError::NoInverse(elements[a]));
        }
    }
    Ok(GroupData {
        elements,
        table,
        unit,
    })
}

/// `e_i` for every object, checked to act as identity on `S(i, j)` from the
/// right and on `S(j, i)` from the left.
pub fn idempotents(cat: &FinCategory, is: &InvariantSystem) -> Result<Vec<usize>, StructureError> {
    let n = cat.n_objects();
    let es = (0..n)
        .map(|i| unique_idempotent(cat, is, i))
        .collect::<Result<Vec<_>, _>>()?;
    for i in 0..n {
        for j in 0..n {
            for &s in is.slot(i, j) {
                if cat.compose(s, es[i]) != s {
                    return Err(StructureError::IdempotentAction { object: i, morphism: s });
                }
                if cat.compose(es[j], s) != s {
                    return Err(StructureError::IdempotentAction { object: j, morphism: s });
                }
            }
        }
    }
    Ok(es)
}

/// The groupoid spanned by an invariant system, embedded in the category.
#[derive(Clone, Debug)]
pub struct Groupoid {
    pub category: FinCategory,
    /// `to_parent[k]` is the morphism of the source category behind groupoid
    /// morphism `k`.
    pub to_parent: Vec<usize>,
}

impl Groupoid {
    pub fn from_parent(&self, f: usize) -> Option<usize> {
        self.to_parent.binary_search(&f).ok()
    }

    /// Inverse of groupoid morphism `k`.
    pub fn inverse(&self, k: usize) -> Option<usize> {
        let c = &self.category;
        c.hom(c.cod(k), c.dom(k))
            .iter()
            .copied()
            .find(|&u| c.compose(u, k) == c.identity(c.dom(k)) && c.compose(k, u) == c.identity(c.cod(k)))
    }
}

pub fn groupoid(cat: &FinCategory, is: &InvariantSystem) -> Result<Groupoid, StructureError> {
    let es = idempotents(cat, is)?;
    let to_parent = is.family().members();
    let index = |f: usize| to_parent.binary_search(&f).ok();
    let morphisms = to_parent.iter().map(|&f| cat.morphism(f).clone()).collect();
    let mut composites = Vec::new();
    for (gi, &g) in to_parent.iter().enumerate() {
        for (fi, &f) in to_parent.iter().enumerate() {
            if let Some(h) = cat.try_compose(g, f) {
                let hi = index(h).ok_or(StructureError::NotClosed(cat.dom(f)))?;
                composites.push((gi, fi, hi));
            }
        }
    }
    let identity = es.iter().map(|&e| index(e).expect("idempotent is a member")).collect();
    let category = FinCategory::new(cat.n_objects(), morphisms, identity, &composites)
        .map_err(StructureError::Groupoid)?;
    let gpd = Groupoid { category, to_parent };
    if let Some(k) = (0..gpd.to_parent.len()).find(|&k| gpd.inverse(k).is_none()) {
        return Err(StructureError::GroupoidInverse(gpd.to_parent[k]));
    }
    Ok(gpd)
}

/// The retraction `f ↦ e_j ∘ f ∘ e_i` onto the groupoid, as a table from
/// morphisms of `cat` to morphisms of `gpd.category`.
pub fn tau(cat: &FinCategory, is: &InvariantSystem, gpd: &Groupoid) -> Result<Vec<usize>, StructureError> {
    let es = idempotents(cat, is)?;
    (0..cat.n_morphisms())
        .map(|f| {
            let image = cat.compose(es[cat.cod(f)], cat.compose(f, es[cat.dom(f)]));
            gpd.from_parent(image).ok_or_else(|| {
                StructureError::RetractionNotFunctor(format!("{} leaves the groupoid", cat.name(f)))
            })
        })
        .collect()
}

/// Checks that `map` (morphisms of `src` to morphisms of `dst`, with the
/// identity on objects) preserves endpoints, identities and composition.
pub fn check_functor_on_objects(
    src: &FinCategory,
    dst: &FinCategory,
    map: &[usize],
) -> Result<(), StructureError> {
    let err = |m: String| Err(StructureError::RetractionNotFunctor(m));
    for f in 0..src.n_morphisms() {
        if dst.dom(map[f]) != src.dom(f) || dst.cod(map[f]) != src.cod(f) {
            return err(format!("endpoints of {}", src.name(f)));
        }
    }
    for o in 0..src.n_objects() {
        if map[src.identity(o)] != dst.identity(o) {
            return err(format!("identity of object {o}"));
        }
    }
    for f in 0..src.n_morphisms() {
        for g in src.outgoing(src.cod(f)) {
            if map[src.compose(g, f)] != dst.compose(map[g], map[f]) {
                return err(format!("{} after {}", src.name(g), src.name(f)));
            }
        }
    }
    Ok(())
}

/// Everything derived from one invariant system.
#[derive(Clone, Debug)]
pub struct IsStructure {
    pub group: GroupData,
    pub idempotents: Vec<usize>,
    pub groupoid: Groupoid,
    /// Retraction onto the groupoid (indices into `groupoid.category`).
    pub tau: Vec<usize>,
    /// `transitions[i] ∈ S(0, i)`: `e_0` for object 0, otherwise the first
    /// element of the slot.
    pub transitions: Vec<usize>,
    /// Functor onto the one-object group: morphism `f: i → j` goes to the
    /// index in `group.elements` of `t_j⁻¹ ∘ τ(f) ∘ t_i`.
    pub to_group: Vec<usize>,
}

impl IsStructure {
    pub fn new(cat: &FinCategory, is: &InvariantSystem) -> Result<Self, StructureError> {
        let group = group_of(cat, is)?;
        let idempotents = idempotents(cat, is)?;
        let groupoid = groupoid(cat, is)?;
        let tau = tau(cat, is, &groupoid)?;
        check_functor_on_objects(cat, &groupoid.category, &tau)?;
        for (k, &f) in groupoid.to_parent.iter().enumerate() {
            if tau[f] != k {
                return Err(StructureError::RetractionNotFunctor(format!(
                    "retraction moves groupoid morphism {}",
                    cat.name(f)
                )));
            }
        }

        let n = cat.n_objects();
        let transitions: Vec<usize> = (0..n)
            .map(|i| if i == 0 { idempotents[0] } else { is.slot(0, i)[0] })
            .collect();
        let gcat = &groupoid.category;
        let gidx = |f: usize| groupoid.from_parent(f).expect("member of the groupoid");
        let trans_g: Vec<usize> = transitions.iter().map(|&t| gidx(t)).collect();
        let trans_inv: Vec<usize> = trans_g
            .iter()
            .map(|&t| groupoid.inverse(t).ok_or(StructureError::GroupoidInverse(groupoid.to_parent[t])))
            .collect::<Result<_, _>>()?;
        let mut to_group = Vec::with_capacity(cat.n_morphisms());
        for f in 0..cat.n_morphisms() {
            let (i, j) = (cat.dom(f), cat.cod(f));
            let k = gcat.compose(trans_inv[j], gcat.compose(tau[f], trans_g[i]));
            let elem = group
                .index_of(groupoid.to_parent[k])
                .ok_or(StructureError::NotClosed(0))?;
            to_group.push(elem);
        }
        let structure = IsStructure {
            group,
            idempotents,
            groupoid,
            tau,
            transitions,
            to_group,
        };
        structure.check_to_group(cat)?;
        Ok(structure)
    }

    fn check_to_group(&self, cat: &FinCategory) -> Result<(), StructureError> {
        for o in 0..cat.n_objects() {
            if self.to_group[cat.identity(o)] != self.group.unit {
                return Err(StructureError::RetractionNotFunctor(format!(
                    "group reduction moves identity of {o}"
                )));
            }
        }
        for f in 0..cat.n_morphisms() {
            for g in cat.outgoing(cat.cod(f)) {
                let lhs = self.to_group[cat.compose(g, f)];
                let rhs = self.group.table[self.to_group[g]][self.to_group[f]];
                if lhs != rhs {
                    return Err(StructureError::RetractionNotFunctor(format!(
                        "group reduction at {} after {}",
                        cat.name(g),
                        cat.name(f)
                    )));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "group of order {}", self.order())
    }
}
