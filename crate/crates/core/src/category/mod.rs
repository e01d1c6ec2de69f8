//! Finite categories given by an explicit composition table.
//!
//! Objects are `0..n_objects`; morphisms are indices into the morphism list in
//! input order. Composition is stored as a dense `m × m` table where entry
//! `(g, f)` holds `g ∘ f` whenever `cod(f) = dom(g)`.

mod builders;
mod graph;
mod text;

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

pub use graph::{ComponentPartition, StrongConnectivity};
pub use text::ParseError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Morphism {
    pub name: String,
    pub dom: usize,
    pub cod: usize,
}

impl Morphism {
    pub fn new(name: impl Into<String>, dom: usize, cod: usize) -> Self {
        Morphism {
            name: name.into(),
            dom,
            cod,
        }
    }
}

#[derive(Debug, Error)]
pub enum CategoryError {
    #[error("morphism `{name}` refers to object {object}, but there are only {n_objects} objects")]
    ObjectOutOfRange {
        name: String,
        object: usize,
        n_objects: usize,
    },
    #[error("morphism index {0} is out of range")]
    MorphismOutOfRange(usize),
    #[error("duplicate morphism name `{0}`")]
    DuplicateName(String),
    #[error("expected {expected} identities, got {got}")]
    IdentityCount { expected: usize, got: usize },
    #[error("composite of ({g}, {f}) given twice with different results")]
    ConflictingComposite { g: usize, f: usize },
    #[error("category is not connected ({0} components)")]
    NotConnected(usize),
    #[error("{0}")]
    Invalid(ValidationReport),
    #[error("{0}")]
    Builder(String),
}

/// A single violated category axiom, located by morphism indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// The designated identity of `object` is not an endomorphism of it.
    IdentityNotEndo { object: usize, morphism: usize },
    MissingComposite { g: usize, f: usize },
    /// A composite is recorded for a pair that is not composable.
    SpuriousComposite { g: usize, f: usize, h: usize },
    /// `g ∘ f = h` but `h` does not run from `dom f` to `cod g`.
    WrongEndpoints { g: usize, f: usize, h: usize },
    LeftIdentity { f: usize },
    RightIdentity { f: usize },
    NonAssociative { h: usize, g: usize, f: usize },
}

impl Violation {
    /// Morphism pairs `(g, f)` whose table entry this violation reads.
    pub fn touched_pairs(&self, cat: &FinCategory) -> Vec<(usize, usize)> {
        match *self {
            Violation::IdentityNotEndo { .. } => vec![],
            Violation::MissingComposite { g, f }
            | Violation::SpuriousComposite { g, f, .. }
            | Violation::WrongEndpoints { g, f, .. } => vec![(g, f)],
            Violation::LeftIdentity { f } => match cat.identity.get(cat.cod(f)) {
                Some(&id) => vec![(id, f)],
                None => vec![],
            },
            Violation::RightIdentity { f } => match cat.identity.get(cat.dom(f)) {
                Some(&id) => vec![(f, id)],
                None => vec![],
            },
            Violation::NonAssociative { h, g, f } => {
                let mut pairs = vec![(g, f), (h, g)];
                if let Some(gf) = cat.try_compose(g, f) {
                    pairs.push((h, gf));
                }
                if let Some(hg) = cat.try_compose(h, g) {
                    pairs.push((hg, f));
                }
                pairs
            }
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::IdentityNotEndo { object, morphism } => write!(
                f,
                "identity of object {object} (morphism {morphism}) is not an endomorphism of it"
            ),
            Violation::MissingComposite { g, f: ff } => {
                write!(f, "missing composition for (g={g}, f={ff})")
            }
            Violation::SpuriousComposite { g, f: ff, h } => {
                write!(f, "composition recorded for non-composable pair (g={g}, f={ff}) -> {h}")
            }
            Violation::WrongEndpoints { g, f: ff, h } => {
                write!(f, "composite (g={g}, f={ff}) -> {h} has wrong domain or codomain")
            }
            Violation::LeftIdentity { f: ff } => write!(f, "left identity law fails at f={ff}"),
            Violation::RightIdentity { f: ff } => write!(f, "right identity law fails at f={ff}"),
            Violation::NonAssociative { h, g, f: ff } => {
                write!(f, "associativity fails for triple (h={h}, g={g}, f={ff})")
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            return write!(f, "valid");
        }
        for (k, v) in self.violations.iter().enumerate() {
            if k > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// A finite category. Values are immutable once built; [`FinCategory::new`]
/// only returns categories that pass [`FinCategory::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    n_objects: usize,
    morphisms: Vec<Morphism>,
    identity: Vec<usize>,
    comp: Vec<Option<usize>>,
    hom: Vec<Vec<Vec<usize>>>,
}

impl FinCategory {
    /// Builds and validates a category. `composites` lists `(g, f, g∘f)`;
    /// entries involving an identity may be omitted and are inferred.
    pub fn new(
        n_objects: usize,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self, CategoryError> {
        let cat = Self::from_parts(n_objects, morphisms, identity, composites)?;
        let report = cat.validate();
        if report.is_valid() {
            Ok(cat)
        } else {
            Err(CategoryError::Invalid(report))
        }
    }

    /// Structural construction without checking the category laws.
    pub fn from_parts(
        n_objects: usize,
        morphisms: Vec<Morphism>,
        identity: Vec<usize>,
        composites: &[(usize, usize, usize)],
    ) -> Result<Self, CategoryError> {
        let m = morphisms.len();
        let mut seen = HashMap::new();
        for mor in &morphisms {
            for object in [mor.dom, mor.cod] {
                if object >= n_objects {
                    return Err(CategoryError::ObjectOutOfRange {
                        name: mor.name.clone(),
                        object,
                        n_objects,
                    });
                }
            }
            if seen.insert(mor.name.as_str(), ()).is_some() {
                return Err(CategoryError::DuplicateName(mor.name.clone()));
            }
        }
        if identity.len() != n_objects {
            return Err(CategoryError::IdentityCount {
                expected: n_objects,
                got: identity.len(),
            });
        }
        if let Some(&bad) = identity.iter().find(|&&i| i >= m) {
            return Err(CategoryError::MorphismOutOfRange(bad));
        }

        let mut comp = vec![None; m * m];
        for &(g, f, h) in composites {
            for x in [g, f, h] {
                if x >= m {
                    return Err(CategoryError::MorphismOutOfRange(x));
                }
            }
            match comp[g * m + f] {
                Some(prev) if prev != h => return Err(CategoryError::ConflictingComposite { g, f }),
                _ => comp[g * m + f] = Some(h),
            }
        }
        for g in 0..m {
            for f in 0..m {
                if comp[g * m + f].is_some() || morphisms[f].cod != morphisms[g].dom {
                    continue;
                }
                let mid = morphisms[f].cod;
                if identity[mid] == g && morphisms[g].cod == mid {
                    comp[g * m + f] = Some(f);
                } else if identity[mid] == f && morphisms[f].dom == mid {
                    comp[g * m + f] = Some(g);
                }
            }
        }

        let mut hom = vec![vec![Vec::new(); n_objects]; n_objects];
        for (idx, mor) in morphisms.iter().enumerate() {
            hom[mor.dom][mor.cod].push(idx);
        }
        Ok(FinCategory {
            n_objects,
            morphisms,
            identity,
            comp,
            hom,
        })
    }

    /// Returns a copy with one composition-table entry replaced.
    pub fn with_composite(&self, g: usize, f: usize, h: Option<usize>) -> Self {
        let mut out = self.clone();
        let m = out.morphisms.len();
        out.comp[g * m + f] = h;
        out
    }

    pub fn validate(&self) -> ValidationReport {
        let m = self.morphisms.len();
        let mut violations = Vec::new();
        for (object, &id) in self.identity.iter().enumerate() {
            if self.dom(id) != object || self.cod(id) != object {
                violations.push(Violation::IdentityNotEndo {
                    object,
                    morphism: id,
                });
            }
        }
        for g in 0..m {
            for f in 0..m {
                let composable = self.cod(f) == self.dom(g);
                match (composable, self.comp[g * m + f]) {
                    (true, None) => violations.push(Violation::MissingComposite { g, f }),
                    (false, Some(h)) => violations.push(Violation::SpuriousComposite { g, f, h }),
                    (true, Some(h)) => {
                        if self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) {
                            violations.push(Violation::WrongEndpoints { g, f, h });
                        }
                    }
                    (false, None) => {}
                }
            }
        }
        for f in 0..m {
            let left = self.identity[self.cod(f)];
            if self.try_compose(left, f) != Some(f) {
                violations.push(Violation::LeftIdentity { f });
            }
            let right = self.identity[self.dom(f)];
            if self.try_compose(f, right) != Some(f) {
                violations.push(Violation::RightIdentity { f });
            }
        }
        for f in 0..m {
            for g in self.outgoing(self.cod(f)) {
                let Some(gf) = self.try_compose(g, f) else { continue };
                for h in self.outgoing(self.cod(g)) {
                    let Some(hg) = self.try_compose(h, g) else { continue };
                    if let (Some(a), Some(b)) = (self.try_compose(h, gf), self.try_compose(hg, f)) {
                        if a != b {
                            violations.push(Violation::NonAssociative { h, g, f });
                        }
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    pub fn n_objects(&self) -> usize {
        self.n_objects
    }

    pub fn n_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n_objects == 0
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn morphism(&self, f: usize) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn name(&self, f: usize) -> &str {
        &self.morphisms[f].name
    }

    pub fn dom(&self, f: usize) -> usize {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: usize) -> usize {
        self.morphisms[f].cod
    }

    pub fn identity(&self, object: usize) -> usize {
        self.identity[object]
    }

    pub fn identities(&self) -> &[usize] {
        &self.identity
    }

    pub fn is_identity(&self, f: usize) -> bool {
        self.identity[self.dom(f)] == f
    }

    pub fn find_morphism(&self, name: &str) -> Option<usize> {
        self.morphisms.iter().position(|m| m.name == name)
    }

    /// Morphisms `i → j`, in morphism order.
    pub fn hom(&self, i: usize, j: usize) -> &[usize] {
        &self.hom[i][j]
    }

    /// Morphisms with domain `i`, in morphism order.
    pub fn outgoing(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_objects).flat_map(move |j| self.hom[i][j].iter().copied())
    }

    /// Morphisms with codomain `j`, in morphism order within each hom-set.
    pub fn incoming(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n_objects).flat_map(move |i| self.hom[i][j].iter().copied())
    }

    pub fn try_compose(&self, g: usize, f: usize) -> Option<usize> {
        self.comp[g * self.morphisms.len() + f]
    }

    /// `g ∘ f`. Panics when the pair is not composable.
    pub fn compose(&self, g: usize, f: usize) -> usize {
        self.try_compose(g, f).unwrap_or_else(|| {
            panic!(
                "morphisms {} and {} are not composable",
                self.name(g),
                self.name(f)
            )
        })
    }

    /// Builds the subcategory on the given objects and morphisms. Identities of
    /// the chosen objects are always included. Fails if the data is not closed
    /// under composition.
    pub fn subcategory(
        &self,
        objects: &[usize],
        morphisms: &[usize],
    ) -> Result<(FinCategory, Embedding), CategoryError> {
        let mut obj_map = vec![usize::MAX; self.n_objects];
        for (new, &old) in objects.iter().enumerate() {
            obj_map[old] = new;
        }
        let mut chosen: Vec<usize> = morphisms.to_vec();
        for &o in objects {
            chosen.push(self.identity(o));
        }
        chosen.sort_unstable();
        chosen.dedup();
        let mut mor_map = vec![usize::MAX; self.morphisms.len()];
        let mut new_mors = Vec::with_capacity(chosen.len());
        for (new, &old) in chosen.iter().enumerate() {
            let (d, c) = (obj_map[self.dom(old)], obj_map[self.cod(old)]);
            if d == usize::MAX || c == usize::MAX {
                return Err(CategoryError::Builder(format!(
                    "morphism `{}` leaves the chosen objects",
                    self.name(old)
                )));
            }
            mor_map[old] = new;
            new_mors.push(Morphism::new(self.name(old), d, c));
        }
        let mut composites = Vec::new();
        for &g in &chosen {
            for &f in &chosen {
                if let Some(h) = self.try_compose(g, f) {
                    if mor_map[h] == usize::MAX {
                        return Err(CategoryError::Builder(format!(
                            "subcategory not closed: {} ∘ {} = {}",
                            self.name(g),
                            self.name(f),
                            self.name(h)
                        )));
                    }
                    composites.push((mor_map[g], mor_map[f], mor_map[h]));
                }
            }
        }
        let identity = objects.iter().map(|&o| mor_map[self.identity(o)]).collect();
        let sub = FinCategory::new(objects.len(), new_mors, identity, &composites)?;
        Ok((
            sub,
            Embedding {
                objects: objects.to_vec(),
                morphisms: chosen,
            },
        ))
    }

    /// The full subcategory on `objects`, keeping their relative order.
    pub fn full_subcategory(&self, objects: &[usize]) -> (FinCategory, Embedding) {
        let mut mors = Vec::new();
        for &i in objects {
            for &j in objects {
                mors.extend_from_slice(self.hom(i, j));
            }
        }
        self.subcategory(objects, &mors)
            .expect("full subcategory of a valid category is a category")
    }
}

/// Index maps from a subcategory back into its parent.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    /// `objects[new] = old`
    pub objects: Vec<usize>,
    /// `morphisms[new] = old`
    pub morphisms: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_element_group_parts() -> (Vec<Morphism>, Vec<usize>) {
        (
            vec![Morphism::new("e", 0, 0), Morphism::new("g", 0, 0)],
            vec![0],
        )
    }

    #[test]
    fn cyclic_three_is_valid() {
        let cat = FinCategory::from_group_cyclic(3).unwrap();
        assert!(cat.validate().is_valid());
        assert_eq!(cat.n_morphisms(), 3);
    }

    #[test]
    fn identity_pairs_are_inferred() {
        let (mors, ids) = two_element_group_parts();
        let cat = FinCategory::new(1, mors, ids, &[(1, 1, 0)]).unwrap();
        assert_eq!(cat.compose(0, 1), 1);
        assert_eq!(cat.compose(1, 0), 1);
        assert_eq!(cat.compose(1, 1), 0);
    }

    #[test]
    fn omitted_composite_is_reported() {
        let (mors, ids) = two_element_group_parts();
        let cat = FinCategory::from_parts(1, mors, ids, &[]).unwrap();
        let report = cat.validate();
        assert_eq!(
            report.violations,
            vec![Violation::MissingComposite { g: 1, f: 1 }]
        );
        assert!(report.to_string().contains("missing composition"));
    }

    #[test]
    fn associativity_defect_names_the_triple() {
        // C_3 = {e, g, g^2} with g ∘ g corrupted to e; (g, g, g^2) then
        // evaluates to g on one side and g^2 on the other.
        let cat = FinCategory::from_group_cyclic(3).unwrap();
        let broken = cat.with_composite(1, 1, Some(0));
        let report = broken.validate();
        assert!(!report.is_valid());
        assert!(report
            .violations
            .iter()
            .all(|v| matches!(v, Violation::NonAssociative { .. })));
        assert!(report
            .violations
            .iter()
            .all(|v| v.touched_pairs(&broken).contains(&(1, 1))));
        assert!(report
            .violations
            .contains(&Violation::NonAssociative { h: 1, g: 1, f: 2 }));
    }

    #[test]
    fn wrong_endpoints_and_spurious_entries() {
        let arrow = FinCategory::arrow();
        let a = arrow.find_morphism("a").unwrap();
        let id1 = arrow.identity(1);
        let bad = arrow.with_composite(id1, a, Some(id1));
        assert!(bad
            .validate()
            .violations
            .contains(&Violation::WrongEndpoints { g: id1, f: a, h: id1 }));
        let bad = arrow.with_composite(a, a, Some(a));
        assert!(bad
            .validate()
            .violations
            .contains(&Violation::SpuriousComposite { g: a, f: a, h: a }));
    }

    #[test]
    fn structural_errors() {
        let dup = FinCategory::from_parts(
            1,
            vec![Morphism::new("x", 0, 0), Morphism::new("x", 0, 0)],
            vec![0],
            &[],
        );
        assert!(matches!(dup, Err(CategoryError::DuplicateName(_))));
        let out = FinCategory::from_parts(1, vec![Morphism::new("x", 0, 1)], vec![0], &[]);
        assert!(matches!(out, Err(CategoryError::ObjectOutOfRange { .. })));
        let ids = FinCategory::from_parts(2, vec![Morphism::new("x", 0, 0)], vec![0], &[]);
        assert!(matches!(ids, Err(CategoryError::IdentityCount { .. })));
    }

    #[test]
    fn empty_category_is_valid() {
        let cat = FinCategory::discrete(0);
        assert!(cat.is_empty());
        assert!(cat.validate().is_valid());
    }

    #[test]
    fn full_subcategory_keeps_table() {
        let cat = FinCategory::disjoint_union(&FinCategory::arrow(), &FinCategory::from_group_cyclic(2).unwrap());
        let (sub, emb) = cat.full_subcategory(&[2]);
        assert_eq!(sub.n_objects(), 1);
        assert_eq!(sub.n_morphisms(), 2);
        assert_eq!(emb.objects, vec![2]);
        assert!(sub.validate().is_valid());
    }
}
