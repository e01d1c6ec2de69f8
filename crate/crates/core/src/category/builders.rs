use std::collections::HashSet;

use super::{CategoryError, FinCategory, Morphism};

impl FinCategory {
    /// One-object category from a monoid multiplication table, where
    /// `table[a][b]` is the element `a ∘ b`. The unit is detected from the
    /// table.
    pub fn from_monoid_table(names: &[&str], table: &[Vec<usize>]) -> Result<Self, CategoryError> {
        let n = names.len();
        check_square(table, n)?;
        let unit = (0..n)
            .find(|&u| (0..n).all(|x| table[u][x] == x && table[x][u] == x))
            .ok_or_else(|| CategoryError::Builder("monoid table has no two-sided unit".into()))?;
        let morphisms = names.iter().map(|&s| Morphism::new(s, 0, 0)).collect();
        let composites = table_composites(table);
        FinCategory::new(1, morphisms, vec![unit], &composites)
    }

    /// Adjoins a fresh unit `1` to a semigroup given by its table. The new unit
    /// is morphism 0; the semigroup elements follow in order.
    pub fn from_semigroup_adjoin_unit(
        names: &[&str],
        table: &[Vec<usize>],
    ) -> Result<Self, CategoryError> {
        let n = names.len();
        check_square(table, n)?;
        let unit_name = fresh_name("1", names.iter().copied());
        let mut morphisms = vec![Morphism::new(unit_name, 0, 0)];
        morphisms.extend(names.iter().map(|&s| Morphism::new(s, 0, 0)));
        let composites: Vec<_> = table_composites(table)
            .into_iter()
            .map(|(g, f, h)| (g + 1, f + 1, h + 1))
            .collect();
        FinCategory::new(1, morphisms, vec![0], &composites)
    }

    /// The cyclic group of order `n` with elements `e, g, g^2, ...`.
    pub fn from_group_cyclic(n: usize) -> Result<Self, CategoryError> {
        if n == 0 {
            return Err(CategoryError::Builder("group order must be at least 1".into()));
        }
        let names: Vec<String> = (0..n)
            .map(|k| match k {
                0 => "e".to_string(),
                1 => "g".to_string(),
                _ => format!("g^{k}"),
            })
            .collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let table: Vec<Vec<usize>> = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        Self::from_monoid_table(&refs, &table)
    }

    pub fn discrete(n: usize) -> Self {
        let morphisms = (0..n).map(|i| Morphism::new(format!("id{i}"), i, i)).collect();
        FinCategory::new(n, morphisms, (0..n).collect(), &[]).expect("discrete category")
    }

    /// `0 → 1` with a single non-identity arrow `a`.
    pub fn arrow() -> Self {
        Self::parallel_named(&["a"])
    }

    /// Two objects with `k` parallel arrows `a0, ..., a{k-1}` from 0 to 1.
    pub fn parallel(k: usize) -> Self {
        let names: Vec<String> = (0..k).map(|i| format!("a{i}")).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::parallel_named(&refs)
    }

    fn parallel_named(names: &[&str]) -> Self {
        let mut morphisms = vec![Morphism::new("id0", 0, 0), Morphism::new("id1", 1, 1)];
        morphisms.extend(names.iter().map(|&s| Morphism::new(s, 0, 1)));
        FinCategory::new(2, morphisms, vec![0, 1], &[]).expect("parallel arrows")
    }

    /// The two-element monoid `{1, e}` with `e ∘ e = e`.
    pub fn idempotent_monoid() -> Self {
        Self::from_monoid_table(&["1", "e"], &[vec![0, 1], vec![1, 1]]).expect("idempotent monoid")
    }

    /// `M⁺` for a one-object category `M`: a new unit `1` is adjoined and the
    /// old unit becomes an ordinary idempotent.
    pub fn adjoin_unit(monoid: &FinCategory) -> Result<Self, CategoryError> {
        if monoid.n_objects() != 1 {
            return Err(CategoryError::Builder(
                "adjoin_unit expects a one-object category".into(),
            ));
        }
        let m = monoid.n_morphisms();
        let names: Vec<&str> = (0..m).map(|f| monoid.name(f)).collect();
        let table: Vec<Vec<usize>> = (0..m)
            .map(|g| (0..m).map(|f| monoid.compose(g, f)).collect())
            .collect();
        Self::from_semigroup_adjoin_unit(&names, &table)
    }

    /// Disjoint union; objects and morphisms of `y` follow those of `x`.
    /// Colliding names from `y` are primed until unique.
    pub fn disjoint_union(x: &FinCategory, y: &FinCategory) -> Self {
        let (nx, mx) = (x.n_objects(), x.n_morphisms());
        let mut taken: HashSet<String> = x.morphisms().iter().map(|m| m.name.clone()).collect();
        let mut morphisms = x.morphisms().to_vec();
        for m in y.morphisms() {
            let mut name = m.name.clone();
            while taken.contains(&name) {
                name.push('\'');
            }
            taken.insert(name.clone());
            morphisms.push(Morphism::new(name, m.dom + nx, m.cod + nx));
        }
        let mut identity = x.identities().to_vec();
        identity.extend(y.identities().iter().map(|&i| i + mx));
        let mut composites = Vec::new();
        for (cat, off) in [(x, 0), (y, mx)] {
            for g in 0..cat.n_morphisms() {
                for f in 0..cat.n_morphisms() {
                    if let Some(h) = cat.try_compose(g, f) {
                        composites.push((g + off, f + off, h + off));
                    }
                }
            }
        }
        FinCategory::new(nx + y.n_objects(), morphisms, identity, &composites)
            .expect("disjoint union of valid categories")
    }

    /// The preorder generated by `relation` on `n` objects: one morphism
    /// `i → j` exactly when `(i, j)` is in the reflexive-transitive closure.
    pub fn from_preorder(n: usize, relation: &[(usize, usize)]) -> Result<Self, CategoryError> {
        let mut reach = vec![vec![false; n]; n];
        for (i, row) in reach.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in relation {
            if i >= n || j >= n {
                return Err(CategoryError::Builder(format!(
                    "relation pair ({i}, {j}) is out of range"
                )));
            }
            reach[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if reach[i][k] {
                    for j in 0..n {
                        if reach[k][j] {
                            reach[i][j] = true;
                        }
                    }
                }
            }
        }
        let mut index = vec![vec![usize::MAX; n]; n];
        let mut morphisms = Vec::new();
        for i in 0..n {
            index[i][i] = morphisms.len();
            morphisms.push(Morphism::new(format!("id{i}"), i, i));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && reach[i][j] {
                    index[i][j] = morphisms.len();
                    morphisms.push(Morphism::new(format!("r{i}_{j}"), i, j));
                }
            }
        }
        let mut composites = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if reach[i][j] && reach[j][k] {
                        composites.push((index[j][k], index[i][j], index[i][k]));
                    }
                }
            }
        }
        let identity = (0..n).map(|i| index[i][i]).collect();
        FinCategory::new(n, morphisms, identity, &composites)
    }

    /// The connected groupoid with `n` objects whose vertex groups are the
    /// one-object category `group`. Morphisms are triples `(g, i, j)` named
    /// `g:i>j`, composed by multiplying the group labels.
    pub fn transitive_groupoid(n: usize, group: &FinCategory) -> Result<Self, CategoryError> {
        if group.n_objects() != 1 {
            return Err(CategoryError::Builder(
                "transitive_groupoid expects a one-object category".into(),
            ));
        }
        let m = group.n_morphisms();
        let idx = |g: usize, i: usize, j: usize| (i * n + j) * m + g;
        let mut morphisms = Vec::with_capacity(n * n * m);
        for i in 0..n {
            for j in 0..n {
                for g in 0..m {
                    morphisms.push(Morphism::new(format!("{}:{i}>{j}", group.name(g)), i, j));
                }
            }
        }
        let mut composites = Vec::new();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for a in 0..m {
                        for b in 0..m {
                            composites.push((idx(b, j, k), idx(a, i, j), idx(group.compose(b, a), i, k)));
                        }
                    }
                }
            }
        }
        let unit = group.identity(0);
        let identity = (0..n).map(|i| idx(unit, i, i)).collect();
        FinCategory::new(n, morphisms, identity, &composites)
    }
}

fn check_square(table: &[Vec<usize>], n: usize) -> Result<(), CategoryError> {
    if n == 0 {
        return Err(CategoryError::Builder("table must have at least one element".into()));
    }
    if table.len() != n || table.iter().any(|row| row.len() != n) {
        return Err(CategoryError::Builder(format!("table must be {n} x {n}")));
    }
    if table.iter().flatten().any(|&x| x >= n) {
        return Err(CategoryError::Builder("table entry out of range".into()));
    }
    Ok(())
}

fn table_composites(table: &[Vec<usize>]) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (g, row) in table.iter().enumerate() {
        for (f, &h) in row.iter().enumerate() {
            out.push((g, f, h));
        }
    }
    out
}

fn fresh_name<'a>(base: &str, taken: impl Iterator<Item = &'a str> + Clone) -> String {
    let mut name = base.to_string();
    while taken.clone().any(|t| t == name) {
        name.push('\'');
    }
    name
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotent_monoid_shape() {
        let m = FinCategory::idempotent_monoid();
        assert_eq!(m.n_objects(), 1);
        let e = m.find_morphism("e").unwrap();
        assert_eq!(m.compose(e, e), e);
        assert_eq!(m.identity(0), m.find_morphism("1").unwrap());
    }

    #[test]
    fn adjoin_unit_to_c2() {
        let c2 = FinCategory::from_group_cyclic(2).unwrap();
        let plus = FinCategory::adjoin_unit(&c2).unwrap();
        let names: Vec<&str> = (0..3).map(|f| plus.name(f)).collect();
        assert_eq!(names, vec!["1", "e", "g"]);
        let (one, e, g) = (0, 1, 2);
        assert_eq!(plus.identity(0), one);
        assert_eq!(plus.compose(g, e), g);
        assert_eq!(plus.compose(e, g), g);
        assert_eq!(plus.compose(g, g), e);
        assert_eq!(plus.compose(e, e), e);
        assert!(!plus.is_identity(e));
    }

    #[test]
    fn discrete_two() {
        let d = FinCategory::discrete(2);
        assert_eq!(d.n_objects(), 2);
        assert_eq!(d.n_morphisms(), 2);
        assert!((0..2).all(|f| d.is_identity(f)));
    }

    #[test]
    fn non_monoid_table_rejected() {
        let err = FinCategory::from_monoid_table(&["a", "b"], &[vec![0, 0], vec![0, 0]]);
        assert!(err.is_err());
        // associative failure with a unit present
        let err = FinCategory::from_monoid_table(
            &["1", "a", "b"],
            &[vec![0, 1, 2], vec![1, 2, 1], vec![2, 1, 1]],
        );
        assert!(matches!(err, Err(CategoryError::Invalid(_))));
    }

    #[test]
    fn zero_order_group_rejected() {
        assert!(FinCategory::from_group_cyclic(0).is_err());
    }

    #[test]
    fn preorder_closure() {
        let chain = FinCategory::from_preorder(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(chain.n_morphisms(), 6);
        assert_eq!(chain.hom(0, 2).len(), 1);
        assert!(chain.hom(2, 0).is_empty());
    }

    #[test]
    fn groupoid_counts() {
        let g = FinCategory::transitive_groupoid(2, &FinCategory::from_group_cyclic(2).unwrap()).unwrap();
        assert_eq!(g.n_morphisms(), 8);
        assert!(g.all_homs_nonempty());
    }

    #[test]
    fn union_renames_collisions() {
        let u = FinCategory::disjoint_union(&FinCategory::idempotent_monoid(), &FinCategory::idempotent_monoid());
        let names: Vec<&str> = (0..4).map(|f| u.name(f)).collect();
        assert_eq!(names, vec!["1", "e", "1'", "e'"]);
    }
}
