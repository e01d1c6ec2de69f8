//! A fixed collection of small categories used by tests, the acceptance
//! suite and the CLI. Every entry has at most 12 morphisms.

use crate::category::{FinCategory, Morphism};

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub name: String,
    pub category: FinCategory,
}

fn entry(name: &str, category: FinCategory) -> CorpusEntry {
    CorpusEntry {
        name: name.to_string(),
        category,
    }
}

fn cyclic(n: usize) -> FinCategory {
    FinCategory::from_group_cyclic(n).expect("n > 0")
}

fn monoid(names: &[&str], table: &[Vec<usize>]) -> FinCategory {
    FinCategory::from_monoid_table(names, table).expect("valid monoid table")
}

pub fn klein_four() -> FinCategory {
    let table: Vec<Vec<usize>> = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    monoid(&["e", "a", "b", "c"], &table)
}

/// Permutations of three points; `table[a][b]` is `a ∘ b`.
pub fn symmetric_three() -> FinCategory {
    let perms: [[usize; 3]; 6] = [[0, 1, 2], [1, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]];
    let table: Vec<Vec<usize>> = perms
        .iter()
        .map(|a| {
            perms
                .iter()
                .map(|b| {
                    let ab = [a[b[0]], a[b[1]], a[b[2]]];
                    perms.iter().position(|q| *q == ab).expect("closed")
                })
                .collect()
        })
        .collect();
    monoid(&["e", "(01)", "(12)", "(02)", "(012)", "(021)"], &table)
}

/// `{1, e, f}` with `ef = e`, `fe = f`.
pub fn left_zero_adjoined() -> FinCategory {
    FinCategory::from_semigroup_adjoin_unit(&["e", "f"], &[vec![0, 0], vec![1, 1]]).expect("left-zero band")
}

/// `{1, e, f}` with `ef = f`, `fe = e`.
pub fn right_zero_adjoined() -> FinCategory {
    FinCategory::from_semigroup_adjoin_unit(&["e", "f"], &[vec![0, 1], vec![0, 1]]).expect("right-zero band")
}

/// `{1, a, 0}` with `a² = 0`.
pub fn nilpotent() -> FinCategory {
    FinCategory::from_semigroup_adjoin_unit(&["a", "0"], &[vec![1, 1], vec![1, 1]]).expect("null semigroup")
}

/// `C_2` with an absorbing element adjoined.
pub fn cyclic_two_with_zero() -> FinCategory {
    monoid(&["e", "g", "0"], &[vec![0, 1, 2], vec![1, 0, 2], vec![2, 2, 2]])
}

/// Maps `{0,1} → {0,1}` under composition.
pub fn full_transformations_two() -> FinCategory {
    let maps: [[usize; 2]; 4] = [[0, 1], [1, 0], [0, 0], [1, 1]];
    let table: Vec<Vec<usize>> = maps
        .iter()
        .map(|a| {
            maps.iter()
                .map(|b| maps.iter().position(|q| *q == [a[b[0]], a[b[1]]]).expect("closed"))
                .collect()
        })
        .collect();
    monoid(&["id", "swap", "c0", "c1"], &table)
}

/// Object 1 is a retract of object 0: `r ∘ s = id1`, `s ∘ r = e`.
pub fn split_idempotent() -> FinCategory {
    let mors = vec![
        Morphism::new("id0", 0, 0),
        Morphism::new("id1", 1, 1),
        Morphism::new("e", 0, 0),
        Morphism::new("r", 0, 1),
        Morphism::new("s", 1, 0),
    ];
    let (id1, e, r, s) = (1, 2, 3, 4);
    FinCategory::new(
        2,
        mors,
        vec![0, 1],
        &[(r, s, id1), (s, r, e), (e, e, e), (r, e, r), (e, s, s)],
    )
    .expect("split idempotent")
}

pub fn standard_corpus() -> Vec<CorpusEntry> {
    let m = FinCategory::idempotent_monoid();
    let one = FinCategory::discrete(1);
    vec![
        entry("empty", FinCategory::discrete(0)),
        entry("trivial", one.clone()),
        entry("idempotent", m.clone()),
        entry("C2", cyclic(2)),
        entry("C3", cyclic(3)),
        entry("C4", cyclic(4)),
        entry("C5", cyclic(5)),
        entry("C6", cyclic(6)),
        entry("klein4", klein_four()),
        entry("S3", symmetric_three()),
        entry("unit+C2", FinCategory::adjoin_unit(&cyclic(2)).expect("monoid")),
        entry("unit+C3", FinCategory::adjoin_unit(&cyclic(3)).expect("monoid")),
        entry("unit+C4", FinCategory::adjoin_unit(&cyclic(4)).expect("monoid")),
        entry("left-zero", left_zero_adjoined()),
        entry("right-zero", right_zero_adjoined()),
        entry("nilpotent", nilpotent()),
        entry("C2+zero", cyclic_two_with_zero()),
        entry("T2", full_transformations_two()),
        entry("discrete2", FinCategory::discrete(2)),
        entry("discrete3", FinCategory::discrete(3)),
        entry("arrow", FinCategory::arrow()),
        entry("parallel2", FinCategory::parallel(2)),
        entry("parallel3", FinCategory::parallel(3)),
        entry("chain3", FinCategory::from_preorder(3, &[(0, 1), (1, 2)]).expect("preorder")),
        entry("indiscrete2", FinCategory::from_preorder(2, &[(0, 1), (1, 0)]).expect("preorder")),
        entry("split", split_idempotent()),
        entry("groupoid2xC2", FinCategory::transitive_groupoid(2, &cyclic(2)).expect("groupoid")),
        entry("idempotent+trivial", FinCategory::disjoint_union(&m, &one)),
        entry("C2+C3", FinCategory::disjoint_union(&cyclic(2), &cyclic(3))),
        entry(
            "idempotent+idempotent+trivial",
            FinCategory::disjoint_union(&FinCategory::disjoint_union(&m, &m), &one),
        ),
    ]
}

/// `C_1, ..., C_max`.
pub fn cyclic_groups(max: usize) -> Vec<CorpusEntry> {
    (1..=max)
        .map(|n| entry(&format!("C{n}"), cyclic(n)))
        .collect()
}

pub fn find(name: &str) -> Option<FinCategory> {
    standard_corpus().into_iter().find(|e| e.name == name).map(|e| e.category)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_is_valid_and_small() {
        let corpus = standard_corpus();
        assert!(corpus.len() >= 25);
        for e in &corpus {
            assert!(e.category.validate().is_valid(), "{}", e.name);
            assert!(e.category.n_morphisms() <= 12, "{}", e.name);
        }
        let mut names: Vec<_> = corpus.iter().map(|e| e.name.as_str()).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), corpus.len());
    }

    #[test]
    fn small_groups_have_expected_orders() {
        assert_eq!(klein_four().n_morphisms(), 4);
        let s3 = symmetric_three();
        // (01)(12) ≠ (12)(01)
        assert_ne!(s3.compose(1, 2), s3.compose(2, 1));
    }
}
