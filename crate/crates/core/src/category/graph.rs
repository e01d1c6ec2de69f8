use super::{CategoryError, FinCategory};
use crate::union_find::UnionFind;

/// Assignment of objects to connected components of the underlying
/// undirected graph. Component ids are ordered by smallest member object.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ComponentPartition {
    pub component: Vec<usize>,
    pub count: usize,
}

impl ComponentPartition {
    /// Objects of component `c`, ascending.
    pub fn members(&self, c: usize) -> Vec<usize> {
        (0..self.component.len())
            .filter(|&o| self.component[o] == c)
            .collect()
    }

    pub fn all_members(&self) -> Vec<Vec<usize>> {
        (0..self.count).map(|c| self.members(c)).collect()
    }
}

/// Outcome of the strong-connectivity test on a connected category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongConnectivity {
    Strong,
    /// `source` is a source strongly connected component: every morphism
    /// between `source` and `rest` goes from `source` to `rest`.
    Split { source: Vec<usize>, rest: Vec<usize> },
}

impl StrongConnectivity {
    pub fn is_strong(&self) -> bool {
        matches!(self, StrongConnectivity::Strong)
    }
}

impl FinCategory {
    pub fn connected_components(&self) -> ComponentPartition {
        let mut uf = UnionFind::new(self.n_objects());
        for m in self.morphisms() {
            uf.union(m.dom, m.cod);
        }
        let (component, count) = uf.canonical_labels();
        ComponentPartition { component, count }
    }

    pub fn is_connected(&self) -> bool {
        self.connected_components().count == 1
    }

    /// Direct check that every hom-set is nonempty.
    pub fn all_homs_nonempty(&self) -> bool {
        let n = self.n_objects();
        (0..n).all(|i| (0..n).all(|j| !self.hom(i, j).is_empty()))
    }

    /// Strongly connected components of the underlying digraph (Kosaraju),
    /// each sorted ascending, listed by smallest member.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.n_objects();
        let adj = |i: usize, j: usize| i != j && !self.hom(i, j).is_empty();

        let mut visited = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for start in 0..n {
            if visited[start] {
                continue;
            }
            visited[start] = true;
            let mut stack = vec![(start, 0usize)];
            while let Some((v, next)) = stack.last_mut() {
                let v = *v;
                if let Some(w) = (*next..n).find(|&w| adj(v, w) && !visited[w]) {
                    *next = w + 1;
                    visited[w] = true;
                    stack.push((w, 0));
                } else {
                    order.push(v);
                    stack.pop();
                }
            }
        }

        let mut comp = vec![usize::MAX; n];
        let mut sccs: Vec<Vec<usize>> = Vec::new();
        for &root in order.iter().rev() {
            if comp[root] != usize::MAX {
                continue;
            }
            let id = sccs.len();
            let mut members = vec![root];
            comp[root] = id;
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                for u in 0..n {
                    if comp[u] == usize::MAX && adj(u, v) {
                        comp[u] = id;
                        members.push(u);
                        stack.push(u);
                    }
                }
            }
            members.sort_unstable();
            sccs.push(members);
        }
        sccs.sort_by_key(|s| s[0]);
        sccs
    }

    /// Strong connectivity of a connected category, with a source-component
    /// witness when it fails. The witness is the source component containing
    /// the smallest object among all source components.
    pub fn is_strongly_connected(&self) -> Result<StrongConnectivity, CategoryError> {
        let parts = self.connected_components();
        if parts.count != 1 {
            return Err(CategoryError::NotConnected(parts.count));
        }
        let sccs = self.strongly_connected_components();
        if sccs.len() == 1 {
            return Ok(StrongConnectivity::Strong);
        }
        let n = self.n_objects();
        let mut scc_of = vec![0; n];
        for (k, s) in sccs.iter().enumerate() {
            for &o in s {
                scc_of[o] = k;
            }
        }
        let is_source = |k: usize| {
            (0..n).all(|i| scc_of[i] == k || sccs[k].iter().all(|&j| self.hom(i, j).is_empty()))
        };
        let source_idx = (0..sccs.len())
            .find(|&k| is_source(k))
            .expect("a finite condensation has a source");
        let source = sccs[source_idx].clone();
        let rest = (0..n).filter(|o| scc_of[*o] != source_idx).collect();
        Ok(StrongConnectivity::Split { source, rest })
    }
}
