//! Union-find over vertex indices, tracking the least vertex of every set.

#[derive(Clone, Debug)]
pub struct ClusterPartition {
    parent: Vec<u32>,
    size: Vec<u32>,
    min: Vec<u32>,
}

impl ClusterPartition {
    pub fn singletons(n: usize) -> Self {
        ClusterPartition {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            min: (0..n as u32).collect(),
        }
    }

    pub fn reset(&mut self) {
        for (i, ((p, s), m)) in self.parent.iter_mut().zip(&mut self.size).zip(&mut self.min).enumerate() {
            *p = i as u32;
            *s = 1;
            *m = i as u32;
        }
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    /// Root of `v`, halving paths on the way.
    #[inline]
    pub fn find(&mut self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            let grand = self.parent[self.parent[v] as usize];
            self.parent[v] = grand;
            v = grand as usize;
        }
        v
    }

    /// Root of `v` without modifying the forest.
    pub fn root(&self, mut v: usize) -> usize {
        while self.parent[v] as usize != v {
            v = self.parent[v] as usize;
        }
        v
    }

    /// Merges the sets of `a` and `b`; returns false if they were already joined.
    #[inline]
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra as u32;
        self.size[ra] += self.size[rb];
        self.min[ra] = self.min[ra].min(self.min[rb]);
        true
    }

    pub fn same(&mut self, a: usize, b: usize) -> bool {
        self.find(a) == self.find(b)
    }

    /// Points every vertex directly at its root, making [`Self::root`] O(1).
    pub fn flatten(&mut self) {
        for v in 0..self.parent.len() {
            let r = self.find(v);
            self.parent[v] = r as u32;
        }
    }

    /// Least vertex index in the cluster of `v`.
    pub fn min_of(&self, v: usize) -> usize {
        self.min[self.root(v)] as usize
    }

    pub fn size_of(&self, v: usize) -> usize {
        self.size[self.root(v)] as usize
    }

    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.parent.len()).filter(move |&v| self.parent[v] as usize == v)
    }

    pub fn cluster_count(&self) -> usize {
        self.roots().count()
    }

    /// Vertex sets of all clusters, each sorted, ordered by least vertex.
    pub fn clusters(&self) -> Vec<Vec<usize>> {
        let mut by_min: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for v in 0..self.parent.len() {
            by_min.entry(self.min_of(v)).or_default().push(v);
        }
        by_min.into_values().collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn tracks_minimum_and_size() {
        let mut uf = ClusterPartition::singletons(6);
        uf.union(4, 5);
        uf.union(5, 2);
        assert_eq!(uf.min_of(4), 2);
        assert_eq!(uf.size_of(5), 3);
        assert!(!uf.union(2, 4));
        assert_eq!(uf.cluster_count(), 4);
        assert_eq!(uf.clusters(), vec![vec![0], vec![1], vec![2, 4, 5], vec![3]]);
    }

    proptest! {
        #[test]
        fn matches_naive_labelling(n in 1usize..30, pairs in proptest::collection::vec((0usize..30, 0usize..30), 0..40)) {
            let pairs: Vec<_> = pairs.into_iter().map(|(a, b)| (a % n, b % n)).collect();
            let mut uf = ClusterPartition::singletons(n);
            let mut label: Vec<usize> = (0..n).collect();
            for &(a, b) in &pairs {
                uf.union(a, b);
                let (la, lb) = (label[a], label[b]);
                for l in label.iter_mut() {
                    if *l == lb { *l = la; }
                }
            }
            uf.flatten();
            for v in 0..n {
                // find is idempotent and min is the least member
                prop_assert_eq!(uf.root(uf.root(v)), uf.root(v));
                let least = (0..n).find(|&w| label[w] == label[v]).unwrap();
                prop_assert_eq!(uf.min_of(v), least);
                for w in 0..n {
                    prop_assert_eq!(uf.root(v) == uf.root(w), label[v] == label[w]);
                }
            }
        }
    }
}
