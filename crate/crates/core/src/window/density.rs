//! Maximum edge-free vertex sets (strong independent sets) of a hypergraph.

/// The lexicographically least maximum subset of `0..n` containing no edge entirely.
///
/// Exact branch and bound: vertices are decided in order, include first. The
/// bound is `chosen + open - packing`, where `packing` counts pairwise disjoint
/// live edges (their open parts must each lose a vertex).
pub fn max_edge_free_subset(n: usize, edges: &[Vec<usize>]) -> Vec<usize> {
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (k, e) in edges.iter().enumerate() {
        for &v in e {
            incident[v].push(k);
        }
    }
    let mut bb = Bnb { edges, incident, state: vec![State::Open; n], chosen: 0, best: None };
    bb.run(0);
    let best = bb.best.expect("the empty set is always edge-free");
    (0..n).filter(|&v| best[v]).collect()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum State {
    Open,
    In,
    Out,
}

struct Bnb<'a> {
    edges: &'a [Vec<usize>],
    incident: Vec<Vec<usize>>,
    state: Vec<State>,
    chosen: usize,
    best: Option<Vec<bool>>,
}

impl Bnb<'_> {
    fn best_size(&self) -> Option<usize> {
        self.best.as_ref().map(|b| b.iter().filter(|&&x| x).count())
    }

    fn bound(&self, v: usize) -> usize {
        let n = self.state.len();
        let open = n - v;
        // open parts of edges that can still be completed
        let mut live: Vec<Vec<usize>> = Vec::new();
        for e in self.edges {
            if e.iter().any(|&u| self.state[u] == State::Out) {
                continue;
            }
            let rest: Vec<usize> = e.iter().copied().filter(|&u| self.state[u] == State::Open).collect();
            if !rest.is_empty() {
                live.push(rest);
            }
        }
        live.sort_by_key(|r| r.len());
        let mut taken = vec![false; n];
        let mut packing = 0;
        for r in live {
            if r.iter().all(|&u| !taken[u]) {
                for &u in &r {
                    taken[u] = true;
                }
                packing += 1;
            }
        }
        self.chosen + open - packing
    }

    fn completes_edge(&self, v: usize) -> bool {
        self.incident[v]
            .iter()
            .any(|&k| self.edges[k].iter().all(|&u| u == v || self.state[u] == State::In))
    }

    fn run(&mut self, v: usize) {
        if let Some(best) = self.best_size() {
            if self.bound(v) <= best {
                return;
            }
        }
        if v == self.state.len() {
            self.best = Some(self.state.iter().map(|&s| s == State::In).collect());
            return;
        }
        if !self.completes_edge(v) {
            self.state[v] = State::In;
            self.chosen += 1;
            self.run(v + 1);
            self.chosen -= 1;
        }
        self.state[v] = State::Out;
        self.run(v + 1);
        self.state[v] = State::Open;
    }
}

/// Whether `subset` contains some edge entirely.
pub fn contains_edge(edges: &[Vec<usize>], subset: &[usize]) -> bool {
    edges.iter().any(|e| e.iter().all(|v| subset.contains(v)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// All subsets by decreasing size, each size in lexicographic order of sorted index vectors.
    fn oracle(n: usize, edges: &[Vec<usize>]) -> Vec<usize> {
        let mut best: Option<Vec<usize>> = None;
        for mask in 0u32..(1 << n) {
            let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
            if contains_edge(edges, &s) {
                continue;
            }
            best = match best {
                Some(b) if b.len() > s.len() || (b.len() == s.len() && b <= s) => Some(b),
                _ => Some(s),
            };
        }
        best.unwrap()
    }

    #[test]
    fn three_ap_free_subset_of_one_to_nine() {
        let mut edges = Vec::new();
        for a in 0..9usize {
            for d in 1..9 {
                if a + 2 * d < 9 {
                    edges.push(vec![a, a + d, a + 2 * d]);
                }
            }
        }
        let best = max_edge_free_subset(9, &edges);
        assert_eq!(best.len(), 5);
        assert_eq!(best, oracle(9, &edges));
        assert!(!contains_edge(&edges, &best));
    }

    #[test]
    fn singletons_are_excluded() {
        assert_eq!(max_edge_free_subset(3, &[vec![1]]), vec![0, 2]);
        assert_eq!(max_edge_free_subset(0, &[]), Vec::<usize>::new());
    }

    fn hypergraph() -> impl Strategy<Value = (usize, Vec<Vec<usize>>)> {
        (1usize..=10).prop_flat_map(|n| {
            let edge = proptest::collection::btree_set(0..n, 1..=3).prop_map(|s| s.into_iter().collect::<Vec<_>>());
            (Just(n), proptest::collection::vec(edge, 0..16))
        })
    }

    proptest! {
        #[test]
        fn matches_brute_force((n, edges) in hypergraph()) {
            prop_assert_eq!(max_edge_free_subset(n, &edges), oracle(n, &edges));
        }
    }
}
