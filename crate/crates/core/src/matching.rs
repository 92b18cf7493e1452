//! Depth-first enumeration of perfect matchings in a bipartite graph.
//!
//! Left vertices are extended in index order and their candidate edges are
//! tried in list order, so the emission order is fully determined by the
//! adjacency lists.

/// Bipartite graph given as left-vertex adjacency lists of `(right, edge_label)`.
#[derive(Debug, Clone, Default)]
pub struct Bipartite {
    pub right_count: usize,
    pub adjacency: Vec<Vec<(usize, usize)>>,
}

impl Bipartite {
    pub fn new(right_count: usize, adjacency: Vec<Vec<(usize, usize)>>) -> Self {
        Bipartite { right_count, adjacency }
    }

    pub fn left_count(&self) -> usize {
        self.adjacency.len()
    }

    /// Calls `visit(labels, partners)` once per perfect matching, where
    /// `labels[i]` is the edge label used at left vertex `i` and
    /// `partners[i]` its right endpoint.
    pub fn for_each_perfect_matching(&self, mut visit: impl FnMut(&[usize], &[usize])) {
        let n = self.left_count();
        if n != self.right_count {
            return;
        }
        let mut used = vec![false; n];
        let mut labels = vec![0usize; n];
        let mut partners = vec![0usize; n];
        let mut remaining = vec![0usize; n];
        for list in &self.adjacency {
            for &(r, _) in list {
                remaining[r] += 1;
            }
        }
        if remaining.contains(&0) && n > 0 {
            return;
        }
        self.extend(0, &mut used, &mut labels, &mut partners, &mut remaining, &mut visit);
    }

    fn extend(
        &self,
        left: usize,
        used: &mut [bool],
        labels: &mut [usize],
        partners: &mut [usize],
        remaining: &mut [usize],
        visit: &mut impl FnMut(&[usize], &[usize]),
    ) {
        if left == self.left_count() {
            visit(labels, partners);
            return;
        }
        // Edges of this left vertex stop being available to their right endpoints.
        for &(r, _) in &self.adjacency[left] {
            remaining[r] -= 1;
        }
        for &(r, label) in &self.adjacency[left] {
            if used[r] {
                continue;
            }
            // Another unmatched right vertex that just lost its last option kills this branch.
            let starved = self.adjacency[left].iter().any(|&(s, _)| s != r && !used[s] && remaining[s] == 0);
            if starved {
                continue;
            }
            used[r] = true;
            labels[left] = label;
            partners[left] = r;
            self.extend(left + 1, used, labels, partners, remaining, visit);
            used[r] = false;
        }
        for &(r, _) in &self.adjacency[left] {
            remaining[r] += 1;
        }
    }

    /// Collects every perfect matching as its label vector.
    pub fn perfect_matchings(&self) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        self.for_each_perfect_matching(|labels, _| out.push(labels.to_vec()));
        out
    }

    pub fn count_perfect_matchings(&self) -> u64 {
        let mut count = 0u64;
        self.for_each_perfect_matching(|_, _| count += 1);
        count
    }
}

/// Sign of the permutation `i -> perm[i]`.
pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut at = start;
        while !seen[at] {
            seen[at] = true;
            at = perm[at];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}
