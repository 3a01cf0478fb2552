//! Canonical forms of small plain graphs (≤ 32 vertices) by colour
//! refinement with individualization branching.
//!
//! Cliques here are classified by their weight-2 (or weight-3) subgraphs,
//! which have at most 16 vertices, so a straightforward refine-and-branch
//! labeling is all that is needed. Two graphs receive the same certificate
//! exactly when they are isomorphic.

/// A plain graph given by vertex count and adjacency bit rows.
#[derive(Clone, Debug)]
pub struct SmallGraph {
    n: usize,
    adj: Vec<u64>,
}

impl SmallGraph {
    pub fn new(n: usize, edges: &[(u8, u8)]) -> SmallGraph {
        assert!(n <= 32);
        let mut adj = vec![0u64; n];
        for &(u, v) in edges {
            let (u, v) = (u as usize, v as usize);
            assert!(u < n && v < n && u != v);
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        SmallGraph { n, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] & (1 << v) != 0
    }

    /// Canonical certificate: vertex count, then the upper triangle of the
    /// adjacency matrix under the canonical labeling, packed into u64 words.
    pub fn canonical_form(&self) -> CanonForm {
        if self.n == 0 {
            return CanonForm { n: 0, bits: vec![] };
        }
        let mut colors = self.initial_colors();
        self.refine(&mut colors);
        let mut best: Option<Vec<u64>> = None;
        self.branch(&colors, &mut best);
        CanonForm {
            n: self.n,
            bits: best.unwrap(),
        }
    }

    fn initial_colors(&self) -> Vec<u32> {
        (0..self.n).map(|v| self.degree(v) as u32).collect()
    }

    /// Colour refinement: repeatedly split colour classes by the multiset of
    /// neighbour colours until stable.
    fn refine(&self, colors: &mut Vec<u32>) {
        loop {
            // signature per vertex: (color, sorted neighbour colors)
            let mut sigs: Vec<(u32, Vec<u32>, usize)> = (0..self.n)
                .map(|v| {
                    let mut nb: Vec<u32> = (0..self.n)
                        .filter(|&u| self.has_edge(v, u))
                        .map(|u| colors[u])
                        .collect();
                    nb.sort_unstable();
                    (colors[v], nb, v)
                })
                .collect();
            sigs.sort();
            let mut next = vec![0u32; self.n];
            let mut c = 0u32;
            for i in 0..self.n {
                if i > 0 && (sigs[i].0, &sigs[i].1) != (sigs[i - 1].0, &sigs[i - 1].1) {
                    c += 1;
                }
                next[sigs[i].2] = c;
            }
            if next == *colors {
                return;
            }
            *colors = next;
        }
    }

    fn branch(&self, colors: &Vec<u32>, best: &mut Option<Vec<u64>>) {
        // pick the smallest non-singleton colour class
        let mut class: Option<(u32, Vec<usize>)> = None;
        let mut max_color = 0;
        for c in colors {
            max_color = max_color.max(*c);
        }
        for c in 0..=max_color {
            let members: Vec<usize> = (0..self.n).filter(|&v| colors[v] == c).collect();
            if members.len() > 1 {
                class = Some((c, members));
                break;
            }
        }
        match class {
            None => {
                // discrete colouring: relabel by colour and emit certificate
                let mut order: Vec<usize> = (0..self.n).collect();
                order.sort_by_key(|&v| colors[v]);
                let cert = self.certificate(&order);
                if best.is_none() || cert < *best.as_ref().unwrap() {
                    *best = Some(cert);
                }
            }
            Some((_, members)) => {
                for v in members {
                    let mut next = colors.clone();
                    // individualize v below its class
                    for u in 0..self.n {
                        if next[u] >= next[v] && u != v {
                            next[u] += 1;
                        }
                    }
                    self.refine(&mut next);
                    self.branch(&next, best);
                }
            }
        }
    }

    fn certificate(&self, order: &[usize]) -> Vec<u64> {
        let mut bits = vec![0u64; (self.n * self.n).div_ceil(64)];
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.has_edge(order[i], order[j]) {
                    bits[k / 64] |= 1 << (k % 64);
                }
                k += 1;
            }
        }
        bits
    }
}

/// Canonical form of a small graph; equality is graph isomorphism.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct CanonForm {
    pub n: usize,
    pub bits: Vec<u64>,
}

impl CanonForm {
    /// Reconstructs the edge list of the canonical representative.
    pub fn edges(&self) -> Vec<(u8, u8)> {
        let mut out = Vec::new();
        let mut k = 0;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.bits[k / 64] & (1 << (k % 64)) != 0 {
                    out.push((i as u8, j as u8));
                }
                k += 1;
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn canon(n: usize, edges: &[(u8, u8)]) -> CanonForm {
        SmallGraph::new(n, edges).canonical_form()
    }

    #[test]
    fn relabeling_invariance() {
        // C5 under two labelings
        let a = canon(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let b = canon(5, &[(2, 4), (4, 1), (1, 3), (3, 0), (0, 2)]);
        assert_eq!(a, b);
    }

    #[test]
    fn distinguishes_non_isomorphic() {
        // path P4 vs star K1,3: same degree sum, different graphs
        let p4 = canon(4, &[(0, 1), (1, 2), (2, 3)]);
        let star = canon(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_ne!(p4, star);
        // C6 vs two triangles: both 2-regular on 6 vertices
        let c6 = canon(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let tt = canon(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]);
        assert_ne!(c6, tt);
    }

    #[test]
    fn exhaustive_on_four_vertices() {
        // every pair of 4-vertex graphs: equal certificates iff isomorphic
        // (isomorphism decided by brute force over all 24 permutations)
        let perms4: Vec<[usize; 4]> = {
            let mut p = Vec::new();
            let idx = [0, 1, 2, 3];
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            let q = [idx[a], idx[b], idx[c], idx[d]];
                            let mut s = q;
                            s.sort();
                            if s == [0, 1, 2, 3] {
                                p.push(q);
                            }
                        }
                    }
                }
            }
            p
        };
        let all_edges: Vec<(u8, u8)> =
            vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let graph_of = |mask: usize| -> Vec<(u8, u8)> {
            all_edges
                .iter()
                .enumerate()
                .filter(|(k, _)| mask & (1 << k) != 0)
                .map(|(_, e)| *e)
                .collect()
        };
        let iso = |ea: &[(u8, u8)], eb: &[(u8, u8)]| -> bool {
            if ea.len() != eb.len() {
                return false;
            }
            let to_set = |es: &[(u8, u8)]| {
                es.iter()
                    .map(|&(u, v)| (u.min(v), u.max(v)))
                    .collect::<std::collections::BTreeSet<_>>()
            };
            let sb = to_set(eb);
            perms4.iter().any(|p| {
                let mapped: Vec<(u8, u8)> = ea
                    .iter()
                    .map(|&(u, v)| (p[u as usize] as u8, p[v as usize] as u8))
                    .collect();
                to_set(&mapped) == sb
            })
        };
        for ma in 0..64usize {
            for mb in 0..64usize {
                let (ea, eb) = (graph_of(ma), graph_of(mb));
                let same = canon(4, &ea) == canon(4, &eb);
                assert_eq!(same, iso(&ea, &eb), "masks {ma} {mb}");
            }
        }
    }
}
