//! The complete weighted graph on the 240 exceptional classes, the Weyl
//! group W(E8) acting on it by root reflections, and orbit machinery on
//! cliques.
//!
//! Group elements are never materialized; all orbit computations are
//! breadth-first closures under the 8 generator reflections, with images
//! canonicalized (sorted) before deduplication, so results are independent
//! of traversal schedule.

use std::fmt;

use rustc_hash::FxHashSet;

use crate::picard::{ClassList, ExceptionalClass, PicVec, CANONICAL, NUM_CLASSES};

/// Order of the Weyl group W(E8).
pub const WEYL_ORDER: u64 = 696_729_600;

/// Returns the order of the Weyl group acting on the 240 classes.
pub fn weyl_order() -> u64 {
    WEYL_ORDER
}

/// A root: a lattice vector of self-pairing −2 orthogonal to K.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Root(PicVec);

impl Root {
    pub fn new(v: PicVec) -> Option<Root> {
        if v.pairing(&v) == -2 && v.pairing(&CANONICAL) == 0 {
            Some(Root(v))
        } else {
            None
        }
    }

    pub fn vec(&self) -> &PicVec {
        &self.0
    }
}

/// Reflection in the hyperplane orthogonal to `r`: `x ↦ x + (x·r)·r`.
pub fn reflect(r: &Root, x: &PicVec) -> PicVec {
    x.add(&r.0.scale(x.pairing(&r.0)))
}

/// A fixed system of simple roots: `Eᵢ − Eᵢ₊₁` for i = 1..7 and
/// `L − E₁ − E₂ − E₃`. Any choice generates the same group; this one keeps
/// the generator permutations easy to audit (the first seven act as
/// transpositions on the blow-up classes).
pub fn simple_roots() -> [Root; 8] {
    let mut roots = Vec::with_capacity(8);
    for i in 0..7 {
        // E_{i+1} − E_{i+2} in 1-based labels; stored coefficients are the
        // negated multiplicities, so the vector has −1 at i and +1 at i+1.
        let mut v = [0i64; 9];
        v[1 + i] = -1;
        v[2 + i] = 1;
        roots.push(Root::new(PicVec(v)).unwrap());
    }
    let mut v = [0i64; 9];
    v[0] = 1;
    v[1] = 1;
    v[2] = 1;
    v[3] = 1;
    roots.push(Root::new(PicVec(v)).unwrap());
    roots.try_into().unwrap()
}

/// A clique of the weighted graph: a strictly increasing list of vertex
/// indices into the canonical class order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Clique {
    verts: Vec<u8>,
}

impl Clique {
    pub fn new(mut verts: Vec<u8>) -> Clique {
        verts.sort_unstable();
        verts.dedup();
        Clique { verts }
    }

    pub fn from_classes(g: &WeightedGraph, classes: &[ExceptionalClass]) -> Clique {
        Clique::new(
            classes
                .iter()
                .map(|c| g.classes().index_of_class(c))
                .collect(),
        )
    }

    pub fn verts(&self) -> &[u8] {
        &self.verts
    }

    pub fn len(&self) -> usize {
        self.verts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.verts.is_empty()
    }

    pub fn contains(&self, v: u8) -> bool {
        self.verts.binary_search(&v).is_ok()
    }

    pub fn classes<'a>(&self, g: &'a WeightedGraph) -> Vec<&'a ExceptionalClass> {
        self.verts.iter().map(|&v| g.classes().class(v)).collect()
    }

    /// Multiset of pairwise weights, as counts indexed by weight 0..3.
    pub fn weight_counts(&self, g: &WeightedGraph) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for (i, &u) in self.verts.iter().enumerate() {
            for &v in &self.verts[i + 1..] {
                counts[g.weight(u, v) as usize] += 1;
            }
        }
        counts
    }

    /// Packs up to 16 sorted vertices into a `u128` key.
    pub fn encode(&self) -> u128 {
        encode_verts(&self.verts)
    }
}

impl fmt::Display for Clique {
    /// Database body-line form: member classes separated by `;`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = WeightedGraph::get();
        for (i, &v) in self.verts.iter().enumerate() {
            if i > 0 {
                write!(f, ";")?;
            }
            write!(f, "{}", g.classes().class(v))?;
        }
        Ok(())
    }
}

pub fn encode_verts(verts: &[u8]) -> u128 {
    assert!(verts.len() <= 16, "clique too large for packed key");
    let mut key: u128 = 0;
    let mut i = 0;
    while i < 16 {
        let b = if i < verts.len() { verts[i] } else { 0xFF };
        key |= (b as u128) << (8 * i);
        i += 1;
    }
    key
}

pub fn decode_verts(key: u128, len: usize) -> Vec<u8> {
    (0..len).map(|i| (key >> (8 * i)) as u8).collect()
}

/// Raised when an orbit closure grows past the configured element budget.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetExceeded {
    pub budget: usize,
    pub seen: usize,
}

impl fmt::Display for BudgetExceeded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "orbit budget exceeded: {} elements seen, budget {}",
            self.seen, self.budget
        )
    }
}

impl std::error::Error for BudgetExceeded {}

/// The complete weighted graph on the 240 classes: dense weight matrix,
/// partner involution and the 8 generator permutations.
pub struct WeightedGraph {
    classes: &'static ClassList,
    weights: Vec<i8>,
    partner: [u8; NUM_CLASSES],
    gens: [[u8; NUM_CLASSES]; 8],
}

impl WeightedGraph {
    fn build() -> WeightedGraph {
        let classes = ClassList::get();
        let mut weights = vec![0i8; NUM_CLASSES * NUM_CLASSES];
        for i in 0..NUM_CLASSES {
            for j in 0..NUM_CLASSES {
                let w = classes.class(i as u8).pairing(classes.class(j as u8));
                weights[i * NUM_CLASSES + j] = w as i8;
            }
        }
        // row histograms: (1, 56, 126, 56) for weights (3, 2, 1, 0)
        for i in 0..NUM_CLASSES {
            let mut hist = [0usize; 4];
            for j in 0..NUM_CLASSES {
                if i != j {
                    hist[weights[i * NUM_CLASSES + j] as usize] += 1;
                }
            }
            assert_eq!(hist, [56, 126, 56, 1], "weight histogram of row {i}");
            assert_eq!(weights[i * NUM_CLASSES + i], -1);
        }
        let mut partner = [0u8; NUM_CLASSES];
        for i in 0..NUM_CLASSES {
            let p = classes.class(i as u8).partner();
            partner[i] = classes.index_of(p.vec()).expect("partner is a class");
        }
        let roots = simple_roots();
        let mut gens = [[0u8; NUM_CLASSES]; 8];
        for (g, root) in roots.iter().enumerate() {
            for i in 0..NUM_CLASSES {
                let img = reflect(root, classes.class(i as u8).vec());
                gens[g][i] = classes
                    .index_of(&img)
                    .expect("reflection permutes the classes");
            }
        }
        WeightedGraph {
            classes,
            weights,
            partner,
            gens,
        }
    }

    pub fn get() -> &'static WeightedGraph {
        use std::sync::OnceLock;
        static INSTANCE: OnceLock<WeightedGraph> = OnceLock::new();
        INSTANCE.get_or_init(WeightedGraph::build)
    }

    pub fn classes(&self) -> &'static ClassList {
        self.classes
    }

    pub fn weight(&self, i: u8, j: u8) -> i8 {
        self.weights[i as usize * NUM_CLASSES + j as usize]
    }

    pub fn partner_of(&self, i: u8) -> u8 {
        self.partner[i as usize]
    }

    pub fn generators(&self) -> &[[u8; NUM_CLASSES]; 8] {
        &self.gens
    }

    /// The plain graph of the weight-`w` edges inside `k`, as pairs of
    /// positions into `k.verts()`.
    pub fn weight_subgraph(&self, k: &Clique, w: i8) -> Vec<(u8, u8)> {
        let vs = k.verts();
        let mut edges = Vec::new();
        for i in 0..vs.len() {
            for j in i + 1..vs.len() {
                if self.weight(vs[i], vs[j]) == w {
                    edges.push((i as u8, j as u8));
                }
            }
        }
        edges
    }

    /// Breadth-first closure of a clique under the generators; every image
    /// is re-sorted to canonical form before deduplication.
    pub fn orbit_set(&self, k: &Clique, budget: usize) -> Result<FxHashSet<u128>, BudgetExceeded> {
        let n = k.len();
        let start = k.encode();
        let mut seen = FxHashSet::default();
        seen.insert(start);
        let mut frontier = vec![start];
        let mut buf = vec![0u8; n];
        while let Some(key) = frontier.pop() {
            let verts = decode_verts(key, n);
            for gen in &self.gens {
                for (t, &v) in buf.iter_mut().zip(&verts) {
                    *t = gen[v as usize];
                }
                buf.sort_unstable();
                let img = encode_verts(&buf);
                if seen.insert(img) {
                    if seen.len() > budget {
                        return Err(BudgetExceeded {
                            budget,
                            seen: seen.len(),
                        });
                    }
                    frontier.push(img);
                }
            }
        }
        Ok(seen)
    }

    /// Orbit size of a clique under the Weyl group.
    pub fn orbit_of_clique(&self, k: &Clique, budget: usize) -> Result<u64, BudgetExceeded> {
        Ok(self.orbit_set(k, budget)?.len() as u64)
    }

    /// Orbit size of an ordered tuple of vertices (no re-sorting).
    pub fn orbit_of_ordered_tuple(
        &self,
        tuple: &[u8],
        budget: usize,
    ) -> Result<u64, BudgetExceeded> {
        let n = tuple.len();
        let start = encode_verts(tuple);
        let mut seen = FxHashSet::default();
        seen.insert(start);
        let mut frontier = vec![start];
        let mut buf = vec![0u8; n];
        while let Some(key) = frontier.pop() {
            let verts = decode_verts(key, n);
            for gen in &self.gens {
                for (t, &v) in buf.iter_mut().zip(&verts) {
                    *t = gen[v as usize];
                }
                let img = encode_verts(&buf);
                if seen.insert(img) {
                    if seen.len() > budget {
                        return Err(BudgetExceeded {
                            budget,
                            seen: seen.len(),
                        });
                    }
                    frontier.push(img);
                }
            }
        }
        Ok(seen.len() as u64)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_roots_are_roots() {
        for r in simple_roots() {
            assert_eq!(r.vec().pairing(r.vec()), -2);
            assert_eq!(r.vec().pairing(&CANONICAL), 0);
        }
    }

    #[test]
    fn reflect_basic_identities() {
        let roots = simple_roots();
        for r in &roots {
            // defining property and involution
            assert_eq!(reflect(r, r.vec()), r.vec().scale(-1));
            assert_eq!(reflect(r, &CANONICAL), CANONICAL);
            for c in ClassList::get().iter().take(20) {
                let img = reflect(r, c.vec());
                assert_eq!(reflect(r, &img), *c.vec());
            }
        }
        // E1 − E2 swaps E1 and E2
        let e1 = ExceptionalClass::blowup(0);
        let e2 = ExceptionalClass::blowup(1);
        assert_eq!(reflect(&roots[0], e1.vec()), *e2.vec());
    }

    #[test]
    fn reflections_preserve_pairing() {
        let g = WeightedGraph::get();
        let cl = g.classes();
        for gen in g.generators() {
            for i in (0..240).step_by(7) {
                for j in (0..240).step_by(11) {
                    let (i, j) = (i as u8, j as u8);
                    assert_eq!(
                        g.weight(gen[i as usize], gen[j as usize]),
                        g.weight(i, j),
                        "generator must preserve pairing between {} and {}",
                        cl.class(i),
                        cl.class(j)
                    );
                }
            }
        }
    }

    #[test]
    fn partner_equivariance() {
        let g = WeightedGraph::get();
        for gen in g.generators() {
            for i in 0..240u8 {
                assert_eq!(
                    g.partner_of(gen[i as usize]),
                    gen[g.partner_of(i) as usize]
                );
            }
        }
    }

    #[test]
    fn weyl_order_factorization() {
        assert_eq!(weyl_order(), 696_729_600);
        // 2^14 · 3^5 · 5^2 · 7
        assert_eq!(weyl_order(), (1u64 << 14) * 243 * 25 * 7);
    }

    #[test]
    fn orbit_of_single_vertex_is_everything() {
        let g = WeightedGraph::get();
        let orbit = g
            .orbit_of_clique(&Clique::new(vec![0]), usize::MAX)
            .unwrap();
        assert_eq!(orbit, 240);
    }

    #[test]
    fn orbit_of_ordered_weight1_pair() {
        let g = WeightedGraph::get();
        // find a weight-1 pair
        let mut pair = None;
        'outer: for i in 0..240u8 {
            for j in 0..240u8 {
                if i != j && g.weight(i, j) == 1 {
                    pair = Some((i, j));
                    break 'outer;
                }
            }
        }
        let (i, j) = pair.unwrap();
        let orbit = g.orbit_of_ordered_tuple(&[i, j], usize::MAX).unwrap();
        assert_eq!(orbit, 30_240); // 240 × 126: transitive on ordered pairs
        assert_eq!(30_240, 240 * 126);
    }

    #[test]
    fn orbit_budget_signals() {
        let g = WeightedGraph::get();
        let err = g.orbit_of_clique(&Clique::new(vec![0]), 10).unwrap_err();
        assert_eq!(err.budget, 10);
    }
}
