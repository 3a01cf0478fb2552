//! Enumeration and classification of cliques of the weighted graph: the
//! eight size-10 orbit types with weights {1,2}, the weight-{1,3} clique
//! structure built from partner pairs, the orbit/sub-orbit table, and the
//! blow-down obstruction test.

use std::fmt;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::canon::{CanonForm, SmallGraph};
use crate::picard::{ExceptionalClass, NUM_CLASSES};
use crate::weylgraph::{BudgetExceeded, Clique, WeightedGraph, WEYL_ORDER};

/// Number of unordered weight-1 pairs of classes: 240 · 126 / 2.
pub const WEIGHT1_PAIRS: u64 = 15_120;

/// The fixed weight-1 pair used for all sub-orbit computations: the classes
/// of the lines through points 1,2 and through points 3,4.
pub fn fixed_pair(g: &WeightedGraph) -> (u8, u8) {
    let l12 = g
        .classes()
        .index_of(ExceptionalClass::line(0, 1).vec())
        .unwrap();
    let l34 = g
        .classes()
        .index_of(ExceptionalClass::line(2, 3).vec())
        .unwrap();
    debug_assert_eq!(g.weight(l12, l34), 1);
    (l12, l34)
}

// ---------------------------------------------------------------------------
// 256-bit vertex sets

#[derive(Clone, Copy, PartialEq, Eq, Default)]
pub struct VertSet([u64; 4]);

impl VertSet {
    pub fn full(n: usize) -> VertSet {
        let mut s = VertSet::default();
        for v in 0..n {
            s.insert(v as u8);
        }
        s
    }

    pub fn insert(&mut self, v: u8) {
        self.0[(v >> 6) as usize] |= 1 << (v & 63);
    }

    pub fn remove(&mut self, v: u8) {
        self.0[(v >> 6) as usize] &= !(1 << (v & 63));
    }

    pub fn contains(&self, v: u8) -> bool {
        self.0[(v >> 6) as usize] & (1 << (v & 63)) != 0
    }

    pub fn inter(&self, other: &VertSet) -> VertSet {
        VertSet([
            self.0[0] & other.0[0],
            self.0[1] & other.0[1],
            self.0[2] & other.0[2],
            self.0[3] & other.0[3],
        ])
    }

    pub fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0 == [0; 4]
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<u8> {
        for (i, w) in self.0.iter().enumerate() {
            if *w != 0 {
                return Some((i as u8) << 6 | w.trailing_zeros() as u8);
            }
        }
        None
    }

    pub fn iter(&self) -> impl Iterator<Item = u8> + '_ {
        (0..4usize).flat_map(move |i| {
            let mut w = self.0[i];
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as u8;
                    w &= w - 1;
                    Some((i as u8) << 6 | b)
                }
            })
        })
    }
}

// ---------------------------------------------------------------------------
// Clique enumeration

/// Per-vertex compatibility masks for an allowed weight set.
pub fn weight_masks(g: &WeightedGraph, weights: &[i8]) -> Vec<VertSet> {
    let mut masks = vec![VertSet::default(); NUM_CLASSES];
    for i in 0..NUM_CLASSES {
        for j in 0..NUM_CLASSES {
            if i != j && weights.contains(&g.weight(i as u8, j as u8)) {
                masks[i].insert(j as u8);
            }
        }
    }
    masks
}

/// Enumerates every clique of `size` vertices whose pairwise weights all lie
/// in `weights` and which contains all `required` vertices. Each clique is
/// reported exactly once, as a sorted vertex list. `order`, when given, is a
/// relabeling permutation; the DFS walks candidates in the permuted order
/// but the reported set of cliques is identical for every choice.
pub fn enumerate_cliques_with<F: FnMut(&[u8])>(
    g: &WeightedGraph,
    weights: &[i8],
    size: usize,
    required: &[u8],
    order: Option<&[u8; NUM_CLASSES]>,
    mut emit: F,
) {
    assert!(size >= required.len());
    for (i, &u) in required.iter().enumerate() {
        for &v in &required[i + 1..] {
            assert!(
                u != v && weights.contains(&g.weight(u, v)),
                "required members must be pairwise compatible with the weight set"
            );
        }
    }
    // work in relabeled space so the candidate order is the index order
    let mut perm = [0u8; NUM_CLASSES];
    match order {
        Some(p) => perm.copy_from_slice(&p[..]),
        None => {
            for (v, t) in perm.iter_mut().enumerate() {
                *t = v as u8;
            }
        }
    }
    let mut inv = [0u8; NUM_CLASSES];
    for v in 0..NUM_CLASSES {
        inv[perm[v] as usize] = v as u8;
    }
    let masks = weight_masks(g, weights);
    let mut relabeled = vec![VertSet::default(); NUM_CLASSES];
    for v in 0..NUM_CLASSES {
        let mut m = VertSet::default();
        for u in masks[v].iter() {
            m.insert(perm[u as usize]);
        }
        relabeled[perm[v] as usize] = m;
    }
    let mut cand = VertSet::full(NUM_CLASSES);
    for &r in required {
        cand = cand.inter(&relabeled[perm[r as usize] as usize]);
    }
    for &r in required {
        cand.remove(perm[r as usize]);
    }
    let need = size - required.len();
    let mut chosen: Vec<u8> = Vec::with_capacity(need);
    let mut out: Vec<u8> = Vec::with_capacity(size);
    dfs(&relabeled, cand, need, &mut chosen, &mut |added: &[u8]| {
        out.clear();
        out.extend_from_slice(required);
        out.extend(added.iter().map(|&v| inv[v as usize]));
        out.sort_unstable();
        emit(&out);
    });
}

fn dfs<F: FnMut(&[u8])>(
    masks: &[VertSet],
    cand: VertSet,
    need: usize,
    chosen: &mut Vec<u8>,
    emit: &mut F,
) {
    if need == 0 {
        emit(chosen);
        return;
    }
    let mut rest = cand;
    while rest.count() as usize >= need {
        let v = rest.first().unwrap();
        rest.remove(v);
        chosen.push(v);
        dfs(masks, rest.inter(&masks[v as usize]), need - 1, chosen, emit);
        chosen.pop();
    }
}

/// Convenience wrapper returning the cliques in canonical (lexicographic)
/// order.
pub fn enumerate_cliques(
    g: &WeightedGraph,
    weights: &[i8],
    size: usize,
    required: &[u8],
) -> Vec<Clique> {
    let mut out = Vec::new();
    enumerate_cliques_with(g, weights, size, required, None, |vs| {
        out.push(Clique::new(vs.to_vec()));
    });
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Isomorphism classification

/// Weight regime of a clique: which positive weight may appear besides 1.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Regime {
    /// weights {1,2}: concurrency off the ramification curve
    OneTwo,
    /// weights {1,3}: concurrency on the ramification curve
    OneThree,
}

/// Canonical form of the positive-weight-≥2 subgraph of a clique, together
/// with the weight regime. Equal values mean weight-preserving isomorphism.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IsoType {
    pub regime: Regime,
    pub size: usize,
    pub canon: CanonForm,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassifyError(pub String);

impl fmt::Display for ClassifyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cannot classify clique: {}", self.0)
    }
}

impl std::error::Error for ClassifyError {}

/// Classifies a clique by the canonical form of its weight-2 (weights {1,2})
/// or weight-3 (weights {1,3}) subgraph.
pub fn classify(g: &WeightedGraph, k: &Clique) -> Result<IsoType, ClassifyError> {
    let counts = k.weight_counts(g);
    if counts[0] > 0 {
        return Err(ClassifyError(format!(
            "weight multiset {counts:?} contains weight 0"
        )));
    }
    let regime = match (counts[2] > 0, counts[3] > 0) {
        (true, true) => {
            return Err(ClassifyError(format!(
                "weight multiset {counts:?} mixes weights 2 and 3"
            )))
        }
        (false, true) => Regime::OneThree,
        // pure weight-1 cliques are classified in the {1,2} regime
        _ => Regime::OneTwo,
    };
    let w = match regime {
        Regime::OneTwo => 2,
        Regime::OneThree => 3,
    };
    let edges = g.weight_subgraph(k, w);
    let canon = SmallGraph::new(k.len(), &edges).canonical_form();
    Ok(IsoType {
        regime,
        size: k.len(),
        canon,
    })
}

/// The eight isomorphism types of size-10 weight-{1,2} cliques, as edge
/// lists of their weight-2 subgraphs, indexed 1..=8 in the order of the
/// orbit table (sub-orbit sizes strictly decreasing).
///
/// 1: three legs of length 2 from a center, plus a triangle
/// 2: a 4-cycle, plus an edge carrying two pendant leaves at each end
/// 3: a 6-cycle, a triangle and an isolated vertex
/// 4: two triangles and two disjoint edges
/// 5: two 5-cycles
/// 6: two 4-cycles and two isolated vertices
/// 7: two stars with four leaves
/// 8: three triangles and an isolated vertex
pub fn reference_types() -> [(u8, SmallGraph); 8] {
    let t1 = &[
        (0, 1),
        (1, 2),
        (0, 3),
        (3, 4),
        (0, 5),
        (5, 6),
        (7, 8),
        (8, 9),
        (7, 9),
    ];
    let t2 = &[
        (0, 1),
        (0, 2),
        (0, 3),
        (1, 4),
        (1, 5),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 6),
    ];
    let t3 = &[
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 5),
        (5, 0),
        (6, 7),
        (7, 8),
        (6, 8),
    ];
    let t4 = &[
        (0, 1),
        (1, 2),
        (0, 2),
        (3, 4),
        (4, 5),
        (3, 5),
        (6, 7),
        (8, 9),
    ];
    let t5 = &[
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (4, 0),
        (5, 6),
        (6, 7),
        (7, 8),
        (8, 9),
        (9, 5),
    ];
    let t6 = &[
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 0),
        (4, 5),
        (5, 6),
        (6, 7),
        (7, 4),
    ];
    let t7 = &[
        (0, 1),
        (0, 2),
        (0, 3),
        (0, 4),
        (5, 6),
        (5, 7),
        (5, 8),
        (5, 9),
    ];
    let t8 = &[
        (0, 1),
        (1, 2),
        (0, 2),
        (3, 4),
        (4, 5),
        (3, 5),
        (6, 7),
        (7, 8),
        (6, 8),
    ];
    [
        (1, SmallGraph::new(10, t1)),
        (2, SmallGraph::new(10, t2)),
        (3, SmallGraph::new(10, t3)),
        (4, SmallGraph::new(10, t4)),
        (5, SmallGraph::new(10, t5)),
        (6, SmallGraph::new(10, t6)),
        (7, SmallGraph::new(10, t7)),
        (8, SmallGraph::new(10, t8)),
    ]
}

/// Table index (1..=8) of a weight-{1,2} size-10 isomorphism type.
pub fn type_index(iso: &IsoType) -> Option<u8> {
    use std::sync::OnceLock;
    static TABLE: OnceLock<FxHashMap<CanonForm, u8>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        reference_types()
            .into_iter()
            .map(|(i, graph)| (graph.canonical_form(), i))
            .collect()
    });
    if iso.regime != Regime::OneTwo || iso.size != 10 {
        return None;
    }
    table.get(&iso.canon).copied()
}

// ---------------------------------------------------------------------------
// The orbit / sub-orbit table

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TableRow {
    pub clique_type: u8,
    pub suborbit: u64,
    /// number of weight-1 edges in a clique of this type, measured
    pub w1_edges: u64,
    /// orbit size derived by double counting over the 15120 weight-1 pairs
    pub orbit: u64,
    /// stabilizer size derived by orbit–stabilizer
    pub stabilizer: u64,
}

/// Enumerates all size-10 weight-{1,2} cliques through the fixed pair,
/// classifies them, and derives orbit and stabilizer sizes.
pub fn suborbit_table(g: &WeightedGraph) -> Vec<TableRow> {
    suborbit_table_with_workers(g, 1)
}

/// As [`suborbit_table`], splitting the enumeration across `workers`
/// threads. The result is schedule-independent.
pub fn suborbit_table_with_workers(g: &WeightedGraph, workers: usize) -> Vec<TableRow> {
    let (a, b) = fixed_pair(g);
    let counts = classify_counts(g, &[1, 2], 10, &[a, b], workers);
    let mut rows: Vec<TableRow> = counts
        .into_iter()
        .map(|(iso, (count, w2_edges))| {
            let w1_edges = (10 * 9 / 2) as u64 - w2_edges;
            let total = WEIGHT1_PAIRS * count;
            assert_eq!(total % w1_edges, 0, "double-counting identity must divide");
            let orbit = total / w1_edges;
            assert_eq!(WEYL_ORDER % orbit, 0, "orbit must divide the group order");
            TableRow {
                clique_type: type_index(&iso).expect("size-10 {1,2} clique type"),
                suborbit: count,
                w1_edges,
                orbit,
                stabilizer: WEYL_ORDER / orbit,
            }
        })
        .collect();
    rows.sort_by_key(|r| r.clique_type);
    rows
}

/// Classification counts for an enumeration: per isomorphism type, the
/// number of cliques and the (common) number of heavy edges. Canonical
/// forms are memoized on the position-labeled heavy edge list, which
/// repeats heavily across an enumeration.
fn classify_counts(
    g: &WeightedGraph,
    weights: &[i8],
    size: usize,
    required: &[u8],
    workers: usize,
) -> FxHashMap<IsoType, (u64, u64)> {
    let chunks = partitioned_enumeration(g, weights, size, required, workers);
    let heavy = if weights.contains(&3) { 3 } else { 2 };
    let mut memo: FxHashMap<Vec<(u8, u8)>, IsoType> = FxHashMap::default();
    let mut counts: FxHashMap<IsoType, (u64, u64)> = FxHashMap::default();
    for cliques in chunks {
        for k in cliques {
            let edges = g.weight_subgraph(&k, heavy);
            let w_edges = edges.len() as u64;
            let iso = memo
                .entry(edges)
                .or_insert_with(|| classify(g, &k).expect("enumerated clique must classify"));
            let entry = counts.entry(iso.clone()).or_insert((0, w_edges));
            assert_eq!(entry.1, w_edges, "heavy edge count is a type invariant");
            entry.0 += 1;
        }
    }
    counts
}

/// Generates the per-type sub-orbit databases: all size-10 weight-{1,2}
/// cliques through the fixed pair, classified and grouped by type index.
pub fn generate_databases(g: &WeightedGraph, workers: usize) -> Vec<(u8, CliqueDatabase)> {
    let (a, b) = fixed_pair(g);
    let chunks = partitioned_enumeration(g, &[1, 2], 10, &[a, b], workers);
    let mut memo: FxHashMap<Vec<(u8, u8)>, u8> = FxHashMap::default();
    let mut per_type: Vec<Vec<Clique>> = vec![Vec::new(); 9];
    for chunk in chunks {
        for k in chunk {
            let edges = g.weight_subgraph(&k, 2);
            let t = *memo.entry(edges).or_insert_with(|| {
                let iso = classify(g, &k).expect("clique classifies");
                type_index(&iso).expect("one of the eight size-10 types")
            });
            per_type[t as usize].push(k);
        }
    }
    let required = vec![*g.classes().class(a), *g.classes().class(b)];
    (1..=8u8)
        .map(|t| {
            let mut cliques = std::mem::take(&mut per_type[t as usize]);
            cliques.sort();
            (
                t,
                CliqueDatabase {
                    header: DbHeader {
                        weights: vec![1, 2],
                        size: 10,
                        required: required.clone(),
                        generator: format!("eckardt {}", env!("CARGO_PKG_VERSION")),
                    },
                    cliques,
                },
            )
        })
        .collect()
}

/// Runs the enumeration split by the first chosen vertex across worker
/// threads; the concatenated result is re-sorted so the output does not
/// depend on the schedule.
pub fn partitioned_enumeration(
    g: &WeightedGraph,
    weights: &[i8],
    size: usize,
    required: &[u8],
    workers: usize,
) -> Vec<Vec<Clique>> {
    if workers <= 1 {
        return vec![enumerate_cliques(g, weights, size, required)];
    }
    // split on the smallest added vertex; each worker takes a residue class
    let masks = weight_masks(g, weights);
    let mut cand = VertSet::full(NUM_CLASSES);
    for &r in required {
        cand = cand.inter(&masks[r as usize]);
    }
    for &r in required {
        cand.remove(r);
    }
    let firsts: Vec<u8> = cand.iter().collect();
    let need = size - required.len();
    assert!(need >= 1, "workers > 1 needs at least one free slot");
    let mut results: Vec<Vec<Clique>> = Vec::new();
    std::thread::scope(|scope| {
        let mut handles = Vec::new();
        for w in 0..workers {
            let firsts = &firsts;
            let masks = &masks;
            let required = required.to_vec();
            handles.push(scope.spawn(move || {
                let mut out: Vec<Clique> = Vec::new();
                for (idx, &v) in firsts.iter().enumerate() {
                    if idx % workers != w {
                        continue;
                    }
                    let mut rest = cand;
                    for u in cand.iter() {
                        if u <= v {
                            rest.remove(u);
                        }
                    }
                    let mut chosen = vec![v];
                    dfs(
                        masks,
                        rest.inter(&masks[v as usize]),
                        need - 1,
                        &mut chosen,
                        &mut |added: &[u8]| {
                            let mut full = required.clone();
                            full.extend_from_slice(added);
                            out.push(Clique::new(full));
                        },
                    );
                }
                out.sort();
                out
            }));
        }
        for h in handles {
            results.push(h.join().expect("enumeration worker panicked"));
        }
    });
    results.sort_by(|x, y| x.first().cmp(&y.first()));
    results
}

// ---------------------------------------------------------------------------
// Maximality facts

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaximalityReport {
    /// largest weight-{1,2} clique size (through the fixed pair, which
    /// covers every clique of size ≥ 4 up to conjugacy)
    pub max_12: usize,
    /// every size-11 weight-{1,2} clique extends to size 12
    pub every_11_extends: bool,
    /// number of size-12 weight-{1,2} cliques through the fixed pair
    pub twelve_count: u64,
    /// every such size-12 clique has weight-2 graph = four disjoint triangles
    pub twelve_all_four_triangles: bool,
    /// largest clique with only weight-2 edges (global search)
    pub max_weight2_only: usize,
    /// largest weight-{1,3} clique size
    pub max_13: usize,
    /// no maximal weight-{1,3} cliques of sizes 10..=15
    pub no_maximal_13_between_10_and_15: bool,
}

/// Verifies the maximal-clique structure of the graph. The fixed-pair
/// reductions are justified by the transitivity of the Weyl group on
/// weight-1 pairs together with the weight-2-only maximum of 3 (so every
/// clique of size ≥ 4 contains a weight-1 edge); for the {1,3} regime the
/// reduction is through the partner-pair graph.
pub fn maximality_facts(g: &WeightedGraph) -> MaximalityReport {
    let (a, b) = fixed_pair(g);
    let masks12 = weight_masks(g, &[1, 2]);

    // (c) global maximum of weight-2-only cliques
    let mut max_w2 = 0usize;
    enumerate_all_cliques(g, &[2], &mut |k: &[u8]| {
        max_w2 = max_w2.max(k.len());
    });

    // (a) no size-13 cliques through the pair, and size-12 cliques exist
    let thirteen = count_cliques(g, &[1, 2], 13, &[a, b]);
    let twelve = enumerate_cliques(g, &[1, 2], 12, &[a, b]);

    // (b) every size-11 clique through the pair extends
    let mut every_11_extends = true;
    enumerate_cliques_with(g, &[1, 2], 11, &[a, b], None, |k| {
        let mut cand = VertSet::full(NUM_CLASSES);
        for &v in k {
            cand = cand.inter(&masks12[v as usize]);
        }
        if cand.is_empty() {
            every_11_extends = false;
        }
    });

    // all size-12 cliques through the pair are four disjoint triangles
    let four_triangles = SmallGraph::new(
        12,
        &[
            (0, 1),
            (1, 2),
            (0, 2),
            (3, 4),
            (4, 5),
            (3, 5),
            (6, 7),
            (7, 8),
            (6, 8),
            (9, 10),
            (10, 11),
            (9, 11),
        ],
    )
    .canonical_form();
    let twelve_all_four_triangles = twelve.iter().all(|k| {
        let edges = g.weight_subgraph(k, 2);
        SmallGraph::new(12, &edges).canonical_form() == four_triangles
    });

    // (d) weight-{1,3} facts via the partner-pair graph
    let h = PairGraph::build(g);
    let max_13 = 2 * h.max_clique;

    MaximalityReport {
        max_12: if thirteen == 0 && !twelve.is_empty() {
            12
        } else {
            13
        },
        every_11_extends,
        twelve_count: twelve.len() as u64,
        twelve_all_four_triangles,
        max_weight2_only: max_w2,
        max_13,
        no_maximal_13_between_10_and_15: h.no_maximal_between_5_and_7,
    }
}

fn count_cliques(g: &WeightedGraph, weights: &[i8], size: usize, required: &[u8]) -> u64 {
    let mut n = 0u64;
    enumerate_cliques_with(g, weights, size, required, None, |_| n += 1);
    n
}

/// Walks every clique (all sizes) of the whole graph for a weight set; only
/// usable when the clique structure is small.
fn enumerate_all_cliques<F: FnMut(&[u8])>(g: &WeightedGraph, weights: &[i8], emit: &mut F) {
    let masks = weight_masks(g, weights);
    fn walk<F: FnMut(&[u8])>(masks: &[VertSet], cand: VertSet, chosen: &mut Vec<u8>, emit: &mut F) {
        emit(chosen);
        let mut rest = cand;
        while let Some(v) = rest.first() {
            rest.remove(v);
            chosen.push(v);
            walk(masks, rest.inter(&masks[v as usize]), chosen, emit);
            chosen.pop();
        }
    }
    let mut chosen: Vec<u8> = Vec::new();
    walk(&masks, VertSet::full(NUM_CLASSES), &mut chosen, emit);
}

// ---------------------------------------------------------------------------
// The partner-pair graph: scaffolding for weight-{1,3} cliques

/// The graph on the 120 partner pairs; two pairs are adjacent when all four
/// cross pairings equal 1 (equivalently, when any one of them does).
/// Weight-{1,3} cliques are exactly choices of "both members / one member"
/// over the pairs of a clique here, so all weight-{1,3} questions reduce to
/// this graph.
pub struct PairGraph {
    /// each pair as (smaller index, partner)
    pub pairs: Vec<(u8, u8)>,
    /// pair id of each class
    pub pair_of: [u16; NUM_CLASSES],
    /// adjacency bitsets over pair ids (120 bits in 2 words)
    pub adj: Vec<[u64; 2]>,
    /// clique counts by size 0..=15
    pub clique_counts: [u64; 16],
    pub max_clique: usize,
    /// every clique of 5..=7 pairs extends by another pair
    pub no_maximal_between_5_and_7: bool,
}

impl PairGraph {
    pub fn build(g: &WeightedGraph) -> PairGraph {
        let mut pairs = Vec::with_capacity(120);
        let mut pair_of = [0u16; NUM_CLASSES];
        for v in 0..NUM_CLASSES {
            let p = g.partner_of(v as u8);
            if (v as u8) < p {
                pair_of[v] = pairs.len() as u16;
                pair_of[p as usize] = pairs.len() as u16;
                pairs.push((v as u8, p));
            }
        }
        assert_eq!(pairs.len(), 120);
        let mut adj = vec![[0u64; 2]; 120];
        for i in 0..120 {
            for j in 0..120 {
                if i != j && g.weight(pairs[i].0, pairs[j].0) == 1 {
                    adj[i][j >> 6] |= 1 << (j & 63);
                }
            }
        }
        // adjacency must not depend on the representative chosen per pair
        for i in 0..120 {
            for j in i + 1..120 {
                let crossings = [
                    g.weight(pairs[i].0, pairs[j].0),
                    g.weight(pairs[i].0, pairs[j].1),
                    g.weight(pairs[i].1, pairs[j].0),
                    g.weight(pairs[i].1, pairs[j].1),
                ];
                let adjacent = adj[i][j >> 6] & (1 << (j & 63)) != 0;
                assert_eq!(adjacent, crossings == [1, 1, 1, 1]);
                if !adjacent {
                    assert!(crossings.iter().all(|w| *w == 0 || *w == 2));
                }
            }
        }
        // count cliques by size
        let mut counts = [0u64; 16];
        let mut max_clique = 0usize;
        let full: [u64; 2] = [!0u64, (1u64 << 56) - 1];
        {
            fn walk(
                adj: &[[u64; 2]],
                cand: [u64; 2],
                chosen_len: usize,
                counts: &mut [u64; 16],
                max_clique: &mut usize,
            ) {
                counts[chosen_len] += 1;
                *max_clique = (*max_clique).max(chosen_len);
                let mut rest = cand;
                loop {
                    let v = if rest[0] != 0 {
                        rest[0].trailing_zeros() as usize
                    } else if rest[1] != 0 {
                        64 + rest[1].trailing_zeros() as usize
                    } else {
                        break;
                    };
                    rest[v >> 6] &= !(1 << (v & 63));
                    let a = &adj[v];
                    walk(
                        adj,
                        [rest[0] & a[0], rest[1] & a[1]],
                        chosen_len + 1,
                        counts,
                        max_clique,
                    );
                }
            }
            walk(&adj, full, 0, &mut counts, &mut max_clique);
        }
        // extension check: a clique of 5..=7 pairs always has a common
        // neighbour (full_nb tracks the whole common neighbourhood, not just
        // candidates above the last chosen vertex)
        let no_maximal_between_5_and_7;
        {
            fn walk2(
                adj: &[[u64; 2]],
                cand_after: [u64; 2],
                full_nb: [u64; 2],
                size: usize,
                bad: &mut bool,
            ) {
                if *bad {
                    return;
                }
                if (5..=7).contains(&size) && full_nb == [0, 0] {
                    *bad = true;
                    return;
                }
                if size == 7 {
                    return;
                }
                let mut rest = cand_after;
                loop {
                    let v = if rest[0] != 0 {
                        rest[0].trailing_zeros() as usize
                    } else if rest[1] != 0 {
                        64 + rest[1].trailing_zeros() as usize
                    } else {
                        break;
                    };
                    rest[v >> 6] &= !(1 << (v & 63));
                    let a = &adj[v];
                    walk2(
                        adj,
                        [rest[0] & a[0], rest[1] & a[1]],
                        [full_nb[0] & a[0], full_nb[1] & a[1]],
                        size + 1,
                        bad,
                    );
                }
            }
            let mut bad = false;
            walk2(&adj, full, full, 0, &mut bad);
            no_maximal_between_5_and_7 = !bad;
        }
        PairGraph {
            pairs,
            pair_of,
            adj,
            clique_counts: counts,
            max_clique,
            no_maximal_between_5_and_7,
        }
    }

    pub fn adjacent(&self, i: u16, j: u16) -> bool {
        self.adj[i as usize][(j >> 6) as usize] & (1 << (j & 63)) != 0
    }

    /// Enumerates cliques of exactly `size` pairs, in increasing pair-id
    /// order.
    pub fn cliques_of_size<F: FnMut(&[u16])>(&self, size: usize, mut emit: F) {
        let full: [u64; 2] = [!0u64, (1u64 << 56) - 1];
        fn walk<F: FnMut(&[u16])>(
            adj: &[[u64; 2]],
            cand: [u64; 2],
            size: usize,
            chosen: &mut Vec<u16>,
            emit: &mut F,
        ) {
            if chosen.len() == size {
                emit(chosen);
                return;
            }
            let need = size - chosen.len();
            let mut rest = cand;
            while (rest[0].count_ones() + rest[1].count_ones()) as usize >= need {
                let v = if rest[0] != 0 {
                    rest[0].trailing_zeros() as u16
                } else {
                    64 + rest[1].trailing_zeros() as u16
                };
                rest[(v >> 6) as usize] &= !(1 << (v & 63));
                let a = &adj[v as usize];
                chosen.push(v);
                walk(adj, [rest[0] & a[0], rest[1] & a[1]], size, chosen, emit);
                chosen.pop();
            }
        }
        let mut chosen = Vec::with_capacity(size);
        walk(&self.adj, full, size, &mut chosen, &mut emit);
    }
}

// ---------------------------------------------------------------------------
// Orbit decomposition of size-10 weight-{1,3} cliques

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orbit13 {
    /// number of partner pairs fully contained in the cliques of this orbit
    pub pair_count: usize,
    pub size: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition13 {
    /// total number of size-10 weight-{1,3} cliques, by partner-pair count
    pub totals: Vec<(usize, u64)>,
    /// the orbits, sorted by (pair_count, size)
    pub orbits: Vec<Orbit13>,
}

/// Partitions the size-10 weight-{1,3} cliques into Weyl orbits.
///
/// Cliques are streamed per isomorphism type (partner-pair count k, qua
/// pair-closure of size 10−k in the partner-pair graph, each clique
/// generated exactly once); unvisited cliques seed successive orbit
/// closures until the per-type totals are exhausted. `budget` bounds the
/// number of clique keys held in memory at once.
pub fn orbit_decomposition_13(
    g: &WeightedGraph,
    budget: usize,
) -> Result<Decomposition13, BudgetExceeded> {
    let h = PairGraph::build(g);
    let mut totals: Vec<(usize, u64)> = Vec::new();
    let mut orbits: Vec<Orbit13> = Vec::new();
    for k in (2..=5usize).rev() {
        let j = 10 - k; // pair-closure size
        let per_closure = binomial(j as u64, k as u64) * (1u64 << (j - k));
        let total = h.clique_counts[j] * per_closure;
        totals.push((k, total));
        let mut found: Vec<(FxHashSet<u128>, u64)> = Vec::new();
        let mut covered = 0u64;
        let mut err: Option<BudgetExceeded> = None;
        h.cliques_of_size(j, |pair_clique| {
            if covered >= total || err.is_some() {
                return;
            }
            for_each_k_selection(&h, pair_clique, k, &mut |verts: &[u8]| {
                if covered >= total || err.is_some() {
                    return;
                }
                let clique = Clique::new(verts.to_vec());
                let key = clique.encode();
                if found.iter().any(|(set, _)| set.contains(&key)) {
                    return;
                }
                let in_memory: usize = found.iter().map(|(s, _)| s.len()).sum();
                match g.orbit_set(&clique, budget.saturating_sub(in_memory)) {
                    Ok(set) => {
                        let size = set.len() as u64;
                        covered += size;
                        found.push((set, size));
                    }
                    Err(e) => err = Some(e),
                }
            });
        });
        if let Some(e) = err {
            return Err(e);
        }
        assert_eq!(
            covered, total,
            "orbits of pair-count {k} must cover all cliques"
        );
        let mut sizes: Vec<u64> = found.iter().map(|(_, s)| *s).collect();
        sizes.sort_unstable();
        for size in sizes {
            orbits.push(Orbit13 {
                pair_count: k,
                size,
            });
        }
    }
    totals.sort();
    orbits.sort_by_key(|o| (o.pair_count, o.size));
    Ok(Decomposition13 { totals, orbits })
}

/// Emits every size-10 clique whose pair-closure is exactly `pair_clique`:
/// choose `k` of the pairs to include fully and one member from each of the
/// rest.
fn for_each_k_selection<F: FnMut(&[u8])>(
    h: &PairGraph,
    pair_clique: &[u16],
    k: usize,
    emit: &mut F,
) {
    let j = pair_clique.len();
    let mut full_sel: Vec<usize> = (0..k).collect();
    loop {
        let singles: Vec<usize> = (0..j).filter(|i| !full_sel.contains(i)).collect();
        let m = singles.len();
        for bits in 0u32..(1 << m) {
            let mut verts: Vec<u8> = Vec::with_capacity(2 * k + m);
            for &i in &full_sel {
                let (c, d) = h.pairs[pair_clique[i] as usize];
                verts.push(c);
                verts.push(d);
            }
            for (t, &i) in singles.iter().enumerate() {
                let (c, d) = h.pairs[pair_clique[i] as usize];
                verts.push(if bits & (1 << t) != 0 { d } else { c });
            }
            emit(&verts);
        }
        // next k-combination of 0..j in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            if full_sel[i] != i + j - k {
                full_sel[i] += 1;
                for t in i + 1..k {
                    full_sel[t] = full_sel[t - 1] + 1;
                }
                break;
            }
        }
    }
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut r = 1u64;
    for i in 0..k {
        r = r * (n - i) / (i + 1);
    }
    r
}

// ---------------------------------------------------------------------------
// Blow-down obstruction

/// Searches for a class having pairing 0 with each member of some 4-subset
/// of `k`; returns the witness class and the first such 4-subset.
pub fn blowdown_obstruction(g: &WeightedGraph, k: &Clique) -> Option<(u8, [u8; 4])> {
    for c in 0..NUM_CLASSES {
        let c = c as u8;
        if k.contains(c) {
            continue;
        }
        let disjoint: Vec<u8> = k
            .verts()
            .iter()
            .copied()
            .filter(|&v| g.weight(c, v) == 0)
            .collect();
        if disjoint.len() >= 4 {
            return Some((c, [disjoint[0], disjoint[1], disjoint[2], disjoint[3]]));
        }
    }
    None
}

// ---------------------------------------------------------------------------
// Clique databases

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DbHeader {
    pub weights: Vec<i8>,
    pub size: usize,
    pub required: Vec<ExceptionalClass>,
    pub generator: String,
}

#[derive(Clone, Debug)]
pub struct CliqueDatabase {
    pub header: DbHeader,
    pub cliques: Vec<Clique>,
}

impl CliqueDatabase {
    /// Checks the header constraints and uniqueness of every entry.
    pub fn validate(&self, g: &WeightedGraph) -> Result<(), String> {
        let req: Vec<u8> = self
            .header
            .required
            .iter()
            .map(|c| {
                g.classes()
                    .index_of(c.vec())
                    .ok_or_else(|| format!("required member {c} is not a class"))
            })
            .collect::<Result<_, _>>()?;
        let mut seen = FxHashSet::default();
        for (n, k) in self.cliques.iter().enumerate() {
            let entry = n + 1;
            if k.len() != self.header.size {
                return Err(format!(
                    "entry {entry}: size {} ≠ {}",
                    k.len(),
                    self.header.size
                ));
            }
            if !seen.insert(k.encode()) {
                return Err(format!("entry {entry}: duplicate clique"));
            }
            for &r in &req {
                if !k.contains(r) {
                    return Err(format!("entry {entry}: missing required member"));
                }
            }
            let vs = k.verts();
            for i in 0..vs.len() {
                for j in i + 1..vs.len() {
                    let w = g.weight(vs[i], vs[j]);
                    if !self.header.weights.contains(&w) {
                        return Err(format!("entry {entry}: weight {w} not allowed"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// First database entry containing all of `must_contain` and no member,
/// outside `must_contain`, matched by `exclude`.
pub fn find_representative<'a>(
    g: &WeightedGraph,
    db: &'a CliqueDatabase,
    must_contain: &[ExceptionalClass],
    exclude: impl Fn(&ExceptionalClass) -> bool,
) -> Option<&'a Clique> {
    let req: Vec<u8> = must_contain
        .iter()
        .map(|c| g.classes().index_of(c.vec()).expect("class"))
        .collect();
    db.cliques.iter().find(|k| {
        req.iter().all(|&r| k.contains(r))
            && k.verts()
                .iter()
                .all(|&v| req.contains(&v) || !exclude(g.classes().class(v)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weylgraph::WeightedGraph;

    #[test]
    fn vertset_iteration() {
        let mut s = VertSet::default();
        for v in [3u8, 64, 200, 239] {
            s.insert(v);
        }
        assert_eq!(s.iter().collect::<Vec<_>>(), vec![3, 64, 200, 239]);
        assert_eq!(s.count(), 4);
        s.remove(64);
        assert!(!s.contains(64));
        assert_eq!(s.first(), Some(3));
    }

    #[test]
    fn reference_types_are_distinct() {
        let mut forms = std::collections::HashSet::new();
        for (_, graph) in reference_types() {
            assert_eq!(graph.n(), 10);
            assert!(forms.insert(graph.canonical_form()));
        }
        assert_eq!(forms.len(), 8);
    }

    #[test]
    fn partner_pairs_are_the_weight3_cliques() {
        let g = WeightedGraph::get();
        let pairs = enumerate_cliques(g, &[3], 2, &[]);
        assert_eq!(pairs.len(), 120);
    }

    #[test]
    fn enumeration_order_independence() {
        let g = WeightedGraph::get();
        let (a, b) = fixed_pair(g);
        let plain = enumerate_cliques(g, &[1, 2], 5, &[a, b]);
        // a deterministic scrambling permutation (gcd(7, 240) = 1)
        let mut perm = [0u8; NUM_CLASSES];
        for (v, t) in perm.iter_mut().enumerate() {
            *t = ((v * 7 + 13) % NUM_CLASSES) as u8;
        }
        let mut scrambled = Vec::new();
        enumerate_cliques_with(g, &[1, 2], 5, &[a, b], Some(&perm), |k| {
            scrambled.push(Clique::new(k.to_vec()));
        });
        scrambled.sort();
        assert_eq!(plain, scrambled);
    }

    #[test]
    fn enumeration_agrees_across_worker_counts() {
        let g = WeightedGraph::get();
        let (a, b) = fixed_pair(g);
        let single: Vec<Clique> = partitioned_enumeration(g, &[1, 2], 6, &[a, b], 1)
            .into_iter()
            .flatten()
            .collect();
        let mut multi: Vec<Clique> = partitioned_enumeration(g, &[1, 2], 6, &[a, b], 3)
            .into_iter()
            .flatten()
            .collect();
        multi.sort();
        assert_eq!(single, multi);
    }

    #[test]
    fn pair_graph_shape() {
        let g = WeightedGraph::get();
        let h = PairGraph::build(g);
        assert_eq!(h.pairs.len(), 120);
        // 63-regular: the 126 weight-1 neighbours of a class come in pairs
        for i in 0..120usize {
            let deg: u32 = h.adj[i].iter().map(|w| w.count_ones()).sum();
            assert_eq!(deg, 63);
        }
    }

    #[test]
    fn blowdown_needs_four_disjoint() {
        let g = WeightedGraph::get();
        let k = Clique::new(vec![0, 1, 2]);
        assert!(blowdown_obstruction(g, &k).is_none());
    }
}

#[cfg(test)]
mod equivariance_tests {
    use super::*;
    use crate::weylgraph::WeightedGraph;

    /// classify is invariant under every generator of the Weyl group.
    #[test]
    fn classify_commutes_with_generators() {
        let g = WeightedGraph::get();
        let (a, b) = fixed_pair(g);
        let mut samples = enumerate_cliques(g, &[1, 2], 10, &[a, b]);
        samples.truncate(25);
        let thirteen = enumerate_cliques(g, &[1, 3], 10, &[a, b]);
        samples.extend(thirteen.into_iter().take(25));
        for k in &samples {
            let iso = classify(g, k).unwrap();
            for gen in g.generators() {
                let image = Clique::new(k.verts().iter().map(|&v| gen[v as usize]).collect());
                assert_eq!(classify(g, &image).unwrap(), iso);
            }
        }
    }

    #[test]
    fn decomposition_budget_signals() {
        let g = WeightedGraph::get();
        assert!(orbit_decomposition_13(g, 16).is_err());
    }
}
