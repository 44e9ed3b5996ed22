//! Brute-force extremal numbers at tiny orders.
//!
//! Graphs on `n` vertices are coded as integers: bit `v(v-1)/2 + u` is set
//! iff `uv` (`u < v`) is an edge. Enumeration is by ascending code, and ties
//! between equally large witnesses go to the smallest code, so results are
//! reproducible regardless of how the code space is split across threads.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::{fan_graph, FanShape};
use crate::graph::{Graph, GraphBuilder};
use crate::invariants::independence_number;

/// Largest order enumerated exhaustively by default.
pub const EXHAUSTIVE_CEILING: usize = 7;

const CHUNK_BITS: u32 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Search {
    /// Every labelled graph, optionally skipping non-canonical labellings.
    Exhaustive { iso_filter: bool },
    /// Greedy maximal `H`-free graphs from random edge orders; a lower bound.
    RandomRestarts { seed: u64, restarts: usize },
}

/// Unfiltered enumeration: popcount pruning already skips most codes, and the
/// canonicity test costs more than the containment check it would save.
impl Default for Search {
    fn default() -> Self {
        Search::Exhaustive { iso_filter: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremalValue {
    pub edges: usize,
    pub witness: Graph,
    pub witness_code: u64,
    /// `false` when the value is only a lower bound.
    pub exact: bool,
}

pub fn pair_index(u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    v * (v - 1) / 2 + u
}

pub fn edge_code(g: &Graph) -> u64 {
    g.edges().fold(0, |code, (u, v)| code | 1 << pair_index(u, v))
}

pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let mut builder = GraphBuilder::new(n);
    for v in 1..n {
        for u in 0..v {
            if code >> pair_index(u, v) & 1 == 1 {
                builder.connect(u, v);
            }
        }
    }
    builder.build()
}

/// Whether some injection of `pattern` into `g` maps edges to edges.
/// Plain backtracking in pattern vertex order; a host vertex is only tried if
/// its degree is at least the pattern vertex's degree.
pub fn naive_contains(g: &Graph, pattern: &Graph) -> bool {
    if pattern.order() > g.order() {
        return false;
    }
    let mut image = Vec::with_capacity(pattern.order());
    let mut used = vec![false; g.order()];
    extend_injection(g, pattern, &mut image, &mut used)
}

fn extend_injection(g: &Graph, pattern: &Graph, image: &mut Vec<usize>, used: &mut [bool]) -> bool {
    let i = image.len();
    if i == pattern.order() {
        return true;
    }
    for t in 0..g.order() {
        if used[t] || g.degree(t) < pattern.degree(i) {
            continue;
        }
        if (0..i).any(|j| pattern.has_edge(i, j) && !g.has_edge(t, image[j])) {
            continue;
        }
        used[t] = true;
        image.push(t);
        if extend_injection(g, pattern, image, used) {
            return true;
        }
        image.pop();
        used[t] = false;
    }
    false
}

/// `ex(n, F_k(r))` with an extremal witness.
pub fn exact_ex(n: usize, shape: FanShape, search: Search) -> Result<ExtremalValue> {
    let pattern = fan_graph(shape).graph;
    extremal(n, search, &|g| !naive_contains(g, &pattern), None)
        .map(|v| v.expect("the empty graph is always admissible"))
}

/// `RT(n, F_k(r), alpha_cap)` exactly: the most edges of an `F_k(r)`-free
/// graph with independence number at most `alpha_cap`. `None` when no graph
/// qualifies.
pub fn exact_rt(n: usize, shape: FanShape, alpha_cap: usize, search: Search) -> Result<Option<ExtremalValue>> {
    let pattern = fan_graph(shape).graph;
    extremal(n, search, &|g| !naive_contains(g, &pattern), Some(alpha_cap))
}

type Predicate<'a> = &'a (dyn Fn(&Graph) -> bool + Sync);

/// `free` must be closed under edge deletion; `alpha_cap` is checked last.
fn extremal(n: usize, search: Search, free: Predicate, alpha_cap: Option<usize>) -> Result<Option<ExtremalValue>> {
    let admissible = |g: &Graph| free(g) && alpha_cap.is_none_or(|cap| independence_number(g) <= cap);
    match search {
        Search::Exhaustive { iso_filter } => {
            if n > EXHAUSTIVE_CEILING {
                return Err(Error::AboveCeiling {
                    n,
                    ceiling: EXHAUSTIVE_CEILING,
                });
            }
            Ok(exhaustive(n, iso_filter, &admissible))
        }
        Search::RandomRestarts { seed, restarts } => Ok(random_restarts(n, seed, restarts, free, &admissible)),
    }
}

fn exhaustive(n: usize, iso_filter: bool, admissible: Predicate) -> Option<ExtremalValue> {
    let pairs = (n * n.saturating_sub(1) / 2) as u32;
    let chunk_bits = pairs.saturating_sub(CHUNK_BITS).min(pairs);
    let chunks = 1u64 << (pairs - chunk_bits);

    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|chunk| {
            let start = chunk << chunk_bits;
            let mut best: Option<(u32, u64)> = None;
            for code in start..start + (1u64 << chunk_bits) {
                let count = code.count_ones();
                if best.is_some_and(|(c, _)| count <= c) {
                    continue;
                }
                if iso_filter && !is_canonical(n, code) {
                    continue;
                }
                if admissible(&graph_from_code(n, code)) {
                    best = Some((count, code));
                }
            }
            best
        })
        .reduce_with(|a, b| if b.0 > a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a });

    let (edges, mut code) = best?;
    if iso_filter {
        // Canonical labellings need not include the smallest code.
        code = (0..1u64 << pairs)
            .find(|&c| c.count_ones() == edges && admissible(&graph_from_code(n, c)))
            .expect("a canonical witness exists");
    }
    Some(ExtremalValue {
        edges: edges as usize,
        witness: graph_from_code(n, code),
        witness_code: code,
        exact: true,
    })
}

fn random_restarts(
    n: usize,
    seed: u64,
    restarts: usize,
    free: Predicate,
    admissible: Predicate,
) -> Option<ExtremalValue> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    let mut best: Option<ExtremalValue> = None;
    for _ in 0..restarts.max(1) {
        pairs.shuffle(&mut rng);
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for &pair in &pairs {
            edges.push(pair);
            let g = Graph::from_edges(n, edges.iter().copied()).expect("pairs are distinct");
            if free(&g) {
                continue;
            }
            edges.pop();
        }
        let g = Graph::from_edges(n, edges.iter().copied()).expect("pairs are distinct");
        if !admissible(&g) {
            continue;
        }
        let code = if n <= 11 { edge_code(&g) } else { 0 };
        let better = match &best {
            None => true,
            Some(b) => g.size() > b.edges || (g.size() == b.edges && code < b.witness_code),
        };
        if better {
            best = Some(ExtremalValue {
                edges: g.size(),
                witness: g,
                witness_code: code,
                exact: false,
            });
        }
    }
    best
}

/// Whether `code` is the smallest code among relabellings that respect the
/// colour-refinement order of its vertices. That minimum is a labelling
/// invariant, so every isomorphism class keeps exactly one member.
pub fn is_canonical(n: usize, code: u64) -> bool {
    let adj = adjacency(n, code);
    let (order, cells) = refine(n, &adj);
    // Cheap rejections first: the refinement order itself and single swaps.
    let mut label = [0usize; MAX_ORDER];
    for (i, &v) in order[..n].iter().enumerate() {
        label[v] = i;
    }
    let base = relabelled(n, &adj, &label);
    if base < code {
        return false;
    }
    for cell in &cells {
        for a in cell.clone() {
            for b in a + 1..cell.end {
                label.swap(order[a], order[b]);
                let swapped = relabelled(n, &adj, &label);
                label.swap(order[a], order[b]);
                if swapped < code {
                    return false;
                }
            }
        }
    }
    // `code` must also be reachable; the identity need not respect the cells.
    let mut reached = base == code;
    let mut members = order;
    permute_cells(&cells, 0, &mut members, &mut |members| {
        let mut label = [0usize; MAX_ORDER];
        for (i, &v) in members[..n].iter().enumerate() {
            label[v] = i;
        }
        let c = relabelled(n, &adj, &label);
        reached |= c == code;
        c >= code
    }) && reached
}

pub fn canonical_code(n: usize, code: u64) -> u64 {
    let adj = adjacency(n, code);
    let (order, cells) = refine(n, &adj);
    let mut best = u64::MAX;
    let mut members = order;
    permute_cells(&cells, 0, &mut members, &mut |members| {
        let mut label = [0usize; MAX_ORDER];
        for (i, &v) in members[..n].iter().enumerate() {
            label[v] = i;
        }
        best = best.min(relabelled(n, &adj, &label));
        true
    });
    best
}

/// Orders above this do not fit a 64-bit code.
const MAX_ORDER: usize = 11;

fn adjacency(n: usize, code: u64) -> [u16; MAX_ORDER] {
    assert!(n <= MAX_ORDER, "order {n} does not fit an edge code");
    let mut adj = [0u16; MAX_ORDER];
    for v in 1..n {
        for u in 0..v {
            if code >> pair_index(u, v) & 1 == 1 {
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
        }
    }
    adj
}

fn relabelled(n: usize, adj: &[u16; MAX_ORDER], label: &[usize; MAX_ORDER]) -> u64 {
    let mut c = 0u64;
    for v in 1..n {
        let mut lower = adj[v] & ((1 << v) - 1);
        while lower != 0 {
            let u = lower.trailing_zeros() as usize;
            lower &= lower - 1;
            c |= 1 << pair_index(label[u], label[v]);
        }
    }
    c
}

/// Vertices sorted by stable refined colour, and the index ranges of the
/// colour classes within that order.
fn refine(n: usize, adj: &[u16; MAX_ORDER]) -> ([usize; MAX_ORDER], Vec<std::ops::Range<usize>>) {
    let mut colour = [0u8; MAX_ORDER];
    for v in 0..n {
        colour[v] = adj[v].count_ones() as u8;
    }
    let mut classes = distinct(&colour[..n]);
    loop {
        // Own colour, then a histogram of neighbour colours (4 bits each).
        let mut key = [(0u8, 0u64); MAX_ORDER];
        for v in 0..n {
            let mut hist = 0u64;
            let mut around = adj[v];
            while around != 0 {
                let u = around.trailing_zeros() as usize;
                around &= around - 1;
                hist += 1 << (4 * colour[u] as u64);
            }
            key[v] = (colour[v], hist);
        }
        let mut sorted = key;
        sorted[..n].sort_unstable();
        let mut ranks = 0;
        for v in 0..n {
            colour[v] = sorted[..n].partition_point(|k| *k < key[v]) as u8;
        }
        for i in 0..n {
            if i == 0 || sorted[i] != sorted[i - 1] {
                ranks += 1;
            }
        }
        if ranks == classes {
            break;
        }
        classes = ranks;
    }
    let mut order = [0usize; MAX_ORDER];
    for (i, o) in order[..n].iter_mut().enumerate() {
        *o = i;
    }
    order[..n].sort_by_key(|&v| colour[v]);
    let mut cells = Vec::new();
    let mut start = 0;
    for i in 1..=n {
        if i == n || colour[order[i]] != colour[order[start]] {
            cells.push(start..i);
            start = i;
        }
    }
    (order, cells)
}

fn distinct(values: &[u8]) -> usize {
    let mut seen = 0u64;
    for &v in values {
        seen |= 1 << v;
    }
    seen.count_ones() as usize
}

/// Visits every arrangement of `members` that permutes only within cells;
/// stops once `visit` returns `false`.
fn permute_cells(
    cells: &[std::ops::Range<usize>],
    cell: usize,
    members: &mut [usize; MAX_ORDER],
    visit: &mut dyn FnMut(&[usize; MAX_ORDER]) -> bool,
) -> bool {
    let Some(range) = cells.get(cell) else {
        return visit(members);
    };
    permute_range(range.start, range.end, members, &mut |m| {
        permute_cells(cells, cell + 1, m, visit)
    })
}

fn permute_range(
    i: usize,
    end: usize,
    members: &mut [usize; MAX_ORDER],
    visit: &mut dyn FnMut(&mut [usize; MAX_ORDER]) -> bool,
) -> bool {
    if i + 1 >= end {
        return visit(members);
    }
    for j in i..end {
        members.swap(i, j);
        let go_on = permute_range(i + 1, end, members, visit);
        members.swap(i, j);
        if !go_on {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle, petersen, rt_lower_construction, PartGraph};

    fn shape(k: usize, r: usize) -> FanShape {
        FanShape::new(k, r).unwrap()
    }

    #[test]
    fn code_round_trip() {
        let p = petersen();
        assert_eq!(graph_from_code(10, edge_code(&p)), p);
        assert_eq!(pair_index(0, 1), 0);
        assert_eq!(pair_index(2, 1), 2);
        assert_eq!(pair_index(0, 3), 3);
    }

    #[test]
    fn naive_contains_examples() {
        assert!(naive_contains(&Graph::complete(5), &cycle(5)));
        assert!(!naive_contains(&petersen(), &Graph::complete(3)));
        let g = rt_lower_construction(10, 2, &PartGraph::C5).unwrap();
        assert!(!naive_contains(&g, &fan_graph(shape(1, 5)).graph));
        assert!(naive_contains(&g, &Graph::complete(4)));
    }

    #[test]
    fn small_ex_values() {
        let ex = |n| exact_ex(n, shape(1, 3), Search::default()).unwrap();
        assert_eq!(ex(3).edges, 2);
        assert_eq!(ex(5).edges, 6);
        let w = ex(5).witness;
        assert!(!naive_contains(&w, &Graph::complete(3)));
    }

    #[test]
    fn small_rt_values() {
        assert_eq!(exact_rt(6, shape(1, 3), 2, Search::default()).unwrap(), None);
        let v = exact_rt(5, shape(1, 3), 2, Search::default()).unwrap().unwrap();
        assert_eq!(v.edges, 5);
        assert!(canonical_code(5, v.witness_code) == canonical_code(5, edge_code(&cycle(5))));
        assert_eq!(
            exact_rt(4, shape(1, 3), 4, Search::default()).unwrap().unwrap().edges,
            4
        );
    }

    #[test]
    fn filter_does_not_change_results() {
        for n in 2..=6 {
            for s in [shape(1, 3), shape(2, 3), shape(1, 4)] {
                let on = exact_ex(n, s, Search::Exhaustive { iso_filter: true }).unwrap();
                let off = exact_ex(n, s, Search::Exhaustive { iso_filter: false }).unwrap();
                assert_eq!(on, off, "n={n} shape={s:?}");
            }
        }
    }

    #[test]
    fn canonical_code_is_relabelling_invariant() {
        let c5 = edge_code(&cycle(5));
        let shuffled = edge_code(&cycle(5).relabel(&[3, 0, 4, 1, 2]));
        assert_eq!(canonical_code(5, c5), canonical_code(5, shuffled));
        let p4 = edge_code(&Graph::from_edges(5, [(0, 1), (1, 2), (2, 3)]).unwrap());
        assert_ne!(canonical_code(5, c5), canonical_code(5, p4));
    }

    #[test]
    fn above_ceiling_needs_lower_bound_mode() {
        assert_eq!(
            exact_ex(8, shape(1, 3), Search::default()),
            Err(Error::AboveCeiling {
                n: 8,
                ceiling: EXHAUSTIVE_CEILING
            })
        );
        let lb = exact_ex(8, shape(1, 3), Search::RandomRestarts { seed: 1, restarts: 20 }).unwrap();
        assert!(!lb.exact);
        assert!(lb.edges <= 16);
        assert!(!naive_contains(&lb.witness, &Graph::complete(3)));
    }
}
