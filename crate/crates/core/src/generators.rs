//! Named graphs, fan shapes and the Ramsey–Turán lower-bound construction.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, GraphBuilder, VertexSet};

/// `F_k(r)`: `k` copies of `K_r` sharing exactly one vertex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FanShape {
    pub k: usize,
    pub r: usize,
}

impl FanShape {
    pub fn new(k: usize, r: usize) -> Result<Self> {
        if k == 0 {
            return Err(invalid("fan needs at least one clique (k >= 1)"));
        }
        if r < 2 {
            return Err(invalid("fan cliques need at least two vertices (r >= 2)"));
        }
        Ok(FanShape { k, r })
    }

    /// The odd fan `F_k(2r + 1)` whose blades have `2r` vertices.
    pub fn odd(k: usize, r: usize) -> Result<Self> {
        Self::new(k, 2 * r + 1)
    }

    pub fn blade_size(&self) -> usize {
        self.r - 1
    }

    /// `(r - 1) k + 1`
    pub fn order(&self) -> usize {
        self.blade_size() * self.k + 1
    }
}

/// `F_{k_1, ..., k_m}(2r + 1)`: an `m`-clique base whose `i`-th vertex is the
/// centre of a disjoint `F_{k_i}(2r + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleShape {
    pub ks: Vec<usize>,
    pub r: usize,
}

impl TupleShape {
    pub fn new(ks: Vec<usize>, r: usize) -> Result<Self> {
        if ks.is_empty() {
            return Err(invalid("tuple shape needs a non-empty base"));
        }
        if r == 0 {
            return Err(invalid("tuple shape needs r >= 1"));
        }
        if ks.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("tuple {ks:?} is not non-increasing")));
        }
        Ok(TupleShape { ks, r })
    }

    /// `m + 2r * sum(k_i)`
    pub fn order(&self) -> usize {
        self.ks.len() + 2 * self.r * self.ks.iter().sum::<usize>()
    }
}

/// A generated fan with its designated centre and blades.
#[derive(Clone, Debug)]
pub struct FanGraph {
    pub graph: Graph,
    pub center: usize,
    pub blades: Vec<VertexSet>,
}

/// A generated generalized fan. `blades_by_center[i]` hangs off `base[i]`.
#[derive(Clone, Debug)]
pub struct GeneralizedFanGraph {
    pub graph: Graph,
    pub base: VertexSet,
    pub blades_by_center: Vec<Vec<VertexSet>>,
}

pub fn turan_graph(n: usize, r: usize) -> Result<Graph> {
    if r == 0 {
        return Err(invalid("Turán graph needs at least one part"));
    }
    Ok(Graph::from_fn(n, |u, v| u % r != v % r))
}

/// Complete multipartite graph on contiguous blocks of the given sizes.
pub fn complete_multipartite(parts: &[usize]) -> Graph {
    let part_of: Vec<usize> = parts
        .iter()
        .enumerate()
        .flat_map(|(i, &s)| std::iter::repeat_n(i, s))
        .collect();
    Graph::from_fn(part_of.len(), |u, v| part_of[u] != part_of[v])
}

pub fn fan_graph(shape: FanShape) -> FanGraph {
    let blade = shape.blade_size();
    let mut builder = GraphBuilder::new(shape.order());
    let mut blades = Vec::with_capacity(shape.k);
    for i in 0..shape.k {
        let members: Vec<usize> = (1 + i * blade..1 + (i + 1) * blade).collect();
        add_clique(&mut builder, 0, &members);
        blades.push(VertexSet::new(members));
    }
    FanGraph {
        graph: builder.build(),
        center: 0,
        blades,
    }
}

/// Base vertices are `0..m`; blades follow in base order.
pub fn generalized_fan(shape: &TupleShape) -> GeneralizedFanGraph {
    let m = shape.ks.len();
    let blade = 2 * shape.r;
    let mut builder = GraphBuilder::new(shape.order());
    for v in 0..m {
        for u in 0..v {
            builder.connect(u, v);
        }
    }
    let mut next = m;
    let mut blades_by_center = Vec::with_capacity(m);
    for (center, &k) in shape.ks.iter().enumerate() {
        let mut blades = Vec::with_capacity(k);
        for _ in 0..k {
            let members: Vec<usize> = (next..next + blade).collect();
            next += blade;
            add_clique(&mut builder, center, &members);
            blades.push(VertexSet::new(members));
        }
        blades_by_center.push(blades);
    }
    GeneralizedFanGraph {
        graph: builder.build(),
        base: VertexSet::range(m),
        blades_by_center,
    }
}

fn add_clique(builder: &mut GraphBuilder, center: usize, members: &[usize]) {
    for (i, &u) in members.iter().enumerate() {
        builder.connect(center, u);
        for &v in &members[i + 1..] {
            builder.connect(u, v);
        }
    }
}

/// Triangle-free graphs placed inside each part of the lower-bound
/// construction. Catalogued graphs tile a part with disjoint copies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartGraph {
    /// The 5-cycle, α = 2.
    C5,
    /// The circulant `C_13(1, 5)`, the triangle-free 13-vertex graph with α = 4.
    C13Power,
    /// No edges at all.
    Empty,
    /// A sample of the random triangle-free process.
    TriangleFreeProcess { seed: u64 },
}

impl PartGraph {
    /// Order of one catalogued copy; `None` for generated families.
    pub fn catalogued_order(&self) -> Option<usize> {
        match self {
            PartGraph::C5 => Some(5),
            PartGraph::C13Power => Some(13),
            PartGraph::Empty => Some(1),
            PartGraph::TriangleFreeProcess { .. } => None,
        }
    }

    pub fn catalogued_graph(&self) -> Option<Graph> {
        match self {
            PartGraph::C5 => Some(cycle(5)),
            PartGraph::C13Power => Some(circulant(13, &[1, 5])),
            PartGraph::Empty => Some(Graph::empty(1)),
            PartGraph::TriangleFreeProcess { .. } => None,
        }
    }
}

impl fmt::Display for PartGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartGraph::C5 => f.write_str("c5"),
            PartGraph::C13Power => f.write_str("c13-power"),
            PartGraph::Empty => f.write_str("empty"),
            PartGraph::TriangleFreeProcess { seed } => write!(f, "tf-process:{seed}"),
        }
    }
}

impl FromStr for PartGraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "c5" => Ok(PartGraph::C5),
            "c13-power" => Ok(PartGraph::C13Power),
            "empty" => Ok(PartGraph::Empty),
            _ => s
                .strip_prefix("tf-process:")
                .and_then(|seed| seed.parse().ok())
                .map(|seed| PartGraph::TriangleFreeProcess { seed })
                .ok_or_else(|| Error::UnknownPartGraph(s.to_string())),
        }
    }
}

/// Balanced part sizes; the first `n mod r` parts get the extra vertex.
pub fn balanced_parts(n: usize, r: usize) -> Vec<usize> {
    (0..r).map(|i| n / r + usize::from(i < n % r)).collect()
}

/// Complete `r`-partite graph on balanced contiguous parts with a
/// triangle-free graph inside every part. Its clique number is at most `2r`,
/// so it contains no `F_k(2r + 1)` for any `k`.
pub fn rt_lower_construction(n: usize, r: usize, part_graph: &PartGraph) -> Result<Graph> {
    if r < 2 {
        return Err(invalid("lower-bound construction needs r >= 2"));
    }
    let sizes = balanced_parts(n, r);
    let mut rng = match part_graph {
        PartGraph::TriangleFreeProcess { seed } => Some(ChaCha8Rng::seed_from_u64(*seed)),
        _ => None,
    };
    let mut inner = Vec::with_capacity(r);
    for &size in &sizes {
        let g = match (part_graph.catalogued_graph(), rng.as_mut()) {
            (Some(copy), _) => tile(&copy, size, part_graph)?,
            (None, Some(rng)) => triangle_free_process(size, rng),
            (None, None) => unreachable!("generated families carry a seed"),
        };
        inner.push(g);
    }

    let mut builder = GraphBuilder::new(n);
    let mut offset = 0;
    let mut part_of = Vec::with_capacity(n);
    for (i, g) in inner.iter().enumerate() {
        for (u, v) in g.edges() {
            builder.connect(offset + u, offset + v);
        }
        offset += g.order();
        part_of.extend(std::iter::repeat_n(i, g.order()));
    }
    for v in 0..n {
        for u in 0..v {
            if part_of[u] != part_of[v] {
                builder.connect(u, v);
            }
        }
    }
    Ok(builder.build())
}

/// Disjoint copies of `copy` filling `size` vertices.
fn tile(copy: &Graph, size: usize, key: &PartGraph) -> Result<Graph> {
    let q = copy.order();
    if !size.is_multiple_of(q) {
        return Err(Error::IncompatiblePartSize {
            key: key.to_string(),
            part: size,
            order: q,
        });
    }
    let mut builder = GraphBuilder::new(size);
    for block in 0..size / q {
        for (u, v) in copy.edges() {
            builder.connect(block * q + u, block * q + v);
        }
    }
    Ok(builder.build())
}

/// The random triangle-free process: scan all pairs in random order, adding
/// each one whose endpoints have no common neighbour yet.
pub fn triangle_free_process<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Graph {
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    pairs.shuffle(rng);
    let mut builder = GraphBuilder::new(n);
    for (u, v) in pairs {
        if builder.neighbors(u).is_disjoint(builder.neighbors(v)) {
            builder.connect(u, v);
        }
    }
    builder.build()
}

/// Erdős–Rényi `G(n, p)`: pairs `(u, v)`, `u < v`, are drawn in
/// lexicographic order from a ChaCha8 stream seeded with `seed`.
pub fn gnp_random(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("edge probability {p} is outside [0, 1]")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = GraphBuilder::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.random_bool(p) {
                builder.connect(u, v);
            }
        }
    }
    Ok(builder.build())
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycles need at least three vertices");
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("cycle edges are distinct")
}

/// `K_{1, leaves}` with centre 0.
pub fn star(leaves: usize) -> Graph {
    Graph::from_fn(leaves + 1, |u, _| u == 0)
}

/// Hub 0 joined to the cycle `1..=rim`.
pub fn wheel(rim: usize) -> Graph {
    Graph::from_fn(rim + 1, |u, v| u == 0 || (v - u) % rim == 1 || (u == 1 && v == rim))
}

pub fn circulant(n: usize, offsets: &[usize]) -> Graph {
    Graph::from_fn(n, |u, v| {
        let d = v - u;
        offsets.iter().any(|&o| d == o || d == n - o)
    })
}

/// Outer cycle `0..5`, spokes `i - (i + 5)`, inner pentagram on `5..10`.
pub fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    Graph::from_edges(10, edges).expect("Petersen edges are distinct")
}
