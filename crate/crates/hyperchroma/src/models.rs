//! Random hypergraph models and structural defect classification.
//!
//! Three samplers share the vocabulary: `sample_multi` draws a vector of
//! r*m uniform vertex labels and chunks it into edges (so edges may repeat
//! vertices or each other), `sample_uniform` draws m distinct r-subsets
//! without replacement, and `sample_bernoulli` keeps each r-subset
//! independently with probability p.

use std::collections::HashSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::binomial_u128;

/// Vertex labels are 1-based, matching the printed edge-list format.
pub type VertexId = u32;

/// Deterministic RNG coordinates: one 64-bit key plus a 64-bit substream
/// index. The same (value, stream) pair yields an identical sample
/// sequence on any platform, and distinct streams are independent, which
/// is what lets trial batches run in parallel reproducibly.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Seed {
    pub value: u64,
    pub stream: u64,
}

impl Seed {
    pub fn new(value: u64, stream: u64) -> Self {
        Self { value, stream }
    }

    /// Same key, different substream.
    pub fn with_stream(self, stream: u64) -> Self {
        Self { value: self.value, stream }
    }

    /// Materialise the counter-based generator for this coordinate.
    pub fn rng(self) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.value);
        rng.set_stream(self.stream);
        rng
    }
}

/// An r-uniform (multi-)hypergraph on vertex set [1..n]. Edges keep their
/// original vertex order; multiset comparisons use a sorted copy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hypergraph {
    n: usize,
    r: usize,
    edges: Vec<Vec<VertexId>>,
    simple: bool,
}

impl Hypergraph {
    /// Build from explicit edges, validating labels and uniformity.
    /// `simple` is asserted by the caller and cross-checkable via
    /// [`classify_bad_edges`].
    pub fn new(n: usize, r: usize, edges: Vec<Vec<VertexId>>, simple: bool) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("vertex count must be positive".into()));
        }
        if r < 2 {
            return Err(Error::InvalidParameter(format!("edge size r={r} must be >= 2")));
        }
        for (i, e) in edges.iter().enumerate() {
            if e.len() != r {
                return Err(Error::InvalidParameter(format!(
                    "edge {i} has {} entries, expected r={r}",
                    e.len()
                )));
            }
            if let Some(&v) = e.iter().find(|&&v| v < 1 || v as usize > n) {
                return Err(Error::InvalidParameter(format!(
                    "edge {i} contains label {v} outside [1..{n}]"
                )));
            }
        }
        Ok(Self { n, r, edges, simple })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Vec<VertexId>] {
        &self.edges
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    /// Vertex degrees (appearances over all edges, counting multiplicity).
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n + 1];
        for e in &self.edges {
            for &v in e {
                deg[v as usize] += 1;
            }
        }
        deg
    }
}

/// Indices of structurally bad edges. `defective` lists edges with a
/// repeated vertex; `duplicate` lists edges equal as multisets to an
/// earlier edge. An index may appear in both lists, never twice in one.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct BadEdgeReport {
    pub defective: Vec<usize>,
    pub duplicate: Vec<usize>,
}

impl BadEdgeReport {
    pub fn is_empty(&self) -> bool {
        self.defective.is_empty() && self.duplicate.is_empty()
    }

    /// Number of bad edges (edges that are defective or duplicate,
    /// counted once each).
    pub fn bad_edge_count(&self) -> usize {
        let mut seen: HashSet<usize> = self.defective.iter().copied().collect();
        seen.extend(self.duplicate.iter().copied());
        seen.len()
    }
}

/// Multiset model: draw r*m labels uniformly and chunk into m edges.
pub fn sample_multi(n: usize, r: usize, m: usize, seed: Seed) -> Result<Hypergraph> {
    check_nr(n, r)?;
    let mut rng = seed.rng();
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let edge: Vec<VertexId> = (0..r).map(|_| rng.gen_range(1..=n as u32)).collect();
        edges.push(edge);
    }
    Hypergraph::new(n, r, edges, false)
}

/// Uniform model: m distinct r-subsets, each equally likely as a set.
/// Rejection sampling against a set of canonical (sorted) edges; when
/// m > N/2 the complement is sampled instead so the rejection rate stays
/// bounded. Output edges are sorted ascending and listed in a canonical
/// order, so the draw is a deterministic function of the seed.
pub fn sample_uniform(n: usize, r: usize, m: usize, seed: Seed) -> Result<Hypergraph> {
    check_nr(n, r)?;
    let total = binomial_u128(n as u64, r as u64)
        .ok_or_else(|| Error::GuardExceeded(format!("C({n},{r}) overflows the subset counter")))?;
    if (m as u128) > total {
        return Err(Error::InvalidParameter(format!(
            "m={m} exceeds the number C({n},{r})={total} of distinct edges"
        )));
    }
    let mut rng = seed.rng();
    let complement = (m as u128) > total / 2;
    let target = if complement { (total - m as u128) as usize } else { m };

    let mut chosen: HashSet<Vec<VertexId>> = HashSet::with_capacity(target);
    let mut order: Vec<Vec<VertexId>> = Vec::with_capacity(target);
    while chosen.len() < target {
        let edge = sample_distinct_sorted(n, r, &mut rng);
        if chosen.insert(edge.clone()) {
            order.push(edge);
        }
    }

    let edges = if complement {
        let mut kept = Vec::with_capacity(m);
        for subset in lex_subsets(n, r) {
            if !chosen.contains(&subset) {
                kept.push(subset);
            }
        }
        kept
    } else {
        order
    };
    Hypergraph::new(n, r, edges, true)
}

/// Bernoulli model: each of the C(n,r) subsets kept independently with
/// probability p. Subsets are visited in lexicographic order.
pub fn sample_bernoulli(n: usize, r: usize, p: f64, seed: Seed) -> Result<Hypergraph> {
    check_nr(n, r)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidParameter(format!("p={p} is not a probability")));
    }
    if p == 0.0 {
        return Hypergraph::new(n, r, Vec::new(), true);
    }
    if p == 1.0 {
        return Hypergraph::new(n, r, lex_subsets(n, r).collect(), true);
    }
    let mut rng = seed.rng();
    let mut edges = Vec::new();
    for subset in lex_subsets(n, r) {
        if rng.gen::<f64>() < p {
            edges.push(subset);
        }
    }
    Hypergraph::new(n, r, edges, true)
}

/// Classify defective (repeated vertex) and duplicate (multiset equal to
/// an earlier edge) edges by index.
pub fn classify_bad_edges(h: &Hypergraph) -> BadEdgeReport {
    let mut report = BadEdgeReport::default();
    let mut seen: HashSet<Vec<VertexId>> = HashSet::with_capacity(h.m());
    for (i, e) in h.edges().iter().enumerate() {
        let mut canon = e.clone();
        canon.sort_unstable();
        if canon.windows(2).any(|w| w[0] == w[1]) {
            report.defective.push(i);
        }
        if !seen.insert(canon) {
            report.duplicate.push(i);
        }
    }
    report
}

/// Labels that appear in no edge, ascending.
pub fn isolated_vertices(h: &Hypergraph) -> Vec<VertexId> {
    let mut present = vec![false; h.n() + 1];
    for e in h.edges() {
        for &v in e {
            present[v as usize] = true;
        }
    }
    (1..=h.n() as u32).filter(|&v| !present[v as usize]).collect()
}

/// Limiting probability that the multiset model produces no bad edge at
/// density c: exp(-c(c+1)) for r=2, exp(-c r(r-1)/2) for r>2.
pub fn asymptotic_no_bad_probability(r: usize, c: f64) -> f64 {
    assert!(r >= 2, "r must be >= 2");
    assert!(c > 0.0, "density must be positive");
    if r == 2 {
        (-c * (c + 1.0)).exp()
    } else {
        (-c * (r * (r - 1)) as f64 / 2.0).exp()
    }
}

/// Edge count for a real density: m = floor(c * n).
pub fn edge_count_for_density(n: usize, c: f64) -> usize {
    (c * n as f64).floor() as usize
}

fn check_nr(n: usize, r: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter("vertex count must be positive".into()));
    }
    if r < 2 {
        return Err(Error::InvalidParameter(format!("edge size r={r} must be >= 2")));
    }
    Ok(())
}

/// Draw r distinct labels from [1..n] by partial Fisher-Yates on a scratch
/// array, then sort. Requires r <= n.
fn sample_distinct_sorted(n: usize, r: usize, rng: &mut ChaCha8Rng) -> Vec<VertexId> {
    debug_assert!(r <= n);
    let mut scratch: Vec<u32> = (1..=n as u32).collect();
    let mut edge = Vec::with_capacity(r);
    for i in 0..r {
        let j = rng.gen_range(i..n);
        scratch.swap(i, j);
        edge.push(scratch[i]);
    }
    edge.sort_unstable();
    edge
}

/// Iterator over all r-subsets of [1..n] in lexicographic order, each
/// sorted ascending.
pub fn lex_subsets(n: usize, r: usize) -> impl Iterator<Item = Vec<VertexId>> {
    let mut current: Option<Vec<u32>> = if r <= n {
        Some((1..=r as u32).collect())
    } else {
        None
    };
    let n = n as u32;
    let r = r as u32;
    std::iter::from_fn(move || {
        let cur = current.clone()?;
        // Advance to the lexicographic successor.
        let mut next = cur.clone();
        let mut i = r as usize;
        loop {
            if i == 0 {
                current = None;
                break;
            }
            i -= 1;
            if next[i] < n - (r - 1 - i as u32) {
                next[i] += 1;
                for j in i + 1..r as usize {
                    next[j] = next[j - 1] + 1;
                }
                current = Some(next);
                break;
            }
        }
        Some(cur)
    })
}
