//! Weak k-colorings: decision, counting, chromatic number.
//!
//! A k-partition is a coloring when no edge is monochromatic (all of an
//! edge's vertices in one class). Counting is restricted to balanced
//! partitions and guarded to enumeration scale; the decision procedure is
//! exact backtracking and handles the instance sizes the Monte Carlo
//! sweeps need.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::models::{Hypergraph, VertexId};

/// A k-partition of [1..n]: `assignment[v-1]` is the color (1..=k) of
/// vertex v.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KPartition {
    pub k: usize,
    pub assignment: Vec<usize>,
}

impl KPartition {
    pub fn new(k: usize, assignment: Vec<usize>) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidParameter("k must be positive".into()));
        }
        if let Some(&c) = assignment.iter().find(|&&c| c < 1 || c > k) {
            return Err(Error::InvalidParameter(format!("color {c} outside [1..{k}]")));
        }
        Ok(Self { k, assignment })
    }

    /// Class sizes n_1..n_k.
    pub fn block_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.k];
        for &c in &self.assignment {
            sizes[c - 1] += 1;
        }
        sizes
    }

    /// Balanced: every class size in {floor(n/k), ceil(n/k)}.
    pub fn is_balanced(&self) -> bool {
        let n = self.assignment.len();
        let lo = n / self.k;
        let hi = n.div_ceil(self.k);
        self.block_sizes().iter().all(|&s| s == lo || s == hi)
    }
}

/// Exact count of balanced colorings, small enough to stay a big-free u128
/// (bounded by n!/((n/k)!)^k with n <= 20).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ColoringCount(pub u128);

/// Chromatic number, with an explicit sentinel for hypergraphs containing
/// an edge supported on a single vertex (monochromatic under every
/// partition, so no coloring exists for any k).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Chromatic {
    Finite(usize),
    Uncolorable,
}

/// True when the edge's vertices (as a multiset) all receive one color.
/// A loop edge on a single vertex is monochromatic under every partition.
pub fn is_monochromatic(edge: &[VertexId], sigma: &KPartition) -> bool {
    let first = sigma.assignment[edge[0] as usize - 1];
    edge.iter().all(|&v| sigma.assignment[v as usize - 1] == first)
}

/// True when no edge of `h` is monochromatic under `sigma`.
pub fn is_coloring(h: &Hypergraph, sigma: &KPartition) -> bool {
    debug_assert_eq!(sigma.assignment.len(), h.n());
    h.edges().iter().all(|e| !is_monochromatic(e, sigma))
}

const COUNT_GUARD_N: usize = 20;

/// Exact number of balanced k-colorings. Requires k | n and n within the
/// enumeration guard. Enumerates multiset permutations of the color vector
/// with per-prefix edge pruning.
pub fn count_balanced_colorings(h: &Hypergraph, k: usize) -> Result<ColoringCount> {
    let n = h.n();
    if k == 0 {
        return Err(Error::InvalidParameter("k must be positive".into()));
    }
    if !n.is_multiple_of(k) {
        return Err(Error::InvalidParameter(format!("k={k} does not divide n={n}")));
    }
    if n > COUNT_GUARD_N {
        return Err(Error::GuardExceeded(format!(
            "n={n} above the balanced-enumeration guard ({COUNT_GUARD_N})"
        )));
    }

    // edges_closing[v] = edges whose highest vertex is v; checking an edge
    // exactly when its last vertex is colored keeps prefixes consistent.
    let mut edges_closing: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (i, e) in h.edges().iter().enumerate() {
        let max_v = *e.iter().max().unwrap() as usize;
        edges_closing[max_v].push(i);
    }

    let quota = n / k;
    let mut remaining = vec![quota; k];
    let mut colors = vec![0usize; n + 1];
    let mut count = 0u128;

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        v: usize,
        n: usize,
        k: usize,
        h: &Hypergraph,
        edges_closing: &[Vec<usize>],
        remaining: &mut [usize],
        colors: &mut [usize],
        count: &mut u128,
    ) {
        if v > n {
            *count += 1;
            return;
        }
        for c in 1..=k {
            if remaining[c - 1] == 0 {
                continue;
            }
            colors[v] = c;
            let conflict = edges_closing[v].iter().any(|&ei| {
                h.edges()[ei].iter().all(|&u| colors[u as usize] == c)
            });
            if !conflict {
                remaining[c - 1] -= 1;
                recurse(v + 1, n, k, h, edges_closing, remaining, colors, count);
                remaining[c - 1] += 1;
            }
        }
        colors[v] = 0;
    }

    recurse(1, n, k, h, &edges_closing, &mut remaining, &mut colors, &mut count);
    Ok(ColoringCount(count))
}

/// Exact decision: does any (not necessarily balanced) k-coloring exist?
pub fn is_k_colorable(h: &Hypergraph, k: usize) -> bool {
    is_k_colorable_with_deadline(h, k, None).expect("no deadline given")
}

/// Deadline-aware variant for sweep harnesses: `None` signals that the
/// deadline elapsed before the search finished.
pub fn is_k_colorable_with_deadline(
    h: &Hypergraph,
    k: usize,
    deadline: Option<Instant>,
) -> Option<bool> {
    if k == 0 {
        return Some(h.n() == 0);
    }
    if h.m() == 0 {
        return Some(true);
    }
    // Any edge supported on a single vertex is monochromatic always.
    if h.edges().iter().any(|e| e.iter().all(|&v| v == e[0])) {
        return Some(false);
    }
    if k == 1 {
        return Some(false); // some edge exists and every edge is monochromatic
    }

    // Color vertices in decreasing degree; high-degree first fails fast.
    let n = h.n();
    let deg = h.degrees();
    let mut order: Vec<usize> = (1..=n).collect();
    order.sort_by(|&a, &b| deg[b].cmp(&deg[a]).then(a.cmp(&b)));
    let mut position = vec![0usize; n + 1]; // position[v] = rank in order
    for (i, &v) in order.iter().enumerate() {
        position[v] = i;
    }

    // For each edge, the rank at which it closes (all vertices colored).
    let mut edges_closing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (ei, e) in h.edges().iter().enumerate() {
        let close_rank = e.iter().map(|&v| position[v as usize]).max().unwrap();
        edges_closing[close_rank].push(ei);
    }

    let mut colors = vec![0usize; n + 1];
    let mut nodes_since_check = 0u32;

    #[allow(clippy::too_many_arguments)]
    fn recurse(
        rank: usize,
        order: &[usize],
        h: &Hypergraph,
        edges_closing: &[Vec<usize>],
        k: usize,
        colors: &mut [usize],
        max_used: usize,
        deadline: Option<Instant>,
        nodes: &mut u32,
    ) -> Option<bool> {
        if rank == order.len() {
            return Some(true);
        }
        *nodes += 1;
        if *nodes >= 4096 {
            *nodes = 0;
            if let Some(d) = deadline {
                if Instant::now() >= d {
                    return None;
                }
            }
        }
        let v = order[rank];
        // Colors are interchangeable: only the first unused color matters.
        let limit = k.min(max_used + 1);
        for c in 1..=limit {
            colors[v] = c;
            let conflict = edges_closing[rank].iter().any(|&ei| {
                let e = &h.edges()[ei];
                e.iter().all(|&u| colors[u as usize] == c)
            });
            if !conflict
                && recurse(
                    rank + 1,
                    order,
                    h,
                    edges_closing,
                    k,
                    colors,
                    max_used.max(c),
                    deadline,
                    nodes,
                )?
            {
                return Some(true);
            }
        }
        colors[v] = 0;
        Some(false)
    }

    recurse(0, &order, h, &edges_closing, k, &mut colors, 0, deadline, &mut nodes_since_check)
}

/// Smallest k admitting a coloring; 1 for edgeless hypergraphs,
/// [`Chromatic::Uncolorable`] when some edge has singleton vertex support.
pub fn chromatic_number(h: &Hypergraph) -> Chromatic {
    if h.m() == 0 {
        return Chromatic::Finite(1);
    }
    if h.edges().iter().any(|e| e.iter().all(|&v| v == e[0])) {
        return Chromatic::Uncolorable;
    }
    // Every edge has >= 2 distinct vertices, so k = n always works.
    for k in 1..=h.n() {
        if is_k_colorable(h, k) {
            return Chromatic::Finite(k);
        }
    }
    unreachable!("k = n colors every hypergraph without singleton-support edges");
}
