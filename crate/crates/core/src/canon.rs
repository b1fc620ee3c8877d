//! Canonical labeling by partition refinement and individualization.
//!
//! The vertex set is refined to an equitable ordered partition, then the
//! first non-singleton cell is individualized vertex by vertex and refined
//! again until every cell is a singleton. Each discrete partition is a
//! labeling; the canonical form is the graph6 string that is smallest among
//! all leaves of that search tree. Refinement and cell selection depend only
//! on the ordered partition, so the leaf set of `σ·g` is the image of the
//! leaf set of `g` and the minimum is a complete isomorphism invariant.
//!
//! Twins (vertices with the same neighbourhood apart from each other) are
//! swapped by an automorphism fixing everything else, so only one twin per
//! class is individualized at each node.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::graph::{Graph, VertexSet};
use crate::graph6;

/// Isomorphism-invariant key: the graph6 string of the canonical relabeling.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Vertex count, read from the size prefix.
    pub fn order(&self) -> usize {
        let b = self.0.as_bytes();
        if b[0] == 126 {
            (((b[1] - 63) as usize) << 12) | (((b[2] - 63) as usize) << 6) | (b[3] - 63) as usize
        } else {
            (b[0] - 63) as usize
        }
    }

    pub fn decode(&self) -> Graph {
        graph6::decode(&self.0).expect("canonical codes are valid graph6")
    }

    /// Wraps a string after checking that it decodes and is already canonical.
    pub fn parse(s: &str) -> Result<Self> {
        let g = graph6::decode(s)?;
        let code = canonical_form(&g);
        if code.0 != s.trim() {
            return Err(crate::Error::Parse {
                offset: 0,
                message: format!("{} is not in canonical form (expected {})", s.trim(), code.0),
            });
        }
        Ok(code)
    }
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

type Partition = Vec<VertexSet>;

/// Splits cells until every cell has a uniform neighbour count into every
/// other cell. Sub-cells are ordered by ascending count.
fn refine(g: &Graph, cells: &mut Partition) {
    let n = g.n();
    let mut buckets = vec![VertexSet::EMPTY; n + 1];
    let mut next: Partition = Vec::with_capacity(n);
    let mut i = 0;
    while i < cells.len() && cells.len() < n {
        let splitter = cells[i].bits();
        let mut split = false;
        next.clear();
        for &cell in cells.iter() {
            if cell.len() == 1 {
                next.push(cell);
                continue;
            }
            let mut lo = n;
            let mut hi = 0;
            for v in cell {
                let c = (g.neighbors(v).bits() & splitter).count_ones() as usize;
                buckets[c].insert(v);
                lo = lo.min(c);
                hi = hi.max(c);
            }
            if lo == hi {
                buckets[lo] = VertexSet::EMPTY;
                next.push(cell);
                continue;
            }
            split = true;
            for b in &mut buckets[lo..=hi] {
                if !b.is_empty() {
                    next.push(*b);
                    *b = VertexSet::EMPTY;
                }
            }
        }
        std::mem::swap(cells, &mut next);
        i = if split { 0 } else { i + 1 };
    }
}

fn twins_in(g: &Graph, v: usize, cell: VertexSet) -> VertexSet {
    let nv = g.neighbors(v).bits();
    cell.iter()
        .filter(|&w| {
            let nw = g.neighbors(w).bits();
            nv & !(1u64 << w) == nw & !(1u64 << v)
        })
        .collect()
}

struct Search<'a> {
    g: &'a Graph,
    best: Vec<u8>,
    best_order: Vec<usize>,
    scratch: Vec<u8>,
}

impl Search<'_> {
    fn run(&mut self, mut cells: Partition) {
        refine(self.g, &mut cells);
        if cells.len() == self.g.n() {
            self.leaf(&cells);
            return;
        }
        let t = cells.iter().position(|c| c.len() > 1).expect("partition is not discrete");
        let target = cells[t];
        let mut covered = VertexSet::EMPTY;
        for v in target {
            if covered.contains(v) {
                continue;
            }
            covered = covered.union(twins_in(self.g, v, target));
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..t]);
            child.push(VertexSet::singleton(v));
            let mut rest = target;
            rest.remove(v);
            child.push(rest);
            child.extend_from_slice(&cells[t + 1..]);
            self.run(child);
        }
    }

    fn leaf(&mut self, cells: &Partition) {
        let order: Vec<usize> = cells.iter().map(|c| c.first().unwrap()).collect();
        let n = order.len();
        self.scratch.clear();
        let mut acc = 0u8;
        let mut filled = 0;
        // 0: still equal to best, -1: smaller, 1: larger.
        let mut state = if self.best.is_empty() { -1 } else { 0 };
        let emit = |byte: u8, scratch: &mut Vec<u8>, best: &[u8], state: &mut i32| -> bool {
            let k = scratch.len();
            scratch.push(byte);
            if *state == 0 {
                match byte.cmp(&best[k]) {
                    std::cmp::Ordering::Less => *state = -1,
                    std::cmp::Ordering::Greater => {
                        *state = 1;
                        return false;
                    }
                    std::cmp::Ordering::Equal => {}
                }
            }
            true
        };
        for j in 1..n {
            let row = self.g.neighbors(order[j]).bits();
            for &u in &order[..j] {
                acc = acc << 1 | (row >> u & 1) as u8;
                filled += 1;
                if filled == 6 {
                    if !emit(acc, &mut self.scratch, &self.best, &mut state) {
                        return;
                    }
                    acc = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 && !emit(acc << (6 - filled), &mut self.scratch, &self.best, &mut state) {
            return;
        }
        if state < 0 {
            std::mem::swap(&mut self.best, &mut self.scratch);
            self.best_order = order;
        }
    }
}

/// Canonical ordering of the vertices: `result[i]` is the vertex that gets
/// label `i` in the canonical relabeling.
pub fn canonical_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    if n == 1 {
        return vec![0];
    }
    let mut search = Search { g, best: Vec::new(), best_order: Vec::new(), scratch: Vec::new() };
    search.run(vec![g.vertices()]);
    search.best_order
}

/// Permutation mapping each vertex of `g` to its canonical label.
pub fn canonical_labeling(g: &Graph) -> Vec<usize> {
    let order = canonical_order(g);
    let mut perm = vec![0; order.len()];
    for (i, &v) in order.iter().enumerate() {
        perm[v] = i;
    }
    perm
}

pub fn canonical_graph(g: &Graph) -> Graph {
    g.permuted(&canonical_labeling(g))
}

pub fn canonical_form(g: &Graph) -> CanonicalCode {
    CanonicalCode(graph6::encode(&canonical_graph(g)))
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return false;
    }
    if g.degree_sequence() != h.degree_sequence() {
        return false;
    }
    canonical_form(g) == canonical_form(h)
}
