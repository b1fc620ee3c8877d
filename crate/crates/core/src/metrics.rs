//! Distances, eccentricity, girth and components by breadth-first search
//! over bit rows.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

/// Distance marker for vertices outside the source's component.
pub const UNREACHABLE: usize = usize::MAX;

/// Length of a shortest cycle, or `Acyclic` for forests.
///
/// Orders with `Acyclic` above every finite value, so `girth >= bound`
/// reads naturally for both cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GirthValue {
    Finite(usize),
    Acyclic,
}

impl GirthValue {
    pub fn is_acyclic(self) -> bool {
        self == GirthValue::Acyclic
    }

    pub fn at_least(self, bound: usize) -> bool {
        match self {
            GirthValue::Acyclic => true,
            GirthValue::Finite(g) => g >= bound,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            GirthValue::Finite(g) => Some(g),
            GirthValue::Acyclic => None,
        }
    }
}

impl PartialOrd for GirthValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GirthValue {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (GirthValue::Acyclic, GirthValue::Acyclic) => Ordering::Equal,
            (GirthValue::Acyclic, _) => Ordering::Greater,
            (_, GirthValue::Acyclic) => Ordering::Less,
            (GirthValue::Finite(a), GirthValue::Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for GirthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GirthValue::Finite(g) => write!(f, "{g}"),
            GirthValue::Acyclic => write!(f, "acyclic"),
        }
    }
}

/// BFS layers from `v`: `layers[d]` holds the vertices at distance `d`.
pub fn layers_from(g: &Graph, v: usize) -> Vec<VertexSet> {
    let mut seen = VertexSet::singleton(v);
    let mut frontier = seen;
    let mut layers = vec![frontier];
    loop {
        let mut next = 0u64;
        for u in frontier {
            next |= g.neighbors(u).bits();
        }
        let next = VertexSet(next).difference(seen);
        if next.is_empty() {
            return layers;
        }
        seen = seen.union(next);
        layers.push(next);
        frontier = next;
    }
}

/// Distances from `v`; vertices in other components get [`UNREACHABLE`].
pub fn distances_from(g: &Graph, v: usize) -> Vec<usize> {
    let mut dist = vec![UNREACHABLE; g.n()];
    for (d, layer) in layers_from(g, v).into_iter().enumerate() {
        for u in layer {
            dist[u] = d;
        }
    }
    dist
}

/// Vertices within distance `radius` of any vertex in `sources`.
pub fn within_distance(g: &Graph, sources: VertexSet, radius: usize) -> VertexSet {
    let mut seen = sources;
    let mut frontier = sources;
    for _ in 0..radius {
        let mut next = 0u64;
        for u in frontier {
            next |= g.neighbors(u).bits();
        }
        frontier = VertexSet(next).difference(seen);
        if frontier.is_empty() {
            break;
        }
        seen = seen.union(frontier);
    }
    seen
}

/// All-pairs distances.
pub fn distance_matrix(g: &Graph) -> Vec<Vec<usize>> {
    (0..g.n()).map(|v| distances_from(g, v)).collect()
}

/// Largest distance from `v` to a vertex of its own component.
pub fn eccentricity(g: &Graph, v: usize) -> usize {
    layers_from(g, v).len() - 1
}

pub fn component_of(g: &Graph, v: usize) -> VertexSet {
    layers_from(g, v).into_iter().fold(VertexSet::EMPTY, VertexSet::union)
}

/// Connected components, ordered by their smallest vertex.
pub fn components(g: &Graph) -> Vec<VertexSet> {
    let mut rest = g.vertices();
    let mut out = Vec::new();
    while let Some(v) = rest.first() {
        let c = component_of(g, v);
        rest = rest.difference(c);
        out.push(c);
    }
    out
}

pub fn is_connected(g: &Graph) -> bool {
    component_of(g, 0) == g.vertices()
}

fn connected_eccentricities(g: &Graph) -> Result<Vec<usize>> {
    if !is_connected(g) {
        return Err(Error::NotConnected);
    }
    Ok((0..g.n()).map(|v| eccentricity(g, v)).collect())
}

pub fn diameter(g: &Graph) -> Result<usize> {
    Ok(connected_eccentricities(g)?.into_iter().max().unwrap_or(0))
}

pub fn radius(g: &Graph) -> Result<usize> {
    Ok(connected_eccentricities(g)?.into_iter().min().unwrap_or(0))
}

/// Vertices of minimum eccentricity.
pub fn centers(g: &Graph) -> Result<VertexSet> {
    let ecc = connected_eccentricities(g)?;
    let r = ecc.iter().copied().min().unwrap_or(0);
    Ok(ecc.iter().enumerate().filter(|&(_, &e)| e == r).map(|(v, _)| v).collect())
}

/// Length of a shortest cycle.
pub fn girth(g: &Graph) -> GirthValue {
    let n = g.n();
    let mut best = UNREACHABLE;
    let mut dist = vec![UNREACHABLE; n];
    let mut parent = vec![UNREACHABLE; n];
    let mut queue = Vec::with_capacity(n);
    for root in 0..n {
        dist.iter_mut().for_each(|d| *d = UNREACHABLE);
        queue.clear();
        dist[root] = 0;
        parent[root] = UNREACHABLE;
        queue.push(root);
        let mut head = 0;
        while head < queue.len() {
            let u = queue[head];
            head += 1;
            // Every cycle through `root` closes no later than this depth.
            if 2 * dist[u] + 1 >= best {
                break;
            }
            for w in g.neighbors(u) {
                if dist[w] == UNREACHABLE {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push(w);
                } else if parent[u] != w {
                    best = best.min(dist[u] + dist[w] + 1);
                }
            }
        }
    }
    if best == UNREACHABLE {
        GirthValue::Acyclic
    } else {
        GirthValue::Finite(best)
    }
}

pub fn is_forest(g: &Graph) -> bool {
    g.edge_count() + components(g).len() == g.n()
}

pub fn is_tree(g: &Graph) -> bool {
    g.edge_count() + 1 == g.n() && is_connected(g)
}

/// The unique path between `u` and `v` in a forest, from `u` to `v`.
/// `None` when they lie in different components.
pub fn tree_path(g: &Graph, u: usize, v: usize) -> Option<Vec<usize>> {
    let dist = distances_from(g, v);
    if dist[u] == UNREACHABLE {
        return None;
    }
    let mut path = vec![u];
    let mut cur = u;
    while cur != v {
        cur = g.neighbors(cur).iter().find(|&w| dist[w] + 1 == dist[cur])?;
        path.push(cur);
    }
    Some(path)
}
