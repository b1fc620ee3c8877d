//! Vines, evines, balls, centers and the parameter `k`.
//!
//! A `j`-vine is a tree of diameter `2j`, a `j`-evine a tree of diameter
//! `2j + 1`. A vertex is a `j`-center when it is the center of some induced
//! `j`-vine; an induced tree contains a longest path through its center, so
//! this is the same as being the middle vertex of an induced `P_{2j+1}`.
//! Central edges are handled the same way with induced `P_{2j+2}`.

use serde::{Deserialize, Serialize};

use crate::deck::{subsets_of_size, Deck, DeckParams};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::metrics::{self, GirthValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum VineKind {
    Vine(usize),
    Evine(usize),
}

impl VineKind {
    pub fn diameter(self) -> usize {
        match self {
            VineKind::Vine(j) => 2 * j,
            VineKind::Evine(j) => 2 * j + 1,
        }
    }

    pub fn from_diameter(d: usize) -> Self {
        if d % 2 == 0 {
            VineKind::Vine(d / 2)
        } else {
            VineKind::Evine((d - 1) / 2)
        }
    }
}

/// `Some(kind)` when `t` is a tree, by its diameter.
pub fn classify_vine(t: &Graph) -> Option<VineKind> {
    if !metrics::is_tree(t) {
        return None;
    }
    Some(VineKind::from_diameter(metrics::diameter(t).ok()?))
}

pub fn ball(g: &Graph, v: usize, j: usize) -> VertexSet {
    metrics::within_distance(g, VertexSet::singleton(v), j)
}

pub fn eball(g: &Graph, u: usize, v: usize, j: usize) -> VertexSet {
    metrics::within_distance(g, [u, v].into_iter().collect(), j)
}

/// Vertex sets of the induced paths with `len` edges starting at `start`
/// and avoiding `forbidden`.
fn induced_paths_from(g: &Graph, start: usize, len: usize, forbidden: u64) -> Vec<u64> {
    fn rec(g: &Graph, last: usize, path: u64, left: usize, forbidden: u64, out: &mut Vec<u64>) {
        if left == 0 {
            out.push(path);
            return;
        }
        for w in VertexSet(g.neighbors(last).bits() & !path & !forbidden) {
            // `w` may touch the path only at `last`.
            if g.neighbors(w).bits() & path == 1u64 << last {
                rec(g, w, path | 1u64 << w, left - 1, forbidden, out);
            }
        }
    }
    let mut out = Vec::new();
    if forbidden >> start & 1 == 0 {
        rec(g, start, 1u64 << start, len, forbidden, &mut out);
    }
    out
}

fn neighborhood(g: &Graph, s: u64) -> u64 {
    VertexSet(s).iter().fold(0, |acc, v| acc | g.neighbors(v).bits())
}

pub fn is_j_center(g: &Graph, v: usize, j: usize) -> bool {
    let arms = induced_paths_from(g, v, j, 0);
    let bit = 1u64 << v;
    arms.iter().enumerate().any(|(i, &a)| {
        let a = a & !bit;
        let reach = neighborhood(g, a);
        arms[i..].iter().any(|&b| {
            let b = b & !bit;
            a & b == 0 && reach & b == 0
        })
    })
}

pub fn is_j_central_edge(g: &Graph, u: usize, v: usize, j: usize) -> bool {
    if !g.has_edge(u, v) {
        return false;
    }
    let left = induced_paths_from(g, u, j, 1u64 << v);
    let right = induced_paths_from(g, v, j, 1u64 << u);
    let nu = g.neighbors(u).bits();
    left.iter().any(|&a| {
        let reach = neighborhood(g, a & !(1u64 << u));
        right.iter().any(|&b| a & b == 0 && reach & b == 0 && nu & b == 1u64 << v)
    })
}

pub fn j_centers(g: &Graph, j: usize) -> VertexSet {
    (0..g.n()).filter(|&v| is_j_center(g, v, j)).collect()
}

/// Central edges `(u, v)` with `u < v`, in lexicographic order.
pub fn j_central_edges(g: &Graph, j: usize) -> Vec<(usize, usize)> {
    g.edges().filter(|&(u, v)| is_j_central_edge(g, u, v, j)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VineCenter {
    Vertex(usize),
    Edge(usize, usize),
}

/// Vertex set of the maximal `j`-vine (or `j`-evine, for an edge) at the
/// given center: the `j`-ball (or `j`-eball).
pub fn maximal_vine_set(g: &Graph, center: VineCenter, j: usize) -> Result<VertexSet> {
    let required = match center {
        VineCenter::Vertex(_) => 2 * j + 2,
        VineCenter::Edge(..) => 2 * j + 3,
    };
    if let GirthValue::Finite(girth) = metrics::girth(g) {
        if girth < required {
            return Err(Error::GirthTooSmall { girth, required });
        }
    }
    match center {
        VineCenter::Vertex(v) => {
            if v >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: v, n: g.n() });
            }
            if !is_j_center(g, v, j) {
                return Err(Error::NotACenter);
            }
            Ok(ball(g, v, j))
        }
        VineCenter::Edge(u, v) => {
            if u.max(v) >= g.n() {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n: g.n() });
            }
            if !is_j_central_edge(g, u, v, j) {
                return Err(Error::NotACenter);
            }
            Ok(eball(g, u, v, j))
        }
    }
}

pub fn maximal_vine_at(g: &Graph, center: VineCenter, j: usize) -> Result<Graph> {
    Ok(g.induced_unchecked(maximal_vine_set(g, center, j)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KValue {
    Defined(usize),
    Undefined,
}

impl KValue {
    pub fn value(self) -> Option<usize> {
        match self {
            KValue::Defined(k) => Some(k),
            KValue::Undefined => None,
        }
    }
}

impl std::fmt::Display for KValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            KValue::Defined(k) => write!(f, "{k}"),
            KValue::Undefined => f.write_str("undefined"),
        }
    }
}

/// Vertex count of a longest induced path, capped at `cap`.
pub fn longest_induced_path(g: &Graph, cap: usize) -> usize {
    fn rec(g: &Graph, last: usize, path: u64, len: usize, cap: usize, best: &mut usize) {
        *best = (*best).max(len);
        if *best >= cap {
            return;
        }
        for w in VertexSet(g.neighbors(last).bits() & !path) {
            if g.neighbors(w).bits() & path == 1u64 << last {
                rec(g, w, path | 1u64 << w, len + 1, cap, best);
            }
        }
    }
    let mut best = 0;
    for v in 0..g.n() {
        rec(g, v, 1u64 << v, 1, cap, &mut best);
        if best >= cap {
            break;
        }
    }
    best.min(cap)
}

/// Largest `k` such that `valid(k)`, where validity is closed downward.
fn largest_valid(limit: usize, valid: impl Fn(usize) -> bool) -> KValue {
    let mut out = KValue::Undefined;
    for k in 0..=limit {
        if !valid(k) {
            break;
        }
        out = KValue::Defined(k);
    }
    out
}

/// `k` of a graph: the largest `k` such that `g` has an induced `k`-evine
/// and every induced `j`-vine and `j`-evine, `j <= k`, has fewer than
/// `n - ell` vertices.
///
/// A tree with at least `N = n - ell` vertices and diameter `d` either
/// contains a path on `N` vertices (when `d + 1 >= N`) or can be trimmed to
/// `N` vertices keeping a longest path, so the condition reduces to: no
/// induced `N`-vertex tree has diameter at most `2k + 1`.
pub fn k_of_graph(g: &Graph, params: DeckParams) -> Result<KValue> {
    if params.n != g.n() {
        return Err(Error::InvalidParameter(format!(
            "graph has {} vertices, parameters say {}",
            g.n(),
            params.n
        )));
    }
    let big = params.card_size();
    let longest = longest_induced_path(g, big);
    let min_tree_diameter = subsets_of_size(g.n(), big)
        .filter_map(|s| {
            let t = g.induced_unchecked(s);
            metrics::is_tree(&t).then(|| metrics::diameter(&t).unwrap_or(0))
        })
        .min()
        .unwrap_or(usize::MAX);
    Ok(largest_valid(g.n(), |k| {
        2 * k + 2 <= longest && 2 * k + 2 < big && 2 * k + 1 < min_tree_diameter
    }))
}

/// `k` read off an acyclic deck. Inside a card, a vine with as many
/// vertices as the card is the card itself, so only tree cards constrain
/// `k`; induced evines of a forest are witnessed by component diameters.
pub fn k_from_deck(d: &Deck) -> Result<KValue> {
    let mut max_component_diameter: Option<usize> = None;
    let mut min_tree_diameter = usize::MAX;
    for code in d.cards().keys() {
        let card = code.decode();
        if !metrics::is_forest(&card) {
            return Err(Error::NotAcyclicDeck);
        }
        for c in metrics::components(&card) {
            let comp = card.induced_unchecked(c);
            let diam = metrics::diameter(&comp).unwrap_or(0);
            if comp.n() > 1 {
                max_component_diameter = Some(max_component_diameter.map_or(diam, |m| m.max(diam)));
            }
            if comp.n() == card.n() {
                min_tree_diameter = min_tree_diameter.min(diam);
            }
        }
    }
    let Some(max_diam) = max_component_diameter else {
        return Ok(KValue::Undefined);
    };
    Ok(largest_valid(d.n(), |k| max_diam >= 2 * k + 1 && 2 * k + 1 < min_tree_diameter))
}
