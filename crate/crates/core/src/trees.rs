//! Branch vertices, legs, spiders, spiderly trees, full paths and the
//! marking process on forests.

use serde::{Deserialize, Serialize};

use crate::deck::DeckParams;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::metrics::{self, UNREACHABLE};
use crate::vines::j_centers;

fn require_tree(t: &Graph) -> Result<()> {
    if metrics::is_tree(t) {
        Ok(())
    } else {
        Err(Error::NotATree)
    }
}

/// Vertices of degree at least 3.
pub fn branch_vertices(t: &Graph) -> Result<VertexSet> {
    require_tree(t)?;
    Ok((0..t.n()).filter(|&v| t.degree(v) >= 3).collect())
}

/// Each leg as a vertex path from its leaf to the nearest branch vertex,
/// ordered by leaf.
pub fn legs(t: &Graph) -> Result<Vec<Vec<usize>>> {
    let branches = branch_vertices(t)?;
    if branches.is_empty() {
        return Err(Error::IsAPath);
    }
    let mut out = Vec::new();
    for leaf in (0..t.n()).filter(|&v| t.degree(v) == 1) {
        let mut path = vec![leaf];
        let mut prev = usize::MAX;
        let mut cur = leaf;
        while !branches.contains(cur) {
            let next = t.neighbors(cur).iter().find(|&w| w != prev).expect("legs end at a branch vertex");
            prev = cur;
            cur = next;
            path.push(cur);
        }
        out.push(path);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpiderShape {
    pub root: usize,
    /// Leg lengths, longest first.
    pub legs: Vec<usize>,
}

/// The shape of `t` when it is a spider. Paths are reported with a
/// central root.
pub fn spider_shape(t: &Graph) -> Result<Option<SpiderShape>> {
    let branches = branch_vertices(t)?;
    let root = match branches.len() {
        0 => metrics::centers(t)?.first().expect("trees have a center"),
        1 => branches.first().expect("one branch vertex"),
        _ => return Ok(None),
    };
    let mut lens: Vec<usize> = metrics::layers_from(t, root)
        .into_iter()
        .enumerate()
        .flat_map(|(d, layer)| layer.iter().filter(|&v| t.degree(v) <= 1 && d > 0).map(move |_| d).collect::<Vec<_>>())
        .collect();
    lens.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Some(SpiderShape { root, legs: lens }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpiderlyWitness {
    pub root: usize,
    /// Vertex set of the spider.
    pub spider: VertexSet,
}

/// Finds a root `z` and an induced spider branching only at `z` such that
/// every vertex outside it lies within distance `(n - ell - 2) / 2` of `z`.
///
/// For a fixed root, the vertices beyond that distance must all lie on the
/// spider, and the spider meets each branch at `z` in a path from `z`; so a
/// root works exactly when, in every branch, the far vertices lie on one
/// path from `z`. The spider is then the union of those paths.
pub fn is_ell_spiderly(t: &Graph, params: DeckParams) -> Result<Option<SpiderlyWitness>> {
    require_tree(t)?;
    check_order(t, params)?;
    let limit = params.n as i64 - params.ell as i64 - 2;
    for z in 0..t.n() {
        let dist = metrics::distances_from(t, z);
        let mut spider = VertexSet::singleton(z);
        let mut ok = true;
        for first in t.neighbors(z) {
            // Deepest far vertex in this branch, and whether the far ones form a chain.
            let mut tip = None;
            let branch = branch_of(t, z, first);
            for v in branch {
                if 2 * dist[v] as i64 > limit {
                    tip = match tip {
                        None => Some(v),
                        Some(u) if dist[v] > dist[u] => Some(v),
                        keep => keep,
                    };
                }
            }
            let Some(tip) = tip else { continue };
            let path: VertexSet = metrics::tree_path(t, tip, z).expect("tree").into_iter().collect();
            if branch.iter().any(|v| 2 * dist[v] as i64 > limit && !path.contains(v)) {
                ok = false;
                break;
            }
            spider = spider.union(path);
        }
        if ok {
            return Ok(Some(SpiderlyWitness { root: z, spider }));
        }
    }
    Ok(None)
}

/// Vertices of the component of `t - z` containing `first`.
fn branch_of(t: &Graph, z: usize, first: usize) -> VertexSet {
    let mut s = t.vertices();
    s.remove(z);
    let sub = t.induced_unchecked(s);
    // Map through the relabeling that removed `z`.
    let idx = |v: usize| if v > z { v - 1 } else { v };
    let back = |v: usize| if v >= z { v + 1 } else { v };
    metrics::component_of(&sub, idx(first)).iter().map(back).collect()
}

fn check_order(t: &Graph, params: DeckParams) -> Result<()> {
    if t.n() != params.n {
        return Err(Error::InvalidParameter(format!(
            "graph has {} vertices, parameters say {}",
            t.n(),
            params.n
        )));
    }
    Ok(())
}

/// Number of paths with exactly `n - ell` vertices; in a forest a path is
/// fixed by its endpoints.
pub fn full_paths_count(t: &Graph, params: DeckParams) -> Result<u64> {
    check_order(t, params)?;
    if !metrics::is_forest(t) {
        return Err(Error::InvalidParameter("full paths are counted in forests".into()));
    }
    let len = params.card_size() - 1;
    if len == 0 {
        return Ok(t.n() as u64);
    }
    let mut count = 0;
    for u in 0..t.n() {
        let dist = metrics::distances_from(t, u);
        count += dist[u + 1..].iter().filter(|&&d| d == len).count() as u64;
    }
    Ok(count)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkingReport {
    pub j: usize,
    pub ell: usize,
    /// Center of the card used for the run.
    pub z: usize,
    pub y: VertexSet,
    pub d_c: usize,
    /// `(marker, marked)` pairs in marker order.
    pub marks: Vec<(usize, usize)>,
    /// Number of `j`-centers in the whole forest.
    pub center_count: usize,
    /// `1 + d_C + ell`.
    pub bound: usize,
    pub within_bound: bool,
    pub equality: bool,
    /// With equality: every vertex outside the card is marked and the
    /// forest is a tree.
    pub equality_clause: Option<bool>,
}

/// Runs the marking process for the card induced by `card` in the forest
/// `f`, using the smallest-labeled center of the card.
pub fn run_marking(f: &Graph, card: VertexSet, j: usize) -> Result<MarkingReport> {
    let centers = check_marking_input(f, card, j)?;
    marking_with_center(f, card, j, centers.first().expect("cards have centers"))
}

/// One report per center of the card.
pub fn run_marking_all_centers(f: &Graph, card: VertexSet, j: usize) -> Result<Vec<MarkingReport>> {
    let centers = check_marking_input(f, card, j)?;
    centers.iter().map(|z| marking_with_center(f, card, j, z)).collect()
}

/// Returns the card's centers in original labels.
fn check_marking_input(f: &Graph, card: VertexSet, j: usize) -> Result<VertexSet> {
    if j == 0 {
        return Err(Error::OutOfValidityRange("the marking bound needs j >= 1".into()));
    }
    if !metrics::is_forest(f) {
        return Err(Error::InvalidParameter("marking runs on forests".into()));
    }
    let c = f.induced_subgraph(card).map_err(|e| Error::BadCard(e.to_string()))?;
    let radius = metrics::radius(&c).map_err(|_| Error::BadCard("card is not connected".into()))?;
    if radius != j + 1 {
        return Err(Error::BadCard(format!("card radius is {radius}, expected {}", j + 1)));
    }
    let labels: Vec<usize> = card.iter().collect();
    Ok(metrics::centers(&c)?.iter().map(|i| labels[i]).collect())
}

fn marking_with_center(f: &Graph, card: VertexSet, j: usize, z: usize) -> Result<MarkingReport> {
    let ell = f.n() - card.len();
    // Distances from z inside the card and inside the forest.
    let mut card_graph = f.clone();
    for v in f.vertices().difference(card) {
        for w in f.neighbors(v) {
            card_graph.remove_edge(v, w);
        }
    }
    let dist_card = metrics::distances_from(&card_graph, z);
    let dist = metrics::distances_from(f, z);
    let y: VertexSet = f
        .neighbors(z)
        .intersection(card)
        .iter()
        .filter(|&y| {
            card.iter().any(|w| {
                dist_card[w] == j + 1 && metrics::tree_path(&card_graph, w, z).is_some_and(|p| p.contains(&y))
            })
        })
        .collect();
    let centers = j_centers(f, j);
    let component = metrics::component_of(f, z);
    let mut marked = VertexSet::EMPTY;
    let mut marks = Vec::new();
    for x in centers.intersection(component) {
        if x == z || y.contains(x) {
            continue;
        }
        // Vertices j further from z through x.
        let target = (0..f.n()).find(|&w| {
            dist[w] != UNREACHABLE
                && dist[w] == dist[x] + j
                && metrics::tree_path(f, w, z).is_some_and(|p| p.contains(&x))
        });
        let Some(w) = target else {
            return Err(Error::InconsistentInput(format!("j-center {x} has no vertex to mark")));
        };
        if marked.contains(w) {
            return Err(Error::MarkingCollision(w));
        }
        marked.insert(w);
        marks.push((x, w));
    }
    let center_count = centers.len();
    let bound = 1 + y.len() + ell;
    let equality = center_count == bound;
    let equality_clause = equality.then(|| {
        f.vertices().difference(card).is_subset(marked) && metrics::is_tree(f)
    });
    Ok(MarkingReport {
        j,
        ell,
        z,
        y,
        d_c: y.len(),
        marks,
        center_count,
        bound,
        within_bound: center_count <= bound,
        equality,
        equality_clause,
    })
}
