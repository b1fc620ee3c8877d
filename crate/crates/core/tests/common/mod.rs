//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the canonical labeling, the deck code or the metric routines of the
//! library; graphs are read only through `has_edge` and `n`.

#![allow(dead_code)]

use std::collections::VecDeque;

use deckforge::{Graph, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Unlabeled trees on n vertices, n = 0..=13.
pub const TREE_COUNTS: [usize; 14] = [0, 1, 1, 1, 2, 3, 6, 11, 23, 47, 106, 235, 551, 1301];
/// Unlabeled forests on n vertices, n = 0..=11.
pub const FOREST_COUNTS: [usize; 12] = [1, 1, 2, 3, 6, 10, 20, 37, 76, 153, 329, 710];
/// Unlabeled graphs on n vertices, n = 0..=8.
pub const GRAPH_COUNTS: [usize; 9] = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];

pub fn binomial(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1] + row[i];
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in u + 1..g.n() {
            if g.has_edge(u, v) {
                out.push((u, v));
            }
        }
    }
    out
}

pub fn degrees(g: &Graph) -> Vec<usize> {
    (0..g.n()).map(|u| (0..g.n()).filter(|&v| g.has_edge(u, v)).count()).collect()
}

pub fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d = degrees(g);
    d.sort_unstable_by(|a, b| b.cmp(a));
    d
}

/// The subgraph induced on the listed vertices, relabeled in list order.
pub fn induced(g: &Graph, vs: &[usize]) -> Graph {
    let mut edges = Vec::new();
    for (i, &a) in vs.iter().enumerate() {
        for (k, &b) in vs.iter().enumerate().skip(i + 1) {
            if g.has_edge(a, b) {
                edges.push((i, k));
            }
        }
    }
    Graph::from_edges(vs.len(), &edges).unwrap()
}

pub fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&v| mask >> v & 1 == 1).collect()
}

pub fn induced_mask(g: &Graph, mask: u64) -> Graph {
    induced(g, &members(mask))
}

/// Backtracking isomorphism test: extend a partial map vertex by vertex,
/// checking adjacency against every mapped vertex.
pub fn brute_isomorphic(g: &Graph, h: &Graph) -> bool {
    let n = g.n();
    if n != h.n() || edge_list(g).len() != edge_list(h).len() || sorted_degrees(g) != sorted_degrees(h) {
        return false;
    }
    let (dg, dh) = (degrees(g), degrees(h));
    fn extend(g: &Graph, h: &Graph, dg: &[usize], dh: &[usize], map: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let v = map.len();
        if v == g.n() {
            return true;
        }
        for w in 0..h.n() {
            if used[w] || dg[v] != dh[w] {
                continue;
            }
            if (0..v).all(|u| g.has_edge(u, v) == h.has_edge(map[u], w)) {
                used[w] = true;
                map.push(w);
                if extend(g, h, dg, dh, map, used) {
                    return true;
                }
                map.pop();
                used[w] = false;
            }
        }
        false
    }
    extend(g, h, &dg, &dh, &mut Vec::new(), &mut vec![false; n])
}

/// Isomorphism classes with multiplicities.
pub fn group_classes(graphs: impl IntoIterator<Item = Graph>) -> Vec<(Graph, u64)> {
    let mut classes: Vec<(Graph, u64)> = Vec::new();
    for g in graphs {
        match classes.iter_mut().find(|(rep, _)| brute_isomorphic(rep, &g)) {
            Some((_, m)) => *m += 1,
            None => classes.push((g, 1)),
        }
    }
    classes
}

/// Every `j`-vertex induced subgraph, by scanning all vertex masks.
pub fn brute_deck(g: &Graph, j: usize) -> Vec<(Graph, u64)> {
    let n = g.n();
    group_classes((0u64..1 << n).filter(|m| m.count_ones() as usize == j).map(|m| induced_mask(g, m)))
}

/// Whether a library deck and a brute-force deck agree as multisets.
pub fn deck_matches(deck: &deckforge::Deck, brute: &[(Graph, u64)]) -> bool {
    if deck.cards().len() != brute.len() {
        return false;
    }
    deck.cards().iter().all(|(code, &m)| {
        let card = code.decode();
        brute.iter().any(|(rep, bm)| *bm == m && brute_isomorphic(rep, &card))
    })
}

pub fn brute_count_induced(g: &Graph, f: &Graph) -> u64 {
    (0u64..1 << g.n())
        .filter(|m| m.count_ones() as usize == f.n())
        .filter(|&m| brute_isomorphic(&induced_mask(g, m), f))
        .count() as u64
}

/// Masks of the members of a family that lie in no strictly larger member.
pub fn brute_maximal(g: &Graph, member: impl Fn(&Graph) -> bool) -> Vec<u64> {
    let n = g.n();
    let full = (1u64 << n) - 1;
    let is: Vec<bool> = (0u64..=full).map(|m| m != 0 && member(&induced_mask(g, m))).collect();
    (1u64..=full)
        .filter(|&m| is[m as usize])
        .filter(|&m| {
            // Every strict superset of m, by enumerating subsets of the complement.
            let rest = full & !m;
            let mut sub = rest;
            while sub != 0 {
                if is[(m | sub) as usize] {
                    return false;
                }
                sub = (sub - 1) & rest;
            }
            true
        })
        .collect()
}

pub const INF: usize = usize::MAX;

pub fn bfs(g: &Graph, s: usize) -> Vec<usize> {
    let mut dist = vec![INF; g.n()];
    dist[s] = 0;
    let mut q = VecDeque::from([s]);
    while let Some(u) = q.pop_front() {
        for v in 0..g.n() {
            if g.has_edge(u, v) && dist[v] == INF {
                dist[v] = dist[u] + 1;
                q.push_back(v);
            }
        }
    }
    dist
}

pub fn connected(g: &Graph) -> bool {
    g.n() == 0 || bfs(g, 0).iter().all(|&d| d != INF)
}

pub fn component_count(g: &Graph) -> usize {
    let mut seen = vec![false; g.n()];
    let mut count = 0;
    for s in 0..g.n() {
        if !seen[s] {
            count += 1;
            for (v, d) in bfs(g, s).into_iter().enumerate() {
                if d != INF {
                    seen[v] = true;
                }
            }
        }
    }
    count
}

pub fn is_forest(g: &Graph) -> bool {
    edge_list(g).len() + component_count(g) == g.n()
}

pub fn is_tree(g: &Graph) -> bool {
    g.n() > 0 && connected(g) && edge_list(g).len() + 1 == g.n()
}

/// Diameter of a connected graph.
pub fn diameter(g: &Graph) -> usize {
    (0..g.n()).map(|s| *bfs(g, s).iter().max().unwrap()).max().unwrap_or(0)
}

pub fn radius(g: &Graph) -> usize {
    (0..g.n()).map(|s| *bfs(g, s).iter().max().unwrap()).min().unwrap_or(0)
}

/// Shortest cycle length; `None` for forests. A shortest cycle through an
/// edge uv is uv plus a shortest u-v path avoiding that edge.
pub fn girth(g: &Graph) -> Option<usize> {
    let mut best = None;
    for (u, v) in edge_list(g) {
        let mut h = g.clone();
        h.remove_edge(u, v);
        let d = bfs(&h, u)[v];
        if d != INF {
            best = Some(best.map_or(d + 1, |b: usize| b.min(d + 1)));
        }
    }
    best
}

/// All labeled graphs on `n` vertices.
pub fn labeled_graphs(n: usize) -> impl Iterator<Item = Graph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|v| (0..v).map(move |u| (u, v))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges: Vec<(usize, usize)> =
            pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &e)| e).collect();
        Graph::from_edges(n, &edges).unwrap()
    })
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, &edges).unwrap()
}

/// A random labeled tree: vertex i attaches to a uniformly chosen earlier
/// vertex, then labels are shuffled.
pub fn random_tree(rng: &mut impl Rng, n: usize) -> Graph {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let edges: Vec<(usize, usize)> = (1..n).map(|i| (perm[rng.gen_range(0..i)], perm[i])).collect();
    Graph::from_edges(n, &edges).unwrap()
}

pub fn random_permutation(rng: &mut impl Rng, n: usize) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    perm
}

/// `g` with vertex v renamed to perm[v].
pub fn relabel(g: &Graph, perm: &[usize]) -> Graph {
    let edges: Vec<(usize, usize)> = edge_list(g).into_iter().map(|(u, v)| (perm[u], perm[v])).collect();
    Graph::from_edges(g.n(), &edges).unwrap()
}

pub fn mask_set(mask: u64) -> VertexSet {
    VertexSet(mask)
}

/// A j-vine is a tree of diameter 2j.
pub fn is_vine(g: &Graph, j: usize) -> bool {
    is_tree(g) && diameter(g) == 2 * j
}

pub fn is_evine(g: &Graph, j: usize) -> bool {
    is_tree(g) && diameter(g) == 2 * j + 1
}

/// `k` straight from its definition, over every induced subgraph: the
/// largest `k` with an induced `k`-evine such that no induced `i`-vine or
/// `i`-evine with `i <= k` has `n - ell` or more vertices.
pub fn k_literal(g: &Graph, ell: usize) -> Option<usize> {
    let n = g.n();
    let big = n - ell;
    let mut evine = vec![false; n + 1];
    let mut large = vec![false; n + 1];
    for mask in 1u64..1 << n {
        let h = induced_mask(g, mask);
        if !is_tree(&h) {
            continue;
        }
        let d = diameter(&h);
        let i = d / 2;
        if d % 2 == 1 && h.n() >= 2 {
            evine[i] = true;
        }
        if h.n() >= big {
            large[i] = true;
        }
    }
    (0..n).filter(|&k| evine[k] && !large[..=k].iter().any(|&b| b)).max()
}

/// Vertices that are the middle of an induced path on 2j+1 vertices.
pub fn brute_j_centers(g: &Graph, j: usize) -> Vec<usize> {
    let mut out = Vec::new();
    for x in 0..g.n() {
        let found = (0u64..1 << g.n()).filter(|m| m.count_ones() as usize == 2 * j + 1 && m >> x & 1 == 1).any(|m| {
            let vs = members(m);
            let h = induced(g, &vs);
            if !is_tree(&h) || diameter(&h) != 2 * j {
                return false;
            }
            let i = vs.iter().position(|&v| v == x).unwrap();
            *bfs(&h, i).iter().max().unwrap() == j
        });
        if found {
            out.push(x);
        }
    }
    out
}
