//! Exhaustive enumeration and the searches built on it.
//!
//! Every enumerator returns one canonical code per isomorphism class, in
//! code order. Work is spread over the rayon pool; results are always sorted
//! before they are returned, so output does not depend on the worker count.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::CanonicalCode;
use crate::deck::{cached_canonical_form, compute_deck, decks_equal, edge_count_from_deck, Deck, DeckParams};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metrics::{self, UNREACHABLE};

/// Largest vertex counts the enumerators accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub trees: usize,
    pub forests: usize,
    /// Graphs with a cycle and a girth bound.
    pub cyclic: usize,
    /// Unrestricted graphs.
    pub general: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { trees: 13, forests: 11, cyclic: 11, general: 8 }
    }
}

impl Budget {
    /// The same cap for every enumerator.
    pub fn uniform(n: usize) -> Self {
        Budget { trees: n, forests: n, cyclic: n, general: n }
    }

    fn check(n: usize, budget: usize, what: &'static str) -> Result<()> {
        if n > budget {
            Err(Error::BudgetExceeded { what, n, budget })
        } else {
            Ok(())
        }
    }
}

fn dedupe(graphs: impl ParallelIterator<Item = Graph>) -> Vec<CanonicalCode> {
    let set: HashSet<CanonicalCode> = graphs.map(|g| cached_canonical_form(&g)).collect();
    let mut out: Vec<CanonicalCode> = set.into_iter().collect();
    out.sort();
    out
}

fn require_positive(n: usize) -> Result<()> {
    if n == 0 || n > crate::MAX_VERTICES {
        return Err(Error::InvalidParameter(format!("vertex count {n} out of range")));
    }
    Ok(())
}

/// Trees on `n` vertices, grown one leaf at a time.
pub fn enumerate_trees(n: usize, budget: &Budget) -> Result<Vec<CanonicalCode>> {
    require_positive(n)?;
    Budget::check(n, budget.trees, "tree enumeration")?;
    let mut level = vec![cached_canonical_form(&Graph::empty(1)?)];
    for _ in 1..n {
        level = dedupe(level.par_iter().flat_map_iter(|c| {
            let t = c.decode();
            (0..t.n()).map(move |v| t.add_leaf(v).expect("within capacity"))
        }));
    }
    Ok(level)
}

/// Forests on `n` vertices: each is a smaller forest plus an isolated
/// vertex or plus a leaf.
pub fn enumerate_forests(n: usize, budget: &Budget) -> Result<Vec<CanonicalCode>> {
    require_positive(n)?;
    Budget::check(n, budget.forests, "forest enumeration")?;
    let mut level = vec![cached_canonical_form(&Graph::empty(1)?)];
    for _ in 1..n {
        level = dedupe(level.par_iter().flat_map_iter(|c| {
            let f = c.decode();
            let isolated = f.disjoint_union(&Graph::empty(1).expect("one vertex")).expect("within capacity");
            std::iter::once(isolated).chain((0..f.n()).map(move |v| f.add_leaf(v).expect("within capacity")))
        }));
    }
    Ok(level)
}

/// Graphs on `n` vertices with at least one cycle, girth at least
/// `min_girth` and at most `max_edges` edges.
///
/// Removing cycle edges one at a time from such a graph leaves a spanning
/// forest with the same components, and every intermediate graph still
/// meets both bounds. So the graphs are generated from forests by adding
/// edges inside components, level by level, keeping the girth bound.
pub fn cyclic_graphs(n: usize, min_girth: usize, max_edges: usize, budget: usize) -> Result<Vec<CanonicalCode>> {
    require_positive(n)?;
    Budget::check(n, budget, "cyclic graph enumeration")?;
    let min_girth = min_girth.max(3);
    if max_edges == 0 {
        return Ok(Vec::new());
    }
    let forests = enumerate_forests(n, &Budget::uniform(n))?;
    let mut level: Vec<CanonicalCode> =
        forests.into_iter().filter(|c| c.decode().edge_count() < max_edges).collect();
    let mut out = BTreeSet::new();
    loop {
        let next = dedupe(level.par_iter().flat_map_iter(|c| close_a_cycle(&c.decode(), min_girth, max_edges)));
        if next.is_empty() {
            break;
        }
        out.extend(next.iter().cloned());
        level = next;
    }
    Ok(out.into_iter().collect())
}

/// Every graph obtained by joining two vertices of one component at
/// distance at least `min_girth - 1`.
fn close_a_cycle(g: &Graph, min_girth: usize, max_edges: usize) -> Vec<Graph> {
    if g.edge_count() >= max_edges {
        return Vec::new();
    }
    let mut out = Vec::new();
    for u in 0..g.n() {
        let dist = metrics::distances_from(g, u);
        for v in u + 1..g.n() {
            if dist[v] != UNREACHABLE && dist[v] >= 2 && dist[v] + 1 >= min_girth {
                let mut h = g.clone();
                h.add_edge(u, v).expect("valid vertices");
                out.push(h);
            }
        }
    }
    out
}

/// Graphs that could share an acyclic `(n - ell)`-deck with a forest:
/// a cycle, girth above the card size, and at most `n - 1` edges.
pub fn enumerate_cyclic_candidates(params: DeckParams, budget: &Budget) -> Result<Vec<CanonicalCode>> {
    cyclic_graphs(params.n, params.card_size() + 1, params.n - 1, budget.cyclic)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stage {
    pub name: String,
    pub count: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub kind: String,
    pub n: usize,
    pub ell: usize,
    pub card_size: usize,
    pub stages: Vec<Stage>,
    /// Pairs with equal decks, ordered by code pair.
    pub witnesses: Vec<(CanonicalCode, CanonicalCode)>,
    /// Wall time; kept out of serialized output so reports stay diffable.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchReport {
    fn new(kind: &str, n: usize, card_size: usize) -> Self {
        SearchReport {
            kind: kind.to_string(),
            n,
            ell: n - card_size,
            card_size,
            stages: Vec::new(),
            witnesses: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    fn stage(&mut self, name: &str, count: usize) {
        self.stages.push(Stage { name: name.to_string(), count: count as u64 });
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} search n={} ell={} card_size={}\n",
            self.kind, self.n, self.ell, self.card_size
        );
        for s in &self.stages {
            let _ = writeln!(out, "  {}: {}", s.name, s.count);
        }
        let noun = if self.kind == "ambiguous" { "ambiguous pairs" } else { "equal-deck pairs" };
        let _ = writeln!(out, "{} {noun}", self.witnesses.len());
        for (a, b) in &self.witnesses {
            let _ = writeln!(out, "{a} {b}");
        }
        out
    }
}

fn decks_of(codes: &[CanonicalCode], j: usize) -> Vec<Deck> {
    codes.par_iter().map(|c| compute_deck(&c.decode(), j).expect("card size checked")).collect()
}

/// Witnesses are re-checked from freshly computed decks before they are
/// reported.
fn verified(a: &CanonicalCode, b: &CanonicalCode, j: usize) -> Result<()> {
    let da = compute_deck(&a.decode(), j)?;
    let db = compute_deck(&b.decode(), j)?;
    if decks_equal(&da, &db) {
        Ok(())
    } else {
        Err(Error::InconsistentInput(format!("witness pair {a} {b} failed re-verification")))
    }
}

/// All pairs of an `n`-vertex forest and an `n`-vertex graph with a cycle
/// sharing their `(n - ell)`-deck.
pub fn find_ambiguous(params: DeckParams, budget: &Budget) -> Result<SearchReport> {
    let start = Instant::now();
    let (n, j) = (params.n, params.card_size());
    Budget::check(n, budget.forests, "forest enumeration")?;
    Budget::check(n, budget.cyclic, "cyclic graph enumeration")?;
    let mut report = SearchReport::new("ambiguous", n, j);
    let cyclic = enumerate_cyclic_candidates(params, budget)?;
    report.stage("cyclic candidates", cyclic.len());
    let edge_counts: HashSet<usize> = cyclic.iter().map(|c| c.decode().edge_count()).collect();
    let forests = enumerate_forests(n, budget)?;
    report.stage("forests", forests.len());
    let forests: Vec<CanonicalCode> =
        forests.into_iter().filter(|c| edge_counts.contains(&c.decode().edge_count())).collect();
    report.stage("forests after edge-count filter", forests.len());
    let forest_decks = decks_of(&forests, j);
    let mut by_deck: HashMap<&Deck, Vec<&CanonicalCode>> = HashMap::new();
    for (code, deck) in forests.iter().zip(&forest_decks) {
        by_deck.entry(deck).or_default().push(code);
    }
    let cyclic_decks = decks_of(&cyclic, j);
    for (h, deck) in cyclic.iter().zip(&cyclic_decks) {
        if let Some(fs) = by_deck.get(deck) {
            for f in fs {
                report.witnesses.push(((*f).clone(), h.clone()));
            }
        }
    }
    report.stage("decks compared", forests.len() + cyclic.len());
    report.witnesses.sort();
    for (a, b) in &report.witnesses {
        verified(a, b, j)?;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Unordered pairs of non-isomorphic `n`-vertex trees with equal `j`-decks.
pub fn find_equal_deck_tree_pairs(n: usize, j: usize, budget: &Budget) -> Result<SearchReport> {
    let start = Instant::now();
    if j == 0 || j > n {
        return Err(Error::InvalidCardSize { j, n });
    }
    let trees = enumerate_trees(n, budget)?;
    let mut report = SearchReport::new("tree-pairs", n, j);
    report.stage("trees", trees.len());
    let decks = decks_of(&trees, j);
    let mut by_deck: HashMap<&Deck, Vec<&CanonicalCode>> = HashMap::new();
    for (code, deck) in trees.iter().zip(&decks) {
        by_deck.entry(deck).or_default().push(code);
    }
    report.stage("distinct decks", by_deck.len());
    for group in by_deck.values() {
        for (i, a) in group.iter().enumerate() {
            for b in &group[i + 1..] {
                let (a, b) = if a <= b { (a, b) } else { (b, a) };
                report.witnesses.push(((*a).clone(), (*b).clone()));
            }
        }
    }
    report.witnesses.sort();
    for (a, b) in &report.witnesses {
        verified(a, b, j)?;
    }
    report.elapsed = start.elapsed();
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CounterexampleName {
    SpinozaWest,
    Nydl,
    SplitPaths,
    ThetaIsolated,
    ChordedCycle,
    TwoCycles,
}

impl CounterexampleName {
    pub const ALL: [CounterexampleName; 6] = [
        CounterexampleName::SpinozaWest,
        CounterexampleName::Nydl,
        CounterexampleName::SplitPaths,
        CounterexampleName::ThetaIsolated,
        CounterexampleName::ChordedCycle,
        CounterexampleName::TwoCycles,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CounterexampleName::SpinozaWest => "spinoza_west",
            CounterexampleName::Nydl => "nydl",
            CounterexampleName::SplitPaths => "split_paths",
            CounterexampleName::ThetaIsolated => "theta_isolated",
            CounterexampleName::ChordedCycle => "chorded_cycle",
            CounterexampleName::TwoCycles => "two_cycles",
        }
    }
}

impl fmt::Display for CounterexampleName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CounterexampleName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CounterexampleName::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown construction {s:?}")))
    }
}

/// A named graph or pair of graphs, with the card size at which the
/// construction is stated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedConstruction {
    pub name: CounterexampleName,
    pub ell: usize,
    pub card_size: usize,
    pub graphs: Vec<Graph>,
}

fn ell_at_least(name: CounterexampleName, ell: usize, min: usize) -> Result<()> {
    if ell < min {
        return Err(Error::InvalidParameter(format!("{name} needs l >= {min}, got {ell}")));
    }
    Ok(())
}

fn parity(name: CounterexampleName, ell: usize, even: bool) -> Result<()> {
    if (ell % 2 == 0) != even {
        let want = if even { "even" } else { "odd" };
        return Err(Error::InvalidParameter(format!("{name} needs {want} l, got {ell}")));
    }
    Ok(())
}

pub fn named_counterexample(name: CounterexampleName, ell: usize) -> Result<NamedConstruction> {
    use CounterexampleName::*;
    let (card_size, graphs) = match name {
        SpinozaWest => {
            ell_at_least(name, ell, 2)?;
            let b = Graph::cycle(ell + 1)?.disjoint_union(&Graph::path(ell - 1)?)?;
            (ell, vec![Graph::path(2 * ell)?, b])
        }
        Nydl => {
            ell_at_least(name, ell, 2)?;
            let p = Graph::path(2 * ell - 1)?;
            (ell, vec![p.add_leaf(ell - 1)?, p.add_leaf(ell - 2)?])
        }
        SplitPaths => {
            ell_at_least(name, ell, 2)?;
            let a = Graph::path(ell)?.disjoint_union(&Graph::path(ell)?)?;
            let b = Graph::path(ell + 1)?.disjoint_union(&Graph::path(ell - 1)?)?;
            (ell, vec![a, b])
        }
        ThetaIsolated => {
            ell_at_least(name, ell, 4)?;
            parity(name, ell, true)?;
            // Hubs 0 and 1; four internally disjoint paths of length l/2.
            let mut g = Graph::empty(2)?;
            for _ in 0..4 {
                let mut prev = 0;
                for _ in 0..ell / 2 - 1 {
                    g = g.add_leaf(prev)?;
                    prev = g.n() - 1;
                }
                g.add_edge(prev, 1)?;
            }
            (ell - 1, vec![g.disjoint_union(&Graph::empty(1)?)?])
        }
        ChordedCycle => {
            ell_at_least(name, ell, 3)?;
            parity(name, ell, false)?;
            let len = 2 * ell - 2;
            let h = (ell - 1) / 2;
            let mut g = Graph::cycle(len)?;
            g.add_edge(0, ell - 1)?;
            g.add_edge(h, h + ell - 1)?;
            (ell - 1, vec![g.disjoint_union(&Graph::empty(1)?)?])
        }
        TwoCycles => {
            ell_at_least(name, ell, 4)?;
            let b = Graph::cycle(ell - 1)?.disjoint_union(&Graph::cycle(ell - 1)?)?;
            (ell - 2, vec![Graph::cycle(2 * ell - 2)?, b])
        }
    };
    Ok(NamedConstruction { name, ell, card_size, graphs })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum DeckClass {
    AllAcyclic { acyclic: Vec<CanonicalCode> },
    AllNonacyclic { nonacyclic: Vec<CanonicalCode> },
    Ambiguous { acyclic: Vec<CanonicalCode>, nonacyclic: Vec<CanonicalCode> },
    NoReconstruction,
}

impl DeckClass {
    pub fn label(&self) -> &'static str {
        match self {
            DeckClass::AllAcyclic { .. } => "ALL-ACYCLIC",
            DeckClass::AllNonacyclic { .. } => "ALL-NONACYCLIC",
            DeckClass::Ambiguous { .. } => "AMBIGUOUS",
            DeckClass::NoReconstruction => "NO-RECONSTRUCTION",
        }
    }
}

/// Finds every `n`-vertex graph with deck `d` and sorts them by acyclicity.
///
/// The edge count comes from the deck. When the deck is acyclic, a graph
/// with a cycle has girth above the card size, which bounds the cyclic
/// search; otherwise all graphs with that edge count are generated.
pub fn classify_deck(d: &Deck, budget: &Budget) -> Result<DeckClass> {
    let n = d.n();
    let j = d.card_size();
    if j < 2 {
        return Err(Error::InvalidCardSize { j, n });
    }
    let m = edge_count_from_deck(d)? as usize;
    let matches = |codes: Vec<CanonicalCode>| -> Vec<CanonicalCode> {
        let decks = decks_of(&codes, j);
        codes.into_iter().zip(decks).filter(|(_, e)| e == d).map(|(c, _)| c).collect()
    };
    let acyclic = if m < n {
        let forests = enumerate_forests(n, budget)?;
        matches(forests.into_iter().filter(|c| c.decode().edge_count() == m).collect())
    } else {
        Vec::new()
    };
    let cyclic = if d.is_acyclic() {
        cyclic_graphs(n, j + 1, m, budget.cyclic)?
    } else {
        cyclic_graphs(n, 3, m, budget.general)?
    };
    let nonacyclic = matches(cyclic.into_iter().filter(|c| c.decode().edge_count() == m).collect());
    Ok(match (acyclic.is_empty(), nonacyclic.is_empty()) {
        (false, false) => DeckClass::Ambiguous { acyclic, nonacyclic },
        (false, true) => DeckClass::AllAcyclic { acyclic },
        (true, false) => DeckClass::AllNonacyclic { nonacyclic },
        (true, true) => DeckClass::NoReconstruction,
    })
}
