//! Named verification campaigns run by `deckforge verify`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use deckforge::deck::{binomial, derive_subdeck};
use deckforge::reconstruct::{degree_list_from_deck, maximal_counts_direct, solve_maximal_counts, Boundary, Family};
use deckforge::search::{
    enumerate_cyclic_candidates, enumerate_forests, enumerate_trees, find_ambiguous, find_equal_deck_tree_pairs,
    named_counterexample, Budget, CounterexampleName,
};
use deckforge::trees::{full_paths_count, is_ell_spiderly, run_marking_all_centers};
use deckforge::vines::{k_from_deck, k_of_graph};
use deckforge::{
    canonical_form, compute_deck, metrics, CanonicalCode, Deck, DeckParams, Error, Graph, KValue, Result, VertexSet,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Figure1,
    Ambiguity,
    Sharpness,
    TreePairs,
    Degrees,
    Counting,
    K,
    GirthDiam,
    Marking,
    Spiderly,
    Decks,
}

impl Suite {
    pub const ALL: [Suite; 11] = [
        Suite::Figure1,
        Suite::Ambiguity,
        Suite::Sharpness,
        Suite::TreePairs,
        Suite::Degrees,
        Suite::Counting,
        Suite::K,
        Suite::GirthDiam,
        Suite::Marking,
        Suite::Spiderly,
        Suite::Decks,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Figure1 => "figure1",
            Suite::Ambiguity => "ambiguity",
            Suite::Sharpness => "sharpness",
            Suite::TreePairs => "tree-pairs",
            Suite::Degrees => "degrees",
            Suite::Counting => "counting",
            Suite::K => "k",
            Suite::GirthDiam => "girth-diam",
            Suite::Marking => "marking",
            Suite::Spiderly => "spiderly",
            Suite::Decks => "decks",
        }
    }

    /// Largest vertex count the suite visits by default.
    pub fn default_limit(self) -> usize {
        match self {
            Suite::Figure1 => 5,
            Suite::Sharpness => 10,
            Suite::Ambiguity | Suite::GirthDiam | Suite::Marking => 11,
            Suite::TreePairs => 13,
            Suite::Degrees => 10,
            Suite::Counting | Suite::K | Suite::Decks => 9,
            Suite::Spiderly => 12,
        }
    }
}

/// Parses one suite name, or `all`.
pub fn parse_suites(s: &str) -> Result<Vec<Suite>> {
    if s == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Suite::from_str(s).map(|x| vec![x])
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub limit: usize,
    pub checked: u64,
    /// First few failures, described.
    pub failures: Vec<String>,
    pub failure_count: u64,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }
}

const KEPT_FAILURES: usize = 10;

#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<String>,
    failure_count: u64,
}

impl Tally {
    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    fn merge(&mut self, other: Tally) {
        self.checked += other.checked;
        self.failure_count += other.failure_count;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(f);
            }
        }
    }
}

/// Merges per-item tallies in item order, so output is schedule independent.
fn par_tally<T: Sync>(items: &[T], f: impl Fn(&T) -> Result<Tally> + Sync + Send) -> Result<Tally> {
    let parts: Vec<Result<Tally>> = items.par_iter().map(f).collect();
    let mut out = Tally::default();
    for p in parts {
        out.merge(p?);
    }
    Ok(out)
}

pub fn run_suite(suite: Suite, limit: Option<usize>, budget: &Budget) -> Result<SuiteResult> {
    let limit = limit.unwrap_or(suite.default_limit());
    let tally = match suite {
        Suite::Figure1 => figure1(budget)?,
        Suite::Ambiguity => ambiguity(limit, budget)?,
        Suite::Sharpness => sharpness()?,
        Suite::TreePairs => tree_pairs(limit, budget)?,
        Suite::Degrees => degrees(limit, budget)?,
        Suite::Counting => counting(limit, budget)?,
        Suite::K => k_agreement(limit, budget)?,
        Suite::GirthDiam => girth_diam(limit, budget)?,
        Suite::Marking => marking(limit, budget)?,
        Suite::Spiderly => spiderly(limit, budget)?,
        Suite::Decks => decks(limit, budget)?,
    };
    Ok(SuiteResult { suite, limit, checked: tally.checked, failures: tally.failures, failure_count: tally.failure_count })
}

pub fn render_table(results: &[SuiteResult]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<12} {:>6} {:>10} {:>9}  status", "suite", "limit", "checked", "failures");
    for r in results {
        let status = if r.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{:<12} {:>6} {:>10} {:>9}  {status}",
            r.suite.name(),
            r.limit,
            r.checked,
            r.failure_count
        );
        for f in &r.failures {
            let _ = writeln!(out, "    {f}");
        }
    }
    out
}

fn decode_all(codes: &[CanonicalCode]) -> Vec<Graph> {
    codes.iter().map(|c| c.decode()).collect()
}

/// Pairs `(n, ell)` with `2 ell + 1 <= n <= limit`, `ell >= 1`.
fn above_threshold(min_n: usize, limit: usize) -> Vec<DeckParams> {
    let mut out = Vec::new();
    for n in min_n.max(3)..=limit {
        for ell in 1..=(n - 1) / 2 {
            out.push(DeckParams::new(n, ell).expect("ell < n"));
        }
    }
    out
}

/// Cyclic candidates whose deck is acyclic, with those decks.
fn acyclic_deck_candidates(params: DeckParams, budget: &Budget) -> Result<Vec<(Graph, Deck)>> {
    let graphs = decode_all(&enumerate_cyclic_candidates(params, budget)?);
    Ok(graphs
        .into_par_iter()
        .map(|g| {
            let d = compute_deck(&g, params.card_size()).expect("card size below n");
            (g, d)
        })
        .filter(|(_, d)| d.is_acyclic())
        .collect())
}

fn chair() -> Graph {
    Graph::spider(&[1, 1, 2]).expect("small spider")
}

fn c4_plus_k1() -> Graph {
    Graph::cycle(4).and_then(|c| c.disjoint_union(&Graph::empty(1)?)).expect("five vertices")
}

fn figure1(budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let equal = compute_deck(&chair(), 3)? == compute_deck(&c4_plus_k1(), 3)?;
    t.check(equal, || "chair and C4+K1 have different 3-decks".into());
    let r = find_ambiguous(DeckParams::new(5, 2)?, budget)?;
    let expected = vec![(canonical_form(&chair()), canonical_form(&c4_plus_k1()))];
    t.check(r.witnesses == expected, || format!("ambiguous pairs at (5,2): {:?}", r.witnesses));
    Ok(t)
}

fn ambiguity(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for params in above_threshold(3, limit) {
        let r = find_ambiguous(params, budget)?;
        let expect_some = (params.n, params.ell) == (5, 2);
        t.check(r.witnesses.is_empty() != expect_some, || {
            format!("n={} ell={}: {} ambiguous pairs", params.n, params.ell, r.witnesses.len())
        });
    }
    Ok(t)
}

fn sharpness() -> Result<Tally> {
    use CounterexampleName::*;
    let mut t = Tally::default();
    let cases = [(SpinozaWest, 2..=5), (Nydl, 2..=5), (SplitPaths, 3..=5), (TwoCycles, 5..=5)];
    for (name, range) in cases {
        for ell in range {
            let c = named_counterexample(name, ell)?;
            let equal = compute_deck(&c.graphs[0], c.card_size)? == compute_deck(&c.graphs[1], c.card_size)?;
            t.check(equal, || format!("{name} l={ell}: decks differ at card size {}", c.card_size));
        }
    }
    for ell in 2..=5 {
        let c = named_counterexample(SpinozaWest, ell)?;
        let differ = compute_deck(&c.graphs[0], ell + 1)? != compute_deck(&c.graphs[1], ell + 1)?;
        t.check(differ, || format!("spinoza_west l={ell}: ({})-decks agree", ell + 1));
    }
    Ok(t)
}

fn tree_pairs(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let n = limit.min(13);
    let j = n.div_ceil(2);
    let r = find_equal_deck_tree_pairs(n, j, budget)?;
    if n == 13 {
        t.check(!r.witnesses.is_empty(), || "no 13-vertex trees share a 7-deck".into());
    }
    for (a, b) in &r.witnesses {
        let equal = compute_deck(&a.decode(), j)? == compute_deck(&b.decode(), j)?;
        t.check(equal && a != b, || format!("pair {a} {b} fails re-verification"));
    }
    Ok(t)
}

fn degrees(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for params in above_threshold(3, limit) {
        if (params.n, params.ell) == (5, 2) {
            continue;
        }
        let forests = decode_all(&enumerate_forests(params.n, budget)?);
        t.merge(par_tally(&forests, |g| {
            let mut t = Tally::default();
            let d = compute_deck(g, params.card_size())?;
            let got = degree_list_from_deck(&d)?;
            t.check(got == g.degree_sequence(), || format!("{} at ell={}", canonical_form(g), params.ell));
            Ok(t)
        })?);
    }
    for (n, ell) in [(7, 3), (9, 4)] {
        if n > limit {
            continue;
        }
        for (g, d) in acyclic_deck_candidates(DeckParams::new(n, ell)?, budget)? {
            let got = degree_list_from_deck(&d)?;
            t.check(got == g.degree_sequence(), || format!("candidate {} at ell={ell}", canonical_form(&g)));
        }
    }
    Ok(t)
}

/// Families whose maximal members are unique in a forest with deck `d`.
fn counting_families(d: &Deck) -> Result<Vec<Family>> {
    let mut out = vec![Family::Vines(1), Family::Connected];
    if let KValue::Defined(k) = k_from_deck(d)? {
        out.extend((2..=k).map(Family::Vines));
    }
    Ok(out)
}

fn counting(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for params in above_threshold(3, limit) {
        let forests = decode_all(&enumerate_forests(params.n, budget)?);
        t.merge(par_tally(&forests, |g| {
            let mut t = Tally::default();
            let big = params.card_size();
            let d = compute_deck(g, big)?;
            for family in counting_families(&d)? {
                let direct = maximal_counts_direct(g, family);
                let mut boundary: BTreeMap<CanonicalCode, u64> =
                    direct.iter().filter(|(c, _)| c.order() >= big).map(|(c, &m)| (c.clone(), m)).collect();
                for code in d.cards().keys() {
                    if family.contains(&code.decode()) {
                        boundary.entry(code.clone()).or_insert(0);
                    }
                }
                let solved = solve_maximal_counts(&d, family, &Boundary::Explicit(boundary))?;
                t.check(solved.maximal() == direct, || {
                    format!("{} {family} at ell={}", canonical_form(g), params.ell)
                });
            }
            Ok(t)
        })?);
    }
    Ok(t)
}

fn k_agreement(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for params in above_threshold(3, limit) {
        let forests = decode_all(&enumerate_forests(params.n, budget)?);
        t.merge(par_tally(&forests, |g| {
            let mut t = Tally::default();
            let d = compute_deck(g, params.card_size())?;
            let (a, b) = (k_from_deck(&d)?, k_of_graph(g, params)?);
            t.check(a == b, || format!("{}: deck k={a}, graph k={b}", canonical_form(g)));
            Ok(t)
        })?);
    }
    for (n, ell) in [(7, 3), (9, 4)] {
        if n > limit {
            continue;
        }
        let params = DeckParams::new(n, ell)?;
        for (g, d) in acyclic_deck_candidates(params, budget)? {
            let (a, b) = (k_from_deck(&d)?, k_of_graph(&g, params)?);
            t.check(a == b, || format!("candidate {}: deck k={a}, graph k={b}", canonical_form(&g)));
        }
    }
    Ok(t)
}

fn girth_diam(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for params in above_threshold(3, limit) {
        for (g, d) in acyclic_deck_candidates(params, budget)? {
            let KValue::Defined(k) = k_from_deck(&d)? else { continue };
            let girth = metrics::girth(&g);
            t.check(girth.at_least(2 * k + 4), || format!("{}: girth {girth:?} with k={k}", canonical_form(&g)));
            let diams: Vec<usize> =
                d.cards().keys().filter_map(|c| metrics::diameter(&c.decode()).ok()).collect();
            if !diams.is_empty() {
                let window = diams.iter().all(|&x| x >= 2 * k + 2) && diams.iter().any(|&x| x <= 2 * k + 3);
                t.check(window, || format!("{}: card diameters {diams:?} with k={k}", canonical_form(&g)));
            }
        }
    }
    Ok(t)
}

fn marking(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    for n in 4..=limit {
        let forests = decode_all(&enumerate_forests(n, budget)?);
        t.merge(par_tally(&forests, |f| {
            let mut t = Tally::default();
            for mask in 1u64..1 << n {
                let card = VertexSet(mask);
                let c = f.induced_subgraph(card)?;
                let Ok(radius) = metrics::radius(&c) else { continue };
                if radius < 2 {
                    continue;
                }
                for r in run_marking_all_centers(f, card, radius - 1)? {
                    t.check(r.within_bound && r.equality_clause != Some(false), || {
                        format!("{} card {mask:#b}: {} centers, bound {}", canonical_form(f), r.center_count, r.bound)
                    });
                }
            }
            Ok(t)
        })?);
    }
    Ok(t)
}

fn spiderly(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut t = Tally::default();
    let s1111 = canonical_form(&Graph::spider(&[1, 1, 1, 1])?);
    for params in above_threshold(3, limit) {
        let trees = decode_all(&enumerate_trees(params.n, budget)?);
        t.merge(par_tally(&trees, |tree| {
            let mut t = Tally::default();
            if is_ell_spiderly(tree, params)?.is_some() {
                let paths = full_paths_count(tree, params)?;
                let exception = params.ell == 2 && canonical_form(tree) == s1111;
                let ok = if exception { paths == 6 } else { paths <= params.ell as u64 + 3 };
                t.check(ok, || format!("{} at ell={}: {paths} full paths", canonical_form(tree), params.ell));
            }
            Ok(t)
        })?);
    }
    Ok(t)
}

fn subdeck_checks(g: &Graph) -> Result<Tally> {
    let mut t = Tally::default();
    let mut upper = compute_deck(g, g.n())?;
    for j in (1..g.n()).rev() {
        let direct = compute_deck(g, j)?;
        let derived = derive_subdeck(&upper)?;
        t.check(derived == direct, || format!("{}: derived {j}-deck differs", canonical_form(g)));
        t.check(direct.total() == binomial(g.n(), j)?, || format!("{}: {j}-deck total", canonical_form(g)));
        upper = direct;
    }
    Ok(t)
}

/// Seed for the random part of the deck suite.
pub const DECK_SUITE_SEED: u64 = 0x5eed_dec5;

fn decks(limit: usize, budget: &Budget) -> Result<Tally> {
    let mut graphs = Vec::new();
    for n in 1..=limit.min(budget.forests) {
        graphs.extend(decode_all(&enumerate_forests(n, budget)?));
    }
    for params in above_threshold(3, limit) {
        graphs.extend(decode_all(&enumerate_cyclic_candidates(params, budget)?));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(DECK_SUITE_SEED);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=12);
        let p = rng.gen_range(0.05..0.95);
        let mut g = Graph::empty(n)?;
        for u in 0..n {
            for v in u + 1..n {
                if rng.gen_bool(p) {
                    g.add_edge(u, v)?;
                }
            }
        }
        graphs.push(g);
    }
    par_tally(&graphs, subdeck_checks)
}
