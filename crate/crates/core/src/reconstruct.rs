//! Quantities recovered from a deck: maximal-subgraph counts, components,
//! degree lists, and numbers of `j`-centers and `j`-central edges.

use std::collections::{BTreeMap, HashMap};
use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalCode};
use crate::deck::{binomial, cached_canonical_form, count_induced_direct, count_induced_from_deck, edge_count_from_deck, Deck};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::metrics;
use crate::vines::{k_from_deck, KValue};

/// A family of graphs closed under the unique-maximal property in the
/// hosts where it is used.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// Trees of diameter `2j`.
    Vines(usize),
    /// Trees of diameter `2j + 1`.
    Evines(usize),
    Connected,
}

impl Family {
    pub fn contains(self, g: &Graph) -> bool {
        match self {
            Family::Connected => metrics::is_connected(g),
            Family::Vines(j) => tree_with_diameter(g, 2 * j),
            Family::Evines(j) => tree_with_diameter(g, 2 * j + 1),
        }
    }
}

fn tree_with_diameter(g: &Graph, d: usize) -> bool {
    g.n() > d && metrics::is_tree(g) && metrics::diameter(g) == Ok(d)
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Vines(j) => write!(f, "vines-{j}"),
            Family::Evines(j) => write!(f, "evines-{j}"),
            Family::Connected => f.write_str("connected"),
        }
    }
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "connected" {
            return Ok(Family::Connected);
        }
        let parse = |rest: &str| {
            rest.parse::<usize>()
                .map_err(|_| Error::InvalidParameter(format!("bad family {s:?}")))
        };
        if let Some(rest) = s.strip_prefix("vines-") {
            Ok(Family::Vines(parse(rest)?))
        } else if let Some(rest) = s.strip_prefix("evines-") {
            Ok(Family::Evines(parse(rest)?))
        } else {
            Err(Error::InvalidParameter(format!("bad family {s:?}")))
        }
    }
}

/// Known values of `m(F, G)` for family members with at least `n - ell`
/// vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Boundary {
    /// Every such member has `m = 0`.
    AllZero,
    /// Listed values; members seen as cards must be listed.
    Explicit(BTreeMap<CanonicalCode, u64>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountRow {
    /// `s(F, G)`; `None` above the card size.
    pub s: Option<u64>,
    /// `m(F, G)`.
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountingTable {
    pub family: Family,
    pub n: usize,
    pub card_size: usize,
    pub rows: BTreeMap<CanonicalCode, CountRow>,
}

impl CountingTable {
    pub fn m(&self, code: &CanonicalCode) -> u64 {
        self.rows.get(code).map_or(0, |r| r.m)
    }

    pub fn total_m(&self) -> u64 {
        self.rows.values().map(|r| r.m).sum()
    }

    /// Codes with positive `m`, i.e. the maximal members present.
    pub fn maximal(&self) -> BTreeMap<CanonicalCode, u64> {
        self.rows.iter().filter(|(_, r)| r.m > 0).map(|(c, r)| (c.clone(), r.m)).collect()
    }

    /// `COUNTS n=<n> j=<j> family=<family>` then `<code> <s> <m>` lines,
    /// `s` written as `-` when unknown.
    pub fn to_text(&self) -> String {
        let mut out = format!("COUNTS n={} j={} family={}\n", self.n, self.card_size, self.family);
        for (code, row) in &self.rows {
            match row.s {
                Some(s) => writeln!(out, "{code} {s} {}", row.m),
                None => writeln!(out, "{code} - {}", row.m),
            }
            .expect("writing to a string");
        }
        out
    }
}

/// Distinct family members induced in some card.
fn members_in_cards(d: &Deck, family: Family) -> Vec<CanonicalCode> {
    let mut seen: BTreeMap<CanonicalCode, ()> = BTreeMap::new();
    for code in d.cards().keys() {
        let card = code.decode();
        for mask in 1u64..1 << card.n() {
            let sub = card.induced_unchecked(VertexSet(mask));
            if family.contains(&sub) {
                seen.insert(cached_canonical_form(&sub), ());
            }
        }
    }
    seen.into_keys().collect()
}

/// Solves `s(F) = sum_H s(F, H) m(H)` for `m` over the family members
/// visible in the deck, from the largest members down.
pub fn solve_maximal_counts(d: &Deck, family: Family, boundary: &Boundary) -> Result<CountingTable> {
    let big = d.card_size();
    let mut graphs: BTreeMap<CanonicalCode, Graph> = BTreeMap::new();
    for code in members_in_cards(d, family) {
        let g = code.decode();
        graphs.insert(code, g);
    }
    let mut rows: BTreeMap<CanonicalCode, CountRow> = BTreeMap::new();
    match boundary {
        Boundary::AllZero => {}
        Boundary::Explicit(map) => {
            for (code, &m) in map {
                let g = code.decode();
                if g.n() < big || !family.contains(&g) {
                    return Err(Error::InconsistentInput(format!(
                        "boundary entry {code} is not a {family} member with at least {big} vertices"
                    )));
                }
                rows.insert(code.clone(), CountRow { s: (g.n() == big).then(|| d.multiplicity(code)), m });
                graphs.insert(code.clone(), g);
            }
        }
    }
    let mut order: Vec<(usize, CanonicalCode)> = graphs.iter().map(|(c, g)| (g.n(), c.clone())).collect();
    order.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
    for (size, code) in &order {
        if *size < big || rows.contains_key(code) {
            continue;
        }
        // A member of card size seen in the deck but absent from the boundary.
        match boundary {
            Boundary::AllZero => {
                rows.insert(code.clone(), CountRow { s: Some(d.multiplicity(code)), m: 0 });
            }
            Boundary::Explicit(_) => return Err(Error::MissingBoundary(code.to_string())),
        }
    }
    let mut memo: HashMap<(CanonicalCode, CanonicalCode), u64> = HashMap::new();
    for (size, code) in &order {
        if *size >= big {
            continue;
        }
        let f = &graphs[code];
        let s = count_induced_from_deck(d, f)?;
        let mut rest = s as i128;
        for (other, row) in &rows {
            if row.m == 0 {
                continue;
            }
            let h = &graphs[other];
            if h.n() <= *size {
                continue;
            }
            let key = (code.clone(), other.clone());
            let sfh = *memo.entry(key).or_insert_with(|| count_induced_direct(h, f));
            rest -= sfh as i128 * row.m as i128;
        }
        if rest < 0 {
            return Err(Error::InconsistentInput(format!(
                "solved count for {code} is negative ({rest}); members do not lie in unique maximal members"
            )));
        }
        rows.insert(code.clone(), CountRow { s: Some(s), m: rest as u64 });
    }
    Ok(CountingTable { family, n: d.n(), card_size: big, rows })
}

/// Maximal family members of `g` counted directly. A member contained in a
/// larger member is contained in one with a single extra vertex for these
/// families, so only one-vertex extensions are tested.
pub fn maximal_counts_direct(g: &Graph, family: Family) -> BTreeMap<CanonicalCode, u64> {
    let n = g.n();
    let mut member = vec![false; 1usize << n];
    for mask in 1u64..1 << n {
        member[mask as usize] = family.contains(&g.induced_unchecked(VertexSet(mask)));
    }
    let mut out: BTreeMap<CanonicalCode, u64> = BTreeMap::new();
    for mask in 1u64..1 << n {
        if !member[mask as usize] {
            continue;
        }
        let extendable = (0..n).any(|v| mask >> v & 1 == 0 && member[(mask | 1 << v) as usize]);
        if !extendable {
            *out.entry(cached_canonical_form(&g.induced_unchecked(VertexSet(mask)))).or_insert(0) += 1;
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ComponentsOutcome {
    /// The multiset of components.
    Components(BTreeMap<CanonicalCode, u64>),
    /// Some component has more than `n - ell` vertices.
    NotApplicable,
}

/// Components of the source graph, when none has more than `n - ell`
/// vertices (equivalently, at most one card is connected).
pub fn components_from_deck(d: &Deck) -> Result<ComponentsOutcome> {
    d.params().require_above_threshold()?;
    let connected: BTreeMap<CanonicalCode, u64> = d
        .cards()
        .iter()
        .filter(|(c, _)| metrics::is_connected(&c.decode()))
        .map(|(c, &m)| (c.clone(), m))
        .collect();
    if connected.values().sum::<u64>() > 1 {
        return Ok(ComponentsOutcome::NotApplicable);
    }
    let table = solve_maximal_counts(d, Family::Connected, &Boundary::Explicit(connected))?;
    let comps = table.maximal();
    let covered: u64 = comps.iter().map(|(c, &m)| c.order() as u64 * m).sum();
    if covered != d.n() as u64 {
        return Err(Error::InconsistentInput(format!(
            "components cover {covered} vertices, expected {}",
            d.n()
        )));
    }
    Ok(ComponentsOutcome::Components(comps))
}

fn star_code(leaves: usize) -> CanonicalCode {
    canonical_form(&Graph::star(leaves).expect("star within capacity"))
}

/// Degree list (descending) of any graph with this deck.
///
/// Stars on at least three vertices are the 1-vines. The big vertices, of
/// degree at least `n - ell - 1`, are read off the number of star cards,
/// which feeds the boundary of the counting solver; degree-1 and degree-0
/// counts follow from the edge count.
pub fn degree_list_from_deck(d: &Deck) -> Result<Vec<usize>> {
    let (n, ell) = (d.n(), d.ell());
    if (n, ell) == (5, 2) {
        return Err(Error::ExcludedCase { n, ell });
    }
    d.params().require_above_threshold()?;
    if !d.is_acyclic() {
        return Err(Error::NotAcyclicDeck);
    }
    if ell == 0 {
        let (code, _) = d.cards().iter().next().expect("decks are nonempty");
        return Ok(code.decode().degree_sequence());
    }
    let edges = edge_count_from_deck(d)? as usize;
    if ell == 1 {
        let mut degrees = Vec::with_capacity(n);
        for (code, &mult) in d.cards() {
            let e = code.decode().edge_count();
            let deg = edges.checked_sub(e).ok_or_else(|| {
                Error::InconsistentInput(format!("card {code} has more edges than the whole graph"))
            })?;
            degrees.extend(std::iter::repeat(deg).take(mult as usize));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        return Ok(degrees);
    }
    let big = n - ell;
    let sigma = d.multiplicity(&star_code(big - 1));
    // Number of big vertices of each degree.
    let mut big_degrees: BTreeMap<usize, u64> = BTreeMap::new();
    if sigma == 0 {
    } else if sigma == 2 {
        big_degrees.insert(big - 1, 2);
    } else if n == 2 * ell + 1 && sigma == ell as u64 + 2 {
        big_degrees.insert(big - 1, 1);
        big_degrees.insert(big, 1);
    } else {
        let mut found = None;
        for deg in big - 1..n {
            if binomial(deg, big - 1)? == sigma {
                found = Some(deg);
                break;
            }
        }
        let deg = found.ok_or_else(|| {
            Error::InconsistentInput(format!("{sigma} star cards match no big-vertex configuration"))
        })?;
        big_degrees.insert(deg, 1);
    }
    let boundary: BTreeMap<CanonicalCode, u64> = (big - 1..n)
        .map(|deg| (star_code(deg), big_degrees.get(&deg).copied().unwrap_or(0)))
        .collect();
    let table = solve_maximal_counts(d, Family::Vines(1), &Boundary::Explicit(boundary))?;
    let mut degrees = Vec::with_capacity(n);
    let mut degree_sum = 0usize;
    for (code, row) in &table.rows {
        let deg = code.order() - 1;
        degrees.extend(std::iter::repeat(deg).take(row.m as usize));
        degree_sum += deg * row.m as usize;
    }
    let ones = (2 * edges).checked_sub(degree_sum).filter(|&x| x + degrees.len() <= n).ok_or_else(|| {
        Error::InconsistentInput("degrees of at least 2 exceed what the edge count allows".into())
    })?;
    let zeros = n - degrees.len() - ones;
    degrees.extend(std::iter::repeat(1).take(ones));
    degrees.extend(std::iter::repeat(0).take(zeros));
    degrees.sort_unstable_by(|a, b| b.cmp(a));
    Ok(degrees)
}

fn defined_k(d: &Deck) -> Result<usize> {
    match k_from_deck(d)? {
        KValue::Defined(k) => Ok(k),
        KValue::Undefined => Err(Error::OutOfValidityRange("k is undefined for this deck".into())),
    }
}

/// Number of `j`-centers shared by all reconstructions, for `j <= k`, or
/// `j = k + 1` when no connected card has diameter `2k + 2`.
pub fn j_center_count_from_deck(d: &Deck, j: usize) -> Result<u64> {
    let k = defined_k(d)?;
    if j > k + 1 {
        return Err(Error::OutOfValidityRange(format!("j = {j} exceeds k + 1 = {}", k + 1)));
    }
    if j == k + 1 {
        let blocked = d.cards().keys().any(|c| {
            let card = c.decode();
            metrics::diameter(&card) == Ok(2 * k + 2)
        });
        if blocked {
            return Err(Error::OutOfValidityRange(format!(
                "j = k + 1 = {j} needs no card of diameter {}",
                2 * k + 2
            )));
        }
    }
    Ok(solve_maximal_counts(d, Family::Vines(j), &Boundary::AllZero)?.total_m())
}

/// Number of `j`-central edges shared by all reconstructions, `j <= k`.
pub fn j_central_edge_count_from_deck(d: &Deck, j: usize) -> Result<u64> {
    let k = defined_k(d)?;
    if j > k {
        return Err(Error::OutOfValidityRange(format!("j = {j} exceeds k = {k}")));
    }
    Ok(solve_maximal_counts(d, Family::Evines(j), &Boundary::AllZero)?.total_m())
}
