//! Decks: the multiset of `j`-vertex induced subgraphs of a graph, keyed by
//! canonical code, plus the counting identities a deck supports.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalCode};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::metrics;

/// Vertex count `n` and number of deleted vertices `ell`; cards have
/// `n - ell` vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DeckParams {
    pub n: usize,
    pub ell: usize,
}

impl DeckParams {
    pub fn new(n: usize, ell: usize) -> Result<Self> {
        if n == 0 || ell >= n {
            return Err(Error::InvalidParameter(format!("need 0 <= ell < n, got n = {n}, ell = {ell}")));
        }
        Ok(DeckParams { n, ell })
    }

    pub fn card_size(self) -> usize {
        self.n - self.ell
    }

    /// `n >= 2 ell + 1`, the range of the recognizability results.
    pub fn above_threshold(self) -> bool {
        self.n > 2 * self.ell
    }

    pub fn require_above_threshold(self) -> Result<()> {
        if self.above_threshold() {
            Ok(())
        } else {
            Err(Error::OutOfValidityRange(format!(
                "requires n >= 2l + 1, got n = {}, l = {}",
                self.n, self.ell
            )))
        }
    }
}

/// Binomial coefficient with overflow checking.
pub fn binomial(n: usize, k: usize) -> Result<u64> {
    if k > n {
        return Ok(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return Err(Error::Overflow("computing a binomial coefficient"));
        }
    }
    Ok(acc as u64)
}

/// All `k`-subsets of `0..n`, in increasing bitmask order.
pub fn subsets_of_size(n: usize, k: usize) -> impl Iterator<Item = VertexSet> {
    let limit: u128 = 1u128 << n;
    let mut cur: u128 = if k > n { limit } else { (1u128 << k) - 1 };
    std::iter::from_fn(move || {
        if cur == 0 {
            // The empty set, once.
            cur = limit;
            return Some(VertexSet::EMPTY);
        }
        if cur >= limit {
            return None;
        }
        let out = VertexSet(cur as u64);
        // Gosper's hack.
        let c = cur & cur.wrapping_neg();
        let r = cur + c;
        cur = (((r ^ cur) >> 2) / c) | r;
        Some(out)
    })
}

const CACHE_LIMIT: usize = 1 << 20;

thread_local! {
    static CODE_CACHE: RefCell<HashMap<(u8, u128), CanonicalCode>> = RefCell::new(HashMap::new());
}

fn packed_upper_triangle(g: &Graph) -> u128 {
    let mut key = 0u128;
    let mut bit = 0;
    for j in 1..g.n() {
        let row = g.neighbors(j).bits() as u128 & ((1u128 << j) - 1);
        key |= row << bit;
        bit += j;
    }
    key
}

/// [`canonical_form`] with a per-thread memo keyed by the labeled graph.
/// Used for the many small cards produced while building decks.
pub fn cached_canonical_form(g: &Graph) -> CanonicalCode {
    if g.n() > 16 {
        return canonical_form(g);
    }
    let key = (g.n() as u8, packed_upper_triangle(g));
    if let Some(code) = CODE_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return code;
    }
    let code = canonical_form(g);
    CODE_CACHE.with(|c| {
        let mut c = c.borrow_mut();
        if c.len() >= CACHE_LIMIT {
            c.clear();
        }
        c.insert(key, code.clone());
    });
    code
}

/// The `j`-deck of an `n`-vertex graph.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Deck {
    n: usize,
    card_size: usize,
    cards: BTreeMap<CanonicalCode, u64>,
}

impl Deck {
    /// Assembles a deck from its parts, checking card sizes, positivity and
    /// that the multiplicities add up to `C(n, j)`.
    pub fn from_cards(n: usize, card_size: usize, cards: BTreeMap<CanonicalCode, u64>) -> Result<Self> {
        if card_size == 0 || card_size > n {
            return Err(Error::InvalidCardSize { j: card_size, n });
        }
        let mut total: u64 = 0;
        for (code, &mult) in &cards {
            if code.order() != card_size {
                return Err(Error::InconsistentDeck(format!(
                    "card {code} has {} vertices, expected {card_size}",
                    code.order()
                )));
            }
            if mult == 0 {
                return Err(Error::InconsistentDeck(format!("card {code} has multiplicity zero")));
            }
            total = total.checked_add(mult).ok_or(Error::Overflow("summing multiplicities"))?;
        }
        let expected = binomial(n, card_size)?;
        if total != expected {
            return Err(Error::InconsistentDeck(format!(
                "total multiplicity {total} differs from C({n}, {card_size}) = {expected}"
            )));
        }
        Ok(Deck { n, card_size, cards })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn card_size(&self) -> usize {
        self.card_size
    }

    /// Number of deleted vertices, `n - j`.
    pub fn ell(&self) -> usize {
        self.n - self.card_size
    }

    pub fn params(&self) -> DeckParams {
        DeckParams { n: self.n, ell: self.ell() }
    }

    pub fn cards(&self) -> &BTreeMap<CanonicalCode, u64> {
        &self.cards
    }

    pub fn multiplicity(&self, code: &CanonicalCode) -> u64 {
        self.cards.get(code).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.cards.values().sum()
    }

    /// Every card is a forest.
    pub fn is_acyclic(&self) -> bool {
        self.cards.keys().all(|c| metrics::is_forest(&c.decode()))
    }

    /// `DECK n=<n> j=<j>` followed by `<code> <multiplicity>` lines in code order.
    pub fn to_text(&self) -> String {
        let mut out = format!("DECK n={} j={}\n", self.n, self.card_size);
        for (code, mult) in &self.cards {
            let _ = writeln!(out, "{code} {mult}");
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.split_inclusive('\n');
        let header = lines.next().unwrap_or("");
        let (n, j) = parse_header(header.trim_end(), "DECK")?;
        let mut cards = BTreeMap::new();
        let mut offset = header.len();
        for line in lines {
            let body = line.trim_end();
            if !body.is_empty() {
                let mut parts = body.split(' ');
                let (Some(code), Some(mult), None) = (parts.next(), parts.next(), parts.next()) else {
                    return Err(Error::Parse { offset, message: format!("expected `<code> <multiplicity>`, got {body:?}") });
                };
                let code = CanonicalCode::parse(code).map_err(|e| relocate(e, offset))?;
                let mult: u64 = mult.parse().map_err(|_| Error::Parse {
                    offset: offset + body.find(' ').unwrap_or(0) + 1,
                    message: format!("bad multiplicity {mult:?}"),
                })?;
                if cards.insert(code.clone(), mult).is_some() {
                    return Err(Error::Parse { offset, message: format!("duplicate card {code}") });
                }
            }
            offset += line.len();
        }
        Deck::from_cards(n, j, cards)
    }
}

fn relocate(e: Error, base: usize) -> Error {
    match e {
        Error::Parse { offset, message } => Error::Parse { offset: base + offset, message },
        other => other,
    }
}

/// Parses `<TAG> n=<n> j=<j>` (trailing fields ignored).
pub(crate) fn parse_header(line: &str, tag: &str) -> Result<(usize, usize)> {
    let bad = |message: String| Error::Parse { offset: 0, message };
    let mut parts = line.split_whitespace();
    if parts.next() != Some(tag) {
        return Err(bad(format!("expected header starting with {tag}")));
    }
    let mut field = |name: &str| -> Result<usize> {
        let part = parts.next().ok_or_else(|| bad(format!("missing {name}=")))?;
        part.strip_prefix(name)
            .and_then(|v| v.strip_prefix('='))
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad(format!("malformed field {part:?}")))
    };
    let n = field("n")?;
    let j = field("j")?;
    Ok((n, j))
}

pub fn compute_deck(g: &Graph, j: usize) -> Result<Deck> {
    let n = g.n();
    if j == 0 || j > n {
        return Err(Error::InvalidCardSize { j, n });
    }
    let mut cards: BTreeMap<CanonicalCode, u64> = BTreeMap::new();
    let mut counts: HashMap<CanonicalCode, u64> = HashMap::new();
    for s in subsets_of_size(n, j) {
        let card = g.induced_unchecked(s);
        *counts.entry(cached_canonical_form(&card)).or_insert(0) += 1;
    }
    cards.extend(counts);
    Ok(Deck { n, card_size: j, cards })
}

pub fn decks_equal(a: &Deck, b: &Deck) -> bool {
    a == b
}

/// The `(j-1)`-deck implied by a `j`-deck: each `(j-1)`-subset lies in
/// exactly `n - j + 1` of the `j`-subsets.
pub fn derive_subdeck(d: &Deck) -> Result<Deck> {
    let j = d.card_size;
    if j < 2 {
        return Err(Error::InvalidCardSize { j, n: d.n });
    }
    let mut acc: HashMap<CanonicalCode, u64> = HashMap::new();
    for (code, &mult) in &d.cards {
        let card = code.decode();
        for v in 0..j {
            let mut s = card.vertices();
            s.remove(v);
            let sub = cached_canonical_form(&card.induced_unchecked(s));
            let slot = acc.entry(sub).or_insert(0);
            *slot = slot.checked_add(mult).ok_or(Error::Overflow("deriving a subdeck"))?;
        }
    }
    let divisor = (d.n - j + 1) as u64;
    let mut cards = BTreeMap::new();
    for (code, total) in acc {
        if total % divisor != 0 {
            return Err(Error::InconsistentDeck(format!(
                "card {code} occurs {total} times among deletions, not a multiple of {divisor}"
            )));
        }
        cards.insert(code, total / divisor);
    }
    Deck::from_cards(d.n, j - 1, cards)
}

/// `s(F, G)`: the number of vertex subsets of `g` inducing a copy of `f`.
pub fn count_induced_direct(g: &Graph, f: &Graph) -> u64 {
    let k = f.n();
    if k > g.n() {
        return 0;
    }
    let target = canonical_form(f);
    let edges = f.edge_count();
    subsets_of_size(g.n(), k)
        .filter(|&s| {
            let m: u32 = s.iter().map(|v| (g.neighbors(v).bits() & s.bits()).count_ones()).sum();
            m as usize == 2 * edges && cached_canonical_form(&g.induced_unchecked(s)) == target
        })
        .count() as u64
}

/// `s(F, G)` recovered from the deck: every `|F|`-subset of the source
/// lies in `C(n - |F|, j - |F|)` cards.
pub fn count_induced_from_deck(d: &Deck, f: &Graph) -> Result<u64> {
    let k = f.n();
    if k > d.card_size {
        return Err(Error::InvalidParameter(format!(
            "pattern has {k} vertices, more than the card size {}",
            d.card_size
        )));
    }
    let mut total: u64 = 0;
    for (code, &mult) in &d.cards {
        let s = count_induced_direct(&code.decode(), f);
        total = s
            .checked_mul(mult)
            .and_then(|x| total.checked_add(x))
            .ok_or(Error::Overflow("counting induced subgraphs"))?;
    }
    let divisor = binomial(d.n - k, d.card_size - k)?;
    if total % divisor != 0 {
        return Err(Error::InconsistentDeck(format!(
            "induced count {total} is not divisible by {divisor}"
        )));
    }
    Ok(total / divisor)
}

pub fn edge_count_from_deck(d: &Deck) -> Result<u64> {
    if d.card_size < 2 {
        return Err(Error::InvalidCardSize { j: d.card_size, n: d.n });
    }
    count_induced_from_deck(d, &Graph::complete(2)?)
}
