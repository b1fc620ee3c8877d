//! On-disk memo of computed decks, one file per (canonical code, card size).

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use deckforge::deck::{cached_canonical_form, edge_count_from_deck};
use deckforge::{compute_deck, CanonicalCode, Deck, Graph, Result};

#[derive(Debug, Clone)]
pub struct DeckCache {
    dir: Option<PathBuf>,
}

impl DeckCache {
    pub fn disabled() -> Self {
        DeckCache { dir: None }
    }

    pub fn at(dir: impl Into<PathBuf>) -> io::Result<Self> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(DeckCache { dir: Some(dir) })
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    /// Cache file for a graph's `j`-deck. Codes are hex-encoded because
    /// graph6 uses characters that are awkward in file names.
    pub fn entry_path(&self, code: &CanonicalCode, j: usize) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{}-{j}.deck", hex::encode(code.as_str()))))
    }

    /// The `j`-deck of `g`, from the cache when a valid entry exists.
    /// Entries that fail to parse, describe another deck shape or imply
    /// the wrong edge count are recomputed and overwritten.
    pub fn deck(&self, g: &Graph, j: usize) -> Result<Deck> {
        let Some(path) = self.entry_path(&cached_canonical_form(g), j) else {
            return compute_deck(g, j);
        };
        if let Ok(text) = fs::read_to_string(&path) {
            if let Ok(d) = Deck::from_text(&text) {
                if d.n() == g.n() && d.card_size() == j && plausible(&d, g) {
                    return Ok(d);
                }
            }
        }
        let d = compute_deck(g, j)?;
        // A failed write only costs a recomputation next time.
        let tmp = path.with_extension("tmp");
        if fs::write(&tmp, d.to_text()).is_ok() {
            let _ = fs::rename(&tmp, &path);
        }
        Ok(d)
    }
}

/// A cheap consistency check between a cached deck and its graph.
fn plausible(d: &Deck, g: &Graph) -> bool {
    d.card_size() < 2 || edge_count_from_deck(d).is_ok_and(|m| m as usize == g.edge_count())
}
