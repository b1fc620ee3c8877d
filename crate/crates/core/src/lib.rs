//! Deck construction and reconstruction tools for small graphs.
//!
//! The `j`-deck of a graph is the multiset of its `j`-vertex induced
//! subgraphs. This crate computes decks exactly (canonical labeling keyed
//! multisets), recovers what a deck determines (induced-subgraph counts,
//! maximal-subgraph counts, components, degree lists, vine centers), and
//! runs exhaustive searches for graphs that a deck cannot tell apart.

pub mod canon;
pub mod deck;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod metrics;
pub mod reconstruct;
pub mod search;
pub mod trees;
pub mod vines;

pub use canon::{are_isomorphic, canonical_form, CanonicalCode};
pub use deck::{compute_deck, Deck, DeckParams};
pub use error::{Error, Result};
pub use graph::{Graph, VertexSet, MAX_VERTICES};
pub use metrics::GirthValue;
pub use search::{Budget, DeckClass, SearchReport};
pub use vines::{KValue, VineKind};
