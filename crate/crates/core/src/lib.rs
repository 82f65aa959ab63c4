//! Sememe knowledge base construction from dictionaries with a controlled
//! defining vocabulary.
//!
//! The modules follow the pipeline order:
//!
//! - [`sememe_set`] derives the sememe inventory from the defining vocabulary,
//! - [`extract`] annotates each sense with the inventory lemmas found in its
//!   definition and optionally distills them by dependency importance,
//! - [`eval`] measures annotation consistency by held-out sememe prediction,
//! - [`substitution`] answers same-sememe-set substitute queries.
//!
//! [`lexicon`] holds the shared data model and [`ingest`] every file format.

pub mod eval;
pub mod extract;
pub mod ingest;
pub mod lemma;
pub mod lexicon;
pub mod sememe_set;
pub mod substitution;

pub use lemma::{Lemma, Pos};
pub use lexicon::{DictionaryEntry, SememeInventory, Sense, Skb, SkbRecord, SkbStats, TokenAnnotation};
