//! Readers and writers for every on-disk format the toolkit touches.
//!
//! All parsers are pure functions over a [`BufRead`](std::io::BufRead) and
//! stop at the first problem, reporting it with a 1-based line number.

mod conllu;
mod dictionary;
mod embeddings;
mod skb_file;
mod wordlist;

pub use conllu::{parse_conllu, write_conllu, ParseMap};
pub use dictionary::{attach_parses, parse_dictionary, write_dictionary};
pub use embeddings::{cosine, parse_embeddings, write_embeddings, EmbeddingTable};
pub use skb_file::{
    inventory_from_json, inventory_to_json, read_skb, write_skb, InventoryItem, SKB_FORMAT,
    SKB_FORMAT_VERSION,
};
pub use wordlist::{parse_wordlist, write_wordlist, WordList, WordListKind};

use thiserror::Error;

use crate::lemma::Lemma;
use crate::lexicon::{LexiconError, TreeError};

#[derive(Debug, Error)]
pub enum IngestError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    MalformedLine { line: usize, reason: String },
    #[error("line {line}: duplicate sense id `{sense_id}`")]
    DuplicateSenseId { line: usize, sense_id: String },
    #[error("line {line}: sense `{sense_id}` has an empty definition")]
    EmptyDefinition { line: usize, sense_id: String },
    #[error("line {line}: sentence block has no `# sense_id = ...` comment")]
    MissingSenseId { line: usize },
    #[error("line {line}: sense `{sense_id}` has cyclic heads at token {token}")]
    CyclicHeads { line: usize, sense_id: String, token: usize },
    #[error("line {line}: sense `{sense_id}`: expected token {expected}, found {found}")]
    NonContiguousIndices { line: usize, sense_id: String, expected: usize, found: usize },
    #[error("line {line}: sense `{sense_id}`: {source}")]
    InvalidTree { line: usize, sense_id: String, source: TreeError },
    #[error("{kind} word list is empty")]
    EmptyList { kind: WordListKind },
    #[error("line {line}: bad header: {reason}")]
    BadHeader { line: usize, reason: String },
    #[error("line {line}: expected {expected} components, found {found}")]
    DimMismatch { line: usize, expected: usize, found: usize },
    #[error("line {line}: non-finite vector component")]
    NonFiniteValue { line: usize },
    #[error("header announced {expected} rows, found {found}")]
    CountMismatch { expected: usize, found: usize },
    #[error("line {line}: duplicate word `{word}`")]
    DuplicateWord { line: usize, word: Lemma },
    #[error("unsupported SKB export format `{format}` version {version}")]
    VersionMismatch { format: String, version: u64 },
    #[error("line {line}: sense `{sense_id}` uses sememe `{sememe}` outside the inventory")]
    UnknownSememe { line: usize, sense_id: String, sememe: Lemma },
    #[error("line {line}: {source}")]
    InvalidRecord { line: usize, source: LexiconError },
}

impl IngestError {
    pub(crate) fn malformed(line: usize, reason: impl std::fmt::Display) -> Self {
        IngestError::MalformedLine { line, reason: reason.to_string() }
    }

    /// 1-based line the error was detected on, when it has one.
    pub fn line(&self) -> Option<usize> {
        use IngestError::*;
        match self {
            MalformedLine { line, .. }
            | DuplicateSenseId { line, .. }
            | EmptyDefinition { line, .. }
            | MissingSenseId { line }
            | CyclicHeads { line, .. }
            | NonContiguousIndices { line, .. }
            | InvalidTree { line, .. }
            | BadHeader { line, .. }
            | DimMismatch { line, .. }
            | NonFiniteValue { line }
            | DuplicateWord { line, .. }
            | UnknownSememe { line, .. }
            | InvalidRecord { line, .. } => Some(*line),
            Io(_) | EmptyList { .. } | CountMismatch { .. } | VersionMismatch { .. } => None,
        }
    }
}
