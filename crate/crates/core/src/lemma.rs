//! Canonical lemma and part-of-speech newtypes shared by every stage.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Character that replaces internal whitespace in multi-word headwords.
pub const PHRASE_JOINER: char = '_';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LemmaError {
    #[error("lemma is empty")]
    Empty,
}

/// A case-folded, whitespace-free word form.
///
/// Multi-word items ("ice cream") are joined with [`PHRASE_JOINER`], so
/// `Lemma::new("Ice  Cream")` yields `ice_cream`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Lemma(String);

impl Lemma {
    pub fn new(text: &str) -> Result<Self, LemmaError> {
        let mut canonical = String::with_capacity(text.len());
        for (i, part) in text.split_whitespace().enumerate() {
            if i > 0 {
                canonical.push(PHRASE_JOINER);
            }
            canonical.extend(part.chars().flat_map(char::to_lowercase));
        }
        if canonical.is_empty() {
            return Err(LemmaError::Empty);
        }
        Ok(Lemma(canonical))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for Lemma {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl FromStr for Lemma {
    type Err = LemmaError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Lemma::new(s)
    }
}

impl AsRef<str> for Lemma {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl std::borrow::Borrow<str> for Lemma {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl Serialize for Lemma {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Lemma {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(deserializer)?;
        Lemma::new(&raw).map_err(serde::de::Error::custom)
    }
}

/// Part-of-speech tag from an open tag set. `None` is the distinguished
/// unknown tag; it serializes as JSON `null`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Pos(Option<String>);

impl Pos {
    pub fn unknown() -> Self {
        Pos(None)
    }

    /// Blank tags collapse to unknown.
    pub fn new(tag: Option<&str>) -> Self {
        match tag.map(str::trim) {
            Some(t) if !t.is_empty() => Pos(Some(t.to_string())),
            _ => Pos(None),
        }
    }

    pub fn tag(&self) -> Option<&str> {
        self.0.as_deref()
    }

    pub fn is_known(&self) -> bool {
        self.0.is_some()
    }

    /// True when both tags are known and differ.
    pub fn conflicts_with(&self, other: &Pos) -> bool {
        matches!((&self.0, &other.0), (Some(a), Some(b)) if a != b)
    }
}

impl From<&str> for Pos {
    fn from(tag: &str) -> Self {
        Pos::new(Some(tag))
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.0.as_deref().unwrap_or("unknown"))
    }
}
