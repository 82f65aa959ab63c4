//! Derives the sememe inventory from a controlled defining vocabulary.
//!
//! The pipeline is: drop stop words from the CDV (negators survive), count
//! how often each remaining word occurs across all definitions, then cut
//! the most and least frequent fractions of the ranked distinct words.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::extract::normalize_definition;
use crate::ingest::{WordList, WordListKind};
use crate::lemma::Lemma;
use crate::lexicon::{DictionaryEntry, LexiconError, SememeInventory};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SememeSetError {
    #[error("invalid sememe-set config: {0}")]
    InvalidConfig(String),
    #[error("CDV is empty")]
    EmptyCdv,
    #[error("every CDV word was filtered out as a stop word")]
    EmptyResult,
    #[error("sense `{0}` has no token annotations")]
    NoAnnotations(String),
    #[error("frequency table is empty")]
    EmptyTable,
    #[error("trimming {removed} of {total} ranked words leaves no sememes")]
    DegenerateTrim { total: usize, removed: usize },
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone)]
pub struct SememeSetConfig {
    pub top_trim_fraction: f64,
    pub bottom_trim_fraction: f64,
    pub stopwords: WordList,
    pub negators: WordList,
}

impl Default for SememeSetConfig {
    fn default() -> Self {
        SememeSetConfig {
            top_trim_fraction: 0.01,
            bottom_trim_fraction: 0.10,
            stopwords: WordList::new(WordListKind::Stopword),
            negators: WordList::new(WordListKind::Negator),
        }
    }
}

impl SememeSetConfig {
    pub fn validate(&self) -> Result<(), SememeSetError> {
        for (name, f) in [("top", self.top_trim_fraction), ("bottom", self.bottom_trim_fraction)] {
            if !(0.0..1.0).contains(&f) {
                return Err(SememeSetError::InvalidConfig(format!("{name} trim fraction {f} not in [0, 1)")));
            }
        }
        if self.top_trim_fraction + self.bottom_trim_fraction >= 1.0 {
            return Err(SememeSetError::InvalidConfig("trim fractions must sum to less than 1".into()));
        }
        Ok(())
    }
}

/// Where definition lemmas come from when counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TokenSource {
    /// Use attached annotations, falling back to the rule-based normalizer.
    #[default]
    FallbackNormalizer,
    /// Require attached annotations on every sense.
    AnnotationsOnly,
}

/// Occurrence counts of vocabulary lemmas across all definitions. Every
/// vocabulary word has a key, possibly with count 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: BTreeMap<Lemma, u64>,
}

impl FrequencyTable {
    pub fn from_counts<I: IntoIterator<Item = (Lemma, u64)>>(counts: I) -> Self {
        FrequencyTable { counts: counts.into_iter().collect() }
    }

    pub fn get(&self, lemma: &Lemma) -> Option<u64> {
        self.counts.get(lemma).copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Lemma, u64)> {
        self.counts.iter().map(|(l, &c)| (l, c))
    }

    /// Adds another table's counts into this one.
    pub fn merge(&mut self, other: FrequencyTable) {
        for (lemma, count) in other.counts {
            *self.counts.entry(lemma).or_insert(0) += count;
        }
    }
}

/// Number of items a fraction of `n` removes, rounded up. Products that are
/// integral up to floating-point noise (0.1 * 30) are not bumped.
pub fn trim_count(fraction: f64, n: usize) -> usize {
    let exact = fraction * n as f64;
    let nearest = exact.round();
    if (exact - nearest).abs() < 1e-9 {
        nearest as usize
    } else {
        exact.ceil() as usize
    }
}

pub fn filter_stopwords(cdv: &WordList, cfg: &SememeSetConfig) -> Result<WordList, SememeSetError> {
    if cdv.is_empty() {
        return Err(SememeSetError::EmptyCdv);
    }
    let kept = cdv
        .iter()
        .filter(|w| !cfg.stopwords.contains(w) || cfg.negators.contains(w))
        .cloned();
    let out = WordList::from_words(cdv.kind(), kept);
    if out.is_empty() {
        return Err(SememeSetError::EmptyResult);
    }
    Ok(out)
}

pub fn count_defining_frequencies(
    entries: &[DictionaryEntry],
    vocab: &WordList,
    source: TokenSource,
) -> Result<FrequencyTable, SememeSetError> {
    let zero = || FrequencyTable::from_counts(vocab.iter().map(|w| (w.clone(), 0)));
    entries
        .par_iter()
        .flat_map_iter(|e| e.senses.iter())
        .try_fold(FrequencyTable::default, |mut table, sense| {
            let normalized;
            let tokens = match (&sense.tokens, source) {
                (Some(t), _) => t.as_slice(),
                (None, TokenSource::AnnotationsOnly) => {
                    return Err(SememeSetError::NoAnnotations(sense.sense_id.clone()));
                }
                (None, TokenSource::FallbackNormalizer) => match normalize_definition(&sense.definition) {
                    Ok(t) => {
                        normalized = t;
                        normalized.as_slice()
                    }
                    Err(_) => return Ok(table),
                },
            };
            for t in tokens.iter().filter(|t| vocab.contains(&t.lemma)) {
                *table.counts.entry(t.lemma.clone()).or_insert(0) += 1;
            }
            Ok(table)
        })
        .try_reduce(zero, |mut a, b| {
            a.merge(b);
            Ok(a)
        })
        .map(|mut table| {
            table.merge(zero());
            table
        })
}

/// Ranks distinct lemmas by (count desc, lemma asc), removes the top and
/// bottom fractions by rank, and drops any remaining zero counts.
pub fn trim_by_frequency(table: &FrequencyTable, cfg: &SememeSetConfig) -> Result<SememeInventory, SememeSetError> {
    cfg.validate()?;
    if table.is_empty() {
        return Err(SememeSetError::EmptyTable);
    }
    let mut ranked: Vec<(&Lemma, u64)> = table.iter().collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    let total = ranked.len();
    let top = trim_count(cfg.top_trim_fraction, total);
    let bottom = trim_count(cfg.bottom_trim_fraction, total);
    if top + bottom >= total {
        return Err(SememeSetError::DegenerateTrim { total, removed: top + bottom });
    }
    let kept: Vec<(Lemma, u64)> = ranked[top..total - bottom]
        .iter()
        .filter(|(_, c)| *c > 0)
        .map(|(l, c)| ((*l).clone(), *c))
        .collect();
    if kept.is_empty() {
        return Err(SememeSetError::DegenerateTrim { total, removed: total });
    }
    Ok(SememeInventory::from_counts(kept)?)
}

pub fn build_sememe_set(
    entries: &[DictionaryEntry],
    cdv: &WordList,
    cfg: &SememeSetConfig,
    source: TokenSource,
) -> Result<SememeInventory, SememeSetError> {
    cfg.validate()?;
    let vocab = filter_stopwords(cdv, cfg)?;
    let table = count_defining_frequencies(entries, &vocab, source)?;
    trim_by_frequency(&table, cfg)
}
