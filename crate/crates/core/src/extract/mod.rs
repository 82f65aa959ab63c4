//! Per-sense sememe extraction and dependency-importance distillation.
//!
//! Extraction keeps the definition lemmas that belong to the inventory.
//! Distillation scores each sememe by the number of direct dependents of
//! its token in the definition's parse and, for senses with at least
//! `min_sememes` sememes, drops those scoring below `max - slack`.

mod normalize;

pub use normalize::{lemmatize, normalize_definition};

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ingest::ParseMap;
use crate::lemma::Lemma;
use crate::lexicon::{DictionaryEntry, LexiconError, SememeInventory, Skb, SkbRecord, TokenAnnotation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtractError {
    #[error("definition has no tokens")]
    EmptyDefinition,
    #[error("token {0} has no dependency head")]
    MissingParse(usize),
    #[error("sememe `{0}` does not occur in the definition tokens")]
    SememeNotInTokens(Lemma),
    #[error("invalid distillation config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DistillConfig {
    /// How far below the best score a sememe may fall and still survive.
    pub slack: u32,
    /// Senses with fewer sememes than this are left untouched.
    pub min_sememes: usize,
}

impl Default for DistillConfig {
    fn default() -> Self {
        DistillConfig { slack: 1, min_sememes: 4 }
    }
}

impl DistillConfig {
    pub fn validate(&self) -> Result<(), ExtractError> {
        if self.min_sememes < 2 {
            return Err(ExtractError::InvalidConfig(format!(
                "min_sememes must be at least 2, got {}",
                self.min_sememes
            )));
        }
        Ok(())
    }
}

/// Dependent count of each sememe of one sense.
pub type ImportanceScores = BTreeMap<Lemma, u32>;

/// Lemmas of `tokens` that are in the inventory, as a set.
pub fn extract_sense_sememes(tokens: &[TokenAnnotation], inventory: &SememeInventory) -> BTreeSet<Lemma> {
    tokens
        .iter()
        .filter(|t| inventory.contains(&t.lemma))
        .map(|t| t.lemma.clone())
        .collect()
}

/// Scores each sememe by the direct-dependent count of its token. A sememe
/// occurring at several positions takes the largest count.
pub fn importance_scores(
    tokens: &[TokenAnnotation],
    sememes: &BTreeSet<Lemma>,
) -> Result<ImportanceScores, ExtractError> {
    let mut children = vec![0u32; tokens.len() + 1];
    for t in tokens {
        let head = t.head.ok_or(ExtractError::MissingParse(t.index))?;
        if let Some(slot) = children.get_mut(head) {
            *slot += 1;
        }
    }
    let mut scores = ImportanceScores::new();
    for t in tokens.iter().filter(|t| sememes.contains(&t.lemma)) {
        let count = children.get(t.index).copied().unwrap_or(0);
        let entry = scores.entry(t.lemma.clone()).or_insert(0);
        *entry = (*entry).max(count);
    }
    if let Some(missing) = sememes.iter().find(|s| !scores.contains_key(*s)) {
        return Err(ExtractError::SememeNotInTokens(missing.clone()));
    }
    Ok(scores)
}

pub fn distill_sense(
    sememes: &BTreeSet<Lemma>,
    scores: &ImportanceScores,
    cfg: &DistillConfig,
) -> BTreeSet<Lemma> {
    if sememes.len() < cfg.min_sememes {
        return sememes.clone();
    }
    let score = |s: &Lemma| {
        debug_assert!(scores.contains_key(s), "no score for {s}");
        scores.get(s).copied().unwrap_or(0)
    };
    let Some(best) = sememes.iter().map(score).max() else {
        return BTreeSet::new();
    };
    let floor = best.saturating_sub(cfg.slack);
    sememes.iter().filter(|s| score(s) >= floor).cloned().collect()
}

/// Per-sense warning, written to the diagnostics JSONL.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub sense_id: String,
    pub warning: String,
}

impl Diagnostic {
    fn new(sense_id: &str, warning: impl Into<String>) -> Self {
        Diagnostic { sense_id: sense_id.to_string(), warning: warning.into() }
    }
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub skb: Skb,
    pub diagnostics: Vec<Diagnostic>,
}

/// Annotates every sense of `entries` with its extracted sememes.
///
/// Tokens come from the sense itself, then from `parses`, then from the
/// fallback normalizer. Senses whose extraction is empty are dropped with a
/// diagnostic.
pub fn build_skb(
    entries: &[DictionaryEntry],
    inventory: &SememeInventory,
    parses: Option<&ParseMap>,
) -> Result<Outcome, LexiconError> {
    let senses: Vec<_> = entries
        .iter()
        .flat_map(|e| e.senses.iter().map(move |s| (e, s)))
        .collect();
    let results: Vec<(Option<SkbRecord>, Vec<Diagnostic>)> = senses
        .par_iter()
        .map(|(entry, sense)| {
            let mut diags = Vec::new();
            let from_parse = sense
                .tokens
                .as_deref()
                .or_else(|| parses.and_then(|p| p.get(&sense.sense_id)).map(Vec::as_slice));
            let normalized;
            let tokens = match from_parse {
                Some(t) => t,
                None => {
                    if parses.is_some() {
                        diags.push(Diagnostic::new(&sense.sense_id, "no parse; used fallback normalizer"));
                    }
                    match normalize_definition(&sense.definition) {
                        Ok(t) => {
                            normalized = t;
                            &normalized
                        }
                        Err(e) => {
                            diags.push(Diagnostic::new(&sense.sense_id, e.to_string()));
                            return (None, diags);
                        }
                    }
                }
            };
            let sememes = extract_sense_sememes(tokens, inventory);
            if sememes.is_empty() {
                diags.push(Diagnostic::new(&sense.sense_id, "no sememes extracted; sense dropped"));
                return (None, diags);
            }
            let record = SkbRecord {
                headword: entry.headword.clone(),
                pos: entry.pos.clone(),
                sense_id: sense.sense_id.clone(),
                sememes,
            };
            (Some(record), diags)
        })
        .collect();

    let mut skb = Skb::new(inventory.clone());
    let mut diagnostics = Vec::new();
    for (record, diags) in results {
        diagnostics.extend(diags);
        if let Some(record) = record {
            skb.insert_record(record)?;
        }
    }
    for d in &diagnostics {
        log::debug!("{}: {}", d.sense_id, d.warning);
    }
    Ok(Outcome { skb, diagnostics })
}

/// Rewrites every record through [`distill_sense`] and shrinks the inventory
/// to the sememes still in use. Records that need distilling but have no
/// usable parse are kept unchanged and reported.
pub fn distill_skb(skb: &Skb, parses: &ParseMap, cfg: &DistillConfig) -> Result<Outcome, ExtractError> {
    cfg.validate()?;
    let records: Vec<&SkbRecord> = skb.records().collect();
    let results: Vec<(SkbRecord, Option<Diagnostic>)> = records
        .par_iter()
        .map(|record| {
            if record.sememes.len() < cfg.min_sememes {
                return ((*record).clone(), None);
            }
            let Some(tokens) = parses.get(&record.sense_id) else {
                return ((*record).clone(), Some(Diagnostic::new(&record.sense_id, "missing parse; kept unchanged")));
            };
            match importance_scores(tokens, &record.sememes) {
                Ok(scores) => {
                    let mut out = (*record).clone();
                    out.sememes = distill_sense(&record.sememes, &scores, cfg);
                    (out, None)
                }
                Err(e) => {
                    let warning = format!("{e}; kept unchanged");
                    ((*record).clone(), Some(Diagnostic::new(&record.sense_id, warning)))
                }
            }
        })
        .collect();

    let used: BTreeSet<Lemma> = results.iter().flat_map(|(r, _)| r.sememes.iter().cloned()).collect();
    let mut out = Skb::new(skb.inventory().restrict_to(&used));
    let mut diagnostics = Vec::new();
    for (record, diag) in results {
        out.insert_record(record)?;
        diagnostics.extend(diag);
    }
    for d in &diagnostics {
        log::debug!("{}: {}", d.sense_id, d.warning);
    }
    Ok(Outcome { skb: out, diagnostics })
}
