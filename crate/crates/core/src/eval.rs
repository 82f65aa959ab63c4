//! Annotation-consistency probe: hold out some senses, predict their
//! sememes from the embedding neighbourhood of their headword, and score
//! the predictions with MAP and F1.
//!
//! A held-out sense's headword `w` gets the `k` most cosine-similar train
//! headwords `n_1..n_k`. Each sememe `s` scores
//! `sum_r [s annotated to some sense of n_r] * cos(w, n_r) * c^r`.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::ingest::{cosine, EmbeddingTable};
use crate::lemma::Lemma;
use crate::lexicon::{LexiconError, Skb, SkbRecord};
use crate::sememe_set::trim_count;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("invalid eval config: {0}")]
    InvalidConfig(String),
    #[error("SKB has {0} senses; at least 10 are needed")]
    TooSmall(usize),
    #[error("no embedding for `{0}`")]
    NoEmbedding(Lemma),
    #[error("training SKB is empty")]
    EmptyTrain,
    #[error("gold sememe set is empty")]
    EmptyGold,
    #[error("no held-out sense has an embedding")]
    NoUsableSenses,
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalConfig {
    pub holdout_fraction: f64,
    pub seed: u64,
    pub k_neighbors: usize,
    pub rank_decay: f64,
    pub f1_score_ratio: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig { holdout_fraction: 0.10, seed: 0, k_neighbors: 100, rank_decay: 0.8, f1_score_ratio: 0.5 }
    }
}

impl EvalConfig {
    pub fn validate(&self) -> Result<(), EvalError> {
        let bad = |m: String| Err(EvalError::InvalidConfig(m));
        if !(self.holdout_fraction > 0.0 && self.holdout_fraction < 1.0) {
            return bad(format!("holdout fraction {} not in (0, 1)", self.holdout_fraction));
        }
        if self.k_neighbors == 0 {
            return bad("k must be positive".into());
        }
        if !(self.rank_decay > 0.0 && self.rank_decay < 1.0) {
            return bad(format!("rank decay {} not in (0, 1)", self.rank_decay));
        }
        if !(self.f1_score_ratio > 0.0 && self.f1_score_ratio <= 1.0) {
            return bad(format!("F1 score ratio {} not in (0, 1]", self.f1_score_ratio));
        }
        Ok(())
    }
}

/// Seeded uniform sample of `ceil(fraction * n)` senses. The test part is
/// returned in sense-id order.
pub fn split_holdout(skb: &Skb, cfg: &EvalConfig) -> Result<(Skb, Vec<SkbRecord>), EvalError> {
    cfg.validate()?;
    let n = skb.len();
    if n < 10 {
        return Err(EvalError::TooSmall(n));
    }
    let take = trim_count(cfg.holdout_fraction, n).min(n);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let picked: BTreeSet<usize> = rand::seq::index::sample(&mut rng, n, take).into_iter().collect();
    let mut train = Skb::new(skb.inventory().clone());
    let mut test = Vec::with_capacity(take);
    for (i, record) in skb.records().enumerate() {
        if picked.contains(&i) {
            test.push(record.clone());
        } else {
            train.insert_record(record.clone())?;
        }
    }
    Ok((train, test))
}

fn by_score_then_lemma(a: &(Lemma, f64), b: &(Lemma, f64)) -> Ordering {
    b.1.partial_cmp(&a.1).unwrap_or(Ordering::Equal).then_with(|| a.0.cmp(&b.0))
}

/// Ranked sememe predictions for `target`, best first. Only positive scores
/// are returned.
pub fn predict_sememes(
    target: &SkbRecord,
    train: &Skb,
    emb: &EmbeddingTable,
    cfg: &EvalConfig,
) -> Result<Vec<(Lemma, f64)>, EvalError> {
    let target_vec = emb.get(&target.headword).ok_or_else(|| EvalError::NoEmbedding(target.headword.clone()))?;
    if train.is_empty() {
        return Err(EvalError::EmptyTrain);
    }
    let mut neighbors: Vec<(Lemma, f64)> = train
        .headwords()
        .filter(|w| **w != target.headword)
        .filter_map(|w| emb.get(w).map(|v| (w.clone(), cosine(target_vec, v))))
        .collect();
    neighbors.sort_by(by_score_then_lemma);
    neighbors.truncate(cfg.k_neighbors);

    let mut scores: std::collections::BTreeMap<Lemma, f64> = Default::default();
    let mut weight = 1.0;
    for (word, sim) in &neighbors {
        weight *= cfg.rank_decay;
        let pool: BTreeSet<&Lemma> = train.lookup(word).into_iter().flat_map(|r| &r.sememes).collect();
        for s in pool {
            *scores.entry(s.clone()).or_insert(0.0) += sim * weight;
        }
    }
    let mut ranked: Vec<(Lemma, f64)> = scores.into_iter().filter(|(_, v)| *v > 0.0).collect();
    ranked.sort_by(by_score_then_lemma);
    Ok(ranked)
}

pub fn average_precision(ranked: &[Lemma], gold: &BTreeSet<Lemma>) -> Result<f64, EvalError> {
    if gold.is_empty() {
        return Err(EvalError::EmptyGold);
    }
    let mut found = 0usize;
    let mut sum = 0.0;
    for (r, item) in ranked.iter().enumerate() {
        if gold.contains(item) {
            found += 1;
            sum += found as f64 / (r + 1) as f64;
        }
    }
    Ok(sum / gold.len() as f64)
}

/// Items scoring at least `ratio * best`.
pub fn select_predicted(ranked: &[(Lemma, f64)], ratio: f64) -> BTreeSet<Lemma> {
    let Some(best) = ranked.iter().map(|(_, s)| *s).reduce(f64::max) else {
        return BTreeSet::new();
    };
    let cutoff = ratio * best;
    ranked.iter().filter(|(_, s)| *s >= cutoff).map(|(l, _)| l.clone()).collect()
}

pub fn f1_of(predicted: &BTreeSet<Lemma>, gold: &BTreeSet<Lemma>) -> f64 {
    let hits = predicted.intersection(gold).count();
    if hits == 0 {
        return 0.0;
    }
    let precision = hits as f64 / predicted.len() as f64;
    let recall = hits as f64 / gold.len() as f64;
    2.0 * precision * recall / (precision + recall)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SenseResult {
    pub sense_id: String,
    pub ap: f64,
    pub f1: f64,
    pub predicted: BTreeSet<Lemma>,
    pub gold: BTreeSet<Lemma>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(rename = "map")]
    pub map_score: f64,
    #[serde(rename = "f1")]
    pub f1_score: f64,
    pub excluded: usize,
    pub excluded_senses: Vec<String>,
    pub per_sense: Vec<SenseResult>,
}

/// Runs split, prediction and scoring. MAP and F1 are means over the
/// held-out senses whose headword has an embedding; the rest are counted
/// as excluded.
pub fn evaluate_consistency(skb: &Skb, emb: &EmbeddingTable, cfg: &EvalConfig) -> Result<EvalReport, EvalError> {
    let (train, test) = split_holdout(skb, cfg)?;
    if train.is_empty() {
        return Err(EvalError::EmptyTrain);
    }
    let outcomes: Vec<Result<Option<SenseResult>, EvalError>> = test
        .par_iter()
        .map(|record| {
            if !emb.contains(&record.headword) {
                return Ok(None);
            }
            let ranked = predict_sememes(record, &train, emb, cfg)?;
            let order: Vec<Lemma> = ranked.iter().map(|(l, _)| l.clone()).collect();
            let ap = average_precision(&order, &record.sememes)?;
            let predicted = select_predicted(&ranked, cfg.f1_score_ratio);
            let f1 = f1_of(&predicted, &record.sememes);
            Ok(Some(SenseResult { sense_id: record.sense_id.clone(), ap, f1, predicted, gold: record.sememes.clone() }))
        })
        .collect();

    let mut per_sense = Vec::new();
    let mut excluded_senses = Vec::new();
    for (record, outcome) in test.iter().zip(outcomes) {
        match outcome? {
            Some(result) => per_sense.push(result),
            None => excluded_senses.push(record.sense_id.clone()),
        }
    }
    if per_sense.is_empty() {
        return Err(EvalError::NoUsableSenses);
    }
    let n = per_sense.len() as f64;
    let map_score = per_sense.iter().map(|r| r.ap).sum::<f64>() / n;
    let f1_score = per_sense.iter().map(|r| r.f1).sum::<f64>() / n;
    Ok(EvalReport { map_score, f1_score, excluded: excluded_senses.len(), excluded_senses, per_sense })
}
