//! Sememe-based word substitution: two words are substitutes when some
//! sense of each carries exactly the same sememe set.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::lemma::{Lemma, Pos};
use crate::lexicon::Skb;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubstitutionError {
    #[error("SKB has no records")]
    EmptySkb,
    #[error("`{0}` is not in the SKB")]
    UnknownWord(Lemma),
}

/// Sorted, deduplicated sememe tuple identifying a bucket.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SememeKey(Vec<Lemma>);

impl SememeKey {
    pub fn new<'a, I: IntoIterator<Item = &'a Lemma>>(sememes: I) -> Self {
        let set: BTreeSet<&Lemma> = sememes.into_iter().collect();
        SememeKey(set.into_iter().cloned().collect())
    }

    pub fn sememes(&self) -> &[Lemma] {
        &self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct SenseRef {
    pub headword: Lemma,
    pub pos: Pos,
    pub sense_id: String,
}

#[derive(Debug, Clone)]
pub struct SubstitutionIndex {
    buckets: BTreeMap<SememeKey, BTreeSet<SenseRef>>,
    by_word: BTreeMap<Lemma, Vec<(Pos, SememeKey)>>,
    match_pos: bool,
}

impl SubstitutionIndex {
    /// With `match_pos`, substitutes must share the POS whenever both sides
    /// carry a known tag.
    pub fn build(skb: &Skb, match_pos: bool) -> Result<Self, SubstitutionError> {
        if skb.is_empty() {
            return Err(SubstitutionError::EmptySkb);
        }
        let mut buckets: BTreeMap<SememeKey, BTreeSet<SenseRef>> = BTreeMap::new();
        let mut by_word: BTreeMap<Lemma, Vec<(Pos, SememeKey)>> = BTreeMap::new();
        for record in skb.records() {
            let key = SememeKey::new(&record.sememes);
            buckets.entry(key.clone()).or_default().insert(SenseRef {
                headword: record.headword.clone(),
                pos: record.pos.clone(),
                sense_id: record.sense_id.clone(),
            });
            by_word.entry(record.headword.clone()).or_default().push((record.pos.clone(), key));
        }
        Ok(SubstitutionIndex { buckets, by_word, match_pos })
    }

    pub fn buckets(&self) -> impl Iterator<Item = (&SememeKey, &BTreeSet<SenseRef>)> {
        self.buckets.iter()
    }

    pub fn bucket_count(&self) -> usize {
        self.buckets.len()
    }

    pub fn words(&self) -> impl Iterator<Item = &Lemma> {
        self.by_word.keys()
    }

    /// Words sharing a sememe set with some sense of `word`, excluding
    /// `word` itself. `pos` restricts which senses of `word` are used.
    pub fn substitutes(&self, word: &Lemma, pos: Option<&Pos>) -> Result<BTreeSet<Lemma>, SubstitutionError> {
        let senses = self.by_word.get(word).ok_or_else(|| SubstitutionError::UnknownWord(word.clone()))?;
        let mut out = BTreeSet::new();
        for (sense_pos, key) in senses {
            if pos.is_some_and(|p| p.conflicts_with(sense_pos)) {
                continue;
            }
            for member in &self.buckets[key] {
                if member.headword == *word {
                    continue;
                }
                if self.match_pos && member.pos.conflicts_with(sense_pos) {
                    continue;
                }
                out.insert(member.headword.clone());
            }
        }
        Ok(out)
    }

    pub fn stats(&self) -> SubstituteStats {
        let mut histogram = SubstituteHistogram::default();
        let mut total = 0usize;
        for word in self.by_word.keys() {
            let n = self.substitutes(word, None).map(|s| s.len()).unwrap_or(0);
            total += n;
            histogram.add(n);
        }
        let words = self.by_word.len();
        SubstituteStats {
            words,
            mean_substitutes: if words == 0 { 0.0 } else { total as f64 / words as f64 },
            histogram,
        }
    }
}

/// Counts of headwords by number of substitutes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SubstituteHistogram {
    #[serde(rename = "0")]
    pub zero: usize,
    #[serde(rename = "1")]
    pub one: usize,
    #[serde(rename = "2-5")]
    pub two_to_five: usize,
    #[serde(rename = "6-20")]
    pub six_to_twenty: usize,
    #[serde(rename = ">20")]
    pub over_twenty: usize,
}

impl SubstituteHistogram {
    fn add(&mut self, n: usize) {
        match n {
            0 => self.zero += 1,
            1 => self.one += 1,
            2..=5 => self.two_to_five += 1,
            6..=20 => self.six_to_twenty += 1,
            _ => self.over_twenty += 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubstituteStats {
    pub words: usize,
    pub mean_substitutes: f64,
    pub histogram: SubstituteHistogram,
}
