//! Dictionary, sememe inventory and SKB data model.
//!
//! A dictionary is a list of [`DictionaryEntry`] values (headword, POS and
//! ordered senses). Extraction turns each sense into an [`SkbRecord`]; the
//! records plus the [`SememeInventory`] they draw from make up an [`Skb`].

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::lemma::{Lemma, Pos};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexiconError {
    #[error("sense {sense_id}: sememe `{sememe}` is not in the inventory")]
    UnknownSememe { sense_id: String, sememe: Lemma },
    #[error("duplicate sense id `{0}`")]
    DuplicateSenseId(String),
    #[error("sense {0}: record has no sememes")]
    EmptySememes(String),
    #[error("sememe `{0}` has a zero provenance count")]
    ZeroProvenance(Lemma),
    #[error("SKB has no records")]
    EmptySkb,
}

/// One definition token, with CoNLL-U row semantics.
///
/// `head` is `Some(0)` for the root and `None` when the token came from a
/// source without a dependency parse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenAnnotation {
    pub index: usize,
    pub form: String,
    pub lemma: Lemma,
    pub upos: Option<String>,
    pub head: Option<usize>,
    pub deprel: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("token indices are not contiguous: expected {expected}, found {found}")]
    NonContiguousIndices { expected: usize, found: usize },
    #[error("token {0} has no head")]
    MissingHead(usize),
    #[error("token {index} points at head {head}, outside the sentence")]
    HeadOutOfRange { index: usize, head: usize },
    #[error("token {0} is its own head")]
    SelfLoop(usize),
    #[error("token {0} is on a head cycle")]
    Cycle(usize),
    #[error("sentence has no root")]
    NoRoot,
    #[error("sentence has {0} roots, expected exactly one")]
    MultipleRoots(usize),
    #[error("sentence has no tokens")]
    Empty,
}

/// Checks that `tokens` is a 1-based contiguous sequence whose heads form a
/// single-rooted tree.
pub fn validate_tree(tokens: &[TokenAnnotation]) -> Result<(), TreeError> {
    if tokens.is_empty() {
        return Err(TreeError::Empty);
    }
    let n = tokens.len();
    let mut heads = Vec::with_capacity(n);
    for (pos, tok) in tokens.iter().enumerate() {
        if tok.index != pos + 1 {
            return Err(TreeError::NonContiguousIndices { expected: pos + 1, found: tok.index });
        }
        let head = tok.head.ok_or(TreeError::MissingHead(tok.index))?;
        if head > n {
            return Err(TreeError::HeadOutOfRange { index: tok.index, head });
        }
        if head == tok.index {
            return Err(TreeError::SelfLoop(tok.index));
        }
        heads.push(head);
    }
    let roots = heads.iter().filter(|&&h| h == 0).count();
    match roots {
        0 => return Err(TreeError::NoRoot),
        1 => {}
        k => return Err(TreeError::MultipleRoots(k)),
    }
    // 0 = unvisited, 1 = on current path, 2 = reaches the root
    let mut state = vec![0u8; n + 1];
    state[0] = 2;
    for start in 1..=n {
        let mut path = Vec::new();
        let mut cur = start;
        while state[cur] == 0 {
            state[cur] = 1;
            path.push(cur);
            cur = heads[cur - 1];
        }
        if state[cur] == 1 {
            return Err(TreeError::Cycle(cur));
        }
        for node in path {
            state[node] = 2;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sense {
    pub sense_id: String,
    pub definition: String,
    pub tokens: Option<Vec<TokenAnnotation>>,
}

impl Sense {
    pub fn new(sense_id: impl Into<String>, definition: impl Into<String>) -> Self {
        Sense { sense_id: sense_id.into(), definition: definition.into(), tokens: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DictionaryEntry {
    pub headword: Lemma,
    pub pos: Pos,
    pub senses: Vec<Sense>,
}

/// The sememe set together with how often each sememe occurred in
/// definitions when the set was built.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SememeInventory {
    counts: BTreeMap<Lemma, u64>,
}

impl SememeInventory {
    pub fn from_counts<I>(counts: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = (Lemma, u64)>,
    {
        let mut map = BTreeMap::new();
        for (lemma, count) in counts {
            if count == 0 {
                return Err(LexiconError::ZeroProvenance(lemma));
            }
            *map.entry(lemma).or_insert(0) += count;
        }
        Ok(SememeInventory { counts: map })
    }

    pub fn contains(&self, lemma: &Lemma) -> bool {
        self.counts.contains_key(lemma)
    }

    pub fn count(&self, lemma: &Lemma) -> Option<u64> {
        self.counts.get(lemma).copied()
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Sememes in lexicographic order.
    pub fn sememes(&self) -> impl Iterator<Item = &Lemma> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Lemma, u64)> {
        self.counts.iter().map(|(l, &c)| (l, c))
    }

    pub fn restrict_to(&self, keep: &BTreeSet<Lemma>) -> SememeInventory {
        SememeInventory {
            counts: self
                .counts
                .iter()
                .filter(|(l, _)| keep.contains(*l))
                .map(|(l, &c)| (l.clone(), c))
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkbRecord {
    pub headword: Lemma,
    pub pos: Pos,
    pub sense_id: String,
    pub sememes: BTreeSet<Lemma>,
}

/// A sememe knowledge base: records indexed by sense id and by headword.
///
/// Equality ignores insertion order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skb {
    inventory: SememeInventory,
    records: BTreeMap<String, SkbRecord>,
    by_headword: BTreeMap<Lemma, BTreeSet<String>>,
}

impl Skb {
    pub fn new(inventory: SememeInventory) -> Self {
        Skb { inventory, records: BTreeMap::new(), by_headword: BTreeMap::new() }
    }

    pub fn from_records<I>(inventory: SememeInventory, records: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = SkbRecord>,
    {
        let mut skb = Skb::new(inventory);
        for record in records {
            skb.insert_record(record)?;
        }
        Ok(skb)
    }

    pub fn insert_record(&mut self, record: SkbRecord) -> Result<(), LexiconError> {
        if record.sememes.is_empty() {
            return Err(LexiconError::EmptySememes(record.sense_id));
        }
        if let Some(unknown) = record.sememes.iter().find(|s| !self.inventory.contains(s)) {
            return Err(LexiconError::UnknownSememe {
                sense_id: record.sense_id.clone(),
                sememe: unknown.clone(),
            });
        }
        if self.records.contains_key(&record.sense_id) {
            return Err(LexiconError::DuplicateSenseId(record.sense_id));
        }
        self.by_headword
            .entry(record.headword.clone())
            .or_default()
            .insert(record.sense_id.clone());
        self.records.insert(record.sense_id.clone(), record);
        Ok(())
    }

    pub fn inventory(&self) -> &SememeInventory {
        &self.inventory
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn get(&self, sense_id: &str) -> Option<&SkbRecord> {
        self.records.get(sense_id)
    }

    /// All records of `headword`, ordered by sense id.
    pub fn lookup(&self, headword: &Lemma) -> Vec<&SkbRecord> {
        self.by_headword
            .get(headword)
            .map(|ids| ids.iter().map(|id| &self.records[id]).collect())
            .unwrap_or_default()
    }

    /// Records ordered by sense id.
    pub fn records(&self) -> impl Iterator<Item = &SkbRecord> {
        self.records.values()
    }

    /// Distinct headwords in lexicographic order.
    pub fn headwords(&self) -> impl Iterator<Item = &Lemma> {
        self.by_headword.keys()
    }

    pub fn contains_headword(&self, headword: &Lemma) -> bool {
        self.by_headword.contains_key(headword)
    }

    pub fn compute_stats(&self) -> Result<SkbStats, LexiconError> {
        if self.records.is_empty() {
            return Err(LexiconError::EmptySkb);
        }
        let total: u64 = self.records.values().map(|r| r.sememes.len() as u64).sum();
        let used: BTreeSet<&Lemma> = self.records.values().flat_map(|r| &r.sememes).collect();
        Ok(SkbStats {
            word_count: self.by_headword.len() as u64,
            sense_count: self.records.len() as u64,
            sememe_count: used.len() as u64,
            sememe_annotations: total,
        })
    }

    /// Inventory restricted to sememes annotated to at least one record.
    pub fn effective_inventory(&self) -> SememeInventory {
        let used: BTreeSet<Lemma> =
            self.records.values().flat_map(|r| r.sememes.iter().cloned()).collect();
        self.inventory.restrict_to(&used)
    }

    pub fn into_parts(self) -> (SememeInventory, Vec<SkbRecord>) {
        (self.inventory, self.records.into_values().collect())
    }
}

/// Size statistics of an SKB. The average is kept as an exact ratio of
/// `sememe_annotations / sense_count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkbStats {
    pub word_count: u64,
    pub sense_count: u64,
    pub sememe_count: u64,
    pub sememe_annotations: u64,
}

impl SkbStats {
    pub fn avg_sememes_per_sense(&self) -> f64 {
        if self.sense_count == 0 {
            0.0
        } else {
            self.sememe_annotations as f64 / self.sense_count as f64
        }
    }
}

impl Serialize for SkbStats {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("SkbStats", 5)?;
        s.serialize_field("words", &self.word_count)?;
        s.serialize_field("senses", &self.sense_count)?;
        s.serialize_field("sememes", &self.sememe_count)?;
        s.serialize_field("sememe_annotations", &self.sememe_annotations)?;
        s.serialize_field("avg_sememes_per_sense", &self.avg_sememes_per_sense())?;
        s.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> Lemma {
        Lemma::new(s).unwrap()
    }

    fn inventory(words: &[&str]) -> SememeInventory {
        SememeInventory::from_counts(words.iter().map(|w| (l(w), 1))).unwrap()
    }

    fn record(head: &str, id: &str, sememes: &[&str]) -> SkbRecord {
        SkbRecord {
            headword: l(head),
            pos: Pos::from("adj"),
            sense_id: id.to_string(),
            sememes: sememes.iter().map(|s| l(s)).collect(),
        }
    }

    fn tok(index: usize, head: usize) -> TokenAnnotation {
        TokenAnnotation {
            index,
            form: format!("w{index}"),
            lemma: l(&format!("w{index}")),
            upos: None,
            head: Some(head),
            deprel: None,
        }
    }

    #[test]
    fn insert_then_lookup() {
        let mut skb = Skb::new(inventory(&["attractive", "good"]));
        skb.insert_record(record("beautiful", "s1", &["attractive"])).unwrap();
        let hits = skb.lookup(&l("beautiful"));
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].sense_id, "s1");
        assert_eq!(skb.get("s1").unwrap().headword, l("beautiful"));
    }

    #[test]
    fn insert_rejects_unknown_sememe() {
        let mut skb = Skb::new(inventory(&["attractive"]));
        let err = skb.insert_record(record("beautiful", "s1", &["ugly"])).unwrap_err();
        assert!(matches!(err, LexiconError::UnknownSememe { .. }));
        assert!(skb.is_empty());
    }

    #[test]
    fn insert_rejects_duplicate_sense_id() {
        let mut skb = Skb::new(inventory(&["attractive", "good"]));
        skb.insert_record(record("beautiful", "s1", &["attractive"])).unwrap();
        let err = skb.insert_record(record("pretty", "s1", &["good"])).unwrap_err();
        assert_eq!(err, LexiconError::DuplicateSenseId("s1".into()));
        assert!(skb.lookup(&l("pretty")).is_empty());
    }

    #[test]
    fn insert_rejects_empty_sememe_set() {
        let mut skb = Skb::new(inventory(&["a"]));
        assert!(matches!(
            skb.insert_record(record("x", "s1", &[])),
            Err(LexiconError::EmptySememes(_))
        ));
    }

    #[test]
    fn stats_average_is_exact() {
        let skb = Skb::from_records(
            inventory(&["a", "b", "c", "d", "e"]),
            [record("x", "s1", &["a", "b", "c", "d"]), record("y", "s2", &["a", "b", "e"])],
        )
        .unwrap();
        let stats = skb.compute_stats().unwrap();
        assert_eq!(stats.sense_count, 2);
        assert_eq!(stats.word_count, 2);
        assert_eq!(stats.sememe_count, 5);
        assert_eq!(stats.avg_sememes_per_sense(), 3.5);
        assert_eq!(Skb::new(inventory(&["a"])).compute_stats(), Err(LexiconError::EmptySkb));
    }

    #[test]
    fn effective_inventory_drops_unused() {
        let skb = Skb::from_records(
            inventory(&["a", "b", "x"]),
            [record("w", "s1", &["a"]), record("v", "s2", &["b"])],
        )
        .unwrap();
        let eff = skb.effective_inventory();
        assert!(!eff.contains(&l("x")));
        assert_eq!(eff.len(), 2);
        assert_eq!(skb.compute_stats().unwrap().sememe_count, 2);
    }

    #[test]
    fn zero_provenance_rejected() {
        assert!(matches!(
            SememeInventory::from_counts([(l("a"), 0)]),
            Err(LexiconError::ZeroProvenance(_))
        ));
    }

    #[test]
    fn tree_validation() {
        assert_eq!(validate_tree(&[tok(1, 0), tok(2, 1), tok(3, 2)]), Ok(()));
        assert_eq!(validate_tree(&[tok(1, 0), tok(2, 2)]), Err(TreeError::SelfLoop(2)));
        assert_eq!(validate_tree(&[tok(1, 0), tok(2, 3), tok(3, 2)]), Err(TreeError::Cycle(2)));
        assert_eq!(validate_tree(&[tok(1, 0), tok(2, 0)]), Err(TreeError::MultipleRoots(2)));
        assert_eq!(validate_tree(&[tok(1, 2), tok(2, 1)]), Err(TreeError::NoRoot));
        assert_eq!(
            validate_tree(&[tok(1, 0), tok(3, 1)]),
            Err(TreeError::NonContiguousIndices { expected: 2, found: 3 })
        );
        assert_eq!(
            validate_tree(&[tok(1, 0), tok(2, 7)]),
            Err(TreeError::HeadOutOfRange { index: 2, head: 7 })
        );
        assert_eq!(validate_tree(&[]), Err(TreeError::Empty));
    }
}
