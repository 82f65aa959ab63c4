use std::collections::HashSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{IngestError, ParseMap};
use crate::lemma::{Lemma, Pos};
use crate::lexicon::{DictionaryEntry, Sense};

#[derive(Deserialize)]
struct RawEntry {
    headword: String,
    #[serde(default)]
    pos: Option<String>,
    senses: Vec<RawSense>,
}

#[derive(Deserialize, Serialize)]
struct RawSense {
    id: String,
    definition: String,
}

#[derive(Serialize)]
struct EntryOut<'a> {
    headword: &'a str,
    pos: Option<&'a str>,
    senses: Vec<RawSense>,
}

/// Reads dictionary JSON Lines: one `{"headword", "pos", "senses"}` object
/// per line. Blank lines are skipped.
pub fn parse_dictionary<R: BufRead>(reader: R) -> Result<Vec<DictionaryEntry>, IngestError> {
    let mut entries = Vec::new();
    let mut seen_ids = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let raw: RawEntry =
            serde_json::from_str(&line).map_err(|e| IngestError::malformed(line_no, e))?;
        let headword = Lemma::new(&raw.headword)
            .map_err(|e| IngestError::malformed(line_no, format!("headword: {e}")))?;
        if raw.senses.is_empty() {
            return Err(IngestError::malformed(line_no, "entry has no senses"));
        }
        let mut senses = Vec::with_capacity(raw.senses.len());
        for sense in raw.senses {
            if sense.id.trim().is_empty() {
                return Err(IngestError::malformed(line_no, "sense id is empty"));
            }
            if !seen_ids.insert(sense.id.clone()) {
                return Err(IngestError::DuplicateSenseId { line: line_no, sense_id: sense.id });
            }
            if sense.definition.trim().is_empty() {
                return Err(IngestError::EmptyDefinition { line: line_no, sense_id: sense.id });
            }
            senses.push(Sense::new(sense.id, sense.definition));
        }
        entries.push(DictionaryEntry { headword, pos: Pos::new(raw.pos.as_deref()), senses });
    }
    Ok(entries)
}

pub fn write_dictionary<W: Write>(
    entries: &[DictionaryEntry],
    mut out: W,
) -> Result<(), IngestError> {
    for entry in entries {
        let line = EntryOut {
            headword: entry.headword.as_str(),
            pos: entry.pos.tag(),
            senses: entry
                .senses
                .iter()
                .map(|s| RawSense { id: s.sense_id.clone(), definition: s.definition.clone() })
                .collect(),
        };
        serde_json::to_writer(&mut out, &line).map_err(std::io::Error::from)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Copies token annotations from a parse sidecar onto matching senses.
/// Returns the number of senses that received tokens.
pub fn attach_parses(entries: &mut [DictionaryEntry], parses: &ParseMap) -> usize {
    let mut attached = 0;
    for sense in entries.iter_mut().flat_map(|e| e.senses.iter_mut()) {
        if let Some(tokens) = parses.get(&sense.sense_id) {
            sense.tokens = Some(tokens.clone());
            attached += 1;
        }
    }
    attached
}
