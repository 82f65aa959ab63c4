//! SKB export: a JSONL file whose first line carries the format tag,
//! version and full inventory, followed by one line per record.
//!
//! ```text
//! {"format":"skb","version":1,"inventory":[{"sememe":"attractive","count":3,"used":true}]}
//! {"headword":"beautiful","pos":"adj","sense_id":"b1","sememes":["attractive"]}
//! ```
//!
//! Records are written in sense-id order and sememes in lexicographic order,
//! so equal SKBs serialize to identical bytes. A bare inventory file is the
//! same format with no record lines.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::IngestError;
use crate::lemma::{Lemma, Pos};
use crate::lexicon::{LexiconError, SememeInventory, Skb, SkbRecord};

pub const SKB_FORMAT: &str = "skb";
pub const SKB_FORMAT_VERSION: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InventoryItem {
    pub sememe: Lemma,
    pub count: u64,
    /// Derived on write; ignored on read.
    #[serde(default)]
    pub used: bool,
}

#[derive(Serialize, Deserialize)]
struct Header {
    format: String,
    version: u64,
    inventory: Vec<InventoryItem>,
}

#[derive(Serialize, Deserialize)]
struct RecordLine {
    headword: Lemma,
    pos: Pos,
    sense_id: String,
    sememes: Vec<Lemma>,
}

pub fn inventory_to_json(inventory: &SememeInventory, used: &BTreeSet<&Lemma>) -> Vec<InventoryItem> {
    inventory
        .iter()
        .map(|(sememe, count)| InventoryItem {
            sememe: sememe.clone(),
            count,
            used: used.contains(sememe),
        })
        .collect()
}

pub fn inventory_from_json(items: Vec<InventoryItem>) -> Result<SememeInventory, LexiconError> {
    SememeInventory::from_counts(items.into_iter().map(|i| (i.sememe, i.count)))
}

pub fn write_skb<W: Write>(skb: &Skb, mut out: W) -> std::io::Result<()> {
    let used: BTreeSet<&Lemma> = skb.records().flat_map(|r| &r.sememes).collect();
    let header = Header {
        format: SKB_FORMAT.to_string(),
        version: SKB_FORMAT_VERSION,
        inventory: inventory_to_json(skb.inventory(), &used),
    };
    serde_json::to_writer(&mut out, &header)?;
    out.write_all(b"\n")?;
    for record in skb.records() {
        let line = RecordLine {
            headword: record.headword.clone(),
            pos: record.pos.clone(),
            sense_id: record.sense_id.clone(),
            sememes: record.sememes.iter().cloned().collect(),
        };
        serde_json::to_writer(&mut out, &line)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

pub fn read_skb<R: BufRead>(reader: R) -> Result<Skb, IngestError> {
    let mut skb: Option<Skb> = None;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let Some(skb) = skb.as_mut() else {
            let header: Header =
                serde_json::from_str(&line).map_err(|e| IngestError::malformed(line_no, e))?;
            if header.format != SKB_FORMAT || header.version != SKB_FORMAT_VERSION {
                return Err(IngestError::VersionMismatch {
                    format: header.format,
                    version: header.version,
                });
            }
            let inventory = inventory_from_json(header.inventory)
                .map_err(|source| IngestError::InvalidRecord { line: line_no, source })?;
            skb = Some(Skb::new(inventory));
            continue;
        };
        let rec: RecordLine =
            serde_json::from_str(&line).map_err(|e| IngestError::malformed(line_no, e))?;
        let record = SkbRecord {
            headword: rec.headword,
            pos: rec.pos,
            sense_id: rec.sense_id,
            sememes: rec.sememes.into_iter().collect(),
        };
        skb.insert_record(record).map_err(|err| match err {
            LexiconError::UnknownSememe { sense_id, sememe } => {
                IngestError::UnknownSememe { line: line_no, sense_id, sememe }
            }
            LexiconError::DuplicateSenseId(sense_id) => {
                IngestError::DuplicateSenseId { line: line_no, sense_id }
            }
            source => IngestError::InvalidRecord { line: line_no, source },
        })?;
    }
    skb.ok_or_else(|| IngestError::BadHeader { line: 1, reason: "missing SKB header".into() })
}
