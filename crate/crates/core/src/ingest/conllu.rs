//! CoNLL-U sidecars: one sentence block per sense, keyed by a
//! `# sense_id = <id>` comment. Only ID, FORM, LEMMA, UPOS, HEAD and DEPREL
//! are read; multiword-token ranges and empty nodes are skipped.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::IngestError;
use crate::lemma::Lemma;
use crate::lexicon::{validate_tree, TokenAnnotation, TreeError};

/// Token lists keyed by sense id.
pub type ParseMap = BTreeMap<String, Vec<TokenAnnotation>>;

const COLUMNS: usize = 10;

#[derive(Default)]
struct Block {
    start_line: usize,
    sense_id: Option<String>,
    tokens: Vec<TokenAnnotation>,
}

fn optional(field: &str) -> Option<String> {
    (field != "_").then(|| field.to_string())
}

fn parse_token(line_no: usize, line: &str) -> Result<Option<TokenAnnotation>, IngestError> {
    let cols: Vec<&str> = line.split('\t').collect();
    if cols.len() != COLUMNS {
        return Err(IngestError::malformed(
            line_no,
            format!("expected {COLUMNS} tab-separated columns, found {}", cols.len()),
        ));
    }
    if cols[0].contains(['-', '.']) {
        return Ok(None);
    }
    let index: usize = cols[0]
        .parse()
        .map_err(|_| IngestError::malformed(line_no, format!("bad token id `{}`", cols[0])))?;
    let form = cols[1].to_string();
    let lemma_src = if cols[2] == "_" && cols[1] != "_" { cols[1] } else { cols[2] };
    let lemma = Lemma::new(lemma_src)
        .map_err(|e| IngestError::malformed(line_no, format!("lemma: {e}")))?;
    let head = match cols[6] {
        "_" => None,
        h => Some(
            h.parse()
                .map_err(|_| IngestError::malformed(line_no, format!("bad head `{h}`")))?,
        ),
    };
    Ok(Some(TokenAnnotation {
        index,
        form,
        lemma,
        upos: optional(cols[3]),
        head,
        deprel: optional(cols[7]),
    }))
}

fn finish_block(block: Block, out: &mut ParseMap) -> Result<(), IngestError> {
    let line = block.start_line;
    let Some(sense_id) = block.sense_id else {
        if block.tokens.is_empty() {
            // document-level comments such as `# pipeline = ...`
            return Ok(());
        }
        return Err(IngestError::MissingSenseId { line });
    };
    if block.tokens.is_empty() {
        return Err(IngestError::malformed(line, format!("sense `{sense_id}` has no tokens")));
    }
    validate_tree(&block.tokens).map_err(|err| match err {
        TreeError::SelfLoop(token) | TreeError::Cycle(token) => {
            IngestError::CyclicHeads { line, sense_id: sense_id.clone(), token }
        }
        TreeError::NonContiguousIndices { expected, found } => {
            IngestError::NonContiguousIndices { line, sense_id: sense_id.clone(), expected, found }
        }
        source => IngestError::InvalidTree { line, sense_id: sense_id.clone(), source },
    })?;
    if out.contains_key(&sense_id) {
        return Err(IngestError::DuplicateSenseId { line, sense_id });
    }
    out.insert(sense_id, block.tokens);
    Ok(())
}

pub fn parse_conllu<R: BufRead>(reader: R) -> Result<ParseMap, IngestError> {
    let mut out = ParseMap::new();
    let mut block: Option<Block> = None;
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            if let Some(b) = block.take() {
                finish_block(b, &mut out)?;
            }
            continue;
        }
        let current = block.get_or_insert_with(|| Block { start_line: line_no, ..Block::default() });
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                if key.trim() == "sense_id" {
                    let id = value.trim();
                    if id.is_empty() {
                        return Err(IngestError::MissingSenseId { line: line_no });
                    }
                    current.sense_id = Some(id.to_string());
                }
            }
            continue;
        }
        if let Some(token) = parse_token(line_no, line)? {
            current.tokens.push(token);
        }
    }
    if let Some(b) = block.take() {
        finish_block(b, &mut out)?;
    }
    Ok(out)
}

/// Writes blocks in sense-id order. Columns without a value are `_`.
pub fn write_conllu<W: Write>(
    parses: &ParseMap,
    pipeline: Option<&str>,
    mut out: W,
) -> std::io::Result<()> {
    if let Some(p) = pipeline {
        writeln!(out, "# pipeline = {p}\n")?;
    }
    for (sense_id, tokens) in parses {
        writeln!(out, "# sense_id = {sense_id}")?;
        for t in tokens {
            let head = t.head.map_or_else(|| "_".to_string(), |h| h.to_string());
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t_\t_\t{}\t{}\t_\t_",
                t.index,
                t.form,
                t.lemma,
                t.upos.as_deref().unwrap_or("_"),
                head,
                t.deprel.as_deref().unwrap_or("_"),
            )?;
        }
        writeln!(out)?;
    }
    Ok(())
}
