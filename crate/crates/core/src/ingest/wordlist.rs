use std::fmt;
use std::io::{BufRead, Write};

use indexmap::IndexSet;

use super::IngestError;
use crate::lemma::Lemma;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WordListKind {
    Cdv,
    Stopword,
    Negator,
}

impl fmt::Display for WordListKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WordListKind::Cdv => "cdv",
            WordListKind::Stopword => "stopword",
            WordListKind::Negator => "negator",
        })
    }
}

/// Case-folded, deduplicated, order-preserving list of words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordList {
    kind: WordListKind,
    words: IndexSet<Lemma>,
}

impl WordList {
    pub fn new(kind: WordListKind) -> Self {
        WordList { kind, words: IndexSet::new() }
    }

    pub fn from_words<I>(kind: WordListKind, words: I) -> Self
    where
        I: IntoIterator<Item = Lemma>,
    {
        WordList { kind, words: words.into_iter().collect() }
    }

    pub fn kind(&self) -> WordListKind {
        self.kind
    }

    pub fn contains(&self, word: &Lemma) -> bool {
        self.words.contains(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Lemma> {
        self.words.iter()
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// One word per line; `#` lines and blank lines are ignored. An empty CDV
/// is an error, empty stop-word and negator lists are not.
pub fn parse_wordlist<R: BufRead>(reader: R, kind: WordListKind) -> Result<WordList, IngestError> {
    let mut list = WordList::new(kind);
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let word = Lemma::new(trimmed).map_err(|e| IngestError::malformed(i + 1, e))?;
        list.words.insert(word);
    }
    if kind == WordListKind::Cdv && list.is_empty() {
        return Err(IngestError::EmptyList { kind });
    }
    Ok(list)
}

pub fn write_wordlist<W: Write>(list: &WordList, mut out: W) -> std::io::Result<()> {
    for w in list.iter() {
        writeln!(out, "{w}")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn case_folded_dedupe() {
        let list = parse_wordlist("The\nthe\nnot\n".as_bytes(), WordListKind::Stopword).unwrap();
        let words: Vec<&str> = list.iter().map(Lemma::as_str).collect();
        assert_eq!(words, ["the", "not"]);
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let list =
            parse_wordlist("# header\n\nlook\n  # indented comment\nat\n".as_bytes(), WordListKind::Cdv)
                .unwrap();
        assert_eq!(list.len(), 2);
    }

    #[test]
    fn empty_cdv_is_an_error() {
        assert!(matches!(
            parse_wordlist("# nothing\n".as_bytes(), WordListKind::Cdv),
            Err(IngestError::EmptyList { kind: WordListKind::Cdv })
        ));
        assert!(parse_wordlist("".as_bytes(), WordListKind::Negator).unwrap().is_empty());
        assert!(parse_wordlist("".as_bytes(), WordListKind::Stopword).unwrap().is_empty());
    }
}
