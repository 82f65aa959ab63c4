use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use super::IngestError;
use crate::lemma::Lemma;

/// Word vectors of a shared dimension. Words are stored in lemma form.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    vectors: BTreeMap<Lemma, Vec<f64>>,
}

impl EmbeddingTable {
    /// Panics if a vector has the wrong length or a non-finite component.
    pub fn from_vectors<I>(dim: usize, vectors: I) -> Self
    where
        I: IntoIterator<Item = (Lemma, Vec<f64>)>,
    {
        assert!(dim > 0, "embedding dimension must be positive");
        let vectors: BTreeMap<_, _> = vectors.into_iter().collect();
        for (w, v) in &vectors {
            assert_eq!(v.len(), dim, "vector for `{w}` has the wrong dimension");
            assert!(v.iter().all(|x| x.is_finite()), "vector for `{w}` is not finite");
        }
        EmbeddingTable { dim, vectors }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn get(&self, word: &Lemma) -> Option<&[f64]> {
        self.vectors.get(word).map(Vec::as_slice)
    }

    pub fn contains(&self, word: &Lemma) -> bool {
        self.vectors.contains_key(word)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Lemma, &[f64])> {
        self.vectors.iter().map(|(w, v)| (w, v.as_slice()))
    }

    pub fn similarity(&self, a: &Lemma, b: &Lemma) -> Option<f64> {
        Some(cosine(self.get(a)?, self.get(b)?))
    }
}

/// Cosine similarity; 0 when either vector has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    let mut dot = 0.0;
    let mut na = 0.0;
    let mut nb = 0.0;
    for (x, y) in a.iter().zip(b) {
        dot += x * y;
        na += x * x;
        nb += y * y;
    }
    if na == 0.0 || nb == 0.0 {
        return 0.0;
    }
    dot / (na.sqrt() * nb.sqrt())
}

/// Reads the `<count> <dim>` header format followed by one
/// `<word> <f1> ... <fdim>` row per word.
pub fn parse_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingTable, IngestError> {
    let mut lines = reader.lines().enumerate();
    let (count, dim) = loop {
        let Some((i, line)) = lines.next() else {
            return Err(IngestError::BadHeader { line: 1, reason: "missing header".into() });
        };
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |reason: &str| IngestError::BadHeader { line: i + 1, reason: reason.into() };
        if fields.len() != 2 {
            return Err(bad("expected `<count> <dim>`"));
        }
        let count: usize = fields[0].parse().map_err(|_| bad("count is not an integer"))?;
        let dim: usize = fields[1].parse().map_err(|_| bad("dim is not an integer"))?;
        if dim == 0 {
            return Err(bad("dim must be positive"));
        }
        break (count, dim);
    };

    let mut vectors = BTreeMap::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let line = line?;
        let mut fields = line.split_whitespace();
        let Some(word) = fields.next() else { continue };
        let word = Lemma::new(word).map_err(|e| IngestError::malformed(line_no, e))?;
        let values: Vec<&str> = fields.collect();
        if values.len() != dim {
            return Err(IngestError::DimMismatch { line: line_no, expected: dim, found: values.len() });
        }
        let mut vector = Vec::with_capacity(dim);
        for v in values {
            let x: f64 = v
                .parse()
                .map_err(|_| IngestError::malformed(line_no, format!("bad float `{v}`")))?;
            if !x.is_finite() {
                return Err(IngestError::NonFiniteValue { line: line_no });
            }
            vector.push(x);
        }
        if vectors.contains_key(&word) {
            return Err(IngestError::DuplicateWord { line: line_no, word });
        }
        vectors.insert(word, vector);
    }
    if vectors.len() != count {
        return Err(IngestError::CountMismatch { expected: count, found: vectors.len() });
    }
    Ok(EmbeddingTable { dim, vectors })
}

/// Writes rows in lexicographic word order with shortest round-trip floats.
pub fn write_embeddings<W: Write>(table: &EmbeddingTable, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{} {}", table.len(), table.dim())?;
    for (word, vector) in table.iter() {
        write!(out, "{word}")?;
        for x in vector {
            write!(out, " {x}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}
