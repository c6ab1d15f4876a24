use std::collections::HashMap;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::error::{Error, Result};

/// Dimension of the pre-trained vectors the classifier is built for.
pub const EMBEDDING_DIM: usize = 50;

/// Frozen word vectors. Lookup is total: unknown tokens map to the zero
/// vector.
#[derive(Clone, Debug)]
pub struct EmbeddingTable {
    dimension: usize,
    index: HashMap<String, usize>,
    data: Vec<f64>,
    unk: Vec<f64>,
}

impl EmbeddingTable {
    pub fn new(dimension: usize) -> Self {
        Self {
            dimension,
            index: HashMap::new(),
            data: Vec::new(),
            unk: vec![0.0; dimension],
        }
    }

    /// Build a table from in-memory entries. Later duplicates are ignored.
    pub fn from_entries<I, S>(dimension: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, Vec<f64>)>,
        S: Into<String>,
    {
        let mut table = Self::new(dimension);
        for (token, vector) in entries {
            let token = token.into();
            if vector.len() != dimension {
                return Err(Error::Shape(format!(
                    "vector for {token:?} has {} components, expected {dimension}",
                    vector.len()
                )));
            }
            if vector.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite(format!("vector for {token:?}")));
            }
            table.push(token, &vector);
        }
        Ok(table)
    }

    fn push(&mut self, token: String, vector: &[f64]) -> bool {
        if self.index.contains_key(&token) {
            return false;
        }
        self.index.insert(token, self.index.len());
        self.data.extend_from_slice(vector);
        true
    }

    /// Parse the whitespace-separated text format: `token v1 … vD` per line.
    pub fn read<R: BufRead>(reader: R, dimension: usize, file: &str) -> Result<Self> {
        let mut table = Self::new(dimension);
        let mut buf = Vec::with_capacity(dimension);
        for (idx, line) in reader.lines().enumerate() {
            let line = line.map_err(|e| Error::io(file, e))?;
            if line.trim().is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let token = parts.next().unwrap_or_default();
            buf.clear();
            for part in parts {
                let v: f64 = part
                    .parse()
                    .map_err(|_| Error::parse(file, idx + 1, format!("bad component {part:?}")))?;
                if !v.is_finite() {
                    return Err(Error::parse(file, idx + 1, "non-finite component"));
                }
                buf.push(v);
            }
            if buf.len() != dimension {
                return Err(Error::parse(
                    file,
                    idx + 1,
                    format!("{} components, expected {dimension}", buf.len()),
                ));
            }
            if !table.push(token.to_string(), &buf) {
                log::warn!("{file}:{}: duplicate token {token:?} ignored", idx + 1);
            }
        }
        Ok(table)
    }

    pub fn load_with_dimension(path: &Path, dimension: usize) -> Result<Self> {
        let f = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::read(BufReader::new(f), dimension, &path.display().to_string())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.index.len()
    }

    pub fn is_empty(&self) -> bool {
        self.index.is_empty()
    }

    pub fn contains(&self, token: &str) -> bool {
        self.index.contains_key(token)
    }

    pub fn lookup(&self, token: &str) -> &[f64] {
        match self.index.get(token) {
            Some(&row) => &self.data[row * self.dimension..(row + 1) * self.dimension],
            None => &self.unk,
        }
    }

    /// Embed a token sequence, one row per token.
    pub fn embed<S: AsRef<str>>(&self, tokens: &[S]) -> Vec<&[f64]> {
        tokens.iter().map(|t| self.lookup(t.as_ref())).collect()
    }
}

/// Load a 50-dimensional embedding file.
pub fn load_embeddings(path: &Path) -> Result<EmbeddingTable> {
    EmbeddingTable::load_with_dimension(path, EMBEDDING_DIM)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(token: &str, n: usize, base: f64) -> String {
        let vals: Vec<String> = (0..n).map(|i| format!("{}", base + i as f64 * 0.01)).collect();
        format!("{token} {}\n", vals.join(" "))
    }

    #[test]
    fn reads_and_looks_up() {
        let text = format!("{}{}", line("the", 50, 0.1), line(",", 50, -0.2));
        let t = EmbeddingTable::read(text.as_bytes(), 50, "e.txt").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.lookup("the")[0], 0.1);
        assert_eq!(t.lookup("the")[49], 0.1 + 49.0 * 0.01);
        assert_eq!(t.lookup(",")[1], -0.2 + 0.01);
    }

    #[test]
    fn unknown_is_zero() {
        let t = EmbeddingTable::read(line("the", 50, 0.1).as_bytes(), 50, "e.txt").unwrap();
        let unk = t.lookup("zzzqqq");
        assert_eq!(unk.len(), 50);
        assert!(unk.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn short_line_is_reported_with_line_number() {
        let text = format!("{}{}", line("the", 50, 0.1), line("bad", 49, 0.1));
        let err = EmbeddingTable::read(text.as_bytes(), 50, "e.txt").unwrap_err();
        assert!(err.to_string().starts_with("e.txt:2:"), "{err}");
        assert!(EmbeddingTable::read("x 1 nan\n".as_bytes(), 2, "e").is_err());
        assert!(EmbeddingTable::read("x 1 abc\n".as_bytes(), 2, "e").is_err());
    }

    #[test]
    fn from_entries_validates() {
        assert!(EmbeddingTable::from_entries(2, [("a", vec![1.0])]).is_err());
        assert!(EmbeddingTable::from_entries(2, [("a", vec![1.0, f64::INFINITY])]).is_err());
        let t = EmbeddingTable::from_entries(2, [("a", vec![1.0, 2.0]), ("a", vec![3.0, 4.0])]).unwrap();
        assert_eq!(t.lookup("a"), &[1.0, 2.0]);
    }
}
