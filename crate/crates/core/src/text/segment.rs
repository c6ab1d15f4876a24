use std::collections::HashSet;
use std::ops::Range;
use std::path::Path;
use std::sync::OnceLock;

use crate::error::{Error, Result};

const DEFAULT_ABBREVIATIONS: &str = include_str!("../../data/abbreviations.txt");

/// Abbreviations whose trailing period never ends a sentence.
#[derive(Clone, Debug)]
pub struct Abbreviations {
    entries: HashSet<String>,
}

impl Default for Abbreviations {
    fn default() -> Self {
        Self::parse(DEFAULT_ABBREVIATIONS)
    }
}

impl Abbreviations {
    pub fn parse(text: &str) -> Self {
        let entries = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| {
                let l = l.to_lowercase();
                if l.ends_with('.') {
                    l
                } else {
                    format!("{l}.")
                }
            })
            .collect();
        Self { entries }
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text))
    }

    /// `word` includes its trailing period, any case.
    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains(&word.to_lowercase())
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

pub(crate) fn default_abbreviations() -> &'static Abbreviations {
    static ABBREV: OnceLock<Abbreviations> = OnceLock::new();
    ABBREV.get_or_init(Abbreviations::default)
}

fn is_closing(c: char) -> bool {
    matches!(c, '"' | '\'' | '”' | '’' | ')' | ']')
}

fn is_opening(c: char) -> bool {
    matches!(c, '"' | '\'' | '“' | '‘' | '(' | '[')
}

/// Rule-based sentence splitter.
#[derive(Clone, Debug, Default)]
pub struct SentenceSplitter {
    abbreviations: Abbreviations,
}

impl SentenceSplitter {
    pub fn new(abbreviations: Abbreviations) -> Self {
        Self { abbreviations }
    }

    /// Split `text` into sentences. Blank lines always end a sentence;
    /// otherwise a sentence ends at `.`, `!` or `?` (plus closing quotes)
    /// followed by whitespace and an uppercase letter or an opening quote.
    pub fn segment(&self, text: &str) -> Result<Vec<String>> {
        if text.trim().is_empty() {
            return Err(Error::EmptyInput("cannot segment empty text"));
        }
        let mut out = Vec::new();
        for block in split_blocks(text) {
            for range in self.block_ranges(block) {
                let s = block[range].trim();
                if !s.is_empty() {
                    out.push(s.to_string());
                }
            }
        }
        Ok(out)
    }

    fn block_ranges(&self, block: &str) -> Vec<Range<usize>> {
        let chars: Vec<(usize, char)> = block.char_indices().collect();
        let mut ranges = Vec::new();
        let mut start = 0usize;
        let mut i = 0usize;
        while i < chars.len() {
            let (pos, c) = chars[i];
            if !matches!(c, '.' | '!' | '?') {
                i += 1;
                continue;
            }
            let mut j = i + 1;
            while j < chars.len() && matches!(chars[j].1, '.' | '!' | '?') {
                j += 1;
            }
            while j < chars.len() && is_closing(chars[j].1) {
                j += 1;
            }
            let mut k = j;
            while k < chars.len() && chars[k].1.is_whitespace() {
                k += 1;
            }
            let boundary = k > j
                && k < chars.len()
                && (chars[k].1.is_uppercase() || is_opening(chars[k].1))
                && !(c == '.' && j == i + 1 && self.is_abbreviation(block, &chars, i, pos));
            if boundary {
                let end = chars.get(j).map_or(block.len(), |(p, _)| *p);
                ranges.push(start..end);
                start = chars[k].0;
                i = k;
            } else {
                i = j.max(i + 1);
            }
        }
        if start < block.len() {
            ranges.push(start..block.len());
        }
        ranges
    }

    fn is_abbreviation(&self, block: &str, chars: &[(usize, char)], dot: usize, dot_pos: usize) -> bool {
        let mut w = dot;
        while w > 0 && !chars[w - 1].1.is_whitespace() {
            w -= 1;
        }
        let word_start = chars.get(w).map_or(dot_pos, |(p, _)| *p);
        let word = block[word_start..dot_pos + 1].trim_start_matches(is_opening);
        if self.abbreviations.contains(word) {
            return true;
        }
        // single-letter initials such as "J."
        let mut letters = word.trim_end_matches('.').chars();
        matches!((letters.next(), letters.next()), (Some(l), None) if l.is_alphabetic() && l.is_uppercase())
    }
}

/// Blocks separated by one or more blank lines.
fn split_blocks(text: &str) -> Vec<&str> {
    let mut blocks = Vec::new();
    let mut start = 0usize;
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        if line.trim().is_empty() {
            if !text[start..offset].trim().is_empty() {
                blocks.push(&text[start..offset]);
            }
            start = offset + line.len();
        }
        offset += line.len();
    }
    if !text[start..].trim().is_empty() {
        blocks.push(&text[start..]);
    }
    blocks
}

/// Segment with the bundled abbreviation list.
pub fn segment_sentences(text: &str) -> Result<Vec<String>> {
    static SPLITTER: OnceLock<SentenceSplitter> = OnceLock::new();
    SPLITTER
        .get_or_init(|| SentenceSplitter::new(default_abbreviations().clone()))
        .segment(text)
}

/// Consecutive chunks of three sentences; the last chunk may be shorter.
pub fn paragraphs<T>(sentences: &[T]) -> Result<Vec<Range<usize>>> {
    chunk_ranges(sentences.len(), 3)
}

pub(crate) fn chunk_ranges(n: usize, size: usize) -> Result<Vec<Range<usize>>> {
    if n == 0 {
        return Err(Error::EmptyInput("no sentences to group"));
    }
    Ok((0..n).step_by(size).map(|s| s..(s + size).min(n)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splits_on_terminal_punctuation() {
        assert_eq!(segment_sentences("He won. She lost.").unwrap(), vec!["He won.", "She lost."]);
        assert_eq!(
            segment_sentences("Really? Yes! \"Fine,\" he said. Done.").unwrap(),
            vec!["Really?", "Yes!", "\"Fine,\" he said.", "Done."]
        );
    }

    #[test]
    fn abbreviations_do_not_split() {
        assert_eq!(segment_sentences("Mr. Smith spoke.").unwrap(), vec!["Mr. Smith spoke."]);
        assert_eq!(
            segment_sentences("The U.S. Senate voted. Dr. Jones left.").unwrap(),
            vec!["The U.S. Senate voted.", "Dr. Jones left."]
        );
        assert_eq!(segment_sentences("Donald J. Trump spoke.").unwrap().len(), 1);
    }

    #[test]
    fn lowercase_continuation_does_not_split() {
        assert_eq!(segment_sentences("It cost 3.5 million. ok then.").unwrap().len(), 1);
    }

    #[test]
    fn closing_quote_stays_with_sentence() {
        assert_eq!(
            segment_sentences("He said \"no.\" Then he left.").unwrap(),
            vec!["He said \"no.\"", "Then he left."]
        );
    }

    #[test]
    fn blank_lines_always_split() {
        assert_eq!(
            segment_sentences("A headline without stop\n\nbody text here.\n \n\nmore").unwrap(),
            vec!["A headline without stop", "body text here.", "more"]
        );
        // a single newline does not
        assert_eq!(segment_sentences("one line\nand another").unwrap().len(), 1);
    }

    #[test]
    fn no_boundary_is_one_sentence() {
        assert_eq!(segment_sentences("no terminal punctuation").unwrap(), vec!["no terminal punctuation"]);
    }

    #[test]
    fn empty_text_is_an_error() {
        assert!(matches!(segment_sentences(""), Err(Error::EmptyInput(_))));
        assert!(segment_sentences("   \n\n ").is_err());
    }

    #[test]
    fn custom_abbreviations() {
        let splitter = SentenceSplitter::new(Abbreviations::parse("approx\n"));
        assert_eq!(splitter.segment("It weighs approx. Ten tons.").unwrap().len(), 1);
        assert_eq!(segment_sentences("It weighs approx. Ten tons.").unwrap().len(), 1);
        let none = SentenceSplitter::new(Abbreviations::parse(""));
        assert_eq!(none.segment("Mr. Smith spoke.").unwrap().len(), 2);
    }

    #[test]
    fn paragraph_chunks() {
        let s: Vec<u8> = vec![0; 7];
        assert_eq!(paragraphs(&s).unwrap(), vec![0..3, 3..6, 6..7]);
        assert_eq!(paragraphs(&s[..3]).unwrap(), vec![0..3]);
        assert!(paragraphs::<u8>(&[]).is_err());
    }
}
