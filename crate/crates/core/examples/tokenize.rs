//! Sentence segmentation, tokenization and paragraph grouping of a news
//! snippet.
//!
//!     cargo run --example tokenize

use biaslens::text::{paragraphs, segment_sentences, tokenize};

const TEXT: &str = "Sen. Warren met Dr. Smith in Washington, D.C. on Monday. \
\"We won't back down,\" she said. The U.S. deficit hit $1,200 billion! \
Officials didn't respond.\n\nA second block starts here. It has two sentences.";

fn main() -> anyhow::Result<()> {
    let sentences = segment_sentences(TEXT)?;
    for (i, s) in sentences.iter().enumerate() {
        println!("[{i}] {s}");
        println!("    {:?}", tokenize(s));
    }
    for (i, r) in paragraphs(&sentences)?.into_iter().enumerate() {
        println!("paragraph {i}: sentences {r:?}");
    }
    Ok(())
}
