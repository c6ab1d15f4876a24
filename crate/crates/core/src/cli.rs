//! Command-line front end. The `biaslens` binary only parses arguments and
//! calls [`run`].

use std::collections::HashMap;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    bias_strength, filter_correct, quartile_pattern, BiasStrengthReport, Granularity, NormalizationScope,
    PreparedArticle, QuartilePatterns,
};
use crate::corpus::{
    join_ratings, read_corpus, read_raw_articles, save_corpus, scrub_corpus, split_by_topic, summarize_split,
    Article, BiasType, Partition, PlacementNormalization, RatingsTable, SplitAssignment,
};
use crate::eval::{evaluate, majority_baseline, table_rows, EvalReport, TableRow};
use crate::lexicon::{correlate_categories, Lexicon};
use crate::model::{labeled_tokens, train, Checkpoint, Classifier, EmbeddingRef, TrainConfig};
use crate::report::{emit_pattern_table, heatmap_file_name, pivot_pattern_table, read_pattern_rows, render_heatmap};
use crate::text::{EmbeddingTable, EMBEDDING_DIM};

#[derive(Debug, Parser)]
#[command(name = "biaslens", version, about = "News-bias classification and segment-ablation analysis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Join raw articles with portal ratings, scrub portal mentions and write a labeled corpus.
    Ingest(IngestArgs),
    /// Assign whole topics to train/dev/test.
    Split(SplitArgs),
    /// Train one classifier and write a checkpoint.
    Train(TrainArgs),
    /// Score a checkpoint on one partition against the majority baseline.
    Eval(EvalArgs),
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    #[command(subcommand)]
    Report(ReportCommand),
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[arg(long)]
    pub articles: PathBuf,
    #[arg(long)]
    pub ratings: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Extra raw-rating normalization table (`axis,raw,canonical`).
    #[arg(long)]
    pub normalization: Option<PathBuf>,
    /// Keep portal mentions and contributor bylines.
    #[arg(long)]
    pub no_scrub: bool,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.10)]
    pub min_fraction: f64,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub split: PathBuf,
    #[arg(long)]
    pub embeddings: PathBuf,
    /// bias, fairness or objectivity.
    #[arg(long)]
    pub target: BiasType,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = EMBEDDING_DIM)]
    pub embedding_dim: usize,
    #[arg(long)]
    pub batch_size: Option<usize>,
    #[arg(long)]
    pub max_epochs: Option<usize>,
    #[arg(long)]
    pub patience: Option<usize>,
    #[arg(long)]
    pub hidden: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub max_len: Option<usize>,
    #[arg(long)]
    pub clip_norm: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Embedding file; defaults to the path stored in the checkpoint.
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub split: PathBuf,
    #[arg(long, default_value = "test")]
    pub partition: Partition,
    #[arg(long)]
    pub out: PathBuf,
}

/// Restrict an analysis to one partition of a split.
#[derive(Debug, Args)]
pub struct SubsetArgs {
    #[arg(long, requires = "partition")]
    pub split: Option<PathBuf>,
    #[arg(long, requires = "split")]
    pub partition: Option<Partition>,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Sentence or paragraph bias strengths, one JSON report per article.
    Strength(StrengthArgs),
    /// Quarter-level strength curves for one or more classifiers.
    Pattern(PatternArgs),
    /// Correlation of lexicon categories with sentence strength.
    Lexicon(LexiconArgs),
}

#[derive(Debug, Args)]
pub struct StrengthArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, default_value = "sentence")]
    pub granularity: Granularity,
    /// Only articles the model classifies correctly.
    #[arg(long)]
    pub only_correct: bool,
    #[command(flatten)]
    pub subset: SubsetArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PatternArgs {
    /// Comma-separated checkpoints, one per bias type.
    #[arg(long, value_delimiter = ',', required = true)]
    pub models: Vec<PathBuf>,
    #[arg(long)]
    pub embeddings: Option<PathBuf>,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = ScopeArg::PerCurve)]
    pub normalization: ScopeArg,
    #[command(flatten)]
    pub subset: SubsetArgs,
    #[arg(long)]
    pub out: PathBuf,
    /// Metadata (normalization scope, skipped counts); defaults to the output
    /// path with a `.json` extension.
    #[arg(long)]
    pub meta: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, clap::ValueEnum)]
pub enum ScopeArg {
    PerCurve,
    PerBiasType,
}

impl From<ScopeArg> for NormalizationScope {
    fn from(s: ScopeArg) -> Self {
        match s {
            ScopeArg::PerCurve => NormalizationScope::PerCurve,
            ScopeArg::PerBiasType => NormalizationScope::PerBiasType,
        }
    }
}

#[derive(Debug, Args)]
pub struct LexiconArgs {
    #[command(flatten)]
    pub model: ModelArgs,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub lexicon: PathBuf,
    #[command(flatten)]
    pub subset: SubsetArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum ReportCommand {
    /// One heatmap document per article in a strengths file.
    Heatmap(HeatmapArgs),
    /// Pivot a pattern CSV into one column per curve.
    Pattern(PatternTableArgs),
}

#[derive(Debug, Args)]
pub struct HeatmapArgs {
    #[arg(long)]
    pub strengths: PathBuf,
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct PatternTableArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Ingest(a) => ingest(a),
        Command::Split(a) => split(a),
        Command::Train(a) => train_cmd(a),
        Command::Eval(a) => eval_cmd(a),
        Command::Analyze(AnalyzeCommand::Strength(a)) => strength(a),
        Command::Analyze(AnalyzeCommand::Pattern(a)) => pattern(a),
        Command::Analyze(AnalyzeCommand::Lexicon(a)) => lexicon(a),
        Command::Report(ReportCommand::Heatmap(a)) => heatmap(a),
        Command::Report(ReportCommand::Pattern(a)) => pattern_table(a),
    }
}

fn ingest(a: IngestArgs) -> anyhow::Result<()> {
    let norm = match &a.normalization {
        Some(path) => PlacementNormalization::from_file(path)?,
        None => PlacementNormalization::default(),
    };
    let ratings = RatingsTable::load_with(&a.ratings, &norm)?;
    let raw = read_raw_articles(open(&a.articles)?, &a.articles.display().to_string())?;
    let loaded = join_ratings(raw, &ratings)?;
    let dropped = loaded.dropped_count();
    let mut articles = loaded.articles;
    if !a.no_scrub {
        for id in scrub_corpus(&mut articles, &ratings) {
            log::warn!("article {id:?} is empty after scrubbing and was dropped");
        }
    }
    save_corpus(&articles, &a.out)?;
    println!(
        "wrote {} articles to {} ({} dropped as unrated)",
        articles.len(),
        a.out.display(),
        dropped
    );
    Ok(())
}

fn open(path: &Path) -> anyhow::Result<BufReader<fs::File>> {
    Ok(BufReader::new(fs::File::open(path).with_context(|| format!("opening {}", path.display()))?))
}

fn split(a: SplitArgs) -> anyhow::Result<()> {
    let articles = read_corpus(&a.corpus)?;
    let assignment = split_by_topic(&articles, a.seed, a.min_fraction)?;
    assignment.save(&a.out)?;
    for s in summarize_split(&articles, &assignment)? {
        let rates: Vec<String> = s
            .positive_percent
            .iter()
            .map(|(t, p)| format!("{} {p:.2}%", t.as_str()))
            .collect();
        println!("{:<5} {:>6} articles  {}", s.partition.as_str(), s.articles, rates.join("  "));
    }
    Ok(())
}

fn train_cmd(a: TrainArgs) -> anyhow::Result<()> {
    let articles = read_corpus(&a.corpus)?;
    let assignment = SplitAssignment::load(&a.split)?;
    let table = EmbeddingTable::load_with_dimension(&a.embeddings, a.embedding_dim)?;
    let train_set = labeled_tokens(assignment.select(&articles, Partition::Train)?, a.target)?;
    let dev_set = labeled_tokens(assignment.select(&articles, Partition::Dev)?, a.target)?;

    let mut config = TrainConfig {
        seed: a.seed,
        ..TrainConfig::default()
    };
    if let Some(v) = a.batch_size {
        config.batch_size = v;
    }
    if let Some(v) = a.max_epochs {
        config.max_epochs = v;
    }
    if let Some(v) = a.patience {
        config.patience = v;
    }
    if let Some(v) = a.hidden {
        config.hidden = v;
    }
    if let Some(v) = a.learning_rate {
        config.adam.learning_rate = v;
    }
    if let Some(v) = a.max_len {
        config.max_len = v;
    }
    config.clip_norm = a.clip_norm;

    let (params, log) = train(&train_set, &dev_set, &table, &config)?;
    let best = &log.epochs[log.best_epoch - 1];
    println!(
        "best epoch {} of {}: dev macro-F1 {:.4}, dev loss {:.5}",
        log.best_epoch,
        log.epochs.len(),
        best.dev_macro_f1,
        best.dev_loss
    );
    let embref = EmbeddingRef {
        path: Some(a.embeddings.display().to_string()),
        dimension: a.embedding_dim,
    };
    Checkpoint::new(a.target, embref, config, log, params).save(&a.out)?;
    Ok(())
}

fn load_model(path: &Path, embeddings: Option<&Path>) -> anyhow::Result<(Checkpoint, Classifier)> {
    let ckpt = Checkpoint::load(path)?;
    let emb_path = match (embeddings, &ckpt.embeddings.path) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(p)) => PathBuf::from(p),
        (None, None) => bail!("{} names no embedding file; pass --embeddings", path.display()),
    };
    let table = EmbeddingTable::load_with_dimension(&emb_path, ckpt.embeddings.dimension)?;
    let clf = Classifier::new(ckpt.params.clone(), Arc::new(table))?.with_max_len(ckpt.config.max_len);
    Ok((ckpt, clf))
}

#[derive(Debug, Serialize)]
struct EvalOutput {
    target: BiasType,
    partition: Partition,
    model: EvalReport,
    majority: EvalReport,
    table: Vec<TableRow>,
}

fn eval_cmd(a: EvalArgs) -> anyhow::Result<()> {
    let (ckpt, clf) = load_model(&a.model.model, a.model.embeddings.as_deref())?;
    let articles = read_corpus(&a.corpus)?;
    let assignment = SplitAssignment::load(&a.split)?;
    let set = labeled_tokens(assignment.select(&articles, a.partition)?, ckpt.target)?;
    let pairs: Vec<(&[String], bool)> = set.iter().map(|e| (e.tokens.as_slice(), e.label)).collect();
    let (report, _) = evaluate(&clf, &pairs)?;
    let truth: Vec<bool> = set.iter().map(|e| e.label).collect();
    let majority = majority_baseline(&truth)?;
    let table = table_rows("RNN", &report, &majority);
    for row in &table {
        println!("{:<12} {:>8}", row.row, row.f1);
    }
    let out = EvalOutput {
        target: ckpt.target,
        partition: a.partition,
        model: report,
        majority,
        table,
    };
    write_json(&a.out, &out)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> anyhow::Result<()> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    fs::write(path, s).with_context(|| format!("writing {}", path.display()))
}

fn select_articles(corpus: &Path, subset: &SubsetArgs) -> anyhow::Result<Vec<Article>> {
    let articles = read_corpus(corpus)?;
    match (&subset.split, subset.partition) {
        (Some(split), Some(p)) => {
            let assignment = SplitAssignment::load(split)?;
            Ok(assignment.select(&articles, p)?.into_iter().cloned().collect())
        }
        _ => Ok(articles),
    }
}

fn prepare(articles: &[Article], target: BiasType) -> anyhow::Result<Vec<PreparedArticle>> {
    Ok(articles
        .iter()
        .map(|a| PreparedArticle::from_article(a, target))
        .collect::<crate::Result<_>>()?)
}

fn correct_only(clf: &Classifier, prepared: Vec<PreparedArticle>) -> anyhow::Result<Vec<PreparedArticle>> {
    let total = prepared.len();
    let kept: Vec<PreparedArticle> = filter_correct(clf, &prepared)?.into_iter().map(|(a, _)| a).collect();
    log::info!("{} of {total} articles predicted correctly", kept.len());
    Ok(kept)
}

fn strength(a: StrengthArgs) -> anyhow::Result<()> {
    let (ckpt, clf) = load_model(&a.model.model, a.model.embeddings.as_deref())?;
    let mut prepared = prepare(&select_articles(&a.corpus, &a.subset)?, ckpt.target)?;
    if a.only_correct {
        prepared = correct_only(&clf, prepared)?;
    }
    let f = fs::File::create(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut w = BufWriter::new(f);
    let (mut written, mut skipped) = (0usize, 0usize);
    for art in &prepared {
        match bias_strength(&clf, art, a.granularity) {
            Ok(report) => {
                serde_json::to_writer(&mut w, &report)?;
                w.write_all(b"\n")?;
                written += 1;
            }
            Err(crate::Error::AblationUndefined(why)) => {
                log::warn!("skipped: {why}");
                skipped += 1;
            }
            Err(e) => return Err(e.into()),
        }
    }
    w.flush()?;
    println!("wrote {written} reports to {} ({skipped} single-segment articles skipped)", a.out.display());
    Ok(())
}

fn pattern(a: PatternArgs) -> anyhow::Result<()> {
    let articles = select_articles(&a.corpus, &a.subset)?;
    let scope = NormalizationScope::from(a.normalization);
    let mut patterns = Vec::new();
    for path in &a.models {
        let (ckpt, clf) = load_model(path, a.embeddings.as_deref())?;
        if patterns.iter().any(|p: &QuartilePatterns| p.bias_type == ckpt.target) {
            bail!("more than one checkpoint targets {}", ckpt.target);
        }
        let prepared = correct_only(&clf, prepare(&articles, ckpt.target)?)?;
        let p = quartile_pattern(&clf, &prepared, ckpt.target, scope)?;
        if p.skipped > 0 {
            log::warn!("{}: {} article(s) under four sentences skipped", ckpt.target, p.skipped);
        }
        patterns.push(p);
    }
    fs::write(&a.out, emit_pattern_table(&patterns)?).with_context(|| format!("writing {}", a.out.display()))?;
    let meta = a.meta.unwrap_or_else(|| a.out.with_extension("json"));
    write_json(&meta, &patterns)?;
    println!("wrote {} and {}", a.out.display(), meta.display());
    Ok(())
}

fn lexicon(a: LexiconArgs) -> anyhow::Result<()> {
    let (ckpt, clf) = load_model(&a.model.model, a.model.embeddings.as_deref())?;
    let lex = Lexicon::load(&a.lexicon)?;
    let prepared = correct_only(&clf, prepare(&select_articles(&a.corpus, &a.subset)?, ckpt.target)?)?;
    let outcome = correlate_categories(&clf, &prepared, &lex, ckpt.target)?;
    let mut w = csv::Writer::from_path(&a.out)?;
    for r in &outcome.results {
        w.serialize(r)?;
    }
    if outcome.results.is_empty() {
        w.write_record(["category", "bias_type", "r", "n"])?;
    }
    w.flush()?;
    for r in outcome.results.iter().take(5) {
        println!("{:<20} r = {:+.4} (n = {})", r.category, r.r, r.n);
    }
    if !outcome.omitted.is_empty() {
        println!("omitted (no variance): {}", outcome.omitted.join(", "));
    }
    Ok(())
}

fn heatmap(a: HeatmapArgs) -> anyhow::Result<()> {
    let articles = read_corpus(&a.corpus)?;
    let by_id: HashMap<&str, &Article> = articles.iter().map(|x| (x.id.as_str(), x)).collect();
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    let mut names = HashMap::new();
    let mut count = 0;
    for (idx, line) in open(&a.strengths)?.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let report: BiasStrengthReport = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}", a.strengths.display(), idx + 1))?;
        let article = by_id
            .get(report.article_id.as_str())
            .with_context(|| format!("article {:?} is not in the corpus", report.article_id))?;
        let name = heatmap_file_name(&report.article_id);
        if let Some(other) = names.insert(name.clone(), report.article_id.clone()) {
            bail!("articles {other:?} and {:?} map to the same file {name}", report.article_id);
        }
        fs::write(a.out.join(&name), render_heatmap(&report, &article.text)?)?;
        count += 1;
    }
    println!("wrote {count} heatmaps to {}", a.out.display());
    Ok(())
}

fn pattern_table(a: PatternTableArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let rows = read_pattern_rows(&text)?;
    fs::write(&a.out, pivot_pattern_table(&rows)?).with_context(|| format!("writing {}", a.out.display()))?;
    Ok(())
}
