//! `smish` — train, run and evaluate the smishing classifier.
//!
//! Exit codes: 0 ok, 1 I/O failure, 2 bad input or configuration,
//! 3 degenerate data (missing class, empty split side).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use smish_core::bayes::{ClassLabel, PriorMode, SmoothingConfig, SmoothingMode, TrainedModel};
use smish_core::corpus::{self, load_corpus, load_unlabeled, Corpus, CorpusError};
use smish_core::eval::{self, SplitConfig, SplitError};
use smish_core::pipeline::{
    preprocess_with, FixtureError, PipelineSettings, SlangDictionary, StopWordList,
};

#[derive(Parser)]
#[command(
    name = "smish",
    version,
    about = "SMS phishing detection: preprocessing pipeline + naive Bayes classifier"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Split a labeled corpus, train a model and export it.
    Train(TrainArgs),
    /// Classify one message or a file of messages against a model.
    Classify(ClassifyArgs),
    /// Score a model on held-out messages and print the report.
    Evaluate(EvaluateArgs),
    /// Print per-class descriptive statistics of a corpus.
    Stats(StatsArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum SmoothingArg {
    SkipUnknown,
    Laplace,
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorArg {
    Uniform,
    ClassFrequency,
}

#[derive(Args)]
struct PipelineFiles {
    /// Slang dictionary file (default: bundled dictionary)
    #[arg(long)]
    dict: Option<PathBuf>,
    /// Stop-word file (default: bundled 153-word list)
    #[arg(long)]
    stopwords: Option<PathBuf>,
}

#[derive(Args)]
struct ModelConfig {
    /// Zero-frequency handling
    #[arg(long, value_enum)]
    smoothing: Option<SmoothingArg>,
    /// Laplace pseudo-count (only meaningful with --smoothing laplace)
    #[arg(long)]
    alpha: Option<f64>,
    /// Class prior handling
    #[arg(long, value_enum)]
    prior: Option<PriorArg>,
    /// Ablation: skip slang normalization, stop-word removal and
    /// stemming (tokenize + lowercase still run)
    #[arg(long)]
    skip_normalization: bool,
    /// key=value config file; explicit flags take precedence
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct TrainArgs {
    /// Labeled corpus, one <label>\t<text> per line
    #[arg(long)]
    corpus: PathBuf,
    /// Output directory for ham.csv, smish.csv, meta.txt, split.txt
    #[arg(long)]
    model_dir: PathBuf,
    /// Split seed
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Fraction of each class used for training
    #[arg(long, default_value_t = 0.9)]
    train_frac: f64,
    /// Accept `spam` labels as smishing
    #[arg(long)]
    spam_as_smish: bool,
    #[command(flatten)]
    files: PipelineFiles,
    #[command(flatten)]
    model: ModelConfig,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Model directory produced by `train`
    #[arg(long)]
    model_dir: PathBuf,
    /// Single message to classify
    #[arg(long, conflicts_with = "file")]
    text: Option<String>,
    /// File of messages, one per line
    #[arg(long)]
    file: Option<PathBuf>,
    #[command(flatten)]
    files: PipelineFiles,
    #[command(flatten)]
    model: ModelConfig,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Model directory produced by `train`
    #[arg(long)]
    model_dir: PathBuf,
    /// Full labeled corpus; the held-out lines listed in the split file
    /// are evaluated
    #[arg(long, conflicts_with = "test_corpus")]
    corpus: Option<PathBuf>,
    /// Line-number file selecting the test set (default:
    /// <model-dir>/split.txt)
    #[arg(long)]
    split_file: Option<PathBuf>,
    /// Evaluate an entire labeled corpus file as the test set
    #[arg(long)]
    test_corpus: Option<PathBuf>,
    /// Accept `spam` labels as smishing
    #[arg(long)]
    spam_as_smish: bool,
    /// Also print the report as CSV
    #[arg(long)]
    csv: bool,
    #[command(flatten)]
    files: PipelineFiles,
    #[command(flatten)]
    model: ModelConfig,
}

#[derive(Args)]
struct StatsArgs {
    /// Labeled corpus to describe
    #[arg(long)]
    corpus: PathBuf,
    /// Accept `spam` labels as smishing
    #[arg(long)]
    spam_as_smish: bool,
}

enum CliError {
    Io(String),
    BadInput(String),
    Degenerate(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::BadInput(_) => 2,
            CliError::Degenerate(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::BadInput(m) | CliError::Degenerate(m) => m,
        }
    }
}

impl From<CorpusError> for CliError {
    fn from(err: CorpusError) -> Self {
        match err {
            CorpusError::Io { .. } => CliError::Io(err.to_string()),
            _ => CliError::BadInput(err.to_string()),
        }
    }
}

impl From<FixtureError> for CliError {
    fn from(err: FixtureError) -> Self {
        match err {
            FixtureError::Io { .. } => CliError::Io(err.to_string()),
            FixtureError::Malformed { .. } => CliError::BadInput(err.to_string()),
        }
    }
}

impl From<SplitError> for CliError {
    fn from(err: SplitError) -> Self {
        CliError::Degenerate(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Train(args) => cmd_train(args),
        Command::Classify(args) => cmd_classify(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Stats(args) => cmd_stats(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message());
            ExitCode::from(err.exit_code())
        }
    }
}

/// Resolved model/pipeline configuration: flags > config file > defaults.
struct ResolvedConfig {
    smoothing: SmoothingConfig,
    prior: PriorMode,
    settings: PipelineSettings,
}

fn resolve_config(model: &ModelConfig) -> Result<ResolvedConfig, CliError> {
    let mut smoothing_mode = SmoothingMode::SkipUnknown;
    let mut alpha = 1.0f64;
    let mut prior = PriorMode::Uniform;
    let mut normalize = true;

    if let Some(path) = &model.config {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::BadInput(format!(
                    "{}:{}: expected key=value",
                    path.display(),
                    idx + 1
                ))
            })?;
            let bad = |what: &str| {
                CliError::BadInput(format!(
                    "{}:{}: bad value for {what}: {value}",
                    path.display(),
                    idx + 1
                ))
            };
            match key {
                "smoothing" => {
                    smoothing_mode = match value {
                        "skip_unknown" => SmoothingMode::SkipUnknown,
                        "laplace" => SmoothingMode::Laplace,
                        _ => return Err(bad("smoothing")),
                    }
                }
                "alpha" => alpha = value.parse().map_err(|_| bad("alpha"))?,
                "prior_mode" => {
                    prior = match value {
                        "uniform" => PriorMode::Uniform,
                        "class_frequency" => PriorMode::ClassFrequency,
                        _ => return Err(bad("prior_mode")),
                    }
                }
                "normalize" => normalize = value.parse().map_err(|_| bad("normalize"))?,
                // model-attribute keys are tolerated so a meta.txt can be
                // reused as a config file
                "total_ham" | "total_smish" => {}
                _ => {
                    return Err(CliError::BadInput(format!(
                        "{}:{}: unknown config key {key}",
                        path.display(),
                        idx + 1
                    )))
                }
            }
        }
    }

    if let Some(mode) = model.smoothing {
        smoothing_mode = match mode {
            SmoothingArg::SkipUnknown => SmoothingMode::SkipUnknown,
            SmoothingArg::Laplace => SmoothingMode::Laplace,
        };
    }
    if let Some(a) = model.alpha {
        alpha = a;
    }
    if let Some(p) = model.prior {
        prior = match p {
            PriorArg::Uniform => PriorMode::Uniform,
            PriorArg::ClassFrequency => PriorMode::ClassFrequency,
        };
    }
    if model.skip_normalization {
        normalize = false;
    }

    if alpha <= 0.0 {
        return Err(CliError::BadInput(format!(
            "alpha must be positive, got {alpha}"
        )));
    }
    Ok(ResolvedConfig {
        smoothing: SmoothingConfig {
            mode: smoothing_mode,
            alpha,
        },
        prior,
        settings: PipelineSettings { normalize },
    })
}

fn load_pipeline_files(
    files: &PipelineFiles,
) -> Result<(SlangDictionary, StopWordList), CliError> {
    let dict = match &files.dict {
        Some(path) => SlangDictionary::load(path)?,
        None => SlangDictionary::bundled(),
    };
    let stop = match &files.stopwords {
        Some(path) => StopWordList::load(path)?,
        None => StopWordList::bundled(),
    };
    Ok((dict, stop))
}

fn cmd_train(args: TrainArgs) -> Result<(), CliError> {
    if !(args.train_frac > 0.0 && args.train_frac < 1.0) {
        return Err(CliError::BadInput(format!(
            "--train-frac must lie strictly between 0 and 1, got {}",
            args.train_frac
        )));
    }
    let config = resolve_config(&args.model)?;
    let (dict, stop) = load_pipeline_files(&args.files)?;
    let corpus = load_corpus(&args.corpus, args.spam_as_smish)?;

    let split_cfg = SplitConfig {
        train_fraction: args.train_frac,
        seed: args.seed,
        stratified: true,
    };
    let (train, test) = eval::split(&corpus, &split_cfg)?;

    let training: Vec<(Vec<String>, ClassLabel)> = train
        .messages
        .iter()
        .map(|m| {
            (
                preprocess_with(&m.text, &dict, &stop, config.settings),
                m.label.as_class().expect("training corpus is labeled"),
            )
        })
        .collect();
    let model = TrainedModel::train(&training, config.smoothing, config.prior)
        .map_err(|e| CliError::Degenerate(e.to_string()))?;

    corpus::export_model(&model, config.settings, &args.model_dir)?;
    let mut split_txt = String::new();
    for message in &test.messages {
        split_txt.push_str(&format!("{}\n", message.line_no));
    }
    let split_path = args.model_dir.join("split.txt");
    fs::write(&split_path, split_txt)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", split_path.display())))?;

    println!("train_ham={}", model.total(ClassLabel::Ham));
    println!("train_smish={}", model.total(ClassLabel::Smish));
    println!("test_ham={}", test.count(ClassLabel::Ham));
    println!("test_smish={}", test.count(ClassLabel::Smish));
    println!("model_dir={}", args.model_dir.display());
    Ok(())
}

/// Load the model and enforce training/serving symmetry: the pipeline
/// configuration comes from meta.txt, and explicit flags that contradict
/// it are a configuration error.
fn load_model_checked(
    model_dir: &Path,
    model_args: &ModelConfig,
) -> Result<(TrainedModel, PipelineSettings), CliError> {
    let (model, settings) = corpus::load_model(model_dir)?;

    if let Some(mode) = model_args.smoothing {
        let flag_mode = match mode {
            SmoothingArg::SkipUnknown => SmoothingMode::SkipUnknown,
            SmoothingArg::Laplace => SmoothingMode::Laplace,
        };
        if flag_mode != model.smoothing().mode {
            return Err(CliError::BadInput(
                "smoothing flag contradicts the trained model's meta.txt".to_string(),
            ));
        }
    }
    if let Some(alpha) = model_args.alpha {
        if (alpha - model.smoothing().alpha).abs() > f64::EPSILON {
            return Err(CliError::BadInput(
                "alpha flag contradicts the trained model's meta.txt".to_string(),
            ));
        }
    }
    if let Some(prior) = model_args.prior {
        let flag_prior = match prior {
            PriorArg::Uniform => PriorMode::Uniform,
            PriorArg::ClassFrequency => PriorMode::ClassFrequency,
        };
        if flag_prior != model.prior_mode() {
            return Err(CliError::BadInput(
                "prior flag contradicts the trained model's meta.txt".to_string(),
            ));
        }
    }
    if model_args.skip_normalization && settings.normalize {
        return Err(CliError::BadInput(
            "--skip-normalization contradicts the trained model's meta.txt (normalize=true)"
                .to_string(),
        ));
    }
    Ok((model, settings))
}

fn cmd_classify(args: ClassifyArgs) -> Result<(), CliError> {
    let (model, settings) = load_model_checked(&args.model_dir, &args.model)?;
    let (dict, stop) = load_pipeline_files(&args.files)?;

    let texts: Vec<String> = match (&args.text, &args.file) {
        (Some(text), None) => vec![text.clone()],
        (None, Some(path)) => load_unlabeled(path)?
            .messages
            .into_iter()
            .map(|m| m.text)
            .collect(),
        (None, None) => {
            return Err(CliError::BadInput(
                "classify needs --text or --file".to_string(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    for text in &texts {
        let terms = preprocess_with(text, &dict, &stop, settings);
        let result = model.classify(&terms);
        println!(
            "{}\t{:.6}\t{:.6}\t{}",
            result.label.as_str(),
            result.log_score_smish,
            result.log_score_ham,
            text
        );
    }
    Ok(())
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let (model, settings) = load_model_checked(&args.model_dir, &args.model)?;
    let (dict, stop) = load_pipeline_files(&args.files)?;

    let test = match (&args.test_corpus, &args.corpus) {
        (Some(path), None) => load_corpus(path, args.spam_as_smish)?,
        (None, Some(path)) => {
            let corpus = load_corpus(path, args.spam_as_smish)?;
            let split_path = args
                .split_file
                .clone()
                .unwrap_or_else(|| args.model_dir.join("split.txt"));
            let text = fs::read_to_string(&split_path).map_err(|e| {
                CliError::Io(format!("cannot read {}: {e}", split_path.display()))
            })?;
            let mut wanted = std::collections::HashSet::new();
            for (idx, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() {
                    continue;
                }
                let line_no: usize = line.parse().map_err(|_| {
                    CliError::BadInput(format!(
                        "{}:{}: not a line number: {line}",
                        split_path.display(),
                        idx + 1
                    ))
                })?;
                wanted.insert(line_no);
            }
            let messages: Vec<_> = corpus
                .messages
                .into_iter()
                .filter(|m| wanted.contains(&m.line_no))
                .collect();
            if messages.is_empty() {
                return Err(CliError::Degenerate(
                    "split file selects no messages from the corpus".to_string(),
                ));
            }
            Corpus {
                messages,
                source_path: corpus.source_path,
            }
        }
        (None, None) => {
            return Err(CliError::BadInput(
                "evaluate needs --corpus (with a split file) or --test-corpus".to_string(),
            ))
        }
        (Some(_), Some(_)) => unreachable!("clap conflicts_with"),
    };

    let mut gold = Vec::new();
    let mut predicted = Vec::new();
    for message in &test.messages {
        let Some(label) = message.label.as_class() else {
            return Err(CliError::BadInput(format!(
                "message at line {} has no gold label",
                message.line_no
            )));
        };
        gold.push(label);
        let terms = preprocess_with(&message.text, &dict, &stop, settings);
        predicted.push(model.classify(&terms).label);
    }

    let cm = eval::confusion(&gold, &predicted)
        .map_err(|e| CliError::BadInput(e.to_string()))?;
    let metrics = eval::metrics(&cm).map_err(|e| CliError::Degenerate(e.to_string()))?;
    print!("{}", eval::render_report(&cm, &metrics));
    if args.csv {
        print!("{}", eval::render_report_csv(&cm, &metrics));
    }
    Ok(())
}

fn cmd_stats(args: StatsArgs) -> Result<(), CliError> {
    let corpus = load_corpus(&args.corpus, args.spam_as_smish)?;
    let stats = eval::describe(&corpus);

    let fmt_count = |c: Option<usize>| c.map_or("-".to_string(), |v| v.to_string());
    let fmt =
        |v: Option<f64>, digits: usize| v.map_or("-".to_string(), |v| format!("{v:.digits$}"));
    let ham = stats.ham;
    let smish = stats.smish;
    println!("metric\tham\tsmish");
    println!(
        "messages\t{}\t{}",
        fmt_count(ham.map(|s| s.message_count)),
        fmt_count(smish.map(|s| s.message_count))
    );
    println!(
        "avg_chars\t{}\t{}",
        fmt(ham.map(|s| s.avg_chars), 2),
        fmt(smish.map(|s| s.avg_chars), 2)
    );
    println!(
        "avg_words\t{}\t{}",
        fmt(ham.map(|s| s.avg_words), 2),
        fmt(smish.map(|s| s.avg_words), 2)
    );
    println!(
        "url_presence\t{}\t{}",
        fmt(ham.map(|s| s.avg_url_presence), 4),
        fmt(smish.map(|s| s.avg_url_presence), 4)
    );
    println!(
        "currency_presence\t{}\t{}",
        fmt(ham.map(|s| s.avg_currency_presence), 4),
        fmt(smish.map(|s| s.avg_currency_presence), 4)
    );
    Ok(())
}
