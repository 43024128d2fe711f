//! End-to-end tests of the `smish` binary.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn smish(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_smish"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).to_string()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).to_string()
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn public_corpus_path() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/sms_spam_collection.tsv")
}

/// A small labeled corpus with a clear vocabulary split: "prize win
/// cash" style smishing against "lunch tomorrow" style ham.
fn toy_corpus(dir: &Path) -> PathBuf {
    let path = dir.join("toy.tsv");
    let mut text = String::new();
    for i in 0..10 {
        text.push_str(&format!("ham\tsee you at lunch tomorrow {i}\n"));
        text.push_str(&format!("smish\twin a cash prize now claim {i}\n"));
    }
    fs::write(&path, text).unwrap();
    path
}

#[test]
fn train_writes_model_files_and_totals() {
    let dir = tempfile::tempdir().unwrap();
    let model_dir = dir.path().join("model");
    let out = smish(&[
        "train",
        "--corpus",
        public_corpus_path().to_str().unwrap(),
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--spam-as-smish",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    for name in ["ham.csv", "smish.csv", "meta.txt", "split.txt"] {
        assert!(model_dir.join(name).exists(), "missing {name}");
    }
    let printed = stdout(&out);
    assert!(printed.contains("train_ham=4344"), "{printed}");
    assert!(printed.contains("train_smish=672"), "{printed}");
    assert!(printed.contains("test_ham=483"), "{printed}");
    assert!(printed.contains("test_smish=75"), "{printed}");

    // split.txt line count matches the printed test totals
    let split = fs::read_to_string(model_dir.join("split.txt")).unwrap();
    assert_eq!(split.lines().count(), 483 + 75);
}

#[test]
fn train_rejects_single_class_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("ham_only.tsv");
    fs::write(&corpus, "ham\thello\nham\tworld\nham\tmore\n").unwrap();
    let out = smish(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model-dir",
        dir.path().join("m").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 3);
    assert!(stderr(&out).contains("both classes required"), "{}", stderr(&out));
}

#[test]
fn train_is_deterministic_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = toy_corpus(dir.path());
    let run = |model_dir: &Path| {
        let out = smish(&[
            "train",
            "--corpus",
            corpus.to_str().unwrap(),
            "--model-dir",
            model_dir.to_str().unwrap(),
            "--seed",
            "7",
        ]);
        assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    };
    let m1 = dir.path().join("m1");
    let m2 = dir.path().join("m2");
    run(&m1);
    run(&m2);
    assert_eq!(
        fs::read(m1.join("split.txt")).unwrap(),
        fs::read(m2.join("split.txt")).unwrap()
    );
    assert_eq!(
        fs::read(m1.join("ham.csv")).unwrap(),
        fs::read(m2.join("ham.csv")).unwrap()
    );
}

#[test]
fn train_rejects_malformed_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.tsv");
    fs::write(&corpus, "ham hello no tab\n").unwrap();
    let out = smish(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model-dir",
        dir.path().join("m").to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 2);
}

fn trained_toy_model(dir: &Path) -> PathBuf {
    let corpus = toy_corpus(dir);
    let model_dir = dir.join("model");
    let out = smish(&[
        "train",
        "--corpus",
        corpus.to_str().unwrap(),
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--train-frac",
        "0.8",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    model_dir
}

#[test]
fn classify_labels_skewed_message_smish() {
    let dir = tempfile::tempdir().unwrap();
    let model_dir = trained_toy_model(dir.path());
    let out = smish(&[
        "classify",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--text",
        "Plz claim ur cash prize",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let line = stdout(&out);
    let fields: Vec<&str> = line.trim_end().split('\t').collect();
    assert_eq!(fields.len(), 4);
    assert_eq!(fields[0], "smish");
    let log_smish: f64 = fields[1].parse().unwrap();
    let log_ham: f64 = fields[2].parse().unwrap();
    assert!(log_smish > log_ham);
    assert_eq!(fields[3], "Plz claim ur cash prize");
}

#[test]
fn classify_empty_text_is_ham() {
    let dir = tempfile::tempdir().unwrap();
    let model_dir = trained_toy_model(dir.path());
    let out = smish(&[
        "classify",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--text",
        "",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    assert!(stdout(&out).starts_with("ham\t"), "{}", stdout(&out));
}

#[test]
fn classify_file_maps_lines_one_to_one() {
    let dir = tempfile::tempdir().unwrap();
    let model_dir = trained_toy_model(dir.path());
    let input = dir.path().join("input.txt");
    fs::write(
        &input,
        "win a prize claim cash\nlunch tomorrow then\n\nanother lunch\n",
    )
    .unwrap();
    let out = smish(&[
        "classify",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--file",
        input.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let lines: Vec<String> = stdout(&out).lines().map(|l| l.to_string()).collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("smish\t"));
    assert!(lines[1].starts_with("ham\t"));
    assert!(lines[2].starts_with("ham\t")); // empty line ties to ham
    assert!(lines[3].starts_with("ham\t"));
    // input order preserved in the trailing text field
    assert!(lines[0].ends_with("win a prize claim cash"));
    assert!(lines[3].ends_with("another lunch"));
}

#[test]
fn classify_missing_model_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = smish(&[
        "classify",
        "--model-dir",
        dir.path().join("nope").to_str().unwrap(),
        "--text",
        "hi",
    ]);
    assert_eq!(exit_code(&out), 2);
}

#[test]
fn evaluate_matches_offline_recount() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = toy_corpus(dir.path());
    let model_dir = dir.path().join("model");
    let out = smish(&[
        "train",
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--seed",
        "5",
        "--train-frac",
        "0.8",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));

    let out = smish(&[
        "evaluate",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--corpus",
        corpus_path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let report = stdout(&out);

    // independent recount: drive the library over the same held-out lines
    let (model, settings) = smish_core::corpus::load_model(&model_dir).unwrap();
    let corpus = smish_core::corpus::load_corpus(&corpus_path, false).unwrap();
    let split: std::collections::HashSet<usize> =
        fs::read_to_string(model_dir.join("split.txt"))
            .unwrap()
            .lines()
            .map(|l| l.parse().unwrap())
            .collect();
    let dict = smish_core::pipeline::SlangDictionary::bundled();
    let stop = smish_core::pipeline::StopWordList::bundled();
    let mut gold = Vec::new();
    let mut predicted = Vec::new();
    for message in &corpus.messages {
        if !split.contains(&message.line_no) {
            continue;
        }
        gold.push(message.label.as_class().unwrap());
        let terms =
            smish_core::pipeline::preprocess_with(&message.text, &dict, &stop, settings);
        predicted.push(model.classify(&terms).label);
    }
    let cm = smish_core::eval::confusion(&gold, &predicted).unwrap();
    let metrics = smish_core::eval::metrics(&cm).unwrap();
    assert_eq!(report, smish_core::eval::render_report(&cm, &metrics));
}

#[test]
fn evaluate_rejects_contradicting_flags() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = toy_corpus(dir.path());
    let model_dir = trained_toy_model(dir.path());
    for contradicting in [
        vec!["--smoothing", "laplace"],
        vec!["--prior", "class-frequency"],
        vec!["--skip-normalization"],
    ] {
        let mut args = vec![
            "evaluate",
            "--model-dir",
            model_dir.to_str().unwrap(),
            "--corpus",
            corpus_path.to_str().unwrap(),
        ];
        args.extend(contradicting.iter());
        let out = smish(&args);
        assert_eq!(exit_code(&out), 2, "args {contradicting:?}");
        assert!(stderr(&out).contains("contradicts"), "{}", stderr(&out));
    }
}

#[test]
fn evaluate_accepts_matching_flags() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = toy_corpus(dir.path());
    let model_dir = trained_toy_model(dir.path());
    let out = smish(&[
        "evaluate",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--smoothing",
        "skip-unknown",
        "--prior",
        "uniform",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
}

#[test]
fn evaluate_emits_csv_on_request() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = toy_corpus(dir.path());
    let model_dir = trained_toy_model(dir.path());
    let out = smish(&[
        "evaluate",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--csv",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("tp,fp,tn,fn,tpr,fpr,tnr,fnr,accuracy\n"), "{text}");
}

#[test]
fn ablation_round_trip_through_meta() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = toy_corpus(dir.path());
    let model_dir = dir.path().join("ablated");
    let out = smish(&[
        "train",
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--train-frac",
        "0.8",
        "--skip-normalization",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let meta = fs::read_to_string(model_dir.join("meta.txt")).unwrap();
    assert!(meta.contains("normalize=false"), "{meta}");

    // evaluate picks the ablated pipeline up from meta.txt; the matching
    // explicit flag is accepted
    let out = smish(&[
        "evaluate",
        "--model-dir",
        model_dir.to_str().unwrap(),
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--skip-normalization",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
}

#[test]
fn config_file_applies_under_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let corpus_path = toy_corpus(dir.path());
    let config = dir.path().join("config.txt");
    fs::write(&config, "smoothing=laplace\nalpha=0.5\nprior_mode=class_frequency\n").unwrap();

    let from_config = dir.path().join("from_config");
    let out = smish(&[
        "train",
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--model-dir",
        from_config.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let meta = fs::read_to_string(from_config.join("meta.txt")).unwrap();
    assert!(meta.contains("smoothing=laplace"), "{meta}");
    assert!(meta.contains("alpha=0.5"), "{meta}");
    assert!(meta.contains("prior_mode=class_frequency"), "{meta}");

    // explicit flag beats the config file
    let overridden = dir.path().join("overridden");
    let out = smish(&[
        "train",
        "--corpus",
        corpus_path.to_str().unwrap(),
        "--model-dir",
        overridden.to_str().unwrap(),
        "--config",
        config.to_str().unwrap(),
        "--smoothing",
        "skip-unknown",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let meta = fs::read_to_string(overridden.join("meta.txt")).unwrap();
    assert!(meta.contains("smoothing=skip_unknown"), "{meta}");
    assert!(meta.contains("alpha=0.5"), "{meta}");
}

#[test]
fn stats_prints_table_rows_in_order() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("c.tsv");
    fs::write(&corpus, "smish\tclaim at http://evil.co now\n").unwrap();
    let out = smish(&["stats", "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let lines: Vec<String> = stdout(&out).lines().map(|l| l.to_string()).collect();
    assert_eq!(lines[0], "metric\tham\tsmish");
    assert!(lines[1].starts_with("messages\t-\t1"), "{}", lines[1]);
    assert!(lines[2].starts_with("avg_chars\t-\t"), "{}", lines[2]);
    assert!(lines[3].starts_with("avg_words\t-\t"), "{}", lines[3]);
    assert_eq!(lines[4], "url_presence\t-\t1.0000");
    assert_eq!(lines[5], "currency_presence\t-\t0.0000");
}

#[test]
fn stats_on_public_corpus_separates_classes() {
    let out = smish(&[
        "stats",
        "--corpus",
        public_corpus_path().to_str().unwrap(),
        "--spam-as-smish",
    ]);
    assert_eq!(exit_code(&out), 0, "{}", stderr(&out));
    let text = stdout(&out);
    let row: Vec<&str> = text
        .lines()
        .find(|l| l.starts_with("avg_chars"))
        .unwrap()
        .split('\t')
        .collect();
    let ham: f64 = row[1].parse().unwrap();
    let smish: f64 = row[2].parse().unwrap();
    assert!(smish > ham);
}

#[test]
fn stats_rejects_malformed_corpus() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = dir.path().join("bad.tsv");
    fs::write(&corpus, "not a label\teh\n").unwrap();
    let out = smish(&["stats", "--corpus", corpus.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
}
