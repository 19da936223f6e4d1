#[path = "../../core/tests/support/mod.rs"]
mod support;

use std::fs;
use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

fn ckbv(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ckbv"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn ok(args: &[&str], stdin: &str) -> String {
    let o = ckbv(args, stdin);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn dialectalize_and_standardize_stream_lines() {
    assert_eq!(
        ok(&["dialectalize", "--target", "ckb-snn"], "deçim\nxoş\n"),
        "eçim\nxweş\n"
    );
    assert_eq!(ok(&["standardize", "--source", "ckb-snn"], "eçim\n"), "deçim\n");
    let json = ok(&["dialectalize", "--target", "ckb-snn", "--format", "json"], "deçim\n");
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["text"], "eçim");
    assert_eq!(v["edits"].as_array().unwrap().len(), 1);
}

#[test]
fn normalize_and_transliterate() {
    assert_eq!(ok(&["normalize"], "كتێب  ي\n"), "کتێب ی\n");
    let latin = ok(&["transliterate", "--to", "latin"], "نان\n");
    assert_eq!(latin, "nan\n");
    assert_eq!(ok(&["transliterate", "--to", "arabic"], &latin), "نان\n");
}

#[test]
fn eval_asr_identical_files_score_zero() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.txt");
    fs::write(&f, "ew roje\nçûm bo bazar\n").unwrap();
    let csv = ok(&["eval-asr", "--ref", p(&f), "--hyp", p(&f)], "");
    assert_eq!(csv.lines().nth(1).unwrap(), "0.00,0,0,0,5,2");
}

#[test]
fn eval_mt_reports_requested_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("a.txt");
    fs::write(&f, "ew roje çûm bo bazar\n").unwrap();
    let csv = ok(&["eval-mt", "--refs", p(&f), "--hyp", p(&f), "--metric", "chrf"], "");
    assert_eq!(csv, "metric,score,sentences,references\nchrf2,100.00,1,1\n");
    let short = dir.path().join("b.txt");
    fs::write(&short, "").unwrap();
    let o = ckbv(&["eval-mt", "--refs", p(&f), "--hyp", p(&short)], "");
    assert!(!o.status.success());
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["kind"], "metrics");
}

#[test]
fn similarity_matrix_symmetric_with_full_diagonal() {
    let csv = ok(&["similarity"], "");
    let rows: Vec<Vec<&str>> = csv.lines().skip(1).map(|l| l.split(',').skip(1).collect()).collect();
    for (i, row) in rows.iter().enumerate() {
        assert_eq!(row[i], "100.00");
        for (j, cell) in row.iter().enumerate() {
            assert_eq!(*cell, rows[j][i]);
        }
    }
}

#[test]
fn errors_are_machine_readable() {
    let o = ckbv(&["dialectalize", "--target", "ckb-snn", "--no-such-flag"], "");
    assert_eq!(o.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["kind"], "usage");
    let o = ckbv(&["lid-predict", "--model", "/nonexistent/model.bin"], "x\n");
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert!(err["error"].as_str().unwrap().contains("model.bin"));
    let o = ckbv(&["dialectalize", "--target", "ckb-xyz"], "a\n");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn corpus_commands_on_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let episodes = support::fixture_dir().join("corpus/episodes.csv");
    let built = dir.path().join("corpus");
    let summary = ok(&["corpus-build", "--episodes", p(&episodes), "--out", p(&built)], "");
    assert_eq!(summary, "episodes,utterances,exclusions\n2,11,1\n");
    let expected = fs::read_to_string(support::fixture_dir().join("corpus/expected_stats.csv")).unwrap();
    assert_eq!(ok(&["corpus-stats", "--corpus", p(&built)], ""), expected);
    let listing = |name: &str| {
        let out = dir.path().join(name);
        ok(
            &[
                "corpus-split",
                "--corpus",
                p(&built),
                "--out",
                p(&out),
                "--seed",
                "0",
                "--test-size",
                "ckb-snn=2",
                "--test-size",
                "ckb-hwl=1",
            ],
            "",
        );
        ["train.txt", "validation.txt", "test.txt"].map(|f| fs::read(out.join(f)).unwrap())
    };
    assert_eq!(listing("a"), listing("b"));
}

#[test]
fn corpus_build_runs_slice_command_per_segment() {
    let dir = tempfile::tempdir().unwrap();
    let episodes = support::fixture_dir().join("corpus/episodes.csv");
    let built = dir.path().join("corpus");
    ok(
        &[
            "corpus-build",
            "--episodes",
            p(&episodes),
            "--out",
            p(&built),
            "--slice-cmd",
            "cp episodes.csv {output}",
        ],
        "",
    );
    assert_eq!(fs::read_dir(built.join("audio")).unwrap().count(), 11);
    assert!(built.join("audio/snn01_1.ogg").exists());
}

#[test]
fn lid_train_predict_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let (train, test) = support::disjoint_alphabet_corpus(200, 0);
    let tsv = |xs: &[ckb_varieties::lid::LabeledExample]| {
        xs.iter()
            .map(|e| format!("{}\t{}\n", e.label, e.text.as_str()))
            .collect::<String>()
    };
    let (tr, te) = (dir.path().join("train.tsv"), dir.path().join("test.tsv"));
    fs::write(&tr, tsv(&train)).unwrap();
    fs::write(&te, tsv(&test)).unwrap();
    let model = dir.path().join("m.bin");
    let small = ["--dim", "16", "--buckets", "65536", "--epochs", "10"];
    let mut args = vec![
        "lid-train",
        "--train",
        p(&tr),
        "--model",
        p(&model),
        "--level",
        "language",
    ];
    args.extend(small);
    ok(&args, "");
    let pred = ok(&["lid-predict", "--model", p(&model), "--k", "2"], "abc\nijk\n");
    let lines: Vec<&str> = pred.lines().collect();
    assert_eq!(lines.len(), 5);
    assert!(lines[1].starts_with("1,1,ckb,"));
    assert!(lines[3].starts_with("2,1,kmr,"));
    let conf = dir.path().join("confusion.csv");
    let report = ok(
        &[
            "lid-eval",
            "--model",
            p(&model),
            "--test",
            p(&te),
            "--confusion",
            p(&conf),
        ],
        "",
    );
    assert!(report.contains("\nmacro,,,1.0000,40\n"), "{report}");
    assert_eq!(
        fs::read_to_string(conf).unwrap(),
        "true\\predicted,ckb,kmr\nckb,20,0\nkmr,0,20\n"
    );
}

#[test]
fn mt_experiment_identity_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("std.txt"), "deçim bo mal\nxoş e\n").unwrap();
    fs::write(dir.path().join("snn.txt"), "eçim bo mal\nxweş e\n").unwrap();
    fs::write(dir.path().join("en.txt"), "deçim bo mal\nxoş e\n").unwrap();
    fs::write(
        dir.path().join("exp.toml"),
        r#"
[[system]]
name = "echo"
kind = "identity"

[[experiment]]
dialect = "ckb-snn"
direction = "en-ckb"
systems = ["echo"]
modes = ["baseline", "postprocess"]
source = "std.txt"
references = ["snn.txt"]

[[experiment]]
dialect = "ckb-snn"
direction = "ckb-en"
systems = ["echo"]
modes = ["baseline", "preprocess"]
source = "snn.txt"
references = ["en.txt"]
"#,
    )
    .unwrap();
    let pivot = dir.path().join("pivot.csv");
    let report = ok(
        &[
            "mt-experiment",
            "--config",
            p(&dir.path().join("exp.toml")),
            "--pivot",
            p(&pivot),
        ],
        "",
    );
    let mut r = csv::Reader::from_reader(report.as_bytes());
    assert_eq!(
        &r.headers().unwrap().iter().take(6).collect::<Vec<_>>(),
        &["dialect", "direction", "system", "mode", "bleu", "chrf2"]
    );
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 4);
    let score = |i: usize| rows[i][5].parse::<f64>().unwrap();
    assert!(
        score(1) > score(0),
        "postprocess should close the gap to dialect references"
    );
    assert_eq!(&rows[1][3], "postprocess");
    assert_eq!(score(1), 100.0);
    assert_eq!((&rows[3][3], score(3)), ("preprocess", 100.0));
    assert!(rows[0][9].contains("\"mode\":\"baseline\""));
    let pivot = fs::read_to_string(pivot).unwrap();
    assert_eq!(pivot.lines().count(), 2);
    assert!(pivot.starts_with("dialect,echo en-ckb baseline bleu,"));
}

#[test]
fn mt_experiment_rejects_mode_direction_mismatch() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("a.txt"), "x\n").unwrap();
    fs::write(
        dir.path().join("exp.json"),
        r#"{"system": [{"name": "id", "kind": "identity"}],
            "experiment": [{"dialect": "ckb-snn", "direction": "en-ckb", "systems": ["id"],
                            "modes": ["preprocess"], "source": "a.txt", "references": ["a.txt"]}]}"#,
    )
    .unwrap();
    let o = ckbv(&["mt-experiment", "--config", p(&dir.path().join("exp.json"))], "");
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["kind"], "schema");
}
