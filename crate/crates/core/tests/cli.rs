mod common;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use mwe_partition::corpus::dimsum::{dimsum_string, parse_dimsum};
use mwe_partition::corpus::CorpusFormat;
use tempfile::TempDir;

use common::{fixture, sentence, with_pos};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mwe-partition")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Five sentences in which "ice cream" and "New York" are always MWEs and
/// nothing else ever is.
fn tiny_corpus(dir: &TempDir) -> PathBuf {
    let corpus = vec![
        with_pos(sentence(&["I", "like", "ice", "cream"], &[&[2, 3]])),
        with_pos(sentence(&["New", "York", "is", "big"], &[&[0, 1]])),
        with_pos(sentence(&["We", "ate", "ice", "cream", "in", "New", "York"], &[&[2, 3], &[5, 6]])),
        with_pos(sentence(&["It", "is", "warm"], &[])),
        with_pos(sentence(&["They", "left", "New", "York"], &[&[2, 3]])),
    ];
    let path = dir.path().join("tiny.dimsum");
    fs::write(&path, dimsum_string(&corpus).unwrap()).unwrap();
    path
}

#[test]
fn eval_against_itself_is_perfect() {
    let f = fixture("sample.dimsum");
    let o = run(&["eval", "--format", "dimsum", "--kv", p(&f), p(&f)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("F1\t1.000000\n"));

    let f = fixture("sample.parseme");
    let o = run(&["eval", "--format", "parseme", p(&f), p(&f)]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("scheme: token\n"));
    assert!(stdout(&o).contains("F1: 1.0000"));
}

#[test]
fn train_then_segment_reproduces_gold() {
    let dir = TempDir::new().unwrap();
    let corpus = tiny_corpus(&dir);
    let model = dir.path().join("model");
    let o = run(&["train", "--model", p(&model), "--pos", p(&corpus)]);
    assert!(o.status.success(), "{}", stderr(&o));

    let out1 = dir.path().join("pred1.dimsum");
    let out2 = dir.path().join("pred2.dimsum");
    for (out, workers) in [(&out1, "1"), (&out2, "3")] {
        let o = run(&["segment", "--model", p(&model), "--workers", workers, "-o", p(out), p(&corpus)]);
        assert!(o.status.success(), "{}", stderr(&o));
    }
    let predicted = fs::read_to_string(&out1).unwrap();
    assert_eq!(predicted, fs::read_to_string(&out2).unwrap());
    let gold = parse_dimsum(&fs::read_to_string(&corpus).unwrap()).unwrap();
    let pred = parse_dimsum(&predicted).unwrap();
    let spans = |s: &[mwe_partition::AnnotatedSentence]| {
        s.iter()
            .map(|x| x.mwes.iter().map(|m| m.indices().to_vec()).collect::<Vec<_>>())
            .collect::<Vec<_>>()
    };
    assert_eq!(spans(&pred), spans(&gold));

    let o = run(&["eval", p(&corpus), p(&out1)]);
    assert!(stdout(&o).contains("F1: 1.0000"));
}

#[test]
fn strict_threshold_tags_nothing() {
    let dir = TempDir::new().unwrap();
    let corpus = tiny_corpus(&dir);
    let model = dir.path().join("model");
    assert!(run(&["train", "--model", p(&model), p(&corpus)]).status.success());
    let o = run(&["segment", "--model", p(&model), "--q-tok", "1", p(&corpus)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    for line in out.lines().filter(|l| !l.is_empty()) {
        assert_eq!(line.split('\t').nth(4), Some("O"), "{line}");
    }
}

#[test]
fn raw_input_to_parseme_output() {
    let dir = TempDir::new().unwrap();
    let corpus = tiny_corpus(&dir);
    let model = dir.path().join("model");
    assert!(run(&["train", "--model", p(&model), p(&corpus)]).status.success());
    let raw = dir.path().join("in.txt");
    fs::write(&raw, "We like ice cream .\n").unwrap();
    let o = run(&["segment", "--model", p(&model), "--input-format", "raw", "--format", "parseme", p(&raw)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "1\tWe\t_\t_\n2\tlike\t_\t_\n3\tice\t_\t1:OTH\n4\tcream\tnsp\t1\n5\t.\t_\t_\n\n"
    );
    assert!(CorpusFormat::Parseme.parse(&stdout(&o)).is_ok());
}

#[test]
fn tune_updates_bundle_and_exports_grid() {
    let dir = TempDir::new().unwrap();
    let corpus = tiny_corpus(&dir);
    let model = dir.path().join("model");
    let grid = dir.path().join("grid.tsv");
    let o = run(&[
        "tune", "--model", p(&model), "--folds", "5", "--lfd", "--grid-out", p(&grid), p(&corpus),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("base best q_tok "));
    assert!(stdout(&o).contains("lfd best q_tok "));
    let tsv = fs::read_to_string(&grid).unwrap();
    assert_eq!(tsv.lines().count(), 102);
    let meta = fs::read_to_string(model.join("meta.txt")).unwrap();
    assert!(meta.contains("use_lfd=true"), "{meta}");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = TempDir::new().unwrap();
    let corpus = tiny_corpus(&dir);
    let model = dir.path().join("model");
    let conf = dir.path().join("run.conf");
    fs::write(&conf, format!("model = {}\nq-tok = 1\n", p(&model))).unwrap();
    assert!(run(&["train", "--config", p(&conf), p(&corpus)]).status.success());
    let meta = fs::read_to_string(model.join("meta.txt")).unwrap();
    assert!(meta.contains("q_tok=1"), "{meta}");
    assert!(run(&["train", "--config", p(&conf), "--q-tok", "0.3", p(&corpus)]).status.success());
    let meta = fs::read_to_string(model.join("meta.txt")).unwrap();
    assert!(meta.contains("q_tok=0.3"), "{meta}");
}

#[test]
fn stochastic_mode_needs_a_seed_and_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let raw = dir.path().join("in.txt");
    fs::write(&raw, "a b c d e f g h\ni j k l\n").unwrap();
    let args = ["segment", "--input-format", "raw", "--seed", "7", p(&raw)];
    let (a, b) = (run(&args), run(&args));
    assert!(a.status.success(), "{}", stderr(&a));
    assert_eq!(a.stdout, b.stdout);
    let o = run(&["segment", "--input-format", "raw", p(&raw)]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    assert_eq!(run(&["segment", "--q-tok", "2"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let bad = dir.path().join("bad.dimsum");
    fs::write(&bad, "1\ta\ta\tX\tO\t0\t\t\t\n2\tb\tb\tX\tQ\t0\t\t\t\n\n").unwrap();
    let o = run(&["eval", p(&bad), p(&bad)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains(&format!("{}:2:", p(&bad))), "{}", stderr(&o));

    let missing = dir.path().join("missing.dimsum");
    assert_eq!(run(&["eval", p(&missing), p(&missing)]).status.code(), Some(1));

    // a POS model cannot segment input without tags
    let corpus = tiny_corpus(&dir);
    let model = dir.path().join("model");
    assert!(run(&["train", "--pos", "--model", p(&model), p(&corpus)]).status.success());
    let raw = dir.path().join("in.txt");
    fs::write(&raw, "ice cream\n").unwrap();
    let o = run(&["segment", "--model", p(&model), "--input-format", "raw", p(&raw)]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));

    let parseme = fixture("sample.parseme");
    let o = run(&["eval", "--format", "parseme", p(&parseme), p(&fixture("sample.dimsum"))]);
    assert_eq!(o.status.code(), Some(3));

    let empty = dir.path().join("not-a-model");
    fs::create_dir(&empty).unwrap();
    let o = run(&["segment", "--model", p(&empty), p(&corpus)]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}
