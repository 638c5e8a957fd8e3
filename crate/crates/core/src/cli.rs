//! Command-line front end: `train`, `tune`, `segment` and `eval`.
//!
//! Every long flag can also be given in a `key = value` file passed with
//! `--config`; flags on the command line take precedence.

use std::ffi::OsString;
use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::builder::RangedU64ValueParser;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, attach_conllu_pos, CorpusFormat, SupportData, SupportKind};
use crate::error::Error;
use crate::evaluation::{evaluate, Scheme};
use crate::partition::Threshold;
use crate::segmenter::{self, SegmenterModel, TrainConfig, DEFAULT_GAP_WINDOW};
use crate::sentence::AnnotatedSentence;
use crate::tuner::{CrossValidation, TuneConfig, DEFAULT_FOLDS};

pub const EXIT_IO: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_PARSE: u8 = 3;
pub const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Parser)]
#[command(name = "mwe-partition", version, about = "Boundary-partition MWE segmentation")]
pub struct Cli {
    /// File of `key = value` lines supplying defaults for long flags.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train a model bundle from an annotated corpus.
    Train(TrainArgs),
    /// Cross-validated threshold scan; writes the best pair into the bundle.
    Tune(TuneArgs),
    /// Predict MWEs and write them in a corpus format.
    Segment(SegmentArgs),
    /// Score predictions against gold.
    Eval(EvalArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormatArg {
    Dimsum,
    Parseme,
}

impl From<FormatArg> for CorpusFormat {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Dimsum => CorpusFormat::Dimsum,
            FormatArg::Parseme => CorpusFormat::Parseme,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum InputFormatArg {
    Dimsum,
    Parseme,
    /// One whitespace-tokenized sentence per line.
    Raw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Link,
    Token,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Link => Scheme::Link,
            SchemeArg::Token => Scheme::Token,
        }
    }
}

/// Options describing how a model is trained.
#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long, value_enum, default_value = "dimsum")]
    pub format: FormatArg,
    /// Add the POS channel.
    #[arg(long)]
    pub pos: bool,
    /// CoNLL-U file supplying POS tags for a PARSEME corpus.
    #[arg(long, value_name = "FILE")]
    pub pos_file: Option<PathBuf>,
    #[arg(long)]
    pub lowercase: bool,
    /// Maximum number of segments a gap may span.
    #[arg(long, default_value_t = DEFAULT_GAP_WINDOW, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub gap_window: usize,
    /// Multiword-form lexicon, one form per line.
    #[arg(long, value_name = "FILE")]
    pub support_lexicon: Vec<PathBuf>,
    /// Sentences with `[[...]]` marked expressions.
    #[arg(long, value_name = "FILE")]
    pub support_context: Vec<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    #[command(flatten)]
    pub model_args: ModelArgs,
    /// Bundle directory to write.
    #[arg(long, value_name = "DIR")]
    pub model: PathBuf,
    #[arg(long, default_value = "0.5", value_parser = parse_threshold)]
    pub q_tok: Threshold,
    #[arg(long, default_value = "0.5", value_parser = parse_threshold)]
    pub q_pos: Threshold,
    /// Record LFD pruning as the bundle default.
    #[arg(long)]
    pub lfd: bool,
    /// Training corpus.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub model_args: ModelArgs,
    /// Bundle directory; trained on the full corpus if absent.
    #[arg(long, value_name = "DIR")]
    pub model: PathBuf,
    /// Also run the LFD rescan above the base optimum.
    #[arg(long)]
    pub lfd: bool,
    #[arg(long, default_value_t = DEFAULT_FOLDS, value_parser = RangedU64ValueParser::<usize>::new().range(2..))]
    pub folds: usize,
    /// Worker threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Scoring scheme; defaults to link for DIMSUM and token for PARSEME.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Write the base grid surface as TSV.
    #[arg(long, value_name = "FILE")]
    pub grid_out: Option<PathBuf>,
    /// Write the LFD rescan surface as TSV.
    #[arg(long, value_name = "FILE")]
    pub lfd_grid_out: Option<PathBuf>,
    /// Tuning corpus.
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct SegmentArgs {
    /// Output format.
    #[arg(long, value_enum, default_value = "dimsum")]
    pub format: FormatArg,
    /// Input format; defaults to the output format.
    #[arg(long, value_enum)]
    pub input_format: Option<InputFormatArg>,
    /// Bundle directory; not needed with `--seed`.
    #[arg(long, value_name = "DIR")]
    pub model: Option<PathBuf>,
    #[arg(long, value_parser = parse_threshold)]
    pub q_tok: Option<Threshold>,
    #[arg(long, value_parser = parse_threshold)]
    pub q_pos: Option<Threshold>,
    /// Force LFD pruning on.
    #[arg(long, conflicts_with = "no_lfd")]
    pub lfd: bool,
    /// Force LFD pruning off.
    #[arg(long)]
    pub no_lfd: bool,
    #[arg(long, value_parser = RangedU64ValueParser::<usize>::new().range(1..))]
    pub gap_window: Option<usize>,
    /// CoNLL-U file supplying POS tags.
    #[arg(long, value_name = "FILE")]
    pub pos_file: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Random binding at `--q-tok` instead of a model.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output file; standard output if omitted.
    #[arg(short, long, value_name = "FILE")]
    pub output: Option<PathBuf>,
    /// Input file, or `-` for standard input.
    #[arg(default_value = "-")]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long, value_enum, default_value = "dimsum")]
    pub format: FormatArg,
    /// Defaults to link for DIMSUM and token for PARSEME.
    #[arg(long, value_enum)]
    pub scheme: Option<SchemeArg>,
    /// Print `key<TAB>value` lines instead of the text block.
    #[arg(long)]
    pub kv: bool,
    pub gold: PathBuf,
    pub predicted: PathBuf,
}

fn parse_threshold(s: &str) -> Result<Threshold, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    Threshold::new(v).map_err(|e| e.to_string())
}

/// Failure carrying its exit status.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CliError {
            code,
            message: message.into(),
        }
    }

    /// Classifies a library error; `file` prefixes parse locations.
    fn from_error(err: Error, file: Option<&Path>) -> Self {
        let code = match &err {
            Error::Io(_) => EXIT_IO,
            Error::Parse { .. } | Error::Malformed(_) | Error::InvalidSpans(_) => EXIT_PARSE,
            Error::InvalidThreshold(_) | Error::Config(_) => EXIT_USAGE,
            Error::ChannelMismatch { .. }
            | Error::UnassignedState(_)
            | Error::MissingPos { .. }
            | Error::Inexpressible { .. }
            | Error::LengthMismatch(_)
            | Error::Model(_) => EXIT_MISMATCH,
        };
        let message = match (&err, file) {
            (Error::Parse { line, message }, Some(f)) => format!("{}:{line}: {message}", f.display()),
            (_, Some(f)) => format!("{}: {err}", f.display()),
            (_, None) => err.to_string(),
        };
        CliError { code, message }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::from_error(err, None)
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn at(file: &Path) -> impl Fn(Error) -> CliError + '_ {
    move |e| CliError::from_error(e, Some(file))
}

fn read_text(path: &Path) -> CliResult<String> {
    if path == Path::new("-") {
        let mut text = String::new();
        io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| CliError::new(EXIT_IO, format!("<stdin>: {e}")))?;
        return Ok(text);
    }
    fs::read_to_string(path).map_err(|e| CliError::new(EXIT_IO, format!("{}: {e}", path.display())))
}

fn write_text(path: Option<&Path>, text: &str, stdout: &mut dyn Write) -> CliResult<()> {
    let result = match path {
        Some(p) => fs::write(p, text),
        None => stdout.write_all(text.as_bytes()),
    };
    result.map_err(|e| {
        let name = path.map_or_else(|| "<stdout>".to_owned(), |p| p.display().to_string());
        CliError::new(EXIT_IO, format!("{name}: {e}"))
    })
}

fn read_corpus(path: &Path, format: CorpusFormat) -> CliResult<Vec<AnnotatedSentence>> {
    format.parse(&read_text(path)?).map_err(at(path))
}

fn attach_pos(sentences: &mut [AnnotatedSentence], pos_file: Option<&Path>) -> CliResult<()> {
    if let Some(p) = pos_file {
        attach_conllu_pos(sentences, &read_text(p)?).map_err(at(p))?;
    }
    Ok(())
}

fn read_support_files(args: &ModelArgs) -> CliResult<SupportData> {
    let mut support = SupportData::default();
    let files = args
        .support_lexicon
        .iter()
        .map(|p| (p, SupportKind::Lexicon))
        .chain(args.support_context.iter().map(|p| (p, SupportKind::Context)));
    for (path, kind) in files {
        support.extend(corpus::support::parse_support(&read_text(path)?, kind).map_err(at(path))?);
    }
    Ok(support)
}

fn default_scheme(format: CorpusFormat) -> Scheme {
    match format {
        CorpusFormat::Dimsum => Scheme::Link,
        CorpusFormat::Parseme => Scheme::Token,
    }
}

fn model_exists(dir: &Path) -> bool {
    dir.join(segmenter::META_FILE).is_file()
}

fn load_model(dir: &Path) -> CliResult<SegmenterModel> {
    SegmenterModel::load(dir).map_err(at(dir))
}

fn training_corpus(args: &ModelArgs, input: &Path) -> CliResult<Vec<AnnotatedSentence>> {
    let mut corpus = read_corpus(input, args.format.into())?;
    attach_pos(&mut corpus, args.pos_file.as_deref())?;
    Ok(corpus)
}

fn train_config(args: &ModelArgs, q_tok: Threshold, q_pos: Threshold) -> TrainConfig {
    TrainConfig {
        use_pos: args.pos,
        lowercase: args.lowercase,
        gap_window: args.gap_window,
        q_tok,
        q_pos,
    }
}

fn run_train(args: &TrainArgs, out: &mut dyn Write) -> CliResult<()> {
    let corpus = training_corpus(&args.model_args, &args.input)?;
    let support = read_support_files(&args.model_args)?;
    let config = train_config(&args.model_args, args.q_tok, args.q_pos);
    let mut model = segmenter::train(&corpus, &config, &support).map_err(at(&args.input))?;
    model.set_use_lfd(args.lfd);
    model.save(&args.model).map_err(at(&args.model))?;
    write_text(None, &format!("{model}\n"), out)
}

fn run_tune(args: &TuneArgs, out: &mut dyn Write) -> CliResult<()> {
    let format: CorpusFormat = args.model_args.format.into();
    let corpus = training_corpus(&args.model_args, &args.input)?;
    let support = read_support_files(&args.model_args)?;
    let mut model = if model_exists(&args.model) {
        let m = load_model(&args.model)?;
        if m.pos_stats().is_some() != args.model_args.pos {
            return Err(CliError::new(
                EXIT_MISMATCH,
                format!("{}: bundle POS channel does not match --pos", args.model.display()),
            ));
        }
        m
    } else {
        let config = train_config(&args.model_args, Threshold::ZERO, Threshold::ZERO);
        segmenter::train(&corpus, &config, &support).map_err(at(&args.input))?
    };
    let tune = TuneConfig {
        train: TrainConfig {
            lowercase: model.lowercase(),
            gap_window: model.gap_window(),
            ..train_config(&args.model_args, Threshold::ZERO, Threshold::ZERO)
        },
        scheme: args.scheme.map_or_else(|| default_scheme(format), Scheme::from),
        folds: args.folds,
        workers: args.workers,
        support,
    };
    let cv = CrossValidation::prepare(&corpus, &tune).map_err(at(&args.input))?;
    let base = cv.grid_search();
    if let Some(p) = &args.grid_out {
        write_text(Some(p), &base.to_tsv(), out)?;
    }
    let mut report = format!("base best {} F1 {:.6}\n", describe(&base.best), base.best_f1());
    let chosen = if args.lfd {
        let lfd = cv.grid_search_lfd(&base)?;
        if let Some(p) = &args.lfd_grid_out {
            write_text(Some(p), &lfd.to_tsv(), out)?;
        }
        report.push_str(&format!("lfd best {} F1 {:.6}\n", describe(&lfd.best), lfd.best_f1()));
        lfd.best
    } else {
        base.best
    };
    model.set_thresholds(chosen.q_tok(), chosen.q_pos())?;
    model.set_use_lfd(args.lfd);
    model.save(&args.model).map_err(at(&args.model))?;
    write_text(None, &report, out)
}

fn describe(p: &crate::tuner::GridPoint) -> String {
    match p.q_pos() {
        Some(q) => format!("q_tok {} q_pos {q}", p.q_tok()),
        None => format!("q_tok {}", p.q_tok()),
    }
}

fn run_segment(args: &SegmentArgs, out: &mut dyn Write) -> CliResult<()> {
    let format: CorpusFormat = args.format.into();
    let text = read_text(&args.input)?;
    let mut sentences = match args.input_format {
        Some(InputFormatArg::Raw) => corpus::parse_raw(&text),
        Some(InputFormatArg::Dimsum) => CorpusFormat::Dimsum.parse(&text).map_err(at(&args.input))?,
        Some(InputFormatArg::Parseme) => CorpusFormat::Parseme.parse(&text).map_err(at(&args.input))?,
        None => format.parse(&text).map_err(at(&args.input))?,
    };
    attach_pos(&mut sentences, args.pos_file.as_deref())?;

    let predictions = match (args.seed, &args.model) {
        (Some(seed), _) => {
            let q = args.q_tok.unwrap_or(Threshold::new(0.5)?);
            sentences
                .iter()
                .enumerate()
                .map(|(i, s)| segmenter::segment_stochastic(s, q, seed.wrapping_add(i as u64)))
                .collect::<crate::error::Result<Vec<_>>>()?
        }
        (None, Some(dir)) => {
            let mut model = load_model(dir)?;
            let q_tok = args.q_tok.unwrap_or(model.q_tok());
            let q_pos = args.q_pos.or(model.q_pos());
            if args.q_pos.is_some() && model.pos_stats().is_none() {
                return Err(CliError::new(EXIT_MISMATCH, "--q-pos given but the model has no POS channel"));
            }
            model.set_thresholds(q_tok, q_pos)?;
            if let Some(w) = args.gap_window {
                model.set_gap_window(w)?;
            }
            let use_lfd = (model.use_lfd() || args.lfd) && !args.no_lfd;
            model
                .segment_all(&sentences, use_lfd, args.workers)
                .map_err(at(&args.input))?
        }
        (None, None) => return Err(CliError::new(EXIT_USAGE, "segment needs --model or --seed")),
    };
    let predicted = segmenter::with_predictions(&sentences, predictions);
    let rendered = format.render(&predicted)?;
    write_text(args.output.as_deref(), &rendered, out)
}

fn run_eval(args: &EvalArgs, out: &mut dyn Write) -> CliResult<()> {
    let format: CorpusFormat = args.format.into();
    let gold = read_corpus(&args.gold, format)?;
    let predicted = read_corpus(&args.predicted, format)?;
    let scheme = args.scheme.map_or_else(|| default_scheme(format), Scheme::from);
    let report = evaluate(scheme, &gold, &predicted)?;
    let text = if args.kv {
        report.to_kv_lines()
    } else {
        format!("{report}\n")
    };
    write_text(None, &text, out)
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Train(a) => run_train(a, out),
        Command::Tune(a) => run_tune(a, out),
        Command::Segment(a) => run_segment(a, out),
        Command::Eval(a) => run_eval(a, out),
    }
}

/// Parses `key = value` lines; `#` starts a comment.
pub fn parse_config(text: &str) -> std::result::Result<Vec<(String, String)>, String> {
    let mut entries = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((k, v)) = line.split_once('=') else {
            return Err(format!("line {}: expected key = value", n + 1));
        };
        entries.push((k.trim().to_owned(), v.trim().to_owned()));
    }
    Ok(entries)
}

/// Finds the `--config` path and the subcommand name in raw arguments.
fn scan_args(args: &[OsString]) -> (Option<PathBuf>, Option<String>) {
    let command = Cli::command();
    let mut config = None;
    let mut name = None;
    let mut iter = args.iter().skip(1);
    while let Some(arg) = iter.next() {
        let Some(text) = arg.to_str() else { continue };
        if text == "--config" {
            config = iter.next().map(PathBuf::from);
        } else if let Some(path) = text.strip_prefix("--config=") {
            config = Some(PathBuf::from(path));
        } else if name.is_none() && command.find_subcommand(text).is_some() {
            name = Some(text.to_owned());
        }
    }
    (config, name)
}

fn given(args: &[OsString], long: &str) -> bool {
    let flag = format!("--{long}");
    args.iter()
        .filter_map(|a| a.to_str())
        .any(|a| a == flag || a.strip_prefix(flag.as_str()).is_some_and(|rest| rest.starts_with('=')))
}

/// Appends config entries whose flags were not given on the command line.
fn merge_config(args: &[OsString], name: &str, config: &[(String, String)]) -> Result<Vec<OsString>, String> {
    let command = Cli::command();
    let subcommand = command.find_subcommand(name).expect("known subcommand");
    let mut merged = args.to_vec();
    for (key, value) in config {
        let Some(arg) = subcommand.get_arguments().find(|a| a.get_long() == Some(key.as_str())) else {
            return Err(format!("config key {key:?} is not an option of {name}"));
        };
        if key == "config" || given(args, key) {
            continue;
        }
        if arg.get_action().takes_values() {
            merged.push(format!("--{key}").into());
            merged.push(value.into());
        } else {
            match value.as_str() {
                "true" => merged.push(format!("--{key}").into()),
                "false" => {}
                other => return Err(format!("config key {key:?} expects true or false, got {other:?}")),
            }
        }
    }
    Ok(merged)
}

fn parse_args(args: Vec<OsString>) -> std::result::Result<Cli, clap::Error> {
    let (Some(path), Some(name)) = scan_args(&args) else {
        return Cli::try_parse_from(args);
    };
    let config_error = |msg: String| {
        Cli::command().error(clap::error::ErrorKind::InvalidValue, format!("{}: {msg}", path.display()))
    };
    let text = fs::read_to_string(&path).map_err(|e| config_error(e.to_string()))?;
    let entries = parse_config(&text).map_err(config_error)?;
    Cli::try_parse_from(merge_config(&args, &name, &entries).map_err(config_error)?)
}

/// Entry point used by the binary; returns the process exit status.
pub fn main_with_args(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> ExitCode {
    ExitCode::from(exit_status(args, out, err))
}

/// Numeric status of one invocation.
pub fn exit_status(args: impl IntoIterator<Item = OsString>, out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match parse_args(args.into_iter().collect()) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match run(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {}", e.message);
            e.code
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<OsString> {
        std::iter::once("mwe-partition").chain(list.iter().copied()).map(OsString::from).collect()
    }

    #[test]
    fn config_lines() {
        let parsed = parse_config("# defaults\nq-tok = 0.7\n\nlfd=true # on\n").unwrap();
        assert_eq!(
            parsed,
            vec![("q-tok".into(), "0.7".into()), ("lfd".into(), "true".into())]
        );
        assert!(parse_config("q-tok 0.7").is_err());
    }

    #[test]
    fn flags_win_over_config() {
        let dir = tempfile::tempdir().unwrap();
        let conf = dir.path().join("run.conf");
        fs::write(&conf, "q-tok = 0.7\nq-pos = 0.2\nlfd = true\n").unwrap();
        let conf = conf.to_str().unwrap();
        let cli = parse_args(args(&["--config", conf, "segment", "--seed", "1", "--q-tok", "0.3", "in.txt"])).unwrap();
        let Command::Segment(s) = cli.command else { panic!() };
        assert_eq!(s.q_tok, Some(Threshold::new(0.3).unwrap()));
        assert_eq!(s.q_pos, Some(Threshold::new(0.2).unwrap()));
        assert!(s.lfd);
    }

    #[test]
    fn bad_config_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let conf = dir.path().join("run.conf");
        fs::write(&conf, "folds = 4\n").unwrap();
        let a = args(&["segment", "--config", conf.to_str().unwrap(), "--seed", "1"]);
        assert!(parse_args(a).is_err());
    }

    #[test]
    fn argument_validation() {
        assert!(parse_args(args(&["segment", "--q-tok", "1.5"])).is_err());
        assert!(parse_args(args(&["tune", "--model", "m", "--folds", "1", "c"])).is_err());
        assert!(parse_args(args(&["train", "--model", "m", "--gap-window", "0", "c"])).is_err());
        assert!(parse_args(args(&["segment", "--lfd", "--no-lfd"])).is_err());
    }

    #[test]
    fn segment_needs_model_or_seed() {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");
        fs::write(&input, "a b\n").unwrap();
        let code = exit_status(
            args(&["segment", "--input-format", "raw", input.to_str().unwrap()]),
            &mut out,
            &mut err,
        );
        assert_eq!(code, EXIT_USAGE);
    }
}
