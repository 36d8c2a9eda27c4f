use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use docharvest_core::affiliation::parse_affiliation;
use docharvest_core::body::HeaderConfig;
use docharvest_core::citation::{clean_reference, parse_citation};
use docharvest_core::classify::{select_features, train_zone_classifier, zone_dataset, ClassifierTarget};
use docharvest_core::dict::Dictionaries;
use docharvest_core::error::Error;
use docharvest_core::eval::evaluate;
use docharvest_core::geom::Document;
use docharvest_core::ingest::{load_chardump, store_chardump, CleaningConfig};
use docharvest_core::model_io::{load_model, store_model, ModelFormat};
use docharvest_core::models::{default_setup, train_default_bundle, BundleTrainingConfig, ModelBundle};
use docharvest_core::pipeline::{extract, layout, Input, PipelineOptions};
use docharvest_core::record::{bibtex, emit, load_record, OutputFormat};
use docharvest_core::segment::SegmenterConfig;
use docharvest_core::synth::{generate_synthetic, SynthSpec};
use docharvest_core::tagger::{LabeledText, TaggerModel, TaggerTask};
use docharvest_learn::crf::CrfTrainOptions;
use docharvest_learn::grid::{grid_search, GridSearchSpec};
use docharvest_learn::MulticlassOptions;
use serde::Deserialize;

const MODELS_ENV: &str = "DOCHARVEST_MODELS";

#[derive(Parser)]
#[command(name = "docharvest", version, about = "Structured metadata, body and bibliography extraction from scholarly documents")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline on a character dump (or a segmented model).
    Extract(ExtractArgs),
    /// Segment a character dump into a model-json document.
    Segment {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Train zone classifiers, sequence taggers, or a whole bundle.
    #[command(subcommand)]
    Train(TrainCommand),
    /// Parse one reference string.
    ParseCitation {
        #[arg(long)]
        text: String,
        #[arg(long, value_enum, default_value = "json")]
        format: CitationFormat,
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Parse one affiliation string.
    ParseAffiliation {
        #[arg(long)]
        text: String,
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Score extracted record-json files against ground truth with the same names.
    Evaluate {
        #[arg(long)]
        extracted: PathBuf,
        #[arg(long)]
        truth: PathBuf,
        #[arg(long, default_value = "text")]
        format: ReportFormat,
    },
    /// Write generated documents: chardump, labelled model and truth record.
    Synth {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: u64,
        /// 1–3; cycles through all three when omitted.
        #[arg(long)]
        columns: Option<usize>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct ExtractArgs {
    /// Character dump (chardump-json), or model-json with --skip-segmentation.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// record-json, jats-xml or bibtex-refs.
    #[arg(long, default_value = "record-json")]
    format: String,
    /// Model bundle directory; defaults to $DOCHARVEST_MODELS.
    #[arg(long)]
    models: Option<PathBuf>,
    /// The input is an already segmented model-json document.
    #[arg(long)]
    skip_segmentation: bool,
    /// TOML file with [cleaning], [segmenter] and [headers] tables.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Subcommand)]
enum TrainCommand {
    /// Zone classifier from labelled model-json documents.
    Svm {
        #[arg(long, value_enum)]
        target: Target,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// `fixed` uses the target's standard kernel and C, `default` runs the
        /// full grid search, anything else is read as a TOML grid specification.
        #[arg(long, default_value = "fixed")]
        grid: String,
        /// Number of τ-ranked features; defaults to the target's usual count.
        #[arg(long)]
        features: Option<usize>,
    },
    /// Sequence tagger from a markup file, one example per line.
    Crf {
        #[arg(long, value_enum)]
        task: Task,
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// The default bundle, trained on generated data only.
    Bundle {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 1000)]
        seed: u64,
        #[arg(long, default_value_t = 40)]
        documents: usize,
        #[arg(long, default_value_t = 600)]
        citations: usize,
        #[arg(long, default_value_t = 500)]
        affiliations: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Category,
    Metadata,
    Body,
}

#[derive(Clone, Copy, ValueEnum)]
enum Task {
    Citation,
    Affiliation,
}

#[derive(Clone, Copy, ValueEnum)]
enum CitationFormat {
    Json,
    Bibtex,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct ConfigFile {
    cleaning: CleaningConfig,
    segmenter: SegmenterConfig,
    headers: HeaderConfig,
}

/// Failure with its exit code: 2 input, 3 model, 4 stage.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse { .. } | Error::EmptyInput | Error::Io(_) | Error::IncomparableDocuments(_) | Error::Config(_) => 2,
            Error::InvalidModel(_) | Error::Model(_) | Error::Schema(_) => 3,
            _ => 4,
        };
        Failure(code, e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn input_error(msg: impl Into<String>) -> Failure {
    Failure(2, msg.into())
}

fn read(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| input_error(format!("{}: {e}", path.display())))
}

fn write_out(out: Option<&Path>, bytes: &[u8]) -> Outcome {
    match out {
        Some(p) => fs::write(p, bytes).map_err(|e| input_error(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(bytes).map_err(|e| Failure(4, e.to_string()))
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<ConfigFile, Failure> {
    let Some(p) = path else { return Ok(ConfigFile::default()) };
    let text = String::from_utf8(read(p)?).map_err(|e| input_error(e.to_string()))?;
    toml::from_str(&text).map_err(|e| input_error(format!("{}: {e}", p.display())))
}

fn load_bundle(dir: Option<&Path>) -> Result<ModelBundle, Failure> {
    let dir = match dir {
        Some(d) => d.to_path_buf(),
        None => std::env::var_os(MODELS_ENV).map(PathBuf::from).ok_or_else(|| {
            Failure(3, format!("no model bundle: pass --models or set {MODELS_ENV} (create one with `docharvest train bundle`)"))
        })?,
    };
    Ok(ModelBundle::load(&dir)?)
}

fn cmd_extract(a: &ExtractArgs) -> Outcome {
    let format: OutputFormat = a.format.parse()?;
    let cfg = load_config(a.config.as_deref())?;
    let bytes = read(&a.input)?;
    let input = if a.skip_segmentation {
        Input::Model(load_model(&bytes, ModelFormat::ModelJson)?)
    } else {
        Input::Chars(load_chardump(&bytes)?)
    };
    let bundle = load_bundle(a.models.as_deref())?;
    let opts = PipelineOptions {
        cleaning: cfg.cleaning,
        segmenter: cfg.segmenter,
        headers: cfg.headers,
        skip_body: false,
    };
    let record = extract(&input, &bundle, &opts)?;
    for w in &record.warnings {
        eprintln!("warning: {w}");
    }
    write_out(a.out.as_deref(), &emit(&record, format))
}

fn cmd_segment(input: &Path, out: Option<&Path>, config: Option<&Path>) -> Outcome {
    let cfg = load_config(config)?;
    let dump = load_chardump(&read(input)?)?;
    let opts = PipelineOptions {
        cleaning: cfg.cleaning,
        segmenter: cfg.segmenter,
        ..PipelineOptions::default()
    };
    let mut warnings = Vec::new();
    let doc = layout(&dump, &opts, &mut warnings);
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    write_out(out, &store_model(&doc))
}

fn load_documents(dir: &Path) -> Result<Vec<Document>, Failure> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| input_error(format!("{}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.to_string_lossy().ends_with(".model.json"))
        .collect();
    paths.sort();
    if paths.is_empty() {
        return Err(input_error(format!("no *.model.json documents in {}", dir.display())));
    }
    paths.iter().map(|p| Ok(load_model(&read(p)?, ModelFormat::ModelJson)?)).collect()
}

fn cmd_train_svm(target: Target, data: &Path, out: &Path, grid: &str, features: Option<usize>) -> Outcome {
    let target = match target {
        Target::Category => ClassifierTarget::Category,
        Target::Metadata => ClassifierTarget::Metadata,
        Target::Body => ClassifierTarget::Body,
    };
    let dict = Dictionaries::builtin();
    let docs = load_documents(data)?;
    let dataset = zone_dataset(&docs, target, dict);
    let mut setup = default_setup(target);
    if let Some(n) = features {
        setup.features = n;
    }
    let report = select_features(&dataset, &[], setup.kernel, setup.c, 5)?;
    let schema = report.top(setup.features)?;
    if grid != "fixed" {
        let spec = if grid == "default" {
            GridSearchSpec::default()
        } else {
            let text = String::from_utf8(read(Path::new(grid))?).map_err(|e| input_error(e.to_string()))?;
            toml::from_str(&text).map_err(|e| input_error(format!("{grid}: {e}")))?
        };
        let samples = dataset.project(&schema);
        let res = grid_search(&samples, &dataset.labels, &dataset.label_names, &spec, &MulticlassOptions::default())
            .map_err(Error::from)?;
        let best = res.best_point();
        eprintln!("grid: best {:?} C={} (mean F {:.4})", best.kernel, best.c, res.results[res.best].mean_f);
        setup.kernel = best.kernel;
        setup.c = best.c;
    }
    let clf = train_zone_classifier(&dataset, target, schema, setup.kernel, setup.c)?;
    eprintln!("{target}: {} samples, {} features", dataset.len(), clf.schema.len());
    write_out(Some(out), &clf.to_json())
}

fn cmd_train_crf(task: Task, data: &Path, out: &Path) -> Outcome {
    let task = match task {
        Task::Citation => TaggerTask::Citation,
        Task::Affiliation => TaggerTask::Affiliation,
    };
    let text = String::from_utf8(read(data)?).map_err(|e| input_error(e.to_string()))?;
    let examples: Vec<LabeledText> = text
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(LabeledText::parse_markup)
        .collect::<Result<_, _>>()?;
    let model = TaggerModel::train(task, &examples, Dictionaries::builtin(), &CrfTrainOptions::default())?;
    write_out(Some(out), &model.to_json())
}

fn cmd_evaluate(extracted: &Path, truth: &Path, format: ReportFormat) -> Outcome {
    let mut names: Vec<String> = fs::read_dir(truth)
        .map_err(|e| input_error(format!("{}: {e}", truth.display())))?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .filter(|n| n.ends_with(".json") && !n.ends_with(".chars.json") && !n.ends_with(".model.json"))
        .collect();
    names.sort();
    let mut pairs = Vec::new();
    for n in &names {
        let e = extracted.join(n);
        if !e.exists() {
            eprintln!("warning: no extracted record for {n}");
            continue;
        }
        pairs.push((load_record(&read(&e)?)?, load_record(&read(&truth.join(n))?)?));
    }
    let report = evaluate(&pairs);
    let bytes = match format {
        ReportFormat::Json => serde_json::to_vec_pretty(&report).expect("report serializes"),
        ReportFormat::Text => {
            let fmt = |v: Option<f64>| v.map_or("-".to_string(), |v| format!("{:.4}", v));
            let mut s = format!("{} documents\n{:<20} {:>8} {:>8} {:>8}\n", report.documents, "category", "P", "R", "F");
            for c in &report.categories {
                s.push_str(&format!("{:<20} {:>8} {:>8} {:>8}\n", c.category.to_string(), fmt(c.precision), fmt(c.recall), fmt(c.f)));
            }
            s.into_bytes()
        }
    };
    write_out(None, &bytes)
}

fn cmd_synth(seed: u64, count: u64, columns: Option<usize>, out: &Path) -> Outcome {
    if columns.is_some_and(|c| !(1..=3).contains(&c)) {
        return Err(input_error("--columns must be 1, 2 or 3"));
    }
    fs::create_dir_all(out).map_err(|e| input_error(format!("{}: {e}", out.display())))?;
    for s in seed..seed + count {
        let mut spec = SynthSpec::with_seed(s);
        spec.columns = columns.unwrap_or(1 + (s % 3) as usize);
        let o = generate_synthetic(&spec);
        let base = out.join(format!("doc{s:05}"));
        let w = |suffix: &str, bytes: &[u8]| write_out(Some(&base.with_extension(suffix)), bytes);
        w("chars.json", &store_chardump(&o.chardump))?;
        w("model.json", &store_model(&o.ground))?;
        w("json", &emit(&o.record, OutputFormat::RecordJson))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Extract(a) => cmd_extract(&a),
        Command::Segment { input, out, config } => cmd_segment(&input, out.as_deref(), config.as_deref()),
        Command::Train(TrainCommand::Svm { target, data, out, grid, features }) => {
            cmd_train_svm(target, &data, &out, &grid, features)
        }
        Command::Train(TrainCommand::Crf { task, data, out }) => cmd_train_crf(task, &data, &out),
        Command::Train(TrainCommand::Bundle { out, seed, documents, citations, affiliations }) => {
            let bundle = train_default_bundle(&BundleTrainingConfig { seed, documents, citations, affiliations })?;
            bundle.save(&out)?;
            eprintln!("{}", bundle.manifest.description);
            Ok(())
        }
        Command::ParseCitation { text, format, models } => {
            let b = load_bundle(models.as_deref())?;
            let r = clean_reference(&parse_citation(&text, &b.citation, b.dict())?, b.dict());
            let bytes = match format {
                CitationFormat::Json => serde_json::to_vec_pretty(&r).expect("reference serializes"),
                CitationFormat::Bibtex => bibtex(std::slice::from_ref(&r)).into_bytes(),
            };
            write_out(None, &bytes)?;
            write_out(None, b"\n")
        }
        Command::ParseAffiliation { text, models } => {
            let b = load_bundle(models.as_deref())?;
            let a = parse_affiliation(&text, &b.affiliation, b.dict())?;
            write_out(None, &serde_json::to_vec_pretty(&a).expect("affiliation serializes"))?;
            write_out(None, b"\n")
        }
        Command::Evaluate { extracted, truth, format } => cmd_evaluate(&extracted, &truth, format),
        Command::Synth { seed, count, columns, out } => cmd_synth(seed, count, columns, &out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
