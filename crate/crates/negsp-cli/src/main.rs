//! `negsp`: match, mine, and analyze sequential patterns with negation.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 budget
//! exceeded.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use negsp::core::{self, EmbeddingMode, NonInclusion, OccurrenceMode, SemanticsConfig};
use negsp::fca;
use negsp::matcher;
use negsp::miner::{self, MinerConfig, MinerError};
use negsp::survey;

#[derive(Parser)]
#[command(name = "negsp", version, about = "Sequential patterns with negation: matching, mining, and analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a pattern against every sequence of a dataset
    Match(MatchArgs),
    /// Mine frequent patterns (with negation) from a dataset
    Mine(MineArgs),
    /// Print the per-interpretation answer keys of the questionnaire
    Keys(KeysArgs),
    /// Classify questionnaire responses into semantic interpretations
    Classify(ClassifyArgs),
    /// Build a concept lattice from responses or an incidence matrix
    Lattice(LatticeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum NonInclusionArg {
    Partial,
    Total,
}

#[derive(Clone, Copy, ValueEnum)]
enum EmbeddingArg {
    Soft,
    Strict,
}

#[derive(Clone, Copy, ValueEnum)]
enum OccurrenceArg {
    Weak,
    Strong,
    StrongMinimal,
}

/// Semantics selection: either a preset or all three dimension flags.
/// There is deliberately no default; the choice changes what "contains"
/// means.
#[derive(Args)]
struct SemanticsArgs {
    /// Named preset (`ensp` = total/soft/strong, `negpspan` =
    /// total/soft/weak); overrides the three dimension flags
    #[arg(long, value_parser = ["ensp", "negpspan"])]
    semantics: Option<String>,
    #[arg(long, value_enum)]
    non_inclusion: Option<NonInclusionArg>,
    #[arg(long, value_enum)]
    embedding: Option<EmbeddingArg>,
    #[arg(long, value_enum)]
    occurrence: Option<OccurrenceArg>,
}

impl SemanticsArgs {
    fn resolve(&self) -> Result<SemanticsConfig, CliError> {
        if let Some(name) = &self.semantics {
            return SemanticsConfig::preset(name)
                .ok_or_else(|| CliError::Usage(format!("unknown semantics preset `{name}`")));
        }
        match (self.non_inclusion, self.embedding, self.occurrence) {
            (Some(ni), Some(em), Some(oc)) => Ok(SemanticsConfig::new(
                match ni {
                    NonInclusionArg::Partial => NonInclusion::Partial,
                    NonInclusionArg::Total => NonInclusion::Total,
                },
                match em {
                    EmbeddingArg::Soft => EmbeddingMode::Soft,
                    EmbeddingArg::Strict => EmbeddingMode::Strict,
                },
                match oc {
                    OccurrenceArg::Weak => OccurrenceMode::Weak,
                    OccurrenceArg::Strong => OccurrenceMode::Strong,
                    OccurrenceArg::StrongMinimal => OccurrenceMode::StrongMinimal,
                },
            )),
            _ => Err(CliError::Usage(
                "select a semantics: either --semantics <preset> or all of --non-inclusion, --embedding, --occurrence".into(),
            )),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

#[derive(Args)]
struct MatchArgs {
    /// Pattern, e.g. "b !e f"
    #[arg(long)]
    pattern: String,
    /// Dataset file, one sequence per line
    #[arg(long)]
    data: PathBuf,
    #[command(flatten)]
    semantics: SemanticsArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct MineArgs {
    /// Dataset file, one sequence per line
    #[arg(long)]
    data: PathBuf,
    /// Absolute support threshold
    #[arg(long)]
    minsup: usize,
    /// Maximum number of positive itemsets per pattern
    #[arg(long, default_value_t = 3)]
    max_pos_len: usize,
    /// Maximum number of items per positive itemset
    #[arg(long, default_value_t = 2)]
    max_itemset_size: usize,
    /// Maximum number of items per negated itemset (0 = positive mining only)
    #[arg(long, default_value_t = 1)]
    max_negation_size: usize,
    #[command(flatten)]
    semantics: SemanticsArgs,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct KeysArgs {
    /// Restrict to one question (Q1..Q5)
    #[arg(long)]
    question: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Args)]
struct ClassifyArgs {
    /// Responses CSV (participant,question,ticks,expertise,cs,researcher,logician)
    #[arg(long)]
    responses: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Tsv)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LatticeFormat {
    Dot,
    Json,
}

#[derive(Args)]
struct LatticeArgs {
    /// Build the context from a responses CSV (needs --question)
    #[arg(long, conflicts_with = "context", requires = "question")]
    responses: Option<PathBuf>,
    /// Question whose answers form the context (Q1..Q5)
    #[arg(long)]
    question: Option<String>,
    /// Build the context from an incidence-matrix CSV
    #[arg(long)]
    context: Option<PathBuf>,
    /// Concept enumeration budget
    #[arg(long, default_value_t = 100_000)]
    max_concepts: usize,
    #[arg(long, value_enum, default_value_t = LatticeFormat::Dot)]
    format: LatticeFormat,
    /// Write to a file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Data(String),
    Budget(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Budget(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Budget(m) => m,
        }
    }
}

fn data_err(e: impl std::fmt::Display) -> CliError {
    CliError::Data(e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(output) => {
            print!("{output}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Match(args) => run_match(args),
        Command::Mine(args) => run_mine(args),
        Command::Keys(args) => run_keys(args),
        Command::Classify(args) => run_classify(args),
        Command::Lattice(args) => run_lattice(args),
    }
}

fn run_match(args: MatchArgs) -> Result<String, CliError> {
    let semantics = args.semantics.resolve()?;
    let dataset = core::load_dataset(&args.data).map_err(data_err)?;
    let pattern = core::parse_pattern(&args.pattern).map_err(data_err)?;
    match args.format {
        Format::Tsv => {
            let mut out = String::new();
            for s in dataset.sequences() {
                let report = matcher::contains(s, &pattern, semantics);
                out.push_str(&format!("{}\t{}\n", s.id().unwrap_or_default(), report.contained));
            }
            Ok(out)
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = dataset
                .sequences()
                .iter()
                .map(|s| {
                    let report = matcher::contains(s, &pattern, semantics);
                    serde_json::json!({
                        "id": s.id().unwrap_or_default(),
                        "contained": report.contained,
                        "witness": report.witness.as_ref().map(|e| e.positions().to_vec()),
                        "violating": report.violating.as_ref().map(|e| e.positions().to_vec()),
                    })
                })
                .collect();
            Ok(format!("{}\n", serde_json::to_string_pretty(&rows).expect("reports serialize")))
        }
    }
}

fn run_mine(args: MineArgs) -> Result<String, CliError> {
    let semantics = args.semantics.resolve()?;
    let dataset = core::load_dataset(&args.data).map_err(data_err)?;
    let config = MinerConfig {
        minsup: args.minsup,
        max_positive_len: args.max_pos_len,
        max_itemset_size: args.max_itemset_size,
        max_negation_size: args.max_negation_size,
        semantics,
    };
    let mined = miner::mine_negative(&dataset, &config).map_err(|e| match e {
        MinerError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        MinerError::InvalidConfig => CliError::Usage(e.to_string()),
    })?;
    Ok(match args.format {
        Format::Tsv => miner::to_tsv(&mined),
        Format::Json => format!("{}\n", miner::to_json(&mined)),
    })
}

fn parse_question(text: &str) -> Result<survey::QuestionId, CliError> {
    text.parse().map_err(CliError::Usage)
}

fn run_keys(args: KeysArgs) -> Result<String, CliError> {
    let questions = match &args.question {
        Some(q) => vec![survey::question(parse_question(q)?)],
        None => survey::question_bank(),
    };
    match args.format {
        Format::Tsv => {
            let single = questions.len() == 1;
            let mut out = String::new();
            for q in &questions {
                if !single {
                    out.push_str(&format!("{}\n", q.id));
                }
                for (label, ids) in survey::question_keys(q) {
                    let ids: Vec<String> = ids.into_iter().collect();
                    out.push_str(&format!("{label}: {}\n", ids.join(",")));
                }
                if !single && q.id != survey::QuestionId::Q5 {
                    out.push('\n');
                }
            }
            Ok(out)
        }
        Format::Json => {
            let mut map = serde_json::Map::new();
            for q in &questions {
                let keys: serde_json::Map<String, serde_json::Value> = survey::question_keys(q)
                    .into_iter()
                    .map(|(label, ids)| {
                        (
                            label,
                            serde_json::json!(ids.into_iter().collect::<Vec<String>>()),
                        )
                    })
                    .collect();
                map.insert(q.id.to_string(), serde_json::Value::Object(keys));
            }
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&serde_json::Value::Object(map)).expect("keys serialize")
            ))
        }
    }
}

fn run_classify(args: ClassifyArgs) -> Result<String, CliError> {
    let responses = survey::load_responses(&args.responses).map_err(data_err)?;
    let attributions: Vec<survey::Attribution> = responses
        .iter()
        .map(|r| survey::attribute_semantics(r).map_err(data_err))
        .collect::<Result<_, _>>()?;
    Ok(match args.format {
        Format::Tsv => survey::attribution_report_csv(&attributions),
        Format::Json => format!("{}\n", survey::attribution_report_json(&attributions)),
    })
}

fn run_lattice(args: LatticeArgs) -> Result<String, CliError> {
    let context = match (&args.responses, &args.context) {
        (Some(responses), None) => {
            let question = parse_question(args.question.as_deref().expect("clap enforces --question"))?;
            let responses = survey::load_responses(responses).map_err(data_err)?;
            fca::context_from_responses(&responses, question)
        }
        (None, Some(context)) => {
            let text = std::fs::read_to_string(context).map_err(data_err)?;
            fca::BinaryContext::from_csv(&text).map_err(data_err)?
        }
        _ => return Err(CliError::Usage("provide exactly one of --responses or --context".into())),
    };
    let concepts = fca::enumerate_concepts(&context, args.max_concepts).map_err(|e| match e {
        fca::FcaError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
        other => CliError::Data(other.to_string()),
    })?;
    let lattice = fca::lattice(&concepts);
    let rendered = match args.format {
        LatticeFormat::Dot => fca::lattice_dot(&lattice, &context),
        LatticeFormat::Json => format!("{}\n", fca::lattice_json(&lattice, &context)),
    };
    match &args.output {
        Some(path) => {
            std::fs::write(path, rendered).map_err(data_err)?;
            Ok(String::new())
        }
        None => Ok(rendered),
    }
}
