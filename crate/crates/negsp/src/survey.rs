//! The five-question questionnaire on pattern-with-negation semantics:
//! transcribed question tables, per-interpretation answer keys derived from
//! the matcher, and classification of participant responses into semantic
//! interpretations.
//!
//! Q1 checks plain (positive) pattern containment, Q2 the scope of the
//! negation; both act as gates. Q3 discriminates partial vs total
//! non-inclusion, Q4 soft vs strict embedding, Q5 weak vs strong vs
//! strong-minimal occurrences. A full response is combined into a
//! [`SemanticsConfig`] when every dimension is identified and the scope
//! answer is conform.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::core::{
    parse_pattern, parse_sequence, EmbeddingMode, NegativePattern, NonInclusion, OccurrenceMode, Sequence,
    SemanticsConfig,
};
use crate::matcher;

/// Questionnaire question identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum QuestionId {
    Q1,
    Q2,
    Q3,
    Q4,
    Q5,
}

impl QuestionId {
    pub const ALL: [QuestionId; 5] = [
        QuestionId::Q1,
        QuestionId::Q2,
        QuestionId::Q3,
        QuestionId::Q4,
        QuestionId::Q5,
    ];
}

impl fmt::Display for QuestionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q{}", *self as u8 + 1)
    }
}

impl FromStr for QuestionId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "Q1" => Ok(QuestionId::Q1),
            "Q2" => Ok(QuestionId::Q2),
            "Q3" => Ok(QuestionId::Q3),
            "Q4" => Ok(QuestionId::Q4),
            "Q5" => Ok(QuestionId::Q5),
            other => Err(format!("unknown question id `{other}`")),
        }
    }
}

/// One question: a pattern and the table of sequences to tick.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Question {
    pub id: QuestionId,
    pub pattern: NegativePattern,
    pub table: Vec<Sequence>,
}

impl Question {
    pub fn sequence_ids(&self) -> Vec<&str> {
        self.table.iter().map(|s| s.id().expect("table rows are labeled")).collect()
    }
}

fn build_question(id: QuestionId, pattern: &str, rows: &[(&str, &str)]) -> Question {
    let table = rows
        .iter()
        .map(|(rid, text)| {
            parse_sequence(text)
                .and_then(|s| s.named(*rid))
                .expect("question tables are well-formed")
        })
        .collect();
    Question {
        id,
        pattern: parse_pattern(pattern).expect("question patterns are well-formed"),
        table,
    }
}

/// The five questions with their exact patterns and sequence tables.
pub fn question_bank() -> Vec<Question> {
    vec![
        build_question(
            QuestionId::Q1,
            "(c a) d e",
            &[
                ("p0", "e (c a f) d b e d"),
                ("p1", "c a d b e d"),
                ("p2", "e (c a) d"),
                ("p3", "d e (c a) b d b e f"),
                ("p4", "c e b (f a c) d e c"),
            ],
        ),
        build_question(
            QuestionId::Q2,
            "c !d e",
            &[
                ("s0", "f f c b d a e"),
                ("s1", "f c b f a e"),
                ("s2", "b f c b a"),
                ("s3", "b c b e d"),
                ("s4", "f a c e b"),
            ],
        ),
        build_question(
            QuestionId::Q3,
            "d !(a f) b",
            &[
                ("i0", "e e d a b e"),
                ("i1", "d (a f) b c"),
                ("i2", "e d (f c) b"),
                ("i3", "e c d (e c) b"),
                ("i4", "d (f a) b e"),
            ],
        ),
        build_question(
            QuestionId::Q4,
            "f !(e a) d",
            &[
                ("e0", "b b f c e d b"),
                ("e1", "b f e a c b d"),
                ("e2", "f c (e a) b c d c"),
                ("e3", "b c f b c c d"),
            ],
        ),
        build_question(
            QuestionId::Q5,
            "b !e f",
            &[
                ("o0", "b a f d b d f"),
                ("o1", "b a f d e b d f"),
                ("o2", "d b e c a d f b d e f"),
                ("o3", "b a f b a e f"),
            ],
        ),
    ]
}

/// The question with the given id.
pub fn question(id: QuestionId) -> Question {
    question_bank()
        .into_iter()
        .find(|q| q.id == id)
        .expect("bank covers all ids")
}

/// The table rows a respondent holding the interpretation `cfg` would tick:
/// exactly the sequences containing the question's pattern under `cfg`.
pub fn expected_ticks(q: &Question, cfg: SemanticsConfig) -> BTreeSet<String> {
    q.table
        .iter()
        .filter(|s| matcher::contains(s, &q.pattern, cfg).contained)
        .map(|s| s.id().expect("table rows are labeled").to_owned())
        .collect()
}

/// Answer keys of a question as `(label, ticked ids)` pairs, one per
/// interpretation the question discriminates.
pub fn question_keys(q: &Question) -> Vec<(String, BTreeSet<String>)> {
    use EmbeddingMode::{Soft, Strict};
    use NonInclusion::{Partial, Total};
    use OccurrenceMode::{Strong, StrongMinimal, Weak};
    let key = |ni, em, oc| expected_ticks(q, SemanticsConfig::new(ni, em, oc));
    match q.id {
        QuestionId::Q1 => vec![("positive".to_owned(), key(Partial, Soft, Weak))],
        QuestionId::Q2 => vec![("conform".to_owned(), key(Partial, Soft, Weak))],
        QuestionId::Q3 => vec![
            ("partial".to_owned(), key(Partial, Soft, Weak)),
            ("total".to_owned(), key(Total, Soft, Weak)),
        ],
        QuestionId::Q4 => vec![
            ("partial-soft".to_owned(), key(Partial, Soft, Weak)),
            ("partial-strict".to_owned(), key(Partial, Strict, Weak)),
            ("total".to_owned(), key(Total, Soft, Weak)),
        ],
        QuestionId::Q5 => vec![
            ("weak".to_owned(), key(Total, Soft, Weak)),
            ("strong".to_owned(), key(Total, Soft, Strong)),
            ("strong-minimal".to_owned(), key(Total, Soft, StrongMinimal)),
        ],
    }
}

/// Verdict on the scope-of-negation question (Q2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scope {
    Conform,
    ConformExceptS4,
    Alternative,
}

/// Verdict on the non-inclusion question (Q3).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NonInclusionAnswer {
    Partial,
    Total,
    Other,
}

/// Verdict on the embedding question (Q4).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmbeddingAnswer {
    Soft,
    Strict,
    Other,
}

/// Verdict on the multiple-occurrences question (Q5).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OccurrenceAnswer {
    Weak,
    Strong,
    StrongMinimal,
    Other,
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scope::Conform => "conform",
            Scope::ConformExceptS4 => "conform-except-s4",
            Scope::Alternative => "alternative",
        })
    }
}

impl fmt::Display for NonInclusionAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NonInclusionAnswer::Partial => "partial",
            NonInclusionAnswer::Total => "total",
            NonInclusionAnswer::Other => "other",
        })
    }
}

impl fmt::Display for EmbeddingAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EmbeddingAnswer::Soft => "soft",
            EmbeddingAnswer::Strict => "strict",
            EmbeddingAnswer::Other => "other",
        })
    }
}

impl fmt::Display for OccurrenceAnswer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OccurrenceAnswer::Weak => "weak",
            OccurrenceAnswer::Strong => "strong",
            OccurrenceAnswer::StrongMinimal => "strong-minimal",
            OccurrenceAnswer::Other => "other",
        })
    }
}

fn tick_set(ids: &[&str]) -> BTreeSet<String> {
    ids.iter().map(|s| (*s).to_owned()).collect()
}

/// Classify the Q2 ticks. `{s1,s3,s4}` is the conform scope reading,
/// `{s1,s3}` is conform except for the empty-gap row.
pub fn classify_scope(ticks: &BTreeSet<String>) -> Scope {
    if *ticks == tick_set(&["s1", "s3", "s4"]) {
        Scope::Conform
    } else if *ticks == tick_set(&["s1", "s3"]) {
        Scope::ConformExceptS4
    } else {
        Scope::Alternative
    }
}

/// Classify the Q3 ticks, ignoring the order-sensitivity probe row `i4`.
pub fn classify_non_inclusion(ticks: &BTreeSet<String>) -> NonInclusionAnswer {
    let mut core = ticks.clone();
    core.remove("i4");
    if core == tick_set(&["i0", "i2", "i3"]) {
        NonInclusionAnswer::Partial
    } else if core == tick_set(&["i3"]) {
        NonInclusionAnswer::Total
    } else {
        NonInclusionAnswer::Other
    }
}

/// Classify the Q4 ticks. The `e1` row is the discriminator; `e0` only
/// reflects the non-inclusion choice and is accepted either way.
pub fn classify_embedding(ticks: &BTreeSet<String>) -> EmbeddingAnswer {
    if *ticks == tick_set(&["e0", "e1", "e3"]) || *ticks == tick_set(&["e1", "e3"]) {
        EmbeddingAnswer::Soft
    } else if *ticks == tick_set(&["e0", "e3"]) || *ticks == tick_set(&["e3"]) {
        EmbeddingAnswer::Strict
    } else {
        EmbeddingAnswer::Other
    }
}

/// Classify the Q5 ticks.
pub fn classify_occurrence(ticks: &BTreeSet<String>) -> OccurrenceAnswer {
    if *ticks == tick_set(&["o0", "o1", "o3"]) {
        OccurrenceAnswer::Weak
    } else if *ticks == tick_set(&["o0"]) {
        OccurrenceAnswer::Strong
    } else if *ticks == tick_set(&["o0", "o1"]) {
        OccurrenceAnswer::StrongMinimal
    } else {
        OccurrenceAnswer::Other
    }
}

/// Self-reported participant background.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Profile {
    /// 0 novice, 1 data-science background, 2 pattern-mining background.
    pub expertise: u8,
    pub computer_scientist: bool,
    pub researcher: bool,
    pub logician: bool,
}

/// One participant's ticks for the five questions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub participant: String,
    pub ticks: BTreeMap<QuestionId, BTreeSet<String>>,
    pub profile: Option<Profile>,
}

impl Response {
    pub fn new(participant: impl Into<String>) -> Self {
        Response {
            participant: participant.into(),
            ticks: BTreeMap::new(),
            profile: None,
        }
    }
}

/// The semantic interpretation attributed to one response.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Attribution {
    pub participant: String,
    /// Q1 answered with the expected positive-containment key.
    pub gate_passed: bool,
    /// The respondent distinguished `(f a)` from `(a f)` somewhere.
    pub order_sensitive: bool,
    pub scope: Scope,
    pub non_inclusion: NonInclusionAnswer,
    pub embedding: EmbeddingAnswer,
    pub occurrence: OccurrenceAnswer,
    /// Present when all three dimensions are identified and the scope answer
    /// is not alternative.
    pub combined: Option<SemanticsConfig>,
    /// Under total non-inclusion Q4 cannot separate soft from strict; the
    /// embedding verdict then follows the Q4 rule (strict) by convention.
    pub ambiguous_embedding: bool,
    /// The `e0` tick disagrees with the Q3 non-inclusion verdict.
    pub e0_inconsistent: bool,
}

impl Attribution {
    /// Flag names for compact reports.
    pub fn flags(&self) -> Vec<&'static str> {
        let mut flags = Vec::new();
        if self.order_sensitive {
            flags.push("order-sensitive");
        }
        if self.ambiguous_embedding {
            flags.push("ambiguous-embedding");
        }
        if self.e0_inconsistent {
            flags.push("e0-inconsistent");
        }
        flags
    }
}

#[derive(Debug, Error)]
pub enum SurveyError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {message}")]
    Row { row: usize, message: String },
    #[error("participant `{participant}` has no answer for {question}")]
    MissingQuestion {
        participant: String,
        question: QuestionId,
    },
}

fn row_error(row: usize, message: impl Into<String>) -> SurveyError {
    SurveyError::Row {
        row,
        message: message.into(),
    }
}

/// Derive the semantic attribution of a full response (all five questions).
pub fn attribute_semantics(r: &Response) -> Result<Attribution, SurveyError> {
    let get = |id: QuestionId| {
        r.ticks.get(&id).ok_or_else(|| SurveyError::MissingQuestion {
            participant: r.participant.clone(),
            question: id,
        })
    };
    let q1 = get(QuestionId::Q1)?;
    let q2 = get(QuestionId::Q2)?;
    let q3 = get(QuestionId::Q3)?;
    let q4 = get(QuestionId::Q4)?;
    let q5 = get(QuestionId::Q5)?;

    let gate_exact = *q1 == tick_set(&["p0", "p3", "p4"]);
    let gate_ordered = *q1 == tick_set(&["p0", "p3"]);
    let scope = classify_scope(q2);
    let non_inclusion = classify_non_inclusion(q3);
    let embedding = classify_embedding(q4);
    let occurrence = classify_occurrence(q5);

    let combined = if scope != Scope::Alternative {
        let ni = match non_inclusion {
            NonInclusionAnswer::Partial => Some(NonInclusion::Partial),
            NonInclusionAnswer::Total => Some(NonInclusion::Total),
            NonInclusionAnswer::Other => None,
        };
        let em = match embedding {
            EmbeddingAnswer::Soft => Some(EmbeddingMode::Soft),
            EmbeddingAnswer::Strict => Some(EmbeddingMode::Strict),
            EmbeddingAnswer::Other => None,
        };
        let oc = match occurrence {
            OccurrenceAnswer::Weak => Some(OccurrenceMode::Weak),
            OccurrenceAnswer::Strong => Some(OccurrenceMode::Strong),
            OccurrenceAnswer::StrongMinimal => Some(OccurrenceMode::StrongMinimal),
            OccurrenceAnswer::Other => None,
        };
        match (ni, em, oc) {
            (Some(ni), Some(em), Some(oc)) => Some(SemanticsConfig::new(ni, em, oc)),
            _ => None,
        }
    } else {
        None
    };

    let e0_ticked = q4.contains("e0");
    Ok(Attribution {
        participant: r.participant.clone(),
        gate_passed: gate_exact || gate_ordered,
        order_sensitive: gate_ordered || q3.contains("i4"),
        scope,
        non_inclusion,
        embedding,
        occurrence,
        combined,
        ambiguous_embedding: non_inclusion == NonInclusionAnswer::Total && embedding != EmbeddingAnswer::Other,
        e0_inconsistent: match non_inclusion {
            NonInclusionAnswer::Partial => !e0_ticked,
            NonInclusionAnswer::Total => e0_ticked,
            NonInclusionAnswer::Other => false,
        },
    })
}

const RESPONSE_HEADER: [&str; 7] = ["participant", "question", "ticks", "expertise", "cs", "researcher", "logician"];

/// Parse responses from CSV text with header
/// `participant,question,ticks,expertise,cs,researcher,logician`; `ticks` is
/// a semicolon-separated list of sequence ids from the question's table.
pub fn parse_responses(text: &str) -> Result<Vec<Response>, SurveyError> {
    let bank = question_bank();
    let table_ids: BTreeMap<QuestionId, BTreeSet<String>> = bank
        .iter()
        .map(|q| (q.id, q.sequence_ids().iter().map(|s| (*s).to_owned()).collect()))
        .collect();

    let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(text.as_bytes());
    let header: Vec<&str> = reader.headers()?.iter().collect();
    if header != RESPONSE_HEADER {
        return Err(row_error(1, format!("expected header {}", RESPONSE_HEADER.join(","))));
    }

    let mut order: Vec<String> = Vec::new();
    let mut responses: BTreeMap<String, Response> = BTreeMap::new();
    for (idx, record) in reader.records().enumerate() {
        let row = idx + 2; // 1-based, after the header
        let record = record?;
        if record.len() != RESPONSE_HEADER.len() {
            return Err(row_error(row, format!("expected {} fields", RESPONSE_HEADER.len())));
        }
        let participant = record[0].to_owned();
        if participant.is_empty() {
            return Err(row_error(row, "empty participant id"));
        }
        let question: QuestionId = record[1].parse().map_err(|e| row_error(row, e))?;
        let known = &table_ids[&question];
        let mut ticks = BTreeSet::new();
        for id in record[2].split(';').filter(|s| !s.is_empty()) {
            if !known.contains(id) {
                return Err(row_error(
                    row,
                    format!("unknown sequence id `{id}` for {question}"),
                ));
            }
            ticks.insert(id.to_owned());
        }
        let profile_fields = [&record[3], &record[4], &record[5], &record[6]];
        let profile = if profile_fields.iter().all(|f| f.is_empty()) {
            None
        } else {
            let expertise: u8 = record[3]
                .parse()
                .ok()
                .filter(|e| *e <= 2)
                .ok_or_else(|| row_error(row, format!("expertise must be 0..=2, got `{}`", &record[3])))?;
            let flag = |i: usize| match &record[i] {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(row_error(row, format!("flag must be 0 or 1, got `{other}`"))),
            };
            Some(Profile {
                expertise,
                computer_scientist: flag(4)?,
                researcher: flag(5)?,
                logician: flag(6)?,
            })
        };

        if !responses.contains_key(&participant) {
            order.push(participant.clone());
        }
        let response = responses
            .entry(participant.clone())
            .or_insert_with(|| Response::new(participant.clone()));
        if response.ticks.insert(question, ticks).is_some() {
            return Err(row_error(
                row,
                format!("duplicate answer for ({participant}, {question})"),
            ));
        }
        if response.profile.is_none() {
            response.profile = profile;
        }
    }
    Ok(order
        .into_iter()
        .map(|p| responses.remove(&p).expect("ordered ids exist"))
        .collect())
}

/// Load responses from a CSV file.
pub fn load_responses(path: impl AsRef<Path>) -> Result<Vec<Response>, SurveyError> {
    let text = std::fs::read_to_string(path)?;
    parse_responses(&text)
}

/// Attribution report as CSV
/// (`participant,gate,scope,nonincl,embedding,occurrence,combined,flags`).
pub fn attribution_report_csv(attributions: &[Attribution]) -> String {
    let mut out = String::from("participant,gate,scope,nonincl,embedding,occurrence,combined,flags\n");
    for a in attributions {
        let combined = a.combined.map(|c| c.to_string()).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            a.participant,
            a.gate_passed,
            a.scope,
            a.non_inclusion,
            a.embedding,
            a.occurrence,
            combined,
            a.flags().join(";")
        ));
    }
    out
}

/// Attribution report as a JSON array.
pub fn attribution_report_json(attributions: &[Attribution]) -> String {
    serde_json::to_string_pretty(attributions).expect("attributions serialize")
}
