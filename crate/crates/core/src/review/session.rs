//! One reviewer's pass over a candidate set.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::catalog::find_item;
use crate::detector::SmellCandidate;
use crate::smell::SmellKind;

pub const SESSION_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ItemAnswer {
    Yes,
    No,
    Unsure,
    Skipped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Argument {
    pub text: String,
    #[serde(default)]
    pub codes: Vec<String>,
    #[serde(default)]
    pub discarded: bool,
}

impl Argument {
    pub fn new(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            codes: Vec::new(),
            discarded: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Verdict {
    pub decision: Decision,
    #[serde(default)]
    pub arguments: Vec<Argument>,
    /// Set when the reviewer decided without a usable justification.
    #[serde(default)]
    pub unjustified: bool,
}

impl Verdict {
    pub fn new(decision: Decision, arguments: Vec<Argument>) -> Self {
        Self {
            decision,
            arguments,
            unjustified: false,
        }
    }

    pub fn unjustified(decision: Decision) -> Self {
        Self {
            decision,
            arguments: Vec::new(),
            unjustified: true,
        }
    }

    pub fn is_validation(&self) -> bool {
        matches!(self.decision, Decision::Accept | Decision::Reject)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct CandidateEntry {
    pub id: String,
    pub smell: SmellKind,
}

impl From<&SmellCandidate> for CandidateEntry {
    fn from(c: &SmellCandidate) -> Self {
        Self {
            id: c.id.clone(),
            smell: c.smell,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HistoryEntry {
    pub candidate_id: String,
    pub verdict: Verdict,
    pub recorded_at: DateTime<Utc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub idempotency_key: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReviewSession {
    pub schema_version: u32,
    pub session_id: String,
    pub reviewer_id: String,
    pub candidate_set: Vec<CandidateEntry>,
    /// candidate id -> item id -> answer.
    pub answers: BTreeMap<String, BTreeMap<String, ItemAnswer>>,
    pub verdicts: BTreeMap<String, Verdict>,
    pub history: Vec<HistoryEntry>,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
}

#[derive(Debug, thiserror::Error)]
pub enum SessionError {
    #[error("candidate set is empty")]
    EmptyCandidateSet,
    #[error("unknown candidate `{0}`")]
    UnknownCandidate(String),
    #[error("item `{item}` does not apply to candidate `{candidate}`")]
    InvalidItem { item: String, candidate: String },
    #[error("accept and reject need at least one argument or the unjustified flag")]
    MissingArguments,
    #[error("a discarded argument cannot carry codes")]
    DiscardedWithCodes,
    #[error("argument {index} of `{candidate}` does not exist")]
    UnknownArgument { candidate: String, index: usize },
    #[error("unsupported session schema version {0}")]
    SchemaVersion(u32),
    #[error("session file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed session file: {0}")]
    Parse(#[from] serde_json::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RecordOutcome {
    Recorded,
    /// Same idempotency key seen before; nothing changed.
    Duplicate,
}

/// Creates an empty session. Duplicate candidate ids are dropped; the
/// returned warnings name them.
pub fn create_session(
    candidates: &[CandidateEntry],
    reviewer_id: &str,
) -> Result<(ReviewSession, Vec<String>), SessionError> {
    if candidates.is_empty() {
        return Err(SessionError::EmptyCandidateSet);
    }
    let mut seen = BTreeSet::new();
    let mut set = Vec::new();
    let mut warnings = Vec::new();
    for c in candidates {
        if seen.insert(c.id.clone()) {
            set.push(c.clone());
        } else {
            warnings.push(format!("duplicate candidate `{}` ignored", c.id));
        }
    }
    let now = Utc::now();
    let session = ReviewSession {
        schema_version: SESSION_SCHEMA_VERSION,
        session_id: uuid::Uuid::new_v4().to_string(),
        reviewer_id: reviewer_id.to_string(),
        candidate_set: set,
        answers: BTreeMap::new(),
        verdicts: BTreeMap::new(),
        history: Vec::new(),
        created_at: now,
        updated_at: now,
    };
    Ok((session, warnings))
}

impl ReviewSession {
    pub fn candidate(&self, id: &str) -> Option<&CandidateEntry> {
        self.candidate_set.iter().find(|c| c.id == id)
    }

    fn require(&self, id: &str) -> Result<&CandidateEntry, SessionError> {
        self.candidate(id)
            .ok_or_else(|| SessionError::UnknownCandidate(id.to_string()))
    }

    fn touch(&mut self) {
        // Keep timestamps monotonic even if the clock steps back.
        self.updated_at = Utc::now().max(self.updated_at);
    }

    pub fn record_answer(
        &mut self,
        candidate_id: &str,
        item_id: &str,
        answer: ItemAnswer,
    ) -> Result<(), SessionError> {
        let smell = self.require(candidate_id)?.smell;
        if !find_item(item_id).is_some_and(|i| i.smell == smell) {
            return Err(SessionError::InvalidItem {
                item: item_id.to_string(),
                candidate: candidate_id.to_string(),
            });
        }
        self.answers
            .entry(candidate_id.to_string())
            .or_default()
            .insert(item_id.to_string(), answer);
        self.touch();
        Ok(())
    }

    /// Stores a verdict, replacing any earlier one. Every stored verdict is
    /// also appended to the history.
    pub fn record_verdict(
        &mut self,
        candidate_id: &str,
        verdict: Verdict,
        idempotency_key: Option<&str>,
    ) -> Result<RecordOutcome, SessionError> {
        self.require(candidate_id)?;
        let justified = verdict.arguments.iter().any(|a| !a.text.trim().is_empty());
        if verdict.is_validation() && !justified && !verdict.unjustified {
            return Err(SessionError::MissingArguments);
        }
        if verdict.arguments.iter().any(|a| a.discarded && !a.codes.is_empty()) {
            return Err(SessionError::DiscardedWithCodes);
        }
        if let Some(key) = idempotency_key {
            let seen = self.history.iter().any(|h| {
                h.candidate_id == candidate_id && h.idempotency_key.as_deref() == Some(key)
            });
            if seen {
                return Ok(RecordOutcome::Duplicate);
            }
        }
        self.touch();
        self.history.push(HistoryEntry {
            candidate_id: candidate_id.to_string(),
            verdict: verdict.clone(),
            recorded_at: self.updated_at,
            idempotency_key: idempotency_key.map(str::to_string),
        });
        self.verdicts.insert(candidate_id.to_string(), verdict);
        Ok(RecordOutcome::Recorded)
    }

    /// Curator action: marks an argument as (not) discarded. Discarding
    /// drops its codes.
    pub fn set_discarded(
        &mut self,
        candidate_id: &str,
        index: usize,
        discarded: bool,
    ) -> Result<(), SessionError> {
        let arg = self
            .verdicts
            .get_mut(candidate_id)
            .and_then(|v| v.arguments.get_mut(index))
            .ok_or_else(|| SessionError::UnknownArgument {
                candidate: candidate_id.to_string(),
                index,
            })?;
        arg.discarded = discarded;
        if discarded {
            arg.codes.clear();
        }
        self.touch();
        Ok(())
    }

    /// First candidate, in set order, without any verdict.
    pub fn next_pending(&self) -> Option<&CandidateEntry> {
        self.candidate_set
            .iter()
            .find(|c| !self.verdicts.contains_key(&c.id))
    }

    pub fn pending_count(&self) -> usize {
        self.candidate_set
            .iter()
            .filter(|c| !self.verdicts.contains_key(&c.id))
            .count()
    }

    pub fn history_for<'a>(&'a self, candidate_id: &'a str) -> impl Iterator<Item = &'a HistoryEntry> + 'a {
        self.history
            .iter()
            .filter(move |h| h.candidate_id == candidate_id)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("session serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, SessionError> {
        let s: Self = serde_json::from_str(text)?;
        if s.schema_version != SESSION_SCHEMA_VERSION {
            return Err(SessionError::SchemaVersion(s.schema_version));
        }
        Ok(s)
    }

    /// Writes through a temporary file so a crash never leaves a torn file.
    pub fn save(&self, path: &Path) -> Result<(), SessionError> {
        write_atomic(path, &self.to_json())
    }

    pub fn load(path: &Path) -> Result<Self, SessionError> {
        let text = std::fs::read_to_string(path).map_err(|source| SessionError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    /// Hash of the session content with every timestamp removed.
    pub fn identity_hash(&self) -> String {
        let mut v = serde_json::to_value(self).expect("session serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("createdAt");
            obj.remove("updatedAt");
            if let Some(hist) = obj.get_mut("history").and_then(|h| h.as_array_mut()) {
                for h in hist {
                    if let Some(o) = h.as_object_mut() {
                        o.remove("recordedAt");
                    }
                }
            }
        }
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }
}

pub(crate) fn write_atomic(path: &Path, text: &str) -> Result<(), SessionError> {
    let io = |source| SessionError::Io {
        path: path.display().to_string(),
        source,
    };
    let file_name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "session.json".into());
    let tmp = path.with_file_name(format!(".{file_name}.tmp"));
    std::fs::write(&tmp, text).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(io)
}
