//! Review sessions, argument coding, and the statistics computed over them.

mod codebook;
mod kappa;
mod session;
mod stats;

pub use codebook::{
    ArgumentRef, Codebook, CodebookError, FrequencyRow, FrequencyTable, HeuristicCode, Stance,
    CODEBOOK_SCHEMA_VERSION,
};
pub use kappa::{agreement, fleiss_kappa, AgreementError, AgreementReport, KappaError};
pub use session::{
    create_session, Argument, CandidateEntry, Decision, HistoryEntry, ItemAnswer, RecordOutcome,
    ReviewSession, SessionError, Verdict, SESSION_SCHEMA_VERSION,
};
pub use stats::{session_stats, SessionStats};

/// Saves a codebook through a temporary file.
pub fn save_codebook(cb: &Codebook, path: &std::path::Path) -> Result<(), SessionError> {
    session::write_atomic(path, &cb.to_json())
}
