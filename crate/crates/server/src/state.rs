//! Shared server state: the candidate set, the rebuilt model and the
//! sessions, written through to disk on every change.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use anyhow::Context;
use smellval_core::detector::CandidateFile;
use smellval_core::review::ReviewSession;
use smellval_core::source::ProjectModel;

use crate::error::{ApiError, ApiResult};

struct Slot {
    session: ReviewSession,
    path: PathBuf,
    /// Identity hash of what this server last wrote.
    written: String,
}

pub struct AppState {
    pub candidates: CandidateFile,
    pub model: ProjectModel,
    sessions_dir: PathBuf,
    sessions: Mutex<BTreeMap<String, Slot>>,
}

impl AppState {
    /// Loads the candidate file, rescans its roots and picks up every
    /// session file already in `sessions_dir`.
    pub fn open(candidates_path: &Path, sessions_dir: &Path) -> anyhow::Result<Self> {
        let candidates = CandidateFile::load(candidates_path)?;
        let model = candidates.load_model().context("rescanning source roots")?;
        for c in candidates.stale(&model) {
            tracing::warn!(candidate = %c.id, entity = %c.entity, "entity no longer present");
        }
        Self::new(candidates, model, sessions_dir)
    }

    pub fn new(candidates: CandidateFile, model: ProjectModel, sessions_dir: &Path) -> anyhow::Result<Self> {
        std::fs::create_dir_all(sessions_dir)
            .with_context(|| format!("creating {}", sessions_dir.display()))?;
        let mut sessions = BTreeMap::new();
        let mut entries: Vec<PathBuf> = std::fs::read_dir(sessions_dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        entries.sort();
        for path in entries {
            match ReviewSession::load(&path) {
                Ok(session) => {
                    let written = session.identity_hash();
                    sessions.insert(session.session_id.clone(), Slot { session, path, written });
                }
                Err(e) => tracing::warn!(path = %path.display(), "skipping: {e}"),
            }
        }
        Ok(Self {
            candidates,
            model,
            sessions_dir: sessions_dir.to_path_buf(),
            sessions: Mutex::new(sessions),
        })
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, BTreeMap<String, Slot>> {
        self.sessions.lock().unwrap_or_else(|e| e.into_inner())
    }

    pub fn insert(&self, session: ReviewSession) -> ApiResult<()> {
        let path = self.sessions_dir.join(format!("{}.json", session.session_id));
        session.save(&path)?;
        let written = session.identity_hash();
        self.lock()
            .insert(session.session_id.clone(), Slot { session, path, written });
        Ok(())
    }

    pub fn session(&self, id: &str) -> ApiResult<ReviewSession> {
        self.lock()
            .get(id)
            .map(|s| s.session.clone())
            .ok_or_else(|| unknown_session(id))
    }

    pub fn all_sessions(&self) -> Vec<ReviewSession> {
        self.lock().values().map(|s| s.session.clone()).collect()
    }

    /// Applies `f` to a copy of the session and saves it. Nothing changes
    /// if `f` fails or the file was edited behind the server's back.
    pub fn mutate<T>(
        &self,
        id: &str,
        f: impl FnOnce(&mut ReviewSession) -> ApiResult<T>,
    ) -> ApiResult<T> {
        let mut map = self.lock();
        let slot = map.get_mut(id).ok_or_else(|| unknown_session(id))?;
        if slot.path.exists() {
            let on_disk = ReviewSession::load(&slot.path).map(|s| s.identity_hash()).ok();
            if on_disk.as_deref() != Some(slot.written.as_str()) {
                return Err(ApiError::conflict(
                    "session_conflict",
                    format!("session file {} changed on disk", slot.path.display()),
                ));
            }
        }
        let mut next = slot.session.clone();
        let out = f(&mut next)?;
        next.save(&slot.path)?;
        slot.written = next.identity_hash();
        slot.session = next;
        Ok(out)
    }
}

fn unknown_session(id: &str) -> ApiError {
    ApiError::not_found("unknown_session", format!("unknown session `{id}`"))
}
