//! Fleiss' kappa and inter-reviewer agreement over verdicts.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::session::{Decision, ReviewSession};
use crate::smell::SmellKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum KappaError {
    #[error("no subjects")]
    Empty,
    #[error("rows have different category counts or rater totals")]
    RaggedMatrix,
    #[error("at least two raters per subject are needed")]
    TooFewRaters,
    /// Every rating fell in one category; kappa is undefined.
    #[error("kappa is undefined: all ratings fall in one category")]
    SingleCategory,
}

/// Fleiss' kappa for a subjects x categories count matrix in which every
/// row sums to the same number of raters.
///
/// Computed from integer sums so the only rounding is the final division.
pub fn fleiss_kappa(matrix: &[Vec<u32>]) -> Result<f64, KappaError> {
    let first = matrix.first().ok_or(KappaError::Empty)?;
    let k = first.len();
    if k == 0 {
        return Err(KappaError::RaggedMatrix);
    }
    let n: u32 = first.iter().sum();
    if matrix.iter().any(|r| r.len() != k || r.iter().sum::<u32>() != n) {
        return Err(KappaError::RaggedMatrix);
    }
    if n < 2 {
        return Err(KappaError::TooFewRaters);
    }
    let big_n = matrix.len() as i128;
    let n = n as i128;
    let sum_sq: i128 = matrix
        .iter()
        .flat_map(|r| r.iter())
        .map(|&x| (x as i128) * (x as i128))
        .sum();
    let col_sq: i128 = (0..k)
        .map(|j| matrix.iter().map(|r| r[j] as i128).sum::<i128>())
        .map(|c| c * c)
        .sum();
    // P̄ = a / b, Pe = c / d.
    let a = sum_sq - big_n * n;
    let b = big_n * n * (n - 1);
    let c = col_sq;
    let d = (big_n * n) * (big_n * n);
    if c == d {
        return Err(KappaError::SingleCategory);
    }
    let num = a * d - b * c;
    let den = b * (d - c);
    Ok(num as f64 / den as f64)
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AgreementError {
    #[error("agreement needs at least two sessions, got {0}")]
    TooFewSessions(usize),
    #[error("sessions `{0}` and `{1}` cover different candidate sets")]
    DisjointCandidateSets(String, String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AgreementReport {
    /// `None` for the report over all smells.
    pub smell: Option<SmellKind>,
    pub raters: usize,
    pub subjects: usize,
    /// Candidates left out because some reviewer skipped or has no verdict.
    pub dropped: usize,
    /// `None` when undefined.
    pub kappa: Option<f64>,
    pub category_shares: BTreeMap<Decision, f64>,
    /// Accept and reject counts per subject, keyed by candidate id.
    pub matrix: BTreeMap<String, [u32; 2]>,
}

impl AgreementReport {
    pub fn scope(&self) -> &'static str {
        self.smell.map_or("all", |s| s.label())
    }

    pub fn matrix_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["candidate", "accept", "reject"]).expect("in-memory write");
        for (id, [a, r]) in &self.matrix {
            w.write_record([id.clone(), a.to_string(), r.to_string()])
                .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }
}

fn report(
    smell: Option<SmellKind>,
    raters: usize,
    rows: &BTreeMap<String, [u32; 2]>,
    dropped: usize,
) -> AgreementReport {
    let matrix: Vec<Vec<u32>> = rows.values().map(|r| r.to_vec()).collect();
    let kappa = fleiss_kappa(&matrix).ok();
    let mut category_shares = BTreeMap::new();
    let total: u32 = rows.values().flatten().sum();
    if total > 0 {
        let acc: u32 = rows.values().map(|r| r[0]).sum();
        category_shares.insert(Decision::Accept, acc as f64 / total as f64);
        category_shares.insert(Decision::Reject, (total - acc) as f64 / total as f64);
    }
    AgreementReport {
        smell,
        raters,
        subjects: rows.len(),
        dropped,
        kappa,
        category_shares,
        matrix: rows.clone(),
    }
}

/// Agreement on accept/reject across sessions that reviewed the same
/// candidates. Returns one report per smell present, then one over all.
pub fn agreement(sessions: &[ReviewSession]) -> Result<Vec<AgreementReport>, AgreementError> {
    if sessions.len() < 2 {
        return Err(AgreementError::TooFewSessions(sessions.len()));
    }
    let ids = |s: &ReviewSession| -> BTreeSet<String> {
        s.candidate_set.iter().map(|c| c.id.clone()).collect()
    };
    let base = ids(&sessions[0]);
    for s in &sessions[1..] {
        if ids(s) != base {
            return Err(AgreementError::DisjointCandidateSets(
                sessions[0].session_id.clone(),
                s.session_id.clone(),
            ));
        }
    }
    let mut per_smell: BTreeMap<SmellKind, (BTreeMap<String, [u32; 2]>, usize)> = BTreeMap::new();
    for c in &sessions[0].candidate_set {
        let entry = per_smell.entry(c.smell).or_default();
        let mut row = [0u32; 2];
        let mut complete = true;
        for s in sessions {
            match s.verdicts.get(&c.id).map(|v| v.decision) {
                Some(Decision::Accept) => row[0] += 1,
                Some(Decision::Reject) => row[1] += 1,
                _ => complete = false,
            }
        }
        if complete {
            entry.0.insert(c.id.clone(), row);
        } else {
            entry.1 += 1;
        }
    }
    let raters = sessions.len();
    let mut out: Vec<AgreementReport> = per_smell
        .iter()
        .map(|(smell, (rows, dropped))| report(Some(*smell), raters, rows, *dropped))
        .collect();
    let all: BTreeMap<String, [u32; 2]> = per_smell
        .values()
        .flat_map(|(rows, _)| rows.clone())
        .collect();
    let dropped = per_smell.values().map(|(_, d)| d).sum();
    out.push(report(None, raters, &all, dropped));
    Ok(out)
}
