//! Counts over a set of review sessions.

use serde::{Deserialize, Serialize};

use super::session::{Decision, ReviewSession};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionStats {
    pub sessions: usize,
    /// Accept and reject verdicts. Skips are not validations.
    pub validations: usize,
    pub accepted: usize,
    pub rejected: usize,
    pub skipped: usize,
    /// Arguments on validations, plus one per unjustified argument-less
    /// validation.
    pub arguments_total: usize,
    pub discarded: usize,
    pub remaining: usize,
    /// `discarded / remaining * 100`.
    pub discard_rate_pct: f64,
    pub accepting: usize,
    pub rejecting: usize,
    /// Shares of the remaining arguments.
    pub accepting_share_pct: f64,
    pub rejecting_share_pct: f64,
}

fn pct(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        num as f64 / den as f64 * 100.0
    }
}

pub fn session_stats(sessions: &[ReviewSession]) -> SessionStats {
    let (mut accepted, mut rejected, mut skipped) = (0, 0, 0);
    let (mut total, mut discarded, mut accepting, mut rejecting) = (0, 0, 0, 0);
    for s in sessions {
        for v in s.verdicts.values() {
            match v.decision {
                Decision::Accept => accepted += 1,
                Decision::Reject => rejected += 1,
                Decision::Skip => {
                    skipped += 1;
                    continue;
                }
            }
            if v.arguments.is_empty() {
                if v.unjustified {
                    total += 1;
                    discarded += 1;
                }
                continue;
            }
            for a in &v.arguments {
                total += 1;
                if a.discarded {
                    discarded += 1;
                } else if v.decision == Decision::Accept {
                    accepting += 1;
                } else {
                    rejecting += 1;
                }
            }
        }
    }
    let remaining = total - discarded;
    SessionStats {
        sessions: sessions.len(),
        validations: accepted + rejected,
        accepted,
        rejected,
        skipped,
        arguments_total: total,
        discarded,
        remaining,
        discard_rate_pct: pct(discarded, remaining),
        accepting,
        rejecting,
        accepting_share_pct: pct(accepting, remaining),
        rejecting_share_pct: pct(rejecting, remaining),
    }
}

impl SessionStats {
    pub fn to_text(&self) -> String {
        format!(
            "sessions: {}\nvalidations: {} (accepted {}, rejected {}; skipped {})\n\
             arguments: {} total, {} discarded, {} remaining\n\
             discard rate: {:.2}%\n\
             accepting: {} ({:.2}%)\nrejecting: {} ({:.2}%)\n",
            self.sessions,
            self.validations,
            self.accepted,
            self.rejected,
            self.skipped,
            self.arguments_total,
            self.discarded,
            self.remaining,
            self.discard_rate_pct,
            self.accepting,
            self.accepting_share_pct,
            self.rejecting,
            self.rejecting_share_pct,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::review::session::{create_session, Argument, CandidateEntry, Verdict};
    use crate::SmellKind;

    #[test]
    fn counts_unjustified_as_discarded() {
        let cands: Vec<_> = (0..4)
            .map(|i| CandidateEntry { id: format!("c{i}"), smell: SmellKind::DataClass })
            .collect();
        let (mut s, _) = create_session(&cands, "r").unwrap();
        s.record_verdict("c0", Verdict::new(Decision::Accept, vec![Argument::new("a"), Argument::new("b")]), None)
            .unwrap();
        s.record_verdict("c1", Verdict::unjustified(Decision::Reject), None).unwrap();
        s.record_verdict("c2", Verdict::new(Decision::Reject, vec![Argument::new("c")]), None)
            .unwrap();
        s.record_verdict("c3", Verdict::new(Decision::Skip, vec![]), None).unwrap();
        s.set_discarded("c0", 1, true).unwrap();
        let st = session_stats(&[s]);
        assert_eq!(st.validations, 3);
        assert_eq!(st.skipped, 1);
        assert_eq!(st.arguments_total, 4);
        assert_eq!(st.discarded, 2);
        assert_eq!(st.remaining, 2);
        assert_eq!(st.discard_rate_pct, 100.0);
        assert_eq!((st.accepting, st.rejecting), (1, 1));
    }

    #[test]
    fn empty_input() {
        let st = session_stats(&[]);
        assert_eq!(st.validations, 0);
        assert_eq!(st.discard_rate_pct, 0.0);
    }
}
