//! Heuristic codes assigned to reviewer arguments, with merge and split.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::session::{Decision, ReviewSession};
use crate::smell::SmellKind;

pub const CODEBOOK_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Stance {
    Accepting,
    Rejecting,
}

impl Stance {
    pub fn of(decision: Decision) -> Option<Stance> {
        match decision {
            Decision::Accept => Some(Stance::Accepting),
            Decision::Reject => Some(Stance::Rejecting),
            Decision::Skip => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HeuristicCode {
    pub code_id: String,
    pub label: String,
    pub smell: SmellKind,
    pub stance: Stance,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub merged_from: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub split_from: Option<String>,
    #[serde(default)]
    pub retired: bool,
}

/// Address of one argument: `session/candidate/index`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArgumentRef {
    pub session_id: String,
    pub candidate_id: String,
    pub index: usize,
}

impl ArgumentRef {
    pub fn new(session_id: &str, candidate_id: &str, index: usize) -> Self {
        Self {
            session_id: session_id.to_string(),
            candidate_id: candidate_id.to_string(),
            index,
        }
    }
}

impl fmt::Display for ArgumentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}/{}", self.session_id, self.candidate_id, self.index)
    }
}

impl FromStr for ArgumentRef {
    type Err = CodebookError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || CodebookError::BadArgumentRef(s.to_string());
        let mut parts = s.rsplitn(3, '/');
        let index = parts.next().and_then(|i| i.parse().ok()).ok_or_else(bad)?;
        let candidate_id = parts.next().filter(|c| !c.is_empty()).ok_or_else(bad)?;
        let session_id = parts.next().filter(|c| !c.is_empty()).ok_or_else(bad)?;
        Ok(Self::new(session_id, candidate_id, index))
    }
}

impl Serialize for ArgumentRef {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ArgumentRef {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CodebookError {
    #[error("malformed argument reference `{0}`")]
    BadArgumentRef(String),
    #[error("unknown code `{0}`")]
    UnknownCode(String),
    #[error("code `{0}` is retired")]
    RetiredCode(String),
    #[error("argument `{0}` does not exist")]
    UnknownArgument(String),
    #[error("argument `{0}` is discarded")]
    DiscardedArgument(String),
    #[error("argument `{0}` already carries code `{1}`")]
    AlreadyCoded(String, String),
    #[error("code stance does not match the verdict of `{0}`")]
    StanceMismatch(String),
    #[error("code smell does not match the candidate of `{0}`")]
    SmellMismatch(String),
    #[error("cannot merge accepting and rejecting codes")]
    MixedStanceMerge,
    #[error("cannot merge codes of different smells")]
    MixedSmellMerge,
    #[error("a merge needs at least two distinct codes")]
    TooFewCodes,
    #[error("a split needs at least one part")]
    NoParts,
    #[error("argument `{0}` is listed in more than one part")]
    OverlappingParts(String),
    #[error("argument `{arg}` does not carry code `{code}`")]
    NotCoded { arg: String, code: String },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Codebook {
    pub schema_version: u32,
    pub codes: BTreeMap<String, HeuristicCode>,
    /// Argument -> codes. A multiset: merging two codes an argument carries
    /// leaves it with the merged code twice.
    pub assignments: BTreeMap<ArgumentRef, Vec<String>>,
    next_id: u32,
}

impl Codebook {
    pub fn new() -> Self {
        Self {
            schema_version: CODEBOOK_SCHEMA_VERSION,
            ..Self::default()
        }
    }

    fn fresh(&mut self, label: &str, smell: SmellKind, stance: Stance) -> String {
        self.next_id += 1;
        let code_id = format!("C{}", self.next_id);
        self.codes.insert(
            code_id.clone(),
            HeuristicCode {
                code_id: code_id.clone(),
                label: label.to_string(),
                smell,
                stance,
                merged_from: Vec::new(),
                split_from: None,
                retired: false,
            },
        );
        code_id
    }

    pub fn add_code(&mut self, label: &str, smell: SmellKind, stance: Stance) -> String {
        self.fresh(label, smell, stance)
    }

    fn active(&self, id: &str) -> Result<&HeuristicCode, CodebookError> {
        let code = self
            .codes
            .get(id)
            .ok_or_else(|| CodebookError::UnknownCode(id.to_string()))?;
        if code.retired {
            return Err(CodebookError::RetiredCode(id.to_string()));
        }
        Ok(code)
    }

    /// Active code with this label, smell and stance.
    pub fn find_label(&self, label: &str, smell: SmellKind, stance: Stance) -> Option<&HeuristicCode> {
        self.codes
            .values()
            .find(|c| !c.retired && c.label == label && c.smell == smell && c.stance == stance)
    }

    /// Tags an argument. It must exist, not be discarded, and match the
    /// code's smell and stance.
    pub fn code_argument(
        &mut self,
        sessions: &[ReviewSession],
        arg: &ArgumentRef,
        code_id: &str,
    ) -> Result<(), CodebookError> {
        let code = self.active(code_id)?;
        let name = arg.to_string();
        let (smell, decision, discarded) =
            locate(sessions, arg).ok_or_else(|| CodebookError::UnknownArgument(name.clone()))?;
        if discarded {
            return Err(CodebookError::DiscardedArgument(name));
        }
        if Stance::of(decision) != Some(code.stance) {
            return Err(CodebookError::StanceMismatch(name));
        }
        if smell != code.smell {
            return Err(CodebookError::SmellMismatch(name));
        }
        let tags = self.assignments.entry(arg.clone()).or_default();
        if tags.iter().any(|t| t == code_id) {
            return Err(CodebookError::AlreadyCoded(name, code_id.to_string()));
        }
        tags.push(code_id.to_string());
        Ok(())
    }

    pub fn codes_of(&self, arg: &ArgumentRef) -> &[String] {
        self.assignments.get(arg).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Replaces `ids` with one new code. The old codes are retired.
    pub fn merge_codes(&mut self, ids: &[&str], label: &str) -> Result<String, CodebookError> {
        let mut distinct: Vec<&str> = ids.to_vec();
        distinct.sort_unstable();
        distinct.dedup();
        if distinct.len() < 2 {
            return Err(CodebookError::TooFewCodes);
        }
        let first = self.active(distinct[0])?.clone();
        for id in &distinct[1..] {
            let c = self.active(id)?;
            if c.stance != first.stance {
                return Err(CodebookError::MixedStanceMerge);
            }
            if c.smell != first.smell {
                return Err(CodebookError::MixedSmellMerge);
            }
        }
        let new_id = self.fresh(label, first.smell, first.stance);
        if let Some(c) = self.codes.get_mut(&new_id) {
            c.merged_from = distinct.iter().map(|s| s.to_string()).collect();
        }
        for id in &distinct {
            if let Some(c) = self.codes.get_mut(*id) {
                c.retired = true;
            }
        }
        for tags in self.assignments.values_mut() {
            for t in tags.iter_mut() {
                if distinct.contains(&t.as_str()) {
                    *t = new_id.clone();
                }
            }
        }
        Ok(new_id)
    }

    /// Splits a code into one new code per part. Arguments listed in a part
    /// move to that part's code; unlisted ones move to the first part.
    pub fn split_code(
        &mut self,
        id: &str,
        parts: &[(&str, Vec<ArgumentRef>)],
    ) -> Result<Vec<String>, CodebookError> {
        if parts.is_empty() {
            return Err(CodebookError::NoParts);
        }
        let old = self.active(id)?.clone();
        let mut target: BTreeMap<&ArgumentRef, usize> = BTreeMap::new();
        for (k, (_, args)) in parts.iter().enumerate() {
            for a in args {
                if !self.codes_of(a).iter().any(|t| t == id) {
                    return Err(CodebookError::NotCoded {
                        arg: a.to_string(),
                        code: id.to_string(),
                    });
                }
                if target.insert(a, k).is_some_and(|prev| prev != k) {
                    return Err(CodebookError::OverlappingParts(a.to_string()));
                }
            }
        }
        let new_ids: Vec<String> = parts
            .iter()
            .map(|(label, _)| self.fresh(label, old.smell, old.stance))
            .collect();
        for n in &new_ids {
            if let Some(c) = self.codes.get_mut(n) {
                c.split_from = Some(id.to_string());
            }
        }
        if let Some(c) = self.codes.get_mut(id) {
            c.retired = true;
        }
        for (arg, tags) in self.assignments.iter_mut() {
            let k = target.get(arg).copied().unwrap_or(0);
            for t in tags.iter_mut() {
                if t == id {
                    *t = new_ids[k].clone();
                }
            }
        }
        Ok(new_ids)
    }

    /// Writes the codebook's tags into each session's `codes` fields.
    pub fn annotate(&self, sessions: &mut [ReviewSession]) {
        for s in sessions.iter_mut() {
            let sid = s.session_id.clone();
            for (cand, v) in s.verdicts.iter_mut() {
                for (i, a) in v.arguments.iter_mut().enumerate() {
                    a.codes = if a.discarded {
                        Vec::new()
                    } else {
                        self.codes_of(&ArgumentRef::new(&sid, cand, i)).to_vec()
                    };
                }
            }
        }
    }

    /// Code frequencies for one smell. Only tags on existing, non-discarded
    /// arguments count.
    pub fn frequency_table(&self, sessions: &[ReviewSession], smell: SmellKind) -> FrequencyTable {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for (arg, tags) in &self.assignments {
            match locate(sessions, arg) {
                Some((_, _, false)) => {}
                _ => continue,
            }
            for t in tags {
                *counts.entry(t.as_str()).or_default() += 1;
            }
        }
        let mut table = FrequencyTable {
            smell,
            accepting: Vec::new(),
            rejecting: Vec::new(),
            accepting_total: 0,
            rejecting_total: 0,
        };
        for (id, f) in counts {
            let Some(code) = self.codes.get(id) else { continue };
            if code.smell != smell {
                continue;
            }
            let row = FrequencyRow {
                code_id: id.to_string(),
                label: code.label.clone(),
                f,
            };
            match code.stance {
                Stance::Accepting => table.accepting.push(row),
                Stance::Rejecting => table.rejecting.push(row),
            }
        }
        for rows in [&mut table.accepting, &mut table.rejecting] {
            rows.sort_by(|a, b| b.f.cmp(&a.f).then_with(|| a.label.cmp(&b.label)));
        }
        table.accepting_total = table.accepting.iter().map(|r| r.f).sum();
        table.rejecting_total = table.rejecting.iter().map(|r| r.f).sum();
        table
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("codebook serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Smell, decision and discarded flag of the referenced argument.
fn locate(sessions: &[ReviewSession], arg: &ArgumentRef) -> Option<(SmellKind, Decision, bool)> {
    let s = sessions.iter().find(|s| s.session_id == arg.session_id)?;
    let smell = s.candidate(&arg.candidate_id)?.smell;
    let v = s.verdicts.get(&arg.candidate_id)?;
    let a = v.arguments.get(arg.index)?;
    Some((smell, v.decision, a.discarded))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FrequencyRow {
    pub code_id: String,
    pub label: String,
    pub f: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FrequencyTable {
    pub smell: SmellKind,
    pub accepting: Vec<FrequencyRow>,
    pub rejecting: Vec<FrequencyRow>,
    pub accepting_total: usize,
    pub rejecting_total: usize,
}

impl FrequencyTable {
    pub fn is_empty(&self) -> bool {
        self.accepting.is_empty() && self.rejecting.is_empty()
    }

    /// `stance,label,f` rows followed by one total row per stance.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        let mut rows = vec![["stance".to_string(), "label".to_string(), "f".to_string()]];
        for (stance, list, total) in [
            ("accepting", &self.accepting, self.accepting_total),
            ("rejecting", &self.rejecting, self.rejecting_total),
        ] {
            for r in list {
                rows.push([stance.to_string(), r.label.clone(), r.f.to_string()]);
            }
            rows.push([stance.to_string(), "Total".to_string(), total.to_string()]);
        }
        for r in rows {
            w.write_record(&r).expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 input")
    }

    /// Plain-text rendering with the two stances side by side.
    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.smell.label());
        for (title, rows, total) in [
            ("Accepting", &self.accepting, self.accepting_total),
            ("Rejecting", &self.rejecting, self.rejecting_total),
        ] {
            out.push_str(&format!("  {title}\n"));
            for r in rows {
                out.push_str(&format!("    {:<44} {:>3}\n", r.label, r.f));
            }
            out.push_str(&format!("    {:<44} {:>3}\n", "Total", total));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::review::session::{create_session, Argument, CandidateEntry, Verdict};

    fn setup() -> (Vec<ReviewSession>, Codebook) {
        let cands = vec![
            CandidateEntry { id: "a".into(), smell: SmellKind::LongParameterList },
            CandidateEntry { id: "b".into(), smell: SmellKind::LongParameterList },
            CandidateEntry { id: "g".into(), smell: SmellKind::GodClass },
        ];
        let (mut s, _) = create_session(&cands, "r").unwrap();
        s.session_id = "s1".into();
        let args = |n| (0..n).map(|i| Argument::new(format!("arg {i}"))).collect();
        s.record_verdict("a", Verdict::new(Decision::Accept, args(3)), None).unwrap();
        s.record_verdict("b", Verdict::new(Decision::Reject, args(2)), None).unwrap();
        s.record_verdict("g", Verdict::new(Decision::Accept, args(1)), None).unwrap();
        (vec![s], Codebook::new())
    }

    #[test]
    fn argument_ref_round_trip() {
        let r = ArgumentRef::new("s-1", "abc", 4);
        assert_eq!(r.to_string().parse::<ArgumentRef>().unwrap(), r);
        assert!("x/3".parse::<ArgumentRef>().is_err());
        assert!("x/y/z".parse::<ArgumentRef>().is_err());
    }

    #[test]
    fn coding_checks() {
        let (mut sessions, mut cb) = setup();
        let acc = cb.add_code("Too many parameters", SmellKind::LongParameterList, Stance::Accepting);
        let rej = cb.add_code("Needed parameters", SmellKind::LongParameterList, Stance::Rejecting);
        let a0 = ArgumentRef::new("s1", "a", 0);
        cb.code_argument(&sessions, &a0, &acc).unwrap();
        assert_eq!(
            cb.code_argument(&sessions, &a0, &acc),
            Err(CodebookError::AlreadyCoded(a0.to_string(), acc.clone()))
        );
        assert!(matches!(
            cb.code_argument(&sessions, &ArgumentRef::new("s1", "a", 1), &rej),
            Err(CodebookError::StanceMismatch(_))
        ));
        assert!(matches!(
            cb.code_argument(&sessions, &ArgumentRef::new("s1", "g", 0), &acc),
            Err(CodebookError::SmellMismatch(_))
        ));
        assert!(matches!(
            cb.code_argument(&sessions, &ArgumentRef::new("s1", "a", 9), &acc),
            Err(CodebookError::UnknownArgument(_))
        ));
        sessions[0].set_discarded("a", 2, true).unwrap();
        assert!(matches!(
            cb.code_argument(&sessions, &ArgumentRef::new("s1", "a", 2), &acc),
            Err(CodebookError::DiscardedArgument(_))
        ));
    }

    #[test]
    fn merge_and_split_preserve_totals() {
        let (sessions, mut cb) = setup();
        let x = cb.add_code("x", SmellKind::LongParameterList, Stance::Accepting);
        let y = cb.add_code("y", SmellKind::LongParameterList, Stance::Accepting);
        let r = cb.add_code("r", SmellKind::LongParameterList, Stance::Rejecting);
        for i in 0..3 {
            cb.code_argument(&sessions, &ArgumentRef::new("s1", "a", i), &x).unwrap();
        }
        cb.code_argument(&sessions, &ArgumentRef::new("s1", "a", 0), &y).unwrap();
        assert_eq!(cb.merge_codes(&[&x, &r], "bad"), Err(CodebookError::MixedStanceMerge));
        let m = cb.merge_codes(&[&x, &y], "xy").unwrap();
        let t = cb.frequency_table(&sessions, SmellKind::LongParameterList);
        assert_eq!(t.accepting, vec![FrequencyRow { code_id: m.clone(), label: "xy".into(), f: 4 }]);
        assert!(cb.codes[&x].retired && cb.codes[&y].retired);

        let parts = vec![("p", vec![]), ("q", vec![ArgumentRef::new("s1", "a", 2)])];
        let ids = cb.split_code(&m, &parts).unwrap();
        let t = cb.frequency_table(&sessions, SmellKind::LongParameterList);
        assert_eq!(t.accepting_total, 4);
        assert_eq!(t.accepting[0].code_id, ids[0]);
        assert_eq!(t.accepting[0].f, 3);
        assert_eq!(t.accepting[1].f, 1);
        assert_eq!(cb.codes[&ids[1]].split_from.as_deref(), Some(m.as_str()));
    }

    #[test]
    fn csv_escapes_labels() {
        let t = FrequencyTable {
            smell: SmellKind::LongParameterList,
            accepting: vec![FrequencyRow { code_id: "C1".into(), label: "a, \"b\"".into(), f: 2 }],
            rejecting: vec![],
            accepting_total: 2,
            rejecting_total: 0,
        };
        assert_eq!(
            t.to_csv(),
            "stance,label,f\naccepting,\"a, \"\"b\"\"\",2\naccepting,Total,2\nrejecting,Total,0\n"
        );
    }
}
