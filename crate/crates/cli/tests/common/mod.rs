//! Fixture builders shared by the CLI test targets.
#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

use num_rational::Ratio;
use smellval_core::review::*;
use smellval_core::SmellKind;

pub fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_smellval"));
    c.env_remove("SMELLVAL_CONFIG");
    c
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

pub fn run_with_input(args: &[&str], stdin: &str) -> Output {
    use std::io::Write;
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

pub fn core_fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

pub fn corpus() -> PathBuf {
    core_fixtures().join("corpus")
}

pub fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Rows of `table2.tsv` for one table and stance.
pub fn table2_rows(table: &str, stance: &str) -> Vec<(String, usize)> {
    let text = std::fs::read_to_string(core_fixtures().join("table2.tsv")).unwrap();
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .filter(|c| c[0] == table && c[1] == stance)
        .map(|c| (c[2].to_string(), c[3].parse().unwrap()))
        .collect()
}

/// A session with one argument per coded mention, and the codebook that
/// tags them. Each mention gets its own LPL candidate.
pub fn coded_fixture(acc: &[(String, usize)], rej: &[(String, usize)]) -> (ReviewSession, Codebook) {
    let smell = SmellKind::LongParameterList;
    let mut plan = Vec::new();
    for (rows, decision, stance) in [
        (acc, Decision::Accept, Stance::Accepting),
        (rej, Decision::Reject, Stance::Rejecting),
    ] {
        for (label, f) in rows {
            plan.extend(std::iter::repeat_n((label.clone(), decision, stance), *f));
        }
    }
    let cands: Vec<CandidateEntry> = (0..plan.len())
        .map(|i| CandidateEntry { id: format!("lpl{i:03}"), smell })
        .collect();
    let (mut s, _) = create_session(&cands, "coder").unwrap();
    s.session_id = "table".into();
    for (c, (label, d, _)) in cands.iter().zip(&plan) {
        s.record_verdict(&c.id, Verdict::new(*d, vec![Argument::new(format!("because: {label}"))]), None)
            .unwrap();
    }
    let sessions = vec![s];
    let mut cb = Codebook::new();
    for (c, (label, _, stance)) in cands.iter().zip(&plan) {
        let id = match cb.find_label(label, smell, *stance) {
            Some(code) => code.code_id.clone(),
            None => cb.add_code(label, smell, *stance),
        };
        cb.code_argument(&sessions, &ArgumentRef::new("table", &c.id, 0), &id).unwrap();
    }
    (sessions.into_iter().next().unwrap(), cb)
}

/// Twelve reviewers over the same 24 candidates: 288 validations carrying
/// 303 arguments, 32 of them discarded (10 as unjustified verdicts), 157
/// of the rest accepting.
pub fn study_sessions() -> Vec<ReviewSession> {
    let cands: Vec<CandidateEntry> = (0..24)
        .map(|i| CandidateEntry { id: format!("k{i:02}"), smell: SmellKind::DataClass })
        .collect();
    let (acc_kept, acc_disc, rej_kept, rej_disc) = (157usize, 12usize, 114usize, 10usize);
    let mut acc: Vec<bool> = (0..acc_kept + acc_disc).map(|i| i >= acc_kept).collect();
    let mut rej: Vec<bool> = (0..rej_kept + rej_disc).map(|i| i >= rej_kept).collect();
    let mut plan: Vec<Verdict> = Vec::new();
    for (args, n, decision) in [(&mut acc, 160usize, Decision::Accept), (&mut rej, 118, Decision::Reject)] {
        let extra = args.len() - n;
        for v in 0..n {
            let take = if v < extra { 2 } else { 1 };
            let arguments = args
                .drain(..take)
                .map(|discarded| Argument { text: "reason".into(), codes: vec![], discarded })
                .collect();
            plan.push(Verdict::new(decision, arguments));
        }
    }
    for i in 0..10 {
        plan.push(Verdict::unjustified(if i % 2 == 0 { Decision::Accept } else { Decision::Reject }));
    }
    plan.chunks(24)
        .enumerate()
        .map(|(r, chunk)| {
            let (mut s, _) = create_session(&cands, &format!("reviewer{r:02}")).unwrap();
            s.session_id = format!("study{r:02}");
            for (c, v) in cands.iter().zip(chunk) {
                s.record_verdict(&c.id, v.clone(), None).unwrap();
            }
            s
        })
        .collect()
}

/// Per-subject accept counts for twelve raters, constructed so that Fleiss'
/// kappa is exactly 7/25.
pub const ENGINEERED_ACCEPTS: [u32; 24] = [5, 11, 9, 10, 9, 10, 12, 12, 7, 10, 6, 11, 2, 10, 6, 12, 10, 2, 12, 12, 5, 4, 9, 4];

pub fn rated_sessions(accepts: &[u32], raters: u32) -> Vec<ReviewSession> {
    let cands: Vec<CandidateEntry> = (0..accepts.len())
        .map(|i| CandidateEntry { id: format!("g{i:02}"), smell: SmellKind::GodClass })
        .collect();
    (0..raters)
        .map(|r| {
            let (mut s, _) = create_session(&cands, &format!("rater{r:02}")).unwrap();
            s.session_id = format!("rater{r:02}");
            for (c, &a) in cands.iter().zip(accepts) {
                let d = if r < a { Decision::Accept } else { Decision::Reject };
                s.record_verdict(&c.id, Verdict::new(d, vec![Argument::new("x")]), None).unwrap();
            }
            s
        })
        .collect()
}

/// Fleiss' kappa from its textbook definition, in exact arithmetic.
pub fn kappa_oracle(m: &[Vec<u32>]) -> Ratio<i64> {
    let big_n = m.len() as i64;
    let n: i64 = m[0].iter().map(|&x| x as i64).sum();
    let k = m[0].len();
    let p_j: Vec<Ratio<i64>> = (0..k)
        .map(|j| Ratio::new(m.iter().map(|r| r[j] as i64).sum(), big_n * n))
        .collect();
    let p_bar = m
        .iter()
        .map(|r| Ratio::new(r.iter().map(|&x| (x as i64) * (x as i64 - 1)).sum(), n * (n - 1)))
        .sum::<Ratio<i64>>()
        / big_n;
    let p_e: Ratio<i64> = p_j.iter().map(|p| p * p).sum();
    (p_bar - p_e) / (Ratio::from_integer(1) - p_e)
}

/// Saves sessions as `<dir>/<sessionId>.json` and returns the paths.
pub fn write_sessions(dir: &Path, sessions: &[ReviewSession]) -> Vec<PathBuf> {
    sessions
        .iter()
        .map(|s| {
            let path = dir.join(format!("{}.json", s.session_id));
            s.save(&path).unwrap();
            path
        })
        .collect()
}
