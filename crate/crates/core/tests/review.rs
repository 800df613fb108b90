use num_rational::Ratio;
use smellval_core::review::*;
use smellval_core::SmellKind;

const TABLE2: &str = include_str!("../fixtures/table2.tsv");

fn table_rows(table: &str, stance: &str) -> Vec<(String, usize)> {
    TABLE2
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split('\t').collect::<Vec<_>>())
        .filter(|c| c[0] == table && c[1] == stance)
        .map(|c| (c[2].to_string(), c[3].parse().unwrap()))
        .collect()
}

fn entries(prefix: &str, n: usize, smell: SmellKind) -> Vec<CandidateEntry> {
    (0..n)
        .map(|i| CandidateEntry { id: format!("{prefix}{i:03}"), smell })
        .collect()
}

/// One session whose arguments, coded with the given labels, reproduce the
/// rows. Each argument gets its own candidate.
fn coded_session(acc: &[(String, usize)], rej: &[(String, usize)]) -> (Vec<ReviewSession>, Codebook) {
    let n_acc: usize = acc.iter().map(|r| r.1).sum();
    let n_rej: usize = rej.iter().map(|r| r.1).sum();
    let smell = SmellKind::LongParameterList;
    let cands = entries("c", n_acc + n_rej, smell);
    let (mut s, _) = create_session(&cands, "r1").unwrap();
    s.session_id = "s1".into();
    let mut plan = Vec::new();
    for (rows, decision, stance) in [(acc, Decision::Accept, Stance::Accepting), (rej, Decision::Reject, Stance::Rejecting)] {
        for (label, f) in rows {
            for _ in 0..*f {
                plan.push((label.clone(), decision, stance));
            }
        }
    }
    for (c, (label, decision, _)) in cands.iter().zip(&plan) {
        s.record_verdict(&c.id, Verdict::new(*decision, vec![Argument::new(format!("because {label}"))]), None)
            .unwrap();
    }
    let sessions = vec![s];
    let mut cb = Codebook::new();
    for (c, (label, _, stance)) in cands.iter().zip(&plan) {
        let id = match cb.find_label(label, smell, *stance) {
            Some(code) => code.code_id.clone(),
            None => cb.add_code(label, smell, *stance),
        };
        cb.code_argument(&sessions, &ArgumentRef::new("s1", &c.id, 0), &id).unwrap();
    }
    (sessions, cb)
}

fn expected(mut rows: Vec<(String, usize)>) -> Vec<(String, usize)> {
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows
}

fn actual(rows: &[FrequencyRow]) -> Vec<(String, usize)> {
    rows.iter().map(|r| (r.label.clone(), r.f)).collect()
}

#[test]
fn refined_lpl_frequency_table() {
    let acc = table_rows("refined", "accepting");
    let rej = table_rows("refined", "rejecting");
    let (sessions, cb) = coded_session(&acc, &rej);
    let t = cb.frequency_table(&sessions, SmellKind::LongParameterList);
    assert_eq!(actual(&t.accepting), expected(acc));
    assert_eq!(actual(&t.rejecting), expected(rej));
    assert_eq!((t.accepting_total, t.rejecting_total), (20, 18));
    assert!(cb.frequency_table(&sessions, SmellKind::GodClass).is_empty());
}

#[test]
fn first_task_frequency_table() {
    let acc = table_rows("first", "accepting");
    let rej = table_rows("first", "rejecting");
    let (sessions, cb) = coded_session(&acc, &rej);
    let t = cb.frequency_table(&sessions, SmellKind::LongParameterList);
    assert_eq!(actual(&t.accepting), expected(acc));
    assert_eq!(actual(&t.rejecting), expected(rej));
    assert_eq!((t.accepting_total, t.rejecting_total), (5, 7));
}

#[test]
fn refinement_by_merge_reaches_refined_row() {
    // Two finer codes that a curator folds into one.
    let acc = vec![("Many parameters".to_string(), 4), ("Long signature".to_string(), 2)];
    let (sessions, mut cb) = coded_session(&acc, &[]);
    let smell = SmellKind::LongParameterList;
    let a = cb.find_label("Many parameters", smell, Stance::Accepting).unwrap().code_id.clone();
    let b = cb.find_label("Long signature", smell, Stance::Accepting).unwrap().code_id.clone();
    let merged = cb.merge_codes(&[&a, &b], "Too many parameters").unwrap();
    let t = cb.frequency_table(&sessions, smell);
    assert_eq!(actual(&t.accepting), vec![("Too many parameters".to_string(), 6)]);
    assert_eq!(cb.codes[&merged].merged_from.len(), 2);
}

#[test]
fn discarded_arguments_leave_the_table() {
    let acc = vec![("Too many parameters".to_string(), 3)];
    let (mut sessions, cb) = coded_session(&acc, &[]);
    sessions[0].set_discarded("c001", 0, true).unwrap();
    let t = cb.frequency_table(&sessions, SmellKind::LongParameterList);
    assert_eq!(t.accepting_total, 2);
    let mut annotated = sessions.clone();
    cb.annotate(&mut annotated);
    assert!(annotated[0].verdicts["c001"].arguments[0].codes.is_empty());
    assert_eq!(annotated[0].verdicts["c000"].arguments[0].codes.len(), 1);
}

/// Twelve reviewers, 24 candidates each; 303 arguments with 32 discarded.
fn study_sessions() -> Vec<ReviewSession> {
    let cands = entries("k", 24, SmellKind::DataClass);
    // Argument stance counts: kept and discarded.
    let (acc_kept, acc_disc, rej_kept, rej_disc) = (157usize, 12usize, 114usize, 10usize);
    let mut acc_args: Vec<bool> = (0..acc_kept + acc_disc).map(|i| i >= acc_kept).collect();
    let mut rej_args: Vec<bool> = (0..rej_kept + rej_disc).map(|i| i >= rej_kept).collect();
    let (acc_verdicts, rej_verdicts, unjustified) = (160usize, 118usize, 10usize);
    let mut plan: Vec<Verdict> = Vec::new();
    for (args, n, decision) in [
        (&mut acc_args, acc_verdicts, Decision::Accept),
        (&mut rej_args, rej_verdicts, Decision::Reject),
    ] {
        let extra = args.len() - n;
        for v in 0..n {
            let take = if v < extra { 2 } else { 1 };
            let arguments = args
                .drain(..take)
                .map(|discarded| Argument { text: "reason".into(), codes: vec![], discarded })
                .collect();
            plan.push(Verdict::new(decision, arguments));
        }
        assert!(args.is_empty());
    }
    for i in 0..unjustified {
        let d = if i % 2 == 0 { Decision::Accept } else { Decision::Reject };
        plan.push(Verdict::unjustified(d));
    }
    assert_eq!(plan.len(), 288);
    plan.chunks(24)
        .enumerate()
        .map(|(r, chunk)| {
            let (mut s, _) = create_session(&cands, &format!("reviewer{r}")).unwrap();
            for (c, v) in cands.iter().zip(chunk) {
                s.record_verdict(&c.id, v.clone(), None).unwrap();
            }
            s
        })
        .collect()
}

#[test]
fn study_session_statistics() {
    let st = session_stats(&study_sessions());
    assert_eq!(st.sessions, 12);
    assert_eq!(st.validations, 288);
    assert_eq!(st.arguments_total, 303);
    assert_eq!(st.discarded, 32);
    assert_eq!(st.remaining, 271);
    assert_eq!(format!("{:.2}", st.discard_rate_pct), "11.81");
    assert_eq!(st.accepting, 157);
    assert_eq!(format!("{:.2}", st.accepting_share_pct), "57.93");
    assert!((st.accepting_share_pct + st.rejecting_share_pct - 100.0).abs() < 1e-9);
}

#[test]
fn verdict_history_tracks_every_change() {
    let mut sessions = study_sessions();
    let s = &mut sessions[0];
    let id = s.candidate_set[3].id.clone();
    s.record_verdict(&id, Verdict::new(Decision::Reject, vec![Argument::new("changed my mind")]), None)
        .unwrap();
    let hist: Vec<_> = s.history_for(&id).map(|h| h.verdict.decision).collect();
    assert_eq!(hist.len(), 2);
    assert_eq!(s.verdicts[&id].decision, Decision::Reject);
    assert!(s.history.windows(2).all(|w| w[0].recorded_at <= w[1].recorded_at));
}

#[test]
fn session_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let s = &study_sessions()[0];
    s.save(&path).unwrap();
    let first = std::fs::read(&path).unwrap();
    let back = ReviewSession::load(&path).unwrap();
    assert_eq!(&back, s);
    back.save(&path).unwrap();
    assert_eq!(std::fs::read(&path).unwrap(), first);
    assert_eq!(back.identity_hash(), s.identity_hash());
    std::fs::write(&path, "{ not json").unwrap();
    assert!(matches!(ReviewSession::load(&path), Err(SessionError::Parse(_))));
}

/// Fleiss' kappa in the textbook form, exact.
fn kappa_oracle(m: &[Vec<u32>]) -> Ratio<i64> {
    let big_n = m.len() as i64;
    let n: i64 = m[0].iter().map(|&x| x as i64).sum();
    let k = m[0].len();
    let p_j: Vec<Ratio<i64>> = (0..k)
        .map(|j| Ratio::new(m.iter().map(|r| r[j] as i64).sum(), big_n * n))
        .collect();
    let p_i: Vec<Ratio<i64>> = m
        .iter()
        .map(|r| Ratio::new(r.iter().map(|&x| (x as i64) * (x as i64 - 1)).sum(), n * (n - 1)))
        .collect();
    let p_bar = p_i.iter().sum::<Ratio<i64>>() / big_n;
    let p_e: Ratio<i64> = p_j.iter().map(|p| p * p).sum();
    (p_bar - p_e) / (Ratio::from_integer(1) - p_e)
}

const ACCEPT_COUNTS: [u32; 24] = [5, 11, 9, 10, 9, 10, 12, 12, 7, 10, 6, 11, 2, 10, 6, 12, 10, 2, 12, 12, 5, 4, 9, 4];

fn rated_sessions(counts: &[u32], raters: u32) -> Vec<ReviewSession> {
    let cands = entries("q", counts.len(), SmellKind::GodClass);
    (0..raters)
        .map(|r| {
            let (mut s, _) = create_session(&cands, &format!("r{r}")).unwrap();
            s.session_id = format!("s{r}");
            for (c, &acc) in cands.iter().zip(counts) {
                let d = if r < acc { Decision::Accept } else { Decision::Reject };
                s.record_verdict(&c.id, Verdict::new(d, vec![Argument::new("x")]), None).unwrap();
            }
            s
        })
        .collect()
}

#[test]
fn study_agreement_kappa() {
    let matrix: Vec<Vec<u32>> = ACCEPT_COUNTS.iter().map(|&a| vec![a, 12 - a]).collect();
    let oracle = kappa_oracle(&matrix);
    assert_eq!(oracle, Ratio::new(7, 25));
    let k = fleiss_kappa(&matrix).unwrap();
    assert_eq!(format!("{k:.2}"), "0.28");
    assert!((k - 0.28).abs() < 1e-12);

    let reports = agreement(&rated_sessions(&ACCEPT_COUNTS, 12)).unwrap();
    let all = reports.last().unwrap();
    assert_eq!(all.smell, None);
    assert_eq!((all.raters, all.subjects), (12, 24));
    assert!((all.kappa.unwrap() - 0.28).abs() < 1e-12);
    let shares: f64 = all.category_shares.values().sum();
    assert!((shares - 1.0).abs() < 1e-12);
}

#[test]
fn perfect_and_chance_agreement() {
    let perfect = agreement(&rated_sessions(&[3, 0, 3, 0], 3)).unwrap();
    assert_eq!(perfect.last().unwrap().kappa, Some(1.0));

    // Search two-rater matrices for ones at chance level.
    let rows = [[2u32, 0], [1, 1], [0, 2]];
    let mut found = 0;
    for code in 0..81usize {
        let m: Vec<Vec<u32>> = (0..4).map(|i| rows[(code / 3usize.pow(i)) % 3].to_vec()).collect();
        let cols: Vec<u32> = (0..2).map(|j| m.iter().map(|r| r[j]).sum()).collect();
        if cols.contains(&0) {
            continue;
        }
        if kappa_oracle(&m) == Ratio::from_integer(0) {
            assert_eq!(fleiss_kappa(&m), Ok(0.0), "{m:?}");
            found += 1;
        }
    }
    assert!(found > 0);
    let chance = fleiss_kappa(&[vec![2, 0], vec![0, 2], vec![1, 1], vec![1, 1]]).unwrap();
    assert_eq!(chance, 0.0);
}

#[test]
fn agreement_preconditions() {
    let sessions = rated_sessions(&[1, 2], 2);
    assert_eq!(agreement(&sessions[..1]), Err(AgreementError::TooFewSessions(1)));
    let mut other = rated_sessions(&[1, 2, 0], 2);
    other[0].session_id = "x".into();
    let mixed = vec![sessions[0].clone(), other[0].clone()];
    assert!(matches!(agreement(&mixed), Err(AgreementError::DisjointCandidateSets(_, _))));

    let mut skipped = rated_sessions(&[1, 2, 0], 2);
    let id = skipped[1].candidate_set[0].id.clone();
    skipped[1].record_verdict(&id, Verdict::new(Decision::Skip, vec![]), None).unwrap();
    let all = agreement(&skipped).unwrap().pop().unwrap();
    assert_eq!((all.subjects, all.dropped), (2, 1));
}
