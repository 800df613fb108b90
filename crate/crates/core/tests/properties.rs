use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::OnceLock;

use proptest::prelude::*;
use smellval_core::detector::{detect, DetectionConfig};
use smellval_core::metrics::{compute_metrics, compute_type_metrics, MetricId};
use smellval_core::review::*;
use smellval_core::source::{
    load_project, parse_source, resolve_project, to_java, ParseOptions, ProjectModel, SourceUnit,
};
use smellval_core::SmellKind;

fn corpus_model() -> &'static ProjectModel {
    static MODEL: OnceLock<ProjectModel> = OnceLock::new();
    MODEL.get_or_init(|| {
        load_project(&[PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures/corpus")]).unwrap()
    })
}

// ---- generated Java ----

const TYPES: &[&str] = &["int", "long", "double", "String", "Order", "List<String>", "Map<String, Integer>", "byte[]"];

#[derive(Debug, Clone)]
struct GenMethod {
    ret: Option<usize>,
    params: Vec<usize>,
    body: Option<Vec<u8>>,
}

#[derive(Debug, Clone)]
struct GenClass {
    fields: Vec<usize>,
    methods: Vec<GenMethod>,
}

fn gen_method() -> impl Strategy<Value = GenMethod> {
    (
        prop::option::of(0..TYPES.len()),
        prop::collection::vec(0..TYPES.len(), 0..7),
        prop::option::weighted(0.9, prop::collection::vec(0u8..6, 0..6)),
    )
        .prop_map(|(ret, params, body)| GenMethod { ret, params, body })
}

fn gen_class() -> impl Strategy<Value = GenClass> {
    (
        prop::collection::vec(0..TYPES.len(), 0..8),
        prop::collection::vec(gen_method(), 0..8),
    )
        .prop_map(|(fields, methods)| GenClass { fields, methods })
}

fn statement(kind: u8, m: &GenMethod, has_field: bool) -> String {
    let p = if m.params.is_empty() { "0".to_string() } else { "p0".to_string() };
    match kind {
        0 => format!("System.out.println({p});"),
        1 if has_field => format!("this.f0 = {p};"),
        2 => "helper.run(1, 2);".to_string(),
        3 => format!("if ({p} != null) {{\n            log.info(\"x\");\n        }}"),
        4 => "int local = 3;".to_string(),
        _ => "count++;".to_string(),
    }
}

fn render(c: &GenClass) -> String {
    let mut s = String::from("import java.util.List;\nimport java.util.Map;\n\npublic class Gen {\n");
    for (i, t) in c.fields.iter().enumerate() {
        s.push_str(&format!("    private {} f{i};\n", TYPES[*t]));
    }
    for (i, m) in c.methods.iter().enumerate() {
        let params: Vec<String> = m.params.iter().enumerate().map(|(j, t)| format!("{} p{j}", TYPES[*t])).collect();
        let ret = m.ret.map_or("void", |r| TYPES[r]);
        let abstract_ = if m.body.is_none() { "native " } else { "" };
        s.push_str(&format!("\n    public {abstract_}{ret} m{i}({})", params.join(", ")));
        match &m.body {
            None => s.push_str(";\n"),
            Some(stmts) => {
                s.push_str(" {\n");
                for k in stmts {
                    s.push_str(&format!("        {}\n", statement(*k, m, !c.fields.is_empty())));
                }
                if m.ret.is_some() {
                    s.push_str("        return null;\n");
                }
                s.push_str("    }\n");
            }
        }
    }
    s.push_str("}\n");
    s
}

fn parse(src: &str) -> SourceUnit {
    parse_source(src, "Gen.java", &ParseOptions::default())
}

fn junk() -> impl Strategy<Value = String> {
    let toks = prop::sample::select(vec!["foo", "(", ")", ";", "+", "123", "=", ".", " ", "\n", "bar", ",", "<", ">", "]", "@"]);
    prop::collection::vec(toks, 0..30).prop_map(|v| v.concat())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn generated_classes_parse_cleanly(c in gen_class()) {
        let u = parse(&render(&c));
        prop_assert!(u.diagnostics.is_empty(), "{:?}", u.diagnostics);
        prop_assert_eq!(u.types.len(), 1);
        prop_assert_eq!(u.types[0].fields.len(), c.fields.len());
        prop_assert_eq!(u.types[0].methods.len(), c.methods.len());
    }

    #[test]
    fn spans_nest(c in gen_class()) {
        let u = parse(&render(&c));
        let t = &u.types[0];
        prop_assert!(t.span.end <= u.line_count);
        let mut covered = 0;
        for m in &t.methods {
            prop_assert!(t.span.contains(&m.span));
            covered += m.span.len();
            if let Some(b) = &m.body {
                prop_assert!(b.line_count <= m.span.len());
            }
        }
        prop_assert!(covered <= t.span.len());
    }

    #[test]
    fn pretty_printing_is_idempotent(c in gen_class()) {
        let u = parse(&render(&c));
        let once = to_java(&u);
        let again = parse(&once);
        prop_assert!(again.diagnostics.is_empty(), "{:?}\n{}", again.diagnostics, once);
        prop_assert_eq!(to_java(&again), once);
        prop_assert_eq!(again.types[0].methods.len(), u.types[0].methods.len());
    }

    #[test]
    fn trailing_junk_keeps_declarations(c in gen_class(), tail in junk()) {
        let clean = parse(&render(&c));
        let dirty = parse(&format!("{}{tail}", render(&c)));
        prop_assert_eq!(dirty.types.len(), 1);
        prop_assert_eq!(dirty.types[0].methods.len(), clean.types[0].methods.len());
        prop_assert_eq!(dirty.types[0].fields.len(), clean.types[0].fields.len());
    }

    #[test]
    fn arbitrary_bytes_never_panic(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        let _ = smellval_core::source::parse_unit(&bytes, "X.java");
    }

    #[test]
    fn arbitrary_java_ish_text_never_panics(
        parts in prop::collection::vec(prop::sample::select(vec![
            "class", "interface", "enum", "A", "{", "}", "(", ")", ";", "extends", "implements",
            "public", "void", "int", "x", ",", "<", ">", "\"", "'", "/*", "*/", "//", "\n", "@", "=", ".",
        ]), 0..80)
    ) {
        let _ = parse(&parts.join(" "));
    }

    #[test]
    fn method_counts_partition(c in gen_class()) {
        let model = resolve_project(vec![parse(&render(&c))]).unwrap();
        let ms = compute_type_metrics(&model, "Gen").unwrap();
        let nom = ms.count(MetricId::Nom);
        prop_assert_eq!(ms.count(MetricId::AccessorCount) + ms.count(MetricId::NonAccessorMethodCount), nom);
        prop_assert_eq!(nom + ms.count(MetricId::ConstructorCount), c.methods.len() as u32);
        prop_assert_eq!(ms.count(MetricId::Noa), c.fields.len() as u32);
        for r in [MetricId::DelegationRatio, MetricId::OverrideRatio] {
            let v = ms.get(r);
            prop_assert!((0.0..=1.0).contains(&v));
        }
    }
}

// ---- detection ----

fn loose_config() -> impl Strategy<Value = DetectionConfig> {
    (
        (1u32..8, 1u32..300, 1u32..20, 0u32..4, 0.0..1.0f64, 1u32..5),
        (1u32..8, 0.0..1.0f64, 1u32..4, 0.0..1.0f64, 1u32..8, 1u32..6),
    )
        .prop_map(|((lpl, loc, nom, data, deleg, mnom), (envy, own, beq, ovr, pf, pp))| DetectionConfig {
            lpl_min_params: lpl,
            god_min_loc: loc,
            god_min_nom: nom,
            data_max_non_accessor: data,
            middle_min_delegation_ratio: deleg,
            middle_min_nom: mnom,
            envy_min_foreign_calls: envy,
            envy_max_own_ratio: own,
            bequest_min_unused_inherited: beq,
            bequest_min_override_ratio: ovr,
            prim_obs_min_primitive_fields: pf,
            prim_obs_min_params: pp,
            ..DetectionConfig::default()
        })
}

fn ids(cfg: &DetectionConfig) -> BTreeSet<String> {
    detect(corpus_model(), cfg).into_iter().map(|c| c.id).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn stricter_thresholds_never_add_candidates(base in loose_config(), d in 0u32..4, r in 0.0..0.5f64) {
        let strict = DetectionConfig {
            lpl_min_params: base.lpl_min_params + d,
            god_min_loc: base.god_min_loc + 10 * d,
            god_min_nom: base.god_min_nom + d,
            data_max_non_accessor: base.data_max_non_accessor.saturating_sub(d),
            middle_min_delegation_ratio: (base.middle_min_delegation_ratio + r).min(1.0),
            middle_min_nom: base.middle_min_nom + d,
            envy_min_foreign_calls: base.envy_min_foreign_calls + d,
            envy_max_own_ratio: (base.envy_max_own_ratio - r).max(0.0),
            bequest_min_unused_inherited: base.bequest_min_unused_inherited + d,
            bequest_min_override_ratio: (base.bequest_min_override_ratio + r).min(1.0),
            prim_obs_min_primitive_fields: base.prim_obs_min_primitive_fields + d,
            prim_obs_min_params: base.prim_obs_min_params + d,
            ..base.clone()
        };
        prop_assert!(strict.validate().is_ok());
        let loose = ids(&base);
        let tight = ids(&strict);
        prop_assert!(tight.is_subset(&loose), "{:?}", tight.difference(&loose).collect::<Vec<_>>());
    }

    #[test]
    fn triggers_rederive_from_metrics(cfg in loose_config()) {
        let model = corpus_model();
        for c in detect(model, &cfg) {
            let e = model.find_entity(&c.entity).expect("candidate entity resolves");
            let ms = compute_metrics(model, &e).unwrap();
            prop_assert!(!c.triggered_by.is_empty());
            for t in &c.triggered_by {
                prop_assert_eq!(ms.get(t.metric), t.value);
                prop_assert!(t.op.holds(t.value, t.threshold));
            }
            prop_assert!(c.triggered_by.windows(2).all(|w| w[0].metric <= w[1].metric));
        }
    }
}

#[test]
fn corpus_metric_partition() {
    let model = corpus_model();
    for t in model.types() {
        let ms = compute_type_metrics(model, &t.qualified_name).unwrap();
        let nom = ms.count(MetricId::Nom);
        assert_eq!(ms.count(MetricId::AccessorCount) + ms.count(MetricId::NonAccessorMethodCount), nom);
        assert_eq!(nom + ms.count(MetricId::ConstructorCount), t.methods.len() as u32);
    }
}

// ---- review ----

fn fixed_sessions(n_args: usize) -> Vec<ReviewSession> {
    let cands: Vec<CandidateEntry> = (0..n_args)
        .map(|i| CandidateEntry { id: format!("c{i}"), smell: SmellKind::FeatureEnvy })
        .collect();
    let (mut s, _) = create_session(&cands, "r").unwrap();
    s.session_id = "s".into();
    for (i, c) in cands.iter().enumerate() {
        let d = if i % 3 == 0 { Decision::Reject } else { Decision::Accept };
        let args = vec![Argument::new("a"), Argument::new("b")];
        s.record_verdict(&c.id, Verdict::new(d, args), None).unwrap();
    }
    vec![s]
}

#[derive(Debug, Clone)]
enum Op {
    Merge(usize, usize),
    Split(usize, usize, Vec<bool>),
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        (any::<usize>(), any::<usize>()).prop_map(|(a, b)| Op::Merge(a, b)),
        (any::<usize>(), 1usize..4, prop::collection::vec(any::<bool>(), 24)).prop_map(|(a, k, sel)| Op::Split(a, k, sel)),
    ]
}

fn totals(cb: &Codebook, sessions: &[ReviewSession]) -> (usize, usize) {
    let t = cb.frequency_table(sessions, SmellKind::FeatureEnvy);
    (t.accepting_total, t.rejecting_total)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn merge_and_split_conserve_tag_counts(ops in prop::collection::vec(op(), 1..12), tags in prop::collection::vec(0usize..6, 16)) {
        let sessions = fixed_sessions(8);
        let smell = SmellKind::FeatureEnvy;
        let mut cb = Codebook::new();
        let acc: Vec<String> = (0..3).map(|i| cb.add_code(&format!("acc{i}"), smell, Stance::Accepting)).collect();
        let rej: Vec<String> = (0..3).map(|i| cb.add_code(&format!("rej{i}"), smell, Stance::Rejecting)).collect();
        for (k, &tag) in tags.iter().enumerate() {
            let (cand, idx) = (k / 2, k % 2);
            let pool = if cand % 3 == 0 { &rej } else { &acc };
            let _ = cb.code_argument(&sessions, &ArgumentRef::new("s", &format!("c{cand}"), idx), &pool[tag % 3]);
        }
        let before = totals(&cb, &sessions);
        for op in ops {
            let active: Vec<String> = cb.codes.values().filter(|c| !c.retired).map(|c| c.code_id.clone()).collect();
            match op {
                Op::Merge(a, b) => {
                    let (x, y) = (&active[a % active.len()], &active[b % active.len()]);
                    let same = cb.codes[x].stance == cb.codes[y].stance;
                    let r = cb.merge_codes(&[x, y], "merged");
                    if x == y {
                        prop_assert_eq!(r, Err(CodebookError::TooFewCodes));
                    } else if !same {
                        prop_assert_eq!(r, Err(CodebookError::MixedStanceMerge));
                    } else {
                        prop_assert!(r.is_ok());
                    }
                }
                Op::Split(a, k, sel) => {
                    let id = active[a % active.len()].clone();
                    let carriers: Vec<ArgumentRef> = cb
                        .assignments
                        .iter()
                        .filter(|(_, t)| t.contains(&id))
                        .map(|(r, _)| r.clone())
                        .collect();
                    let mut parts: Vec<(&str, Vec<ArgumentRef>)> = (0..k).map(|_| ("part", Vec::new())).collect();
                    for (i, r) in carriers.into_iter().enumerate() {
                        if sel[i % sel.len()] {
                            parts[i % k].1.push(r);
                        }
                    }
                    prop_assert!(cb.split_code(&id, &parts).is_ok());
                }
            }
            prop_assert_eq!(totals(&cb, &sessions), before);
            for tags in cb.assignments.values() {
                prop_assert!(tags.iter().all(|t| !cb.codes[t].retired));
            }
        }
    }
}

fn verdict() -> impl Strategy<Value = Verdict> {
    (
        prop::sample::select(vec![Decision::Accept, Decision::Reject, Decision::Skip]),
        prop::collection::vec(("[a-z ,\"\\\\é]{1,12}", any::<bool>()), 0..3),
    )
        .prop_map(|(decision, args)| {
            let arguments: Vec<Argument> = args
                .into_iter()
                .map(|(text, discarded)| Argument { text: format!("x{text}"), codes: vec![], discarded })
                .collect();
            let unjustified = arguments.is_empty();
            Verdict { decision, arguments, unjustified }
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn session_json_round_trip_is_byte_identical(
        verdicts in prop::collection::vec(verdict(), 1..10),
        answers in prop::collection::vec(prop::sample::select(vec![ItemAnswer::Yes, ItemAnswer::No, ItemAnswer::Unsure, ItemAnswer::Skipped]), 0..4),
    ) {
        let cands: Vec<CandidateEntry> = (0..verdicts.len())
            .map(|i| CandidateEntry { id: format!("c{i}"), smell: SmellKind::MiddleMan })
            .collect();
        let (mut s, _) = create_session(&cands, "r").unwrap();
        for (c, v) in cands.iter().zip(&verdicts) {
            s.record_verdict(&c.id, v.clone(), None).unwrap();
        }
        for (a, item) in answers.iter().zip(["MM-1", "MM-2"].iter().cycle()) {
            s.record_answer("c0", item, *a).unwrap();
        }
        let first = s.to_json();
        let back = ReviewSession::from_json(&first).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_json(), first);
        let st = session_stats(&[s]);
        prop_assert_eq!(st.accepting + st.rejecting + st.discarded, st.arguments_total);
    }

    #[test]
    fn kappa_bounds_and_invariances(
        raters in 2u32..9,
        rows in prop::collection::vec(prop::collection::vec(0u32..100, 3), 1..20),
        shift in any::<usize>(),
    ) {
        // Turn arbitrary weights into rows that each sum to `raters`.
        let m: Vec<Vec<u32>> = rows
            .iter()
            .map(|w| {
                let total: u32 = w.iter().sum::<u32>().max(1);
                let mut r: Vec<u32> = w.iter().map(|x| x * raters / total).collect();
                let missing = raters - r.iter().sum::<u32>();
                r[0] += missing;
                r
            })
            .collect();
        match fleiss_kappa(&m) {
            Ok(k) => {
                prop_assert!((-1.0..=1.0).contains(&k), "{k}");
                let mut rotated = m.clone();
                rotated.rotate_left(shift % m.len());
                prop_assert_eq!(fleiss_kappa(&rotated), Ok(k));
                let swapped: Vec<Vec<u32>> = m.iter().map(|r| vec![r[2], r[0], r[1]]).collect();
                prop_assert_eq!(fleiss_kappa(&swapped), Ok(k));
            }
            Err(e) => prop_assert_eq!(e, KappaError::SingleCategory),
        }
    }
}
