mod common;

use std::path::PathBuf;

use common::gen::random_spec;
use nfrgauge_core::dsl::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn fixture(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn errors(text: &str) -> Vec<Diagnostic> {
    parse(text).expect_err("expected diagnostics")
}

#[test]
fn reliability_fixture_parses_to_three_status_rows() {
    let spec = parse(&fixture("reliability.nfr")).unwrap();
    assert_eq!(spec.templates.len(), 1);
    let t = &spec.templates[0];
    assert_eq!(t.name, "reliability");
    let weights: Vec<f64> = t.subs.iter().map(|s| s.weight).collect();
    assert_eq!(weights, vec![2.0, 8.0]);
    let statuses: Vec<&str> = t.rows.iter().map(|r| r.status.as_str()).collect();
    assert_eq!(statuses, vec!["High Reliable", "Reliable", "Not Reliable"]);
    assert_eq!(t.rows[0].levels, vec!["Low", "High"]);
}

#[test]
fn mnfr_threshold() {
    let spec = parse(r#"project "p" { mnfr "rt" { metric: seconds; threshold: "< 1.0"; } }"#).unwrap();
    let Verification::MetricThreshold(m) = &spec.requirements[0].verification else {
        panic!("not a metric threshold");
    };
    assert_eq!(spec.requirements[0].keyword, DeclKeyword::Mnfr);
    assert_eq!(m.metric, "seconds");
    assert_eq!(m.comparator, Comparator::Lt);
    assert_eq!(m.bound, 1.0);
    assert_eq!(m.unit, None);
    assert_eq!(m.aggregator, None);
}

#[test]
fn dangling_scale_is_reported_by_name() {
    let diags = errors(r#"project "p" { snfr "u" { scale: missing_scale; } }"#);
    assert_eq!(diags.len(), 1);
    assert!(diags[0].message.contains("missing_scale"), "{}", diags[0]);
    assert_eq!((diags[0].line, diags[0].column), (1, 15));
}

#[test]
fn unbounded_shoulder_round_trips() {
    let text = r#"project "p" {
  linguistic speed over tps {
    term slow: trapezoid(-inf, -inf, 10, 20);
    term fast: trapezoid(10, 20, inf, inf);
  }
}"#;
    let spec = parse(text).unwrap();
    let out = serialize(&spec);
    assert!(out.contains("trapezoid(10, 20, inf, inf)"), "{out}");
    assert!(out.contains("trapezoid(-inf, -inf, 10, 20)"), "{out}");
    assert_eq!(parse(&out).unwrap(), spec);
}

#[test]
fn empty_project_is_minimal() {
    let spec = parse("project \"name\" {}").unwrap();
    assert_eq!(serialize(&spec), "project \"name\" {}\n");
}

#[test]
fn fixtures_round_trip() {
    for name in ["project.nfr", "reliability.nfr"] {
        let spec = parse(&fixture(name)).unwrap();
        let text = serialize(&spec);
        assert_eq!(parse(&text).unwrap(), spec, "{name}");
        assert_eq!(serialize(&parse(&text).unwrap()), text, "{name} is not a fixed point");
    }
}

#[test]
fn fixtures_validate_cleanly() {
    for name in ["project.nfr", "reliability.nfr"] {
        let diags = validate(&parse(&fixture(name)).unwrap());
        assert!(diags.is_empty(), "{name}: {diags:?}");
    }
}

#[test]
fn broken_fixture_reports_every_error() {
    let text = fixture("broken.nfr");
    let diags = errors(&text);
    let lines: Vec<u32> = diags.iter().map(|d| d.line).collect();
    // Missing `;` after the metric, the bad triangle arity and the missing
    // closing brace of the project.
    assert!(lines.contains(&4), "{diags:#?}");
    assert!(lines.contains(&12), "{diags:#?}");
    assert!(diags.iter().any(|d| d.message.contains("end of input")), "{diags:#?}");
    assert!(diags
        .iter()
        .all(|d| !d.snippet.is_empty() || d.line as usize > text.lines().count()));
}

#[test]
fn recovery_continues_after_bad_declarations() {
    let text = r#"project "p" {
  mnfr "a" { metric: m; threshold: "fast"; }
  bogus;
  snfr "b" { scale: s; aggregator: max; }
  link x -> ;
  mnfr "c" { metric: m threshold: "< 1"; }
}"#;
    let diags = errors(text);
    let lines: Vec<u32> = diags.iter().map(|d| d.line).collect();
    assert_eq!(lines, vec![2, 3, 4, 5, 6], "{diags:#?}");
}

#[test]
fn missing_brace_does_not_swallow_next_declaration() {
    let text = r#"project "p" {
  mnfr "a" { metric: m; threshold: "< 1";
  requirement "b" { verified_by: 7; }
}"#;
    let diags = errors(text);
    assert_eq!(diags.len(), 2, "{diags:#?}");
    assert_eq!(diags[0].line, 3);
    assert!(diags[0].message.contains('}'));
    assert!(diags[1].message.contains("quoted string"));
}

#[test]
fn resolution_errors() {
    let text = r#"project "p" {
  scale s points 7;
  scale s points 5;
  linguistic v over x { term a: triangle(0, 1, 2); term b: triangle(1, 2, 3); }
  snfr "f" { variable: v; input: load; target: c; }
  template t {
    sub one weight 1 { level hi: interval(0, 1); }
    status ok: lo;
  }
  softgoal g { weight 1 subgoal h; weight 1 leaf "nope"; }
  link nobody -> g sign 1;
}"#;
    let diags = errors(text);
    let messages: Vec<&str> = diags.iter().map(|d| d.message.as_str()).collect();
    assert!(
        messages.iter().any(|m| m.contains("duplicate scale `s`")),
        "{messages:#?}"
    );
    assert!(messages.iter().any(|m| m.contains("term of `v`") && m.contains('c')));
    assert!(messages.iter().any(|m| m.contains("unknown level `lo`")));
    assert!(messages.iter().any(|m| m.contains("unknown soft goal `h`")));
    assert!(messages.iter().any(|m| m.contains("unknown requirement \"nope\"")));
    assert!(messages.iter().any(|m| m.contains("link source `nobody`")));
}

#[test]
fn resolution_waits_for_clean_syntax() {
    let diags = errors(r#"project "p" { snfr "u" { scale: nowhere; } link a -> "b" sign 1; }"#);
    assert_eq!(diags.len(), 1, "{diags:#?}");
    assert!(diags[0].message.contains("expected link target"));
}

#[test]
fn coverage_gap_is_a_validation_error() {
    let text = fixture("reliability.nfr").replace("interval(0.2, inf, 0, 0)", "interval(0.25, inf, 0, 0)");
    let spec = parse(&text).unwrap();
    let diags = validate(&spec);
    assert!(has_errors(&diags));
    assert!(
        diags.iter().any(|d| d.message.contains("gap between 0.2 and 0.25")),
        "{diags:#?}"
    );
}

#[test]
fn unreferenced_variable_warns() {
    let spec =
        parse(r#"project "p" { linguistic v over x { term a: triangle(0, 1, 2); term b: triangle(1, 2, 3); } }"#)
            .unwrap();
    let diags = validate(&spec);
    assert_eq!(diags.len(), 1);
    assert_eq!(diags[0].severity, Severity::Warning);
    assert!(diags[0].message.contains("`v` is never referenced"));
}

#[test]
fn goal_cycle_is_reported() {
    let spec = parse(
        r#"project "p" {
  requirement "r" { verified_by: "t"; }
  softgoal a { weight 1 subgoal b; }
  softgoal b { weight 1 subgoal a; }
  softgoal c { weight 1 leaf "r"; }
}"#,
    )
    .unwrap();
    let diags = validate(&spec);
    assert!(diags.iter().any(|d| d.message.contains("cycle: a -> b")), "{diags:#?}");
}

#[test]
fn check_returns_compiled_spec() {
    let (spec, compiled, warnings) = check(&fixture("project.nfr")).unwrap();
    assert!(warnings.is_empty(), "{warnings:?}");
    assert_eq!(compiled.requirements.len(), spec.requirements.len());
    assert!(compiled.templates.contains_key("reliability"));
    let roots: Vec<&str> = compiled.forest.roots().map(|r| r.id.as_str()).collect();
    assert_eq!(roots, vec!["reliability", "performance", "usability_goal", "security"]);
}

#[test]
fn statement_and_hedge_fields() {
    let text = r#"project "p" {
  linguistic v over x { term a: triangle(0, 1, 2); term b: triangle(1, 2, 3); }
  snfr "f" {
    target: b: somewhat;
    statement: "It should be \"quick\".";
    input: load;
    variable: v;
  }
}"#;
    let spec = parse(text).unwrap();
    let req = &spec.requirements[0];
    assert_eq!(req.statement.as_deref(), Some("It should be \"quick\"."));
    assert_eq!(
        req.verification,
        Verification::FuzzyAssessment {
            variable: "v".into(),
            input: "load".into(),
            target: "b".into(),
            hedge: Some(nfrgauge_core::fuzzy::Hedge::Somewhat),
            aggregator: None,
        }
    );
}

#[test]
fn duplicate_field_is_an_error() {
    let diags = errors(r#"project "p" { requirement "r" { verified_by: "a"; verified_by: "b"; } }"#);
    assert!(diags[0].message.contains("given twice"));
}

fn within_bounds(text: &str, d: &Diagnostic) -> bool {
    let lines: Vec<&str> = text.split('\n').collect();
    let line = d.line as usize;
    line >= 1 && line <= lines.len() && (d.column as usize) <= lines[line - 1].chars().count() + 1
}

#[test]
fn random_specs_round_trip() {
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..300 {
        let spec = random_spec(&mut rng);
        let text = serialize(&spec);
        let back = parse(&text).unwrap_or_else(|d| panic!("{text}\n{d:#?}"));
        assert_eq!(back, spec, "{text}");
    }
}

proptest! {
    #[test]
    fn generated_specs_round_trip(seed in any::<u64>()) {
        let spec = random_spec(&mut StdRng::seed_from_u64(seed));
        let text = serialize(&spec);
        prop_assert_eq!(parse(&text).map_err(|d| format!("{d:?}")), Ok(spec));
    }

    #[test]
    fn arbitrary_text_yields_spec_or_diagnostics(text in "\\PC{0,200}") {
        match parse(&text) {
            Ok(_) => {}
            Err(diags) => {
                prop_assert!(!diags.is_empty());
                for d in &diags {
                    prop_assert!(within_bounds(&text, d), "{:?} outside input", d);
                }
            }
        }
    }

    #[test]
    fn mutated_fixture_yields_spec_or_diagnostics(cut in 0usize..2000, junk in "[{};:\"a-z0-9 ]{0,8}") {
        let base = fixture("project.nfr");
        let cut = base.char_indices().map(|(i, _)| i).nth(cut % base.chars().count()).unwrap();
        let text = format!("{}{junk}{}", &base[..cut], &base[cut..]);
        if let Err(diags) = parse(&text) {
            prop_assert!(!diags.is_empty());
            for d in &diags {
                prop_assert!(within_bounds(&text, d), "{:?} outside input", d);
            }
        }
    }

    #[test]
    fn token_positions_never_decrease(seed in any::<u64>()) {
        let text = serialize(&random_spec(&mut StdRng::seed_from_u64(seed)));
        let tokens = tokenize(&text).unwrap();
        for pair in tokens.windows(2) {
            let (a, b) = (pair[0].span, pair[1].span);
            prop_assert!((a.line, a.column) < (b.line, b.column));
        }
    }
}
