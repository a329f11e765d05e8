//! Random, fully resolvable spec models for round-trip testing.

use nfrgauge_core::dsl::*;
use nfrgauge_core::fuzzy::Hedge;
use nfrgauge_core::ingest::Aggregator;
use rand::seq::SliceRandom;
use rand::Rng;

const WORDS: [&str; 10] = [
    "speed",
    "Load",
    "_tmp",
    "q",
    "recovery",
    "UX",
    "net_io",
    "cache2",
    "alpha_beta",
    "z9",
];
const TEXT_CHARS: [&str; 14] = ["a", "Z", " ", "0", "\"", "\\", "\n", "\t", "é", "→", "#", "{", ";", "-"];

fn ident(rng: &mut impl Rng, n: usize) -> String {
    format!("{}{n}", WORDS.choose(rng).unwrap())
}

fn text(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(0..12);
    (0..len).map(|_| *TEXT_CHARS.choose(rng).unwrap()).collect()
}

fn id_text(rng: &mut impl Rng, n: usize) -> String {
    if rng.gen_bool(0.5) {
        ident(rng, n)
    } else {
        format!("{}-{n}", text(rng))
    }
}

pub fn number(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..5) {
        0 => rng.gen_range(-50..50) as f64,
        1 => rng.gen_range(-1000..1000) as f64 / 100.0,
        2 => rng.gen_range(-1.0e6..1.0e6),
        3 => rng.gen::<f64>(),
        _ => rng.gen_range(-1.0e-3..1.0e-3),
    }
}

fn bounded(rng: &mut impl Rng) -> f64 {
    match rng.gen_range(0..8) {
        0 => f64::INFINITY,
        1 => f64::NEG_INFINITY,
        _ => number(rng),
    }
}

fn shape(rng: &mut impl Rng) -> Shape {
    match rng.gen_range(0..3) {
        0 => Shape::Triangle {
            a: bounded(rng),
            b: number(rng),
            c: bounded(rng),
        },
        1 => Shape::Trapezoid {
            a: bounded(rng),
            b: bounded(rng),
            c: bounded(rng),
            d: bounded(rng),
        },
        _ => Shape::Interval {
            lo: bounded(rng),
            hi: bounded(rng),
            lo_inclusive: rng.gen(),
            hi_inclusive: rng.gen(),
        },
    }
}

fn maybe<R: Rng, T>(rng: &mut R, f: impl FnOnce(&mut R) -> T) -> Option<T> {
    if rng.gen_bool(0.5) {
        Some(f(rng))
    } else {
        None
    }
}

fn aggregator<R: Rng>(rng: &mut R) -> Aggregator {
    *Aggregator::ALL.choose(rng).unwrap()
}

/// A spec whose every reference resolves, exercising every construct.
pub fn random_spec<R: Rng>(rng: &mut R) -> RequirementSpec {
    let mut counter = 0;
    let mut next = || {
        counter += 1;
        counter
    };
    let mut spec = RequirementSpec::new(text(rng));

    for _ in 0..rng.gen_range(0..3) {
        let def = if rng.gen_bool(0.5) {
            ScaleDef::Standard(rng.gen_range(3..9))
        } else {
            ScaleDef::Custom(
                (0..rng.gen_range(1..8))
                    .map(|i| (text(rng), rng.gen_range(-3..9) + i))
                    .collect(),
            )
        };
        spec.scales.push(ScaleDecl {
            name: ident(rng, next()),
            def,
            span: Span::default(),
        });
    }

    for _ in 0..rng.gen_range(0..3) {
        let terms = (0..rng.gen_range(1..5))
            .map(|_| TermDecl {
                name: ident(rng, next()),
                shape: shape(rng),
                span: Span::default(),
            })
            .collect();
        spec.variables.push(VariableDecl {
            name: ident(rng, next()),
            unit: ident(rng, next()),
            domain: maybe(rng, |r| (number(r), number(r))),
            terms,
            span: Span::default(),
        });
    }

    for _ in 0..rng.gen_range(0..3) {
        let subs: Vec<SubDecl> = (0..rng.gen_range(1..4))
            .map(|_| SubDecl {
                name: ident(rng, next()),
                weight: number(rng),
                range: maybe(rng, |r| (bounded(r), bounded(r))),
                levels: (0..rng.gen_range(1..4))
                    .map(|_| LevelDecl {
                        name: ident(rng, next()),
                        shape: shape(rng),
                        span: Span::default(),
                    })
                    .collect(),
                span: Span::default(),
            })
            .collect();
        let rows = (0..rng.gen_range(1..4))
            .map(|_| RowDecl {
                status: if rng.gen_bool(0.5) {
                    ident(rng, next())
                } else {
                    format!("{} {}", text(rng), next())
                },
                levels: subs
                    .iter()
                    .map(|s| s.levels.choose(rng).unwrap().name.clone())
                    .collect(),
                span: Span::default(),
            })
            .collect();
        spec.templates.push(TemplateDecl {
            name: ident(rng, next()),
            subs,
            rows,
            span: Span::default(),
        });
    }

    for _ in 0..rng.gen_range(0..8) {
        let (keyword, verification) = match rng.gen_range(0..7) {
            0 => (DeclKeyword::Requirement, Verification::BooleanCheck { test: text(rng) }),
            1 => (DeclKeyword::Requirement, Verification::None),
            2 => (DeclKeyword::Snfr, Verification::None),
            3 => (
                DeclKeyword::Mnfr,
                Verification::MetricThreshold(MetricThreshold {
                    metric: ident(rng, next()),
                    comparator: *Comparator::ALL.choose(rng).unwrap(),
                    bound: number(rng),
                    unit: maybe(rng, |r| {
                        ["s", "ms", "%", "req/s", "failures per hour"]
                            .choose(r)
                            .unwrap()
                            .to_string()
                    }),
                    aggregator: maybe(rng, aggregator),
                }),
            ),
            4 if !spec.scales.is_empty() => (
                DeclKeyword::Snfr,
                Verification::LikertSurvey {
                    scale: spec.scales.choose(rng).unwrap().name.clone(),
                    survey: maybe(rng, |r| text(r)),
                    band: maybe(rng, |r| number(r)),
                },
            ),
            5 if !spec.variables.is_empty() => {
                let var = spec.variables.choose(rng).unwrap();
                (
                    DeclKeyword::Snfr,
                    Verification::FuzzyAssessment {
                        variable: var.name.clone(),
                        input: ident(rng, next()),
                        target: var.terms.choose(rng).unwrap().name.clone(),
                        hedge: maybe(rng, |r| *Hedge::ALL.choose(r).unwrap()),
                        aggregator: maybe(rng, aggregator),
                    },
                )
            }
            6 if !spec.templates.is_empty() => (
                DeclKeyword::Snfr,
                Verification::TemplateAssessment {
                    template: spec.templates.choose(rng).unwrap().name.clone(),
                    aggregator: maybe(rng, aggregator),
                },
            ),
            _ => (DeclKeyword::Mnfr, {
                Verification::MetricThreshold(MetricThreshold {
                    metric: ident(rng, next()),
                    comparator: Comparator::Lt,
                    bound: 1.0,
                    unit: None,
                    aggregator: None,
                })
            }),
        };
        spec.requirements.push(Requirement {
            id: id_text(rng, next()),
            keyword,
            statement: maybe(rng, |r| text(r)),
            verification,
            span: Span::default(),
        });
    }

    let goal_ids: Vec<String> = (0..rng.gen_range(0..5)).map(|_| ident(rng, next())).collect();
    for id in &goal_ids {
        let mut children = Vec::new();
        for _ in 0..rng.gen_range(0..4) {
            let target = if rng.gen_bool(0.5) && !spec.requirements.is_empty() {
                ChildTarget::Leaf(spec.requirements.choose(rng).unwrap().id.clone())
            } else {
                ChildTarget::Subgoal(goal_ids.choose(rng).unwrap().clone())
            };
            children.push(ChildDecl {
                weight: number(rng),
                target,
                span: Span::default(),
            });
        }
        spec.softgoals.push(SoftGoalDecl {
            id: id.clone(),
            threshold: maybe(rng, |r| number(r)),
            children,
            span: Span::default(),
        });
    }

    if !goal_ids.is_empty() {
        for _ in 0..rng.gen_range(0..4) {
            let source = if rng.gen_bool(0.5) && !spec.requirements.is_empty() {
                spec.requirements.choose(rng).unwrap().id.clone()
            } else {
                goal_ids.choose(rng).unwrap().clone()
            };
            spec.links.push(LinkDecl {
                source,
                target: goal_ids.choose(rng).unwrap().clone(),
                sign: number(rng),
                span: Span::default(),
            });
        }
    }
    spec
}

/// A random forest of at most `max_nodes` goals with leaf satisfactions.
/// Every requirement id is bound to exactly one leaf.
pub fn random_forest<R: Rng>(
    rng: &mut R,
    max_nodes: usize,
) -> (
    Vec<nfrgauge_core::goal::SoftGoalNode>,
    std::collections::HashMap<String, f64>,
) {
    use nfrgauge_core::goal::SoftGoalNode;
    let n = rng.gen_range(1..=max_nodes);
    // parent[i] < i keeps the shape acyclic; None starts a new tree.
    let parent: Vec<Option<usize>> = (0..n)
        .map(|i| {
            if i == 0 || rng.gen_bool(0.2) {
                None
            } else {
                Some(rng.gen_range(0..i))
            }
        })
        .collect();
    let mut nodes = Vec::new();
    let mut sats = std::collections::HashMap::new();
    for i in 0..n {
        let children: Vec<String> = (0..n)
            .filter(|&c| parent[c] == Some(i))
            .map(|c| format!("g{c}"))
            .collect();
        let weight = if rng.gen_bool(0.2) {
            rng.gen_range(1..10) as f64
        } else {
            rng.gen_range(0.01..10.0)
        };
        let node = if children.is_empty() {
            let req = format!("r{i}");
            let s = match rng.gen_range(0..6) {
                0 => 0.0,
                1 => 1.0,
                _ => rng.gen::<f64>(),
            };
            sats.insert(req.clone(), s);
            SoftGoalNode::leaf(format!("g{i}"), weight, req)
        } else {
            SoftGoalNode::internal(format!("g{i}"), weight, children)
        };
        nodes.push(node);
    }
    nodes.shuffle(rng);
    (nodes, sats)
}

/// Recursive reference evaluation of one goal, straight from the
/// definition of the weighted average.
pub fn oracle(
    nodes: &[nfrgauge_core::goal::SoftGoalNode],
    sats: &std::collections::HashMap<String, f64>,
    id: &str,
) -> f64 {
    use nfrgauge_core::goal::GoalKind;
    let node = nodes.iter().find(|n| n.id == id).unwrap();
    match &node.kind {
        GoalKind::Leaf(req) => sats[req],
        GoalKind::Children(children) => {
            let mut num = 0.0;
            let mut den = 0.0;
            for c in children {
                let w = nodes.iter().find(|n| &n.id == c).unwrap().weight;
                num += w * oracle(nodes, sats, c);
                den += w;
            }
            num / den
        }
    }
}
