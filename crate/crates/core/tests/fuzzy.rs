use nfrgauge_core::fuzzy::*;
use proptest::prelude::*;

fn ramp(rng_values: &[f64]) -> Vec<f64> {
    let mut v = rng_values.to_vec();
    v.sort_by(f64::total_cmp);
    v
}

fn any_membership() -> impl Strategy<Value = MembershipFunction> {
    let edge = prop_oneof![
        8 => -100.0f64..100.0,
        1 => Just(f64::NEG_INFINITY),
        1 => Just(f64::INFINITY),
    ];
    prop_oneof![
        prop::collection::vec(edge.clone(), 3).prop_map(|v| {
            let v = ramp(&v);
            MembershipFunction::triangular(v[0], v[1], v[2])
        }),
        prop::collection::vec(edge.clone(), 4).prop_map(|v| {
            let v = ramp(&v);
            MembershipFunction::trapezoidal(v[0], v[1], v[2], v[3])
        }),
        (prop::collection::vec(edge, 2), any::<bool>(), any::<bool>()).prop_map(|(v, l, h)| {
            let v = ramp(&v);
            MembershipFunction::crisp(v[0], v[1], l, h)
        }),
    ]
    .prop_filter_map("valid", Result::ok)
}

/// low / mid / high over [0, inf) with degrees summing to one everywhere.
fn partition() -> LinguisticVariable {
    LinguisticVariable::new(
        "load",
        "%",
        Some((0.0, f64::INFINITY)),
        vec![
            (
                "low".into(),
                MembershipFunction::trapezoidal(0.0, 0.0, 10.0, 20.0).unwrap(),
            ),
            ("mid".into(), MembershipFunction::triangular(10.0, 20.0, 30.0).unwrap()),
            (
                "high".into(),
                MembershipFunction::trapezoidal(20.0, 30.0, f64::INFINITY, f64::INFINITY).unwrap(),
            ),
        ],
    )
    .unwrap()
}

#[test]
fn partition_sums_to_one() {
    let lv = partition();
    for i in 0..=4000 {
        let x = i as f64 * 0.0125;
        let total: f64 = lv.fuzzify(x).unwrap().iter().map(|(_, d)| d).sum();
        assert!((total - 1.0).abs() <= 1e-9, "sum {total} at {x}");
    }
}

#[test]
fn fuzzify_example() {
    let lv = LinguisticVariable::new(
        "throughput",
        "tps",
        None,
        vec![
            (
                "slow".into(),
                MembershipFunction::trapezoidal(0.0, 0.0, 10.0, 20.0).unwrap(),
            ),
            (
                "average".into(),
                MembershipFunction::triangular(15.0, 30.0, 45.0).unwrap(),
            ),
            (
                "fast".into(),
                MembershipFunction::trapezoidal(40.0, 60.0, f64::INFINITY, f64::INFINITY).unwrap(),
            ),
        ],
    )
    .unwrap();
    let d = lv.fuzzify(17.5).unwrap();
    // Oracle: slow falls from 20 over 10 units, average rises from 15 over 15.
    assert!((d[0].1 - (20.0 - 17.5) / 10.0).abs() < 1e-12);
    assert!((d[1].1 - (17.5 - 15.0) / 15.0).abs() < 1e-12);
    assert_eq!(d[2].1, 0.0);
    assert_eq!(best_label(&d).unwrap(), ("slow", 0.25));
}

/// Independent reading of the grading rules: crisp bands looked up by
/// direct interval tests, statuses by scanning rows.
#[derive(Debug)]
struct Oracle {
    weights: Vec<f64>,
    bands: Vec<Vec<(f64, f64, bool, bool)>>,
    rows: Vec<Vec<usize>>,
}

impl Oracle {
    fn rank(&self, sub: usize, x: f64) -> usize {
        self.bands[sub]
            .iter()
            .position(|&(lo, hi, li, hi_i)| (x > lo || (li && x == lo)) && (x < hi || (hi_i && x == hi)))
            .unwrap()
    }

    fn status(&self, ranks: &[usize]) -> usize {
        if let Some(r) = self.rows.iter().position(|row| row == ranks) {
            return r;
        }
        let value = |s: usize| {
            let n = self.bands[s].len();
            if n == 1 {
                1.0
            } else {
                1.0 - ranks[s] as f64 / (n - 1) as f64
            }
        };
        let mut worst = 0;
        for s in 1..ranks.len() {
            if value(s) < value(worst) {
                worst = s;
            }
        }
        self.rows
            .iter()
            .position(|row| row[worst] >= ranks[worst])
            .unwrap_or(self.rows.len() - 1)
    }

    fn score(&self, ranks: &[usize]) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for (s, &r) in ranks.iter().enumerate() {
            let n = self.bands[s].len();
            let v = if n == 1 { 1.0 } else { 1.0 - r as f64 / (n - 1) as f64 };
            num += self.weights[s] * v;
            den += self.weights[s];
        }
        num / den
    }
}

fn random_template() -> impl Strategy<Value = (WeightedTemplate, Oracle)> {
    let sub = (1usize..=4, 0.1f64..10.0, any::<bool>());
    (
        prop::collection::vec(sub, 1..=3),
        prop::collection::vec(prop::collection::vec(0usize..4, 3), 1..=5),
    )
        .prop_map(|(subs, raw_rows)| {
            let mut bands = Vec::new();
            let mut defs = Vec::new();
            for (i, &(levels, weight, closed_low)) in subs.iter().enumerate() {
                // Cut points 0, 1, ..., levels; the inclusive end alternates.
                let mut sub_bands = Vec::new();
                let mut gradings = Vec::new();
                for l in 0..levels {
                    let (lo, hi) = (l as f64, (l + 1) as f64);
                    let li = l == 0 || !closed_low;
                    let hi_i = l + 1 == levels || closed_low;
                    sub_bands.push((lo, hi, li, hi_i));
                    gradings.push(Grading {
                        level: format!("L{l}"),
                        function: MembershipFunction::crisp(lo, hi, li, hi_i).unwrap(),
                    });
                }
                bands.push(sub_bands);
                defs.push(SubNfr {
                    name: format!("s{i}"),
                    weight,
                    range: Some((0.0, levels as f64)),
                    gradings,
                });
            }
            let rows: Vec<Vec<usize>> = raw_rows
                .iter()
                .map(|r| (0..subs.len()).map(|s| r[s] % subs[s].0).collect())
                .collect();
            let status_rows = rows
                .iter()
                .enumerate()
                .map(|(i, r)| StatusRow {
                    status: format!("status{i}"),
                    levels: r.iter().map(|l| format!("L{l}")).collect(),
                })
                .collect();
            let template = WeightedTemplate::new("t", defs, status_rows).unwrap();
            let weights = subs.iter().map(|s| s.1).collect();
            (template, Oracle { weights, bands, rows })
        })
}

fn assignments(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in sizes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |l| {
                    let mut p = prefix.clone();
                    p.push(l);
                    p
                })
            })
            .collect();
    }
    out
}

proptest! {
    #[test]
    fn membership_within_unit_interval(mf in any_membership(), x in prop_oneof![-150.0f64..150.0, Just(f64::INFINITY), Just(f64::NEG_INFINITY)]) {
        let d = mf.degree(x);
        prop_assert!((0.0..=1.0).contains(&d), "{:?} at {} gave {}", mf, x, d);
        if mf.is_crisp() {
            prop_assert!(d == 0.0 || d == 1.0);
        }
    }

    #[test]
    fn template_matches_oracle((template, oracle) in random_template()) {
        let sizes: Vec<usize> = oracle.bands.iter().map(Vec::len).collect();
        for ranks in assignments(&sizes) {
            // A value strictly inside every chosen band.
            let values: Vec<(String, f64)> = ranks
                .iter()
                .enumerate()
                .map(|(s, &r)| (format!("s{s}"), r as f64 + 0.5))
                .collect();
            for (s, &r) in ranks.iter().enumerate() {
                prop_assert_eq!(oracle.rank(s, values[s].1), r);
            }
            let outcome = template.evaluate(&values).unwrap();
            prop_assert_eq!(&outcome.status, &format!("status{}", oracle.status(&ranks)));
            prop_assert!((outcome.score - oracle.score(&ranks)).abs() <= 1e-12);
            prop_assert!((outcome.raw_score - outcome.score * outcome.max_raw_score).abs() <= 1e-9);
        }
    }

    #[test]
    fn template_boundaries_match_oracle((template, oracle) in random_template(), pick in any::<prop::sample::Index>()) {
        // Values on the cut points exercise the inclusivity flags.
        let values: Vec<(String, f64)> = oracle
            .bands
            .iter()
            .enumerate()
            .map(|(s, b)| (format!("s{s}"), pick.index(b.len() + 1) as f64))
            .collect();
        let ranks: Vec<usize> = values.iter().enumerate().map(|(s, v)| oracle.rank(s, v.1)).collect();
        let outcome = template.evaluate(&values).unwrap();
        let grades: Vec<usize> = outcome.grades.iter().map(|g| g.rank).collect();
        prop_assert_eq!(&grades, &ranks);
        prop_assert_eq!(&outcome.status, &format!("status{}", oracle.status(&ranks)));
    }

    #[test]
    fn very_keeps_the_winning_term(x in 0.0f64..100.0) {
        let lv = partition();
        let degrees = lv.fuzzify(x).unwrap();
        let very: Vec<(String, f64)> = degrees
            .iter()
            .map(|(t, d)| (t.clone(), Hedge::Very.apply(*d).unwrap()))
            .collect();
        prop_assert_eq!(best_label(&degrees).unwrap().0, best_label(&very).unwrap().0);
    }

    #[test]
    fn weighted_score_bounds_and_scaling(
        parts in prop::collection::vec((0.0f64..=1.0, 1e-3f64..1e3), 1..20),
        k in 1e-3f64..1e3,
    ) {
        let score = weighted_score(&parts).unwrap();
        let lo = parts.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = parts.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(lo <= score && score <= hi);
        let scaled: Vec<(f64, f64)> = parts.iter().map(|&(d, w)| (d, w * k)).collect();
        prop_assert!((weighted_score(&scaled).unwrap() - score).abs() <= 1e-12);
    }
}

#[test]
fn hedge_order_on_grid() {
    for i in 0..=10_000 {
        let mu = i as f64 / 10_000.0;
        let not_not = Hedge::Not.apply(Hedge::Not.apply(mu).unwrap()).unwrap();
        assert!((not_not - mu).abs() <= 1e-12);
        assert!(Hedge::Somewhat.apply(mu).unwrap() >= mu - 1e-12);
        assert!(Hedge::Very.apply(mu).unwrap() <= mu + 1e-12);
        assert!(Hedge::Slightly.apply(mu).unwrap() >= Hedge::Somewhat.apply(mu).unwrap() - 1e-12);
    }
}
