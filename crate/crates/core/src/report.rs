//! The bound-reproduction suite: one row per measured claim.

use std::cmp::Ordering;
use std::time::Instant;

use itertools::Itertools;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::best_response::with_solver;
use crate::bounds::{
    app1_sides, app2_sides, bound_collusion, bound_nash, bound_sequential_symmetric, bound_series_b,
    enclosure_width_target, sandwich,
};
use crate::budget::Budget;
use crate::equilibria::{
    enumerate_nash, enumerate_spe_outcomes, greedy_sequential_outcome, verify_collusion, verify_nash,
    DeadlineGreedySelector, ExactSelector, PlayerOrder,
};
use crate::error::Result;
use crate::factory::{generate, random_corpus, reference_profiles, GeneratorSpec};
use crate::itemset::ItemSet;
use crate::metrics::{
    compute_opt, empirical_collusion_poa, empirical_poa, empirical_sequential_poa, greedy_sequential_poa,
    symmetric_greedy_lemma, welfare_ratio, Bound, PoAResult,
};
use crate::model::{Instance, Profile};
use crate::rational::Rational;

/// Corpus size and seed for the random suites.
pub const CORPUS_SIZE: usize = 500;
pub const CORPUS_SEED: u64 = 20_130_617;
/// Largest `n` in the unit-deadline trend.
pub const TREND_MAX_N: u32 = 40;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub criterion: u8,
    pub check: String,
    pub instance: String,
    pub concept: String,
    pub alpha: String,
    pub k: Option<usize>,
    pub measured: String,
    pub bound: String,
    pub expected: String,
    pub satisfied: bool,
    pub seconds: f64,
}

impl ReportRow {
    pub const TSV_HEADER: &'static str =
        "criterion\tcheck\tinstance\tconcept\talpha\tk\tmeasured\tbound\texpected\tsatisfied\tseconds";

    pub fn to_tsv(&self) -> String {
        let k = self.k.map(|k| k.to_string()).unwrap_or_default();
        [
            self.criterion.to_string(),
            self.check.clone(),
            self.instance.clone(),
            self.concept.clone(),
            self.alpha.clone(),
            k,
            self.measured.clone(),
            self.bound.clone(),
            self.expected.clone(),
            self.satisfied.to_string(),
            format!("{:.3}", self.seconds),
        ]
        .iter()
        .map(|f| f.replace(['\t', '\n'], " "))
        .join("\t")
    }
}

/// What one check produced before timing and labelling.
struct Outcome {
    measured: String,
    bound: String,
    expected: String,
    satisfied: bool,
}

struct Row {
    criterion: u8,
    check: &'static str,
    instance: String,
    concept: &'static str,
    alpha: Option<Rational>,
    k: Option<usize>,
}

fn r(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

pub fn bound_text(bound: &Bound) -> String {
    match bound {
        Bound::Exact(b) => b.to_string(),
        Bound::Interval(e) => format!("[{:.12}, {:.12}]", e.lo.to_f64(), e.hi.to_f64()),
        Bound::None => "none".into(),
    }
}

fn poa_outcome(res: &PoAResult, expected: Option<&Rational>) -> Outcome {
    let matches = expected.is_none_or(|e| *e == res.ratio);
    Outcome {
        measured: res.ratio.to_string(),
        bound: bound_text(&res.bound),
        expected: expected.map(|e| e.to_string()).unwrap_or_default(),
        satisfied: res.bound_satisfied && matches,
    }
}

fn count_outcome(checked: usize, failures: &[String], what: &str) -> Outcome {
    Outcome {
        measured: if failures.is_empty() {
            format!("{checked} {what}, 0 violations")
        } else {
            format!("{checked} {what}, {} violations: {}", failures.len(), failures.iter().take(3).join("; "))
        },
        bound: String::new(),
        expected: "0 violations".into(),
        satisfied: failures.is_empty(),
    }
}

/// Runs every row of the `paper` report suite. `on_row` sees each row as it
/// finishes. A row that errors (including budget exhaustion) is reported
/// as unsatisfied with the error text as its measurement.
pub fn paper_suite(budget_limit: u64, on_row: &mut dyn FnMut(&ReportRow)) -> Vec<ReportRow> {
    let mut rows = Vec::new();
    let mut run = |row: Row, f: &mut dyn FnMut(&mut Budget) -> Result<Outcome>| {
        let start = Instant::now();
        let mut budget = Budget::new(budget_limit);
        let outcome = f(&mut budget).unwrap_or_else(|e| Outcome {
            measured: format!("error: {e}"),
            bound: String::new(),
            expected: String::new(),
            satisfied: false,
        });
        let done = ReportRow {
            criterion: row.criterion,
            check: row.check.into(),
            instance: row.instance,
            concept: row.concept.into(),
            alpha: row.alpha.map(|a| a.to_string()).unwrap_or_default(),
            k: row.k,
            measured: outcome.measured,
            bound: outcome.bound,
            expected: outcome.expected,
            satisfied: outcome.satisfied,
            seconds: start.elapsed().as_secs_f64(),
        };
        on_row(&done);
        rows.push(done);
    };

    // ex_trivial.
    let trivial = GeneratorSpec::ExTrivial;
    let one = Rational::one();
    run(
        Row { criterion: 1, check: "optimum", instance: trivial.label(), concept: "opt", alpha: None, k: None },
        &mut |b| {
            let (_, w) = compute_opt(&generate(&trivial)?, b)?;
            Ok(Outcome {
                measured: w.to_string(),
                bound: String::new(),
                expected: "2/1".into(),
                satisfied: w == r(2, 1),
            })
        },
    );
    run(
        Row { criterion: 1, check: "nash equilibria", instance: trivial.label(), concept: "nash", alpha: Some(one.clone()), k: None },
        &mut |b| {
            let inst = generate(&trivial)?;
            let eqs = enumerate_nash(&inst, &one, b)?;
            let refs = reference_profiles(&trivial)?;
            let mut want = vec![refs.opt, refs.bad_equilibrium];
            want.sort();
            Ok(Outcome {
                measured: eqs.iter().map(|p| inst.format_profile(p)).join(" "),
                bound: String::new(),
                expected: want.iter().map(|p| inst.format_profile(p)).join(" "),
                satisfied: eqs == want,
            })
        },
    );
    for (concept, k, expected) in [("nash", None, r(2, 1)), ("spe", None, r(2, 1)), ("collusion", Some(2), r(1, 1))] {
        run(
            Row { criterion: 1, check: "price of anarchy", instance: trivial.label(), concept, alpha: Some(one.clone()), k },
            &mut |b| {
                let inst = generate(&trivial)?;
                let res = match concept {
                    "nash" => empirical_poa(&inst, &one, b)?,
                    "spe" => empirical_sequential_poa(&inst, &one, b)?,
                    _ => empirical_collusion_poa(&inst, 2, &one, b)?,
                };
                Ok(poa_outcome(&res, Some(&expected)))
            },
        );
    }

    // Asymmetric lower bound attains α + 1.
    for (p, q) in [(1, 1), (3, 2), (2, 1), (3, 1)] {
        let spec = GeneratorSpec::ExAsym { p, q };
        let alpha = r(p as i64, q as i64);
        run(
            Row { criterion: 2, check: "price of anarchy", instance: spec.label(), concept: "nash", alpha: Some(alpha.clone()), k: None },
            &mut |b| {
                let res = empirical_poa(&generate(&spec)?, &alpha, b)?;
                Ok(poa_outcome(&res, Some(&(&alpha + &one))))
            },
        );
    }

    // Symmetric lower bound (p+q)/q - 1/n.
    for (p, q, n) in [(3u32, 2u32, 3u32), (2, 1, 4)] {
        let spec = GeneratorSpec::ExSym { p, q, n };
        let alpha = r(p as i64, q as i64);
        let formula = r((p + q) as i64, q as i64) - r(1, n as i64);
        run(
            Row { criterion: 3, check: "reference equilibrium", instance: spec.label(), concept: "nash", alpha: Some(alpha.clone()), k: None },
            &mut |b| {
                let inst = generate(&spec)?;
                let refs = reference_profiles(&spec)?;
                let report = verify_nash(&inst, &refs.bad_equilibrium, &alpha, b)?;
                let (_, opt) = compute_opt(&inst, b)?;
                let ratio = welfare_ratio(&opt, &inst.welfare(&refs.bad_equilibrium)?)?;
                Ok(Outcome {
                    measured: format!("{ratio} (equilibrium: {})", report.verdict),
                    bound: bound_nash(&alpha)?.to_string(),
                    expected: formula.to_string(),
                    satisfied: report.verdict && ratio == formula,
                })
            },
        );
        run(
            Row { criterion: 3, check: "price of anarchy", instance: spec.label(), concept: "nash", alpha: Some(alpha.clone()), k: None },
            &mut |b| {
                let res = empirical_poa(&generate(&spec)?, &alpha, b)?;
                Ok(poa_outcome(&res, Some(&formula)))
            },
        );
    }

    // Unit-deadline sequential runs.
    for (n, welfare) in [(3u32, 7i64), (5, 18)] {
        let spec = GeneratorSpec::ExSeq { n };
        run(
            Row { criterion: 4, check: "greedy sequential run", instance: spec.label(), concept: "spe-greedy", alpha: Some(one.clone()), k: None },
            &mut |b| {
                let inst = generate(&spec)?;
                let order = PlayerOrder::identity(n as usize);
                let res = greedy_sequential_poa(&inst, &order, &one, &DeadlineGreedySelector, b)?;
                let expected = r((n * n) as i64, welfare);
                let mut out = poa_outcome(&res, Some(&expected));
                out.measured = format!("{} (welfare {})", res.ratio, res.worst_equilibrium_welfare);
                Ok(out)
            },
        );
    }
    let mut trend: Vec<(u32, Rational)> = Vec::new();
    let mut lemma_failures = Vec::new();
    run(
        Row {
            criterion: 4,
            check: "greedy guarantee per mover",
            instance: format!("ex_seq(1..={TREND_MAX_N})"),
            concept: "spe-greedy",
            alpha: Some(one.clone()),
            k: None,
        },
        &mut |b| {
            let mut steps_checked = 0;
            for n in 1..=TREND_MAX_N {
                let inst = generate(&GeneratorSpec::ExSeq { n })?;
                let order = PlayerOrder::identity(n as usize);
                let res = greedy_sequential_poa(&inst, &order, &one, &DeadlineGreedySelector, b)?;
                let steps = symmetric_greedy_lemma(&inst, &order, &res.worst_profile, &one, b)?;
                steps_checked += steps.len();
                for s in steps.iter().filter(|s| !s.holds) {
                    lemma_failures.push(format!("n={n} player {}", s.player + 1));
                }
                if !res.bound_satisfied {
                    lemma_failures.push(format!("n={n} ratio {} above bound", res.ratio));
                }
                trend.push((n, res.ratio));
            }
            Ok(count_outcome(steps_checked, &lemma_failures, "movers"))
        },
    );
    run(
        Row {
            criterion: 4,
            check: "ratio nondecreasing in n",
            instance: format!("ex_seq(1..={TREND_MAX_N})"),
            concept: "spe-greedy",
            alpha: Some(one.clone()),
            k: None,
        },
        &mut |_| {
            let drops: Vec<u32> = trend.windows(2).filter(|w| w[1].1 < w[0].1).map(|w| w[1].0).collect();
            let last = trend.last().map(|(_, x)| x.to_f64()).unwrap_or(f64::NAN);
            Ok(Outcome {
                measured: if drops.is_empty() {
                    format!("nondecreasing, last {last:.6}")
                } else {
                    format!("drops at n = {}; last {last:.6}", drops.iter().join(","))
                },
                bound: bound_text(&Bound::Interval(bound_sequential_symmetric(&one)?.enclosure)),
                expected: "nondecreasing".into(),
                satisfied: drops.is_empty() && !trend.is_empty(),
            })
        },
    );

    // Collusion lower bound.
    for (n, k, alpha) in [(3u32, 2u32, r(1, 1)), (4, 2, r(1, 1)), (4, 3, r(1, 1)), (3, 2, r(3, 2))] {
        let spec = GeneratorSpec::ExCollusion { n, k, alpha: alpha.clone() };
        run(
            Row { criterion: 5, check: "reference equilibrium", instance: spec.label(), concept: "collusion", alpha: Some(alpha.clone()), k: Some(k as usize) },
            &mut |b| {
                let inst = generate(&spec)?;
                let refs = reference_profiles(&spec)?;
                let report = verify_collusion(&inst, &refs.bad_equilibrium, k as usize, &alpha, b)?;
                let (_, opt) = compute_opt(&inst, b)?;
                let ratio = welfare_ratio(&opt, &inst.welfare(&refs.bad_equilibrium)?)?;
                let bound = bound_collusion(&alpha, n as usize, k as usize)?;
                Ok(Outcome {
                    measured: format!("{ratio} (equilibrium: {})", report.verdict),
                    bound: bound.to_string(),
                    expected: bound.to_string(),
                    satisfied: report.verdict && ratio == bound,
                })
            },
        );
        run(
            Row { criterion: 5, check: "price of anarchy", instance: spec.label(), concept: "collusion", alpha: Some(alpha.clone()), k: Some(k as usize) },
            &mut |b| {
                let res = empirical_collusion_poa(&generate(&spec)?, k as usize, &alpha, b)?;
                let bound = bound_collusion(&alpha, n as usize, k as usize)?;
                Ok(poa_outcome(&res, Some(&bound)))
            },
        );
    }

    // Random corpus suites.
    let corpus_label = format!("random_explicit x{CORPUS_SIZE} (seed {CORPUS_SEED})");
    let corpus = random_corpus(CORPUS_SIZE, CORPUS_SEED);
    let corpus: Vec<Instance> = match corpus {
        Ok(c) => c.into_iter().map(|(_, i)| i).collect(),
        Err(_) => Vec::new(),
    };
    run(
        Row { criterion: 6, check: "spe outcomes are nash", instance: corpus_label.clone(), concept: "spe", alpha: None, k: None },
        &mut |b| {
            let mut failures = Vec::new();
            let mut checked = 0;
            for (idx, inst) in corpus.iter().enumerate() {
                for alpha in [r(1, 1), r(3, 2)] {
                    for order in PlayerOrder::all(inst.player_count()) {
                        for outcome in enumerate_spe_outcomes(inst, &order, &alpha, b)? {
                            checked += 1;
                            if !verify_nash(inst, &outcome, &alpha, b)?.verdict {
                                failures.push(format!("#{idx} alpha {alpha} {}", inst.format_profile(&outcome)));
                            }
                        }
                    }
                }
            }
            Ok(count_outcome(checked, &failures, "outcomes"))
        },
    );
    for alpha in [r(1, 1), r(3, 2), r(2, 1)] {
        run(
            Row { criterion: 7, check: "nash ratio within bound", instance: corpus_label.clone(), concept: "nash", alpha: Some(alpha.clone()), k: None },
            &mut |b| {
                let bound = bound_nash(&alpha)?;
                let mut failures = Vec::new();
                let mut checked = 0;
                for (idx, inst) in corpus.iter().enumerate() {
                    let (_, opt) = compute_opt(inst, b)?;
                    for eq in enumerate_nash(inst, &alpha, b)? {
                        checked += 1;
                        if welfare_ratio(&opt, &inst.welfare(&eq)?)? > bound {
                            failures.push(format!("#{idx} {}", inst.format_profile(&eq)));
                        }
                    }
                }
                Ok(count_outcome(checked, &failures, "equilibria"))
            },
        );
    }
    for alpha in [r(1, 1), r(3, 2)] {
        run(
            Row { criterion: 7, check: "collusion ratio within bound", instance: corpus_label.clone(), concept: "collusion", alpha: Some(alpha.clone()), k: None },
            &mut |b| {
                let mut failures = Vec::new();
                let mut checked = 0;
                for (idx, inst) in corpus.iter().enumerate() {
                    let n = inst.player_count();
                    for k in 1..=n {
                        let res = empirical_collusion_poa(inst, k, &alpha, b)?;
                        checked += 1;
                        if !res.bound_satisfied {
                            failures.push(format!("#{idx} k={k} ratio {}", res.ratio));
                        }
                        if k == n && alpha == one && res.ratio != one {
                            failures.push(format!("#{idx} full coalition ratio {}", res.ratio));
                        }
                    }
                }
                Ok(count_outcome(checked, &failures, "(instance, k) pairs"))
            },
        );
    }
    run(
        Row { criterion: 7, check: "optimum is a nash equilibrium", instance: corpus_label.clone(), concept: "nash", alpha: Some(one.clone()), k: None },
        &mut |b| {
            let mut failures = Vec::new();
            for (idx, inst) in corpus.iter().enumerate() {
                let (opt, _) = compute_opt(inst, b)?;
                if !verify_nash(inst, &opt, &one, b)?.verdict {
                    failures.push(format!("#{idx}"));
                }
            }
            Ok(count_outcome(corpus.len(), &failures, "instances"))
        },
    );
    run(
        Row { criterion: 7, check: "symmetric sequential ratio within bound", instance: "random_symmetric x100".into(), concept: "spe", alpha: None, k: None },
        &mut |b| {
            let mut failures = Vec::new();
            let mut checked = 0;
            for seed in 0..100u64 {
                let spec = GeneratorSpec::RandomSymmetric { n: 1 + (seed % 3) as u32, copies: 2, seed };
                let inst = generate(&spec)?;
                for alpha in [r(1, 1), r(3, 2)] {
                    checked += 1;
                    let res = empirical_sequential_poa(&inst, &alpha, b)?;
                    if !res.bound_satisfied {
                        failures.push(format!("{} alpha {alpha} ratio {}", spec.label(), res.ratio));
                    }
                    let order = PlayerOrder::identity(inst.player_count());
                    let greedy = greedy_sequential_outcome(&inst, &order, &alpha, &ExactSelector, b)?;
                    if symmetric_greedy_lemma(&inst, &order, &greedy, &alpha, b)?.iter().any(|s| !s.holds) {
                        failures.push(format!("{} alpha {alpha} guarantee", spec.label()));
                    }
                }
            }
            Ok(count_outcome(checked, &failures, "(instance, alpha) pairs"))
        },
    );
    for alpha in [r(1, 1), r(3, 2), r(2, 1)] {
        run(
            Row { criterion: 7, check: "b_x increasing and below bound, x <= 100", instance: String::new(), concept: "bound", alpha: Some(alpha.clone()), k: None },
            &mut |_| {
                let bound = bound_sequential_symmetric(&alpha)?;
                let mut failures = Vec::new();
                let mut prev: Option<Rational> = None;
                for x in 1..=100u32 {
                    let b = bound_series_b(&alpha, x)?;
                    if prev.as_ref().is_some_and(|p| b <= *p) {
                        failures.push(format!("x={x} not increasing"));
                    }
                    if bound.compare(&b)? != Ordering::Less {
                        failures.push(format!("x={x} not below bound"));
                    }
                    prev = Some(b);
                }
                let mut out = count_outcome(100, &failures, "terms");
                out.bound = bound_text(&Bound::Interval(bound.enclosure));
                Ok(out)
            },
        );
    }
    run(
        Row { criterion: 7, check: "app1/app2 inequalities, x <= 20", instance: String::new(), concept: "bound", alpha: None, k: None },
        &mut |_| {
            let mut rng = ChaCha8Rng::seed_from_u64(CORPUS_SEED);
            let mut failures = Vec::new();
            let mut checked = 0;
            for _ in 0..40 {
                let q = rng.gen_range(1..=6);
                let alpha = r(rng.gen_range(q..=4 * q), q);
                let x = rng.gen_range(1..=20u32);
                for x1 in 1..=x {
                    let (lhs, rhs) = app1_sides(&alpha, x, x1)?;
                    checked += 1;
                    if lhs < rhs {
                        failures.push(format!("app1 alpha {alpha} x {x} x1 {x1}"));
                    }
                }
                for prev in 0..x {
                    for xk in 1..=x - prev {
                        let (lhs, rhs) = app2_sides(&alpha, x, xk, prev)?;
                        checked += 1;
                        if lhs < rhs {
                            failures.push(format!("app2 alpha {alpha} x {x} xk {xk} prev {prev}"));
                        }
                    }
                }
            }
            Ok(count_outcome(checked, &failures, "instances of the inequalities"))
        },
    );
    for alpha in [r(1, 1), r(3, 2), r(2, 1), r(3, 1)] {
        run(
            Row { criterion: 7, check: "sandwich alpha+1/2 <= bound <= alpha+1/(e-1)", instance: String::new(), concept: "bound", alpha: Some(alpha.clone()), k: None },
            &mut |_| {
                let (lower, upper) = sandwich(&alpha)?;
                let b = bound_sequential_symmetric(&alpha)?;
                Ok(Outcome {
                    measured: format!("lower {lower}, upper {upper}"),
                    bound: bound_text(&Bound::Interval(b.enclosure.clone())),
                    expected: "lower true, upper true".into(),
                    satisfied: lower && upper && b.enclosure.width() <= enclosure_width_target(),
                })
            },
        );
    }

    // Oracle equivalence.
    run(
        Row { criterion: 8, check: "best response and optimum match enumeration", instance: format!("{corpus_label} + 30 with |J| <= 10"), concept: "oracle", alpha: None, k: None },
        &mut |b| {
            let mut extra = Vec::new();
            for seed in 0..30u64 {
                let spec = GeneratorSpec::RandomExplicit {
                    n: 1 + (seed % 2) as u32,
                    items: 7 + (seed % 4) as u32,
                    max_weight: 8,
                    seed,
                };
                extra.push(generate(&spec)?);
            }
            let mut failures = Vec::new();
            let mut checked = 0;
            for (idx, inst) in corpus.iter().chain(&extra).enumerate() {
                let (_, opt) = compute_opt(inst, b)?;
                checked += 1;
                if opt != brute_opt(inst) {
                    failures.push(format!("#{idx} optimum"));
                }
                for p in 0..inst.player_count() {
                    let pool = inst.all_items();
                    let fast = with_solver(inst, b, |s| s.best_response_value(p, &pool))?;
                    checked += 1;
                    if fast != brute_best_response(inst, p, &pool) {
                        failures.push(format!("#{idx} best response of player {}", p + 1));
                    }
                }
            }
            Ok(count_outcome(checked, &failures, "comparisons"))
        },
    );
    run(
        Row { criterion: 8, check: "coalition best response matches joint enumeration", instance: corpus_label.clone(), concept: "oracle", alpha: None, k: None },
        &mut |b| {
            let mut failures = Vec::new();
            let mut checked = 0;
            for (idx, inst) in corpus.iter().enumerate() {
                let n = inst.player_count();
                let pool = inst.all_items();
                for size in 1..=n.min(3) {
                    for coalition in (0..n).combinations(size) {
                        let (_, fast) = with_solver(inst, b, |s| s.coalition_best_response(&coalition, &pool))?;
                        checked += 1;
                        if fast != brute_coalition(inst, &coalition, &pool) {
                            failures.push(format!("#{idx} {coalition:?}"));
                        }
                    }
                }
            }
            Ok(count_outcome(checked, &failures, "coalitions"))
        },
    );

    rows
}

/// Every assignment of items to players or to nobody.
fn brute_opt(inst: &Instance) -> Rational {
    let n = inst.player_count();
    let mut best = Rational::zero();
    for choice in (0..inst.item_count()).map(|_| 0..=n).multi_cartesian_product() {
        let mut profile = Profile::empty(n);
        for (item, &c) in choice.iter().enumerate() {
            if c < n {
                profile.sets[c].insert(item);
            }
        }
        if inst.validate_profile(&profile).is_empty() {
            best = best.max(inst.total_weight(&profile));
        }
    }
    best
}

/// Every subset of the pool.
fn brute_best_response(inst: &Instance, player: usize, pool: &ItemSet) -> Rational {
    let mut budget = Budget::unlimited();
    pool.iter()
        .powerset()
        .map(|s| s.into_iter().collect::<ItemSet>())
        .filter(|s| inst.system(player).contains(s, &mut budget).unwrap_or(false))
        .map(|s| inst.set_weight(&s))
        .max()
        .unwrap_or_else(Rational::zero)
}

/// Every assignment of pool items to coalition members or to nobody.
fn brute_coalition(inst: &Instance, coalition: &[usize], pool: &ItemSet) -> Rational {
    let items = pool.to_vec();
    let mut budget = Budget::unlimited();
    let mut best = Rational::zero();
    for choice in items.iter().map(|_| 0..=coalition.len()).multi_cartesian_product() {
        let mut sets = vec![ItemSet::new(); coalition.len()];
        for (&item, &c) in items.iter().zip(&choice) {
            if c < coalition.len() {
                sets[c].insert(item);
            }
        }
        let ok = coalition
            .iter()
            .zip(&sets)
            .all(|(&p, s)| inst.system(p).contains(s, &mut budget).unwrap_or(false));
        if ok {
            best = best.max(sets.iter().map(|s| inst.set_weight(s)).sum());
        }
    }
    best
}

pub fn rows_to_tsv(rows: &[ReportRow]) -> String {
    let mut out = String::from(ReportRow::TSV_HEADER);
    out.push('\n');
    for row in rows {
        out.push_str(&row.to_tsv());
        out.push('\n');
    }
    out
}
