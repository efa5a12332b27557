//! Centralized optima and empirical price-of-anarchy measurements.

use std::cmp::Ordering;

use crate::best_response::{with_solver, Solver};
use crate::bounds::{bound_collusion, bound_nash, bound_sequential_symmetric, Enclosure};
use crate::budget::Budget;
use crate::equilibria::{
    check_alpha, check_k, collusion_violation, enumerate_nash, enumerate_spe_outcomes,
    greedy_sequential_outcome, ActionSelector, PlayerOrder,
};
use crate::error::{Error, Result};
use crate::feasibility::{max_cardinality_feasible, FeasibilitySystem};
use crate::itemset::{ItemIdx, ItemSet};
use crate::model::{Instance, Profile};
use crate::rational::Rational;

/// The bound a measured ratio is compared against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Bound {
    Exact(Rational),
    /// Certified enclosure of an irrational bound.
    Interval(Enclosure),
    /// No bound applies (collusion with a single player).
    None,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoAResult {
    /// `nash`, `spe`, `spe-greedy` or `collusion`.
    pub concept: String,
    pub alpha: Rational,
    pub k: Option<usize>,
    pub opt_welfare: Rational,
    pub opt_profile: Profile,
    pub worst_equilibrium_welfare: Rational,
    pub ratio: Rational,
    pub bound: Bound,
    pub bound_satisfied: bool,
    pub worst_profile: Profile,
    pub worst_order: Option<Vec<usize>>,
    pub orders_examined: Option<usize>,
    pub equilibria_examined: usize,
}

/// `opt / worst`, with `0/0` read as 1.
pub fn welfare_ratio(opt: &Rational, worst: &Rational) -> Result<Rational> {
    if opt.is_zero() {
        return Ok(Rational::one());
    }
    if worst.is_zero() {
        return Err(Error::Unsupported(format!(
            "equilibrium welfare is 0 while the optimum is {opt}; the ratio is unbounded"
        )));
    }
    Ok(opt / worst)
}

// ---------------------------------------------------------------------------
// Optimum

/// A maximum-welfare valid profile.
pub fn compute_opt(instance: &Instance, budget: &mut Budget) -> Result<(Profile, Rational)> {
    compute_opt_within(instance, &instance.all_items(), budget)
}

/// A maximum-welfare valid profile using only items in `available`.
///
/// Branch and bound over item-to-player assignments, items in index order,
/// players tried in index order before leaving the item out. The first
/// optimum reached is kept, so ties go to the lexicographically first
/// assignment. Symmetric instances of equal-length jobs with a common
/// release and equal weights are solved directly as one pooled machine
/// system.
pub fn compute_opt_within(
    instance: &Instance,
    available: &ItemSet,
    budget: &mut Budget,
) -> Result<(Profile, Rational)> {
    if let Some(profile) = uniform_symmetric_opt(instance, available, budget)? {
        let w = instance.welfare(&profile)?;
        return Ok((profile, w));
    }
    with_solver(instance, budget, |s| branch_and_bound(s, available))
}

fn branch_and_bound(solver: &mut Solver<'_>, available: &ItemSet) -> Result<(Profile, Rational)> {
    let instance = solver.instance();
    let n = instance.player_count();
    let mut reachable = ItemSet::new();
    for p in 0..n {
        reachable.union_with(solver.universe(p));
    }
    let items = available.intersection(&reachable).to_vec();
    let mut suffix = vec![Rational::zero(); items.len() + 1];
    for k in (0..items.len()).rev() {
        suffix[k] = &suffix[k + 1] + instance.weight(items[k]);
    }

    struct Search<'s> {
        items: &'s [ItemIdx],
        suffix: &'s [Rational],
        current: Profile,
        best: Option<(Rational, Profile)>,
    }
    impl Search<'_> {
        fn go(&mut self, solver: &mut Solver<'_>, k: usize, value: Rational) -> Result<()> {
            solver.tick("optimum search")?;
            if let Some((b, _)) = &self.best {
                if &value + &self.suffix[k] <= *b {
                    return Ok(());
                }
            }
            let Some(&item) = self.items.get(k) else {
                self.best = Some((value, self.current.clone()));
                return Ok(());
            };
            for p in 0..self.current.sets.len() {
                if !solver.universe(p).contains(item) {
                    continue;
                }
                self.current.sets[p].insert(item);
                if solver.feasible(p, &self.current.sets[p])? {
                    let w = &value + solver.instance().weight(item);
                    self.go(solver, k + 1, w)?;
                }
                self.current.sets[p].remove(item);
            }
            self.go(solver, k + 1, value)
        }
    }

    let mut search = Search {
        items: &items,
        suffix: &suffix,
        current: Profile::empty(n),
        best: None,
    };
    search.go(solver, 0, Rational::zero())?;
    let (value, profile) = search.best.expect("the empty profile is always reached");
    Ok((profile, value))
}

fn uniform_symmetric_opt(
    instance: &Instance,
    available: &ItemSet,
    budget: &mut Budget,
) -> Result<Option<Profile>> {
    let (Some(base), Some(copies)) = (instance.symmetric_base(), instance.copies()) else {
        return Ok(None);
    };
    let Some((jobs, per_copy)) = base.identical_jobs() else {
        return Ok(None);
    };
    let usable = available.intersection(&base.universe()).to_vec();
    let uniform = usable.windows(2).all(|w| {
        let (a, b) = (&jobs[&w[0]], &jobs[&w[1]]);
        a.processing == b.processing
            && a.release == b.release
            && instance.weight(w[0]) == instance.weight(w[1])
    });
    if !uniform {
        return Ok(None);
    }
    let pooled = FeasibilitySystem::IdenticalMachines {
        copies: copies.iter().sum::<usize>() * per_copy,
        jobs: jobs.clone(),
    };
    let chosen = max_cardinality_feasible(&pooled, available, false, budget)?;
    let Some(witness) = pooled.is_member(&chosen, budget)?.witness else {
        return Ok(None);
    };
    let mut profile = Profile::empty(instance.player_count());
    let mut machine = 0;
    for (p, &c) in copies.iter().enumerate() {
        for seq in witness.machines.iter().skip(machine).take(c * per_copy) {
            for (item, _) in seq {
                profile.sets[p].insert(*item);
            }
        }
        machine += c * per_copy;
    }
    instance.require_valid(&profile)?;
    Ok(Some(profile))
}

// ---------------------------------------------------------------------------
// Price of anarchy

/// OPT against the worst `alpha`-approximate Nash equilibrium.
pub fn empirical_poa(instance: &Instance, alpha: &Rational, budget: &mut Budget) -> Result<PoAResult> {
    check_alpha(alpha)?;
    let (opt_profile, opt) = compute_opt(instance, budget)?;
    let equilibria = enumerate_nash(instance, alpha, budget)?;
    let (worst, worst_w) = worst_of(instance, &equilibria)?;
    let ratio = welfare_ratio(&opt, &worst_w)?;
    let bound = bound_nash(alpha)?;
    Ok(PoAResult {
        concept: "nash".into(),
        alpha: alpha.clone(),
        k: None,
        bound_satisfied: ratio <= bound,
        bound: Bound::Exact(bound),
        opt_welfare: opt,
        opt_profile,
        worst_equilibrium_welfare: worst_w,
        ratio,
        worst_profile: worst,
        worst_order: None,
        orders_examined: None,
        equilibria_examined: equilibria.len(),
    })
}

/// First profile of minimum welfare.
fn worst_of(instance: &Instance, profiles: &[Profile]) -> Result<(Profile, Rational)> {
    let mut worst: Option<(Profile, Rational)> = None;
    for p in profiles {
        let w = instance.welfare(p)?;
        if worst.as_ref().is_none_or(|(_, b)| w < *b) {
            worst = Some((p.clone(), w));
        }
    }
    worst.ok_or_else(|| Error::Unsupported("no equilibrium found".into()))
}

/// `(bound, satisfied)` for sequential play: `α + 1` in general, the
/// certified `e^{1/α}/(e^{1/α}-1)` interval for symmetric instances.
fn sequential_bound(instance: &Instance, alpha: &Rational, ratio: &Rational) -> Result<(Bound, bool)> {
    let general = bound_nash(alpha)?;
    let within_general = *ratio <= general;
    if instance.is_symmetric() {
        let b = bound_sequential_symmetric(alpha)?;
        let ok = b.compare(ratio)? != Ordering::Greater;
        Ok((Bound::Interval(b.enclosure), ok && within_general))
    } else {
        Ok((Bound::Exact(general), within_general))
    }
}

/// OPT against the worst outcome of any `alpha`-approximate subgame perfect
/// equilibrium over every order of moves.
pub fn empirical_sequential_poa(
    instance: &Instance,
    alpha: &Rational,
    budget: &mut Budget,
) -> Result<PoAResult> {
    check_alpha(alpha)?;
    let (opt_profile, opt) = compute_opt(instance, budget)?;
    let orders = PlayerOrder::all(instance.player_count());
    let mut worst: Option<(Profile, Rational, Vec<usize>)> = None;
    let mut examined = 0;
    for order in &orders {
        let outcomes = enumerate_spe_outcomes(instance, order, alpha, budget)?;
        examined += outcomes.len();
        let (p, w) = worst_of(instance, &outcomes)?;
        if worst.as_ref().is_none_or(|(_, b, _)| w < *b) {
            worst = Some((p, w, order.as_slice().to_vec()));
        }
    }
    let (worst_profile, worst_w, order) = worst.expect("at least one order");
    let ratio = welfare_ratio(&opt, &worst_w)?;
    let (bound, bound_satisfied) = sequential_bound(instance, alpha, &ratio)?;
    Ok(PoAResult {
        concept: "spe".into(),
        alpha: alpha.clone(),
        k: None,
        opt_welfare: opt,
        opt_profile,
        worst_equilibrium_welfare: worst_w,
        ratio,
        bound,
        bound_satisfied,
        worst_profile,
        worst_order: Some(order),
        orders_examined: Some(orders.len()),
        equilibria_examined: examined,
    })
}

/// OPT against one sequential run where each mover takes the selector's
/// choice.
pub fn greedy_sequential_poa(
    instance: &Instance,
    order: &PlayerOrder,
    alpha: &Rational,
    selector: &dyn ActionSelector,
    budget: &mut Budget,
) -> Result<PoAResult> {
    let outcome = greedy_sequential_outcome(instance, order, alpha, selector, budget)?;
    let (opt_profile, opt) = compute_opt(instance, budget)?;
    let w = instance.welfare(&outcome)?;
    let ratio = welfare_ratio(&opt, &w)?;
    let (bound, bound_satisfied) = sequential_bound(instance, alpha, &ratio)?;
    Ok(PoAResult {
        concept: "spe-greedy".into(),
        alpha: alpha.clone(),
        k: None,
        opt_welfare: opt,
        opt_profile,
        worst_equilibrium_welfare: w,
        ratio,
        bound,
        bound_satisfied,
        worst_profile: outcome,
        worst_order: Some(order.as_slice().to_vec()),
        orders_examined: Some(1),
        equilibria_examined: 1,
    })
}

/// OPT against the worst `alpha`-approximate `k`-collusion equilibrium.
///
/// Every such equilibrium is a Nash equilibrium, so the Nash equilibria are
/// scanned by increasing welfare and the first one surviving the coalition
/// check is the worst.
pub fn empirical_collusion_poa(
    instance: &Instance,
    k: usize,
    alpha: &Rational,
    budget: &mut Budget,
) -> Result<PoAResult> {
    check_alpha(alpha)?;
    check_k(instance, k)?;
    let (opt_profile, opt) = compute_opt(instance, budget)?;
    let mut candidates: Vec<(Rational, Profile)> = enumerate_nash(instance, alpha, budget)?
        .into_iter()
        .map(|p| Ok((instance.welfare(&p)?, p)))
        .collect::<Result<_>>()?;
    candidates.sort();
    let mut examined = 0;
    let found = with_solver(instance, budget, |s| {
        for (w, p) in &candidates {
            examined += 1;
            if collusion_violation(s, p, k, alpha)?.is_none() {
                return Ok(Some((p.clone(), w.clone())));
            }
        }
        Ok(None)
    })?;
    let (worst_profile, worst_w) =
        found.ok_or_else(|| Error::Unsupported("no collusion equilibrium found".into()))?;
    let ratio = welfare_ratio(&opt, &worst_w)?;
    let n = instance.player_count();
    let (bound, bound_satisfied) = if n >= 2 {
        let b = bound_collusion(alpha, n, k)?;
        let ok = ratio <= b;
        (Bound::Exact(b), ok)
    } else {
        (Bound::None, true)
    };
    Ok(PoAResult {
        concept: "collusion".into(),
        alpha: alpha.clone(),
        k: Some(k),
        opt_welfare: opt,
        opt_profile,
        worst_equilibrium_welfare: worst_w,
        ratio,
        bound,
        bound_satisfied,
        worst_profile,
        worst_order: None,
        orders_examined: None,
        equilibria_examined: examined,
    })
}

// ---------------------------------------------------------------------------
// Symmetric greedy guarantee

/// One mover of a sequential run in a symmetric game, with the guarantee
/// `w(S_i) >= x_i / (x α) · OPT(remaining)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaStep {
    pub player: usize,
    pub value: Rational,
    pub remaining_opt: Rational,
    pub guarantee: Rational,
    pub holds: bool,
}

/// Checks the per-mover guarantee along `profile` played in `order`, where
/// `x` is the total copy count and OPT is restricted to the items left
/// when the mover chooses.
pub fn symmetric_greedy_lemma(
    instance: &Instance,
    order: &PlayerOrder,
    profile: &Profile,
    alpha: &Rational,
    budget: &mut Budget,
) -> Result<Vec<LemmaStep>> {
    check_alpha(alpha)?;
    instance.require_valid(profile)?;
    let copies = instance
        .copies()
        .ok_or_else(|| Error::Unsupported("the guarantee applies to symmetric instances".into()))?;
    let total = Rational::from(copies.iter().sum::<usize>());
    let mut remaining = instance.all_items();
    let mut steps = Vec::with_capacity(order.as_slice().len());
    for &p in order.as_slice() {
        let (_, remaining_opt) = compute_opt_within(instance, &remaining, budget)?;
        let share = Rational::from(copies[p]) / (&total * alpha);
        let guarantee = &share * &remaining_opt;
        let value = instance.set_weight(&profile.sets[p]);
        steps.push(LemmaStep {
            player: p,
            holds: value >= guarantee,
            value,
            remaining_opt,
            guarantee,
        });
        remaining = remaining.difference(&profile.sets[p]);
    }
    Ok(steps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{DeadlineGreedySelector, ExactSelector};
    use crate::feasibility::Job;
    use crate::model::{Item, PlayerSpec};
    use proptest::prelude::*;
    use std::collections::BTreeMap;
    use std::sync::Arc;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn set(items: &[usize]) -> ItemSet {
        items.iter().copied().collect()
    }

    fn example1() -> Instance {
        let items = vec![Item::new("1", r(1, 1)), Item::new("2", r(1, 1))];
        let players = vec![
            PlayerSpec::new("1", FeasibilitySystem::explicit([set(&[0]), set(&[1])])),
            PlayerSpec::new("2", FeasibilitySystem::explicit([set(&[1])])),
        ];
        Instance::new(items, players).unwrap()
    }

    /// `n` players on one shared machine each; `n` unit jobs due at each
    /// time `1..=n`.
    fn unit_deadline_game(n: usize) -> Instance {
        let mut items = Vec::new();
        let mut jobs = BTreeMap::new();
        for k in 1..=n {
            for j in 1..=n {
                jobs.insert(items.len(), Job::with_deadline(r(1, 1), Rational::from(k)));
                items.push(Item::new(format!("J{k}_{j}"), r(1, 1)));
            }
        }
        let base = Arc::new(FeasibilitySystem::SingleMachine { jobs });
        let players = (0..n)
            .map(|i| PlayerSpec::new(format!("P{i}"), FeasibilitySystem::SharedSymmetric { base: base.clone(), copies: 1 }))
            .collect();
        Instance::new(items, players).unwrap()
    }

    /// Welfare of the best assignment by trying every item-to-player map.
    fn brute_opt(instance: &Instance) -> Rational {
        let n = instance.player_count();
        let m = instance.item_count();
        let mut best = Rational::zero();
        let total = (n + 1).pow(m as u32);
        for code in 0..total {
            let mut profile = Profile::empty(n);
            let mut c = code;
            for item in 0..m {
                let choice = c % (n + 1);
                c /= n + 1;
                if choice < n {
                    profile.sets[choice].insert(item);
                }
            }
            if instance.validate_profile(&profile).is_empty() {
                best = best.max(instance.welfare(&profile).unwrap());
            }
        }
        best
    }

    #[test]
    fn example1_optimum_and_poa() {
        let inst = example1();
        let (p, w) = compute_opt(&inst, &mut Budget::default()).unwrap();
        assert_eq!(w, r(2, 1));
        assert_eq!(p, Profile::new(vec![set(&[0]), set(&[1])]));

        let nash = empirical_poa(&inst, &r(1, 1), &mut Budget::default()).unwrap();
        assert_eq!(nash.ratio, r(2, 1));
        assert_eq!(nash.worst_profile, Profile::new(vec![set(&[1]), set(&[])]));
        assert!(nash.bound_satisfied);

        let seq = empirical_sequential_poa(&inst, &r(1, 1), &mut Budget::default()).unwrap();
        assert_eq!(seq.ratio, r(2, 1));
        assert_eq!(seq.worst_order, Some(vec![0, 1]));
        assert_eq!(seq.orders_examined, Some(2));

        let c2 = empirical_collusion_poa(&inst, 2, &r(1, 1), &mut Budget::default()).unwrap();
        assert_eq!(c2.ratio, r(1, 1));
        assert_eq!(c2.bound, Bound::Exact(r(1, 1)));
    }

    #[test]
    fn empty_and_single_player() {
        let inst = Instance::new(
            vec![],
            vec![PlayerSpec::new("a", FeasibilitySystem::explicit([ItemSet::new()]))],
        )
        .unwrap();
        let (_, w) = compute_opt(&inst, &mut Budget::default()).unwrap();
        assert_eq!(w, Rational::zero());
        let res = empirical_sequential_poa(&inst, &r(1, 1), &mut Budget::default()).unwrap();
        assert_eq!(res.ratio, r(1, 1));

        let single = Instance::new(
            vec![Item::new("x", r(3, 1))],
            vec![PlayerSpec::new("a", FeasibilitySystem::explicit([set(&[0])]))],
        )
        .unwrap();
        let res = empirical_sequential_poa(&single, &r(1, 1), &mut Budget::default()).unwrap();
        assert_eq!(res.ratio, r(1, 1));
        let c = empirical_collusion_poa(&single, 1, &r(1, 1), &mut Budget::default()).unwrap();
        assert_eq!(c.bound, Bound::None);
        assert!(c.bound_satisfied);
    }

    #[test]
    fn unit_deadline_greedy_runs() {
        // Independent replay: the first mover schedules all jobs due at
        // the latest times it can, one per time slot.
        for (n, expected) in [(3usize, 7i64), (5, 18)] {
            let inst = unit_deadline_game(n);
            let order = PlayerOrder::identity(n);
            let res =
                greedy_sequential_poa(&inst, &order, &r(1, 1), &DeadlineGreedySelector, &mut Budget::default())
                    .unwrap();
            assert_eq!(res.opt_welfare, Rational::from(n * n));
            assert_eq!(res.worst_equilibrium_welfare, r(expected, 1));
            assert!(res.bound_satisfied);
            let steps =
                symmetric_greedy_lemma(&inst, &order, &res.worst_profile, &r(1, 1), &mut Budget::default())
                    .unwrap();
            assert!(steps.iter().all(|s| s.holds), "{steps:?}");
        }
    }

    #[test]
    fn pooled_optimum_matches_branch_and_bound() {
        let inst = unit_deadline_game(3);
        let mut budget = Budget::default();
        let remaining = inst.all_items().difference(&set(&[6, 7, 8]));
        let (p, fast) = compute_opt_within(&inst, &remaining, &mut budget).unwrap();
        assert!(p.held().is_subset(&remaining));
        let (_, slow) = with_solver(&inst, &mut budget, |s| branch_and_bound(s, &remaining)).unwrap();
        assert_eq!(fast, slow);
    }

    #[test]
    fn budget_is_reported() {
        let inst = unit_deadline_game(3);
        let err = empirical_poa(&inst, &r(1, 1), &mut Budget::new(50)).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn collusion_with_k1_matches_nash() {
        let inst = example1();
        for alpha in [r(1, 1), r(2, 1)] {
            let a = empirical_poa(&inst, &alpha, &mut Budget::default()).unwrap();
            let b = empirical_collusion_poa(&inst, 1, &alpha, &mut Budget::default()).unwrap();
            assert_eq!(a.ratio, b.ratio);
            assert_eq!(a.worst_profile, b.worst_profile);
        }
    }

    fn arb_instance() -> impl Strategy<Value = Instance> {
        (1usize..=3, 1usize..=5).prop_flat_map(|(n, m)| {
            (
                proptest::collection::vec(1i64..=8, m),
                proptest::collection::vec(proptest::collection::vec(proptest::collection::vec(0..m, 0..=m), 1..=3), n),
            )
                .prop_map(move |(weights, families)| {
                    let items = weights
                        .iter()
                        .enumerate()
                        .map(|(i, w)| Item::new(format!("j{i}"), Rational::from_integer(*w)))
                        .collect();
                    let players = families
                        .into_iter()
                        .enumerate()
                        .map(|(p, gens)| {
                            let sets = gens.into_iter().map(|g| g.into_iter().collect::<ItemSet>());
                            PlayerSpec::new(format!("p{p}"), FeasibilitySystem::explicit_from_generators(sets))
                        })
                        .collect();
                    Instance::new(items, players).unwrap()
                })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn opt_matches_enumeration(inst in arb_instance()) {
            let (p, w) = compute_opt(&inst, &mut Budget::default()).unwrap();
            prop_assert!(inst.validate_profile(&p).is_empty());
            prop_assert_eq!(w, brute_opt(&inst));
        }

        #[test]
        fn ratios_respect_bounds(inst in arb_instance(), a in 0usize..3) {
            let alpha = [r(1, 1), r(3, 2), r(2, 1)][a].clone();
            let nash = empirical_poa(&inst, &alpha, &mut Budget::default()).unwrap();
            prop_assert!(nash.bound_satisfied);
            let seq = empirical_sequential_poa(&inst, &alpha, &mut Budget::default()).unwrap();
            prop_assert!(seq.bound_satisfied);
            prop_assert!(seq.ratio <= nash.ratio);
            for k in 1..=inst.player_count() {
                let c = empirical_collusion_poa(&inst, k, &alpha, &mut Budget::default()).unwrap();
                prop_assert!(c.bound_satisfied);
            }
        }

        #[test]
        fn full_coalition_at_alpha_one_is_optimal(inst in arb_instance()) {
            let n = inst.player_count();
            let c = empirical_collusion_poa(&inst, n, &r(1, 1), &mut Budget::default()).unwrap();
            prop_assert_eq!(c.ratio, r(1, 1));
        }

        #[test]
        fn exact_greedy_satisfies_symmetric_guarantee(
            m in 1usize..=5,
            gens in proptest::collection::vec(proptest::collection::vec(0usize..5, 0..=3), 1..=3),
            copies in proptest::collection::vec(1usize..=2, 1..=3),
            weights in proptest::collection::vec(1i64..=5, 5),
            a in 0usize..2,
        ) {
            let alpha = [r(1, 1), r(3, 2)][a].clone();
            let items: Vec<Item> = (0..m).map(|i| Item::new(format!("j{i}"), Rational::from_integer(weights[i]))).collect();
            let sets = gens.into_iter().map(|g| g.into_iter().filter(|&i| i < m).collect::<ItemSet>());
            let base = Arc::new(FeasibilitySystem::explicit_from_generators(sets));
            let players = copies.iter().enumerate()
                .map(|(p, &c)| PlayerSpec::new(format!("p{p}"), FeasibilitySystem::SharedSymmetric { base: base.clone(), copies: c }))
                .collect();
            let inst = Instance::new(items, players).unwrap();
            let order = PlayerOrder::identity(inst.player_count());
            let outcome = greedy_sequential_outcome(&inst, &order, &alpha, &ExactSelector, &mut Budget::default()).unwrap();
            let steps = symmetric_greedy_lemma(&inst, &order, &outcome, &alpha, &mut Budget::default()).unwrap();
            prop_assert!(steps.iter().all(|s| s.holds));
            let seq = empirical_sequential_poa(&inst, &alpha, &mut Budget::default()).unwrap();
            prop_assert!(seq.bound_satisfied);
        }
    }
}
