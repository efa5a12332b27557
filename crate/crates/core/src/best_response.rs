//! Best responses of single players and joint best responses of coalitions.
//!
//! All searches run through a [`Solver`], which memoizes membership tests and
//! best responses for one instance and charges every search node to a single
//! [`Budget`].

use std::collections::HashMap;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::feasibility::FeasibilitySystem;
use crate::itemset::{ItemIdx, ItemSet};
use crate::model::Instance;
use crate::rational::Rational;

/// A profitable deviation: `players` switch to `sets`, all drawn from `pool`,
/// raising their joint value from `old_value` to `new_value`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeviationWitness {
    pub players: Vec<usize>,
    pub sets: Vec<ItemSet>,
    pub pool: ItemSet,
    pub old_value: Rational,
    pub new_value: Rational,
}

impl DeviationWitness {
    /// Re-checks the witness from scratch: the sets are disjoint, inside the
    /// pool, feasible for their players, worth `new_value`, and
    /// `new_value > alpha * old_value`.
    pub fn replay(&self, instance: &Instance, alpha: &Rational) -> Result<bool> {
        if self.players.len() != self.sets.len() {
            return Ok(false);
        }
        let mut union = ItemSet::new();
        let mut total = Rational::zero();
        for (&p, s) in self.players.iter().zip(&self.sets) {
            if p >= instance.player_count() || !s.is_disjoint(&union) || !s.is_subset(&self.pool) {
                return Ok(false);
            }
            if !instance.system(p).contains(s, &mut Budget::default())? {
                return Ok(false);
            }
            union.union_with(s);
            total += instance.set_weight(s);
        }
        Ok(total == self.new_value && self.new_value > alpha * &self.old_value)
    }
}

/// Memoizing search context for one instance.
pub struct Solver<'a> {
    instance: &'a Instance,
    budget: Budget,
    /// Players with equal systems share cache entries.
    class: Vec<usize>,
    universes: Vec<ItemSet>,
    feasible: HashMap<(usize, ItemSet), bool>,
    best: HashMap<(usize, ItemSet), (ItemSet, Rational)>,
}

impl<'a> Solver<'a> {
    pub fn new(instance: &'a Instance, budget: Budget) -> Self {
        let players = instance.players();
        let class = (0..players.len())
            .map(|p| (0..=p).find(|&q| players[q].system == players[p].system).unwrap_or(p))
            .collect();
        let universes = players.iter().map(|p| p.system.universe()).collect();
        Solver {
            instance,
            budget,
            class,
            universes,
            feasible: HashMap::new(),
            best: HashMap::new(),
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    pub fn budget(&self) -> &Budget {
        &self.budget
    }

    pub fn budget_mut(&mut self) -> &mut Budget {
        &mut self.budget
    }

    pub fn into_budget(self) -> Budget {
        self.budget
    }

    pub fn universe(&self, player: usize) -> &ItemSet {
        &self.universes[player]
    }

    pub fn tick(&mut self, context: &str) -> Result<()> {
        self.budget.tick(context)
    }

    pub fn feasible(&mut self, player: usize, set: &ItemSet) -> Result<bool> {
        if set.is_empty() {
            return Ok(true);
        }
        if !set.is_subset(&self.universes[player]) {
            return Ok(false);
        }
        let key = (self.class[player], set.clone());
        if let Some(&v) = self.feasible.get(&key) {
            return Ok(v);
        }
        let v = self.instance.system(player).contains(set, &mut self.budget)?;
        self.feasible.insert(key, v);
        Ok(v)
    }

    /// Largest weight of a feasible `S` with `base ⊆ S ⊆ base ∪ rest`, for a
    /// feasible `base`.
    fn max_extension(&mut self, player: usize, base: &ItemSet, rest: &[ItemIdx]) -> Result<Rational> {
        let instance = self.instance;
        if let FeasibilitySystem::Explicit { maximal_sets } = instance.system(player) {
            self.tick("best response")?;
            let reach: ItemSet = base.union(&rest.iter().copied().collect());
            let best = maximal_sets
                .iter()
                .filter(|m| base.is_subset(m))
                .map(|m| instance.set_weight(&m.intersection(&reach)))
                .max();
            return Ok(best.unwrap_or_else(|| instance.set_weight(base)));
        }

        let mut order: Vec<ItemIdx> = rest.to_vec();
        order.sort_by(|a, b| instance.weight(*b).cmp(instance.weight(*a)).then(a.cmp(b)));
        let mut suffix = vec![Rational::zero(); order.len() + 1];
        for k in (0..order.len()).rev() {
            suffix[k] = &suffix[k + 1] + instance.weight(order[k]);
        }
        let mut best = instance.set_weight(base);
        let mut current = base.clone();
        let value = best.clone();
        self.extend(player, &order, &suffix, 0, &mut current, value, &mut best)?;
        Ok(best)
    }

    #[allow(clippy::too_many_arguments)]
    fn extend(
        &mut self,
        player: usize,
        order: &[ItemIdx],
        suffix: &[Rational],
        k: usize,
        current: &mut ItemSet,
        value: Rational,
        best: &mut Rational,
    ) -> Result<()> {
        self.tick("best response")?;
        if value > *best {
            *best = value.clone();
        }
        if k == order.len() || &value + &suffix[k] <= *best {
            return Ok(());
        }
        let item = order[k];
        current.insert(item);
        if self.feasible(player, current)? {
            let with = &value + self.instance.weight(item);
            self.extend(player, order, suffix, k + 1, current, with, best)?;
        }
        current.remove(item);
        self.extend(player, order, suffix, k + 1, current, value, best)
    }

    /// A maximum-weight feasible subset of `pool`; among optimal sets the
    /// lexicographically smallest in item order.
    pub fn best_response(&mut self, player: usize, pool: &ItemSet) -> Result<(ItemSet, Rational)> {
        let pool = pool.intersection(&self.universes[player]);
        let key = (self.class[player], pool.clone());
        if let Some(hit) = self.best.get(&key) {
            return Ok(hit.clone());
        }
        let items = pool.to_vec();
        let target = self.max_extension(player, &ItemSet::new(), &items)?;

        // Grow the lexicographically smallest optimal set one element at a
        // time: stop as soon as the prefix is optimal, otherwise append the
        // smallest element that still admits an optimal completion.
        let mut chosen = ItemSet::new();
        let mut value = Rational::zero();
        let mut from = 0;
        while value != target {
            let mut advanced = false;
            let start = from;
            for pos in start..items.len() {
                let item = items[pos];
                chosen.insert(item);
                if self.feasible(player, &chosen)?
                    && self.max_extension(player, &chosen, &items[pos + 1..])? == target
                {
                    value += self.instance.weight(item);
                    from = pos + 1;
                    advanced = true;
                    break;
                }
                chosen.remove(item);
            }
            if !advanced {
                return Err(Error::Input("best response search lost its optimum".into()));
            }
        }
        self.best.insert(key, (chosen.clone(), value.clone()));
        Ok((chosen, value))
    }

    pub fn best_response_value(&mut self, player: usize, pool: &ItemSet) -> Result<Rational> {
        Ok(self.best_response(player, pool)?.1)
    }

    /// `None` when `alpha * w(chosen)` is at least the best value over
    /// `available ∪ chosen`; otherwise the best deviation.
    pub fn alpha_best_response_violation(
        &mut self,
        player: usize,
        available: &ItemSet,
        chosen: &ItemSet,
        alpha: &Rational,
    ) -> Result<Option<DeviationWitness>> {
        let pool = available.union(chosen);
        let old_value = self.instance.set_weight(chosen);
        let (set, new_value) = self.best_response(player, &pool)?;
        if alpha * &old_value >= new_value {
            return Ok(None);
        }
        Ok(Some(DeviationWitness {
            players: vec![player],
            sets: vec![set],
            pool,
            old_value,
            new_value,
        }))
    }

    /// Pairwise-disjoint feasible sets for the members of `coalition`, drawn
    /// from `pool`, with maximum total weight. Ties go to the
    /// lexicographically smallest list of sets.
    pub fn coalition_best_response(
        &mut self,
        coalition: &[usize],
        pool: &ItemSet,
    ) -> Result<(Vec<ItemSet>, Rational)> {
        let instance = self.instance;
        let mut reach = ItemSet::new();
        for &p in coalition {
            reach.union_with(&self.universes[p]);
        }
        let mut order = pool.intersection(&reach).to_vec();
        order.sort_by(|a, b| instance.weight(*b).cmp(instance.weight(*a)).then(a.cmp(b)));
        let mut suffix = vec![Rational::zero(); order.len() + 1];
        for k in (0..order.len()).rev() {
            suffix[k] = &suffix[k + 1] + instance.weight(order[k]);
        }

        let mut search = CoalitionSearch {
            coalition,
            order: &order,
            suffix: &suffix,
            sets: vec![ItemSet::new(); coalition.len()],
            best_value: Rational::zero(),
            best_sets: vec![ItemSet::new(); coalition.len()],
            keep_ties: false,
        };
        // First pass finds the optimum value, second collects the smallest
        // optimal assignment.
        search.run(self, 0, Rational::zero())?;
        search.keep_ties = true;
        search.best_sets = Vec::new();
        search.run(self, 0, Rational::zero())?;
        Ok((search.best_sets, search.best_value))
    }
}

struct CoalitionSearch<'s> {
    coalition: &'s [usize],
    order: &'s [ItemIdx],
    suffix: &'s [Rational],
    sets: Vec<ItemSet>,
    best_value: Rational,
    best_sets: Vec<ItemSet>,
    keep_ties: bool,
}

impl CoalitionSearch<'_> {
    fn run(&mut self, solver: &mut Solver<'_>, k: usize, value: Rational) -> Result<()> {
        solver.tick("coalition best response")?;
        let bound = &value + &self.suffix[k];
        if self.keep_ties {
            if bound < self.best_value {
                return Ok(());
            }
        } else if bound <= self.best_value && k > 0 {
            return Ok(());
        }
        if k == self.order.len() {
            if value > self.best_value {
                self.best_value = value;
                self.best_sets = self.sets.clone();
            } else if value == self.best_value
                && (self.best_sets.is_empty() || self.sets < self.best_sets)
            {
                self.best_sets = self.sets.clone();
            }
            return Ok(());
        }
        let item = self.order[k];
        let weight = solver.instance().weight(item).clone();
        for m in 0..self.coalition.len() {
            self.sets[m].insert(item);
            if solver.feasible(self.coalition[m], &self.sets[m])? {
                self.run(solver, k + 1, &value + &weight)?;
            }
            self.sets[m].remove(item);
        }
        self.run(solver, k + 1, value)
    }
}

/// Runs `f` on a fresh solver that spends `budget`.
pub fn with_solver<T>(
    instance: &Instance,
    budget: &mut Budget,
    f: impl FnOnce(&mut Solver<'_>) -> Result<T>,
) -> Result<T> {
    let mut solver = Solver::new(instance, std::mem::take(budget));
    let out = f(&mut solver);
    *budget = solver.into_budget();
    out
}

pub fn best_response(
    instance: &Instance,
    player: usize,
    available: &ItemSet,
    budget: &mut Budget,
) -> Result<(ItemSet, Rational)> {
    with_solver(instance, budget, |s| s.best_response(player, available))
}

/// `Ok(None)` when `chosen` is an `alpha`-approximate best response against
/// `available`, otherwise the best deviation.
pub fn is_alpha_best_response(
    instance: &Instance,
    player: usize,
    available: &ItemSet,
    chosen: &ItemSet,
    alpha: &Rational,
    budget: &mut Budget,
) -> Result<Option<DeviationWitness>> {
    with_solver(instance, budget, |s| {
        s.alpha_best_response_violation(player, available, chosen, alpha)
    })
}

pub fn coalition_best_response(
    instance: &Instance,
    coalition: &[usize],
    available: &ItemSet,
    budget: &mut Budget,
) -> Result<(Vec<ItemSet>, Rational)> {
    with_solver(instance, budget, |s| s.coalition_best_response(coalition, available))
}
