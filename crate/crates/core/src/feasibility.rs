//! Downward-closed feasibility systems.
//!
//! A player's strategy space is either listed explicitly through its maximal
//! sets, or described implicitly by a throughput-scheduling problem: a set of
//! jobs is feasible when it can be scheduled non-preemptively inside the jobs'
//! time windows on the player's machines.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::itemset::{ItemIdx, ItemSet};
use crate::rational::Rational;

/// Time window and processing time of a job on a dedicated or identical machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Job {
    pub release: Rational,
    pub processing: Rational,
    pub deadline: Rational,
}

impl Job {
    pub fn new(release: Rational, processing: Rational, deadline: Rational) -> Self {
        Job {
            release,
            processing,
            deadline,
        }
    }

    /// A job released at time zero.
    pub fn with_deadline(processing: Rational, deadline: Rational) -> Self {
        Job::new(Rational::zero(), processing, deadline)
    }
}

/// Release and deadline of a job whose processing time depends on the machine.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub release: Rational,
    pub deadline: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FeasibilitySystem {
    /// Antichain of maximal feasible sets; a set is feasible iff it is
    /// contained in one of them.
    Explicit { maximal_sets: Vec<ItemSet> },
    SingleMachine { jobs: BTreeMap<ItemIdx, Job> },
    IdenticalMachines {
        copies: usize,
        jobs: BTreeMap<ItemIdx, Job>,
    },
    UnrelatedMachines {
        machines: Vec<String>,
        /// Processing time keyed by `(machine index, item)`. A missing entry
        /// means the job cannot run on that machine.
        processing: BTreeMap<(usize, ItemIdx), Rational>,
        windows: BTreeMap<ItemIdx, Window>,
    },
    /// `copies` disjoint members of a family shared by several players.
    SharedSymmetric {
        base: Arc<FeasibilitySystem>,
        copies: usize,
    },
}

/// Start times per machine, in processing order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ScheduleWitness {
    pub machines: Vec<Vec<(ItemIdx, Rational)>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Membership {
    pub feasible: bool,
    pub witness: Option<ScheduleWitness>,
}

impl Membership {
    fn no() -> Self {
        Membership {
            feasible: false,
            witness: None,
        }
    }

    fn yes(witness: Option<ScheduleWitness>) -> Self {
        Membership {
            feasible: true,
            witness,
        }
    }
}

/// A job as seen by one concrete machine.
#[derive(Debug, Clone)]
struct MachineJob {
    item: ItemIdx,
    release: Rational,
    processing: Rational,
    deadline: Rational,
}

impl FeasibilitySystem {
    pub fn explicit<I: IntoIterator<Item = ItemSet>>(maximal_sets: I) -> Self {
        FeasibilitySystem::Explicit {
            maximal_sets: maximal_sets.into_iter().collect(),
        }
    }

    /// Builds an explicit family from arbitrary generating sets, dropping
    /// every set contained in another so the result is an antichain.
    pub fn explicit_from_generators<I: IntoIterator<Item = ItemSet>>(sets: I) -> Self {
        let mut sets: Vec<ItemSet> = sets.into_iter().collect();
        sets.sort_by(|a, b| b.len().cmp(&a.len()).then_with(|| a.cmp(b)));
        sets.dedup();
        let mut kept: Vec<ItemSet> = Vec::new();
        for s in sets {
            if !kept.iter().any(|k| s.is_subset(k)) {
                kept.push(s);
            }
        }
        kept.sort();
        FeasibilitySystem::Explicit { maximal_sets: kept }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FeasibilitySystem::Explicit { .. } => "explicit",
            FeasibilitySystem::SingleMachine { .. } => "single_machine",
            FeasibilitySystem::IdenticalMachines { .. } => "identical_machines",
            FeasibilitySystem::UnrelatedMachines { .. } => "unrelated_machines",
            FeasibilitySystem::SharedSymmetric { .. } => "shared_symmetric",
        }
    }

    /// Items the system knows about; anything else is never feasible.
    pub fn universe(&self) -> ItemSet {
        match self {
            FeasibilitySystem::Explicit { maximal_sets } => {
                let mut u = ItemSet::new();
                for s in maximal_sets {
                    u.union_with(s);
                }
                u
            }
            FeasibilitySystem::SingleMachine { jobs }
            | FeasibilitySystem::IdenticalMachines { jobs, .. } => jobs.keys().copied().collect(),
            FeasibilitySystem::UnrelatedMachines { windows, .. } => {
                windows.keys().copied().collect()
            }
            FeasibilitySystem::SharedSymmetric { base, .. } => base.universe(),
        }
    }

    /// Whether feasibility is defined by a scheduling problem.
    pub fn is_scheduling(&self) -> bool {
        match self {
            FeasibilitySystem::Explicit { .. } => false,
            FeasibilitySystem::SharedSymmetric { base, .. } => base.is_scheduling(),
            _ => true,
        }
    }

    pub fn deadline(&self, item: ItemIdx) -> Option<&Rational> {
        match self {
            FeasibilitySystem::Explicit { .. } => None,
            FeasibilitySystem::SingleMachine { jobs }
            | FeasibilitySystem::IdenticalMachines { jobs, .. } => jobs.get(&item).map(|j| &j.deadline),
            FeasibilitySystem::UnrelatedMachines { windows, .. } => {
                windows.get(&item).map(|w| &w.deadline)
            }
            FeasibilitySystem::SharedSymmetric { base, .. } => base.deadline(item),
        }
    }

    /// Structural checks: positive copy counts and processing times, and all
    /// referenced items below `item_count`.
    pub fn check_structure(&self, item_count: usize) -> Result<()> {
        let in_range = |i: ItemIdx| {
            if i < item_count {
                Ok(())
            } else {
                Err(Error::UnknownItem(format!("#{i}")))
            }
        };
        let positive = |p: &Rational, what: &str| {
            if p > &Rational::zero() {
                Ok(())
            } else {
                Err(Error::Input(format!("{what} must be positive, got {p}")))
            }
        };
        match self {
            FeasibilitySystem::Explicit { maximal_sets } => {
                for s in maximal_sets {
                    if let Some(last) = s.last() {
                        in_range(last)?;
                    }
                }
            }
            FeasibilitySystem::SingleMachine { jobs } => {
                for (&i, job) in jobs {
                    in_range(i)?;
                    positive(&job.processing, "processing time")?;
                }
            }
            FeasibilitySystem::IdenticalMachines { copies, jobs } => {
                if *copies == 0 {
                    return Err(Error::Input("copies must be at least 1".into()));
                }
                for (&i, job) in jobs {
                    in_range(i)?;
                    positive(&job.processing, "processing time")?;
                }
            }
            FeasibilitySystem::UnrelatedMachines {
                machines,
                processing,
                windows,
            } => {
                if machines.is_empty() {
                    return Err(Error::Input("unrelated_machines needs a machine".into()));
                }
                for (&(m, i), p) in processing {
                    if m >= machines.len() {
                        return Err(Error::Input(format!("unknown machine #{m}")));
                    }
                    in_range(i)?;
                    positive(p, "processing time")?;
                }
                for &i in windows.keys() {
                    in_range(i)?;
                }
            }
            FeasibilitySystem::SharedSymmetric { base, copies } => {
                if *copies == 0 {
                    return Err(Error::Input("copies must be at least 1".into()));
                }
                if matches!(**base, FeasibilitySystem::SharedSymmetric { .. }) {
                    return Err(Error::Input("a shared base cannot itself be shared".into()));
                }
                base.check_structure(item_count)?;
            }
        }
        Ok(())
    }

    pub fn contains(&self, set: &ItemSet, budget: &mut Budget) -> Result<bool> {
        Ok(self.is_member(set, budget)?.feasible)
    }

    /// Decides membership, returning a schedule for scheduling systems.
    pub fn is_member(&self, set: &ItemSet, budget: &mut Budget) -> Result<Membership> {
        if set.is_empty() {
            let witness = self.is_scheduling().then(|| ScheduleWitness {
                machines: vec![Vec::new(); self.machine_count()],
            });
            return Ok(Membership::yes(witness));
        }
        match self {
            FeasibilitySystem::Explicit { maximal_sets } => {
                Ok(if maximal_sets.iter().any(|m| set.is_subset(m)) {
                    Membership::yes(None)
                } else {
                    Membership::no()
                })
            }
            FeasibilitySystem::SingleMachine { jobs } => {
                let Some(machine_jobs) = dedicated_jobs(jobs, set) else {
                    return Ok(Membership::no());
                };
                Ok(match single_machine_schedule(machine_jobs, budget)? {
                    Some(seq) => Membership::yes(Some(ScheduleWitness { machines: vec![seq] })),
                    None => Membership::no(),
                })
            }
            FeasibilitySystem::IdenticalMachines { copies, jobs } => {
                let Some(machine_jobs) = dedicated_jobs(jobs, set) else {
                    return Ok(Membership::no());
                };
                identical_machine_schedule(machine_jobs, *copies, budget)
            }
            FeasibilitySystem::UnrelatedMachines {
                machines,
                processing,
                windows,
            } => unrelated_schedule(machines.len(), processing, windows, set, budget),
            FeasibilitySystem::SharedSymmetric { base, copies } => {
                shared_membership(base, *copies, set, budget)
            }
        }
    }

    fn machine_count(&self) -> usize {
        match self {
            FeasibilitySystem::Explicit { .. } => 0,
            FeasibilitySystem::SingleMachine { .. } => 1,
            FeasibilitySystem::IdenticalMachines { copies, .. } => *copies,
            FeasibilitySystem::UnrelatedMachines { machines, .. } => machines.len(),
            FeasibilitySystem::SharedSymmetric { base, copies } => base.machine_count() * copies,
        }
    }

    /// Jobs keyed by item when every machine of this system is an identical
    /// single machine (single, identical, or shared over those).
    pub(crate) fn identical_jobs(&self) -> Option<(&BTreeMap<ItemIdx, Job>, usize)> {
        match self {
            FeasibilitySystem::SingleMachine { jobs } => Some((jobs, 1)),
            FeasibilitySystem::IdenticalMachines { copies, jobs } => Some((jobs, *copies)),
            FeasibilitySystem::SharedSymmetric { base, copies } => {
                base.identical_jobs().map(|(jobs, c)| (jobs, c * copies))
            }
            _ => None,
        }
    }
}

fn dedicated_jobs(jobs: &BTreeMap<ItemIdx, Job>, set: &ItemSet) -> Option<Vec<MachineJob>> {
    set.iter()
        .map(|item| {
            jobs.get(&item).map(|j| MachineJob {
                item,
                release: j.release.clone(),
                processing: j.processing.clone(),
                deadline: j.deadline.clone(),
            })
        })
        .collect()
}

fn edd_order(jobs: &mut [MachineJob]) {
    jobs.sort_by(|a, b| a.deadline.cmp(&b.deadline).then(a.item.cmp(&b.item)));
}

/// Exact one-machine feasibility. Returns `(item, start)` in processing order.
///
/// With a common release date, earliest-deadline-first order is optimal. With
/// distinct releases the search runs over job orders, starting every job as
/// early as possible and memoizing the earliest completion time reached for
/// each scheduled subset.
fn single_machine_schedule(
    mut jobs: Vec<MachineJob>,
    budget: &mut Budget,
) -> Result<Option<Vec<(ItemIdx, Rational)>>> {
    edd_order(&mut jobs);
    if jobs
        .iter()
        .any(|j| &j.release + &j.processing > j.deadline)
    {
        return Ok(None);
    }
    let common_release = jobs.windows(2).all(|w| w[0].release == w[1].release);
    if common_release {
        budget.tick("single-machine EDD check")?;
        let mut t = jobs.first().map(|j| j.release.clone()).unwrap_or_default();
        let mut seq = Vec::with_capacity(jobs.len());
        for j in &jobs {
            let end = &t + &j.processing;
            if end > j.deadline {
                return Ok(None);
            }
            seq.push((j.item, t));
            t = end;
        }
        return Ok(Some(seq));
    }

    struct Search<'a> {
        jobs: &'a [MachineJob],
        failed: HashMap<ItemSet, Rational>,
        order: Vec<(ItemIdx, Rational)>,
    }

    impl Search<'_> {
        fn go(&mut self, done: &mut ItemSet, time: Rational, budget: &mut Budget) -> Result<bool> {
            budget.tick("single-machine order search")?;
            if done.len() == self.jobs.len() {
                return Ok(true);
            }
            if let Some(t) = self.failed.get(done) {
                if *t <= time {
                    return Ok(false);
                }
            }
            let pending: Vec<usize> = (0..self.jobs.len()).filter(|&k| !done.contains(k)).collect();
            for &k in &pending {
                let j = &self.jobs[k];
                if time.clone().max(j.release.clone()) + &j.processing > j.deadline {
                    self.failed.insert(done.clone(), time);
                    return Ok(false);
                }
            }
            for &k in &pending {
                let j = &self.jobs[k];
                let start = time.clone().max(j.release.clone());
                let end = &start + &j.processing;
                self.order.push((j.item, start));
                done.insert(k);
                if self.go(done, end, budget)? {
                    return Ok(true);
                }
                done.remove(k);
                self.order.pop();
            }
            self.failed.insert(done.clone(), time);
            Ok(false)
        }
    }

    let mut search = Search {
        jobs: &jobs,
        failed: HashMap::new(),
        order: Vec::new(),
    };
    let start = jobs
        .iter()
        .map(|j| j.release.clone())
        .min()
        .unwrap_or_default();
    let mut done = ItemSet::new();
    if search.go(&mut done, start, budget)? {
        Ok(Some(search.order))
    } else {
        Ok(None)
    }
}

/// Equal processing times and a common release on identical machines: jobs
/// can be packed into aligned slots, and the k-th job in deadline order goes
/// to slot `k / copies`.
fn slot_schedule(jobs: &[MachineJob], copies: usize) -> Option<Option<ScheduleWitness>> {
    let first = jobs.first()?;
    if !jobs
        .iter()
        .all(|j| j.processing == first.processing && j.release == first.release)
    {
        return None;
    }
    let mut sorted = jobs.to_vec();
    edd_order(&mut sorted);
    let mut machines = vec![Vec::new(); copies];
    for (k, j) in sorted.iter().enumerate() {
        let slot = Rational::from(k / copies);
        let start = &first.release + &(slot * &first.processing);
        if &start + &j.processing > j.deadline {
            return Some(None);
        }
        machines[k % copies].push((j.item, start));
    }
    Some(Some(ScheduleWitness { machines }))
}

fn identical_machine_schedule(
    jobs: Vec<MachineJob>,
    copies: usize,
    budget: &mut Budget,
) -> Result<Membership> {
    if copies == 1 {
        return Ok(match single_machine_schedule(jobs, budget)? {
            Some(seq) => Membership::yes(Some(ScheduleWitness { machines: vec![seq] })),
            None => Membership::no(),
        });
    }
    if let Some(result) = slot_schedule(&jobs, copies) {
        budget.tick("slot check")?;
        return Ok(match result {
            Some(w) => Membership::yes(Some(w)),
            None => Membership::no(),
        });
    }
    let mut ordered = jobs;
    edd_order(&mut ordered);
    let items: Vec<ItemIdx> = ordered.iter().map(|j| j.item).collect();
    let by_item: HashMap<ItemIdx, MachineJob> = ordered.into_iter().map(|j| (j.item, j)).collect();
    let check = |_: usize, part: &ItemSet, budget: &mut Budget| -> Result<Option<ScheduleWitness>> {
        let part_jobs: Vec<MachineJob> = part.iter().map(|i| by_item[&i].clone()).collect();
        Ok(single_machine_schedule(part_jobs, budget)?
            .map(|seq| ScheduleWitness { machines: vec![seq] }))
    };
    partition_search(&items, copies, true, &check, budget)
}

fn unrelated_schedule(
    machine_count: usize,
    processing: &BTreeMap<(usize, ItemIdx), Rational>,
    windows: &BTreeMap<ItemIdx, Window>,
    set: &ItemSet,
    budget: &mut Budget,
) -> Result<Membership> {
    if set.iter().any(|i| !windows.contains_key(&i)) {
        return Ok(Membership::no());
    }
    let mut items = set.to_vec();
    items.sort_by(|a, b| windows[a].deadline.cmp(&windows[b].deadline).then(a.cmp(b)));
    let check = |m: usize, part: &ItemSet, budget: &mut Budget| -> Result<Option<ScheduleWitness>> {
        let mut part_jobs = Vec::with_capacity(part.len());
        for i in part {
            let Some(p) = processing.get(&(m, i)) else {
                return Ok(None);
            };
            let w = &windows[&i];
            part_jobs.push(MachineJob {
                item: i,
                release: w.release.clone(),
                processing: p.clone(),
                deadline: w.deadline.clone(),
            });
        }
        Ok(single_machine_schedule(part_jobs, budget)?
            .map(|seq| ScheduleWitness { machines: vec![seq] }))
    };
    partition_search(&items, machine_count, false, &check, budget)
}

fn shared_membership(
    base: &FeasibilitySystem,
    copies: usize,
    set: &ItemSet,
    budget: &mut Budget,
) -> Result<Membership> {
    if copies == 1 {
        return base.is_member(set, budget);
    }
    if !set.is_subset(&base.universe()) {
        return Ok(Membership::no());
    }
    if let Some((jobs, per_copy)) = base.identical_jobs() {
        let Some(machine_jobs) = dedicated_jobs(jobs, set) else {
            return Ok(Membership::no());
        };
        return identical_machine_schedule(machine_jobs, per_copy * copies, budget);
    }
    let items = set.to_vec();
    let check = |_: usize, part: &ItemSet, budget: &mut Budget| -> Result<Option<ScheduleWitness>> {
        let m = base.is_member(part, budget)?;
        Ok(m.feasible.then(|| m.witness.unwrap_or_default()))
    };
    let mut found = partition_search(&items, copies, true, &check, budget)?;
    if !base.is_scheduling() {
        found.witness = None;
    }
    Ok(found)
}

/// Splits `items` into `parts` groups, each accepted by `check`.
///
type GroupCheck<'a> = dyn Fn(usize, &ItemSet, &mut Budget) -> Result<Option<ScheduleWitness>> + 'a;

/// `check(part_index, group)` returns the group's witness when the group is
/// feasible for that part. Groups are grown one item at a time, so
/// downward closure makes every rejected partial group a dead end. With
/// `identical` parts, an item may open only the first empty part.
fn partition_search(
    items: &[ItemIdx],
    parts: usize,
    identical: bool,
    check: &GroupCheck<'_>,
    budget: &mut Budget,
) -> Result<Membership> {
    fn go(
        k: usize,
        items: &[ItemIdx],
        groups: &mut Vec<ItemSet>,
        identical: bool,
        check: &GroupCheck<'_>,
        budget: &mut Budget,
    ) -> Result<bool> {
        budget.tick("machine assignment search")?;
        if k == items.len() {
            return Ok(true);
        }
        let item = items[k];
        let mut opened_empty = false;
        for p in 0..groups.len() {
            if identical && groups[p].is_empty() {
                if opened_empty {
                    continue;
                }
                opened_empty = true;
            }
            groups[p].insert(item);
            if check(p, &groups[p], budget)?.is_some() && go(k + 1, items, groups, identical, check, budget)? {
                return Ok(true);
            }
            groups[p].remove(item);
        }
        Ok(false)
    }

    let mut groups = vec![ItemSet::new(); parts];
    if !go(0, items, &mut groups, identical, check, budget)? {
        return Ok(Membership::no());
    }
    let mut witness = ScheduleWitness::default();
    for (p, g) in groups.iter().enumerate() {
        match check(p, g, budget)? {
            Some(w) if !g.is_empty() => witness.machines.extend(w.machines),
            _ => witness.machines.push(Vec::new()),
        }
    }
    Ok(Membership::yes(Some(witness)))
}

/// Outcome of [`validate_downward_closed`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DownwardClosureReport {
    pub ok: bool,
    /// `(feasible set, infeasible subset)` for oracle systems, or
    /// `(contained set, containing set)` for a broken antichain.
    pub counterexample: Option<(ItemSet, ItemSet)>,
}

/// Checks the downward-closure invariant.
///
/// Explicit families are checked exactly for the antichain property. Oracle
/// systems are spot-checked: random maximal feasible sets are built, thinned
/// at random, and re-tested.
pub fn validate_downward_closed(
    system: &FeasibilitySystem,
    samples: usize,
    seed: u64,
) -> DownwardClosureReport {
    if let FeasibilitySystem::Explicit { maximal_sets } = system {
        for (i, a) in maximal_sets.iter().enumerate() {
            for (j, b) in maximal_sets.iter().enumerate() {
                if i != j && a.is_subset(b) {
                    return DownwardClosureReport {
                        ok: false,
                        counterexample: Some((a.clone(), b.clone())),
                    };
                }
            }
        }
        return DownwardClosureReport {
            ok: true,
            counterexample: None,
        };
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let universe = system.universe().to_vec();
    for _ in 0..samples {
        let mut budget = Budget::default();
        let mut order = universe.clone();
        order.shuffle(&mut rng);
        let mut feasible = ItemSet::new();
        for item in order {
            feasible.insert(item);
            match system.contains(&feasible, &mut budget) {
                Ok(true) => {}
                Ok(false) | Err(_) => {
                    feasible.remove(item);
                }
            }
        }
        let thinned: ItemSet = feasible.iter().filter(|_| rng.gen_bool(0.5)).collect();
        let mut candidates = vec![thinned];
        for item in &feasible {
            let mut s = feasible.clone();
            s.remove(item);
            candidates.push(s);
        }
        for sub in candidates {
            if let Ok(false) = system.contains(&sub, &mut budget) {
                return DownwardClosureReport {
                    ok: false,
                    counterexample: Some((feasible, sub)),
                };
            }
        }
    }
    DownwardClosureReport {
        ok: true,
        counterexample: None,
    }
}

/// A maximum-cardinality feasible subset of `available`.
///
/// With `prefer_largest_deadline`, items are scanned by decreasing deadline
/// (ties by item order) and each is kept when the kept set can still be
/// completed to maximum cardinality; otherwise the scan is in item order.
/// Only scheduling systems are supported.
pub fn max_cardinality_feasible(
    system: &FeasibilitySystem,
    available: &ItemSet,
    prefer_largest_deadline: bool,
    budget: &mut Budget,
) -> Result<ItemSet> {
    if !system.is_scheduling() {
        return Err(Error::Unsupported(format!(
            "maximum-cardinality selection needs a scheduling system, got {}",
            system.kind()
        )));
    }
    let mut scan: Vec<ItemIdx> = available.intersection(&system.universe()).to_vec();
    if prefer_largest_deadline {
        scan.sort_by(|a, b| system.deadline(*b).cmp(&system.deadline(*a)).then(a.cmp(b)));
    }

    if let Some((jobs, copies)) = system.identical_jobs() {
        if let Some(chosen) = uniform_greedy(jobs, copies, &scan, budget)? {
            return Ok(chosen);
        }
    }

    let target = best_cardinality(system, &ItemSet::new(), &scan, budget)?;
    let mut chosen = ItemSet::new();
    for (pos, &item) in scan.iter().enumerate() {
        if chosen.len() == target {
            break;
        }
        chosen.insert(item);
        let keep = system.contains(&chosen, budget)?
            && best_cardinality(system, &chosen, &scan[pos + 1..], budget)? == target;
        if !keep {
            chosen.remove(item);
        }
    }
    Ok(chosen)
}

/// Equal-length jobs with a common release on identical machines form a
/// matroid, so a greedy scan is already maximum. Job `j` fits in one of the
/// first `cap_j = copies · ⌊(d_j - r)/p⌋` slots, and a set is feasible iff
/// its jobs take distinct slots below their caps; each kept job takes the
/// latest free slot below its cap.
fn uniform_greedy(
    jobs: &BTreeMap<ItemIdx, Job>,
    copies: usize,
    scan: &[ItemIdx],
    budget: &mut Budget,
) -> Result<Option<ItemSet>> {
    let Some(first) = scan.first().map(|i| &jobs[i]) else {
        return Ok(Some(ItemSet::new()));
    };
    if !scan
        .iter()
        .all(|i| jobs[i].processing == first.processing && jobs[i].release == first.release)
    {
        return Ok(None);
    }
    let m = scan.len();
    let cap = |job: &Job| -> usize {
        let room = &job.deadline - &job.release;
        if room < job.processing {
            return 0;
        }
        if job.processing.is_zero() {
            return m;
        }
        let slots = (room / job.processing.clone()).floor();
        usize::try_from(slots).map_or(m, |s| s.saturating_mul(copies).min(m))
    };
    // Node `s + 1` is slot `s`; node 0 means no slot is left.
    let mut parent: Vec<usize> = (0..=m).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    let mut chosen = ItemSet::new();
    for &item in scan {
        budget.tick("slot greedy")?;
        let slot = find(&mut parent, cap(&jobs[&item]));
        if slot > 0 {
            parent[slot] = slot - 1;
            chosen.insert(item);
        }
    }
    Ok(Some(chosen))
}

/// Largest `|S|` with `base ⊆ S ⊆ base ∪ rest` and `S` feasible; `base` must
/// itself be feasible.
fn best_cardinality(
    system: &FeasibilitySystem,
    base: &ItemSet,
    rest: &[ItemIdx],
    budget: &mut Budget,
) -> Result<usize> {
    fn go(
        system: &FeasibilitySystem,
        current: &mut ItemSet,
        rest: &[ItemIdx],
        best: &mut usize,
        budget: &mut Budget,
    ) -> Result<()> {
        budget.tick("maximum-cardinality search")?;
        *best = (*best).max(current.len());
        let Some((&item, tail)) = rest.split_first() else {
            return Ok(());
        };
        if current.len() + rest.len() <= *best {
            return Ok(());
        }
        current.insert(item);
        if system.contains(current, budget)? {
            go(system, current, tail, best, budget)?;
        }
        current.remove(item);
        go(system, current, tail, best, budget)
    }
    let mut best = base.len();
    let mut current = base.clone();
    go(system, &mut current, rest, &mut best, budget)?;
    Ok(best)
}

/// Independent re-check of a schedule against the system's job data.
pub fn witness_is_valid(system: &FeasibilitySystem, set: &ItemSet, witness: &ScheduleWitness) -> bool {
    let mut seen = ItemSet::new();
    for (m, seq) in witness.machines.iter().enumerate() {
        let mut busy_until: Option<Rational> = None;
        for (item, start) in seq {
            let Some((release, processing, deadline)) = machine_job(system, m, *item) else {
                return false;
            };
            if start < &release || start + &processing > deadline {
                return false;
            }
            if let Some(t) = &busy_until {
                if start < t {
                    return false;
                }
            }
            busy_until = Some(start + &processing);
            if !seen.insert(*item) {
                return false;
            }
        }
    }
    seen == *set
}

fn machine_job(system: &FeasibilitySystem, machine: usize, item: ItemIdx) -> Option<(Rational, Rational, Rational)> {
    match system {
        FeasibilitySystem::Explicit { .. } => None,
        FeasibilitySystem::SingleMachine { jobs } | FeasibilitySystem::IdenticalMachines { jobs, .. } => jobs
            .get(&item)
            .map(|j| (j.release.clone(), j.processing.clone(), j.deadline.clone())),
        FeasibilitySystem::UnrelatedMachines {
            processing, windows, ..
        } => {
            let w = windows.get(&item)?;
            let p = processing.get(&(machine, item))?;
            Some((w.release.clone(), p.clone(), w.deadline.clone()))
        }
        FeasibilitySystem::SharedSymmetric { base, .. } => {
            let per_copy = base.machine_count().max(1);
            machine_job(base, machine % per_copy, item)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn set(xs: &[usize]) -> ItemSet {
        xs.iter().copied().collect()
    }

    fn member(sys: &FeasibilitySystem, xs: &[usize]) -> bool {
        sys.contains(&set(xs), &mut Budget::default()).unwrap()
    }

    /// The ex_asym(3,2) shape: items 0..3 are P-jobs, 3..5 Q-jobs.
    fn asym_machines() -> (FeasibilitySystem, FeasibilitySystem) {
        let window = || Window {
            release: Rational::zero(),
            deadline: Rational::one(),
        };
        let windows: BTreeMap<_, _> = (0..5).map(|i| (i, window())).collect();
        let fast = FeasibilitySystem::UnrelatedMachines {
            machines: vec!["m1".into()],
            processing: (0..5).map(|i| ((0, i), r(1, 3))).collect(),
            windows: windows.clone(),
        };
        let slow = FeasibilitySystem::UnrelatedMachines {
            machines: vec!["m2".into()],
            processing: (0..5)
                .map(|i| ((0, i), if i < 3 { r(2, 1) } else { r(1, 1) }))
                .collect(),
            windows,
        };
        (fast, slow)
    }

    #[test]
    fn explicit_membership_is_subset_of_maximal() {
        let sys = FeasibilitySystem::explicit([set(&[0]), set(&[1])]);
        assert!(member(&sys, &[]));
        assert!(member(&sys, &[0]));
        assert!(member(&sys, &[1]));
        assert!(!member(&sys, &[0, 1]));
        assert!(!member(&sys, &[7]));
    }

    #[test]
    fn fast_machine_takes_any_three_jobs() {
        let (fast, _) = asym_machines();
        assert!(member(&fast, &[0, 1, 2]));
        assert!(member(&fast, &[0, 3, 4]));
        assert!(!member(&fast, &[0, 1, 2, 3]));
    }

    #[test]
    fn slow_machine_takes_one_q_job() {
        let (_, slow) = asym_machines();
        assert!(member(&slow, &[3]));
        assert!(!member(&slow, &[0]));
        assert!(!member(&slow, &[3, 4]));
    }

    #[test]
    fn empty_set_is_always_feasible() {
        let (fast, _) = asym_machines();
        assert!(member(&fast, &[]));
        assert!(member(&FeasibilitySystem::explicit([]), &[]));
    }

    #[test]
    fn general_releases_use_order_search() {
        // Job 0: [0, 10), p = 3. Job 1: [1, 3), p = 2. EDD would put job 1
        // first, idling until 1; job 0 then runs 3..6. Both fit.
        let jobs = BTreeMap::from([
            (0, Job::new(r(0, 1), r(3, 1), r(10, 1))),
            (1, Job::new(r(1, 1), r(2, 1), r(3, 1))),
            (2, Job::new(r(0, 1), r(1, 1), r(1, 1))),
        ]);
        let sys = FeasibilitySystem::SingleMachine { jobs };
        let m = sys.is_member(&set(&[0, 1]), &mut Budget::default()).unwrap();
        assert!(m.feasible);
        assert!(witness_is_valid(&sys, &set(&[0, 1]), m.witness.as_ref().unwrap()));
        assert!(member(&sys, &[0, 1, 2]));
        // Job 0 must start by 7, jobs 1 and 2 pin [0,1) and [1,3).
        let tight = FeasibilitySystem::SingleMachine {
            jobs: BTreeMap::from([
                (0, Job::new(r(0, 1), r(3, 1), r(4, 1))),
                (1, Job::new(r(1, 1), r(2, 1), r(3, 1))),
                (2, Job::new(r(0, 1), r(1, 1), r(1, 1))),
            ]),
        };
        assert!(!member(&tight, &[0, 1, 2]));
        assert!(member(&tight, &[0, 2]));
    }

    #[test]
    fn identical_machines_split_jobs() {
        let jobs: BTreeMap<_, _> = (0..4)
            .map(|i| (i, Job::with_deadline(r(if i < 2 { 2 } else { 1 }, 1), r(2, 1))))
            .collect();
        let two = FeasibilitySystem::IdenticalMachines { copies: 2, jobs: jobs.clone() };
        assert!(member(&two, &[0, 1]));
        assert!(member(&two, &[0, 2, 3]));
        assert!(!member(&two, &[0, 1, 2]));
        let m = two.is_member(&set(&[0, 2, 3]), &mut Budget::default()).unwrap();
        assert!(witness_is_valid(&two, &set(&[0, 2, 3]), m.witness.as_ref().unwrap()));
    }

    #[test]
    fn shared_explicit_base_partitions() {
        let base = Arc::new(FeasibilitySystem::explicit([set(&[0, 1]), set(&[2])]));
        let two = FeasibilitySystem::SharedSymmetric { base: base.clone(), copies: 2 };
        assert!(member(&two, &[0, 1, 2]));
        assert!(member(&two, &[0, 2]));
        assert!(!member(&two, &[0, 1, 3]));
        let one = FeasibilitySystem::SharedSymmetric { base, copies: 1 };
        assert!(!member(&one, &[0, 2]));
    }

    #[test]
    fn shared_copies_of_single_machine_match_identical_machines() {
        let jobs: BTreeMap<_, _> = (0..5)
            .map(|i| (i, Job::with_deadline(r(1 + i as i64 % 2, 1), r(2 + i as i64 % 3, 1))))
            .collect();
        let shared = FeasibilitySystem::SharedSymmetric {
            base: Arc::new(FeasibilitySystem::SingleMachine { jobs: jobs.clone() }),
            copies: 2,
        };
        let ident = FeasibilitySystem::IdenticalMachines { copies: 2, jobs };
        for mask in 0u32..32 {
            let s: ItemSet = (0..5).filter(|i| mask & (1 << i) != 0).collect();
            let mut b = Budget::default();
            assert_eq!(shared.contains(&s, &mut b).unwrap(), ident.contains(&s, &mut b).unwrap());
        }
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let jobs: BTreeMap<_, _> = (0..6)
            .map(|i| (i, Job::new(r(i as i64, 1), r(1, 1), r(20, 1))))
            .collect();
        let sys = FeasibilitySystem::SingleMachine { jobs };
        let err = sys.is_member(&ItemSet::full(6), &mut Budget::new(2)).unwrap_err();
        assert!(err.is_budget());
    }

    #[test]
    fn antichain_check() {
        let ok = FeasibilitySystem::explicit([set(&[0]), set(&[1])]);
        assert!(validate_downward_closed(&ok, 0, 0).ok);
        let bad = FeasibilitySystem::explicit([set(&[0]), set(&[0, 1])]);
        let report = validate_downward_closed(&bad, 0, 0);
        assert!(!report.ok);
        assert_eq!(report.counterexample, Some((set(&[0]), set(&[0, 1]))));
    }

    #[test]
    fn single_machine_spot_check_passes() {
        let jobs: BTreeMap<_, _> = (0..8)
            .map(|i| (i, Job::new(r(i as i64 % 3, 1), r(1 + i as i64 % 2, 1), r(4 + i as i64, 1))))
            .collect();
        let sys = FeasibilitySystem::SingleMachine { jobs };
        assert!(validate_downward_closed(&sys, 200, 11).ok);
    }

    #[test]
    fn generators_reduce_to_antichain() {
        let sys = FeasibilitySystem::explicit_from_generators([set(&[0]), set(&[0, 1]), set(&[2]), set(&[0, 1])]);
        assert_eq!(sys, FeasibilitySystem::explicit([set(&[0, 1]), set(&[2])]));
    }

    /// Unit jobs, `per_class` jobs with each deadline 1..=classes; item
    /// `(k-1)*per_class + r` has deadline `k`.
    fn deadline_classes(classes: usize, per_class: usize) -> FeasibilitySystem {
        let jobs = (0..classes * per_class)
            .map(|i| (i, Job::with_deadline(r(1, 1), Rational::from(i / per_class + 1))))
            .collect();
        FeasibilitySystem::SingleMachine { jobs }
    }

    #[test]
    fn max_cardinality_prefers_latest_deadlines() {
        let sys = deadline_classes(5, 5);
        let mut b = Budget::default();
        let all = ItemSet::full(25);
        let first = max_cardinality_feasible(&sys, &all, true, &mut b).unwrap();
        assert_eq!(first, (20..25).collect());
        let second = max_cardinality_feasible(&sys, &all.difference(&first), true, &mut b).unwrap();
        assert_eq!(second, (15..19).collect());
        assert!(max_cardinality_feasible(&sys, &ItemSet::new(), true, &mut b).unwrap().is_empty());
    }

    #[test]
    fn max_cardinality_general_processing_is_exact() {
        // One long job (p=3, d=3) against three short ones (p=1, d=3):
        // greedy by deadline then id would take the long job first.
        let jobs = BTreeMap::from([
            (0, Job::with_deadline(r(3, 1), r(3, 1))),
            (1, Job::with_deadline(r(1, 1), r(3, 1))),
            (2, Job::with_deadline(r(1, 1), r(3, 1))),
            (3, Job::with_deadline(r(1, 1), r(3, 1))),
        ]);
        let sys = FeasibilitySystem::SingleMachine { jobs };
        let got = max_cardinality_feasible(&sys, &ItemSet::full(4), true, &mut Budget::default()).unwrap();
        assert_eq!(got, set(&[1, 2, 3]));
    }

    #[test]
    fn max_cardinality_rejects_explicit() {
        let sys = FeasibilitySystem::explicit([set(&[0])]);
        assert!(matches!(
            max_cardinality_feasible(&sys, &set(&[0]), true, &mut Budget::default()),
            Err(Error::Unsupported(_))
        ));
    }

    /// Brute force over all job orders with as-early-as-possible starts.
    fn brute_force_one_machine(jobs: &[(Rational, Rational, Rational)]) -> bool {
        fn perms(n: usize) -> Vec<Vec<usize>> {
            if n == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        perms(jobs.len()).into_iter().any(|order| {
            let mut t = Rational::zero();
            order.iter().all(|&k| {
                let (rel, p, d) = &jobs[k];
                let start = t.clone().max(rel.clone());
                t = start + p;
                &t <= d
            })
        })
    }

    fn arb_job(zero_release: bool) -> impl Strategy<Value = (Rational, Rational, Rational)> {
        (0i64..6, 1i64..5, 1i64..4, 1i64..14, 1i64..3).prop_map(move |(rel, p, pd, d, dd)| {
            let release = if zero_release { Rational::zero() } else { r(rel, 2) };
            (release, r(p, pd), r(d, dd))
        })
    }

    fn job_map(jobs: &[(Rational, Rational, Rational)]) -> BTreeMap<ItemIdx, Job> {
        jobs.iter()
            .enumerate()
            .map(|(i, (rel, p, d))| (i, Job::new(rel.clone(), p.clone(), d.clone())))
            .collect()
    }

    proptest! {
        #[test]
        fn slot_greedy_matches_oracle_greedy(
            deadlines in proptest::collection::vec(0i64..=8, 0..=9),
            half_length in any::<bool>(),
            late_release in any::<bool>(),
            copies in 1usize..=3,
            by_deadline in any::<bool>(),
        ) {
            let p = if half_length { r(1, 2) } else { r(1, 1) };
            let rel = if late_release { r(1, 2) } else { Rational::zero() };
            let jobs: BTreeMap<ItemIdx, Job> = deadlines
                .iter()
                .enumerate()
                .map(|(i, d)| (i, Job::new(rel.clone(), p.clone(), r(*d, 2))))
                .collect();
            let sys = FeasibilitySystem::IdenticalMachines { copies, jobs };
            let all = ItemSet::full(deadlines.len());
            let mut b = Budget::default();
            let fast = max_cardinality_feasible(&sys, &all, by_deadline, &mut b).unwrap();
            let mut scan = all.to_vec();
            if by_deadline {
                scan.sort_by(|a, c| sys.deadline(*c).cmp(&sys.deadline(*a)).then(a.cmp(c)));
            }
            let mut slow = ItemSet::new();
            for item in scan {
                slow.insert(item);
                if !sys.contains(&slow, &mut b).unwrap() {
                    slow.remove(item);
                }
            }
            prop_assert_eq!(&fast, &slow);
            let best = best_cardinality(&sys, &ItemSet::new(), &all.to_vec(), &mut b).unwrap();
            prop_assert_eq!(fast.len(), best);
        }
    }

    proptest! {
        #[test]
        fn edd_matches_order_enumeration(jobs in proptest::collection::vec(arb_job(true), 0..=7)) {
            let sys = FeasibilitySystem::SingleMachine { jobs: job_map(&jobs) };
            let m = sys.is_member(&ItemSet::full(jobs.len()), &mut Budget::default()).unwrap();
            prop_assert_eq!(m.feasible, brute_force_one_machine(&jobs));
            if let Some(w) = &m.witness {
                prop_assert!(witness_is_valid(&sys, &ItemSet::full(jobs.len()), w));
            }
        }

        #[test]
        fn release_search_matches_order_enumeration(jobs in proptest::collection::vec(arb_job(false), 0..=6)) {
            let sys = FeasibilitySystem::SingleMachine { jobs: job_map(&jobs) };
            let m = sys.is_member(&ItemSet::full(jobs.len()), &mut Budget::default()).unwrap();
            prop_assert_eq!(m.feasible, brute_force_one_machine(&jobs));
            if let Some(w) = &m.witness {
                prop_assert!(witness_is_valid(&sys, &ItemSet::full(jobs.len()), w));
            }
        }

        #[test]
        fn multi_machine_witnesses_are_sound(jobs in proptest::collection::vec(arb_job(false), 1..=6), copies in 1usize..=3, mask in 0u32..64) {
            let sys = FeasibilitySystem::IdenticalMachines { copies, jobs: job_map(&jobs) };
            let s: ItemSet = (0..jobs.len()).filter(|i| mask & (1 << i) != 0).collect();
            let m = sys.is_member(&s, &mut Budget::default()).unwrap();
            if m.feasible {
                prop_assert!(witness_is_valid(&sys, &s, m.witness.as_ref().unwrap()));
                for item in &s {
                    let mut smaller = s.clone();
                    smaller.remove(item);
                    prop_assert!(sys.contains(&smaller, &mut Budget::default()).unwrap());
                }
            }
        }

        #[test]
        fn one_shared_copy_equals_base(jobs in proptest::collection::vec(arb_job(false), 1..=6), mask in 0u32..64) {
            let base = FeasibilitySystem::SingleMachine { jobs: job_map(&jobs) };
            let shared = FeasibilitySystem::SharedSymmetric { base: Arc::new(base.clone()), copies: 1 };
            let s: ItemSet = (0..jobs.len()).filter(|i| mask & (1 << i) != 0).collect();
            let mut b = Budget::default();
            prop_assert_eq!(shared.contains(&s, &mut b).unwrap(), base.contains(&s, &mut b).unwrap());
        }
    }
}
