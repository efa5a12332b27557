//! Named registries of interchangeable algorithms.

use std::collections::BTreeMap;

use crate::budget::Budget;
use crate::equilibria::{
    verify_collusion, verify_nash, verify_spe, ActionSelector, DeadlineGreedySelector, EquilibriumReport,
    ExactSelector, PlayerOrder,
};
use crate::error::{Error, Result};
use crate::metrics::{empirical_collusion_poa, empirical_poa, empirical_sequential_poa, PoAResult};
use crate::model::{Instance, Profile};
use crate::rational::Rational;

/// Trait objects looked up by name.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Registry {
            kind,
            entries: BTreeMap::new(),
        }
    }

    /// Adds `entry` under `name`, replacing any earlier entry.
    pub fn register(&mut self, name: &'static str, entry: Box<T>) {
        self.entries.insert(name, entry);
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries.get(name).map(|b| b.as_ref()).ok_or_else(|| {
            Error::Input(format!(
                "unknown {} {name:?}; known: {}",
                self.kind,
                self.names().join(", ")
            ))
        })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

/// `exact` and `deadline-greedy`.
pub fn selectors() -> Registry<dyn ActionSelector> {
    let mut r: Registry<dyn ActionSelector> = Registry::new("selector");
    for s in [Box::new(ExactSelector) as Box<dyn ActionSelector>, Box::new(DeadlineGreedySelector)] {
        r.register(s.name(), s);
    }
    r
}

/// Parameters shared by the equilibrium concepts; each concept reads the
/// ones it needs.
#[derive(Debug, Clone)]
pub struct ConceptParams {
    pub alpha: Rational,
    pub k: Option<usize>,
    pub order: Option<PlayerOrder>,
}

impl ConceptParams {
    pub fn new(alpha: Rational) -> Self {
        ConceptParams {
            alpha,
            k: None,
            order: None,
        }
    }
}

/// An equilibrium notion: how to check one profile and how to measure the
/// price of anarchy.
pub trait EquilibriumConcept: Send + Sync {
    fn name(&self) -> &'static str;

    fn verify(
        &self,
        instance: &Instance,
        profile: &Profile,
        params: &ConceptParams,
        budget: &mut Budget,
    ) -> Result<EquilibriumReport>;

    fn poa(&self, instance: &Instance, params: &ConceptParams, budget: &mut Budget) -> Result<PoAResult>;
}

struct Nash;
struct SubgamePerfect;
struct Collusion;

fn need_k(params: &ConceptParams) -> Result<usize> {
    params
        .k
        .ok_or_else(|| Error::Input("collusion needs a coalition size k".into()))
}

impl EquilibriumConcept for Nash {
    fn name(&self) -> &'static str {
        "nash"
    }

    fn verify(&self, i: &Instance, p: &Profile, params: &ConceptParams, b: &mut Budget) -> Result<EquilibriumReport> {
        verify_nash(i, p, &params.alpha, b)
    }

    fn poa(&self, i: &Instance, params: &ConceptParams, b: &mut Budget) -> Result<PoAResult> {
        empirical_poa(i, &params.alpha, b)
    }
}

impl EquilibriumConcept for SubgamePerfect {
    fn name(&self) -> &'static str {
        "spe"
    }

    fn verify(&self, i: &Instance, p: &Profile, params: &ConceptParams, b: &mut Budget) -> Result<EquilibriumReport> {
        let order = params
            .order
            .as_ref()
            .ok_or_else(|| Error::Input("spe verification needs an order of moves".into()))?;
        verify_spe(i, order, p, &params.alpha, b)
    }

    /// Over every order; `params.order` is not used.
    fn poa(&self, i: &Instance, params: &ConceptParams, b: &mut Budget) -> Result<PoAResult> {
        empirical_sequential_poa(i, &params.alpha, b)
    }
}

impl EquilibriumConcept for Collusion {
    fn name(&self) -> &'static str {
        "collusion"
    }

    fn verify(&self, i: &Instance, p: &Profile, params: &ConceptParams, b: &mut Budget) -> Result<EquilibriumReport> {
        verify_collusion(i, p, need_k(params)?, &params.alpha, b)
    }

    fn poa(&self, i: &Instance, params: &ConceptParams, b: &mut Budget) -> Result<PoAResult> {
        empirical_collusion_poa(i, need_k(params)?, &params.alpha, b)
    }
}

/// `nash`, `spe` and `collusion`.
pub fn concepts() -> Registry<dyn EquilibriumConcept> {
    let mut r: Registry<dyn EquilibriumConcept> = Registry::new("concept");
    let all: [Box<dyn EquilibriumConcept>; 3] = [Box::new(Nash), Box::new(SubgamePerfect), Box::new(Collusion)];
    for c in all {
        r.register(c.name(), c);
    }
    r
}
