//! Items, players, strategy profiles, payoffs and welfare.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::feasibility::FeasibilitySystem;
use crate::itemset::{ItemIdx, ItemSet};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Item {
    pub id: String,
    pub weight: Rational,
}

impl Item {
    pub fn new(id: impl Into<String>, weight: Rational) -> Self {
        Item {
            id: id.into(),
            weight,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlayerSpec {
    pub id: String,
    pub system: FeasibilitySystem,
}

impl PlayerSpec {
    pub fn new(id: impl Into<String>, system: FeasibilitySystem) -> Self {
        PlayerSpec {
            id: id.into(),
            system,
        }
    }
}

/// A set packing game: a weighted ground set and one feasibility system per
/// player.
///
/// Items are kept sorted by id, so an [`ItemIdx`] order is the id order and
/// every enumeration over item sets is deterministic.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    items: Vec<Item>,
    players: Vec<PlayerSpec>,
    symmetric_base: Option<Arc<FeasibilitySystem>>,
    pub meta: serde_json::Value,
}

impl Instance {
    /// Validates and builds an instance. `items` must already be sorted by
    /// id with no duplicates; feasibility systems refer to item positions.
    /// The instance is symmetric when every player draws copies from one
    /// shared base family.
    pub fn new(items: Vec<Item>, players: Vec<PlayerSpec>) -> Result<Self> {
        if players.is_empty() {
            return Err(Error::Input("an instance needs at least one player".into()));
        }
        for pair in items.windows(2) {
            if pair[0].id >= pair[1].id {
                return Err(Error::Input(format!(
                    "item ids must be unique and sorted, got {:?} before {:?}",
                    pair[0].id, pair[1].id
                )));
            }
        }
        for item in &items {
            if item.weight.is_negative() {
                return Err(Error::Input(format!(
                    "item {} has negative weight {}",
                    item.id, item.weight
                )));
            }
        }
        let mut seen_players = std::collections::BTreeSet::new();
        for p in &players {
            if !seen_players.insert(p.id.as_str()) {
                return Err(Error::Input(format!("duplicate player id {:?}", p.id)));
            }
            p.system.check_structure(items.len())?;
        }
        let symmetric_base = shared_base(&players);
        Ok(Instance {
            items,
            players,
            symmetric_base,
            meta: serde_json::Value::Null,
        })
    }

    pub fn with_meta(mut self, meta: serde_json::Value) -> Self {
        self.meta = meta;
        self
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn players(&self) -> &[PlayerSpec] {
        &self.players
    }

    pub fn player_count(&self) -> usize {
        self.players.len()
    }

    pub fn item_count(&self) -> usize {
        self.items.len()
    }

    pub fn system(&self, player: usize) -> &FeasibilitySystem {
        &self.players[player].system
    }

    pub fn symmetric_base(&self) -> Option<&Arc<FeasibilitySystem>> {
        self.symmetric_base.as_ref()
    }

    /// Whether every player selects copies from one shared family.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric_base.is_some()
    }

    /// Copy count `x_i` of each player in a symmetric instance.
    pub fn copies(&self) -> Option<Vec<usize>> {
        self.symmetric_base.as_ref()?;
        self.players
            .iter()
            .map(|p| match &p.system {
                FeasibilitySystem::SharedSymmetric { copies, .. } => Some(*copies),
                _ => None,
            })
            .collect()
    }

    pub fn all_items(&self) -> ItemSet {
        ItemSet::full(self.items.len())
    }

    pub fn weight(&self, item: ItemIdx) -> &Rational {
        &self.items[item].weight
    }

    pub fn set_weight(&self, set: &ItemSet) -> Rational {
        set.iter().map(|i| &self.items[i].weight).sum()
    }

    pub fn item_index(&self, id: &str) -> Option<ItemIdx> {
        self.items.binary_search_by(|it| it.id.as_str().cmp(id)).ok()
    }

    pub fn player_index(&self, id: &str) -> Option<usize> {
        self.players.iter().position(|p| p.id == id)
    }

    pub fn item_ids(&self, set: &ItemSet) -> Vec<String> {
        set.iter().map(|i| self.items[i].id.clone()).collect()
    }

    /// Parses item ids into a set, failing on unknown ids.
    pub fn item_set<S: AsRef<str>>(&self, ids: &[S]) -> Result<ItemSet> {
        ids.iter()
            .map(|id| {
                self.item_index(id.as_ref())
                    .ok_or_else(|| Error::UnknownItem(id.as_ref().to_string()))
            })
            .collect()
    }

    /// `{a,b}` rendering with item ids.
    pub fn format_set(&self, set: &ItemSet) -> String {
        format!("{{{}}}", self.item_ids(set).join(","))
    }

    pub fn format_profile(&self, profile: &Profile) -> String {
        let parts: Vec<String> = profile.sets.iter().map(|s| self.format_set(s)).collect();
        format!("({})", parts.join(","))
    }

    fn check_known(&self, set: &ItemSet) -> Result<()> {
        match set.last() {
            Some(last) if last >= self.items.len() => Err(Error::UnknownItem(format!("#{last}"))),
            _ => Ok(()),
        }
    }

    /// The payoff of `player`: the weight of their set, or
    /// [`Payoff::Infeasible`] when it overlaps another player's set.
    ///
    /// A set that is outside the player's own family is an input error, not
    /// an infeasible payoff.
    pub fn payoff(&self, profile: &Profile, player: usize) -> Result<Payoff> {
        self.check_shape(profile)?;
        let own = &profile.sets[player];
        self.check_known(own)?;
        if !self.system(player).contains(own, &mut Budget::default())? {
            return Err(Error::InfeasibleStrategy {
                player,
                set: self.format_set(own),
            });
        }
        let overlaps = profile
            .sets
            .iter()
            .enumerate()
            .any(|(k, s)| k != player && !s.is_disjoint(own));
        Ok(if overlaps {
            Payoff::Infeasible
        } else {
            Payoff::Finite(self.set_weight(own))
        })
    }

    /// Total weight of a valid profile.
    pub fn welfare(&self, profile: &Profile) -> Result<Rational> {
        let violations = self.validate_profile(profile);
        if let Some(v) = violations.first() {
            return Err(Error::InvalidProfile(v.describe(self)));
        }
        Ok(self.total_weight(profile))
    }

    /// Sum of the players' set weights, without validity checks.
    pub fn total_weight(&self, profile: &Profile) -> Rational {
        profile.sets.iter().map(|s| self.set_weight(s)).sum()
    }

    fn check_shape(&self, profile: &Profile) -> Result<()> {
        if profile.sets.len() != self.players.len() {
            return Err(Error::InvalidProfile(format!(
                "expected {} player sets, got {}",
                self.players.len(),
                profile.sets.len()
            )));
        }
        Ok(())
    }

    /// Every overlap and every per-player infeasibility in `profile`.
    pub fn validate_profile(&self, profile: &Profile) -> Vec<Violation> {
        let mut out = Vec::new();
        if profile.sets.len() != self.players.len() {
            out.push(Violation::WrongPlayerCount {
                expected: self.players.len(),
                got: profile.sets.len(),
            });
            return out;
        }
        for (p, s) in profile.sets.iter().enumerate() {
            for item in s.iter().filter(|&i| i >= self.items.len()) {
                out.push(Violation::UnknownItem { player: p, item });
            }
        }
        if !out.is_empty() {
            return out;
        }
        for a in 0..profile.sets.len() {
            for b in a + 1..profile.sets.len() {
                let shared = profile.sets[a].intersection(&profile.sets[b]);
                if !shared.is_empty() {
                    out.push(Violation::Overlap { a, b, items: shared });
                }
            }
        }
        let mut budget = Budget::default();
        for (p, s) in profile.sets.iter().enumerate() {
            match self.system(p).contains(s, &mut budget) {
                Ok(true) => {}
                Ok(false) => out.push(Violation::Infeasible { player: p }),
                Err(e) => out.push(Violation::Undecided {
                    player: p,
                    reason: e.to_string(),
                }),
            }
        }
        out
    }

    /// Fails with [`Error::InvalidProfile`] unless `profile` is valid.
    pub fn require_valid(&self, profile: &Profile) -> Result<()> {
        match self.validate_profile(profile).first() {
            Some(v) => Err(Error::InvalidProfile(v.describe(self))),
            None => Ok(()),
        }
    }
}

/// The common base when every player is a shared-symmetric system over the
/// same family.
fn shared_base(players: &[PlayerSpec]) -> Option<Arc<FeasibilitySystem>> {
    let mut base: Option<&Arc<FeasibilitySystem>> = None;
    for p in players {
        let FeasibilitySystem::SharedSymmetric { base: b, .. } = &p.system else {
            return None;
        };
        match base {
            Some(first) if **first != **b => return None,
            Some(_) => {}
            None => base = Some(b),
        }
    }
    base.cloned()
}

/// One item set per player, indexed like [`Instance::players`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Profile {
    pub sets: Vec<ItemSet>,
}

impl Profile {
    pub fn new(sets: Vec<ItemSet>) -> Self {
        Profile { sets }
    }

    pub fn empty(players: usize) -> Self {
        Profile {
            sets: vec![ItemSet::new(); players],
        }
    }

    /// Items held by anyone.
    pub fn held(&self) -> ItemSet {
        let mut u = ItemSet::new();
        for s in &self.sets {
            u.union_with(s);
        }
        u
    }

    /// Items held by players other than those in `excluded`.
    pub fn held_by_others(&self, excluded: &[usize]) -> ItemSet {
        let mut u = ItemSet::new();
        for (p, s) in self.sets.iter().enumerate() {
            if !excluded.contains(&p) {
                u.union_with(s);
            }
        }
        u
    }
}

/// A player's payoff; [`Payoff::Infeasible`] sorts below every finite value.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Payoff {
    Infeasible,
    Finite(Rational),
}

impl fmt::Display for Payoff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payoff::Infeasible => f.write_str("-inf"),
            Payoff::Finite(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    WrongPlayerCount { expected: usize, got: usize },
    UnknownItem { player: usize, item: ItemIdx },
    Overlap { a: usize, b: usize, items: ItemSet },
    Infeasible { player: usize },
    /// The membership search ran out of budget.
    Undecided { player: usize, reason: String },
}

impl Violation {
    pub fn describe(&self, instance: &Instance) -> String {
        let pid = |p: &usize| {
            instance
                .players()
                .get(*p)
                .map(|s| s.id.clone())
                .unwrap_or_else(|| format!("#{p}"))
        };
        match self {
            Violation::WrongPlayerCount { expected, got } => {
                format!("expected {expected} player sets, got {got}")
            }
            Violation::UnknownItem { player, item } => {
                format!("player {} references unknown item #{item}", pid(player))
            }
            Violation::Overlap { a, b, items } => format!(
                "players {} and {} share {}",
                pid(a),
                pid(b),
                instance.format_set(items)
            ),
            Violation::Infeasible { player } => {
                format!("set of player {} is not feasible", pid(player))
            }
            Violation::Undecided { player, reason } => {
                format!("feasibility of player {} undecided: {reason}", pid(player))
            }
        }
    }
}
