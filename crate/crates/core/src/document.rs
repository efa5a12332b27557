//! JSON documents for instances, profiles, and reports.
//!
//! Rationals are written as strings (`"3/2"`), never as JSON numbers.
//! Decimal renderings appear next to them in reports for reading only.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::best_response::DeviationWitness;
use crate::equilibria::EquilibriumReport;
use crate::error::{Error, Result};
use crate::feasibility::{FeasibilitySystem, Job, Window};
use crate::itemset::{ItemIdx, ItemSet};
use crate::metrics::{Bound, PoAResult};
use crate::model::{Instance, Item, PlayerSpec, Profile};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct InstanceDoc {
    items: Vec<ItemDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    symmetric_base: Option<SystemDoc>,
    players: Vec<PlayerDoc>,
    #[serde(default)]
    meta: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemDoc {
    id: String,
    weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PlayerDoc {
    id: String,
    #[serde(flatten)]
    system: SystemDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum SystemDoc {
    Explicit {
        maximal_sets: Vec<Vec<String>>,
    },
    SingleMachine {
        jobs: Vec<JobDoc>,
    },
    IdenticalMachines {
        copies: usize,
        jobs: Vec<JobDoc>,
    },
    UnrelatedMachines {
        machines: Vec<String>,
        windows: Vec<WindowDoc>,
        processing: Vec<ProcessingDoc>,
    },
    /// Without `base`, the instance's `symmetric_base` is used.
    SharedSymmetric {
        copies: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        base: Option<Box<SystemDoc>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JobDoc {
    item: String,
    #[serde(default = "Rational::zero")]
    release: Rational,
    processing: Rational,
    deadline: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct WindowDoc {
    item: String,
    #[serde(default = "Rational::zero")]
    release: Rational,
    deadline: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProcessingDoc {
    machine: String,
    item: String,
    time: Rational,
}

// ---------------------------------------------------------------------------
// Instance

pub fn instance_to_json(instance: &Instance) -> Value {
    let ids = |set: &ItemSet| instance.item_ids(set);
    let id = |i: ItemIdx| instance.items()[i].id.clone();
    let shared = instance.symmetric_base().cloned();

    fn system_doc(
        system: &FeasibilitySystem,
        shared: &Option<Arc<FeasibilitySystem>>,
        ids: &dyn Fn(&ItemSet) -> Vec<String>,
        id: &dyn Fn(ItemIdx) -> String,
    ) -> SystemDoc {
        let jobs_doc = |jobs: &BTreeMap<ItemIdx, Job>| {
            jobs.iter()
                .map(|(i, j)| JobDoc {
                    item: id(*i),
                    release: j.release.clone(),
                    processing: j.processing.clone(),
                    deadline: j.deadline.clone(),
                })
                .collect()
        };
        match system {
            FeasibilitySystem::Explicit { maximal_sets } => SystemDoc::Explicit {
                maximal_sets: maximal_sets.iter().map(ids).collect(),
            },
            FeasibilitySystem::SingleMachine { jobs } => SystemDoc::SingleMachine { jobs: jobs_doc(jobs) },
            FeasibilitySystem::IdenticalMachines { copies, jobs } => SystemDoc::IdenticalMachines {
                copies: *copies,
                jobs: jobs_doc(jobs),
            },
            FeasibilitySystem::UnrelatedMachines {
                machines,
                processing,
                windows,
            } => SystemDoc::UnrelatedMachines {
                machines: machines.clone(),
                windows: windows
                    .iter()
                    .map(|(i, w)| WindowDoc {
                        item: id(*i),
                        release: w.release.clone(),
                        deadline: w.deadline.clone(),
                    })
                    .collect(),
                processing: processing
                    .iter()
                    .map(|((m, i), t)| ProcessingDoc {
                        machine: machines[*m].clone(),
                        item: id(*i),
                        time: t.clone(),
                    })
                    .collect(),
            },
            FeasibilitySystem::SharedSymmetric { base, copies } => SystemDoc::SharedSymmetric {
                copies: *copies,
                base: match shared {
                    Some(s) if **s == **base => None,
                    _ => Some(Box::new(system_doc(base, &None, ids, id))),
                },
            },
        }
    }

    let doc = InstanceDoc {
        items: instance
            .items()
            .iter()
            .map(|it| ItemDoc {
                id: it.id.clone(),
                weight: it.weight.clone(),
            })
            .collect(),
        symmetric_base: shared.as_ref().map(|b| system_doc(b, &None, &ids, &id)),
        players: instance
            .players()
            .iter()
            .map(|p| PlayerDoc {
                id: p.id.clone(),
                system: system_doc(&p.system, &shared, &ids, &id),
            })
            .collect(),
        meta: instance.meta.clone(),
    };
    serde_json::to_value(doc).expect("documents serialize")
}

pub fn instance_to_string(instance: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&instance_to_json(instance)).expect("documents serialize");
    s.push('\n');
    s
}

pub fn instance_from_str(text: &str) -> Result<Instance> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("instance JSON: {e}")))?;
    instance_from_json(value)
}

pub fn instance_from_json(value: Value) -> Result<Instance> {
    let doc: InstanceDoc =
        serde_json::from_value(value).map_err(|e| Error::Input(format!("instance document: {e}")))?;
    let mut items: Vec<Item> = doc.items.into_iter().map(|d| Item::new(d.id, d.weight)).collect();
    items.sort_by(|a, b| a.id.cmp(&b.id));
    let index: BTreeMap<String, ItemIdx> = items.iter().enumerate().map(|(i, it)| (it.id.clone(), i)).collect();
    let lookup = |id: &str| {
        index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownItem(id.to_string()))
    };

    fn build(
        doc: &SystemDoc,
        shared: Option<&Arc<FeasibilitySystem>>,
        lookup: &dyn Fn(&str) -> Result<ItemIdx>,
    ) -> Result<FeasibilitySystem> {
        let jobs = |jobs: &[JobDoc]| -> Result<BTreeMap<ItemIdx, Job>> {
            let mut out = BTreeMap::new();
            for j in jobs {
                let job = Job::new(j.release.clone(), j.processing.clone(), j.deadline.clone());
                if out.insert(lookup(&j.item)?, job).is_some() {
                    return Err(Error::Input(format!("job {} listed twice", j.item)));
                }
            }
            Ok(out)
        };
        Ok(match doc {
            SystemDoc::Explicit { maximal_sets } => {
                let sets = maximal_sets
                    .iter()
                    .map(|s| s.iter().map(|id| lookup(id)).collect::<Result<ItemSet>>())
                    .collect::<Result<Vec<_>>>()?;
                FeasibilitySystem::explicit(sets)
            }
            SystemDoc::SingleMachine { jobs: js } => FeasibilitySystem::SingleMachine { jobs: jobs(js)? },
            SystemDoc::IdenticalMachines { copies, jobs: js } => FeasibilitySystem::IdenticalMachines {
                copies: *copies,
                jobs: jobs(js)?,
            },
            SystemDoc::UnrelatedMachines {
                machines,
                windows,
                processing,
            } => {
                let mut w = BTreeMap::new();
                for d in windows {
                    let window = Window {
                        release: d.release.clone(),
                        deadline: d.deadline.clone(),
                    };
                    if w.insert(lookup(&d.item)?, window).is_some() {
                        return Err(Error::Input(format!("window for {} listed twice", d.item)));
                    }
                }
                let mut p = BTreeMap::new();
                for d in processing {
                    let m = machines
                        .iter()
                        .position(|name| *name == d.machine)
                        .ok_or_else(|| Error::Input(format!("unknown machine {:?}", d.machine)))?;
                    if p.insert((m, lookup(&d.item)?), d.time.clone()).is_some() {
                        return Err(Error::Input(format!(
                            "processing time of {} on {} listed twice",
                            d.item, d.machine
                        )));
                    }
                }
                FeasibilitySystem::UnrelatedMachines {
                    machines: machines.clone(),
                    processing: p,
                    windows: w,
                }
            }
            SystemDoc::SharedSymmetric { copies, base } => {
                let base = match (base, shared) {
                    (Some(b), _) => Arc::new(build(b, None, lookup)?),
                    (None, Some(s)) => s.clone(),
                    (None, None) => {
                        return Err(Error::Input(
                            "shared_symmetric player without a base or symmetric_base".into(),
                        ))
                    }
                };
                FeasibilitySystem::SharedSymmetric { base, copies: *copies }
            }
        })
    }

    let shared = match &doc.symmetric_base {
        Some(SystemDoc::SharedSymmetric { .. }) => {
            return Err(Error::Input("symmetric_base cannot itself be shared_symmetric".into()))
        }
        Some(b) => Some(Arc::new(build(b, None, &lookup)?)),
        None => None,
    };
    let players = doc
        .players
        .iter()
        .map(|p| Ok(PlayerSpec::new(p.id.clone(), build(&p.system, shared.as_ref(), &lookup)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Instance::new(items, players)?.with_meta(doc.meta))
}

// ---------------------------------------------------------------------------
// Profile

/// `{player id: [item ids]}` for every player.
pub fn profile_to_json(instance: &Instance, profile: &Profile) -> Value {
    let map: Map<String, Value> = instance
        .players()
        .iter()
        .zip(&profile.sets)
        .map(|(p, s)| (p.id.clone(), json!(instance.item_ids(s))))
        .collect();
    Value::Object(map)
}

pub fn profile_to_string(instance: &Instance, profile: &Profile) -> String {
    let mut s = serde_json::to_string_pretty(&profile_to_json(instance, profile)).expect("documents serialize");
    s.push('\n');
    s
}

/// Players missing from the document hold nothing.
pub fn profile_from_json(instance: &Instance, value: &Value) -> Result<Profile> {
    let map = value
        .as_object()
        .ok_or_else(|| Error::Input("a profile document is an object of player id to item ids".into()))?;
    let mut profile = Profile::empty(instance.player_count());
    for (player, items) in map {
        let p = instance
            .player_index(player)
            .ok_or_else(|| Error::Input(format!("unknown player {player:?}")))?;
        let ids: Vec<String> = serde_json::from_value(items.clone())
            .map_err(|e| Error::Input(format!("items of player {player}: {e}")))?;
        let set = instance.item_set(&ids)?;
        if set.len() != ids.len() {
            return Err(Error::Input(format!("player {player} lists an item twice")));
        }
        profile.sets[p] = set;
    }
    Ok(profile)
}

pub fn profile_from_str(instance: &Instance, text: &str) -> Result<Profile> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Input(format!("profile JSON: {e}")))?;
    profile_from_json(instance, &value)
}

// ---------------------------------------------------------------------------
// Reports

fn rational_json(r: &Rational) -> Value {
    json!(r.to_fraction_string())
}

pub fn witness_to_json(instance: &Instance, w: &DeviationWitness) -> Value {
    let sets: Map<String, Value> = w
        .players
        .iter()
        .zip(&w.sets)
        .map(|(&p, s)| (instance.players()[p].id.clone(), json!(instance.item_ids(s))))
        .collect();
    json!({
        "players": w.players.iter().map(|&p| instance.players()[p].id.clone()).collect::<Vec<_>>(),
        "deviation": sets,
        "pool": instance.item_ids(&w.pool),
        "old_value": rational_json(&w.old_value),
        "new_value": rational_json(&w.new_value),
    })
}

pub fn equilibrium_report_to_json(instance: &Instance, report: &EquilibriumReport) -> Value {
    json!({
        "concept": report.concept.to_string(),
        "alpha": rational_json(&report.alpha),
        "verdict": report.verdict,
        "welfare": rational_json(&report.welfare),
        "witness": report.witness.as_ref().map(|w| witness_to_json(instance, w)),
    })
}

pub fn bound_to_json(bound: &Bound) -> Value {
    match bound {
        Bound::Exact(b) => json!({ "kind": "exact", "value": rational_json(b), "decimal": b.to_f64() }),
        Bound::Interval(e) => json!({
            "kind": "interval",
            "lo": rational_json(&e.lo),
            "hi": rational_json(&e.hi),
            "decimal": e.midpoint_f64(),
        }),
        Bound::None => json!({ "kind": "none" }),
    }
}

pub fn poa_to_json(instance: &Instance, res: &PoAResult) -> Value {
    let order = res
        .worst_order
        .as_ref()
        .map(|o| o.iter().map(|&p| instance.players()[p].id.clone()).collect::<Vec<_>>());
    json!({
        "concept": res.concept,
        "alpha": rational_json(&res.alpha),
        "k": res.k,
        "opt_welfare": rational_json(&res.opt_welfare),
        "opt_profile": profile_to_json(instance, &res.opt_profile),
        "worst_equilibrium_welfare": rational_json(&res.worst_equilibrium_welfare),
        "worst_profile": profile_to_json(instance, &res.worst_profile),
        "worst_order": order,
        "ratio": rational_json(&res.ratio),
        "ratio_decimal": res.ratio.to_f64(),
        "bound": bound_to_json(&res.bound),
        "bound_satisfied": res.bound_satisfied,
        "orders_examined": res.orders_examined,
        "equilibria_examined": res.equilibria_examined,
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_pretty(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}
