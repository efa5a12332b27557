//! Generators for the lower-bound constructions and seeded random families.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::equilibria::{greedy_sequential_outcome, DeadlineGreedySelector, PlayerOrder};
use crate::error::{Error, Result};
use crate::feasibility::{FeasibilitySystem, Job, Window};
use crate::itemset::ItemSet;
use crate::model::{Instance, Item, PlayerSpec, Profile};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// Two players, two unit items; player 1 may take either, player 2 only item 2.
    ExTrivial,
    /// `q+1` single-machine players; `p` P-jobs and `q` Q-jobs with unit
    /// weight and deadline 1. Player 1 runs every job in time `1/p`; the
    /// others run Q-jobs in time 1 and P-jobs in time 2.
    ExAsym { p: u32, q: u32 },
    /// `n` identical machines; `q(n-1)+p` Q-jobs of length `1/(q(n-1)+p)`
    /// and weight 1, `n-1` P-jobs of length 1 and weight `p`, deadline 1.
    ExSym { p: u32, q: u32, n: u32 },
    /// `n` identical machines and `n` unit jobs due at each time `1..=n`.
    ExSeq { n: u32 },
    /// Explicit families where player `i` may take subsets of `OPT_i` or of
    /// `S_i` only. Item `x{i}_{j}` (`i != j`) is in `OPT_i` and `S_j`;
    /// item `x{i}_00` is in `OPT_i` with weight `n-k+(n-1)(α-1)`.
    ExCollusion { n: u32, k: u32, alpha: Rational },
    RandomExplicit {
        n: u32,
        items: u32,
        max_weight: u32,
        seed: u64,
    },
    /// A random explicit base family shared by `n` players, each taking
    /// between 1 and `copies` disjoint members.
    RandomSymmetric { n: u32, copies: u32, seed: u64 },
}

/// Profiles named by a construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReferenceProfiles {
    pub opt: Profile,
    pub bad_equilibrium: Profile,
}

impl GeneratorSpec {
    pub fn family(&self) -> &'static str {
        match self {
            GeneratorSpec::ExTrivial => "ex_trivial",
            GeneratorSpec::ExAsym { .. } => "ex_asym",
            GeneratorSpec::ExSym { .. } => "ex_sym",
            GeneratorSpec::ExSeq { .. } => "ex_seq",
            GeneratorSpec::ExCollusion { .. } => "ex_collusion",
            GeneratorSpec::RandomExplicit { .. } => "random_explicit",
            GeneratorSpec::RandomSymmetric { .. } => "random_symmetric",
        }
    }

    /// Short form such as `ex_sym(3,2,3)`.
    pub fn label(&self) -> String {
        match self {
            GeneratorSpec::ExTrivial => "ex_trivial".into(),
            GeneratorSpec::ExAsym { p, q } => format!("ex_asym({p},{q})"),
            GeneratorSpec::ExSym { p, q, n } => format!("ex_sym({p},{q},{n})"),
            GeneratorSpec::ExSeq { n } => format!("ex_seq({n})"),
            GeneratorSpec::ExCollusion { n, k, alpha } => format!("ex_collusion({n},{k},{alpha})"),
            GeneratorSpec::RandomExplicit {
                n,
                items,
                max_weight,
                seed,
            } => format!("random_explicit({n},{items},{max_weight},{seed})"),
            GeneratorSpec::RandomSymmetric { n, copies, seed } => {
                format!("random_symmetric({n},{copies},{seed})")
            }
        }
    }

    /// The approximation factor the construction is built for.
    pub fn alpha(&self) -> Option<Rational> {
        match self {
            GeneratorSpec::ExTrivial | GeneratorSpec::ExSeq { .. } => Some(Rational::one()),
            GeneratorSpec::ExAsym { p, q } | GeneratorSpec::ExSym { p, q, .. } => {
                Rational::new(*p as i64, *q as i64).ok()
            }
            GeneratorSpec::ExCollusion { alpha, .. } => Some(alpha.clone()),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Input(format!("{}: {msg}", self.family())));
        match self {
            GeneratorSpec::ExTrivial => Ok(()),
            GeneratorSpec::ExAsym { p, q } => {
                if *q < 1 || p < q {
                    return bad(format!("need p >= q >= 1, got p = {p}, q = {q}"));
                }
                Ok(())
            }
            GeneratorSpec::ExSym { p, q, n } => {
                if *q < 1 || p < q {
                    return bad(format!("need p >= q >= 1, got p = {p}, q = {q}"));
                }
                if *n < 1 {
                    return bad("need n >= 1".into());
                }
                Ok(())
            }
            GeneratorSpec::ExSeq { n } => {
                if *n < 1 {
                    return bad("need n >= 1".into());
                }
                Ok(())
            }
            GeneratorSpec::ExCollusion { n, k, alpha } => {
                if *n < 1 || *k < 1 || k > n {
                    return bad(format!("need 1 <= k <= n, got n = {n}, k = {k}"));
                }
                if *alpha < Rational::one() {
                    return bad(format!("need alpha >= 1, got {alpha}"));
                }
                Ok(())
            }
            GeneratorSpec::RandomExplicit { n, max_weight, .. } => {
                if *n < 1 || *max_weight < 1 {
                    return bad("need n >= 1 and max_weight >= 1".into());
                }
                Ok(())
            }
            GeneratorSpec::RandomSymmetric { n, copies, .. } => {
                if *n < 1 || *copies < 1 {
                    return bad("need n >= 1 and copies >= 1".into());
                }
                Ok(())
            }
        }
    }
}

fn int(v: u32) -> Rational {
    Rational::from_integer(v as i64)
}

fn ratio(a: u32, b: u32) -> Rational {
    Rational::new(a as i64, b as i64).expect("positive denominator")
}

fn player_ids(n: u32) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn generate(spec: &GeneratorSpec) -> Result<Instance> {
    spec.validate()?;
    let instance = match spec {
        GeneratorSpec::ExTrivial => ex_trivial(),
        GeneratorSpec::ExAsym { p, q } => ex_asym(*p, *q),
        GeneratorSpec::ExSym { p, q, n } => ex_sym(*p, *q, *n),
        GeneratorSpec::ExSeq { n } => ex_seq(*n),
        GeneratorSpec::ExCollusion { n, k, alpha } => ex_collusion(*n, *k, alpha),
        GeneratorSpec::RandomExplicit {
            n,
            items,
            max_weight,
            seed,
        } => random_explicit(*n, *items, *max_weight, *seed),
        GeneratorSpec::RandomSymmetric { n, copies, seed } => random_symmetric(*n, *copies, *seed),
    }?;
    let mut meta = serde_json::json!({ "generator": spec });
    if let Some(alpha) = spec.alpha() {
        meta["alpha"] = serde_json::Value::String(alpha.to_string());
    }
    Ok(instance.with_meta(meta))
}

fn ex_trivial() -> Result<Instance> {
    let items = vec![Item::new("1", int(1)), Item::new("2", int(1))];
    let players = vec![
        PlayerSpec::new(
            "1",
            FeasibilitySystem::explicit([ItemSet::singleton(0), ItemSet::singleton(1)]),
        ),
        PlayerSpec::new("2", FeasibilitySystem::explicit([ItemSet::singleton(1)])),
    ];
    Instance::new(items, players)
}

/// Items `P01..` then `Q01..`.
fn ex_asym(p: u32, q: u32) -> Result<Instance> {
    let mut items = Vec::new();
    for j in 1..=p {
        items.push(Item::new(format!("P{j:02}"), int(1)));
    }
    for j in 1..=q {
        items.push(Item::new(format!("Q{j:02}"), int(1)));
    }
    let windows: BTreeMap<usize, Window> = (0..items.len())
        .map(|i| {
            (
                i,
                Window {
                    release: Rational::zero(),
                    deadline: int(1),
                },
            )
        })
        .collect();
    let players = player_ids(q + 1)
        .into_iter()
        .enumerate()
        .map(|(i, id)| {
            let processing = (0..items.len())
                .map(|j| {
                    let t = if i == 0 {
                        ratio(1, p)
                    } else if j < p as usize {
                        int(2)
                    } else {
                        int(1)
                    };
                    ((0, j), t)
                })
                .collect();
            PlayerSpec::new(
                id.clone(),
                FeasibilitySystem::UnrelatedMachines {
                    machines: vec![format!("m{id}")],
                    processing,
                    windows: windows.clone(),
                },
            )
        })
        .collect();
    Instance::new(items, players)
}

fn shared_players(n: u32, base: FeasibilitySystem, copies: impl Fn(u32) -> usize) -> Vec<PlayerSpec> {
    let base = Arc::new(base);
    (1..=n)
        .map(|i| {
            PlayerSpec::new(
                i.to_string(),
                FeasibilitySystem::SharedSymmetric {
                    base: base.clone(),
                    copies: copies(i),
                },
            )
        })
        .collect()
}

/// Items `P01..` then `Q01..`.
fn ex_sym(p: u32, q: u32, n: u32) -> Result<Instance> {
    let q_count = q * (n - 1) + p;
    let mut items = Vec::new();
    let mut jobs = BTreeMap::new();
    for j in 1..n {
        jobs.insert(items.len(), Job::with_deadline(int(1), int(1)));
        items.push(Item::new(format!("P{j:02}"), int(p)));
    }
    for j in 1..=q_count {
        jobs.insert(items.len(), Job::with_deadline(ratio(1, q_count), int(1)));
        items.push(Item::new(format!("Q{j:02}"), int(1)));
    }
    Instance::new(items, shared_players(n, FeasibilitySystem::SingleMachine { jobs }, |_| 1))
}

/// Items `J{k}_{r}` for deadline `k` and copy `r`, deadline-major.
fn ex_seq(n: u32) -> Result<Instance> {
    let mut items = Vec::new();
    let mut jobs = BTreeMap::new();
    for k in 1..=n {
        for r in 1..=n {
            jobs.insert(items.len(), Job::with_deadline(int(1), int(k)));
            items.push(Item::new(format!("J{k:02}_{r:02}"), int(1)));
        }
    }
    Instance::new(items, shared_players(n, FeasibilitySystem::SingleMachine { jobs }, |_| 1))
}

fn ex_seq_item(n: u32, k: u32, r: u32) -> usize {
    ((k - 1) * n + (r - 1)) as usize
}

/// Items `x{i}_00` then `x{i}_{j}` for `j != i`, player-major.
fn ex_collusion(n: u32, k: u32, alpha: &Rational) -> Result<Instance> {
    let lump = Rational::from_integer((n - k) as i64)
        + Rational::from_integer((n - 1) as i64) * (alpha - &Rational::one());
    let mut items = Vec::new();
    let mut opt = vec![ItemSet::new(); n as usize];
    let mut eq = vec![ItemSet::new(); n as usize];
    for i in 1..=n {
        opt[(i - 1) as usize].insert(items.len());
        items.push(Item::new(format!("x{i:02}_00"), lump.clone()));
        for j in 1..=n {
            if i != j {
                opt[(i - 1) as usize].insert(items.len());
                eq[(j - 1) as usize].insert(items.len());
                items.push(Item::new(format!("x{i:02}_{j:02}"), int(1)));
            }
        }
    }
    let players = (0..n as usize)
        .map(|i| {
            PlayerSpec::new(
                (i + 1).to_string(),
                FeasibilitySystem::explicit([opt[i].clone(), eq[i].clone()]),
            )
        })
        .collect();
    Instance::new(items, players)
}

fn random_subset(rng: &mut ChaCha8Rng, m: u32) -> ItemSet {
    (0..m as usize).filter(|_| rng.gen_bool(0.5)).collect()
}

fn random_items(rng: &mut ChaCha8Rng, m: u32, max_weight: u32) -> Vec<Item> {
    (1..=m)
        .map(|j| Item::new(format!("j{j:02}"), int(rng.gen_range(1..=max_weight))))
        .collect()
}

/// Each player gets 1 to 3 random generator sets; its family is their
/// downward closure.
fn random_explicit(n: u32, m: u32, max_weight: u32, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let items = random_items(&mut rng, m, max_weight);
    let players = (1..=n)
        .map(|i| {
            let count = rng.gen_range(1..=3);
            let gens: Vec<ItemSet> = (0..count).map(|_| random_subset(&mut rng, m)).collect();
            PlayerSpec::new(i.to_string(), FeasibilitySystem::explicit_from_generators(gens))
        })
        .collect();
    Instance::new(items, players)
}

/// 2 to 5 items with weights in `1..=8`, a base family of 1 to 3 random
/// generators, and copy counts drawn from `1..=copies`.
fn random_symmetric(n: u32, copies: u32, seed: u64) -> Result<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.gen_range(2..=5);
    let items = random_items(&mut rng, m, 8);
    let count = rng.gen_range(1..=3);
    let gens: Vec<ItemSet> = (0..count).map(|_| random_subset(&mut rng, m)).collect();
    let base = FeasibilitySystem::explicit_from_generators(gens);
    let counts: Vec<usize> = (0..n).map(|_| rng.gen_range(1..=copies) as usize).collect();
    Instance::new(items, shared_players(n, base, |i| counts[(i - 1) as usize]))
}

/// The optimum and the bad equilibrium described by each construction.
pub fn reference_profiles(spec: &GeneratorSpec) -> Result<ReferenceProfiles> {
    spec.validate()?;
    let sets = |v: Vec<Vec<usize>>| Profile::new(v.into_iter().map(|s| s.into_iter().collect()).collect());
    Ok(match spec {
        GeneratorSpec::ExTrivial => ReferenceProfiles {
            opt: sets(vec![vec![0], vec![1]]),
            bad_equilibrium: sets(vec![vec![1], vec![]]),
        },
        GeneratorSpec::ExAsym { p, q } => {
            let (p, q) = (*p as usize, *q as usize);
            let mut opt = vec![(0..p).collect::<Vec<_>>()];
            opt.extend((0..q).map(|j| vec![p + j]));
            let mut bad = vec![(p..p + q).collect::<Vec<_>>()];
            bad.extend((0..q).map(|_| vec![]));
            ReferenceProfiles {
                opt: sets(opt),
                bad_equilibrium: sets(bad),
            }
        }
        GeneratorSpec::ExSym { p, q, n } => {
            let (p, q, n) = (*p as usize, *q as usize, *n as usize);
            let (q_count, q0) = (q * (n - 1) + p, n - 1);
            let mut opt = vec![(q0..q0 + q_count).collect::<Vec<_>>()];
            opt.extend((0..n - 1).map(|j| vec![j]));
            let bad = (0..n).map(|i| (q0 + i * q..q0 + (i + 1) * q).collect()).collect();
            ReferenceProfiles {
                opt: sets(opt),
                bad_equilibrium: sets(bad),
            }
        }
        GeneratorSpec::ExSeq { n } => {
            let opt = (1..=*n)
                .map(|r| (1..=*n).map(|k| ex_seq_item(*n, k, r)).collect())
                .collect();
            let instance = generate(spec)?;
            let bad = greedy_sequential_outcome(
                &instance,
                &PlayerOrder::identity(*n as usize),
                &Rational::one(),
                &DeadlineGreedySelector,
                &mut Budget::default(),
            )?;
            ReferenceProfiles {
                opt: sets(opt),
                bad_equilibrium: bad,
            }
        }
        GeneratorSpec::ExCollusion { .. } => {
            let instance = generate(spec)?;
            let parts: Vec<(ItemSet, ItemSet)> = (0..instance.player_count())
                .map(|p| match instance.system(p) {
                    FeasibilitySystem::Explicit { maximal_sets } => {
                        // Maximal sets are stored sorted; OPT_i holds the lump item.
                        let opt = maximal_sets
                            .iter()
                            .find(|s| s.iter().any(|i| instance.items()[i].id.ends_with("_00")))
                            .cloned()
                            .unwrap_or_default();
                        let eq = maximal_sets.iter().find(|s| **s != opt).cloned().unwrap_or_default();
                        (opt, eq)
                    }
                    _ => unreachable!("ex_collusion players are explicit"),
                })
                .collect();
            ReferenceProfiles {
                opt: Profile::new(parts.iter().map(|(o, _)| o.clone()).collect()),
                bad_equilibrium: Profile::new(parts.into_iter().map(|(_, e)| e).collect()),
            }
        }
        GeneratorSpec::RandomExplicit { .. } | GeneratorSpec::RandomSymmetric { .. } => {
            return Err(Error::Unsupported(format!(
                "{} has no reference profiles",
                spec.family()
            )))
        }
    })
}

/// `count` random explicit instances with `n <= 3`, `|J| <= 6` and weights
/// in `1..=8`, reproducible from `seed`.
pub fn random_corpus(count: usize, seed: u64) -> Result<Vec<(GeneratorSpec, Instance)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let spec = GeneratorSpec::RandomExplicit {
                n: rng.gen_range(1..=3),
                items: rng.gen_range(1..=6),
                max_weight: 8,
                seed: rng.gen(),
            };
            let instance = generate(&spec)?;
            Ok((spec, instance))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equilibria::{verify_collusion, verify_nash};
    use crate::feasibility::validate_downward_closed;
    use crate::metrics::compute_opt;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    fn paper_specs() -> Vec<GeneratorSpec> {
        vec![
            GeneratorSpec::ExTrivial,
            GeneratorSpec::ExAsym { p: 3, q: 2 },
            GeneratorSpec::ExAsym { p: 1, q: 1 },
            GeneratorSpec::ExSym { p: 3, q: 2, n: 3 },
            GeneratorSpec::ExSym { p: 2, q: 1, n: 4 },
            GeneratorSpec::ExSeq { n: 3 },
            GeneratorSpec::ExCollusion {
                n: 3,
                k: 2,
                alpha: r(1, 1),
            },
            GeneratorSpec::ExCollusion {
                n: 3,
                k: 2,
                alpha: r(3, 2),
            },
        ]
    }

    #[test]
    fn sizes() {
        let asym = generate(&GeneratorSpec::ExAsym { p: 3, q: 2 }).unwrap();
        assert_eq!((asym.player_count(), asym.item_count()), (3, 5));
        let seq = generate(&GeneratorSpec::ExSeq { n: 5 }).unwrap();
        assert_eq!(seq.item_count(), 25);
        assert!(seq.is_symmetric());
        let sym = generate(&GeneratorSpec::ExSym { p: 3, q: 2, n: 3 }).unwrap();
        assert_eq!(sym.item_count(), 3 + 3 * 2);
        let c = generate(&GeneratorSpec::ExCollusion {
            n: 3,
            k: 2,
            alpha: r(1, 1),
        })
        .unwrap();
        assert_eq!(c.item_count(), 9);
        assert_eq!(c.items()[0].id, "x01_00");
    }

    #[test]
    fn reference_welfare() {
        let mut b = Budget::default();
        let check = |spec: GeneratorSpec, opt: i64, bad: i64, b: &mut Budget| {
            let inst = generate(&spec).unwrap();
            let refs = reference_profiles(&spec).unwrap();
            assert_eq!(inst.welfare(&refs.opt).unwrap(), r(opt, 1), "{}", spec.label());
            assert_eq!(inst.welfare(&refs.bad_equilibrium).unwrap(), r(bad, 1), "{}", spec.label());
            assert_eq!(compute_opt(&inst, b).unwrap().1, r(opt, 1), "{}", spec.label());
        };
        check(GeneratorSpec::ExTrivial, 2, 1, &mut b);
        check(GeneratorSpec::ExAsym { p: 3, q: 2 }, 5, 2, &mut b);
        check(GeneratorSpec::ExSym { p: 3, q: 2, n: 3 }, 13, 6, &mut b);
        check(GeneratorSpec::ExSeq { n: 5 }, 25, 18, &mut b);
        check(
            GeneratorSpec::ExCollusion {
                n: 3,
                k: 2,
                alpha: r(1, 1),
            },
            9,
            6,
            &mut b,
        );
    }

    #[test]
    fn paper_instances_are_well_formed() {
        for spec in paper_specs() {
            let inst = generate(&spec).unwrap();
            let refs = reference_profiles(&spec).unwrap();
            for p in 0..inst.player_count() {
                assert!(validate_downward_closed(inst.system(p), 64, 3).ok, "{}", spec.label());
            }
            assert!(inst.validate_profile(&refs.opt).is_empty(), "{}", spec.label());
            assert!(inst.validate_profile(&refs.bad_equilibrium).is_empty(), "{}", spec.label());
        }
    }

    #[test]
    fn bad_profiles_are_equilibria() {
        let mut b = Budget::default();
        for spec in paper_specs() {
            let inst = generate(&spec).unwrap();
            let alpha = spec.alpha().unwrap();
            let bad = reference_profiles(&spec).unwrap().bad_equilibrium;
            let report = match &spec {
                GeneratorSpec::ExCollusion { k, .. } => {
                    verify_collusion(&inst, &bad, *k as usize, &alpha, &mut b).unwrap()
                }
                _ => verify_nash(&inst, &bad, &alpha, &mut b).unwrap(),
            };
            assert!(report.verdict, "{}: {:?}", spec.label(), report.witness);
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(generate(&GeneratorSpec::ExAsym { p: 1, q: 2 }).is_err());
        assert!(generate(&GeneratorSpec::ExSym { p: 2, q: 0, n: 2 }).is_err());
        assert!(generate(&GeneratorSpec::ExSeq { n: 0 }).is_err());
        assert!(generate(&GeneratorSpec::ExCollusion {
            n: 2,
            k: 3,
            alpha: r(1, 1)
        })
        .is_err());
        let random = GeneratorSpec::RandomExplicit {
            n: 2,
            items: 3,
            max_weight: 4,
            seed: 1,
        };
        assert!(matches!(reference_profiles(&random), Err(Error::Unsupported(_))));
    }

    #[test]
    fn seeds_reproduce() {
        let spec = GeneratorSpec::RandomExplicit {
            n: 3,
            items: 6,
            max_weight: 8,
            seed: 42,
        };
        assert_eq!(generate(&spec).unwrap(), generate(&spec).unwrap());
        let sym = GeneratorSpec::RandomSymmetric {
            n: 3,
            copies: 2,
            seed: 9,
        };
        let inst = generate(&sym).unwrap();
        assert_eq!(inst, generate(&sym).unwrap());
        assert!(inst.is_symmetric());
        let a: Vec<_> = random_corpus(20, 5).unwrap().into_iter().map(|(s, _)| s).collect();
        let b: Vec<_> = random_corpus(20, 5).unwrap().into_iter().map(|(s, _)| s).collect();
        assert_eq!(a, b);
    }

    #[test]
    fn spec_serializes_with_family_tag() {
        let spec = GeneratorSpec::ExCollusion {
            n: 3,
            k: 2,
            alpha: r(3, 2),
        };
        let json = serde_json::to_value(&spec).unwrap();
        assert_eq!(json["family"], "ex_collusion");
        assert_eq!(json["alpha"], "3/2");
        let back: GeneratorSpec = serde_json::from_value(json).unwrap();
        assert_eq!(back, spec);
    }
}
