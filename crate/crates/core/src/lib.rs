//! Set packing games: exact data model, feasibility oracles, best responses,
//! equilibrium verification and enumeration, centralized optima, and
//! price-of-anarchy measurements against closed-form bounds.

pub mod best_response;
pub mod bounds;
pub mod budget;
pub mod document;
pub mod equilibria;
pub mod error;
pub mod factory;
pub mod feasibility;
pub mod itemset;
pub mod metrics;
pub mod model;
pub mod rational;
pub mod registry;
pub mod report;

pub use budget::{Budget, DEFAULT_NODE_BUDGET};
pub use error::{Error, Result};
pub use itemset::{ItemIdx, ItemSet};
pub use rational::Rational;
pub use model::{Instance, Item, Payoff, PlayerSpec, Profile, Violation};
