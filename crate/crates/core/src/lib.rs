//! Divorce dynamics for stable marriage instances with ties and incomplete
//! preference lists.
//!
//! A *b-interchange* lets a blocking pair `{u, w}` marry while their former
//! partners marry each other. This crate models instances and matchings,
//! applies b-interchanges, searches the divorce graph for a reachable stable
//! matching, and builds the gadget reduction from Independent Set together
//! with its constructive certificate.
//!
//! The crate is `no_std` and only needs `alloc`. Parsing, file formats,
//! wall-clock budgets and the command-line tool live in the `divorce` crate.
//!
//! ```
//! use divorce_core::{dynamics, fixtures};
//!
//! let inst = fixtures::example1();
//! let m0 = fixtures::example1_m0(&inst);
//! let blocking = dynamics::blocking_pairs(&inst, &m0);
//! assert_eq!(blocking.len(), 2);
//!
//! let next = dynamics::apply_b_interchange(&inst, &m0, blocking[0]).unwrap();
//! assert!(dynamics::is_stable(&inst, &next));
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod dynamics;
pub mod explorer;
pub mod fixtures;
pub mod graph;
pub mod matching;
pub mod model;
pub mod oracles;
pub mod random;
pub mod reduction;

pub use dynamics::{Infeasible, InterchangeRule};
pub use explorer::{Budget, SearchVerdict, VerdictKind};
pub use matching::{CanonicalKey, Matching, PairSet};
pub use model::{AgentId, Comparison, Instance, InstanceBuilder, ModelError, Pair, PreferenceList, Side};
