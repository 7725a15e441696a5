//! Integral Value Transformations (IVT) over base-p digits and a static
//! routing scheme built on them.
//!
//! An IVT rule is a digit map `f: {0..p-1} → {0..p-1}`. Applying it to a
//! non-negative integer maps every base-p digit through `f`. When `f` is a
//! single p-cycle the transform drives every integer to 0 and each integer
//! `N ≥ 1` has an explicit p-th pre-image `φ(N)`. Those two facts give a
//! network in which every node forwards to `IVT(address)` and node pairs
//! `(M, φ(M))` share a route suffix.
//!
//! Modules, bottom-up:
//!
//! * [`padic`]: canonical digit strings.
//! * [`rule`]: rule tables, classification, census.
//! * [`engine`]: apply, iterate, trajectories.
//! * [`preimage`]: the `φ` construction.
//! * [`topology`]: network synthesis, validation, canonical form, export.
//! * [`routing`]: cached hop-by-hop routing simulation.

pub mod engine;
pub mod error;
pub mod padic;
pub mod preimage;
pub mod routing;
pub mod rule;
pub mod topology;

mod decimal;

pub use engine::{apply, iterate_k, trajectory, Trajectory};
pub use error::{Error, Result};
pub use padic::{DigitString, Radix};
pub use preimage::{phi, phi_k, verify_phi, PreimageCase, PreimageResult};
pub use routing::{simulate, CacheTable, MessageTrace, Scenario, SimulationReport};
pub use rule::{census, classify, decode_rule, encode_rule, enumerate_class, Census, ClassFilter, RuleClass, RuleTable};
pub use topology::{build_network, DesignParams, NetworkDesign, NetworkNode, NodePair};

pub use num_bigint::BigUint;
