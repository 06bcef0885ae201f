//! Square-tiled surfaces (origamis): exhaustive enumeration of the covering
//! set of a stratum at a given degree, decomposition into `SL(2, Z)` orbits,
//! and exact invariants per orbit (counts, cylinder weights, slopes,
//! hyperelliptic and spin labels), plus the stratum constants that relate
//! slopes to Siegel–Veech constants and Lyapunov sums.

pub mod census;
pub mod cli;
pub mod limits;
pub mod orbits;
pub mod origami;
pub mod perm;
pub mod rational;
pub mod spin;
pub mod unionfind;

pub use census::Census;
pub use orbits::ComponentSummary;
pub use origami::{CanonicalKey, InvolutionReport, Origami, StratumSignature};
pub use perm::{CycleType, Permutation};
pub use rational::Rational;
