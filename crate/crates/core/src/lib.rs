//! Combinatorics of B-orbits on G/H for strongly solvable spherical subgroups H ⊆ B.

pub mod bitset;
pub mod catalog;
pub mod knop;
pub mod linalg;
pub mod orbits;
pub mod polytope;
pub mod rootsys;
pub mod spec;
pub mod weak;

pub use bitset::{ClassSet, RootSet};
pub use knop::{knop_check, max_rank_reduction, orbit_count, pi_subsystem, BoundReport, KnopError, PiSubsystem};
pub use linalg::Q;
pub use orbits::{EngineError, ExtendedPair, OrbitEngine, OrbitId, OrbitRecord, PAlphaCase, PAlphaDecomposition, Stabilizer, WeakOrderGraph};
pub use polytope::{EmbeddingReport, PolytopeError, PolytopeModel, Subpolytope};
pub use rootsys::{build_root_system, Budget, Root, RootSystem, RootSystemError, WeylElement, WeylGroup};
pub use spec::{ActiveRootSpec, SpecError, SpecFile, ValidationReport, Violation};
pub use weak::{SubsetData, SubsystemI, TorbitAction, WeakError, WeakRootTable};
