//! Discreteness of two-generator subgroups `⟨f, g⟩` of `PSL(2,C)` with
//! parabolic `g` and real parameters, together with fundamental polyhedra
//! and orbifold presentations of the discrete ones.

pub mod discreteness;
pub mod error;
pub mod geometry;
pub mod moebius;
pub mod order;
pub mod presentation;
pub mod rp;
pub mod word;

pub use discreteness::{decide, decide_from_generators, decide_real, Config, Verdict, VerdictTag, Witness, WitnessReason};
pub use geometry::{build_planes, build_polyhedron, Plane, PlaneRelation, PolyhedronT};
pub use error::{Error, Result};
pub use moebius::{classify, AntiMoebius, BoundaryPoint, Complex, ElementClass, Moebius, SpacePoint};
pub use order::{ExtendedOrder, POrder};
pub use presentation::{presentation_for, Family, OrbifoldPresentation, Relator};
pub use rp::{check_scope, params, RpTriple, ScopeReport, ScopeVerdict, Triple};
pub use word::{Letter, Word};
