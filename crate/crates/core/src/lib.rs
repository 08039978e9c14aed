//! Exact Kazhdan–Lusztig and Z-polynomials of Dowling geometries `Q_n(G)`.
//!
//! The crate has three independent routes to the same numbers:
//!
//! * [`klengine::dowling_pz`]: a recursion in `Z[q]` over flat-type counts;
//! * [`klengine::pz_from_lattice`]: the defining recursion run on an explicit
//!   lattice of flats built for a concrete group ([`dowling::DowlingLattice`]);
//! * [`qsp::weighted_counts`]: enumeration of quasi series-parallel matroids
//!   weighted by `q^{n - c(M)}`, together with the exponential generating
//!   functions of [`genfun`].
//!
//! [`rootcheck`] holds Bezout matrices, total-positivity certificates and
//! Sturm sequences for the real-rootedness checks.

pub mod algebra;
pub mod dowling;
pub mod genfun;
pub mod group;
pub mod klengine;
pub mod lattice;
pub mod matroid;
pub mod par;
pub mod qsp;
pub mod rootcheck;

pub use algebra::{AlgebraError, QPoly, QRat, TQPoly};
pub use group::{FiniteGroup, GroupSpec};
pub use klengine::{dowling_pz, pz_from_lattice, PZResult};
pub use lattice::GradedLattice;
pub use matroid::Matroid;
pub use par::Exec;
