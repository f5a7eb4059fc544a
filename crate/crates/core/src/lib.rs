//! Monodromy groups of billiard flows on rational polygons, computed from
//! circulant matrices of angle tuples, plus constructions of tuples with a
//! prescribed group.

pub mod abelian;
pub mod arith;
pub mod construct;
pub mod exactla;
pub mod monodromy;
pub mod oracle;
pub mod polyfp;
pub mod polygon;
pub mod scalar;
pub mod serde_int;

pub use construct::{ClassificationReport, ConstructError};
pub use exactla::{circulant, minor_gcd, rank_mod_p, smith_normal_form, LinalgError, Matrix, Snf};
pub use monodromy::{group_of, GroupDescriptor, MonodromyError};
pub use polyfp::{FpPoly, PolyError};
pub use polygon::{Level, PolygonError, PolygonTuple};
pub use scalar::Scalar;

/// Arbitrary-precision integer used for all exact computations.
pub type Int = num_bigint::BigInt;
/// Integer matrix over [`Int`].
pub type IntMatrix = Matrix<Int>;
/// Smith normal form over [`Int`].
pub type SnfResult = Snf<Int>;
