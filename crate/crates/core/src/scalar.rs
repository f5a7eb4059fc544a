use std::fmt::{Debug, Display};

use num_integer::Integer;
use num_traits::{FromPrimitive, Signed, ToPrimitive};

/// Exact integer ring elements the linear algebra is generic over.
///
/// Implemented for the builtin signed integers and for `BigInt`. Only the
/// arbitrary-precision instantiation is safe against pivot growth; the
/// fixed-width ones are there for small, bounded inputs and tests.
pub trait Scalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
    fn from_u64_lossless(v: u64) -> Self {
        Self::from_u64(v).expect("value fits the scalar type")
    }

    fn from_i128_lossless(v: i128) -> Self {
        Self::from_i128(v).expect("value fits the scalar type")
    }

    /// Least nonnegative residue modulo `m` as a `u64`.
    fn residue(&self, m: u64) -> u64 {
        let m = Self::from_u64_lossless(m);
        self.mod_floor(&m).to_u64().expect("residue fits u64")
    }
}

impl<T> Scalar for T where
    T: Integer + Signed + Clone + Debug + Display + FromPrimitive + ToPrimitive + Send + Sync
{
}
