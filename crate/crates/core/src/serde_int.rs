//! JSON encodings for arbitrary-precision integers: plain numbers while they
//! fit 64 bits, decimal strings beyond that.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use serde::de::{self, Visitor};
use serde::{Deserializer, Serializer};

struct IntVisitor;

impl<'de> Visitor<'de> for IntVisitor {
    type Value = BigInt;

    fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
        f.write_str("an integer or a decimal string")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_i128<E: de::Error>(self, v: i128) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_u128<E: de::Error>(self, v: u128) -> Result<BigInt, E> {
        Ok(BigInt::from(v))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<BigInt, E> {
        BigInt::from_str(v).map_err(E::custom)
    }
}

fn write_int<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
    if let Some(x) = v.to_i64() {
        s.serialize_i64(x)
    } else if let Some(x) = v.to_u64() {
        s.serialize_u64(x)
    } else {
        s.serialize_str(&v.to_string())
    }
}

pub mod big_int {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        write_int(v, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        d.deserialize_any(IntVisitor)
    }
}

pub mod big_uint {
    use super::*;

    pub fn serialize<S: Serializer>(v: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        write_int(&BigInt::from(v.clone()), s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let v = d.deserialize_any(IntVisitor)?;
        v.to_biguint()
            .ok_or_else(|| de::Error::custom("expected a nonnegative integer"))
    }
}

/// A single integer cell, for use inside containers.
pub struct Cell(pub BigInt);

impl serde::Serialize for Cell {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        write_int(&self.0, s)
    }
}

impl<'de> serde::Deserialize<'de> for Cell {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Cell, D::Error> {
        d.deserialize_any(IntVisitor).map(Cell)
    }
}

/// A flat list of big integers.
pub mod big_int_list {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
        let cells: Vec<Cell> = v.iter().cloned().map(Cell).collect();
        cells.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
        let cells: Vec<Cell> = Vec::deserialize(d)?;
        Ok(cells.into_iter().map(|c| c.0).collect())
    }
}

/// Rows of big integers, e.g. matrices.
pub mod big_int_rows {
    use super::*;
    use serde::{Deserialize, Serialize};

    pub fn serialize<S: Serializer>(rows: &[Vec<BigInt>], s: S) -> Result<S::Ok, S::Error> {
        let cells: Vec<Vec<Cell>> = rows
            .iter()
            .map(|r| r.iter().cloned().map(Cell).collect())
            .collect();
        cells.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<BigInt>>, D::Error> {
        let rows: Vec<Vec<Cell>> = Vec::deserialize(d)?;
        Ok(rows
            .into_iter()
            .map(|r| r.into_iter().map(|c| c.0).collect())
            .collect())
    }
}
