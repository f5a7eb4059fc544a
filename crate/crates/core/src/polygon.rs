//! Polygon tuples `[a_0, ..., a_{k-1}]` modulo `n`.
//!
//! A tuple is either *geometric* (the literal angle numerators of a planar
//! polygon with angles `a_i * pi / n`) or *algebraic* (residues whose sum is
//! `0 mod n`). Geometric tuples keep their literal values; algebraic tuples
//! are stored as least nonnegative residues.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{gcd, gcd_all, mod_inv, mul_mod, units};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Geometric,
    Algebraic,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolygonError {
    #[error("empty tuple")]
    Empty,
    #[error("modulus must be at least 1")]
    ZeroModulus,
    #[error("a geometric polygon needs k >= 3 entries, got {0}")]
    KTooSmall(usize),
    #[error("entry sum {sum} does not match the required {expected}")]
    SumMismatch { sum: u64, expected: String },
    #[error("entry a_{index} = {value} is outside (0, 2n) \\ {{n}}")]
    EntryOutOfRange { index: usize, value: u64 },
    #[error("gcd(a_0, ..., a_(k-1), n) = {0}, expected 1")]
    GcdNotOne(u64),
    #[error("all entries vanish modulo n")]
    AllZero,
    #[error("{c} is not a unit modulo {n}")]
    CNotUnit { c: u64, n: u64 },
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
}

/// A validated k-tuple with its modulus.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PolygonTuple {
    entries: Vec<u64>,
    modulus: u64,
    level: Level,
}

impl PolygonTuple {
    /// Validates `entries` against the requested level.
    ///
    /// Algebraic tuples are reduced modulo `n`; geometric tuples are kept as
    /// given. The first violated clause is reported.
    pub fn new(entries: Vec<u64>, n: u64, level: Level) -> Result<Self, PolygonError> {
        if entries.is_empty() {
            return Err(PolygonError::Empty);
        }
        if n == 0 {
            return Err(PolygonError::ZeroModulus);
        }
        let k = entries.len();
        match level {
            Level::Geometric => {
                if k < 3 {
                    return Err(PolygonError::KTooSmall(k));
                }
                if let Some((index, &value)) = entries
                    .iter()
                    .enumerate()
                    .find(|(_, &a)| a == 0 || a >= 2 * n || a == n)
                {
                    return Err(PolygonError::EntryOutOfRange { index, value });
                }
                let sum: u64 = entries.iter().sum();
                let expected = (k as u64 - 2) * n;
                if sum != expected {
                    return Err(PolygonError::SumMismatch {
                        sum,
                        expected: expected.to_string(),
                    });
                }
                let g = gcd(gcd_all(entries.iter().copied()), n);
                if g != 1 {
                    return Err(PolygonError::GcdNotOne(g));
                }
                Ok(Self {
                    entries,
                    modulus: n,
                    level,
                })
            }
            Level::Algebraic => {
                let reduced: Vec<u64> = entries.iter().map(|a| a % n).collect();
                let sum = reduced.iter().fold(0u64, |s, &a| (s + a) % n);
                if sum != 0 {
                    return Err(PolygonError::SumMismatch {
                        sum: entries.iter().sum(),
                        expected: format!("0 mod {n}"),
                    });
                }
                if n > 1 && reduced.iter().all(|&a| a == 0) {
                    return Err(PolygonError::AllZero);
                }
                let g = gcd(gcd_all(reduced.iter().copied()), n);
                if g != 1 {
                    return Err(PolygonError::GcdNotOne(g));
                }
                Ok(Self {
                    entries: reduced,
                    modulus: n,
                    level,
                })
            }
        }
    }

    pub fn geometric(entries: Vec<u64>, n: u64) -> Result<Self, PolygonError> {
        Self::new(entries, n, Level::Geometric)
    }

    pub fn algebraic(entries: Vec<u64>, n: u64) -> Result<Self, PolygonError> {
        Self::new(entries, n, Level::Algebraic)
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn k(&self) -> usize {
        self.entries.len()
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn residues(&self) -> Vec<u64> {
        self.entries.iter().map(|a| a % self.modulus).collect()
    }

    /// The algebraic tuple with the same residues.
    pub fn to_algebraic(&self) -> PolygonTuple {
        PolygonTuple {
            entries: self.residues(),
            modulus: self.modulus,
            level: Level::Algebraic,
        }
    }

    pub fn has_zero_residue(&self) -> bool {
        self.entries.iter().any(|a| a % self.modulus == 0)
    }

    /// Entrywise multiplication by a unit `c`, reduced modulo `n`.
    pub fn scale_associate(&self, c: u64) -> Result<PolygonTuple, PolygonError> {
        let n = self.modulus;
        if gcd(c % n, n) != 1 {
            return Err(PolygonError::CNotUnit { c, n });
        }
        let entries = self.entries.iter().map(|&a| mul_mod(a, c, n)).collect();
        Ok(PolygonTuple {
            entries,
            modulus: n,
            level: Level::Algebraic,
        })
    }

    /// A geometric tuple associate to `self`, when one exists.
    ///
    /// The reduced residues are used as-is when they already sum to at most
    /// `(k-2)n`; otherwise they are scaled so the entry of smallest
    /// `gcd(a_i, n)` (lowest index on ties) becomes that gcd. Afterwards
    /// `n` is added to the lowest-index entries until the sum reaches
    /// `(k-2)n`.
    pub fn find_geometric_associate(&self) -> Option<PolygonTuple> {
        let n = self.modulus;
        let k = self.k();
        if k < 3 || n < 2 {
            return None;
        }
        // Geometric entries lie in (0, 2n) \ {n}, so a zero residue can never
        // be lifted, whatever unit it is scaled by.
        if self.has_zero_residue() {
            return None;
        }
        let target = (k as u64 - 2) * n;
        let residues = self.residues();
        let scaled = if residues.iter().sum::<u64>() <= target {
            residues
        } else {
            let (min_idx, min_gcd) = residues
                .iter()
                .enumerate()
                .map(|(i, &a)| (i, gcd(a, n)))
                .min_by_key(|&(i, g)| (g, i))
                .expect("k >= 3");
            // c * a_j = g (mod n) is solvable with c a unit: a_j = g * u, u a unit mod n/g,
            // and units of Z/(n/g) lift to units of Z/n.
            let c = unit_sending(residues[min_idx], min_gcd, n);
            residues.iter().map(|&a| mul_mod(a, c, n)).collect()
        };
        lift_to_geometric(scaled, n)
    }

    /// A convex geometric associate (all entries in `(0, p)`) for a prime
    /// modulus `p >= k - 1` and no zero residues.
    pub fn find_convex_associate(&self) -> Result<Option<PolygonTuple>, PolygonError> {
        let p = self.modulus;
        let k = self.k() as u64;
        if !crate::arith::is_prime(p) {
            return Err(PolygonError::PreconditionFailed(format!("modulus {p} is not prime")));
        }
        if k < 3 || p + 1 < k {
            return Err(PolygonError::PreconditionFailed(format!(
                "need k >= 3 and p >= k - 1, got k = {k}, p = {p}"
            )));
        }
        if self.has_zero_residue() {
            return Err(PolygonError::PreconditionFailed("some entry is 0 mod p".into()));
        }
        let residues = self.residues();
        let target = (k - 2) * p;
        let multiple = residues.iter().sum::<u64>() / p;
        let mut candidates = Vec::new();
        if let Some(inv) = mod_inv(multiple % p, p) {
            candidates.push(mul_mod(inv, (k - 2) % p, p));
        }
        // The scaling above only fixes the sum modulo p^2; fall back to the
        // remaining units when it misses (k-2)p exactly.
        candidates.extend(units(p));
        for c in candidates {
            if c == 0 {
                continue;
            }
            let b: Vec<u64> = residues.iter().map(|&a| mul_mod(a, c, p)).collect();
            if b.iter().sum::<u64>() == target {
                return Ok(Some(
                    PolygonTuple::geometric(b, p).expect("convex associate is geometric"),
                ));
            }
        }
        Ok(None)
    }
}

fn unit_sending(a: u64, g: u64, n: u64) -> u64 {
    units(n)
        .into_iter()
        .find(|&c| mul_mod(a, c, n) == g % n)
        .expect("a unit multiple of a reaches gcd(a, n)")
}

fn lift_to_geometric(mut residues: Vec<u64>, n: u64) -> Option<PolygonTuple> {
    let k = residues.len() as u64;
    let target = (k - 2) * n;
    let sum: u64 = residues.iter().sum();
    if sum > target || (target - sum) % n != 0 {
        return None;
    }
    let mut missing = (target - sum) / n;
    for a in residues.iter_mut() {
        if missing == 0 {
            break;
        }
        if *a < n {
            *a += n;
            missing -= 1;
        }
    }
    if missing != 0 {
        return None;
    }
    PolygonTuple::geometric(residues, n).ok()
}

impl fmt::Display for PolygonTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "] mod {}", self.modulus)
    }
}

/// Wire form: `{"n":5,"entries":[2,2,2,4]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TupleJson {
    pub n: u64,
    pub entries: Vec<u64>,
}

impl From<&PolygonTuple> for TupleJson {
    fn from(t: &PolygonTuple) -> Self {
        TupleJson {
            n: t.modulus,
            entries: t.entries.clone(),
        }
    }
}

impl Serialize for PolygonTuple {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TupleJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolygonTuple {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = TupleJson::deserialize(d)?;
        PolygonTuple::geometric(raw.entries.clone(), raw.n)
            .or_else(|_| PolygonTuple::algebraic(raw.entries, raw.n))
            .map_err(serde::de::Error::custom)
    }
}

/// Every geometric k-gon modulo `n`, in lexicographic order.
pub fn enumerate_geometric(k: usize, n: u64) -> Vec<PolygonTuple> {
    let mut out = Vec::new();
    if k < 3 || n == 0 {
        return out;
    }
    let target = (k as u64 - 2) * n;
    let mut current = Vec::with_capacity(k);
    fn rec(k: usize, n: u64, remaining: u64, current: &mut Vec<u64>, out: &mut Vec<PolygonTuple>) {
        let left = k - current.len();
        if left == 1 {
            let a = remaining;
            if a > 0 && a < 2 * n && a != n {
                current.push(a);
                if let Ok(t) = PolygonTuple::geometric(current.clone(), n) {
                    out.push(t);
                }
                current.pop();
            }
            return;
        }
        let max_rest = (left as u64 - 1) * (2 * n - 1);
        for a in 1..2 * n {
            if a == n {
                continue;
            }
            if a > remaining {
                break;
            }
            // the remaining entries are each at least 1 and at most 2n-1
            if remaining - a < left as u64 - 1 || remaining - a > max_rest {
                continue;
            }
            current.push(a);
            rec(k, n, remaining - a, current, out);
            current.pop();
        }
    }
    rec(k, n, target, &mut current, &mut out);
    out
}

/// Every algebraic k-gon modulo `n` (entries as residues), in lexicographic order.
pub fn enumerate_algebraic(k: usize, n: u64) -> Vec<PolygonTuple> {
    let mut out = Vec::new();
    if k == 0 || n == 0 {
        return out;
    }
    let mut digits = vec![0u64; k - 1];
    loop {
        let partial = digits.iter().fold(0u64, |s, &a| (s + a) % n);
        let mut entries = digits.clone();
        entries.push((n - partial) % n);
        if let Ok(t) = PolygonTuple::algebraic(entries, n) {
            out.push(t);
        }
        // odometer, last digit fastest
        let mut i = k - 1;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < n {
                break;
            }
            digits[i] = 0;
        }
    }
}
