//! Monodromy group descriptors `N x| C_k` and the routes that compute them.
//!
//! The general route diagonalizes the circulant over the integers; the
//! closed forms for triangles, quadrilaterals and regular polygons are kept
//! separate so they can be checked against it.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::invariant_factors;
use crate::exactla::{circulant, smith_normal_form};
use crate::polygon::{PolygonError, PolygonTuple};
use crate::{Int, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MonodromyError {
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error("closed form disagrees with the Smith normal form route: {0}")]
    ClosedFormMismatch(String),
}

/// Isomorphism data of `N x| C_k` with `N = C_{delta_1} x ... x C_{delta_r}`.
///
/// Equality compares `(n, k, deltas)` only; the action flag is reported
/// separately.
#[derive(Debug, Clone, Eq, Serialize, Deserialize)]
pub struct GroupDescriptor {
    n: u64,
    k: usize,
    deltas: Vec<u64>,
    #[serde(with = "crate::serde_int::big_uint")]
    order: BigUint,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trivial_action: Option<bool>,
}

impl PartialEq for GroupDescriptor {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.k == other.k && self.deltas == other.deltas
    }
}

impl std::hash::Hash for GroupDescriptor {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        (self.n, self.k, &self.deltas).hash(state);
    }
}

impl PartialOrd for GroupDescriptor {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GroupDescriptor {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.n, self.k, &self.deltas).cmp(&(other.n, other.k, &other.deltas))
    }
}

impl GroupDescriptor {
    /// Builds a descriptor from any list of cyclic factor orders.
    pub fn new(n: u64, k: usize, cyclic_orders: &[u64]) -> Self {
        let deltas = invariant_factors(cyclic_orders);
        let order = deltas
            .iter()
            .fold(BigUint::from(k), |acc, &d| acc * BigUint::from(d));
        Self {
            n,
            k,
            deltas,
            order,
            trivial_action: None,
        }
    }

    pub fn with_trivial_action(mut self, trivial: bool) -> Self {
        self.trivial_action = Some(trivial);
        self
    }

    /// `C_p^{rank} x| C_k`.
    pub fn elementary(p: u64, rank: usize, k: usize) -> Self {
        Self::new(p, k, &vec![p; rank])
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn deltas(&self) -> &[u64] {
        &self.deltas
    }

    pub fn order(&self) -> &BigUint {
        &self.order
    }

    pub fn normal_order(&self) -> BigUint {
        self.deltas.iter().map(|&d| BigUint::from(d)).product()
    }

    pub fn trivial_action(&self) -> Option<bool> {
        self.trivial_action
    }

    /// `C_{delta_1} x ... x C_{delta_r}` without the rotation factor.
    pub fn normal_subgroup_string(&self) -> String {
        match self.deltas.len() {
            0 => "1".to_string(),
            1 => format!("C{}", self.deltas[0]),
            _ => {
                let parts: Vec<String> = self.deltas.iter().map(|d| format!("C{d}")).collect();
                format!("({})", parts.join(" x "))
            }
        }
    }
}

impl fmt::Display for GroupDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} : C{}", self.normal_subgroup_string(), self.k)
    }
}

/// `delta_i = n / gcd(d_i, n)` for the elementary divisors `d_i` of the
/// circulant.
pub fn deltas_from_divisors(divisors: &[Int], n: u64) -> Vec<u64> {
    let nn = Int::from(n);
    let orders: Vec<u64> = divisors
        .iter()
        .map(|d| {
            let g = d.gcd(&nn).to_u64().expect("gcd with n fits u64");
            n / g
        })
        .collect();
    invariant_factors(&orders)
}

/// Monodromy group via the Smith normal form of the circulant.
pub fn group_of(t: &PolygonTuple) -> GroupDescriptor {
    let c: IntMatrix = circulant(t);
    let snf = smith_normal_form(&c);
    let deltas = deltas_from_divisors(&snf.divisors, t.modulus());
    GroupDescriptor::new(t.modulus(), t.k(), &deltas).with_trivial_action(action_is_trivial(t))
}

/// The rotation acts on `N` by cyclically shifting coordinates; the shift
/// fixes every column of the circulant iff all residues coincide.
pub fn action_is_trivial(t: &PolygonTuple) -> bool {
    let r = t.residues();
    r.iter().all(|&a| a == r[0])
}

/// `(C_n x C_{n/alpha}) x| C_3` with `alpha = gcd(n, a0*a2 - a1^2)`.
pub fn triangle_closed_form(a0: u64, a1: u64, a2: u64, n: u64) -> Result<GroupDescriptor, MonodromyError> {
    let t = PolygonTuple::algebraic(vec![a0, a1, a2], n)?;
    let alpha = triangle_alpha(a0, a1, a2, n);
    Ok(GroupDescriptor::new(n, 3, &[n, n / alpha]).with_trivial_action(action_is_trivial(&t)))
}

pub fn triangle_alpha(a0: u64, a1: u64, a2: u64, n: u64) -> u64 {
    let v = a0 as i128 * a2 as i128 - a1 as i128 * a1 as i128;
    (v.unsigned_abs() as u64 % n).gcd(&n)
}

/// Quadrilateral closed form from the 2x2 minors and the 3x3 block
/// determinant, evaluated over the integers with `a3` replaced by
/// `-a0 - a1 - a2`.
pub fn quadrilateral_closed_form(
    a0: u64,
    a1: u64,
    a2: u64,
    a3: u64,
    n: u64,
) -> Result<GroupDescriptor, MonodromyError> {
    let t = PolygonTuple::algebraic(vec![a0, a1, a2, a3], n)?;
    let (d2, d3) = quadrilateral_divisors(a0, a1, a2, n);
    Ok(GroupDescriptor::new(n, 4, &[n, n / d2, n / d3]).with_trivial_action(action_is_trivial(&t)))
}

/// `(d_2, d_3)` of the quadrilateral formula, each already reduced by gcd with `n`.
pub fn quadrilateral_divisors(a0: u64, a1: u64, a2: u64, n: u64) -> (u64, u64) {
    let (b0, b1, b2) = (BigInt::from(a0), BigInt::from(a1), BigInt::from(a2));
    let b3 = -(&b0 + &b1 + &b2);
    let minors = [
        &b0 * &b2 - &b3 * &b3,
        &b0 * &b1 - &b2 * &b3,
        &b0 * &b0 - &b2 * &b2,
        &b1 * &b3 - &b2 * &b2,
        &b0 * &b3 - &b1 * &b2,
        &b0 * &b2 - &b1 * &b1,
    ];
    let g2 = minors.iter().fold(BigInt::zero(), |g, m| g.gcd(m));
    let nn = BigInt::from(n);
    let to_u64 = |x: BigInt| x.to_u64().expect("gcd with n fits u64");
    let d2 = to_u64(g2.gcd(&nn));
    if g2.is_zero() || d2 == n {
        return (n, n);
    }
    let det = -(&b0 + &b2) * ((&b0 + &b1).pow(2) + (&b1 + &b2).pow(2));
    // det = d~_1 d~_2 d~_3 and g2 = d~_1 d~_2, so the division is exact
    debug_assert!((&det % &g2).is_zero());
    let g3 = (det / &g2).abs();
    let d3 = if g3.is_zero() { n } else { to_u64(g3.gcd(&nn)) };
    (d2, d3)
}

/// The tuple of the regular k-gon.
pub fn regular_kgon_tuple(k: usize) -> Result<PolygonTuple, PolygonError> {
    if k < 3 {
        return Err(PolygonError::KTooSmall(k));
    }
    let k64 = k as u64;
    if k % 2 == 1 {
        PolygonTuple::geometric(vec![k64 - 2; k], k64)
    } else {
        PolygonTuple::geometric(vec![(k64 - 2) / 2; k], k64 / 2)
    }
}

/// Monodromy group of the regular k-gon, checked against `C_{k/gcd(k,2)} x C_k`.
pub fn regular_kgon(k: usize) -> Result<GroupDescriptor, MonodromyError> {
    let t = regular_kgon_tuple(k)?;
    let g = group_of(&t);
    let expected_n = (k / k.gcd(&2)) as u64;
    let expected = GroupDescriptor::new(t.modulus(), k, &[expected_n]);
    if g.trivial_action() != Some(true) {
        return Err(MonodromyError::ClosedFormMismatch(format!(
            "regular {k}-gon has a nontrivial action"
        )));
    }
    if g != expected {
        return Err(MonodromyError::ClosedFormMismatch(format!(
            "regular {k}-gon: got {g}, expected {expected}"
        )));
    }
    Ok(g)
}

/// Elementary divisors reduced modulo `n`, i.e. the SNF route without the
/// group bookkeeping. Handy for reporting.
pub fn divisors_of(t: &PolygonTuple) -> Vec<Int> {
    let c: IntMatrix = circulant(t);
    smith_normal_form(&c).divisors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alg(v: &[u64], n: u64) -> PolygonTuple {
        PolygonTuple::algebraic(v.to_vec(), n).unwrap()
    }

    #[test]
    fn worked_examples() {
        let g = group_of(&alg(&[2, 2, 2, 4], 5));
        assert_eq!(g.deltas(), &[5, 5, 5]);
        assert_eq!(g.order(), &BigUint::from(500u32));
        assert_eq!(g.to_string(), "(C5 x C5 x C5) : C4");
        assert_eq!(g.trivial_action(), Some(false));
        assert_eq!(group_of(&alg(&[1, 2, 4], 7)).deltas(), &[7]);
        assert_eq!(group_of(&alg(&[1, 2, 24, 23], 25)).deltas(), &[25, 5]);
        // entry 2 is the CRT of 4 mod 7 and 3 mod 5; with 8 the sum is off
        assert!(PolygonTuple::algebraic(vec![22, 23, 8, 22, 2, 18, 8, 2, 32, 8, 23, 32], 35).is_err());
        let twelve = alg(&[22, 23, 18, 22, 2, 18, 8, 2, 32, 8, 23, 32], 35);
        let g = group_of(&twelve);
        assert_eq!((g.deltas(), g.k()), (&[35u64, 5][..], 12));
    }

    #[test]
    fn triangle_examples() {
        assert_eq!(triangle_closed_form(1, 1, 4, 6).unwrap().deltas(), &[6, 2]);
        assert_eq!(triangle_closed_form(4, 5, 1, 10).unwrap().deltas(), &[10, 10]);
        assert_eq!(triangle_closed_form(1, 1, 79, 81).unwrap().deltas(), &[81, 27]);
        assert_eq!(triangle_closed_form(1, 1, 1, 3).unwrap().deltas(), &[3]);
    }

    #[test]
    fn triangle_statement_and_proof_versions_agree() {
        for n in 2..30u64 {
            for t in crate::polygon::enumerate_algebraic(3, n) {
                let a = t.entries();
                let proof = triangle_alpha(a[0], a[1], a[2], n);
                let v = a[0] as i128 * a[1] as i128 - a[2] as i128 * a[2] as i128;
                let statement = (v.rem_euclid(n as i128) as u64).gcd(&n);
                assert_eq!(proof, statement, "{t}");
            }
        }
    }

    #[test]
    fn quadrilateral_examples() {
        assert_eq!(quadrilateral_divisors(2, 2, 2, 5), (1, 1));
        assert_eq!(quadrilateral_closed_form(2, 2, 2, 4, 5).unwrap().deltas(), &[5, 5, 5]);
        assert_eq!(quadrilateral_closed_form(1, 4, 4, 1, 5).unwrap().deltas(), &[5, 5]);
        assert_eq!(quadrilateral_closed_form(1, 2, 24, 23, 25).unwrap().deltas(), &[25, 5]);
    }

    #[test]
    fn regular_polygons() {
        let g3 = regular_kgon(3).unwrap();
        assert_eq!((g3.deltas(), g3.order().clone()), (&[3u64][..], BigUint::from(9u32)));
        assert_eq!(regular_kgon(4).unwrap().deltas(), &[2]);
        assert_eq!(regular_kgon(6).unwrap().deltas(), &[3]);
        for k in 3..20 {
            regular_kgon(k).unwrap();
        }
        assert!(regular_kgon(2).is_err());
    }

    #[test]
    fn json_schema() {
        let g = GroupDescriptor::new(5, 4, &[5, 5, 5]);
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"n":5,"k":4,"deltas":[5,5,5],"order":500}"#
        );
        let big = GroupDescriptor::elementary(41, 16, 17);
        let s = serde_json::to_string(&big).unwrap();
        let back: GroupDescriptor = serde_json::from_str(&s).unwrap();
        assert_eq!(back.order(), big.order());
        assert_eq!(serde_json::to_string(&back).unwrap(), s);
    }
}
