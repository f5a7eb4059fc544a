//! Finite abelian groups given as products of cyclic groups.

use crate::arith::{factorize, valuation};

/// Canonical invariant factors of `C_{m_1} x ... x C_{m_r}`.
///
/// Output is descending with each factor dividing the previous one; trivial
/// factors are dropped. Zero orders are not allowed.
pub fn invariant_factors(orders: &[u64]) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::new();
    for &m in orders {
        assert!(m > 0, "cyclic factor of order 0");
        for (p, _) in factorize(m) {
            if !primes.contains(&p) {
                primes.push(p);
            }
        }
    }
    primes.sort_unstable();
    let per_prime: Vec<(u64, Vec<u32>)> = primes
        .into_iter()
        .map(|p| {
            let mut exps: Vec<u32> = orders
                .iter()
                .map(|&m| valuation(m, p))
                .filter(|&e| e > 0)
                .collect();
            exps.sort_unstable_by(|a, b| b.cmp(a));
            (p, exps)
        })
        .collect();
    from_elementary(&per_prime)
}

/// Assembles invariant factors from per-prime exponent lists (each sorted
/// descending).
pub fn from_elementary(per_prime: &[(u64, Vec<u32>)]) -> Vec<u64> {
    let len = per_prime.iter().map(|(_, e)| e.len()).max().unwrap_or(0);
    (0..len)
        .map(|t| {
            per_prime
                .iter()
                .map(|(p, exps)| p.pow(exps.get(t).copied().unwrap_or(0)))
                .product()
        })
        .collect()
}

/// Invariant factors of the direct product of two groups.
pub fn merge(a: &[u64], b: &[u64]) -> Vec<u64> {
    let all: Vec<u64> = a.iter().chain(b).copied().collect();
    invariant_factors(&all)
}

/// `N / qN` for `N` with the given invariant factors.
pub fn quotient_by_multiple(factors: &[u64], q: u64) -> Vec<u64> {
    let reduced: Vec<u64> = factors.iter().map(|&d| crate::arith::gcd(d, q)).collect();
    invariant_factors(&reduced)
}

pub fn order(factors: &[u64]) -> u128 {
    factors.iter().map(|&d| d as u128).product()
}
