//! Small-integer number theory used throughout the crate.
//!
//! Moduli and residues live in `u64`; anything that can grow (matrix
//! entries, determinants) goes through [`crate::Int`] instead.

use num_integer::Integer;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn gcd_all<I: IntoIterator<Item = u64>>(values: I) -> u64 {
    values.into_iter().fold(0, gcd)
}

/// Least nonnegative residue of a signed value.
pub fn reduce(value: i128, n: u64) -> u64 {
    value.rem_euclid(n as i128) as u64
}

pub fn mul_mod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, n: u64) -> u64 {
    if n == 1 {
        return 0;
    }
    let mut acc = 1 % n;
    base %= n;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, n);
        }
        base = mul_mod(base, base, n);
        exp >>= 1;
    }
    acc
}

/// Inverse of `a` modulo `n`, if it exists.
pub fn mod_inv(a: u64, n: u64) -> Option<u64> {
    if n == 1 {
        return Some(0);
    }
    let e = (a as i128).extended_gcd(&(n as i128));
    if e.gcd != 1 {
        return None;
    }
    Some(reduce(e.x, n))
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as `(prime, exponent)` pairs in increasing prime order.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            small.push(d);
            if d != n / d {
                large.push(n / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Units of `Z/nZ` in increasing order.
pub fn units(n: u64) -> Vec<u64> {
    (1..n).filter(|&c| gcd(c, n) == 1).collect()
}

/// Smallest generator of `F_p^x`.
pub fn primitive_root(p: u64) -> u64 {
    if p == 2 {
        return 1;
    }
    let order = p - 1;
    let prime_divisors: Vec<u64> = factorize(order).into_iter().map(|(q, _)| q).collect();
    (2..p)
        .find(|&g| prime_divisors.iter().all(|&q| pow_mod(g, order / q, p) != 1))
        .expect("F_p^x is cyclic")
}

/// The unique `x` in `[0, n1*n2)` with `x = a (mod n1)` and `x = b (mod n2)`.
/// Requires `gcd(n1, n2) = 1`.
pub fn crt_pair(a: u64, n1: u64, b: u64, n2: u64) -> u64 {
    let inv = mod_inv(n1 % n2, n2).expect("coprime moduli");
    let n = n1 * n2;
    // x = a + n1 * ((b - a) * n1^{-1} mod n2)
    let diff = reduce(b as i128 - a as i128, n2);
    let t = mul_mod(diff, inv, n2);
    (a % n1 + n1 * t) % n
}

/// Exponent of the prime `p` in `n` (n > 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    let mut e = 0;
    while n % p == 0 {
        n /= p;
        e += 1;
    }
    e
}
