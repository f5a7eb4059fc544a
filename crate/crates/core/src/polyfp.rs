//! Dense polynomials over the prime field `F_p`, factorization of
//! `x^k - 1`, and the zero-gap toolkit used to build tuples with no zero
//! entries.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::arith::{gcd, is_prime, mod_inv, mul_mod, pow_mod};
use crate::polygon::PolygonTuple;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("modulus {0} is not prime")]
    ModulusNotPrime(u64),
    #[error("gcd(0, 0) is undefined")]
    BothZero,
    #[error("the zero polynomial has no zero-run length")]
    ZeroPolynomial,
    #[error("degree {degree} exceeds k - 1 = {max}")]
    DegreeTooLarge { degree: usize, max: usize },
    #[error("{0} divides k")]
    PDividesK(u64),
    #[error("no admissible root left to close the zero gap")]
    NotEnoughAlphas,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("polynomials live over different fields")]
    FieldMismatch,
}

/// Polynomial over `F_p`; `coeffs[i]` is the coefficient of `x^i`, with no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FpPoly {
    p: u64,
    coeffs: Vec<u64>,
}

impl FpPoly {
    pub fn new(p: u64, coeffs: Vec<u64>) -> Self {
        let mut coeffs: Vec<u64> = coeffs.into_iter().map(|c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        FpPoly { p, coeffs }
    }

    /// Coefficients may be negative; they are reduced into `[0, p)`.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        Self::new(p, coeffs.iter().map(|&c| c.rem_euclid(p as i64) as u64).collect())
    }

    pub fn zero(p: u64) -> Self {
        FpPoly { p, coeffs: Vec::new() }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        Self::new(p, vec![c])
    }

    pub fn monomial(p: u64, degree: usize, c: u64) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Self::new(p, coeffs)
    }

    pub fn x(p: u64) -> Self {
        Self::monomial(p, 1, 1)
    }

    /// `x - alpha`.
    pub fn linear(p: u64, alpha: u64) -> Self {
        Self::new(p, vec![(p - alpha % p) % p, 1])
    }

    /// `x^k - 1`.
    pub fn x_pow_minus_one(p: u64, k: usize) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[0] = p - 1;
        coeffs[k] = 1;
        Self::new(p, coeffs)
    }

    /// The associated polynomial `a_0 + a_1 x + ... + a_{k-1} x^{k-1}`.
    pub fn from_tuple(t: &PolygonTuple) -> Result<Self, PolyError> {
        let p = t.modulus();
        if !is_prime(p) {
            return Err(PolyError::ModulusNotPrime(p));
        }
        Ok(Self::new(p, t.entries().to_vec()))
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `x^i` (zero past the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| (mul_mod(acc, x, self.p) + c) % self.p)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_inv(self.leading(), self.p).expect("nonzero leading coefficient");
        self.scale(inv)
    }

    pub fn scale(&self, c: u64) -> Self {
        Self::new(self.p, self.coeffs.iter().map(|&a| mul_mod(a, c, self.p)).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..len).map(|i| (self.coeff(i) + other.coeff(i)) % self.p).collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new(
            self.p,
            (0..len)
                .map(|i| (self.coeff(i) + self.p - other.coeff(i)) % self.p)
                .collect(),
        )
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mul_mod(a, b, self.p)) % self.p;
            }
        }
        Self::new(self.p, out)
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::constant(self.p, 1);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let inv = mod_inv(divisor.leading(), self.p).expect("field");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(self.p), self.clone());
        }
        let mut quot = vec![0u64; rem.len() - dd];
        for i in (dd..rem.len()).rev() {
            let c = mul_mod(rem[i], inv, self.p);
            if c == 0 {
                continue;
            }
            quot[i - dd] = c;
            for (j, &b) in divisor.coeffs.iter().enumerate() {
                let idx = i - dd + j;
                rem[idx] = (rem[idx] + self.p - mul_mod(c, b, self.p)) % self.p;
            }
        }
        (Self::new(self.p, quot), Self::new(self.p, rem))
    }

    pub fn rem(&self, divisor: &Self) -> Self {
        self.div_rem(divisor).1
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.rem(self).is_zero()
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.p,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| mul_mod(c, i as u64 % self.p, self.p))
                .collect(),
        )
    }

    /// `self^e mod modulus` for an arbitrary-size exponent.
    pub fn pow_mod(&self, e: &BigUint, modulus: &Self) -> Self {
        let mut acc = Self::constant(self.p, 1).rem(modulus);
        let base = self.rem(modulus);
        for bit in (0..e.bits()).rev() {
            acc = acc.mul(&acc).rem(modulus);
            if e.bit(bit) {
                acc = acc.mul(&base).rem(modulus);
            }
        }
        acc
    }

    /// Roots in `F_p`, ascending.
    pub fn roots(&self) -> Vec<u64> {
        (0..self.p).filter(|&x| self.eval(x) == 0).collect()
    }

    /// Text form `4*x^3+2*x^2+2*x+2 (mod 5)`.
    pub fn to_text(&self) -> String {
        format!("{} (mod {})", self.expr(), self.p)
    }

    fn expr(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms = Vec::new();
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            let term = match (i, c) {
                (0, c) => c.to_string(),
                (1, 1) => "x".to_string(),
                (1, c) => format!("{c}*x"),
                (i, 1) => format!("x^{i}"),
                (i, c) => format!("{c}*x^{i}"),
            };
            terms.push(term);
        }
        terms.join("+")
    }
}

impl fmt::Display for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.expr())
    }
}

impl fmt::Debug for FpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl PartialOrd for FpPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Degree first, then coefficients from the constant term up.
impl Ord for FpPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.coeffs.len(), &self.coeffs).cmp(&(other.p, other.coeffs.len(), &other.coeffs))
    }
}

/// Monic gcd.
pub fn gcd_poly(f: &FpPoly, g: &FpPoly) -> Result<FpPoly, PolyError> {
    if f.p != g.p {
        return Err(PolyError::FieldMismatch);
    }
    if f.is_zero() && g.is_zero() {
        return Err(PolyError::BothZero);
    }
    let (mut a, mut b) = (f.clone(), g.clone());
    while !b.is_zero() {
        let r = a.rem(&b);
        a = b;
        b = r;
    }
    Ok(a.monic())
}

/// Longest run of zero coefficients among indices `0..=deg f`.
pub fn w_function(f: &FpPoly) -> Result<usize, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut best = 0;
    let mut run = 0;
    for &c in f.coeffs() {
        if c == 0 {
            run += 1;
            best = best.max(run);
        } else {
            run = 0;
        }
    }
    Ok(best)
}

/// `x f(x) - a_{k-1} (x^k - 1)`; keeps the degree below `k` and preserves
/// the gcd with `x^k - 1`.
pub fn rotate(f: &FpPoly, k: usize) -> Result<FpPoly, PolyError> {
    if let Some(d) = f.degree() {
        if d + 1 > k {
            return Err(PolyError::DegreeTooLarge { degree: d, max: k.saturating_sub(1) });
        }
    }
    let top = f.coeff(k - 1);
    let shifted = f.mul(&FpPoly::x(f.p));
    Ok(shifted.sub(&FpPoly::x_pow_minus_one(f.p, k).scale(top)))
}

/// Multiplies `f` by `x - alpha` for the smallest nonzero `alpha` outside
/// `forbidden` that differs from every ratio `a_{j-1} / a_j`.
///
/// Such an `alpha` lowers the longest zero run by one (or keeps it at 0).
pub fn close_zero_gap(f: &FpPoly, forbidden: &BTreeSet<u64>) -> Result<(u64, FpPoly), PolyError> {
    let p = f.p;
    let deg = f.degree().ok_or(PolyError::ZeroPolynomial)?;
    if f.coeff(0) == 0 {
        return Err(PolyError::PreconditionFailed("f(0) = 0".into()));
    }
    let ratios: BTreeSet<u64> = (1..=deg)
        .filter(|&j| f.coeff(j) != 0)
        .map(|j| mul_mod(f.coeff(j - 1), mod_inv(f.coeff(j), p).expect("field"), p))
        .collect();
    let alpha = (1..p)
        .find(|a| !forbidden.contains(a) && !ratios.contains(a))
        .ok_or(PolyError::NotEnoughAlphas)?;
    Ok((alpha, f.mul(&FpPoly::linear(p, alpha))))
}

/// Sizes of the orbits of `j -> p j` on `Z/kZ`, ascending.
pub fn coset_degrees(k: usize, p: u64) -> Result<Vec<usize>, PolyError> {
    if gcd(p, k as u64) != 1 {
        return Err(PolyError::PDividesK(p));
    }
    let k64 = k as u64;
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for start in 0..k {
        if seen[start] {
            continue;
        }
        let mut j = start as u64;
        let mut size = 0;
        while !seen[j as usize] {
            seen[j as usize] = true;
            size += 1;
            j = mul_mod(j, p, k64);
        }
        out.push(size);
    }
    out.sort_unstable();
    Ok(out)
}

/// Complete factorization of `x^k - 1` over `F_p` as (monic irreducible,
/// multiplicity), sorted by degree then coefficients.
pub fn factor_xk_minus_1(k: usize, p: u64) -> Result<Vec<(FpPoly, u32)>, PolyError> {
    if !is_prime(p) {
        return Err(PolyError::ModulusNotPrime(p));
    }
    if k == 0 {
        return Ok(Vec::new());
    }
    Ok(factor(&FpPoly::x_pow_minus_one(p, k)))
}

/// Factorization of a nonzero polynomial into monic irreducibles.
pub fn factor(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let mut out: Vec<(FpPoly, u32)> = Vec::new();
    for (sqfree, mult) in squarefree_decomposition(&f.monic()) {
        for (part, d) in distinct_degree(&sqfree) {
            for irreducible in equal_degree(&part, d) {
                match out.iter_mut().find(|(g, _)| *g == irreducible) {
                    Some((_, m)) => *m += mult,
                    None => out.push((irreducible, mult)),
                }
            }
        }
    }
    out.sort();
    out
}

/// `f = prod g_i^i` with each `g_i` squarefree, for monic `f`.
pub fn squarefree_decomposition(f: &FpPoly) -> Vec<(FpPoly, u32)> {
    let p = f.p;
    let mut out = Vec::new();
    if f.degree().unwrap_or(0) == 0 {
        return out;
    }
    let fp = f.derivative();
    let mut c = gcd_poly(f, &fp).expect("f nonzero");
    let mut w = f.div_rem(&c).0;
    let mut i = 1u32;
    while !w.is_one() {
        let y = gcd_poly(&w, &c).expect("w nonzero");
        let fac = w.div_rem(&y).0;
        if fac.degree().unwrap_or(0) > 0 {
            out.push((fac.monic(), i));
        }
        w = y;
        c = c.div_rem(&w).0;
        i += 1;
    }
    if !c.is_one() {
        // c is a p-th power: only exponents divisible by p survive
        let root = FpPoly::new(p, c.coeffs().iter().step_by(p as usize).copied().collect());
        for (g, m) in squarefree_decomposition(&root.monic()) {
            out.push((g, m * p as u32));
        }
    }
    out
}

/// Splits a squarefree monic polynomial into products of irreducibles of a
/// single degree: `(product, degree)`.
pub fn distinct_degree(f: &FpPoly) -> Vec<(FpPoly, usize)> {
    let p = f.p;
    let mut out = Vec::new();
    let mut rest = f.monic();
    let x = FpPoly::x(p);
    let mut h = x.rem(&rest);
    let mut d = 1;
    while rest.degree().unwrap_or(0) >= 2 * d {
        h = h.pow_mod(&BigUint::from(p), &rest);
        let g = gcd_poly(&rest, &h.sub(&x)).expect("rest nonzero");
        if !g.is_one() {
            out.push((g.clone(), d));
            rest = rest.div_rem(&g).0;
            h = h.rem(&rest);
        }
        d += 1;
    }
    if let Some(deg) = rest.degree() {
        if deg > 0 {
            out.push((rest.monic(), deg));
        }
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree `d`.
///
/// Trial polynomials are enumerated deterministically (base-p digits of a
/// counter) instead of drawn at random.
pub fn equal_degree(f: &FpPoly, d: usize) -> Vec<FpPoly> {
    let p = f.p;
    let deg = f.degree().expect("nonzero");
    if deg == d {
        return vec![f.monic()];
    }
    let exponent = (BigUint::from(p).pow(d as u32) - BigUint::one()) / BigUint::from(2u32);
    let mut counter: u64 = p; // skip the constants
    loop {
        let trial = trial_poly(p, counter, deg);
        counter += 1;
        let u = if p == 2 {
            // absolute trace of F_{2^d} -> F_2
            let mut acc = FpPoly::zero(2);
            let mut t = trial.rem(f);
            for _ in 0..d {
                acc = acc.add(&t);
                t = t.mul(&t).rem(f);
            }
            acc
        } else {
            trial.pow_mod(&exponent, f).sub(&FpPoly::constant(p, 1))
        };
        if u.is_zero() {
            continue;
        }
        let g = gcd_poly(f, &u).expect("f nonzero");
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < deg {
            let mut parts = equal_degree(&g, d);
            parts.extend(equal_degree(&f.div_rem(&g).0, d));
            return parts;
        }
    }
}

fn trial_poly(p: u64, mut counter: u64, max_len: usize) -> FpPoly {
    let mut coeffs = Vec::new();
    while counter > 0 && coeffs.len() < max_len {
        coeffs.push(counter % p);
        counter /= p;
    }
    FpPoly::new(p, coeffs)
}

/// Whether `f` is irreducible: no factor of degree `<= deg/2` via
/// `gcd(f, x^{p^i} - x)`.
pub fn is_irreducible(f: &FpPoly) -> bool {
    let Some(deg) = f.degree() else {
        return false;
    };
    if deg == 0 {
        return false;
    }
    let x = FpPoly::x(f.p);
    let mut h = x.rem(f);
    for _ in 1..=deg / 2 {
        h = h.pow_mod(&BigUint::from(f.p), f);
        if !gcd_poly(f, &h.sub(&x)).expect("nonzero").is_one() {
            return false;
        }
    }
    true
}

/// `x^{p^e} mod f`, used to double check irreducibility degrees.
pub fn frobenius_power(f: &FpPoly, e: usize) -> FpPoly {
    let mut h = FpPoly::x(f.p).rem(f);
    for _ in 0..e {
        h = h.pow_mod(&BigUint::from(f.p), f);
    }
    h
}

/// Roots of unity in `F_p` of order dividing `k`.
pub fn roots_of_unity(k: usize, p: u64) -> Vec<u64> {
    (1..p).filter(|&x| pow_mod(x, k as u64, p) == 1).collect()
}
