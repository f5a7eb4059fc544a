//! Building tuples with prescribed groups: CRT combination, projection and
//! lifting of algebraic tuples, the prime-modulus classification with
//! explicit witnesses, the triangle classification, and the composite
//! feasibility search.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian::{invariant_factors, quotient_by_multiple};
use crate::arith::{crt_pair, divisors, factorize, gcd, is_prime, primitive_root};
use crate::exactla::span_orders_mod_prime_power;
use crate::monodromy::{group_of, triangle_alpha, GroupDescriptor};
use crate::polyfp::{close_zero_gap, factor_xk_minus_1, FpPoly, PolyError};
use crate::polygon::{PolygonError, PolygonTuple};

/// Largest `q^k` enumerated per prime power by [`composite_feasible`].
pub const DEFAULT_COMPOSITE_CAP: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructError {
    #[error("moduli {0} and {1} are not coprime")]
    ModuliNotCoprime(u64, u64),
    #[error("tuple lengths differ: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(u64),
    #[error("{n1} is not a proper factor of {n}")]
    BadFactorization { n: u64, n1: u64 },
    #[error("{ell} is not a multiple of {k}")]
    NotMultiple { k: usize, ell: usize },
    #[error("side counts {0} and {1} are not coprime")]
    KNotCoprime(usize, usize),
    #[error("d = {d} is not achievable for k = {k}, p = {p}")]
    DNotAchievable { k: usize, p: u64, d: usize },
    #[error("constructed tuple failed verification: {0}")]
    InternalVerificationFailed(String),
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("n = {0} is too small; need n >= 3")]
    NTooSmall(u64),
    #[error("search space {size} exceeds the cap {cap} at modulus {modulus}")]
    CapExceeded { modulus: u64, size: u64, cap: u64 },
    #[error("infeasible{}: {reason}", prime_power.map(|q| format!(" modulo {q}")).unwrap_or_default())]
    Infeasible { prime_power: Option<u64>, reason: String },
    #[error("no witness found for {0}")]
    WitnessNotFound(String),
    #[error(transparent)]
    Polygon(#[from] PolygonError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Entrywise CRT: `c_i = a_i mod n1`, `c_i = b_i mod n2`.
pub fn combine_crt(t1: &PolygonTuple, t2: &PolygonTuple) -> Result<PolygonTuple, ConstructError> {
    let (n1, n2) = (t1.modulus(), t2.modulus());
    for n in [n1, n2] {
        if n < 2 {
            return Err(ConstructError::ModulusTooSmall(n));
        }
    }
    if t1.k() != t2.k() {
        return Err(ConstructError::LengthMismatch(t1.k(), t2.k()));
    }
    if gcd(n1, n2) != 1 {
        return Err(ConstructError::ModuliNotCoprime(n1, n2));
    }
    let entries = t1
        .residues()
        .into_iter()
        .zip(t2.residues())
        .map(|(a, b)| crt_pair(a, n1, b, n2))
        .collect();
    Ok(PolygonTuple::algebraic(entries, n1 * n2)?)
}

/// Entrywise reduction modulo a proper factor `n1` of the modulus.
pub fn project(t: &PolygonTuple, n1: u64) -> Result<PolygonTuple, ConstructError> {
    let n = t.modulus();
    if n1 < 2 || n1 >= n || n % n1 != 0 {
        return Err(ConstructError::BadFactorization { n, n1 });
    }
    Ok(PolygonTuple::algebraic(t.entries().iter().map(|a| a % n1).collect(), n1)?)
}

/// Repeats the pattern `ell / k` times.
pub fn lift(t: &PolygonTuple, ell: usize) -> Result<PolygonTuple, ConstructError> {
    let k = t.k();
    if ell == 0 || ell % k != 0 {
        return Err(ConstructError::NotMultiple { k, ell });
    }
    let entries = t.residues().into_iter().cycle().take(ell).collect();
    Ok(PolygonTuple::algebraic(entries, t.modulus())?)
}

/// Lifts a `k`-gon and an `ell`-gon with coprime side counts to `k * ell`
/// sides and combines them.
pub fn combine_coprime_k(t1: &PolygonTuple, t2: &PolygonTuple) -> Result<PolygonTuple, ConstructError> {
    let (k, ell) = (t1.k(), t2.k());
    if k < 2 || ell < 2 {
        return Err(ConstructError::PreconditionFailed("both tuples need at least 2 entries".into()));
    }
    if gcd(k as u64, ell as u64) != 1 {
        return Err(ConstructError::KNotCoprime(k, ell));
    }
    combine_crt(&lift(t1, k * ell)?, &lift(t2, k * ell)?)
}

fn check_prime_k(k: usize, p: u64) -> Result<(), ConstructError> {
    if !is_prime(p) {
        return Err(PolyError::ModulusNotPrime(p).into());
    }
    if k as u64 % p == 0 {
        return Err(PolyError::PDividesK(p).into());
    }
    Ok(())
}

/// Factors of `x^k - 1` split into `x - 1` and the rest (sorted).
fn split_factors(k: usize, p: u64) -> Result<(FpPoly, Vec<FpPoly>), ConstructError> {
    let one = FpPoly::linear(p, 1);
    let others = factor_xk_minus_1(k, p)?
        .into_iter()
        .map(|(g, _)| g)
        .filter(|g| *g != one)
        .collect();
    Ok((one, others))
}

/// Every `d = deg gcd(f, x^k - 1)` reachable by an algebraic `k`-gon mod `p`:
/// one plus a subset sum of the degrees of the factors other than `x - 1`,
/// with the full factor set left out.
pub fn achievable_d_set(k: usize, p: u64) -> Result<BTreeSet<usize>, ConstructError> {
    check_prime_k(k, p)?;
    let (_, others) = split_factors(k, p)?;
    let mut sums = BTreeSet::from([0usize]);
    for g in &others {
        let deg = g.degree().expect("nonconstant");
        let shifted: Vec<usize> = sums.iter().map(|s| s + deg).collect();
        sums.extend(shifted);
    }
    Ok(sums.into_iter().map(|s| s + 1).filter(|&d| d < k).collect())
}

/// Subsets of `degrees` summing to `target`, in lexicographic order of
/// inclusion (earlier factors preferred), at most `limit` of them.
fn subsets_with_sum(degrees: &[usize], target: usize, limit: usize) -> Vec<Vec<usize>> {
    // reach[i] = sums attainable from degrees[i..]
    let mut reach = vec![BTreeSet::from([0usize]); degrees.len() + 1];
    for i in (0..degrees.len()).rev() {
        let mut next = reach[i + 1].clone();
        next.extend(reach[i + 1].iter().map(|s| s + degrees[i]));
        reach[i] = next;
    }
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    fn walk(
        i: usize,
        left: usize,
        degrees: &[usize],
        reach: &[BTreeSet<usize>],
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
        limit: usize,
    ) {
        if out.len() >= limit || !reach[i].contains(&left) {
            return;
        }
        if left == 0 {
            out.push(chosen.clone());
            return;
        }
        if degrees[i] <= left {
            chosen.push(i);
            walk(i + 1, left - degrees[i], degrees, reach, chosen, out, limit);
            chosen.pop();
        }
        walk(i + 1, left, degrees, reach, chosen, out, limit);
    }
    walk(0, target, degrees, &reach, &mut chosen, &mut out, limit);
    out
}

fn roots_in_field(f: &FpPoly) -> BTreeSet<u64> {
    f.roots().into_iter().collect()
}

/// Applies `close_zero_gap` `times` times.
fn close_gaps(mut f: FpPoly, times: usize, forbidden: &BTreeSet<u64>) -> Result<FpPoly, PolyError> {
    for _ in 0..times {
        f = close_zero_gap(&f, forbidden)?.1;
    }
    Ok(f)
}

fn poly_to_tuple(f: &FpPoly, k: usize) -> Result<PolygonTuple, PolygonError> {
    PolygonTuple::algebraic((0..k).map(|i| f.coeff(i)).collect(), f.p())
}

/// Geometric associate of the coefficient tuple of `f`, checked to have
/// group `C_p^{k-d} x| C_k`.
fn finish(f: &FpPoly, k: usize, p: u64, d: usize) -> Result<PolygonTuple, ConstructError> {
    let alg = poly_to_tuple(f, k)?;
    let geo = alg
        .find_geometric_associate()
        .ok_or_else(|| ConstructError::InternalVerificationFailed(format!("{alg} has no geometric associate")))?;
    let got = group_of(&geo);
    let want = GroupDescriptor::elementary(p, k - d, k);
    if got != want {
        return Err(ConstructError::InternalVerificationFailed(format!(
            "{geo} has group {got}, expected {want}"
        )));
    }
    Ok(geo)
}

/// A geometric `k`-gon mod the prime `p > k` with group `C_p^{k-d} x| C_k`.
pub fn construct_prime_case(k: usize, p: u64, d: usize) -> Result<PolygonTuple, ConstructError> {
    if k < 3 || !is_prime(p) || p <= k as u64 {
        return Err(ConstructError::PreconditionFailed(format!(
            "need a prime p > k >= 3, got k = {k}, p = {p}"
        )));
    }
    if !achievable_d_set(k, p)?.contains(&d) {
        return Err(ConstructError::DNotAchievable { k, p, d });
    }
    if p == k as u64 + 1 {
        construct_field_of_size_k_plus_1(k, p, d)
    } else {
        construct_by_rank(k, p, d)
    }
}

/// `g` = product of chosen factors (including `x - 1`) of degree `d`, padded
/// to degree `k - 1` by gap-closing roots that avoid the other factors.
fn construct_by_rank(k: usize, p: u64, d: usize) -> Result<PolygonTuple, ConstructError> {
    let (one, others) = split_factors(k, p)?;
    let degrees: Vec<usize> = others.iter().map(|g| g.degree().expect("nonconstant")).collect();
    let xk = FpPoly::x_pow_minus_one(p, k);
    let mut last_err = None;
    for subset in subsets_with_sum(&degrees, d - 1, 64) {
        let g = subset.iter().fold(one.clone(), |acc, &i| acc.mul(&others[i]));
        let forbidden = roots_in_field(&xk.div_rem(&g).0);
        let attempt = close_gaps(g, k - d - 1, &forbidden)
            .map_err(ConstructError::from)
            .and_then(|f| finish(&f, k, p, d));
        match attempt {
            Ok(t) => return Ok(t),
            Err(e) => last_err = Some(e),
        }
    }
    Err(last_err.unwrap_or(ConstructError::DNotAchievable { k, p, d }))
}

/// `p = k + 1`: every unit of `F_p` is a root of `x^k - 1`.
fn construct_field_of_size_k_plus_1(k: usize, p: u64, d: usize) -> Result<PolygonTuple, ConstructError> {
    let half = k / 2;
    let f = if k % d == 0 {
        // (x^d - 1)^{k/d - 1} (x^{d-1} + ... + 1)
        let xd = FpPoly::x_pow_minus_one(p, d);
        let geometric_sum = FpPoly::new(p, vec![1; d]);
        xd.pow((k / d - 1) as u64).mul(&geometric_sum)
    } else if d < half {
        let mut g = FpPoly::linear(p, 1).pow((half - d) as u64);
        let mut forbidden = BTreeSet::from([1u64]);
        for _ in 0..d - 1 {
            let (alpha, next) = close_zero_gap(&g, &forbidden)?;
            forbidden.insert(alpha);
            g = next;
        }
        let a = primitive_root(p);
        let tail = FpPoly::monomial(p, half, 1).sub(&FpPoly::constant(p, a));
        g.mul(&tail)
    } else {
        let plus = FpPoly::monomial(p, half, 1).add(&FpPoly::constant(p, 1));
        let s = roots_in_field(&plus);
        let mut t = BTreeSet::from([1u64]);
        for alpha in 2..p {
            if t.len() >= d - half {
                break;
            }
            if !s.contains(&alpha) {
                t.insert(alpha);
            }
        }
        let g = t.iter().fold(FpPoly::constant(p, 1), |acc, &a| acc.mul(&FpPoly::linear(p, a)));
        let forbidden: BTreeSet<u64> = (1..p).filter(|a| !s.contains(a) && !t.contains(a)).collect();
        close_gaps(g, k - d - 1, &forbidden)?.mul(&plus)
    };
    finish(&f, k, p, d)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Parameters {
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<usize>,
    pub n: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub group: GroupDescriptor,
    pub tuple: PolygonTuple,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Exclusion {
    pub group: GroupDescriptor,
    pub rule: String,
}

/// Which groups occur for given parameters, each with a witness, and which
/// candidates are ruled out.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub parameters: Parameters,
    pub achievable: Vec<GroupDescriptor>,
    pub witnesses: Vec<Witness>,
    pub excluded: Vec<Exclusion>,
}

impl ClassificationReport {
    pub fn witness_for(&self, g: &GroupDescriptor) -> Option<&PolygonTuple> {
        self.witnesses.iter().find(|w| w.group == *g).map(|w| &w.tuple)
    }
}

pub const RULE_FACTOR_DEGREES: &str = "factor-degree-sums";
pub const RULE_TRIANGLE_ALPHA: &str = "triangle-alpha-form";
pub const RULE_ONLY_TRIANGLE_MOD_3: &str = "only-triangle-mod-3";

/// All groups of `k`-gons modulo a prime `p > k`.
pub fn classify_prime(k: usize, p: u64) -> Result<ClassificationReport, ConstructError> {
    if k < 3 || !is_prime(p) || p <= k as u64 {
        return Err(ConstructError::PreconditionFailed(format!(
            "need a prime p > k >= 3, got k = {k}, p = {p}"
        )));
    }
    let ds = achievable_d_set(k, p)?;
    let mut achievable = Vec::new();
    let mut witnesses = Vec::new();
    for &d in ds.iter().rev() {
        let group = GroupDescriptor::elementary(p, k - d, k);
        let tuple = construct_prime_case(k, p, d)?;
        achievable.push(group.clone());
        witnesses.push(Witness { group, tuple });
    }
    let excluded = (1..k)
        .filter(|d| !ds.contains(d))
        .map(|d| Exclusion {
            group: GroupDescriptor::elementary(p, k - d, k),
            rule: RULE_FACTOR_DEGREES.to_string(),
        })
        .collect();
    Ok(ClassificationReport {
        parameters: Parameters { k: Some(k), n: p },
        achievable,
        witnesses,
        excluded,
    })
}

/// Whether `alpha | n` has the form `3^i * prod p_j^e_j` with `i <= 1` and
/// every `p_j = 1 mod 3`.
pub fn triangle_alpha_admissible(alpha: u64) -> bool {
    factorize(alpha)
        .into_iter()
        .all(|(q, e)| (q == 3 && e == 1) || q % 3 == 1)
}

/// All groups of triangles modulo `n`, with lexicographically first
/// witnesses.
pub fn classify_triangles(n: u64) -> Result<ClassificationReport, ConstructError> {
    if n < 3 {
        return Err(ConstructError::NTooSmall(n));
    }
    let group_for = |alpha: u64| GroupDescriptor::new(n, 3, &[n, n / alpha]);
    // first triangle (lexicographic in a0, a1) for each alpha
    let mut first: BTreeMap<u64, PolygonTuple> = BTreeMap::new();
    for a0 in 1..n {
        for a1 in 1..n - a0 {
            let a2 = n - a0 - a1;
            let alpha = triangle_alpha(a0, a1, a2, n);
            if first.contains_key(&alpha) {
                continue;
            }
            if let Ok(t) = PolygonTuple::geometric(vec![a0, a1, a2], n) {
                first.insert(alpha, t);
            }
        }
    }
    let allowed = |alpha: u64| if n == 3 { alpha == 3 } else { triangle_alpha_admissible(alpha) };
    if let Some((alpha, t)) = first.iter().find(|(&a, _)| !allowed(a)) {
        return Err(ConstructError::InternalVerificationFailed(format!(
            "{t} has alpha = {alpha}, which the classification excludes"
        )));
    }
    let mut achievable = Vec::new();
    let mut witnesses = Vec::new();
    let mut excluded = Vec::new();
    for alpha in divisors(n) {
        let group = group_for(alpha);
        if !allowed(alpha) {
            let rule = if n == 3 { RULE_ONLY_TRIANGLE_MOD_3 } else { RULE_TRIANGLE_ALPHA };
            excluded.push(Exclusion { group, rule: rule.to_string() });
            continue;
        }
        let tuple = first
            .get(&alpha)
            .cloned()
            .ok_or_else(|| ConstructError::WitnessNotFound(format!("alpha = {alpha} modulo {n}")))?;
        let got = group_of(&tuple);
        if got != group {
            return Err(ConstructError::InternalVerificationFailed(format!(
                "{tuple} has group {got}, expected {group}"
            )));
        }
        achievable.push(group.clone());
        witnesses.push(Witness { group, tuple });
    }
    Ok(ClassificationReport {
        parameters: Parameters { k: Some(3), n },
        achievable,
        witnesses,
        excluded,
    })
}

/// Witness found by [`composite_feasible`], with the per-prime-power pieces
/// it was assembled from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositeWitness {
    pub group: GroupDescriptor,
    pub witness: PolygonTuple,
    pub components: Vec<PolygonTuple>,
}

/// Algebraic `k`-gons mod `q = p^e` whose group is `target`, one per zero
/// pattern (bit `i` set when `a_i = 0 mod q`), lexicographically first.
fn zero_patterns(k: usize, p: u64, e: u32, target: &[u64], cap: u64) -> Result<BTreeMap<u64, Vec<u64>>, ConstructError> {
    let q = p.pow(e);
    let size = (q as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if size > cap as u128 {
        return Err(ConstructError::CapExceeded {
            modulus: q,
            size: size.min(u64::MAX as u128) as u64,
            cap,
        });
    }
    let mut out = BTreeMap::new();
    let mut a = vec![0u64; k];
    loop {
        // the last entry is forced by the sum condition
        let head: u64 = a[..k - 1].iter().sum();
        a[k - 1] = (q - head % q) % q;
        if a.iter().any(|x| x % p != 0) {
            let mask = a
                .iter()
                .enumerate()
                .filter(|&(_, &x)| x == 0)
                .fold(0u64, |m, (i, _)| m | 1 << i);
            if !out.contains_key(&mask) {
                let rows: Vec<Vec<u64>> = (0..k)
                    .map(|i| (0..k).map(|j| a[(i + k - j) % k]).collect())
                    .collect();
                if span_orders_mod_prime_power(&rows, p, e) == target {
                    out.insert(mask, a.clone());
                }
            }
        }
        // odometer over the first k - 1 entries
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            a[i] += 1;
            if a[i] < q {
                break;
            }
            a[i] = 0;
        }
    }
}

/// Decides whether some geometric `k`-gon mod `n` has translation subgroup
/// with invariant factors `deltas`, returning a verified witness.
pub fn composite_feasible(k: usize, n: u64, deltas: &[u64], cap: u64) -> Result<CompositeWitness, ConstructError> {
    if k < 3 {
        return Err(ConstructError::PreconditionFailed(format!("k = {k} < 3")));
    }
    if n < 2 {
        return Err(ConstructError::ModulusTooSmall(n));
    }
    if let Some(&bad) = deltas.iter().find(|&&d| d == 0 || n % d != 0) {
        return Err(ConstructError::PreconditionFailed(format!("{bad} does not divide {n}")));
    }
    let target = invariant_factors(deltas);
    let mut per_prime = Vec::new();
    for (p, e) in factorize(n) {
        let q = p.pow(e);
        let local_target = quotient_by_multiple(&target, q);
        let patterns = zero_patterns(k, p, e, &local_target, cap)?;
        if patterns.is_empty() {
            let shown: Vec<String> = local_target.iter().map(|d| d.to_string()).collect();
            return Err(ConstructError::Infeasible {
                prime_power: Some(q),
                reason: format!("no algebraic {k}-gon modulo {q} has translation factors ({})", shown.join(",")),
            });
        }
        per_prime.push((q, patterns));
    }
    // combined zero mask -> chosen pattern per prime power
    let full = if k >= 64 { u64::MAX } else { (1u64 << k) - 1 };
    let mut states: HashMap<u64, Vec<u64>> = HashMap::from([(full, Vec::new())]);
    for (_, patterns) in &per_prime {
        let mut next: HashMap<u64, Vec<u64>> = HashMap::new();
        let mut keys: Vec<u64> = states.keys().copied().collect();
        keys.sort_unstable();
        for acc in keys {
            for &mask in patterns.keys() {
                let mut path = states[&acc].clone();
                path.push(mask);
                next.entry(acc & mask).or_insert(path);
            }
        }
        states = next;
    }
    let Some(choice) = states.get(&0) else {
        return Err(ConstructError::Infeasible {
            prime_power: None,
            reason: "every combination leaves some entry divisible by n".into(),
        });
    };
    let components: Vec<PolygonTuple> = per_prime
        .iter()
        .zip(choice)
        .map(|((q, patterns), mask)| PolygonTuple::algebraic(patterns[mask].clone(), *q))
        .collect::<Result<_, _>>()?;
    let mut combined = components[0].clone();
    for c in &components[1..] {
        combined = combine_crt(&combined, c)?;
    }
    let witness = combined.find_geometric_associate().ok_or_else(|| {
        ConstructError::InternalVerificationFailed(format!("{combined} has no geometric associate"))
    })?;
    let group = group_of(&witness);
    if group.deltas() != target.as_slice() {
        return Err(ConstructError::InternalVerificationFailed(format!(
            "{witness} has group {group}"
        )));
    }
    Ok(CompositeWitness { group, witness, components })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::merge;

    fn alg(v: &[u64], n: u64) -> PolygonTuple {
        PolygonTuple::algebraic(v.to_vec(), n).unwrap()
    }

    #[test]
    fn combine_examples() {
        let c = combine_crt(&alg(&[1, 4, 4, 1], 5), &alg(&[2, 3, 4, 3], 6)).unwrap();
        assert_eq!((c.entries(), c.modulus()), (&[26u64, 9, 4, 21][..], 30));
        let c = combine_crt(&alg(&[0, 1, 1], 2), &alg(&[1, 0, 4], 5)).unwrap();
        assert_eq!(c.entries(), &[6, 5, 9]);
        assert_eq!(
            combine_crt(&alg(&[1, 2, 4], 7), &alg(&[1, 6, 0], 7)),
            Err(ConstructError::ModuliNotCoprime(7, 7))
        );
        assert_eq!(
            combine_crt(&alg(&[1, 2, 4], 7), &alg(&[2, 3, 3, 2], 5)),
            Err(ConstructError::LengthMismatch(3, 4))
        );
    }

    #[test]
    fn project_examples() {
        assert_eq!(project(&alg(&[1, 2, 24, 23], 25), 5).unwrap().entries(), &[1, 2, 4, 3]);
        assert_eq!(project(&alg(&[26, 9, 4, 21], 30), 5).unwrap().entries(), &[1, 4, 4, 1]);
        assert_eq!(project(&alg(&[1, 1, 4], 6), 2).unwrap().entries(), &[1, 1, 0]);
        assert_eq!(
            project(&alg(&[1, 1, 4], 6), 4),
            Err(ConstructError::BadFactorization { n: 6, n1: 4 })
        );
    }

    #[test]
    fn non_coprime_projection_keeps_the_multiple_not_the_quotient() {
        let t = alg(&[1, 2, 24, 23], 25);
        assert_eq!(group_of(&t).deltas(), &[25, 5]);
        assert_eq!(group_of(&project(&t, 5).unwrap()).deltas(), &[5]);
    }

    #[test]
    fn lift_examples() {
        assert_eq!(lift(&alg(&[3, 4], 7), 4).unwrap().entries(), &[3, 4, 3, 4]);
        let t = alg(&[1, 2, 4], 7);
        assert_eq!(lift(&t, 3).unwrap(), t);
        assert_eq!(lift(&t, 12).unwrap().entries(), &[1, 2, 4, 1, 2, 4, 1, 2, 4, 1, 2, 4]);
        assert_eq!(lift(&t, 5), Err(ConstructError::NotMultiple { k: 3, ell: 5 }));
        let g = group_of(&lift(&t, 12).unwrap());
        assert_eq!((g.deltas(), g.k()), (group_of(&t).deltas(), 12));
    }

    #[test]
    fn combine_coprime_k_examples() {
        let c = combine_coprime_k(&alg(&[1, 2, 4], 7), &alg(&[2, 3, 3, 2], 5)).unwrap();
        assert_eq!(c.entries(), &[22, 23, 18, 22, 2, 18, 8, 2, 32, 8, 23, 32]);
        assert_eq!(group_of(&c).deltas(), &[35, 5]);
        assert_eq!(
            combine_coprime_k(&alg(&[1, 2, 4], 7), &alg(&[1, 1, 3], 5)),
            Err(ConstructError::KNotCoprime(3, 3))
        );
    }

    #[test]
    fn achievable_sets() {
        assert_eq!(achievable_d_set(3, 5).unwrap(), BTreeSet::from([1]));
        assert_eq!(achievable_d_set(4, 5).unwrap(), BTreeSet::from([1, 2, 3]));
        assert_eq!(achievable_d_set(17, 41).unwrap(), BTreeSet::from([1]));
        assert!(matches!(achievable_d_set(6, 3), Err(ConstructError::Poly(PolyError::PDividesK(3)))));
    }

    #[test]
    fn prime_constructions() {
        let t = construct_prime_case(4, 5, 2).unwrap();
        assert_eq!(t.entries(), &[4, 4, 1, 1]);
        let t = construct_prime_case(3, 7, 1).unwrap();
        assert_eq!(group_of(&t), GroupDescriptor::elementary(7, 2, 3));
        let e = t.entries();
        assert_eq!(triangle_alpha(e[0], e[1], e[2], 7), 1);
        assert_eq!(
            construct_prime_case(3, 5, 2),
            Err(ConstructError::DNotAchievable { k: 3, p: 5, d: 2 })
        );
    }

    #[test]
    fn prime_constructions_sweep() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            for k in 3..p as usize {
                for d in achievable_d_set(k, p).unwrap() {
                    let t = construct_prime_case(k, p, d)
                        .unwrap_or_else(|e| panic!("k={k} p={p} d={d}: {e}"));
                    assert_eq!(t.level(), crate::polygon::Level::Geometric);
                }
            }
        }
    }

    #[test]
    fn classify_prime_examples() {
        let r = classify_prime(3, 5).unwrap();
        assert_eq!(r.achievable, vec![GroupDescriptor::elementary(5, 2, 3)]);
        assert_eq!(r.excluded.len(), 1);
        assert_eq!(r.excluded[0].rule, RULE_FACTOR_DEGREES);
        let r = classify_prime(17, 41).unwrap();
        assert_eq!(r.achievable, vec![GroupDescriptor::elementary(41, 16, 17)]);
        let r = classify_prime(4, 5).unwrap();
        assert_eq!(r.achievable.len(), 3);
        for w in &r.witnesses {
            assert_eq!(group_of(&w.tuple), w.group);
        }
        assert!(classify_prime(5, 5).is_err());
    }

    #[test]
    fn classify_triangle_examples() {
        let r = classify_triangles(81).unwrap();
        let shown: Vec<(Vec<u64>, Vec<u64>)> = r
            .witnesses
            .iter()
            .map(|w| (w.group.deltas().to_vec(), w.tuple.entries().to_vec()))
            .collect();
        assert_eq!(shown, vec![(vec![81, 81], vec![1, 2, 78]), (vec![81, 27], vec![1, 1, 79])]);
        let r = classify_triangles(3).unwrap();
        assert_eq!(r.achievable, vec![GroupDescriptor::new(3, 3, &[3])]);
        let r = classify_triangles(35).unwrap();
        let alphas: Vec<u64> = r.achievable.iter().map(|g| 35 * 35 / g.normal_order().to_u64_digits()[0]).collect();
        assert_eq!(alphas, vec![1, 7]);
        assert_eq!(r.excluded.len(), 2);
        assert_eq!(classify_triangles(2), Err(ConstructError::NTooSmall(2)));
    }

    #[test]
    fn explicit_alpha_one_triangles() {
        for n in 4..200u64 {
            let t = if n % 3 == 0 { [n / 3 - 1, n / 3, n / 3 + 1] } else { [1, 1, n - 2] };
            assert_eq!(triangle_alpha(t[0], t[1], t[2], n), 1, "n={n}");
        }
    }

    #[test]
    fn triangle_classification_matches_enumeration() {
        for n in 3..=60u64 {
            let found: BTreeSet<GroupDescriptor> = crate::polygon::enumerate_geometric(3, n)
                .iter()
                .map(group_of)
                .collect();
            let classified: BTreeSet<GroupDescriptor> = classify_triangles(n).unwrap().achievable.into_iter().collect();
            assert_eq!(found, classified, "n={n}");
        }
    }

    #[test]
    fn composite_examples() {
        let w = composite_feasible(3, 10, &[10, 10], DEFAULT_COMPOSITE_CAP).unwrap();
        assert_eq!(w.group.deltas(), &[10, 10]);
        for deltas in [&[35u64][..], &[35, 7]] {
            match composite_feasible(3, 35, deltas, DEFAULT_COMPOSITE_CAP) {
                Err(ConstructError::Infeasible { prime_power, .. }) => assert_eq!(prime_power, Some(5)),
                other => panic!("{other:?}"),
            }
        }
        let w = composite_feasible(3, 6, &[6, 2], DEFAULT_COMPOSITE_CAP).unwrap();
        assert_eq!(w.group.deltas(), &[6, 2]);
        assert_eq!(group_of(&PolygonTuple::geometric(vec![1, 1, 4], 6).unwrap()).deltas(), &[6, 2]);
        assert!(matches!(
            composite_feasible(8, 30, &[30], 1000),
            Err(ConstructError::CapExceeded { .. })
        ));
    }

    #[test]
    fn composite_agrees_with_enumeration() {
        for (k, n) in [(3usize, 6u64), (3, 10), (3, 12), (3, 15), (4, 6), (4, 10), (3, 9), (4, 4)] {
            let found: BTreeSet<Vec<u64>> = crate::polygon::enumerate_geometric(k, n)
                .iter()
                .map(|t| group_of(t).deltas().to_vec())
                .collect();
            let mut candidates: BTreeSet<Vec<u64>> = BTreeSet::new();
            let divs = divisors(n);
            for &a in &divs {
                for &b in &divs {
                    for &c in &divs {
                        candidates.insert(invariant_factors(&[a, b, c]));
                    }
                }
            }
            for target in candidates {
                let decided = composite_feasible(k, n, &target, DEFAULT_COMPOSITE_CAP).is_ok();
                assert_eq!(decided, found.contains(&target), "k={k} n={n} {target:?}");
            }
        }
    }

    #[test]
    fn merge_matches_combine() {
        let a = alg(&[1, 4, 4, 1], 5);
        let b = alg(&[2, 3, 4, 3], 6);
        let c = combine_crt(&a, &b).unwrap();
        assert_eq!(group_of(&c).deltas(), merge(group_of(&a).deltas(), group_of(&b).deltas()));
    }
}
