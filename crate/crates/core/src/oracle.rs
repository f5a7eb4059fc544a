//! Brute-force ground truth: the two edge permutations of the billiard
//! surface, the group they generate, and the translation subgroup, all
//! computed by explicit closure.

use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::abelian;
use crate::arith::{factorize, reduce};
use crate::polygon::PolygonTuple;

pub const DEFAULT_SPAN_CAP: usize = 100_000;
pub const DEFAULT_GROUP_CAP: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{what} exceeds the cap of {cap} (reached {reached})")]
    CapExceeded { what: &'static str, cap: usize, reached: usize },
}

/// Limits on brute-force enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub span: usize,
    pub group: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { span: DEFAULT_SPAN_CAP, group: DEFAULT_GROUP_CAP }
    }
}

/// Edge `(m, i)` with `m` mod `n` and `i` mod `k`; indexed as `m * k + i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EdgeLabel {
    pub m: u64,
    pub i: usize,
}

impl EdgeLabel {
    pub fn index(self, k: usize) -> usize {
        self.m as usize * k + self.i
    }

    pub fn from_index(idx: usize, k: usize) -> Self {
        EdgeLabel { m: (idx / k) as u64, i: idx % k }
    }
}

/// A permutation of `0..len` in image form: `p[x]` is the image of `x`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Permutation(Vec<u32>);

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Permutation((0..len as u32).collect())
    }

    /// `None` unless `images` is a bijection of `0..len`.
    pub fn from_images(images: Vec<u32>) -> Option<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            let slot = seen.get_mut(x as usize)?;
            if *slot {
                return None;
            }
            *slot = true;
        }
        Some(Permutation(images))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    pub fn apply(&self, x: usize) -> usize {
        self.0[x] as usize
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&x| self.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut out = vec![0u32; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[y as usize] = x as u32;
        }
        Permutation(out)
    }

    pub fn pow(&self, e: usize) -> Permutation {
        (0..e).fold(Permutation::identity(self.len()), |acc, _| self.compose(&acc))
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }
}

/// The generators of the monodromy group acting on edges.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationPair {
    pub n: u64,
    pub k: usize,
    pub sigma0: Permutation,
    pub sigma1: Permutation,
}

impl PermutationPair {
    pub fn edge_count(&self) -> usize {
        self.n as usize * self.k
    }
}

/// `sigma0: (m, i) -> (m, i + 1)` and `sigma1: (m, i) -> (m - a_{i-1}, i - 1)`.
pub fn build_permutations(t: &PolygonTuple) -> PermutationPair {
    let n = t.modulus();
    let k = t.k();
    let a = t.residues();
    let len = n as usize * k;
    let mut s0 = vec![0u32; len];
    let mut s1 = vec![0u32; len];
    for idx in 0..len {
        let e = EdgeLabel::from_index(idx, k);
        s0[idx] = EdgeLabel { m: e.m, i: (e.i + 1) % k }.index(k) as u32;
        let prev = (e.i + k - 1) % k;
        let m = reduce(e.m as i128 - a[prev] as i128, n);
        s1[idx] = EdgeLabel { m, i: prev }.index(k) as u32;
    }
    PermutationPair {
        n,
        k,
        sigma0: Permutation(s0),
        sigma1: Permutation(s1),
    }
}

/// Every element of the group generated by `gens`, identity first.
pub fn closure(gens: &[Permutation], len: usize, cap: usize) -> Result<Vec<Permutation>, OracleError> {
    let id = Permutation::identity(len);
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut order = vec![id.clone()];
    seen.insert(id.clone());
    let mut queue = VecDeque::from([id]);
    while let Some(g) = queue.pop_front() {
        for s in gens {
            let h = s.compose(&g);
            if !seen.contains(&h) {
                if seen.len() >= cap {
                    return Err(OracleError::CapExceeded { what: "group", cap, reached: seen.len() });
                }
                seen.insert(h.clone());
                order.push(h.clone());
                queue.push_back(h);
            }
        }
    }
    Ok(order)
}

pub fn group_order(pp: &PermutationPair, cap: usize) -> Result<usize, OracleError> {
    closure(&[pp.sigma0.clone(), pp.sigma1.clone()], pp.edge_count(), cap).map(|g| g.len())
}

/// Order and invariant factors of a finite abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbelianInvariants {
    pub order: u64,
    pub factors: Vec<u64>,
}

/// Additive span of the circulant columns in `(Z/n)^k`.
pub fn column_span(t: &PolygonTuple, cap: usize) -> Result<HashSet<Vec<u64>>, OracleError> {
    let n = t.modulus();
    let k = t.k();
    let a = t.residues();
    let columns: Vec<Vec<u64>> = (0..k)
        .map(|j| (0..k).map(|i| a[(i + k - j) % k]).collect())
        .collect();
    let zero = vec![0u64; k];
    let mut span = HashSet::from([zero.clone()]);
    let mut queue = VecDeque::from([zero]);
    while let Some(v) = queue.pop_front() {
        for c in &columns {
            let w: Vec<u64> = v.iter().zip(c).map(|(x, y)| (x + y) % n).collect();
            if !span.contains(&w) {
                if span.len() >= cap {
                    return Err(OracleError::CapExceeded { what: "span", cap, reached: span.len() });
                }
                span.insert(w.clone());
                queue.push_back(w);
            }
        }
    }
    Ok(span)
}

/// Invariant factors of a subgroup of `(Z/n)^k`, read off from how many
/// elements each prime power kills.
pub fn invariants_of_subgroup(elements: &HashSet<Vec<u64>>, n: u64) -> AbelianInvariants {
    let count_killed = |m: u64| {
        elements
            .iter()
            .filter(|v| v.iter().all(|&x| (x as u128 * m as u128) % n as u128 == 0))
            .count() as u64
    };
    let mut per_prime = Vec::new();
    for (p, e) in factorize(n) {
        // ranks[j] = #{cyclic p-factors of exponent > j}
        let mut logs = vec![0u32];
        let mut q = 1u64;
        for _ in 0..e {
            q *= p;
            logs.push(log_exact(count_killed(q), p));
        }
        let ranks: Vec<u32> = logs.windows(2).map(|w| w[1] - w[0]).collect();
        let top = ranks.first().copied().unwrap_or(0);
        let exps: Vec<u32> = (0..top)
            .map(|r| ranks.iter().filter(|&&c| c > r).count() as u32)
            .collect();
        per_prime.push((p, exps));
    }
    AbelianInvariants {
        order: elements.len() as u64,
        factors: abelian::from_elementary(&per_prime),
    }
}

fn log_exact(mut x: u64, p: u64) -> u32 {
    let mut e = 0;
    while x > 1 {
        assert_eq!(x % p, 0, "subgroup count is not a prime power");
        x /= p;
        e += 1;
    }
    e
}

pub fn span_invariants(t: &PolygonTuple, cap: usize) -> Result<AbelianInvariants, OracleError> {
    Ok(invariants_of_subgroup(&column_span(t, cap)?, t.modulus()))
}

/// One verified structural property.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub description: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub tuple: PolygonTuple,
    pub group_order: u64,
    pub normal_order: u64,
    pub span: AbelianInvariants,
    pub trivial_action: bool,
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "tuple: {}", self.tuple)?;
        writeln!(f, "|G| = {}, |N| = {}", self.group_order, self.normal_order)?;
        let factors: Vec<String> = self.span.factors.iter().map(|d| d.to_string()).collect();
        writeln!(f, "span: order {}, factors ({})", self.span.order, factors.join(","))?;
        writeln!(f, "action: {}", if self.trivial_action { "trivial" } else { "nontrivial" })?;
        for c in &self.checks {
            write!(f, "{} {}: {}", if c.passed { "ok  " } else { "FAIL" }, c.name, c.description)?;
            if let Some(d) = &c.detail {
                write!(f, " ({d})")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

fn check(name: &str, description: &str, passed: bool, detail: Option<String>) -> Check {
    Check {
        name: name.to_string(),
        description: description.to_string(),
        passed,
        detail: if passed { None } else { detail },
    }
}

/// Translation vector of a permutation fixing every side index, if it is a
/// pure translation `(m, i) -> (m + v_i, i)`.
fn translation(g: &Permutation, n: u64, k: usize) -> Option<Vec<u64>> {
    let v: Vec<u64> = (0..k).map(|i| EdgeLabel::from_index(g.apply(i), k)).map(|e| e.m).collect();
    for idx in 0..g.len() {
        let e = EdgeLabel::from_index(idx, k);
        let img = EdgeLabel::from_index(g.apply(idx), k);
        if img.i != e.i || img.m != (e.m + v[e.i]) % n {
            return None;
        }
    }
    Some(v)
}

fn fixes_sides(g: &Permutation, k: usize) -> bool {
    (0..g.len()).all(|idx| g.apply(idx) % k == idx % k)
}

/// Brute-force verification of the semidirect-product structure.
pub fn check_structure(t: &PolygonTuple, caps: Caps) -> Result<StructureReport, OracleError> {
    let n = t.modulus();
    let k = t.k();
    let a = t.residues();
    let pp = build_permutations(t);
    let len = pp.edge_count();
    let group = closure(&[pp.sigma0.clone(), pp.sigma1.clone()], len, caps.group)?;
    let group_set: HashSet<&Permutation> = group.iter().collect();

    let taus: Vec<Permutation> = (1..k)
        .map(|x| pp.sigma0.pow(x).compose(&pp.sigma1.pow(x)))
        .collect();
    let mut checks = Vec::new();

    let closed_form = taus.iter().enumerate().all(|(idx, tau)| {
        let x = idx + 1;
        (0..len).all(|e| {
            let lab = EdgeLabel::from_index(e, k);
            let s: i128 = (1..=x).map(|j| a[(lab.i + k - j) % k] as i128).sum();
            let want = EdgeLabel { m: reduce(lab.m as i128 - s, n), i: lab.i };
            tau.apply(e) == want.index(k)
        })
    });
    checks.push(check(
        "closed_form",
        "sigma0^x sigma1^x subtracts a_{i-x} + ... + a_{i-1} from m",
        closed_form,
        None,
    ));

    let mut bad_pair = None;
    'outer: for (x, tx) in taus.iter().enumerate() {
        for (y, ty) in taus.iter().enumerate().skip(x + 1) {
            if tx.compose(ty) != ty.compose(tx) {
                bad_pair = Some(format!("x={}, y={}", x + 1, y + 1));
                break 'outer;
            }
        }
    }
    checks.push(check(
        "commuting",
        "the elements sigma0^x sigma1^x pairwise commute",
        bad_pair.is_none(),
        bad_pair,
    ));

    let normal = closure(&taus, len, caps.group)?;
    let normal_set: HashSet<&Permutation> = normal.iter().collect();
    let fixed: HashSet<&Permutation> = group.iter().filter(|g| fixes_sides(g, k)).collect();
    checks.push(check(
        "fixed_subgroup",
        "N equals the set of group elements fixing every side index",
        fixed == normal_set,
        Some(format!("|N| = {}, |fixed| = {}", normal.len(), fixed.len())),
    ));

    let s0_inv = pp.sigma0.inverse();
    let s1_inv = pp.sigma1.inverse();
    let is_normal = normal.iter().all(|g| {
        normal_set.contains(&pp.sigma0.compose(g).compose(&s0_inv))
            && normal_set.contains(&pp.sigma1.compose(g).compose(&s1_inv))
    });
    checks.push(check("normal", "N is normal in G", is_normal, None));

    let rotations: Vec<Permutation> = (0..k).map(|j| pp.sigma0.pow(j)).collect();
    let meets_trivially = rotations.iter().skip(1).all(|r| !normal_set.contains(r));
    checks.push(check(
        "complement",
        "N meets <sigma0> only in the identity",
        meets_trivially,
        None,
    ));

    let products: HashSet<Permutation> = normal
        .iter()
        .flat_map(|g| rotations.iter().map(move |r| g.compose(r)))
        .collect();
    let spans_group = products.len() == group.len() && products.iter().all(|g| group_set.contains(g));
    checks.push(check("product", "N <sigma0> = G", spans_group, None));

    checks.push(check(
        "order",
        "|G| = k |N|",
        group.len() == k * normal.len(),
        Some(format!("|G| = {}, k |N| = {}", group.len(), k * normal.len())),
    ));

    let vectors: Vec<Option<Vec<u64>>> = normal.iter().map(|g| translation(g, n, k)).collect();
    let mut shift_ok = vectors.iter().all(Option::is_some);
    if shift_ok {
        for (g, v) in normal.iter().zip(&vectors) {
            let v = v.as_ref().expect("checked");
            let conj = pp.sigma0.compose(g).compose(&s0_inv);
            let shifted: Vec<u64> = (0..k).map(|i| v[(i + k - 1) % k]).collect();
            if translation(&conj, n, k).as_ref() != Some(&shifted) {
                shift_ok = false;
                break;
            }
        }
    }
    checks.push(check(
        "shift_action",
        "conjugation by sigma0 shifts translation vectors cyclically",
        shift_ok,
        None,
    ));

    let span = column_span(t, caps.span)?;
    let from_group: HashSet<Vec<u64>> = vectors.into_iter().flatten().collect();
    checks.push(check(
        "span",
        "translation vectors of N form the column span of the circulant",
        from_group == span,
        Some(format!("|N| = {}, |span| = {}", from_group.len(), span.len())),
    ));

    let trivial_action = normal
        .iter()
        .all(|g| pp.sigma0.compose(g) == g.compose(&pp.sigma0));

    Ok(StructureReport {
        tuple: t.clone(),
        group_order: group.len() as u64,
        normal_order: normal.len() as u64,
        span: invariants_of_subgroup(&span, n),
        trivial_action,
        checks,
    })
}
