use billiard_monodromy::abelian::merge;
use billiard_monodromy::arith::{gcd, is_prime, mod_inv, units};
use billiard_monodromy::construct::{classify_prime, combine_crt, lift, project};
use billiard_monodromy::exactla::{minor_gcd, rank_mod_p, smith_normal_form, Matrix};
use billiard_monodromy::monodromy::group_of;
use billiard_monodromy::oracle::span_invariants;
use billiard_monodromy::polyfp::{gcd_poly, FpPoly};
use billiard_monodromy::polygon::{enumerate_algebraic, Level, PolygonTuple};
use billiard_monodromy::Int;
use num_bigint::BigUint;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Algebraic tuple from arbitrary residues: the last entry fixes the sum.
fn algebraic_from(mut v: Vec<u64>, n: u64) -> Option<PolygonTuple> {
    let s: u64 = v.iter().sum();
    v.push((n - s % n) % n);
    PolygonTuple::algebraic(v, n).ok()
}

fn arb_algebraic(max_k: usize, max_n: u64) -> impl Strategy<Value = PolygonTuple> {
    (3..=max_k, 2..=max_n)
        .prop_flat_map(|(k, n)| (prop::collection::vec(0..n, k - 1), Just(n)))
        .prop_filter_map("gcd condition", |(v, n)| algebraic_from(v, n))
}

fn arb_geometric(max_k: usize, max_n: u64) -> impl Strategy<Value = PolygonTuple> {
    (3..=max_k, 2..=max_n)
        .prop_flat_map(|(k, n)| (prop::collection::vec(1..2 * n, k), Just(n)))
        .prop_filter_map("not geometric", |(mut v, n)| {
            // spread the required total over the entries
            let k = v.len() as u64;
            let target = (k - 2) * n;
            let sum: u64 = v.iter().sum();
            if sum > target {
                return None;
            }
            let mut left = target - sum;
            for a in v.iter_mut() {
                let room = (2 * n - 1 - *a).min(left);
                *a += room;
                left -= room;
            }
            PolygonTuple::geometric(v, n).ok()
        })
}

fn unit_of(n: u64, pick: usize) -> u64 {
    let u = units(n);
    u[pick % u.len()]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn scaling_by_a_unit_and_back(t in arb_algebraic(7, 40), pick in any::<usize>()) {
        let n = t.modulus();
        let c = unit_of(n, pick);
        let s = t.scale_associate(c).unwrap();
        prop_assert_eq!(s.level(), Level::Algebraic);
        let back = s.scale_associate(mod_inv(c, n).unwrap()).unwrap();
        prop_assert_eq!(back.entries().to_vec(), t.residues());
    }

    #[test]
    fn associates_share_a_group(t in arb_algebraic(6, 40), pick in any::<usize>()) {
        let c = unit_of(t.modulus(), pick);
        prop_assert_eq!(group_of(&t), group_of(&t.scale_associate(c).unwrap()));
    }

    #[test]
    fn geometric_associate_is_a_unit_multiple(t in arb_algebraic(6, 30)) {
        if let Some(g) = t.find_geometric_associate() {
            let n = t.modulus();
            prop_assert_eq!(g.level(), Level::Geometric);
            let r = t.residues();
            let found = units(n).into_iter().any(|c| {
                g.residues().iter().zip(&r).all(|(&b, &a)| b == a * c % n)
            });
            prop_assert!(found);
        } else {
            prop_assert!(t.has_zero_residue());
        }
    }

    #[test]
    fn geometric_implies_algebraic(t in arb_geometric(8, 50)) {
        prop_assert!(PolygonTuple::algebraic(t.entries().to_vec(), t.modulus()).is_ok());
    }

    #[test]
    fn snf_on_random_matrices(
        (r, c, data) in (1usize..=6, 1usize..=6)
            .prop_flat_map(|(r, c)| (Just(r), Just(c), prop::collection::vec(-50i64..=50, r * c)))
    ) {
        let a = Matrix::new(r, c, data.into_iter().map(Int::from).collect()).unwrap();
        let s = smith_normal_form(&a);
        prop_assert_eq!(&s.u.mul(&s.d).unwrap().mul(&s.v).unwrap(), &a);
        prop_assert!(s.u.det().unwrap().abs().is_one());
        prop_assert!(s.v.det().unwrap().abs().is_one());
        let mut prefix = Int::one();
        for (j, d) in s.divisors.iter().enumerate() {
            prop_assert!(!d.is_negative());
            if j > 0 && !s.divisors[j - 1].is_zero() {
                prop_assert!((d % &s.divisors[j - 1]).is_zero());
            }
            prefix *= d;
            let m = minor_gcd(&a, j + 1).unwrap();
            prop_assert_eq!(&m, &prefix);
            prop_assert_eq!(d.is_zero(), m.is_zero() || s.divisors[..j].iter().any(Zero::is_zero));
        }
        for p in [2u64, 3, 5] {
            let expected = s.divisors.iter().filter(|d| !(*d % Int::from(p)).is_zero()).count();
            prop_assert_eq!(rank_mod_p(&a, p).unwrap(), expected);
        }
    }

    #[test]
    fn prime_modulus_rank_identity(t in arb_algebraic(8, 23)) {
        let p = t.modulus();
        let k = t.k();
        prop_assume!(is_prime(p) && k as u64 % p != 0);
        let f = FpPoly::from_tuple(&t).unwrap();
        let d = gcd_poly(&f, &FpPoly::x_pow_minus_one(p, k)).unwrap().degree().unwrap();
        prop_assert_eq!(group_of(&t).deltas().to_vec(), vec![p; k - d]);
    }
}

fn coprime_pair() -> impl Strategy<Value = (PolygonTuple, PolygonTuple)> {
    (3usize..=5, 2u64..=12, 2u64..=12)
        .prop_filter("coprime moduli", |&(_, a, b)| gcd(a, b) == 1)
        .prop_flat_map(|(k, n1, n2)| {
            (
                prop::collection::vec(0..n1, k - 1),
                Just(n1),
                prop::collection::vec(0..n2, k - 1),
                Just(n2),
            )
        })
        .prop_filter_map("valid", |(a, n1, b, n2)| Some((algebraic_from(a, n1)?, algebraic_from(b, n2)?)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn combining_merges_translation_groups((a, b) in coprime_pair()) {
        let c = combine_crt(&a, &b).unwrap();
        prop_assert_eq!(
            group_of(&c).deltas().to_vec(),
            merge(group_of(&a).deltas(), group_of(&b).deltas())
        );
        // projecting back recovers both halves
        prop_assert_eq!(project(&c, a.modulus()).unwrap().entries().to_vec(), a.residues());
        prop_assert_eq!(project(&c, b.modulus()).unwrap().entries().to_vec(), b.residues());
    }

    #[test]
    fn coprime_projections_recover_the_group(
        (_k, n1, n2, v) in (3usize..=5, 2u64..=9, 2u64..=9)
            .prop_filter("coprime", |&(_, a, b)| gcd(a, b) == 1)
            .prop_flat_map(|(k, a, b)| (Just(k), Just(a), Just(b), prop::collection::vec(0..a * b, k - 1)))
    ) {
        let Some(t) = algebraic_from(v, n1 * n2) else { return Ok(()) };
        let (Ok(p1), Ok(p2)) = (project(&t, n1), project(&t, n2)) else {
            return Ok(());
        };
        prop_assert_eq!(
            merge(group_of(&p1).deltas(), group_of(&p2).deltas()),
            group_of(&t).deltas().to_vec()
        );
    }

    #[test]
    fn lifting_keeps_the_translation_group(t in arb_algebraic(5, 20), m in 1usize..=4) {
        let l = lift(&t, t.k() * m).unwrap();
        let (g, h) = (group_of(&t), group_of(&l));
        prop_assert_eq!(g.deltas(), h.deltas());
        prop_assert_eq!(h.order(), &(g.order() * BigUint::from(m)));
    }
}

#[test]
fn span_matches_snf_exhaustively() {
    let mut checked = 0;
    for k in 3..=6usize {
        for n in 2..=40u64 {
            if (n as u128).pow(k as u32) > 10_000 {
                break;
            }
            for t in enumerate_algebraic(k, n) {
                let s = span_invariants(&t, 100_000).unwrap();
                assert_eq!(s.factors, group_of(&t).deltas(), "{t}");
                checked += 1;
            }
        }
    }
    assert!(checked > 2_000);
}

#[test]
fn prime_witnesses_reverify() {
    for (k, p) in [(3usize, 7u64), (4, 5), (5, 11), (6, 7), (6, 13), (8, 17), (10, 11)] {
        let r = classify_prime(k, p).unwrap();
        for w in &r.witnesses {
            assert_eq!(w.tuple.level(), Level::Geometric);
            assert_eq!(group_of(&w.tuple), w.group);
        }
    }
}
