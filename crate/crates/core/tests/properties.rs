use std::sync::{Arc, OnceLock};

use num_complex::Complex64;
use num_integer::Integer;
use proptest::prelude::*;

use ideal_core::multfunc::{dirichlet_convolve, ArithTable, IdealDomain};
use ideal_core::numberfield::polymod;
use ideal_core::numberfield::{
    factor_poly_mod_p, factor_prime, is_prime_u64, is_regular_prime, parse_field, FieldSpec, Ideal,
};
use ideal_core::orthogonality::{
    prop2_sides, renormalize, theorem1_difference, BoundedSequenceFn, IdealSet,
};
use ideal_core::primebounds::{annulus_census, multiplicity_by_divisibility, multiplicity_census};
use ideal_core::richter::{property_a_certificate, property_a_exhaustive, ASet};
use ideal_core::sieve::{ideal_gcd, IdealSieve};
use ideal_core::stats::{self, e_rational};

const X: u64 = 20_000;

fn fields() -> &'static [(FieldSpec, IdealSieve, Vec<Ideal>)] {
    static CELL: OnceLock<Vec<(FieldSpec, IdealSieve, Vec<Ideal>)>> = OnceLock::new();
    CELL.get_or_init(|| {
        [
            &[0, 1][..],
            &[1, 0, 1],
            &[-2, 0, 1],
            &[1, 1, 1],
            &[-2, 0, 0, 1],
        ]
        .iter()
        .map(|c| {
            let f = parse_field(c).unwrap();
            let s = IdealSieve::new(&f, X).unwrap();
            let ideals = s.ideals(X).unwrap();
            (f, s, ideals)
        })
        .collect()
    })
}

fn field_index() -> impl Strategy<Value = usize> {
    0..fields().len()
}

#[test]
fn splitting_degrees_sum_to_degree() {
    for (f, _, _) in fields() {
        let d = f.degree() as u32;
        for p in (2..=10_000u64).filter(|&p| is_prime_u64(p)) {
            if !is_regular_prime(f, p) {
                continue;
            }
            let primes = factor_prime(f, p).unwrap();
            assert_eq!(
                primes.iter().map(|q| q.e * q.f).sum::<u32>(),
                d,
                "{f} at {p}"
            );
            let norm: u128 = primes.iter().map(|q| (q.norm as u128).pow(q.e)).product();
            assert_eq!(norm, (p as u128).pow(d));
            assert_eq!(primes, factor_prime(f, p).unwrap());
        }
    }
}

#[test]
fn stream_is_sorted_and_counts_agree() {
    for (f, s, _) in fields() {
        let norms: Vec<u64> = s.stream(5000).unwrap().map(|m| m.norm).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]), "{f}");
        let phi = s.count_by_norm(5000).unwrap();
        assert_eq!(
            norms.len() as u64,
            phi.iter().map(|&c| c as u64).sum::<u64>()
        );
        assert_eq!(norms.len() as u64, s.count(5000).unwrap());
    }
}

#[test]
fn divisibility_census() {
    for (f, s, ideals) in fields() {
        let x = 10_000u64;
        for q in s.table().entries.iter().filter(|q| q.norm <= 100) {
            let single = Ideal::prime(f, q);
            let divisible = ideals
                .iter()
                .filter(|m| m.norm() <= x && single.divides(m))
                .count() as u64;
            assert_eq!(divisible, s.count(x / q.norm).unwrap(), "{f} {q:?}");
            assert_eq!(
                multiplicity_census(s, x, q).unwrap(),
                multiplicity_by_divisibility(s, x, q).unwrap()
            );
        }
    }
}

#[test]
fn liouville_and_moebius_agree_on_squarefree() {
    for (_, s, _) in fields() {
        for r in s.records(X, false).unwrap() {
            if r.mu != 0 {
                assert_eq!(r.mu, r.lambda);
            }
        }
        s.visit(X, |v| assert_eq!(v.mu() == 0, !v.squarefree))
            .unwrap();
    }
}

#[test]
fn exp_sums_and_histograms() {
    for (_, s, _) in fields() {
        for x in [1u64, 10, 999, X] {
            let n = s.count(x).unwrap() as f64;
            let z0 = stats::exp_sum(s, x, 0, 5).unwrap();
            assert_eq!(z0, Complex64::new(n, 0.0));
            let z = stats::exp_sum(s, x, 1, 2).unwrap();
            assert_eq!(z.re, stats::liouville_sum(s, x).unwrap() as f64);
            for q in [2u64, 3, 7] {
                let h = stats::residue_histogram(s, x, q).unwrap();
                assert_eq!(h.counts.iter().sum::<u64>() as f64, n);
                assert!(h.parseval_gap < 1e-9);
            }
        }
    }
}

#[test]
fn theorem1_identities() {
    for (_, s, _) in fields() {
        for x in [10u64, 1000, X] {
            let n = s.count(x).unwrap() as f64;
            let l = stats::liouville_sum(s, x).unwrap() as f64;
            let mut g = BoundedSequenceFn::parity();
            let d = theorem1_difference(s, &mut g, 0, 1, x).unwrap();
            assert_eq!(d.norm(), 2.0 * l.abs() / n);
            for (a, q, k1) in [(1i64, 3u64, 0u32), (2, 5, 3), (1, 4, 1)] {
                let mut g = BoundedSequenceFn::character(a, q);
                let d = theorem1_difference(s, &mut g, k1, k1 + 1, x).unwrap();
                let sum = stats::exp_sum(s, x, a as u64, q).unwrap();
                let expect = (Complex64::new(1.0, 0.0) - e_rational(a, q))
                    * e_rational(a * k1 as i64, q)
                    * sum
                    / n;
                assert!((d - expect).norm() < 1e-12, "{a}/{q}");
            }
        }
    }
}

fn random_table(domain: &Arc<IdealDomain>, seed: u64) -> ArithTable {
    ArithTable::from_int_fn(domain, |m| {
        let h =
            m.norm().wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ seed.wrapping_mul(m.omega() as u64 + 1);
        (h % 7) as i64 - 3
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn factorization_mod_p_remultiplies(
        coeffs in prop::collection::vec(-50i64..50, 1..7),
        pi in 0usize..25,
    ) {
        let p = [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71,
                 73, 79, 83, 89, 97][pi];
        let mut f = coeffs.clone();
        f.push(1);
        let fac = factor_poly_mod_p(&f, p).unwrap();
        let mut prod = vec![1u64];
        for (g, e) in &fac {
            prop_assert!(polymod::is_irreducible(g, p));
            prop_assert_eq!(*g.last().unwrap(), 1);
            for _ in 0..*e {
                prod = polymod::mul(&prod, g, p);
            }
        }
        prop_assert_eq!(prod, polymod::reduce(&f, p));
        prop_assert_eq!(fac, factor_poly_mod_p(&f, p).unwrap());
    }

    #[test]
    fn coprime_products_are_multiplicative(fi in field_index(), i in any::<prop::sample::Index>(), j in any::<prop::sample::Index>()) {
        let (_, _, ideals) = &fields()[fi];
        let small: Vec<&Ideal> = ideals.iter().filter(|m| m.norm() <= 1000).collect();
        let (a, b) = (small[i.index(small.len())], small[j.index(small.len())]);
        let g = ideal_gcd(a, b).unwrap();
        prop_assert_eq!(a.norm().gcd(&b.norm()) % g.norm(), 0);
        let ab = a.mul(b).unwrap();
        prop_assert_eq!(ab.norm(), a.norm() * b.norm());
        prop_assert_eq!(ab.omega(), a.omega() + b.omega());
        prop_assert!(a.divides(&ab) && b.divides(&ab));
        prop_assert_eq!(ab.quotient(a).unwrap(), b.clone());
    }

    #[test]
    fn annulus_census_is_additive(fi in field_index(), lo in 0.0f64..1.5, w1 in 0.0f64..1.0, w2 in 0.0f64..1.0) {
        let (_, s, _) = &fields()[fi];
        let base = 16.0;
        let (mid, hi) = (lo + w1, (lo + w1 + w2).min(3.5));
        let mid = mid.min(hi);
        let a = annulus_census(s, base, lo, mid).unwrap();
        let b = annulus_census(s, base, mid, hi).unwrap();
        let c = annulus_census(s, base, lo, hi).unwrap();
        prop_assert_eq!(a.prime_count + b.prime_count, c.prime_count);
        prop_assert_eq!(a.ideal_count + b.ideal_count, c.ideal_count);
    }

    #[test]
    fn convolution_is_commutative_and_associative(seeds in (0u64..1000, 0u64..1000, 0u64..1000)) {
        static DOMAIN: OnceLock<Arc<IdealDomain>> = OnceLock::new();
        let domain = DOMAIN.get_or_init(|| IdealDomain::new(&FieldSpec::gaussian(), 300).unwrap());
        let (f, g, h) = (random_table(domain, seeds.0), random_table(domain, seeds.1), random_table(domain, seeds.2));
        prop_assert!(dirichlet_convolve(&f, &g).unwrap() == dirichlet_convolve(&g, &f).unwrap());
        let left = dirichlet_convolve(&dirichlet_convolve(&f, &g).unwrap(), &h).unwrap();
        let right = dirichlet_convolve(&f, &dirichlet_convolve(&g, &h).unwrap()).unwrap();
        prop_assert!(left == right);
        prop_assert!(dirichlet_convolve(&ArithTable::delta(domain), &f).unwrap() == f);
    }

    #[test]
    fn prop2_sides_are_consistent(fi in field_index(), picks in prop::collection::btree_set(0usize..60, 1..8)) {
        let (f, s, ideals) = &fields()[fi];
        let members: Vec<Ideal> = picks.iter().map(|&i| ideals[i].clone()).collect();
        let set = IdealSet::new(f, members).unwrap();
        let x = 5000;
        let raw = prop2_sides(s, &set, x, 0.8, 5.0).unwrap();
        prop_assert!(raw.lhs >= 0.0 && raw.rhs >= 0.0);
        let cor = renormalize(&raw, x, 0.8);
        let a2 = raw.weight_total * raw.weight_total;
        prop_assert!((cor.lhs * raw.ideal_count as f64 * a2 / x as f64 - raw.lhs).abs() <= 1e-9 * raw.lhs.max(1.0));
        prop_assert!((cor.rhs * 0.8 * a2 - raw.rhs).abs() <= 1e-9 * raw.rhs.max(1.0));
    }

    #[test]
    fn property_a_certificate_agrees_with_exhaustive(
        steps in prop::collection::vec((1u64..40, 1u64..6), 1..4),
        m in 1.0f64..30.0,
    ) {
        let sets: Vec<ASet> = steps.iter().map(|&(step, len)| ASet::Progression { step, len }).collect();
        if property_a_certificate(&sets, m) {
            prop_assert_eq!(property_a_exhaustive(&sets, m), Some(true));
        }
    }
}
