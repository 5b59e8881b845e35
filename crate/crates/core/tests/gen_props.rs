mod common;

use common::*;
use proptest::prelude::*;
use tenspec::gen;
use tenspec::OrbitTable;

/// `Σ coeff · Π x_j^{α_j}` evaluated directly.
fn poly(terms: &[(Vec<usize>, f64)], x: &[f64]) -> f64 {
    terms
        .iter()
        .map(|(alpha, c)| {
            c * alpha
                .iter()
                .zip(x)
                .map(|(&e, v)| v.powi(e as i32))
                .product::<f64>()
        })
        .sum()
}

fn exponent(d: usize, n: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0..n, d).prop_map(move |idx| {
        let mut alpha = vec![0; n];
        for i in idx {
            alpha[i] += 1;
        }
        alpha
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn structured_families_are_exactly_symmetric(d in 2usize..=5, n in 1usize..=5) {
        for t in [gen::hilbert(d, n), gen::log_tensor(d, n), gen::arctan_tensor(d, n), gen::fraction_tensor(d, n)] {
            prop_assert_eq!(t.unwrap().max_asymmetry(), 0.0);
        }
    }

    #[test]
    fn random_families_are_reproducible(d in 2usize..=4, n in 1usize..=5, seed in any::<u64>()) {
        let a = gen::random_gaussian_sym(d, n, seed).unwrap();
        let a2 = gen::random_gaussian_sym(d, n, seed).unwrap();
        prop_assert_eq!(a.as_slice(), a2.as_slice());
        prop_assert!(a.is_symmetric(1e-14));
        let s = gen::random_sparse_nonneg(d, n, 0.9, seed).unwrap();
        let s2 = gen::random_sparse_nonneg(d, n, 0.9, seed).unwrap();
        prop_assert_eq!(s.as_slice(), s2.as_slice());
        prop_assert!(s.is_symmetric(0.0));
        prop_assert!(s.as_slice().iter().all(|v| *v >= 0.0));
    }

    #[test]
    fn monomials_round_trip(
        (d, n, terms) in (1usize..=5, 1usize..=4).prop_flat_map(|(d, n)| {
            (Just(d), Just(n), prop::collection::vec((exponent(d, n), -3.0f64..3.0), 1..6))
        }),
        seed in any::<u64>(),
    ) {
        let t = gen::from_monomials(d, n, &terms).unwrap();
        prop_assert!(t.is_symmetric(1e-14));
        let mut r = rng(seed);
        for _ in 0..100 {
            let x = unit_vec(&mut r, n);
            let want = poly(&terms, &x);
            let got = rayleigh(&t, &x);
            let scale: f64 = terms.iter().map(|(_, c)| c.abs()).sum();
            prop_assert!((got - want).abs() <= 1e-10 * scale.max(1.0));
        }
    }
}

#[test]
fn wrong_degree_is_rejected() {
    assert!(gen::from_monomials(3, 2, &[(vec![1, 1], 1.0)]).is_err());
    assert!(gen::from_monomials(2, 2, &[(vec![2], 1.0)]).is_err());
}

#[test]
fn fixed_entries() {
    let h = gen::hilbert(2, 2).unwrap();
    assert_eq!(h.as_slice(), &[1.0, 0.5, 0.5, 1.0 / 3.0]);
    for d in 2..=5 {
        assert_eq!(gen::hilbert(d, 3).unwrap().get(&vec![0; d]), 1.0);
        assert_eq!(gen::log_tensor(d, 3).unwrap().get(&vec![0; d]), 0.0);
    }
    let f = gen::fraction_tensor(3, 2).unwrap();
    assert!((f.get(&[0, 1, 1]) - (-1.0 + 0.5 + 0.5)).abs() < 1e-15);
}

#[test]
fn sparse_orbit_fraction() {
    let table = OrbitTable::new(3, 20);
    for seed in 0..20 {
        let t = gen::random_sparse_nonneg(3, 20, 0.9, seed).unwrap();
        let data = t.as_slice();
        let zero = (0..table.num_orbits())
            .filter(|&o| data[table.representative(o)] == 0.0)
            .count();
        let frac = zero as f64 / table.num_orbits() as f64;
        assert!((0.88..=0.92).contains(&frac), "seed {seed}: {frac}");
    }
    let dense = gen::random_sparse_nonneg(3, 5, 0.0, 1).unwrap();
    assert!(dense.as_slice().iter().all(|v| *v > 0.0));
}

#[test]
fn gaussian_mean_is_small() {
    let t = gen::random_gaussian_sym(3, 10, 17).unwrap();
    let mean = t.as_slice().iter().sum::<f64>() / t.len() as f64;
    assert!(mean.abs() <= 3.0 / (t.len() as f64).sqrt(), "{mean}");
}

#[test]
fn example5_matches_its_polynomial() {
    let t = gen::example5();
    let terms = gen::example5_terms();
    let mut r = rng(5);
    for _ in 0..50 {
        let x = unit_vec(&mut r, 3);
        let (x1, x2, x3) = (x[0], x[1], x[2]);
        let s = x1 * x1 + x2 * x2 + x3 * x3;
        let direct = 2.0 * s.powi(3)
            - (x1.powi(4) * x2 * x2 + x1 * x1 * x2.powi(4) + x3.powi(6)
                - 3.0 * x1 * x1 * x2 * x2 * x3 * x3);
        assert!((rayleigh(&t, &x) - direct).abs() <= 1e-12);
        assert!((poly(&terms, &x) - direct).abs() <= 1e-12);
    }
}
