//! The five small reference instances (n = 3).

use super::from_monomials;
use crate::tensor::DenseTensor;

type Entry = ([usize; 4], f64);

/// Order-`d` tensor whose orbit of each listed sorted 1-based index holds
/// `value` (only the first `d` positions of the index are read).
fn orbit_filled(d: usize, entries: &[Entry]) -> DenseTensor {
    let mut t = DenseTensor::zeros(d, 3).expect("valid shape");
    for (idx, v) in entries {
        let base: Vec<usize> = idx[..d].iter().map(|i| i - 1).collect();
        for p in crate::tensor::all_permutations(d) {
            let permuted: Vec<usize> = p.iter().map(|&k| base[k]).collect();
            t.set(&permuted, *v);
        }
    }
    t
}

pub fn example1() -> DenseTensor {
    orbit_filled(
        3,
        &[
            ([1, 1, 1, 0], -0.1281),
            ([1, 1, 2, 0], 0.0516),
            ([1, 1, 3, 0], -0.0954),
            ([1, 2, 2, 0], -0.1958),
            ([1, 2, 3, 0], -0.1790),
            ([1, 3, 3, 0], -0.2676),
            ([2, 2, 2, 0], 0.3251),
            ([2, 2, 3, 0], 0.2513),
            ([2, 3, 3, 0], 0.1773),
            ([3, 3, 3, 0], 0.0338),
        ],
    )
}

pub fn example2() -> DenseTensor {
    orbit_filled(
        3,
        &[
            ([1, 1, 1, 0], 0.0517),
            ([1, 1, 2, 0], 0.3579),
            ([1, 1, 3, 0], 0.5298),
            ([1, 2, 2, 0], 0.7544),
            ([1, 2, 3, 0], 0.2156),
            ([1, 3, 3, 0], 0.3612),
            ([2, 2, 2, 0], 0.3943),
            ([2, 2, 3, 0], 0.0146),
            ([2, 3, 3, 0], 0.6718),
            ([3, 3, 3, 0], 0.9723),
        ],
    )
}

pub fn example3() -> DenseTensor {
    orbit_filled(
        4,
        &[
            ([1, 1, 1, 1], 0.2883),
            ([1, 1, 1, 2], -0.0031),
            ([1, 1, 1, 3], 0.1973),
            ([1, 1, 2, 2], -0.2485),
            ([1, 1, 2, 3], -0.2939),
            ([1, 1, 3, 3], 0.3847),
            ([1, 2, 2, 2], 0.2972),
            ([1, 2, 2, 3], 0.1862),
            ([1, 2, 3, 3], 0.0919),
            ([1, 3, 3, 3], -0.3619),
            ([2, 2, 2, 2], 0.1241),
            ([2, 2, 2, 3], -0.3420),
            ([2, 2, 3, 3], 0.2127),
            ([2, 3, 3, 3], 0.2727),
            ([3, 3, 3, 3], -0.3054),
        ],
    )
}

/// One entry per sorted index, then symmetrized, so each orbit holds its
/// listed value divided by the orbit size. The source lists index 2223
/// twice; the second occurrence (-0.405544) is the otherwise missing 2333.
pub fn example4() -> DenseTensor {
    let entries: [Entry; 15] = [
        ([1, 1, 1, 1], 0.74694),
        ([1, 1, 1, 2], -0.435103),
        ([1, 1, 2, 2], 0.454945),
        ([1, 2, 2, 2], 0.0657818),
        ([2, 2, 2, 2], 1.0),
        ([1, 1, 1, 3], 0.37089),
        ([1, 1, 2, 3], -0.29883),
        ([1, 2, 2, 3], -0.795157),
        ([2, 2, 2, 3], 0.139751),
        ([1, 1, 3, 3], 1.24733),
        ([1, 2, 3, 3], 0.714359),
        ([2, 2, 3, 3], 0.316264),
        ([1, 3, 3, 3], -0.397391),
        ([2, 3, 3, 3], -0.405544),
        ([3, 3, 3, 3], 0.794869),
    ];
    let mut t = DenseTensor::zeros(4, 3).expect("valid shape");
    for (idx, v) in entries {
        let i: Vec<usize> = idx.iter().map(|k| k - 1).collect();
        t.set(&i, v);
    }
    t.symmetrize()
}

/// Monomials of `2‖x‖⁶ − (x₁⁴x₂² + x₁²x₂⁴ + x₃⁶ − 3x₁²x₂²x₃²)`.
pub fn example5_terms() -> Vec<(Vec<usize>, f64)> {
    let mut terms = Vec::new();
    // 2 (x₁² + x₂² + x₃²)³ by the multinomial theorem.
    for a in 0..=3usize {
        for b in 0..=3 - a {
            let c = 3 - a - b;
            let multinomial = 6.0
                / [a, b, c]
                    .iter()
                    .map(|&k| [1.0, 1.0, 2.0, 6.0][k])
                    .product::<f64>();
            terms.push((vec![2 * a, 2 * b, 2 * c], 2.0 * multinomial));
        }
    }
    terms.push((vec![4, 2, 0], -1.0));
    terms.push((vec![2, 4, 0], -1.0));
    terms.push((vec![0, 0, 6], -1.0));
    terms.push((vec![2, 2, 2], 3.0));
    terms
}

pub fn example5() -> DenseTensor {
    from_monomials(6, 3, &example5_terms()).expect("degree-6 terms")
}

/// Reference instance `k` in `1..=5`.
pub fn example(k: usize) -> Option<DenseTensor> {
    match k {
        1 => Some(example1()),
        2 => Some(example2()),
        3 => Some(example3()),
        4 => Some(example4()),
        5 => Some(example5()),
        _ => None,
    }
}
