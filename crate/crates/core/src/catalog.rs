//! Small named matroids used by tests, the acceptance campaign and the CLI.

use crate::matroid::{make_paving_from_hyperplanes, make_random_paving, make_uniform, Matroid};
use crate::set::ElementSet;

/// `U_{r,n}`.
pub fn uniform(r: usize, n: usize) -> Matroid {
    make_uniform(n, r).expect("uniform parameters in range")
}

/// Rank 2 on `{0,1,2,3}`: every pair except `{0,1}`.
pub fn m1() -> Matroid {
    make_paving_from_hyperplanes(4, 2, &[ElementSet::from_elements([0, 1])]).expect("valid")
}

/// Rank 3 on `{0,…,5}`: every triple not inside `{0,1,2,3}`.
pub fn m2() -> Matroid {
    make_paving_from_hyperplanes(6, 3, &[ElementSet::from_elements([0, 1, 2, 3])]).expect("valid")
}

/// Rank 4 on `{0,…,8}`: every 4-set not inside `{0,…,4}`. Large enough for
/// lifted tuples to contain sets of type 3 and above.
pub fn m3() -> Matroid {
    make_paving_from_hyperplanes(9, 4, &[ElementSet::from_elements(0..5)]).expect("valid")
}

/// The seven lines of the Fano plane on `{0,…,6}`.
pub fn fano_lines() -> Vec<ElementSet> {
    [
        [0, 1, 2],
        [0, 3, 4],
        [0, 5, 6],
        [1, 3, 5],
        [1, 4, 6],
        [2, 3, 6],
        [2, 4, 5],
    ]
    .iter()
    .map(|l| ElementSet::from_elements(l.iter().copied()))
    .collect()
}

pub fn fano() -> Matroid {
    make_paving_from_hyperplanes(7, 3, &fano_lines()).expect("valid")
}

/// A Fano automorphism (collineation): maps every line to a line.
pub fn fano_automorphism() -> [usize; 7] {
    // swaps 0↔1 and 4↔5
    [1, 0, 2, 3, 5, 4, 6]
}

/// Named catalog entries paired with a label.
pub fn named() -> Vec<(&'static str, Matroid)> {
    vec![("M1", m1()), ("M2", m2()), ("Fano", fano())]
}

/// Every `U_{r,n}` with `1 ≤ r ≤ min(4, n)` and `n ≤ 8`.
pub fn small_uniform() -> Vec<Matroid> {
    let mut out = Vec::new();
    for n in 1..=8 {
        for r in 1..=n.min(4) {
            out.push(uniform(r, n));
        }
    }
    out
}

/// Seeded random paving matroids with `n ≤ 9`, `r ≤ 4`, at least one
/// non-trivial hyperplane each.
pub fn random_paving(count: usize, seed: u64) -> Vec<Matroid> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(5..=9);
        let r = rng.gen_range(2..=4usize.min(n - 2));
        let k = rng.gen_range(1..=4);
        let sub_seed = rng.gen();
        if let Ok(m) = make_random_paving(n, r, k, sub_seed) {
            out.push(m);
        }
    }
    out
}
