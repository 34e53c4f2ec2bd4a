#![allow(dead_code)]

use logderham::algebra::Rational;
use logderham::arrangement::Arrangement;
use logderham::weights::WeightVector;

pub fn arr(rows: &[&[i64]]) -> Arrangement {
    Arrangement::from_integers(rows).expect("valid arrangement")
}

pub fn weights(items: &[&str]) -> WeightVector {
    WeightVector::parse(items).expect("valid weights")
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

/// yz(x+y)(x−y)(x+z)(x−z)(y+z)(y−z) in variables x, y, z.
pub fn deleted_b3() -> Arrangement {
    arr(&[
        &[0, 1, 0],
        &[0, 0, 1],
        &[1, 1, 0],
        &[1, -1, 0],
        &[1, 0, 1],
        &[1, 0, -1],
        &[0, 1, 1],
        &[0, 1, -1],
    ])
}

pub const B3_WEIGHTS: [&str; 8] = ["1/2", "1/2", "-1/2", "-1/2", "1/4", "1/4", "1/4", "1/4"];

/// The test suite of arrangements, by name.
pub fn suite() -> Vec<(&'static str, Arrangement)> {
    vec![
        ("x", arr(&[&[1]])),
        ("xy", arr(&[&[1, 0], &[0, 1]])),
        ("xyz", arr(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]])),
        ("xy(x+y)", arr(&[&[1, 0], &[0, 1], &[1, 1]])),
        ("braid", arr(&[&[1, -1, 0], &[1, 0, -1], &[0, 1, -1]])),
        ("deleted B3", deleted_b3()),
    ]
}

pub fn constant_weights(d: usize, value: &str) -> WeightVector {
    weights(&vec![value; d])
}

pub fn binom(n: i64, k: i64) -> usize {
    if k < 0 || n < k {
        return 0;
    }
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1)) as usize
}

/// Dimension of degree-`m` polynomials in `n` variables.
pub fn dim_r(n: i64, m: i64) -> usize {
    if m < 0 {
        0
    } else {
        binom(m + n - 1, n - 1)
    }
}
