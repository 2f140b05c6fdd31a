#![allow(dead_code)]

use pgl2z::matrix::named;
use pgl2z::ProjectiveMatrix;
use proptest::prelude::*;
use rand::Rng;

/// `x+1`, `x-1`, `1/x`, `-x`; together they generate the whole group.
pub const GENERATORS: [ProjectiveMatrix; 4] =
    [named::SHIFT, named::SHIFT_INV, named::INV, named::NEG];

pub fn word(letters: &[usize]) -> ProjectiveMatrix {
    letters.iter().fold(named::IDENTITY, |acc, &i| {
        acc.mul(&GENERATORS[i % 4]).unwrap()
    })
}

pub fn random_element<R: Rng>(rng: &mut R, max_len: usize) -> ProjectiveMatrix {
    let len = rng.gen_range(0..=max_len);
    let letters: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
    word(&letters)
}

pub fn element(max_len: usize) -> impl Strategy<Value = ProjectiveMatrix> {
    prop::collection::vec(0usize..4, 0..=max_len).prop_map(|w| word(&w))
}

/// Plain 2×2 integer product, no normalization.
pub fn raw_mul(x: [i64; 4], y: [i64; 4]) -> [i64; 4] {
    [
        x[0] * y[0] + x[1] * y[2],
        x[0] * y[1] + x[1] * y[3],
        x[2] * y[0] + x[3] * y[2],
        x[2] * y[1] + x[3] * y[3],
    ]
}

pub fn is_plus_minus_identity(m: [i64; 4]) -> bool {
    m == [1, 0, 0, 1] || m == [-1, 0, 0, -1]
}
