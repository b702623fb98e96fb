#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;
use spindiff::{Expr, FreqVec, Scalar};

pub fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// `a + b*sqrt2 + i*(c + d*sqrt2)` from small numerator/denominator pairs.
pub fn scalar(parts: [(i64, i64); 4]) -> Scalar {
    let [a, b, c, d] = parts.map(|(n, den)| q(n, den));
    Scalar::from_parts(a, b, c, d)
}

pub fn arb_scalar() -> impl Strategy<Value = Scalar> {
    let part = (-9i64..=9, 1i64..=6);
    [part.clone(), part.clone(), part.clone(), part].prop_map(scalar)
}

pub fn arb_freq() -> impl Strategy<Value = FreqVec> {
    [-4i32..=4, -4i32..=4, -2i32..=2, -2i32..=2].prop_map(FreqVec::from_array)
}

pub fn arb_expr() -> impl Strategy<Value = Expr> {
    prop::collection::vec((arb_freq(), arb_scalar()), 0..6).prop_map(Expr::from_terms)
}

/// Expressions in `theta` and `phi` only.
pub fn arb_expr_2d() -> impl Strategy<Value = Expr> {
    let f = (-4i32..=4, -4i32..=4).prop_map(|(m, n)| FreqVec::theta_phi(m, n));
    prop::collection::vec((f, arb_scalar()), 0..5).prop_map(Expr::from_terms)
}

pub fn random_expr<R: Rng>(rng: &mut R) -> Expr {
    let n = rng.random_range(0..6);
    Expr::from_terms((0..n).map(|_| {
        let f =
            [rng.random_range(-4..=4), rng.random_range(-4..=4), rng.random_range(-2..=2), rng.random_range(-2..=2)];
        let parts = [(); 4].map(|_| {
            if rng.random_bool(0.4) {
                (0, 1)
            } else {
                (rng.random_range(-9..=9), rng.random_range(1..=6))
            }
        });
        (FreqVec::from_array(f), scalar(parts))
    }))
}
