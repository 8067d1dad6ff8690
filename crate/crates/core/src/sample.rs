//! Seeded random elements for property checks and sampling validators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::funfield::{KpSpan, Monomial, RatField, RatFunc, SparsePoly};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Size limits for random elements.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub max_deg: u32,
    pub max_terms: usize,
    /// Probability of drawing a non-trivial denominator.
    pub fraction: f64,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            max_deg: 2,
            max_terms: 3,
            fraction: 0.3,
        }
    }
}

impl Shape {
    pub const TINY: Shape = Shape {
        max_deg: 1,
        max_terms: 2,
        fraction: 0.2,
    };
}

pub fn poly<R: Rng + ?Sized>(
    rng: &mut R,
    k: RatField,
    max_deg: u32,
    max_terms: usize,
) -> SparsePoly {
    let n = k.nvars();
    let count = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<(Monomial, u32)> = (0..count)
        .map(|_| {
            let mut e = [0u32; crate::funfield::poly::MAX_VARS];
            let deg = rng.gen_range(0..=max_deg);
            for _ in 0..deg {
                e[rng.gen_range(0..n)] += 1;
            }
            (Monomial(e), rng.gen_range(1..k.p()))
        })
        .collect();
    SparsePoly::from_terms(k.p() as u8, n as u8, terms)
}

pub fn elem<R: Rng + ?Sized>(rng: &mut R, k: RatField, shape: Shape) -> RatFunc {
    let num = poly(rng, k, shape.max_deg, shape.max_terms);
    if rng.gen_bool(shape.fraction.clamp(0.0, 1.0)) {
        loop {
            let den = poly(rng, k, shape.max_deg.max(1), shape.max_terms);
            if !den.is_zero() {
                return RatFunc::from_parts(num, den).expect("nonzero denominator");
            }
        }
    }
    RatFunc::from_poly(num)
}

pub fn nonzero<R: Rng + ?Sized>(rng: &mut R, k: RatField, shape: Shape) -> RatFunc {
    loop {
        let x = elem(rng, k, shape);
        if !x.is_zero() {
            return x;
        }
    }
}

/// Σ c_i^p · b_i with random coefficients c_i.
pub fn in_span<R: Rng + ?Sized>(rng: &mut R, span: &KpSpan, shape: Shape) -> RatFunc {
    let k = span.field();
    let coeffs: Vec<RatFunc> = span
        .basis()
        .iter()
        .map(|_| {
            if rng.gen_bool(0.25) {
                k.zero()
            } else {
                elem(rng, k, shape)
            }
        })
        .collect();
    span.combine(&coeffs)
}

pub fn nonzero_in_span<R: Rng + ?Sized>(rng: &mut R, span: &KpSpan, shape: Shape) -> RatFunc {
    assert!(
        span.dim() > 0,
        "cannot sample a nonzero element of the zero space"
    );
    loop {
        let x = in_span(rng, span, shape);
        if !x.is_zero() {
            return x;
        }
    }
}
