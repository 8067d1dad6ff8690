//! Exact arithmetic in K = F_p(x1, ..., xn) for p in {2, 3, 5} and n <= 3,
//! together with lambda-coordinates and p-independence.

mod dense;
mod lambda;
mod parse;
pub mod poly;
mod ratfunc;
mod span;

pub use lambda::{is_p_independent, lambda, p_monomial, root_coords, LambdaCoords, PMonomialIndex};
pub use parse::Notation;
pub use poly::{Monomial, SparsePoly};
pub use ratfunc::{field_arith, ArithOp, RatFunc};
pub use span::{left_kernel, Echelon, KpSpan};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("unsupported field: p = {p}, n = {n} (need p in {{2,3,5}}, 1 <= n <= 3)")]
    Unsupported { p: u32, n: usize },
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// The ambient field F_p(x1..xn).
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct RatField {
    p: u8,
    nvars: u8,
}

impl RatField {
    pub fn new(p: u32, nvars: usize) -> Result<Self, FieldError> {
        if !matches!(p, 2 | 3 | 5) || nvars == 0 || nvars > poly::MAX_VARS {
            return Err(FieldError::Unsupported { p, n: nvars });
        }
        Ok(RatField {
            p: p as u8,
            nvars: nvars as u8,
        })
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn nvars(&self) -> usize {
        self.nvars as usize
    }

    /// [K : K^p] = p^n.
    pub fn pn(&self) -> usize {
        (self.p as usize).pow(self.nvars as u32)
    }

    pub fn zero(&self) -> RatFunc {
        RatFunc::from_poly(SparsePoly::zero(self.p, self.nvars))
    }

    pub fn one(&self) -> RatFunc {
        RatFunc::from_poly(SparsePoly::one(self.p, self.nvars))
    }

    /// Image of an integer in F_p.
    pub fn constant(&self, c: i64) -> RatFunc {
        let c = c.rem_euclid(self.p as i64) as u8;
        RatFunc::from_poly(SparsePoly::constant(self.p, self.nvars, c))
    }

    pub fn scalar(&self, c: PrimeScalar) -> RatFunc {
        assert_eq!(c.p(), self.p(), "scalar from a different prime field");
        self.constant(c.value() as i64)
    }

    pub fn var(&self, i: usize) -> RatFunc {
        RatFunc::from_poly(SparsePoly::var(self.p, self.nvars, i))
    }

    pub fn vars(&self) -> Vec<RatFunc> {
        (0..self.nvars()).map(|i| self.var(i)).collect()
    }

    /// Base-p digits of a p-monomial index, least significant first.
    pub fn digits(&self, mut i: usize, n: usize) -> Vec<u32> {
        let p = self.p as usize;
        (0..n)
            .map(|_| {
                let d = i % p;
                i /= p;
                d as u32
            })
            .collect()
    }
}

/// An element of F_p.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeScalar {
    value: u8,
    p: u8,
}

impl PrimeScalar {
    pub fn new(value: i64, p: u32) -> Self {
        PrimeScalar {
            value: value.rem_euclid(p as i64) as u8,
            p: p as u8,
        }
    }

    pub fn value(&self) -> u32 {
        self.value as u32
    }

    pub fn p(&self) -> u32 {
        self.p as u32
    }

    pub fn add(self, o: Self) -> Self {
        Self::new(self.value as i64 + o.value as i64, self.p())
    }

    pub fn mul(self, o: Self) -> Self {
        Self::new(self.value as i64 * o.value as i64, self.p())
    }

    pub fn inv(self) -> Option<Self> {
        (self.value != 0).then(|| PrimeScalar {
            value: poly::inv_mod(self.value, self.p),
            p: self.p,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsupported_fields() {
        assert!(RatField::new(7, 1).is_err());
        assert!(RatField::new(2, 4).is_err());
        assert!(RatField::new(2, 0).is_err());
        assert_eq!(RatField::new(3, 2).unwrap().pn(), 9);
    }

    #[test]
    fn scalar_arithmetic() {
        let a = PrimeScalar::new(-1, 5);
        assert_eq!(a.value(), 4);
        assert_eq!(a.mul(a).value(), 1);
        assert_eq!(a.inv().unwrap().mul(a).value(), 1);
        assert_eq!(PrimeScalar::new(3, 3).inv(), None);
        assert_eq!(
            PrimeScalar::new(2, 3).add(PrimeScalar::new(2, 3)).value(),
            1
        );
    }

    #[test]
    fn digits_least_significant_first() {
        let f = RatField::new(3, 2).unwrap();
        assert_eq!(f.digits(5, 2), vec![2, 1]);
    }
}
