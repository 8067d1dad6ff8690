use std::ops::{Add, Div, Mul, Neg, Sub};

use super::poly::{gcd, SparsePoly};
use super::{FieldError, RatField};

/// A reduced fraction num/den with monic denominator.
///
/// Because the representation is canonical, structural equality is field
/// equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RatFunc {
    num: SparsePoly,
    den: SparsePoly,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Checked binary arithmetic.
pub fn field_arith(a: &RatFunc, b: &RatFunc, op: ArithOp) -> Result<RatFunc, FieldError> {
    if a.field() != b.field() {
        return Err(FieldError::FieldMismatch);
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.try_div(b)?,
    })
}

impl RatFunc {
    pub fn from_poly(num: SparsePoly) -> Self {
        let den = SparsePoly::one(num.p(), num.nvars());
        RatFunc { num, den }
    }

    pub fn from_parts(num: SparsePoly, den: SparsePoly) -> Result<Self, FieldError> {
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.p() != den.p() || num.nvars() != den.nvars() {
            return Err(FieldError::FieldMismatch);
        }
        Ok(Self::reduce(num, den))
    }

    fn reduce(num: SparsePoly, den: SparsePoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                den: SparsePoly::one(num.p(), num.nvars()),
                num,
            };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        Self::normalize_sign(num, den)
    }

    fn normalize_sign(num: SparsePoly, den: SparsePoly) -> Self {
        let lc = den.leading().1;
        if lc == 1 {
            RatFunc { num, den }
        } else {
            let inv = super::poly::inv_mod(lc, num.p());
            RatFunc {
                num: num.scale(inv),
                den: den.scale(inv),
            }
        }
    }

    pub fn field(&self) -> RatField {
        RatField::new(self.num.p() as u32, self.num.nvars() as usize).expect("valid field")
    }

    pub fn num(&self) -> &SparsePoly {
        &self.num
    }

    pub fn den(&self) -> &SparsePoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// An element of the prime field.
    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Rough size measure used for pivot choice.
    pub fn weight(&self) -> usize {
        self.num.terms().len() + self.den.terms().len()
    }

    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(Self::normalize_sign(self.den.clone(), self.num.clone()))
    }

    pub fn try_div(&self, o: &Self) -> Result<Self, FieldError> {
        Ok(self * &o.inv()?)
    }

    pub fn pow(&self, k: u32) -> Self {
        RatFunc {
            num: self.num.pow(k),
            den: self.den.pow(k),
        }
    }

    /// Integer power; negative exponents need a nonzero base.
    pub fn powi(&self, k: i64) -> Result<Self, FieldError> {
        if k >= 0 {
            Ok(self.pow(k as u32))
        } else {
            Ok(self.inv()?.pow((-k) as u32))
        }
    }

    pub fn frobenius(&self) -> Self {
        RatFunc {
            num: self.num.frobenius(),
            den: self.den.frobenius(),
        }
    }

    /// `Some(r)` with r^p = self iff self lies in K^p.
    pub fn pth_root(&self) -> Option<Self> {
        Some(RatFunc {
            num: self.num.pth_root()?,
            den: self.den.pth_root()?,
        })
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        assert_eq!(self.field(), o.field(), "field mismatch");
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::reduce(self.num.add(&o.num), self.den.clone());
        }
        let g = gcd(&self.den, &o.den);
        let b1 = self.den.div_exact(&g).expect("gcd divides");
        let d1 = o.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d1).add(&o.num.mul(&b1));
        if num.is_zero() {
            return RatFunc::from_poly(num);
        }
        // The only possible common factors of num and the denominator divide g.
        let h = gcd(&num, &g);
        let (num, g) = if h.is_one() {
            (num, g)
        } else {
            (
                num.div_exact(&h).expect("gcd divides"),
                g.div_exact(&h).expect("gcd divides"),
            )
        };
        RatFunc::normalize_sign(num, b1.mul(&d1).mul(&g))
    }
}

impl<'a> Neg for &'a RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        assert_eq!(self.field(), o.field(), "field mismatch");
        if self.is_zero() || o.is_zero() {
            return self.field().zero();
        }
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let cut = |a: &SparsePoly, g: &SparsePoly| {
            if g.is_one() {
                a.clone()
            } else {
                a.div_exact(g).expect("gcd divides")
            }
        };
        let num = cut(&self.num, &g1).mul(&cut(&o.num, &g2));
        let den = cut(&self.den, &g2).mul(&cut(&o.den, &g1));
        RatFunc::normalize_sign(num, den)
    }
}

impl<'a> Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    /// Panics on a zero divisor; use [`RatFunc::try_div`] when that can happen.
    fn div(self, o: &RatFunc) -> RatFunc {
        self.try_div(o).expect("division by zero")
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, o: &RatFunc) -> RatFunc { (&self).$m(o) }
        }
        impl<'a> $tr<RatFunc> for &'a RatFunc {
            type Output = RatFunc;
            fn $m(self, o: RatFunc) -> RatFunc { self.$m(&o) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}
