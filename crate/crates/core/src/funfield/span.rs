//! Exact linear algebra over K and finite-dimensional K^p-subspaces of K.
//!
//! A K^p-subspace is handled through root coordinates: since Frobenius is
//! injective, K^p-linear relations among elements become K-linear relations
//! among their coordinate vectors.

use super::lambda::{root_coords, scaled_root_coords};
use super::{RatField, RatFunc};

#[derive(Clone, Debug)]
struct Row {
    pivot: usize,
    vec: Vec<RatFunc>,
    combo: Vec<RatFunc>,
}

/// Incremental row echelon form that tracks how each row was assembled
/// from the inserted vectors.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: RatField,
    width: usize,
    inserted: usize,
    rows: Vec<Row>,
}

fn axpy(dst: &mut [RatFunc], f: &RatFunc, src: &[RatFunc]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d = &*d - &(f * s);
        }
    }
}

fn grow(v: &mut Vec<RatFunc>, len: usize, zero: &RatFunc) {
    while v.len() < len {
        v.push(zero.clone());
    }
}

impl Echelon {
    pub fn new(field: RatField, width: usize) -> Self {
        Echelon {
            field,
            width,
            inserted: 0,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the rows; returns the remainder and the
    /// combination (over inserted vectors) that was subtracted.
    fn reduce_tracked(&self, mut v: Vec<RatFunc>) -> (Vec<RatFunc>, Vec<RatFunc>) {
        let zero = self.field.zero();
        let mut used = vec![zero.clone(); self.inserted];
        for row in &self.rows {
            let f = v[row.pivot].clone();
            if f.is_zero() {
                continue;
            }
            axpy(&mut v, &f, &row.vec);
            for (u, c) in used.iter_mut().zip(&row.combo) {
                if !c.is_zero() {
                    *u = &*u + &(&f * c);
                }
            }
        }
        (v, used)
    }

    /// Remainder of `v` modulo the row space; a fixed linear projection.
    pub fn remainder(&self, mut v: Vec<RatFunc>) -> Vec<RatFunc> {
        for row in &self.rows {
            let f = v[row.pivot].clone();
            if !f.is_zero() {
                axpy(&mut v, &f, &row.vec);
            }
        }
        v
    }

    /// Expresses `v` as a combination of the inserted vectors, if possible.
    pub fn solve(&self, v: Vec<RatFunc>) -> Option<Vec<RatFunc>> {
        assert_eq!(v.len(), self.width);
        let (rem, used) = self.reduce_tracked(v);
        rem.iter().all(RatFunc::is_zero).then_some(used)
    }

    /// Inserts `v`. On dependence returns `Err(c)` with Σ c_i v_i = 0 and
    /// c = 1 on the new vector.
    pub fn insert(&mut self, v: Vec<RatFunc>) -> Result<(), Vec<RatFunc>> {
        assert_eq!(v.len(), self.width);
        let zero = self.field.zero();
        let (rem, used) = self.reduce_tracked(v);
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo: Vec<RatFunc> = used.iter().map(|c| -c).collect();
        combo.push(self.field.one());
        for row in &mut self.rows {
            grow(&mut row.combo, self.inserted, &zero);
        }
        let pivot = rem
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .min_by_key(|(i, x)| (x.weight(), *i))
            .map(|(i, _)| i);
        match pivot {
            None => Err(combo),
            Some(pivot) => {
                let inv = rem[pivot].inv().expect("nonzero pivot");
                let vec = rem.iter().map(|x| x * &inv).collect();
                let combo = combo.iter().map(|x| x * &inv).collect();
                debug_assert_eq!(idx + 1, self.inserted);
                self.rows.push(Row { pivot, vec, combo });
                Ok(())
            }
        }
    }
}

/// Basis of { c : Σ c_i rows_i = 0 }.
pub fn left_kernel(field: RatField, rows: &[Vec<RatFunc>]) -> Vec<Vec<RatFunc>> {
    let width = rows.first().map_or(0, Vec::len);
    let mut ech = Echelon::new(field, width);
    let mut out = Vec::new();
    for r in rows {
        if let Err(mut c) = ech.insert(r.clone()) {
            grow(&mut c, rows.len(), &field.zero());
            out.push(c);
        }
    }
    out
}

/// A finite-dimensional K^p-subspace of K with an independent generating list.
#[derive(Clone, Debug)]
pub struct KpSpan {
    field: RatField,
    basis: Vec<RatFunc>,
    ech: Echelon,
}

impl KpSpan {
    pub fn empty(field: RatField) -> Self {
        KpSpan {
            field,
            basis: Vec::new(),
            ech: Echelon::new(field, field.pn()),
        }
    }

    /// Span of `gens`, silently dropping dependent generators.
    pub fn from_gens<'a>(field: RatField, gens: impl IntoIterator<Item = &'a RatFunc>) -> Self {
        let mut s = Self::empty(field);
        for g in gens {
            s.push(g.clone());
        }
        s
    }

    /// The field K^p[gens], built one generator at a time.
    pub fn field_closure(field: RatField, gens: &[RatFunc]) -> Self {
        let mut s = Self::from_gens(field, [&field.one()]);
        for g in gens {
            if s.contains(g) {
                continue;
            }
            let base = s.basis.clone();
            let mut power = field.one();
            for _ in 1..field.p() {
                power = &power * g;
                for b in &base {
                    s.push(b * &power);
                }
            }
        }
        s
    }

    pub fn field(&self) -> RatField {
        self.field
    }

    /// Adds `x`; returns false if it was already in the span.
    pub fn push(&mut self, x: RatFunc) -> bool {
        if x.is_zero() {
            return false;
        }
        if self.contains(&x) {
            return false;
        }
        let rc = root_coords(&x);
        self.ech
            .insert(rc)
            .expect("independent by the remainder test");
        self.basis.push(x);
        true
    }

    pub fn basis(&self) -> &[RatFunc] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, x: &RatFunc) -> bool {
        // Membership is unchanged by scaling the coordinate vector.
        x.is_zero()
            || self
                .ech
                .remainder(scaled_root_coords(x).0)
                .iter()
                .all(RatFunc::is_zero)
    }

    /// Coefficients c with x = Σ c_i^p · basis_i.
    pub fn express(&self, x: &RatFunc) -> Option<Vec<RatFunc>> {
        let (q, d) = scaled_root_coords(x);
        let mut c: Vec<RatFunc> = self.ech.solve(q)?.iter().map(|c| c / &d).collect();
        grow(&mut c, self.basis.len(), &self.field.zero());
        Some(c)
    }

    /// Inverse of [`KpSpan::express`].
    pub fn combine(&self, coeffs: &[RatFunc]) -> RatFunc {
        let mut acc = self.field.zero();
        for (c, b) in coeffs.iter().zip(&self.basis) {
            if !c.is_zero() {
                acc = &acc + &(&c.frobenius() * b);
            }
        }
        acc
    }

    pub fn remainder_coords(&self, x: &RatFunc) -> Vec<RatFunc> {
        self.ech.remainder(root_coords(x))
    }

    pub fn is_subspace_of(&self, o: &KpSpan) -> bool {
        self.basis.iter().all(|b| o.contains(b))
    }

    pub fn same_space(&self, o: &KpSpan) -> bool {
        self.dim() == o.dim() && self.is_subspace_of(o)
    }

    /// Whether x·self ⊆ self.
    pub fn stable_under(&self, x: &RatFunc) -> bool {
        self.basis.iter().all(|b| self.contains(&(x * b)))
    }
}
