//! Lambda-coordinates relative to p-monomials, and p-independence.

use super::poly::{Monomial, SparsePoly};
use super::span::{Echelon, KpSpan};
use super::{FieldError, RatFunc};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PMonomialIndex {
    pub i: usize,
    pub n: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaCoords {
    pub coords: Vec<RatFunc>,
    pub defined: bool,
}

/// m_i(a) = Π a_j^{e_j} for the base-p digits e of i.
pub fn p_monomial(idx: PMonomialIndex, a: &[RatFunc]) -> Result<RatFunc, FieldError> {
    if a.len() != idx.n {
        return Err(FieldError::ArityMismatch {
            expected: idx.n,
            got: a.len(),
        });
    }
    // The empty tuple carries no field to build 1 in.
    let Some(first) = a.first() else {
        return Err(FieldError::ArityMismatch {
            expected: 1,
            got: 0,
        });
    };
    Ok(monomial_in(first.field(), idx, a))
}

fn monomial_in(k: super::RatField, idx: PMonomialIndex, a: &[RatFunc]) -> RatFunc {
    let mut acc = k.one();
    for (aj, e) in a.iter().zip(k.digits(idx.i, idx.n)) {
        if e > 0 {
            acc = &acc * &aj.pow(e);
        }
    }
    acc
}

/// Coordinates c with x = Σ c_i^p · m_i(x1..xn) over the ambient variables.
///
/// Writing x = N/D, the polynomial N·D^{p-1} splits by exponent residues
/// into p-th powers Q_e^p, and c_e = Q_e / D.
pub fn root_coords(x: &RatFunc) -> Vec<RatFunc> {
    let (q, d) = scaled_root_coords(x);
    if d.is_one() {
        return q;
    }
    q.into_iter().map(|c| &c / &d).collect()
}

/// The numerators Q_e and the common denominator D of [`root_coords`].
pub(crate) fn scaled_root_coords(x: &RatFunc) -> (Vec<RatFunc>, RatFunc) {
    let k = x.field();
    let (p, n) = (k.p(), k.nvars());
    if x.is_zero() {
        return (vec![k.zero(); k.pn()], k.one());
    }
    let mut buckets: Vec<Vec<(Monomial, u32)>> = vec![Vec::new(); k.pn()];
    let d = x.den();
    let nd = if d.is_one() {
        x.num().clone()
    } else {
        x.num().mul(&d.pow(p - 1))
    };
    for &(m, c) in nd.terms() {
        let mut idx = 0usize;
        let mut q = [0u32; super::poly::MAX_VARS];
        for j in (0..n).rev() {
            idx = idx * p as usize + (m.0[j] % p) as usize;
            q[j] = m.0[j] / p;
        }
        buckets[idx].push((Monomial(q), c as u32));
    }
    let coords = buckets
        .into_iter()
        .map(|b| RatFunc::from_poly(SparsePoly::from_terms(p as u8, n as u8, b)))
        .collect();
    (coords, RatFunc::from_poly(d.clone()))
}

/// Solves b = Σ λ_i^p · m_i(a). Undefined (all zero) unless a is
/// p-independent and b ∈ K^p[a].
pub fn lambda(a: &[RatFunc], b: &RatFunc) -> LambdaCoords {
    let k = b.field();
    let n = a.len();
    let size = (k.p() as usize).checked_pow(n as u32).unwrap_or(usize::MAX);
    let undefined = |len: usize| LambdaCoords {
        coords: vec![k.zero(); len],
        defined: false,
    };
    if size > k.pn() {
        return undefined(size.min(1 << 16));
    }
    let mut ech = Echelon::new(k, k.pn());
    for i in 0..size {
        let m = monomial_in(k, PMonomialIndex { i, n }, a);
        if ech.insert(root_coords(&m)).is_err() {
            return undefined(size);
        }
    }
    let (q, d) = scaled_root_coords(b);
    match ech.solve(q) {
        Some(coords) => LambdaCoords {
            coords: coords.iter().map(|c| c / &d).collect(),
            defined: true,
        },
        None => undefined(size),
    }
}

/// Whether the p-monomials in `c` are independent over K^p[over].
pub fn is_p_independent(c: &[RatFunc], over: &[RatFunc]) -> bool {
    let Some(x) = c.first().or(over.first()) else {
        return true;
    };
    let k = x.field();
    let base = KpSpan::field_closure(k, over);
    let target = (k.p() as usize)
        .checked_pow(c.len() as u32)
        .map(|m| m * base.dim());
    match target {
        Some(t) if t <= k.pn() => {
            let all: Vec<RatFunc> = over.iter().chain(c).cloned().collect();
            KpSpan::field_closure(k, &all).dim() == t
        }
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::super::RatField;
    use super::*;

    #[test]
    fn p_monomial_examples() {
        let k2 = RatField::new(2, 2).unwrap();
        let tu = vec![k2.var(0), k2.var(1)];
        assert!(p_monomial(PMonomialIndex { i: 0, n: 2 }, &tu)
            .unwrap()
            .is_one());
        assert_eq!(
            p_monomial(PMonomialIndex { i: 3, n: 2 }, &tu).unwrap(),
            &tu[0] * &tu[1]
        );
        let k3 = RatField::new(3, 2).unwrap();
        let sv = vec![k3.var(0), k3.var(1)];
        assert_eq!(
            p_monomial(PMonomialIndex { i: 5, n: 2 }, &sv).unwrap(),
            &sv[0].pow(2) * &sv[1]
        );
        assert!(matches!(
            p_monomial(PMonomialIndex { i: 1, n: 2 }, &sv[..1]),
            Err(FieldError::ArityMismatch { .. })
        ));
    }

    #[test]
    fn lambda_examples() {
        let k1 = RatField::new(2, 1).unwrap();
        let t = k1.var(0);
        assert_eq!(lambda(&[t.clone()], &t).coords, vec![k1.zero(), k1.one()]);
        assert_eq!(
            lambda(&[t.clone()], &t.pow(2)).coords,
            vec![t.clone(), k1.zero()]
        );

        let k = RatField::new(2, 2).unwrap();
        let (t, u) = (k.var(0), k.var(1));
        let b = &u + &(&t * &u.pow(2));
        let l = lambda(&[t, u.clone()], &b);
        assert!(l.defined);
        assert_eq!(l.coords, vec![k.zero(), u, k.one(), k.zero()]);
    }

    #[test]
    fn lambda_undefined_on_dependent_tuple() {
        let k = RatField::new(2, 2).unwrap();
        let t = k.var(0);
        let l = lambda(&[t.clone(), t.pow(2)], &t);
        assert!(!l.defined);
        assert!(l.coords.iter().all(RatFunc::is_zero));
        // b outside K^p[a] is also undefined.
        let l = lambda(&[t.clone()], &k.var(1));
        assert!(!l.defined);
    }

    #[test]
    fn independence_examples() {
        let k = RatField::new(2, 2).unwrap();
        let (t, u) = (k.var(0), k.var(1));
        assert!(is_p_independent(&[t.clone(), u.clone()], &[]));
        let c = [t.clone(), &t + &u.pow(2), &u.pow(2) * &t];
        assert!(!is_p_independent(&c, &[]));
        let k3 = RatField::new(2, 3).unwrap();
        let (t, u) = (k3.var(0), k3.var(1));
        assert!(!is_p_independent(&[t.clone(), u.clone(), &t * &u], &[]));
        assert!(is_p_independent(&[u.clone()], &[t.clone()]));
        assert!(!is_p_independent(&[&t * &u.pow(2)], &[t]));
    }

    #[test]
    fn root_coords_reassemble() {
        let k = RatField::new(3, 2).unwrap();
        let (s, v) = (k.var(0), k.var(1));
        let x = &(&s.pow(4) + &(&v * &s)) / &(&k.one() + &(&v.pow(2) * &s));
        let c = root_coords(&x);
        let vars = k.vars();
        let mut acc = k.zero();
        for (i, ci) in c.iter().enumerate() {
            let m = p_monomial(PMonomialIndex { i, n: 2 }, &vars).unwrap();
            acc = &acc + &(&ci.frobenius() * &m);
        }
        assert_eq!(acc, x);
    }
}
