//! Sparse multivariate polynomials over F_p.
//!
//! Terms are kept sorted in descending graded-lex order with x1 < x2 < x3,
//! so the first term is the leading one.

use std::cmp::Ordering;
use std::collections::HashMap;

pub const MAX_VARS: usize = 3;

/// Exponent vector; unused trailing slots stay zero.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monomial(pub [u32; MAX_VARS]);

impl Monomial {
    pub fn one() -> Self {
        Monomial([0; MAX_VARS])
    }

    pub fn var(i: usize) -> Self {
        let mut e = [0; MAX_VARS];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(o.0.iter()) {
            *x += y;
        }
        Monomial(e)
    }

    pub fn divides(&self, o: &Self) -> bool {
        self.0.iter().zip(o.0.iter()).all(|(a, b)| a <= b)
    }

    /// `o / self`, assuming `self.divides(o)`.
    pub fn quotient_of(&self, o: &Self) -> Self {
        let mut e = o.0;
        for (x, y) in e.iter_mut().zip(self.0.iter()) {
            *x -= y;
        }
        Monomial(e)
    }

    pub fn meet(&self, o: &Self) -> Self {
        let mut e = self.0;
        for (x, y) in e.iter_mut().zip(o.0.iter()) {
            *x = (*x).min(*y);
        }
        Monomial(e)
    }
}

impl Ord for Monomial {
    fn cmp(&self, o: &Self) -> Ordering {
        self.degree()
            .cmp(&o.degree())
            .then(self.0[2].cmp(&o.0[2]))
            .then(self.0[1].cmp(&o.0[1]))
            .then(self.0[0].cmp(&o.0[0]))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

pub(crate) fn inv_mod(a: u8, p: u8) -> u8 {
    debug_assert!(a % p != 0);
    let mut r = 1u32;
    for _ in 0..p - 2 {
        r = r * a as u32 % p as u32;
    }
    r as u8
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SparsePoly {
    p: u8,
    nvars: u8,
    terms: Vec<(Monomial, u8)>,
}

impl SparsePoly {
    pub fn zero(p: u8, nvars: u8) -> Self {
        SparsePoly {
            p,
            nvars,
            terms: Vec::new(),
        }
    }

    pub fn constant(p: u8, nvars: u8, c: u8) -> Self {
        let c = c % p;
        let terms = if c == 0 {
            Vec::new()
        } else {
            vec![(Monomial::one(), c)]
        };
        SparsePoly { p, nvars, terms }
    }

    pub fn one(p: u8, nvars: u8) -> Self {
        Self::constant(p, nvars, 1)
    }

    pub fn var(p: u8, nvars: u8, i: usize) -> Self {
        assert!(i < nvars as usize, "variable index out of range");
        SparsePoly {
            p,
            nvars,
            terms: vec![(Monomial::var(i), 1)],
        }
    }

    /// Builds a polynomial from arbitrary terms, merging duplicates.
    pub fn from_terms(p: u8, nvars: u8, terms: impl IntoIterator<Item = (Monomial, u32)>) -> Self {
        let mut acc: HashMap<Monomial, u32> = HashMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert(0) += c % p as u32;
        }
        Self::from_map(p, nvars, acc)
    }

    fn from_map(p: u8, nvars: u8, acc: HashMap<Monomial, u32>) -> Self {
        let mut terms: Vec<(Monomial, u8)> = acc
            .into_iter()
            .filter_map(|(m, c)| {
                let c = (c % p as u32) as u8;
                (c != 0).then_some((m, c))
            })
            .collect();
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        SparsePoly { p, nvars, terms }
    }

    pub fn p(&self) -> u8 {
        self.p
    }

    pub fn nvars(&self) -> u8 {
        self.nvars
    }

    pub fn terms(&self) -> &[(Monomial, u8)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms[0].0 == Monomial::one())
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0] == (Monomial::one(), 1)
    }

    /// Leading term; panics on zero.
    pub fn leading(&self) -> (Monomial, u8) {
        self.terms[0]
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.first().map_or(0, |t| t.0.degree())
    }

    pub fn deg_in(&self, v: usize) -> u32 {
        self.terms.iter().map(|t| t.0 .0[v]).max().unwrap_or(0)
    }

    fn like(&self, terms: Vec<(Monomial, u8)>) -> Self {
        SparsePoly {
            p: self.p,
            nvars: self.nvars,
            terms,
        }
    }

    pub fn neg(&self) -> Self {
        let p = self.p;
        self.like(self.terms.iter().map(|&(m, c)| (m, p - c)).collect())
    }

    pub fn scale(&self, c: u8) -> Self {
        let c = c % self.p;
        if c == 0 {
            return self.like(Vec::new());
        }
        let p = self.p as u32;
        self.like(
            self.terms
                .iter()
                .map(|&(m, a)| (m, (a as u32 * c as u32 % p) as u8))
                .collect(),
        )
    }

    fn merge(&self, o: &Self, negate: bool) -> Self {
        let p = self.p;
        let mut out = Vec::with_capacity(self.terms.len() + o.terms.len());
        let (mut i, mut j) = (0, 0);
        let flip = |c: u8| if negate { (p - c) % p } else { c };
        while i < self.terms.len() && j < o.terms.len() {
            let (ma, ca) = self.terms[i];
            let (mb, cb) = o.terms[j];
            match ma.cmp(&mb) {
                Ordering::Greater => {
                    out.push((ma, ca));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb, flip(cb)));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = (ca + flip(cb)) % p;
                    if c != 0 {
                        out.push((ma, c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend(o.terms[j..].iter().map(|&(m, c)| (m, flip(c))));
        self.like(out)
    }

    pub fn add(&self, o: &Self) -> Self {
        self.merge(o, false)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.merge(o, true)
    }

    pub fn mul_term(&self, m: Monomial, c: u8) -> Self {
        let p = self.p as u32;
        if c % self.p == 0 {
            return self.like(Vec::new());
        }
        self.like(
            self.terms
                .iter()
                .map(|&(a, x)| (a.mul(&m), (x as u32 * c as u32 % p) as u8))
                .collect(),
        )
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return self.like(Vec::new());
        }
        if o.terms.len() == 1 {
            return self.mul_term(o.terms[0].0, o.terms[0].1);
        }
        if self.terms.len() == 1 {
            return o.mul_term(self.terms[0].0, self.terms[0].1);
        }
        let mut acc: HashMap<Monomial, u32> =
            HashMap::with_capacity(self.terms.len() * o.terms.len());
        for &(ma, ca) in &self.terms {
            for &(mb, cb) in &o.terms {
                *acc.entry(ma.mul(&mb)).or_insert(0) += ca as u32 * cb as u32;
            }
        }
        Self::from_map(self.p, self.nvars, acc)
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut r = Self::one(self.p, self.nvars);
        while k > 0 {
            if k & 1 == 1 {
                r = r.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        r
    }

    /// The p-th power; coefficients in F_p are fixed by Frobenius.
    pub fn frobenius(&self) -> Self {
        let p = self.p as u32;
        self.like(
            self.terms
                .iter()
                .map(|&(m, c)| {
                    let mut e = m.0;
                    e.iter_mut().for_each(|x| *x *= p);
                    (Monomial(e), c)
                })
                .collect(),
        )
    }

    /// Inverse of Frobenius when every exponent is divisible by p.
    pub fn pth_root(&self) -> Option<Self> {
        let p = self.p as u32;
        let mut out = Vec::with_capacity(self.terms.len());
        for &(m, c) in &self.terms {
            if m.0.iter().any(|x| x % p != 0) {
                return None;
            }
            let mut e = m.0;
            e.iter_mut().for_each(|x| *x /= p);
            out.push((Monomial(e), c));
        }
        Some(self.like(out))
    }

    pub fn monic(&self) -> Self {
        match self.terms.first() {
            None => self.clone(),
            Some(&(_, 1)) => self.clone(),
            Some(&(_, c)) => self.scale(inv_mod(c, self.p)),
        }
    }

    /// Exact division; `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "polynomial division by zero");
        let (dm, dc) = d.leading();
        let dinv = inv_mod(dc, self.p);
        if d.terms.len() == 1 {
            let mut out = Vec::with_capacity(self.terms.len());
            let p = self.p as u32;
            for &(m, c) in &self.terms {
                if !dm.divides(&m) {
                    return None;
                }
                out.push((dm.quotient_of(&m), (c as u32 * dinv as u32 % p) as u8));
            }
            return Some(self.like(out));
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some(&(rm, rc)) = r.terms.first() {
            if !dm.divides(&rm) {
                return None;
            }
            let m = dm.quotient_of(&rm);
            let c = (rc as u32 * dinv as u32 % self.p as u32) as u8;
            q.push((m, c));
            r = r.sub(&d.mul_term(m, c));
        }
        Some(self.like(q))
    }

    /// Coefficients as a polynomial in variable `v`, lowest power first.
    pub fn coeffs_in(&self, v: usize) -> Vec<SparsePoly> {
        let d = self.deg_in(v) as usize;
        let mut buckets: Vec<Vec<(Monomial, u8)>> = vec![Vec::new(); d + 1];
        for &(m, c) in &self.terms {
            let k = m.0[v] as usize;
            let mut e = m.0;
            e[v] = 0;
            buckets[k].push((Monomial(e), c));
        }
        buckets
            .into_iter()
            .map(|mut t| {
                t.sort_unstable_by(|a, b| b.0.cmp(&a.0));
                self.like(t)
            })
            .collect()
    }

    pub fn from_coeffs_in(p: u8, nvars: u8, v: usize, coeffs: &[SparsePoly]) -> Self {
        let mut terms = Vec::new();
        for (k, c) in coeffs.iter().enumerate() {
            for &(m, x) in &c.terms {
                let mut e = m.0;
                e[v] += k as u32;
                terms.push((Monomial(e), x));
            }
        }
        terms.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        SparsePoly { p, nvars, terms }
    }

    fn main_var(&self) -> Option<usize> {
        (0..self.nvars as usize).rev().find(|&v| self.deg_in(v) > 0)
    }

    pub fn content_in(&self, v: usize) -> Self {
        let mut g = Self::zero(self.p, self.nvars);
        for c in self.coeffs_in(v) {
            if c.is_zero() {
                continue;
            }
            g = gcd(&g, &c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn primitive_in(&self, v: usize) -> Self {
        let c = self.content_in(v);
        self.div_exact(&c).expect("content divides")
    }

    fn monomial_content(&self) -> Monomial {
        let mut m = self.terms[0].0;
        for t in &self.terms[1..] {
            m = m.meet(&t.0);
        }
        m
    }
}

/// Monic gcd; `gcd(0, 0) = 0`.
pub fn gcd(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    gcd_with(a, b, true)
}

/// The same gcd computed by remainder sequences alone.
#[cfg(test)]
pub(crate) fn gcd_prs(a: &SparsePoly, b: &SparsePoly) -> SparsePoly {
    gcd_with(a, b, false)
}

fn gcd_with(a: &SparsePoly, b: &SparsePoly, images: bool) -> SparsePoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let (p, n) = (a.p, a.nvars);
    if a.is_constant() || b.is_constant() {
        return SparsePoly::one(p, n);
    }
    if a.terms.len() == 1 || b.terms.len() == 1 {
        let m = a.monomial_content().meet(&b.monomial_content());
        return SparsePoly {
            p,
            nvars: n,
            terms: vec![(m, 1)],
        };
    }
    if a == b {
        return a.monic();
    }
    let (ma, mb) = (a.monomial_content(), b.monomial_content());
    if ma != Monomial::one() || mb != Monomial::one() {
        let m = SparsePoly {
            p,
            nvars: n,
            terms: vec![(ma.meet(&mb), 1)],
        };
        let a1 = SparsePoly {
            p,
            nvars: n,
            terms: vec![(ma, 1)],
        };
        let b1 = SparsePoly {
            p,
            nvars: n,
            terms: vec![(mb, 1)],
        };
        let a = a.div_exact(&a1).expect("monomial content divides");
        let b = b.div_exact(&b1).expect("monomial content divides");
        return gcd_with(&a, &b, images).mul(&m);
    }
    if images {
        if let Some(g) = kronecker_gcd(a, b) {
            return g;
        }
    }
    let v = match (a.main_var(), b.main_var()) {
        (Some(x), Some(y)) => x.max(y),
        _ => unreachable!("non-constant polynomials have a variable"),
    };
    if a.deg_in(v) == 0 {
        return gcd_with(a, &b.content_in(v), images);
    }
    if b.deg_in(v) == 0 {
        return gcd_with(&a.content_in(v), b, images);
    }
    let ca = a.content_in(v);
    let cb = b.content_in(v);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let c = gcd_with(&ca, &cb, images);
    let g = primitive_prs(pa, pb, v);
    c.mul(&g).monic()
}

/// Gcd through univariate images x_j -> α_j·y^{w_j}, with mixed-radix
/// weights and scalings α_j from an extension field. A decoded candidate
/// that divides both inputs and whose image is the image gcd is the gcd;
/// unlucky scalings only cost another attempt.
fn kronecker_gcd(a: &SparsePoly, b: &SparsePoly) -> Option<SparsePoly> {
    use super::dense::{self, Gf, ZERO};
    const LIMIT: u64 = 1 << 13;
    const ATTEMPTS: u64 = 3;
    let gf = Gf::get(a.p as u32);
    let n = a.nvars as usize;
    let bound: Vec<u64> = (0..n)
        .map(|v| a.deg_in(v).max(b.deg_in(v)) as u64 + 1)
        .collect();
    let mut w = [0u64; MAX_VARS];
    let mut size = 1u64;
    for v in 0..n {
        w[v] = size;
        size = size.saturating_mul(bound[v]);
    }
    if size > LIMIT {
        return None;
    }
    for attempt in 0..ATTEMPTS {
        let mut seed = 0x9e37_79b9_7f4a_7c15u64 ^ attempt.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        let alpha: Vec<u32> = (0..n)
            .map(|_| {
                seed = seed.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = seed;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                ((z ^ (z >> 31)) % gf.order() as u64) as u32
            })
            .collect();
        let scale = |m: &Monomial| {
            (0..n).fold(0u32, |acc, v| {
                gf.mul(acc, gf.pow_gen(alpha[v], m.0[v] as u64))
            })
        };
        let image = |f: &SparsePoly| {
            let mut dense = vec![ZERO; size as usize];
            for (m, c) in &f.terms {
                let e: u64 = (0..n).map(|v| m.0[v] as u64 * w[v]).sum();
                dense[e as usize] = gf.mul(gf.from_prime(*c), scale(m));
            }
            dense
        };
        let decode = |core: &[u32], shift: usize| -> Option<SparsePoly> {
            let mut terms = Vec::new();
            let mut norm = None;
            for (e, &c) in core.iter().enumerate().rev() {
                if c == ZERO {
                    continue;
                }
                let mut exps = [0u32; MAX_VARS];
                let mut rest = (e + shift) as u64;
                for v in (0..n).rev() {
                    exps[v] = (rest / w[v]) as u32;
                    rest %= w[v];
                    if exps[v] as u64 >= bound[v] {
                        return None;
                    }
                }
                let m = Monomial(exps);
                let raw = gf.mul(c, gf.inv(scale(&m)));
                let nrm = *norm.get_or_insert(gf.inv(raw));
                terms.push((m, gf.to_prime(gf.mul(raw, nrm))? as u32));
            }
            Some(SparsePoly::from_terms(a.p, a.nvars, terms).monic())
        };
        let g = dense::gcd(gf, image(a), image(b));
        // Inputs without a constant term contribute powers of y, so the
        // order of the gcd's own image at y = 0 is unknown; try each.
        let low = g.iter().position(|&c| c != ZERO).expect("gcd is nonzero");
        let core = &g[low..];
        if core.len() <= 1 {
            return Some(SparsePoly::one(a.p, a.nvars));
        }
        for shift in 0..=low {
            let Some(h) = decode(core, shift) else {
                continue;
            };
            if a.div_exact(&h).is_some() && b.div_exact(&h).is_some() {
                return Some(h);
            }
        }
    }
    None
}

/// Gcd of two polynomials primitive in `v`, via primitive remainder sequences.
fn primitive_prs(a: SparsePoly, b: SparsePoly, v: usize) -> SparsePoly {
    let (mut f, mut g) = if a.deg_in(v) >= b.deg_in(v) {
        (a, b)
    } else {
        (b, a)
    };
    loop {
        let r = pseudo_rem(&f, &g, v);
        if r.is_zero() {
            return g;
        }
        if r.deg_in(v) == 0 {
            return SparsePoly::one(f.p, f.nvars);
        }
        let r = r.primitive_in(v);
        f = g;
        g = r;
    }
}

fn pseudo_rem(f: &SparsePoly, g: &SparsePoly, v: usize) -> SparsePoly {
    let mut r = f.coeffs_in(v);
    let gc = g.coeffs_in(v);
    let dg = gc.len() - 1;
    let lg = &gc[dg];
    while r.len() > dg {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let s = dr - dg;
        for x in r.iter_mut() {
            *x = x.mul(lg);
        }
        for (k, gk) in gc.iter().enumerate() {
            r[k + s] = r[k + s].sub(&lr.mul(gk));
        }
        while r.last().is_some_and(|x| x.is_zero()) {
            r.pop();
        }
    }
    SparsePoly::from_coeffs_in(f.p, f.nvars, v, &r)
}
