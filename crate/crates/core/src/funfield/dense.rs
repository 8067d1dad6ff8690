//! A finite extension F_q of F_p in Zech-logarithm form, and dense
//! univariate gcds over it. Used for gcd images of multivariate polynomials.

use std::sync::OnceLock;

/// Log-form element: `ZERO` or the discrete log of a nonzero element.
pub(crate) type Elt = u32;
pub(crate) const ZERO: Elt = u32::MAX;

pub(crate) struct Gf {
    p: u32,
    /// q - 1
    order: u32,
    /// zech[i] = log(1 + g^i)
    zech: Vec<Elt>,
    /// log of the prime-field element c, for c in 1..p
    prime_log: Vec<Elt>,
}

impl Gf {
    pub(crate) fn get(p: u32) -> &'static Gf {
        static F2: OnceLock<Gf> = OnceLock::new();
        static F3: OnceLock<Gf> = OnceLock::new();
        static F5: OnceLock<Gf> = OnceLock::new();
        match p {
            2 => F2.get_or_init(|| Gf::build(2, 16)),
            3 => F3.get_or_init(|| Gf::build(3, 10)),
            5 => F5.get_or_init(|| Gf::build(5, 7)),
            _ => panic!("unsupported characteristic {p}"),
        }
    }

    fn build(p: u32, k: u32) -> Gf {
        let q = p.pow(k);
        let modulus = (0..)
            .map(|c| {
                let mut m = digits(c, p, k as usize);
                m.push(1);
                m
            })
            .find(|m| m[0] != 0 && is_primitive(m, p, q))
            .expect("primitive polynomials exist");
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![ZERO; q as usize];
        let mut x = vec![0u32; k as usize];
        x[0] = 1;
        for i in 0..q - 1 {
            let v = encode(&x, p);
            exp.push(v);
            log[v as usize] = i;
            times_x(&mut x, &modulus, p);
        }
        let zech = exp
            .iter()
            .map(|&v| {
                let mut d = digits(v, p, k as usize);
                d[0] = (d[0] + 1) % p;
                log[encode(&d, p) as usize]
            })
            .collect();
        let prime_log = (0..p)
            .map(|c| if c == 0 { ZERO } else { log[c as usize] })
            .collect();
        Gf {
            p,
            order: q - 1,
            zech,
            prime_log,
        }
    }

    pub(crate) fn from_prime(&self, c: u8) -> Elt {
        self.prime_log[c as usize % self.p as usize]
    }

    /// The prime-field value of `x`, if it lies in F_p.
    pub(crate) fn to_prime(&self, x: Elt) -> Option<u8> {
        if x == ZERO {
            return Some(0);
        }
        self.prime_log.iter().position(|&l| l == x).map(|c| c as u8)
    }

    pub(crate) fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a == ZERO || b == ZERO {
            return ZERO;
        }
        let s = a as u64 + b as u64;
        (s % self.order as u64) as Elt
    }

    pub(crate) fn inv(&self, a: Elt) -> Elt {
        debug_assert!(a != ZERO);
        (self.order - a) % self.order
    }

    pub(crate) fn neg(&self, a: Elt) -> Elt {
        if a == ZERO || self.p == 2 {
            return a;
        }
        (a + self.order / 2) % self.order
    }

    pub(crate) fn add(&self, a: Elt, b: Elt) -> Elt {
        if a == ZERO {
            return b;
        }
        if b == ZERO {
            return a;
        }
        let d = (b + self.order - a) % self.order;
        let z = self.zech[d as usize];
        if z == ZERO {
            ZERO
        } else {
            (a + z) % self.order
        }
    }

    /// g^e for an integer exponent.
    pub(crate) fn pow_gen(&self, base: Elt, e: u64) -> Elt {
        if base == ZERO {
            return if e == 0 { 0 } else { ZERO };
        }
        ((base as u64 * e) % self.order as u64) as Elt
    }

    pub(crate) fn order(&self) -> u32 {
        self.order
    }
}

fn digits(mut v: u32, p: u32, k: usize) -> Vec<u32> {
    let mut d = vec![0; k];
    for x in d.iter_mut() {
        *x = v % p;
        v /= p;
    }
    d
}

fn encode(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &x| acc * p + x)
}

/// Multiplies by x modulo the monic `modulus` (degree k, lowest first).
fn times_x(x: &mut [u32], modulus: &[u32], p: u32) {
    let k = x.len();
    let top = x[k - 1];
    for i in (1..k).rev() {
        x[i] = x[i - 1];
    }
    x[0] = 0;
    for i in 0..k {
        x[i] = (x[i] + (p - top) * modulus[i] % p) % p;
    }
}

fn is_primitive(modulus: &[u32], p: u32, q: u32) -> bool {
    let k = modulus.len() - 1;
    let mut x = vec![0u32; k];
    x[0] = 1;
    for i in 1..q {
        times_x(&mut x, modulus, p);
        if x[0] == 1 && x[1..].iter().all(|&d| d == 0) {
            return i == q - 1;
        }
    }
    false
}

/// Monic gcd of dense coefficient vectors, lowest degree first.
pub(crate) fn gcd(gf: &Gf, mut f: Vec<Elt>, mut g: Vec<Elt>) -> Vec<Elt> {
    let trim = |v: &mut Vec<Elt>| {
        while v.last() == Some(&ZERO) {
            v.pop();
        }
    };
    trim(&mut f);
    trim(&mut g);
    while !g.is_empty() {
        let dg = g.len() - 1;
        let lg = gf.inv(g[dg]);
        while f.len() > dg {
            let df = f.len() - 1;
            let c = gf.neg(gf.mul(f[df], lg));
            let s = df - dg;
            for (k, &gk) in g.iter().enumerate() {
                f[k + s] = gf.add(f[k + s], gf.mul(c, gk));
            }
            trim(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    if let Some(&l) = f.last() {
        let li = gf.inv(l);
        f.iter_mut().for_each(|x| *x = gf.mul(*x, li));
    }
    f
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lift(gf: &Gf, v: &[u8]) -> Vec<Elt> {
        v.iter().map(|&c| gf.from_prime(c)).collect()
    }

    #[test]
    fn field_axioms_on_samples() {
        for p in [2, 3, 5] {
            let gf = Gf::get(p);
            let one = gf.from_prime(1);
            assert_eq!(one, 0);
            for a in [0u32, 1, 17, gf.order() - 1] {
                assert_eq!(gf.mul(a, gf.inv(a)), one);
                assert_eq!(gf.add(a, gf.neg(a)), ZERO);
                for b in [3u32, 1000] {
                    assert_eq!(gf.add(a, b), gf.add(b, a));
                }
            }
            let mut acc = ZERO;
            for _ in 0..p {
                acc = gf.add(acc, one);
            }
            assert_eq!(acc, ZERO);
        }
    }

    #[test]
    fn prime_subfield_round_trip() {
        for p in [2u32, 3, 5] {
            let gf = Gf::get(p);
            for c in 0..p as u8 {
                assert_eq!(gf.to_prime(gf.from_prime(c)), Some(c));
            }
            assert_eq!(gf.to_prime(1), None);
        }
    }

    #[test]
    fn char2_gcd() {
        // (y+1)^2 (y^2+y+1) and (y+1)(y^3+y+1)
        let gf = Gf::get(2);
        let g = gcd(gf, lift(gf, &[1, 1, 0, 1, 1]), lift(gf, &[1, 0, 1, 1, 1]));
        assert_eq!(g, lift(gf, &[1, 1]));
    }

    #[test]
    fn char3_gcd_is_monic() {
        // 2(y-1)(y+1) and (y-1)^2
        let gf = Gf::get(3);
        let g = gcd(gf, lift(gf, &[1, 0, 2]), lift(gf, &[1, 1, 1]));
        assert_eq!(g, lift(gf, &[2, 1]));
    }
}
