//! Sp4(K) in characteristic 2 as 4×4 matrices preserving the alternating
//! form J(e_i, e_j) = [i + j = 5] (1-based), with root subgroups, Bruhat
//! normal form and membership in the subgroup generated by short root
//! groups over K0 and long root groups over L0.
//!
//! Positive roots, in the slot order of the C2 unipotent datum:
//! α = e1 - e2, 2α+β = 2e1, α+β = e1 + e2, β = 2e2. The torus element
//! h_α(a)·h_β(b) is diag(a, b/a, a/b, 1/a).

use std::fmt;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::funfield::{FieldError, RatField, RatFunc};
use crate::rank1::{self, Rank1Error, TimmesfeldData, TorusWitness};
use crate::sample::{self, Shape};
use crate::tower::{IndifferentSpec, RSpaceSpec, SubfieldSpec, TowerError};
use crate::unipotent::{TorusElement2, UElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Sp4Error {
    #[error("Sp4 is realized in characteristic 2 only, got {0}")]
    NotChar2(u32),
    #[error("matrix does not preserve the symplectic form")]
    NotSymplectic,
    #[error("expected 16 entries, got {0}")]
    WrongLength(usize),
    #[error("unknown root '{0}'")]
    UnknownRoot(String),
    #[error("coordinate lies outside {0}")]
    OutOfDomain(String),
    #[error("torus generator {index}: {reason}")]
    BadTorus { index: usize, reason: String },
    #[error(transparent)]
    Rank1(#[from] Rank1Error),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mat4 {
    e: [[RatFunc; 4]; 4],
}

impl Mat4 {
    /// Row-major entries; must preserve J.
    pub fn from_entries(k: RatField, entries: Vec<RatFunc>) -> Result<Self, Sp4Error> {
        if k.p() != 2 {
            return Err(Sp4Error::NotChar2(k.p()));
        }
        if entries.len() != 16 {
            return Err(Sp4Error::WrongLength(entries.len()));
        }
        let m = Mat4 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| entries[4 * i + j].clone())),
        };
        if !m.is_symplectic() {
            return Err(Sp4Error::NotSymplectic);
        }
        Ok(m)
    }

    pub fn identity(k: RatField) -> Self {
        Mat4 {
            e: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { k.one() } else { k.zero() })
            }),
        }
    }

    fn diag(d: [RatFunc; 4]) -> Self {
        let k = d[0].field();
        Mat4 {
            e: std::array::from_fn(|i| {
                std::array::from_fn(|j| if i == j { d[i].clone() } else { k.zero() })
            }),
        }
    }

    pub fn field(&self) -> RatField {
        self.e[0][0].field()
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFunc {
        &self.e[i][j]
    }

    pub fn entries(&self) -> impl Iterator<Item = &RatFunc> {
        self.e.iter().flatten()
    }

    pub fn mul(&self, o: &Mat4) -> Mat4 {
        let k = self.field();
        Mat4 {
            e: std::array::from_fn(|i| {
                std::array::from_fn(|j| {
                    (0..4).fold(k.zero(), |acc, l| {
                        if self.e[i][l].is_zero() || o.e[l][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&self.e[i][l] * &o.e[l][j])
                        }
                    })
                })
            }),
        }
    }

    /// gᵀ J g = J.
    pub fn is_symplectic(&self) -> bool {
        let k = self.field();
        (0..4).all(|i| {
            (0..4).all(|j| {
                let v = (0..4).fold(k.zero(), |acc, l| {
                    &acc + &(&self.e[l][i] * &self.e[3 - l][j])
                });
                if i + j == 3 {
                    v.is_one()
                } else {
                    v.is_zero()
                }
            })
        })
    }

    /// J gᵀ J, the inverse of a symplectic matrix.
    pub fn inv(&self) -> Mat4 {
        Mat4 {
            e: std::array::from_fn(|i| std::array::from_fn(|j| self.e[3 - j][3 - i].clone())),
        }
    }

    pub fn det(&self) -> RatFunc {
        let k = self.field();
        let mut a = self.e.clone();
        let mut det = k.one();
        for c in 0..4 {
            let Some(r) = (c..4).find(|&r| !a[r][c].is_zero()) else {
                return k.zero();
            };
            a.swap(c, r);
            det = &det * &a[c][c];
            for r in c + 1..4 {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &a[c][c];
                for j in c..4 {
                    let v = &a[r][j] - &(&f * &a[c][j]);
                    a[r][j] = v;
                }
            }
        }
        det
    }

    /// x⁻¹ y⁻¹ x y.
    pub fn commutator(x: &Mat4, y: &Mat4) -> Mat4 {
        x.inv().mul(&y.inv()).mul(x).mul(y)
    }

    pub fn is_diagonal(&self) -> bool {
        (0..4).all(|i| (0..4).all(|j| i == j || self.e[i][j].is_zero()))
    }
}

/// A root ±r, where r is one of the four positive slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Sp4Root {
    /// 1 = α, 2 = 2α+β, 3 = α+β, 4 = β.
    pub slot: u8,
    pub positive: bool,
}

const SLOT_NAMES: [&str; 4] = ["alpha", "2alpha+beta", "alpha+beta", "beta"];

/// Matrix positions of the positive root groups.
const POSITIONS: [&[(usize, usize)]; 4] =
    [&[(0, 1), (2, 3)], &[(0, 3)], &[(0, 2), (1, 3)], &[(1, 2)]];

impl Sp4Root {
    pub const ALL: [Sp4Root; 8] = [
        Sp4Root {
            slot: 1,
            positive: true,
        },
        Sp4Root {
            slot: 2,
            positive: true,
        },
        Sp4Root {
            slot: 3,
            positive: true,
        },
        Sp4Root {
            slot: 4,
            positive: true,
        },
        Sp4Root {
            slot: 1,
            positive: false,
        },
        Sp4Root {
            slot: 2,
            positive: false,
        },
        Sp4Root {
            slot: 3,
            positive: false,
        },
        Sp4Root {
            slot: 4,
            positive: false,
        },
    ];

    pub fn pos(slot: u8) -> Self {
        Sp4Root {
            slot,
            positive: true,
        }
    }

    pub fn neg(slot: u8) -> Self {
        Sp4Root {
            slot,
            positive: false,
        }
    }

    pub fn long(&self) -> bool {
        self.slot % 2 == 0
    }

    /// Accepts "alpha", "-beta", "2alpha+beta", or a slot number "3", "-1".
    pub fn parse(s: &str) -> Result<Self, Sp4Error> {
        let t = s.trim();
        let (positive, body) = match t.strip_prefix('-') {
            Some(rest) => (false, rest.trim()),
            None => (true, t),
        };
        let body = body.trim_start_matches('(').trim_end_matches(')');
        let slot = match body {
            "1" | "a" | "alpha" => 1,
            "2" | "2a+b" | "2alpha+beta" => 2,
            "3" | "a+b" | "alpha+beta" => 3,
            "4" | "b" | "beta" => 4,
            _ => return Err(Sp4Error::UnknownRoot(s.to_string())),
        };
        Ok(Sp4Root { slot, positive })
    }
}

impl fmt::Display for Sp4Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = SLOT_NAMES[self.slot as usize - 1];
        if self.positive {
            f.write_str(name)
        } else {
            write!(f, "-({name})")
        }
    }
}

/// x_r(t).
pub fn chevalley_gen(r: Sp4Root, t: &RatFunc) -> Mat4 {
    let mut m = Mat4::identity(t.field());
    for &(i, j) in POSITIONS[r.slot as usize - 1] {
        let (i, j) = if r.positive { (i, j) } else { (j, i) };
        m.e[i][j] = t.clone();
    }
    m
}

/// h_α(s_alpha)·h_β(s_beta).
pub fn torus(h: &TorusElement2) -> Mat4 {
    let (a, b) = (&h.s_alpha, &h.s_beta);
    let ai = a.inv().expect("nonzero torus coordinate");
    let bi = b.inv().expect("nonzero torus coordinate");
    Mat4::diag([a.clone(), b * &ai, a * &bi, ai])
}

/// The coroot of `r` evaluated at t, as a torus element.
pub fn coroot(r: Sp4Root, t: &RatFunc) -> Result<TorusElement2, Sp4Error> {
    let k = t.field();
    let t = if r.positive { t.clone() } else { t.inv()? };
    let (a, b) = match r.slot {
        1 => (t, k.one()),
        2 => (t.clone(), t),
        3 => (t.clone(), t.pow(2)),
        _ => (k.one(), t),
    };
    Ok(TorusElement2::new(a, b).map_err(|_| FieldError::DivisionByZero)?)
}

/// x_1(c_1)·x_2(c_2)·x_3(c_3)·x_4(c_4) in the C2 slot order.
pub fn upper(k: RatField, u: &UElement) -> Mat4 {
    u.coords
        .iter()
        .enumerate()
        .fold(Mat4::identity(k), |acc, (i, c)| {
            acc.mul(&chevalley_gen(Sp4Root::pos(i as u8 + 1), c))
        })
}

/// Slot coordinates of an upper unitriangular symplectic matrix.
fn upper_coords(m: &Mat4) -> UElement {
    let c1 = m.e[0][1].clone();
    let v = chevalley_gen(Sp4Root::pos(1), &-&c1).mul(m);
    UElement {
        coords: vec![c1, v.e[0][3].clone(), v.e[0][2].clone(), v.e[1][2].clone()],
    }
}

/// A Weyl group element as a reduced word in the simple reflections.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Weyl(&'static str);

impl Weyl {
    pub const ALL: [Weyl; 8] = [
        Weyl(""),
        Weyl("a"),
        Weyl("b"),
        Weyl("ab"),
        Weyl("ba"),
        Weyl("aba"),
        Weyl("bab"),
        Weyl("abab"),
    ];

    pub fn identity() -> Self {
        Weyl("")
    }

    pub fn word(&self) -> &'static str {
        self.0
    }

    pub fn length(&self) -> usize {
        self.0.len()
    }

    /// Product of n_α = x_α(1)x_{-α}(-1)x_α(1) and the analogous n_β.
    pub fn rep(&self, k: RatField) -> Mat4 {
        let one = k.one();
        let n = |slot: u8| {
            chevalley_gen(Sp4Root::pos(slot), &one)
                .mul(&chevalley_gen(Sp4Root::neg(slot), &-&one))
                .mul(&chevalley_gen(Sp4Root::pos(slot), &one))
        };
        self.0.chars().fold(Mat4::identity(k), |acc, c| {
            acc.mul(&n(if c == 'a' { 1 } else { 4 }))
        })
    }
}

impl fmt::Display for Weyl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<&str> = self
            .0
            .chars()
            .map(|c| if c == 'a' { "s_alpha" } else { "s_beta" })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

/// Column j of a monomial matrix has its entry in row perm[j].
fn permutation(m: &Mat4) -> [usize; 4] {
    std::array::from_fn(|j| (0..4).find(|&i| !m.e[i][j].is_zero()).expect("invertible"))
}

/// g = u1 · n_w · h · u2 with u2 in the product of the root groups that w
/// sends to negative roots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bruhat4 {
    pub u1: UElement,
    pub w: Weyl,
    pub tau: TorusElement2,
    pub u2: UElement,
}

impl Bruhat4 {
    pub fn to_matrix(&self, k: RatField) -> Mat4 {
        upper(k, &self.u1)
            .mul(&self.w.rep(k))
            .mul(&torus(&self.tau))
            .mul(&upper(k, &self.u2))
    }

    pub fn unipotent_coords(&self) -> impl Iterator<Item = (usize, &RatFunc)> {
        self.u1
            .coords
            .iter()
            .enumerate()
            .chain(self.u2.coords.iter().enumerate())
            .map(|(i, c)| (i + 1, c))
    }
}

/// Row reduction by upper unitriangular operations from the left, pivoting
/// on the lowest free row of each column. The leftover n·u2 has u2 in the
/// prescribed subset; the GL4 form is unique, so it is the Sp4 form.
pub fn sp4_bruhat(g: &Mat4) -> Bruhat4 {
    let k = g.field();
    let mut a = g.e.clone();
    let mut u1 = Mat4::identity(k);
    let mut pivot = [usize::MAX; 4];
    let mut used = [false; 4];
    for j in 0..4 {
        let i = (0..4)
            .rev()
            .find(|&i| !used[i] && !a[i][j].is_zero())
            .expect("invertible");
        used[i] = true;
        pivot[j] = i;
        for r in 0..i {
            if a[r][j].is_zero() {
                continue;
            }
            let c = &a[r][j] / &a[i][j];
            for col in 0..4 {
                let v = &a[r][col] - &(&c * &a[i][col]);
                a[r][col] = v;
            }
            // u1 accumulates the inverse operations: column i += c·column r.
            for row in 0..4 {
                let v = &u1.e[row][i] + &(&c * &u1.e[row][r]);
                u1.e[row][i] = v;
            }
        }
    }
    let mut n = Mat4::identity(k);
    let mut u2 = Mat4::identity(k);
    for j in 0..4 {
        let i = pivot[j];
        n.e[j][j] = k.zero();
        n.e[i][j] = a[i][j].clone();
        for col in 0..4 {
            u2.e[j][col] = &a[i][col] / &a[i][j];
        }
    }
    let w = *Weyl::ALL
        .iter()
        .find(|w| permutation(&w.rep(k)) == pivot)
        .expect("pivot pattern is a Weyl element");
    let h = w.rep(k).inv().mul(&n);
    debug_assert!(h.is_diagonal());
    let s_alpha = h.e[0][0].clone();
    let s_beta = &h.e[1][1] * &s_alpha;
    Bruhat4 {
        u1: upper_coords(&u1),
        w,
        tau: TorusElement2 { s_alpha, s_beta },
        u2: upper_coords(&u2),
    }
}

/// True iff h_α(s_alpha)h_β(s_beta) normalizes the group: s_beta must
/// stabilize K0, s_alpha is free.
pub fn torus_normalizer_check(
    _s_alpha: &RatFunc,
    s_beta: &RatFunc,
    spec: &IndifferentSpec,
) -> bool {
    match s_beta.inv() {
        Ok(bi) => spec.k0.span().stable_under(s_beta) && spec.k0.span().stable_under(&bi),
        Err(_) => false,
    }
}

/// Sp4 membership verdict with one torus witness per simple root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sp4Membership {
    Yes {
        alpha: TorusWitness,
        beta: TorusWitness,
    },
    No(String),
    Unknown,
}

impl Sp4Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Sp4Membership::Yes { .. })
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Sp4Membership::No(_))
    }
}

/// PSp4(L0, K0): short roots over K0, long roots over L0.
#[derive(Clone, Debug)]
pub struct Sp4Context {
    pub spec: IndifferentSpec,
    /// Rank-one data of the short roots (L = K0).
    pub short: TimmesfeldData,
    /// Rank-one data of the long roots (L = L0).
    pub long: TimmesfeldData,
}

impl Sp4Context {
    /// `k0_codim1`: optional K1 and u with K0 = K1 ⊕ K^2·u.
    pub fn new(
        spec: IndifferentSpec,
        k0_codim1: Option<(SubfieldSpec, RatFunc)>,
    ) -> Result<Self, Sp4Error> {
        let short = TimmesfeldData::new(spec.k0.clone(), k0_codim1)?;
        let long = TimmesfeldData::new(spec.l0.clone(), None)?;
        Ok(Sp4Context { spec, short, long })
    }

    pub fn field(&self) -> RatField {
        self.spec.field()
    }

    pub fn domain(&self, r: Sp4Root) -> &RSpaceSpec {
        if r.long() {
            &self.long.l
        } else {
            &self.short.l
        }
    }

    /// x_r(c) with c checked against the root's domain.
    pub fn root_element(&self, r: Sp4Root, c: &RatFunc) -> Result<Mat4, Sp4Error> {
        let d = self.domain(r);
        if !d.contains(c) {
            return Err(Sp4Error::OutOfDomain(d.name.clone()));
        }
        Ok(chevalley_gen(r, c))
    }
}

/// Unipotent coordinates are tested slot-wise (a decisive No on failure);
/// s_alpha and s_beta go to the rank-one torus search over K0 and L0.
pub fn membership_psp4(g: &Mat4, ctx: &Sp4Context, bound: usize) -> Sp4Membership {
    let br = sp4_bruhat(g);
    if let Some(reason) = unipotent_violation(&br, ctx) {
        return Sp4Membership::No(reason);
    }
    torus_verdict(&br.tau, ctx, bound)
}

fn unipotent_violation(br: &Bruhat4, ctx: &Sp4Context) -> Option<String> {
    for (slot, c) in br.unipotent_coords() {
        let r = Sp4Root::pos(slot as u8);
        if !ctx.domain(r).contains(c) {
            return Some(format!("{r} coordinate outside {}", ctx.domain(r).name));
        }
    }
    None
}

fn torus_verdict(tau: &TorusElement2, ctx: &Sp4Context, bound: usize) -> Sp4Membership {
    use rank1::Membership as M;
    let a = rank1::torus_membership(&tau.s_alpha, &ctx.short, bound);
    let b = rank1::torus_membership(&tau.s_beta, &ctx.long, bound);
    match (a, b) {
        (M::No(r), _) => Sp4Membership::No(format!("s_alpha: {r}")),
        (_, M::No(r)) => Sp4Membership::No(format!("s_beta: {r}")),
        (M::Yes(alpha), M::Yes(beta)) => Sp4Membership::Yes { alpha, beta },
        _ => Sp4Membership::Unknown,
    }
}

/// A generator of the torus T of the structure (K0; L0, T, +, μ), with
/// optional declared scalings of the four positive root slots.
#[derive(Clone, Debug)]
pub struct TorusGen {
    pub h: TorusElement2,
    pub declared: Option<[RatFunc; 4]>,
}

/// T·PSp4(L0, K0) built from the structure data.
#[derive(Clone, Debug)]
pub struct Sp4Group {
    pub ctx: Sp4Context,
    pub torus: Vec<TorusElement2>,
}

/// Scaling of x_r under conjugation by `h`, read off the matrices.
pub fn slot_scaling(h: &TorusElement2, slot: u8) -> RatFunc {
    let k = h.s_alpha.field();
    let x = chevalley_gen(Sp4Root::pos(slot), &k.one());
    let t = torus(h);
    let c = t.mul(&x).mul(&t.inv_diag());
    let (i, j) = POSITIONS[slot as usize - 1][0];
    c.e[i][j].clone()
}

impl Mat4 {
    fn inv_diag(&self) -> Mat4 {
        Mat4::diag(std::array::from_fn(|i| {
            self.e[i][i].inv().expect("invertible diagonal")
        }))
    }
}

/// Builds T·PSp4(L0, K0); every generator must normalize and match any
/// declared action.
pub fn build_group_from_m(
    ctx: Sp4Context,
    torus_gens: Vec<TorusGen>,
) -> Result<Sp4Group, Sp4Error> {
    for (index, g) in torus_gens.iter().enumerate() {
        if let Some(decl) = &g.declared {
            for slot in 1..=4u8 {
                if slot_scaling(&g.h, slot) != decl[slot as usize - 1] {
                    return Err(Sp4Error::BadTorus {
                        index,
                        reason: format!(
                            "declared scaling of {} disagrees with the exponent table",
                            Sp4Root::pos(slot)
                        ),
                    });
                }
            }
        }
        if !torus_normalizer_check(&g.h.s_alpha, &g.h.s_beta, &ctx.spec) {
            return Err(Sp4Error::BadTorus {
                index,
                reason: "s_beta does not stabilize K0".into(),
            });
        }
    }
    Ok(Sp4Group {
        ctx,
        torus: torus_gens.into_iter().map(|g| g.h).collect(),
    })
}

impl Sp4Group {
    pub fn field(&self) -> RatField {
        self.ctx.field()
    }

    pub fn mul(&self, x: &Mat4, y: &Mat4) -> Mat4 {
        x.mul(y)
    }

    pub fn inv(&self, x: &Mat4) -> Mat4 {
        x.inv()
    }

    /// The stabilizer of K0, which bounds the s_beta coordinates of T.
    pub fn k0_stabilizer(&self) -> SubfieldSpec {
        self.ctx.spec.k0_stabilizer()
    }

    pub fn l0_field(&self) -> SubfieldSpec {
        self.ctx.spec.l0_field()
    }

    /// Membership in T·PSp4(L0, K0). The torus part is searched over
    /// products of T generators with exponents in -bound..=bound.
    pub fn member(&self, g: &Mat4, bound: usize) -> Sp4Membership {
        let br = sp4_bruhat(g);
        if let Some(reason) = unipotent_violation(&br, &self.ctx) {
            return Sp4Membership::No(reason);
        }
        let direct = torus_verdict(&br.tau, &self.ctx, bound);
        if direct.is_yes() || self.torus.is_empty() {
            return direct;
        }
        let b = bound as i64;
        let n = self.torus.len();
        let mut exps = vec![-b; n];
        loop {
            let (mut a, mut bb) = (br.tau.s_alpha.clone(), br.tau.s_beta.clone());
            for (h, &e) in self.torus.iter().zip(&exps) {
                a = &a * &h.s_alpha.powi(-e).expect("nonzero");
                bb = &bb * &h.s_beta.powi(-e).expect("nonzero");
            }
            let v = torus_verdict(
                &TorusElement2 {
                    s_alpha: a,
                    s_beta: bb,
                },
                &self.ctx,
                bound,
            );
            if v.is_yes() {
                return v;
            }
            let mut i = 0;
            while i < n && exps[i] == b {
                exps[i] = -b;
                i += 1;
            }
            if i == n {
                return Sp4Membership::Unknown;
            }
            exps[i] += 1;
        }
    }

    /// s' with [h_r(t), x_r(s')] = x_r(s), from the rank-one formula and
    /// checked on matrices; t = x_1^2 lies in every root torus.
    pub fn perfectness_witness(&self, r: Sp4Root, s: &RatFunc) -> Result<RatFunc, Sp4Error> {
        let k = self.field();
        let t = k.var(0).pow(2);
        let sp = rank1::perfectness_witness(s, &t)?;
        if !self.ctx.domain(r).contains(&sp) {
            return Err(Sp4Error::OutOfDomain(self.ctx.domain(r).name.clone()));
        }
        let lhs = Mat4::commutator(&torus(&coroot(r, &t)?), &chevalley_gen(r, &sp));
        assert_eq!(lhs, chevalley_gen(r, s), "commutator identity");
        Ok(sp)
    }
}

/// A product of `len` root elements with in-domain coordinates.
pub fn sample_word<R: Rng + ?Sized>(
    rng: &mut R,
    ctx: &Sp4Context,
    len: usize,
    shape: Shape,
) -> Mat4 {
    let k = ctx.field();
    (0..len).fold(Mat4::identity(k), |acc, _| {
        let r = Sp4Root::ALL[rng.gen_range(0..8)];
        let c = sample::in_span(rng, ctx.domain(r).span(), shape);
        acc.mul(&chevalley_gen(r, &c))
    })
}

#[cfg(test)]
mod tests;
