//! SL2(L) for an additive group K^2 <= L <= K: matrices, Bruhat normal
//! form, torus membership, and the rank-one structure (L, T̄, ·, σ).

use thiserror::Error;

use crate::funfield::{KpSpan, RatField, RatFunc};
use crate::sample::{self, Shape};
use crate::tower::{rspace_member, RSpaceSpec, SubfieldSpec, TowerError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Rank1Error {
    #[error("h(0) is not defined")]
    HZero,
    #[error("determinant is not 1")]
    NotSpecial,
    #[error("t^2 = 1 gives a trivial commutator")]
    TrivialTorus,
    #[error("element is not of the form a + b·u over K1")]
    NotInK1u,
    #[error("torus element does not normalize the root group over L")]
    NotNormalizing,
    #[error("operation needs characteristic 2")]
    NotChar2,
    #[error("invalid data: {0}")]
    BadData(String),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat2 {
    pub a: RatFunc,
    pub b: RatFunc,
    pub c: RatFunc,
    pub d: RatFunc,
}

impl Mat2 {
    pub fn new(a: RatFunc, b: RatFunc, c: RatFunc, d: RatFunc) -> Result<Self, Rank1Error> {
        let m = Mat2 { a, b, c, d };
        if !m.det().is_one() {
            return Err(Rank1Error::NotSpecial);
        }
        Ok(m)
    }

    pub fn identity(k: RatField) -> Self {
        Mat2 {
            a: k.one(),
            b: k.zero(),
            c: k.zero(),
            d: k.one(),
        }
    }

    pub fn field(&self) -> RatField {
        self.a.field()
    }

    pub fn det(&self) -> RatFunc {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
        }
    }

    /// Inverse of a determinant-one matrix.
    pub fn inv(&self) -> Mat2 {
        Mat2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    pub fn commutator(x: &Mat2, y: &Mat2) -> Mat2 {
        x.inv().mul(&y.inv()).mul(x).mul(y)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenKind {
    A,
    B,
    H,
    W,
}

/// a(t), b(t), h(t) = diag(t, 1/t), and w = [[0,1],[-1,0]] (t only fixes the field).
pub fn gen(kind: GenKind, t: &RatFunc) -> Result<Mat2, Rank1Error> {
    let k = t.field();
    Ok(match kind {
        GenKind::A => Mat2 {
            a: k.one(),
            b: t.clone(),
            c: k.zero(),
            d: k.one(),
        },
        GenKind::B => Mat2 {
            a: k.one(),
            b: k.zero(),
            c: t.clone(),
            d: k.one(),
        },
        GenKind::H => {
            let inv = t.inv().map_err(|_| Rank1Error::HZero)?;
            Mat2 {
                a: t.clone(),
                b: k.zero(),
                c: k.zero(),
                d: inv,
            }
        }
        GenKind::W => Mat2 {
            a: k.zero(),
            b: k.one(),
            c: -&k.one(),
            d: k.zero(),
        },
    })
}

pub fn a(t: &RatFunc) -> Mat2 {
    gen(GenKind::A, t).expect("total")
}

pub fn b(t: &RatFunc) -> Mat2 {
    gen(GenKind::B, t).expect("total")
}

pub fn h(t: &RatFunc) -> Result<Mat2, Rank1Error> {
    gen(GenKind::H, t)
}

pub fn w(k: RatField) -> Mat2 {
    gen(GenKind::W, &k.one()).expect("total")
}

/// f(a(t)) = b(-1/t).
pub fn f_image(t: &RatFunc) -> Result<Mat2, Rank1Error> {
    Ok(b(&-(t.inv().map_err(|_| Rank1Error::HZero)?)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Bruhat2 {
    /// h(tau)·a(s)
    Upper { tau: RatFunc, s: RatFunc },
    /// h(tau)·a(s1)·w·a(s2)
    Cell {
        tau: RatFunc,
        s1: RatFunc,
        s2: RatFunc,
    },
}

impl Bruhat2 {
    pub fn to_matrix(&self) -> Mat2 {
        match self {
            Bruhat2::Upper { tau, s } => h(tau).expect("tau nonzero").mul(&a(s)),
            Bruhat2::Cell { tau, s1, s2 } => {
                let k = tau.field();
                h(tau)
                    .expect("tau nonzero")
                    .mul(&a(s1))
                    .mul(&w(k))
                    .mul(&a(s2))
            }
        }
    }

    pub fn tau(&self) -> &RatFunc {
        match self {
            Bruhat2::Upper { tau, .. } | Bruhat2::Cell { tau, .. } => tau,
        }
    }

    pub fn unipotent_coords(&self) -> Vec<&RatFunc> {
        match self {
            Bruhat2::Upper { s, .. } => vec![s],
            Bruhat2::Cell { s1, s2, .. } => vec![s1, s2],
        }
    }
}

pub fn bruhat2(g: &Mat2) -> Bruhat2 {
    if g.c.is_zero() {
        Bruhat2::Upper {
            tau: g.a.clone(),
            s: &g.b / &g.a,
        }
    } else {
        let cinv = g.c.inv().expect("nonzero");
        Bruhat2::Cell {
            tau: -&cinv,
            s1: &g.a * &g.c,
            s2: &g.d * &cinv,
        }
    }
}

/// L = K1 ⊕ K^2·u.
#[derive(Clone, Debug)]
pub struct Codim1 {
    pub k1: SubfieldSpec,
    pub u: RatFunc,
    split: RSpaceSpec,
}

#[derive(Clone, Debug)]
pub struct TimmesfeldData {
    pub l: RSpaceSpec,
    pub codim1: Option<Codim1>,
    field_of_l: SubfieldSpec,
}

impl TimmesfeldData {
    /// `l` must be a K^2-space containing 1; for odd p this forces L = K.
    pub fn new(l: RSpaceSpec, codim1: Option<(SubfieldSpec, RatFunc)>) -> Result<Self, Rank1Error> {
        let k = l.field();
        let field_of_l = SubfieldSpec::new("K_L", k, l.span().basis().to_vec());
        if k.p() != 2 && l.span().dim() != k.pn() {
            return Err(Rank1Error::BadData(
                "for odd p, K^2 <= L forces L = K".into(),
            ));
        }
        let codim1 = match codim1 {
            None => None,
            Some((k1, u)) => {
                let ok = k1.span().is_subspace_of(l.span())
                    && l.contains(&u)
                    && !k1.contains(&u)
                    && l.span().dim() == k1.degree() + 1;
                if !ok {
                    return Err(Rank1Error::BadData("L is not K1 ⊕ K^2·u".into()));
                }
                let split = RSpaceSpec::new("K1(u)", k1.clone(), vec![k.one(), u.clone()])?;
                Some(Codim1 { k1, u, split })
            }
        };
        Ok(TimmesfeldData {
            l,
            codim1,
            field_of_l,
        })
    }

    pub fn field(&self) -> RatField {
        self.l.field()
    }

    /// K_L = K^2[L].
    pub fn field_of_l(&self) -> &SubfieldSpec {
        &self.field_of_l
    }

    pub fn in_l(&self, x: &RatFunc) -> bool {
        self.l.contains(x)
    }
}

/// Signed factors from L* whose product is a torus coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusWitness {
    pub factors: Vec<(RatFunc, i8)>,
}

impl TorusWitness {
    pub fn product(&self, k: RatField) -> RatFunc {
        self.factors.iter().fold(
            k.one(),
            |acc, (f, e)| {
                if *e >= 0 {
                    &acc * f
                } else {
                    &acc / f
                }
            },
        )
    }

    /// Every factor is a nonzero element of L and the product is `tau`.
    pub fn verify(&self, tau: &RatFunc, data: &TimmesfeldData) -> bool {
        self.factors
            .iter()
            .all(|(f, e)| !f.is_zero() && data.in_l(f) && e.abs() == 1)
            && self.product(tau.field()) == *tau
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    Yes(TorusWitness),
    No(String),
    Unknown,
}

impl Membership {
    pub fn is_yes(&self) -> bool {
        matches!(self, Membership::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, Membership::No(_))
    }
}

/// x = l1·l2 with l1, l2 ∈ L*, for x ∈ K1(u)*.
pub fn factor_codim1(x: &RatFunc, data: &TimmesfeldData) -> Result<(RatFunc, RatFunc), Rank1Error> {
    let c = data
        .codim1
        .as_ref()
        .ok_or_else(|| Rank1Error::BadData("no codim-1 data".into()))?;
    if x.is_zero() {
        return Err(Rank1Error::NotInK1u);
    }
    let coords = rspace_member(x, &c.split).ok_or(Rank1Error::NotInK1u)?;
    let (alpha, beta) = (&coords[0], &coords[1]);
    if beta.is_zero() {
        return Ok((alpha.clone(), x.field().one()));
    }
    Ok((beta.clone(), &(alpha / beta) + &c.u))
}

/// Is tau in the group generated by L*? Never answers a false No.
pub fn torus_membership(tau: &RatFunc, data: &TimmesfeldData, bound: usize) -> Membership {
    let k = tau.field();
    if tau.is_zero() {
        return Membership::No("zero is not a unit".into());
    }
    if data.in_l(tau) {
        return Membership::Yes(TorusWitness {
            factors: vec![(tau.clone(), 1)],
        });
    }
    if !data.field_of_l.contains(tau) {
        return Membership::No("outside the field generated by L".into());
    }
    if data.codim1.is_some() {
        let (l1, l2) = factor_codim1(tau, data).expect("tau lies in K_L = K1(u)");
        return Membership::Yes(TorusWitness {
            factors: vec![(l1, 1), (l2, 1)],
        });
    }
    let basis = data.l.span().basis();
    let mut cands: Vec<RatFunc> = basis.to_vec();
    for i in 0..basis.len() {
        for j in i + 1..basis.len() {
            cands.push(&basis[i] + &basis[j]);
        }
    }
    cands.retain(|c| !c.is_zero());
    let mut stack: Vec<(RatFunc, i8)> = Vec::new();
    for depth in 1..bound.max(1) {
        if let Some(w) = search(tau, data, &cands, depth, 0, &mut stack) {
            return Membership::Yes(w);
        }
    }
    let _ = k;
    Membership::Unknown
}

fn search(
    rem: &RatFunc,
    data: &TimmesfeldData,
    cands: &[RatFunc],
    depth: usize,
    from: usize,
    stack: &mut Vec<(RatFunc, i8)>,
) -> Option<TorusWitness> {
    if depth == 0 {
        if data.in_l(rem) {
            let mut factors = stack.clone();
            factors.push((rem.clone(), 1));
            return Some(TorusWitness { factors });
        }
        return None;
    }
    for (i, c) in cands.iter().enumerate().skip(from) {
        for e in [1i8, -1] {
            let next = if e == 1 { rem / c } else { rem * c };
            stack.push((c.clone(), e));
            let found = search(&next, data, cands, depth - 1, i, stack);
            stack.pop();
            if found.is_some() {
                return found;
            }
        }
    }
    None
}

/// Bruhat coordinates decide the unipotent part; the torus part is delegated.
pub fn membership_sl2l(g: &Mat2, data: &TimmesfeldData, bound: usize) -> Membership {
    let br = bruhat2(g);
    for s in br.unipotent_coords() {
        if !data.in_l(s) {
            return Membership::No("unipotent coordinate outside L".into());
        }
    }
    torus_membership(br.tau(), data, bound)
}

/// s' with [h(t), a(s')] = a(s), namely s / (1 - t^{-2}); checked by multiplication.
pub fn perfectness_witness(s: &RatFunc, t: &RatFunc) -> Result<RatFunc, Rank1Error> {
    let k = s.field();
    let t2inv = t.inv().map_err(|_| Rank1Error::HZero)?.pow(2);
    let denom = &k.one() - &t2inv;
    if denom.is_zero() {
        return Err(Rank1Error::TrivialTorus);
    }
    let sp = s / &denom;
    let lhs = Mat2::commutator(&h(t)?, &a(&sp));
    assert_eq!(lhs, a(s), "commutator identity");
    Ok(sp)
}

/// Bruhat form with torus coordinates replaced by their squares.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TbarForm {
    Upper {
        tbar: RatFunc,
        s: RatFunc,
    },
    Cell {
        tbar: RatFunc,
        s1: RatFunc,
        s2: RatFunc,
    },
}

impl TbarForm {
    pub fn from_bruhat(b: &Bruhat2) -> Self {
        match b {
            Bruhat2::Upper { tau, s } => TbarForm::Upper {
                tbar: tau.pow(2),
                s: s.clone(),
            },
            Bruhat2::Cell { tau, s1, s2 } => TbarForm::Cell {
                tbar: tau.pow(2),
                s1: s1.clone(),
                s2: s2.clone(),
            },
        }
    }

    /// Characteristic 2 only, where tau is recovered as a square root.
    pub fn to_bruhat(&self) -> Result<Bruhat2, Rank1Error> {
        let root = |x: &RatFunc| {
            x.pth_root()
                .filter(|_| x.field().p() == 2)
                .ok_or(Rank1Error::NotChar2)
        };
        Ok(match self {
            TbarForm::Upper { tbar, s } => Bruhat2::Upper {
                tau: root(tbar)?,
                s: s.clone(),
            },
            TbarForm::Cell { tbar, s1, s2 } => Bruhat2::Cell {
                tau: root(tbar)?,
                s1: s1.clone(),
                s2: s2.clone(),
            },
        })
    }
}

/// (L, T̄, ·, σ): addition on L, multiplication on T̄, the action of T̄ on
/// L, and the squaring map L -> T̄.
#[derive(Clone, Debug)]
pub struct Rank1Structure {
    pub l: KpSpan,
    pub tbar_gens: Vec<RatFunc>,
}

impl Rank1Structure {
    pub fn l_add(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        x + y
    }

    pub fn l_neg(&self, x: &RatFunc) -> RatFunc {
        -x
    }

    pub fn t_mul(&self, x: &RatFunc, y: &RatFunc) -> RatFunc {
        x * y
    }

    pub fn t_inv(&self, x: &RatFunc) -> RatFunc {
        x.inv().expect("torus elements are units")
    }

    pub fn sigma(&self, s: &RatFunc) -> RatFunc {
        s.pow(2)
    }

    pub fn act(&self, t: &RatFunc, s: &RatFunc) -> RatFunc {
        t * s
    }

    /// 1/m on L*, as σ(m)^{-1} acting on m.
    fn l_recip(&self, m: &RatFunc) -> RatFunc {
        self.act(&self.t_inv(&self.sigma(m)), m)
    }
}

/// Torus generators as diagonal coordinates t; T̄ = {t^2}.
pub fn extract_structure(
    data: &TimmesfeldData,
    t_gens: &[RatFunc],
) -> Result<Rank1Structure, Rank1Error> {
    let k = data.field();
    let mut tbar_gens = Vec::new();
    for t in t_gens {
        let ht = h(t)?;
        let conj = ht.mul(&a(&k.one())).mul(&ht.inv());
        let tb = conj.b.clone();
        for l in data.l.span().basis() {
            let img = ht.mul(&a(l)).mul(&ht.inv());
            let back = ht.inv().mul(&a(l)).mul(&ht);
            if !data.in_l(&img.b) || !data.in_l(&back.b) {
                return Err(Rank1Error::NotNormalizing);
            }
        }
        tbar_gens.push(tb);
    }
    Ok(Rank1Structure {
        l: data.l.span().clone(),
        tbar_gens,
    })
}

/// Product of two T̄-forms, using only the operations of the structure.
pub fn mult_bruhat(
    e1: &TbarForm,
    e2: &TbarForm,
    st: &Rank1Structure,
) -> Result<TbarForm, Rank1Error> {
    if st.l.field().p() != 2 {
        return Err(Rank1Error::NotChar2);
    }
    use TbarForm::*;
    Ok(match (e1, e2) {
        (Upper { tbar: t1, s: s1 }, Upper { tbar: t2, s: s2 }) => Upper {
            tbar: st.t_mul(t1, t2),
            s: st.l_add(&st.act(&st.t_inv(t2), s1), s2),
        },
        (
            Upper { tbar: t1, s },
            Cell {
                tbar: t2,
                s1: r1,
                s2: r2,
            },
        ) => Cell {
            tbar: st.t_mul(t1, t2),
            s1: st.l_add(&st.act(&st.t_inv(t2), s), r1),
            s2: r2.clone(),
        },
        (Cell { tbar: t1, s1, s2 }, Upper { tbar: t2, s: r }) => Cell {
            tbar: st.t_mul(t1, &st.t_inv(t2)),
            s1: st.act(t2, s1),
            s2: st.l_add(&st.act(&st.t_inv(t2), s2), r),
        },
        (
            Cell { tbar: t1, s1, s2 },
            Cell {
                tbar: t2,
                s1: r1,
                s2: r2,
            },
        ) => {
            // w·a(m)·w collapses to h(-1) when m = 0 and otherwise
            // rewrites through b(-1/m).
            let m = st.l_add(&st.act(&st.t_inv(t2), s2), r1);
            let base = st.t_mul(t1, &st.t_inv(t2));
            if m.is_zero() {
                Upper {
                    tbar: base,
                    s: st.l_add(&st.act(t2, s1), r2),
                }
            } else {
                let mi = st.l_recip(&m);
                let inner = st.l_add(&st.act(t2, s1), &st.l_neg(&mi));
                Cell {
                    tbar: st.t_mul(&base, &st.t_inv(&st.sigma(&m))),
                    s1: st.act(&st.sigma(&m), &inner),
                    s2: st.l_add(r2, &st.l_neg(&mi)),
                }
            }
        }
    })
}

/// Random element of SL2(K) with a generic top-left entry.
pub fn sample_sl2<R: rand::Rng + ?Sized>(rng: &mut R, k: RatField, shape: Shape) -> Mat2 {
    if rng.gen_bool(0.1) {
        // a = 0 forces b = -1/c.
        let c = sample::nonzero(rng, k, shape);
        let d = sample::elem(rng, k, shape);
        return Mat2 {
            a: k.zero(),
            b: -&c.inv().expect("nonzero"),
            c,
            d,
        };
    }
    let aa = sample::nonzero(rng, k, shape);
    let bb = sample::elem(rng, k, shape);
    let c = if rng.gen_bool(0.2) {
        k.zero()
    } else {
        sample::elem(rng, k, shape)
    };
    let d = &(&k.one() + &(&bb * &c)) / &aa;
    Mat2 { a: aa, b: bb, c, d }
}

/// Word of `len` letters a(l), b(l) with l ∈ L*.
pub fn sample_word<R: rand::Rng + ?Sized>(
    rng: &mut R,
    data: &TimmesfeldData,
    len: usize,
    shape: Shape,
) -> Mat2 {
    let k = data.field();
    (0..len).fold(Mat2::identity(k), |acc, _| {
        let l = sample::nonzero_in_span(rng, data.l.span(), shape);
        acc.mul(&if rng.gen_bool(0.5) { a(&l) } else { b(&l) })
    })
}
