//! Recovery of the field data from a unipotent group given as a black box.
//!
//! Reconstruction code sees only the [`GroupOracle`] interface. Besides
//! the group operations and the root-group handles, the oracle may propose
//! decompositions and lifts; every proposal is checked with group
//! operations before it is used, so a wrong proposal surfaces as an error
//! and never as a wrong answer.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::funfield::{Notation, RatFunc};
use crate::sample::{self, Shape};
use crate::sp4::{chevalley_gen, sp4_bruhat, torus, Mat4, Sp4Context, Sp4Root};
use crate::unipotent::{Kind, RootDatum2, TorusElement2, UElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReconError {
    #[error("no verified lift into U{slot}")]
    Lift { slot: usize },
    #[error("no verified decomposition over slots {0:?}")]
    Factor(Vec<usize>),
    #[error("oracle is inconsistent: {0}")]
    Inconsistent(String),
    #[error("oracle implements {got}, expected {want}")]
    WrongKind { want: Kind, got: Kind },
}

/// A group with designated root subgroups and parameters.
pub trait GroupOracle: Sync {
    type Elem: Clone + fmt::Debug + Send + Sync;
    /// Opaque root-group parameter, passed back to the oracle unchanged.
    type Param: Clone;

    fn kind(&self) -> Kind;
    fn identity(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;
    /// u_1, u_6 (G2) or u_1, …, u_4 (C2).
    fn params(&self) -> Vec<Self::Elem>;
    fn in_root_group(&self, slot: usize, x: &Self::Elem) -> bool;
    fn sample_root_group(&self, slot: usize, seed: u64) -> Self::Elem;

    /// Proposed x = y_1·…·y_m with y_k in U_{slots[k]}.
    fn factor(&self, x: &Self::Elem, slots: &[usize]) -> Option<Vec<Self::Elem>>;
    /// Proposed parameter of a root element.
    fn root_parameter(&self, x: &Self::Elem) -> Option<Self::Param>;
    /// Proposed element of U_slot with the given parameter.
    fn root_element(&self, slot: usize, p: &Self::Param) -> Option<Self::Elem>;
}

/// Access to coordinates, for checking a recovery against the truth.
pub trait GroundTruth: GroupOracle {
    fn datum(&self) -> &RootDatum2;
    fn notation(&self) -> &Notation;
    fn embed(&self, slot: usize, c: &RatFunc) -> Self::Elem;
    fn coords(&self, x: &Self::Elem) -> UElement;
}

/// Group operations shared by both recoveries.
struct Ops<'a, O: GroupOracle> {
    o: &'a O,
}

impl<'a, O: GroupOracle> Ops<'a, O> {
    fn comm(&self, x: &O::Elem, y: &O::Elem) -> O::Elem {
        let o = self.o;
        o.mul(&o.mul(&o.inv(x), &o.inv(y)), &o.mul(x, y))
    }

    /// Verified decomposition of x over `slots`.
    fn factor(&self, x: &O::Elem, slots: &[usize]) -> Result<Vec<O::Elem>, ReconError> {
        let o = self.o;
        let err = || ReconError::Factor(slots.to_vec());
        let parts = o.factor(x, slots).ok_or_else(err)?;
        if parts.len() != slots.len()
            || !parts.iter().zip(slots).all(|(y, &s)| o.in_root_group(s, y))
        {
            return Err(err());
        }
        let prod = parts.iter().fold(o.identity(), |acc, y| o.mul(&acc, y));
        if !o.eq(&prod, x) {
            return Err(err());
        }
        Ok(parts)
    }

    /// The component of x in U_slot, for x in the product over `slots`.
    fn component(&self, x: &O::Elem, slots: &[usize], slot: usize) -> Result<O::Elem, ReconError> {
        let k = slots.iter().position(|&s| s == slot).expect("slot listed");
        Ok(self.factor(x, slots)?.swap_remove(k))
    }

    /// The element y of U_slot with check(y) = target, using the parameter
    /// of `source` as the proposal.
    fn lift(
        &self,
        slot: usize,
        source: &O::Elem,
        target: &O::Elem,
        check: impl Fn(&O::Elem) -> Result<O::Elem, ReconError>,
    ) -> Result<O::Elem, ReconError> {
        let o = self.o;
        let err = || ReconError::Lift { slot };
        let p = o.root_parameter(source).ok_or_else(err)?;
        let y = o.root_element(slot, &p).ok_or_else(err)?;
        if !o.in_root_group(slot, &y) || !o.eq(&check(&y)?, target) {
            return Err(err());
        }
        Ok(y)
    }
}

/// Element of U/Z or U/Z_2, compared through commutators with the
/// parameters at the two ends.
#[derive(Clone, Debug)]
pub struct CosetElem<E> {
    pub rep: E,
    pub modulus: Modulus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Modulus {
    Z,
    Z2,
}

impl<E: Clone + fmt::Debug + Send + Sync> CosetElem<E> {
    pub fn eq<O: GroupOracle<Elem = E>>(&self, other: &Self, o: &O) -> bool {
        assert_eq!(self.modulus, other.modulus, "cosets of different subgroups");
        let d = o.mul(&self.rep, &o.inv(&other.rep));
        match self.modulus {
            Modulus::Z => in_center(o, &d),
            Modulus::Z2 => in_second_center(o, &d),
        }
    }
}

fn end_params<O: GroupOracle>(o: &O) -> (O::Elem, O::Elem) {
    let ps = o.params();
    (ps[0].clone(), ps[ps.len() - 1].clone())
}

/// Commutes with u_first and u_last.
pub fn in_center<O: GroupOracle>(o: &O, x: &O::Elem) -> bool {
    let ops = Ops { o };
    let (a, b) = end_params(o);
    let id = o.identity();
    o.eq(&ops.comm(x, &a), &id) && o.eq(&ops.comm(x, &b), &id)
}

/// Commutators with u_first and u_last are central.
pub fn in_second_center<O: GroupOracle>(o: &O, x: &O::Elem) -> bool {
    let ops = Ops { o };
    let (a, b) = end_params(o);
    in_center(o, &ops.comm(x, &a)) && in_center(o, &ops.comm(x, &b))
}

/// γ(x, y) = [x, y] Z, bilinear on U/Z_2.
pub fn gamma<O: GroupOracle>(o: &O, x: &O::Elem, y: &O::Elem) -> CosetElem<O::Elem> {
    CosetElem {
        rep: Ops { o }.comm(x, y),
        modulus: Modulus::Z,
    }
}

const G2_MIDDLE: [usize; 4] = [2, 3, 4, 5];
const C2_MIDDLE: [usize; 2] = [2, 3];

/// (K, k) recovered from U of type G2. K lives on the U_3 line
/// (x_3(a) ↔ a) and k on the U_6 line (x_6(t) ↔ t).
pub struct G2Structure<'a, O: GroupOracle> {
    ops: Ops<'a, O>,
    u1: O::Elem,
    u6: O::Elem,
    x5_one: O::Elem,
    one: O::Elem,
}

pub fn g2_recover<O: GroupOracle>(o: &O) -> Result<G2Structure<'_, O>, ReconError> {
    if o.kind() != Kind::G2 {
        return Err(ReconError::WrongKind {
            want: Kind::G2,
            got: o.kind(),
        });
    }
    let ops = Ops { o };
    let ps = o.params();
    let (u1, u6) = (ps[0].clone(), ps[1].clone());
    // [u1, u6] = x2(-1)x3(1)x4(1)x5(-1); [u1, x5(1)] = x3(-1).
    let x5_one = o.inv(&ops.component(&ops.comm(&u1, &u6), &G2_MIDDLE, 5)?);
    let one = o.inv(&ops.comm(&u1, &x5_one));
    let s = G2Structure {
        ops,
        u1,
        u6,
        x5_one,
        one,
    };

    // λ: U_5 → U_3, y ↦ [u1, y] must be additive.
    for seed in 0..3 {
        let (y, z) = (
            o.sample_root_group(5, 2 * seed),
            o.sample_root_group(5, 2 * seed + 1),
        );
        let lhs = s.ops.comm(&s.u1, &o.mul(&y, &z));
        let rhs = o.mul(&s.ops.comm(&s.u1, &y), &s.ops.comm(&s.u1, &z));
        if !o.eq(&lhs, &rhs) {
            return Err(ReconError::Inconsistent(
                "commutation with u1 is not additive on U5".into(),
            ));
        }
    }
    if !o.eq(&s.mul(&s.one, &s.one)?, &s.one) {
        return Err(ReconError::Inconsistent("recovered 1·1 ≠ 1".into()));
    }
    Ok(s)
}

impl<'a, O: GroupOracle> G2Structure<'a, O> {
    fn o(&self) -> &'a O {
        self.ops.o
    }

    pub fn one(&self) -> &O::Elem {
        &self.one
    }

    pub fn one_k(&self) -> &O::Elem {
        &self.u6
    }

    pub fn add(&self, a: &O::Elem, b: &O::Elem) -> O::Elem {
        self.o().mul(a, b)
    }

    pub fn neg(&self, a: &O::Elem) -> O::Elem {
        self.o().inv(a)
    }

    /// x_1(a) from x_3(a): [x_1(a), x_5(1)] = x_3(-a).
    fn to_u1(&self, a: &O::Elem) -> Result<O::Elem, ReconError> {
        let target = self.o().inv(a);
        self.ops
            .lift(1, a, &target, |y| Ok(self.ops.comm(y, &self.x5_one)))
    }

    /// x_5(b) from x_3(b): [u_1, x_5(b)] = x_3(-b).
    fn to_u5(&self, b: &O::Elem) -> Result<O::Elem, ReconError> {
        let target = self.o().inv(b);
        self.ops
            .lift(5, b, &target, |y| Ok(self.ops.comm(&self.u1, y)))
    }

    /// ab from [x_1(a), x_5(b)] = x_3(-ab).
    pub fn mul(&self, a: &O::Elem, b: &O::Elem) -> Result<O::Elem, ReconError> {
        Ok(self
            .o()
            .inv(&self.ops.comm(&self.to_u1(a)?, &self.to_u5(b)?)))
    }

    /// k → K: x_6(t) ↦ the U_3 component of [u_1, x_6(t)], which is x_3(t).
    pub fn embed(&self, t: &O::Elem) -> Result<O::Elem, ReconError> {
        self.ops
            .component(&self.ops.comm(&self.u1, t), &G2_MIDDLE, 3)
    }

    /// μ_2: the U_2 component of [x_1(a), x_6(t)], which is x_2(-t a^3).
    fn mu2(&self, a: &O::Elem, t: &O::Elem) -> Result<O::Elem, ReconError> {
        self.ops
            .component(&self.ops.comm(&self.to_u1(a)?, t), &G2_MIDDLE, 2)
    }

    /// The y in U_6 whose μ_2 with u_1 is x: μ_2(1, x_6(s)) = x_2(-s).
    fn from_u2(&self, x: &O::Elem) -> Result<O::Elem, ReconError> {
        let source = self.o().inv(x);
        self.ops.lift(6, &source, x, |y| {
            self.ops
                .component(&self.ops.comm(&self.u1, y), &G2_MIDDLE, 2)
        })
    }

    /// m_2(a, t) = -a^3 t in k.
    pub fn m2(&self, a: &O::Elem, t: &O::Elem) -> Result<O::Elem, ReconError> {
        Ok(self.o().inv(&self.from_u2(&self.mu2(a, t)?)?))
    }

    /// ξ(a) = a^3 in k, as -m_2(a, 1).
    pub fn xi(&self, a: &O::Elem) -> Result<O::Elem, ReconError> {
        self.from_u2(&self.mu2(a, &self.u6)?)
    }

    /// m_2(a, ξ(b)) = -ξ(ab).
    pub fn law_holds(&self, a: &O::Elem, b: &O::Elem) -> Result<bool, ReconError> {
        let lhs = self.m2(a, &self.xi(b)?)?;
        let rhs = self.o().inv(&self.xi(&self.mul(a, b)?)?);
        Ok(self.o().eq(&lhs, &rhs))
    }
}

/// (K0, L0, +, *) recovered from U of type C2. K0 lives on the U_3 line;
/// L0 is the subset of carrier elements that lift to U_4.
pub struct C2Structure<'a, O: GroupOracle> {
    ops: Ops<'a, O>,
    u: Vec<O::Elem>,
}

pub fn c2_recover<O: GroupOracle>(o: &O) -> Result<C2Structure<'_, O>, ReconError> {
    if o.kind() != Kind::C2 {
        return Err(ReconError::WrongKind {
            want: Kind::C2,
            got: o.kind(),
        });
    }
    let s = C2Structure {
        ops: Ops { o },
        u: o.params(),
    };
    // Witness identity [x_1(1), x_4(1)] = x_2(1)x_3(1).
    let c = s.ops.comm(&s.u[0], &s.u[3]);
    if !o.eq(&c, &o.mul(&s.u[1], &s.u[2])) {
        return Err(ReconError::Inconsistent("[u1, u4] ≠ u2·u3".into()));
    }
    for seed in 0..3 {
        let (y, z) = (
            o.sample_root_group(4, 2 * seed),
            o.sample_root_group(4, 2 * seed + 1),
        );
        let lhs = s.ops.comm(&s.u[0], &o.mul(&y, &z));
        let rhs = o.mul(&s.ops.comm(&s.u[0], &y), &s.ops.comm(&s.u[0], &z));
        if !o.eq(&lhs, &rhs) {
            return Err(ReconError::Inconsistent(
                "commutation with u1 is not additive on U4".into(),
            ));
        }
    }
    if !o.eq(&s.star(&s.u[2], &s.u[2])?, &s.u[2]) {
        return Err(ReconError::Inconsistent("recovered 1*1 ≠ 1".into()));
    }
    Ok(s)
}

impl<'a, O: GroupOracle> C2Structure<'a, O> {
    fn o(&self) -> &'a O {
        self.ops.o
    }

    pub fn one(&self) -> &O::Elem {
        &self.u[2]
    }

    pub fn add(&self, a: &O::Elem, b: &O::Elem) -> O::Elem {
        self.o().mul(a, b)
    }

    /// x_1(b) from x_3(b): the U_3 component of [x_1(b), u_4] is x_3(b).
    fn to_u1(&self, b: &O::Elem) -> Result<O::Elem, ReconError> {
        self.ops.lift(1, b, b, |y| {
            self.ops
                .component(&self.ops.comm(y, &self.u[3]), &C2_MIDDLE, 3)
        })
    }

    /// x_4(a) from x_j(a), j ∈ {2, 3}: the U_j component of [u_1, x_4(a)].
    fn to_u4(&self, x: &O::Elem, from: usize) -> Result<O::Elem, ReconError> {
        self.ops.lift(4, x, x, |y| {
            self.ops
                .component(&self.ops.comm(&self.u[0], y), &C2_MIDDLE, from)
        })
    }

    /// m_2(a, 1) = a^2 on the U_2 line.
    pub fn square(&self, a: &O::Elem) -> Result<O::Elem, ReconError> {
        self.ops
            .component(&self.ops.comm(&self.to_u1(a)?, &self.u[3]), &C2_MIDDLE, 2)
    }

    /// a * b = a^2 b = m_3(b, a^2).
    pub fn star(&self, a: &O::Elem, b: &O::Elem) -> Result<O::Elem, ReconError> {
        let a2 = self.to_u4(&self.square(a)?, 2)?;
        self.ops
            .component(&self.ops.comm(&self.to_u1(b)?, &a2), &C2_MIDDLE, 3)
    }

    /// Is the carrier element in L0, i.e. the U_3 component of some [u_1, y], y ∈ U_4?
    pub fn in_l0(&self, c: &O::Elem) -> bool {
        self.to_u4(c, 3).is_ok()
    }

    /// U_2 line → carrier: x_2(a) ↦ x_3(a) through [u_1, x_4(a)] = x_2(a)x_3(a).
    pub fn embed_l0(&self, x: &O::Elem) -> Result<O::Elem, ReconError> {
        let y = self.to_u4(x, 2)?;
        self.ops
            .component(&self.ops.comm(&self.u[0], &y), &C2_MIDDLE, 3)
    }
}

/// The unipotent engine as an oracle.
#[derive(Clone, Debug)]
pub struct UOracle {
    pub d: RootDatum2,
    pub notation: Notation,
}

impl UOracle {
    pub fn new(d: RootDatum2, notation: Notation) -> Self {
        UOracle { d, notation }
    }

    fn single_slot(&self, x: &UElement) -> Option<usize> {
        let nz: Vec<usize> = (0..x.coords.len())
            .filter(|&i| !x.coords[i].is_zero())
            .collect();
        (nz.len() == 1).then(|| nz[0] + 1)
    }
}

impl GroupOracle for UOracle {
    type Elem = UElement;
    type Param = RatFunc;

    fn kind(&self) -> Kind {
        self.d.kind
    }

    fn identity(&self) -> UElement {
        self.d.identity()
    }

    fn mul(&self, a: &UElement, b: &UElement) -> UElement {
        self.d.mul(a, b).expect("closed under multiplication")
    }

    fn inv(&self, a: &UElement) -> UElement {
        self.d.inv(a).expect("closed under inversion")
    }

    fn eq(&self, a: &UElement, b: &UElement) -> bool {
        a == b
    }

    fn params(&self) -> Vec<UElement> {
        let one = self.d.field.one();
        let slots: Vec<usize> = match self.d.kind {
            Kind::G2 => vec![1, 6],
            Kind::C2 => vec![1, 2, 3, 4],
        };
        slots
            .into_iter()
            .map(|i| {
                self.d
                    .root_element(i, one.clone())
                    .expect("1 in every domain")
            })
            .collect()
    }

    fn in_root_group(&self, slot: usize, x: &UElement) -> bool {
        let Ok(s) = self.d.slot(slot) else {
            return false;
        };
        x.coords.iter().enumerate().all(|(i, c)| {
            if i + 1 == slot {
                s.domain.contains(c)
            } else {
                c.is_zero()
            }
        })
    }

    fn sample_root_group(&self, slot: usize, seed: u64) -> UElement {
        let mut r = sample::rng(seed ^ ((slot as u64) << 32));
        let c = sample::in_span(&mut r, &self.d.slots[slot - 1].domain.span, Shape::TINY);
        self.d.root_element(slot, c).expect("sampled in the domain")
    }

    fn factor(&self, x: &UElement, slots: &[usize]) -> Option<Vec<UElement>> {
        if !slots.windows(2).all(|w| w[0] < w[1]) {
            return None;
        }
        let support_ok = x
            .coords
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || slots.contains(&(i + 1)));
        if !support_ok {
            return None;
        }
        slots
            .iter()
            .map(|&s| self.d.root_element(s, x.coords.get(s - 1)?.clone()).ok())
            .collect()
    }

    fn root_parameter(&self, x: &UElement) -> Option<RatFunc> {
        if x.is_identity() {
            return Some(self.d.field.zero());
        }
        self.single_slot(x).map(|i| x.coords[i - 1].clone())
    }

    fn root_element(&self, slot: usize, p: &RatFunc) -> Option<UElement> {
        self.d.root_element(slot, p.clone()).ok()
    }
}

impl GroundTruth for UOracle {
    fn datum(&self) -> &RootDatum2 {
        &self.d
    }

    fn notation(&self) -> &Notation {
        &self.notation
    }

    fn embed(&self, slot: usize, c: &RatFunc) -> UElement {
        self.d
            .root_element(slot, c.clone())
            .expect("ground-truth coordinate in its domain")
    }

    fn coords(&self, x: &UElement) -> UElement {
        x.clone()
    }
}

/// Negative control: a product x·y picks up an extra factor x_3(1) when x
/// has a nonzero coordinate in slot 5 (G2) or 4 (C2) and the slot-1
/// coordinate of y is not a constant. Products with u_1 stay intact.
#[derive(Clone, Debug)]
pub struct CorruptedOracle(pub UOracle);

impl GroupOracle for CorruptedOracle {
    type Elem = UElement;
    type Param = RatFunc;

    fn kind(&self) -> Kind {
        self.0.kind()
    }
    fn identity(&self) -> UElement {
        self.0.identity()
    }
    fn mul(&self, a: &UElement, b: &UElement) -> UElement {
        let p = self.0.mul(a, b);
        let trigger = match self.kind() {
            Kind::G2 => 5,
            Kind::C2 => 4,
        };
        if !a.coords[trigger - 1].is_zero() && !b.coords[0].is_constant() {
            let one = self.0.d.field.one();
            return self
                .0
                .mul(&p, &self.0.d.root_element(3, one).expect("1 in the domain"));
        }
        p
    }
    fn inv(&self, a: &UElement) -> UElement {
        self.0.inv(a)
    }
    fn eq(&self, a: &UElement, b: &UElement) -> bool {
        a == b
    }
    fn params(&self) -> Vec<UElement> {
        self.0.params()
    }
    fn in_root_group(&self, slot: usize, x: &UElement) -> bool {
        self.0.in_root_group(slot, x)
    }
    fn sample_root_group(&self, slot: usize, seed: u64) -> UElement {
        self.0.sample_root_group(slot, seed)
    }
    fn factor(&self, x: &UElement, slots: &[usize]) -> Option<Vec<UElement>> {
        self.0.factor(x, slots)
    }
    fn root_parameter(&self, x: &UElement) -> Option<RatFunc> {
        self.0.root_parameter(x)
    }
    fn root_element(&self, slot: usize, p: &RatFunc) -> Option<UElement> {
        self.0.root_element(slot, p)
    }
}

impl GroundTruth for CorruptedOracle {
    fn datum(&self) -> &RootDatum2 {
        &self.0.d
    }
    fn notation(&self) -> &Notation {
        &self.0.notation
    }
    fn embed(&self, slot: usize, c: &RatFunc) -> UElement {
        self.0.embed(slot, c)
    }
    fn coords(&self, x: &UElement) -> UElement {
        x.clone()
    }
}

pub enum Recovered<'a, O: GroupOracle> {
    G2(G2Structure<'a, O>),
    C2(C2Structure<'a, O>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub op: String,
    pub inputs: Vec<String>,
    pub expected: String,
    pub got: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecoveryReport {
    pub kind: Kind,
    pub seed: u64,
    pub instances: usize,
    pub checks: usize,
    pub mismatches: Vec<Mismatch>,
}

impl RecoveryReport {
    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

struct Checker<'a, O: GroundTruth> {
    o: &'a O,
    checks: usize,
    mismatches: Vec<Mismatch>,
}

impl<'a, O: GroundTruth> Checker<'a, O> {
    fn show(&self, x: &RatFunc) -> String {
        self.o.notation().render(x)
    }

    /// The coordinate of an element of U_slot.
    fn read(&self, slot: usize, x: &O::Elem) -> Option<RatFunc> {
        let c = self.o.coords(x);
        let only = c
            .coords
            .iter()
            .enumerate()
            .all(|(i, v)| i + 1 == slot || v.is_zero());
        only.then(|| c.coords[slot - 1].clone())
    }

    fn check(
        &mut self,
        op: &str,
        inputs: &[&RatFunc],
        slot: usize,
        got: Result<O::Elem, ReconError>,
        want: RatFunc,
    ) {
        self.checks += 1;
        let got = match got {
            Ok(x) => self
                .read(slot, &x)
                .ok_or_else(|| format!("not in U{slot}: {:?}", self.o.coords(&x))),
            Err(e) => Err(e.to_string()),
        };
        if got.as_ref().ok() != Some(&want) {
            self.mismatches.push(Mismatch {
                op: op.into(),
                inputs: inputs.iter().map(|x| self.show(x)).collect(),
                expected: self.show(&want),
                got: match got {
                    Ok(v) => self.show(&v),
                    Err(e) => e,
                },
            });
        }
    }

    fn check_bool(&mut self, op: &str, inputs: &[&RatFunc], got: bool, want: bool) {
        self.checks += 1;
        if got != want {
            self.mismatches.push(Mismatch {
                op: op.into(),
                inputs: inputs.iter().map(|x| self.show(x)).collect(),
                expected: want.to_string(),
                got: got.to_string(),
            });
        }
    }
}

/// Compares `n` random instances of every recovered operation with the
/// true field operations, through the oracle's coordinates.
pub fn verify_recovery<O: GroundTruth>(
    r: &Recovered<'_, O>,
    truth: &O,
    n: usize,
    seed: u64,
) -> RecoveryReport {
    let d = truth.datum();
    let mut rng = sample::rng(seed);
    let mut c = Checker {
        o: truth,
        checks: 0,
        mismatches: Vec::new(),
    };
    let span = |slot: usize| &d.slots[slot - 1].domain.span;
    match r {
        Recovered::G2(s) => {
            for _ in 0..n {
                let a = sample::in_span(&mut rng, span(3), Shape::TINY);
                let b = sample::in_span(&mut rng, span(3), Shape::TINY);
                let t = sample::in_span(&mut rng, span(6), Shape::TINY);
                let (xa, xb, xt) = (truth.embed(3, &a), truth.embed(3, &b), truth.embed(6, &t));
                c.check("add", &[&a, &b], 3, Ok(s.add(&xa, &xb)), &a + &b);
                c.check("neg", &[&a], 3, Ok(s.neg(&xa)), -&a);
                c.check("mul", &[&a, &b], 3, s.mul(&xa, &xb), &a * &b);
                c.check("embed", &[&t], 3, s.embed(&xt), t.clone());
                c.check("xi", &[&a], 6, s.xi(&xa), a.pow(3));
                c.check("m2", &[&a, &t], 6, s.m2(&xa, &xt), -&(&a.pow(3) * &t));
                let law = s.law_holds(&xa, &xb).unwrap_or(false);
                c.check_bool("m2_xi_law", &[&a, &b], law, true);
            }
        }
        Recovered::C2(s) => {
            let l0 = &d.slots[1].domain;
            for _ in 0..n {
                let a = sample::in_span(&mut rng, span(3), Shape::TINY);
                let b = sample::in_span(&mut rng, span(3), Shape::TINY);
                let l = sample::in_span(&mut rng, span(2), Shape::TINY);
                let (xa, xb, xl) = (truth.embed(3, &a), truth.embed(3, &b), truth.embed(2, &l));
                c.check("add", &[&a, &b], 3, Ok(s.add(&xa, &xb)), &a + &b);
                c.check("square", &[&a], 2, s.square(&xa), a.pow(2));
                c.check("star", &[&a, &b], 3, s.star(&xa, &xb), &a.pow(2) * &b);
                c.check("embed_l0", &[&l], 3, s.embed_l0(&xl), l.clone());
                c.check_bool("in_l0", &[&a], s.in_l0(&xa), l0.contains(&a));
                c.check_bool("in_l0", &[&l], s.in_l0(&truth.embed(3, &l)), true);
            }
        }
    }
    RecoveryReport {
        kind: d.kind,
        seed,
        instances: n,
        checks: c.checks,
        mismatches: c.mismatches,
    }
}

/// One candidate of the double-centralizer experiment.
#[derive(Clone, Debug, Serialize)]
pub struct CcCandidate {
    pub label: String,
    pub commutes_with_sampled_centralizer: bool,
    pub in_root_group: bool,
    pub consistent: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CcReport {
    pub root: String,
    pub centralizer_roots: Vec<String>,
    pub centralizer_samples: usize,
    pub candidates: Vec<CcCandidate>,
}

impl CcReport {
    pub fn all_consistent(&self) -> bool {
        self.candidates.iter().all(|c| c.consistent)
    }
}

fn in_root_group(g: &Mat4, r: Sp4Root, ctx: &Sp4Context) -> bool {
    let k = g.field();
    let br = sp4_bruhat(&(if r.positive { g.clone() } else { conj_w0(g) }));
    let slot = r.slot as usize;
    br.w.length() == 0
        && br.tau == TorusElement2::identity(k)
        && br
            .u1
            .coords
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || i + 1 == slot)
        && ctx.domain(r).contains(&br.u1.coords[slot - 1])
}

/// n_{w0} g n_{w0}^{-1}, which swaps positive and negative root groups.
fn conj_w0(g: &Mat4) -> Mat4 {
    let n = crate::sp4::Weyl::ALL[7].rep(g.field());
    n.mul(g).mul(&n.inv())
}

/// Sampled evidence for U_r = C(C(U_r)). C(U_r) is sampled through the
/// root groups commuting with U_r, which for a long root include both
/// halves of the rank-one group of the orthogonal long root. Candidates
/// commuting with every sample should be exactly the elements of U_r.
pub fn cc_experiment(root: Sp4Root, ctx: &Sp4Context, samples: usize, seed: u64) -> CcReport {
    let k = ctx.field();
    let mut rng = sample::rng(seed);
    let draw = |r: Sp4Root, rng: &mut sample::SampleRng| {
        sample::nonzero_in_span(rng, ctx.domain(r).span(), Shape::TINY)
    };
    let probe = chevalley_gen(root, &k.one());
    let id = Mat4::identity(k);
    let cent_roots: Vec<Sp4Root> = Sp4Root::ALL
        .iter()
        .copied()
        .filter(|&s| Mat4::commutator(&probe, &chevalley_gen(s, &k.var(0).pow(2))) == id)
        .collect();
    let mut gens = Vec::new();
    for _ in 0..samples {
        for &s in &cent_roots {
            gens.push(chevalley_gen(s, &draw(s, &mut rng)));
        }
    }
    let mut cands: Vec<(String, Mat4)> = vec![("identity".into(), id.clone())];
    for i in 0..samples {
        cands.push((
            format!("{root} sample {i}"),
            chevalley_gen(root, &draw(root, &mut rng)),
        ));
        let s = Sp4Root::ALL[i % 8];
        if s != root {
            cands.push((
                format!("{s} sample {i}"),
                chevalley_gen(s, &draw(s, &mut rng)),
            ));
        }
        let h = TorusElement2::new(
            sample::nonzero(&mut rng, k, Shape::TINY),
            sample::nonzero(&mut rng, k, Shape::TINY),
        )
        .expect("nonzero");
        if h != TorusElement2::identity(k) {
            cands.push((format!("torus sample {i}"), torus(&h)));
        }
    }
    let candidates = cands
        .into_iter()
        .map(|(label, g)| {
            let commutes = gens.iter().all(|c| g.mul(c) == c.mul(&g));
            let in_u = in_root_group(&g, root, ctx);
            CcCandidate {
                label,
                commutes_with_sampled_centralizer: commutes,
                in_root_group: in_u,
                consistent: commutes == in_u,
            }
        })
        .collect();
    CcReport {
        root: root.to_string(),
        centralizer_roots: cent_roots.iter().map(|r| r.to_string()).collect(),
        centralizer_samples: gens.len(),
        candidates,
    }
}

#[cfg(test)]
mod tests;
