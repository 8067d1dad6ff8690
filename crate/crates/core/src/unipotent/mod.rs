//! Unipotent groups U(k, K) of types G2 (characteristic 3) and C2
//! (characteristic 2), presented by root coordinates and commutator
//! relations, with multiplication by collection.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::funfield::{FieldError, KpSpan, Notation, RatField, RatFunc};
use crate::tower::{IndifferentSpec, SubfieldSpec};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum UnipotentError {
    #[error("expected {expected} coordinates, got {got}")]
    WrongLength { expected: usize, got: usize },
    #[error("coordinate of slot {slot} lies outside {domain}")]
    OutOfDomain { slot: usize, domain: String },
    #[error("slot {0} does not exist")]
    NoSuchSlot(usize),
    #[error("{kind} needs characteristic {need}, got {got}")]
    Characteristic { kind: Kind, need: u32, got: u32 },
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("cannot parse word: {0}")]
    Parse(String),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Kind {
    G2,
    C2,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::G2 => "G2",
            Kind::C2 => "C2",
        })
    }
}

/// An additive coordinate group, stored as a K^p-span.
#[derive(Clone, Debug)]
pub struct Domain {
    pub name: String,
    pub span: KpSpan,
}

impl Domain {
    pub fn contains(&self, x: &RatFunc) -> bool {
        self.span.contains(x)
    }

    /// f·D = D.
    pub fn stabilized_by(&self, f: &RatFunc) -> bool {
        match f.inv() {
            Ok(fi) => self.span.stable_under(f) && self.span.stable_under(&fi),
            Err(_) => false,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Slot {
    pub long: bool,
    pub domain: Domain,
    /// Exponents of (s_alpha, s_beta) in the torus action.
    pub weight: (i64, i64),
}

/// coeff · a^pa · b^pb placed in `slot`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Term {
    pub slot: usize,
    pub coeff: i64,
    pub pa: u32,
    pub pb: u32,
}

/// [x_i(a), x_j(b)] for i < j, as a product in increasing slot order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Term>,
}

#[derive(Clone, Debug)]
pub struct RootDatum2 {
    pub kind: Kind,
    pub field: RatField,
    pub slots: Vec<Slot>,
    pub relations: Vec<Relation>,
    z_slots: Vec<usize>,
    z2_slots: Vec<usize>,
    /// Slots of the fixed parameters u_first, u_last.
    ends: (usize, usize),
}

const fn t(slot: usize, coeff: i64, pa: u32, pb: u32) -> Term {
    Term {
        slot,
        coeff,
        pa,
        pb,
    }
}

impl RootDatum2 {
    /// Slots 1..6 alternate short (over K) and long (over k), with
    /// K^3 <= k <= K in characteristic 3.
    pub fn g2(k: &SubfieldSpec) -> Result<Self, UnipotentError> {
        let field = k.field();
        if field.p() != 3 {
            return Err(UnipotentError::Characteristic {
                kind: Kind::G2,
                need: 3,
                got: field.p(),
            });
        }
        let whole = Domain {
            name: "K".into(),
            span: SubfieldSpec::whole(field).span().clone(),
        };
        let small = Domain {
            name: "k".into(),
            span: k.span().clone(),
        };
        let weights = [(2, -1), (3, -1), (1, 0), (0, 1), (-1, 1), (-3, 2)];
        let slots = weights
            .iter()
            .enumerate()
            .map(|(i, &weight)| {
                let long = i % 2 == 1;
                Slot {
                    long,
                    domain: if long { small.clone() } else { whole.clone() },
                    weight,
                }
            })
            .collect();
        let relations = vec![
            Relation {
                i: 1,
                j: 5,
                terms: vec![t(3, -1, 1, 1)],
            },
            Relation {
                i: 2,
                j: 6,
                terms: vec![t(4, 1, 1, 1)],
            },
            Relation {
                i: 1,
                j: 6,
                terms: vec![t(2, -1, 3, 1), t(3, 1, 2, 1), t(4, 1, 3, 2), t(5, -1, 1, 1)],
            },
        ];
        Ok(RootDatum2 {
            kind: Kind::G2,
            field,
            slots,
            relations,
            z_slots: vec![3, 4],
            z2_slots: vec![2, 3, 4, 5],
            ends: (1, 6),
        })
    }

    /// Slots α, 2α+β, α+β, β over K0, L0, K0, L0, in characteristic 2.
    pub fn c2(ind: &IndifferentSpec) -> Result<Self, UnipotentError> {
        let field = ind.field();
        if field.p() != 2 {
            return Err(UnipotentError::Characteristic {
                kind: Kind::C2,
                need: 2,
                got: field.p(),
            });
        }
        let k0 = Domain {
            name: "K0".into(),
            span: ind.k0.span().clone(),
        };
        let l0 = Domain {
            name: "L0".into(),
            span: ind.l0.span().clone(),
        };
        let slots = vec![
            Slot {
                long: false,
                domain: k0.clone(),
                weight: (2, -1),
            },
            Slot {
                long: true,
                domain: l0.clone(),
                weight: (2, 0),
            },
            Slot {
                long: false,
                domain: k0,
                weight: (0, 1),
            },
            Slot {
                long: true,
                domain: l0,
                weight: (-2, 2),
            },
        ];
        let relations = vec![Relation {
            i: 1,
            j: 4,
            terms: vec![t(2, 1, 2, 1), t(3, 1, 1, 1)],
        }];
        Ok(RootDatum2 {
            kind: Kind::C2,
            field,
            slots,
            relations,
            z_slots: vec![2, 3],
            z2_slots: vec![1, 2, 3, 4],
            ends: (1, 4),
        })
    }

    pub fn rank(&self) -> usize {
        self.slots.len()
    }

    pub fn slot(&self, i: usize) -> Result<&Slot, UnipotentError> {
        i.checked_sub(1)
            .and_then(|j| self.slots.get(j))
            .ok_or(UnipotentError::NoSuchSlot(i))
    }

    pub fn relation(&self, i: usize, j: usize) -> Option<&Relation> {
        self.relations.iter().find(|r| r.i == i && r.j == j)
    }

    /// The fixed parameters u_1 and u_6 (G2) or u_1 and u_4 (C2).
    pub fn end_slots(&self) -> (usize, usize) {
        self.ends
    }

    pub fn z_slots(&self) -> &[usize] {
        &self.z_slots
    }

    pub fn z2_slots(&self) -> &[usize] {
        &self.z2_slots
    }

    pub fn identity(&self) -> UElement {
        UElement {
            coords: vec![self.field.zero(); self.rank()],
        }
    }

    /// x_i(c) as a normal form.
    pub fn root_element(&self, i: usize, c: RatFunc) -> Result<UElement, UnipotentError> {
        let slot = self.slot(i)?;
        if !slot.domain.contains(&c) {
            return Err(UnipotentError::OutOfDomain {
                slot: i,
                domain: slot.domain.name.clone(),
            });
        }
        let mut e = self.identity();
        e.coords[i - 1] = c;
        Ok(e)
    }

    pub fn element(&self, coords: Vec<RatFunc>) -> Result<UElement, UnipotentError> {
        if coords.len() != self.rank() {
            return Err(UnipotentError::WrongLength {
                expected: self.rank(),
                got: coords.len(),
            });
        }
        let e = UElement { coords };
        self.check_domain(&e)?;
        Ok(e)
    }

    pub fn check_domain(&self, e: &UElement) -> Result<(), UnipotentError> {
        for (i, (c, s)) in e.coords.iter().zip(&self.slots).enumerate() {
            if !s.domain.contains(c) {
                return Err(UnipotentError::OutOfDomain {
                    slot: i + 1,
                    domain: s.domain.name.clone(),
                });
            }
        }
        Ok(())
    }

    fn rel_terms(&self, rel: &Relation, a: &RatFunc, b: &RatFunc) -> Vec<(usize, RatFunc)> {
        rel.terms
            .iter()
            .map(|tm| {
                let v = &(&self.field.constant(tm.coeff) * &a.pow(tm.pa)) * &b.pow(tm.pb);
                (tm.slot, v)
            })
            .filter(|(_, v)| !v.is_zero())
            .collect()
    }

    /// Normal form of a word of root elements, by collection from the left.
    pub fn collect(&self, word: Vec<(usize, RatFunc)>) -> Result<UElement, UnipotentError> {
        const MAX_STEPS: usize = 100_000;
        let mut w: Vec<(usize, RatFunc)> = Vec::with_capacity(word.len());
        for (i, c) in word {
            self.slot(i)?;
            if !c.is_zero() {
                w.push((i, c));
            }
        }
        let mut steps = 0;
        let mut k = 0;
        while k + 1 < w.len() {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(UnipotentError::Invariant(
                    "collection does not terminate".into(),
                ));
            }
            let (i, j) = (w[k].0, w[k + 1].0);
            if i < j {
                k += 1;
                continue;
            }
            if i == j {
                let s = &w[k].1 + &w[k + 1].1;
                w.remove(k + 1);
                if s.is_zero() {
                    w.remove(k);
                } else {
                    w[k].1 = s;
                }
                k = k.saturating_sub(1);
                continue;
            }
            // x_i(a) x_j(b) = x_j(b) x_i(a) [x_j(b), x_i(a)]^{-1} for j < i.
            let (a, b) = (w[k].1.clone(), w[k + 1].1.clone());
            let tail: Vec<(usize, RatFunc)> = match self.relation(j, i) {
                None => Vec::new(),
                Some(rel) => self
                    .rel_terms(rel, &b, &a)
                    .into_iter()
                    .rev()
                    .map(|(s, v)| (s, -&v))
                    .collect(),
            };
            w[k] = (j, b);
            w[k + 1] = (i, a);
            let at = k + 2;
            w.splice(at..at, tail);
            k = k.saturating_sub(1);
        }
        let mut e = self.identity();
        for (i, c) in w {
            e.coords[i - 1] = c;
        }
        Ok(e)
    }

    pub fn word_of(&self, x: &UElement) -> Vec<(usize, RatFunc)> {
        x.coords
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (i + 1, c.clone()))
            .collect()
    }

    pub fn mul(&self, x: &UElement, y: &UElement) -> Result<UElement, UnipotentError> {
        let mut w = self.word_of(x);
        w.extend(self.word_of(y));
        let e = self.collect(w)?;
        self.check_domain(&e)
            .map_err(|err| UnipotentError::Invariant(format!("domain closure: {err}")))?;
        Ok(e)
    }

    pub fn inv(&self, x: &UElement) -> Result<UElement, UnipotentError> {
        let w: Vec<(usize, RatFunc)> = self
            .word_of(x)
            .into_iter()
            .rev()
            .map(|(i, c)| (i, -&c))
            .collect();
        self.collect(w)
    }

    /// x^{-1} y^{-1} x y.
    pub fn commutator(&self, x: &UElement, y: &UElement) -> Result<UElement, UnipotentError> {
        let mut w = self.word_of(&self.inv(x)?);
        w.extend(self.word_of(&self.inv(y)?));
        w.extend(self.word_of(x));
        w.extend(self.word_of(y));
        self.collect(w)
    }

    fn zero_outside(&self, x: &UElement, allowed: &[usize]) -> bool {
        x.coords
            .iter()
            .enumerate()
            .all(|(i, c)| c.is_zero() || allowed.contains(&(i + 1)))
    }

    fn ends(&self) -> Result<(UElement, UElement), UnipotentError> {
        let one = self.field.one();
        Ok((
            self.root_element(self.ends.0, one.clone())?,
            self.root_element(self.ends.1, one)?,
        ))
    }

    /// Membership in Z(U); the coordinate test must agree with
    /// [x, u_first] = [x, u_last] = 1.
    pub fn center_member(&self, x: &UElement) -> Result<bool, UnipotentError> {
        let by_coords = self.zero_outside(x, &self.z_slots);
        let (u1, un) = self.ends()?;
        let by_comm =
            self.commutator(x, &u1)?.is_identity() && self.commutator(x, &un)?.is_identity();
        if by_coords != by_comm {
            return Err(UnipotentError::Invariant(format!(
                "center: coordinates say {by_coords}, commutators say {by_comm}"
            )));
        }
        Ok(by_coords)
    }

    /// Membership in Z_2(U); the coordinate test must agree with
    /// [x, u_first], [x, u_last] ∈ Z.
    pub fn z2_member(&self, x: &UElement) -> Result<bool, UnipotentError> {
        let by_coords = self.zero_outside(x, &self.z2_slots);
        let (u1, un) = self.ends()?;
        let by_comm = self.zero_outside(&self.commutator(x, &u1)?, &self.z_slots)
            && self.zero_outside(&self.commutator(x, &un)?, &self.z_slots);
        if by_coords != by_comm {
            return Err(UnipotentError::Invariant(format!(
                "second center: coordinates say {by_coords}, commutators say {by_comm}"
            )));
        }
        Ok(by_coords)
    }

    /// Scaling factor s_alpha^e1 · s_beta^e2 of slot i.
    pub fn torus_factor(&self, h: &TorusElement2, i: usize) -> Result<RatFunc, UnipotentError> {
        let (e1, e2) = self.slot(i)?.weight;
        Ok(&h.s_alpha.powi(e1)? * &h.s_beta.powi(e2)?)
    }

    pub fn torus_act(&self, h: &TorusElement2, x: &UElement) -> Result<UElement, UnipotentError> {
        let mut coords = Vec::with_capacity(self.rank());
        for (i, c) in x.coords.iter().enumerate() {
            coords.push(c * &self.torus_factor(h, i + 1)?);
        }
        Ok(UElement { coords })
    }

    /// Every slot's scaling factor stabilizes that slot's domain.
    pub fn torus_normalizes(&self, h: &TorusElement2) -> Result<bool, UnipotentError> {
        for i in 1..=self.rank() {
            if !self
                .slot(i)?
                .domain
                .stabilized_by(&self.torus_factor(h, i)?)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Parses "x1(expr)*x6(expr)*..." into a word.
    pub fn parse_word(
        &self,
        notation: &Notation,
        s: &str,
    ) -> Result<Vec<(usize, RatFunc)>, UnipotentError> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Vec::new());
        }
        let mut out = Vec::new();
        for part in split_top(s, '*') {
            let part = part.trim();
            let rest = part.strip_prefix('x').ok_or_else(|| {
                UnipotentError::Parse(format!("'{part}' is not of the form xi(expr)"))
            })?;
            let open = rest
                .find('(')
                .ok_or_else(|| UnipotentError::Parse(format!("missing '(' in '{part}'")))?;
            if !rest.ends_with(')') {
                return Err(UnipotentError::Parse(format!("missing ')' in '{part}'")));
            }
            let slot: usize = rest[..open]
                .parse()
                .map_err(|_| UnipotentError::Parse(format!("bad slot index in '{part}'")))?;
            self.slot(slot)?;
            let c = notation.parse(&rest[open + 1..rest.len() - 1])?;
            out.push((slot, c));
        }
        Ok(out)
    }

    /// Normal form of a parsed word, with every letter checked against its domain.
    pub fn element_from_word(
        &self,
        word: Vec<(usize, RatFunc)>,
    ) -> Result<UElement, UnipotentError> {
        for (i, c) in &word {
            let slot = self.slot(*i)?;
            if !slot.domain.contains(c) {
                return Err(UnipotentError::OutOfDomain {
                    slot: *i,
                    domain: slot.domain.name.clone(),
                });
            }
        }
        let e = self.collect(word)?;
        self.check_domain(&e)
            .map_err(|err| UnipotentError::Invariant(format!("domain closure: {err}")))?;
        Ok(e)
    }

    pub fn render(&self, notation: &Notation, x: &UElement) -> String {
        let parts: Vec<String> = self
            .word_of(x)
            .iter()
            .map(|(i, c)| format!("x{i}({})", notation.render(c)))
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Normal-form coordinates x_1(c_1)·…·x_n(c_n).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UElement {
    pub coords: Vec<RatFunc>,
}

impl UElement {
    pub fn is_identity(&self) -> bool {
        self.coords.iter().all(RatFunc::is_zero)
    }
}

/// h_alpha(s_alpha)·h_beta(s_beta), alpha short and beta long.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorusElement2 {
    pub s_alpha: RatFunc,
    pub s_beta: RatFunc,
}

impl TorusElement2 {
    pub fn new(s_alpha: RatFunc, s_beta: RatFunc) -> Result<Self, UnipotentError> {
        if s_alpha.is_zero() || s_beta.is_zero() {
            return Err(UnipotentError::Field(FieldError::DivisionByZero));
        }
        Ok(TorusElement2 { s_alpha, s_beta })
    }

    pub fn identity(k: RatField) -> Self {
        TorusElement2 {
            s_alpha: k.one(),
            s_beta: k.one(),
        }
    }
}

pub mod sample {
    //! Random in-domain elements.

    use rand::Rng;

    use super::{RootDatum2, UElement};
    use crate::sample::{in_span, Shape};

    pub fn element<R: Rng + ?Sized>(rng: &mut R, d: &RootDatum2, shape: Shape) -> UElement {
        UElement {
            coords: d
                .slots
                .iter()
                .map(|s| in_span(rng, &s.domain.span, shape))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests;
