//! Subfield chains K^p <= K_1 <= ... <= K, additive groups R_i over them,
//! and (weak) indifferent sets, with exact validators.

mod config;

pub use config::{Config, ConfigError, SpaceData};

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::funfield::{
    is_p_independent, lambda, left_kernel, Echelon, FieldError, KpSpan, LambdaCoords, RatField,
    RatFunc,
};
use crate::sample::{self, Shape};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TowerError {
    #[error("{name}: basis must contain 1")]
    MissingOne { name: String },
    #[error("{name}: basis is linearly dependent over its scalar field")]
    DependentBasis { name: String },
    #[error("{name}: generators are not p-independent")]
    DependentGens { name: String },
    #[error("{name}: unknown scalar field '{over}'")]
    UnknownField { name: String, over: String },
    #[error("chain hypothesis fails at level {level}: {detail}")]
    Hypothesis { level: usize, detail: String },
    #[error("indifferent sets need characteristic 2, got {p}")]
    NotChar2 { p: u32 },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// K_i = K^p[gens].
#[derive(Clone, Debug)]
pub struct SubfieldSpec {
    pub name: String,
    pub gens: Vec<RatFunc>,
    span: KpSpan,
}

impl SubfieldSpec {
    pub fn new(name: impl Into<String>, field: RatField, gens: Vec<RatFunc>) -> Self {
        let span = KpSpan::field_closure(field, &gens);
        SubfieldSpec {
            name: name.into(),
            gens,
            span,
        }
    }

    /// K^p itself.
    pub fn kp(field: RatField) -> Self {
        Self::new("Kp", field, Vec::new())
    }

    /// All of K.
    pub fn whole(field: RatField) -> Self {
        Self::new("K", field, field.vars())
    }

    pub fn field(&self) -> RatField {
        self.span.field()
    }

    pub fn span(&self) -> &KpSpan {
        &self.span
    }

    /// [K_i : K^p].
    pub fn degree(&self) -> usize {
        self.span.dim()
    }

    pub fn gens_independent(&self) -> bool {
        is_p_independent(&self.gens, &[])
    }

    pub fn contains(&self, x: &RatFunc) -> bool {
        self.span.contains(x)
    }

    pub fn same_field(&self, o: &SubfieldSpec) -> bool {
        self.span.same_space(&o.span)
    }

    pub fn is_subfield_of(&self, o: &SubfieldSpec) -> bool {
        self.span.is_subspace_of(&o.span)
    }
}

/// Lambda-coordinates of x over K^p relative to F's generators.
pub fn subfield_member(x: &RatFunc, f: &SubfieldSpec) -> Result<Option<LambdaCoords>, TowerError> {
    if !f.gens_independent() {
        return Err(TowerError::DependentGens {
            name: f.name.clone(),
        });
    }
    if !f.contains(x) {
        return Ok(None);
    }
    let l = lambda(&f.gens, x);
    debug_assert!(l.defined);
    Ok(Some(l))
}

/// R = K_i-span of `basis`, with 1 in the basis.
#[derive(Clone, Debug)]
pub struct RSpaceSpec {
    pub name: String,
    pub over: SubfieldSpec,
    pub basis: Vec<RatFunc>,
    span: KpSpan,
}

impl RSpaceSpec {
    pub fn new(
        name: impl Into<String>,
        over: SubfieldSpec,
        basis: Vec<RatFunc>,
    ) -> Result<Self, TowerError> {
        let name = name.into();
        if !basis.iter().any(RatFunc::is_one) {
            return Err(TowerError::MissingOne { name });
        }
        let field = over.field();
        let mut span = KpSpan::empty(field);
        for b in &basis {
            for f in over.span.basis() {
                if !span.push(b * f) {
                    return Err(TowerError::DependentBasis { name });
                }
            }
        }
        Ok(RSpaceSpec {
            name,
            over,
            basis,
            span,
        })
    }

    /// A K^p-space given directly by K^p-generators (scalar field K^p).
    pub fn over_kp(
        name: impl Into<String>,
        field: RatField,
        basis: Vec<RatFunc>,
    ) -> Result<Self, TowerError> {
        Self::new(name, SubfieldSpec::kp(field), basis)
    }

    pub fn field(&self) -> RatField {
        self.span.field()
    }

    /// K^p-span data.
    pub fn span(&self) -> &KpSpan {
        &self.span
    }

    pub fn contains(&self, x: &RatFunc) -> bool {
        self.span.contains(x)
    }

    /// dim over the declared scalar field.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Σ c_j · basis_j.
    pub fn combine(&self, coords: &[RatFunc]) -> RatFunc {
        coords
            .iter()
            .zip(&self.basis)
            .fold(self.field().zero(), |acc, (c, b)| &acc + &(c * b))
    }
}

/// Unique coordinates of x over the scalar field K_i, if x ∈ R.
pub fn rspace_member(x: &RatFunc, r: &RSpaceSpec) -> Option<Vec<RatFunc>> {
    let c = r.span.express(x)?;
    let fb = r.over.span.basis();
    let m = fb.len();
    Some(
        (0..r.basis.len())
            .map(|j| {
                (0..m).fold(r.field().zero(), |acc, k| {
                    let ck = &c[j * m + k];
                    if ck.is_zero() {
                        acc
                    } else {
                        &acc + &(&ck.frobenius() * &fb[k])
                    }
                })
            })
            .collect(),
    )
}

/// {a ∈ span : a·span ⊆ span}, as K^p-generators.
fn stabilizer_elements(span: &KpSpan) -> Vec<RatFunc> {
    let e = span.basis();
    let k = span.field();
    let rows: Vec<Vec<RatFunc>> = e
        .iter()
        .map(|er| {
            e.iter()
                .flat_map(|es| span.remainder_coords(&(er * es)))
                .collect()
        })
        .collect();
    left_kernel(k, &rows)
        .into_iter()
        .map(|alpha| {
            alpha
                .iter()
                .zip(e)
                .filter(|(a, _)| !a.is_zero())
                .fold(k.zero(), |acc, (a, b)| &acc + &(&a.frobenius() * b))
        })
        .filter(|x| !x.is_zero())
        .collect()
}

/// Greedy p-independent generators for the field K^p-spanned by `elems`.
fn field_gens(k: RatField, elems: &[RatFunc]) -> Vec<RatFunc> {
    let mut gens = Vec::new();
    let mut cur = KpSpan::field_closure(k, &gens);
    for x in elems {
        if !cur.contains(x) {
            gens.push(x.clone());
            cur = KpSpan::field_closure(k, &gens);
        }
    }
    gens
}

/// The multiplicative stabilizer of a K^p-space containing 1.
pub fn stabilizer_of_span(name: impl Into<String>, span: &KpSpan) -> SubfieldSpec {
    let k = span.field();
    let elems = stabilizer_elements(span);
    SubfieldSpec::new(name, k, field_gens(k, &elems))
}

pub fn stabilizer_field(r: &RSpaceSpec) -> SubfieldSpec {
    stabilizer_of_span(format!("Stab({})", r.name), &r.span)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: &str, passed: bool, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.to_string(),
            passed,
            detail: detail.into(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LevelReport {
    pub name: String,
    pub checks: Vec<CheckResult>,
    pub dims: BTreeMap<String, usize>,
}

impl LevelReport {
    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationReport {
    pub kind: String,
    pub accepted: bool,
    pub checks: Vec<CheckResult>,
    pub levels: Vec<LevelReport>,
}

impl ValidationReport {
    fn finish(kind: &str, checks: Vec<CheckResult>, levels: Vec<LevelReport>) -> Self {
        let accepted = checks
            .iter()
            .chain(levels.iter().flat_map(|l| &l.checks))
            .all(|c| c.passed);
        ValidationReport {
            kind: kind.to_string(),
            accepted,
            checks,
            levels,
        }
    }

    pub fn failed_checks(&self) -> Vec<String> {
        let top = self
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.clone());
        let lv = self.levels.iter().flat_map(|l| {
            l.checks
                .iter()
                .filter(|c| !c.passed)
                .map(move |c| format!("{}/{}", l.name, c.name))
        });
        top.chain(lv).collect()
    }
}

#[derive(Clone, Debug)]
pub struct TowerSpec {
    pub field: RatField,
    pub subfields: Vec<SubfieldSpec>,
    pub rspaces: Vec<RSpaceSpec>,
}

#[derive(Clone, Copy, Debug)]
pub struct TowerOptions {
    pub samples: usize,
    pub seed: u64,
}

impl Default for TowerOptions {
    fn default() -> Self {
        TowerOptions {
            samples: 64,
            seed: 0,
        }
    }
}

impl TowerSpec {
    /// K^p, the declared subfields, then K.
    pub fn chain(&self) -> Vec<SubfieldSpec> {
        let mut c = vec![SubfieldSpec::kp(self.field)];
        c.extend(self.subfields.iter().cloned());
        c.push(SubfieldSpec::whole(self.field));
        c
    }
}

pub fn validate_tower(
    spec: &TowerSpec,
    opts: TowerOptions,
) -> Result<ValidationReport, TowerError> {
    let k = spec.field;
    let chain = spec.chain();
    let mut checks = Vec::new();
    for f in &spec.subfields {
        if !f.gens_independent() {
            return Err(TowerError::DependentGens {
                name: f.name.clone(),
            });
        }
    }
    let increasing = chain.windows(2).all(|w| w[0].is_subfield_of(&w[1]));
    checks.push(CheckResult::new(
        "chain_inclusion",
        increasing,
        "K^p <= K_1 <= ... <= K",
    ));
    checks.push(CheckResult::new(
        "imperfection_degree",
        true,
        format!("[K:K^p] = {}", k.pn()),
    ));

    let mut rng = sample::rng(opts.seed);
    let mut levels = Vec::new();
    for r in &spec.rspaces {
        let idx = chain
            .iter()
            .rposition(|f| f.same_field(&r.over))
            .ok_or_else(|| TowerError::UnknownField {
                name: r.name.clone(),
                over: r.over.name.clone(),
            })?;
        let next = &chain[(idx + 1).min(chain.len() - 1)];
        let mut lc = Vec::new();
        let mut dims = BTreeMap::new();
        dims.insert("dim_R_over_Ki".to_string(), r.dim());
        dims.insert(
            "deg_Knext_over_Ki".to_string(),
            next.degree() / r.over.degree(),
        );
        dims.insert("dim_R_over_Kp".to_string(), r.span.dim());
        dims.insert("deg_K_over_Kp".to_string(), k.pn());

        lc.push(CheckResult::new(
            "contains_Ki",
            r.basis.iter().any(RatFunc::is_one),
            "1 in basis",
        ));
        let inside = r.span.is_subspace_of(next.span());
        lc.push(CheckResult::new(
            "within_next_field",
            inside,
            format!("R <= {}", next.name),
        ));

        let stab = stabilizer_field(r);
        let c1 = stab.same_field(&r.over);
        lc.push(CheckResult::new(
            "condition1_stabilizer",
            c1,
            format!(
                "[Stab:K^p] = {}, [K_i:K^p] = {}",
                stab.degree(),
                r.over.degree()
            ),
        ));

        let rest: Vec<RatFunc> = r.basis.iter().filter(|b| !b.is_one()).cloned().collect();
        let c2 = is_p_independent(&rest, &r.over.gens);
        lc.push(CheckResult::new(
            "condition2_basis",
            c2,
            "basis without 1 is p-independent over K_i",
        ));

        let (tried, bad) = sample_condition2(&mut rng, r, opts.samples);
        lc.push(CheckResult::new(
            "condition2_sampled",
            bad.is_none(),
            match bad {
                None => format!("{tried} independent subsets checked"),
                Some(s) => format!("p-dependent subset found after {tried} samples: {s}"),
            },
        ));
        levels.push(LevelReport {
            name: r.name.clone(),
            checks: lc,
            dims,
        });
    }
    Ok(ValidationReport::finish("tower", checks, levels))
}

/// Draws random subsets of R that are independent modulo K_i and tests
/// p-independence over K_i. Returns the number tested and a counterexample.
fn sample_condition2<R: Rng>(
    rng: &mut R,
    r: &RSpaceSpec,
    samples: usize,
) -> (usize, Option<String>) {
    let k = r.field();
    let d = r.dim();
    if d <= 1 {
        return (0, None);
    }
    let shape = Shape::TINY;
    let mut tried = 0;
    for _ in 0..samples {
        let size = rng.gen_range(1..d);
        let elems: Vec<RatFunc> = (0..size)
            .map(|_| {
                let coords: Vec<RatFunc> = (0..d)
                    .map(|_| sample::in_span(rng, r.over.span(), shape))
                    .collect();
                r.combine(&coords)
            })
            .collect();
        let mut ech = Echelon::new(k, d);
        let mut one = vec![k.zero(); d];
        let pos = r.basis.iter().position(RatFunc::is_one).expect("validated");
        one[pos] = k.one();
        ech.insert(one).expect("nonzero");
        let independent = elems.iter().all(|e| {
            let c = rspace_member(e, r).expect("sampled inside R");
            ech.insert(c).is_ok()
        });
        if !independent {
            continue;
        }
        tried += 1;
        if !is_p_independent(&elems, &r.over.gens) {
            return (tried, Some(format!("{} elements", elems.len())));
        }
    }
    (tried, None)
}

/// Fields recovered from a chain of additive groups.
#[derive(Clone, Debug)]
pub struct DerivedFields {
    pub fields: Vec<SubfieldSpec>,
    /// The bottom field of the chain stands for its own p-th root; elements
    /// x of this copy correspond to x^{1/p}.
    pub relabeled_root: SubfieldSpec,
    pub posthoc_ok: bool,
}

/// Stabilizer fields of R_0 <= R_1 <= ..., assuming R_{i-1}·R_i = R_i.
pub fn derive_fields(chain: &[RSpaceSpec]) -> Result<DerivedFields, TowerError> {
    if chain.is_empty() {
        return Err(TowerError::Hypothesis {
            level: 0,
            detail: "empty chain".into(),
        });
    }
    for (i, w) in chain.windows(2).enumerate() {
        for a in w[0].span.basis() {
            for b in w[1].span.basis() {
                if !w[1].contains(&(a * b)) {
                    return Err(TowerError::Hypothesis {
                        level: i + 1,
                        detail: format!("{}·{} not inside {}", w[0].name, w[1].name, w[1].name),
                    });
                }
            }
        }
    }
    let fields: Vec<SubfieldSpec> = chain.iter().map(stabilizer_field).collect();
    let mut ok = true;
    for (i, r) in chain.iter().enumerate() {
        ok &= fields[i].span().is_subspace_of(&r.span);
        ok &= fields[i]
            .span()
            .basis()
            .iter()
            .all(|f| r.span.stable_under(f));
        if let Some(next) = fields.get(i + 1) {
            ok &= r.span.is_subspace_of(next.span());
        }
    }
    Ok(DerivedFields {
        relabeled_root: fields[0].clone(),
        fields,
        posthoc_ok: ok,
    })
}

/// (K; L0, K0) with K^2 <= L0 <= K0 <= K.
#[derive(Clone, Debug)]
pub struct IndifferentSpec {
    pub l0: RSpaceSpec,
    pub k0: RSpaceSpec,
    pub weak: bool,
}

impl IndifferentSpec {
    pub fn new(l0: RSpaceSpec, k0: RSpaceSpec, weak: bool) -> Result<Self, TowerError> {
        let p = l0.field().p();
        if p != 2 {
            return Err(TowerError::NotChar2 { p });
        }
        Ok(IndifferentSpec { l0, k0, weak })
    }

    pub fn field(&self) -> RatField {
        self.l0.field()
    }

    /// K^2[L0], a field because the extension has exponent 1.
    pub fn l0_field(&self) -> SubfieldSpec {
        SubfieldSpec::new("K2[L0]", self.field(), self.l0.span.basis().to_vec())
    }

    /// Stabilizer of K0 in K.
    pub fn k0_stabilizer(&self) -> SubfieldSpec {
        stabilizer_field(&self.k0)
    }
}

pub fn validate_indifferent(spec: &IndifferentSpec) -> ValidationReport {
    let k = spec.field();
    let l0 = spec.l0.span();
    let k0 = spec.k0.span();
    let mut checks = Vec::new();
    checks.push(CheckResult::new(
        "K2_in_L0",
        spec.l0.contains(&k.one()),
        "1 in L0",
    ));
    checks.push(CheckResult::new(
        "L0_in_K0",
        l0.is_subspace_of(k0),
        "L0 <= K0",
    ));
    let squares_ok = k0
        .basis()
        .iter()
        .all(|e| l0.basis().iter().all(|l| l0.contains(&(&e.pow(2) * l))));
    checks.push(CheckResult::new(
        "L0_stable_under_K0_squares",
        squares_ok,
        "e^2 * l in L0",
    ));
    let f = spec.l0_field();
    let k0_ok = f.span().basis().iter().all(|x| k0.stable_under(x));
    checks.push(CheckResult::new(
        "K0_stable_under_field_of_L0",
        k0_ok,
        format!("[K2[L0]:K2] = {}", f.degree()),
    ));
    let gen = KpSpan::field_closure(k, k0.basis()).dim() == k.pn();
    checks.push(CheckResult::new(
        "K0_generates_K",
        gen || spec.weak,
        if gen {
            "K2[K0] = K".to_string()
        } else {
            "K2[K0] < K (allowed: weak)".to_string()
        },
    ));
    let mut dims = BTreeMap::new();
    dims.insert("dim_L0_over_K2".to_string(), l0.dim());
    dims.insert("dim_K0_over_K2".to_string(), k0.dim());
    dims.insert("deg_field_of_L0_over_K2".to_string(), f.degree());
    dims.insert("deg_K_over_K2".to_string(), k.pn());
    let level = LevelReport {
        name: "indifferent".into(),
        checks: Vec::new(),
        dims,
    };
    ValidationReport::finish("indifferent", checks, vec![level])
}
