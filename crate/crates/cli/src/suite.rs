//! Seeded property suites over the shipped data, with a JSON report.

use std::path::{Path, PathBuf};
use std::thread;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use exotic_core::funfield::{
    is_p_independent, lambda, p_monomial, Notation, PMonomialIndex, RatFunc,
};
use exotic_core::rank1::{self, Membership, TimmesfeldData};
use exotic_core::reconstruct::{c2_recover, g2_recover, verify_recovery, Recovered, UOracle};
use exotic_core::sample::{self, rng, Shape};
use exotic_core::sp4::{self, Mat4, Sp4Context, Sp4Membership};
use exotic_core::tower::{validate_indifferent, validate_tower, Config, TowerOptions};
use exotic_core::unipotent::{self, RootDatum2, TorusElement2};

use crate::context::{CliError, Ctx};
use crate::Output;

/// Suite configuration; data paths are relative to the suite file.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteConfig {
    #[serde(default = "one")]
    seed: u64,
    #[serde(default = "twenty")]
    samples: usize,
    #[serde(default = "two")]
    bound: usize,
    tower: Option<PathBuf>,
    indifferent: Option<PathBuf>,
    timmesfeld: Option<PathBuf>,
    g2: Option<PathBuf>,
    sp4: Option<PathBuf>,
}

fn one() -> u64 {
    1
}
fn twenty() -> usize {
    20
}
fn two() -> usize {
    2
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
enum Status {
    Pass,
    Fail,
    Unknown,
}

#[derive(Debug, Serialize)]
struct Check {
    name: String,
    status: Status,
    detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    counterexample: Option<Value>,
}

fn pass(name: &str, detail: impl Into<String>) -> Check {
    Check {
        name: name.into(),
        status: Status::Pass,
        detail: detail.into(),
        counterexample: None,
    }
}

fn fail(name: &str, detail: impl Into<String>, cx: Value) -> Check {
    Check {
        name: name.into(),
        status: Status::Fail,
        detail: detail.into(),
        counterexample: Some(cx),
    }
}

/// Loaded data sets, each with the path it came from.
struct Data {
    seed: u64,
    samples: usize,
    bound: usize,
    tower: Option<(PathBuf, Config)>,
    indifferent: Option<(PathBuf, Config)>,
    timmesfeld: Option<(PathBuf, Ctx)>,
    g2: Option<(PathBuf, Ctx)>,
    sp4: Option<(PathBuf, Ctx)>,
}

fn load(base: &Path, p: &Option<PathBuf>) -> Result<Option<(PathBuf, Ctx)>, CliError> {
    match p {
        None => Ok(None),
        Some(rel) => {
            let path = base.join(rel);
            Ok(Some((path.clone(), Ctx::from_config(&path)?)))
        }
    }
}

fn config_of(x: Option<(PathBuf, Ctx)>) -> Option<(PathBuf, Config)> {
    x.map(|(p, c)| (p, c.config.expect("loaded from a file")))
}

pub fn run_suite(
    path: &Path,
    seed: Option<u64>,
    samples: Option<usize>,
    bound: Option<usize>,
) -> Result<Output, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Failed(format!("cannot read {}: {e}", path.display())))?;
    let cfg: SuiteConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("malformed suite config: {e}")))?;
    let base = path.parent().unwrap_or(Path::new("."));
    let data = Data {
        seed: seed.unwrap_or(cfg.seed),
        samples: samples.unwrap_or(cfg.samples),
        bound: bound.unwrap_or(cfg.bound),
        tower: config_of(load(base, &cfg.tower)?),
        indifferent: config_of(load(base, &cfg.indifferent)?),
        timmesfeld: load(base, &cfg.timmesfeld)?,
        g2: load(base, &cfg.g2)?,
        sp4: load(base, &cfg.sp4)?,
    };

    let jobs: Vec<Box<dyn Fn(&Data) -> Vec<Check> + Send + Sync>> = vec![
        Box::new(field_checks),
        Box::new(tower_checks),
        Box::new(sl2_checks),
        Box::new(unipotent_checks),
        Box::new(sp4_checks),
        Box::new(reconstruct_checks),
    ];
    let mut checks: Vec<Check> = thread::scope(|s| {
        let handles: Vec<_> = jobs.iter().map(|j| s.spawn(|| j(&data))).collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("suite job panicked"))
            .collect()
    });
    checks.sort_by(|a, b| a.name.cmp(&b.name));

    let count = |st| checks.iter().filter(|c| c.status == st).count();
    let (np, nf, nu) = (
        count(Status::Pass),
        count(Status::Fail),
        count(Status::Unknown),
    );
    let report = json!({
        "seed": data.seed,
        "samples": data.samples,
        "bound": data.bound,
        "summary": { "pass": np, "fail": nf, "unknown": nu },
        "checks": checks,
    });
    Ok(Output {
        json: report,
        failed: nf > 0,
        warning: (nf == 0 && nu > 0).then(|| format!("{nu} checks ended with status unknown")),
    })
}

fn show_all(nt: &Notation, xs: &[&RatFunc]) -> Value {
    json!(xs.iter().map(|x| nt.render(x)).collect::<Vec<_>>())
}

fn field_checks(d: &Data) -> Vec<Check> {
    let mut out = Vec::new();
    let nts: Vec<Notation> = [
        d.tower.as_ref().map(|(_, c)| c.notation.clone()),
        d.g2.as_ref().map(|(_, c)| c.nt.clone()),
    ]
    .into_iter()
    .flatten()
    .collect();
    for (j, nt) in nts.iter().enumerate() {
        let k = nt.field();
        let tag = format!("p{}", k.p());
        let mut g = rng(d.seed ^ 0x11 ^ j as u64);
        let name = format!("field.{tag}.axioms");
        let mut bad = None;
        for _ in 0..d.samples {
            let (a, b, c) = (
                sample::elem(&mut g, k, Shape::default()),
                sample::elem(&mut g, k, Shape::default()),
                sample::elem(&mut g, k, Shape::default()),
            );
            let dist = &(&a + &b) * &c == &(&a * &c) + &(&b * &c);
            let inv = a.is_zero() || (&a * &a.inv().expect("nonzero")).is_one();
            let round = nt.parse(&nt.render(&a)).ok().as_ref() == Some(&a);
            if !(dist && inv && round) {
                bad = Some(show_all(nt, &[&a, &b, &c]));
                break;
            }
        }
        out.push(match bad {
            None => pass(&name, format!("{} triples", d.samples)),
            Some(cx) => fail(&name, "distributivity, inverse or parse round trip", cx),
        });

        let name = format!("lambda.{tag}.identity");
        let mut bad = None;
        for _ in 0..d.samples {
            let a = sample::nonzero(&mut g, k, Shape::TINY);
            if !is_p_independent(std::slice::from_ref(&a), &[]) {
                continue;
            }
            let p = k.p();
            let mons: Vec<RatFunc> = (0..p as usize)
                .map(|i| {
                    p_monomial(PMonomialIndex { i, n: 1 }, std::slice::from_ref(&a))
                        .expect("arity 1")
                })
                .collect();
            let cs: Vec<RatFunc> = mons
                .iter()
                .map(|_| sample::elem(&mut g, k, Shape::TINY))
                .collect();
            let b = cs
                .iter()
                .zip(&mons)
                .fold(k.zero(), |s, (c, m)| &s + &(&c.pow(p) * m));
            let l = lambda(std::slice::from_ref(&a), &b);
            if !l.defined || l.coords != cs {
                bad = Some(show_all(nt, &[&a, &b]));
                break;
            }
        }
        out.push(match bad {
            None => pass(&name, "λ recovers the coefficients of b"),
            Some(cx) => fail(&name, "λ disagrees with the construction of b", cx),
        });
    }
    out
}

fn tower_checks(d: &Data) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some((path, c)) = &d.tower {
        let opts = TowerOptions {
            samples: d.samples,
            seed: d.seed,
        };
        out.push(match validate_tower(&c.tower, opts) {
            Ok(rep) if rep.accepted => {
                pass("tower.validate", format!("{} levels", rep.levels.len()))
            }
            Ok(rep) => fail(
                "tower.validate",
                "tower rejected",
                json!({ "config": path, "failed_checks": rep.failed_checks() }),
            ),
            Err(e) => fail("tower.validate", e.to_string(), json!({ "config": path })),
        });
    }
    if let Some((path, c)) = &d.indifferent {
        out.push(match &c.indifferent {
            None => fail(
                "indifferent.validate",
                "no indifferent section",
                json!({ "config": path }),
            ),
            Some(spec) => {
                let rep = validate_indifferent(spec);
                if rep.accepted {
                    pass("indifferent.validate", "accepted")
                } else {
                    fail(
                        "indifferent.validate",
                        "indifferent set rejected",
                        json!({ "config": path, "failed_checks": rep.failed_checks() }),
                    )
                }
            }
        });
    }
    out
}

fn mat2_str(nt: &Notation, m: &rank1::Mat2) -> String {
    [&m.a, &m.b, &m.c, &m.d].map(|x| nt.render(x)).join(";")
}

fn mat4_str(nt: &Notation, m: &Mat4) -> String {
    m.entries()
        .map(|x| nt.render(x))
        .collect::<Vec<_>>()
        .join(";")
}

fn sl2_checks(d: &Data) -> Vec<Check> {
    let Some((path, ctx)) = &d.timmesfeld else {
        return Vec::new();
    };
    let data: TimmesfeldData = match ctx.timmesfeld() {
        Ok(x) => x,
        Err(e) => return vec![fail("sl2.data", e.message(), json!({ "config": path }))],
    };
    let (nt, k) = (&ctx.nt, ctx.field());
    let mut g = rng(d.seed ^ 0x22);
    let mut out = Vec::new();

    let mut bad = None;
    for _ in 0..d.samples {
        let m = rank1::sample_sl2(&mut g, k, Shape::TINY);
        if rank1::bruhat2(&m).to_matrix() != m {
            bad = Some(json!({ "matrix": mat2_str(nt, &m) }));
            break;
        }
    }
    out.push(match bad {
        None => pass("sl2.bruhat_round_trip", format!("{} matrices", d.samples)),
        Some(cx) => fail(
            "sl2.bruhat_round_trip",
            "decomposition does not reassemble",
            cx,
        ),
    });

    let (mut unknown, mut bad) = (0, None);
    for _ in 0..d.samples {
        let m = rank1::sample_word(&mut g, &data, 4, Shape::TINY);
        match rank1::membership_sl2l(&m, &data, d.bound) {
            Membership::Yes(w) if w.verify(rank1::bruhat2(&m).tau(), &data) => {}
            Membership::Unknown => unknown += 1,
            other => {
                bad = Some((format!("{other:?}"), mat2_str(nt, &m)));
                break;
            }
        }
    }
    out.push(match (bad, unknown) {
        (Some((v, m)), _) => fail(
            "sl2.membership",
            format!("in-domain word gave {v}"),
            json!({ "matrix": m, "config": path, "replay": "sl2 member" }),
        ),
        (None, 0) => pass(
            "sl2.membership",
            format!("{} words with verified witnesses", d.samples),
        ),
        (None, u) => Check {
            name: "sl2.membership".into(),
            status: Status::Unknown,
            detail: format!("{u} of {} torus searches undecided", d.samples),
            counterexample: None,
        },
    });

    let mut bad = None;
    for _ in 0..d.samples {
        let s = sample::nonzero_in_span(&mut g, data.l.span(), Shape::TINY);
        let t = sample::nonzero(&mut g, k, Shape::TINY);
        if t.pow(2).is_one() {
            continue;
        }
        let ok = rank1::perfectness_witness(&s, &t).is_ok_and(|sp| {
            data.in_l(&sp)
                && rank1::Mat2::commutator(&rank1::h(&t).expect("t nonzero"), &rank1::a(&sp))
                    == rank1::a(&s)
        });
        if !ok {
            bad = Some(show_all(nt, &[&s, &t]));
            break;
        }
    }
    out.push(match bad {
        None => pass("sl2.perfectness", "[h(t), a(s')] = a(s)"),
        Some(cx) => fail("sl2.perfectness", "witness missing or wrong", cx),
    });

    if data.codim1.is_some() {
        let mut bad = None;
        for _ in 0..d.samples {
            let x = sample::nonzero_in_span(&mut g, data.field_of_l().span(), Shape::TINY);
            let ok = rank1::factor_codim1(&x, &data)
                .is_ok_and(|(a, b)| data.in_l(&a) && data.in_l(&b) && &a * &b == x);
            if !ok {
                bad = Some(show_all(nt, &[&x]));
                break;
            }
        }
        out.push(match bad {
            None => pass("sl2.codim1_factor", "every sample factors in L*·L*"),
            Some(cx) => fail("sl2.codim1_factor", "no factorization", cx),
        });
    }
    out
}

fn datum_checks(d: &Data, tag: &str, nt: &Notation, datum: &RootDatum2, salt: u64) -> Vec<Check> {
    let mut g = rng(d.seed ^ salt);
    let k = datum.field;
    let mut out = Vec::new();
    let name = format!("u.{tag}.associativity");
    let mut bad = None;
    for _ in 0..d.samples {
        let xs: Vec<_> = (0..3)
            .map(|_| unipotent::sample::element(&mut g, datum, Shape::TINY))
            .collect();
        let ok = (|| {
            let l = datum.mul(&datum.mul(&xs[0], &xs[1])?, &xs[2])?;
            let r = datum.mul(&xs[0], &datum.mul(&xs[1], &xs[2])?)?;
            datum.check_domain(&l)?;
            Ok::<_, unipotent::UnipotentError>(l == r)
        })();
        if !matches!(ok, Ok(true)) {
            bad = Some(json!(xs
                .iter()
                .map(|x| datum.render(nt, x))
                .collect::<Vec<_>>()));
            break;
        }
    }
    out.push(match bad {
        None => pass(&name, format!("{} triples", d.samples)),
        Some(cx) => fail(&name, "(xy)z ≠ x(yz) or domain left", cx),
    });

    let name = format!("u.{tag}.torus_automorphism");
    let mut bad = None;
    for _ in 0..d.samples {
        let h = TorusElement2::new(
            sample::nonzero(&mut g, k, Shape::TINY),
            sample::nonzero(&mut g, k, Shape::TINY),
        )
        .expect("nonzero");
        let x = unipotent::sample::element(&mut g, datum, Shape::TINY);
        let y = unipotent::sample::element(&mut g, datum, Shape::TINY);
        let ok = (|| {
            let lhs = datum.torus_act(&h, &datum.mul(&x, &y)?)?;
            let w = [
                datum.word_of(&datum.torus_act(&h, &x)?),
                datum.word_of(&datum.torus_act(&h, &y)?),
            ]
            .concat();
            Ok::<_, unipotent::UnipotentError>(lhs == datum.collect(w)?)
        })();
        if !matches!(ok, Ok(true)) {
            bad = Some(json!({
                "h": format!("{};{}", nt.render(&h.s_alpha), nt.render(&h.s_beta)),
                "x": datum.render(nt, &x),
                "y": datum.render(nt, &y),
            }));
            break;
        }
    }
    out.push(match bad {
        None => pass(&name, format!("{} samples", d.samples)),
        Some(cx) => fail(&name, "h(xy) ≠ h(x)h(y)", cx),
    });
    out
}

fn unipotent_checks(d: &Data) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some((path, ctx)) = &d.g2 {
        match RootDatum2::g2(&ctx.g2_field()) {
            Ok(datum) => out.extend(datum_checks(d, "g2", &ctx.nt, &datum, 0x33)),
            Err(e) => out.push(fail("u.g2.data", e.to_string(), json!({ "config": path }))),
        }
    }
    if let Some((path, c)) = &d.indifferent {
        let datum = c.indifferent.as_ref().map(RootDatum2::c2);
        match datum {
            Some(Ok(datum)) => out.extend(datum_checks(d, "c2", &c.notation, &datum, 0x44)),
            _ => out.push(fail(
                "u.c2.data",
                "no usable C2 datum",
                json!({ "config": path }),
            )),
        }
    }
    out
}

fn sp4_checks(d: &Data) -> Vec<Check> {
    let Some((path, ctx)) = &d.sp4 else {
        return Vec::new();
    };
    let sctx = match ctx
        .indifferent()
        .and_then(|s| Ok(Sp4Context::new(s, ctx.k0_codim1())?))
    {
        Ok(c) => c,
        Err(e) => return vec![fail("sp4.data", e.message(), json!({ "config": path }))],
    };
    let (nt, k) = (&ctx.nt, ctx.field());
    let mut g = rng(d.seed ^ 0x55);
    let mut out = Vec::new();
    let mut bad = None;
    for _ in 0..d.samples {
        let m = sp4::sample_word(&mut g, &sctx, 4, Shape::TINY);
        if sp4::sp4_bruhat(&m).to_matrix(k) != m {
            bad = Some(json!({ "matrix": mat4_str(nt, &m) }));
            break;
        }
    }
    out.push(match bad {
        None => pass("sp4.bruhat_round_trip", format!("{} words", d.samples)),
        Some(cx) => fail(
            "sp4.bruhat_round_trip",
            "decomposition does not reassemble",
            cx,
        ),
    });

    let (mut unknown, mut bad) = (0, None);
    for _ in 0..d.samples {
        let m = sp4::sample_word(&mut g, &sctx, 8, Shape::TINY);
        match sp4::membership_psp4(&m, &sctx, d.bound) {
            Sp4Membership::Yes { .. } => {}
            Sp4Membership::Unknown => unknown += 1,
            Sp4Membership::No(r) => {
                bad = Some((r, mat4_str(nt, &m)));
                break;
            }
        }
    }
    out.push(match (bad, unknown) {
        (Some((r, m)), _) => fail(
            "sp4.membership",
            format!("in-domain word rejected: {r}"),
            json!({ "matrix": m, "config": path, "replay": "sp4 member" }),
        ),
        (None, 0) => pass("sp4.membership", format!("{} words accepted", d.samples)),
        (None, u) => Check {
            name: "sp4.membership".into(),
            status: Status::Unknown,
            detail: format!("{u} of {} torus searches undecided", d.samples),
            counterexample: None,
        },
    });
    out
}

fn recovery_check(
    name: &str,
    o: &UOracle,
    r: Result<Recovered<'_, UOracle>, String>,
    d: &Data,
) -> Check {
    match r {
        Err(e) => fail(name, e, json!({})),
        Ok(r) => {
            let rep = verify_recovery(&r, o, d.samples, d.seed);
            if rep.passed() {
                pass(name, format!("{} checks", rep.checks))
            } else {
                fail(
                    name,
                    format!("{} mismatches", rep.mismatches.len()),
                    serde_json::to_value(&rep.mismatches[0]).expect("serializable"),
                )
            }
        }
    }
}

fn reconstruct_checks(d: &Data) -> Vec<Check> {
    let mut out = Vec::new();
    if let Some((_, ctx)) = &d.g2 {
        if let Ok(datum) = RootDatum2::g2(&ctx.g2_field()) {
            let o = UOracle::new(datum, ctx.nt.clone());
            let r = g2_recover(&o).map(Recovered::G2).map_err(|e| e.to_string());
            out.push(recovery_check("reconstruct.g2", &o, r, d));
        }
    }
    if let Some((_, c)) = &d.indifferent {
        if let Some(Ok(datum)) = c.indifferent.as_ref().map(RootDatum2::c2) {
            let o = UOracle::new(datum, c.notation.clone());
            let r = c2_recover(&o).map(Recovered::C2).map_err(|e| e.to_string());
            out.push(recovery_check("reconstruct.c2", &o, r, d));
        }
    }
    out
}
