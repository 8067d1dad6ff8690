//! One handler per subcommand.

use serde_json::{json, Map, Value};

use exotic_core::funfield::{self, PMonomialIndex};
use exotic_core::rank1::{self, Bruhat2, Membership, TorusWitness};
use exotic_core::reconstruct::{
    c2_recover, g2_recover, verify_recovery, CorruptedOracle, GroundTruth, Recovered, UOracle,
};
use exotic_core::sp4::{self, Bruhat4, Sp4Context, Sp4Membership, Sp4Root};
use exotic_core::tower::{validate_indifferent, validate_tower, TowerOptions};
use exotic_core::unipotent::{RootDatum2, TorusElement2, UElement};

use crate::context::{CliError, Ctx, FieldArgs};
use crate::{KindArg, Output};

pub fn field_eval(fa: &FieldArgs, expr: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let x = ctx.parse(expr)?;
    Ok(Output::ok(json!({ "value": ctx.show(&x) })))
}

pub fn lambda(fa: &FieldArgs, a: &[String], b: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let a = a
        .iter()
        .map(|s| ctx.parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    let b = ctx.parse(b)?;
    let l = funfield::lambda(&a, &b);
    let n = a.len();
    let coords: Vec<Value> = l
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let m = funfield::p_monomial(PMonomialIndex { i, n }, &a)
                .map(|m| ctx.show(&m))
                .unwrap_or_default();
            json!({ "monomial": m, "lambda": ctx.show(c) })
        })
        .collect();
    Ok(Output::ok(
        json!({ "defined": l.defined, "coords": coords }),
    ))
}

pub fn tower_validate(fa: &FieldArgs, samples: usize, seed: u64) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let c = ctx.config.as_ref().expect("config given");
    let rep = validate_tower(&c.tower, TowerOptions { samples, seed })?;
    let accepted = rep.accepted;
    Ok(Output::check(
        serde_json::to_value(rep).expect("serializable"),
        accepted,
    ))
}

pub fn indifferent_validate(fa: &FieldArgs) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let spec = ctx
        .config
        .as_ref()
        .and_then(|c| c.indifferent.clone())
        .ok_or_else(|| CliError::Usage("config has no 'indifferent' section".into()))?;
    let rep = validate_indifferent(&spec);
    let accepted = rep.accepted;
    Ok(Output::check(
        serde_json::to_value(rep).expect("serializable"),
        accepted,
    ))
}

fn bruhat2_json(ctx: &Ctx, b: &Bruhat2) -> Value {
    match b {
        Bruhat2::Upper { tau, s } => json!({
            "form": "Upper",
            "tau": ctx.show(tau),
            "s": ctx.show(s),
            "display": format!("Upper{{{},{}}}", ctx.show(tau), ctx.show(s)),
        }),
        Bruhat2::Cell { tau, s1, s2 } => json!({
            "form": "Cell",
            "tau": ctx.show(tau),
            "s1": ctx.show(s1),
            "s2": ctx.show(s2),
            "display": format!("Cell{{{},{},{}}}", ctx.show(tau), ctx.show(s1), ctx.show(s2)),
        }),
    }
}

pub fn witness_json(ctx: &Ctx, w: &TorusWitness) -> Value {
    Value::Array(
        w.factors
            .iter()
            .map(|(f, e)| json!({ "factor": ctx.show(f), "exponent": e }))
            .collect(),
    )
}

fn membership_output(ctx: &Ctx, m: Membership, extra: Value) -> Output {
    let mut obj = match extra {
        Value::Object(o) => o,
        _ => Map::new(),
    };
    match m {
        Membership::Yes(w) => {
            obj.insert("verdict".into(), json!("yes"));
            obj.insert("witness".into(), witness_json(ctx, &w));
            Output::ok(Value::Object(obj))
        }
        Membership::No(reason) => {
            obj.insert("verdict".into(), json!("no"));
            obj.insert("reason".into(), json!(reason));
            Output::check(Value::Object(obj), false)
        }
        Membership::Unknown => {
            obj.insert("verdict".into(), json!("unknown"));
            Output {
                json: Value::Object(obj),
                failed: false,
                warning: Some("torus search exhausted without a decision".into()),
            }
        }
    }
}

pub fn sl2_bruhat(fa: &FieldArgs, matrix: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let g = ctx.mat2(matrix)?;
    Ok(Output::ok(bruhat2_json(&ctx, &rank1::bruhat2(&g))))
}

pub fn sl2_member(fa: &FieldArgs, matrix: &str, bound: usize) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let data = ctx.timmesfeld()?;
    let g = ctx.mat2(matrix)?;
    let br = rank1::bruhat2(&g);
    let m = rank1::membership_sl2l(&g, &data, bound);
    Ok(membership_output(
        &ctx,
        m,
        json!({ "bruhat": bruhat2_json(&ctx, &br) }),
    ))
}

pub fn sl2_witness(fa: &FieldArgs, tau: &str, bound: usize) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let data = ctx.timmesfeld()?;
    let tau = ctx.parse(tau)?;
    let m = rank1::torus_membership(&tau, &data, bound);
    Ok(membership_output(&ctx, m, json!({ "tau": ctx.show(&tau) })))
}

pub fn sl2_recover(fa: &FieldArgs, torus: &[String]) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let data = ctx.timmesfeld()?;
    let gens = torus
        .iter()
        .map(|s| ctx.parse(s))
        .collect::<Result<Vec<_>, _>>()?;
    let st = rank1::extract_structure(&data, &gens)?;
    let show_all = |v: &[funfield::RatFunc]| v.iter().map(|x| ctx.show(x)).collect::<Vec<_>>();
    Ok(Output::ok(json!({
        "L_basis": show_all(st.l.basis()),
        "tbar_gens": show_all(&st.tbar_gens),
    })))
}

fn datum(ctx: &Ctx, kind: KindArg) -> Result<RootDatum2, CliError> {
    Ok(match kind {
        KindArg::G2 => RootDatum2::g2(&ctx.g2_field())?,
        KindArg::C2 => RootDatum2::c2(&ctx.indifferent()?)?,
    })
}

fn u_elem(ctx: &Ctx, d: &RootDatum2, s: &str) -> Result<UElement, CliError> {
    Ok(d.element_from_word(d.parse_word(&ctx.nt, s)?)?)
}

fn u_json(ctx: &Ctx, d: &RootDatum2, x: &UElement) -> Value {
    json!({
        "normal_form": d.render(&ctx.nt, x),
        "coords": x.coords.iter().map(|c| ctx.show(c)).collect::<Vec<_>>(),
    })
}

pub fn u_binary(
    fa: &FieldArgs,
    kind: KindArg,
    x: &str,
    y: &str,
    comm: bool,
) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let d = datum(&ctx, kind)?;
    let (x, y) = (u_elem(&ctx, &d, x)?, u_elem(&ctx, &d, y)?);
    let r = if comm {
        d.commutator(&x, &y)?
    } else {
        d.mul(&x, &y)?
    };
    Ok(Output::ok(u_json(&ctx, &d, &r)))
}

pub fn u_center(fa: &FieldArgs, kind: KindArg, x: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let d = datum(&ctx, kind)?;
    let x = u_elem(&ctx, &d, x)?;
    Ok(Output::ok(json!({
        "element": d.render(&ctx.nt, &x),
        "center": d.center_member(&x)?,
        "second_center": d.z2_member(&x)?,
    })))
}

pub fn u_act(fa: &FieldArgs, kind: KindArg, h: &str, x: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let d = datum(&ctx, kind)?;
    let hv = ctx.parse_list(h, 2)?;
    let h = TorusElement2::new(hv[0].clone(), hv[1].clone())?;
    let x = u_elem(&ctx, &d, x)?;
    let mut out = u_json(&ctx, &d, &d.torus_act(&h, &x)?);
    out["normalizes"] = json!(d.torus_normalizes(&h)?);
    Ok(Output::ok(out))
}

fn slots_json(ctx: &Ctx, u: &UElement) -> Value {
    let mut m = Map::new();
    for (i, c) in u.coords.iter().enumerate() {
        m.insert(Sp4Root::pos(i as u8 + 1).to_string(), json!(ctx.show(c)));
    }
    Value::Object(m)
}

fn bruhat4_json(ctx: &Ctx, b: &Bruhat4) -> Value {
    json!({
        "u1": slots_json(ctx, &b.u1),
        "w": b.w.to_string(),
        "tau": { "s_alpha": ctx.show(&b.tau.s_alpha), "s_beta": ctx.show(&b.tau.s_beta) },
        "u2": slots_json(ctx, &b.u2),
    })
}

pub fn sp4_bruhat(fa: &FieldArgs, matrix: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let g = ctx.mat4(matrix)?;
    Ok(Output::ok(bruhat4_json(&ctx, &sp4::sp4_bruhat(&g))))
}

pub fn sp4_member(fa: &FieldArgs, matrix: &str, bound: usize) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let sctx = Sp4Context::new(ctx.indifferent()?, ctx.k0_codim1())?;
    let g = ctx.mat4(matrix)?;
    let b = bruhat4_json(&ctx, &sp4::sp4_bruhat(&g));
    Ok(match sp4::membership_psp4(&g, &sctx, bound) {
        Sp4Membership::Yes { alpha, beta } => Output::ok(json!({
            "verdict": "yes",
            "bruhat": b,
            "witness": { "s_alpha": witness_json(&ctx, &alpha), "s_beta": witness_json(&ctx, &beta) },
        })),
        Sp4Membership::No(reason) => Output::check(
            json!({ "verdict": "no", "bruhat": b, "reason": reason }),
            false,
        ),
        Sp4Membership::Unknown => Output {
            json: json!({ "verdict": "unknown", "bruhat": b }),
            failed: false,
            warning: Some("torus search exhausted without a decision".into()),
        },
    })
}

pub fn sp4_torus_check(fa: &FieldArgs, s_alpha: &str, s_beta: &str) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let spec = ctx.indifferent()?;
    let (a, b) = (ctx.parse(s_alpha)?, ctx.parse(s_beta)?);
    let h = TorusElement2::new(a.clone(), b.clone())?;
    let ok = sp4::torus_normalizer_check(&a, &b, &spec);
    let mut scal = Map::new();
    for slot in 1..=4u8 {
        scal.insert(
            Sp4Root::pos(slot).to_string(),
            json!(ctx.show(&sp4::slot_scaling(&h, slot))),
        );
    }
    Ok(Output::check(
        json!({ "normalizes": ok, "scalings": scal }),
        ok,
    ))
}

fn verify<O: GroundTruth>(
    o: &O,
    kind: KindArg,
    samples: usize,
    seed: u64,
) -> Result<Output, CliError> {
    let fail = |e: exotic_core::reconstruct::ReconError| CliError::Failed(e.to_string());
    let r = match kind {
        KindArg::G2 => Recovered::G2(g2_recover(o).map_err(fail)?),
        KindArg::C2 => Recovered::C2(c2_recover(o).map_err(fail)?),
    };
    let rep = verify_recovery(&r, o, samples, seed);
    let passed = rep.passed();
    Ok(Output::check(
        serde_json::to_value(rep).expect("serializable"),
        passed,
    ))
}

pub fn reconstruct(
    fa: &FieldArgs,
    kind: KindArg,
    samples: usize,
    seed: u64,
    corrupt: bool,
) -> Result<Output, CliError> {
    let ctx = Ctx::resolve(fa)?;
    let o = UOracle::new(datum(&ctx, kind)?, ctx.nt.clone());
    if corrupt {
        verify(&CorruptedOracle(o), kind, samples, seed)
    } else {
        verify(&o, kind, samples, seed)
    }
}
