use super::*;
use crate::funfield::RatField;
use crate::sample::rng;
use crate::sp4::Sp4Context;
use crate::tower::{rspace_member, IndifferentSpec, RSpaceSpec, SubfieldSpec};
use crate::unipotent;

fn g2_oracle() -> UOracle {
    // K = F_3(s, v), k = K^3[s]
    let f = RatField::new(3, 2).unwrap();
    let d = RootDatum2::g2(&SubfieldSpec::new("k", f, vec![f.var(0)])).unwrap();
    UOracle::new(d, Notation::new(f, vec!["s".into(), "v".into()]).unwrap())
}

fn c2_parts() -> (IndifferentSpec, UOracle) {
    // K = F_2(t, u), L0 = span_{K^2}{1, t}, K0 = K^2(t) ⊕ u·K^2(t)
    let f = RatField::new(2, 2).unwrap();
    let (t, u) = (f.var(0), f.var(1));
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one(), t.clone()]).unwrap();
    let k0 = RSpaceSpec::new(
        "K0",
        SubfieldSpec::new("K2(t)", f, vec![t]),
        vec![f.one(), u],
    )
    .unwrap();
    let spec = IndifferentSpec::new(l0, k0, true).unwrap();
    let o = UOracle::new(RootDatum2::c2(&spec).unwrap(), Notation::standard(f));
    (spec, o)
}

fn c2_proper() -> (IndifferentSpec, UOracle) {
    // F_2(t, u, v), L0 = span_{K^2}{1, t}, K0 = span_{K^2[t]}{1, u, v}
    let f = RatField::new(2, 3).unwrap();
    let (t, u, v) = (f.var(0), f.var(1), f.var(2));
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one(), t.clone()]).unwrap();
    let k0 = RSpaceSpec::new(
        "K0",
        SubfieldSpec::new("K2[t]", f, vec![t]),
        vec![f.one(), u, v],
    )
    .unwrap();
    let spec = IndifferentSpec::new(l0, k0, true).unwrap();
    let o = UOracle::new(RootDatum2::c2(&spec).unwrap(), Notation::standard(f));
    (spec, o)
}

#[test]
fn g2_examples() {
    let o = g2_oracle();
    let r = g2_recover(&o).unwrap();
    let f = o.d.field;
    let (s, v) = (f.var(0), f.var(1));
    assert_eq!(r.one(), &o.embed(3, &f.one()));
    assert_eq!(r.mul(r.one(), r.one()).unwrap(), *r.one());
    let got = r.mul(&o.embed(3, &s), &o.embed(3, &v.pow(3))).unwrap();
    assert_eq!(got, o.embed(3, &(&s * &v.pow(3))));
    let mut g = rng(1);
    for _ in 0..20 {
        let a = sample::elem(&mut g, f, Shape::TINY);
        assert_eq!(r.xi(&o.embed(3, &a)).unwrap(), o.embed(6, &a.pow(3)));
    }
}

#[test]
fn g2_verification_is_clean() {
    let o = g2_oracle();
    let r = Recovered::G2(g2_recover(&o).unwrap());
    let rep = verify_recovery(&r, &o, 100, 7);
    assert!(rep.passed(), "{:?}", rep.mismatches);
    assert_eq!(rep.checks, 700);
}

#[test]
fn c2_examples() {
    let (spec, o) = c2_parts();
    let r = c2_recover(&o).unwrap();
    let f = o.d.field;
    let (t, u) = (f.var(0), f.var(1));
    let b = &t + &u;
    assert_eq!(r.star(r.one(), &o.embed(3, &b)).unwrap(), o.embed(3, &b));
    assert_eq!(
        r.star(&o.embed(3, &u), &o.embed(3, &t)).unwrap(),
        o.embed(3, &(&u.pow(2) * &t))
    );

    let mut g = rng(2);
    let mut hits = 0;
    for n in 0..100 {
        let span = if n % 2 == 0 {
            spec.l0.span()
        } else {
            spec.k0.span()
        };
        let c = sample::in_span(&mut g, span, Shape::TINY);
        let truth = rspace_member(&c, &spec.l0).is_some();
        hits += truth as usize;
        assert_eq!(r.in_l0(&o.embed(3, &c)), truth, "{c:?}");
    }
    assert!(hits >= 50 && hits < 100);
}

#[test]
fn c2_verification_is_clean() {
    for (_, o) in [c2_parts(), c2_proper()] {
        let r = Recovered::C2(c2_recover(&o).unwrap());
        let rep = verify_recovery(&r, &o, 100, 9);
        assert!(rep.passed(), "{:?}", rep.mismatches);
    }
}

#[test]
fn corrupted_oracles_are_caught() {
    let bad = CorruptedOracle(g2_oracle());
    let r = Recovered::G2(g2_recover(&bad).unwrap());
    assert!(!verify_recovery(&r, &bad, 20, 7).passed());

    let bad = CorruptedOracle(c2_parts().1);
    let r = Recovered::C2(c2_recover(&bad).unwrap());
    assert!(!verify_recovery(&r, &bad, 20, 9).passed());
}

#[test]
fn wrong_kind_is_rejected() {
    let (_, o) = c2_parts();
    assert!(matches!(
        g2_recover(&o),
        Err(ReconError::WrongKind {
            want: Kind::G2,
            got: Kind::C2
        })
    ));
    assert!(matches!(
        c2_recover(&g2_oracle()),
        Err(ReconError::WrongKind { .. })
    ));
}

#[test]
fn recovery_is_deterministic() {
    let o = g2_oracle();
    let a = verify_recovery(&Recovered::G2(g2_recover(&o).unwrap()), &o, 10, 3);
    let b = verify_recovery(&Recovered::G2(g2_recover(&o).unwrap()), &o, 10, 3);
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );
}

#[test]
fn commutation_maps_are_bilinear() {
    let o = g2_oracle();
    let d = &o.d;
    let mut g = rng(4);
    for _ in 0..10 {
        let x = unipotent::sample::element(&mut g, d, Shape::TINY);
        let x2 = unipotent::sample::element(&mut g, d, Shape::TINY);
        let y = unipotent::sample::element(&mut g, d, Shape::TINY);
        let lhs = gamma(&o, &o.mul(&x, &x2), &y);
        let rhs = CosetElem {
            rep: o.mul(&gamma(&o, &x, &y).rep, &gamma(&o, &x2, &y).rep),
            modulus: Modulus::Z,
        };
        assert!(lhs.eq(&rhs, &o));
        // γ' : U × Z_2 → Z is bilinear on the nose.
        let mut v = unipotent::sample::element(&mut g, d, Shape::TINY);
        v.coords[0] = d.field.zero();
        v.coords[5] = d.field.zero();
        let c = |a: &UElement, b: &UElement| d.commutator(a, b).unwrap();
        assert_eq!(c(&o.mul(&x, &x2), &v), o.mul(&c(&x, &v), &c(&x2, &v)));
        assert!(in_center(&o, &c(&x, &v)));
    }

    let (_, o) = c2_parts();
    let d = &o.d;
    for _ in 0..10 {
        let x = unipotent::sample::element(&mut g, d, Shape::TINY);
        let x2 = unipotent::sample::element(&mut g, d, Shape::TINY);
        let y = unipotent::sample::element(&mut g, d, Shape::TINY);
        let c = |a: &UElement, b: &UElement| d.commutator(a, b).unwrap();
        assert_eq!(c(&o.mul(&x, &x2), &y), o.mul(&c(&x, &y), &c(&x2, &y)));
    }
}

#[test]
fn coset_equality() {
    let o = g2_oracle();
    let f = o.d.field;
    let s = f.var(0);
    let x = o.embed(1, &s);
    let xz = o.mul(&x, &o.embed(4, &s.pow(3)));
    let xv = o.mul(&x, &o.embed(2, &f.one()));
    let coset = |e: &UElement, m| CosetElem {
        rep: e.clone(),
        modulus: m,
    };
    assert!(coset(&x, Modulus::Z).eq(&coset(&xz, Modulus::Z), &o));
    assert!(!coset(&x, Modulus::Z).eq(&coset(&xv, Modulus::Z), &o));
    assert!(coset(&x, Modulus::Z2).eq(&coset(&xv, Modulus::Z2), &o));
    assert!(!coset(&x, Modulus::Z2).eq(&coset(&o.embed(6, &s.pow(3)), Modulus::Z2), &o));
}

#[test]
fn round_trip_rebuilds_the_same_group() {
    // Read k' off the recovered embedding of the U_6 line, rebuild U', and
    // compare products coordinate-wise.
    let o = g2_oracle();
    let r = g2_recover(&o).unwrap();
    let f = o.d.field;
    let read = |t: &UElement| o.coords(&r.embed(t).unwrap()).coords[2].clone();
    let mut gens: Vec<RatFunc> = (0..4)
        .map(|seed| read(&o.sample_root_group(6, seed)))
        .collect();
    gens.push(read(&o.embed(6, &f.var(0))));
    let k_truth = SubfieldSpec::new("k", f, vec![f.var(0)]);
    let k_rebuilt = SubfieldSpec::new("k'", f, gens);
    assert!(k_rebuilt.same_field(&k_truth));
    let d2 = RootDatum2::g2(&k_rebuilt).unwrap();
    let mut g = rng(5);
    for _ in 0..10 {
        let a = unipotent::sample::element(&mut g, &o.d, Shape::TINY);
        let b = unipotent::sample::element(&mut g, &o.d, Shape::TINY);
        assert_eq!(d2.mul(&a, &b).unwrap(), o.mul(&a, &b));
    }
}

#[test]
fn double_centralizer_evidence() {
    let f = RatField::new(2, 2).unwrap();
    let t = f.var(0);
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one()]).unwrap();
    let k0 = RSpaceSpec::over_kp("K0", f, vec![f.one(), t]).unwrap();
    let ctx = Sp4Context::new(IndifferentSpec::new(l0, k0, true).unwrap(), None).unwrap();
    let rep = cc_experiment(Sp4Root::pos(2), &ctx, 6, 11);
    assert!(rep.all_consistent(), "{rep:?}");
    assert!(rep.centralizer_roots.contains(&"beta".to_string()));
    assert!(rep.centralizer_roots.contains(&"-(beta)".to_string()));
    let id = rep
        .candidates
        .iter()
        .find(|c| c.label == "identity")
        .unwrap();
    assert!(id.commutes_with_sampled_centralizer && id.in_root_group);
    assert!(rep
        .candidates
        .iter()
        .filter(|c| c.label.starts_with("torus"))
        .all(|c| !c.commutes_with_sampled_centralizer));
    let rep = cc_experiment(Sp4Root::neg(4), &ctx, 4, 12);
    assert!(rep.all_consistent(), "{rep:?}");
}
