use super::*;
use crate::sample::{nonzero, rng, Shape};
use crate::tower::RSpaceSpec;

fn g2() -> RootDatum2 {
    // K = F_3(s, v), k = K^3[s]
    let f = RatField::new(3, 2).unwrap();
    RootDatum2::g2(&SubfieldSpec::new("k", f, vec![f.var(0)])).unwrap()
}

fn c2() -> RootDatum2 {
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
    RootDatum2::c2(&IndifferentSpec::new(l0, k0, true).unwrap()).unwrap()
}

fn c2_proper() -> RootDatum2 {
    // K = F_2(t, u, v), L0 = span_{K^2}{1, t}, K0 = span_{K^2[t]}{1, u, v} ≠ K
    let f = RatField::new(2, 3).unwrap();
    let (t, u, v) = (f.var(0), f.var(1), f.var(2));
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one(), t.clone()]).unwrap();
    let k0 = RSpaceSpec::new(
        "K0",
        SubfieldSpec::new("K2[t]", f, vec![t]),
        vec![f.one(), u, v],
    )
    .unwrap();
    RootDatum2::c2(&IndifferentSpec::new(l0, k0, true).unwrap()).unwrap()
}

/// Collection that always rewrites the rightmost disorder first.
fn collect_right(d: &RootDatum2, mut w: Vec<(usize, RatFunc)>) -> UElement {
    w.retain(|(_, c)| !c.is_zero());
    loop {
        let Some(k) = (0..w.len().saturating_sub(1))
            .rev()
            .find(|&k| w[k].0 >= w[k + 1].0)
        else {
            break;
        };
        let (i, a) = w[k].clone();
        let (j, b) = w[k + 1].clone();
        if i == j {
            let s = &a + &b;
            w.splice(k..k + 2, if s.is_zero() { vec![] } else { vec![(i, s)] });
            continue;
        }
        let mut repl = vec![(j, b.clone()), (i, a.clone())];
        if let Some(rel) = d.relation(j, i) {
            let mut inv: Vec<(usize, RatFunc)> = rel
                .terms
                .iter()
                .map(|tm| {
                    let v = &(&d.field.constant(tm.coeff) * &b.pow(tm.pa)) * &a.pow(tm.pb);
                    (tm.slot, -&v)
                })
                .filter(|(_, v)| !v.is_zero())
                .collect();
            inv.reverse();
            repl.extend(inv);
        }
        w.splice(k..k + 2, repl);
    }
    let mut e = d.identity();
    for (i, c) in w {
        e.coords[i - 1] = c;
    }
    e
}

fn x(d: &RootDatum2, i: usize, c: RatFunc) -> UElement {
    d.root_element(i, c).unwrap()
}

#[test]
fn same_root_group_adds() {
    let d = g2();
    let f = d.field;
    let (a, b) = (f.var(0), f.var(1));
    assert_eq!(
        d.mul(&x(&d, 1, a.clone()), &x(&d, 1, b.clone())).unwrap(),
        x(&d, 1, &a + &b)
    );
}

#[test]
fn g2_transposition_example() {
    let d = g2();
    let f = d.field;
    let (a, b) = (f.var(0), f.var(1));
    let got = d.mul(&x(&d, 5, b.clone()), &x(&d, 1, a.clone())).unwrap();
    let mut want = d.identity();
    want.coords[0] = a.clone();
    want.coords[2] = &a * &b;
    want.coords[4] = b.clone();
    assert_eq!(got, want);
    assert_eq!(collect_right(&d, vec![(5, b), (1, a)]), want);
}

#[test]
fn c2_transposition_example() {
    let d = c2();
    let f = d.field;
    let (t, u) = (f.var(0), f.var(1));
    let a = t.clone();
    let tt = &t * &u;
    let got = d.mul(&x(&d, 4, a.clone()), &x(&d, 1, tt.clone())).unwrap();
    let want = UElement {
        coords: vec![tt.clone(), &tt.pow(2) * &a, &tt * &a, a],
    };
    assert_eq!(got, want);
}

#[test]
fn commutators_reproduce_the_table() {
    let d = g2();
    let f = d.field;
    let one = f.one();
    let c = d
        .commutator(&x(&d, 1, one.clone()), &x(&d, 5, one.clone()))
        .unwrap();
    assert_eq!(c, x(&d, 3, -&one));
    let s = f.var(0);
    assert!(d
        .commutator(&x(&d, 2, s.clone()), &x(&d, 4, s.pow(3)))
        .unwrap()
        .is_identity());
    let c = d
        .commutator(&x(&d, 1, one.clone()), &x(&d, 6, one.clone()))
        .unwrap();
    assert_eq!(
        c.coords,
        vec![f.zero(), -&one, one.clone(), one.clone(), -&one, f.zero()]
    );

    let (a, b) = (f.var(1), s.pow(3));
    let c = d
        .commutator(&x(&d, 1, a.clone()), &x(&d, 6, b.clone()))
        .unwrap();
    let want = vec![
        f.zero(),
        -&(&b * &a.pow(3)),
        &b * &a.pow(2),
        &b.pow(2) * &a.pow(3),
        -&(&b * &a),
        f.zero(),
    ];
    assert_eq!(c.coords, want);

    let d = c2();
    let f = d.field;
    let (t, u) = (f.var(0), f.var(1));
    let c = d
        .commutator(&x(&d, 1, u.clone()), &x(&d, 4, t.clone()))
        .unwrap();
    assert_eq!(c.coords, vec![f.zero(), &u.pow(2) * &t, &u * &t, f.zero()]);
}

#[test]
fn associativity_identity_inverse_and_oracle() {
    for d in [g2(), c2()] {
        let mut r = rng(21);
        for _ in 0..25 {
            let a = sample::element(&mut r, &d, Shape::TINY);
            let b = sample::element(&mut r, &d, Shape::TINY);
            let c = sample::element(&mut r, &d, Shape::TINY);
            let ab = d.mul(&a, &b).unwrap();
            assert_eq!(
                d.mul(&ab, &c).unwrap(),
                d.mul(&a, &d.mul(&b, &c).unwrap()).unwrap()
            );
            let mut w = d.word_of(&a);
            w.extend(d.word_of(&b));
            assert_eq!(collect_right(&d, w), ab);
            assert_eq!(d.mul(&a, &d.identity()).unwrap(), a);
            assert!(d.mul(&a, &d.inv(&a).unwrap()).unwrap().is_identity());
        }
    }
}

#[test]
fn center_examples() {
    let d = g2();
    let f = d.field;
    let (s, v) = (f.var(0), f.var(1));
    let z = d.mul(&x(&d, 3, v.clone()), &x(&d, 4, s.clone())).unwrap();
    assert!(d.center_member(&z).unwrap());
    assert!(d.z2_member(&z).unwrap());
    let x2 = x(&d, 2, s.clone());
    assert!(!d.center_member(&x2).unwrap());
    assert!(d.z2_member(&x2).unwrap());
    let x1 = x(&d, 1, v.clone());
    assert!(!d.center_member(&x1).unwrap());
    assert!(!d.z2_member(&x1).unwrap());
}

#[test]
fn center_characterizations_agree_on_samples() {
    for d in [g2(), c2()] {
        let mut r = rng(5);
        for n in 0..30 {
            let mut e = sample::element(&mut r, &d, Shape::TINY);
            // Bias towards the centers so both answers occur.
            for (i, c) in e.coords.iter_mut().enumerate() {
                if n % 3 != 0 && !d.z2_slots.contains(&(i + 1))
                    || n % 3 == 1 && !d.z_slots.contains(&(i + 1))
                {
                    *c = d.field.zero();
                }
            }
            d.center_member(&e).unwrap();
            d.z2_member(&e).unwrap();
        }
    }
}

#[test]
fn out_of_domain_letters_are_rejected() {
    let d = g2();
    let v = d.field.var(1);
    assert!(matches!(
        d.root_element(2, v),
        Err(UnipotentError::OutOfDomain { slot: 2, .. })
    ));
    let d = c2();
    let u = d.field.var(1);
    assert!(matches!(
        d.root_element(4, u),
        Err(UnipotentError::OutOfDomain { slot: 4, .. })
    ));
}

#[test]
fn torus_examples() {
    let d = c2_proper();
    let f = d.field;
    let (t, u) = (f.var(0), f.var(1));
    let e = d
        .element(vec![u.clone(), t.clone(), u.clone(), t.clone()])
        .unwrap();
    assert_eq!(d.torus_act(&TorusElement2::identity(f), &e).unwrap(), e);
    let hb = TorusElement2::new(f.one(), t.clone()).unwrap();
    let acted = d.torus_act(&hb, &e).unwrap();
    assert_eq!(acted.coords[0], &u / &t);
    assert_eq!(acted.coords[3], t.pow(3));
    // h_beta(t) with t·K0 = K0 normalizes; h_beta(u) does not.
    assert!(d.torus_normalizes(&hb).unwrap());
    assert!(!d
        .torus_normalizes(&TorusElement2::new(f.one(), u).unwrap())
        .unwrap());

    let d = g2();
    let f = d.field;
    let (s, v) = (f.var(0), f.var(1));
    let ha = TorusElement2::new(v.clone(), f.one()).unwrap();
    assert_eq!(d.torus_factor(&ha, 6).unwrap(), v.pow(3).inv().unwrap());
    assert!(d
        .torus_normalizes(&TorusElement2::new(s.clone(), s.pow(2)).unwrap())
        .unwrap());
    assert!(!d
        .torus_normalizes(&TorusElement2::new(f.one(), v).unwrap())
        .unwrap());
}

#[test]
fn torus_action_is_an_automorphism() {
    for d in [g2(), c2(), c2_proper()] {
        let mut r = rng(13);
        for _ in 0..15 {
            let h = TorusElement2::new(
                nonzero(&mut r, d.field, Shape::TINY),
                nonzero(&mut r, d.field, Shape::TINY),
            )
            .unwrap();
            let a = sample::element(&mut r, &d, Shape::TINY);
            let b = sample::element(&mut r, &d, Shape::TINY);
            let lhs = d.torus_act(&h, &d.mul(&a, &b).unwrap()).unwrap();
            let ha = d.torus_act(&h, &a).unwrap();
            let hb = d.torus_act(&h, &b).unwrap();
            assert_eq!(
                lhs,
                d.collect([d.word_of(&ha), d.word_of(&hb)].concat())
                    .unwrap()
            );
        }
    }
}

#[test]
fn words_parse_and_render() {
    let d = g2();
    let nt = Notation::new(d.field, vec!["s".into(), "v".into()]).unwrap();
    let w = d.parse_word(&nt, "x1(1)*x6(1)").unwrap();
    let e = d.element_from_word(w).unwrap();
    assert_eq!(d.render(&nt, &e), "x1(1)*x6(1)");
    let e = d
        .element_from_word(d.parse_word(&nt, "x6(1)*x1(1)").unwrap())
        .unwrap();
    assert_eq!(d.render(&nt, &e), "x1(1)*x2(1)*x3(2)*x4(1)*x5(1)*x6(1)");
    assert!(matches!(
        d.parse_word(&nt, "y1(1)"),
        Err(UnipotentError::Parse(_))
    ));
    assert!(matches!(
        d.parse_word(&nt, "x9(1)"),
        Err(UnipotentError::NoSuchSlot(9))
    ));
    assert!(matches!(
        d.element_from_word(d.parse_word(&nt, "x2(v)").unwrap()),
        Err(UnipotentError::OutOfDomain { slot: 2, .. })
    ));
}

#[test]
fn wrong_characteristic_is_rejected() {
    let f = RatField::new(2, 1).unwrap();
    assert!(matches!(
        RootDatum2::g2(&SubfieldSpec::kp(f)),
        Err(UnipotentError::Characteristic {
            kind: Kind::G2,
            need: 3,
            got: 2
        })
    ));
}
