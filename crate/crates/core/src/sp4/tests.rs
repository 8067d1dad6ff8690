use super::*;
use crate::sample::{nonzero, rng};
use crate::unipotent::{self, RootDatum2};

fn whole_spec(n: usize) -> IndifferentSpec {
    let f = RatField::new(2, n).unwrap();
    let k = RSpaceSpec::new("K", SubfieldSpec::whole(f), vec![f.one()]).unwrap();
    IndifferentSpec::new(k.clone(), k, true).unwrap()
}

/// K = F_2(t,u,v), L0 = K^2, K0 = K^2 + tK^2 + uK^2 = K1 ⊕ K^2·u with K1 = K^2[t].
fn codim1_ctx() -> Sp4Context {
    let f = RatField::new(2, 3).unwrap();
    let (t, u) = (f.var(0), f.var(1));
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one()]).unwrap();
    let k0 = RSpaceSpec::over_kp("K0", f, vec![f.one(), t.clone(), u.clone()]).unwrap();
    let spec = IndifferentSpec::new(l0, k0, true).unwrap();
    Sp4Context::new(spec, Some((SubfieldSpec::new("K1", f, vec![t]), u))).unwrap()
}

fn x(slot: u8, c: &RatFunc) -> Mat4 {
    chevalley_gen(Sp4Root::pos(slot), c)
}

/// n_w x_r(1) n_w^{-1} is lower triangular.
fn sends_to_negative(w: Weyl, slot: u8, k: RatField) -> bool {
    let n = w.rep(k);
    let c = n.mul(&x(slot, &k.one())).mul(&n.inv());
    (0..4).all(|i| (i + 1..4).all(|j| c.get(i, j).is_zero()))
}

#[test]
fn generators_are_symplectic_and_additive() {
    let f = RatField::new(2, 2).unwrap();
    let mut r = rng(1);
    for root in Sp4Root::ALL {
        assert_eq!(chevalley_gen(root, &f.zero()), Mat4::identity(f));
        for _ in 0..5 {
            let (s, t) = (
                sample::elem(&mut r, f, Shape::TINY),
                sample::elem(&mut r, f, Shape::TINY),
            );
            let g = chevalley_gen(root, &s);
            assert!(g.is_symplectic());
            assert!(g.det().is_one());
            assert_eq!(
                g.mul(&chevalley_gen(root, &t)),
                chevalley_gen(root, &(&s + &t))
            );
        }
    }
    let w0 = Weyl::ALL[7].rep(f);
    assert!(w0.is_symplectic() && w0.det().is_one());
}

#[test]
fn commutator_table_as_matrices() {
    let f = RatField::new(2, 2).unwrap();
    let mut r = rng(2);
    for _ in 0..100 {
        let t = sample::elem(&mut r, f, Shape::TINY);
        let a = sample::elem(&mut r, f, Shape::TINY);
        let c = Mat4::commutator(&x(1, &t), &x(4, &a));
        assert_eq!(c, x(3, &(&t * &a)).mul(&x(2, &(&t.pow(2) * &a))));
        assert_eq!(Mat4::commutator(&x(1, &t), &x(3, &a)), Mat4::identity(f));
        for (i, j) in [(1, 2), (2, 3), (2, 4), (3, 4)] {
            assert_eq!(Mat4::commutator(&x(i, &t), &x(j, &a)), Mat4::identity(f));
        }
    }
}

#[test]
fn positive_products_match_the_unipotent_engine() {
    let spec = whole_spec(2);
    let d = RootDatum2::c2(&spec).unwrap();
    let f = spec.field();
    let mut r = rng(3);
    for _ in 0..40 {
        let a = unipotent::sample::element(&mut r, &d, Shape::TINY);
        let b = unipotent::sample::element(&mut r, &d, Shape::TINY);
        let m = upper(f, &a).mul(&upper(f, &b));
        let br = sp4_bruhat(&m);
        assert_eq!(br.w, Weyl::identity());
        assert_eq!(br.tau, TorusElement2::identity(f));
        assert!(br.u2.is_identity());
        assert_eq!(br.u1, d.mul(&a, &b).unwrap());
        let c = d.commutator(&a, &b).unwrap();
        assert_eq!(upper(f, &c), Mat4::commutator(&upper(f, &a), &upper(f, &b)));
    }
}

#[test]
fn bruhat_examples() {
    let f = RatField::new(2, 2).unwrap();
    let br = sp4_bruhat(&Mat4::identity(f));
    assert_eq!(br.w, Weyl::identity());
    assert_eq!(br.tau, TorusElement2::identity(f));
    assert!(br.u1.is_identity() && br.u2.is_identity());
    let t = f.var(0);
    let br = sp4_bruhat(&chevalley_gen(Sp4Root::neg(1), &t));
    assert_eq!(br.w, Weyl::ALL[1]);
    // In the α-block: [[1,0],[t,1]] = a(1/t)·w·diag(t, 1/t)·a(1/t) in char 2.
    let ti = t.inv().unwrap();
    assert_eq!(br.u1.coords[0], ti);
    assert_eq!(br.tau.s_alpha, t);
    assert!(br.tau.s_beta.is_one());
    assert_eq!(br.u2.coords, vec![ti, f.zero(), f.zero(), f.zero()]);
    assert_eq!(
        sp4_bruhat(&chevalley_gen(Sp4Root::neg(4), &t)).w,
        Weyl::ALL[2]
    );
}

#[test]
fn bruhat_round_trip_on_words() {
    let ctx = Sp4Context::new(whole_spec(2), None).unwrap();
    let f = ctx.field();
    let mut r = rng(4);
    let mut cells = std::collections::HashSet::new();
    for n in 0..500 {
        let g = sample_word(&mut r, &ctx, 1 + n % 6, Shape::TINY);
        let br = sp4_bruhat(&g);
        assert_eq!(br.to_matrix(f), g);
        for (i, c) in br.u2.coords.iter().enumerate() {
            assert!(
                c.is_zero() || sends_to_negative(br.w, i as u8 + 1, f),
                "{br:?}"
            );
        }
        cells.insert(br.w);
    }
    assert_eq!(cells.len(), 8);
}

#[test]
fn bruhat_recovers_canonical_data() {
    let f = RatField::new(2, 2).unwrap();
    let mut r = rng(5);
    for w in Weyl::ALL {
        for _ in 0..8 {
            let mut el = || sample::elem(&mut r, f, Shape::TINY);
            let u1 = UElement {
                coords: (0..4).map(|_| el()).collect(),
            };
            let mut u2 = UElement {
                coords: (0..4).map(|_| el()).collect(),
            };
            for (i, c) in u2.coords.iter_mut().enumerate() {
                if !sends_to_negative(w, i as u8 + 1, f) {
                    *c = f.zero();
                }
            }
            let tau = TorusElement2::new(
                nonzero(&mut r, f, Shape::TINY),
                nonzero(&mut r, f, Shape::TINY),
            )
            .unwrap();
            let data = Bruhat4 { u1, w, tau, u2 };
            assert_eq!(sp4_bruhat(&data.to_matrix(f)), data);
        }
    }
}

#[test]
fn membership_examples() {
    let ctx = codim1_ctx();
    let f = ctx.field();
    let (t, u, v) = (f.var(0), f.var(1), f.var(2));
    assert!(membership_psp4(&x(1, &t), &ctx, 3).is_yes());
    assert!(membership_psp4(&x(3, &u), &ctx, 3).is_yes());
    assert!(membership_psp4(&x(4, &t), &ctx, 3).is_no());
    assert!(membership_psp4(&chevalley_gen(Sp4Root::neg(2), &u), &ctx, 3).is_no());
    assert!(membership_psp4(&x(1, &v), &ctx, 3).is_no());
    let h = |a: RatFunc, b: RatFunc| torus(&TorusElement2::new(a, b).unwrap());
    assert!(membership_psp4(&h(&t * &u, f.one()), &ctx, 3).is_yes());
    assert!(membership_psp4(&h(v.clone(), f.one()), &ctx, 3).is_no());
    assert!(membership_psp4(&h(f.one(), t.clone()), &ctx, 3).is_no());
    assert!(membership_psp4(&h(f.one(), v.pow(2)), &ctx, 3).is_yes());
}

#[test]
fn random_words_are_members() {
    let ctx = codim1_ctx();
    let mut r = rng(6);
    for _ in 0..12 {
        let g = sample_word(&mut r, &ctx, 8, Shape::TINY);
        match membership_psp4(&g, &ctx, 3) {
            Sp4Membership::Yes { alpha, beta } => {
                let br = sp4_bruhat(&g);
                assert!(alpha.verify(&br.tau.s_alpha, &ctx.short));
                assert!(beta.verify(&br.tau.s_beta, &ctx.long));
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn normalizer_examples_and_agreement() {
    let ctx = codim1_ctx();
    let spec = &ctx.spec;
    let f = spec.field();
    let (t, u, v) = (f.var(0), f.var(1), f.var(2));
    assert!(torus_normalizer_check(&v, &v.pow(2), spec));
    assert!(!torus_normalizer_check(&f.one(), &t, spec));
    assert!(!torus_normalizer_check(&f.one(), &f.zero(), spec));

    // K0 = K^2[t]{1, u, v} in F_2(t,u,v): t·K0 = K0, u·1 ∉ K0.
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one(), t.clone()]).unwrap();
    let k0 = RSpaceSpec::new(
        "K0",
        SubfieldSpec::new("K2[t]", f, vec![t.clone()]),
        vec![f.one(), u.clone(), v],
    )
    .unwrap();
    let spec2 = IndifferentSpec::new(l0, k0, true).unwrap();
    assert!(torus_normalizer_check(&u, &t, &spec2));
    assert!(!torus_normalizer_check(&f.one(), &u, &spec2));

    let d = RootDatum2::c2(&spec2).unwrap();
    let mut r = rng(7);
    for _ in 0..20 {
        let a = nonzero(&mut r, f, Shape::TINY);
        let b = if r.gen_bool(0.5) {
            nonzero(&mut r, f, Shape::TINY)
        } else {
            &t * &nonzero(&mut r, f, Shape::TINY).pow(2)
        };
        let h = TorusElement2::new(a.clone(), b.clone()).unwrap();
        assert_eq!(
            torus_normalizer_check(&a, &b, &spec2),
            d.torus_normalizes(&h).unwrap()
        );
    }
}

#[test]
fn slot_scalings_follow_the_weights() {
    let spec = whole_spec(2);
    let d = RootDatum2::c2(&spec).unwrap();
    let f = spec.field();
    let h = TorusElement2::new(f.var(0), &f.var(1) + &f.one()).unwrap();
    for slot in 1..=4u8 {
        assert_eq!(
            slot_scaling(&h, slot),
            d.torus_factor(&h, slot as usize).unwrap()
        );
    }
}

#[test]
fn group_from_structure() {
    let ctx = codim1_ctx();
    let f = ctx.field();
    let (t, v) = (f.var(0), f.var(2));
    let hv = TorusElement2::new(v.clone(), f.one()).unwrap();
    let declared: [RatFunc; 4] = std::array::from_fn(|i| slot_scaling(&hv, i as u8 + 1));
    let g = build_group_from_m(
        ctx.clone(),
        vec![TorusGen {
            h: hv.clone(),
            declared: Some(declared.clone()),
        }],
    )
    .unwrap();

    let mut wrong = declared;
    wrong[3] = f.one();
    let bad = build_group_from_m(
        ctx.clone(),
        vec![TorusGen {
            h: hv.clone(),
            declared: Some(wrong),
        }],
    );
    assert!(matches!(bad, Err(Sp4Error::BadTorus { index: 0, .. })));
    let ht = TorusElement2::new(f.one(), t.clone()).unwrap();
    assert!(matches!(
        build_group_from_m(
            ctx.clone(),
            vec![TorusGen {
                h: ht,
                declared: None
            }]
        ),
        Err(Sp4Error::BadTorus { .. })
    ));

    // B = T·U: elements h·u sit in the identity cell and are members.
    let mut r = rng(8);
    for _ in 0..6 {
        let u = sample_word(&mut r, &ctx, 0, Shape::TINY)
            .mul(&x(
                1,
                &sample::in_span(&mut r, ctx.domain(Sp4Root::pos(1)).span(), Shape::TINY),
            ))
            .mul(&x(
                4,
                &sample::in_span(&mut r, ctx.domain(Sp4Root::pos(4)).span(), Shape::TINY),
            ));
        let b = torus(&hv).mul(&u);
        let br = sp4_bruhat(&b);
        assert_eq!(br.w, Weyl::identity());
        assert!(br.u2.is_identity());
        assert!(membership_psp4(&b, &ctx, 3).is_no());
        assert!(g.member(&b, 2).is_yes());
    }

    assert_eq!(g.k0_stabilizer().degree(), 1);
    assert_eq!(g.l0_field().degree(), 1);
}

#[test]
fn squares_only_context() {
    let f = RatField::new(2, 2).unwrap();
    let l0 = RSpaceSpec::over_kp("L0", f, vec![f.one()]).unwrap();
    let spec = IndifferentSpec::new(l0.clone(), l0, true).unwrap();
    let g = build_group_from_m(Sp4Context::new(spec, None).unwrap(), vec![]).unwrap();
    let t = f.var(0);
    assert!(g.member(&x(1, &t), 2).is_no());
    assert!(g.member(&x(1, &t.pow(2)), 2).is_yes());
    assert!(g
        .member(&chevalley_gen(Sp4Root::neg(3), &t.pow(2)), 2)
        .is_yes());
}

#[test]
fn perfectness_for_every_root() {
    let ctx = codim1_ctx();
    let g = build_group_from_m(ctx.clone(), vec![]).unwrap();
    let f = ctx.field();
    for root in Sp4Root::ALL {
        let s = if root.long() {
            f.var(2).pow(2)
        } else {
            f.var(1)
        };
        let sp = g.perfectness_witness(root, &s).unwrap();
        assert!(ctx.domain(root).contains(&sp));
    }
}

#[test]
fn roots_parse_and_print() {
    assert_eq!(Sp4Root::parse("-(alpha+beta)").unwrap(), Sp4Root::neg(3));
    assert_eq!(Sp4Root::parse("2a+b").unwrap(), Sp4Root::pos(2));
    assert_eq!(Sp4Root::parse("4").unwrap(), Sp4Root::pos(4));
    assert!(Sp4Root::parse("gamma").is_err());
    assert_eq!(Sp4Root::neg(1).to_string(), "-(alpha)");
    assert_eq!(Weyl::ALL[3].to_string(), "s_alpha*s_beta");
    assert_eq!(Weyl::identity().to_string(), "e");
}

#[test]
fn matrices_are_validated() {
    let f = RatField::new(2, 1).unwrap();
    let t = f.var(0);
    let mut e: Vec<RatFunc> = Mat4::identity(f).entries().cloned().collect();
    assert!(Mat4::from_entries(f, e.clone()).is_ok());
    e[1] = t;
    assert_eq!(
        Mat4::from_entries(f, e.clone()),
        Err(Sp4Error::NotSymplectic)
    );
    e.pop();
    assert_eq!(Mat4::from_entries(f, e), Err(Sp4Error::WrongLength(15)));
    let f3 = RatField::new(3, 1).unwrap();
    assert_eq!(Mat4::from_entries(f3, vec![]), Err(Sp4Error::NotChar2(3)));
}
