//! Property tests over generated field elements and group words.

use proptest::prelude::*;

use exotic_core::funfield::{
    lambda, root_coords, Monomial, Notation, RatField, RatFunc, SparsePoly,
};
use exotic_core::rank1::{self, Mat2};
use exotic_core::sample::rng;
use exotic_core::sp4::{self, chevalley_gen, sp4_bruhat, Mat4, Sp4Root};
use exotic_core::tower::{IndifferentSpec, RSpaceSpec, SubfieldSpec};
use exotic_core::unipotent::{self, RootDatum2, TorusElement2};

fn poly(p: u32, n: usize) -> impl Strategy<Value = SparsePoly> {
    prop::collection::vec((prop::collection::vec(0u32..3, n), 1..p), 0..4).prop_map(move |terms| {
        SparsePoly::from_terms(
            p as u8,
            n as u8,
            terms.into_iter().map(|(e, c)| {
                let mut m = Monomial::one();
                m.0[..n].copy_from_slice(&e);
                (m, c)
            }),
        )
    })
}

fn elem(p: u32, n: usize) -> impl Strategy<Value = RatFunc> {
    (poly(p, n), prop::option::of(poly(p, n))).prop_map(|(num, den)| match den {
        Some(d) if !d.is_zero() => RatFunc::from_parts(num, d).unwrap(),
        _ => RatFunc::from_poly(num),
    })
}

fn char_and_triple() -> impl Strategy<Value = (u32, RatFunc, RatFunc, RatFunc)> {
    prop_oneof![Just(2u32), Just(3), Just(5)]
        .prop_flat_map(|p| (Just(p), elem(p, 3), elem(p, 3), elem(p, 3)))
}

fn g2() -> RootDatum2 {
    let f = RatField::new(3, 2).unwrap();
    RootDatum2::g2(&SubfieldSpec::new("k", f, vec![f.var(0)])).unwrap()
}

fn c2() -> RootDatum2 {
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

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms((p, a, b, c) in char_and_triple()) {
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a - &a, a.field().zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        prop_assert_eq!(a.pow(p), a.frobenius());
        prop_assert_eq!(a.frobenius().pth_root(), Some(a.clone()));
        let nt = Notation::standard(a.field());
        prop_assert_eq!(nt.parse(&nt.render(&a)).unwrap(), a);
    }

    #[test]
    fn root_coords_reassemble(x in elem(3, 2)) {
        let k = x.field();
        let c = root_coords(&x);
        let back = c.iter().enumerate().fold(k.zero(), |acc, (i, ci)| {
            let m = k.digits(i, 2).iter().zip(k.vars()).fold(k.one(), |m, (e, v)| &m * &v.pow(*e));
            &acc + &(&ci.pow(3) * &m)
        });
        prop_assert_eq!(back, x);
    }

    #[test]
    fn lambda_reconstructs(c0 in elem(2, 2), c1 in elem(2, 2)) {
        let k = c0.field();
        let t = k.var(0);
        let b = &c0.pow(2) + &(&c1.pow(2) * &t);
        let l = lambda(&[t], &b);
        prop_assert!(l.defined);
        prop_assert_eq!(l.coords, vec![c0, c1]);
    }

    #[test]
    fn sl2_bruhat_round_trip(x in elem(3, 2), y in elem(3, 2), z in elem(3, 2)) {
        let g: Mat2 = rank1::a(&x).mul(&rank1::b(&y)).mul(&rank1::a(&z));
        prop_assert!(g.det().is_one());
        prop_assert_eq!(rank1::bruhat2(&g).to_matrix(), g);
    }

    #[test]
    fn sp4_words_round_trip(word in prop::collection::vec((0usize..8, elem(2, 2)), 0..6)) {
        let k = RatField::new(2, 2).unwrap();
        let g = word.iter().fold(Mat4::identity(k), |acc, (r, c)| acc.mul(&chevalley_gen(Sp4Root::ALL[*r], c)));
        prop_assert!(g.is_symplectic());
        prop_assert!(g.det().is_one());
        prop_assert_eq!(sp4_bruhat(&g).to_matrix(k), g.clone());
        prop_assert_eq!(g.mul(&g.inv()), Mat4::identity(k));
    }

    #[test]
    fn sp4_torus_scales_root_groups(a in elem(2, 2), b in elem(2, 2), c in elem(2, 2), slot in 1u8..=4) {
        prop_assume!(!a.is_zero() && !b.is_zero());
        let h = TorusElement2::new(a, b).unwrap();
        let t = sp4::torus(&h);
        let r = Sp4Root::pos(slot);
        let lhs = t.mul(&chevalley_gen(r, &c)).mul(&t.inv());
        prop_assert_eq!(lhs, chevalley_gen(r, &(&c * &sp4::slot_scaling(&h, slot))));
    }

    #[test]
    fn unipotent_group_laws(seed in any::<u64>()) {
        for d in [g2(), c2()] {
            let mut g = rng(seed);
            let s = exotic_core::sample::Shape::TINY;
            let (x, y, z) = (
                unipotent::sample::element(&mut g, &d, s),
                unipotent::sample::element(&mut g, &d, s),
                unipotent::sample::element(&mut g, &d, s),
            );
            let xy = d.mul(&x, &y).unwrap();
            prop_assert_eq!(d.mul(&xy, &z).unwrap(), d.mul(&x, &d.mul(&y, &z).unwrap()).unwrap());
            prop_assert!(d.mul(&x, &d.inv(&x).unwrap()).unwrap().is_identity());
            prop_assert!(d.check_domain(&xy).is_ok());
            // [x, y] = x^-1 y^-1 x y, so yx·[x, y] = xy.
            let c = d.commutator(&x, &y).unwrap();
            prop_assert_eq!(d.mul(&d.mul(&y, &x).unwrap(), &c).unwrap(), xy);
        }
    }
}
