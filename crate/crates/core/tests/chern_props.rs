mod common;

use attrkit::catalog::tangent_quintic;
use attrkit::chern::{
    bogomolov, bogomolov_classes, charge_pairing, drezet, euler_pairing, mukai, slope, tensor, twist,
};
use attrkit::geometry::dot;
use attrkit::rational::{q, qr, qvec};
use attrkit::{ChernRecord, Error, ThreefoldData, Q};
use common::*;
use proptest::prelude::*;

/// `χ(a, b) = ∫ ch(a)^∨ ch(b) td(M)` expanded by hand, with `td = 1 + c2/12`.
fn euler_by_expansion(a: &ChernRecord, b: &ChernRecord, g: &ThreefoldData) -> Q {
    let c2 = g.c2_pair();
    &a.rank * &b.ch3 - &b.rank * &a.ch3 - dot(&a.c1, &b.ch2) + dot(&b.c1, &a.ch2)
        + (dot(&b.c1, c2) * &a.rank - dot(&a.c1, c2) * &b.rank) / q(12)
}

fn drezet_by_formula(c: &ChernRecord, g: &ThreefoldData) -> (Vec<Q>, Vec<Q>, Q) {
    let r = &c.rank;
    let m: Vec<Q> = c.c1.iter().map(|x| x / r).collect();
    let mm = g.product_pairing(&m, &m);
    let d2 = mm.iter().zip(&c.ch2).map(|(s, x)| s / q(2) - x / r).collect();
    let d3 = &c.ch3 / r - dot(&m, &c.ch2) / r + g.cube(&m) / q(3);
    (m, d2, d3)
}

#[test]
fn tangent_bundle_classes() {
    let g = ThreefoldData::quintic();
    let tq = tangent_quintic(&g).unwrap();
    let ch = tq.to_even_class();
    assert_eq!((ch.d0.clone(), ch.d4.clone(), ch.d6.clone()), (q(3), qvec(&[-50]), q(-100)));
    assert_eq!(tq.c3(&g), q(-200));
    assert_eq!(tq.c2(&g), qvec(&[50]));
    let gamma = mukai(&tq, &g).0;
    assert_eq!(gamma.d4, vec![qr(-175, 4)]);
    assert_eq!(gamma.d6, q(-100));
    let d = drezet(&tq, &g).unwrap();
    assert_eq!(d.delta2, vec![qr(50, 3)]);
    assert_eq!(d.delta3, qr(-100, 3));
    assert_eq!(bogomolov(&tq, &qvec(&[1]), &g).unwrap(), qr(50, 3));
}

#[test]
fn structure_sheaf_and_line_bundles() {
    for g in geometries() {
        let o = ChernRecord::trivial(g.b2());
        assert_eq!(euler_pairing(&o, &o, &g), q(0));
        assert_eq!(mukai(&o, &g).0, g.sqrt_todd());
        assert_eq!(o.to_even_class().d0, q(1));
    }
    let g = ThreefoldData::quintic();
    let o = ChernRecord::trivial(1);
    let oh = ChernRecord::line_bundle(&qvec(&[1]), &g);
    assert_eq!(euler_pairing(&o, &oh, &g), q(5));
    assert_eq!(charge_pairing(&o, &oh, &g), q(-5));
    assert_eq!(oh.to_even_class(), g.exp2(&qvec(&[1])));
    assert_eq!(slope(&oh, &qvec(&[1]), &g).unwrap(), q(5));
    assert_eq!(bogomolov(&oh, &qvec(&[1]), &g).unwrap(), q(0));
}

#[test]
fn rank_zero_is_rejected() {
    let g = ThreefoldData::quintic();
    let c = ChernRecord::new(q(0), qvec(&[1]), qvec(&[0]), q(0));
    assert_eq!(drezet(&c, &g), Err(Error::ZeroRank));
    assert_eq!(slope(&c, &qvec(&[1]), &g), Err(Error::ZeroRank));
    assert_eq!(bogomolov(&c, &qvec(&[1]), &g), Err(Error::ZeroRank));
}

#[test]
fn rank_three_kernel_discriminant() {
    let g = ThreefoldData::quintic();
    let c = ChernRecord::from_chern_classes(q(3), qvec(&[-1]), qvec(&[5]), q(-5), &g).unwrap();
    assert_eq!(bogomolov(&c, &qvec(&[1]), &g).unwrap(), qr(20, 18));
    assert_eq!(bogomolov_classes(&c, &qvec(&[1]), &g).unwrap(), qr(20, 18));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn euler_pairing_matches_expansion(a in record(2), b in record(2)) {
        let g = ThreefoldData::elliptic_p2();
        let chi = euler_pairing(&a, &b, &g);
        prop_assert_eq!(&chi, &euler_by_expansion(&a, &b, &g));
        prop_assert_eq!(&chi, &-euler_pairing(&b, &a, &g));
        prop_assert_eq!(charge_pairing(&a, &b, &g), euler_pairing(&b, &a, &g));
    }

    #[test]
    fn chern_class_round_trip(c in record(2)) {
        let g = ThreefoldData::elliptic_p2();
        let back = ChernRecord::from_chern_classes(c.rank.clone(), c.c1.clone(), c.c2(&g), c.c3(&g), &g).unwrap();
        prop_assert_eq!(&back, &c);
        prop_assert_eq!(ChernRecord::from_even_class(&c.to_even_class()), c.clone());
        prop_assert_eq!(&mukai(&c, &g).0.d0, &c.rank);
    }

    #[test]
    fn drezet_matches_formula(c in positive_record(2)) {
        let g = ThreefoldData::elliptic_p2();
        let d = drezet(&c, &g).unwrap();
        let (d1, d2, d3) = drezet_by_formula(&c, &g);
        prop_assert_eq!(d.delta1, d1);
        prop_assert_eq!(d.delta2, d2);
        prop_assert_eq!(d.delta3, d3);
    }

    #[test]
    fn rescale_invariance(c in positive_record(2), n in 1i64..9, j in ample_q(2)) {
        let g = ThreefoldData::elliptic_p2();
        let nc = c.rescale(&q(n));
        prop_assert_eq!(drezet(&nc, &g).unwrap(), drezet(&c, &g).unwrap());
        prop_assert_eq!(slope(&nc, &j, &g).unwrap(), slope(&c, &j, &g).unwrap());
        prop_assert_eq!(bogomolov(&nc, &j, &g).unwrap(), bogomolov(&c, &j, &g).unwrap());
        prop_assert_eq!(c.rescale(&q(1)), c);
    }

    #[test]
    fn tensor_adds_drezet_invariants(a in positive_record(2), b in positive_record(2)) {
        let g = ThreefoldData::elliptic_p2();
        let ab = tensor(&a, &b, &g).unwrap();
        prop_assert_eq!(ab.to_even_class(), g.wedge(&a.to_even_class(), &b.to_even_class()).unwrap());
        let (da, db, dab) = (drezet(&a, &g).unwrap(), drezet(&b, &g).unwrap(), drezet(&ab, &g).unwrap());
        let sum = |x: &[Q], y: &[Q]| x.iter().zip(y).map(|(u, v)| u + v).collect::<Vec<Q>>();
        prop_assert_eq!(dab.delta1, sum(&da.delta1, &db.delta1));
        prop_assert_eq!(dab.delta2, sum(&da.delta2, &db.delta2));
        prop_assert_eq!(dab.delta3, &da.delta3 + &db.delta3);
        prop_assert_eq!(tensor(&a, &ChernRecord::trivial(2), &g).unwrap(), a);
    }

    #[test]
    fn twist_laws(c in positive_record(2), l in int_vec(2, -3, 3), j in ample_q(2)) {
        let g = ThreefoldData::elliptic_p2();
        let t = twist(&c, &l, &g).unwrap();
        let (d, dt) = (drezet(&c, &g).unwrap(), drezet(&t, &g).unwrap());
        prop_assert_eq!(&dt.delta2, &d.delta2);
        prop_assert_eq!(&dt.delta3, &d.delta3);
        let shifted: Vec<Q> = d.delta1.iter().zip(&l).map(|(x, y)| x + y).collect();
        prop_assert_eq!(dt.delta1, shifted);
        prop_assert_eq!(slope(&t, &j, &g).unwrap(), slope(&c, &j, &g).unwrap() + g.triple(&l, &j, &j));
        prop_assert_eq!(t.to_even_class(), g.wedge(&g.exp2(&l), &c.to_even_class()).unwrap());
    }

    #[test]
    fn bogomolov_forms_agree(c in positive_record(2), j in ample_q(2)) {
        let g = ThreefoldData::elliptic_p2();
        prop_assert_eq!(bogomolov(&c, &j, &g).unwrap(), bogomolov_classes(&c, &j, &g).unwrap());
    }
}
