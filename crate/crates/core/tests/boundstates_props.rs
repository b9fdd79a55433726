mod common;

use attrkit::boundstates::{
    bps_bound_condition, extension_chern, guess_bound, j_closure, large_volume_condition, large_volume_leading_term,
    tau_vs, ChargePair,
};
use attrkit::catalog::tangent_quintic;
use attrkit::chern::charge_pairing;
use attrkit::rational::{q, qr, qvec, to_f64, vec_to_f64};
use attrkit::{ChernRecord, Error, ThreefoldData, Q};
use common::*;
use proptest::prelude::*;

fn o_and_oh() -> (ThreefoldData, ChargePair) {
    let g = ThreefoldData::quintic();
    let o = ChernRecord::trivial(1);
    let oh = ChernRecord::line_bundle(&qvec(&[1]), &g);
    let p = ChargePair::new(o, oh, &g).unwrap();
    (g, p)
}

/// `Im(Z' conj Z'')` in exact arithmetic.
fn im_product_exact(p: &ChargePair, b: &[Q], j: &[Q], g: &ThreefoldData) -> Q {
    let za = central_charge_exact(p.a(), b, j, g);
    let zb = central_charge_exact(p.b(), b, j, g);
    (za * zb.conj()).im
}

#[test]
fn structure_sheaf_pair_at_three_h() {
    let (g, p) = o_and_oh();
    // Z(O) = 65i/4, Z(O(H)) = -235/12 + 35i/4 at B = 0, J = 3H.
    assert_eq!(central_charge_exact(p.a(), &qvec(&[0]), &qvec(&[3]), &g), Cq::new(q(0), qr(65, 4)));
    assert_eq!(central_charge_exact(p.b(), &qvec(&[0]), &qvec(&[3]), &g), Cq::new(qr(-235, 12), qr(35, 4)));
    let lhs = p.pairing() * im_product_exact(&p, &qvec(&[0]), &qvec(&[3]), &g);
    assert_eq!(lhs, qr(76375, 48));
    let c = bps_bound_condition(&p, &[0.0], &[3.0], &g).unwrap();
    assert!(c.holds);
    assert!((c.lhs - to_f64(&lhs)).abs() < 1e-10 * c.lhs);
    let tau = tau_vs(&p, &[0.0], &[3.0], &g).unwrap();
    let za: (f64, f64) = (0.0, 65.0 / 4.0);
    let zb = (-235.0 / 12.0, 35.0 / 4.0);
    let total = (za.0 + zb.0).hypot(za.1 + zb.1);
    let expected = 2.0 * to_f64(&im_product_exact(&p, &qvec(&[0]), &qvec(&[3]), &g)) / (total * -5.0);
    assert!((tau - expected).abs() < 1e-12);
}

#[test]
fn self_pairs() {
    for g in geometries() {
        let o = ChernRecord::trivial(g.b2());
        let p = ChargePair::new(o.clone(), o.rescale(&q(3)), &g).unwrap();
        assert_eq!(p.pairing(), &q(0));
        let j = vec![2.0; g.b2()];
        let b = vec![0.1; g.b2()];
        let c = bps_bound_condition(&p, &b, &j, &g).unwrap();
        assert!(c.holds);
        assert_eq!(c.lhs, 0.0);
        assert_eq!(tau_vs(&p, &b, &j, &g), Err(Error::ZeroPairing));
    }
}

#[test]
fn large_volume_slope_form() {
    let (g, p) = o_and_oh();
    let lv = large_volume_condition(&p, &qvec(&[1]), &g).unwrap();
    assert_eq!((lv.chi.clone(), lv.slope_gap.clone()), (q(5), q(5)));
    assert!(lv.holds);
    let same = ChargePair::new(p.a().clone(), p.a().rescale(&q(2)), &g).unwrap();
    let eq = large_volume_condition(&same, &qvec(&[1]), &g).unwrap();
    assert_eq!(eq.slope_gap, q(0));
    assert!(eq.holds);
    let rank_zero = ChernRecord::new(q(0), qvec(&[1]), qvec(&[0]), q(0));
    let bad = ChargePair::new(rank_zero, p.a().clone(), &g).unwrap();
    assert_eq!(large_volume_condition(&bad, &qvec(&[1]), &g), Err(Error::ZeroRank));
}

#[test]
fn large_volume_expansion_matches_exact_evaluation() {
    let (g, p) = o_and_oh();
    let t = 1000;
    let j = qvec(&[t]);
    let exact = to_f64(&im_product_exact(&p, &qvec(&[0]), &j, &g));
    let lead = to_f64(&large_volume_leading_term(&p, &j, &g).unwrap());
    assert!(((exact - lead) / lead).abs() < 1e-2, "{exact} vs {lead}");
}

#[test]
fn extension_records() {
    let g = ThreefoldData::quintic();
    assert_eq!(extension_chern(1, 0, &qvec(&[1]), &g).unwrap(), ChernRecord::trivial(1));
    let e = extension_chern(2, 1, &qvec(&[1]), &g).unwrap();
    assert_eq!(e, ChernRecord::new(q(1), qvec(&[0]), qvec(&[-5]), q(-5)));
    assert!(matches!(extension_chern(1, 2, &qvec(&[1]), &g), Err(Error::Inconsistent(_))));
    let mut last = None;
    for p in 2..=50 {
        let e = extension_chern(p, 1, &qvec(&[1]), &g).unwrap();
        let c2 = e.c2(&g)[0].clone();
        let c3 = e.c3(&g);
        let ratio = &c3 * &c3 * &e.rank / (&c2 * &c2 * &c2);
        if let Some(prev) = last {
            assert!(ratio > prev, "ratio not increasing at p = {p}");
        }
        last = Some(ratio);
    }
}

#[test]
fn closure_determinism_and_cap() {
    let (g, p) = o_and_oh();
    let seed = vec![p.a().clone(), p.b().clone()];
    assert_eq!(j_closure(&seed, &[0.0], &[3.0], &g, 0).unwrap(), seed);
    for budget in [1, 3, 7, 12] {
        let c = j_closure(&seed, &[0.0], &[3.0], &g, budget).unwrap();
        assert!(c.len() <= seed.len() + budget);
        assert_eq!(c, j_closure(&seed, &[0.0], &[3.0], &g, budget).unwrap());
        assert_eq!(&c[..2], &seed[..]);
    }
    let one = j_closure(&seed, &[0.0], &[3.0], &g, 1).unwrap();
    assert_eq!(one, vec![seed[0].clone(), seed[1].clone(), seed[0].clone() + seed[1].clone()]);
}

#[test]
fn closure_adds_nothing_when_condition_fails() {
    let g = ThreefoldData::quintic();
    let o = ChernRecord::trivial(1);
    // χ(O, b) < 0 with μ(b) > μ(O): fails at large volume.
    let b = ChernRecord::new(q(1), qvec(&[1]), vec![qr(5, 2)], q(-20));
    let p = ChargePair::new(o.clone(), b.clone(), &g).unwrap();
    let exact = p.pairing() * im_product_exact(&p, &qvec(&[0]), &qvec(&[30]), &g);
    assert!(exact < q(0));
    assert!(!bps_bound_condition(&p, &[0.0], &[30.0], &g).unwrap().holds);
    assert_eq!(j_closure(&[o.clone(), b.clone()], &[0.0], &[30.0], &g, 4).unwrap(), vec![o, b]);
}

#[test]
fn guess_bound_values() {
    let g = ThreefoldData::quintic();
    let tq = tangent_quintic(&g).unwrap();
    let e = guess_bound(&tq, &[1.0], &g, &q(0)).unwrap();
    let zeta3 = 1.202_056_903_159_594_2;
    let first = 2.0 * zeta3 * 200.0 / (2.0 * std::f64::consts::PI).powi(3) * 3.0 * (50f64 / 3.0).sqrt() * 5f64.powf(-1.0 / 6.0);
    let second = 2f64.powf(2.5) / 3.0 * 3.0 * (35.0 / 12.0 * 5.0f64).powf(1.5) * 5f64.powf(-0.5);
    let lhs = e.lhs.unwrap().to_f64();
    assert!((lhs - (first + second)).abs() < 1e-10 * lhs);
    let mut prev = lhs;
    for c in [1, 2, 5, 10] {
        let v = guess_bound(&tq, &[1.0], &g, &q(c)).unwrap().lhs.unwrap().to_f64();
        assert!(v > prev);
        prev = v;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn swap_symmetry(a in record(2), b in record(2), bb in q_vec(2), j in ample_q(2)) {
        let g = ThreefoldData::elliptic_p2();
        let p = ChargePair::new(a, b, &g).unwrap();
        let s = p.swapped();
        prop_assert_eq!(s.pairing(), &charge_pairing(s.a(), s.b(), &g));
        let (bf, jf) = (vec_to_f64(&bb), vec_to_f64(&j));
        let x = bps_bound_condition(&p, &bf, &jf, &g).unwrap();
        let y = bps_bound_condition(&s, &bf, &jf, &g).unwrap();
        prop_assert!((x.lhs - y.lhs).abs() <= 1e-9 * x.lhs.abs().max(1.0));
        if let (Ok(t1), Ok(t2)) = (tau_vs(&p, &bf, &jf, &g), tau_vs(&s, &bf, &jf, &g)) {
            prop_assert!((t1 - t2).abs() <= 1e-9 * t1.abs().max(1.0));
        }
    }

    #[test]
    fn joint_rescale_keeps_verdict(a in record(2), b in record(2), n in 2i64..5, j in ample_q(2)) {
        let g = ThreefoldData::elliptic_p2();
        let jf = vec_to_f64(&j);
        let p = ChargePair::new(a.clone(), b.clone(), &g).unwrap();
        let pn = ChargePair::new(a.rescale(&q(n)), b.rescale(&q(n)), &g).unwrap();
        let exact = p.pairing() * im_product_exact(&p, &[q(0), q(0)], &j, &g);
        let x = bps_bound_condition(&p, &[0.0, 0.0], &jf, &g).unwrap();
        let y = bps_bound_condition(&pn, &[0.0, 0.0], &jf, &g).unwrap();
        // Exact zeros may land on either side in floating point.
        if exact != q(0) {
            prop_assert_eq!(x.holds, y.holds);
            prop_assert_eq!(x.holds, exact > q(0));
        }
    }

    #[test]
    fn extension_closed_form(p in 2i64..20, k in 1i64..19, j in ample_q(2)) {
        prop_assume!(k < p);
        let g = ThreefoldData::elliptic_p2();
        let e = extension_chern(p, k, &j, &g).unwrap();
        prop_assert_eq!(&e.rank, &q(p - k));
        prop_assert!(e.c1.iter().all(|x| *x == q(0)));
    }
}
