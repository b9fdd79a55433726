//! Shared generators for the integration suites.
#![allow(dead_code)]

use attrkit::chern::{mukai, twist};
use num_complex::Complex;
use attrkit::rational::{q, qr, to_f64};
use attrkit::{ChernRecord, EvenClass, ThreefoldData, Q};
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

pub fn small_q() -> impl Strategy<Value = Q> {
    (-12i64..=12, 1i64..=4).prop_map(|(n, d)| qr(n, d))
}

pub fn q_vec(n: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec(small_q(), n)
}

pub fn int_vec(n: usize, lo: i64, hi: i64) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((lo..=hi).prop_map(q), n)
}

pub fn even_class(b2: usize) -> impl Strategy<Value = EvenClass<Q>> {
    (small_q(), q_vec(b2), q_vec(b2), small_q()).prop_map(|(d0, d2, d4, d6)| EvenClass { d0, d2, d4, d6 })
}

pub fn unit_class(b2: usize) -> impl Strategy<Value = EvenClass<Q>> {
    (q_vec(b2), q_vec(b2), small_q()).prop_map(move |(d2, d4, d6)| EvenClass { d0: q(1), d2, d4, d6 })
}

pub fn record(b2: usize) -> impl Strategy<Value = ChernRecord> {
    (-4i64..=6, int_vec(b2, -3, 3), q_vec(b2), small_q()).prop_map(|(r, c1, ch2, ch3)| ChernRecord::new(q(r), c1, ch2, ch3))
}

pub fn positive_record(b2: usize) -> impl Strategy<Value = ChernRecord> {
    (1i64..=6, int_vec(b2, -3, 3), q_vec(b2), small_q()).prop_map(|(r, c1, ch2, ch3)| ChernRecord::new(q(r), c1, ch2, ch3))
}

/// Strictly positive coordinates: ample on both presets.
pub fn ample_q(b2: usize) -> impl Strategy<Value = Vec<Q>> {
    prop::collection::vec((1i64..=12, 1i64..=4).prop_map(|(n, d)| qr(n, d)), b2)
}

pub fn geometries() -> Vec<ThreefoldData> {
    ThreefoldData::preset_names().iter().map(|n| ThreefoldData::preset(n).unwrap()).collect()
}

/// Deterministic stream of values from a strategy.
pub fn sample<S: Strategy>(s: S, n: usize, seed_offset: usize) -> Vec<S::Value> {
    let mut runner = TestRunner::deterministic();
    for _ in 0..seed_offset {
        let _ = s.new_tree(&mut runner);
    }
    (0..n).map(|_| s.new_tree(&mut runner).unwrap().current()).collect()
}

/// A record built from a prescribed attractor: `H̃ = h`, `s = q/√2`, rank
/// `r`, then twisted by `c1/r`.
#[derive(Debug, Clone)]
pub struct Forward {
    pub record: ChernRecord,
    pub h: Vec<Q>,
    pub qs: Q,
    pub r: i64,
    pub c1: Vec<Q>,
}

impl Forward {
    pub fn build(h: Vec<Q>, qs: Q, r: i64, c1: Vec<Q>, g: &ThreefoldData) -> Self {
        let rq = q(r);
        let hh = g.product_pairing(&h, &h);
        let ch2: Vec<Q> = hh.iter().zip(g.c2_pair()).map(|(x, m)| -&rq * x - &rq * m / q(24)).collect();
        let ch3 = q(2) * &rq / q(3) * &qs * g.cube(&h);
        let untwisted = ChernRecord::new(rq.clone(), vec![q(0); h.len()], ch2, ch3);
        let shift: Vec<Q> = c1.iter().map(|x| x / &rq).collect();
        let record = twist(&untwisted, &shift, g).unwrap();
        Self { record, h, qs, r, c1 }
    }

    pub fn s(&self) -> f64 {
        to_f64(&self.qs) / 2f64.sqrt()
    }

    pub fn xi(&self) -> f64 {
        let s = self.s();
        s / (1.0 - s * s).sqrt()
    }

    pub fn lambda(&self) -> f64 {
        let xi = self.xi();
        (2.0 / (1.0 + xi * xi)).sqrt()
    }

    pub fn j(&self) -> Vec<f64> {
        self.h.iter().map(|x| self.lambda() * to_f64(x)).collect()
    }

    pub fn b(&self) -> Vec<f64> {
        let rq = q(self.r);
        self.c1.iter().zip(self.j()).map(|(c, y)| to_f64(&(c / &rq)) - self.xi() * y).collect()
    }
}

/// `(h, q, r, c1)` with `h` ample, `|q| ≤ 6/5 < √2`.
pub fn forward_inputs(b2: usize) -> impl Strategy<Value = (Vec<Q>, Q, i64, Vec<Q>)> {
    (ample_q(b2), (-6i64..=6).prop_map(|n| qr(n, 5)), 1i64..=5, int_vec(b2, -3, 3))
}

pub type Cq = Complex<Q>;

/// `∫ e^{-(B+iJ)} γ` evaluated in exact complex rationals.
pub fn central_charge_exact(c: &ChernRecord, b: &[Q], j: &[Q], g: &ThreefoldData) -> Cq {
    let gamma = mukai(c, g).0;
    let tau: Vec<Cq> = b.iter().zip(j).map(|(x, y)| Cq::new(x.clone(), y.clone())).collect();
    let lift = |v: &[Q]| -> Vec<Cq> { v.iter().map(|x| Cq::new(x.clone(), q(0))).collect() };
    let dotc = |u: &[Cq], v: &[Cq]| u.iter().zip(v).fold(Cq::new(q(0), q(0)), |acc, (a, b)| acc + a * b);
    let n = g.b2();
    let tri = |u: &[Cq], v: &[Cq], w: &[Cq]| {
        let mut s = Cq::new(q(0), q(0));
        for a in 0..n {
            for bb in 0..n {
                for cc in 0..n {
                    let d = Cq::new(g.d(a, bb, cc).clone(), q(0));
                    s += d * &u[a] * &v[bb] * &w[cc];
                }
            }
        }
        s
    };
    let g0 = Cq::new(gamma.d0.clone(), q(0));
    let g2 = lift(&gamma.d2);
    let g4 = lift(&gamma.d4);
    let g6 = Cq::new(gamma.d6.clone(), q(0));
    let half = Cq::new(qr(1, 2), q(0));
    let sixth = Cq::new(qr(1, 6), q(0));
    let cube = tri(&tau, &tau, &tau);
    let sq_g2 = tri(&tau, &tau, &g2);
    g6 - dotc(&tau, &g4) + half * sq_g2 - sixth * cube * g0
}

/// `(r, c1 lift, c2, D)` for a bundle on an ample divisor of a two-parameter
/// model, with `c2` spread across the discriminant threshold.
pub fn surface_inputs() -> impl Strategy<Value = (i64, Vec<Q>, Q, Vec<Q>)> {
    (1i64..=4, int_vec(2, -3, 3), (-40i64..400).prop_map(|n| qr(n, 2)), int_vec(2, 1, 3))
}
