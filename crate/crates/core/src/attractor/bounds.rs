use num_traits::Signed;

use super::solve::{c3_limit, h_tilde_in_cone, normalize, AttractorError, SATURATION_TOL};
use crate::chern::ChernRecord;
use crate::error::{Error, Result};
use crate::geometry::{dot, ConeStatus, ThreefoldData};
use crate::pushforward::{divisor_chern, surface_discriminant, SurfaceBundleRecord};
use crate::rational::{q, to_f64, vec_to_f64, Q};
use crate::report::{BoundEntry, BoundsReport, EntryStatus, Relation, Value};

fn saturation_tol(bound: f64) -> f64 {
    SATURATION_TOL * bound.abs().max(1.0)
}

/// `(2^{5/2}/3) r H̃³ ≥ |c3|` for the `c1 = 0` twist of `c`.
pub fn c3_bound(c: &ChernRecord, g: &ThreefoldData) -> std::result::Result<BoundEntry, AttractorError> {
    let n = normalize(c, g)?;
    let ht = h_tilde_in_cone(&n.target, g)?;
    let bound = c3_limit(&n.rank, ht.cube);
    Ok(BoundEntry::approx_tol(
        "c3",
        "(2^{5/2}/3) r H̃³ >= |c3|",
        bound,
        to_f64(&n.c3.abs()),
        Relation::Ge,
        saturation_tol(bound),
    ))
}

/// The same bound with `H̃` replaced by an ample `w`:
/// `(2^{5/2}/3) r ((H̃²·w)^{3/2} / (w³)^{1/2}) ≥ |c3|`.
pub fn c3_bound_ample(c: &ChernRecord, w: &[f64], g: &ThreefoldData) -> std::result::Result<BoundEntry, AttractorError> {
    let n = normalize(c, g)?;
    g.require_ample(w)?;
    let id = "c3-ample";
    let desc = "(2^{5/2}/3) r (H̃²·w)^{3/2} (w³)^{-1/2} >= |c3|";
    let radicand = dot(&vec_to_f64(&n.target), w);
    if radicand < 0.0 {
        return Ok(BoundEntry::not_applicable(id, desc));
    }
    let bound = c3_limit(&n.rank, radicand.powf(1.5) / g.cube(w).sqrt());
    Ok(BoundEntry::approx_tol(id, desc, bound, to_f64(&n.c3.abs()), Relation::Ge, saturation_tol(bound)))
}

/// Existence criterion for stable reflexive sheaves of rank `r > 1`:
/// an ample `H̃` with `H̃² = (2r c2 - (r-1) c1² - (r²/12) c2(M)) / (2r²)`,
/// and `|c3|` of the `c1 = 0` twist strictly below `(2^{5/2}/3) r H̃³`.
pub fn threefold_existence_check(c: &ChernRecord, g: &ThreefoldData) -> Result<BoundsReport> {
    c.check(g)?;
    if c.rank <= q(1) {
        return Err(Error::Rank("greater than 1"));
    }
    let r = &c.rank;
    let c1sq = g.product_pairing(&c.c1, &c.c1);
    let target: Vec<Q> = c
        .c2(g)
        .iter()
        .zip(&c1sq)
        .zip(g.c2_pair())
        .map(|((c2, s), m)| (q(2) * r * c2 - (r - q(1)) * s - r * r * m / q(12)) / (q(2) * r * r))
        .collect();
    // c3 of the twist is four times (c1³ + 3r(r ch3 - ch2·c1)) / (6r²).
    let cubic = (g.cube(&c.c1) + q(3) * r * (r * &c.ch3 - dot(&c.ch2, &c.c1))) / (q(6) * r * r);
    let c3 = to_f64(&(q(4) * cubic).abs());

    let mut report = BoundsReport::default();
    let a_id = "ample-h-tilde";
    let a_desc = "H̃² target has a solution H̃ in the Kähler cone";
    let b_id = "c3-strict";
    let b_desc = "(2^{5/2}/3) r H̃³ > |c3|";
    match h_tilde_in_cone(&target, g) {
        Ok(ht) => {
            let margin = g.cone_check(&ht.h).margin;
            let mut a = BoundEntry::approx(a_id, a_desc, margin, 0.0, Relation::Gt);
            if ht.status == ConeStatus::Boundary {
                a.status = EntryStatus::Boundary;
                a.satisfied = false;
            }
            report.push(a);
            let bound = c3_limit(r, ht.cube);
            report.push(BoundEntry::approx_tol(b_id, b_desc, bound, c3, Relation::Gt, saturation_tol(bound)));
        }
        Err(e) => {
            let mut a = BoundEntry::not_applicable(a_id, a_desc);
            a.status = EntryStatus::Violated;
            if let AttractorError::HTildeOutsideCone { margin, .. } = e {
                a.lhs = Some(Value::Approx(margin));
                a.rhs = Some(Value::Approx(0.0));
                a.margin = Some(Value::Approx(margin));
                a.relation = Relation::Gt;
            }
            report.push(a);
            report.push(BoundEntry::not_applicable(b_id, b_desc));
            report.notes.push(e.label().to_string());
        }
    }
    Ok(report)
}

/// Existence criterion for `i_*W`:
/// `2r c2 - (r-1) c1² - (r²/12) c2(D) > 0` on an ample divisor.
pub fn surface_existence_check(w: &SurfaceBundleRecord, divisor: &[Q], g: &ThreefoldData) -> Result<BoundsReport> {
    g.require_ample_q(divisor)?;
    w.validate(divisor, g)?;
    let s = divisor_chern(divisor, g)?;
    let mut report = BoundsReport::default();
    report.push(BoundEntry::exact(
        "surface-discriminant",
        "2r c2 - (r-1) c1² - (r²/12) c2(D) > 0",
        surface_discriminant(w, &s),
        q(0),
        Relation::Gt,
    ));
    Ok(report)
}
