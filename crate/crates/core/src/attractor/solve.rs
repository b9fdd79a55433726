use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use super::newton::solve_h_tilde;
use super::numeric::max_abs;
use crate::chern::{mukai, twist, ChernRecord};
use crate::error::Error;
use crate::geometry::{ConeStatus, EvenClass, ThreefoldData};
use crate::pushforward::{push_mukai, SurfaceBundleRecord};
use crate::rational::{q, serde_opt_q, to_f64, vec_to_f64, Q};

/// `|s| = 1` within this is the boundary of the attractor set.
pub const SATURATION_TOL: f64 = 1e-12;

/// Largest accepted residual of `γ - Re(C̄ e^{B+iJ})`, relative to
/// `max(1, |γ|)`.
pub const RESIDUAL_LIMIT: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    PositiveRank,
    RankZero,
}

/// Position of a charge relative to the attractor set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AttVerdict {
    Interior,
    Boundary,
    Outside,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AttractorSolution {
    pub branch: Branch,
    #[serde(rename = "H_tilde", skip_serializing_if = "Option::is_none")]
    pub h_tilde: Option<Vec<f64>>,
    pub xi: f64,
    /// `ξ²` when it is rational.
    #[serde(with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub xi_sq: Option<Q>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
    #[serde(rename = "C_bar", serialize_with = "complex_pair")]
    pub c_bar: Complex64,
    pub residual: f64,
    pub cone_status: ConeStatus,
    pub large_volume: bool,
}

fn complex_pair<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    [z.re, z.im].serialize(s)
}

impl AttractorSolution {
    pub fn verdict(&self) -> AttVerdict {
        match self.cone_status {
            ConeStatus::Interior => AttVerdict::Interior,
            ConeStatus::Boundary => AttVerdict::Boundary,
            ConeStatus::Outside => AttVerdict::Outside,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AttractorError {
    #[error(transparent)]
    Input(#[from] Error),

    #[error("no real H̃ solves the quadratic system")]
    NoRealHTilde { target: Vec<f64> },

    #[error("H̃ lies outside the Kähler cone (margin {margin:e})")]
    HTildeOutsideCone { h_tilde: Vec<f64>, margin: f64 },

    #[error("c3 bound violated: |c3| = {c3} > {bound}")]
    C3BoundViolated { c3: f64, bound: f64, s: f64 },

    #[error("c3 bound saturated: |c3| = {c3} = {bound}")]
    C3Saturated { c3: f64, bound: f64, s: f64 },

    #[error("surface discriminant {discriminant} is negative")]
    DiscriminantNegative { discriminant: Q },

    #[error("surface discriminant vanishes")]
    DiscriminantZero,

    #[error("attractor residual {residual:e} too large")]
    Inaccurate { residual: f64 },
}

impl AttractorError {
    /// `None` for input errors and numerical failures.
    pub fn verdict(&self) -> Option<AttVerdict> {
        match self {
            Self::Input(_) | Self::Inaccurate { .. } => None,
            Self::C3Saturated { .. } | Self::DiscriminantZero => Some(AttVerdict::Boundary),
            _ => Some(AttVerdict::Outside),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Self::Input(_) => "input error",
            Self::NoRealHTilde { .. } => "no real H̃",
            Self::HTildeOutsideCone { .. } => "H̃ outside cone",
            Self::C3BoundViolated { .. } => "c3 bound violated",
            Self::C3Saturated { .. } => "boundary of ATT",
            Self::DiscriminantNegative { .. } => "not in ATT (rank 0)",
            Self::DiscriminantZero => "boundary of ATT (rank 0)",
            Self::Inaccurate { .. } => "inaccurate solution",
        }
    }
}

/// Data of the `c1 = 0` twist of a positive-rank record.
pub(crate) struct Normalized {
    pub rank: Q,
    /// `c1 / r`.
    pub shift: Vec<Q>,
    /// Pairing vector of the `H̃²` target.
    pub target: Vec<Q>,
    /// `c3` of the twisted record.
    pub c3: Q,
}

pub(crate) fn normalize(c: &ChernRecord, g: &ThreefoldData) -> Result<Normalized, AttractorError> {
    c.check(g)?;
    if !c.rank.is_positive() {
        return Err(Error::Rank("positive").into());
    }
    let shift: Vec<Q> = c.c1.iter().map(|x| x / &c.rank).collect();
    let minus: Vec<Q> = shift.iter().map(|x| -x).collect();
    let t = twist(c, &minus, g)?;
    debug_assert!(t.c1.iter().all(Zero::is_zero));
    let target = t
        .ch2
        .iter()
        .zip(g.c2_pair())
        .map(|(ch2, c2)| -ch2 / &c.rank - c2 / q(24))
        .collect();
    Ok(Normalized { rank: c.rank.clone(), shift, target, c3: q(2) * &t.ch3 })
}

pub(crate) struct HTilde {
    pub h: Vec<f64>,
    pub cube: f64,
    pub status: ConeStatus,
}

pub(crate) fn h_tilde_in_cone(target: &[Q], g: &ThreefoldData) -> Result<HTilde, AttractorError> {
    let t = vec_to_f64(target);
    let roots = solve_h_tilde(&t, g);
    let Some(best) = roots.first() else {
        return Err(AttractorError::NoRealHTilde { target: t });
    };
    if !best.cone.in_closure() {
        return Err(AttractorError::HTildeOutsideCone { h_tilde: best.h.clone(), margin: best.cone.margin });
    }
    Ok(HTilde { cube: g.cube(&best.h), h: best.h.clone(), status: best.cone.status })
}

/// `(2^{5/2}/3) r H̃³`.
pub(crate) fn c3_limit(rank: &Q, h_cube: f64) -> f64 {
    2f64.powf(2.5) / 3.0 * to_f64(rank) * h_cube
}

fn residual(gamma: &EvenClass<Q>, c_bar: Complex64, b: &[f64], j: &[f64], g: &ThreefoldData) -> f64 {
    let tau: Vec<Complex64> = b.iter().zip(j).map(|(&x, &y)| Complex64::new(x, y)).collect();
    let model = g.exp2(&tau).scale(&c_bar).map(|z| z.re);
    let gf = gamma.to_f64();
    gf.max_abs_diff(&model, |x| x.abs())
}

fn gamma_scale(gamma: &EvenClass<Q>) -> f64 {
    let f = gamma.to_f64();
    let mut all = vec![f.d0, f.d6];
    all.extend(&f.d2);
    all.extend(&f.d4);
    max_abs(&all).max(1.0)
}

fn finish(
    gamma: &EvenClass<Q>,
    mut sol: AttractorSolution,
    g: &ThreefoldData,
) -> Result<AttractorSolution, AttractorError> {
    sol.residual = residual(gamma, sol.c_bar, &sol.b, &sol.j, g);
    if sol.residual > RESIDUAL_LIMIT * gamma_scale(gamma) {
        return Err(AttractorError::Inaccurate { residual: sol.residual });
    }
    sol.large_volume = sol.j.iter().all(|&x| x > 1.0);
    Ok(sol)
}

/// Attractor point of a positive-rank record.
pub fn solve_positive_rank(c: &ChernRecord, g: &ThreefoldData) -> Result<AttractorSolution, AttractorError> {
    let n = normalize(c, g)?;
    let ht = h_tilde_in_cone(&n.target, g)?;
    let bound = c3_limit(&n.rank, ht.cube);
    let per_rank = to_f64(&(&n.c3 / &n.rank));
    let s = 3.0 * per_rank / (2f64.powf(2.5) * ht.cube);
    let c3 = to_f64(&n.c3.abs());
    if (s.abs() - 1.0).abs() <= SATURATION_TOL {
        return Err(AttractorError::C3Saturated { c3, bound, s });
    }
    if s.abs() > 1.0 {
        return Err(AttractorError::C3BoundViolated { c3, bound, s });
    }
    let xi = s / (1.0 - s * s).sqrt();
    let lambda = (2.0 / (1.0 + xi * xi)).sqrt();
    let j: Vec<f64> = ht.h.iter().map(|x| lambda * x).collect();
    let b: Vec<f64> = n.shift.iter().zip(&j).map(|(m, y)| to_f64(m) - xi * y).collect();
    let r = to_f64(&n.rank);
    let sol = AttractorSolution {
        branch: Branch::PositiveRank,
        h_tilde: Some(ht.h),
        xi,
        xi_sq: None,
        lambda: Some(lambda),
        b,
        j,
        c_bar: Complex64::new(r, -r * xi),
        residual: 0.0,
        cone_status: ht.status,
        large_volume: false,
    };
    finish(&mukai(c, g).0, sol, g)
}

/// Attractor point of `i_*W` for `W` on the divisor `D`, with `ξ > 0`.
pub fn solve_rank_zero(
    w: &SurfaceBundleRecord,
    divisor: &[Q],
    g: &ThreefoldData,
) -> Result<AttractorSolution, AttractorError> {
    solve_rank_zero_signed(w, divisor, g, true)
}

/// Rank-zero solution with a chosen sign of `ξ`. The charge fixes only `ξ²`;
/// the model is `C̄ = -i r ξ`, `J = D/ξ`, `B = c1/r - D/2`, and `J` lies in
/// the cone only for `ξ > 0`.
pub fn solve_rank_zero_signed(
    w: &SurfaceBundleRecord,
    divisor: &[Q],
    g: &ThreefoldData,
    positive: bool,
) -> Result<AttractorSolution, AttractorError> {
    g.require_ample_q(divisor)?;
    w.validate(divisor, g)?;
    let lift = w.c1_lift.as_ref().ok_or(Error::MissingLift)?;
    let gamma = push_mukai(w, divisor, g)?.0;
    let r = &w.rank;
    let b: Vec<Q> = lift.iter().zip(divisor).map(|(l, d)| l / r - d / q(2)).collect();
    // Degree six: r ξ (3B²J - J³)/6 = γ₆ with J = D/ξ.
    let k = q(3) * g.triple(&b, &b, divisor) - q(6) * &gamma.d6 / r;
    let discriminant = r * r * &k / q(3);
    if discriminant.is_zero() {
        return Err(AttractorError::DiscriminantZero);
    }
    if discriminant.is_negative() {
        return Err(AttractorError::DiscriminantNegative { discriminant });
    }
    let xi_sq = g.cube(divisor) / &k;
    let xi = to_f64(&xi_sq).sqrt() * if positive { 1.0 } else { -1.0 };
    let j: Vec<f64> = vec_to_f64(divisor).iter().map(|d| d / xi).collect();
    let rf = to_f64(r);
    let sol = AttractorSolution {
        branch: Branch::RankZero,
        h_tilde: None,
        xi,
        xi_sq: Some(xi_sq),
        lambda: None,
        b: vec_to_f64(&b),
        cone_status: g.cone_check(&j).status,
        j,
        c_bar: Complex64::new(0.0, -rf * xi),
        residual: 0.0,
        large_volume: false,
    };
    finish(&gamma, sol, g)
}
