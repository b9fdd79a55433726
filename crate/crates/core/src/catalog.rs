//! Named constructions and index bounds for bundles on surfaces.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::attractor::c3_bound;
use crate::chern::{bogomolov_classes, ChernRecord};
use crate::error::{Error, Result};
use crate::geometry::{dot, EvenClass, ThreefoldData};
use crate::rational::{q, qvec, serde_opt_q, serde_q, Q};
use crate::report::{BoundEntry, BoundsReport, EntryStatus, Relation};

fn require_quintic(g: &ThreefoldData) -> Result<()> {
    let p = ThreefoldData::quintic();
    if g.b2() == 1 && g.intersect_entries() == p.intersect_entries() && g.c2_pair() == p.c2_pair() && g.euler() == p.euler() {
        Ok(())
    } else {
        Err(Error::Geometry(format!("construction needs the quintic, got {:?}", g.name())))
    }
}

/// `ch(TQ) = 3 - 10H² - 20H³`: rank 3, `ch2·H = -50`, `∫ch3 = -100`, `c3 = -200`.
pub fn tangent_quintic(g: &ThreefoldData) -> Result<ChernRecord> {
    require_quintic(g)?;
    let h3 = g.cube(&qvec(&[1]));
    Ok(ChernRecord::new(q(3), qvec(&[0]), vec![q(-10) * &h3], q(-20) * &h3))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonadBundle {
    pub record: ChernRecord,
    pub r: i64,
    pub n: i64,
    /// Stability is only known for `n` large enough.
    pub requires_large_n: bool,
}

/// Kernel of a generic `O^{r+1} → O(n)`-type monad on the ray `h`:
/// `c1 = 0`, `c2 = (r/2)(2n+1-r) h²`,
/// `c3 = (-r(r-1)(r-2)/6 + (r/2)(2(n+1)² - r(2n-r+3))) h³`.
pub fn monad_chern(r: i64, n: i64, h: &[Q], g: &ThreefoldData) -> Result<MonadBundle> {
    g.check_dim(h.len())?;
    if r < 3 {
        return Err(Error::Rank("at least 3 for the monad"));
    }
    let (rq, nq) = (q(r), q(n));
    let c2_coeff = &rq / q(2) * (q(2) * &nq + q(1) - &rq);
    let c3_coeff = -(&rq * (&rq - q(1)) * (&rq - q(2))) / q(6)
        + &rq / q(2) * (q(2) * (&nq + q(1)) * (&nq + q(1)) - &rq * (q(2) * &nq - &rq + q(3)));
    let c2 = g.product_pairing(h, h).iter().map(|x| &c2_coeff * x).collect();
    let c3 = c3_coeff * g.cube(h);
    let record = ChernRecord::from_chern_classes(rq, vec![Q::zero(); h.len()], c2, c3, g)?;
    Ok(MonadBundle { record, r, n, requires_large_n: true })
}

/// Smallest `n ≤ n_max` whose monad bundle violates the `c3` bound, with the
/// failing entry.
pub fn smallest_violating_monad(r: i64, h: &[Q], g: &ThreefoldData, n_max: i64) -> Result<Option<(i64, BoundEntry)>> {
    for n in 1..=n_max {
        let m = monad_chern(r, n, h, g)?;
        if let Ok(e) = c3_bound(&m.record, g) {
            if e.status == EntryStatus::Violated {
                return Ok(Some((n, e)));
            }
        }
    }
    Ok(None)
}

/// Elliptic fibration `π: M → B` with section `σ`, in coordinates of a
/// basis `ℓ_i` of `H²(B)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FibrationData {
    /// Pairing vector (on `M`) of `σ·π*ℓ_i`, one row per base class.
    #[serde(with = "crate::rational::serde_qmat")]
    pub sigma_pi_pair: Vec<Vec<Q>>,
    /// Pairing vector of the fiber class `F`.
    #[serde(with = "crate::rational::serde_qvec")]
    pub fiber_pair: Vec<Q>,
    /// `c1(B)` in the base basis.
    #[serde(with = "crate::rational::serde_qvec")]
    pub c1_base: Vec<Q>,
    /// Linear forms that are positive exactly on ample base classes.
    #[serde(with = "crate::rational::serde_qmat")]
    pub ample_tests: Vec<Vec<Q>>,
    /// Linear forms that are nonnegative exactly on effective base classes.
    #[serde(with = "crate::rational::serde_qmat")]
    pub effective_tests: Vec<Vec<Q>>,
}

impl FibrationData {
    /// The fibration of the `elliptic-p2` preset over `P²`.
    pub fn elliptic_p2() -> Self {
        Self {
            sigma_pi_pair: vec![qvec(&[1, 0])],
            fiber_pair: qvec(&[0, 1]),
            c1_base: qvec(&[3]),
            ample_tests: vec![qvec(&[1])],
            effective_tests: vec![qvec(&[1])],
        }
    }

    fn sigma_times(&self, eta: &[Q]) -> Vec<Q> {
        let b2 = self.fiber_pair.len();
        (0..b2)
            .map(|a| eta.iter().zip(&self.sigma_pi_pair).map(|(e, row)| e * &row[a]).sum())
            .collect()
    }

    fn check(&self, g: &ThreefoldData) -> Result<()> {
        g.check_dim(self.fiber_pair.len())?;
        for row in &self.sigma_pi_pair {
            g.check_dim(row.len())?;
        }
        let k = self.sigma_pi_pair.len();
        if self.c1_base.len() != k
            || self.ample_tests.iter().chain(&self.effective_tests).any(|t| t.len() != k)
        {
            return Err(Error::Dimension { expected: k, found: self.c1_base.len() });
        }
        Ok(())
    }

    /// `m_M` in `c2(M) = 12 σ π*c1(B) + m_M F`, if the decomposition holds.
    pub fn ambient_fiber_number(&self, g: &ThreefoldData) -> Result<Q> {
        self.check(g)?;
        let twelve: Vec<Q> = self.c1_base.iter().map(|x| q(12) * x).collect();
        let rest: Vec<Q> = g.c2_pair().iter().zip(self.sigma_times(&twelve)).map(|(a, b)| a - b).collect();
        let pivot = self
            .fiber_pair
            .iter()
            .position(|x| !x.is_zero())
            .ok_or_else(|| Error::Geometry("fiber class pairs to zero".into()))?;
        let m = &rest[pivot] / &self.fiber_pair[pivot];
        if rest.iter().zip(&self.fiber_pair).all(|(x, f)| *x == &m * f) {
            Ok(m)
        } else {
            Err(Error::Inconsistent("c2(M) is not 12σc1(B) plus a fiber multiple".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralC2 {
    #[serde(with = "crate::rational::serde_qvec")]
    pub c2_pair: Vec<Q>,
    pub eta_ample: bool,
    /// `η - r c1(B)` effective.
    pub eta_dominates: bool,
}

/// `c2(V) = σ π*η + m_V F` of a spectral-cover bundle.
pub fn spectral_c2(r: i64, eta: &[Q], m_v: i64, fib: &FibrationData, g: &ThreefoldData) -> Result<SpectralC2> {
    fib.check(g)?;
    if eta.len() != fib.c1_base.len() {
        return Err(Error::Dimension { expected: fib.c1_base.len(), found: eta.len() });
    }
    let c2_pair = fib
        .sigma_times(eta)
        .iter()
        .zip(&fib.fiber_pair)
        .map(|(s, f)| s + q(m_v) * f)
        .collect();
    let eta_ample = fib.ample_tests.iter().all(|t| dot(t, eta).is_positive());
    let rest: Vec<Q> = eta.iter().zip(&fib.c1_base).map(|(e, c)| e - q(r) * c).collect();
    let eta_dominates = fib.effective_tests.iter().all(|t| !dot(t, &rest).is_negative());
    Ok(SpectralC2 { c2_pair, eta_ample, eta_dominates })
}

/// Rank-3 kernel of `O^4 → O(1)` on the quintic, `ch = 4 - e^H`
/// (`c1 = -H`, `c2 = H²`, `c3 = -H³`), with its classical and improved
/// Bogomolov entries.
pub fn jardim_record(g: &ThreefoldData) -> Result<(ChernRecord, BoundsReport)> {
    require_quintic(g)?;
    let h = qvec(&[1]);
    let record = ChernRecord::from_even_class(&(EvenClass::scalar(1, q(4)) - g.exp2(&h)));
    let r = &record.rank;
    let c2h = dot(&record.c2(g), &h);
    let c1sq_h = g.triple(&record.c1, &record.c1, &h);
    let lhs = q(2) * r * c2h - (r - q(1)) * c1sq_h;
    let rhs = r * r / q(12) * dot(g.c2_pair(), &h);
    let mut report = BoundsReport::default();
    report.push(BoundEntry::exact(
        "bogomolov",
        "(2r c2 - (r-1) c1²)·H >= 0",
        lhs.clone(),
        q(0),
        Relation::Ge,
    ));
    report.push(BoundEntry::exact(
        "improved-bogomolov",
        "(2r c2 - (r-1) c1²)·H >= (r²/12) c2(M)·H",
        lhs,
        rhs,
        Relation::Ge,
    ));
    report.push(BoundEntry::exact(
        "discriminant",
        "Δ2·H >= 0",
        bogomolov_classes(&record, &h, g)?,
        q(0),
        Relation::Ge,
    ));
    Ok((record, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceKind {
    K3,
    Fano,
    AmpleCanonical,
    General,
}

/// Chern numbers of a rank `r` bundle on a smooth surface `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceBoundInput {
    pub r: i64,
    #[serde(with = "serde_q")]
    pub c1_sq: Q,
    #[serde(with = "serde_q")]
    pub c2_num: Q,
    /// `∫c2(D)`; fixed to 24 for K3.
    #[serde(rename = "c2D", default, with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub c2d: Option<Q>,
    /// `∫c1(D)²`; fixed to 0 for K3.
    #[serde(rename = "c1D_sq", default, with = "serde_opt_q", skip_serializing_if = "Option::is_none")]
    pub c1d_sq: Option<Q>,
    pub surface_kind: SurfaceKind,
}

impl SurfaceBoundInput {
    pub fn k3(r: i64, c1_sq: Q, c2_num: Q) -> Self {
        Self { r, c1_sq, c2_num, c2d: Some(q(24)), c1d_sq: Some(q(0)), surface_kind: SurfaceKind::K3 }
    }

    /// A bundle on `P²`: `c2(D) = 3`, `c1(D)² = 9`.
    pub fn projective_plane(r: i64, c1_sq: Q, c2_num: Q) -> Self {
        Self { r, c1_sq, c2_num, c2d: Some(q(3)), c1d_sq: Some(q(9)), surface_kind: SurfaceKind::Fano }
    }

    /// `(c2(D), c1(D)²)` after filling and checking the surface constants.
    pub fn surface_numbers(&self) -> Result<(Q, Q)> {
        if self.r < 2 {
            return Err(Error::Rank("at least 2 on a surface"));
        }
        match self.surface_kind {
            SurfaceKind::K3 => {
                let c2d = self.c2d.clone().unwrap_or_else(|| q(24));
                let c1d = self.c1d_sq.clone().unwrap_or_else(|| q(0));
                if c2d != q(24) || !c1d.is_zero() {
                    return Err(Error::Inconsistent("a K3 surface has c2 = 24 and c1² = 0".into()));
                }
                Ok((c2d, c1d))
            }
            kind => {
                let (Some(c2d), Some(c1d)) = (self.c2d.clone(), self.c1d_sq.clone()) else {
                    return Err(Error::Inconsistent("c2D and c1D_sq are required for this surface kind".into()));
                };
                if kind == SurfaceKind::Fano && !c1d.is_positive() {
                    return Err(Error::Inconsistent("a Fano surface has c1² > 0".into()));
                }
                Ok((c2d, c1d))
            }
        }
    }

    /// `2r c2 - (r-1) c1² - (r²/12) c2(D)`.
    fn discriminant(&self, c2d: &Q) -> Q {
        let r = q(self.r);
        q(2) * &r * &self.c2_num - (&r - q(1)) * &self.c1_sq - &r * &r / q(12) * c2d
    }
}

/// `2r c2 - (r-1) c1² - 2r² ≥ -2` on a K3 surface.
pub fn yoshioka_check(v: &SurfaceBoundInput) -> Result<BoundEntry> {
    if v.surface_kind != SurfaceKind::K3 {
        return Err(Error::Inconsistent("the Yoshioka bound is for K3 surfaces".into()));
    }
    let (c2d, _) = v.surface_numbers()?;
    Ok(BoundEntry::exact(
        "yoshioka",
        "2r c2 - (r-1) c1² - (r²/12) c2(K3) >= -2",
        v.discriminant(&c2d),
        q(-2),
        Relation::Ge,
    ))
}

/// Index bounds that apply to `v`'s surface kind. Entries for `c1 = 0`
/// bundles are evaluated only when `c1² = 0`.
pub fn surface_index_bounds(v: &SurfaceBoundInput) -> Result<BoundsReport> {
    let (c2d, c1d) = v.surface_numbers()?;
    let r = q(v.r);
    let r2_12 = &r * &r / q(12);
    let c1_trivial = v.c1_sq.is_zero();
    let mut out = BoundsReport::default();
    match v.surface_kind {
        SurfaceKind::K3 => {
            let id = "k3-index";
            let desc = "r c2 - (r²/12) c2(D) >= 0 for c1 = 0";
            out.push(if c1_trivial {
                BoundEntry::exact(id, desc, &r * &v.c2_num - &r2_12 * &c2d, q(0), Relation::Ge)
            } else {
                BoundEntry::not_applicable(id, desc)
            });
            out.push(BoundEntry::exact(
                "k3-endomorphism-index",
                "2r c2 - (r-1) c1² - (r²/12) c2(D) >= -2",
                v.discriminant(&c2d),
                q(-2),
                Relation::Ge,
            ));
        }
        SurfaceKind::Fano => {
            let id = "fano-index";
            let desc = "r c2 - (r²/12)(c2(D) + c1(D)²) >= 0 for c1 = 0";
            out.push(if c1_trivial {
                BoundEntry::exact(id, desc, &r * &v.c2_num - &r2_12 * (&c2d + &c1d), q(0), Relation::Ge)
            } else {
                BoundEntry::not_applicable(id, desc)
            });
            out.push(BoundEntry::exact(
                "negative-canonical-index",
                "2r c2 - (r-1) c1² - (r²/12)(c2(D) + c1(D)²) >= -1",
                v.discriminant(&c2d) - &r2_12 * &c1d,
                q(-1),
                Relation::Ge,
            ));
        }
        SurfaceKind::AmpleCanonical | SurfaceKind::General => {}
    }
    let id = "improved-bogomolov";
    let desc = "2r c2 - (r-1) c1² - (r²/12) c2(D) >= 0";
    out.push(if v.surface_kind == SurfaceKind::Fano {
        BoundEntry::not_applicable(id, desc)
    } else {
        BoundEntry::exact(id, desc, v.discriminant(&c2d), q(0), Relation::Ge)
    });
    if !c1_trivial && matches!(v.surface_kind, SurfaceKind::K3 | SurfaceKind::Fano) {
        out.notes.push("c1² ≠ 0: c1 = 0 entries skipped".into());
    }
    Ok(out)
}
