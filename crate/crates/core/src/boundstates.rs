//! Two-center bound states: the pairing-sign condition at a point of Kähler
//! moduli, its large-volume slope form, and the closure of a charge set under
//! sums that satisfy it.

use std::collections::HashSet;

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::attractor::{central_charge, ZETA3};
use crate::chern::{charge_pairing, euler_pairing, slope, ChernRecord};
use crate::error::{Error, Result};
use crate::geometry::{dot, ThreefoldData};
use crate::rational::{q, serde_q, to_f64, vec_to_f64, Q};
use crate::report::{BoundEntry, Relation};

/// Two charges with their pairing `⟨γ', γ''⟩ = χ(b, a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargePair {
    a: ChernRecord,
    b: ChernRecord,
    pairing: Q,
}

impl ChargePair {
    pub fn new(a: ChernRecord, b: ChernRecord, g: &ThreefoldData) -> Result<Self> {
        a.check(g)?;
        b.check(g)?;
        let pairing = charge_pairing(&a, &b, g);
        Ok(Self { a, b, pairing })
    }

    pub fn a(&self) -> &ChernRecord {
        &self.a
    }

    pub fn b(&self) -> &ChernRecord {
        &self.b
    }

    pub fn pairing(&self) -> &Q {
        &self.pairing
    }

    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone(), pairing: -&self.pairing }
    }

    fn charges(&self, b: &[f64], j: &[f64], g: &ThreefoldData) -> Result<(Complex64, Complex64)> {
        Ok((central_charge(&self.a, b, j, g, false)?, central_charge(&self.b, b, j, g, false)?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundStateCheck {
    pub holds: bool,
    /// `⟨γ', γ''⟩ Im(Z' Z̄'')`.
    pub lhs: f64,
}

/// `⟨γ', γ''⟩ Im(Z' Z̄'') ≥ 0` at `B + iJ`.
pub fn bps_bound_condition(pair: &ChargePair, b: &[f64], j: &[f64], g: &ThreefoldData) -> Result<BoundStateCheck> {
    let (za, zb) = pair.charges(b, j, g)?;
    let lhs = to_f64(&pair.pairing) * (za * zb.conj()).im;
    Ok(BoundStateCheck { holds: lhs >= 0.0, lhs })
}

/// `2 Im(Z' Z̄'') / (|Z' + Z''| ⟨γ', γ''⟩)`.
pub fn tau_vs(pair: &ChargePair, b: &[f64], j: &[f64], g: &ThreefoldData) -> Result<f64> {
    if pair.pairing.is_zero() {
        return Err(Error::ZeroPairing);
    }
    let (za, zb) = pair.charges(b, j, g)?;
    let total = (za + zb).norm();
    if total == 0.0 {
        return Err(Error::ZeroCentralCharge);
    }
    Ok(2.0 * (za * zb.conj()).im / (total * to_f64(&pair.pairing)))
}

/// Which groups must be nonzero for the large-volume condition to hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SlopeOrdering {
    /// `μ' < μ''`: needs `χ(V', V'') ≥ 0`, so `Hom(V', V'')` or `Ext¹(V'', V')`.
    SubobjectFirst,
    /// `μ' > μ''`: needs `χ(V'', V') ≥ 0`, so `Hom(V'', V')` or `Ext¹(V', V'')`.
    SubobjectSecond,
    EqualSlopes,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LargeVolumeCheck {
    pub holds: bool,
    /// `χ(V', V'')`.
    #[serde(with = "serde_q")]
    pub chi: Q,
    /// `μ'' - μ'`.
    #[serde(with = "serde_q")]
    pub slope_gap: Q,
    pub ordering: SlopeOrdering,
}

/// `χ(V', V'') (μ'' - μ') ≥ 0`.
pub fn large_volume_condition(pair: &ChargePair, j: &[Q], g: &ThreefoldData) -> Result<LargeVolumeCheck> {
    if pair.a.rank.is_zero() || pair.b.rank.is_zero() {
        return Err(Error::ZeroRank);
    }
    let chi = euler_pairing(&pair.a, &pair.b, g);
    let slope_gap = slope(&pair.b, j, g)? - slope(&pair.a, j, g)?;
    let ordering = if slope_gap.is_positive() {
        SlopeOrdering::SubobjectFirst
    } else if slope_gap.is_negative() {
        SlopeOrdering::SubobjectSecond
    } else {
        SlopeOrdering::EqualSlopes
    };
    let holds = !(&chi * &slope_gap).is_negative();
    Ok(LargeVolumeCheck { holds, chi, slope_gap, ordering })
}

/// Leading large-`J` term of `Im(Z' Z̄'') / (r' r'')`: `-J³ (μ'' - μ')/12`,
/// slopes taken at `J`.
pub fn large_volume_leading_term(pair: &ChargePair, j: &[Q], g: &ThreefoldData) -> Result<Q> {
    let gap = slope(&pair.b, j, g)? - slope(&pair.a, j, g)?;
    Ok(-g.cube(j) * gap / q(12))
}

/// `ch(E) = p e^{qJ} - q e^{pJ}` for the kernel `E` of `O(qJ)^p → O(pJ)^q`.
pub fn extension_chern(p: i64, q_: i64, j: &[Q], g: &ThreefoldData) -> Result<ChernRecord> {
    g.check_dim(j.len())?;
    if p <= q_ {
        return Err(Error::Inconsistent(format!("need p > q, got p = {p}, q = {q_}")));
    }
    let (pq, qq) = (q(p), q(q_));
    let scaled = |k: &Q| -> Vec<Q> { j.iter().map(|x| k * x).collect() };
    let lhs = g.exp2(&scaled(&qq)).scale(&pq) - g.exp2(&scaled(&pq)).scale(&qq);
    let record = ChernRecord::from_even_class(&lhs);
    let closed = ChernRecord::new(
        &pq - &qq,
        vec![Q::zero(); j.len()],
        g.product_pairing(j, j).iter().map(|x| &pq * &qq * (&qq - &pq) / q(2) * x).collect(),
        &pq * &qq * (&qq * &qq - &pq * &pq) / q(6) * g.cube(j),
    );
    assert_eq!(record, closed, "extension Chern character disagrees with its closed form");
    Ok(record)
}

/// Closure of `seed` under sums `γ' + γ''` of pairs with nonzero pairing
/// that satisfy [`bps_bound_condition`] at `B + iJ`.
///
/// Rounds are breadth-first; each round visits only pairs involving an
/// element added in the previous round, in lexicographic index order. At most
/// `budget` records are added.
pub fn j_closure(
    seed: &[ChernRecord],
    b: &[f64],
    j: &[f64],
    g: &ThreefoldData,
    budget: usize,
) -> Result<Vec<ChernRecord>> {
    g.check_dim(b.len())?;
    g.require_ample(j)?;
    for s in seed {
        s.check(g)?;
    }
    let mut out = seed.to_vec();
    let mut seen: HashSet<ChernRecord> = seed.iter().cloned().collect();
    let mut added = 0;
    let mut frontier = 0;
    while added < budget {
        let n = out.len();
        let mut fresh = Vec::new();
        'pairs: for i in 0..n {
            for k in (i + 1).max(frontier)..n {
                let pair = ChargePair::new(out[i].clone(), out[k].clone(), g)?;
                if pair.pairing.is_zero() {
                    continue;
                }
                if !bps_bound_condition(&pair, b, j, g)?.holds {
                    continue;
                }
                let sum = out[i].clone() + out[k].clone();
                if sum.is_zero() || !seen.insert(sum.clone()) {
                    continue;
                }
                fresh.push(sum);
                added += 1;
                if added == budget {
                    break 'pairs;
                }
            }
        }
        if fresh.is_empty() {
            break;
        }
        frontier = n;
        out.extend(fresh);
    }
    Ok(out)
}

/// Speculative `c3` bound for `c1 = 0`:
/// `|c3| ≤ (2ζ(3)|χ|/(2π)³) r (c2·J/r)^{1/2} (J³)^{-1/6}
///        + (2^{5/2}/3) r ((c2/r - c2(M)/24)·J)^{3/2} (J³)^{-1/2}
///        + C r (c2·J/r)² (J³)^{-2/3}`.
pub fn guess_bound(c: &ChernRecord, j: &[f64], g: &ThreefoldData, const_c: &Q) -> Result<BoundEntry> {
    c.check(g)?;
    if !c.rank.is_positive() {
        return Err(Error::Rank("positive"));
    }
    if c.c1.iter().any(|x| !x.is_zero()) {
        return Err(Error::NonzeroC1);
    }
    if const_c.is_negative() {
        return Err(Error::Inconsistent("constant C must be nonnegative".into()));
    }
    g.require_ample(j)?;
    let id = "guess";
    let desc = "corrected c3 bound >= |c3|";
    let r = to_f64(&c.rank);
    let c2j = dot(&vec_to_f64(&c.c2(g)), j);
    let target: Vec<Q> = c
        .c2(g)
        .iter()
        .zip(g.c2_pair())
        .map(|(x, m)| x / &c.rank - m / q(24))
        .collect();
    let tj = dot(&vec_to_f64(&target), j);
    if c2j < 0.0 || tj < 0.0 {
        return Ok(BoundEntry::not_applicable(id, desc));
    }
    let vol = g.cube(j);
    let kappa = 2.0 * ZETA3 * g.euler().unsigned_abs() as f64 / (2.0 * std::f64::consts::PI).powi(3);
    let rhs = kappa * r * (c2j / r).sqrt() * vol.powf(-1.0 / 6.0)
        + 2f64.powf(2.5) / 3.0 * r * tj.powf(1.5) / vol.sqrt()
        + to_f64(const_c) * r * (c2j / r).powi(2) * vol.powf(-2.0 / 3.0);
    Ok(BoundEntry::approx(id, desc, rhs, to_f64(&c.c3(g).abs()), Relation::Ge))
}
