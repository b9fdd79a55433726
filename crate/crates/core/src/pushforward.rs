//! Grothendieck–Riemann–Roch pushforward of bundle data on a divisor
//! `i: D → M` to Chern characters on the threefold.
//!
//! Surface quantities are carried as contracted numbers: `∫_D c1²`,
//! `∫_D c1·D|_D` and `∫_D c2`. When `c1` is the restriction of a class on
//! `M` (its lift), the full degree-four pairing vector of `ch2(i_*W)` is
//! available; otherwise only contractions with `D` are.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::chern::{mukai, ChernRecord, MukaiVector};
use crate::error::{Error, Result};
use crate::geometry::{EvenClass, SurfaceData, ThreefoldData};
use crate::rational::{q, serde_opt_qvec, serde_q, Q};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfaceBundleRecord {
    #[serde(with = "serde_q")]
    pub rank: Q,
    #[serde(default, with = "serde_opt_qvec", skip_serializing_if = "Option::is_none")]
    pub c1_lift: Option<Vec<Q>>,
    #[serde(with = "serde_q")]
    pub c1_sq: Q,
    #[serde(rename = "c1_dot_D", with = "serde_q")]
    pub c1_dot_d: Q,
    #[serde(with = "serde_q")]
    pub c2_num: Q,
}

impl SurfaceBundleRecord {
    /// Record whose `c1` is the restriction of `lift`; contractions are
    /// computed on `D`.
    pub fn from_lift(rank: Q, lift: Vec<Q>, c2_num: Q, divisor: &[Q], g: &ThreefoldData) -> Result<Self> {
        g.check_dim(lift.len())?;
        g.check_dim(divisor.len())?;
        let c1_sq = g.triple(&lift, &lift, divisor);
        let c1_dot_d = g.triple(&lift, divisor, divisor);
        Ok(Self { rank, c1_lift: Some(lift), c1_sq, c1_dot_d, c2_num })
    }

    /// `∫_D ch2(W) = c1²/2 - c2`.
    pub fn ch2_num(&self) -> Q {
        &self.c1_sq / q(2) - &self.c2_num
    }

    /// Checks the contractions against the lift, when one is present.
    pub fn validate(&self, divisor: &[Q], g: &ThreefoldData) -> Result<()> {
        g.check_dim(divisor.len())?;
        if !self.rank.is_positive() {
            return Err(Error::Rank("positive on the divisor"));
        }
        if let Some(lift) = &self.c1_lift {
            g.check_dim(lift.len())?;
            let sq = g.triple(lift, lift, divisor);
            let dd = g.triple(lift, divisor, divisor);
            if sq != self.c1_sq || dd != self.c1_dot_d {
                return Err(Error::Inconsistent(format!(
                    "c1_sq/c1_dot_D ({}, {}) disagree with the lift ({}, {})",
                    self.c1_sq, self.c1_dot_d, sq, dd
                )));
            }
        }
        Ok(())
    }

    /// `W ⊕ W'`; both records need lifts.
    pub fn direct_sum(&self, other: &Self, divisor: &[Q], g: &ThreefoldData) -> Result<Self> {
        let (a, b) = match (&self.c1_lift, &other.c1_lift) {
            (Some(a), Some(b)) => (a, b),
            _ => return Err(Error::MissingLift),
        };
        let lift: Vec<Q> = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let cross = g.triple(a, b, divisor);
        let c2 = &self.c2_num + &other.c2_num + cross;
        Self::from_lift(&self.rank + &other.rank, lift, c2, divisor, g)
    }
}

/// Contractions of `ch(i_*W)` available without a lift of `c1`.
#[derive(Debug, Clone, PartialEq)]
pub struct PushContractions {
    pub c1: Vec<Q>,
    /// `∫ ch2(i_*W) ∧ D`.
    pub ch2_dot_d: Q,
    pub ch3: Q,
}

/// `c1(D) = -D|_D`, `c2(D) = D³ + c2(M)·D`.
pub fn divisor_chern(divisor: &[Q], g: &ThreefoldData) -> Result<SurfaceData> {
    g.check_dim(divisor.len())?;
    let d_cubed = g.cube(divisor);
    let c2d = &d_cubed + g.c2_dot(divisor);
    let cone = g.cone_check_q(divisor).status;
    Ok(SurfaceData { divisor: divisor.to_vec(), c1d_sq: d_cubed.clone(), d_cubed, c2d, cone })
}

fn push_ch3(w: &SurfaceBundleRecord, s: &SurfaceData) -> Q {
    &w.rank * &s.d_cubed / q(6) + w.ch2_num() - &w.c1_dot_d / q(2)
}

pub fn grr_push_contracted(w: &SurfaceBundleRecord, divisor: &[Q], g: &ThreefoldData) -> Result<PushContractions> {
    let s = divisor_chern(divisor, g)?;
    let c1: Vec<Q> = divisor.iter().map(|d| &w.rank * d).collect();
    let ch2_dot_d = -&w.rank * &s.d_cubed / q(2) + &w.c1_dot_d;
    Ok(PushContractions { c1, ch2_dot_d, ch3: push_ch3(w, &s) })
}

/// `ch(i_*W)`: rank 0, `c1 = rD`, `ch2 = -rD²/2 + c1`,
/// `ch3 = rD³/6 + ch2(W) - D²·c1/2`.
pub fn grr_push(w: &SurfaceBundleRecord, divisor: &[Q], g: &ThreefoldData) -> Result<ChernRecord> {
    let lift = w.c1_lift.as_ref().ok_or(Error::MissingLift)?;
    g.check_dim(lift.len())?;
    let s = divisor_chern(divisor, g)?;
    let dd = g.product_pairing(divisor, divisor);
    let ld = g.product_pairing(lift, divisor);
    let ch2 = dd
        .iter()
        .zip(&ld)
        .map(|(a, b)| -&w.rank * a / q(2) + b)
        .collect();
    let c1 = divisor.iter().map(|d| &w.rank * d).collect();
    Ok(ChernRecord::new(Q::zero(), c1, ch2, push_ch3(w, &s)))
}

/// Mukai vector of `i_*W` assembled directly from surface data:
/// degree six is `rD³/8 + ch2(W) - D²·c1/2 + (r/24) c2(D)`.
pub fn push_mukai(w: &SurfaceBundleRecord, divisor: &[Q], g: &ThreefoldData) -> Result<MukaiVector> {
    let lift = w.c1_lift.as_ref().ok_or(Error::MissingLift)?;
    g.check_dim(lift.len())?;
    let s = divisor_chern(divisor, g)?;
    let r = &w.rank;
    let dd = g.product_pairing(divisor, divisor);
    let ld = g.product_pairing(lift, divisor);
    let d4 = dd.iter().zip(&ld).map(|(a, b)| -(r * a / q(2) - b)).collect();
    let d6 = r * &s.d_cubed / q(8) + w.ch2_num() - &w.c1_dot_d / q(2) + r * &s.c2d / q(24);
    Ok(MukaiVector(EvenClass {
        d0: Q::zero(),
        d2: divisor.iter().map(|d| r * d).collect(),
        d4,
        d6,
    }))
}

/// `mukai ∘ grr_push`, the second route to the same vector.
pub fn mukai_of_push(w: &SurfaceBundleRecord, divisor: &[Q], g: &ThreefoldData) -> Result<MukaiVector> {
    Ok(mukai(&grr_push(w, divisor, g)?, g))
}

/// Quantity `2r c2 - (r-1) c1² - (r²/12) c2(D)` of a bundle on `D`.
pub fn surface_discriminant(w: &SurfaceBundleRecord, s: &SurfaceData) -> Q {
    let r = &w.rank;
    q(2) * r * &w.c2_num - (r - q(1)) * &w.c1_sq - r * r * &s.c2d / q(12)
}
