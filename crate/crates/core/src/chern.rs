//! Chern-character calculus on a threefold: conversions between Chern classes
//! and Chern characters, Mukai vectors, the Euler pairing, Drezet invariants,
//! slopes and the Bogomolov discriminant.

use num_traits::Zero;
use serde::Serialize;
use std::ops::Add;

use crate::error::{Error, Result};
use crate::geometry::{dot, EvenClass, ThreefoldData};
use crate::rational::{q, serde_q, serde_qvec, Q};

/// Rank and Chern character of a (candidate) sheaf.
///
/// `ch2` is stored by its pairing vector and `ch3` by its integral; `c2` and
/// `c3` are derived on demand.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ChernRecord {
    #[serde(with = "serde_q")]
    pub rank: Q,
    #[serde(with = "serde_qvec")]
    pub c1: Vec<Q>,
    #[serde(rename = "ch2_pair", with = "serde_qvec")]
    pub ch2: Vec<Q>,
    #[serde(with = "serde_q")]
    pub ch3: Q,
}

/// `γ = ch ∧ √Td(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MukaiVector(pub EvenClass<Q>);

/// Rescaling-invariant generators read off `log(ch / r)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Drezet {
    pub delta1: Vec<Q>,
    /// Pairing vector of `Δ2`.
    pub delta2: Vec<Q>,
    /// Integral of `Δ3`.
    pub delta3: Q,
}

impl ChernRecord {
    pub fn new(rank: Q, c1: Vec<Q>, ch2: Vec<Q>, ch3: Q) -> Self {
        Self { rank, c1, ch2, ch3 }
    }

    pub fn trivial(b2: usize) -> Self {
        Self::from_even_class(&EvenClass::one(b2))
    }

    /// `O(L)`, with `ch = e^L`.
    pub fn line_bundle(l: &[Q], g: &ThreefoldData) -> Self {
        Self::from_even_class(&g.exp2(l))
    }

    /// From `(r, c1, c2, c3)` where `c2` is a pairing vector and `c3` a number.
    pub fn from_chern_classes(rank: Q, c1: Vec<Q>, c2: Vec<Q>, c3: Q, g: &ThreefoldData) -> Result<Self> {
        g.check_dim(c1.len())?;
        g.check_dim(c2.len())?;
        let c1sq = g.product_pairing(&c1, &c1);
        let ch2: Vec<Q> = c1sq.iter().zip(&c2).map(|(s, c)| s / q(2) - c).collect();
        let c1_cubed = dot(&c1sq, &c1);
        let c1c2 = dot(&c1, &c2);
        let ch3 = (c3 + c1_cubed / q(3) - c1c2) / q(2);
        Ok(Self { rank, c1, ch2, ch3 })
    }

    pub fn b2(&self) -> usize {
        self.c1.len()
    }

    pub fn check(&self, g: &ThreefoldData) -> Result<()> {
        g.check_dim(self.c1.len())?;
        g.check_dim(self.ch2.len())
    }

    /// Pairing vector of `c2 = c1²/2 - ch2`.
    pub fn c2(&self, g: &ThreefoldData) -> Vec<Q> {
        g.product_pairing(&self.c1, &self.c1)
            .into_iter()
            .zip(&self.ch2)
            .map(|(s, ch)| s / q(2) - ch)
            .collect()
    }

    /// `∫ c3 = 2 ch3 - c1³/3 + c1 c2`.
    pub fn c3(&self, g: &ThreefoldData) -> Q {
        let c1_cubed = g.cube(&self.c1);
        let c1c2 = dot(&self.c1, &self.c2(g));
        q(2) * &self.ch3 - c1_cubed / q(3) + c1c2
    }

    pub fn to_even_class(&self) -> EvenClass<Q> {
        EvenClass {
            d0: self.rank.clone(),
            d2: self.c1.clone(),
            d4: self.ch2.clone(),
            d6: self.ch3.clone(),
        }
    }

    pub fn from_even_class(x: &EvenClass<Q>) -> Self {
        Self { rank: x.d0.clone(), c1: x.d2.clone(), ch2: x.d4.clone(), ch3: x.d6.clone() }
    }

    pub fn rescale(&self, n: &Q) -> Self {
        Self::from_even_class(&self.to_even_class().scale(n))
    }

    pub fn is_zero(&self) -> bool {
        self.rank.is_zero()
            && self.c1.iter().all(Zero::is_zero)
            && self.ch2.iter().all(Zero::is_zero)
            && self.ch3.is_zero()
    }

    /// Checks that `(r, c1, c2, c3)` are integral Chern data.
    pub fn validate_integral(&self, g: &ThreefoldData) -> Result<()> {
        self.check(g)?;
        if !self.rank.is_integer() {
            return Err(Error::NotIntegral(format!("rank {}", self.rank)));
        }
        if let Some(x) = self.c1.iter().find(|x| !x.is_integer()) {
            return Err(Error::NotIntegral(format!("c1 entry {x}")));
        }
        if let Some(x) = self.c2(g).iter().find(|x| !x.is_integer()) {
            return Err(Error::NotIntegral(format!("c2 pairing {x}")));
        }
        let c3 = self.c3(g);
        if !c3.is_integer() {
            return Err(Error::NotIntegral(format!("c3 {c3}")));
        }
        Ok(())
    }
}

impl Add for ChernRecord {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self::from_even_class(&(self.to_even_class() + rhs.to_even_class()))
    }
}

pub fn mukai(c: &ChernRecord, g: &ThreefoldData) -> MukaiVector {
    MukaiVector(g.mul(&c.to_even_class(), &g.sqrt_todd()))
}

/// `χ(a, b) = Σ (-1)^i dim Ext^i(a, b) = ∫ γ(a)^∨ ∧ γ(b)`.
pub fn euler_pairing(a: &ChernRecord, b: &ChernRecord, g: &ThreefoldData) -> Q {
    let ga = mukai(a, g).0;
    let gb = mukai(b, g).0;
    g.pair(&ga.involute(), &gb)
}

/// `⟨γ', γ''⟩ = ∫ γ' ∧ (γ'')^∨`, the antisymmetric charge pairing; equals
/// `χ(b, a)`.
pub fn charge_pairing(a: &ChernRecord, b: &ChernRecord, g: &ThreefoldData) -> Q {
    let ga = mukai(a, g).0;
    let gb = mukai(b, g).0;
    g.pair(&ga, &gb.involute())
}

pub fn drezet(c: &ChernRecord, g: &ThreefoldData) -> Result<Drezet> {
    if c.rank.is_zero() {
        return Err(Error::ZeroRank);
    }
    let l = g.log_unit(&c.to_even_class())?;
    Ok(Drezet {
        delta1: l.d2,
        delta2: l.d4.into_iter().map(|x| -x).collect(),
        delta3: l.d6,
    })
}

pub fn tensor(a: &ChernRecord, b: &ChernRecord, g: &ThreefoldData) -> Result<ChernRecord> {
    let x = g.wedge(&a.to_even_class(), &b.to_even_class())?;
    Ok(ChernRecord::from_even_class(&x))
}

/// `c ⊗ O(L)`.
pub fn twist(c: &ChernRecord, l: &[Q], g: &ThreefoldData) -> Result<ChernRecord> {
    g.check_dim(l.len())?;
    tensor(c, &ChernRecord::line_bundle(l, g), g)
}

fn require_polarization(j: &[Q], g: &ThreefoldData) -> Result<()> {
    g.check_dim(j.len())?;
    let c = g.cone_check_q(j);
    if c.in_closure() && j.iter().any(|x| !x.is_zero()) {
        Ok(())
    } else {
        Err(Error::NotAmple { margin: c.margin })
    }
}

/// `μ = c1·J² / r`. `J` may lie on a face of the cone (e.g. a generator).
pub fn slope(c: &ChernRecord, j: &[Q], g: &ThreefoldData) -> Result<Q> {
    if c.rank.is_zero() {
        return Err(Error::ZeroRank);
    }
    c.check(g)?;
    require_polarization(j, g)?;
    Ok(g.triple(&c.c1, j, j) / &c.rank)
}

/// `Δ2·J`; nonnegative exactly when the Bogomolov inequality holds at `J`.
pub fn bogomolov(c: &ChernRecord, j: &[Q], g: &ThreefoldData) -> Result<Q> {
    c.check(g)?;
    require_polarization(j, g)?;
    let d = drezet(c, g)?;
    Ok(dot(&d.delta2, j))
}

/// The Bogomolov quantity written with Chern classes,
/// `(2r c2 - (r-1) c1²)·J / (2r²)`.
pub fn bogomolov_classes(c: &ChernRecord, j: &[Q], g: &ThreefoldData) -> Result<Q> {
    if c.rank.is_zero() {
        return Err(Error::ZeroRank);
    }
    let r = &c.rank;
    let c2j = dot(&c.c2(g), j);
    let c1sqj = g.triple(&c.c1, &c.c1, j);
    Ok((q(2) * r * c2j - (r - q(1)) * c1sqj) / (q(2) * r * r))
}
