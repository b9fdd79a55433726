use num_complex::Complex64;
use serde::Serialize;

use crate::chern::{mukai, ChernRecord};
use crate::error::{Error, Result};
use crate::geometry::{EvenClass, ThreefoldData};
use crate::rational::{serde_q, serde_qvec, Q};

pub const ZETA3: f64 = 1.202_056_903_159_594_2;

/// `Z = ∫ e^{-(B+iJ)} ch √td`, optionally with `iζ(3)χ/(2π)³` added to the
/// point part of the period.
pub fn central_charge(
    c: &ChernRecord,
    b: &[f64],
    j: &[f64],
    g: &ThreefoldData,
    corrections: bool,
) -> Result<Complex64> {
    c.check(g)?;
    g.check_dim(b.len())?;
    g.require_ample(j)?;
    let gamma = mukai(c, g).0.to_complex();
    Ok(central_charge_of(&gamma, b, j, g, corrections))
}

pub(crate) fn central_charge_of(
    gamma: &EvenClass<Complex64>,
    b: &[f64],
    j: &[f64],
    g: &ThreefoldData,
    corrections: bool,
) -> Complex64 {
    let tau: Vec<Complex64> = b.iter().zip(j).map(|(&x, &y)| Complex64::new(x, y)).collect();
    let mut omega = g.exp2(&tau);
    if corrections {
        let kappa = ZETA3 * g.euler() as f64 / (2.0 * std::f64::consts::PI).powi(3);
        omega.d6 += Complex64::new(0.0, kappa);
    }
    g.pair(&omega.involute(), gamma)
}

/// `|Z|² / ∫J³`.
pub fn z_norm_sq(c: &ChernRecord, b: &[f64], j: &[f64], g: &ThreefoldData) -> Result<f64> {
    let z = central_charge(c, b, j, g, false)?;
    Ok(z.norm_sqr() / g.cube(j))
}

/// Symplectic charge coordinates `(p⁰, p^α, q_α, q₀)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChargeVector {
    #[serde(with = "serde_q")]
    pub p0: Q,
    #[serde(with = "serde_qvec")]
    pub p: Vec<Q>,
    #[serde(with = "serde_qvec")]
    pub q: Vec<Q>,
    #[serde(with = "serde_q")]
    pub q0: Q,
}

/// `p⁰ = r`, `p = c1`, `q_α = -(ch2 + (r/12) c2(M))_α + (A c1)_α`, `q₀ = ch3`.
/// `a` is a symmetric `b2 × b2` matrix, zero when absent.
pub fn charge_map(c: &ChernRecord, g: &ThreefoldData, a: Option<&[Vec<Q>]>) -> Result<ChargeVector> {
    c.check(g)?;
    let n = g.b2();
    if let Some(a) = a {
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension { expected: n, found: a.len() });
        }
        for i in 0..n {
            for k in 0..i {
                if a[i][k] != a[k][i] {
                    return Err(Error::Inconsistent("A-matrix is not symmetric".into()));
                }
            }
        }
    }
    let twelve = Q::from_integer(12.into());
    let q = (0..n)
        .map(|i| {
            let mut v = -(&c.ch2[i] + &c.rank * &g.c2_pair()[i] / &twelve);
            if let Some(a) = a {
                for k in 0..n {
                    v += &a[i][k] * &c.c1[k];
                }
            }
            v
        })
        .collect();
    Ok(ChargeVector { p0: c.rank.clone(), p: c.c1.clone(), q, q0: c.ch3.clone() })
}
