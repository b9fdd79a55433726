use num_complex::Complex64;
use serde::Serialize;

use super::central::central_charge_of;
use super::numeric::{max_abs, nelder_mead, Tolerances};
use crate::chern::{mukai, ChernRecord};
use crate::error::Result;
use crate::geometry::{dot, EvenClass, ThreefoldData};
use crate::rational::vec_to_f64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MinimizeStatus {
    /// Interior local minimum with positive value.
    Converged,
    /// `J` approached a face of the Kähler cone.
    BoundaryFlow,
    /// The central charge vanishes at an interior point.
    RegularZero,
    /// `J` grew without bound.
    Unbounded,
    IterationCap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeOutcome {
    #[serde(rename = "B")]
    pub b: Vec<f64>,
    #[serde(rename = "J")]
    pub j: Vec<f64>,
    pub value: f64,
    pub status: MinimizeStatus,
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions {
    pub max_iterations: usize,
    pub final_barrier: f64,
}

impl Default for MinimizeOptions {
    fn default() -> Self {
        Self { max_iterations: 100_000, final_barrier: 1e-12 }
    }
}

struct Objective<'a> {
    gamma: EvenClass<Complex64>,
    g: &'a ThreefoldData,
    rays: Vec<Vec<f64>>,
    n: usize,
}

impl<'a> Objective<'a> {
    fn new(c: &ChernRecord, g: &'a ThreefoldData) -> Self {
        let rays = g.mori_rays().iter().map(|r| vec_to_f64(r)).collect();
        Self { gamma: mukai(c, g).0.to_complex(), g, rays, n: g.b2() }
    }

    fn margins(&self, j: &[f64]) -> Vec<f64> {
        let mut m = j.to_vec();
        m.extend(self.rays.iter().map(|r| dot(r, j)));
        m
    }

    fn z(&self, x: &[f64]) -> f64 {
        let (b, j) = x.split_at(self.n);
        central_charge_of(&self.gamma, b, j, self.g, false).norm_sqr() / self.g.cube(j)
    }

    fn barrier(&self, x: &[f64], mu: f64) -> f64 {
        let m = self.margins(&x[self.n..]);
        if m.iter().any(|&v| v.is_nan() || v <= 0.0) {
            return f64::INFINITY;
        }
        let v = self.z(x);
        if mu == 0.0 {
            v
        } else {
            v - mu * m.iter().map(|v| v.ln()).sum::<f64>()
        }
    }
}

fn steps(x: &[f64], rel: f64) -> Vec<f64> {
    x.iter().map(|v| rel * v.abs().max(0.1)).collect()
}

/// Local minimum of `|Z|²/∫J³` over `(B, J)`, `J` kept inside the Kähler cone
/// by a logarithmic barrier whose weight is lowered in decades.
pub fn minimize_z_norm(
    c: &ChernRecord,
    start_b: &[f64],
    start_j: &[f64],
    g: &ThreefoldData,
    opts: MinimizeOptions,
) -> Result<MinimizeOutcome> {
    c.check(g)?;
    g.check_dim(start_b.len())?;
    g.require_ample(start_j)?;
    let obj = Objective::new(c, g);
    let mut x: Vec<f64> = start_b.iter().chain(start_j).copied().collect();
    let z0 = obj.z(&x);
    let mut mu = 1e-2 * z0.max(f64::MIN_POSITIVE);
    let mu_end = opts.final_barrier * z0.max(f64::MIN_POSITIVE);
    let mut used = 0;
    let mut capped = false;
    let mut rel = 0.1;

    loop {
        let f = |y: &[f64]| obj.barrier(y, mu);
        let r = nelder_mead(&f, &x, &steps(&x, rel), Tolerances { rel: 1e-14, abs: 1e-20 * z0, x: 1e-11 }, opts.max_iterations - used);
        used += r.iterations;
        x = r.x;
        if used >= opts.max_iterations {
            capped = true;
            break;
        }
        if mu <= mu_end {
            break;
        }
        mu *= 0.1;
        rel = (rel * 0.5).max(1e-3);
    }
    // Unbarriered restarts until the simplex stops moving.
    if !capped {
        for _ in 0..4 {
            let f = |y: &[f64]| obj.barrier(y, 0.0);
            let before = x.clone();
            let r = nelder_mead(&f, &x, &steps(&x, 1e-3), Tolerances { rel: 1e-15, abs: 1e-24 * z0, x: 1e-13 }, opts.max_iterations - used);
            used += r.iterations;
            x = r.x;
            if used >= opts.max_iterations {
                capped = true;
                break;
            }
            let moved = x.iter().zip(&before).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            if moved <= 1e-12 * (1.0 + max_abs(&x)) {
                break;
            }
        }
    }

    let value = obj.z(&x);
    let (b, j) = x.split_at(obj.n);
    let status = if capped {
        MinimizeStatus::IterationCap
    } else if value <= 1e-14 * z0 {
        MinimizeStatus::RegularZero
    } else if g.cone_check(j).margin < 1e-6 {
        MinimizeStatus::BoundaryFlow
    } else if max_abs(j) > 1e6 {
        MinimizeStatus::Unbounded
    } else {
        MinimizeStatus::Converged
    };
    Ok(MinimizeOutcome { b: b.to_vec(), j: j.to_vec(), value, status, iterations: used })
}

/// Central-difference gradient of `|Z|²/∫J³` in the coordinates `(B, J)`.
pub fn z_norm_gradient(c: &ChernRecord, b: &[f64], j: &[f64], g: &ThreefoldData) -> Result<Vec<f64>> {
    c.check(g)?;
    g.check_dim(b.len())?;
    g.require_ample(j)?;
    let obj = Objective::new(c, g);
    let x: Vec<f64> = b.iter().chain(j).copied().collect();
    Ok((0..x.len())
        .map(|i| {
            let h = 1e-6 * x[i].abs().max(1.0);
            let mut up = x.clone();
            let mut down = x.clone();
            up[i] += h;
            down[i] -= h;
            (obj.z(&up) - obj.z(&down)) / (2.0 * h)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::attractor::solve_positive_rank;
    use crate::rational::{q, qvec};

    #[test]
    fn structure_sheaf_has_regular_zero() {
        let g = ThreefoldData::quintic();
        let out = minimize_z_norm(&ChernRecord::trivial(1), &[0.3], &[1.0], &g, MinimizeOptions::default()).unwrap();
        assert_eq!(out.status, MinimizeStatus::RegularZero);
        assert!((out.j[0] - 2.5f64.sqrt()).abs() < 1e-4);
        assert!(out.b[0].abs() < 1e-4);
    }

    #[test]
    fn matches_analytic_point() {
        let g = ThreefoldData::quintic();
        let c = ChernRecord::new(q(3), qvec(&[0]), qvec(&[-50]), q(0));
        let sol = solve_positive_rank(&c, &g).unwrap();
        let out = minimize_z_norm(&c, &[0.2], &[1.0], &g, MinimizeOptions::default()).unwrap();
        assert_eq!(out.status, MinimizeStatus::Converged);
        assert!((out.j[0] - sol.j[0]).abs() < 1e-4, "{:?} vs {:?}", out.j, sol.j);
        assert!((out.b[0] - sol.b[0]).abs() < 1e-4);
    }
}
