//! Real roots of `Σ_{bc} D_abc h_b h_c = t_a`.

use super::numeric::{max_abs, solve_linear};
use crate::geometry::{ConeCheck, ThreefoldData};
use crate::rational::to_f64;

const START_SCALES: [f64; 3] = [0.1, 1.0, 10.0];
const MAX_STEPS: usize = 200;
const MAX_HALVINGS: usize = 60;

/// Residual tolerance, relative to `max(1, |t|)`.
pub const NEWTON_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct HTildeRoot {
    pub h: Vec<f64>,
    pub residual: f64,
    pub cone: ConeCheck,
}

struct Quadric {
    n: usize,
    d: Vec<f64>,
}

impl Quadric {
    fn new(g: &ThreefoldData) -> Self {
        let n = g.b2();
        let mut d = vec![0.0; n * n * n];
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    d[(a * n + b) * n + c] = to_f64(g.d(a, b, c));
                }
            }
        }
        Self { n, d }
    }

    fn dabc(&self, a: usize, b: usize, c: usize) -> f64 {
        self.d[(a * self.n + b) * self.n + c]
    }

    fn value(&self, h: &[f64], t: &[f64]) -> Vec<f64> {
        (0..self.n)
            .map(|a| {
                let mut s = 0.0;
                for b in 0..self.n {
                    for c in 0..self.n {
                        s += self.dabc(a, b, c) * h[b] * h[c];
                    }
                }
                s - t[a]
            })
            .collect()
    }

    fn jacobian(&self, h: &[f64]) -> Vec<Vec<f64>> {
        (0..self.n)
            .map(|a| {
                (0..self.n)
                    .map(|b| 2.0 * (0..self.n).map(|c| self.dabc(a, b, c) * h[c]).sum::<f64>())
                    .collect()
            })
            .collect()
    }

    /// Damped Newton from `start`; `None` when it stalls or runs out of steps.
    fn descend(&self, start: &[f64], t: &[f64], tol: f64) -> Option<(Vec<f64>, f64)> {
        let mut h = start.to_vec();
        let mut f = self.value(&h, t);
        let mut norm = max_abs(&f);
        for _ in 0..MAX_STEPS {
            if norm <= tol {
                return Some(self.polish(h, t, norm));
            }
            let step = solve_linear(self.jacobian(&h), f.iter().map(|x| -x).collect())?;
            let mut alpha = 1.0;
            let mut accepted = false;
            for _ in 0..MAX_HALVINGS {
                let trial: Vec<f64> = h.iter().zip(&step).map(|(x, d)| x + alpha * d).collect();
                let ft = self.value(&trial, t);
                let nt = max_abs(&ft);
                if nt < norm {
                    h = trial;
                    f = ft;
                    norm = nt;
                    accepted = true;
                    break;
                }
                alpha *= 0.5;
            }
            if !accepted {
                return None;
            }
        }
        (norm <= tol).then(|| self.polish(h, t, norm))
    }

    fn polish(&self, mut h: Vec<f64>, t: &[f64], mut norm: f64) -> (Vec<f64>, f64) {
        for _ in 0..3 {
            let f = self.value(&h, t);
            let Some(step) = solve_linear(self.jacobian(&h), f.iter().map(|x| -x).collect()) else {
                break;
            };
            let trial: Vec<f64> = h.iter().zip(&step).map(|(x, d)| x + d).collect();
            let nt = max_abs(&self.value(&trial, t));
            if nt >= norm {
                break;
            }
            h = trial;
            norm = nt;
        }
        (h, norm)
    }
}

fn starts(n: usize, base: f64) -> Vec<Vec<f64>> {
    let mut dirs: Vec<Vec<f64>> = (0..n)
        .map(|a| (0..n).map(|b| if a == b { 1.0 } else { 0.0 }).collect())
        .collect();
    for a in 0..n {
        for b in a + 1..n {
            dirs.push((0..n).map(|c| if c == a || c == b { 0.5 } else { 0.0 }).collect());
        }
    }
    let mut out = Vec::new();
    for s in START_SCALES {
        for d in &dirs {
            out.push(d.iter().map(|x| x * s * base).collect());
        }
    }
    out
}

/// All distinct real roots reached from the multi-start set, each oriented
/// (between `±h`) towards the Kähler cone and sorted with cone members first.
pub fn solve_h_tilde(t: &[f64], g: &ThreefoldData) -> Vec<HTildeRoot> {
    let quad = Quadric::new(g);
    let tscale = max_abs(t).max(1.0);
    let tol = NEWTON_TOL * tscale;
    let dmax = quad.d.iter().fold(0.0f64, |m, x| m.max(x.abs())).max(f64::MIN_POSITIVE);
    let base = (max_abs(t) / dmax).sqrt().max(1e-3);

    let mut roots: Vec<HTildeRoot> = Vec::new();
    for start in starts(quad.n, base) {
        let Some((h, residual)) = quad.descend(&start, t, tol) else {
            continue;
        };
        let plus = g.cone_check(&h);
        let neg: Vec<f64> = h.iter().map(|x| -x).collect();
        let minus = g.cone_check(&neg);
        let (h, cone) = if minus.margin > plus.margin { (neg, minus) } else { (h, plus) };
        let hs = max_abs(&h).max(1.0);
        let dup = roots
            .iter()
            .any(|r| r.h.iter().zip(&h).all(|(a, b)| (a - b).abs() <= 1e-8 * hs));
        if !dup {
            roots.push(HTildeRoot { h, residual, cone });
        }
    }
    roots.sort_by(|a, b| {
        b.cone
            .in_closure()
            .cmp(&a.cone.in_closure())
            .then(b.cone.interior().cmp(&a.cone.interior()))
            .then(a.residual.total_cmp(&b.residual))
            .then_with(|| a.h.iter().zip(&b.h).fold(std::cmp::Ordering::Equal, |o, (x, y)| o.then(x.total_cmp(y))))
    });
    roots
}
