//! Topological data of a Calabi-Yau threefold and the truncated even
//! cohomology ring `H^0 ⊕ H^2 ⊕ H^4 ⊕ H^6`.
//!
//! Degree-2 classes are coefficient vectors in the basis `{J_a}`, which also
//! generates the (simplicial) Kähler cone. Degree-4 classes are stored by
//! their pairing vector against the same basis, so for `x ∈ H^2` and
//! `y ∈ H^4`, `∫ x ∧ y = Σ_a x_a y_a`, and `(x ∧ y)_a = Σ_{bc} D_{abc} x_b y_c`
//! for two-forms.

use num_complex::{Complex, Complex64};
use num_traits::{One, Signed, Zero};
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rational::{q, to_f64, Q};

/// Strict cone membership tolerance on normalized margins.
pub const CONE_TOL: f64 = 1e-9;

/// Scalars the ring can be evaluated over: exact rationals for the algebra,
/// `f64`/`Complex64` for the solver, and exact complex rationals for oracles.
pub trait Coefficient:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_q(x: &Q) -> Self;
}

impl Coefficient for Q {
    fn from_q(x: &Q) -> Self {
        x.clone()
    }
}

impl Coefficient for f64 {
    fn from_q(x: &Q) -> Self {
        to_f64(x)
    }
}

impl Coefficient for Complex64 {
    fn from_q(x: &Q) -> Self {
        Complex64::new(to_f64(x), 0.0)
    }
}

impl Coefficient for Complex<Q> {
    fn from_q(x: &Q) -> Self {
        Complex::new(x.clone(), Q::zero())
    }
}

fn small<T: Coefficient>(n: i64) -> T {
    T::from_q(&q(n))
}

/// An element of `H^{2*}(M)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenClass<T = Q> {
    pub d0: T,
    pub d2: Vec<T>,
    /// Pairing of the four-form part with each `J_a`.
    pub d4: Vec<T>,
    /// Integral of the six-form part.
    pub d6: T,
}

impl<T: Coefficient> EvenClass<T> {
    pub fn zero(b2: usize) -> Self {
        Self {
            d0: T::zero(),
            d2: vec![T::zero(); b2],
            d4: vec![T::zero(); b2],
            d6: T::zero(),
        }
    }

    pub fn scalar(b2: usize, x: T) -> Self {
        let mut c = Self::zero(b2);
        c.d0 = x;
        c
    }

    pub fn one(b2: usize) -> Self {
        Self::scalar(b2, T::one())
    }

    pub fn two_form(v: &[T]) -> Self {
        let mut c = Self::zero(v.len());
        c.d2 = v.to_vec();
        c
    }

    pub fn four_form(pairing: &[T]) -> Self {
        let mut c = Self::zero(pairing.len());
        c.d4 = pairing.to_vec();
        c
    }

    pub fn point(b2: usize, x: T) -> Self {
        let mut c = Self::zero(b2);
        c.d6 = x;
        c
    }

    pub fn b2(&self) -> usize {
        self.d2.len()
    }

    pub fn integrate(&self) -> T {
        self.d6.clone()
    }

    /// The dualizing involution `ω^{2k} ↦ (-1)^k ω^{2k}`.
    pub fn involute(&self) -> Self {
        Self {
            d0: self.d0.clone(),
            d2: self.d2.iter().map(|x| -x.clone()).collect(),
            d4: self.d4.clone(),
            d6: -self.d6.clone(),
        }
    }

    pub fn scale(&self, k: &T) -> Self {
        self.map(|x| x.clone() * k.clone())
    }

    pub fn map<U, F: Fn(&T) -> U>(&self, f: F) -> EvenClass<U> {
        EvenClass {
            d0: f(&self.d0),
            d2: self.d2.iter().map(&f).collect(),
            d4: self.d4.iter().map(&f).collect(),
            d6: f(&self.d6),
        }
    }

    /// Largest absolute difference over all graded components.
    pub fn max_abs_diff(&self, other: &Self, abs: impl Fn(&T) -> f64) -> f64 {
        let diff = self.clone() - other.clone();
        std::iter::once(&diff.d0)
            .chain(diff.d2.iter())
            .chain(diff.d4.iter())
            .chain(std::iter::once(&diff.d6))
            .map(abs)
            .fold(0.0, f64::max)
    }

    fn zip(self, rhs: Self, f: impl Fn(T, T) -> T) -> Self {
        assert_eq!(self.b2(), rhs.b2(), "classes over different geometries");
        Self {
            d0: f(self.d0, rhs.d0),
            d2: self.d2.into_iter().zip(rhs.d2).map(|(a, b)| f(a, b)).collect(),
            d4: self.d4.into_iter().zip(rhs.d4).map(|(a, b)| f(a, b)).collect(),
            d6: f(self.d6, rhs.d6),
        }
    }
}

impl EvenClass<Q> {
    pub fn to_f64(&self) -> EvenClass<f64> {
        self.map(to_f64)
    }

    pub fn to_complex(&self) -> EvenClass<Complex64> {
        self.map(|x| Complex64::new(to_f64(x), 0.0))
    }
}

impl<T: Coefficient> Add for EvenClass<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.zip(rhs, |a, b| a + b)
    }
}

impl<T: Coefficient> Sub for EvenClass<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.zip(rhs, |a, b| a - b)
    }
}

impl<T: Coefficient> Neg for EvenClass<T> {
    type Output = Self;
    fn neg(self) -> Self {
        self.map(|x| -x.clone())
    }
}

/// Characteristic numbers of a smooth divisor `D ⊂ M`.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceData {
    pub divisor: Vec<Q>,
    pub d_cubed: Q,
    /// `∫_D c_1(D)^2`; equals `D^3` since `c_1(D) = -D|_D`.
    pub c1d_sq: Q,
    /// `∫_D c_2(D) = D^3 + c_2(M)·D`.
    pub c2d: Q,
    /// Position of `D` relative to the Kähler cone.
    pub cone: ConeStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeStatus {
    Interior,
    Boundary,
    Outside,
}

/// Kähler-cone membership of a two-form, with the smallest normalized margin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConeCheck {
    pub status: ConeStatus,
    pub margin: f64,
}

impl ConeCheck {
    pub fn in_closure(&self) -> bool {
        self.status != ConeStatus::Outside
    }

    pub fn interior(&self) -> bool {
        self.status == ConeStatus::Interior
    }
}

/// Both sides of `(H1 H2 H3)^3 >= H1^3 H2^3 H3^3`.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplePositivity {
    pub lhs: Q,
    pub rhs: Q,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThreefoldData {
    name: String,
    b2: usize,
    intersect: Vec<Q>,
    c2_pair: Vec<Q>,
    euler: i64,
    mori_rays: Vec<Vec<Q>>,
}

impl ThreefoldData {
    /// Builds and validates a geometry. `entries` are `(a, b, c, D_abc)` with
    /// 0-based indices and are symmetrized; conflicting duplicates are errors.
    pub fn new(
        name: impl Into<String>,
        b2: usize,
        entries: &[(usize, usize, usize, Q)],
        c2_pair: Vec<Q>,
        euler: i64,
        mori_rays: Vec<Vec<Q>>,
    ) -> Result<Self> {
        if b2 == 0 {
            return Err(Error::Geometry("b2 must be positive".into()));
        }
        let mut intersect: Vec<Option<Q>> = vec![None; b2 * b2 * b2];
        for (a, b, c, v) in entries {
            let (a, b, c) = (*a, *b, *c);
            if a >= b2 || b >= b2 || c >= b2 {
                return Err(Error::Geometry(format!(
                    "intersection index ({a},{b},{c}) out of range for b2={b2}"
                )));
            }
            for (i, j, k) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                let slot = &mut intersect[(i * b2 + j) * b2 + k];
                match slot {
                    Some(old) if old != v => {
                        return Err(Error::Geometry(format!(
                            "conflicting values for D[{a},{b},{c}]"
                        )))
                    }
                    _ => *slot = Some(v.clone()),
                }
            }
        }
        let intersect: Vec<Q> = intersect.into_iter().map(|x| x.unwrap_or_else(Q::zero)).collect();
        if c2_pair.len() != b2 {
            return Err(Error::Dimension { expected: b2, found: c2_pair.len() });
        }
        for ray in &mori_rays {
            if ray.len() != b2 {
                return Err(Error::Dimension { expected: b2, found: ray.len() });
            }
        }
        let g = Self { name: name.into(), b2, intersect, c2_pair, euler, mori_rays };
        g.validate()?;
        Ok(g)
    }

    fn validate(&self) -> Result<()> {
        if self.c2_pair.iter().any(|x| x.is_negative()) {
            return Err(Error::Geometry("c2(M)·J_a must be nonnegative".into()));
        }
        // Positive volume on the open cone. With nonnegative D it suffices to
        // check the barycenter; otherwise sample a simplex grid.
        let ones = vec![q(1); self.b2];
        if self.intersect.iter().all(|x| !x.is_negative()) {
            if !self.cube(&ones).is_positive() {
                return Err(Error::Geometry("volume form vanishes on the Kähler cone".into()));
            }
            return Ok(());
        }
        let m = 8;
        let mut point = vec![0usize; self.b2];
        loop {
            let v: Vec<Q> = point.iter().map(|&k| q(k as i64 + 1)).collect();
            if !self.cube(&v).is_positive() {
                return Err(Error::Geometry(format!(
                    "volume not positive at interior point {:?}",
                    point.iter().map(|k| k + 1).collect::<Vec<_>>()
                )));
            }
            let mut i = 0;
            loop {
                if i == self.b2 {
                    return Ok(());
                }
                point[i] += 1;
                if point[i] < m {
                    break;
                }
                point[i] = 0;
                i += 1;
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn b2(&self) -> usize {
        self.b2
    }

    pub fn euler(&self) -> i64 {
        self.euler
    }

    pub fn c2_pair(&self) -> &[Q] {
        &self.c2_pair
    }

    pub fn mori_rays(&self) -> &[Vec<Q>] {
        &self.mori_rays
    }

    pub fn d(&self, a: usize, b: usize, c: usize) -> &Q {
        &self.intersect[(a * self.b2 + b) * self.b2 + c]
    }

    /// Nonzero entries with `a <= b <= c`.
    pub fn intersect_entries(&self) -> Vec<(usize, usize, usize, Q)> {
        let mut out = Vec::new();
        for a in 0..self.b2 {
            for b in a..self.b2 {
                for c in b..self.b2 {
                    let v = self.d(a, b, c);
                    if !v.is_zero() {
                        out.push((a, b, c, v.clone()));
                    }
                }
            }
        }
        out
    }

    pub fn check_dim(&self, len: usize) -> Result<()> {
        if len == self.b2 {
            Ok(())
        } else {
            Err(Error::Dimension { expected: self.b2, found: len })
        }
    }

    pub fn check_class<T>(&self, x: &EvenClass<T>) -> Result<()> {
        self.check_dim(x.d2.len())?;
        self.check_dim(x.d4.len())
    }

    /// Pairing vector of the four-form `u ∧ v`.
    pub fn product_pairing<T: Coefficient>(&self, u: &[T], v: &[T]) -> Vec<T> {
        let n = self.b2;
        (0..n)
            .map(|a| {
                let mut acc = T::zero();
                for b in 0..n {
                    for c in 0..n {
                        let d = self.d(a, b, c);
                        if !d.is_zero() {
                            acc = acc + T::from_q(d) * u[b].clone() * v[c].clone();
                        }
                    }
                }
                acc
            })
            .collect()
    }

    pub fn triple<T: Coefficient>(&self, u: &[T], v: &[T], w: &[T]) -> T {
        dot(&self.product_pairing(u, v), w)
    }

    /// `∫ v^3`.
    pub fn cube<T: Coefficient>(&self, v: &[T]) -> T {
        self.triple(v, v, v)
    }

    /// `∫ c_2(M) ∧ v`.
    pub fn c2_dot<T: Coefficient>(&self, v: &[T]) -> T {
        let c2: Vec<T> = self.c2_pair.iter().map(T::from_q).collect();
        dot(&c2, v)
    }

    /// Graded product truncated above degree six.
    pub fn wedge<T: Coefficient>(&self, x: &EvenClass<T>, y: &EvenClass<T>) -> Result<EvenClass<T>> {
        self.check_class(x)?;
        self.check_class(y)?;
        Ok(self.mul(x, y))
    }

    pub(crate) fn mul<T: Coefficient>(&self, x: &EvenClass<T>, y: &EvenClass<T>) -> EvenClass<T> {
        let n = self.b2;
        let quad = self.product_pairing(&x.d2, &y.d2);
        let d2 = (0..n)
            .map(|a| x.d0.clone() * y.d2[a].clone() + y.d0.clone() * x.d2[a].clone())
            .collect();
        let d4 = (0..n)
            .map(|a| {
                x.d0.clone() * y.d4[a].clone() + y.d0.clone() * x.d4[a].clone() + quad[a].clone()
            })
            .collect();
        let d6 = x.d0.clone() * y.d6.clone()
            + y.d0.clone() * x.d6.clone()
            + dot(&x.d2, &y.d4)
            + dot(&y.d2, &x.d4);
        EvenClass { d0: x.d0.clone() * y.d0.clone(), d2, d4, d6 }
    }

    /// `∫ x ∧ y`.
    pub fn pair<T: Coefficient>(&self, x: &EvenClass<T>, y: &EvenClass<T>) -> T {
        self.mul(x, y).d6
    }

    /// `e^x = 1 + x + x²/2 + x³/6` for a two-form `x`.
    pub fn exp2<T: Coefficient>(&self, x: &[T]) -> EvenClass<T> {
        let sq = self.product_pairing(x, x);
        let cube = dot(&sq, x);
        EvenClass {
            d0: T::one(),
            d2: x.to_vec(),
            d4: sq.into_iter().map(|s| s / small(2)).collect(),
            d6: cube / small(6),
        }
    }

    /// `log(x / x_0)` through the truncated series `u - u²/2 + u³/3`.
    pub fn log_unit<T: Coefficient>(&self, x: &EvenClass<T>) -> Result<EvenClass<T>> {
        self.check_class(x)?;
        if x.d0.is_zero() {
            return Err(Error::VanishingUnit);
        }
        let inv = T::one() / x.d0.clone();
        let mut u = x.scale(&inv);
        u.d0 = T::zero();
        let u2 = self.mul(&u, &u);
        let u3 = self.mul(&u2, &u);
        Ok(u - u2.scale(&(T::one() / small(2))) + u3.scale(&(T::one() / small(3))))
    }

    /// `√Td(M) = 1 + c_2(M)/24`; the degree-six part vanishes since `c_1 = 0`.
    pub fn sqrt_todd(&self) -> EvenClass<Q> {
        let mut c = EvenClass::one(self.b2);
        c.d4 = self.c2_pair.iter().map(|x| x / q(24)).collect();
        c
    }

    fn margins(&self, v: &[f64]) -> impl Iterator<Item = f64> + '_ {
        let entries = v.to_vec();
        let rays = self.mori_rays.iter().map(move |ray| {
            ray.iter().zip(v).map(|(r, x)| to_f64(r) * x).sum::<f64>()
        });
        entries.into_iter().chain(rays.collect::<Vec<_>>())
    }

    /// Membership of `v` in the Kähler cone. Margins are taken after scaling
    /// `v` to unit max-entry; `|margin| <= CONE_TOL` is the boundary.
    pub fn cone_check(&self, v: &[f64]) -> ConeCheck {
        self.cone_check_tol(v, CONE_TOL)
    }

    pub fn cone_check_tol(&self, v: &[f64], tol: f64) -> ConeCheck {
        let scale = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let margin = if scale == 0.0 {
            0.0
        } else {
            let unit: Vec<f64> = v.iter().map(|x| x / scale).collect();
            self.margins(&unit).fold(f64::INFINITY, f64::min)
        };
        let status = if margin > tol {
            ConeStatus::Interior
        } else if margin >= -tol {
            ConeStatus::Boundary
        } else {
            ConeStatus::Outside
        };
        ConeCheck { status, margin }
    }

    pub fn cone_check_q(&self, v: &[Q]) -> ConeCheck {
        let scale = v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero);
        if scale.is_zero() {
            return ConeCheck { status: ConeStatus::Boundary, margin: 0.0 };
        }
        let unit: Vec<Q> = v.iter().map(|x| x / &scale).collect();
        let mut margin = unit.iter().cloned().min().unwrap();
        for ray in &self.mori_rays {
            let m = dot(ray, &unit);
            if m < margin {
                margin = m;
            }
        }
        let status = if margin.is_zero() {
            ConeStatus::Boundary
        } else {
            let m = to_f64(&margin);
            if m > CONE_TOL {
                ConeStatus::Interior
            } else if m >= -CONE_TOL {
                ConeStatus::Boundary
            } else {
                ConeStatus::Outside
            }
        };
        ConeCheck { status, margin: to_f64(&margin) }
    }

    pub fn in_kahler_cone(&self, v: &[f64], strict: bool) -> (bool, f64) {
        let c = self.cone_check(v);
        let ok = if strict { c.interior() } else { c.in_closure() };
        (ok, c.margin)
    }

    pub fn require_ample_q(&self, v: &[Q]) -> Result<()> {
        self.check_dim(v.len())?;
        let c = self.cone_check_q(v);
        if c.interior() {
            Ok(())
        } else {
            Err(Error::NotAmple { margin: c.margin })
        }
    }

    pub fn require_ample(&self, v: &[f64]) -> Result<()> {
        self.check_dim(v.len())?;
        let c = self.cone_check(v);
        if c.interior() {
            Ok(())
        } else {
            Err(Error::NotAmple { margin: c.margin })
        }
    }

    /// `(H1 H2 H3)^3` against `H1^3 H2^3 H3^3` for ample classes.
    pub fn ample_positivity_check(&self, h1: &[Q], h2: &[Q], h3: &[Q]) -> Result<AmplePositivity> {
        for h in [h1, h2, h3] {
            self.require_ample_q(h)?;
        }
        let t = self.triple(h1, h2, h3);
        let lhs = &t * &t * &t;
        let rhs = self.cube(h1) * self.cube(h2) * self.cube(h3);
        let holds = lhs >= rhs;
        Ok(AmplePositivity { lhs, rhs, holds })
    }

    /// Quintic hypersurface in P^4: `H^3 = 5`, `c_2·H = 50`, `χ = -200`.
    pub fn quintic() -> Self {
        Self::new("quintic", 1, &[(0, 0, 0, q(5))], vec![q(50)], -200, vec![vec![q(1)]])
            .expect("quintic preset is valid")
    }

    /// Elliptic fibration over P^2 (degree-18 hypersurface in P(1,1,1,6,9)),
    /// basis `J_1 = π*ℓ`, `J_2 = σ + 3π*ℓ`.
    pub fn elliptic_p2() -> Self {
        Self::new(
            "elliptic-p2",
            2,
            &[(0, 0, 1, q(1)), (0, 1, 1, q(3)), (1, 1, 1, q(9))],
            vec![q(36), q(102)],
            -540,
            vec![vec![q(1), q(0)], vec![q(0), q(1)]],
        )
        .expect("elliptic-p2 preset is valid")
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "quintic" => Some(Self::quintic()),
            "elliptic-p2" | "p2-elliptic" => Some(Self::elliptic_p2()),
            _ => None,
        }
    }

    pub fn preset_names() -> &'static [&'static str] {
        &["quintic", "elliptic-p2"]
    }
}

pub fn dot<T: Coefficient>(u: &[T], v: &[T]) -> T {
    u.iter()
        .zip(v)
        .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}
