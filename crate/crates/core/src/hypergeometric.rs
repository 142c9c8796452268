//! The Gauss function ₂F₁ and the four-variable series `F_S`, `F_T`.
//!
//! `F_S` and `F_T` are summed by total degree. Every coefficient is built
//! from running Pochhammer ratios and binomial rows of bounded magnitude,
//! so no factorial or gamma value is ever formed.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::quadrature::JacobiRule;
use crate::{c64, C64};

/// Parameters `α₁..α₆` with `α₁+…+α₆ = 3`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HGParams {
    alpha: [C64; 6],
}

impl HGParams {
    pub fn new(alpha: [C64; 6]) -> Result<Self> {
        let s: C64 = alpha.iter().sum();
        if (s - 3.0).norm() > 1e-12 {
            return Err(Error::InvalidParams(format!("parameters must sum to 3, got {s}")));
        }
        Ok(Self { alpha })
    }

    pub fn real(alpha: [f64; 6]) -> Result<Self> {
        Self::new(alpha.map(|a| c64(a, 0.0)))
    }

    /// The canonical instance `α = (1/2, …, 1/2)`.
    pub fn half() -> Self {
        Self { alpha: [c64(0.5, 0.0); 6] }
    }

    pub fn alpha(&self) -> &[C64; 6] {
        &self.alpha
    }

    fn check(&self, kind: SeriesKind) -> Result<()> {
        let a = &self.alpha;
        let bad = |x: C64| x.im.abs() < 1e-14 && x.re > -1e-14 && (x.re - x.re.round()).abs() < 1e-14;
        let offending = match kind {
            SeriesKind::S => bad(a[0] + a[2] - 2.0) || bad(a[1] + a[3] - 2.0),
            SeriesKind::T => bad(a[0] + a[1] + a[2] - 3.0),
        };
        if offending {
            return Err(Error::InvalidParams(format!("denominator parameter of F_{kind:?} is a non-positive integer")));
        }
        Ok(())
    }
}

/// Which of the two series.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesKind {
    S,
    T,
}

/// The argument `z = [[z₁, z₃], [z₂, z₄]]`, stored as `[z₁, z₂, z₃, z₄]`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct ZMatrix {
    pub z: [C64; 4],
}

impl ZMatrix {
    pub fn new(z1: C64, z2: C64, z3: C64, z4: C64) -> Self {
        Self { z: [z1, z2, z3, z4] }
    }

    pub fn real(z: [f64; 4]) -> Self {
        Self { z: z.map(|t| c64(t, 0.0)) }
    }

    pub fn zero() -> Self {
        Self::real([0.0; 4])
    }

    /// `(|z₁|+|z₂|, |z₃|+|z₄|)`, the two column sums of the matrix.
    pub fn column_sums(&self) -> [f64; 2] {
        [self.z[0].norm() + self.z[1].norm(), self.z[2].norm() + self.z[3].norm()]
    }

    pub fn max_column_sum(&self) -> f64 {
        let [a, b] = self.column_sums();
        a.max(b)
    }

    /// Both column sums strictly below one.
    pub fn in_series_domain(&self) -> bool {
        self.max_column_sum() < 1.0
    }

    /// Both column sums below `1 − margin` (and below one).
    pub fn fits(&self, margin: f64) -> bool {
        let m = self.max_column_sum();
        m < 1.0 && m <= 1.0 - margin
    }
}

/// Truncation control for series.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesCtrl {
    /// Absolute target for the magnitude of the neglected degree slices.
    pub tol: f64,
    /// Cap on the total degree.
    pub max_degree: usize,
    /// Required distance of the column sums from one.
    pub margin: f64,
}

impl Default for SeriesCtrl {
    fn default() -> Self {
        Self { tol: 1e-15, max_degree: 3000, margin: 0.0 }
    }
}

impl SeriesCtrl {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_degree == 0 || !(0.0..1.0).contains(&self.margin) {
            return Err(Error::InvalidParams(format!("bad series control {self:?}")));
        }
        Ok(())
    }
}

/// A truncated sum together with the degree at which it stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: C64,
    pub degree: usize,
}

/// Rising factorial `(a)_n = a(a+1)⋯(a+n−1)` by the product recurrence.
pub fn pochhammer(a: C64, n: usize) -> C64 {
    (0..n).fold(c64(1.0, 0.0), |acc, k| acc * (a + k as f64))
}

fn is_nonpositive_integer(c: C64) -> bool {
    c.im == 0.0 && c.re <= 0.0 && c.re == c.re.round()
}

/// Gauss hypergeometric series `F(a, b, c; x)` for `|x| < 1`.
pub fn gauss2f1(a: C64, b: C64, c: C64, x: C64, ctrl: &SeriesCtrl) -> Result<SeriesValue> {
    ctrl.validate()?;
    if x.norm() >= 1.0 {
        return Err(Error::Domain(format!("|x| = {} is not below 1", x.norm())));
    }
    if is_nonpositive_integer(c) {
        return Err(Error::Domain(format!("c = {c} is a non-positive integer")));
    }
    let mut sum = c64(1.0, 0.0);
    let mut term = c64(1.0, 0.0);
    let mut small = 0;
    for n in 0..ctrl.max_degree {
        let nf = n as f64;
        let ratio = (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * x;
        term *= ratio;
        sum += term;
        // Geometric tail estimate; the term ratio tends monotonically to |x|.
        let q = ratio.norm().max(x.norm());
        if q < 1.0 && term.norm() * q / (1.0 - q) < ctrl.tol {
            small += 1;
            if small == 2 {
                return Ok(SeriesValue { value: sum, degree: n + 1 });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(format!("2F1 at x = {x} needs more than {} terms", ctrl.max_degree)))
}

/// `F(1/2, 1/2, 1; x)` for real `x ∈ (−1, 1)`.
pub fn k_series(x: f64, ctrl: &SeriesCtrl) -> Result<f64> {
    let h = c64(0.5, 0.0);
    Ok(gauss2f1(h, h, c64(1.0, 0.0), c64(x, 0.0), ctrl)?.value.re)
}

/// Elliptic periods `(ω_A, ω_B) = (iπF(½,½,1;1−λ), πF(½,½,1;λ))` for `λ ∈ (0,1)`.
pub fn elliptic_periods(lambda: f64, ctrl: &SeriesCtrl) -> Result<(C64, C64)> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::Domain(format!("lambda = {lambda} is not in (0, 1)")));
    }
    let a = k_series(1.0 - lambda, ctrl)?;
    let b = k_series(lambda, ctrl)?;
    Ok((c64(0.0, PI * a), c64(PI * b, 0.0)))
}

/// Binomial rows `U[r][k] = C(r,k) x^k y^(r−k)`, with the index range that
/// can be nonzero when `x` or `y` vanishes.
struct BinomialRows {
    x: C64,
    y: C64,
    rows: Vec<Vec<C64>>,
}

impl BinomialRows {
    fn new(x: C64, y: C64) -> Self {
        Self { x, y, rows: vec![vec![c64(1.0, 0.0)]] }
    }

    fn grow_to(&mut self, r: usize) {
        while self.rows.len() <= r {
            let prev = self.rows.last().unwrap();
            let n = prev.len();
            let mut row = Vec::with_capacity(n + 1);
            for k in 0..=n {
                let mut v = c64(0.0, 0.0);
                if k > 0 {
                    v += self.x * prev[k - 1];
                }
                if k < n {
                    v += self.y * prev[k];
                }
                row.push(v);
            }
            self.rows.push(row);
        }
    }

    fn range(&self, r: usize) -> std::ops::RangeInclusive<usize> {
        let lo = if self.y == c64(0.0, 0.0) { r } else { 0 };
        let hi = if self.x == c64(0.0, 0.0) { 0 } else { r };
        if lo > hi {
            #[allow(clippy::reversed_empty_ranges)]
            return 1..=0;
        }
        lo..=hi
    }
}

/// Running ratio table `t[n] = (num)_n / (den)_n` or `(num)_n / n!`.
struct RatioTable {
    num: C64,
    den: C64,
    vals: Vec<C64>,
}

impl RatioTable {
    fn new(num: C64, den: C64) -> Self {
        Self { num, den, vals: vec![c64(1.0, 0.0)] }
    }

    fn grow_to(&mut self, n: usize) {
        while self.vals.len() <= n {
            let k = (self.vals.len() - 1) as f64;
            let last = *self.vals.last().unwrap();
            self.vals.push(last * (self.num + k) / (self.den + k));
        }
    }
}

/// `C[p][q] = (1−α₁)_p (1−α₂)_q / (3−α₁−α₂−α₃)_{p+q}`, grown along anti-diagonals.
struct SimplexTable {
    a1: C64,
    a2: C64,
    g: C64,
    rows: Vec<Vec<C64>>,
}

impl SimplexTable {
    fn new(a1: C64, a2: C64, g: C64) -> Self {
        Self { a1, a2, g, rows: vec![vec![c64(1.0, 0.0)]] }
    }

    fn grow_to(&mut self, n: usize) {
        while self.rows.len() <= n {
            let p = self.rows.len();
            let first = self.rows[p - 1][0] * (self.a1 + (p - 1) as f64) / (self.g + (p - 1) as f64);
            self.rows.push(vec![first]);
        }
        for p in 0..=n {
            let row = &mut self.rows[p];
            while row.len() <= n - p {
                let q = row.len();
                let last = row[q - 1];
                row.push(last * (self.a2 + (q - 1) as f64) / (self.g + (p + q - 1) as f64));
            }
        }
    }

    fn get(&self, p: usize, q: usize) -> C64 {
        self.rows[p][q]
    }
}

enum Coefficients {
    S { a1: RatioTable, a2: RatioTable },
    T(SimplexTable),
}

impl Coefficients {
    fn grow_to(&mut self, n: usize) {
        match self {
            Coefficients::S { a1, a2 } => {
                a1.grow_to(n);
                a2.grow_to(n);
            }
            Coefficients::T(t) => t.grow_to(n),
        }
    }

    fn get(&self, p: usize, q: usize) -> C64 {
        match self {
            Coefficients::S { a1, a2 } => a1.vals[p] * a2.vals[q],
            Coefficients::T(t) => t.get(p, q),
        }
    }
}

fn four_variable_series(kind: SeriesKind, alpha: &HGParams, z: &ZMatrix, ctrl: &SeriesCtrl) -> Result<SeriesValue> {
    ctrl.validate()?;
    alpha.check(kind)?;
    if !z.fits(ctrl.margin) {
        return Err(Error::Domain(format!(
            "column sums {:?} of z are not below 1 - {}",
            z.column_sums(),
            ctrl.margin
        )));
    }
    let a = alpha.alpha();
    let one = c64(1.0, 0.0);
    let mut coef = match kind {
        SeriesKind::S => Coefficients::S {
            a1: RatioTable::new(one - a[0], 2.0 - a[0] - a[2]),
            a2: RatioTable::new(one - a[1], 2.0 - a[1] - a[3]),
        },
        SeriesKind::T => Coefficients::T(SimplexTable::new(one - a[0], one - a[1], 3.0 - a[0] - a[1] - a[2])),
    };
    let mut b5 = RatioTable::new(a[4], one);
    let mut b6 = RatioTable::new(a[5], one);
    let [z1, z2, z3, z4] = z.z;
    let mut u = BinomialRows::new(z1, z2);
    let mut v = BinomialRows::new(z3, z4);
    let [rho1, rho2] = z.column_sums();

    let mut sum = c64(0.0, 0.0);
    let mut small = 0;
    let mut ev: Vec<C64> = Vec::new();
    for n in 0..=ctrl.max_degree {
        coef.grow_to(n);
        b5.grow_to(n);
        b6.grow_to(n);
        u.grow_to(n);
        v.grow_to(n);
        ev.clear();
        ev.extend((0..=n).map(|p| coef.get(p, n - p)));
        let emax = ev.iter().fold(0.0f64, |m, x| m.max(x.norm()));

        let mut slice = c64(0.0, 0.0);
        let mut bound = 0.0;
        for r in 0..=n {
            let s = n - r;
            let w = b5.vals[r] * b6.vals[s];
            bound += w.norm() * rho1.powi(r as i32) * rho2.powi(s as i32);
            let ur = &u.rows[r];
            let vs = &v.rows[s];
            let mut acc = c64(0.0, 0.0);
            for k in u.range(r) {
                let uk = ur[k];
                let mut inner = c64(0.0, 0.0);
                for l in v.range(s) {
                    inner += ev[k + l] * vs[l];
                }
                acc += uk * inner;
            }
            slice += w * acc;
        }
        sum += slice;
        if emax * bound < ctrl.tol {
            small += 1;
            if small == 2 {
                return Ok(SeriesValue { value: sum, degree: n });
            }
        } else {
            small = 0;
        }
    }
    Err(Error::NoConvergence(format!(
        "F_{kind:?} at z = {:?} needs degree beyond {}",
        z.z, ctrl.max_degree
    )))
}

/// `F_S(α; z)` by degree-sliced summation.
pub fn fs(alpha: &HGParams, z: &ZMatrix, ctrl: &SeriesCtrl) -> Result<SeriesValue> {
    four_variable_series(SeriesKind::S, alpha, z, ctrl)
}

/// `F_T(α; z)` by degree-sliced summation.
pub fn ft(alpha: &HGParams, z: &ZMatrix, ctrl: &SeriesCtrl) -> Result<SeriesValue> {
    four_variable_series(SeriesKind::T, alpha, z, ctrl)
}

/// Quadrature scheme for the Euler-integral oracle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QuadScheme {
    /// Gauss–Jacobi rules whose weights absorb the endpoint powers.
    GaussJacobi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadCtrl {
    pub nodes: usize,
    pub scheme: QuadScheme,
}

impl QuadCtrl {
    pub fn new(nodes: usize) -> Self {
        Self { nodes, scheme: QuadScheme::GaussJacobi }
    }
}

fn kernel_power(base: C64, exponent: C64) -> Result<C64> {
    if base.re <= 0.0 {
        return Err(Error::Domain(format!("Euler kernel factor {base} reaches the branch cut")));
    }
    Ok((-exponent * base.ln()).exp())
}

/// Euler-integral value of `F_S` or `F_T` by tensor Gauss–Jacobi quadrature.
///
/// Restricted to real parameters. The endpoint powers are carried by the
/// Jacobi weights; the simplex is mapped to the square by
/// `s₁ = u, s₂ = (1−u)v`.
pub fn euler_oracle(kind: SeriesKind, alpha: &HGParams, z: &ZMatrix, quad: &QuadCtrl) -> Result<C64> {
    if quad.nodes < 4 {
        return Err(Error::InvalidParams(format!("quadrature needs at least 4 nodes, got {}", quad.nodes)));
    }
    let a = alpha.alpha();
    if a.iter().any(|x| x.im != 0.0) {
        return Err(Error::Domain("the Euler oracle supports real parameters only".into()));
    }
    let r: Vec<f64> = a.iter().map(|x| x.re).collect();
    let needs_below_one = match kind {
        SeriesKind::S => &r[..4],
        SeriesKind::T => &r[..3],
    };
    if needs_below_one.iter().any(|&x| x >= 1.0) {
        return Err(Error::Domain(format!("integral representation needs Re(alpha) < 1, got {r:?}")));
    }
    let [z1, z2, z3, z4] = z.z;
    let n = quad.nodes;
    let (first, second) = match kind {
        SeriesKind::S => (JacobiRule::new(n, -r[0], -r[2])?, JacobiRule::new(n, -r[1], -r[3])?),
        SeriesKind::T => (JacobiRule::new(n, -r[0], 1.0 - r[1] - r[2])?, JacobiRule::new(n, -r[1], -r[2])?),
    };
    let mut total = c64(0.0, 0.0);
    for (&x, &wx) in first.nodes.iter().zip(&first.weights) {
        for (&y, &wy) in second.nodes.iter().zip(&second.weights) {
            let (s1, s2) = match kind {
                SeriesKind::S => (x, y),
                SeriesKind::T => (x, (1.0 - x) * y),
            };
            let k5 = kernel_power(1.0 - z1 * s1 - z2 * s2, a[4])?;
            let k6 = kernel_power(1.0 - z3 * s1 - z4 * s2, a[5])?;
            total += wx * wy * k5 * k6;
        }
    }
    Ok(total)
}
