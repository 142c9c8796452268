//! Four-term mean iterations and their limits in terms of `F_S`.

use serde::Serialize;

use crate::configuration::MeanState;
use crate::error::{Error, Result};
use crate::hypergeometric::{fs, gauss2f1, HGParams, SeriesCtrl, ZMatrix};
use crate::{c64, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    D4,
    Borchardt,
}

impl MeanKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            MeanKind::D4 => "d4",
            MeanKind::Borchardt => "borchardt",
        }
    }
}

/// `d₁..d₄`, `Q₁ = d₁d₂d₃d₄` and `c₀²` of a state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DQuantities {
    pub d: [f64; 4],
    pub q1: f64,
    /// `(c₁²−c₂²−c₃²+c₄²+√Q₁)/2`, when `Q₁ ≥ 0`.
    pub c0sq: Option<f64>,
    /// `(c₁²−c₂²−c₃²+c₄²−√Q₁)/2`, when `Q₁ ≥ 0`.
    pub c0sq_minus: Option<f64>,
}

impl DQuantities {
    pub fn of(s: &MeanState) -> Self {
        let [c1, c2, c3, c4] = s.c;
        let d = [c1 + c2 + c3 + c4, c1 + c2 - c3 - c4, c1 - c2 + c3 - c4, c1 - c2 - c3 + c4];
        let q1 = d.iter().product::<f64>();
        let base = c1 * c1 - c2 * c2 - c3 * c3 + c4 * c4;
        let (c0sq, c0sq_minus) =
            if q1 >= 0.0 { (Some((base + q1.sqrt()) / 2.0), Some((base - q1.sqrt()) / 2.0)) } else { (None, None) };
        Self { d, q1, c0sq, c0sq_minus }
    }
}

/// One step on `(c, (c₁−c₂, c₂−c₃, c₃−c₄))`, returning the new state and
/// its consecutive differences and `c₁−c₂−c₃+c₄` computed without cancellation.
fn tracked_step(kind: MeanKind, c: [f64; 4], d: [f64; 3]) -> ([f64; 4], [f64; 3], f64) {
    let [u1, u2, u3, u4] = c;
    let [d12, d23, d34] = d;
    let d14 = d12 + d23 + d34;
    let m1 = (u1 + u2 + u3 + u4) / 4.0;
    let (e, d4) = match kind {
        MeanKind::D4 => {
            let m2 = ((u1 + u3) * (u2 + u4)).sqrt() / 2.0;
            let m3 = ((u1 + u2) * (u3 + u4)).sqrt() / 2.0;
            let m4 = ((u1 * u4 + u2 * u3) / 2.0).sqrt();
            let e = [
                (d12 + d34).powi(2) / (16.0 * (m1 + m2)),
                d14 * d23 / (4.0 * (m2 + m3)),
                d12 * d34 / (4.0 * (m3 + m4)),
            ];
            (e, e[0] - e[2])
        }
        MeanKind::Borchardt => {
            let r = [u1.sqrt(), u2.sqrt(), u3.sqrt(), u4.sqrt()];
            let s12 = d12 / (r[0] + r[1]);
            let s34 = d34 / (r[2] + r[3]);
            let s14 = d14 / (r[0] + r[3]);
            let s23 = d23 / (r[1] + r[2]);
            ([(s12 * s12 + s34 * s34) / 4.0, s14 * s23 / 2.0, s12 * s34 / 2.0], (s12 - s34).powi(2) / 4.0)
        }
    };
    let m2 = m1 - e[0];
    let m3 = m2 - e[1];
    let m4 = m3 - e[2];
    ([m1, m2, m3, m4], e, d4)
}

fn diffs(c: &[f64; 4]) -> [f64; 3] {
    [c[0] - c[1], c[1] - c[2], c[2] - c[3]]
}

pub fn mean_step(kind: MeanKind, u: &MeanState) -> Result<MeanState> {
    let u = MeanState::new(u.c)?;
    let (c, _, _) = tracked_step(kind, u.c, diffs(&u.c));
    MeanState::new(c)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterTrace {
    pub states: Vec<MeanState>,
    /// `(c₁−c₂, c₂−c₃, c₃−c₄)` of each state, propagated without cancellation.
    pub diffs: Vec<[f64; 3]>,
    /// `c₁−c₄` of each state.
    pub gaps: Vec<f64>,
    /// `c₁−c₂−c₃+c₄` of each state, propagated without cancellation.
    pub d4: Vec<f64>,
    /// `(m₁²−m₂²)/(m₃²−m₄²)` of each state.
    pub ratio_s: Vec<Option<f64>>,
    /// `(m₁²−m₃²)/(m₂²−m₄²)` of each state.
    pub ratio_t: Vec<Option<f64>>,
    /// `gap_{n+1}/gap_n²`.
    pub rate_constants: Vec<f64>,
    /// `1/(2(m₁+m₄))` of the new state, the bound on `rate_constants` for the D4 map.
    pub rate_bounds: Vec<f64>,
    /// `ln(g_n/g_{n−1})/ln(g_{n−1}/g_{n−2})` over the last three positive gaps.
    pub fitted_exponent: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MeanLimit {
    pub limit: f64,
    pub iterations: usize,
    pub trace: IterTrace,
}

fn ratio(num: f64, den: f64) -> Option<f64> {
    let r = num / den;
    (den > 0.0 && r.is_finite()).then_some(r)
}

pub fn iterate_mean(kind: MeanKind, c: &MeanState, tol: f64, maxit: usize) -> Result<MeanLimit> {
    if !(tol > 0.0) {
        return Err(Error::InvalidParams(format!("tol = {tol} must be positive")));
    }
    let mut state = MeanState::new(c.c)?.c;
    let mut d = diffs(&state);
    let mut trace = IterTrace {
        states: Vec::new(),
        diffs: Vec::new(),
        gaps: Vec::new(),
        d4: Vec::new(),
        ratio_s: Vec::new(),
        ratio_t: Vec::new(),
        rate_constants: Vec::new(),
        rate_bounds: Vec::new(),
        fitted_exponent: None,
    };
    let record = |trace: &mut IterTrace, s: [f64; 4], d: [f64; 3], d4: f64| {
        trace.states.push(MeanState { c: s });
        trace.diffs.push(d);
        trace.d4.push(d4);
        trace.gaps.push(d.iter().sum());
        trace.ratio_s.push(ratio(d[0] * (s[0] + s[1]), d[2] * (s[2] + s[3])));
        trace.ratio_t.push(ratio((d[0] + d[1]) * (s[0] + s[2]), (d[1] + d[2]) * (s[1] + s[3])));
    };
    record(&mut trace, state, d, d[0] - d[2]);
    let mut n = 0;
    while trace.gaps[n] >= tol * state[0] {
        if n == maxit {
            return Err(Error::NoConvergence(format!("gap {} after {maxit} iterations", trace.gaps[n])));
        }
        let d4;
        (state, d, d4) = tracked_step(kind, state, d);
        record(&mut trace, state, d, d4);
        n += 1;
        trace.rate_constants.push(trace.gaps[n] / trace.gaps[n - 1].powi(2));
        trace.rate_bounds.push(1.0 / (2.0 * (state[0] + state[3])));
    }
    let pos: Vec<f64> = trace.gaps.iter().copied().filter(|g| *g > 0.0).collect();
    if pos.len() >= 3 {
        let k = pos.len();
        let (g0, g1, g2) = (pos[k - 3], pos[k - 2], pos[k - 1]);
        let p = (g2 / g1).ln() / (g1 / g0).ln();
        trace.fitted_exponent = p.is_finite().then_some(p);
    }
    Ok(MeanLimit { limit: state[0], iterations: n, trace })
}

/// The two argument matrices of the D4 limit formula.
pub fn d4_zw(c: &MeanState) -> (ZMatrix, ZMatrix) {
    let [c1, c2, c3, c4] = c.c.map(|v| v * v);
    let z = ZMatrix::real([1.0 - (c3 - c4) / (c1 - c2), 0.0, 1.0 - c1 * (c3 - c4) / (c3 * (c1 - c2)), 1.0 - c4 / c3]);
    let w = ZMatrix::real([1.0 - c4 / c2, 1.0 - c1 * (c2 - c4) / (c2 * (c1 - c3)), 0.0, 1.0 - (c2 - c4) / (c1 - c3)]);
    (z, w)
}

/// `√(d₁d₃), √(d₂d₄), √(d₁d₂), √(d₃d₄)`.
fn borchardt_abcd(c: &MeanState) -> [f64; 4] {
    let d = DQuantities::of(c).d;
    [(d[0] * d[2]).sqrt(), (d[1] * d[3]).sqrt(), (d[0] * d[1]).sqrt(), (d[2] * d[3]).sqrt()]
}

/// The two argument matrices of the Borchardt limit formula; needs `d₄ > 0`.
pub fn borchardt_zw(c: &MeanState) -> (ZMatrix, ZMatrix) {
    let [c1, c2, c3, c4] = c.c;
    let [a, b, cc, dd] = borchardt_abcd(c);
    let f = (a - b) / (a + b);
    let g = (cc - dd) / (cc + dd);
    let z = ZMatrix::real([1.0 - c4 / c2 * f, 1.0 - c1 / c2 * g, 1.0 - c1 / c3 * f, 1.0 - c4 / c3 * g]);
    let w = ZMatrix::real([1.0 - c4 / c2 / f, 1.0 - c1 / c2 / g, 1.0 - c1 / c3 / f, 1.0 - c4 / c3 / g]);
    (z, w)
}

/// Prefactors multiplying `1/F_S(z)` and `1/F_S(w)`.
fn prefactors(kind: MeanKind, c: &MeanState) -> (f64, f64) {
    let [c1, c2, c3, c4] = c.c;
    match kind {
        MeanKind::D4 => (
            ((c1 * c1 - c2 * c2) / (c3 * c3 - c4 * c4)).sqrt() * c3,
            ((c1 * c1 - c3 * c3) / (c2 * c2 - c4 * c4)).sqrt() * c2,
        ),
        MeanKind::Borchardt => {
            let [a, b, cc, dd] = borchardt_abcd(c);
            let pre = 4.0 * (c2 * c3 * (c1 * c2 - c3 * c4) * (c1 * c3 - c2 * c4)).sqrt();
            (pre / ((cc - dd) * (a - b)), pre / ((cc + dd) * (a + b)))
        }
    }
}

pub fn zw(kind: MeanKind, c: &MeanState) -> (ZMatrix, ZMatrix) {
    match kind {
        MeanKind::D4 => d4_zw(c),
        MeanKind::Borchardt => borchardt_zw(c),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LimitCtrl {
    pub series: SeriesCtrl,
    pub max_pre_steps: usize,
    /// Relative bound on `|value_z − value_w|`.
    pub agreement_tol: f64,
}

impl Default for LimitCtrl {
    fn default() -> Self {
        Self { series: SeriesCtrl::default(), max_pre_steps: 20, agreement_tol: 1e-8 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LimitFormula {
    pub value_z: f64,
    pub value_w: f64,
    pub z: ZMatrix,
    pub w: ZMatrix,
    /// The state the formulas were evaluated at.
    pub state: MeanState,
    pub pre_steps: usize,
    pub degrees: [usize; 2],
}

fn formula_ready(kind: MeanKind, c: &MeanState, margin: f64) -> bool {
    if !c.is_strict() {
        return false;
    }
    if kind == MeanKind::Borchardt && DQuantities::of(c).d[3] <= 0.0 {
        return false;
    }
    let (z, w) = zw(kind, c);
    z.z.iter().chain(w.z.iter()).all(|v| v.re.is_finite()) && z.fits(margin) && w.fits(margin)
}

pub fn limit_formula(kind: MeanKind, c: &MeanState, ctrl: &LimitCtrl) -> Result<LimitFormula> {
    let mut state = MeanState::new(c.c)?;
    if !state.is_strict() {
        return Err(Error::Precondition(format!("{:?} is not strictly ordered", state.c)));
    }
    let mut pre_steps = 0;
    while !formula_ready(kind, &state, ctrl.series.margin) {
        if pre_steps == ctrl.max_pre_steps {
            return Err(Error::PreIterationExhausted(pre_steps));
        }
        state = mean_step(kind, &state)?;
        pre_steps += 1;
        if !state.is_strict() {
            return Err(Error::Precondition(format!("iterate {:?} lost strict order", state.c)));
        }
    }
    let (z, w) = zw(kind, &state);
    let (pz, pw) = prefactors(kind, &state);
    let alpha = HGParams::half();
    let fz = fs(&alpha, &z, &ctrl.series)?;
    let fw = fs(&alpha, &w, &ctrl.series)?;
    let value_z = pz / fz.value.re;
    let value_w = pw / fw.value.re;
    if (value_z - value_w).abs() > ctrl.agreement_tol * value_z.abs().max(value_w.abs()) {
        return Err(Error::InconsistentRatio(format!("z-form {value_z} and w-form {value_w} disagree")));
    }
    Ok(LimitFormula { value_z, value_w, z, w, state, pre_steps, degrees: [fz.degree, fw.degree] })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassicalAgm {
    pub limit: f64,
    /// `c₁/F(½,½,1;1−(c₂/c₁)²)`.
    pub formula_value: f64,
    pub iterations: usize,
}

pub fn classical_agm(c1: f64, c2: f64, tol: f64) -> Result<ClassicalAgm> {
    if !(c1 >= c2 && c2 > 0.0 && c1.is_finite()) {
        return Err(Error::OrderViolation(format!("({c1}, {c2}) is not ordered c1>=c2>0")));
    }
    let (mut a, mut g, mut iterations) = (c1, c2, 0);
    while a - g > tol * a {
        if iterations == 200 {
            return Err(Error::NoConvergence(format!("gap {} after 200 iterations", a - g)));
        }
        let diff = (a - g).powi(2) / (4.0 * (a + g) / 2.0 + 4.0 * (a * g).sqrt());
        a = (a + g) / 2.0;
        g = a - diff;
        iterations += 1;
    }
    let h = c64(0.5, 0.0);
    let x: C64 = c64(1.0 - (c2 / c1).powi(2), 0.0);
    let f = gauss2f1(h, h, c64(1.0, 0.0), x, &SeriesCtrl::default())?;
    Ok(ClassicalAgm { limit: a, formula_value: c1 / f.value.re, iterations })
}
