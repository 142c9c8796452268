//! Numerical verification of the identities, each returning a [`VerifyReport`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::Serialize;

use crate::agm::{iterate_mean, limit_formula, mean_step, LimitCtrl, MeanKind};
use crate::configuration::{brackets, kummer_point, nu, MeanState, Partition33, PeriodIndex};
use crate::domains_groups::{act, GroupElem};
use crate::error::{Error, Result};
use crate::hypergeometric::{elliptic_periods, fs, k_series, HGParams, SeriesCtrl, ZMatrix};
use crate::periods::{apply_signs, period_squares, resolve_signs, tau_of, Tau};
use crate::theta::{
    riemann_theta, theta_ab, theta_char, theta_vector, two_tau_sides, Characteristic, LatticeCtrl,
};
use crate::{c64, e, C64};

/// Tolerance for genus-one identities.
pub const TOL_GENUS_ONE: f64 = 1e-10;
/// Tolerance for lattice identities of `Θ`.
pub const TOL_THETA: f64 = 1e-9;
/// Relative tolerance for the full Thomae pipeline.
pub const TOL_THOMAE: f64 = 1e-7;
/// Relative tolerance for mean limits and functional equations.
pub const TOL_AGM: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residual {
    pub abs: f64,
    pub rel: f64,
    pub tol: f64,
    /// Whether `rel` (rather than `abs`) is compared with `tol`.
    pub relative: bool,
    pub pass: bool,
}

impl Residual {
    pub fn between(lhs: C64, rhs: C64, tol: f64, relative: bool) -> Self {
        let abs = (lhs - rhs).norm();
        let scale = lhs.norm().max(rhs.norm());
        let rel = if abs == 0.0 { 0.0 } else { abs / scale };
        let pass = if relative { rel <= tol } else { abs <= tol };
        Self { abs, rel, tol, relative, pass }
    }

    /// `value ≥ floor`, recording the shortfall.
    pub fn at_least(value: f64, floor: f64) -> Self {
        let abs = (floor - value).max(0.0);
        Self { abs, rel: abs / floor.abs().max(f64::MIN_POSITIVE), tol: 0.0, relative: false, pass: value >= floor }
    }
}

/// Loosely typed payload for inputs and diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Datum {
    Int(i64),
    Real(f64),
    Complex(C64),
    Ints(Vec<i64>),
    Reals(Vec<f64>),
    Complexes(Vec<C64>),
    Text(String),
    Bool(bool),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub inputs: BTreeMap<String, Datum>,
    pub residuals: BTreeMap<String, Residual>,
    pub pass: bool,
    pub diagnostics: BTreeMap<String, Datum>,
}

impl VerifyReport {
    fn new(name: &str) -> Self {
        Self {
            name: name.into(),
            inputs: BTreeMap::new(),
            residuals: BTreeMap::new(),
            pass: true,
            diagnostics: BTreeMap::new(),
        }
    }

    fn input(&mut self, k: &str, v: Datum) {
        self.inputs.insert(k.into(), v);
    }

    fn diag(&mut self, k: &str, v: Datum) {
        self.diagnostics.insert(k.into(), v);
    }

    fn check(&mut self, k: impl Into<String>, r: Residual) {
        self.pass &= r.pass;
        self.residuals.insert(k.into(), r);
    }

    /// Largest residual, measured the way each one is tested.
    pub fn worst(&self) -> f64 {
        self.residuals.values().map(|r| if r.relative { r.rel } else { r.abs }).fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyCtrl {
    pub series: SeriesCtrl,
    pub lattice: LatticeCtrl,
    /// Overrides the per-identity default tolerance.
    pub tol: Option<f64>,
    pub max_pre_steps: usize,
    /// Stopping tolerance for mean iterations.
    pub iter_tol: f64,
}

impl Default for VerifyCtrl {
    fn default() -> Self {
        Self { series: SeriesCtrl::default(), lattice: LatticeCtrl::default(), tol: None, max_pre_steps: 20, iter_tol: 1e-15 }
    }
}

impl VerifyCtrl {
    fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }
}

fn tau_datum(t: &Tau) -> Datum {
    Datum::Complexes(t.m.iter().flatten().copied().collect())
}

fn z_datum(z: &ZMatrix) -> Datum {
    Datum::Complexes(z.z.to_vec())
}

fn jacobi_theta(a: u8, b: u8, tau: C64, ctrl: &LatticeCtrl) -> Result<(C64, usize)> {
    let v = riemann_theta(&[a as f64 / 2.0], &[b as f64 / 2.0], &[tau], ctrl)?;
    Ok((v.value, v.radius))
}

/// `ϑ⁴_[ab](τ) = Λ_[ab]ω_B²/π²` with `τ = ω_A/ω_B`, and the classical 2τ-formulas.
pub fn verify_jacobi(lambda: f64, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_GENUS_ONE);
    let (wa, wb) = elliptic_periods(lambda, &ctrl.series)?;
    let tau = wa / wb;
    let mut r = VerifyReport::new("jacobi");
    r.input("lambda", Datum::Real(lambda));
    let base = wb * wb / (PI * PI);
    let (t00, r00) = jacobi_theta(0, 0, tau, &ctrl.lattice)?;
    let (t01, _) = jacobi_theta(0, 1, tau, &ctrl.lattice)?;
    let (t10, _) = jacobi_theta(1, 0, tau, &ctrl.lattice)?;
    r.check("theta00^4", Residual::between(t00.powi(4), base, tol, false));
    r.check("theta01^4", Residual::between(t01.powi(4), (1.0 - lambda) * base, tol, false));
    r.check("theta10^4", Residual::between(t10.powi(4), lambda * base, tol, false));
    let (s00, _) = jacobi_theta(0, 0, 2.0 * tau, &ctrl.lattice)?;
    let (s01, _) = jacobi_theta(0, 1, 2.0 * tau, &ctrl.lattice)?;
    let (s10, _) = jacobi_theta(1, 0, 2.0 * tau, &ctrl.lattice)?;
    r.check("2tau:theta00^2", Residual::between(s00 * s00, (t00 * t00 + t01 * t01) / 2.0, tol, false));
    r.check("2tau:theta01^2", Residual::between(s01 * s01, t00 * t01, tol, false));
    r.check("2tau:theta10^2", Residual::between(s10 * s10, (t00 * t00 - t01 * t01) / 2.0, tol, false));
    r.diag("tau", Datum::Complex(tau));
    r.diag("omega_a", Datum::Complex(wa));
    r.diag("omega_b", Datum::Complex(wb));
    r.diag("radius", Datum::Int(r00 as i64));
    Ok(r)
}

/// `F(½,½,1;1−4z/(1+z)²) = (1+z)/2·F(½,½,1;1−z²)` for `z ∈ (0,1]`.
pub fn verify_gauss_transform(z: f64, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    if !(z > 0.0 && z <= 1.0) {
        return Err(Error::Domain(format!("z = {z} is not in (0, 1]")));
    }
    let tol = ctrl.tol_or(1e-12);
    let series = SeriesCtrl { max_degree: ctrl.series.max_degree.max(200_000), ..ctrl.series };
    let lhs = k_series(1.0 - 4.0 * z / (1.0 + z).powi(2), &series)?;
    let rhs = (1.0 + z) / 2.0 * k_series(1.0 - z * z, &series)?;
    let mut r = VerifyReport::new("gauss");
    r.input("z", Datum::Real(z));
    r.check("transform", Residual::between(c64(lhs, 0.0), c64(rhs, 0.0), tol, false));
    r.diag("lhs", Datum::Real(lhs));
    r.diag("rhs", Datum::Real(rhs));
    Ok(r)
}

fn even_characteristics() -> Vec<Characteristic> {
    Characteristic::all().into_iter().filter(|c| c.is_even()).collect()
}

fn bits(s: &str) -> Characteristic {
    Characteristic::parse(s).expect("static characteristic")
}

/// The general 2τ identity for the ten even characteristics, the four
/// averaged forms and the three product identities.
pub fn verify_2tau(tau: &Tau, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_THETA);
    let lc = &ctrl.lattice;
    let mut r = VerifyReport::new("2tau");
    r.input("tau", tau_datum(tau));
    for ch in even_characteristics() {
        let (lhs, rhs) = two_tau_sides(ch.a(), ch.b(), tau, lc)?;
        r.check(format!("general:{ch}"), Residual::between(lhs, rhs, 4.0 * tol, false));
    }
    let th = |s: &str, t: &Tau| theta_char(bits(s), t, lc).map(|v| v.value);
    let tau2 = tau.scale(c64(2.0, 0.0));
    let (t0, t1, t2, t3) = (th("0000", tau)?, th("0001", tau)?, th("0010", tau)?, th("0011", tau)?);
    for (name, sg) in [("0000", [1.0, 1.0, 1.0]), ("0100", [-1.0, 1.0, -1.0]), ("1000", [1.0, -1.0, -1.0]), ("1100", [-1.0, -1.0, 1.0])] {
        let avg = (t0 + sg[0] * t1 + sg[1] * t2 + sg[2] * t3) / 4.0;
        r.check(format!("average:{name}"), Residual::between(th(name, &tau2)?, avg, tol, false));
    }
    let q1111 = th("1111", &tau2)?.powi(2);
    let lhs = |s: &str| -> Result<C64> { Ok(th(s, &tau2)?.powi(2) + q1111) };
    r.check("corollary:0001", Residual::between(lhs("0001")?, (t0 + t2) / 2.0 * (t1 + t3) / 2.0, tol, false));
    r.check("corollary:0010", Residual::between(lhs("0010")?, (t0 + t1) / 2.0 * (t2 + t3) / 2.0, tol, false));
    r.check("corollary:0011", Residual::between(lhs("0011")?, (t0 * t3 + t1 * t2) / 2.0, tol, false));
    Ok(r)
}

/// Vanishing at odd characteristics, quasi-periodicity in `b`, the transpose
/// law and invariance of `Θ²` under the class of the characteristic.
pub fn verify_theta_laws(tau: &Tau, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_THETA);
    let lc = &ctrl.lattice;
    let mut r = VerifyReport::new("theta-laws");
    r.input("tau", tau_datum(tau));
    let shifts: [[C64; 2]; 12] = [
        [c64(1.0, 0.0), c64(0.0, 0.0)],
        [c64(-1.0, 0.0), c64(0.0, 0.0)],
        [c64(0.0, 1.0), c64(0.0, 0.0)],
        [c64(0.0, -1.0), c64(0.0, 0.0)],
        [c64(0.0, 0.0), c64(1.0, 0.0)],
        [c64(0.0, 0.0), c64(-1.0, 0.0)],
        [c64(0.0, 0.0), c64(0.0, 1.0)],
        [c64(0.0, 0.0), c64(0.0, -1.0)],
        [c64(1.0, 1.0), c64(2.0, -1.0)],
        [c64(-2.0, 2.0), c64(1.0, 0.0)],
        [c64(0.0, 2.0), c64(-2.0, -2.0)],
        [c64(2.0, -1.0), c64(-1.0, 2.0)],
    ];
    let tt = tau.transpose();
    let lift = c64(1.0, -1.0);
    let mut radius = 0;
    for ch in Characteristic::all() {
        let (a, b) = (ch.a(), ch.b());
        let base = theta_ab(a, b, tau, lc)?;
        radius = radius.max(base.radius);
        if !ch.is_even() {
            r.check(format!("odd:{ch}"), Residual::between(base.value, c64(0.0, 0.0), tol, false));
            continue;
        }
        let v = base.value;
        for (k, n) in shifts.iter().enumerate() {
            let shifted = theta_ab(a, [b[0] + n[0], b[1] + n[1]], tau, lc)?.value;
            let phase = e(c64((a[0] * n[0].conj() + a[1] * n[1].conj()).re, 0.0));
            r.check(format!("quasi:{ch}:{k}"), Residual::between(shifted, phase * v, tol, false));
        }
        let tr = theta_ab(a, b, &tt, lc)?.value;
        let cj = theta_ab(a.map(|x| x.conj()), b.map(|x| x.conj()), tau, lc)?.value;
        r.check(format!("transpose:{ch}"), Residual::between(tr, cj, tol, false));
        r.check(format!("transpose-square:{ch}"), Residual::between(tr * tr, v * v, tol, false));
        // Adding 2 to a bit moves a or b by (1−i)eₖ.
        let ca = theta_ab([a[0] + lift, a[1]], b, tau, lc)?.value;
        let cb = theta_ab(a, [b[0], b[1] + lift], tau, lc)?.value;
        r.check(format!("class-a:{ch}"), Residual::between(ca * ca, v * v, tol, false));
        r.check(format!("class-b:{ch}"), Residual::between(cb * cb, v * v, tol, false));
    }
    r.diag("radius", Datum::Int(radius as i64));
    Ok(r)
}

/// On symmetric `τ`, `Θ_ab(τ) = ϑ_{Re a, Re b}(τ)·ϑ_{Im a, Im b}(τ)`.
pub fn verify_h2_decomposition(tau: &Tau, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_THETA);
    let lc = &ctrl.lattice;
    let m = &tau.m;
    let scale = m.iter().flatten().fold(0.0f64, |a, v| a.max(v.norm()));
    if (m[0][1] - m[1][0]).norm() > 1e-12 * scale {
        return Err(Error::NotInSiegel);
    }
    let flat = [m[0][0], m[0][1], m[1][0], m[1][1]];
    let mut r = VerifyReport::new("h2-decomposition");
    r.input("tau", tau_datum(tau));
    for ch in Characteristic::all() {
        let (a, b) = (ch.a(), ch.b());
        let lhs = theta_ab(a, b, tau, lc)?.value;
        let re = riemann_theta(&[a[0].re, a[1].re], &[b[0].re, b[1].re], &flat, lc)?.value;
        let im = riemann_theta(&[a[0].im, a[1].im], &[b[0].im, b[1].im], &flat, lc)?.value;
        r.check(format!("decompose:{ch}"), Residual::between(lhs, re * im, tol, false));
    }
    Ok(r)
}

/// `Θ²_[ab](g·τ) = det(g)det(g₂₁τ+g₂₂)²Θ²_[ab](τ)` for the even characteristics,
/// `Θ²(ᵗτ) = Θ²(τ)` and `ᵗ(ḡ·τ) = g·ᵗτ`.
pub fn verify_theta_transform(g: &GroupElem, tau: &Tau, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_THETA);
    let lc = &ctrl.lattice;
    if !g.is_level() {
        return Err(Error::Precondition("g is not congruent to E4 mod (1+i)".into()));
    }
    let d = g.det();
    let detg = c64(d.re as f64, d.im as f64);
    let a = act(g, tau)?;
    let factor = detg * a.cocycle * a.cocycle;
    let tt = tau.transpose();
    let mut r = VerifyReport::new("theta-transform");
    r.input("tau", tau_datum(tau));
    r.input("g", Datum::Ints(g.matrix().iter().flatten().flat_map(|v| [v.re, v.im]).collect()));
    for ch in even_characteristics() {
        let before = theta_char(ch, tau, lc)?.value.powi(2);
        let after = theta_char(ch, &a.tau, lc)?.value.powi(2);
        r.check(format!("transform:{ch}"), Residual::between(after, factor * before, tol, false));
        let trans = theta_char(ch, &tt, lc)?.value.powi(2);
        r.check(format!("transpose:{ch}"), Residual::between(trans, before, tol, false));
    }
    let lhs = act(&g.conj(), tau)?.tau.transpose();
    let rhs = act(g, &tt)?.tau;
    let dev = (0..2).flat_map(|i| (0..2).map(move |j| (i, j))).map(|(i, j)| (lhs.m[i][j] - rhs.m[i][j]).norm()).fold(0.0, f64::max);
    r.check("transpose-action", Residual::between(c64(dev, 0.0), c64(0.0, 0.0), 1e-12, false));
    r.diag("image", tau_datum(&a.tau));
    r.diag("cocycle", Datum::Complex(a.cocycle));
    r.diag("det_g", Datum::Complex(detg));
    Ok(r)
}

/// `Θ²⟨J⟩(τ(x)) = x⟨J⟩ω₃₄(x)²/(4π⁴)` at `x = ν₃₄(z)`, through the whole pipeline.
pub fn verify_thomae(z: &ZMatrix, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_THOMAE);
    let x = nu(PeriodIndex::P34, z);
    let bx = brackets(&x);
    let ps = period_squares(z, &ctrl.series)?;
    let sr = resolve_signs(&ps.omega_sq)?;
    let w34sq = ps.omega_sq[PeriodIndex::P34.index()];
    let f = fs(&HGParams::half(), z, &ctrl.series)?.value;
    let mut r = VerifyReport::new("thomae");
    r.input("z", z_datum(z));
    let mut thetas = Vec::new();
    let mut radius = 0;
    for s in &sr.survivors {
        let tau = tau_of(&apply_signs(&ps.omega_sq, s))?;
        let tv = theta_vector(&tau, &ctrl.lattice)?;
        radius = radius.max(tv.radius);
        thetas.push((tau, tv));
    }
    let (tau, tv) = &thetas[sr.chosen];
    for p in Partition33::ALL {
        let rhs = bx.pair(p) * w34sq / (4.0 * PI.powi(4));
        r.check(format!("main:{p}"), Residual::between(tv.get(p), rhs, tol, true));
        r.check(format!("nu-form:{p}"), Residual::between(tv.get(p), bx.pair(p) * f * f, tol, true));
    }
    let mut spread = 0.0f64;
    for (_, other) in &thetas {
        for p in Partition33::ALL {
            spread = spread.max(Residual::between(other.get(p), tv.get(p), 0.0, true).rel);
        }
    }
    r.check("survivor-agreement", Residual { abs: spread, rel: spread, tol: 1e-9, relative: true, pass: spread <= 1e-9 });
    r.diag("tau", tau_datum(tau));
    r.diag("omega_sq", Datum::Complexes(ps.omega_sq.to_vec()));
    r.diag("degrees", Datum::Ints(ps.degrees.iter().map(|&d| d as i64).collect()));
    r.diag("ratio_spread", Datum::Reals(ps.ratio_spread.to_vec()));
    r.diag("radius", Datum::Int(radius as i64));
    r.diag("survivors", Datum::Ints(sr.survivors.iter().map(|s| s.iter().fold(0i64, |acc, &b| 2 * acc + (b < 0) as i64)).collect()));
    r.diag("chosen", Datum::Int(sr.chosen as i64));
    r.diag("matches_arg_pattern", Datum::Bool(sr.matches_arg_pattern));
    Ok(r)
}

/// The constant `1/(4π⁴)` recovered from the degeneration `z₂ = z₃ = ε`.
pub fn verify_degeneration(z1: f64, z4: f64, eps: f64, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(1e-5);
    let z = ZMatrix::real([z1, eps, eps, z4]);
    let x = nu(PeriodIndex::P34, &z);
    let x135 = brackets(&x).pair(Partition33::new([1, 3, 5])?);
    let f = fs(&HGParams::half(), &z, &ctrl.series)?.value;
    let w34sq = 4.0 * PI.powi(4) * f * f;
    let (a1, b1) = elliptic_periods(z1, &ctrl.series)?;
    let (a4, b4) = elliptic_periods(z4, &ctrl.series)?;
    let tau = Tau::diag(a1 / b1, a4 / b4);
    let th = theta_char(bits("0000"), &tau, &ctrl.lattice)?.value;
    let target = c64(1.0 / (4.0 * PI.powi(4)), 0.0);
    let mut r = VerifyReport::new("degeneration");
    r.input("z", z_datum(&z));
    r.check("limit", Residual::between(th * th / (x135 * w34sq), target, tol, false));
    let t1 = jacobi_theta(0, 0, tau.m[0][0], &ctrl.lattice)?.0;
    let t4 = jacobi_theta(0, 0, tau.m[1][1], &ctrl.lattice)?.0;
    let genus1 = t1.powi(4) * t4.powi(4) / (4.0 * b1 * b1 * b4 * b4);
    r.check("genus-one-product", Residual::between(genus1, target, tol, false));
    r.diag("x135", Datum::Complex(x135));
    r.diag("tau", tau_datum(&tau));
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum FeKind {
    Fe1,
    Fe2,
}

/// The four `F_S` arguments `(z, w, m(z), m(w))` and the factors of the two
/// functional equations at `c`.
fn fe_data(kind: FeKind, c: &MeanState) -> ([ZMatrix; 4], [f64; 2]) {
    let [c1, c2, c3, c4] = c.c;
    match kind {
        FeKind::Fe1 => {
            let (z, w) = crate::agm::d4_zw(c);
            let p = c1 - c2 + c3 - c4;
            let q = c1 + c2 - c3 - c4;
            let n = c1 - c2 - c3 + c4;
            let cross = 2.0 * (c1 * c4 - c2 * c3) * (c1 * c1 - c2 * c2 - c3 * c3 + c4 * c4);
            let mz = ZMatrix::real([
                n * n / (p * p),
                0.0,
                cross / ((c1 + c2) * (c3 + c4) * p * p),
                (c1 - c2) * (c3 - c4) / ((c1 + c2) * (c3 + c4)),
            ]);
            let mw = ZMatrix::real([
                (c1 - c3) * (c2 - c4) / ((c1 + c3) * (c2 + c4)),
                cross / ((c1 + c3) * (c2 + c4) * q * q),
                0.0,
                n * n / (q * q),
            ]);
            let fa = p * (c3 + c4) / (4.0 * (c1 - c2) * c3);
            let fb = q * (c2 + c4) / (4.0 * (c1 - c3) * c2);
            ([z, w, mz, mw], [fa, fb])
        }
        FeKind::Fe2 => {
            let (z, w) = crate::agm::borchardt_zw(c);
            let d = [c1 + c2 + c3 + c4, c1 + c2 - c3 - c4, c1 - c2 + c3 - c4, c1 - c2 - c3 + c4];
            let s = |a: f64, b: f64| (a * b).sqrt();
            let (s12, s34, s13, s24, s14, s23) = (s(c1, c2), s(c3, c4), s(c1, c3), s(c2, c4), s(c1, c4), s(c2, c3));
            let mz = ZMatrix::real([
                1.0 - 2.0 * (s14 + s23) * (s13 - s24) / ((s12 + s34) * d[2]),
                1.0 - (s12 - s34) * d[0] / ((s12 + s34) * d[1]),
                1.0 - (s13 - s24) * d[0] / ((s13 + s24) * d[2]),
                1.0 - 2.0 * (s14 + s23) * (s12 - s34) / ((s13 + s24) * d[1]),
            ]);
            let mw = ZMatrix::real([
                1.0 - (s14 + s23) * d[2] / (2.0 * (s12 + s34) * (s13 - s24)),
                1.0 - d[0] * d[1] / (4.0 * (c1 * c2 - c3 * c4)),
                1.0 - d[0] * d[2] / (4.0 * (c1 * c3 - c2 * c4)),
                1.0 - (s14 + s23) * d[1] / (2.0 * (s13 + s24) * (s12 - s34)),
            ]);
            let a = s(d[0], d[2]);
            let b = s(d[1], d[3]);
            let cc = s(d[0], d[1]);
            let dd = s(d[2], d[3]);
            let fa = s(d[1], d[2]) * (cc - dd) * (a - b) / (16.0 * s23 * (s12 - s34) * (s13 - s24));
            let fb = (cc + dd) * (a + b) / (4.0 * (c2 * c3 * d[1] * d[2]).sqrt());
            ([z, w, mz, mw], [fa, fb])
        }
    }
}

fn fe_escapes(kind: FeKind, c: &MeanState, margin: f64) -> Vec<&'static str> {
    if !c.is_strict() {
        return vec!["state"];
    }
    if kind == FeKind::Fe2 && c.c[0] - c.c[1] - c.c[2] + c.c[3] <= 0.0 {
        return vec!["d4"];
    }
    let (args, _) = fe_data(kind, c);
    ["z", "w", "m(z)", "m(w)"]
        .into_iter()
        .zip(args.iter())
        .filter(|(_, a)| !(a.z.iter().all(|v| v.re.is_finite()) && a.fits(margin)))
        .map(|(n, _)| n)
        .collect()
}

/// `F_S(m(z)) = f_z·F_S(z)` and `F_S(m(w)) = f_w·F_S(w)`.
pub fn verify_fe(kind: FeKind, c: &MeanState, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_AGM);
    let mean = match kind {
        FeKind::Fe1 => MeanKind::D4,
        FeKind::Fe2 => MeanKind::Borchardt,
    };
    let mut state = MeanState::new(c.c)?;
    let mut pre_steps = 0;
    loop {
        let escaped = fe_escapes(kind, &state, ctrl.series.margin);
        if escaped.is_empty() {
            break;
        }
        if pre_steps == ctrl.max_pre_steps || escaped == ["state"] {
            return Err(Error::Domain(format!("arguments outside the polydisc at {:?}: {}", state.c, escaped.join(", "))));
        }
        state = mean_step(mean, &state)?;
        pre_steps += 1;
    }
    let (args, [fa, fb]) = fe_data(kind, &state);
    let alpha = HGParams::half();
    let v: Vec<C64> = args.iter().map(|a| fs(&alpha, a, &ctrl.series).map(|s| s.value)).collect::<Result<_>>()?;
    let mut r = VerifyReport::new(match kind {
        FeKind::Fe1 => "fe1",
        FeKind::Fe2 => "fe2",
    });
    r.input("c", Datum::Reals(c.c.to_vec()));
    r.check("z", Residual::between(v[2], fa * v[0], tol, true));
    r.check("w", Residual::between(v[3], fb * v[1], tol, true));
    r.diag("state", Datum::Reals(state.c.to_vec()));
    r.diag("pre_steps", Datum::Int(pre_steps as i64));
    r.diag("arguments", Datum::Complexes(args.iter().flat_map(|a| a.z).collect()));
    Ok(r)
}

/// Iterated limit against both closed forms.
pub fn verify_agm_limit(kind: MeanKind, c: &MeanState, ctrl: &VerifyCtrl) -> Result<VerifyReport> {
    let tol = ctrl.tol_or(TOL_AGM);
    let it = iterate_mean(kind, c, ctrl.iter_tol, 200)?;
    let lc = LimitCtrl { series: ctrl.series, max_pre_steps: ctrl.max_pre_steps, agreement_tol: f64::INFINITY };
    let lf = limit_formula(kind, c, &lc)?;
    let mut r = VerifyReport::new(match kind {
        MeanKind::D4 => "agm-d4",
        MeanKind::Borchardt => "agm-borchardt",
    });
    r.input("c", Datum::Reals(c.c.to_vec()));
    let lim = c64(it.limit, 0.0);
    r.check("formula-z", Residual::between(c64(lf.value_z, 0.0), lim, tol, true));
    r.check("formula-w", Residual::between(c64(lf.value_w, 0.0), lim, tol, true));
    if let Some(p) = it.trace.fitted_exponent {
        r.check("fitted-exponent", Residual::at_least(p, 1.9));
    }
    // The ratios approach 1 quadratically but from further away than the gap
    // does; the tracked differences stay accurate below rounding of the state,
    // so they are followed until they underflow.
    let deep = iterate_mean(kind, c, f64::MIN_POSITIVE, 200)?;
    let last = |v: &[Option<f64>]| v.iter().rev().find_map(|x| *x);
    let (s, t) = (last(&deep.trace.ratio_s), last(&deep.trace.ratio_t));
    match kind {
        MeanKind::D4 => {
            if let Some(s) = s {
                r.check("ratio-s", Residual::between(c64(s, 0.0), c64(1.0, 0.0), 1e-6, false));
            }
            if let Some(t) = t {
                r.check("ratio-t", Residual::between(c64(t, 0.0), c64(1.0, 0.0), 1e-6, false));
            }
        }
        MeanKind::Borchardt => {
            let k = kummer_point(&lf.state)?;
            r.check("kummer-proportionality", Residual::between(c64(k.proportionality_residual, 0.0), c64(0.0, 0.0), 1e-10, false));
            r.diag("q1", Datum::Real(k.q1));
            if let Some(s) = s {
                r.diag("ratio_s", Datum::Real(s));
            }
            if let Some(t) = t {
                r.diag("ratio_t", Datum::Real(t));
            }
        }
    }
    r.diag("limit", Datum::Real(it.limit));
    r.diag("iterations", Datum::Int(it.iterations as i64));
    r.diag("ratio_iterations", Datum::Int(deep.iterations as i64));
    r.diag("pre_steps", Datum::Int(lf.pre_steps as i64));
    r.diag("state", Datum::Reals(lf.state.c.to_vec()));
    r.diag("degrees", Datum::Ints(lf.degrees.iter().map(|&d| d as i64).collect()));
    r.diag("gaps", Datum::Reals(it.trace.gaps.clone()));
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_at_half_has_tau_i() {
        let r = verify_jacobi(0.5, &VerifyCtrl::default()).unwrap();
        assert!(r.pass, "{r:?}");
        match r.diagnostics["tau"] {
            Datum::Complex(t) => assert!((t - c64(0.0, 1.0)).norm() < 1e-15),
            _ => unreachable!(),
        }
    }

    #[test]
    fn gauss_transform_points() {
        let r = verify_gauss_transform(1.0, &VerifyCtrl::default()).unwrap();
        assert_eq!(r.worst(), 0.0);
        assert!(verify_gauss_transform(0.3, &VerifyCtrl::default()).unwrap().pass);
        assert!(matches!(verify_gauss_transform(0.0, &VerifyCtrl::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn two_tau_diagonal() {
        let r = verify_2tau(&Tau::diag(c64(0.0, 3.0), c64(0.0, 4.0)), &VerifyCtrl::default()).unwrap();
        assert!(r.pass && r.worst() < 1e-10, "{r:?}");
    }

    #[test]
    fn fe_at_reference_state() {
        let c = MeanState::new([8.0, 4.0, 2.0, 1.0]).unwrap();
        for kind in [FeKind::Fe1, FeKind::Fe2] {
            let r = verify_fe(kind, &c, &VerifyCtrl::default()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn fe_degenerate_state() {
        let c = MeanState::new([1.0; 4]).unwrap();
        assert!(matches!(verify_fe(FeKind::Fe1, &c, &VerifyCtrl::default()), Err(Error::Domain(_))));
    }

    #[test]
    fn agm_limits() {
        let c = MeanState::new([8.0, 4.0, 2.0, 1.0]).unwrap();
        for kind in [MeanKind::D4, MeanKind::Borchardt] {
            let r = verify_agm_limit(kind, &c, &VerifyCtrl::default()).unwrap();
            assert!(r.pass, "{r:?}");
        }
    }
}
