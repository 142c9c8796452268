//! Membership in `𝔻` and `D_H`, the unitary group `U₂₂(ℤ[i])`, its
//! wedge-square embedding and its action on `𝔻`.

use std::ops::{Add, Mul, Neg, Sub};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{det2, inv2, mul2, Mat2, Mat6};
use crate::periods::{jd, PeriodVector, Tau, QUADRIC_TOL};
use crate::{c64, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct GaussInt {
    pub re: i64,
    pub im: i64,
}

impl GaussInt {
    pub const ZERO: GaussInt = GaussInt { re: 0, im: 0 };
    pub const ONE: GaussInt = GaussInt { re: 1, im: 0 };
    pub const I: GaussInt = GaussInt { re: 0, im: 1 };

    pub const fn new(re: i64, im: i64) -> Self {
        Self { re, im }
    }

    pub fn conj(self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn to_c64(self) -> C64 {
        c64(self.re as f64, self.im as f64)
    }

    /// Divisible by `1+i`, i.e. `re + im` even.
    pub fn is_multiple_of_one_plus_i(self) -> bool {
        (self.re + self.im).rem_euclid(2) == 0
    }

    pub fn is_multiple_of(self, n: i64) -> bool {
        self.re % n == 0 && self.im % n == 0
    }
}

impl Add for GaussInt {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for GaussInt {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for GaussInt {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self::new(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)
    }
}

impl Neg for GaussInt {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

pub type GMat4 = [[GaussInt; 4]; 4];
pub type GMat6 = [[GaussInt; 6]; 6];

fn gmul<const N: usize>(a: &[[GaussInt; N]; N], b: &[[GaussInt; N]; N]) -> [[GaussInt; N]; N] {
    let mut r = [[GaussInt::ZERO; N]; N];
    for i in 0..N {
        for j in 0..N {
            let mut s = GaussInt::ZERO;
            for k in 0..N {
                s = s + a[i][k] * b[k][j];
            }
            r[i][j] = s;
        }
    }
    r
}

fn gadjoint<const N: usize>(a: &[[GaussInt; N]; N]) -> [[GaussInt; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

fn gtranspose<const N: usize>(a: &[[GaussInt; N]; N]) -> [[GaussInt; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i]))
}

fn gidentity<const N: usize>() -> [[GaussInt; N]; N] {
    std::array::from_fn(|i| std::array::from_fn(|j| if i == j { GaussInt::ONE } else { GaussInt::ZERO }))
}

/// Exact determinant by Laplace expansion along the first row.
pub fn gdet(m: &[Vec<GaussInt>]) -> GaussInt {
    let n = m.len();
    match n {
        0 => GaussInt::ONE,
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        _ => {
            let mut s = GaussInt::ZERO;
            for j in 0..n {
                if m[0][j] == GaussInt::ZERO {
                    continue;
                }
                let minor: Vec<Vec<GaussInt>> =
                    m[1..].iter().map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect()).collect();
                let t = m[0][j] * gdet(&minor);
                s = if j % 2 == 0 { s + t } else { s - t };
            }
            s
        }
    }
}

/// `I₂₂ = [[0,−E₂],[E₂,0]]`.
pub fn i22() -> GMat4 {
    let mut m = [[GaussInt::ZERO; 4]; 4];
    m[0][2] = -GaussInt::ONE;
    m[1][3] = -GaussInt::ONE;
    m[2][0] = GaussInt::ONE;
    m[3][1] = GaussInt::ONE;
    m
}

/// An element of `U₂₂(ℤ[i])`: `g I₂₂ g* = I₂₂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupElem {
    g: GMat4,
}

impl GroupElem {
    pub fn new(g: GMat4) -> Result<Self> {
        if gmul(&gmul(&g, &i22()), &gadjoint(&g)) != i22() {
            return Err(Error::NotUnitary("g I22 g* != I22".into()));
        }
        Ok(Self { g })
    }

    pub fn identity() -> Self {
        Self { g: gidentity() }
    }

    /// `[[E,B],[0,E]]` with `B` Hermitian.
    pub fn translation(b: [[GaussInt; 2]; 2]) -> Result<Self> {
        let mut g = gidentity::<4>();
        for i in 0..2 {
            for j in 0..2 {
                g[i][j + 2] = b[i][j];
            }
        }
        Self::new(g)
    }

    /// `I₂₂ [[E,B],[0,E]] I₂₂⁻¹ = [[E,0],[−B,E]]`.
    pub fn conj_translation(b: [[GaussInt; 2]; 2]) -> Result<Self> {
        let t = Self::translation(b)?;
        let minus_i22: GMat4 = std::array::from_fn(|i| std::array::from_fn(|j| -i22()[i][j]));
        Self::new(gmul(&gmul(&i22(), &t.g), &minus_i22))
    }

    pub fn diag(d: [GaussInt; 4]) -> Result<Self> {
        let mut g = [[GaussInt::ZERO; 4]; 4];
        for k in 0..4 {
            g[k][k] = d[k];
        }
        Self::new(g)
    }

    pub fn scalar(u: GaussInt) -> Result<Self> {
        Self::diag([u; 4])
    }

    pub fn matrix(&self) -> &GMat4 {
        &self.g
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { g: gmul(&self.g, &other.g) }
    }

    /// `g⁻¹ = −I₂₂ g* I₂₂`.
    pub fn inverse(&self) -> Self {
        let m = gmul(&gmul(&i22(), &gadjoint(&self.g)), &i22());
        Self { g: std::array::from_fn(|i| std::array::from_fn(|j| -m[i][j])) }
    }

    /// Entrywise conjugate `ḡ`, again unitary.
    pub fn conj(&self) -> Self {
        Self { g: std::array::from_fn(|i| std::array::from_fn(|j| self.g[i][j].conj())) }
    }

    pub fn det(&self) -> GaussInt {
        gdet(&self.g.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    /// `g ≡ E₄ mod (1+i)`.
    pub fn is_level(&self) -> bool {
        let e = gidentity::<4>();
        (0..4).all(|i| (0..4).all(|j| (self.g[i][j] - e[i][j]).is_multiple_of_one_plus_i()))
    }

    /// Block `(r, c)` of the 2×2 split, as complex numbers.
    pub fn block(&self, r: usize, c: usize) -> Mat2 {
        std::array::from_fn(|i| std::array::from_fn(|j| self.g[2 * r + i][2 * c + j].to_c64()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauMembership {
    pub in_d: bool,
    /// Eigenvalues of `(τ−τ*)/2i`, ascending.
    pub eigenvalues: [f64; 2],
}

pub fn tau_membership(tau: &Tau) -> TauMembership {
    let eigenvalues = tau.imaginary_eigs();
    TauMembership { in_d: eigenvalues[0] > 0.0 && tau.is_finite(), eigenvalues }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DhMembership {
    pub in_dh: bool,
    /// `|ᵗωHω|` relative to `max|ωₖ|²`.
    pub quadric_residual: f64,
    /// `ω*Hω`.
    pub hermitian: f64,
    /// `Im(ω₁₄/ω₃₄)`.
    pub orientation: f64,
}

pub fn dh_membership(omega: &[C64; 6]) -> DhMembership {
    let p = PeriodVector { omega: *omega };
    let quadric_residual = p.quadric_residual();
    let hermitian = p.hermitian();
    let orientation = p.orientation();
    DhMembership {
        in_dh: quadric_residual <= QUADRIC_TOL && hermitian > 0.0 && orientation > 0.0,
        quadric_residual,
        hermitian,
        orientation,
    }
}

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn wedge2(g: &GMat4) -> GMat6 {
    std::array::from_fn(|r| {
        let (i, j) = PAIRS[r];
        std::array::from_fn(|c| {
            let (k, l) = PAIRS[c];
            g[i][k] * g[j][l] - g[i][l] * g[j][k]
        })
    })
}

/// `2Q` over `ℤ[i]`.
fn two_q() -> GMat6 {
    let mut m = gidentity::<6>();
    for k in 0..6 {
        m[k][k] = GaussInt::new(2, 0);
    }
    m[1][1] = GaussInt::new(1, 1);
    m[4][4] = GaussInt::new(1, 1);
    m[1][4] = GaussInt::new(-1, 1);
    m[4][1] = GaussInt::new(-1, 1);
    m
}

fn h_gauss() -> GMat6 {
    let mut m = [[GaussInt::ZERO; 6]; 6];
    for (i, j) in [(0, 5), (1, 1), (2, 3), (3, 2), (4, 4), (5, 0)] {
        m[i][j] = -GaussInt::ONE;
    }
    m
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Embedding {
    pub wedge2: GMat6,
    /// `R_g = √det g · Q(∧²g)Q*`, determined up to sign.
    pub rg: Mat6,
    /// `4·√det g · Q(∧²g)Q*`, exact.
    pub rg_times_four: GMat6,
    pub detg: i8,
    pub det_wedge: GaussInt,
    /// `ᵗR_g H R_g = H`, checked exactly.
    pub preserves_h: bool,
    /// `R_g` has rational integer entries.
    pub integral: bool,
}

pub fn embed_group(g: &GroupElem) -> Result<Embedding> {
    let g = GroupElem::new(g.g)?;
    let d = g.det();
    let (detg, sqrt_det) = match (d.re, d.im) {
        (1, 0) => (1i8, GaussInt::ONE),
        (-1, 0) => (-1i8, GaussInt::I),
        _ => return Err(Error::NotUnitary(format!("det g = {}+{}i is not ±1", d.re, d.im))),
    };
    let w = wedge2(&g.g);
    let q2 = two_q();
    let m4 = gmul(&gmul(&q2, &w), &gadjoint(&q2));
    let r4: GMat6 = std::array::from_fn(|i| std::array::from_fn(|j| sqrt_det * m4[i][j]));
    let h = h_gauss();
    let lhs = gmul(&gmul(&gtranspose(&r4), &h), &r4);
    let preserves_h = (0..6).all(|i| (0..6).all(|j| lhs[i][j] == GaussInt::new(16 * h[i][j].re, 16 * h[i][j].im)));
    let integral = r4.iter().flatten().all(|v| v.im == 0 && v.re % 4 == 0);
    let rg = std::array::from_fn(|i| std::array::from_fn(|j| r4[i][j].to_c64() / 4.0));
    let det_wedge = gdet(&w.iter().map(|r| r.to_vec()).collect::<Vec<_>>());
    Ok(Embedding { wedge2: w, rg, rg_times_four: r4, detg, det_wedge, preserves_h, integral })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Action {
    pub tau: Tau,
    /// `det(g₂₁τ+g₂₂)`.
    pub cocycle: C64,
}

/// `g·τ = (g₁₁τ+g₁₂)(g₂₁τ+g₂₂)⁻¹`.
pub fn act(g: &GroupElem, tau: &Tau) -> Result<Action> {
    let num = add(&mul2(&g.block(0, 0), &tau.m), &g.block(0, 1));
    let den = add(&mul2(&g.block(1, 0), &tau.m), &g.block(1, 1));
    let cocycle = det2(&den);
    let scale = den.iter().flatten().fold(0.0f64, |a, v| a.max(v.norm()));
    if !(cocycle.norm() > 1e-14 * scale * scale) {
        return Err(Error::SingularDenominator);
    }
    let inv = inv2(&den).ok_or(Error::SingularDenominator)?;
    let out = Tau::new(mul2(&num, &inv));
    if !out.in_domain() {
        return Err(Error::NotInDomain(format!("image has lambda_min = {}", out.lambda_min())));
    }
    Ok(Action { tau: out, cocycle })
}

fn add(a: &Mat2, b: &Mat2) -> Mat2 {
    std::array::from_fn(|i| std::array::from_fn(|j| a[i][j] + b[i][j]))
}

/// Both sides of `det(g)·det(g₂₁τ+g₂₂)² = ([R_g jd(τ)]₃₄)²`.
pub fn cocycle_sides(g: &GroupElem, tau: &Tau) -> Result<(C64, C64)> {
    let emb = embed_group(g)?;
    let a = act(g, tau)?;
    let v = jd(tau);
    let slot: C64 = (0..6).map(|k| emb.rg[5][k] * v[k]).sum();
    Ok((emb.detg as f64 * a.cocycle * a.cocycle, slot * slot))
}
