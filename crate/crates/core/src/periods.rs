//! Periods of the K3 surface attached to a configuration, their signs, and
//! the normalized period matrix `τ` in the bounded domain `𝔻`.

use std::f64::consts::PI;

use crate::configuration::{brackets, normal_form_coords, nu, Partition33, PeriodIndex};
use crate::error::{Error, Result};
use crate::hypergeometric::{fs, ft, HGParams, SeriesCtrl, ZMatrix};
use crate::linalg::{bilinear6, det2, hermitian_eigs2, mat_vec6, sesquilinear6, transpose2, Mat2, Mat6};
use crate::{c64, C64};

/// Relative tolerance of the quadric condition `ᵗωHω = 0`.
pub const QUADRIC_TOL: f64 = 1e-8;
/// Relative tolerance on the partition independence of the bracket ratio.
pub const RATIO_TOL: f64 = 1e-8;

/// The intersection matrix `H`, the Plücker pairing `H′` and the matrix `Q`.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainConstants {
    pub h: [[i64; 6]; 6],
    pub h_prime: [[i64; 6]; 6],
    pub q: Mat6,
}

impl Default for DomainConstants {
    fn default() -> Self {
        let mut h = [[0i64; 6]; 6];
        for (i, j) in [(0, 5), (1, 1), (2, 3), (3, 2), (4, 4), (5, 0)] {
            h[i][j] = -1;
        }
        let mut h_prime = [[0i64; 6]; 6];
        for (i, j, v) in [(0, 5, 1), (2, 3, 1), (3, 2, 1), (5, 0, 1), (1, 4, -1), (4, 1, -1)] {
            h_prime[i][j] = v;
        }
        let mut q = [[c64(0.0, 0.0); 6]; 6];
        for (k, row) in q.iter_mut().enumerate() {
            row[k] = c64(1.0, 0.0);
        }
        q[1][1] = c64(0.5, 0.5);
        q[4][4] = c64(0.5, 0.5);
        q[1][4] = c64(-0.5, 0.5);
        q[4][1] = c64(-0.5, 0.5);
        Self { h, h_prime, q }
    }
}

pub fn to_complex(m: &[[i64; 6]; 6]) -> Mat6 {
    m.map(|row| row.map(|v| c64(v as f64, 0.0)))
}

/// Six periods indexed `(12, 13, 14, 23, 24, 34)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodVector {
    pub omega: [C64; 6],
}

impl PeriodVector {
    pub fn get(&self, ij: PeriodIndex) -> C64 {
        self.omega[ij.index()]
    }

    /// `ᵗωHω = −(2ω₁₂ω₃₄ + ω₁₃² + 2ω₁₄ω₂₃ + ω₂₄²)`.
    pub fn quadric(&self) -> C64 {
        bilinear6(&self.omega, &to_complex(&DomainConstants::default().h), &self.omega)
    }

    /// `|ᵗωHω|` relative to `max|ωₖ|²`.
    pub fn quadric_residual(&self) -> f64 {
        let scale = self.omega.iter().fold(0.0f64, |a, v| a.max(v.norm_sqr()));
        self.quadric().norm() / scale
    }

    /// `ω*Hω`, real for any `ω`.
    pub fn hermitian(&self) -> f64 {
        sesquilinear6(&self.omega, &to_complex(&DomainConstants::default().h), &self.omega).re
    }

    /// `Im(ω₁₄/ω₃₄)`.
    pub fn orientation(&self) -> f64 {
        (self.omega[2] / self.omega[5]).im
    }
}

/// A 2×2 complex matrix, meant to lie in `𝔻 = {τ : (τ−τ*)/2i > 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tau {
    pub m: Mat2,
}

impl Tau {
    pub fn new(m: Mat2) -> Self {
        Self { m }
    }

    pub fn diag(a: C64, b: C64) -> Self {
        Self { m: [[a, c64(0.0, 0.0)], [c64(0.0, 0.0), b]] }
    }

    pub fn transpose(&self) -> Self {
        Self { m: transpose2(&self.m) }
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { m: self.m.map(|r| r.map(|v| v * s)) }
    }

    /// `(τ − τ*)/2i`.
    pub fn imaginary_part(&self) -> Mat2 {
        let m = &self.m;
        let two_i = c64(0.0, 2.0);
        [
            [(m[0][0] - m[0][0].conj()) / two_i, (m[0][1] - m[1][0].conj()) / two_i],
            [(m[1][0] - m[0][1].conj()) / two_i, (m[1][1] - m[1][1].conj()) / two_i],
        ]
    }

    /// Eigenvalues (ascending) of `(τ − τ*)/2i`.
    pub fn imaginary_eigs(&self) -> [f64; 2] {
        hermitian_eigs2(&self.imaginary_part())
    }

    pub fn lambda_min(&self) -> f64 {
        self.imaginary_eigs()[0]
    }

    pub fn in_domain(&self) -> bool {
        self.lambda_min() > 0.0
    }

    pub fn is_finite(&self) -> bool {
        self.m.iter().flatten().all(|v| v.is_finite())
    }
}

/// Squared periods and the data used to compute them.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodSquares {
    pub omega_sq: [C64; 6],
    /// Normal-form coordinates `ζ_ij` of `x = ν₃₄(z)`.
    pub zeta: [ZMatrix; 6],
    /// Truncation degree of each series.
    pub degrees: [usize; 6],
    /// Spread of the bracket ratio over the ten partitions, relative.
    pub ratio_spread: [f64; 6],
}

fn prefactor(ij: PeriodIndex) -> f64 {
    if ij.uses_ft() {
        16.0 * PI * PI
    } else {
        4.0 * PI.powi(4)
    }
}

/// Normal-form coordinates of `ν₃₄(z)` for all six periods.
pub fn zeta_coords(z: &ZMatrix) -> Result<[ZMatrix; 6]> {
    let x = nu(PeriodIndex::P34, z);
    let mut out = [*z; 6];
    for ij in PeriodIndex::ALL {
        if ij != PeriodIndex::P34 {
            out[ij.index()] = normal_form_coords(&x, ij)?;
        }
    }
    Ok(out)
}

/// `ω_ij²` for `x = ν₃₄(z)`, from `F_S`/`F_T` at the normal-form coordinates.
pub fn period_squares(z: &ZMatrix, ctrl: &SeriesCtrl) -> Result<PeriodSquares> {
    let x = nu(PeriodIndex::P34, z);
    let bx = brackets(&x);
    if !bx.generic {
        return Err(Error::Precondition("nu34(z) is not generic".into()));
    }
    let zeta = zeta_coords(z)?;
    for ij in PeriodIndex::ALL {
        let zt = &zeta[ij.index()];
        if !zt.fits(ctrl.margin) {
            return Err(Error::CoordsOutOfDomain(format!(
                "zeta{ij} = {:?} has column sums {:?}",
                zt.z.map(|v| (v.re, v.im)),
                zt.column_sums()
            )));
        }
    }
    let jstar = (0..10).max_by(|&a, &b| bx.pairs[a].norm().total_cmp(&bx.pairs[b].norm())).unwrap();
    let alpha = HGParams::half();
    let mut omega_sq = [c64(0.0, 0.0); 6];
    let mut degrees = [0; 6];
    let mut ratio_spread = [0.0; 6];
    for ij in PeriodIndex::ALL {
        let k = ij.index();
        let zt = &zeta[k];
        let f = if ij.uses_ft() { ft(&alpha, zt, ctrl)? } else { fs(&alpha, zt, ctrl)? };
        degrees[k] = f.degree;
        let bn = brackets(&nu(ij, zt));
        let ratios: Vec<C64> = (0..10).map(|j| bn.pairs[j] / bx.pairs[j]).collect();
        let r = ratios[jstar];
        let spread = ratios.iter().map(|q| (q - r).norm() / r.norm()).fold(0.0, f64::max);
        ratio_spread[k] = spread;
        if !(spread <= RATIO_TOL) {
            return Err(Error::InconsistentRatio(format!(
                "period {ij}: spread {spread:e} across partitions (worst at {})",
                Partition33::ALL[jstar]
            )));
        }
        omega_sq[k] = prefactor(ij) * f.value * f.value * r;
    }
    Ok(PeriodSquares { omega_sq, zeta, degrees, ratio_spread })
}

/// Raw `τ(ω)` without a domain check.
fn tau_raw(w: &[C64; 6]) -> Tau {
    let i = c64(0.0, 1.0);
    let w34 = w[5];
    Tau::new([
        [w[2] / w34, -(w[1] - i * w[4]) / ((1.0 + i) * w34)],
        [-(w[1] + i * w[4]) / ((1.0 - i) * w34), -w[3] / w34],
    ])
}

/// The normalized period matrix.
pub fn tau_of(omega: &PeriodVector) -> Result<Tau> {
    if omega.omega[5].norm() == 0.0 {
        return Err(Error::Domain("omega34 vanishes".into()));
    }
    let t = tau_raw(&omega.omega);
    if !t.in_domain() {
        return Err(Error::NotInDomain(format!("(tau - tau*)/2i has eigenvalues {:?}", t.imaginary_eigs())));
    }
    Ok(t)
}

/// `j_𝔻(τ) = Q·v(τ̃)` with `v = (det τ, −τ₁₂, τ₁₁, −τ₂₂, τ₂₁, 1)`, the 2×2
/// minors of `τ̃ = [τ; E₂]`.
pub fn jd(tau: &Tau) -> [C64; 6] {
    let m = &tau.m;
    let v = [det2(m), -m[0][1], m[0][0], -m[1][1], m[1][0], c64(1.0, 0.0)];
    mat_vec6(&DomainConstants::default().q, &v)
}

/// The six 2×2 minors `τ̃⟨12⟩, τ̃⟨13⟩, τ̃⟨14⟩, τ̃⟨23⟩, τ̃⟨24⟩, τ̃⟨34⟩` of `[τ; E₂]`.
pub fn tau_tilde_minors(tau: &Tau) -> [C64; 6] {
    let m = &tau.m;
    let rows = [m[0], m[1], [c64(1.0, 0.0), c64(0.0, 0.0)], [c64(0.0, 0.0), c64(1.0, 0.0)]];
    let minor = |a: usize, b: usize| rows[a][0] * rows[b][1] - rows[a][1] * rows[b][0];
    [minor(0, 1), minor(0, 2), minor(0, 3), minor(1, 2), minor(1, 3), minor(2, 3)]
}

/// Outcome of the sign search.
#[derive(Debug, Clone, PartialEq)]
pub struct SignResolution {
    pub omega: PeriodVector,
    /// Every admissible sign vector (ω₃₄ fixed to the principal root).
    pub survivors: Vec<[i8; 6]>,
    /// Index into `survivors` of the returned choice.
    pub chosen: usize,
    /// Whether the choice follows the argument pattern of the reference point.
    pub matches_arg_pattern: bool,
}

fn signed(roots: &[C64; 6], s: &[i8; 6]) -> [C64; 6] {
    let mut w = *roots;
    for k in 0..6 {
        w[k] *= s[k] as f64;
    }
    w
}

/// `ω₁₂ < 0, ω₃₄ > 0, ω₁₃, ω₁₄ ∈ iℝ₊, ω₂₃, ω₂₄ ∈ −iℝ₊`.
fn arg_pattern(w: &[C64; 6]) -> bool {
    w[0].re < 0.0 && w[5].re > 0.0 && w[1].im > 0.0 && w[2].im > 0.0 && w[3].im < 0.0 && w[4].im < 0.0
}

/// Chooses signs of the six square roots so that `ω ∈ D_H` and `τ ∈ 𝔻`.
pub fn resolve_signs(omega_sq: &[C64; 6]) -> Result<SignResolution> {
    let roots = omega_sq.map(|v| v.sqrt());
    let mut survivors = Vec::new();
    for bits in 0u8..32 {
        let mut s = [1i8; 6];
        for (k, sk) in s.iter_mut().take(5).enumerate() {
            if bits & (1 << k) != 0 {
                *sk = -1;
            }
        }
        let pv = PeriodVector { omega: signed(&roots, &s) };
        if pv.quadric_residual() <= QUADRIC_TOL
            && pv.hermitian() > 0.0
            && pv.orientation() > 0.0
            && tau_raw(&pv.omega).in_domain()
        {
            survivors.push(s);
        }
    }
    if survivors.is_empty() {
        return Err(Error::NoAdmissibleSigns);
    }
    let real_squares = omega_sq.iter().all(|v| v.im.abs() <= 1e-8 * v.norm().max(f64::MIN_POSITIVE));
    let pattern = if real_squares {
        survivors.iter().position(|s| arg_pattern(&signed(&roots, s)))
    } else {
        None
    };
    let chosen = pattern.unwrap_or(0);
    Ok(SignResolution {
        omega: PeriodVector { omega: signed(&roots, &survivors[chosen]) },
        survivors,
        chosen,
        matches_arg_pattern: pattern.is_some(),
    })
}

/// The sign vector `s` applied to the principal roots of `omega_sq`.
pub fn apply_signs(omega_sq: &[C64; 6], s: &[i8; 6]) -> PeriodVector {
    PeriodVector { omega: signed(&omega_sq.map(|v| v.sqrt()), s) }
}
