//! Theta constants on `𝔻` with characteristics in `(1+i)⁻¹ℤ[i]²`, and
//! Riemann theta constants of genus one and two.

use crate::configuration::Partition33;
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigs2, Mat2};
use crate::periods::Tau;
use crate::{c64, e, C64};

/// Truncation control for lattice sums.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeCtrl {
    /// Absolute bound on the neglected tail.
    pub tol: f64,
    /// Largest sup-norm radius the sum may use.
    pub max_radius: usize,
}

impl Default for LatticeCtrl {
    fn default() -> Self {
        Self { tol: 1e-15, max_radius: 40 }
    }
}

/// A characteristic `[a₁a₂b₁b₂]`, meaning `a = (a₁,a₂)/(1+i)`, `b = (b₁,b₂)/(1+i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Characteristic {
    pub bits: [u8; 4],
}

impl Characteristic {
    pub fn new(bits: [u8; 4]) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::BadLabels(format!("characteristic bits {bits:?} must be 0 or 1")));
        }
        Ok(Self { bits })
    }

    pub fn parse(s: &str) -> Result<Self> {
        let d: Vec<u8> = s
            .chars()
            .map(|ch| ch.to_digit(2).map(|v| v as u8))
            .collect::<Option<_>>()
            .ok_or_else(|| Error::BadLabels(format!("characteristic {s:?} must be four binary digits")))?;
        if d.len() != 4 {
            return Err(Error::BadLabels(format!("characteristic {s:?} must be four binary digits")));
        }
        Self::new([d[0], d[1], d[2], d[3]])
    }

    /// All sixteen characteristics in binary order.
    pub fn all() -> [Characteristic; 16] {
        std::array::from_fn(|k| Characteristic {
            bits: [(k >> 3) as u8 & 1, (k >> 2) as u8 & 1, (k >> 1) as u8 & 1, k as u8 & 1],
        })
    }

    /// `a₁b₁ + a₂b₂ ≡ 0 mod 2`.
    pub fn is_even(&self) -> bool {
        let [a1, a2, b1, b2] = self.bits;
        (a1 * b1 + a2 * b2) % 2 == 0
    }

    pub fn a(&self) -> [C64; 2] {
        let d = c64(1.0, 1.0);
        [c64(self.bits[0] as f64, 0.0) / d, c64(self.bits[1] as f64, 0.0) / d]
    }

    pub fn b(&self) -> [C64; 2] {
        let d = c64(1.0, 1.0);
        [c64(self.bits[2] as f64, 0.0) / d, c64(self.bits[3] as f64, 0.0) / d]
    }
}

impl std::fmt::Display for Characteristic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let [a, b, c, d] = self.bits;
        write!(f, "{a}{b}{c}{d}")
    }
}

/// Characteristic attached to each partition, in [`Partition33::ALL`] order.
pub const TABLE: [[u8; 4]; 10] = [
    [1, 1, 1, 1],
    [0, 0, 1, 1],
    [0, 0, 1, 0],
    [0, 0, 0, 1],
    [0, 0, 0, 0],
    [1, 1, 0, 0],
    [1, 0, 0, 1],
    [1, 0, 0, 0],
    [0, 1, 0, 0],
    [0, 1, 1, 0],
];

pub fn characteristic_of(p: Partition33) -> Characteristic {
    Characteristic { bits: TABLE[p.index()] }
}

/// A lattice sum and the radius it used.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaValue {
    pub value: C64,
    pub radius: usize,
}

/// Smallest radius `R` such that the shells `k > R` of a `dim`-dimensional
/// integer lattice, each bounded by `exp(−πλ(k−½)²)` per point, sum below `tol`.
fn radius_for(dim: i32, lambda: f64, tol: f64, max_radius: usize) -> Result<usize> {
    let shell = |k: usize| {
        let kf = k as f64;
        let count = (2.0 * kf + 1.0).powi(dim) - (2.0 * kf - 1.0).powi(dim);
        count * (-std::f64::consts::PI * lambda * (kf - 0.5).powi(2)).exp()
    };
    let tail = |r: usize| {
        let mut s = 0.0;
        for k in r + 1.. {
            let t = shell(k);
            s += t;
            if t < 1e-3 * tol * f64::EPSILON || k > r + 10_000 {
                break;
            }
        }
        s
    };
    for r in 1..=max_radius {
        if tail(r) < tol {
            return Ok(r);
        }
    }
    let mut r = max_radius + 1;
    while tail(r) >= tol && r < 100 * max_radius.max(1) {
        r += 1;
    }
    Err(Error::RadiusExceeded { needed: r, cap: max_radius })
}

fn reduce(x: f64) -> (f64, f64) {
    let n = x.round();
    (x - n, n)
}

/// `Θ_ab(τ) = Σ_{n∈ℤ[i]²} e[½(n+a)τ(n+a)* + Re((n+a)b*)]`.
pub fn theta_ab(a: [C64; 2], b: [C64; 2], tau: &Tau, ctrl: &LatticeCtrl) -> Result<ThetaValue> {
    let lambda = tau.lambda_min();
    if !(lambda > 0.0) || !tau.is_finite() {
        return Err(Error::NotInDomain(format!("lambda_min = {lambda}")));
    }
    // Θ_{a+n,b} = Θ_{a,b} for n ∈ ℤ[i]², so centre a in the unit box.
    let a = a.map(|v| c64(reduce(v.re).0, reduce(v.im).0));
    let r = radius_for(4, lambda, ctrl.tol, ctrl.max_radius)? as i64;
    let t = &tau.m;
    let mut sum = c64(0.0, 0.0);
    for p in -r..=r {
        for q in -r..=r {
            let v1 = a[0] + c64(p as f64, q as f64);
            let row1 = [v1 * t[0][0], v1 * t[0][1]];
            let lin1 = (v1 * b[0].conj()).re;
            for s in -r..=r {
                for u in -r..=r {
                    let v2 = a[1] + c64(s as f64, u as f64);
                    let quad = (row1[0] + v2 * t[1][0]) * v1.conj() + (row1[1] + v2 * t[1][1]) * v2.conj();
                    let lin = lin1 + (v2 * b[1].conj()).re;
                    sum += e(0.5 * quad + lin);
                }
            }
        }
    }
    Ok(ThetaValue { value: sum, radius: r as usize })
}

pub fn theta_char(ch: Characteristic, tau: &Tau, ctrl: &LatticeCtrl) -> Result<ThetaValue> {
    theta_ab(ch.a(), ch.b(), tau, ctrl)
}

/// `Θ²⟨J⟩(τ)` for the ten partitions, via [`TABLE`].
#[derive(Debug, Clone, PartialEq)]
pub struct ThetaVector {
    /// Squared theta constants in [`Partition33::ALL`] order.
    pub values: [C64; 10],
    pub radius: usize,
}

impl ThetaVector {
    pub fn get(&self, p: Partition33) -> C64 {
        self.values[p.index()]
    }
}

pub fn theta_vector(tau: &Tau, ctrl: &LatticeCtrl) -> Result<ThetaVector> {
    let mut values = [c64(0.0, 0.0); 10];
    let mut radius = 0;
    for (k, p) in Partition33::ALL.iter().enumerate() {
        let th = theta_char(characteristic_of(*p), tau, ctrl)?;
        values[k] = th.value * th.value;
        radius = radius.max(th.radius);
    }
    Ok(ThetaVector { values, radius })
}

/// Riemann theta constant `ϑ_{a′b′}(τ) = Σ_{n∈ℤ^g} e[½(n+a′)τ(n+a′)ᵗ + (n+a′)b′ᵗ]`
/// for genus `g = a′.len() ∈ {1, 2}`; `tau` is row-major `g×g`.
pub fn riemann_theta(a: &[f64], b: &[f64], tau: &[C64], ctrl: &LatticeCtrl) -> Result<ThetaValue> {
    let g = a.len();
    if !(g == 1 || g == 2) || b.len() != g || tau.len() != g * g {
        return Err(Error::InvalidParams(format!("genus must be 1 or 2 with matching sizes, got {g}")));
    }
    let lambda = if g == 1 {
        tau[0].im
    } else {
        if (tau[1] - tau[2]).norm() > 1e-12 * tau.iter().fold(0.0f64, |m, v| m.max(v.norm())) {
            return Err(Error::NotInSiegel);
        }
        let im: Mat2 = [[c64(tau[0].im, 0.0), c64(tau[1].im, 0.0)], [c64(tau[2].im, 0.0), c64(tau[3].im, 0.0)]];
        hermitian_eigs2(&im)[0]
    };
    if !(lambda > 0.0) {
        return Err(Error::NotInSiegel);
    }
    let a: Vec<f64> = a.iter().map(|&v| reduce(v).0).collect();
    let r = radius_for(g as i32, lambda, ctrl.tol, ctrl.max_radius)? as i64;
    let mut sum = c64(0.0, 0.0);
    if g == 1 {
        for n in -r..=r {
            let v = n as f64 + a[0];
            sum += e(0.5 * v * v * tau[0] + c64(v * b[0], 0.0));
        }
    } else {
        for n1 in -r..=r {
            let v1 = n1 as f64 + a[0];
            for n2 in -r..=r {
                let v2 = n2 as f64 + a[1];
                let quad = v1 * v1 * tau[0] + v1 * v2 * (tau[1] + tau[2]) + v2 * v2 * tau[3];
                sum += e(0.5 * quad + c64(v1 * b[0] + v2 * b[1], 0.0));
            }
        }
    }
    Ok(ThetaValue { value: sum, radius: r as usize })
}

/// Both sides of `4Θ_ab(2τ) = Σ_{q∈𝔽₂²} e[−Re(aq*)] Θ_{(1+i)a,(b+q)/(1−i)}(τ)`.
pub fn two_tau_sides(a: [C64; 2], b: [C64; 2], tau: &Tau, ctrl: &LatticeCtrl) -> Result<(C64, C64)> {
    let lhs = 4.0 * theta_ab(a, b, &tau.scale(c64(2.0, 0.0)), ctrl)?.value;
    let one_plus_i = c64(1.0, 1.0);
    let one_minus_i = c64(1.0, -1.0);
    let mut rhs = c64(0.0, 0.0);
    for q in [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]] {
        let phase = e(c64(-(a[0] * q[0] + a[1] * q[1]).re, 0.0));
        let a2 = a.map(|v| one_plus_i * v);
        let b2 = [(b[0] + q[0]) / one_minus_i, (b[1] + q[1]) / one_minus_i];
        rhs += phase * theta_ab(a2, b2, tau, ctrl)?.value;
    }
    Ok((lhs, rhs))
}
