//! 3×6 configuration matrices: minors, bracket pairs, the six normal forms
//! `ν_ij`, the association involution and Plücker inversion.

use std::fmt;

use crate::error::{Error, Result};
use crate::hypergeometric::ZMatrix;
use crate::linalg::{det3, inv3, mul3, transpose3, Mat3};
use crate::{c64, C64};

/// Relative threshold, against the largest minor, below which a minor counts as zero.
pub const ZERO_REL_TOL: f64 = 1e-10;

/// A 3×6 matrix whose columns are the coefficient vectors of six lines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config36 {
    pub m: [[C64; 6]; 3],
}

impl Config36 {
    pub fn new(m: [[C64; 6]; 3]) -> Self {
        Self { m }
    }

    pub fn real(m: [[f64; 6]; 3]) -> Self {
        Self { m: m.map(|row| row.map(|v| c64(v, 0.0))) }
    }

    pub fn from_columns(cols: [[C64; 3]; 6]) -> Self {
        let mut m = [[c64(0.0, 0.0); 6]; 3];
        for (j, col) in cols.iter().enumerate() {
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        Self { m }
    }

    /// The reference point: columns `(p², −p, 1)` for `p = −3, −2, −1, 1, 2, 3`.
    pub fn reference() -> Self {
        let p = [-3.0, -2.0, -1.0, 1.0, 2.0, 3.0];
        Self::real([p.map(|t| t * t), p.map(|t| -t), [1.0; 6]])
    }

    pub fn col(&self, j: usize) -> [C64; 3] {
        [self.m[0][j], self.m[1][j], self.m[2][j]]
    }

    fn block(&self, cols: [usize; 3]) -> Mat3 {
        let mut b = [[c64(0.0, 0.0); 3]; 3];
        for i in 0..3 {
            for (k, &j) in cols.iter().enumerate() {
                b[i][k] = self.m[i][j];
            }
        }
        b
    }

    /// `D(ijk)`: determinant of columns `i, j, k` (1-based) in the given order.
    pub fn d(&self, i: u8, j: u8, k: u8) -> C64 {
        det3(&self.block([i as usize - 1, j as usize - 1, k as usize - 1]))
    }

    /// `g · x · diag(λ)`.
    pub fn transform(&self, g: &Mat3, scales: &[C64; 6]) -> Self {
        let mut out = [[c64(0.0, 0.0); 6]; 3];
        for i in 0..3 {
            for j in 0..6 {
                out[i][j] = (0..3).map(|k| g[i][k] * self.m[k][j]).sum::<C64>() * scales[j];
            }
        }
        Self { m: out }
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().flatten().fold(0.0, |a, v| a.max(v.norm()))
    }
}

/// The 20 sorted triples of `{1..6}` in lexicographic order.
pub const TRIPLES: [[u8; 3]; 20] = {
    let mut out = [[0u8; 3]; 20];
    let mut n = 0;
    let mut i = 1;
    while i <= 4 {
        let mut j = i + 1;
        while j <= 5 {
            let mut k = j + 1;
            while k <= 6 {
                out[n] = [i, j, k];
                n += 1;
                k += 1;
            }
            j += 1;
        }
        i += 1;
    }
    out
};

fn triple_index(t: [u8; 3]) -> usize {
    TRIPLES.iter().position(|x| *x == t).expect("sorted triple")
}

/// Sorts three labels and returns the sign of the sorting permutation.
fn sort_with_sign(mut t: [u8; 3]) -> ([u8; 3], f64) {
    let mut sign = 1.0;
    for a in 0..3 {
        for b in 0..2 - a {
            if t[b] > t[b + 1] {
                t.swap(b, b + 1);
                sign = -sign;
            }
        }
    }
    (t, sign)
}

fn complement3(t: [u8; 3]) -> [u8; 3] {
    let mut out = [0u8; 3];
    let mut n = 0;
    for k in 1..=6u8 {
        if !t.contains(&k) {
            out[n] = k;
            n += 1;
        }
    }
    out
}

/// A (3,3)-partition `{J, Jᶜ}` of `{1..6}`, keyed by the member containing 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition33 {
    key: [u8; 3],
}

impl Partition33 {
    /// All ten partitions, ordered lexicographically by the member with `j₃ ≤ 5`.
    pub const ALL: [Partition33; 10] = [
        Partition33 { key: [1, 2, 3] },
        Partition33 { key: [1, 2, 4] },
        Partition33 { key: [1, 2, 5] },
        Partition33 { key: [1, 3, 4] },
        Partition33 { key: [1, 3, 5] },
        Partition33 { key: [1, 4, 5] },
        Partition33 { key: [1, 5, 6] },
        Partition33 { key: [1, 4, 6] },
        Partition33 { key: [1, 3, 6] },
        Partition33 { key: [1, 2, 6] },
    ];

    /// The (2,2,2)-standard tableaux `⟨123⟩, ⟨124⟩, ⟨125⟩, ⟨134⟩, ⟨135⟩`.
    pub const STANDARD: [Partition33; 5] = [
        Partition33 { key: [1, 2, 3] },
        Partition33 { key: [1, 2, 4] },
        Partition33 { key: [1, 2, 5] },
        Partition33 { key: [1, 3, 4] },
        Partition33 { key: [1, 3, 5] },
    ];

    pub fn new(j: [u8; 3]) -> Result<Self> {
        let (s, _) = sort_with_sign(j);
        if s[0] < 1 || s[2] > 6 || s[0] == s[1] || s[1] == s[2] {
            return Err(Error::BadLabels(format!("{j:?} is not a 3-subset of 1..6")));
        }
        let key = if s[0] == 1 { s } else { complement3(s) };
        Ok(Self { key })
    }

    /// The member containing 1.
    pub fn with_one(&self) -> [u8; 3] {
        self.key
    }

    /// The member not containing 6, as used for display and ordering.
    pub fn label(&self) -> [u8; 3] {
        if self.key[2] == 6 {
            complement3(self.key)
        } else {
            self.key
        }
    }

    pub fn index(&self) -> usize {
        Self::ALL.iter().position(|p| p == self).expect("canonical partition")
    }
}

impl fmt::Display for Partition33 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.label();
        write!(f, "{a}{b}{c}")
    }
}

/// Linear expression of each bracket pair on the standard tableaux
/// (coefficients in [`Partition33::STANDARD`] order).
pub const PLUCKER_RELATIONS: [[i8; 5]; 10] = [
    [1, 0, 0, 0, 0],
    [0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0],
    [0, 0, 0, 1, 0],
    [0, 0, 0, 0, 1],
    [-1, 1, -1, -1, 1],
    [1, -1, 0, 1, 0],
    [-1, 0, -1, 0, 1],
    [-1, 0, 0, -1, 1],
    [1, -1, 1, 0, 0],
];

/// Expands five standard-tableau values to the full ten-vector.
pub fn expand_standard(p: &[C64; 5]) -> [C64; 10] {
    PLUCKER_RELATIONS.map(|row| row.iter().zip(p).map(|(&c, &v)| v * c as f64).sum())
}

/// All 20 minors and 10 bracket pairs of a configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct BracketSet {
    /// `D(ijk)` for sorted triples in [`TRIPLES`] order.
    pub minors: [C64; 20],
    /// `x⟨J⟩` in [`Partition33::ALL`] order.
    pub pairs: [C64; 10],
    /// All minors exceed [`ZERO_REL_TOL`] times the largest one.
    pub generic: bool,
}

impl BracketSet {
    /// `D(ijk)` for labels in any order.
    pub fn minor(&self, t: [u8; 3]) -> C64 {
        let (s, sign) = sort_with_sign(t);
        self.minors[triple_index(s)] * sign
    }

    pub fn pair(&self, p: Partition33) -> C64 {
        self.pairs[p.index()]
    }

    pub fn standard(&self) -> [C64; 5] {
        Partition33::STANDARD.map(|p| self.pair(p))
    }

    pub fn max_minor(&self) -> f64 {
        self.minors.iter().fold(0.0, |a, v| a.max(v.norm()))
    }
}

pub fn brackets(x: &Config36) -> BracketSet {
    let minors = TRIPLES.map(|[i, j, k]| x.d(i, j, k));
    let pairs = Partition33::ALL.map(|p| {
        let j = p.with_one();
        minors[triple_index(j)] * minors[triple_index(complement3(j))]
    });
    let max = minors.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    let generic = max > 0.0 && minors.iter().all(|v| v.norm() > ZERO_REL_TOL * max);
    BracketSet { minors, pairs, generic }
}

/// Largest relative deviation between two ten-vectors after scaling `b` onto `a`
/// along the entry where `a` is largest.
pub fn projective_distance(a: &[C64; 10], b: &[C64; 10]) -> f64 {
    let k = (0..10).max_by(|&i, &j| a[i].norm().total_cmp(&a[j].norm())).unwrap();
    if b[k].norm() == 0.0 {
        return f64::INFINITY;
    }
    let s = a[k] / b[k];
    let scale = a[k].norm();
    (0..10).map(|i| (a[i] - s * b[i]).norm() / scale).fold(0.0, f64::max)
}

/// Labels of the six periods and their normal forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PeriodIndex {
    P12,
    P13,
    P14,
    P23,
    P24,
    P34,
}

impl PeriodIndex {
    pub const ALL: [PeriodIndex; 6] =
        [PeriodIndex::P12, PeriodIndex::P13, PeriodIndex::P14, PeriodIndex::P23, PeriodIndex::P24, PeriodIndex::P34];

    pub fn as_str(&self) -> &'static str {
        match self {
            PeriodIndex::P12 => "12",
            PeriodIndex::P13 => "13",
            PeriodIndex::P14 => "14",
            PeriodIndex::P23 => "23",
            PeriodIndex::P24 => "24",
            PeriodIndex::P34 => "34",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| Error::BadLabels(format!("unknown period index {s}")))
    }

    pub fn index(&self) -> usize {
        *self as usize
    }

    /// 0-based columns carrying `(1, −z₁, −z₂)` and `(1, −z₃, −z₄)`.
    pub fn z_columns(&self) -> (usize, usize) {
        match self {
            PeriodIndex::P12 => (2, 3),
            PeriodIndex::P13 => (3, 4),
            PeriodIndex::P14 => (2, 5),
            PeriodIndex::P23 => (0, 3),
            PeriodIndex::P24 => (1, 2),
            PeriodIndex::P34 => (0, 5),
        }
    }

    /// The four z-independent columns in increasing order.
    pub fn frame_columns(&self) -> [usize; 4] {
        let (a, b) = self.z_columns();
        let mut out = [0; 4];
        let mut n = 0;
        for j in 0..6 {
            if j != a && j != b {
                out[n] = j;
                n += 1;
            }
        }
        out
    }

    /// Whether the period is expressed through `F_T` rather than `F_S`.
    pub fn uses_ft(&self) -> bool {
        matches!(self, PeriodIndex::P13 | PeriodIndex::P24)
    }
}

impl fmt::Display for PeriodIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The normal form `ν_ij(z)`.
pub fn nu(ij: PeriodIndex, z: &ZMatrix) -> Config36 {
    let [z1, z2, z3, z4] = z.z;
    let o = c64(1.0, 0.0);
    let n = c64(0.0, 0.0);
    let m = -o;
    let rows = match ij {
        PeriodIndex::P12 => [[n, o, o, o, o, n], [o, m, -z1, -z3, n, n], [n, n, -z2, -z4, m, o]],
        PeriodIndex::P13 => [[n, n, o, o, o, o], [n, o, m, -z1, -z3, n], [o, n, m, -z2, -z4, n]],
        PeriodIndex::P14 => [[o, n, o, n, o, o], [m, o, -z1, n, n, -z3], [n, n, -z2, o, m, -z4]],
        PeriodIndex::P23 => [[o, o, n, o, o, n], [-z1, n, n, -z3, m, o], [-z2, m, o, -z4, n, n]],
        PeriodIndex::P24 => [[o, o, o, o, n, n], [n, -z1, -z3, m, o, n], [n, -z2, -z4, m, n, o]],
        PeriodIndex::P34 => [[o, o, n, n, o, o], [-z1, m, o, n, n, -z3], [-z2, n, n, o, m, -z4]],
    };
    Config36::new(rows)
}

/// `[p₁ p₂ p₃]·diag(c)` where `p₄ = Σ cₖ pₖ`: the matrix sending the standard
/// frame `(e₁, e₂, e₃, e₁+e₂+e₃)` to the four given columns up to scale.
fn frame(x: &Config36, cols: [usize; 4]) -> Result<Mat3> {
    let b = x.block([cols[0], cols[1], cols[2]]);
    let col_norms: f64 = (0..3).map(|k| (0..3).map(|i| b[i][k].norm_sqr()).sum::<f64>().sqrt()).product();
    if det3(&b).norm() <= ZERO_REL_TOL * col_norms {
        return Err(Error::FrameDegenerate);
    }
    let inv = inv3(&b).ok_or(Error::FrameDegenerate)?;
    let c = crate::linalg::mat_vec3(&inv, &x.col(cols[3]));
    let cmax = c.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    if c.iter().any(|v| v.norm() <= ZERO_REL_TOL * cmax) {
        return Err(Error::FrameDegenerate);
    }
    let mut f = b;
    for row in f.iter_mut() {
        for k in 0..3 {
            row[k] *= c[k];
        }
    }
    Ok(f)
}

/// Coordinates `z′` with `ν_ij(z′)` projectively equivalent to `x`.
pub fn normal_form_coords(x: &Config36, ij: PeriodIndex) -> Result<ZMatrix> {
    let fr = ij.frame_columns();
    let target = frame(&nu(ij, &ZMatrix::zero()), fr)?;
    let source = frame(x, fr)?;
    let a = mul3(&target, &inv3(&source).ok_or(Error::FrameDegenerate)?);
    let (ca, cb) = ij.z_columns();
    let ya = crate::linalg::mat_vec3(&a, &x.col(ca));
    let yb = crate::linalg::mat_vec3(&a, &x.col(cb));
    if ya[0].norm() == 0.0 || yb[0].norm() == 0.0 {
        return Err(Error::FrameDegenerate);
    }
    Ok(ZMatrix::new(-ya[1] / ya[0], -ya[2] / ya[0], -yb[1] / yb[0], -yb[2] / yb[0]))
}

/// `(y₁, y₂) ↦ (ᵗ(y₁⁻¹ y₂ y₁), ᵗy₁)`.
pub fn association(x: &Config36) -> Result<Config36> {
    let y1 = x.block([0, 1, 2]);
    let y2 = x.block([3, 4, 5]);
    let scale = x.max_abs().max(f64::MIN_POSITIVE);
    if det3(&y1).norm() <= ZERO_REL_TOL * scale.powi(3) {
        return Err(Error::SingularBlock);
    }
    let inv = inv3(&y1).ok_or(Error::SingularBlock)?;
    let left = transpose3(&mul3(&mul3(&inv, &y2), &y1));
    let right = transpose3(&y1);
    let mut m = [[c64(0.0, 0.0); 6]; 3];
    for i in 0..3 {
        for j in 0..3 {
            m[i][j] = left[i][j];
            m[i][j + 3] = right[i][j];
        }
    }
    Ok(Config36::new(m))
}

fn check_distinct(labels: &[u8]) -> Result<()> {
    for (n, &a) in labels.iter().enumerate() {
        if !(1..=6).contains(&a) || labels[..n].contains(&a) {
            return Err(Error::BadLabels(format!("{labels:?} must be distinct labels in 1..6")));
        }
    }
    Ok(())
}

/// `{ij;kl} = D(ijm)D(ijn)D(mkl)D(nkl)` with `{m,n}` the remaining labels.
pub fn curly(x: &Config36, [i, j, k, l]: [u8; 4]) -> Result<C64> {
    check_distinct(&[i, j, k, l])?;
    let rest: Vec<u8> = (1..=6).filter(|t| ![i, j, k, l].contains(t)).collect();
    let (m, n) = (rest[0], rest[1]);
    Ok(x.d(i, j, m) * x.d(i, j, n) * x.d(m, k, l) * x.d(n, k, l))
}

/// `T(ijklmn) = D(ijk)D(klm)D(mni)D(nlj)`.
pub fn t_poly(x: &Config36, t: [u8; 6]) -> Result<C64> {
    check_distinct(&t)?;
    let [i, j, k, l, m, n] = t;
    Ok(x.d(i, j, k) * x.d(k, l, m) * x.d(m, n, i) * x.d(n, l, j))
}

/// Labels of the association partner of `T(ijklmn)`, namely `T(lmnijk)`.
pub fn t_partner(t: [u8; 6]) -> [u8; 6] {
    [t[3], t[4], t[5], t[0], t[1], t[2]]
}

/// Determinant of the 6×6 matrix with rows `(x₁², x₂², x₃², x₂x₃, x₃x₁, x₁x₂)` per column.
pub fn q_poly(x: &Config36) -> C64 {
    let rows: Vec<Vec<C64>> = (0..6)
        .map(|j| {
            let [a, b, c] = x.col(j);
            vec![a * a, b * b, c * c, b * c, c * a, a * b]
        })
        .collect();
    det_dense(rows)
}

/// Determinant by partial-pivot elimination.
fn det_dense(mut a: Vec<Vec<C64>>) -> C64 {
    let n = a.len();
    let mut det = c64(1.0, 0.0);
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm())).unwrap();
        if a[piv][col].norm() == 0.0 {
            return c64(0.0, 0.0);
        }
        if piv != col {
            a.swap(piv, col);
            det = -det;
        }
        let p = a[col][col];
        det *= p;
        for r in col + 1..n {
            let f = a[r][col] / p;
            for c in col..n {
                let v = a[col][c];
                a[r][c] -= f * v;
            }
        }
    }
    det
}

/// Values of the association-related polynomials at one configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AssocInvariants {
    pub q: C64,
    pub t: C64,
    pub t_partner: C64,
    pub curly: Vec<C64>,
}

pub fn assoc_invariants(x: &Config36, t_labels: [u8; 6], curly_labels: &[[u8; 4]]) -> Result<AssocInvariants> {
    Ok(AssocInvariants {
        q: q_poly(x),
        t: t_poly(x, t_labels)?,
        t_partner: t_poly(x, t_partner(t_labels))?,
        curly: curly_labels.iter().map(|&l| curly(x, l)).collect::<Result<_>>()?,
    })
}

/// `{ij;kl}` expressed through bracket pairs: `±x⟨ijm⟩x⟨ijn⟩`.
fn curly_from_pairs(pairs: &[C64; 10], [i, j, k, l]: [u8; 4]) -> C64 {
    let rest: Vec<u8> = (1..=6).filter(|t| ![i, j, k, l].contains(t)).collect();
    let (m, n) = (rest[0], rest[1]);
    let (_, s1) = sort_with_sign([i, j, m]);
    let (_, s2) = sort_with_sign([n, k, l]);
    let (_, s3) = sort_with_sign([i, j, n]);
    let (_, s4) = sort_with_sign([m, k, l]);
    let p1 = Partition33::new([i, j, m]).expect("distinct");
    let p2 = Partition33::new([i, j, n]).expect("distinct");
    pairs[p1.index()] * pairs[p2.index()] * (s1 * s2 * s3 * s4)
}

/// The two normal forms recovered from standard-tableau brackets.
#[derive(Debug, Clone, PartialEq)]
pub struct PluckerInversion {
    /// Normal forms `[E₃ | (1,1,1)ᵗ, (1,x₁,x₂)ᵗ, (1,y₁,y₂)ᵗ]`, one per root.
    pub configs: [Config36; 2],
    /// Roots of `t² − S t + P` (values of `T(125364)` in bracket units), sorted by (re, im).
    pub roots: [C64; 2],
    /// `S² − 4P`, which equals `Q²`.
    pub discriminant: C64,
}

/// Reconstructs configurations from the five standard-tableau brackets.
pub fn invert_plucker(p: &[C64; 5]) -> Result<PluckerInversion> {
    let pairs = expand_standard(p);
    let cb = |l: [u8; 4]| curly_from_pairs(&pairs, l);
    let s = cb([1, 4, 5, 3]) - cb([5, 2, 1, 6]) + cb([6, 3, 5, 4]) - cb([2, 3, 1, 5]) + cb([2, 4, 5, 6]);
    let prod = cb([1, 6, 2, 3]) * cb([1, 2, 3, 6]);
    let disc = s * s - 4.0 * prod;
    let sq = disc.sqrt();
    let mut roots = [(s + sq) * 0.5, (s - sq) * 0.5];
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let scale = pairs.iter().fold(0.0f64, |a, v| a.max(v.norm()));
    let den = cb([3, 5, 1, 4]);
    if den.norm() <= ZERO_REL_TOL * scale * scale {
        return Err(Error::DegenerateQuadratic("{35;14} vanishes".into()));
    }
    let p124 = pairs[1];
    let p125 = pairs[2];
    let p134 = pairs[3];
    let p145 = pairs[5];
    let build = |t: C64| -> Result<Config36> {
        if t.norm() <= ZERO_REL_TOL * scale * scale {
            return Err(Error::DegenerateQuadratic("a root of the quadratic vanishes".into()));
        }
        let x2 = t / den;
        let mden = p125 - x2 * (p124 - p145);
        if mden.norm() <= ZERO_REL_TOL * scale * x2.norm().max(1.0) {
            return Err(Error::DegenerateQuadratic("scale equation is singular".into()));
        }
        let mu = x2 * (x2 - 1.0) / mden;
        let x1 = x2 - mu * p145;
        let y1 = x1 + mu * p124;
        let y2 = x2 + mu * p134;
        let o = c64(1.0, 0.0);
        let n = c64(0.0, 0.0);
        Ok(Config36::new([[o, n, n, o, o, o], [n, o, n, o, x1, y1], [n, n, o, o, x2, y2]]))
    };
    Ok(PluckerInversion { configs: [build(roots[0])?, build(roots[1])?], roots, discriminant: disc })
}

/// Four positive reals, ordered `c₁ ≥ c₂ ≥ c₃ ≥ c₄ > 0`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct MeanState {
    pub c: [f64; 4],
}

impl MeanState {
    /// Accepts weakly ordered positive states (fixed points such as `(1,1,1,1)` included).
    pub fn new(c: [f64; 4]) -> Result<Self> {
        if c.iter().any(|v| !v.is_finite() || *v <= 0.0) || c[0] < c[1] || c[1] < c[2] || c[2] < c[3] {
            return Err(Error::OrderViolation(format!("{c:?} is not ordered c1>=c2>=c3>=c4>0")));
        }
        Ok(Self { c })
    }

    pub fn is_strict(&self) -> bool {
        let c = &self.c;
        c[0] > c[1] && c[1] > c[2] && c[2] > c[3]
    }

    fn require_strict(&self) -> Result<()> {
        if self.is_strict() {
            Ok(())
        } else {
            Err(Error::Precondition(format!("{:?} is not strictly ordered", self.c)))
        }
    }
}

/// The two matrices with `x⟨123⟩ = 0` whose remaining standard brackets are
/// `x⟨124⟩=c₄², x⟨125⟩=c₃², x⟨134⟩=c₂², x⟨135⟩=c₁²`.
pub fn preimage_d4(c: &MeanState) -> Result<[Config36; 2]> {
    c.require_strict()?;
    let [c1, c2, c3, c4] = c.c;
    let (x124, x125, x134, x135) = (c4 * c4, c3 * c3, c2 * c2, c1 * c1);
    for (name, v) in [("x135-x134", x135 - x134), ("x125", x125), ("x134", x134), ("x135-x125", x135 - x125)] {
        if v == 0.0 {
            return Err(Error::DegenerateInput(format!("{name} vanishes")));
        }
    }
    let p1 = Config36::real([
        [1.0, 1.0, 0.0, 0.0, 1.0, 1.0],
        [
            -(x124 - x125 - x134 + x135) / (x135 - x134),
            -1.0,
            1.0,
            0.0,
            0.0,
            -(x124 * x135 - x125 * x134) / ((x135 - x134) * x125),
        ],
        [0.0, 0.0, 0.0, 1.0, -1.0, -(x125 - x124) / x125],
    ]);
    let p2 = Config36::real([
        [1.0, 1.0, 0.0, 0.0, 1.0, 1.0],
        [-(x134 - x124) / x134, -1.0, 1.0, 0.0, 0.0, 0.0],
        [
            -(x135 * x124 - x125 * x134) / ((x135 - x125) * x134),
            0.0,
            0.0,
            1.0,
            -1.0,
            -(x124 - x125 - x134 + x135) / (x135 - x125),
        ],
    ]);
    Ok([p1, p2])
}

/// A point on the Kummer locus built from a mean state.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerPoint {
    pub z: ZMatrix,
    pub x: Config36,
    /// `d₁d₂d₃d₄`.
    pub q1: f64,
    /// `(c₁²−c₂²−c₃²+c₄²−√Q₁)/2`, the `x⟨123⟩` value matching `z`.
    pub c0sq: f64,
    /// `(c₁²−c₂²−c₃²+c₄²+√Q₁)/2`, the value of the partner branch.
    pub c0sq_partner: f64,
    /// Deviation of the brackets of `x` from `[c₀², c₁², c₂², c₃², c₄²]`
    /// on `⟨123⟩,⟨135⟩,⟨134⟩,⟨125⟩,⟨124⟩`, relative to `c₁²`.
    pub proportionality_residual: f64,
}

pub fn kummer_point(c: &MeanState) -> Result<KummerPoint> {
    c.require_strict()?;
    let [c1, c2, c3, c4] = c.c;
    let d = [c1 + c2 + c3 + c4, c1 + c2 - c3 - c4, c1 - c2 + c3 - c4, c1 - c2 - c3 + c4];
    if d[3] <= 0.0 {
        return Err(Error::Precondition(format!("c1-c2-c3+c4 = {} is not positive", d[3])));
    }
    let q1 = d.iter().product::<f64>();
    let sq = q1.sqrt();
    let (s1, s2, s3, s4) = (c1 * c1, c2 * c2, c3 * c3, c4 * c4);
    let a = s1 - s2 + s3 - s4 - sq;
    let b = s1 + s2 - s3 - s4 - sq;
    let z = ZMatrix::real([
        1.0 - c4 * a / (2.0 * c2 * (c1 * c3 - c2 * c4)),
        1.0 - c1 * b / (2.0 * c2 * (c1 * c2 - c3 * c4)),
        1.0 - c1 * a / (2.0 * c3 * (c1 * c3 - c2 * c4)),
        1.0 - c4 * b / (2.0 * c3 * (c1 * c2 - c3 * c4)),
    ]);
    let x = nu(PeriodIndex::P34, &z);
    let c0sq = (s1 - s2 - s3 + s4 - sq) / 2.0;
    let c0sq_partner = (s1 - s2 - s3 + s4 + sq) / 2.0;
    let br = brackets(&x);
    let get = |j: [u8; 3]| br.pair(Partition33::new(j).expect("label"));
    let scale = s1 / get([1, 3, 5]);
    let targets = [([1, 2, 3], c0sq), ([1, 3, 5], s1), ([1, 3, 4], s2), ([1, 2, 5], s3), ([1, 2, 4], s4)];
    let proportionality_residual =
        targets.iter().map(|&(j, t)| (get(j) * scale - t).norm() / s1).fold(0.0, f64::max);
    Ok(KummerPoint { z, x, q1, c0sq, c0sq_partner, proportionality_residual })
}
