//! Small fixed-size complex matrix helpers.

use crate::C64;

pub type Mat2 = [[C64; 2]; 2];
pub type Mat3 = [[C64; 3]; 3];
pub type Mat6 = [[C64; 6]; 6];

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };
const ONE: C64 = C64 { re: 1.0, im: 0.0 };

pub fn det2(m: &Mat2) -> C64 {
    m[0][0] * m[1][1] - m[0][1] * m[1][0]
}

pub fn inv2(m: &Mat2) -> Option<Mat2> {
    let d = det2(m);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    Some([[m[1][1] / d, -m[0][1] / d], [-m[1][0] / d, m[0][0] / d]])
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn add2(a: &Mat2, b: &Mat2) -> Mat2 {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

pub fn adjoint2(m: &Mat2) -> Mat2 {
    [[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]]
}

pub fn transpose2(m: &Mat2) -> Mat2 {
    [[m[0][0], m[1][0]], [m[0][1], m[1][1]]]
}

/// Eigenvalues (ascending) of the Hermitian part `(m + m*)/2`.
pub fn hermitian_eigs2(m: &Mat2) -> [f64; 2] {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let b = (m[0][1] + m[1][0].conj()) * 0.5;
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    [mean - r, mean + r]
}

pub fn det3(m: &Mat3) -> C64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub fn inv3(m: &Mat3) -> Option<Mat3> {
    let d = det3(m);
    if d.norm() == 0.0 || !d.is_finite() {
        return None;
    }
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = others(j);
            let (c0, c1) = others(i);
            let cof = m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0];
            let sign = if (i + j) % 2 == 0 { 1.0 } else { -1.0 };
            out[i][j] = cof * sign / d;
        }
    }
    Some(out)
}

fn others(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

pub fn mul3(a: &Mat3, b: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec3(a: &Mat3, v: &[C64; 3]) -> [C64; 3] {
    [0, 1, 2].map(|i| a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2])
}

pub fn transpose3(m: &Mat3) -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            out[i][j] = m[j][i];
        }
    }
    out
}

pub fn identity3() -> Mat3 {
    let mut out = [[ZERO; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        row[i] = ONE;
    }
    out
}

pub fn mul6(a: &Mat6, b: &Mat6) -> Mat6 {
    let mut out = [[ZERO; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = (0..6).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    out
}

pub fn mat_vec6(a: &Mat6, v: &[C64; 6]) -> [C64; 6] {
    let mut out = [ZERO; 6];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (0..6).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn transpose6(m: &Mat6) -> Mat6 {
    let mut out = [[ZERO; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            out[i][j] = m[j][i];
        }
    }
    out
}

pub fn adjoint6(m: &Mat6) -> Mat6 {
    let mut out = transpose6(m);
    for row in out.iter_mut() {
        for x in row.iter_mut() {
            *x = x.conj();
        }
    }
    out
}

/// Bilinear form `ᵗu M v`.
pub fn bilinear6(u: &[C64; 6], m: &Mat6, v: &[C64; 6]) -> C64 {
    let mv = mat_vec6(m, v);
    u.iter().zip(mv.iter()).map(|(a, b)| a * b).sum()
}

/// Sesquilinear form `u* M v`.
pub fn sesquilinear6(u: &[C64; 6], m: &Mat6, v: &[C64; 6]) -> C64 {
    let mv = mat_vec6(m, v);
    u.iter().zip(mv.iter()).map(|(a, b)| a.conj() * b).sum()
}

pub fn max_abs_diff6(a: &Mat6, b: &Mat6) -> f64 {
    let mut m = 0.0f64;
    for i in 0..6 {
        for j in 0..6 {
            m = m.max((a[i][j] - b[i][j]).norm());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;

    #[test]
    fn inverse_of_3x3() {
        let m = [
            [c64(2.0, 1.0), c64(0.5, 0.0), c64(0.0, -1.0)],
            [c64(1.0, 0.0), c64(3.0, 0.0), c64(1.0, 1.0)],
            [c64(0.0, 2.0), c64(-1.0, 0.0), c64(4.0, 0.0)],
        ];
        let inv = inv3(&m).unwrap();
        let p = mul3(&m, &inv);
        let id = identity3();
        for i in 0..3 {
            for j in 0..3 {
                assert!((p[i][j] - id[i][j]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn hermitian_eigenvalues() {
        let m = [[c64(2.0, 0.0), c64(0.0, 1.0)], [c64(0.0, -1.0), c64(2.0, 0.0)]];
        let [lo, hi] = hermitian_eigs2(&m);
        assert!((lo - 1.0).abs() < 1e-15 && (hi - 3.0).abs() < 1e-15);
    }
}
