use proptest::prelude::*;

use crate::agm::{iterate_mean, mean_step, MeanKind};
use crate::configuration::{brackets, nu, normal_form_coords, projective_distance, Config36, MeanState, PeriodIndex};
use crate::domains_groups::{act, cocycle_sides, embed_group, GaussInt, GroupElem};
use crate::hypergeometric::ZMatrix;
use crate::periods::{jd, tau_of, PeriodVector, Tau};
use crate::theta::{theta_vector, LatticeCtrl};
use crate::{c64, C64};

fn ordered() -> impl Strategy<Value = MeanState> {
    (0.1f64..10.0, 0.05f64..1.0, 0.05f64..1.0, 0.05f64..1.0).prop_map(|(c4, a, b, d)| {
        let c3 = c4 * (1.0 + a);
        let c2 = c3 * (1.0 + b);
        MeanState::new([c2 * (1.0 + d), c2, c3, c4]).unwrap()
    })
}

fn kind() -> impl Strategy<Value = MeanKind> {
    prop_oneof![Just(MeanKind::D4), Just(MeanKind::Borchardt)]
}

/// `S + iP` with `S` Hermitian and `P` Hermitian with least eigenvalue ≥ 0.4.
fn tau_in_domain() -> impl Strategy<Value = Tau> {
    (prop::array::uniform4(-0.5f64..0.5), prop::array::uniform4(-0.3f64..0.3), 0.4f64..1.2, 0.4f64..1.2).prop_map(
        |(s, p, l1, l2)| {
            let sh = [[c64(s[0], 0.0), c64(s[1], s[2])], [c64(s[1], -s[2]), c64(s[3], 0.0)]];
            let off = c64(p[0], p[1]) * 0.5 * l1.min(l2);
            let ph = [[c64(l1 + p[2].abs(), 0.0), off], [off.conj(), c64(l2 + p[3].abs(), 0.0)]];
            let i = c64(0.0, 1.0);
            Tau::new(std::array::from_fn(|r| std::array::from_fn(|c| sh[r][c] + i * ph[r][c])))
        },
    )
}

fn small_hermitian_even() -> impl Strategy<Value = [[GaussInt; 2]; 2]> {
    (-2i64..=2, -2i64..=2, -1i64..=1, -1i64..=1).prop_map(|(a, d, x, y)| {
        let off = GaussInt::new(x + y, x - y);
        [[GaussInt::new(2 * a, 0), off], [off.conj(), GaussInt::new(2 * d, 0)]]
    })
}

fn level_element() -> impl Strategy<Value = GroupElem> {
    (small_hermitian_even(), small_hermitian_even(), any::<bool>()).prop_map(|(b, c, flip)| {
        let g = GroupElem::translation(b).unwrap().mul(&GroupElem::conj_translation(c).unwrap());
        if flip {
            g.mul(&GroupElem::diag([GaussInt::I, GaussInt::ONE, GaussInt::I, GaussInt::ONE]).unwrap())
        } else {
            g
        }
    })
}

fn close(a: &Tau, b: &Tau, tol: f64) -> bool {
    (0..2).all(|i| (0..2).all(|j| (a.m[i][j] - b.m[i][j]).norm() <= tol * (1.0 + a.m[i][j].norm())))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mean_is_homogeneous(c in ordered(), h in 0.1f64..10.0, k in kind()) {
        let a = mean_step(k, &MeanState::new(c.c.map(|v| v * h)).unwrap()).unwrap();
        let b = mean_step(k, &c).unwrap();
        for j in 0..4 {
            prop_assert!((a.c[j] - h * b.c[j]).abs() <= 1e-13 * a.c[j]);
        }
    }

    #[test]
    fn mean_interleaves(c in ordered(), k in kind()) {
        let m = mean_step(k, &c).unwrap();
        prop_assert!(m.is_strict());
        prop_assert!(c.c[3] < m.c[3] && m.c[0] < c.c[0]);
    }

    #[test]
    fn limit_is_invariant(c in ordered(), k in kind()) {
        let a = iterate_mean(k, &c, 1e-15, 100).unwrap();
        let b = iterate_mean(k, &mean_step(k, &c).unwrap(), 1e-15, 100).unwrap();
        prop_assert!((a.limit - b.limit).abs() < 1e-13 * a.limit);
        prop_assert!(a.trace.gaps.windows(2).all(|w| w[1] < w[0] || w[1] == 0.0));
    }

    #[test]
    fn borchardt_square_root_identities(c in ordered()) {
        let m = mean_step(MeanKind::Borchardt, &c).unwrap().c;
        let r = c.c.map(f64::sqrt);
        for e1 in [1.0, -1.0] {
            for e2 in [1.0, -1.0] {
                let lhs = m[0] + e1 * m[1] + e2 * m[2] + e1 * e2 * m[3];
                let rhs = (r[0] + e1 * r[1] + e2 * r[2] + e1 * e2 * r[3]).powi(2) / 4.0;
                prop_assert!((lhs - rhs).abs() <= 1e-13 * c.c[0]);
            }
        }
        for [i, j, k, l] in [[0, 1, 2, 3], [0, 2, 1, 3], [0, 3, 1, 2]] {
            let lhs = m[i] * m[j] - m[k] * m[l];
            let rhs = (r[i] * r[j] - r[k] * r[l]) * (c.c[i] + c.c[j] - c.c[k] - c.c[l]) / 8.0;
            prop_assert!((lhs - rhs).abs() <= 1e-12 * c.c[0] * c.c[0]);
        }
    }

    #[test]
    fn group_action_composes(g in level_element(), h in level_element(), tau in tau_in_domain()) {
        let gh = g.mul(&h);
        prop_assert!(GroupElem::new(*gh.matrix()).is_ok());
        let a = act(&gh, &tau).unwrap().tau;
        let b = act(&g, &act(&h, &tau).unwrap().tau).unwrap().tau;
        prop_assert!(close(&a, &b, 1e-10));
        let lhs = act(&g.conj(), &tau).unwrap().tau.transpose();
        let rhs = act(&g, &tau.transpose()).unwrap().tau;
        prop_assert!(close(&lhs, &rhs, 1e-10));
    }

    #[test]
    fn embedding_is_exact(g in level_element(), tau in tau_in_domain()) {
        let e = embed_group(&g).unwrap();
        prop_assert!(e.preserves_h && e.integral);
        prop_assert_eq!(e.det_wedge, GaussInt::new(e.detg as i64, 0));
        let (l, r) = cocycle_sides(&g, &tau).unwrap();
        prop_assert!((l - r).norm() <= 1e-9 * l.norm().max(1.0));
    }

    #[test]
    fn jd_round_trip(tau in tau_in_domain()) {
        let back = tau_of(&PeriodVector { omega: jd(&tau) }).unwrap();
        prop_assert!(close(&back, &tau, 1e-12));
    }

    #[test]
    fn normal_form_round_trip(z in prop::array::uniform4(0.01f64..0.3)) {
        let z = ZMatrix::real(z);
        for ij in PeriodIndex::ALL {
            let back = normal_form_coords(&nu(ij, &z), ij).unwrap();
            for k in 0..4 {
                prop_assert!((back.z[k] - z.z[k]).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn brackets_are_projective(
        m in prop::array::uniform3(prop::array::uniform6(-2.0f64..2.0)),
        g in prop::array::uniform3(prop::array::uniform3(-1.0f64..1.0)),
        s in prop::array::uniform6(0.5f64..2.0),
    ) {
        let x = Config36::real(m);
        let gm: [[C64; 3]; 3] = std::array::from_fn(|i| std::array::from_fn(|j| c64(g[i][j] + if i == j { 2.0 } else { 0.0 }, 0.0)));
        let bx = brackets(&x);
        prop_assume!(bx.generic);
        let y = x.transform(&gm, &s.map(|v| c64(v, 0.0)));
        prop_assert!(projective_distance(&bx.pairs, &brackets(&y).pairs) < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn theta_squares_transpose_invariant(tau in tau_in_domain()) {
        let ctrl = LatticeCtrl::default();
        let a = theta_vector(&tau, &ctrl).unwrap();
        let b = theta_vector(&tau.transpose(), &ctrl).unwrap();
        for k in 0..10 {
            prop_assert!((a.values[k] - b.values[k]).norm() < 1e-12);
        }
    }

    #[test]
    fn theta_truncation_is_stable(tau in tau_in_domain()) {
        let loose = theta_vector(&tau, &LatticeCtrl::default()).unwrap();
        let wide = theta_vector(&tau, &LatticeCtrl { tol: 1e-20, max_radius: 80 }).unwrap();
        prop_assert!(wide.radius >= loose.radius);
        for k in 0..10 {
            prop_assert!((loose.values[k] - wide.values[k]).norm() < 1e-13);
        }
    }
}
