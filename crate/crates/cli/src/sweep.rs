use k3_thomae::domains_groups::{GaussInt, GroupElem};
use k3_thomae::{c64, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::json;

use crate::args::{StateArg, TauArg, VerifyCmd};
use crate::ops::{verify, verify_name, Ctrl, Outcome};

const OPS: usize = 12;

fn tau(r: &mut ChaCha8Rng, symmetric: bool) -> Vec<C64> {
    let mut u = |lo: f64, hi: f64| r.gen_range(lo..hi);
    let (s0, s1, s3) = (u(-0.5, 0.5), u(-0.5, 0.5), u(-0.5, 0.5));
    let s2 = if symmetric { 0.0 } else { u(-0.5, 0.5) };
    let (l1, l2) = (u(0.4, 1.2), u(0.4, 1.2));
    let p1 = if symmetric { 0.0 } else { u(-0.3, 0.3) };
    let (p0, p2, p3) = (u(-0.3, 0.3), u(-0.3, 0.3), u(-0.3, 0.3));
    let off = c64(p0, p1) * 0.5 * l1.min(l2);
    let i = c64(0.0, 1.0);
    vec![
        c64(s0, l1 + p2.abs()),
        c64(s1, s2) + i * off,
        c64(s1, -s2) + i * off.conj(),
        c64(s3, l2 + p3.abs()),
    ]
}

/// A translation times a conjugate translation, optionally times `diag(i, 1, i, 1)`.
fn level_matrix(r: &mut ChaCha8Rng) -> Vec<C64> {
    let mut herm = || {
        let (a, d) = (r.gen_range(-2i64..=2), r.gen_range(-2i64..=2));
        let (x, y) = (r.gen_range(-1i64..=1), r.gen_range(-1i64..=1));
        let off = GaussInt::new(x + y, x - y);
        [[GaussInt::new(2 * a, 0), off], [off.conj(), GaussInt::new(2 * d, 0)]]
    };
    let (b, c) = (herm(), herm());
    let mut g = GroupElem::translation(b)
        .and_then(|t| Ok(t.mul(&GroupElem::conj_translation(c)?)))
        .expect("even Hermitian blocks give level elements");
    if r.gen_bool(0.5) {
        g = g.mul(&GroupElem::diag([GaussInt::I, GaussInt::ONE, GaussInt::I, GaussInt::ONE]).expect("unit diagonal"));
    }
    g.matrix().iter().flatten().map(|v| v.to_c64()).collect()
}

fn state(r: &mut ChaCha8Rng) -> Vec<f64> {
    let c4 = r.gen_range(0.5..2.0);
    let c3 = c4 * (1.0 + r.gen_range(0.05..1.0));
    let c2 = c3 * (1.0 + r.gen_range(0.05..1.0));
    vec![c2 * (1.0 + r.gen_range(0.05..1.0)), c2, c3, c4]
}

/// Random inputs for operation `op` of case `case`; every case draws from its own stream.
pub fn sample(seed: u64, case: usize, op: usize) -> VerifyCmd {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream((case * OPS + op) as u64);
    match op {
        0 => VerifyCmd::Jacobi { lambda: r.gen_range(0.05..0.95) },
        1 => VerifyCmd::Gauss { z: r.gen_range(0.05..=1.0) },
        2 => VerifyCmd::TwoTau(TauArg { tau: tau(&mut r, false) }),
        3 => VerifyCmd::ThetaLaws(TauArg { tau: tau(&mut r, false) }),
        4 => VerifyCmd::H2(TauArg { tau: tau(&mut r, true) }),
        5 => {
            let g = level_matrix(&mut r);
            VerifyCmd::Transform { g, tau: tau(&mut r, false) }
        }
        6 => {
            // Points near the reference chamber, where every normal form lies in the polydisc.
            let base = [0.625, 0.0625, 0.0625, 0.625];
            VerifyCmd::Thomae { z: base.iter().map(|&b| c64(b + r.gen_range(-0.02..0.02), 0.0)).collect() }
        }
        7 => VerifyCmd::Degeneration { z1: r.gen_range(0.1..0.4), z4: r.gen_range(0.1..0.4), eps: 1e-4 },
        8 => VerifyCmd::Fe1(StateArg { c: state(&mut r) }),
        9 => VerifyCmd::Fe2(StateArg { c: state(&mut r) }),
        10 => VerifyCmd::AgmD4(StateArg { c: state(&mut r) }),
        _ => VerifyCmd::AgmBorchardt(StateArg { c: state(&mut r) }),
    }
}

/// All cases in input order, computed in parallel.
pub fn verify_all(seed: u64, n: usize, ctrl: &Ctrl) -> Vec<(String, Outcome)> {
    let jobs: Vec<(usize, VerifyCmd)> =
        (0..n).flat_map(|case| (0..OPS).map(move |op| (case, sample(seed, case, op)))).collect();
    jobs.par_iter()
        .map(|(case, cmd)| {
            let out = verify(cmd, ctrl).map(|mut rec| {
                if let Some(obj) = rec.input.as_object_mut() {
                    obj.insert("case".into(), json!(case));
                    obj.insert("seed".into(), json!(seed));
                }
                rec
            });
            (verify_name(cmd).to_string(), out)
        })
        .collect()
}
