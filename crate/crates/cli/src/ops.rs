use k3_thomae::agm::{iterate_mean, limit_formula, LimitCtrl, MeanKind};
use k3_thomae::configuration::{MeanState, PeriodIndex};
use k3_thomae::domains_groups::{GaussInt, GroupElem};
use k3_thomae::hypergeometric::{fs, ft, gauss2f1, HGParams, SeriesCtrl, ZMatrix};
use k3_thomae::identities::{
    verify_2tau, verify_agm_limit, verify_degeneration, verify_fe, verify_gauss_transform, verify_h2_decomposition,
    verify_jacobi, verify_theta_laws, verify_theta_transform, verify_thomae, FeKind, Residual, VerifyCtrl,
    TOL_AGM,
};
use k3_thomae::periods::{apply_signs, period_squares, resolve_signs, tau_of, Tau};
use k3_thomae::theta::{characteristic_of, theta_char, theta_vector, Characteristic, LatticeCtrl};
use k3_thomae::{Error, C64};
use serde_json::{json, Map, Value};

use crate::args::{Config, EvalCmd, MeanArg, VerifyCmd};
use crate::output::{cx, cxs, Record};

#[derive(Debug, Clone, PartialEq)]
pub enum Failure {
    Usage(String),
    Domain(String),
}

impl Failure {
    pub fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Domain(_) => 3,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Failure::Usage(_) => "usage",
            Failure::Domain(_) => "domain",
        }
    }

    pub fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Domain(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::BadLabels(_) => Failure::Usage(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

pub type Outcome = Result<Record, Failure>;

/// Library controls derived from the global options.
#[derive(Debug, Clone, Copy)]
pub struct Ctrl {
    pub series: SeriesCtrl,
    pub verify: VerifyCtrl,
}

impl Ctrl {
    pub fn from_config(cfg: &Config) -> Result<Self, Failure> {
        let mut series = SeriesCtrl::default();
        if let Some(d) = cfg.max_degree {
            series.max_degree = d;
        }
        if let Some(t) = cfg.tol {
            if !(t > 0.0) {
                return Err(Failure::Usage(format!("--tol {t} must be positive")));
            }
        }
        let verify = VerifyCtrl { series, tol: cfg.tol, ..VerifyCtrl::default() };
        Ok(Self { series, verify })
    }
}

fn exactly<const N: usize, T: Copy>(name: &str, v: &[T]) -> Result<[T; N], Failure> {
    v.try_into().map_err(|_| Failure::Usage(format!("--{name} needs {N} values, got {}", v.len())))
}

pub fn zmatrix(v: &[C64]) -> Result<ZMatrix, Failure> {
    let [a, b, c, d] = exactly("z", v)?;
    Ok(ZMatrix::new(a, b, c, d))
}

pub fn tau(v: &[C64]) -> Result<Tau, Failure> {
    let [a, b, c, d] = exactly("tau", v)?;
    Ok(Tau::new([[a, b], [c, d]]))
}

pub fn state(v: &[f64]) -> Result<MeanState, Failure> {
    Ok(MeanState::new(exactly("c", v)?)?)
}

fn group_elem(v: &[C64]) -> Result<GroupElem, Failure> {
    let m: [C64; 16] = exactly("g", v)?;
    let mut g = [[GaussInt::ZERO; 4]; 4];
    for (k, z) in m.iter().enumerate() {
        if z.re.fract() != 0.0 || z.im.fract() != 0.0 {
            return Err(Failure::Usage(format!("--g entry {z} is not a Gaussian integer")));
        }
        g[k / 4][k % 4] = GaussInt::new(z.re as i64, z.im as i64);
    }
    Ok(GroupElem::new(g)?)
}

fn tau_value(t: &Tau) -> Value {
    cxs(&t.m.iter().flatten().copied().collect::<Vec<_>>())
}

fn z_value(z: &ZMatrix) -> Value {
    cxs(&z.z)
}

pub fn eval(cmd: &EvalCmd, ctrl: &Ctrl) -> Outcome {
    match cmd {
        EvalCmd::Fs(a) | EvalCmd::Ft(a) => {
            let z = zmatrix(&a.z)?;
            let alpha = match &a.alpha {
                Some(v) => HGParams::new(exactly("alpha", v)?)?,
                None => HGParams::half(),
            };
            let (op, v) = match cmd {
                EvalCmd::Fs(_) => ("eval fs", fs(&alpha, &z, &ctrl.series)?),
                _ => ("eval ft", ft(&alpha, &z, &ctrl.series)?),
            };
            let input = json!({ "z": z_value(&z), "alpha": cxs(alpha.alpha()) });
            Ok(Record::new(op, input, json!({ "value": cx(v.value), "degree": v.degree })))
        }
        EvalCmd::Hyp2f1 { a, b, c, x } => {
            let v = gauss2f1(*a, *b, *c, *x, &ctrl.series)?;
            let input = json!({ "a": cx(*a), "b": cx(*b), "c": cx(*c), "x": cx(*x) });
            Ok(Record::new("eval 2f1", input, json!({ "value": cx(v.value), "degree": v.degree })))
        }
    }
}

pub fn theta(t: &[C64], ch: Option<&str>) -> Outcome {
    let t = tau(t)?;
    let lc = LatticeCtrl::default();
    let input = json!({ "tau": tau_value(&t) });
    match ch {
        Some(s) => {
            let c = Characteristic::parse(s)?;
            let v = theta_char(c, &t, &lc)?;
            let mut r = Record::new("theta", input, json!({ "char": c.to_string(), "value": cx(v.value) }));
            r.diagnostics = json!({ "radius": v.radius, "even": c.is_even() });
            Ok(r)
        }
        None => {
            let tv = theta_vector(&t, &lc)?;
            let squares: Map<String, Value> =
                k3_thomae::configuration::Partition33::ALL.iter().map(|p| (p.to_string(), cx(tv.get(*p)))).collect();
            let chars: Map<String, Value> = k3_thomae::configuration::Partition33::ALL
                .iter()
                .map(|p| (p.to_string(), json!(characteristic_of(*p).to_string())))
                .collect();
            let mut r = Record::new("theta", input, json!({ "squares": squares }));
            r.diagnostics = json!({ "radius": tv.radius, "characteristics": chars });
            Ok(r)
        }
    }
}

pub fn periods(z: &[C64], ctrl: &Ctrl) -> Outcome {
    let z = zmatrix(z)?;
    let ps = period_squares(&z, &ctrl.series)?;
    let sr = resolve_signs(&ps.omega_sq)?;
    let omega = apply_signs(&ps.omega_sq, &sr.survivors[sr.chosen]);
    let t = tau_of(&omega)?;
    let by_index = |v: &[C64; 6]| -> Map<String, Value> {
        PeriodIndex::ALL.iter().map(|ij| (ij.to_string(), cx(v[ij.index()]))).collect()
    };
    let zeta: Map<String, Value> = PeriodIndex::ALL.iter().map(|ij| (ij.to_string(), z_value(&ps.zeta[ij.index()]))).collect();
    let mut r = Record::new(
        "periods",
        json!({ "z": z_value(&z) }),
        json!({ "omega_sq": by_index(&ps.omega_sq), "omega": by_index(&omega.omega), "tau": tau_value(&t) }),
    );
    r.diagnostics = json!({
        "zeta": zeta,
        "degrees": ps.degrees,
        "ratio_spread": ps.ratio_spread,
        "survivors": sr.survivors,
        "chosen": sr.chosen,
        "matches_arg_pattern": sr.matches_arg_pattern,
    });
    Ok(r)
}

pub fn agm(kind: MeanArg, c: &[f64], with_formula: bool, iter_tol: f64, maxit: usize, ctrl: &Ctrl) -> Outcome {
    let c = state(c)?;
    let kind = match kind {
        MeanArg::D4 => MeanKind::D4,
        MeanArg::Borchardt => MeanKind::Borchardt,
    };
    let it = iterate_mean(kind, &c, iter_tol, maxit)?;
    let mut result = json!({ "limit": it.limit, "iterations": it.iterations });
    let mut pass = true;
    if with_formula {
        let tol = ctrl.verify.tol.unwrap_or(TOL_AGM);
        let lf = limit_formula(kind, &c, &LimitCtrl { series: ctrl.series, ..LimitCtrl::default() })?;
        let lim = C64::new(it.limit, 0.0);
        let rz = Residual::between(C64::new(lf.value_z, 0.0), lim, tol, true);
        let rw = Residual::between(C64::new(lf.value_w, 0.0), lim, tol, true);
        pass = rz.pass && rw.pass;
        result["formula"] = json!({
            "value_z": lf.value_z,
            "value_w": lf.value_w,
            "residual_z": rz.rel,
            "residual_w": rw.rel,
            "tol": tol,
            "pre_steps": lf.pre_steps,
            "state": lf.state.c,
            "z": z_value(&lf.z),
            "w": z_value(&lf.w),
        });
    }
    let mut r = Record::new(format!("agm {}", kind.as_str()), json!({ "c": c.c }), result);
    r.diagnostics = json!({
        "gaps": it.trace.gaps,
        "rate_constants": it.trace.rate_constants,
        "ratio_s": it.trace.ratio_s,
        "ratio_t": it.trace.ratio_t,
        "diffs": it.trace.diffs,
        "fitted_exponent": it.trace.fitted_exponent,
    });
    r.pass = pass;
    Ok(r)
}

/// Name used in the `op` field.
pub fn verify_name(cmd: &VerifyCmd) -> &'static str {
    match cmd {
        VerifyCmd::Jacobi { .. } => "verify jacobi",
        VerifyCmd::Gauss { .. } => "verify gauss",
        VerifyCmd::TwoTau(_) => "verify 2tau",
        VerifyCmd::ThetaLaws(_) => "verify theta-laws",
        VerifyCmd::H2(_) => "verify h2",
        VerifyCmd::Transform { .. } => "verify transform",
        VerifyCmd::Thomae { .. } => "verify thomae",
        VerifyCmd::Degeneration { .. } => "verify degeneration",
        VerifyCmd::Fe1(_) => "verify fe1",
        VerifyCmd::Fe2(_) => "verify fe2",
        VerifyCmd::AgmD4(_) => "verify agm-d4",
        VerifyCmd::AgmBorchardt(_) => "verify agm-borchardt",
    }
}

pub fn verify(cmd: &VerifyCmd, ctrl: &Ctrl) -> Outcome {
    let vc = &ctrl.verify;
    let report = match cmd {
        VerifyCmd::Jacobi { lambda } => verify_jacobi(*lambda, vc)?,
        VerifyCmd::Gauss { z } => verify_gauss_transform(*z, vc)?,
        VerifyCmd::TwoTau(a) => verify_2tau(&tau(&a.tau)?, vc)?,
        VerifyCmd::ThetaLaws(a) => verify_theta_laws(&tau(&a.tau)?, vc)?,
        VerifyCmd::H2(a) => verify_h2_decomposition(&tau(&a.tau)?, vc)?,
        VerifyCmd::Transform { g, tau: t } => verify_theta_transform(&group_elem(g)?, &tau(t)?, vc)?,
        VerifyCmd::Thomae { z } => verify_thomae(&zmatrix(z)?, vc)?,
        VerifyCmd::Degeneration { z1, z4, eps } => verify_degeneration(*z1, *z4, *eps, vc)?,
        VerifyCmd::Fe1(a) => verify_fe(FeKind::Fe1, &state(&a.c)?, vc)?,
        VerifyCmd::Fe2(a) => verify_fe(FeKind::Fe2, &state(&a.c)?, vc)?,
        VerifyCmd::AgmD4(a) => verify_agm_limit(MeanKind::D4, &state(&a.c)?, vc)?,
        VerifyCmd::AgmBorchardt(a) => verify_agm_limit(MeanKind::Borchardt, &state(&a.c)?, vc)?,
    };
    Ok(Record::from_report(verify_name(cmd), &report))
}
