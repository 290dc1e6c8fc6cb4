//! Subcommand implementations. Each returns the text to print and whether
//! every requested check passed.

use num_rational::BigRational;
use rayon::prelude::*;
use serde_json::{json, Value};
use slchar_core::asymptotics::{
    character_at_real_t, full_expansion_sl3, leading_asym_ch, qdim_ratio, qdim_slope_sl3, qdim_slope_stated,
    richardson_slope, verify_appendix,
};
use slchar_core::bernoulli::{check_euler_bernoulli_identity, verify_s_identity};
use slchar_core::characters::{
    central_charge, character_ch, check_route_equivalence, constant_term, f_ls_exact, h_s, CharacterParams,
};
use slchar_core::decomposition::{f_ls_decomposed, f_ls_multivar_quadrature, rel_log2};
use slchar_core::float::MAX_PREC;
use slchar_core::modular_transform::{
    half_index_identity, verify_general_transform, verify_s_transform, SL2Matrix, TransformReport,
};
use slchar_core::partial_theta::{
    observed_order, script_f, script_f_expansion, script_g, script_g_expansion, PartialThetaParams,
};
use slchar_core::series::rat_int;
use slchar_core::{Error, PrecComplex, PrecFloat};

use crate::cli::{AsymKind, Cli, Command, Format, ModularFamily, SeriesArgs};
use crate::format::{self, parse_complex, parse_positive_list, parse_rational, SCHEMA};
use crate::sampling::Sampler;
use crate::CliError;

/// Text for stdout and the overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub passed: bool,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    pub prec: u32,
    pub seed: u64,
    pub format: Format,
}

impl RunConfig {
    pub fn new(prec: u32, seed: u64, format: Format) -> Result<Self, CliError> {
        if !(64..=MAX_PREC).contains(&prec) {
            return Err(CliError::Usage(format!("precision must lie in [64, {MAX_PREC}] bits")));
        }
        Ok(RunConfig { prec, seed, format })
    }

    /// A tolerance finer than `2^(-prec/2)` cannot be certified.
    pub fn check_tolerance(&self, tol: f64) -> Result<f64, CliError> {
        let floor = -f64::from(self.prec) / 2.0;
        if tol.is_nan() || tol <= 0.0 || tol.log2() < floor {
            return Err(CliError::Usage(format!(
                "tolerance must be at least 2^{floor} at {} bits",
                self.prec
            )));
        }
        Ok(tol.log2())
    }
}

fn sci(x: f64) -> String {
    format!("{x:.6e}")
}

fn parse_u32_list(text: &str) -> Result<Vec<u32>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<u32>()
                .map_err(|_| CliError::Usage(format!("not an index: {t:?}")))
        })
        .collect()
}

fn check_trunc(trunc: i64) -> Result<(), CliError> {
    if trunc < 1 {
        return Err(CliError::Usage("trunc must be at least 1".into()));
    }
    Ok(())
}

fn json_out(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values are serializable");
    s.push('\n');
    s
}

/// Accumulates named checks into a report.
struct Report {
    command: &'static str,
    checks: Vec<Value>,
    passed: bool,
}

impl Report {
    fn new(command: &'static str) -> Self {
        Report {
            command,
            checks: Vec::new(),
            passed: true,
        }
    }

    fn push(&mut self, ok: bool, mut record: Value) {
        record["pass"] = json!(ok);
        self.passed &= ok;
        self.checks.push(record);
    }

    fn extend(&mut self, records: Vec<(bool, Value)>) {
        for (ok, r) in records {
            self.push(ok, r);
        }
    }

    fn finish(self, extra: Value) -> Outcome {
        let mut v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "passed": self.passed,
            "checks": self.checks,
        });
        if let Value::Object(m) = extra {
            for (k, x) in m {
                v[k] = x;
            }
        }
        Outcome {
            output: json_out(&v),
            passed: self.passed,
        }
    }
}

fn table(cfg: &RunConfig, command: &str, header: &[&str], rows: Vec<Vec<String>>, extra: Value) -> Outcome {
    let output = match cfg.format {
        Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for r in &rows {
                s.push_str(&r.join(","));
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let rows: Vec<Value> = rows
                .into_iter()
                .map(|r| {
                    Value::Object(
                        header
                            .iter()
                            .map(|h| h.to_string())
                            .zip(r.into_iter().map(Value::String))
                            .collect(),
                    )
                })
                .collect();
            let mut v = json!({ "schema": SCHEMA, "command": command, "rows": rows });
            if let Value::Object(m) = extra {
                for (k, x) in m {
                    v[k] = x;
                }
            }
            json_out(&v)
        }
    };
    Outcome { output, passed: true }
}

/// Dispatch a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let cfg = RunConfig::new(cli.prec, cli.seed, cli.format)?;
    match &cli.command {
        Command::Coeffs { series, check } => coeffs(series, *check),
        Command::Char { series } => char_head(series),
        Command::Asym { ell, s, t, n, kind } => asym(&cfg, *ell, *s, &parse_positive_list(t, cfg.prec)?, *n, *kind),
        Command::Qdim { ell, s, t } => qdim(&cfg, *ell, *s, &parse_positive_list(t, cfg.prec)?),
        Command::VerifyAppendix { ell_max } => appendix(*ell_max),
        Command::VerifyRoutes { ell, s_max, trunc } => routes(&parse_u32_list(ell)?, *s_max, *trunc),
        Command::VerifyDecomposition {
            ell,
            s_max,
            points,
            tol,
        } => decomposition(&cfg, &parse_u32_list(ell)?, *s_max, *points, *tol),
        Command::VerifyModular {
            family,
            ell,
            s_max,
            matrix,
            r,
            eps,
            m,
            z,
            tau,
            points,
            tol,
        } => {
            let point = match (z, tau) {
                (Some(z), Some(tau)) => Some((parse_complex(z, cfg.prec)?, parse_complex(tau, cfg.prec)?)),
                (None, None) => None,
                _ => return Err(CliError::Usage("give both --z and --tau, or neither".into())),
            };
            match family {
                ModularFamily::S => modular_s(&cfg, *ell, *s_max, point, *points, *tol),
                ModularFamily::General => {
                    let params = PartialThetaParams::new(parse_rational(r)?, *eps, parse_rational(m)?)?;
                    modular_general(&cfg, &params, &parse_matrix(matrix)?, point, *points, *tol)
                }
                ModularFamily::HalfIndex => modular_half(&cfg, point, *points, *tol),
            }
        }
        Command::VerifyEm { j, r, n, t, slack } => em(&cfg, *j, &parse_rational(r)?, *n, *t, *slack),
    }
}

fn series_params(a: &SeriesArgs) -> Result<CharacterParams, CliError> {
    check_trunc(a.trunc)?;
    Ok(CharacterParams::new(a.ell, a.s, a.trunc)?)
}

fn coeffs(a: &SeriesArgs, check: bool) -> Result<Outcome, CliError> {
    let p = series_params(a)?;
    let (f, passed) = if check {
        match check_route_equivalence(&p) {
            Ok(f) => (f, true),
            Err(Error::Mismatch(_)) => (f_ls_exact(&p)?, false),
            Err(e) => return Err(e.into()),
        }
    } else {
        (f_ls_exact(&p)?, true)
    };
    let (lead, cs) = format::series_head(&f);
    let mut v = json!({
        "schema": SCHEMA,
        "command": "coeffs",
        "ell": a.ell,
        "s": a.s,
        "trunc": a.trunc,
        "leading_exp": format::rational(&lead),
        "coeffs": cs,
    });
    if check {
        v["routes_agree"] = json!(passed);
    }
    Ok(Outcome {
        output: json_out(&v),
        passed,
    })
}

fn char_head(a: &SeriesArgs) -> Result<Outcome, CliError> {
    let p = series_params(a)?;
    let ch = character_ch(&p)?;
    let (lead, cs) = format::series_head(&ch);
    let v = json!({
        "schema": SCHEMA,
        "command": "char",
        "ell": a.ell,
        "s": a.s,
        "trunc": a.trunc,
        "conformal_weight": format::rational(&h_s(a.ell, a.s)),
        "central_charge": central_charge(a.ell),
        "leading_exp": format::rational(&lead),
        "coeffs": cs,
    });
    Ok(Outcome {
        output: json_out(&v),
        passed: true,
    })
}

fn asym(cfg: &RunConfig, ell: u32, s: u32, ts: &[PrecFloat], n: usize, kind: AsymKind) -> Result<Outcome, CliError> {
    CharacterParams::new(ell, s, 1)?;
    let mut rows = Vec::new();
    match kind {
        AsymKind::Full => {
            if ell != 3 {
                return Err(CliError::Usage("the full expansion is implemented for l = 3".into()));
            }
            let e = full_expansion_sl3(s, n);
            for tf in ts {
                let exact = character_at_real_t(ell, s, tf)?;
                let approx = e.eval(tf);
                let err = (&exact - &approx).abs();
                rows.push(vec![
                    format::float(tf),
                    format::float(&exact),
                    format::float(&approx),
                    format::float(&err),
                ]);
            }
            Ok(table(
                cfg,
                "asym",
                &["t", "exact", "expansion", "abs_err"],
                rows,
                json!({ "ell": ell, "s": s, "N": n }),
            ))
        }
        AsymKind::Leading => {
            let e = leading_asym_ch(ell, s);
            for tf in ts {
                let exact = character_at_real_t(ell, s, tf)?;
                let approx = e.eval(tf);
                let ratio = &exact / &approx;
                rows.push(vec![
                    format::float(tf),
                    format::float(&exact),
                    format::float(&approx),
                    format::float(&ratio),
                ]);
            }
            Ok(table(
                cfg,
                "asym",
                &["t", "exact", "predicted", "ratio"],
                rows,
                json!({ "ell": ell, "s": s }),
            ))
        }
    }
}

fn qdim(cfg: &RunConfig, ell: u32, s: u32, ts: &[PrecFloat]) -> Result<Outcome, CliError> {
    CharacterParams::new(ell, s, 1)?;
    let mut rows = Vec::new();
    let mut samples = Vec::new();
    for tf in ts {
        let r = qdim_ratio(ell, s, tf)?;
        let dev = (&r.re - &PrecFloat::one(cfg.prec)).abs();
        samples.push((tf.to_f64(), r.re.to_f64()));
        rows.push(vec![
            format::float(tf),
            format::float(&r.re),
            format::float(&r.im),
            format::float(&dev),
        ]);
    }
    let mut extra = json!({ "ell": ell, "s": s });
    if let [.., (t1, r1), (t2, r2)] = samples[..] {
        extra["slope_measured"] = json!(sci(richardson_slope(t1, r1, t2, r2)));
    }
    if ell == 3 {
        extra["slope_predicted"] = json!(sci(qdim_slope_sl3(s).to_f64()));
        extra["slope_stated"] = json!(sci(qdim_slope_stated(s).to_float(64).to_f64()));
    }
    Ok(table(
        cfg,
        "qdim",
        &["t", "ratio_re", "ratio_im", "abs_dev"],
        rows,
        extra,
    ))
}

fn appendix(ell_max: u32) -> Result<Outcome, CliError> {
    if ell_max < 1 {
        return Err(CliError::Usage("ell-max must be at least 1".into()));
    }
    let rep = verify_appendix(ell_max)?;
    let mut out = Report::new("verify-appendix");
    for f in &rep.failures {
        out.push(false, json!({ "failure": f }));
    }
    Ok(out.finish(json!({ "ell_max": ell_max, "identities_checked": rep.checks })))
}

fn routes(ells: &[u32], s_max: u32, trunc: i64) -> Result<Outcome, CliError> {
    check_trunc(trunc)?;
    let grid: Vec<CharacterParams> = ells
        .iter()
        .flat_map(|&ell| (0..=s_max).map(move |s| CharacterParams::new(ell, s, trunc)))
        .collect::<Result<_, _>>()?;
    let records = grid
        .par_iter()
        .map(|p| {
            let (ok, detail) = match check_route_equivalence(p) {
                Ok(f) => {
                    let (_, cs) = format::series_head(&f);
                    let law = constant_term(p.ell, p.s).to_string();
                    let ok = cs.first() == Some(&law);
                    (
                        ok,
                        if ok {
                            None
                        } else {
                            Some(format!("constant term {:?}, expected {law}", cs.first()))
                        },
                    )
                }
                Err(Error::Mismatch(m)) => (false, Some(m)),
                Err(e) => return Err(e),
            };
            Ok((ok, json!({ "ell": p.ell, "s": p.s, "trunc": trunc, "detail": detail })))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut out = Report::new("verify-routes");
    out.extend(records);
    Ok(out.finish(json!({})))
}

fn decomposition(cfg: &RunConfig, ells: &[u32], s_max: u32, points: usize, tol: f64) -> Result<Outcome, CliError> {
    let tol_log2 = cfg.check_tolerance(tol)?;
    if ells.iter().any(|&l| l < 2) {
        return Err(CliError::Usage("l must be at least 2".into()));
    }
    let mut sampler = Sampler::new(cfg.seed, cfg.prec);
    let mut grid = Vec::new();
    for &ell in ells {
        for _ in 0..points {
            let pt = sampler.multivar_point(ell);
            grid.extend((0..=s_max).map(|s| (pt.clone(), s)));
        }
    }
    let records = grid
        .par_iter()
        .map(|(pt, s)| {
            let quad = f_ls_multivar_quadrature(i64::from(*s), pt, pt.default_contour(), tol_log2 - 10.0)?;
            let dec = f_ls_decomposed(*s, pt)?;
            let err = rel_log2(&quad, &dec);
            Ok((
                err <= tol_log2,
                json!({
                    "ell": pt.ell(),
                    "s": s,
                    "tau": format::complex(pt.tau()),
                    "z": pt.zs().iter().map(format::complex).collect::<Vec<_>>(),
                    "quadrature": format::complex(&quad),
                    "decomposed": format::complex(&dec),
                    "rel_err": sci(err.exp2()),
                }),
            ))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = Report::new("verify-decomposition");
    out.extend(records);
    Ok(out.finish(json!({ "tolerance": sci(tol), "seed": cfg.seed })))
}

fn parse_matrix(text: &str) -> Result<SL2Matrix, CliError> {
    let v: Vec<i64> = text
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| CliError::Usage(format!("not an integer: {t:?}")))
        })
        .collect::<Result<_, _>>()?;
    let [a, b, c, d] = v[..] else {
        return Err(CliError::Usage("matrix needs four entries a,b,c,d".into()));
    };
    if c <= 0 {
        return Err(CliError::Usage("matrix needs c > 0".into()));
    }
    Ok(SL2Matrix::new(a, b, c, d)?)
}

fn transform_record(rep: &TransformReport, z: &PrecComplex, tau: &PrecComplex) -> Value {
    json!({
        "z": format::complex(z),
        "tau": format::complex(tau),
        "lhs": format::complex(&rep.lhs),
        "rhs": format::complex(&rep.rhs),
        "rel_err": sci(rep.rel_err()),
    })
}

/// Explicit point, or `points` sampled points alternating the sign of Im z.
fn modular_points(
    sampler: &mut Sampler,
    point: Option<(PrecComplex, PrecComplex)>,
    points: usize,
) -> Vec<(PrecComplex, PrecComplex)> {
    match point {
        Some(p) => vec![p],
        None => (0..points)
            .map(|i| {
                let z = sampler.off_axis_z(if i % 2 == 0 { 1 } else { -1 });
                (z, sampler.tau())
            })
            .collect(),
    }
}

fn modular_s(
    cfg: &RunConfig,
    ell: u32,
    s_max: u32,
    point: Option<(PrecComplex, PrecComplex)>,
    points: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let tol_log2 = cfg.check_tolerance(tol)?;
    CharacterParams::new(ell, s_max, 1)?;
    let mut sampler = Sampler::new(cfg.seed, cfg.prec);
    let records = modular_points(&mut sampler, point, points)
        .par_iter()
        .enumerate()
        .map(|(i, (z, tau))| {
            let s = (i as u32) % (s_max + 1);
            let rep = verify_s_transform(ell, s, z, tau, tol_log2 - 10.0)?;
            let mut rec = transform_record(&rep, z, tau);
            rec["ell"] = json!(ell);
            rec["s"] = json!(s);
            Ok((rep.rel_err_log2() <= tol_log2, rec))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = Report::new("verify-modular");
    out.extend(records);
    Ok(out.finish(json!({ "family": "s", "tolerance": sci(tol), "seed": cfg.seed })))
}

fn modular_general(
    cfg: &RunConfig,
    params: &PartialThetaParams,
    gamma: &SL2Matrix,
    point: Option<(PrecComplex, PrecComplex)>,
    points: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let tol_log2 = cfg.check_tolerance(tol)?;
    let mut sampler = Sampler::new(cfg.seed, cfg.prec);
    let records = modular_points(&mut sampler, point, points)
        .par_iter()
        .map(|(z, tau)| {
            let rep = verify_general_transform(params, z, tau, gamma, tol_log2 - 10.0)?;
            Ok((rep.rel_err_log2() <= tol_log2, transform_record(&rep, z, tau)))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut out = Report::new("verify-modular");
    out.extend(records);
    let m = [gamma.a, gamma.b, gamma.c, gamma.d];
    Ok(out.finish(json!({
        "family": "general",
        "matrix": m,
        "r": format::rational(&params.r),
        "eps": params.epsilon,
        "M": format::rational(&params.m),
        "tolerance": sci(tol),
        "seed": cfg.seed,
    })))
}

fn modular_half(
    cfg: &RunConfig,
    point: Option<(PrecComplex, PrecComplex)>,
    points: usize,
    tol: f64,
) -> Result<Outcome, CliError> {
    let tol_log2 = cfg.check_tolerance(tol)?;
    let mut sampler = Sampler::new(cfg.seed, cfg.prec);
    let mut out = Report::new("verify-modular");
    for (z, tau) in modular_points(&mut sampler, point, points) {
        let rep = half_index_identity(&z, &tau)?;
        out.push(rep.rel_err_log2() <= tol_log2, transform_record(&rep, &z, &tau));
    }
    Ok(out.finish(json!({ "family": "half-index", "tolerance": sci(tol), "seed": cfg.seed })))
}

fn em(cfg: &RunConfig, j: u32, r: &BigRational, n_max: usize, t: f64, slack: f64) -> Result<Outcome, CliError> {
    if t.is_nan() || t <= 0.0 {
        return Err(CliError::Usage("t must be positive".into()));
    }
    let mut out = Report::new("verify-em");
    let tf = PrecFloat::from_f64(t, cfg.prec);
    for n in 0..=n_max {
        let want = (n as u32 + j + 1) as f64;
        let o = observed_order(&script_f_expansion(j, r, n), |x| script_f(j, r, x), &tf)?;
        out.push(
            (o - want).abs() <= slack,
            json!({ "function": "F", "N": n, "predicted": sci(want), "observed": sci(o) }),
        );
        let want = want - 0.5;
        let o = observed_order(&script_g_expansion(j, r, n), |x| script_g(j, r, x), &tf)?;
        out.push(
            (o - want).abs() <= slack,
            json!({ "function": "G", "N": n, "predicted": sci(want), "observed": sci(o) }),
        );
    }
    let mut bad = Vec::new();
    for n in 0..=20usize {
        for m in [2u64, 4] {
            for x in [
                rat_int(0),
                BigRational::new(1.into(), 3.into()),
                BigRational::new((-5).into(), 7.into()),
            ] {
                if !check_euler_bernoulli_identity(n, m, &x) {
                    bad.push(format!("n={n} m={m} x={x}"));
                }
            }
        }
    }
    out.push(
        bad.is_empty(),
        json!({ "identity": "euler-bernoulli", "failures": bad }),
    );
    out.push(verify_s_identity(31), json!({ "identity": "log-series", "order": 30 }));
    Ok(out.finish(json!({ "j": j, "r": format::rational(r), "t": sci(t) })))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_floor() {
        let cfg = RunConfig::new(64, 1, Format::Json).unwrap();
        assert!(cfg.check_tolerance(1e-9).is_ok());
        assert!(cfg.check_tolerance(1e-12).is_err());
        assert!(cfg.check_tolerance(0.0).is_err());
        assert!(RunConfig::new(8, 1, Format::Json).is_err());
    }

    #[test]
    fn matrices_parse() {
        assert!(parse_matrix("1,0,1,1").is_ok());
        assert!(parse_matrix("1,0,0,1").is_err());
        assert!(parse_matrix("1,1,1,1").is_err());
        assert!(parse_matrix("1,2").is_err());
    }
}
