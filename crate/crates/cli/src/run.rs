use std::f64::consts::PI;
use std::io::Read;

use serde_json::{json, Map, Value};
use sl2_lyapunov::closed_form::{omega_closed, omega_hypergeometric};
use sl2_lyapunov::coeffs::{build_coefficients, classify_zeros, ZeroLoc};
use sl2_lyapunov::config::{ModelConfig, ResolvedModel, SweepSpec};
use sl2_lyapunov::fp_solver::{
    gamma_from_density, hilbert_residual, rice_residual, stationary_density,
};
use sl2_lyapunov::monte_carlo::{simulate_product, simulate_sde, McConfig};
use sl2_lyapunov::perturbation::{omega2, omega4, omega_weak};
use sl2_lyapunov::{DisorderModel, Error, C64};

use crate::output::{to_csv, to_json, Row};
use crate::{Cli, Command, Format, RouteArg};

pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::UnsupportedFamily(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn config_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: 2,
        message: message.into(),
    }
}

/// Errors that end the run; everything else becomes a warning.
fn is_fatal(e: &Error) -> bool {
    matches!(
        e,
        Error::Config(_) | Error::Domain(_) | Error::UnsupportedFamily(_)
    )
}

fn load_config(cli: &Cli) -> Result<ModelConfig, Failure> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| config_failure("--config is required"))?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| config_failure(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| config_failure(format!("{}: {e}", path.display())))?
    };
    Ok(ModelConfig::from_json(&text)?)
}

fn mc_config(cli: &Cli) -> McConfig {
    McConfig {
        n_steps: cli.steps,
        n_replicas: cli.replicas,
        seed: cli.seed,
        step_scale: cli.step_scale,
        ..McConfig::default()
    }
}

/// One route's answer.
struct Outcome {
    route: &'static str,
    omega: C64,
    stderr: Option<(f64, f64)>,
    family: String,
    extra: Map<String, Value>,
}

impl Outcome {
    fn new(route: &'static str, omega: C64) -> Self {
        Outcome {
            route,
            omega,
            stderr: None,
            family: String::new(),
            extra: Map::new(),
        }
    }

    fn j(&self) -> f64 {
        self.omega.im / PI
    }

    fn json(&self) -> Value {
        let mut o = Map::new();
        o.insert("route".into(), json!(self.route));
        o.insert("gamma".into(), json!(self.omega.re));
        o.insert("j".into(), json!(self.j()));
        if let Some((sg, sj)) = self.stderr {
            o.insert("stderr_gamma".into(), json!(sg));
            o.insert("stderr_j".into(), json!(sj));
        }
        if !self.family.is_empty() {
            o.insert("family".into(), json!(self.family));
        }
        o.extend(self.extra.clone());
        Value::Object(o)
    }

    fn row(&self, param: &str, value: f64) -> Row {
        let (sg, sj) = self.stderr.unwrap_or((f64::NAN, f64::NAN));
        Row {
            param: param.into(),
            value,
            gamma: self.omega.re,
            j: self.j(),
            family: self.family.clone(),
            route: self.route.into(),
            stderr_gamma: sg,
            stderr_j: sj,
        }
    }
}

fn route_closed(m: &DisorderModel) -> Result<Outcome, Error> {
    let e = omega_closed(m)?;
    let mut o = Outcome::new("closed", e.omega);
    o.family = e.family.as_str().into();
    o.extra.insert("x".into(), json!([e.x.re, e.x.im]));
    Ok(o)
}

fn route_expand(m: &DisorderModel, order: u32) -> Result<Outcome, Error> {
    let mut o = Outcome::new("expand", omega_weak(m, order)?);
    o.extra.insert("order".into(), json!(order));
    let terms: Vec<Value> = [
        Some(omega_weak(m, 0)?),
        (order >= 2).then(|| omega2(m)).transpose()?,
        (order >= 4).then(|| omega4(m)).transpose()?,
    ]
    .into_iter()
    .flatten()
    .map(|t| json!([t.re, t.im]))
    .collect();
    o.extra.insert("terms".into(), Value::Array(terms));
    Ok(o)
}

fn route_fp(m: &DisorderModel, grid: usize) -> Result<Outcome, Error> {
    let d = stationary_density(m, grid)?;
    let gamma = gamma_from_density(m, &d)?;
    let mut o = Outcome::new("fp", C64::new(gamma, PI * d.current));
    o.extra
        .insert("normalization_error".into(), json!(d.normalization_error));
    if let Ok(r) = rice_residual(m, &d) {
        o.extra.insert("rice_residual".into(), json!(r));
    }
    if let Ok(c) = omega_closed(m) {
        let probes = [
            C64::new(0.0, -0.5),
            C64::new(1.0, -0.3),
            C64::new(-2.0, -1.0),
        ];
        if let Ok(h) = hilbert_residual(m, &d, c.omega, &probes) {
            o.extra.insert("hilbert_residual".into(), json!(h));
        }
    }
    Ok(o)
}

fn route_mc(m: &DisorderModel, cli: &Cli) -> Result<Outcome, Error> {
    let e = simulate_product(m, &mc_config(cli))?;
    let mut o = Outcome::new("mc", C64::new(e.gamma, PI * e.j));
    o.stderr = Some((e.gamma_stderr, e.j_stderr));
    o.extra.insert("samples".into(), json!(e.samples));
    Ok(o)
}

fn route_sde(m: &DisorderModel, cli: &Cli) -> Result<Outcome, Error> {
    let (e, _) = simulate_sde(m, &mc_config(cli), 64)?;
    let mut o = Outcome::new("sde", C64::new(e.gamma, PI * e.j));
    o.stderr = Some((e.gamma_stderr, e.j_stderr));
    o.extra.insert("samples".into(), json!(e.samples));
    Ok(o)
}

fn compute(route: RouteArg, m: &DisorderModel, cli: &Cli) -> Result<Outcome, Error> {
    match route {
        RouteArg::Closed => route_closed(m),
        RouteArg::Expand => route_expand(m, cli.order),
        RouteArg::Fp => route_fp(m, cli.grid),
        RouteArg::Mc => route_mc(m, cli),
        RouteArg::Sde => route_sde(m, cli),
    }
}

fn metadata(r: &ResolvedModel, omega: Option<C64>, obj: &mut Map<String, Value>) {
    if let Some(off) = r.gamma_offset {
        obj.insert("gamma_offset".into(), json!(off));
        if let Some(om) = omega {
            obj.insert("growth_rate".into(), json!(om.re - off));
        }
    }
    if let Some(shift) = r.energy_shift {
        obj.insert("energy_shift".into(), json!(shift));
    }
}

fn model_json(m: &DisorderModel) -> Value {
    json!({"means": {"alpha": m.means.alpha, "w": m.means.w, "u": m.means.u}, "cov": m.cov})
}

fn single(
    cli: &Cli,
    command: &str,
    route: RouteArg,
    r: &ResolvedModel,
) -> Result<(Value, Vec<Row>), Failure> {
    let mut obj = Map::new();
    obj.insert("command".into(), json!(command));
    obj.insert("model".into(), model_json(&r.model));
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    match compute(route, &r.model, cli) {
        Ok(o) => {
            if let Value::Object(fields) = o.json() {
                obj.extend(fields);
            }
            metadata(r, Some(o.omega), &mut obj);
            rows.push(o.row("", f64::NAN));
        }
        Err(e) if is_fatal(&e) => return Err(e.into()),
        Err(e) => {
            obj.insert("gamma".into(), Value::Null);
            obj.insert("j".into(), Value::Null);
            metadata(r, None, &mut obj);
            warnings.push(e.to_string());
        }
    }
    if command == "omega" {
        let label = classify_zeros(&build_coefficients(&r.model)).label;
        obj.insert("label".into(), json!(label.as_str()));
    }
    obj.insert("warnings".into(), json!(warnings));
    Ok((Value::Object(obj), rows))
}

fn classify(r: &ResolvedModel) -> Result<Value, Failure> {
    let z = classify_zeros(&build_coefficients(&r.model));
    let family = omega_closed(&r.model)?.family;
    let zeros: Vec<Value> = z
        .zeros
        .iter()
        .map(|(loc, k)| match loc {
            ZeroLoc::Finite(y) => json!({"re": y.re, "im": y.im, "multiplicity": k}),
            ZeroLoc::Infinity => json!({"infinity": true, "multiplicity": k}),
        })
        .collect();
    Ok(json!({
        "command": "classify",
        "model": model_json(&r.model),
        "label": z.label.as_str(),
        "family": family.label(),
        "family_id": family.as_str(),
        "zeros": zeros,
    }))
}

fn validate(cli: &Cli, r: &ResolvedModel) -> Result<(Value, Vec<Row>), Failure> {
    let m = &r.model;
    let mut outcomes = Vec::new();
    let mut warnings = Vec::new();
    let attempts: Vec<(&str, Result<Outcome, Error>)> = vec![
        ("closed", route_closed(m)),
        (
            "hypergeometric",
            omega_hypergeometric(m).map(|e| {
                let mut o = Outcome::new("hypergeometric", e.omega);
                o.family = e.family.as_str().into();
                o
            }),
        ),
        ("expand", route_expand(m, cli.order)),
        ("fp", route_fp(m, cli.grid)),
        ("mc", route_mc(m, cli)),
        ("sde", route_sde(m, cli)),
    ];
    for (name, res) in attempts {
        match res {
            Ok(o) => outcomes.push(o),
            Err(e) if matches!(e, Error::Config(_)) => return Err(e.into()),
            Err(e) => warnings.push(format!("{name}: {e}")),
        }
    }
    let mut deltas = Vec::new();
    let mut worst: Option<(f64, &str, &str)> = None;
    for (i, a) in outcomes.iter().enumerate() {
        for b in &outcomes[i + 1..] {
            let d = (a.omega - b.omega).norm();
            deltas.push(json!({"a": a.route, "b": b.route, "delta": d}));
            if worst.is_none_or(|w| d > w.0) {
                worst = Some((d, a.route, b.route));
            }
        }
    }
    let mut obj = Map::new();
    obj.insert("command".into(), json!("validate"));
    obj.insert("model".into(), model_json(m));
    obj.insert(
        "routes".into(),
        Value::Array(outcomes.iter().map(Outcome::json).collect()),
    );
    obj.insert("deltas".into(), Value::Array(deltas));
    obj.insert(
        "max_delta".into(),
        worst.map_or(Value::Null, |(d, a, b)| json!({"a": a, "b": b, "delta": d})),
    );
    metadata(r, outcomes.first().map(|o| o.omega), &mut obj);
    obj.insert("warnings".into(), json!(warnings));
    let rows = outcomes.iter().map(|o| o.row("", f64::NAN)).collect();
    Ok((Value::Object(obj), rows))
}

fn scan(cli: &Cli, base: &ModelConfig) -> Result<(Value, Vec<Row>), Failure> {
    let spec = SweepSpec::parse(
        cli.sweep
            .as_deref()
            .ok_or_else(|| config_failure("scan needs --sweep"))?,
    )?;
    let route = cli.route.unwrap_or(RouteArg::Closed);
    let mut rows = Vec::new();
    let mut warnings = Vec::new();
    for v in spec.values() {
        let mut c = base.clone();
        c.set_param(&spec.param, v)?;
        let r = c.resolve()?;
        match compute(route, &r.model, cli) {
            Ok(o) => rows.push(o.row(&spec.param, v)),
            Err(e) if is_fatal(&e) => return Err(e.into()),
            Err(e) => {
                warnings.push(format!("{}={v}: {e}", spec.param));
                let mut o = Outcome::new(route_name(route), C64::new(f64::NAN, f64::NAN));
                o.family = String::new();
                rows.push(o.row(&spec.param, v));
            }
        }
    }
    for w in &warnings {
        eprintln!("sl2ly: warning: {w}");
    }
    let json_rows: Vec<Value> = rows
        .iter()
        .map(|r| {
            json!({"param": r.param, "value": r.value, "gamma": r.gamma, "j": r.j, "family": r.family,
                   "route": r.route, "stderr_gamma": r.stderr_gamma, "stderr_j": r.stderr_j})
        })
        .collect();
    Ok((
        json!({"command": "scan", "rows": json_rows, "warnings": warnings}),
        rows,
    ))
}

fn route_name(r: RouteArg) -> &'static str {
    match r {
        RouteArg::Closed => "closed",
        RouteArg::Fp => "fp",
        RouteArg::Mc => "mc",
        RouteArg::Sde => "sde",
        RouteArg::Expand => "expand",
    }
}

pub fn run(cli: &Cli) -> Result<(), Failure> {
    if cli.sweep.is_some() && cli.command != Command::Scan {
        return Err(config_failure("--sweep is only valid with scan"));
    }
    let cfg = load_config(cli)?;
    let default_format = if cli.command == Command::Scan {
        Format::Csv
    } else {
        Format::Json
    };
    let format = cli.format.unwrap_or(default_format);
    let (value, rows) = if cli.command == Command::Scan {
        scan(cli, &cfg)?
    } else {
        let r = cfg.resolve()?;
        match cli.command {
            Command::Omega => single(cli, "omega", cli.route.unwrap_or(RouteArg::Closed), &r)?,
            Command::Expand => single(cli, "expand", RouteArg::Expand, &r)?,
            Command::Mc => single(cli, "mc", RouteArg::Mc, &r)?,
            Command::Sde => single(cli, "sde", RouteArg::Sde, &r)?,
            Command::Fp => single(cli, "fp", RouteArg::Fp, &r)?,
            Command::Validate => validate(cli, &r)?,
            Command::Classify => {
                if format == Format::Csv {
                    return Err(config_failure("classify has no CSV form"));
                }
                (classify(&r)?, Vec::new())
            }
            Command::Scan => unreachable!(),
        }
    };
    let text = match format {
        Format::Json => to_json(&value),
        Format::Csv => to_csv(&rows),
    };
    match &cli.out {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| config_failure(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
