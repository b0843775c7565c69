//! Subcommand dispatch for the `isopair` binary.
//!
//! Exit codes: 0 affirmative verdict or passing check, 1 negative verdict or
//! failing check, 2 inconclusive, 3 input error.

pub mod config;
pub mod render;

use std::fs;
use std::path::Path;

use isopair::bipoly::json::{float_to_value, poly_from_value};
use isopair::innertoral::{
    classify_inner_toral, polynomial_convexity, sample_variety, Convexity, Region, SamplerConfig, Verdict,
};
use isopair::opmodel::{
    char_numerator, check_inner, check_pure, conjugacy_check, symmetry_identity_check, taylor_truncate,
    verify_annihilation, verify_q_identity, MatrixRationalInner,
};
use isopair::parallel::with_threads;
use isopair::torusmeasure::{bpe_norm, gram, recover_minimal_polynomial, TorusMeasure};
use isopair::{BiPoly, Error, ExactComplex, ExactPoly, FloatPoly, C64};
use serde_json::{json, Value};

pub use config::{Command, CommandConfig, Format, Identity, RegionArg};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass = 0,
    Fail = 1,
    Inconclusive = 2,
    InputError = 3,
}

impl Status {
    pub fn code(self) -> i32 {
        self as i32
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }
}

/// Primary output of a command.
#[derive(Clone, Debug, PartialEq)]
pub enum Body {
    Json(Value),
    Text(String),
    Csv(String),
}

impl Body {
    pub fn into_string(self) -> String {
        match self {
            Body::Json(v) => serde_json::to_string_pretty(&v).expect("serializable") + "\n",
            Body::Text(s) | Body::Csv(s) => s,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: Status,
    pub body: Body,
}

/// A failure before any verdict: unreadable file, malformed JSON or an input
/// the library rejects.
#[derive(Clone, Debug, PartialEq)]
pub struct InputError {
    pub path: Option<String>,
    pub message: String,
}

impl InputError {
    fn new(message: impl Into<String>) -> Self {
        Self { path: None, message: message.into() }
    }

    pub fn to_json(&self) -> Value {
        json!({ "error": self.message, "path": self.path })
    }
}

impl From<Error> for InputError {
    fn from(e: Error) -> Self {
        match e {
            Error::Input { path, message } => Self { path: Some(path), message },
            other => Self::new(other.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, InputError>;

fn read_json(path: &Path) -> Res<Value> {
    let text = fs::read_to_string(path).map_err(|e| InputError::new(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| InputError {
        path: Some("$".into()),
        message: format!("{}: malformed JSON at line {} column {}: {e}", path.display(), e.line(), e.column()),
    })
}

fn read_poly(path: &Path) -> Res<ExactPoly> {
    let v = read_json(path)?;
    Ok(poly_from_value(&v, "$")?.to_exact()?)
}

fn read_phi(path: &Path) -> Res<MatrixRationalInner> {
    Ok(MatrixRationalInner::from_json(&read_json(path)?)?)
}

fn read_measure(path: &Path) -> Res<TorusMeasure> {
    Ok(TorusMeasure::from_json(&read_json(path)?)?)
}

fn sampler(cfg: &CommandConfig) -> Res<SamplerConfig> {
    let g = &cfg.global;
    let s = SamplerConfig { tol: g.tol, seed: g.seed, ..SamplerConfig::with_samples(g.samples) };
    s.validate()?;
    Ok(s)
}

fn pair(v: &[usize]) -> (usize, usize) {
    match v {
        [a] => (*a, *a),
        [a, b, ..] => (*a, *b),
        [] => (0, 0),
    }
}

fn parse_zeta(s: &str) -> Res<(C64, C64)> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| InputError { path: Some("--zeta".into()), message: "expected re,im,re,im".into() })?;
    match parts.as_slice() {
        [a, b, c, d] => Ok((C64::new(*a, *b), C64::new(*c, *d))),
        _ => Err(InputError { path: Some("--zeta".into()), message: "expected four numbers re,im,re,im".into() }),
    }
}

/// Best-effort exact form of a recovered polynomial: scale so the largest
/// coefficient is 1 and rationalize with small denominators.
fn rationalize(q: &FloatPoly) -> Option<ExactPoly> {
    let grid: Option<Vec<Vec<ExactComplex>>> = q
        .grid()
        .iter()
        .map(|r| r.iter().map(|c| ExactComplex::rationalize(*c, 1000, 1e-9)).collect())
        .collect();
    grid.map(|g| BiPoly::from_grid(g).normalize())
}

fn output(cfg: &CommandConfig, json: Value, text: String) -> Body {
    match cfg.global.format {
        Format::Json => Body::Json(json),
        Format::Text => Body::Text(text),
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("report serializes")
}

fn dispatch(cfg: &CommandConfig) -> Res<Outcome> {
    let g = &cfg.global;
    let out = match &cfg.command {
        Command::Classify { poly } => {
            let q = read_poly(poly)?;
            let r = classify_inner_toral(&q, &sampler(cfg)?)?;
            let status = match r.inner_toral {
                Verdict::Yes => Status::Pass,
                Verdict::No => Status::Fail,
                Verdict::Inconclusive => Status::Inconclusive,
            };
            Outcome { status, body: output(cfg, to_value(&r), render::classification(&r)) }
        }
        Command::Convexity { poly } => {
            let q = read_poly(poly)?;
            let r = polynomial_convexity(&q, &sampler(cfg)?)?;
            let status = match r.verdict {
                Convexity::Convex => Status::Pass,
                Convexity::NotConvex => Status::Fail,
                Convexity::Inconclusive => Status::Inconclusive,
            };
            Outcome { status, body: output(cfg, to_value(&r), render::convexity(&r)) }
        }
        Command::Sample { poly, region, n } => {
            let q = read_poly(poly)?.to_float();
            let region = match region {
                RegionArg::Torus => Region::Torus,
                RegionArg::Disk => Region::Disk,
            };
            let pts = sample_variety(&q, region, *n, &sampler(cfg)?);
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["re_z", "im_z", "re_w", "im_w"]).expect("in-memory write");
            for (z, wv) in &pts {
                w.serialize((z.re, z.im, wv.re, wv.im)).expect("in-memory write");
            }
            let bytes = w.into_inner().expect("in-memory write");
            Outcome { status: Status::Pass, body: Body::Csv(String::from_utf8(bytes).expect("ascii")) }
        }
        Command::Minpoly { phi } => {
            let c = char_numerator(&read_phi(phi)?)?;
            let json = json!({ "q_full": to_value(&c.q_full), "q_min": to_value(&c.q_min) });
            Outcome { status: Status::Pass, body: output(cfg, json, render::minpoly(&c)) }
        }
        Command::Verify { phi, identity, cutoff, buffer } => {
            let phi = read_phi(phi)?;
            match identity {
                Identity::Inner => {
                    let r = check_inner(&phi, g.samples, g.tol);
                    Outcome { status: Status::from_bool(r.passed), body: output(cfg, to_value(&r), render::identity(&r)) }
                }
                Identity::Pure => {
                    let r = check_pure(&phi, g.samples, g.tol);
                    Outcome { status: Status::from_bool(r.pure), body: output(cfg, to_value(&r), render::purity(&r)) }
                }
                Identity::Qmatrix => {
                    let q = char_numerator(&phi)?.q_full;
                    let r = verify_q_identity(&q, &phi);
                    Outcome { status: Status::from_bool(r.passed), body: output(cfg, to_value(&r), render::identity(&r)) }
                }
                Identity::Annihilation | Identity::Symmetry => {
                    let q = char_numerator(&phi)?.q_min;
                    let truncated = taylor_truncate(&phi, *cutoff)?;
                    let r = if *identity == Identity::Annihilation {
                        verify_annihilation(&q, &truncated, buffer.unwrap_or(cutoff / 2), g.tol)?
                    } else {
                        match symmetry_identity_check(&q, &truncated, g.tol) {
                            Err(Error::NotSelfInversive) => {
                                let json = json!({ "identity_name": "symmetry", "passed": false, "reason": "minimal polynomial is not self-inversive" });
                                let text = "IDENTITY symmetry: FAILS (minimal polynomial is not self-inversive)\n".to_string();
                                return Ok(Outcome { status: Status::Fail, body: output(cfg, json, text) });
                            }
                            other => other?,
                        }
                    };
                    Outcome { status: Status::from_bool(r.passed), body: output(cfg, to_value(&r), render::identity(&r)) }
                }
            }
        }
        Command::Gram { measure, maxdeg } => {
            let gm = gram(&read_measure(measure)?, pair(maxdeg));
            let text = render::gram(&gm);
            Outcome { status: Status::Pass, body: output(cfg, gm.to_json(), text) }
        }
        Command::Recover { measure, search } => {
            let mu = read_measure(measure)?;
            match recover_minimal_polynomial(&mu, pair(search)) {
                Ok(r) => {
                    let exact = rationalize(&r.q);
                    let mut json = to_value(&r);
                    json["q_rational"] = exact.as_ref().map_or(Value::Null, to_value);
                    json["q_float"] = float_to_value(&r.q);
                    let text = render::recovered(&r, exact.map(|e| e.to_string()).as_deref());
                    Outcome { status: Status::Pass, body: output(cfg, json, text) }
                }
                Err(e @ Error::NoRelation(..)) => {
                    let json = json!({ "found": false, "reason": e.to_string() });
                    Outcome { status: Status::Fail, body: output(cfg, json, format!("NO RELATION: {e}\n")) }
                }
                Err(e) => return Err(e.into()),
            }
        }
        Command::Bpe { measure, zeta, maxdeg } => {
            let mu = read_measure(measure)?;
            let b = bpe_norm(&mu, parse_zeta(zeta)?, pair(maxdeg))?;
            let mut json = to_value(&b);
            json["bounded"] = json!(b.bounded());
            Outcome { status: Status::from_bool(b.bounded()), body: output(cfg, json, render::bpe(&b)) }
        }
        Command::Conjcheck { phi, psi, f } => {
            let r = conjugacy_check(&read_phi(phi)?, &read_phi(psi)?, &read_phi(f)?, g.samples, g.tol)?;
            let ok = r.identity.passed && r.same_minimal_polynomial;
            Outcome { status: Status::from_bool(ok), body: output(cfg, to_value(&r), render::conjugacy(&r)) }
        }
    };
    Ok(out)
}

/// Run one command on the configured thread pool.
pub fn run(cfg: &CommandConfig) -> Result<Outcome, InputError> {
    with_threads(cfg.global.threads, || dispatch(cfg))
}
