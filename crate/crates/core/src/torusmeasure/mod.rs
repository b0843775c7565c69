//! Measures on finite unions of monomial curves
//! `θ ↦ (e^{iaθ}, φ·e^{ibθ})` in the torus with trigonometric-polynomial
//! weights, the Hardy space `P²(μ)` they generate and its model pair.

mod model;
mod recover;

pub use model::{cokernel_basis, cokernel_stabilized, model_pair, mult_matrices, CokernelBasis, CokernelStability, GridModel};
pub use recover::{bpe_norm, recover_minimal_polynomial, BpeValue, Recovered};

use std::f64::consts::TAU;

use nalgebra::DMatrix;
use num_traits::Signed;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipoly::json::{exact_scalar_value, parse_exact_scalar, parse_float_scalar};
use crate::bipoly::{roots, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::parallel::map_indexed;
use crate::scalar::{ExactComplex, Scalar, C64};

/// Real trigonometric polynomial `ω(θ) = Σ_{|l|≤L} c_l e^{ilθ}` with
/// `c_{−l} = conj(c_l)`, stored as `c_0, …, c_L`. Nonnegative on the circle.
#[derive(Clone, Debug, PartialEq)]
pub struct TrigWeight {
    coeffs: Vec<ExactComplex>,
}

impl TrigWeight {
    pub fn new(mut coeffs: Vec<ExactComplex>) -> Result<Self> {
        while coeffs.len() > 1 && Scalar::is_zero(coeffs.last().unwrap()) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(ExactComplex::zero());
        }
        if !num_traits::Zero::is_zero(&coeffs[0].im) {
            return Err(Error::InvalidMeasure("weight constant term must be real".into()));
        }
        let w = Self { coeffs };
        w.check_nonnegative()?;
        Ok(w)
    }

    pub fn constant(c: i64) -> Result<Self> {
        Self::new(vec![ExactComplex::from_i64(c)])
    }

    pub fn coeffs(&self) -> &[ExactComplex] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `c_n` for any integer `n`.
    pub fn fourier(&self, n: i64) -> ExactComplex {
        let i = n.unsigned_abs() as usize;
        match self.coeffs.get(i) {
            None => ExactComplex::zero(),
            Some(c) if n >= 0 => c.clone(),
            Some(c) => Scalar::conj(c),
        }
    }

    pub fn eval(&self, theta: f64) -> f64 {
        let mut s = self.coeffs[0].to_c64().re;
        for (l, c) in self.coeffs.iter().enumerate().skip(1) {
            s += 2.0 * (c.to_c64() * C64::from_polar(1.0, l as f64 * theta)).re;
        }
        s
    }

    /// `ω ≥ 0`: the zeros of `z^L ω(z)` on the circle must all have even
    /// multiplicity, and `ω` must be positive away from them.
    fn check_nonnegative(&self) -> Result<()> {
        let l = self.degree();
        if l == 0 {
            return if self.coeffs[0].re.is_negative() {
                Err(Error::InvalidMeasure("negative weight".into()))
            } else {
                Ok(())
            };
        }
        let p = UniPoly::new((0..=2 * l).map(|i| self.fourier(i as i64 - l as i64)).collect());
        for (f, mult) in p.squarefree_decomposition() {
            if mult % 2 == 1 && f.deg0() > 0 {
                let rs = roots(&f.to_float(), 0.0)?;
                if rs.roots.iter().any(|r| (r.norm() - 1.0).abs() < 1e-9) {
                    return Err(Error::InvalidMeasure("weight changes sign on the circle".into()));
                }
            }
        }
        let probe = (0..32).map(|i| self.eval(TAU * (i as f64 + 0.5) / 32.0)).max_by(|a, b| a.abs().total_cmp(&b.abs()));
        match probe {
            Some(v) if v < 0.0 => Err(Error::InvalidMeasure("negative weight".into())),
            _ => Ok(()),
        }
    }
}

/// Pushforward of `ω(θ)dθ` under `θ ↦ (e^{iaθ}, φ·e^{ibθ})`.
#[derive(Clone, Debug, PartialEq)]
pub struct MonomialBranch {
    pub a: u32,
    pub b: i64,
    pub phase: ExactComplex,
    pub weight: TrigWeight,
}

impl MonomialBranch {
    pub fn new(a: u32, b: i64, phase: ExactComplex, weight: TrigWeight) -> Result<Self> {
        if a == 0 {
            return Err(Error::InvalidMeasure("branch exponent a must be at least 1".into()));
        }
        if phase.norm_sqr() != ExactComplex::from_i64(1).re {
            return Err(Error::InvalidMeasure(format!("phase {phase} is not unimodular")));
        }
        Ok(Self { a, b, phase, weight })
    }

    /// Weight 1, phase 1.
    pub fn simple(a: u32, b: i64) -> Self {
        Self::new(a, b, ExactComplex::from_i64(1), TrigWeight::constant(1).unwrap()).unwrap()
    }

    fn phase_pow(&self, e: i64) -> ExactComplex {
        if e >= 0 {
            self.phase.pow(e as u32)
        } else {
            Scalar::conj(&self.phase).pow(e.unsigned_abs() as u32)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TorusMeasure {
    branches: Vec<MonomialBranch>,
}

impl TorusMeasure {
    pub fn new(branches: Vec<MonomialBranch>) -> Result<Self> {
        if branches.is_empty() {
            return Err(Error::InvalidMeasure("no branches".into()));
        }
        let mu = Self { branches };
        if mu.mass_over_2pi().re.is_positive() {
            Ok(mu)
        } else {
            Err(Error::InvalidMeasure("total mass is zero".into()))
        }
    }

    pub fn branches(&self) -> &[MonomialBranch] {
        &self.branches
    }

    fn mass_over_2pi(&self) -> ExactComplex {
        self.branches.iter().fold(ExactComplex::zero(), |acc, b| &acc + &b.weight.fourier(0))
    }

    pub fn total_mass(&self) -> f64 {
        TAU * self.mass_over_2pi().to_c64().re
    }

    /// `⟨z^j w^k, z^{j'} w^{k'}⟩ / 2π`.
    pub fn moment_over_2pi(&self, (j, k): (usize, usize), (jp, kp): (usize, usize)) -> ExactComplex {
        let (dj, dk) = (j as i64 - jp as i64, k as i64 - kp as i64);
        self.branches.iter().fold(ExactComplex::zero(), |acc, br| {
            let c = br.weight.fourier(-(br.a as i64 * dj + br.b * dk));
            if Scalar::is_zero(&c) {
                acc
            } else {
                &acc + &(&br.phase_pow(dk) * &c)
            }
        })
    }

    pub fn to_json(&self) -> Value {
        let branches: Vec<Value> = self
            .branches
            .iter()
            .map(|b| {
                json!({
                    "a": b.a,
                    "b": b.b,
                    "phase": exact_scalar_value(&b.phase),
                    "weight": {"coeffs": b.weight.coeffs().iter().map(exact_scalar_value).collect::<Vec<_>>()},
                })
            })
            .collect();
        json!({ "branches": branches })
    }

    /// `{"branches":[{"a":2,"b":3,"phase":[re,im],"weight":…}]}`. Scalars are
    /// `[re, im]` floats (converted exactly) or exact `[re_num, re_den,
    /// im_num, im_den]`; a weight is a number or `{"coeffs":[c_0, …, c_L]}`.
    /// `phase` and `weight` default to 1.
    pub fn from_json(v: &Value) -> Result<Self> {
        let arr = v
            .get("branches")
            .ok_or_else(|| Error::input("$.branches", "missing field"))?
            .as_array()
            .ok_or_else(|| Error::input("$.branches", "expected an array"))?;
        let mut branches = Vec::with_capacity(arr.len());
        for (i, b) in arr.iter().enumerate() {
            let path = format!("$.branches[{i}]");
            let a = b
                .get("a")
                .and_then(Value::as_u64)
                .filter(|&a| a >= 1 && a <= u32::MAX as u64)
                .ok_or_else(|| Error::input(format!("{path}.a"), "expected an integer ≥ 1"))?;
            let bexp = b.get("b").and_then(Value::as_i64).ok_or_else(|| Error::input(format!("{path}.b"), "expected an integer"))?;
            let phase = match b.get("phase") {
                None => ExactComplex::from_i64(1),
                Some(p) => parse_phase(p, &format!("{path}.phase"))?,
            };
            let weight = match b.get("weight") {
                None => TrigWeight::constant(1)?,
                Some(w) => parse_weight(w, &format!("{path}.weight"))?,
            };
            branches.push(
                MonomialBranch::new(a as u32, bexp, phase, weight).map_err(|e| Error::input(&path, e.to_string()))?,
            );
        }
        Self::new(branches).map_err(|e| Error::input("$.branches", e.to_string()))
    }
}

fn parse_scalar(v: &Value, path: &str) -> Result<ExactComplex> {
    match v {
        Value::Number(_) => {
            let x = v.as_f64().ok_or_else(|| Error::input(path, "expected a number"))?;
            ExactComplex::from_c64(C64::new(x, 0.0)).ok_or_else(|| Error::input(path, "non-finite number"))
        }
        Value::Array(a) if a.len() == 4 => parse_exact_scalar(v, path),
        _ => {
            let c = parse_float_scalar(v, path)?;
            ExactComplex::from_c64(c).ok_or_else(|| Error::input(path, "non-finite number"))
        }
    }
}

fn parse_phase(v: &Value, path: &str) -> Result<ExactComplex> {
    let p = parse_scalar(v, path)?;
    let one = ExactComplex::from_i64(1).re;
    if p.norm_sqr() == one {
        return Ok(p);
    }
    // decimal input such as [0.6, 0.8] is not exactly unimodular in binary
    ExactComplex::rationalize(p.to_c64(), 1_000_000, 1e-12)
        .filter(|r| r.norm_sqr() == one)
        .ok_or_else(|| Error::input(path, "phase must lie on the unit circle"))
}

fn parse_weight(v: &Value, path: &str) -> Result<TrigWeight> {
    let coeffs = match v {
        Value::Number(_) => vec![parse_scalar(v, path)?],
        Value::Object(o) => {
            let cs = o
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::input(format!("{path}.coeffs"), "expected an array"))?;
            cs.iter().enumerate().map(|(i, c)| parse_scalar(c, &format!("{path}.coeffs[{i}]"))).collect::<Result<_>>()?
        }
        _ => return Err(Error::input(path, "expected a number or {\"coeffs\": [...]}")),
    };
    TrigWeight::new(coeffs).map_err(|e| Error::input(path, e.to_string()))
}

/// Gram matrix of the monomials `z^j w^k`, `j ≤ n`, `k ≤ m`, indexed
/// row-major (`j·(m+1) + k`). Stored exactly as `G/2π`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentTruncation {
    pub maxdeg: (usize, usize),
    pub monomials: Vec<(usize, usize)>,
    pub scaled: Mat<ExactComplex>,
    pub exact: bool,
}

impl MomentTruncation {
    pub fn index(&self, j: usize, k: usize) -> usize {
        j * (self.maxdeg.1 + 1) + k
    }

    /// `G[α][β] = ⟨x^α, x^β⟩`.
    pub fn float(&self) -> DMatrix<C64> {
        let n = self.monomials.len();
        DMatrix::from_fn(n, n, |i, j| self.scaled[(i, j)].to_c64() * TAU)
    }

    pub fn is_hermitian(&self) -> bool {
        let n = self.monomials.len();
        (0..n).all(|i| (i..n).all(|j| self.scaled[(i, j)] == Scalar::conj(&self.scaled[(j, i)])))
    }

    pub fn to_json(&self) -> Value {
        let n = self.monomials.len();
        let rows: Vec<Value> = (0..n)
            .map(|i| Value::Array((0..n).map(|j| exact_scalar_value(&self.scaled[(i, j)])).collect()))
            .collect();
        json!({
            "maxdeg": [self.maxdeg.0, self.maxdeg.1],
            "monomials": self.monomials,
            "scale": "2π",
            "gram_over_2pi": rows,
        })
    }
}

impl Serialize for MomentTruncation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

/// Exact Gram matrix: each entry is a sum over branches of one weight
/// Fourier coefficient times a power of the phase.
pub fn gram(mu: &TorusMeasure, maxdeg: (usize, usize)) -> MomentTruncation {
    let (n, m) = maxdeg;
    let monomials: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..=m).map(move |k| (j, k))).collect();
    let rows = map_indexed(monomials.len(), |i| {
        monomials.iter().map(|&b| mu.moment_over_2pi(monomials[i], b)).collect::<Vec<_>>()
    });
    let scaled = Mat::from_fn(monomials.len(), monomials.len(), |i, j| rows[i][j].clone());
    MomentTruncation { maxdeg, monomials, scaled, exact: true }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn weights() {
        assert!(TrigWeight::constant(-1).is_err());
        // 1 + cos θ = 1 + (e^{iθ} + e^{−iθ})/2 ≥ 0 with a double zero at π
        let half = ExactComplex::from_fractions(1, 2, 0, 1);
        assert!(TrigWeight::new(vec![ExactComplex::from_i64(1), half.clone()]).is_ok());
        // 1 + 2cos θ changes sign
        assert!(TrigWeight::new(vec![ExactComplex::from_i64(1), ExactComplex::from_i64(1)]).is_err());
        // −1 + cos θ/2 < 0
        assert!(TrigWeight::new(vec![ExactComplex::from_i64(-1), ExactComplex::from_fractions(1, 4, 0, 1)]).is_err());
        let w = TrigWeight::new(vec![ExactComplex::from_i64(1), half]).unwrap();
        assert!((w.eval(0.0) - 2.0).abs() < 1e-15);
        assert!(w.eval(std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn two_branch_gram() {
        let g = gram(&fixtures::measure_two_branch(), (2, 2));
        assert!(g.is_hermitian());
        let f = g.float();
        assert!((f[(0, 0)].re - 2.0 * TAU).abs() < 1e-12);
        assert!(f[(g.index(1, 0), g.index(0, 1))].norm() == 0.0);
        // ⟨z^j w^k, z^{j'} w^{k'}⟩ = 2π(1 + (−1)^{k+k'}) when j+k = j'+k'
        for &(j, k) in &g.monomials {
            for &(jp, kp) in &g.monomials {
                let expect = if j + k == jp + kp { TAU * (1.0 + (-1f64).powi((k + kp) as i32)) } else { 0.0 };
                assert!((f[(g.index(j, k), g.index(jp, kp))].re - expect).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn neil_gram() {
        let g = gram(&fixtures::measure_neil(), (3, 3));
        let f = g.float();
        for &(j, k) in &g.monomials {
            for &(jp, kp) in &g.monomials {
                let expect = if 2 * j + 3 * k == 2 * jp + 3 * kp { TAU } else { 0.0 };
                assert_eq!(f[(g.index(j, k), g.index(jp, kp))], C64::new(expect, 0.0));
            }
        }
    }

    #[test]
    fn weighted_branch_moments() {
        // ω = 1 + cos θ on the diagonal: ⟨z, 1⟩ = ∫ e^{iθ} ω dθ = 2π·c_{−1} = π
        let half = ExactComplex::from_fractions(1, 2, 0, 1);
        let w = TrigWeight::new(vec![ExactComplex::from_i64(1), half]).unwrap();
        let mu = TorusMeasure::new(vec![MonomialBranch::new(1, 1, ExactComplex::from_i64(1), w).unwrap()]).unwrap();
        let g = gram(&mu, (1, 0)).float();
        assert!((g[(1, 0)].re - std::f64::consts::PI).abs() < 1e-12);
        assert!((mu.total_mass() - TAU).abs() < 1e-12);
    }

    #[test]
    fn json_round_trip_and_errors() {
        let mu = fixtures::measure_two_branch();
        assert_eq!(TorusMeasure::from_json(&mu.to_json()).unwrap(), mu);
        let v = json!({"branches": [{"a": 2, "b": 3, "phase": [1.0, 0.0], "weight": 1}]});
        assert_eq!(TorusMeasure::from_json(&v).unwrap(), fixtures::measure_neil());
        let v = json!({"branches": [{"a": 1, "b": 1, "phase": [0.6, 0.8]}]});
        assert!(TorusMeasure::from_json(&v).is_ok());
        let v = json!({"branches": [{"a": 1, "b": 1, "phase": [0.5, 0.5]}]});
        assert!(matches!(TorusMeasure::from_json(&v), Err(Error::Input { path, .. }) if path == "$.branches[0].phase"));
        let v = json!({"branches": [{"a": 0, "b": 1}]});
        assert!(matches!(TorusMeasure::from_json(&v), Err(Error::Input { path, .. }) if path == "$.branches[0].a"));
        assert!(TorusMeasure::from_json(&json!({"branches": []})).is_err());
    }
}
