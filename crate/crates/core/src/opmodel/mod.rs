//! Matrix rational inner functions `Φ = N/d`, their model pairs
//! `(M_z, M_Φ)` on `H² ⊗ C^k`, and checks of the identities such pairs satisfy.

mod charpoly;
mod truncate;

pub use charpoly::{
    char_numerator, cokernel_dims, divided_difference_matrix, verify_q_identity, verify_q_identity_sampled, CharPoly,
    CokernelDims, QMatrix,
};
pub use truncate::{
    decomposition_check, decomposition_stabilized, range_orthogonality, symmetry_identity_check, taylor_truncate,
    verify_annihilation, DecompositionReport, PairModel, PairSource, StabilizedDecomposition, TruncatedPair,
};

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;
use serde_json::{json, Value};

use crate::bipoly::json::{exact_to_value, poly_from_value};
use crate::bipoly::{roots, BiPoly, ExactPoly, UniPoly};
use crate::error::{Error, Result};
use crate::linalg::{eigenvalues, min_singular_value, spectral_norm, Mat};
use crate::parallel::{map_indexed, rng_for};
use crate::scalar::{ExactComplex, Scalar, C64};

type ZPoly = UniPoly<ExactComplex>;

/// `Φ(z) = N(z)/d(z)`, a k×k matrix of rational functions with a common
/// denominator that has no zeros in the closed unit disk.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixRationalInner {
    num: Vec<Vec<ZPoly>>,
    den: ZPoly,
    num_f: Vec<Vec<UniPoly<C64>>>,
    den_f: UniPoly<C64>,
}

impl MatrixRationalInner {
    pub fn new(num: Vec<Vec<ZPoly>>, den: ZPoly) -> Result<Self> {
        let k = num.len();
        if k == 0 {
            return Err(Error::InvalidMatrixFunction("empty matrix".into()));
        }
        if let Some(i) = num.iter().position(|r| r.len() != k) {
            return Err(Error::InvalidMatrixFunction(format!("row {i} has {} entries, expected {k}", num[i].len())));
        }
        if den.is_zero() {
            return Err(Error::InvalidMatrixFunction("zero denominator".into()));
        }
        if Scalar::is_zero(&den.coeff(0)) {
            return Err(Error::InvalidMatrixFunction("denominator vanishes at 0".into()));
        }
        let den_f = den.to_float();
        if !den.is_constant() {
            let r = roots(&den_f, 0.0)?;
            if let Some(z) = r.roots.iter().find(|z| z.norm() <= 1.0 + 1e-12) {
                return Err(Error::InvalidMatrixFunction(format!(
                    "denominator has a zero at {:.6}{:+.6}i in the closed disk",
                    z.re, z.im
                )));
            }
        }
        let num_f = num.iter().map(|r| r.iter().map(|p| p.to_float()).collect()).collect();
        Ok(Self { num, den, num_f, den_f })
    }

    /// Polynomial `Φ` (denominator 1).
    pub fn polynomial(num: Vec<Vec<ZPoly>>) -> Result<Self> {
        Self::new(num, ZPoly::one())
    }

    /// Entries and denominator written as integer polynomials in z, e.g.
    /// `parse(&[&["0", "z^2"], &["z", "0"]], "1")`.
    pub fn parse(rows: &[&[&str]], den: &str) -> Result<Self> {
        let to_z = |s: &str| -> Result<ZPoly> { z_poly(&crate::bipoly::parse_int_poly(s)?, s) };
        let num = rows.iter().map(|r| r.iter().map(|s| to_z(s)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
        Self::new(num, to_z(den)?)
    }

    /// `diag(p_1, …, p_k)` over a common denominator.
    pub fn diagonal(entries: Vec<ZPoly>, den: ZPoly) -> Result<Self> {
        let k = entries.len();
        let num = entries
            .into_iter()
            .enumerate()
            .map(|(i, p)| (0..k).map(|j| if i == j { p.clone() } else { ZPoly::zero() }).collect())
            .collect();
        Self::new(num, den)
    }

    pub fn k(&self) -> usize {
        self.num.len()
    }

    pub fn num(&self) -> &[Vec<ZPoly>] {
        &self.num
    }

    pub fn den(&self) -> &ZPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// Largest degree among the numerator entries.
    pub fn num_degree(&self) -> usize {
        self.num.iter().flatten().map(|p| p.deg0()).max().unwrap_or(0)
    }

    /// Smallest modulus of a denominator zero (`∞` for polynomial `Φ`).
    pub fn pole_radius(&self) -> f64 {
        if self.is_polynomial() {
            return f64::INFINITY;
        }
        roots(&self.den_f, 0.0)
            .map(|r| r.roots.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min))
            .unwrap_or(f64::INFINITY)
    }

    pub fn eval(&self, z: C64) -> DMatrix<C64> {
        let d = self.den_f.eval(&z);
        let k = self.k();
        DMatrix::from_fn(k, k, |i, j| self.num_f[i][j].eval(&z) / d)
    }

    /// First `n` Taylor coefficients at 0, each a k×k matrix.
    pub fn taylor(&self, n: usize) -> Vec<Mat<ExactComplex>> {
        let inv = self.den.series_inverse(n);
        let k = self.k();
        (0..n)
            .map(|l| {
                Mat::from_fn(k, k, |i, j| {
                    let p = &self.num[i][j];
                    (0..=l.min(p.deg0())).fold(ExactComplex::zero(), |acc, t| &acc + &(&p.coeff(t) * &inv[l - t]))
                })
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let as_bi = |p: &ZPoly| exact_to_value(&BiPoly::from_z_poly(p));
        json!({
            "k": self.k(),
            "den": as_bi(&self.den),
            "num": self.num.iter().map(|r| r.iter().map(as_bi).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let obj = v.as_object().ok_or_else(|| Error::input("$", "expected an object"))?;
        let k = obj
            .get("k")
            .ok_or_else(|| Error::input("$.k", "missing field"))?
            .as_u64()
            .ok_or_else(|| Error::input("$.k", "expected a positive integer"))? as usize;
        let read = |v: &Value, path: &str| -> Result<ZPoly> {
            let q = poly_from_value(v, path)?.to_exact().map_err(|_| Error::input(path, "non-finite coefficient"))?;
            if q.deg_w() > 0 {
                return Err(Error::input(path, "entries must be polynomials in z only"));
            }
            Ok(q.w_coeffs().into_iter().next().unwrap_or_else(ZPoly::zero))
        };
        let den = read(obj.get("den").ok_or_else(|| Error::input("$.den", "missing field"))?, "$.den")?;
        let rows = obj
            .get("num")
            .ok_or_else(|| Error::input("$.num", "missing field"))?
            .as_array()
            .ok_or_else(|| Error::input("$.num", "expected a k×k array"))?;
        if rows.len() != k {
            return Err(Error::input("$.num", format!("expected {k} rows")));
        }
        let mut num = Vec::with_capacity(k);
        for (i, r) in rows.iter().enumerate() {
            let path = format!("$.num[{i}]");
            let r = r.as_array().filter(|r| r.len() == k).ok_or_else(|| Error::input(&path, format!("expected {k} entries")))?;
            num.push(r.iter().enumerate().map(|(j, e)| read(e, &format!("{path}[{j}]"))).collect::<Result<Vec<_>>>()?);
        }
        Self::new(num, den).map_err(|e| Error::input("$", e.to_string()))
    }
}

fn z_poly(q: &ExactPoly, src: &str) -> Result<ZPoly> {
    if q.deg_w() > 0 {
        return Err(Error::InvalidMatrixFunction(format!("entry {src} depends on w")));
    }
    Ok(q.w_coeffs().into_iter().next().unwrap_or_else(ZPoly::zero))
}

/// Outcome of checking one identity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IdentityReport {
    pub identity_name: String,
    pub max_residual: f64,
    pub samples: usize,
    /// All arithmetic was exact; `passed` then means the residual is exactly 0.
    pub exact: bool,
    pub tol: f64,
    pub passed: bool,
}

impl IdentityReport {
    pub(crate) fn exact(name: impl Into<String>, residual: f64, is_zero: bool, samples: usize) -> Self {
        Self { identity_name: name.into(), max_residual: residual, samples, exact: true, tol: 0.0, passed: is_zero && samples > 0 }
    }

    pub(crate) fn sampled(name: impl Into<String>, residual: f64, samples: usize, tol: f64) -> Self {
        Self {
            identity_name: name.into(),
            max_residual: residual,
            samples,
            exact: false,
            tol,
            passed: samples > 0 && residual <= tol,
        }
    }
}

pub(crate) fn torus_samples(n: usize) -> Vec<C64> {
    (0..n).map(|s| C64::from_polar(1.0, std::f64::consts::TAU * (s as f64 + 0.25) / n as f64)).collect()
}

/// `max ‖Φ(z)*Φ(z) − I‖` over `n_samples` points of the circle.
pub fn check_inner(phi: &MatrixRationalInner, n_samples: usize, tol: f64) -> IdentityReport {
    let zs = torus_samples(n_samples.max(1));
    let k = phi.k();
    let res = map_indexed(zs.len(), |s| {
        let m = phi.eval(zs[s]);
        spectral_norm(&(m.adjoint() * &m - DMatrix::identity(k, k)))
    });
    IdentityReport::sampled("Φ*Φ = I on T", res.into_iter().fold(0.0, f64::max), zs.len(), tol)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PurityReport {
    pub pure: bool,
    /// Smallest value of `σ_min([Φ(z_s) − λI]_s)/√S` over the candidate `λ`.
    pub min_residual: f64,
    pub samples: usize,
    pub warning: Option<String>,
}

/// Purity: no `λ` and unit `v` with `Φ(z)v = λv` for every z. Candidates
/// `λ` are the eigenvalues at one point; each is tested by the smallest
/// singular value of the stacked `Φ(z_s) − λI` over at least 16 samples.
pub fn check_pure(phi: &MatrixRationalInner, n_samples: usize, tol: f64) -> PurityReport {
    let zs = torus_samples(n_samples.max(16));
    let k = phi.k();
    let lambdas = eigenvalues(&phi.eval(C64::from_polar(1.0, 0.7317)));
    let values: Vec<DMatrix<C64>> = map_indexed(zs.len(), |s| phi.eval(zs[s]));
    let res = map_indexed(lambdas.len(), |i| {
        let mut stacked = DMatrix::<C64>::zeros(k * values.len(), k);
        for (s, m) in values.iter().enumerate() {
            let block = m - DMatrix::identity(k, k) * lambdas[i];
            stacked.view_mut((s * k, 0), (k, k)).copy_from(&block);
        }
        min_singular_value(&stacked) / (values.len() as f64).sqrt()
    });
    let min_residual = res.into_iter().fold(f64::INFINITY, f64::min);
    let pure = min_residual > tol;
    let warning = (pure && min_residual <= 100.0 * tol)
        .then(|| format!("near-constant eigenpair: residual {min_residual:.3e} within 100·tol"));
    PurityReport { pure, min_residual, samples: zs.len(), warning }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjugacyReport {
    pub identity: IdentityReport,
    pub same_minimal_polynomial: bool,
    pub q_min_phi: ExactPoly,
    pub q_min_psi: ExactPoly,
}

/// Residual of `Φ(z)F(z) = F(z)Ψ(z)` on the circle, together with the
/// necessary condition that `Φ` and `Ψ` share a minimal polynomial.
pub fn conjugacy_check(
    phi: &MatrixRationalInner,
    psi: &MatrixRationalInner,
    f: &MatrixRationalInner,
    n_samples: usize,
    tol: f64,
) -> Result<ConjugacyReport> {
    if phi.k() != psi.k() || phi.k() != f.k() {
        return Err(Error::InvalidMatrixFunction("matrix sizes differ".into()));
    }
    let zs = torus_samples(n_samples.max(1));
    let res = map_indexed(zs.len(), |s| {
        let (a, b, c) = (phi.eval(zs[s]), psi.eval(zs[s]), f.eval(zs[s]));
        spectral_norm(&(&a * &c - &c * &b))
    });
    let identity = IdentityReport::sampled("Φ F = F Ψ on T", res.into_iter().fold(0.0, f64::max), zs.len(), tol);
    let q_min_phi = char_numerator(phi)?.q_min;
    let q_min_psi = char_numerator(psi)?.q_min;
    Ok(ConjugacyReport { identity, same_minimal_polynomial: q_min_phi.eq_up_to_scalar(&q_min_psi), q_min_phi, q_min_psi })
}

fn haar_unitary(k: usize, seed: u64, index: u64) -> DMatrix<C64> {
    let mut rng = rng_for(seed, index);
    let g = DMatrix::<C64>::from_fn(k, k, |_, _| {
        C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
    });
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..k {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..k {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// `Φ = U·diag(z^{a_1}, …, z^{a_k})·W` with seeded Haar-distributed `U, W`,
/// rounded to exact dyadic entries (so `Φ` is unitary on T to rounding).
pub fn random_inner(k: usize, exponents: &[usize], seed: u64) -> Result<MatrixRationalInner> {
    if k == 0 || exponents.len() != k {
        return Err(Error::InvalidMatrixFunction(format!("expected {k} exponents, got {}", exponents.len())));
    }
    let exact = |m: DMatrix<C64>| -> Mat<ExactComplex> {
        Mat::from_fn(k, k, |i, j| ExactComplex::from_c64(m[(i, j)]).expect("finite entries"))
    };
    let u = exact(haar_unitary(k, seed, 0));
    let w = exact(haar_unitary(k, seed, 1));
    let num = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    exponents.iter().enumerate().fold(ZPoly::zero(), |acc, (l, &a)| {
                        &acc + &ZPoly::monomial(&u[(i, l)] * &w[(l, j)], a)
                    })
                })
                .collect()
        })
        .collect();
    MatrixRationalInner::polynomial(num)
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn example() -> MatrixRationalInner {
        MatrixRationalInner::parse(&[&["0", "z^2"], &["z", "0"]], "1").unwrap()
    }

    #[test]
    fn validation() {
        assert!(MatrixRationalInner::parse(&[&["1"]], "z - 1").is_err());
        assert!(MatrixRationalInner::parse(&[&["1"]], "2z - 1").is_err());
        assert!(MatrixRationalInner::parse(&[&["1", "0"]], "1").is_err());
        assert!(MatrixRationalInner::parse(&[&["1 - 2z"]], "2 - z").is_ok());
    }

    #[test]
    fn json_round_trip() {
        let phi = MatrixRationalInner::parse(&[&["1 - 2z", "0"], &["0", "2z - z^2"]], "2 - z").unwrap();
        assert_eq!(MatrixRationalInner::from_json(&phi.to_json()).unwrap(), phi);
        let err = MatrixRationalInner::from_json(&json!({"k": 1, "den": {"coeffs": [[[1, 0]]]}, "num": [[{"coeffs": [[[0, 0], [1, 0]]]}]]}));
        assert!(matches!(err, Err(Error::Input { path, .. }) if path == "$.num[0][0]"));
    }

    #[test]
    fn inner_examples() {
        assert!(check_inner(&example(), 64, 1e-12).max_residual < 1e-14);
        assert!(check_inner(&MatrixRationalInner::parse(&[&["z", "0"], &["0", "z^3"]], "1").unwrap(), 64, 1e-12).passed);
        let half = MatrixRationalInner::parse(&[&["z"]], "2").unwrap();
        let r = check_inner(&half, 64, 1e-12);
        assert!(!r.passed);
        assert!((r.max_residual - 0.75).abs() < 1e-14);
        assert!(check_inner(&MatrixRationalInner::parse(&[&["1 - 2z"]], "2 - z").unwrap(), 64, 1e-12).passed);
    }

    #[test]
    fn purity_examples() {
        assert!(check_pure(&example(), 16, 1e-8).pure);
        assert!(!check_pure(&MatrixRationalInner::parse(&[&["1", "0"], &["0", "z"]], "1").unwrap(), 16, 1e-8).pure);
        assert!(!check_pure(&random_inner(2, &[0, 0], 3).unwrap(), 16, 1e-8).pure);
        assert!(check_pure(&random_inner(2, &[1, 2], 5).unwrap(), 16, 1e-8).pure);
    }

    #[test]
    fn random_inner_is_inner() {
        let phi = random_inner(2, &[1, 2], 7).unwrap();
        assert!(check_inner(&phi, 128, 1e-12).passed);
        let scalar = random_inner(1, &[1], 0).unwrap();
        let c = scalar.num()[0][0].coeff(1).to_c64();
        assert!((c.norm() - 1.0).abs() < 1e-15);
        assert_eq!(scalar.num()[0][0].degree(), Some(1));
        assert_eq!(random_inner(2, &[1, 2], 7).unwrap(), phi);
    }

    #[test]
    fn taylor_of_mobius() {
        // (1 − 2z)/(2 − z) = 1/2 − (3/4)z − (3/8)z² − …
        let phi = MatrixRationalInner::parse(&[&["1 - 2z"]], "2 - z").unwrap();
        let t = phi.taylor(4);
        let expect = [(1, 2), (-3, 4), (-3, 8), (-3, 16)];
        for (l, (n, d)) in expect.iter().enumerate() {
            assert_eq!(t[l][(0, 0)], ExactComplex::from_fractions(*n, *d, 0, 1));
        }
    }

    #[test]
    fn conjugacy_examples() {
        let psi = example();
        let id = MatrixRationalInner::parse(&[&["1", "0"], &["0", "1"]], "1").unwrap();
        let r = conjugacy_check(&psi, &psi, &id, 32, 1e-12).unwrap();
        assert!(r.identity.passed && r.same_minimal_polynomial);

        // Φ = UΨU* for a constant unitary U
        let u = random_inner(2, &[0, 0], 11).unwrap();
        let uc = |i: usize, j: usize| u.num()[i][j].coeff(0);
        let n: Vec<Vec<ZPoly>> = (0..2)
            .map(|i| {
                (0..2)
                    .map(|j| {
                        let mut acc = ZPoly::zero();
                        for a in 0..2 {
                            for b in 0..2 {
                                let c = &uc(i, a) * &Scalar::conj(&uc(j, b));
                                acc = &acc + &psi.num()[a][b].scale(&c);
                            }
                        }
                        acc
                    })
                    .collect()
            })
            .collect();
        let phi = MatrixRationalInner::polynomial(n).unwrap();
        let r = conjugacy_check(&phi, &psi, &u, 32, 1e-12).unwrap();
        assert!(r.identity.passed, "{}", r.identity.max_residual);

        let diag = MatrixRationalInner::parse(&[&["z", "0"], &["0", "z"]], "1").unwrap();
        let r = conjugacy_check(&diag, &psi, &id, 32, 1e-12).unwrap();
        assert!(!r.same_minimal_polynomial);
    }
}
