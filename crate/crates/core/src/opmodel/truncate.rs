use nalgebra::DMatrix;
use serde::Serialize;

use crate::bipoly::{gcd_bivariate, ExactPoly};
use crate::error::{Error, Result};
use crate::linalg::{column_space, spectral_norm, vec_norm, Mat};
use crate::parallel::{map_indexed, rng_for};
use crate::scalar::{ExactComplex, Scalar, C64};

use super::{IdentityReport, MatrixRationalInner};

/// How a truncated pair was produced; this fixes which basis vectors stay
/// away from the truncation edge under a given polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PairModel {
    /// `(M_z, M_Φ)` on `H² ⊗ C^k`, basis `z^d ⊗ e_i` with label `d`. `band`
    /// is the degree of `Φ`, or for rational `Φ` the number of Taylor
    /// coefficients above `1e-15` relative decay.
    Hardy { k: usize, band: usize, polynomial: bool },
    /// Compressions of `(M_z, M_w)` to the monomials of bidegree at most
    /// `maxdeg` in a Gram geometry.
    Grid { maxdeg: (usize, usize) },
}

/// Finite compressions `(V1, V2)` of a pair of commuting isometries at
/// cutoff `M`. Basis vectors carry labels in `0..M`; applying `z^a w^b`
/// raises a label by at most [`TruncatedPair::raise`].
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedPair<S> {
    pub cutoff: usize,
    pub v1: Mat<S>,
    pub v2: Mat<S>,
    pub labels: Vec<usize>,
    pub model: PairModel,
}

impl<S: Scalar> TruncatedPair<S> {
    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn raise(&self, (a, b): (usize, usize)) -> usize {
        match self.model {
            PairModel::Hardy { band, .. } => a + b * band,
            PairModel::Grid { .. } => a.max(b),
        }
    }

    /// Basis indices whose image under a polynomial raising labels by
    /// `raise` stays inside the truncation.
    pub fn interior(&self, raise: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&i| self.labels[i] + raise < self.cutoff).collect()
    }

    pub fn to_float(&self) -> TruncatedPair<C64> {
        TruncatedPair {
            cutoff: self.cutoff,
            v1: self.v1.to_c64(),
            v2: self.v2.to_c64(),
            labels: self.labels.clone(),
            model: self.model,
        }
    }

    /// `q(V1, V2)` as a matrix.
    pub fn eval_poly(&self, q: &ExactPoly) -> Mat<S> {
        let n = self.dim();
        let (_, m) = q.bidegree();
        let mut w_pow = vec![Mat::identity(n)];
        for _ in 0..m {
            let next = w_pow.last().unwrap().mul(&self.v2);
            w_pow.push(next);
        }
        let mut acc = Mat::zeros(n, n);
        for row in q.grid().iter().rev() {
            acc = self.v1.mul(&acc);
            for (k, c) in row.iter().enumerate() {
                if !Scalar::is_zero(c) {
                    acc = acc.add(&w_pow[k].scale(&S::from_exact(c)));
                }
            }
        }
        acc
    }

    fn exact_arithmetic(&self) -> bool {
        S::EXACT && matches!(self.model, PairModel::Hardy { .. })
    }
}

/// `(M_z, M_Φ)` truncated to polynomials of degree below `cutoff`: `V1` is
/// the block shift and `V2` the block lower-triangular Toeplitz matrix of
/// the Taylor coefficients of `Φ` (exact, including rational `Φ`).
pub fn taylor_truncate(phi: &MatrixRationalInner, cutoff: usize) -> Result<TruncatedPair<ExactComplex>> {
    if cutoff == 0 {
        return Err(Error::CutoffTooSmall { cutoff, buffer: 0 });
    }
    let k = phi.k();
    let n = k * cutoff;
    let taylor = phi.taylor(cutoff);
    let v1 = Mat::from_fn(n, n, |r, c| {
        if r >= k && r - k == c {
            ExactComplex::from_i64(1)
        } else {
            ExactComplex::zero()
        }
    });
    let v2 = Mat::from_fn(n, n, |r, c| {
        let (dr, dc) = (r / k, c / k);
        if dr >= dc {
            taylor[dr - dc][(r % k, c % k)].clone()
        } else {
            ExactComplex::zero()
        }
    });
    let band = if phi.is_polynomial() {
        phi.num_degree()
    } else {
        let r = phi.pole_radius();
        phi.num_degree() + (15.0 * std::f64::consts::LN_10 / r.ln()).ceil() as usize
    };
    Ok(TruncatedPair {
        cutoff,
        v1,
        v2,
        labels: (0..n).map(|i| i / k).collect(),
        model: PairModel::Hardy { k, band, polynomial: phi.is_polynomial() },
    })
}

fn column_residual<S: Scalar>(m: &Mat<S>, cols: &[usize], rows: Option<&[usize]>) -> (f64, bool) {
    let mut worst = 0.0f64;
    let mut zero = true;
    for &c in cols {
        let v: Vec<S> = match rows {
            None => m.column(c),
            Some(rs) => rs.iter().map(|&r| m[(r, c)].clone()).collect(),
        };
        zero &= v.iter().all(Scalar::is_zero);
        worst = worst.max(vec_norm(&v));
    }
    (worst, zero)
}

/// `max ‖q(V)e‖` over basis vectors `e` with label below `M − buffer`.
///
/// Truncations of analytic Toeplitz operators multiply exactly, so in the
/// Hardy model `q(V1, V2)` is the compression of `q(M_z, M_Φ)`; the buffer
/// only matters for models where that fails.
pub fn verify_annihilation<S: Scalar>(
    q: &ExactPoly,
    pair: &TruncatedPair<S>,
    buffer: usize,
    tol: f64,
) -> Result<IdentityReport> {
    if pair.cutoff <= buffer {
        return Err(Error::CutoffTooSmall { cutoff: pair.cutoff, buffer });
    }
    let cols: Vec<usize> = (0..pair.dim()).filter(|&i| pair.labels[i] + buffer < pair.cutoff).collect();
    let (worst, zero) = column_residual(&pair.eval_poly(q), &cols, None);
    Ok(if pair.exact_arithmetic() {
        IdentityReport::exact("q(V)=0", worst, zero, cols.len())
    } else {
        IdentityReport::sampled("q(V)=0", worst, cols.len(), tol)
    })
}

/// Residual of `p1(V)* V1^n V2^m = μ·p1(V)` (`reverse(p1) = μ·p1`,
/// `(n, m) = bidegree(p1)`) on basis vectors far enough from the cutoff.
pub fn symmetry_identity_check<S: Scalar>(p1: &ExactPoly, pair: &TruncatedPair<S>, tol: f64) -> Result<IdentityReport> {
    if p1.is_zero() || p1.self_inversive_constant().is_none() {
        return Err(Error::NotSelfInversive);
    }
    let (n, m) = p1.bidegree();
    let mono = ExactPoly::monomial(ExactComplex::from_i64(1), n, m);
    let lhs = pair.eval_poly(p1).adjoint().mul(&pair.eval_poly(&mono));
    let diff = lhs.sub(&pair.eval_poly(&p1.reversed()));
    let raise = pair.raise((n, m));
    let cols = pair.interior(raise);
    // In the Hardy model the adjoint of a product of compressions is exact;
    // otherwise only rows where p1(V) is itself exact can be trusted.
    let rows = match pair.model {
        PairModel::Hardy { .. } => None,
        PairModel::Grid { .. } => Some(pair.interior(raise)),
    };
    let (worst, zero) = column_residual(&diff, &cols, rows.as_deref());
    let name = "p1(V)* V1^n V2^m = μ p1(V)";
    let exact = S::EXACT && matches!(pair.model, PairModel::Hardy { polynomial: true, .. });
    Ok(if exact {
        IdentityReport::exact(name, worst, zero, cols.len())
    } else {
        IdentityReport::sampled(name, worst, cols.len(), tol)
    })
}

fn inner_s<S: Scalar>(x: &[S], y: &[S]) -> S {
    x.iter().zip(y).fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.conj())
}

/// `max |⟨p1(V)f, p2(V)g⟩| / (‖p1(V)f‖‖p2(V)g‖ + ε)` over `trials` random
/// interior vectors `f, g`.
pub fn range_orthogonality<S: Scalar>(
    p1: &ExactPoly,
    p2: &ExactPoly,
    pair: &TruncatedPair<S>,
    trials: usize,
    seed: u64,
    tol: f64,
) -> IdentityReport {
    let (a, b) = (pair.eval_poly(p1), pair.eval_poly(p2));
    let int1 = pair.interior(pair.raise(p1.bidegree()));
    let int2 = pair.interior(pair.raise(p2.bidegree()));
    let n = pair.dim();
    let random_vec = |idx: &[usize], rng: &mut rand_chacha::ChaCha8Rng| {
        let mut v = vec![S::zero(); n];
        for &i in idx {
            v[i] = S::random(rng);
        }
        v
    };
    let samples = if int1.is_empty() || int2.is_empty() { 0 } else { trials };
    let ratios = map_indexed(samples, |t| {
        let mut rng = rng_for(seed, t as u64);
        let f = random_vec(&int1, &mut rng);
        let g = random_vec(&int2, &mut rng);
        let (af, bg) = (a.mul_vec(&f), b.mul_vec(&g));
        inner_s(&af, &bg).magnitude() / (vec_norm(&af) * vec_norm(&bg) + 1e-300)
    });
    IdentityReport {
        exact: pair.exact_arithmetic(),
        ..IdentityReport::sampled("ran p1(V) ⊥ ran p2(V)", ratios.into_iter().fold(0.0, f64::max), samples, tol)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecompositionReport {
    pub cutoff: usize,
    pub interior_dim: usize,
    /// Rank of each `R_j = (q/q_j)(V)·(interior)`.
    pub range_dims: Vec<usize>,
    /// Interior dimension minus the rank of the combined ranges projected
    /// to the interior.
    pub codim_estimate: usize,
    /// `max_{i<j} ‖Q_i* Q_j‖` for orthonormal bases `Q_j` of `R_j`.
    pub orthogonality_residual: f64,
}

const RANK_TOL: f64 = 1e-9;

/// Orthogonality of the pieces `ran (q/q_j)(V)` and the codimension of their
/// sum, for pairwise coprime factors `q_j` whose product annihilates the pair.
pub fn decomposition_check<S: Scalar>(factors: &[ExactPoly], pair: &TruncatedPair<S>) -> Result<DecompositionReport> {
    if factors.is_empty() || factors.iter().any(|f| f.is_zero()) {
        return Err(Error::ZeroPolynomial("decomposition_check"));
    }
    for i in 0..factors.len() {
        for j in i + 1..factors.len() {
            let g = gcd_bivariate(&factors[i], &factors[j])?;
            if !g.is_constant() {
                return Err(Error::NonCoprime { common: g.to_string() });
            }
        }
    }
    let q = factors.iter().skip(1).fold(factors[0].clone(), |acc, f| &acc * f);
    let pair = pair.to_float();
    let cofactors: Vec<ExactPoly> = factors.iter().map(|f| q.div_exact(f).expect("factor divides product")).collect();
    let raises: Vec<usize> = cofactors.iter().map(|c| pair.raise(c.bidegree())).collect();
    let int = pair.interior(raises.iter().copied().max().unwrap_or(0));
    let n = pair.dim();

    let ranges: Vec<DMatrix<C64>> = cofactors
        .iter()
        .zip(&raises)
        .map(|(c, &r)| {
            let m = pair.eval_poly(c);
            let cols = pair.interior(r);
            DMatrix::from_fn(n, cols.len(), |i, j| m[(i, cols[j])])
        })
        .collect();
    let bases: Vec<(usize, DMatrix<C64>)> = ranges.iter().map(|r| column_space(r, RANK_TOL)).collect();
    let mut orth = 0.0f64;
    for i in 0..bases.len() {
        for j in i + 1..bases.len() {
            if bases[i].0 > 0 && bases[j].0 > 0 {
                orth = orth.max(spectral_norm(&(bases[i].1.adjoint() * &bases[j].1)));
            }
        }
    }
    let total_cols: usize = ranges.iter().map(|r| r.ncols()).sum();
    let mut projected = DMatrix::<C64>::zeros(int.len(), total_cols);
    let mut c0 = 0;
    for r in &ranges {
        for j in 0..r.ncols() {
            for (i, &row) in int.iter().enumerate() {
                projected[(i, c0 + j)] = r[(row, j)];
            }
        }
        c0 += r.ncols();
    }
    let rank = column_space(&projected, RANK_TOL).0;
    Ok(DecompositionReport {
        cutoff: pair.cutoff,
        interior_dim: int.len(),
        range_dims: bases.iter().map(|b| b.0).collect(),
        codim_estimate: int.len() - rank,
        orthogonality_residual: orth,
    })
}

/// Something that can produce truncated pairs at any cutoff.
pub trait PairSource {
    fn truncated_pair(&self, cutoff: usize) -> Result<TruncatedPair<C64>>;
}

impl PairSource for MatrixRationalInner {
    fn truncated_pair(&self, cutoff: usize) -> Result<TruncatedPair<C64>> {
        Ok(taylor_truncate(self, cutoff)?.to_float())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StabilizedDecomposition {
    pub reports: Vec<DecompositionReport>,
    pub codim_estimates: Vec<usize>,
    pub stabilized: bool,
    /// Stabilized and every orthogonality residual within `tol`.
    pub verified: bool,
}

/// [`decomposition_check`] at cutoffs `M` and `2M`.
pub fn decomposition_stabilized(
    factors: &[ExactPoly],
    source: &dyn PairSource,
    cutoff: usize,
    tol: f64,
) -> Result<StabilizedDecomposition> {
    let reports = [cutoff, 2 * cutoff]
        .iter()
        .map(|&c| decomposition_check(factors, &source.truncated_pair(c)?))
        .collect::<Result<Vec<_>>>()?;
    let codim_estimates: Vec<usize> = reports.iter().map(|r| r.codim_estimate).collect();
    let stabilized = codim_estimates.windows(2).all(|w| w[0] == w[1]);
    let verified = stabilized && reports.iter().all(|r| r.orthogonality_residual <= tol);
    Ok(StabilizedDecomposition { reports, codim_estimates, stabilized, verified })
}
