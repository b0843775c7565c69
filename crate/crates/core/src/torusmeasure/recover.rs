use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bipoly::{BiPoly, FloatPoly};
use crate::error::{Error, Result};
use crate::scalar::C64;

use super::{gram, mult_matrices, TorusMeasure};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Recovered {
    pub q: FloatPoly,
    pub bidegree: (usize, usize),
    /// Smallest eigenvalue of the Gram matrix on that grid, i.e. `∫|q|²dμ`
    /// for the unit coefficient vector of `q`.
    pub sigma_min: f64,
    pub gram_norm: f64,
}

/// Bidegrees `(i, j) ≤ bound`, ordered by `i + j`, then `i`.
fn search_order((n, m): (usize, usize)) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = (0..=n).flat_map(|i| (0..=m).map(move |j| (i, j))).collect();
    out.sort_by_key(|&(i, j)| (i + j, i));
    out
}

/// The first bidegree (in [`search_order`]) whose monomial Gram matrix has a
/// null vector, `σ_min ≤ 1e-10·‖G‖`; that null vector is a polynomial
/// vanishing on the support of `μ`.
pub fn recover_minimal_polynomial(mu: &TorusMeasure, search: (usize, usize)) -> Result<Recovered> {
    let full = gram(mu, search);
    let g = full.float();
    for (n, m) in search_order(search) {
        let idx: Vec<usize> = (0..=n).flat_map(|j| (0..=m).map(move |k| (j, k))).map(|(j, k)| full.index(j, k)).collect();
        // H[β][α] = G[α][β], so that ∫|p|² = c*Hc
        let h = DMatrix::from_fn(idx.len(), idx.len(), |b, a| g[(idx[a], idx[b])]);
        let eig = h.symmetric_eigen();
        let (imin, lmin) = eig.eigenvalues.iter().copied().enumerate().min_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
        let lmax = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
        if lmin.abs() <= 1e-10 * lmax {
            let v = eig.eigenvectors.column(imin);
            let grid = (0..=n).map(|j| (0..=m).map(|k| v[j * (m + 1) + k]).collect()).collect();
            return Ok(Recovered {
                q: BiPoly::from_grid(grid).normalize(),
                bidegree: (n, m),
                sigma_min: lmin.abs(),
                gram_norm: lmax,
            });
        }
    }
    Err(Error::NoRelation(search.0, search.1))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BpeValue {
    pub zeta: [[f64; 2]; 2],
    pub maxdeg: (usize, usize),
    /// `sup |p(ζ)| / ‖p‖` over the truncated space; `None` when unbounded.
    pub value: Option<f64>,
    /// Largest `|n(ζ)|/‖v(ζ)‖` over unit null polynomials `n`; evaluation is
    /// well defined on `P²(μ)` only when this vanishes.
    pub null_defect: f64,
}

impl BpeValue {
    pub fn bounded(&self) -> bool {
        self.value.is_some()
    }

    /// The value with `∞` for unbounded functionals.
    pub fn norm(&self) -> f64 {
        self.value.unwrap_or(f64::INFINITY)
    }
}

/// Norm of `p ↦ p(ζ)` on polynomials of bidegree at most `maxdeg` with the
/// `L²(μ)` norm. When some polynomial vanishing on the support of `μ` does
/// not vanish at `ζ` the functional is not defined on the quotient and the
/// norm is infinite; otherwise it is `(Σ_u |u(ζ)|²)^{1/2}` over an
/// orthonormal basis.
pub fn bpe_norm(mu: &TorusMeasure, zeta: (C64, C64), maxdeg: (usize, usize)) -> Result<BpeValue> {
    if zeta.0.norm() >= 1.0 || zeta.1.norm() >= 1.0 {
        return Err(Error::ProbeOutsideBidisk);
    }
    let gm = mult_matrices(mu, maxdeg)?;
    let v = DVector::from_iterator(
        gm.monomials.len(),
        gm.monomials.iter().map(|&(j, k)| zeta.0.powu(j as u32) * zeta.1.powu(k as u32)),
    );
    let vnorm = v.norm();
    let defect = gm.null_vectors.column_iter().map(|n| n.dot(&v).norm() / vnorm).fold(0.0, f64::max);
    let value = if defect > 1e-8 {
        None
    } else {
        Some((gm.basis.transpose() * &v).norm())
    };
    Ok(BpeValue {
        zeta: [[zeta.0.re, zeta.0.im], [zeta.1.re, zeta.1.im]],
        maxdeg,
        value,
        null_defect: defect,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;
    use crate::fixtures;
    use crate::scalar::ExactComplex;

    fn matches(found: &FloatPoly, target: &str) -> bool {
        let t = parse_int_poly(target).unwrap();
        let grid = found
            .grid()
            .iter()
            .map(|r| r.iter().map(|c| ExactComplex::rationalize(*c, 1000, 1e-9)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>();
        grid.is_some_and(|g| BiPoly::from_grid(g).eq_up_to_scalar(&t))
    }

    #[test]
    fn recovery_examples() {
        let r = recover_minimal_polynomial(&fixtures::measure_two_branch(), (2, 2)).unwrap();
        assert!(matches(&r.q, "z^2 - w^2"));
        assert!(r.sigma_min <= 1e-12);
        let r = recover_minimal_polynomial(&fixtures::measure_neil(), (3, 2)).unwrap();
        assert!(matches(&r.q, "z^3 - w^2"));
        let r = recover_minimal_polynomial(&fixtures::measure_diagonal(), (1, 1)).unwrap();
        assert!(matches(&r.q, "z - w"));
        assert!(matches!(
            recover_minimal_polynomial(&fixtures::measure_neil(), (2, 2)),
            Err(Error::NoRelation(2, 2))
        ));
    }

    #[test]
    fn point_evaluations() {
        let mu = fixtures::measure_neil();
        let on = (C64::new(0.25, 0.0), C64::new(0.125, 0.0));
        let a = bpe_norm(&mu, on, (8, 8)).unwrap().norm();
        let b = bpe_norm(&mu, on, (12, 12)).unwrap().norm();
        assert!(a.is_finite() && b >= a - 1e-12 && (b - a) / a < 1e-3);
        // P²(μ) is the closed span of t^n, n ≠ 1, in L²(dθ) on the circle, so
        // the kernel at t = 1/2 is Σ_{n≠1} 4^{-n} / 2π
        let oracle = ((1.0 / (1.0 - 0.25) - 0.25) / std::f64::consts::TAU).sqrt();
        assert!((b - oracle).abs() < 1e-12, "{b} vs {oracle}");

        let off = bpe_norm(&mu, (C64::new(0.3, 0.0), C64::new(0.4, 0.0)), (8, 8)).unwrap();
        assert!(!off.bounded());

        let origin = bpe_norm(&mu, (C64::new(0.0, 0.0), C64::new(0.0, 0.0)), (4, 4)).unwrap().norm();
        assert!(origin >= 1.0 / mu.total_mass().sqrt() - 1e-12);
        assert!(matches!(bpe_norm(&mu, (C64::new(1.0, 0.0), C64::new(0.0, 0.0)), (4, 4)), Err(Error::ProbeOutsideBidisk)));
    }
}
