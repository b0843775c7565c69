use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::bipoly::{BiPoly, FloatPoly};
use crate::error::{Error, Result};
use crate::linalg::{orthogonal_complement, Mat};
use crate::opmodel::{PairModel, PairSource, TruncatedPair};
use crate::scalar::C64;

use super::{gram, TorusMeasure};

/// Rank tolerance for the Gram quotient, relative to the largest diagonal
/// entry, applied to squared norms.
const QUOTIENT_TOL: f64 = 1e-12;

/// `P²(μ)` truncated to monomials of bidegree at most `maxdeg`, with an
/// orthonormal basis found by Gram–Schmidt in label order and the
/// compressions of `M_z`, `M_w` to it.
///
/// Monomial `z^j w^k` has label `max(j + N − n, k + N − m)` where
/// `N = max(n, m)`; multiplying by `z^a w^b` raises labels by at most
/// `max(a, b)`.
#[derive(Clone, Debug)]
pub struct GridModel {
    pub maxdeg: (usize, usize),
    /// Coefficient-vector index `j·(m+1) + k` ↦ `(j, k)`.
    pub monomials: Vec<(usize, usize)>,
    /// Orthonormal basis of the quotient as coefficient vectors (columns).
    pub basis: DMatrix<C64>,
    pub labels: Vec<usize>,
    /// Monomial that introduced each basis vector.
    pub retained: Vec<usize>,
    /// Unit coefficient vectors of polynomials that vanish in `P²(μ)`.
    pub null_vectors: DMatrix<C64>,
    pub mz: DMatrix<C64>,
    pub mw: DMatrix<C64>,
}

impl GridModel {
    pub fn label(&self, (j, k): (usize, usize)) -> usize {
        let (n, m) = self.maxdeg;
        let big = n.max(m);
        (j + big - n).max(k + big - m)
    }

    pub fn cutoff(&self) -> usize {
        self.maxdeg.0.max(self.maxdeg.1) + 1
    }

    pub fn rank(&self) -> usize {
        self.basis.ncols()
    }

    /// Coefficient vector to polynomial.
    pub fn poly(&self, coeffs: &DVector<C64>) -> FloatPoly {
        let (n, m) = self.maxdeg;
        BiPoly::from_grid((0..=n).map(|j| (0..=m).map(|k| coeffs[j * (m + 1) + k]).collect()).collect())
    }

    /// Basis indices with `label + raise < cutoff`.
    pub fn interior(&self, raise: usize) -> Vec<usize> {
        (0..self.rank()).filter(|&i| self.labels[i] + raise < self.cutoff()).collect()
    }
}

/// Gram–Schmidt in the metric `H` (`⟨c, e⟩ = e*Hc`), visiting monomials in
/// `order`; candidates whose residual has squared norm below the tolerance
/// become null vectors.
fn gram_schmidt(h: &DMatrix<C64>, order: &[usize]) -> (Vec<usize>, DMatrix<C64>, DMatrix<C64>, DMatrix<C64>) {
    let n = h.nrows();
    let thr = QUOTIENT_TOL * (0..n).map(|i| h[(i, i)].re).fold(0.0, f64::max);
    let mut u = DMatrix::<C64>::zeros(n, n);
    let mut hu = DMatrix::<C64>::zeros(n, n);
    let mut kept = Vec::new();
    let mut nulls = Vec::new();
    for &alpha in order {
        let r = kept.len();
        let mut x = DVector::<C64>::zeros(n);
        x[alpha] = C64::new(1.0, 0.0);
        if r > 0 {
            for _ in 0..2 {
                let c = hu.columns(0, r).adjoint() * &x;
                x -= u.columns(0, r) * c;
            }
        }
        let hx = h * &x;
        let nrm2 = x.dotc(&hx).re;
        if nrm2 <= thr {
            nulls.push(x.normalize());
        } else {
            let s = nrm2.sqrt();
            u.set_column(r, &(x / C64::new(s, 0.0)));
            hu.set_column(r, &(hx / C64::new(s, 0.0)));
            kept.push(alpha);
        }
    }
    let r = kept.len();
    let u = u.columns(0, r).into_owned();
    let hu = hu.columns(0, r).into_owned();
    let null = DMatrix::from_columns(&nulls);
    let null = if nulls.is_empty() { DMatrix::zeros(n, 0) } else { null };
    (kept, u, hu, null)
}

/// Orthonormal quotient basis and the compressions `A_x = U* H_{small,big}
/// S_x U` of multiplication by `z` and `w`, using Gram entries on the grid
/// enlarged by `(1, 1)`.
pub fn mult_matrices(mu: &TorusMeasure, maxdeg: (usize, usize)) -> Result<GridModel> {
    let (n, m) = maxdeg;
    let big = gram(mu, (n + 1, m + 1)).float();
    let monomials: Vec<(usize, usize)> = (0..=n).flat_map(|j| (0..=m).map(move |k| (j, k))).collect();
    let big_idx = |j: usize, k: usize| j * (m + 2) + k;
    let size = monomials.len();
    // H[β][α] = ⟨x^α, x^β⟩ = G[α][β]
    let h = DMatrix::from_fn(size, size, |b, a| {
        let (ja, ka) = monomials[a];
        let (jb, kb) = monomials[b];
        big[(big_idx(ja, ka), big_idx(jb, kb))]
    });
    let big_n = n.max(m);
    let label = |(j, k): (usize, usize)| (j + big_n - n).max(k + big_n - m);
    let mut order: Vec<usize> = (0..size).collect();
    order.sort_by_key(|&i| {
        let (j, k) = monomials[i];
        (label((j, k)), j + k, j)
    });
    let (kept, u, _hu, null_vectors) = gram_schmidt(&h, &order);
    if kept.is_empty() {
        return Err(Error::InvalidMeasure("Gram matrix vanishes".into()));
    }
    let shifted = |dj: usize, dk: usize| {
        DMatrix::from_fn(size, size, |b, a| {
            let (ja, ka) = monomials[a];
            let (jb, kb) = monomials[b];
            big[(big_idx(ja + dj, ka + dk), big_idx(jb, kb))]
        })
    };
    let mz = u.adjoint() * shifted(1, 0) * &u;
    let mw = u.adjoint() * shifted(0, 1) * &u;
    let labels = kept.iter().map(|&i| label(monomials[i])).collect();
    Ok(GridModel { maxdeg, monomials, basis: u, labels, retained: kept, null_vectors, mz, mw })
}

/// The compressions as a [`TruncatedPair`] with cutoff `max(n, m) + 1`.
pub fn model_pair(mu: &TorusMeasure, maxdeg: (usize, usize)) -> Result<TruncatedPair<C64>> {
    let gm = mult_matrices(mu, maxdeg)?;
    Ok(TruncatedPair {
        cutoff: gm.cutoff(),
        v1: Mat::from_dmatrix(&gm.mz),
        v2: Mat::from_dmatrix(&gm.mw),
        labels: gm.labels.clone(),
        model: PairModel::Grid { maxdeg },
    })
}

impl PairSource for TorusMeasure {
    fn truncated_pair(&self, cutoff: usize) -> Result<TruncatedPair<C64>> {
        if cutoff == 0 {
            return Err(Error::CutoffTooSmall { cutoff, buffer: 0 });
        }
        model_pair(self, (cutoff - 1, cutoff - 1))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CokernelBasis {
    pub maxdeg: (usize, usize),
    /// Dimension of the complement of `ran M_z + ran M_w`.
    pub dim: usize,
    /// Orthonormal (in `P²(μ)`) polynomials spanning that complement.
    pub vectors: Vec<FloatPoly>,
    /// `dim ker M_z*` and `dim ker M_w*`, computed the same way.
    pub ker_mz_dim: usize,
    pub ker_mw_dim: usize,
}

const RANGE_TOL: f64 = 1e-9;

fn complement_in_interior(ops: &[&DMatrix<C64>], int: &[usize]) -> DMatrix<C64> {
    let mut cols = DMatrix::<C64>::zeros(int.len(), ops.len() * int.len());
    for (o, op) in ops.iter().enumerate() {
        for (c, &e) in int.iter().enumerate() {
            for (r, &row) in int.iter().enumerate() {
                cols[(r, o * int.len() + c)] = op[(row, e)];
            }
        }
    }
    orthogonal_complement(&cols, RANGE_TOL)
}

/// Orthonormal basis of `(ran M_z + ran M_w)^⊥` restricted to basis vectors
/// whose images stay inside the truncation.
pub fn cokernel_basis(mu: &TorusMeasure, maxdeg: (usize, usize)) -> Result<CokernelBasis> {
    let gm = mult_matrices(mu, maxdeg)?;
    let int = gm.interior(1);
    let joint = complement_in_interior(&[&gm.mz, &gm.mw], &int);
    let vectors = (0..joint.ncols())
        .map(|c| {
            let mut full = DVector::<C64>::zeros(gm.rank());
            for (r, &row) in int.iter().enumerate() {
                full[row] = joint[(r, c)];
            }
            gm.poly(&(&gm.basis * full))
        })
        .collect();
    Ok(CokernelBasis {
        maxdeg,
        dim: joint.ncols(),
        vectors,
        ker_mz_dim: complement_in_interior(&[&gm.mz], &int).ncols(),
        ker_mw_dim: complement_in_interior(&[&gm.mw], &int).ncols(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CokernelStability {
    pub maxdegs: Vec<(usize, usize)>,
    pub dims: Vec<usize>,
    pub ker_mz_dims: Vec<usize>,
    pub ker_mw_dims: Vec<usize>,
    pub stabilized: bool,
}

/// Cokernel dimensions at `maxdeg` and `maxdeg + (4, 4)`.
pub fn cokernel_stabilized(mu: &TorusMeasure, maxdeg: (usize, usize)) -> Result<CokernelStability> {
    let maxdegs = vec![maxdeg, (maxdeg.0 + 4, maxdeg.1 + 4)];
    let reports = maxdegs.iter().map(|&d| cokernel_basis(mu, d)).collect::<Result<Vec<_>>>()?;
    let dims: Vec<usize> = reports.iter().map(|r| r.dim).collect();
    let ker_mz_dims: Vec<usize> = reports.iter().map(|r| r.ker_mz_dim).collect();
    let ker_mw_dims: Vec<usize> = reports.iter().map(|r| r.ker_mw_dim).collect();
    let stabilized = dims[0] == dims[1] && ker_mz_dims[0] == ker_mz_dims[1] && ker_mw_dims[0] == ker_mw_dims[1];
    Ok(CokernelStability { maxdegs, dims, ker_mz_dims, ker_mw_dims, stabilized })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;
    use crate::fixtures;
    use crate::opmodel::{decomposition_check, decomposition_stabilized, range_orthogonality, verify_annihilation};

    fn isometry_defect(a: &DMatrix<C64>, int: &[usize]) -> f64 {
        let cols = DMatrix::from_fn(a.nrows(), int.len(), |i, j| a[(i, int[j])]);
        let g = cols.adjoint() * &cols - DMatrix::identity(int.len(), int.len());
        g.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn isometries_on_the_interior() {
        for mu in [fixtures::measure_two_branch(), fixtures::measure_neil(), fixtures::measure_diagonal()] {
            let gm = mult_matrices(&mu, (6, 6)).unwrap();
            let int = gm.interior(1);
            assert!(isometry_defect(&gm.mz, &int) < 1e-12);
            assert!(isometry_defect(&gm.mw, &int) < 1e-12);
            let comm = &gm.mz * &gm.mw - &gm.mw * &gm.mz;
            for &e in &int {
                assert!(comm.column(e).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_measure_collapses() {
        let gm = mult_matrices(&fixtures::measure_diagonal(), (5, 5)).unwrap();
        assert_eq!(gm.rank(), 11);
        for &e in &gm.interior(1) {
            assert!((gm.mz.column(e) - gm.mw.column(e)).norm() < 1e-12);
        }
    }

    #[test]
    fn cokernels() {
        let c = cokernel_basis(&fixtures::measure_two_branch(), (6, 6)).unwrap();
        assert_eq!(c.dim, 1);
        let v = &c.vectors[0];
        assert_eq!(v.bidegree(), (0, 0));
        // unit norm in P²(μ): |c|² · 4π = 1
        assert!((v.coeff(0, 0).norm_sqr() * 2.0 * std::f64::consts::TAU - 1.0).abs() < 1e-12);

        let c = cokernel_basis(&fixtures::measure_diagonal(), (6, 6)).unwrap();
        assert_eq!(c.dim, 1);
        assert_eq!(c.vectors[0].bidegree(), (0, 0));

        let s = cokernel_stabilized(&fixtures::measure_neil(), (8, 8)).unwrap();
        assert!(s.stabilized);
        assert_eq!(s.dims, vec![1, 1]);
        assert_eq!(s.ker_mz_dims, vec![2, 2]);
        assert_eq!(s.ker_mw_dims, vec![3, 3]);
    }

    #[test]
    fn measure_model_identities() {
        let p = |s: &str| parse_int_poly(s).unwrap();
        let pair = model_pair(&fixtures::measure_two_branch(), (10, 10)).unwrap();
        let r = verify_annihilation(&p("z^2 - w^2"), &pair, 2, 1e-12).unwrap();
        assert!(r.passed, "{}", r.max_residual);
        let r = range_orthogonality(&p("z - w"), &p("z + w"), &pair, 50, 0, 1e-12);
        assert!(r.passed, "{}", r.max_residual);
        let r = range_orthogonality(&p("z - w"), &p("z - w"), &pair, 10, 0, 1e-12);
        assert!(r.max_residual > 1e-3, "{}", r.max_residual);
        let d = decomposition_check(&[p("z - w"), p("z + w")], &pair).unwrap();
        assert_eq!(d.codim_estimate, 1);
        assert!(d.orthogonality_residual <= 1e-12);
    }

    #[test]
    fn composite_measure_stabilizes() {
        let p = |s: &str| parse_int_poly(s).unwrap();
        let mu = fixtures::measure_composite();
        let r = decomposition_stabilized(&[p("z - w"), p("z + w"), p("z^3 - w^2")], &mu, 8, 1e-10).unwrap();
        assert!(r.stabilized, "{:?}", r.codim_estimates);
        assert!(r.verified, "{:?}", r.reports);
    }
}
