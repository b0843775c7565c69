use nalgebra::DMatrix;
use rand::Rng;
use serde::Serialize;

use crate::bipoly::{gcd_bivariate, roots, squarefree_part, BiPoly, ExactPoly, UniPoly};
use crate::det::bareiss_det;
use crate::error::{Error, Result};
use crate::linalg::spectral_norm;
use crate::parallel::{map_indexed, rng_for};
use crate::scalar::{ExactComplex, Scalar, C64};

use super::{IdentityReport, MatrixRationalInner, ZPoly};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharPoly {
    pub q_full: ExactPoly,
    pub q_min: ExactPoly,
}

fn det_w_pencil(phi: &MatrixRationalInner) -> ExactPoly {
    let k = phi.k();
    let d = BiPoly::from_z_poly(phi.den());
    let wd = &BiPoly::var_w() * &d;
    let rows = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    let n = BiPoly::from_z_poly(&phi.num()[i][j]);
                    if i == j {
                        &wd - &n
                    } else {
                        -&n
                    }
                })
                .collect()
        })
        .collect();
    bareiss_det(rows)
}

/// Numerator of `det(wI − Φ(z))` in lowest terms (`q_full`) and its
/// square-free part (`q_min`), both normalized.
pub fn char_numerator(phi: &MatrixRationalInner) -> Result<CharPoly> {
    let big_d = det_w_pencil(phi);
    let dk = BiPoly::from_z_poly(&phi.den().pow(phi.k() as u32));
    let g = gcd_bivariate(&big_d, &dk)?;
    let q_full = big_d.div_exact(&g).expect("gcd divides").normalize();
    let q_min = squarefree_part(&q_full)?.normalize();
    Ok(CharPoly { q_full, q_min })
}

/// `Q(z, w) = f(zI, wI, Φ(z))` for the divided difference
/// `f(z, w₁, w₂) = (q(z, w₁) − q(z, w₂))/(w₁ − w₂)`, multiplied by
/// `d(z)^den_power` to clear denominators. Then
/// `Q·(w·d·I − N) = d^{den_power+1}·(q·I − q(z, Φ(z)))`.
#[derive(Clone, Debug, PartialEq)]
pub struct QMatrix {
    pub entries: Vec<Vec<ExactPoly>>,
    pub den_power: u32,
}

type PolyMat = Vec<Vec<ZPoly>>;

fn mat_mul(a: &[Vec<ZPoly>], b: &[Vec<ZPoly>]) -> PolyMat {
    let k = a.len();
    (0..k)
        .map(|i| (0..k).map(|j| (0..k).fold(ZPoly::zero(), |acc, l| &acc + &(&a[i][l] * &b[l][j]))).collect())
        .collect()
}

pub fn divided_difference_matrix(q: &ExactPoly, phi: &MatrixRationalInner) -> QMatrix {
    let k = phi.k();
    let cs = q.w_coeffs();
    let m = cs.len().saturating_sub(1);
    let den_power = m.saturating_sub(1) as u32;
    let eye: PolyMat = (0..k).map(|i| (0..k).map(|j| if i == j { ZPoly::one() } else { ZPoly::zero() }).collect()).collect();
    let mut n_pow = vec![eye];
    for _ in 1..m {
        let next = mat_mul(n_pow.last().unwrap(), phi.num());
        n_pow.push(next);
    }
    let d_pow: Vec<ZPoly> = (0..m).map(|e| phi.den().pow(e as u32)).collect();
    let mut entries = vec![vec![ExactPoly::zero(); k]; k];
    // Σ_k c_k(z) Σ_{i<k} w^i Φ^{k-1-i}, with Φ^p = N^p / d^p
    for (deg, c) in cs.iter().enumerate().skip(1) {
        for i in 0..deg {
            let p = deg - 1 - i;
            let scal = c * &d_pow[den_power as usize - p];
            let w_i = BiPoly::monomial(ExactComplex::from_i64(1), 0, i);
            for (a, row) in entries.iter_mut().enumerate() {
                for (b, e) in row.iter_mut().enumerate() {
                    let term = BiPoly::from_z_poly(&(&scal * &n_pow[p][a][b]));
                    *e = &*e + &(&term * &w_i);
                }
            }
        }
    }
    QMatrix { entries, den_power }
}

/// Exact check of `Q·(w·d·I − N) = q·d^{den_power+1}·I`.
pub fn verify_q_identity(q: &ExactPoly, phi: &MatrixRationalInner) -> IdentityReport {
    let qm = divided_difference_matrix(q, phi);
    let k = phi.k();
    let d = BiPoly::from_z_poly(phi.den());
    let rhs = q * &BiPoly::from_z_poly(&phi.den().pow(qm.den_power + 1));
    let wd = &BiPoly::var_w() * &d;
    let mut worst = 0.0f64;
    let mut zero = true;
    for i in 0..k {
        for j in 0..k {
            let mut acc = ExactPoly::zero();
            for l in 0..k {
                let pencil = BiPoly::from_z_poly(&phi.num()[l][j]);
                let pencil = if l == j { &wd - &pencil } else { -&pencil };
                acc = &acc + &(&qm.entries[i][l] * &pencil);
            }
            if i == j {
                acc = &acc - &rhs;
            }
            zero &= acc.is_zero();
            worst = worst.max(acc.max_abs());
        }
    }
    IdentityReport::exact("Q(z,w)(w·d(z)I − N(z)) = q(z,w)d(z)^m I", worst, zero, 1)
}

/// The same identity at `points` random points of the bidisk, as a relative
/// residual `‖Q·P − q·d^m·I‖ / (‖Q‖·‖P‖ + |q·d^m|)`.
pub fn verify_q_identity_sampled(
    q: &ExactPoly,
    phi: &MatrixRationalInner,
    points: usize,
    seed: u64,
    tol: f64,
) -> IdentityReport {
    let qm = divided_difference_matrix(q, phi);
    let k = phi.k();
    let qf = q.to_float();
    let entries: Vec<Vec<_>> = qm.entries.iter().map(|r| r.iter().map(|e| e.to_float()).collect()).collect();
    let num: Vec<Vec<UniPoly<C64>>> = phi.num().iter().map(|r| r.iter().map(|p| p.to_float()).collect()).collect();
    let den = phi.den().to_float();
    let res = map_indexed(points, |s| {
        let mut rng = rng_for(seed, s as u64);
        let z = C64::from_polar(rng.random::<f64>().sqrt(), std::f64::consts::TAU * rng.random::<f64>());
        let w = C64::from_polar(rng.random::<f64>().sqrt(), std::f64::consts::TAU * rng.random::<f64>());
        let dz = den.eval(&z);
        let qmat = DMatrix::from_fn(k, k, |i, j| entries[i][j].eval(&z, &w));
        let pencil = DMatrix::from_fn(k, k, |i, j| if i == j { w * dz } else { C64::new(0.0, 0.0) } - num[i][j].eval(&z));
        let rhs = qf.eval(&z, &w) * dz.powu(qm.den_power + 1);
        let diff = &qmat * &pencil - DMatrix::identity(k, k) * rhs;
        spectral_norm(&diff) / (spectral_norm(&qmat) * spectral_norm(&pencil) + rhs.norm()).max(f64::MIN_POSITIVE)
    });
    IdentityReport::sampled(
        "Q(z,w)(w·d(z)I − N(z)) = q(z,w)d(z)^m I",
        res.into_iter().fold(0.0, f64::max),
        points,
        tol,
    )
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CokernelDims {
    /// `dim ker M_z*`, equal to k.
    pub mult_v1: usize,
    /// `dim ker M_Φ*`, the number of zeros of `det Φ` in the disk.
    pub mult_v2: usize,
    pub q_bidegree: (usize, usize),
    /// `(mult_v2, mult_v1) = bidegree(q_full)`.
    pub consistent: bool,
}

/// Multiplicities of the model pair, checked against the bidegree of `q_full`.
pub fn cokernel_dims(phi: &MatrixRationalInner) -> Result<CokernelDims> {
    let k = phi.k();
    let det = bareiss_det(phi.num().to_vec());
    if det.is_zero() {
        return Err(Error::NotInner("det Φ vanishes identically".into()));
    }
    let at_zero = det.low_order_zeros();
    let rest = UniPoly::new(det.coeffs()[at_zero..].to_vec());
    let mut inside = at_zero;
    if !rest.is_constant() {
        for r in roots(&rest.to_float(), 0.0)?.roots {
            if (r.norm() - 1.0).abs() < 1e-9 {
                return Err(Error::NotInner(format!("det Φ vanishes on the circle near {:.6}{:+.6}i", r.re, r.im)));
            }
            if r.norm() < 1.0 {
                inside += 1;
            }
        }
    }
    let q_bidegree = char_numerator(phi)?.q_full.bidegree();
    Ok(CokernelDims { mult_v1: k, mult_v2: inside, q_bidegree, consistent: q_bidegree == (inside, k) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;

    fn p(s: &str) -> ExactPoly {
        parse_int_poly(s).unwrap()
    }

    fn phi(rows: &[&[&str]], den: &str) -> MatrixRationalInner {
        MatrixRationalInner::parse(rows, den).unwrap()
    }

    #[test]
    fn char_numerator_examples() {
        let c = char_numerator(&phi(&[&["0", "z^2"], &["z", "0"]], "1")).unwrap();
        assert!(c.q_full.eq_up_to_scalar(&p("w^2 - z^3")));
        assert!(c.q_min.eq_up_to_scalar(&p("w^2 - z^3")));

        let c = char_numerator(&phi(&[&["z", "0"], &["0", "z"]], "1")).unwrap();
        assert!(c.q_full.eq_up_to_scalar(&p("w^2 - 2zw + z^2")));
        assert!(c.q_min.eq_up_to_scalar(&p("w - z")));

        let c = char_numerator(&phi(&[&["z", "0"], &["0", "z^2"]], "1")).unwrap();
        assert!(c.q_min.eq_up_to_scalar(&(&p("w - z") * &p("w - z^2"))));
    }

    #[test]
    fn char_numerator_of_rational_entries() {
        // det(w − (1−2z)/(2−z)) = ((2−z)w − 1 + 2z)/(2−z)
        let c = char_numerator(&phi(&[&["1 - 2z"]], "2 - z")).unwrap();
        assert!(c.q_full.eq_up_to_scalar(&p("2w - zw - 1 + 2z")));
        // a common factor of numerator and denominator cancels
        let c = char_numerator(&phi(&[&["1 - 2z", "0"], &["0", "2 - z"]], "2 - z")).unwrap();
        assert!(c.q_full.eq_up_to_scalar(&(&p("2w - zw - 1 + 2z") * &p("w - 1"))));
    }

    #[test]
    fn divided_difference_examples() {
        let ex = phi(&[&["0", "z^2"], &["z", "0"]], "1");
        let q = divided_difference_matrix(&p("w^2 - z^3"), &ex);
        // Q = wI + Φ
        assert_eq!(q.entries[0][0], p("w"));
        assert_eq!(q.entries[0][1], p("z^2"));
        assert_eq!(q.entries[1][0], p("z"));
        assert_eq!(q.entries[1][1], p("w"));
        assert!(verify_q_identity(&p("w^2 - z^3"), &ex).passed);

        let one = phi(&[&["z"]], "1");
        let q = divided_difference_matrix(&p("w - z"), &one);
        assert_eq!(q.entries[0][0], p("1"));

        // w³: Q = w²I + wΦ + Φ²
        let q = divided_difference_matrix(&p("w^3"), &ex);
        assert_eq!(q.entries[0][0], &p("w^2") + &p("z^3"));
        assert_eq!(q.entries[0][1], p("wz^2"));
        assert!(!verify_q_identity(&p("w^3"), &ex).passed);
    }

    #[test]
    fn q_identity_with_denominators() {
        let mob = phi(&[&["1 - 2z", "0"], &["0", "2z - z^2"]], "2 - z");
        let q = char_numerator(&mob).unwrap().q_full;
        assert!(verify_q_identity(&q, &mob).passed);
        let r = verify_q_identity_sampled(&q, &mob, 100, 1, 1e-10);
        assert!(r.passed, "{}", r.max_residual);
    }

    #[test]
    fn cokernel_examples() {
        let c = cokernel_dims(&phi(&[&["0", "z^2"], &["z", "0"]], "1")).unwrap();
        assert_eq!((c.mult_v1, c.mult_v2), (2, 3));
        assert!(c.consistent);
        let c = cokernel_dims(&phi(&[&["z"]], "1")).unwrap();
        assert_eq!((c.mult_v1, c.mult_v2), (1, 1));
        let c = cokernel_dims(&phi(&[&["z", "0"], &["0", "z^2"]], "1")).unwrap();
        assert_eq!((c.mult_v1, c.mult_v2), (2, 3));
        assert!(matches!(cokernel_dims(&phi(&[&["z", "z"], &["z", "z"]], "1")), Err(Error::NotInner(_))));
        let c = cokernel_dims(&phi(&[&["1 - 2z"]], "2 - z")).unwrap();
        assert_eq!((c.mult_v1, c.mult_v2), (1, 1));
    }
}
