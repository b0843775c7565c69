//! Inner toral factors and polynomial convexity of `Z_q ∩ T²`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::bipoly::{gcd_bivariate, linear_factors, squarefree_part, BiPoly, ExactPoly, FloatPoly};
use crate::error::{Error, Result};
use crate::scalar::{ExactComplex, C64};

use super::monodromy::{monodromy_orbits, Monodromy, Tracker};
use super::{classify_approx, classify_inner_toral, SamplerConfig, Verdict};

/// A factor found while searching for inner toral factors.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FactorCertificate {
    /// Exact factor, when the reconstruction rationalized and divides exactly.
    pub exact: Option<ExactPoly>,
    pub approx: FloatPoly,
    /// Relative smallest singular value of the interpolation system (0 for
    /// factors obtained algebraically).
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InnerToralFactor {
    pub verdict: Verdict,
    pub certificate: Option<FactorCertificate>,
    /// Number of candidate factors examined.
    pub candidates: usize,
    pub reason: String,
}

impl InnerToralFactor {
    fn new(verdict: Verdict, certificate: Option<FactorCertificate>, candidates: usize, reason: impl Into<String>) -> Self {
        Self { verdict, certificate, candidates, reason: reason.into() }
    }
}

fn exact_certificate(g: &ExactPoly) -> FactorCertificate {
    FactorCertificate { exact: Some(g.clone()), approx: g.to_float().normalize(), residual: 0.0 }
}

/// Whether `q` has an inner toral factor.
///
/// Every inner toral factor `p` satisfies `reverse(p) = μp`, so it divides
/// `g = gcd(sf, reverse(sf))` of the square-free part. If `g` itself is not
/// inner toral, its branches are grouped by monodromy, each group's factor is
/// reconstructed by interpolation and classified on its own.
pub fn has_inner_toral_factor(q: &ExactPoly, cfg: &SamplerConfig) -> Result<InnerToralFactor> {
    cfg.validate()?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("has_inner_toral_factor"));
    }
    let cof = linear_factors(q).cofactor;
    if cof.is_constant() {
        return Ok(InnerToralFactor::new(Verdict::No, None, 0, "only single-variable factors"));
    }
    let sf = squarefree_part(&cof)?;
    let g = gcd_bivariate(&sf, &sf.reversed())?;
    if g.is_constant() {
        return Ok(InnerToralFactor::new(Verdict::No, None, 0, "no self-inversive factor"));
    }
    let whole = classify_inner_toral(&g, cfg)?;
    if whole.inner_toral == Verdict::Yes {
        return Ok(InnerToralFactor::new(Verdict::Yes, Some(exact_certificate(&g)), 1, "self-inversive part is inner toral"));
    }
    let mono = monodromy_orbits(&g, cfg)?;
    if mono.orbits.len() <= 1 {
        let reason = match whole.inner_toral {
            Verdict::No => "self-inversive part is irreducible and not inner toral",
            _ => "self-inversive part is irreducible and its classification is inconclusive",
        };
        return Ok(InnerToralFactor::new(whole.inner_toral, None, 1, reason));
    }
    let candidates = reconstruct_factors(&g, &mono);
    let mut inconclusive = false;
    let mut examined = 0;
    for cand in candidates {
        examined += 1;
        let Some(cert) = cand else {
            inconclusive = true;
            continue;
        };
        let verdict = match &cert.exact {
            Some(e) => classify_inner_toral(e, cfg)?.inner_toral,
            None => {
                let tol = cfg.tol.max(100.0 * cert.residual);
                classify_approx(&cert.approx, cfg, tol, 1e-6).0
            }
        };
        match verdict {
            Verdict::Yes => return Ok(InnerToralFactor::new(Verdict::Yes, Some(cert), examined, "factor is inner toral")),
            Verdict::Inconclusive => inconclusive = true,
            Verdict::No => {}
        }
    }
    if inconclusive {
        Ok(InnerToralFactor::new(Verdict::Inconclusive, None, examined, "a factor could not be reconstructed or classified"))
    } else {
        Ok(InnerToralFactor::new(Verdict::No, None, examined, "no factor is inner toral"))
    }
}

/// Radius in [0.6, 1.4] whose circle stays farthest from the critical values.
fn interpolation_radius(crit: &[C64]) -> f64 {
    (0..=16)
        .map(|i| 0.6 + 0.05 * i as f64)
        .max_by(|a, b| {
            let da = crit.iter().map(|c| (c.norm() - a).abs()).fold(f64::INFINITY, f64::min);
            let db = crit.iter().map(|c| (c.norm() - b).abs()).fold(f64::INFINITY, f64::min);
            da.total_cmp(&db)
        })
        .unwrap()
}

/// For each monodromy orbit, the polynomial of least z-degree vanishing on
/// that orbit's branches over a circle of sample points.
fn reconstruct_factors(g: &ExactPoly, mono: &Monodromy) -> Vec<Option<FactorCertificate>> {
    let n = g.deg_z();
    let rho = interpolation_radius(&mono.critical_values);
    let samples = 2 * (n + 1) + 4;
    let sub = 8;
    let phi0 = mono.base.arg();
    let mut nodes = vec![mono.base];
    for t in 0..samples * sub {
        nodes.push(C64::from_polar(rho, phi0 + std::f64::consts::TAU * t as f64 / (samples * sub) as f64));
    }
    let tracker = Tracker::new(&mono.poly);
    let Some(record) = tracker.track_recording(&nodes, &mono.base_roots) else {
        return vec![None; mono.orbits.len()];
    };
    let points: Vec<(C64, &Vec<C64>)> = (0..samples).map(|t| (nodes[1 + t * sub], &record[1 + t * sub])).collect();
    mono.orbits.iter().map(|orbit| fit_orbit(g, n, orbit, &points)).collect()
}

fn fit_orbit(g: &ExactPoly, n: usize, orbit: &[usize], points: &[(C64, &Vec<C64>)]) -> Option<FactorCertificate> {
    let s = orbit.len();
    for d in 0..=n {
        let cols = (d + 1) * (s + 1);
        let rows = points.len() * s;
        let mut a = DMatrix::<C64>::from_fn(rows, cols, |r, c| {
            let (z, ws) = points[r / s];
            let w = ws[orbit[r % s]];
            let (j, k) = (c / (s + 1), c % (s + 1));
            z.powu(j as u32) * w.powu(k as u32)
        });
        let scales: Vec<f64> = (0..cols).map(|c| a.column(c).norm().max(f64::MIN_POSITIVE)).collect();
        for (c, sc) in scales.iter().enumerate() {
            a.column_mut(c).unscale_mut(*sc);
        }
        let svd = a.clone().svd(false, true);
        let sv = &svd.singular_values;
        let (imin, smin) = sv.iter().copied().enumerate().min_by(|x, y| x.1.total_cmp(&y.1))?;
        let smax = sv.iter().copied().fold(0.0, f64::max);
        if smax == 0.0 || smin / smax > 1e-9 {
            continue;
        }
        let v_t = svd.v_t?;
        let x: Vec<C64> = (0..cols).map(|c| v_t[(imin, c)].conj() / scales[c]).collect();
        let grid: Vec<Vec<C64>> = (0..=d).map(|j| (0..=s).map(|k| x[j * (s + 1) + k]).collect()).collect();
        let approx = BiPoly::from_grid(grid).normalize();
        let exact = rationalize_factor(&approx).filter(|e| g.div_exact(e).is_some());
        return Some(FactorCertificate { exact, approx, residual: smin / smax });
    }
    None
}

fn rationalize_factor(f: &FloatPoly) -> Option<ExactPoly> {
    let grid: Option<Vec<Vec<ExactComplex>>> = f
        .grid()
        .iter()
        .map(|r| r.iter().map(|c| ExactComplex::rationalize(*c, 10_000, 1e-8)).collect())
        .collect();
    let e = BiPoly::from_grid(grid?);
    (!e.is_constant()).then_some(e)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Convexity {
    Convex,
    NotConvex,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub verdict: Convexity,
    pub reason: String,
    pub inner_toral_factor: Option<InnerToralFactor>,
}

/// Polynomial convexity of `Z_q ∩ T²`: not convex when `q` has a factor
/// `z − ζ` or `w − ζ` with `|ζ| = 1` (within `tol`), or an inner toral factor;
/// convex otherwise.
pub fn polynomial_convexity(q: &ExactPoly, cfg: &SamplerConfig) -> Result<ConvexityReport> {
    cfg.validate()?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("polynomial_convexity"));
    }
    let lf = linear_factors(q);
    if let Some(f) = lf.factors.iter().find(|f| (f.zeta().norm() - 1.0).abs() <= cfg.tol) {
        return Ok(ConvexityReport {
            verdict: Convexity::NotConvex,
            reason: format!("unimodular line {}", f.describe()),
            inner_toral_factor: None,
        });
    }
    if lf.cofactor.is_constant() {
        return Ok(ConvexityReport { verdict: Convexity::Convex, reason: "no inner toral factor".into(), inner_toral_factor: None });
    }
    let h = has_inner_toral_factor(&lf.cofactor, cfg)?;
    let (verdict, reason) = match h.verdict {
        Verdict::Yes => (Convexity::NotConvex, "inner toral factor"),
        Verdict::No => (Convexity::Convex, "no inner toral factor"),
        Verdict::Inconclusive => (Convexity::Inconclusive, "inner toral factor search inconclusive"),
    };
    Ok(ConvexityReport { verdict, reason: reason.into(), inner_toral_factor: Some(h) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;

    fn p(s: &str) -> ExactPoly {
        parse_int_poly(s).unwrap()
    }

    #[test]
    fn inner_toral_factor_examples() {
        let cfg = SamplerConfig::default();
        let r = has_inner_toral_factor(&(&p("1 - zw") * &p("z - w")), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        let cert = r.certificate.unwrap();
        assert!(cert.exact.unwrap().eq_up_to_scalar(&p("z - w")));

        assert_eq!(has_inner_toral_factor(&p("1 - zw"), &cfg).unwrap().verdict, Verdict::No);

        let r = has_inner_toral_factor(&p("z^3 - w^2"), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        assert!(r.certificate.unwrap().exact.unwrap().eq_up_to_scalar(&p("z^3 - w^2")));
    }

    #[test]
    fn convexity_examples() {
        let cfg = SamplerConfig::default();
        assert_eq!(polynomial_convexity(&p("1 - zw"), &cfg).unwrap().verdict, Convexity::Convex);
        assert_eq!(polynomial_convexity(&p("z^3 - w^2"), &cfg).unwrap().verdict, Convexity::NotConvex);
        let r = polynomial_convexity(&(&p("z - 1") * &p("1 - zw")), &cfg).unwrap();
        assert_eq!(r.verdict, Convexity::NotConvex);
        assert_eq!(r.reason, "unimodular line z=1");
        assert_eq!(polynomial_convexity(&(&p("z - 2") * &p("1 - zw")), &cfg).unwrap().verdict, Convexity::Convex);
    }

    #[test]
    fn reconstruction_of_a_hidden_factor() {
        // (1 - zw)(z^3 - w^2): the second factor is inner toral, the product is not
        let cfg = SamplerConfig::default();
        let r = has_inner_toral_factor(&(&p("1 - zw") * &p("z^3 - w^2")), &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Yes);
        assert!(r.certificate.unwrap().exact.unwrap().eq_up_to_scalar(&p("z^3 - w^2")));
    }
}
