//! Toral and inner toral classification of bivariate polynomials.
//!
//! A polynomial is inner toral when its zero set lies in `D² ∪ T² ∪ E²`
//! (open bidisk, torus, exterior of the closed bidisk). Decisions combine
//! exact algebra (linear factors, self-inversiveness, gcd with the reversal)
//! with sampling of fibers `w ↦ q(z0, w)` over the circle and the disk.

use serde::Serialize;

use crate::bipoly::{linear_factors, roots, squarefree_part, ExactPoly, FloatPoly, LinearFactor};
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, rng_for};
use crate::scalar::{Scalar, C64};

mod convexity;
mod monodromy;
mod sample;

pub use convexity::{has_inner_toral_factor, polynomial_convexity, Convexity, ConvexityReport, FactorCertificate, InnerToralFactor};
pub use monodromy::{monodromy_factor_degrees, monodromy_orbits, Monodromy};
pub use sample::{sample_variety, Region};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SamplerConfig {
    pub n_torus_samples: usize,
    pub n_disk_samples: usize,
    pub tol: f64,
    pub seed: u64,
    pub monodromy_loop_points: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self { n_torus_samples: 256, n_disk_samples: 256, tol: 1e-9, seed: 0, monodromy_loop_points: 256 }
    }
}

impl SamplerConfig {
    pub fn with_samples(n: usize) -> Self {
        Self { n_torus_samples: n, n_disk_samples: n, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_torus_samples == 0 || self.n_disk_samples == 0 || self.monodromy_loop_points == 0 {
            return Err(Error::input("config", "sample counts must be positive"));
        }
        if !(self.tol > 0.0 && self.tol < 0.1) {
            return Err(Error::input("config.tol", "tolerance must lie in (0, 0.1)"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Location {
    Disk,
    Torus,
    Exterior,
    BoundaryAmbiguous,
}

impl Location {
    /// Torus within `tol`; the band `(tol, 10·tol)` around the circle is
    /// ambiguous; everything else is Disk or Exterior.
    pub fn of(w: C64, tol: f64) -> Self {
        let dev = w.norm() - 1.0;
        if dev.abs() <= tol {
            Location::Torus
        } else if dev.abs() < 10.0 * tol {
            Location::BoundaryAmbiguous
        } else if dev < 0.0 {
            Location::Disk
        } else {
            Location::Exterior
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberProfile {
    pub z0: C64,
    pub roots: Vec<C64>,
    pub degree_drop: usize,
    pub location_labels: Vec<Location>,
    /// Largest `||w| − 1|` over the roots (0 when there are none).
    pub max_torus_deviation: f64,
}

/// Roots of `w ↦ q(z0, w)` with their location labels.
pub fn fiber_profile(q: &FloatPoly, z0: C64, tol: f64) -> Result<FiberProfile> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("fiber_profile"));
    }
    let u = q.fiber(&z0);
    if u.is_zero() || u.max_abs() <= 4.0 * f64::EPSILON * q.max_abs() {
        return Err(Error::VerticalLine { re: z0.re, im: z0.im });
    }
    let r = roots(&u, tol)?;
    let degree_drop = q.deg_w() - (u.deg0() - r.degree_drop);
    let location_labels = r.roots.iter().map(|w| Location::of(*w, tol)).collect();
    let max_torus_deviation = r.roots.iter().map(|w| (w.norm() - 1.0).abs()).fold(0.0, f64::max);
    Ok(FiberProfile { z0, roots: r.roots, degree_drop, location_labels, max_torus_deviation })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Yes,
    No,
    Inconclusive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SampleRegion {
    Torus,
    Disk,
}

/// Evidence attached to a classification.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum Certificate {
    LinearFactor { factor: LinearFactor },
    NotSelfInversive { residual: f64 },
    FiberViolation { region: SampleRegion, z: C64, w: Option<C64>, deviation: f64 },
    BoundaryAmbiguous { region: SampleRegion, z: C64, w: C64, deviation: f64 },
}

impl Certificate {
    fn deviation(&self) -> f64 {
        match self {
            Certificate::FiberViolation { deviation, .. } | Certificate::BoundaryAmbiguous { deviation, .. } => *deviation,
            _ => f64::INFINITY,
        }
    }
}

const MAX_CERTIFICATES: usize = 5;

/// Result of sampling fibers over the circle and the disk.
#[derive(Clone, Debug, Default)]
pub(crate) struct Sampling {
    pub violations: Vec<Certificate>,
    pub ambiguous: Vec<Certificate>,
    pub ambiguous_count: usize,
    pub violation_count: usize,
    pub max_torus_deviation: f64,
    pub samples_used: usize,
}

/// Van der Corput radical inverse.
fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

pub(crate) fn torus_points(n: usize, seed: u64) -> Vec<C64> {
    use rand::Rng;
    let offset: f64 = rng_for(seed, u64::MAX).random();
    (0..n).map(|k| C64::from_polar(1.0, std::f64::consts::TAU * (k as f64 + offset) / n as f64)).collect()
}

/// Quasi-random points in the disk of radius 0.95 (Halton sequence with a
/// seeded rotation).
pub(crate) fn disk_points(n: usize, seed: u64) -> Vec<C64> {
    use rand::Rng;
    let mut rng = rng_for(seed, u64::MAX - 1);
    let (s1, s2): (f64, f64) = (rng.random(), rng.random());
    (0..n)
        .map(|k| {
            let u = (radical_inverse(k as u64 + 1, 2) + s1).fract();
            let v = (radical_inverse(k as u64 + 1, 3) + s2).fract();
            C64::from_polar(0.95 * u.sqrt(), std::f64::consts::TAU * v)
        })
        .collect()
}

fn check_fiber(q: &FloatPoly, z: C64, region: SampleRegion, tol: f64) -> (Vec<Certificate>, Vec<Certificate>, f64) {
    let mut bad = Vec::new();
    let mut amb = Vec::new();
    let mut dev_on_torus: f64 = 0.0;
    let profile = match fiber_profile(q, z, tol) {
        Ok(p) => p,
        Err(_) => {
            bad.push(Certificate::FiberViolation { region, z, w: None, deviation: f64::INFINITY });
            return (bad, amb, f64::INFINITY);
        }
    };
    if profile.degree_drop > 0 {
        bad.push(Certificate::FiberViolation { region, z, w: None, deviation: f64::INFINITY });
    }
    for (w, label) in profile.roots.iter().zip(&profile.location_labels) {
        let deviation = (w.norm() - 1.0).abs();
        match (region, label) {
            (SampleRegion::Torus, Location::Torus) => dev_on_torus = dev_on_torus.max(deviation),
            (SampleRegion::Disk, Location::Disk) => {}
            (SampleRegion::Torus, Location::Disk | Location::Exterior) | (SampleRegion::Disk, Location::Exterior) => {
                bad.push(Certificate::FiberViolation { region, z, w: Some(*w), deviation })
            }
            _ => amb.push(Certificate::BoundaryAmbiguous { region, z, w: *w, deviation }),
        }
    }
    (bad, amb, dev_on_torus)
}

fn keep_worst(mut v: Vec<Certificate>) -> Vec<Certificate> {
    // stable sort keeps sample order among equal deviations
    v.sort_by(|a, b| b.deviation().total_cmp(&a.deviation()));
    v.truncate(MAX_CERTIFICATES);
    v
}

/// Check every root of every sampled fiber against the inner toral trichotomy.
pub(crate) fn sample_fibers(q: &FloatPoly, cfg: &SamplerConfig, tol: f64) -> Sampling {
    let mut points: Vec<(C64, SampleRegion)> =
        torus_points(cfg.n_torus_samples, cfg.seed).into_iter().map(|z| (z, SampleRegion::Torus)).collect();
    points.extend(disk_points(cfg.n_disk_samples, cfg.seed).into_iter().map(|z| (z, SampleRegion::Disk)));
    let results = map_indexed(points.len(), |i| check_fiber(q, points[i].0, points[i].1, tol));
    let mut out = Sampling { samples_used: points.len(), ..Default::default() };
    let mut bad = Vec::new();
    let mut amb = Vec::new();
    for (b, a, d) in results {
        out.max_torus_deviation = out.max_torus_deviation.max(d);
        bad.extend(b);
        amb.extend(a);
    }
    out.violation_count = bad.len();
    out.ambiguous_count = amb.len();
    out.violations = keep_worst(bad);
    out.ambiguous = keep_worst(amb);
    out
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Torality {
    /// Algebraic answer: `gcd(sf, reverse(sf))` is nonconstant.
    pub toral: bool,
    pub evidence: ExactPoly,
    /// Torus points found on 64 sampled fibers in each variable.
    pub torus_points_found: usize,
    /// Whether the sampled cross-check agrees with the algebraic answer.
    pub consistent: bool,
}

impl Torality {
    pub fn verdict(&self) -> Verdict {
        match (self.consistent, self.toral) {
            (false, _) => Verdict::Inconclusive,
            (true, true) => Verdict::Yes,
            (true, false) => Verdict::No,
        }
    }
}

const TORAL_FIBERS: usize = 64;
const TORAL_TOL: f64 = 1e-6;

/// Decide whether `Z_q ∩ T²` is infinite, via the gcd of the square-free part
/// with its reversal, cross-checked by counting torus roots on sampled fibers
/// in both variables.
pub fn is_toral(q: &ExactPoly) -> Result<Torality> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("is_toral"));
    }
    let sf = squarefree_part(q)?;
    let g = crate::bipoly::gcd_bivariate(&sf, &sf.reversed())?;
    let toral = !g.is_constant();
    let f = sf.to_float();
    let fs = f.swap();
    let pts = torus_points(TORAL_FIBERS, 0x7031);
    let counts = map_indexed(2 * TORAL_FIBERS, |i| {
        let (poly, z) = if i < TORAL_FIBERS { (&f, pts[i]) } else { (&fs, pts[i - TORAL_FIBERS]) };
        match fiber_profile(poly, z, TORAL_TOL) {
            Ok(p) => p.roots.iter().filter(|w| (w.norm() - 1.0).abs() <= TORAL_TOL).count(),
            // identically zero fiber: a whole circle of torus points
            Err(_) => 1,
        }
    });
    let found: usize = counts.iter().sum();
    Ok(Torality { toral, evidence: g, torus_points_found: found, consistent: (found > 0) == toral })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    /// `μ` with `reverse(sf) = μ·sf` for the square-free part `sf`.
    pub is_self_inversive: Option<C64>,
    pub toral: bool,
    pub toral_consistent: bool,
    pub toral_evidence: ExactPoly,
    pub inner_toral: Verdict,
    pub certificates: Vec<Certificate>,
    pub violation_count: usize,
    pub ambiguous_count: usize,
    pub linear_factors: Vec<LinearFactor>,
    pub max_torus_deviation: f64,
    pub samples_used: usize,
    pub tol: f64,
}

/// Decide whether `q` is inner toral.
///
/// Any single-variable factor, or a square-free part that is not
/// self-inversive, gives `No` outright. Otherwise fibers over sampled circle
/// points must have all roots on the circle and fibers over sampled disk
/// points all roots in the disk; roots in the ambiguous band around the circle
/// give `Inconclusive`.
pub fn classify_inner_toral(q: &ExactPoly, cfg: &SamplerConfig) -> Result<ClassificationReport> {
    cfg.validate()?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("classify_inner_toral"));
    }
    let lf = linear_factors(q);
    let sf = squarefree_part(q)?;
    let mu = sf.self_inversive_constant();
    let torality = is_toral(q)?;
    let sampling = sample_fibers(&sf.to_float(), cfg, cfg.tol);

    let mut certificates = Vec::new();
    for f in &lf.factors {
        certificates.push(Certificate::LinearFactor { factor: f.clone() });
    }
    if mu.is_none() {
        let residual = sf.to_float().self_inversive_fit().map_or(f64::INFINITY, |(_, r)| r);
        certificates.push(Certificate::NotSelfInversive { residual });
    }
    let verdict = if !certificates.is_empty() || sampling.violation_count > 0 {
        Verdict::No
    } else if sampling.ambiguous_count > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Yes
    };
    certificates.extend(sampling.violations.iter().cloned());
    certificates.extend(sampling.ambiguous.iter().cloned());
    Ok(ClassificationReport {
        is_self_inversive: mu.map(|m| m.to_c64()),
        toral: torality.toral,
        toral_consistent: torality.consistent,
        toral_evidence: torality.evidence,
        inner_toral: verdict,
        certificates,
        violation_count: sampling.violation_count,
        ambiguous_count: sampling.ambiguous_count,
        linear_factors: lf.factors,
        max_torus_deviation: sampling.max_torus_deviation,
        samples_used: sampling.samples_used,
        tol: cfg.tol,
    })
}

/// Classification of a polynomial known only approximately: self-inversive
/// up to `si_tol` relative, fibers judged with tolerance `tol`.
pub(crate) fn classify_approx(f: &FloatPoly, cfg: &SamplerConfig, tol: f64, si_tol: f64) -> (Verdict, Vec<Certificate>) {
    let residual = f.self_inversive_fit().map_or(f64::INFINITY, |(_, r)| r);
    if residual > si_tol {
        return (Verdict::No, vec![Certificate::NotSelfInversive { residual }]);
    }
    let s = sample_fibers(f, cfg, tol);
    let verdict = if s.violation_count > 0 {
        Verdict::No
    } else if s.ambiguous_count > 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Yes
    };
    let mut certs = s.violations;
    certs.extend(s.ambiguous);
    (verdict, certs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;

    fn p(s: &str) -> ExactPoly {
        parse_int_poly(s).unwrap()
    }

    #[test]
    fn fiber_profiles() {
        let neil = p("z^3 - w^2").to_float();
        let prof = fiber_profile(&neil, C64::from_polar(1.0, 0.3), 1e-9).unwrap();
        assert_eq!(prof.location_labels, vec![Location::Torus; 2]);

        let prof = fiber_profile(&p("1 - zw").to_float(), C64::new(0.5, 0.0), 1e-9).unwrap();
        assert_eq!(prof.location_labels, vec![Location::Exterior]);
        assert!((prof.roots[0] - C64::new(2.0, 0.0)).norm() < 1e-14);

        let prof = fiber_profile(&neil, C64::new(0.25, 0.0), 1e-9).unwrap();
        assert_eq!(prof.location_labels, vec![Location::Disk; 2]);
        for w in prof.roots {
            assert!((w.norm() - 0.125).abs() < 1e-14);
        }

        let prof = fiber_profile(&p("1 - zw").to_float(), C64::new(0.0, 0.0), 1e-9).unwrap();
        assert_eq!(prof.degree_drop, 1);
        assert!(prof.roots.is_empty());

        let line = (&p("z - 1") * &p("w")).to_float();
        assert!(matches!(fiber_profile(&line, C64::new(1.0, 0.0), 1e-9), Err(Error::VerticalLine { .. })));
    }

    #[test]
    fn location_band() {
        assert_eq!(Location::of(C64::new(1.0 + 5e-10, 0.0), 1e-9), Location::Torus);
        assert_eq!(Location::of(C64::new(1.0 + 5e-9, 0.0), 1e-9), Location::BoundaryAmbiguous);
        assert_eq!(Location::of(C64::new(1.0 - 5e-8, 0.0), 1e-9), Location::Disk);
    }

    #[test]
    fn torality_examples() {
        let t = is_toral(&p("z - w")).unwrap();
        assert!(t.toral && t.consistent);
        assert!(t.evidence.eq_up_to_scalar(&p("z - w")));
        let t = is_toral(&p("1 - zw")).unwrap();
        assert!(t.toral && t.consistent);
        let t = is_toral(&p("z^2 - 2w^2")).unwrap();
        assert!(!t.toral && t.consistent);
        let t = is_toral(&p("z - 1")).unwrap();
        assert!(t.toral && t.consistent);
    }

    #[test]
    fn classification_examples() {
        let cfg = SamplerConfig::default();
        for (s, v) in [("z - w", Verdict::Yes), ("z^3 - w^2", Verdict::Yes), ("1 - zw", Verdict::No), ("z^2 - 2w^2", Verdict::No), ("z^2 - w^2", Verdict::Yes)] {
            let r = classify_inner_toral(&p(s), &cfg).unwrap();
            assert_eq!(r.inner_toral, v, "{s}");
        }
        let r = classify_inner_toral(&p("1 - zw"), &cfg).unwrap();
        assert!(r.certificates.iter().any(|c| matches!(c, Certificate::FiberViolation { region: SampleRegion::Disk, .. })));
        let r = classify_inner_toral(&(&p("z - 2") * &p("z - w")), &cfg).unwrap();
        assert_eq!(r.inner_toral, Verdict::No);
        assert!(matches!(r.certificates[0], Certificate::LinearFactor { .. }));
    }

    #[test]
    fn yes_verdicts_have_no_violations() {
        let r = classify_inner_toral(&p("z^3 - w^2"), &SamplerConfig::default()).unwrap();
        assert_eq!(r.violation_count, 0);
        assert!(r.is_self_inversive.is_some());
        assert!(r.max_torus_deviation < 1e-12);
    }
}
