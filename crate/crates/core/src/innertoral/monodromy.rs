//! Grouping of w-branches into irreducible factors by monodromy.
//!
//! Branches over a base point are continued around a loop enclosing each
//! critical value (zeros of the discriminant and of the leading coefficient in
//! w) and around one large circle. The orbits of the resulting permutations
//! are the branch sets of the irreducible factors.

use rand::Rng;

use crate::bipoly::{resultant_w, roots, BiPoly, ExactPoly, FloatPoly, UniPoly};
use crate::error::{Error, Result};
use crate::parallel::{map_indexed, rng_for};
use crate::scalar::C64;

use super::SamplerConfig;

const ATTEMPTS: u64 = 3;
const MIN_STEP: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct Monodromy {
    /// The polynomial whose branches were tracked (z-content removed,
    /// normalized).
    pub poly: FloatPoly,
    pub critical_values: Vec<C64>,
    pub base: C64,
    pub base_roots: Vec<C64>,
    /// Branch indices (into `base_roots`) grouped by orbit, each sorted, the
    /// list ordered by smallest member.
    pub orbits: Vec<Vec<usize>>,
}

impl Monodromy {
    pub fn orbit_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self.orbits.iter().map(|o| o.len()).collect();
        s.sort_unstable();
        s
    }
}

/// w-degrees of the irreducible factors of a square-free polynomial, sorted
/// ascending. Factors depending on z alone carry no w-branches and are not
/// listed.
pub fn monodromy_factor_degrees(q: &ExactPoly, cfg: &SamplerConfig) -> Result<Vec<usize>> {
    Ok(monodromy_orbits(q, cfg)?.orbit_sizes())
}

fn strip_z_content(q: &ExactPoly) -> ExactPoly {
    let cz = q.w_coeffs().iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c));
    q.div_exact(&BiPoly::from_z_poly(&cz)).expect("content divides").normalize()
}

fn critical_values(q: &ExactPoly) -> Result<Vec<C64>> {
    let disc = resultant_w(q, &q.dw())?;
    if disc.is_zero() {
        return Err(Error::IllConditionedMonodromy("polynomial is not square-free".into()));
    }
    let both = &disc * &q.lead_w();
    let sf = both.squarefree_part();
    if sf.is_constant() {
        return Ok(Vec::new());
    }
    Ok(roots(&sf.to_float(), 1e-14)?.roots)
}

pub fn monodromy_orbits(q: &ExactPoly, cfg: &SamplerConfig) -> Result<Monodromy> {
    cfg.validate()?;
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("monodromy_factor_degrees"));
    }
    let q = strip_z_content(q);
    let m = q.deg_w();
    let poly = q.to_float().normalize();
    if m <= 1 {
        let base = C64::new(0.5, 0.5);
        let base_roots = if m == 1 { roots(&poly.fiber(&base), 1e-14)?.roots } else { Vec::new() };
        let orbits = (0..m).map(|i| vec![i]).collect();
        return Ok(Monodromy { poly, critical_values: Vec::new(), base, base_roots, orbits });
    }
    let crit = critical_values(&q)?;
    let center = if crit.is_empty() { C64::new(0.0, 0.0) } else { crit.iter().sum::<C64>() / crit.len() as f64 };
    let radius = crit.iter().map(|c| (c - center).norm()).fold(0.0, f64::max) + 1.0;
    let tracker = Tracker::new(&poly);
    let mut last_err = String::new();
    for attempt in 0..ATTEMPTS {
        let phi: f64 = rng_for(cfg.seed, attempt).random::<f64>() * std::f64::consts::TAU;
        let base = center + C64::from_polar(radius, phi);
        let base_roots = roots(&poly.fiber(&base), 1e-14)?.roots;
        if base_roots.len() != m || min_separation(&base_roots) < 1e-8 {
            last_err = "degenerate fiber at the base point".into();
            continue;
        }
        let mut loops: Vec<Vec<C64>> = crit.iter().map(|&c| lollipop(base, c, loop_radius(c, &crit), cfg.monodromy_loop_points)).collect();
        loops.push(circle(center, base, cfg.monodromy_loop_points));
        let perms = map_indexed(loops.len(), |i| {
            tracker.track(&loops[i], &base_roots).and_then(|end| match_roots(&base_roots, &end))
        });
        if perms.iter().any(|p| p.is_none()) {
            last_err = format!("path tracking failed near a critical value (attempt {})", attempt + 1);
            continue;
        }
        let orbits = orbits_of(m, perms.iter().flatten());
        return Ok(Monodromy { poly, critical_values: crit, base, base_roots, orbits });
    }
    Err(Error::IllConditionedMonodromy(last_err))
}

fn loop_radius(c: C64, crit: &[C64]) -> f64 {
    let nearest = crit.iter().filter(|&&d| d != c).map(|d| (d - c).norm()).fold(f64::INFINITY, f64::min);
    if nearest.is_finite() {
        0.5 * nearest
    } else {
        1.0
    }
}

/// Straight tail from `base` to the circle of radius `r` about `c`, once
/// around counterclockwise, and back.
fn lollipop(base: C64, c: C64, r: f64, points: usize) -> Vec<C64> {
    let dir = (base - c) / (base - c).norm();
    let anchor = c + dir * r;
    let alpha = dir.arg();
    let mut nodes = vec![base, anchor];
    for t in 1..=points {
        let theta = alpha + std::f64::consts::TAU * t as f64 / points as f64;
        nodes.push(c + C64::from_polar(r, theta));
    }
    *nodes.last_mut().unwrap() = anchor;
    nodes.push(base);
    nodes
}

fn circle(center: C64, base: C64, points: usize) -> Vec<C64> {
    let r = (base - center).norm();
    let alpha = (base - center).arg();
    let mut nodes: Vec<C64> =
        (0..=points).map(|t| center + C64::from_polar(r, alpha + std::f64::consts::TAU * t as f64 / points as f64)).collect();
    nodes[0] = base;
    *nodes.last_mut().unwrap() = base;
    nodes
}

pub(crate) fn min_separation(ws: &[C64]) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..ws.len() {
        for j in i + 1..ws.len() {
            best = best.min((ws[i] - ws[j]).norm());
        }
    }
    best
}

/// Permutation sending start index `i` to the index of the start root nearest
/// to where branch `i` ended.
fn match_roots(start: &[C64], end: &[C64]) -> Option<Vec<usize>> {
    let sep = min_separation(start);
    let mut perm = Vec::with_capacity(start.len());
    let mut used = vec![false; start.len()];
    for e in end {
        let (j, d) = start
            .iter()
            .enumerate()
            .map(|(j, s)| (j, (s - e).norm()))
            .min_by(|a, b| a.1.total_cmp(&b.1))?;
        if used[j] || d > 0.25 * sep {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    Some(perm)
}

fn orbits_of<'a>(m: usize, perms: impl Iterator<Item = &'a Vec<usize>>) -> Vec<Vec<usize>> {
    let mut parent: Vec<usize> = (0..m).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let next = p[y];
            p[y] = r;
            y = next;
        }
        r
    }
    for perm in perms {
        for (i, &j) in perm.iter().enumerate() {
            let (a, b) = (find(&mut parent, i), find(&mut parent, j));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = vec![usize::MAX; m];
    for i in 0..m {
        let r = find(&mut parent, i);
        if root_slot[r] == usize::MAX {
            root_slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[root_slot[r]].push(i);
    }
    groups
}

/// Predictor-corrector continuation of all roots of `q(z, ·)` along a
/// polyline in z.
pub(crate) struct Tracker {
    q: FloatPoly,
    qz: FloatPoly,
    qw: FloatPoly,
}

impl Tracker {
    pub(crate) fn new(q: &FloatPoly) -> Self {
        Self { q: q.clone(), qz: q.dz(), qw: q.dw() }
    }

    /// Roots at the end of the path, or `None` if the step size collapsed.
    pub(crate) fn track(&self, nodes: &[C64], start: &[C64]) -> Option<Vec<C64>> {
        let mut w = start.to_vec();
        for seg in nodes.windows(2) {
            w = self.track_segment(seg[0], seg[1], w)?;
        }
        Some(w)
    }

    /// Continue along a polyline and report the roots at every node.
    pub(crate) fn track_recording(&self, nodes: &[C64], start: &[C64]) -> Option<Vec<Vec<C64>>> {
        let mut w = start.to_vec();
        let mut out = vec![w.clone()];
        for seg in nodes.windows(2) {
            w = self.track_segment(seg[0], seg[1], w)?;
            out.push(w.clone());
        }
        Some(out)
    }

    fn track_segment(&self, za: C64, zb: C64, mut w: Vec<C64>) -> Option<Vec<C64>> {
        let mut s = 0.0;
        let mut h: f64 = 1.0;
        while s < 1.0 {
            let step = h.min(1.0 - s);
            let z0 = za + (zb - za) * s;
            let z1 = za + (zb - za) * (s + step);
            match self.step(z0, z1, &w) {
                Some(next) => {
                    w = next;
                    s += step;
                    h = (h * 2.0).min(1.0);
                }
                None => {
                    h *= 0.5;
                    if h < MIN_STEP {
                        return None;
                    }
                }
            }
        }
        Some(w)
    }

    fn step(&self, z0: C64, z1: C64, w: &[C64]) -> Option<Vec<C64>> {
        let dz = z1 - z0;
        let sep = if w.len() > 1 { min_separation(w) } else { 1.0 + w[0].norm() };
        let mut pred = Vec::with_capacity(w.len());
        for &wi in w {
            let qw = self.qw.eval(&z0, &wi);
            if qw.norm() == 0.0 {
                return None;
            }
            let p = wi - dz * self.qz.eval(&z0, &wi) / qw;
            if (p - wi).norm() > 0.3 * sep {
                return None;
            }
            pred.push(p);
        }
        let mut out = Vec::with_capacity(w.len());
        for &p in &pred {
            let c = self.newton(z1, p)?;
            if (c - p).norm() > 0.1 * sep {
                return None;
            }
            out.push(c);
        }
        if out.len() > 1 && min_separation(&out) < 0.5 * sep.min(min_separation(&pred)) {
            return None;
        }
        Some(out)
    }

    fn newton(&self, z: C64, mut w: C64) -> Option<C64> {
        for _ in 0..8 {
            let d = self.qw.eval(&z, &w);
            if d.norm() == 0.0 {
                return None;
            }
            let delta = self.q.eval(&z, &w) / d;
            w -= delta;
            if delta.norm() <= 1e-12 * (1.0 + w.norm()) {
                return Some(w);
            }
        }
        None
    }
}
