use serde::{Deserialize, Serialize};

use crate::bipoly::{roots, FloatPoly};
use crate::parallel::map_indexed;
use crate::scalar::C64;

use super::{disk_points, SamplerConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Region {
    Torus,
    Disk,
}

/// Points of `Z_q` over `n` sample values of z.
///
/// Torus: `z = e^{2πik/n}` and roots with `||w| − 1| ≤ tol`. Disk: quasi-random
/// `z` in the disk and roots with `|w| < 1`. Every point returned satisfies
/// `|q(z, w)| ≤ tol·‖q‖`.
pub fn sample_variety(q: &FloatPoly, region: Region, n: usize, cfg: &SamplerConfig) -> Vec<(C64, C64)> {
    if q.is_zero() || n == 0 {
        return Vec::new();
    }
    let zs: Vec<C64> = match region {
        Region::Torus => (0..n).map(|k| C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / n as f64)).collect(),
        Region::Disk => disk_points(n, cfg.seed),
    };
    let bound = cfg.tol * q.norm();
    let per_sample = map_indexed(zs.len(), |i| {
        let z = zs[i];
        let Ok(r) = roots(&q.fiber(&z), cfg.tol) else {
            return Vec::new();
        };
        r.roots
            .into_iter()
            .filter(|w| match region {
                Region::Torus => (w.norm() - 1.0).abs() <= cfg.tol,
                Region::Disk => w.norm() < 1.0,
            })
            .filter(|w| q.eval(&z, w).norm() <= bound)
            .map(|w| (z, w))
            .collect::<Vec<_>>()
    });
    per_sample.into_iter().flatten().collect()
}
