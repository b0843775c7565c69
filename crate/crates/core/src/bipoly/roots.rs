use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::C64;

use super::UniPoly;

/// Roots of a univariate polynomial together with the number of leading
/// coefficients dropped as numerically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Roots {
    pub roots: Vec<C64>,
    pub degree_drop: usize,
}

/// All roots of `u`, found as eigenvalues of the balanced companion matrix and
/// polished by at most five Newton steps. Leading coefficients below
/// `tol·max|c|` are dropped first.
pub fn roots(u: &UniPoly<C64>, tol: f64) -> Result<Roots> {
    if u.is_zero() {
        return Err(Error::ZeroPolynomial("roots"));
    }
    let scale = u.max_abs();
    let mut c: Vec<C64> = u.coeffs().to_vec();
    let mut degree_drop = 0;
    while c.len() > 1 && c.last().unwrap().norm() < tol * scale {
        c.pop();
        degree_drop += 1;
    }
    let zeros = c.iter().take_while(|x| x.norm() == 0.0).count();
    let core = &c[zeros..];
    let mut out = vec![C64::new(0.0, 0.0); zeros];
    if core.len() > 1 {
        let reduced = UniPoly::new(core.to_vec());
        let mut found = companion_eigenvalues(core);
        for r in found.iter_mut() {
            *r = polish(&reduced, *r);
        }
        out.extend(found);
    }
    Ok(Roots { roots: out, degree_drop })
}

fn companion_eigenvalues(c: &[C64]) -> Vec<C64> {
    let d = c.len() - 1;
    let lead = c[d];
    if d == 1 {
        return vec![-c[0] / lead];
    }
    let mut m = DMatrix::<C64>::zeros(d, d);
    for i in 0..d {
        m[(0, i)] = -c[d - 1 - i] / lead;
    }
    for i in 1..d {
        m[(i, i - 1)] = C64::new(1.0, 0.0);
    }
    balance(&mut m);
    match m.clone().try_schur(f64::EPSILON, 10_000) {
        Some(s) => s.eigenvalues().map(|e| e.iter().copied().collect()).unwrap_or_else(|| durand_kerner(c)),
        None => durand_kerner(c),
    }
}

/// Diagonal similarity scaling so that row and column norms are comparable.
fn balance(m: &mut DMatrix<C64>) {
    let n = m.nrows();
    let radix = 2.0f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut r = 0.0;
            let mut cn = 0.0;
            for j in 0..n {
                if j != i {
                    cn += m[(j, i)].norm();
                    r += m[(i, j)].norm();
                }
            }
            if r == 0.0 || cn == 0.0 {
                continue;
            }
            let s = cn + r;
            let mut f = 1.0;
            let (mut cc, mut rr) = (cn, r);
            while cc < rr / radix {
                cc *= radix;
                rr /= radix;
                f *= radix;
            }
            while cc >= rr * radix {
                cc /= radix;
                rr *= radix;
                f /= radix;
            }
            if (cc + rr) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

/// Weierstrass iteration; used only when the QR iteration fails to converge.
fn durand_kerner(c: &[C64]) -> Vec<C64> {
    let d = c.len() - 1;
    let lead = c[d];
    let monic: Vec<C64> = c.iter().map(|x| x / lead).collect();
    let radius = 1.0 + monic[..d].iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = C64::new(0.4, 0.9);
    let mut z: Vec<C64> = (0..d).map(|k| seed.powu(k as u32) * radius.min(2.0)).collect();
    let eval = |x: C64| monic.iter().rev().fold(C64::new(0.0, 0.0), |a, b| a * x + b);
    for _ in 0..500 {
        let mut change: f64 = 0.0;
        for i in 0..d {
            let mut den = C64::new(1.0, 0.0);
            for j in 0..d {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            change = change.max(step.norm());
        }
        if change < 1e-15 * radius {
            break;
        }
    }
    z
}

fn polish(u: &UniPoly<C64>, mut r: C64) -> C64 {
    let du = u.derivative();
    let mut best = u.eval(&r).norm();
    for _ in 0..5 {
        let d = du.eval(&r);
        if d.norm() == 0.0 || best == 0.0 {
            break;
        }
        let next = r - u.eval(&r) / d;
        let val = u.eval(&next).norm();
        if val < best {
            r = next;
            best = val;
        } else {
            break;
        }
    }
    r
}
