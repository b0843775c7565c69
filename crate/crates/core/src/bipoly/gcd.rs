use crate::det::bareiss_det;
use crate::error::{Error, Result};
use crate::scalar::ExactComplex;

use super::{BiPoly, ExactPoly, UniPoly};

type ZPoly = UniPoly<ExactComplex>;

fn top(v: &[ZPoly]) -> Option<usize> {
    v.iter().rposition(|c| !c.is_zero())
}

fn trim(mut v: Vec<ZPoly>) -> Vec<ZPoly> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

/// Monic gcd of all coefficient polynomials.
fn content(v: &[ZPoly]) -> ZPoly {
    v.iter().fold(ZPoly::zero(), |acc, c| acc.gcd(c))
}

fn divide_all(v: &[ZPoly], d: &ZPoly) -> Vec<ZPoly> {
    v.iter().map(|c| c.div_exact(d).expect("content divides every coefficient")).collect()
}

/// Pseudo-remainder `lc(b)^(deg a − deg b + 1)·a mod b`.
fn prem(a: &[ZPoly], b: &[ZPoly]) -> Vec<ZPoly> {
    let db = top(b).expect("nonzero divisor");
    let lc = &b[db];
    let mut r = a.to_vec();
    let mut e = match top(a) {
        Some(da) if da >= db => da - db + 1,
        _ => 0,
    };
    while let Some(dr) = top(&r) {
        if dr < db {
            break;
        }
        let t = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = &*c * lc;
        }
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[shift + i] = &r[shift + i] - &(&t * bc);
        }
        e = e.saturating_sub(1);
    }
    let scale = lc.pow(e as u32);
    trim(r.iter().map(|c| c * &scale).collect())
}

/// Primitive gcd (in w) of two polynomials with positive w-degree, via the
/// subresultant remainder sequence over `Q(i)[z]`.
fn primitive_gcd(a: Vec<ZPoly>, b: Vec<ZPoly>) -> Vec<ZPoly> {
    let (mut a, mut b) = if top(&a) >= top(&b) { (a, b) } else { (b, a) };
    let mut g = ZPoly::one();
    let mut h = ZPoly::one();
    loop {
        let delta = top(&a).unwrap() - top(&b).unwrap();
        let r = prem(&a, &b);
        match top(&r) {
            None => {
                let c = content(&b);
                return divide_all(&b, &c);
            }
            Some(0) => return vec![ZPoly::one()],
            Some(_) => {}
        }
        let divisor = &g * &h.pow(delta as u32);
        a = b;
        b = divide_all(&r, &divisor);
        g = a[top(&a).unwrap()].clone();
        if delta > 0 {
            let num = g.pow(delta as u32);
            h = num.div_exact(&h.pow(delta as u32 - 1)).expect("subresultant division is exact");
        }
    }
}

/// Greatest common divisor of two exact bivariate polynomials, normalized so
/// that the first nonzero coefficient (grid-lexicographic) is 1.
pub fn gcd_bivariate(p: &ExactPoly, q: &ExactPoly) -> Result<ExactPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::UndefinedGcd);
    }
    if p.is_zero() {
        return Ok(q.normalize());
    }
    if q.is_zero() {
        return Ok(p.normalize());
    }
    let (pw, qw) = (p.w_coeffs(), q.w_coeffs());
    let (cp, cq) = (content(&pw), content(&qw));
    let c = cp.gcd(&cq);
    let pp = if pw.len() > 1 && qw.len() > 1 {
        primitive_gcd(divide_all(&pw, &cp), divide_all(&qw, &cq))
    } else {
        vec![ZPoly::one()]
    };
    let g = &BiPoly::from_z_poly(&c) * &BiPoly::from_w_coeffs(&pp);
    Ok(g.normalize())
}

/// Product of the distinct irreducible factors of `q`, computed as
/// `q / gcd(q, ∂q/∂z, ∂q/∂w)` and normalized.
pub fn squarefree_part(q: &ExactPoly) -> Result<ExactPoly> {
    if q.is_zero() {
        return Err(Error::ZeroPolynomial("squarefree_part"));
    }
    let g = gcd_bivariate(q, &q.dz())?;
    let g = gcd_bivariate(&g, &q.dw())?;
    Ok(q.div_exact(&g).expect("gcd divides its argument").normalize())
}

/// Sylvester matrix in w, as rows. Column `i < deg_w q` holds the ascending
/// w-coefficients of `w^i·p`, the remaining columns those of `w^i·q`.
fn sylvester(p: &[ZPoly], q: &[ZPoly]) -> Vec<Vec<ZPoly>> {
    let (dp, dq) = (p.len() - 1, q.len() - 1);
    let size = dp + dq;
    let mut rows = vec![vec![ZPoly::zero(); size]; size];
    for i in 0..dq {
        for (t, c) in p.iter().enumerate() {
            rows[i + t][i] = c.clone();
        }
    }
    for i in 0..dp {
        for (t, c) in q.iter().enumerate() {
            rows[i + t][dq + i] = c.clone();
        }
    }
    rows
}

/// Resultant of `p` and `q` with respect to w.
pub fn resultant_w(p: &ExactPoly, q: &ExactPoly) -> Result<ZPoly> {
    if p.deg_w() == 0 || q.deg_w() == 0 || p.is_zero() || q.is_zero() {
        return Err(Error::ZeroWDegree);
    }
    Ok(bareiss_det(sylvester(&p.w_coeffs(), &q.w_coeffs())))
}

/// Polynomials with `a·q1 + b·p = c`, where `c` depends on z only.
#[derive(Clone, Debug, PartialEq)]
pub struct Bezout {
    pub a: ExactPoly,
    pub b: ExactPoly,
    pub c: ZPoly,
}

/// Solve `A·q1 + B·p = C(z)` with `deg_w A < deg_w p` and `deg_w B < deg_w q1`;
/// `C` is the resultant in w. The cofactors come from Cramer's rule on the
/// Sylvester system, so every coefficient is a polynomial in z.
pub fn bezout_resultant(q1: &ExactPoly, p: &ExactPoly) -> Result<Bezout> {
    if q1.is_zero() || p.is_zero() {
        return Err(Error::ZeroPolynomial("bezout_resultant"));
    }
    let g = gcd_bivariate(q1, p)?;
    if !g.is_constant() {
        return Err(Error::NonCoprime { common: g.to_string() });
    }
    match (q1.deg_w(), p.deg_w()) {
        (0, 0) => return Err(Error::ZeroWDegree),
        (0, _) => {
            let c = q1.w_coeffs().remove(0);
            return Ok(Bezout { a: BiPoly::one(), b: BiPoly::zero(), c });
        }
        (_, 0) => {
            let c = p.w_coeffs().remove(0);
            return Ok(Bezout { a: BiPoly::zero(), b: BiPoly::one(), c });
        }
        _ => {}
    }
    let s = sylvester(&q1.w_coeffs(), &p.w_coeffs());
    let size = s.len();
    let c = bareiss_det(s.clone());
    let cofactor = |col: usize| {
        let mut m = s.clone();
        for (r, row) in m.iter_mut().enumerate() {
            row[col] = if r == 0 { ZPoly::one() } else { ZPoly::zero() };
        }
        bareiss_det(m)
    };
    let x: Vec<ZPoly> = (0..size).map(cofactor).collect();
    let dp = p.deg_w();
    let a = BiPoly::from_w_coeffs(&x[..dp]);
    let b = BiPoly::from_w_coeffs(&x[dp..]);
    Ok(Bezout { a, b, c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;

    fn p(s: &str) -> ExactPoly {
        parse_int_poly(s).unwrap()
    }

    fn z_poly(v: &[i64]) -> ZPoly {
        UniPoly::new(v.iter().map(|&c| ExactComplex::from_ints(c, 0)).collect())
    }

    #[test]
    fn gcd_examples() {
        assert!(gcd_bivariate(&p("z^2 - w^2"), &p("z - w")).unwrap().eq_up_to_scalar(&p("z - w")));
        assert!(gcd_bivariate(&p("z^3 - w^2"), &p("1 - zw")).unwrap().is_constant());
        let a = &p("z - w").pow(2) * &p("z + w");
        let b = &p("z - w") * &p("1 - zw");
        assert!(gcd_bivariate(&a, &b).unwrap().eq_up_to_scalar(&p("z - w")));
        assert_eq!(gcd_bivariate(&BiPoly::zero(), &BiPoly::zero()), Err(Error::UndefinedGcd));
    }

    #[test]
    fn gcd_with_content() {
        let a = &p("z - 1") * &p("z^3 - w^2");
        let b = &p("z - 1") * &p("w + 2");
        assert!(gcd_bivariate(&a, &b).unwrap().eq_up_to_scalar(&p("z - 1")));
    }

    #[test]
    fn squarefree_examples() {
        let q = &p("z - w").pow(2) * &p("z + w");
        assert!(squarefree_part(&q).unwrap().eq_up_to_scalar(&p("z^2 - w^2")));
        assert!(squarefree_part(&p("z^3 - w^2")).unwrap().eq_up_to_scalar(&p("z^3 - w^2")));
        assert!(squarefree_part(&p("1 - zw").pow(3)).unwrap().eq_up_to_scalar(&p("1 - zw")));
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant_w(&p("z - w"), &p("z + w")).unwrap(), z_poly(&[0, 2]));
        assert_eq!(resultant_w(&p("z^3 - w^2"), &p("w")).unwrap(), z_poly(&[0, 0, 0, 1]));
        assert!(resultant_w(&p("z^3 - w^2"), &p("z^3 - w^2")).unwrap().is_zero());
        assert_eq!(resultant_w(&p("z"), &p("w")), Err(Error::ZeroWDegree));
    }

    #[test]
    fn bezout_examples() {
        let r = bezout_resultant(&p("z - w"), &p("z + w")).unwrap();
        assert_eq!((r.a.clone(), r.b.clone(), r.c.clone()), (p("1"), p("1"), z_poly(&[0, 2])));

        let (q1, q2) = (p("z - w"), p("zw - 1"));
        let r = bezout_resultant(&q1, &q2).unwrap();
        let lhs = &(&r.a * &q1) + &(&r.b * &q2);
        assert_eq!(lhs, BiPoly::from_z_poly(&r.c));
        // substituting w = z into zw - 1 gives the resultant up to sign
        assert_eq!(r.c.monic(), z_poly(&[-1, 0, 1]));

        assert!(matches!(bezout_resultant(&q1, &q1), Err(Error::NonCoprime { .. })));
    }
}
