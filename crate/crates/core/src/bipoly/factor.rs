use serde::Serialize;

use crate::scalar::{ExactComplex, Scalar, C64};

use super::{roots, BiPoly, ExactPoly, UniPoly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Z,
    W,
}

/// A factor `(axis − ζ)^multiplicity` of a bivariate polynomial.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LinearFactor {
    pub axis: Axis,
    pub zeta: [f64; 2],
    /// `ζ` as an exact Gaussian rational, when it is one.
    #[serde(skip)]
    pub zeta_exact: Option<ExactComplex>,
    pub multiplicity: u32,
}

impl LinearFactor {
    pub fn zeta(&self) -> C64 {
        C64::new(self.zeta[0], self.zeta[1])
    }

    /// e.g. `z=1` or `w=0.5+0.25i`.
    pub fn describe(&self) -> String {
        let var = match self.axis {
            Axis::Z => "z",
            Axis::W => "w",
        };
        let value = match &self.zeta_exact {
            Some(e) => e.to_string(),
            None => {
                let z = self.zeta();
                if z.im == 0.0 {
                    format!("{}", z.re)
                } else {
                    format!("{}{:+}i", z.re, z.im)
                }
            }
        };
        format!("{var}={value}")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactors {
    pub factors: Vec<LinearFactor>,
    /// `q` divided by the monic univariate contents holding the factors.
    pub cofactor: ExactPoly,
}

/// Factors of `q` that depend on a single variable. Their roots are exactly
/// the points `ζ` where a fiber `q(ζ, ·)` (or `q(·, ζ)`) vanishes identically.
pub fn linear_factors(q: &ExactPoly) -> LinearFactors {
    if q.is_zero() {
        return LinearFactors { factors: Vec::new(), cofactor: BiPoly::zero() };
    }
    let cz = q.w_coeffs().iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c));
    let cw = q.z_coeffs().iter().fold(UniPoly::zero(), |acc, c| acc.gcd(c));
    let mut factors = Vec::new();
    for (axis, content) in [(Axis::Z, &cz), (Axis::W, &cw)] {
        for (piece, mult) in content.squarefree_decomposition() {
            for zeta in piece_roots(&piece) {
                let (approx, exact) = zeta;
                factors.push(LinearFactor { axis, zeta: [approx.re, approx.im], zeta_exact: exact, multiplicity: mult });
            }
        }
    }
    let divisor = &BiPoly::from_z_poly(&cz) * &BiPoly::from_w_poly(&cw);
    let cofactor = q.div_exact(&divisor).expect("contents divide the polynomial");
    LinearFactors { factors, cofactor }
}

/// Roots of a square-free exact polynomial; exact values are reported when a
/// small-denominator rationalization verifies.
fn piece_roots(f: &UniPoly<ExactComplex>) -> Vec<(C64, Option<ExactComplex>)> {
    if f.degree() == Some(1) {
        let r = -(f.coeff(0) / f.coeff(1));
        return vec![(r.to_c64(), Some(r))];
    }
    let found = roots(&f.to_float(), 1e-14).map(|r| r.roots).unwrap_or_default();
    found
        .into_iter()
        .map(|r| {
            let exact = ExactComplex::rationalize(r, 1_000_000, 1e-9)
                .filter(|e| Scalar::is_zero(&f.eval(e)));
            (exact.as_ref().map_or(r, |e| e.to_c64()), exact)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bipoly::parse_int_poly;

    fn p(s: &str) -> ExactPoly {
        parse_int_poly(s).unwrap()
    }

    #[test]
    fn vertical_line_factor() {
        let q = &p("z - 1") * &p("z^3 - w^2");
        let lf = linear_factors(&q);
        assert_eq!(lf.factors.len(), 1);
        assert_eq!(lf.factors[0].axis, Axis::Z);
        assert_eq!(lf.factors[0].zeta_exact, Some(ExactComplex::from_ints(1, 0)));
        assert_eq!(lf.factors[0].multiplicity, 1);
        assert_eq!(lf.cofactor, p("z^3 - w^2"));
        assert_eq!(lf.factors[0].describe(), "z=1");
    }

    #[test]
    fn no_linear_factor() {
        let lf = linear_factors(&p("z^3 - w^2"));
        assert!(lf.factors.is_empty());
        assert_eq!(lf.cofactor, p("z^3 - w^2"));
    }

    #[test]
    fn repeated_horizontal_factor() {
        let i = ExactComplex::i();
        let line = BiPoly::from_terms(&[(ExactComplex::from_ints(1, 0), 0, 1), (-i.clone(), 0, 0)]);
        let lf = linear_factors(&line.pow(2));
        assert_eq!(lf.factors.len(), 1);
        assert_eq!(lf.factors[0].axis, Axis::W);
        assert_eq!(lf.factors[0].zeta_exact, Some(i));
        assert_eq!(lf.factors[0].multiplicity, 2);
        assert!(lf.cofactor.is_constant());
    }

    #[test]
    fn irrational_roots_are_reported_numerically() {
        let lf = linear_factors(&(&p("z^2 - 2") * &p("z - w")));
        assert_eq!(lf.factors.len(), 2);
        for f in &lf.factors {
            assert!(f.zeta_exact.is_none());
            assert!((f.zeta().norm() - 2f64.sqrt()).abs() < 1e-12);
        }
    }
}
