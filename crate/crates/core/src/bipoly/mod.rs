//! Bivariate and univariate polynomial algebra over exact or floating-point
//! complex scalars.
//!
//! A [`BiPoly`] stores its coefficients as a grid: row `j` holds the
//! coefficients of `z^j`, column `k` those of `w^k`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{ExactComplex, Scalar, C64};

mod factor;
mod gcd;
pub mod json;
mod roots;
mod uni;

pub use factor::{linear_factors, Axis, LinearFactor, LinearFactors};
pub use gcd::{bezout_resultant, gcd_bivariate, resultant_w, squarefree_part, Bezout};
pub use roots::{roots, Roots};
pub use uni::UniPoly;

/// Exact bivariate polynomial.
pub type ExactPoly = BiPoly<ExactComplex>;
/// Floating-point bivariate polynomial.
pub type FloatPoly = BiPoly<C64>;

#[derive(Clone, PartialEq)]
pub struct BiPoly<S> {
    coeffs: Vec<Vec<S>>,
}

impl<S: Scalar> BiPoly<S> {
    /// Build from a coefficient grid (rows = powers of z). Ragged rows are
    /// padded with zeros and trailing zero rows/columns trimmed.
    pub fn from_grid(mut grid: Vec<Vec<S>>) -> Self {
        let width = grid.iter().map(|r| r.len()).max().unwrap_or(0);
        for row in &mut grid {
            row.resize(width, S::zero());
        }
        while grid.last().is_some_and(|r| r.iter().all(|c| c.is_zero())) {
            grid.pop();
        }
        if grid.is_empty() {
            return Self::zero();
        }
        let mut m = width;
        while m > 0 && grid.iter().all(|r| r[m - 1].is_zero()) {
            m -= 1;
        }
        for row in &mut grid {
            row.truncate(m);
        }
        Self { coeffs: grid }
    }

    /// Sum of terms `c·z^j·w^k`.
    pub fn from_terms(terms: &[(S, usize, usize)]) -> Self {
        let n = terms.iter().map(|t| t.1).max().unwrap_or(0);
        let m = terms.iter().map(|t| t.2).max().unwrap_or(0);
        let mut grid = vec![vec![S::zero(); m + 1]; n + 1];
        for (c, j, k) in terms {
            grid[*j][*k] = grid[*j][*k].clone() + c.clone();
        }
        Self::from_grid(grid)
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::from_grid(vec![vec![c]])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    pub fn monomial(c: S, j: usize, k: usize) -> Self {
        Self::from_terms(&[(c, j, k)])
    }

    pub fn var_z() -> Self {
        Self::monomial(S::one(), 1, 0)
    }

    pub fn var_w() -> Self {
        Self::monomial(S::one(), 0, 1)
    }

    /// Polynomial in z only.
    pub fn from_z_poly(u: &UniPoly<S>) -> Self {
        Self::from_grid(u.coeffs().iter().map(|c| vec![c.clone()]).collect())
    }

    /// Polynomial in w only.
    pub fn from_w_poly(u: &UniPoly<S>) -> Self {
        Self::from_grid(vec![u.coeffs().to_vec()])
    }

    pub fn grid(&self) -> &[Vec<S>] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize, k: usize) -> S {
        self.coeffs.get(j).and_then(|r| r.get(k)).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.bidegree() == (0, 0)
    }

    /// `(deg_z, deg_w)`; the zero polynomial reports `(0, 0)`.
    pub fn bidegree(&self) -> (usize, usize) {
        match self.coeffs.first() {
            None => (0, 0),
            Some(r) => (self.coeffs.len() - 1, r.len() - 1),
        }
    }

    pub fn deg_z(&self) -> usize {
        self.bidegree().0
    }

    pub fn deg_w(&self) -> usize {
        self.bidegree().1
    }

    /// Nonzero terms as `(j, k, coeff)` in grid-lexicographic order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        self.coeffs.iter().enumerate().flat_map(|(j, row)| {
            row.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (j, k, c))
        })
    }

    pub fn eval(&self, z: &S, w: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, row| acc * z.clone() + horner(row, w))
    }

    /// `w ↦ q(z0, w)`.
    pub fn fiber(&self, z0: &S) -> UniPoly<S> {
        let m = self.deg_w();
        if self.is_zero() {
            return UniPoly::zero();
        }
        UniPoly::new(
            (0..=m)
                .map(|k| self.coeffs.iter().rev().fold(S::zero(), |acc, r| acc * z0.clone() + r[k].clone()))
                .collect(),
        )
    }

    /// `z ↦ q(z, w0)`.
    pub fn fiber_w(&self, w0: &S) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(|r| horner(r, w0)).collect())
    }

    /// Coefficients of `w^k` as polynomials in z.
    pub fn w_coeffs(&self) -> Vec<UniPoly<S>> {
        let m = if self.is_zero() { return Vec::new() } else { self.deg_w() };
        (0..=m).map(|k| UniPoly::new(self.coeffs.iter().map(|r| r[k].clone()).collect())).collect()
    }

    pub fn from_w_coeffs(cs: &[UniPoly<S>]) -> Self {
        let n = cs.iter().map(|c| c.coeffs().len()).max().unwrap_or(0);
        Self::from_grid((0..n).map(|j| cs.iter().map(|c| c.coeff(j)).collect()).collect())
    }

    /// Coefficients of `z^j` as polynomials in w.
    pub fn z_coeffs(&self) -> Vec<UniPoly<S>> {
        self.coeffs.iter().map(|r| UniPoly::new(r.clone())).collect()
    }

    /// Leading coefficient in w, as a polynomial in z.
    pub fn lead_w(&self) -> UniPoly<S> {
        self.w_coeffs().pop().unwrap_or_else(UniPoly::zero)
    }

    pub fn scale(&self, c: &S) -> Self {
        self.map(|a| a.clone() * c.clone())
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> BiPoly<T> {
        BiPoly::from_grid(self.coeffs.iter().map(|r| r.iter().map(&f).collect()).collect())
    }

    pub fn to_float(&self) -> FloatPoly {
        self.map(|c| c.to_c64())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    pub fn dz(&self) -> Self {
        Self::from_grid(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, r)| r.iter().map(|c| c.clone() * S::from_i64(j as i64)).collect())
                .collect(),
        )
    }

    pub fn dw(&self) -> Self {
        Self::from_grid(
            self.coeffs
                .iter()
                .map(|r| {
                    r.iter().enumerate().skip(1).map(|(k, c)| c.clone() * S::from_i64(k as i64)).collect()
                })
                .collect(),
        )
    }

    /// Exchange the roles of z and w.
    pub fn swap(&self) -> Self {
        let (n, m) = self.bidegree();
        if self.is_zero() {
            return Self::zero();
        }
        Self::from_grid((0..=m).map(|k| (0..=n).map(|j| self.coeffs[j][k].clone()).collect()).collect())
    }

    /// Coefficient reversal against `(n, m)`: `b_{jk} = conj(a_{n-j, m-k})`,
    /// i.e. `z^n w^m · conj(q(1/z̄, 1/w̄))`.
    pub fn reverse(&self, against: (usize, usize)) -> Result<Self> {
        let (dn, dm) = self.bidegree();
        let (n, m) = against;
        if !self.is_zero() && (n < dn || m < dm) {
            return Err(Error::BidegreeTooSmall { against_z: n, against_w: m, z: dn, w: dm });
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        Ok(Self::from_grid(
            (0..=n).map(|j| (0..=m).map(|k| self.coeff(n - j, m - k).conj()).collect()).collect(),
        ))
    }

    /// Reversal against the polynomial's own bidegree.
    pub fn reversed(&self) -> Self {
        self.reverse(self.bidegree()).expect("own bidegree is always large enough")
    }

    pub fn max_abs(&self) -> f64 {
        self.terms().map(|(_, _, c)| c.magnitude()).fold(0.0, f64::max)
    }

    /// Euclidean norm of the coefficient vector.
    pub fn norm(&self) -> f64 {
        self.terms().map(|(_, _, c)| c.magnitude().powi(2)).sum::<f64>().sqrt()
    }

    /// Position of the first nonzero coefficient in grid-lexicographic order.
    fn first_nonzero(&self) -> Option<(usize, usize)> {
        self.terms().next().map(|(j, k, _)| (j, k))
    }

    /// Position of the coefficient of largest modulus (first one on ties).
    fn largest(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for (j, k, c) in self.terms() {
            let a = c.magnitude();
            if best.is_none_or(|b| a > b.2) {
                best = Some((j, k, a));
            }
        }
        best.map(|b| (b.0, b.1))
    }

    /// Canonical scalar multiple: exact polynomials get their first nonzero
    /// coefficient set to 1, floating-point ones are divided by their
    /// coefficient of largest modulus.
    pub fn normalize(&self) -> Self {
        let pos = if S::EXACT { self.first_nonzero() } else { self.largest() };
        match pos {
            None => Self::zero(),
            Some((j, k)) => {
                let c = self.coeffs[j][k].clone();
                self.map(|a| a.clone() / c.clone())
            }
        }
    }

    /// The constant `μ` with `reverse(q) = μ·q`, if there is one. Exact
    /// polynomials are compared exactly, floating-point ones to `1e-12`
    /// relative.
    pub fn self_inversive_constant(&self) -> Option<S> {
        if S::EXACT {
            let (j, k) = self.first_nonzero()?;
            let r = self.reversed();
            let mu = r.coeff(j, k) / self.coeff(j, k);
            (r == self.scale(&mu)).then_some(mu)
        } else {
            let (mu, res) = self.self_inversive_fit()?;
            (res <= 1e-12).then_some(mu)
        }
    }

    /// Best `μ` for `reverse(q) ≈ μ·q` and the relative residual
    /// `‖reverse(q) − μq‖ / ‖q‖`.
    pub fn self_inversive_fit(&self) -> Option<(S, f64)> {
        let (j, k) = self.largest()?;
        let r = self.reversed();
        let mu = r.coeff(j, k) / self.coeff(j, k);
        let diff = &r - &self.scale(&mu);
        Some((mu, diff.norm() / self.norm()))
    }
}

impl BiPoly<ExactComplex> {
    /// Exact quotient `self / d`, or `None` if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return Some(Self::zero());
        }
        let dc = d.w_coeffs();
        let dm = dc.len() - 1;
        let lead = &dc[dm];
        let mut r = self.w_coeffs();
        if r.len() < dc.len() {
            return None;
        }
        let mut quot = vec![UniPoly::zero(); r.len() - dm];
        while let Some(top) = r.iter().rposition(|c| !c.is_zero()) {
            if top < dm {
                return None;
            }
            let t = r[top].div_exact(lead)?;
            let shift = top - dm;
            for (i, c) in dc.iter().enumerate() {
                r[shift + i] = &r[shift + i] - &(&t * c);
            }
            quot[shift] = t;
        }
        Some(Self::from_w_coeffs(&quot))
    }

    /// Whether `self = c·other` for some nonzero scalar `c`.
    pub fn eq_up_to_scalar(&self, other: &Self) -> bool {
        self.normalize() == other.normalize()
    }

    /// Exact dyadic conversion of a floating-point polynomial.
    pub fn from_float(q: &FloatPoly) -> Option<Self> {
        let grid: Option<Vec<Vec<ExactComplex>>> = q
            .grid()
            .iter()
            .map(|r| r.iter().map(|c| ExactComplex::from_c64(*c)).collect())
            .collect();
        Some(Self::from_grid(grid?))
    }
}

impl BiPoly<C64> {
    /// Relative distance between the normalized forms of two polynomials,
    /// after aligning phases; small values mean equal up to scalar.
    pub fn distance_up_to_scalar(&self, other: &Self) -> f64 {
        let (a, b) = (self.normalize(), other.normalize());
        let (n1, m1) = a.bidegree();
        let (n2, m2) = b.bidegree();
        let mut worst: f64 = 0.0;
        for j in 0..=n1.max(n2) {
            for k in 0..=m1.max(m2) {
                worst = worst.max((a.coeff(j, k) - b.coeff(j, k)).norm());
            }
        }
        worst
    }
}

fn horner<S: Scalar>(row: &[S], x: &S) -> S {
    row.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
}

impl<'a, S: Scalar> Add<&'a BiPoly<S>> for &'a BiPoly<S> {
    type Output = BiPoly<S>;
    fn add(self, o: &BiPoly<S>) -> BiPoly<S> {
        let (n1, m1) = self.bidegree();
        let (n2, m2) = o.bidegree();
        let (n, m) = (n1.max(n2), m1.max(m2));
        BiPoly::from_grid((0..=n).map(|j| (0..=m).map(|k| self.coeff(j, k) + o.coeff(j, k)).collect()).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a BiPoly<S>> for &'a BiPoly<S> {
    type Output = BiPoly<S>;
    fn sub(self, o: &BiPoly<S>) -> BiPoly<S> {
        let (n1, m1) = self.bidegree();
        let (n2, m2) = o.bidegree();
        let (n, m) = (n1.max(n2), m1.max(m2));
        BiPoly::from_grid((0..=n).map(|j| (0..=m).map(|k| self.coeff(j, k) - o.coeff(j, k)).collect()).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a BiPoly<S>> for &'a BiPoly<S> {
    type Output = BiPoly<S>;
    fn mul(self, o: &BiPoly<S>) -> BiPoly<S> {
        if self.is_zero() || o.is_zero() {
            return BiPoly::zero();
        }
        let (n1, m1) = self.bidegree();
        let (n2, m2) = o.bidegree();
        let mut grid = vec![vec![S::zero(); m1 + m2 + 1]; n1 + n2 + 1];
        for (j1, k1, a) in self.terms() {
            for (j2, k2, b) in o.terms() {
                let cell = &mut grid[j1 + j2][k1 + k2];
                *cell = cell.clone() + a.clone() * b.clone();
            }
        }
        BiPoly::from_grid(grid)
    }
}

impl<S: Scalar> Neg for &BiPoly<S> {
    type Output = BiPoly<S>;
    fn neg(self) -> BiPoly<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Add for BiPoly<S> {
    type Output = BiPoly<S>;
    fn add(self, o: Self) -> Self {
        &self + &o
    }
}

impl<S: Scalar> Sub for BiPoly<S> {
    type Output = BiPoly<S>;
    fn sub(self, o: Self) -> Self {
        &self - &o
    }
}

impl<S: Scalar> Mul for BiPoly<S> {
    type Output = BiPoly<S>;
    fn mul(self, o: Self) -> Self {
        &self * &o
    }
}

impl<S: Scalar + fmt::Debug> fmt::Debug for BiPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiPoly[")?;
        for (i, (j, k, c)) in self.terms().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c:?}·z^{j}w^{k}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Display for BiPoly<ExactComplex> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(f, self.terms().map(|(j, k, c)| (j, k, c.to_string(), c.im.is_zero() && c.re.is_negative())))
    }
}

impl fmt::Display for BiPoly<C64> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_terms(
            f,
            self.terms().map(|(j, k, c)| {
                let s = if c.im == 0.0 { format!("{}", c.re) } else { format!("({}{:+}i)", c.re, c.im) };
                (j, k, s, c.im == 0.0 && c.re < 0.0)
            }),
        )
    }
}

/// Render terms as e.g. `z^3 - w^2`.
fn write_terms(f: &mut fmt::Formatter<'_>, terms: impl Iterator<Item = (usize, usize, String, bool)>) -> fmt::Result {
    let mut first = true;
    for (j, k, c, negative) in terms {
        let mono = match (j, k) {
            (0, 0) => String::new(),
            _ => {
                let mut s = String::new();
                if j > 0 {
                    s.push('z');
                    if j > 1 {
                        s.push_str(&format!("^{j}"));
                    }
                }
                if k > 0 {
                    s.push('w');
                    if k > 1 {
                        s.push_str(&format!("^{k}"));
                    }
                }
                s
            }
        };
        let (sign, body) = if negative { ("-", c.trim_start_matches('-').to_string()) } else { ("+", c) };
        let body = if !mono.is_empty() && body == "1" { mono } else if mono.is_empty() { body } else { format!("{body}{mono}") };
        if first {
            if negative {
                write!(f, "-")?;
            }
            write!(f, "{body}")?;
            first = false;
        } else {
            write!(f, " {sign} {body}")?;
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}

/// Parse a small integer polynomial written as `+`/`-` separated terms such as
/// `z^3 - w^2`, `1 - zw` or `2z^2w - 3`. Intended for tests and fixtures.
pub fn parse_int_poly(s: &str) -> Result<ExactPoly> {
    let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let mut terms = Vec::new();
    let mut rest = cleaned.as_str();
    if rest.is_empty() {
        return Err(Error::input("poly", "empty expression"));
    }
    while !rest.is_empty() {
        let (sign, body_start) = match rest.as_bytes()[0] {
            b'-' => (-1, 1),
            b'+' => (1, 1),
            _ => (1, 0),
        };
        let body_rest = &rest[body_start..];
        let end = body_rest.find(['+', '-']).unwrap_or(body_rest.len());
        let body = &body_rest[..end];
        rest = &body_rest[end..];
        let digits: String = body.chars().take_while(|c| c.is_ascii_digit()).collect();
        let coef: i64 = if digits.is_empty() { 1 } else { digits.parse().map_err(|_| Error::input("poly", "bad coefficient"))? };
        let mut tail = &body[digits.len()..];
        let (mut j, mut k) = (0usize, 0usize);
        if digits.is_empty() && tail.is_empty() {
            return Err(Error::input("poly", format!("empty term in {s:?}")));
        }
        while !tail.is_empty() {
            let var = tail.as_bytes()[0];
            tail = &tail[1..];
            let mut e = 1usize;
            if tail.starts_with('^') {
                let ds: String = tail[1..].chars().take_while(|c| c.is_ascii_digit()).collect();
                e = ds.parse().map_err(|_| Error::input("poly", "bad exponent"))?;
                tail = &tail[1 + ds.len()..];
            }
            match var {
                b'z' => j += e,
                b'w' => k += e,
                _ => return Err(Error::input("poly", format!("unexpected symbol in {s:?}"))),
            }
        }
        terms.push((ExactComplex::from_ints(sign * coef, 0), j, k));
    }
    Ok(BiPoly::from_terms(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ExactPoly {
        parse_int_poly(s).unwrap()
    }

    fn ex(re: i64, im: i64) -> ExactComplex {
        ExactComplex::from_ints(re, im)
    }

    #[test]
    fn evaluation() {
        assert_eq!(p("z^3 - w^2").eval(&ex(1, 0), &ex(1, 0)), ex(0, 0));
        let half = ExactComplex::from_fractions(1, 2, 0, 1);
        assert_eq!(p("1 - zw").eval(&ex(2, 0), &half), ex(0, 0));
        assert_eq!(p("z^2 - 2w^2").eval(&ex(1, 0), &ex(1, 0)), ex(-1, 0));
    }

    #[test]
    fn fibers() {
        assert_eq!(p("z^3 - w^2").fiber(&ex(0, 0)), UniPoly::new(vec![ex(0, 0), ex(0, 0), ex(-1, 0)]));
        let f = p("1 - zw").fiber(&ex(0, 0));
        assert_eq!(f.degree(), Some(0));
        assert_eq!(p("z^2 - w^2").fiber(&ex(0, 1)), UniPoly::new(vec![ex(-1, 0), ex(0, 0), ex(-1, 0)]));
    }

    #[test]
    fn reversal_examples() {
        let q = p("z^3 - w^2");
        assert_eq!(q.reverse((3, 2)).unwrap(), -&q);
        assert_eq!(p("1 - zw").reverse((1, 1)).unwrap(), p("zw - 1"));
        assert_eq!(p("z^2 - 2w^2").reverse((2, 2)).unwrap(), p("w^2 - 2z^2"));
        assert!(q.reverse((2, 2)).is_err());
    }

    #[test]
    fn self_inversive_examples() {
        assert_eq!(p("z^3 - w^2").self_inversive_constant(), Some(ex(-1, 0)));
        assert_eq!(p("1 - zw").self_inversive_constant(), Some(ex(-1, 0)));
        assert_eq!(p("z^2 - 2w^2").self_inversive_constant(), None);
        let f = p("z^3 - w^2").to_float();
        assert!((f.self_inversive_constant().unwrap() - C64::new(-1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trimming_and_zero() {
        let q = BiPoly::from_grid(vec![vec![ex(1, 0), ex(0, 0)], vec![ex(0, 0), ex(0, 0)]]);
        assert_eq!(q.bidegree(), (0, 0));
        assert!(BiPoly::<ExactComplex>::from_grid(vec![vec![ex(0, 0)]]).is_zero());
    }

    #[test]
    fn exact_division() {
        let a = p("z - w");
        let b = p("1 - zw");
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&p("z + w")).is_none());
    }

    #[test]
    fn display_round_trip() {
        for s in ["z^3 - w^2", "1 - zw", "-2z^2w + 3"] {
            let q = p(s);
            assert_eq!(p(&q.to_string()), q);
        }
    }
}
