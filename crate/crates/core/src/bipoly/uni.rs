use std::ops::{Add, Mul, Neg, Sub};

use crate::scalar::{ExactComplex, Scalar, C64};

/// Univariate polynomial, coefficients stored low degree first.
///
/// The leading coefficient is nonzero unless the polynomial is zero, which is
/// stored as an empty coefficient vector.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> UniPoly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(S::one())
    }

    /// `c·x^n`
    pub fn monomial(c: S, n: usize) -> Self {
        let mut v = vec![S::zero(); n + 1];
        v[n] = c;
        Self::new(v)
    }

    /// `x - r`
    pub fn linear_root(r: S) -> Self {
        Self::new(vec![-r, S::one()])
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the convention deg(0) = 0.
    pub fn deg0(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn lead(&self) -> S {
        self.coeffs.last().cloned().unwrap_or_else(S::zero)
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_i64(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.lead();
        Self::new(self.coeffs.iter().map(|c| c.clone() / l.clone()).collect())
    }

    /// Number of trailing (low-order) zero coefficients, i.e. the multiplicity
    /// of the root at 0.
    pub fn low_order_zeros(&self) -> usize {
        self.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Euclidean division over the coefficient field.
    pub fn div_rem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        if self.coeffs.len() < d.coeffs.len() {
            return (Self::zero(), self.clone());
        }
        let lead = d.lead();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![S::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() / lead.clone();
            if !c.is_zero() {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[i + j] = rem[i + j].clone() - c.clone() * dc.clone();
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `d` divides `self` exactly.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> UniPoly<T> {
        UniPoly::new(self.coeffs.iter().map(f).collect())
    }

    pub fn to_float(&self) -> UniPoly<C64> {
        self.map(|c| c.to_c64())
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
}

impl UniPoly<ExactComplex> {
    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Square-free part, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.is_constant() {
            return if self.is_zero() { Self::zero() } else { Self::one() };
        }
        let g = self.gcd(&self.derivative());
        self.div_exact(&g).expect("gcd divides").monic()
    }

    /// Yun's square-free decomposition: pairs `(f_i, i)` with
    /// `monic(self) = ∏ f_i^i`, each `f_i` square-free, monic and nonconstant.
    pub fn squarefree_decomposition(&self) -> Vec<(Self, u32)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.div_exact(&a0).unwrap();
        let mut c = df.div_exact(&a0).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while !b.is_constant() {
            let a = b.gcd(&d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a).unwrap();
            c = d.div_exact(&a).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Exact series inverse modulo `x^n`; requires a nonzero constant term.
    pub fn series_inverse(&self, n: usize) -> Vec<ExactComplex> {
        let c0 = self.coeff(0);
        assert!(!Scalar::is_zero(&c0), "series inverse needs nonzero constant term");
        let inv0 = c0.inv();
        let mut out: Vec<ExactComplex> = Vec::with_capacity(n);
        for k in 0..n {
            if k == 0 {
                out.push(inv0.clone());
                continue;
            }
            let mut acc = <ExactComplex as Scalar>::zero();
            for j in 1..=k.min(self.deg0()) {
                acc = &acc + &(&self.coeffs[j] * &out[k - j]);
            }
            out.push(-(&acc * &inv0));
        }
        out
    }
}

impl<'a, S: Scalar> Add<&'a UniPoly<S>> for &'a UniPoly<S> {
    type Output = UniPoly<S>;
    fn add(self, o: &UniPoly<S>) -> UniPoly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) + o.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a UniPoly<S>> for &'a UniPoly<S> {
    type Output = UniPoly<S>;
    fn sub(self, o: &UniPoly<S>) -> UniPoly<S> {
        let n = self.coeffs.len().max(o.coeffs.len());
        UniPoly::new((0..n).map(|i| self.coeff(i) - o.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a UniPoly<S>> for &'a UniPoly<S> {
    type Output = UniPoly<S>;
    fn mul(self, o: &UniPoly<S>) -> UniPoly<S> {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut v = vec![S::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] = v[i + j].clone() + a.clone() * b.clone();
            }
        }
        UniPoly::new(v)
    }
}

impl<S: Scalar> Neg for &UniPoly<S> {
    type Output = UniPoly<S>;
    fn neg(self) -> UniPoly<S> {
        UniPoly::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: &[i64]) -> UniPoly<ExactComplex> {
        UniPoly::new(v.iter().map(|&c| ExactComplex::from_ints(c, 0)).collect())
    }

    #[test]
    fn gcd_and_division() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = ex(&[-2, 1, 1]);
        let b = ex(&[3, -4, 1]);
        assert_eq!(a.gcd(&b), ex(&[-1, 1]));
        let (q, r) = a.div_rem(&ex(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(q, ex(&[2, 1]));
    }

    #[test]
    fn yun_decomposition() {
        // (x-1)^3 (x+1)
        let f = &ex(&[-1, 1]).pow(3) * &ex(&[1, 1]);
        let d = f.squarefree_decomposition();
        assert_eq!(d, vec![(ex(&[1, 1]), 1), (ex(&[-1, 1]), 3)]);
        assert_eq!(f.squarefree_part(), ex(&[-1, 0, 1]));
    }

    #[test]
    fn series_inverse_of_mobius_denominator() {
        // 1/(2 - x) = 1/2 + x/4 + x^2/8 + ...
        let inv = ex(&[2, -1]).series_inverse(4);
        for (k, c) in inv.iter().enumerate() {
            assert_eq!(*c, ExactComplex::from_fractions(1, 1 << (k + 1), 0, 1));
        }
    }
}
