//! Fraction-free determinants over exact integral domains.

use crate::bipoly::{BiPoly, UniPoly};
use crate::scalar::{ExactComplex, Scalar};

/// An integral domain with exact division by known divisors.
pub trait Domain: Clone {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn mul(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// `self / d`, where `d` is known to divide `self`.
    fn div_exact(&self, d: &Self) -> Self;
}

impl Domain for ExactComplex {
    fn zero() -> Self {
        <Self as Scalar>::zero()
    }
    fn one() -> Self {
        <Self as Scalar>::one()
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Self {
        self / d
    }
}

impl Domain for UniPoly<ExactComplex> {
    fn zero() -> Self {
        UniPoly::zero()
    }
    fn one() -> Self {
        UniPoly::one()
    }
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Self {
        UniPoly::div_exact(self, d).expect("Bareiss division is exact")
    }
}

impl Domain for BiPoly<ExactComplex> {
    fn zero() -> Self {
        BiPoly::zero()
    }
    fn one() -> Self {
        BiPoly::one()
    }
    fn is_zero(&self) -> bool {
        BiPoly::is_zero(self)
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, d: &Self) -> Self {
        BiPoly::div_exact(self, d).expect("Bareiss division is exact")
    }
}

/// Determinant of a square matrix (given as rows) by Bareiss elimination.
pub fn bareiss_det<T: Domain>(mut a: Vec<Vec<T>>) -> T {
    let n = a.len();
    if n == 0 {
        return T::one();
    }
    let mut sign_flip = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign_flip = !sign_flip;
                }
                None => return T::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if sign_flip {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(v: i64) -> ExactComplex {
        ExactComplex::from_ints(v, 0)
    }

    #[test]
    fn integer_determinants() {
        let m = vec![vec![ex(2), ex(1), ex(3)], vec![ex(0), ex(0), ex(1)], vec![ex(4), ex(5), ex(6)]];
        // 2(0-5) - 1(0-4) + 3(0) = -6
        assert_eq!(bareiss_det(m), ex(-6));
        let singular = vec![vec![ex(1), ex(2)], vec![ex(2), ex(4)]];
        assert_eq!(bareiss_det(singular), ex(0));
    }

    #[test]
    fn polynomial_determinant() {
        // det [[x, 1], [1, x]] = x^2 - 1
        let x = UniPoly::new(vec![ex(0), ex(1)]);
        let one = UniPoly::one();
        let d = bareiss_det(vec![vec![x.clone(), one.clone()], vec![one, x]]);
        assert_eq!(d, UniPoly::new(vec![ex(-1), ex(0), ex(1)]));
    }
}
