//! Scalar fields used for polynomial and matrix coefficients.
//!
//! Two implementations are provided: [`ExactComplex`] (Gaussian rationals with
//! arbitrary-precision components) and [`C64`] (IEEE double complex numbers).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

pub type C64 = Complex64;

/// Field operations shared by the exact and floating-point coefficient types.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    /// True when arithmetic in this type is exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn conj(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn from_exact(v: &ExactComplex) -> Self;
    fn to_c64(&self) -> C64;

    fn magnitude(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Random coefficient for test vectors: small Gaussian integers in the
    /// exact case, standard complex normals otherwise.
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self;
}

/// A complex number with arbitrary-precision rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactComplex {
    pub re: BigRational,
    pub im: BigRational,
}

impl ExactComplex {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(BigRational::from_integer(re.into()), BigRational::from_integer(im.into()))
    }

    /// `re_num/re_den + i·im_num/im_den`. Panics on a zero denominator.
    pub fn from_fractions(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Self::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    /// Exact conversion of a double-precision complex number. Every finite
    /// double is a dyadic rational, so no rounding happens here.
    pub fn from_c64(z: C64) -> Option<Self> {
        Some(Self::new(BigRational::from_float(z.re)?, BigRational::from_float(z.im)?))
    }

    /// |z|², exactly.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        let n = self.norm_sqr();
        assert!(!n.is_zero(), "division by zero in ExactComplex");
        Self::new(&self.re / &n, -&self.im / &n)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::from_ints(1, 0);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Best rational approximation of `z` with denominators up to `max_den`,
    /// accepted only if each component is within `tol` of the input.
    pub fn rationalize(z: C64, max_den: i64, tol: f64) -> Option<Self> {
        let re = rationalize_f64(z.re, max_den, tol)?;
        let im = rationalize_f64(z.im, max_den, tol)?;
        Some(Self::new(re, im))
    }
}

/// Continued-fraction approximation of a real number.
pub fn rationalize_f64(x: f64, max_den: i64, tol: f64) -> Option<BigRational> {
    if !x.is_finite() {
        return None;
    }
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let p2 = ai * p1 + p0;
        let q2 = ai * q1 + q0;
        if q2 > max_den as i128 {
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        if ((p1 as f64) / (q1 as f64) - x).abs() <= tol * 1e-3 {
            break;
        }
        let frac = r - a;
        if frac.abs() < 1e-300 {
            break;
        }
        r = 1.0 / frac;
    }
    if q1 == 0 {
        return None;
    }
    let approx = p1 as f64 / q1 as f64;
    if (approx - x).abs() > tol {
        return None;
    }
    Some(BigRational::new(BigInt::from(p1), BigInt::from(q1)))
}

fn rat_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let (n, d) = (r.numer(), r.denom());
        let shift = n.bits().max(d.bits()).saturating_sub(1000) as usize;
        let n = n >> shift;
        let d = d >> shift;
        n.to_f64().unwrap_or(0.0) / d.to_f64().unwrap_or(1.0)
    })
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            write!(f, "{}i", self.im)
        } else if self.im.is_negative() {
            write!(f, "({} - {}i)", self.re, -&self.im)
        } else {
            write!(f, "({} + {}i)", self.re, self.im)
        }
    }
}

impl<'a> Add<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn add(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn sub(self, o: &ExactComplex) -> ExactComplex {
        ExactComplex::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn mul(self, o: &ExactComplex) -> ExactComplex {
        if self.im.is_zero() && o.im.is_zero() {
            return ExactComplex::real(&self.re * &o.re);
        }
        ExactComplex::new(
            &self.re * &o.re - &self.im * &o.im,
            &self.re * &o.im + &self.im * &o.re,
        )
    }
}

impl<'a> Div<&'a ExactComplex> for &'a ExactComplex {
    type Output = ExactComplex;
    fn div(self, o: &ExactComplex) -> ExactComplex {
        if o.im.is_zero() {
            assert!(!o.re.is_zero(), "division by zero in ExactComplex");
            return ExactComplex::new(&self.re / &o.re, &self.im / &o.re);
        }
        self * &o.inv()
    }
}

macro_rules! by_value_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for ExactComplex {
            type Output = ExactComplex;
            fn $m(self, o: ExactComplex) -> ExactComplex {
                (&self).$m(&o)
            }
        }
    )*};
}
by_value_ops!(Add add, Sub sub, Mul mul, Div div);

impl Neg for ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-self.re, -self.im)
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex::new(-&self.re, -&self.im)
    }
}

impl Zero for ExactComplex {
    fn zero() -> Self {
        Self::new(BigRational::zero(), BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactComplex {
    fn one() -> Self {
        Self::from_ints(1, 0)
    }
}

impl Scalar for ExactComplex {
    const EXACT: bool = true;

    fn zero() -> Self {
        <Self as Zero>::zero()
    }
    fn one() -> Self {
        <Self as One>::one()
    }
    fn is_zero(&self) -> bool {
        <Self as Zero>::is_zero(self)
    }
    fn conj(&self) -> Self {
        Self::new(self.re.clone(), -&self.im)
    }
    fn from_i64(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
    fn from_exact(v: &ExactComplex) -> Self {
        v.clone()
    }
    fn to_c64(&self) -> C64 {
        C64::new(rat_to_f64(&self.re), rat_to_f64(&self.im))
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::from_ints(rng.random_range(-4..=4), rng.random_range(-4..=4))
    }
}

impl Scalar for C64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        C64::new(0.0, 0.0)
    }
    fn one() -> Self {
        C64::new(1.0, 0.0)
    }
    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn from_i64(v: i64) -> Self {
        C64::new(v as f64, 0.0)
    }
    fn from_exact(v: &ExactComplex) -> Self {
        v.to_c64()
    }
    fn to_c64(&self) -> C64 {
        *self
    }
    fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    }
}
