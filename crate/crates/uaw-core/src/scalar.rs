//! Scalar backends: exact Gaussian rationals and complex floats.
//!
//! The exact backend is the default everywhere; the float backend exists
//! only for the unitary-form check, which needs an involution with
//! `q* = q^{-1}` on the unit circle.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rat = BigRational;

/// Field operations shared by the exact and float backends.
///
/// Everything downstream (symbols, matrix builders) is generic over this,
/// so the same formulas drive both backends.
pub trait ScalarField: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self) -> Self;
    fn conj(&self) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.mul(&rhs.inv())
    }

    fn pow(&self, e: i64) -> Self {
        let mut base = if e < 0 { self.inv() } else { self.clone() };
        let mut k = e.unsigned_abs();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("cannot parse scalar from {0:?}")]
    Parse(String),
    #[error("zero is not allowed here")]
    Zero,
}

/// An exact Gaussian rational `re + im*i`, both parts arbitrary-precision
/// rationals kept in lowest terms with positive denominators.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussRat {
    re: Rat,
    im: Rat,
}

impl GaussRat {
    pub fn new(re: Rat, im: Rat) -> Self {
        GaussRat { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        GaussRat::new(Rat::from_integer(BigInt::from(v)), Rat::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        GaussRat::new(Rat::new(BigInt::from(num), BigInt::from(den)), Rat::zero())
    }

    /// `a/b + (c/d) i`
    pub fn from_parts(a: i64, b: i64, c: i64, d: i64) -> Self {
        assert!(b != 0 && d != 0, "zero denominator");
        GaussRat::new(
            Rat::new(BigInt::from(a), BigInt::from(b)),
            Rat::new(BigInt::from(c), BigInt::from(d)),
        )
    }

    pub fn i() -> Self {
        GaussRat::new(Rat::zero(), Rat::one())
    }

    pub fn re(&self) -> &Rat {
        &self.re
    }

    pub fn im(&self) -> &Rat {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// Squared modulus `re^2 + im^2`, a nonnegative rational.
    pub fn norm_sq(&self) -> Rat {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Lexicographic comparison of `(re, im)`; any deterministic total
    /// order works for canonical choices, this one needs no hashing.
    pub fn lex_cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.re.cmp(&other.re).then_with(|| self.im.cmp(&other.im))
    }

    /// Rough size measure used for pivot selection: maximum bit length
    /// over the four integers involved.
    pub fn height_bits(&self) -> u64 {
        let bits = |r: &Rat| r.numer().bits().max(r.denom().bits());
        bits(&self.re).max(bits(&self.im))
    }

    /// True exactly for the roots of unity contained in the Gaussian
    /// rationals: `1, -1, i, -i`.
    pub fn is_root_of_unity(&self) -> Result<bool, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::Zero);
        }
        let one = Rat::one();
        let ok = (self.im.is_zero() && (self.re == one || self.re == -&one))
            || (self.re.is_zero() && (self.im == one || self.im == -&one));
        Ok(ok)
    }

    /// Square root within the Gaussian rationals, if one exists.
    ///
    /// When both roots exist, returns the canonically positive one:
    /// `re > 0`, or `re = 0` and `im > 0`.
    pub fn sqrt_exact(&self) -> Option<GaussRat> {
        if self.is_zero() {
            return Some(GaussRat::zero());
        }
        let root = if self.im.is_zero() {
            if self.re.is_positive() {
                GaussRat::new(rat_sqrt(&self.re)?, Rat::zero())
            } else {
                GaussRat::new(Rat::zero(), rat_sqrt(&(-&self.re))?)
            }
        } else {
            // re + im*i = (u + v*i)^2 with u^2 = (re + |x|)/2, v = im/(2u).
            let modulus = rat_sqrt(&self.norm_sq())?;
            let u_sq = (&self.re + &modulus) / Rat::from_integer(BigInt::from(2));
            let u = rat_sqrt(&u_sq)?;
            if u.is_zero() {
                return None;
            }
            let v = &self.im / (&u * Rat::from_integer(BigInt::from(2)));
            GaussRat::new(u, v)
        };
        debug_assert!(root.mul(&root) == *self);
        let canonical = if root.re.is_positive() || (root.re.is_zero() && root.im.is_positive()) {
            root
        } else {
            ScalarField::neg(&root)
        };
        Some(canonical)
    }
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn rat_sqrt(x: &Rat) -> Option<Rat> {
    if x.is_negative() {
        return None;
    }
    let num = int_sqrt(x.numer().magnitude())?;
    let den = int_sqrt(x.denom().magnitude())?;
    Some(Rat::new(BigInt::from(num), BigInt::from(den)))
}

fn int_sqrt(n: &BigUint) -> Option<BigUint> {
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

impl ScalarField for GaussRat {
    fn zero() -> Self {
        GaussRat::new(Rat::zero(), Rat::zero())
    }

    fn one() -> Self {
        GaussRat::new(Rat::one(), Rat::zero())
    }

    fn from_i64(v: i64) -> Self {
        GaussRat::from_int(v)
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn add(&self, rhs: &Self) -> Self {
        GaussRat::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }

    fn sub(&self, rhs: &Self) -> Self {
        GaussRat::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }

    fn mul(&self, rhs: &Self) -> Self {
        GaussRat::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    fn neg(&self) -> Self {
        GaussRat::new(-&self.re, -&self.im)
    }

    fn inv(&self) -> Self {
        let n = self.norm_sq();
        assert!(!n.is_zero(), "inverse of zero");
        GaussRat::new(&self.re / &n, -&self.im / &n)
    }

    fn conj(&self) -> Self {
        GaussRat::new(self.re.clone(), -&self.im)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:ident) => {
        impl $trait for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                ScalarField::$op(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a GaussRat> for &GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &'a GaussRat) -> GaussRat {
                ScalarField::$op(self, rhs)
            }
        }
        impl $trait<&GaussRat> for GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: &GaussRat) -> GaussRat {
                ScalarField::$op(&self, rhs)
            }
        }
        impl $trait<GaussRat> for &GaussRat {
            type Output = GaussRat;
            fn $method(self, rhs: GaussRat) -> GaussRat {
                ScalarField::$op(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);
forward_binop!(Div, div, div);

impl Neg for GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        ScalarField::neg(&self)
    }
}

impl Neg for &GaussRat {
    type Output = GaussRat;
    fn neg(self) -> GaussRat {
        ScalarField::neg(self)
    }
}

impl fmt::Display for GaussRat {
    /// Text form used in all JSON payloads: `p/q` for real values,
    /// `p/q+r/si` (sign-folded) otherwise, everything in lowest terms.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.re.numer(), self.re.denom())?;
        if !self.im.is_zero() {
            if self.im.is_negative() {
                write!(f, "-{}/{}i", self.im.numer().abs(), self.im.denom())?;
            } else {
                write!(f, "+{}/{}i", self.im.numer(), self.im.denom())?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for GaussRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for GaussRat {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let cleaned: String = s
            .trim()
            .chars()
            .map(|c| if c == '\u{2212}' { '-' } else { c })
            .filter(|c| !c.is_whitespace())
            .collect();
        if cleaned.is_empty() {
            return Err(ScalarError::Parse(s.to_string()));
        }
        let err = || ScalarError::Parse(s.to_string());
        if let Some(body) = cleaned.strip_suffix('i') {
            // Split off the real part at a sign that follows a digit.
            let split = body
                .char_indices()
                .skip(1)
                .find(|&(k, c)| {
                    (c == '+' || c == '-')
                        && body[..k].chars().next_back().is_some_and(|p| p.is_ascii_digit())
                })
                .map(|(k, _)| k);
            let (re_str, im_str) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im = match im_str {
                "" | "+" => Rat::one(),
                "-" => -Rat::one(),
                _ => parse_rat(im_str).ok_or_else(err)?,
            };
            Ok(GaussRat::new(parse_rat(re_str).ok_or_else(err)?, im))
        } else {
            Ok(GaussRat::new(parse_rat(&cleaned).ok_or_else(err)?, Rat::zero()))
        }
    }
}

fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.strip_prefix('+').unwrap_or(s);
    match s.split_once('/') {
        Some((n, d)) => {
            let num = BigInt::from_str(n).ok()?;
            let den = BigInt::from_str(d).ok()?;
            if den.is_zero() {
                return None;
            }
            Some(Rat::new(num, den))
        }
        None => Some(Rat::from_integer(BigInt::from_str(s).ok()?)),
    }
}

/// The float backend: a double-precision complex number whose conjugation
/// plays the involution role.
pub type CFloat = Complex64;

impl ScalarField for CFloat {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn is_zero(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn inv(&self) -> Self {
        1.0 / self
    }

    fn conj(&self) -> Self {
        Complex64::new(self.re, -self.im)
    }
}

/// Shorthand used pervasively in tests and parameter grids.
pub fn gr(s: &str) -> GaussRat {
    s.parse().unwrap_or_else(|_| panic!("bad scalar literal {s:?}"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sqrt_of_perfect_square() {
        assert_eq!(gr("9/4").sqrt_exact(), Some(gr("3/2")));
    }

    #[test]
    fn sqrt_of_minus_one_is_i() {
        assert_eq!(gr("-1").sqrt_exact(), Some(GaussRat::i()));
    }

    #[test]
    fn sqrt_of_two_i() {
        // (1+i)^2 = 2i
        let two_i = GaussRat::new(Rat::zero(), Rat::from_integer(BigInt::from(2)));
        let root = two_i.sqrt_exact().unwrap();
        assert_eq!(root, gr("1/1+1/1i"));
        assert_eq!(root.mul(&root), two_i);
    }

    #[test]
    fn sqrt_of_two_absent() {
        // A square in Q(i) with zero imaginary part and positive real part
        // is a rational square; 2 is not one.
        assert_eq!(gr("2").sqrt_exact(), None);
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(gr("2").is_root_of_unity(), Ok(false));
        assert_eq!(gr("-1i").is_root_of_unity(), Ok(true));
        assert_eq!(gr("1").is_root_of_unity(), Ok(true));
        assert_eq!(gr("-1").is_root_of_unity(), Ok(true));
        assert_eq!(gr("0").is_root_of_unity(), Err(ScalarError::Zero));
        // Unit modulus but infinite multiplicative order: Q(i) contains
        // only the fourth roots of unity.
        let q = gr("3/5+4/5i");
        assert_eq!(q.norm_sq(), Rat::one());
        assert_eq!(q.is_root_of_unity(), Ok(false));
        let mut p = q.clone();
        for _ in 0..24 {
            assert!(!p.is_one());
            p = p.mul(&q);
        }
    }

    #[test]
    fn field_axioms_spot_checks() {
        let x = gr("3/7+2/5i");
        let y = gr("-4/3+1/2i");
        let z = gr("9-8i");
        assert_eq!(x.mul(&y).mul(&z), x.mul(&y.mul(&z)));
        assert!(x.mul(&x.inv()).is_one());
        assert_eq!(x.div(&y).mul(&y), x);
        assert_eq!(x.conj().conj(), x);
        assert_eq!(x.mul(&y).conj(), x.conj().mul(&y.conj()));
        assert_eq!(gr("5/3").conj(), gr("5/3"));
        assert_eq!(GaussRat::i().conj(), gr("0-1i"));
    }

    #[test]
    fn display_round_trip() {
        for s in ["-9/8", "0/1+1/1i", "2/1", "5/3-7/2i", "1/1"] {
            let v = gr(s);
            assert_eq!(v, gr(&v.to_string()));
        }
        assert_eq!(gr("i").to_string(), "0/1+1/1i");
        assert_eq!(gr("-9/8").to_string(), "-9/8");
        assert_eq!(gr("2").to_string(), "2/1");
    }

    #[test]
    fn pow_matches_repeated_multiplication() {
        let x = gr("2/3+1/7i");
        let mut acc = GaussRat::one();
        for e in 0..6 {
            assert_eq!(x.pow(e), acc);
            assert_eq!(x.pow(-e), acc.inv());
            acc = acc.mul(&x);
        }
    }
}
