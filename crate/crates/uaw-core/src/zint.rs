//! Gaussian-integer arithmetic and divisor enumeration.
//!
//! This backs exact root extraction for characteristic polynomials: a monic
//! polynomial over Z[i] has all its rational roots among the divisors of its
//! constant term, and Z[i] is a PID so divisors come from the factorization
//! of the norm.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: BigInt, im: BigInt) -> Self {
        GaussInt { re, im }
    }

    pub fn from_i64(re: i64, im: i64) -> Self {
        GaussInt::new(BigInt::from(re), BigInt::from(im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm() == BigUint::one()
    }

    pub fn mul(&self, rhs: &GaussInt) -> GaussInt {
        GaussInt::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }

    pub fn conj(&self) -> GaussInt {
        GaussInt::new(self.re.clone(), -&self.im)
    }

    pub fn norm(&self) -> BigUint {
        (&self.re * &self.re + &self.im * &self.im).magnitude().clone()
    }

    /// Exact quotient `self / rhs` when `rhs` divides `self` in Z[i].
    pub fn exact_div(&self, rhs: &GaussInt) -> Option<GaussInt> {
        let n = BigInt::from(rhs.norm());
        let num = self.mul(&rhs.conj());
        let (qr, rr) = num.re.div_rem(&n);
        let (qi, ri) = num.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussInt::new(qr, qi))
        } else {
            None
        }
    }

    /// Euclidean division with quotient rounded to the nearest Gaussian
    /// integer, so the remainder has norm strictly smaller than `rhs`.
    fn div_round(&self, rhs: &GaussInt) -> GaussInt {
        let n = BigInt::from(rhs.norm());
        let num = self.mul(&rhs.conj());
        GaussInt::new(round_div(&num.re, &n), round_div(&num.im, &n))
    }

    pub fn gcd(&self, rhs: &GaussInt) -> GaussInt {
        let mut a = self.clone();
        let mut b = rhs.clone();
        while !b.is_zero() {
            let q = a.div_round(&b);
            let r = GaussInt::new(&a.re - (&q.re * &b.re - &q.im * &b.im),
                                  &a.im - (&q.re * &b.im + &q.im * &b.re));
            a = b;
            b = r;
        }
        a
    }
}

/// round(a/b) for b > 0, ties rounded up; any rounding within 1/2 keeps the
/// Euclidean remainder norm strictly decreasing.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    debug_assert!(b.is_positive());
    (a * 2 + b).div_floor(&(b * 2))
}

/// Miller-Rabin probable-prime test with fixed witnesses, deterministic for
/// everything this crate ever factors.
pub fn is_prime(n: &BigUint) -> bool {
    let two = BigUint::from(2u32);
    if n < &two {
        return false;
    }
    for small in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let p = BigUint::from(small);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }
    let n_minus_1 = n - BigUint::one();
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigUint::from(a).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Brent's variant of Pollard rho; `n` must be odd, composite, not a prime power of interest.
fn pollard_rho(n: &BigUint) -> BigUint {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    if (n % &two).is_zero() {
        return two;
    }
    let mut c = BigUint::one();
    loop {
        let f = |x: &BigUint| (x * x + &c) % n;
        let mut x = BigUint::from(2u32);
        let mut y = BigUint::from(2u32);
        let mut d = BigUint::one();
        while d == one {
            x = f(&x);
            y = f(&f(&y));
            let diff = if x > y { &x - &y } else { &y - &x };
            if diff.is_zero() {
                break;
            }
            d = diff.gcd(n);
        }
        if d != one && &d != n {
            return d;
        }
        c += BigUint::one();
    }
}

/// Prime factorization of a positive integer: trial division first, then
/// Miller-Rabin plus Pollard rho for whatever survives.
pub fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    assert!(!n.is_zero(), "factor(0)");
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut rem = n.clone();
    let mut push = |p: BigUint, e: u32, out: &mut Vec<(BigUint, u32)>| {
        if let Some(slot) = out.iter_mut().find(|(q, _)| *q == p) {
            slot.1 += e;
        } else {
            out.push((p, e));
        }
    };
    let mut d = 2u64;
    while d < 100_000 && rem > BigUint::one() {
        let bd = BigUint::from(d);
        if &bd * &bd > rem {
            break;
        }
        let mut e = 0;
        while (&rem % &bd).is_zero() {
            rem /= &bd;
            e += 1;
        }
        if e > 0 {
            push(bd, e, &mut out);
        }
        d += if d == 2 { 1 } else { 2 };
    }
    let mut stack = vec![rem];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            push(m, 1, &mut out);
        } else {
            let f = pollard_rho(&m);
            stack.push(&m / &f);
            stack.push(f);
        }
    }
    out.sort();
    out
}

/// Square root of -1 modulo a prime p = 1 (mod 4).
fn sqrt_minus_one_mod(p: &BigUint) -> BigUint {
    let exp = (p - BigUint::one()) >> 2;
    let p_minus_1 = p - BigUint::one();
    let mut a = BigUint::from(2u32);
    loop {
        let t = a.modpow(&exp, p);
        if (&t * &t) % p == p_minus_1 {
            return t;
        }
        a += BigUint::one();
    }
}

/// A Gaussian prime above the rational prime p.
fn gaussian_prime_above(p: &BigUint) -> GaussInt {
    if *p == BigUint::from(2u32) {
        return GaussInt::from_i64(1, 1);
    }
    if (p % BigUint::from(4u32)) == BigUint::from(3u32) {
        return GaussInt::new(BigInt::from(p.clone()), BigInt::zero());
    }
    let t = sqrt_minus_one_mod(p);
    GaussInt::new(BigInt::from(p.clone()), BigInt::zero())
        .gcd(&GaussInt::new(BigInt::from(t), BigInt::one()))
}

/// All divisors of `g` in Z[i] including unit multiples, or `None` when the
/// enumeration would exceed `cap` candidates.
pub fn divisors_with_units(g: &GaussInt, cap: usize) -> Option<Vec<GaussInt>> {
    assert!(!g.is_zero());
    let mut prime_powers: Vec<(GaussInt, u32)> = Vec::new();
    let mut rest = g.clone();
    for (p, _) in factor(&g.norm()) {
        let pi = gaussian_prime_above(&p);
        for candidate in [pi.clone(), pi.conj()] {
            let mut e = 0;
            while let Some(q) = rest.exact_div(&candidate) {
                rest = q;
                e += 1;
            }
            if e > 0 {
                prime_powers.push((candidate, e));
            }
            // Inert/ramified primes have a single prime up to units.
            if candidate.conj().exact_div(&candidate).is_some() {
                break;
            }
        }
    }
    debug_assert!(rest.is_unit());
    let mut count: usize = 4;
    for (_, e) in &prime_powers {
        count = count.checked_mul(*e as usize + 1)?;
        if count > cap {
            return None;
        }
    }
    let units = [
        GaussInt::from_i64(1, 0),
        GaussInt::from_i64(-1, 0),
        GaussInt::from_i64(0, 1),
        GaussInt::from_i64(0, -1),
    ];
    let mut divisors: Vec<GaussInt> = units.to_vec();
    for (pi, e) in &prime_powers {
        let mut extended = Vec::with_capacity(divisors.len() * (*e as usize + 1));
        for d in &divisors {
            let mut acc = d.clone();
            extended.push(acc.clone());
            for _ in 0..*e {
                acc = acc.mul(pi);
                extended.push(acc.clone());
            }
        }
        divisors = extended;
    }
    divisors.sort_by_key(|d| d.norm());
    divisors.dedup();
    Some(divisors)
}

/// Convenience for tests: numeric value when small.
pub fn to_i64_pair(g: &GaussInt) -> Option<(i64, i64)> {
    Some((g.re.to_i64()?, g.im.to_i64()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_small() {
        let f = factor(&BigUint::from(6562u32));
        assert_eq!(
            f,
            vec![
                (BigUint::from(2u32), 1),
                (BigUint::from(17u32), 1),
                (BigUint::from(193u32), 1)
            ]
        );
    }

    #[test]
    fn factor_large_square() {
        let n = BigUint::from(1_000_003u64) * BigUint::from(1_000_003u64) * BigUint::from(8u32);
        let f = factor(&n);
        assert_eq!(f, vec![(BigUint::from(2u32), 3), (BigUint::from(1_000_003u64), 2)]);
    }

    #[test]
    fn gaussian_prime_above_five() {
        let pi = gaussian_prime_above(&BigUint::from(5u32));
        assert_eq!(pi.norm(), BigUint::from(5u32));
    }

    #[test]
    fn divisors_of_five() {
        // 5 = (2+i)(2-i); divisors up to units: 1, 2+i, 2-i, 5.
        let divs = divisors_with_units(&GaussInt::from_i64(5, 0), 1000).unwrap();
        assert_eq!(divs.len(), 16);
        assert!(divs.iter().all(|d| GaussInt::from_i64(5, 0).exact_div(d).is_some()));
    }

    #[test]
    fn exact_div_detects_non_divisors() {
        let a = GaussInt::from_i64(5, 3);
        let b = GaussInt::from_i64(2, 1);
        assert_eq!(a.exact_div(&b), None);
        let c = a.mul(&b);
        assert_eq!(c.exact_div(&b), Some(a));
    }
}
