//! Gaussian integers with arbitrary-precision components.
//!
//! The coefficient tower is ℤ[i] → parameter polynomials over ℤ[i] →
//! fractions of those. Everything here is exact: gcd uses the Euclidean
//! property of ℤ[i] with nearest-integer rounding, and divisor enumeration
//! (for rational-root candidate generation) factors the norm by trial
//! division.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussInt {
            re: re.into(),
            im: im.into(),
        }
    }

    pub fn zero() -> Self {
        GaussInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussInt::new(0, 1)
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        GaussInt::new(n, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussInt {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// Squared modulus; zero only for the zero element.
    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    /// Units of ℤ[i].
    pub fn units() -> [GaussInt; 4] {
        [
            GaussInt::new(1, 0),
            GaussInt::new(-1, 0),
            GaussInt::new(0, 1),
            GaussInt::new(0, -1),
        ]
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Quotient with nearest-integer rounding of both components. This makes
    /// ℤ[i] Euclidean: the remainder `self - q*d` has norm < norm(d).
    pub fn div_round(&self, d: &GaussInt) -> GaussInt {
        assert!(!d.is_zero(), "division by zero Gaussian integer");
        let n = d.norm();
        let prod = self * &d.conj();
        GaussInt {
            re: round_div(&prod.re, &n),
            im: round_div(&prod.im, &n),
        }
    }

    /// Exact quotient if `d` divides `self`.
    pub fn div_exact(&self, d: &GaussInt) -> Option<GaussInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let prod = self * &d.conj();
        let (qr, rr) = prod.re.div_rem(&n);
        let (qi, ri) = prod.im.div_rem(&n);
        if rr.is_zero() && ri.is_zero() {
            Some(GaussInt { re: qr, im: qi })
        } else {
            None
        }
    }

    pub fn divides(&self, other: &GaussInt) -> bool {
        !self.is_zero() && other.div_exact(self).is_some()
    }

    /// Euclidean gcd, normalized to the canonical associate.
    pub fn gcd(&self, other: &GaussInt) -> GaussInt {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let q = a.div_round(&b);
            let r = &a - &(&q * &b);
            a = b;
            b = r;
        }
        a.canonical_associate()
    }

    /// The associate (unit multiple) with `re > 0, im >= 0`, or zero.
    /// Gives every nonzero element a unique canonical representative among
    /// its four associates.
    pub fn canonical_associate(&self) -> GaussInt {
        self.canonical_unit_factor().1
    }

    /// Returns `(u, v)` with `v = u * self` canonical.
    pub fn canonical_unit_factor(&self) -> (GaussInt, GaussInt) {
        if self.is_zero() {
            return (GaussInt::one(), self.clone());
        }
        for u in GaussInt::units() {
            let v = &u * self;
            if v.re.is_positive() && !v.im.is_negative() {
                return (u, v);
            }
            // purely imaginary inputs: land on the positive real axis
            if v.re.is_positive() && v.im.is_zero() {
                return (u, v);
            }
        }
        // self = x + iy with x>0,y>=0 handled above; remaining case is
        // re==0 which maps to positive real via *±i, so this is unreachable.
        unreachable!("no canonical associate found");
    }

    /// All divisors up to associates (each divisor returned in canonical
    /// form). Factors the norm by trial division, so intended for the small
    /// integers that appear as leading/trailing coefficients after content
    /// stripping.
    pub fn divisors_up_to_units(&self) -> Vec<GaussInt> {
        assert!(!self.is_zero(), "divisors of zero are not enumerable");
        let primes = self.factor();
        let mut divs = vec![GaussInt::one()];
        for (p, e) in primes {
            let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
            for d in &divs {
                let mut pk = GaussInt::one();
                for _ in 0..=e {
                    next.push((d * &pk).canonical_associate());
                    pk = &pk * &p;
                }
            }
            next.sort_by(cmp_key);
            next.dedup();
            divs = next;
        }
        divs
    }

    /// Factorization into Gaussian primes (up to units): returns
    /// `(prime, exponent)` pairs.
    pub fn factor(&self) -> Vec<(GaussInt, u32)> {
        assert!(!self.is_zero());
        let mut rem = self.clone();
        let mut out: Vec<(GaussInt, u32)> = Vec::new();
        let norm = rem.norm();
        for (p, _) in factor_nat(&norm) {
            for pi in gaussian_primes_over(&p) {
                let mut e = 0u32;
                while let Some(q) = rem.div_exact(&pi) {
                    rem = q;
                    e += 1;
                }
                if e > 0 {
                    out.push((pi, e));
                }
            }
        }
        debug_assert!(rem.is_unit(), "nonunit remainder after factoring");
        out
    }
}

fn cmp_key(a: &GaussInt, b: &GaussInt) -> std::cmp::Ordering {
    (a.norm(), a.re.clone(), a.im.clone()).cmp(&(b.norm(), b.re.clone(), b.im.clone()))
}

/// Rounds `a / b` to the nearest integer (ties toward +∞); `b > 0` not
/// required.
fn round_div(a: &BigInt, b: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    let (num, den) = if b.is_negative() {
        (-a.clone(), -b.clone())
    } else {
        (a.clone(), b.clone())
    };
    (num * &two + &den).div_floor(&(den * &two))
}

/// Trial-division factorization of a positive integer.
fn factor_nat(n: &BigInt) -> Vec<(BigInt, u32)> {
    let mut n = n.clone();
    assert!(n.is_positive());
    let mut out = Vec::new();
    let mut p = BigInt::from(2);
    while &p * &p <= n {
        let mut e = 0u32;
        while (&n % &p).is_zero() {
            n /= &p;
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == BigInt::from(2) { 1 } else { 2 };
    }
    if n > BigInt::one() {
        out.push((n, 1));
    }
    out
}

/// The Gaussian primes dividing the rational prime `p`.
fn gaussian_primes_over(p: &BigInt) -> Vec<GaussInt> {
    if *p == BigInt::from(2) {
        return vec![GaussInt::new(1, 1).canonical_associate()];
    }
    if (p % BigInt::from(4)) == BigInt::from(3) {
        return vec![GaussInt::new(p.clone(), BigInt::zero())];
    }
    // p ≡ 1 (mod 4): split. Find x with x² ≡ -1 (mod p) via Euler's
    // criterion on small bases, then gcd(p, x+i).
    let exp = (p - BigInt::one()) / BigInt::from(4);
    let mut base = BigInt::from(2);
    let x = loop {
        let cand = base.modpow(&exp, p);
        if (&cand * &cand % p + p) % p == p - BigInt::one() {
            break cand;
        }
        base += 1;
        assert!(&base < p, "no quadratic nonresidue found");
    };
    let pi = GaussInt::new(p.clone(), BigInt::zero()).gcd(&GaussInt::new(x, BigInt::one()));
    let pj = pi.conj().canonical_associate();
    if pi == pj {
        vec![pi]
    } else {
        vec![pi, pj]
    }
}

impl Add for &GaussInt {
    type Output = GaussInt;
    fn add(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &GaussInt {
    type Output = GaussInt;
    fn sub(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &GaussInt {
    type Output = GaussInt;
    fn mul(self, rhs: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &GaussInt {
    type Output = GaussInt;
    fn neg(self) -> GaussInt {
        GaussInt {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl fmt::Display for GaussInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return match () {
                _ if self.im.is_one() => write!(f, "I"),
                _ if self.im == BigInt::from(-1) => write!(f, "-I"),
                _ => write!(f, "{}*I", self.im),
            };
        }
        write!(f, "{}", self.re)?;
        if self.im.is_positive() {
            if self.im.is_one() {
                write!(f, "+I")
            } else {
                write!(f, "+{}*I", self.im)
            }
        } else if self.im == BigInt::from(-1) {
            write!(f, "-I")
        } else {
            write!(f, "{}*I", self.im)
        }
    }
}
