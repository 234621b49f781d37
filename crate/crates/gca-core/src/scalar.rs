//! Gaussian rationals: complex numbers with rational real and imaginary
//! parts, in lowest terms. The coefficient field for the whole crate.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};

use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};
use core::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::{invalid, Error, Result};

pub type Rational = BigRational;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    re: Rational,
    im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn real(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::real(Rational::from_integer(BigInt::from(n)))
    }

    /// `n/d` as a real scalar. Panics if `d == 0`.
    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::real(Rational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// `a + b*i` from integer parts.
    pub fn from_parts(a: i64, b: i64) -> Self {
        GaussianRational {
            re: Rational::from_integer(BigInt::from(a)),
            im: Rational::from_integer(BigInt::from(b)),
        }
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn re(&self) -> &Rational {
        &self.re
    }

    pub fn im(&self) -> &Rational {
        &self.im
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
        GaussianRational {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `z * conj(z)`, a nonnegative rational.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(invalid("division by zero"));
        }
        let n = self.norm();
        Ok(GaussianRational {
            re: &self.re / &n,
            im: -(&self.im / &n),
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// |z| = 1 in the exact sense: `z * conj(z) == 1`.
    pub fn is_unit_modulus(&self) -> bool {
        self.norm().is_one()
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn fmt_rational(q: &Rational) -> String {
    q.to_string()
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", fmt_rational(&self.re));
        }
        if self.re.is_zero() {
            return write!(f, "{}*i", fmt_rational(&self.im));
        }
        if self.im.is_negative() {
            write!(
                f,
                "{}-{}*i",
                fmt_rational(&self.re),
                fmt_rational(&(-self.im.clone()))
            )
        } else {
            write!(f, "{}+{}*i", fmt_rational(&self.re), fmt_rational(&self.im))
        }
    }
}

// Literal grammar: `a/b` and `a/b+c/d*i`, signs allowed, whitespace ignored.
impl FromStr for GaussianRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(invalid("empty scalar literal"));
        }
        let bytes = compact.as_bytes();
        // Split into at most two signed terms.
        let mut split = None;
        for (k, &b) in bytes.iter().enumerate().skip(1) {
            if (b == b'+' || b == b'-') && bytes[k - 1] != b'/' && bytes[k - 1] != b'+' && bytes[k - 1] != b'-' {
                split = Some(k);
            }
        }
        let (first, second) = match split {
            Some(k) => (&compact[..k], Some(&compact[k..])),
            None => (&compact[..], None),
        };
        let mut re = Rational::zero();
        let mut im = Rational::zero();
        let mut set_term = |term: &str| -> Result<()> {
            let (sign, body) = match term.as_bytes().first() {
                Some(b'+') => (1, &term[1..]),
                Some(b'-') => (-1, &term[1..]),
                _ => (1, term),
            };
            if body.is_empty() {
                return Err(invalid("dangling sign in scalar literal"));
            }
            let (is_im, numeric) = if let Some(stripped) = body.strip_suffix("*i") {
                (true, stripped)
            } else if body == "i" {
                (true, "1")
            } else {
                (false, body)
            };
            let mut value: Rational = numeric
                .parse()
                .map_err(|_| invalid("bad rational in scalar literal"))?;
            if sign < 0 {
                value = -value;
            }
            if is_im {
                if !im.is_zero() {
                    return Err(invalid("duplicate imaginary part in scalar literal"));
                }
                im = value;
            } else {
                if !re.is_zero() {
                    return Err(invalid("duplicate real part in scalar literal"));
                }
                re = value;
            }
            Ok(())
        };
        set_term(first)?;
        if let Some(second) = second {
            set_term(second)?;
        }
        Ok(GaussianRational { re, im })
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $imp:expr) => {
        impl<'a, 'b> $trait<&'b GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'b GaussianRational) -> GaussianRational {
                let f: fn(&GaussianRational, &GaussianRational) -> GaussianRational = $imp;
                f(self, rhs)
            }
        }
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                $trait::$method(&self, &rhs)
            }
        }
        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                $trait::$method(&self, rhs)
            }
        }
        impl<'a> $trait<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                $trait::$method(self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| GaussianRational {
    re: &a.re + &b.re,
    im: &a.im + &b.im,
});
forward_binop!(Sub, sub, |a, b| GaussianRational {
    re: &a.re - &b.re,
    im: &a.im - &b.im,
});
forward_binop!(Mul, mul, |a, b| GaussianRational {
    re: &a.re * &b.re - &a.im * &b.im,
    im: &a.re * &b.im + &a.im * &b.re,
});

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl<'a> Neg for &'a GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -self.clone()
    }
}

/// Trial-division factorization; fails on composites with a factor beyond
/// the bound, which does not happen at the scales this crate works at.
fn factor(n: &BigInt) -> Option<BTreeMap<u64, u32>> {
    let mut n = n.abs();
    let mut out = BTreeMap::new();
    if n.is_zero() {
        return None;
    }
    let mut p = 2u64;
    while &n > &BigInt::one() && p <= 1_000_000 {
        let bp = BigInt::from(p);
        while (&n % &bp).is_zero() {
            *out.entry(p).or_insert(0) += 1;
            n /= &bp;
        }
        p = if p == 2 { 3 } else { p + 2 };
    }
    if n.is_one() {
        Some(out)
    } else {
        // Leftover beyond the trial bound: accept it only if it fits u64 and
        // is a prime (checked by trial division up to its square root being
        // impossible here), otherwise give up.
        let left = n.to_u64()?;
        *out.entry(left).or_insert(0) += 1;
        Some(out)
    }
}

fn two_squares_prime(p: u64) -> Option<(i64, i64)> {
    // p == 2 or p ≡ 1 (mod 4); brute force is fine at desk scale.
    if p == 2 {
        return Some((1, 1));
    }
    let mut a = 1u64;
    while a * a <= p {
        let rest = p - a * a;
        let b = rest.isqrt();
        if b * b == rest {
            return Some((a as i64, b as i64));
        }
        a += 1;
    }
    None
}

/// A Gaussian rational `z` with `z * conj(z) = q`, if one exists.
pub fn gaussian_of_norm(q: &Rational) -> Option<GaussianRational> {
    if q.is_zero() {
        return Some(GaussianRational::zero());
    }
    if q.is_negative() {
        return None;
    }
    // z = w / denom with N(w) = numer * denom.
    let target = q.numer() * q.denom();
    let fac = factor(&target)?;
    let mut w = GaussianRational::one();
    for (p, e) in fac {
        if p % 4 == 3 {
            if e % 2 != 0 {
                return None;
            }
            w = w * GaussianRational::real(Rational::from_integer(BigInt::from(p).pow(e / 2)));
        } else {
            let (a, b) = two_squares_prime(p)?;
            w = w * GaussianRational::from_parts(a, b).pow(e);
        }
    }
    let denom = Rational::new(BigInt::one(), q.denom().clone());
    Some(w.scale(&denom))
}

/// Splits a positive rational as `t = core * norm(c)` with the smallest
/// possible positive `core` (a squarefree product of primes ≡ 3 mod 4).
pub fn norm_free_part(t: &Rational) -> Option<(Rational, GaussianRational)> {
    if !t.is_positive() {
        return None;
    }
    let nf = factor(t.numer())?;
    let df = factor(t.denom())?;
    let mut core = Rational::one();
    for (p, e) in nf.iter().chain(df.iter()) {
        if p % 4 == 3 && e % 2 == 1 {
            core *= Rational::from_integer(BigInt::from(*p));
        }
    }
    let c = gaussian_of_norm(&(t / &core))?;
    Some((core, c))
}

/// Splits a positive rational as `q = m * s^2` with `m` a positive
/// squarefree integer.
pub fn squarefree_split(q: &Rational) -> Option<(Rational, Rational)> {
    if !q.is_positive() {
        return None;
    }
    let nf = factor(q.numer())?;
    let df = factor(q.denom())?;
    let mut m = BigInt::one();
    for (p, e) in nf.iter() {
        if e % 2 == 1 {
            m *= BigInt::from(*p);
        }
    }
    for (p, e) in df.iter() {
        if e % 2 == 1 {
            m *= BigInt::from(*p);
        }
    }
    let m = Rational::from_integer(m);
    // s^2 = q / m; s > 0.
    let s2 = q / &m;
    let sn = s2.numer().sqrt();
    let sd = s2.denom().sqrt();
    let s = Rational::new(sn, sd);
    if &(&s * &s) * &m != *q {
        return None;
    }
    Some((m, s))
}

/// Deterministic canonical representative of `v` up to multiplication by
/// units `±1, ±i`: the first nonzero coordinate gets positive real part,
/// or positive imaginary part if its real part is zero.
pub fn canonical_unit_scaling(v: &[GaussianRational]) -> GaussianRational {
    for c in v {
        if c.is_zero() {
            continue;
        }
        if c.re().is_positive() {
            return GaussianRational::one();
        }
        if c.re().is_negative() {
            return -GaussianRational::one();
        }
        return if c.im().is_positive() {
            -GaussianRational::i()
        } else {
            GaussianRational::i()
        };
    }
    GaussianRational::one()
}

/// Small helper for building rationals in tests and generators.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn gr(n: i64, d: i64) -> GaussianRational {
    GaussianRational::from_ratio(n, d)
}
