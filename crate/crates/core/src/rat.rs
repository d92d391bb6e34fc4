//! Exact rationals and extended valuations.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error};

/// An arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
///
/// `Display` renders the canonical `num/den` form (integers included, e.g.
/// `5/1`), which is also what `FromStr` accepts alongside bare integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rat(BigRational);

impl Rat {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Rat {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Rat(BigRational::new(num.into(), den))
    }

    pub fn int(n: impl Into<BigInt>) -> Rat {
        Rat(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Rat {
        Rat(BigRational::zero())
    }

    pub fn one() -> Rat {
        Rat(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn recip(&self) -> Rat {
        Rat(self.0.recip())
    }

    pub fn abs(&self) -> Rat {
        Rat(self.0.abs())
    }

    /// `base^exp` for a signed exponent; `base` must be nonzero when `exp < 0`.
    pub fn pow_int(base: u32, exp: i64) -> Rat {
        let mag = BigInt::from(base).pow(exp.unsigned_abs() as u32);
        if exp >= 0 {
            Rat::int(mag)
        } else {
            Rat::new(1, mag)
        }
    }

    /// The integer value, if this rational is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.numer().to_i64()
        } else {
            None
        }
    }

    /// True when the denominator is a power of `p` (including `p^0 = 1`).
    pub fn has_p_power_denominator(&self, p: u32) -> bool {
        let p = BigInt::from(p);
        let mut d = self.denom().clone();
        while !d.is_one() {
            let (q, r) = d.div_rem(&p);
            if !r.is_zero() {
                return false;
            }
            d = q;
        }
        true
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rat, Error> {
        let s = s.trim();
        let parse = |t: &str| {
            t.trim()
                .parse::<BigInt>()
                .map_err(|_| domain(format!("not an exact rational: {s:?}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(domain(format!("zero denominator in {s:?}")));
                }
                Ok(Rat::new(parse(n)?, d))
            }
            None => Ok(Rat::int(parse(s)?)),
        }
    }
}

impl From<i64> for Rat {
    fn from(n: i64) -> Rat {
        Rat::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&Rat> for &Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat((&self.0).$m(&rhs.0))
            }
        }
        impl $tr<Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: Rat) -> Rat {
                Rat(self.0.$m(rhs.0))
            }
        }
        impl $tr<&Rat> for Rat {
            type Output = Rat;
            fn $m(self, rhs: &Rat) -> Rat {
                Rat(self.0.$m(&rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl<'a> std::iter::Sum<&'a Rat> for Rat {
    fn sum<I: Iterator<Item = &'a Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

impl std::iter::Sum<Rat> for Rat {
    fn sum<I: Iterator<Item = Rat>>(iter: I) -> Rat {
        iter.fold(Rat::zero(), |acc, x| acc + x)
    }
}

/// An additive valuation value: a finite rational or `+∞` (the valuation of
/// zero). The derived order puts every finite value below `Infinite`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Val {
    Finite(Rat),
    Infinite,
}

impl Val {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            Val::Finite(r) => Some(r),
            Val::Infinite => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Val::Infinite)
    }
}

impl fmt::Display for Val {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Val::Finite(r) => fmt::Display::fmt(r, f),
            Val::Infinite => f.write_str("inf"),
        }
    }
}

impl Add for Val {
    type Output = Val;
    fn add(self, rhs: Val) -> Val {
        match (self, rhs) {
            (Val::Finite(a), Val::Finite(b)) => Val::Finite(a + b),
            _ => Val::Infinite,
        }
    }
}

impl From<Rat> for Val {
    fn from(r: Rat) -> Val {
        Val::Finite(r)
    }
}

/// Compares two valuations in the common value group of the tilt.
///
/// Valuations computed for different untilts are all expressed in the tilt's
/// value group, so the comparison is the plain order on `Q ∪ {+∞}`.
pub fn untilt_val_compare(vx: &Val, vy: &Val) -> Ordering {
    vx.cmp(vy)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Validates an odd prime `ell` distinct from the residue characteristic `p`.
pub fn check_odd_prime(ell: u32, p: Option<u32>) -> crate::Result<()> {
    if !is_prime(ell as u64) {
        return Err(Error::NotPrime(ell as u64));
    }
    if ell == 2 {
        return Err(domain("ell must be an odd prime"));
    }
    if p == Some(ell) {
        return Err(domain(format!("ell = {ell} coincides with p")));
    }
    Ok(())
}

/// `ℓ* = (ℓ − 1)/2`.
pub fn ell_star(ell: u32) -> u32 {
    (ell - 1) / 2
}

pub fn odd_primes_up_to(max: u32) -> Vec<u32> {
    (3..=max).filter(|&n| is_prime(n as u64)).collect()
}
