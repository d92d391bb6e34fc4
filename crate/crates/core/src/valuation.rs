//! The tilt model `F_p[t^(Z[1/p]≥0)]` with finite support.
//!
//! Elements are finite sums `Σ c_e t^e` with `c_e ∈ F_p^*` and exponents
//! `e ≥ 0` whose denominators are powers of `p`. The valuation is the t-adic
//! Gauss valuation normalized by `v(t) = 1`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::rat::{is_prime, Rat, Val};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TiltElement {
    p: u32,
    terms: BTreeMap<Rat, u32>,
}

impl TiltElement {
    pub fn zero(p: u32) -> Result<TiltElement> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        Ok(TiltElement {
            p,
            terms: BTreeMap::new(),
        })
    }

    pub fn one(p: u32) -> Result<TiltElement> {
        TiltElement::monomial(p, 1, Rat::zero())
    }

    /// `t` itself.
    pub fn t(p: u32) -> Result<TiltElement> {
        TiltElement::monomial(p, 1, Rat::one())
    }

    /// `coeff · t^exp`; a coefficient divisible by `p` gives zero.
    pub fn monomial(p: u32, coeff: i64, exp: Rat) -> Result<TiltElement> {
        TiltElement::from_terms(p, [(exp, coeff)])
    }

    /// Builds `Σ c·t^e`, summing repeated exponents mod `p` and dropping zeros.
    pub fn from_terms<I>(p: u32, terms: I) -> Result<TiltElement>
    where
        I: IntoIterator<Item = (Rat, i64)>,
    {
        let mut out = TiltElement::zero(p)?;
        for (e, c) in terms {
            if e.is_negative() {
                return Err(domain(format!("negative exponent {e} is outside O_F")));
            }
            if !e.has_p_power_denominator(p) {
                return Err(domain(format!(
                    "exponent {e} does not have a {p}-power denominator"
                )));
            }
            out.add_term(e, c.rem_euclid(p as i64) as u32);
        }
        Ok(out)
    }

    fn add_term(&mut self, e: Rat, c: u32) {
        if c == 0 {
            return;
        }
        let sum = (self.terms.get(&e).copied().unwrap_or(0) + c) % self.p;
        if sum == 0 {
            self.terms.remove(&e);
        } else {
            self.terms.insert(e, sum);
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Rat, u32)> {
        self.terms.iter().map(|(e, c)| (e, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// The t-adic valuation: least exponent in the support, `+∞` for zero.
    pub fn val(&self) -> Val {
        match self.terms.keys().next() {
            Some(e) => Val::Finite(e.clone()),
            None => Val::Infinite,
        }
    }

    fn same_prime(&self, other: &TiltElement) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn mul(&self, other: &TiltElement) -> Result<TiltElement> {
        self.same_prime(other)?;
        let p = self.p as u64;
        let mut acc: BTreeMap<Rat, u64> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let slot = acc.entry(ea + eb).or_insert(0);
                *slot = (*slot + (*ca as u64) * (*cb as u64)) % p;
            }
        }
        Ok(TiltElement {
            p: self.p,
            terms: acc
                .into_iter()
                .filter(|(_, c)| *c != 0)
                .map(|(e, c)| (e, c as u32))
                .collect(),
        })
    }

    pub fn pow(&self, k: u64) -> TiltElement {
        if self.is_monomial() {
            // c^k · t^(k·e), c^k reduced mod p
            let (e, c) = self.terms.iter().next().unwrap();
            let ck = mod_pow(*c as u64, k, self.p as u64) as u32;
            let mut terms = BTreeMap::new();
            terms.insert(e * &Rat::int(k), ck);
            return TiltElement { p: self.p, terms };
        }
        let mut result = TiltElement {
            p: self.p,
            terms: BTreeMap::from([(Rat::zero(), 1)]),
        };
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.mul(&base).expect("same prime");
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base).expect("same prime");
            }
        }
        result
    }

    /// `φ^n`: every exponent is multiplied by `p^n`. Coefficients live in the
    /// prime field, where Frobenius is the identity.
    pub fn frobenius(&self, n: i64) -> TiltElement {
        let scale = Rat::pow_int(self.p, n);
        TiltElement {
            p: self.p,
            terms: self.terms.iter().map(|(e, c)| (e * &scale, *c)).collect(),
        }
    }

    /// Rebuilds the element term by term through `f(exponent, coeff)`.
    pub(crate) fn map_terms<F>(&self, f: F) -> Result<TiltElement>
    where
        F: Fn(&Rat, u32) -> (Rat, i64),
    {
        TiltElement::from_terms(self.p, self.terms.iter().map(|(e, c)| f(e, *c)))
    }
}

pub(crate) fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

impl fmt::Display for TiltElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mono = if e.is_zero() {
                    String::new()
                } else if e.is_integer() {
                    format!("t^{}", e.numer())
                } else {
                    format!("t^({e})")
                };
                match (*c, mono.is_empty()) {
                    (c, true) => c.to_string(),
                    (1, false) => mono,
                    (c, false) => format!("{c}·{mono}"),
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for TiltElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TiltElement<p={}>({self})", self.p)
    }
}

/// Valuation of a tilt element; see [`TiltElement::val`].
pub fn tilt_val(x: &TiltElement) -> Val {
    x.val()
}

pub fn tilt_mul(x: &TiltElement, y: &TiltElement) -> Result<TiltElement> {
    x.mul(y)
}

pub fn tilt_frobenius(x: &TiltElement, n: i64) -> TiltElement {
    x.frobenius(n)
}
