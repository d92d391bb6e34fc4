//! Log-link valuation dynamics: the p-adic logarithm on principal units,
//! valuation chains along a Frobenius fiber, and Kummer shift bookkeeping.
//!
//! Chain entries for different indices live in different untilts. There is
//! deliberately no operation identifying or converting between them.

use std::collections::BTreeMap;
use std::ops::RangeInclusive;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::rat::{is_prime, Rat};

/// A principal unit of `Z_p` known modulo `p^N`: `u ≡ 1 mod p`
/// (mod 4 when `p = 2`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PadicUnit {
    p: u32,
    precision: u32,
    value: BigInt,
}

/// Smallest precision at which the principal-unit condition is visible.
pub fn min_precision(p: u32) -> u32 {
    if p == 2 {
        2
    } else {
        1
    }
}

fn modulus(p: u32, n: u32) -> BigInt {
    BigInt::from(p).pow(n)
}

impl PadicUnit {
    pub fn new(p: u32, precision: u32, value: impl Into<BigInt>) -> Result<PadicUnit> {
        if !is_prime(p as u64) {
            return Err(Error::NotPrime(p as u64));
        }
        let required = min_precision(p);
        if precision < required {
            return Err(Error::Precision {
                required,
                given: precision,
            });
        }
        let value = value.into().mod_floor(&modulus(p, precision));
        let base = if p == 2 { BigInt::from(4) } else { BigInt::from(p) };
        if !(&value - 1u32).mod_floor(&base).is_zero() {
            return Err(domain(format!("{value} is not a principal unit mod {base}")));
        }
        Ok(PadicUnit {
            p,
            precision,
            value,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn precision(&self) -> u32 {
        self.precision
    }

    pub fn value(&self) -> &BigInt {
        &self.value
    }

    pub fn modulus(&self) -> BigInt {
        modulus(self.p, self.precision)
    }

    pub fn mul(&self, other: &PadicUnit) -> Result<PadicUnit> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        let n = self.precision.min(other.precision);
        PadicUnit::new(self.p, n, &self.value * &other.value)
    }

    pub fn pow(&self, k: u32) -> PadicUnit {
        PadicUnit {
            p: self.p,
            precision: self.precision,
            value: self.value.modpow(&BigInt::from(k), &self.modulus()),
        }
    }
}

fn vp_u64(mut k: u64, p: u64) -> u32 {
    let mut v = 0;
    while k.is_multiple_of(p) {
        k /= p;
        v += 1;
    }
    v
}

fn vp_big(x: &BigInt, p: u32) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && x.mod_floor(&p).is_zero() {
        x /= &p;
        v += 1;
    }
    v
}

fn floor_log(k: u64, p: u64) -> u32 {
    let mut v = 0;
    let mut m = p;
    while m <= k {
        m *= p;
        v += 1;
    }
    v
}

/// `log(u) = Σ_{k≥1} (−1)^{k+1} (u−1)^k / k`, exact mod `p^N`.
///
/// With `v = v_p(u − 1)`, the term at `k` has valuation at least
/// `k·v − v_p(k) ≥ k·v − ⌊log_p k⌋`, which is nondecreasing in `k`. The sum
/// stops at the first `k` where that reaches `N`. Terms are computed modulo
/// `p^{N+E}`, with `E` the largest `v_p(k)` used, so dividing out `p^{v_p(k)}`
/// loses nothing mod `p^N`.
pub fn padic_log(u: &PadicUnit) -> Result<BigInt> {
    let (p, n) = (u.p, u.precision);
    let target = u.modulus();
    let x = (&u.value - 1u32).mod_floor(&target);
    if x.is_zero() {
        return Ok(BigInt::zero());
    }
    let v = vp_big(&x, p) as u64;
    let mut cutoff = 0u64;
    while (cutoff + 1) * v < n as u64 + floor_log(cutoff + 1, p as u64) as u64 {
        cutoff += 1;
    }
    let extra = (1..=cutoff).map(|k| vp_u64(k, p as u64)).max().unwrap_or(0);
    let work = modulus(p, n + extra);

    let mut acc = BigInt::zero();
    let mut power = BigInt::one();
    for k in 1..=cutoff {
        power = (&power * &x).mod_floor(&work);
        let vk = vp_u64(k, p as u64);
        let (quot, rem) = power.div_rem(&modulus(p, vk));
        if !rem.is_zero() {
            return Err(Error::Precision {
                required: n + vk,
                given: n,
            });
        }
        let unit = BigInt::from(k / (p as u64).pow(vk));
        let inv = unit
            .modinv(&target)
            .ok_or_else(|| Error::Invariant(format!("{unit} not invertible")))?;
        let term = quot * inv;
        if k % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc.mod_floor(&target))
}

/// Outcome of randomized logarithm property trials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogTrials {
    pub p: u32,
    pub precision: u32,
    pub trials: usize,
    /// Trials where `log(uw) ≠ log(u) + log(w)` mod `p^N`.
    pub homomorphism_failures: usize,
    /// Trials where `log(u^p) ≠ p·log(u)` mod `p^N`.
    pub power_failures: usize,
}

impl LogTrials {
    pub fn pass(&self) -> bool {
        self.homomorphism_failures == 0 && self.power_failures == 0
    }
}

/// A uniformly random principal unit mod `p^N`.
pub fn random_unit<R: Rng>(rng: &mut R, p: u32, precision: u32) -> Result<PadicUnit> {
    let step = if p == 2 { 2 } else { 1 };
    let mut r = BigInt::zero();
    for _ in step..precision {
        r = r * p + rng.gen_range(0..p);
    }
    PadicUnit::new(p, precision, BigInt::one() + r * BigInt::from(p).pow(step))
}

pub fn log_property_trials(p: u32, precision: u32, trials: usize, seed: u64, exec: Exec) -> Result<LogTrials> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs = (0..trials)
        .map(|_| Ok((random_unit(&mut rng, p, precision)?, random_unit(&mut rng, p, precision)?)))
        .collect::<Result<Vec<_>>>()?;
    let m = modulus(p, precision);
    let outcomes = exec.map(&pairs, |(u, w)| -> Result<(bool, bool)> {
        let lu = padic_log(u)?;
        let lw = padic_log(w)?;
        let luw = padic_log(&u.mul(w)?)?;
        let hom = luw == (&lu + &lw).mod_floor(&m);
        let pow = padic_log(&u.pow(p))? == (&lu * p).mod_floor(&m);
        Ok((hom, pow))
    });
    let mut report = LogTrials {
        p,
        precision,
        trials,
        homomorphism_failures: 0,
        power_failures: 0,
    };
    for o in outcomes {
        let (hom, pow) = o?;
        report.homomorphism_failures += usize::from(!hom);
        report.power_failures += usize::from(!pow);
    }
    Ok(report)
}

/// `v_n(p)` along the fiber `{y_n}`, in tilt units: `v_n = v_0·p^n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogLinkChain {
    pub p: u32,
    pub v0: Rat,
    pub entries: BTreeMap<i64, Rat>,
}

impl LogLinkChain {
    /// `v_n / v_{n−1} = p` for every adjacent pair.
    pub fn ratios(&self) -> Vec<(i64, Rat)> {
        self.entries
            .iter()
            .zip(self.entries.iter().skip(1))
            .map(|((_, lo), (n, hi))| (*n, hi / lo))
            .collect()
    }

    pub fn ratios_exact(&self) -> bool {
        let p = Rat::int(self.p);
        self.ratios().iter().all(|(_, r)| *r == p)
    }

    /// `|p|_{K_{n−1}} > |p|_{K_n}`, i.e. `v_{n−1} < v_n`.
    pub fn norms_grow_downward(&self) -> bool {
        self.entries
            .values()
            .zip(self.entries.values().skip(1))
            .all(|(lo, hi)| lo < hi)
    }
}

pub fn chain_build(p: u32, v0: &Rat, window: RangeInclusive<i64>) -> Result<LogLinkChain> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if !v0.is_positive() {
        return Err(domain("v(p) must be positive"));
    }
    let entries = window.map(|n| (n, v0 * &Rat::pow_int(p, n))).collect();
    Ok(LogLinkChain {
        p,
        v0: v0.clone(),
        entries,
    })
}

/// Least `m ≥ 0` with `1/p^m < ε`, so that `|p|^{1/p^m} > |p|^ε`.
///
/// For `ε ≥ 1` the answer is `0`.
pub fn m_of_epsilon(p: u32, eps: &Rat) -> Result<u32> {
    if !eps.is_positive() {
        return Err(domain("epsilon must be positive"));
    }
    if *eps >= Rat::one() {
        return Ok(0);
    }
    let mut m = 0u32;
    while Rat::pow_int(p, -(m as i64)) >= *eps {
        m += 1;
    }
    Ok(m)
}

/// The p-power exponent by which the Kummer embeddings at `y_{n1}` and
/// `y_{n2}` differ.
pub fn kummer_shift(n1: i64, n2: i64) -> i64 {
    n2 - n1
}
