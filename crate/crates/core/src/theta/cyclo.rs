//! Exact arithmetic in `Z[ζ_{2ℓ}] = Z[x]/Φ_{2ℓ}(x)` for an odd prime `ℓ`.
//!
//! `Φ_{2ℓ}(x) = Φ_ℓ(−x) = Σ_{i<ℓ} (−x)^i` has degree `ℓ − 1`, and the powers
//! `1, x, …, x^{ℓ−2}` form a basis, so representations are canonical and
//! equality is coefficientwise. `ζ_ℓ = ζ_{2ℓ}^2`.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_traits::{One, Zero};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloElt {
    ell: u32,
    coeffs: Vec<BigInt>,
}

impl CycloElt {
    pub fn zero(ell: u32) -> CycloElt {
        CycloElt {
            ell,
            coeffs: vec![BigInt::zero(); (ell - 1) as usize],
        }
    }

    pub fn one(ell: u32) -> CycloElt {
        CycloElt::zeta_2ell_pow(ell, 0)
    }

    /// `ζ_{2ℓ}^k` for any integer `k`.
    pub fn zeta_2ell_pow(ell: u32, k: i64) -> CycloElt {
        let mut out = CycloElt::zero(ell);
        out.add_monomial(BigInt::one(), k);
        out
    }

    /// `ζ_ℓ^k`.
    pub fn zeta_ell_pow(ell: u32, k: i64) -> CycloElt {
        CycloElt::zeta_2ell_pow(ell, 2 * k)
    }

    pub fn from_int(ell: u32, n: impl Into<BigInt>) -> CycloElt {
        let mut out = CycloElt::zero(ell);
        out.coeffs[0] = n.into();
        out
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Adds `c·x^k`, reducing with `x^ℓ = −1` and then
    /// `x^{ℓ−1} = −Σ_{i<ℓ−1} (−1)^i x^i`.
    fn add_monomial(&mut self, c: BigInt, k: i64) {
        let ell = self.ell as i64;
        let k = k.rem_euclid(2 * ell);
        let (k, c) = if k >= ell { (k - ell, -c) } else { (k, c) };
        let d = ell - 1;
        if k < d {
            self.coeffs[k as usize] += c;
        } else {
            for i in 0..d {
                if i % 2 == 0 {
                    self.coeffs[i as usize] -= &c;
                } else {
                    self.coeffs[i as usize] += &c;
                }
            }
        }
    }
}

impl Add for &CycloElt {
    type Output = CycloElt;
    fn add(self, rhs: &CycloElt) -> CycloElt {
        assert_eq!(self.ell, rhs.ell, "cyclotomic rings differ");
        CycloElt {
            ell: self.ell,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Neg for &CycloElt {
    type Output = CycloElt;
    fn neg(self) -> CycloElt {
        CycloElt {
            ell: self.ell,
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }
}

impl Mul for &CycloElt {
    type Output = CycloElt;
    fn mul(self, rhs: &CycloElt) -> CycloElt {
        assert_eq!(self.ell, rhs.ell, "cyclotomic rings differ");
        let mut out = CycloElt::zero(self.ell);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.add_monomial(a * b, (i + j) as i64);
                }
            }
        }
        out
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => c.to_string(),
                _ => format!("{c}·z^{i}"),
            })
            .collect();
        if parts.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&parts.join(" + "))
        }
    }
}
