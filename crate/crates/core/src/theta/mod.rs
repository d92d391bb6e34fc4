//! Tate-curve theta series, their functional equations, and theta values.
//!
//! Theta values are evaluated with the series in the base parameter
//! `Q = q^{1/ℓ}`, so that the shift by `Q^{j/2} = q^{j/2ℓ}` lands on the
//! torsion points `q^{j/2ℓ}ζ_ℓ`. The formal variable `s = q^{1/2ℓ}` keeps
//! every exponent integral: `Q = s²`, `q = s^{2ℓ}`.

mod cyclo;
mod series;

use std::collections::BTreeMap;
use std::fmt;

pub use cyclo::CycloElt;
pub use series::{
    check_inversion_antisymmetry, check_quasi_periodicity, check_vanishing_at_q_half_power,
    quasi_shift, theta_terms, InversionReport, QuasiPeriodicityReport, QuasiShift,
    SignConvention, ThetaSeriesTrunc, ThetaTerm, VanishingReport,
};

use crate::error::{domain, Result};
use crate::exec::Exec;
use crate::rat::{check_odd_prime, ell_star, Rat};

/// A Laurent polynomial in `s = q^{1/2ℓ}` over `Z[ζ_{2ℓ}]`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QLaurent {
    ell: u32,
    terms: BTreeMap<i64, CycloElt>,
}

impl QLaurent {
    pub fn zero(ell: u32) -> QLaurent {
        QLaurent {
            ell,
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, s_exp: i64, c: &CycloElt) {
        let sum = match self.terms.get(&s_exp) {
            Some(prev) => prev + c,
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&s_exp);
        } else {
            self.terms.insert(s_exp, sum);
        }
    }

    /// Multiplies by the monomial `c · s^k`.
    pub fn scale(&self, k: i64, c: &CycloElt) -> QLaurent {
        let mut out = QLaurent::zero(self.ell);
        for (e, x) in &self.terms {
            out.add_term(e + k, &(x * c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lowest(&self) -> Option<(i64, &CycloElt)> {
        self.terms.iter().next().map(|(e, c)| (*e, c))
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &CycloElt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(e, c)| format!("({c})·s^{e}"))
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The term of `θ` at index `n`, evaluated at `u = s^j ζ_ℓ^k` in base `Q = s²`.
fn eval_term(t: &ThetaTerm, j: i64, k: i64, ell: u32) -> (i64, CycloElt) {
    let s_exp = 2 * t.q_exp + j * t.u_exp;
    let c = CycloElt::zeta_ell_pow(ell, k * t.u_exp);
    let c = if t.sign < 0 { -&c } else { c };
    (s_exp, c)
}

/// Evaluates the truncated series at `u = s^j·ζ_ℓ^k`.
pub fn eval_theta_laurent(series: &ThetaSeriesTrunc, j: i64, k: i64, ell: u32) -> Result<QLaurent> {
    check_odd_prime(ell, None)?;
    let mut out = QLaurent::zero(ell);
    for t in series.terms() {
        let (e, c) = eval_term(t, j, k, ell);
        out.add_term(e, &c);
    }
    Ok(out)
}

/// Result of comparing `θ(Q^{j/2}ζ^k)` with `(−1)^j Q^{−j²/2} ζ^{−2jk} θ(ζ^k)`
/// over the overlap window, as exact Laurent polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioCheck {
    pub pass: bool,
    pub overlap: usize,
    pub lhs: QLaurent,
    pub rhs: QLaurent,
}

pub fn check_theta_ratio(series: &ThetaSeriesTrunc, j: i64, k: i64, ell: u32) -> Result<RatioCheck> {
    check_odd_prime(ell, None)?;
    let qp = check_quasi_periodicity(series, j)?;
    let (lo, hi) = series.window();
    let mut lhs = QLaurent::zero(ell);
    let mut base = QLaurent::zero(ell);
    for n in (lo + j.abs())..=(hi - j.abs()) {
        let (e, c) = eval_term(series.term(n).unwrap(), j, k, ell);
        lhs.add_term(e, &c);
        let (e, c) = eval_term(series.term(n + j).unwrap(), 0, k, ell);
        base.add_term(e, &c);
    }
    let shift = quasi_shift(j);
    let zeta = CycloElt::zeta_ell_pow(ell, k * shift.u_exp);
    let factor = if shift.sign < 0 { -&zeta } else { zeta };
    // Q^{−j²/2} = s^{−j²}
    let rhs = base.scale(shift.q_exp_doubled, &factor);
    Ok(RatioCheck {
        pass: qp.pass && lhs == rhs,
        overlap: qp.overlap,
        lhs,
        rhs,
    })
}

/// Runs the quasi-periodicity check for every shift in `js`.
pub fn quasi_periodicity_sweep(
    series: &ThetaSeriesTrunc,
    js: &[i64],
    exec: Exec,
) -> Result<Vec<QuasiPeriodicityReport>> {
    exec.map(js, |&j| check_quasi_periodicity(series, j))
        .into_iter()
        .collect()
}

/// The theta value `ξ_j = (−1)^j q^{j²/2ℓ} ζ_ℓ^{2j}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ThetaValue {
    pub j: u32,
    pub ell: u32,
    pub sign: i64,
    /// Valuation in units of `v(q)`.
    pub q_exponent: Rat,
    /// Exponent of `ζ_ℓ`, reduced mod `ℓ`.
    pub zeta_exponent: u32,
}

impl ThetaValue {
    /// `1/ξ_j = θ(q^{j/2ℓ}ζ_ℓ)/θ(ζ_ℓ)`, as (sign, q-exponent, ζ-exponent).
    pub fn reciprocal(&self) -> (i64, Rat, u32) {
        (
            self.sign,
            -self.q_exponent.clone(),
            (self.ell - self.zeta_exponent) % self.ell,
        )
    }

    /// `v(ξ_j)` given the valuation of the Tate parameter.
    pub fn valuation(&self, v_q: &Rat) -> Rat {
        &self.q_exponent * v_q
    }
}

/// Derives `ξ_j` from the quasi-periodicity factor in base `Q = q^{1/ℓ}` at
/// `u = ζ_ℓ`, then inverts it.
pub fn theta_value(j: u32, ell: u32) -> Result<ThetaValue> {
    check_odd_prime(ell, None)?;
    if j < 1 || j > ell_star(ell) {
        return Err(domain(format!(
            "theta value index j = {j} outside 1..={}",
            ell_star(ell)
        )));
    }
    let shift = quasi_shift(j as i64);
    // Q^{e/2} = q^{e/2ℓ}; u^{−2j} with u = ζ_ℓ.
    let recip_q = Rat::new(shift.q_exp_doubled, 2 * ell as i64);
    let recip_zeta = shift.u_exp;
    Ok(ThetaValue {
        j,
        ell,
        sign: shift.sign,
        q_exponent: -recip_q,
        zeta_exponent: (-recip_zeta).rem_euclid(ell as i64) as u32,
    })
}
