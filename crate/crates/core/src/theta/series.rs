//! The truncated theta series `θ(u) = Σ_n (−1)^n q^{n(n+1)/2} u^{2n+1}` and
//! exact checks of its functional equations.
//!
//! The prefactor `q^{−1/8}` is absorbed through
//! `n(n+1)/2 = (1/2)(n + 1/2)² − 1/8`, so every stored exponent is an integer.
//! Shifts by `q^{j/2}` produce half-integral q-exponents; those are carried
//! doubled (in units of `q^{1/2}`).

use std::collections::BTreeMap;

use crate::error::{Error, Result};

/// Whether the `(−1)^n` factor is present. `Unsigned` exists as a negative
/// control: without the sign the series is even under `u ↦ u⁻¹`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SignConvention {
    Signed,
    Unsigned,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ThetaTerm {
    pub n: i64,
    pub sign: i64,
    pub q_exp: i64,
    pub u_exp: i64,
}

impl ThetaTerm {
    fn new(n: i64, convention: SignConvention) -> ThetaTerm {
        let sign = match convention {
            SignConvention::Signed if n.rem_euclid(2) == 1 => -1,
            _ => 1,
        };
        ThetaTerm {
            n,
            sign,
            q_exp: n * (n + 1) / 2,
            u_exp: 2 * n + 1,
        }
    }
}

/// Terms of the theta series for `n` in a contiguous window `[lo, hi]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSeriesTrunc {
    lo: i64,
    hi: i64,
    convention: SignConvention,
    terms: Vec<ThetaTerm>,
}

impl ThetaSeriesTrunc {
    pub fn with_window(lo: i64, hi: i64, convention: SignConvention) -> ThetaSeriesTrunc {
        assert!(lo <= hi, "empty theta window");
        ThetaSeriesTrunc {
            lo,
            hi,
            convention,
            terms: (lo..=hi).map(|n| ThetaTerm::new(n, convention)).collect(),
        }
    }

    /// The symmetric window `[−N, N]`.
    pub fn symmetric(radius: u32, convention: SignConvention) -> ThetaSeriesTrunc {
        let r = radius as i64;
        ThetaSeriesTrunc::with_window(-r, r, convention)
    }

    pub fn window(&self) -> (i64, i64) {
        (self.lo, self.hi)
    }

    pub fn convention(&self) -> SignConvention {
        self.convention
    }

    pub fn terms(&self) -> &[ThetaTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term(&self, n: i64) -> Option<&ThetaTerm> {
        if n < self.lo || n > self.hi {
            None
        } else {
            self.terms.get((n - self.lo) as usize)
        }
    }

    /// Checks the stored descriptors: `8·q_exp = (2n+1)² − 1`, odd and
    /// strictly increasing `u`-exponents, and the sign convention.
    pub fn descriptors_consistent(&self) -> bool {
        let exps_ok = self.terms.iter().all(|t| {
            8 * t.q_exp == t.u_exp * t.u_exp - 1
                && t.u_exp == 2 * t.n + 1
                && *t == ThetaTerm::new(t.n, self.convention)
        });
        let increasing = self.terms.windows(2).all(|w| w[0].u_exp < w[1].u_exp);
        exps_ok && increasing
    }
}

/// Terms of the signed series for `n ∈ [−N, N]`.
pub fn theta_terms(radius: u32) -> ThetaSeriesTrunc {
    ThetaSeriesTrunc::symmetric(radius, SignConvention::Signed)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InversionReport {
    pub pass: bool,
    /// `(n, −n−1)` with `n ≥ 0`, both inside the window.
    pub pairs: Vec<(i64, i64)>,
    /// Indices whose partner falls outside the truncation window.
    pub boundary: Vec<i64>,
    /// Indices where `−θ(u⁻¹)` disagrees with the partner term.
    pub mismatches: Vec<i64>,
    /// The reindexing is a fixed-point-free involution on the matched set.
    pub involution_ok: bool,
    /// The matched terms cancel exactly at `u = 1`.
    pub cancels_at_one: bool,
}

/// Verifies `θ(u⁻¹) = −θ(u)` on the window via `n ↦ −n−1`.
///
/// The substitution `u ↦ u⁻¹` followed by negation sends the term at `n` to
/// `(−sign, q_exp, −u_exp)`, which must be the stored term at `−n−1`.
pub fn check_inversion_antisymmetry(series: &ThetaSeriesTrunc) -> InversionReport {
    let mut pairs = Vec::new();
    let mut boundary = Vec::new();
    let mut mismatches = Vec::new();
    let mut at_one: BTreeMap<i64, i64> = BTreeMap::new();
    let mut involution_ok = true;

    for t in series.terms() {
        let m = -t.n - 1;
        let Some(partner) = series.term(m) else {
            boundary.push(t.n);
            continue;
        };
        involution_ok &= m != t.n && -m - 1 == t.n;
        let transformed = (-t.sign, t.q_exp, -t.u_exp);
        if transformed != (partner.sign, partner.q_exp, partner.u_exp) {
            mismatches.push(t.n);
        }
        if t.n >= 0 {
            pairs.push((t.n, m));
        }
        *at_one.entry(t.q_exp).or_default() += t.sign;
    }
    let cancels_at_one = at_one.values().all(|c| *c == 0);

    InversionReport {
        pass: mismatches.is_empty() && involution_ok && cancels_at_one,
        pairs,
        boundary,
        mismatches,
        involution_ok,
        cancels_at_one,
    }
}

/// The factor in `θ(q^{j/2}u) = (−1)^j q^{−j²/2} u^{−2j} θ(u)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuasiShift {
    pub sign: i64,
    /// Exponent of `q^{1/2}`, i.e. twice the q-exponent: `−j²`.
    pub q_exp_doubled: i64,
    pub u_exp: i64,
}

pub fn quasi_shift(j: i64) -> QuasiShift {
    QuasiShift {
        sign: if j.rem_euclid(2) == 0 { 1 } else { -1 },
        q_exp_doubled: -j * j,
        u_exp: -2 * j,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiPeriodicityReport {
    pub j: i64,
    pub pass: bool,
    pub overlap: usize,
    pub shift: QuasiShift,
    pub mismatches: Vec<i64>,
}

/// Verifies the quasi-periodicity law term by term on `[lo+|j|, hi−|j|]`.
///
/// The term of `θ(q^{j/2}u)` at `n` is
/// `sign_n · q^{(2·q_n + j(2n+1))/2} · u^{2n+1}`; the shifted right-hand side
/// contributes `(−1)^j sign_{n+j} · q^{(2·q_{n+j} − j²)/2} · u^{2(n+j)+1−2j}`.
pub fn check_quasi_periodicity(series: &ThetaSeriesTrunc, j: i64) -> Result<QuasiPeriodicityReport> {
    let (lo, hi) = series.window();
    let (a, b) = (lo + j.abs(), hi - j.abs());
    if a > b {
        return Err(Error::Window {
            j,
            radius: ((hi - lo) / 2) as u32,
        });
    }
    let shift = quasi_shift(j);
    let mut mismatches = Vec::new();
    for n in a..=b {
        let lhs = series.term(n).expect("inside window");
        let rhs = series.term(n + j).expect("inside window");
        let left = (lhs.sign, 2 * lhs.q_exp + j * lhs.u_exp, lhs.u_exp);
        let right = (
            shift.sign * rhs.sign,
            2 * rhs.q_exp + shift.q_exp_doubled,
            rhs.u_exp + shift.u_exp,
        );
        if left != right {
            mismatches.push(n);
        }
    }
    Ok(QuasiPeriodicityReport {
        j,
        pass: mismatches.is_empty(),
        overlap: (b - a + 1) as usize,
        shift,
        mismatches,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VanishingReport {
    pub j: i64,
    pub pass: bool,
    pub cancelled_pairs: usize,
}

/// Verifies `θ(q^{j/2}) = 0` by exact pairing.
///
/// At `u = q^{j/2}` the term at `n` has doubled q-exponent
/// `(n+j)(n+j+1) − j²`, symmetric under `n ↦ −n−1−2j`. Every term in the
/// window is checked against its partner (generated from the same
/// convention when it falls outside the window): equal exponent, opposite
/// sign.
pub fn check_vanishing_at_q_half_power(series: &ThetaSeriesTrunc, j: i64) -> VanishingReport {
    let at = |t: &ThetaTerm| (t.sign, 2 * t.q_exp + j * t.u_exp);
    let mut pairs = std::collections::BTreeSet::new();
    let mut pass = true;
    for t in series.terms() {
        let m = -t.n - 1 - 2 * j;
        let partner = ThetaTerm::new(m, series.convention());
        let (s1, e1) = at(t);
        let (s2, e2) = at(&partner);
        pass &= e1 == e2 && s1 == -s2;
        pairs.insert((t.n.min(m), t.n.max(m)));
    }
    VanishingReport {
        j,
        pass,
        cancelled_pairs: pairs.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_window_descriptors() {
        let s = theta_terms(1);
        let got: Vec<_> = s.terms().iter().map(|t| (t.n, t.q_exp, t.u_exp, t.sign)).collect();
        assert_eq!(got, vec![(-1, 0, -1, -1), (0, 0, 1, 1), (1, 1, 3, -1)]);
        assert!(s.descriptors_consistent());

        let single = theta_terms(0);
        assert_eq!(single.len(), 1);
        assert_eq!(single.terms()[0].u_exp, 1);
        assert_eq!(single.terms()[0].q_exp, 0);
    }

    #[test]
    fn q_exponents_are_symmetric() {
        let s = theta_terms(9);
        for m in 0..9 {
            assert_eq!(s.term(-m - 1).unwrap().q_exp, s.term(m).unwrap().q_exp);
        }
    }

    #[test]
    fn inversion_examples() {
        let r = check_inversion_antisymmetry(&theta_terms(5));
        assert!(r.pass);
        assert_eq!(r.pairs.len(), 5);
        assert_eq!(r.boundary, vec![5]);
        assert_eq!(r.pairs.len() * 2 + r.boundary.len(), 11);

        assert!(check_inversion_antisymmetry(&theta_terms(1)).pass);

        let unsigned = ThetaSeriesTrunc::symmetric(5, SignConvention::Unsigned);
        let r = check_inversion_antisymmetry(&unsigned);
        assert!(!r.pass);
        assert_eq!(r.mismatches.len(), 10);
        assert!(!r.cancels_at_one);
    }

    #[test]
    fn quasi_periodicity_examples() {
        let s = theta_terms(4);
        let r0 = check_quasi_periodicity(&s, 0).unwrap();
        assert!(r0.pass);
        assert_eq!(r0.overlap, 9);

        let r1 = check_quasi_periodicity(&s, 1).unwrap();
        assert!(r1.pass);
        assert_eq!(r1.overlap, 7);

        let r2 = check_quasi_periodicity(&theta_terms(6), 2).unwrap();
        assert!(r2.pass);
        assert_eq!(r2.shift.q_exp_doubled, -4); // q^{-2}

        assert!(matches!(
            check_quasi_periodicity(&s, 5),
            Err(Error::Window { j: 5, .. })
        ));
        assert!(check_quasi_periodicity(&s, -4).unwrap().pass);
    }

    #[test]
    fn unsigned_series_breaks_odd_shifts() {
        let s = ThetaSeriesTrunc::symmetric(6, SignConvention::Unsigned);
        assert!(!check_quasi_periodicity(&s, 1).unwrap().pass);
        assert!(check_quasi_periodicity(&s, 2).unwrap().pass);
    }

    #[test]
    fn vanishes_at_half_powers() {
        let s = theta_terms(8);
        for j in -8..=8 {
            let r = check_vanishing_at_q_half_power(&s, j);
            assert!(r.pass, "j={j}");
        }
        let u = ThetaSeriesTrunc::symmetric(8, SignConvention::Unsigned);
        assert!(!check_vanishing_at_q_half_power(&u, 0).pass);
    }
}
