//! Witt-vector presentations over the tilt model.
//!
//! A [`WittExpr`] is a finite presentation `Σ [x_i]·p^i` (with `i` allowed to
//! be negative, modelling elements of `B`). It is not a normal form: there is
//! no carry arithmetic, only Teichmüller products and slotwise assembly.
//! Norms are handled in additive form. With `ρ = |t|^r`, the Gauss norm
//! `|Σ[x_i]p^i|_ρ = sup |x_i|·ρ^i` corresponds to
//! `λ = min_i (v(x_i) + i·r)`, and `ρ = 1` is `r = 0`.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{domain, Error, Result};
use crate::rat::{check_odd_prime, ell_star, Rat, Val};
use crate::valuation::TiltElement;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WittExpr {
    p: u32,
    terms: BTreeMap<i64, TiltElement>,
}

impl WittExpr {
    pub fn zero(p: u32) -> WittExpr {
        WittExpr {
            p,
            terms: BTreeMap::new(),
        }
    }

    /// Sets slot `i` to `x` (replacing any previous entry); zero clears it.
    pub fn with_slot(mut self, i: i64, x: TiltElement) -> Result<WittExpr> {
        if x.p() != self.p {
            return Err(Error::PrimeMismatch(self.p, x.p()));
        }
        if x.is_zero() {
            self.terms.remove(&i);
        } else {
            self.terms.insert(i, x);
        }
        Ok(self)
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn slots(&self) -> impl Iterator<Item = (i64, &TiltElement)> {
        self.terms.iter().map(|(i, x)| (*i, x))
    }

    /// The lifted element when this is a single `[x]·p^0` term.
    pub fn as_teichmuller(&self) -> Option<&TiltElement> {
        match (self.terms.len(), self.terms.get(&0)) {
            (1, Some(x)) => Some(x),
            _ => None,
        }
    }

    /// `[x]p^i · [y]p^k = [xy]p^(i+k)`; defined only for single-term
    /// presentations since sums would need Witt carries.
    pub fn mul_single(&self, other: &WittExpr) -> Result<WittExpr> {
        if self.is_zero() || other.is_zero() {
            return Ok(WittExpr::zero(self.p));
        }
        let single = |w: &WittExpr| -> Result<(i64, TiltElement)> {
            let mut it = w.terms.iter();
            match (it.next(), it.next()) {
                (Some((i, x)), None) => Ok((*i, x.clone())),
                _ => Err(domain("product of multi-term presentations needs Witt carries")),
            }
        };
        let (i, x) = single(self)?;
        let (k, y) = single(other)?;
        WittExpr::zero(self.p).with_slot(i + k, x.mul(&y)?)
    }
}

impl fmt::Display for WittExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(i, x)| match i {
                0 => format!("[{x}]"),
                1 => format!("[{x}]·p"),
                i => format!("[{x}]·p^{i}"),
            })
            .collect();
        f.write_str(&parts.join(" + "))
    }
}

/// The Teichmüller lift `[x]`, a single slot at `p^0`.
pub fn teichmuller(x: &TiltElement) -> WittExpr {
    WittExpr::zero(x.p())
        .with_slot(0, x.clone())
        .expect("prime matches by construction")
}

/// The norm parameter `ρ`.
///
/// `Weight(r)` stands for `ρ = |t|^r ∈ (0, 1)` with `r > 0`; `One` is the
/// boundary norm `|·|₁`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RhoWeight {
    Weight(Rat),
    One,
}

impl RhoWeight {
    pub fn weight(r: Rat) -> Result<RhoWeight> {
        if !r.is_positive() {
            return Err(domain(format!("rho weight must be positive, got {r}")));
        }
        Ok(RhoWeight::Weight(r))
    }

    /// The additive weight of one power of `p`.
    pub fn r(&self) -> Rat {
        match self {
            RhoWeight::Weight(r) => r.clone(),
            RhoWeight::One => Rat::zero(),
        }
    }
}

impl fmt::Display for RhoWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RhoWeight::Weight(r) => write!(f, "rho=|t|^({r})"),
            RhoWeight::One => f.write_str("rho=1"),
        }
    }
}

/// Additive Gauss norm `λ = min_i (v(x_i) + i·r)`.
///
/// `Val::Infinite` is returned for the zero expression (norm `0`, log-norm
/// `−∞`). For a single Teichmüller term the value is exact; for longer
/// presentations it bounds the norm of the denoted element from above, since
/// presentations are not unique.
pub fn gauss_log_norm(w: &WittExpr, rho: &RhoWeight) -> Val {
    w.slots()
        .map(|(i, x)| match x.val() {
            Val::Finite(v) => Val::Finite(slot_log_norm(&v, i, rho)),
            Val::Infinite => Val::Infinite,
        })
        .min()
        .unwrap_or(Val::Infinite)
}

/// Additive norm of a single slot `[x]·p^i` with `v_F(x) = v`.
pub fn slot_log_norm(v: &Rat, i: i64, rho: &RhoWeight) -> Rat {
    v + &(Rat::int(i) * rho.r())
}

/// `B⁺ = {λ : |λ|₁ ≤ 1}`, tested on the presentation.
pub fn in_b_plus(w: &WittExpr) -> bool {
    gauss_log_norm(w, &RhoWeight::One) >= Val::Finite(Rat::zero())
}

/// A primitive element of degree one, `[a] − p` with `a ∈ 𝔪_F − {0}`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct PrimitiveDeg1 {
    a: TiltElement,
}

impl PrimitiveDeg1 {
    pub fn new(a: TiltElement) -> Result<PrimitiveDeg1> {
        match a.val() {
            Val::Finite(v) if v.is_positive() => Ok(PrimitiveDeg1 { a }),
            _ => Err(domain(format!("{a} is not in m_F - {{0}}"))),
        }
    }

    pub fn a(&self) -> &TiltElement {
        &self.a
    }

    /// `v_F(a)`, which is `v_K(p)` in tilt units for the untilt this cuts out.
    pub fn v_p(&self) -> Rat {
        self.a.val().finite().cloned().expect("validated nonzero")
    }
}

impl fmt::Display for PrimitiveDeg1 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] - p", self.a)
    }
}

/// `([a^{j²}] − p)` for `j = 1..ℓ*`.
pub fn primitive_pow_family(a: &TiltElement, ell: u32) -> Result<Vec<PrimitiveDeg1>> {
    check_odd_prime(ell, Some(a.p()))?;
    PrimitiveDeg1::new(a.clone())?;
    (1..=ell_star(ell) as u64)
        .map(|j| PrimitiveDeg1::new(a.pow(j * j)))
        .collect()
}

/// `φ^n([a] − p) = [φ^n(a)] − p`.
pub fn primitive_frobenius(w: &PrimitiveDeg1, n: i64) -> PrimitiveDeg1 {
    PrimitiveDeg1 {
        a: w.a.frobenius(n),
    }
}

/// Valuation of `η_K([x])` in the untilt cut out by `prim`, normalized so
/// that `v_K(p) = 1`: this is `v_F(x) / v_F(a)`.
pub fn eta_val(prim: &PrimitiveDeg1, x: &TiltElement) -> Val {
    match x.val() {
        Val::Finite(v) => Val::Finite(v / prim.v_p()),
        Val::Infinite => Val::Infinite,
    }
}

/// A coset `[x] + τ` with `τ` ranging over a Tate module.
///
/// Only the Teichmüller representative is carried. Its norm is known only
/// from one side: `sup_τ |[x] + τ|_ρ ≥ |[x]|_ρ`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TateCoset {
    pub lift: TiltElement,
}

impl TateCoset {
    /// In additive form the sup norm is *at most* this valuation.
    pub fn log_norm_at_most(&self, rho: &RhoWeight) -> Val {
        gauss_log_norm(&teichmuller(&self.lift), rho)
    }
}
