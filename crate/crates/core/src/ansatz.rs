//! Primitive ansatz tuples `([a] − p, [a^{2²}] − p, …, [a^{ℓ*²}] − p)`.

use std::ops::RangeInclusive;

use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::rat::{check_odd_prime, ell_star, Rat, Val};
use crate::valuation::{mod_pow, TiltElement};
use crate::witt::{primitive_pow_family, PrimitiveDeg1};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct AnsatzPoint {
    a: TiltElement,
    ell: u32,
    members: Vec<PrimitiveDeg1>,
}

impl AnsatzPoint {
    pub fn a(&self) -> &TiltElement {
        &self.a
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn p(&self) -> u32 {
        self.a.p()
    }

    pub fn members(&self) -> &[PrimitiveDeg1] {
        &self.members
    }
}

pub fn make_ansatz(a: &TiltElement, ell: u32) -> Result<AnsatzPoint> {
    let members = primitive_pow_family(a, ell)?;
    Ok(AnsatzPoint {
        a: a.clone(),
        ell,
        members,
    })
}

/// Membership in the ansatz: the first member fixes `a`, and member `j`
/// must be exactly `[a^{j²}] − p`.
pub fn is_member(tuple: &[PrimitiveDeg1]) -> bool {
    let Some(first) = tuple.first() else {
        return false;
    };
    let a = first.a();
    tuple.iter().enumerate().all(|(i, m)| {
        let j = (i + 1) as u64;
        m.a().p() == a.p() && *m.a() == a.pow(j * j)
    })
}

/// Every degree-one primitive element is the first member of some ansatz
/// point: take `a` to be its own `a`-part.
pub fn extend_singleton(prim: &PrimitiveDeg1, ell: u32) -> Result<AnsatzPoint> {
    make_ansatz(prim.a(), ell)
}

pub fn frobenius_orbit(pt: &AnsatzPoint, range: RangeInclusive<i64>) -> Vec<AnsatzPoint> {
    frobenius_orbit_with(pt, range, Exec::default())
}

pub fn frobenius_orbit_with(pt: &AnsatzPoint, range: RangeInclusive<i64>, exec: Exec) -> Vec<AnsatzPoint> {
    let ns: Vec<i64> = range.collect();
    exec.map(&ns, |&n| {
        make_ansatz(&pt.a.frobenius(n), pt.ell).expect("Frobenius preserves m_F - {0}")
    })
}

/// `(v_{K_j}(p))_j` in tilt units: `j²·v_F(a)`.
pub fn valuation_profile(pt: &AnsatzPoint) -> Vec<Rat> {
    pt.members.iter().map(PrimitiveDeg1::v_p).collect()
}

/// A valuation-level stand-in for the Galois action on the tilt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Substitution {
    Identity,
    /// The ring automorphism `t ↦ c·t`. On `t^{m/p^k}` it multiplies the
    /// coefficient by `c^m`, since `p`-power roots are trivial in `F_p`.
    ScaleT(i64),
    /// `t^e ↦ t^{λe}`; valuation-preserving only for `λ = 1`.
    ExponentScale(Rat),
}

impl Substitution {
    fn validate(&self, p: u32) -> Result<()> {
        match self {
            Substitution::Identity => Ok(()),
            Substitution::ScaleT(c) if c.rem_euclid(p as i64) == 0 => {
                Err(domain(format!("t -> {c}·t is not invertible over F_{p}")))
            }
            Substitution::ScaleT(_) => Ok(()),
            Substitution::ExponentScale(l) if *l == Rat::one() => Ok(()),
            Substitution::ExponentScale(l) => Err(domain(format!(
                "exponent scaling by {l} does not preserve valuations"
            ))),
        }
    }

    pub fn apply(&self, x: &TiltElement) -> Result<TiltElement> {
        let p = x.p();
        self.validate(p)?;
        match self {
            Substitution::Identity | Substitution::ExponentScale(_) => Ok(x.clone()),
            Substitution::ScaleT(c) => {
                let c = c.rem_euclid(p as i64) as u64;
                x.map_terms(|e, coeff| {
                    let m = e.numer().clone() % (p - 1).max(1);
                    let m: u64 = m.try_into().expect("reduced below p - 1");
                    let factor = mod_pow(c, m, p as u64);
                    (e.clone(), (coeff as u64 * factor % p as u64) as i64)
                })
            }
        }
    }
}

/// Applies `subst` to every member and checks that membership and the
/// valuation profile are unchanged.
pub fn scale_invariance_check(pt: &AnsatzPoint, subst: &Substitution) -> Result<bool> {
    let image = pt
        .members
        .iter()
        .map(|m| {
            let a = subst.apply(m.a())?;
            if a.val() != m.a().val() {
                return Err(Error::Invariant(format!("{subst:?} moved a valuation")));
            }
            PrimitiveDeg1::new(a)
        })
        .collect::<Result<Vec<_>>>()?;
    let before: Vec<Rat> = valuation_profile(pt);
    let after: Vec<Rat> = image.iter().map(PrimitiveDeg1::v_p).collect();
    Ok(is_member(&pt.members) == is_member(&image) && before == after)
}

/// The data a holomorphoid contributes downstream, per untilt.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HolomorphoidRecord {
    pub curve_label: String,
    pub j: u32,
    /// `v_K(p)` in tilt units.
    pub v_k_p: Rat,
    /// `v(q)` in p-normalized units.
    pub tate_param_val: Rat,
}

impl HolomorphoidRecord {
    pub fn new(curve_label: impl Into<String>, j: u32, v_k_p: Rat, tate_param_val: Rat) -> Result<Self> {
        if !tate_param_val.is_positive() {
            return Err(domain("Tate parameter must satisfy |q| < 1"));
        }
        if !v_k_p.is_positive() {
            return Err(domain("v_K(p) must be positive"));
        }
        Ok(HolomorphoidRecord {
            curve_label: curve_label.into(),
            j,
            v_k_p,
            tate_param_val,
        })
    }
}

/// One record per untilt of `pt`, all over the same curve.
pub fn holomorphoid_records(pt: &AnsatzPoint, curve_label: &str, v_q: &Rat) -> Result<Vec<HolomorphoidRecord>> {
    valuation_profile(pt)
        .into_iter()
        .enumerate()
        .map(|(i, v)| HolomorphoidRecord::new(curve_label, i as u32 + 1, v, v_q.clone()))
        .collect()
}

/// The ansatz point whose last member is the canonical point `[t] − p`.
///
/// When `1/ℓ*²` has a `p`-power denominator the model uses
/// `a = t^{1/ℓ*²}` directly. Otherwise the model's `t` is taken as
/// `a` and the canonical element is `t^{ℓ*²}`; both gauges are reported
/// through `canonical_v_p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessAnsatz {
    pub point: AnsatzPoint,
    /// `v_F` of the canonical element, i.e. `v_{C_p}(p)` in tilt units.
    pub canonical_v_p: Rat,
}

impl WitnessAnsatz {
    pub fn new(p: u32, ell: u32) -> Result<WitnessAnsatz> {
        check_odd_prime(ell, Some(p))?;
        let s = ell_star(ell) as i64;
        let root = Rat::new(1, s * s);
        let (a, canonical_v_p) = if root.has_p_power_denominator(p) {
            (TiltElement::monomial(p, 1, root)?, Rat::one())
        } else {
            (TiltElement::t(p)?, Rat::int(s * s))
        };
        Ok(WitnessAnsatz {
            point: make_ansatz(&a, ell)?,
            canonical_v_p,
        })
    }

    /// Profile in p-normalized units of `C_p`: `(j²/ℓ*²)_j`.
    pub fn normalized_profile(&self) -> Vec<Rat> {
        valuation_profile(&self.point)
            .iter()
            .map(|v| v / &self.canonical_v_p)
            .collect()
    }

    pub fn last_is_canonical(&self) -> bool {
        self.point
            .members
            .last()
            .map(|m| m.a().val() == Val::Finite(self.canonical_v_p.clone()) && m.a().is_monomial())
            .unwrap_or(false)
    }
}
