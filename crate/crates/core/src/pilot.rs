//! Theta-pilot tuples, finite Frobenius-closed samples of the theta set, and
//! the exact lower-bound engine.
//!
//! Everything is additive. A norm `|x| = ρ_0^{v}` with base in `(0, 1)` is
//! carried as the valuation `v`, so a product of norms becomes a sum of
//! valuations and the sup of products becomes the inf of those sums.

use num_integer::Roots;

use crate::ansatz::{frobenius_orbit_with, make_ansatz, valuation_profile, AnsatzPoint, WitnessAnsatz};
use crate::error::{domain, Error, Result};
use crate::exec::Exec;
use crate::rat::{check_odd_prime, ell_star, is_prime, odd_primes_up_to, Rat};
use crate::theta::theta_value;
use crate::witt::{slot_log_norm, RhoWeight};

/// Lifts `[x_j]` of one theta value through each untilt of an ansatz point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PilotTuple {
    pub ansatz: AnsatzPoint,
    /// `v(ξ)` with `v_K(p) = 1`.
    pub xi_val: Rat,
    /// `e_j = v_F(x_j)` in tilt units.
    pub lifts: Vec<Rat>,
}

impl PilotTuple {
    /// Checks `e_j = j²·e_1` and `e_j > 0`.
    pub fn scaling_holds(&self) -> bool {
        let Some(e1) = self.lifts.first() else {
            return false;
        };
        self.lifts.iter().enumerate().all(|(i, e)| {
            let j = (i + 1) as i64;
            e.is_positive() && *e == Rat::int(j * j) * e1
        })
    }

    /// Applies `φ^n` to the underlying ansatz point and every lift.
    pub fn frobenius(&self, n: i64) -> Result<PilotTuple> {
        let moved = make_ansatz(&self.ansatz.a().frobenius(n), self.ansatz.ell())?;
        let scale = Rat::pow_int(self.ansatz.p(), n);
        Ok(PilotTuple {
            ansatz: moved,
            xi_val: self.xi_val.clone(),
            lifts: self.lifts.iter().map(|e| e * &scale).collect(),
        })
    }
}

/// Builds the pilot tuple for `ξ` with `v(ξ) = xi_val` in p-normalized units.
///
/// In the untilt `K_j` one has `v_{K_j}(p) = v_F(a^{j²})` in tilt units, so
/// the lift `x_j` with `η_{K_j}([x_j]) = ξ` has `v_F(x_j) = xi_val · j²·v_F(a)`.
pub fn build_pilot(pt: &AnsatzPoint, xi_val: &Rat) -> Result<PilotTuple> {
    if !xi_val.is_positive() {
        return Err(domain("theta value must lie in the maximal ideal (v > 0)"));
    }
    let profile = valuation_profile(pt);
    let lifts: Vec<Rat> = profile.iter().map(|v| xi_val * v).collect();
    // the η-valuation of each lift must reproduce ξ
    if lifts.iter().zip(&profile).any(|(e, v)| &(e / v) != xi_val) {
        return Err(Error::Invariant("lift does not map onto the theta value".into()));
    }
    let tuple = PilotTuple {
        ansatz: pt.clone(),
        xi_val: xi_val.clone(),
        lifts,
    };
    if !tuple.scaling_holds() {
        return Err(Error::Invariant("j² scaling of lifts failed".into()));
    }
    Ok(tuple)
}

/// `Σ_j e_j`, the additive form of `Σ_j log|[x_j]|_ρ`.
///
/// Each lift sits in slot `p^0`, so the value does not depend on `ρ`. The
/// closed form `ℓ*(ℓ*+1)(2ℓ*+1)/6 · e_1` is re-checked.
pub fn sum_log_norms(pilot: &PilotTuple, rho: &RhoWeight) -> Result<Rat> {
    let total: Rat = pilot.lifts.iter().map(|e| slot_log_norm(e, 0, rho)).sum();
    let s = pilot.lifts.len() as i64;
    let closed = Rat::new(s * (s + 1) * (2 * s + 1), 6) * &pilot.lifts[0];
    if total != closed {
        return Err(Error::Invariant(format!(
            "pilot sum {total} differs from closed form {closed}"
        )));
    }
    Ok(total)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledTuple {
    pub generator: usize,
    pub n: i64,
    pub tuple: PilotTuple,
}

/// A finite sample of the theta set: every generator's Frobenius iterates
/// `φ^n`, `n ∈ [−depth, depth]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaSetSample {
    pub generators: Vec<AnsatzPoint>,
    pub frobenius_depth: u32,
    pub tuples: Vec<SampledTuple>,
}

impl ThetaSetSample {
    /// `φ` maps the tuple at `n` to the tuple at `n + 1` for every `n < depth`.
    pub fn is_frobenius_closed(&self) -> bool {
        let d = self.frobenius_depth as i64;
        self.tuples.iter().filter(|s| s.n < d).all(|s| {
            let next = self
                .tuples
                .iter()
                .find(|o| o.generator == s.generator && o.n == s.n + 1);
            match (next, s.tuple.frobenius(1)) {
                (Some(o), Ok(img)) => o.tuple == img,
                _ => false,
            }
        })
    }

    pub fn scaling_holds(&self) -> bool {
        self.tuples.iter().all(|s| s.tuple.scaling_holds())
    }

    /// Every lift satisfies `|[x_j]|₁ ≤ 1`, i.e. `e_j ≥ 0`.
    pub fn respects_b_plus_cap(&self) -> bool {
        self.tuples.iter().all(|s| {
            s.tuple
                .lifts
                .iter()
                .all(|e| !slot_log_norm(e, 0, &RhoWeight::One).is_negative())
        })
    }
}

pub fn theta_set_sample(gens: &[AnsatzPoint], xi_val: &Rat, depth: u32) -> Result<ThetaSetSample> {
    theta_set_sample_with(gens, xi_val, depth, Exec::default())
}

pub fn theta_set_sample_with(
    gens: &[AnsatzPoint],
    xi_val: &Rat,
    depth: u32,
    exec: Exec,
) -> Result<ThetaSetSample> {
    let d = depth as i64;
    let mut jobs = Vec::new();
    for (g, pt) in gens.iter().enumerate() {
        for (k, moved) in frobenius_orbit_with(pt, -d..=d, exec).into_iter().enumerate() {
            jobs.push((g, k as i64 - d, moved));
        }
    }
    let tuples = exec
        .map(&jobs, |(g, n, pt)| {
            build_pilot(pt, xi_val).map(|tuple| SampledTuple {
                generator: *g,
                n: *n,
                tuple,
            })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let sample = ThetaSetSample {
        generators: gens.to_vec(),
        frobenius_depth: depth,
        tuples,
    };
    if !sample.is_frobenius_closed() {
        return Err(Error::Invariant("sample is not Frobenius-closed".into()));
    }
    Ok(sample)
}

/// `log|Θ̃|_{B,ρ}` on the sample, in additive form: the least valuation sum.
pub fn size_estimate(sample: &ThetaSetSample, rho: &RhoWeight) -> Result<Rat> {
    sample
        .tuples
        .iter()
        .map(|s| sum_log_norms(&s.tuple, rho))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min()
        .ok_or_else(|| domain("empty theta-set sample"))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DerivationStep {
    pub name: &'static str,
    pub value: Rat,
    pub verified: bool,
}

/// The lower bound `|Θ̃| ≥ |q^{1/2ℓ}|^{ℓ*}` in valuation form.
///
/// `lhs_log` is the valuation sum at the witness point and `rhs_log` the
/// valuation of `q^{ℓ*/2ℓ}`; the bound holds when `lhs_log < rhs_log`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundReport {
    pub ell: u32,
    pub v_q: Rat,
    pub lhs_log: Rat,
    pub rhs_log: Rat,
    pub margin: Rat,
    pub pass: bool,
    pub steps: Vec<DerivationStep>,
}

impl BoundReport {
    pub fn is_equality(&self) -> bool {
        self.margin.is_zero()
    }

    pub fn steps_verified(&self) -> bool {
        self.steps.iter().all(|s| s.verified)
    }
}

pub fn main_bound_check(ell: u32, v_q: &Rat) -> Result<BoundReport> {
    check_odd_prime(ell, None)?;
    if !v_q.is_positive() {
        return Err(domain("v(q) must be positive (|q| < 1)"));
    }
    let s = ell_star(ell) as i64;
    let l = ell as i64;
    let s2 = Rat::int(s * s);

    let squares: Rat = (1..=s).map(|j| Rat::int(j * j)).sum();
    let squares_closed = Rat::new(s * (s + 1) * (2 * s + 1), 6);

    let weighted: Rat = (1..=s).map(|j| Rat::int(j * j) / &s2).sum();
    let weighted_closed = squares_closed.clone() / &s2;

    let xi = Rat::new(1, 2 * l) * v_q;
    let lhs_sum: Rat = (1..=s).map(|j| Rat::int(j * j) / &s2 * &xi).sum();
    let lhs_closed = Rat::new(1, 12) * (Rat::one() + Rat::new(1, s)) * v_q;

    let rhs = Rat::new(s, 2 * l) * v_q;
    let rhs_closed = Rat::new(1, 4) * (Rat::one() - Rat::new(1, l)) * v_q;

    let margin = &rhs - &lhs_sum;
    // (ℓ*/2ℓ − (ℓ+1)/(12(ℓ−1)))·v_q = (2ℓ−1)(ℓ−3)/(12ℓ(ℓ−1))·v_q
    let factored = Rat::new((2 * l - 1) * (l - 3), 12 * l * (l - 1)) * v_q;

    let steps = vec![
        DerivationStep {
            name: "sum of squares j^2, j=1..l*",
            value: squares.clone(),
            verified: squares == squares_closed,
        },
        DerivationStep {
            name: "sum of j^2/l*^2",
            value: weighted.clone(),
            verified: weighted == weighted_closed,
        },
        DerivationStep {
            name: "lhs = sum_j (j^2/l*^2) v(xi_1)",
            value: lhs_sum.clone(),
            verified: lhs_sum == weighted * &xi,
        },
        DerivationStep {
            name: "lhs = (1/12)(1 + 1/l*) v(q)",
            value: lhs_closed.clone(),
            verified: lhs_closed == lhs_sum,
        },
        DerivationStep {
            name: "rhs = (l*/2l) v(q) = (1/4)(1 - 1/l) v(q)",
            value: rhs.clone(),
            verified: rhs == rhs_closed,
        },
        DerivationStep {
            name: "margin = (2l-1)(l-3)/(12 l (l-1)) v(q)",
            value: margin.clone(),
            verified: margin == factored,
        },
    ];
    if let Some(bad) = steps.iter().find(|s| !s.verified) {
        return Err(Error::Invariant(format!("derivation step failed: {}", bad.name)));
    }
    Ok(BoundReport {
        ell,
        v_q: v_q.clone(),
        pass: lhs_sum < rhs,
        lhs_log: lhs_sum,
        rhs_log: rhs,
        margin,
        steps,
    })
}

/// The valuation sum at the explicit witness point, in the `C_p` gauge,
/// computed through ansatz construction and pilot lifts rather than the
/// closed form.
pub fn witness_sum(p: u32, ell: u32, v_q: &Rat) -> Result<Rat> {
    let w = WitnessAnsatz::new(p, ell)?;
    let xi = theta_value(1, ell)?.valuation(v_q);
    let pilot = build_pilot(&w.point, &xi)?;
    Ok(sum_log_norms(&pilot, &RhoWeight::One)? / &w.canonical_v_p)
}

pub fn sweep_bound(ells: &[u32], v_q: &Rat, exec: Exec) -> Vec<Result<BoundReport>> {
    exec.map(ells, |&ell| main_bound_check(ell, v_q))
}

const SWEEP_LIMIT: u32 = 1000;

/// Least odd prime at which the bound holds, found by checking primes in
/// increasing order.
pub fn threshold_ell() -> Result<u32> {
    threshold_ell_by_sweep(SWEEP_LIMIT, Exec::default())
}

pub fn threshold_ell_by_sweep(max: u32, exec: Exec) -> Result<u32> {
    let ells = odd_primes_up_to(max);
    for chunk in ells.chunks(16) {
        for (ell, r) in chunk.iter().zip(sweep_bound(chunk, &Rat::one(), exec)) {
            if r?.pass {
                return Ok(*ell);
            }
        }
    }
    Err(domain(format!("no passing prime up to {max}")))
}

/// Least odd prime beyond the larger root of `2ℓ² − 7ℓ + 3`, the numerator
/// of the margin, found from the quadratic formula in exact arithmetic.
pub fn threshold_ell_by_roots() -> Result<u32> {
    let (a, b, c) = (2i64, -7i64, 3i64);
    let disc = b * b - 4 * a * c;
    let root = disc.sqrt();
    if root * root != disc {
        return Err(Error::Invariant("discriminant is not a square".into()));
    }
    let larger = Rat::new(-b + root, 2 * a);
    let mut n = larger.numer() / larger.denom();
    loop {
        n += 1;
        let cand: u64 = n.clone().try_into().expect("small root");
        if cand % 2 == 1 && is_prime(cand) && Rat::int(cand as i64) > larger {
            return Ok(cand as u32);
        }
    }
}

/// Whether `|Θ̃| ≤ c·|q^{1/2ℓ}|^{ℓ*}` contradicts the established bound,
/// which happens exactly when `c < 1`.
pub fn corollary_c_check(ell: u32, v_q: &Rat, c: &Rat) -> Result<bool> {
    if !c.is_positive() {
        return Err(domain("c must be positive"));
    }
    let bound = main_bound_check(ell, v_q)?;
    if !bound.pass {
        return Err(domain(format!("bound not established for ell = {ell}")));
    }
    Ok(*c < Rat::one())
}
