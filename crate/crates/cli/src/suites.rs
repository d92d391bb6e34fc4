//! Verification suites driven by a [`RunConfig`].

use teich_core::ansatz::{
    frobenius_orbit_with, holomorphoid_records, is_member, make_ansatz, scale_invariance_check,
    valuation_profile, Substitution, WitnessAnsatz,
};
use teich_core::loglink::{chain_build, kummer_shift, log_property_trials, m_of_epsilon};
use teich_core::pilot::{
    corollary_c_check, main_bound_check, size_estimate, sweep_bound,
    theta_set_sample_with, threshold_ell_by_roots, threshold_ell_by_sweep, witness_sum,
};
use teich_core::rat::{ell_star, odd_primes_up_to};
use teich_core::theta::{
    check_inversion_antisymmetry, check_theta_ratio, check_vanishing_at_q_half_power,
    quasi_periodicity_sweep, theta_value, ThetaSeriesTrunc,
};
use teich_core::witt::{gauss_log_norm, in_b_plus, teichmuller, RhoWeight};
use teich_core::{Exec, PrimitiveDeg1, Rat, TiltElement};

use crate::config::RunConfig;
use crate::report::{CheckRecord, Report};
use crate::CliError;

const A_INVERSION: &str = "theta(1/u) = -theta(u)";
const A_THETA_ONE: &str = "theta(1) = 0";
const A_QUASI: &str = "theta(q^(j/2) u) = (-1)^j q^(-j^2/2) u^(-2j) theta(u)";
const A_VANISH: &str = "theta(q^(j/2)) = 0 for all j";
const A_XI: &str = "xi_j = (-1)^j q^(j^2/2l) zeta_l^(2j)";
const A_BOUND: &str = "|Theta|_B >= |q^(1/2l)|^(l*) for large odd primes l";
const A_COROLLARY: &str = "|Theta|_B <= c |q^(1/2l)|^(l*) forces c >= 1";
const A_BPLUS: &str = "|Theta|_(B,1) <= 1 (B+ cap)";
const A_PILOT: &str = "sum_j log|[x_j]| = sum_j j^2 log|xi|";
const A_ANSATZ: &str = "ansatz tuples ([a^(j^2)] - p)_j";
const A_LIFTVALS: &str = "v_(K_j)(p) = j^2 v_(K_1)(p)";
const A_FROB: &str = "ansatz is stable under Frobenius iterates";
const A_GALOIS: &str = "ansatz stable under valuation-preserving substitutions";
const A_CHAIN: &str = "|p|_(K_(n-1)) = |p|_(K_n)^(1/p)";
const A_MEPS: &str = "exists m with |p|^(1/p^m) > |p|^eps";
const A_LOG: &str = "log is a homomorphism and log(u^p) = p log(u)";
const A_KUMMER: &str = "Kummer embeddings differ by p-multiples";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    VerifyTheta,
    Bound,
    Ansatz,
    Loglink,
    SweepEll,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::VerifyTheta,
        Suite::Bound,
        Suite::Ansatz,
        Suite::Loglink,
        Suite::SweepEll,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::VerifyTheta => "verify-theta",
            Suite::Bound => "bound",
            Suite::Ansatz => "ansatz",
            Suite::Loglink => "loglink",
            Suite::SweepEll => "sweep-ell",
        }
    }

    pub fn run(self, cfg: &RunConfig, seed: u64, exec: Exec) -> Result<Vec<CheckRecord>, CliError> {
        match self {
            Suite::VerifyTheta => verify_theta(cfg, exec),
            Suite::Bound => bound(cfg, exec),
            Suite::Ansatz => ansatz(cfg, exec),
            Suite::Loglink => loglink(cfg, seed, exec),
            Suite::SweepEll => sweep_ell(cfg, exec),
        }
    }
}

fn math(e: teich_core::Error) -> CliError {
    CliError::Math(e.to_string())
}

pub fn run_suite(suite: Suite, cfg: &RunConfig, seed: u64, exec: Exec) -> Result<Report, CliError> {
    let checks = suite.run(cfg, seed, exec)?;
    Ok(Report::new(suite.name(), cfg.echo(), checks))
}

/// Every suite, dispatched concurrently; records keep the fixed suite order.
pub fn run_all(cfg: &RunConfig, seed: u64, exec: Exec) -> Result<Report, CliError> {
    let parts = exec.map(&Suite::ALL, |s| s.run(cfg, seed, exec));
    let mut checks = Vec::new();
    for part in parts {
        checks.extend(part?);
    }
    Ok(Report::new("all", cfg.echo(), checks))
}

pub fn verify_theta(cfg: &RunConfig, exec: Exec) -> Result<Vec<CheckRecord>, CliError> {
    cfg.require_theta_window()?;
    const S: &str = "verify-theta";
    let n = cfg.theta_truncation;
    let series = ThetaSeriesTrunc::symmetric(n, cfg.theta_convention.into());
    let mut out = vec![CheckRecord::new(S, "descriptors", "n(n+1)/2 = (1/2)(n+1/2)^2 - 1/8", series.descriptors_consistent())
        .int("terms", series.len() as i64)];

    let inv = check_inversion_antisymmetry(&series);
    out.push(
        CheckRecord::new(S, "inversion antisymmetry", A_INVERSION, inv.pass)
            .int("pairs", inv.pairs.len() as i64)
            .int("boundary_terms", inv.boundary.len() as i64)
            .int("mismatches", inv.mismatches.len() as i64),
    );
    out.push(CheckRecord::new(S, "theta(1) cancels", A_THETA_ONE, inv.cancels_at_one));

    let r = n as i64;
    let js: Vec<i64> = (-r..=r).collect();
    for rep in quasi_periodicity_sweep(&series, &js, exec).map_err(math)? {
        out.push(
            CheckRecord::new(S, format!("quasi-periodicity j={}", rep.j), A_QUASI, rep.pass)
                .int("overlap", rep.overlap as i64)
                .int("sign", rep.shift.sign)
                .rat("q_shift", &Rat::new(rep.shift.q_exp_doubled, 2))
                .int("u_shift", rep.shift.u_exp),
        );
    }

    let vanish = exec.map(&js, |&j| check_vanishing_at_q_half_power(&series, j));
    out.push(
        CheckRecord::new(S, "vanishing at q^(j/2)", A_VANISH, vanish.iter().all(|v| v.pass))
            .int("shifts", vanish.len() as i64)
            .int("failures", vanish.iter().filter(|v| !v.pass).count() as i64),
    );

    let ell = cfg.ell;
    let first = theta_value(1, ell).map_err(math)?;
    for j in 1..=ell_star(ell) {
        let tv = theta_value(j, ell).map_err(math)?;
        let ratio = check_theta_ratio(&series, j as i64, 1, ell).map_err(math)?;
        let scaled = tv.q_exponent == Rat::int((j * j) as i64) * &first.q_exponent;
        out.push(
            CheckRecord::new(S, format!("theta value j={j}"), A_XI, ratio.pass && scaled && tv.q_exponent.is_positive())
                .int("sign", tv.sign)
                .rat("q_exponent", &tv.q_exponent)
                .int("zeta_exponent", tv.zeta_exponent as i64)
                .rat("valuation", &tv.valuation(&cfg.v_q))
                .int("ratio_overlap", ratio.overlap as i64),
        );
    }
    Ok(out)
}

pub fn bound(cfg: &RunConfig, exec: Exec) -> Result<Vec<CheckRecord>, CliError> {
    const S: &str = "bound";
    let rep = main_bound_check(cfg.ell, &cfg.v_q).map_err(math)?;
    let mut out = Vec::new();
    for step in &rep.steps {
        out.push(CheckRecord::new(S, step.name, A_BOUND, step.verified).rat("value", &step.value));
    }
    let mut main = CheckRecord::new(S, "lower bound", A_BOUND, rep.pass)
        .int("ell", rep.ell as i64)
        .rat("v_q", &rep.v_q)
        .rat("lhs_log", &rep.lhs_log)
        .rat("rhs_log", &rep.rhs_log)
        .rat("margin", &rep.margin);
    if rep.is_equality() {
        main = main.note("diagnostic", "equality: lhs = rhs, strict inequality fails");
    }
    out.push(main);

    let witness = witness_sum(cfg.p, cfg.ell, &cfg.v_q).map_err(math)?;
    out.push(
        CheckRecord::new(S, "witness pilot sum", A_PILOT, witness == rep.lhs_log)
            .rat("witness_sum", &witness),
    );

    // finite Frobenius-closed sample around the witness, in the C_p gauge
    let w = WitnessAnsatz::new(cfg.p, cfg.ell).map_err(math)?;
    let xi = theta_value(1, cfg.ell).map_err(math)?.valuation(&cfg.v_q);
    let sample = theta_set_sample_with(std::slice::from_ref(&w.point), &xi, cfg.frobenius_depth, exec)
        .map_err(math)?;
    let rho = RhoWeight::weight(cfg.rho_weight.clone()).map_err(math)?;
    let size = size_estimate(&sample, &rho).map_err(math)? / &w.canonical_v_p;
    let size_one = size_estimate(&sample, &RhoWeight::One).map_err(math)? / &w.canonical_v_p;
    out.push(
        CheckRecord::new(S, "sample size estimate", A_BOUND, size <= rep.lhs_log && size == size_one)
            .rat("log_size", &size)
            .int("tuples", sample.tuples.len() as i64),
    );
    out.push(
        CheckRecord::new(S, "B+ cap on sample", A_BPLUS, sample.respects_b_plus_cap() && sample.scaling_holds())
            .int("tuples", sample.tuples.len() as i64),
    );

    if rep.pass {
        let contradiction = corollary_c_check(cfg.ell, &cfg.v_q, &cfg.corollary_c).map_err(math)?;
        let expected = cfg.corollary_c < Rat::one();
        out.push(
            CheckRecord::new(S, "corollary", A_COROLLARY, contradiction == expected)
                .rat("c", &cfg.corollary_c)
                .note("contradiction", contradiction.to_string()),
        );
    } else {
        out.push(
            CheckRecord::new(S, "corollary", A_COROLLARY, false).note("diagnostic", "bound not established"),
        );
    }
    Ok(out)
}

pub fn sweep_ell(cfg: &RunConfig, exec: Exec) -> Result<Vec<CheckRecord>, CliError> {
    const S: &str = "sweep-ell";
    let ells = odd_primes_up_to(cfg.ell_sweep_max);
    let mut out = Vec::new();
    for (ell, rep) in ells.iter().zip(sweep_bound(&ells, &cfg.v_q, exec)) {
        let rep = rep.map_err(math)?;
        let l = *ell as i64;
        // sign of (2l - 1)(l - 3) decides the outcome
        let predicted = (2 * l - 1) * (l - 3) > 0;
        out.push(
            CheckRecord::new(S, format!("ell={ell}"), A_BOUND, rep.pass == predicted)
                .rat("margin", &rep.margin)
                .note("holds", rep.pass.to_string()),
        );
    }
    let by_sweep = threshold_ell_by_sweep(cfg.ell_sweep_max.max(5), exec).map_err(math)?;
    let by_roots = threshold_ell_by_roots().map_err(math)?;
    out.push(
        CheckRecord::new(S, "threshold", A_BOUND, by_sweep == by_roots)
            .int("threshold_sweep", by_sweep as i64)
            .int("threshold_roots", by_roots as i64),
    );
    Ok(out)
}

pub fn ansatz(cfg: &RunConfig, exec: Exec) -> Result<Vec<CheckRecord>, CliError> {
    const S: &str = "ansatz";
    let w = WitnessAnsatz::new(cfg.p, cfg.ell).map_err(math)?;
    let pt = &w.point;
    let profile = valuation_profile(pt);
    let scaled = profile
        .iter()
        .enumerate()
        .all(|(i, v)| *v == Rat::int(((i + 1) * (i + 1)) as i64) * &profile[0]);
    let mut out = vec![
        CheckRecord::new(S, "witness profile", A_LIFTVALS, scaled && w.last_is_canonical())
            .rats("profile_tilt", &profile)
            .rats("profile_normalized", &w.normalized_profile())
            .rat("canonical_v_p", &w.canonical_v_p),
        CheckRecord::new(S, "witness membership", A_ANSATZ, is_member(pt.members())),
    ];

    let d = cfg.frobenius_depth as i64;
    let orbit = frobenius_orbit_with(pt, -d..=d, exec);
    let members_ok = exec.all(&orbit, |o| is_member(o.members()));
    let p = Rat::int(cfg.p as i64);
    let profile_ok = orbit.iter().zip(-d..=d).all(|(o, n)| {
        valuation_profile(o) == profile.iter().map(|v| v * &Rat::pow_int(cfg.p, n)).collect::<Vec<_>>()
    });
    out.push(
        CheckRecord::new(S, "frobenius orbit", A_FROB, members_ok && profile_ok)
            .int("points", orbit.len() as i64)
            .rat("p", &p),
    );

    // negative control: bump the exponent of the last member
    let mut tampered: Vec<PrimitiveDeg1> = pt.members().to_vec();
    let last = tampered.last().expect("nonempty ansatz").a().clone();
    let bumped = last
        .mul(&TiltElement::monomial(cfg.p, 1, Rat::one()).map_err(math)?)
        .map_err(math)?;
    if tampered.len() == 1 {
        tampered.push(PrimitiveDeg1::new(bumped).map_err(math)?);
    } else {
        *tampered.last_mut().unwrap() = PrimitiveDeg1::new(bumped).map_err(math)?;
    }
    out.push(CheckRecord::new(S, "tampered tuple rejected", A_ANSATZ, !is_member(&tampered)));

    let mut subs = vec![Substitution::Identity];
    subs.extend((2..cfg.p as i64).map(Substitution::ScaleT));
    let invariant = subs
        .iter()
        .map(|s| scale_invariance_check(pt, s))
        .collect::<Result<Vec<_>, _>>()
        .map_err(math)?;
    let rejected = scale_invariance_check(pt, &Substitution::ExponentScale(Rat::int(2))).is_err();
    out.push(
        CheckRecord::new(S, "substitution invariance", A_GALOIS, invariant.iter().all(|b| *b) && rejected)
            .int("substitutions", subs.len() as i64)
            .note("scope", "valuation-level downgrade of the Galois action"),
    );

    // Teichmüller norm of the witness generator at the configured rho
    let rho = RhoWeight::weight(cfg.rho_weight.clone()).map_err(math)?;
    let lift = teichmuller(pt.a());
    let lam = gauss_log_norm(&lift, &rho);
    out.push(
        CheckRecord::new(S, "teichmuller norm", "|[x]|_rho = |x|_F", Some(&profile[0]) == lam.finite() && in_b_plus(&lift))
            .rat("log_norm", lam.finite().expect("nonzero")),
    );

    let recs = holomorphoid_records(pt, "tate-curve", &cfg.v_q).map_err(math)?;
    out.push(
        CheckRecord::new(S, "holomorphoid records", A_LIFTVALS, recs.len() == pt.members().len())
            .int("records", recs.len() as i64),
    );

    let canonical = make_ansatz(&TiltElement::t(cfg.p).map_err(math)?, cfg.ell).map_err(math)?;
    out.push(CheckRecord::new(S, "canonical tuple membership", A_ANSATZ, is_member(canonical.members())));
    Ok(out)
}

pub fn loglink(cfg: &RunConfig, seed: u64, exec: Exec) -> Result<Vec<CheckRecord>, CliError> {
    cfg.require_precision()?;
    const S: &str = "loglink";
    let (lo, hi) = cfg.chain_window;
    let chain = chain_build(cfg.p, &Rat::one(), lo..=hi).map_err(math)?;
    let mut out = Vec::new();
    for (n, v) in &chain.entries {
        out.push(CheckRecord::new(S, format!("chain n={n}"), A_CHAIN, v.is_positive()).rat("v_p", v));
    }
    out.push(
        CheckRecord::new(S, "chain ratios", A_CHAIN, chain.ratios_exact() && chain.norms_grow_downward())
            .int("rows", chain.entries.len() as i64)
            .int("ratio", cfg.p as i64),
    );

    for eps in &cfg.epsilon_grid {
        let m = m_of_epsilon(cfg.p, eps).map_err(math)?;
        let strict = Rat::pow_int(cfg.p, -(m as i64)) < *eps;
        let minimal = m == 0 || Rat::pow_int(cfg.p, -(m as i64 - 1)) >= *eps;
        let mut rec = CheckRecord::new(S, format!("m(eps={eps})"), A_MEPS, strict && minimal)
            .rat("eps", eps)
            .int("m", m as i64);
        if *eps >= Rat::one() {
            rec = rec.note("trivial", "eps >= 1");
        }
        out.push(rec);
    }

    let trials = log_property_trials(cfg.p, cfg.padic_precision, cfg.log_trials, seed, exec).map_err(math)?;
    out.push(
        CheckRecord::new(S, "padic log properties", A_LOG, trials.pass())
            .int("trials", trials.trials as i64)
            .int("precision", trials.precision as i64)
            .int("homomorphism_failures", trials.homomorphism_failures as i64)
            .int("power_failures", trials.power_failures as i64),
    );

    let telescopes = (lo..=hi).all(|a| {
        (lo..=hi).all(|b| kummer_shift(lo, a) + kummer_shift(a, b) == kummer_shift(lo, b))
    });
    out.push(
        CheckRecord::new(S, "kummer shifts", A_KUMMER, telescopes && kummer_shift(0, 1) == 1)
            .int("one_step", kummer_shift(0, 1)),
    );
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(doc: &str) -> RunConfig {
        RunConfig::from_json(doc).unwrap()
    }

    #[test]
    fn verify_theta_passes_signed() {
        let checks = verify_theta(&cfg(r#"{"p": 2, "ell": 5, "theta_truncation": 6}"#), Exec::Sequential).unwrap();
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn verify_theta_unsigned_fails() {
        let c = cfg(r#"{"theta_convention": "unsigned", "theta_truncation": 6}"#);
        let checks = verify_theta(&c, Exec::Sequential).unwrap();
        let inv = checks.iter().find(|c| c.name == "inversion antisymmetry").unwrap();
        assert!(!inv.pass);
    }

    #[test]
    fn verify_theta_window_error() {
        let c = cfg(r#"{"ell": 11, "theta_truncation": 3}"#);
        assert!(matches!(verify_theta(&c, Exec::Sequential), Err(CliError::Config(_))));
    }

    #[test]
    fn bound_margins() {
        let checks = bound(&cfg(r#"{"ell": 5}"#), Exec::Sequential).unwrap();
        let main = checks.iter().find(|c| c.name == "lower bound").unwrap();
        assert!(main.pass);
        assert_eq!(main.witness["margin"], "3/40");
        assert!(checks.iter().all(|c| c.pass));

        let checks = bound(&cfg(r#"{"ell": 3}"#), Exec::Sequential).unwrap();
        let main = checks.iter().find(|c| c.name == "lower bound").unwrap();
        assert!(!main.pass);
        assert!(main.witness["diagnostic"].contains("equality"));
    }

    #[test]
    fn sweep_threshold() {
        let checks = sweep_ell(&cfg("{}"), Exec::Parallel).unwrap();
        let t = checks.iter().find(|c| c.name == "threshold").unwrap();
        assert_eq!(t.witness["threshold_sweep"], "5/1");
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn ansatz_suite() {
        let checks = ansatz(&cfg(r#"{"p": 2, "ell": 5, "frobenius_depth": 3}"#), Exec::Sequential).unwrap();
        let prof = checks.iter().find(|c| c.name == "witness profile").unwrap();
        assert_eq!(prof.witness["profile_normalized"], "1/4 1/1");
        let orbit = checks.iter().find(|c| c.name == "frobenius orbit").unwrap();
        assert_eq!(orbit.witness["points"], "7/1");
        assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
        let checks = ansatz(&cfg(r#"{"p": 5, "ell": 3}"#), Exec::Sequential).unwrap();
        assert!(checks.iter().all(|c| c.pass), "{checks:#?}");
    }

    #[test]
    fn loglink_suite() {
        let c = cfg(r#"{"p": 2, "chain_window": [-3, 3], "log_trials": 50}"#);
        let checks = loglink(&c, 1, Exec::Sequential).unwrap();
        assert_eq!(checks.iter().filter(|c| c.name.starts_with("chain n=")).count(), 7);
        let ms: Vec<_> = checks
            .iter()
            .filter(|c| c.name.starts_with("m(eps"))
            .map(|c| c.witness["m"].clone())
            .collect();
        assert_eq!(ms, vec!["2/1", "2/1", "4/1"]);
        assert!(checks.iter().all(|c| c.pass));
    }

    #[test]
    fn loglink_precision_error() {
        let c = cfg(r#"{"p": 2, "padic_precision": 1}"#);
        assert!(matches!(loglink(&c, 1, Exec::Sequential), Err(CliError::Config(_))));
    }
}
