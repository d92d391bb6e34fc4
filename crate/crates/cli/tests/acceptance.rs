//! Acceptance criteria, one line per criterion. Exits nonzero on any failure.

use std::process::Command;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use teich_core::ansatz::{frobenius_orbit, is_member, make_ansatz, valuation_profile};
use teich_core::loglink::{
    chain_build, log_property_trials, m_of_epsilon, padic_log, random_unit,
};
use teich_core::pilot::{
    build_pilot, main_bound_check, sum_log_norms, theta_set_sample, threshold_ell,
    threshold_ell_by_roots, threshold_ell_by_sweep,
};
use teich_core::rat::{ell_star, odd_primes_up_to};
use teich_core::theta::{
    check_inversion_antisymmetry, check_quasi_periodicity, check_theta_ratio, theta_value,
    SignConvention, ThetaSeriesTrunc,
};
use teich_core::witt::{gauss_log_norm, teichmuller, RhoWeight};
use teich_core::{Exec, PrimitiveDeg1, Rat, TiltElement, WittExpr};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn e<E: std::fmt::Display>(err: E) -> String {
    err.to_string()
}

fn rng(tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(0xacce_0000 + tag)
}

/// Random exponent `n / p^k` with `0 < n / p^k <= 8`.
fn random_exponent(r: &mut ChaCha8Rng, p: u32) -> Rat {
    let k = r.gen_range(0..4u32);
    let den = (p as i64).pow(k);
    Rat::new(r.gen_range(1..=8 * den), den)
}

fn random_monomial(r: &mut ChaCha8Rng, p: u32) -> TiltElement {
    let coeff = r.gen_range(1..p as i64);
    TiltElement::monomial(p, coeff, random_exponent(r, p)).unwrap()
}

/// `Σ_{j=1}^{ℓ*} (j²/ℓ*²)·v(q)/2ℓ` and `ℓ*·v(q)/2ℓ`, summed term by term.
fn bound_oracle(ell: u32, v_q: &Rat) -> (Rat, Rat) {
    let s = ell_star(ell) as i64;
    let xi1 = v_q / &Rat::int(2 * ell as i64);
    let lhs: Rat = (1..=s).map(|j| Rat::new(j * j, s * s) * &xi1).sum();
    (lhs, Rat::int(s) * &xi1)
}

fn main_bound() -> Outcome {
    let vqs = [Rat::int(1), Rat::new(3, 2), Rat::int(7)];
    let mut count = 0;
    for v_q in &vqs {
        for ell in odd_primes_up_to(97).into_iter().filter(|l| *l >= 5) {
            let rep = main_bound_check(ell, v_q).map_err(e)?;
            let (lhs, rhs) = bound_oracle(ell, v_q);
            ensure(rep.pass && rep.steps_verified(), || format!("ell={ell} v_q={v_q} did not pass"))?;
            ensure(rep.lhs_log == lhs && rep.rhs_log == rhs && lhs < rhs, || {
                format!("ell={ell} v_q={v_q}: {} vs oracle {lhs}", rep.lhs_log)
            })?;
            count += 1;
        }
        let rep = main_bound_check(3, v_q).map_err(e)?;
        let sixth = v_q / &Rat::int(6);
        ensure(!rep.pass && rep.is_equality(), || format!("ell=3 v_q={v_q} not an equality failure"))?;
        ensure(rep.lhs_log == sixth && rep.rhs_log == sixth, || {
            format!("ell=3: lhs={} rhs={} expected {sixth}", rep.lhs_log, rep.rhs_log)
        })?;
    }
    Ok(format!("{count} strict cases, ell=3 equality at v_q/6"))
}

fn threshold() -> Outcome {
    let sweep = threshold_ell_by_sweep(97, Exec::Sequential).map_err(e)?;
    let sweep_par = threshold_ell_by_sweep(97, Exec::Parallel).map_err(e)?;
    let roots = threshold_ell_by_roots().map_err(e)?;
    let main = threshold_ell().map_err(e)?;
    // oracle: first odd prime with (2l-1)(l-3) > 0
    let oracle = odd_primes_up_to(97).into_iter().find(|&l| (2 * l as i64 - 1) * (l as i64 - 3) > 0);
    ensure(
        sweep == 5 && sweep_par == 5 && roots == 5 && main == 5 && oracle == Some(5),
        || format!("sweep={sweep} parallel={sweep_par} roots={roots} threshold={main} oracle={oracle:?}"),
    )?;
    Ok("sweep = roots = 5".into())
}

fn theta_identities() -> Outcome {
    let series = ThetaSeriesTrunc::symmetric(12, SignConvention::Signed);
    let inv = check_inversion_antisymmetry(&series);
    ensure(inv.pass && inv.involution_ok && inv.cancels_at_one, || format!("inversion: {inv:?}"))?;
    let mut checks = 0;
    for j in -12..=12i64 {
        let q = check_quasi_periodicity(&series, j).map_err(e)?;
        ensure(q.pass && q.mismatches.is_empty(), || format!("quasi-periodicity j={j}"))?;
        checks += 1;
    }
    for ell in [5, 7, 11] {
        for j in 1..=ell_star(ell) as i64 {
            let r = check_theta_ratio(&series, j, 1, ell).map_err(e)?;
            ensure(r.pass, || format!("theta ratio ell={ell} j={j}"))?;
            checks += 1;
        }
    }
    let unsigned = ThetaSeriesTrunc::symmetric(12, SignConvention::Unsigned);
    let control = check_inversion_antisymmetry(&unsigned);
    ensure(!control.pass, || "unsigned control passed antisymmetry".into())?;
    Ok(format!(
        "{} antisymmetric pairs, {checks} shift/ratio checks, unsigned control fails",
        inv.pairs.len()
    ))
}

fn theta_value_scaling() -> Outcome {
    let mut n = 0;
    for ell in [5, 7, 11, 13] {
        let first = theta_value(1, ell).map_err(e)?;
        // oracle: q-exponent j²/2ℓ
        ensure(first.q_exponent == Rat::new(1, 2 * ell as i64), || format!("xi_1 at ell={ell}"))?;
        for j in 1..=ell_star(ell) {
            let tv = theta_value(j, ell).map_err(e)?;
            let jj = Rat::int((j * j) as i64);
            ensure(tv.q_exponent == &jj * &first.q_exponent, || format!("ell={ell} j={j}"))?;
            ensure(tv.q_exponent == Rat::new((j * j) as i64, 2 * ell as i64), || {
                format!("oracle ell={ell} j={j}")
            })?;
            n += 1;
        }
    }
    Ok(format!("{n} theta values"))
}

fn valuation_scaling() -> Outcome {
    let mut r = rng(5);
    let mut n = 0;
    for i in 0..200 {
        let p = [2, 3][i % 2];
        let ell = [5, 7, 11][i % 3];
        let a = random_monomial(&mut r, p);
        let va = a.val().finite().cloned().ok_or("infinite valuation")?;
        let pt = make_ansatz(&a, ell).map_err(e)?;
        let prof = valuation_profile(&pt);
        ensure(prof.len() == ell_star(ell) as usize, || "profile length".into())?;
        for (k, v) in prof.iter().enumerate() {
            let jj = Rat::int(((k + 1) * (k + 1)) as i64);
            ensure(*v == &jj * &prof[0] && *v == &jj * &va, || format!("a={a} ell={ell} j={}", k + 1))?;
        }
        let orbit = frobenius_orbit(&pt, -2..=2);
        for (o, shift) in orbit.iter().zip(-2..=2i64) {
            let scale = Rat::pow_int(p, shift);
            let expected: Vec<Rat> = prof.iter().map(|v| v * &scale).collect();
            ensure(valuation_profile(o) == expected, || format!("orbit n={shift} a={a}"))?;
        }
        n += 1;
    }
    Ok(format!("{n} monomials, orbits n in -2..=2"))
}

fn ansatz_stability() -> Outcome {
    let mut r = rng(6);
    let mut orbit_points = 0;
    for i in 0..60 {
        let p = [2, 3, 5][i % 3];
        let ell = [5, 7, 11][i % 3];
        let pt = make_ansatz(&random_monomial(&mut r, p), ell).map_err(e)?;
        for o in frobenius_orbit(&pt, -3..=3) {
            ensure(is_member(o.members()), || format!("orbit point of {} not a member", pt.a()))?;
            orbit_points += 1;
        }
    }
    let mut rejected = 0;
    for i in 0..100 {
        let p = [2, 3][i % 2];
        let ell = [5, 7, 11][i % 3];
        let a = random_monomial(&mut r, p);
        let pt = make_ansatz(&a, ell).map_err(e)?;
        let mut tuple: Vec<PrimitiveDeg1> = pt.members().to_vec();
        let idx = r.gen_range(1..tuple.len());
        let j = (idx + 1) as u64;
        // exponent j² replaced by j² + d with d != 0
        let d: i64 = if r.gen_bool(0.5) { r.gen_range(1..=3) } else { -r.gen_range(1..=3) };
        let k = (j * j) as i64 + d;
        tuple[idx] = PrimitiveDeg1::new(a.pow(k as u64)).map_err(e)?;
        ensure(!is_member(&tuple), || format!("perturbed tuple for a={a} accepted"))?;
        rejected += 1;
    }
    Ok(format!("{orbit_points} orbit points are members, {rejected} perturbed tuples rejected"))
}

fn gauss_norm_laws() -> Outcome {
    let mut r = rng(7);
    for n in 0..500 {
        let p = [2, 3, 5, 7][n % 4];
        let x = random_monomial(&mut r, p);
        let y = random_monomial(&mut r, p);
        let (i, k) = (r.gen_range(0..4i64), r.gen_range(0..4i64));
        let wx = WittExpr::zero(p).with_slot(i, x.clone()).map_err(e)?;
        let wy = WittExpr::zero(p).with_slot(k, y.clone()).map_err(e)?;
        let rho = if n % 3 == 0 {
            RhoWeight::One
        } else {
            RhoWeight::weight(random_exponent(&mut r, p)).map_err(e)?
        };
        let prod = gauss_log_norm(&wx.mul_single(&wy).map_err(e)?, &rho);
        let sum = gauss_log_norm(&wx, &rho) + gauss_log_norm(&wy, &rho);
        ensure(prod == sum, || format!("[{x}]p^{i} * [{y}]p^{k}"))?;
        // oracle on the lifts themselves: v(x) + v(y)
        let pure = gauss_log_norm(&teichmuller(&x.mul(&y).map_err(e)?), &RhoWeight::One);
        ensure(pure == x.val() + y.val(), || format!("teichmuller {x} {y}"))?;
    }
    let mut tuples = 0;
    for p in [2, 3, 7] {
        let gens: Vec<_> = (0..4)
            .map(|_| make_ansatz(&random_monomial(&mut r, p), 5))
            .collect::<Result<_, _>>()
            .map_err(e)?;
        let xi = theta_value(1, 5).map_err(e)?.valuation(&Rat::int(1));
        let sample = theta_set_sample(&gens, &xi, 3).map_err(e)?;
        let cap = sample
            .tuples
            .iter()
            .all(|s| s.tuple.lifts.iter().all(|e| !e.is_negative()));
        ensure(cap && sample.respects_b_plus_cap(), || format!("B+ cap violated at p={p}"))?;
        tuples += sample.tuples.len();
    }
    Ok(format!("500 products multiplicative, {tuples} pilot tuples with e_j >= 0"))
}

fn pilot_sum() -> Outcome {
    let mut r = rng(8);
    let mut n = 0;
    for ell in odd_primes_up_to(23) {
        for _ in 0..10 {
            let p = [2, 3, 5, 7].into_iter().filter(|&q| q != ell).nth(r.gen_range(0..3)).unwrap();
            let pt = make_ansatz(&random_monomial(&mut r, p), ell).map_err(e)?;
            let xi = Rat::new(r.gen_range(1..50i64), r.gen_range(1..50i64));
            let pilot = build_pilot(&pt, &xi).map_err(e)?;
            let got = sum_log_norms(&pilot, &RhoWeight::One).map_err(e)?;
            let s = ell_star(ell) as i64;
            let e1 = &pilot.lifts[0];
            // oracle: explicit Σ j²·e_1, and the closed form
            let direct: Rat = (1..=s).map(|j| Rat::int(j * j) * e1).sum();
            let closed = Rat::new(s * (s + 1) * (2 * s + 1), 6) * e1;
            ensure(got == direct && got == closed, || format!("ell={ell} e1={e1}: {got}"))?;
            n += 1;
        }
    }
    Ok(format!("{n} random pilots, ell <= 23"))
}

/// Exact rational log series reduced mod p^N, independent of `padic_log`.
fn log_oracle(p: u32, precision: u32, u: &BigInt) -> BigInt {
    let x = Rat::new(u.clone() - 1, 1);
    let mut acc = Rat::zero();
    let mut pow = Rat::one();
    for k in 1..=(3 * precision as i64 + 8) {
        pow = &pow * &x;
        let term = &pow / &Rat::int(k);
        acc = if k % 2 == 1 { acc + term } else { acc - term };
    }
    let m = BigInt::from(p).pow(precision);
    let inv = acc.denom().modinv(&m).expect("p-integral series");
    (acc.numer() * inv).modpow(&BigInt::from(1), &m)
}

fn loglink() -> Outcome {
    for p in [2, 3, 5, 7] {
        for lo in [-6i64, -4, 0] {
            let chain = chain_build(p, &Rat::new(1, 3), lo..=lo + 8).map_err(e)?;
            ensure(chain.entries.len() == 9, || "window width".into())?;
            ensure(
                chain.ratios_exact()
                    && chain.ratios().iter().all(|(_, q)| *q == Rat::int(p as i64))
                    && chain.norms_grow_downward(),
                || format!("chain ratios p={p} lo={lo}"),
            )?;
        }
    }
    let mut r = rng(9);
    for _ in 0..50 {
        let p = [2, 3, 5, 7][r.gen_range(0..4)];
        let eps = Rat::new(r.gen_range(1..200i64), r.gen_range(1..200i64));
        let m = m_of_epsilon(p, &eps).map_err(e)?;
        // oracle: linear scan for the least m with p^-m < eps
        let oracle = (0u32..).find(|&k| Rat::pow_int(p, -(k as i64)) < eps).unwrap();
        ensure(m == oracle, || format!("m(p={p}, eps={eps}) = {m}, oracle {oracle}"))?;
    }
    let mut spot = 0;
    for (p, n) in [(3, 12), (5, 12), (2, 14)] {
        let seq = log_property_trials(p, n, 500, 0x10c + p as u64, Exec::Sequential).map_err(e)?;
        let par = log_property_trials(p, n, 500, 0x10c + p as u64, Exec::Parallel).map_err(e)?;
        ensure(seq.pass() && seq == par, || format!("log trials p={p}: {seq:?}"))?;
        for _ in 0..20 {
            let u = random_unit(&mut r, p, n).map_err(e)?;
            ensure(padic_log(&u).map_err(e)? == log_oracle(p, n, u.value()), || {
                format!("log oracle p={p} u={}", u.value())
            })?;
            spot += 1;
        }
    }
    Ok(format!("chains of width 9, 50 m(eps), 3x500 log trials, {spot} oracle spot checks"))
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(e)?;
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"p": 3, "ell": 7, "log_trials": 200, "theta_truncation": 12}"#).map_err(e)?;
    let run = |name: &str, extra: &[&str]| -> Result<Vec<u8>, String> {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_teich"))
            .arg("all")
            .arg("--config")
            .arg(&cfg)
            .arg("--output")
            .arg(&out)
            .args(extra)
            .status()
            .map_err(e)?;
        ensure(status.success(), || format!("teich all exited with {status}"))?;
        std::fs::read(&out).map_err(e)
    };
    let a = run("a.json", &[])?;
    let b = run("b.json", &[])?;
    let c = run("c.json", &["--sequential"])?;
    ensure(a == b, || "two runs differ".into())?;
    ensure(a == c, || "sequential run differs from parallel".into())?;
    Ok(format!("{} identical bytes (parallel x2, sequential)", a.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("main bound, 5 <= l <= 97, equality at l = 3", main_bound),
        ("threshold l = 5 by sweep and by roots", threshold),
        ("theta inversion and quasi-periodicity, N = 12", theta_identities),
        ("theta value q-exponent scaling j^2", theta_value_scaling),
        ("ansatz valuation profile scaling", valuation_scaling),
        ("ansatz Frobenius stability and rejection", ansatz_stability),
        ("Gauss norm multiplicativity and B+ cap", gauss_norm_laws),
        ("closed-form pilot sum", pilot_sum),
        ("log-link chains, m(eps) and p-adic log", loglink),
        ("deterministic reports", determinism),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let start = std::time::Instant::now();
        let outcome = f();
        let ms = start.elapsed().as_millis();
        match outcome {
            Ok(detail) => println!("[PASS] {name}: {detail} ({ms} ms)"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {name}: {why} ({ms} ms)");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
