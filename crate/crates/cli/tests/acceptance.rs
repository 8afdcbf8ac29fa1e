//! One PASS/FAIL line per acceptance criterion.
//!
//! Failing criteria are reported but do not fail `cargo test` unless
//! KCX_ACCEPTANCE_STRICT is set.

#[path = "../../core/tests/common/oracles.rs"]
mod oracles;

use kcx_analysis::error::{error_rate, zarzar_error_rate};
use kcx_analysis::security::{security_estimate, suite_instances};
use kcx_core::algebra::{NttTables, RingPoly};
use kcx_core::codes::{self, d4, SecCode};
use kcx_core::kc::*;
use kcx_protocols::rlwe::noise_difference;
use kcx_protocols::*;
use oracles::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::HashMap;
use std::time::{Duration, Instant};

const QMAX: u32 = 64;

struct Outcome {
    pass: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome { pass: true, notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, note: String) {
        if !ok {
            self.pass = false;
        }
        self.notes.push(format!("{} {note}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, note: String) {
        self.notes.push(format!("     {note}"));
    }
}

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn suite(name: &str) -> &'static ProtocolSuite {
    suite_by_name(name).expect("registered suite")
}

fn c1_kc_correctness() -> Outcome {
    let mut out = Outcome::new();
    for variant in KcVariant::ALL {
        let sets = accepted(variant, QMAX);
        let bad: u64 = sets.iter().map(|p| disagreements(variant, p)).sum();
        out.check(!sets.is_empty() && bad == 0, format!("{variant}: {} parameter sets, {bad} disagreements", sets.len()));
    }
    out
}

fn c2_kc_security() -> Outcome {
    let mut out = Outcome::new();
    for variant in [KcVariant::OkcnGeneric, KcVariant::OkcnPower2, KcVariant::OkcnSimple] {
        let sets = accepted(variant, QMAX);
        let insecure = sets.iter().filter(|p| !kc_secure(variant, p)).count();
        out.check(insecure == 0, format!("{variant}: {} sets, {insecure} with k1 dependent on v or not uniform", sets.len()));
    }
    out
}

fn c3_akc_security() -> Outcome {
    let mut out = Outcome::new();
    for variant in [KcVariant::AkcnGeneric, KcVariant::AkcnPower2] {
        let sets = accepted(variant, QMAX);
        let leaky = sets.iter().filter(|p| !akc_secure(variant, p)).count();
        out.check(leaky == 0, format!("{variant}: {} sets, {leaky} with key-dependent hint profiles", sets.len()));
    }
    out
}

/// Correct and secure, with any error from Con or Rec counting as neither.
fn works(variant: KcVariant, p: &KcParams) -> Result<bool, KcError> {
    let q = p.q as i64;
    let d = p.d as i64;
    if variant.is_akc() {
        let mut profiles = Vec::new();
        for k1 in 0..p.m as i64 {
            let mut h = vec![0u64; p.g as usize];
            for s1 in 0..q {
                let v = akc_con(variant, s1, k1, p)?;
                h[v as usize] += 1;
                for delta in -d..=d {
                    if akc_rec(variant, (s1 + delta).rem_euclid(q), v as i64, p)? as i64 != k1 {
                        return Ok(false);
                    }
                }
            }
            profiles.push(h);
        }
        return Ok(profiles.iter().all(|h| h == &profiles[0]));
    }
    let (lo, hi) = if variant == KcVariant::OkcnGeneric { okcn_noise_range(p) } else { (0, 0) };
    let mut counts: HashMap<(u32, u32), u64> = HashMap::new();
    for s1 in 0..q {
        for e in lo..=hi {
            let c = kc_con_with(variant, s1, p, e)?;
            *counts.entry((c.k1, c.v)).or_insert(0) += 1;
            for delta in -d..=d {
                if kc_rec(variant, (s1 + delta).rem_euclid(q), c.v as i64, p)? != c.k1 {
                    return Ok(false);
                }
            }
        }
    }
    let total: u64 = counts.values().sum();
    let mut nk = vec![0u64; p.m as usize];
    let mut nv = vec![0u64; p.g as usize];
    for (&(k, v), &c) in &counts {
        nk[k as usize] += c;
        nv[v as usize] += c;
    }
    if nk.iter().any(|&c| c * p.m as u64 != total) {
        return Ok(false);
    }
    Ok((0..p.m).all(|k| {
        (0..p.g).all(|v| {
            let c = counts.get(&(k, v)).copied().unwrap_or(0);
            c as u128 * total as u128 == nk[k as usize] as u128 * nv[v as usize] as u128
        })
    }))
}

fn c4_upper_bounds() -> Outcome {
    let mut out = Outcome::new();
    for variant in KcVariant::ALL {
        let sets = accepted(variant, QMAX);
        let over = sets.iter().filter(|p| !upper_bound(variant, p).bound_holds).count();
        let tight = sets.iter().filter(|p| upper_bound(variant, p).bound_saturated).count();
        out.check(over == 0, format!("{variant}: {} accepted sets within the bound ({tight} tight)", sets.len() - over));
    }
    // q = 16: every structurally valid (m, g, d) beyond the bound, run
    // through each scheme without the correctness check.
    let q = 16;
    for variant in KcVariant::ALL {
        let (mut tried, mut counter) = (0, Vec::new());
        for m in 2..=q {
            for g in 2..=q {
                for d in 0..=q / 2 {
                    let Ok(p) = KcParams::new(q, m, g, d) else { continue };
                    if check_shape(variant, &p).is_err() || upper_bound(variant, &p).bound_holds {
                        continue;
                    }
                    tried += 1;
                    if works(variant, &p).unwrap_or(false) {
                        counter.push((m, g, d));
                    }
                }
            }
        }
        out.check(
            counter.is_empty(),
            format!("{variant}: q=16, {tried} sets beyond the bound, {} correct and secure {:?}", counter.len(), counter),
        );
    }
    out
}

fn c5_error_rates() -> Outcome {
    let mut out = Outcome::new();
    let targets = [
        ("lwr-recommended", -35.0, 0.5),
        ("lwr-paranoid", -34.0, 0.5),
        ("okcn-t2", -39.0, 0.5),
        ("okcn-t1", -52.3, 0.5),
        ("frodo-recommended", -38.9, 0.5),
        ("okcn-frodo-recommended", -105.9, 0.5),
        ("hybrid-recommended", -63.0, 1.0),
    ];
    for (name, want, tol) in targets {
        let t = Instant::now();
        match error_rate(suite(name)) {
            Ok(r) => {
                let got = r.log2_overall();
                out.check(
                    (got - want).abs() <= tol,
                    format!("{name}: 2^{got:.2} vs 2^{want} (±{tol}) [{:.1}s]", t.elapsed().as_secs_f64()),
                );
            }
            Err(e) => out.check(false, format!("{name}: {e}")),
        }
    }
    out
}

fn c6_zarzar() -> Outcome {
    let mut out = Outcome::new();
    match zarzar_error_rate(22.0, 12289, 64, 512) {
        Ok(z) => {
            out.note(format!("radius {}, threshold {}", z.radius, z.threshold));
            out.check(z.t == 17520, format!("T = {} (want 17520)", z.t));
            out.check(z.tail.log2() < -64.6, format!("tail 2^{:.2} (want < 2^-64.6)", z.tail.log2()));
            out.check(z.overall.log2() < -58.0, format!("overall 2^{:.2} (want < 2^-58)", z.overall.log2()));
        }
        Err(e) => out.check(false, e.to_string()),
    }
    out
}

fn c7_security() -> Outcome {
    let mut out = Outcome::new();
    for s in all_suites().iter().filter(|s| !s.published.security.is_empty()) {
        for (instance, inst, model) in suite_instances(s) {
            let (primal, dual) = security_estimate(&inst, model);
            for row in s.published.security.iter().filter(|r| r.instance == instance) {
                let est = match row.attack {
                    Attack::Primal => primal,
                    Attack::Dual => dual,
                };
                let label = format!("{} {:?} {:?}", s.name, instance, row.attack);
                let Some(e) = est else {
                    out.check(false, format!("{label}: no estimate"));
                    continue;
                };
                let mut ok = e.b.abs_diff(row.b) <= 2;
                if let Some(c) = row.cost {
                    ok &= (0..3).all(|i| e.cost[i].abs_diff(c[i]) <= 2);
                }
                let cost = row.cost.map_or("-".into(), |c| format!("{c:?}"));
                out.check(ok, format!("{label}: b {} vs {}, C/Q/P {:?} vs {cost}", e.b, row.b, e.cost));
            }
        }
    }
    out
}

fn c8_bandwidth() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng(8);
    for s in all_suites() {
        let bw = bandwidth(s);
        let (init, m1) = initiate(s, &mut r).expect("initiate");
        let (_, m2) = respond(s, &m1, &mut r).expect("respond");
        finish(&init, &m2).expect("finish");
        let serialized = m1.len() == bw.msg1 && m2.len() == bw.msg2;
        let published = s.published.bandwidth.map(|b| match b {
            PublishedBw::Total(t) => t,
            PublishedBw::Split(pk, ct) => pk + ct,
        });
        let (ok, cmp) = match published {
            Some(p) => {
                let rel = (bw.total() as f64 - p as f64).abs() / p as f64;
                (rel <= 0.03, format!("vs {p} ({:+.2}%)", 100.0 * (bw.total() as f64 / p as f64 - 1.0)))
            }
            None => (true, "no published figure".into()),
        };
        out.check(
            ok && serialized,
            format!("{}: {} + {} = {} bytes {cmp}", s.name, m1.len(), m2.len(), m1.len() + m2.len()),
        );
    }
    out
}

fn c9_codes() -> Outcome {
    let mut out = Outcome::new();
    let mut r = rng(9);
    let (mut checked, mut wrong) = (0, 0);
    while checked < 10_000 {
        let den = r.gen_range(1..200i64);
        let num = std::array::from_fn(|_| r.gen_range(-600..600i64));
        let Some(expect) = brute_cvp_d4(num, den) else { continue };
        wrong += (d4::basis_times2(codes::cvp_d4(codes::Rat4::new(num, den))) != expect) as u32;
        checked += 1;
    }
    out.check(wrong == 0, format!("cvp_d4: {checked} points, {wrong} mismatches"));

    let q = 12289u32;
    let (mut checked, mut wrong) = (0, 0);
    while checked < 100_000 {
        let x = std::array::from_fn(|_| r.gen_range(0..q as i64));
        let Some(expect) = brute_decode_e8(x, q) else { continue };
        wrong += (codes::decode_e8(x, q) != expect) as u32;
        checked += 1;
    }
    out.check(wrong == 0, format!("decode_e8: {checked} points, {wrong} mismatches"));

    for n_h in 3..=5 {
        let code = SecCode::new(n_h).expect("supported n_H");
        let msgs: Vec<u64> = if n_h <= 4 {
            (0..1u64 << code.msg_len()).collect()
        } else {
            (0..1 << 16).map(|_| r.gen::<u64>() & ((1 << code.msg_len()) - 1)).collect()
        };
        let mut wrong = 0;
        for &msg in &msgs {
            let cw = code.encode_word(msg);
            wrong += (code.decode_word(cw) != msg) as u32;
            for pos in 0..code.big_n() {
                wrong += (code.decode_word(cw ^ (1 << pos)) != msg) as u32;
            }
        }
        out.check(wrong == 0, format!("SEC n_H={n_h}: {} messages x {} flips, {wrong} failures", msgs.len(), code.big_n()));
    }
    out
}

/// Correlation of |σ2 − σ1| > sd indicators at coefficient offsets 1 and
/// n/2, pooled over rotations.
fn indicator_correlation(s: &ProtocolSuite, runs: usize, seed: u64) -> (f64, f64) {
    let n = s.n;
    let var = s.noise.variance();
    let sd = (2.0 * n as f64 * var * var + var).sqrt();
    let mut r = rng(seed);
    let (mut hits, mut near, mut far) = (0u64, 0u64, 0u64);
    for _ in 0..runs {
        let w = noise_difference(s, &mut r).expect("ring suite");
        let ind: Vec<u64> = w.iter().map(|x| (x.abs() as f64 > sd) as u64).collect();
        for i in 0..n {
            hits += ind[i];
            near += ind[i] * ind[(i + 1) % n];
            far += ind[i] * ind[(i + n / 2) % n];
        }
    }
    let total = (runs * n) as f64;
    let p = hits as f64 / total;
    let v = p * (1.0 - p);
    ((near as f64 / total - p * p) / v, (far as f64 / total - p * p) / v)
}

fn c10_agreement() -> Outcome {
    let mut out = Outcome::new();
    for (i, s) in all_suites().iter().enumerate() {
        let mut r = rng(1000 + i as u64);
        let mut bad = 0;
        for _ in 0..1000 {
            let (init, m1) = initiate(s, &mut r).expect("initiate");
            let (k2, m2) = respond(s, &m1, &mut r).expect("respond");
            bad += (finish(&init, &m2).expect("finish") != k2) as u32;
        }
        out.check(bad == 0, format!("{}: 1000 runs, {bad} disagreements", s.name));
    }
    for (name, runs) in [("zarzar", 10_000), ("okcn-rlwe-g16", 5_000)] {
        let (a, b) = indicator_correlation(suite(name), runs, 10);
        out.check(a.abs() < 0.02 && b.abs() < 0.02, format!("{name}: correlation {a:+.4} (offset 1), {b:+.4} (offset n/2)"));
    }
    out
}

fn poly(r: &mut ChaCha20Rng, n: usize, q: u32) -> RingPoly {
    RingPoly::from_coeffs((0..n).map(|_| r.gen_range(0..q as i64)).collect(), q)
}

fn c11_ntt() -> Outcome {
    let mut out = Outcome::new();
    let t = NttTables::new(16, 97).expect("n | (q - 1)/2");
    let mut wrong = 0;
    for seed in 0..10_000 {
        let mut r = rng(seed);
        let (a, b) = (poly(&mut r, 16, 97), poly(&mut r, 16, 97));
        wrong += (a.to_ntt(&t).unwrap().from_ntt(&t).unwrap() != a) as u32;
        wrong += (a.mul(&b, &t).unwrap().coeffs != schoolbook(&a.coeffs, &b.coeffs, 97)) as u32;
    }
    // Products of all monomial pairs.
    for i in 0..16 {
        for j in 0..16 {
            let mono = |k: usize| RingPoly::from_coeffs((0..16).map(|c| (c == k) as i64).collect(), 97);
            let (a, b) = (mono(i), mono(j));
            wrong += (a.mul(&b, &t).unwrap().coeffs != schoolbook(&a.coeffs, &b.coeffs, 97)) as u32;
        }
    }
    out.check(wrong == 0, format!("n=16 q=97: seeds 0..10000 and all 256 monomial products, {wrong} mismatches"));
    let mut r = rng(11);
    for n in [512, 1024] {
        let t = NttTables::new(n, 12289).unwrap();
        let mut wrong = 0;
        for _ in 0..1000 {
            let a = poly(&mut r, n, 12289);
            wrong += (a.to_ntt(&t).unwrap().from_ntt(&t).unwrap() != a) as u32;
        }
        for _ in 0..5 {
            let (a, b) = (poly(&mut r, n, 12289), poly(&mut r, n, 12289));
            wrong += (a.mul(&b, &t).unwrap().coeffs != schoolbook(&a.coeffs, &b.coeffs, 12289)) as u32;
        }
        out.check(wrong == 0, format!("n={n} q=12289: 1000 round trips, 5 schoolbook products, {wrong} mismatches"));
    }
    out
}

fn main() {
    let criteria: [(u32, &str, Option<Duration>, fn() -> Outcome); 11] = [
        (1, "exhaustive KC/AKC correctness", Some(Duration::from_secs(60)), c1_kc_correctness),
        (2, "exhaustive KC security", Some(Duration::from_secs(60)), c2_kc_security),
        (3, "exhaustive AKC security", Some(Duration::from_secs(60)), c3_akc_security),
        (4, "upper-bound theorems", Some(Duration::from_secs(300)), c4_upper_bounds),
        (5, "error-rate table reproduction", None, c5_error_rates),
        (6, "E8 error-rate pipeline", Some(Duration::from_secs(300)), c6_zarzar),
        (7, "security-estimate reproduction", Some(Duration::from_secs(60)), c7_security),
        (8, "bandwidth reproduction", None, c8_bandwidth),
        (9, "code oracles", Some(Duration::from_secs(60)), c9_codes),
        (10, "full-parameter agreement", Some(Duration::from_secs(600)), c10_agreement),
        (11, "NTT", None, c11_ntt),
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut passed = 0;
    let mut ran = 0;
    for (id, title, limit, f) in criteria {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        ran += 1;
        let t = Instant::now();
        let mut o = f();
        let took = t.elapsed();
        if let Some(limit) = limit {
            o.check(took <= limit, format!("runtime {:.1}s (limit {}s)", took.as_secs_f64(), limit.as_secs()));
        }
        println!("criterion {id}: {} - {title} [{:.1}s]", if o.pass { "PASS" } else { "FAIL" }, took.as_secs_f64());
        for n in &o.notes {
            println!("    {n}");
        }
        passed += o.pass as u32;
    }
    println!("acceptance: {passed}/{ran} criteria passed");
    if passed < ran && std::env::var_os("KCX_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
