use kcx_core::kc::{KcParams, KcVariant};
use kcx_core::noise::{self, NoiseDist};
use kcx_protocols::suite::{Family, Published, PublishedBw, Reconciliation};
use kcx_protocols::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

#[allow(clippy::too_many_arguments)]
fn toy(
    family: Family,
    n: usize,
    l: usize,
    q: u32,
    p: u32,
    t: u32,
    noise: NoiseDist,
    variant: KcVariant,
    m: u32,
    g: u32,
    d: u32,
) -> ProtocolSuite {
    let kq = if matches!(family, Family::Lwr | Family::Hybrid) { p } else { q };
    ProtocolSuite {
        name: "toy".into(),
        family,
        n,
        n_b: n,
        l_a: l,
        l_b: l,
        q,
        p,
        t,
        noise,
        rec: Reconciliation::Kc { variant, params: KcParams::new(kq, m, g, d).unwrap() },
        published: Published::default(),
    }
}

fn run(s: &ProtocolSuite, r: &mut ChaCha20Rng) -> (ConsensusKey, ConsensusKey, usize) {
    let (init, m1) = initiate(s, r).unwrap();
    let (k2, m2) = respond(s, &m1, r).unwrap();
    let k1 = finish(&init, &m2).unwrap();
    (k1, k2, m1.len() + m2.len())
}

fn agree_always(s: &ProtocolSuite, runs: usize, seed: u64) {
    s.validate().unwrap();
    let mut r = rng(seed);
    for i in 0..runs {
        let (k1, k2, _) = run(s, &mut r);
        assert_eq!(k1.len(), s.key_bits());
        assert_eq!(k1, k2, "run {i}");
    }
}

#[test]
fn toy_lwr_zero_noise() {
    let s = toy(Family::Lwr, 4, 1, 1 << 6, 1 << 4, 0, NoiseDist::Zero, KcVariant::OkcnPower2, 2, 4, 2);
    agree_always(&s, 10_000, 1);
}

#[test]
fn toy_lwr_binary_noise_within_bound() {
    // |Σ2 − Σ1| <= (n(r/2) + n(r/2 + r/2))/r = 6 < d.
    let s = toy(Family::Lwr, 4, 2, 1 << 10, 1 << 8, 0, NoiseDist::Binary, KcVariant::OkcnSimple, 2, 128, 63);
    agree_always(&s, 10_000, 2);
}

#[test]
fn binary_lwe_with_d_at_least_n_plus_one() {
    let s = toy(Family::Lwe, 8, 2, 1 << 8, 1 << 8, 0, NoiseDist::Binary, KcVariant::OkcnPower2, 2, 64, 9);
    agree_always(&s, 10_000, 3);
}

#[test]
fn zero_secret_lwe_with_cut_bits() {
    let s = toy(Family::Lwe, 16, 2, 1 << 10, 1 << 10, 3, NoiseDist::Zero, KcVariant::OkcnSimple, 4, 256, 127);
    agree_always(&s, 1000, 4);
}

#[test]
fn toy_hybrid() {
    let mut s = toy(Family::Hybrid, 8, 2, 1 << 12, 1 << 8, 0, NoiseDist::Binary, KcVariant::AkcnGeneric, 4, 64, 20);
    s.n_b = 6;
    agree_always(&s, 10_000, 5);
}

#[test]
fn toy_rlwe_plain() {
    let s = toy(Family::Rlwe, 16, 1, 97, 97, 0, NoiseDist::CenteredBinomial(1), KcVariant::OkcnGeneric, 2, 8, 20);
    agree_always(&s, 10_000, 6);
}

#[test]
fn every_suite_agrees_and_matches_bandwidth() {
    let mut r = rng(7);
    for s in all_suites() {
        let bw = bandwidth(s);
        for _ in 0..3 {
            let (init, m1) = initiate(s, &mut r).unwrap();
            let (k2, m2) = respond(s, &m1, &mut r).unwrap();
            assert_eq!((m1.len(), m2.len()), (bw.msg1, bw.msg2), "{}", s.name);
            assert_eq!(finish(&init, &m2).unwrap(), k2, "{}", s.name);
            assert_eq!(k2.len(), s.key_bits());
        }
    }
}

#[test]
fn published_bandwidth_within_three_percent() {
    for s in all_suites() {
        let bw = bandwidth(s);
        match s.published.bandwidth {
            Some(PublishedBw::Total(b)) => {
                let rel = (bw.total() as f64 - b as f64).abs() / b as f64;
                assert!(rel <= 0.03, "{}: {} vs {b}", s.name, bw.total());
            }
            Some(PublishedBw::Split(pk, ct)) => {
                for (ours, theirs) in [(bw.msg1, pk), (bw.msg2, ct)] {
                    let rel = (ours as f64 - theirs as f64).abs() / theirs as f64;
                    assert!(rel <= 0.03, "{}: {ours} vs {theirs}", s.name);
                }
            }
            None => {}
        }
    }
}

#[test]
fn transcripts_are_deterministic() {
    for name in ["lwr-recommended", "okcn-t2", "hybrid-recommended", "akcn-sec-837", "zarzar"] {
        let s = suite_by_name(name).unwrap();
        let once = |seed| {
            let mut r = rng(seed);
            let (init, m1) = initiate(s, &mut r).unwrap();
            let (k2, m2) = respond(s, &m1, &mut r).unwrap();
            let k1 = finish(&init, &m2).unwrap();
            (m1, m2, k1, k2)
        };
        let a = once(11);
        assert_eq!(a, once(11));
        assert_ne!(a.0, once(12).0);
    }
}

#[test]
fn hybrid_transports_chosen_key() {
    let s = suite_by_name("hybrid-recommended").unwrap();
    let mut r = rng(8);
    let (sk, pk) = initiate(s, &mut r).unwrap();
    let zero = ConsensusKey::zeros(256);
    let (k2, ct) = respond_with_key(s, &pk, &zero, &mut r).unwrap();
    assert_eq!(k2, zero);
    assert_eq!(finish(&sk, &ct).unwrap(), zero);
}

#[test]
fn akc_ring_modes_transport_chosen_key() {
    let mut r = rng(9);
    for name in ["akcn-rlwe-g16", "akcn-sec-837", "akcn-4-1", "zarzar"] {
        let s = suite_by_name(name).unwrap();
        let chosen = ConsensusKey::random(s.key_bits(), &mut r);
        let (init, m1) = initiate(s, &mut r).unwrap();
        let (_, m2) = respond_with_key(s, &m1, &chosen, &mut r).unwrap();
        assert_eq!(finish(&init, &m2).unwrap(), chosen, "{name}");
    }
}

#[test]
fn chosen_key_rejected_for_okcn_and_wrong_length() {
    let mut r = rng(10);
    let s = suite_by_name("okcn-sec-837").unwrap();
    let (_, m1) = initiate(s, &mut r).unwrap();
    assert!(matches!(
        respond_with_key(s, &m1, &ConsensusKey::zeros(837), &mut r),
        Err(ProtocolError::NotAsymmetric)
    ));
    let h = suite_by_name("hybrid-recommended").unwrap();
    let (_, pk) = initiate(h, &mut r).unwrap();
    assert!(matches!(
        respond_with_key(h, &pk, &ConsensusKey::zeros(255), &mut r),
        Err(ProtocolError::KeyLength { expected: 256, got: 255 })
    ));
}

#[test]
fn malformed_lengths_rejected() {
    let mut r = rng(11);
    for name in ["lwr-recommended", "lwe-challenge", "hybrid-recommended", "newhope"] {
        let s = suite_by_name(name).unwrap();
        let (init, m1) = initiate(s, &mut r).unwrap();
        assert!(matches!(respond(s, &m1[1..], &mut r), Err(ProtocolError::Length { .. })));
        let (_, mut m2) = respond(s, &m1, &mut r).unwrap();
        m2.push(0);
        assert!(matches!(finish(&init, &m2), Err(ProtocolError::Length { .. })));
    }
}

#[test]
fn family_mismatch_rejected() {
    let mut r = rng(12);
    let s = suite_by_name("lwr-recommended").unwrap();
    assert!(matches!(lwe::initiate(s, &mut r), Err(ProtocolError::Family { .. })));
    assert!(matches!(rlwe::initiate(s, &mut r), Err(ProtocolError::Family { .. })));
}

#[test]
fn kdf_over_agreed_keys() {
    let s = suite_by_name("okcn-t2").unwrap();
    let (k1, k2, _) = run(s, &mut rng(13));
    assert_eq!(derive_key(&s.name, &k1, Kdf::Shake256), derive_key(&s.name, &k2, Kdf::Shake256));
    assert_eq!(derive_key(&s.name, &k1, Kdf::Identity).len(), 32);
}

/// Correlation of the indicators |σ2 − σ1| > one standard deviation at
/// coefficient offsets 1 and n/2. Multiplying by x permutes coefficients
/// cyclically (up to sign) and leaves the noise distribution unchanged, so
/// every rotation (i, i + k) has the same joint law as (0, k); the estimate
/// pools all rotations.
fn error_indicator_correlations(runs: usize, seed: u64) -> (f64, f64) {
    let s = suite_by_name("zarzar").unwrap();
    let n = s.n;
    let var = s.noise.variance();
    // 2n products of two noise terms plus one noise term.
    let sd = (2.0 * n as f64 * var * var + var).sqrt();
    let mut r = rng(seed);
    let (mut hits, mut near, mut far) = (0u64, 0u64, 0u64);
    for _ in 0..runs {
        let w = rlwe::noise_difference(s, &mut r).unwrap();
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

#[test]
fn rlwe_error_indicators_nearly_uncorrelated() {
    let (a, b) = error_indicator_correlations(10_000, 14);
    assert!(a.abs() < 0.02 && b.abs() < 0.02, "correlations {a} {b}");
}

#[test]
fn noise_tables_in_registry_are_consistent() {
    for s in all_suites() {
        if let NoiseDist::Table(t) = &s.noise {
            assert!(t.checksum_ok(), "{}", s.name);
            assert!(noise::table_by_name(t.name).is_some());
        }
    }
}
