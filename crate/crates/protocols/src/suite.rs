//! Named parameter sets and the figures published alongside them.

use crate::ProtocolError;
use kcx_core::kc::{KcParams, KcVariant};
use kcx_core::noise::{self, NoiseDist};
use std::sync::LazyLock;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Lwr,
    Lwe,
    Hybrid,
    Rlwe,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Lwr => "LWR",
            Family::Lwe => "LWE",
            Family::Hybrid => "hybrid",
            Family::Rlwe => "RLWE",
        }
    }
}

/// How the shared bits are extracted from the noisy shared values.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reconciliation {
    /// One KC or AKC instance per coordinate.
    Kc { variant: KcVariant, params: KcParams },
    /// Per-coefficient KC with bits grouped into single-error-correcting blocks.
    Sec { variant: KcVariant, params: KcParams, n_h: u32 },
    /// One bit per four coefficients over D̃4, hint modulus g.
    Akcn41 { g: u32 },
    /// NewHope's D̃4 reconciliation with 2^r hint values.
    NewHope { r: u32 },
    /// Four bits per eight coefficients over E8, hint modulus g.
    E8 { g: u32 },
}

impl Reconciliation {
    pub fn name(&self) -> String {
        match self {
            Reconciliation::Kc { variant, .. } => variant.name().to_string(),
            Reconciliation::Sec { variant, n_h, .. } => format!("{}+sec(n_H={n_h})", variant.name()),
            Reconciliation::Akcn41 { .. } => "akcn-4:1".into(),
            Reconciliation::NewHope { .. } => "newhope".into(),
            Reconciliation::E8 { .. } => "e8".into(),
        }
    }

    pub fn kc(&self) -> Option<(KcVariant, KcParams)> {
        match *self {
            Reconciliation::Kc { variant, params } | Reconciliation::Sec { variant, params, .. } => {
                Some((variant, params))
            }
            _ => None,
        }
    }

    /// Hint modulus.
    pub fn g(&self) -> u32 {
        match *self {
            Reconciliation::Kc { params, .. } | Reconciliation::Sec { params, .. } => params.g,
            Reconciliation::Akcn41 { g } | Reconciliation::E8 { g } => g,
            Reconciliation::NewHope { r } => 1 << r,
        }
    }

    pub fn is_akc(&self) -> bool {
        match self {
            Reconciliation::Kc { variant, .. } | Reconciliation::Sec { variant, .. } => variant.is_akc(),
            Reconciliation::Akcn41 { .. } | Reconciliation::E8 { .. } => true,
            Reconciliation::NewHope { .. } => false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Attack {
    Primal,
    Dual,
}

/// Which hardness instance a security row refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Instance {
    Lwe,
    Lwr,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SecurityRow {
    pub instance: Instance,
    pub attack: Attack,
    pub m: u32,
    pub b: u32,
    /// Classical, quantum, plausible (log2).
    pub cost: Option<[u32; 3]>,
    /// The same after reducing from the sampled distribution to a Gaussian.
    pub post: Option<[u32; 3]>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PublishedBw {
    Total(u32),
    /// Public key and ciphertext.
    Split(u32, u32),
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Published {
    pub bandwidth: Option<PublishedBw>,
    pub log2_err: Option<f64>,
    /// Per-coefficient failure probability (RLWE rows).
    pub log2_per: Option<f64>,
    pub security: Vec<SecurityRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolSuite {
    pub name: String,
    pub family: Family,
    /// Secret dimension; n_A for the hybrid family.
    pub n: usize,
    /// n_B for the hybrid family; equal to n elsewhere.
    pub n_b: usize,
    pub l_a: usize,
    pub l_b: usize,
    pub q: u32,
    /// Rounding modulus (LWR and hybrid); q otherwise.
    pub p: u32,
    /// Bits cut from Y2 (LWE).
    pub t: u32,
    pub noise: NoiseDist,
    pub rec: Reconciliation,
    pub published: Published,
}

impl ProtocolSuite {
    /// Number of consensus bits.
    pub fn key_bits(&self) -> usize {
        match self.rec {
            Reconciliation::Kc { params, .. } => {
                let per = params.m.trailing_zeros() as usize;
                match self.family {
                    Family::Rlwe => self.n * per,
                    _ => self.l_a * self.l_b * per,
                }
            }
            Reconciliation::Sec { n_h, .. } => {
                let block = (1usize << n_h) + n_h as usize;
                (self.n / block) * ((1 << n_h) - 1)
            }
            Reconciliation::Akcn41 { .. } | Reconciliation::NewHope { .. } => self.n / 4,
            Reconciliation::E8 { .. } => self.n / 2,
        }
    }

    /// Modulus of the values fed to reconciliation.
    pub fn kc_modulus(&self) -> u32 {
        match self.family {
            Family::Lwr | Family::Hybrid => self.p,
            Family::Lwe | Family::Rlwe => self.q,
        }
    }

    /// Checks dimensions, moduli and reconciliation parameters.
    pub fn validate(&self) -> Result<(), String> {
        if self.n == 0 || self.n_b == 0 || self.l_a == 0 || self.l_b == 0 {
            return Err("dimensions must be positive".into());
        }
        if matches!(self.family, Family::Lwr | Family::Hybrid)
            && (!self.p.is_power_of_two() || !self.q.is_power_of_two() || self.p > self.q)
        {
            return Err(format!("p = {} must divide q = {}", self.p, self.q));
        }
        if self.t > 0 && (!self.q.is_power_of_two() || self.t >= self.q.trailing_zeros()) {
            return Err(format!("cannot cut {} bits from q = {}", self.t, self.q));
        }
        if self.family != Family::Rlwe && !matches!(self.rec, Reconciliation::Kc { .. }) {
            return Err("matrix families use per-coordinate reconciliation".into());
        }
        if self.family == Family::Hybrid && !self.rec.is_akc() {
            return Err("hybrid construction needs an asymmetric scheme".into());
        }
        if let Some((variant, params)) = self.rec.kc() {
            if params.q != self.kc_modulus() {
                return Err(format!("reconciliation modulus {} != {}", params.q, self.kc_modulus()));
            }
            kcx_core::kc::validate_params(variant, &params).map_err(|v| v.to_string())?;
        }
        match self.rec {
            Reconciliation::Sec { params, n_h, .. } => {
                if params.m != 2 || !(2..=5).contains(&n_h) {
                    return Err("SEC blocks need binary symbols and 2 <= n_H <= 5".into());
                }
            }
            Reconciliation::Akcn41 { .. } | Reconciliation::NewHope { .. } => {
                if self.n % 4 != 0 {
                    return Err("D4 grouping needs 4 | n".into());
                }
            }
            Reconciliation::E8 { .. } => {
                if self.n % 8 != 0 {
                    return Err("E8 grouping needs 8 | n".into());
                }
            }
            Reconciliation::Kc { .. } => {}
        }
        Ok(())
    }
}

fn kc(variant: KcVariant, q: u32, m: u32, g: u32, d: u32) -> Reconciliation {
    Reconciliation::Kc { variant, params: KcParams::new(q, m, g, d).expect("registry parameters") }
}

fn sec(variant: KcVariant, g: u32, d: u32, n_h: u32) -> Reconciliation {
    Reconciliation::Sec {
        variant,
        params: KcParams::new(12289, 2, g, d).expect("registry parameters"),
        n_h,
    }
}

/// (attack, m, b, cost, post) rows for one instance.
type Row = (Attack, u32, u32, Option<[u32; 3]>, Option<[u32; 3]>);

fn rows(instance: Instance, rows: &[Row]) -> Vec<SecurityRow> {
    rows.iter()
        .map(|&(attack, m, b, cost, post)| SecurityRow { instance, attack, m, b, cost, post })
        .collect()
}

use Attack::{Dual, Primal};

struct Matrix {
    name: &'static str,
    family: Family,
    n: usize,
    l: usize,
    q: u32,
    p: u32,
    t: u32,
    noise: NoiseDist,
    rec: Reconciliation,
    bw_bytes: u32,
    log2_err: f64,
    security: Vec<SecurityRow>,
}

impl Matrix {
    fn build(self) -> ProtocolSuite {
        ProtocolSuite {
            name: self.name.into(),
            family: self.family,
            n: self.n,
            n_b: self.n,
            l_a: self.l,
            l_b: self.l,
            q: self.q,
            p: self.p,
            t: self.t,
            noise: self.noise,
            rec: self.rec,
            published: Published {
                bandwidth: Some(PublishedBw::Total(self.bw_bytes)),
                log2_err: Some(self.log2_err),
                log2_per: None,
                security: self.security,
            },
        }
    }
}

fn lwe_rows(p: [Row; 2]) -> Vec<SecurityRow> {
    rows(Instance::Lwe, &p)
}

const fn some(c: u32, q: u32, p: u32) -> Option<[u32; 3]> {
    Some([c, q, p])
}

fn frodo_security(name: &str) -> Vec<SecurityRow> {
    match name {
        "challenge" => lwe_rows([(Primal, 338, 266, None, None), (Dual, 331, 263, None, None)]),
        "classical" => lwe_rows([
            (Primal, 549, 442, some(138, 126, 100), some(132, 120, 95)),
            (Dual, 544, 438, some(136, 124, 99), some(130, 119, 94)),
        ]),
        "recommended" => lwe_rows([
            (Primal, 716, 489, some(151, 138, 110), some(145, 132, 104)),
            (Dual, 737, 485, some(150, 137, 109), some(144, 130, 103)),
        ]),
        _ => lwe_rows([
            (Primal, 793, 581, some(179, 163, 129), some(178, 162, 129)),
            (Dual, 833, 576, some(177, 161, 128), some(177, 161, 128)),
        ]),
    }
}

fn build_registry() -> Vec<ProtocolSuite> {
    use KcVariant::*;
    let mut out = Vec::new();

    let lwr = |name, n, noise, bw, err, sec: [Row; 2]| Matrix {
        name,
        family: Family::Lwr,
        n,
        l: 8,
        q: 1 << 15,
        p: 1 << 12,
        t: 0,
        noise: NoiseDist::Table(noise),
        // Largest d with (2d + 1)m < p(1 - 1/g).
        rec: kc(OkcnSimple, 1 << 12, 16, 256, 126),
        bw_bytes: bw,
        log2_err: err,
        security: rows(Instance::Lwr, &sec),
    }
    .build();
    out.push(lwr(
        "lwr-recommended",
        680,
        &noise::D_R,
        16390,
        -35.0,
        [(Primal, 667, 461, some(143, 131, 104), None), (Dual, 631, 458, some(142, 130, 103), None)],
    ));
    out.push(lwr(
        "lwr-paranoid",
        832,
        &noise::D_P,
        20030,
        -34.0,
        [(Primal, 768, 584, some(180, 164, 130), None), (Dual, 746, 580, some(179, 163, 129), None)],
    ));

    // LWE without cutting.
    let lwe = |name, q: u32, n, l, m, g, noise, bw, err, sec: [Row; 2]| Matrix {
        name,
        family: Family::Lwe,
        n,
        l,
        q,
        p: q,
        t: 0,
        noise: NoiseDist::Table(noise),
        rec: kc(OkcnSimple, q, m, g, g / 2 - 1),
        bw_bytes: bw,
        log2_err: err,
        security: lwe_rows(sec),
    }
    .build();
    out.push(lwe(
        "lwe-challenge",
        1 << 10,
        334,
        8,
        2,
        1 << 9,
        &noise::D1,
        6750,
        -47.9,
        [(Primal, 327, 275, None, None), (Dual, 310, 272, None, None)],
    ));
    out.push(lwe(
        "lwe-classical",
        1 << 11,
        554,
        8,
        4,
        1 << 9,
        &noise::D2,
        12260,
        -39.4,
        [
            (Primal, 477, 444, some(138, 126, 100), some(132, 120, 95)),
            (Dual, 502, 439, some(137, 125, 99), some(131, 119, 94)),
        ],
    ));
    out.push(lwe(
        "lwe-recommended",
        1 << 14,
        718,
        8,
        16,
        1 << 10,
        &noise::D3,
        20180,
        -37.9,
        [
            (Primal, 664, 500, some(155, 141, 112), some(146, 133, 105)),
            (Dual, 661, 496, some(154, 140, 111), some(145, 132, 104)),
        ],
    ));
    out.push(lwe(
        "lwe-paranoid",
        1 << 14,
        818,
        8,
        16,
        1 << 10,
        &noise::D4,
        22980,
        -32.6,
        [
            (Primal, 765, 586, some(180, 164, 130), some(179, 163, 130)),
            (Dual, 743, 582, some(179, 163, 129), some(178, 162, 129)),
        ],
    ));
    out.push(lwe(
        "lwe-paranoid-512",
        1 << 12,
        700,
        16,
        4,
        1 << 10,
        &noise::DBAR4,
        33920,
        -33.6,
        [
            (Primal, 643, 587, some(180, 164, 131), some(180, 164, 130)),
            (Dual, 681, 581, some(179, 163, 129), some(178, 162, 129)),
        ],
    ));

    // LWE with cut bits.
    let t_rows = || {
        lwe_rows([
            (Primal, 638, 480, some(149, 136, 108), some(148, 135, 107)),
            (Dual, 640, 476, some(148, 135, 107), some(147, 134, 106)),
        ])
    };
    for (name, t, bw, err) in [("okcn-t2", 2, 18580, -39.0), ("okcn-t1", 1, 19290, -52.3)] {
        out.push(
            Matrix {
                name,
                family: Family::Lwe,
                n: 712,
                l: 8,
                q: 1 << 14,
                p: 1 << 14,
                t,
                noise: NoiseDist::Table(&noise::D5),
                rec: kc(OkcnPower2, 1 << 14, 16, 256, 509),
                bw_bytes: bw,
                log2_err: err,
                security: t_rows(),
            }
            .build(),
        );
    }

    // Frodo parameter sets, once with Frodo's reconciliation and once with OKCN.
    let frodo = [
        ("challenge", 11, 352, 2, 4, 383, 255, &noise::DBAR1, (7760, 7750), (-80.1, -41.8)),
        ("classical", 12, 592, 4, 4, 383, 255, &noise::DBAR2, (14220, 14220), (-70.3, -36.2)),
        ("recommended", 15, 752, 16, 8, 895, 511, &noise::DBAR3, (22580, 22570), (-105.9, -38.9)),
        ("paranoid", 15, 864, 16, 8, 895, 511, &noise::DBAR4, (25940, 25930), (-91.9, -33.8)),
    ];
    for (label, qb, n, m, g, d_okcn, d_frodo, table, bw, err) in frodo {
        let q = 1u32 << qb;
        let base = |name: String, rec, bw_bytes, log2_err| ProtocolSuite {
            name,
            family: Family::Lwe,
            n,
            n_b: n,
            l_a: 8,
            l_b: 8,
            q,
            p: q,
            t: 0,
            noise: NoiseDist::Table(table),
            rec,
            published: Published {
                bandwidth: Some(PublishedBw::Total(bw_bytes)),
                log2_err: Some(log2_err),
                log2_per: None,
                security: frodo_security(label),
            },
        };
        out.push(base(format!("frodo-{label}"), kc(FrodoRec, q, m, 2, d_frodo), bw.1, err.1));
        out.push(base(format!("okcn-frodo-{label}"), kc(OkcnPower2, q, m, g, d_okcn), bw.0, err.0));
    }

    // Hybrid: LWE public key, LWR ciphertext.
    let hybrid = |name: &str, n_a, n_b, pk, ct, err, lwe: [Row; 2], lwr: [Row; 2]| {
        let mut security = rows(Instance::Lwe, &lwe);
        security.extend(rows(Instance::Lwr, &lwr));
        ProtocolSuite {
            name: name.into(),
            family: Family::Hybrid,
            n: n_a,
            n_b,
            l_a: 8,
            l_b: 8,
            q: 1 << 15,
            p: 1 << 12,
            t: 0,
            noise: NoiseDist::Gaussian(2.0),
            rec: kc(AkcnGeneric, 1 << 12, 16, 256, 119),
            published: Published {
                bandwidth: Some(PublishedBw::Split(pk, ct)),
                log2_err: Some(err),
                log2_per: None,
                security,
            },
        }
    };
    out.push(hybrid(
        "hybrid-recommended",
        712,
        704,
        10560,
        8610,
        -63.0,
        [(Primal, 699, 464, some(144, 131, 105), None), (Dual, 672, 461, some(143, 131, 104), None)],
        [(Primal, 664, 487, some(151, 138, 109), None), (Dual, 665, 483, some(150, 137, 109), None)],
    ));
    out.push(hybrid(
        "hybrid-paranoid",
        864,
        832,
        12240,
        10430,
        -52.0,
        [(Primal, 808, 590, some(181, 165, 131), None), (Dual, 789, 583, some(179, 163, 130), None)],
        [(Primal, 856, 585, some(180, 164, 130), None), (Dual, 765, 579, some(178, 162, 129), None)],
    ));

    // RLWE at n = 1024, q = 12289 with Ψ16.
    let ring = |name: &str, rec, bw, per, err| ProtocolSuite {
        name: name.into(),
        family: Family::Rlwe,
        n: 1024,
        n_b: 1024,
        l_a: 1,
        l_b: 1,
        q: 12289,
        p: 12289,
        t: 0,
        noise: NoiseDist::CenteredBinomial(16),
        rec,
        published: Published {
            bandwidth: Some(PublishedBw::Total(bw)),
            log2_err: Some(err),
            log2_per: Some(per),
            security: Vec::new(),
        },
    };
    let q = 12289;
    out.push(ring("okcn-rlwe-g16", kc(OkcnGeneric, q, 2, 16, 2879), 4128, -48.0, -38.0));
    out.push(ring("okcn-rlwe-g64", kc(OkcnGeneric, q, 2, 64, 3023), 4384, -52.0, -42.0));
    out.push(ring("akcn-rlwe-g16", kc(AkcnGeneric, q, 2, 16, 2687), 4128, -42.0, -32.0));
    out.push(ring("akcn-rlwe-g64", kc(AkcnGeneric, q, 2, 64, 2975), 4384, -51.0, -41.0));
    out.push(ring("okcn-sec-g4", sec(OkcnGeneric, 4, 2303, 4), 3904, -31.0, -48.0));
    out.push(ring("okcn-sec-765", sec(OkcnGeneric, 8, 2687, 4), 4032, -42.0, -70.0));
    out.push(ring("okcn-sec-837", sec(OkcnGeneric, 8, 2687, 5), 4021, -42.0, -69.0));
    out.push(ring("akcn-sec-765", sec(AkcnGeneric, 16, 2687, 4), 4128, -42.0, -70.0));
    out.push(ring("akcn-sec-837", sec(AkcnGeneric, 16, 2687, 5), 4128, -42.0, -69.0));
    out.push(ring("newhope", Reconciliation::NewHope { r: 2 }, 3872, -69.0, -61.0));
    out.push(ring("akcn-4-1", Reconciliation::Akcn41 { g: 4 }, 3904, -69.0, -61.0));

    out.push(ProtocolSuite {
        name: "zarzar".into(),
        family: Family::Rlwe,
        n: 512,
        n_b: 512,
        l_a: 1,
        l_b: 1,
        q,
        p: q,
        t: 0,
        noise: NoiseDist::Bab(24, 16),
        rec: Reconciliation::E8 { g: 64 },
        published: Published {
            bandwidth: None,
            log2_err: Some(-58.0),
            log2_per: None,
            security: rows(
                Instance::Lwe,
                &[(Primal, 646, 491, some(143, 130, 101), None), (Dual, 663, 489, some(143, 129, 101), None)],
            ),
        },
    });
    out
}

static REGISTRY: LazyLock<Vec<ProtocolSuite>> = LazyLock::new(build_registry);

pub fn all_suites() -> &'static [ProtocolSuite] {
    &REGISTRY
}

pub fn suite_by_name(name: &str) -> Result<&'static ProtocolSuite, ProtocolError> {
    REGISTRY
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name))
        .ok_or_else(|| ProtocolError::UnknownSuite {
            name: name.to_string(),
            known: REGISTRY.iter().map(|s| s.name.as_str()).collect::<Vec<_>>().join(", "),
        })
}
