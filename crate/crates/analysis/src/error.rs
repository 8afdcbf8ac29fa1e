//! Failure probabilities from exact convolution of the noise terms.

use crate::dist::{discretize_chisq, multiply_merge, ResiduePmf};
use crate::AnalysisError;
use kcx_core::kc::{
    akc_con, akc_rec, dist_mod, kc_con_with, kc_rec, okcn_noise_range, round_div, KcParams, KcVariant,
};
use kcx_core::noise::Pmf;
use kcx_protocols::{Family, ProtocolSuite, Reconciliation};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorRate {
    /// Failure probability of one coordinate (or one E8 group).
    pub per: f64,
    /// Union bound over the whole key.
    pub overall: f64,
}

impl ErrorRate {
    pub fn log2_per(&self) -> f64 {
        self.per.log2()
    }

    pub fn log2_overall(&self) -> f64 {
        self.overall.log2()
    }
}

fn expect(suite: &ProtocolSuite, family: Family) -> Result<(), AnalysisError> {
    if suite.family != family {
        return Err(AnalysisError::Unsupported(format!(
            "{} is a {} suite, expected {}",
            suite.name,
            suite.family.name(),
            family.name()
        )));
    }
    Ok(())
}

fn kc_of(suite: &ProtocolSuite) -> Result<(KcVariant, KcParams), AnalysisError> {
    suite
        .rec
        .kc()
        .ok_or_else(|| AnalysisError::Unsupported(format!("{} has no per-coordinate reconciliation", suite.name)))
}

/// Fraction of (σ, Con coins, key) for which reconciliation fails when the
/// two sides differ by `delta` (σ_rec = σ_con − delta).
pub fn kc_failure_fraction(variant: KcVariant, p: &KcParams, delta: i64) -> f64 {
    let q = p.q as i64;
    let (mut bad, mut total) = (0u64, 0u64);
    if variant.is_akc() {
        for k in 0..p.m as i64 {
            for s in 0..q {
                let v = akc_con(variant, s, k, p).expect("valid params") as i64;
                let k2 = akc_rec(variant, (s - delta).rem_euclid(q), v, p).expect("valid params");
                bad += (k2 as i64 != k) as u64;
                total += 1;
            }
        }
    } else {
        let (lo, hi) = if variant == KcVariant::OkcnGeneric { okcn_noise_range(p) } else { (0, 0) };
        for e in lo..=hi {
            for s in 0..q {
                let out = kc_con_with(variant, s, p, e).expect("valid params");
                let k2 = kc_rec(variant, (s - delta).rem_euclid(q), out.v as i64, p).expect("valid params");
                bad += (k2 != out.k1) as u64;
                total += 1;
            }
        }
    }
    bad as f64 / total as f64
}

/// Failure probability of one coordinate given the distribution of
/// σ_con − σ_rec. OKCN and AKCN use the correctness radius |δ| > d; Frodo's
/// reconciliation is evaluated exactly, since its radius is far from tight.
pub fn kc_failure(variant: KcVariant, p: &KcParams, delta: &Pmf) -> f64 {
    let q = p.q as u64;
    let d = p.d as i64;
    let outside = |x: i64| dist_mod(x, q).expect("q > 0") as i64 > d;
    if variant != KcVariant::FrodoRec {
        return delta.prob_where(outside);
    }
    delta
        .iter()
        .filter(|&(x, px)| px > 0.0 && outside(x))
        .map(|(x, px)| px * kc_failure_fraction(variant, p, x))
        .sum()
}

/// Union bound over the l_A·l_B coordinates, or over the key bits for the
/// LWE suites, matching how the published figures are stated.
fn matrix_rate(suite: &ProtocolSuite, per: f64) -> ErrorRate {
    let units = match suite.family {
        Family::Lwe => suite.key_bits(),
        _ => suite.l_a * suite.l_b,
    };
    ErrorRate { per, overall: (units as f64 * per).min(1.0) }
}

/// Uniform over [−r/2, r/2 − 1], the range of {x}_p.
fn frac_uniform(r: i64) -> Pmf {
    if r == 1 {
        Pmf::point(0)
    } else {
        Pmf::uniform(-r / 2, r / 2 - 1)
    }
}

/// Distribution of W with Σ2 − Σ1 = ⌊W / r⌉ for one LWR coordinate, where
/// r = q/p and W = X1ᵀ{AᵀX2}_p − ({AX1}_p − ε)ᵀX2.
///
/// Both fractional vectors are uniform given the residue
/// a = X1ᵀAᵀX2 mod r, and independent of each other given a, so
/// Pr[W = c] = Σ_a Σ_{c1 − c2 = c} Pr[c1, a] · Pr[c2, a] / Pr[a]
/// with y1, y2 uniform. This is exact when X1 and X2 always have an odd
/// entry, so that AX1 and AᵀX2 are uniform mod r; otherwise it is off by at
/// most Pr[X ≡ 0 mod 2], which is negligible at real dimensions.
pub fn lwr_difference(n: u64, r: i64, chi: &Pmf) -> Pmf {
    let u = frac_uniform(r);
    let eps = frac_uniform(r);
    let left = chi.mul(&u).sum_n(n);
    // c2 = Σ x(y − ε), tracked jointly with Σ x·y mod r.
    let term = ResiduePmf::from_triples(
        r as usize,
        chi.iter().flat_map(|(x, px)| {
            let (u, eps) = (&u, &eps);
            u.iter().flat_map(move |(y, py)| {
                eps.iter().map(move |(e, pe)| (x * (y - e), x * y, px * py * pe))
            })
        }),
    );
    let right = term.sum_n(n);
    let mut total: Option<Pmf> = None;
    for a in 0..r {
        let c1 = Pmf::from_pairs(left.iter().filter(|(c, _)| c.rem_euclid(r) == a));
        let c2 = right.slice(a as usize);
        let pa = c1.mass();
        if pa == 0.0 || c2.is_empty() {
            continue;
        }
        let part = c1.add(&c2.neg());
        let part = Pmf::from_pairs(part.iter().map(|(c, p)| (c, p / pa)));
        total = Some(match total {
            None => part,
            Some(t) => Pmf::from_pairs(t.iter().chain(part.iter())),
        });
    }
    total.unwrap_or_else(|| Pmf::point(0))
}

pub fn lwr_error_rate(suite: &ProtocolSuite) -> Result<ErrorRate, AnalysisError> {
    expect(suite, Family::Lwr)?;
    let (variant, params) = kc_of(suite)?;
    let r = (suite.q / suite.p) as i64;
    let w = lwr_difference(suite.n as u64, r, &suite.noise.pmf());
    let per = kc_failure(variant, &params, &w.map(|c| round_div(c, r)));
    Ok(matrix_rate(suite, per))
}

/// ε = 2^t⌊y/2^t⌋ + 2^{t−1} − y for uniform y.
pub fn cut_error(t: u32) -> Pmf {
    if t == 0 {
        Pmf::point(0)
    } else {
        let h = 1i64 << (t - 1);
        Pmf::uniform(-h + 1, h)
    }
}

/// Distribution of X1ᵀ(E2 + ε) − E1ᵀX2 − Eσ for one coordinate.
pub fn lwe_difference(n: u64, t: u32, chi: &Pmf) -> Pmf {
    let left = chi.mul(&chi.add(&cut_error(t))).sum_n(n);
    let right = chi.mul(chi).sum_n(n);
    left.add(&right.neg()).add(&chi.neg())
}

pub fn lwe_error_rate(suite: &ProtocolSuite) -> Result<ErrorRate, AnalysisError> {
    expect(suite, Family::Lwe)?;
    let (variant, params) = kc_of(suite)?;
    let w = lwe_difference(suite.n as u64, suite.t, &suite.noise.pmf());
    let per = kc_failure(variant, &params, &w);
    Ok(matrix_rate(suite, per))
}

/// Distribution of E1ᵀX2 + X1ᵀ{AᵀX2}_p, with {AᵀX2}_p uniform.
pub fn hybrid_difference(n_a: u64, n_b: u64, r: i64, chi: &Pmf) -> Pmf {
    chi.mul(chi).sum_n(n_b).add(&chi.mul(&frac_uniform(r)).sum_n(n_a))
}

pub fn hybrid_error_rate(suite: &ProtocolSuite) -> Result<ErrorRate, AnalysisError> {
    expect(suite, Family::Hybrid)?;
    let (variant, params) = kc_of(suite)?;
    let r = (suite.q / suite.p) as i64;
    let w = hybrid_difference(suite.n as u64, suite.n_b as u64, r, &suite.noise.pmf());
    let per = kc_failure(variant, &params, &w.map(|c| round_div(c, r)));
    Ok(matrix_rate(suite, per))
}

/// Distribution of one coefficient of e2·x1 − e1·x2 − eσ, treating the
/// 2n products as independent.
pub fn rlwe_difference(n: u64, chi: &Pmf) -> Pmf {
    chi.mul(chi).sum_n(2 * n).add(&chi.neg())
}

fn choose2(k: u64) -> f64 {
    (k * (k - 1) / 2) as f64
}

/// Per-coefficient and overall failure probability for plain and SEC modes.
pub fn rlwe_error_rate(suite: &ProtocolSuite) -> Result<ErrorRate, AnalysisError> {
    expect(suite, Family::Rlwe)?;
    let (d, n_h) = match suite.rec {
        Reconciliation::Kc { params, .. } => (params.d as i64, None),
        Reconciliation::Sec { params, n_h, .. } => (params.d as i64, Some(n_h)),
        _ => {
            return Err(AnalysisError::Unsupported(format!(
                "{} reconciliation has no per-coefficient analysis",
                suite.rec.name()
            )))
        }
    };
    let w = rlwe_difference(suite.n as u64, &suite.noise.pmf());
    let q = suite.q as u64;
    let per = w.prob_where(|c| dist_mod(c, q).expect("q > 0") as i64 > d);
    let overall = match n_h {
        None => suite.n as f64 * per,
        Some(n_h) => {
            let block = (1u64 << n_h) + n_h as u64;
            let blocks = suite.n as u64 / block;
            blocks as f64 * choose2(block) * per * per
        }
    };
    Ok(ErrorRate { per, overall: overall.min(1.0) })
}

/// Intermediate values of the E8 bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZarzarReport {
    /// Integer lower bound on the decoding radius.
    pub radius: i64,
    /// ⌊radius² / 4σ⁴⌋.
    pub t: i64,
    /// t − 64.
    pub threshold: i64,
    /// Pr[distr > threshold].
    pub tail: f64,
    pub groups: u64,
    pub overall: f64,
}

pub const ZARZAR_SLACK: i64 = 64;
const CHISQ_BIG_STEP: f64 = 0.1;
const CHISQ_SMALL_STEP: f64 = 0.02;
const MERGE_STEP: i64 = 4;

/// Bound for E8 reconciliation with noise variance σ², n/8 groups.
///
/// distr approximates Σ_{i<4} x_i·y_i with x_i ~ χ²(n/2), y_i ~ χ²(2),
/// discretized at 0.1 and 0.02, multiplied, merged to a grid of 4 and
/// added to itself twice.
pub fn zarzar_error_rate(sigma2: f64, q: u32, g: u32, n: u32) -> Result<ZarzarReport, AnalysisError> {
    if n == 0 || n % 8 != 0 || g == 0 || !(sigma2 >= 0.0) {
        return Err(AnalysisError::Param(format!("sigma2 = {sigma2}, g = {g}, n = {n}")));
    }
    let groups = (n / 8) as u64;
    let sigma = sigma2.sqrt();
    let qf = q as f64;
    let radius = ((qf - 1.0) / 2.0 - 2f64.sqrt() * (qf / g as f64 + 1.0) - 10.0 * sigma).floor() as i64;
    if radius <= 0 {
        return Ok(ZarzarReport { radius, t: 0, threshold: -ZARZAR_SLACK, tail: 1.0, groups, overall: 1.0 });
    }
    if sigma2 == 0.0 {
        return Ok(ZarzarReport { radius, t: i64::MAX, threshold: i64::MAX, tail: 0.0, groups, overall: 0.0 });
    }
    let t = ((radius * radius) as f64 / (4.0 * sigma2 * sigma2)).floor() as i64;
    let threshold = t - ZARZAR_SLACK;
    if threshold < 0 {
        return Ok(ZarzarReport { radius, t, threshold, tail: 1.0, groups, overall: 1.0 });
    }
    let big = discretize_chisq(n as f64 / 2.0, CHISQ_BIG_STEP)?;
    let small = discretize_chisq(2.0, CHISQ_SMALL_STEP)?;
    // Values are nonnegative, so lumping everything above the threshold
    // into one bin leaves the tail event unchanged.
    let cap = threshold / MERGE_STEP + 1;
    let prod = multiply_merge(&small, &big, MERGE_STEP as f64, Some(cap))?;
    let two = prod.pmf.add(&prod.pmf).map(|x| x.min(cap));
    let four = two.add(&two);
    let tail = four.prob_where(|k| k * MERGE_STEP > threshold);
    Ok(ZarzarReport { radius, t, threshold, tail, groups, overall: (groups as f64 * tail).min(1.0) })
}

/// Dispatches on the suite's family and reconciliation.
pub fn error_rate(suite: &ProtocolSuite) -> Result<ErrorRate, AnalysisError> {
    match (suite.family, suite.rec) {
        (Family::Lwr, _) => lwr_error_rate(suite),
        (Family::Lwe, _) => lwe_error_rate(suite),
        (Family::Hybrid, _) => hybrid_error_rate(suite),
        (Family::Rlwe, Reconciliation::E8 { g }) => {
            let z = zarzar_error_rate(suite.noise.variance(), suite.q, g, suite.n as u32)?;
            Ok(ErrorRate { per: z.tail, overall: z.overall })
        }
        (Family::Rlwe, _) => rlwe_error_rate(suite),
    }
}
