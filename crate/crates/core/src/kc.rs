//! Scalar key consensus (KC) and asymmetric key consensus (AKC).

use rand::Rng;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KcError {
    #[error("modulus must be positive")]
    ZeroModulus,
    #[error("malformed parameters: {0}")]
    Malformed(String),
    #[error("{name} = {value} out of range [0, {bound})")]
    OutOfRange {
        name: &'static str,
        value: i64,
        bound: u64,
    },
    #[error("{0} is not usable here")]
    WrongFamily(KcVariant),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KcVariant {
    OkcnGeneric,
    OkcnPower2,
    OkcnSimple,
    AkcnGeneric,
    AkcnPower2,
    FrodoRec,
}

impl KcVariant {
    pub const ALL: [KcVariant; 6] = [
        KcVariant::OkcnGeneric,
        KcVariant::OkcnPower2,
        KcVariant::OkcnSimple,
        KcVariant::AkcnGeneric,
        KcVariant::AkcnPower2,
        KcVariant::FrodoRec,
    ];

    /// True for the asymmetric family, where the caller picks k1.
    pub fn is_akc(self) -> bool {
        matches!(self, KcVariant::AkcnGeneric | KcVariant::AkcnPower2)
    }

    pub fn name(self) -> &'static str {
        match self {
            KcVariant::OkcnGeneric => "okcn-generic",
            KcVariant::OkcnPower2 => "okcn-power2",
            KcVariant::OkcnSimple => "okcn-simple",
            KcVariant::AkcnGeneric => "akcn-generic",
            KcVariant::AkcnPower2 => "akcn-power2",
            KcVariant::FrodoRec => "frodo",
        }
    }
}

impl fmt::Display for KcVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Derived values of the generic OKCN variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenericAux {
    pub q_prime: u64,
    pub alpha: u64,
    pub beta: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KcParams {
    pub q: u32,
    pub m: u32,
    pub g: u32,
    pub d: u32,
    aux: GenericAux,
}

impl KcParams {
    pub fn new(q: u32, m: u32, g: u32, d: u32) -> Result<Self, KcError> {
        if q == 0 {
            return Err(KcError::ZeroModulus);
        }
        if m < 2 || m > q {
            return Err(KcError::Malformed(format!("need 2 <= m <= q, got m = {m}, q = {q}")));
        }
        if g < 2 || g > q {
            return Err(KcError::Malformed(format!("need 2 <= g <= q, got g = {g}, q = {q}")));
        }
        if d > q / 2 {
            return Err(KcError::Malformed(format!("need d <= q/2, got d = {d}, q = {q}")));
        }
        let q_prime = lcm(q as u64, m as u64);
        let aux = GenericAux {
            q_prime,
            alpha: q_prime / q as u64,
            beta: q_prime / m as u64,
        };
        Ok(KcParams { q, m, g, d, aux })
    }

    pub fn aux(&self) -> GenericAux {
        self.aux
    }

    /// Same (q, m, g) with a different distance bound.
    pub fn with_d(&self, d: u32) -> Result<Self, KcError> {
        KcParams::new(self.q, self.m, self.g, d)
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn log2_exact(x: u32) -> Option<u32> {
    x.is_power_of_two().then(|| x.trailing_zeros())
}

/// ⌊a/b⌉ with round-half-up, for b > 0.
#[inline]
pub fn round_div(a: i64, b: i64) -> i64 {
    debug_assert!(b > 0);
    (2 * a + b).div_euclid(2 * b)
}

/// |x|_t = min(x mod t, t - x mod t).
pub fn dist_mod(x: i64, t: u64) -> Result<u64, KcError> {
    if t == 0 {
        return Err(KcError::ZeroModulus);
    }
    let r = x.rem_euclid(t as i64) as u64;
    Ok(r.min(t - r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConOutput {
    pub k1: u32,
    pub v: u32,
}

/// The inequality that failed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub condition: &'static str,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "violates {}: {}", self.condition, self.detail)
    }
}

/// Diagnostics for an accepted parameter set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Validation {
    pub bound: &'static str,
    pub bound_holds: bool,
    pub bound_saturated: bool,
}

fn violation(condition: &'static str, detail: String) -> Violation {
    Violation { condition, detail }
}

/// Structural requirements of the variant (powers of two, q = m·g, ...), without the distance condition.
pub fn check_shape(variant: KcVariant, p: &KcParams) -> Result<(), Violation> {
    let pow2 = |name: &'static str, x: u32| {
        log2_exact(x)
            .map(|_| ())
            .ok_or_else(|| violation("power of two", format!("{name} = {x}")))
    };
    match variant {
        KcVariant::OkcnGeneric | KcVariant::AkcnGeneric => Ok(()),
        KcVariant::OkcnPower2 => {
            pow2("q", p.q)?;
            pow2("m", p.m)?;
            pow2("g", p.g)?;
            if (p.m as u64) * (p.g as u64) > p.q as u64 {
                return Err(violation("g | q/m", format!("m·g = {} > q", p.m * p.g)));
            }
            Ok(())
        }
        KcVariant::OkcnSimple => {
            pow2("q", p.q)?;
            pow2("m", p.m)?;
            pow2("g", p.g)?;
            if (p.m as u64) * (p.g as u64) != p.q as u64 {
                return Err(violation("q = m·g", format!("{}·{} != {}", p.m, p.g, p.q)));
            }
            Ok(())
        }
        KcVariant::AkcnPower2 => {
            pow2("q", p.q)?;
            pow2("m", p.m)?;
            if p.g != p.q {
                return Err(violation("g = q", format!("g = {}, q = {}", p.g, p.q)));
            }
            Ok(())
        }
        KcVariant::FrodoRec => {
            pow2("q", p.q)?;
            pow2("m", p.m)?;
            if p.g != 2 {
                return Err(violation("g = 2", format!("g = {}", p.g)));
            }
            if (p.m as u64) * 4 > p.q as u64 {
                return Err(violation("log m < log q - 1", format!("m = {}, q = {}", p.m, p.q)));
            }
            Ok(())
        }
    }
}

/// Checks the variant's correctness condition and reports the generic upper bound.
pub fn validate_params(variant: KcVariant, p: &KcParams) -> Result<Validation, Violation> {
    check_shape(variant, p)?;
    let (q, m, g, d) = (p.q as u128, p.m as u128, p.g as u128, p.d as u128);
    let ok = match variant {
        KcVariant::OkcnGeneric => ((2 * d + 1) * m * g < q * (g - 1))
            .then_some(())
            .ok_or(("(2d+1)m < q(1-1/g)", format!("{}·{m}·{g} >= {q}·{}", 2 * d + 1, g - 1))),
        KcVariant::OkcnPower2 => (2 * m * d * g < q * (g - 1))
            .then_some(())
            .ok_or(("2md < q(1-1/g)", format!("2·{m}·{d}·{g} >= {q}·{}", g - 1))),
        KcVariant::OkcnSimple | KcVariant::AkcnPower2 => (2 * m * d < q)
            .then_some(())
            .ok_or(("2md < q", format!("2·{m}·{d} = {} >= {q}", 2 * m * d))),
        KcVariant::AkcnGeneric => (g > m && (2 * d + 1) * m * g < q * (g - m))
            .then_some(())
            .ok_or(("(2d+1)m < q(1-m/g)", format!("{}·{m}·{g} >= {q}·({g}-{m})", 2 * d + 1))),
        KcVariant::FrodoRec => (4 * m * d < q)
            .then_some(())
            .ok_or(("4md < q", format!("4·{m}·{d} = {} >= {q}", 4 * m * d))),
    };
    ok.map_err(|(c, detail)| violation(c, detail))?;
    Ok(upper_bound(variant, p))
}

/// The efficiency upper bound that any correct and secure KC (or AKC) must satisfy.
pub fn upper_bound(variant: KcVariant, p: &KcParams) -> Validation {
    let (q, m, g, d) = (p.q as i128, p.m as i128, p.g as i128, p.d as i128);
    let (bound, lhs, rhs) = if variant.is_akc() {
        ("2md <= q(1-m/g)", 2 * m * d * g, q * (g - m))
    } else {
        ("2md <= q(1-1/g)", 2 * m * d * g, q * (g - 1))
    };
    Validation {
        bound,
        bound_holds: lhs <= rhs,
        bound_saturated: lhs == rhs,
    }
}

fn check(name: &'static str, value: i64, bound: u32) -> Result<u32, KcError> {
    if value < 0 || value >= bound as i64 {
        Err(KcError::OutOfRange {
            name,
            value,
            bound: bound as u64,
        })
    } else {
        Ok(value as u32)
    }
}

/// Inclusive range of the generic variant's Con noise e.
pub fn okcn_noise_range(p: &KcParams) -> (i64, i64) {
    let a = p.aux.alpha as i64;
    (-((a - 1) / 2), a / 2)
}

/// KC Con with explicit randomness; only the generic OKCN variant consumes `e`.
pub fn kc_con_with(variant: KcVariant, sigma1: i64, p: &KcParams, e: i64) -> Result<ConOutput, KcError> {
    let s = check("sigma1", sigma1, p.q)? as u64;
    let out = match variant {
        KcVariant::OkcnGeneric => {
            let GenericAux { q_prime, alpha, beta } = p.aux;
            let mut sa = alpha as i64 * s as i64 + e;
            sa += ((sa >> 63) & 1) * q_prime as i64;
            let sa = sa as u64;
            let (k1, vp) = (sa / beta, sa % beta);
            ConOutput {
                k1: k1 as u32,
                v: (vp * p.g as u64 / beta) as u32,
            }
        }
        KcVariant::OkcnPower2 => {
            let beta_bits = p.q.trailing_zeros() - p.m.trailing_zeros();
            let gamma_bits = beta_bits - p.g.trailing_zeros();
            ConOutput {
                k1: (s >> beta_bits) as u32,
                v: ((s & ((1 << beta_bits) - 1)) >> gamma_bits) as u32,
            }
        }
        KcVariant::OkcnSimple => {
            let gb = p.g.trailing_zeros();
            ConOutput {
                k1: (s >> gb) as u32,
                v: (s & (p.g as u64 - 1)) as u32,
            }
        }
        KcVariant::FrodoRec => {
            let bb = p.q.trailing_zeros() - p.m.trailing_zeros();
            ConOutput {
                k1: (((s + (1 << (bb - 1))) >> bb) & (p.m as u64 - 1)) as u32,
                v: ((s >> (bb - 1)) & 1) as u32,
            }
        }
        v => return Err(KcError::WrongFamily(v)),
    };
    Ok(out)
}

pub fn kc_con<R: Rng + ?Sized>(
    variant: KcVariant,
    sigma1: i64,
    p: &KcParams,
    rng: &mut R,
) -> Result<ConOutput, KcError> {
    let e = if variant == KcVariant::OkcnGeneric && p.aux.alpha > 1 {
        let (lo, hi) = okcn_noise_range(p);
        rng.gen_range(lo..=hi)
    } else {
        0
    };
    kc_con_with(variant, sigma1, p, e)
}

pub fn kc_rec(variant: KcVariant, sigma2: i64, v: i64, p: &KcParams) -> Result<u32, KcError> {
    let s = check("sigma2", sigma2, p.q)? as i64;
    let v = check("v", v, p.g)? as i64;
    let (m, g) = (p.m as i64, p.g as i64);
    let k = match variant {
        KcVariant::OkcnGeneric => {
            let (a, b) = (p.aux.alpha as i64, p.aux.beta as i64);
            round_div(2 * g * a * s - b * (2 * v + 1), 2 * g * b)
        }
        KcVariant::OkcnPower2 => {
            let b = (p.q / p.m) as i64;
            round_div(2 * g * s - b * (2 * v + 1), 2 * g * b)
        }
        KcVariant::OkcnSimple => round_div(s - v, g),
        KcVariant::FrodoRec => {
            let bb = p.q.trailing_zeros() - p.m.trailing_zeros();
            let h = 1i64 << (bb - 1);
            let x = if (s >> (bb - 1)) & 1 == v {
                s
            } else {
                let start = s & !(h - 1);
                let (lo, hi) = (start - 1, start + h);
                if s - lo <= hi - s {
                    lo
                } else {
                    hi
                }
            };
            (x.rem_euclid(p.q as i64) + h) >> bb
        }
        v => return Err(KcError::WrongFamily(v)),
    };
    Ok(k.rem_euclid(m) as u32)
}

pub fn akc_con(variant: KcVariant, sigma1: i64, k1: i64, p: &KcParams) -> Result<u32, KcError> {
    let s = check("sigma1", sigma1, p.q)? as i64;
    let k = check("k1", k1, p.m)? as i64;
    let (q, m, g) = (p.q as i64, p.m as i64, p.g as i64);
    let v = match variant {
        KcVariant::AkcnGeneric => round_div(g * (s + round_div(k * q, m)), q).rem_euclid(g),
        KcVariant::AkcnPower2 => (s + k * (q / m)) & (q - 1),
        v => return Err(KcError::WrongFamily(v)),
    };
    Ok(v as u32)
}

pub fn akc_rec(variant: KcVariant, sigma2: i64, v: i64, p: &KcParams) -> Result<u32, KcError> {
    let s = check("sigma2", sigma2, p.q)? as i64;
    let v = check("v", v, p.g)? as i64;
    let (q, m, g) = (p.q as i64, p.m as i64, p.g as i64);
    let k = match variant {
        KcVariant::AkcnGeneric => round_div(m * (v * q - s * g), g * q),
        KcVariant::AkcnPower2 => round_div(v - s, q / m),
        v => return Err(KcError::WrongFamily(v)),
    };
    Ok(k.rem_euclid(m) as u32)
}
