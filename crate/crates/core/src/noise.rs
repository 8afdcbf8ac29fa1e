//! Discrete noise: sampling tables, Ψ16, B^{a,b}, rounded Gaussians, and Rényi divergence.

use num_bigint::BigUint;
use rand::Rng;
use statrs::function::erf::erfc;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NoiseError {
    #[error("B^(a,b) needs even a, got {0}")]
    OddA(u32),
    #[error("support of P is not contained in support of Q at {0}")]
    Support(i64),
    #[error("Rényi order must exceed 1, got {0}")]
    Order(f64),
    #[error("invalid distribution parameter: {0}")]
    Param(String),
    #[error("pmf is not normalized (mass {0})")]
    NotNormalized(f64),
}

/// Probabilities below this are dropped.
pub const FLUSH: f64 = 6.223015277861142e-61; // 2^-200

/// Symmetric table: counts[i] is the number of 2^bits outcomes mapped to +i (and to -i).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseTable {
    pub name: &'static str,
    pub bits: u32,
    pub counts: &'static [u32],
    /// Variance of the Gaussian the table approximates.
    pub var: f64,
    pub renyi_order: f64,
    pub divergence: f64,
}

pub const D_R: NoiseTable = NoiseTable {
    name: "D_R",
    bits: 16,
    counts: &[19572, 14792, 6383, 1570, 220, 17],
    var: 1.70,
    renyi_order: 500.0,
    divergence: 1.0000396,
};
pub const D_P: NoiseTable = NoiseTable {
    name: "D_P",
    bits: 16,
    counts: &[21456, 15326, 5580, 1033, 97, 4],
    var: 1.40,
    renyi_order: 500.0,
    divergence: 1.0000277,
};
pub const D1: NoiseTable = NoiseTable {
    name: "D1",
    bits: 8,
    counts: &[94, 62, 17, 2],
    var: 1.10,
    renyi_order: 15.0,
    divergence: 1.0015832,
};
pub const D2: NoiseTable = NoiseTable {
    name: "D2",
    bits: 12,
    counts: &[1646, 992, 216, 17],
    var: 0.90,
    renyi_order: 75.0,
    divergence: 1.0003146,
};
pub const D3: NoiseTable = NoiseTable {
    name: "D3",
    bits: 12,
    counts: &[1238, 929, 393, 94, 12, 1],
    var: 1.66,
    renyi_order: 30.0,
    divergence: 1.0002034,
};
pub const D4: NoiseTable = NoiseTable {
    name: "D4",
    bits: 16,
    counts: &[19794, 14865, 6292, 1499, 200, 15],
    var: 1.66,
    renyi_order: 500.0,
    divergence: 1.0000274,
};
pub const D5: NoiseTable = NoiseTable {
    name: "D5",
    bits: 16,
    counts: &[22218, 15490, 5242, 858, 67, 2],
    var: 1.30,
    renyi_order: 500.0,
    divergence: 1.0000337,
};
pub const DBAR1: NoiseTable = NoiseTable {
    name: "Dbar1",
    bits: 8,
    counts: &[88, 61, 20, 3],
    var: 1.25,
    renyi_order: 25.0,
    divergence: 1.0021674,
};
pub const DBAR2: NoiseTable = NoiseTable {
    name: "Dbar2",
    bits: 12,
    counts: &[1570, 990, 248, 24, 1],
    var: 1.00,
    renyi_order: 40.0,
    divergence: 1.0001925,
};
pub const DBAR3: NoiseTable = NoiseTable {
    name: "Dbar3",
    bits: 12,
    counts: &[1206, 919, 406, 104, 15, 1],
    var: 1.75,
    renyi_order: 100.0,
    divergence: 1.0003011,
};
pub const DBAR4: NoiseTable = NoiseTable {
    name: "Dbar4",
    bits: 16,
    counts: &[19304, 14700, 6490, 1659, 245, 21, 1],
    var: 1.75,
    renyi_order: 500.0,
    divergence: 1.0000146,
};

pub const ALL_TABLES: [&NoiseTable; 11] = [
    &D_R, &D_P, &D1, &D2, &D3, &D4, &D5, &DBAR1, &DBAR2, &DBAR3, &DBAR4,
];

pub fn table_by_name(name: &str) -> Option<&'static NoiseTable> {
    ALL_TABLES
        .iter()
        .copied()
        .find(|t| t.name.eq_ignore_ascii_case(name))
}

impl NoiseTable {
    /// count(0) + 2·Σ count(v>0).
    pub fn total(&self) -> u64 {
        self.counts[0] as u64 + 2 * self.counts[1..].iter().map(|&c| c as u64).sum::<u64>()
    }

    pub fn checksum_ok(&self) -> bool {
        self.total() == 1u64 << self.bits
    }

    pub fn max_abs(&self) -> i64 {
        self.counts.len() as i64 - 1
    }

    pub fn count(&self, x: i64) -> u32 {
        self.counts.get(x.unsigned_abs() as usize).copied().unwrap_or(0)
    }

    pub fn pmf(&self) -> Pmf {
        let den = (1u64 << self.bits) as f64;
        let k = self.max_abs();
        Pmf::from_dense(-k, (-k..=k).map(|x| self.count(x) as f64 / den).collect())
    }

    pub fn exact_pmf(&self) -> ExactPmf {
        let k = self.max_abs();
        ExactPmf {
            counts: (-k..=k).map(|x| (x, BigUint::from(self.count(x)))).collect(),
            den_bits: self.bits,
        }
    }

    /// Maps `bits` uniform bits to a value by inverse-CDF lookup over -k..=k.
    pub fn sample_bits(&self, r: u32) -> i64 {
        let r = (r & ((1u32 << self.bits) - 1)) as u64;
        let k = self.max_abs();
        let mut acc = 0u64;
        let mut idx = 0i64;
        // Scan the whole table so the work does not depend on r.
        for x in -k..k {
            acc += self.count(x) as u64;
            idx += (r >= acc) as i64;
        }
        idx - k
    }

    /// Draws one 32-bit word and uses its low `bits` bits.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        self.sample_bits(rng.next_u32())
    }
}

/// Ψ_k: Σ b_i − Σ b′_i over k fair bit pairs.
pub fn sample_centered_binomial<R: Rng + ?Sized>(k: u32, rng: &mut R) -> i64 {
    assert!(k <= 32, "at most 32 bit pairs");
    let mask = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
    let a = rng.next_u32() & mask;
    let b = rng.next_u32() & mask;
    a.count_ones() as i64 - b.count_ones() as i64
}

/// B^{a,b}: Σ_a bits + 2 Σ_b bits − (a/2 + b).
pub fn sample_bab<R: Rng + ?Sized>(a: u32, b: u32, rng: &mut R) -> Result<i64, NoiseError> {
    if a % 2 != 0 {
        return Err(NoiseError::OddA(a));
    }
    Ok(bab_from_bits(a, b, &mut || rng.gen::<bool>()))
}

pub fn bab_from_bits(a: u32, b: u32, bit: &mut dyn FnMut() -> bool) -> i64 {
    let s1: i64 = (0..a).map(|_| bit() as i64).sum();
    let s2: i64 = (0..b).map(|_| bit() as i64).sum();
    s1 + 2 * s2 - (a / 2 + b) as i64
}

fn binomial_pmf(k: u32) -> Pmf {
    let mut row = vec![1.0f64];
    for _ in 0..k {
        let mut next = vec![0.0; row.len() + 1];
        for (i, &v) in row.iter().enumerate() {
            next[i] += v / 2.0;
            next[i + 1] += v / 2.0;
        }
        row = next;
    }
    Pmf::from_dense(0, row)
}

pub fn centered_binomial_pmf(k: u32) -> Pmf {
    let b = binomial_pmf(k);
    b.add(&b.neg())
}

pub fn bab_pmf(a: u32, b: u32) -> Result<Pmf, NoiseError> {
    if a % 2 != 0 {
        return Err(NoiseError::OddA(a));
    }
    Ok(binomial_pmf(a)
        .add(&binomial_pmf(b).scale(2))
        .shift(-((a / 2 + b) as i64)))
}

fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

/// Mass of the continuous Gaussian N(0, σ²) rounded to the nearest integer,
/// renormalized over [−cutoff, cutoff].
pub fn rounded_gaussian_pmf(sigma: f64, cutoff: i64) -> Result<Pmf, NoiseError> {
    if !(sigma > 0.0) || cutoff < 0 {
        return Err(NoiseError::Param(format!("sigma = {sigma}, cutoff = {cutoff}")));
    }
    let mass = |x: i64| {
        let (lo, hi) = ((x as f64 - 0.5) / sigma, (x as f64 + 0.5) / sigma);
        // Use the upper tail on the positive side to keep relative precision.
        if x >= 0 {
            phi(-lo) - phi(-hi)
        } else {
            phi(hi) - phi(lo)
        }
    };
    let p: Vec<f64> = (-cutoff..=cutoff).map(mass).collect();
    let total: f64 = p.iter().sum();
    Ok(Pmf::from_dense(-cutoff, p.into_iter().map(|v| v / total).collect()))
}

/// Default reference cutoff of 12σ.
pub fn gaussian_reference(var: f64) -> Pmf {
    let s = var.sqrt();
    rounded_gaussian_pmf(s, (12.0 * s).ceil() as i64).expect("positive variance")
}

/// R_a(P‖Q) = (Σ P^a / Q^{a−1})^{1/(a−1)}, evaluated in the log domain.
pub fn renyi_divergence(p: &Pmf, q: &Pmf, a: f64) -> Result<f64, NoiseError> {
    if !(a > 1.0) {
        return Err(NoiseError::Order(a));
    }
    let mut terms = Vec::new();
    for (x, px) in p.iter() {
        if px == 0.0 {
            continue;
        }
        let qx = q.prob(x);
        if qx <= 0.0 {
            return Err(NoiseError::Support(x));
        }
        terms.push(a * px.ln() - (a - 1.0) * qx.ln());
    }
    let mx = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let lse = mx + terms.iter().map(|t| (t - mx).exp()).sum::<f64>().ln();
    Ok((lse / (a - 1.0)).exp())
}

/// Dense probability mass function over consecutive integers starting at `min`.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    min: i64,
    p: Vec<f64>,
}

impl Pmf {
    pub fn from_dense(min: i64, p: Vec<f64>) -> Self {
        let mut out = Pmf { min, p };
        out.trim();
        out
    }

    pub fn from_pairs<I: IntoIterator<Item = (i64, f64)>>(pairs: I) -> Self {
        let map: BTreeMap<i64, f64> = pairs.into_iter().fold(BTreeMap::new(), |mut m, (x, p)| {
            *m.entry(x).or_insert(0.0) += p;
            m
        });
        let (Some((&lo, _)), Some((&hi, _))) = (map.first_key_value(), map.last_key_value()) else {
            return Pmf { min: 0, p: vec![] };
        };
        let mut p = vec![0.0; (hi - lo + 1) as usize];
        for (x, v) in map {
            p[(x - lo) as usize] += v;
        }
        Pmf::from_dense(lo, p)
    }

    pub fn point(x: i64) -> Self {
        Pmf { min: x, p: vec![1.0] }
    }

    /// Uniform over lo..=hi.
    pub fn uniform(lo: i64, hi: i64) -> Self {
        let n = (hi - lo + 1) as usize;
        Pmf { min: lo, p: vec![1.0 / n as f64; n] }
    }

    fn trim(&mut self) {
        let first = self.p.iter().position(|&v| v > FLUSH);
        let Some(first) = first else {
            self.p.clear();
            return;
        };
        let last = self.p.iter().rposition(|&v| v > FLUSH).unwrap();
        if first > 0 || last + 1 < self.p.len() {
            self.p = self.p[first..=last].to_vec();
            self.min += first as i64;
        }
        for v in &mut self.p {
            if *v <= FLUSH {
                *v = 0.0;
            }
        }
    }

    pub fn min(&self) -> i64 {
        self.min
    }

    pub fn max(&self) -> i64 {
        self.min + self.p.len() as i64 - 1
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    pub fn prob(&self, x: i64) -> f64 {
        if x < self.min {
            return 0.0;
        }
        self.p.get((x - self.min) as usize).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.p.iter().enumerate().map(move |(i, &v)| (self.min + i as i64, v))
    }

    pub fn mass(&self) -> f64 {
        self.p.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(x, p)| x as f64 * p).sum::<f64>() / self.mass()
    }

    pub fn var(&self) -> f64 {
        let m = self.mean();
        self.iter().map(|(x, p)| (x as f64 - m).powi(2) * p).sum::<f64>() / self.mass()
    }

    pub fn check_normalized(&self, tol: f64) -> Result<(), NoiseError> {
        let m = self.mass();
        if (m - 1.0).abs() > tol {
            Err(NoiseError::NotNormalized(m))
        } else {
            Ok(())
        }
    }

    /// Distribution of X + Y for independent X, Y.
    pub fn add(&self, other: &Pmf) -> Pmf {
        if self.p.is_empty() || other.p.is_empty() {
            return Pmf { min: 0, p: vec![] };
        }
        let mut out = vec![0.0; self.p.len() + other.p.len() - 1];
        for (i, &a) in self.p.iter().enumerate() {
            if a == 0.0 {
                continue;
            }
            for (j, &b) in other.p.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Pmf::from_dense(self.min + other.min, out)
    }

    /// Distribution of the sum of n independent copies, by binary doubling.
    pub fn sum_n(&self, n: u64) -> Pmf {
        let mut acc = Pmf::point(0);
        let mut base = self.clone();
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.add(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.add(&base);
            }
        }
        acc
    }

    /// Distribution of X·Y for independent X, Y.
    pub fn mul(&self, other: &Pmf) -> Pmf {
        Pmf::from_pairs(
            self.iter()
                .flat_map(|(x, a)| other.iter().map(move |(y, b)| (x * y, a * b))),
        )
    }

    pub fn neg(&self) -> Pmf {
        let mut p = self.p.clone();
        p.reverse();
        Pmf { min: -self.max(), p }
    }

    pub fn shift(&self, c: i64) -> Pmf {
        Pmf { min: self.min + c, p: self.p.clone() }
    }

    /// Distribution of c·X.
    pub fn scale(&self, c: i64) -> Pmf {
        Pmf::from_pairs(self.iter().map(|(x, p)| (c * x, p)))
    }

    pub fn map<F: Fn(i64) -> i64>(&self, f: F) -> Pmf {
        Pmf::from_pairs(self.iter().map(|(x, p)| (f(x), p)))
    }

    /// Pr[pred(X)].
    pub fn prob_where<F: Fn(i64) -> bool>(&self, pred: F) -> f64 {
        self.iter().filter(|&(x, _)| pred(x)).map(|(_, p)| p).sum()
    }
}

/// Exact counts over a power-of-two denominator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactPmf {
    pub counts: BTreeMap<i64, BigUint>,
    pub den_bits: u32,
}

impl ExactPmf {
    pub fn point(x: i64) -> Self {
        ExactPmf {
            counts: [(x, BigUint::from(1u8))].into_iter().collect(),
            den_bits: 0,
        }
    }

    pub fn total(&self) -> BigUint {
        self.counts.values().sum()
    }

    pub fn is_normalized(&self) -> bool {
        self.total() == BigUint::from(1u8) << self.den_bits
    }

    pub fn add(&self, other: &ExactPmf) -> ExactPmf {
        let mut counts = BTreeMap::new();
        for (x, a) in &self.counts {
            for (y, b) in &other.counts {
                *counts.entry(x + y).or_insert_with(BigUint::default) += a * b;
            }
        }
        ExactPmf {
            counts,
            den_bits: self.den_bits + other.den_bits,
        }
    }

    pub fn mul(&self, other: &ExactPmf) -> ExactPmf {
        let mut counts = BTreeMap::new();
        for (x, a) in &self.counts {
            for (y, b) in &other.counts {
                *counts.entry(x * y).or_insert_with(BigUint::default) += a * b;
            }
        }
        ExactPmf {
            counts,
            den_bits: self.den_bits + other.den_bits,
        }
    }

    pub fn to_pmf(&self) -> Pmf {
        let scale = 2f64.powi(-(self.den_bits as i32));
        Pmf::from_pairs(self.counts.iter().map(|(&x, c)| {
            let v: f64 = c.to_string().parse().unwrap_or(f64::INFINITY);
            (x, v * scale)
        }))
    }
}

/// A noise source usable by the protocols and by the error analysis.
#[derive(Debug, Clone, PartialEq)]
pub enum NoiseDist {
    Table(&'static NoiseTable),
    CenteredBinomial(u32),
    Bab(u32, u32),
    /// Rounded continuous Gaussian with the given variance.
    Gaussian(f64),
    /// Uniform over {0, 1}.
    Binary,
    Zero,
}

impl NoiseDist {
    pub fn name(&self) -> String {
        match self {
            NoiseDist::Table(t) => t.name.to_string(),
            NoiseDist::CenteredBinomial(k) => format!("Psi{k}"),
            NoiseDist::Bab(a, b) => format!("B({a},{b})"),
            NoiseDist::Gaussian(v) => format!("Gauss(var={v})"),
            NoiseDist::Binary => "U{0,1}".into(),
            NoiseDist::Zero => "zero".into(),
        }
    }

    pub fn pmf(&self) -> Pmf {
        match self {
            NoiseDist::Table(t) => t.pmf(),
            NoiseDist::CenteredBinomial(k) => centered_binomial_pmf(*k),
            NoiseDist::Bab(a, b) => bab_pmf(*a, *b).expect("validated at construction"),
            NoiseDist::Gaussian(v) => gaussian_reference(*v),
            NoiseDist::Binary => Pmf::uniform(0, 1),
            NoiseDist::Zero => Pmf::point(0),
        }
    }

    pub fn variance(&self) -> f64 {
        match self {
            NoiseDist::Table(t) => t.pmf().var(),
            NoiseDist::CenteredBinomial(k) => *k as f64 / 2.0,
            NoiseDist::Bab(a, b) => *a as f64 / 4.0 + *b as f64,
            NoiseDist::Gaussian(v) => *v,
            NoiseDist::Binary => 0.25,
            NoiseDist::Zero => 0.0,
        }
    }

    /// Builds a reusable sampler.
    pub fn sampler(&self) -> Sampler {
        let cdf = match self {
            NoiseDist::Gaussian(_) => {
                let pmf = self.pmf();
                let mut acc = 0.0;
                let cdf = pmf
                    .iter()
                    .map(|(x, p)| {
                        acc += p;
                        (x, acc)
                    })
                    .collect();
                Some(cdf)
            }
            _ => None,
        };
        Sampler { dist: self.clone(), cdf }
    }
}

#[derive(Debug, Clone)]
pub struct Sampler {
    dist: NoiseDist,
    cdf: Option<Vec<(i64, f64)>>,
}

impl Sampler {
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> i64 {
        match &self.dist {
            NoiseDist::Table(t) => t.sample(rng),
            NoiseDist::CenteredBinomial(k) => sample_centered_binomial(*k, rng),
            NoiseDist::Bab(a, b) => sample_bab(*a, *b, rng).expect("even a"),
            NoiseDist::Gaussian(_) => {
                let cdf = self.cdf.as_ref().expect("built for Gaussian");
                let u: f64 = rng.gen();
                cdf.iter().find(|&&(_, c)| u < c).unwrap_or(cdf.last().unwrap()).0
            }
            NoiseDist::Binary => (rng.next_u32() & 1) as i64,
            NoiseDist::Zero => 0,
        }
    }
}
