//! Core-SVP cost of the primal (uSVP) and dual (short dual vector) attacks.

use kcx_core::noise::NoiseDist;
use kcx_protocols::{Attack, Family, Instance, ProtocolSuite};
use std::f64::consts::{E, PI};

/// Classical, quantum and plausible sieving exponents.
pub const CORE_SVP: [f64; 3] = [0.292, 0.265, 0.2075];
const MIN_B: u32 = 50;
const MIN_M: u32 = 50;

/// Root Hermite factor reached by BKZ-b.
pub fn delta0(b: u32) -> f64 {
    let b = b as f64;
    ((PI * b).powf(1.0 / b) * b / (2.0 * PI * E)).powf(1.0 / (2.0 * (b - 1.0)))
}

/// Accounting conventions for turning a block size into a cost.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostModel {
    /// Add log₂ b (number of SVP calls per tour).
    pub log_b: bool,
    /// Distinguishing advantage is factor · exp(−2π²τ²).
    pub eps_factor: f64,
}

impl CostModel {
    /// Matrix (plain LWE/LWR) suites.
    pub const MATRIX: CostModel = CostModel { log_b: true, eps_factor: 4.0 };
    /// Ring suites: bare core-SVP, unit advantage factor.
    pub const RING: CostModel = CostModel { log_b: false, eps_factor: 1.0 };

    fn base(&self, c: f64, b: u32) -> f64 {
        c * b as f64 + if self.log_b { (b as f64).log2() } else { 0.0 }
    }
}

/// An LWE instance as seen by the attacker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LweInstance {
    pub n: u32,
    pub q: f64,
    pub var_s: f64,
    pub var_e: f64,
    pub max_samples: u32,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AttackEstimate {
    pub attack: Attack,
    /// Samples used.
    pub m: u32,
    pub b: u32,
    /// log₂ of the number of repetitions (dual only).
    pub log2_r: f64,
    /// Unrounded C/Q/P.
    pub raw: [f64; 3],
    pub cost: [u32; 3],
}

impl AttackEstimate {
    fn new(attack: Attack, m: u32, b: u32, log2_r: f64, model: CostModel) -> Self {
        let raw = CORE_SVP.map(|c| model.base(c, b) + log2_r);
        AttackEstimate { attack, m, b, log2_r, raw, cost: raw.map(|x| x.floor() as u32) }
    }

    /// Cost after paying for N samples drawn from a distribution at Rényi
    /// divergence R_a from the Gaussian.
    pub fn post_reduction(&self, samples: u64, order: f64, divergence: f64) -> [u32; 3] {
        let loss = samples as f64 * divergence.log2();
        self.raw.map(|s| ((s - loss) * (order - 1.0) / order).floor().max(0.0) as u32)
    }
}

/// Smallest b for which the uSVP success condition holds with m samples.
fn primal_b(inst: &LweInstance, m: u32) -> Option<u32> {
    let n = inst.n as f64;
    let w = (inst.var_e / inst.var_s).sqrt();
    let d = m + inst.n + 1;
    let df = d as f64;
    let mf = m as f64;
    let norm = n * inst.var_s + mf * inst.var_e / (w * w) + 1.0;
    let vol = (mf / df) * (inst.q / w).ln();
    (MIN_B..d).find(|&b| {
        let bf = b as f64;
        let lhs = (bf / df * norm).sqrt().ln();
        let rhs = (2.0 * bf - df - 1.0) * delta0(b).ln() + vol;
        lhs <= rhs
    })
}

pub fn primal(inst: &LweInstance, model: CostModel) -> Option<AttackEstimate> {
    (MIN_M..=inst.max_samples)
        .filter_map(|m| primal_b(inst, m).map(|b| (m, b)))
        .min_by_key(|&(_, b)| b)
        .map(|(m, b)| AttackEstimate::new(Attack::Primal, m, b, 0.0, model))
}

/// log₂ R for the dual attack with m samples and block size b.
fn dual_log2_r(inst: &LweInstance, m: u32, b: u32, model: CostModel) -> Option<f64> {
    let (n, mf) = (inst.n as f64, m as f64);
    let c = (inst.var_e / inst.var_s).sqrt();
    let len = delta0(b).powf(mf + n) * (inst.q / c).powf(n / (mf + n));
    let x = (mf / (mf + n)).sqrt() * len;
    let y = (n / (mf + n)).sqrt() * len;
    let tau = (c * c * y * y * inst.var_s + x * x * inst.var_e).sqrt() / inst.q;
    let log2_eps = model.eps_factor.log2() - 2.0 * PI * PI * tau * tau / 2f64.ln();
    if !log2_eps.is_finite() {
        return None;
    }
    Some((-CORE_SVP[2] * b as f64 - 2.0 * log2_eps).max(0.0))
}

pub fn dual(inst: &LweInstance, model: CostModel) -> Option<AttackEstimate> {
    let mut best: Option<AttackEstimate> = None;
    for m in MIN_M..=inst.max_samples {
        for b in MIN_B..m + inst.n {
            let Some(lr) = dual_log2_r(inst, m, b, model) else { continue };
            let est = AttackEstimate::new(Attack::Dual, m, b, lr, model);
            if best.map_or(true, |e| est.raw[0] < e.raw[0]) {
                best = Some(est);
            }
        }
    }
    best
}

/// Primal and dual estimates.
pub fn security_estimate(inst: &LweInstance, model: CostModel) -> (Option<AttackEstimate>, Option<AttackEstimate>) {
    (primal(inst, model), dual(inst, model))
}

/// Nominal variance: the table's declared value where there is one.
fn nominal_var(noise: &NoiseDist) -> f64 {
    match noise {
        NoiseDist::Table(t) => t.var,
        other => other.variance(),
    }
}

/// Rounding noise variance (q/p)²/12, the continuous-uniform value. The
/// discrete [−r/2, r/2 − 1] has (r² − 1)/12; the published LWR rows use r²/12.
pub fn rounding_var(q: u32, p: u32) -> f64 {
    if p >= q {
        return 0.0;
    }
    let r = q as f64 / p as f64;
    r * r / 12.0
}

/// The hardness instances behind a suite.
pub fn suite_instances(suite: &ProtocolSuite) -> Vec<(Instance, LweInstance, CostModel)> {
    let var = nominal_var(&suite.noise);
    let q = suite.q as f64;
    let (n, na, nb) = (suite.n as u32, suite.n as u32, suite.n_b as u32);
    let (la, lb) = (suite.l_a as u32, suite.l_b as u32);
    let lwe = |n, max_samples| LweInstance { n, q, var_s: var, var_e: var, max_samples };
    let lwr = |n, max_samples| LweInstance {
        n,
        q,
        var_s: var,
        var_e: rounding_var(suite.q, suite.p),
        max_samples,
    };
    match suite.family {
        Family::Lwr => vec![(Instance::Lwr, lwr(n, n + lb), CostModel::MATRIX)],
        Family::Lwe => vec![(Instance::Lwe, lwe(n, n + lb), CostModel::MATRIX)],
        Family::Hybrid => vec![
            (Instance::Lwe, lwe(na, nb), CostModel::MATRIX),
            (Instance::Lwr, lwr(nb, na + la), CostModel::MATRIX),
        ],
        Family::Rlwe => vec![(Instance::Lwe, lwe(n, 2 * n), CostModel::RING)],
    }
}

/// Samples whose distribution is swapped for a Gaussian in the reduction.
pub fn reduction_samples(suite: &ProtocolSuite) -> u64 {
    let (n, la, lb) = (suite.n as u64, suite.l_a as u64, suite.l_b as u64);
    n * (la + lb) + la * lb
}
