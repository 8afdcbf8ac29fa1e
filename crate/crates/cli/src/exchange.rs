//! kx and bench: full exchanges with per-phase timing.

use crate::table::Table;
use crate::Report;
use anyhow::Result;
use kcx_protocols::{finish, initiate, respond, ProtocolSuite};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;
use serde_json::json;
use sha3::{Digest, Sha3_256};
use std::time::Instant;

#[cfg(target_arch = "x86_64")]
fn cycles() -> Option<u64> {
    // SAFETY: rdtsc has no preconditions on x86_64.
    Some(unsafe { core::arch::x86_64::_rdtsc() })
}

#[cfg(not(target_arch = "x86_64"))]
fn cycles() -> Option<u64> {
    None
}

#[derive(Default)]
struct Samples {
    ns: Vec<u64>,
    cycles: Vec<u64>,
}

impl Samples {
    fn time<T>(&mut self, f: impl FnOnce() -> T) -> T {
        let c0 = cycles();
        let t0 = Instant::now();
        let out = f();
        let ns = t0.elapsed().as_nanos() as u64;
        if let (Some(a), Some(b)) = (c0, cycles()) {
            self.cycles.push(b.wrapping_sub(a));
        }
        self.ns.push(ns);
        out
    }

    fn stats(&self) -> PhaseStats {
        PhaseStats {
            median_us: median(&self.ns) / 1e3,
            mean_us: mean(&self.ns) / 1e3,
            median_cycles: (!self.cycles.is_empty()).then(|| median(&self.cycles)),
            mean_cycles: (!self.cycles.is_empty()).then(|| mean(&self.cycles)),
        }
    }
}

fn median(v: &[u64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_unstable();
    match s.len() {
        0 => 0.0,
        n if n % 2 == 1 => s[n / 2] as f64,
        n => (s[n / 2 - 1] + s[n / 2]) as f64 / 2.0,
    }
}

fn mean(v: &[u64]) -> f64 {
    if v.is_empty() {
        0.0
    } else {
        v.iter().sum::<u64>() as f64 / v.len() as f64
    }
}

#[derive(Serialize, Clone, Copy)]
pub struct PhaseStats {
    pub median_us: f64,
    pub mean_us: f64,
    pub median_cycles: Option<f64>,
    pub mean_cycles: Option<f64>,
}

#[derive(Serialize)]
pub struct KxRun {
    pub suite: String,
    pub seed: Option<u64>,
    pub trials: u64,
    pub agreed: u64,
    pub key_bits: usize,
    pub msg1_bytes: usize,
    pub msg2_bytes: usize,
    /// SHA3-256 over every message and both keys, in order.
    pub transcript: String,
    pub initiate: PhaseStats,
    pub respond: PhaseStats,
    pub finish: PhaseStats,
}

pub fn run(suite: &ProtocolSuite, trials: u64, seed: Option<u64>) -> Result<KxRun> {
    let mut rng = match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_entropy(),
    };
    let (mut ti, mut tr, mut tf) = (Samples::default(), Samples::default(), Samples::default());
    let mut hash = Sha3_256::new();
    let (mut agreed, mut sizes, mut key_bits) = (0, (0, 0), 0);
    for _ in 0..trials {
        let (init, m1) = ti.time(|| initiate(suite, &mut rng))?;
        let (k2, m2) = tr.time(|| respond(suite, &m1, &mut rng))?;
        let k1 = tf.time(|| finish(&init, &m2))?;
        agreed += (k1 == k2) as u64;
        sizes = (m1.len(), m2.len());
        key_bits = k2.len();
        for part in [&m1, &m2, &k1.to_bytes(), &k2.to_bytes()] {
            hash.update((part.len() as u64).to_le_bytes());
            hash.update(part);
        }
    }
    let transcript = hash.finalize().iter().map(|b| format!("{b:02x}")).collect();
    Ok(KxRun {
        suite: suite.name.clone(),
        seed,
        trials,
        agreed,
        key_bits,
        msg1_bytes: sizes.0,
        msg2_bytes: sizes.1,
        transcript,
        initiate: ti.stats(),
        respond: tr.stats(),
        finish: tf.stats(),
    })
}

fn cyc(c: Option<f64>) -> String {
    c.map_or("-".into(), |c| format!("{c:.0}"))
}

pub fn kx(suite: &ProtocolSuite, trials: u64, seed: Option<u64>, timings: bool) -> Result<Report> {
    let r = run(suite, trials, seed)?;
    let mut text = format!(
        "suite {}\nagreement {}/{}\nkey bits {}\nmessages {} + {} = {} bytes\ntranscript {}\n",
        r.suite,
        r.agreed,
        r.trials,
        r.key_bits,
        r.msg1_bytes,
        r.msg2_bytes,
        r.msg1_bytes + r.msg2_bytes,
        r.transcript
    );
    let mut value = json!(r);
    if timings {
        let mut t = Table::new(&["phase", "median us", "mean us", "median cycles", "mean cycles"]);
        for (name, s) in [("initiate", r.initiate), ("respond", r.respond), ("finish", r.finish)] {
            t.row(vec![
                name.into(),
                format!("{:.1}", s.median_us),
                format!("{:.1}", s.mean_us),
                cyc(s.median_cycles),
                cyc(s.mean_cycles),
            ]);
        }
        text += &t.render();
    } else if let Some(obj) = value.as_object_mut() {
        for k in ["initiate", "respond", "finish"] {
            obj.remove(k);
        }
    }
    let ok = r.agreed == r.trials;
    Ok(Report { json: value, text, ok })
}

pub fn bench(suites: &[&ProtocolSuite], iters: u64, seed: Option<u64>) -> Result<Report> {
    let mut runs = Vec::new();
    for s in suites {
        runs.push(run(s, iters, seed)?);
    }
    let mut t = Table::new(&["suite", "initiate us", "respond us", "finish us", "total us", "cycles (i/r/f)", "bytes"]);
    for r in &runs {
        let total = r.initiate.median_us + r.respond.median_us + r.finish.median_us;
        t.row(vec![
            r.suite.clone(),
            format!("{:.1}", r.initiate.median_us),
            format!("{:.1}", r.respond.median_us),
            format!("{:.1}", r.finish.median_us),
            format!("{total:.1}"),
            format!("{}/{}/{}", cyc(r.initiate.median_cycles), cyc(r.respond.median_cycles), cyc(r.finish.median_cycles)),
            (r.msg1_bytes + r.msg2_bytes).to_string(),
        ]);
    }
    let text = format!("medians over {iters} runs; machine-specific, for comparison only\n{}", t.render());
    let ok = runs.iter().all(|r| r.agreed == r.trials);
    Ok(Report { json: json!(runs), text, ok })
}
