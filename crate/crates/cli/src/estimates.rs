//! error-rate and sec-est.

use crate::table::{log2_str, opt, Table};
use crate::Report;
use kcx_analysis::error::{error_rate, zarzar_error_rate, ZarzarReport};
use kcx_analysis::security::{reduction_samples, security_estimate, suite_instances};
use kcx_core::noise::NoiseDist;
use kcx_protocols::{Attack, Instance, ProtocolSuite, Reconciliation};
use serde::Serialize;
use serde_json::json;

#[derive(Serialize)]
struct RateRow {
    suite: String,
    log2_per: Option<f64>,
    log2_overall: Option<f64>,
    published_per: Option<f64>,
    published_overall: Option<f64>,
    e8: Option<E8Row>,
    error: Option<String>,
}

#[derive(Serialize)]
struct E8Row {
    radius: i64,
    t: i64,
    threshold: i64,
    groups: u64,
}

impl From<ZarzarReport> for E8Row {
    fn from(z: ZarzarReport) -> Self {
        E8Row { radius: z.radius, t: z.t, threshold: z.threshold, groups: z.groups }
    }
}

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn error_rates(suites: &[&ProtocolSuite]) -> Report {
    let rows: Vec<RateRow> = suites
        .iter()
        .map(|s| {
            let mut row = RateRow {
                suite: s.name.clone(),
                log2_per: None,
                log2_overall: None,
                published_per: s.published.log2_per,
                published_overall: s.published.log2_err,
                e8: None,
                error: None,
            };
            match error_rate(s) {
                Ok(r) => {
                    row.log2_per = finite(r.log2_per());
                    row.log2_overall = finite(r.log2_overall());
                }
                Err(e) => row.error = Some(e.to_string()),
            }
            if let Reconciliation::E8 { g } = s.rec {
                row.e8 = zarzar_error_rate(s.noise.variance(), s.q, g, s.n as u32).ok().map(E8Row::from);
            }
            row
        })
        .collect();
    let mut t = Table::new(&["suite", "per", "overall", "published per", "published overall", "note"]);
    let p2 = |x: Option<f64>| x.map_or("-".to_string(), |v| log2_str(v.exp2()));
    for r in &rows {
        let note = match (&r.error, &r.e8) {
            (Some(e), _) => e.clone(),
            (None, Some(z)) => format!("radius {} T {} threshold {}", z.radius, z.t, z.threshold),
            _ => String::new(),
        };
        t.row(vec![
            r.suite.clone(),
            p2(r.log2_per),
            p2(r.log2_overall),
            p2(r.published_per),
            p2(r.published_overall),
            note,
        ]);
    }
    let ok = rows.iter().all(|r| r.error.is_none()) || rows.len() > 1;
    Report { json: json!(rows), text: t.render(), ok }
}

#[derive(Serialize)]
struct SecRow {
    suite: String,
    instance: &'static str,
    attack: &'static str,
    m: u32,
    b: u32,
    cost: [u32; 3],
    post_reduction: Option<[u32; 3]>,
    published_m: Option<u32>,
    published_b: Option<u32>,
    published_cost: Option<[u32; 3]>,
    quantum_128: bool,
}

fn instance_name(i: Instance) -> &'static str {
    match i {
        Instance::Lwe => "LWE",
        Instance::Lwr => "LWR",
    }
}

pub fn sec_est(suites: &[&ProtocolSuite]) -> Report {
    let mut rows = Vec::new();
    for s in suites {
        let samples = reduction_samples(s);
        for (instance, inst, model) in suite_instances(s) {
            let (primal, dual) = security_estimate(&inst, model);
            for (attack, est) in [(Attack::Primal, primal), (Attack::Dual, dual)] {
                let Some(e) = est else { continue };
                let published = s.published.security.iter().find(|r| r.instance == instance && r.attack == attack);
                let post = match (&s.noise, instance) {
                    (NoiseDist::Table(t), Instance::Lwe) => {
                        Some(e.post_reduction(samples, t.renyi_order, t.divergence))
                    }
                    _ => None,
                };
                rows.push(SecRow {
                    suite: s.name.clone(),
                    instance: instance_name(instance),
                    attack: match attack {
                        Attack::Primal => "primal",
                        Attack::Dual => "dual",
                    },
                    m: e.m,
                    b: e.b,
                    cost: e.cost,
                    post_reduction: post,
                    published_m: published.map(|r| r.m),
                    published_b: published.map(|r| r.b),
                    published_cost: published.and_then(|r| r.cost),
                    quantum_128: e.cost[1] >= 128,
                });
            }
        }
    }
    let triple = |c: Option<[u32; 3]>| c.map_or("-".to_string(), |c| format!("{}/{}/{}", c[0], c[1], c[2]));
    let mut t = Table::new(&["", "suite", "instance", "attack", "m'", "b", "C/Q/P", "after reduction", "published m'/b", "published C/Q/P"]);
    for r in &rows {
        t.row(vec![
            if r.quantum_128 { "*" } else { "" }.into(),
            r.suite.clone(),
            r.instance.into(),
            r.attack.into(),
            r.m.to_string(),
            r.b.to_string(),
            triple(Some(r.cost)),
            triple(r.post_reduction),
            format!("{}/{}", opt(r.published_m), opt(r.published_b)),
            triple(r.published_cost),
        ]);
    }
    let text = format!("{}* quantum core-SVP cost Q >= 128\n", t.render());
    Report::ok(json!(rows), text)
}
