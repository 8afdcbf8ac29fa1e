//! params, validate, tables.

use crate::table::{opt, Table};
use crate::Report;
use anyhow::{bail, Result};
use kcx_core::kc::{validate_params, KcParams, KcVariant};
use kcx_core::noise::{gaussian_reference, renyi_divergence, ALL_TABLES};
use kcx_protocols::{bandwidth, PublishedBw, ProtocolSuite, Reconciliation};
use serde::Serialize;
use serde_json::json;

#[derive(Serialize)]
struct ParamRow {
    name: String,
    family: &'static str,
    n: usize,
    n_b: usize,
    l_a: usize,
    l_b: usize,
    q: u32,
    p: u32,
    t: u32,
    reconciliation: String,
    m: Option<u32>,
    g: u32,
    d: Option<u32>,
    noise: String,
    key_bits: usize,
    msg1_bytes: usize,
    msg2_bytes: usize,
    total_bytes: usize,
    published_bytes: Option<u32>,
}

fn published_total(s: &ProtocolSuite) -> Option<u32> {
    s.published.bandwidth.map(|b| match b {
        PublishedBw::Total(t) => t,
        PublishedBw::Split(pk, ct) => pk + ct,
    })
}

fn param_row(s: &ProtocolSuite) -> ParamRow {
    let (m, d) = match s.rec {
        Reconciliation::Kc { params, .. } | Reconciliation::Sec { params, .. } => (Some(params.m), Some(params.d)),
        Reconciliation::Akcn41 { .. } | Reconciliation::NewHope { .. } => (Some(2), None),
        Reconciliation::E8 { .. } => (Some(16), None),
    };
    let bw = bandwidth(s);
    ParamRow {
        name: s.name.clone(),
        family: s.family.name(),
        n: s.n,
        n_b: s.n_b,
        l_a: s.l_a,
        l_b: s.l_b,
        q: s.q,
        p: s.p,
        t: s.t,
        reconciliation: s.rec.name(),
        m,
        g: s.rec.g(),
        d,
        noise: s.noise.name(),
        key_bits: s.key_bits(),
        msg1_bytes: bw.msg1,
        msg2_bytes: bw.msg2,
        total_bytes: bw.total(),
        published_bytes: published_total(s),
    }
}

pub fn params(suites: &[&ProtocolSuite]) -> Report {
    let rows: Vec<ParamRow> = suites.iter().map(|s| param_row(s)).collect();
    let mut t = Table::new(&["suite", "family", "n", "l", "q", "p", "t", "rec", "m", "g", "d", "noise", "|K|", "bytes", "pub"]);
    for r in &rows {
        let n = if r.n == r.n_b { r.n.to_string() } else { format!("{}/{}", r.n, r.n_b) };
        t.row(vec![
            r.name.clone(),
            r.family.into(),
            n,
            format!("{}x{}", r.l_a, r.l_b),
            r.q.to_string(),
            r.p.to_string(),
            r.t.to_string(),
            r.reconciliation.clone(),
            opt(r.m),
            r.g.to_string(),
            opt(r.d),
            r.noise.clone(),
            r.key_bits.to_string(),
            format!("{}+{}={}", r.msg1_bytes, r.msg2_bytes, r.total_bytes),
            opt(r.published_bytes),
        ]);
    }
    let text = format!("{}{} suites\n", t.render(), rows.len());
    Report::ok(json!(rows), text)
}

#[derive(Serialize)]
struct Check {
    subject: String,
    ok: bool,
    detail: String,
}

fn check_kc(subject: String, variant: KcVariant, p: &KcParams) -> Check {
    match validate_params(variant, p) {
        Ok(v) => Check {
            subject,
            ok: true,
            detail: format!(
                "{variant} q={} m={} g={} d={}: {} {}{}",
                p.q,
                p.m,
                p.g,
                p.d,
                v.bound,
                if v.bound_holds { "holds" } else { "VIOLATED" },
                if v.bound_saturated { " (tight)" } else { "" }
            ),
        },
        Err(e) => Check { subject, ok: false, detail: format!("{variant} q={} m={} g={} d={}: {e}", p.q, p.m, p.g, p.d) },
    }
}

pub fn validate_suites(suites: &[&ProtocolSuite]) -> Report {
    let checks: Vec<Check> = suites
        .iter()
        .map(|s| {
            if let Err(e) = s.validate() {
                return Check { subject: s.name.clone(), ok: false, detail: e };
            }
            match s.rec.kc() {
                Some((variant, p)) => check_kc(s.name.clone(), variant, &p),
                None => Check { subject: s.name.clone(), ok: true, detail: s.rec.name() },
            }
        })
        .collect();
    render_checks(checks)
}

pub fn parse_variant(name: &str) -> Result<KcVariant> {
    KcVariant::ALL
        .into_iter()
        .find(|v| v.name().eq_ignore_ascii_case(name))
        .map_or_else(
            || {
                let known: Vec<_> = KcVariant::ALL.iter().map(|v| v.name()).collect();
                bail!("unknown variant {name:?}; known variants: {}", known.join(", "))
            },
            Ok,
        )
}

pub fn validate_kc(variant: KcVariant, q: u32, m: u32, g: u32, d: u32) -> Result<Report> {
    let p = KcParams::new(q, m, g, d)?;
    Ok(render_checks(vec![check_kc(variant.name().into(), variant, &p)]))
}

fn render_checks(checks: Vec<Check>) -> Report {
    let mut t = Table::new(&["subject", "status", "detail"]);
    for c in &checks {
        t.row(vec![c.subject.clone(), if c.ok { "OK" } else { "FAIL" }.into(), c.detail.clone()]);
    }
    let ok = checks.iter().all(|c| c.ok);
    Report { json: json!(checks), text: t.render(), ok }
}

#[derive(Serialize)]
struct TableRow {
    name: &'static str,
    bits: u32,
    support: i64,
    nominal_var: f64,
    var: f64,
    order: f64,
    divergence: f64,
    computed_divergence: Option<f64>,
    checksum: bool,
}

pub fn tables() -> Report {
    let rows: Vec<TableRow> = ALL_TABLES
        .iter()
        .map(|t| {
            let pmf = t.pmf();
            TableRow {
                name: t.name,
                bits: t.bits,
                support: t.max_abs(),
                nominal_var: t.var,
                var: pmf.var(),
                order: t.renyi_order,
                divergence: t.divergence,
                computed_divergence: renyi_divergence(&pmf, &gaussian_reference(t.var), t.renyi_order).ok(),
                checksum: t.checksum_ok(),
            }
        })
        .collect();
    let mut tab = Table::new(&["table", "bits", "support", "var", "pmf var", "order", "R_a", "R_a (computed)", "checksum"]);
    for r in &rows {
        tab.row(vec![
            r.name.into(),
            r.bits.to_string(),
            format!("±{}", r.support),
            format!("{:.2}", r.nominal_var),
            format!("{:.4}", r.var),
            format!("{}", r.order),
            format!("{:.7}", r.divergence),
            r.computed_divergence.map_or("-".into(), |d| format!("{d:.7}")),
            if r.checksum { "PASS" } else { "FAIL" }.into(),
        ]);
    }
    let ok = rows.iter().all(|r| r.checksum);
    Report { json: json!(rows), text: tab.render(), ok }
}
