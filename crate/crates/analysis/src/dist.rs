//! Distribution arithmetic on top of `kcx_core::noise::Pmf`.

use crate::AnalysisError;
use kcx_core::kc::round_div;
use kcx_core::noise::{Pmf, FLUSH};
use statrs::distribution::{ChiSquared, ContinuousCDF};

const NORM_TOL: f64 = 1e-9;

fn normalized(p: &Pmf) -> Result<(), AnalysisError> {
    let m = p.mass();
    if (m - 1.0).abs() > NORM_TOL {
        return Err(AnalysisError::NotNormalized(m));
    }
    Ok(())
}

/// Distribution of X + Y.
pub fn pmf_add(p: &Pmf, q: &Pmf) -> Result<Pmf, AnalysisError> {
    normalized(p)?;
    normalized(q)?;
    Ok(p.add(q))
}

/// Distribution of X · Y.
pub fn pmf_product_var(p: &Pmf, q: &Pmf) -> Result<Pmf, AnalysisError> {
    normalized(p)?;
    normalized(q)?;
    Ok(p.mul(q))
}

/// Values on the grid step·i, stored as a Pmf over i.
#[derive(Debug, Clone, PartialEq)]
pub struct GridPmf {
    pub step: f64,
    pub pmf: Pmf,
}

impl GridPmf {
    pub fn mean(&self) -> f64 {
        self.step * self.pmf.mean()
    }

    pub fn mass(&self) -> f64 {
        self.pmf.mass()
    }

    /// Pr[X > t].
    pub fn tail_above(&self, t: f64) -> f64 {
        self.pmf.prob_where(|i| i as f64 * self.step > t)
    }

    pub fn add(&self, other: &GridPmf) -> Result<GridPmf, AnalysisError> {
        if (self.step - other.step).abs() > 1e-12 * self.step {
            return Err(AnalysisError::Param(format!("steps {} and {}", self.step, other.step)));
        }
        Ok(GridPmf { step: self.step, pmf: self.pmf.add(&other.pmf) })
    }

    pub fn multiply(&self, other: &GridPmf) -> GridPmf {
        GridPmf { step: self.step * other.step, pmf: self.pmf.mul(&other.pmf) }
    }

    /// s⌊x/s⌉ for each value x.
    pub fn merge(&self, s: f64) -> GridPmf {
        GridPmf { step: s, pmf: self.pmf.map(|i| merge_index(i as f64 * self.step, s)) }
    }
}

fn merge_index(x: f64, s: f64) -> i64 {
    (x / s + 0.5).floor() as i64
}

/// s⌊x/s⌉ over integer-valued X.
pub fn pmf_merge(p: &Pmf, s: i64) -> Result<Pmf, AnalysisError> {
    if s < 1 {
        return Err(AnalysisError::Param(format!("merge step {s}")));
    }
    Ok(p.map(|x| s * round_div(x, s)))
}

/// Distribution of s⌊χ²(df)/s⌉, keeping points with mass above 2^-200.
pub fn discretize_chisq(df: f64, s: f64) -> Result<GridPmf, AnalysisError> {
    if !(df > 0.0) || !(s > 0.0) {
        return Err(AnalysisError::Param(format!("df = {df}, step = {s}")));
    }
    let chi = ChiSquared::new(df).map_err(|e| AnalysisError::Param(e.to_string()))?;
    let median = df * (1.0 - 2.0 / (9.0 * df)).powi(3);
    // Differences of the CDF below the median and of the survival function
    // above it keep relative precision in both tails.
    let mass = |k: i64| {
        let lo = ((k as f64 - 0.5) * s).max(0.0);
        let hi = (k as f64 + 0.5) * s;
        if hi <= median {
            chi.cdf(hi) - chi.cdf(lo)
        } else {
            chi.sf(lo) - chi.sf(hi)
        }
    };
    let mut p = Vec::new();
    let mut k = 0i64;
    loop {
        let v = mass(k);
        if k as f64 * s > median && v < FLUSH {
            break;
        }
        p.push(v.max(0.0));
        k += 1;
    }
    Ok(GridPmf { step: s, pmf: Pmf::from_dense(0, p) })
}

/// Joint distribution of an integer value and a residue modulo `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ResiduePmf {
    r: usize,
    min: i64,
    /// rows[a][i] = Pr[value = min + i, residue = a].
    rows: Vec<Vec<f64>>,
}

impl ResiduePmf {
    pub fn point(r: usize) -> Self {
        let mut rows = vec![vec![0.0]; r];
        rows[0][0] = 1.0;
        ResiduePmf { r, min: 0, rows }
    }

    /// Builds from (value, residue, probability) triples.
    pub fn from_triples<I: IntoIterator<Item = (i64, i64, f64)>>(r: usize, it: I) -> Self {
        let t: Vec<_> = it.into_iter().collect();
        let lo = t.iter().map(|x| x.0).min().unwrap_or(0);
        let hi = t.iter().map(|x| x.0).max().unwrap_or(0);
        let mut rows = vec![vec![0.0; (hi - lo + 1) as usize]; r];
        for (v, a, p) in t {
            rows[a.rem_euclid(r as i64) as usize][(v - lo) as usize] += p;
        }
        let mut out = ResiduePmf { r, min: lo, rows };
        out.trim();
        out
    }

    pub fn modulus(&self) -> usize {
        self.r
    }

    fn width(&self) -> usize {
        self.rows[0].len()
    }

    fn trim(&mut self) {
        let live = |i: usize| self.rows.iter().any(|row| row[i] > FLUSH);
        let w = self.width();
        let Some(first) = (0..w).find(|&i| live(i)) else {
            self.min = 0;
            self.rows.iter_mut().for_each(|row| *row = vec![0.0]);
            return;
        };
        let last = (0..w).rev().find(|&i| live(i)).expect("nonempty");
        for row in &mut self.rows {
            *row = row[first..=last].iter().map(|&v| if v > FLUSH { v } else { 0.0 }).collect();
        }
        self.min += first as i64;
    }

    pub fn mass(&self) -> f64 {
        self.rows.iter().flatten().sum()
    }

    /// Sum of independent pairs; residues add modulo r.
    pub fn add(&self, other: &ResiduePmf) -> ResiduePmf {
        assert_eq!(self.r, other.r, "residue moduli differ");
        let r = self.r;
        let w = self.width() + other.width() - 1;
        let mut rows = vec![vec![0.0; w]; r];
        for (a, ra) in self.rows.iter().enumerate() {
            for (b, rb) in other.rows.iter().enumerate() {
                let out = &mut rows[(a + b) % r];
                for (i, &x) in ra.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    for (o, &y) in out[i..].iter_mut().zip(rb) {
                        *o += x * y;
                    }
                }
            }
        }
        let mut out = ResiduePmf { r, min: self.min + other.min, rows };
        out.trim();
        out
    }

    pub fn sum_n(&self, n: u64) -> ResiduePmf {
        let mut acc = ResiduePmf::point(self.r);
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

    /// Pr[value = ·, residue = a].
    pub fn slice(&self, a: usize) -> Pmf {
        Pmf::from_dense(self.min, self.rows[a].clone())
    }

    /// Marginal of the value.
    pub fn values(&self) -> Pmf {
        let w = self.width();
        let p = (0..w).map(|i| self.rows.iter().map(|row| row[i]).sum()).collect();
        Pmf::from_dense(self.min, p)
    }
}

/// merge(multiply(a, b), s) in one pass. Needs s / (a.step·b.step) to be a
/// whole number. Merged indices above `cap` are lumped into `cap`.
pub fn multiply_merge(a: &GridPmf, b: &GridPmf, s: f64, cap: Option<i64>) -> Result<GridPmf, AnalysisError> {
    let ratio = s / (a.step * b.step);
    let k = ratio.round();
    if k < 1.0 || (ratio - k).abs() > 1e-9 * k {
        return Err(AnalysisError::Param(format!("merge step {s} is not a multiple of {}", a.step * b.step)));
    }
    let k = k as i64;
    let hi = a.pmf.max().max(0) * b.pmf.max().max(0);
    let top = cap.unwrap_or(i64::MAX).min(round_div(hi, k)).max(0);
    let mut out = vec![0.0; top as usize + 1];
    for (i, x) in a.pmf.iter() {
        if x == 0.0 {
            continue;
        }
        if i < 0 {
            return Err(AnalysisError::Param("fused product needs nonnegative support".into()));
        }
        for (j, y) in b.pmf.iter() {
            if j < 0 {
                return Err(AnalysisError::Param("fused product needs nonnegative support".into()));
            }
            let idx = round_div(i * j, k).min(top);
            out[idx as usize] += x * y;
        }
    }
    Ok(GridPmf { step: s, pmf: Pmf::from_dense(0, out) })
}

/// Lumps values above `cap` into `cap`.
pub fn clamp_above(p: &Pmf, cap: i64) -> Pmf {
    p.map(|x| x.min(cap))
}
