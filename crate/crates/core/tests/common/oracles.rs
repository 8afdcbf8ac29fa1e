// Brute-force reference implementations. Shared by the core integration
// tests and the workspace acceptance suite.
#![allow(dead_code)]

use kcx_core::codes::e8;
use kcx_core::kc::*;
use num_bigint::BigInt;
use std::collections::HashMap;

/// Every (q, m, g, d) with q ≤ qmax accepted for the variant.
pub fn accepted(variant: KcVariant, qmax: u32) -> Vec<KcParams> {
    let mut out = Vec::new();
    for q in 2..=qmax {
        for m in 2..=q {
            for g in 2..=q {
                for d in 0..=q / 2 {
                    let p = KcParams::new(q, m, g, d).unwrap();
                    if validate_params(variant, &p).is_ok() {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Count of (σ1, randomness, σ2) triples where Rec disagrees with Con.
pub fn disagreements(variant: KcVariant, p: &KcParams) -> u64 {
    let q = p.q as i64;
    let d = p.d as i64;
    let mut bad = 0;
    for s1 in 0..q {
        if variant.is_akc() {
            for k1 in 0..p.m as i64 {
                let v = akc_con(variant, s1, k1, p).unwrap() as i64;
                for delta in -d..=d {
                    let s2 = (s1 + delta).rem_euclid(q);
                    bad += (akc_rec(variant, s2, v, p).unwrap() as i64 != k1) as u64;
                }
            }
        } else {
            let (lo, hi) = if variant == KcVariant::OkcnGeneric {
                okcn_noise_range(p)
            } else {
                (0, 0)
            };
            for e in lo..=hi {
                let c = kc_con_with(variant, s1, p, e).unwrap();
                for delta in -d..=d {
                    let s2 = (s1 + delta).rem_euclid(q);
                    bad += (kc_rec(variant, s2, c.v as i64, p).unwrap() != c.k1) as u64;
                }
            }
        }
    }
    bad
}

/// Joint counts of (k1, v) over σ1 ∈ Z_q and all Con randomness.
pub fn kc_joint_counts(variant: KcVariant, p: &KcParams) -> HashMap<(u32, u32), u64> {
    let (lo, hi) = if variant == KcVariant::OkcnGeneric {
        okcn_noise_range(p)
    } else {
        (0, 0)
    };
    let mut counts = HashMap::new();
    for s1 in 0..p.q as i64 {
        for e in lo..=hi {
            let c = kc_con_with(variant, s1, p, e).unwrap();
            *counts.entry((c.k1, c.v)).or_insert(0u64) += 1;
        }
    }
    counts
}

/// k1 uniform over Z_m and independent of v, checked by exact counting:
/// N(k, v) · N = N_k(k) · N_v(v) for all k, v.
pub fn kc_secure(variant: KcVariant, p: &KcParams) -> bool {
    let counts = kc_joint_counts(variant, p);
    let total: u64 = counts.values().sum();
    let mut nk = vec![0u64; p.m as usize];
    let mut nv = vec![0u64; p.g as usize];
    for (&(k, v), &c) in &counts {
        nk[k as usize] += c;
        nv[v as usize] += c;
    }
    if nk.iter().any(|&c| c * p.m as u64 != total) {
        return false;
    }
    (0..p.m).all(|k| {
        (0..p.g).all(|v| {
            let c = counts.get(&(k, v)).copied().unwrap_or(0);
            c as u128 * total as u128 == nk[k as usize] as u128 * nv[v as usize] as u128
        })
    })
}

/// Hint histogram #{σ1 : Con(σ1, k1) = v} for each k1.
pub fn akc_profiles(variant: KcVariant, p: &KcParams) -> Vec<Vec<u64>> {
    (0..p.m as i64)
        .map(|k1| {
            let mut h = vec![0u64; p.g as usize];
            for s1 in 0..p.q as i64 {
                h[akc_con(variant, s1, k1, p).unwrap() as usize] += 1;
            }
            h
        })
        .collect()
}

pub fn akc_secure(variant: KcVariant, p: &KcParams) -> bool {
    let prof = akc_profiles(variant, p);
    prof.iter().all(|h| h == &prof[0])
}

/// Negacyclic product in Z_q[x]/(x^n + 1) by the definition.
pub fn schoolbook(a: &[u32], b: &[u32], q: u32) -> Vec<u32> {
    let n = a.len();
    let q = q as i64;
    let mut out = vec![0i64; n];
    for i in 0..n {
        for j in 0..n {
            let t = a[i] as i64 * b[j] as i64;
            if i + j < n {
                out[i + j] += t;
            } else {
                out[i + j - n] -= t;
            }
        }
    }
    out.into_iter().map(|x| x.rem_euclid(q) as u32).collect()
}

/// Matrix product with arbitrary-precision accumulation.
pub fn matmul_big(a: &[Vec<i64>], b: &[Vec<i64>], q: u32) -> Vec<Vec<u32>> {
    let q = BigInt::from(q);
    (0..a.len())
        .map(|i| {
            (0..b[0].len())
                .map(|j| {
                    let s: BigInt = (0..b.len()).map(|k| BigInt::from(a[i][k]) * BigInt::from(b[k][j])).sum();
                    let r = ((s % &q) + &q) % &q;
                    u32::try_from(r).unwrap()
                })
                .collect()
        })
        .collect()
}

/// Nearest point of D̃4 = Z^4 ∪ (Z^4 + g) to num/den by enumerating every
/// lattice point within radius 2 of the rounded input. Returns the doubled
/// point 2Bv, or None when the minimum is not unique.
pub fn brute_cvp_d4(num: [i64; 4], den: i64) -> Option<[i64; 4]> {
    let centre = num.map(|n| (n as f64 / den as f64).round() as i64);
    let mut best: Option<(i128, [i64; 4])> = None;
    let mut tie = false;
    for coset in 0..2i64 {
        for d0 in -2..=2 {
            for d1 in -2..=2 {
                for d2 in -2..=2 {
                    for d3 in -2..=2 {
                        let z = [centre[0] + d0, centre[1] + d1, centre[2] + d2, centre[3] + d3];
                        let pt2 = z.map(|c| 2 * c + coset);
                        // (2x − pt2)² scaled by den²
                        let dist: i128 = (0..4)
                            .map(|i| {
                                let t = 2 * num[i] as i128 - pt2[i] as i128 * den as i128;
                                t * t
                            })
                            .sum();
                        match best {
                            Some((b, _)) if dist > b => {}
                            Some((b, _)) if dist == b => tie = true,
                            _ => {
                                best = Some((dist, pt2));
                                tie = false;
                            }
                        }
                    }
                }
            }
        }
    }
    if tie {
        None
    } else {
        best.map(|(_, p)| p)
    }
}

/// Message whose scaled codeword has minimal total cost, over all 16
/// candidates; None on a tie.
pub fn brute_decode_e8(x: [i64; 8], q: u32) -> Option<[u8; 4]> {
    let cost = e8::costs(x, q);
    let mut best = (i64::MAX, [0u8; 4]);
    let mut tie = false;
    for m in 0..16u8 {
        let k = [m & 1, (m >> 1) & 1, (m >> 2) & 1, (m >> 3) & 1];
        let c = e8::encode(k);
        let total: i64 = (0..8).map(|i| cost[i][c[i] as usize]).sum();
        if total < best.0 {
            best = (total, k);
            tie = false;
        } else if total == best.0 {
            tie = true;
        }
    }
    (!tie).then_some(best.1)
}
