//! E8 built from the extended Hamming code H8: 4 key bits per 8 coefficients.

use crate::kc::round_div;

/// Generator rows of H8.
pub const H: [[u8; 8]; 4] = [
    [1, 1, 1, 1, 0, 0, 0, 0],
    [0, 0, 1, 1, 1, 1, 0, 0],
    [0, 0, 0, 0, 1, 1, 1, 1],
    [0, 1, 0, 1, 0, 1, 0, 1],
];

/// Coset vector c; E8 = C ∪ (C + c) with C spanned by the first three rows.
pub const COSET: [u8; 8] = H[3];

/// k·H mod 2.
pub fn encode(k: [u8; 4]) -> [u8; 8] {
    let mut out = [0u8; 8];
    for (row, &bit) in H.iter().zip(&k) {
        for (o, &h) in out.iter_mut().zip(row) {
            *o ^= h & bit;
        }
    }
    out
}

fn absq(x: i64, q: i64) -> i64 {
    let r = x.rem_euclid(q);
    r.min(q - r)
}

pub fn e8_con(sigma1: [u32; 8], k1: [u8; 4], q: u32, g: u32) -> [u32; 8] {
    let (q, g) = (q as i64, g as i64);
    let half = (q - 1) / 2;
    let c = encode(k1.map(|b| b & 1));
    std::array::from_fn(|i| {
        round_div(g * (sigma1[i] as i64 + half * c[i] as i64), q).rem_euclid(g) as u32
    })
}

pub fn e8_rec(sigma2: [u32; 8], v: [u32; 8], q: u32, g: u32) -> [u8; 4] {
    let (qi, gi) = (q as i64, g as i64);
    let x = std::array::from_fn(|i| round_div(qi * v[i] as i64, gi) - sigma2[i] as i64);
    decode_e8(x, q)
}

/// Per-coordinate costs (|x_i|_q², |x_i + (q−1)/2|_q²).
pub fn costs(x: [i64; 8], q: u32) -> [[i64; 2]; 8] {
    let q = q as i64;
    let half = (q - 1) / 2;
    x.map(|xi| {
        let a = absq(xi, q);
        let b = absq(xi + half, q);
        [a * a, b * b]
    })
}

fn decode_c(cost: &[[i64; 2]; 8], b0: usize, b1: usize) -> ([u8; 4], i64) {
    let mut k = [0u8; 4];
    let mut min_d = i64::MAX;
    let mut min_i = 0usize;
    let mut total = 0i64;
    for j in 0..4 {
        let c0 = cost[2 * j][b0] + cost[2 * j + 1][b1];
        let c1 = cost[2 * j][1 - b0] + cost[2 * j + 1][1 - b1];
        let kj = (c0 >= c1) as usize;
        let (best, other) = if kj == 0 { (c0, c1) } else { (c1, c0) };
        k[j] = kj as u8;
        total += best;
        if other - best < min_d {
            min_d = other - best;
            min_i = j;
        }
    }
    if (k[0] ^ k[1] ^ k[2] ^ k[3]) == 1 {
        k[min_i] ^= 1;
        total += min_d;
    }
    (k, total)
}

/// Nearest E8 codeword under the cost table, returned as its 4 message bits.
pub fn decode_e8(x: [i64; 8], q: u32) -> [u8; 4] {
    let cost = costs(x, q);
    let (k00, t00) = decode_c(&cost, 0, 0);
    let (k01, t01) = decode_c(&cost, 0, 1);
    let b = (t00 >= t01) as u8;
    let k = if b == 0 { k00 } else { k01 };
    [k[0], k[1] ^ k[0], k[3], b]
}

/// ‖σ‖²_{q,2}.
pub fn norm_q2_sq(x: [i64; 8], q: u32) -> i64 {
    x.iter().map(|&xi| absq(xi, q as i64).pow(2)).sum()
}
