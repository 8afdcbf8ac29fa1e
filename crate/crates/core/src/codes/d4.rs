//! The lattice D̃4 spanned by B = (u0, u1, u2, g), g = (1/2, 1/2, 1/2, 1/2),
//! with NewHope reconciliation and AKCN-4:1 on top of it.
//!
//! Points are exact rationals x = num / den with a shared positive
//! denominator, so every rounding step stays in integer arithmetic.

use crate::kc::round_div;
use rand::Rng;

/// A rational 4-vector num / den.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rat4 {
    pub num: [i64; 4],
    pub den: i64,
}

impl Rat4 {
    pub fn new(num: [i64; 4], den: i64) -> Self {
        assert!(den > 0, "denominator must be positive");
        Rat4 { num, den }
    }

    pub fn integer(v: [i64; 4]) -> Self {
        Rat4 { num: v, den: 1 }
    }
}

/// 2·Bv as integers, i.e. the lattice point with doubled coordinates.
pub fn basis_times2(v: [i64; 4]) -> [i64; 4] {
    [2 * v[0] + v[3], 2 * v[1] + v[3], 2 * v[2] + v[3], v[3]]
}

/// ‖x − ⌊x⌉‖₁ scaled by den, for x = num/den.
fn frac_l1(num: &[i64; 4], den: i64) -> i64 {
    num.iter().map(|&n| (n - den * round_div(n, den)).abs()).sum()
}

/// Coordinates v with Bv closest to x.
pub fn cvp_d4(x: Rat4) -> [i64; 4] {
    // Work over 2·den so that x − g is exact.
    let den = 2 * x.den;
    let num = x.num.map(|n| 2 * n);
    let v0 = num.map(|n| round_div(n, den));
    let v1 = num.map(|n| round_div(n - x.den, den));
    let k = (frac_l1(&num, den) >= den) as i64;
    let vk = if k == 0 { v0 } else { v1 };
    [vk[0] - vk[3], vk[1] - vk[3], vk[2] - vk[3], k + 2 * vk[3]]
}

/// AKCN-4:1 Con: v = CVP(g(σ1 + k1(q+1)g)/q) mod (g, g, g, 2g).
pub fn akcn41_con(sigma1: [u32; 4], k1: u8, q: u32, g: u32) -> [u32; 4] {
    let (q, gi) = (q as i64, g as i64);
    let k = (k1 & 1) as i64;
    let num = sigma1.map(|s| gi * (2 * s as i64 + k * (q + 1)));
    let v = cvp_d4(Rat4::new(num, 2 * q));
    [
        v[0].rem_euclid(gi) as u32,
        v[1].rem_euclid(gi) as u32,
        v[2].rem_euclid(gi) as u32,
        v[3].rem_euclid(2 * gi) as u32,
    ]
}

/// AKCN-4:1 Rec: x = Bv/g − σ2/q, k2 = 0 iff ‖x − ⌊x⌉‖₁ < 1.
pub fn akcn41_rec(sigma2: [u32; 4], v: [u32; 4], q: u32, g: u32) -> u8 {
    let (q, gi) = (q as i64, g as i64);
    let bv = basis_times2(v.map(|c| c as i64));
    let den = 2 * gi * q;
    let num: [i64; 4] = std::array::from_fn(|i| q * bv[i] - 2 * gi * sigma2[i] as i64);
    (frac_l1(&num, den) >= den) as u8
}

/// NewHope HelpRec: CVP((2^r/q)(x + b·g)) mod 2^r.
pub fn newhope_helprec(x: [u32; 4], b: u8, q: u32, r: u32) -> [u32; 4] {
    let scale = 1i64 << r;
    let bb = (b & 1) as i64;
    let num = x.map(|c| scale * (2 * c as i64 + bb));
    cvp_d4(Rat4::new(num, 2 * q as i64)).map(|c| c.rem_euclid(scale) as u32)
}

/// NewHope rec: Decode(x/q − Bv/2^r), 0 iff ‖y − ⌊y⌉‖₁ <= 1.
pub fn newhope_rec(x: [u32; 4], v: [u32; 4], q: u32, r: u32) -> u8 {
    let q = q as i64;
    let bv = basis_times2(v.map(|c| c as i64));
    let den = q << (r + 1);
    let num: [i64; 4] = std::array::from_fn(|i| ((x[i] as i64) << (r + 1)) - q * bv[i]);
    (frac_l1(&num, den) > den) as u8
}

pub fn newhope_con_with(sigma1: [u32; 4], b: u8, q: u32, r: u32) -> (u8, [u32; 4]) {
    let v = newhope_helprec(sigma1, b, q, r);
    (newhope_rec(sigma1, v, q, r), v)
}

pub fn newhope_con<R: Rng + ?Sized>(sigma1: [u32; 4], q: u32, r: u32, rng: &mut R) -> (u8, [u32; 4]) {
    newhope_con_with(sigma1, rng.gen::<bool>() as u8, q, r)
}
