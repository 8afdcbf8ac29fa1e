//! Lattice arithmetic: matrices over Z_q, LWR rounding, bit cutting,
//! seeded expansion and the negacyclic NTT.

pub mod matrix;
pub mod ntt;

pub use matrix::ZqMatrix;
pub use ntt::{Domain, NttTables, RingPoly};

use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake128;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    Dim(String),
    #[error("unsupported modulus {0}")]
    Modulus(u32),
    #[error("p = {p} must divide q = {q}, both powers of two")]
    Divisibility { p: u32, q: u32 },
    #[error("no negacyclic NTT for n = {n}, q = {q}")]
    UnsupportedRing { n: usize, q: u32 },
    #[error("operands are in different domains")]
    Domain,
    #[error("cannot cut {t} bits from modulus {q}")]
    Cut { t: u32, q: u32 },
}

fn check_pq(p: u32, q: u32) -> Result<(u32, u32), AlgebraError> {
    if !p.is_power_of_two() || !q.is_power_of_two() || p > q || p < 2 {
        return Err(AlgebraError::Divisibility { p, q });
    }
    Ok((p.trailing_zeros(), q.trailing_zeros()))
}

/// ⌊(p/q)x⌉ mod p.
pub fn lwr_round(x: u32, q: u32, p: u32) -> Result<u32, AlgebraError> {
    let (pb, qb) = check_pq(p, q)?;
    let sh = qb - pb;
    let half = if sh == 0 { 0 } else { 1u64 << (sh - 1) };
    Ok((((x as u64 + half) >> sh) & (p as u64 - 1)) as u32)
}

/// {x}_p = x − (q/p)⌊x⌉_p, in [−q/2p, q/2p − 1].
pub fn frac_part(x: i64, p: u32, q: u32) -> Result<i64, AlgebraError> {
    let (pb, qb) = check_pq(p, q)?;
    let r = 1i64 << (qb - pb);
    Ok(x - r * crate::kc::round_div(x, r))
}

/// Entry-wise ⌊Y⌉_p.
pub fn lwr_round_matrix(y: &ZqMatrix, p: u32) -> Result<ZqMatrix, AlgebraError> {
    let q = y.q();
    check_pq(p, q)?;
    y.map_to(p, |x| lwr_round(x, q, p).expect("checked") as i64)
}

/// ⌊Y / 2^t⌋ entry-wise, as a matrix over Z_{q/2^t}.
pub fn cut_bits(y: &ZqMatrix, t: u32) -> Result<ZqMatrix, AlgebraError> {
    let q = y.q();
    if !q.is_power_of_two() || t >= q.trailing_zeros() {
        return Err(AlgebraError::Cut { t, q });
    }
    y.map_to(q >> t, |x| (x >> t) as i64)
}

/// 2^t Y′ + 2^{t−1}; t = 0 is the identity.
pub fn uncut(y: &ZqMatrix, t: u32, q: u32) -> Result<ZqMatrix, AlgebraError> {
    if !q.is_power_of_two() || t >= q.trailing_zeros() || (y.q() as u64) << t != q as u64 {
        return Err(AlgebraError::Cut { t, q });
    }
    let half = if t == 0 { 0 } else { 1i64 << (t - 1) };
    y.map_to(q, |x| ((x as i64) << t) + half)
}

/// Scalar forms of cut/uncut.
pub fn cut_scalar(y: u32, t: u32) -> u32 {
    y >> t
}

pub fn uncut_scalar(y: u32, t: u32) -> u32 {
    if t == 0 {
        y
    } else {
        (y << t) + (1 << (t - 1))
    }
}

/// SHAKE-128 stream over tag ‖ seed.
pub fn xof(tag: u8, seed: &[u8; 32]) -> impl XofReader {
    let mut h = Shake128::default();
    h.update(&[tag]);
    h.update(seed);
    h.finalize_xof()
}

/// Reads uniform elements of Z_q from 16-bit little-endian chunks.
/// Powers of two are masked; other moduli use rejection below q·⌊2^16/q⌋.
fn fill_uniform(reader: &mut impl XofReader, q: u32, out: &mut [u16]) {
    let mut buf = [0u8; 2 * 168];
    let mut pos = buf.len();
    let bound = if q.is_power_of_two() { 1u32 << 16 } else { q * ((1 << 16) / q) };
    let mut i = 0;
    while i < out.len() {
        if pos == buf.len() {
            reader.read(&mut buf);
            pos = 0;
        }
        let v = u16::from_le_bytes([buf[pos], buf[pos + 1]]) as u32;
        pos += 2;
        if q.is_power_of_two() {
            out[i] = (v & (q - 1)) as u16;
            i += 1;
        } else if v < bound {
            out[i] = (v % q) as u16;
            i += 1;
        }
    }
}

/// Expands a seed into a uniform rows × cols matrix over Z_q.
pub fn gen_matrix(seed: &[u8; 32], rows: usize, cols: usize, q: u32, tag: u8) -> Result<ZqMatrix, AlgebraError> {
    if q < 2 || q > 1 << 16 {
        return Err(AlgebraError::Modulus(q));
    }
    let mut data = vec![0u16; rows * cols];
    fill_uniform(&mut xof(tag, seed), q, &mut data);
    ZqMatrix::from_vec(rows, cols, q, data)
}

/// Expands a seed into a uniform polynomial of degree < n over Z_q.
pub fn gen_poly(seed: &[u8; 32], n: usize, q: u32, tag: u8) -> Result<RingPoly, AlgebraError> {
    if q < 2 || q > 1 << 16 {
        return Err(AlgebraError::Modulus(q));
    }
    let mut data = vec![0u16; n];
    fill_uniform(&mut xof(tag, seed), q, &mut data);
    Ok(RingPoly {
        coeffs: data.into_iter().map(u32::from).collect(),
        q,
        domain: Domain::Coeff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lwr_round_examples() {
        assert_eq!(lwr_round(0, 16, 4), Ok(0));
        assert_eq!(lwr_round(7, 16, 4), Ok(2));
        assert_eq!(lwr_round((1 << 15) - 1, 1 << 15, 1 << 12), Ok(0));
        assert!(lwr_round(3, 16, 3).is_err());
        assert!(lwr_round(3, 16, 32).is_err());
    }

    #[test]
    fn frac_examples() {
        assert_eq!(frac_part(0, 4, 16), Ok(0));
        assert_eq!(frac_part(7, 4, 16), Ok(-1));
    }

    #[test]
    fn decomposition_exhaustive() {
        let (q, p) = (1u32 << 10, 1u32 << 6);
        for x in 0..q {
            let r = lwr_round(x, q, p).unwrap() as i64;
            let f = frac_part(x as i64, p, q).unwrap();
            assert!((-8..8).contains(&f));
            assert_eq!((16 * r + f).rem_euclid(q as i64), x as i64);
        }
    }

    #[test]
    fn cut_example() {
        assert_eq!(cut_scalar(13, 2), 3);
        assert_eq!(uncut_scalar(3, 2), 14);
        assert_eq!(uncut_scalar(cut_scalar(13, 0), 0), 13);
        let y = ZqMatrix::from_fn(1, 1, 1 << 14, |_, _| 13).unwrap();
        let c = cut_bits(&y, 2).unwrap();
        assert_eq!(c.get(0, 0), 3);
        assert_eq!(c.q(), 1 << 12);
        assert_eq!(uncut(&c, 2, 1 << 14).unwrap().get(0, 0), 14);
    }

    #[test]
    fn cut_error_range_exhaustive() {
        for t in 1..=3u32 {
            let lo = -(1i64 << (t - 1));
            let hi = 1i64 << (t - 1);
            for y in 0..1u32 << 10 {
                let eps = uncut_scalar(cut_scalar(y, t), t) as i64 - y as i64;
                assert!(lo < eps && eps <= hi);
            }
        }
    }

    #[test]
    fn gen_is_deterministic_and_tagged() {
        let seed = [7u8; 32];
        let a = gen_matrix(&seed, 4, 5, 1 << 15, 0).unwrap();
        assert_eq!(a, gen_matrix(&seed, 4, 5, 1 << 15, 0).unwrap());
        assert_ne!(a, gen_matrix(&seed, 4, 5, 1 << 15, 1).unwrap());
        let p = gen_poly(&seed, 512, 12289, 0).unwrap();
        assert!(p.coeffs.iter().all(|&c| c < 12289));
    }
}
