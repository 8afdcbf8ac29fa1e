//! Key exchange over RLWE in Z_q[x]/(x^n + 1).
//!
//! Message 2 is y2 ‖ hints ‖ (OKCN with SEC only) one n_H + 1 bit coset
//! word per block. Hints are sent for all n coefficients, including those
//! left over after the last SEC block.

use crate::common::*;
use crate::key::ConsensusKey;
use crate::suite::{Family, ProtocolSuite, Reconciliation};
use crate::{wire, ProtocolError};
use kcx_core::algebra::{gen_poly, NttTables, RingPoly};
use kcx_core::codes::d4::{akcn41_con, akcn41_rec, newhope_con, newhope_rec};
use kcx_core::codes::e8::{e8_con, e8_rec};
use kcx_core::codes::sec::{word_to_bits, SecCode};
use kcx_core::kc::{akc_con, akc_rec, kc_con, kc_rec};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Initiator {
    suite: ProtocolSuite,
    x1_hat: RingPoly,
    tables: NttTables,
}

/// Coefficient indices of D̃4 group i: (i, i + n/4, i + n/2, i + 3n/4).
pub fn d4_group(n: usize, i: usize) -> [usize; 4] {
    std::array::from_fn(|j| i + j * n / 4)
}

/// Coefficient indices of E8 group k: k + j·n/8 for j < 8.
pub fn e8_group(n: usize, k: usize) -> [usize; 8] {
    std::array::from_fn(|j| k + j * n / 8)
}

/// Widths of the hint fields, in transmission order.
pub fn hint_widths(s: &ProtocolSuite) -> Vec<u32> {
    let n = s.n;
    match s.rec {
        Reconciliation::Kc { params, .. } | Reconciliation::Sec { params, .. } => {
            vec![wire::width(params.g); n]
        }
        Reconciliation::Akcn41 { g } => {
            let w = wire::width(g);
            (0..n / 4).flat_map(|_| [w, w, w, w + 1]).collect()
        }
        Reconciliation::NewHope { r } => vec![r; n],
        Reconciliation::E8 { g } => vec![wire::width(g); n],
    }
}

/// Coset words carried by OKCN with SEC: (count, bits each).
pub fn coset_fields(s: &ProtocolSuite) -> (usize, u32) {
    match s.rec {
        Reconciliation::Sec { variant, n_h, .. } if !variant.is_akc() => {
            let block = (1usize << n_h) + n_h as usize;
            (s.n / block, n_h + 1)
        }
        _ => (0, 0),
    }
}

pub fn msg1_len(s: &ProtocolSuite) -> usize {
    SEED_BYTES + wire::packed_len(s.n, wire::width(s.q))
}

pub fn msg2_lens(s: &ProtocolSuite) -> [usize; 3] {
    let hint_bits: u32 = hint_widths(s).iter().sum();
    let (count, bits) = coset_fields(s);
    [
        wire::packed_len(s.n, wire::width(s.q)),
        (hint_bits as usize).div_ceil(8),
        wire::packed_len(count, bits),
    ]
}

fn pack_poly(p: &RingPoly) -> Vec<u8> {
    wire::pack(p.coeffs.iter().copied(), wire::width(p.q))
}

fn unpack_poly(data: &[u8], n: usize, q: u32) -> Result<RingPoly, ProtocolError> {
    let c = wire::unpack(data, n, wire::width(q));
    if let Some(&x) = c.iter().find(|&&x| x >= q) {
        return Err(ProtocolError::InvalidSuite(format!("coefficient {x} >= q = {q}")));
    }
    Ok(RingPoly::from_coeffs(c.into_iter().map(i64::from).collect(), q))
}

fn sample_poly<R: Rng + ?Sized>(s: &ProtocolSuite, rng: &mut R) -> RingPoly {
    RingPoly::from_coeffs(sample_vec(&s.noise.sampler(), s.n, rng), s.q)
}

pub fn initiate<R: Rng + ?Sized>(suite: &ProtocolSuite, rng: &mut R) -> Result<(Initiator, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Rlwe)?;
    check_suite(suite)?;
    let tables = NttTables::new(suite.n, suite.q)?;
    let seed: [u8; SEED_BYTES] = rng.gen();
    let a_hat = gen_poly(&seed, suite.n, suite.q, TAG_RING)?.to_ntt(&tables)?;
    let x1_hat = sample_poly(suite, rng).to_ntt(&tables)?;
    let e1 = sample_poly(suite, rng);
    let y1 = a_hat.pointwise(&x1_hat)?.from_ntt(&tables)?.add(&e1)?;
    let mut msg = seed.to_vec();
    msg.extend(pack_poly(&y1));
    Ok((Initiator { suite: suite.clone(), x1_hat, tables }, msg))
}

/// Random or caller-supplied key bits for the asymmetric modes.
fn key_bits<R: Rng + ?Sized>(len: usize, supplied: Option<&ConsensusKey>, rng: &mut R) -> Result<Vec<u8>, ProtocolError> {
    match supplied {
        Some(k) if k.len() != len => Err(ProtocolError::KeyLength { expected: len, got: k.len() }),
        Some(k) => Ok(k.bits.clone()),
        None => Ok(ConsensusKey::random(len, rng).bits),
    }
}

fn bits_word(bits: &[u8]) -> u64 {
    bits.iter().enumerate().fold(0, |w, (i, &b)| w | ((b as u64 & 1) << i))
}

pub fn respond<R: Rng + ?Sized>(
    suite: &ProtocolSuite,
    msg1: &[u8],
    k2: Option<&ConsensusKey>,
    rng: &mut R,
) -> Result<(ConsensusKey, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Rlwe)?;
    check_suite(suite)?;
    let (n, q) = (suite.n, suite.q);
    let tables = NttTables::new(n, q)?;
    let parts = wire::split("message 1", msg1, &[SEED_BYTES, msg1_len(suite) - SEED_BYTES])?;
    let seed = seed_of(parts[0]);
    let y1_hat = unpack_poly(parts[1], n, q)?.to_ntt(&tables)?;
    let a_hat = gen_poly(&seed, n, q, TAG_RING)?.to_ntt(&tables)?;
    let x2_hat = sample_poly(suite, rng).to_ntt(&tables)?;
    let e2 = sample_poly(suite, rng);
    let e_sigma = sample_poly(suite, rng);
    let y2 = a_hat.pointwise(&x2_hat)?.from_ntt(&tables)?.add(&e2)?;
    let sigma2 = y1_hat.pointwise(&x2_hat)?.from_ntt(&tables)?.add(&e_sigma)?.coeffs;

    let mut hints = vec![0u32; hint_widths(suite).len()];
    let mut cosets = Vec::new();
    let key = match suite.rec {
        Reconciliation::Kc { variant, params } => {
            let (k, v) = con_all(variant, &params, &sigma2, k2, rng)?;
            hints = v;
            ConsensusKey::from_symbols(&k, params.m)
        }
        Reconciliation::Sec { variant, params, n_h } => {
            let code = SecCode::new(n_h)?;
            let (bl, ml) = (code.block_len() as usize, code.msg_len() as usize);
            let blocks = n / bl;
            let mut out = Vec::with_capacity(blocks * ml);
            if variant.is_akc() {
                let msg = key_bits(blocks * ml, k2, rng)?;
                let mut sym = vec![0u32; n];
                for b in 0..blocks {
                    let cw = code.encode_word(bits_word(&msg[b * ml..(b + 1) * ml]));
                    for (i, s) in sym[b * bl..(b + 1) * bl].iter_mut().enumerate() {
                        *s = ((cw >> i) & 1) as u32;
                    }
                }
                for (h, (&s, &k)) in hints.iter_mut().zip(sigma2.iter().zip(&sym)) {
                    *h = akc_con(variant, s as i64, k as i64, &params)?;
                }
                out = msg;
            } else {
                if k2.is_some() {
                    return Err(ProtocolError::NotAsymmetric);
                }
                let mut k = vec![0u32; n];
                for i in 0..n {
                    let c = kc_con(variant, sigma2[i] as i64, &params, rng)?;
                    k[i] = c.k1;
                    hints[i] = c.v;
                }
                for b in 0..blocks {
                    let word = k[b * bl..(b + 1) * bl]
                        .iter()
                        .enumerate()
                        .fold(0u64, |w, (i, &x)| w | ((x as u64) << i));
                    let (x, coset) = code.kc_wrap(word);
                    out.extend(word_to_bits(x, ml as u32));
                    cosets.push(coset);
                }
            }
            ConsensusKey { bits: out }
        }
        Reconciliation::Akcn41 { g } => {
            let bits = key_bits(n / 4, k2, rng)?;
            for (i, &bit) in bits.iter().enumerate() {
                let idx = d4_group(n, i);
                let v = akcn41_con(idx.map(|c| sigma2[c]), bit, q, g);
                hints[4 * i..4 * i + 4].copy_from_slice(&v);
            }
            ConsensusKey { bits }
        }
        Reconciliation::NewHope { r } => {
            if k2.is_some() {
                return Err(ProtocolError::NotAsymmetric);
            }
            let mut bits = Vec::with_capacity(n / 4);
            for i in 0..n / 4 {
                let (b, v) = newhope_con(d4_group(n, i).map(|c| sigma2[c]), q, r, rng);
                hints[4 * i..4 * i + 4].copy_from_slice(&v);
                bits.push(b);
            }
            ConsensusKey { bits }
        }
        Reconciliation::E8 { g } => {
            let bits = key_bits(n / 2, k2, rng)?;
            for k in 0..n / 8 {
                let msg: [u8; 4] = bits[4 * k..4 * k + 4].try_into().expect("4 bits");
                let v = e8_con(e8_group(n, k).map(|c| sigma2[c]), msg, q, g);
                hints[8 * k..8 * k + 8].copy_from_slice(&v);
            }
            ConsensusKey { bits }
        }
    };

    let mut msg = pack_poly(&y2);
    msg.extend(wire::pack_fields(hints.into_iter().zip(hint_widths(suite))));
    let (_, coset_bits) = coset_fields(suite);
    msg.extend(wire::pack(cosets, coset_bits));
    Ok((key, msg))
}

impl Initiator {
    pub fn suite(&self) -> &ProtocolSuite {
        &self.suite
    }

    pub fn finish(&self, msg2: &[u8]) -> Result<ConsensusKey, ProtocolError> {
        let s = &self.suite;
        let (n, q) = (s.n, s.q);
        let parts = wire::split("message 2", msg2, &msg2_lens(s))?;
        let y2_hat = unpack_poly(parts[0], n, q)?.to_ntt(&self.tables)?;
        let sigma1 = y2_hat.pointwise(&self.x1_hat)?.from_ntt(&self.tables)?.coeffs;
        let hints = wire::unpack_fields(parts[1], hint_widths(s));

        let key = match s.rec {
            Reconciliation::Kc { variant, params } => {
                ConsensusKey::from_symbols(&rec_all(variant, &params, &sigma1, &hints)?, params.m)
            }
            Reconciliation::Sec { variant, params, n_h } => {
                let code = SecCode::new(n_h)?;
                let (bl, ml) = (code.block_len() as usize, code.msg_len() as usize);
                let blocks = n / bl;
                let (count, cb) = coset_fields(s);
                let cosets = wire::unpack(parts[2], count, cb);
                let mut out = Vec::with_capacity(blocks * ml);
                for b in 0..blocks {
                    let mut word = 0u64;
                    for i in 0..bl {
                        let c = b * bl + i;
                        let k = if variant.is_akc() {
                            akc_rec(variant, sigma1[c] as i64, hints[c] as i64, &params)?
                        } else {
                            kc_rec(variant, sigma1[c] as i64, hints[c] as i64, &params)?
                        };
                        word |= (k as u64) << i;
                    }
                    let x = if variant.is_akc() {
                        code.decode_word(word)
                    } else {
                        code.kc_unwrap(word, cosets[b])
                    };
                    out.extend(word_to_bits(x, ml as u32));
                }
                ConsensusKey { bits: out }
            }
            Reconciliation::Akcn41 { g } => ConsensusKey {
                bits: (0..n / 4)
                    .map(|i| {
                        let v = hints[4 * i..4 * i + 4].try_into().expect("4 hints");
                        akcn41_rec(d4_group(n, i).map(|c| sigma1[c]), v, q, g)
                    })
                    .collect(),
            },
            Reconciliation::NewHope { r } => ConsensusKey {
                bits: (0..n / 4)
                    .map(|i| {
                        let v = hints[4 * i..4 * i + 4].try_into().expect("4 hints");
                        newhope_rec(d4_group(n, i).map(|c| sigma1[c]), v, q, r)
                    })
                    .collect(),
            },
            Reconciliation::E8 { g } => ConsensusKey {
                bits: (0..n / 8)
                    .flat_map(|k| {
                        let v = hints[8 * k..8 * k + 8].try_into().expect("8 hints");
                        e8_rec(e8_group(n, k).map(|c| sigma1[c]), v, q, g)
                    })
                    .collect(),
            },
        };
        Ok(key)
    }
}

/// σ2 − σ1 = e1·x2 − e2·x1 + e_σ for one honest execution, centered.
pub fn noise_difference<R: Rng + ?Sized>(suite: &ProtocolSuite, rng: &mut R) -> Result<Vec<i64>, ProtocolError> {
    expect_family(suite, Family::Rlwe)?;
    let tables = NttTables::new(suite.n, suite.q)?;
    let seed: [u8; SEED_BYTES] = rng.gen();
    let a_hat = gen_poly(&seed, suite.n, suite.q, TAG_RING)?.to_ntt(&tables)?;
    let x1_hat = sample_poly(suite, rng).to_ntt(&tables)?;
    let y1 = a_hat.pointwise(&x1_hat)?.from_ntt(&tables)?.add(&sample_poly(suite, rng))?;
    let x2_hat = sample_poly(suite, rng).to_ntt(&tables)?;
    let y2 = a_hat.pointwise(&x2_hat)?.from_ntt(&tables)?.add(&sample_poly(suite, rng))?;
    let sigma2 = y1.to_ntt(&tables)?.pointwise(&x2_hat)?.from_ntt(&tables)?.add(&sample_poly(suite, rng))?;
    let sigma1 = y2.to_ntt(&tables)?.pointwise(&x1_hat)?.from_ntt(&tables)?;
    let q = suite.q as i64;
    Ok(sigma2
        .coeffs
        .iter()
        .zip(&sigma1.coeffs)
        .map(|(&a, &b)| {
            let d = (a as i64 - b as i64).rem_euclid(q);
            if d > q / 2 {
                d - q
            } else {
                d
            }
        })
        .collect())
}
