//! Key exchange over LWE, optionally cutting the t low bits of Y2.

use crate::common::*;
use crate::key::ConsensusKey;
use crate::suite::{Family, ProtocolSuite};
use crate::{wire, ProtocolError};
use kcx_core::algebra::{cut_bits, gen_matrix, uncut, ZqMatrix};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct Initiator {
    suite: ProtocolSuite,
    x1: ZqMatrix,
}

pub fn msg1_len(s: &ProtocolSuite) -> usize {
    SEED_BYTES + wire::packed_len(s.n * s.l_a, wire::width(s.q))
}

pub fn msg2_lens(s: &ProtocolSuite) -> [usize; 2] {
    [
        wire::packed_len(s.n * s.l_b, wire::width(s.q) - s.t),
        wire::packed_len(s.l_a * s.l_b, wire::width(s.rec.g())),
    ]
}

pub fn initiate<R: Rng + ?Sized>(suite: &ProtocolSuite, rng: &mut R) -> Result<(Initiator, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Lwe)?;
    check_suite(suite)?;
    let seed: [u8; SEED_BYTES] = rng.gen();
    let a = gen_matrix(&seed, suite.n, suite.n, suite.q, TAG_MATRIX)?;
    let chi = suite.noise.sampler();
    let x1 = sample_matrix(&chi, suite.n, suite.l_a, suite.q, rng)?;
    let e1 = sample_matrix(&chi, suite.n, suite.l_a, suite.q, rng)?;
    let y1 = a.matmul(&x1)?.add(&e1)?;
    let mut msg = seed.to_vec();
    msg.extend(pack_matrix(&y1));
    Ok((Initiator { suite: suite.clone(), x1 }, msg))
}

pub fn respond<R: Rng + ?Sized>(
    suite: &ProtocolSuite,
    msg1: &[u8],
    k2: Option<&ConsensusKey>,
    rng: &mut R,
) -> Result<(ConsensusKey, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Lwe)?;
    check_suite(suite)?;
    let (n, q) = (suite.n, suite.q);
    let parts = wire::split("message 1", msg1, &[SEED_BYTES, msg1_len(suite) - SEED_BYTES])?;
    let seed = seed_of(parts[0]);
    let y1 = unpack_matrix(parts[1], n, suite.l_a, q)?;
    let a = gen_matrix(&seed, n, n, q, TAG_MATRIX)?;
    let chi = suite.noise.sampler();
    let x2 = sample_matrix(&chi, n, suite.l_b, q, rng)?;
    let e2 = sample_matrix(&chi, n, suite.l_b, q, rng)?;
    let y2 = a.transpose_mul(&x2)?.add(&e2)?;
    let e_sigma = sample_matrix(&chi, suite.l_a, suite.l_b, q, rng)?;
    let sigma2 = y1.transpose_mul(&x2)?.add(&e_sigma)?;

    let (variant, params) = matrix_kc(suite);
    let sigma: Vec<u32> = sigma2.data().iter().map(|&x| x as u32).collect();
    let (k, v) = con_all(variant, &params, &sigma, k2, rng)?;
    let sent = if suite.t == 0 { y2 } else { cut_bits(&y2, suite.t)? };
    let mut msg = pack_matrix(&sent);
    msg.extend(wire::pack(v, wire::width(params.g)));
    Ok((ConsensusKey::from_symbols(&k, params.m), msg))
}

impl Initiator {
    pub fn suite(&self) -> &ProtocolSuite {
        &self.suite
    }

    pub fn finish(&self, msg2: &[u8]) -> Result<ConsensusKey, ProtocolError> {
        let s = &self.suite;
        let parts = wire::split("message 2", msg2, &msg2_lens(s))?;
        let y2 = if s.t == 0 {
            unpack_matrix(parts[0], s.n, s.l_b, s.q)?
        } else {
            uncut(&unpack_matrix(parts[0], s.n, s.l_b, s.q >> s.t)?, s.t, s.q)?
        };
        let (variant, params) = matrix_kc(s);
        let v = wire::unpack(parts[1], s.l_a * s.l_b, wire::width(params.g));
        let sigma1: Vec<u32> = self.x1.transpose_mul(&y2)?.data().iter().map(|&x| x as u32).collect();
        let k = rec_all(variant, &params, &sigma1, &v)?;
        Ok(ConsensusKey::from_symbols(&k, params.m))
    }
}
