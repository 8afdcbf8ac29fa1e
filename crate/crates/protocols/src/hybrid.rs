//! Public-key exchange with an LWE public key and an LWR ciphertext.
//! A is n_B × n_A; the public key is (seed, Y1 = A·X1 + E1).

use crate::common::*;
use crate::key::ConsensusKey;
use crate::suite::{Family, ProtocolSuite};
use crate::{wire, ProtocolError};
use kcx_core::algebra::{gen_matrix, lwr_round_matrix, ZqMatrix};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct SecretKey {
    suite: ProtocolSuite,
    x1: ZqMatrix,
}

pub fn pk_len(s: &ProtocolSuite) -> usize {
    SEED_BYTES + wire::packed_len(s.n_b * s.l_a, wire::width(s.q))
}

pub fn ct_lens(s: &ProtocolSuite) -> [usize; 2] {
    [
        wire::packed_len(s.n * s.l_b, wire::width(s.p)),
        wire::packed_len(s.l_a * s.l_b, wire::width(s.rec.g())),
    ]
}

pub fn keygen<R: Rng + ?Sized>(suite: &ProtocolSuite, rng: &mut R) -> Result<(SecretKey, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Hybrid)?;
    check_suite(suite)?;
    let seed: [u8; SEED_BYTES] = rng.gen();
    let a = gen_matrix(&seed, suite.n_b, suite.n, suite.q, TAG_MATRIX)?;
    let chi = suite.noise.sampler();
    let x1 = sample_matrix(&chi, suite.n, suite.l_a, suite.q, rng)?;
    let e1 = sample_matrix(&chi, suite.n_b, suite.l_a, suite.q, rng)?;
    let y1 = a.matmul(&x1)?.add(&e1)?;
    let mut pk = seed.to_vec();
    pk.extend(pack_matrix(&y1));
    Ok((SecretKey { suite: suite.clone(), x1 }, pk))
}

/// Encapsulates `k2` if given, otherwise a fresh random key.
pub fn encaps<R: Rng + ?Sized>(
    suite: &ProtocolSuite,
    pk: &[u8],
    k2: Option<&ConsensusKey>,
    rng: &mut R,
) -> Result<(ConsensusKey, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Hybrid)?;
    check_suite(suite)?;
    let (q, p) = (suite.q, suite.p);
    let parts = wire::split("public key", pk, &[SEED_BYTES, pk_len(suite) - SEED_BYTES])?;
    let seed = seed_of(parts[0]);
    let y1 = unpack_matrix(parts[1], suite.n_b, suite.l_a, q)?;
    let a = gen_matrix(&seed, suite.n_b, suite.n, q, TAG_MATRIX)?;
    let x2 = sample_matrix(&suite.noise.sampler(), suite.n_b, suite.l_b, q, rng)?;
    let y2 = lwr_round_matrix(&a.transpose_mul(&x2)?, p)?;
    let sigma2 = lwr_round_matrix(&y1.transpose_mul(&x2)?, p)?;

    let (variant, params) = matrix_kc(suite);
    let sigma: Vec<u32> = sigma2.data().iter().map(|&x| x as u32).collect();
    let (k, v) = con_all(variant, &params, &sigma, k2, rng)?;
    let mut ct = pack_matrix(&y2);
    ct.extend(wire::pack(v, wire::width(params.g)));
    Ok((ConsensusKey::from_symbols(&k, params.m), ct))
}

impl SecretKey {
    pub fn suite(&self) -> &ProtocolSuite {
        &self.suite
    }

    pub fn decaps(&self, ct: &[u8]) -> Result<ConsensusKey, ProtocolError> {
        let s = &self.suite;
        let parts = wire::split("ciphertext", ct, &ct_lens(s))?;
        let y2 = unpack_matrix(parts[0], s.n, s.l_b, s.p)?;
        let (variant, params) = matrix_kc(s);
        let v = wire::unpack(parts[1], s.l_a * s.l_b, wire::width(params.g));
        let x1p = self.x1.map_to(s.p, |x| x as i64)?;
        let sigma1: Vec<u32> = x1p.transpose_mul(&y2)?.data().iter().map(|&x| x as u32).collect();
        let k = rec_all(variant, &params, &sigma1, &v)?;
        Ok(ConsensusKey::from_symbols(&k, params.m))
    }
}
