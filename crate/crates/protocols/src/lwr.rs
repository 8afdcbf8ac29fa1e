//! Key exchange over LWR: both public values are rounded from Z_q to Z_p.

use crate::common::*;
use crate::key::ConsensusKey;
use crate::suite::{Family, ProtocolSuite};
use crate::{wire, ProtocolError};
use kcx_core::algebra::{gen_matrix, lwr_round_matrix, ZqMatrix};
use rand::Rng;

/// Initiator state between the two messages. Never serialized.
#[derive(Debug, Clone)]
pub struct Initiator {
    suite: ProtocolSuite,
    x1: ZqMatrix,
}

pub fn msg1_len(s: &ProtocolSuite) -> usize {
    SEED_BYTES + wire::packed_len(s.n * s.l_a, wire::width(s.p))
}

pub fn msg2_lens(s: &ProtocolSuite) -> [usize; 2] {
    [
        wire::packed_len(s.n * s.l_b, wire::width(s.p)),
        wire::packed_len(s.l_a * s.l_b, wire::width(s.rec.g())),
    ]
}

pub fn initiate<R: Rng + ?Sized>(suite: &ProtocolSuite, rng: &mut R) -> Result<(Initiator, Vec<u8>), ProtocolError> {
    expect_family(suite, Family::Lwr)?;
    check_suite(suite)?;
    let seed: [u8; SEED_BYTES] = rng.gen();
    let a = gen_matrix(&seed, suite.n, suite.n, suite.q, TAG_MATRIX)?;
    let x1 = sample_matrix(&suite.noise.sampler(), suite.n, suite.l_a, suite.q, rng)?;
    let y1 = lwr_round_matrix(&a.matmul(&x1)?, suite.p)?;
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
    expect_family(suite, Family::Lwr)?;
    check_suite(suite)?;
    let (n, q, p) = (suite.n, suite.q, suite.p);
    let parts = wire::split("message 1", msg1, &[SEED_BYTES, msg1_len(suite) - SEED_BYTES])?;
    let seed = seed_of(parts[0]);
    let y1 = unpack_matrix(parts[1], n, suite.l_a, p)?;
    let a = gen_matrix(&seed, n, n, q, TAG_MATRIX)?;
    let x2 = sample_matrix(&suite.noise.sampler(), n, suite.l_b, q, rng)?;
    let y2 = lwr_round_matrix(&a.transpose_mul(&x2)?, p)?;

    // (q/p)·Y1 + ε with ε uniform on [−q/2p, q/2p − 1].
    let r = (q / p) as i64;
    let lifted = ZqMatrix::from_fn(n, suite.l_a, q, |i, j| {
        let eps = if r > 1 { rng.gen_range(-r / 2..r / 2) } else { 0 };
        r * y1.get(i, j) as i64 + eps
    })?;
    let sigma2 = lwr_round_matrix(&lifted.transpose_mul(&x2)?, p)?;

    let (variant, params) = matrix_kc(suite);
    let sigma: Vec<u32> = sigma2.data().iter().map(|&x| x as u32).collect();
    let (k, v) = con_all(variant, &params, &sigma, k2, rng)?;
    let mut msg = pack_matrix(&y2);
    msg.extend(wire::pack(v, wire::width(params.g)));
    Ok((ConsensusKey::from_symbols(&k, params.m), msg))
}

impl Initiator {
    pub fn suite(&self) -> &ProtocolSuite {
        &self.suite
    }

    pub fn finish(&self, msg2: &[u8]) -> Result<ConsensusKey, ProtocolError> {
        let s = &self.suite;
        let lens = msg2_lens(s);
        let parts = wire::split("message 2", msg2, &lens)?;
        let y2 = unpack_matrix(parts[0], s.n, s.l_b, s.p)?;
        let (variant, params) = matrix_kc(s);
        let v = wire::unpack(parts[1], s.l_a * s.l_b, wire::width(params.g));
        let x1p = self.x1.map_to(s.p, |x| x as i64)?;
        let sigma1: Vec<u32> = x1p.transpose_mul(&y2)?.data().iter().map(|&x| x as u32).collect();
        let k = rec_all(variant, &params, &sigma1, &v)?;
        Ok(ConsensusKey::from_symbols(&k, params.m))
    }
}
