//! Sampling and per-coordinate reconciliation shared by the families.

use crate::key::ConsensusKey;
use crate::suite::{Family, ProtocolSuite, Reconciliation};
use crate::{wire, ProtocolError};
use kcx_core::algebra::ZqMatrix;
use kcx_core::kc::{akc_con, akc_rec, kc_con, kc_rec, KcParams, KcVariant};
use kcx_core::noise::Sampler;
use rand::Rng;

pub const SEED_BYTES: usize = 32;
pub const TAG_MATRIX: u8 = 0;
pub const TAG_RING: u8 = 1;

pub fn expect_family(suite: &ProtocolSuite, family: Family) -> Result<(), ProtocolError> {
    if suite.family != family {
        return Err(ProtocolError::Family { suite: suite.name.clone(), expected: family.name() });
    }
    Ok(())
}

pub fn sample_matrix<R: Rng + ?Sized>(
    s: &Sampler,
    rows: usize,
    cols: usize,
    q: u32,
    rng: &mut R,
) -> Result<ZqMatrix, ProtocolError> {
    Ok(ZqMatrix::from_fn(rows, cols, q, |_, _| s.sample(rng))?)
}

pub fn sample_vec<R: Rng + ?Sized>(s: &Sampler, n: usize, rng: &mut R) -> Vec<i64> {
    (0..n).map(|_| s.sample(rng)).collect()
}

pub fn pack_matrix(m: &ZqMatrix) -> Vec<u8> {
    wire::pack(m.data().iter().map(|&x| x as u32), wire::width(m.q()))
}

pub fn unpack_matrix(data: &[u8], rows: usize, cols: usize, q: u32) -> Result<ZqMatrix, ProtocolError> {
    let vals = wire::unpack(data, rows * cols, wire::width(q));
    Ok(ZqMatrix::from_fn(rows, cols, q, |i, j| vals[i * cols + j] as i64)?)
}

pub fn seed_of(bytes: &[u8]) -> [u8; SEED_BYTES] {
    bytes.try_into().expect("split to seed length")
}

/// The responder's key symbols: sampled, or taken from the caller for AKC.
pub fn responder_symbols<R: Rng + ?Sized>(
    variant: KcVariant,
    p: &KcParams,
    count: usize,
    supplied: Option<&ConsensusKey>,
    rng: &mut R,
) -> Result<Option<Vec<u32>>, ProtocolError> {
    let width = p.m.trailing_zeros() as usize;
    match (variant.is_akc(), supplied) {
        (false, Some(_)) => Err(ProtocolError::NotAsymmetric),
        (false, None) => Ok(None),
        (true, Some(k)) => {
            if k.len() != count * width {
                return Err(ProtocolError::KeyLength { expected: count * width, got: k.len() });
            }
            Ok(Some(k.to_symbols(p.m)))
        }
        (true, None) => Ok(Some((0..count).map(|_| rng.gen_range(0..p.m)).collect())),
    }
}

/// Con over every coordinate: returns (key symbols, hints).
pub fn con_all<R: Rng + ?Sized>(
    variant: KcVariant,
    p: &KcParams,
    sigma: &[u32],
    supplied: Option<&ConsensusKey>,
    rng: &mut R,
) -> Result<(Vec<u32>, Vec<u32>), ProtocolError> {
    match responder_symbols(variant, p, sigma.len(), supplied, rng)? {
        Some(k) => {
            let v = sigma
                .iter()
                .zip(&k)
                .map(|(&s, &k)| akc_con(variant, s as i64, k as i64, p))
                .collect::<Result<_, _>>()?;
            Ok((k, v))
        }
        None => {
            let mut k = Vec::with_capacity(sigma.len());
            let mut v = Vec::with_capacity(sigma.len());
            for &s in sigma {
                let c = kc_con(variant, s as i64, p, rng)?;
                k.push(c.k1);
                v.push(c.v);
            }
            Ok((k, v))
        }
    }
}

pub fn rec_all(variant: KcVariant, p: &KcParams, sigma: &[u32], v: &[u32]) -> Result<Vec<u32>, ProtocolError> {
    sigma
        .iter()
        .zip(v)
        .map(|(&s, &v)| {
            Ok(if variant.is_akc() {
                akc_rec(variant, s as i64, v as i64, p)?
            } else {
                kc_rec(variant, s as i64, v as i64, p)?
            })
        })
        .collect()
}

/// Matrix families reconcile coordinate by coordinate.
pub fn matrix_kc(suite: &ProtocolSuite) -> (KcVariant, KcParams) {
    match suite.rec {
        Reconciliation::Kc { variant, params } => (variant, params),
        _ => unreachable!("validated suite"),
    }
}

pub fn check_suite(suite: &ProtocolSuite) -> Result<(), ProtocolError> {
    suite.validate().map_err(|e| ProtocolError::InvalidSuite(format!("{}: {e}", suite.name)))
}
