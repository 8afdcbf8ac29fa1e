//! Family-independent entry points over the suite registry.

use crate::key::ConsensusKey;
use crate::suite::{Family, ProtocolSuite};
use crate::{hybrid, lwe, lwr, rlwe, ProtocolError};
use rand::Rng;

#[derive(Debug, Clone)]
pub enum Initiator {
    Lwr(lwr::Initiator),
    Lwe(lwe::Initiator),
    Hybrid(hybrid::SecretKey),
    Rlwe(rlwe::Initiator),
}

impl Initiator {
    pub fn suite(&self) -> &ProtocolSuite {
        match self {
            Initiator::Lwr(s) => s.suite(),
            Initiator::Lwe(s) => s.suite(),
            Initiator::Hybrid(s) => s.suite(),
            Initiator::Rlwe(s) => s.suite(),
        }
    }
}

/// First message (the public key for the hybrid family).
pub fn initiate<R: Rng + ?Sized>(suite: &ProtocolSuite, rng: &mut R) -> Result<(Initiator, Vec<u8>), ProtocolError> {
    Ok(match suite.family {
        Family::Lwr => {
            let (s, m) = lwr::initiate(suite, rng)?;
            (Initiator::Lwr(s), m)
        }
        Family::Lwe => {
            let (s, m) = lwe::initiate(suite, rng)?;
            (Initiator::Lwe(s), m)
        }
        Family::Hybrid => {
            let (s, m) = hybrid::keygen(suite, rng)?;
            (Initiator::Hybrid(s), m)
        }
        Family::Rlwe => {
            let (s, m) = rlwe::initiate(suite, rng)?;
            (Initiator::Rlwe(s), m)
        }
    })
}

fn respond_inner<R: Rng + ?Sized>(
    suite: &ProtocolSuite,
    msg1: &[u8],
    k2: Option<&ConsensusKey>,
    rng: &mut R,
) -> Result<(ConsensusKey, Vec<u8>), ProtocolError> {
    match suite.family {
        Family::Lwr => lwr::respond(suite, msg1, k2, rng),
        Family::Lwe => lwe::respond(suite, msg1, k2, rng),
        Family::Hybrid => hybrid::encaps(suite, msg1, k2, rng),
        Family::Rlwe => rlwe::respond(suite, msg1, k2, rng),
    }
}

/// Responder's key and second message.
pub fn respond<R: Rng + ?Sized>(
    suite: &ProtocolSuite,
    msg1: &[u8],
    rng: &mut R,
) -> Result<(ConsensusKey, Vec<u8>), ProtocolError> {
    respond_inner(suite, msg1, None, rng)
}

/// As `respond`, transporting a caller-chosen key; asymmetric schemes only.
pub fn respond_with_key<R: Rng + ?Sized>(
    suite: &ProtocolSuite,
    msg1: &[u8],
    key: &ConsensusKey,
    rng: &mut R,
) -> Result<(ConsensusKey, Vec<u8>), ProtocolError> {
    respond_inner(suite, msg1, Some(key), rng)
}

pub fn finish(init: &Initiator, msg2: &[u8]) -> Result<ConsensusKey, ProtocolError> {
    match init {
        Initiator::Lwr(s) => s.finish(msg2),
        Initiator::Lwe(s) => s.finish(msg2),
        Initiator::Hybrid(s) => s.decaps(msg2),
        Initiator::Rlwe(s) => s.finish(msg2),
    }
}
