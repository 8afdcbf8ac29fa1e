use crate::key::ConsensusKey;
use sha3::digest::{ExtendableOutput, Update, XofReader};
use sha3::Shake256;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kdf {
    /// SHAKE-256(suite id ‖ 0x00 ‖ packed bits), 32 bytes out.
    Shake256,
    /// The packed consensus bits themselves.
    Identity,
}

pub fn derive_key(suite_id: &str, key: &ConsensusKey, kdf: Kdf) -> Vec<u8> {
    match kdf {
        Kdf::Identity => key.to_bytes(),
        Kdf::Shake256 => {
            let mut h = Shake256::default();
            h.update(suite_id.as_bytes());
            h.update(&[0]);
            h.update(&key.to_bytes());
            let mut out = vec![0u8; 32];
            h.finalize_xof().read(&mut out);
            out
        }
    }
}
