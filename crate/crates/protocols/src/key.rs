use crate::wire;

/// Consensus bits, one 0/1 entry per bit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ConsensusKey {
    pub bits: Vec<u8>,
}

impl ConsensusKey {
    pub fn zeros(len: usize) -> Self {
        ConsensusKey { bits: vec![0; len] }
    }

    /// Expands symbols of Z_m (m a power of two) into bits, LSB first.
    pub fn from_symbols(symbols: &[u32], m: u32) -> Self {
        let w = m.trailing_zeros();
        ConsensusKey {
            bits: symbols
                .iter()
                .flat_map(|&s| (0..w).map(move |i| ((s >> i) & 1) as u8))
                .collect(),
        }
    }

    pub fn to_symbols(&self, m: u32) -> Vec<u32> {
        let w = m.trailing_zeros() as usize;
        self.bits
            .chunks(w)
            .map(|c| c.iter().enumerate().fold(0u32, |acc, (i, &b)| acc | ((b as u32) << i)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        wire::pack(self.bits.iter().map(|&b| b as u32), 1)
    }

    pub fn random<R: rand::Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        ConsensusKey { bits: (0..len).map(|_| rng.gen::<bool>() as u8).collect() }
    }

    /// Number of positions where the two keys differ.
    pub fn hamming(&self, other: &Self) -> usize {
        self.bits.iter().zip(&other.bits).filter(|(a, b)| a != b).count()
            + self.bits.len().abs_diff(other.bits.len())
    }
}
