//! Single-error-correcting code over blocks of N_H + n_H bits.
//!
//! Codeword words pack x0 at bit 0, x_i at bit i (1 <= i < N_H), and
//! p_j at bit N_H + j - 1, so the parity word p̄ sits above the message.

use super::CodeError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SecCode {
    n_h: u32,
    masks: [u64; 5],
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SecCodeword {
    pub x0: u8,
    pub x: Vec<u8>,
    pub p: Vec<u8>,
}

impl SecCode {
    pub const MAX_NH: u32 = 5;

    pub fn new(n_h: u32) -> Result<Self, CodeError> {
        if !(2..=Self::MAX_NH).contains(&n_h) {
            return Err(CodeError::Unsupported(format!("n_H = {n_h}")));
        }
        let mut masks = [0u64; 5];
        for (j, mask) in masks.iter_mut().enumerate().take(n_h as usize) {
            for i in 0..(1u64 << n_h) {
                if (i >> j) & 1 == 1 {
                    *mask |= 1 << i;
                }
            }
        }
        Ok(SecCode { n_h, masks })
    }

    pub fn n_h(&self) -> u32 {
        self.n_h
    }

    /// N_H = 2^{n_H}.
    pub fn big_n(&self) -> u32 {
        1 << self.n_h
    }

    pub fn block_len(&self) -> u32 {
        self.big_n() + self.n_h
    }

    pub fn msg_len(&self) -> u32 {
        self.big_n() - 1
    }

    /// Column i of H read as an integer.
    pub fn column(&self, i: u32) -> u32 {
        i & (self.big_n() - 1)
    }

    fn x_mask(&self) -> u64 {
        (1u64 << self.big_n()) - 2
    }

    /// p̄ = H x^T for a word holding x_i at bit i (bit 0 ignored).
    pub fn syndrome(&self, x_word: u64) -> u32 {
        let x = x_word & self.x_mask();
        let mut p = 0u32;
        for j in 0..self.n_h as usize {
            p |= ((x & self.masks[j]).count_ones() & 1) << j;
        }
        p
    }

    /// Encodes a message whose bit i-1 is x_i.
    pub fn encode_word(&self, msg: u64) -> u64 {
        let x = (msg << 1) & self.x_mask();
        let x0 = (x.count_ones() & 1) as u64;
        let p = self.syndrome(x) as u64;
        x | x0 | (p << self.big_n())
    }

    /// Returns the message bits, correcting one flipped bit in (x0, x).
    pub fn decode_word(&self, word: u64) -> u64 {
        let nn = self.big_n();
        let low = word & ((1u64 << nn) - 1);
        let p_bar = ((word >> nn) & ((1u64 << self.n_h) - 1)) as u32;
        let parity = (low.count_ones() & 1) as u64;
        let idx = self.syndrome(low) ^ p_bar;
        // Branchless: flip bit idx only when the overall parity fails.
        let fixed = low ^ (parity << idx);
        (fixed & self.x_mask()) >> 1
    }

    pub fn is_codeword(&self, word: u64) -> bool {
        word >> self.block_len() == 0 && self.encode_word(self.decode_msg_unchecked(word)) == word
    }

    fn decode_msg_unchecked(&self, word: u64) -> u64 {
        (word & self.x_mask()) >> 1
    }

    pub fn encode(&self, x: &[u8]) -> Result<SecCodeword, CodeError> {
        let msg = bits_to_word(x, self.msg_len())?;
        Ok(self.unpack(self.encode_word(msg)))
    }

    pub fn decode(&self, cw: &SecCodeword) -> Result<Vec<u8>, CodeError> {
        let word = self.pack(cw)?;
        Ok(word_to_bits(self.decode_word(word), self.msg_len()))
    }

    pub fn pack(&self, cw: &SecCodeword) -> Result<u64, CodeError> {
        let x = bits_to_word(&cw.x, self.msg_len())?;
        let p = bits_to_word(&cw.p, self.n_h)?;
        Ok((cw.x0 as u64 & 1) | (x << 1) | (p << self.big_n()))
    }

    pub fn unpack(&self, word: u64) -> SecCodeword {
        SecCodeword {
            x0: (word & 1) as u8,
            x: word_to_bits(word >> 1, self.msg_len()),
            p: word_to_bits(word >> self.big_n(), self.n_h),
        }
    }

    /// Positions carried by the coset representative v′: x0 and the parity bits.
    fn coset_mask(&self) -> u64 {
        1 | (((1u64 << self.n_h) - 1) << self.big_n())
    }

    /// Splits k1 = Encode(x) ⊕ v′ and returns (x, the n_H + 1 transmitted bits of v′).
    pub fn kc_wrap(&self, k1: u64) -> (u64, u32) {
        let msg = (k1 & self.x_mask()) >> 1;
        let v = (k1 ^ self.encode_word(msg)) & self.coset_mask();
        (msg, self.compress_coset(v))
    }

    pub fn kc_unwrap(&self, k2: u64, v: u32) -> u64 {
        self.decode_word(k2 ^ self.expand_coset(v))
    }

    fn compress_coset(&self, v: u64) -> u32 {
        ((v & 1) | ((v >> self.big_n()) << 1)) as u32
    }

    fn expand_coset(&self, v: u32) -> u64 {
        let v = v as u64;
        (v & 1) | ((v >> 1) << self.big_n())
    }

    /// Bit-vector form of `kc_wrap`.
    pub fn sec_kc_wrap(&self, k1: &[u8]) -> Result<(Vec<u8>, Vec<u8>), CodeError> {
        let (x, v) = self.kc_wrap(bits_to_word(k1, self.block_len())?);
        Ok((word_to_bits(x, self.msg_len()), word_to_bits(v as u64, self.n_h + 1)))
    }

    pub fn sec_kc_unwrap(&self, k2: &[u8], v: &[u8]) -> Result<Vec<u8>, CodeError> {
        let k2 = bits_to_word(k2, self.block_len())?;
        let v = bits_to_word(v, self.n_h + 1)? as u32;
        Ok(word_to_bits(self.kc_unwrap(k2, v), self.msg_len()))
    }
}

pub fn bits_to_word(bits: &[u8], len: u32) -> Result<u64, CodeError> {
    if bits.len() != len as usize {
        return Err(CodeError::Length {
            expected: len as usize,
            got: bits.len(),
        });
    }
    Ok(bits
        .iter()
        .enumerate()
        .fold(0u64, |w, (i, &b)| w | (((b & 1) as u64) << i)))
}

pub fn word_to_bits(word: u64, len: u32) -> Vec<u8> {
    (0..len).map(|i| ((word >> i) & 1) as u8).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit(i: usize, len: usize) -> Vec<u8> {
        let mut v = vec![0u8; len];
        v[i - 1] = 1;
        v
    }

    #[test]
    fn columns_are_binary_indices() {
        let c = SecCode::new(4).unwrap();
        for i in 1..16u32 {
            assert_eq!(c.column(i), i);
            assert_eq!(c.syndrome(1 << i), i);
        }
    }

    #[test]
    fn encode_examples() {
        let c = SecCode::new(3).unwrap();
        let z = c.encode(&[0; 7]).unwrap();
        assert_eq!(z, SecCodeword { x0: 0, x: vec![0; 7], p: vec![0; 3] });
        let one = c.encode(&unit(5, 7)).unwrap();
        assert_eq!(one.x0, 1);
        assert_eq!(one.p, vec![1, 0, 1]);
        let mut two = unit(5, 7);
        two[2] = 1;
        let cw = c.encode(&two).unwrap();
        assert_eq!(cw.x0, 0);
        assert_eq!(cw.p, vec![0, 1, 1]);
    }

    #[test]
    fn decode_examples() {
        let c = SecCode::new(3).unwrap();
        let x = unit(1, 7);
        assert_eq!(c.decode(&c.encode(&x).unwrap()).unwrap(), x);
        let x5 = unit(5, 7);
        let mut cw = c.encode(&x5).unwrap();
        cw.x[2] ^= 1;
        assert_eq!(c.decode(&cw).unwrap(), x5);
        let mut cw = c.encode(&x5).unwrap();
        cw.x0 ^= 1;
        assert_eq!(c.decode(&cw).unwrap(), x5);
    }

    #[test]
    fn length_mismatch() {
        let c = SecCode::new(3).unwrap();
        assert!(c.encode(&[0; 6]).is_err());
        assert!(c.sec_kc_wrap(&[0; 10]).is_err());
        assert!(SecCode::new(6).is_err());
    }

    #[test]
    fn wrap_of_codeword_has_zero_coset() {
        let c = SecCode::new(3).unwrap();
        for msg in 0..128u64 {
            let w = c.encode_word(msg);
            assert!(c.is_codeword(w));
            assert_eq!(c.kc_wrap(w), (msg, 0));
        }
    }

    #[test]
    fn wrap_unwrap_all_single_flips_nh3() {
        let c = SecCode::new(3).unwrap();
        for k1 in 0..(1u64 << 11) {
            let (x, v) = c.kc_wrap(k1);
            assert_eq!(c.kc_unwrap(k1, v), x);
            for pos in 0..11 {
                assert_eq!(c.kc_unwrap(k1 ^ (1 << pos), v), x, "k1={k1} pos={pos}");
            }
        }
    }
}
