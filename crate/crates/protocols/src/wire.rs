//! Bit packing: little-endian, LSB-first within each element, elements in
//! row-major order. Each packed field starts on a byte boundary.

use crate::ProtocolError;

pub fn packed_len(count: usize, bits: u32) -> usize {
    (count * bits as usize).div_ceil(8)
}

/// Bits needed for values in [0, q).
pub fn width(q: u32) -> u32 {
    32 - (q - 1).leading_zeros()
}

fn mask(bits: u32) -> u64 {
    (1u64 << bits) - 1
}

/// Packs (value, width) fields back to back.
pub fn pack_fields<I: IntoIterator<Item = (u32, u32)>>(fields: I) -> Vec<u8> {
    let mut out = Vec::new();
    let mut acc = 0u64;
    let mut fill = 0u32;
    for (v, bits) in fields {
        acc |= (v as u64 & mask(bits)) << fill;
        fill += bits;
        while fill >= 8 {
            out.push(acc as u8);
            acc >>= 8;
            fill -= 8;
        }
    }
    if fill > 0 {
        out.push(acc as u8);
    }
    out
}

pub fn unpack_fields<I: IntoIterator<Item = u32>>(data: &[u8], widths: I) -> Vec<u32> {
    let mut out = Vec::new();
    let mut acc = 0u64;
    let mut fill = 0u32;
    let mut bytes = data.iter();
    for bits in widths {
        while fill < bits {
            acc |= (*bytes.next().unwrap_or(&0) as u64) << fill;
            fill += 8;
        }
        out.push((acc & mask(bits)) as u32);
        acc >>= bits;
        fill -= bits;
    }
    out
}

pub fn pack<I: IntoIterator<Item = u32>>(values: I, bits: u32) -> Vec<u8> {
    pack_fields(values.into_iter().map(|v| (v, bits)))
}

pub fn unpack(data: &[u8], count: usize, bits: u32) -> Vec<u32> {
    unpack_fields(data, std::iter::repeat_n(bits, count))
}

/// Splits a message into consecutive fields of the given byte lengths.
pub fn split<'a>(
    what: &'static str,
    msg: &'a [u8],
    lens: &[usize],
) -> Result<Vec<&'a [u8]>, ProtocolError> {
    let expected: usize = lens.iter().sum();
    if msg.len() != expected {
        return Err(ProtocolError::Length { what, expected, got: msg.len() });
    }
    let mut out = Vec::with_capacity(lens.len());
    let mut rest = msg;
    for &l in lens {
        let (head, tail) = rest.split_at(l);
        out.push(head);
        rest = tail;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lsb_first() {
        assert_eq!(pack([1, 2, 3], 4), vec![0x21, 0x03]);
        assert_eq!(pack([0x7fff], 15), vec![0xff, 0x7f]);
        assert_eq!(unpack(&[0x21, 0x03], 3, 4), vec![1, 2, 3]);
        assert_eq!(packed_len(3, 4), 2);
        assert_eq!(width(4096), 12);
        assert_eq!(width(12289), 14);
        assert_eq!(width(2), 1);
    }

    #[test]
    fn mixed_widths() {
        let f = [(3, 2), (5, 3), (1, 1), (200, 9)];
        let p = pack_fields(f);
        assert_eq!(p.len(), 2);
        assert_eq!(unpack_fields(&p, f.map(|x| x.1)), f.map(|x| x.0).to_vec());
    }

    #[test]
    fn round_trip_odd_widths() {
        for bits in 1..=16 {
            let vals: Vec<u32> = (0..37).map(|i| (i * 7919) & ((1 << bits) - 1)).collect();
            let p = pack(vals.iter().copied(), bits);
            assert_eq!(p.len(), packed_len(37, bits));
            assert_eq!(unpack(&p, 37, bits), vals);
        }
    }

    #[test]
    fn split_checks_length() {
        assert!(split("m", &[0; 5], &[2, 2]).is_err());
        assert_eq!(split("m", &[1, 2, 3], &[1, 2]).unwrap(), vec![&[1][..], &[2, 3][..]]);
    }
}
