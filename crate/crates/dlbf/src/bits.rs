//! Packed bit storage backing the filter's bit arrays.

/// Fixed-length bit array packed into `u64` words.
///
/// Bits are addressed `0..len`. The byte image produced by [`to_bytes`]
/// places bit `i` at byte `i / 8`, bit offset `i % 8` (little-endian within
/// each byte), which is also the on-disk layout used by the codec.
///
/// [`to_bytes`]: BitArray::to_bytes
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitArray {
    len: usize,
    words: Vec<u64>,
}

impl BitArray {
    /// All-zero array of `len` bits.
    pub fn new(len: usize) -> Self {
        BitArray {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    /// Number of addressable bits.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Reads bit `i`. Panics if `i >= len`.
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for {} bits", self.len);
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Sets bit `i` to 1. Panics if `i >= len`.
    pub fn set(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for {} bits", self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    /// Clears bit `i` to 0. Panics if `i >= len`.
    pub fn clear(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for {} bits", self.len);
        self.words[i / 64] &= !(1 << (i % 64));
    }

    /// Number of set bits.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Serializes to `ceil(len / 8)` bytes, bit `i` at byte `i / 8`,
    /// offset `i % 8`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for (i, byte) in out.iter_mut().enumerate() {
            *byte = (self.words[i / 8] >> (8 * (i % 8))) as u8;
        }
        out
    }

    /// Rebuilds an array of `len` bits from its byte image. Panics unless
    /// `bytes.len() == ceil(len / 8)`; padding bits past `len` are ignored.
    pub fn from_bytes(bytes: &[u8], len: usize) -> Self {
        assert_eq!(
            bytes.len(),
            len.div_ceil(8),
            "byte image has the wrong length for {len} bits"
        );
        let mut arr = BitArray::new(len);
        for (i, &byte) in bytes.iter().enumerate() {
            arr.words[i / 8] |= u64::from(byte) << (8 * (i % 8));
        }
        if len % 64 != 0 {
            if let Some(last) = arr.words.last_mut() {
                *last &= (1u64 << (len % 64)) - 1;
            }
        }
        arr
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn set_get_clear() {
        let mut b = BitArray::new(130);
        assert!(!b.get(0));
        b.set(0);
        b.set(63);
        b.set(64);
        b.set(129);
        assert!(b.get(0) && b.get(63) && b.get(64) && b.get(129));
        assert!(!b.get(1) && !b.get(65) && !b.get(128));
        assert_eq!(b.count_ones(), 4);
        b.clear(64);
        assert!(!b.get(64));
        assert_eq!(b.count_ones(), 3);
    }

    #[test]
    #[should_panic(expected = "out of range")]
    fn get_out_of_range_panics() {
        BitArray::new(10).get(10);
    }

    #[test]
    fn byte_layout_is_lsb_first() {
        let mut b = BitArray::new(12);
        b.set(0);
        b.set(3);
        b.set(9);
        assert_eq!(b.to_bytes(), vec![0b0000_1001, 0b0000_0010]);
    }

    #[test]
    fn byte_round_trip() {
        let mut b = BitArray::new(77);
        for i in [0, 7, 8, 31, 63, 64, 76] {
            b.set(i);
        }
        let back = BitArray::from_bytes(&b.to_bytes(), 77);
        assert_eq!(back, b);
    }

    #[test]
    fn from_bytes_masks_padding() {
        // All-ones bytes, but only 3 addressable bits.
        let b = BitArray::from_bytes(&[0xFF], 3);
        assert_eq!(b.count_ones(), 3);
        assert_eq!(b.to_bytes(), vec![0b0000_0111]);
    }

    #[test]
    fn zero_length_array() {
        let b = BitArray::new(0);
        assert!(b.is_empty());
        assert_eq!(b.count_ones(), 0);
        assert!(b.to_bytes().is_empty());
        assert_eq!(BitArray::from_bytes(&[], 0), b);
    }
}
