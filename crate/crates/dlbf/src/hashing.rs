//! Index derivation: maps an element to `k` bit positions.
//!
//! Each block digest is `SHA-256(seed_le64 || block_le32 || element)` and is
//! read as four little-endian `u64` lanes. Lane `i mod 4` of block `i / 4`,
//! reduced modulo the index range, yields index `i`. Every index therefore
//! comes from an independent 64-bit lane, so the modulo bias for ranges far
//! below 2^64 is negligible and the k positions carry no linear structure.

use sha2::{Digest, Sha256};

/// Identifier of this derivation scheme in the serialized header.
pub const HASH_SCHEME_ID: u8 = 0x01;

const LANES_PER_BLOCK: u32 = 4;

fn block_lanes(element: &[u8], seed: u64, block: u32) -> [u64; 4] {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(block.to_le_bytes());
    hasher.update(element);
    let digest = hasher.finalize();
    let mut lanes = [0u64; 4];
    for (lane, chunk) in lanes.iter_mut().zip(digest.chunks_exact(8)) {
        *lane = u64::from_le_bytes(chunk.try_into().unwrap());
    }
    lanes
}

/// Iterator over the `k` indices of one element, each in `0..range`.
///
/// Block digests are computed lazily, so a short-circuiting membership
/// query hashes only as many blocks as it consumes.
#[derive(Clone)]
pub struct IndexIter<'a> {
    element: &'a [u8],
    seed: u64,
    range: u32,
    k: u32,
    next: u32,
    lanes: [u64; 4],
}

/// Derives the `k` indices of `element`, each uniform over `0..range`.
/// `range` and `k` must be nonzero.
pub fn index_iter(element: &[u8], seed: u64, range: u32, k: u32) -> IndexIter<'_> {
    assert!(range > 0, "index range must be nonzero");
    assert!(k > 0, "hash count must be nonzero");
    IndexIter {
        element,
        seed,
        range,
        k,
        next: 0,
        lanes: [0; 4],
    }
}

impl Iterator for IndexIter<'_> {
    type Item = u32;

    fn next(&mut self) -> Option<u32> {
        if self.next == self.k {
            return None;
        }
        let lane = self.next % LANES_PER_BLOCK;
        if lane == 0 {
            self.lanes = block_lanes(self.element, self.seed, self.next / LANES_PER_BLOCK);
        }
        self.next += 1;
        Some((self.lanes[lane as usize] % u64::from(self.range)) as u32)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.k - self.next) as usize;
        (left, Some(left))
    }
}

impl ExactSizeIterator for IndexIter<'_> {}
