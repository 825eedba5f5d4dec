//! The deletable Bloom filter and a standard Bloom filter baseline.

use crate::bits::BitArray;
use crate::hashing::{self, IndexIter};

/// Invalid filter dimensions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum FilterError {
    #[error("k (hash count) must be at least 1")]
    ZeroHashes,
    #[error("r (region count) must be at least 1")]
    ZeroRegions,
    #[error("m (filter size in bits) must be at least 1")]
    ZeroBits,
    #[error("data array m' = m - r must be at least r, so each of the r regions gets a bit (m = {m}, r = {r})")]
    RegionsExceedDataBits { m: u32, r: u32 },
}

/// Dimensions shared by a filter, the analytical model of it and the
/// simulation harness: `m` total bits, of which `r` form the collision
/// bitmap (one bit per region) and `m' = m - r` hold element data, plus the
/// hash count `k` and the seed of the index derivation.
///
/// Construction enforces `k >= 1`, `r >= 1` and `m - r >= r`, which keeps
/// every region nonempty.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterParams {
    m: u32,
    r: u32,
    k: u32,
    seed: u64,
}

impl FilterParams {
    pub fn new(m: u32, r: u32, k: u32, seed: u64) -> Result<Self, FilterError> {
        if k == 0 {
            return Err(FilterError::ZeroHashes);
        }
        if r == 0 {
            return Err(FilterError::ZeroRegions);
        }
        let m_prime = m
            .checked_sub(r)
            .ok_or(FilterError::RegionsExceedDataBits { m, r })?;
        if m_prime < r {
            return Err(FilterError::RegionsExceedDataBits { m, r });
        }
        Ok(FilterParams { m, r, k, seed })
    }

    /// Total size in bits, collision bitmap included.
    pub fn m(&self) -> u32 {
        self.m
    }

    /// Number of regions, each tracked by one collision-bitmap bit.
    pub fn r(&self) -> u32 {
        self.r
    }

    /// Hash count.
    pub fn k(&self) -> u32 {
        self.k
    }

    /// Seed of the index derivation.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Data-array size `m' = m - r`.
    pub fn m_prime(&self) -> u32 {
        self.m - self.r
    }

    /// Region width `w = ceil(m' / r)` in bits. The last region may be
    /// narrower when `r` does not divide `m'`.
    pub fn region_width(&self) -> u32 {
        self.m_prime().div_ceil(self.r)
    }

    /// Region of data-bit `index`, in `0..r`. Panics if `index >= m'`.
    pub fn region_of(&self, index: u32) -> u32 {
        assert!(
            index < self.m_prime(),
            "data-bit index {index} out of range for m' = {}",
            self.m_prime()
        );
        index / self.region_width()
    }

    /// The `k` data-array indices of `element`.
    pub fn index_set<'a>(&self, element: &'a [u8]) -> IndexIter<'a> {
        hashing::index_iter(element, self.seed, self.m_prime(), self.k)
    }

    /// True when fewer regions than hash indices leaves every insertion
    /// prone to same-region self-collisions.
    pub fn r_below_k(&self) -> bool {
        self.r < self.k
    }
}

/// Result of [`DeletableBloomFilter::remove`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RemoveOutcome {
    /// At least one of the element's bits was cleared.
    Deleted,
    /// The element is present but every one of its bits lies in a collided
    /// region, so nothing could be cleared.
    NotDeletable,
    /// Membership query failed; the filter was not modified.
    NotPresent,
}

impl std::fmt::Display for RemoveOutcome {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RemoveOutcome::Deleted => "Deleted",
            RemoveOutcome::NotDeletable => "NotDeletable",
            RemoveOutcome::NotPresent => "NotPresent",
        })
    }
}

/// Bloom filter supporting probabilistic element removal.
///
/// The `m` bits split into an `r`-bit collision bitmap and an `m - r`-bit
/// data array divided into `r` regions. Whenever an insertion targets a bit
/// that is already set (including twice by the same element), the region
/// holding that bit is marked as collided; marks are never removed. Removal
/// clears the element's bits only in unmarked regions: any bit there is
/// provably set by exactly one index of one inserted element, so clearing it
/// cannot create a false negative for other members.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeletableBloomFilter {
    params: FilterParams,
    collision_bitmap: BitArray,
    data: BitArray,
}

impl DeletableBloomFilter {
    /// Empty filter: all data bits zero, no region marked.
    pub fn new(params: FilterParams) -> Self {
        DeletableBloomFilter {
            params,
            collision_bitmap: BitArray::new(params.r() as usize),
            data: BitArray::new(params.m_prime() as usize),
        }
    }

    pub(crate) fn from_parts(
        params: FilterParams,
        collision_bitmap: BitArray,
        data: BitArray,
    ) -> Self {
        debug_assert_eq!(collision_bitmap.len(), params.r() as usize);
        debug_assert_eq!(data.len(), params.m_prime() as usize);
        DeletableBloomFilter {
            params,
            collision_bitmap,
            data,
        }
    }

    pub fn params(&self) -> FilterParams {
        self.params
    }

    /// The `r`-bit region collision bitmap.
    pub fn collision_bitmap(&self) -> &BitArray {
        &self.collision_bitmap
    }

    /// The `m'`-bit data array.
    pub fn data_bits(&self) -> &BitArray {
        &self.data
    }

    /// `(set data bits, marked regions)`.
    pub fn bit_counts(&self) -> (usize, usize) {
        (self.data.count_ones(), self.collision_bitmap.count_ones())
    }

    /// Fraction of regions marked as collided, in `[0, 1]`.
    pub fn bitmap_saturation(&self) -> f64 {
        self.collision_bitmap.count_ones() as f64 / self.params.r() as f64
    }

    /// Sets the element's `k` bits. Each set event that lands on an
    /// already-set bit marks the bit's region, so two indices of this same
    /// element hitting one bit also count as a collision.
    pub fn insert(&mut self, element: &[u8]) {
        for idx in self.params.index_set(element) {
            let i = idx as usize;
            if self.data.get(i) {
                self.collision_bitmap.set(self.params.region_of(idx) as usize);
            }
            self.data.set(i);
        }
    }

    /// Membership test: true iff all `k` bits of `element` are set.
    pub fn query(&self, element: &[u8]) -> bool {
        self.params
            .index_set(element)
            .all(|idx| self.data.get(idx as usize))
    }

    /// Clears the element's bits in collision-free regions.
    ///
    /// Returns [`RemoveOutcome::NotPresent`] without modifying anything when
    /// the membership test fails. Otherwise clears every one of the
    /// element's bits whose region is unmarked and reports
    /// [`RemoveOutcome::Deleted`] if at least one bit was cleared, or
    /// [`RemoveOutcome::NotDeletable`] if all its regions were marked.
    pub fn remove(&mut self, element: &[u8]) -> RemoveOutcome {
        if !self.query(element) {
            return RemoveOutcome::NotPresent;
        }
        let mut cleared = false;
        for idx in self.params.index_set(element) {
            if !self.collision_bitmap.get(self.params.region_of(idx) as usize) {
                self.data.clear(idx as usize);
                cleared = true;
            }
        }
        if cleared {
            RemoveOutcome::Deleted
        } else {
            RemoveOutcome::NotDeletable
        }
    }
}

/// Plain Bloom filter over all `m` bits, used as the false-positive
/// baseline. Same index derivation as the deletable filter, range `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardBloomFilter {
    m: u32,
    k: u32,
    seed: u64,
    bits: BitArray,
}

impl StandardBloomFilter {
    pub fn new(m: u32, k: u32, seed: u64) -> Result<Self, FilterError> {
        if k == 0 {
            return Err(FilterError::ZeroHashes);
        }
        if m == 0 {
            return Err(FilterError::ZeroBits);
        }
        Ok(StandardBloomFilter {
            m,
            k,
            seed,
            bits: BitArray::new(m as usize),
        })
    }

    pub fn insert(&mut self, element: &[u8]) {
        for idx in hashing::index_iter(element, self.seed, self.m, self.k) {
            self.bits.set(idx as usize);
        }
    }

    pub fn query(&self, element: &[u8]) -> bool {
        hashing::index_iter(element, self.seed, self.m, self.k)
            .all(|idx| self.bits.get(idx as usize))
    }

    pub fn count_ones(&self) -> usize {
        self.bits.count_ones()
    }
}
