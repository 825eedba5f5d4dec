//! A Bloom filter that supports element removal.
//!
//! The `m` filter bits split into an `r`-bit *collision bitmap* and an
//! `m' = m - r`-bit data array divided into `r` equal regions. Insertions
//! that hit an already-set bit mark that bit's region as collided. Bits in
//! collision-free regions are guaranteed to belong to exactly one index of
//! one element, so removal may clear them without ever creating a false
//! negative; bits in marked regions are left alone, and an element whose
//! bits all sit in marked regions is simply reported as not deletable.
//!
//! Three layers share one set of dimensions ([`FilterParams`]):
//!
//! - [`filter`]: the filter itself plus a standard Bloom baseline;
//! - [`analysis`]: closed forms for cell occupancy, the probability that an
//!   element is deletable, and false-positive rates;
//! - [`sim`]: a reproducible Monte-Carlo harness measuring the same
//!   quantities empirically, and the canned sweeps behind the CLI.
//!
//! ```
//! use dlbf::{DeletableBloomFilter, FilterParams, RemoveOutcome};
//!
//! let params = FilterParams::new(240, 24, 5, 42)?;
//! let mut filter = DeletableBloomFilter::new(params);
//! filter.insert(b"alpha");
//! assert!(filter.query(b"alpha"));
//! assert_eq!(filter.remove(b"alpha"), RemoveOutcome::Deleted);
//! assert!(!filter.query(b"alpha"));
//! # Ok::<(), dlbf::FilterError>(())
//! ```

pub mod analysis;
pub mod bits;
pub mod codec;
pub mod filter;
pub mod hashing;
pub mod sim;
pub mod table;

pub use filter::{
    DeletableBloomFilter, FilterError, FilterParams, RemoveOutcome, StandardBloomFilter,
};
