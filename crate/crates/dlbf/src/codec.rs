//! Versioned binary image of a filter.
//!
//! Layout, all integers little-endian:
//!
//! ```text
//! offset  size  field
//! 0       4     magic "DLBF"
//! 4       1     format version (0x01)
//! 5       1     hash scheme id (0x01)
//! 6       4     m
//! 10      4     r
//! 14      4     k
//! 18      8     seed
//! 26      ceil(r/8)        collision bitmap, bit i at byte i/8, offset i%8
//! ...     ceil((m-r)/8)    data array, same bit order
//! ```

use crate::bits::BitArray;
use crate::filter::{DeletableBloomFilter, FilterError, FilterParams};
use crate::hashing::HASH_SCHEME_ID;

pub const MAGIC: [u8; 4] = *b"DLBF";
pub const FORMAT_VERSION: u8 = 0x01;
pub const HEADER_LEN: usize = 26;

/// Rejected filter image.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ParseError {
    #[error("bad magic bytes, not a filter image")]
    BadMagic,
    #[error("unsupported format version {0:#04x}")]
    UnsupportedVersion(u8),
    #[error("unsupported hash scheme {0:#04x}")]
    UnsupportedHashScheme(u8),
    #[error("image truncated: need at least {expected} bytes, have {actual}")]
    Truncated { expected: usize, actual: usize },
    #[error("image has {actual} bytes but exactly {expected} were expected")]
    TrailingBytes { expected: usize, actual: usize },
    #[error("header carries invalid dimensions: {0}")]
    InvalidDimensions(#[from] FilterError),
}

fn image_len(params: &FilterParams) -> usize {
    HEADER_LEN
        + (params.r() as usize).div_ceil(8)
        + (params.m_prime() as usize).div_ceil(8)
}

/// Serializes the filter, its dimensions and seed included, so the image is
/// self-describing.
pub fn to_bytes(filter: &DeletableBloomFilter) -> Vec<u8> {
    let p = filter.params();
    let mut out = Vec::with_capacity(image_len(&p));
    out.extend_from_slice(&MAGIC);
    out.push(FORMAT_VERSION);
    out.push(HASH_SCHEME_ID);
    out.extend_from_slice(&p.m().to_le_bytes());
    out.extend_from_slice(&p.r().to_le_bytes());
    out.extend_from_slice(&p.k().to_le_bytes());
    out.extend_from_slice(&p.seed().to_le_bytes());
    out.extend_from_slice(&filter.collision_bitmap().to_bytes());
    out.extend_from_slice(&filter.data_bits().to_bytes());
    out
}

/// Parses an image produced by [`to_bytes`]. The whole input must be
/// consumed: a short buffer, trailing garbage, an unknown version or scheme,
/// or dimensions that no filter can have are each rejected with a dedicated
/// error.
pub fn from_bytes(bytes: &[u8]) -> Result<DeletableBloomFilter, ParseError> {
    if bytes.len() < MAGIC.len() {
        return Err(ParseError::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    if bytes[..4] != MAGIC {
        return Err(ParseError::BadMagic);
    }
    if bytes.len() < HEADER_LEN {
        return Err(ParseError::Truncated {
            expected: HEADER_LEN,
            actual: bytes.len(),
        });
    }
    if bytes[4] != FORMAT_VERSION {
        return Err(ParseError::UnsupportedVersion(bytes[4]));
    }
    if bytes[5] != HASH_SCHEME_ID {
        return Err(ParseError::UnsupportedHashScheme(bytes[5]));
    }
    let le32 = |at: usize| u32::from_le_bytes(bytes[at..at + 4].try_into().unwrap());
    let m = le32(6);
    let r = le32(10);
    let k = le32(14);
    let seed = u64::from_le_bytes(bytes[18..26].try_into().unwrap());
    let params = FilterParams::new(m, r, k, seed)?;

    let expected = image_len(&params);
    if bytes.len() < expected {
        return Err(ParseError::Truncated {
            expected,
            actual: bytes.len(),
        });
    }
    if bytes.len() > expected {
        return Err(ParseError::TrailingBytes {
            expected,
            actual: bytes.len(),
        });
    }
    let bitmap_len = (params.r() as usize).div_ceil(8);
    let bitmap = BitArray::from_bytes(&bytes[HEADER_LEN..HEADER_LEN + bitmap_len], params.r() as usize);
    let data = BitArray::from_bytes(&bytes[HEADER_LEN + bitmap_len..], params.m_prime() as usize);
    Ok(DeletableBloomFilter::from_parts(params, bitmap, data))
}
