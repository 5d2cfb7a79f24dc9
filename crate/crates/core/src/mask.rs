//! Subsets of an index family `{0, ..., m-1}` with `m <= 64`, stored as bitmasks.
//!
//! Indices are zero-based everywhere in this crate.

use std::fmt;

use crate::error::{Error, Result};

pub const MAX_FAMILY: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubsetMask {
    bits: u64,
    m: u8,
}

impl SubsetMask {
    pub fn new(bits: u64, m: usize) -> Result<Self> {
        if m > MAX_FAMILY {
            return Err(Error::TooManyMatrices {
                got: m,
                limit: MAX_FAMILY,
            });
        }
        if m < 64 && bits >> m != 0 {
            return Err(Error::MaskOutOfRange {
                bit: 63 - bits.leading_zeros(),
                m,
            });
        }
        Ok(SubsetMask { bits, m: m as u8 })
    }

    pub fn empty(m: usize) -> Self {
        Self::new(0, m).expect("family size within limit")
    }

    pub fn full(m: usize) -> Self {
        Self::new(low_bits(m), m).expect("family size within limit")
    }

    pub fn from_indices(indices: &[usize], m: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &i in indices {
            if i >= m || i >= MAX_FAMILY {
                return Err(Error::MaskOutOfRange { bit: i as u32, m });
            }
            bits |= 1 << i;
        }
        Self::new(bits, m)
    }

    pub fn bits(self) -> u64 {
        self.bits
    }

    /// Size of the ambient family.
    pub fn family_size(self) -> usize {
        self.m as usize
    }

    pub fn cardinality(self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    pub fn is_full(self) -> bool {
        self.bits == low_bits(self.m as usize)
    }

    pub fn contains(self, i: usize) -> bool {
        i < 64 && self.bits >> i & 1 == 1
    }

    pub fn is_subset_of(self, other: SubsetMask) -> bool {
        self.bits & !other.bits == 0
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }

    /// Key for the canonical search order: cardinality first, then mask value.
    pub fn order_key(self) -> (u32, u64) {
        (self.bits.count_ones(), self.bits)
    }
}

impl fmt::Debug for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

fn low_bits(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

/// All `k`-subsets of `{0..m}` in ascending mask order (Gosper's hack).
pub fn k_subsets(m: usize, k: usize) -> impl Iterator<Item = SubsetMask> {
    assert!(m <= MAX_FAMILY);
    let limit = 1u128 << m;
    let mut next: Option<u128> = (k <= m).then(|| (1u128 << k) - 1);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(SubsetMask {
            bits: cur as u64,
            m: m as u8,
        })
    })
}

/// Subsets with cardinality in `lo..=hi`, by increasing cardinality then mask value.
pub fn subsets_by_cardinality(m: usize, lo: usize, hi: usize) -> impl Iterator<Item = SubsetMask> {
    (lo..=hi.min(m)).flat_map(move |k| k_subsets(m, k))
}
