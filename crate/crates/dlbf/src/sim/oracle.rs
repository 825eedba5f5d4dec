//! Exact per-bit reference model for differential testing.
//!
//! Tracks how many set events hit each data cell, which makes every filter
//! behaviour predictable without bit manipulation: a region is marked iff
//! some cell in it took two or more events, an element is deletable iff one
//! of its cells lies in an unmarked region, and after removing all members
//! exactly the marked-region cells with at least one event stay set.

use crate::filter::{DeletableBloomFilter, FilterParams};

/// Event-multiplicity model of a filter holding a fixed element set.
pub struct ReferenceModel {
    params: FilterParams,
    multiplicities: Vec<u32>,
    marked: Vec<bool>,
}

impl ReferenceModel {
    pub fn build<E: AsRef<[u8]>>(params: FilterParams, elements: &[E]) -> Self {
        let mut multiplicities = vec![0u32; params.m_prime() as usize];
        let mut marked = vec![false; params.r() as usize];
        for element in elements {
            for idx in params.index_set(element.as_ref()) {
                if multiplicities[idx as usize] > 0 {
                    marked[params.region_of(idx) as usize] = true;
                }
                multiplicities[idx as usize] += 1;
            }
        }
        ReferenceModel {
            params,
            multiplicities,
            marked,
        }
    }

    /// Set events per data cell.
    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    /// Collision flag per region.
    pub fn marked_regions(&self) -> &[bool] {
        &self.marked
    }

    /// Membership answer for any element, inserted or not.
    pub fn query(&self, element: &[u8]) -> bool {
        self.params
            .index_set(element)
            .all(|idx| self.multiplicities[idx as usize] > 0)
    }

    /// Whether removing this inserted element clears at least one bit.
    pub fn is_deletable(&self, element: &[u8]) -> bool {
        self.params
            .index_set(element)
            .any(|idx| !self.marked[self.params.region_of(idx) as usize])
    }

    /// Data bits that stay set after every member is removed: cells with an
    /// event in a marked region. Unmarked-region cells hold at most one
    /// event, so their owner clears them on its way out.
    pub fn residual_data_bits(&self) -> Vec<bool> {
        self.multiplicities
            .iter()
            .enumerate()
            .map(|(i, &mult)| mult > 0 && self.marked[self.params.region_of(i as u32) as usize])
            .collect()
    }

    /// True when `filter` carries exactly the collision marks this model
    /// predicts.
    pub fn collision_bitmap_matches(&self, filter: &DeletableBloomFilter) -> bool {
        (0..self.params.r() as usize).all(|j| filter.collision_bitmap().get(j) == self.marked[j])
    }

    /// True when `filter` has exactly the set data bits this model predicts
    /// for the pre-removal state (any cell with at least one event).
    pub fn data_bits_match(&self, filter: &DeletableBloomFilter) -> bool {
        self.multiplicities
            .iter()
            .enumerate()
            .all(|(i, &mult)| filter.data_bits().get(i) == (mult > 0))
    }
}
