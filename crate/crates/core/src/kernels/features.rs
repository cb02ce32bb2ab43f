use std::collections::HashMap;
use std::hash::Hash;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::KernelError;
use crate::graph::LabelSet;

static NEXT_DICTIONARY: AtomicU64 = AtomicU64::new(1);

/// Key of a compressed feature. Colors of different refinement rounds never
/// share a key because the round index is part of it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FeatureKey {
    WlInitial(LabelSet),
    WlRefined {
        round: u32,
        own: u32,
        incoming: Vec<(LabelSet, u32)>,
        outgoing: Vec<(LabelSet, u32)>,
    },
    ShortestPath {
        from: LabelSet,
        to: LabelSet,
        distance: u32,
    },
    Graphlet(u8),
}

/// Run-scoped, collision-free map from feature keys to dense ids.
#[derive(Debug)]
pub struct FeatureDictionary {
    id: u64,
    map: HashMap<FeatureKey, u32>,
}

impl Default for FeatureDictionary {
    fn default() -> Self {
        Self::new()
    }
}

impl FeatureDictionary {
    pub fn new() -> Self {
        FeatureDictionary {
            id: NEXT_DICTIONARY.fetch_add(1, Ordering::Relaxed),
            map: HashMap::new(),
        }
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn intern(&mut self, key: FeatureKey) -> u32 {
        let next = self.map.len() as u32;
        *self.map.entry(key).or_insert(next)
    }

    pub fn get(&self, key: &FeatureKey) -> Option<u32> {
        self.map.get(key).copied()
    }
}

/// Sparse count vector, sorted by feature id, without zero entries.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureVector {
    dictionary: u64,
    entries: Vec<(u32, u64)>,
}

impl FeatureVector {
    pub fn from_counts(dictionary: &FeatureDictionary, counts: HashMap<u32, u64>) -> Self {
        Self::from_entries(dictionary.id(), counts.into_iter().collect())
    }

    pub(crate) fn from_entries(dictionary: u64, mut entries: Vec<(u32, u64)>) -> Self {
        entries.retain(|&(_, c)| c > 0);
        entries.sort_unstable_by_key(|&(f, _)| f);
        FeatureVector {
            dictionary,
            entries,
        }
    }

    /// Counts `ids` into a vector.
    pub fn tally(dictionary: u64, ids: impl IntoIterator<Item = u32>) -> Self {
        let mut counts: HashMap<u32, u64> = HashMap::new();
        for id in ids {
            *counts.entry(id).or_default() += 1;
        }
        Self::from_entries(dictionary, counts.into_iter().collect())
    }

    pub fn dictionary(&self) -> u64 {
        self.dictionary
    }

    pub fn entries(&self) -> &[(u32, u64)] {
        &self.entries
    }

    pub fn get(&self, feature: u32) -> u64 {
        self.entries
            .binary_search_by_key(&feature, |&(f, _)| f)
            .map_or(0, |i| self.entries[i].1)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&(_, c)| c).sum()
    }

    /// Concatenates vectors with disjoint supports.
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a FeatureVector>) -> Self {
        let mut dictionary = 0;
        let mut entries = Vec::new();
        for p in parts {
            dictionary = p.dictionary;
            entries.extend_from_slice(&p.entries);
        }
        Self::from_entries(dictionary, entries)
    }

    fn merge_with(&self, other: &Self, f: impl Fn(u64, u64) -> u128) -> u128 {
        let (a, b) = (&self.entries, &other.entries);
        let (mut i, mut j, mut acc) = (0, 0, 0u128);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    acc += f(a[i].1, b[j].1);
                    i += 1;
                    j += 1;
                }
            }
        }
        acc
    }

    fn check(&self, other: &Self) -> Result<(), KernelError> {
        if self.dictionary != other.dictionary && !self.is_empty() && !other.is_empty() {
            return Err(KernelError::DictionaryMismatch);
        }
        Ok(())
    }

    /// Exact integer dot product.
    pub fn dot(&self, other: &Self) -> Result<u128, KernelError> {
        self.check(other)?;
        Ok(self.merge_with(other, |x, y| x as u128 * y as u128))
    }

    /// Histogram intersection, `sum min(x, y)`.
    pub fn intersection(&self, other: &Self) -> Result<u128, KernelError> {
        self.check(other)?;
        Ok(self.merge_with(other, |x, y| x.min(y) as u128))
    }
}

/// Dot product of two feature vectors.
pub fn dot_kernel(f1: &FeatureVector, f2: &FeatureVector) -> Result<f64, KernelError> {
    f1.dot(f2).map(|v| v as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dot_and_intersection() {
        let d = FeatureDictionary::new();
        let a = FeatureVector::tally(d.id(), [1, 1, 2, 5]);
        let b = FeatureVector::tally(d.id(), [1, 2, 2, 2, 7]);
        assert_eq!(a.dot(&a).unwrap(), 4 + 1 + 1);
        assert_eq!(a.dot(&b).unwrap(), 2 + 3);
        assert_eq!(a.intersection(&b).unwrap(), 1 + 1);
        let c = FeatureVector::tally(d.id(), [9]);
        assert_eq!(a.dot(&c).unwrap(), 0);
    }

    #[test]
    fn mismatched_dictionaries() {
        let d1 = FeatureDictionary::new();
        let d2 = FeatureDictionary::new();
        let a = FeatureVector::tally(d1.id(), [0]);
        let b = FeatureVector::tally(d2.id(), [0]);
        assert!(matches!(a.dot(&b), Err(KernelError::DictionaryMismatch)));
    }

    #[test]
    fn interning_is_stable() {
        let mut d = FeatureDictionary::new();
        let k = FeatureKey::Graphlet(3);
        let a = d.intern(k.clone());
        let b = d.intern(FeatureKey::Graphlet(1));
        assert_eq!(d.intern(k), a);
        assert_ne!(a, b);
        assert_eq!(d.len(), 2);
    }
}
