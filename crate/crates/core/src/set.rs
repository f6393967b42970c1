//! Materialized finite subsets of a group.

use std::collections::HashSet;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::group::{GroupElement, GroupSpec};

/// Default ceiling on the number of elements any set may hold.
pub const DEFAULT_ELEMENT_CAP: usize = 1 << 25;

static ELEMENT_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_ELEMENT_CAP);

/// Current process-wide element cap.
pub fn element_cap() -> usize {
    ELEMENT_CAP.load(Ordering::Relaxed)
}

/// Replace the process-wide element cap; returns the previous value.
pub fn set_element_cap(cap: usize) -> usize {
    ELEMENT_CAP.swap(cap.max(1), Ordering::Relaxed)
}

pub(crate) fn check_cap(size: u128) -> Result<()> {
    let cap = element_cap();
    if size > cap as u128 {
        return Err(Error::WindowTooLarge {
            size: size.to_string(),
            cap,
        });
    }
    Ok(())
}

/// A deduplicated set of elements in canonical order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteSet {
    spec: GroupSpec,
    elements: Vec<GroupElement>,
}

/// Size, sample and order-independent hash of a set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetDigest {
    pub size: usize,
    pub sample: Vec<String>,
    pub hash: String,
}

impl FiniteSet {
    pub fn empty(spec: GroupSpec) -> Self {
        FiniteSet {
            spec,
            elements: Vec::new(),
        }
    }

    /// Validate, sort and deduplicate.
    pub fn new(spec: GroupSpec, elements: Vec<GroupElement>) -> Result<Self> {
        for g in &elements {
            spec.validate(g)?;
        }
        Self::from_unsorted(spec, elements)
    }

    pub(crate) fn from_unsorted(spec: GroupSpec, mut elements: Vec<GroupElement>) -> Result<Self> {
        elements.par_sort_unstable();
        elements.dedup();
        check_cap(elements.len() as u128)?;
        Ok(FiniteSet { spec, elements })
    }

    /// Wrap elements already sorted, deduplicated and valid.
    pub(crate) fn from_sorted_unchecked(spec: GroupSpec, elements: Vec<GroupElement>) -> Self {
        debug_assert!(elements.windows(2).all(|w| w[0] < w[1]));
        FiniteSet { spec, elements }
    }

    pub fn parse(spec: GroupSpec, literals: &[&str]) -> Result<Self> {
        let elements = literals
            .iter()
            .map(|s| spec.parse_element(s))
            .collect::<Result<Vec<_>>>()?;
        Self::from_unsorted(spec, elements)
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn count(&self) -> BigUint {
        BigUint::from(self.elements.len())
    }

    pub fn iter(&self) -> std::slice::Iter<'_, GroupElement> {
        self.elements.iter()
    }

    pub fn as_slice(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn into_vec(self) -> Vec<GroupElement> {
        self.elements
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        self.elements.binary_search(g).is_ok()
    }

    /// Position of `g` in canonical order.
    pub fn index_of(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    fn same_spec(&self, other: &FiniteSet) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: other.spec.to_string(),
            });
        }
        Ok(())
    }

    /// Elements satisfying `pred`, keeping order.
    pub fn filter(&self, pred: impl Fn(&GroupElement) -> bool + Sync) -> FiniteSet {
        let elements = self
            .elements
            .par_iter()
            .filter(|g| pred(g))
            .cloned()
            .collect();
        FiniteSet::from_sorted_unchecked(self.spec, elements)
    }

    pub fn count_where(&self, pred: impl Fn(&GroupElement) -> bool + Sync) -> usize {
        self.elements.par_iter().filter(|g| pred(g)).count()
    }

    /// `{s + t}`.
    pub fn sumset(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_spec(other)?;
        check_cap(self.len() as u128 * other.len() as u128)?;
        let out: HashSet<GroupElement> = self
            .elements
            .par_iter()
            .fold(HashSet::new, |mut acc, s| {
                acc.extend(other.elements.iter().map(|t| self.spec.add_unchecked(s, t)));
                acc
            })
            .reduce(HashSet::new, merge_sets);
        Self::from_unsorted(self.spec, out.into_iter().collect())
    }

    /// `{s + s′ : s ≠ s′}`.
    pub fn restricted_sumset(&self) -> Result<FiniteSet> {
        check_cap(self.len() as u128 * self.len() as u128 / 2)?;
        let out: HashSet<GroupElement> = self
            .elements
            .par_iter()
            .enumerate()
            .fold(HashSet::new, |mut acc, (i, s)| {
                acc.extend(
                    self.elements[i + 1..]
                        .iter()
                        .map(|t| self.spec.add_unchecked(s, t)),
                );
                acc
            })
            .reduce(HashSet::new, merge_sets);
        Self::from_unsorted(self.spec, out.into_iter().collect())
    }

    /// `{t + s}`.
    pub fn shift(&self, t: &GroupElement) -> Result<FiniteSet> {
        self.spec.validate(t)?;
        let out = self
            .elements
            .par_iter()
            .map(|s| self.spec.add_unchecked(t, s))
            .collect();
        Self::from_unsorted(self.spec, out)
    }

    /// `−S`.
    pub fn negated(&self) -> FiniteSet {
        let out = self.elements.par_iter().map(|s| self.spec.neg(s)).collect();
        Self::from_unsorted(self.spec, out).expect("negation preserves size")
    }

    /// `2S`.
    pub fn double_image(&self) -> FiniteSet {
        let mut out: Vec<GroupElement> = self
            .elements
            .par_iter()
            .map(|s| self.spec.double(s))
            .collect();
        out.par_sort_unstable();
        out.dedup();
        FiniteSet::from_sorted_unchecked(self.spec, out)
    }

    /// `S/2`, the full preimage under doubling.
    pub fn half_preimage(&self) -> Result<FiniteSet> {
        let kernel = self.spec.kernel_elements()?;
        let evens = self
            .elements
            .iter()
            .filter(|g| self.spec.in_two_g(g))
            .count();
        check_cap(evens as u128 * kernel.len() as u128)?;
        let parts: Vec<Vec<GroupElement>> = self
            .elements
            .par_iter()
            .map(|g| self.spec.halve_with_kernel(g, &kernel))
            .collect::<Result<_>>()?;
        Self::from_unsorted(self.spec, parts.into_iter().flatten().collect())
    }

    /// `|S/2|`, counted without materializing the preimage.
    pub fn half_preimage_len(&self) -> Result<usize> {
        let kernel = self.spec.kernel_elements()?;
        // Preimages of distinct elements are disjoint.
        self.elements
            .par_iter()
            .map(|g| self.spec.halve_with_kernel(g, &kernel).map(|h| h.len()))
            .try_reduce(|| 0, |a, b| Ok(a + b))
    }

    /// `S ∩ 2G`.
    pub fn even_part(&self) -> FiniteSet {
        self.filter(|g| self.spec.in_two_g(g))
    }

    pub fn union(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_spec(other)?;
        let (a, b) = (&self.elements, &other.elements);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j].clone());
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i].clone());
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        check_cap(out.len() as u128)?;
        Ok(FiniteSet::from_sorted_unchecked(self.spec, out))
    }

    pub fn intersection(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_spec(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small.filter(|g| large.contains(g)))
    }

    pub fn difference(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.same_spec(other)?;
        Ok(self.filter(|g| !other.contains(g)))
    }

    pub fn symmetric_difference(&self, other: &FiniteSet) -> Result<FiniteSet> {
        self.difference(other)?.union(&other.difference(self)?)
    }

    /// `|S ∩ T|` without building the intersection.
    pub fn intersection_len(&self, other: &FiniteSet) -> Result<usize> {
        self.same_spec(other)?;
        let (small, large) = if self.len() <= other.len() {
            (self, other)
        } else {
            (other, self)
        };
        Ok(small.count_where(|g| large.contains(g)))
    }

    pub fn is_subset(&self, other: &FiniteSet) -> bool {
        self.spec == other.spec && self.elements.iter().all(|g| other.contains(g))
    }

    /// Element literals in canonical order.
    pub fn literals(&self) -> Vec<String> {
        self.elements
            .iter()
            .map(|g| self.spec.format_element(g))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::from(self.literals())
    }

    pub fn from_json(spec: GroupSpec, value: &serde_json::Value) -> Result<Self> {
        let items = value
            .as_array()
            .ok_or_else(|| Error::Parse("expected a JSON array of element literals".into()))?;
        let lits = items
            .iter()
            .map(|v| {
                v.as_str()
                    .ok_or_else(|| Error::Parse(format!("expected a string literal, found {v}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::parse(spec, &lits)
    }

    /// Order-independent 64-bit fold of SHA-256 element hashes.
    pub fn fold_hash(&self) -> u64 {
        self.elements
            .par_iter()
            .map(|g| element_hash(&self.spec, g))
            .reduce(|| 0u64, u64::wrapping_add)
    }

    pub fn digest(&self, sample: usize) -> SetDigest {
        SetDigest {
            size: self.len(),
            sample: self
                .elements
                .iter()
                .take(sample)
                .map(|g| self.spec.format_element(g))
                .collect(),
            hash: format!("{:016x}", self.fold_hash()),
        }
    }
}

fn merge_sets(mut a: HashSet<GroupElement>, mut b: HashSet<GroupElement>) -> HashSet<GroupElement> {
    if a.len() < b.len() {
        std::mem::swap(&mut a, &mut b);
    }
    a.extend(b);
    a
}

/// First eight bytes of SHA-256 over the canonical literal.
pub fn element_hash(spec: &GroupSpec, g: &GroupElement) -> u64 {
    let bytes = Sha256::digest(spec.format_element(g).as_bytes());
    let mut word = [0u8; 8];
    word.copy_from_slice(&bytes[..8]);
    u64::from_le_bytes(word)
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a GroupElement;
    type IntoIter = std::slice::Iter<'a, GroupElement>;

    fn into_iter(self) -> Self::IntoIter {
        self.elements.iter()
    }
}
