//! A fixed enumeration `x_1, x_2, …` of the group, built from shells of natural windows.
//!
//! `W_0 = {0}` and `W_m = [−m, m]^{d1} × F_m^{d2} × (F_p vectors supported in [1, m])`,
//! with `F_m^m` on the first `m` coordinates for `T^ω`. Shell `m` is `W_m ∖ W_{m−1}`
//! in canonical order.

use std::sync::Mutex;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use super::build::{cartesian, centered_interval, Axis};
use crate::error::{Error, Result};
use crate::group::{Dyadic, FpDim, GroupElement, GroupSpec};
use crate::set::FiniteSet;

/// `|W_m|`.
pub fn natural_size(spec: &GroupSpec, m: u64) -> BigUint {
    let m32 = m.min(u64::from(u32::MAX)) as u32;
    let mut size = num_traits::pow(BigUint::from(2 * m + 1), spec.int_rank());
    size *= BigUint::from(1u8) << (m as usize * spec.dense_torus_rank());
    if spec.is_torus_omega() {
        size *= BigUint::from(1u8) << (m as usize * m as usize);
    }
    if let Some(fp) = spec.fp() {
        let len = match fp.dim {
            FpDim::Omega => m32,
            FpDim::Finite(n) => m32.min(n),
        };
        size *= num_traits::pow(BigUint::from(fp.p), len as usize);
    }
    size
}

/// `W_m` as a set.
pub fn natural_window(spec: &GroupSpec, m: u64) -> Result<FiniteSet> {
    crate::set::check_cap(natural_size(spec, m).to_u128().unwrap_or(u128::MAX))?;
    let m32 = u32::try_from(m).map_err(|_| Error::OutOfRange(format!("window {m}")))?;
    let ints = centered_interval(m)?;
    let needs_torus = spec.dense_torus_rank() > 0 || spec.is_torus_omega();
    let torus = if needs_torus {
        Dyadic::prefix(m32)?
    } else {
        Vec::new()
    };
    let mut axes: Vec<Axis<'_>> = (0..spec.int_rank()).map(|j| Axis::Int(j, &ints)).collect();
    axes.extend((0..spec.dense_torus_rank()).map(|j| Axis::Torus(j, &torus)));
    if spec.is_torus_omega() {
        axes.extend((1..=m32).map(|i| Axis::SparseTorus(i, &torus)));
    }
    if let Some(fp) = spec.fp() {
        let len = match fp.dim {
            FpDim::Omega => m32,
            FpDim::Finite(n) => m32.min(n),
        };
        axes.extend((1..=len).map(|i| Axis::Fp(i, fp.p)));
    }
    FiniteSet::from_unsorted(*spec, cartesian(spec, &axes)?)
}

/// Least `m` with `g ∈ W_m`.
pub fn natural_level(spec: &GroupSpec, g: &GroupElement) -> u64 {
    let mut m = 0u64;
    for x in g.ints() {
        let a = x.abs();
        m = m.max(a.as_i64().map(|v| v as u64).unwrap_or(u64::MAX));
    }
    for y in g.dyadics() {
        m = m.max(u64::from(y.degree()));
    }
    for (i, y) in g.dyadic_support() {
        m = m.max(u64::from(*i)).max(u64::from(y.degree()));
    }
    if spec.fp().is_some() {
        m = m.max(u64::from(spec.support_top(g)));
    }
    m
}

/// Lazily materialized enumeration of a group.
#[derive(Debug)]
pub struct Enumeration {
    spec: GroupSpec,
    /// Concatenated shells `0..=m` computed so far.
    cache: Mutex<(u64, Vec<GroupElement>)>,
}

impl Enumeration {
    pub fn new(spec: GroupSpec) -> Self {
        Enumeration {
            spec,
            cache: Mutex::new((0, vec![spec.zero()])),
        }
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    fn group_is_exhausted(&self, m: u64) -> bool {
        natural_size(&self.spec, m) == natural_size(&self.spec, m + 1)
            && self.spec.int_rank() == 0
            && self.spec.dense_torus_rank() == 0
            && !self.spec.is_torus_omega()
            && matches!(self.spec.fp().map(|f| f.dim), Some(FpDim::Finite(_)) | None)
    }

    fn extend_to(&self, len: usize) -> Result<Vec<GroupElement>> {
        let mut guard = self.cache.lock().expect("enumeration cache poisoned");
        while guard.1.len() < len {
            let m = guard.0;
            if self.group_is_exhausted(m) {
                return Err(Error::OutOfRange(format!(
                    "{} has only {} elements",
                    self.spec,
                    guard.1.len()
                )));
            }
            let next = natural_window(&self.spec, m + 1)?;
            let shell: Vec<GroupElement> = next
                .iter()
                .filter(|g| natural_level(&self.spec, g) == m + 1)
                .cloned()
                .collect();
            guard.1.extend(shell);
            guard.0 = m + 1;
        }
        Ok(guard.1[..len].to_vec())
    }

    /// `x_i`, 1-based.
    pub fn get(&self, i: usize) -> Result<GroupElement> {
        if i == 0 {
            return Err(Error::OutOfRange("enumeration indices start at 1".into()));
        }
        Ok(self.extend_to(i)?.pop().expect("nonempty"))
    }

    /// `x_1, …, x_k`.
    pub fn prefix(&self, k: usize) -> Result<Vec<GroupElement>> {
        self.extend_to(k)
    }

    /// The 1-based position of `g`.
    pub fn index_of(&self, g: &GroupElement) -> Result<usize> {
        self.spec.validate(g)?;
        let m = natural_level(&self.spec, g);
        let before = if m == 0 {
            0
        } else {
            natural_size(&self.spec, m - 1)
                .to_usize()
                .ok_or_else(|| Error::OutOfRange(format!("shell {m} is beyond reach")))?
        };
        let window = natural_window(&self.spec, m)?;
        let rank = window
            .iter()
            .filter(|h| natural_level(&self.spec, h) == m)
            .position(|h| h == g)
            .expect("element lies in its own shell");
        Ok(before + rank + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integers_enumerate_outward() {
        let spec = GroupSpec::integers(1);
        let e = Enumeration::new(spec);
        let lits: Vec<String> = e
            .prefix(5)
            .unwrap()
            .iter()
            .map(|g| spec.format_element(g))
            .collect();
        assert_eq!(lits, ["0", "-1", "1", "-2", "2"]);
        for i in 1..=9 {
            assert_eq!(e.index_of(&e.get(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn product_enumeration_round_trips() {
        let spec = GroupSpec::product(1, 1);
        let e = Enumeration::new(spec);
        for i in 1..=40 {
            assert_eq!(e.index_of(&e.get(i).unwrap()).unwrap(), i);
        }
    }

    #[test]
    fn finite_group_ends() {
        let spec = GroupSpec::fp_power(2, 2).unwrap();
        let e = Enumeration::new(spec);
        assert_eq!(e.prefix(4).unwrap().len(), 4);
        assert!(e.get(5).is_err());
    }

    #[test]
    fn natural_sizes_match() {
        for spec in [
            GroupSpec::product(1, 1),
            GroupSpec::fp_omega(3).unwrap(),
            GroupSpec::torus_omega(),
        ] {
            for m in 0..3 {
                let w = natural_window(&spec, m).unwrap();
                assert_eq!(w.count(), natural_size(&spec, m), "{spec} {m}");
            }
        }
    }
}
