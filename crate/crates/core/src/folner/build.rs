//! Cartesian construction of windows from per-coordinate value lists.

use crate::error::{Error, Result};
use crate::group::{Dyadic, GroupElement, GroupSpec, Int};
use crate::set::check_cap;

/// Values one coordinate ranges over.
pub(crate) enum Axis<'a> {
    Int(usize, &'a [Int]),
    Torus(usize, &'a [Dyadic]),
    /// 1-based `T^ω` coordinate.
    SparseTorus(u32, &'a [Dyadic]),
    /// 1-based `F_p` coordinate ranging over all residues.
    Fp(u32, u32),
}

impl Axis<'_> {
    fn len(&self) -> usize {
        match self {
            Axis::Int(_, v) => v.len(),
            Axis::Torus(_, v) | Axis::SparseTorus(_, v) => v.len(),
            Axis::Fp(_, p) => *p as usize,
        }
    }
}

/// All elements whose coordinates range independently over `axes`;
/// coordinates not mentioned are zero. Output is unsorted.
pub(crate) fn cartesian(spec: &GroupSpec, axes: &[Axis<'_>]) -> Result<Vec<GroupElement>> {
    let total = axes
        .iter()
        .fold(1u128, |acc, a| acc.saturating_mul(a.len() as u128));
    check_cap(total)?;
    let mut acc = vec![spec.zero()];
    for axis in axes {
        let mut next = Vec::with_capacity(acc.len() * axis.len());
        for g in &acc {
            match axis {
                Axis::Int(j, vals) => {
                    for v in vals.iter() {
                        let mut h = g.clone();
                        h.ints[*j] = v.clone();
                        next.push(h);
                    }
                }
                Axis::Torus(j, vals) => {
                    for v in vals.iter() {
                        let mut h = g.clone();
                        h.dyadics[*j] = *v;
                        next.push(h);
                    }
                }
                Axis::SparseTorus(i, vals) => {
                    for v in vals.iter() {
                        let mut h = g.clone();
                        if !v.is_zero() {
                            h.dyadic_support.push((*i, *v));
                        }
                        next.push(h);
                    }
                }
                Axis::Fp(i, p) => {
                    for v in 0..*p {
                        let mut h = g.clone();
                        if v != 0 {
                            h.residues.push((*i, v));
                        }
                        next.push(h);
                    }
                }
            }
        }
        acc = next;
    }
    Ok(acc)
}

/// `I_k = [−2^k, 2^k] ∖ {0}`.
pub fn punctured_interval(k: u32) -> Result<Vec<Int>> {
    if k > 62 {
        return Err(Error::OutOfRange(format!("interval exponent {k}")));
    }
    check_cap(2u128 << k)?;
    let h = 1i64 << k;
    Ok((-h..=h).filter(|&x| x != 0).map(Int::Small).collect())
}

/// `[−n, n]`.
pub fn centered_interval(n: u64) -> Result<Vec<Int>> {
    check_cap(2 * n as u128 + 1)?;
    let n = n as i64;
    Ok((-n..=n).map(Int::Small).collect())
}

/// `I_{k}^{d1} × C_{n}^{d2}` inside `Z^{d1} × T^{d2}`.
pub(crate) fn block(spec: &GroupSpec, k: u32, n: u32) -> Result<Vec<GroupElement>> {
    let ints = punctured_interval(k)?;
    let level = Dyadic::level(n)?;
    let mut axes: Vec<Axis<'_>> = (0..spec.int_rank()).map(|j| Axis::Int(j, &ints)).collect();
    axes.extend((0..spec.dense_torus_rank()).map(|j| Axis::Torus(j, &level)));
    cartesian(spec, &axes)
}
