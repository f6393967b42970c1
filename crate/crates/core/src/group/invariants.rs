use serde::Serialize;

use super::dyadic::Dyadic;
use super::element::GroupElement;
use super::int::Int;
use super::spec::GroupSpec;
use crate::error::{Error, Result};
use crate::set::FiniteSet;

/// Largest `log2` of `ℓ` or `r` for which representatives are listed.
pub const MAX_LISTED_LOG2: u32 = 20;

/// `ker D` and a transversal `g_1 = 0, g_2, …, g_ℓ` of `G / 2G`.
#[derive(Clone, Debug, Serialize)]
pub struct KernelAndCosets {
    #[serde(skip)]
    pub kernel: FiniteSet,
    #[serde(skip)]
    pub coset_reps: Vec<GroupElement>,
    pub ell: u64,
    pub r: u64,
}

impl KernelAndCosets {
    /// Index `i` (0-based) with `g − g_i ∈ 2G`.
    pub fn coset_of(&self, spec: &GroupSpec, g: &GroupElement) -> usize {
        let rep = spec.coset_rep(g);
        self.coset_reps
            .binary_search(&rep)
            .expect("coset representative is listed")
    }
}

impl GroupSpec {
    /// All of `ker D`: `{0, 1/2}^{d2}`, times the whole `F_2^n` factor if present.
    pub fn kernel_elements(&self) -> Result<Vec<GroupElement>> {
        let log = self
            .r_log2()
            .ok_or_else(|| Error::Unsupported(format!("ker D is infinite in {self}")))?;
        if log > MAX_LISTED_LOG2 {
            return Err(Error::WindowTooLarge {
                size: format!("2^{log}"),
                cap: 1 << MAX_LISTED_LOG2,
            });
        }
        let d2 = self.dense_torus_rank();
        let f2 = self.f2_rank();
        let mut out = Vec::with_capacity(1 << log);
        for mask in 0u64..(1 << log) {
            let mut g = self.zero();
            for j in 0..d2 {
                if mask >> j & 1 == 1 {
                    g.dyadics[j] = Dyadic::HALF;
                }
            }
            g.residues = (0..f2)
                .filter(|i| mask >> (d2 as u32 + i) & 1 == 1)
                .map(|i| (i + 1, 1))
                .collect();
            out.push(g);
        }
        out.sort();
        Ok(out)
    }

    /// Canonical coset representatives `{0,1}^{d1}`, times `F_2^n` if present.
    pub fn coset_reps(&self) -> Result<Vec<GroupElement>> {
        let log = self.ell_log2();
        if log > MAX_LISTED_LOG2 {
            return Err(Error::WindowTooLarge {
                size: format!("2^{log}"),
                cap: 1 << MAX_LISTED_LOG2,
            });
        }
        let d1 = self.int_rank();
        let f2 = self.f2_rank();
        let mut out = Vec::with_capacity(1 << log);
        for mask in 0u64..(1 << log) {
            let mut g = self.zero();
            for j in 0..d1 {
                g.ints[j] = Int::Small((mask >> j & 1) as i64);
            }
            g.residues = (0..f2)
                .filter(|i| mask >> (d1 as u32 + i) & 1 == 1)
                .map(|i| (i + 1, 1))
                .collect();
            out.push(g);
        }
        out.sort();
        Ok(out)
    }

    /// The canonical representative of `g + 2G`.
    pub fn coset_rep(&self, g: &GroupElement) -> GroupElement {
        let mut rep = self.zero();
        for (slot, x) in rep.ints.iter_mut().zip(g.ints()) {
            *slot = Int::Small(if x.is_even() { 0 } else { 1 });
        }
        if self.prime() == Some(2) {
            rep.residues = g.residues.clone();
        }
        rep
    }

    pub fn invariants(&self) -> Result<KernelAndCosets> {
        let kernel = FiniteSet::from_sorted_unchecked(*self, self.kernel_elements()?);
        Ok(KernelAndCosets {
            kernel,
            coset_reps: self.coset_reps()?,
            ell: self.ell(),
            r: self.r().unwrap_or(0),
        })
    }

    /// All `h` with `2h = g`; empty when `g ∉ 2G`.
    pub fn halve_preimages(&self, g: &GroupElement) -> Result<Vec<GroupElement>> {
        let kernel = self.kernel_elements()?;
        self.halve_with_kernel(g, &kernel)
    }

    pub(crate) fn halve_with_kernel(
        &self,
        g: &GroupElement,
        kernel: &[GroupElement],
    ) -> Result<Vec<GroupElement>> {
        let Some(h0) = self.half_one(g)? else {
            return Ok(Vec::new());
        };
        let mut out: Vec<GroupElement> =
            kernel.iter().map(|k| self.add_unchecked(&h0, k)).collect();
        out.sort();
        Ok(out)
    }

    /// `w`: largest torus degree over all coordinates.
    pub fn weight(&self, g: &GroupElement) -> Result<u32> {
        self.require_torus("w")?;
        let dense = g.dyadics.iter().map(Dyadic::degree).max().unwrap_or(0);
        let sparse = g
            .dyadic_support
            .iter()
            .map(|(_, v)| v.degree())
            .max()
            .unwrap_or(0);
        Ok(dense.max(sparse))
    }

    /// `η`: least 1-based torus index attaining `w`; `1` for the zero vector.
    pub fn eta(&self, g: &GroupElement) -> Result<usize> {
        let w = self.weight(g)?;
        if w == 0 {
            return Ok(1);
        }
        if let Some(pos) = g.dyadics.iter().position(|v| v.degree() == w) {
            return Ok(pos + 1);
        }
        Ok(g.dyadic_support
            .iter()
            .find(|(_, v)| v.degree() == w)
            .map(|&(i, _)| i as usize)
            .unwrap_or(1))
    }

    /// `ι`: greatest index of a nonzero `F_p` coordinate, `0` if none.
    pub fn support_top(&self, g: &GroupElement) -> u32 {
        g.residues.last().map(|&(i, _)| i).unwrap_or(0)
    }

    /// `τ`: greatest index of a nonzero `T^ω` coordinate, `0` if none.
    pub fn tau(&self, g: &GroupElement) -> Result<u32> {
        if !self.is_torus_omega() {
            return Err(Error::Unsupported(format!(
                "τ needs a T^w factor, not {self}"
            )));
        }
        Ok(g.dyadic_support.last().map(|&(i, _)| i).unwrap_or(0))
    }

    fn require_torus(&self, what: &str) -> Result<()> {
        if self.dense_torus_rank() == 0 && !self.is_torus_omega() {
            return Err(Error::Unsupported(format!(
                "{what} needs a torus factor, not {self}"
            )));
        }
        Ok(())
    }
}

/// `w` of a plain vector of torus coordinates.
pub fn weight_of(y: &[Dyadic]) -> u32 {
    y.iter().map(Dyadic::degree).max().unwrap_or(0)
}

/// `η` of a plain vector of torus coordinates (1-based).
pub fn eta_of(y: &[Dyadic]) -> usize {
    let w = weight_of(y);
    y.iter()
        .position(|v| v.degree() == w)
        .map(|p| p + 1)
        .unwrap_or(1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(k: u64, n: u32) -> Dyadic {
        Dyadic::new(k, n).unwrap()
    }

    #[test]
    fn z2_invariants() {
        let inv = GroupSpec::integers(2).invariants().unwrap();
        assert_eq!((inv.ell, inv.r), (4, 1));
        let lits: Vec<String> = inv.coset_reps.iter().map(ToString::to_string).collect();
        assert_eq!(lits, ["(0, 0)", "(0, 1)", "(1, 0)", "(1, 1)"]);
    }

    #[test]
    fn torus_kernel() {
        let spec = GroupSpec::torus(1);
        let inv = spec.invariants().unwrap();
        assert_eq!((inv.ell, inv.r), (1, 2));
        let k: Vec<Dyadic> = inv.kernel.iter().map(|g| g.dyadics()[0]).collect();
        assert_eq!(k, [Dyadic::ZERO, Dyadic::HALF]);
    }

    #[test]
    fn fp_trivial_invariants() {
        let inv = GroupSpec::fp_omega(3).unwrap().invariants().unwrap();
        assert_eq!((inv.ell, inv.r), (1, 1));
    }

    #[test]
    fn eta_example() {
        assert_eq!(eta_of(&[Dyadic::ZERO, d(1, 3), d(3, 3)]), 2);
        assert_eq!(weight_of(&[d(3, 3), Dyadic::HALF]), 3);
    }

    #[test]
    fn quarter_halves() {
        let spec = GroupSpec::torus(1);
        let g = spec.parse_element("1/4").unwrap();
        let h = spec.halve_preimages(&g).unwrap();
        assert_eq!(
            h,
            [
                spec.parse_element("1/8").unwrap(),
                spec.parse_element("5/8").unwrap()
            ]
        );
        let z = GroupSpec::integers(1);
        assert!(z
            .halve_preimages(&z.from_ints([3]).unwrap())
            .unwrap()
            .is_empty());
    }
}
