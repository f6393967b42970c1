use std::fmt;

use smallvec::SmallVec;

use super::dyadic::Dyadic;
use super::int::Int;
use super::spec::{FpDim, GroupSpec, TorusRank};
use crate::error::{Error, Result};

pub type IntCoords = SmallVec<[Int; 2]>;
pub type TorusCoords = SmallVec<[Dyadic; 2]>;

/// A point of a [`GroupSpec`] group in normal form.
///
/// Sparse parts hold `(index, value)` pairs with 1-based, strictly
/// increasing indices and no zero values. The derived ordering is the
/// canonical element order: integer coordinates, then torus coordinates
/// (each compared as `(degree, numerator)`), then sparse entries by index.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    pub(crate) ints: IntCoords,
    pub(crate) dyadics: TorusCoords,
    pub(crate) dyadic_support: Vec<(u32, Dyadic)>,
    pub(crate) residues: Vec<(u32, u32)>,
}

impl GroupElement {
    pub fn ints(&self) -> &[Int] {
        &self.ints
    }

    pub fn dyadics(&self) -> &[Dyadic] {
        &self.dyadics
    }

    /// Nonzero coordinates of a `T^ω` element.
    pub fn dyadic_support(&self) -> &[(u32, Dyadic)] {
        &self.dyadic_support
    }

    /// Nonzero coordinates of the `F_p` part.
    pub fn residues(&self) -> &[(u32, u32)] {
        &self.residues
    }

    pub fn is_zero(&self) -> bool {
        self.ints.iter().all(Int::is_zero)
            && self.dyadics.iter().all(Dyadic::is_zero)
            && self.dyadic_support.is_empty()
            && self.residues.is_empty()
    }

    /// Residue at a 1-based `F_p` coordinate.
    pub fn residue(&self, index: u32) -> u32 {
        self.residues
            .binary_search_by_key(&index, |&(i, _)| i)
            .map(|pos| self.residues[pos].1)
            .unwrap_or(0)
    }

    /// Torus coordinate at 1-based `index`, for either torus layout.
    pub fn torus_coord(&self, index: usize) -> Dyadic {
        if index >= 1 && index <= self.dyadics.len() {
            return self.dyadics[index - 1];
        }
        self.dyadic_support
            .binary_search_by_key(&(index as u32), |&(i, _)| i)
            .map(|pos| self.dyadic_support[pos].1)
            .unwrap_or(Dyadic::ZERO)
    }

    /// Concatenation of coordinates, for direct products.
    pub fn concat(&self, other: &GroupElement) -> GroupElement {
        let mut ints = self.ints.clone();
        ints.extend(other.ints.iter().cloned());
        let mut dyadics = self.dyadics.clone();
        dyadics.extend(other.dyadics.iter().copied());
        let dyadic_support = if self.dyadic_support.is_empty() {
            other.dyadic_support.clone()
        } else {
            self.dyadic_support.clone()
        };
        let residues = if self.residues.is_empty() {
            other.residues.clone()
        } else {
            self.residues.clone()
        };
        GroupElement {
            ints,
            dyadics,
            dyadic_support,
            residues,
        }
    }
}

/// Builder for elements; values are normalized by [`GroupSpec::element`].
#[derive(Clone, Debug, Default)]
pub struct ElementParts {
    pub ints: Vec<Int>,
    pub dyadics: Vec<Dyadic>,
    pub dyadic_support: Vec<(u32, Dyadic)>,
    pub residues: Vec<(u32, u32)>,
}

fn merge_sparse<T: Copy>(
    a: &[(u32, T)],
    b: &[(u32, T)],
    combine: impl Fn(T, T) -> Option<T>,
) -> Vec<(u32, T)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                if let Some(v) = combine(a[i].1, b[j].1) {
                    out.push((a[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl GroupSpec {
    pub fn zero(&self) -> GroupElement {
        GroupElement {
            ints: SmallVec::from_elem(Int::ZERO, self.int_rank()),
            dyadics: SmallVec::from_elem(Dyadic::ZERO, self.dense_torus_rank()),
            dyadic_support: Vec::new(),
            residues: Vec::new(),
        }
    }

    /// Normalize raw parts into an element of this group.
    pub fn element(&self, parts: ElementParts) -> Result<GroupElement> {
        let mut residues: Vec<(u32, u32)> = Vec::new();
        if let Some(fp) = self.fp() {
            let mut raw = parts.residues;
            raw.sort_by_key(|&(i, _)| i);
            for (i, v) in raw {
                if i == 0 {
                    return Err(self.invalid("F_p indices are 1-based"));
                }
                let v = v % fp.p;
                match residues.last_mut() {
                    Some(last) if last.0 == i => last.1 = (last.1 + v) % fp.p,
                    _ => residues.push((i, v)),
                }
            }
            residues.retain(|&(_, v)| v != 0);
        } else if !parts.residues.is_empty() {
            return Err(self.invalid("group has no F_p factor"));
        }
        let mut support: Vec<(u32, Dyadic)> = Vec::new();
        if self.is_torus_omega() {
            let mut raw = parts.dyadic_support;
            raw.sort_by_key(|&(i, _)| i);
            for (i, v) in raw {
                if i == 0 {
                    return Err(self.invalid("torus indices are 1-based"));
                }
                match support.last_mut() {
                    Some(last) if last.0 == i => last.1 = last.1.add(&v),
                    _ => support.push((i, v)),
                }
            }
            support.retain(|(_, v)| !v.is_zero());
        } else if !parts.dyadic_support.is_empty() {
            return Err(self.invalid("group has no T^w factor"));
        }
        let g = GroupElement {
            ints: parts.ints.into(),
            dyadics: parts.dyadics.into(),
            dyadic_support: support,
            residues,
        };
        self.validate(&g)?;
        Ok(g)
    }

    pub fn from_ints<I: Into<Int>>(
        &self,
        ints: impl IntoIterator<Item = I>,
    ) -> Result<GroupElement> {
        self.element(ElementParts {
            ints: ints.into_iter().map(Into::into).collect(),
            dyadics: vec![Dyadic::ZERO; self.dense_torus_rank()],
            ..Default::default()
        })
    }

    fn invalid(&self, reason: &str) -> Error {
        Error::InvalidElement {
            spec: self.to_string(),
            reason: reason.to_string(),
        }
    }

    /// Check that `g` is a normalized element of this group.
    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        if g.ints.len() != self.int_rank() {
            return Err(self.invalid(&format!(
                "expected {} integer coordinates, found {}",
                self.int_rank(),
                g.ints.len()
            )));
        }
        if g.dyadics.len() != self.dense_torus_rank() {
            return Err(self.invalid(&format!(
                "expected {} torus coordinates, found {}",
                self.dense_torus_rank(),
                g.dyadics.len()
            )));
        }
        if !self.is_torus_omega() && !g.dyadic_support.is_empty() {
            return Err(self.invalid("unexpected T^w coordinates"));
        }
        if !sparse_ok(&g.dyadic_support, |v| !v.is_zero()) {
            return Err(self.invalid("T^w support must be strictly increasing and nonzero"));
        }
        match self.fp() {
            None if !g.residues.is_empty() => {
                return Err(self.invalid("unexpected F_p coordinates"))
            }
            None => {}
            Some(fp) => {
                if !sparse_ok(&g.residues, |&v| v != 0 && v < fp.p) {
                    return Err(
                        self.invalid("F_p residues must be in 1..p with increasing indices")
                    );
                }
                if let (FpDim::Finite(n), Some(&(top, _))) = (fp.dim, g.residues.last()) {
                    if top > n {
                        return Err(self.invalid(&format!("F_p index {top} exceeds dimension {n}")));
                    }
                }
            }
        }
        Ok(())
    }

    fn check_shape(&self, g: &GroupElement) -> Result<()> {
        if g.ints.len() != self.int_rank() || g.dyadics.len() != self.dense_torus_rank() {
            return Err(Error::SpecMismatch {
                expected: self.to_string(),
                found: format!("element {g:?}"),
            });
        }
        Ok(())
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.check_shape(a)?;
        self.check_shape(b)?;
        Ok(self.add_unchecked(a, b))
    }

    pub(crate) fn add_unchecked(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        let p = self.prime().unwrap_or(1);
        GroupElement {
            ints: a.ints.iter().zip(&b.ints).map(|(x, y)| x.add(y)).collect(),
            dyadics: a
                .dyadics
                .iter()
                .zip(&b.dyadics)
                .map(|(x, y)| x.add(y))
                .collect(),
            dyadic_support: merge_sparse(&a.dyadic_support, &b.dyadic_support, |x, y| {
                let s = x.add(&y);
                (!s.is_zero()).then_some(s)
            }),
            residues: merge_sparse(&a.residues, &b.residues, |x, y| {
                let s = (x + y) % p;
                (s != 0).then_some(s)
            }),
        }
    }

    pub fn neg(&self, g: &GroupElement) -> GroupElement {
        let p = self.prime().unwrap_or(1);
        GroupElement {
            ints: g.ints.iter().map(Int::neg).collect(),
            dyadics: g.dyadics.iter().map(Dyadic::neg).collect(),
            dyadic_support: g
                .dyadic_support
                .iter()
                .map(|&(i, v)| (i, v.neg()))
                .collect(),
            residues: g.residues.iter().map(|&(i, v)| (i, p - v)).collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> Result<GroupElement> {
        self.add(a, &self.neg(b))
    }

    /// The doubling map `g ↦ g + g`.
    pub fn double(&self, g: &GroupElement) -> GroupElement {
        let p = self.prime().unwrap_or(1);
        GroupElement {
            ints: g.ints.iter().map(Int::double).collect(),
            dyadics: g.dyadics.iter().map(Dyadic::double).collect(),
            dyadic_support: g
                .dyadic_support
                .iter()
                .map(|&(i, v)| (i, v.double()))
                .filter(|(_, v)| !v.is_zero())
                .collect(),
            residues: g
                .residues
                .iter()
                .map(|&(i, v)| (i, (2 * v) % p))
                .filter(|&(_, v)| v != 0)
                .collect(),
        }
    }

    /// Integer multiple `n·g`.
    pub fn scale(&self, g: &GroupElement, n: u64) -> GroupElement {
        let mut acc = self.zero();
        let mut base = g.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            base = self.double(&base);
            n >>= 1;
        }
        acc
    }

    /// Membership in `2G`, decided factorwise: integer coordinates must be
    /// even, `F_2` coordinates zero; torus and odd `F_p` are 2-divisible.
    pub fn in_two_g(&self, g: &GroupElement) -> bool {
        if !g.ints.iter().all(Int::is_even) {
            return false;
        }
        !(self.prime() == Some(2) && !g.residues.is_empty())
    }

    /// One solution `h` of `2h = g`, if any.
    pub fn half_one(&self, g: &GroupElement) -> Result<Option<GroupElement>> {
        if !self.in_two_g(g) {
            return Ok(None);
        }
        if self.is_torus_omega() {
            // Infinitely many halves exist; return the one with the same support.
            let mut support = Vec::with_capacity(g.dyadic_support.len());
            for &(i, v) in &g.dyadic_support {
                support.push((i, v.halves()?[0]));
            }
            return Ok(Some(GroupElement {
                ints: g.ints.iter().map(Int::half_floor).collect(),
                dyadics: SmallVec::new(),
                dyadic_support: support,
                residues: Vec::new(),
            }));
        }
        let mut dyadics = TorusCoords::with_capacity(g.dyadics.len());
        for v in &g.dyadics {
            dyadics.push(v.halves()?[0]);
        }
        let residues = match self.prime() {
            Some(p) if p != 2 => {
                let inv2 = p.div_ceil(2);
                g.residues
                    .iter()
                    .map(|&(i, v)| (i, ((v as u64 * inv2 as u64) % p as u64) as u32))
                    .collect()
            }
            _ => Vec::new(),
        };
        Ok(Some(GroupElement {
            ints: g.ints.iter().map(Int::half_floor).collect(),
            dyadics,
            dyadic_support: Vec::new(),
            residues,
        }))
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        super::literal::parse_element(self, s)
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        super::literal::format_element(self, g)
    }
}

fn sparse_ok<T>(entries: &[(u32, T)], ok: impl Fn(&T) -> bool) -> bool {
    entries.windows(2).all(|w| w[0].0 < w[1].0) && entries.iter().all(|(i, v)| *i >= 1 && ok(v))
}

/// Sup norm of the integer part.
pub fn sup_norm(g: &GroupElement) -> Int {
    g.ints.iter().map(Int::abs).max().unwrap_or_default()
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut items: Vec<String> = self.ints.iter().map(ToString::to_string).collect();
        items.extend(self.dyadics.iter().map(ToString::to_string));
        if !self.dyadic_support.is_empty() {
            let inner: Vec<String> = self
                .dyadic_support
                .iter()
                .map(|(i, v)| format!("{i}:{v}"))
                .collect();
            items.push(format!("{{{}}}", inner.join(",")));
        }
        if !self.residues.is_empty() {
            let inner: Vec<String> = self
                .residues
                .iter()
                .map(|(i, v)| format!("{i}:{v}"))
                .collect();
            items.push(format!("{{{}}}", inner.join(",")));
        }
        write!(f, "({})", items.join(", "))
    }
}

impl TorusRank {
    pub fn is_omega(&self) -> bool {
        matches!(self, TorusRank::Omega)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_torus_sum() {
        let g: GroupSpec = "Z^1 x T2^1".parse().unwrap();
        let a = g.parse_element("(1, 1/2^1)").unwrap();
        let b = g.parse_element("(2, 1/2^1)").unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.parse_element("(3, 0)").unwrap());
    }

    #[test]
    fn fp_sum_drops_zeros() {
        let g = GroupSpec::fp_omega(3).unwrap();
        let a = g.parse_element("{1:1}").unwrap();
        let b = g.parse_element("{1:2}").unwrap();
        assert_eq!(g.add(&a, &b).unwrap(), g.zero());
        assert!(g.add(&a, &b).unwrap().residues().is_empty());
    }

    #[test]
    fn doubling_per_factor() {
        let g: GroupSpec = "Z^1 x T2^1 x F5^w".parse().unwrap();
        let x = g.parse_element("(5, 3/2^3, {2:3})").unwrap();
        assert_eq!(g.double(&x), g.parse_element("(10, 3/2^2, {2:1})").unwrap());
    }

    #[test]
    fn mismatch_rejected() {
        let z1 = GroupSpec::integers(1);
        let z2 = GroupSpec::integers(2);
        let a = z2.from_ints([1, 2]).unwrap();
        assert!(matches!(z1.add(&a, &a), Err(Error::SpecMismatch { .. })));
    }

    #[test]
    fn two_g_membership() {
        let g: GroupSpec = "Z^2 x T2^1".parse().unwrap();
        assert!(g.in_two_g(&g.parse_element("(2, -4, 1/2^5)").unwrap()));
        assert!(!g.in_two_g(&g.parse_element("(2, 3, 0)").unwrap()));
        let f2 = GroupSpec::fp_power(2, 3).unwrap();
        assert!(!f2.in_two_g(&f2.parse_element("{2:1}").unwrap()));
        assert!(f2.in_two_g(&f2.zero()));
    }

    #[test]
    fn scale_matches_repeated_addition() {
        let g = GroupSpec::fp_omega(7).unwrap();
        let x = g.parse_element("{1:3,4:5}").unwrap();
        let mut acc = g.zero();
        for _ in 0..5 {
            acc = g.add(&acc, &x).unwrap();
        }
        assert_eq!(g.scale(&x, 5), acc);
    }
}
