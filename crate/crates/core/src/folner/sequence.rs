use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::build::{block, cartesian, Axis};
use super::enumeration::{natural_size, natural_window, Enumeration};
use super::expr::NExpr;
use super::tri::{TriKind, TriParams, VChoice};
use crate::error::{Error, Result};
use crate::group::{Dyadic, FpDim, GroupElement, GroupSpec, Int};
use crate::ratio::{ratio, Ratio};
use crate::set::{check_cap, FiniteSet};

/// How the shifts `g_N` of a shifted sequence are chosen.
#[derive(Clone, Debug)]
pub enum Shift {
    /// `g_N = (e(N), 0, …, 0)` on the first integer coordinate.
    Expr(NExpr),
    /// The first enumerated element outside `Φ_N − 2Φ_N`.
    Auto,
}

#[derive(Clone, Debug)]
pub enum Recipe {
    Box {
        d1: usize,
    },
    Dyadic {
        d2: usize,
    },
    /// `F_p` vectors supported in `[1, N]`.
    FpPrefix {
        p: u32,
    },
    /// `F_N^N` in `T^ω`.
    SquarePrefix,
    /// The enumeration windows `W_N`.
    Natural,
    Product(FolnerSequence, FolnerSequence),
    Triangular(TriParams),
    Amplify {
        base: FolnerSequence,
        k: u32,
    },
    ShiftSeq {
        base: FolnerSequence,
        shift: Shift,
        enumeration: Arc<Enumeration>,
    },
    Halve(FolnerSequence),
    Union(FolnerSequence, FolnerSequence),
    Intersect(FolnerSequence, FolnerSequence),
    /// `N ↦ base(index(N))`.
    Subseq {
        base: FolnerSequence,
        index: NExpr,
    },
    /// `k ↦ members[k−1](indices[k−1])`.
    Diagonal {
        members: Vec<FolnerSequence>,
        indices: Vec<u64>,
    },
    Explicit {
        name: String,
        windows: Arc<Vec<FiniteSet>>,
    },
}

/// An indexed family `N ↦ Φ_N` of finite windows, `N ≥ 1`.
#[derive(Clone, Debug)]
pub struct FolnerSequence {
    spec: GroupSpec,
    recipe: Arc<Recipe>,
}

/// Size and overlap guards for an intersection `Φ ∩ Ψ` at one index.
#[derive(Clone, Debug)]
pub struct IntersectionGuard {
    pub size_ratio: Ratio,
    pub overlap_of_first: Ratio,
    pub overlap_of_second: Ratio,
    pub satisfied: bool,
}

/// Size ratios outside `[1/GUARD_BOUND, GUARD_BOUND]` are flagged.
pub const GUARD_BOUND: u64 = 1 << 10;

impl FolnerSequence {
    fn from_recipe(spec: GroupSpec, recipe: Recipe) -> Self {
        FolnerSequence {
            spec,
            recipe: Arc::new(recipe),
        }
    }

    /// `[−N, N]^{d1}` in `Z^{d1}`.
    pub fn box_zd(d1: usize) -> Result<Self> {
        if d1 == 0 {
            return Err(Error::InvalidSpec("box needs d1 >= 1".into()));
        }
        Ok(Self::from_recipe(
            GroupSpec::integers(d1),
            Recipe::Box { d1 },
        ))
    }

    /// `F_N^{d2}` in `T^{d2}`.
    pub fn dyadic_prefix(d2: usize) -> Result<Self> {
        if d2 == 0 {
            return Err(Error::InvalidSpec("dyadic needs d2 >= 1".into()));
        }
        Ok(Self::from_recipe(
            GroupSpec::torus(d2),
            Recipe::Dyadic { d2 },
        ))
    }

    /// Vectors of `F_p^ω` supported in `[1, N]`.
    pub fn fp_prefix(p: u32) -> Result<Self> {
        Ok(Self::from_recipe(
            GroupSpec::fp_omega(p)?,
            Recipe::FpPrefix { p },
        ))
    }

    /// Vectors of `F_p^n` supported in `[1, min(N, n)]`.
    pub fn fp_power_prefix(p: u32, n: u32) -> Result<Self> {
        Ok(Self::from_recipe(
            GroupSpec::fp_power(p, n)?,
            Recipe::FpPrefix { p },
        ))
    }

    /// `F_N^N × {0}^ω` in `T^ω`.
    pub fn square_prefix() -> Self {
        Self::from_recipe(GroupSpec::torus_omega(), Recipe::SquarePrefix)
    }

    pub fn natural(spec: GroupSpec) -> Self {
        Self::from_recipe(spec, Recipe::Natural)
    }

    pub fn product(a: &FolnerSequence, b: &FolnerSequence) -> Result<Self> {
        let spec = a.spec.direct_product(&b.spec)?;
        Ok(Self::from_recipe(
            spec,
            Recipe::Product(a.clone(), b.clone()),
        ))
    }

    pub fn triangular(params: TriParams) -> Self {
        let spec = GroupSpec::product(params.d1, params.d2);
        Self::from_recipe(spec, Recipe::Triangular(params))
    }

    pub fn triangular_lger(d1: usize, d2: usize, c: NExpr, v: VChoice) -> Result<Self> {
        Ok(Self::triangular(TriParams::new(
            TriKind::Lger,
            d1,
            d2,
            c,
            v,
        )?))
    }

    pub fn triangular_lless(d1: usize, d2: usize, c: NExpr, v: VChoice) -> Result<Self> {
        Ok(Self::triangular(TriParams::new(
            TriKind::Lless,
            d1,
            d2,
            c,
            v,
        )?))
    }

    /// The q.i.d. amplifier of depth `k`.
    pub fn amplify(base: &FolnerSequence, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::Constraint("amplifier depth must be >= 1".into()));
        }
        if base.spec.r().is_none() {
            return Err(Error::Unsupported(format!(
                "amplifier needs a finite kernel, not {}",
                base.spec
            )));
        }
        Ok(Self::from_recipe(
            base.spec,
            Recipe::Amplify {
                base: base.clone(),
                k,
            },
        ))
    }

    /// `N ↦ g_N + Φ_N`.
    pub fn shift_seq(base: &FolnerSequence, shift: Shift) -> Result<Self> {
        if matches!(shift, Shift::Expr(_)) && base.spec.int_rank() == 0 {
            return Err(Error::Unsupported(format!(
                "expression shifts act on an integer coordinate; {} has none",
                base.spec
            )));
        }
        let enumeration = Arc::new(Enumeration::new(base.spec));
        Ok(Self::from_recipe(
            base.spec,
            Recipe::ShiftSeq {
                base: base.clone(),
                shift,
                enumeration,
            },
        ))
    }

    /// `N ↦ Φ_N / 2`.
    pub fn halve(base: &FolnerSequence) -> Result<Self> {
        if base.spec.r().is_none() {
            return Err(Error::Unsupported(format!(
                "halving needs a finite kernel, not {}",
                base.spec
            )));
        }
        Ok(Self::from_recipe(base.spec, Recipe::Halve(base.clone())))
    }

    pub fn union(a: &FolnerSequence, b: &FolnerSequence) -> Result<Self> {
        a.same_spec(b)?;
        Ok(Self::from_recipe(
            a.spec,
            Recipe::Union(a.clone(), b.clone()),
        ))
    }

    /// Windowwise intersection; see [`FolnerSequence::intersection_guard`].
    pub fn intersect(a: &FolnerSequence, b: &FolnerSequence) -> Result<Self> {
        a.same_spec(b)?;
        Ok(Self::from_recipe(
            a.spec,
            Recipe::Intersect(a.clone(), b.clone()),
        ))
    }

    pub fn subseq(base: &FolnerSequence, index: NExpr) -> Self {
        Self::from_recipe(
            base.spec,
            Recipe::Subseq {
                base: base.clone(),
                index,
            },
        )
    }

    pub fn diagonal(members: Vec<FolnerSequence>, indices: Vec<u64>) -> Result<Self> {
        let Some(first) = members.first() else {
            return Err(Error::Constraint(
                "diagonal needs at least one member".into(),
            ));
        };
        if members.len() != indices.len() {
            return Err(Error::Constraint(format!(
                "{} members but {} indices",
                members.len(),
                indices.len()
            )));
        }
        for m in &members {
            first.same_spec(m)?;
        }
        Ok(Self::from_recipe(
            first.spec,
            Recipe::Diagonal { members, indices },
        ))
    }

    pub fn explicit(name: &str, spec: GroupSpec, windows: Vec<FiniteSet>) -> Result<Self> {
        if windows.iter().any(|w| *w.spec() != spec) {
            return Err(Error::SpecMismatch {
                expected: spec.to_string(),
                found: "window of another group".into(),
            });
        }
        Ok(Self::from_recipe(
            spec,
            Recipe::Explicit {
                name: name.to_string(),
                windows: Arc::new(windows),
            },
        ))
    }

    fn same_spec(&self, other: &FolnerSequence) -> Result<()> {
        if self.spec != other.spec {
            return Err(Error::SpecMismatch {
                expected: self.spec.to_string(),
                found: other.spec.to_string(),
            });
        }
        Ok(())
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn recipe(&self) -> &Recipe {
        &self.recipe
    }

    /// Triangular parameters, when this is a triangular sequence.
    pub fn tri_params(&self) -> Option<&TriParams> {
        match &*self.recipe {
            Recipe::Triangular(t) => Some(t),
            _ => None,
        }
    }

    /// Number of windows, when finite.
    pub fn window_count(&self) -> Option<u64> {
        match &*self.recipe {
            Recipe::Explicit { windows, .. } => Some(windows.len() as u64),
            Recipe::Diagonal { members, .. } => Some(members.len() as u64),
            _ => None,
        }
    }

    fn check_index(&self, n: u64) -> Result<()> {
        if n == 0 {
            return Err(Error::OutOfRange("window indices start at 1".into()));
        }
        if let Some(len) = self.window_count() {
            if n > len {
                return Err(Error::OutOfRange(format!("{self} has only {len} windows")));
            }
        }
        Ok(())
    }

    /// An upper bound on `|Φ_N|`, exact for every recipe except amplify,
    /// union, intersect and halve.
    pub fn size_bound(&self, n: u64) -> Result<BigUint> {
        self.check_index(n)?;
        Ok(match &*self.recipe {
            Recipe::Box { d1 } => num_traits::pow(BigUint::from(2 * n + 1), *d1),
            Recipe::Dyadic { d2 } => BigUint::one() << (n as usize * d2),
            Recipe::FpPrefix { p } => {
                let len = match self.spec.fp().map(|f| f.dim) {
                    Some(FpDim::Finite(d)) => n.min(u64::from(d)),
                    _ => n,
                };
                num_traits::pow(BigUint::from(*p), len as usize)
            }
            Recipe::SquarePrefix => BigUint::one() << (n as usize * n as usize),
            Recipe::Natural => natural_size(&self.spec, n),
            Recipe::Product(a, b) => a.size_bound(n)? * b.size_bound(n)?,
            Recipe::Triangular(t) => t.size(n)?,
            Recipe::Amplify { base, k } => {
                let psi = base.size_bound(n)?;
                let ell = BigUint::from(self.spec.ell());
                let r = BigUint::from(self.spec.r().unwrap_or(1));
                let grow = if self.spec.ell() > self.spec.r().unwrap_or(1) {
                    ell
                } else {
                    r
                };
                let mut total = BigUint::zero();
                let mut level = psi.clone();
                if self.spec.ell() <= self.spec.r().unwrap_or(1) {
                    total += &psi;
                }
                for _ in 0..*k {
                    level *= &grow;
                    total += &level;
                }
                total
            }
            Recipe::ShiftSeq { base, .. } => base.size_bound(n)?,
            Recipe::Halve(base) => base.size_bound(n)? * BigUint::from(self.spec.r().unwrap_or(1)),
            Recipe::Union(a, b) => a.size_bound(n)? + b.size_bound(n)?,
            Recipe::Intersect(a, b) => a.size_bound(n)?.min(b.size_bound(n)?),
            Recipe::Subseq { base, index } => base.size_bound(Self::sub_index(index, n)?)?,
            Recipe::Diagonal { members, indices } => {
                members[n as usize - 1].size_bound(indices[n as usize - 1])?
            }
            Recipe::Explicit { windows, .. } => BigUint::from(windows[n as usize - 1].len()),
        })
    }

    fn sub_index(index: &NExpr, n: u64) -> Result<u64> {
        let m = index.eval_u64(n)?;
        if m == 0 {
            return Err(Error::OutOfRange(format!(
                "subsequence index {index} is 0 at N = {n}"
            )));
        }
        Ok(m)
    }

    /// Whether window `N` fits under the element cap.
    pub fn is_feasible(&self, n: u64) -> bool {
        self.size_bound(n)
            .ok()
            .and_then(|s| s.to_u128())
            .is_some_and(|s| check_cap(s).is_ok())
    }

    /// `Φ_N`.
    pub fn window(&self, n: u64) -> Result<FiniteSet> {
        check_cap(self.size_bound(n)?.to_u128().unwrap_or(u128::MAX))?;
        let spec = self.spec;
        match &*self.recipe {
            Recipe::Box { .. } | Recipe::Natural => natural_window(&spec, n),
            Recipe::Dyadic { d2 } => {
                let level = Dyadic::prefix(n as u32)?;
                let axes: Vec<Axis<'_>> = (0..*d2).map(|j| Axis::Torus(j, &level)).collect();
                FiniteSet::from_unsorted(spec, cartesian(&spec, &axes)?)
            }
            Recipe::FpPrefix { p } => {
                let len = match spec.fp().map(|f| f.dim) {
                    Some(FpDim::Finite(d)) => n.min(u64::from(d)),
                    _ => n,
                } as u32;
                let axes: Vec<Axis<'_>> = (1..=len).map(|i| Axis::Fp(i, *p)).collect();
                FiniteSet::from_unsorted(spec, cartesian(&spec, &axes)?)
            }
            Recipe::SquarePrefix => {
                let level = Dyadic::prefix(n as u32)?;
                let axes: Vec<Axis<'_>> = (1..=n as u32)
                    .map(|i| Axis::SparseTorus(i, &level))
                    .collect();
                FiniteSet::from_unsorted(spec, cartesian(&spec, &axes)?)
            }
            Recipe::Product(a, b) => {
                let (wa, wb) = (a.window(n)?, b.window(n)?);
                let mut out = Vec::with_capacity(wa.len() * wb.len());
                for x in wa.iter() {
                    for y in wb.iter() {
                        out.push(x.concat(y));
                    }
                }
                FiniteSet::from_unsorted(spec, out)
            }
            Recipe::Triangular(t) => {
                let mut out = Vec::new();
                for s in t.stripes(n)? {
                    out.extend(block(&spec, s.interval, s.level)?);
                }
                FiniteSet::from_unsorted(spec, out)
            }
            Recipe::Amplify { base, k } => self.amplified(&base.window(n)?, *k),
            Recipe::ShiftSeq { base, .. } => {
                let w = base.window(n)?;
                w.shift(&self.shift_at(n, &w)?)
            }
            Recipe::Halve(base) => base.window(n)?.half_preimage(),
            Recipe::Union(a, b) => a.window(n)?.union(&b.window(n)?),
            Recipe::Intersect(a, b) => {
                let (wa, wb) = (a.window(n)?, b.window(n)?);
                let out = wa.intersection(&wb)?;
                if out.is_empty() {
                    return Err(Error::EmptyWindow {
                        recipe: self.to_string(),
                        index: n,
                    });
                }
                if !guard_of(&wa, &wb, &out).satisfied {
                    log::warn!(
                        "{self}: intersection guard fails at N = {n}; Følner property not asserted"
                    );
                }
                Ok(out)
            }
            Recipe::Subseq { base, index } => base.window(Self::sub_index(index, n)?),
            Recipe::Diagonal { members, indices } => {
                let i = n as usize - 1;
                members[i].window(indices[i])
            }
            Recipe::Explicit { windows, .. } => Ok(windows[n as usize - 1].clone()),
        }
    }

    fn amplified(&self, psi: &FiniteSet, k: u32) -> Result<FiniteSet> {
        let spec = self.spec;
        let ell = spec.ell();
        let r = spec.r().expect("finite kernel checked at construction");
        if ell > r {
            let reps = spec.coset_reps()?;
            let mut level = psi.clone();
            let mut total = FiniteSet::empty(spec);
            for _ in 0..k {
                let doubled = level.double_image();
                let mut next = Vec::with_capacity(doubled.len() * reps.len());
                for g in &reps {
                    next.extend(doubled.iter().map(|h| spec.add_unchecked(g, h)));
                }
                level = FiniteSet::from_unsorted(spec, next)?;
                total = total.union(&level)?;
            }
            Ok(total)
        } else {
            let mut level = psi.clone();
            let mut total = psi.clone();
            for _ in 0..k {
                level = level.half_preimage()?;
                total = total.union(&level)?;
            }
            Ok(total)
        }
    }

    /// The shift `g_N` of a shifted sequence; `base_window` is `Φ_N`.
    fn shift_at(&self, n: u64, base_window: &FiniteSet) -> Result<GroupElement> {
        let Recipe::ShiftSeq {
            shift, enumeration, ..
        } = &*self.recipe
        else {
            return Err(Error::Unsupported(format!("{self} is not shifted")));
        };
        match shift {
            Shift::Expr(e) => {
                let mut g = self.spec.zero();
                g.ints[0] = Int::from_big(e.eval(n)?.into());
                Ok(g)
            }
            Shift::Auto => {
                let forbidden = base_window.sumset(&base_window.double_image().negated())?;
                for i in 1.. {
                    let x = enumeration.get(i)?;
                    if !forbidden.contains(&x) {
                        return Ok(x);
                    }
                }
                unreachable!()
            }
        }
    }

    /// The shift `g_N` applied at index `N` by a shifted sequence.
    pub fn shift_element(&self, n: u64) -> Result<GroupElement> {
        let Recipe::ShiftSeq { base, .. } = &*self.recipe else {
            return Err(Error::Unsupported(format!("{self} is not shifted")));
        };
        self.shift_at(n, &base.window(n)?)
    }

    /// Size and overlap guards for an intersection recipe at `N`.
    pub fn intersection_guard(&self, n: u64) -> Result<IntersectionGuard> {
        let Recipe::Intersect(a, b) = &*self.recipe else {
            return Err(Error::Unsupported(format!("{self} is not an intersection")));
        };
        let (wa, wb) = (a.window(n)?, b.window(n)?);
        let both = wa.intersection(&wb)?;
        Ok(guard_of(&wa, &wb, &both))
    }

    /// The doubling ratio this recipe is built to attain, when known.
    pub fn expected_alpha(&self) -> Option<Ratio> {
        let ell = self.spec.ell();
        let r = self.spec.r()?;
        let attained = ratio(r.min(ell), ell);
        match &*self.recipe {
            Recipe::Box { d1 } => Some(ratio(1, 1u64 << d1)),
            Recipe::Dyadic { .. } | Recipe::FpPrefix { .. } => Some(Ratio::one()),
            Recipe::Triangular(_) => Some(attained),
            Recipe::ShiftSeq { .. } => Some(Ratio::zero()),
            Recipe::Natural if self.spec.int_rank() == 0 => Some(Ratio::one()),
            _ => None,
        }
    }
}

fn guard_of(a: &FiniteSet, b: &FiniteSet, both: &FiniteSet) -> IntersectionGuard {
    let size_ratio = ratio(b.len() as u64, a.len() as u64);
    let overlap_of_first = ratio(both.len() as u64, a.len() as u64);
    let overlap_of_second = ratio(both.len() as u64, b.len() as u64);
    let lo = ratio(1, GUARD_BOUND);
    let hi = ratio(GUARD_BOUND, 1);
    let satisfied = size_ratio > lo
        && size_ratio < hi
        && (overlap_of_first > Ratio::zero() || overlap_of_second > Ratio::zero());
    IntersectionGuard {
        size_ratio,
        overlap_of_first,
        overlap_of_second,
        satisfied,
    }
}

impl fmt::Display for FolnerSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.recipe {
            Recipe::Box { d1 } => write!(f, "box(d1={d1})"),
            Recipe::Dyadic { d2 } => write!(f, "dyadic(d2={d2})"),
            Recipe::FpPrefix { p } => match self.spec.fp().map(|x| x.dim) {
                Some(FpDim::Finite(n)) => write!(f, "fpn(p={p},n={n})"),
                _ => write!(f, "fpw(p={p})"),
            },
            Recipe::SquarePrefix => write!(f, "sqprefix()"),
            Recipe::Natural => write!(f, "natural({})", self.spec),
            Recipe::Product(a, b) => write!(f, "prod({a},{b})"),
            Recipe::Triangular(t) => write!(f, "{t}"),
            Recipe::Amplify { base, k } => write!(f, "amplify({base},k={k})"),
            Recipe::ShiftSeq { base, shift, .. } => match shift {
                Shift::Expr(e) => write!(f, "shiftseq({base},g={e})"),
                Shift::Auto => write!(f, "shiftseq({base},g=auto)"),
            },
            Recipe::Halve(base) => write!(f, "halve({base})"),
            Recipe::Union(a, b) => write!(f, "union({a},{b})"),
            Recipe::Intersect(a, b) => write!(f, "intersect({a},{b})"),
            Recipe::Subseq { base, index } => write!(f, "subseq({base},idx={index})"),
            Recipe::Diagonal { members, indices } => {
                write!(f, "diag(")?;
                for (i, (m, n)) in members.iter().zip(indices).enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{m}@{n}")?;
                }
                write!(f, ")")
            }
            Recipe::Explicit { name, .. } => write!(f, "explicit({name})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_sizes() {
        assert_eq!(
            FolnerSequence::box_zd(2).unwrap().window(3).unwrap().len(),
            49
        );
        assert_eq!(
            FolnerSequence::fp_prefix(3)
                .unwrap()
                .window(2)
                .unwrap()
                .len(),
            9
        );
        let d = FolnerSequence::dyadic_prefix(1).unwrap().window(2).unwrap();
        assert_eq!(d.literals(), ["0", "1/2^1", "1/2^2", "3/2^2"]);
    }

    #[test]
    fn halve_of_dyadic_is_next_window() {
        let f = FolnerSequence::dyadic_prefix(1).unwrap();
        let h = FolnerSequence::halve(&f).unwrap();
        for n in 1..6 {
            assert_eq!(h.window(n).unwrap(), f.window(n + 1).unwrap());
        }
    }

    #[test]
    fn shifted_box_has_no_doubling_overlap() {
        let b = FolnerSequence::box_zd(1).unwrap();
        for shift in [Shift::Expr("N^2+2N+1".parse().unwrap()), Shift::Auto] {
            let s = FolnerSequence::shift_seq(&b, shift).unwrap();
            for n in 1..8 {
                let w = s.window(n).unwrap();
                assert_eq!(w.half_preimage().unwrap().intersection_len(&w).unwrap(), 0);
            }
        }
    }

    #[test]
    fn union_with_self() {
        let b = FolnerSequence::box_zd(1).unwrap();
        let u = FolnerSequence::union(&b, &b).unwrap();
        assert_eq!(u.window(4).unwrap(), b.window(4).unwrap());
    }

    #[test]
    fn empty_intersection_is_an_error() {
        let b = FolnerSequence::box_zd(1).unwrap();
        let s = FolnerSequence::shift_seq(&b, Shift::Expr("100".parse().unwrap())).unwrap();
        let i = FolnerSequence::intersect(&b, &s).unwrap();
        assert!(matches!(i.window(2), Err(Error::EmptyWindow { .. })));
    }

    #[test]
    fn triangular_window_size() {
        let t = FolnerSequence::triangular(TriParams::minimal(TriKind::Lger, 1, 1).unwrap());
        assert_eq!(t.window(1).unwrap().len(), 32);
        assert_eq!(t.window(2).unwrap().count(), t.size_bound(2).unwrap());
    }
}
