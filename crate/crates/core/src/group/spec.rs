use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Rank of the dyadic torus factor `(Z(1/2)/Z)^d`, or its countable
/// direct sum (finitely supported sequences).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TorusRank {
    Finite(usize),
    Omega,
}

/// Dimension of the `F_p` factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FpDim {
    /// `⊕_{i∈N} F_p`, finitely supported.
    Omega,
    /// `F_p^n`, coordinates `1..=n`.
    Finite(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FpFactor {
    pub p: u32,
    pub dim: FpDim,
}

impl FpFactor {
    /// Largest admissible coordinate index, if bounded.
    pub fn max_index(&self) -> Option<u32> {
        match self.dim {
            FpDim::Omega => None,
            FpDim::Finite(n) => Some(n),
        }
    }
}

/// A group `Z^{d1} × T^{d2} × F`, where `T = Z(1/2)/Z` and `F` is an
/// optional `F_p` power.
///
/// The torus factor may instead be `T^ω`, the countable direct sum, which
/// has an infinite doubling kernel. `p = 2` is admitted only for finite
/// powers (`D ≡ 0` there, so `2G` is trivial).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GroupSpec {
    int_rank: usize,
    torus: TorusRank,
    fp: Option<FpFactor>,
}

impl GroupSpec {
    pub fn new(int_rank: usize, torus: TorusRank, fp: Option<FpFactor>) -> Result<Self> {
        if let Some(f) = fp {
            if f.p < 2 || !is_prime(f.p) {
                return Err(Error::InvalidSpec(format!("{} is not prime", f.p)));
            }
            if f.p > 1 << 20 {
                return Err(Error::InvalidSpec(format!("prime {} too large", f.p)));
            }
            if f.p == 2 && f.dim == FpDim::Omega {
                return Err(Error::InvalidSpec(
                    "F2^w has infinite index and kernel; use a finite power F2^n".into(),
                ));
            }
        }
        Ok(GroupSpec {
            int_rank,
            torus,
            fp,
        })
    }

    /// `Z^{d1} × T^{d2}`.
    pub fn product(d1: usize, d2: usize) -> Self {
        GroupSpec {
            int_rank: d1,
            torus: TorusRank::Finite(d2),
            fp: None,
        }
    }

    pub fn integers(d1: usize) -> Self {
        Self::product(d1, 0)
    }

    pub fn torus(d2: usize) -> Self {
        Self::product(0, d2)
    }

    /// `⊕_{i∈N} F_p` for an odd prime `p`.
    pub fn fp_omega(p: u32) -> Result<Self> {
        Self::new(
            0,
            TorusRank::Finite(0),
            Some(FpFactor {
                p,
                dim: FpDim::Omega,
            }),
        )
    }

    /// `F_p^n`.
    pub fn fp_power(p: u32, n: u32) -> Result<Self> {
        Self::new(
            0,
            TorusRank::Finite(0),
            Some(FpFactor {
                p,
                dim: FpDim::Finite(n),
            }),
        )
    }

    /// `(Z(1/2)/Z)^ω`.
    pub fn torus_omega() -> Self {
        GroupSpec {
            int_rank: 0,
            torus: TorusRank::Omega,
            fp: None,
        }
    }

    pub fn int_rank(&self) -> usize {
        self.int_rank
    }

    pub fn torus_rank(&self) -> TorusRank {
        self.torus
    }

    /// Finite torus rank, `0` for `T^ω`.
    pub fn dense_torus_rank(&self) -> usize {
        match self.torus {
            TorusRank::Finite(d) => d,
            TorusRank::Omega => 0,
        }
    }

    pub fn fp(&self) -> Option<FpFactor> {
        self.fp
    }

    pub fn prime(&self) -> Option<u32> {
        self.fp.map(|f| f.p)
    }

    pub fn is_torus_omega(&self) -> bool {
        self.torus == TorusRank::Omega
    }

    pub(crate) fn f2_rank(&self) -> u32 {
        match self.fp {
            Some(FpFactor {
                p: 2,
                dim: FpDim::Finite(n),
            }) => n,
            _ => 0,
        }
    }

    /// `log2 [G : 2G]`.
    pub fn ell_log2(&self) -> u32 {
        self.int_rank as u32 + self.f2_rank()
    }

    /// `log2 |ker D|`, or `None` when the kernel is infinite.
    pub fn r_log2(&self) -> Option<u32> {
        match self.torus {
            TorusRank::Finite(d2) => Some(d2 as u32 + self.f2_rank()),
            TorusRank::Omega => None,
        }
    }

    /// `ℓ = [G : 2G]`.
    pub fn ell(&self) -> u64 {
        1u64 << self.ell_log2()
    }

    /// `r = |ker D|`, if finite.
    pub fn r(&self) -> Option<u64> {
        self.r_log2().map(|e| 1u64 << e)
    }

    /// Whether the doubling map is identically zero (every factor is `F_2`).
    pub fn doubling_is_trivial(&self) -> bool {
        self.int_rank == 0
            && self.torus == TorusRank::Finite(0)
            && matches!(self.fp, Some(FpFactor { p: 2, .. }))
    }

    /// Direct product of two specs, coordinates concatenated.
    pub fn direct_product(&self, other: &GroupSpec) -> Result<GroupSpec> {
        let torus = match (self.torus, other.torus) {
            (TorusRank::Finite(a), TorusRank::Finite(b)) => TorusRank::Finite(a + b),
            (TorusRank::Omega, TorusRank::Finite(0)) | (TorusRank::Finite(0), TorusRank::Omega) => {
                TorusRank::Omega
            }
            _ => {
                return Err(Error::InvalidSpec(format!(
                    "cannot combine torus parts of {self} and {other}"
                )))
            }
        };
        let fp = match (self.fp, other.fp) {
            (Some(_), Some(_)) => {
                return Err(Error::InvalidSpec(format!(
                    "both {self} and {other} carry an F_p factor"
                )))
            }
            (a, b) => a.or(b),
        };
        GroupSpec::new(self.int_rank + other.int_rank, torus, fp)
    }
}

pub(crate) fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut q = 2u32;
    while q * q <= p {
        if p.is_multiple_of(q) {
            return false;
        }
        q += 1;
    }
    true
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        if self.int_rank > 0 {
            parts.push(format!("Z^{}", self.int_rank));
        }
        match self.torus {
            TorusRank::Finite(0) => {}
            TorusRank::Finite(d) => parts.push(format!("T2^{d}")),
            TorusRank::Omega => parts.push("T2^w".to_string()),
        }
        if let Some(fp) = self.fp {
            match fp.dim {
                FpDim::Omega => parts.push(format!("F{}^w", fp.p)),
                FpDim::Finite(n) => parts.push(format!("F{}^{}", fp.p, n)),
            }
        }
        if parts.is_empty() {
            write!(f, "Z^0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Grammar: factors joined by `x`, each one of `Z^<d>`, `T2^<d>`,
    /// `T2^w`, `F<p>^w`, `F<p>^<n>` (a bare `Z` or `T2` means rank 1).
    fn from_str(s: &str) -> Result<Self> {
        let mut int_rank = 0usize;
        let mut torus = TorusRank::Finite(0);
        let mut fp = None;
        let cleaned = s.replace('×', " x ");
        let factors: Vec<&str> = cleaned
            .split(['x', '*'])
            .map(str::trim)
            .filter(|t| !t.is_empty())
            .collect();
        if factors.is_empty() {
            return Err(Error::Parse(format!("empty group spec {s:?}")));
        }
        for factor in factors {
            let (base, exp) = match factor.split_once('^') {
                Some((b, e)) => (b.trim(), Some(e.trim())),
                None => (factor, None),
            };
            let omega = matches!(exp, Some("w") | Some("ω"));
            let rank = || -> Result<u32> {
                match exp {
                    None => Ok(1),
                    Some(e) => e
                        .parse::<u32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {factor:?}"))),
                }
            };
            if base == "Z" {
                if omega {
                    return Err(Error::Parse("Z^w is not supported".into()));
                }
                int_rank += rank()? as usize;
            } else if base == "T2" || base == "T" {
                torus = match (torus, omega) {
                    (TorusRank::Finite(0), true) => TorusRank::Omega,
                    (TorusRank::Finite(d), false) => TorusRank::Finite(d + rank()? as usize),
                    _ => return Err(Error::Parse(format!("conflicting torus factors in {s:?}"))),
                };
            } else if let Some(p) = base.strip_prefix('F') {
                if fp.is_some() {
                    return Err(Error::Parse(format!("more than one F_p factor in {s:?}")));
                }
                let p: u32 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad prime in {factor:?}")))?;
                let dim = if omega {
                    FpDim::Omega
                } else {
                    FpDim::Finite(rank()?)
                };
                fp = Some(FpFactor { p, dim });
            } else {
                return Err(Error::Parse(format!("unknown factor {factor:?}")));
            }
        }
        GroupSpec::new(int_rank, torus, fp)
    }
}

impl Default for GroupSpec {
    fn default() -> Self {
        GroupSpec::product(0, 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        for s in [
            "Z^1 x T2^1",
            "F3^w",
            "Z^2",
            "T2^w",
            "F2^4",
            "Z^1 x T2^2 x F5^w",
        ] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert_eq!("Z".parse::<GroupSpec>().unwrap(), GroupSpec::integers(1));
    }

    #[test]
    fn rejects_bad_specs() {
        assert!("F4^w".parse::<GroupSpec>().is_err());
        assert!("F2^w".parse::<GroupSpec>().is_err());
        assert!("Q".parse::<GroupSpec>().is_err());
        assert!("F3^w x F5^w".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn ell_and_r() {
        let g = GroupSpec::product(2, 3);
        assert_eq!((g.ell(), g.r()), (4, Some(8)));
        let f = GroupSpec::fp_omega(3).unwrap();
        assert_eq!((f.ell(), f.r()), (1, Some(1)));
        let t = GroupSpec::torus_omega();
        assert_eq!(t.r(), None);
        let f2 = GroupSpec::fp_power(2, 3).unwrap();
        assert_eq!((f2.ell(), f2.r()), (8, Some(8)));
        assert!(f2.doubling_is_trivial());
    }
}
