//! Parameters of the triangular windows built from stripes `I_k^{d1} × C_n^{d2}`.

use num_bigint::BigUint;
use serde::Serialize;

use super::expr::NExpr;
use crate::error::{Error, Result};

/// Indices checked when validating user-supplied `c` and `v`.
pub const VALIDATION_HORIZON: u64 = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TriKind {
    /// `d1 ≥ d2`: stripes `I_{c−m} × C_{v+m+1}`.
    Lger,
    /// `d1 < d2`: stripes `I_{c+m} × C_{v−m}`.
    Lless,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VChoice {
    /// Smallest sequence satisfying the recipe's growth constraint.
    Min,
    Expr(NExpr),
}

/// One stripe `I_k^{d1} × C_n^{d2}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Stripe {
    /// Stripe position `m`.
    pub m: u64,
    /// Interval exponent `k`.
    pub interval: u32,
    /// Torus level `n`.
    pub level: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriParams {
    pub kind: TriKind,
    pub d1: usize,
    pub d2: usize,
    pub c: NExpr,
    pub v: VChoice,
}

impl TriParams {
    pub fn new(kind: TriKind, d1: usize, d2: usize, c: NExpr, v: VChoice) -> Result<Self> {
        let ok = match kind {
            TriKind::Lger => d1 >= d2 && d2 >= 1,
            TriKind::Lless => d1 >= 1 && d1 < d2,
        };
        if !ok {
            let need = match kind {
                TriKind::Lger => "d1 >= d2 >= 1",
                TriKind::Lless => "1 <= d1 < d2",
            };
            return Err(Error::Constraint(format!(
                "{need} required, got d1 = {d1}, d2 = {d2}"
            )));
        }
        let params = TriParams { kind, d1, d2, c, v };
        params.validate()?;
        Ok(params)
    }

    /// Default `c(N) = 2N` with the minimal admissible `v`.
    pub fn minimal(kind: TriKind, d1: usize, d2: usize) -> Result<Self> {
        Self::new(kind, d1, d2, "2N".parse()?, VChoice::Min)
    }

    pub fn c(&self, n: u64) -> Result<u64> {
        self.c.eval_u64(n)
    }

    pub fn v(&self, n: u64) -> Result<u64> {
        if n == 0 {
            return Err(Error::OutOfRange("window indices start at 1".into()));
        }
        match &self.v {
            VChoice::Expr(e) => e.eval_u64(n),
            VChoice::Min => {
                let mut v = match self.kind {
                    TriKind::Lger => 1,
                    TriKind::Lless => self.c(1)? + 1,
                };
                for k in 1..n {
                    let step = match self.kind {
                        TriKind::Lger => self.c(k)?,
                        TriKind::Lless => self.c(k + 1)?,
                    };
                    v = v
                        .checked_add(step + 2)
                        .ok_or_else(|| Error::OutOfRange(format!("v({n}) overflows")))?;
                }
                Ok(v)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Constraint(msg));
        for n in 1..=VALIDATION_HORIZON {
            let (c, v) = match (self.c(n), self.v(n)) {
                (Ok(c), Ok(v)) => (c, v),
                // Values past the representable range cannot be enumerated anyway.
                _ if n > 1 => break,
                (Err(e), _) | (_, Err(e)) => return Err(e),
            };
            if c == 0 || c % 2 == 1 {
                return bad(format!("c({n}) = {c} must be positive and even"));
            }
            if self.kind == TriKind::Lless && v < c {
                return bad(format!("v({n}) = {v} < c({n}) = {c}"));
            }
            let (Ok(c2), Ok(v2)) = (self.c(n + 1), self.v(n + 1)) else {
                break;
            };
            if c2 <= c {
                return bad(format!(
                    "c must increase: c({n}) = {c}, c({}) = {c2}",
                    n + 1
                ));
            }
            match self.kind {
                TriKind::Lger if v2 <= v + c + 1 => {
                    return bad(format!(
                        "v({}) = {v2} must exceed v({n}) + c({n}) + 1 = {}",
                        n + 1,
                        v + c + 1
                    ));
                }
                TriKind::Lless if v2 < c2 || v2 - c2 <= v + 1 => {
                    return bad(format!("v({0}) − c({0}) must exceed v({n}) + 1", n + 1));
                }
                _ => {}
            }
        }
        Ok(())
    }

    fn narrow(x: u64) -> Result<u32> {
        u32::try_from(x).map_err(|_| Error::OutOfRange(format!("{x} exceeds 32 bits")))
    }

    /// The `c(N)` stripes of window `N`, in order of `m`.
    pub fn stripes(&self, n: u64) -> Result<Vec<Stripe>> {
        let (c, v) = (self.c(n)?, self.v(n)?);
        (0..c)
            .map(|m| {
                let (interval, level) = match self.kind {
                    TriKind::Lger => (c - m, v + m + 1),
                    TriKind::Lless => (c + m, v - m),
                };
                Ok(Stripe {
                    m,
                    interval: Self::narrow(interval)?,
                    level: Self::narrow(level)?,
                })
            })
            .collect()
    }

    /// Stripes of `A_{2,N}`: even positions `m = 2j`.
    pub fn even_stripes(&self, n: u64) -> Result<Vec<Stripe>> {
        Ok(self
            .stripes(n)?
            .into_iter()
            .filter(|s| s.m % 2 == 0)
            .collect())
    }

    /// `|I_k^{d1} × C_n^{d2}|`.
    pub fn stripe_size(&self, s: &Stripe) -> BigUint {
        let ints = BigUint::from(2u8) << s.interval;
        let level = if s.level == 0 {
            BigUint::from(1u8)
        } else {
            BigUint::from(1u8) << (s.level - 1)
        };
        num_traits::pow(ints, self.d1) * num_traits::pow(level, self.d2)
    }

    pub fn size(&self, n: u64) -> Result<BigUint> {
        Ok(self.stripes(n)?.iter().map(|s| self.stripe_size(s)).sum())
    }

    /// The window index `N` and stripe whose torus level is `level`, if any.
    pub fn locate_level(&self, level: u32) -> Result<Option<(u64, Stripe)>> {
        let level = u64::from(level);
        for n in 1.. {
            let (c, v) = (self.c(n)?, self.v(n)?);
            let (lo, hi) = match self.kind {
                TriKind::Lger => (v + 1, v + c),
                TriKind::Lless => (v + 1 - c, v),
            };
            if level < lo {
                return Ok(None);
            }
            if level <= hi {
                let m = match self.kind {
                    TriKind::Lger => level - v - 1,
                    TriKind::Lless => v - level,
                };
                return Ok(Some((n, self.stripes(n)?[m as usize])));
            }
        }
        unreachable!()
    }
}

impl std::fmt::Display for TriParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self.kind {
            TriKind::Lger => "tri_lger",
            TriKind::Lless => "tri_lless",
        };
        let v = match &self.v {
            VChoice::Min => "min".to_string(),
            VChoice::Expr(e) => e.to_string(),
        };
        write!(f, "{name}({},{},c={},v={v})", self.d1, self.d2, self.c)
    }
}
