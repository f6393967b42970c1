use std::fmt;

use crate::error::{Error, Result};

/// Largest exponent `n` a [`Dyadic`] may carry.
pub const MAX_DYADIC_EXPONENT: u32 = 63;

/// A point `k / 2^n mod 1` of the dyadic torus `Z(1/2)/Z`.
///
/// Stored normalized: either `(n, k) = (0, 0)` for zero, or `k` odd with
/// `0 < k < 2^n`. The exponent is therefore the degree of the point, and
/// equality is structural. Field order gives the canonical `(n, k)` ordering.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Dyadic {
    exponent: u32,
    numerator: u64,
}

impl Dyadic {
    pub const ZERO: Dyadic = Dyadic {
        exponent: 0,
        numerator: 0,
    };
    pub const HALF: Dyadic = Dyadic {
        exponent: 1,
        numerator: 1,
    };

    /// `k / 2^n mod 1` for arbitrary `k`, reduced to normal form.
    pub fn new(k: u64, n: u32) -> Result<Self> {
        if n > MAX_DYADIC_EXPONENT {
            return Err(Error::DyadicOverflow(n));
        }
        let reduced = if n == 0 { 0 } else { k & mask(n) };
        Ok(Self::normalize(reduced, n))
    }

    fn normalize(k: u64, n: u32) -> Self {
        if k == 0 {
            return Self::ZERO;
        }
        let tz = k.trailing_zeros();
        Dyadic {
            exponent: n - tz,
            numerator: k >> tz,
        }
    }

    pub fn numerator(&self) -> u64 {
        self.numerator
    }

    pub fn exponent(&self) -> u32 {
        self.exponent
    }

    /// The degree θ: the unique `n` with `self ∈ C_n`.
    pub fn degree(&self) -> u32 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let n = self.exponent.max(other.exponent);
        if n == 0 {
            return Self::ZERO;
        }
        let a = self.numerator << (n - self.exponent);
        let b = other.numerator << (n - other.exponent);
        // a, b < 2^n <= 2^63, so the sum fits.
        Self::normalize((a + b) & mask(n), n)
    }

    pub fn neg(&self) -> Dyadic {
        if self.is_zero() {
            return *self;
        }
        Dyadic {
            exponent: self.exponent,
            numerator: (1u64 << self.exponent) - self.numerator,
        }
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    /// `2·self`; the degree drops by exactly one unless the point is zero.
    pub fn double(&self) -> Dyadic {
        match self.exponent {
            0 | 1 => Self::ZERO,
            n => Dyadic {
                exponent: n - 1,
                numerator: self.numerator & mask(n - 1),
            },
        }
    }

    /// Both solutions of `2h = self`.
    pub fn halves(&self) -> Result<[Dyadic; 2]> {
        if self.is_zero() {
            return Ok([Self::ZERO, Self::HALF]);
        }
        let n = self.exponent + 1;
        if n > MAX_DYADIC_EXPONENT {
            return Err(Error::DyadicOverflow(n));
        }
        Ok([
            Dyadic {
                exponent: n,
                numerator: self.numerator,
            },
            Dyadic {
                exponent: n,
                numerator: self.numerator + (1u64 << self.exponent),
            },
        ])
    }

    /// All points of exact degree `n` (the set `C_n`), in canonical order.
    pub fn level(n: u32) -> Result<Vec<Dyadic>> {
        if n > MAX_DYADIC_EXPONENT {
            return Err(Error::DyadicOverflow(n));
        }
        if n == 0 {
            return Ok(vec![Self::ZERO]);
        }
        crate::set::check_cap(1u128 << (n - 1))?;
        Ok((0..(1u64 << (n - 1)))
            .map(|j| Dyadic {
                exponent: n,
                numerator: 2 * j + 1,
            })
            .collect())
    }

    /// All points of degree at most `n` (the set `F_n`).
    pub fn prefix(n: u32) -> Result<Vec<Dyadic>> {
        let mut out = Vec::new();
        for level in 0..=n {
            out.extend(Self::level(level)?);
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> f64 {
        self.numerator as f64 / (self.exponent as f64).exp2()
    }
}

fn mask(n: u32) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for Dyadic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            write!(f, "0")
        } else {
            write!(f, "{}/2^{}", self.numerator, self.exponent)
        }
    }
}
