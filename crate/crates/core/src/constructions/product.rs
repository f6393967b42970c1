//! `A = A_1 ⊔ A_2` in `Z^{d1} × T^{d2}`, paired with a triangular Følner sequence.
//!
//! `A_1` holds elements with an odd integer coordinate. `A_2` is the union over
//! `N` of the even-position stripes of window `N` with integer part restricted
//! to even values.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::examples::optimal_density;
use super::membership::MembershipSet;
use crate::error::{Error, Result};
use crate::folner::build::{cartesian, punctured_interval, Axis};
use crate::folner::{FolnerSequence, NExpr, Stripe, TriKind, TriParams, VChoice};
use crate::group::{Dyadic, GroupElement, GroupSpec, Int};
use crate::ratio::ratio;
use crate::set::FiniteSet;

/// `|z| ≤ 2^k`.
fn within_interval(z: &Int, k: u32) -> bool {
    match z.as_i64() {
        Some(v) => k >= 63 || v.unsigned_abs() <= 1u64 << k,
        None => z.abs().to_big() <= BigInt::one() << k,
    }
}

/// The window index and stripe of `A_2` containing `g`, if any.
///
/// The common torus degree selects the only candidate stripe.
pub fn a2_stripe(params: &TriParams, g: &GroupElement) -> Result<Option<(u64, Stripe)>> {
    let ints = g.ints();
    if ints.iter().any(|z| z.is_zero() || !z.is_even()) {
        return Ok(None);
    }
    let Some(first) = g.dyadics().first() else {
        return Ok(None);
    };
    let level = first.degree();
    if level == 0 || g.dyadics().iter().any(|y| y.degree() != level) {
        return Ok(None);
    }
    let Some((n, stripe)) = params.locate_level(level)? else {
        return Ok(None);
    };
    if stripe.m % 2 == 1 || !ints.iter().all(|z| within_interval(z, stripe.interval)) {
        return Ok(None);
    }
    Ok(Some((n, stripe)))
}

/// The product construction for the given `c` and `v`; the case follows from `d1` and `d2`.
pub fn product_example(d1: usize, d2: usize, c: NExpr, v: VChoice) -> Result<MembershipSet> {
    let kind = if d1 >= d2 {
        TriKind::Lger
    } else {
        TriKind::Lless
    };
    let params = TriParams::new(kind, d1, d2, c, v)?;
    let folner = FolnerSequence::triangular(params.clone());
    let spec = *folner.spec();
    let predicted = optimal_density(&spec);
    let alpha = ratio(1u64 << d2.min(d1), 1u64 << d1);
    let name = format!("product_example({params})");
    Ok(MembershipSet::new(&name, folner, move |g| {
        g.ints().iter().any(|z| !z.is_even()) || matches!(a2_stripe(&params, g), Ok(Some(_)))
    })
    .with_prediction(predicted, Some(alpha))
    .with_provenance(match kind {
        TriKind::Lger => "Z^d1 x T^d2 with d1 >= d2: odd part plus even stripes",
        TriKind::Lless => "Z^d1 x T^d2 with d1 < d2: odd part plus even stripes",
    }))
}

/// The product construction with `c(N) = 2N` and minimal `v`.
pub fn product_default(d1: usize, d2: usize) -> Result<MembershipSet> {
    product_example(d1, d2, "2N".parse()?, VChoice::Min)
}

/// The parameters of a product construction's paired Følner sequence.
pub fn product_params(a: &MembershipSet) -> Result<&TriParams> {
    a.paired_folner.tri_params().ok_or_else(|| {
        Error::Unsupported(format!(
            "{} is not paired with triangular windows",
            a.name()
        ))
    })
}

/// `A ∩ Φ_N` assembled stripe by stripe from the disjoint-union description.
pub fn product_stripe_oracle(params: &TriParams, n: u64) -> Result<FiniteSet> {
    let spec = GroupSpec::product(params.d1, params.d2);
    let mut out = Vec::new();
    for s in params.stripes(n)? {
        let ints = punctured_interval(s.interval)?;
        let level = Dyadic::level(s.level)?;
        let evens: Vec<Int> = ints.iter().filter(|z| z.is_even()).cloned().collect();
        let axes = |vals: &[Int]| -> Result<Vec<GroupElement>> {
            let mut axes: Vec<Axis<'_>> = (0..params.d1).map(|j| Axis::Int(j, vals)).collect();
            axes.extend((0..params.d2).map(|j| Axis::Torus(j, &level)));
            cartesian(&spec, &axes)
        };
        let full = axes(&ints)?;
        out.extend(
            full.into_iter()
                .filter(|g| g.ints().iter().any(|z| !z.is_even())),
        );
        if s.m % 2 == 0 {
            out.extend(axes(&evens)?);
        }
    }
    FiniteSet::new(spec, out)
}

/// One rectangle of the stripe picture.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StripeRow {
    pub n: u64,
    pub m: u64,
    pub interval: u32,
    pub level: u32,
    /// The stripe's even integer part belongs to `A`.
    pub in_a: bool,
}

/// Stripe geometry of windows `1..=max_n`.
pub fn stripe_geometry(params: &TriParams, max_n: u64) -> Result<Vec<StripeRow>> {
    let mut rows = Vec::new();
    for n in 1..=max_n {
        for s in params.stripes(n)? {
            rows.push(StripeRow {
                n,
                m: s.m,
                interval: s.interval,
                level: s.level,
                in_a: s.m % 2 == 0,
            });
        }
    }
    Ok(rows)
}
