//! Element literals: `(ints..., k/2^n..., {i:v,...})`.
//!
//! Integer coordinates come first, then dense torus coordinates, then a
//! braced sparse map for `T^ω` (values `k/2^n`) and one for `F_p` (values
//! residues). Parentheses may be dropped around a single item.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::dyadic::{Dyadic, MAX_DYADIC_EXPONENT};
use super::element::{ElementParts, GroupElement};
use super::int::Int;
use super::spec::GroupSpec;
use crate::error::{Error, Result};

pub(crate) fn split_top_level(s: &str) -> Result<Vec<&str>> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in s.char_indices() {
        match c {
            '{' | '(' => depth += 1,
            '}' | ')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
                }
            }
            ',' if depth == 0 => {
                out.push(s[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return Err(Error::Parse(format!("unbalanced brackets in {s:?}")));
    }
    let last = s[start..].trim();
    if !last.is_empty() || !out.is_empty() {
        out.push(last);
    }
    Ok(out)
}

/// Parse `0`, `k/2^n`, or `k/m` with `m` a power of two; `k` may be negative.
pub fn parse_dyadic(s: &str) -> Result<Dyadic> {
    let bad = || Error::Parse(format!("bad dyadic coordinate {s:?}"));
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((a, b)) => (a.trim(), Some(b.trim())),
        None => (t, None),
    };
    let k: BigInt = num.parse().map_err(|_| bad())?;
    let n: u32 = match den {
        None => 0,
        Some(d) => {
            if let Some(e) = d.strip_prefix("2^") {
                e.trim().parse().map_err(|_| bad())?
            } else {
                let m: BigInt = d.parse().map_err(|_| bad())?;
                if m <= BigInt::zero() || (&m & (&m - BigInt::one())) != BigInt::zero() {
                    return Err(bad());
                }
                (m.bits() - 1) as u32
            }
        }
    };
    if n > MAX_DYADIC_EXPONENT {
        return Err(Error::DyadicOverflow(n));
    }
    let modulus = BigInt::one() << n;
    let reduced = k.mod_floor(&modulus).to_u64().ok_or_else(bad)?;
    Dyadic::new(reduced, n)
}

fn parse_sparse<T>(s: &str, value: impl Fn(&str) -> Result<T>) -> Result<Vec<(u32, T)>> {
    let inner = s
        .strip_prefix('{')
        .and_then(|r| r.strip_suffix('}'))
        .ok_or_else(|| Error::Parse(format!("expected a braced map, found {s:?}")))?;
    let mut out = Vec::new();
    for entry in inner.split(',').map(str::trim).filter(|e| !e.is_empty()) {
        let (i, v) = entry
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("expected index:value, found {entry:?}")))?;
        let i: u32 = i
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad index in {entry:?}")))?;
        out.push((i, value(v.trim())?));
    }
    Ok(out)
}

pub(crate) fn parse_element(spec: &GroupSpec, s: &str) -> Result<GroupElement> {
    let t = s.trim();
    let body = match t.strip_prefix('(').and_then(|r| r.strip_suffix(')')) {
        Some(inner) => inner,
        None => t,
    };
    let items = split_top_level(body)?;
    let d1 = spec.int_rank();
    let d2 = spec.dense_torus_rank();
    let mut parts = ElementParts::default();
    let mut it = items.into_iter().peekable();
    for _ in 0..d1 {
        let item = it
            .next()
            .ok_or_else(|| Error::Parse(format!("{s:?}: missing integer coordinate for {spec}")))?;
        parts.ints.push(item.parse::<Int>()?);
    }
    for _ in 0..d2 {
        let item = it
            .next()
            .ok_or_else(|| Error::Parse(format!("{s:?}: missing torus coordinate for {spec}")))?;
        parts.dyadics.push(parse_dyadic(item)?);
    }
    if spec.is_torus_omega() {
        if let Some(item) = it.next_if(|x| x.starts_with('{')) {
            parts.dyadic_support = parse_sparse(item, parse_dyadic)?;
        }
    }
    if let Some(fp) = spec.fp() {
        if let Some(item) = it.next_if(|x| x.starts_with('{')) {
            parts.residues = parse_sparse(item, |v| {
                let r: i64 = v
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad residue {v:?}")))?;
                Ok(r.rem_euclid(fp.p as i64) as u32)
            })?;
        }
    }
    if let Some(extra) = it.next() {
        return Err(Error::Parse(format!(
            "{s:?}: unexpected item {extra:?} for {spec}"
        )));
    }
    spec.element(parts)
}

pub(crate) fn format_element(spec: &GroupSpec, g: &GroupElement) -> String {
    let mut items: Vec<String> = g.ints().iter().map(ToString::to_string).collect();
    items.extend(g.dyadics().iter().map(ToString::to_string));
    if spec.is_torus_omega() {
        let inner: Vec<String> = g
            .dyadic_support()
            .iter()
            .map(|(i, v)| format!("{i}:{v}"))
            .collect();
        items.push(format!("{{{}}}", inner.join(",")));
    }
    if spec.fp().is_some() {
        let inner: Vec<String> = g
            .residues()
            .iter()
            .map(|(i, v)| format!("{i}:{v}"))
            .collect();
        items.push(format!("{{{}}}", inner.join(",")));
    }
    match items.len() {
        1 => items.pop().unwrap_or_default(),
        _ => format!("({})", items.join(", ")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dyadic_forms() {
        assert_eq!(parse_dyadic("3/8").unwrap(), Dyadic::new(3, 3).unwrap());
        assert_eq!(parse_dyadic("3/2^3").unwrap(), Dyadic::new(3, 3).unwrap());
        assert_eq!(parse_dyadic("-1/4").unwrap(), Dyadic::new(3, 2).unwrap());
        assert_eq!(parse_dyadic("0").unwrap(), Dyadic::ZERO);
        assert!(parse_dyadic("1/3").is_err());
    }

    #[test]
    fn round_trip_per_spec() {
        for (spec, lit) in [
            ("Z^1 x T2^1", "(3, 1/2^1)"),
            ("F3^w", "{1:1,4:2}"),
            ("Z^2", "(-1, 7)"),
            ("T2^w", "{2:1/2^3}"),
            ("Z^1 x F5^w", "(0, {})"),
            ("Z^1", "12"),
        ] {
            let spec: GroupSpec = spec.parse().unwrap();
            let g = spec.parse_element(lit).unwrap();
            assert_eq!(spec.format_element(&g), lit);
        }
    }

    #[test]
    fn wrong_arity_rejected() {
        let spec = GroupSpec::integers(2);
        assert!(spec.parse_element("(1)").is_err());
        assert!(spec.parse_element("(1, 2, 3)").is_err());
    }
}
