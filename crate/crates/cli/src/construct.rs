//! Construction names: `fpw(p)`, `zd(d)`, `torus(d)`, `kernel`, `product(d1,d2,c=..,v=..)`,
//! `odd_coset` and `non_qid(K)`.

use anyhow::{bail, Result};
use sumsets_core::constructions::{
    default_non_qid_folner, fpw_example, infinite_kernel_example, non_qid_example,
    odd_coset_example, product_example, torus_example, zd_example, NonQidTrace,
};
use sumsets_core::folner::{NExpr, VChoice};
use sumsets_core::{GroupSpec, MembershipSet};

use crate::UsageError;

pub const NAMES: &[&str] = &[
    "fpw",
    "zd",
    "torus",
    "kernel",
    "product",
    "odd_coset",
    "non_qid",
];

/// A parsed construction and, for the non-q.i.d. set, its trace.
pub struct Built {
    pub set: MembershipSet,
    pub trace: Option<NonQidTrace>,
}

struct Args<'a> {
    text: &'a str,
    positional: Vec<&'a str>,
    named: Vec<(&'a str, &'a str)>,
}

impl<'a> Args<'a> {
    fn parse(text: &'a str, body: &'a str) -> Self {
        let mut positional = Vec::new();
        let mut named = Vec::new();
        for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            match part.split_once('=') {
                Some((k, v)) => named.push((k.trim(), v.trim())),
                None => positional.push(part),
            }
        }
        Args {
            text,
            positional,
            named,
        }
    }

    fn raw(&self, i: usize, key: &str) -> Option<&'a str> {
        self.named
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .or_else(|| self.positional.get(i).copied())
    }

    fn number<T: std::str::FromStr>(&self, i: usize, key: &str, default: T) -> Result<T> {
        match self.raw(i, key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| {
                UsageError(format!("{}: bad value {v:?} for {key}", self.text)).into()
            }),
        }
    }
}

/// Splits `name(args)` or a bare `name`.
fn split_call(text: &str) -> Result<(&str, &str)> {
    let t = text.trim();
    match t.find('(') {
        None => Ok((t, "")),
        Some(i) if t.ends_with(')') => Ok((t[..i].trim(), &t[i + 1..t.len() - 1])),
        Some(_) => bail!(UsageError(format!("unbalanced construction {text:?}"))),
    }
}

/// Builds the construction named by `text`. `group` is used by `odd_coset`.
pub fn build(text: &str, group: Option<&str>) -> Result<Built> {
    let (name, body) = split_call(text)?;
    let args = Args::parse(text, body);
    let set = match name {
        "fpw" => fpw_example(args.number(0, "p", 3)?)?,
        "zd" => zd_example(args.number(0, "d", 1)?)?,
        "torus" => torus_example(args.number(0, "d", 1)?)?,
        "kernel" | "infinite_kernel" => infinite_kernel_example(),
        "product" => {
            let d1 = args.number(0, "d1", 1)?;
            let d2 = args.number(1, "d2", 1)?;
            let c: NExpr = args.raw(2, "c").unwrap_or("2N").parse()?;
            let v = match args.raw(3, "v").unwrap_or("min") {
                "min" => VChoice::Min,
                e => VChoice::Expr(e.parse()?),
            };
            product_example(d1, d2, c, v)?
        }
        "odd_coset" => {
            let spec: GroupSpec = args.raw(0, "group").or(group).unwrap_or("Z^1").parse()?;
            odd_coset_example(spec)?
        }
        "non_qid" => {
            let k = args.number(0, "K", 8)?;
            let c = non_qid_example(&default_non_qid_folner()?, k)?;
            return Ok(Built {
                set: c.set,
                trace: Some(c.trace),
            });
        }
        other => bail!(UsageError(format!(
            "unknown construction {other:?}; expected one of {}",
            NAMES.join(", ")
        ))),
    };
    Ok(Built { set, trace: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_names() {
        assert_eq!(
            build("fpw(3)", None).unwrap().set.spec().to_string(),
            "F3^w"
        );
        assert_eq!(build("fpw", None).unwrap().set.spec().to_string(), "F3^w");
        assert_eq!(
            build("product(2,1)", None).unwrap().set.spec().to_string(),
            "Z^2 x T2^1"
        );
        assert!(build("product(1,1,v=3^N)", None).is_ok());
        assert!(build("odd_coset", Some("Z^2")).is_ok());
        assert!(build("nope", None).is_err());
        assert!(build("fpw(3", None).is_err());
        assert!(build("fpw(x)", None).is_err());
    }
}
