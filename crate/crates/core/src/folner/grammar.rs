//! Text form of recipes, e.g. `amplify(box(d1=1),k=3)` or `tri_lger(1,1,c=2N,v=min)`.

use std::str::FromStr;

use super::expr::NExpr;
use super::sequence::{FolnerSequence, Shift};
use super::tri::{TriKind, TriParams, VChoice};
use crate::error::{Error, Result};
use crate::group::{split_top_level, GroupSpec};

struct Args<'a> {
    recipe: &'a str,
    positional: Vec<&'a str>,
    named: Vec<(&'a str, &'a str)>,
}

impl<'a> Args<'a> {
    fn parse(recipe: &'a str, body: &'a str) -> Result<Self> {
        let mut positional = Vec::new();
        let mut named = Vec::new();
        for part in split_top_level(body)? {
            match part.split_once('=') {
                Some((k, v)) if !k.contains('(') => named.push((k.trim(), v.trim())),
                _ => positional.push(part),
            }
        }
        Ok(Args {
            recipe,
            positional,
            named,
        })
    }

    /// Argument `i` given positionally or as `key=…`.
    fn get(&self, i: usize, key: &str) -> Option<&'a str> {
        self.named
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| *v)
            .or_else(|| self.positional.get(i).copied())
    }

    fn require(&self, i: usize, key: &str) -> Result<&'a str> {
        self.get(i, key)
            .ok_or_else(|| Error::Parse(format!("{}: missing argument {key}", self.recipe)))
    }

    fn number<T: FromStr>(&self, i: usize, key: &str) -> Result<T> {
        let s = self.require(i, key)?;
        s.parse()
            .map_err(|_| Error::Parse(format!("{}: {key} = {s:?} is not a number", self.recipe)))
    }

    fn number_or<T: FromStr>(&self, i: usize, key: &str, default: T) -> Result<T> {
        match self.get(i, key) {
            Some(_) => self.number(i, key),
            None => Ok(default),
        }
    }

    fn sequence(&self, i: usize, key: &str) -> Result<FolnerSequence> {
        self.require(i, key)?.parse()
    }
}

fn triangular(kind: TriKind, args: &Args<'_>) -> Result<FolnerSequence> {
    let d1 = args.number(0, "d1")?;
    let d2 = args.number(1, "d2")?;
    let c: NExpr = args.get(2, "c").unwrap_or("2N").parse()?;
    let v = match args.get(3, "v").unwrap_or("min") {
        "min" => VChoice::Min,
        e => VChoice::Expr(e.parse()?),
    };
    Ok(FolnerSequence::triangular(TriParams::new(
        kind, d1, d2, c, v,
    )?))
}

impl FromStr for FolnerSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, rest) = s
            .split_once('(')
            .ok_or_else(|| Error::Parse(format!("recipe {s:?} needs an argument list")))?;
        let body = rest
            .strip_suffix(')')
            .ok_or_else(|| Error::Parse(format!("recipe {s:?} is missing ')'")))?;
        let name = name.trim();
        let args = Args::parse(name, body)?;
        match name {
            "box" => FolnerSequence::box_zd(args.number_or(0, "d1", 1)?),
            "dyadic" => FolnerSequence::dyadic_prefix(args.number_or(0, "d2", 1)?),
            "fpw" => FolnerSequence::fp_prefix(args.number(0, "p")?),
            "fpn" => FolnerSequence::fp_power_prefix(args.number(0, "p")?, args.number(1, "n")?),
            "sqprefix" => Ok(FolnerSequence::square_prefix()),
            "natural" => Ok(FolnerSequence::natural(body.parse::<GroupSpec>()?)),
            "prod" => FolnerSequence::product(&args.sequence(0, "a")?, &args.sequence(1, "b")?),
            "tri_lger" => triangular(TriKind::Lger, &args),
            "tri_lless" => triangular(TriKind::Lless, &args),
            "amplify" => FolnerSequence::amplify(&args.sequence(0, "base")?, args.number(1, "k")?),
            "shiftseq" => {
                let shift = match args.get(1, "g").unwrap_or("auto") {
                    "auto" => Shift::Auto,
                    e => Shift::Expr(e.parse()?),
                };
                FolnerSequence::shift_seq(&args.sequence(0, "base")?, shift)
            }
            "halve" => FolnerSequence::halve(&args.sequence(0, "base")?),
            "union" => FolnerSequence::union(&args.sequence(0, "a")?, &args.sequence(1, "b")?),
            "intersect" => {
                FolnerSequence::intersect(&args.sequence(0, "a")?, &args.sequence(1, "b")?)
            }
            "subseq" => Ok(FolnerSequence::subseq(
                &args.sequence(0, "base")?,
                args.require(1, "idx")?.parse()?,
            )),
            "diag" => {
                let mut members = Vec::new();
                let mut indices = Vec::new();
                for part in split_top_level(body)? {
                    let (m, n) = part.rsplit_once('@').ok_or_else(|| {
                        Error::Parse(format!("diag member {part:?} needs '@index'"))
                    })?;
                    members.push(m.parse()?);
                    indices.push(
                        n.trim()
                            .parse()
                            .map_err(|_| Error::Parse(format!("bad diag index {n:?}")))?,
                    );
                }
                FolnerSequence::diagonal(members, indices)
            }
            other => Err(Error::Parse(format!("unknown recipe {other:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_round_trips() {
        for s in [
            "box(d1=2)",
            "dyadic(d2=1)",
            "fpw(p=3)",
            "fpn(p=2,n=4)",
            "sqprefix()",
            "prod(box(d1=1),dyadic(d2=1))",
            "tri_lger(1,1,c=2N,v=min)",
            "tri_lless(1,2,c=2N,v=min)",
            "amplify(box(d1=1),k=3)",
            "shiftseq(box(d1=1),g=N^2+2N+1)",
            "shiftseq(dyadic(d2=1),g=auto)",
            "halve(dyadic(d2=1))",
            "union(box(d1=1),box(d1=1))",
            "subseq(box(d1=1),idx=(2N-1)*4^N/N)",
            "diag(box(d1=1)@3,box(d1=1)@5)",
        ] {
            let f: FolnerSequence = s.parse().unwrap();
            assert_eq!(f.to_string(), s);
        }
    }

    #[test]
    fn short_forms() {
        let f: FolnerSequence = "tri_lger(1,1)".parse().unwrap();
        assert_eq!(f.to_string(), "tri_lger(1,1,c=2N,v=min)");
        let g: FolnerSequence = "amplify(box(1),3)".parse().unwrap();
        assert_eq!(g.to_string(), "amplify(box(d1=1),k=3)");
        assert!("tri_lger(1,2)".parse::<FolnerSequence>().is_err());
        assert!("nope(1)".parse::<FolnerSequence>().is_err());
    }
}
