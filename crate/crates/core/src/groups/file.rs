use std::fmt::Write as _;

use super::element::CongruenceElement;
use super::{Family, GroupSpec};
use crate::error::{Error, Result};
use crate::matrix::SeriesMatrix;
use crate::ring::RingCtx;

/// A subgroup given by generators: a `group family=.. n=.. p=.. k=..` header
/// followed by `gen: <matrix>` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgroupFile {
    pub spec: GroupSpec,
    pub gens: Vec<CongruenceElement>,
}

impl SubgroupFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (no, header) = lines.next().ok_or_else(|| Error::parse(1, "empty subgroup spec"))?;
        let mut parts = header.split_whitespace();
        if parts.next() != Some("group") {
            return Err(Error::parse(no, "header must start with 'group'"));
        }
        let (mut family, mut n, mut p, mut k) = (None, None, None, None);
        for part in parts {
            let (key, v) = part
                .split_once('=')
                .ok_or_else(|| Error::parse(no, format!("bad header field '{part}'")))?;
            let num = || v.parse::<u64>().map_err(|_| Error::parse(no, format!("bad value for '{key}'")));
            match key {
                "family" => family = Some(v.parse::<Family>().map_err(|e| Error::parse(no, e.to_string()))?),
                "n" => n = Some(num()? as usize),
                "p" => p = Some(num()?),
                "k" => k = Some(num()? as usize),
                _ => return Err(Error::parse(no, format!("unknown header field '{key}'"))),
            }
        }
        let missing = |f: &str| Error::parse(no, format!("missing header field '{f}'"));
        let ctx = RingCtx::new(p.ok_or_else(|| missing("p"))?, k.ok_or_else(|| missing("k"))?)
            .map_err(|e| Error::parse(no, e.to_string()))?;
        let spec = GroupSpec::new(
            family.ok_or_else(|| missing("family"))?,
            n.ok_or_else(|| missing("n"))?,
            ctx,
        )
        .map_err(|e| Error::parse(no, e.to_string()))?;
        let mut gens = Vec::new();
        for (no, line) in lines {
            let body = line
                .strip_prefix("gen:")
                .ok_or_else(|| Error::parse(no, "expected 'gen: <matrix>'"))?;
            let m = SeriesMatrix::parse(ctx, body).map_err(|e| Error::parse(no, e))?;
            if m.size() != spec.size() {
                return Err(Error::parse(
                    no,
                    format!("generator is {0}x{0}, group needs {1}x{1}", m.size(), spec.size()),
                ));
            }
            gens.push(CongruenceElement::new(&spec, m).map_err(|e| Error::parse(no, e.to_string()))?);
        }
        Ok(SubgroupFile { spec, gens })
    }

    pub fn encode(&self) -> String {
        let mut out = format!("{}\n", self.spec);
        for g in &self.gens {
            let _ = writeln!(out, "gen: {}", g.matrix().encode());
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_errors() {
        let text = "group family=SL n=2 p=3 k=3\ngen: [[1, t],[0, 1]]\n";
        let f = SubgroupFile::parse(text).unwrap();
        assert_eq!(f.gens.len(), 1);
        assert_eq!(SubgroupFile::parse(&f.encode()).unwrap(), f);
        // not congruent to I mod t
        assert!(SubgroupFile::parse("group family=SL n=2 p=3 k=3\ngen: [[1,1],[0,1]]").is_err());
        // det != 1
        assert!(SubgroupFile::parse("group family=SL n=2 p=3 k=3\ngen: [[1+t,0],[0,1]]").is_err());
        assert!(SubgroupFile::parse("group family=XX n=2 p=3 k=3").is_err());
        assert!(SubgroupFile::parse("group family=SL n=2 p=3").is_err());
        assert!(SubgroupFile::parse("group family=SL n=2 p=3 k=3").unwrap().gens.is_empty());
    }
}
