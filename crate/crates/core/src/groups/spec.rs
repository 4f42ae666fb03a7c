//! The group mini-language: `cyclic:12`, `abelian:6x12`, `units:91`,
//! `dihedral:12` (order 12), `quaternion:24` (order 24),
//! `semidirect:n=65,m=4,s=8`, `pgl2:5`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::concrete::{check_size, Abelian, Cyclic, Pgl2, Quaternion, Semidirect, UnitsMod};
use super::FiniteGroup;
use crate::arith::{checked_product, euler_phi};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum GroupSpec {
    Cyclic(u64),
    Abelian(Vec<u64>),
    Units(u64),
    /// Dihedral group of the given order `2n`.
    Dihedral(u64),
    /// Generalized quaternion group of the given order `4n`.
    Quaternion(u64),
    Semidirect {
        n: u64,
        m: u64,
        s: u64,
    },
    Pgl2(u64),
}

fn number(text: &str, offset: usize) -> Result<u64> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(Error::parse(offset, "expected a number"));
    }
    let lead = text.len() - text.trim_start().len();
    trimmed.parse::<u64>().map_err(|_| {
        Error::parse(
            offset + lead,
            format!("expected a non-negative integer, found {trimmed:?}"),
        )
    })
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let Some(colon) = s.find(':') else {
            return Err(Error::parse(s.len(), "expected `family:parameters`"));
        };
        let family = s[..colon].trim();
        let args = &s[colon + 1..];
        let at = colon + 1;
        let spec = match family {
            "cyclic" => GroupSpec::Cyclic(number(args, at)?),
            "units" => GroupSpec::Units(number(args, at)?),
            "pgl2" => GroupSpec::Pgl2(number(args, at)?),
            "dihedral" => GroupSpec::Dihedral(number(args, at)?),
            "quaternion" => GroupSpec::Quaternion(number(args, at)?),
            "abelian" => {
                let mut rs = Vec::new();
                let mut pos = at;
                for part in args.split('x') {
                    rs.push(number(part, pos)?);
                    pos += part.len() + 1;
                }
                GroupSpec::Abelian(rs)
            }
            "semidirect" => {
                let (mut n, mut m, mut sv) = (None, None, None);
                let mut pos = at;
                for part in args.split(',') {
                    let Some(eq) = part.find('=') else {
                        return Err(Error::parse(pos, "expected `key=value`"));
                    };
                    let value = number(&part[eq + 1..], pos + eq + 1)?;
                    let slot = match part[..eq].trim() {
                        "n" => &mut n,
                        "m" => &mut m,
                        "s" => &mut sv,
                        other => return Err(Error::parse(pos, format!("unknown key {other:?}; expected n, m or s"))),
                    };
                    if slot.replace(value).is_some() {
                        return Err(Error::parse(pos, "repeated key"));
                    }
                    pos += part.len() + 1;
                }
                match (n, m, sv) {
                    (Some(n), Some(m), Some(s)) => GroupSpec::Semidirect { n, m, s },
                    _ => return Err(Error::parse(s.len(), "semidirect needs n, m and s")),
                }
            }
            other => {
                return Err(Error::parse(
                    0,
                    format!("unknown family {other:?}; expected cyclic, abelian, units, dihedral, quaternion, semidirect or pgl2"),
                ))
            }
        };
        spec.validate()?;
        Ok(spec)
    }
}

impl TryFrom<String> for GroupSpec {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<GroupSpec> for String {
    fn from(s: GroupSpec) -> String {
        s.to_string()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Abelian(rs) => {
                let parts: Vec<String> = rs.iter().map(|r| r.to_string()).collect();
                write!(f, "abelian:{}", parts.join("x"))
            }
            GroupSpec::Units(n) => write!(f, "units:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Quaternion(n) => write!(f, "quaternion:{n}"),
            GroupSpec::Semidirect { n, m, s } => write!(f, "semidirect:n={n},m={m},s={s}"),
            GroupSpec::Pgl2(q) => write!(f, "pgl2:{q}"),
        }
    }
}

impl GroupSpec {
    fn validate(&self) -> Result<()> {
        let bad = |why: &str| Err(Error::construction(self.to_string(), why));
        match self {
            GroupSpec::Dihedral(order) if *order < 4 || order % 2 == 1 => {
                bad("dihedral order must be even and at least 4")
            }
            GroupSpec::Quaternion(order) if *order < 8 || order % 4 != 0 => {
                bad("quaternion order must be a multiple of 4 and at least 8")
            }
            GroupSpec::Cyclic(0) | GroupSpec::Units(0) => bad("parameter must be positive"),
            GroupSpec::Abelian(rs) if rs.is_empty() || rs.contains(&0) => {
                bad("factor orders must be positive")
            }
            _ => Ok(()),
        }
    }

    /// Group order without building the group.
    pub fn order(&self) -> Result<u64> {
        match self {
            GroupSpec::Cyclic(n) | GroupSpec::Dihedral(n) | GroupSpec::Quaternion(n) => Ok(*n),
            GroupSpec::Abelian(rs) => checked_product(rs.iter().copied(), "group order"),
            GroupSpec::Units(n) => euler_phi(*n),
            GroupSpec::Semidirect { n, m, .. } => {
                n.checked_mul(*m).ok_or(Error::Overflow("group order"))
            }
            GroupSpec::Pgl2(q) => q
                .checked_pow(3)
                .map(|c| c - q)
                .ok_or(Error::Overflow("group order")),
        }
    }

    /// Orders of cyclic factors when the group is abelian by construction.
    pub fn abelian_factors(&self) -> Option<Vec<u64>> {
        match self {
            GroupSpec::Cyclic(n) => Some(vec![*n]),
            GroupSpec::Abelian(rs) => Some(rs.clone()),
            GroupSpec::Units(n) => Some(UnitsMod::cyclic_factors(*n)),
            _ => None,
        }
    }

    pub fn build(&self) -> Result<Box<dyn FiniteGroup>> {
        self.validate()?;
        check_size(&self.to_string(), self.order()?)?;
        Ok(match self {
            GroupSpec::Cyclic(n) => Box::new(Cyclic::new(*n)?),
            GroupSpec::Abelian(rs) => Box::new(Abelian::new(rs)?),
            GroupSpec::Units(n) => Box::new(UnitsMod::new(*n)?),
            GroupSpec::Dihedral(order) => Box::new(Semidirect::dihedral(order / 2)?),
            GroupSpec::Quaternion(order) => Box::new(Quaternion::new(order / 4)?),
            GroupSpec::Semidirect { n, m, s } => Box::new(Semidirect::new(*n, *m, *s)?),
            GroupSpec::Pgl2(q) => Box::new(Pgl2::new(*q)?),
        })
    }
}
