//! BBF lattices of the known hyperkähler deformation types.
//!
//! Gram matrices ship as JSON fixtures; the two infinite families are stored
//! as their `n = 2` member plus a template saying which entry depends on `n`.
//! Every entry is checked on load: even, non-degenerate, signature
//! `(3, b2 - 3)`.

use std::fmt;

use num_traits::{One, ToPrimitive};
use serde_json::Value;

use crate::arith::{parse_rat, Int, Rat};
use crate::bbf::FujikiData;
use crate::error::{LatticeError, Result};
use crate::json::{field, lattice_from_json};
use crate::lattice::{Lattice, Signature};

const K3: &str = include_str!("../fixtures/k3.json");
const HILB_K3_N: &str = include_str!("../fixtures/hilb_k3_n.json");
const KUMMER_N: &str = include_str!("../fixtures/kummer_n.json");
const OG6: &str = include_str!("../fixtures/og6.json");
const OG10: &str = include_str!("../fixtures/og10.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CatalogName {
    K3,
    HilbK3(u32),
    Kummer(u32),
    OG6,
    OG10,
}

impl CatalogName {
    /// Accepts `k3`, `hilb_k3`, `kummer`, `og6`, `og10` (case-insensitive);
    /// the families need `n >= 2`, the others take no `n`.
    pub fn parse(name: &str, n: Option<u32>) -> Result<Self> {
        let key = name.trim().to_ascii_lowercase().replace(['-', ' '], "_");
        let family = |make: fn(u32) -> CatalogName| match n {
            Some(n) if n >= 2 => Ok(make(n)),
            Some(n) => Err(LatticeError::BadParameter(format!("{name} needs n >= 2, got {n}"))),
            None => Err(LatticeError::BadParameter(format!("{name} needs a parameter n"))),
        };
        let fixed = |entry: CatalogName| match n {
            None => Ok(entry),
            Some(_) => Err(LatticeError::BadParameter(format!("{name} takes no parameter n"))),
        };
        match key.as_str() {
            "k3" => fixed(CatalogName::K3),
            "og6" => fixed(CatalogName::OG6),
            "og10" => fixed(CatalogName::OG10),
            "hilb_k3" | "hilbk3" | "k3n" | "k3_n" => family(CatalogName::HilbK3),
            "kummer" | "kum" => family(CatalogName::Kummer),
            _ => Err(LatticeError::UnknownName(name.to_string())),
        }
    }

    pub fn all_fixed() -> [CatalogName; 3] {
        [CatalogName::K3, CatalogName::OG6, CatalogName::OG10]
    }
}

impl fmt::Display for CatalogName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CatalogName::K3 => write!(f, "K3"),
            CatalogName::HilbK3(n) => write!(f, "HilbK3({n})"),
            CatalogName::Kummer(n) => write!(f, "Kummer({n})"),
            CatalogName::OG6 => write!(f, "OG6"),
            CatalogName::OG10 => write!(f, "OG10"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    pub name: CatalogName,
    pub lattice: Lattice,
    pub b2: usize,
    pub fujiki: Option<FujikiData>,
}

impl CatalogEntry {
    pub fn signature(&self) -> Signature {
        self.lattice.signature()
    }
}

fn fixture_error(detail: String) -> LatticeError {
    LatticeError::Internal(format!("catalog fixture: {detail}"))
}

fn factorial(k: u32) -> Int {
    (1..=k).fold(Int::one(), |acc, i| acc * i)
}

/// `(2n)! / (n! 2^n)`, the Fujiki constant of `K3^[n]`.
pub fn hilb_fujiki_constant(n: u32) -> Rat {
    Rat::new(factorial(2 * n), factorial(n) * (Int::one() << n as usize))
}

/// `(n + 1) (2n)! / (n! 2^n)`, the Fujiki constant of generalized Kummers.
pub fn kummer_fujiki_constant(n: u32) -> Rat {
    hilb_fujiki_constant(n) * Rat::from_integer(Int::from(n + 1))
}

fn load(text: &str) -> Result<(Value, Lattice)> {
    let doc: Value = serde_json::from_str(text).map_err(|e| fixture_error(e.to_string()))?;
    let lattice = lattice_from_json(&doc)?;
    Ok((doc, lattice))
}

/// Substitute `scale * (n + shift)` into the templated diagonal entry.
fn instantiate(doc: &Value, lattice: &Lattice, n: u32) -> Result<Lattice> {
    let param = field(doc, "parameter")?;
    let number = |key: &str| -> Result<i64> {
        field(param, key)?.as_i64().ok_or_else(|| fixture_error(format!("parameter.{key} is not an integer")))
    };
    let entry = field(param, "entry")?
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| fixture_error("parameter.entry must be [row, col]".into()))?;
    let index = |v: &Value| v.as_u64().and_then(|x| x.to_usize()).ok_or_else(|| fixture_error("bad entry index".into()));
    let (row, col) = (index(&entry[0])?, index(&entry[1])?);
    let value = Int::from(number("scale")?) * (Int::from(n) + number("shift")?);
    let mut gram = lattice.gram().clone();
    gram[row][col] = value.clone();
    gram[col][row] = value;
    Lattice::new(gram)
}

fn validate(name: CatalogName, lattice: &Lattice) -> Result<()> {
    let b2 = lattice.rank();
    if !lattice.is_even() {
        return Err(fixture_error(format!("{name} is not even")));
    }
    let sig = lattice.signature();
    if sig != (Signature { s_plus: 3, s_minus: b2 - 3 }) {
        return Err(fixture_error(format!("{name} has signature ({}, {})", sig.s_plus, sig.s_minus)));
    }
    Ok(())
}

pub fn catalog_entry(name: CatalogName) -> Result<CatalogEntry> {
    let (lattice, fujiki_params) = match name {
        CatalogName::K3 | CatalogName::OG6 | CatalogName::OG10 => {
            let text = match name {
                CatalogName::K3 => K3,
                CatalogName::OG6 => OG6,
                _ => OG10,
            };
            let (doc, lattice) = load(text)?;
            let half = field(&doc, "half_dimension")?.as_u64().ok_or_else(|| fixture_error("half_dimension".into()))?;
            let c = parse_rat(field(&doc, "fujiki_constant")?.as_str().ok_or_else(|| fixture_error("fujiki_constant".into()))?)?;
            (lattice, (half as usize, c))
        }
        CatalogName::HilbK3(n) => {
            let (doc, base) = load(HILB_K3_N)?;
            (instantiate(&doc, &base, n)?, (n as usize, hilb_fujiki_constant(n)))
        }
        CatalogName::Kummer(n) => {
            let (doc, base) = load(KUMMER_N)?;
            (instantiate(&doc, &base, n)?, (n as usize, kummer_fujiki_constant(n)))
        }
    };
    validate(name, &lattice)?;
    let fujiki = Some(FujikiData::new(&lattice, fujiki_params.0, fujiki_params.1)?);
    Ok(CatalogEntry { name, b2: lattice.rank(), lattice, fujiki })
}

/// Look up an entry by name; see [`CatalogName::parse`].
pub fn catalog(name: &str, n: Option<u32>) -> Result<CatalogEntry> {
    catalog_entry(CatalogName::parse(name, n)?)
}
