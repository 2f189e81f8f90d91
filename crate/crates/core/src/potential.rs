//! Polynomial potentials `V(2ζ) = Σ_k w_k ζ^k`.
//!
//! Two flavours: a numeric split `w_k = base_k + g·pert_k` (quartic, sextic,
//! user files), and a generic one in which every `w_k` is its own symbol.

use std::collections::BTreeMap;
use std::path::Path;

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{parse_rational, DensePoly, MPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PotentialKind {
    /// `w_k = base[k] + g·pert[k]`.
    Split {
        base: BTreeMap<u32, Rational>,
        pert: BTreeMap<u32, Rational>,
    },
    /// `w_k` is the free symbol `W(k)` for `1 ≤ k ≤ max_k`.
    Generic { max_k: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PotentialSpec {
    pub name: String,
    pub kind: PotentialKind,
}

impl PotentialSpec {
    pub fn split(
        name: impl Into<String>,
        base: &[(u32, Rational)],
        pert: &[(u32, Rational)],
    ) -> Result<Self> {
        let clean = |xs: &[(u32, Rational)]| -> BTreeMap<u32, Rational> {
            xs.iter()
                .filter(|(_, c)| c.cmp0().is_ne())
                .cloned()
                .collect()
        };
        let p = PotentialSpec {
            name: name.into(),
            kind: PotentialKind::Split {
                base: clean(base),
                pert: clean(pert),
            },
        };
        p.validate()?;
        Ok(p)
    }

    pub fn generic(max_k: u32) -> Self {
        PotentialSpec {
            name: format!("generic{max_k}"),
            kind: PotentialKind::Generic { max_k },
        }
    }

    /// `V(2ζ) = ζ`, i.e. `V = r²/2`.
    pub fn harmonic() -> Self {
        PotentialSpec::split("harmonic", &[(1, 1.into())], &[]).expect("valid")
    }

    /// `V = r²/2 + g r⁴`, so `w₁ = 1`, `w₂ = 4g`.
    pub fn quartic() -> Self {
        PotentialSpec::split("quartic", &[(1, 1.into())], &[(2, 4.into())]).expect("valid")
    }

    /// `V(2ζ) = ζ + g ζ³`.
    pub fn sextic() -> Self {
        PotentialSpec::split("sextic", &[(1, 1.into())], &[(3, 1.into())]).expect("valid")
    }

    fn validate(&self) -> Result<()> {
        match &self.kind {
            PotentialKind::Split { base, pert } => {
                if base.contains_key(&0) || pert.contains_key(&0) {
                    return Err(Error::InvalidPotential("V(0) must vanish (w_0 = 0)".into()));
                }
                if base.is_empty() && pert.is_empty() {
                    return Err(Error::InvalidPotential("all coefficients vanish".into()));
                }
            }
            PotentialKind::Generic { max_k } => {
                if *max_k == 0 {
                    return Err(Error::InvalidPotential("generic potential needs max_k ≥ 1".into()));
                }
            }
        }
        Ok(())
    }

    /// Variables of the ring in which spectral polynomials live; `E` first.
    pub fn vars(&self) -> Vec<Var> {
        match &self.kind {
            PotentialKind::Split { .. } => vec![Var::E, Var::G],
            PotentialKind::Generic { max_k } => {
                let mut v = vec![Var::E];
                v.extend((1..=*max_k).map(Var::W));
                v
            }
        }
    }

    /// Largest `k` with a (possibly) nonzero `w_k`.
    pub fn max_k(&self) -> u32 {
        match &self.kind {
            PotentialKind::Split { base, pert } => base
                .keys()
                .chain(pert.keys())
                .copied()
                .max()
                .unwrap_or(0),
            PotentialKind::Generic { max_k } => *max_k,
        }
    }

    /// `w_k` as a polynomial over [`Self::vars`].
    pub fn w(&self, k: u32) -> MPoly {
        let vars = self.vars();
        match &self.kind {
            PotentialKind::Split { base, pert } => {
                let mut p = MPoly::constant(&vars, base.get(&k).cloned().unwrap_or_default());
                if let Some(c) = pert.get(&k) {
                    p = &p + &MPoly::monomial(&vars, c.clone(), &[(Var::G, 1)]).expect("g in vars");
                }
                p
            }
            PotentialKind::Generic { max_k } => {
                if (1..=*max_k).contains(&k) {
                    MPoly::var(&vars, Var::W(k)).expect("w_k in vars")
                } else {
                    MPoly::zero(&vars)
                }
            }
        }
    }

    /// Numeric `w_k` at a given coupling (split potentials only).
    pub fn w_at(&self, k: u32, g: &Rational) -> Result<Rational> {
        match &self.kind {
            PotentialKind::Split { base, pert } => {
                let mut c = base.get(&k).cloned().unwrap_or_default();
                if let Some(p) = pert.get(&k) {
                    c += Rational::from(p * g);
                }
                Ok(c)
            }
            PotentialKind::Generic { .. } => Err(Error::InvalidPotential(
                "numeric coefficients need a split potential".into(),
            )),
        }
    }

    /// The perturbation `u(ζ)` in `V(2ζ) = ζ + g·u(ζ)`. Fails unless the
    /// unperturbed part is exactly harmonic.
    pub fn perturbation(&self) -> Result<DensePoly> {
        match &self.kind {
            PotentialKind::Split { base, pert } => {
                if base.len() != 1 || base.get(&1).is_none_or(|c| *c != 1) {
                    return Err(Error::InvalidPotential(
                        "unperturbed part must be V(2ζ) = ζ (w₁ = 1)".into(),
                    ));
                }
                let deg = pert.keys().copied().max().unwrap_or(0) as usize;
                let mut c = vec![Rational::new(); deg + 1];
                for (k, v) in pert {
                    c[*k as usize] = v.clone();
                }
                Ok(DensePoly::new(Var::Zeta, c))
            }
            PotentialKind::Generic { .. } => Err(Error::InvalidPotential(
                "perturbation split needs a numeric potential".into(),
            )),
        }
    }

    pub fn is_quartic(&self) -> bool {
        self.kind == PotentialSpec::quartic().kind
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: PotentialFile = serde_json::from_str(s)?;
        f.into_spec()
    }

    pub fn to_json(&self) -> String {
        let f = match &self.kind {
            PotentialKind::Split { base, pert } => PotentialFile {
                name: self.name.clone(),
                base: base.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                pert: pert.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect(),
                generic: None,
            },
            PotentialKind::Generic { max_k } => PotentialFile {
                name: self.name.clone(),
                base: BTreeMap::new(),
                pert: BTreeMap::new(),
                generic: Some(*max_k),
            },
        };
        serde_json::to_string(&f).expect("plain data serializes")
    }
}

/// On-disk form: `{"name":"quartic","base":{"1":"1"},"pert":{"2":"4"}}`, or
/// `{"name":"w4","generic":4}` for symbolic coefficients.
#[derive(Serialize, Deserialize)]
struct PotentialFile {
    #[serde(default)]
    name: String,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    base: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pert: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    generic: Option<u32>,
}

impl PotentialFile {
    fn into_spec(self) -> Result<PotentialSpec> {
        let name = if self.name.is_empty() { "file".to_string() } else { self.name };
        if let Some(max_k) = self.generic {
            if !self.base.is_empty() || !self.pert.is_empty() {
                return Err(Error::InvalidPotential(
                    "`generic` excludes `base`/`pert`".into(),
                ));
            }
            let mut p = PotentialSpec::generic(max_k);
            p.name = name;
            p.validate()?;
            return Ok(p);
        }
        let conv = |m: BTreeMap<String, String>| -> Result<Vec<(u32, Rational)>> {
            m.into_iter()
                .map(|(k, v)| {
                    let k: u32 = k
                        .parse()
                        .map_err(|_| Error::InvalidPotential(format!("bad power `{k}`")))?;
                    Ok((k, parse_rational(&v)?))
                })
                .collect()
        };
        PotentialSpec::split(name, &conv(self.base)?, &conv(self.pert)?)
    }
}

/// Builtin potentials, addressable by name.
pub struct PotentialRegistry {
    entries: Vec<(&'static str, fn() -> PotentialSpec)>,
}

impl Default for PotentialRegistry {
    fn default() -> Self {
        PotentialRegistry {
            entries: vec![
                ("harmonic", PotentialSpec::harmonic),
                ("quartic", PotentialSpec::quartic),
                ("sextic", PotentialSpec::sextic),
            ],
        }
    }
}

impl PotentialRegistry {
    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }

    pub fn get(&self, name: &str) -> Result<PotentialSpec> {
        self.entries
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, f)| f())
            .ok_or_else(|| Error::UnknownStrategy {
                kind: "potential",
                name: name.to_string(),
            })
    }

    /// A builtin name, or a path to a potential JSON file.
    pub fn resolve(&self, source: &str) -> Result<PotentialSpec> {
        if let Ok(p) = self.get(source) {
            return Ok(p);
        }
        let path = Path::new(source);
        if path.extension().is_some_and(|e| e == "json") || path.exists() {
            let s = std::fs::read_to_string(path)?;
            return PotentialSpec::from_json(&s);
        }
        self.get(source)
    }
}
