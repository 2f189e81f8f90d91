//! Polynomial JSON interchange:
//! `{"var":["E","g"],"terms":[{"deg":[dE,dG],"coef":"p/q"}]}`.

use serde::{Deserialize, Serialize};

use super::{parse_rational, DensePoly, MPoly, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub deg: Vec<u32>,
    pub coef: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub var: Vec<String>,
    pub terms: Vec<TermJson>,
}

impl PolyJson {
    /// Terms are emitted in descending lex order so output is deterministic.
    pub fn from_mpoly(p: &MPoly) -> Self {
        let mut terms: Vec<TermJson> = p
            .terms()
            .map(|(e, c)| TermJson {
                deg: e.to_vec(),
                coef: c.to_string(),
            })
            .collect();
        terms.reverse();
        PolyJson {
            var: p.vars().iter().map(Var::to_string).collect(),
            terms,
        }
    }

    pub fn from_dense(p: &DensePoly) -> Self {
        let terms = p
            .coeffs()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| c.cmp0().is_ne())
            .map(|(d, c)| TermJson {
                deg: vec![d as u32],
                coef: c.to_string(),
            })
            .collect();
        PolyJson {
            var: vec![p.var().to_string()],
            terms,
        }
    }

    pub fn to_mpoly(&self) -> Result<MPoly> {
        let vars = self
            .var
            .iter()
            .map(|s| s.parse::<Var>())
            .collect::<Result<Vec<_>>>()?;
        let terms = self
            .terms
            .iter()
            .map(|t| Ok((t.deg.clone(), parse_rational(&t.coef)?)))
            .collect::<Result<Vec<_>>>()?;
        MPoly::from_terms(&vars, terms)
    }

    pub fn to_dense(&self) -> Result<DensePoly> {
        if self.var.len() != 1 {
            return Err(Error::Parse(format!(
                "expected a univariate polynomial, got variables {:?}",
                self.var
            )));
        }
        let v: Var = self.var[0].parse()?;
        self.to_mpoly()?.to_dense(v)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("plain data serializes")
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;

    #[test]
    fn schema_shape() {
        let p = MPoly::from_terms(&[Var::E, Var::G], [(vec![0, 1], q(4, 1)), (vec![3, 0], q(-1, 4))]).unwrap();
        let s = PolyJson::from_mpoly(&p).to_json_string();
        assert_eq!(
            s,
            r#"{"var":["E","g"],"terms":[{"deg":[3,0],"coef":"-1/4"},{"deg":[0,1],"coef":"4"}]}"#
        );
        assert_eq!(PolyJson::parse(&s).unwrap().to_mpoly().unwrap(), p);
    }

    #[test]
    fn decimals_rejected() {
        let s = r#"{"var":["D"],"terms":[{"deg":[1],"coef":"0.5"}]}"#;
        assert!(PolyJson::parse(s).unwrap().to_dense().is_err());
    }
}
