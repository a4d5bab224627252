use std::collections::BTreeMap;
use std::path::Path;

use coact::clifford::{Algebra, AlgebraDescriptor};
use coact::scalars::{Field, FieldDescriptor};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaEntry {
    pub i: usize,
    pub j: usize,
    pub value: String,
}

/// On-disk description of `Cl(α, βᵢ, γᵢ, λᵢⱼ)`; scalars are canonical strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraConfig {
    pub field: FieldDescriptor,
    pub n: usize,
    pub alpha: String,
    #[serde(default)]
    pub beta: Vec<String>,
    #[serde(default)]
    pub gamma: Vec<String>,
    #[serde(default)]
    pub lambda: Vec<LambdaEntry>,
}

impl AlgebraConfig {
    pub fn descriptor(&self) -> Result<AlgebraDescriptor, coact::Error> {
        let field = Field::from_descriptor(&self.field)?;
        let n = self.n;
        let scalars = |what: &'static str, v: &[String]| {
            if v.len() != n {
                return Err(coact::Error::Arity { what, expected: n, got: v.len() });
            }
            v.iter().map(|s| field.parse(s)).collect::<Result<Vec<_>, _>>()
        };
        let beta = scalars("beta", &self.beta)?;
        let gamma = scalars("gamma", &self.gamma)?;
        let mut lambda = BTreeMap::new();
        for e in &self.lambda {
            if e.i == 0 || e.i >= e.j || e.j > n {
                return Err(coact::Error::BadIndex { i: e.i, j: e.j });
            }
            lambda.insert((e.i, e.j), field.parse(&e.value)?);
        }
        Ok(AlgebraDescriptor {
            alpha: field.parse(&self.alpha)?,
            field,
            n,
            beta,
            gamma,
            lambda,
        })
    }
}

pub fn load_config(path: &Path) -> Result<Algebra, CliError> {
    let cfg: AlgebraConfig = read_json(path)?;
    Ok(Algebra::new(cfg.descriptor()?)?)
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

/// `rational`, `prime:P`, or a JSON field descriptor.
pub fn parse_field(s: &str) -> Result<Field, CliError> {
    let desc = if s == "rational" {
        FieldDescriptor::Rational
    } else if let Some(p) = s.strip_prefix("prime:") {
        let p = p.parse().map_err(|_| CliError::Usage(format!("bad prime in {s:?}")))?;
        FieldDescriptor::Prime { p }
    } else {
        serde_json::from_str(s).map_err(|e| CliError::Usage(format!("bad field {s:?}: {e}")))?
    };
    Ok(Field::from_descriptor(&desc)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> Result<AlgebraDescriptor, CliError> {
        let c: AlgebraConfig = serde_json::from_str(json).map_err(|source| CliError::Json {
            path: "<inline>".into(),
            source,
        })?;
        Ok(c.descriptor()?)
    }

    #[test]
    fn parses_minimal_config() {
        let d = cfg(r#"{"field":{"kind":"rational"},"n":1,"alpha":"1","beta":["1"],"gamma":["0"]}"#).unwrap();
        assert_eq!(d.n, 1);
        assert_eq!(d.dim(), 4);
    }

    #[test]
    fn rejects_bad_configs() {
        let lam = r#"{"field":{"kind":"rational"},"n":2,"alpha":"1","beta":["1","1"],"gamma":["0","0"],
                     "lambda":[{"i":2,"j":1,"value":"1"}]}"#;
        assert!(matches!(cfg(lam), Err(CliError::Core(coact::Error::BadIndex { .. }))));
        let p2 = r#"{"field":{"kind":"prime","p":2},"n":0,"alpha":"1"}"#;
        assert!(matches!(cfg(p2), Err(CliError::Core(coact::Error::CharTwo))));
        let extra = r#"{"field":{"kind":"rational"},"n":0,"alpha":"1","colour":"red"}"#;
        assert!(matches!(cfg(extra), Err(CliError::Json { .. })));
        let short = r#"{"field":{"kind":"rational"},"n":1,"alpha":"1","beta":[],"gamma":["0"]}"#;
        assert!(matches!(cfg(short), Err(CliError::Core(coact::Error::Arity { .. }))));
    }

    #[test]
    fn field_shorthands() {
        assert_eq!(parse_field("rational").unwrap(), Field::rational());
        assert_eq!(parse_field("prime:5").unwrap(), Field::prime(5).unwrap());
        assert_eq!(parse_field(r#"{"kind":"prime","p":7}"#).unwrap(), Field::prime(7).unwrap());
        assert!(parse_field("prime:x").is_err());
    }
}
