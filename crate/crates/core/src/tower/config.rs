//! JSON configuration for towers, indifferent sets and related data.

use std::path::Path;

use serde::Deserialize;
use thiserror::Error;

use super::{IndifferentSpec, RSpaceSpec, SubfieldSpec, TowerError, TowerSpec};
use crate::funfield::{FieldError, Notation, RatField, RatFunc};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config: {0}")]
    Io(String),
    #[error("malformed config: {0}")]
    Json(String),
    #[error("config section '{0}' is missing")]
    Missing(&'static str),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Tower(#[from] TowerError),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    p: u32,
    vars: Vec<String>,
    #[serde(default)]
    subfields: Vec<RawSubfield>,
    #[serde(default)]
    rspaces: Vec<RawRSpace>,
    #[serde(default)]
    indifferent: Option<RawIndifferent>,
    #[serde(default)]
    timmesfeld: Option<RawTimmesfeld>,
    #[serde(default)]
    g2: Option<RawG2>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSubfield {
    name: String,
    gens: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRSpace {
    name: String,
    #[serde(default)]
    over: Option<String>,
    basis: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpace {
    #[serde(default)]
    over_field_gens: Vec<String>,
    basis: Vec<String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIndifferent {
    #[serde(rename = "L0")]
    l0: RawSpace,
    #[serde(rename = "K0")]
    k0: RawSpace,
    #[serde(default)]
    weak: Option<bool>,
    #[serde(default, rename = "K0_codim1")]
    k0_codim1: Option<RawCodim1>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTimmesfeld {
    #[serde(rename = "L")]
    l: RawSpace,
    #[serde(default)]
    codim1: Option<RawCodim1>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCodim1 {
    field_gens: Vec<String>,
    u: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawG2 {
    k_gens: Vec<String>,
}

/// A K_i-span given by generators of K_i over K^p and a basis.
#[derive(Clone, Debug)]
pub struct SpaceData {
    pub over_gens: Vec<RatFunc>,
    pub basis: Vec<RatFunc>,
}

impl SpaceData {
    pub fn to_rspace(&self, name: &str, field: RatField) -> Result<RSpaceSpec, TowerError> {
        let over = SubfieldSpec::new(format!("{name}.scalars"), field, self.over_gens.clone());
        RSpaceSpec::new(name, over, self.basis.clone())
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub notation: Notation,
    pub tower: TowerSpec,
    pub indifferent: Option<IndifferentSpec>,
    /// K1 and u with K0 = K1 ⊕ K^2·u, when declared.
    pub k0_codim1: Option<(SubfieldSpec, RatFunc)>,
    /// L and optional codim-1 data (generators of K_1 over K^2, and u).
    pub timmesfeld: Option<(SpaceData, Option<(Vec<RatFunc>, RatFunc)>)>,
    /// Generators of k over K^p for the G2 datum.
    pub g2_k_gens: Option<Vec<RatFunc>>,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let s = std::fs::read_to_string(path)
            .map_err(|e| ConfigError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json_str(&s)
    }

    pub fn from_json_str(s: &str) -> Result<Self, ConfigError> {
        let raw: RawConfig =
            serde_json::from_str(s).map_err(|e| ConfigError::Json(e.to_string()))?;
        let field = RatField::new(raw.p, raw.vars.len())?;
        let notation = Notation::new(field, raw.vars.clone())?;
        let parse = |v: &[String]| notation.parse_all(v);
        let space = |r: &RawSpace| -> Result<SpaceData, FieldError> {
            Ok(SpaceData {
                over_gens: parse(&r.over_field_gens)?,
                basis: parse(&r.basis)?,
            })
        };

        let mut subfields = Vec::new();
        for sf in &raw.subfields {
            subfields.push(SubfieldSpec::new(sf.name.clone(), field, parse(&sf.gens)?));
        }
        let mut rspaces = Vec::new();
        for r in &raw.rspaces {
            let over = match r.over.as_deref() {
                None | Some("Kp") | Some("K^p") => SubfieldSpec::kp(field),
                Some("K") => SubfieldSpec::whole(field),
                Some(name) => subfields
                    .iter()
                    .find(|f| f.name == name)
                    .cloned()
                    .ok_or_else(|| TowerError::UnknownField {
                        name: r.name.clone(),
                        over: name.to_string(),
                    })?,
            };
            rspaces.push(RSpaceSpec::new(r.name.clone(), over, parse(&r.basis)?)?);
        }
        let indifferent = match &raw.indifferent {
            None => None,
            Some(ind) => {
                let l0 = space(&ind.l0)?.to_rspace("L0", field)?;
                let k0 = space(&ind.k0)?.to_rspace("K0", field)?;
                Some(IndifferentSpec::new(l0, k0, ind.weak.unwrap_or(true))?)
            }
        };
        let k0_codim1 = match raw.indifferent.as_ref().and_then(|i| i.k0_codim1.as_ref()) {
            None => None,
            Some(c) => Some((
                SubfieldSpec::new("K1", field, parse(&c.field_gens)?),
                notation.parse(&c.u)?,
            )),
        };
        let timmesfeld = match &raw.timmesfeld {
            None => None,
            Some(t) => {
                let codim = match &t.codim1 {
                    None => None,
                    Some(c) => Some((parse(&c.field_gens)?, notation.parse(&c.u)?)),
                };
                Some((space(&t.l)?, codim))
            }
        };
        let g2_k_gens = raw.g2.as_ref().map(|g| parse(&g.k_gens)).transpose()?;
        Ok(Config {
            notation,
            tower: TowerSpec {
                field,
                subfields,
                rspaces,
            },
            indifferent,
            k0_codim1,
            timmesfeld,
            g2_k_gens,
        })
    }
}
