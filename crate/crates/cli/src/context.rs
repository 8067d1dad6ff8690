//! Field resolution, element parsing and the error type shared by commands.

use std::path::{Path, PathBuf};

use exotic_core::funfield::{FieldError, Notation, RatField, RatFunc};
use exotic_core::rank1::{Mat2, Rank1Error, TimmesfeldData};
use exotic_core::sp4::{Mat4, Sp4Error};
use exotic_core::tower::{
    Config, ConfigError, IndifferentSpec, RSpaceSpec, SubfieldSpec, TowerError,
};
use exotic_core::unipotent::UnipotentError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit code 2.
    Usage(String),
    /// A check or validation failed, or a file is missing: exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failed(_) => 1,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Failed(m) => m,
        }
    }
}

impl From<FieldError> for CliError {
    fn from(e: FieldError) -> Self {
        match e {
            FieldError::Parse { .. }
            | FieldError::ArityMismatch { .. }
            | FieldError::Unsupported { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<ConfigError> for CliError {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io(_) => CliError::Failed(e.to_string()),
            ConfigError::Field(f) => f.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<TowerError> for CliError {
    fn from(e: TowerError) -> Self {
        match e {
            TowerError::Field(f) => f.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<Rank1Error> for CliError {
    fn from(e: Rank1Error) -> Self {
        CliError::Failed(e.to_string())
    }
}

impl From<UnipotentError> for CliError {
    fn from(e: UnipotentError) -> Self {
        match e {
            UnipotentError::Parse(_) | UnipotentError::NoSuchSlot(_) => {
                CliError::Usage(e.to_string())
            }
            UnipotentError::Field(f) => f.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

impl From<Sp4Error> for CliError {
    fn from(e: Sp4Error) -> Self {
        match e {
            Sp4Error::WrongLength(_) | Sp4Error::UnknownRoot(_) => CliError::Usage(e.to_string()),
            Sp4Error::Field(f) => f.into(),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// Global flags that select the field and the data files.
#[derive(Clone, Debug, Default)]
pub struct FieldArgs {
    pub p: Option<u32>,
    pub vars: Option<Vec<String>>,
    pub config: Option<PathBuf>,
}

pub struct Ctx {
    pub nt: Notation,
    pub config: Option<Config>,
}

impl Ctx {
    /// The config file wins over -p/--vars; without either the field is F_2(t,u,v).
    pub fn resolve(args: &FieldArgs) -> Result<Ctx, CliError> {
        if let Some(path) = &args.config {
            return Ctx::from_config(path);
        }
        let p = args.p.unwrap_or(2);
        let vars = args
            .vars
            .clone()
            .unwrap_or_else(|| vec!["t".into(), "u".into(), "v".into()]);
        let k = RatField::new(p, vars.len())?;
        Ok(Ctx {
            nt: Notation::new(k, vars)?,
            config: None,
        })
    }

    pub fn from_config(path: &Path) -> Result<Ctx, CliError> {
        if !path.exists() {
            return Err(CliError::Failed(format!(
                "config not found: {}",
                path.display()
            )));
        }
        let c = Config::load(path)?;
        Ok(Ctx {
            nt: c.notation.clone(),
            config: Some(c),
        })
    }

    pub fn field(&self) -> RatField {
        self.nt.field()
    }

    pub fn parse(&self, s: &str) -> Result<RatFunc, CliError> {
        Ok(self.nt.parse(s)?)
    }

    pub fn show(&self, x: &RatFunc) -> String {
        self.nt.render(x)
    }

    pub fn parse_list(&self, s: &str, n: usize) -> Result<Vec<RatFunc>, CliError> {
        let parts: Vec<&str> = s.split(';').collect();
        if parts.len() != n {
            return Err(CliError::Usage(format!(
                "expected {n} ';'-separated entries, got {}",
                parts.len()
            )));
        }
        parts.iter().map(|e| self.parse(e.trim())).collect()
    }

    pub fn mat2(&self, s: &str) -> Result<Mat2, CliError> {
        let e = self.parse_list(s, 4)?;
        let [a, b, c, d]: [RatFunc; 4] = e.try_into().expect("four entries");
        Ok(Mat2::new(a, b, c, d)?)
    }

    pub fn mat4(&self, s: &str) -> Result<Mat4, CliError> {
        Ok(Mat4::from_entries(self.field(), self.parse_list(s, 16)?)?)
    }

    /// L from the config's timmesfeld section, or L = K.
    pub fn timmesfeld(&self) -> Result<TimmesfeldData, CliError> {
        let k = self.field();
        let Some((space, codim)) = self.config.as_ref().and_then(|c| c.timmesfeld.clone()) else {
            let l = RSpaceSpec::new("K", SubfieldSpec::whole(k), vec![k.one()])?;
            return Ok(TimmesfeldData::new(l, None)?);
        };
        let l = space.to_rspace("L", k)?;
        let codim = codim.map(|(gens, u)| (SubfieldSpec::new("K1", k, gens), u));
        Ok(TimmesfeldData::new(l, codim)?)
    }

    /// The config's indifferent set, or L0 = K0 = K.
    pub fn indifferent(&self) -> Result<IndifferentSpec, CliError> {
        if let Some(spec) = self.config.as_ref().and_then(|c| c.indifferent.clone()) {
            return Ok(spec);
        }
        let k = self.field();
        let whole = RSpaceSpec::new("K", SubfieldSpec::whole(k), vec![k.one()])?;
        Ok(IndifferentSpec::new(whole.clone(), whole, true)?)
    }

    pub fn k0_codim1(&self) -> Option<(SubfieldSpec, RatFunc)> {
        self.config.as_ref().and_then(|c| c.k0_codim1.clone())
    }

    /// k for the G2 datum: from the config, else K^p[first variable].
    pub fn g2_field(&self) -> SubfieldSpec {
        let k = self.field();
        let gens = self
            .config
            .as_ref()
            .and_then(|c| c.g2_k_gens.clone())
            .unwrap_or_else(|| vec![k.var(0)]);
        SubfieldSpec::new("k", k, gens)
    }
}
