//! Cipher specs from `--config` or inline flags.

use std::path::PathBuf;

use clap::Args;
use serde::de::DeserializeOwned;

use spn_core::cipher::{
    CipherConfig, CipherSpec, ElemRepr, KeyScheduleConfig, SboxConfig, SboxPairConfig,
};
use spn_core::state::StateMatrix;
use spn_core::{Error, Result};

#[derive(Args, Debug, Clone, Default)]
pub struct SpecArgs {
    /// JSON cipher configuration file.
    #[arg(long, conflicts_with_all = ["p", "m", "n"])]
    pub config: Option<PathBuf>,
    /// Field characteristic.
    #[arg(long)]
    pub p: Option<u64>,
    /// Extension degree.
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Modulus coefficients, constant term first, e.g. 3,1,1.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub modulus: Option<Vec<i64>>,
    #[arg(long)]
    pub m: Option<usize>,
    #[arg(long)]
    pub n: Option<usize>,
    /// S-box multiplier A (integer code).
    #[arg(long = "a", default_value_t = 1)]
    pub a: i64,
    /// S-box offset B (integer code).
    #[arg(long = "b", default_value_t = 0)]
    pub b: i64,
    /// Row shifts c(0),...,c(m-1); zeros when omitted.
    #[arg(long, value_delimiter = ',')]
    pub shifts: Option<Vec<usize>>,
    /// Mix matrix as JSON rows; the identity when omitted.
    #[arg(long)]
    pub mix: Option<String>,
    /// Number of rounds s (overrides the config).
    #[arg(long)]
    pub s: Option<usize>,
    /// Seeded key schedule (overrides the config).
    #[arg(long)]
    pub key_seed: Option<u64>,
}

pub(crate) fn parse_json<T: DeserializeOwned>(what: &str, text: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::invalid(what, e.to_string()))
}

impl SpecArgs {
    pub fn config(&self) -> Result<CipherConfig> {
        let mut cfg = match &self.config {
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::invalid("config", format!("{}: {e}", path.display())))?;
                CipherConfig::from_json(&text)?
            }
            None => {
                let p = self
                    .p
                    .ok_or_else(|| Error::invalid("p", "required without --config"))?;
                let m = self
                    .m
                    .ok_or_else(|| Error::invalid("m", "required without --config"))?;
                let n = self
                    .n
                    .ok_or_else(|| Error::invalid("n", "required without --config"))?;
                let mix = match &self.mix {
                    Some(text) => parse_json("mix", text)?,
                    None => (0..m)
                        .map(|i| (0..m).map(|j| ElemRepr::Code((i == j) as i64)).collect())
                        .collect(),
                };
                CipherConfig {
                    p,
                    r: self.r,
                    modulus: self.modulus.clone(),
                    m,
                    n,
                    sbox: SboxConfig::Global(SboxPairConfig {
                        a: ElemRepr::Code(self.a),
                        b: ElemRepr::Code(self.b),
                    }),
                    shifts: self.shifts.clone().unwrap_or_else(|| vec![0; m]),
                    mix,
                    s: 2,
                    key_schedule: None,
                    start: None,
                }
            }
        };
        if let Some(s) = self.s {
            cfg.s = s;
            if matches!(
                cfg.key_schedule,
                Some(KeyScheduleConfig::Independent { .. })
            ) && self.key_seed.is_none()
            {
                return Err(Error::invalid(
                    "s",
                    "cannot override s with an independent key list",
                ));
            }
        }
        if let Some(seed) = self.key_seed {
            cfg.key_schedule = Some(KeyScheduleConfig::Seeded { seed });
        }
        Ok(cfg)
    }

    pub fn spec(&self) -> Result<(CipherConfig, CipherSpec)> {
        let cfg = self.config()?;
        let spec = cfg.build()?;
        Ok((cfg, spec))
    }
}

/// A state given as JSON rows of element codes or coefficient lists.
pub fn parse_state(
    cfg: &CipherConfig,
    spec: &CipherSpec,
    what: &str,
    text: &str,
) -> Result<StateMatrix> {
    let rows: Vec<Vec<ElemRepr>> = parse_json(what, text)?;
    cfg.parse_state(spec, what, &rows)
}

pub fn parse_states(
    cfg: &CipherConfig,
    spec: &CipherSpec,
    what: &str,
    text: &str,
) -> Result<Vec<StateMatrix>> {
    let list: Vec<Vec<Vec<ElemRepr>>> = parse_json(what, text)?;
    list.iter()
        .enumerate()
        .map(|(i, rows)| cfg.parse_state(spec, &format!("{what}[{i}]"), rows))
        .collect()
}
