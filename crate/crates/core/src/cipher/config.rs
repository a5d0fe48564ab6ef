//! JSON configuration for [`CipherSpec`].
//!
//! Field elements are written either as an integer code (the coefficient
//! vector read base p, low degree first) or as an explicit ascending
//! coefficient list.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{CipherSpec, KeySchedule, Sbox};
use crate::error::{Error, Result};
use crate::field::{make_field, Elem, FieldSpec, PrimePoly};
use crate::linalg::Matrix;
use crate::state::{StateMatrix, StateShape};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ElemRepr {
    Code(i64),
    Coeffs(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SboxPairConfig {
    #[serde(rename = "A", alias = "a")]
    pub a: ElemRepr,
    #[serde(rename = "B", alias = "b")]
    pub b: ElemRepr,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SboxConfig {
    Global(SboxPairConfig),
    PerPosition(Vec<Vec<SboxPairConfig>>),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KeyScheduleConfig {
    Independent { keys: Vec<Vec<Vec<ElemRepr>>> },
    Constant { key: Vec<Vec<ElemRepr>> },
    Seeded { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CipherConfig {
    pub p: u64,
    #[serde(default = "one")]
    pub r: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<i64>>,
    pub m: usize,
    pub n: usize,
    pub sbox: SboxConfig,
    pub shifts: Vec<usize>,
    pub mix: Vec<Vec<ElemRepr>>,
    #[serde(default = "two")]
    pub s: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub key_schedule: Option<KeyScheduleConfig>,
    /// Starting state for orbit analyses; the first unit vector when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Vec<Vec<ElemRepr>>>,
}

fn one() -> u32 {
    1
}

fn two() -> usize {
    2
}

fn parse_elem(f: &FieldSpec, field: &str, e: &ElemRepr) -> Result<Elem> {
    match e {
        ElemRepr::Code(v) => {
            if *v >= 0 && (*v as u64) < f.order() as u64 {
                Ok(Elem(*v as u32))
            } else if f.r() == 1 {
                Ok(f.from_int(*v))
            } else {
                Err(Error::invalid(
                    field,
                    format!("element code {v} not in GF({})", f.order()),
                ))
            }
        }
        ElemRepr::Coeffs(cs) => {
            if cs.len() > f.r() as usize {
                return Err(Error::invalid(
                    field,
                    format!("{} coefficients for extension degree {}", cs.len(), f.r()),
                ));
            }
            let p = f.p() as i64;
            let reduced: Vec<u64> = cs.iter().map(|c| c.rem_euclid(p) as u64).collect();
            f.from_coeffs(&reduced)
                .map_err(|e| Error::invalid(field, e.to_string()))
        }
    }
}

fn parse_state(shape: &StateShape, field: &str, rows: &[Vec<ElemRepr>]) -> Result<StateMatrix> {
    if rows.len() != shape.m() || rows.iter().any(|r| r.len() != shape.n()) {
        return Err(Error::invalid(
            field,
            format!("expected a {}x{} matrix", shape.m(), shape.n()),
        ));
    }
    let mut entries = Vec::with_capacity(shape.len());
    for (i, row) in rows.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            entries.push(parse_elem(shape.field(), &format!("{field}[{i}][{j}]"), e)?);
        }
    }
    shape.matrix(entries)
}

fn render_state(s: &StateMatrix) -> Vec<Vec<ElemRepr>> {
    s.rows()
        .into_iter()
        .map(|row| row.iter().map(|e| ElemRepr::Code(e.0 as i64)).collect())
        .collect()
}

impl CipherConfig {
    pub fn from_json(text: &str) -> Result<CipherConfig> {
        serde_json::from_str(text).map_err(|e| Error::invalid("config", e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn field(&self) -> Result<FieldSpec> {
        let modulus = match &self.modulus {
            Some(cs) => {
                let p = u32::try_from(self.p).map_err(|_| Error::invalid("p", "too large"))?;
                Some(PrimePoly::new(p, cs).map_err(|e| Error::invalid("modulus", e.to_string()))?)
            }
            None => None,
        };
        make_field(self.p, self.r, modulus).map_err(|e| match e {
            Error::NotPrime(_) => Error::invalid("p", e.to_string()),
            Error::NotIrreducible(_) | Error::DegreeMismatch { .. } | Error::NotMonic => {
                Error::invalid("modulus", e.to_string())
            }
            other => other,
        })
    }

    pub fn build(&self) -> Result<CipherSpec> {
        let field = Arc::new(self.field()?);
        let shape = StateShape::new(field.clone(), self.m, self.n)?;
        let f = &*field;
        let sbox = match &self.sbox {
            SboxConfig::Global(pair) => Sbox::Global {
                a: parse_elem(f, "sbox.A", &pair.a)?,
                b: parse_elem(f, "sbox.B", &pair.b)?,
            },
            SboxConfig::PerPosition(rows) => {
                if rows.len() != self.m || rows.iter().any(|r| r.len() != self.n) {
                    return Err(Error::invalid(
                        "sbox",
                        format!("expected a {}x{} grid of pairs", self.m, self.n),
                    ));
                }
                let mut pairs = Vec::new();
                for (i, row) in rows.iter().enumerate() {
                    for (j, pair) in row.iter().enumerate() {
                        pairs.push((
                            parse_elem(f, &format!("sbox[{i}][{j}].A"), &pair.a)?,
                            parse_elem(f, &format!("sbox[{i}][{j}].B"), &pair.b)?,
                        ));
                    }
                }
                Sbox::PerPosition(pairs)
            }
        };
        if self.mix.len() != self.m || self.mix.iter().any(|r| r.len() != self.m) {
            return Err(Error::invalid(
                "mix",
                format!("expected a {}x{} matrix", self.m, self.m),
            ));
        }
        let mut mix_rows = Vec::new();
        for (i, row) in self.mix.iter().enumerate() {
            let mut out = Vec::new();
            for (j, e) in row.iter().enumerate() {
                out.push(parse_elem(f, &format!("mix[{i}][{j}]"), e)?);
            }
            mix_rows.push(out);
        }
        let mix = Matrix::from_rows(mix_rows)?;
        let key_schedule =
            match &self.key_schedule {
                None => None,
                Some(KeyScheduleConfig::Seeded { seed }) => Some(KeySchedule::Seeded(*seed)),
                Some(KeyScheduleConfig::Constant { key }) => Some(KeySchedule::Constant(
                    parse_state(&shape, "key_schedule.key", key)?,
                )),
                Some(KeyScheduleConfig::Independent { keys }) => {
                    let mut out = Vec::new();
                    for (i, k) in keys.iter().enumerate() {
                        out.push(parse_state(&shape, &format!("key_schedule.keys[{i}]"), k)?);
                    }
                    Some(KeySchedule::Independent(out))
                }
            };
        CipherSpec::new(shape, sbox, self.shifts.clone(), mix, self.s, key_schedule)
    }

    pub fn parse_state(
        &self,
        spec: &CipherSpec,
        field: &str,
        rows: &[Vec<ElemRepr>],
    ) -> Result<StateMatrix> {
        parse_state(spec.shape(), field, rows)
    }

    /// The `start` state, or the state with a single 1 at position (0, 0).
    pub fn start_state(&self, spec: &CipherSpec) -> Result<StateMatrix> {
        match &self.start {
            Some(rows) => parse_state(spec.shape(), "start", rows),
            None => {
                let mut a = spec.shape().zero();
                a.set(0, 0, Elem::ONE);
                Ok(a)
            }
        }
    }
}

impl CipherSpec {
    pub fn from_json(text: &str) -> Result<CipherSpec> {
        CipherConfig::from_json(text)?.build()
    }

    /// Config with element codes, modulus always explicit.
    pub fn to_config(&self) -> CipherConfig {
        let f = self.field();
        let code = |e: Elem| ElemRepr::Code(e.0 as i64);
        let sbox = match self.sbox() {
            Sbox::Global { a, b } => SboxConfig::Global(SboxPairConfig {
                a: code(*a),
                b: code(*b),
            }),
            Sbox::PerPosition(pairs) => SboxConfig::PerPosition(
                pairs
                    .chunks(self.shape().n())
                    .map(|row| {
                        row.iter()
                            .map(|&(a, b)| SboxPairConfig {
                                a: code(a),
                                b: code(b),
                            })
                            .collect()
                    })
                    .collect(),
            ),
        };
        let key_schedule = self.key_schedule().map(|ks| match ks {
            KeySchedule::Seeded(seed) => KeyScheduleConfig::Seeded { seed: *seed },
            KeySchedule::Constant(k) => KeyScheduleConfig::Constant {
                key: render_state(k),
            },
            KeySchedule::Independent(keys) => KeyScheduleConfig::Independent {
                keys: keys.iter().map(render_state).collect(),
            },
        });
        CipherConfig {
            p: f.p() as u64,
            r: f.r(),
            modulus: Some(f.modulus().coeffs.iter().map(|&c| c as i64).collect()),
            m: self.shape().m(),
            n: self.shape().n(),
            sbox,
            shifts: self.shifts().to_vec(),
            mix: self
                .mix()
                .to_rows()
                .into_iter()
                .map(|r| r.into_iter().map(code).collect())
                .collect(),
            s: self.rounds(),
            key_schedule,
            start: None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GF7: &str = r#"{
        "p": 7, "r": 2, "modulus": [3, 1, 1], "m": 2, "n": 8,
        "sbox": {"A": 1, "B": 0},
        "shifts": [1, 5],
        "mix": [[1, 4], [1, 0]],
        "s": 2
    }"#;

    #[test]
    fn parses_example() {
        let spec = CipherSpec::from_json(GF7).unwrap();
        assert_eq!(spec.field().order(), 49);
        assert_eq!(spec.shifts(), &[1, 5]);
        let back = CipherSpec::from_json(&spec.to_config().to_json()).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn coefficient_lists() {
        let cfg = r#"{"p": 2, "r": 4, "m": 1, "n": 1, "sbox": {"A": [0, 1], "B": [1, 1, 0, 1]},
                      "shifts": [0], "mix": [[1]]}"#;
        let spec = CipherSpec::from_json(cfg).unwrap();
        assert_eq!(spec.global_sbox(), Some((Elem(2), Elem(11))));
    }

    #[test]
    fn errors_name_the_field() {
        let bad = GF7.replace("[[1, 4], [1, 0]]", "[[1, 1], [1, 1]]");
        let err = CipherSpec::from_json(&bad).unwrap_err();
        assert!(
            matches!(err, Error::Invalid { ref field, .. } if field == "mix"),
            "{err}"
        );
        let bad = GF7.replace("[3, 1, 1]", "[1, 0, 1]");
        // x^2 + 1 is irreducible over GF(7); x^2 + 6 is not
        assert!(CipherSpec::from_json(&bad).is_ok());
        let bad = GF7.replace("[3, 1, 1]", "[6, 0, 1]");
        let err = CipherSpec::from_json(&bad).unwrap_err();
        assert!(
            matches!(err, Error::Invalid { ref field, .. } if field == "modulus"),
            "{err}"
        );
        let bad = GF7.replace("\"A\": 1", "\"A\": 60");
        let err = CipherSpec::from_json(&bad).unwrap_err();
        assert!(
            matches!(err, Error::Invalid { ref field, .. } if field == "sbox.A"),
            "{err}"
        );
    }

    #[test]
    fn key_schedule_count() {
        let cfg = r#"{"p": 3, "m": 1, "n": 1, "sbox": {"A": 2, "B": 1}, "shifts": [0], "mix": [[1]],
                      "s": 2, "key_schedule": {"kind": "independent", "keys": [[[1]], [[2]]]}}"#;
        let err = CipherSpec::from_json(cfg).unwrap_err();
        assert_eq!(
            err,
            Error::KeyCountMismatch {
                expected: 3,
                found: 2
            }
        );
    }
}
