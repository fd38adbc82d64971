//! JSON interchange for fields, matrices, form spaces, frames and cyclotomic
//! matrices. Elements are written as `"0"` or `"z^k"`.

use std::fs;
use std::path::Path;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycInt, CycMatrix};
use crate::error::{Error, Result};
use crate::field::{prime_power, Felt, Field, FieldCtx};
use crate::form::{Case, FormSpace};
use crate::frame::{ETFParams, Flags, FrameRecord};
use crate::matrix::Mat;

/// Designated primitive element: `"z"` for the field's default, otherwise its
/// coefficient vector (low degree first).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Generator {
    Named(String),
    Coeffs(Vec<u64>),
}

impl Default for Generator {
    fn default() -> Self {
        Generator::Named("z".into())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub m: u32,
    pub modulus: Vec<u64>,
    #[serde(default)]
    pub generator: Generator,
}

impl FieldSpec {
    pub fn of(f: &Field) -> FieldSpec {
        let default = FieldCtx::new(f.characteristic(), f.degree(), Some(f.modulus().to_vec()))
            .expect("modulus already validated");
        let generator = if default.zeta().raw() == f.zeta().raw() {
            Generator::default()
        } else {
            Generator::Coeffs(f.coeffs(f.zeta()))
        };
        FieldSpec {
            p: f.characteristic(),
            m: f.degree(),
            modulus: f.modulus().to_vec(),
            generator,
        }
    }

    pub fn build(&self) -> Result<Field> {
        let f = FieldCtx::new(self.p, self.m, Some(self.modulus.clone()))?;
        match &self.generator {
            Generator::Named(s) if s == "z" => Ok(f),
            Generator::Named(s) => Err(Error::Invalid(format!("unknown generator {s:?}"))),
            Generator::Coeffs(c) => {
                let z = f.from_coeffs(c)?;
                f.with_generator(z)
            }
        }
    }
}

/// Parses `"9"`, `"3^2"`, `"F9"`, `"F_9"` or `"GF(9)"` into the Conway field.
pub fn parse_field_shorthand(s: &str) -> Result<Field> {
    let t = s.trim();
    let t = t
        .strip_prefix("GF(")
        .and_then(|r| r.strip_suffix(')'))
        .or_else(|| t.strip_prefix("F_"))
        .or_else(|| t.strip_prefix('F'))
        .unwrap_or(t);
    let bad = || Error::Invalid(format!("cannot parse field {s:?}"));
    // `q^e` with `q` itself a prime power, so `27^2` is `F_{3^6}`
    let (base, e) = match t.split_once('^') {
        Some((b, e)) => (b, e.trim().parse::<u32>().map_err(|_| bad())?),
        None => (t, 1),
    };
    let (p, m) = prime_power(base.trim().parse::<u64>().map_err(|_| bad())?).ok_or_else(bad)?;
    let m = m.checked_mul(e).ok_or_else(bad)?;
    FieldCtx::new(p, m, None)
}

/// A field given either by shorthand or by its full parameters.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FieldRef {
    Order(u64),
    Short(String),
    Spec(FieldSpec),
}

impl FieldRef {
    pub fn resolve(&self) -> Result<Field> {
        match self {
            FieldRef::Order(q) => parse_field_shorthand(&q.to_string()),
            FieldRef::Short(s) => parse_field_shorthand(s),
            FieldRef::Spec(spec) => spec.build(),
        }
    }
}

/// A matrix entry: `"z^k"`, `"0"`, or an integer (string or number).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Entry {
    Int(i64),
    Text(String),
}

impl Entry {
    fn parse(&self, f: &Field) -> Result<Felt> {
        match self {
            Entry::Int(n) => Ok(f.from_int(*n)),
            Entry::Text(s) => f.parse(s),
        }
    }
}

fn entries_of(m: &Mat) -> Vec<Vec<Entry>> {
    let f = m.field();
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| Entry::Text(f.format(m.get(i, j)))).collect())
        .collect()
}

fn mat_of_entries(f: &Field, rows: usize, cols: usize, entries: &[Vec<Entry>]) -> Result<Mat> {
    if entries.len() != rows || entries.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch(format!(
            "declared {rows}x{cols} but entries have a different shape"
        )));
    }
    let mut m = Mat::zeros(f, rows, cols);
    for (i, row) in entries.iter().enumerate() {
        for (j, e) in row.iter().enumerate() {
            let x = e
                .parse(f)
                .map_err(|err| Error::Invalid(format!("entry ({i}, {j}): {err}")))?;
            m.set(i, j, x);
        }
    }
    Ok(m)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub field: FieldSpec,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Entry>>,
}

impl MatrixJson {
    pub fn of(m: &Mat) -> MatrixJson {
        MatrixJson {
            field: FieldSpec::of(m.field()),
            rows: m.rows(),
            cols: m.cols(),
            entries: entries_of(m),
        }
    }

    pub fn to_mat(&self) -> Result<Mat> {
        let f = self.field.build()?;
        mat_of_entries(&f, self.rows, self.cols, &self.entries)
    }

    pub fn to_mat_in(&self, f: &Field) -> Result<Mat> {
        mat_of_entries(f, self.rows, self.cols, &self.entries)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormSpaceJson {
    pub case: Case,
    pub field: FieldSpec,
    pub dim: usize,
    /// Omitted for the complex or real model.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gram: Option<Vec<Vec<Entry>>>,
}

impl FormSpaceJson {
    pub fn of(s: &FormSpace) -> FormSpaceJson {
        FormSpaceJson {
            case: s.case(),
            field: FieldSpec::of(s.field()),
            dim: s.dim(),
            gram: (!s.is_standard()).then(|| entries_of(s.gram())),
        }
    }

    pub fn to_space(&self) -> Result<FormSpace> {
        let f = self.field.build()?;
        self.to_space_in(&f)
    }

    pub fn to_space_in(&self, f: &Field) -> Result<FormSpace> {
        match &self.gram {
            None => FormSpace::standard(self.case, f, self.dim),
            Some(g) => FormSpace::new(self.case, mat_of_entries(f, self.dim, self.dim, g)?),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub d: usize,
    pub n: usize,
    pub a: Option<String>,
    pub b: Option<String>,
    pub c: Option<String>,
    pub flags: Flags,
}

impl ParamsJson {
    pub fn of(p: &ETFParams, f: &Field) -> ParamsJson {
        let fmt = |x: Option<Felt>| x.map(|v| f.format(v));
        ParamsJson {
            d: p.d,
            n: p.n,
            a: fmt(p.a),
            b: fmt(p.b),
            c: fmt(p.c),
            flags: p.flags,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameJson {
    pub matrix: MatrixJson,
    pub space: FormSpaceJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<ParamsJson>,
}

impl FrameJson {
    pub fn of(fr: &FrameRecord, with_params: bool) -> FrameJson {
        FrameJson {
            matrix: MatrixJson::of(&fr.phi),
            space: FormSpaceJson::of(&fr.space),
            params: with_params.then(|| ParamsJson::of(&fr.classify(), fr.field())),
        }
    }

    pub fn to_frame(&self) -> Result<FrameRecord> {
        let f = self.matrix.field.build()?;
        if self.space.field != self.matrix.field {
            return Err(Error::FieldMismatch);
        }
        FrameRecord::new(self.matrix.to_mat_in(&f)?, self.space.to_space_in(&f)?)
    }
}

/// `{"k": 4, "entries": [[[a0, a1], ...], ...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycMatrixJson {
    pub k: u32,
    pub entries: Vec<Vec<Vec<i64>>>,
}

impl CycMatrixJson {
    pub fn of(m: &CycMatrix) -> Result<CycMatrixJson> {
        let coeff = |c: &BigInt| {
            c.to_i64()
                .ok_or_else(|| Error::Invalid("coefficient exceeds 64 bits".into()))
        };
        let entries = (0..m.rows())
            .map(|i| {
                (0..m.cols())
                    .map(|j| m.get(i, j).coeffs().iter().map(coeff).collect())
                    .collect()
            })
            .collect::<Result<_>>()?;
        Ok(CycMatrixJson { k: m.k(), entries })
    }

    pub fn to_matrix(&self) -> Result<CycMatrix> {
        let rows = self
            .entries
            .iter()
            .map(|r| r.iter().map(|c| CycInt::from_i64s(self.k, c)).collect())
            .collect();
        CycMatrix::from_rows(self.k, rows)
    }
}

/// Compact serialization with fixed key order, stable across runs.
pub fn canonical_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializable")
}

pub fn from_json_str<T: DeserializeOwned>(s: &str) -> Result<T> {
    Ok(serde_json::from_str(s)?)
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let s = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    from_json_str(&s)
}

pub fn write_json<T: Serialize>(path: &Path, v: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    fs::write(path, s).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Reads a frame file, or a bare matrix file taken in the given standard geometry.
pub fn read_frame(path: &Path, case: Case) -> Result<FrameRecord> {
    let s = fs::read_to_string(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let v: serde_json::Value = serde_json::from_str(&s)?;
    if v.get("matrix").is_some() {
        from_json_str::<FrameJson>(&s)?.to_frame()
    } else {
        FrameRecord::standard(from_json_str::<MatrixJson>(&s)?.to_mat()?, case)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::exemplar;

    #[test]
    fn shorthand_fields() {
        let f = parse_field_shorthand("27^2").unwrap();
        assert_eq!((f.characteristic(), f.degree()), (3, 6));
        for s in ["9", "3^2", "F9", "F_9", "GF(9)"] {
            let f = parse_field_shorthand(s).unwrap();
            assert_eq!((f.characteristic(), f.degree()), (3, 2));
        }
        assert!(parse_field_shorthand("6").is_err());
        assert!(parse_field_shorthand("x").is_err());
    }

    #[test]
    fn field_spec_round_trip() {
        let f = parse_field_shorthand("25").unwrap();
        let spec = FieldSpec::of(&f);
        assert_eq!(spec.generator, Generator::default());
        assert_eq!(spec.build().unwrap().id(), f.id());
        let g = f.with_generator(f.zeta_pow(5)).unwrap();
        let spec = FieldSpec::of(&g);
        assert!(matches!(spec.generator, Generator::Coeffs(_)));
        assert_eq!(spec.build().unwrap().zeta(), g.zeta());
        let text = r#"{"p":3,"m":2,"modulus":[2,2,1],"generator":"z"}"#;
        let spec: FieldSpec = from_json_str(text).unwrap();
        assert_eq!(spec.build().unwrap().order(), 9);
    }

    #[test]
    fn frame_round_trip_and_stability() {
        let fr = exemplar("6x27").unwrap();
        let js = FrameJson::of(&fr, true);
        let text = canonical_json(&js);
        let back: FrameJson = from_json_str(&text).unwrap();
        assert_eq!(back.to_frame().unwrap(), fr);
        assert_eq!(canonical_json(&back), text);
    }

    #[test]
    fn integers_accepted_as_entries() {
        let text = r#"{"field":{"p":5,"m":1,"modulus":[3,1]},"rows":1,"cols":3,"entries":[[1,"2","z^1"]]}"#;
        let m: MatrixJson = from_json_str(text).unwrap();
        let m = m.to_mat().unwrap();
        assert_eq!(m.get(0, 1), m.field().from_int(2));
        assert_eq!(m.get(0, 2), m.field().from_int(2));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = from_json_str::<MatrixJson>("{\n  \"rows\": 1,\n  oops").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    }
}
