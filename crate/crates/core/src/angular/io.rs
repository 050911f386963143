//! CSV and JSON forms of [`AngularMeasure`].
//!
//! Columns: `x, y, weight_num, weight_den, angle_float`. Weights travel as
//! decimal strings so they survive any reader bit-exactly.

use std::io::{Read, Write};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::AngularMeasure;
use crate::error::{Error, Result};
use crate::zint::GaussInt;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureRow {
    pub x: i128,
    pub y: i128,
    pub weight_num: String,
    pub weight_den: String,
    pub angle_float: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct MeasureDoc {
    atoms: Vec<MeasureRow>,
}

impl AngularMeasure {
    pub fn rows(&self) -> Vec<MeasureRow> {
        self.atoms
            .iter()
            .map(|a| MeasureRow {
                x: a.dir.re,
                y: a.dir.im,
                weight_num: a.weight.numer().to_string(),
                weight_den: a.weight.denom().to_string(),
                angle_float: a.angle(),
            })
            .collect()
    }

    pub fn from_rows(rows: impl IntoIterator<Item = MeasureRow>) -> Result<Self> {
        let mut items = Vec::new();
        for r in rows {
            let num: BigInt = r
                .weight_num
                .parse()
                .map_err(|_| Error::Domain(format!("bad weight numerator {:?}", r.weight_num)))?;
            let den: BigInt = r
                .weight_den
                .parse()
                .map_err(|_| Error::Domain(format!("bad weight denominator {:?}", r.weight_den)))?;
            if den == BigInt::from(0) {
                return Err(Error::Domain("zero weight denominator".into()));
            }
            items.push((GaussInt::new(r.x, r.y), BigRational::new(num, den)));
        }
        AngularMeasure::from_weighted(items)
    }

    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in self.rows() {
            w.serialize(row)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read_csv(input: impl Read) -> Result<Self> {
        let mut r = csv::Reader::from_reader(input);
        let rows: std::result::Result<Vec<MeasureRow>, _> = r.deserialize().collect();
        Self::from_rows(rows?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(&MeasureDoc { atoms: self.rows() })?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: MeasureDoc = serde_json::from_str(s)?;
        Self::from_rows(doc.atoms)
    }
}
