use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::{CascadeSeed, SampledFn, ScalingProfile};
use crate::code_space::C64;
use crate::error::{input, Result};

/// Reads one `re,im` pair (or a lone real part) per line, no header.
pub fn read_signal_csv<R: Read>(reader: R) -> Result<Vec<C64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut out = Vec::new();
    for (line, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("line {}: bad number {s:?}", line + 1))
        };
        let v = match rec.len() {
            1 => C64::new(parse(&rec[0]).or_else(input)?, 0.0),
            2 => C64::new(
                parse(&rec[0]).or_else(input)?,
                parse(&rec[1]).or_else(input)?,
            ),
            k => {
                return input(format!(
                    "line {}: expected 1 or 2 fields, got {k}",
                    line + 1
                ))
            }
        };
        out.push(v);
    }
    if out.is_empty() {
        return input("signal is empty");
    }
    Ok(out)
}

pub fn write_signal_csv<W: Write>(out: W, signal: &[C64]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out);
    for v in signal {
        w.write_record([format!("{:.17e}", v.re), format!("{:.17e}", v.im)])?;
    }
    w.flush()?;
    Ok(())
}

/// Taps as a JSON array of reals.
pub fn read_taps_json(text: &str) -> Result<Vec<f64>> {
    let taps: Vec<f64> = serde_json::from_str(text)?;
    if taps.is_empty() {
        return input("taps are empty");
    }
    Ok(taps)
}

/// `x,value` lines with a header.
pub fn write_profile_csv<W: Write>(out: W, f: &SampledFn) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["x", "value"])?;
    for (k, v) in f.values.iter().enumerate() {
        w.write_record([format!("{:.17e}", f.x(k)), format!("{v:.17e}")])?;
    }
    w.flush()?;
    Ok(())
}

/// Cascade metadata written next to the sample CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    #[serde(rename = "N")]
    pub n: usize,
    pub taps: Vec<f64>,
    pub iters: usize,
    pub resolution: usize,
    pub seed: CascadeSeed,
    pub seed_used: CascadeSeed,
    pub residuals: Vec<f64>,
    pub integral: f64,
}

impl From<&ScalingProfile> for ProfileMeta {
    fn from(p: &ScalingProfile) -> Self {
        Self {
            n: p.n,
            taps: p.taps.clone(),
            iters: p.iterations(),
            resolution: p.phi.resolution,
            seed: p.seed,
            seed_used: p.seed_used,
            residuals: p.residuals.clone(),
            integral: p.integral(),
        }
    }
}
