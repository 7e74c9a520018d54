use std::io::Write;
use std::path::Path;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::metric::{metric_order_estimate, ExponentFit};

pub const SCHEMA: &str = "emergence-run/1";

/// JSON written by every command. The timestamp is the last field so that two runs
/// differ only on that line.
#[derive(Debug, Serialize)]
pub struct RunRecord<'a, C: Serialize, R: Serialize> {
    pub schema: &'static str,
    pub config: &'a C,
    pub input_hash: String,
    pub result: &'a R,
    pub timestamp: u64,
}

/// SHA-256 over the config JSON followed by the bytes of each input file.
pub fn input_hash<C: Serialize>(config: &C, inputs: &[&Path]) -> Result<String> {
    let mut h = Sha256::new();
    h.update(serde_json::to_vec(config)?);
    for p in inputs {
        h.update(std::fs::read(p)?);
    }
    Ok(h.finalize().iter().map(|b| format!("{b:02x}")).collect())
}

pub fn write_record<C: Serialize, R: Serialize>(path: &Path, config: &C, inputs: &[&Path], result: &R) -> Result<()> {
    let record = RunRecord {
        schema: SCHEMA,
        config,
        input_hash: input_hash(config, inputs)?,
        result,
        timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
    };
    let mut f = std::fs::File::create(path)?;
    serde_json::to_writer_pretty(&mut f, &record)?;
    writeln!(f)?;
    Ok(())
}

/// One line of a scaling table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
pub struct ScalingRow {
    pub epsilon: f64,
    pub lower: f64,
    pub upper: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    pub lower_fit: ExponentFit,
    pub upper_fit: Option<ExponentFit>,
}

fn loglog(v: f64) -> Option<f64> {
    (v > 1.0).then(|| v.ln().ln())
}

/// Fits `log log Q` against `-log eps` for both columns.
pub fn scaling_report(rows: &[ScalingRow]) -> Result<ScalingReport> {
    if rows.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 rows, got {}", rows.len())));
    }
    let lower: Vec<(f64, f64)> = rows.iter().map(|r| (r.epsilon, r.lower)).collect();
    let upper: Option<Vec<(f64, f64)>> = rows.iter().map(|r| r.upper.map(|u| (r.epsilon, u))).collect();
    Ok(ScalingReport {
        rows: rows.to_vec(),
        lower_fit: metric_order_estimate(&lower)?,
        upper_fit: upper.map(|u| metric_order_estimate(&u)).transpose()?,
    })
}

pub fn write_scaling_csv<W: Write>(out: W, rows: &[ScalingRow]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    w.write_record(["epsilon", "neg_log_eps", "lower", "upper", "loglog_lower", "loglog_upper"])?;
    let cell = |v: Option<f64>| v.map_or(String::new(), |x| x.to_string());
    for r in rows {
        w.write_record([
            r.epsilon.to_string(),
            (-r.epsilon.ln()).to_string(),
            r.lower.to_string(),
            cell(r.upper),
            cell(loglog(r.lower)),
            cell(r.upper.and_then(loglog)),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scaling_csv<R: std::io::Read>(input: R) -> Result<Vec<ScalingRow>> {
    let mut r = csv::Reader::from_reader(input);
    let mut rows = Vec::new();
    for rec in r.deserialize::<ScalingRow>() {
        rows.push(rec?);
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stretched_exponential_table() {
        let rows: Vec<ScalingRow> = [0.2, 0.1, 0.05, 0.025]
            .iter()
            .map(|&e: &f64| ScalingRow {
                epsilon: e,
                lower: (1.0 / e).exp(),
                upper: Some((1.0 / e).exp()),
            })
            .collect();
        let rep = scaling_report(&rows).unwrap();
        assert!((rep.lower_fit.exponent - 1.0).abs() < 0.1);
        assert!((rep.upper_fit.unwrap().exponent - 1.0).abs() < 0.1);
    }

    #[test]
    fn constant_table_has_zero_exponent() {
        let rows: Vec<ScalingRow> = [0.3, 0.2, 0.1]
            .iter()
            .map(|&e| ScalingRow {
                epsilon: e,
                lower: 5.0,
                upper: None,
            })
            .collect();
        let rep = scaling_report(&rows).unwrap();
        assert!(rep.lower_fit.exponent.abs() < 1e-12);
        assert!(rep.upper_fit.is_none());
        assert!(matches!(scaling_report(&rows[..2]), Err(Error::DegenerateFit(_))));
    }

    #[test]
    fn csv_columns() {
        let rows = vec![ScalingRow {
            epsilon: 0.5,
            lower: 1.0,
            upper: Some(std::f64::consts::E),
        }];
        let mut buf = Vec::new();
        write_scaling_csv(&mut buf, &rows).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("epsilon,neg_log_eps,lower,upper,loglog_lower,loglog_upper"));
        assert_eq!(lines.next(), Some(format!("0.5,{},1,{},,0", 2f64.ln(), std::f64::consts::E).as_str()));
        assert!(!text.contains('\r'));
    }
}
