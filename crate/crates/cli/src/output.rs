//! Deterministic table rendering.
//!
//! Both formats are assembled by hand from the same 9-significant-digit
//! scientific rendering so that a given record produces identical bytes on
//! every run and the CSV and JSON views of a number never disagree. The
//! column set and order are a compatibility contract; tests pin the header
//! string byte for byte.

use dicke_core::SweepRecord;

use crate::config::OutputFormat;

pub const SWEEP_HEADER: &str =
    "lambda,branch,re_w1,im_w1,re_w2,im_w2,re_w3,im_w3,physical,energy_density";
pub const ENERGY_HEADER: &str = "lambda,branch,energy_density";
pub const ORACLE_HEADER: &str = "quantity,engine,oracle,abs_diff";

/// Nine significant digits, scientific. `{:.8e}` output is also a valid
/// JSON number, which is what keeps the two formats byte-consistent.
pub fn sci9(x: f64) -> String {
    format!("{x:.8e}")
}

/// One comparison row of the oracle table.
pub struct OracleRow {
    pub quantity: String,
    pub engine: f64,
    pub oracle: f64,
}

pub fn render_sweep(records: &[SweepRecord], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(records.len() * 96);
            out.push_str(SWEEP_HEADER);
            out.push('\n');
            for r in records {
                out.push_str(&sci9(r.lambda));
                out.push(',');
                out.push_str(r.branch.label());
                match r.frequencies {
                    Some(ws) => {
                        for w in ws {
                            out.push(',');
                            out.push_str(&sci9(w.re));
                            out.push(',');
                            out.push_str(&sci9(w.im));
                        }
                    }
                    None => out.push_str(",,,,,,"),
                }
                out.push(',');
                out.push(if r.physical { '1' } else { '0' });
                out.push(',');
                if let Some(e) = r.energy_density {
                    out.push_str(&sci9(e));
                }
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::from("[\n");
            for (i, r) in records.iter().enumerate() {
                out.push_str("{\"lambda\":");
                out.push_str(&sci9(r.lambda));
                out.push_str(",\"branch\":\"");
                out.push_str(r.branch.label());
                out.push('"');
                for k in 0..3 {
                    let (re, im) = match r.frequencies {
                        Some(ws) => (sci9(ws[k].re), sci9(ws[k].im)),
                        None => ("null".into(), "null".into()),
                    };
                    out.push_str(&format!(",\"re_w{}\":{re},\"im_w{}\":{im}", k + 1, k + 1));
                }
                out.push_str(",\"physical\":");
                out.push(if r.physical { '1' } else { '0' });
                out.push_str(",\"energy_density\":");
                match r.energy_density {
                    Some(e) => out.push_str(&sci9(e)),
                    None => out.push_str("null"),
                }
                out.push('}');
                if i + 1 < records.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("]\n");
            out
        }
    }
}

pub fn render_energy(branch_label: &str, curve: &[(f64, f64)], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(curve.len() * 48);
            out.push_str(ENERGY_HEADER);
            out.push('\n');
            for &(lambda, e) in curve {
                out.push_str(&sci9(lambda));
                out.push(',');
                out.push_str(branch_label);
                out.push(',');
                out.push_str(&sci9(e));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::from("[\n");
            for (i, &(lambda, e)) in curve.iter().enumerate() {
                out.push_str("{\"lambda\":");
                out.push_str(&sci9(lambda));
                out.push_str(",\"branch\":\"");
                out.push_str(branch_label);
                out.push_str("\",\"energy_density\":");
                out.push_str(&sci9(e));
                out.push('}');
                if i + 1 < curve.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("]\n");
            out
        }
    }
}

pub fn render_oracle(rows: &[OracleRow], format: OutputFormat) -> String {
    match format {
        OutputFormat::Csv => {
            let mut out = String::with_capacity(rows.len() * 64);
            out.push_str(ORACLE_HEADER);
            out.push('\n');
            for row in rows {
                out.push_str(&row.quantity);
                out.push(',');
                out.push_str(&sci9(row.engine));
                out.push(',');
                out.push_str(&sci9(row.oracle));
                out.push(',');
                out.push_str(&sci9((row.engine - row.oracle).abs()));
                out.push('\n');
            }
            out
        }
        OutputFormat::Json => {
            let mut out = String::from("[\n");
            for (i, row) in rows.iter().enumerate() {
                out.push_str("{\"quantity\":\"");
                out.push_str(&row.quantity);
                out.push_str("\",\"engine\":");
                out.push_str(&sci9(row.engine));
                out.push_str(",\"oracle\":");
                out.push_str(&sci9(row.oracle));
                out.push_str(",\"abs_diff\":");
                out.push_str(&sci9((row.engine - row.oracle).abs()));
                out.push('}');
                if i + 1 < rows.len() {
                    out.push(',');
                }
                out.push('\n');
            }
            out.push_str("]\n");
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use dicke_core::Branch;
    use num_complex::Complex64;

    fn sample_records() -> Vec<SweepRecord> {
        vec![
            SweepRecord {
                lambda: 0.25,
                branch: Branch::Sr1,
                frequencies: None,
                physical: false,
                energy_density: None,
            },
            SweepRecord {
                lambda: 0.75,
                branch: Branch::Sr1,
                frequencies: Some([
                    Complex64::new(1.5, 0.0),
                    Complex64::new(0.5, 0.0),
                    Complex64::new(0.0, 0.0),
                ]),
                physical: true,
                energy_density: Some(-0.125),
            },
        ]
    }

    #[test]
    fn sci9_is_nine_significant_digits() {
        assert_eq!(sci9(0.75), "7.50000000e-1");
        assert_eq!(sci9(-0.125), "-1.25000000e-1");
        assert_eq!(sci9(0.0), "0.00000000e0");
        assert_eq!(sci9(243.0), "2.43000000e2");
    }

    #[test]
    fn csv_rows_use_empty_fields_for_absent_values() {
        let text = render_sweep(&sample_records(), OutputFormat::Csv);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), SWEEP_HEADER);
        assert_eq!(lines.next().unwrap(), "2.50000000e-1,sr1,,,,,,,0,");
        assert_eq!(
            lines.next().unwrap(),
            "7.50000000e-1,sr1,1.50000000e0,0.00000000e0,5.00000000e-1,0.00000000e0,\
             0.00000000e0,0.00000000e0,1,-1.25000000e-1"
        );
        assert!(lines.next().is_none());
    }

    #[test]
    fn json_rows_parse_and_match_csv_values() {
        let text = render_sweep(&sample_records(), OutputFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        let rows = parsed.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        assert!(rows[0]["re_w1"].is_null());
        assert!(rows[0]["energy_density"].is_null());
        assert_eq!(rows[0]["physical"], 0);
        assert_eq!(rows[1]["physical"], 1);
        assert_eq!(rows[1]["lambda"].as_f64().unwrap(), 0.75);
        assert_eq!(rows[1]["energy_density"].as_f64().unwrap(), -0.125);
        assert_eq!(rows[1]["branch"], "sr1");
    }

    #[test]
    fn energy_and_oracle_tables_render_their_headers() {
        let energy = render_energy("normal", &[(0.5, -0.25)], OutputFormat::Csv);
        assert_eq!(
            energy,
            "lambda,branch,energy_density\n5.00000000e-1,normal,-2.50000000e-1\n"
        );

        let rows = vec![OracleRow {
            quantity: "ground".into(),
            engine: 1.0,
            oracle: 1.0 + 1e-9,
        }];
        let oracle = render_oracle(&rows, OutputFormat::Csv);
        assert!(oracle.starts_with("quantity,engine,oracle,abs_diff\n"));
        assert!(oracle.contains("ground,1.00000000e0,1.00000000e0,"));

        let oracle_json = render_oracle(&rows, OutputFormat::Json);
        let parsed: serde_json::Value = serde_json::from_str(&oracle_json).unwrap();
        assert_eq!(parsed[0]["quantity"], "ground");
    }
}
