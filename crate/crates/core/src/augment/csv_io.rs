use std::io::{Read, Write};

use nalgebra::DMatrix;

use super::{AugmentError, AugmentationPlan};

/// Reads a headered CSV whose columns must match `plan.headers()` exactly.
pub fn read_csv<R: Read>(reader: R, plan: &AugmentationPlan) -> Result<DMatrix<f64>, AugmentError> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let expected = plan.headers();
    let got: Vec<String> = rdr.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    if got != expected {
        let column = expected.iter().zip(&got).position(|(a, b)| a != b).unwrap_or(expected.len().min(got.len()));
        return Err(AugmentError::HeaderMismatch {
            column,
            expected: expected.get(column).cloned().unwrap_or_else(|| "<end of row>".into()),
            got: got.get(column).cloned().unwrap_or_else(|| "<end of row>".into()),
        });
    }
    let mut values = Vec::new();
    let mut rows = 0;
    for (r, record) in rdr.records().enumerate() {
        let record = record.map_err(csv_err)?;
        for (c, field) in record.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| AugmentError::Csv(format!("row {}, column {c}: {field:?} is not a number", r + 1)))?;
            values.push(v);
        }
        rows += 1;
    }
    Ok(DMatrix::from_row_slice(rows, expected.len(), &values))
}

/// Writes rows with the plan's headers. Values use the shortest decimal form
/// that parses back to the same `f64`.
pub fn write_csv<W: Write>(writer: W, plan: &AugmentationPlan, rows: &DMatrix<f64>) -> Result<(), AugmentError> {
    let mut wtr = csv::Writer::from_writer(writer);
    wtr.write_record(plan.headers()).map_err(csv_err)?;
    for row in rows.row_iter() {
        wtr.write_record(row.iter().map(|v| v.to_string())).map_err(csv_err)?;
    }
    wtr.flush().map_err(|e| AugmentError::Csv(e.to_string()))
}

fn csv_err(e: csv::Error) -> AugmentError {
    AugmentError::Csv(e.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::{compile_schema, MeasurementSchema, SymmetrySpec};

    fn plan() -> AugmentationPlan {
        let ctx = SymmetrySpec::from_json(r#"{"reps": {"q": {"dim": 2, "generators": [{"target": [1, 0]}]}}}"#)
            .unwrap()
            .resolve()
            .unwrap();
        let schema = MeasurementSchema::from_json(
            r#"{"fields": [{"name": "q", "kind": "joint_space", "rep": "q"}, {"name": "t", "kind": "invariant_scalar"}]}"#,
        )
        .unwrap();
        compile_schema(&schema, &ctx).unwrap()
    }

    #[test]
    fn roundtrip() {
        let plan = plan();
        assert_eq!(plan.headers(), vec!["q_0", "q_1", "t"]);
        let rows = DMatrix::from_row_slice(2, 3, &[0.1, 1.0 / 3.0, -2.0, 1e-300, 5.5, 0.0]);
        let mut buf = Vec::new();
        write_csv(&mut buf, &plan, &rows).unwrap();
        assert_eq!(read_csv(buf.as_slice(), &plan).unwrap(), rows);
    }

    #[test]
    fn header_mismatch() {
        let err = read_csv("q_0,q_2,t\n1,2,3\n".as_bytes(), &plan()).unwrap_err();
        assert!(matches!(err, AugmentError::HeaderMismatch { column: 1, .. }), "{err:?}");
        assert!(read_csv("q_0,q_1\n1,2\n".as_bytes(), &plan()).is_err());
    }
}
