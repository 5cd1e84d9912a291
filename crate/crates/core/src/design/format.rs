//! On-disk forms of a pooling matrix: a versioned JSON document listing
//! pools by item index, and a dense 0/1 CSV with one row per pool.

use serde::{Deserialize, Serialize};

use super::{PoolLabel, PoolingMatrix, Slope};
use crate::error::{Error, Result};
use crate::gf::FieldElem;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixDocument {
    format_version: u32,
    q: Option<u32>,
    m: Option<u32>,
    n: usize,
    t: usize,
    pools: Vec<Vec<usize>>,
    #[serde(default)]
    labels: Vec<LabelDocument>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LabelDocument {
    slope: SlopeDocument,
    intercept: u32,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum SlopeDocument {
    Finite(u32),
    Symbol(String),
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

/// Serializes the matrix as the canonical JSON document, one pool per line.
pub fn write_matrix_json(matrix: &PoolingMatrix) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    out.push_str(&format!("  \"format_version\": {FORMAT_VERSION},\n"));
    out.push_str(&format!("  \"q\": {},\n", json(&matrix.q)));
    out.push_str(&format!("  \"m\": {},\n", json(&matrix.m)));
    out.push_str(&format!("  \"n\": {},\n", matrix.n));
    out.push_str(&format!("  \"t\": {},\n", matrix.t()));
    out.push_str("  \"pools\": [");
    push_lines(&mut out, matrix.pools.iter().map(json));
    out.push_str("],\n");
    out.push_str("  \"labels\": [");
    let labels = matrix.labels.as_deref().unwrap_or(&[]);
    push_lines(
        &mut out,
        labels.iter().map(|l| {
            json(&LabelDocument {
                slope: match l.slope {
                    Slope::Finite(a) => SlopeDocument::Finite(a.index()),
                    Slope::Infinity => SlopeDocument::Symbol("inf".into()),
                },
                intercept: l.intercept.index(),
            })
        }),
    );
    out.push_str("]\n}\n");
    out
}

fn push_lines(out: &mut String, items: impl Iterator<Item = String>) {
    let mut any = false;
    for (k, item) in items.enumerate() {
        out.push_str(if k == 0 { "\n    " } else { ",\n    " });
        out.push_str(&item);
        any = true;
    }
    if any {
        out.push_str("\n  ");
    }
}

fn parse_json(text: &str) -> Result<PoolingMatrix> {
    let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line() as u64,
        column: e.column() as u64,
        message: e.to_string(),
    })?;
    if doc.format_version != FORMAT_VERSION {
        return Err(Error::domain(format!(
            "unsupported format_version {} (expected {FORMAT_VERSION})",
            doc.format_version
        )));
    }
    if doc.t != doc.pools.len() {
        return Err(Error::domain(format!(
            "header says t = {} but {} pools are listed",
            doc.t,
            doc.pools.len()
        )));
    }
    let mut matrix = PoolingMatrix::from_pools(doc.n, doc.pools)?;
    matrix.q = doc.q;
    matrix.m = doc.m;
    if !doc.labels.is_empty() {
        let labels = doc
            .labels
            .into_iter()
            .map(|l| {
                let slope = match l.slope {
                    SlopeDocument::Finite(a) => Slope::Finite(FieldElem(a)),
                    SlopeDocument::Symbol(s) if s == "inf" => Slope::Infinity,
                    SlopeDocument::Symbol(s) => return Err(Error::domain(format!("unknown slope {s:?}"))),
                };
                Ok(PoolLabel {
                    slope,
                    intercept: FieldElem(l.intercept),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        matrix = matrix.with_labels(labels)?;
    }
    Ok(matrix)
}

/// Dense `t × n` 0/1 CSV, no header, LF line endings.
pub fn write_dense_csv(matrix: &PoolingMatrix) -> String {
    let mut out = String::with_capacity(matrix.t() * (2 * matrix.n + 1));
    let mut row = vec!['0'; matrix.n];
    for pool in &matrix.pools {
        row.iter_mut().for_each(|c| *c = '0');
        for &j in pool {
            row[j] = '1';
        }
        for (j, c) in row.iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            out.push(*c);
        }
        out.push('\n');
    }
    out
}

/// Parses a dense 0/1 CSV. Every entry must be `0` or `1`; errors carry the
/// 1-based line and column of the offending field.
pub fn read_dense_csv(text: &str) -> Result<PoolingMatrix> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    let mut n = None;
    let mut pools = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map(|p| p.line()).unwrap_or(0);
            Error::Parse {
                line,
                column: 0,
                message: e.to_string(),
            }
        })?;
        let line = record.position().map(|p| p.line()).unwrap_or(0);
        let mut pool = Vec::new();
        for (j, field) in record.iter().enumerate() {
            match field {
                "0" => {}
                "1" => pool.push(j),
                other => {
                    return Err(Error::Parse {
                        line,
                        column: j as u64 + 1,
                        message: format!("expected 0 or 1, found {other:?}"),
                    })
                }
            }
        }
        match n {
            None => n = Some(record.len()),
            Some(w) if w != record.len() => {
                return Err(Error::Parse {
                    line,
                    column: 0,
                    message: format!("row has {} entries, expected {w}", record.len()),
                })
            }
            _ => {}
        }
        pools.push(pool);
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: 1,
        column: 0,
        message: "empty matrix".into(),
    })?;
    PoolingMatrix::from_pools(n, pools)
}

/// Reads either format, choosing JSON when the first non-blank character
/// is `{`.
pub fn read_matrix_file(text: &str) -> Result<PoolingMatrix> {
    if text.trim_start().starts_with('{') {
        parse_json(text)
    } else {
        read_dense_csv(text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::{build_multipool, fano_plane, MultipoolParams};

    #[test]
    fn json_round_trip_is_identity() {
        for (q, m) in [(2, 2), (4, 5), (7, 8), (9, 3)] {
            let mat = build_multipool(MultipoolParams::new(q, m).unwrap()).unwrap();
            let text = write_matrix_json(&mat);
            let back = read_matrix_file(&text).unwrap();
            assert_eq!(back, mat);
            assert_eq!(write_matrix_json(&back), text);
        }
    }

    #[test]
    fn json_layout() {
        let mat = build_multipool(MultipoolParams::new(2, 3).unwrap()).unwrap();
        let text = write_matrix_json(&mat);
        assert!(text.starts_with(
            "{\n  \"format_version\": 1,\n  \"q\": 2,\n  \"m\": 3,\n  \"n\": 4,\n  \"t\": 6,\n"
        ));
        assert!(text.contains("\n    [0,2],\n"));
        assert!(text.contains("{\"slope\":\"inf\",\"intercept\":1}"));
        let parsed: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(parsed["pools"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn unlabeled_matrix_round_trips() {
        let fano = fano_plane();
        let text = write_matrix_json(&fano);
        assert!(text.contains("\"labels\": []"));
        assert_eq!(read_matrix_file(&text).unwrap(), fano);
    }

    #[test]
    fn dense_csv_round_trip() {
        let mat = build_multipool(MultipoolParams::new(3, 4).unwrap()).unwrap();
        let csv = write_dense_csv(&mat);
        assert_eq!(csv.lines().count(), 12);
        assert!(csv.lines().all(|l| l.split(',').count() == 9));
        let back = read_dense_csv(&csv).unwrap();
        assert_eq!(back.pools(), mat.pools());
        assert_eq!(back.q(), Some(3));
        assert_eq!(back.m(), Some(4));
    }

    #[test]
    fn csv_rejects_non_binary_entry_with_position() {
        let err = read_dense_csv("0,1,1\n1,2,0\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 2,
                column: 2,
                message: "expected 0 or 1, found \"2\"".into()
            }
        );
        assert!(matches!(
            read_dense_csv("0,1\n1\n"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn json_errors_carry_position() {
        match read_matrix_file("{\n  \"format_version\": 1,\n  \"q\": x\n}") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        let bad_t = "{\"format_version\":1,\"q\":null,\"m\":null,\"n\":2,\"t\":3,\"pools\":[[0]]}";
        assert!(matches!(read_matrix_file(bad_t), Err(Error::Domain(_))));
        let bad_version = "{\"format_version\":7,\"q\":null,\"m\":null,\"n\":2,\"t\":1,\"pools\":[[0]]}";
        assert!(matches!(read_matrix_file(bad_version), Err(Error::Domain(_))));
    }
}
