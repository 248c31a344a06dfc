//! Matrix Market (`array` and `coordinate`) matrices and plain-text vectors,
//! with every value reduced into `F_p` on load.

use num_bigint::{BigInt, Sign};

use super::{FieldMatrix, Storage};
use crate::error::{Error, Result};
use crate::pairing::ScalarField;

fn reduce<F: ScalarField>(field: &F, token: &str) -> Result<F::Elem> {
    let v: BigInt = token
        .parse()
        .map_err(|_| Error::decode(format!("not an integer: {token:?}")))?;
    let p = BigInt::from_biguint(Sign::Plus, field.modulus());
    let r = ((v % &p) + &p) % &p;
    Ok(field.from_biguint(r.magnitude()))
}

fn parse_usize(token: Option<&str>, what: &str) -> Result<usize> {
    token
        .ok_or_else(|| Error::decode(format!("missing {what}")))?
        .parse()
        .map_err(|_| Error::decode(format!("bad {what}")))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    SkewSymmetric,
}

/// Parses a Matrix Market `matrix` file with `integer` or `pattern` values.
///
/// Coordinate files become sparse matrices, array files dense ones.
/// Symmetric and skew-symmetric coordinate files are expanded.
pub fn read_matrix<F: ScalarField>(field: &F, text: &str) -> Result<FieldMatrix<F::Elem>> {
    let mut lines = text.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::decode("empty Matrix Market file"))?;
    let h: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if h.len() != 5 || h[0] != "%%matrixmarket" || h[1] != "matrix" {
        return Err(Error::decode(format!("bad Matrix Market banner: {header:?}")));
    }
    let coordinate = match h[2].as_str() {
        "coordinate" => true,
        "array" => false,
        other => return Err(Error::decode(format!("unsupported format {other:?}"))),
    };
    let pattern = match h[3].as_str() {
        "integer" => false,
        "pattern" if coordinate => true,
        other => return Err(Error::decode(format!("unsupported field type {other:?}"))),
    };
    let symmetry = match h[4].as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "skew-symmetric" => Symmetry::SkewSymmetric,
        other => return Err(Error::decode(format!("unsupported symmetry {other:?}"))),
    };
    if !coordinate && symmetry != Symmetry::General {
        return Err(Error::decode("only general array matrices are supported"));
    }

    let mut body = lines
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%'));
    let size = body.next().ok_or_else(|| Error::decode("missing size line"))?;
    let mut it = size.split_whitespace();
    let rows = parse_usize(it.next(), "row count")?;
    let cols = parse_usize(it.next(), "column count")?;

    if !coordinate {
        let mut col_major = Vec::with_capacity(rows * cols);
        for line in body {
            for tok in line.split_whitespace() {
                col_major.push(reduce(field, tok)?);
            }
        }
        if col_major.len() != rows * cols {
            return Err(Error::decode(format!(
                "array matrix {rows}x{cols} has {} values",
                col_major.len()
            )));
        }
        let mut data = vec![field.zero(); rows * cols];
        for (k, v) in col_major.into_iter().enumerate() {
            data[(k % rows) * cols + k / rows] = v;
        }
        return FieldMatrix::dense(rows, cols, data);
    }

    let nnz = parse_usize(it.next(), "entry count")?;
    let mut triples = Vec::with_capacity(nnz);
    for line in body {
        let mut t = line.split_whitespace();
        let i = parse_usize(t.next(), "row index")?;
        let j = parse_usize(t.next(), "column index")?;
        if i == 0 || j == 0 {
            return Err(Error::decode("Matrix Market indices are 1-based"));
        }
        let v = if pattern {
            field.one()
        } else {
            reduce(field, t.next().ok_or_else(|| Error::decode("missing value"))?)?
        };
        let (i, j) = (i - 1, j - 1);
        triples.push((i, j, v));
        if i != j {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => triples.push((j, i, v)),
                Symmetry::SkewSymmetric => triples.push((j, i, field.neg(v))),
            }
        }
    }
    let declared = triples.len();
    if symmetry == Symmetry::General && declared != nnz {
        return Err(Error::decode(format!(
            "coordinate matrix declares {nnz} entries, found {declared}"
        )));
    }
    FieldMatrix::sparse(field, rows, cols, triples).map_err(|e| Error::decode(e.to_string()))
}

/// Writes `a` in Matrix Market form: coordinate for sparse storage, array for
/// dense. Values are written as canonical representatives in `[0, p)`.
pub fn write_matrix<F: ScalarField>(field: &F, a: &FieldMatrix<F::Elem>) -> String {
    let mut out = String::new();
    match a.storage() {
        Storage::Sparse(t) => {
            out.push_str("%%MatrixMarket matrix coordinate integer general\n");
            out.push_str(&format!("{} {} {}\n", a.rows(), a.cols(), t.len()));
            for (i, j, v) in t {
                out.push_str(&format!("{} {} {}\n", i + 1, j + 1, field.to_biguint(v)));
            }
        }
        Storage::Dense(_) => {
            out.push_str("%%MatrixMarket matrix array integer general\n");
            out.push_str(&format!("{} {}\n", a.rows(), a.cols()));
            let zero = field.zero();
            for j in 0..a.cols() {
                for i in 0..a.rows() {
                    out.push_str(&format!("{}\n", field.to_biguint(&a.get(i, j, zero))));
                }
            }
        }
    }
    out
}

/// One decimal integer per line; blank lines and `%`/`#` comments are skipped.
pub fn read_vector<F: ScalarField>(field: &F, text: &str) -> Result<Vec<F::Elem>> {
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('%') && !l.starts_with('#'))
        .map(|l| reduce(field, l))
        .collect()
}

pub fn write_vector<F: ScalarField>(field: &F, v: &[F::Elem]) -> String {
    v.iter()
        .map(|x| format!("{}\n", field.to_biguint(x)))
        .collect()
}
