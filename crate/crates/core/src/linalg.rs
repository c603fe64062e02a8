//! Dense matrices over F_q and F_{q^m}.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::gf::{prime_field, Field, FieldElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mat {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

/// Result of Gaussian elimination. `pivots` are 0-based column indices.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Mat,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl Mat {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Mat {
            field: field.clone(),
            rows,
            cols,
            data: vec![FieldElement::ZERO; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Builds a matrix from rows; `cols` is needed to describe the empty matrix.
    pub fn from_rows(field: &Field, cols: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in &rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row of length {} in a matrix with {cols} columns",
                    row.len()
                )));
            }
            for &x in row {
                data.push(field.check(x)?);
            }
        }
        Ok(Mat {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a matrix from packed element codes (prime-field entries are their own codes).
    pub fn from_codes(field: &Field, cols: usize, rows: &[Vec<u32>]) -> Result<Self> {
        Mat::from_rows(
            field,
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&c| FieldElement::from_code(c)).collect())
                .collect(),
        )
    }

    /// Parses a JSON array of rows of element tokens.
    pub fn from_json(field: &Field, value: &Value) -> Result<Self> {
        let rows = value
            .as_array()
            .ok_or_else(|| Error::BadToken("matrix must be an array of rows".into()))?;
        let mut parsed = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row
                .as_array()
                .ok_or_else(|| Error::BadToken("matrix row must be an array".into()))?;
            parsed.push(
                row.iter()
                    .map(|t| parse_token(field, t))
                    .collect::<Result<Vec<_>>>()?,
            );
        }
        let cols = parsed.first().map_or(0, |r| r.len());
        Mat::from_rows(field, cols, parsed)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| {
                    Value::Array(
                        self.row(i)
                            .iter()
                            .map(|&x| Value::String(self.field.format_element(x)))
                            .collect(),
                    )
                })
                .collect(),
        )
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: FieldElement) {
        self.data[i * self.cols + j] = x;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut t = Mat::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Mat::zeros(f, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j);
                        out.set(i, j, f.add(cur, f.mul(a, b)));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Re-reads a prime-field matrix inside an extension of the same characteristic.
    pub fn lift(&self, target: &Field) -> Result<Mat> {
        if self.field.q() != target.q() || self.field.m() != 1 {
            if self.field == *target {
                return Ok(self.clone());
            }
            return Err(Error::SpecMismatch);
        }
        Ok(Mat {
            field: target.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.clone(),
        })
    }

    pub fn vstack(&self, other: &Mat) -> Result<Mat> {
        if self.field != other.field {
            return Err(Error::SpecMismatch);
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "stacking {} and {} columns",
                self.cols, other.cols
            )));
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Mat {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut a = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..a.cols {
            if r == a.rows {
                break;
            }
            let Some(p) = (r..a.rows).find(|&i| !a.get(i, c).is_zero()) else {
                continue;
            };
            a.swap_rows(r, p);
            let inv = f.inv(a.get(r, c)).expect("nonzero pivot");
            for j in c..a.cols {
                let x = a.get(r, j);
                a.set(r, j, f.mul(x, inv));
            }
            for i in 0..a.rows {
                if i == r {
                    continue;
                }
                let factor = a.get(i, c);
                if factor.is_zero() {
                    continue;
                }
                for j in c..a.cols {
                    let pr = a.get(r, j);
                    if !pr.is_zero() {
                        let x = a.get(i, j);
                        a.set(i, j, f.sub(x, f.mul(factor, pr)));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        a.data.truncate(r * a.cols);
        a.rows = r;
        Rref {
            reduced: a,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis (as rows) of the right kernel {x : M x = 0}.
    pub fn null_space(&self) -> Mat {
        let f = &self.field;
        let Rref { reduced, pivots, .. } = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Mat::zeros(f, free.len(), self.cols);
        for (b, &fc) in free.iter().enumerate() {
            basis.set(b, fc, FieldElement::ONE);
            for (r, &pc) in pivots.iter().enumerate() {
                basis.set(b, pc, f.neg(reduced.get(r, fc)));
            }
        }
        basis
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }
}

fn parse_token(field: &Field, token: &Value) -> Result<FieldElement> {
    match token {
        Value::String(s) => field.parse_element(s),
        Value::Number(n) => {
            let c = n
                .as_u64()
                .filter(|&c| c < field.q() as u64)
                .ok_or_else(|| Error::BadToken(n.to_string()))?;
            Ok(field.constant(c as u32))
        }
        Value::Object(map) => {
            let coeffs = map
                .get("coeffs")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::BadToken(token.to_string()))?;
            let coeffs = coeffs
                .iter()
                .map(|c| {
                    c.as_u64()
                        .map(|c| c as u32)
                        .ok_or_else(|| Error::BadToken(token.to_string()))
                })
                .collect::<Result<Vec<_>>>()?;
            field.element_from_coeffs(&coeffs)
        }
        _ => Err(Error::BadToken(token.to_string())),
    }
}

/// Parses one JSON element token ("w^5", 1, {"coeffs": [...]}).
pub fn parse_element_json(field: &Field, token: &Value) -> Result<FieldElement> {
    parse_token(field, token)
}

/// Rank over F_{q^m} of G·Yᵀ, where Y has entries in the prime field.
pub fn rank_product(g: &Mat, y: &Mat) -> Result<usize> {
    if g.cols() != y.cols() {
        return Err(Error::DimensionMismatch(format!(
            "G has {} columns, Y has {}",
            g.cols(),
            y.cols()
        )));
    }
    if y.rows() == 0 {
        return Ok(0);
    }
    let y = y.lift(g.field())?;
    Ok(g.mul(&y.transpose())?.rank())
}

/// Expands v ∈ F_{q^m}^n into the m×n matrix over F_q whose column j is the
/// coefficient vector of v_j.
pub fn psi_expand(v: &[FieldElement], field: &Field) -> Mat {
    let base = prime_field(field.q()).expect("field base is prime");
    let mut out = Mat::zeros(&base, field.m(), v.len());
    for (j, &x) in v.iter().enumerate() {
        for i in 0..field.m() {
            out.set(i, j, FieldElement::from_code(field.coeff(x, i)));
        }
    }
    out
}
