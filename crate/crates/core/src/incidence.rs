//! Subspace Wilson matrices: containment incidence between `J_q(n, t)` and `J_q(n, k)`.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::gf::{prime_power, FieldSpec};
use crate::grassmannian::{enumerate, GrassmannIndex, Subspace};

/// Sparse 0/1 matrix stored both by column and by row (sorted indices).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    by_col: Vec<Vec<u32>>,
    by_row: Vec<Vec<u32>>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> BinaryMatrix {
        BinaryMatrix {
            rows,
            cols,
            by_col: vec![Vec::new(); cols],
            by_row: vec![Vec::new(); rows],
        }
    }

    pub fn identity(n: usize) -> BinaryMatrix {
        BinaryMatrix::from_columns(n, (0..n as u32).map(|i| vec![i]).collect())
    }

    /// Builds from per-column row lists. Duplicates are collapsed.
    pub fn from_columns(rows: usize, mut by_col: Vec<Vec<u32>>) -> BinaryMatrix {
        let mut by_row = vec![Vec::new(); rows];
        for (c, col) in by_col.iter_mut().enumerate() {
            col.sort_unstable();
            col.dedup();
            for &r in col.iter() {
                by_row[r as usize].push(c as u32);
            }
        }
        BinaryMatrix {
            rows,
            cols: by_col.len(),
            by_col,
            by_row,
        }
    }

    pub fn from_dense(dense: &[Vec<u8>]) -> BinaryMatrix {
        let rows = dense.len();
        let cols = dense.first().map_or(0, |r| r.len());
        let by_col = (0..cols)
            .map(|c| {
                (0..rows)
                    .filter(|&r| dense[r][c] != 0)
                    .map(|r| r as u32)
                    .collect()
            })
            .collect();
        BinaryMatrix::from_columns(rows, by_col)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, c: usize) -> &[u32] {
        &self.by_col[c]
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.by_row[r]
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.by_col[c].binary_search(&(r as u32)).is_ok()
    }

    pub fn nnz(&self) -> usize {
        self.by_col.iter().map(Vec::len).sum()
    }

    /// Flips one entry.
    pub fn toggle(&mut self, r: usize, c: usize) {
        fn flip(v: &mut Vec<u32>, x: u32) {
            match v.binary_search(&x) {
                Ok(i) => {
                    v.remove(i);
                }
                Err(i) => v.insert(i, x),
            }
        }
        flip(&mut self.by_col[c], r as u32);
        flip(&mut self.by_row[r], c as u32);
    }

    pub fn to_dense(&self) -> Vec<Vec<u8>> {
        let mut out = vec![vec![0u8; self.cols]; self.rows];
        for (c, col) in self.by_col.iter().enumerate() {
            for &r in col {
                out[r as usize][c] = 1;
            }
        }
        out
    }

    pub fn transpose(&self) -> BinaryMatrix {
        BinaryMatrix {
            rows: self.cols,
            cols: self.rows,
            by_col: self.by_row.clone(),
            by_row: self.by_col.clone(),
        }
    }

    /// `M c` with entries reduced mod `modulus`.
    pub fn apply_mod(&self, c: &[u32], modulus: u32) -> Result<Vec<u32>> {
        if c.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: c.len(),
            });
        }
        let m = modulus as u64;
        Ok(self
            .by_row
            .iter()
            .map(|row| (row.iter().map(|&j| c[j as usize] as u64 % m).sum::<u64>() % m) as u32)
            .collect())
    }
}

/// Checks that `r` is a power of the characteristic with `p <= r <= q`.
pub fn validate_coefficient_modulus(field: &FieldSpec, r: u32) -> Result<()> {
    let ok = matches!(prime_power(r), Some((p, _)) if p == field.p()) && r <= field.q();
    if ok {
        Ok(())
    } else {
        Err(Error::BadCoefficientModulus {
            r,
            p: field.p(),
            q: field.q(),
        })
    }
}

/// The Wilson matrix `W_{q;t,k}` with its row and column index maps.
#[derive(Debug, Clone)]
pub struct IncidenceMatrix {
    field: FieldSpec,
    n: usize,
    t: usize,
    k: usize,
    matrix: BinaryMatrix,
    row_index: GrassmannIndex,
    col_index: GrassmannIndex,
}

impl IncidenceMatrix {
    /// Builds `W_{q;t,k}` over GF(q)^n: entry `(y, x)` is 1 iff `y ⊆ x`.
    pub fn wilson(field: &FieldSpec, n: usize, t: usize, k: usize) -> Result<IncidenceMatrix> {
        if !(t <= k && k <= n) {
            return Err(Error::Params(format!(
                "need 0 <= t <= k <= n, got t={t} k={k} n={n}"
            )));
        }
        let row_index = GrassmannIndex::new(field, n, t)?;
        let col_index = GrassmannIndex::new(field, n, k)?;
        let by_col: Vec<Vec<u32>> = enumerate(field, n, k)
            .map(|x| {
                x.subspaces(field, t)
                    .map(|y| row_index.index_of(&y).expect("t-subspace of x") as u32)
                    .collect()
            })
            .collect();
        let matrix = BinaryMatrix::from_columns(row_index.len() as usize, by_col);
        Ok(IncidenceMatrix {
            field: field.clone(),
            n,
            t,
            k,
            matrix,
            row_index,
            col_index,
        })
    }

    /// Wraps an arbitrary 0/1 matrix carrying Wilson parameters, e.g. one read from a file.
    /// Shapes must match; the entries are not checked.
    pub fn from_parts(
        field: &FieldSpec,
        n: usize,
        t: usize,
        k: usize,
        matrix: BinaryMatrix,
    ) -> Result<IncidenceMatrix> {
        if !(t <= k && k <= n) {
            return Err(Error::Params(format!(
                "need 0 <= t <= k <= n, got t={t} k={k} n={n}"
            )));
        }
        let row_index = GrassmannIndex::new(field, n, t)?;
        let col_index = GrassmannIndex::new(field, n, k)?;
        if row_index.len() as usize != matrix.rows() || col_index.len() as usize != matrix.cols() {
            return Err(Error::Params(format!(
                "matrix is {}x{}, expected {}x{}",
                matrix.rows(),
                matrix.cols(),
                row_index.len(),
                col_index.len()
            )));
        }
        Ok(IncidenceMatrix {
            field: field.clone(),
            n,
            t,
            k,
            matrix,
            row_index,
            col_index,
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn matrix(&self) -> &BinaryMatrix {
        &self.matrix
    }

    pub fn matrix_mut(&mut self) -> &mut BinaryMatrix {
        &mut self.matrix
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn row_index(&self) -> &GrassmannIndex {
        &self.row_index
    }

    pub fn col_index(&self) -> &GrassmannIndex {
        &self.col_index
    }

    pub fn row_subspace(&self, r: usize) -> Subspace {
        self.row_index.from_index(r as u64).expect("row in range")
    }

    pub fn col_subspace(&self, c: usize) -> Subspace {
        self.col_index
            .from_index(c as u64)
            .expect("column in range")
    }

    /// The values `C(>= y)` mod `r`, in row order, for a `k`-uniform design given
    /// as a coefficient vector over the columns.
    pub fn apply_check(&self, c: &[u32], r: u32) -> Result<Vec<u32>> {
        validate_coefficient_modulus(&self.field, r)?;
        self.matrix.apply_mod(c, r)
    }

    /// Coordinate export: header `q n t k rows cols`, then `row col` per nonzero, row-major.
    pub fn to_coordinate_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {} {} {}\n",
            self.field.q(),
            self.n,
            self.t,
            self.k,
            self.rows(),
            self.cols()
        );
        for r in 0..self.rows() {
            for &c in self.matrix.row(r) {
                writeln!(out, "{r} {c}").unwrap();
            }
        }
        out
    }

    pub fn parse_coordinate_text(text: &str) -> Result<IncidenceMatrix> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums = parse_numbers(header, hl + 1)?;
        let [q, n, t, k, rows, cols] = nums[..] else {
            return Err(Error::Parse {
                line: hl + 1,
                msg: "header must be `q n t k rows cols`".into(),
            });
        };
        let field = FieldSpec::new(q as u32)?;
        let mut by_col = vec![Vec::new(); cols as usize];
        for (i, line) in lines {
            let nums = parse_numbers(line, i + 1)?;
            let [r, c] = nums[..] else {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "expected `row col`".into(),
                });
            };
            if r >= rows || c >= cols {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: format!("entry ({r}, {c}) out of bounds"),
                });
            }
            by_col[c as usize].push(r as u32);
        }
        let matrix = BinaryMatrix::from_columns(rows as usize, by_col);
        IncidenceMatrix::from_parts(&field, n as usize, t as usize, k as usize, matrix)
    }
}

fn parse_numbers(line: &str, lineno: usize) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|w| {
            w.parse::<u64>().map_err(|e| Error::Parse {
                line: lineno,
                msg: format!("{w:?}: {e}"),
            })
        })
        .collect()
}
