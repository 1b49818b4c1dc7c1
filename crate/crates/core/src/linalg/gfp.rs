use crate::error::{Error, Result};
use crate::gf::is_prime;
use crate::incidence::BinaryMatrix;

/// Dense matrix over the prime field `Z_p`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

/// Reduced row echelon form with its rank and pivot columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rref {
    pub matrix: GfpMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

/// Inverses mod `p`; index 0 unused.
pub(crate) fn inverse_table(p: u32) -> Vec<u8> {
    let mut inv = vec![0u8; p as usize];
    for a in 1..p {
        inv[a as usize] = (1..p).find(|b| a * b % p == 1).unwrap() as u8;
    }
    inv
}

impl GfpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Result<GfpMatrix> {
        if !is_prime(p) || p > 251 {
            return Err(Error::Params(format!("p = {p} is not a supported prime")));
        }
        Ok(GfpMatrix {
            p,
            rows,
            cols,
            data: vec![0; rows * cols],
        })
    }

    pub fn identity(p: u32, n: usize) -> Result<GfpMatrix> {
        let mut m = GfpMatrix::zeros(p, n, n)?;
        for i in 0..n {
            m.set(i, i, 1);
        }
        Ok(m)
    }

    /// Entries are reduced mod `p`.
    pub fn from_rows(p: u32, rows: &[Vec<u32>]) -> Result<GfpMatrix> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = GfpMatrix::zeros(p, rows.len(), cols)?;
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::LengthMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, (x % p) as u8);
            }
        }
        Ok(m)
    }

    pub fn from_binary(p: u32, b: &BinaryMatrix) -> Result<GfpMatrix> {
        let mut m = GfpMatrix::zeros(p, b.rows(), b.cols())?;
        for c in 0..b.cols() {
            for &r in b.column(c) {
                m.set(r as usize, c, 1);
            }
        }
        Ok(m)
    }

    /// The columns listed in `cols`, in that order.
    pub fn select_columns(&self, cols: &[usize]) -> GfpMatrix {
        let mut out = GfpMatrix {
            p: self.p,
            rows: self.rows,
            cols: cols.len(),
            data: vec![0; self.rows * cols.len()],
        };
        for i in 0..self.rows {
            for (j, &c) in cols.iter().enumerate() {
                out.data[i * cols.len() + j] = self.get(i, c);
            }
        }
        out
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u8 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u8) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[u8] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `M v` mod p.
    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.cols {
            return Err(Error::LengthMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        let p = self.p as u64;
        Ok((0..self.rows)
            .map(|i| {
                let s: u64 = self
                    .row(i)
                    .iter()
                    .zip(v)
                    .map(|(&a, &b)| a as u64 * (b as u64 % p))
                    .sum();
                (s % p) as u32
            })
            .collect())
    }

    /// Standard reduced row echelon form over `Z_p`.
    pub fn rref(&self) -> Rref {
        let p = self.p;
        let inv = inverse_table(p);
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(sel) = (r..rows).find(|&i| m.get(i, c) != 0) else {
                continue;
            };
            if sel != r {
                for j in 0..cols {
                    m.data.swap(sel * cols + j, r * cols + j);
                }
            }
            let s = inv[m.get(r, c) as usize] as u32;
            if s != 1 {
                for j in c..cols {
                    let x = m.get(r, j) as u32;
                    m.set(r, j, (x * s % p) as u8);
                }
            }
            let (before, rest) = m.data.split_at_mut(r * cols);
            let (pivot_row, after) = rest.split_at_mut(cols);
            for other in before.chunks_mut(cols).chain(after.chunks_mut(cols)) {
                let f = other[c] as u32;
                if f == 0 {
                    continue;
                }
                let neg = p - f;
                for j in c..cols {
                    other[j] = ((other[j] as u32 + neg * pivot_row[j] as u32) % p) as u8;
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: r,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Kernel basis from the free-variable construction: one vector per
    /// non-pivot column `f` (in increasing order), with a 1 at `f`.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { matrix, pivots, .. } = self.rref();
        let p = self.p;
        let mut is_pivot = vec![false; self.cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        (0..self.cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u32; self.cols];
                v[f] = 1;
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = (p - matrix.get(i, f) as u32) % p;
                }
                v
            })
            .collect()
    }
}
