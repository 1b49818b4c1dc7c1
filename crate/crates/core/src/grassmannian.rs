//! Subspaces of GF(q)^n in canonical reduced row echelon form.
//!
//! Enumeration order is fixed: first by pivot-column set (increasing tuples,
//! lexicographic), then by the free entries read row-major as a base-q
//! number, most significant first. The index maps in [`GrassmannIndex`]
//! follow the same order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, GfElement};

/// Number of `k`-dimensional subspaces of GF(q)^n. Zero when `k > n`.
pub fn gaussian_binomial(n: usize, k: usize, q: u64) -> u128 {
    if k > n {
        return 0;
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= q.pow((n - i) as u32) - 1;
        den *= q.pow((i + 1) as u32) - 1;
    }
    num / den
}

/// A subspace given by its canonical RREF basis.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    n: usize,
    pivots: Vec<usize>,
    /// `dim * n` entries, row-major.
    entries: Vec<GfElement>,
}

impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.n, self.dim(), &self.pivots, &self.entries).cmp(&(
            other.n,
            other.dim(),
            &other.pivots,
            &other.entries,
        ))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({}|{})", self.dim(), self.to_text())
    }
}

fn digit_char(code: u8) -> char {
    char::from_digit(code as u32, 36).expect("field codes are below 36")
}

/// Row-reduces `rows` (each of length `n`) in place into RREF and returns the pivots.
/// Zero rows are dropped.
pub(crate) fn rref_rows(field: &FieldSpec, n: usize, rows: &mut Vec<Vec<GfElement>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = field.inv(rows[r][col]).expect("pivot is nonzero");
        for x in rows[r].iter_mut() {
            *x = field.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i == r {
                continue;
            }
            let c = rows[i][col];
            if c.is_zero() {
                continue;
            }
            let pivot = rows[r].clone();
            for (x, &y) in rows[i][col..].iter_mut().zip(&pivot[col..]) {
                *x = field.sub(*x, field.mul(c, y));
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

impl Subspace {
    /// The zero subspace of GF(q)^n.
    pub fn zero(n: usize) -> Subspace {
        Subspace {
            n,
            pivots: Vec::new(),
            entries: Vec::new(),
        }
    }

    /// `span(e_1, .., e_m)`.
    pub fn standard(n: usize, m: usize) -> Subspace {
        assert!(m <= n);
        let mut entries = vec![GfElement::ZERO; m * n];
        for i in 0..m {
            entries[i * n + i] = GfElement::ONE;
        }
        Subspace {
            n,
            pivots: (0..m).collect(),
            entries,
        }
    }

    /// Canonical basis of the span of `rows`. Every row must have length `n`.
    pub fn canonicalize(field: &FieldSpec, n: usize, rows: &[Vec<GfElement>]) -> Result<Subspace> {
        let mut work = rows.to_vec();
        if let Some(bad) = work.iter().find(|r| r.len() != n) {
            return Err(Error::AmbientMismatch {
                left: n,
                right: bad.len(),
            });
        }
        let pivots = rref_rows(field, n, &mut work);
        Ok(Subspace {
            n,
            pivots,
            entries: work.concat(),
        })
    }

    pub fn ambient(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.pivots.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn row(&self, i: usize) -> &[GfElement] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[GfElement]> {
        self.entries.chunks(self.n.max(1)).take(self.dim())
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in the subspace.
    fn reduce(&self, field: &FieldSpec, v: &mut [GfElement]) {
        for (i, &pc) in self.pivots.iter().enumerate() {
            let c = v[pc];
            if c.is_zero() {
                continue;
            }
            for (x, &b) in v.iter_mut().zip(self.row(i)) {
                *x = field.sub(*x, field.mul(c, b));
            }
        }
    }

    pub fn contains_vector(&self, field: &FieldSpec, v: &[GfElement]) -> bool {
        let mut w = v.to_vec();
        self.reduce(field, &mut w);
        w.iter().all(|x| x.is_zero())
    }

    /// True iff `other` is a subspace of `self`.
    pub fn contains(&self, field: &FieldSpec, other: &Subspace) -> Result<bool> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(other.rows().all(|r| self.contains_vector(field, r)))
    }

    /// The sum `self + other`.
    pub fn join(&self, field: &FieldSpec, other: &Subspace) -> Result<Subspace> {
        if self.n != other.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: other.n,
            });
        }
        let rows: Vec<Vec<GfElement>> = self
            .rows()
            .chain(other.rows())
            .map(|r| r.to_vec())
            .collect();
        Subspace::canonicalize(field, self.n, &rows)
    }

    /// Image of `self` (a subspace of GF(q)^d) under the map sending the
    /// i-th unit vector to `basis[i]`, a row of length `m`. `basis` must have
    /// `d` independent rows.
    pub fn image_under(&self, field: &FieldSpec, basis: &[&[GfElement]], m: usize) -> Subspace {
        debug_assert_eq!(basis.len(), self.n);
        let rows: Vec<Vec<GfElement>> = self
            .rows()
            .map(|coeffs| {
                let mut out = vec![GfElement::ZERO; m];
                for (&c, b) in coeffs.iter().zip(basis) {
                    if c.is_zero() {
                        continue;
                    }
                    for (o, &x) in out.iter_mut().zip(b.iter()) {
                        *o = field.add(*o, field.mul(c, x));
                    }
                }
                out
            })
            .collect();
        Subspace::canonicalize(field, m, &rows).expect("rows have ambient length")
    }

    /// All `t`-dimensional subspaces of `self`, in enumeration order of GF(q)^dim
    /// pushed through the canonical basis (not sorted in the ambient order).
    pub fn subspaces<'a>(
        &'a self,
        field: &'a FieldSpec,
        t: usize,
    ) -> impl Iterator<Item = Subspace> + 'a {
        let basis: Vec<&[GfElement]> = self.rows().collect();
        enumerate(field, self.dim(), t).map(move |a| a.image_under(field, &basis, self.n))
    }

    /// Rows of element codes as base-36 digits joined by `;`.
    pub fn to_text(&self) -> String {
        self.rows()
            .map(|r| r.iter().map(|e| digit_char(e.0)).collect::<String>())
            .collect::<Vec<_>>()
            .join(";")
    }

    /// Parses [`Subspace::to_text`] output (any spanning set is accepted and canonicalized).
    pub fn parse(field: &FieldSpec, n: usize, text: &str) -> Result<Subspace> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(Subspace::zero(n));
        }
        let mut rows = Vec::new();
        for part in text.split(';') {
            let row = part
                .chars()
                .map(|c| {
                    c.to_digit(36)
                        .filter(|&d| d < field.q())
                        .map(|d| GfElement(d as u8))
                        .ok_or_else(|| Error::Parse {
                            line: 0,
                            msg: format!("bad digit {c:?} in {text:?}"),
                        })
                })
                .collect::<Result<Vec<_>>>()?;
            if row.len() != n {
                return Err(Error::Parse {
                    line: 0,
                    msg: format!("row {part:?} does not have length {n}"),
                });
            }
            rows.push(row);
        }
        Subspace::canonicalize(field, n, &rows)
    }
}

/// Advances `c` to the next increasing `k`-tuple below `n`.
fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    for i in (0..k).rev() {
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Positions `(row, col)` of the free entries for a pivot set, row-major.
fn free_positions(n: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, &pc) in pivots.iter().enumerate() {
        for col in pc + 1..n {
            if !pivots.contains(&col) {
                out.push((i, col));
            }
        }
    }
    out
}

fn build(n: usize, pivots: &[usize], free: &[(usize, usize)], digits: &[u8]) -> Subspace {
    let mut entries = vec![GfElement::ZERO; pivots.len() * n];
    for (i, &pc) in pivots.iter().enumerate() {
        entries[i * n + pc] = GfElement::ONE;
    }
    for (&(i, col), &d) in free.iter().zip(digits) {
        entries[i * n + col] = GfElement(d);
    }
    Subspace {
        n,
        pivots: pivots.to_vec(),
        entries,
    }
}

/// Streaming enumeration of all `k`-dimensional subspaces of GF(q)^n.
pub struct SubspaceIter {
    n: usize,
    q: u8,
    pivots: Option<Vec<usize>>,
    free: Vec<(usize, usize)>,
    digits: Vec<u8>,
}

impl SubspaceIter {
    fn new(n: usize, k: usize, q: u32) -> SubspaceIter {
        let pivots = (k <= n).then(|| (0..k).collect::<Vec<_>>());
        let free = pivots
            .as_deref()
            .map(|p| free_positions(n, p))
            .unwrap_or_default();
        let digits = vec![0; free.len()];
        SubspaceIter {
            n,
            q: q as u8,
            pivots,
            free,
            digits,
        }
    }
}

impl Iterator for SubspaceIter {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        let pivots = self.pivots.as_mut()?;
        let out = build(self.n, pivots, &self.free, &self.digits);
        // Increment the free digits as a base-q number, last digit least significant.
        let mut carried = true;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.q {
                carried = false;
                break;
            }
            *d = 0;
        }
        if carried {
            if next_combination(pivots, self.n) {
                self.free = free_positions(self.n, pivots);
                self.digits = vec![0; self.free.len()];
            } else {
                self.pivots = None;
            }
        }
        Some(out)
    }
}

/// All `k`-dimensional subspaces of GF(q)^n in the canonical order.
pub fn enumerate(field: &FieldSpec, n: usize, k: usize) -> SubspaceIter {
    SubspaceIter::new(n, k, field.q())
}

/// Pivot set, free positions and the ordinal of its first subspace.
type Block = (Vec<usize>, Vec<(usize, usize)>, u64);

/// Ordinal bijection between `J_q(n, k)` and `0..gaussian_binomial(n, k, q)`.
#[derive(Debug, Clone)]
pub struct GrassmannIndex {
    n: usize,
    k: usize,
    q: u64,
    blocks: Vec<Block>,
    len: u64,
}

impl GrassmannIndex {
    pub fn new(field: &FieldSpec, n: usize, k: usize) -> Result<GrassmannIndex> {
        if k > n {
            return Err(Error::Params(format!("k = {k} exceeds n = {n}")));
        }
        let q = field.q() as u64;
        let mut blocks = Vec::new();
        let mut pivots: Vec<usize> = (0..k).collect();
        let mut offset = 0u64;
        loop {
            let free = free_positions(n, &pivots);
            let size = q.pow(free.len() as u32);
            blocks.push((pivots.clone(), free, offset));
            offset += size;
            if !next_combination(&mut pivots, n) {
                break;
            }
        }
        Ok(GrassmannIndex {
            n,
            k,
            q,
            blocks,
            len: offset,
        })
    }

    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn index_of(&self, x: &Subspace) -> Result<u64> {
        if x.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: x.ambient(),
            });
        }
        if x.dim() != self.k {
            return Err(Error::Params(format!(
                "subspace has dimension {}, index is for {}",
                x.dim(),
                self.k
            )));
        }
        let b = self
            .blocks
            .binary_search_by(|(p, ..)| p.as_slice().cmp(x.pivots()))
            .expect("every pivot set has a block");
        let (_, free, offset) = &self.blocks[b];
        let value = free
            .iter()
            .fold(0u64, |acc, &(i, col)| acc * self.q + x.row(i)[col].0 as u64);
        Ok(offset + value)
    }

    pub fn from_index(&self, ordinal: u64) -> Result<Subspace> {
        if ordinal >= self.len {
            return Err(Error::OrdinalOutOfRange {
                ordinal,
                size: self.len,
            });
        }
        let b = self.blocks.partition_point(|(.., off)| *off <= ordinal) - 1;
        let (pivots, free, offset) = &self.blocks[b];
        let mut rest = ordinal - offset;
        let mut digits = vec![0u8; free.len()];
        for d in digits.iter_mut().rev() {
            *d = (rest % self.q) as u8;
            rest /= self.q;
        }
        Ok(build(self.n, pivots, free, &digits))
    }
}
