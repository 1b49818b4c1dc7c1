//! Exhaustive minimum-weight and minimum-support search in matrix kernels.
//!
//! Two exhaustive strategies are provided for GF(p):
//!
//! * kernel enumeration walks every vector of the kernel, so its cost is
//!   `p^(kernel dim)` and it is guarded by a budget;
//! * support enumeration walks column subsets in order of size, and within a
//!   size lexicographically, stopping at the first linearly dependent one.
//!
//! Support enumeration skips a subset whenever some row meets it in exactly one
//! nonzero entry: such a column is forced to a zero coefficient, so the subset
//! cannot be the support of a kernel vector. Every proper prefix of a
//! minimal dependent set is independent, so a dependent prefix is also cut.
//! Neither rule discards a candidate that could be a minimum support.
//!
//! Witness tie-break: the lexicographically least support, then the least
//! coefficient vector. Both strategies produce the same witness.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rayon::prelude::*;

use super::gfp::{inverse_table, GfpMatrix};
use super::rational::{kernel_basis_rational, rank_rational};
use crate::error::{Error, Result};
use crate::incidence::BinaryMatrix;

/// Default kernel-enumeration budget for p = 2, in kernel vectors.
pub const DEFAULT_BUDGET: u64 = 1 << 22;

/// Default budget scaled down by `log2 p`, since wider digits cost more per vector.
pub fn default_budget(p: u32) -> u64 {
    (DEFAULT_BUDGET as f64 / (p as f64).log2()).floor() as u64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SearchMode {
    KernelEnumeration,
    SupportEnumeration,
    Randomized { iterations: u32, seed: u64 },
}

impl SearchMode {
    pub fn name(&self) -> &'static str {
        match self {
            SearchMode::KernelEnumeration => "kernel-enumeration",
            SearchMode::SupportEnumeration => "support-enumeration",
            SearchMode::Randomized { .. } => "randomized",
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A kernel vector given by its support (increasing) and the values there.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub support: Vec<usize>,
    pub values: Vec<BigInt>,
}

impl Witness {
    fn from_dense_gfp(v: &[u32]) -> Witness {
        let (support, values) = v
            .iter()
            .enumerate()
            .filter(|(_, &x)| x != 0)
            .map(|(i, &x)| (i, BigInt::from(x)))
            .unzip();
        Witness { support, values }
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn to_dense_gfp(&self, cols: usize) -> Vec<u32> {
        let mut v = vec![0u32; cols];
        for (&i, x) in self.support.iter().zip(&self.values) {
            v[i] = u32::try_from(x).expect("GF(p) coefficient");
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchReport {
    /// `None` when nothing of weight `<= cap` was found.
    pub weight: Option<usize>,
    pub witness: Option<Witness>,
    pub mode: SearchMode,
    /// Every weight below `weight` (or up to `cap` when nothing was found) was ruled out.
    pub exhaustive: bool,
    pub cap: usize,
}

impl SearchReport {
    fn new(
        witness: Option<Witness>,
        mode: SearchMode,
        exhaustive: bool,
        cap: usize,
    ) -> SearchReport {
        SearchReport {
            weight: witness.as_ref().map(Witness::weight),
            witness,
            mode,
            exhaustive,
            cap,
        }
    }
}

/// `M w == 0` over GF(p), checked densely and independently of any search state.
pub fn is_kernel_vector_gfp(m: &GfpMatrix, w: &Witness) -> bool {
    let v = w.to_dense_gfp(m.cols());
    m.mul_vec(&v)
        .map(|r| r.iter().all(|&x| x == 0))
        .unwrap_or(false)
}

/// `M w == 0` over the integers.
pub fn is_kernel_vector_rational(m: &BinaryMatrix, w: &Witness) -> bool {
    let mut acc = vec![BigInt::zero(); m.rows()];
    for (&c, x) in w.support.iter().zip(&w.values) {
        for &r in m.column(c) {
            acc[r as usize] += x;
        }
    }
    acc.iter().all(Zero::is_zero)
}

fn certified_gfp(m: &GfpMatrix, w: Option<Witness>, cap: usize) -> Option<Witness> {
    let w = w.filter(|w| w.weight() <= cap)?;
    assert!(
        is_kernel_vector_gfp(m, &w),
        "search produced a vector outside the kernel: {w:?}"
    );
    Some(w)
}

fn compare_candidates(a: &Witness, b: &Witness) -> Ordering {
    (a.weight(), &a.support, &a.values).cmp(&(b.weight(), &b.support, &b.values))
}

/// Minimum Hamming weight of a nonzero vector in `{x : M x = 0}` over GF(p).
pub fn min_weight_kernel_gfp(
    m: &GfpMatrix,
    cap: usize,
    mode: SearchMode,
    budget: u64,
) -> Result<SearchReport> {
    if cap == 0 {
        return Err(Error::Params("cap must be at least 1".into()));
    }
    let (witness, exhaustive) = match mode {
        SearchMode::KernelEnumeration => (kernel_enumeration(m, budget)?, true),
        SearchMode::SupportEnumeration => (support_enumeration_gfp(m, cap), true),
        SearchMode::Randomized { iterations, seed } => {
            (randomized_information_sets(m, iterations, seed), false)
        }
    };
    Ok(SearchReport::new(
        certified_gfp(m, witness, cap),
        mode,
        exhaustive,
        cap,
    ))
}

// ---------------------------------------------------------------------------
// Kernel enumeration

fn kernel_enumeration(m: &GfpMatrix, budget: u64) -> Result<Option<Witness>> {
    let basis = m.kernel_basis();
    let d = basis.len() as u32;
    let p = m.p() as u64;
    let total = (p as u128).checked_pow(d);
    match total {
        Some(t) if t <= budget as u128 => {}
        _ => {
            return Err(Error::BudgetExceeded {
                needed: format!("{p}^{d}"),
                budget,
            });
        }
    }
    if d == 0 {
        return Ok(None);
    }
    if p == 2 {
        Ok(kernel_enumeration_binary(&basis, m.cols()))
    } else {
        Ok(kernel_enumeration_prime(&basis, m.p()))
    }
}

/// Splits the top `split` basis coefficients into independent chunks.
fn chunk_count(p: u64, d: u32) -> (u32, u64) {
    let split = d.min(if p == 2 { 8 } else { 4 }).min(d.saturating_sub(2));
    (split, p.pow(split))
}

fn kernel_enumeration_binary(basis: &[Vec<u32>], cols: usize) -> Option<Witness> {
    let words = cols.div_ceil(64);
    let packed: Vec<Vec<u64>> = basis
        .iter()
        .map(|v| {
            let mut w = vec![0u64; words];
            for (i, &x) in v.iter().enumerate() {
                if x != 0 {
                    w[i / 64] |= 1 << (i % 64);
                }
            }
            w
        })
        .collect();
    let d = basis.len() as u32;
    let (split, chunks) = chunk_count(2, d);
    let low = d - split;
    // Chunk `c` fixes the top `split` coefficients to the bits of `c`, then walks
    // the low coefficients in Gray-code order.
    let best = (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let mut cur = vec![0u64; words];
            for j in 0..split {
                if c >> j & 1 == 1 {
                    xor_into(&mut cur, &packed[(low + j) as usize]);
                }
            }
            let mut best: Option<(u32, Vec<u64>)> = None;
            let mut consider = |v: &[u64]| {
                let wt: u32 = v.iter().map(|x| x.count_ones()).sum();
                if wt == 0 {
                    return;
                }
                let better = match &best {
                    None => true,
                    Some((bw, bv)) => wt < *bw || (wt == *bw && support_less(v, bv)),
                };
                if better {
                    best = Some((wt, v.to_vec()));
                }
            };
            consider(&cur);
            for step in 1u64..(1u64 << low) {
                let bit = step.trailing_zeros() as usize;
                xor_into(&mut cur, &packed[bit]);
                consider(&cur);
            }
            best
        })
        .min_by(|(aw, av), (bw, bv)| {
            aw.cmp(bw).then_with(|| {
                if support_less(av, bv) {
                    Ordering::Less
                } else if av == bv {
                    Ordering::Equal
                } else {
                    Ordering::Greater
                }
            })
        })?;
    let support: Vec<usize> = (0..cols)
        .filter(|&i| best.1[i / 64] >> (i % 64) & 1 == 1)
        .collect();
    let values = vec![BigInt::one(); support.len()];
    Some(Witness { support, values })
}

fn xor_into(a: &mut [u64], b: &[u64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x ^= y);
}

/// For equal-size sets: `a` precedes `b` lexicographically iff the smallest
/// element of the symmetric difference lies in `a`.
fn support_less(a: &[u64], b: &[u64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        let diff = x ^ y;
        if diff != 0 {
            return x >> diff.trailing_zeros() & 1 == 1;
        }
    }
    false
}

fn kernel_enumeration_prime(basis: &[Vec<u32>], p: u32) -> Option<Witness> {
    let cols = basis[0].len();
    let d = basis.len() as u32;
    let (split, chunks) = chunk_count(p as u64, d);
    let low = (d - split) as usize;
    let add = |cur: &mut [u32], b: &[u32], times: u32| {
        for (x, &y) in cur.iter_mut().zip(b) {
            *x = (*x + times * y) % p;
        }
    };
    (0..chunks)
        .into_par_iter()
        .filter_map(|c| {
            let mut cur = vec![0u32; cols];
            let mut rest = c;
            for j in 0..split as usize {
                add(&mut cur, &basis[low + j], (rest % p as u64) as u32);
                rest /= p as u64;
            }
            let mut digits = vec![0u32; low];
            let mut best: Option<Witness> = None;
            loop {
                if cur.iter().any(|&x| x != 0) {
                    let cand = Witness::from_dense_gfp(&cur);
                    if best
                        .as_ref()
                        .is_none_or(|b| compare_candidates(&cand, b) == Ordering::Less)
                    {
                        best = Some(cand);
                    }
                }
                // Odometer step: every touched digit adds its basis vector once,
                // a wrap from p-1 to 0 included since p * b = 0.
                let mut i = 0;
                loop {
                    if i == low {
                        return best;
                    }
                    add(&mut cur, &basis[i], 1);
                    digits[i] += 1;
                    if digits[i] < p {
                        break;
                    }
                    digits[i] = 0;
                    i += 1;
                }
            }
        })
        .min_by(compare_candidates)
}

// ---------------------------------------------------------------------------
// Support enumeration

/// Incremental linear-independence test for a growing list of columns.
trait ColumnBasis: Sync {
    type State: Send;
    fn empty(&self) -> Self::State;
    /// Adds column `c`; false when it depends on the columns already added.
    fn push(&self, st: &mut Self::State, c: usize) -> bool;
    fn pop(&self, st: &mut Self::State);
    /// Exact confirmation that `support` is linearly dependent, with a kernel
    /// vector supported on it.
    fn witness(&self, support: &[usize]) -> Option<Witness>;
    /// Whether a dependency reported by `push` is exact.
    fn exact_dependence(&self) -> bool;
}

/// GF(2) columns packed into words, kept in echelon form by lowest set bit.
struct BinaryBasis<'a> {
    m: &'a GfpMatrix,
    cols: Vec<Vec<u64>>,
}

impl<'a> BinaryBasis<'a> {
    fn new(m: &'a GfpMatrix, sparse: &SparseColumns) -> Self {
        let words = m.rows().div_ceil(64).max(1);
        let cols = sparse
            .cols
            .iter()
            .map(|rows| {
                let mut w = vec![0u64; words];
                for &r in rows {
                    w[r as usize / 64] |= 1 << (r % 64);
                }
                w
            })
            .collect();
        BinaryBasis { m, cols }
    }
}

impl ColumnBasis for BinaryBasis<'_> {
    type State = Vec<Option<(usize, Vec<u64>)>>;

    fn empty(&self) -> Self::State {
        Vec::new()
    }

    fn push(&self, st: &mut Self::State, c: usize) -> bool {
        let mut v = self.cols[c].clone();
        for (piv, b) in st.iter().flatten() {
            if v[piv / 64] >> (piv % 64) & 1 == 1 {
                xor_into(&mut v, b);
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(wi) => {
                let piv = wi * 64 + v[wi].trailing_zeros() as usize;
                st.push(Some((piv, v)));
                true
            }
            None => {
                st.push(None);
                false
            }
        }
    }

    fn pop(&self, st: &mut Self::State) {
        st.pop();
    }

    fn witness(&self, support: &[usize]) -> Option<Witness> {
        gfp_witness(self.m, support)
    }

    fn exact_dependence(&self) -> bool {
        true
    }
}

/// Columns over `Z_modulus` (a prime), echelon form with monic pivots.
struct PrimeBasis<'a> {
    modulus: u64,
    rows: usize,
    sparse: &'a SparseColumns,
    exact: Exactness<'a>,
}

enum Exactness<'a> {
    /// The modulus is the field itself.
    Field(&'a GfpMatrix),
    /// The modulus is a filter for rational dependence.
    Rational(&'a BinaryMatrix),
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1u64;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl ColumnBasis for PrimeBasis<'_> {
    type State = Vec<Option<(usize, Vec<u64>)>>;

    fn empty(&self) -> Self::State {
        Vec::new()
    }

    fn push(&self, st: &mut Self::State, c: usize) -> bool {
        let m = self.modulus;
        let mut v = vec![0u64; self.rows];
        for (&r, &x) in self.sparse.cols[c].iter().zip(&self.sparse.vals[c]) {
            v[r as usize] = x as u64 % m;
        }
        for (piv, b) in st.iter().flatten() {
            let f = v[*piv];
            if f != 0 {
                let neg = m - f;
                for (x, &y) in v.iter_mut().zip(b) {
                    if y != 0 {
                        *x = (*x + neg * y) % m;
                    }
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(piv) => {
                let inv = pow_mod(v[piv], m - 2, m);
                v.iter_mut().for_each(|x| *x = *x * inv % m);
                st.push(Some((piv, v)));
                true
            }
            None => {
                st.push(None);
                false
            }
        }
    }

    fn pop(&self, st: &mut Self::State) {
        st.pop();
    }

    fn witness(&self, support: &[usize]) -> Option<Witness> {
        match self.exact {
            Exactness::Field(m) => gfp_witness(m, support),
            Exactness::Rational(b) => rational_witness(b, support),
        }
    }

    fn exact_dependence(&self) -> bool {
        matches!(self.exact, Exactness::Field(_))
    }
}

/// Kernel vector of the columns `support` over GF(p), scaled so its first entry is 1.
fn gfp_witness(m: &GfpMatrix, support: &[usize]) -> Option<Witness> {
    let sub = m.select_columns(support);
    let v = sub.kernel_basis().into_iter().next()?;
    if v.contains(&0) {
        return None;
    }
    let p = m.p();
    let s = inverse_table(p)[v[0] as usize] as u32;
    let values = v.iter().map(|&x| BigInt::from(x * s % p)).collect();
    Some(Witness {
        support: support.to_vec(),
        values,
    })
}

fn rational_witness(b: &BinaryMatrix, support: &[usize]) -> Option<Witness> {
    let rows: Vec<Vec<i64>> = (0..b.rows())
        .map(|r| support.iter().map(|&c| b.get(r, c) as i64).collect())
        .collect();
    if rank_rational(&rows) == support.len() {
        return None;
    }
    let v = kernel_basis_rational(&rows, support.len())
        .into_iter()
        .next()?;
    if v.iter().any(Zero::is_zero) {
        return None;
    }
    Some(Witness {
        support: support.to_vec(),
        values: v,
    })
}

/// Nonzero pattern of a matrix by column, plus for each row its last nonzero column.
struct SparseColumns {
    cols: Vec<Vec<u32>>,
    vals: Vec<Vec<u32>>,
    last_in_row: Vec<usize>,
    max_col_len: usize,
}

impl SparseColumns {
    fn from_gfp(m: &GfpMatrix) -> SparseColumns {
        let mut cols = vec![Vec::new(); m.cols()];
        let mut vals = vec![Vec::new(); m.cols()];
        for r in 0..m.rows() {
            for (c, &x) in m.row(r).iter().enumerate() {
                if x != 0 {
                    cols[c].push(r as u32);
                    vals[c].push(x as u32);
                }
            }
        }
        SparseColumns::finish(m.rows(), cols, vals)
    }

    fn from_binary(b: &BinaryMatrix) -> SparseColumns {
        let cols: Vec<Vec<u32>> = (0..b.cols()).map(|c| b.column(c).to_vec()).collect();
        let vals = cols.iter().map(|c| vec![1; c.len()]).collect();
        SparseColumns::finish(b.rows(), cols, vals)
    }

    fn finish(rows: usize, cols: Vec<Vec<u32>>, vals: Vec<Vec<u32>>) -> SparseColumns {
        let mut last_in_row = vec![0usize; rows];
        for (c, col) in cols.iter().enumerate() {
            for &r in col {
                last_in_row[r as usize] = c;
            }
        }
        let max_col_len = cols.iter().map(Vec::len).max().unwrap_or(0);
        SparseColumns {
            cols,
            vals,
            last_in_row,
            max_col_len,
        }
    }
}

struct Dfs<'a, B: ColumnBasis> {
    sparse: &'a SparseColumns,
    basis: &'a B,
    size: usize,
}

struct DfsState<S> {
    chosen: Vec<usize>,
    touched: Vec<u8>,
    /// Number of rows met exactly once.
    singles: usize,
    basis: S,
}

impl<B: ColumnBasis> Dfs<'_, B> {
    fn add(&self, st: &mut DfsState<B::State>, c: usize) {
        for &r in &self.sparse.cols[c] {
            let t = &mut st.touched[r as usize];
            *t += 1;
            match *t {
                1 => st.singles += 1,
                2 => st.singles -= 1,
                _ => {}
            }
        }
        st.chosen.push(c);
    }

    fn remove(&self, st: &mut DfsState<B::State>) {
        let c = st.chosen.pop().unwrap();
        for &r in &self.sparse.cols[c] {
            let t = &mut st.touched[r as usize];
            *t -= 1;
            match *t {
                0 => st.singles -= 1,
                1 => st.singles += 1,
                _ => {}
            }
        }
    }

    /// False if some row met once can no longer be met again, or there are
    /// too many such rows for the remaining columns to cover.
    fn feasible(&self, st: &DfsState<B::State>) -> bool {
        let left = self.size - st.chosen.len();
        if st.singles > left * self.sparse.max_col_len {
            return false;
        }
        let last = *st.chosen.last().unwrap();
        st.chosen.iter().all(|&c| {
            self.sparse.cols[c]
                .iter()
                .all(|&r| st.touched[r as usize] != 1 || self.sparse.last_in_row[r as usize] > last)
        })
    }

    /// First subset (lexicographically) of size `self.size` extending `st`
    /// that is the support of a kernel vector.
    fn search(&self, st: &mut DfsState<B::State>) -> Option<Witness> {
        let start = st.chosen.last().map_or(0, |&c| c + 1);
        let ncols = self.sparse.cols.len();
        let left = self.size - st.chosen.len();
        for c in start..=ncols.saturating_sub(left) {
            if c >= ncols {
                break;
            }
            self.add(st, c);
            let independent = self.basis.push(&mut st.basis, c);
            let found = if st.chosen.len() == self.size {
                if !independent && st.singles == 0 {
                    self.basis.witness(&st.chosen)
                } else {
                    None
                }
            } else if !independent && self.basis.exact_dependence() {
                // Holds a smaller dependent set, which an earlier size would have found.
                None
            } else if self.feasible(st) {
                self.search(st)
            } else {
                None
            };
            self.basis.pop(&mut st.basis);
            self.remove(st);
            if found.is_some() {
                return found;
            }
        }
        None
    }
}

/// Smallest dependent column set of size `<= cap`, in size-then-lex order.
fn support_scan<B: ColumnBasis>(
    sparse: &SparseColumns,
    basis: &B,
    rows: usize,
    cap: usize,
) -> Option<Witness> {
    let ncols = sparse.cols.len();
    for size in 1..=cap.min(ncols) {
        let dfs = Dfs {
            sparse,
            basis,
            size,
        };
        let hit = (0..ncols).into_par_iter().find_map_first(|c0| {
            let mut st = DfsState {
                chosen: Vec::with_capacity(size),
                touched: vec![0; rows],
                singles: 0,
                basis: basis.empty(),
            };
            dfs.add(&mut st, c0);
            let independent = basis.push(&mut st.basis, c0);
            if size == 1 {
                return if !independent && st.singles == 0 {
                    basis.witness(&st.chosen)
                } else {
                    None
                };
            }
            if !independent && basis.exact_dependence() {
                return None;
            }
            if !dfs.feasible(&st) {
                return None;
            }
            dfs.search(&mut st)
        });
        if hit.is_some() {
            return hit;
        }
    }
    None
}

fn support_enumeration_gfp(m: &GfpMatrix, cap: usize) -> Option<Witness> {
    let sparse = SparseColumns::from_gfp(m);
    if m.p() == 2 {
        let basis = BinaryBasis::new(m, &sparse);
        support_scan(&sparse, &basis, m.rows(), cap)
    } else {
        let basis = PrimeBasis {
            modulus: m.p() as u64,
            rows: m.rows(),
            sparse: &sparse,
            exact: Exactness::Field(m),
        };
        support_scan(&sparse, &basis, m.rows(), cap)
    }
}

/// Smallest set of columns that is linearly dependent over Q, with an integer
/// kernel vector supported exactly on it.
pub fn min_support_kernel_rational(m: &BinaryMatrix, cap: usize) -> Result<SearchReport> {
    if cap == 0 {
        return Err(Error::Params("cap must be at least 1".into()));
    }
    // Dependence over Q implies dependence mod any prime, so a large prime
    // screens candidates; hits are confirmed exactly.
    let sparse = SparseColumns::from_binary(m);
    let basis = PrimeBasis {
        modulus: 2_147_483_647,
        rows: m.rows(),
        sparse: &sparse,
        exact: Exactness::Rational(m),
    };
    let witness = support_scan(&sparse, &basis, m.rows(), cap);
    if let Some(w) = &witness {
        assert!(
            is_kernel_vector_rational(m, w),
            "search produced a vector outside the kernel: {w:?}"
        );
    }
    Ok(SearchReport::new(
        witness,
        SearchMode::SupportEnumeration,
        true,
        cap,
    ))
}

// ---------------------------------------------------------------------------
// Randomized information sets

/// Upper bound from the free-variable kernel bases of random column orders.
fn randomized_information_sets(m: &GfpMatrix, iterations: u32, seed: u64) -> Option<Witness> {
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    let cols = m.cols();
    let perms: Vec<Vec<usize>> = (0..iterations.max(1))
        .map(|_| {
            let mut perm: Vec<usize> = (0..cols).collect();
            perm.shuffle(&mut rng);
            perm
        })
        .collect();
    perms
        .par_iter()
        .filter_map(|perm| {
            let permuted = m.select_columns(perm);
            permuted
                .kernel_basis()
                .into_iter()
                .map(|v| {
                    let mut dense = vec![0u32; cols];
                    for (j, &x) in v.iter().enumerate() {
                        dense[perm[j]] = x;
                    }
                    normalize_gfp(&mut dense, m.p());
                    Witness::from_dense_gfp(&dense)
                })
                .min_by(compare_candidates)
        })
        .min_by(compare_candidates)
}

fn normalize_gfp(v: &mut [u32], p: u32) {
    if let Some(&first) = v.iter().find(|&&x| x != 0) {
        let s = inverse_table(p)[first as usize] as u32;
        v.iter_mut().for_each(|x| *x = *x * s % p);
    }
}
