//! Null designs over `J_q(>= t)` with coefficients in `Z_r`.
//!
//! A design assigns a residue mod `r` to finitely many subspaces. It has
//! strength `t` when, for every `t`-dimensional `y`, the coefficients of all
//! support elements containing `y` sum to zero mod `r`.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf::{FieldSpec, GfElement};
use crate::grassmannian::{GrassmannIndex, Subspace};
use crate::incidence::validate_coefficient_modulus;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NullDesign {
    field: FieldSpec,
    n: usize,
    r: u32,
    t_claimed: usize,
    support: BTreeMap<Subspace, u32>,
}

/// Outcome of a strength check: every `t`-space whose superspace sum is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Verdict {
    pub t: usize,
    /// `(ordinal in J(t), subspace, C(>= y))`, sorted by ordinal.
    pub violations: Vec<(u64, Subspace, u32)>,
}

impl Verdict {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl NullDesign {
    /// An empty (void) design.
    pub fn new(field: &FieldSpec, n: usize, r: u32, t_claimed: usize) -> Result<NullDesign> {
        validate_coefficient_modulus(field, r)?;
        if t_claimed > n {
            return Err(Error::Params(format!("t = {t_claimed} exceeds n = {n}")));
        }
        Ok(NullDesign {
            field: field.clone(),
            n,
            r,
            t_claimed,
            support: BTreeMap::new(),
        })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn t_claimed(&self) -> usize {
        self.t_claimed
    }

    pub fn support(&self) -> &BTreeMap<Subspace, u32> {
        &self.support
    }

    pub fn weight(&self) -> usize {
        self.support.len()
    }

    pub fn is_void(&self) -> bool {
        self.support.is_empty()
    }

    pub fn coefficient(&self, x: &Subspace) -> u32 {
        self.support.get(x).copied().unwrap_or(0)
    }

    /// The common dimension of the support, if there is one. The void design is not uniform.
    pub fn uniform_dim(&self) -> Option<usize> {
        let mut dims = self.support.keys().map(Subspace::dim);
        let first = dims.next()?;
        dims.all(|d| d == first).then_some(first)
    }

    pub fn is_uniform(&self, k: usize) -> bool {
        self.uniform_dim() == Some(k)
    }

    pub fn min_dim(&self) -> Option<usize> {
        self.support.keys().map(Subspace::dim).min()
    }

    /// Sets `C(x) = value mod r`; a zero value removes `x` from the support.
    pub fn set(&mut self, x: Subspace, value: u64) -> Result<()> {
        if x.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: x.ambient(),
            });
        }
        if x.dim() < self.t_claimed {
            return Err(Error::SupportBelowStrength {
                dim: x.dim(),
                t: self.t_claimed,
            });
        }
        let v = (value % self.r as u64) as u32;
        if v == 0 {
            self.support.remove(&x);
        } else {
            self.support.insert(x, v);
        }
        Ok(())
    }

    /// The same coefficients read in `Z_r'`. Intended for 0/1-valued designs,
    /// which stay meaningful for every `r'` dividing `q`.
    pub fn with_modulus(&self, r: u32) -> Result<NullDesign> {
        let mut out = NullDesign::new(&self.field, self.n, r, self.t_claimed)?;
        for (x, &c) in &self.support {
            out.set(x.clone(), c as u64)?;
        }
        Ok(out)
    }

    pub fn with_claimed_strength(mut self, t: usize) -> Result<NullDesign> {
        if let Some(d) = self.min_dim().filter(|&d| d < t) {
            return Err(Error::SupportBelowStrength { dim: d, t });
        }
        self.t_claimed = t;
        Ok(self)
    }

    /// `C(>= y)` mod r, summed directly over the support.
    pub fn sum_over_superspaces(&self, y: &Subspace) -> Result<u32> {
        if y.ambient() != self.n {
            return Err(Error::AmbientMismatch {
                left: self.n,
                right: y.ambient(),
            });
        }
        let mut acc = 0u64;
        for (x, &c) in &self.support {
            if x.contains(&self.field, y)? {
                acc += c as u64;
            }
        }
        Ok((acc % self.r as u64) as u32)
    }

    /// Dense vector of `C(>= y)` mod r over `J(t)` in enumeration order, built by
    /// pushing each support element onto its own `t`-subspaces.
    fn superspace_sums(&self, t: usize) -> Result<(GrassmannIndex, Vec<u32>)> {
        if t > self.n {
            return Err(Error::Params(format!("t = {t} exceeds n = {}", self.n)));
        }
        if let Some(d) = self.min_dim().filter(|&d| d < t) {
            return Err(Error::SupportBelowStrength { dim: d, t });
        }
        let index = GrassmannIndex::new(&self.field, self.n, t)?;
        let r = self.r as u64;
        let entries: Vec<(&Subspace, u32)> = self.support.iter().map(|(x, &c)| (x, c)).collect();
        let sums = entries
            .par_iter()
            .fold(
                || vec![0u64; index.len() as usize],
                |mut acc, &(x, c)| {
                    for y in x.subspaces(&self.field, t) {
                        let i = index.index_of(&y).expect("t-subspace") as usize;
                        acc[i] += c as u64;
                    }
                    acc
                },
            )
            .reduce(
                || vec![0u64; index.len() as usize],
                |mut a, b| {
                    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                    a
                },
            );
        Ok((index, sums.into_iter().map(|s| (s % r) as u32).collect()))
    }

    /// Checks `C(>= y) = 0` for every `t`-dimensional `y`, listing all violations.
    pub fn verify_strength(&self, t: usize) -> Result<Verdict> {
        let (index, sums) = self.superspace_sums(t)?;
        let violations = sums
            .iter()
            .enumerate()
            .filter(|(_, &s)| s != 0)
            .map(|(i, &s)| (i as u64, index.from_index(i as u64).unwrap(), s))
            .collect();
        Ok(Verdict { t, violations })
    }

    /// `Some(λ)` when `C(>= z) = λ` for every `t`-dimensional `z`.
    pub fn check_constant_sum(&self, t: usize) -> Result<Option<u32>> {
        let (_, sums) = self.superspace_sums(t)?;
        let first = sums.first().copied();
        Ok(first.filter(|&l| sums.iter().all(|&s| s == l)))
    }

    /// Largest `t <= t_max` at which the design is null. Strengths above the
    /// smallest support dimension are out of the design's domain and count as
    /// failures. `None` when even strength 0 fails.
    pub fn strength_of(&self, t_max: usize) -> Option<usize> {
        let top = t_max.min(self.n).min(self.min_dim().unwrap_or(usize::MAX));
        if self.is_void() {
            return Some(t_max);
        }
        // Null strengths are downward closed, so stop at the first failure.
        let mut best = None;
        for t in 0..=top {
            match self.verify_strength(t) {
                Ok(v) if v.is_ok() => best = Some(t),
                _ => break,
            }
        }
        best
    }

    /// Coefficient vector over `J(k)` in enumeration order. Fails unless the
    /// design is void or `k`-uniform.
    pub fn to_vector(&self, k: usize) -> Result<Vec<u32>> {
        let index = GrassmannIndex::new(&self.field, self.n, k)?;
        let mut out = vec![0u32; index.len() as usize];
        for (x, &c) in &self.support {
            if x.dim() != k {
                return Err(Error::Params(format!(
                    "design has a {}-dimensional element, not {k}-uniform",
                    x.dim()
                )));
            }
            out[index.index_of(x)? as usize] = c;
        }
        Ok(out)
    }

    /// Design file text: header `q n r t_claimed`, then `dim|subspace|coeff` per
    /// support element in enumeration order.
    pub fn to_design_text(&self) -> String {
        let mut out = format!(
            "{} {} {} {}\n",
            self.field.q(),
            self.n,
            self.r,
            self.t_claimed
        );
        for (x, c) in &self.support {
            writeln!(out, "{}|{}|{}", x.dim(), x.to_text(), c).unwrap();
        }
        out
    }

    pub fn parse_design_text(text: &str) -> Result<NullDesign> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let nums: Vec<u64> = header
            .split_whitespace()
            .map(|w| {
                w.parse().map_err(|_| Error::Parse {
                    line: hl + 1,
                    msg: format!("bad number {w:?}"),
                })
            })
            .collect::<Result<_>>()?;
        let [q, n, r, t] = nums[..] else {
            return Err(Error::Parse {
                line: hl + 1,
                msg: "header must be `q n r t_claimed`".into(),
            });
        };
        let field = FieldSpec::new(q as u32)?;
        let mut design = NullDesign::new(&field, n as usize, r as u32, t as usize)?;
        for (i, line) in lines {
            let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
            let parts: Vec<&str> = line.trim().split('|').collect();
            let [dim, text, coeff] = parts[..] else {
                return Err(parse_err("expected `dim|subspace|coeff`".into()));
            };
            let dim: usize = dim
                .parse()
                .map_err(|_| parse_err(format!("bad dimension {dim:?}")))?;
            let coeff: u64 = coeff
                .parse()
                .map_err(|_| parse_err(format!("bad coefficient {coeff:?}")))?;
            let x =
                Subspace::parse(&field, n as usize, text).map_err(|e| parse_err(e.to_string()))?;
            if x.dim() != dim {
                return Err(parse_err(format!(
                    "subspace has dimension {}, record says {dim}",
                    x.dim()
                )));
            }
            if coeff == 0 || coeff >= r {
                return Err(parse_err(format!("coefficient {coeff} not in [1, {})", r)));
            }
            if design.support.contains_key(&x) {
                return Err(parse_err(format!("duplicate subspace {text:?}")));
            }
            design.set(x, coeff).map_err(|e| parse_err(e.to_string()))?;
        }
        Ok(design)
    }
}

/// Lower-bound design: `C(v) = 1` on `v = span(e_1..e_{t+1})` and `C(u) = r - 1` on
/// every `t`-dimensional `u ⊂ v`. Null of strength `t`, with
/// `1 + (q^{t+1} - 1)/(q - 1)` nonzeros, not uniform.
pub fn construct_lb_design(field: &FieldSpec, n: usize, t: usize, r: u32) -> Result<NullDesign> {
    if t >= n {
        return Err(Error::Params(format!("need t < n, got t={t} n={n}")));
    }
    let mut design = NullDesign::new(field, n, r, t)?;
    let v = Subspace::standard(n, t + 1);
    for u in v.subspaces(field, t) {
        design.set(u, r as u64 - 1)?;
    }
    design.set(v, 1)?;
    Ok(design)
}

/// A flag `u ⊂ v ⊂ w` with dims `k - t - 1`, `k - t`, `k + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chain {
    pub u: Subspace,
    pub v: Subspace,
    pub w: Subspace,
}

impl Chain {
    /// `u = span(e_1..e_{k-t-1})`, `v = span(e_1..e_{k-t})`, `w = span(e_1..e_{k+1})`.
    pub fn standard(n: usize, k: usize, t: usize) -> Result<Chain> {
        check_uniform_params(n, k, t)?;
        Ok(Chain {
            u: Subspace::standard(n, k - t - 1),
            v: Subspace::standard(n, k - t),
            w: Subspace::standard(n, k + 1),
        })
    }

    /// A uniformly random ordered basis of a random `(k+1)`-space, cut into the flag.
    pub fn random<R: Rng + ?Sized>(
        field: &FieldSpec,
        n: usize,
        k: usize,
        t: usize,
        rng: &mut R,
    ) -> Result<Chain> {
        check_uniform_params(n, k, t)?;
        let q = field.q();
        let mut basis: Vec<Vec<GfElement>> = Vec::with_capacity(k + 1);
        let mut span = Subspace::zero(n);
        while basis.len() < k + 1 {
            let v: Vec<GfElement> = (0..n)
                .map(|_| GfElement(rng.random_range(0..q) as u8))
                .collect();
            if span.contains_vector(field, &v) {
                continue;
            }
            basis.push(v);
            span = Subspace::canonicalize(field, n, &basis)?;
        }
        let span_of = |m: usize| Subspace::canonicalize(field, n, &basis[..m]);
        Ok(Chain {
            u: span_of(k - t - 1)?,
            v: span_of(k - t)?,
            w: span,
        })
    }

    pub fn validate(&self, field: &FieldSpec, n: usize, k: usize, t: usize) -> Result<()> {
        check_uniform_params(n, k, t)?;
        let dims = (self.u.dim(), self.v.dim(), self.w.dim());
        if dims != (k - t - 1, k - t, k + 1) {
            return Err(Error::InvalidChain(format!(
                "dimensions {dims:?}, expected ({}, {}, {})",
                k - t - 1,
                k - t,
                k + 1
            )));
        }
        if [&self.u, &self.v, &self.w].iter().any(|s| s.ambient() != n) {
            return Err(Error::InvalidChain(format!(
                "ambient dimension must be {n}"
            )));
        }
        if !self.v.contains(field, &self.u)? || !self.w.contains(field, &self.v)? {
            return Err(Error::InvalidChain("not nested".into()));
        }
        Ok(())
    }
}

fn check_uniform_params(n: usize, k: usize, t: usize) -> Result<()> {
    if t < k && k < n {
        Ok(())
    } else {
        Err(Error::Params(format!(
            "need 0 <= t < k < n, got t={t} k={k} n={n}"
        )))
    }
}

/// `k`-uniform design over `Z_q`: the indicator of the `k`-spaces `x` with
/// `u ⊂ x ⊂ w` and `v ⊄ x`. Null of strength `t`, with `q^{t+1}` nonzeros.
pub fn construct_uniform_design(
    field: &FieldSpec,
    n: usize,
    k: usize,
    t: usize,
    chain: Option<&Chain>,
) -> Result<NullDesign> {
    let chain = match chain {
        Some(c) => {
            c.validate(field, n, k, t)?;
            c.clone()
        }
        None => Chain::standard(n, k, t)?,
    };
    let mut design = NullDesign::new(field, n, field.q(), t)?;
    // The k-spaces inside w are its hyperplanes.
    for x in chain.w.subspaces(field, k) {
        if x.contains(field, &chain.u)? && !x.contains(field, &chain.v)? {
            design.set(x, 1)?;
        }
    }
    Ok(design)
}

/// Counts `{x in J(dim): lo ⊆ x ⊆ hi}` by enumerating the `dim`-subspaces of `hi`.
pub fn count_between(field: &FieldSpec, lo: &Subspace, hi: &Subspace, dim: usize) -> Result<u64> {
    let mut count = 0;
    for x in hi.subspaces(field, dim) {
        if x.contains(field, lo)? {
            count += 1;
        }
    }
    Ok(count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grassmannian::{enumerate, gaussian_binomial};
    use crate::incidence::IncidenceMatrix;

    fn gf(q: u32) -> FieldSpec {
        FieldSpec::new(q).unwrap()
    }

    #[test]
    fn void_design_is_null_everywhere() {
        let f = gf(3);
        let d = NullDesign::new(&f, 3, 3, 0).unwrap();
        for t in 0..=3 {
            assert!(d.verify_strength(t).unwrap().is_ok());
            assert_eq!(d.check_constant_sum(t).unwrap(), Some(0));
        }
        assert_eq!(d.strength_of(2), Some(2));
        assert_eq!(d.sum_over_superspaces(&Subspace::zero(3)).unwrap(), 0);
    }

    #[test]
    fn single_nonzero_violates() {
        let f = gf(2);
        let mut d = NullDesign::new(&f, 3, 2, 1).unwrap();
        let x = Subspace::standard(3, 2);
        d.set(x.clone(), 1).unwrap();
        let y = Subspace::standard(3, 1);
        assert_eq!(d.sum_over_superspaces(&y).unwrap(), 1);
        let v = d.verify_strength(1).unwrap();
        assert_eq!(v.violations.len(), 3);
        assert!(v
            .violations
            .iter()
            .all(|(_, y, s)| *s == 1 && x.contains(&f, y).unwrap()));
        assert_eq!(d.strength_of(2), None);
    }

    #[test]
    fn strength_below_support_dim_is_an_error() {
        let f = gf(2);
        let d = construct_lb_design(&f, 3, 1, 2).unwrap();
        assert!(matches!(
            d.verify_strength(2),
            Err(Error::SupportBelowStrength { dim: 1, t: 2 })
        ));
        let mut e = NullDesign::new(&f, 3, 2, 2).unwrap();
        assert!(e.set(Subspace::standard(3, 1), 1).is_err());
        assert!(e.set(Subspace::standard(4, 2), 1).is_err());
    }

    #[test]
    fn lb_design_sizes() {
        for (q, t, size) in [(2, 1, 4), (3, 0, 2), (2, 2, 8)] {
            let f = gf(q);
            let d = construct_lb_design(&f, 4, t, f.p()).unwrap();
            assert_eq!(d.weight(), size);
            assert!(d.verify_strength(t).unwrap().is_ok());
            assert_eq!(d.uniform_dim(), None);
        }
        let d = construct_lb_design(&gf(3), 2, 0, 3).unwrap();
        assert_eq!(d.coefficient(&Subspace::zero(2)), 2);
        assert!(construct_lb_design(&gf(2), 3, 3, 2).is_err());
    }

    #[test]
    fn uniform_design_sizes() {
        for (q, n, k, t, size) in [(2, 3, 2, 1, 4), (2, 2, 1, 0, 2), (3, 3, 2, 1, 9)] {
            let f = gf(q);
            let d = construct_uniform_design(&f, n, k, t, None).unwrap();
            assert_eq!(d.weight(), size);
            assert!(d.is_uniform(k));
            assert_eq!(d.r(), q);
            assert!(d.verify_strength(t).unwrap().is_ok());
            assert!(d.strength_of(k).unwrap() >= t);
        }
        // |U| and |V| for q = 3, k = 2, t = 1
        let f = gf(3);
        let c = Chain::standard(3, 2, 1).unwrap();
        assert_eq!(count_between(&f, &c.u, &c.w, 2).unwrap(), 13);
        assert_eq!(count_between(&f, &c.v, &c.w, 2).unwrap(), 4);
    }

    #[test]
    fn uniform_design_rejects_bad_input() {
        let f = gf(2);
        assert!(construct_uniform_design(&f, 3, 3, 1, None).is_err());
        assert!(construct_uniform_design(&f, 4, 2, 2, None).is_err());
        let mut c = Chain::standard(4, 2, 0).unwrap();
        std::mem::swap(&mut c.u, &mut c.v);
        assert!(matches!(
            construct_uniform_design(&f, 4, 2, 0, Some(&c)),
            Err(Error::InvalidChain(_))
        ));
        let c = Chain {
            u: Subspace::parse(&f, 4, "0001").unwrap(),
            v: Subspace::standard(4, 2),
            w: Subspace::standard(4, 3),
        };
        assert!(matches!(
            construct_uniform_design(&f, 4, 2, 0, Some(&c)),
            Err(Error::InvalidChain(_))
        ));
    }

    #[test]
    fn constant_sum_of_all_ones() {
        let f = gf(2);
        let mut d = NullDesign::new(&f, 4, 2, 0).unwrap();
        for x in enumerate(&f, 4, 2) {
            d.set(x, 1).unwrap();
        }
        assert_eq!(
            d.check_constant_sum(1).unwrap(),
            Some((gaussian_binomial(3, 1, 2) % 2) as u32)
        );
        assert_eq!(d.check_constant_sum(0).unwrap(), Some(1));
        let mut e = NullDesign::new(&f, 3, 2, 0).unwrap();
        e.set(Subspace::standard(3, 2), 1).unwrap();
        assert_eq!(e.check_constant_sum(1).unwrap(), None);
    }

    #[test]
    fn total_sum_nonzero_means_no_strength() {
        let f = gf(3);
        let mut d = NullDesign::new(&f, 3, 3, 0).unwrap();
        d.set(Subspace::standard(3, 1), 1).unwrap();
        d.set(Subspace::standard(3, 2), 1).unwrap();
        assert_eq!(d.strength_of(1), None);
    }

    #[test]
    fn verification_routes_agree_with_wilson_matrix() {
        let f = gf(3);
        let d = construct_uniform_design(&f, 3, 2, 1, None).unwrap();
        let w = IncidenceMatrix::wilson(&f, 3, 1, 2).unwrap();
        let c = d.to_vector(2).unwrap();
        assert_eq!(w.apply_check(&c, 3).unwrap(), vec![0; 13]);
        assert!(d.verify_strength(1).unwrap().is_ok());
        assert!(construct_lb_design(&f, 3, 1, 3)
            .unwrap()
            .to_vector(2)
            .is_err());
    }

    #[test]
    fn design_text_round_trip_and_errors() {
        let f = gf(4);
        let d = construct_lb_design(&f, 3, 1, 4).unwrap();
        let text = d.to_design_text();
        assert!(text.starts_with("4 3 4 1\n1|100|3\n"));
        assert_eq!(NullDesign::parse_design_text(&text).unwrap(), d);

        assert!(NullDesign::parse_design_text("").is_err());
        assert!(NullDesign::parse_design_text("2 3 2\n").is_err());
        assert!(NullDesign::parse_design_text("2 3 2 1\n2|100|1\n").is_err());
        assert!(NullDesign::parse_design_text("2 3 2 1\n1|100|0\n").is_err());
        assert!(NullDesign::parse_design_text("2 3 2 1\n1|100|1\n1|100|1\n").is_err());
        assert!(NullDesign::parse_design_text("2 3 2 1\n0||1\n").is_err());
        assert!(NullDesign::parse_design_text("2 3 3 1\n").is_err());
        let z = NullDesign::parse_design_text("3 2 3 0\n0||2\n").unwrap();
        assert_eq!(z.coefficient(&Subspace::zero(2)), 2);
    }

    #[test]
    fn random_chain_is_valid() {
        use rand::SeedableRng;
        let f = gf(4);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..5 {
            let c = Chain::random(&f, 4, 2, 1, &mut rng).unwrap();
            c.validate(&f, 4, 2, 1).unwrap();
        }
    }
}
