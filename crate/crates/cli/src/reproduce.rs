//! The reproduction grid: every check the tool can replay, one row each.
//!
//! Rows are built lazily, filtered by `--only`, then run in parallel with the
//! results collected in declaration order, so output does not depend on the
//! thread count.

use std::fmt::Write as _;

use qnull::design::{
    construct_lb_design, construct_uniform_design, count_between, Chain, NullDesign,
};
use qnull::linalg::{
    default_budget, is_kernel_vector_gfp, is_kernel_vector_rational, min_support_kernel_rational,
    min_weight_kernel_gfp, rank_rational_binary, GfpMatrix, SearchMode, SearchReport,
};
use qnull::{enumerate, gaussian_binomial, FieldSpec, GfElement, IncidenceMatrix, Subspace};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub id: String,
    pub group: String,
    pub tags: Vec<String>,
    pub params: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

struct Outcome {
    expected: String,
    computed: String,
    pass: bool,
}

impl Outcome {
    fn eq<T: ToString + PartialEq>(expected: T, computed: T) -> Outcome {
        let pass = expected == computed;
        Outcome {
            expected: expected.to_string(),
            computed: computed.to_string(),
            pass,
        }
    }

    fn error(expected: impl ToString, e: impl std::fmt::Display) -> Outcome {
        Outcome {
            expected: expected.to_string(),
            computed: format!("error: {e}"),
            pass: false,
        }
    }
}

type Job = Box<dyn Fn() -> Outcome + Send + Sync>;

struct Check {
    id: String,
    group: &'static str,
    tags: Vec<String>,
    params: String,
    job: Job,
}

struct Grid {
    checks: Vec<Check>,
}

impl Grid {
    fn push(&mut self, group: &'static str, q: Option<u32>, id: String, params: String, job: Job) {
        let mut tags = vec![group.to_string()];
        if let Some(q) = q {
            tags.push(format!("q{q}"));
        }
        self.checks.push(Check {
            id: format!("{group}/{id}"),
            group,
            tags,
            params,
            job,
        });
    }
}

fn field(q: u32) -> FieldSpec {
    FieldSpec::new(q).expect("grid fields are supported")
}

fn wilson(q: u32, n: usize, t: usize, k: usize) -> IncidenceMatrix {
    IncidenceMatrix::wilson(&field(q), n, t, k).expect("grid parameters are valid")
}

fn describe(report: &SearchReport) -> String {
    match report.weight {
        Some(w) => format!("{w} exhaustive={}", report.exhaustive),
        None => format!("none<={} exhaustive={}", report.cap, report.exhaustive),
    }
}

pub fn run(only: &[String], extended: bool, inject_fault: bool) -> Vec<Row> {
    let mut grid = Grid { checks: Vec::new() };
    counts(&mut grid);
    between(&mut grid);
    lowerbound(&mut grid);
    uniform(&mut grid);
    binmin(&mut grid, inject_fault);
    gf2rank(&mut grid);
    realrank(&mut grid);
    realsupport(&mut grid, extended);
    ternary(&mut grid);
    oracle(&mut grid);

    let keep = |c: &Check| {
        only.is_empty()
            || only
                .iter()
                .any(|f| c.tags.iter().any(|t| t == f) || c.id.starts_with(f.as_str()))
    };
    let selected: Vec<Check> = grid.checks.into_iter().filter(keep).collect();
    selected
        .par_iter()
        .map(|c| {
            let o = (c.job)();
            Row {
                id: c.id.clone(),
                group: c.group.to_string(),
                tags: c.tags.clone(),
                params: c.params.clone(),
                expected: o.expected,
                computed: o.computed,
                pass: o.pass,
            }
        })
        .collect()
}

pub fn table(rows: &[Row]) -> String {
    let w_id = rows.iter().map(|r| r.id.len()).max().unwrap_or(2).max(2);
    let w_exp = rows
        .iter()
        .map(|r| r.expected.len())
        .max()
        .unwrap_or(8)
        .max(8);
    let w_cmp = rows
        .iter()
        .map(|r| r.computed.len())
        .max()
        .unwrap_or(8)
        .max(8);
    let mut out = String::new();
    writeln!(
        out,
        "{:<w_id$}  {:<w_exp$}  {:<w_cmp$}  result  params",
        "id", "expected", "computed"
    )
    .unwrap();
    for r in rows {
        let verdict = if r.pass { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{:<w_id$}  {:<w_exp$}  {:<w_cmp$}  {verdict:<6}  {}",
            r.id, r.expected, r.computed, r.params
        )
        .unwrap();
    }
    let failed = rows.iter().filter(|r| !r.pass).count();
    writeln!(
        out,
        "# {} checks, {} passed, {failed} failed",
        rows.len(),
        rows.len() - failed
    )
    .unwrap();
    out
}

const QS: [u32; 3] = [2, 3, 4];

fn counts(g: &mut Grid) {
    for q in QS {
        for n in 0..=5 {
            for k in 0..=n {
                let job: Job = Box::new(move || {
                    let f = field(q);
                    Outcome::eq(
                        gaussian_binomial(n, k, q as u64),
                        enumerate(&f, n, k).count() as u128,
                    )
                });
                g.push(
                    "counts",
                    Some(q),
                    format!("q{q}/n{n}/k{k}"),
                    format!("q={q} n={n} k={k}"),
                    job,
                );
            }
        }
    }
}

/// A uniformly random `d`-space, by rejection on random vectors.
fn random_subspace(f: &FieldSpec, n: usize, d: usize, rng: &mut StdRng) -> Subspace {
    let mut basis: Vec<Vec<GfElement>> = Vec::new();
    let mut span = Subspace::zero(n);
    while basis.len() < d {
        let v: Vec<GfElement> = (0..n)
            .map(|_| GfElement(rng.random_range(0..f.q()) as u8))
            .collect();
        if !span.contains_vector(f, &v) {
            basis.push(v);
            span = Subspace::canonicalize(f, n, &basis).expect("vectors have length n");
        }
    }
    span
}

fn between(g: &mut Grid) {
    for q in QS {
        let p = field(q).p();
        let moduli: Vec<u32> = if p == q { vec![p] } else { vec![p, q] };
        for n in 1..=4 {
            for t in 1..=n {
                for d in t..=n {
                    for pair in 0..3u64 {
                        let moduli = moduli.clone();
                        let job: Job = Box::new(move || {
                            let f = field(q);
                            let (lo, hi) = if pair == 0 {
                                (Subspace::standard(n, t - 1), Subspace::standard(n, d))
                            } else {
                                let mut rng = StdRng::seed_from_u64(
                                    (q as u64) << 32
                                        | (n as u64) << 24
                                        | (t as u64) << 16
                                        | (d as u64) << 8
                                        | pair,
                                );
                                let hi = random_subspace(&f, n, d, &mut rng);
                                let lows: Vec<Subspace> = hi.subspaces(&f, t - 1).collect();
                                let lo = lows[rng.random_range(0..lows.len())].clone();
                                (lo, hi)
                            };
                            let expected = (q as u64).pow((d - t + 1) as u32).saturating_sub(1)
                                / (q as u64 - 1);
                            let count = match count_between(&f, &lo, &hi, t) {
                                Ok(c) => c,
                                Err(e) => return Outcome::error(expected, e),
                            };
                            let residues: Vec<String> = moduli
                                .iter()
                                .map(|r| format!("{}", count % *r as u64))
                                .collect();
                            let pass =
                                count == expected && moduli.iter().all(|&r| count % r as u64 == 1);
                            Outcome {
                                expected: format!("{expected} (=1 mod {moduli:?})"),
                                computed: format!("{count} (residues {})", residues.join(",")),
                                pass,
                            }
                        });
                        let kind = if pair == 0 {
                            "std".to_string()
                        } else {
                            format!("rand{pair}")
                        };
                        g.push(
                            "between",
                            Some(q),
                            format!("q{q}/n{n}/t{t}/d{d}/{kind}"),
                            format!("q={q} n={n} t={t} d={d} pair={kind}"),
                            job,
                        );
                    }
                }
            }
        }
    }
}

fn lowerbound(g: &mut Grid) {
    for q in QS {
        let p = field(q).p();
        let moduli: Vec<u32> = if p == q { vec![p] } else { vec![p, q] };
        for n in 1..=5 {
            for t in 0..n {
                for &r in &moduli {
                    let job: Job = Box::new(move || {
                        let f = field(q);
                        let expected_size =
                            1 + ((q as usize).pow(t as u32 + 1) - 1) / (q as usize - 1);
                        let expected = format!("size {expected_size}, null at 0..={t}");
                        let d = match construct_lb_design(&f, n, t, r) {
                            Ok(d) => d,
                            Err(e) => return Outcome::error(expected, e),
                        };
                        let failing: Vec<usize> = (0..=t)
                            .filter(|&tau| {
                                !d.verify_strength(tau).map(|v| v.is_ok()).unwrap_or(false)
                            })
                            .collect();
                        let computed = if failing.is_empty() {
                            format!("size {}, null at 0..={t}", d.weight())
                        } else {
                            format!("size {}, fails at {failing:?}", d.weight())
                        };
                        Outcome {
                            pass: computed == expected,
                            expected,
                            computed,
                        }
                    });
                    g.push(
                        "lowerbound",
                        Some(q),
                        format!("q{q}/n{n}/t{t}/r{r}"),
                        format!("q={q} n={n} t={t} r={r}"),
                        job,
                    );
                }
            }
        }
    }
}

/// Designs from the standard chain and ten seeded random chains.
fn uniform_designs(f: &FieldSpec, n: usize, k: usize, t: usize) -> qnull::Result<Vec<NullDesign>> {
    let mut rng = StdRng::seed_from_u64(
        ((f.q() as u64) << 24) | ((n as u64) << 16) | ((k as u64) << 8) | t as u64,
    );
    let mut out = vec![construct_uniform_design(f, n, k, t, None)?];
    for _ in 0..10 {
        let chain = Chain::random(f, n, k, t, &mut rng)?;
        out.push(construct_uniform_design(f, n, k, t, Some(&chain))?);
    }
    Ok(out)
}

fn uniform(g: &mut Grid) {
    for q in QS {
        let p = field(q).p();
        let moduli: Vec<u32> = if p == q { vec![q] } else { vec![q, p] };
        for n in 2..=5 {
            for k in 1..n {
                for t in 0..k {
                    for &r in &moduli {
                        let job: Job = Box::new(move || {
                            let f = field(q);
                            let size = (q as usize).pow(t as u32 + 1);
                            let expected = format!("11/11 null, {k}-uniform, size {size}");
                            let designs = match uniform_designs(&f, n, k, t) {
                                Ok(d) => d,
                                Err(e) => return Outcome::error(expected, e),
                            };
                            let good = designs
                                .iter()
                                .filter(|d| {
                                    d.is_uniform(k)
                                        && d.weight() == size
                                        && d.with_modulus(r)
                                            .and_then(|d| d.verify_strength(t))
                                            .map(|v| v.is_ok())
                                            .unwrap_or(false)
                                })
                                .count();
                            let sizes: Vec<usize> =
                                designs.iter().map(NullDesign::weight).collect();
                            let computed = if good == designs.len() {
                                format!("{good}/{} null, {k}-uniform, size {size}", designs.len())
                            } else {
                                format!("{good}/{} good, sizes {sizes:?}", designs.len())
                            };
                            Outcome {
                                pass: computed == expected,
                                expected,
                                computed,
                            }
                        });
                        g.push(
                            "uniform",
                            Some(q),
                            format!("q{q}/n{n}/t{t}/k{k}/Z{r}"),
                            format!("q={q} n={n} t={t} k={k} over Z_{r}"),
                            job,
                        );
                    }
                }
            }
        }
    }
}

fn search_check(m: &GfpMatrix, cap: usize, mode: SearchMode, expected: String) -> Outcome {
    match min_weight_kernel_gfp(m, cap, mode, default_budget(m.p())) {
        Ok(rep) => {
            let certified = rep
                .witness
                .as_ref()
                .is_none_or(|w| is_kernel_vector_gfp(m, w));
            let computed = describe(&rep);
            Outcome {
                pass: certified && computed == expected,
                expected,
                computed,
            }
        }
        Err(e) => Outcome::error(expected, e),
    }
}

fn binmin(g: &mut Grid, inject_fault: bool) {
    let cases: [(usize, usize, usize); 6] = [
        (3, 1, 2),
        (4, 1, 2),
        (4, 1, 3),
        (5, 1, 3),
        (4, 2, 3),
        (5, 2, 3),
    ];
    for (n, t, k) in cases {
        let expected = 1usize << (t + 1);
        let corrupt = inject_fault && (n, t, k) == (4, 1, 2);
        let build = move || {
            let mut w = wilson(2, n, t, k);
            if corrupt {
                for r in w.matrix().column(0).to_vec() {
                    w.matrix_mut().toggle(r as usize, 0);
                }
            }
            GfpMatrix::from_binary(2, w.matrix()).expect("2 is prime")
        };
        let params = format!(
            "W_{{2;{t},{k}}} n={n} cap={expected}{}",
            if corrupt { " (fault injected)" } else { "" }
        );
        let job: Job = Box::new(move || {
            search_check(
                &build(),
                expected,
                SearchMode::SupportEnumeration,
                format!("{expected} exhaustive=true"),
            )
        });
        g.push(
            "binmin",
            Some(2),
            format!("support/n{n}/t{t}/k{k}"),
            params.clone(),
            job,
        );

        // Kernel enumeration only where the kernel fits the default budget.
        let m = build();
        let dim = m.cols() - m.rank();
        if dim < 64 && (1u64 << dim) <= default_budget(2) {
            let job: Job = Box::new(move || {
                search_check(
                    &build(),
                    expected,
                    SearchMode::KernelEnumeration,
                    format!("{expected} exhaustive=true"),
                )
            });
            g.push(
                "binmin",
                Some(2),
                format!("kernel/n{n}/t{t}/k{k}"),
                params,
                job,
            );
        }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn gf2_rank(n: usize, t: usize, k: usize) -> usize {
    GfpMatrix::from_binary(2, wilson(2, n, t, k).matrix())
        .expect("2 is prime")
        .rank()
}

fn gf2rank(g: &mut Grid) {
    // The closed form as usually quoted: sum_{i<=k} C(n, i).
    for (n, k, stated) in [(4usize, 2usize, 11usize), (5, 2, 16), (5, 3, 26)] {
        let job: Job = Box::new(move || Outcome::eq(stated, gf2_rank(n, 1, k)));
        g.push(
            "gf2rank",
            Some(2),
            format!("stated/n{n}/k{k}"),
            format!("W_{{2;1,{k}}} n={n}, sum_(i<=k) C(n,i)"),
            job,
        );
    }
    // The form that matches the punctured Reed-Muller dimension: sum_{i<=n-k} C(n, i).
    for n in 1..=5 {
        for k in 1..=n {
            let job: Job = Box::new(move || {
                let expected: usize = (0..=n - k).map(|i| binomial(n, i)).sum();
                Outcome::eq(expected, gf2_rank(n, 1, k))
            });
            g.push(
                "gf2rank",
                Some(2),
                format!("rm/n{n}/k{k}"),
                format!("W_{{2;1,{k}}} n={n}, sum_(i<=n-k) C(n,i)"),
                job,
            );
        }
    }
    // q = 3: recorded only.
    for n in 2..=4 {
        for k in 1..=n {
            let job: Job = Box::new(move || {
                let m = GfpMatrix::from_binary(3, wilson(3, n, 1, k).matrix()).expect("3 is prime");
                Outcome {
                    expected: "recorded".into(),
                    computed: m.rank().to_string(),
                    pass: true,
                }
            });
            g.push(
                "gf2rank",
                Some(3),
                format!("record/q3/n{n}/k{k}"),
                format!("GF(3) rank W_{{3;1,{k}}} n={n}"),
                job,
            );
        }
    }
}

fn realrank(g: &mut Grid) {
    for q in [2u32, 3] {
        for n in 1..=4 {
            for t in 0..=n {
                for k in t..=n {
                    let asserted = k + t <= n;
                    let job: Job = Box::new(move || {
                        let rank = rank_rational_binary(wilson(q, n, t, k).matrix());
                        if asserted {
                            Outcome::eq(gaussian_binomial(n, t, q as u64), rank as u128)
                        } else {
                            Outcome {
                                expected: "recorded".into(),
                                computed: rank.to_string(),
                                pass: true,
                            }
                        }
                    });
                    let kind = if asserted { "full" } else { "record" };
                    g.push(
                        "realrank",
                        Some(q),
                        format!("{kind}/q{q}/n{n}/t{t}/k{k}"),
                        format!("W_{{{q};{t},{k}}} n={n} over Q"),
                        job,
                    );
                }
            }
        }
    }
}

fn realsupport(g: &mut Grid, extended: bool) {
    let mut cases = vec![(2u32, 4usize, 6usize), (3, 3, 8)];
    if extended {
        cases.push((3, 4, 8));
    }
    for (q, n, cap) in cases {
        let job: Job = Box::new(move || {
            let w = wilson(q, n, 1, 2);
            let expected = format!("{cap} exhaustive=true");
            match min_support_kernel_rational(w.matrix(), cap) {
                Ok(rep) => {
                    let certified = rep
                        .witness
                        .as_ref()
                        .is_none_or(|x| is_kernel_vector_rational(w.matrix(), x));
                    let computed = describe(&rep);
                    Outcome {
                        pass: certified && computed == expected,
                        expected,
                        computed,
                    }
                }
                Err(e) => Outcome::error(expected, e),
            }
        });
        let slow = (q, n) == (3, 4);
        g.push(
            "realsupport",
            Some(q),
            format!("q{q}/n{n}/t1/k2"),
            format!(
                "W_{{{q};1,2}} n={n} cap={cap}{}",
                if slow { " (extended)" } else { "" }
            ),
            job,
        );
        if slow {
            g.checks
                .last_mut()
                .expect("just pushed")
                .tags
                .push("extended".into());
        }
    }
}

fn ternary(g: &mut Grid) {
    let job: Job = Box::new(|| {
        let m = GfpMatrix::from_binary(3, wilson(3, 3, 1, 2).matrix()).expect("3 is prime");
        let budget = default_budget(3);
        let run = |mode| min_weight_kernel_gfp(&m, 9, mode, budget);
        let expected = "in [5,9], exhaustive, modes agree".to_string();
        match (
            run(SearchMode::KernelEnumeration),
            run(SearchMode::SupportEnumeration),
        ) {
            (Ok(a), Ok(b)) => {
                let pass = a.weight == b.weight
                    && a.exhaustive
                    && b.exhaustive
                    && a.weight.is_some_and(|w| (5..=9).contains(&w));
                let computed = format!("kernel {}; support {}", describe(&a), describe(&b));
                Outcome {
                    expected,
                    computed,
                    pass,
                }
            }
            (Err(e), _) | (_, Err(e)) => Outcome::error(expected, e),
        }
    });
    g.push(
        "ternary",
        Some(3),
        "q3/n3/t1/k2".into(),
        "W_{3;1,2} n=3 over GF(3) cap=9".into(),
        job,
    );
}

/// A random vector with at most four nonzeros in `Z_r`.
fn sparse_vector(cols: usize, r: u32, rng: &mut StdRng) -> Vec<u32> {
    let mut c = vec![0u32; cols];
    for _ in 0..rng.random_range(1..=4) {
        c[rng.random_range(0..cols)] = rng.random_range(1..r);
    }
    c
}

fn oracle(g: &mut Grid) {
    for q in QS {
        let p = field(q).p();
        let moduli: Vec<u32> = if p == q { vec![p] } else { vec![p, q] };
        for n in 1..=4 {
            for t in 0..=n {
                for k in t.max(1)..=n {
                    for &r in &moduli {
                        let job: Job = Box::new(move || oracle_cell(q, n, t, k, r));
                        g.push(
                            "oracle",
                            Some(q),
                            format!("q{q}/n{n}/t{t}/k{k}/r{r}"),
                            format!("W_{{{q};{t},{k}}} n={n} Z_{r}, 100 vectors"),
                            job,
                        );
                    }
                }
            }
        }
    }
}

fn oracle_cell(q: u32, n: usize, t: usize, k: usize, r: u32) -> Outcome {
    let f = field(q);
    let w = wilson(q, n, t, k);
    let seed =
        ((q as u64) << 32) | ((n as u64) << 24) | ((t as u64) << 16) | ((k as u64) << 8) | r as u64;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut agree = 0;
    for _ in 0..100 {
        let c = sparse_vector(w.cols(), r, &mut rng);
        if oracle_agrees(&f, &w, &c, n, t, r).unwrap_or(false) {
            agree += 1;
        }
    }
    Outcome::eq("100/100".to_string(), format!("{agree}/100"))
}

fn oracle_agrees(
    f: &FieldSpec,
    w: &IncidenceMatrix,
    c: &[u32],
    n: usize,
    t: usize,
    r: u32,
) -> qnull::Result<bool> {
    let sums = w.apply_check(c, r)?;
    let mut d = NullDesign::new(f, n, r, t)?;
    for (i, &v) in c.iter().enumerate() {
        if v != 0 {
            d.set(w.col_subspace(i), v as u64)?;
        }
    }
    for (i, &s) in sums.iter().enumerate() {
        if d.sum_over_superspaces(&w.row_subspace(i))? != s {
            return Ok(false);
        }
    }
    // Naive strength check straight off J(t).
    let mut naive = Vec::new();
    for y in enumerate(f, n, t) {
        let mut s = 0u64;
        for (x, &v) in d.support() {
            if x.contains(f, &y)? {
                s += v as u64;
            }
        }
        if !s.is_multiple_of(r as u64) {
            naive.push(y);
        }
    }
    let verdict = d.verify_strength(t)?;
    let fast: Vec<Subspace> = verdict
        .violations
        .iter()
        .map(|(_, y, _)| y.clone())
        .collect();
    Ok(fast == naive)
}
