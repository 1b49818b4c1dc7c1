use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use qnull::design::{construct_lb_design, construct_uniform_design, Chain, NullDesign};
use qnull::linalg::{
    default_budget, min_support_kernel_rational, min_weight_kernel_gfp, rank_rational_binary,
    GfpMatrix, SearchMode, SearchReport,
};
use qnull::{enumerate, gaussian_binomial, FieldSpec, IncidenceMatrix};
use rand::SeedableRng;
use serde_json::json;

use crate::{reproduce, Cli, Command, DesignKind, Mode, Outcome, Over};

type CmdResult = Result<Outcome, String>;

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), String> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| format!("{}: {e}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn field(q: u32) -> Result<FieldSpec, String> {
    FieldSpec::new(q).map_err(|e| e.to_string())
}

fn field_header(f: &FieldSpec) -> String {
    format!(
        "# GF({}) p={} s={} modulus {}",
        f.q(),
        f.p(),
        f.s(),
        f.modulus_string()
    )
}

fn print_json(v: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(v).expect("json values serialize")
    );
}

pub fn run(cli: &Cli) -> CmdResult {
    let json = cli.json;
    match &cli.command {
        Command::Enumerate { q, n, k } => cmd_enumerate(*q, *n, *k, json),
        Command::Wilson { q, n, t, k, out } => cmd_wilson(*q, *n, *t, *k, out.as_deref(), json),
        Command::Construct {
            kind,
            q,
            n,
            t,
            k,
            r,
            chain_seed,
            out,
        } => cmd_construct(*kind, *q, *n, *t, *k, *r, *chain_seed, out.as_deref(), json),
        Command::Verify { design, t, r } => cmd_verify(design, *t, *r, json),
        Command::Strength { design, t_max, r } => cmd_strength(design, *t_max, *r, json),
        Command::Rank { matrix, over, p } => cmd_rank(matrix, *over, *p, json),
        Command::Minweight {
            matrix,
            p,
            cap,
            mode,
            seed,
            iterations,
        } => cmd_minweight(matrix, *p, *cap, *mode, *seed, *iterations, json),
        Command::Minsupport { matrix, cap } => cmd_minsupport(matrix, *cap, json),
        Command::Reproduce {
            only,
            extended,
            inject_fault,
        } => {
            let rows = reproduce::run(only, *extended, *inject_fault);
            let pass = rows.iter().all(|r| r.pass);
            if json {
                print_json(&json!({ "rows": rows, "all_pass": pass }));
            } else {
                print!("{}", reproduce::table(&rows));
            }
            Ok(if pass {
                Outcome::Ok
            } else {
                Outcome::CheckFailed
            })
        }
    }
}

fn cmd_enumerate(q: u32, n: usize, k: usize, json: bool) -> CmdResult {
    let f = field(q)?;
    if k > n {
        return Err(format!("need 0 <= k <= n, got k={k} n={n}"));
    }
    let expected = gaussian_binomial(n, k, q as u64);
    let subspaces: Vec<String> = enumerate(&f, n, k).map(|s| s.to_text()).collect();
    let count = subspaces.len() as u128;
    if json {
        print_json(&json!({
            "q": q, "n": n, "k": k, "modulus": f.modulus_string(),
            "subspaces": subspaces, "count": count as u64, "gaussian_binomial": expected as u64,
        }));
    } else {
        println!("{}", field_header(&f));
        for (i, s) in subspaces.iter().enumerate() {
            println!("{i}\t{s}");
        }
        println!("# count {count} gaussian_binomial {expected}");
    }
    Ok(if count == expected {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

fn cmd_wilson(q: u32, n: usize, t: usize, k: usize, out: Option<&Path>, json: bool) -> CmdResult {
    let f = field(q)?;
    let w = IncidenceMatrix::wilson(&f, n, t, k).map_err(|e| e.to_string())?;
    let text = w.to_coordinate_text();
    if json {
        if let Some(p) = out {
            fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        print_json(&json!({
            "q": q, "n": n, "t": t, "k": k, "rows": w.rows(), "cols": w.cols(),
            "nonzeros": w.matrix().nnz(), "matrix": if out.is_none() { Some(text) } else { None },
        }));
    } else {
        write_or_print(out, &text)?;
        if out.is_some() {
            println!("{}", field_header(&f));
            println!(
                "W_{{{q};{t},{k}}} n={n}: {} x {}, {} nonzeros",
                w.rows(),
                w.cols(),
                w.matrix().nnz()
            );
        }
    }
    Ok(Outcome::Ok)
}

#[allow(clippy::too_many_arguments)]
fn cmd_construct(
    kind: DesignKind,
    q: u32,
    n: usize,
    t: usize,
    k: Option<usize>,
    r: Option<u32>,
    chain_seed: Option<u64>,
    out: Option<&Path>,
    json: bool,
) -> CmdResult {
    let f = field(q)?;
    let design = match kind {
        DesignKind::Lb => {
            if k.is_some() || chain_seed.is_some() {
                return Err("--k and --chain-seed apply to uniform designs only".into());
            }
            construct_lb_design(&f, n, t, r.unwrap_or(f.p()))
        }
        DesignKind::Uniform => {
            let k = k.ok_or("uniform designs need --k")?;
            if r.is_some() {
                return Err(
                    "uniform designs are over Z_q; verify with --r to read them mod a divisor"
                        .into(),
                );
            }
            let chain = match chain_seed {
                Some(seed) => {
                    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
                    Some(Chain::random(&f, n, k, t, &mut rng).map_err(|e| e.to_string())?)
                }
                None => None,
            };
            construct_uniform_design(&f, n, k, t, chain.as_ref())
        }
    }
    .map_err(|e| e.to_string())?;
    let text = design.to_design_text();
    if json {
        if let Some(p) = out {
            fs::write(p, &text).map_err(|e| format!("{}: {e}", p.display()))?;
        }
        print_json(&json!({
            "kind": format!("{kind:?}").to_lowercase(), "q": q, "n": n, "t": t, "r": design.r(),
            "weight": design.weight(), "uniform_dim": design.uniform_dim(),
            "design": if out.is_none() { Some(text) } else { None },
        }));
    } else {
        write_or_print(out, &text)?;
        if out.is_some() {
            println!("{}", field_header(&f));
            let uniform = design
                .uniform_dim()
                .map_or("-".to_string(), |k| k.to_string());
            println!(
                "weight {} r {} uniform {uniform}",
                design.weight(),
                design.r()
            );
        }
    }
    Ok(Outcome::Ok)
}

/// Reads a design file and re-reads its coefficients mod `r` (default p).
fn load_design(path: &Path, r: Option<u32>) -> Result<NullDesign, String> {
    let d = NullDesign::parse_design_text(&read(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    let r = r.unwrap_or(d.field().p());
    let zero_one = d.support().values().all(|&c| c == 1);
    if d.r() % r != 0 && !zero_one {
        return Err(format!(
            "cannot read Z_{} coefficients mod {r}: {r} does not divide {}",
            d.r(),
            d.r()
        ));
    }
    d.with_modulus(r).map_err(|e| e.to_string())
}

fn cmd_verify(path: &Path, t: usize, r: Option<u32>, json: bool) -> CmdResult {
    let d = load_design(path, r)?;
    let verdict = d.verify_strength(t).map_err(|e| e.to_string())?;
    if json {
        let violations: Vec<_> = verdict
            .violations
            .iter()
            .map(|(i, y, s)| json!({ "ordinal": i, "subspace": y.to_text(), "sum": s }))
            .collect();
        print_json(&json!({
            "t": t, "r": d.r(), "weight": d.weight(), "ok": verdict.is_ok(), "violations": violations,
        }));
    } else {
        println!("{}", field_header(d.field()));
        println!(
            "design weight {} over Z_{}, strength {t}",
            d.weight(),
            d.r()
        );
        if verdict.is_ok() {
            println!("ok");
        } else {
            println!("{} violations", verdict.violations.len());
            println!("ordinal\tsubspace\tC(>=y)");
            for (i, y, s) in &verdict.violations {
                println!("{i}\t{}\t{s}", y.to_text());
            }
        }
    }
    Ok(if verdict.is_ok() {
        Outcome::Ok
    } else {
        Outcome::CheckFailed
    })
}

fn cmd_strength(path: &Path, t_max: Option<usize>, r: Option<u32>, json: bool) -> CmdResult {
    let d = load_design(path, r)?;
    let t_max = t_max.unwrap_or(d.n());
    let s = d.strength_of(t_max);
    if json {
        print_json(&json!({ "t_max": t_max, "r": d.r(), "weight": d.weight(), "strength": s }));
    } else {
        println!("{}", field_header(d.field()));
        match s {
            Some(s) => println!("strength {s} (searched up to {t_max}, over Z_{})", d.r()),
            None => println!("strength none (fails at 0, over Z_{})", d.r()),
        }
    }
    Ok(Outcome::Ok)
}

fn load_matrix(path: &Path) -> Result<IncidenceMatrix, String> {
    IncidenceMatrix::parse_coordinate_text(&read(path)?)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn cmd_rank(path: &Path, over: Over, p: Option<u32>, json: bool) -> CmdResult {
    let w = load_matrix(path)?;
    let (rank, ring) = match over {
        Over::Gf => {
            let p = p.unwrap_or(w.field().p());
            let m = GfpMatrix::from_binary(p, w.matrix()).map_err(|e| e.to_string())?;
            (m.rank(), format!("GF({p})"))
        }
        Over::Q => (rank_rational_binary(w.matrix()), "Q".to_string()),
    };
    if json {
        print_json(&json!({ "rows": w.rows(), "cols": w.cols(), "over": ring, "rank": rank }));
    } else {
        println!("{}", field_header(w.field()));
        println!(
            "{} x {} matrix, rank over {ring}: {rank}",
            w.rows(),
            w.cols()
        );
    }
    Ok(Outcome::Ok)
}

fn budget(p: u32) -> Result<u64, String> {
    match std::env::var("QNULL_BUDGET") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| format!("QNULL_BUDGET: not an integer: {v:?}")),
        Err(_) => Ok(default_budget(p)),
    }
}

/// The witness in design-file format over the matrix columns. `r` is the
/// coefficient modulus, or 0 for integer coefficients.
pub fn witness_text(w: &IncidenceMatrix, report: &SearchReport, r: u32) -> String {
    let mut out = format!("{} {} {} {}\n", w.field().q(), w.n(), r, w.t());
    if let Some(wit) = &report.witness {
        for (&c, v) in wit.support.iter().zip(&wit.values) {
            let x = w.col_subspace(c);
            writeln!(out, "{}|{}|{}", x.dim(), x.to_text(), v).unwrap();
        }
    }
    out
}

fn report_output(w: &IncidenceMatrix, report: &SearchReport, ring: &str, r: u32, json: bool) {
    let witness = report.witness.as_ref().map(|_| witness_text(w, report, r));
    if json {
        print_json(&json!({
            "weight": report.weight, "exhaustive": report.exhaustive, "mode": report.mode.name(),
            "cap": report.cap, "over": ring, "witness": witness,
            "witness_columns": report.witness.as_ref().map(|x| x.support.clone()),
        }));
    } else {
        println!("{}", field_header(w.field()));
        println!("{} x {} matrix over {ring}", w.rows(), w.cols());
        println!("mode\t{}", report.mode.name());
        println!("cap\t{}", report.cap);
        match report.weight {
            Some(wt) => println!("weight\t{wt}"),
            None => println!("weight\tnone found"),
        }
        println!("exhaustive\t{}", report.exhaustive);
        if let Some(text) = witness {
            println!("witness");
            print!("{text}");
        }
    }
}

fn cmd_minweight(
    path: &Path,
    p: Option<u32>,
    cap: usize,
    mode: Mode,
    seed: u64,
    iterations: u32,
    json: bool,
) -> CmdResult {
    let w = load_matrix(path)?;
    let p = p.unwrap_or(w.field().p());
    let m = GfpMatrix::from_binary(p, w.matrix()).map_err(|e| e.to_string())?;
    let mode = match mode {
        Mode::Kernel => SearchMode::KernelEnumeration,
        Mode::Support => SearchMode::SupportEnumeration,
        Mode::Randomized => SearchMode::Randomized { iterations, seed },
    };
    let report = min_weight_kernel_gfp(&m, cap, mode, budget(p)?).map_err(|e| e.to_string())?;
    report_output(&w, &report, &format!("GF({p})"), p, json);
    Ok(Outcome::Ok)
}

fn cmd_minsupport(path: &Path, cap: usize, json: bool) -> CmdResult {
    let w = load_matrix(path)?;
    let report = min_support_kernel_rational(w.matrix(), cap).map_err(|e| e.to_string())?;
    report_output(&w, &report, "Q", 0, json);
    Ok(Outcome::Ok)
}
