//! `blobkit` — command-line front end for the blobkit library.
//!
//! Exit codes: 0 success, 1 computational failure (structured JSON
//! diagnostic on stderr), 2 usage error.

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use std::str::FromStr;

use blobkit::alcove::{AlcoveComplex, Orientation};
use blobkit::blob::{decomposition_oracle, pascal_report};
use blobkit::hecke::{
    build_idempotent, center_checks, conjectured_basis_count, verify_idempotent, IdempotentSpec,
    Sign,
};
use blobkit::linkage::{induced_group, linkage_classes};
use blobkit::ring::Specialization;
use blobkit::tensor::{
    f21_blob_check, f_mb_rep, build_mq_n, matrix_max_norm, rho_rep, rho_residuals, RhoParams,
    RhoVariant,
};
use blobkit::walks::{
    branching_touch_count, has_corner_contact, hyperplane_closure, lambda_of_walk, walk_orbit,
    Hyperplane, Walk,
};
use blobkit::ring::CycloNumber;

#[derive(Parser)]
#[command(name = "blobkit", version, about = "Cyclotomic Hecke / blob algebra toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum Format {
    #[default]
    Ascii,
    Json,
    Csv,
}

#[derive(Args)]
struct FormatArg {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Ascii)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Wall-crossing recursion table n_A(B) for the rank-1 alcove complex.
    Soergel {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        /// Number of alcove layers (gallery depth) to tabulate.
        #[arg(long, default_value_t = 5)]
        rows: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Decomposition matrix of the blob algebra from Gram ranks.
    Decomp {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Composition factors of all standard modules up to a strand bound.
    Pascal {
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long)]
        m: i64,
    },
    /// Build and verify a level-l idempotent E(±, l, n).
    Idempotent {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n: usize,
        /// "+" or "-".
        #[arg(long, default_value = "+")]
        sign: String,
        #[command(flatten)]
        format: FormatArg,
    },
    /// Eigenvalue sequence and endpoint of a walk.
    Walks {
        /// Walk word, e.g. 3331312.
        #[arg(long)]
        walk: String,
        /// Number of λ parameters (defaults to the largest letter).
        #[arg(long)]
        d: Option<usize>,
    },
    /// Reflection orbit of a walk and the 2^t prediction.
    Orbits {
        #[arg(long)]
        walk: String,
        #[arg(long)]
        d: Option<usize>,
        /// Optional specialization config (JSON); defaults to the full
        /// reflection arrangement.
        #[arg(long)]
        config: Option<String>,
    },
    /// Linkage classes of d-multipartitions under a specialization.
    Linkage {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        d: usize,
        /// Specialization config (JSON file).
        #[arg(long)]
        config: String,
    },
    /// Verify representation relations (rho0, rhos, fmb).
    Repcheck {
        /// Which representation: rho0 | rhos | fmb.
        #[arg(long)]
        which: String,
        /// μ_q as a rational multiple of π, e.g. 2/7 (rho variants).
        #[arg(long)]
        muq: Option<String>,
        /// Blob parameter m (rational for rho variants, integer width for fmb).
        #[arg(long)]
        m: Option<String>,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Braid word for fmb ("identity" or comma-separated letters).
        #[arg(long, default_value = "identity")]
        b: String,
    },
    /// Conjectured Hecke basis count.
    Basiscount {
        #[arg(long)]
        d: usize,
        #[arg(long)]
        n: usize,
    },
    /// Center membership checks for small (n, d).
    Centercheck {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
    /// Compare the alcove prediction with the Gram-rank oracle.
    Crossvalidate {
        #[arg(long)]
        l: i64,
        #[arg(long)]
        m: i64,
        #[arg(long, default_value_t = 8)]
        nmax: usize,
    },
}

/// JSON specialization config: q-order `l` and λ parameters as pairs
/// (rational coefficient, q-exponent), meaning λ_i = coeff·q^qpow.
#[derive(Deserialize, Serialize)]
struct SpecConfig {
    l: u32,
    lambda: Vec<LambdaEntry>,
}

#[derive(Deserialize, Serialize)]
struct LambdaEntry {
    coeff: String,
    qpow: i64,
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s.trim(), "1"),
    };
    let num = BigInt::from_str(num).with_context(|| format!("bad rational {s:?}"))?;
    let den = BigInt::from_str(den).with_context(|| format!("bad rational {s:?}"))?;
    if den == BigInt::from(0) {
        bail!("zero denominator in {s:?}");
    }
    Ok(BigRational::new(num, den))
}

fn load_specialization(path: &str) -> Result<Specialization> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
    let cfg: SpecConfig = serde_json::from_str(&raw).with_context(|| format!("parsing {path}"))?;
    if cfg.lambda.is_empty() {
        bail!("config {path} declares no λ parameters");
    }
    let lambda = cfg
        .lambda
        .iter()
        .map(|e| Ok((parse_rational(&e.coeff)?, e.qpow)))
        .collect::<Result<Vec<_>>>()?;
    Specialization::new(cfg.l, lambda).map_err(|e| anyhow!("invalid specialization: {e}"))
}

fn emit_table(format: Format, header: &[String], rows: &[Vec<String>]) {
    match format {
        Format::Ascii => {
            let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
            for row in rows {
                for (i, cell) in row.iter().enumerate() {
                    widths[i] = widths[i].max(cell.len());
                }
            }
            let line = |cells: &[String]| {
                cells
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{:>w$}", c, w = widths[i]))
                    .collect::<Vec<_>>()
                    .join("  ")
            };
            println!("{}", line(header));
            for row in rows {
                println!("{}", line(row));
            }
        }
        Format::Csv => {
            println!("{}", header.join(","));
            for row in rows {
                println!("{}", row.join(","));
            }
        }
        Format::Json => {
            let objs: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| {
                    header
                        .iter()
                        .zip(row)
                        .map(|(h, c)| (h.clone(), serde_json::Value::String(c.clone())))
                        .collect::<serde_json::Map<_, _>>()
                        .into()
                })
                .collect();
            println!("{}", serde_json::to_string_pretty(&objs).unwrap());
        }
    }
}

fn cmd_soergel(l: i64, m: i64, rows: usize, format: Format) -> Result<()> {
    let radius = (rows as i64 + 2) * l;
    let complex = AlcoveComplex::build_rank1(l, m, radius)
        .map_err(|e| anyhow!("alcove complex: {e}"))?;
    let table = complex
        .soergel_table(rows, Orientation::default())
        .map_err(|e| anyhow!("recursion: {e}"))?;
    let mut alcoves: Vec<i64> =
        complex.alcoves().into_iter().filter(|&b| complex.depth(b) <= rows).collect();
    alcoves.sort_by_key(|&b| (complex.depth(b), b));
    let mut header = vec!["A \\ B".to_string()];
    header.extend(alcoves.iter().map(|&b| complex.label(b)));
    let mut out = Vec::new();
    for (&a, n_a) in &table {
        let mut row = vec![complex.label(a)];
        row.extend(alcoves.iter().map(|&b| n_a.value(b).to_string()));
        out.push(row);
    }
    emit_table(format, &header, &out);
    Ok(())
}

fn cmd_decomp(l: i64, m: i64, n: usize, format: Format) -> Result<()> {
    let d = decomposition_oracle(n, l, m).map_err(|e| anyhow!("oracle: {e}"))?;
    let mut header = vec!["λ \\ μ".to_string()];
    header.extend(d.weights.iter().map(|w| w.to_string()));
    let rows: Vec<Vec<String>> = d
        .weights
        .iter()
        .zip(&d.entries)
        .map(|(lam, row)| {
            let mut cells = vec![lam.to_string()];
            cells.extend(row.iter().map(|e| e.to_string()));
            cells
        })
        .collect();
    emit_table(format, &header, &rows);
    Ok(())
}

fn cmd_pascal(n: usize, m: i64) -> Result<()> {
    let report = pascal_report(n, m).map_err(|e| anyhow!("pascal: {e}"))?;
    for (strands, row) in report.rows.iter().enumerate() {
        let cells: Vec<String> = row
            .iter()
            .map(|(w, dims)| {
                let factors =
                    dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("+");
                format!("λ={w}:({factors})")
            })
            .collect();
        println!("n={strands:<2} {}", cells.join("  "));
    }
    Ok(())
}

fn cmd_idempotent(d: usize, l: usize, n: usize, sign: &str, format: Format) -> Result<()> {
    let sign = match sign {
        "+" | "plus" => Sign::Plus,
        "-" | "minus" => Sign::Minus,
        other => bail!("sign must be + or -, got {other:?}"),
    };
    if l < 1 || l > d {
        bail!("level l must satisfy 1 ≤ l ≤ d");
    }
    let spec = IdempotentSpec { sign, l, n };
    let e = build_idempotent(&spec, d);
    let report = verify_idempotent(&e, &spec, d);
    match format {
        Format::Json => {
            let value = serde_json::json!({
                "d": d, "l": l, "n": n,
                "sign": if sign == Sign::Plus { "+" } else { "-" },
                "passes": report.passes(),
                "idempotent": report.idempotent,
                "x_eigen": report.x_eigen,
                "g_eigen": report.g_eigen,
                "central": report.central,
                "element": e.to_string(),
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        _ => {
            println!("E({}, {l}, {n}) over d={d}:", if sign == Sign::Plus { "+" } else { "-" });
            println!("  {e}");
            println!("verified: {}", report.passes());
        }
    }
    if !report.passes() {
        bail!("idempotent verification failed");
    }
    Ok(())
}

fn cmd_walks(walk: &str, d: Option<usize>) -> Result<()> {
    let w = Walk::parse(walk);
    if w.is_empty() {
        bail!("empty walk word");
    }
    let d = d.unwrap_or_else(|| w.word().iter().copied().max().unwrap_or(1));
    if w.word().iter().any(|&c| c < 1 || c > d) {
        bail!("walk letters must lie in 1..={d}");
    }
    println!("walk  {w}");
    println!("endpoint degrees {:?}", w.endpoint(d));
    let seq = lambda_of_walk(&w);
    let entries: Vec<String> =
        (0..w.len()).map(|i| seq.entry_poly(i, d).to_string()).collect();
    println!("λ^w = ({})", entries.join(", "));
    Ok(())
}

fn full_arrangement(d: usize, bound: i64) -> Vec<Hyperplane> {
    let mut gens = Vec::new();
    for i in 1..=d {
        for j in i + 1..=d {
            for x in -bound..=bound {
                gens.push(Hyperplane::new(i, j, x));
            }
        }
    }
    hyperplane_closure(&gens, bound)
}

fn cmd_orbits(walk: &str, d: Option<usize>, config: Option<&str>) -> Result<()> {
    let w = Walk::parse(walk);
    if w.is_empty() {
        bail!("empty walk word");
    }
    let d = d.unwrap_or_else(|| w.word().iter().copied().max().unwrap_or(1));
    let generators = match config {
        Some(path) => {
            let k = load_specialization(path)?;
            let g = induced_group(&k, w.len() as i64 + 1);
            if g.d != d {
                bail!("config has {} λ parameters, walk needs {d}", g.d);
            }
            g.closed_factors(w.len()).into_iter().map(|(h, _)| h).collect()
        }
        None => full_arrangement(d, w.len() as i64),
    };
    let orbit = walk_orbit(&w, &generators);
    let t = branching_touch_count(&w, &generators);
    if has_corner_contact(&w, &generators) {
        println!(
            "walk {w}: orbit size {} (corner contact: the 2^t count does not apply)",
            orbit.len()
        );
    } else {
        println!(
            "walk {w}: orbit size {}, branching touches t = {t} (2^t = {})",
            orbit.len(),
            1u64 << t
        );
    }
    for member in &orbit {
        println!("  {member}");
    }
    Ok(())
}

fn cmd_linkage(n: u64, d: usize, config: &str) -> Result<()> {
    let k = load_specialization(config)?;
    if k.num_lambdas() != d {
        bail!("config has {} λ parameters, expected {d}", k.num_lambdas());
    }
    let classes = linkage_classes(n, d, &k);
    for (i, class) in classes.iter().enumerate() {
        let members: Vec<String> = class.iter().map(|m| m.to_string()).collect();
        println!("class {}: {{{}}}", i + 1, members.join(", "));
    }
    Ok(())
}

fn parse_fraction_pair(s: &str) -> Result<(i64, i64)> {
    let (a, b) = match s.split_once('/') {
        Some((a, b)) => (a.trim().parse()?, b.trim().parse()?),
        None => (s.trim().parse()?, 1i64),
    };
    Ok((a, b))
}

fn cmd_repcheck(which: &str, muq: Option<&str>, m: Option<&str>, n: usize, b: &str) -> Result<()> {
    match which {
        "rho0" | "rhos" => {
            let muq = muq.ok_or_else(|| anyhow!("--muq is required for {which}"))?;
            let m = m.ok_or_else(|| anyhow!("--m is required for {which}"))?;
            let (a, bb) = parse_fraction_pair(muq)?;
            let (u, v) = parse_fraction_pair(m)?;
            let variant =
                if which == "rho0" { RhoVariant::Rho0 } else { RhoVariant::RhoS };
            // Floating backend: residual norms.
            let muq_f = std::f64::consts::PI * a as f64 / bb as f64;
            let m_f = u as f64 / v as f64;
            let params_f = match variant {
                RhoVariant::Rho0 => RhoParams::numeric(muq_f, m_f),
                RhoVariant::RhoS => RhoParams::numeric_rho_s(muq_f, m_f),
            }
            .map_err(|e| anyhow!("{e}"))?;
            let rep_f = rho_rep(&params_f, n, variant).map_err(|e| anyhow!("{e}"))?;
            let mut relations = serde_json::Map::new();
            let mut max = 0f64;
            for (name, residual) in rho_residuals(&rep_f) {
                let norm = matrix_max_norm(&residual);
                max = max.max(norm);
                relations.insert(name, serde_json::json!(norm));
            }
            // Exact backend (ρ₀ only: the ρ_s radius is found numerically).
            // Cyclotomic arithmetic on the 4^n-dimensional space is only
            // practical for small n; beyond that the float norms stand.
            let exact_zero = if variant == RhoVariant::Rho0 && n <= 3 {
                let params = RhoParams::exact(a, bb, u, v).map_err(|e| anyhow!("{e}"))?;
                let rep = rho_rep(&params, n, variant).map_err(|e| anyhow!("{e}"))?;
                Some(rho_residuals(&rep).iter().all(|(_, r)| r.is_zero()))
            } else {
                None
            };
            let value = serde_json::json!({
                "which": which,
                "n": n,
                "mu_q": format!("{a}/{bb} π"),
                "m": format!("{u}/{v}"),
                "backend": if exact_zero.is_some() { "cyclotomic+float" } else { "float" },
                "relations": relations,
                "exact_all_zero": exact_zero,
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
            if max > 1e-10 || exact_zero == Some(false) {
                bail!("relation residuals exceed tolerance");
            }
        }
        "fmb" => {
            let m: usize = m
                .ok_or_else(|| anyhow!("--m (strand width) is required for fmb"))?
                .parse()?;
            let word: Vec<i64> = if b == "identity" {
                vec![]
            } else {
                b.split(',').map(|s| s.trim().parse()).collect::<Result<_, _>>()?
            };
            let q = CycloNumber::q_pow(0, 1);
            let base = build_mq_n(2, n + m - 1, &q).map_err(|e| anyhow!("{e}"))?;
            let rep = f_mb_rep(m, &word, &base).map_err(|e| anyhow!("{e}"))?;
            rep.check_relations().map_err(|e| anyhow!("{e}"))?;
            let blob = if m == 2 && word.is_empty() {
                let report = f21_blob_check(n).map_err(|e| anyhow!("{e}"))?;
                serde_json::json!({
                    "blob_parameter": report.blob_m,
                    "k_minus": report.k_minus.to_string(),
                    "image_algebra_dim": report.image_algebra_dim,
                    "blob_dim": report.blob_dim,
                })
            } else {
                serde_json::Value::Null
            };
            let value = serde_json::json!({
                "which": "fmb", "m": m, "b": b, "n": n,
                "backend": "symbolic",
                "relations_pass": true,
                "blob": blob,
            });
            println!("{}", serde_json::to_string_pretty(&value)?);
        }
        other => bail!("unknown representation {other:?} (expected rho0, rhos, fmb)"),
    }
    Ok(())
}

fn cmd_crossvalidate(l: i64, m: i64, nmax: usize) -> Result<()> {
    let radius = (nmax as i64 + 4) * l;
    let complex = AlcoveComplex::build_rank1(l, m, radius)
        .map_err(|e| anyhow!("alcove complex: {e}"))?;
    for n in 1..=nmax {
        let predicted = complex
            .decomposition_prediction(n as i64, Orientation::default())
            .map_err(|e| anyhow!("prediction n={n}: {e}"))?;
        let oracle = decomposition_oracle(n, l, m).map_err(|e| anyhow!("oracle n={n}: {e}"))?;
        let pv = predicted.at_v_one();
        let ov: Vec<Vec<i64>> = oracle
            .entries
            .iter()
            .map(|row| row.iter().map(|&e| e as i64).collect())
            .collect();
        if predicted.weights != oracle.weights || pv != ov {
            bail!("mismatch at n = {n}: prediction {pv:?} vs oracle {ov:?}");
        }
        println!("n = {n}: prediction matches oracle ({} weights)", oracle.weights.len());
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Soergel { l, m, rows, format } => cmd_soergel(l, m, rows, format.format),
        Command::Decomp { l, m, n, format } => cmd_decomp(l, m, n, format.format),
        Command::Pascal { n, m } => cmd_pascal(n, m),
        Command::Idempotent { d, l, n, sign, format } => {
            cmd_idempotent(d, l, n, &sign, format.format)
        }
        Command::Walks { walk, d } => cmd_walks(&walk, d),
        Command::Orbits { walk, d, config } => cmd_orbits(&walk, d, config.as_deref()),
        Command::Linkage { n, d, config } => cmd_linkage(n, d, &config),
        Command::Repcheck { which, muq, m, n, b } => {
            cmd_repcheck(&which, muq.as_deref(), m.as_deref(), n, &b)
        }
        Command::Basiscount { d, n } => {
            println!("{}", conjectured_basis_count(n, d));
            Ok(())
        }
        Command::Centercheck { n, d } => {
            let report = center_checks(n, d);
            println!("symmetric monomials central: {}", report.symmetric_monomials_central);
            if let Some(r5) = report.rank5_basis_central {
                println!("rank-5 center basis central: {r5}");
            }
            if let Some(d1) = report.d1_identity {
                println!("d=1 identity X1+X2 = λ1(1+g1²): {d1}");
            }
            if report.passes() {
                Ok(())
            } else {
                Err(anyhow!("center checks failed"))
            }
        }
        Command::Crossvalidate { l, m, nmax } => cmd_crossvalidate(l, m, nmax),
    }
}

fn main() {
    if let Ok(threads) = std::env::var("BLOBKIT_THREADS") {
        if let Ok(k) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
        }
    }
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        let diagnostic = serde_json::json!({
            "error": err.to_string(),
            "chain": err.chain().skip(1).map(|c| c.to_string()).collect::<Vec<_>>(),
        });
        eprintln!("{diagnostic}");
        std::process::exit(1);
    }
}
