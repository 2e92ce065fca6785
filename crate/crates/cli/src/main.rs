//! Verification runner and table emitter for the spo(2m|2n,2n) symbolic
//! models.
//!
//! Exit codes: 0 all checks passed, 1 some check failed, 2 configuration
//! error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use spo_core::bessel::{IdealSlice, MatrixVarSpace};
use spo_core::gaussian::GaussianFunction;
use spo_core::reps::{dim_p2j_formula, fischer_decompose, gk_growth};
use spo_core::scalar::{rat, Rat, Scalar};
use spo_core::superspace::{monomials_of_degree, parse_poly, vector_space, SuperPoly};
use spo_core::suites::{run_suite, vdim_table, SuiteConfig, SuiteKind};
use spo_core::transforms::{
    hermite, segal_bargmann_hermite, segal_bargmann_moments, HermiteResult, HermiteVariant,
};

#[derive(Parser)]
#[command(
    name = "spo",
    about = "Exact verification of the minimal and metaplectic models of spo(2m|2n,2n)",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct GridArgs {
    /// Even rank(s); repeat together with --n to form grid points
    #[arg(long = "m", required = true)]
    m: Vec<usize>,
    /// Half odd rank(s); paired positionally with --m
    #[arg(long = "n", required = true)]
    n: Vec<usize>,
}

impl GridArgs {
    fn grid(&self) -> Result<Vec<(usize, usize)>, String> {
        if self.m.len() != self.n.len() {
            return Err("--m and --n must be repeated the same number of times".into());
        }
        Ok(self.m.iter().cloned().zip(self.n.iter().cloned()).collect())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run verification suites over a grid and emit a report
    Verify {
        #[command(flatten)]
        grid: GridArgs,
        /// Suite name (repeatable): algebra, bessel, reps, products,
        /// transforms, dims, gk; defaults to all
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Check a single realisation tag instead of whole suites:
        /// pi_lambda, rho_lambda, pi_tilde, rho_tilde, pi_hat, mu_star, u_star
        #[arg(long = "rep")]
        rep: Option<String>,
        #[arg(long = "degree-cap", default_value_t = 4)]
        degree_cap: u64,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = spo_core::suites::DEFAULT_SEED)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Dimensions of the Bessel-annihilated quadratic spaces V_lambda
    Vdim {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Exact Gram matrix of a pairing on a degree slice
    Gram {
        #[arg(long, default_value = "fock")]
        product: String,
        #[arg(long, short = 'k', default_value_t = 2)]
        k: u64,
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// lambda for the bessel-fischer product: "1" or "-1/2"
        #[arg(long, default_value = "-1/2")]
        lambda: String,
    },
    /// Hermite superpolynomials and superfunctions
    Hermite {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        n: usize,
        /// comma-separated multi-index, e.g. 2,0,1
        #[arg(long)]
        alpha: String,
        /// one of h, H, h_tilde, H_tilde
        #[arg(long, default_value = "H")]
        variant: String,
    },
    /// Segal-Bargmann transform of p(x) exp(-R^2)
    Sb {
        #[arg(long, default_value_t = 1)]
        m: usize,
        #[arg(long, default_value_t = 1)]
        n: usize,
        /// polynomial factor, e.g. "3*x1^2 + x2*x3"
        #[arg(long)]
        input: String,
    },
    /// Growth of U_k(g).1 and its leading exponent
    Gk {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long = "k-max", default_value_t = 8)]
        k_max: u64,
    },
    /// Harmonic decomposition dimensions per degree
    FischerDims {
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long = "k-max", default_value_t = 4)]
        k_max: u64,
    },
}

fn main() {
    let cli = Cli::parse();
    std::process::exit(match dispatch(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    });
}

fn parse_lambda(s: &str) -> Result<Rat, String> {
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a, b),
        None => (s, "1"),
    };
    let nv: i64 = num.trim().parse().map_err(|_| format!("bad lambda {s:?}"))?;
    let dv: i64 = den.trim().parse().map_err(|_| format!("bad lambda {s:?}"))?;
    if dv == 0 {
        return Err("lambda denominator is zero".into());
    }
    Ok(rat(nv, dv))
}

fn check_rank(m: usize, n: usize) -> Result<(), String> {
    if (m, n) == (0, 1) {
        return Err("the pair (m,n) = (0,1) is excluded".into());
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Verify { grid, suites, rep, degree_cap, samples, seed, format } => {
            if let Some(rep_name) = rep {
                let cfg = SuiteConfig {
                    grid: grid.grid()?,
                    suites: vec![],
                    degree_cap,
                    samples,
                    seed,
                };
                let report = spo_core::suites::run_rep_check(&cfg, &rep_name)
                    .map_err(|e| e.to_string())?;
                match format {
                    Format::Json => println!("{}", report.to_json()),
                    Format::Text => print!("{}", report.to_text()),
                }
                return Ok(report.all_passed());
            }
            let suite_kinds = if suites.is_empty() {
                SuiteKind::all()
            } else {
                suites
                    .iter()
                    .map(|s| SuiteKind::parse(s).ok_or_else(|| format!("unknown suite {s:?}")))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let cfg = SuiteConfig {
                grid: grid.grid()?,
                suites: suite_kinds,
                degree_cap,
                samples,
                seed,
            };
            let report = run_suite(&cfg).map_err(|e| e.to_string())?;
            match format {
                Format::Json => println!("{}", report.to_json()),
                Format::Text => print!("{}", report.to_text()),
            }
            Ok(report.all_passed())
        }
        Command::Vdim { grid, format } => {
            let grid = grid.grid()?;
            for &(m, n) in &grid {
                check_rank(m, n)?;
            }
            let rows = vdim_table(&grid);
            match format {
                Format::Json => {
                    let objs: Vec<serde_json::Value> = rows
                        .iter()
                        .map(|(m, n, l, de, dd, sd, closed)| {
                            serde_json::json!({
                                "m": m, "n": n, "lambda": l,
                                "dim_even": de, "dim_odd": dd,
                                "sdim": sd, "sdim_closed_form": closed,
                            })
                        })
                        .collect();
                    println!("{}", serde_json::to_string_pretty(&objs).unwrap());
                }
                Format::Text => {
                    println!(
                        "{:>3} {:>3} {:>6} {:>8} {:>7} {:>6} {:>12}",
                        "m", "n", "lambda", "dim_even", "dim_odd", "sdim", "closed_form"
                    );
                    for (m, n, l, de, dd, sd, closed) in rows {
                        let cf = if l == "2" { "-".to_string() } else { closed.to_string() };
                        println!("{m:>3} {n:>3} {l:>6} {de:>8} {dd:>7} {sd:>6} {cf:>12}");
                    }
                }
            }
            Ok(true)
        }
        Command::Gram { product, k, m, n, lambda } => {
            check_rank(m, n)?;
            match product.as_str() {
                "fock" | "fischer" => {
                    let space = vector_space(m, n, &["z", "zb"]);
                    let bank = space.banks[0].clone();
                    let zbb = space.banks[1].clone();
                    let monos = monomials_of_degree(&space, &bank, k);
                    println!(
                        "# {product} Gram on P_{k}(C^{{{m}|{}}}), dimension {}",
                        2 * n,
                        monos.len()
                    );
                    for a in &monos {
                        let pa = SuperPoly::from_terms(&space, [(a.clone(), Scalar::one())]);
                        let row: Vec<String> = monos
                            .iter()
                            .map(|b| {
                                let pb =
                                    SuperPoly::from_terms(&space, [(b.clone(), Scalar::one())]);
                                let v = match product.as_str() {
                                    "fock" => {
                                        spo_core::products::pair_fock(&pa, &pb, &bank, &zbb)
                                    }
                                    _ => spo_core::products::pair_fischer(&pa, &pb, &bank),
                                };
                                v.render()
                            })
                            .collect();
                        println!("[{}]", row.join(", "));
                    }
                    Ok(true)
                }
                "bessel-fischer" => {
                    let lam = parse_lambda(&lambda)?;
                    let jordan =
                        spo_core::algebra::JordanAlg::new(m, n).map_err(|e| e.to_string())?;
                    let mvs = MatrixVarSpace::new(jordan);
                    let v = spo_core::bessel::compute_v_lambda(&mvs, &lam);
                    let slice = IdealSlice::new(&mvs, &v, k);
                    let gram = spo_core::products::bessel_fischer_gram(&mvs, &lam, &slice);
                    println!(
                        "# bessel-fischer Gram on P_{k} mod I, lambda = {lambda}, dimension {}",
                        gram.len()
                    );
                    for row in &gram {
                        let cells: Vec<String> = row.iter().map(|v| v.render()).collect();
                        println!("[{}]", cells.join(", "));
                    }
                    Ok(true)
                }
                other => Err(format!("unknown product {other:?}")),
            }
        }
        Command::Hermite { m, n, alpha, variant } => {
            check_rank(m, n)?;
            let alpha: Vec<u8> = alpha
                .split(',')
                .map(|t| t.trim().parse::<u8>().map_err(|_| format!("bad index {t:?}")))
                .collect::<Result<Vec<_>, _>>()?;
            if alpha.len() != m + 2 * n {
                return Err(format!("alpha must have {} entries", m + 2 * n));
            }
            let variant = match variant.as_str() {
                "h" => HermiteVariant::Small,
                "H" => HermiteVariant::Big,
                "h_tilde" => HermiteVariant::SmallTilde,
                "H_tilde" => HermiteVariant::BigTilde,
                other => return Err(format!("unknown variant {other:?}")),
            };
            let space = vector_space(m, n, &["x"]);
            let bank = space.banks[0].clone();
            match hermite(&space, &bank, &alpha, variant) {
                HermiteResult::Poly(p) => println!("{}", p.render()),
                HermiteResult::Gaussian(g) => {
                    println!("({}) * exp(-{} R^2)", g.poly.render(), g.weight)
                }
            }
            Ok(true)
        }
        Command::Sb { m, n, input } => {
            check_rank(m, n)?;
            let space = vector_space(m, n, &["x", "z"]);
            let xb = space.banks[0].clone();
            let zb = space.banks[1].clone();
            let p = parse_poly(&space, &xb, &input).map_err(|e| e.to_string())?;
            let f = GaussianFunction::new(p, &xb, Rat::from_integer(1.into()));
            let by_moments =
                segal_bargmann_moments(&space, &xb, &zb, &f).map_err(|e| e.to_string())?;
            let by_hermite =
                segal_bargmann_hermite(&space, &xb, &zb, &f).map_err(|e| e.to_string())?;
            if by_moments != by_hermite {
                return Err("internal pipeline disagreement".into());
            }
            println!("{}", by_moments.render());
            Ok(true)
        }
        Command::Gk { grid, k_max } => {
            let grid = grid.grid()?;
            let mut all_ok = true;
            for &(m, n) in &grid {
                check_rank(m, n)?;
                let k_max = k_max.max(2 * n as u64 + 2);
                let report = gk_growth(m, n, k_max);
                let dims: Vec<String> = (0..=k_max.min(8))
                    .map(|j| dim_p2j_formula(m, n, j).to_string())
                    .collect();
                println!(
                    "(m,n)=({m},{n}): dim P_2j = [{}], methods agree: {}, leading exponent: {:?}",
                    dims.join(", "),
                    report.methods_agree,
                    report.leading_exponent
                );
                all_ok &= report.methods_agree && report.leading_exponent == Some(m);
            }
            Ok(all_ok)
        }
        Command::FischerDims { grid, k_max } => {
            let grid = grid.grid()?;
            let mut all_ok = true;
            for &(m, n) in &grid {
                check_rank(m, n)?;
                let space = vector_space(m, n, &["x"]);
                let bank = space.banks[0].clone();
                println!("(m,n)=({m},{n}), M={}:", m as i64 - 2 * n as i64);
                for k in 0..=k_max {
                    let cert = fischer_decompose(&space, &bank, k);
                    let parts: Vec<String> = cert
                        .summands
                        .iter()
                        .map(|(l, gen, d)| format!("{}H_{l}:{d}", if *gen { "~" } else { "" }))
                        .collect();
                    println!(
                        "  k={k}: dim P_k = {:>3}, direct sum {} [{}]",
                        cert.dim_pk,
                        if cert.direct_sum_ok { "ok" } else { "FAILED" },
                        parts.join(", ")
                    );
                    all_ok &= cert.direct_sum_ok;
                }
            }
            Ok(all_ok)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lambda_parsing() {
        assert_eq!(parse_lambda("-1/2").unwrap(), rat(-1, 2));
        assert_eq!(parse_lambda("1").unwrap(), rat(1, 1));
        assert_eq!(parse_lambda("7/3").unwrap(), rat(7, 3));
        assert!(parse_lambda("x").is_err());
    }
}
