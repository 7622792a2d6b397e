use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use pillowvol::cache::DiskCache;
use pillowvol::genfun::{Pipeline, PipelineConfig};
use pillowvol::oracle;
use pillowvol::partitions::WeightVariant;
use pillowvol::quasimodular::Family;
use pillowvol::table::{load_table, verify_table};
use pillowvol::volume::{self, Convention, HypType, Method, PoleConvention};
use pillowvol::{Exec, ProfilePair, StratumSignature};

#[derive(Parser)]
#[command(name = "pillowvol", version, about = "Exact Masur-Veech volumes of strata of quadratic differentials")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Bracket weight (debug; `printed` is known to be inconsistent).
    #[arg(long, global = true, value_enum, default_value = "frobenius")]
    weight_variant: Variant,
    /// Run kernels on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    /// Largest weight w(μ, ν) the pipeline attempts.
    #[arg(long, global = true, default_value_t = 6)]
    cap: u32,
    /// Skip the on-disk series cache.
    #[arg(long, global = true)]
    no_cache: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Printed,
    Frobenius,
}

#[derive(Clone, Copy, ValueEnum)]
enum Conv {
    Eo,
    Aez,
    AezUnnumbered,
}

#[derive(Clone, Copy, ValueEnum)]
enum Meth {
    Auto,
    Eo,
    ClosedForm,
}

#[derive(Args)]
struct StratumArg {
    /// Singularity orders, e.g. "2,-1^2" or "2 -1 -1".
    #[arg(long, short, allow_hyphen_values = true, value_parser = parse_stratum)]
    stratum: StratumSignature,
}

fn parse_stratum(s: &str) -> Result<StratumSignature, String> {
    StratumSignature::parse_loose(s).map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Cmd {
    /// Volume of a stratum.
    Volume {
        #[command(flatten)]
        s: StratumArg,
        #[arg(long, value_enum, default_value = "aez")]
        convention: Conv,
        #[arg(long, value_enum, default_value = "auto")]
        method: Meth,
        /// Leave poles out of the multiplicity factor (known to disagree with the table).
        #[arg(long)]
        exclude_poles: bool,
    },
    /// Z'(μ, ν) series in x = q² and its quasi-modular fit.
    Series {
        #[command(flatten)]
        s: StratumArg,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Connected series Z° and its fit.
    Connected {
        #[command(flatten)]
        s: StratumArg,
        #[arg(long, default_value_t = 10)]
        terms: usize,
    },
    /// Brute-force weighted cover counts as CSV.
    Covers {
        #[command(flatten)]
        s: StratumArg,
        /// Largest degree (pillowcase degrees are even).
        #[arg(long, default_value_t = 6)]
        max_degree: usize,
    },
    /// Torus cover counts for ramification profile μ (comma separated).
    TorusCovers {
        #[arg(long, value_delimiter = ',')]
        mu: Vec<u32>,
        #[arg(long, default_value_t = 5)]
        max_degree: usize,
    },
    /// Lattice-count estimate of the volume.
    Estimate {
        #[command(flatten)]
        s: StratumArg,
        /// Cutoff D; covers of degree up to 2D are counted.
        #[arg(long, default_value_t = 10)]
        cutoff: usize,
    },
    /// Genus-0 or hyperelliptic closed forms.
    ClosedForm {
        #[arg(long, allow_hyphen_values = true, value_parser = parse_stratum)]
        stratum: Option<StratumSignature>,
        /// Hyperelliptic type: 1, 1', 2 or 3.
        #[arg(long = "type")]
        hyp_type: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        k1: Option<i64>,
        #[arg(long, allow_hyphen_values = true)]
        k2: Option<i64>,
        /// Abelian hyperelliptic type (1 or 2), with `--k`.
        #[arg(long)]
        abelian_type: Option<u32>,
        #[arg(long)]
        k: Option<i64>,
    },
    /// Checks the shipped table against the pipeline.
    Verify {
        #[arg(long, default_value = "data/appendix_b.csv")]
        table: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_weight: u32,
        #[arg(long)]
        exclude_poles: bool,
    },
    /// Numeric checks of the asymptotic sum identities.
    ValidateSums {
        #[arg(long, default_value_t = 1_000_000)]
        terms: u64,
    },
    /// Numeric gate for the modular substitution.
    Gate {
        #[arg(long, value_delimiter = ',', default_value = "0.05,0.02,0.01")]
        h: Vec<f64>,
    },
    /// On-disk cache maintenance.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Subcommand)]
enum CacheAction {
    /// Location and number of entries.
    Info,
    /// Removes all entries.
    Clear,
}

struct Ctx {
    json: bool,
    pipe: Pipeline,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let variant = match cli.weight_variant {
        Variant::Printed => WeightVariant::Printed,
        Variant::Frobenius => WeightVariant::Frobenius,
    };
    let exec = if cli.sequential { Exec::Sequential } else { Exec::Parallel };
    let cache = if cli.no_cache { None } else { DiskCache::from_env() };
    let pipe = Pipeline::new(PipelineConfig { cap: cli.cap, variant, exec, cache });
    let ctx = Ctx { json: cli.json, pipe };
    match run(&ctx, cli.cmd) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn print_json(v: &serde_json::Value) {
    println!("{}", serde_json::to_string_pretty(v).expect("json"));
}

fn run(ctx: &Ctx, cmd: Cmd) -> pillowvol::Result<ExitCode> {
    match cmd {
        Cmd::Volume { s, convention, method, exclude_poles } => {
            let conv = match convention {
                Conv::Eo => Convention::Eo,
                Conv::Aez => Convention::Aez,
                Conv::AezUnnumbered => Convention::AezUnnumbered,
            };
            let method = match method {
                Meth::Auto => Method::Auto,
                Meth::Eo => Method::Eo,
                Meth::ClosedForm => Method::ClosedForm,
            };
            let poles = if exclude_poles { PoleConvention::ExcludePoles } else { PoleConvention::IncludePoles };
            let r = volume::compute_volume(&ctx.pipe, &s.stratum, conv, method, poles)?;
            if ctx.json {
                print_json(&serde_json::to_value(&r)?);
            } else {
                println!("{r}");
            }
        }
        Cmd::Series { s, terms } => {
            let p = s.stratum.to_profile();
            let series = ctx.pipe.zprime_series(&p, terms)?;
            let fit = ctx.pipe.check_weight(p.weight()).and_then(|_| ctx.pipe.zprime_fit(&p));
            emit_series(ctx, "zprime", &s.stratum, &p, &series, fit.map(|f| (f.poly.clone(), f.surplus())))?;
        }
        Cmd::Connected { s, terms } => {
            let p = s.stratum.to_profile();
            let series = ctx.pipe.zconnected_series(&p, terms)?;
            let poly = ctx.pipe.check_weight(p.weight()).and_then(|_| ctx.pipe.zconnected_poly(&p));
            emit_series(ctx, "connected", &s.stratum, &p, &series, poly.map(|q| (q, 0)))?;
        }
        Cmd::Covers { s, max_degree } => {
            let p = s.stratum.to_profile();
            let exec = ctx.pipe.config().exec;
            let rows: Vec<oracle::CoverCount> = (2..=max_degree)
                .step_by(2)
                .map(|n| oracle::count_pillow_covers(&p, n, exec))
                .collect::<pillowvol::Result<_>>()?;
            emit_covers(ctx, &rows);
        }
        Cmd::TorusCovers { mu, max_degree } => {
            let exec = ctx.pipe.config().exec;
            let rows: Vec<oracle::CoverCount> = (1..=max_degree)
                .map(|d| oracle::count_torus_covers(&mu, d, exec))
                .collect::<pillowvol::Result<_>>()?;
            emit_covers(ctx, &rows);
        }
        Cmd::Estimate { s, cutoff } => {
            let e = oracle::estimate_volume_from_counts(&ctx.pipe, &s.stratum.to_profile(), cutoff)?;
            if let Some(w) = &e.warning {
                eprintln!("warning: {w}");
            }
            if ctx.json {
                print_json(&serde_json::to_value(&e)?);
            } else {
                print!("cutoff {}: estimate {:.6} (table normalization {:.6})", e.cutoff, e.estimate_eo, e.estimate_aez);
                match e.ratio {
                    Some(r) => println!(", ratio to exact {r:.4}"),
                    None => println!(),
                }
            }
        }
        Cmd::ClosedForm { stratum, hyp_type, k1, k2, abelian_type, k } => {
            let v = match (stratum, hyp_type, abelian_type) {
                (Some(sig), None, None) => volume::closed_form(&sig)
                    .ok_or_else(|| pillowvol::Error::ClosedFormInapplicable(sig.to_string()))?,
                (None, Some(t), None) => {
                    let t: HypType = t.parse()?;
                    let (Some(k1), Some(k2)) = (k1, k2) else {
                        eprintln!("error: --type needs --k1 and --k2");
                        return Ok(ExitCode::from(2));
                    };
                    volume::hyperelliptic_volume(t, k1, k2)?
                }
                (None, None, Some(t)) => {
                    let Some(k) = k else {
                        eprintln!("error: --abelian-type needs --k");
                        return Ok(ExitCode::from(2));
                    };
                    volume::hyperelliptic_abelian_volume(t, k)?
                }
                _ => {
                    eprintln!("error: give exactly one of --stratum, --type, --abelian-type");
                    return Ok(ExitCode::from(2));
                }
            };
            if ctx.json {
                let (c, pi) = v.as_monomial().unwrap_or_default();
                print_json(&json!({"num": c.numer().to_string(), "den": c.denom().to_string(), "pi_power": pi}));
            } else {
                println!("{v}");
            }
        }
        Cmd::Verify { table, max_weight, exclude_poles } => {
            let rows = load_table(&table)?;
            let poles = if exclude_poles { PoleConvention::ExcludePoles } else { PoleConvention::IncludePoles };
            let rep = verify_table(&rows, max_weight, &ctx.pipe, poles);
            if ctx.json {
                print_json(&serde_json::to_value(&rep)?);
            } else {
                println!("{rep}");
            }
            if !rep.ok() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::ValidateSums { terms } => {
            let rep = oracle::validate_sum_identities(terms)?;
            if ctx.json {
                print_json(&serde_json::to_value(&rep)?);
            } else {
                for c in &rep.checks {
                    println!(
                        "{} {:<22} N={:<8} observed {:.12e} expected {:.12e} error {:.3e} (tol {:.0e})",
                        if c.pass { "PASS" } else { "FAIL" },
                        c.name,
                        c.truncation,
                        c.observed,
                        c.expected,
                        c.error,
                        c.tolerance
                    );
                }
            }
            if !rep.all_pass() {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Gate { h } => {
            let rows = pillowvol::quasimodular::numeric_gate(&h);
            let ok = rows.iter().all(|r| r.rel_err < 1e-6);
            if ctx.json {
                let v: Vec<_> = rows
                    .iter()
                    .map(|r| json!({"generator": r.generator, "h": r.h, "predicted": r.predicted, "observed": r.observed, "rel_err": r.rel_err}))
                    .collect();
                print_json(&json!(v));
            } else {
                for r in &rows {
                    println!("{:<10} h={:<6} predicted {:.10e} observed {:.10e} rel {:.2e}", r.generator, r.h, r.predicted, r.observed, r.rel_err);
                }
            }
            if !ok {
                return Ok(ExitCode::from(1));
            }
        }
        Cmd::Cache { action } => {
            let Some(cache) = DiskCache::from_env() else {
                eprintln!("error: no cache directory available");
                return Ok(ExitCode::from(1));
            };
            match action {
                CacheAction::Info => {
                    if ctx.json {
                        print_json(&json!({"dir": cache.dir(), "entries": cache.len()}));
                    } else {
                        println!("{}: {} entries", cache.dir().display(), cache.len());
                    }
                }
                CacheAction::Clear => {
                    let n = cache.clear()?;
                    println!("removed {n} entries");
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn emit_series(
    ctx: &Ctx,
    kind: &str,
    sig: &StratumSignature,
    p: &ProfilePair,
    series: &pillowvol::QSeries,
    poly: pillowvol::Result<(pillowvol::quasimodular::QMPolynomial, usize)>,
) -> pillowvol::Result<()> {
    if ctx.json {
        let coeffs: Vec<String> = series.coeffs().iter().map(pillowvol::exact::rational::format).collect();
        let mut v = json!({"kind": kind, "stratum": sig.to_string(), "profile": p.to_string(), "variable": "x = q^2", "coefficients": coeffs});
        match &poly {
            Ok((q, _)) => v["polynomial"] = q.to_json(),
            Err(e) => v["polynomial_error"] = json!(e.to_string()),
        }
        print_json(&v);
    } else {
        println!("{kind} {p}: {series}");
        match poly {
            Ok((q, surplus)) => {
                let names = Family::Pillowcase.generator_names();
                println!("in [{}]: {q}", names.join(", "));
                if surplus > 0 {
                    println!("fit surplus: {surplus} consistent coefficients");
                }
            }
            Err(e) => eprintln!("no fit: {e}"),
        }
    }
    Ok(())
}

fn emit_covers(ctx: &Ctx, rows: &[oracle::CoverCount]) {
    if ctx.json {
        let v: Vec<_> = rows
            .iter()
            .map(|c| json!({"degree": c.degree, "all": c.all.to_string(), "connected": c.connected.to_string()}))
            .collect();
        print_json(&json!(v));
    } else {
        println!("degree,all_num,all_den,connected_num,connected_den");
        for c in rows {
            println!("{}", c.to_csv());
        }
    }
}
