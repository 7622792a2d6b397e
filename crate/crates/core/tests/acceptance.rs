//! Acceptance criteria 1-10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines always reach the output;
//! the process exits nonzero if any criterion fails.

use std::path::PathBuf;
use std::time::Instant;

use num_traits::ToPrimitive;

use pillowvol::exact::rational::{int, rat};
use pillowvol::genfun::pillow::all_covers_series;
use pillowvol::genfun::{z_empty_abelian, Pipeline, PipelineConfig};
use pillowvol::oracle::{count_pillow_covers, count_torus_covers, estimate_volume_from_counts, validate_sum_identities};
use pillowvol::partitions::WeightVariant;
use pillowvol::quasimodular::{monomial_basis, numeric_gate, Family};
use pillowvol::table::{load_table, TableRow};
use pillowvol::volume::{
    compute_volume, genus0_volume, hyperelliptic_volume, Convention, HypType, Method, PoleConvention, VolumeResult,
};
use pillowvol::{Exec, PiPoly, ProfilePair, Rational, StratumSignature};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn sig(s: &str) -> StratumSignature {
    s.parse().unwrap()
}

fn table() -> Vec<TableRow> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/appendix_b.csv");
    load_table(&path).expect("shipped table loads")
}

fn in_scope(rows: &[TableRow], cap: u32) -> Vec<StratumSignature> {
    let mut out: Vec<StratumSignature> = rows.iter().filter(|r| r.weight() <= cap).map(|r| r.stratum.clone()).collect();
    out.sort();
    out.dedup();
    out
}

fn pipe(variant: WeightVariant) -> Pipeline {
    Pipeline::new(PipelineConfig { variant, ..Default::default() })
}

fn aez(p: &Pipeline, s: &StratumSignature, poles: PoleConvention) -> pillowvol::Result<VolumeResult> {
    compute_volume(p, s, Convention::Aez, Method::Eo, poles)
}

fn check_values(p: &Pipeline, cases: &[(&str, PiPoly)], poles: PoleConvention) -> Outcome {
    for (s, want) in cases {
        match aez(p, &sig(s), poles) {
            Ok(v) if v.value() == *want => {}
            Ok(v) => return Err(format!("Q({s}) = {v}, expected {want}")),
            Err(e) => return Err(format!("Q({s}): {e}")),
        }
    }
    Ok(format!("{} strata exact", cases.len()))
}

fn criterion1_cases() -> Vec<(&'static str, PiPoly)> {
    vec![
        ("-1^4", PiPoly::monomial(int(2), 2)),
        ("2,-1^2", PiPoly::monomial(rat(4, 3), 2)),
        ("1,-1^5", PiPoly::monomial(int(1), 4)),
        ("1^2,-1^2", PiPoly::monomial(rat(1, 3), 4)),
        ("3,-1^3", PiPoly::monomial(rat(5, 9), 4)),
        ("5,-1", PiPoly::monomial(rat(28, 135), 4)),
    ]
}

fn criterion1(p: &Pipeline) -> Outcome {
    check_values(p, &criterion1_cases(), PoleConvention::IncludePoles)
}

fn weight6_named() -> Vec<(&'static str, PiPoly)> {
    vec![
        ("1^4", PiPoly::monomial(rat(1, 15), 6)),
        ("9,-1", PiPoly::monomial(rat(15224, 42525), 6)),
        ("2,1^2", PiPoly::monomial(rat(2, 15), 4)),
        ("8", PiPoly::monomial(rat(10, 27), 4)),
        ("2^2", PiPoly::monomial(rat(2, 3), 2)),
    ]
}

fn criterion2(p: &Pipeline, rows: &[TableRow]) -> Outcome {
    let t = Instant::now();
    let scope = in_scope(rows, 6);
    let mut checked = 0;
    for r in rows.iter().filter(|r| r.weight() <= 6) {
        match aez(p, &r.stratum, PoleConvention::IncludePoles) {
            Ok(v) if v.value() == r.value() => checked += 1,
            Ok(v) => return Err(format!("line {}: Q({}) = {v}, table {}", r.line, r.stratum, r.value())),
            Err(e) => return Err(format!("line {}: Q({}): {e}", r.line, r.stratum)),
        }
    }
    check_values(p, &weight6_named(), PoleConvention::IncludePoles)?;
    let secs = t.elapsed().as_secs_f64();
    if secs > 600.0 {
        return Err(format!("took {secs:.0}s"));
    }
    Ok(format!("{checked} rows / {} strata with w <= 6 exact in {secs:.1}s", scope.len()))
}

fn torus_profiles() -> Vec<Vec<u32>> {
    vec![vec![2], vec![3], vec![2, 2], vec![4], vec![3, 2], vec![5]]
}

fn criterion3(p: &Pipeline, strata: &[StratumSignature]) -> Outcome {
    let mut n = 0;
    for s in strata {
        let prof = s.to_profile();
        let all = all_covers_series(&p.zprime_series(&prof, 4).map_err(|e| e.to_string())?);
        let conn = p.zconnected_series(&prof, 4).map_err(|e| e.to_string())?;
        for d in 1..=3 {
            let c = count_pillow_covers(&prof, 2 * d, Exec::Parallel).map_err(|e| e.to_string())?;
            if &c.all != all.coeff(d).unwrap() || &c.connected != conn.coeff(d).unwrap() {
                return Err(format!(
                    "Q({s}) degree {}: oracle {} / {}, series {} / {}",
                    2 * d,
                    c.all,
                    c.connected,
                    all.coeff(d).unwrap(),
                    conn.coeff(d).unwrap()
                ));
            }
            n += 1;
        }
    }
    for mu in torus_profiles() {
        let all = p.zprime_abelian_series(&mu, 6).unwrap().mul(&z_empty_abelian(6));
        let conn = p.zconnected_abelian_series(&mu, 6).unwrap();
        for d in 1..=5 {
            let c = count_torus_covers(&mu, d, Exec::Parallel).map_err(|e| e.to_string())?;
            if &c.all != all.coeff(d).unwrap() || &c.connected != conn.coeff(d).unwrap() {
                return Err(format!("torus {mu:?} degree {d}: oracle {} / {}", c.all, c.connected));
            }
            n += 1;
        }
    }
    Ok(format!("{n} (profile, degree) pairs equal, pillowcase 2d <= 6 and torus d <= 5"))
}

fn criterion4(p: &Pipeline, strata: &[StratumSignature]) -> Outcome {
    let mut g0 = 0;
    for s in strata.iter().filter(|s| s.genus() == 0) {
        let pipe_v = aez(p, s, PoleConvention::IncludePoles).map_err(|e| e.to_string())?.value();
        let cf = genus0_volume(s).map_err(|e| e.to_string())?;
        if pipe_v != cf {
            return Err(format!("Q({s}): pipeline {pipe_v}, genus-0 formula {cf}"));
        }
        g0 += 1;
    }
    let hyp = [
        (HypType::One, 1, -1, "1^2,-1^2", PiPoly::monomial(rat(1, 3), 4), rat(1, 1)),
        (HypType::Two, -1, 0, "2,-1^2", PiPoly::monomial(rat(4, 3), 2), rat(1, 1)),
        // counted modulo the hyperelliptic involution in the table
        (HypType::Three, 0, 0, "2,2", PiPoly::monomial(rat(4, 3), 2), rat(1, 2)),
    ];
    for (t, k1, k2, s, expected, factor) in hyp {
        let cf = hyperelliptic_volume(t, k1, k2).map_err(|e| e.to_string())?;
        if cf != expected {
            return Err(format!("type {t:?} ({k1},{k2}) gives {cf}, expected {expected}"));
        }
        let pipe_v = aez(p, &sig(s), PoleConvention::IncludePoles).map_err(|e| e.to_string())?.value();
        if pipe_v != cf.scale(&factor) {
            return Err(format!("Q({s}): pipeline {pipe_v} vs closed form {cf} x {factor}"));
        }
    }
    Ok(format!("{g0} genus-0 strata and 3 hyperelliptic forms exact (type 3 = 2 x table)"))
}

fn criterion5(p: &Pipeline, strata: &[StratumSignature]) -> Outcome {
    for s in strata {
        let v = aez(p, s, PoleConvention::IncludePoles).map_err(|e| e.to_string())?;
        let inv = s.to_profile().invariants().unwrap();
        let (c, k) = v.value().as_monomial().ok_or_else(|| format!("Q({s}) not a monomial"))?;
        if k != 2 * inv.g_eff as i32 || c <= Rational::from_integer(0.into()) {
            return Err(format!("Q({s}) = {} with g_eff {}", v.value(), inv.g_eff));
        }
    }
    Ok(format!("{} volumes are positive rational multiples of π^(2 g_eff)", strata.len()))
}

fn criterion6() -> Outcome {
    let sizes: Vec<usize> = [2, 4, 6, 8, 10].iter().map(|&w| monomial_basis(w, Family::Pillowcase).len()).collect();
    if sizes == [3, 7, 13, 22, 34] {
        Ok(format!("{sizes:?}"))
    } else {
        Err(format!("{sizes:?}"))
    }
}

fn criterion7(p: &Pipeline, rows: &[TableRow]) -> Outcome {
    let fits = p.fit_log();
    if fits.is_empty() {
        return Err("no fits recorded".into());
    }
    if let Some((prof, f)) = fits.iter().find(|(_, f)| f.surplus() < 2) {
        return Err(format!("{prof}: surplus {}", f.surplus()));
    }
    // the printed bracket weight must break criteria 1-3
    let printed = pipe(WeightVariant::Printed);
    let c1 = criterion1(&printed).is_err();
    let c2 = check_values(&printed, &weight6_named()[..1], PoleConvention::IncludePoles).is_err();
    let strata = in_scope(rows, 4);
    let c3 = criterion3(&printed, &strata).is_err();
    if !(c1 && c2 && c3) {
        return Err(format!("printed variant did not fail everywhere: c1 {c1}, c2 {c2}, c3 {c3}"));
    }
    // leaving poles out of the multiplicity factor must break the table match
    let excl = check_values(p, &criterion1_cases()[..1], PoleConvention::ExcludePoles).is_err();
    if !excl {
        return Err("pole-exclusion variant matched the table".into());
    }
    Ok(format!("{} fits, all with surplus >= 2; printed variant and pole exclusion fail as required", fits.len()))
}

fn criterion8() -> Outcome {
    let rows = numeric_gate(&[0.01]);
    let worst = rows.iter().map(|r| r.rel_err).fold(0.0, f64::max);
    if rows.is_empty() || worst >= 1e-6 {
        return Err(format!("worst relative error {worst:e}"));
    }
    Ok(format!("{} generators at h = 0.01, worst relative error {worst:.1e}", rows.len()))
}

fn criterion9(p: &Pipeline) -> Outcome {
    let prof = ProfilePair::new(vec![], vec![1, 1, 1, 1]).unwrap();
    let exact = 2.0 * std::f64::consts::PI.powi(2);
    let err = |d: usize| -> Result<f64, String> {
        let e = estimate_volume_from_counts(p, &prof, d).map_err(|e| e.to_string())?;
        Ok((e.estimate_aez - exact).abs() / exact)
    };
    let (e4, e10) = (err(4)?, err(10)?);
    if e10 < 0.35 && e10 < e4 {
        Ok(format!("Q(-1^4): relative error {e4:.3} at D = 4, {e10:.3} at D = 10"))
    } else {
        Err(format!("relative error {e4:.3} at D = 4, {e10:.3} at D = 10"))
    }
}

fn criterion10() -> Outcome {
    let rep = validate_sum_identities(1_000_000).map_err(|e| e.to_string())?;
    if let Some(c) = rep.checks.iter().find(|c| !c.pass) {
        return Err(format!("{}: error {:e} (tolerance {:e})", c.name, c.error, c.tolerance));
    }
    let sumodd = rep.get("sumodd m=2").ok_or("sumodd missing")?;
    let part = rep.get("partition m=3 j=1").ok_or("partition missing")?;
    if sumodd.error >= 1e-5 || part.error > 0.05 {
        return Err("stated tolerances missed".into());
    }
    let ratio = part.observed / part.expected;
    Ok(format!(
        "{} identities; sumodd m=2 error {:.1e} at N = 10^6; partition ratio {:.4} at N = 200",
        rep.checks.len(),
        sumodd.error,
        ratio.to_f64().unwrap_or(f64::NAN)
    ))
}

fn main() {
    let rows = table();
    let p = pipe(WeightVariant::Frobenius);
    let strata = in_scope(&rows, 6);
    let criteria: Vec<Criterion> = vec![
        ("exact table values, weight <= 4", Box::new(|| criterion1(&p))),
        ("exact table values, weight <= 6", Box::new(|| criterion2(&p, &rows))),
        ("oracle equivalence", Box::new(|| criterion3(&p, &strata))),
        ("closed-form cross-checks", Box::new(|| criterion4(&p, &strata))),
        ("rationality", Box::new(|| criterion5(&p, &strata))),
        ("basis dimensions", Box::new(criterion6)),
        ("fit integrity and negative variants", Box::new(|| criterion7(&p, &rows))),
        ("asymptotic substitution gate", Box::new(criterion8)),
        ("lattice-count estimator", Box::new(|| criterion9(&p))),
        ("sum identity validators", Box::new(criterion10)),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = t.elapsed().as_secs_f64();
        match out {
            Ok(msg) => println!("criterion {:>2} PASS  {name}: {msg} [{secs:.1}s]", i + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {msg} [{secs:.1}s]", i + 1);
            }
        }
    }
    println!("acceptance: {} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
