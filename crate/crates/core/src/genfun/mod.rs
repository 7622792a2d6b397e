//! Generating functions `Z'`, `Z°` for pillowcase and torus covers, their
//! quasi-modular fits, and the asymptotics used for volumes.

pub mod decompose;
pub mod method2;
pub mod pillow;

use std::sync::Arc;

use dashmap::DashMap;

use crate::cache::DiskCache;
use crate::error::{Error, Result};
use crate::exact::rational::{self, int};
use crate::exact::{HLaurent, QSeries};
use crate::exec::Exec;
use crate::partitions::WeightVariant;
use crate::quasimodular::{fit_report, fit_terms, Family, Fit, QMPolynomial};
use crate::strata::ProfilePair;

pub use decompose::{all_decompositions, decompositions, mobius_expansion, Decomposition, Part};
pub use pillow::{z_empty, z_empty_abelian, zprime_abelian_series, zprime_series};

#[derive(Clone, Debug)]
pub struct PipelineConfig {
    /// Largest `w(μ, ν)` the pipeline will attempt.
    pub cap: u32,
    pub variant: WeightVariant,
    pub exec: Exec,
    pub cache: Option<DiskCache>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self { cap: 6, variant: WeightVariant::default(), exec: Exec::default(), cache: None }
    }
}

/// Memoizing driver for the character-sum pipeline.
#[derive(Debug, Default)]
pub struct Pipeline {
    cfg: PipelineConfig,
    zprime: DashMap<ProfilePair, Arc<Fit>>,
    zconn: DashMap<ProfilePair, QMPolynomial>,
    ab_conn: DashMap<Vec<u32>, QMPolynomial>,
}

fn sorted_desc(mu: &[u32]) -> Vec<u32> {
    let mut m = mu.to_vec();
    m.sort_unstable_by(|a, b| b.cmp(a));
    m
}

/// Set partitions of `0..n` (blocks in order of their smallest element).
fn label_partitions(n: usize) -> Vec<Vec<Vec<usize>>> {
    fn rec(i: usize, n: usize, cur: &mut Vec<Vec<usize>>, out: &mut Vec<Vec<Vec<usize>>>) {
        if i == n {
            out.push(cur.clone());
            return;
        }
        for b in 0..cur.len() {
            cur[b].push(i);
            rec(i + 1, n, cur, out);
            cur[b].pop();
        }
        cur.push(vec![i]);
        rec(i + 1, n, cur, out);
        cur.pop();
    }
    let mut out = Vec::new();
    rec(0, n, &mut Vec::new(), &mut out);
    out
}

impl Pipeline {
    pub fn new(cfg: PipelineConfig) -> Self {
        Self { cfg, ..Self::default() }
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.cfg
    }

    pub fn check_weight(&self, weight: u32) -> Result<()> {
        if weight > self.cfg.cap {
            return Err(Error::WeightAboveCap { weight, cap: self.cfg.cap });
        }
        Ok(())
    }

    /// `Z'` to `prec` terms in `x = q²`, through the disk cache when configured.
    pub fn zprime_series(&self, p: &ProfilePair, prec: usize) -> Result<QSeries> {
        let p = p.canonical();
        let key = format!("zprime-{}-{}-{}", self.cfg.variant, p, prec);
        if let Some(cache) = &self.cfg.cache {
            if let Some(strings) = cache.get::<Vec<String>>(&key) {
                if let Ok(c) = strings.iter().map(|s| rational::parse(s)).collect::<Result<Vec<_>>>() {
                    if c.len() == prec {
                        return Ok(QSeries::from_coeffs(c));
                    }
                }
            }
        }
        let s = zprime_series(&p, prec, self.cfg.variant, self.cfg.exec)?;
        if let Some(cache) = &self.cfg.cache {
            let strings: Vec<String> = s.coeffs().iter().map(rational::format).collect();
            // a cache that cannot be written is not an error
            let _ = cache.put(&key, &strings);
        }
        Ok(s)
    }

    /// Fit of `Z'` at weight `w(μ, ν)` with two surplus coefficients.
    pub fn zprime_fit(&self, p: &ProfilePair) -> Result<Arc<Fit>> {
        let p = p.canonical();
        if let Some(f) = self.zprime.get(&p) {
            return Ok(f.clone());
        }
        let w = p.weight();
        self.check_weight(w)?;
        let series = self.zprime_series(&p, fit_terms(w, Family::Pillowcase))?;
        let fit = Arc::new(fit_report(&series, w, Family::Pillowcase)?);
        self.zprime.insert(p, fit.clone());
        Ok(fit)
    }

    pub fn zprime_poly(&self, p: &ProfilePair) -> Result<QMPolynomial> {
        Ok(self.zprime_fit(p)?.poly.clone())
    }

    /// `Z° = Z' - Σ_D a(D) Π Z°(parts)`, as a polynomial.
    pub fn zconnected_poly(&self, p: &ProfilePair) -> Result<QMPolynomial> {
        let p = p.canonical();
        if let Some(z) = self.zconn.get(&p) {
            return Ok(z.clone());
        }
        let mut z = self.zprime_poly(&p)?;
        for d in decompositions(&p) {
            let mut prod = QMPolynomial::constant(Family::Pillowcase, d.weight.clone());
            for part in &d.parts {
                prod = prod.mul(&self.zconnected_poly(&part.profile)?);
            }
            z = z.sub(&prod);
        }
        self.zconn.insert(p, z.clone());
        Ok(z)
    }

    /// `Z°` to `prec` terms straight from the character sums, no fitting.
    pub fn zconnected_series(&self, p: &ProfilePair, prec: usize) -> Result<QSeries> {
        let p = p.canonical();
        let mut z = self.zprime_series(&p, prec)?;
        for d in decompositions(&p) {
            let mut prod = QSeries::constant(d.weight.clone(), prec);
            for part in &d.parts {
                prod = prod.mul(&self.zconnected_series(&part.profile, prec)?);
            }
            z = &z - &prod;
        }
        Ok(z)
    }

    pub fn zprime_abelian_series(&self, mu: &[u32], prec: usize) -> Result<QSeries> {
        zprime_abelian_series(&sorted_desc(mu), prec, self.cfg.exec)
    }

    /// Connected torus covers, by inversion over set partitions of the labels.
    pub fn zconnected_abelian_series(&self, mu: &[u32], prec: usize) -> Result<QSeries> {
        let mu = sorted_desc(mu);
        if mu.is_empty() {
            return Ok(QSeries::zero(prec));
        }
        let mut z = self.zprime_abelian_series(&mu, prec)?;
        for blocks in label_partitions(mu.len()) {
            if blocks.len() < 2 {
                continue;
            }
            let mut prod = QSeries::one(prec);
            for b in &blocks {
                let sub: Vec<u32> = b.iter().map(|&i| mu[i]).collect();
                prod = prod.mul(&self.zconnected_abelian_series(&sub, prec)?);
            }
            z = &z - &prod;
        }
        Ok(z)
    }

    /// Fit of the connected torus function at weight `|μ| + l(μ)`.
    pub fn zconnected_abelian_poly(&self, mu: &[u32]) -> Result<QMPolynomial> {
        let mu = sorted_desc(mu);
        if let Some(z) = self.ab_conn.get(&mu) {
            return Ok(z.clone());
        }
        let w = mu.iter().sum::<u32>() + mu.len() as u32;
        let series = self.zconnected_abelian_series(&mu, fit_terms(w, Family::Abelian))?;
        let poly = fit_report(&series, w, Family::Abelian)?.poly;
        self.ab_conn.insert(mu, poly.clone());
        Ok(poly)
    }

    /// Asymptotics of `Z°(μ, ∅) - 2^{l(μ)-1} Z°_ab(μ; q²)`.
    pub fn quad_subtraction_laurent(&self, mu: &[u32]) -> Result<HLaurent> {
        if mu.is_empty() {
            return Err(Error::InvalidProfile("no even zeros to subtract".into()));
        }
        let p = ProfilePair::new(mu.to_vec(), Vec::new())?;
        let total = self.zconnected_poly(&p)?.substitute_asymptotics();
        let ab = self.zconnected_abelian_poly(mu)?.substitute_asymptotics();
        let factor = int(1i64 << (mu.len() - 1));
        Ok(&total - &ab.scale(&factor))
    }

    /// Asymptotics of the connected, purely quadratic generating function.
    pub fn connected_laurent(&self, p: &ProfilePair) -> Result<HLaurent> {
        if p.nu().is_empty() && !p.mu().is_empty() {
            self.quad_subtraction_laurent(p.mu())
        } else {
            Ok(self.zconnected_poly(p)?.substitute_asymptotics())
        }
    }

    /// Every `Z'` fit made so far, ordered by profile.
    pub fn fit_log(&self) -> Vec<(ProfilePair, Arc<Fit>)> {
        let mut out: Vec<_> = self.zprime.iter().map(|e| (e.key().clone(), e.value().clone())).collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Drops all memoized results.
    pub fn clear(&self) {
        self.zprime.clear();
        self.zconn.clear();
        self.ab_conn.clear();
    }
}

/// Recombines connected series over all decompositions; equals `Z'`.
pub fn recombine(p: &ProfilePair, connected: &dyn Fn(&ProfilePair) -> Result<QSeries>, prec: usize) -> Result<QSeries> {
    let mut z = QSeries::zero(prec);
    for d in all_decompositions(&p.canonical()) {
        let mut prod = QSeries::constant(d.weight.clone(), prec);
        for part in &d.parts {
            prod = prod.mul(&connected(&part.profile)?);
        }
        z = &z + &prod;
    }
    Ok(z)
}
