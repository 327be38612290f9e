use rayon::prelude::*;
use serde::Serialize;

use super::checks::{courant_for_class, screen_geometry, DEFAULT_GEO_TOL};
use super::decomposition::{resolve_adaptive, DEFAULT_GRID, DEFAULT_MAX_GRID, DEFAULT_ZERO_TOL};
use super::eigenfunction::{random_eigenfunction, Eigenfunction};
use crate::error::{Error, Result};
use crate::spectrum::SpectrumTable;

pub const DEFAULT_SWEEP_NORMS: [u64; 10] = [1, 2, 4, 5, 8, 9, 10, 13, 16, 17];
pub const DEFAULT_SWEEP_SEEDS: u64 = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepConfig {
    pub seeds: Vec<u64>,
    pub norms: Vec<u64>,
    pub grid: usize,
    /// Samples whose count changes between N and 2N are retried on doubled
    /// grids up to this size.
    pub max_grid: usize,
    pub zero_tol: f64,
    pub geo_tol: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            seeds: (0..DEFAULT_SWEEP_SEEDS).collect(),
            norms: DEFAULT_SWEEP_NORMS.to_vec(),
            grid: DEFAULT_GRID,
            max_grid: DEFAULT_MAX_GRID,
            zero_tol: DEFAULT_ZERO_TOL,
            geo_tol: DEFAULT_GEO_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSample {
    pub s: u64,
    pub seed: u64,
    pub mu: Option<usize>,
    /// Coarse grid at which the count was stable.
    pub grid: usize,
    pub nu: u64,
    pub last_index: u64,
    pub satisfied: bool,
    pub courant_sharp: bool,
    pub in_hypothesis_domains: usize,
    pub geometry_counterexample: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub samples: usize,
    pub courant_violations: usize,
    /// Samples with μ = ν for a class with ν >= 4.
    pub sharp_hits_nu_ge_4: usize,
    pub unstable: usize,
    pub geometry_counterexamples: usize,
    pub in_hypothesis_domains: usize,
    /// Samples that needed a grid finer than the configured one.
    pub refined: Vec<SweepSample>,
    pub failures: Vec<SweepSample>,
}

impl SweepReport {
    pub fn clean(&self) -> bool {
        self.courant_violations == 0
            && self.sharp_hits_nu_ge_4 == 0
            && self.unstable == 0
            && self.geometry_counterexamples == 0
    }
}

fn run_sample(
    table: &SpectrumTable,
    config: &SweepConfig,
    s: u64,
    seed: u64,
) -> Result<SweepSample> {
    let class = table.class_for_s(s).ok_or(Error::UnknownClass(s))?;
    let u = random_eigenfunction(s, seed)?;
    let mut sample = SweepSample {
        s,
        seed,
        mu: None,
        grid: config.grid,
        nu: class.first_index,
        last_index: class.last_index,
        satisfied: false,
        courant_sharp: false,
        in_hypothesis_domains: 0,
        geometry_counterexample: false,
        error: None,
    };
    match resolve_adaptive(&u, config.grid, config.zero_tol, config.max_grid) {
        Ok(refined) => {
            sample.grid = refined.coarse.grid_size;
            let courant = courant_for_class(&refined.coarse, class);
            let geometry = screen_geometry(&refined, u.eigenvalue(), config.geo_tol);
            sample.mu = Some(courant.mu);
            sample.satisfied = courant.satisfied;
            sample.courant_sharp = courant.courant_sharp;
            sample.in_hypothesis_domains = geometry.in_hypothesis_count();
            sample.geometry_counterexample = geometry.counterexample();
        }
        Err(e @ Error::NotStable { .. }) => sample.error = Some(e.to_string()),
        Err(e) => return Err(e),
    }
    Ok(sample)
}

/// Random eigenfunctions for every (s, seed) pair, screened for the Courant
/// bound, Courant-sharpness and both geometry inequalities.
pub fn run_sweep(config: &SweepConfig) -> Result<SweepReport> {
    let max_s = config.norms.iter().copied().max().unwrap_or(0);
    let table = SpectrumTable::build(max_s)?;
    let jobs: Vec<(u64, u64)> = config
        .norms
        .iter()
        .flat_map(|&s| config.seeds.iter().map(move |&seed| (s, seed)))
        .collect();
    let samples = jobs
        .par_iter()
        .map(|&(s, seed)| run_sample(&table, config, s, seed))
        .collect::<Result<Vec<_>>>()?;

    let mut report = SweepReport {
        samples: samples.len(),
        courant_violations: 0,
        sharp_hits_nu_ge_4: 0,
        unstable: 0,
        geometry_counterexamples: 0,
        in_hypothesis_domains: 0,
        refined: Vec::new(),
        failures: Vec::new(),
    };
    for sample in samples {
        let mut failed = false;
        if sample.error.is_some() {
            report.unstable += 1;
            failed = true;
        } else {
            if !sample.satisfied {
                report.courant_violations += 1;
                failed = true;
            }
            if sample.courant_sharp && sample.nu >= 4 {
                report.sharp_hits_nu_ge_4 += 1;
                failed = true;
            }
            if sample.geometry_counterexample {
                report.geometry_counterexamples += 1;
                failed = true;
            }
        }
        report.in_hypothesis_domains += sample.in_hypothesis_domains;
        if sample.grid > config.grid {
            report.refined.push(sample.clone());
        }
        if failed {
            report.failures.push(sample);
        }
    }
    Ok(report)
}

/// Named eigenfunctions with their exactly known nodal counts.
pub fn catalogue() -> Vec<(String, Eigenfunction, usize)> {
    let mut out = vec![
        ("constant".to_string(), Eigenfunction::constant(), 1),
        ("sin(2πx)".to_string(), Eigenfunction::sine_mode(1, 0), 2),
    ];
    for m in 1..=4 {
        out.push((
            format!("cos(2π·{m}x)"),
            Eigenfunction::cosine_mode(m, 0),
            2 * m as usize,
        ));
    }
    out.push((
        "sin(2πx)·sin(2πy)".to_string(),
        Eigenfunction::sine_product(1, 1).expect("valid product"),
        4,
    ));
    out.push((
        "cos(2π(x+y))".to_string(),
        Eigenfunction::cosine_mode(1, 1),
        2,
    ));
    out
}
