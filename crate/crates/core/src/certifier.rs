//! Courant-sharp certification for the eigenvalues of the flat torus.
//!
//! If λ has an eigenfunction with k >= 4 nodal domains then some domain has
//! area <= 1/k <= 1/π, and Faber-Krahn gives λ >= π j₀,₁² k. For a
//! Courant-sharp λ this reads π j₀,₁² ν(λ) <= λ. Two ways to refute it:
//!
//! * ν >= 50: the counting-function bound λ_k <= (4 + 2√(4 + π(k+3)))² is
//!   already below π j₀,₁² k for every k above ~49.597.
//! * 4 <= ν < 50: compare λ/(4π²ν) = s/ν with j₀,₁²/(4π) directly.
//!
//! What survives (ν = 1 and ν = 2) is confirmed by exhibiting an eigenfunction
//! whose grid nodal count equals ν.

use std::f64::consts::PI;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::nodal_lab::{resolve, Eigenfunction, DEFAULT_GRID, DEFAULT_ZERO_TOL};
use crate::special_functions::{faber_krahn_constant, j01, ratio_bound};
use crate::spectrum::{EigenvalueClass, SpectrumTable};

/// ν values from here on are excluded by the counting-function bound.
pub const THRESHOLD_INDEX: u64 = 50;

/// Relative gap below which a ratio comparison is reported as inconclusive.
pub const RATIO_TIE_TOLERANCE: f64 = 1e-12;

/// π j₀,₁² k: the smallest eigenvalue that can carry k >= 4 nodal domains.
pub fn pleijel_lower_bound(k: u64) -> Result<f64> {
    if k < 4 {
        return Err(Error::TooFewDomains(k));
    }
    Ok(faber_krahn_constant() * k as f64)
}

/// (4 + 2√(4 + π(k+3)))², an upper bound for λ_k.
pub fn upper_bound_lambda_k(k: u64) -> f64 {
    let root = (4.0 + PI * (k as f64 + 3.0)).sqrt();
    (4.0 + 2.0 * root).powi(2)
}

/// The index beyond which `upper_bound_lambda_k(k) < pleijel_lower_bound(k)`.
pub fn threshold_k() -> f64 {
    let j = j01().value;
    let j2 = j * j;
    let excess = j2 - 4.0;
    let numerator = 4.0 * j + 2.0 * (4.0 * j2 + 3.0 * PI * excess).sqrt();
    numerator * numerator / (PI * excess * excess)
}

/// ν values of distinct eigenvalues with 4 <= ν < 50, read off the table.
pub fn candidate_indices(table: &SpectrumTable) -> Result<Vec<u64>> {
    let needed = THRESHOLD_INDEX - 1;
    if table.last_index() < needed {
        return Err(Error::TableTooSmall {
            covered: table.last_index(),
            needed,
        });
    }
    Ok(table
        .classes
        .iter()
        .map(|c| c.first_index)
        .filter(|&nu| (4..THRESHOLD_INDEX).contains(&nu))
        .collect())
}

/// λ_k / (4kπ²) = s/k, exact.
pub fn ratio(k: u64) -> Result<Ratio<u64>> {
    if k == 0 {
        return Err(Error::ZeroIndex);
    }
    let class = crate::spectrum::lambda_k(k)?;
    Ok(Ratio::new(class.s, k))
}

/// Decimal rendering of a non-negative rational, rounded half up.
pub fn format_ratio(r: Ratio<u64>, decimals: u32) -> String {
    let scale = 10u128.pow(decimals);
    let (num, den) = (u128::from(*r.numer()), u128::from(*r.denom()));
    let scaled = (2 * num * scale + den) / (2 * den);
    let int = scaled / scale;
    let frac = scaled % scale;
    if decimals == 0 {
        int.to_string()
    } else {
        format!("{int}.{frac:0width$}", width = decimals as usize)
    }
}

fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    CourantSharpConfirmed,
    ExcludedByThreshold,
    ExcludedByRatio,
    RequiresNodalCheck,
    /// The ratio equals the bound to within rounding.
    Inconclusive,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::CourantSharpConfirmed => "courant-sharp",
            Verdict::ExcludedByThreshold => "excluded (threshold)",
            Verdict::ExcludedByRatio => "excluded (ratio)",
            Verdict::RequiresNodalCheck => "needs nodal witness",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// An eigenfunction whose grid nodal count was compared with ν.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub description: String,
    pub eigenfunction: Eigenfunction,
    pub grid_size: usize,
    pub mu: usize,
    pub nu: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationVerdict {
    /// ν of the eigenvalue.
    pub k: u64,
    pub lam_over_4pi2: u64,
    pub nu: u64,
    pub last_index: u64,
    pub verdict: Verdict,
    /// s/ν as a real number.
    pub ratio: Option<f64>,
    /// s/ν as a reduced fraction.
    pub ratio_exact: Option<String>,
    /// The bound the verdict was measured against: the λ_ν upper bound for
    /// threshold exclusions, j₀,₁²/(4π) for ratio exclusions.
    pub bound_used: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Pure inequality verdict for one eigenvalue class.
pub fn classify(class: &EigenvalueClass) -> CertificationVerdict {
    let nu = class.first_index;
    let exact = Ratio::new(class.s, nu);
    let mut out = CertificationVerdict {
        k: nu,
        lam_over_4pi2: class.s,
        nu,
        last_index: class.last_index,
        verdict: Verdict::RequiresNodalCheck,
        ratio: Some(ratio_to_f64(exact)),
        ratio_exact: Some(exact.to_string()),
        bound_used: None,
        witness: None,
    };

    if nu as f64 > threshold_k() {
        let upper = upper_bound_lambda_k(nu);
        out.bound_used = Some(upper);
        let lower = pleijel_lower_bound(nu).expect("nu above threshold is at least 4");
        out.verdict = if upper < lower {
            Verdict::ExcludedByThreshold
        } else {
            Verdict::Inconclusive
        };
    } else if nu >= 4 {
        let bound = ratio_bound();
        let value = ratio_to_f64(exact);
        out.bound_used = Some(bound);
        out.verdict = ratio_verdict(value, bound);
    }
    out
}

fn ratio_verdict(value: f64, bound: f64) -> Verdict {
    if (value - bound).abs() <= RATIO_TIE_TOLERANCE * bound {
        Verdict::Inconclusive
    } else if value < bound {
        Verdict::ExcludedByRatio
    } else {
        Verdict::RequiresNodalCheck
    }
}

/// Verdict for the eigenvalue λ_k, k >= 1 arbitrary.
pub fn verdict_for_index(k: u64) -> Result<CertificationVerdict> {
    let table = SpectrumTable::covering_index(k)?;
    let class = table.lambda_k(k).expect("covering table reaches k");
    Ok(classify(class))
}

fn witness_candidate(class: &EigenvalueClass) -> (String, Eigenfunction) {
    match class.representatives.first() {
        Some(r) if class.s > 0 => {
            let (m, n) = (i64::from(r.m), i64::from(r.n));
            (
                format!("sin(2π({m}x + {n}y))"),
                Eigenfunction::sine_mode(m, n),
            )
        }
        _ => ("constant".to_string(), Eigenfunction::constant()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub grid: usize,
    pub zero_tol: f64,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            grid: DEFAULT_GRID,
            zero_tol: DEFAULT_ZERO_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RatioRow {
    pub k: u64,
    pub ratio: f64,
    pub exact: String,
    /// Four decimals, rounded half up from the exact fraction.
    pub rendered: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IndexVerdict {
    pub k: u64,
    pub nu: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CertificationReport {
    /// One entry per distinct eigenvalue with ν <= 50.
    pub verdicts: Vec<CertificationVerdict>,
    /// Every index k <= 50 with the verdict of the eigenvalue λ_k.
    pub index_view: Vec<IndexVerdict>,
    pub threshold_k: f64,
    pub ratio_bound: f64,
    pub ratio_table: Vec<RatioRow>,
    pub courant_sharp_indices: Vec<u64>,
}

impl CertificationReport {
    pub fn verdict_for_nu(&self, nu: u64) -> Option<&CertificationVerdict> {
        self.verdicts.iter().find(|v| v.nu == nu)
    }

    pub fn unresolved(&self) -> impl Iterator<Item = &CertificationVerdict> {
        self.verdicts.iter().filter(|v| {
            matches!(
                v.verdict,
                Verdict::RequiresNodalCheck | Verdict::Inconclusive
            )
        })
    }
}

pub fn certify_all() -> Result<CertificationReport> {
    certify_with(CertifyOptions::default())
}

pub fn certify_with(options: CertifyOptions) -> Result<CertificationReport> {
    let mut table = SpectrumTable::build(16)?;
    while table
        .classes
        .last()
        .is_none_or(|c| c.first_index < THRESHOLD_INDEX)
    {
        table = SpectrumTable::build(table.cutoff_s * 2)?;
    }

    let mut verdicts = Vec::new();
    for class in table
        .classes
        .iter()
        .filter(|c| c.first_index <= THRESHOLD_INDEX)
    {
        let mut verdict = classify(class);
        if verdict.verdict == Verdict::RequiresNodalCheck {
            let (description, u) = witness_candidate(class);
            let refined = resolve(&u, options.grid, options.zero_tol)?;
            let mu = refined.coarse.mu;
            if mu as u64 == class.first_index {
                verdict.verdict = Verdict::CourantSharpConfirmed;
            }
            verdict.witness = Some(Witness {
                description,
                eigenfunction: u,
                grid_size: options.grid,
                mu,
                nu: class.first_index,
            });
        }
        verdicts.push(verdict);
    }

    let candidates = candidate_indices(&table)?;
    let ratio_table = candidates
        .iter()
        .map(|&k| {
            let s = table.lambda_k(k).expect("candidate is in the table").s;
            let r = Ratio::new(s, k);
            RatioRow {
                k,
                ratio: ratio_to_f64(r),
                exact: r.to_string(),
                rendered: format_ratio(r, 4),
            }
        })
        .collect();

    let mut index_view = Vec::new();
    let mut courant_sharp_indices = Vec::new();
    for v in &verdicts {
        for k in v.nu..=v.last_index.min(THRESHOLD_INDEX) {
            index_view.push(IndexVerdict {
                k,
                nu: v.nu,
                verdict: v.verdict,
            });
        }
        if v.verdict == Verdict::CourantSharpConfirmed {
            courant_sharp_indices.extend(v.nu..=v.last_index);
        }
    }

    Ok(CertificationReport {
        verdicts,
        index_view,
        threshold_k: threshold_k(),
        ratio_bound: ratio_bound(),
        ratio_table,
        courant_sharp_indices,
    })
}
