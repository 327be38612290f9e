//! Empirical screens on grid decompositions: the Courant bound, and the
//! Faber-Krahn and isoperimetric inequalities for domains of area <= 1/π.
//!
//! The Faber-Krahn screen uses λ₁(D) = λ for a nodal domain D of an
//! eigenfunction with eigenvalue λ; no Dirichlet problem is solved.

use std::f64::consts::{FRAC_1_PI, PI};

use serde::Serialize;

use super::decomposition::{resolve, NodalDecomposition, Refined};
use super::eigenfunction::Eigenfunction;
use crate::error::{Error, Result};
use crate::special_functions::faber_krahn_constant;
use crate::spectrum::{EigenvalueClass, SpectrumTable};

/// Relative allowance for grid discretization error at the default grid.
pub const DEFAULT_GEO_TOL: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CourantCheck {
    pub s: u64,
    pub mu: usize,
    pub nu: u64,
    pub last_index: u64,
    /// μ <= last index of the eigenvalue's class.
    pub satisfied: bool,
    /// μ = ν.
    pub courant_sharp: bool,
}

pub fn courant_for_class(dec: &NodalDecomposition, class: &EigenvalueClass) -> CourantCheck {
    let mu = dec.mu as u64;
    CourantCheck {
        s: class.s,
        mu: dec.mu,
        nu: class.first_index,
        last_index: class.last_index,
        satisfied: mu <= class.last_index,
        courant_sharp: mu == class.first_index,
    }
}

pub fn check_courant(
    u: &Eigenfunction,
    table: &SpectrumTable,
    grid: usize,
    zero_tol: f64,
) -> Result<CourantCheck> {
    let class = table.class_for_s(u.s()).ok_or(Error::UnknownClass(u.s()))?;
    let refined = resolve(u, grid, zero_tol)?;
    Ok(courant_for_class(&refined.coarse, class))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ScreenStatus {
    Pass,
    Fail,
    /// Area above 1/π: the inequality makes no claim.
    OutOfHypothesis,
}

impl ScreenStatus {
    fn from_test(area: f64, holds: bool) -> Self {
        if area > FRAC_1_PI {
            Self::OutOfHypothesis
        } else if holds {
            Self::Pass
        } else {
            Self::Fail
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FaberKrahnCheck {
    pub domain_id: usize,
    pub area: f64,
    /// λ·A(D)
    pub product: f64,
    pub status: ScreenStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IsoperimetricCheck {
    pub domain_id: usize,
    pub area: f64,
    /// perimeter_estimate²
    pub lhs: f64,
    /// 4π·area
    pub rhs: f64,
    pub status: ScreenStatus,
}

pub fn check_faber_krahn(dec: &NodalDecomposition, lam: f64, geo_tol: f64) -> Vec<FaberKrahnCheck> {
    let bound = faber_krahn_constant() * (1.0 - geo_tol);
    dec.domains
        .iter()
        .map(|d| {
            let product = lam * d.area;
            FaberKrahnCheck {
                domain_id: d.id,
                area: d.area,
                product,
                status: ScreenStatus::from_test(d.area, product >= bound),
            }
        })
        .collect()
}

pub fn check_isoperimetric(dec: &NodalDecomposition, geo_tol: f64) -> Vec<IsoperimetricCheck> {
    dec.domains
        .iter()
        .map(|d| {
            let lhs = d.perimeter_estimate * d.perimeter_estimate;
            let rhs = 4.0 * PI * d.area;
            IsoperimetricCheck {
                domain_id: d.id,
                area: d.area,
                lhs,
                rhs,
                status: ScreenStatus::from_test(d.area, lhs >= rhs * (1.0 - geo_tol)),
            }
        })
        .collect()
}

/// Both geometry screens at N and, when something fails there, at 2N with
/// half the tolerance. Only a failure at both resolutions is a counterexample.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GeometryScreen {
    pub geo_tol: f64,
    pub faber_krahn: Vec<FaberKrahnCheck>,
    pub isoperimetric: Vec<IsoperimetricCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined_faber_krahn: Option<Vec<FaberKrahnCheck>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub refined_isoperimetric: Option<Vec<IsoperimetricCheck>>,
    pub faber_krahn_counterexample: bool,
    pub isoperimetric_counterexample: bool,
}

impl GeometryScreen {
    pub fn counterexample(&self) -> bool {
        self.faber_krahn_counterexample || self.isoperimetric_counterexample
    }

    /// Domains with area <= 1/π at the coarse resolution.
    pub fn in_hypothesis_count(&self) -> usize {
        self.faber_krahn
            .iter()
            .filter(|c| c.status != ScreenStatus::OutOfHypothesis)
            .count()
    }
}

fn any_fail<'a>(statuses: impl IntoIterator<Item = &'a ScreenStatus>) -> bool {
    statuses.into_iter().any(|s| *s == ScreenStatus::Fail)
}

pub fn screen_geometry(refined: &Refined, lam: f64, geo_tol: f64) -> GeometryScreen {
    let faber_krahn = check_faber_krahn(&refined.coarse, lam, geo_tol);
    let isoperimetric = check_isoperimetric(&refined.coarse, geo_tol);
    let fk_fail = any_fail(faber_krahn.iter().map(|c| &c.status));
    let iso_fail = any_fail(isoperimetric.iter().map(|c| &c.status));

    let refined_faber_krahn = fk_fail.then(|| check_faber_krahn(&refined.fine, lam, geo_tol / 2.0));
    let refined_isoperimetric = iso_fail.then(|| check_isoperimetric(&refined.fine, geo_tol / 2.0));

    GeometryScreen {
        geo_tol,
        faber_krahn_counterexample: refined_faber_krahn
            .as_ref()
            .is_some_and(|v| any_fail(v.iter().map(|c| &c.status))),
        isoperimetric_counterexample: refined_isoperimetric
            .as_ref()
            .is_some_and(|v| any_fail(v.iter().map(|c| &c.status))),
        faber_krahn,
        isoperimetric,
        refined_faber_krahn,
        refined_isoperimetric,
    }
}
