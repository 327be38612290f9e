//! Bessel J0 by its power series and the first positive zero j₀,₁.
//!
//! J0(x) = Σ (-1)^k (x/2)^{2k} / (k!)²
//! J1(x) = Σ (-1)^k (x/2)^{2k+1} / (k! (k+1)!)
//!
//! Terms are accumulated with Neumaier compensated summation. Near x ≈ 2.4 the
//! largest term is below 3, so the zero is resolved to a few ulps.

use std::f64::consts::PI;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest |x| accepted by [`bessel_j0`] and [`bessel_j1`].
pub const MAX_ARGUMENT: f64 = 30.0;

/// Required bound on |J0(j₀,₁)| for the computed zero.
pub const ZERO_TOLERANCE: f64 = 1e-12;

const BRACKET: (f64, f64) = (2.0, 3.0);
const BISECTION_WIDTH: f64 = 1e-14;
const MAX_TERMS: usize = 200;

#[derive(Debug, Default, Clone, Copy)]
struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// A truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    /// Magnitude of the first term that was not added.
    pub first_omitted: f64,
    pub terms: usize,
}

/// Index from which the term magnitudes of the J_order series decrease
/// monotonically. Past it the series is alternating with shrinking terms, so
/// the truncation error is at most the first omitted term.
pub fn monotone_tail_start(x: f64, order: u32) -> usize {
    // |t_{k+1} / t_k| = (x/2)² / ((k+1)(k+1+order)) < 1  once (k+1) > x/2
    let half = (x.abs() / 2.0).ceil() as usize;
    half.saturating_sub(order as usize)
}

fn series(x: f64, order: u32) -> Result<SeriesValue> {
    if x.is_nan() || x.abs() > MAX_ARGUMENT {
        return Err(Error::BesselOutOfRange {
            x,
            max: MAX_ARGUMENT,
        });
    }
    let q = (x / 2.0) * (x / 2.0);
    let mut term = if order == 0 { 1.0 } else { x / 2.0 };
    let tail = monotone_tail_start(x, order);
    let mut acc = NeumaierSum::default();
    let mut k = 0usize;
    loop {
        acc.add(term);
        let next = -term * q / ((k as f64 + 1.0) * (k as f64 + 1.0 + f64::from(order)));
        k += 1;
        let partial = acc.value();
        if k > tail && next.abs() < 1e-16 * (1.0 + partial.abs()) || k >= MAX_TERMS {
            return Ok(SeriesValue {
                value: partial,
                first_omitted: next.abs(),
                terms: k,
            });
        }
        term = next;
    }
}

pub fn bessel_j0_series(x: f64) -> Result<SeriesValue> {
    series(x, 0)
}

pub fn bessel_j0(x: f64) -> Result<f64> {
    series(x, 0).map(|s| s.value)
}

pub fn bessel_j1(x: f64) -> Result<f64> {
    series(x, 1).map(|s| s.value)
}

/// The first positive zero of J0 with its verification data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselZero {
    pub value: f64,
    /// Midpoint of the final bisection bracket, before Newton polishing.
    pub bisection_value: f64,
    /// |J0(value)|
    pub residual: f64,
    pub tolerance: f64,
}

/// Bisection on [2, 3] down to width 1e-14, then Newton with J0' = -J1.
pub fn compute_j01() -> Result<BesselZero> {
    let (mut lo, mut hi) = BRACKET;
    let f_lo = bessel_j0(lo)?;
    let f_hi = bessel_j0(hi)?;
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange {
            lo: BRACKET.0,
            hi: BRACKET.1,
        });
    }
    while hi - lo > BISECTION_WIDTH {
        let mid = 0.5 * (lo + hi);
        let f_mid = bessel_j0(mid)?;
        if f_mid == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let bisection_value = 0.5 * (lo + hi);

    let mut x = bisection_value;
    for _ in 0..8 {
        let step = bessel_j0(x)? / bessel_j1(x)?;
        let next = x + step;
        if next == x {
            break;
        }
        x = next;
        if step.abs() < 4.0 * f64::EPSILON {
            break;
        }
    }

    let residual = bessel_j0(x)?.abs();
    if residual > ZERO_TOLERANCE || !(2.40 < x && x < 2.41) {
        return Err(Error::BadBesselZero { value: x, residual });
    }
    Ok(BesselZero {
        value: x,
        bisection_value,
        residual,
        tolerance: ZERO_TOLERANCE,
    })
}

/// j₀,₁, computed once per process.
pub fn j01() -> BesselZero {
    static ZERO: OnceLock<BesselZero> = OnceLock::new();
    *ZERO.get_or_init(|| compute_j01().expect("J0 series has a zero on [2, 3]"))
}

/// π j₀,₁², the Faber-Krahn product λ₁(Ω)·A(Ω) of a planar disk.
pub fn faber_krahn_constant() -> f64 {
    static VALUE: OnceLock<f64> = OnceLock::new();
    *VALUE.get_or_init(|| {
        let j = j01().value;
        PI * j * j
    })
}

/// j₀,₁² / (4π): the bound a ratio λ/(4π²ν) must reach for a Courant-sharp λ.
pub fn ratio_bound() -> f64 {
    faber_krahn_constant() / (4.0 * PI * PI)
}
