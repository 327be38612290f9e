//! Spectrum of the Laplacian on the flat torus (R/Z)^2.
//!
//! Every eigenvalue has the form 4π²s where s = m² + n² is a sum of two
//! squares. All bookkeeping is done on the integer norm `s`; the real value
//! 4π²s is only derived for display and for the real-valued bounds.
//!
//! Representatives of a class are the pairs (m, n) with m, n >= 0 and
//! m² + n² = s, listed with m descending (so n ascending), e.g. `(2,1), (1,2)`.

use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{Error, Result};

/// 4π², the eigenvalue of a unit-norm frequency vector.
pub const FOUR_PI_SQ: f64 = 4.0 * PI * PI;

/// Largest `cutoff_s` accepted by [`SpectrumTable::build`].
pub const MAX_CUTOFF_S: u64 = 4_000_000;

/// Distance to the nearest integer (in units of 4π²) below which a spectral
/// parameter is snapped onto that integer.
pub const SNAP_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct LatticeIndex {
    pub m: u32,
    pub n: u32,
}

impl LatticeIndex {
    pub fn new(m: u32, n: u32) -> Self {
        Self { m, n }
    }

    pub fn norm(&self) -> u64 {
        let (m, n) = (u64::from(self.m), u64::from(self.n));
        m * m + n * n
    }
}

/// Dimension of the eigenspace E_{m,n}: 1 for (0,0), 2 on an axis, 4 otherwise.
pub fn multiplicity_of(idx: LatticeIndex) -> u64 {
    match (idx.m, idx.n) {
        (0, 0) => 1,
        (0, _) | (_, 0) => 2,
        _ => 4,
    }
}

/// One distinct eigenvalue 4π²s together with its position in the
/// multiplicity-counted ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EigenvalueClass {
    pub s: u64,
    pub representatives: Vec<LatticeIndex>,
    pub multiplicity: u64,
    /// ν(λ): the smallest k with λ_k = λ.
    pub first_index: u64,
    pub last_index: u64,
}

impl EigenvalueClass {
    pub fn value(&self) -> f64 {
        FOUR_PI_SQ * self.s as f64
    }

    pub fn contains_index(&self, k: u64) -> bool {
        (self.first_index..=self.last_index).contains(&k)
    }
}

/// ν(λ) of a class.
pub fn nu_of(class: &EigenvalueClass) -> u64 {
    class.first_index
}

/// A spectral parameter λ, held in units of 4π².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lambda {
    s_units: f64,
    floor_s: u64,
}

impl Lambda {
    /// λ = 4π²·s exactly.
    pub fn from_s(s: u64) -> Self {
        Self {
            s_units: s as f64,
            floor_s: s,
        }
    }

    /// λ = 4π²·x for real x >= 0; x within [`SNAP_TOLERANCE`] of an integer is
    /// snapped onto it.
    pub fn from_s_units(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidLambda(x));
        }
        let nearest = x.round();
        if (x - nearest).abs() <= SNAP_TOLERANCE {
            return Ok(Self::from_s(nearest as u64));
        }
        Ok(Self {
            s_units: x,
            floor_s: x.floor() as u64,
        })
    }

    /// λ given in absolute units.
    pub fn from_absolute(lam: f64) -> Result<Self> {
        if !lam.is_finite() || lam < 0.0 {
            return Err(Error::InvalidLambda(lam));
        }
        Self::from_s_units(lam / FOUR_PI_SQ)
    }

    pub fn s_units(&self) -> f64 {
        self.s_units
    }

    /// floor(λ / 4π²).
    pub fn floor_s(&self) -> u64 {
        self.floor_s
    }

    pub fn value(&self) -> f64 {
        FOUR_PI_SQ * self.s_units
    }
}

/// n(λ) = #{(m,n) ∈ ℕ² : 4π²(m²+n²) <= λ}.
pub fn lattice_count(lam: Lambda) -> u64 {
    let t = lam.floor_s();
    (0..=t.isqrt()).map(|m| (t - m * m).isqrt() + 1).sum()
}

/// N(λ) = 4 n(λ) - 4 floor(√λ / 2π) - 3.
pub fn counting_function_exact(lam: Lambda) -> u64 {
    // floor(√λ / 2π) = floor(√(λ/4π²)) = isqrt(floor(λ/4π²))
    let axis = lam.floor_s().isqrt();
    4 * lattice_count(lam) - 4 * axis - 3
}

/// λ/(4π) - 2√λ/π - 3, a lower bound for N(λ).
pub fn weyl_lower_bound(lam: Lambda) -> f64 {
    let value = lam.value();
    value / (4.0 * PI) - 2.0 * value.sqrt() / PI - 3.0
}

/// λ/(16π), a lower bound for n(λ).
pub fn lattice_lower_bound(lam: Lambda) -> f64 {
    lam.value() / (16.0 * PI)
}

/// Ordered list of distinct eigenvalues with s <= `cutoff_s`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpectrumTable {
    pub cutoff_s: u64,
    pub classes: Vec<EigenvalueClass>,
}

impl SpectrumTable {
    pub fn build(cutoff_s: u64) -> Result<Self> {
        if cutoff_s > MAX_CUTOFF_S {
            return Err(Error::CutoffTooLarge {
                requested: cutoff_s,
                bound: MAX_CUTOFF_S,
            });
        }

        let mut points = Vec::new();
        for m in 0..=cutoff_s.isqrt() {
            let rest = cutoff_s - m * m;
            for n in 0..=rest.isqrt() {
                points.push(LatticeIndex::new(m as u32, n as u32));
            }
        }
        points.sort_by(|a, b| a.norm().cmp(&b.norm()).then(b.m.cmp(&a.m)));

        let mut classes: Vec<EigenvalueClass> = Vec::new();
        let mut next_index = 1;
        for chunk in points.chunk_by(|a, b| a.norm() == b.norm()) {
            let multiplicity: u64 = chunk.iter().copied().map(multiplicity_of).sum();
            classes.push(EigenvalueClass {
                s: chunk[0].norm(),
                representatives: chunk.to_vec(),
                multiplicity,
                first_index: next_index,
                last_index: next_index + multiplicity - 1,
            });
            next_index += multiplicity;
        }

        Ok(Self { cutoff_s, classes })
    }

    /// Smallest table whose last index reaches `k`, doubling the cutoff.
    pub fn covering_index(k: u64) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroIndex);
        }
        let mut cutoff = 16;
        loop {
            let table = Self::build(cutoff)?;
            if table.last_index() >= k {
                return Ok(table);
            }
            cutoff = cutoff.saturating_mul(2);
        }
    }

    /// Number of eigenvalues counted with multiplicity.
    pub fn last_index(&self) -> u64 {
        self.classes.last().map_or(0, |c| c.last_index)
    }

    pub fn class_for_s(&self, s: u64) -> Option<&EigenvalueClass> {
        self.classes
            .binary_search_by_key(&s, |c| c.s)
            .ok()
            .map(|i| &self.classes[i])
    }

    /// The class holding λ_k, if the table reaches index `k`.
    pub fn lambda_k(&self, k: u64) -> Option<&EigenvalueClass> {
        if k == 0 {
            return None;
        }
        let pos = self.classes.partition_point(|c| c.last_index < k);
        self.classes.get(pos)
    }

    /// Σ multiplicities over classes with s <= `s_max`.
    pub fn cumulative_up_to(&self, s_max: u64) -> u64 {
        let pos = self.classes.partition_point(|c| c.s <= s_max);
        if pos == 0 {
            0
        } else {
            self.classes[pos - 1].last_index
        }
    }

    /// CSV with header `s,representatives,multiplicity,cumulative`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,representatives,multiplicity,cumulative\n");
        for class in &self.classes {
            let reps = class
                .representatives
                .iter()
                .map(|r| format!("{},{}", r.m, r.n))
                .collect::<Vec<_>>()
                .join(";");
            writeln!(
                out,
                "{},\"{}\",{},{}",
                class.s, reps, class.multiplicity, class.last_index
            )
            .expect("writing to a String cannot fail");
        }
        out
    }
}

/// λ_k with multiplicity, as the owning class. Builds a large enough table.
pub fn lambda_k(k: u64) -> Result<EigenvalueClass> {
    let table = SpectrumTable::covering_index(k)?;
    Ok(table
        .lambda_k(k)
        .cloned()
        .expect("covering table reaches k"))
}

pub fn is_sum_of_two_squares(s: u64) -> bool {
    (0..=s.isqrt()).any(|m| {
        let rest = s - m * m;
        let r = rest.isqrt();
        r * r == rest
    })
}
