use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::is_sum_of_two_squares;

/// One frequency class {±(m,n)} of an eigenfunction:
/// `cos_coeff·cos(2π(mx+ny)) + sin_coeff·sin(2π(mx+ny))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Term {
    pub m: i64,
    pub n: i64,
    pub cos_coeff: f64,
    pub sin_coeff: f64,
}

impl Term {
    pub fn new(m: i64, n: i64, cos_coeff: f64, sin_coeff: f64) -> Self {
        Self {
            m,
            n,
            cos_coeff,
            sin_coeff,
        }
    }

    fn norm(&self) -> u64 {
        (self.m * self.m + self.n * self.n) as u64
    }

    /// Representative of {±(m,n)}: first nonzero coordinate positive.
    fn canonical(&self) -> (i64, i64) {
        canonical(self.m, self.n)
    }

    fn is_trivial(&self) -> bool {
        let sin_matters = (self.m, self.n) != (0, 0);
        self.cos_coeff == 0.0 && (!sin_matters || self.sin_coeff == 0.0)
    }
}

fn canonical(m: i64, n: i64) -> (i64, i64) {
    if m < 0 || (m == 0 && n < 0) {
        (-m, -n)
    } else {
        (m, n)
    }
}

/// A real element of the eigenspace for 4π²s.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenfunction {
    s: u64,
    terms: Vec<Term>,
}

impl Eigenfunction {
    /// Validates that every term has norm `s`, that no frequency class is
    /// repeated and that the function is not identically zero.
    pub fn new(s: u64, terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidEigenfunction("no terms".into()));
        }
        let mut seen = Vec::with_capacity(terms.len());
        for t in &terms {
            if !(t.cos_coeff.is_finite() && t.sin_coeff.is_finite()) {
                return Err(Error::InvalidEigenfunction(format!(
                    "non-finite coefficient on ({}, {})",
                    t.m, t.n
                )));
            }
            if t.m.unsigned_abs() > 1 << 20 || t.n.unsigned_abs() > 1 << 20 || t.norm() != s {
                return Err(Error::InvalidEigenfunction(format!(
                    "term ({}, {}) does not have norm {s}",
                    t.m, t.n
                )));
            }
            let key = t.canonical();
            if seen.contains(&key) {
                return Err(Error::InvalidEigenfunction(format!(
                    "frequency class ±({}, {}) given twice",
                    key.0, key.1
                )));
            }
            seen.push(key);
        }
        if terms.iter().all(Term::is_trivial) {
            return Err(Error::InvalidEigenfunction(
                "all coefficients vanish".into(),
            ));
        }
        Ok(Self { s, terms })
    }

    pub fn constant() -> Self {
        Self {
            s: 0,
            terms: vec![Term::new(0, 0, 1.0, 0.0)],
        }
    }

    /// sin(2π(mx+ny))
    pub fn sine_mode(m: i64, n: i64) -> Self {
        Self::single(m, n, 0.0, 1.0)
    }

    /// cos(2π(mx+ny))
    pub fn cosine_mode(m: i64, n: i64) -> Self {
        Self::single(m, n, 1.0, 0.0)
    }

    /// sin(2πmx)·sin(2πny) = ½cos(2π(mx-ny)) - ½cos(2π(mx+ny)), for m, n > 0.
    pub fn sine_product(m: i64, n: i64) -> Result<Self> {
        if m <= 0 || n <= 0 {
            return Err(Error::InvalidEigenfunction(
                "sine product needs positive frequencies".into(),
            ));
        }
        Self::new(
            (m * m + n * n) as u64,
            vec![Term::new(m, -n, 0.5, 0.0), Term::new(m, n, -0.5, 0.0)],
        )
    }

    fn single(m: i64, n: i64, c: f64, d: f64) -> Self {
        Self::new((m * m + n * n) as u64, vec![Term::new(m, n, c, d)])
            .expect("single mode is a valid eigenfunction")
    }

    pub fn s(&self) -> u64 {
        self.s
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eigenvalue(&self) -> f64 {
        4.0 * PI * PI * self.s as f64
    }

    pub fn evaluate(&self, x: f64, y: f64) -> f64 {
        self.terms
            .iter()
            .map(|t| {
                let phase = TAU * (t.m as f64 * x + t.n as f64 * y);
                t.cos_coeff * phase.cos() + t.sin_coeff * phase.sin()
            })
            .sum()
    }

    /// Samples at the cell centres ((i+½)/N, (j+½)/N), row-major with row
    /// index j (the y coordinate).
    pub fn sample(&self, grid: usize) -> Vec<f64> {
        let mut values = vec![0.0; grid * grid];
        for t in &self.terms {
            let (cx, sx) = axis_table(t.m, grid);
            let (cy, sy) = axis_table(t.n, grid);
            for j in 0..grid {
                let row = &mut values[j * grid..(j + 1) * grid];
                for (i, v) in row.iter_mut().enumerate() {
                    let cos = cx[i] * cy[j] - sx[i] * sy[j];
                    let sin = sx[i] * cy[j] + cx[i] * sy[j];
                    *v += t.cos_coeff * cos + t.sin_coeff * sin;
                }
            }
        }
        values
    }
}

/// cos and sin of 2πk(i+½)/N for i in 0..N, with the phase reduced exactly
/// modulo one period before the trigonometric call.
fn axis_table(k: i64, grid: usize) -> (Vec<f64>, Vec<f64>) {
    let period = 2 * grid as i64;
    (0..grid as i64)
        .map(|i| {
            let num = (k * (2 * i + 1)).rem_euclid(period);
            let phase = TAU * num as f64 / period as f64;
            (phase.cos(), phase.sin())
        })
        .unzip()
}

/// Canonical representatives of all vectors (m,n) ∈ ℤ² with m²+n² = s, one
/// per class {±(m,n)}, ordered by (m, n).
pub fn frequency_classes(s: u64) -> Vec<(i64, i64)> {
    let r = s.isqrt() as i64;
    let mut out = Vec::new();
    for m in 0..=r {
        let rest = s as i64 - m * m;
        let n = rest.isqrt();
        if n * n != rest {
            continue;
        }
        if m == 0 && n == 0 {
            out.push((0, 0));
        } else if m == 0 || n == 0 {
            out.push(canonical(m, n));
        } else {
            out.push((m, -n));
            out.push((m, n));
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Dimension of the eigenspace for 4π²s (zero if s is not a sum of two squares).
pub fn basis_dimension(s: u64) -> usize {
    frequency_classes(s)
        .iter()
        .map(|&c| if c == (0, 0) { 1 } else { 2 })
        .sum()
}

/// Coefficients uniform on [-1, 1] over the full real basis of the eigenspace,
/// drawn from a ChaCha8 stream seeded with `seed`.
pub fn random_eigenfunction(s: u64, seed: u64) -> Result<Eigenfunction> {
    if !is_sum_of_two_squares(s) {
        return Err(Error::NotSumOfTwoSquares(s));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let terms = frequency_classes(s)
        .into_iter()
        .map(|(m, n)| {
            let c = rng.gen_range(-1.0..=1.0);
            let d = if (m, n) == (0, 0) {
                0.0
            } else {
                rng.gen_range(-1.0..=1.0)
            };
            Term::new(m, n, c, d)
        })
        .collect();
    Eigenfunction::new(s, terms)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_values() {
        let c = Eigenfunction::constant();
        assert_eq!(c.evaluate(0.3, 0.9), 1.0);
        let u = Eigenfunction::sine_mode(1, 0);
        for y in [0.0, 0.2, 0.77] {
            assert!((u.evaluate(0.25, y) - 1.0).abs() < 1e-15);
        }
        let v = Eigenfunction::cosine_mode(1, 1);
        assert!((v.evaluate(0.5, 0.0) + 1.0).abs() < 1e-15);
    }

    #[test]
    fn periodic() {
        let u = random_eigenfunction(13, 4).unwrap();
        for (x, y) in [(0.1, 0.2), (0.7, 0.35)] {
            let a = u.evaluate(x, y);
            assert!((a - u.evaluate(x + 1.0, y)).abs() < 1e-12);
            assert!((a - u.evaluate(x, y - 1.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_matches_pointwise_evaluation() {
        let u = random_eigenfunction(25, 11).unwrap();
        let n = 32;
        let grid = u.sample(n);
        for j in 0..n {
            for i in 0..n {
                let x = (i as f64 + 0.5) / n as f64;
                let y = (j as f64 + 0.5) / n as f64;
                assert!((grid[j * n + i] - u.evaluate(x, y)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eigen_equation_by_finite_differences() {
        let u = random_eigenfunction(10, 3).unwrap();
        let h = 1e-3;
        for (x, y) in [(0.13, 0.71), (0.5, 0.05), (0.9, 0.4)] {
            let lap = (u.evaluate(x + h, y)
                + u.evaluate(x - h, y)
                + u.evaluate(x, y + h)
                + u.evaluate(x, y - h)
                - 4.0 * u.evaluate(x, y))
                / (h * h);
            let scale = u.eigenvalue() * u.eigenvalue() * h * h;
            assert!((-lap - u.eigenvalue() * u.evaluate(x, y)).abs() < scale);
        }
    }

    #[test]
    fn basis_sizes() {
        assert_eq!(basis_dimension(0), 1);
        assert_eq!(basis_dimension(1), 4);
        assert_eq!(basis_dimension(5), 8);
        assert_eq!(basis_dimension(25), 12);
        assert_eq!(basis_dimension(3), 0);
        assert_eq!(frequency_classes(5), vec![(1, -2), (1, 2), (2, -1), (2, 1)]);
        assert_eq!(frequency_classes(4), vec![(0, 2), (2, 0)]);
    }

    #[test]
    fn random_is_seeded() {
        assert_eq!(
            random_eigenfunction(1, 9).unwrap(),
            random_eigenfunction(1, 9).unwrap()
        );
        assert_ne!(
            random_eigenfunction(1, 9).unwrap(),
            random_eigenfunction(1, 10).unwrap()
        );
        assert_eq!(random_eigenfunction(5, 0).unwrap().terms().len() * 2, 8);
        assert_eq!(
            random_eigenfunction(3, 0),
            Err(Error::NotSumOfTwoSquares(3))
        );
    }

    #[test]
    fn validation() {
        assert!(Eigenfunction::new(1, vec![]).is_err());
        assert!(Eigenfunction::new(2, vec![Term::new(1, 0, 1.0, 0.0)]).is_err());
        assert!(Eigenfunction::new(1, vec![Term::new(1, 0, 0.0, 0.0)]).is_err());
        assert!(Eigenfunction::new(0, vec![Term::new(0, 0, 0.0, 1.0)]).is_err());
        assert!(Eigenfunction::new(
            1,
            vec![Term::new(1, 0, 1.0, 0.0), Term::new(-1, 0, 0.0, 1.0)]
        )
        .is_err());
        assert!(Eigenfunction::sine_product(0, 1).is_err());
        assert_eq!(Eigenfunction::sine_product(1, 1).unwrap().s(), 2);
    }
}
