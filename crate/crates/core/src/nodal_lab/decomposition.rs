use std::fmt::Write as _;

use serde::Serialize;

use super::eigenfunction::Eigenfunction;
use super::union_find::UnionFind;
use crate::error::{Error, Result};

pub const MIN_GRID: usize = 16;
pub const DEFAULT_GRID: usize = 256;
/// Relative to the largest sampled |u|.
pub const DEFAULT_ZERO_TOL: f64 = 1e-9;
/// Finest grid [`resolve_adaptive`] escalates to by default.
pub const DEFAULT_MAX_GRID: usize = 2048;

/// Adjacency rule at the edges of the sample grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    /// Both axes wrap around (the torus).
    Torus,
    /// No wraparound; only used to contrast with the torus count.
    Square,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalDomain {
    pub id: usize,
    pub sign: i8,
    pub cell_count: usize,
    pub area: f64,
    pub boundary_edge_count: usize,
    /// Boundary edges scaled by 1/N. A taxicab length, so never below the
    /// Euclidean length of the boundary it approximates.
    pub perimeter_estimate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodalDecomposition {
    pub grid_size: usize,
    pub mu: usize,
    pub domains: Vec<NodalDomain>,
    pub zero_cell_count: usize,
    /// Per-cell sign in {-1, 0, +1}, row-major (row = y index).
    #[serde(skip)]
    pub signs: Vec<i8>,
}

impl NodalDecomposition {
    /// Total cell count: domains plus zero cells. Equals N² for a partition.
    pub fn accounted_cells(&self) -> usize {
        self.domains.iter().map(|d| d.cell_count).sum::<usize>() + self.zero_cell_count
    }

    pub fn sign_grid_csv(&self) -> String {
        let n = self.grid_size;
        let mut out = String::with_capacity(n * n * 3);
        for row in self.signs.chunks(n) {
            let line = row
                .iter()
                .map(|s| s.to_string())
                .collect::<Vec<_>>()
                .join(",");
            writeln!(out, "{line}").expect("writing to a String cannot fail");
        }
        out
    }
}

/// Connected sign regions of a sampled grid (`values.len()` must be `grid²`).
pub fn decompose_samples(
    values: &[f64],
    grid: usize,
    zero_tol: f64,
    topology: Topology,
) -> Result<NodalDecomposition> {
    if grid < MIN_GRID {
        return Err(Error::GridTooSmall(grid));
    }
    if !(zero_tol > 0.0 && zero_tol.is_finite()) {
        return Err(Error::InvalidZeroTolerance(zero_tol));
    }
    assert_eq!(values.len(), grid * grid, "sample buffer must be grid²");

    let peak = values.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let cutoff = zero_tol * peak;
    let signs: Vec<i8> = values
        .iter()
        .map(|&v| {
            if v.abs() <= cutoff {
                0
            } else if v > 0.0 {
                1
            } else {
                -1
            }
        })
        .collect();
    let zero_cell_count = signs.iter().filter(|&&s| s == 0).count();
    if zero_cell_count == signs.len() {
        return Err(Error::DegenerateSample);
    }

    let wrap = topology == Topology::Torus;
    let right = |i: usize, j: usize| -> Option<usize> {
        if i + 1 < grid {
            Some(j * grid + i + 1)
        } else if wrap {
            Some(j * grid)
        } else {
            None
        }
    };
    let down = |i: usize, j: usize| -> Option<usize> {
        if j + 1 < grid {
            Some((j + 1) * grid + i)
        } else if wrap {
            Some(i)
        } else {
            None
        }
    };

    let mut uf = UnionFind::new(grid * grid);
    for j in 0..grid {
        for i in 0..grid {
            let c = j * grid + i;
            if signs[c] == 0 {
                continue;
            }
            for nb in [right(i, j), down(i, j)].into_iter().flatten() {
                if signs[nb] == signs[c] {
                    uf.union(c, nb);
                }
            }
        }
    }

    // domain ids in order of first appearance in the row-major scan
    let mut label = vec![usize::MAX; grid * grid];
    let mut root_label = vec![usize::MAX; grid * grid];
    let mut domains: Vec<NodalDomain> = Vec::new();
    for c in 0..grid * grid {
        if signs[c] == 0 {
            continue;
        }
        let root = uf.find(c);
        if root_label[root] == usize::MAX {
            root_label[root] = domains.len();
            domains.push(NodalDomain {
                id: domains.len(),
                sign: signs[c],
                cell_count: 0,
                area: 0.0,
                boundary_edge_count: 0,
                perimeter_estimate: 0.0,
            });
        }
        label[c] = root_label[root];
        domains[label[c]].cell_count += 1;
    }

    // each edge between a domain cell and anything else is boundary of that domain
    for j in 0..grid {
        for i in 0..grid {
            let c = j * grid + i;
            for nb in [right(i, j), down(i, j)].into_iter().flatten() {
                if label[c] != label[nb] {
                    if label[c] != usize::MAX {
                        domains[label[c]].boundary_edge_count += 1;
                    }
                    if label[nb] != usize::MAX {
                        domains[label[nb]].boundary_edge_count += 1;
                    }
                }
            }
        }
    }

    let cells = (grid * grid) as f64;
    for d in &mut domains {
        d.area = d.cell_count as f64 / cells;
        d.perimeter_estimate = d.boundary_edge_count as f64 / grid as f64;
    }

    Ok(NodalDecomposition {
        grid_size: grid,
        mu: domains.len(),
        domains,
        zero_cell_count,
        signs,
    })
}

/// Single-resolution decomposition on the torus.
pub fn decompose(u: &Eigenfunction, grid: usize, zero_tol: f64) -> Result<NodalDecomposition> {
    if grid < MIN_GRID {
        return Err(Error::GridTooSmall(grid));
    }
    decompose_samples(&u.sample(grid), grid, zero_tol, Topology::Torus)
}

/// Decompositions at N and 2N whose domain counts agree.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Refined {
    pub coarse: NodalDecomposition,
    pub fine: NodalDecomposition,
}

pub fn resolve(u: &Eigenfunction, grid: usize, zero_tol: f64) -> Result<Refined> {
    let coarse = decompose(u, grid, zero_tol)?;
    let fine = decompose(u, 2 * grid, zero_tol)?;
    if coarse.mu != fine.mu {
        return Err(Error::NotStable {
            n: grid,
            coarse: coarse.mu,
            fine: fine.mu,
        });
    }
    Ok(Refined { coarse, fine })
}

/// Like [`resolve`], doubling N while the counts at N and 2N disagree, as
/// long as 2N stays within `max_grid`.
pub fn resolve_adaptive(
    u: &Eigenfunction,
    grid: usize,
    zero_tol: f64,
    max_grid: usize,
) -> Result<Refined> {
    let mut n = grid;
    loop {
        match resolve(u, n, zero_tol) {
            Err(Error::NotStable { .. }) if 4 * n <= max_grid => n *= 2,
            other => return other,
        }
    }
}

/// μ(u) on an N×N periodic grid, checked against the 2N grid.
pub fn count_nodal_domains(
    u: &Eigenfunction,
    grid: usize,
    zero_tol: f64,
) -> Result<NodalDecomposition> {
    resolve(u, grid, zero_tol).map(|r| r.coarse)
}
