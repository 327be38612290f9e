use std::collections::VecDeque;
use std::f64::consts::PI;

use proptest::prelude::*;
use torus_courant::nodal_lab::{
    catalogue, check_courant, check_faber_krahn, check_isoperimetric, count_nodal_domains,
    decompose, decompose_samples, random_eigenfunction, resolve, Eigenfunction, ScreenStatus,
    Topology, DEFAULT_GEO_TOL, DEFAULT_ZERO_TOL,
};
use torus_courant::spectrum::SpectrumTable;
use torus_courant::Error;

/// Breadth-first flood fill over same-sign 4-neighbours; returns the number
/// of components and their sizes in discovery order.
fn flood_fill(signs: &[i8], grid: usize, wrap: bool) -> (usize, Vec<usize>) {
    let mut seen = vec![false; signs.len()];
    let mut sizes = Vec::new();
    for start in 0..signs.len() {
        if seen[start] || signs[start] == 0 {
            continue;
        }
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        let mut size = 0;
        while let Some(c) = queue.pop_front() {
            size += 1;
            let (i, j) = ((c % grid) as i64, (c / grid) as i64);
            for (di, dj) in [(1, 0), (-1, 0), (0, 1), (0, -1)] {
                let (mut a, mut b) = (i + di, j + dj);
                if wrap {
                    a = a.rem_euclid(grid as i64);
                    b = b.rem_euclid(grid as i64);
                } else if a < 0 || b < 0 || a >= grid as i64 || b >= grid as i64 {
                    continue;
                }
                let nb = b as usize * grid + a as usize;
                if !seen[nb] && signs[nb] == signs[c] {
                    seen[nb] = true;
                    queue.push_back(nb);
                }
            }
        }
        sizes.push(size);
    }
    (sizes.len(), sizes)
}

/// Sign runs of a 1-periodic function sampled at (i+½)/n on the circle.
fn circle_runs(f: impl Fn(f64) -> f64, n: usize) -> usize {
    let signs: Vec<bool> = (0..n)
        .map(|i| f((i as f64 + 0.5) / n as f64) > 0.0)
        .collect();
    let changes = (0..n).filter(|&i| signs[i] != signs[(i + 1) % n]).count();
    changes.max(1)
}

#[test]
fn constant_has_one_domain() {
    let d = count_nodal_domains(&Eigenfunction::constant(), 64, DEFAULT_ZERO_TOL).unwrap();
    assert_eq!(d.mu, 1);
    assert_eq!(d.zero_cell_count, 0);
    assert_eq!(d.domains[0].boundary_edge_count, 0);
}

#[test]
fn sine_has_two_bands() {
    let d = count_nodal_domains(&Eigenfunction::sine_mode(1, 0), 64, DEFAULT_ZERO_TOL).unwrap();
    assert_eq!(circle_runs(|x| (2.0 * PI * x).sin(), 100_000), 2);
    assert_eq!(d.mu, 2);
    for dom in &d.domains {
        assert_eq!(dom.area, 0.5);
        assert_eq!(dom.perimeter_estimate, 2.0);
    }
}

#[test]
fn cosine_bands_match_one_dimensional_oracle() {
    for m in 1..=4i64 {
        let oracle = circle_runs(|x| (2.0 * PI * m as f64 * x).cos(), 100_000);
        assert_eq!(oracle, 2 * m as usize);
        let d =
            count_nodal_domains(&Eigenfunction::cosine_mode(m, 0), 256, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(d.mu, oracle, "m = {m}");
        for dom in &d.domains {
            // whole columns, within one column of an equal share
            assert_eq!(dom.cell_count % 256, 0);
            let cols = (dom.cell_count / 256) as f64;
            assert!((cols - 256.0 / oracle as f64).abs() <= 1.0, "m = {m}");
        }
    }
}

#[test]
fn sine_product_gives_four_rectangles() {
    let u = Eigenfunction::sine_product(1, 1).unwrap();
    let runs = circle_runs(|x| (2.0 * PI * x).sin(), 10_000);
    let d = count_nodal_domains(&u, 256, DEFAULT_ZERO_TOL).unwrap();
    assert_eq!(d.mu, runs * runs);
    for dom in &d.domains {
        assert_eq!(dom.area, 0.25);
    }
    // adjacent domains alternate in sign
    let g = d.grid_size;
    for c in 0..g * g {
        let right = (c / g) * g + (c % g + 1) % g;
        if d.signs[c] != 0 && d.signs[right] != 0 && d.signs[c] != d.signs[right] {
            assert_eq!(d.signs[c], -d.signs[right]);
        }
    }
}

#[test]
fn wraparound_changes_the_diagonal_count() {
    let u = Eigenfunction::cosine_mode(1, 1);
    let g = 128;
    let samples = u.sample(g);
    let torus = decompose_samples(&samples, g, DEFAULT_ZERO_TOL, Topology::Torus).unwrap();
    let square = decompose_samples(&samples, g, DEFAULT_ZERO_TOL, Topology::Square).unwrap();
    let (torus_oracle, _) = flood_fill(&torus.signs, g, true);
    let (square_oracle, _) = flood_fill(&square.signs, g, false);
    assert_eq!(torus_oracle, 2);
    assert_eq!(square_oracle, 5);
    assert_eq!(torus.mu, torus_oracle);
    assert_eq!(square.mu, square_oracle);
}

#[test]
fn catalogue_is_refinement_stable() {
    for (name, u, expected) in catalogue() {
        let r = resolve(&u, 256, DEFAULT_ZERO_TOL).unwrap();
        assert_eq!(r.coarse.mu, expected, "{name}");
        assert_eq!(r.fine.mu, expected, "{name}");
    }
}

#[test]
fn courant_examples() {
    let table = SpectrumTable::build(17).unwrap();
    let c = check_courant(&Eigenfunction::constant(), &table, 64, DEFAULT_ZERO_TOL).unwrap();
    assert_eq!(
        (c.mu, c.nu, c.courant_sharp, c.satisfied),
        (1, 1, true, true)
    );
    let c = check_courant(
        &Eigenfunction::sine_mode(1, 0),
        &table,
        64,
        DEFAULT_ZERO_TOL,
    )
    .unwrap();
    assert_eq!(
        (c.mu, c.nu, c.courant_sharp, c.satisfied),
        (2, 2, true, true)
    );
    for seed in 0..20 {
        let u = random_eigenfunction(2, seed).unwrap();
        let c = check_courant(&u, &table, 128, DEFAULT_ZERO_TOL).unwrap();
        assert!(c.mu <= 9 && c.mu != 6, "seed {seed}: mu = {}", c.mu);
        assert!(c.satisfied && !c.courant_sharp);
    }
    let beyond = Eigenfunction::cosine_mode(5, 0);
    assert_eq!(
        check_courant(&beyond, &table, 64, DEFAULT_ZERO_TOL),
        Err(Error::UnknownClass(25))
    );
}

#[test]
fn faber_krahn_and_isoperimetric_on_bands() {
    let wide = count_nodal_domains(&Eigenfunction::sine_mode(1, 0), 256, DEFAULT_ZERO_TOL).unwrap();
    for c in check_faber_krahn(&wide, 4.0 * PI * PI, DEFAULT_GEO_TOL) {
        assert_eq!(c.status, ScreenStatus::OutOfHypothesis);
    }

    let u = Eigenfunction::cosine_mode(4, 0);
    let d = count_nodal_domains(&u, 256, DEFAULT_ZERO_TOL).unwrap();
    for c in check_faber_krahn(&d, u.eigenvalue(), DEFAULT_GEO_TOL) {
        assert_eq!(c.area, 0.125);
        assert!((c.product - 8.0 * PI * PI).abs() < 1e-9);
        assert_eq!(c.status, ScreenStatus::Pass);
    }
    for c in check_isoperimetric(&d, DEFAULT_GEO_TOL) {
        assert_eq!(c.lhs, 4.0);
        assert!((c.rhs - 4.0 * PI / 8.0).abs() < 1e-12);
        assert_eq!(c.status, ScreenStatus::Pass);
    }
}

#[test]
fn error_paths() {
    let u = Eigenfunction::sine_mode(1, 0);
    assert_eq!(
        count_nodal_domains(&u, 8, DEFAULT_ZERO_TOL),
        Err(Error::GridTooSmall(8))
    );
    assert_eq!(
        count_nodal_domains(&u, 64, 2.0),
        Err(Error::DegenerateSample)
    );
    assert!(matches!(
        count_nodal_domains(&u, 64, -1.0),
        Err(Error::InvalidZeroTolerance(_))
    ));
    // a count that only settles on a finer grid
    let thin = random_eigenfunction(10, 91).unwrap();
    assert_eq!(
        count_nodal_domains(&thin, 256, DEFAULT_ZERO_TOL),
        Err(Error::NotStable {
            n: 256,
            coarse: 6,
            fine: 2
        })
    );
}

#[test]
fn decomposition_serializes() {
    let d = decompose(&Eigenfunction::sine_mode(1, 0), 16, DEFAULT_ZERO_TOL).unwrap();
    let v = serde_json::to_value(&d).unwrap();
    assert_eq!(v["mu"], 2);
    assert_eq!(v["grid_size"], 16);
    assert_eq!(v["domains"].as_array().unwrap().len(), 2);
    assert!(v.get("signs").is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn union_find_matches_flood_fill(
        s in prop::sample::select(vec![1u64, 2, 4, 5, 8, 9, 10, 13]),
        seed in 0u64..10_000,
        wrap in any::<bool>(),
    ) {
        let u = random_eigenfunction(s, seed).unwrap();
        let g = 48;
        let topology = if wrap { Topology::Torus } else { Topology::Square };
        let d = decompose_samples(&u.sample(g), g, DEFAULT_ZERO_TOL, topology).unwrap();
        let (count, sizes) = flood_fill(&d.signs, g, wrap);
        prop_assert_eq!(d.mu, count);
        let ours: Vec<usize> = d.domains.iter().map(|x| x.cell_count).collect();
        prop_assert_eq!(ours, sizes);
        prop_assert_eq!(d.accounted_cells(), g * g);
        let total: f64 = d.domains.iter().map(|x| x.area).sum::<f64>()
            + d.zero_cell_count as f64 / (g * g) as f64;
        prop_assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn taxicab_perimeter_dominates_isoperimetric_bound(
        s in prop::sample::select(vec![5u64, 8, 10, 13, 17]),
        seed in 0u64..1000,
    ) {
        let u = random_eigenfunction(s, seed).unwrap();
        let d = decompose(&u, 64, DEFAULT_ZERO_TOL).unwrap();
        for c in check_isoperimetric(&d, DEFAULT_GEO_TOL) {
            prop_assert_ne!(c.status, ScreenStatus::Fail);
        }
    }
}
