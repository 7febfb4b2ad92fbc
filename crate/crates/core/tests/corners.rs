mod common;

use cornerlab::bohr::BohrSet;
use cornerlab::corners::{
    corner_count_by_difference, corner_count_fourier_check, hyperplane_integral, hyperplane_views, integer_corner_scan,
    list_integer_corners, popular_difference, weighted_corner_count, PlaneSet,
};
use cornerlab::harmonic::DensityFunction;
use cornerlab::{GroupSpec, Rational};

fn group(s: &str) -> GroupSpec {
    s.parse().unwrap()
}

#[test]
fn profile_matches_triple_loop() {
    for g in ["Z16", "Z5xZ5", "Z2xZ2xZ2xZ2", "Z2xZ6", "Z7", "Z3xZ9"] {
        let g = group(g);
        for seed in 0..6 {
            let a = PlaneSet::random(&g, 0.2 + 0.1 * seed as f64, seed).unwrap();
            let p = corner_count_by_difference(&a).unwrap();
            assert_eq!(p.counts(), common::naive_profile(&a).as_slice(), "{g} seed {seed}");
            assert_eq!(p.count(0), a.len());
        }
    }
}

#[test]
fn weighted_paths_agree() {
    let g = group("Z5");
    let a = PlaneSet::random(&g, 0.5, 11).unwrap();
    let b = BohrSet::new(g.clone(), vec![g.character(vec![1]).unwrap()], Rational::new(1, 4)).unwrap();
    let nu = b.normalized_indicator().unwrap();
    let n = 5usize;
    // Triple sum over (x, y, d) straight from the definition.
    let mut direct = 0.0;
    for x in 0..n {
        for y in 0..n {
            for d in 0..n {
                if a.contains(x, y) && a.contains(x, (y + d) % n) && a.contains((x + d) % n, y) {
                    direct += nu.values()[d];
                }
            }
        }
    }
    direct /= 125.0;
    let views = hyperplane_views(&a).unwrap();
    assert!((weighted_corner_count(&a, &nu).unwrap() - direct).abs() < 1e-10);
    assert!((hyperplane_integral(&views, &nu).unwrap() - direct).abs() < 1e-10);
    assert!((corner_count_fourier_check(&a, &nu).unwrap() - direct).abs() < 1e-9);
}

#[test]
fn point_mass_weight_gives_density() {
    let g = group("Z8");
    let a = PlaneSet::random(&g, 0.4, 3).unwrap();
    let mut delta = vec![0.0; 8];
    delta[0] = 8.0;
    let nu = DensityFunction::new(g.clone(), delta).unwrap();
    assert!((weighted_corner_count(&a, &nu).unwrap() - a.density()).abs() < 1e-12);
}

#[test]
fn fourier_path_on_z32() {
    let g = group("Z32");
    let a = PlaneSet::random(&g, 0.4, 5).unwrap();
    let nu = DensityFunction::constant(&g, 1.0);
    let primary = weighted_corner_count(&a, &nu).unwrap();
    assert!((corner_count_fourier_check(&a, &nu).unwrap() - primary).abs() < 1e-9);
    let full = PlaneSet::full(&g).unwrap();
    assert!((corner_count_fourier_check(&full, &nu).unwrap() - 1.0).abs() < 1e-9);
}

#[test]
fn hyperplane_views_of_full_set() {
    let g = group("Z3xZ3");
    let views = hyperplane_views(&PlaneSet::full(&g).unwrap()).unwrap();
    let nu = DensityFunction::constant(&g, 1.0);
    assert!((hyperplane_integral(&views, &nu).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn integer_scan_matches_brute_force() {
    for n in [7u64, 12, 20, 30] {
        let g = GroupSpec::cyclic(n).unwrap();
        let a = PlaneSet::random(&g, 0.4, n).unwrap();
        let rho = Rational::new(1, 4);
        let scan = integer_corner_scan(&a, &[], rho).unwrap();
        let reach = (n as f64 / 4.0).floor() as i64;
        let mut expected: Vec<(i64, u64)> = Vec::new();
        for m in 1..=reach {
            for d in [m, -m] {
                // |d|/n < 1/4 strictly.
                if 4 * m < n as i64 {
                    expected.push((d, common::naive_integer_count(&a, d)));
                }
            }
        }
        assert_eq!(scan.counts, expected, "n = {n}");
        for &(d, c) in &scan.counts {
            let listed = list_integer_corners(&a, d);
            assert_eq!(listed.len() as u64, c);
            for (x, y) in listed {
                let (x, y, n) = (x as i64, y as i64, n as i64);
                assert!((0..n).contains(&(x + d)) && (0..n).contains(&(y + d)));
            }
        }
    }
}

#[test]
fn integer_scan_on_full_square() {
    let g = GroupSpec::cyclic(10).unwrap();
    let scan = integer_corner_scan(&PlaneSet::full(&g).unwrap(), &[], Rational::new(3, 10)).unwrap();
    for &(d, c) in &scan.counts {
        assert_eq!(c, (10 - d.unsigned_abs()).pow(2));
    }
    assert_eq!(scan.best, Some((1, 81)));
    let empty = integer_corner_scan(&PlaneSet::empty(&g).unwrap(), &[], Rational::new(3, 10)).unwrap();
    assert!(empty.counts.iter().all(|&(_, c)| c == 0));
}

#[test]
fn popular_difference_in_z101() {
    // Seeds 1 through 5, density 0.3.
    let g = GroupSpec::cyclic(101).unwrap();
    for seed in 1..=5 {
        let a = PlaneSet::random(&g, 0.3, seed).unwrap();
        let (_, count) = popular_difference(&a).unwrap();
        let alpha = a.density();
        assert!(count as f64 >= 0.8 * alpha.powi(3) * 101.0 * 101.0, "seed {seed}");
    }
}
