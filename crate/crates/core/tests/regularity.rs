mod common;

use cornerlab::harmonic::DensityFunction;
use cornerlab::regularity::{bohr_regularize, double_regularity, weak_regularity, GrowthFunction};
use cornerlab::GroupSpec;
use rand::Rng;

fn random_indicator(g: &GroupSpec, seed: u64, p: f64) -> DensityFunction {
    let mut rng = common::rng(seed);
    let v = (0..g.size()).map(|_| if rng.random::<f64>() < p { 1.0 } else { 0.0 }).collect();
    DensityFunction::new(g.clone(), v).unwrap()
}

#[test]
fn bohr_regularize_rounds_and_sums() {
    let f4 = GrowthFunction::poly(4, 1).unwrap();
    for (name, seeds) in [("Z64", 0..4u64), ("Z4xZ8", 4..6), ("Z30", 6..8)] {
        let g: GroupSpec = name.parse().unwrap();
        for seed in seeds {
            let funcs: Vec<_> = (0..2).map(|k| random_indicator(&g, seed * 10 + k, 0.4)).collect();
            let d = bohr_regularize(&funcs, f4).unwrap();
            let f1 = f4.eval(1).unwrap() as usize;
            assert!(d.rounds <= funcs.len() * f1 * f1, "{name} seed {seed}: {} rounds", d.rounds);
            for (f, c) in funcs.iter().zip(&d.components) {
                for x in 0..g.size() {
                    assert!((c.i0[x] + c.i1[x] + c.i2[x] - f.values()[x]).abs() < 1e-12);
                }
            }
        }
    }
}

#[test]
fn constant_function_stops_at_once() {
    let g = GroupSpec::cyclic(16).unwrap();
    let d = bohr_regularize(&[DensityFunction::constant(&g, 0.3)], GrowthFunction::poly(4, 1).unwrap()).unwrap();
    assert_eq!(d.rounds, 0);
    let c = &d.components[0];
    assert!(c.i1.iter().chain(&c.i2).all(|v| v.abs() < 1e-12));
}

#[test]
fn weak_regularity_certified_by_enumeration() {
    for (n, eps, seed) in [(6usize, 0.1, 1u64), (8, 0.08, 2), (12, 0.1, 3), (16, 0.12, 4)] {
        let mut rng = common::rng(seed);
        let funcs: Vec<Vec<f64>> =
            (0..2).map(|_| (0..n * n).map(|_| if rng.random::<f64>() < 0.5 { 1.0 } else { 0.0 }).collect()).collect();
        let r = weak_regularity(n, &funcs, eps).unwrap();
        assert!(r.certified);
        for (f, &reported) in funcs.iter().zip(&r.residuals) {
            let avg = r.partition.average_2d(f);
            let resid: Vec<f64> = f.iter().zip(&avg).map(|(a, b)| a - b).collect();
            let oracle = common::brute_cut_norm(&resid, n);
            assert!((oracle - reported).abs() < 1e-12, "n={n}: {oracle} vs {reported}");
            assert!(oracle < eps);
        }
    }
}

#[test]
fn double_regularity_sums_exactly() {
    let g = GroupSpec::cyclic(16).unwrap();
    let mut rng = common::rng(5);
    let f: Vec<f64> = (0..256).map(|_| if rng.random::<f64>() < 0.5 { 1.0 } else { 0.0 }).collect();
    let d = double_regularity(&g, &[f.clone()], 0.2, GrowthFunction::poly(2, 1).unwrap(), 3).unwrap();
    let s = &d.splits[0];
    for i in 0..256 {
        assert!((s.f0[i] + s.f1[i] + s.f2[i] - f[i]).abs() < 1e-12);
    }
    assert!(d.f1_norms.iter().chain(&d.f2_cut_norms).all(|v| v.is_finite()));
    assert!(d.common.refines(&d.graph) && d.common.refines(&d.bohr.parts));
}
