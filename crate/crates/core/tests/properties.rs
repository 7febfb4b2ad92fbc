mod common;

use cornerlab::bohr::BohrSet;
use cornerlab::corners::{
    corner_count_by_difference, hyperplane_integral, hyperplane_views, weighted_corner_count, PlaneSet,
};
use cornerlab::harmonic::DensityFunction;
use cornerlab::partition::Partition;
use cornerlab::variational::{evaluate_T, project, EnvelopePoints, GridFunction};
use cornerlab::{GroupSpec, Rational};
use proptest::prelude::*;

fn groups() -> impl Strategy<Value = GroupSpec> {
    prop::sample::select(vec!["Z5", "Z8", "Z12", "Z3xZ3", "Z2xZ2xZ2", "Z4xZ4", "Z17"])
        .prop_map(|s| s.parse::<GroupSpec>().unwrap())
}

fn plane_sets() -> impl Strategy<Value = PlaneSet> {
    (groups(), 0.0..1.0f64, any::<u64>()).prop_map(|(g, d, s)| PlaneSet::random(&g, d, s).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_feasible(
        v in prop::collection::vec(-3.0..3.0f64, 1..40),
        raw_w in prop::collection::vec(0.01..1.0f64, 40),
        alpha in 0.0..=1.0f64,
    ) {
        let w: Vec<f64> = raw_w[..v.len()].to_vec();
        let total: f64 = w.iter().sum();
        let w: Vec<f64> = w.iter().map(|x| x / total).collect();
        let p = project(&v, &w, alpha);
        let mean: f64 = p.iter().zip(&w).map(|(a, b)| a * b).sum();
        prop_assert!((mean - alpha).abs() <= 1e-10);
        prop_assert!(p.iter().all(|x| (0.0..=1.0).contains(x)));
    }

    #[test]
    fn diagonal_count_is_set_size(a in plane_sets()) {
        let p = corner_count_by_difference(&a).unwrap();
        prop_assert_eq!(p.count(0), a.len());
    }

    #[test]
    fn total_count_is_transpose_symmetric(a in plane_sets()) {
        let p = corner_count_by_difference(&a).unwrap();
        let q = corner_count_by_difference(&a.transpose()).unwrap();
        prop_assert_eq!(p.total(), q.total());
    }

    #[test]
    fn profile_matches_oracle(a in plane_sets()) {
        let fast = corner_count_by_difference(&a).unwrap();
        let naive = common::naive_profile(&a);
        prop_assert_eq!(fast.counts(), naive.as_slice());
    }

    #[test]
    fn weighted_count_is_monotone(a in plane_sets(), extra in any::<u64>(), radius in 1u64..=4) {
        let g = a.group().clone();
        let b = BohrSet::new(g.clone(), vec![g.character_at(1 % g.size())], Rational::new(radius, 10)).unwrap();
        let nu = b.normalized_indicator().unwrap();
        let mut bigger = a.clone();
        let n = a.side();
        let idx = (extra as usize) % (n * n);
        bigger.insert(idx / n, idx % n);
        prop_assert!(weighted_corner_count(&bigger, &nu).unwrap() >= weighted_corner_count(&a, &nu).unwrap() - 1e-15);
    }

    #[test]
    fn hyperplane_identity(a in plane_sets()) {
        let nu = DensityFunction::constant(a.group(), 1.0);
        let views = hyperplane_views(&a).unwrap();
        let lhs = hyperplane_integral(&views, &nu).unwrap();
        prop_assert!((lhs - weighted_corner_count(&a, &nu).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn constant_t_is_cube(n in 1usize..6, alpha in 0.0..=1.0f64) {
        let t = evaluate_T(&GridFunction::constant(n, alpha).unwrap());
        prop_assert!((t - alpha.powi(3)).abs() < 1e-12);
    }

    #[test]
    fn t_is_within_unit_interval(vals in prop::collection::vec(0.0..=1.0f64, 27)) {
        let t = evaluate_T(&GridFunction::uniform(3, vals).unwrap());
        prop_assert!((0.0..=1.0 + 1e-12).contains(&t));
    }

    #[test]
    fn envelope_is_convex_and_below(ys in prop::collection::vec(0.0..1.0f64, 2..25)) {
        let n = ys.len();
        let samples: Vec<(f64, f64)> = ys.iter().enumerate().map(|(i, &y)| (i as f64 / (n - 1) as f64, y)).collect();
        let env = EnvelopePoints::new(samples.clone()).unwrap();
        let vals = env.values();
        for (i, &(_, y)) in samples.iter().enumerate() {
            prop_assert!(vals[i] <= y + 1e-12);
        }
        let slopes = env.slopes();
        prop_assert!(slopes.windows(2).all(|w| w[0] <= w[1] + 1e-9));
    }

    #[test]
    fn averaging_is_orthogonal(vals in prop::collection::vec(0.0..1.0f64, 12), keys in prop::collection::vec(0u8..4, 12), g in prop::collection::vec(-1.0..1.0f64, 4)) {
        let p = Partition::from_keys(keys.iter().copied());
        let avg = p.average(&vals);
        let test: Vec<f64> = (0..12).map(|x| g[p.part_of(x) % 4]).collect();
        let ip: f64 = vals.iter().zip(&avg).zip(&test).map(|((f, a), t)| (f - a) * t).sum();
        prop_assert!(ip.abs() < 1e-12);
    }
}
