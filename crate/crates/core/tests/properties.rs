use medoidnet::bounds::{q_bound, BoundParams};
use medoidnet::learners::{SweepConfig, SweepStrategy};
use medoidnet::medoid::empirical_medoid;
use medoidnet::net::{assign_voronoi, build_gamma_net};
use medoidnet::space::{validate_metric_axioms, Euclidean, FiniteSpace, Norm};
use medoidnet::{countable_med_net, fin_med_net, LabeledSample, Space};
use proptest::prelude::*;

fn points(dim: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(prop::collection::vec(-50i32..50, dim), 1..max)
        .prop_map(|v| v.into_iter().map(|p| p.into_iter().map(|c| c as f64 / 4.0).collect()).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn euclidean_norms_are_metrics(pts in points(3, 12)) {
        for norm in [Norm::L1, Norm::L2] {
            let s = Euclidean::new(3, norm);
            let report = validate_metric_axioms(&s, &pts);
            prop_assert!(report.is_empty(), "{:?}", report);
        }
    }

    #[test]
    fn nets_pack_and_cover(pts in points(2, 40), gamma in 0.1f64..20.0) {
        let s = Euclidean::new(2, Norm::L2);
        let net = build_gamma_net(&pts, gamma, &s).unwrap();
        for (a, &i) in net.centers.iter().enumerate() {
            for &j in &net.centers[a + 1..] {
                prop_assert!(s.dist(&pts[i], &pts[j]) >= gamma);
            }
        }
        let cells = assign_voronoi(&pts, &net, &s).unwrap();
        for (p, &c) in pts.iter().zip(&cells.cell_of) {
            let own = s.dist(p, &pts[net.centers[c]]);
            prop_assert!(own < gamma);
            for &other in &net.centers {
                prop_assert!(own <= s.dist(p, &pts[other]));
            }
        }
    }

    #[test]
    fn half_scale_nets_are_at_least_as_large(pts in points(2, 30), gamma in 0.2f64..10.0, shrink in 0.01f64..0.5) {
        // each γ-center lies in its own cell of any net at scale ≤ γ/2
        let s = Euclidean::new(2, Norm::L1);
        let coarse = build_gamma_net(&pts, gamma, &s).unwrap();
        let fine = build_gamma_net(&pts, gamma * shrink, &s).unwrap();
        prop_assert!(coarse.d() <= fine.d());
    }

    #[test]
    fn medoid_minimizes_total_loss(labels in prop::collection::vec(0usize..4, 1..25)) {
        let y = FiniteSpace::four_point();
        let candidates: Vec<usize> = (0..4).collect();
        let m = empirical_medoid(&labels, &candidates, &y).unwrap();
        let cost = |c: usize| labels.iter().map(|l| y.dist(&c, l)).sum::<f64>();
        for c in 0..4 {
            prop_assert!(cost(m) <= cost(c));
            if cost(c) == cost(m) {
                prop_assert!(c >= m);
            }
        }
    }

    #[test]
    fn q_is_monotone(n in 20u64..5000, k in 1u64..5, b in 0u64..8, a1 in 0.0f64..1.0, a2 in 0.0f64..1.0) {
        let (lo, hi) = if a1 <= a2 { (a1, a2) } else { (a2, a1) };
        let q = |alpha: f64, k: u64| q_bound(&BoundParams::new(n, alpha, k, b, 0.05, 1.0)).unwrap();
        prop_assert!(q(lo, k) <= q(hi, k));
        prop_assert!(q(lo, k) <= q(lo, k + 1));
        prop_assert!(q(lo, k) >= lo);
    }

    #[test]
    fn sweep_strategies_agree(
        xs in prop::collection::vec(0i32..40, 2..30),
        ys in prop::collection::vec(0usize..3, 30),
    ) {
        let x_space = Euclidean::real();
        let y_space = FiniteSpace::discrete(&["u", "v", "w"]).unwrap();
        let labels = ys[..xs.len()].to_vec();
        let sample = LabeledSample::new(xs.iter().map(|&x| vec![x as f64]).collect(), labels).unwrap();
        let pruned = SweepConfig::default();
        let exhaustive = SweepConfig { strategy: SweepStrategy::Exhaustive, ..SweepConfig::default() };
        let a = fin_med_net(&sample, 0.1, &x_space, &y_space, &pruned).unwrap();
        let b = fin_med_net(&sample, 0.1, &x_space, &y_space, &exhaustive).unwrap();
        prop_assert_eq!(a.center_indices, b.center_indices);
        prop_assert_eq!(a.alpha_star, b.alpha_star);
        prop_assert_eq!(a.q_star, b.q_star);
        let c = countable_med_net(&sample, 0.1, 2, &x_space, &y_space, &pruned).unwrap();
        prop_assert_eq!(c.alpha_star, a.alpha_star);
    }
}
