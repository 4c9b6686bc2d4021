use serde::Serialize;

use super::Space;

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    Nonnegativity { i: usize, j: usize, value: f64 },
    Identity { i: usize, value: f64 },
    Symmetry { i: usize, j: usize, forward: f64, backward: f64 },
    Triangle { i: usize, j: usize, k: usize, excess: f64 },
    Order { i: usize, j: usize },
}

pub type AxiomReport = Vec<Violation>;

// slack for rounding in sums of three distances
const TRIANGLE_SLACK: f64 = 1e-12;

/// Exhaustive axiom check over `probe` (indices in violations refer to it).
///
/// The triangle inequality is skipped for spaces that declare a general,
/// non-metric loss.
pub fn validate_metric_axioms<S: Space + ?Sized>(space: &S, probe: &[S::Point]) -> AxiomReport {
    let m = probe.len();
    let mut d = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            d[i * m + j] = space.dist(&probe[i], &probe[j]);
        }
    }
    let mut report = Vec::new();
    for i in 0..m {
        let v = d[i * m + i];
        if v != 0.0 {
            report.push(Violation::Identity { i, value: v });
        }
        for j in 0..m {
            let v = d[i * m + j];
            if !(v >= 0.0) {
                report.push(Violation::Nonnegativity { i, j, value: v });
            }
            if j > i {
                let w = d[j * m + i];
                if v != w {
                    report.push(Violation::Symmetry { i, j, forward: v, backward: w });
                }
                let fwd = space.order(&probe[i], &probe[j]);
                let bwd = space.order(&probe[j], &probe[i]);
                if fwd != bwd.reverse() || (fwd.is_eq() != (probe[i] == probe[j])) {
                    report.push(Violation::Order { i, j });
                }
            }
        }
    }
    if space.is_metric() {
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    let lhs = d[i * m + k];
                    let rhs = d[i * m + j] + d[j * m + k];
                    let excess = lhs - rhs;
                    if excess > TRIANGLE_SLACK * (1.0 + rhs.abs()) {
                        report.push(Violation::Triangle { i, j, k, excess });
                    }
                }
            }
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use std::cmp::Ordering;

    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::space::{Euclidean, FiniteSpace, Norm};

    struct Broken;

    impl Space for Broken {
        type Point = u8;
        fn id(&self) -> &str {
            "broken"
        }
        fn dist(&self, _: &u8, _: &u8) -> f64 {
            -1.0
        }
        fn order(&self, a: &u8, b: &u8) -> Ordering {
            a.cmp(b)
        }
    }

    #[test]
    fn four_point_is_a_metric() {
        let s = FiniteSpace::four_point();
        assert!(validate_metric_axioms(&s, &[0, 1, 2, 3]).is_empty());
    }

    #[test]
    fn broken_space_reports_identity_and_sign() {
        let r = validate_metric_axioms(&Broken, &[0, 1]);
        assert!(r.iter().any(|v| matches!(v, Violation::Identity { .. })));
        assert!(r.iter().any(|v| matches!(v, Violation::Nonnegativity { .. })));
    }

    #[test]
    fn random_plane_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec<f64>> = (0..10)
            .map(|_| vec![rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)])
            .collect();
        for norm in [Norm::L1, Norm::L2] {
            assert!(validate_metric_axioms(&Euclidean::new(2, norm), &pts).is_empty());
        }
    }
}
