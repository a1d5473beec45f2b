//! Property tests for the exact invariants: distribution normalization,
//! the two-average relation, symmetry-check equivalence, and refinement
//! behavior on random graphs.

use antipode_core::graph::{apsp_metric, Graph};
use antipode_core::metric::{symmetry_check, validate_metric, AverageMode, FiniteMetricSpace};
use antipode_core::symmetry::{refine_colors, ColoredPartition};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

/// Random connected graph on `n` vertices: a random spanning path plus a
/// random subset of extra edges.
fn connected_graph(n: usize) -> impl Strategy<Value = Graph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|i| ((i + 1)..n as u32).map(move |j| (i, j)))
        .collect();
    (
        Just(pairs.clone()),
        proptest::collection::vec(any::<bool>(), pairs.len()),
        proptest::sample::subsequence((0..n as u32).collect::<Vec<_>>(), n),
    )
        .prop_map(move |(pairs, mask, _)| {
            let mut edges: Vec<(u32, u32)> = (0..n as u32 - 1).map(|i| (i, i + 1)).collect();
            edges.extend(
                pairs
                    .iter()
                    .zip(&mask)
                    .filter(|(_, &keep)| keep)
                    .map(|(&e, _)| e),
            );
            Graph::from_edges(n, &edges).unwrap()
        })
}

/// Random exact positive weights summing to exactly 1.
fn exact_weights(n: usize) -> impl Strategy<Value = Vec<BigRational>> {
    proptest::collection::vec(1u32..50, n).prop_map(|raw| {
        let total: u32 = raw.iter().sum();
        raw.into_iter()
            .map(|w| BigRational::new(BigInt::from(w), BigInt::from(total)))
            .collect()
    })
}

fn graph_space(g: &Graph) -> FiniteMetricSpace {
    apsp_metric(g).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn distribution_masses_sum_to_one(g in connected_graph(7)) {
        let space = graph_space(&g);
        let dist = space.distance_distribution();
        prop_assert_eq!(dist.total(), &BigRational::one());
        // Mass at zero is the diagonal mass 1 - mu.
        let diagonal = BigRational::one() - space.mu();
        prop_assert_eq!(dist.mass_at(&BigRational::zero()), diagonal);
    }

    #[test]
    fn off_diagonal_average_relation(g in connected_graph(6)) {
        let space = graph_space(&g);
        let n = space.len();
        let a = space.average_distance(AverageMode::WithDiagonal).unwrap();
        let abar = space.average_distance(AverageMode::OffDiagonal).unwrap();
        let ratio = BigRational::new(BigInt::from(n), BigInt::from(n - 1));
        prop_assert_eq!(abar, a * ratio);
    }

    #[test]
    fn weighted_distribution_stays_normalized(
        g in connected_graph(5),
        w in exact_weights(5),
    ) {
        let matrix = graph_space(&g).matrix();
        let space = validate_metric(&matrix, Some(&w)).unwrap();
        let dist = space.distance_distribution();
        prop_assert_eq!(dist.total(), &BigRational::one());
        let mut diag = BigRational::zero();
        for i in 0..5 {
            diag += space.weight(i) * space.weight(i);
        }
        prop_assert_eq!(dist.mass_at(&BigRational::zero()), diag);
        // A-bar = A / mu holds for arbitrary weights.
        let a = space.average_distance(AverageMode::WithDiagonal).unwrap();
        let abar = space.average_distance(AverageMode::OffDiagonal).unwrap();
        prop_assert_eq!(abar * space.mu(), a);
    }

    /// The pointwise symmetry check `mass(v) = mass(D-v)` agrees with the
    /// cumulative formulation `Pr(d <= a) = Pr(d >= D-a)` sampled at every
    /// occurring value and its reflection.
    #[test]
    fn symmetry_check_matches_cumulative_definition(g in connected_graph(7)) {
        let space = graph_space(&g);
        let dist = space.distance_distribution();
        let diameter = space.diameter();
        let pointwise = symmetry_check(&dist, &diameter).pass;
        let mut cumulative = true;
        for (value, _) in dist.entries() {
            for a in [value.clone(), &diameter - value] {
                if dist.cumulative_up_to(&a) != dist.tail_from(&(&diameter - &a)) {
                    cumulative = false;
                }
            }
        }
        prop_assert_eq!(pointwise, cumulative);
    }

    #[test]
    fn refinement_is_idempotent_and_never_merges(g in connected_graph(8)) {
        let uniform = ColoredPartition::uniform(8);
        let once = refine_colors(&g, &uniform);
        let twice = refine_colors(&g, &once);
        prop_assert_eq!(&once, &twice);
        // Never merges: vertices split by the input stay split.
        let seeded = uniform.individualize(0);
        let refined = refine_colors(&g, &seeded);
        for v in 1..8 {
            prop_assert_ne!(refined.colors()[0], refined.colors()[v]);
        }
        prop_assert!(refined.num_classes() >= once.num_classes());
    }

    #[test]
    fn apsp_matrix_revalidates(g in connected_graph(6)) {
        let space = graph_space(&g);
        let matrix = space.matrix();
        prop_assert!(validate_metric(&matrix, None).is_ok());
    }
}
