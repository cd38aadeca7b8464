mod common;

use std::collections::HashSet;

use proptest::prelude::*;
use proxy_data::entropy::{entropy, predictive_distribution};
use proxy_data::histogram::{bin_of, build_histogram, selection_probabilities};
use proxy_data::io::{read_stats, stats_to_string, write_stats};
use proxy_data::rng::derive_seed;
use proxy_data::selectors::{
    class_quotas, select_class_balanced, select_kcenter, select_probabilistic, Method,
};
use proxy_data::splitter::{split_allshuffle, split_disjoint};
use proxy_data::{ExampleStat, ProbabilityTable, StatsTable, WeightScheme};

use common::{is_cover, kcenter_oracle};

fn table_strategy(max: usize) -> impl Strategy<Value = StatsTable> {
    prop::collection::vec(
        (0u32..4, prop_oneof![Just(0.0), 1e-9f64..2.3, Just(0.5)]),
        1..max,
    )
    .prop_map(|rows| {
        StatsTable::from_rows(
            rows.into_iter()
                .enumerate()
                .map(|(i, (label, e))| ExampleStat::new(i as u64 * 2, label, e).unwrap())
                .collect(),
        )
        .unwrap()
    })
}

fn scheme_strategy() -> impl Strategy<Value = WeightScheme> {
    prop_oneof![
        Just(WeightScheme::W1),
        Just(WeightScheme::W2),
        Just(WeightScheme::W3)
    ]
}

proptest! {
    #[test]
    fn entropy_is_bounded(logits in prop::collection::vec(-50.0f64..50.0, 2..30)) {
        let h = entropy(&predictive_distribution(&logits).unwrap()).unwrap();
        prop_assert!(h >= 0.0);
        prop_assert!(h <= (logits.len() as f64).ln() + 1e-12);
    }

    #[test]
    fn entropy_ignores_component_order(logits in prop::collection::vec(-20.0f64..20.0, 2..12), rot in 0usize..12) {
        let mut rotated = logits.clone();
        rotated.rotate_left(rot % logits.len());
        rotated.reverse();
        let a = entropy(&predictive_distribution(&logits).unwrap()).unwrap();
        let b = entropy(&predictive_distribution(&rotated).unwrap()).unwrap();
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn perturbing_uniform_never_raises_entropy(d in 2usize..20, eps in 0.0f64..0.5, i in 0usize..20, j in 0usize..20) {
        let (i, j) = (i % d, j % d);
        prop_assume!(i != j);
        let mut p = vec![1.0 / d as f64; d];
        let delta = eps * p[j];
        p[i] += delta;
        p[j] -= delta;
        prop_assert!(entropy(&p).unwrap() <= (d as f64).ln() + 1e-12);
    }

    #[test]
    fn probabilities_normalize(stats in table_strategy(200), scheme in scheme_strategy(), width in prop_oneof![Just(0.25), Just(0.5), 0.05f64..2.0]) {
        let h = build_histogram(&stats, width, 1e-12).unwrap();
        prop_assert_eq!(h.total(), stats.len() as u64);
        let p = selection_probabilities(&stats, &h, scheme).unwrap();
        let sum: f64 = p.entries().iter().map(|e| e.1).sum();
        prop_assert!((sum - 1.0).abs() < 1e-9);
    }

    #[test]
    fn smaller_bins_get_larger_per_example_probability(stats in table_strategy(200), scheme in scheme_strategy()) {
        let h = build_histogram(&stats, 0.25, 1e-12).unwrap();
        let p = selection_probabilities(&stats, &h, scheme).unwrap();
        let mut per_bin = vec![None; h.bin_count()];
        for (row, (_, prob)) in stats.rows().iter().zip(p.entries()) {
            let b = bin_of(row.entropy, &h);
            match per_bin[b] {
                None => per_bin[b] = Some(*prob),
                Some(q) => prop_assert_eq!(q, *prob, "examples in one bin differ"),
            }
        }
        let occupied: Vec<(u64, f64)> = per_bin
            .iter()
            .enumerate()
            .filter_map(|(b, q)| q.map(|q| (h.height(b), q)))
            .collect();
        for &(h1, p1) in &occupied {
            for &(h2, p2) in &occupied {
                match scheme {
                    WeightScheme::W1 | WeightScheme::W3 if h1 < h2 => prop_assert!(p1 > p2),
                    WeightScheme::W2 => {
                        prop_assert!((p1 * h1 as f64 - p2 * h2 as f64).abs() < 1e-12)
                    }
                    _ => {}
                }
            }
        }
    }

    #[test]
    fn histogram_edges_contain_their_examples(stats in table_strategy(100), width in 0.05f64..2.0) {
        let h = build_histogram(&stats, width, 1e-12).unwrap();
        prop_assert_eq!(&h, &build_histogram(&stats, width, 1e-12).unwrap());
        prop_assert!(h.height(0) > 0 && h.height(h.bin_count() - 1) > 0);
        for row in stats.rows() {
            let b = bin_of(row.entropy, &h);
            let v = row.entropy.max(1e-12).log10();
            prop_assert!(h.left_edge(b) <= v && v < h.right_edge(b));
        }
    }

    #[test]
    fn every_method_returns_k_distinct_known_ids(stats in table_strategy(60), k in 1usize..60, seed in any::<u64>(), pick in 0usize..5) {
        prop_assume!(k <= stats.len());
        let method = [
            Method::Random,
            Method::EntropyTop,
            Method::EntropyBottom,
            Method::Tail { beta: 0.9 },
            Method::Probabilistic { weight: WeightScheme::W1, bin_width: 0.25, floor: 1e-12 },
        ][pick].clone();
        let sel = method.select(&stats, k, seed).unwrap();
        prop_assert_eq!(sel.k(), k);
        let ids: HashSet<u64> = sel.ids().iter().copied().collect();
        prop_assert_eq!(ids.len(), k);
        prop_assert!(ids.iter().all(|id| stats.contains(*id)));
        prop_assert_eq!(sel, method.select(&stats, k, seed).unwrap());
    }

    #[test]
    fn scaling_masses_leaves_sampling_unchanged(masses in prop::collection::vec(0.01f64..10.0, 2..30), scale in prop_oneof![Just(2.0), Just(4.0), Just(0.5)], seed in any::<u64>(), k in 1usize..30) {
        prop_assume!(k <= masses.len());
        let stats = StatsTable::from_rows((0..masses.len() as u64).map(|i| ExampleStat::new(i, 0, 0.1).unwrap()).collect()).unwrap();
        let base = ProbabilityTable::from_masses(masses.iter().enumerate().map(|(i, &m)| (i as u64, m)).collect()).unwrap();
        let scaled = ProbabilityTable::from_masses(masses.iter().enumerate().map(|(i, &m)| (i as u64, m * scale)).collect()).unwrap();
        let a = select_probabilistic(&stats, k, &base, seed).unwrap();
        let b = select_probabilistic(&stats, k, &scaled, seed).unwrap();
        prop_assert_eq!(a.ids(), b.ids());
    }

    #[test]
    fn kcenter_matches_rescan_oracle(
        features in prop::collection::vec(prop::collection::vec(0i32..4, 2), 2..=12),
        pool_size in 1usize..6,
        k in 1usize..12,
    ) {
        let n = features.len();
        prop_assume!(pool_size < n && k <= n - pool_size);
        let points: Vec<(u64, Vec<f64>)> = features
            .iter()
            .enumerate()
            .map(|(i, f)| (i as u64, f.iter().map(|&v| v as f64).collect()))
            .collect();
        let stats = StatsTable::from_rows(
            points.iter().map(|(id, f)| ExampleStat::new(*id, 0, 0.3).unwrap().with_feature(f.clone())).collect(),
        ).unwrap();
        let pool: Vec<u64> = (0..pool_size as u64).rev().collect();
        let got = select_kcenter(&stats, k, &pool, 0).unwrap();
        let want = kcenter_oracle(&points, &pool, k);
        prop_assert_eq!(got.ids(), want.as_slice());
    }

    #[test]
    fn class_balanced_equals_per_class_runs(stats in table_strategy(120), k in 4usize..60, seed in any::<u64>(), pick in 0usize..4) {
        let sizes: Vec<usize> = (0..stats.class_count()).map(|c| stats.rows().iter().filter(|r| r.label == c).count()).collect();
        prop_assume!(k >= sizes.len() && k <= stats.len());
        let inner = [
            Method::Random,
            Method::EntropyBottom,
            Method::Tail { beta: 0.5 },
            Method::Probabilistic { weight: WeightScheme::W3, bin_width: 0.25, floor: 1e-12 },
        ][pick].clone();
        let sel = select_class_balanced(&inner, &stats, k, seed).unwrap();
        prop_assert_eq!(sel.k(), k);
        let quotas = class_quotas(&sizes, k).unwrap();
        let mut expected = Vec::new();
        for c in 0..stats.class_count() {
            let quota = quotas[c as usize];
            if quota > 0 {
                let sub = stats.filter(|r| r.label == c);
                expected.extend_from_slice(inner.select(&sub, quota, derive_seed(seed, c as u64)).unwrap().ids());
            }
        }
        prop_assert_eq!(sel.ids(), expected.as_slice());
    }

    #[test]
    fn splits_partition_the_selection(stats in table_strategy(80), k in 1usize..80, ratio in 0.01f64..0.99, seed in any::<u64>()) {
        prop_assume!(k <= stats.len());
        let sel = Method::Random.select(&stats, k, seed).unwrap();
        let a = split_allshuffle(&sel, &stats, ratio, seed).unwrap();
        let b = split_disjoint(&sel, &stats, ratio, seed % 2 == 0).unwrap();
        prop_assert!(is_cover(a.train(), a.val(), sel.ids()));
        prop_assert!(is_cover(b.train(), b.val(), sel.ids()));
        prop_assert_eq!(b, split_disjoint(&sel, &stats, ratio, seed % 2 == 0).unwrap());
    }

    #[test]
    fn stats_file_round_trips_byte_identically(stats in table_strategy(50)) {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("stats.csv");
        write_stats(&path, &stats).unwrap();
        let back = read_stats(&path).unwrap();
        prop_assert_eq!(stats_to_string(&back), stats_to_string(&stats));
        prop_assert_eq!(back.rows(), stats.rows());
    }
}
