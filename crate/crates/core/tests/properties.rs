mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vrpstw::feasibility::FeasibilityChecker;
use vrpstw::gen::{generate, GenConfig};
use vrpstw::geometry::Direction;
use vrpstw::improve::improve;
use vrpstw::io::{instance_from_json, instance_to_json, schedule_from_json, schedule_to_json};
use vrpstw::model::validate_schedule;
use vrpstw::router::{self, optimize_clusters, RouterConfig, RoutingMode, RoutingRequest, RoutingStatus};
use vrpstw::sweep::{run_variant, AngularOrder};
use vrpstw::Variant;

fn small(n: usize, capacity: f64, seed: u64) -> vrpstw::Instance {
    generate(&GenConfig::new(n, capacity, seed)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn router_tours_respect_window_order(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::random_cluster_instance(&mut rng, 7);
        let all: Vec<usize> = (0..inst.len()).collect();
        for mode in [RoutingMode::Feasibility, RoutingMode::Optimize] {
            let r = router::solve(&RoutingRequest { instance: &inst, customers: &all, mode, budget: None }).unwrap();
            if r.status == RoutingStatus::Feasible {
                let tour = r.tour.unwrap();
                prop_assert!(tour.customers.windows(2).all(|w| inst.customer(w[0]).window <= inst.customer(w[1]).window));
                let mut sorted = tour.customers.clone();
                sorted.sort_unstable();
                prop_assert_eq!(sorted, all.clone());
            }
        }
    }

    #[test]
    fn feasibility_and_optimize_modes_agree(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let inst = common::random_cluster_instance(&mut rng, 8);
        let all: Vec<usize> = (0..inst.len()).collect();
        let status = |mode| router::solve(&RoutingRequest { instance: &inst, customers: &all, mode, budget: None }).unwrap().status;
        prop_assert_eq!(status(RoutingMode::Feasibility), status(RoutingMode::Optimize));
    }

    #[test]
    fn canonical_json_is_stable(n in 1usize..60, seed in any::<u64>()) {
        let inst = small(n, 200.0, seed);
        let text = instance_to_json(&inst).unwrap();
        let back = instance_from_json(&text).unwrap();
        prop_assert_eq!(instance_to_json(&back).unwrap(), text);
        let clusters: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
        let (schedule, _) = optimize_clusters(&inst, &clusters, RouterConfig::default()).unwrap().unwrap();
        let s = schedule_to_json(&schedule, &inst).unwrap();
        prop_assert_eq!(schedule_from_json(&s, &inst).unwrap(), schedule);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn sweeps_partition_and_stay_consistent(n in 1usize..90, seed in any::<u64>(), cw in any::<bool>(), big in any::<bool>()) {
        let inst = small(n, if big { 400.0 } else { 200.0 }, seed);
        let direction = if cw { Direction::Clockwise } else { Direction::Counterclockwise };
        let order = AngularOrder::new(&inst, direction);
        for variant in Variant::ALL {
            let mut checker = FeasibilityChecker::new(&inst, RouterConfig::default());
            let c = run_variant(variant, &order, &mut checker).unwrap();
            let mut all: Vec<usize> = c.clusters().iter().flatten().copied().collect();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            prop_assert_eq!(c.clusters_from_boundaries(&order, &inst).unwrap(), c.clusters().to_vec());
            for row in c.boundaries() {
                prop_assert!(row.windows(2).all(|w| w[0] <= w[1]));
            }

            // determinism
            let mut again = FeasibilityChecker::new(&inst, RouterConfig::default());
            let d = run_variant(variant, &AngularOrder::new(&inst, direction), &mut again).unwrap();
            prop_assert_eq!(c.fingerprint(), d.fingerprint());

            if variant == Variant::Traditional {
                continue;
            }
            for cluster in c.clusters() {
                prop_assert!(checker.admits(cluster).unwrap());
            }
            let (schedule, before) = optimize_clusters(&inst, c.clusters(), RouterConfig::default()).unwrap().unwrap();
            prop_assert!(validate_schedule(&schedule, &inst).is_ok());

            let out = improve(&c, &order, &inst, RouterConfig::default()).unwrap();
            prop_assert_eq!(out.initial, before);
            prop_assert!(out.final_objective <= before);
            prop_assert_eq!(
                out.clustering.clusters_from_boundaries(&order, &inst).unwrap(),
                out.clustering.clusters().to_vec()
            );
            let (improved, obj) = optimize_clusters(&inst, out.clustering.clusters(), RouterConfig::default()).unwrap().unwrap();
            prop_assert_eq!(obj, out.final_objective);
            prop_assert!(validate_schedule(&improved, &inst).is_ok());
        }
    }
}
