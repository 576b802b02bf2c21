use proptest::prelude::*;

use pdla::bahncard::{
    offline_opt_bahncard, prediction_cost_bahncard, run_pdla_bahncard, BahncardInstance, BahncardPrediction,
};
use pdla::common::SeededRng;
use pdla::instancegen::small;
use pdla::setcover::{run_pdla_setcover, run_pure_online_setcover};
use pdla::skirental::{run_pdla_ski, run_pure_online_ski, SkiInstance, SkiPrediction};
use pdla::tcpack::{
    offline_opt_tcp, prediction_cost_tcp, run_pdla_tcp, run_pure_online_tcp, TcpInstance, TcpPrediction,
};

const COVERED: f64 = 1.0 - 1e-9;

fn lambda() -> impl Strategy<Value = f64> {
    (1u32..=100).prop_map(|i| i as f64 / 100.0)
}

fn tcp_instance() -> impl Strategy<Value = TcpInstance> {
    (
        1u64..=12,
        prop::collection::vec(prop_oneof![3 => Just(0u64), 2 => 1u64..4, 1 => 4u64..15], 1..40),
    )
        .prop_map(|(d, counts)| TcpInstance { d, counts })
}

fn acks(horizon: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::btree_set(0..horizon + 5, 0..8).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn ski_x_rises_to_one_and_costs_add_up(n in 0u64..60, b in 1u64..30, n_pred in 0u64..90, l in lambda()) {
        let run = run_pdla_ski(&SkiInstance { n, b }, &SkiPrediction { n_pred }, l).unwrap();
        let mut prev = 0.0;
        for d in &run.days {
            prop_assert!(d.x_before == prev && d.x_after >= d.x_before);
            prev = d.x_after;
        }
        prop_assert!((run.days.len() as u64) <= n);
        if (run.days.len() as u64) < n {
            prop_assert!(run.x() >= COVERED);
        }
        let total: f64 = run.days.iter().map(|d| d.cost).sum();
        prop_assert!((total - run.cost()).abs() <= 1e-9 * total.max(1.0));
    }

    #[test]
    fn tcp_covers_every_packet(inst in tcp_instance(), l in lambda(), seed in any::<u64>()) {
        let horizon = inst.counts.len();
        let mut rng = SeededRng::new(seed, 0);
        let pred = TcpPrediction {
            acks: (0..horizon + 3).filter(|_| rng.uniform() < 0.3).collect(),
        };
        let run = run_pdla_tcp(&inst, &pred, l).unwrap();
        prop_assert!(run.updates.iter().all(|u| u.dx >= 0.0 && u.t >= u.arrival));
        let x: Vec<f64> = (0..run.steps).map(|t| run.x.get(t)).collect();
        for (t, &c) in inst.counts.iter().enumerate() {
            if c > 0 {
                let tail: f64 = x[t..].iter().sum();
                prop_assert!(tail >= COVERED, "packet at {} sees {}", t, tail);
            }
        }
    }

    #[test]
    fn bahncard_trips_are_covered_and_windows_only_grow(
        gaps in prop::collection::vec(0i64..6, 1..40),
        b in 1u32..8,
        beta in 0u32..10,
        t in 1i64..12,
        cards in prop::collection::vec(0i64..120, 0..5),
        l in lambda(),
    ) {
        let mut trips = Vec::with_capacity(gaps.len());
        let mut now = 0;
        for g in gaps {
            now += g;
            trips.push(now);
        }
        let inst = BahncardInstance { trips, b: b as f64, beta: beta as f64 / 10.0, t };
        let run = run_pdla_bahncard(&inst, &BahncardPrediction { cards }, l).unwrap();
        for trip in &run.trips {
            let tj = trip.time;
            prop_assert!(trip.d + trip.f >= COVERED);
            let window: f64 = run
                .x_times
                .iter()
                .enumerate()
                .filter(|&(_, &s)| tj - inst.t <= s && s <= tj)
                .map(|(i, _)| run.x.get(i))
                .sum();
            prop_assert!(window >= trip.window_before, "trip at {} sees {} < {}", tj, window, trip.window_before);
        }
    }

    #[test]
    fn setcover_covers_every_arrival(seed in any::<u64>(), l in lambda()) {
        let mut rng = SeededRng::new(seed, 0);
        let (inst, pred) = small::setcover(&mut rng);
        let run = run_pdla_setcover(&inst, &pred, l).unwrap();
        for &e in &inst.arrivals {
            let s: f64 = inst
                .sets
                .iter()
                .enumerate()
                .filter(|(_, s)| s.elems.contains(&e))
                .map(|(i, _)| run.x.get(i))
                .sum();
            prop_assert!(s >= COVERED);
        }
        prop_assert!((run.objective(&inst) - run.cost()).abs() <= 1e-9 * run.cost().max(1.0));
    }

    #[test]
    fn lambda_one_ignores_the_prediction(inst in tcp_instance(), a in acks(40), n in 0u64..50, b in 1u64..20, n_pred in 0u64..60, seed in any::<u64>()) {
        let with = run_pdla_tcp(&inst, &TcpPrediction { acks: a }, 1.0).unwrap();
        let pure = run_pure_online_tcp(&inst).unwrap();
        prop_assert_eq!(with.x.values(), pure.x.values());
        prop_assert_eq!(with.cost(), pure.cost());

        let ski = run_pdla_ski(&SkiInstance { n, b }, &SkiPrediction { n_pred }, 1.0).unwrap();
        let ski_pure = run_pure_online_ski(&SkiInstance { n, b }).unwrap();
        prop_assert_eq!(ski.days, ski_pure.days);

        let mut rng = SeededRng::new(seed, 0);
        let (ci, cp) = small::setcover(&mut rng);
        let cover = run_pdla_setcover(&ci, &cp, 1.0).unwrap();
        let cover_pure = run_pure_online_setcover(&ci).unwrap();
        prop_assert_eq!(cover.x.values(), cover_pure.x.values());
    }

    /// With `β = 0` and one window spanning every trip, Bahncard is ski rental with
    /// a trip per day. `λ = 1/k` and `B` a multiple of 20 keep `λB` and `B/λ`
    /// integral, where both exponent conventions agree.
    #[test]
    fn bahncard_without_discount_is_ski_rental(n in 0u64..80, b20 in 1u64..4, n_pred in 0u64..200, k in prop::sample::select(vec![1.0, 2.0, 4.0, 5.0])) {
        let b = 20 * b20;
        let l = 1.0 / k;
        let ski = run_pdla_ski(&SkiInstance { n, b }, &SkiPrediction { n_pred }, l).unwrap();
        let inst = BahncardInstance {
            trips: (0..n as i64).collect(),
            b: b as f64,
            beta: 0.0,
            t: n as i64 + 1,
        };
        let cards = if n_pred >= b { vec![0] } else { vec![] };
        let bahn = run_pdla_bahncard(&inst, &BahncardPrediction { cards }, l).unwrap();
        let tol = 1e-12 * ski.cost().max(1.0);
        prop_assert!((ski.cost() - bahn.cost()).abs() <= tol, "ski {} vs bahncard {}", ski.cost(), bahn.cost());
    }

    #[test]
    fn tcp_optimum_beats_any_schedule(inst in tcp_instance(), a in acks(40)) {
        let horizon = inst.counts.len();
        let mut schedule: Vec<usize> = a.into_iter().filter(|&t| t < horizon).collect();
        if schedule.last() != Some(&(horizon - 1)) {
            schedule.push(horizon - 1);
        }
        let pc = prediction_cost_tcp(&inst, &TcpPrediction { acks: schedule });
        let (opt, _) = offline_opt_tcp(&inst).unwrap();
        prop_assert!(opt <= pc.s_cost.unwrap() + 1e-9);
    }

    #[test]
    fn bahncard_optimum_beats_any_schedule(seed in any::<u64>(), cards in prop::collection::vec(0i64..40, 0..6)) {
        let mut rng = SeededRng::new(seed, 0);
        let (inst, _) = small::bahncard(&mut rng);
        let (opt, _) = offline_opt_bahncard(&inst).unwrap();
        let follow = prediction_cost_bahncard(&inst, &BahncardPrediction { cards });
        prop_assert!(opt <= follow + 1e-9);
    }
}
