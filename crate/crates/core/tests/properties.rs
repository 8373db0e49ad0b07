mod common;

use common::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tvcnlab::netgen::{
    anti_preferential, dtvcn_attach_with, dtvcn_remove_select, generate, grow_step, preferential,
    AttachmentDistribution, DegreeRatio, GrowthConfig, GrowthError, Model,
};
use tvcnlab::routing::{draw_users, select_route, Strategy as Route};
use tvcnlab::traffic::{simulate, SimMode, TrafficParams, TrafficSetup};

fn check_distribution(d: &AttachmentDistribution) -> Result<(), TestCaseError> {
    prop_assert!(d.probs().iter().all(|&p| p >= 0.0));
    prop_assert!((d.probs().iter().sum::<f64>() - 1.0).abs() < 1e-9);
    Ok(())
}

fn arb_model() -> impl Strategy<Value = Model> {
    prop_oneof![Just(Model::Ba), Just(Model::Tvcn), Just(Model::Dtvcn)]
}

fn arb_growth() -> impl Strategy<Value = GrowthConfig> {
    (
        arb_model(),
        3usize..7,
        0.05f64..0.95,
        0.51f64..=1.0,
        0usize..40,
        any::<u64>(),
        any::<bool>(),
    )
        .prop_flat_map(|(model, n0, vartheta, gamma, steps, seed, invert)| {
            (1..=n0, 1..n0).prop_map(move |(m, m_ba)| GrowthConfig {
                model,
                n0,
                steps,
                links_per_step: m,
                vartheta,
                gamma,
                m_ba,
                rng_seed: seed,
                invert_zeta: invert,
            })
        })
        .prop_filter("at least one new link", |c| c.validate().is_ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn distributions_are_normalized(g in arb_connected(12)) {
        check_distribution(&preferential(&g).unwrap())?;
        let anti = anti_preferential(&g).unwrap();
        check_distribution(&anti)?;
        prop_assert!((anti.probs().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        check_distribution(&dtvcn_attach_with(&g, &DegreeRatio, false).unwrap())?;
        check_distribution(&dtvcn_attach_with(&g, &DegreeRatio, true).unwrap())?;
        match dtvcn_remove_select(&g) {
            Ok(d) => check_distribution(&d)?,
            Err(e) => prop_assert_eq!(e, GrowthError::DegenerateDistribution),
        }
    }

    #[test]
    fn growth_keeps_snapshots_simple_connected_and_monotone(cfg in arb_growth()) {
        let seq = generate(&cfg).unwrap();
        prop_assert_eq!(seq.tau(), cfg.steps + 1);
        for (t, g) in seq.iter().enumerate() {
            prop_assert_eq!(g.node_count(), cfg.n0 + t);
            prop_assert_eq!(g.check_invariants(), Ok(()));
            prop_assert_eq!(g.degree_sum(), 2 * g.edge_count());
            prop_assert!(g.is_connected());
        }
        let again = generate(&cfg).unwrap();
        for (a, b) in seq.iter().zip(again.iter()) {
            prop_assert_eq!(a.edges(), b.edges());
        }
    }

    #[test]
    fn step_spends_its_budget(cfg in arb_growth(), extra in 0usize..30) {
        let mut g = tvcnlab::netgen::generate_final(&GrowthConfig { steps: extra, ..cfg.clone() }).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ 0x5eed);
        let before = g.edge_count();
        let r = grow_step(&mut g, &cfg, &mut rng).unwrap();
        prop_assert_eq!(r.links_added, cfg.new_links());
        prop_assert_eq!(r.rewired + r.rewires_skipped, cfg.rewires());
        prop_assert_eq!(r.removed + r.removals_skipped, cfg.removals());
        prop_assert_eq!(g.edge_count(), before + r.links_added - r.removed);
        prop_assert!(g.is_connected());
    }

    #[test]
    fn packets_are_conserved(g in arb_connected(10), seed in any::<u64>(), alpha in 0.0f64..0.5, users in any::<bool>()) {
        let setup = TrafficSetup::new(&g, alpha, 0.5).unwrap();
        let params = TrafficParams { alpha, beta: 0.5, steps: 300, warmup: 50, window: 100 };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let routes: Vec<_> = draw_users(&g, 3, &mut rng)
            .unwrap()
            .into_iter()
            .map(|u| select_route(&g, u, Route::RandomSp, &setup.bc_norm, &mut rng).unwrap())
            .collect();
        let mode = if users { SimMode::Users(&routes) } else { SimMode::Global { strategy: Route::WgMin } };
        let r = simulate(&g, &setup, mode, &params, &mut rng).unwrap();
        prop_assert_eq!(r.generated, r.delivered + *r.in_network.last().unwrap());
        prop_assert!(r.theta >= 0.0);
        prop_assert_eq!(r.theta == 0.0, r.drift <= 0.0 || r.lambda_total == 0.0);
        if let (Some(t), Some(h)) = (r.mean_t, r.mean_hops) {
            prop_assert!(t >= h);
        }
    }
}

#[test]
fn free_flow_travel_time_is_the_hop_count() {
    // capacities of at least one packet per step and a trickle of traffic
    let g = tvcnlab::netgen::generate_final(&GrowthConfig::for_size(Model::Ba, 60, 1)).unwrap();
    let probe = TrafficSetup::new(&g, 0.0, 1.0).unwrap();
    let min_cap = probe.cap.iter().copied().fold(f64::INFINITY, f64::min);
    let beta = 2.0 / min_cap;
    let setup = TrafficSetup::new(&g, 1e-4, beta).unwrap();
    let params = TrafficParams {
        alpha: 1e-4,
        beta,
        steps: 20_000,
        warmup: 1_000,
        window: 10_000,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let r = simulate(
        &g,
        &setup,
        SimMode::Global {
            strategy: Route::RandomSp,
        },
        &params,
        &mut rng,
    )
    .unwrap();
    assert!(r.theta < 0.01, "theta {}", r.theta);
    let (t, h) = (r.mean_t.unwrap(), r.mean_hops.unwrap());
    assert!((t - h).abs() <= 0.01 * h, "T {t} vs hops {h}");
}
