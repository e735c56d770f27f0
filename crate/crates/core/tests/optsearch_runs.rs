use kform_core::optsearch::*;
use kform_core::surface::{presets, FNCoordinates};

fn run(init: &FNCoordinates, cfg: &OptConfig) -> SearchTrace {
    minimize_k(&presets::theta_graph(), init, cfg).unwrap()
}

#[test]
fn search_improves_and_stays_thick() {
    let (_, x) = presets::symmetric_genus2();
    let cfg = OptConfig::default();
    let a = run(&x, &cfg);
    let b = run(&FNCoordinates::new(vec![1.0, 1.5, 3.0], vec![0.2, -0.1, 0.3]), &cfg);
    for t in [&a, &b] {
        let best = t.best_iterate().unwrap();
        assert!(best.khat <= t.iterates[0].khat);
        assert!(best.sys_h >= 0.1);
        assert!(best.coords.lengths.iter().all(|&l| (cfg.min_length..=cfg.max_length).contains(&l)));
        assert!(best.coords.twists.iter().all(|&t| (-0.5..0.5).contains(&t)));
        assert!(t.iterates.len() <= cfg.budget * (cfg.restarts + 1) + 1);
        // The confirmation pass can only add pairs, so it never lowers the estimate.
        assert!(t.confirmed_khat.unwrap() >= best.khat);
    }
    let (ka, kb) = (a.best_iterate().unwrap().khat, b.best_iterate().unwrap().khat);
    assert!((ka - kb).abs() <= 0.2 * ka.min(kb), "{ka} vs {kb}");
}

#[test]
fn fixed_seed_is_reproducible() {
    let cfg = OptConfig { restarts: 1, budget: 40, ..OptConfig::default() };
    let x = FNCoordinates::new(vec![1.3, 2.0, 1.7], vec![0.1, 0.0, -0.2]);
    let a = serde_json::to_string(&run(&x, &cfg)).unwrap();
    let b = serde_json::to_string(&run(&x, &cfg)).unwrap();
    assert_eq!(a, b);
    let cd = run(&x, &OptConfig { method: Method::CoordinateDescent, ..cfg });
    assert!(cd.best_iterate().unwrap().khat <= cd.iterates[0].khat);
}
