use fracconn::experiments::{read_scaling_csv, scaling_run};
use fracconn::{MeasureKind, MeasureSpec};

// Locks the sampler, seed derivation and MST against silent drift.
#[test]
fn scaling_matches_recorded_run() {
    let text = include_str!("data/scaling_unit_square_seed42.csv");
    let golden = read_scaling_csv(text.as_bytes()).unwrap();
    let fresh = scaling_run(&MeasureSpec::new(MeasureKind::UnitSquare), &[1024], 4, 42).unwrap();
    assert_eq!(golden.len(), fresh.len());
    for (g, f) in golden.iter().zip(&fresh) {
        assert_eq!(g.measure_id, f.measure_id);
        assert_eq!((g.m, g.trial, g.seed), (f.m, f.trial, f.seed));
        assert_eq!(g.longest_edge, f.longest_edge);
        assert_eq!(g.threshold_radius, f.threshold_radius);
    }
}
