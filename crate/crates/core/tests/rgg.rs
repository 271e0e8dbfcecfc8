use fracconn::{connectivity_threshold, derive_stream, is_connected_at, mst_oracle, PointCloud};
use proptest::prelude::*;

fn cloud(m: usize, dim: usize, seed: u64) -> PointCloud {
    let mut s = derive_stream(seed, &[7, dim as u64]);
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| s.uniform()).collect())
        .collect();
    PointCloud::from_rows(&rows).unwrap()
}

fn bisect(c: &PointCloud) -> (f64, f64) {
    let (mut lo, mut hi) = (0.0f64, 2.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if is_connected_at(c, mid).unwrap().is_connected {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

#[test]
fn threshold_is_half_the_longest_edge_and_brackets_bisection() {
    for seed in 0..40u64 {
        let c = cloud(
            2 + (seed as usize * 13) % 250,
            1 + (seed % 3) as usize,
            seed,
        );
        let t = connectivity_threshold(&c).unwrap();
        assert_eq!(t, mst_oracle(&c).unwrap().longest_edge / 2.0);
        let (lo, hi) = bisect(&c);
        assert!(lo <= t && t <= hi + 1e-15, "{lo} {t} {hi}");
        assert!(hi - t <= 1e-9);
        assert!(is_connected_at(&c, t).unwrap().is_connected);
        assert!(!is_connected_at(&c, t * (1.0 - 1e-6)).unwrap().is_connected);
    }
}

#[test]
fn single_point_is_connected_at_zero() {
    let c = PointCloud::from_rows(&[[0.3, 0.4]]).unwrap();
    assert_eq!(connectivity_threshold(&c).unwrap(), 0.0);
    let rep = is_connected_at(&c, 0.0).unwrap();
    assert!(rep.is_connected);
    assert_eq!(rep.component_count, 1);
}

#[test]
fn component_count_of_two_clusters() {
    let c = PointCloud::from_rows(&[[0.0, 0.0], [0.1, 0.0], [1.0, 0.0], [1.1, 0.0]]).unwrap();
    let rep = is_connected_at(&c, 0.06).unwrap();
    assert_eq!(rep.component_count, 2);
    assert!(!rep.is_connected);
    assert!(is_connected_at(&c, 0.5).unwrap().is_connected);
}

#[test]
fn rejects_bad_radius() {
    let c = cloud(5, 2, 1);
    assert!(is_connected_at(&c, -1.0).is_err());
    assert!(is_connected_at(&c, f64::NAN).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn connectivity_is_monotone(seed in any::<u64>(), m in 2usize..80, r1 in 0.0f64..0.5, r2 in 0.0f64..0.5) {
        let c = cloud(m, 2, seed);
        let (a, b) = if r1 <= r2 { (r1, r2) } else { (r2, r1) };
        let ra = is_connected_at(&c, a).unwrap();
        let rb = is_connected_at(&c, b).unwrap();
        prop_assert!(rb.component_count <= ra.component_count);
        prop_assert!(!ra.is_connected || rb.is_connected);
    }

    #[test]
    fn connected_exactly_from_the_threshold(seed in any::<u64>(), m in 2usize..80, dim in 1usize..=3) {
        let c = cloud(m, dim, seed);
        let t = connectivity_threshold(&c).unwrap();
        prop_assert!(is_connected_at(&c, t).unwrap().is_connected);
        prop_assert!(!is_connected_at(&c, t * (1.0 - 1e-6)).unwrap().is_connected);
    }
}
