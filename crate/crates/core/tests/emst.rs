use fracconn::{derive_stream, mst_fast, mst_oracle, sample, MeasureKind, MeasureSpec, PointCloud};
use proptest::prelude::*;

fn uniform_cloud(m: usize, dim: usize, seed: u64) -> PointCloud {
    let mut s = derive_stream(seed, &[dim as u64]);
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| s.uniform()).collect())
        .collect();
    PointCloud::from_rows(&rows).unwrap()
}

fn lattice_cloud(m: usize, dim: usize, seed: u64) -> PointCloud {
    let mut s = derive_stream(seed, &[99, dim as u64]);
    let rows: Vec<Vec<f64>> = (0..m)
        .map(|_| (0..dim).map(|_| s.below(6) as f64 * 0.25).collect())
        .collect();
    PointCloud::from_rows(&rows).unwrap()
}

fn assert_same_tree(cloud: &PointCloud) {
    let a = mst_fast(cloud).unwrap();
    let b = mst_oracle(cloud).unwrap();
    assert_eq!(a.edges.len(), cloud.len() - 1);
    assert_eq!(a.sorted_lengths.len(), b.sorted_lengths.len());
    for (x, y) in a.sorted_lengths.iter().zip(&b.sorted_lengths) {
        assert!((x - y).abs() <= 1e-9 * y.max(1e-300), "{x} vs {y}");
    }
    assert_eq!(a.longest_edge, b.longest_edge);
}

#[test]
fn fast_matches_oracle_on_uniform_clouds() {
    for seed in 0..60u64 {
        let dim = 1 + (seed % 3) as usize;
        let m = 2 + (seed as usize * 37) % 400;
        assert_same_tree(&uniform_cloud(m, dim, seed));
    }
}

#[test]
fn fast_matches_oracle_with_ties() {
    for seed in 0..30u64 {
        let dim = 1 + (seed % 3) as usize;
        assert_same_tree(&lattice_cloud(150, dim, seed));
    }
}

#[test]
fn fast_matches_oracle_on_every_measure() {
    for (n, kind) in MeasureKind::ALL.iter().enumerate() {
        let measure = MeasureSpec::new(*kind);
        for t in 0..4u64 {
            let cloud = sample(&measure, 250, &mut derive_stream(t, &[n as u64]));
            assert_same_tree(&cloud);
        }
    }
}

// Every tree edge is a lightest edge across the cut it defines.
#[test]
fn cut_property() {
    for seed in 0..10u64 {
        let cloud = uniform_cloud(60, 2, 500 + seed);
        let mst = mst_fast(&cloud).unwrap();
        let pts = cloud.points();
        for (k, e) in mst.edges.iter().enumerate() {
            let mut dsu = fracconn::dsu::UnionFind::new(pts.len());
            for (l, f) in mst.edges.iter().enumerate() {
                if l != k {
                    dsu.union(f.i, f.j);
                }
            }
            let side = dsu.find(e.i);
            for a in 0..pts.len() {
                for b in 0..pts.len() {
                    if dsu.find(a) == side && dsu.find(b) != side {
                        assert!(pts[a].dist(&pts[b]) >= e.length - 1e-15);
                    }
                }
            }
        }
    }
}

#[test]
fn longest_edge_of_a_square_lattice() {
    let rows: Vec<[f64; 2]> = (0..10)
        .flat_map(|i| (0..10).map(move |j| [i as f64 * 0.1, j as f64 * 0.1]))
        .collect();
    let cloud = PointCloud::from_rows(&rows).unwrap();
    let r = mst_fast(&cloud).unwrap();
    assert!((r.longest_edge - 0.1).abs() < 1e-12);
    assert!((r.total_length - 9.9).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn scale_equivariance(seed in any::<u64>(), m in 2usize..200, dim in 1usize..=3, k in -30i32..30) {
        let s = 2f64.powi(k);
        let cloud = uniform_cloud(m, dim, seed);
        let a = mst_fast(&cloud).unwrap();
        let b = mst_fast(&cloud.scaled(s)).unwrap();
        for (x, y) in a.sorted_lengths.iter().zip(&b.sorted_lengths) {
            prop_assert!((s * x - y).abs() <= 1e-12 * y.max(1e-300));
        }
    }

    // A general scale rounds every coordinate once; allow that much.
    #[test]
    fn scale_equivariance_up_to_coordinate_rounding(seed in any::<u64>(), m in 2usize..200, dim in 1usize..=3, s in 0.01f64..100.0) {
        let cloud = uniform_cloud(m, dim, seed);
        let a = mst_fast(&cloud).unwrap();
        let b = mst_fast(&cloud.scaled(s)).unwrap();
        let slack = 4.0 * f64::EPSILON * s * (dim as f64).sqrt();
        for (x, y) in a.sorted_lengths.iter().zip(&b.sorted_lengths) {
            prop_assert!((s * x - y).abs() <= 1e-12 * y + slack);
        }
    }

    #[test]
    fn tree_has_m_minus_one_edges_and_sorted_lengths(seed in any::<u64>(), m in 1usize..300, dim in 1usize..=3) {
        let cloud = uniform_cloud(m, dim, seed);
        let r = mst_fast(&cloud).unwrap();
        prop_assert_eq!(r.edges.len(), m - 1);
        prop_assert!(r.sorted_lengths.windows(2).all(|w| w[0] <= w[1]));
        let longest = r.sorted_lengths.last().copied().unwrap_or(0.0);
        prop_assert_eq!(r.longest_edge, longest);
    }

    #[test]
    fn invariant_under_permutation(seed in any::<u64>(), m in 2usize..150) {
        let cloud = uniform_cloud(m, 2, seed);
        let mut rows: Vec<Vec<f64>> = cloud.points().iter().map(|p| p.coords().to_vec()).collect();
        rows.reverse();
        let shuffled = PointCloud::from_rows(&rows).unwrap();
        prop_assert_eq!(
            mst_fast(&cloud).unwrap().sorted_lengths,
            mst_fast(&shuffled).unwrap().sorted_lengths
        );
    }
}
