use fracconn::measures::{contains, MeasureParams};
use fracconn::{derive_stream, sample, set_f_geometry, MeasureKind, MeasureSpec};

#[test]
fn set_f_total_area_matches_series() {
    let n = 40usize;
    let harmonic = |k: usize| (1..=k).map(|j| 1.0 / j as f64).sum::<f64>();
    let slabs = harmonic(2 * n) - harmonic(n);
    let bridges: f64 = (1..=n)
        .map(|i| (1.0 / (2 * i) as f64 - 1.0 / (2 * i + 1) as f64) * 0.5f64.powi(i as i32))
        .sum();
    let g = set_f_geometry(40).unwrap();
    assert!((g.total_area - (slabs + bridges)).abs() < 1e-13);
    assert!((g.total_area - 0.787059350008652).abs() < 1e-12);
    assert!((g.slab_areas.iter().sum::<f64>() - slabs).abs() < 1e-13);
}

#[test]
fn set_f_region_frequencies() {
    let g = set_f_geometry(40).unwrap();
    let measure = MeasureSpec::new(MeasureKind::SetF);
    let n = 100_000;
    let cloud = sample(&measure, n, &mut derive_stream(11, &[]));
    let mut counts = vec![0usize; g.region_count()];
    for p in cloud.points() {
        let c = p.coords();
        counts[g.locate(c[0], c[1]).expect("point outside set F")] += 1;
    }
    for k in 0..8 {
        let r = g.region(k);
        let p = (r.x1 - r.x0) * (r.y1 - r.y0) / g.total_area;
        let sigma = (p * (1.0 - p) / n as f64).sqrt();
        let f = counts[k] as f64 / n as f64;
        assert!(
            (f - p).abs() < 4.0 * sigma + 1e-12,
            "region {k}: {f} vs {p}"
        );
    }
}

#[test]
fn uniform_measures_have_the_right_moments() {
    let n = 100_000;
    for (kind, mean) in [
        (MeasureKind::UnitInterval, 0.5),
        (MeasureKind::UnitSquare, 0.5),
        (MeasureKind::UnitCube, 0.5),
        (MeasureKind::SierpinskiCarpet, 0.5),
        (MeasureKind::CantorDust, 0.5),
        (MeasureKind::UnitDisk, 0.0),
    ] {
        let measure = MeasureSpec::new(kind);
        let cloud = sample(&measure, n, &mut derive_stream(3, &[kind as u64]));
        for axis in 0..measure.ambient_dim() {
            let xs: Vec<f64> = cloud.points().iter().map(|p| p.coords()[axis]).collect();
            let mu = xs.iter().sum::<f64>() / n as f64;
            let var = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1) as f64;
            let sigma = (var / n as f64).sqrt();
            assert!((mu - mean).abs() < 4.0 * sigma, "{kind} axis {axis}: {mu}");
        }
    }
}

#[test]
fn unit_square_variance() {
    let n = 100_000;
    let cloud = sample(
        &MeasureSpec::new(MeasureKind::UnitSquare),
        n,
        &mut derive_stream(5, &[]),
    );
    let xs: Vec<f64> = cloud.points().iter().map(|p| p.coords()[1]).collect();
    let mu = xs.iter().sum::<f64>() / n as f64;
    let var = xs.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1) as f64;
    // Var of the sample variance of U(0,1) is (1/80 - 1/144)/n.
    let sigma = ((1.0 / 80.0 - 1.0 / 144.0) / n as f64).sqrt();
    assert!((var - 1.0 / 12.0).abs() < 4.0 * sigma);
}

#[test]
fn triangle_occupies_its_three_corners_equally() {
    let n = 60_000;
    let measure = MeasureSpec::new(MeasureKind::SierpinskiTriangle);
    let cloud = sample(&measure, n, &mut derive_stream(8, &[]));
    let mut corner = [0usize; 3];
    for p in cloud.points() {
        let c = p.coords();
        let k = if c[0] >= 0.5 {
            1
        } else if c[1] >= 0.5 {
            2
        } else {
            0
        };
        corner[k] += 1;
    }
    let sigma = ((1.0 / 3.0) * (2.0 / 3.0) / n as f64).sqrt();
    for c in corner {
        assert!((c as f64 / n as f64 - 1.0 / 3.0).abs() < 4.0 * sigma);
    }
}

#[test]
fn samples_lie_in_the_support() {
    for kind in MeasureKind::ALL {
        let measure = MeasureSpec::new(kind);
        let cloud = sample(&measure, 2000, &mut derive_stream(21, &[kind as u64]));
        for p in cloud.points() {
            assert!(contains(&measure, p, 30), "{kind}: {:?}", p.coords());
        }
    }
}

#[test]
fn shallow_depth_is_recorded_in_the_id() {
    let m = MeasureSpec::with_params(
        MeasureKind::SierpinskiCarpet,
        MeasureParams {
            depth: Some(4),
            i_max: None,
        },
    )
    .unwrap();
    let cloud = sample(&m, 500, &mut derive_stream(1, &[]));
    assert_eq!(cloud.measure_id, m.id());
    assert_ne!(m.id(), "sierpinski_carpet");
    let distinct: std::collections::BTreeSet<(u64, u64)> = cloud
        .points()
        .iter()
        .map(|p| (p.coords()[0].to_bits(), p.coords()[1].to_bits()))
        .collect();
    assert!(distinct.len() <= 8usize.pow(4));
}
