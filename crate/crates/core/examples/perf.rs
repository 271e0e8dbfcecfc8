use std::time::Instant;

use fracconn::experiments::{fit_scaling, ratio_series, scaling_run};
use fracconn::{derive_stream, mst_fast, sample, MeasureKind, MeasureSpec};

fn main() {
    let square = MeasureSpec::new(MeasureKind::UnitSquare);
    let cloud = sample(&square, 200_000, &mut derive_stream(1, &[]));
    let t = Instant::now();
    let r = mst_fast(&cloud).unwrap();
    println!(
        "m=2e5 mst_fast: {:?}, longest {}",
        t.elapsed(),
        r.longest_edge
    );

    let grid: Vec<usize> = (10..=17).map(|k| 1 << k).collect();
    for kind in [
        MeasureKind::UnitSquare,
        MeasureKind::SierpinskiCarpet,
        MeasureKind::SetF,
    ] {
        let m = MeasureSpec::new(kind);
        let t = Instant::now();
        let recs = scaling_run(&m, &grid, 20, 2024).unwrap();
        let fit = fit_scaling(&recs).unwrap();
        println!(
            "{kind}: {:?} slope {:.4} r2 {:.4}",
            t.elapsed(),
            fit.slope,
            fit.r2
        );
        for p in ratio_series(&recs) {
            println!(
                "  m={} median={:.5} R={:.4}",
                p.m, p.median_longest_edge, p.ratio
            );
        }
    }
}
