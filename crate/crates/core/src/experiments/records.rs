//! CSV persistence. Floats are written with `fmt_f64` (17 significant
//! digits) so every value parses back to the same f64. When a measure is
//! given, its JSON is echoed in a leading `# measure=` comment line.

use std::io::{Read, Write};

use super::format::fmt_f64;
use super::{FitResult, LonelySummary, OccupancyRow, RatioPoint, ScalingRecord};
use crate::error::Result;
use crate::measures::MeasureSpec;
use crate::regularity::RegularityEstimate;

pub const SCALING_HEADER: &str = "measure_id,m,trial,seed,longest_edge,threshold_radius,runtime_ms";

fn writer<W: Write>(mut out: W, measure: Option<&MeasureSpec>) -> Result<csv::Writer<W>> {
    if let Some(m) = measure {
        writeln!(out, "# measure={}", m.to_json())?;
    }
    Ok(csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(out))
}

pub fn write_scaling_csv<W: Write>(
    out: W,
    records: &[ScalingRecord],
    measure: Option<&MeasureSpec>,
) -> Result<()> {
    let mut w = writer(out, measure)?;
    w.write_record(SCALING_HEADER.split(','))?;
    for r in records {
        w.write_record([
            r.measure_id.clone(),
            r.m.to_string(),
            r.trial.to_string(),
            r.seed.to_string(),
            fmt_f64(r.longest_edge),
            fmt_f64(r.threshold_radius),
            fmt_f64(r.runtime_ms),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_scaling_csv<R: Read>(input: R) -> Result<Vec<ScalingRecord>> {
    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(input);
    Ok(r.deserialize()
        .collect::<std::result::Result<Vec<_>, _>>()?)
}

pub fn write_lonely_csv<W: Write>(
    out: W,
    summaries: &[LonelySummary],
    measure: Option<&MeasureSpec>,
) -> Result<()> {
    let mut w = writer(out, measure)?;
    w.write_record([
        "measure_id",
        "m",
        "trial",
        "seed",
        "delta",
        "n_delta",
        "y",
        "empty_balls",
    ])?;
    for s in summaries {
        for (t, (stats, seed)) in s.trials.iter().zip(&s.seeds).enumerate() {
            w.write_record([
                s.measure_id.clone(),
                s.m.to_string(),
                t.to_string(),
                seed.to_string(),
                fmt_f64(s.delta),
                s.n_delta.to_string(),
                stats.y.to_string(),
                stats.empty_balls.to_string(),
            ])?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_occupancy_csv<W: Write>(
    out: W,
    rows: &[OccupancyRow],
    measure: Option<&MeasureSpec>,
) -> Result<()> {
    let mut w = writer(out, measure)?;
    w.write_record([
        "measure_id",
        "m",
        "c",
        "delta",
        "n_delta",
        "trials",
        "full_occupancy",
        "fraction",
        "degenerate",
    ])?;
    for r in rows {
        w.write_record([
            r.measure_id.clone(),
            r.m.to_string(),
            fmt_f64(r.c),
            fmt_f64(r.delta),
            r.n_delta.to_string(),
            r.trials.to_string(),
            r.full_occupancy.to_string(),
            fmt_f64(r.fraction),
            r.degenerate.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_regularity_csv<W: Write>(
    out: W,
    estimate: &RegularityEstimate,
    measure: &MeasureSpec,
) -> Result<()> {
    let mut w = writer(out, Some(measure))?;
    w.write_record([
        "measure_id",
        "reference_size",
        "n_centers",
        "excluded_centers",
        "delta_min",
        "delta_max",
        "d_hat",
        "alpha_hat",
        "beta_hat",
        "alpha_min",
        "beta_max",
        "fit_r2",
    ])?;
    let e = estimate;
    w.write_record([
        measure.id(),
        e.reference_size.to_string(),
        e.n_centers.to_string(),
        e.excluded_centers.to_string(),
        fmt_f64(e.delta_range.0),
        fmt_f64(e.delta_range.1),
        fmt_f64(e.d_hat),
        fmt_f64(e.alpha_hat),
        fmt_f64(e.beta_hat),
        fmt_f64(e.alpha_min),
        fmt_f64(e.beta_max),
        fmt_f64(e.fit_r2),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_fit_csv<W: Write>(out: W, fit: &FitResult) -> Result<()> {
    let mut w = writer(out, None)?;
    w.write_record(["predictor", "slope", "intercept", "r2", "m_min", "m_max"])?;
    w.write_record([
        fit.predictor.name().to_string(),
        fmt_f64(fit.slope),
        fmt_f64(fit.intercept),
        fmt_f64(fit.r2),
        fit.n_range.0.to_string(),
        fit.n_range.1.to_string(),
    ])?;
    w.flush()?;
    Ok(())
}

pub fn write_ratio_csv<W: Write>(out: W, series: &[RatioPoint]) -> Result<()> {
    let mut w = writer(out, None)?;
    w.write_record(["m", "median_longest_edge", "rate", "ratio"])?;
    for p in series {
        w.write_record([
            p.m.to_string(),
            fmt_f64(p.median_longest_edge),
            fmt_f64(p.rate),
            fmt_f64(p.ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::{MeasureKind, MeasureSpec};
    use proptest::prelude::*;

    fn arb_record() -> impl Strategy<Value = ScalingRecord> {
        (
            "[a-z_]{1,12}",
            1usize..1_000_000,
            0usize..100,
            any::<u64>(),
            0.0f64..2.0,
            0.0f64..1e6,
        )
            .prop_map(|(id, m, trial, seed, l, rt)| ScalingRecord {
                measure_id: id,
                m,
                trial,
                seed,
                longest_edge: l,
                threshold_radius: l / 2.0,
                runtime_ms: rt,
            })
    }

    proptest! {
        #[test]
        fn scaling_rows_round_trip(records in prop::collection::vec(arb_record(), 0..20)) {
            let mut buf = Vec::new();
            let m = MeasureSpec::new(MeasureKind::UnitSquare);
            write_scaling_csv(&mut buf, &records, Some(&m)).unwrap();
            prop_assert_eq!(read_scaling_csv(buf.as_slice()).unwrap(), records);
        }
    }

    #[test]
    fn header_is_exact() {
        let mut buf = Vec::new();
        write_scaling_csv(&mut buf, &[], None).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "measure_id,m,trial,seed,longest_edge,threshold_radius,runtime_ms\n"
        );
    }

    #[test]
    fn measure_comment_line() {
        let mut buf = Vec::new();
        let m = MeasureSpec::new(MeasureKind::SierpinskiCarpet);
        write_scaling_csv(&mut buf, &[], Some(&m)).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            r#"# measure={"kind":"sierpinski_carpet","ambient_dim":2,"params":{}}"#
        );
        assert_eq!(lines.next().unwrap(), SCALING_HEADER);
    }
}
