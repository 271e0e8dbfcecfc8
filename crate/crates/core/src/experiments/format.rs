//! Number formatting and grid parsing shared by the CSV writers and the CLI.

use crate::error::{Error, Result};

/// Formats like C's `%.17g`: 17 significant digits, trailing zeros dropped,
/// scientific notation outside [1e-4, 1e17). Parsing the output recovers the
/// exact f64.
pub fn fmt_f64(v: f64) -> String {
    if v == 0.0 {
        return if v.is_sign_negative() {
            "-0".into()
        } else {
            "0".into()
        };
    }
    if !v.is_finite() {
        return if v.is_nan() {
            "nan".into()
        } else if v > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{v:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..17).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (16 - exp) as usize;
        trim_zeros(&format!("{v:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Geometric grid of sizes from `a:b:steps`, rounded to integers and
/// deduplicated. A bare integer is a one-point grid.
pub fn parse_m_grid(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::usage(format!("bad m grid '{spec}', expected a:b:steps"));
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        [single] => {
            let m: usize = single.trim().parse().map_err(|_| bad())?;
            Ok(vec![m])
        }
        [a, b, steps] => {
            let a: usize = a.trim().parse().map_err(|_| bad())?;
            let b: usize = b.trim().parse().map_err(|_| bad())?;
            let steps: usize = steps.trim().parse().map_err(|_| bad())?;
            geometric_grid(a, b, steps)
        }
        _ => Err(bad()),
    }
}

pub fn geometric_grid(a: usize, b: usize, steps: usize) -> Result<Vec<usize>> {
    if a == 0 || b < a || steps == 0 || (steps == 1 && a != b) {
        return Err(Error::usage(format!("bad geometric grid {a}:{b}:{steps}")));
    }
    if steps == 1 {
        return Ok(vec![a]);
    }
    let ratio = (b as f64 / a as f64).ln() / (steps - 1) as f64;
    let mut grid: Vec<usize> = (0..steps)
        .map(|k| (a as f64 * (ratio * k as f64).exp()).round() as usize)
        .collect();
    grid[steps - 1] = b;
    grid.dedup();
    Ok(grid)
}

/// Comma-separated list of reals.
pub fn parse_real_list(spec: &str) -> Result<Vec<f64>> {
    spec.split(',')
        .map(|s| {
            s.trim()
                .parse::<f64>()
                .map_err(|_| Error::usage(format!("bad number '{s}' in list '{spec}'")))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn matches_c_g17() {
        // Reference strings from printf("%.17g").
        assert_eq!(fmt_f64(0.4), "0.40000000000000002");
        assert_eq!(fmt_f64(1.0), "1");
        assert_eq!(fmt_f64(0.5), "0.5");
        assert_eq!(fmt_f64(100.0), "100");
        assert_eq!(fmt_f64(1e-5), "1.0000000000000001e-05");
        assert_eq!(fmt_f64(0.0001), "0.0001");
        assert_eq!(fmt_f64(1e17), "1e+17");
        assert_eq!(fmt_f64(123456.789), "123456.789");
        assert_eq!(fmt_f64(-2.5), "-2.5");
        assert_eq!(fmt_f64(0.1 + 0.2), "0.30000000000000004");
        assert_eq!(fmt_f64(0.0), "0");
    }

    #[test]
    fn grids() {
        assert_eq!(
            parse_m_grid("1024:131072:8").unwrap(),
            (10..=17).map(|k| 1usize << k).collect::<Vec<_>>()
        );
        assert_eq!(parse_m_grid("500").unwrap(), vec![500]);
        assert_eq!(parse_m_grid("4:4:1").unwrap(), vec![4]);
        assert!(parse_m_grid("0:10:3").is_err());
        assert!(parse_m_grid("10:5:3").is_err());
        assert!(parse_m_grid("a:b").is_err());
        assert_eq!(parse_real_list("0.25, 1,4").unwrap(), vec![0.25, 1.0, 4.0]);
        assert!(parse_real_list("1,x").is_err());
    }

    proptest! {
        #[test]
        fn g17_round_trips(v in proptest::num::f64::NORMAL | proptest::num::f64::SUBNORMAL) {
            prop_assert_eq!(fmt_f64(v).parse::<f64>().unwrap(), v);
        }
    }
}
