use crate::error::{Error, Result};

fn check_prob(q: f64) -> Result<()> {
    if (0.0..=1.0).contains(&q) {
        Ok(())
    } else {
        Err(Error::usage(format!("probability {q} outside [0, 1]")))
    }
}

/// E[Y_i] = m q (1-q)^{m-1}: the probability that a ball of mass q holds
/// exactly one of m independent points.
pub fn expected_singleton(m: usize, q: f64) -> Result<f64> {
    check_prob(q)?;
    if m < 1 {
        return Err(Error::usage("expected_singleton needs m >= 1"));
    }
    let m = m as f64;
    Ok(m * q * (1.0 - q).powf(m - 1.0))
}

/// E[Y_i Y_j] = m(m-1) q_i q_j (1-q_i-q_j)^{m-2} for disjoint balls.
pub fn expected_pair(m: usize, q_i: f64, q_j: f64) -> Result<f64> {
    check_prob(q_i)?;
    check_prob(q_j)?;
    let rest = 1.0 - q_i - q_j;
    if rest < -1e-15 {
        return Err(Error::usage(format!(
            "disjoint balls need q_i + q_j <= 1, got {}",
            q_i + q_j
        )));
    }
    if m < 2 {
        return Err(Error::usage("expected_pair needs m >= 2"));
    }
    let m = m as f64;
    Ok(m * (m - 1.0) * q_i * q_j * rest.max(0.0).powf(m - 2.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn singleton_examples() {
        for q in [0.0, 0.1, 0.5, 1.0] {
            assert_eq!(expected_singleton(1, q).unwrap(), q);
        }
        assert_eq!(expected_singleton(2, 0.5).unwrap(), 0.5);
        assert!((expected_singleton(3, 1.0 / 3.0).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!(expected_singleton(0, 0.5).is_err());
        assert!(expected_singleton(3, 1.5).is_err());
    }

    #[test]
    fn pair_examples() {
        assert_eq!(expected_pair(2, 0.5, 0.5).unwrap(), 0.5);
        assert_eq!(expected_pair(2, 0.25, 0.25).unwrap(), 0.125);
        assert!(expected_pair(1, 0.2, 0.2).is_err());
        assert!(expected_pair(5, 0.7, 0.7).is_err());
    }

    #[test]
    fn singleton_peaks_at_one_over_m() {
        for m in [2usize, 5, 10, 100, 1000] {
            let grid: Vec<f64> = (1..=10_000).map(|k| k as f64 / 10_000.0).collect();
            let best = grid
                .iter()
                .copied()
                .max_by(|a, b| {
                    expected_singleton(m, *a)
                        .unwrap()
                        .total_cmp(&expected_singleton(m, *b).unwrap())
                })
                .unwrap();
            assert!(
                (best - 1.0 / m as f64).abs() <= 1e-4,
                "m={m}: argmax {best}"
            );
        }
    }
}
