use serde::{Deserialize, Serialize};

use super::MetricsError;

/// Mean and population standard deviation of one metric across seeds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedAggregate {
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub seeds: Vec<u64>,
    pub values: Vec<f64>,
    pub mean: f64,
    /// Divisor N (ddof = 0).
    pub std: f64,
}

pub fn aggregate_seeds(values: &[f64]) -> Result<SeedAggregate, MetricsError> {
    if values.is_empty() {
        return Err(MetricsError::NoValues);
    }
    if let Some(&bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(MetricsError::NonFinite(bad));
    }
    // Summing in sorted order makes the result independent of input order.
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / n;
    let var = sorted.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    Ok(SeedAggregate {
        seeds: Vec::new(),
        values: values.to_vec(),
        mean,
        std: var.sqrt(),
    })
}

/// Aggregates `(seed, value)` pairs, keeping them ordered by seed.
pub fn aggregate_seeded(pairs: &[(u64, f64)]) -> Result<SeedAggregate, MetricsError> {
    let mut pairs = pairs.to_vec();
    pairs.sort_by_key(|&(seed, _)| seed);
    let values: Vec<f64> = pairs.iter().map(|&(_, v)| v).collect();
    let mut agg = aggregate_seeds(&values)?;
    agg.seeds = pairs.iter().map(|&(s, _)| s).collect();
    Ok(agg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn population_std() {
        let a = aggregate_seeds(&[0.5, 0.7]).unwrap();
        assert!((a.mean - 0.6).abs() < 1e-12);
        assert!((a.std - 0.1).abs() < 1e-12);
    }

    #[test]
    fn single_value() {
        let a = aggregate_seeds(&[0.7142]).unwrap();
        assert_eq!(a.mean, 0.7142);
        assert_eq!(a.std, 0.0);
    }

    #[test]
    fn empty_and_non_finite() {
        assert_eq!(aggregate_seeds(&[]), Err(MetricsError::NoValues));
        assert!(matches!(
            aggregate_seeds(&[0.1, f64::NAN]),
            Err(MetricsError::NonFinite(_))
        ));
    }

    #[test]
    fn seeded_pairs_are_sorted() {
        let a = aggregate_seeded(&[(123, 0.2), (42, 0.4)]).unwrap();
        assert_eq!(a.seeds, vec![42, 123]);
        assert_eq!(a.values, vec![0.4, 0.2]);
    }
}
