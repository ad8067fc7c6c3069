use crate::error::{Error, Result};

/// Probability mass over a contiguous range of lattice positions.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    start: i64,
    probs: Vec<f64>,
}

impl Distribution {
    /// `probs[i]` is the probability at position `start + i`.
    pub fn new(start: i64, probs: Vec<f64>) -> Self {
        Self { start, probs }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Last stored position, or `start - 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.probs.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.probs
    }

    /// Probability at `n`; zero outside the stored range.
    pub fn get(&self, n: i64) -> f64 {
        let idx = n - self.start;
        if idx < 0 {
            return 0.0;
        }
        self.probs.get(idx as usize).copied().unwrap_or(0.0)
    }

    /// `(position, probability)` pairs in ascending position order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, &p)| (self.start + i as i64, p))
    }

    pub fn total(&self) -> f64 {
        self.probs.iter().sum()
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(n, p)| n as f64 * p).sum()
    }

    /// Standard deviation of position, `sqrt(<n^2> - <n>^2)`.
    ///
    /// Fails with [`Error::NotNormalized`] when the total mass is off by more
    /// than `1e-6`.
    pub fn spread(&self) -> Result<f64> {
        let total = self.total();
        if (total - 1.0).abs() > 1e-6 {
            return Err(Error::NotNormalized(total));
        }
        let mean = self.mean();
        let second: f64 = self.iter().map(|(n, p)| (n as f64).powi(2) * p).sum();
        Ok((second - mean * mean).max(0.0).sqrt())
    }

    /// Largest absolute per-position difference over the union of both ranges.
    pub fn max_abs_diff(&self, other: &Distribution) -> f64 {
        if self.is_empty() && other.is_empty() {
            return 0.0;
        }
        let lo = self.start.min(other.start);
        let hi = self.end().max(other.end());
        (lo..=hi)
            .map(|n| (self.get(n) - other.get(n)).abs())
            .fold(0.0, f64::max)
    }

    /// The distribution mirrored through the origin, `P'(n) = P(-n)`.
    pub fn reflected(&self) -> Distribution {
        let mut probs = self.probs.clone();
        probs.reverse();
        Distribution::new(-self.end(), probs)
    }
}
