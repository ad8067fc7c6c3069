//! Symmetric classical random walk on the line, computed exactly.

use crate::distribution::Distribution;

/// Binomial distribution of a fair ±1 walk after `t` steps:
/// `P(n) = C(t, (t+n)/2) / 2^t` when `n + t` is even, zero otherwise.
///
/// Weights are built outward from the central coefficient by the ratio
/// `C(t, j-1) = C(t, j)·j/(t-j+1)` and normalized at the end, so large `t`
/// neither overflows nor loses mass; far tails underflow to zero.
pub fn classical_distribution(t: usize) -> Distribution {
    let mid = t / 2;
    // weights[j] ∝ C(t, j) for j right-steps
    let mut weights = vec![0.0f64; t + 1];
    weights[mid] = 1.0;
    for j in (1..=mid).rev() {
        weights[j - 1] = weights[j] * j as f64 / (t - j + 1) as f64;
    }
    // mirror so P(n) = P(-n) holds exactly
    for j in 0..=mid {
        weights[t - j] = weights[j];
    }
    let total: f64 = weights.iter().sum();

    let mut probs = vec![0.0; 2 * t + 1];
    for (j, w) in weights.into_iter().enumerate() {
        // j right-steps land at n = 2j - t
        probs[2 * j] = w / total;
    }
    Distribution::new(-(t as i64), probs)
}
