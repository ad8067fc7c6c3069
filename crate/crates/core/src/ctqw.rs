//! Continuous-time quantum walk on small regular graphs.
//!
//! The walk evolves by `H = -γA`. Barriers that hinder each hop by `ε`
//! give the effective adjacency `A' = kεI + (1 - ε)A`, so up to the global
//! phase contributed by `kεI` the barrier walk at time `t` equals the free
//! walk at `(1 - ε)t`.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// A simple undirected `k`-regular graph.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: DMatrix<f64>,
    degree: usize,
}

impl Graph {
    /// Validates symmetry, zero diagonal, 0/1 entries and regularity.
    pub fn from_adjacency(adjacency: DMatrix<f64>) -> Result<Self> {
        let v = adjacency.nrows();
        if v == 0 || adjacency.ncols() != v {
            return Err(Error::InvalidGraph(format!(
                "adjacency must be square and non-empty, got {}x{}",
                v,
                adjacency.ncols()
            )));
        }
        for i in 0..v {
            if adjacency[(i, i)] != 0.0 {
                return Err(Error::InvalidGraph(format!("self-loop at vertex {i}")));
            }
            for j in 0..v {
                let a = adjacency[(i, j)];
                if a != 0.0 && a != 1.0 {
                    return Err(Error::InvalidGraph(format!(
                        "entry ({i}, {j}) = {a} is not 0 or 1"
                    )));
                }
                if a != adjacency[(j, i)] {
                    return Err(Error::InvalidGraph(format!("not symmetric at ({i}, {j})")));
                }
            }
        }
        let degrees: Vec<usize> = (0..v)
            .map(|i| adjacency.row(i).iter().filter(|&&a| a == 1.0).count())
            .collect();
        let degree = degrees[0];
        if let Some(i) = degrees.iter().position(|&d| d != degree) {
            return Err(Error::InvalidGraph(format!(
                "not regular: vertex 0 has degree {degree}, vertex {i} has degree {}",
                degrees[i]
            )));
        }
        Ok(Self { adjacency, degree })
    }

    /// Cycle on `vertices ≥ 3` vertices (2-regular).
    pub fn cycle(vertices: usize) -> Result<Self> {
        if vertices < 3 {
            return Err(Error::InvalidGraph(format!(
                "a cycle needs at least 3 vertices, got {vertices}"
            )));
        }
        let mut a = DMatrix::zeros(vertices, vertices);
        for i in 0..vertices {
            let j = (i + 1) % vertices;
            a[(i, j)] = 1.0;
            a[(j, i)] = 1.0;
        }
        Self::from_adjacency(a)
    }

    /// Complete graph on `vertices ≥ 2` vertices (`(V-1)`-regular).
    pub fn complete(vertices: usize) -> Result<Self> {
        if vertices < 2 {
            return Err(Error::InvalidGraph(format!(
                "a complete graph needs at least 2 vertices, got {vertices}"
            )));
        }
        let a = DMatrix::from_fn(vertices, vertices, |i, j| if i == j { 0.0 } else { 1.0 });
        Self::from_adjacency(a)
    }

    pub fn vertices(&self) -> usize {
        self.adjacency.nrows()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn adjacency(&self) -> &DMatrix<f64> {
        &self.adjacency
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CtqwConfig {
    pub graph: Graph,
    /// Jumping rate `γ > 0`.
    pub gamma: f64,
    /// Barrier leakage `0 ≤ ε < 1`.
    pub epsilon: f64,
}

impl CtqwConfig {
    pub fn new(graph: Graph, gamma: f64, epsilon: f64) -> Result<Self> {
        if !gamma.is_finite() || gamma <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "gamma must be positive, got {gamma}"
            )));
        }
        if !epsilon.is_finite() || !(0.0..1.0).contains(&epsilon) {
            return Err(Error::InvalidConfig(format!(
                "epsilon must lie in [0, 1), got {epsilon}"
            )));
        }
        Ok(Self {
            graph,
            gamma,
            epsilon,
        })
    }
}

/// Vertex amplitudes at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct CtqwState {
    pub amplitudes: DVector<Complex64>,
    pub t: f64,
}

impl CtqwState {
    /// All amplitude on one vertex.
    pub fn localized(vertices: usize, at: usize) -> Self {
        let mut amplitudes = DVector::zeros(vertices);
        amplitudes[at] = Complex64::new(1.0, 0.0);
        Self { amplitudes, t: 0.0 }
    }

    /// Normalizes an arbitrary nonzero amplitude vector.
    pub fn from_amplitudes(amplitudes: DVector<Complex64>) -> Self {
        let norm = amplitudes.norm();
        Self {
            amplitudes: amplitudes.unscale(norm),
            t: 0.0,
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// `A' = kεI + (1 - ε)A`.
pub fn barrier_adjacency(cfg: &CtqwConfig) -> DMatrix<f64> {
    let g = &cfg.graph;
    let n = g.vertices();
    g.adjacency() * (1.0 - cfg.epsilon)
        + DMatrix::identity(n, n) * (g.degree() as f64 * cfg.epsilon)
}

/// Hamiltonian `-γA` or, with barriers, `-γA'` (identity term kept).
pub fn hamiltonian(cfg: &CtqwConfig, use_barriers: bool) -> DMatrix<f64> {
    let a = if use_barriers {
        barrier_adjacency(cfg)
    } else {
        cfg.graph.adjacency().clone()
    };
    a * -cfg.gamma
}

/// `exp(-iHt) ψ` via the spectral decomposition of the real symmetric `H`.
pub fn ctqw_evolve(
    cfg: &CtqwConfig,
    initial: &CtqwState,
    t: f64,
    use_barriers: bool,
) -> Result<CtqwState> {
    let v = cfg.graph.vertices();
    if initial.amplitudes.len() != v {
        return Err(Error::DimensionMismatch(initial.amplitudes.len(), v));
    }
    let eig = SymmetricEigen::new(hamiltonian(cfg, use_barriers));
    let basis = eig.eigenvectors.map(|x| Complex64::new(x, 0.0));
    let mut coeffs = basis.transpose() * &initial.amplitudes;
    for (c, &lambda) in coeffs.iter_mut().zip(eig.eigenvalues.iter()) {
        *c *= Complex64::from_polar(1.0, -lambda * t);
    }
    Ok(CtqwState {
        amplitudes: basis * coeffs,
        t: initial.t + t,
    })
}

/// Result of aligning two states up to a global phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseAlignment {
    /// `‖a - e^{iθ}b‖∞` after alignment.
    pub distance: f64,
    /// `e^{iθ}`, so that `a ≈ e^{iθ}b`.
    pub phase: Complex64,
}

/// Aligns `b` to `a` by matching the phase of `b`'s largest-magnitude
/// component (first one on ties), then reports the max-norm distance.
pub fn align_global_phase(a: &CtqwState, b: &CtqwState) -> Result<PhaseAlignment> {
    if a.amplitudes.len() != b.amplitudes.len() {
        return Err(Error::DimensionMismatch(
            a.amplitudes.len(),
            b.amplitudes.len(),
        ));
    }
    let mut pivot = 0;
    for (i, z) in b.amplitudes.iter().enumerate() {
        if z.norm() > b.amplitudes[pivot].norm() {
            pivot = i;
        }
    }
    let theta = a.amplitudes[pivot].arg() - b.amplitudes[pivot].arg();
    let phase = Complex64::from_polar(1.0, theta);
    let distance = a
        .amplitudes
        .iter()
        .zip(b.amplitudes.iter())
        .map(|(x, y)| (x - phase * y).norm())
        .fold(0.0, f64::max);
    Ok(PhaseAlignment { distance, phase })
}

pub fn global_phase_distance(a: &CtqwState, b: &CtqwState) -> Result<f64> {
    align_global_phase(a, b).map(|p| p.distance)
}

/// Outcome of comparing the barrier walk at `t` with the free walk at `(1-ε)t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RescalingCheck {
    pub distance: f64,
    /// `|e^{iθ} - e^{iγkεt}|` for the extracted alignment phase `e^{iθ}`.
    pub phase_error: f64,
    /// Largest per-vertex probability difference.
    pub probability_diff: f64,
}

pub fn rescaling_check(cfg: &CtqwConfig, initial: &CtqwState, t: f64) -> Result<RescalingCheck> {
    let with = ctqw_evolve(cfg, initial, t, true)?;
    let without = ctqw_evolve(cfg, initial, (1.0 - cfg.epsilon) * t, false)?;
    let align = align_global_phase(&with, &without)?;
    let expected =
        Complex64::from_polar(1.0, cfg.gamma * cfg.graph.degree() as f64 * cfg.epsilon * t);
    let probability_diff = with
        .probabilities()
        .iter()
        .zip(without.probabilities())
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max);
    Ok(RescalingCheck {
        distance: align.distance,
        phase_error: (align.phase - expected).norm(),
        probability_diff,
    })
}
