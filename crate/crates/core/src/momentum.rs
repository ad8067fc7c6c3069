//! Momentum-space solution of the barrier walk.
//!
//! With `ψ̃(k, t) = Σ_n ψ(n, t) e^{ikn}` one step of the flip-flop barrier walk
//! becomes multiplication by the 2×2 kernel
//!
//! ```text
//! M_k = M₊ e^{ik} + M₋ e^{-ik} + M₀
//!     = (1/√2) [[αe^{ik} + β, -αe^{ik} + β], [αe^{-ik} + β, αe^{-ik} - β]]
//! ```
//!
//! whose eigenvalues are `e^{±iω_k}` with `cos ω_k = α cos k / √2`. Position
//! amplitudes are recovered by integrating over `k ∈ [-π, π]` with a uniform
//! midpoint rule, which is spectrally accurate for these periodic integrands.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, PI, SQRT_2};

use nalgebra::{Matrix2, Vector2};
use num_complex::Complex64;

use crate::distribution::Distribution;
use crate::error::{Error, Result};
use crate::walk::{BarrierParams, CoinState};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this modulus the eigenvector denominator `α - βe^{-ik}` is treated as zero.
const DENOMINATOR_FLOOR: f64 = 1e-12;

/// Closed-form evaluation is refused within this distance of `φ = π/4`.
pub const SINGULAR_PHI_GUARD: f64 = 1e-9;

/// A point on the dispersion curve, `ω_k ∈ [0, π]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DispersionPoint {
    pub k: f64,
    pub omega: f64,
    pub cos_omega: f64,
    pub sin_omega: f64,
}

/// Dispersion relation `cos ω_k = α cos k / √2`, `sin ω_k = √(2 - α² cos² k) / √2`.
///
/// Requires `0 ≤ alpha ≤ 1`; the argument of the square root is then at least 1.
pub fn omega(k: f64, alpha: f64) -> DispersionPoint {
    debug_assert!((0.0..=1.0).contains(&alpha), "alpha = {alpha}");
    let ac = alpha * k.cos();
    let cos_omega = ac * FRAC_1_SQRT_2;
    let sin_omega = (2.0 - ac * ac).sqrt() * FRAC_1_SQRT_2;
    DispersionPoint {
        k,
        omega: sin_omega.atan2(cos_omega),
        cos_omega,
        sin_omega,
    }
}

/// Position-space transfer matrices: `ψ(n, t+1) = M₊ψ(n-1, t) + M₋ψ(n+1, t) + M₀ψ(n, t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrices {
    /// Amplitude arriving from the left neighbour.
    pub plus: Matrix2<Complex64>,
    /// Amplitude arriving from the right neighbour.
    pub minus: Matrix2<Complex64>,
    /// Amplitude that stays put.
    pub stay: Matrix2<Complex64>,
}

impl TransferMatrices {
    pub fn new(barriers: BarrierParams) -> Self {
        let a = Complex64::new(barriers.alpha() * FRAC_1_SQRT_2, 0.0);
        let b = barriers.beta() * FRAC_1_SQRT_2;
        let z = Complex64::new(0.0, 0.0);
        Self {
            plus: Matrix2::new(a, -a, z, z),
            minus: Matrix2::new(z, z, a, a),
            stay: Matrix2::new(b, b, b, -b),
        }
    }

    pub fn apply(&self, from_left: CoinState, from_right: CoinState, here: CoinState) -> CoinState {
        let v = self.plus * to_vec(from_left)
            + self.minus * to_vec(from_right)
            + self.stay * to_vec(here);
        from_vec(v)
    }

    /// `M₊e^{ik} + M₋e^{-ik} + M₀`.
    pub fn momentum_sum(&self, k: f64) -> Matrix2<Complex64> {
        let e = Complex64::from_polar(1.0, k);
        self.plus * e + self.minus * e.conj() + self.stay
    }
}

fn to_vec(c: CoinState) -> Vector2<Complex64> {
    Vector2::new(c.left, c.right)
}

fn from_vec(v: Vector2<Complex64>) -> CoinState {
    CoinState::new(v[0], v[1])
}

/// The momentum kernel `M_k` with its eigensystem.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumKernel {
    pub k: f64,
    pub dispersion: DispersionPoint,
    pub matrix: Matrix2<Complex64>,
    /// `[e^{iω_k}, e^{-iω_k}]`
    pub eigenvalues: [Complex64; 2],
    /// Unit eigenvectors matching `eigenvalues`.
    pub eigenvectors: [Vector2<Complex64>; 2],
}

/// Builds `M_k` and its normalized eigenvectors from the closed forms
///
/// ```text
/// v± = (α + βe^{-ik} - √2 e^{i(±ω_k - k)}) / (α - βe^{-ik})
/// |ψ±|² = (4 - 2√2 α cos(±ω_k - k) ± 2√2 iβ sin ω_k) / (1 + 2iαβ sin k)
/// ```
pub fn kernel(k: f64, barriers: BarrierParams) -> Result<MomentumKernel> {
    let alpha = barriers.alpha();
    let beta = barriers.beta();
    let disp = omega(k, alpha);

    let eik = Complex64::from_polar(1.0, k);
    let emik = eik.conj();
    let matrix = Matrix2::new(
        alpha * eik + beta,
        -alpha * eik + beta,
        alpha * emik + beta,
        alpha * emik - beta,
    ) * Complex64::new(FRAC_1_SQRT_2, 0.0);

    let denom = alpha - beta * emik;
    if denom.norm() < DENOMINATOR_FLOOR {
        return Err(Error::DegenerateEigenvectors { k });
    }
    let numer_base = alpha + beta * emik;
    let norm_numer = 1.0 + 2.0 * I * alpha * beta * k.sin();

    let mut eigenvalues = [Complex64::new(0.0, 0.0); 2];
    let mut eigenvectors = [Vector2::zeros(); 2];
    for (slot, sign) in [1.0f64, -1.0].into_iter().enumerate() {
        let w = sign * disp.omega;
        eigenvalues[slot] = Complex64::new(disp.cos_omega, sign * disp.sin_omega);
        let v = (numer_base - SQRT_2 * Complex64::from_polar(1.0, w - k)) / denom;
        let norm_sq = (4.0 - 2.0 * SQRT_2 * alpha * (w - k).cos()
            + sign * 2.0 * SQRT_2 * I * beta * disp.sin_omega)
            / norm_numer;
        let scale = (1.0 / norm_sq).sqrt();
        eigenvectors[slot] = Vector2::new(scale, scale * v);
    }

    Ok(MomentumKernel {
        k,
        dispersion: disp,
        matrix,
        eigenvalues,
        eigenvectors,
    })
}

impl MomentumKernel {
    /// `(M_k)^t = Σ± λ±^t |ψ±⟩⟨ψ±|`.
    pub fn power(&self, t: u32) -> Matrix2<Complex64> {
        let mut out = Matrix2::zeros();
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out += v * v.adjoint() * lambda.powu(t);
        }
        out
    }

    /// `(M_k)^t (1, 0)ᵀ`, using only the first components of the eigenvectors.
    pub fn evolve_left_moving(&self, t: u32) -> CoinState {
        let mut out = Vector2::zeros();
        for (lambda, v) in self.eigenvalues.iter().zip(&self.eigenvectors) {
            out += v * (v[0].conj() * lambda.powu(t));
        }
        from_vec(out)
    }
}

/// `ψ̃(k, t)` for the walk that starts in `|0⟩ ⊗ |←⟩`, i.e. `ψ̃(k, 0) = (1, 0)ᵀ`.
pub fn momentum_wavefunction(k: f64, t: u32, barriers: BarrierParams) -> Result<CoinState> {
    Ok(kernel(k, barriers)?.evolve_left_moving(t))
}

/// Uniform midpoint rule on `[-π, π]`: nodes `k_j = -π + (j + ½)·2π/N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureSpec {
    nodes: usize,
}

impl QuadratureSpec {
    /// Requires `N ≥ 4` and `N ≢ 2 (mod 4)`; the latter keeps `±π/2` off the grid.
    pub fn new(nodes: usize) -> Result<Self> {
        if nodes < 4 {
            return Err(Error::InvalidQuadrature(format!(
                "need at least 4 nodes, got {nodes}"
            )));
        }
        if nodes % 4 == 2 {
            return Err(Error::InvalidQuadrature(format!(
                "{nodes} nodes would place a node on k = ±π/2"
            )));
        }
        Ok(Self { nodes })
    }

    /// `max(1024, 16 t)` nodes.
    pub fn default_for(t: usize) -> Self {
        Self {
            nodes: (16 * t).max(1024),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn nodes(&self) -> impl Iterator<Item = f64> {
        let h = 2.0 * PI / self.nodes as f64;
        (0..self.nodes).map(move |j| -PI + (j as f64 + 0.5) * h)
    }

    /// Weight of each node in `∫ dk/2π`.
    pub fn weight(&self) -> f64 {
        1.0 / self.nodes as f64
    }
}

/// Which integral representation of `ψ(n, t)` to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegralForm {
    /// The two-term integrals obtained after substituting `k → u + π` in the
    /// first eigen-branch, each carrying the common oscillation
    /// `e^{-i(ω_k t + kn)}`.
    #[default]
    Substituted,
    /// `∫ dk/2π ψ̃(k, t) e^{-ikn}` with `ψ̃` from the kernel eigensystem.
    Direct,
}

/// Per-node integrand values, with everything that depends on `k` and `t`
/// but not on `n` folded in.
enum NodeTerms {
    /// `ψ(n) = Σ_j [(-1)^{n+t} a_j + b_j] e^{-ik_j n}` per component.
    Substituted {
        left: Vec<(Complex64, Complex64)>,
        right: Vec<(Complex64, Complex64)>,
    },
    /// `ψ(n) = Σ_j ψ̃(k_j) e^{-ik_j n}`.
    Direct(Vec<CoinState>),
}

/// Evaluates position-space amplitudes at a fixed time by quadrature.
pub struct ClosedFormSolver {
    t: u32,
    quad: QuadratureSpec,
    ks: Vec<f64>,
    terms: NodeTerms,
}

impl ClosedFormSolver {
    pub fn new(
        t: u32,
        barriers: BarrierParams,
        quad: QuadratureSpec,
        form: IntegralForm,
    ) -> Result<Self> {
        check_phi(barriers)?;
        let ks: Vec<f64> = quad.nodes().collect();
        let terms = match form {
            IntegralForm::Direct => {
                let vals = ks
                    .iter()
                    .map(|&k| {
                        momentum_wavefunction(k, t, barriers).map_err(|e| match e {
                            Error::DegenerateEigenvectors { k } => {
                                Error::QuadratureNodeSingular { k }
                            }
                            other => other,
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                NodeTerms::Direct(vals)
            }
            IntegralForm::Substituted => {
                let mut left = Vec::with_capacity(ks.len());
                let mut right = Vec::with_capacity(ks.len());
                for &k in &ks {
                    let (l, r) = substituted_terms(k, t, barriers)?;
                    left.push(l);
                    right.push(r);
                }
                NodeTerms::Substituted { left, right }
            }
        };
        Ok(Self { t, quad, ks, terms })
    }

    pub fn time(&self) -> u32 {
        self.t
    }

    /// `ψ(n, t)`.
    pub fn amplitude(&self, n: i64) -> CoinState {
        let w = self.quad.weight();
        let mut acc = CoinState::ZERO;
        match &self.terms {
            NodeTerms::Direct(vals) => {
                for (&k, v) in self.ks.iter().zip(vals) {
                    let phase = Complex64::from_polar(1.0, -k * n as f64);
                    acc += v.scale(phase);
                }
            }
            NodeTerms::Substituted { left, right } => {
                let sign = if (n + self.t as i64).rem_euclid(2) == 0 {
                    1.0
                } else {
                    -1.0
                };
                for ((&k, (la, lb)), (ra, rb)) in self.ks.iter().zip(left).zip(right) {
                    let phase = Complex64::from_polar(1.0, -k * n as f64);
                    acc.left += (sign * la + lb) * phase;
                    acc.right += (sign * ra + rb) * phase;
                }
            }
        }
        acc.scale(Complex64::new(w, 0.0))
    }

    /// Probabilities on `[-t, t]`.
    pub fn distribution(&self) -> Distribution {
        let t = self.t as i64;
        let probs = (-t..=t).map(|n| self.amplitude(n).norm_sqr()).collect();
        Distribution::new(-t, probs)
    }
}

fn check_phi(barriers: BarrierParams) -> Result<()> {
    if (barriers.phi() - FRAC_PI_4).abs() < SINGULAR_PHI_GUARD {
        return Err(Error::SingularParameterization(barriers.phi()));
    }
    Ok(())
}

type TermPair = (Complex64, Complex64);

/// Integrand factors of the substituted forms at one node, each already
/// multiplied by `e^{-iω_k t}`. Returns `((a_L, b_L), (a_R, b_R))` where `a`
/// carries the `(-1)^{n+t}` factor.
fn substituted_terms(k: f64, t: u32, barriers: BarrierParams) -> Result<(TermPair, TermPair)> {
    let alpha = barriers.alpha();
    let beta = barriers.beta();
    let d = omega(k, alpha);
    let emik = Complex64::from_polar(1.0, -k);
    let osc = Complex64::from_polar(1.0, -d.omega * t as f64);
    let spread = Complex64::from_polar(1.0, -(d.omega + k));

    let hop = 2.0 * SQRT_2 * alpha * (d.omega + k).cos();
    let stay = 2.0 * SQRT_2 * I * beta * d.sin_omega;
    let mix = 2.0 * I * alpha * beta * k.sin();
    let first = (1.0 - mix) / (4.0 - hop + stay);
    let second = (1.0 + mix) / (4.0 - hop - stay);

    let den_first = alpha + beta * emik;
    let den_second = alpha - beta * emik;
    if den_first.norm() < DENOMINATOR_FLOOR || den_second.norm() < DENOMINATOR_FLOOR {
        return Err(Error::QuadratureNodeSingular { k });
    }
    let ratio_first = (alpha - beta * emik - SQRT_2 * spread) / den_first;
    let ratio_second = (alpha + beta * emik - SQRT_2 * spread) / den_second;

    let left = (first * osc, second * osc);
    let right = (first * ratio_first * osc, second * ratio_second * osc);
    Ok((left, right))
}

/// `ψ(n, t)` from the substituted integral forms.
pub fn position_wavefunction(
    n: i64,
    t: u32,
    barriers: BarrierParams,
    quad: QuadratureSpec,
) -> Result<CoinState> {
    position_wavefunction_with(n, t, barriers, quad, IntegralForm::Substituted)
}

pub fn position_wavefunction_with(
    n: i64,
    t: u32,
    barriers: BarrierParams,
    quad: QuadratureSpec,
    form: IntegralForm,
) -> Result<CoinState> {
    Ok(ClosedFormSolver::new(t, barriers, quad, form)?.amplitude(n))
}

/// `P(n) = |ψ_L(n, t)|² + |ψ_R(n, t)|²` on `[-t, t]` from the substituted forms.
pub fn closed_form_distribution(
    t: u32,
    barriers: BarrierParams,
    quad: QuadratureSpec,
) -> Result<Distribution> {
    Ok(ClosedFormSolver::new(t, barriers, quad, IntegralForm::Substituted)?.distribution())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn omega_special_values() {
        for alpha in [0.0, 0.3, 1.0] {
            assert!(close(omega(FRAC_PI_2, alpha).omega, FRAC_PI_2, 1e-15));
        }
        assert!(close(omega(0.0, 1.0).omega, FRAC_PI_4, 1e-15));
        assert!(close(omega(PI, 1.0).omega, 3.0 * FRAC_PI_4, 1e-15));
    }

    #[test]
    fn dispersion_point_invariants() {
        for i in 0..=50 {
            let k = -PI + i as f64 * 2.0 * PI / 50.0;
            for alpha in [0.0, 0.25, 0.7, 1.0] {
                let d = omega(k, alpha);
                assert!(close(d.cos_omega, alpha * k.cos() / SQRT_2, 1e-14));
                assert!(d.sin_omega >= 0.0);
                assert!(close(d.cos_omega.powi(2) + d.sin_omega.powi(2), 1.0, 1e-14));
                assert!(close(d.omega.cos(), d.cos_omega, 1e-14));
                assert!((0.0..=PI).contains(&d.omega));
            }
        }
    }

    #[test]
    fn kernel_matches_transfer_matrix_sum() {
        let b = BarrierParams::from_phi(0.8).unwrap();
        let tm = TransferMatrices::new(b);
        for k in [-2.9, -1.0, 0.0, 0.4, 2.2] {
            let kern = kernel(k, b).unwrap();
            assert!((kern.matrix - tm.momentum_sum(k)).norm() < 1e-15);
        }
    }

    #[test]
    fn kernel_rejects_singular_denominator() {
        let b = BarrierParams::from_phi(FRAC_PI_4).unwrap();
        assert!(matches!(
            kernel(FRAC_PI_2, b),
            Err(Error::DegenerateEigenvectors { .. })
        ));
        assert!(kernel(-FRAC_PI_2, b).is_ok());
        assert!(kernel(0.3, b).is_ok());
    }

    #[test]
    fn quadrature_spec_validation() {
        assert!(QuadratureSpec::new(2).is_err());
        assert!(QuadratureSpec::new(6).is_err());
        assert!(QuadratureSpec::new(4).is_ok());
        assert!(QuadratureSpec::new(7).is_ok());
        assert_eq!(QuadratureSpec::default_for(10).len(), 1024);
        assert_eq!(QuadratureSpec::default_for(100).len(), 1600);
        for n in [4usize, 5, 7, 8, 12, 1024] {
            let q = QuadratureSpec::new(n).unwrap();
            assert!(q.nodes().all(|k| (k.abs() - FRAC_PI_2).abs() > 1e-12));
        }
    }

    #[test]
    fn closed_form_refuses_quarter_pi() {
        let b = BarrierParams::from_phi(std::f64::consts::FRAC_PI_4 + 1e-11).unwrap();
        let q = QuadratureSpec::new(64).unwrap();
        assert!(matches!(
            closed_form_distribution(10, b, q),
            Err(Error::SingularParameterization(_))
        ));
    }

    #[test]
    fn time_zero_is_a_point_mass() {
        let q = QuadratureSpec::new(64).unwrap();
        for phi in [0.0, 0.5, 1.3] {
            let b = BarrierParams::from_phi(phi).unwrap();
            for form in [IntegralForm::Substituted, IntegralForm::Direct] {
                let s = ClosedFormSolver::new(0, b, q, form).unwrap();
                assert!(s.amplitude(0).max_abs_diff(&CoinState::real(1.0, 0.0)) < 1e-14);
                for n in [-3, -1, 1, 2] {
                    assert!(s.amplitude(n).max_abs_diff(&CoinState::ZERO) < 1e-14);
                }
            }
        }
    }
}
