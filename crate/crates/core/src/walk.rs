//! Exact state-vector evolution of the Hadamard-coined walk on the line.
//!
//! The lattice is stored as a dense window `[-(budget + 1), budget + 1]`
//! around the start site. The walk moves at most one site per step, so as
//! long as no more than `budget` steps are taken the window never truncates
//! anything and there are no boundary artifacts.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use num_complex::Complex64;

use crate::distribution::Distribution;
use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Coin (spin) amplitudes at a single site, in the `{|←⟩, |→⟩}` basis.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoinState {
    pub left: Complex64,
    pub right: Complex64,
}

impl CoinState {
    pub const ZERO: CoinState = CoinState {
        left: ZERO,
        right: ZERO,
    };

    pub fn new(left: Complex64, right: Complex64) -> Self {
        Self { left, right }
    }

    pub fn real(left: f64, right: f64) -> Self {
        Self::new(Complex64::new(left, 0.0), Complex64::new(right, 0.0))
    }

    pub fn norm_sqr(&self) -> f64 {
        self.left.norm_sqr() + self.right.norm_sqr()
    }

    pub fn is_zero(&self) -> bool {
        self.left == ZERO && self.right == ZERO
    }

    /// Hadamard coin: `(L, R) -> ((L + R)/√2, (L - R)/√2)`.
    pub fn hadamard(self) -> Self {
        Self {
            left: (self.left + self.right) * FRAC_1_SQRT_2,
            right: (self.left - self.right) * FRAC_1_SQRT_2,
        }
    }

    pub fn scale(self, c: Complex64) -> Self {
        Self {
            left: self.left * c,
            right: self.right * c,
        }
    }

    /// Largest component-wise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CoinState) -> f64 {
        (self.left - other.left)
            .norm()
            .max((self.right - other.right).norm())
    }
}

impl std::ops::Add for CoinState {
    type Output = CoinState;
    fn add(self, rhs: CoinState) -> CoinState {
        CoinState::new(self.left + rhs.left, self.right + rhs.right)
    }
}

impl std::ops::AddAssign for CoinState {
    fn add_assign(&mut self, rhs: CoinState) {
        self.left += rhs.left;
        self.right += rhs.right;
    }
}

/// Which shift operator moves the walker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftKind {
    /// `S|n,←⟩ = |n-1,→⟩`, `S|n,→⟩ = |n+1,←⟩`. Hermitian.
    FlipFlop,
    /// `S|n,←⟩ = |n-1,←⟩`, `S|n,→⟩ = |n+1,→⟩`. Not Hermitian.
    Moving,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InitialState {
    /// `|0⟩ ⊗ |←⟩`
    LeftLocalized,
    /// `|0⟩ ⊗ (|←⟩ + i|→⟩)/√2`
    Unbiased,
}

impl InitialState {
    pub fn coin(self) -> CoinState {
        match self {
            InitialState::LeftLocalized => CoinState::real(1.0, 0.0),
            InitialState::Unbiased => CoinState::new(
                Complex64::new(FRAC_1_SQRT_2, 0.0),
                Complex64::new(0.0, FRAC_1_SQRT_2),
            ),
        }
    }
}

/// Tunneling barrier `S -> αS + βI` with `α = cos φ`, `β = i sin φ`.
///
/// With `φ ∈ [0, π/2]` both `|α|² + |β|² = 1` and `αβ* + βα* = 0` hold by
/// construction, so the flip-flop barrier shift is unitary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierParams {
    phi: f64,
    alpha: f64,
    stay: f64,
}

impl BarrierParams {
    /// Barrier-free walk: `α = 1`, `β = 0` exactly.
    pub const fn none() -> Self {
        Self {
            phi: 0.0,
            alpha: 1.0,
            stay: 0.0,
        }
    }

    pub fn from_phi(phi: f64) -> Result<Self> {
        if !phi.is_finite() || !(0.0..=FRAC_PI_2).contains(&phi) {
            return Err(Error::InvalidPhi(phi));
        }
        Ok(Self {
            phi,
            alpha: phi.cos(),
            stay: phi.sin(),
        })
    }

    /// `α` given directly, with `β = i√(1 - α²)`.
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidAlpha(alpha));
        }
        Ok(Self {
            phi: alpha.acos(),
            alpha,
            stay: (1.0 - alpha * alpha).sqrt(),
        })
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Tunneling amplitude, real and in `[0, 1]`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Stay-put amplitude, pure imaginary.
    pub fn beta(&self) -> Complex64 {
        Complex64::new(0.0, self.stay)
    }

    pub fn is_barrier_free(&self) -> bool {
        self.stay == 0.0
    }
}

impl Default for BarrierParams {
    fn default() -> Self {
        Self::none()
    }
}

/// Two-component wavefunction `ψ(n, t)` over a finite lattice window.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinorField {
    offset: i64,
    amps: Vec<CoinState>,
    t: usize,
    budget: usize,
    unitary: bool,
}

impl SpinorField {
    /// Field prepared in `init` at the origin, with room for `steps_budget`
    /// steps.
    pub fn new(steps_budget: usize, init: InitialState) -> Self {
        Self::localized(steps_budget, init.coin())
    }

    /// Field holding an arbitrary coin state at the origin.
    pub fn localized(steps_budget: usize, coin: CoinState) -> Self {
        let radius = steps_budget + 1;
        let mut amps = vec![CoinState::ZERO; 2 * radius + 1];
        amps[radius] = coin;
        Self {
            offset: -(radius as i64),
            amps,
            t: 0,
            budget: steps_budget,
            unitary: true,
        }
    }

    /// Number of steps applied so far.
    pub fn time(&self) -> usize {
        self.t
    }

    pub fn steps_budget(&self) -> usize {
        self.budget
    }

    /// `false` once a non-unitary step (moving shift with barriers) has been
    /// applied. Such fields no longer carry a probability distribution.
    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    /// Inclusive range of stored positions.
    pub fn window(&self) -> (i64, i64) {
        (self.offset, self.offset + self.amps.len() as i64 - 1)
    }

    pub fn amplitude(&self, n: i64) -> CoinState {
        let idx = n - self.offset;
        if idx < 0 {
            return CoinState::ZERO;
        }
        self.amps
            .get(idx as usize)
            .copied()
            .unwrap_or(CoinState::ZERO)
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = (i64, CoinState)> + '_ {
        self.amps
            .iter()
            .enumerate()
            .map(move |(i, c)| (self.offset + i as i64, *c))
    }

    /// Total probability `Σ |ψ_L|² + |ψ_R|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(CoinState::norm_sqr).sum()
    }

    /// Applies the Hadamard coin at every site.
    pub fn apply_coin(&mut self) {
        for c in &mut self.amps {
            *c = c.hadamard();
        }
    }

    /// Applies `αS + βI` for the chosen shift.
    pub fn apply_shift(&mut self, kind: ShiftKind, barriers: BarrierParams) -> Result<()> {
        let (lo, hi) = self.window();
        let last = self.amps.len() - 1;
        if !self.amps[0].is_zero() {
            return Err(Error::BoundaryOverflow {
                position: lo - 1,
                lo,
                hi,
            });
        }
        if !self.amps[last].is_zero() {
            return Err(Error::BoundaryOverflow {
                position: hi + 1,
                lo,
                hi,
            });
        }

        let alpha = barriers.alpha();
        let beta = barriers.beta();
        let stays = !barriers.is_barrier_free();
        let mut next = vec![CoinState::ZERO; self.amps.len()];
        for (i, c) in self.amps.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let hop_left = c.left * alpha;
            let hop_right = c.right * alpha;
            match kind {
                ShiftKind::FlipFlop => {
                    next[i - 1].right += hop_left;
                    next[i + 1].left += hop_right;
                }
                ShiftKind::Moving => {
                    next[i - 1].left += hop_left;
                    next[i + 1].right += hop_right;
                }
            }
            if stays {
                next[i] += c.scale(beta);
            }
        }
        self.amps = next;
        if kind == ShiftKind::Moving && stays {
            self.unitary = false;
        }
        Ok(())
    }

    /// One step `U = (αS + βI)(I ⊗ H)`: coin, then shift.
    pub fn step(&mut self, kind: ShiftKind, barriers: BarrierParams) -> Result<()> {
        self.apply_coin();
        self.apply_shift(kind, barriers)?;
        self.t += 1;
        Ok(())
    }

    /// Applies `steps` steps; fails up front if that would exceed the budget.
    pub fn evolve(&mut self, kind: ShiftKind, barriers: BarrierParams, steps: usize) -> Result<()> {
        let remaining = self.budget.saturating_sub(self.t);
        if steps > remaining {
            return Err(Error::BudgetExceeded {
                requested: steps,
                remaining,
            });
        }
        for _ in 0..steps {
            self.step(kind, barriers)?;
        }
        Ok(())
    }

    /// `P(n) = |ψ_L(n)|² + |ψ_R(n)|²` for `n ∈ [-t, t]`.
    pub fn probabilities(&self) -> Distribution {
        let t = self.t as i64;
        let probs = (-t..=t).map(|n| self.amplitude(n).norm_sqr()).collect();
        Distribution::new(-t, probs)
    }
}

/// Runs a fresh walk from `init` for `steps` steps.
pub fn simulate(
    init: InitialState,
    kind: ShiftKind,
    barriers: BarrierParams,
    steps: usize,
) -> Result<SpinorField> {
    let mut field = SpinorField::new(steps, init);
    field.evolve(kind, barriers, steps)?;
    Ok(field)
}
