//! Discrete-time coined quantum walks on the infinite line with tunneling
//! barriers, their closed-form momentum-space solution, ballistic peak
//! tracking, and the continuous-time walk's time-rescaling equivalence.
//!
//! The barrier model replaces the flip-flop shift `S` with `αS + βI`, where
//! `α = cos φ` is the amplitude to tunnel and hop and `β = i sin φ` the
//! amplitude to stay put.

pub mod classical;
pub mod cli;
pub mod ctqw;
pub mod distribution;
pub mod error;
pub mod momentum;
pub mod transport;
pub mod walk;

pub use distribution::Distribution;
pub use error::{Error, Result};
pub use walk::{BarrierParams, CoinState, InitialState, ShiftKind, SpinorField};
