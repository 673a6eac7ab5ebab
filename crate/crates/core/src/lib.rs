//! Simulation and analysis of the one-defect Hadamard walk on the integer line.
//!
//! The coin is the Hadamard matrix everywhere except at the origin, where it is
//! multiplied by the phase `ω = e^{2πiφ}`. The time-averaged limit measure of
//! the walk started at the origin is available through three independent
//! routes:
//!
//! * [`walk`]: direct unitary evolution and Cesàro averages of the site
//!   occupation probabilities,
//! * [`series`]: exact-rational first-return generating functions and the
//!   renewal convolution for the amplitude at the origin,
//! * [`spectral`]: unit-circle zeros of `Λ̃₀(z)` and the residues of the
//!   generating function there,
//!
//! and [`closed_form`] collects the closed-form expressions they are checked
//! against.

pub mod closed_form;
pub mod error;
pub mod series;
pub mod spectral;
pub mod walk;

pub use error::{Result, WalkError};
pub use num_complex::Complex64;

/// Sign selecting one of the two chiral presets `ᵀ[1/√2, ηi/√2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Eta {
    Plus,
    Minus,
}

impl Eta {
    pub fn value(self) -> f64 {
        match self {
            Eta::Plus => 1.0,
            Eta::Minus => -1.0,
        }
    }

    pub fn from_sign(sign: i32) -> Option<Eta> {
        match sign {
            1 => Some(Eta::Plus),
            -1 => Some(Eta::Minus),
            _ => None,
        }
    }
}
