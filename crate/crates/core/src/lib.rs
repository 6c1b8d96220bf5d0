//! Computational Lie theory on SU(n) flag manifolds.
//!
//! The crate is organized bottom-up:
//!
//! * [`rootdata`]: exact root systems and weight lattices of type A, real-form
//!   labels and the Dolbeault degree `q`.
//! * [`matgroup`]: the matrix backend for SU(n) (algebra and group elements,
//!   exponential and logarithm, piecewise-exponential paths, the center and the
//!   torus characters).
//! * [`orbit`]: the flag manifold `SU(n)/T`, its Kirillov form, Hamiltonians and
//!   the Fubini–Study comparison on `CP¹`.
//! * [`transport`]: the line-bundle evolution equation, holonomy, action
//!   integrals and the central scalar κ.
//! * [`quantops`]: the Borel–Weil model on `CP¹`, quantization operators,
//!   enveloping-algebra elements and infinitesimal characters.
//! * [`homotopy`]: lower bounds on fundamental groups from the center image.
//! * [`loops`]: standard loops with central endpoints.
//! * [`verify`]: the seeded invariant suite used by the `check` command.

pub mod error;
pub mod homotopy;
pub mod json;
pub mod loops;
pub mod matgroup;
pub mod orbit;
pub mod quantops;
pub mod rootdata;
pub mod sample;
pub mod transport;
pub mod verify;

pub use error::{Error, Result};

/// Conventions that fix every sign and normalization choice in the crate.
pub mod conventions {
    /// A weight acts on the compact Cartan by `φ(diag(i a₁, …, i aₙ)) = Σ wⱼ aⱼ`
    /// and the torus character is `Φ(exp C) = exp(i φ(C))`.
    pub const CHARACTER: &str = "Phi(exp C) = exp(i*phi(C)), phi(diag(i a_1..i a_n)) = sum_j w_j a_j";
    /// Roots of type A have squared length 2.
    pub const FORM_NORMALIZATION: &str = "(alpha, alpha) = 2";
    /// `sl₂` triple and Casimir used by the enveloping-algebra routines.
    pub const SL2: &str = "[H,E]=2E, [H,F]=-2F, [E,F]=H, Casimir = E*F + F*E + 1/2*H^2";
    /// Holonomy around `∂S` equals `exp(CURVATURE_SIGN · i ∫_S ϖ)`.
    pub const CURVATURE_SIGN: i8 = 1;
    /// κ is recovered as `exp(i · action)`.
    pub const ACTION_EXPONENTIAL: &str = "kappa = exp(i*action), action = surface term + integral of h dt";
    pub const NUMBER_FORMAT: &str = "complex values as [re, im] with 15 significant digits, exact rationals as \"p/q\"";

    /// The block attached to every report.
    pub fn to_json() -> serde_json::Value {
        serde_json::json!({
            "character": CHARACTER,
            "curvature_sign": CURVATURE_SIGN,
            "action_exponential": ACTION_EXPONENTIAL,
            "form_normalization": FORM_NORMALIZATION,
            "sl2": SL2,
            "number_format": NUMBER_FORMAT,
            "weight_coordinates": "fundamental weights",
        })
    }
}
