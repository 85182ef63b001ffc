//! Noncanonical quantum optics.
//!
//! The field is quantized with a single oscillator whose frequency is an
//! operator. Its creation and annihilation operators obey the non-canonical
//! relation `[a_λ, a†_λ] = 𝟙_λ`, where `𝟙_λ` is central and the `𝟙_λ` sum to
//! the identity. This crate provides:
//!
//! * [`algebra`]: operator words, a parser, and normal ordering,
//! * [`vacuum`]: vacuum expectation values for product-form vacua,
//! * [`perturbation`]: canonical vs non-canonical ratios (X-factors) and
//!   emission factors,
//! * [`fock`]: a dense truncated Fock-space realization used as an
//!   independent oracle,
//! * [`blackbody`]: the modified blackbody spectrum and its Planck limit,
//! * [`cli`]: the `ncqo` command-line front end.

pub mod algebra;
pub mod blackbody;
pub mod cli;
pub mod fock;
pub mod perturbation;
pub mod vacuum;
