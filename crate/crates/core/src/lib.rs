//! McEliece public-key encryption over quasi-cyclic low-density parity-check
//! (QC-LDPC) codes.
//!
//! The crate covers the whole pipeline:
//!
//! * [`bits`] and [`circulant`]: packed GF(2) vectors and the ring
//!   GF(2)\[x\]/(x^p + 1) of binary circulant matrices, including a
//!   Winograd/Karatsuba-style Toeplitz multiplier with binary-operation
//!   counting.
//! * [`qc`]: block-circulant matrices (products, inversion, transposition).
//! * [`code`]: random private codes built from difference families.
//! * [`decoder`]: Gallager bit-flipping decoding.
//! * [`crypto`]: key generation, encryption and decryption.
//! * [`threshold`], [`security`] and [`complexity`]: the analytical models
//!   used to dimension the system (decoding thresholds, attack work factors
//!   and operation counts).
//! * [`tables`]: parameter-grid sweeps over the analysis models.
//! * [`format`]: on-disk key and ciphertext encodings.
//!
//! Raw McEliece encryption is malleable and vulnerable to message-resend
//! attacks. No CCA2 conversion is applied here; callers that need one must
//! wrap [`crypto::encrypt`] themselves.

pub mod bits;
pub mod circulant;
pub mod code;
pub mod complexity;
pub mod crypto;
pub mod decoder;
pub mod error;
pub mod exec;
pub mod format;
pub mod qc;
pub mod security;
pub mod tables;
pub mod threshold;

pub use bits::BitVector;
pub use circulant::{CirculantElement, OpCounter, SparseCirculant, WinogradConfig};
pub use code::{CodeSpec, PrivateCode};
pub use crypto::{KeyPair, PrivateKey, PublicKey};
pub use decoder::{DecodeOutcome, DecoderConfig, FlipRule, ParityCheck};
pub use error::{Error, Result};
pub use exec::Exec;
pub use qc::QcMatrix;
