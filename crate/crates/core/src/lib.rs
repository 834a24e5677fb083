//! Core numerics for depth-video action recognition with Laplacian-pyramid
//! depth motion images (LP-DMI).
//!
//! The pipeline, stage by stage:
//!
//! 1. [`projection`]: each depth frame is projected onto the front, side and
//!    top planes; the temporal minimum of those maps gives one depth motion
//!    image (DMI) per view.
//! 2. [`pyramid`]: every DMI becomes the bottom level of a Gaussian pyramid,
//!    from which the Laplacian pyramid is derived.
//! 3. [`features`]: pyramid levels are size-normalized by pixel replication,
//!    described with HOG and cascaded layer by layer, then min-max scaled and
//!    reduced with PCA.
//! 4. [`elm`]: an extreme learning machine with a closed-form pseudoinverse
//!    solution classifies the reduced descriptors.
//! 5. [`eval`]: split protocols and confusion matrices.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, IO and the
//! command-line harness live in the `lpdmi` crate.

#![cfg_attr(not(any(feature = "std", test)), no_std)]

extern crate alloc;

pub mod depth;
pub mod elm;
mod error;
pub mod eval;
pub mod features;
pub mod image;
pub mod linalg;
pub mod projection;
pub mod pyramid;
pub mod rng;

pub use error::{Error, Result};
pub use image::{View, ViewImage};
