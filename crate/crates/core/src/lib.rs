//! Attention-guided erasing pipeline.
//!
//! End-to-end machinery for erasing-based augmentation experiments on
//! grayscale images: DINO-style self-supervised pretraining of a small
//! vision transformer, per-head [CLS] attention extraction and head
//! selection, binary mask generation, attention-guided and random erasing
//! transforms, transfer learning for four-class density classification,
//! and multi-seed evaluation with unpaired t-tests.
//!
//! All numeric kernels are generic over the scalar type via [`Scalar`]
//! (`f32` for training, `f64` for verification); concrete aliases live at
//! the crate root.

pub mod attnmap;
pub mod config;
pub mod dataset;
pub mod dino;
pub mod downstream;
pub mod erase;
pub mod error;
pub mod evalstat;
pub mod imgproc;
pub mod mat;
pub mod rng;
pub mod scalar;
pub mod viz;
pub mod vit;

pub use error::{AgeError, Result};
pub use mat::Mat;
pub use scalar::Scalar;

/// Matrix of the default training scalar.
pub type Mat32 = Mat<f32>;
/// Double-precision matrix, used by the verification harnesses.
pub type Mat64 = Mat<f64>;
/// Grayscale pixel grid (rows = height, cols = width), intensities in [0,1].
pub type Grid = Mat<f32>;
/// Backbone parameters at training precision.
pub type VitParams32 = vit::VitParams<f32>;
