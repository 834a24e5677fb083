//! 8-bit binary PGM (`P5`) debug images.

use std::path::Path;

use lpdmi_core::ViewImage;

use crate::error::Result;

/// Pixel range mapped affinely onto `0..=255`; signed levels display with
/// zero at mid-grey only if the range is symmetric.
pub fn encode(img: &ViewImage) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.cols(), img.rows()).into_bytes();
    out.extend_from_slice(&img.to_display_bytes());
    out
}

pub fn write_pgm(path: &Path, img: &ViewImage) -> Result<()> {
    super::write_atomic(path, &encode(img))
}
