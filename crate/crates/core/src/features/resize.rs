use crate::image::ViewImage;
use crate::{Error, Result};

/// Nearest-neighbour resize: `out(i, j) = in(floor(i·R/R'), floor(j·C/C'))`.
///
/// Upsizing copies pixels into blocks and never creates new values.
pub fn resize_replicate(img: &ViewImage, target: (usize, usize)) -> Result<ViewImage> {
    let (rows, cols) = target;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidDimensions(alloc::format!("resize target must be positive, got {rows}x{cols}")));
    }
    if img.dims() == target {
        return Ok(img.clone());
    }
    let (src_rows, src_cols) = img.dims();
    Ok(ViewImage::from_fn(img.view, rows, cols, |i, j| img.get(i * src_rows / rows, j * src_cols / cols)))
}
