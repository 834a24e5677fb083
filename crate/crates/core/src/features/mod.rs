//! Size normalization, HOG description, cascading, scaling and PCA.

mod descriptor;
mod hog;
mod pca;
mod resize;
mod scale;

pub use descriptor::{assemble_descriptor, descriptor_len, FeatureVector, LayoutSpan, NormalizationSpec};
pub use hog::{hog, HogConfig};
pub use pca::{pca_apply, pca_fit, PcaModel};
pub use resize::resize_replicate;
pub use scale::{minmax_apply, minmax_fit, MinMaxScaler};
