pub mod dense;
pub mod gallery;
pub mod matrix;
pub mod system;

pub use dense::{DenseMatrix, Lu, Qr};
pub use gallery::{build_gallery, gallery_matrix, GalleryKind};
pub use matrix::{BandedMatrix, RowMatrix, RowView, StorageKind};
pub use system::{LinearSystem, NoiseSpec};
