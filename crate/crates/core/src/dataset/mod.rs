//! Image ingestion, deterministic stratified splits and the binary feature cache.

mod cache;
mod image;
mod scan;
mod split;

pub use self::cache::{decode_cache, encode_cache, read_cache, write_cache, CachedFeatures, CACHE_MAGIC, CACHE_VERSION};
pub use self::image::{load_image, ImageRecord, IMAGE_BYTES, IMAGE_SIDE};
pub use self::scan::{scan_dataset, scan_split, Split};
pub use self::split::{stratified_split, stratified_subset, validation_count, SplitIndices};
