//! `HFFX` feature cache.
//!
//! Layout, little-endian throughout:
//!
//! ```text
//! magic    4 bytes  "HFFX"
//! version  u32
//! n_rows   u64
//! n_cols   u64
//! tag_len  u32, followed by tag_len bytes of UTF-8 spec tag
//! labels   n_rows x u8
//! data     n_rows x n_cols x f32, row-major
//! ```

use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::features::FeatureSpec;
use crate::matrix::Matrix;
use crate::scalar::Real;

pub const CACHE_MAGIC: &[u8; 4] = b"HFFX";
pub const CACHE_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub struct CachedFeatures<T> {
    pub matrix: Matrix<T>,
    pub labels: Vec<u8>,
    pub spec_tag: String,
}

fn check_tag_dimension(spec_tag: &str, n_cols: usize) -> Result<()> {
    if let Ok(spec) = FeatureSpec::parse(spec_tag) {
        if spec.dimension() != n_cols {
            return Err(Error::Format(format!(
                "spec tag {spec_tag:?} implies {} columns, matrix has {n_cols}",
                spec.dimension()
            )));
        }
    }
    Ok(())
}

/// Encodes the cache into memory.
pub fn encode_cache<T: Real>(matrix: &Matrix<T>, labels: &[u8], spec_tag: &str) -> Result<Vec<u8>> {
    if matrix.n_rows() != labels.len() {
        return Err(Error::LengthMismatch(labels.len(), matrix.n_rows()));
    }
    check_tag_dimension(spec_tag, matrix.n_cols())?;
    let tag = spec_tag.as_bytes();
    let mut buf = Vec::with_capacity(28 + tag.len() + labels.len() + 4 * matrix.as_slice().len());
    buf.extend_from_slice(CACHE_MAGIC);
    buf.extend_from_slice(&CACHE_VERSION.to_le_bytes());
    buf.extend_from_slice(&(matrix.n_rows() as u64).to_le_bytes());
    buf.extend_from_slice(&(matrix.n_cols() as u64).to_le_bytes());
    buf.extend_from_slice(&(tag.len() as u32).to_le_bytes());
    buf.extend_from_slice(tag);
    buf.extend_from_slice(labels);
    for v in matrix.as_slice() {
        let f = v.to_f32().unwrap_or(f32::NAN);
        buf.extend_from_slice(&f.to_le_bytes());
    }
    Ok(buf)
}

/// Writes the cache atomically: a sibling temp file is renamed over `path`.
pub fn write_cache<T: Real>(
    matrix: &Matrix<T>,
    labels: &[u8],
    spec_tag: &str,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let bytes = encode_cache(matrix, labels, spec_tag)?;
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)
            .map_err(|e| Error::io(format!("creating {}", parent.display()), e))?;
    }
    let tmp = path.with_extension(format!("tmp-{}", std::process::id()));
    let ctx = || format!("writing {}", tmp.display());
    let mut file = std::fs::File::create(&tmp).map_err(|e| Error::io(ctx(), e))?;
    file.write_all(&bytes).map_err(|e| Error::io(ctx(), e))?;
    file.sync_all().map_err(|e| Error::io(ctx(), e))?;
    drop(file);
    std::fs::rename(&tmp, path).map_err(|e| Error::io(format!("renaming to {}", path.display()), e))
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, expected_total: u64) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(Error::Truncation {
                expected: expected_total,
                actual: self.buf.len() as u64,
            });
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        let at_least = (self.pos + 4) as u64;
        Ok(u32::from_le_bytes(self.take(4, at_least)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        let at_least = (self.pos + 8) as u64;
        Ok(u64::from_le_bytes(self.take(8, at_least)?.try_into().unwrap()))
    }
}

/// Decodes an in-memory cache.
pub fn decode_cache<T: Real>(bytes: &[u8]) -> Result<CachedFeatures<T>> {
    if bytes.len() < 4 || &bytes[..4] != CACHE_MAGIC {
        return Err(Error::Format("bad magic; expected \"HFFX\"".into()));
    }
    let mut r = Reader { buf: bytes, pos: 4 };
    let version = r.u32()?;
    if version != CACHE_VERSION {
        return Err(Error::Format(format!("unsupported version {version}")));
    }
    let n_rows = r.u64()?;
    let n_cols = r.u64()?;
    let tag_len = r.u32()? as usize;
    let tag_bytes = r.take(tag_len, (r.pos + tag_len) as u64)?;
    let spec_tag = String::from_utf8(tag_bytes.to_vec())
        .map_err(|_| Error::Format("spec tag is not UTF-8".into()))?;

    let expected = (r.pos as u64)
        .checked_add(n_rows)
        .and_then(|v| n_rows.checked_mul(n_cols)?.checked_mul(4)?.checked_add(v))
        .ok_or_else(|| Error::Format("header sizes overflow".into()))?;
    if (bytes.len() as u64) < expected {
        return Err(Error::Truncation {
            expected,
            actual: bytes.len() as u64,
        });
    }
    let (n_rows, n_cols) = (n_rows as usize, n_cols as usize);
    let labels = r.take(n_rows, expected)?.to_vec();
    let data = r
        .take(n_rows * n_cols * 4, expected)?
        .chunks_exact(4)
        .map(|c| T::from_f32(f32::from_le_bytes(c.try_into().unwrap())).unwrap_or(T::nan()))
        .collect();
    check_tag_dimension(&spec_tag, n_cols)?;
    Ok(CachedFeatures {
        matrix: Matrix::from_vec(n_rows, n_cols, data)?,
        labels,
        spec_tag,
    })
}

pub fn read_cache<T: Real>(path: impl AsRef<Path>) -> Result<CachedFeatures<T>> {
    let path = path.as_ref();
    let bytes = std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
    decode_cache(&bytes)
}
