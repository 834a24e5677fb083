//! Dense `f64` matrices on disk: `u32` rows, `u32` cols, then row-major
//! little-endian values. Metadata lives in a JSON sidecar next to the file.

use std::fs;
use std::path::{Path, PathBuf};

use lpdmi_core::linalg::Matrix;
use serde::Serialize;

use crate::error::{Error, Result};

pub const EXTENSION: &str = "tensor";

pub fn encode(m: &Matrix) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + m.as_slice().len() * 8);
    out.extend_from_slice(&(m.rows() as u32).to_le_bytes());
    out.extend_from_slice(&(m.cols() as u32).to_le_bytes());
    for v in m.as_slice() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn decode(bytes: &[u8]) -> std::result::Result<Matrix, (u64, String)> {
    if bytes.len() < 8 {
        return Err((bytes.len() as u64, "header needs 8 bytes".into()));
    }
    let rows = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let want = rows.checked_mul(cols).and_then(|n| n.checked_mul(8)).and_then(|n| n.checked_add(8));
    if want != Some(bytes.len()) {
        let offset = want.map_or(0, |w| w.min(bytes.len()));
        return Err((offset as u64, format!("{rows}x{cols} tensor does not fit a {} byte file", bytes.len())));
    }
    let data = bytes[8..].chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect();
    Ok(Matrix::from_vec(rows, cols, data).expect("length checked"))
}

pub fn write_tensor(path: &Path, m: &Matrix) -> Result<()> {
    super::write_atomic(path, &encode(m))
}

pub fn read_tensor(path: &Path) -> Result<Matrix> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes).map_err(|(offset, reason)| Error::Parse { path: path.to_path_buf(), offset, reason })
}

/// `x.tensor` → `x.tensor.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

/// Writes the tensor and its sidecar.
pub fn write_with_sidecar<T: Serialize>(path: &Path, m: &Matrix, meta: &T) -> Result<()> {
    write_tensor(path, m)?;
    super::write_json(&sidecar_path(path), meta)
}
