//! Converter for MSRAction3D depth files (`aXX_sYY_eZZ_sdepth.bin`).
//!
//! Layout: little-endian `u32` frame count, columns and rows, then per frame
//! `rows x cols` `i32` samples row-major. Some distributions append, after
//! each row, one `u8` per column of skeleton ids; those bytes are skipped.

use std::fs;
use std::path::Path;

use lpdmi_core::depth::{DepthFrame, DepthSequence};

use super::raw::ParseError;
use crate::error::{Error, Result};

/// `(action, subject, repetition)` from an `aXX_sYY_eZZ...` file stem.
pub fn parse_name(stem: &str) -> Option<(u32, u32, u32)> {
    let mut parts = stem.split('_');
    let mut field = |tag: char| -> Option<u32> {
        let p = parts.next()?;
        p.strip_prefix(tag)?.parse().ok()
    };
    Some((field('a')?, field('s')?, field('e')?))
}

pub fn load_msr(path: &Path) -> Result<DepthSequence> {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default();
    let (action, subject, repetition) = parse_name(stem)
        .ok_or_else(|| Error::Data(format!("{}: name does not follow aXX_sYY_eZZ", path.display())))?;
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes, action, subject, repetition)
        .map_err(|e| Error::Parse { path: path.to_path_buf(), offset: e.offset, reason: e.reason })
}

pub fn decode(bytes: &[u8], action: u32, subject: u32, repetition: u32) -> std::result::Result<DepthSequence, ParseError> {
    let fail = |offset: usize, reason: String| Err(ParseError { offset: offset as u64, reason });
    if bytes.len() < 12 {
        return fail(bytes.len(), "header needs 12 bytes".into());
    }
    let word = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap()) as usize;
    let (frames, cols, rows) = (word(0), word(4), word(8));
    if frames == 0 || cols == 0 || rows == 0 {
        return fail(0, format!("empty header: {frames} frames of {cols}x{rows}"));
    }
    let pixels = rows * cols;
    let payload = bytes.len() - 12;
    let row_stride = if payload == frames * pixels * 4 {
        cols * 4
    } else if payload == frames * pixels * 5 {
        cols * 5
    } else {
        return fail(12, format!("payload of {payload} bytes fits neither layout for {frames} frames of {cols}x{rows}"));
    };
    let mut out = Vec::with_capacity(frames);
    for f in 0..frames {
        let mut depth = Vec::with_capacity(pixels);
        for r in 0..rows {
            let start = 12 + (f * rows + r) * row_stride;
            for c in 0..cols {
                let o = start + 4 * c;
                let v = i32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
                if v < 0 {
                    return fail(o, format!("negative depth sample {v}"));
                }
                depth.push(v as u32);
            }
        }
        out.push(DepthFrame::new(cols, rows, depth).expect("grid length matches header"));
    }
    DepthSequence::new(out, subject, action, repetition).or_else(|e| fail(0, e.to_string()))
}
