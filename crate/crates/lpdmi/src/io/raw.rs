//! Native `raw_lpdmi` sequence files.
//!
//! Little-endian layout: magic `LPD1`, then `u32` frame count, width, height,
//! subject id, action label and repetition, then `frame_count` row-major
//! grids of `width x height` `u32` depth samples.

use std::fs;
use std::path::Path;

use lpdmi_core::depth::{DepthFrame, DepthSequence};

use crate::error::{Error, Result};

pub const MAGIC: &[u8; 4] = b"LPD1";
pub const HEADER_LEN: usize = 28;
pub const EXTENSION: &str = "lpd";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceFormat {
    RawLpdmi,
}

/// A decoding failure at a byte offset of the input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("byte {offset}: {reason}")]
pub struct ParseError {
    pub offset: u64,
    pub reason: String,
}

fn fail<T>(offset: usize, reason: impl Into<String>) -> std::result::Result<T, ParseError> {
    Err(ParseError { offset: offset as u64, reason: reason.into() })
}

fn u32_at(bytes: &[u8], offset: usize) -> u32 {
    u32::from_le_bytes(bytes[offset..offset + 4].try_into().unwrap())
}

pub fn load_sequence(path: &Path, format: SequenceFormat) -> Result<DepthSequence> {
    match format {
        SequenceFormat::RawLpdmi => {
            let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
            decode(&bytes).map_err(|e| Error::Parse { path: path.to_path_buf(), offset: e.offset, reason: e.reason })
        }
    }
}

/// Writes `seq` atomically; an unwritable destination leaves nothing behind.
pub fn save_sequence(seq: &DepthSequence, path: &Path) -> Result<()> {
    super::write_atomic(path, &encode(seq))
}

pub fn encode(seq: &DepthSequence) -> Vec<u8> {
    let (w, h) = (seq.width(), seq.height());
    let mut out = Vec::with_capacity(HEADER_LEN + seq.len() * w * h * 4);
    out.extend_from_slice(MAGIC);
    for v in [seq.len(), w, h, seq.subject_id as usize, seq.action_label as usize, seq.repetition as usize] {
        out.extend_from_slice(&(v as u32).to_le_bytes());
    }
    for frame in seq.frames() {
        for &s in frame.samples() {
            out.extend_from_slice(&s.to_le_bytes());
        }
    }
    out
}

pub fn decode(bytes: &[u8]) -> std::result::Result<DepthSequence, ParseError> {
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return fail(0, "missing LPD1 magic");
    }
    if bytes.len() < HEADER_LEN {
        return fail(bytes.len(), format!("header needs {HEADER_LEN} bytes, file has {}", bytes.len()));
    }
    let frames = u32_at(bytes, 4) as usize;
    let width = u32_at(bytes, 8) as usize;
    let height = u32_at(bytes, 12) as usize;
    let subject = u32_at(bytes, 16);
    let label = u32_at(bytes, 20);
    let repetition = u32_at(bytes, 24);
    for (offset, name, v) in [(4, "frame count", frames), (8, "width", width), (12, "height", height)] {
        if v == 0 {
            return fail(offset, format!("{name} is zero"));
        }
    }
    if subject == 0 {
        return fail(16, "subject id must be at least 1");
    }
    if repetition == 0 {
        return fail(24, "repetition must be at least 1");
    }
    let Some(frame_bytes) = width.checked_mul(height).and_then(|p| p.checked_mul(4)) else {
        return fail(8, "frame size overflows");
    };
    let payload = bytes.len() - HEADER_LEN;
    let present = payload / frame_bytes;
    if present < frames {
        return fail(
            HEADER_LEN + present * frame_bytes,
            format!("truncated payload: header declares {frames} frames, file holds {present} complete"),
        );
    }
    let end = HEADER_LEN + frames * frame_bytes;
    if bytes.len() > end {
        return fail(end, format!("{} trailing bytes after the last frame", bytes.len() - end));
    }
    let mut out = Vec::with_capacity(frames);
    for f in 0..frames {
        let start = HEADER_LEN + f * frame_bytes;
        let depth = bytes[start..start + frame_bytes]
            .chunks_exact(4)
            .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        out.push(DepthFrame::new(width, height, depth).expect("grid length matches header"));
    }
    Ok(DepthSequence::new(out, subject, label, repetition).expect("header fields validated"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn header(frames: u32, w: u32, h: u32) -> Vec<u8> {
        let mut b = MAGIC.to_vec();
        for v in [frames, w, h, 1, 2, 1] {
            b.extend_from_slice(&v.to_le_bytes());
        }
        b
    }

    #[test]
    fn zero_payload_decodes_to_blank_frame() {
        let mut b = header(1, 4, 4);
        b.extend_from_slice(&[0; 64]);
        let seq = decode(&b).unwrap();
        assert_eq!((seq.len(), seq.width(), seq.height()), (1, 4, 4));
        assert!(seq.frames()[0].is_background());
        assert_eq!(encode(&seq), b);
    }

    #[test]
    fn truncation_reports_the_first_missing_frame() {
        let mut b = header(3, 5, 2);
        b.extend_from_slice(&[7; 2 * 40 + 13]);
        assert_eq!(decode(&b).unwrap_err().offset, 28 + 2 * 40);
    }

    #[test]
    fn header_faults_name_their_field() {
        assert_eq!(decode(b"LPD2").unwrap_err().offset, 0);
        assert_eq!(decode(&header(1, 4, 4)[..20]).unwrap_err().offset, 20);
        assert_eq!(decode(&header(0, 4, 4)).unwrap_err().offset, 4);
        assert_eq!(decode(&header(1, 4, 0)).unwrap_err().offset, 12);
        let mut b = header(1, 1, 1);
        b.extend_from_slice(&[0; 6]);
        assert_eq!(decode(&b).unwrap_err().offset, 32);
    }
}
