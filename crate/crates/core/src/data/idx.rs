//! Big-endian IDX containers, optionally gzip-compressed.

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use flate2::read::GzDecoder;
use flate2::write::GzEncoder;
use flate2::Compression;

use crate::error::{Error, Result};

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

/// Raw unsigned-byte image tensor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdxImages {
    pub count: usize,
    pub rows: usize,
    pub cols: usize,
    pub pixels: Vec<u8>,
}

/// Reads a whole file, transparently inflating gzip payloads.
pub fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    let mut raw = Vec::new();
    File::open(path)
        .and_then(|f| BufReader::new(f).read_to_end(&mut raw))
        .map_err(|e| Error::io(path, e))?;
    if raw.starts_with(&[0x1f, 0x8b]) {
        let mut out = Vec::new();
        GzDecoder::new(raw.as_slice())
            .read_to_end(&mut out)
            .map_err(|e| Error::io(path, e))?;
        return Ok(out);
    }
    Ok(raw)
}

fn header(bytes: &[u8], path: &Path, words: usize, expected: u32) -> Result<Vec<u32>> {
    if bytes.len() < 4 * words {
        return Err(Error::Truncated {
            path: path.to_path_buf(),
            context: format!("header needs {} bytes, file has {}", 4 * words, bytes.len()),
        });
    }
    let header: Vec<u32> = bytes[..4 * words]
        .chunks_exact(4)
        .map(|c| u32::from_be_bytes([c[0], c[1], c[2], c[3]]))
        .collect();
    if header[0] != expected {
        return Err(Error::BadMagic {
            path: path.to_path_buf(),
            found: header[0],
            expected,
        });
    }
    Ok(header)
}

fn payload<'a>(bytes: &'a [u8], path: &Path, offset: usize, len: usize) -> Result<&'a [u8]> {
    let have = bytes.len() - offset;
    if have < len {
        return Err(Error::Truncated {
            path: path.to_path_buf(),
            context: format!("payload needs {len} bytes, file has {have}"),
        });
    }
    Ok(&bytes[offset..offset + len])
}

pub fn parse_images(bytes: &[u8], path: &Path) -> Result<IdxImages> {
    let h = header(bytes, path, 4, IMAGES_MAGIC)?;
    let (count, rows, cols) = (h[1] as usize, h[2] as usize, h[3] as usize);
    let pixels = payload(bytes, path, 16, count * rows * cols)?.to_vec();
    Ok(IdxImages {
        count,
        rows,
        cols,
        pixels,
    })
}

pub fn parse_labels(bytes: &[u8], path: &Path) -> Result<Vec<u8>> {
    let h = header(bytes, path, 2, LABELS_MAGIC)?;
    Ok(payload(bytes, path, 8, h[1] as usize)?.to_vec())
}

pub fn read_images(path: &Path) -> Result<IdxImages> {
    parse_images(&read_bytes(path)?, path)
}

pub fn read_labels(path: &Path) -> Result<Vec<u8>> {
    parse_labels(&read_bytes(path)?, path)
}

pub fn encode_images(images: &IdxImages) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + images.pixels.len());
    for word in [IMAGES_MAGIC, images.count as u32, images.rows as u32, images.cols as u32] {
        out.extend_from_slice(&word.to_be_bytes());
    }
    out.extend_from_slice(&images.pixels);
    out
}

pub fn encode_labels(labels: &[u8]) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(labels.len() as u32).to_be_bytes());
    out.extend_from_slice(labels);
    out
}

/// Writes `bytes`, gzip-compressed when the path ends in `.gz`.
pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let gz = path.extension().is_some_and(|e| e == "gz");
    let result = if gz {
        let mut enc = GzEncoder::new(BufWriter::new(file), Compression::best());
        enc.write_all(bytes).and_then(|_| enc.finish()).and_then(|mut w| w.flush())
    } else {
        let mut w = BufWriter::new(file);
        w.write_all(bytes).and_then(|_| w.flush())
    };
    result.map_err(|e| Error::io(path, e))
}
