use std::io::Write;
use std::path::Path;

use super::{atomic_write, ExportError};
use crate::raster::Raster;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ImageFormat {
    Ppm,
    Png,
}

impl ImageFormat {
    /// `.png` selects PNG; anything else is PPM.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("png") => ImageFormat::Png,
            _ => ImageFormat::Ppm,
        }
    }
}

/// 8-bit pixels in raster orientation (row 0 at `y0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rgb8 {
    pub width: usize,
    pub height: usize,
    pub pixels: Vec<[u8; 3]>,
}

fn channel(c: f64) -> u8 {
    (c.clamp(0.0, 1.0) * 255.0).round() as u8
}

pub fn quantize(r: &Raster) -> Rgb8 {
    Rgb8 {
        width: r.width,
        height: r.height,
        pixels: r.rgb.iter().map(|c| c.map(channel)).collect(),
    }
}

/// Rows top-down, i.e. from the largest `y` to `y0`.
fn top_down_bytes(img: &Rgb8) -> Vec<u8> {
    let mut out = Vec::with_capacity(img.width * img.height * 3);
    for j in (0..img.height).rev() {
        for px in &img.pixels[j * img.width..(j + 1) * img.width] {
            out.extend_from_slice(px);
        }
    }
    out
}

/// Binary PPM (P6, maxval 255) with `y` increasing upward.
pub fn encode_ppm(r: &Raster) -> Vec<u8> {
    let mut out = format!("P6\n{} {}\n255\n", r.width, r.height).into_bytes();
    out.extend(top_down_bytes(&quantize(r)));
    out
}

pub fn encode_png(r: &Raster) -> Result<Vec<u8>, ExportError> {
    let img = quantize(r);
    let buf = image::RgbImage::from_raw(img.width as u32, img.height as u32, top_down_bytes(&img))
        .expect("buffer length matches dimensions");
    let mut out = std::io::Cursor::new(Vec::new());
    buf.write_to(&mut out, image::ImageFormat::Png)
        .map_err(|e| ExportError::Encode(e.to_string()))?;
    Ok(out.into_inner())
}

/// Parses a P6 file with maxval 255 back into raster orientation.
pub fn decode_ppm(bytes: &[u8]) -> Result<Rgb8, ExportError> {
    let bad = |why: &str| ExportError::Format(why.to_string());
    let mut pos = 0;
    let mut fields = Vec::new();
    while fields.len() < 4 {
        // skip whitespace and comments
        while pos < bytes.len() && (bytes[pos].is_ascii_whitespace() || bytes[pos] == b'#') {
            if bytes[pos] == b'#' {
                while pos < bytes.len() && bytes[pos] != b'\n' {
                    pos += 1;
                }
            } else {
                pos += 1;
            }
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        fields
            .push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("header is not ASCII"))?);
    }
    if fields[0] != "P6" {
        return Err(bad("not a binary PPM (P6)"));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad("bad header number"));
    let (width, height, maxval) = (num(fields[1])?, num(fields[2])?, num(fields[3])?);
    if maxval != 255 {
        return Err(bad("only maxval 255 is supported"));
    }
    // exactly one whitespace byte separates the header from the data
    pos += 1;
    let data = bytes.get(pos..).ok_or_else(|| bad("missing pixel data"))?;
    if data.len() != width * height * 3 {
        return Err(bad("pixel data length does not match the header"));
    }
    let mut pixels = vec![[0u8; 3]; width * height];
    for (row, chunk) in data.chunks(width.max(1) * 3).enumerate().take(height) {
        let j = height - 1 - row;
        for k in 0..width {
            pixels[j * width + k] = [chunk[3 * k], chunk[3 * k + 1], chunk[3 * k + 2]];
        }
    }
    Ok(Rgb8 {
        width,
        height,
        pixels,
    })
}

pub fn read_ppm(path: &Path) -> Result<Rgb8, ExportError> {
    let bytes = std::fs::read(path).map_err(|e| ExportError::io(path, e))?;
    decode_ppm(&bytes)
}

pub fn write_image(r: &Raster, path: &Path, format: ImageFormat) -> Result<(), ExportError> {
    let bytes = match format {
        ImageFormat::Ppm => encode_ppm(r),
        ImageFormat::Png => encode_png(r)?,
    };
    atomic_write(path, |f| f.write_all(&bytes))
}

/// 16-bit PGM (P5, maxval 65535, big-endian) of the iteration counts,
/// same orientation as the image. Counts above 65535 saturate.
pub fn encode_pgm16(r: &Raster) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n65535\n", r.width, r.height).into_bytes();
    for j in (0..r.height).rev() {
        for &it in &r.iters[j * r.width..(j + 1) * r.width] {
            out.extend_from_slice(&(it.min(u16::MAX as u32) as u16).to_be_bytes());
        }
    }
    out
}

pub fn write_iters(r: &Raster, path: &Path) -> Result<(), ExportError> {
    let bytes = encode_pgm16(r);
    atomic_write(path, |f| f.write_all(&bytes))
}
