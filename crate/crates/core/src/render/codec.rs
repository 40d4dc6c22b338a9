//! PNG encoding with fixed settings: 8-bit RGB, no ancillary chunks.

use std::fs;
use std::io::Cursor;
use std::path::Path;

use super::{RasterImage, Rgb, IMAGE_SIZE};
use crate::error::{Error, Result};

fn png_err(e: impl std::fmt::Display) -> Error {
    Error::Png(e.to_string())
}

pub fn encode_png(img: &RasterImage) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    {
        let mut enc = png::Encoder::new(&mut out, IMAGE_SIZE as u32, IMAGE_SIZE as u32);
        enc.set_color(png::ColorType::Rgb);
        enc.set_depth(png::BitDepth::Eight);
        enc.set_compression(png::Compression::Fast);
        enc.set_filter(png::Filter::Sub);
        let mut writer = enc.write_header().map_err(png_err)?;
        let bytes: Vec<u8> = img.pixels().iter().flatten().copied().collect();
        writer.write_image_data(&bytes).map_err(png_err)?;
        writer.finish().map_err(png_err)?;
    }
    Ok(out)
}

/// Accepts 8-bit RGB or RGBA (alpha dropped) at 512×512.
pub fn decode_png(bytes: &[u8]) -> Result<RasterImage> {
    let decoder = png::Decoder::new(Cursor::new(bytes));
    let mut reader = decoder.read_info().map_err(png_err)?;
    let size = reader
        .output_buffer_size()
        .ok_or_else(|| Error::Png("image too large".into()))?;
    let mut buf = vec![0; size];
    let info = reader.next_frame(&mut buf).map_err(png_err)?;
    if info.width as usize != IMAGE_SIZE || info.height as usize != IMAGE_SIZE {
        return Err(Error::Png(format!(
            "expected {IMAGE_SIZE}x{IMAGE_SIZE}, got {}x{}",
            info.width, info.height
        )));
    }
    if info.bit_depth != png::BitDepth::Eight {
        return Err(Error::Png(format!("unsupported bit depth {:?}", info.bit_depth)));
    }
    let channels = match info.color_type {
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        other => return Err(Error::Png(format!("unsupported color type {other:?}"))),
    };
    let pixels: Vec<Rgb> = buf[..info.buffer_size()]
        .chunks_exact(channels)
        .map(|p| [p[0], p[1], p[2]])
        .collect();
    RasterImage::from_pixels(pixels)
}

pub fn write_png(img: &RasterImage, path: &Path) -> Result<()> {
    let bytes = encode_png(img)?;
    fs::write(path, bytes).map_err(|e| Error::io(path, e))
}

pub fn read_png(path: &Path) -> Result<RasterImage> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode_png(&bytes)
}
