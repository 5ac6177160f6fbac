//! Raster rendering of the gasket.
//!
//! The simplex is drawn as an equilateral triangle in the plane through its
//! orthonormal tangent-basis coordinates. The gasket approximation paints
//! the images of the simplex under every depth-`d` branch composition;
//! painting is a plain subdivision (no chaos game: the branch maps are only
//! weakly contracting and iterated random orbits pile up at the corners).

use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::ifs::GeneratorSet;
use crate::mat3::Mat3;

pub const BACKGROUND: u8 = 255;
pub const FOREGROUND: u8 = 0;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    /// Row-major grayscale pixels.
    pub pixels: Vec<u8>,
}

/// Plane coordinates of a barycentric point: first basis coordinate of
/// `x - barycenter` and the (real) second coordinate.
pub fn plane_coords(x: [f64; 3]) -> [f64; 2] {
    [
        x[0] + x[2] / 2.0 - 0.5,
        3f64.sqrt() / 2.0 * x[2] - 3f64.sqrt() / 6.0,
    ]
}

/// Raster placement of the triangle: margins and y-flip.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub width: u32,
    pub height: u32,
    scale: f64,
    x0: f64,
    y0: f64,
}

impl Frame {
    pub fn new(width: u32) -> Frame {
        let margin = 0.03f64;
        let span_x = 1.0;
        let span_y = 3f64.sqrt() / 2.0;
        let scale = width as f64 * (1.0 - 2.0 * margin) / span_x;
        let height = (scale * span_y + 2.0 * margin * width as f64).ceil() as u32;
        Frame {
            width,
            height,
            scale,
            // Plane coordinates: alpha in [-1/2, 1/2], beta in
            // [-sqrt(3)/6, sqrt(3)/3].
            x0: width as f64 * margin + 0.5 * scale,
            y0: margin * width as f64 + scale * 3f64.sqrt() / 3.0,
        }
    }

    /// Pixel position of a barycentric point (y grows downward, apex on
    /// top).
    pub fn to_pixel(&self, x: [f64; 3]) -> [f64; 2] {
        let p = plane_coords(x);
        [self.x0 + self.scale * p[0], self.y0 - self.scale * p[1]]
    }
}

fn fill_triangle(raster: &mut Raster, tri: [[f64; 2]; 3]) {
    let min_x = tri.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
    let max_x = tri.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
    let min_y = tri.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let max_y = tri.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let x_lo = min_x.floor().max(0.0) as u32;
    let x_hi = (max_x.ceil() as i64).clamp(0, raster.width as i64 - 1) as u32;
    let y_lo = min_y.floor().max(0.0) as u32;
    let y_hi = (max_y.ceil() as i64).clamp(0, raster.height as i64 - 1) as u32;

    let edge = |a: [f64; 2], b: [f64; 2], p: [f64; 2]| -> f64 {
        (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
    };
    for py in y_lo..=y_hi {
        for px in x_lo..=x_hi {
            let p = [px as f64 + 0.5, py as f64 + 0.5];
            let e0 = edge(tri[0], tri[1], p);
            let e1 = edge(tri[1], tri[2], p);
            let e2 = edge(tri[2], tri[0], p);
            let inside = (e0 >= 0.0 && e1 >= 0.0 && e2 >= 0.0)
                || (e0 <= 0.0 && e1 <= 0.0 && e2 <= 0.0);
            if inside {
                raster.pixels[(py * raster.width + px) as usize] = FOREGROUND;
            }
        }
    }
}

fn paint_branches(raster: &mut Raster, frame: &Frame, product: &Mat3, depth: u32) -> Result<()> {
    if depth == 0 {
        // Branch image: the projectivized columns are the images of the
        // three vertices.
        let mut tri = [[0.0f64; 2]; 3];
        for (k, slot) in tri.iter_mut().enumerate() {
            let col = product.col(k);
            let s = (col[0] + col[1] + col[2]) as f64;
            *slot = frame.to_pixel([col[0] as f64 / s, col[1] as f64 / s, col[2] as f64 / s]);
        }
        fill_triangle(raster, tri);
        return Ok(());
    }
    let gens = GeneratorSet::standard();
    for sym in 1u8..=3 {
        let next = product.mul(gens.generator(sym))?;
        paint_branches(raster, frame, &next, depth - 1)?;
    }
    Ok(())
}

/// Render the depth-`d` gasket covering into a grayscale raster.
pub fn render_gasket(depth: u32, width: u32) -> Result<Raster> {
    if depth < 1 {
        return Err(Error::InvalidConfig("render depth must be at least 1".into()));
    }
    if width < 64 {
        return Err(Error::InvalidConfig("render width must be at least 64".into()));
    }
    let frame = Frame::new(width);
    let mut raster = Raster {
        width: frame.width,
        height: frame.height,
        pixels: vec![BACKGROUND; (frame.width * frame.height) as usize],
    };
    paint_branches(&mut raster, &frame, &Mat3::IDENTITY, depth)?;
    Ok(raster)
}

/// Binary PGM (P5), the bit-exact baseline format.
pub fn write_pgm(raster: &Raster, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(raster.pixels.len() + 64);
    write!(
        out,
        "P5\n# schema_version 1\n{} {}\n255\n",
        raster.width, raster.height
    )?;
    out.extend_from_slice(&raster.pixels);
    std::fs::write(path, out)?;
    Ok(())
}

/// Optional PNG output.
pub fn write_png(raster: &Raster, path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    let mut encoder = png::Encoder::new(std::io::BufWriter::new(file), raster.width, raster.height);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Eight);
    encoder
        .add_text_chunk("schema_version".into(), "1".into())
        .map_err(|e| Error::ImageEncoding(e.to_string()))?;
    let mut writer = encoder
        .write_header()
        .map_err(|e| Error::ImageEncoding(e.to_string()))?;
    writer
        .write_image_data(&raster.pixels)
        .map_err(|e| Error::ImageEncoding(e.to_string()))?;
    Ok(())
}

/// Write a raster, choosing the format from the file extension (`.png` for
/// PNG, anything else is PGM).
pub fn write_image(raster: &Raster, path: &Path) -> Result<()> {
    match path.extension().and_then(|e| e.to_str()) {
        Some("png") => write_png(raster, path),
        _ => write_pgm(raster, path),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplex::{projective_apply, SimplexPoint};

    fn pixel_at(raster: &Raster, frame: &Frame, x: [f64; 3]) -> u8 {
        let p = frame.to_pixel(x);
        raster.pixels[(p[1] as u32 * raster.width + p[0] as u32) as usize]
    }

    #[test]
    fn depth_one_has_three_triangles_and_a_hole() {
        let width = 256;
        let raster = render_gasket(1, width).unwrap();
        let frame = Frame::new(width);
        let gens = GeneratorSet::standard();
        for sym in 1u8..=3 {
            let centroid =
                projective_apply(gens.generator(sym), &SimplexPoint::barycenter()).unwrap();
            assert_eq!(
                pixel_at(&raster, &frame, centroid.to_f64()),
                FOREGROUND,
                "centroid of branch {sym} must be painted"
            );
        }
        assert_eq!(
            pixel_at(&raster, &frame, [1.0 / 3.0; 3]),
            BACKGROUND,
            "the central hole must stay blank"
        );
    }

    #[test]
    fn rendering_is_deterministic() {
        let a = render_gasket(3, 128).unwrap();
        let b = render_gasket(3, 128).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn painted_pixels_lie_inside_the_simplex_triangle() {
        let width = 128;
        let raster = render_gasket(2, width).unwrap();
        let frame = Frame::new(width);
        let corners = [
            frame.to_pixel([1.0, 0.0, 0.0]),
            frame.to_pixel([0.0, 1.0, 0.0]),
            frame.to_pixel([0.0, 0.0, 1.0]),
        ];
        let edge = |a: [f64; 2], b: [f64; 2], p: [f64; 2]| -> f64 {
            (b[0] - a[0]) * (p[1] - a[1]) - (b[1] - a[1]) * (p[0] - a[0])
        };
        for py in 0..raster.height {
            for px in 0..raster.width {
                if raster.pixels[(py * raster.width + px) as usize] == FOREGROUND {
                    let p = [px as f64 + 0.5, py as f64 + 0.5];
                    let e0 = edge(corners[0], corners[1], p);
                    let e1 = edge(corners[1], corners[2], p);
                    let e2 = edge(corners[2], corners[0], p);
                    let slack = 1.5; // half-pixel rasterization slack
                    let inside = (e0 >= -slack * frame.width as f64
                        && e1 >= -slack * frame.width as f64
                        && e2 >= -slack * frame.width as f64)
                        || (e0 <= slack * frame.width as f64
                            && e1 <= slack * frame.width as f64
                            && e2 <= slack * frame.width as f64);
                    assert!(inside, "pixel ({px},{py}) outside the simplex");
                }
            }
        }
    }

    #[test]
    fn bad_configs_rejected() {
        assert!(render_gasket(0, 128).is_err());
        assert!(render_gasket(1, 16).is_err());
    }
}
