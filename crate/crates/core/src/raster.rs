//! Deterministic rendering of path traces and occupancy-grid features.
//!
//! The image frame is fixed to the square `[-1, 1]^2` with y pointing up.
//! All pixel positions and colours are computed with exact integer or
//! rational arithmetic, so output bytes do not depend on the platform's
//! floating-point behaviour.
//!
//! Segments are drawn with the classic all-octant integer Bresenham walk:
//! starting at the first endpoint, step along the major axis one pixel at a
//! time, stepping the minor axis whenever the doubled error term crosses
//! zero. Both endpoints are included.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use crate::cgr::{PathTrace, RationalPoint};
use crate::error::{Error, Result};
use crate::rational::Rational;

pub const DEFAULT_WIDTH: usize = 224;
pub const DEFAULT_HEIGHT: usize = 224;
pub const BACKGROUND: Rgb = [255, 255, 255];

pub type Rgb = [u8; 3];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum RenderMode {
    /// Every segment `p_{j-1} -> p_j`.
    #[default]
    Path,
    /// Only the endpoints `p_j`.
    Points,
}

impl FromStr for RenderMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(Self::Path),
            "points" => Ok(Self::Points),
            other => Err(Error::InvalidArgument(format!("unknown render mode {other:?}"))),
        }
    }
}

/// Row-major RGB image, 8 bits per channel.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RasterImage {
    width: usize,
    height: usize,
    pixels: Vec<u8>,
}

impl RasterImage {
    pub fn new(width: usize, height: usize, fill: Rgb) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::InvalidDimensions { width, height });
        }
        let pixels = fill.iter().copied().cycle().take(3 * width * height).collect();
        Ok(Self { width, height, pixels })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn get(&self, col: usize, row: usize) -> Rgb {
        let i = 3 * (row * self.width + col);
        [self.pixels[i], self.pixels[i + 1], self.pixels[i + 2]]
    }

    pub fn set(&mut self, col: usize, row: usize, color: Rgb) {
        let i = 3 * (row * self.width + col);
        self.pixels[i..i + 3].copy_from_slice(&color);
    }

    /// Pixels that differ from the background, in row-major order.
    pub fn foreground(&self) -> Vec<(usize, usize, Rgb)> {
        let mut out = Vec::new();
        for row in 0..self.height {
            for col in 0..self.width {
                let c = self.get(col, row);
                if c != BACKGROUND {
                    out.push((col, row, c));
                }
            }
        }
        out
    }
}

fn round_clamped(v: &Rational, max: usize) -> usize {
    let r = v.round_half_away();
    if r < BigInt::from(0) {
        0
    } else {
        r.to_usize().map_or(max, |r| r.min(max))
    }
}

/// Maps a point of `[-1, 1]^2` to `(column, row)`:
/// `column = round((x + 1) / 2 * (width - 1))`,
/// `row = round((1 - y) / 2 * (height - 1))`, halves rounded away from zero
/// and results clamped to the image.
pub fn map_to_pixel(p: &RationalPoint, width: usize, height: usize) -> (usize, usize) {
    let one = Rational::one();
    let half = Rational::new(1, 2).expect("valid");
    let scale = |t: Rational, extent: usize| -> usize {
        let max = extent.saturating_sub(1);
        round_clamped(&(&(&t * &half) * &Rational::from_integer(max as u64)), max)
    };
    (scale(&p.x + &one, width), scale(&one - &p.y, height))
}

/// Position gradient: `(round(255 t), round(255 (1 - t)), 128)`, `t` clamped
/// to `[0, 1]`, halves rounded away from zero.
pub fn colormap(t: f64) -> Rgb {
    let t = if t.is_nan() { 0.0 } else { t.clamp(0.0, 1.0) };
    [(255.0 * t).round() as u8, (255.0 * (1.0 - t)).round() as u8, 128]
}

/// Exact colour for step `j` of `n`: `colormap(j / n)` evaluated in
/// integers, so `.5` ties always round up.
pub fn step_color(j: usize, n: usize) -> Rgb {
    let n = n.max(1) as u64;
    let j = (j as u64).min(n);
    // round(255 m / n) with halves up, in integers.
    let channel = |m: u64| ((2 * 255 * m + n) / (2 * n)) as u8;
    [channel(j), channel(n - j), 128]
}

/// All pixels on the integer line from `a` to `b`, endpoints included.
pub fn line_pixels(a: (usize, usize), b: (usize, usize)) -> Vec<(usize, usize)> {
    let (mut x, mut y) = (a.0 as i64, a.1 as i64);
    let (x1, y1) = (b.0 as i64, b.1 as i64);
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;
    let mut out = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        out.push((x as usize, y as usize));
        if x == x1 && y == y1 {
            return out;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
}

/// Renders `trace` on a white background. Step `j` of `n` is coloured
/// `colormap(j / n)`; later steps overwrite earlier ones.
pub fn rasterize(trace: &PathTrace, width: usize, height: usize, mode: RenderMode) -> Result<RasterImage> {
    let mut image = RasterImage::new(width, height, BACKGROUND)?;
    let n = trace.len();
    for (j, step) in trace.steps.iter().enumerate() {
        let color = step_color(j + 1, n);
        let end = map_to_pixel(&step.p_new, width, height);
        match mode {
            RenderMode::Points => image.set(end.0, end.1, color),
            RenderMode::Path => {
                let start = map_to_pixel(&step.p_prev, width, height);
                for (c, r) in line_pixels(start, end) {
                    image.set(c, r, color);
                }
            }
        }
    }
    Ok(image)
}

/// Writes binary PPM (`P6`, maxval 255). Returns the number of bytes written.
pub fn write_ppm<W: Write>(image: &RasterImage, mut sink: W) -> std::io::Result<usize> {
    let header = format!("P6\n{} {}\n255\n", image.width, image.height);
    sink.write_all(header.as_bytes())?;
    sink.write_all(&image.pixels)?;
    Ok(header.len() + image.pixels.len())
}

/// Reads binary PPM with maxval 255, accepting arbitrary whitespace and `#`
/// comments in the header.
pub fn read_ppm<R: Read>(mut source: R) -> Result<RasterImage> {
    let mut data = Vec::new();
    source.read_to_end(&mut data)?;
    let mut pos = 0;
    let mut token = || -> Result<String> {
        loop {
            match data.get(pos) {
                Some(b'#') => {
                    while data.get(pos).is_some_and(|&b| b != b'\n') {
                        pos += 1;
                    }
                }
                Some(b) if b.is_ascii_whitespace() => pos += 1,
                Some(_) => break,
                None => return Err(Error::PpmParse("truncated header".into())),
            }
        }
        let start = pos;
        while data.get(pos).is_some_and(|b| !b.is_ascii_whitespace()) {
            pos += 1;
        }
        Ok(String::from_utf8_lossy(&data[start..pos]).into_owned())
    };
    if token()? != "P6" {
        return Err(Error::PpmParse("missing P6 magic".into()));
    }
    let mut number =
        |what: &str| -> Result<usize> { token()?.parse().map_err(|_| Error::PpmParse(format!("bad {what}"))) };
    let (width, height, maxval) = (number("width")?, number("height")?, number("maxval")?);
    if maxval != 255 {
        return Err(Error::PpmParse(format!("unsupported maxval {maxval}")));
    }
    // Exactly one whitespace byte separates the header from the raster.
    let body = data.get(pos + 1..).unwrap_or_default();
    let expected = 3 * width * height;
    if body.len() != expected {
        return Err(Error::PpmParse(format!("expected {expected} raster bytes, found {}", body.len())));
    }
    let mut image = RasterImage::new(width, height, BACKGROUND)?;
    image.pixels.copy_from_slice(body);
    Ok(image)
}

/// `2^r x 2^r` histogram of path points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OccupancyGrid {
    resolution: u32,
    counts: Vec<u64>,
}

impl OccupancyGrid {
    pub fn new(resolution: u32) -> Result<Self> {
        if !(1..=15).contains(&resolution) {
            return Err(Error::InvalidArgument(format!("grid resolution must be in 1..=15, got {resolution}")));
        }
        let side = 1usize << resolution;
        Ok(Self { resolution, counts: vec![0; side * side] })
    }

    pub fn resolution(&self) -> u32 {
        self.resolution
    }

    pub fn side(&self) -> usize {
        1 << self.resolution
    }

    pub fn get(&self, row: usize, col: usize) -> u64 {
        self.counts[row * self.side() + col]
    }

    /// Row-major counts.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Cell `(col, row) = (floor((x+1)/2 * 2^r), floor((1-y)/2 * 2^r))`,
    /// clamped to the grid.
    pub fn cell_of(&self, p: &RationalPoint) -> (usize, usize) {
        let side = self.side();
        let half_side = Rational::from_integer(side as u64 / 2);
        let one = Rational::one();
        let bin = |t: Rational| -> usize {
            let f = (&t * &half_side).floor();
            if f < BigInt::from(0) {
                0
            } else {
                f.to_usize().map_or(side - 1, |f| f.min(side - 1))
            }
        };
        (bin(&p.x + &one), bin(&one - &p.y))
    }

    pub fn add(&mut self, p: &RationalPoint) {
        let (col, row) = self.cell_of(p);
        let side = self.side();
        self.counts[row * side + col] += 1;
    }

    /// `row,col,count` for nonzero cells in row-major order, with a header.
    pub fn to_csv(&self) -> String {
        let side = self.side();
        let mut out = String::from("row,col,count\n");
        for (i, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                writeln!(out, "{},{},{}", i / side, i % side, c).expect("String write");
            }
        }
        out
    }
}

/// Bins every step's new point.
pub fn occupancy_grid(trace: &PathTrace, resolution: u32) -> Result<OccupancyGrid> {
    let mut grid = OccupancyGrid::new(resolution)?;
    for p in trace.points() {
        grid.add(p);
    }
    Ok(grid)
}
