//! Threshold and median filtering that turns a noisy capture into a clean
//! binary diagram.

use crate::error::{Error, Result};
use crate::raster::GrayImage;

/// Thresholding and median settings for the binary-median pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PreprocessParams {
    pub threshold: u8,
    /// Odd median window side.
    pub kernel: usize,
    /// Number of median passes after thresholding.
    pub passes: usize,
    /// Largest window side for the adaptive median.
    pub adaptive_max: usize,
}

impl Default for PreprocessParams {
    fn default() -> Self {
        Self {
            threshold: 60,
            kernel: 7,
            passes: 2,
            adaptive_max: 7,
        }
    }
}

impl PreprocessParams {
    /// Binarization level used by the batch binarize script (`threshold=20`).
    pub const CODE_THRESHOLD: u8 = 20;

    pub fn validate(&self) -> Result<()> {
        check_kernel(self.kernel)?;
        check_kernel(self.adaptive_max)?;
        if self.passes == 0 {
            return Err(Error::InvalidParameter("passes must be at least 1".into()));
        }
        Ok(())
    }
}

fn check_kernel(k: usize) -> Result<()> {
    if k < 3 || k.is_multiple_of(2) {
        Err(Error::EvenKernel(k))
    } else {
        Ok(())
    }
}

/// 255 where the pixel is strictly above `threshold`, else 0.
pub fn global_threshold(img: &GrayImage, threshold: u8) -> GrayImage {
    img.map(|v| if v > threshold { 255 } else { 0 })
}

/// Median of each `kernel x kernel` window with replicate padding.
pub fn median_filter(img: &GrayImage, kernel: usize) -> Result<GrayImage> {
    check_kernel(kernel)?;
    let radius = (kernel / 2) as isize;
    let (h, w) = img.shape();
    let mut window = Vec::with_capacity(kernel * kernel);
    let mut out = GrayImage::filled(h, w, 0);
    for r in 0..h {
        for c in 0..w {
            gather(img, r, c, radius, &mut window);
            let mid = window.len() / 2;
            let (_, m, _) = window.select_nth_unstable(mid);
            out.set(r, c, *m);
        }
    }
    Ok(out)
}

pub fn double_median_filter(img: &GrayImage, kernel: usize) -> Result<GrayImage> {
    let once = median_filter(img, kernel)?;
    median_filter(&once, kernel)
}

/// Two-stage adaptive median with windows growing from 3 up to `s_max`.
///
/// Stage A accepts a window whose median lies strictly between its min and
/// max; Stage B then keeps the pixel if it also lies strictly inside that
/// range and otherwise outputs the median. A pixel that never passes Stage A
/// gets the median of the largest window.
pub fn adaptive_median_filter(img: &GrayImage, s_max: usize) -> Result<GrayImage> {
    check_kernel(s_max)?;
    let (h, w) = img.shape();
    let mut window = Vec::with_capacity(s_max * s_max);
    let mut out = GrayImage::filled(h, w, 0);
    for r in 0..h {
        for c in 0..w {
            let centre = img.get(r, c);
            let mut size = 3;
            let value = loop {
                gather(img, r, c, (size / 2) as isize, &mut window);
                window.sort_unstable();
                let lo = window[0];
                let hi = window[window.len() - 1];
                let med = window[window.len() / 2];
                if lo < med && med < hi {
                    break if lo < centre && centre < hi {
                        centre
                    } else {
                        med
                    };
                }
                if size >= s_max {
                    break med;
                }
                size += 2;
            };
            out.set(r, c, value);
        }
    }
    Ok(out)
}

/// Threshold, then `passes` median filters.
pub fn preprocess_pipeline(img: &GrayImage, params: &PreprocessParams) -> Result<GrayImage> {
    params.validate()?;
    let mut out = global_threshold(img, params.threshold);
    for _ in 0..params.passes {
        out = median_filter(&out, params.kernel)?;
    }
    Ok(out)
}

fn gather(img: &GrayImage, r: usize, c: usize, radius: isize, window: &mut Vec<u8>) {
    window.clear();
    let (r, c) = (r as isize, c as isize);
    for dr in -radius..=radius {
        for dc in -radius..=radius {
            window.push(img.get_clamped(r + dr, c + dc));
        }
    }
}
