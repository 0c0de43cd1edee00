//! Test patterns and a forward lenticular degradation model.
//!
//! Angles are in degrees, counterclockwise from the +x (column) axis with y
//! pointing up, so an 80 degree stroke leans slightly right of vertical.
//! A pixel is foreground (black, 0) iff its centre lies within
//! `thickness / 2` of an ideal line; backgrounds are white (255). Renderers
//! never anti-alias, so every pattern is binary.

mod manifest;

pub use manifest::{FixtureKind, Manifest, ManifestRow};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::raster::GrayImage;

pub const INK: u8 = 0;
pub const PAPER: u8 = 255;

/// Geometry of an equidistant line chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineChart {
    pub height: usize,
    pub width: usize,
    pub angle: f64,
    /// Perpendicular distance between stroke centres.
    pub spacing: f64,
    pub thickness: f64,
    /// Perpendicular position of the first stroke centre.
    pub offset: f64,
}

impl LineChart {
    pub fn new(height: usize, width: usize, angle: f64, spacing: f64, thickness: f64) -> Self {
        Self {
            height,
            width,
            angle,
            spacing,
            thickness,
            offset: 0.0,
        }
    }

    pub fn with_offset(mut self, offset: f64) -> Self {
        self.offset = offset;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.thickness >= 1.0 && self.spacing > self.thickness) {
            return Err(Error::InvalidParameter(format!(
                "line chart needs spacing > thickness >= 1 (spacing {}, thickness {})",
                self.spacing, self.thickness
            )));
        }
        if !(0.0..180.0).contains(&self.angle) {
            return Err(Error::InvalidParameter(format!(
                "angle {} outside [0, 180)",
                self.angle
            )));
        }
        Ok(())
    }

    /// Frequency of the stroke pattern in bins along (rows, cols).
    fn bin_frequency(&self) -> (f64, f64) {
        let th = self.angle.to_radians();
        (
            self.height as f64 * th.cos() / self.spacing,
            self.width as f64 * th.sin() / self.spacing,
        )
    }

    /// Nudges angle and spacing so the stroke pattern repeats exactly across
    /// the canvas in both directions. The chart's spectrum then sits on exact
    /// DFT bins instead of leaking around the wrap-around seam.
    pub fn snapped_to_grid(&self) -> Self {
        let (kr, kc) = self.bin_frequency();
        let (mut kr, mut kc) = (kr.round(), kc.round());
        if kr == 0.0 && kc == 0.0 {
            kc = 1.0;
        }
        if kc < 0.0 || (kc == 0.0 && kr < 0.0) {
            kr = -kr;
            kc = -kc;
        }
        let fr = kr / self.height as f64;
        let fc = kc / self.width as f64;
        let angle = fc.atan2(fr).to_degrees().rem_euclid(180.0);
        Self {
            angle,
            spacing: 1.0 / fr.hypot(fc),
            ..*self
        }
    }

    /// Perpendicular coordinate of a pixel centre.
    #[inline]
    pub fn across(&self, row: f64, col: f64) -> f64 {
        let th = self.angle.to_radians();
        col * th.sin() + row * th.cos()
    }

    /// Coordinate of a pixel centre along the stroke direction.
    #[inline]
    pub fn along(&self, row: f64, col: f64) -> f64 {
        let th = self.angle.to_radians();
        col * th.cos() - row * th.sin()
    }
}

pub fn render_parallel_lines(chart: &LineChart) -> Result<GrayImage> {
    chart.validate()?;
    let half = chart.thickness / 2.0;
    Ok(GrayImage::from_fn(chart.height, chart.width, |r, c| {
        let m = (chart.across(r as f64, c as f64) - chart.offset).rem_euclid(chart.spacing);
        if m.min(chart.spacing - m) <= half {
            INK
        } else {
            PAPER
        }
    }))
}

/// Circle outline with `n_lines` diameters at angles `k * 180 / n_lines`.
pub fn render_fan_pattern(size: usize, n_lines: usize, thickness: f64) -> Result<GrayImage> {
    if size < 64 || n_lines < 2 || thickness < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "fan pattern needs size >= 64, n_lines >= 2, thickness >= 1 (got {size}, {n_lines}, {thickness})"
        )));
    }
    let centre = (size as f64 - 1.0) / 2.0;
    let half = thickness / 2.0;
    let radius = size as f64 / 2.0 - thickness - 1.0;
    let normals: Vec<(f64, f64)> = (0..n_lines)
        .map(|k| {
            let th = (k as f64 * 180.0 / n_lines as f64).to_radians();
            (th.sin(), th.cos())
        })
        .collect();
    Ok(GrayImage::from_fn(size, size, |r, c| {
        let (y, x) = (r as f64 - centre, c as f64 - centre);
        let dist = x.hypot(y);
        if (dist - radius).abs() <= half {
            return INK;
        }
        if dist <= radius
            && normals
                .iter()
                .any(|&(s, co)| (x * s + y * co).abs() <= half)
        {
            INK
        } else {
            PAPER
        }
    }))
}

/// Slice-and-shift forward model of the lens array.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DegradeParams {
    /// Band period along the tilt direction, in pixels.
    pub pitch: f64,
    /// Lens tilt in degrees; bands are cut perpendicular to it.
    pub tilt: f64,
    /// Lateral displacement of each band, in pixels.
    pub shift: f64,
    pub noise_sigma: f64,
    /// Position of the first band boundary along the tilt direction.
    pub phase: f64,
    /// Seed for the additive noise.
    pub seed: u64,
}

impl Default for DegradeParams {
    fn default() -> Self {
        Self {
            pitch: 24.0,
            tilt: 80.0,
            shift: 2.0,
            noise_sigma: 0.0,
            phase: 0.0,
            seed: 0,
        }
    }
}

impl DegradeParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.pitch >= 2.0) || !(self.shift >= 0.0) || !(self.noise_sigma >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "degradation needs pitch >= 2, shift >= 0, noise_sigma >= 0 (got {}, {}, {})",
                self.pitch, self.shift, self.noise_sigma
            )));
        }
        if !(0.0..180.0).contains(&self.tilt) {
            return Err(Error::InvalidParameter(format!(
                "tilt {} outside [0, 180)",
                self.tilt
            )));
        }
        Ok(())
    }

    /// Band index of a pixel centre; even bands move by +shift, odd by -shift.
    pub fn band_of(&self, row: usize, col: usize) -> i64 {
        let th = self.tilt.to_radians();
        let s = col as f64 * th.cos() - row as f64 * th.sin();
        ((s - self.phase) / self.pitch).floor() as i64
    }

    /// Integer (row, col) displacement applied to bands of the given parity.
    pub fn displacement(&self, even_band: bool) -> (isize, isize) {
        let th = self.tilt.to_radians();
        let sign = if even_band { 1.0 } else { -1.0 };
        (
            (sign * self.shift * th.cos()).round() as isize,
            (sign * self.shift * th.sin()).round() as isize,
        )
    }
}

/// Cuts the image into bands of width `pitch` running across the tilt
/// direction and moves alternate bands by `+shift` / `-shift` perpendicular
/// to the tilt, so every tilted stroke picks up a jog ("node") at each band
/// boundary. Exposed edges replicate the nearest pixel. Gaussian noise is
/// added last.
pub fn lenticular_degrade(img: &GrayImage, params: &DegradeParams) -> Result<GrayImage> {
    params.validate()?;
    let even = params.displacement(true);
    let odd = params.displacement(false);
    let mut out = GrayImage::from_fn(img.height(), img.width(), |r, c| {
        let (dr, dc) = if params.band_of(r, c).rem_euclid(2) == 0 {
            even
        } else {
            odd
        };
        img.get_clamped(r as isize - dr, c as isize - dc)
    });
    if params.noise_sigma > 0.0 {
        out = add_gaussian_noise(&out, params.noise_sigma, params.seed)?;
    }
    Ok(out)
}

/// Independent N(0, sigma) per pixel, rounded half up and clipped to 0..=255.
pub fn add_gaussian_noise(img: &GrayImage, sigma: f64, seed: u64) -> Result<GrayImage> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("noise sigma {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    Ok(img.map(|v| {
        let noisy = f64::from(v) + normal.sample(&mut rng);
        (noisy + 0.5).floor().clamp(0.0, 255.0) as u8
    }))
}

/// Sets a `fraction` of pixels to 0 or 255 (equal odds).
pub fn add_salt_and_pepper(img: &GrayImage, fraction: f64, seed: u64) -> Result<GrayImage> {
    if !(0.0..=1.0).contains(&fraction) {
        return Err(Error::InvalidParameter(format!(
            "impulse fraction {fraction}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(img.map(|v| {
        let u: f64 = rng.gen();
        if u < fraction / 2.0 {
            0
        } else if u < fraction {
            255
        } else {
            v
        }
    }))
}

/// Separable Gaussian blur with circular boundaries, kernel radius `ceil(3 sigma)`.
///
/// The kernel is symmetric and wraps around, so its transfer function is real.
pub fn gaussian_blur(img: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!("blur sigma {sigma}")));
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let mut kernel: Vec<f64> = (-radius..=radius)
        .map(|x| (-(x * x) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = kernel.iter().sum();
    kernel.iter_mut().for_each(|k| *k /= total);

    let (h, w) = img.shape();
    let src = img.to_field();
    let mut tmp = vec![0.0; h * w];
    for r in 0..h {
        for c in 0..w {
            tmp[r * w + c] = kernel
                .iter()
                .enumerate()
                .map(|(i, k)| {
                    let cc = (c as isize + i as isize - radius).rem_euclid(w as isize) as usize;
                    k * src.get(r, cc)
                })
                .sum();
        }
    }
    Ok(GrayImage::from_fn(h, w, |r, c| {
        let v: f64 = kernel
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let rr = (r as isize + i as isize - radius).rem_euclid(h as isize) as usize;
                k * tmp[rr * w + c]
            })
            .sum();
        (v + 0.5).floor().clamp(0.0, 255.0) as u8
    }))
}

/// A clean chart together with its degraded rendering.
#[derive(Clone, Debug)]
pub struct FixturePair {
    pub seed: u64,
    pub chart: LineChart,
    pub degrade: DegradeParams,
    pub clean: GrayImage,
    pub degraded: GrayImage,
}

pub const STANDARD_HEIGHT: usize = 256;
pub const STANDARD_WIDTH: usize = 512;
pub const STANDARD_SPACING: f64 = 46.0;
pub const STANDARD_THICKNESS: f64 = 5.0;
pub const THICK_THICKNESS: f64 = 9.0;
pub const STANDARD_FIXTURE_COUNT: u64 = 10;

/// The 256x512 80-degree chart used by the standard fixture set, before the
/// seeded offset is applied.
pub fn standard_chart() -> LineChart {
    LineChart::new(
        STANDARD_HEIGHT,
        STANDARD_WIDTH,
        80.0,
        STANDARD_SPACING,
        STANDARD_THICKNESS,
    )
    .snapped_to_grid()
}

/// Builds a clean/degraded pair. The seed picks the stroke offset and the
/// band phase; the noise (if any) uses the same seed.
pub fn fixture_pair(chart: &LineChart, degrade: &DegradeParams, seed: u64) -> Result<FixturePair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let offset = rng.gen_range(0.0..chart.spacing);
    let phase = rng.gen_range(0.0..2.0 * degrade.pitch);
    let chart = chart.with_offset(offset);
    let degrade = DegradeParams {
        phase,
        seed,
        ..*degrade
    };
    let clean = render_parallel_lines(&chart)?;
    let degraded = lenticular_degrade(&clean, &degrade)?;
    Ok(FixturePair {
        seed,
        chart,
        degrade,
        clean,
        degraded,
    })
}

/// Ten seeded pairs (`base_seed .. base_seed + 10`) on the standard chart
/// with default degradation.
pub fn standard_fixture_set(base_seed: u64) -> Result<Vec<FixturePair>> {
    fixture_set(&standard_chart(), &DegradeParams::default(), base_seed)
}

/// Same as [`standard_fixture_set`] with 9-pixel strokes.
pub fn thick_fixture_set(base_seed: u64) -> Result<Vec<FixturePair>> {
    let chart = LineChart {
        thickness: THICK_THICKNESS,
        ..standard_chart()
    };
    fixture_set(&chart, &DegradeParams::default(), base_seed)
}

fn fixture_set(
    chart: &LineChart,
    degrade: &DegradeParams,
    base_seed: u64,
) -> Result<Vec<FixturePair>> {
    (0..STANDARD_FIXTURE_COUNT)
        .map(|i| fixture_pair(chart, degrade, base_seed.wrapping_add(i)))
        .collect()
}

/// Clean chart plus photo-like noise: Gaussian grain and salt-and-pepper impulses.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhotoNoise {
    pub sigma: f64,
    pub impulse_fraction: f64,
}

impl Default for PhotoNoise {
    fn default() -> Self {
        Self {
            sigma: 30.0,
            impulse_fraction: 0.10,
        }
    }
}

pub fn noisy_capture(clean: &GrayImage, noise: &PhotoNoise, seed: u64) -> Result<GrayImage> {
    let grain = add_gaussian_noise(clean, noise.sigma, seed)?;
    add_salt_and_pepper(
        &grain,
        noise.impulse_fraction,
        seed.wrapping_add(0x9e37_79b9),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::raster::histogram;

    /// Principal-axis angle (degrees, [0, 180)) of a set of pixel centres.
    fn fitted_angle(points: &[(f64, f64)]) -> f64 {
        let n = points.len() as f64;
        let (mr, mc) = points
            .iter()
            .fold((0.0, 0.0), |(a, b), &(r, c)| (a + r / n, b + c / n));
        let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
        for &(r, c) in points {
            let x = c - mc;
            let y = -(r - mr);
            sxx += x * x;
            syy += y * y;
            sxy += x * y;
        }
        (0.5 * (2.0 * sxy).atan2(sxx - syy))
            .to_degrees()
            .rem_euclid(180.0)
    }

    /// Foreground pixels grouped by stroke index (offset-relative position / spacing).
    fn strokes(img: &GrayImage, chart: &LineChart) -> Vec<Vec<(f64, f64)>> {
        let mut groups: std::collections::BTreeMap<i64, Vec<(f64, f64)>> = Default::default();
        for r in 0..img.height() {
            for c in 0..img.width() {
                if img.get(r, c) == INK {
                    let p = chart.across(r as f64, c as f64) - chart.offset;
                    let k = (p / chart.spacing).round() as i64;
                    groups.entry(k).or_default().push((r as f64, c as f64));
                }
            }
        }
        groups.into_values().collect()
    }

    #[test]
    fn horizontal_lines_are_spacing_apart() {
        let chart = LineChart::new(40, 30, 0.0, 10.0, 1.0);
        let img = render_parallel_lines(&chart).unwrap();
        for r in 0..40 {
            let expected = if r % 10 == 0 { INK } else { PAPER };
            assert!((0..30).all(|c| img.get(r, c) == expected), "row {r}");
        }
    }

    #[test]
    fn vertical_lines_are_the_transpose() {
        let h = render_parallel_lines(&LineChart::new(48, 48, 0.0, 12.0, 3.0).with_offset(2.0))
            .unwrap();
        let v = render_parallel_lines(&LineChart::new(48, 48, 90.0, 12.0, 3.0).with_offset(2.0))
            .unwrap();
        assert_eq!(v, h.transpose());
    }

    #[test]
    fn eighty_degree_strokes_fit_eighty_degrees() {
        let chart = LineChart::new(256, 512, 80.0, 40.0, 5.0).with_offset(7.0);
        let img = render_parallel_lines(&chart).unwrap();
        assert!(img.is_binary());
        let groups = strokes(&img, &chart);
        assert!(groups.len() >= 10);
        // strokes clipped by the left or right edge are partial; fit the rest
        let full: Vec<_> = groups
            .iter()
            .filter(|g| g.iter().all(|&(_, c)| c > 0.0 && c < 511.0))
            .collect();
        assert!(full.len() >= 8);
        for g in full {
            let a = fitted_angle(g);
            assert!((79.0..=81.0).contains(&a), "fitted {a}");
        }
    }

    #[test]
    fn snapped_chart_is_periodic_and_close() {
        let chart = standard_chart();
        assert!((chart.angle - 80.0).abs() < 1.0, "{}", chart.angle);
        assert!((chart.spacing - STANDARD_SPACING).abs() < 1.0);
        let img = render_parallel_lines(&chart.with_offset(3.3)).unwrap();
        // the pattern continues seamlessly across the wrap-around seams
        let shifted = render_parallel_lines(&LineChart {
            offset: 3.3 + chart.across(0.0, chart.width as f64),
            ..chart
        })
        .unwrap();
        let agree = img
            .data()
            .iter()
            .zip(shifted.data())
            .filter(|(a, b)| a == b)
            .count();
        assert!(agree as f64 > 0.999 * img.data().len() as f64);
    }

    #[test]
    fn fan_with_two_lines_has_axis_diameters() {
        let img = render_fan_pattern(65, 2, 1.0).unwrap();
        // centre row and centre column are ink inside the circle
        for i in 8..57 {
            assert_eq!(img.get(32, i), INK);
            assert_eq!(img.get(i, 32), INK);
        }
        // a point off both axes and off the circle stays white
        assert_eq!(img.get(20, 20), PAPER);
    }

    #[test]
    fn fan_is_binary_and_point_symmetric() {
        for size in [64, 101] {
            let img = render_fan_pattern(size, 18, 2.0).unwrap();
            assert!(img.is_binary());
            let mismatched = (0..size)
                .flat_map(|r| (0..size).map(move |c| (r, c)))
                .filter(|&(r, c)| img.get(r, c) != img.get(size - 1 - r, size - 1 - c))
                .count();
            // exact symmetry up to ties that float rounding decides differently
            assert!(mismatched <= size, "{mismatched} mismatches");
        }
    }

    #[test]
    fn fan_of_eighteen_contains_eighty_degree_diameter() {
        let size = 257;
        let img = render_fan_pattern(size, 18, 2.0).unwrap();
        let centre = (size as f64 - 1.0) / 2.0;
        let radius = size as f64 / 2.0 - 3.0;
        let mut pts = Vec::new();
        for r in 0..size {
            for c in 0..size {
                let (y, x) = (centre - r as f64, c as f64 - centre);
                let d = x.hypot(y);
                if img.get(r, c) == INK && d > radius / 3.0 && d < 0.9 * radius {
                    let polar = y.atan2(x).to_degrees().rem_euclid(180.0);
                    if (polar - 80.0).abs() < 4.0 {
                        pts.push((r as f64, c as f64));
                    }
                }
            }
        }
        let a = fitted_angle(&pts);
        assert!((79.0..=81.0).contains(&a), "fitted {a}");
    }

    #[test]
    fn invalid_render_params() {
        assert!(render_parallel_lines(&LineChart::new(10, 10, 0.0, 3.0, 3.0)).is_err());
        assert!(render_fan_pattern(32, 4, 1.0).is_err());
        assert!(render_fan_pattern(64, 1, 1.0).is_err());
    }

    #[test]
    fn zero_shift_zero_noise_is_identity() {
        let img = render_parallel_lines(&standard_chart().with_offset(4.0)).unwrap();
        let params = DegradeParams {
            shift: 0.0,
            ..Default::default()
        };
        assert_eq!(lenticular_degrade(&img, &params).unwrap(), img);
    }

    #[test]
    fn default_displacement_is_two_columns() {
        let p = DegradeParams::default();
        assert_eq!(p.displacement(true), (0, 2));
        assert_eq!(p.displacement(false), (0, -2));
    }

    #[test]
    fn degradation_preserves_histogram_up_to_fill() {
        let img = render_parallel_lines(&standard_chart().with_offset(11.0)).unwrap();
        let params = DegradeParams::default();
        let out = lenticular_degrade(&img, &params).unwrap();
        let bands = {
            let mut ids: Vec<i64> = (0..img.height())
                .flat_map(|r| (0..img.width()).map(move |c| (r, c)))
                .map(|(r, c)| params.band_of(r, c))
                .collect();
            ids.sort();
            ids.dedup();
            ids.len() as f64
        };
        let band_length = (img.height() as f64).hypot(img.width() as f64);
        let bound = 2.0 * bands * params.shift * band_length;
        let l1 = histogram(&img).l1_distance(&histogram(&out)) as f64;
        assert!(l1 <= bound, "{l1} > {bound}");
    }

    #[test]
    fn larger_shift_never_reduces_error() {
        for seed in 0..3 {
            let img =
                render_parallel_lines(&standard_chart().with_offset(3.0 + seed as f64)).unwrap();
            let mut last = -1.0;
            for shift in [0.0, 1.0, 2.0, 4.0] {
                let params = DegradeParams {
                    shift,
                    phase: 5.0 * seed as f64,
                    ..Default::default()
                };
                let out = lenticular_degrade(&img, &params).unwrap();
                let mse = crate::cli::mse(&img, &out).unwrap();
                assert!(mse >= last, "shift {shift}: {mse} < {last}");
                last = mse;
            }
        }
    }

    #[test]
    fn noise_determinism_and_identity() {
        let img = GrayImage::filled(32, 32, 128);
        assert_eq!(add_gaussian_noise(&img, 0.0, 3).unwrap(), img);
        let a = add_gaussian_noise(&img, 5.0, 3).unwrap();
        let b = add_gaussian_noise(&img, 5.0, 3).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, add_gaussian_noise(&img, 5.0, 4).unwrap());
    }

    #[test]
    fn noise_standard_deviation() {
        // n = 65536 samples: the sample std of N(0, 10) is within 1% of 10 far
        // beyond 5 sigma of its chi-square spread; rounding adds 1/12 variance
        let img = GrayImage::filled(256, 256, 128);
        let out = add_gaussian_noise(&img, 10.0, 99).unwrap();
        let n = out.data().len() as f64;
        let mean = out.data().iter().map(|&v| f64::from(v)).sum::<f64>() / n;
        let var = out
            .data()
            .iter()
            .map(|&v| (f64::from(v) - mean).powi(2))
            .sum::<f64>()
            / (n - 1.0);
        let std = var.sqrt();
        assert!((9.0..=11.0).contains(&std), "std {std}");
    }

    #[test]
    fn salt_and_pepper_fraction() {
        let img = GrayImage::filled(100, 100, 128);
        let out = add_salt_and_pepper(&img, 0.2, 1).unwrap();
        let hit = out.data().iter().filter(|&&v| v != 128).count();
        assert!((1800..2200).contains(&hit), "{hit}");
        assert!(add_salt_and_pepper(&img, 1.5, 1).is_err());
    }

    #[test]
    fn blur_preserves_mean_and_constants() {
        let flat = GrayImage::filled(16, 16, 200);
        assert_eq!(gaussian_blur(&flat, 1.0).unwrap(), flat);
        let img = render_parallel_lines(&LineChart::new(64, 64, 30.0, 16.0, 3.0)).unwrap();
        let out = gaussian_blur(&img, 0.6).unwrap();
        let mean = |g: &GrayImage| g.data().iter().map(|&v| f64::from(v)).sum::<f64>() / 4096.0;
        assert!((mean(&img) - mean(&out)).abs() < 0.5);
        assert!(gaussian_blur(&img, 0.0).is_err());
    }

    #[test]
    fn degradation_adds_energy_off_the_ridge_inside_the_wedge() {
        use crate::notch::{keep_direction_mask, NotchParams};
        use crate::spectral::forward_dft;
        for pair in standard_fixture_set(21).unwrap().iter().take(3) {
            let clean = forward_dft(&pair.clean);
            let degraded = forward_dft(&pair.degraded);
            let (h, w) = clean.shape();
            let wedge = keep_direction_mask(
                h,
                w,
                &NotchParams {
                    dc_radius: 0.0,
                    ..Default::default()
                },
            );
            let peak = clean.data().iter().map(|z| z.norm()).fold(0.0, f64::max);
            let off_ridge = |spec: &crate::spectral::Spectrum| -> f64 {
                (0..h * w)
                    .filter(|&i| wedge.data()[i] > 0.0 && clean.data()[i].norm() <= 1e-9 * peak)
                    .map(|i| spec.data()[i].norm_sqr())
                    .sum()
            };
            assert!(off_ridge(&degraded) > off_ridge(&clean));
        }
    }

    #[test]
    fn fixture_sets_are_deterministic() {
        let a = standard_fixture_set(5).unwrap();
        let b = standard_fixture_set(5).unwrap();
        assert_eq!(a.len(), 10);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.clean, y.clean);
            assert_eq!(x.degraded, y.degraded);
        }
        assert_ne!(a[0].clean, a[1].clean);
        let noisy1 = noisy_capture(&a[0].clean, &PhotoNoise::default(), 1).unwrap();
        let noisy2 = noisy_capture(&a[0].clean, &PhotoNoise::default(), 1).unwrap();
        assert_eq!(noisy1, noisy2);
    }
}
