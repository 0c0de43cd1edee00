//! Centered 2D DFT, polar decomposition and frequency-domain masks.
//!
//! Spectra are stored quadrant-swapped so the DC bin sits at
//! `(height / 2, width / 2)`. The forward transform is unnormalized and the
//! inverse carries the `1 / (H * W)` factor.

use std::f64::consts::PI;
use std::fmt::Write as _;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{check_shape, Error, Result};
use crate::raster::{normalize_to_u8, GrayImage, RealField};

/// Imaginary residual (relative to the largest real value) above which an
/// inverse transform is reported as non-real.
pub const IMAG_RESIDUAL_LIMIT: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    height: usize,
    width: usize,
    data: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(height: usize, width: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::InvalidParameter(format!(
                "{} bins for a {height}x{width} spectrum",
                data.len()
            )));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![Complex64::new(0.0, 0.0); height * width],
        }
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.width + col] = value;
    }

    pub fn dc(&self) -> (usize, usize) {
        (self.height / 2, self.width / 2)
    }

    /// Signed offset of a bin from DC, in bins.
    pub fn offset(&self, row: usize, col: usize) -> (isize, isize) {
        bin_offset(self.height, self.width, row, col)
    }

    /// Index of the bin holding the conjugate partner of `(row, col)`.
    pub fn mirror(&self, row: usize, col: usize) -> (usize, usize) {
        mirror_bin(self.height, self.width, row, col)
    }

    pub fn total_energy(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Largest `|S[b] - conj(S[mirror(b)])|`, relative to the largest bin magnitude.
    pub fn hermitian_defect(&self) -> f64 {
        let scale = self.data.iter().map(|z| z.norm()).fold(0.0, f64::max);
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for r in 0..self.height {
            for c in 0..self.width {
                let (mr, mc) = self.mirror(r, c);
                let d = (self.get(r, c) - self.get(mr, mc).conj()).norm();
                worst = worst.max(d);
            }
        }
        worst / scale
    }

    pub fn scale(&self, factor: f64) -> Spectrum {
        Spectrum {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|z| z * factor).collect(),
        }
    }
}

pub(crate) fn bin_offset(height: usize, width: usize, row: usize, col: usize) -> (isize, isize) {
    (
        row as isize - (height / 2) as isize,
        col as isize - (width / 2) as isize,
    )
}

fn mirror_axis(i: usize, n: usize) -> usize {
    let raw = (i + n - n / 2) % n;
    let mirrored = (n - raw) % n;
    (mirrored + n / 2) % n
}

pub(crate) fn mirror_bin(height: usize, width: usize, row: usize, col: usize) -> (usize, usize) {
    (mirror_axis(row, height), mirror_axis(col, width))
}

/// Undirected orientation of a bin's offset in `[0, 180)` degrees.
///
/// Measured counterclockwise from the horizontal frequency axis with the
/// vertical axis pointing up, in cycles-per-pixel units so that the angle is
/// the physical one on non-square grids. DC returns `None`.
pub fn bin_angle_degrees(height: usize, width: usize, row: usize, col: usize) -> Option<f64> {
    let (dr, dc) = bin_offset(height, width, row, col);
    if dr == 0 && dc == 0 {
        return None;
    }
    let fx = dc as f64 / width as f64;
    let fy = -(dr as f64) / height as f64;
    Some(fy.atan2(fx).to_degrees().rem_euclid(180.0))
}

/// Real weights in `[0, 1]` over a centered spectrum, point-symmetric about DC.
#[derive(Clone, Debug, PartialEq)]
pub struct Mask {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Mask {
    /// Builds a mask from a per-bin weight function. Weights are clamped to
    /// `[0, 1]` and each bin is combined with its conjugate partner by `min`,
    /// so the result is always point-symmetric.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut raw = Vec::with_capacity(height * width);
        for r in 0..height {
            for c in 0..width {
                let w = f(r, c);
                raw.push(if w.is_nan() { 0.0 } else { w.clamp(0.0, 1.0) });
            }
        }
        let mut data = raw.clone();
        for r in 0..height {
            for c in 0..width {
                let (mr, mc) = mirror_bin(height, width, r, c);
                data[r * width + c] = raw[r * width + c].min(raw[mr * width + mc]);
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    pub fn ones(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![1.0; height * width],
        }
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![0.0; height * width],
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.width + col]
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.height).all(|r| {
            (0..self.width).all(|c| {
                let (mr, mc) = mirror_bin(self.height, self.width, r, c);
                self.get(r, c) == self.get(mr, mc)
            })
        })
    }

    pub fn passing_bins(&self) -> usize {
        self.data.iter().filter(|&&w| w > 0.0).count()
    }
}

pub fn forward_dft(img: &GrayImage) -> Spectrum {
    forward_dft_field(&img.to_field())
}

pub fn forward_dft_field(field: &RealField) -> Spectrum {
    let (h, w) = field.shape();
    let mut buf: Vec<Complex64> = field
        .data()
        .iter()
        .map(|&v| Complex64::new(v, 0.0))
        .collect();
    fft_2d(&mut buf, h, w, false);
    Spectrum {
        height: h,
        width: w,
        data: fftshift(&buf, h, w),
    }
}

/// Inverse transform plus the size of the discarded imaginary part.
#[derive(Clone, Debug)]
pub struct Reconstruction {
    pub field: RealField,
    /// Largest absolute imaginary component.
    pub imag_max: f64,
    /// Largest absolute real component.
    pub real_max: f64,
}

impl Reconstruction {
    pub fn is_real(&self) -> bool {
        self.imag_max <= IMAG_RESIDUAL_LIMIT * self.real_max.max(f64::MIN_POSITIVE)
    }
}

/// Inverse DFT returning the real part; logs a warning when the imaginary
/// residual is not negligible (a non-Hermitian spectrum).
pub fn inverse_dft(spec: &Spectrum) -> RealField {
    let rec = inverse_dft_checked(spec);
    if !rec.is_real() {
        log::warn!(
            "inverse DFT has imaginary residual {:.3e} against real peak {:.3e}",
            rec.imag_max,
            rec.real_max
        );
    }
    rec.field
}

pub fn inverse_dft_checked(spec: &Spectrum) -> Reconstruction {
    let (h, w) = spec.shape();
    let mut buf = ifftshift(&spec.data, h, w);
    fft_2d(&mut buf, h, w, true);
    let norm = 1.0 / (h * w) as f64;
    let mut imag_max = 0.0f64;
    let mut real_max = 0.0f64;
    let data = buf
        .iter()
        .map(|z| {
            let re = z.re * norm;
            imag_max = imag_max.max((z.im * norm).abs());
            real_max = real_max.max(re.abs());
            re
        })
        .collect();
    Reconstruction {
        field: RealField::new(h, w, data).expect("shape preserved"),
        imag_max,
        real_max,
    }
}

pub fn magnitude(spec: &Spectrum) -> RealField {
    let data = spec.data.iter().map(|z| z.norm()).collect();
    RealField::new(spec.height, spec.width, data).expect("shape preserved")
}

/// Per-bin argument in `(-pi, pi]`; an exactly zero bin has phase 0.
pub fn phase(spec: &Spectrum) -> RealField {
    let data = spec.data.iter().map(|&z| bin_phase(z)).collect();
    RealField::new(spec.height, spec.width, data).expect("shape preserved")
}

#[inline]
pub(crate) fn bin_phase(z: Complex64) -> f64 {
    if z.re == 0.0 && z.im == 0.0 {
        0.0
    } else {
        wrap_phase(z.im.atan2(z.re))
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_phase(angle: f64) -> f64 {
    let mut a = angle.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

pub fn from_polar(magnitude: &RealField, phase: &RealField) -> Result<Spectrum> {
    check_shape(magnitude.shape(), phase.shape())?;
    let data = magnitude
        .data()
        .iter()
        .zip(phase.data())
        .map(|(&m, &p)| Complex64::from_polar(m, p))
        .collect();
    Spectrum::new(magnitude.height(), magnitude.width(), data)
}

/// `log(1 + |F|)` stretched to the full 8-bit range.
pub fn log_magnitude_view(spec: &Spectrum) -> GrayImage {
    let data = spec.data.iter().map(|z| z.norm().ln_1p()).collect();
    let field = RealField::new(spec.height, spec.width, data).expect("shape preserved");
    normalize_to_u8(&field).expect("log magnitudes are finite")
}

/// Passes bins whose Euclidean distance from DC (in bins) is at most `cutoff`.
pub fn radial_lowpass_mask(height: usize, width: usize, cutoff: f64) -> Mask {
    let limit = cutoff * cutoff;
    Mask::from_fn(height, width, |r, c| {
        let (dr, dc) = bin_offset(height, width, r, c);
        if ((dr * dr + dc * dc) as f64) <= limit {
            1.0
        } else {
            0.0
        }
    })
}

pub fn apply_mask(spec: &Spectrum, mask: &Mask) -> Result<Spectrum> {
    check_shape(spec.shape(), mask.shape())?;
    let data = spec
        .data
        .iter()
        .zip(mask.data())
        .map(|(z, &w)| z * w)
        .collect();
    Spectrum::new(spec.height, spec.width, data)
}

fn grid_csv(height: usize, width: usize, values: &[f64]) -> String {
    let mut out = String::with_capacity(values.len() * 12);
    out.push_str("height,width\n");
    let _ = writeln!(out, "{height},{width}");
    for row in values.chunks(width.max(1)) {
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        out.push_str(&line.join(","));
        out.push('\n');
    }
    out
}

/// Magnitude and phase grids as CSV text: a `height,width` header line, the
/// dimensions, then one line per row.
pub fn spectrum_csv(spec: &Spectrum) -> (String, String) {
    let mag = magnitude(spec);
    let ph = phase(spec);
    (
        grid_csv(spec.height, spec.width, mag.data()),
        grid_csv(spec.height, spec.width, ph.data()),
    )
}

fn fftshift(raw: &[Complex64], h: usize, w: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); raw.len()];
    for r in 0..h {
        let src_r = (r + h - h / 2) % h;
        for c in 0..w {
            let src_c = (c + w - w / 2) % w;
            out[r * w + c] = raw[src_r * w + src_c];
        }
    }
    out
}

fn ifftshift(centered: &[Complex64], h: usize, w: usize) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); centered.len()];
    for k in 0..h {
        let src_r = (k + h / 2) % h;
        for l in 0..w {
            let src_c = (l + w / 2) % w;
            out[k * w + l] = centered[src_r * w + src_c];
        }
    }
    out
}

fn fft_2d(buf: &mut [Complex64], h: usize, w: usize, inverse: bool) {
    if h == 0 || w == 0 {
        return;
    }
    let mut planner = FftPlanner::<f64>::new();
    let (row_fft, col_fft) = if inverse {
        (planner.plan_fft_inverse(w), planner.plan_fft_inverse(h))
    } else {
        (planner.plan_fft_forward(w), planner.plan_fft_forward(h))
    };
    for row in buf.chunks_exact_mut(w) {
        row_fft.process(row);
    }
    let mut column = vec![Complex64::new(0.0, 0.0); h];
    for c in 0..w {
        for r in 0..h {
            column[r] = buf[r * w + c];
        }
        col_fft.process(&mut column);
        for r in 0..h {
            buf[r * w + c] = column[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct-summation DFT, centered the same way as `forward_dft`.
    fn naive_dft(img: &GrayImage) -> Vec<Complex64> {
        let (h, w) = img.shape();
        let mut out = vec![Complex64::new(0.0, 0.0); h * w];
        for r in 0..h {
            for c in 0..w {
                let (u, v) = (
                    (r as isize - (h / 2) as isize) as f64,
                    (c as isize - (w / 2) as isize) as f64,
                );
                let mut acc = Complex64::new(0.0, 0.0);
                for y in 0..h {
                    for x in 0..w {
                        let ang = -2.0 * PI * (u * y as f64 / h as f64 + v * x as f64 / w as f64);
                        acc += Complex64::from_polar(f64::from(img.get(y, x)), ang);
                    }
                }
                out[r * w + c] = acc;
            }
        }
        out
    }

    fn random_image(rng: &mut ChaCha8Rng, h: usize, w: usize) -> GrayImage {
        GrayImage::from_fn(h, w, |_, _| rng.gen())
    }

    #[test]
    fn constant_image_is_dc_only() {
        let img = GrayImage::filled(4, 4, 9);
        let spec = forward_dft(&img);
        assert_eq!(spec.dc(), (2, 2));
        for r in 0..4 {
            for c in 0..4 {
                let z = spec.get(r, c);
                if (r, c) == (2, 2) {
                    assert!((z.re - 144.0).abs() < 1e-12 && z.im.abs() < 1e-12);
                } else {
                    assert!(z.norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn matches_direct_summation_including_odd_sizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for &(h, w) in &[(8, 8), (5, 7), (1, 6), (9, 4)] {
            let img = random_image(&mut rng, h, w);
            let fast = forward_dft(&img);
            let slow = naive_dft(&img);
            let scale = slow.iter().map(|z| z.norm()).fold(0.0, f64::max);
            for (a, b) in fast.data().iter().zip(&slow) {
                assert!((a - b).norm() <= 1e-10 * scale, "{h}x{w}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn real_input_is_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for &(h, w) in &[(8, 8), (7, 6), (5, 5)] {
            let spec = forward_dft(&random_image(&mut rng, h, w));
            assert!(spec.hermitian_defect() < 1e-12);
        }
    }

    #[test]
    fn round_trip_recovers_image() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let img = random_image(&mut rng, 12, 10);
        let back = inverse_dft(&forward_dft(&img));
        for (a, &b) in back.data().iter().zip(img.data()) {
            assert!((a - f64::from(b)).abs() < 1e-9 * 255.0);
        }
    }

    #[test]
    fn dc_only_inverse_is_constant() {
        let mut spec = Spectrum::zeros(4, 4);
        spec.set(2, 2, Complex64::new(16.0 * 3.0, 0.0));
        let field = inverse_dft(&spec);
        assert!(field.data().iter().all(|v| (v - 3.0).abs() < 1e-12));
    }

    #[test]
    fn symmetric_bin_pair_gives_cosine() {
        // bins at offsets +(u, v) and -(u, v) with value 8 each -> cos field of amplitude 1
        let (u, v) = (1isize, 1isize);
        let mut spec = Spectrum::zeros(4, 4);
        spec.set((2 + u) as usize, (2 + v) as usize, Complex64::new(8.0, 0.0));
        spec.set((2 - u) as usize, (2 - v) as usize, Complex64::new(8.0, 0.0));
        let rec = inverse_dft_checked(&spec);
        assert!(rec.is_real());
        for y in 0..4 {
            for x in 0..4 {
                let expected =
                    (2.0 * PI * (u as f64 * y as f64 / 4.0 + v as f64 * x as f64 / 4.0)).cos();
                assert!((rec.field.get(y, x) - expected).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn asymmetric_spectrum_flags_residual() {
        let mut spec = Spectrum::zeros(4, 4);
        spec.set(3, 3, Complex64::new(8.0, 0.0));
        assert!(!inverse_dft_checked(&spec).is_real());
    }

    #[test]
    fn polar_decomposition() {
        let spec = Spectrum::new(
            1,
            2,
            vec![Complex64::new(3.0, 4.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        let m = magnitude(&spec);
        let p = phase(&spec);
        assert_eq!(m.data(), &[5.0, 0.0]);
        assert_eq!(p.data()[0], 4f64.atan2(3.0));
        assert_eq!(p.data()[1], 0.0);
    }

    #[test]
    fn polar_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let data = (0..64)
            .map(|_| Complex64::new(rng.gen_range(-100.0..100.0), rng.gen_range(-100.0..100.0)))
            .collect();
        let spec = Spectrum::new(8, 8, data).unwrap();
        let back = from_polar(&magnitude(&spec), &phase(&spec)).unwrap();
        for (a, b) in spec.data().iter().zip(back.data()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn phase_is_in_half_open_interval() {
        let spec = Spectrum::new(1, 1, vec![Complex64::new(-1.0, -0.0)]).unwrap();
        assert_eq!(phase(&spec).data()[0], PI);
        assert_eq!(wrap_phase(-PI), PI);
        assert!((wrap_phase(3.0 * PI) - PI).abs() < 1e-12);
    }

    #[test]
    fn log_view_of_dc_only_and_zero_spectra() {
        let mut spec = Spectrum::zeros(5, 5);
        spec.set(2, 2, Complex64::new(100.0, 0.0));
        let view = log_magnitude_view(&spec);
        for r in 0..5 {
            for c in 0..5 {
                assert_eq!(view.get(r, c), if (r, c) == (2, 2) { 255 } else { 0 });
            }
        }
        let blank = log_magnitude_view(&Spectrum::zeros(3, 3));
        assert!(blank.data().iter().all(|&v| v == 0));
    }

    #[test]
    fn radial_mask_counts() {
        // 5x5, cutoff 1: enumerate all 25 distances by hand -> DC and its 4-neighbors
        let mut expected = 0;
        for dr in -2i32..=2 {
            for dc in -2i32..=2 {
                if dr * dr + dc * dc <= 1 {
                    expected += 1;
                }
            }
        }
        assert_eq!(expected, 5);
        assert_eq!(radial_lowpass_mask(5, 5, 1.0).passing_bins(), 5);

        let dc_only = radial_lowpass_mask(6, 8, 0.0);
        assert_eq!(dc_only.passing_bins(), 1);
        assert_eq!(dc_only.get(3, 4), 1.0);

        let all = radial_lowpass_mask(6, 8, 6.0);
        assert_eq!(all.passing_bins(), 48);
    }

    #[test]
    fn lowpass_17_matches_distance_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let spec = forward_dft(&random_image(&mut rng, 256, 256));
        let masked = apply_mask(&spec, &radial_lowpass_mask(256, 256, 17.0)).unwrap();
        for r in 0..256 {
            for c in 0..256 {
                let d2 = (r as f64 - 128.0).powi(2) + (c as f64 - 128.0).powi(2);
                let z = masked.get(r, c);
                if d2 <= 289.0 {
                    assert_eq!(z, spec.get(r, c));
                } else {
                    assert_eq!(z, Complex64::new(0.0, 0.0));
                }
            }
        }
    }

    #[test]
    fn trivial_masks() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let spec = forward_dft(&random_image(&mut rng, 6, 7));
        assert_eq!(apply_mask(&spec, &Mask::ones(6, 7)).unwrap(), spec);
        let zeroed = apply_mask(&spec, &Mask::zeros(6, 7)).unwrap();
        assert!(inverse_dft(&zeroed).data().iter().all(|&v| v == 0.0));
        assert!(matches!(
            apply_mask(&spec, &Mask::ones(7, 6)),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn mask_construction_enforces_symmetry() {
        // a lopsided weight function still yields a point-symmetric mask
        let m = Mask::from_fn(6, 5, |r, c| if r < 2 && c > 2 { 1.0 } else { 0.3 });
        assert!(m.is_symmetric());
        assert!(m.data().iter().all(|&w| (0.0..=1.0).contains(&w)));
    }

    #[test]
    fn mirror_of_even_nyquist_is_itself() {
        assert_eq!(mirror_bin(4, 6, 0, 0), (0, 0));
        assert_eq!(mirror_bin(4, 6, 2, 3), (2, 3));
        assert_eq!(mirror_bin(4, 6, 1, 4), (3, 2));
        assert_eq!(mirror_bin(5, 5, 0, 4), (4, 0));
    }

    #[test]
    fn csv_dump_layout() {
        let spec = forward_dft(&GrayImage::filled(2, 3, 1));
        let (mag, ph) = spectrum_csv(&spec);
        let lines: Vec<&str> = mag.lines().collect();
        assert_eq!(lines[0], "height,width");
        assert_eq!(lines[1], "2,3");
        assert_eq!(lines.len(), 4);
        let row: Vec<f64> = lines[3].split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row.len(), 3);
        assert!(row[0].abs() < 1e-12 && (row[1] - 6.0).abs() < 1e-12 && row[2].abs() < 1e-12);
        assert_eq!(ph.lines().count(), 4);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn parseval(h in 1usize..20, w in 1usize..20, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let img = random_image(&mut rng, h, w);
            let spatial: f64 = img.data().iter().map(|&v| f64::from(v).powi(2)).sum();
            let spectral = forward_dft(&img).total_energy() / (h * w) as f64;
            prop_assert!((spatial - spectral).abs() <= 1e-9 * spatial.max(1.0));
        }

        #[test]
        fn linearity(h in 1usize..16, w in 1usize..16, seed in any::<u64>(),
                     a in -3.0f64..3.0, b in -3.0f64..3.0) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let f = random_image(&mut rng, h, w).to_field();
            let g = random_image(&mut rng, h, w).to_field();
            let combo = RealField::from_fn(h, w, |r, c| a * f.get(r, c) + b * g.get(r, c));
            let lhs = forward_dft_field(&combo);
            let (sf, sg) = (forward_dft_field(&f), forward_dft_field(&g));
            let scale = lhs.data().iter().chain(sf.data()).chain(sg.data())
                .map(|z| z.norm()).fold(1.0, f64::max);
            for i in 0..h * w {
                let rhs = sf.data()[i] * a + sg.data()[i] * b;
                prop_assert!((lhs.data()[i] - rhs).norm() <= 1e-9 * scale);
            }
        }

        #[test]
        fn round_trip_property(h in 1usize..24, w in 1usize..24, seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let img = random_image(&mut rng, h, w);
            let back = inverse_dft(&forward_dft(&img));
            for (a, &b) in back.data().iter().zip(img.data()) {
                prop_assert!((a - f64::from(b)).abs() < 1e-9 * 255.0);
            }
        }
    }
}
