//! Degradation-ratio estimation and restoration.
//!
//! A clean/degraded pair gives a per-bin magnitude ratio `K`. Inverse
//! filtering rescales a degraded spectrum by `K` directly; the Wiener-radial
//! path also rewrites the phase as `2 * phi_target - phi_degraded_ref`, keeps
//! only a low-frequency disc and binarizes.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{check_shape, Error, Result};
use crate::preprocess::global_threshold;
use crate::raster::{normalize_to_u8, GrayImage, RealField};
use crate::spectral::{
    apply_mask, bin_phase, forward_dft, from_polar, inverse_dft_checked, radial_lowpass_mask,
    wrap_phase, Spectrum,
};

/// Relative size of the default ratio guard.
pub const DEFAULT_EPSILON_SCALE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct DegradationModel {
    k: RealField,
    epsilon: f64,
}

impl DegradationModel {
    pub fn new(k: RealField, epsilon: f64) -> Result<Self> {
        if !k.is_finite() || !epsilon.is_finite() {
            return Err(Error::NonFiniteInput);
        }
        if epsilon < 0.0 || k.data().iter().any(|&v| v < 0.0) {
            return Err(Error::InvalidParameter(
                "ratios and epsilon must be nonnegative".into(),
            ));
        }
        Ok(Self { k, epsilon })
    }

    /// Unit ratio everywhere.
    pub fn identity(height: usize, width: usize) -> Self {
        Self {
            k: RealField::from_fn(height, width, |_, _| 1.0),
            epsilon: 0.0,
        }
    }

    pub fn k(&self) -> &RealField {
        &self.k
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn shape(&self) -> (usize, usize) {
        self.k.shape()
    }

    /// `height,width,epsilon` header, its values, then one row of ratios per line.
    pub fn to_csv(&self) -> String {
        let (h, w) = self.shape();
        let mut out = format!("height,width,epsilon\n{h},{w},{}\n", self.epsilon);
        for row in self.k.data().chunks(w.max(1)) {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        let header = lines.next().unwrap_or("").trim();
        if header != "height,width,epsilon" {
            return Err(Error::Parse(format!("unexpected model header '{header}'")));
        }
        let meta: Vec<&str> = lines.next().unwrap_or("").trim().split(',').collect();
        let [h, w, eps] = meta[..] else {
            return Err(Error::Parse(
                "model metadata needs height,width,epsilon".into(),
            ));
        };
        let parse_dim = |s: &str| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("bad model dimension '{s}'")))
        };
        let (h, w) = (parse_dim(h)?, parse_dim(w)?);
        let epsilon = eps
            .trim()
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("bad epsilon '{eps}'")))?;
        let mut data = Vec::with_capacity(h * w);
        for line in lines.filter(|l| !l.trim().is_empty()) {
            let before = data.len();
            for cell in line.split(',') {
                data.push(
                    cell.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad ratio '{cell}'")))?,
                );
            }
            if data.len() - before != w {
                return Err(Error::Parse(format!(
                    "model row has {} values, expected {w}",
                    data.len() - before
                )));
            }
        }
        if data.len() != h * w {
            return Err(Error::Parse(format!(
                "model has {} rows, expected {h}",
                data.len() / w.max(1)
            )));
        }
        Self::new(RealField::new(h, w, data)?, epsilon)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::io(path, e),
        })?;
        Self::from_csv(&text)
    }
}

fn max_norm(spec: &Spectrum) -> f64 {
    spec.data().iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn ratio(original: &Spectrum, degraded: &Spectrum, epsilon: f64) -> DegradationModel {
    let (h, w) = original.shape();
    let k = RealField::from_fn(h, w, |r, c| {
        original.get(r, c).norm() / (degraded.get(r, c).norm() + epsilon)
    });
    DegradationModel { k, epsilon }
}

/// Per-bin `|F_original| / (|F_degraded| + epsilon)`.
///
/// `epsilon = None` uses `1e-8 * max |F_degraded|`. An all-zero degraded
/// image falls back to an epsilon of 1 so the ratio stays finite.
pub fn estimate_ratio(
    original: &GrayImage,
    degraded: &GrayImage,
    epsilon: Option<f64>,
) -> Result<DegradationModel> {
    check_shape(original.shape(), degraded.shape())?;
    let fo = forward_dft(original);
    let fd = forward_dft(degraded);
    let epsilon = match epsilon {
        Some(e) if e.is_finite() && e >= 0.0 => e,
        Some(e) => return Err(Error::InvalidParameter(format!("epsilon {e}"))),
        None => {
            let e = DEFAULT_EPSILON_SCALE * max_norm(&fd);
            if e > 0.0 {
                e
            } else {
                1.0
            }
        }
    };
    if epsilon == 0.0 && fd.data().iter().any(|z| z.norm() == 0.0) {
        return Err(Error::InvalidParameter(
            "epsilon 0 with an empty degraded bin".into(),
        ));
    }
    Ok(ratio(&fo, &fd, epsilon))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WienerParams {
    /// Radius of the kept low-frequency disc, in bins.
    pub cutoff: f64,
    pub binarize_threshold: u8,
    /// Largest per-bin gain of the inverse filter.
    pub gain_cap: f64,
}

impl Default for WienerParams {
    fn default() -> Self {
        Self {
            cutoff: 17.0,
            binarize_threshold: 140,
            gain_cap: 100.0,
        }
    }
}

impl WienerParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff >= 0.0) {
            return Err(Error::InvalidParameter(format!("cutoff {}", self.cutoff)));
        }
        if !(self.gain_cap > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "gain_cap {}",
                self.gain_cap
            )));
        }
        Ok(())
    }
}

fn reconstruct(spec: &Spectrum, stage: &str) -> Result<RealField> {
    let rec = inverse_dft_checked(spec);
    if !rec.is_real() {
        log::warn!(
            "{stage} reconstruction has imaginary residual {:.3e}",
            rec.imag_max
        );
    }
    Ok(rec.field)
}

/// Scales each degraded bin by `min(k, gain_cap)`, keeping its phase.
pub fn inverse_filter(
    degraded: &GrayImage,
    model: &DegradationModel,
    gain_cap: f64,
) -> Result<GrayImage> {
    if !(gain_cap > 0.0) {
        return Err(Error::InvalidParameter(format!("gain_cap {gain_cap}")));
    }
    check_shape(model.shape(), degraded.shape())?;
    let mut spec = forward_dft(degraded);
    for (z, &k) in spec.data_mut().iter_mut().zip(model.k.data()) {
        *z *= k.min(gain_cap);
    }
    normalize_to_u8(&reconstruct(&spec, "inverse filter")?)
}

#[derive(Clone, Debug, PartialEq)]
pub struct WienerOutput {
    pub restored: GrayImage,
    pub binary: GrayImage,
}

/// Ratio-scaled magnitude and `2 * phi_t - phi_dr` phase, low-passed.
pub fn wiener_radial_spectrum(
    reference: &GrayImage,
    degraded_ref: &GrayImage,
    target: &GrayImage,
    cutoff: f64,
) -> Result<Spectrum> {
    check_shape(reference.shape(), degraded_ref.shape())?;
    check_shape(reference.shape(), target.shape())?;
    let model = estimate_ratio(reference, degraded_ref, None)?;
    let f_dr = forward_dft(degraded_ref);
    let f_t = forward_dft(target);
    let (h, w) = f_t.shape();
    let magnitude = RealField::from_fn(h, w, |r, c| f_t.get(r, c).norm() * model.k.get(r, c));
    let phase = RealField::from_fn(h, w, |r, c| {
        wrap_phase(2.0 * bin_phase(f_t.get(r, c)) - bin_phase(f_dr.get(r, c)))
    });
    apply_mask(
        &from_polar(&magnitude, &phase)?,
        &radial_lowpass_mask(h, w, cutoff),
    )
}

pub fn wiener_radial_restore(
    reference: &GrayImage,
    degraded_ref: &GrayImage,
    target: &GrayImage,
    params: &WienerParams,
) -> Result<WienerOutput> {
    params.validate()?;
    let spec = wiener_radial_spectrum(reference, degraded_ref, target, params.cutoff)?;
    let restored = normalize_to_u8(&reconstruct(&spec, "wiener")?)?;
    let binary = custom_binarize(&restored, params.binarize_threshold);
    Ok(WienerOutput { restored, binary })
}

/// Same comparison as [`global_threshold`]; `T = 140` is the usual choice here.
pub fn custom_binarize(img: &GrayImage, threshold: u8) -> GrayImage {
    global_threshold(img, threshold)
}

/// Connected ink (value 0) regions, 8-neighbour adjacency.
fn label_ink(img: &GrayImage, wrap: bool) -> Vec<Vec<(usize, usize)>> {
    let (h, w) = img.shape();
    let mut seen = vec![false; h * w];
    let mut components = Vec::new();
    let mut stack = Vec::new();
    for start in 0..h * w {
        if seen[start] || img.data()[start] != 0 {
            continue;
        }
        seen[start] = true;
        stack.push(start);
        let mut pixels = Vec::new();
        while let Some(i) = stack.pop() {
            let (r, c) = (i / w, i % w);
            pixels.push((r, c));
            for dr in -1isize..=1 {
                for dc in -1isize..=1 {
                    let (nr, nc) = (r as isize + dr, c as isize + dc);
                    let (nr, nc) = if wrap {
                        (nr.rem_euclid(h as isize), nc.rem_euclid(w as isize))
                    } else if nr < 0 || nc < 0 || nr >= h as isize || nc >= w as isize {
                        continue;
                    } else {
                        (nr, nc)
                    };
                    let j = nr as usize * w + nc as usize;
                    if !seen[j] && img.data()[j] == 0 {
                        seen[j] = true;
                        stack.push(j);
                    }
                }
            }
        }
        components.push(pixels);
    }
    components
}

fn require_binary(img: &GrayImage) -> Result<()> {
    match img.data().iter().find(|&&v| v != 0 && v != 255) {
        Some(&v) => Err(Error::NotBinary(v)),
        None => Ok(()),
    }
}

/// Along-stroke window, in pixels, over which stroke width is measured.
const NODE_WINDOW: usize = 3;
/// A window is a node when its width exceeds this multiple of the median.
const NODE_WIDTH_RATIO: f64 = 1.5;

/// Counts width bulges along the strokes of a binary line drawing.
///
/// Each ink component is sliced into unit steps along `line_angle`; the
/// stroke width over a sliding three-step window is the spread of the
/// perpendicular coordinate. A node is a maximal run of windows wider than
/// 1.5x the component's median width. Slices touching the image border are
/// skipped, because a stroke cut by the frame shows a spurious width there.
pub fn node_count(img: &GrayImage, line_angle: f64) -> Result<usize> {
    require_binary(img)?;
    let (h, w) = img.shape();
    let th = line_angle.to_radians();
    let (sin, cos) = th.sin_cos();
    let mut total = 0;
    for pixels in label_ink(img, false) {
        let along = |r: usize, c: usize| (c as f64 * cos - r as f64 * sin).floor() as i64;
        let lo = pixels.iter().map(|&(r, c)| along(r, c)).min().unwrap_or(0);
        let hi = pixels.iter().map(|&(r, c)| along(r, c)).max().unwrap_or(0);
        let n = (hi - lo + 1) as usize;
        if n < NODE_WINDOW {
            continue;
        }
        let mut pmin = vec![f64::INFINITY; n];
        let mut pmax = vec![f64::NEG_INFINITY; n];
        let mut border = vec![false; n];
        for &(r, c) in &pixels {
            let b = (along(r, c) - lo) as usize;
            let p = -(c as f64) * sin - r as f64 * cos;
            pmin[b] = pmin[b].min(p);
            pmax[b] = pmax[b].max(p);
            border[b] |= r == 0 || c == 0 || r + 1 == h || c + 1 == w;
        }
        let widths: Vec<Option<f64>> = (0..=n - NODE_WINDOW)
            .map(|j| {
                let span = j..j + NODE_WINDOW;
                if border[span.clone()].iter().any(|&b| b) {
                    return None;
                }
                let a = pmin[span.clone()]
                    .iter()
                    .copied()
                    .fold(f64::INFINITY, f64::min);
                let b = pmax[span].iter().copied().fold(f64::NEG_INFINITY, f64::max);
                a.is_finite().then_some(b - a + 1.0)
            })
            .collect();
        let mut valid: Vec<f64> = widths.iter().flatten().copied().collect();
        if valid.is_empty() {
            continue;
        }
        valid.sort_by(f64::total_cmp);
        let mid = valid.len() / 2;
        let median = if valid.len() % 2 == 1 {
            valid[mid]
        } else {
            0.5 * (valid[mid - 1] + valid[mid])
        };
        let mut inside = false;
        for width in &widths {
            let above = matches!(width, Some(x) if *x > NODE_WIDTH_RATIO * median);
            if above && !inside {
                total += 1;
            }
            inside = above;
        }
    }
    Ok(total)
}

/// Number of ink strokes, joining components across opposite image edges.
///
/// Restoration works on a periodic spectrum, so a stroke may exit one edge
/// and re-enter at the other; counting on the torus keeps such strokes whole.
pub fn stroke_count(img: &GrayImage) -> Result<usize> {
    require_binary(img)?;
    Ok(label_ink(img, true).len())
}
