//! Directional spectral filtering.
//!
//! A stroke family at spatial angle `a` concentrates its spectrum along the
//! perpendicular direction `a + 90`. The lens array's nodes repeat along the
//! strokes, so their energy lands off that ridge; keeping only a thin wedge
//! around the ridge removes them.

use crate::error::{Error, Result};
use crate::preprocess::global_threshold;
use crate::raster::{normalize_to_u8, GrayImage};
use crate::spectral::{
    apply_mask, bin_angle_degrees, forward_dft, inverse_dft_checked, mirror_bin, Mask,
    Reconstruction, Spectrum,
};

/// Spectral orientation of structure at the given spatial angle.
pub fn aliasing_angle(spatial_angle: f64) -> f64 {
    (spatial_angle + 90.0).rem_euclid(180.0)
}

/// Smallest angle between two undirected orientations, in degrees.
pub fn orientation_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(180.0);
    d.min(180.0 - d)
}

const EDGE_TOLERANCE: f64 = 1e-9;

/// Four vertices in bin coordinates `(row, col)`, in order around the shape.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Parallelogram {
    vertices: [(f64, f64); 4],
}

impl Parallelogram {
    pub fn new(vertices: [(f64, f64); 4]) -> Result<Self> {
        let [a, b, c, d] = vertices;
        let e0 = (b.0 - a.0, b.1 - a.1);
        let e2 = (c.0 - d.0, c.1 - d.1);
        if (e0.0 - e2.0).abs() > EDGE_TOLERANCE || (e0.1 - e2.1).abs() > EDGE_TOLERANCE {
            return Err(Error::InvalidParameter(format!(
                "vertices {vertices:?} do not form a parallelogram"
            )));
        }
        if vertices
            .iter()
            .any(|&(r, c)| !r.is_finite() || !c.is_finite())
        {
            return Err(Error::NonFiniteInput);
        }
        Ok(Self { vertices })
    }

    /// Parallelogram spanned by two edge vectors from a corner.
    pub fn from_edges(corner: (f64, f64), u: (f64, f64), v: (f64, f64)) -> Result<Self> {
        let (r, c) = corner;
        Self::new([
            (r, c),
            (r + u.0, c + u.1),
            (r + u.0 + v.0, c + u.1 + v.1),
            (r + v.0, c + v.1),
        ])
    }

    pub fn vertices(&self) -> [(f64, f64); 4] {
        self.vertices
    }

    pub fn signed_area(&self) -> f64 {
        let [a, b, _, d] = self.vertices;
        cross((b.0 - a.0, b.1 - a.1), (d.0 - a.0, d.1 - a.1))
    }

    fn edges(&self) -> impl Iterator<Item = ((f64, f64), (f64, f64))> + '_ {
        (0..4).map(move |i| (self.vertices[i], self.vertices[(i + 1) % 4]))
    }

    /// Boundary-inclusive membership.
    pub fn contains(&self, point: (f64, f64)) -> bool {
        let area = self.signed_area();
        if area.abs() <= EDGE_TOLERANCE {
            return self.edges().any(|(a, b)| on_segment(point, a, b));
        }
        let orientation = area.signum();
        self.edges().all(|(a, b)| {
            let side = cross((b.0 - a.0, b.1 - a.1), (point.0 - a.0, point.1 - a.1));
            side * orientation >= -EDGE_TOLERANCE
        })
    }

    /// Point reflection through `centre`.
    pub fn reflected(&self, centre: (f64, f64)) -> Self {
        Self {
            vertices: self
                .vertices
                .map(|(r, c)| (2.0 * centre.0 - r, 2.0 * centre.1 - c)),
        }
    }
}

fn cross(u: (f64, f64), v: (f64, f64)) -> f64 {
    u.0 * v.1 - u.1 * v.0
}

fn on_segment(p: (f64, f64), a: (f64, f64), b: (f64, f64)) -> bool {
    let ab = (b.0 - a.0, b.1 - a.1);
    let ap = (p.0 - a.0, p.1 - a.1);
    if cross(ab, ap).abs() > EDGE_TOLERANCE {
        return false;
    }
    let t = ap.0 * ab.0 + ap.1 * ab.1;
    let len2 = ab.0 * ab.0 + ab.1 * ab.1;
    if len2 == 0.0 {
        return ap.0.hypot(ap.1) <= EDGE_TOLERANCE;
    }
    (-EDGE_TOLERANCE..=len2 + EDGE_TOLERANCE).contains(&t)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NotchParams {
    /// Spectral orientation to keep, in degrees.
    pub keep_angle: f64,
    /// Half-width of the kept wedge, in degrees.
    pub half_width: f64,
    /// Bins within this radius of DC are always kept.
    pub dc_radius: f64,
    pub zero_percentile: f64,
    pub binarize_threshold: Option<u8>,
}

impl Default for NotchParams {
    fn default() -> Self {
        Self {
            keep_angle: 170.0,
            half_width: 5.0,
            dc_radius: 3.0,
            zero_percentile: 0.95,
            binarize_threshold: None,
        }
    }
}

impl NotchParams {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..180.0).contains(&self.keep_angle) {
            return Err(Error::InvalidParameter(format!(
                "keep_angle {} outside [0, 180)",
                self.keep_angle
            )));
        }
        if !(self.half_width > 0.0 && self.half_width < 90.0) {
            return Err(Error::InvalidParameter(format!(
                "half_width {} outside (0, 90)",
                self.half_width
            )));
        }
        if !(self.zero_percentile > 0.0 && self.zero_percentile < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "zero_percentile {} outside (0, 1)",
                self.zero_percentile
            )));
        }
        if !(self.dc_radius >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "dc_radius {} is negative",
                self.dc_radius
            )));
        }
        Ok(())
    }
}

/// Zeroes the bins inside `region` (and its reflection through DC) whose
/// magnitude strictly exceeds the given percentile of in-region magnitudes.
/// Vertices are centred-array bin coordinates.
pub fn zero_high_magnitude_in_region(
    spec: &Spectrum,
    region: &Parallelogram,
    percentile: f64,
) -> Result<Spectrum> {
    if !(percentile > 0.0 && percentile < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "percentile {percentile} outside (0, 1)"
        )));
    }
    let (h, w) = spec.shape();
    let (dr, dc) = spec.dc();
    let mirrored = region.reflected((dr as f64, dc as f64));
    let mut inside = Vec::new();
    let mut direct = 0usize;
    for r in 0..h {
        for c in 0..w {
            let p = (r as f64, c as f64);
            let hit = region.contains(p);
            direct += usize::from(hit);
            if hit || mirrored.contains(p) {
                inside.push((r, c));
            }
        }
    }
    if direct == 0 {
        return Err(Error::EmptyRegion);
    }
    let mut mags: Vec<f64> = inside.iter().map(|&(r, c)| spec.get(r, c).norm()).collect();
    mags.sort_by(f64::total_cmp);
    // nearest-rank percentile
    let rank = ((percentile * mags.len() as f64).ceil() as usize).clamp(1, mags.len());
    let limit = mags[rank - 1];

    let mut out = spec.clone();
    for &(r, c) in &inside {
        if spec.get(r, c).norm() > limit {
            let (mr, mc) = mirror_bin(h, w, r, c);
            out.set(r, c, Default::default());
            out.set(mr, mc, Default::default());
        }
    }
    Ok(out)
}

/// Mask passing the DC neighbourhood and the wedge around `keep_angle`.
pub fn keep_direction_mask(height: usize, width: usize, params: &NotchParams) -> Mask {
    let (cr, cc) = (height / 2, width / 2);
    Mask::from_fn(height, width, |r, c| {
        let dr = r as f64 - cr as f64;
        let dc = c as f64 - cc as f64;
        if dr * dr + dc * dc <= params.dc_radius * params.dc_radius {
            return 1.0;
        }
        match bin_angle_degrees(height, width, r, c) {
            Some(a) if orientation_distance(a, params.keep_angle) <= params.half_width => 1.0,
            Some(_) => 0.0,
            None => 1.0,
        }
    })
}

/// Keeps only the wedge of orientations around `keep_angle`.
///
/// The mask scales magnitudes by 0 or 1 and leaves phases alone, which for a
/// real nonnegative mask is the same as scaling the complex bin.
pub fn keep_direction_filter(spec: &Spectrum, params: &NotchParams) -> Result<Spectrum> {
    params.validate()?;
    let (h, w) = spec.shape();
    apply_mask(spec, &keep_direction_mask(h, w, params))
}

/// Intermediate products of [`notch_restore_detailed`].
#[derive(Clone, Debug)]
pub struct NotchOutput {
    pub filtered: Spectrum,
    pub reconstruction: Reconstruction,
    pub image: GrayImage,
    pub binary: Option<GrayImage>,
}

pub fn notch_restore_detailed(img: &GrayImage, params: &NotchParams) -> Result<NotchOutput> {
    let filtered = keep_direction_filter(&forward_dft(img), params)?;
    let reconstruction = inverse_dft_checked(&filtered);
    if !reconstruction.is_real() {
        log::warn!(
            "notch reconstruction has imaginary residual {:.3e}",
            reconstruction.imag_max
        );
    }
    let image = normalize_to_u8(&reconstruction.field)?;
    let binary = params
        .binarize_threshold
        .map(|t| global_threshold(&image, t));
    Ok(NotchOutput {
        filtered,
        reconstruction,
        image,
        binary,
    })
}

/// Filters, reconstructs and normalizes; binarizes when a threshold is set.
pub fn notch_restore(img: &GrayImage, params: &NotchParams) -> Result<GrayImage> {
    let out = notch_restore_detailed(img, params)?;
    Ok(out.binary.unwrap_or(out.image))
}
