//! Image-quality metrics and report rows.

use std::fmt;

use crate::error::{check_shape, Result};
use crate::raster::GrayImage;

pub fn mse(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_shape(a.shape(), b.shape())?;
    let sum: f64 = a
        .data()
        .iter()
        .zip(b.data())
        .map(|(&x, &y)| (f64::from(x) - f64::from(y)).powi(2))
        .sum();
    Ok(sum / a.data().len().max(1) as f64)
}

/// Peak signal-to-noise ratio for 8-bit images.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Psnr {
    Finite(f64),
    /// The images are identical.
    Infinite,
}

impl Psnr {
    pub fn from_mse(mse: f64) -> Self {
        if mse == 0.0 {
            Psnr::Infinite
        } else {
            Psnr::Finite(10.0 * (255.0f64 * 255.0 / mse).log10())
        }
    }

    pub fn db(self) -> f64 {
        match self {
            Psnr::Finite(v) => v,
            Psnr::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Psnr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Psnr::Finite(v) => write!(f, "{v:.6}"),
            Psnr::Infinite => f.write_str("inf"),
        }
    }
}

pub fn psnr(a: &GrayImage, b: &GrayImage) -> Result<Psnr> {
    Ok(Psnr::from_mse(mse(a, b)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct QualityReport {
    pub label: String,
    /// Restored image against the clean reference.
    pub mse: f64,
    pub psnr: Psnr,
    pub node_count_before: usize,
    pub node_count_after: usize,
    /// Stage name and wall time in milliseconds; not reproducible.
    pub timings: Vec<(String, f64)>,
}

impl QualityReport {
    pub const HEADER: &'static str = "label,mse,psnr,node_count_before,node_count_after";

    /// The reproducible part of the report as one CSV row.
    pub fn row(&self) -> String {
        format!(
            "{},{:.6},{},{},{}",
            self.label, self.mse, self.psnr, self.node_count_before, self.node_count_after
        )
    }

    pub fn timing_summary(&self) -> String {
        self.timings
            .iter()
            .map(|(stage, ms)| format!("{stage}={ms:.3}ms"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psnr_examples() {
        let a = GrayImage::filled(4, 4, 10);
        assert_eq!(psnr(&a, &a).unwrap(), Psnr::Infinite);
        let b = GrayImage::filled(4, 4, 11);
        let p = psnr(&a, &b).unwrap().db();
        assert!((p - 20.0 * 255.0f64.log10()).abs() < 1e-12);
        assert!((p - 48.13).abs() < 0.01);
        let black = GrayImage::filled(3, 3, 0);
        let white = GrayImage::filled(3, 3, 255);
        assert_eq!(psnr(&black, &white).unwrap().db(), 0.0);
        assert!(psnr(&a, &black).is_err());
    }

    #[test]
    fn psnr_consistent_with_mse() {
        for m in [0.5, 1.0, 17.25, 6502.0] {
            let expected = 10.0 * (255.0f64.powi(2) / m).log10();
            assert!((Psnr::from_mse(m).db() - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn rows_exclude_timings() {
        let mut r = QualityReport {
            label: "x".into(),
            mse: 2.0,
            psnr: Psnr::from_mse(2.0),
            node_count_before: 5,
            node_count_after: 1,
            timings: vec![("load".into(), 1.5)],
        };
        let row = r.row();
        r.timings[0].1 = 99.0;
        assert_eq!(r.row(), row);
        assert_eq!(
            row.split(',').count(),
            QualityReport::HEADER.split(',').count()
        );
        assert_eq!(r.timing_summary(), "load=99.000ms");
    }
}
