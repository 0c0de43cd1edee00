//! Plain-text fixture manifests.
//!
//! One fixture per line: `<kind> <params> <seed> <path>`. `params` is a
//! comma-separated `key=value` list or `-` for defaults; `seed` is an integer
//! or `-` to use the caller's seed. Relative paths resolve against the
//! manifest's directory. Blank lines and `#` comments are ignored.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::raster::GrayImage;

use super::{
    add_gaussian_noise, add_salt_and_pepper, fixture_pair, gaussian_blur, render_fan_pattern,
    render_parallel_lines, standard_chart, DegradeParams, LineChart, STANDARD_FIXTURE_COUNT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Lines,
    Fan,
    /// Seeded-offset chart, undegraded (the clean half of a fixture pair).
    Clean,
    /// Seeded-offset chart after the lens model.
    Degraded,
    Noisy,
    Blurred,
}

impl FixtureKind {
    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "lines" => Self::Lines,
            "fan" => Self::Fan,
            "clean" => Self::Clean,
            "degraded" => Self::Degraded,
            "noisy" => Self::Noisy,
            "blurred" => Self::Blurred,
            other => return Err(Error::Parse(format!("unknown fixture kind '{other}'"))),
        })
    }

    fn name(self) -> &'static str {
        match self {
            Self::Lines => "lines",
            Self::Fan => "fan",
            Self::Clean => "clean",
            Self::Degraded => "degraded",
            Self::Noisy => "noisy",
            Self::Blurred => "blurred",
        }
    }

    fn allowed_keys(self) -> &'static [&'static str] {
        const CHART: &[&str] = &[
            "height",
            "width",
            "angle",
            "spacing",
            "thickness",
            "offset",
            "snap",
        ];
        const PAIR: &[&str] = &[
            "height",
            "width",
            "angle",
            "spacing",
            "thickness",
            "snap",
            "pitch",
            "tilt",
            "shift",
            "noise_sigma",
        ];
        match self {
            Self::Lines => CHART,
            Self::Fan => &["size", "n_lines", "thickness"],
            Self::Clean | Self::Degraded => PAIR,
            Self::Noisy => &[
                "height",
                "width",
                "angle",
                "spacing",
                "thickness",
                "offset",
                "snap",
                "sigma",
                "impulses",
            ],
            Self::Blurred => &[
                "height",
                "width",
                "angle",
                "spacing",
                "thickness",
                "offset",
                "snap",
                "sigma",
            ],
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ManifestRow {
    pub kind: FixtureKind,
    pub params: BTreeMap<String, String>,
    pub seed: Option<u64>,
    pub path: PathBuf,
}

impl ManifestRow {
    fn number(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| Error::Parse(format!("{key}={v} is not a number"))),
        }
    }

    fn count(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse::<usize>()
                .map_err(|_| Error::Parse(format!("{key}={v} is not a count"))),
        }
    }

    fn flag(&self, key: &str, default: bool) -> Result<bool> {
        match self.params.get(key).map(String::as_str) {
            None => Ok(default),
            Some("true") | Some("1") => Ok(true),
            Some("false") | Some("0") => Ok(false),
            Some(v) => Err(Error::Parse(format!("{key}={v} is not a boolean"))),
        }
    }

    /// Chart keys default to the standard chart; snapping is on by default.
    fn chart(&self) -> Result<LineChart> {
        let base = standard_chart();
        let chart = LineChart {
            height: self.count("height", base.height)?,
            width: self.count("width", base.width)?,
            angle: self.number("angle", 80.0)?,
            spacing: self.number("spacing", super::STANDARD_SPACING)?,
            thickness: self.number("thickness", base.thickness)?,
            offset: self.number("offset", 0.0)?,
        };
        let chart = if self.flag("snap", true)? {
            chart.snapped_to_grid()
        } else {
            chart
        };
        chart.validate()?;
        Ok(chart)
    }

    fn degrade(&self) -> Result<DegradeParams> {
        let d = DegradeParams::default();
        Ok(DegradeParams {
            pitch: self.number("pitch", d.pitch)?,
            tilt: self.number("tilt", d.tilt)?,
            shift: self.number("shift", d.shift)?,
            noise_sigma: self.number("noise_sigma", d.noise_sigma)?,
            ..d
        })
    }

    pub fn generate(&self, default_seed: u64) -> Result<GrayImage> {
        let seed = self.seed.unwrap_or(default_seed);
        match self.kind {
            FixtureKind::Lines => render_parallel_lines(&self.chart()?),
            FixtureKind::Fan => render_fan_pattern(
                self.count("size", 256)?,
                self.count("n_lines", 18)?,
                self.number("thickness", 2.0)?,
            ),
            FixtureKind::Clean => Ok(fixture_pair(&self.chart()?, &self.degrade()?, seed)?.clean),
            FixtureKind::Degraded => {
                Ok(fixture_pair(&self.chart()?, &self.degrade()?, seed)?.degraded)
            }
            FixtureKind::Noisy => {
                let clean = render_parallel_lines(&self.chart()?)?;
                let grain = add_gaussian_noise(&clean, self.number("sigma", 30.0)?, seed)?;
                add_salt_and_pepper(
                    &grain,
                    self.number("impulses", 0.1)?,
                    seed.wrapping_add(0x9e37_79b9),
                )
            }
            FixtureKind::Blurred => gaussian_blur(
                &render_parallel_lines(&self.chart()?)?,
                self.number("sigma", 0.6)?,
            ),
        }
    }
}

impl fmt::Display for ManifestRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let params = if self.params.is_empty() {
            "-".to_string()
        } else {
            self.params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(",")
        };
        let seed = self.seed.map_or("-".to_string(), |s| s.to_string());
        write!(
            f,
            "{} {} {} {}",
            self.kind.name(),
            params,
            seed,
            self.path.display()
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Manifest {
    pub rows: Vec<ManifestRow>,
}

impl Manifest {
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let [kind, params, seed, path] = fields[..] else {
                return Err(Error::Parse(format!(
                    "manifest line {}: expected 4 fields, found {}",
                    lineno + 1,
                    fields.len()
                )));
            };
            let kind = FixtureKind::parse(kind)?;
            let mut map = BTreeMap::new();
            if params != "-" {
                for pair in params.split(',') {
                    let (k, v) = pair.split_once('=').ok_or_else(|| {
                        Error::Parse(format!("manifest line {}: bad pair '{pair}'", lineno + 1))
                    })?;
                    if !kind.allowed_keys().contains(&k) {
                        return Err(Error::Parse(format!(
                            "manifest line {}: '{k}' is not a {} parameter",
                            lineno + 1,
                            kind.name()
                        )));
                    }
                    map.insert(k.to_string(), v.to_string());
                }
            }
            let seed = match seed {
                "-" => None,
                s => Some(s.parse::<u64>().map_err(|_| {
                    Error::Parse(format!("manifest line {}: bad seed '{s}'", lineno + 1))
                })?),
            };
            rows.push(ManifestRow {
                kind,
                params: map,
                seed,
                path: PathBuf::from(path),
            });
        }
        Ok(Self { rows })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::MissingFile(path.to_path_buf()),
            _ => Error::io(path, e),
        })?;
        Self::parse(&text)
    }

    /// The standard fixture set as a manifest: a clean and a degraded row
    /// per seed, written as `fixtureNN.clean.pgm` / `fixtureNN.degraded.pgm`.
    pub fn standard(base_seed: u64) -> Self {
        let rows = (0..STANDARD_FIXTURE_COUNT)
            .flat_map(|i| {
                let seed = base_seed.wrapping_add(i);
                [FixtureKind::Clean, FixtureKind::Degraded].map(|kind| ManifestRow {
                    kind,
                    params: BTreeMap::new(),
                    seed: Some(seed),
                    path: PathBuf::from(format!("fixture{i:02}.{}.pgm", kind.name())),
                })
            })
            .collect();
        Self { rows }
    }

    /// Output path of a row, resolved against `base_dir`.
    pub fn resolve(row: &ManifestRow, base_dir: &Path) -> PathBuf {
        if row.path.is_absolute() {
            row.path.clone()
        } else {
            base_dir.join(&row.path)
        }
    }
}

impl fmt::Display for Manifest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.rows {
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}
