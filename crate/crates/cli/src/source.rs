use std::fs::File;
use std::io::BufReader;

use boxdos_core::csvio::read_spectrum;
use boxdos_core::spectra::{
    enumerate_sphere_with_radius, random_power_spectrum, BoxGeometry, Spectrum,
};

use crate::args::{Shape, Source, DEFAULT_E_MAX, DEFAULT_SPHERE_K_MAX};
use crate::error::{invalid, CliResult};

impl Source {
    /// The box, rescaled to unit volume unless `--raw-lengths`.
    /// `None` for random spectra.
    pub fn geometry(&self) -> Option<BoxGeometry> {
        let g = match self.shape {
            Shape::Cube => BoxGeometry::cube(),
            Shape::Square2d => BoxGeometry::hypercube(2),
            Shape::Line => BoxGeometry::hypercube(1),
            Shape::Rectangle => BoxGeometry::incommensurate_rectangle(),
            Shape::Hyperbox => BoxGeometry::Hyperbox {
                lengths: self.lengths.clone(),
            },
            Shape::Sphere => match self.radius {
                Some(radius) => BoxGeometry::Sphere { radius },
                None => BoxGeometry::unit_sphere(),
            },
            Shape::Cylinder => match (self.height, self.radius) {
                (Some(height), Some(radius)) => BoxGeometry::Cylinder { height, radius },
                _ => BoxGeometry::unit_cylinder(self.aspect.unwrap_or(1.0)),
            },
            Shape::Relativistic => BoxGeometry::RelativisticSquare {
                side: self.side.unwrap_or(1.0),
            },
            Shape::Random => return None,
        };
        Some(if self.raw_lengths { g } else { g.normalized() })
    }

    /// Loads or enumerates the levels. Call [`Source::validate`] first.
    pub fn load(&self, seed: u64) -> CliResult<Spectrum> {
        if let Some(path) = &self.input {
            let file = File::open(path).map_err(|e| invalid("--input", format!("{}: {e}", path.display())))?;
            let spectrum = read_spectrum(BufReader::new(file)).map_err(|e| invalid("--input", e))?;
            return self.cut(spectrum);
        }
        match self.geometry() {
            None => {
                let spectrum = random_power_spectrum(self.levels, self.exponent, seed)?;
                self.cut(spectrum)
            }
            Some(BoxGeometry::Sphere { radius }) if self.e_max.is_none() => Ok(
                enumerate_sphere_with_radius(radius, self.k_max.unwrap_or(DEFAULT_SPHERE_K_MAX))?,
            ),
            Some(g) => Ok(g.enumerate(self.e_max.unwrap_or(DEFAULT_E_MAX))?),
        }
    }

    /// Truncates a fixed spectrum at `--e-max`, which must not exceed its limit.
    fn cut(&self, spectrum: Spectrum) -> CliResult<Spectrum> {
        match self.e_max {
            None => Ok(spectrum),
            Some(e) if e <= spectrum.e_max() => Ok(spectrum.truncated(e)),
            Some(e) => Err(invalid(
                "--e-max",
                format!("{e} exceeds the spectrum's completeness limit {}", spectrum.e_max()),
            )),
        }
    }
}
