//! Job configuration shared by every subcommand.

use std::path::Path;

use serde::Deserialize;
use sigmasurf::{veronese, Complex64, Composition, ConjPoly, HoloVector};

use crate::CliError;

/// Where the holomorphic input comes from.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Veronese,
    /// Ascending-degree coefficients, one list per component.
    Coefficients(Vec<Vec<Complex64>>),
}

#[derive(Deserialize)]
struct InputFile {
    components: Vec<Vec<[f64; 2]>>,
}

impl Input {
    /// `"veronese"`, or a JSON file `{"components": [[[re, im], ...], ...]}`.
    pub fn parse(source: &str) -> Result<Self, CliError> {
        if source.eq_ignore_ascii_case("veronese") {
            return Ok(Input::Veronese);
        }
        let text = std::fs::read_to_string(Path::new(source))
            .map_err(|e| CliError::Config(format!("cannot read input {source}: {e}")))?;
        Input::from_json(&text)
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let file: InputFile = serde_json::from_str(text)
            .map_err(|e| CliError::Config(format!("bad input file: {e}")))?;
        let comps = file
            .components
            .into_iter()
            .map(|c| {
                c.into_iter()
                    .map(|[re, im]| Complex64::new(re, im))
                    .collect()
            })
            .collect();
        Ok(Input::Coefficients(comps))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Input::Veronese => "veronese",
            Input::Coefficients(_) => "custom",
        }
    }
}

/// Output encoding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// A validated job.
#[derive(Clone, Debug)]
pub struct JobConfig {
    pub n: usize,
    pub input: Input,
    pub composition: Composition,
    pub grid_radius: f64,
    pub grid_res: usize,
    pub seed: u64,
}

impl JobConfig {
    /// Checks ranges and resolves `n` from the input when it is not given.
    pub fn new(
        n: Option<usize>,
        input: Input,
        indices: Vec<usize>,
        weights: Option<Vec<f64>>,
        grid_radius: f64,
        grid_res: usize,
        seed: u64,
    ) -> Result<Self, CliError> {
        let n = match (&input, n) {
            (Input::Veronese, Some(n)) => n,
            (Input::Veronese, None) => {
                return Err(CliError::Config(
                    "--n is required for veronese input".into(),
                ))
            }
            (Input::Coefficients(c), Some(n)) if c.len() != n => {
                return Err(CliError::Config(format!(
                    "--n {n} but the input has {} components",
                    c.len()
                )))
            }
            (Input::Coefficients(c), _) => c.len(),
        };
        if n < 2 {
            return Err(CliError::Config(format!("n = {n}, need at least 2")));
        }
        if indices.is_empty() {
            return Err(CliError::Config("empty composition".into()));
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(CliError::Config(format!(
                "index {bad} out of range for n = {n}"
            )));
        }
        let composition = match weights {
            Some(w) => Composition::new(indices, w),
            None => Composition::unweighted(indices),
        }
        .map_err(|e| CliError::Config(e.to_string()))?;
        if !(grid_radius.is_finite() && grid_radius > 0.0) {
            return Err(CliError::Config(format!(
                "grid radius {grid_radius} must be positive"
            )));
        }
        if grid_res < 2 {
            return Err(CliError::Config(format!(
                "grid resolution {grid_res} must be at least 2"
            )));
        }
        Ok(JobConfig {
            n,
            input,
            composition,
            grid_radius,
            grid_res,
            seed,
        })
    }

    pub fn holomorphic(&self) -> Result<HoloVector, CliError> {
        match &self.input {
            Input::Veronese => veronese(self.n).map_err(CliError::from),
            Input::Coefficients(c) => {
                let entries = c.iter().map(|k| ConjPoly::holomorphic(k)).collect();
                HoloVector::new(entries).map_err(CliError::from)
            }
        }
    }

    pub fn is_veronese(&self) -> bool {
        self.input == Input::Veronese
    }
}

/// Parses `re,im` or a bare real number.
pub fn parse_point(s: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |t: &str| t.parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected re,im, got {s:?}")),
    }
}
