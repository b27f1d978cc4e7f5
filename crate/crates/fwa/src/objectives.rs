//! Box-constrained benchmark objectives with optional shift and rotation.
//!
//! An [`ObjectiveSpec`] evaluates `f(x) = base(R · (x - shift)) + bias` where
//! `R` is an orthogonal matrix. [`make_suite`] builds a fixed eight-function
//! desk-scale suite with deterministic, seed-derived shifts and rotations;
//! externally supplied shift vectors and rotation matrices can be loaded from
//! plain-text files to plug in other transform data.

use crate::rng::{RandomSource, RngStream};
use std::f64::consts::{E, PI};
use std::fmt;
use std::path::Path;
use thiserror::Error;

/// Maximum per-entry deviation of `RᵀR` from the identity.
pub const ROTATION_TOL: f64 = 1e-9;

/// Location of the schwefel-2.26 per-dimension optimum.
const SCHWEFEL_OPT_Z: f64 = 420.968_746_227_503_6;

#[derive(Debug, Error)]
pub enum ObjectiveError {
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("expected a vector of length {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("component {index} is not finite")]
    NonFiniteComponent { index: usize },
    #[error("bound lower[{index}] = {lower} is not below upper[{index}] = {upper}")]
    InvalidBounds { index: usize, lower: f64, upper: f64 },
    #[error("shift component {index} = {value} lies outside the search box")]
    ShiftOutsideBox { index: usize, value: f64 },
    #[error("rotation matrix is not orthogonal: |(RᵀR - I)[{row},{col}]| = {deviation:e}")]
    NotOrthogonal { row: usize, col: usize, deviation: f64 },
    #[error("rotation matrix must be {expected}x{expected}")]
    BadMatrixShape { expected: usize },
    #[error("failed to read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to parse {path}: {detail}")]
    Parse { path: String, detail: String },
}

/// The analytic functions the suite is built from.
///
/// Each takes the transformed point `z = R (x - shift)` and has a known
/// optimizer `z*` so the true optimum location of the composed objective can
/// be recovered as `shift + Rᵀ z*`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseFunction {
    Sphere,
    Ellipsoid,
    Rosenbrock,
    Ackley,
    Griewank,
    Rastrigin,
    Schwefel226,
}

impl BaseFunction {
    pub fn evaluate(&self, z: &[f64]) -> f64 {
        let d = z.len();
        match self {
            BaseFunction::Sphere => z.iter().map(|v| v * v).sum(),
            BaseFunction::Ellipsoid => {
                // condition number 1e6 spread across the dimensions
                z.iter()
                    .enumerate()
                    .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (d - 1) as f64) * v * v)
                    .sum()
            }
            BaseFunction::Rosenbrock => (0..d - 1)
                .map(|i| {
                    let a = z[i + 1] - z[i] * z[i];
                    let b = z[i] - 1.0;
                    100.0 * a * a + b * b
                })
                .sum(),
            BaseFunction::Ackley => {
                let quad = z.iter().map(|v| v * v).sum::<f64>() / d as f64;
                let trig = z.iter().map(|v| (2.0 * PI * v).cos()).sum::<f64>() / d as f64;
                -20.0 * (-0.2 * quad.sqrt()).exp() - trig.exp() + 20.0 + E
            }
            BaseFunction::Griewank => {
                let quad = z.iter().map(|v| v * v).sum::<f64>() / 4000.0;
                let prod = z
                    .iter()
                    .enumerate()
                    .map(|(i, v)| (v / ((i + 1) as f64).sqrt()).cos())
                    .product::<f64>();
                quad - prod + 1.0
            }
            BaseFunction::Rastrigin => z
                .iter()
                .map(|v| v * v - 10.0 * (2.0 * PI * v).cos() + 10.0)
                .sum(),
            BaseFunction::Schwefel226 => {
                let peak = SCHWEFEL_OPT_Z * SCHWEFEL_OPT_Z.sqrt().sin();
                z.iter().map(|v| peak - v * v.abs().sqrt().sin()).sum()
            }
        }
    }

    /// The optimizer of the base function in `z`-space.
    pub fn optimum_z(&self, dim: usize) -> Vec<f64> {
        match self {
            BaseFunction::Rosenbrock => vec![1.0; dim],
            BaseFunction::Schwefel226 => vec![SCHWEFEL_OPT_Z; dim],
            _ => vec![0.0; dim],
        }
    }
}

impl fmt::Display for BaseFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            BaseFunction::Sphere => "sphere",
            BaseFunction::Ellipsoid => "ellipsoid",
            BaseFunction::Rosenbrock => "rosenbrock",
            BaseFunction::Ackley => "ackley",
            BaseFunction::Griewank => "griewank",
            BaseFunction::Rastrigin => "rastrigin",
            BaseFunction::Schwefel226 => "schwefel226",
        };
        f.write_str(name)
    }
}

/// A bounded objective: base function, search box, shift, rotation and bias.
///
/// Immutable after construction; [`ObjectiveSpec::evaluate`] is pure and safe
/// to call concurrently from any number of runs.
#[derive(Clone, Debug)]
pub struct ObjectiveSpec {
    name: String,
    base: BaseFunction,
    dim: usize,
    lower: Vec<f64>,
    upper: Vec<f64>,
    shift: Vec<f64>,
    /// `None` means the identity rotation (the common case, kept off the
    /// evaluation hot path).
    rotation: Option<Vec<Vec<f64>>>,
    bias: f64,
    known_optimum_value: Option<f64>,
}

impl ObjectiveSpec {
    /// Builds a spec with zero shift, identity rotation and zero bias.
    pub fn new(
        name: impl Into<String>,
        base: BaseFunction,
        lower: Vec<f64>,
        upper: Vec<f64>,
    ) -> Result<Self, ObjectiveError> {
        let dim = lower.len();
        if dim < 2 {
            return Err(ObjectiveError::DimensionTooSmall(dim));
        }
        if upper.len() != dim {
            return Err(ObjectiveError::DimensionMismatch {
                expected: dim,
                got: upper.len(),
            });
        }
        for k in 0..dim {
            if !(lower[k] < upper[k]) {
                return Err(ObjectiveError::InvalidBounds {
                    index: k,
                    lower: lower[k],
                    upper: upper[k],
                });
            }
        }
        let mut spec = Self {
            name: name.into(),
            base,
            dim,
            lower,
            upper,
            shift: vec![0.0; dim],
            rotation: None,
            bias: 0.0,
            known_optimum_value: None,
        };
        spec.known_optimum_value = Some(spec.optimum_value());
        Ok(spec)
    }

    /// Uniform box `[lo, hi]^dim`.
    pub fn boxed(
        name: impl Into<String>,
        base: BaseFunction,
        dim: usize,
        lo: f64,
        hi: f64,
    ) -> Result<Self, ObjectiveError> {
        Self::new(name, base, vec![lo; dim], vec![hi; dim])
    }

    pub fn with_shift(mut self, shift: Vec<f64>) -> Result<Self, ObjectiveError> {
        if shift.len() != self.dim {
            return Err(ObjectiveError::DimensionMismatch {
                expected: self.dim,
                got: shift.len(),
            });
        }
        for (k, &s) in shift.iter().enumerate() {
            if !s.is_finite() {
                return Err(ObjectiveError::NonFiniteComponent { index: k });
            }
            if s < self.lower[k] || s > self.upper[k] {
                return Err(ObjectiveError::ShiftOutsideBox { index: k, value: s });
            }
        }
        self.shift = shift;
        self.known_optimum_value = Some(self.optimum_value());
        Ok(self)
    }

    pub fn with_rotation(mut self, rotation: Vec<Vec<f64>>) -> Result<Self, ObjectiveError> {
        if rotation.len() != self.dim || rotation.iter().any(|row| row.len() != self.dim) {
            return Err(ObjectiveError::BadMatrixShape { expected: self.dim });
        }
        check_orthogonal(&rotation)?;
        self.rotation = Some(rotation);
        self.known_optimum_value = Some(self.optimum_value());
        Ok(self)
    }

    pub fn with_bias(mut self, bias: f64) -> Self {
        self.bias = bias;
        self.known_optimum_value = Some(self.optimum_value());
        self
    }

    /// Replaces the shift with one loaded from a whitespace-separated file.
    pub fn with_shift_from_file(self, path: impl AsRef<Path>) -> Result<Self, ObjectiveError> {
        let values = load_vector(path.as_ref(), self.dim)?;
        self.with_shift(values)
    }

    /// Replaces the rotation with a row-major matrix loaded from a file.
    pub fn with_rotation_from_file(self, path: impl AsRef<Path>) -> Result<Self, ObjectiveError> {
        let matrix = load_matrix(path.as_ref(), self.dim)?;
        self.with_rotation(matrix)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> BaseFunction {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lower(&self) -> &[f64] {
        &self.lower
    }

    pub fn upper(&self) -> &[f64] {
        &self.upper
    }

    pub fn shift(&self) -> &[f64] {
        &self.shift
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn known_optimum_value(&self) -> Option<f64> {
        self.known_optimum_value
    }

    /// Largest per-dimension box extent, `max_k (upper_k - lower_k)`.
    pub fn search_range(&self) -> f64 {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(lo, hi)| hi - lo)
            .fold(0.0, f64::max)
    }

    /// Evaluates `base(R (x - shift)) + bias`.
    ///
    /// `x` need not lie inside the search box (the operators enforce
    /// feasibility separately) but must be finite and of the right length.
    pub fn evaluate(&self, x: &[f64]) -> Result<f64, ObjectiveError> {
        if x.len() != self.dim {
            return Err(ObjectiveError::DimensionMismatch {
                expected: self.dim,
                got: x.len(),
            });
        }
        if let Some(k) = x.iter().position(|v| !v.is_finite()) {
            return Err(ObjectiveError::NonFiniteComponent { index: k });
        }
        let centered: Vec<f64> = x.iter().zip(&self.shift).map(|(v, s)| v - s).collect();
        let value = match &self.rotation {
            None => self.base.evaluate(&centered),
            Some(rot) => {
                let mut z = vec![0.0; self.dim];
                for (row, zk) in rot.iter().zip(z.iter_mut()) {
                    *zk = row.iter().zip(&centered).map(|(r, c)| r * c).sum();
                }
                self.base.evaluate(&z)
            }
        };
        Ok(value + self.bias)
    }

    /// Location of the true optimum in `x`-space, `shift + Rᵀ z*`.
    pub fn optimum_position(&self) -> Vec<f64> {
        let z_star = self.base.optimum_z(self.dim);
        match &self.rotation {
            None => self
                .shift
                .iter()
                .zip(&z_star)
                .map(|(s, z)| s + z)
                .collect(),
            Some(rot) => {
                // Rᵀ z*: column k of R dotted with z*.
                (0..self.dim)
                    .map(|k| {
                        self.shift[k]
                            + rot
                                .iter()
                                .zip(&z_star)
                                .map(|(row, z)| row[k] * z)
                                .sum::<f64>()
                    })
                    .collect()
            }
        }
    }

    fn optimum_value(&self) -> f64 {
        let x_star = self.optimum_position();
        self.evaluate(&x_star)
            .expect("optimum position is finite by construction")
    }
}

fn check_orthogonal(rotation: &[Vec<f64>]) -> Result<(), ObjectiveError> {
    let d = rotation.len();
    for i in 0..d {
        for j in 0..d {
            // (RᵀR)[i][j] = column i · column j
            let dot: f64 = (0..d).map(|r| rotation[r][i] * rotation[r][j]).sum();
            let expected = if i == j { 1.0 } else { 0.0 };
            let deviation = (dot - expected).abs();
            if deviation > ROTATION_TOL {
                return Err(ObjectiveError::NotOrthogonal {
                    row: i,
                    col: j,
                    deviation,
                });
            }
        }
    }
    Ok(())
}

/// Random orthogonal matrix: Gram-Schmidt on a matrix of standard normals,
/// with a second orthogonalization pass to push the residual far below
/// [`ROTATION_TOL`].
pub fn random_rotation(dim: usize, rng: &mut impl RandomSource) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = (0..dim)
        .map(|_| (0..dim).map(|_| rng.standard_normal()).collect())
        .collect();
    for _pass in 0..2 {
        for i in 0..dim {
            for j in 0..i {
                let proj: f64 = (0..dim).map(|k| rows[i][k] * rows[j][k]).sum();
                for k in 0..dim {
                    rows[i][k] -= proj * rows[j][k];
                }
            }
            let norm: f64 = rows[i].iter().map(|v| v * v).sum::<f64>().sqrt();
            for v in rows[i].iter_mut() {
                *v /= norm;
            }
        }
    }
    rows
}

/// Reads whitespace-separated values from a text file; exactly `dim` values.
pub fn load_vector(path: &Path, dim: usize) -> Result<Vec<f64>, ObjectiveError> {
    let values = load_values(path)?;
    if values.len() != dim {
        return Err(ObjectiveError::Parse {
            path: path.display().to_string(),
            detail: format!("expected {dim} values, found {}", values.len()),
        });
    }
    Ok(values)
}

/// Reads a row-major `dim x dim` matrix of whitespace-separated values.
pub fn load_matrix(path: &Path, dim: usize) -> Result<Vec<Vec<f64>>, ObjectiveError> {
    let values = load_values(path)?;
    if values.len() != dim * dim {
        return Err(ObjectiveError::Parse {
            path: path.display().to_string(),
            detail: format!("expected {} values, found {}", dim * dim, values.len()),
        });
    }
    Ok(values.chunks(dim).map(<[f64]>::to_vec).collect())
}

fn load_values(path: &Path) -> Result<Vec<f64>, ObjectiveError> {
    let text = std::fs::read_to_string(path).map_err(|source| ObjectiveError::Io {
        path: path.display().to_string(),
        source,
    })?;
    text.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| ObjectiveError::Parse {
                path: path.display().to_string(),
                detail: format!("invalid number {tok:?}"),
            })
        })
        .collect()
}

/// Names of the desk-suite functions, in suite order.
pub const SUITE_FUNCTION_NAMES: [&str; 8] = [
    "sphere",
    "ellipsoid",
    "rosenbrock",
    "ackley",
    "griewank",
    "rastrigin",
    "schwefel226",
    "rotated_rastrigin",
];

/// Builds the fixed eight-function desk suite.
///
/// Boxes are `[-100, 100]^D` except rastrigin (`[-5.12, 5.12]^D`) and
/// schwefel-2.26 (`[-500, 500]^D`). Shifts and rotations are generated
/// deterministically from `seed`: the same `(dim, seed)` always yields the
/// same suite. Shifts stay away from the box boundary so the true optimum of
/// every composed function (including rosenbrock's offset optimizer and
/// schwefel's at ~421 per coordinate) remains feasible.
pub fn make_suite(dim: usize, seed: u64) -> Result<Vec<ObjectiveSpec>, ObjectiveError> {
    if dim < 2 {
        return Err(ObjectiveError::DimensionTooSmall(dim));
    }

    let shift_in = |rng: &mut RngStream, lo: f64, hi: f64| -> Vec<f64> {
        (0..dim).map(|_| rng.uniform(lo, hi)).collect()
    };

    let mut suite = Vec::with_capacity(8);
    let stream = |i: u64| RngStream::derive(seed, i);

    let mut rng = stream(0);
    suite.push(
        ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, dim, -100.0, 100.0)?
            .with_shift(shift_in(&mut rng, -80.0, 80.0))?,
    );

    let mut rng = stream(1);
    suite.push(
        ObjectiveSpec::boxed("ellipsoid", BaseFunction::Ellipsoid, dim, -100.0, 100.0)?
            .with_shift(shift_in(&mut rng, -80.0, 80.0))?,
    );

    let mut rng = stream(2);
    suite.push(
        ObjectiveSpec::boxed("rosenbrock", BaseFunction::Rosenbrock, dim, -100.0, 100.0)?
            .with_shift(shift_in(&mut rng, -80.0, 80.0))?,
    );

    let mut rng = stream(3);
    let shift = shift_in(&mut rng, -80.0, 80.0);
    suite.push(
        ObjectiveSpec::boxed("ackley", BaseFunction::Ackley, dim, -100.0, 100.0)?
            .with_shift(shift)?
            .with_rotation(random_rotation(dim, &mut rng))?,
    );

    let mut rng = stream(4);
    let shift = shift_in(&mut rng, -80.0, 80.0);
    suite.push(
        ObjectiveSpec::boxed("griewank", BaseFunction::Griewank, dim, -100.0, 100.0)?
            .with_shift(shift)?
            .with_rotation(random_rotation(dim, &mut rng))?,
    );

    let mut rng = stream(5);
    suite.push(
        ObjectiveSpec::boxed("rastrigin", BaseFunction::Rastrigin, dim, -5.12, 5.12)?
            .with_shift(shift_in(&mut rng, -4.0, 4.0))?,
    );

    let mut rng = stream(6);
    suite.push(
        ObjectiveSpec::boxed("schwefel226", BaseFunction::Schwefel226, dim, -500.0, 500.0)?
            .with_shift(shift_in(&mut rng, -40.0, 40.0))?,
    );

    let mut rng = stream(7);
    let shift = shift_in(&mut rng, -4.0, 4.0);
    suite.push(
        ObjectiveSpec::boxed("rotated_rastrigin", BaseFunction::Rastrigin, dim, -5.12, 5.12)?
            .with_shift(shift)?
            .with_rotation(random_rotation(dim, &mut rng))?,
    );

    Ok(suite)
}

/// Looks up a suite function by name.
pub fn suite_function(dim: usize, seed: u64, name: &str) -> Result<ObjectiveSpec, ObjectiveError> {
    make_suite(dim, seed)?
        .into_iter()
        .find(|spec| spec.name() == name)
        .ok_or_else(|| ObjectiveError::Parse {
            path: name.to_string(),
            detail: format!("unknown function; choices: {}", SUITE_FUNCTION_NAMES.join(", ")),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sphere_at_origin_is_zero() {
        let spec = ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 2, -100.0, 100.0).unwrap();
        assert_eq!(spec.evaluate(&[0.0, 0.0]).unwrap(), 0.0);
    }

    #[test]
    fn sphere_at_ones_is_two() {
        let spec = ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 2, -100.0, 100.0).unwrap();
        assert_eq!(spec.evaluate(&[1.0, 1.0]).unwrap(), 2.0);
    }

    #[test]
    fn shifted_rastrigin_vanishes_at_shift() {
        let shift = vec![1.25, -2.5, 0.5];
        let spec = ObjectiveSpec::boxed("rastrigin", BaseFunction::Rastrigin, 3, -5.12, 5.12)
            .unwrap()
            .with_shift(shift.clone())
            .unwrap();
        let v = spec.evaluate(&shift).unwrap();
        assert!(v.abs() < 1e-12, "got {v}");
    }

    #[test]
    fn evaluate_rejects_bad_input() {
        let spec = ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 2, -100.0, 100.0).unwrap();
        assert!(matches!(
            spec.evaluate(&[1.0]),
            Err(ObjectiveError::DimensionMismatch { .. })
        ));
        assert!(matches!(
            spec.evaluate(&[1.0, f64::NAN]),
            Err(ObjectiveError::NonFiniteComponent { index: 1 })
        ));
    }

    #[test]
    fn evaluate_is_pure() {
        let suite = make_suite(5, 33).unwrap();
        let x = vec![3.5, -2.0, 0.0, 4.4, -1.1];
        for spec in &suite {
            let x: Vec<f64> = x
                .iter()
                .zip(spec.lower().iter().zip(spec.upper()))
                .map(|(v, (lo, hi))| f64::clamp(*v, *lo, *hi))
                .collect();
            let a = spec.evaluate(&x).unwrap();
            let b = spec.evaluate(&x).unwrap();
            assert_eq!(a.to_bits(), b.to_bits(), "{}", spec.name());
        }
    }

    #[test]
    fn suite_has_eight_valid_specs() {
        let suite = make_suite(2, 1).unwrap();
        assert_eq!(suite.len(), 8);
        let names: Vec<&str> = suite.iter().map(|s| s.name()).collect();
        assert_eq!(names, SUITE_FUNCTION_NAMES);
        for spec in &suite {
            // shift inside box
            for k in 0..spec.dim() {
                assert!(spec.shift()[k] >= spec.lower()[k]);
                assert!(spec.shift()[k] <= spec.upper()[k]);
            }
            // optimum feasible
            let x_star = spec.optimum_position();
            for k in 0..spec.dim() {
                assert!(
                    x_star[k] >= spec.lower()[k] && x_star[k] <= spec.upper()[k],
                    "{} optimum coordinate {k} = {} outside box",
                    spec.name(),
                    x_star[k]
                );
            }
        }
    }

    #[test]
    fn suite_is_deterministic_per_seed() {
        let a = make_suite(4, 9).unwrap();
        let b = make_suite(4, 9).unwrap();
        for (sa, sb) in a.iter().zip(&b) {
            assert_eq!(sa.shift(), sb.shift());
        }
    }

    #[test]
    fn different_seeds_give_different_shifts() {
        let a = make_suite(2, 1).unwrap();
        let b = make_suite(2, 2).unwrap();
        assert_ne!(a[0].shift(), b[0].shift());
    }

    #[test]
    fn generated_rotations_are_orthogonal() {
        for seed in 0..20 {
            let mut rng = RngStream::new(seed);
            let rot = random_rotation(6, &mut rng);
            check_orthogonal(&rot).unwrap();
        }
    }

    #[test]
    fn optimum_beats_random_feasible_points() {
        let suite = make_suite(3, 7).unwrap();
        let mut rng = RngStream::new(1234);
        for spec in &suite {
            let x_star = spec.optimum_position();
            let f_star = spec.evaluate(&x_star).unwrap();
            for _ in 0..1_000 {
                let y: Vec<f64> = (0..spec.dim())
                    .map(|k| rng.uniform(spec.lower()[k], spec.upper()[k]))
                    .collect();
                let fy = spec.evaluate(&y).unwrap();
                assert!(
                    f_star <= fy + 1e-9,
                    "{}: f(x*) = {f_star} > f(y) = {fy}",
                    spec.name()
                );
            }
        }
    }

    #[test]
    fn loads_shift_and_rotation_from_files() {
        let dir = std::env::temp_dir().join("fwa_objectives_test");
        std::fs::create_dir_all(&dir).unwrap();
        let shift_path = dir.join("shift.txt");
        let rot_path = dir.join("rot.txt");
        std::fs::write(&shift_path, "1.5 -2.0\n").unwrap();
        std::fs::write(&rot_path, "0 1\n1 0\n").unwrap();

        let spec = ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 2, -100.0, 100.0)
            .unwrap()
            .with_shift_from_file(&shift_path)
            .unwrap()
            .with_rotation_from_file(&rot_path)
            .unwrap();
        assert_eq!(spec.shift(), &[1.5, -2.0]);
        // permutation rotation: f(x) = (x2+2)^2 + (x1-1.5)^2 at z = swap(x - shift)
        let v = spec.evaluate(&[1.5, -2.0]).unwrap();
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn rejects_non_orthogonal_rotation() {
        let r = vec![vec![1.0, 0.1], vec![0.0, 1.0]];
        let err = ObjectiveSpec::boxed("sphere", BaseFunction::Sphere, 2, -100.0, 100.0)
            .unwrap()
            .with_rotation(r);
        assert!(matches!(err, Err(ObjectiveError::NotOrthogonal { .. })));
    }

    #[test]
    fn schwefel_optimum_value_is_near_zero() {
        let spec =
            ObjectiveSpec::boxed("schwefel226", BaseFunction::Schwefel226, 3, -500.0, 500.0)
                .unwrap();
        let v = spec.known_optimum_value().unwrap();
        assert!(v.abs() < 1e-9, "got {v}");
    }
}
