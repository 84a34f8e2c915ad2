use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{PdiError, Result};
use crate::tolerances::USER_GRAM_SYMMETRY;
use crate::Real;

/// Dense symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct GramMatrix {
    size: usize,
    values: Vec<Real>,
}

impl GramMatrix {
    pub fn from_rows(rows: Vec<Vec<Real>>) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|r| r.len() != size) {
            return Err(PdiError::Argument("Gram matrix must be square".into()));
        }
        Ok(Self { size, values: rows.into_iter().flatten().collect() })
    }

    pub(crate) fn from_flat(size: usize, values: Vec<Real>) -> Self {
        debug_assert_eq!(values.len(), size * size);
        Self { size, values }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> Real {
        self.values[i * self.size + j]
    }

    pub fn values(&self) -> &[Real] {
        &self.values
    }

    pub fn rows(&self) -> Vec<Vec<Real>> {
        self.values.chunks(self.size.max(1)).map(<[Real]>::to_vec).collect()
    }

    pub fn max_abs(&self) -> Real {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

/// User supplied kernel values on a finite registry of points.
#[derive(Debug, Clone, PartialEq)]
pub struct UserGram {
    matrix: GramMatrix,
    points: Vec<Vec<Real>>,
    lookup: HashMap<Vec<u64>, usize>,
}

fn bits(x: &[Real]) -> Vec<u64> {
    x.iter().map(|&v| if v == 0.0 { 0 } else { v.to_bits() }).collect()
}

impl UserGram {
    pub fn matrix(&self) -> &GramMatrix {
        &self.matrix
    }

    pub fn points(&self) -> &[Vec<Real>] {
        &self.points
    }

    fn index(&self, x: &[Real]) -> Result<usize> {
        self.lookup
            .get(&bits(x))
            .copied()
            .ok_or_else(|| PdiError::Argument(format!("point {x:?} is not in the Gram registry")))
    }
}

/// Conditionally negative definite kernel on one factor space.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentCnd {
    /// `||x - y||^beta`, `0 < beta <= 2`.
    EuclideanPower { beta: Real },
    /// `||x - y||^2`.
    SquaredEuclidean,
    /// Values looked up in a user Gram matrix.
    Gram(Arc<UserGram>),
    /// `base + c`.
    Shifted { base: Box<ComponentCnd>, c: Real },
}

impl ComponentCnd {
    pub fn euclidean_power(beta: Real) -> Result<Self> {
        if !(beta > 0.0 && beta <= 2.0) {
            return Err(PdiError::Argument(format!("euclidean_power exponent {beta} outside (0, 2]")));
        }
        Ok(Self::EuclideanPower { beta })
    }

    pub fn squared_euclidean() -> Self {
        Self::SquaredEuclidean
    }

    /// Kernel given by `values[i][j]` on `points`. The matrix must be
    /// symmetric and constant on the diagonal; conditional negativity is the
    /// caller's responsibility.
    pub fn gram(values: Vec<Vec<Real>>, points: Vec<Vec<Real>>) -> Result<Self> {
        let matrix = GramMatrix::from_rows(values)?;
        let m = matrix.size();
        if points.len() != m || m == 0 {
            return Err(PdiError::Argument("Gram registry size does not match the matrix".into()));
        }
        let dim = points[0].len();
        if dim == 0 || points.iter().any(|p| p.len() != dim) {
            return Err(PdiError::Argument("Gram registry points must share a positive dimension".into()));
        }
        let scale = matrix.max_abs().max(1.0);
        for i in 0..m {
            for j in 0..m {
                let (a, b) = (matrix.get(i, j), matrix.get(j, i));
                if !a.is_finite() || (a - b).abs() > USER_GRAM_SYMMETRY * scale {
                    return Err(PdiError::Argument("Gram matrix must be finite and symmetric".into()));
                }
            }
            if (matrix.get(i, i) - matrix.get(0, 0)).abs() > USER_GRAM_SYMMETRY * scale {
                return Err(PdiError::Argument("Gram matrix must be constant on the diagonal".into()));
            }
        }
        let mut lookup = HashMap::new();
        for (i, p) in points.iter().enumerate() {
            if lookup.insert(bits(p), i).is_some() {
                return Err(PdiError::Argument("Gram registry contains a repeated point".into()));
            }
        }
        Ok(Self::Gram(Arc::new(UserGram { matrix, points, lookup })))
    }

    pub fn shifted(base: ComponentCnd, c: Real) -> Result<Self> {
        if !(c >= 0.0 && c.is_finite()) {
            return Err(PdiError::Argument(format!("shift {c} must be finite and nonnegative")));
        }
        Ok(Self::Shifted { base: Box::new(base), c })
    }

    /// Dimension required of the arguments, when the kernel fixes one.
    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Gram(g) => Some(g.points[0].len()),
            Self::Shifted { base, .. } => base.dim(),
            _ => None,
        }
    }

    /// Constant value on the diagonal.
    pub fn diagonal(&self) -> Real {
        match self {
            Self::EuclideanPower { .. } | Self::SquaredEuclidean => 0.0,
            Self::Gram(g) => g.matrix.get(0, 0),
            Self::Shifted { base, c } => base.diagonal() + c,
        }
    }

    pub fn is_zero_diagonal(&self) -> bool {
        self.diagonal() == 0.0
    }

    /// Strictly conditionally negative definite on finite point sets.
    pub fn is_strict(&self) -> bool {
        match self {
            Self::EuclideanPower { beta } => *beta < 2.0,
            Self::SquaredEuclidean | Self::Gram(_) => false,
            Self::Shifted { base, .. } => base.is_strict(),
        }
    }

    pub fn eval(&self, x: &[Real], y: &[Real]) -> Result<Real> {
        if x.len() != y.len() {
            return Err(PdiError::Argument(format!("dimension mismatch: {} vs {}", x.len(), y.len())));
        }
        match self {
            Self::EuclideanPower { beta } => {
                let d2: Real = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
                Ok(if *beta == 2.0 { d2 } else { d2.powf(beta / 2.0) })
            }
            Self::SquaredEuclidean => Ok(x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum()),
            Self::Gram(g) => Ok(g.matrix.get(g.index(x)?, g.index(y)?)),
            Self::Shifted { base, c } => Ok(base.eval(x, y)? + c),
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::EuclideanPower { beta } => format!("euclidean_power:{beta}"),
            Self::SquaredEuclidean => "squared_euclidean".into(),
            Self::Gram(g) => format!("gram:{}", g.matrix.size()),
            Self::Shifted { base, c } => format!("shifted:{c}:{}", base.describe()),
        }
    }
}

/// `gamma(x, y)`.
pub fn cnd_eval(gamma: &ComponentCnd, x: &[Real], y: &[Real]) -> Result<Real> {
    gamma.eval(x, y)
}

/// `K^gamma(x, y) = gamma(x, w) + gamma(w, y) - gamma(x, y) - gamma(w, w)`.
pub fn kgamma_eval(gamma: &ComponentCnd, w: &[Real], x: &[Real], y: &[Real]) -> Result<Real> {
    Ok(gamma.eval(x, w)? + gamma.eval(w, y)? - gamma.eval(x, y)? - gamma.eval(w, w)?)
}
