use rayon::prelude::*;

use super::cnd::{ComponentCnd, GramMatrix};
use super::functions::{BernsteinSpecK, CmFunctionSpec, CmKind};
use crate::combinat::SubsetIndex;
use crate::error::{PdiError, Result};
use crate::measures::{mu_k, ProductPoint};
use crate::tolerances::GRAM_ASYMMETRY;
use crate::Real;

/// One block of a Kronecker composite: a kernel on the listed components.
#[derive(Debug, Clone, PartialEq)]
pub struct KroneckerFactor {
    pub components: SubsetIndex,
    pub spec: PdiKernelSpec,
}

/// A PDI kernel of order `k` on `n` components.
#[derive(Debug, Clone, PartialEq)]
pub enum PdiKernelSpec {
    /// `g(gamma_1(x_1, y_1), .., gamma_n(x_n, y_n))`.
    Bernstein { g: BernsteinSpecK, gammas: Vec<ComponentCnd> },
    /// `(-1)^l psi(sum_i gamma_i(x_i, y_i))`.
    SumForm { psi: CmFunctionSpec, gammas: Vec<ComponentCnd> },
    /// `(-1)^(k - sum k_i) prod_i I_i`.
    Kronecker { factors: Vec<KroneckerFactor>, order: usize, n: usize },
}

impl PdiKernelSpec {
    pub fn bernstein(g: BernsteinSpecK, gammas: Vec<ComponentCnd>) -> Result<Self> {
        if gammas.len() != g.n() {
            return Err(PdiError::Argument(format!(
                "{} component kernels for a function of {} variables",
                gammas.len(),
                g.n()
            )));
        }
        Ok(Self::Bernstein { g, gammas })
    }

    pub fn sum_form(psi: CmFunctionSpec, gammas: Vec<ComponentCnd>) -> Result<Self> {
        if gammas.is_empty() {
            return Err(PdiError::Argument("sum form needs at least one component".into()));
        }
        if psi.ell() > gammas.len() {
            return Err(PdiError::Argument(format!("order {} exceeds the {} components", psi.ell(), gammas.len())));
        }
        Ok(Self::SumForm { psi, gammas })
    }

    /// Kronecker composite of order `order`. The factor groups must partition
    /// the components, and every factor of positive order `k_i` on `n_i`
    /// components needs `order >= k_i + n - n_i`.
    pub fn kronecker(factors: Vec<KroneckerFactor>, order: usize) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(PdiError::Argument("kronecker product needs at least one factor".into()));
        };
        let n = first.components.n();
        let mut seen = vec![false; n];
        for f in &factors {
            if f.components.n() != n || f.components.is_empty() {
                return Err(PdiError::Argument("factor groups must be nonempty subsets of one index set".into()));
            }
            if f.spec.n() != f.components.len() {
                return Err(PdiError::Argument(format!(
                    "factor on {} components has a kernel on {}",
                    f.components.len(),
                    f.spec.n()
                )));
            }
            for &i in f.components.members() {
                if std::mem::replace(&mut seen[i], true) {
                    return Err(PdiError::Argument(format!("component {i} appears in two factors")));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(PdiError::Argument("factor groups do not cover every component".into()));
        }
        if order > n {
            return Err(PdiError::Argument(format!("order {order} exceeds n = {n}")));
        }
        for f in &factors {
            let ki = f.spec.order();
            if ki > 0 && order < ki + n - f.components.len() {
                return Err(PdiError::Argument(format!(
                    "order {order} is too small for a factor of order {ki} on {} of {n} components",
                    f.components.len()
                )));
            }
        }
        Ok(Self::Kronecker { factors, order, n })
    }

    pub fn n(&self) -> usize {
        match self {
            Self::Bernstein { gammas, .. } | Self::SumForm { gammas, .. } => gammas.len(),
            Self::Kronecker { n, .. } => *n,
        }
    }

    pub fn order(&self) -> usize {
        match self {
            Self::Bernstein { g, .. } => g.k(),
            Self::SumForm { psi, .. } => psi.ell(),
            Self::Kronecker { order, .. } => *order,
        }
    }

    /// Component kernels in component order.
    pub fn gammas(&self) -> Vec<ComponentCnd> {
        match self {
            Self::Bernstein { gammas, .. } | Self::SumForm { gammas, .. } => gammas.clone(),
            Self::Kronecker { n, .. } => (0..*n).map(|i| self.gamma_at(i).clone()).collect(),
        }
    }

    fn kronecker_sign(factors: &[KroneckerFactor], order: usize) -> Real {
        let inner: usize = factors.iter().map(|f| f.spec.order()).sum();
        if (order + inner).is_multiple_of(2) {
            1.0
        } else {
            -1.0
        }
    }

    /// Kernel value as a function of the component kernel values `t_i`.
    pub fn eval_t(&self, t: &[Real]) -> Result<Real> {
        if t.len() != self.n() {
            return Err(PdiError::Argument(format!("expected {} component values, got {}", self.n(), t.len())));
        }
        match self {
            Self::Bernstein { g, .. } => g.eval(t),
            Self::SumForm { psi, .. } => {
                let s: Real = t.iter().sum();
                let v = psi.eval(s)?;
                Ok(if psi.ell() % 2 == 0 { v } else { -v })
            }
            Self::Kronecker { factors, order, .. } => {
                let mut acc = Self::kronecker_sign(factors, *order);
                let mut sub = Vec::new();
                for f in factors {
                    sub.clear();
                    sub.extend(f.components.members().iter().map(|&i| t[i]));
                    acc *= f.spec.eval_t(&sub)?;
                }
                Ok(acc)
            }
        }
    }

    /// Component kernel values `gamma_i(x_i, y_i)`.
    pub fn component_values(&self, x: &ProductPoint, y: &ProductPoint) -> Result<Vec<Real>> {
        let n = self.n();
        if x.n() != n || y.n() != n {
            return Err(PdiError::Argument(format!(
                "kernel on {n} components applied to points with {} and {}",
                x.n(),
                y.n()
            )));
        }
        (0..n).map(|i| self.gamma_at(i).eval(x.component(i), y.component(i))).collect()
    }

    /// Component kernel of component `i`.
    pub fn gamma_at(&self, i: usize) -> &ComponentCnd {
        match self {
            Self::Bernstein { gammas, .. } | Self::SumForm { gammas, .. } => &gammas[i],
            Self::Kronecker { factors, .. } => {
                for f in factors {
                    if let Some(pos) = f.components.members().iter().position(|&c| c == i) {
                        return f.spec.gamma_at(pos);
                    }
                }
                unreachable!("factor groups cover every component")
            }
        }
    }

    /// `I(x, y) = s * prod_i gamma_i(x_i, y_i)` when the kernel has this
    /// form, as `(gammas, s)`.
    pub fn cnd_product(&self) -> Option<(Vec<ComponentCnd>, Real)> {
        match self {
            Self::Bernstein { g, gammas } => {
                if g.k() != g.n() || g.atoms().iter().any(|a| a.weight != 0.0 && a.r.iter().any(|&r| r != 0.0)) {
                    return None;
                }
                let w: Real = g.atoms().iter().map(|a| a.weight).sum();
                Some((gammas.clone(), w))
            }
            Self::SumForm { psi, gammas } => match psi.kind() {
                CmKind::Power { a } if gammas.len() == 1 && psi.ell() == 1 && *a == 1.0 => Some((gammas.clone(), 1.0)),
                _ => None,
            },
            Self::Kronecker { factors, order, n } => {
                let mut scale = Self::kronecker_sign(factors, *order);
                let mut out: Vec<Option<ComponentCnd>> = vec![None; *n];
                for f in factors {
                    let (gs, s) = f.spec.cnd_product()?;
                    scale *= s;
                    for (&i, g) in f.components.members().iter().zip(gs) {
                        out[i] = Some(g);
                    }
                }
                Some((out.into_iter().collect::<Option<Vec<_>>>()?, scale))
            }
        }
    }

    pub fn has_zero_diagonal_gammas(&self) -> bool {
        self.gammas().iter().all(ComponentCnd::is_zero_diagonal)
    }

    pub fn describe(&self) -> String {
        let gs = |gammas: &[ComponentCnd]| gammas.iter().map(ComponentCnd::describe).collect::<Vec<_>>().join(",");
        match self {
            Self::Bernstein { g, gammas } => {
                format!(
                    "bernstein(n={},k={},atoms={},faces={};{})",
                    g.n(),
                    g.k(),
                    g.atoms().len(),
                    g.faces().len(),
                    gs(gammas)
                )
            }
            Self::SumForm { psi, gammas } => format!("sum_form(l={},{};{})", psi.ell(), psi.describe(), gs(gammas)),
            Self::Kronecker { factors, order, .. } => {
                let parts: Vec<String> = factors
                    .iter()
                    .map(|f| {
                        let c: Vec<String> = f.components.members().iter().map(|i| i.to_string()).collect();
                        format!("[{}]{}", c.join(","), f.spec.describe())
                    })
                    .collect();
                format!("kronecker(k={order};{})", parts.join("x"))
            }
        }
    }
}

/// `I(x1, x2)`.
pub fn pdi_eval(spec: &PdiKernelSpec, x1: &ProductPoint, x2: &ProductPoint) -> Result<Real> {
    spec.eval_t(&spec.component_values(x1, x2)?)
}

/// Induced PD kernel `K(x1, x2) = (-1)^k sum a b I(u, v)` over the atoms
/// `(u, a)` of `mu_k[x1, x0]` and `(v, b)` of `mu_k[x2, x0]`.
pub fn induced_pd_eval(
    spec: &PdiKernelSpec,
    k: usize,
    x0: &ProductPoint,
    x1: &ProductPoint,
    x2: &ProductPoint,
) -> Result<Real> {
    let m1 = mu_k(x1, x0, k)?;
    let m2 = mu_k(x2, x0, k)?;
    let mut acc = 0.0;
    for (u, a) in m1.atoms() {
        for (v, b) in m2.atoms() {
            acc += a * b * pdi_eval(spec, u, v)?;
        }
    }
    Ok(if k.is_multiple_of(2) { acc } else { -acc })
}

/// Symmetrised Gram matrix of `kernel` over `points`.
pub fn gram<P, F>(kernel: F, points: &[P]) -> Result<GramMatrix>
where
    P: Sync,
    F: Fn(&P, &P) -> Result<Real> + Sync,
{
    let m = points.len();
    if m == 0 {
        return Err(PdiError::Argument("Gram matrix needs at least one point".into()));
    }
    let rows: Vec<Vec<Real>> = points
        .par_iter()
        .map(|p| points.iter().map(|q| kernel(p, q)).collect::<Result<Vec<_>>>())
        .collect::<Result<_>>()?;
    let scale = rows.iter().flatten().fold(0.0_f64, |s, v| s.max(v.abs()));
    let mut values = vec![0.0; m * m];
    for i in 0..m {
        for j in 0..m {
            let (a, b) = (rows[i][j], rows[j][i]);
            if !a.is_finite() {
                return Err(PdiError::Internal(format!("non-finite Gram entry at ({i}, {j})")));
            }
            if (a - b).abs() > GRAM_ASYMMETRY * scale {
                return Err(PdiError::Internal(format!("Gram asymmetry {} at ({i}, {j})", (a - b).abs())));
            }
            values[i * m + j] = 0.5 * (a + b);
        }
    }
    Ok(GramMatrix::from_flat(m, values))
}
