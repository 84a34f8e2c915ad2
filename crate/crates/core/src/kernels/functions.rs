use num_traits::Float;

use crate::combinat::{e_func, elem_sym, SubsetIndex};
use crate::error::{PdiError, Result};
use crate::tolerances::SERIES_SWITCH;
use crate::Real;

fn cast<T: Float>(x: Real) -> T {
    T::from(x).expect("value representable in the scalar type")
}

fn check_t<T: Float>(t: T) -> Result<()> {
    if t >= T::zero() {
        Ok(())
    } else {
        Err(PdiError::Domain("kernel functions require nonnegative arguments".into()))
    }
}

/// `(1 - e^{-r t})(1 + r)/r`, continued by `t` at `r = 0`.
pub fn bernstein_factor<T: Float>(r: T, t: T) -> T {
    if r == T::zero() {
        return t;
    }
    let rt = r * t;
    if rt < cast(SERIES_SWITCH) {
        t * (T::one() - rt / cast(2.0)) * (T::one() + r)
    } else {
        -(-rt).exp_m1() * (T::one() + r) / r
    }
}

/// Truncated exponential series `omega_l(s) = sum_{j<l} (-s)^j/j!`.
pub fn omega<T: Float>(ell: usize, s: T) -> T {
    let mut term = T::one();
    let mut acc = T::zero();
    for j in 0..ell {
        acc = acc + term;
        term = term * (-s) / cast((j + 1) as Real);
    }
    acc
}

/// `e^{-s} - omega_l(s)`, summed as the power series tail for small `s`.
pub fn exp_tail<T: Float>(ell: usize, s: T) -> T {
    if ell == 0 {
        return (-s).exp();
    }
    if s < cast((ell + 1) as Real) {
        let mut term = T::one();
        for j in 0..ell {
            term = term * (-s) / cast((j + 1) as Real);
        }
        let mut acc = T::zero();
        let mut j = ell;
        loop {
            acc = acc + term;
            j += 1;
            term = term * (-s) / cast(j as Real);
            if term.abs() <= T::epsilon() * acc.abs() || term == T::zero() || j > ell + 200 {
                return acc;
            }
        }
    }
    (-s).exp() - omega(ell, s)
}

/// `E_l(s) = (-1)^l (e^{-s} - omega_l(s))`, nonnegative for `s >= 0`.
pub fn e_ell<T: Float>(ell: usize, s: T) -> T {
    let v = exp_tail(ell, s);
    if ell.is_multiple_of(2) {
        v
    } else {
        -v
    }
}

/// Point mass of the representing measure of a Bernstein function.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinAtom {
    pub r: Vec<Real>,
    pub weight: Real,
}

/// Order `k` face term `psi^F(t_F)` for `|F| = k`.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceTerm {
    pub face: SubsetIndex,
    pub spec: BernsteinSpecK,
}

/// Bernstein function of order `k` in `n` variables, given by its measure.
#[derive(Debug, Clone, PartialEq)]
pub struct BernsteinSpecK {
    n: usize,
    k: usize,
    atoms: Vec<BernsteinAtom>,
    faces: Vec<FaceTerm>,
}

fn check_atom(a: &BernsteinAtom, n: usize) -> Result<()> {
    if a.r.len() != n {
        return Err(PdiError::Argument(format!("atom has {} entries, expected {n}", a.r.len())));
    }
    if !(a.weight >= 0.0 && a.weight.is_finite()) {
        return Err(PdiError::Argument(format!("atom weight {} must be finite and nonnegative", a.weight)));
    }
    if a.r.iter().any(|&r| !(r >= 0.0 && r.is_finite())) {
        return Err(PdiError::Argument("atom locations must be finite and nonnegative".into()));
    }
    Ok(())
}

impl BernsteinSpecK {
    /// Order `n` function `sum w prod_i (1 - e^{-r_i t_i})(1 + r_i)/r_i`.
    pub fn product_form(n: usize, atoms: Vec<BernsteinAtom>) -> Result<Self> {
        if n == 0 {
            return Err(PdiError::Argument("a Bernstein function needs at least one variable".into()));
        }
        for a in &atoms {
            check_atom(a, n)?;
        }
        Ok(Self { n, k: n, atoms, faces: Vec::new() })
    }

    /// Order `k < n` function `sum_F psi^F(t_F) + sum w (-1)^k E^n_k(r t) p_k(r+1)/p_k(r)`.
    pub fn order_k(n: usize, k: usize, faces: Vec<FaceTerm>, atoms: Vec<BernsteinAtom>) -> Result<Self> {
        if k == n {
            if !faces.is_empty() {
                return Err(PdiError::Argument("order n functions carry no face terms".into()));
            }
            return Self::product_form(n, atoms);
        }
        if k == 0 || k > n {
            return Err(PdiError::Argument(format!("order {k} must lie in 1..={n}")));
        }
        for a in &atoms {
            check_atom(a, n)?;
            if a.r.iter().filter(|&&r| r > 0.0).count() <= k {
                return Err(PdiError::Argument(format!("order {k} atoms need more than {k} positive entries")));
            }
        }
        for f in &faces {
            if f.face.n() != n || f.face.len() != k {
                return Err(PdiError::Argument(format!("face terms must be indexed by {k}-subsets of {n} variables")));
            }
            if f.spec.n != k || f.spec.k != k {
                return Err(PdiError::Argument("face terms must be order k functions of k variables".into()));
            }
        }
        Ok(Self { n, k, atoms, faces })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn atoms(&self) -> &[BernsteinAtom] {
        &self.atoms
    }

    pub fn faces(&self) -> &[FaceTerm] {
        &self.faces
    }

    /// Strictness tag: positive mass on atoms with every entry positive.
    pub fn is_strict(&self) -> bool {
        self.atoms.iter().any(|a| a.weight > 0.0 && a.r.iter().all(|&r| r > 0.0))
    }

    pub fn eval<T: Float>(&self, t: &[T]) -> Result<T> {
        if t.len() != self.n {
            return Err(PdiError::Argument(format!("expected {} arguments, got {}", self.n, t.len())));
        }
        for &x in t {
            check_t(x)?;
        }
        let mut acc = T::zero();
        if self.k == self.n {
            for a in &self.atoms {
                let mut prod = cast::<T>(a.weight);
                for (&r, &x) in a.r.iter().zip(t) {
                    prod = prod * bernstein_factor(cast(r), x);
                }
                acc = acc + prod;
            }
            return Ok(acc);
        }
        let mut sub = Vec::with_capacity(self.k);
        for f in &self.faces {
            sub.clear();
            sub.extend(f.face.members().iter().map(|&i| t[i]));
            acc = acc + f.spec.eval(&sub)?;
        }
        let mut rt = Vec::with_capacity(self.n);
        for a in &self.atoms {
            rt.clear();
            rt.extend(a.r.iter().zip(t).map(|(&r, &x)| cast::<T>(r) * x));
            let e = e_func(self.k, self.n, &rt)?;
            let e = if self.k.is_multiple_of(2) { e } else { -e };
            let r: Vec<T> = a.r.iter().map(|&r| cast(r)).collect();
            let r1: Vec<T> = r.iter().map(|&x| x + T::one()).collect();
            let ratio = elem_sym(self.k, &r1)? / elem_sym(self.k, &r)?;
            acc = acc + cast::<T>(a.weight) * e * ratio;
        }
        Ok(acc)
    }
}

/// Evaluate a Bernstein function of order `k`.
pub fn bernstein_eval_g<T: Float>(g: &BernsteinSpecK, t: &[T]) -> Result<T> {
    g.eval(t)
}

/// Shape of a completely monotone function of order `l`.
#[derive(Debug, Clone, PartialEq)]
pub enum CmKind {
    /// `(-1)^l t^a`, `l - 1 < a <= l`.
    Power { a: Real },
    /// `(-1)^l t^{l-1} log t`.
    LogPower,
    /// `e^{-r t}`.
    Exponential { r: Real },
    /// `(-1)^l (c + t)^a`, `l - 1 < a <= l`.
    ShiftedPower { c: Real, a: Real },
    /// `a_l t^l + sum w (e^{-r t} - omega_l(r t))(1 + r)/r^l`.
    Mixture { a_ell: Real, atoms: Vec<(Real, Real)> },
}

/// Completely monotone function of order `l`.
#[derive(Debug, Clone, PartialEq)]
pub struct CmFunctionSpec {
    ell: usize,
    kind: CmKind,
}

impl CmFunctionSpec {
    pub fn new(ell: usize, kind: CmKind) -> Result<Self> {
        let bad = |m: String| Err(PdiError::Argument(m));
        let l = ell as Real;
        match &kind {
            CmKind::Power { a } => {
                if ell == 0 || !(*a > l - 1.0 && *a <= l) {
                    return bad(format!("power exponent {a} needs l >= 1 and l-1 < a <= l (l = {ell})"));
                }
            }
            CmKind::LogPower => {
                if ell < 2 {
                    return bad("log_power requires l >= 2".into());
                }
            }
            CmKind::Exponential { r } => {
                if !(*r > 0.0 && r.is_finite()) {
                    return bad(format!("exponential rate {r} must be positive"));
                }
            }
            CmKind::ShiftedPower { c, a } => {
                if !(*c > 0.0 && c.is_finite()) || !(*a > l - 1.0 && *a <= l) {
                    return bad(format!("shifted_power needs c > 0 and l-1 < a <= l (c = {c}, a = {a}, l = {ell})"));
                }
            }
            CmKind::Mixture { a_ell, atoms } => {
                let signed = if ell.is_multiple_of(2) { *a_ell } else { -*a_ell };
                if !(signed >= 0.0 && a_ell.is_finite()) {
                    return bad(format!("mixture coefficient {a_ell} has the wrong sign for l = {ell}"));
                }
                if atoms.iter().any(|&(r, w)| !(r > 0.0 && r.is_finite() && w >= 0.0 && w.is_finite())) {
                    return bad("mixture atoms need r > 0 and weight >= 0".into());
                }
            }
        }
        Ok(Self { ell, kind })
    }

    pub fn power(ell: usize, a: Real) -> Result<Self> {
        Self::new(ell, CmKind::Power { a })
    }

    pub fn log_power(ell: usize) -> Result<Self> {
        Self::new(ell, CmKind::LogPower)
    }

    pub fn exponential(ell: usize, r: Real) -> Result<Self> {
        Self::new(ell, CmKind::Exponential { r })
    }

    pub fn shifted_power(ell: usize, c: Real, a: Real) -> Result<Self> {
        Self::new(ell, CmKind::ShiftedPower { c, a })
    }

    pub fn mixture(ell: usize, a_ell: Real, atoms: Vec<(Real, Real)>) -> Result<Self> {
        Self::new(ell, CmKind::Mixture { a_ell, atoms })
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn kind(&self) -> &CmKind {
        &self.kind
    }

    pub fn is_polynomial(&self) -> bool {
        match &self.kind {
            CmKind::Power { a } | CmKind::ShiftedPower { a, .. } => *a == self.ell as Real,
            CmKind::LogPower | CmKind::Exponential { .. } => false,
            CmKind::Mixture { atoms, .. } => atoms.iter().all(|&(_, w)| w == 0.0),
        }
    }

    pub fn eval<T: Float>(&self, t: T) -> Result<T> {
        check_t(t)?;
        let sign = if self.ell.is_multiple_of(2) { T::one() } else { -T::one() };
        let v = match &self.kind {
            CmKind::Power { a } => sign * t.powf(cast(*a)),
            CmKind::LogPower => {
                if t == T::zero() {
                    T::zero()
                } else {
                    sign * t.powi(self.ell as i32 - 1) * t.ln()
                }
            }
            CmKind::Exponential { r } => (-cast::<T>(*r) * t).exp(),
            CmKind::ShiftedPower { c, a } => sign * (cast::<T>(*c) + t).powf(cast(*a)),
            CmKind::Mixture { a_ell, atoms } => {
                let mut acc = cast::<T>(*a_ell) * t.powi(self.ell as i32);
                for &(r, w) in atoms {
                    let r: T = cast(r);
                    acc = acc + cast::<T>(w) * exp_tail(self.ell, r * t) * (T::one() + r) / r.powi(self.ell as i32);
                }
                acc
            }
        };
        Ok(v)
    }

    pub fn describe(&self) -> String {
        match &self.kind {
            CmKind::Power { a } => format!("power:{a}"),
            CmKind::LogPower => "log_power".into(),
            CmKind::Exponential { r } => format!("exponential:{r}"),
            CmKind::ShiftedPower { c, a } => format!("shifted_power:{c}:{a}"),
            CmKind::Mixture { atoms, .. } => format!("mixture:{}", atoms.len()),
        }
    }
}

/// Evaluate a completely monotone function of order `l`.
pub fn cm_eval_psi<T: Float>(psi: &CmFunctionSpec, t: T) -> Result<T> {
    psi.eval(t)
}
