//! Component CND kernels, Bernstein and completely monotone function specs,
//! assembled PDI kernels and the induced positive definite kernel.

mod cnd;
mod functions;
pub mod library;
mod spec;

pub use cnd::{cnd_eval, kgamma_eval, ComponentCnd, GramMatrix, UserGram};
pub use functions::{
    bernstein_eval_g, bernstein_factor, cm_eval_psi, e_ell, exp_tail, omega, BernsteinAtom, BernsteinSpecK,
    CmFunctionSpec, CmKind, FaceTerm,
};
pub use library::{library, preset, LibraryKernel};
pub use spec::{gram, induced_pd_eval, pdi_eval, KroneckerFactor, PdiKernelSpec};
