//! Numerical side: Maass waveforms, period integrals, cusps of `Gamma_0(4)` and
//! root-of-unity evaluation of the associated quantum modular forms.

pub mod bessel;
pub mod cusp;
pub mod period;
pub mod quantum;
pub mod waveform;

pub use bessel::{bessel_k, k0_f64, k1_f64, k_f64};
pub use cusp::{classify_cusp, CuspClass, CuspOrbit, Mat2, ProjectivePoint};
pub use period::{gauss_legendre, period_integral, period_target, QuadratureSpec};
pub use quantum::{
    cohen_residual, period_function, period_function_sample, period_samples_csv, quantum_eval_fw, quantum_eval_sigma,
    Generator, PeriodSample, SigmaQuantumValue,
};
pub use waveform::{
    laplacian_convergence, laplacian_residual, n_max_for, phi_eval, s_transform_check, s_transform_residual,
    translation_check, translation_phase, LaplacianResidual, MaassEvalContext, PhiValue, ResidualReport,
    UpperHalfPoint,
};
