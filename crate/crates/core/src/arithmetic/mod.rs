//! Arithmetic coefficient oracles from quadratic-field ideal counts and theta series.

pub mod character;
pub mod ideals;
pub mod quad;
pub mod table;
pub mod theta;

pub use character::{tw_pos, Mod16Character};
pub use ideals::{coeff_arith, ideal_count, ideal_norm_count, IdealWeight};
pub use quad::{
    pell_classes, reduce, sigma_coeff_arith, sigma_star_coeff_arith, signed_class_count, t_sigma, ModulusCondition,
    PellClassSet, QuadOrder,
};
pub use table::{
    ideal_conventions, CoeffTable, TableKind, SIGNED_CLASS_CONVENTIONS, TW_NEG_CONVENTIONS, TW_POS_CONVENTIONS,
    T_SIGMA_CONVENTIONS,
};
pub use theta::{theta_double_sum, ThetaId};
