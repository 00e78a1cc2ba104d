//! Zeta values, the prime zeta function and Euler-product constants.

pub mod euler;
pub mod presets;
pub mod prime_zeta;
pub mod zeta;

pub use euler::{
    euler_product, log_expand_local, truncated_product_oracle, EulerParams, EulerProductResult,
    HalfExp, LocalFactorExpansion, LogExpansion, ProductMethod, ProductParams,
};
pub use presets::{preset_constant, preset_value, ConstantReport, PresetId, PresetOptions};
pub use prime_zeta::{prime_tail_bound, prime_zeta, prime_zeta_tail};
pub use zeta::{zeta_bounded, zeta_eta, zeta_minus_one, zeta_real, Bounded};
