//! Pass thresholds used by the experiments.

/// Spectral radius of a normalized system against 1.
pub const RHO_EXACT: f64 = 1e-12;

/// Half-width of the window for ω̂ around the closed-form growth rate.
pub const GROWTH_WINDOW: f64 = 0.02;

/// Slack on the Coornaert constant.
pub const COORNAERT_SLACK: f64 = 1e-12;

/// Truncated twisted estimates may exceed ρ by at most this much.
pub const RHO_LAMBDA_SLACK: f64 = 1e-9;

/// Allowed decrease of ρ̂_λ when the truncation radius grows.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Distance of ρ̂_λ from 3^{−1/2} on the tree at R = 12.
pub const TREE_TARGET: f64 = 1e-2;

/// Amenable estimates must reach this value.
pub const AMENABLE_FLOOR: f64 = 0.95;

/// Window for the simple random walk on the 4-regular tree.
pub const TREE_WALK: (f64, f64) = (0.80, 0.8661);

/// Relative distance of (1/ℓ) ln ρ̂_ℓ from −½ ln 3 at the largest ℓ.
pub const RHO_INFINITY_RELATIVE: f64 = 0.15;

/// Fraction of ln 3 that (1/n) ln |N ∩ S(n)| must reach at n = 30.
pub const KERNEL_GROWTH_FRACTION: f64 = 0.88;

/// Stochasticity of a renormalized operator.
pub const STOCHASTIC: f64 = 1e-10;

/// Grigorchuk's formula against closed forms.
pub const FORMULA: f64 = 1e-12;
