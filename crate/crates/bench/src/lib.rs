//! Parameter fixtures shared by the benchmarks.

use std::f64::consts::PI;

use kleinrp_core::rp::{beta_for_order, synthesize_raw};
use kleinrp_core::Moebius;

/// `-4cos²(π/p)`, the commutator parameter that makes `p` an integer.
pub fn gamma_for_p(p: u32) -> f64 {
    -4.0 * (PI / f64::from(p)).cos().powi(2)
}

/// Named `(beta_f, gamma)` samples covering each kind of `f` and `h`.
pub fn samples() -> Vec<(&'static str, f64, f64)> {
    vec![
        ("elliptic-3/p-3", beta_for_order(3), gamma_for_p(3)),
        ("elliptic-7/p-12", beta_for_order(7), gamma_for_p(12)),
        ("parabolic/p-5", 0.0, gamma_for_p(5)),
        ("loxodromic/hyperbolic-h", 6.5, -5.0),
        ("elliptic-5/non-discrete", beta_for_order(5), -2.5),
    ]
}

/// A non-discrete pair whose witness sits a few letters deep.
pub fn witness_pair() -> (Moebius, Moebius) {
    synthesize_raw(0.0, -0.5).expect("in scope")
}
