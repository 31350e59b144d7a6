//! Conjugacy parameters `(β(f), β(g), γ(f,g))`, the scope gate for the
//! parabolic-generator family, synthesis of normalized generators from a
//! parameter triple, and reduction of non-primitive elliptic parameters.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::moebius::{beta, gamma, rotation_angle_from_beta, Complex, Moebius};
use crate::order::{rational_approximation, ExtendedOrder, RATIONAL_TOLERANCE};

/// Default realness / zero tolerance for parameters.
pub const PARAM_TOLERANCE: f64 = 1e-9;

/// `(β(f), β(g), γ(f,g))` over `Complex` (raw) or `f64` (certified real).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Triple<T> {
    pub beta_f: T,
    pub beta_g: T,
    pub gamma: T,
}

impl<T> Triple<T> {
    pub fn new(beta_f: T, beta_g: T, gamma: T) -> Self {
        Triple {
            beta_f,
            beta_g,
            gamma,
        }
    }
}

impl Triple<f64> {
    /// `(β(f), 0, γ)`.
    pub fn parabolic_family(beta_f: f64, gamma: f64) -> Self {
        Triple::new(beta_f, 0.0, gamma)
    }

    pub fn to_complex(self) -> Triple<Complex> {
        Triple::new(self.beta_f.into(), self.beta_g.into(), self.gamma.into())
    }
}

impl Triple<Complex> {
    /// Realness flags for `(β(f), β(g), γ)`.
    pub fn realness(&self, tol: f64) -> [bool; 3] {
        [
            is_real(self.beta_f, tol),
            is_real(self.beta_g, tol),
            is_real(self.gamma, tol),
        ]
    }

    /// The real parts, when all three parameters are real within `tol`.
    pub fn to_real(&self, tol: f64) -> Option<Triple<f64>> {
        self.realness(tol)
            .iter()
            .all(|&r| r)
            .then(|| Triple::new(self.beta_f.re, self.beta_g.re, self.gamma.re))
    }
}

/// `|Im x| ≤ tol·(1 + |x|)`.
pub fn is_real(x: Complex, tol: f64) -> bool {
    x.im.abs() <= tol * (1.0 + x.norm())
}

/// The parameters of the pair `(f, g)`.
pub fn params(f: &Moebius, g: &Moebius) -> Triple<Complex> {
    Triple::new(beta(f), beta(g), gamma(f, g))
}

/// A certified in-scope triple: real, `β(g) = 0`, `γ < 0`, and `β(f)` either
/// `-4sin²(π/n)` with `n ≥ 3`, `0` (`n = ∞`) or positive (`n = ∞̄`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RpTriple {
    pub beta_f: f64,
    pub beta_g: f64,
    pub gamma: f64,
    pub n: ExtendedOrder,
}

impl RpTriple {
    /// Scope-checks `(β(f), 0, γ)` and returns it only when in scope.
    pub fn new(beta_f: f64, gamma: f64, tol: f64, max_order: u32) -> Result<Self> {
        let report = check_scope(&Triple::parabolic_family(beta_f, gamma).to_complex(), tol, max_order);
        report.triple.ok_or(Error::OutOfScope(report.verdict))
    }

    /// `(-4sin²(π/n), 0, γ)`.
    pub fn elliptic(n: u32, gamma: f64) -> Result<Self> {
        RpTriple::new(beta_for_order(n), gamma, PARAM_TOLERANCE, n.max(crate::order::DEFAULT_MAX_ORDER))
    }

    pub fn as_triple(&self) -> Triple<f64> {
        Triple::new(self.beta_f, self.beta_g, self.gamma)
    }
}

/// `-4sin²(π/n)`.
pub fn beta_for_order(n: u32) -> f64 {
    -4.0 * (PI / f64::from(n)).sin().powi(2)
}

/// Outcome of the scope gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScopeVerdict {
    InScope,
    /// `β(f) = -4sin²(kπ/n)` with `k > 1`; in scope after [`primitive_reduction`].
    NeedsPrimitiveReduction { k: u32, n: u32 },
    /// `γ = 0`: `f` and `g` share a fixed point.
    Elementary,
    /// `γ > 0`.
    HasInvariantPlane,
    /// `β(f) < -4`.
    PiLoxodromicGenerator,
    NonRealParameters,
    /// `β(g) ≠ 0`.
    NonParabolicGenerator,
    /// `f` elliptic of order 2 or with an unrecognized rotation angle.
    EllipticOutsideFamily,
}

impl ScopeVerdict {
    pub fn name(&self) -> &'static str {
        match self {
            ScopeVerdict::InScope => "in-scope",
            ScopeVerdict::NeedsPrimitiveReduction { .. } => "needs-primitive-reduction",
            ScopeVerdict::Elementary => "elementary",
            ScopeVerdict::HasInvariantPlane => "invariant-plane",
            ScopeVerdict::PiLoxodromicGenerator => "pi-loxodromic-generator",
            ScopeVerdict::NonRealParameters => "non-real-parameters",
            ScopeVerdict::NonParabolicGenerator => "non-parabolic-generator",
            ScopeVerdict::EllipticOutsideFamily => "elliptic-outside-family",
        }
    }
}

impl fmt::Display for ScopeVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScopeReport {
    pub verdict: ScopeVerdict,
    pub detail: String,
    /// Present exactly when `verdict` is `InScope`.
    pub triple: Option<RpTriple>,
}

impl ScopeReport {
    fn reject(verdict: ScopeVerdict, detail: impl Into<String>) -> Self {
        ScopeReport {
            verdict,
            detail: detail.into(),
            triple: None,
        }
    }

    pub fn is_in_scope(&self) -> bool {
        self.verdict == ScopeVerdict::InScope
    }
}

/// Rotation `2πk/q` of an elliptic with trace parameter `β ∈ [-4, 0)`.
fn elliptic_fraction(beta_f: f64, max_order: u32) -> Option<(u32, u32)> {
    let x = rotation_angle_from_beta(beta_f) / (2.0 * PI);
    rational_approximation(x, max_order, RATIONAL_TOLERANCE)
}

/// Decides whether a parameter triple belongs to the family handled here.
pub fn check_scope(t: &Triple<Complex>, tol: f64, max_order: u32) -> ScopeReport {
    let Some(real) = t.to_real(tol) else {
        return ScopeReport::reject(
            ScopeVerdict::NonRealParameters,
            format!(
                "parameters ({}, {}, {}) are not all real",
                t.beta_f, t.beta_g, t.gamma
            ),
        );
    };
    if real.beta_g.abs() > tol {
        return ScopeReport::reject(
            ScopeVerdict::NonParabolicGenerator,
            format!("beta(g) = {} is not zero", real.beta_g),
        );
    }
    if real.gamma.abs() <= tol {
        return ScopeReport::reject(
            ScopeVerdict::Elementary,
            "gamma = 0: f and g have a common fixed point",
        );
    }
    if real.beta_f < -4.0 - tol {
        return ScopeReport::reject(
            ScopeVerdict::PiLoxodromicGenerator,
            format!("beta(f) = {} < -4", real.beta_f),
        );
    }
    if real.gamma > 0.0 {
        return ScopeReport::reject(
            ScopeVerdict::HasInvariantPlane,
            format!("gamma = {} > 0: the group has an invariant plane", real.gamma),
        );
    }
    let n = if real.beta_f.abs() <= tol {
        ExtendedOrder::Infinity
    } else if real.beta_f > 0.0 {
        ExtendedOrder::BarInfinity
    } else {
        match elliptic_fraction(real.beta_f, max_order) {
            Some((_, 2)) => {
                return ScopeReport::reject(
                    ScopeVerdict::EllipticOutsideFamily,
                    "f is elliptic of order 2",
                )
            }
            Some((1, q)) => ExtendedOrder::Finite(q),
            Some((k, q)) => {
                return ScopeReport {
                    verdict: ScopeVerdict::NeedsPrimitiveReduction { k, n: q },
                    detail: format!("f is a rotation through 2pi*{k}/{q}"),
                    triple: None,
                }
            }
            None => {
                return ScopeReport::reject(
                    ScopeVerdict::EllipticOutsideFamily,
                    format!(
                        "beta(f) = {} has no rotation angle 2pi*k/q with q <= {max_order}",
                        real.beta_f
                    ),
                )
            }
        }
    };
    ScopeReport {
        verdict: ScopeVerdict::InScope,
        detail: format!("n = {n}"),
        triple: Some(RpTriple {
            beta_f: real.beta_f,
            beta_g: 0.0,
            gamma: real.gamma,
            n,
        }),
    }
}

/// Generators normalized so that `g = [[1,1],[0,1]]`, the fixed points of `f`
/// are `±z₀`, `tr f ≥ 0` and `f` has lower-left entry `i√(-γ)`.
pub fn synthesize_generators(t: &RpTriple) -> (Moebius, Moebius) {
    synthesize_raw(t.beta_f, t.gamma).expect("in-scope triples always synthesize")
}

/// As [`synthesize_generators`] for any `β(f) ≥ -4` and `γ < 0`, including
/// non-primitive elliptic `f`.
pub fn synthesize_raw(beta_f: f64, gamma: f64) -> Result<(Moebius, Moebius)> {
    if !beta_f.is_finite() || !gamma.is_finite() || beta_f < -4.0 || gamma >= 0.0 {
        return Err(Error::OutOfScope(if gamma >= 0.0 {
            ScopeVerdict::HasInvariantPlane
        } else {
            ScopeVerdict::PiLoxodromicGenerator
        }));
    }
    let half_trace = Complex::from((beta_f + 4.0).sqrt() / 2.0);
    let c = Complex::new(0.0, (-gamma).sqrt());
    // a² - bc = 1 with a = d
    let b = (half_trace * half_trace - 1.0) / c;
    let f = Moebius::new(half_trace, b, c, half_trace)?;
    let g = Moebius::translation(Complex::new(1.0, 0.0));
    Ok((f, g))
}

/// Replaces `(-4sin²(kπ/n), β(g), γ)` by `(-4sin²(π/n), β(g), (β̃/β)γ)`,
/// which parametrizes the same group. Primitive, parabolic and hyperbolic
/// triples are returned unchanged.
pub fn primitive_reduction(t: &Triple<f64>, tol: f64, max_order: u32) -> Result<RpTriple> {
    let scope = check_scope(&t.to_complex(), tol, max_order);
    match scope.verdict {
        ScopeVerdict::InScope => Ok(scope.triple.expect("in scope")),
        ScopeVerdict::NeedsPrimitiveReduction { n, .. } => {
            let reduced_beta = beta_for_order(n);
            let reduced_gamma = reduced_beta / t.beta_f * t.gamma;
            Ok(RpTriple {
                beta_f: reduced_beta,
                beta_g: t.beta_g,
                gamma: reduced_gamma,
                n: ExtendedOrder::Finite(n),
            })
        }
        ScopeVerdict::EllipticOutsideFamily if t.beta_f > -4.0 && t.beta_f < 0.0 => {
            match elliptic_fraction(t.beta_f, max_order) {
                None => Err(Error::UnrecognizedEllipticAngle(t.beta_f)),
                Some(_) => Err(Error::OutOfScope(scope.verdict)),
            }
        }
        other => Err(Error::OutOfScope(other)),
    }
}
