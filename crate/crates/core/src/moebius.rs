//! PSL(2,C) arithmetic: composition, traces, fixed points, classification and
//! square roots of Möbius transformations.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Mul, Neg};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::order::{rational_approximation, RATIONAL_TOLERANCE};

pub type Complex = Complex64;

/// Tolerated `|ad - bc - 1|` for a normalized representative.
pub const DET_TOLERANCE: f64 = 1e-12;

/// `|tr² - 4|` below this, relative to the squared entry scale, counts as
/// parabolic in fixed-point and root computations.
pub const PARABOLIC_TOLERANCE: f64 = 1e-10;

/// Relative threshold below which the lower-left entry counts as zero in
/// [`fixed_points`].
pub const ZERO_ENTRY_TOLERANCE: f64 = 1e-14;

const ONE: Complex = Complex::new(1.0, 0.0);
const ZERO: Complex = Complex::new(0.0, 0.0);

/// A point of `∂H³ = C ∪ {∞}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BoundaryPoint {
    Finite(Complex),
    Infinity,
}

impl BoundaryPoint {
    pub fn finite(self) -> Option<Complex> {
        match self {
            BoundaryPoint::Finite(z) => Some(z),
            BoundaryPoint::Infinity => None,
        }
    }
}

/// A point `(z, t)` of the upper half-space, `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacePoint {
    pub z: Complex,
    pub t: f64,
}

impl SpacePoint {
    pub fn new(z: Complex, t: f64) -> Self {
        SpacePoint { z, t }
    }

    /// Hyperbolic distance for the metric `(|dz|² + dt²)/t²`.
    pub fn distance(&self, other: &SpacePoint) -> f64 {
        let num = (self.z - other.z).norm_sqr() + (self.t - other.t).powi(2);
        (1.0 + num / (2.0 * self.t * other.t)).acosh()
    }
}

/// An element of PSL(2,C): a 2×2 complex matrix with `ad - bc = 1`,
/// identified with its negative.
#[derive(Debug, Clone, Copy)]
pub struct Moebius {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub d: Complex,
}

impl Moebius {
    /// Builds the element from any nonsingular matrix by dividing through by
    /// a square root of the determinant.
    pub fn new(a: Complex, b: Complex, c: Complex, d: Complex) -> Result<Self> {
        let det = a * d - b * c;
        if !det.is_finite() || det.norm() == 0.0 {
            return Err(Error::SingularMatrix);
        }
        let s = det.sqrt();
        let m = Moebius {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        };
        if [m.a, m.b, m.c, m.d].iter().any(|x| !x.is_finite()) {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Wraps entries already known to have determinant one.
    pub(crate) fn from_normalized(a: Complex, b: Complex, c: Complex, d: Complex) -> Self {
        Moebius { a, b, c, d }
    }

    pub fn identity() -> Self {
        Moebius::from_normalized(ONE, ZERO, ZERO, ONE)
    }

    /// `z ↦ z + w`.
    pub fn translation(w: Complex) -> Self {
        Moebius::from_normalized(ONE, w, ZERO, ONE)
    }

    pub fn entries(&self) -> [Complex; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> Complex {
        self.a * self.d - self.b * self.c
    }

    pub fn trace(&self) -> Complex {
        self.a + self.d
    }

    /// `tr² - 4`; independent of the sign of the representative.
    pub fn beta(&self) -> Complex {
        beta(self)
    }

    pub fn inverse(&self) -> Self {
        Moebius::from_normalized(self.d, -self.b, -self.c, self.a)
    }

    /// Matrix product `self · other`, renormalized to determinant one.
    pub fn compose(&self, other: &Moebius) -> Self {
        let a = self.a * other.a + self.b * other.c;
        let b = self.a * other.b + self.b * other.d;
        let c = self.c * other.a + self.d * other.c;
        let d = self.c * other.b + self.d * other.d;
        let det = a * d - b * c;
        if (det - ONE).norm() <= f64::EPSILON {
            return Moebius::from_normalized(a, b, c, d);
        }
        let s = det.sqrt();
        Moebius::from_normalized(a / s, b / s, c / s, d / s)
    }

    /// Integer power; negative exponents use the inverse.
    pub fn pow(&self, n: i64) -> Self {
        let mut base = if n < 0 { self.inverse() } else { *self };
        let mut e = n.unsigned_abs();
        let mut acc = Moebius::identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    /// `u · self · u⁻¹`.
    pub fn conjugate_by(&self, u: &Moebius) -> Self {
        u.compose(self).compose(&u.inverse())
    }

    /// Entrywise complex conjugate.
    pub fn conj(&self) -> Self {
        Moebius::from_normalized(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries().iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    /// Max-entry distance between the PSL classes: `min(‖M - N‖, ‖M + N‖)`.
    pub fn distance(&self, other: &Moebius) -> f64 {
        let plus = (0..4)
            .map(|i| (self.entries()[i] - other.entries()[i]).norm())
            .fold(0.0, f64::max);
        let minus = (0..4)
            .map(|i| (self.entries()[i] + other.entries()[i]).norm())
            .fold(0.0, f64::max);
        plus.min(minus)
    }

    pub fn approx_eq(&self, other: &Moebius, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    /// Distance to `±I`.
    pub fn identity_deviation(&self) -> f64 {
        self.distance(&Moebius::identity())
    }

    pub fn is_identity(&self, tol: f64) -> bool {
        self.identity_deviation() <= tol
    }

    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        match p {
            BoundaryPoint::Infinity => {
                if self.c == ZERO {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite(self.a / self.c)
                }
            }
            BoundaryPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den == ZERO {
                    BoundaryPoint::Infinity
                } else {
                    BoundaryPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    /// Poincaré extension to the upper half-space.
    pub fn apply_space(&self, p: SpacePoint) -> SpacePoint {
        let (z, t) = (p.z, p.t);
        let czd = self.c * z + self.d;
        let den = czd.norm_sqr() + self.c.norm_sqr() * t * t;
        let z_new = ((self.a * z + self.b) * czd.conj() + self.a * self.c.conj() * t * t) / den;
        SpacePoint::new(z_new, t / den)
    }
}

impl PartialEq for Moebius {
    /// Exact equality of PSL classes (`M ≡ -M`).
    fn eq(&self, other: &Self) -> bool {
        self.entries() == other.entries() || self.entries() == (-*other).entries()
    }
}

impl Neg for Moebius {
    type Output = Moebius;

    fn neg(self) -> Moebius {
        Moebius::from_normalized(-self.a, -self.b, -self.c, -self.d)
    }
}

impl Mul for Moebius {
    type Output = Moebius;

    fn mul(self, rhs: Moebius) -> Moebius {
        self.compose(&rhs)
    }
}

impl<'a> Mul<&'a Moebius> for &'a Moebius {
    type Output = Moebius;

    fn mul(self, rhs: &Moebius) -> Moebius {
        self.compose(rhs)
    }
}

impl fmt::Display for Moebius {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// An orientation-reversing isometry `z ↦ M(z̄)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiMoebius {
    pub matrix: Moebius,
}

impl AntiMoebius {
    pub fn new(matrix: Moebius) -> Self {
        AntiMoebius { matrix }
    }

    pub fn apply(&self, p: BoundaryPoint) -> BoundaryPoint {
        let p = match p {
            BoundaryPoint::Finite(z) => BoundaryPoint::Finite(z.conj()),
            inf => inf,
        };
        self.matrix.apply(p)
    }

    pub fn apply_space(&self, p: SpacePoint) -> SpacePoint {
        self.matrix.apply_space(SpacePoint::new(p.z.conj(), p.t))
    }

    /// `self ∘ other`, orientation-preserving.
    pub fn then_anti(&self, other: &AntiMoebius) -> Moebius {
        self.matrix.compose(&other.matrix.conj())
    }

    /// `self ∘ m`.
    pub fn after(&self, m: &Moebius) -> AntiMoebius {
        AntiMoebius::new(self.matrix.compose(&m.conj()))
    }

    /// `m ∘ self`.
    pub fn before(&self, m: &Moebius) -> AntiMoebius {
        AntiMoebius::new(m.compose(&self.matrix))
    }
}

impl Mul for AntiMoebius {
    type Output = Moebius;

    fn mul(self, rhs: AntiMoebius) -> Moebius {
        self.then_anti(&rhs)
    }
}

/// `β(f) = tr²f - 4`.
pub fn beta(f: &Moebius) -> Complex {
    let t = f.trace();
    t * t - 4.0
}

/// The commutator `[f,g] = f g f⁻¹ g⁻¹`.
pub fn commutator(f: &Moebius, g: &Moebius) -> Moebius {
    f.compose(g).compose(&f.inverse()).compose(&g.inverse())
}

/// `γ(f,g) = tr[f,g] - 2`.
pub fn gamma(f: &Moebius, g: &Moebius) -> Complex {
    commutator(f, g).trace() - 2.0
}

/// Element classes by the trace parameter `β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ElementClass {
    Identity,
    /// Rotation through `2π/order`.
    EllipticPrimitive { order: u32 },
    /// Rotation through `2πk/q`, `gcd(q,k) = 1`, `1 < k < q/2`.
    EllipticNonPrimitive { q: u32, k: u32 },
    /// Rotation through `angle` with no recognized rational multiple of `2π`.
    EllipticIrrational { angle: f64 },
    Parabolic,
    Hyperbolic { translation_length: f64 },
    PiLoxodromic,
    StrictlyLoxodromic,
}

impl ElementClass {
    /// Rotation angle in `(0, π]` for elliptic classes.
    pub fn rotation_angle(&self) -> Option<f64> {
        match *self {
            ElementClass::EllipticPrimitive { order } => Some(2.0 * PI / f64::from(order)),
            ElementClass::EllipticNonPrimitive { q, k } => {
                Some(2.0 * PI * f64::from(k) / f64::from(q))
            }
            ElementClass::EllipticIrrational { angle } => Some(angle),
            _ => None,
        }
    }

    pub fn is_elliptic(&self) -> bool {
        self.rotation_angle().is_some()
    }

    /// Short lower-case name.
    pub fn name(&self) -> &'static str {
        match self {
            ElementClass::Identity => "identity",
            ElementClass::EllipticPrimitive { .. } => "elliptic",
            ElementClass::EllipticNonPrimitive { .. } => "elliptic-non-primitive",
            ElementClass::EllipticIrrational { .. } => "elliptic-irrational",
            ElementClass::Parabolic => "parabolic",
            ElementClass::Hyperbolic { .. } => "hyperbolic",
            ElementClass::PiLoxodromic => "pi-loxodromic",
            ElementClass::StrictlyLoxodromic => "strictly-loxodromic",
        }
    }
}

impl fmt::Display for ElementClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElementClass::EllipticPrimitive { order } => write!(f, "elliptic of order {order}"),
            ElementClass::EllipticNonPrimitive { q, k } => {
                write!(f, "non-primitive elliptic (rotation 2pi*{k}/{q})")
            }
            ElementClass::EllipticIrrational { angle } => {
                write!(f, "elliptic with irrational rotation angle {angle}")
            }
            ElementClass::Hyperbolic { translation_length } => {
                write!(f, "hyperbolic (translation length {translation_length})")
            }
            other => f.write_str(other.name()),
        }
    }
}

/// Rotation angle `θ ∈ [0, π]` of an elliptic element from `β = -4 sin²(θ/2)`.
pub fn rotation_angle_from_beta(beta: f64) -> f64 {
    let s = (-beta).max(0.0).sqrt();
    let c = (beta + 4.0).max(0.0).sqrt();
    2.0 * s.atan2(c)
}

/// Classifies `f` by `β(f)`: imaginary part beyond `tol·(1+|β|)` gives
/// `StrictlyLoxodromic`; otherwise the real ranges `(0,∞)`, `{0}`, `[-4,0)`,
/// `(-∞,-4)`. Elliptic angles are matched against `2πk/q`, `q ≤ max_order`.
pub fn classify(f: &Moebius, tol: f64, max_order: u32) -> ElementClass {
    if f.is_identity(tol) {
        return ElementClass::Identity;
    }
    let b = beta(f);
    if b.im.abs() > tol * (1.0 + b.norm()) {
        return ElementClass::StrictlyLoxodromic;
    }
    let b = b.re;
    if b.abs() <= tol {
        return ElementClass::Parabolic;
    }
    if b > 0.0 {
        let half_trace = f.trace().re.abs() / 2.0;
        return ElementClass::Hyperbolic {
            translation_length: 2.0 * half_trace.acosh(),
        };
    }
    if b < -4.0 - tol {
        return ElementClass::PiLoxodromic;
    }
    let angle = rotation_angle_from_beta(b);
    match rational_approximation(angle / (2.0 * PI), max_order, RATIONAL_TOLERANCE) {
        Some((1, q)) => ElementClass::EllipticPrimitive { order: q },
        Some((k, q)) if k > 1 => ElementClass::EllipticNonPrimitive { q, k },
        _ => ElementClass::EllipticIrrational { angle },
    }
}

/// Fixed points on `∂H³`: the roots of `cz² + (d - a)z - b = 0`, with `∞`
/// when `c` vanishes relative to the largest entry.
pub fn fixed_points(f: &Moebius) -> Result<Vec<BoundaryPoint>> {
    let scale = f.max_abs_entry();
    if f.is_identity(DET_TOLERANCE * scale.max(1.0)) {
        return Err(Error::IdentityElement);
    }
    let (a, b, c, d) = (f.a, f.b, f.c, f.d);
    if c.norm() <= ZERO_ENTRY_TOLERANCE * scale {
        if (d - a).norm() <= DET_TOLERANCE * scale {
            return Ok(vec![BoundaryPoint::Infinity]);
        }
        return Ok(vec![BoundaryPoint::Infinity, BoundaryPoint::Finite(b / (d - a))]);
    }
    // (a - d)² + 4bc = tr² - 4
    let disc_sq = (a - d) * (a - d) + 4.0 * b * c;
    if disc_sq.norm() <= PARABOLIC_TOLERANCE * scale * scale {
        return Ok(vec![BoundaryPoint::Finite((a - d) / (2.0 * c))]);
    }
    let disc = disc_sq.sqrt();
    Ok(vec![
        BoundaryPoint::Finite((a - d + disc) / (2.0 * c)),
        BoundaryPoint::Finite((a - d - disc) / (2.0 * c)),
    ])
}

/// Square roots of `m` in PSL(2,C): one for parabolic `m`, two otherwise.
///
/// For each representative `r ∈ {m, -m}` with `tr r ≠ -2` the root is
/// `(r + I)/s`, `s² = tr r + 2`. A parabolic `m` has a single representative
/// with trace `+2`.
pub fn sqrt_in_psl(m: &Moebius) -> Result<Vec<Moebius>> {
    let scale = m.max_abs_entry().max(1.0);
    if m.is_identity(DET_TOLERANCE * scale) {
        return Err(Error::IdentityElement);
    }
    let parabolic = beta(m).norm() <= PARABOLIC_TOLERANCE * scale * scale;
    let mut reps = vec![*m, -*m];
    if parabolic {
        reps.retain(|r| r.trace().re > 0.0);
    }
    let roots = reps
        .iter()
        .map(|r| {
            let s = (r.trace() + 2.0).sqrt();
            Moebius::from_normalized((r.a + ONE) / s, r.b / s, r.c / s, (r.d + ONE) / s)
        })
        .collect();
    Ok(roots)
}
