//! Extended orders and rational detection of rotation angles.
//!
//! Orders of elements and dihedral-angle parameters live in
//! `{2, 3, ...} ∪ {∞, ∞̄}`: `∞` marks a parabolic relation (kept in the
//! Kleinian presentation) and `∞̄` a hyperbolic one (dropped entirely).

use std::cmp::Ordering;
use std::fmt;

/// Acceptance tolerance for `|x - k/q|` when recognizing a rotation angle
/// `2πx` as rational.
pub const RATIONAL_TOLERANCE: f64 = 1e-9;

/// Default bound on the denominator `q` of recognized angles.
pub const DEFAULT_MAX_ORDER: u32 = 200;

/// An order in `{2, 3, ...} ∪ {∞, ∞̄}`, ordered as `x < ∞ < ∞̄`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtendedOrder {
    Finite(u32),
    Infinity,
    BarInfinity,
}

impl ExtendedOrder {
    /// `1/x`, with `1/∞ = 1/∞̄ = 0`.
    pub fn reciprocal(self) -> f64 {
        match self {
            ExtendedOrder::Finite(n) => 1.0 / f64::from(n),
            _ => 0.0,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedOrder::Finite(_))
    }

    /// Machine token: the integer, `inf` or `binf`.
    pub fn token(self) -> String {
        self.to_string()
    }
}

impl PartialOrd for ExtendedOrder {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtendedOrder {
    fn cmp(&self, other: &Self) -> Ordering {
        fn rank(o: &ExtendedOrder) -> (u8, u32) {
            match *o {
                ExtendedOrder::Finite(n) => (0, n),
                ExtendedOrder::Infinity => (1, 0),
                ExtendedOrder::BarInfinity => (2, 0),
            }
        }
        rank(self).cmp(&rank(other))
    }
}

impl fmt::Display for ExtendedOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedOrder::Finite(n) => write!(f, "{n}"),
            ExtendedOrder::Infinity => f.write_str("inf"),
            ExtendedOrder::BarInfinity => f.write_str("binf"),
        }
    }
}

/// The dihedral parameter `p` attached to an angle `π/p`, before deciding
/// whether it is admissible.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum POrder {
    /// `p` is an integer.
    Integer(u32),
    /// `p = q/k` in lowest terms with `k ≥ 2`.
    Rational { q: u32, k: u32 },
    /// No rational value within the denominator bound; carries the real `p`.
    Irrational(f64),
    /// Parallel planes (parabolic `h`).
    Infinity,
    /// Disjoint planes (hyperbolic `h`).
    BarInfinity,
}

impl POrder {
    /// The integer or infinite order, when `p` is one.
    pub fn extended(self) -> Option<ExtendedOrder> {
        match self {
            POrder::Integer(n) => Some(ExtendedOrder::Finite(n)),
            POrder::Infinity => Some(ExtendedOrder::Infinity),
            POrder::BarInfinity => Some(ExtendedOrder::BarInfinity),
            _ => None,
        }
    }

    /// Real value of `p`; infinite for `∞` and `∞̄`.
    pub fn value(self) -> f64 {
        match self {
            POrder::Integer(n) => f64::from(n),
            POrder::Rational { q, k } => f64::from(q) / f64::from(k),
            POrder::Irrational(p) => p,
            POrder::Infinity | POrder::BarInfinity => f64::INFINITY,
        }
    }

    /// Structural agreement; irrational values agree to a relative `1e-6`.
    pub fn agrees_with(self, other: POrder) -> bool {
        match (self, other) {
            (POrder::Irrational(a), POrder::Irrational(b)) => {
                (a - b).abs() <= 1e-6 * a.abs().max(b.abs())
            }
            (a, b) => a == b,
        }
    }
}

impl From<ExtendedOrder> for POrder {
    fn from(o: ExtendedOrder) -> Self {
        match o {
            ExtendedOrder::Finite(n) => POrder::Integer(n),
            ExtendedOrder::Infinity => POrder::Infinity,
            ExtendedOrder::BarInfinity => POrder::BarInfinity,
        }
    }
}

impl fmt::Display for POrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            POrder::Integer(n) => write!(f, "{n}"),
            POrder::Rational { q, k } => write!(f, "{q}/{k}"),
            POrder::Irrational(p) => write!(f, "{p}"),
            POrder::Infinity => f.write_str("inf"),
            POrder::BarInfinity => f.write_str("binf"),
        }
    }
}

/// Finds `k/q` (lowest terms, `q ≤ max_den`) with `|x - k/q| ≤ tol` by
/// walking the continued-fraction convergents of `x ≥ 0`.
///
/// Any fraction closer than `1/(2q²)` is a convergent, so for the tolerances
/// used here checking convergents is exhaustive.
pub fn rational_approximation(x: f64, max_den: u32, tol: f64) -> Option<(u32, u32)> {
    if !x.is_finite() || x < 0.0 {
        return None;
    }
    let max_den = u64::from(max_den);
    // (h, k) is the latest convergent, (h_prev, k_prev) the one before;
    // the recurrence starts from 1/0 and 0/1.
    let (mut h_prev, mut h) = (0u64, 1u64);
    let (mut k_prev, mut k) = (1u64, 0u64);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a > 1e12 {
            break;
        }
        let a_int = a as u64;
        let h_next = a_int.checked_mul(h)?.checked_add(h_prev)?;
        let k_next = a_int.checked_mul(k)?.checked_add(k_prev)?;
        if k_next > max_den {
            break;
        }
        (h_prev, h) = (h, h_next);
        (k_prev, k) = (k, k_next);
        if (x - h as f64 / k as f64).abs() <= tol {
            return Some((h as u32, k as u32));
        }
        let frac = r - a;
        if frac <= f64::EPSILON {
            break;
        }
        r = 1.0 / frac;
    }
    None
}

pub fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}
