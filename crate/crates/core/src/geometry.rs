//! Planes of the upper half-space, reflections in them, and the polyhedron
//! `T` bounded by `η`, `ζ`, `σ`, `τ` for a normalized pair `(f, g)`.
//!
//! The pair factors as `f = R_σ R_η`, `g = R_τ R_ζ`, and the commutator root
//! as `h = R_σ R_τ`.

use std::f64::consts::FRAC_PI_2;

use crate::discreteness::p_from_gamma;
use crate::error::{Error, Result};
use crate::moebius::{beta, gamma, AntiMoebius, Complex, Moebius};
use crate::order::{ExtendedOrder, POrder, DEFAULT_MAX_ORDER};
use crate::rp::{RpTriple, PARAM_TOLERANCE};

/// Tolerance for matrix identities and plane incidence.
pub const GEOMETRY_TOLERANCE: f64 = 1e-10;

/// `|I| = 1` within this band of the inversive product means tangency.
pub const TANGENCY_TOLERANCE: f64 = 1e-9;

/// A hyperbolic plane, given by its boundary line or circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Plane {
    /// Vertical plane over the line `point + ℝ·direction`; `|direction| = 1`.
    Vertical { point: Complex, direction: Complex },
    /// Hemisphere over the circle `|z - center| = radius`.
    Hemisphere { center: Complex, radius: f64 },
}

impl Plane {
    /// Vertical plane, canonicalized: the direction has argument in
    /// `[0, π)` and the point is the foot of the perpendicular from 0.
    pub fn vertical(point: Complex, direction: Complex) -> Result<Plane> {
        let len = direction.norm();
        if !len.is_finite() || len <= 0.0 || !point.re.is_finite() || !point.im.is_finite() {
            return Err(Error::DomainError(len));
        }
        let mut u = direction / len;
        if u.im < 0.0 || (u.im == 0.0 && u.re < 0.0) {
            u = -u;
        }
        let along = (u.conj() * point).re;
        Ok(Plane::Vertical {
            point: point - u * along,
            direction: u,
        })
    }

    pub fn hemisphere(center: Complex, radius: f64) -> Result<Plane> {
        if !radius.is_finite() || radius <= 0.0 {
            return Err(Error::DomainError(radius));
        }
        Ok(Plane::Hemisphere { center, radius })
    }

    /// Does the closure of the plane contain the boundary point `z`?
    pub fn contains_boundary_point(&self, z: Complex, tol: f64) -> bool {
        match *self {
            Plane::Vertical { point, direction } => (direction.conj() * (z - point)).im.abs() <= tol,
            Plane::Hemisphere { center, radius } => ((z - center).norm() - radius).abs() <= tol,
        }
    }

    pub fn approx_eq(&self, other: &Plane, tol: f64) -> bool {
        match (*self, *other) {
            (
                Plane::Vertical { point: p1, direction: u1 },
                Plane::Vertical { point: p2, direction: u2 },
            ) => {
                (u1.conj() * u2).im.abs() <= tol && (u1.conj() * (p2 - p1)).im.abs() <= tol
            }
            (
                Plane::Hemisphere { center: c1, radius: r1 },
                Plane::Hemisphere { center: c2, radius: r2 },
            ) => (c1 - c2).norm() <= tol && (r1 - r2).abs() <= tol,
            _ => false,
        }
    }
}

/// How two planes sit relative to each other.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PlaneRelation {
    /// Dihedral angle in `(0, π/2]`.
    Intersect(f64),
    /// Tangent at a boundary point.
    Parallel,
    /// Hyperbolic distance between the planes.
    Disjoint(f64),
}

impl PlaneRelation {
    pub fn angle(&self) -> Option<f64> {
        match *self {
            PlaneRelation::Intersect(a) => Some(a),
            _ => None,
        }
    }

    pub fn distance(&self) -> Option<f64> {
        match *self {
            PlaneRelation::Disjoint(d) => Some(d),
            _ => None,
        }
    }

    pub fn is_orthogonal(&self, tol: f64) -> bool {
        self.angle().is_some_and(|a| (a - FRAC_PI_2).abs() <= tol)
    }

    pub fn name(&self) -> &'static str {
        match self {
            PlaneRelation::Intersect(_) => "intersect",
            PlaneRelation::Parallel => "parallel",
            PlaneRelation::Disjoint(_) => "disjoint",
        }
    }
}

/// The reflection `R_κ` in a plane.
pub fn reflection(plane: &Plane) -> AntiMoebius {
    let one = Complex::new(1.0, 0.0);
    let zero = Complex::new(0.0, 0.0);
    let m = match *plane {
        // z ↦ u²(z̄ - p̄) + p
        Plane::Vertical { point, direction } => {
            let u2 = direction * direction;
            Moebius::new(u2, point - u2 * point.conj(), zero, one)
        }
        // z ↦ c + r²/(z̄ - c̄)
        Plane::Hemisphere { center, radius } => Moebius::new(
            center,
            Complex::from(radius * radius) - center.norm_sqr(),
            one,
            -center.conj(),
        ),
    };
    AntiMoebius::new(m.expect("reflection matrices are nonsingular"))
}

/// The plane fixed pointwise by an anti-Möbius involution.
pub fn fixed_plane_of_anti(r: &AntiMoebius) -> Result<Plane> {
    let m = r.matrix;
    let scale = m.max_abs_entry();
    let not_reflection = Error::NotNormalized("map is not a reflection");
    if m.c.norm() <= GEOMETRY_TOLERANCE * scale {
        // z ↦ u²z̄ + k; the line passes through k/2
        let u2 = m.a / m.d;
        if (u2.norm() - 1.0).abs() > GEOMETRY_TOLERANCE {
            return Err(not_reflection);
        }
        let k = m.b / m.d;
        return Plane::vertical(k / 2.0, u2.sqrt());
    }
    let center = m.a / m.c;
    let r2 = m.b / m.c + center.norm_sqr();
    if r2.im.abs() > GEOMETRY_TOLERANCE * r2.norm().max(1.0) || r2.re <= 0.0 {
        return Err(not_reflection);
    }
    Plane::hemisphere(center, r2.re.sqrt())
}

/// Relation between two planes via the inversive product of their boundary
/// circles, taking the acute dihedral angle.
pub fn plane_relation(p1: &Plane, p2: &Plane) -> Result<PlaneRelation> {
    if p1.approx_eq(p2, GEOMETRY_TOLERANCE) {
        return Err(Error::CoincidentPlanes);
    }
    let product = match (*p1, *p2) {
        (
            Plane::Vertical { direction: u1, .. },
            Plane::Vertical { direction: u2, .. },
        ) => {
            let w = u1.conj() * u2;
            if w.im.abs() <= TANGENCY_TOLERANCE {
                // parallel lines meet at ∞
                return Ok(PlaneRelation::Parallel);
            }
            w.re.abs()
        }
        (Plane::Vertical { point, direction }, Plane::Hemisphere { center, radius })
        | (Plane::Hemisphere { center, radius }, Plane::Vertical { point, direction }) => {
            (direction.conj() * (center - point)).im.abs() / radius
        }
        (
            Plane::Hemisphere { center: c1, radius: r1 },
            Plane::Hemisphere { center: c2, radius: r2 },
        ) => ((r1 * r1 + r2 * r2 - (c1 - c2).norm_sqr()) / (2.0 * r1 * r2)).abs(),
    };
    Ok(relation_from_product(product))
}

fn relation_from_product(i: f64) -> PlaneRelation {
    if (i - 1.0).abs() <= TANGENCY_TOLERANCE {
        PlaneRelation::Parallel
    } else if i < 1.0 {
        PlaneRelation::Intersect(i.acos())
    } else {
        PlaneRelation::Disjoint(i.acosh())
    }
}

/// The four planes bounding `T`, with the data fixing `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneSet {
    pub eta: Plane,
    pub zeta: Plane,
    pub sigma: Plane,
    pub tau: Plane,
    /// `σ` is centered at `i·y_σ`.
    pub y_sigma: f64,
    pub sigma_radius: f64,
    /// `z₀² = β(f)/(4γ)`; the fixed points of `f` are `±z₀`.
    pub z0_squared: f64,
}

impl PlaneSet {
    pub fn as_array(&self) -> [Plane; 4] {
        [self.eta, self.zeta, self.sigma, self.tau]
    }
}

/// Builds `η`, `ζ`, `σ`, `τ` for a pair in the normalized form produced by
/// [`crate::rp::synthesize_generators`].
pub fn build_planes(f: &Moebius, g: &Moebius) -> Result<PlaneSet> {
    let unit = Moebius::translation(Complex::new(1.0, 0.0));
    if !g.approx_eq(&unit, GEOMETRY_TOLERANCE) {
        return Err(Error::NotNormalized("g is not z + 1"));
    }
    if (f.a - f.d).norm() > GEOMETRY_TOLERANCE * f.max_abs_entry() {
        return Err(Error::NotNormalized("diagonal entries of f differ"));
    }
    let zero = Complex::new(0.0, 0.0);
    let eta = Plane::vertical(zero, Complex::new(1.0, 0.0))?;
    let zeta = Plane::vertical(zero, Complex::new(0.0, 1.0))?;
    let tau = Plane::vertical(Complex::new(0.5, 0.0), Complex::new(0.0, 1.0))?;
    // R_σ = f ∘ R_η, i.e. z ↦ f(z̄)
    let sigma = fixed_plane_of_anti(&AntiMoebius::new(*f))
        .map_err(|_| Error::NotNormalized("f is not a product of reflections in eta and a plane"))?;
    let Plane::Hemisphere { center, radius } = sigma else {
        return Err(Error::NotNormalized("sigma is not a hemisphere"));
    };
    if center.re.abs() > GEOMETRY_TOLERANCE * center.norm().max(1.0) {
        return Err(Error::NotNormalized("sigma is not centered on the imaginary axis"));
    }
    Ok(PlaneSet {
        eta,
        zeta,
        sigma: Plane::hemisphere(Complex::new(0.0, center.im), radius)?,
        tau,
        y_sigma: center.im,
        sigma_radius: radius,
        z0_squared: (beta(f) / (4.0 * gamma(f, g))).re,
    })
}

/// Half-turns `e = R_η R_ζ`, `e_f = R_σ R_ζ`, `e_g = R_τ R_η`, so that
/// `f = e_f e` and `g = e_g e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfTurns {
    pub e: Moebius,
    pub e_f: Moebius,
    pub e_g: Moebius,
}

pub fn half_turns(planes: &PlaneSet) -> HalfTurns {
    let r = |p: &Plane| reflection(p);
    HalfTurns {
        e: r(&planes.eta) * r(&planes.zeta),
        e_f: r(&planes.sigma) * r(&planes.zeta),
        e_g: r(&planes.tau) * r(&planes.eta),
    }
}

/// `h = R_σ R_τ`.
pub fn h_from_planes(planes: &PlaneSet) -> Moebius {
    reflection(&planes.sigma) * reflection(&planes.tau)
}

/// Index of a bounding plane of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    Eta = 0,
    Zeta = 1,
    Sigma = 2,
    Tau = 3,
}

impl Face {
    pub const ALL: [Face; 4] = [Face::Eta, Face::Zeta, Face::Sigma, Face::Tau];

    pub fn name(self) -> &'static str {
        match self {
            Face::Eta => "eta",
            Face::Zeta => "zeta",
            Face::Sigma => "sigma",
            Face::Tau => "tau",
        }
    }
}

/// The infinite-volume polyhedron bounded by `η`, `ζ`, `σ`, `τ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolyhedronT {
    pub planes: PlaneSet,
    relations: [[Option<PlaneRelation>; 4]; 4],
    pub n: ExtendedOrder,
    pub p: POrder,
    pub kappa1: Plane,
    pub kappa2: Option<Plane>,
}

impl PolyhedronT {
    pub fn relation(&self, a: Face, b: Face) -> Option<PlaneRelation> {
        self.relations[a as usize][b as usize]
    }

    /// The six unordered pairs with their relations.
    pub fn relation_list(&self) -> Vec<(Face, Face, PlaneRelation)> {
        let mut out = Vec::with_capacity(6);
        for (i, &a) in Face::ALL.iter().enumerate() {
            for &b in &Face::ALL[i + 1..] {
                if let Some(rel) = self.relation(a, b) {
                    out.push((a, b, rel));
                }
            }
        }
        out
    }
}

/// Builds `T` for a normalized in-scope pair.
pub fn build_polyhedron(f: &Moebius, g: &Moebius) -> Result<PolyhedronT> {
    let planes = build_planes(f, g)?;
    let faces = planes.as_array();
    let mut relations = [[None; 4]; 4];
    for i in 0..4 {
        for j in (i + 1)..4 {
            let rel = plane_relation(&faces[i], &faces[j])?;
            relations[i][j] = Some(rel);
            relations[j][i] = Some(rel);
        }
    }
    let triple = RpTriple::new(beta(f).re, gamma(f, g).re, PARAM_TOLERANCE, DEFAULT_MAX_ORDER)?;
    let p = p_from_gamma(triple.gamma, PARAM_TOLERANCE, DEFAULT_MAX_ORDER)?;
    Ok(PolyhedronT {
        kappa1: kappa1(&planes)?,
        kappa2: kappa2(&planes),
        planes,
        relations,
        n: triple.n,
        p,
    })
}

/// The vertical plane `Im z = y_σ`, orthogonal to `ζ`, `σ` and `τ`.
pub fn kappa1(planes: &PlaneSet) -> Result<Plane> {
    Plane::vertical(Complex::new(0.0, planes.y_sigma), Complex::new(1.0, 0.0))
}

/// The hemisphere centered at `1/2` orthogonal to `η`, `σ` and `τ`, with
/// radius² `1/4 - z₀²`. Absent when `η`, `σ`, `τ` share a point of the
/// closed half-space.
pub fn kappa2(planes: &PlaneSet) -> Option<Plane> {
    let rho2 = 0.25 - planes.z0_squared;
    (rho2 > GEOMETRY_TOLERANCE)
        .then(|| Plane::hemisphere(Complex::new(0.5, 0.0), rho2.sqrt()).ok())
        .flatten()
}

/// Angles of the triangle cut from `κ₁` by `ζ`, `σ`, `τ`, at the vertices
/// `ζ∩τ` (at infinity), `ζ∩σ` and `σ∩τ`. Computed inside `κ₁` with
/// coordinates `(x, t) = (Re z, t)`, where `ζ`, `τ` are the lines `x = 0`,
/// `x = 1/2` and `σ` the semicircle of radius `r` about `x = 0`. `None` when
/// `σ` misses or only touches `τ`.
pub fn kappa1_triangle_angles(planes: &PlaneSet) -> Option<[f64; 3]> {
    let r = planes.sigma_radius;
    let t2 = r * r - 0.25;
    if t2 <= GEOMETRY_TOLERANCE {
        return None;
    }
    // normals: horizontal for the vertical lines, radial for σ
    let horizontal = (1.0, 0.0);
    let at_zeta_sigma = acute_angle(horizontal, (0.0, r));
    let at_sigma_tau = acute_angle(horizontal, (0.5, t2.sqrt()));
    Some([0.0, at_zeta_sigma, at_sigma_tau])
}

fn acute_angle(n1: (f64, f64), n2: (f64, f64)) -> f64 {
    let dot = (n1.0 * n2.0 + n1.1 * n2.1).abs();
    let norms = n1.0.hypot(n1.1) * n2.0.hypot(n2.1);
    (dot / norms).min(1.0).acos()
}
