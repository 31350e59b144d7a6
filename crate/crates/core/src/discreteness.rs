//! The discreteness decision for `⟨f, g⟩` with parabolic `g`.
//!
//! For an in-scope triple the group is discrete exactly when `γ ≤ -4` or
//! `γ = -4cos²(π/p)` for an integer `p ≥ 3`. The certificate is the element
//! `h` with `h² = [f,g]` and `(hg)² = 1`: it is hyperbolic, parabolic or
//! primitive elliptic of order `p` in the discrete cases.

use std::f64::consts::PI;
use std::fmt;

use crate::error::{Error, Result};
use crate::moebius::{
    beta, classify, commutator, fixed_points, gamma, sqrt_in_psl, BoundaryPoint, Complex,
    ElementClass, Moebius,
};
use crate::order::{rational_approximation, ExtendedOrder, POrder, DEFAULT_MAX_ORDER, RATIONAL_TOLERANCE};
use crate::rp::{check_scope, params, primitive_reduction, RpTriple, ScopeVerdict, Triple, PARAM_TOLERANCE};
use crate::word::{Letter, Word};

/// Relative window `|p - round(p)| ≤ P_INTEGER_WINDOW·p` for accepting an
/// integer dihedral parameter.
pub const P_INTEGER_WINDOW: f64 = 1e-7;

/// Largest tolerated `‖(hg)² ∓ I‖` for the selected commutator root.
pub const ROOT_RELATION_TOLERANCE: f64 = 1e-8;

/// Tolerances and bounds shared by the decision procedure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Config {
    tol: f64,
    max_order: u32,
    witness_depth: usize,
}

impl Config {
    /// Validates that the parabolic window around `γ = -4` and the integer
    /// windows around `-4cos²(π/p)`, `3 ≤ p ≤ max_order`, are pairwise
    /// disjoint.
    pub fn new(tol: f64, max_order: u32) -> Result<Self> {
        if !(tol > 0.0 && tol < 1e-3) {
            return Err(Error::InvalidConfig(format!("tolerance {tol} not in (0, 1e-3)")));
        }
        if max_order < 3 {
            return Err(Error::InvalidConfig(format!("max order {max_order} < 3")));
        }
        let gamma_at = |p: f64| -4.0 * (PI / p).cos().powi(2);
        let parabolic_top = -4.0 + 4.0 * tol;
        let mut previous_top: Option<f64> = None;
        for p in 3..=max_order {
            let p = f64::from(p);
            let low = gamma_at(p * (1.0 + P_INTEGER_WINDOW));
            let high = gamma_at(p * (1.0 - P_INTEGER_WINDOW));
            if low <= parabolic_top {
                return Err(Error::InvalidConfig(format!(
                    "integer window for p = {p} meets the parabolic window"
                )));
            }
            if let Some(prev_low) = previous_top {
                if high >= prev_low {
                    return Err(Error::InvalidConfig(format!(
                        "integer windows for p = {} and p = {p} overlap",
                        p - 1.0
                    )));
                }
            }
            previous_top = Some(low);
        }
        Ok(Config {
            tol,
            max_order,
            witness_depth: 0,
        })
    }

    /// Depth of the word search run by [`decide_from_generators`] on
    /// non-discrete verdicts; `0` disables it.
    pub fn with_witness_depth(mut self, depth: usize) -> Self {
        self.witness_depth = depth;
        self
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn max_order(&self) -> u32 {
        self.max_order
    }

    pub fn witness_depth(&self) -> usize {
        self.witness_depth
    }
}

impl Default for Config {
    fn default() -> Self {
        Config::new(PARAM_TOLERANCE, DEFAULT_MAX_ORDER).expect("default windows are disjoint")
    }
}

/// `p` from a dihedral angle `π/p ∈ (0, π/2]`.
pub fn p_from_dihedral_angle(angle: f64, max_p: u32) -> POrder {
    let p_real = PI / angle;
    let rounded = p_real.round();
    if rounded >= 3.0
        && rounded <= f64::from(max_p)
        && (p_real - rounded).abs() <= P_INTEGER_WINDOW * p_real
    {
        return POrder::Integer(rounded as u32);
    }
    match rational_approximation(angle / PI, max_p, RATIONAL_TOLERANCE) {
        Some((1, q)) if q >= 3 => POrder::Integer(q),
        Some((k, q)) if k >= 2 => POrder::Rational { q, k },
        _ => POrder::Irrational(p_real),
    }
}

/// `p` from `γ < 0`: `∞̄` below `-4`, `∞` at `-4`, otherwise the solution
/// of `cos²(π/p) = -γ/4`.
pub fn p_from_gamma(gamma: f64, tol: f64, max_p: u32) -> Result<POrder> {
    if gamma.is_nan() || gamma >= 0.0 {
        return Err(Error::DomainError(gamma));
    }
    if (gamma + 4.0).abs() <= 4.0 * tol {
        return Ok(POrder::Infinity);
    }
    if gamma < -4.0 {
        return Ok(POrder::BarInfinity);
    }
    // arccos(√(-γ)/2), computed without cancellation near γ = -4
    let angle = (4.0 + gamma).sqrt().atan2((-gamma).sqrt());
    Ok(p_from_dihedral_angle(angle, max_p))
}

/// Half the translation length of a hyperbolic `h` for `γ < -4`:
/// `γ = -2cosh(2d) - 2`.
pub fn translation_half_length(gamma: f64) -> f64 {
    ((-gamma - 2.0) / 2.0).acosh() / 2.0
}

/// The class `h` must have for a given `p`.
pub fn class_for_p(p: POrder, gamma: f64) -> ElementClass {
    match p {
        POrder::BarInfinity => ElementClass::Hyperbolic {
            translation_length: 2.0 * translation_half_length(gamma),
        },
        POrder::Infinity => ElementClass::Parabolic,
        POrder::Integer(order) => ElementClass::EllipticPrimitive { order },
        POrder::Rational { q, k } => ElementClass::EllipticNonPrimitive { q, k },
        POrder::Irrational(p) => ElementClass::EllipticIrrational { angle: 2.0 * PI / p },
    }
}

/// `p` read off the class of `h` (rotation `2π/p`).
pub fn p_from_class(class: &ElementClass) -> Option<POrder> {
    match *class {
        ElementClass::Parabolic => Some(POrder::Infinity),
        ElementClass::Hyperbolic { .. } => Some(POrder::BarInfinity),
        ElementClass::EllipticPrimitive { order } => Some(POrder::Integer(order)),
        ElementClass::EllipticNonPrimitive { q, k } => Some(POrder::Rational { q, k }),
        ElementClass::EllipticIrrational { angle } => Some(POrder::Irrational(2.0 * PI / angle)),
        _ => None,
    }
}

/// The square root `h` of `[f,g]` singled out by `(hg)² = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutatorRoot {
    pub h: Moebius,
    /// The other root `h̄`, absent when `[f,g]` is parabolic.
    pub other_root: Option<Moebius>,
    pub h_class: ElementClass,
    pub p: Option<POrder>,
    /// `‖(hg)² ∓ I‖`.
    pub relation_deviation: f64,
    /// `‖(h̄g)² ∓ I‖`.
    pub other_relation_deviation: Option<f64>,
}

pub fn commutator_root(f: &Moebius, g: &Moebius, cfg: &Config) -> Result<CommutatorRoot> {
    let comm = commutator(f, g);
    if comm.is_identity(1e-12 * comm.max_abs_entry().max(1.0)) {
        return Err(Error::ElementaryInput);
    }
    let roots = sqrt_in_psl(&comm)?;
    let deviation = |h: &Moebius| {
        let hg = h.compose(g);
        hg.compose(&hg).identity_deviation()
    };
    let mut scored: Vec<(Moebius, f64)> = roots.iter().map(|h| (*h, deviation(h))).collect();
    scored.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (h, relation_deviation) = scored[0];
    let scale = h.max_abs_entry().max(g.max_abs_entry()).max(1.0).powi(4);
    if relation_deviation > ROOT_RELATION_TOLERANCE * scale {
        return Err(Error::NoRootSatisfiesRelation(relation_deviation));
    }
    let h_class = classify(&h, cfg.tol, cfg.max_order);
    Ok(CommutatorRoot {
        h,
        other_root: scored.get(1).map(|r| r.0),
        h_class,
        p: p_from_class(&h_class),
        relation_deviation,
        other_relation_deviation: scored.get(1).map(|r| r.1),
    })
}

/// `|β(f)| + |γ(f,g)|`, at least 1 for every discrete non-elementary pair.
pub fn jorgensen_check(f: &Moebius, g: &Moebius) -> f64 {
    beta(f).norm() + gamma(f, g).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessReason {
    /// The word evaluates to the commutator root `h`, which is a
    /// non-primitive elliptic.
    NonPrimitiveEllipticRoot,
    /// An elliptic of infinite order.
    IrrationalElliptic,
    /// `|β(g)| + |γ(g,w)| < 1` with `γ(g,w) ≠ 0` for parabolic `g`.
    JorgensenViolation,
}

impl WitnessReason {
    pub fn name(&self) -> &'static str {
        match self {
            WitnessReason::NonPrimitiveEllipticRoot => "non-primitive-elliptic-root",
            WitnessReason::IrrationalElliptic => "irrational-elliptic",
            WitnessReason::JorgensenViolation => "jorgensen-violation",
        }
    }
}

/// An element of `⟨f, g⟩` that obstructs discreteness.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub word: Word,
    pub element: Moebius,
    pub reason: WitnessReason,
    /// Rotation angle for elliptic witnesses, Jørgensen sum otherwise.
    pub value: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum VerdictTag {
    Discrete,
    NonDiscrete,
    OutOfScope(ScopeVerdict),
}

impl VerdictTag {
    pub fn name(&self) -> &'static str {
        match self {
            VerdictTag::Discrete => "discrete",
            VerdictTag::NonDiscrete => "non-discrete",
            VerdictTag::OutOfScope(_) => "out-of-scope",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum AuditEntry {
    PrimitiveReduction {
        k: u32,
        n: u32,
        from: Triple<f64>,
        to: Triple<f64>,
    },
    JorgensenSum(f64),
    /// `p` from the class of the computed root against `p` from `γ`.
    RootCrossCheck { from_root: POrder, from_gamma: POrder },
}

impl fmt::Display for AuditEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditEntry::PrimitiveReduction { k, n, from, to } => write!(
                f,
                "primitive_reduction: rotation 2pi*{k}/{n}; (beta_f, gamma) = ({}, {}) -> ({}, {})",
                from.beta_f, from.gamma, to.beta_f, to.gamma
            ),
            AuditEntry::JorgensenSum(s) => write!(f, "jorgensen_sum: {s}"),
            AuditEntry::RootCrossCheck {
                from_root,
                from_gamma,
            } => write!(f, "root_cross_check: p(h) = {from_root}, p(gamma) = {from_gamma}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub tag: VerdictTag,
    /// The triple the decision was made on (after any reduction).
    pub triple: Option<RpTriple>,
    pub h_class: Option<ElementClass>,
    pub p: Option<POrder>,
    /// Half translation length of hyperbolic `h` (`γ < -4`).
    pub translation_half_length: Option<f64>,
    pub audit: Vec<AuditEntry>,
    pub witness: Option<Witness>,
    /// Disagreement between independent computations, if any.
    pub inconsistency: Option<String>,
    pub scope_detail: String,
}

impl Verdict {
    pub fn is_discrete(&self) -> bool {
        self.tag == VerdictTag::Discrete
    }

    pub fn n(&self) -> Option<ExtendedOrder> {
        self.triple.map(|t| t.n)
    }

    pub fn gamma(&self) -> Option<f64> {
        self.triple.map(|t| t.gamma)
    }

    pub fn was_reduced(&self) -> bool {
        self.audit
            .iter()
            .any(|a| matches!(a, AuditEntry::PrimitiveReduction { .. }))
    }
}

/// Decides discreteness from a parameter triple. Non-primitive elliptic
/// `β(f)` is reduced first and the reduction recorded in the audit trail.
pub fn decide(t: &Triple<Complex>, cfg: &Config) -> Verdict {
    let mut audit = Vec::new();
    let mut report = check_scope(t, cfg.tol, cfg.max_order);
    if let ScopeVerdict::NeedsPrimitiveReduction { k, n } = report.verdict {
        let real = t.to_real(cfg.tol).expect("reduction is only proposed for real triples");
        if let Ok(reduced) = primitive_reduction(&real, cfg.tol, cfg.max_order) {
            audit.push(AuditEntry::PrimitiveReduction {
                k,
                n,
                from: real,
                to: reduced.as_triple(),
            });
            report = check_scope(&reduced.as_triple().to_complex(), cfg.tol, cfg.max_order);
        }
    }
    let Some(rp) = report.triple else {
        return Verdict {
            tag: VerdictTag::OutOfScope(report.verdict),
            triple: None,
            h_class: None,
            p: None,
            translation_half_length: None,
            audit,
            witness: None,
            inconsistency: None,
            scope_detail: report.detail,
        };
    };
    let p = p_from_gamma(rp.gamma, cfg.tol, cfg.max_order).expect("in-scope gamma is negative");
    let tag = if p.extended().is_some() {
        VerdictTag::Discrete
    } else {
        VerdictTag::NonDiscrete
    };
    audit.push(AuditEntry::JorgensenSum(rp.beta_f.abs() + rp.gamma.abs()));
    Verdict {
        tag,
        triple: Some(rp),
        h_class: Some(class_for_p(p, rp.gamma)),
        p: Some(p),
        translation_half_length: (p == POrder::BarInfinity).then(|| translation_half_length(rp.gamma)),
        audit,
        witness: None,
        inconsistency: None,
        scope_detail: report.detail,
    }
}

/// [`decide`] for `(β(f), 0, γ)`.
pub fn decide_real(beta_f: f64, gamma: f64, cfg: &Config) -> Verdict {
    decide(&Triple::parabolic_family(beta_f, gamma).to_complex(), cfg)
}

/// Decides from matrices and cross-checks the class of the computed root `h`
/// against `p` from `γ`. Runs the witness search on non-discrete verdicts
/// when the configured depth is positive.
pub fn decide_from_generators(f: &Moebius, g: &Moebius, cfg: &Config) -> Verdict {
    let t = params(f, g);
    let mut verdict = decide(&t, cfg);
    if verdict.triple.is_some() {
        let from_gamma = p_from_gamma(t.gamma.re, cfg.tol, cfg.max_order);
        match (commutator_root(f, g, cfg), from_gamma) {
            (Ok(root), Ok(from_gamma)) => match root.p {
                Some(from_root) => {
                    verdict.audit.push(AuditEntry::RootCrossCheck {
                        from_root,
                        from_gamma,
                    });
                    if !from_root.agrees_with(from_gamma) {
                        verdict.inconsistency = Some(format!(
                            "p from the class of h is {from_root} but p from gamma is {from_gamma}"
                        ));
                    }
                }
                None => {
                    verdict.inconsistency = Some(format!("h is {}", root.h_class));
                }
            },
            (Err(e), _) | (_, Err(e)) => verdict.inconsistency = Some(e.to_string()),
        }
    }
    if verdict.tag == VerdictTag::NonDiscrete && cfg.witness_depth > 0 {
        verdict.witness = nondiscreteness_witness(f, g, cfg.witness_depth, cfg);
    }
    verdict
}

/// Conjugator taking a parabolic `g` to `z ↦ z + 1`.
fn unit_translation_frame(g: &Moebius) -> Option<Moebius> {
    let fixed = fixed_points(g).ok()?;
    let [point] = fixed.as_slice() else {
        return None;
    };
    let to_infinity = match point {
        BoundaryPoint::Infinity => Moebius::identity(),
        BoundaryPoint::Finite(z) => {
            Moebius::new(Complex::new(0.0, 0.0), 1.0.into(), 1.0.into(), -*z).ok()?
        }
    };
    let moved = g.conjugate_by(&to_infinity);
    let shift = moved.b / moved.d;
    let scale = Moebius::new(1.0.into(), 0.0.into(), 0.0.into(), shift).ok()?;
    Some(scale.compose(&to_infinity))
}

struct Node {
    parent: u32,
    generator: u8,
    run: u16,
    m: Moebius,
}

const GENERATOR_LETTERS: [(Letter, i32); 4] =
    [(Letter::F, 1), (Letter::F, -1), (Letter::G, 1), (Letter::G, -1)];

fn finite_order(class: &ElementClass) -> Option<u32> {
    match *class {
        ElementClass::EllipticPrimitive { order } => Some(order),
        ElementClass::EllipticNonPrimitive { q, .. } => Some(q),
        _ => None,
    }
}

/// Breadth-first search over freely reduced words in `f^±1, g^±1` of length
/// at most `depth` (powers of a finite-order generator are kept in
/// `(-n/2, n/2]`). Returns the first word, in length-then-generation order,
/// that is an irrational elliptic, equals a non-primitive elliptic
/// commutator root, or violates Jørgensen's inequality against a parabolic
/// `g`. `None` does not certify discreteness.
pub fn nondiscreteness_witness(f: &Moebius, g: &Moebius, depth: usize, cfg: &Config) -> Option<Witness> {
    let g_parabolic = classify(g, cfg.tol, cfg.max_order) == ElementClass::Parabolic;
    let frame = if g_parabolic {
        unit_translation_frame(g)
    } else {
        None
    };
    let u = frame.unwrap_or_else(Moebius::identity);
    let (f_n, g_n) = (f.conjugate_by(&u), g.conjugate_by(&u));
    let target_root = commutator_root(&f_n, &g_n, cfg)
        .ok()
        .filter(|r| matches!(r.h_class, ElementClass::EllipticNonPrimitive { .. }))
        .map(|r| r.h);
    let orders = [
        finite_order(&classify(f, cfg.tol, cfg.max_order)),
        finite_order(&classify(g, cfg.tol, cfg.max_order)),
    ];
    let generators = [f_n, f_n.inverse(), g_n, g_n.inverse()];

    let mut arena: Vec<Node> = Vec::new();
    let mut frontier: Vec<u32> = Vec::new();
    let root_index = u32::MAX;
    for level in 0..depth {
        let parents: Vec<u32> = if level == 0 { vec![root_index] } else { std::mem::take(&mut frontier) };
        for parent in parents {
            let (last, run, m) = if parent == root_index {
                (None, 0u16, Moebius::identity())
            } else {
                let node = &arena[parent as usize];
                (Some(node.generator), node.run, node.m)
            };
            for gen in 0..4u8 {
                if last == Some(gen ^ 1) {
                    continue;
                }
                let run = if last == Some(gen) { run + 1 } else { 1 };
                if let Some(n) = orders[usize::from(gen / 2)] {
                    let run = u32::from(run);
                    if 2 * run > n || (gen % 2 == 1 && 2 * run == n) {
                        continue;
                    }
                }
                let next = m.compose(&generators[usize::from(gen)]);
                let scale = next.max_abs_entry().max(1.0).powi(2);
                if next.is_identity(1e-9 * scale) {
                    continue;
                }
                let found = witness_reason(&next, target_root.as_ref(), frame.is_some(), scale, cfg);
                arena.push(Node {
                    parent,
                    generator: gen,
                    run,
                    m: next,
                });
                let index = (arena.len() - 1) as u32;
                if let Some((reason, value)) = found {
                    return Some(Witness {
                        word: rebuild_word(&arena, index, root_index),
                        element: next.conjugate_by(&u.inverse()),
                        reason,
                        value,
                    });
                }
                frontier.push(index);
            }
        }
    }
    None
}

fn witness_reason(
    m: &Moebius,
    target_root: Option<&Moebius>,
    unit_frame: bool,
    scale: f64,
    cfg: &Config,
) -> Option<(WitnessReason, f64)> {
    if let Some(h) = target_root {
        if m.approx_eq(h, 1e-8 * scale) {
            let angle = classify(h, cfg.tol, cfg.max_order).rotation_angle().unwrap_or(0.0);
            return Some((WitnessReason::NonPrimitiveEllipticRoot, angle));
        }
    }
    if let ElementClass::EllipticIrrational { angle } = classify(m, cfg.tol * scale, cfg.max_order) {
        return Some((WitnessReason::IrrationalElliptic, angle));
    }
    if unit_frame {
        // γ(g, w) = c_w² for g = z + 1; Shimizu–Leutbecher bound |c_w| ≥ 1
        let sum = m.c.norm_sqr();
        if sum > cfg.tol && sum < 1.0 - cfg.tol {
            return Some((WitnessReason::JorgensenViolation, sum));
        }
    }
    None
}

fn rebuild_word(arena: &[Node], mut index: u32, root: u32) -> Word {
    let mut gens = Vec::new();
    while index != root {
        let node = &arena[index as usize];
        gens.push(node.generator);
        index = node.parent;
    }
    let mut word = Word::empty();
    for gen in gens.into_iter().rev() {
        let (letter, exp) = GENERATOR_LETTERS[usize::from(gen)];
        word.push(letter, exp);
    }
    word
}
