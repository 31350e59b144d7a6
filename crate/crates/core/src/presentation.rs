//! Presentations of the discrete groups: `GT[n,∞;q]` for even `p` (and
//! `p ∈ {∞, ∞̄}`), `Tet[n,∞;p]` for odd `p`.
//!
//! A relation `x^∞` is kept in the Kleinian presentation and dropped from
//! the abstract one; `x^∞̄` is dropped from both.

use std::fmt;

use crate::discreteness::{Verdict, VerdictTag};
use crate::error::{Error, Result};
use crate::moebius::{classify, ElementClass, Moebius};
use crate::order::{ExtendedOrder, POrder, DEFAULT_MAX_ORDER};
use crate::word::{Letter, Substitution, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    GT,
    Tet,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::GT => "GT",
            Family::Tet => "Tet",
        }
    }
}

/// The relation `word^power = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relator {
    pub word: Word,
    pub power: ExtendedOrder,
}

impl Relator {
    pub fn new(word: Word, power: ExtendedOrder) -> Self {
        Relator { word, power }
    }

    fn in_kleinian(&self) -> bool {
        self.power != ExtendedOrder::BarInfinity
    }

    fn in_abstract(&self) -> bool {
        self.power.is_finite()
    }
}

impl fmt::Display for Relator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.word.is_single_letter() {
            write!(f, "{}^{}", self.word, self.power)
        } else {
            write!(f, "({})^{}", self.word, self.power)
        }
    }
}

/// Where `Γ` sits in `Γ ⊆ Γ̃ ⊂ Γ*`, with `Γ̃ = ⟨f, g, e⟩` and `Γ*` the
/// reflection group of `T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexChain {
    pub e_in_gamma: bool,
    /// `[Γ̃ : Γ]`.
    pub gamma_tilde_index: u32,
    /// `[Γ* : Γ̃]`.
    pub reflection_index: u32,
}

/// Nature of the vertex of `T` where `η`, `σ`, `τ` would meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FatVertex {
    InteriorSingular,
    Puncture,
    RemovedBall,
}

impl FatVertex {
    pub fn name(self) -> &'static str {
        match self {
            FatVertex::InteriorSingular => "interior-singular",
            FatVertex::Puncture => "puncture",
            FatVertex::RemovedBall => "removed-ball",
        }
    }
}

/// Sign of `1/2 + 1/n + 1/p - 1`, with `1/∞ = 1/∞̄ = 0`.
pub fn fat_vertex_type(n: ExtendedOrder, p: u32) -> FatVertex {
    let p = u64::from(p);
    // both sides scaled by 2np, or by 2p when n is infinite
    let (lhs, rhs) = match n {
        ExtendedOrder::Finite(n) => {
            let n = u64::from(n);
            (n * p + 2 * p + 2 * n, 2 * n * p)
        }
        _ => (p + 2, 2 * p),
    };
    match lhs.cmp(&rhs) {
        std::cmp::Ordering::Greater => FatVertex::InteriorSingular,
        std::cmp::Ordering::Equal => FatVertex::Puncture,
        std::cmp::Ordering::Less => FatVertex::RemovedBall,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrbifoldPresentation {
    pub family: Family,
    pub n: ExtendedOrder,
    /// `q` for `GT`, `p` for `Tet`.
    pub order_param: ExtendedOrder,
    /// All relators, including `∞̄` ones that the texts omit.
    pub relators: Vec<Relator>,
    /// `e` as a word in `f`, `g` (odd `p` only).
    pub e_word: Option<Word>,
    pub index_chain: IndexChain,
    pub fat_vertex: Option<FatVertex>,
}

impl OrbifoldPresentation {
    /// `GT[3,inf;2]`, `Tet[3,inf;3]`.
    pub fn label(&self) -> String {
        format!("{}[{},inf;{}]", self.family.name(), self.n, self.order_param)
    }

    fn generators(&self) -> &'static str {
        match self.family {
            Family::GT => "f, g",
            Family::Tet => "f, g, e",
        }
    }

    pub fn kleinian_relators(&self) -> Vec<&Relator> {
        self.relators.iter().filter(|r| r.in_kleinian()).collect()
    }

    pub fn abstract_relators(&self) -> Vec<&Relator> {
        self.relators.iter().filter(|r| r.in_abstract()).collect()
    }

    pub fn kleinian_text(&self) -> String {
        self.render(&self.kleinian_relators())
    }

    pub fn abstract_text(&self) -> String {
        self.render(&self.abstract_relators())
    }

    fn render(&self, relators: &[&Relator]) -> String {
        let mut out = if relators.is_empty() {
            format!("<{}>", self.generators())
        } else {
            let body: Vec<String> = relators.iter().map(|r| r.to_string()).collect();
            format!("<{} | {} = 1>", self.generators(), body.join(" = "))
        };
        if let Some(e) = &self.e_word {
            out.push_str(&format!(", e = {e}"));
        }
        out
    }
}

fn f() -> Word {
    Word::letter(Letter::F)
}

fn g() -> Word {
    Word::letter(Letter::G)
}

fn e() -> Word {
    Word::letter(Letter::E)
}

fn fg_commutator() -> Word {
    Word::commutator(&f(), &g())
}

/// `e = (f g f⁻¹ g⁻¹)^((p-1)/2) f g` for odd `p ≥ 3`.
pub fn e_in_terms_of_generators(p: u32) -> Result<Word> {
    if p.is_multiple_of(2) {
        return Err(Error::EvenP(p));
    }
    if p < 3 {
        return Err(Error::InvalidOrder(p));
    }
    let k = i32::try_from((p - 1) / 2).map_err(|_| Error::InvalidOrder(p))?;
    Ok(fg_commutator().pow(k).concat(&f()).concat(&g()))
}

fn gamma_tilde_relators(n: ExtendedOrder, p: ExtendedOrder) -> Vec<Relator> {
    let fg = f().concat(&g());
    vec![
        Relator::new(f(), n),
        Relator::new(g(), ExtendedOrder::Infinity),
        Relator::new(e(), ExtendedOrder::Finite(2)),
        Relator::new(f().concat(&e()), ExtendedOrder::Finite(2)),
        Relator::new(g().concat(&e()), ExtendedOrder::Finite(2)),
        Relator::new(fg.concat(&e()), p),
    ]
}

/// Relators of `Γ̃ = ⟨f, g, e⟩` as they appear in its Kleinian
/// presentation (`∞̄` relators removed).
pub fn gamma_tilde_presentation(n: ExtendedOrder, p: ExtendedOrder) -> Vec<Relator> {
    gamma_tilde_relators(n, p)
        .into_iter()
        .filter(Relator::in_kleinian)
        .collect()
}

fn gt_relators(n: ExtendedOrder, q: ExtendedOrder) -> Vec<Relator> {
    vec![
        Relator::new(f(), n),
        Relator::new(g(), ExtendedOrder::Infinity),
        Relator::new(fg_commutator(), q),
    ]
}

/// The presentation of `Γ = ⟨f, g⟩` for a discrete verdict.
pub fn presentation_for(verdict: &Verdict) -> Result<OrbifoldPresentation> {
    if verdict.tag != VerdictTag::Discrete {
        return Err(Error::NotDiscrete);
    }
    let (Some(n), Some(p)) = (verdict.n(), verdict.p) else {
        return Err(Error::NotDiscrete);
    };
    presentation_from_orders(n, p)
}

/// As [`presentation_for`], from `n` and an integer or infinite `p`.
pub fn presentation_from_orders(n: ExtendedOrder, p: POrder) -> Result<OrbifoldPresentation> {
    let gt = |q: ExtendedOrder| OrbifoldPresentation {
        family: Family::GT,
        n,
        order_param: q,
        relators: gt_relators(n, q),
        e_word: None,
        index_chain: IndexChain {
            e_in_gamma: false,
            gamma_tilde_index: 2,
            reflection_index: 2,
        },
        fat_vertex: None,
    };
    match p {
        POrder::Infinity => Ok(gt(ExtendedOrder::Infinity)),
        POrder::BarInfinity => Ok(gt(ExtendedOrder::BarInfinity)),
        POrder::Integer(p) if p >= 3 && p % 2 == 0 => Ok(gt(ExtendedOrder::Finite(p / 2))),
        POrder::Integer(p) if p >= 3 => Ok(OrbifoldPresentation {
            family: Family::Tet,
            n,
            order_param: ExtendedOrder::Finite(p),
            relators: gamma_tilde_relators(n, ExtendedOrder::Finite(p)),
            e_word: Some(e_in_terms_of_generators(p)?),
            index_chain: IndexChain {
                e_in_gamma: true,
                gamma_tilde_index: 1,
                reflection_index: 2,
            },
            fat_vertex: Some(fat_vertex_type(n, p)),
        }),
        _ => Err(Error::NotDiscrete),
    }
}

/// Evaluates every relator on `(f, g, e)`. Finite relators must give `±I`;
/// `x^∞` requires `x` parabolic and `x^∞̄` requires `x` hyperbolic. Returns
/// the largest deviation from `±I` over the finite relators.
///
/// When `e` is `None` the presentation's own `e` word is used.
pub fn verify_relators(
    pres: &OrbifoldPresentation,
    f: &Moebius,
    g: &Moebius,
    e: Option<&Moebius>,
) -> Result<f64> {
    let mut sub = Substitution { f: *f, g: *g, e: e.copied() };
    if sub.e.is_none() {
        if let Some(word) = &pres.e_word {
            sub.e = word.eval(&sub);
        }
    }
    let mut max_deviation = 0.0f64;
    for relator in &pres.relators {
        let m = relator
            .word
            .eval(&sub)
            .ok_or(Error::NotNormalized("relator uses e but no e was supplied"))?;
        let mismatch = |expected: &'static str, found: String| Error::RelatorMismatch {
            relator: relator.to_string(),
            expected,
            found,
        };
        match relator.power {
            ExtendedOrder::Finite(k) => {
                let dev = m.pow(i64::from(k)).identity_deviation();
                max_deviation = max_deviation.max(dev);
            }
            ExtendedOrder::Infinity => {
                let class = classify(&m, 1e-9 * m.max_abs_entry().max(1.0).powi(2), DEFAULT_MAX_ORDER);
                if class != ElementClass::Parabolic {
                    return Err(mismatch("parabolic", class.to_string()));
                }
            }
            ExtendedOrder::BarInfinity => {
                let class = classify(&m, 1e-9, DEFAULT_MAX_ORDER);
                if !matches!(class, ElementClass::Hyperbolic { .. }) {
                    return Err(mismatch("hyperbolic", class.to_string()));
                }
            }
        }
    }
    Ok(max_deviation)
}
