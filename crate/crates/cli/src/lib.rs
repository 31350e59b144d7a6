//! Report types and command implementations behind the `kleinrp` binary.
//!
//! Every command returns a serializable report; the binary only prints it
//! and maps it to an exit code.

use std::fs;
use std::io::Write;
use std::path::Path;

use kleinrp_core::discreteness::{decide_from_generators, decide_real, nondiscreteness_witness, Witness};
use kleinrp_core::geometry::{build_polyhedron, Face, Plane, PlaneRelation};
use kleinrp_core::moebius::beta;
use kleinrp_core::presentation::{presentation_for, verify_relators, OrbifoldPresentation};
use kleinrp_core::rp::{synthesize_generators, synthesize_raw};
use kleinrp_core::{classify, Complex, Config, ElementClass, Moebius, Verdict, VerdictTag};
use rayon::prelude::*;
use serde::Serialize;

/// Exit codes shared by all subcommands.
pub mod exit {
    pub const DISCRETE: i32 = 0;
    pub const NON_DISCRETE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const OUT_OF_SCOPE: i32 = 3;
    pub const IO: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot parse {what} from {input:?}")]
    Parse { what: &'static str, input: String },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("out of scope: {0}")]
    OutOfScope(String),
    #[error(transparent)]
    Core(#[from] kleinrp_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::InvalidArgument(_) | CliError::Core(_) => exit::USAGE,
            CliError::OutOfScope(_) => exit::OUT_OF_SCOPE,
            CliError::Io(_) | CliError::Csv(_) | CliError::Json(_) => exit::IO,
        }
    }
}

fn parse_error(what: &'static str, input: &str) -> CliError {
    CliError::Parse {
        what,
        input: input.to_owned(),
    }
}

/// Parses `x`, `yi`, `x+yi`, `x-yi` (also `i`, `-i`, exponents like `1e-3`).
pub fn parse_complex(s: &str) -> Result<Complex, CliError> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let err = || parse_error("complex number", s);
    if t.is_empty() {
        return Err(err());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(Complex::from).map_err(|_| err());
    };
    // split before the last sign that is not a leading sign or an exponent sign
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let re = if re.is_empty() { 0.0 } else { re.parse::<f64>().map_err(|_| err())? };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        other => other.parse::<f64>().map_err(|_| err())?,
    };
    Ok(Complex::new(re, im))
}

/// Parses `a,b;c,d` into a normalized element.
pub fn parse_matrix(s: &str) -> Result<Moebius, CliError> {
    let rows: Vec<&str> = s.split(';').collect();
    let [top, bottom] = rows.as_slice() else {
        return Err(parse_error("matrix (expected \"a,b;c,d\")", s));
    };
    let mut entries = Vec::with_capacity(4);
    for row in [top, bottom] {
        let cells: Vec<&str> = row.split(',').collect();
        if cells.len() != 2 {
            return Err(parse_error("matrix (expected \"a,b;c,d\")", s));
        }
        for cell in cells {
            entries.push(parse_complex(cell)?);
        }
    }
    Ok(Moebius::new(entries[0], entries[1], entries[2], entries[3])?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassifyReport {
    pub beta: f64,
    pub beta_im: f64,
    pub class: &'static str,
    /// Order of a finite-order elliptic.
    pub order: Option<u32>,
    /// `k` in a rotation through `2πk/q`.
    pub rotation_numerator: Option<u32>,
    pub rotation_angle: Option<f64>,
    pub translation_length: Option<f64>,
}

pub fn classify_report(m: &Moebius, cfg: &Config) -> ClassifyReport {
    let b = beta(m);
    let class = classify(m, cfg.tol(), cfg.max_order());
    let (order, rotation_numerator) = match class {
        ElementClass::EllipticPrimitive { order } => (Some(order), Some(1)),
        ElementClass::EllipticNonPrimitive { q, k } => (Some(q), Some(k)),
        _ => (None, None),
    };
    ClassifyReport {
        beta: b.re,
        beta_im: b.im,
        class: class.name(),
        order,
        rotation_numerator,
        rotation_angle: class.rotation_angle(),
        translation_length: match class {
            ElementClass::Hyperbolic { translation_length } => Some(translation_length),
            _ => None,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WitnessReport {
    pub word: String,
    pub reason: &'static str,
    pub value: f64,
}

impl From<&Witness> for WitnessReport {
    fn from(w: &Witness) -> Self {
        WitnessReport {
            word: w.word.to_string(),
            reason: w.reason.name(),
            value: w.value,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IndexChainReport {
    pub e_in_gamma: bool,
    pub gamma_tilde_index: u32,
    pub reflection_index: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PresentationReport {
    pub label: String,
    pub family: &'static str,
    pub n: String,
    pub order_param: String,
    pub kleinian: String,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
    pub relators: Vec<String>,
    pub e_word: Option<String>,
    pub fat_vertex: Option<&'static str>,
    pub index_chain: IndexChainReport,
    /// Largest deviation from `±I` over the finite relators, evaluated on
    /// the normalized generators.
    pub max_relator_deviation: Option<f64>,
}

impl PresentationReport {
    fn new(p: &OrbifoldPresentation, max_relator_deviation: Option<f64>) -> Self {
        PresentationReport {
            label: p.label(),
            family: p.family.name(),
            n: p.n.token(),
            order_param: p.order_param.token(),
            kleinian: p.kleinian_text(),
            abstract_text: p.abstract_text(),
            relators: p.relators.iter().map(|r| r.to_string()).collect(),
            e_word: p.e_word.as_ref().map(|w| w.to_string()),
            fat_vertex: p.fat_vertex.map(|v| v.name()),
            index_chain: IndexChainReport {
                e_in_gamma: p.index_chain.e_in_gamma,
                gamma_tilde_index: p.index_chain.gamma_tilde_index,
                reflection_index: p.index_chain.reflection_index,
            },
            max_relator_deviation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecideReport {
    pub verdict: &'static str,
    pub scope: Option<&'static str>,
    pub scope_detail: String,
    pub beta_f: Option<f64>,
    pub gamma: Option<f64>,
    pub n: Option<String>,
    pub p: Option<String>,
    pub h_type: Option<String>,
    pub translation_half_length: Option<f64>,
    pub audit: Vec<String>,
    pub presentation: Option<PresentationReport>,
    pub witness: Option<WitnessReport>,
    pub inconsistency: Option<String>,
}

impl DecideReport {
    pub fn exit_code(&self) -> i32 {
        match self.verdict {
            "discrete" => exit::DISCRETE,
            "non-discrete" => exit::NON_DISCRETE,
            _ => exit::OUT_OF_SCOPE,
        }
    }

    fn from_verdict(v: &Verdict, generators: Option<(Moebius, Moebius)>) -> Result<Self, CliError> {
        let presentation = match v.tag {
            VerdictTag::Discrete => {
                let pres = presentation_for(v)?;
                let generators = generators.or_else(|| v.triple.map(|t| synthesize_generators(&t)));
                let deviation = generators.and_then(|(f, g)| verify_relators(&pres, &f, &g, None).ok());
                Some(PresentationReport::new(&pres, deviation))
            }
            _ => None,
        };
        Ok(DecideReport {
            verdict: v.tag.name(),
            scope: match v.tag {
                VerdictTag::OutOfScope(s) => Some(s.name()),
                _ => None,
            },
            scope_detail: v.scope_detail.clone(),
            beta_f: v.triple.map(|t| t.beta_f),
            gamma: v.gamma(),
            n: v.n().map(|n| n.token()),
            p: v.p.map(|p| p.to_string()),
            h_type: v.h_class.map(|c| c.name().to_owned()),
            translation_half_length: v.translation_half_length,
            audit: v.audit.iter().map(|a| a.to_string()).collect(),
            presentation,
            witness: v.witness.as_ref().map(WitnessReport::from),
            inconsistency: v.inconsistency.clone(),
        })
    }
}

/// Decides from `(β(f), γ)` with `β(g) = 0`.
pub fn decide_params(beta_f: f64, gamma: f64, cfg: &Config) -> Result<DecideReport, CliError> {
    let mut verdict = decide_real(beta_f, gamma, cfg);
    if verdict.tag == VerdictTag::NonDiscrete && cfg.witness_depth() > 0 {
        if let Ok((f, g)) = synthesize_raw(beta_f, gamma) {
            verdict.witness = nondiscreteness_witness(&f, &g, cfg.witness_depth(), cfg);
        }
    }
    DecideReport::from_verdict(&verdict, None)
}

/// Decides from generator matrices.
pub fn decide_matrices(f: &Moebius, g: &Moebius, cfg: &Config) -> Result<DecideReport, CliError> {
    let verdict = decide_from_generators(f, g, cfg);
    // relators are checked on the normalized pair, which the input need not be
    DecideReport::from_verdict(&verdict, None)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum PlaneReport {
    Vertical { point: [f64; 2], direction: [f64; 2] },
    Hemisphere { center: [f64; 2], radius: f64 },
}

impl From<&Plane> for PlaneReport {
    fn from(p: &Plane) -> Self {
        match *p {
            Plane::Vertical { point, direction } => PlaneReport::Vertical {
                point: [point.re, point.im],
                direction: [direction.re, direction.im],
            },
            Plane::Hemisphere { center, radius } => PlaneReport::Hemisphere {
                center: [center.re, center.im],
                radius,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedPlane {
    pub name: &'static str,
    #[serde(flatten)]
    pub plane: PlaneReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub pair: [&'static str; 2],
    pub tag: &'static str,
    /// Dihedral angle for `intersect`, distance for `disjoint`.
    pub angle_or_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyhedronReport {
    pub beta_f: f64,
    pub gamma: f64,
    pub n: String,
    pub p: String,
    pub planes: Vec<NamedPlane>,
    pub relations: Vec<RelationReport>,
    pub kappa1: PlaneReport,
    pub kappa2: Option<PlaneReport>,
}

/// The polyhedron for `(β(f), γ)`, after any primitive reduction.
pub fn polyhedron_report(beta_f: f64, gamma: f64, cfg: &Config) -> Result<PolyhedronReport, CliError> {
    let verdict = decide_real(beta_f, gamma, cfg);
    let Some(triple) = verdict.triple else {
        return Err(CliError::OutOfScope(verdict.scope_detail));
    };
    let (f, g) = synthesize_generators(&triple);
    let t = build_polyhedron(&f, &g)?;
    let planes = Face::ALL
        .iter()
        .zip(t.planes.as_array())
        .map(|(face, plane)| NamedPlane {
            name: face.name(),
            plane: PlaneReport::from(&plane),
        })
        .collect();
    let relations = t
        .relation_list()
        .into_iter()
        .map(|(a, b, rel)| RelationReport {
            pair: [a.name(), b.name()],
            tag: rel.name(),
            angle_or_distance: match rel {
                PlaneRelation::Intersect(x) | PlaneRelation::Disjoint(x) => Some(x),
                PlaneRelation::Parallel => None,
            },
        })
        .collect();
    Ok(PolyhedronReport {
        beta_f: triple.beta_f,
        gamma: triple.gamma,
        n: t.n.token(),
        p: t.p.to_string(),
        planes,
        relations,
        kappa1: PlaneReport::from(&t.kappa1),
        kappa2: t.kappa2.as_ref().map(PlaneReport::from),
    })
}

/// Writes pretty JSON followed by a newline.
pub fn write_json<T: Serialize>(value: &T, out: &mut impl Write) -> Result<(), CliError> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

pub fn write_json_file<T: Serialize>(value: &T, path: &Path) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_json(value, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanRow {
    pub gamma: f64,
    pub verdict: &'static str,
    pub p: String,
    pub label: String,
}

/// Grid `γ_i = γ_min + i·step`, `0 ≤ i ≤ ⌊(γ_max - γ_min)/step⌋`.
pub fn scan_grid(gamma_min: f64, gamma_max: f64, step: f64) -> Result<Vec<f64>, CliError> {
    if !step.is_finite() || step <= 0.0 {
        return Err(CliError::InvalidArgument(format!("step must be positive, got {step}")));
    }
    if !gamma_min.is_finite() || !gamma_max.is_finite() {
        return Err(CliError::InvalidArgument("gamma bounds must be finite".into()));
    }
    if gamma_max >= 0.0 {
        return Err(CliError::InvalidArgument(format!(
            "gamma range must lie below 0, got gamma_max = {gamma_max}"
        )));
    }
    if gamma_max < gamma_min {
        return Ok(Vec::new());
    }
    // small slack so that an endpoint hit up to rounding is included
    let count = ((gamma_max - gamma_min) / step + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| gamma_min + i as f64 * step).collect())
}

pub fn scan(beta_f: f64, gamma_min: f64, gamma_max: f64, step: f64, cfg: &Config) -> Result<Vec<ScanRow>, CliError> {
    let grid = scan_grid(gamma_min, gamma_max, step)?;
    Ok(grid
        .par_iter()
        .map(|&gamma| {
            let v = decide_real(beta_f, gamma, cfg);
            ScanRow {
                gamma,
                verdict: v.tag.name(),
                p: v.p.map(|p| p.to_string()).unwrap_or_default(),
                label: presentation_for(&v).map(|p| p.label()).unwrap_or_default(),
            }
        })
        .collect())
}

pub fn write_scan_csv(rows: &[ScanRow], out: impl Write) -> Result<(), CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    w.write_record(["gamma", "verdict", "p", "label"])?;
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
