//! Mode dispatch from a parsed problem to a document or report.

use std::collections::BTreeMap;

use locfan_core::algebra::{VarNames, WeylElement};
use locfan_core::fan::{closed_fan, enumerate, EnumerationOptions};
use locfan_core::groebner::{initial_ideal, Ideal};
use locfan_core::local::{local_initials_equal, merge_classes, assemble_local_fan, stratum_of, translate_base_point, LocalError};
use locfan_core::polyhedra::{newton_polyhedron, validate_fan, Fan, HCone, Recession};
use locfan_core::problem::{region_cone, DoubleRoute, FanProblem, ProblemError, RegionKind, Scheme, WeightSubspace};
use locfan_core::scalar::{fmt_scalar, to_scalars, Scalar};
use num_bigint::BigInt;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::document::{cone_order, to_i64_rows, ClassEntry, ConeEntry, DocumentError, FanDocument, Provenance, FORMAT};
use crate::parse::{HomogChoice, Mode, ParseError, ProblemInput};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error("computation failed: {0}")]
    Compute(String),
    #[error("fan validation failed: {0}")]
    Validation(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 1,
            RunError::Parse(_) => 2,
            RunError::Compute(_) => 3,
            RunError::Validation(_) => 4,
        }
    }
}

impl From<LocalError> for RunError {
    fn from(e: LocalError) -> Self {
        match e {
            LocalError::Invalid(_) | LocalError::NotConvex { .. } | LocalError::LowerFace { .. } => RunError::Validation(e.to_string()),
            other => RunError::Compute(other.to_string()),
        }
    }
}

fn compute<E: std::fmt::Display>(e: E) -> RunError {
    RunError::Compute(e.to_string())
}

/// Command-line settings that override statements of the input.
#[derive(Clone, Debug, Default)]
pub struct RunOptions {
    pub mode: Option<Mode>,
    pub subspace: Option<Vec<Vec<BigInt>>>,
    pub base_point: Option<Vec<Scalar>>,
    pub homogenization: Option<HomogChoice>,
    pub region: Option<RegionKind>,
    pub validate: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompareReport {
    pub mode: String,
    pub weights: Vec<Vec<String>>,
    pub stratum: String,
    pub equal: bool,
}

#[derive(Clone, Debug)]
pub enum Output {
    Fan(FanDocument),
    Compare(CompareReport),
}

impl Output {
    pub fn json(&self) -> String {
        match self {
            Output::Fan(d) => d.to_json(),
            Output::Compare(r) => serde_json::to_string_pretty(r).expect("reports serialize") + "\n",
        }
    }
    pub fn summary(&self) -> String {
        match self {
            Output::Fan(d) => d.summary(),
            Output::Compare(r) => format!(
                "mode: {}\nstratum: {}\nlocal initial ideals equal: {}\n",
                r.mode,
                r.stratum,
                if r.equal { "yes" } else { "no" }
            ),
        }
    }
}

/// Settings after merging the input with the command line.
struct Resolved {
    mode: Mode,
    region: RegionKind,
    scheme: Scheme,
    subspace: Option<Vec<Vec<BigInt>>>,
    ideal: Ideal,
}

fn resolve(input: &ProblemInput, opts: &RunOptions) -> Result<Resolved, RunError> {
    let mode = opts.mode.or(input.mode).ok_or_else(|| RunError::Usage("no mode given".into()))?;
    let region = opts.region.or(input.region).unwrap_or(match mode {
        Mode::GlobalFan => RegionKind::Global,
        _ => RegionKind::Local,
    });
    let sig = &input.ring;
    let scheme = match opts.homogenization.clone().or_else(|| input.homogenization.clone()).unwrap_or(HomogChoice::Auto) {
        HomogChoice::Auto => Scheme::auto(sig, region),
        HomogChoice::Alpha(None) => Scheme::Alpha(vec![1; sig.n()]),
        HomogChoice::Alpha(Some(a)) => {
            if a.len() != sig.n() {
                return Err(RunError::Usage(format!("alpha needs {} degrees", sig.n())));
            }
            Scheme::Alpha(a)
        }
        HomogChoice::H11 => Scheme::H11,
        HomogChoice::Double => Scheme::DoubleH(DoubleRoute::Factor),
        HomogChoice::DoubleGenerators => Scheme::DoubleH(DoubleRoute::Generators),
    };
    let mut ideal = Ideal::new(input.generators.clone()).map_err(compute)?;
    if let Some(x0) = opts.base_point.as_ref().or(input.base_point.as_ref()) {
        if x0.len() != sig.n() {
            return Err(RunError::Usage(format!("base point needs {} coordinates", sig.n())));
        }
        ideal = translate_base_point(&ideal, x0).map_err(compute)?;
    }
    let subspace = opts.subspace.clone().or_else(|| input.subspace.clone());
    Ok(Resolved { mode, region, scheme, subspace, ideal })
}

fn canonical_input(input: &ProblemInput, r: &Resolved) -> String {
    let gens: Vec<String> = r.ideal.generators().iter().map(|g| g.display_with(&input.names)).collect();
    format!(
        "ring {} ({});\nideal: {};\nsubspace: {:?};\nregion: {};\nhomogenization: {};\nmode: {};\n",
        input.ring,
        input.names.x.join(","),
        gens.join(", "),
        r.subspace,
        r.region,
        r.scheme,
        r.mode.name()
    )
}

fn sha256_hex(s: &str) -> String {
    format!("{:x}", Sha256::digest(s.as_bytes()))
}

fn strings(v: &[Scalar]) -> Vec<String> {
    v.iter().map(fmt_scalar).collect()
}

fn shown(gens: &[WeylElement], names: &VarNames) -> Vec<String> {
    gens.iter().map(|g| g.display_with(names)).collect()
}

struct DocParts<'a> {
    names: &'a VarNames,
    mode: Mode,
    region: RegionKind,
    scheme: String,
    ring: String,
    subspace: Vec<Vec<BigInt>>,
    ambient: usize,
    sha: String,
}

/// Lay out a closed fan as a document; `initials` gives the initial ideal at a witness,
/// `class_of` the class of a maximal cone.
fn build_document(
    parts: DocParts<'_>,
    fan: &Fan,
    classes: Vec<ClassEntry>,
    class_of: impl Fn(&HCone) -> Option<usize>,
    initials: impl Fn(&[Scalar]) -> Result<Vec<WeylElement>, RunError>,
) -> Result<FanDocument, RunError> {
    let doc_err = |e: DocumentError| RunError::Compute(e.to_string());
    let mut entries = Vec::with_capacity(fan.cones.len());
    for c in &fan.cones {
        let witness = to_scalars(c.interior_point());
        entries.push((
            ConeEntry {
                id: 0,
                dim: c.dim(),
                facets: to_i64_rows(c.facets()).map_err(doc_err)?,
                equations: to_i64_rows(c.equations()).map_err(doc_err)?,
                rays: to_i64_rows(c.rays()).map_err(doc_err)?,
                witness: strings(&witness),
                initial_ideal: shown(&initials(&witness)?, parts.names),
                class: class_of(c),
            },
            c.key(),
        ));
    }
    entries.sort_by(|a, b| cone_order(&a.0, &b.0));
    let position: BTreeMap<_, usize> = entries.iter().enumerate().map(|(i, (_, k))| (k.clone(), i)).collect();
    let keys: Vec<_> = fan.cones.iter().map(|c| c.key()).collect();
    let mut incidence: Vec<(usize, usize)> = fan
        .incidence()
        .into_iter()
        .filter(|&(i, j)| fan.cones[i].dim() + 1 == fan.cones[j].dim())
        .map(|(i, j)| (position[&keys[i]], position[&keys[j]]))
        .collect();
    incidence.sort();
    let lineality = fan.cones.iter().min_by_key(|c| c.dim()).map(|c| c.lineality().to_vec()).unwrap_or_default();
    let cones = entries.into_iter().enumerate().map(|(i, (mut e, _))| {
        e.id = i;
        e
    });
    Ok(FanDocument {
        format: FORMAT.into(),
        mode: parts.mode.name().into(),
        ring: parts.ring,
        homogenization: parts.scheme,
        region: parts.region.to_string(),
        ambient_dim: parts.ambient,
        parameter_dim: fan.ambient,
        subspace: to_i64_rows(&parts.subspace).map_err(doc_err)?,
        lineality: to_i64_rows(&lineality).map_err(doc_err)?,
        cones: cones.collect(),
        classes,
        incidence,
        provenance: Provenance { input_sha256: parts.sha, tool_version: env!("CARGO_PKG_VERSION").into() },
    })
}

fn setup(e: ProblemError) -> RunError {
    match e {
        ProblemError::InvalidScheme { .. } | ProblemError::BadSubspace { .. } => RunError::Usage(e.to_string()),
        other => compute(other),
    }
}

fn make_problem(input: &ProblemInput, r: &Resolved) -> Result<FanProblem, RunError> {
    let sub = WeightSubspace::new(&input.ring, r.subspace.clone(), r.region).map_err(setup)?;
    FanProblem::new(r.ideal.clone(), r.scheme.clone(), sub).map_err(setup)
}

pub fn run(input: &ProblemInput, opts: &RunOptions) -> Result<Output, RunError> {
    let r = resolve(input, opts)?;
    let sha = sha256_hex(&canonical_input(input, &r));
    let enum_opts = EnumerationOptions::default();
    match r.mode {
        Mode::CheckFan => Err(RunError::Usage("check-fan reads a fan document, not a problem".into())),
        Mode::CompareInitials => {
            if input.weights.len() != 2 {
                return Err(RunError::Usage("compare-initials needs 'weights: [..], [..];'".into()));
            }
            let p = make_problem(input, &r)?;
            let (a, b) = (&input.weights[0], &input.weights[1]);
            for w in [a, b] {
                if w.len() != p.subspace().param_dim() || !p.subspace().region().contains(w) {
                    return Err(RunError::Usage(format!("weight {} is not a point of the region", strings(w).join(","))));
                }
            }
            let equal = local_initials_equal(&p, a, b)?;
            let stratum = format!("{:?}", stratum_of(&p.weight(a).map_err(compute)?));
            Ok(Output::Compare(CompareReport {
                mode: r.mode.name().into(),
                weights: vec![strings(a), strings(b)],
                stratum,
                equal,
            }))
        }
        Mode::GlobalFan => {
            let p = make_problem(input, &r)?;
            let cones = enumerate(&p, &enum_opts).map_err(compute)?;
            let fan = closed_fan(&p, &cones);
            if opts.validate {
                validate_fan(&fan).map_err(|v| RunError::Validation(v.to_string()))?;
            }
            let parts = doc_parts(input, &r, &p, sha);
            let maximal: Vec<_> = cones.iter().map(|c| c.cone.key()).collect();
            build_document(
                parts,
                &fan,
                Vec::new(),
                |c| maximal.iter().position(|k| *k == c.key()),
                |w| {
                    let wv = p.weight(w).map_err(compute)?;
                    let b = p.basis_at(&wv).map_err(compute)?;
                    initial_ideal(&b, &wv).map_err(compute)
                },
            )
            .map(Output::Fan)
        }
        Mode::LocalFan => {
            if r.region != RegionKind::Local {
                return Err(RunError::Usage("local fans live in the local region".into()));
            }
            let p = make_problem(input, &r)?;
            let cones = enumerate(&p, &enum_opts).map_err(compute)?;
            let classes = merge_classes(&p, &cones)?;
            let local = assemble_local_fan(&p, classes)?;
            let entries: Vec<ClassEntry> = local
                .classes
                .iter()
                .enumerate()
                .map(|(i, c)| ClassEntry {
                    id: i,
                    member_witnesses: c.members.iter().map(|&m| strings(&cones[m].witness)).collect(),
                    standard_basis: shown(&c.basis, &input.names),
                })
                .collect();
            let closures: Vec<_> = local.classes.iter().map(|c| c.closure.key()).collect();
            let parts = doc_parts(input, &r, &p, sha);
            build_document(parts, &local.fan, entries, |c| closures.iter().position(|k| *k == c.key()), |w| {
                let wv = p.weight(w).map_err(compute)?;
                let g = p.local_standard_basis(&wv).map_err(compute)?;
                g.iter().map(|e| e.initial_form(&wv)).collect::<Result<_, _>>().map_err(compute)
            })
            .map(Output::Fan)
        }
        Mode::NormalFan => normal_fan(input, &r, sha).map(Output::Fan),
    }
}

fn doc_parts<'a>(input: &'a ProblemInput, r: &Resolved, p: &FanProblem, sha: String) -> DocParts<'a> {
    DocParts {
        names: &input.names,
        mode: r.mode,
        region: r.region,
        scheme: r.scheme.to_string(),
        ring: input.ring.to_string(),
        subspace: p.subspace().generators().to_vec(),
        ambient: p.subspace().ambient_dim(),
        sha,
    }
}

/// Normal fan of the Newton polyhedron of a single generator, inside the region.
fn normal_fan(input: &ProblemInput, r: &Resolved, sha: String) -> Result<FanDocument, RunError> {
    if r.ideal.generators().len() != 1 {
        return Err(RunError::Usage("normal-fan takes exactly one generator".into()));
    }
    if r.subspace.is_some() {
        return Err(RunError::Usage("normal-fan works in the full weight space".into()));
    }
    if r.region != RegionKind::Local {
        return Err(RunError::Usage("normal-fan uses the local region".into()));
    }
    let f = &r.ideal.generators()[0];
    let sig = &input.ring;
    let rec = if sig.is_weyl() { Recession::WlocStar } else { Recession::PositiveOrthant };
    let poly = newton_polyhedron(f, rec).map_err(compute)?;
    let region = region_cone(sig, r.region);
    let d = sig.weight_dim();
    let big = |v: &[i64]| -> Vec<BigInt> { v.iter().map(|&x| BigInt::from(x)).collect() };
    let rec_ineqs: Vec<Vec<BigInt>> = poly.recession_generators().iter().map(|g| big(&g.iter().map(|x| -x).collect::<Vec<_>>())).collect();
    let mut maximal = Vec::new();
    for e in poly.points() {
        let mut ineqs = rec_ineqs.clone();
        for a in poly.points() {
            if a != e {
                ineqs.push(big(&e.iter().zip(a).map(|(x, y)| x - y).collect::<Vec<_>>()));
            }
        }
        let cone = region.with_constraints(&ineqs, &[]);
        if cone.dim() != d {
            continue;
        }
        let via_face = poly.normal_cone(&to_scalars(cone.interior_point()), &region).map_err(compute)?;
        if via_face != cone {
            return Err(RunError::Validation(format!("normal cone of vertex {e:?} disagrees between constructions")));
        }
        maximal.push(cone);
    }
    let fan = Fan::closed(d, &maximal);
    validate_fan(&fan).map_err(|v| RunError::Validation(v.to_string()))?;
    let ident: Vec<Vec<BigInt>> = (0..d).map(|i| (0..d).map(|j| BigInt::from(i64::from(i == j))).collect()).collect();
    let keys: Vec<_> = maximal.iter().map(|c| c.key()).collect();
    let parts = DocParts {
        names: &input.names,
        mode: r.mode,
        region: r.region,
        scheme: "none".into(),
        ring: sig.to_string(),
        subspace: ident,
        ambient: d,
        sha,
    };
    build_document(parts, &fan, Vec::new(), |c| keys.iter().position(|k| *k == c.key()), |w| {
        let wv = locfan_core::algebra::WeightVector::from_flat(sig, w).map_err(compute)?;
        Ok(vec![f.initial_form(&wv).map_err(compute)?])
    })
}

/// Parse and validate a fan document; returns it for re-emission.
pub fn check_document(text: &str) -> Result<FanDocument, RunError> {
    let doc = FanDocument::from_json(text).map_err(|e| RunError::Parse(ParseError { line: 1, col: 1, msg: e.to_string() }))?;
    doc.check().map_err(|e| RunError::Validation(e.to_string()))?;
    Ok(doc)
}
