//! Local Gröbner fans: support strata, comparison of local initial ideals, gluing of
//! enumerated cones into classes, and assembly of the closed fan.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::algebra::{RingSignature, WeightVector, WeylElement};
use crate::division::{mora_reduces_to_zero, DivisionError, MoraSetting};
use crate::fan::{closed_fan, enumerate, EnumerationOptions, FanError};
use crate::groebner::{GroebnerError, Ideal};
use crate::polyhedra::{validate_fan, Fan, FanViolation, HCone};
use crate::problem::{fmt_vec, FanProblem, GroebnerCone, ProblemError};
use crate::scalar::{int, to_scalars, Scalar};

type Vector = Vec<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error("weights {0} and {1} lie in different strata")]
    StratumMismatch(String, String),
    #[error("glued class with witness {witness} is not convex: facet {facet:?} is interior to the hull but unshared")]
    NotConvex { witness: String, facet: Vector },
    #[error("assembled fan is invalid: {0}")]
    Invalid(FanViolation),
    #[error("local initial ideal is not constant on the cone with rays {rays:?}")]
    LowerFace { rays: Vec<Vector> },
}

/// Which coordinates of a weight vanish or are strictly signed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SupportStratum {
    /// supp(u) = {i : u_i != 0}.
    Commutative(BTreeSet<usize>),
    /// M = {i : u_i < 0}, P = {i : u_i + v_i > 0}.
    Differential { minus: BTreeSet<usize>, plus: BTreeSet<usize> },
}

pub fn stratum_of(w: &WeightVector) -> SupportStratum {
    let u = w.u();
    if !w.is_weyl() {
        return SupportStratum::Commutative((0..u.len()).filter(|&i| !u[i].is_zero()).collect());
    }
    let v = w.v();
    SupportStratum::Differential {
        minus: (0..u.len()).filter(|&i| u[i].is_negative()).collect(),
        plus: (0..u.len()).filter(|&i| (&u[i] + &v[i]).is_positive()).collect(),
    }
}

/// Slots that may appear in Mora units at a weight: the x_i with u_i = 0.
fn allowed_slots(sig: &RingSignature, w: &WeightVector) -> Vec<bool> {
    let mut a = vec![false; sig.nslots()];
    for (i, u) in w.u().iter().enumerate() {
        a[i] = u.is_zero();
    }
    a
}

const MORA_STEPS: usize = 1_000_000;

/// Does every local initial form at `w1` lie in the local initial ideal at `w2`?
fn initials_contained(problem: &FanProblem, w1: &WeightVector, w2: &WeylElementBasis) -> Result<bool, LocalError> {
    let g1 = problem.local_standard_basis(w1)?;
    let gsig = Arc::new(problem.local_signature().graded(w1));
    let order = problem.local_order_at(&w2.weight)?;
    let grading = problem.ecart_grading();
    let allowed = allowed_slots(&gsig, w1);
    let setting = MoraSetting { order: &order, grading: &grading, allowed: &allowed, max_steps: MORA_STEPS };
    let divisors: Vec<WeylElement> = w2.initial.iter().map(|g| g.with_signature(&gsig)).collect();
    for g in &g1 {
        let f = g.initial_form(w1).map_err(ProblemError::from)?.with_signature(&gsig);
        for part in f.weight_components(&w2.weight) {
            if !mora_reduces_to_zero(&part, &divisors, &setting)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

struct WeylElementBasis {
    weight: WeightVector,
    initial: Vec<WeylElement>,
}

fn local_initials(problem: &FanProblem, w: &WeightVector) -> Result<WeylElementBasis, LocalError> {
    let g = problem.local_standard_basis(w)?;
    let initial = g.iter().map(|e| e.initial_form(w)).collect::<Result<Vec<_>, _>>().map_err(ProblemError::from)?;
    Ok(WeylElementBasis { weight: w.clone(), initial })
}

/// Equality of the local initial ideals at two parameter points of one stratum,
/// decided by Mora reduction in both directions.
pub fn local_initials_equal(problem: &FanProblem, l1: &[Scalar], l2: &[Scalar]) -> Result<bool, LocalError> {
    let w1 = problem.weight(l1)?;
    let w2 = problem.weight(l2)?;
    if stratum_of(&w1) != stratum_of(&w2) {
        return Err(LocalError::StratumMismatch(fmt_vec(l1), fmt_vec(l2)));
    }
    let b1 = local_initials(problem, &w1)?;
    let b2 = local_initials(problem, &w2)?;
    Ok(initials_contained(problem, &w1, &b2)? && initials_contained(problem, &w2, &b1)?)
}

/// Cones glued by equality of local initial ideals.
#[derive(Clone, Debug)]
pub struct LocalFanClass {
    /// Indices into the enumerated cones.
    pub members: Vec<usize>,
    pub closure: HCone,
    pub stratum: SupportStratum,
    /// Smallest member witness.
    pub witness: Vec<Scalar>,
    /// Dehomogenized standard basis at the witness.
    pub basis: Vec<WeylElement>,
}

fn glue(members: &[&GroebnerCone], witness: &[Scalar]) -> Result<HCone, LocalError> {
    if members.len() == 1 {
        return Ok(members[0].cone.clone());
    }
    let d = members[0].cone.ambient_dim();
    let mut rays: Vec<Vector> = members.iter().flat_map(|c| c.cone.rays().iter().cloned()).collect();
    let lin: Vec<Vector> = members[0].cone.lineality().to_vec();
    rays.sort();
    rays.dedup();
    let hull = HCone::from_rays(d, &rays, &lin);
    for c in members {
        for (f, fc) in c.cone.facets().iter().zip(c.cone.facet_cones()) {
            let p = fc.interior_point();
            let on_hull = hull.facets().iter().any(|h| crate::scalar::dot_int(h, p).is_zero());
            if on_hull {
                continue;
            }
            let key = fc.key();
            let shared = members
                .iter()
                .any(|o| !std::ptr::eq(*o, *c) && o.cone.intersect(&c.cone).map(|x| x.key() == key).unwrap_or(false));
            if !shared {
                return Err(LocalError::NotConvex { witness: fmt_vec(witness), facet: f.clone() });
            }
        }
    }
    Ok(hull)
}

/// Union-find over the cones by equality of local initial ideals at their witnesses.
pub fn merge_classes(problem: &FanProblem, cones: &[GroebnerCone]) -> Result<Vec<LocalFanClass>, LocalError> {
    let strata: Vec<SupportStratum> =
        cones.iter().map(|c| problem.weight(&c.witness).map(|w| stratum_of(&w))).collect::<Result<_, _>>()?;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..cones.len() {
        let hits: Vec<bool> = groups
            .par_iter()
            .map(|g| {
                let r = g[0];
                if strata[r] != strata[i] {
                    return Ok(false);
                }
                local_initials_equal(problem, &cones[r].witness, &cones[i].witness)
            })
            .collect::<Result<_, LocalError>>()?;
        match hits.iter().position(|&h| h) {
            Some(k) => groups[k].push(i),
            None => groups.push(vec![i]),
        }
    }
    let mut classes = Vec::with_capacity(groups.len());
    for members in groups {
        let witness = members.iter().map(|&i| cones[i].witness.clone()).min().unwrap();
        let refs: Vec<&GroebnerCone> = members.iter().map(|&i| &cones[i]).collect();
        let closure = glue(&refs, &witness)?;
        let w = problem.weight(&witness)?;
        let basis = problem.local_standard_basis(&w)?;
        classes.push(LocalFanClass { stratum: strata[members[0]].clone(), members, closure, witness, basis });
    }
    classes.sort_by(|a, b| a.closure.key().cmp(&b.closure.key()));
    Ok(classes)
}

#[derive(Clone, Debug)]
pub struct LocalFan {
    pub classes: Vec<LocalFanClass>,
    /// Closures of the classes and all their faces.
    pub fan: Fan,
}

/// Closed fan of the classes; validated, with each lower cone checked to carry a
/// single local initial ideal on its relative interior.
pub fn assemble_local_fan(problem: &FanProblem, classes: Vec<LocalFanClass>) -> Result<LocalFan, LocalError> {
    let closures: Vec<HCone> = classes.iter().map(|c| c.closure.clone()).collect();
    let fan = Fan::closed(problem.subspace().param_dim(), &closures);
    validate_fan(&fan).map_err(LocalError::Invalid)?;
    let p = problem.subspace().param_dim();
    let lower: Vec<&HCone> = fan.cones.iter().filter(|c| c.dim() < p && !c.rays().is_empty()).collect();
    lower.par_iter().try_for_each(|c| check_lower_face(problem, c))?;
    Ok(LocalFan { classes, fan })
}

fn check_lower_face(problem: &FanProblem, c: &HCone) -> Result<(), LocalError> {
    let centre: Vec<Scalar> = to_scalars(c.interior_point()).into_iter().map(|x| x * int(2)).collect();
    for r in c.rays() {
        let q: Vec<Scalar> = centre.iter().zip(to_scalars(r)).map(|(a, b)| a + b).collect();
        let same = match local_initials_equal(problem, &centre, &q) {
            Ok(b) => b,
            Err(LocalError::StratumMismatch(..)) => false,
            Err(e) => return Err(e),
        };
        if !same {
            return Err(LocalError::LowerFace { rays: c.rays().to_vec() });
        }
    }
    Ok(())
}

/// Enumerate, glue and assemble.
pub fn local_fan(problem: &FanProblem, opts: &EnumerationOptions) -> Result<LocalFan, LocalError> {
    let cones = enumerate(problem, opts)?;
    let classes = merge_classes(problem, &cones)?;
    assemble_local_fan(problem, classes)
}

/// Global fan of the homogenized ideal: enumerated cones without gluing.
pub fn global_fan(problem: &FanProblem, opts: &EnumerationOptions) -> Result<(Vec<GroebnerCone>, Fan), LocalError> {
    let cones = enumerate(problem, opts)?;
    let fan = closed_fan(problem, &cones);
    validate_fan(&fan).map_err(LocalError::Invalid)?;
    Ok((cones, fan))
}

/// The ideal after the coordinate change x -> x + x0.
pub fn translate_base_point(ideal: &Ideal, x0: &[Scalar]) -> Result<Ideal, GroebnerError> {
    Ideal::new(ideal.generators().iter().map(|g| g.shift_x(x0)).collect())
}
