//! Exact rational polyhedral cones, Newton polyhedra and fans.

use std::collections::{BTreeMap, BTreeSet, HashSet, VecDeque};
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{Exp, WeylElement};
use crate::linalg::{canonical_row_basis, nullspace_int, project_onto_span, rank_int};
use crate::scalar::{dot_int, primitive, primitive_int, to_scalars, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyhedraError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("weight lies outside the dual of the recession cone")]
    OutsideRegion,
    #[error("Newton polyhedron of the zero element")]
    Zero,
}

type Vector = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn contains_all(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

fn neg(v: &Vector) -> Vector {
    v.iter().map(|x| -x).collect()
}

fn combine(a: &BigInt, u: &Vector, b: &BigInt, v: &Vector) -> Vector {
    primitive_int(&u.iter().zip(v).map(|(x, y)| a * x + b * y).collect::<Vec<_>>())
}

/// Lineality basis and extreme rays of {x : eqs x = 0, ineqs x >= 0}.
fn double_description(d: usize, eqs: &[Vector], ineqs: &[Vector]) -> (Vec<Vector>, Vec<Vector>) {
    let mut lin: Vec<Vector> = nullspace_int(eqs, d);
    let mut rays: Vec<(Vector, Bits)> = Vec::new();
    let m = ineqs.len();
    for (k, a) in ineqs.iter().enumerate() {
        if let Some(pos) = lin.iter().position(|l| !dot_int(a, l).is_zero()) {
            let mut ls = lin.remove(pos);
            let mut al = dot_int(a, &ls);
            if al.is_negative() {
                ls = neg(&ls);
                al = -al;
            }
            for l in lin.iter_mut() {
                let c = dot_int(a, l);
                if !c.is_zero() {
                    *l = combine(&al, l, &-c, &ls);
                }
            }
            for (r, z) in rays.iter_mut() {
                let c = dot_int(a, r);
                if !c.is_zero() {
                    *r = combine(&al, r, &-c, &ls);
                }
                z.set(k);
            }
            let mut z = Bits::new(m);
            for j in 0..k {
                z.set(j);
            }
            rays.push((ls, z));
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|(r, _)| dot_int(a, r)).collect();
        let mut next: Vec<(Vector, Bits)> = Vec::new();
        for (i, (r, z)) in rays.iter().enumerate() {
            if !vals[i].is_negative() {
                let mut z = z.clone();
                if vals[i].is_zero() {
                    z.set(k);
                }
                next.push((r.clone(), z));
            }
        }
        for (p, (rp, zp)) in rays.iter().enumerate() {
            if !vals[p].is_positive() {
                continue;
            }
            for (q, (rq, zq)) in rays.iter().enumerate() {
                if !vals[q].is_negative() {
                    continue;
                }
                let common = zp.and(zq);
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(t, (_, zt))| t == p || t == q || !zt.contains_all(&common));
                if adjacent {
                    let mut z = common;
                    z.set(k);
                    next.push((combine(&vals[p], rq, &-&vals[q], rp), z));
                }
            }
        }
        rays = next;
    }
    (lin, rays.into_iter().map(|(r, _)| r).collect())
}

/// Canonical data of a cone. Two cones are equal iff `equations` and `facets` agree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub dim: usize,
    /// Reduced echelon basis of the orthogonal complement of the linear span.
    pub equations: Vec<Vector>,
    /// Primitive inward normals lying in the linear span, sorted.
    pub facets: Vec<Vector>,
    pub lineality: Vec<Vector>,
    /// Extreme rays modulo lineality, orthogonal to it, sorted.
    pub rays: Vec<Vector>,
    /// Indices of the rays on each facet.
    pub facet_rays: Vec<Vec<usize>>,
    /// Sum of the rays: a relative-interior point (the origin for linear spaces).
    pub interior: Vector,
}

pub type ConeKey = (Vec<Vector>, Vec<Vector>);

#[derive(Clone, Debug)]
pub struct HCone {
    ambient: usize,
    ineqs: Vec<Vector>,
    eqs: Vec<Vector>,
    canon: OnceLock<Arc<Canonical>>,
}

impl PartialEq for HCone {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.key() == other.key()
    }
}
impl Eq for HCone {}

fn clean(rows: &[Vector]) -> Vec<Vector> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for r in rows {
        let p = primitive_int(r);
        if p.iter().all(|x| x.is_zero()) {
            continue;
        }
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    out
}

impl HCone {
    /// {x : ineqs x >= 0, eqs x = 0}.
    pub fn new(ambient: usize, ineqs: Vec<Vector>, eqs: Vec<Vector>) -> Self {
        assert!(ineqs.iter().chain(&eqs).all(|r| r.len() == ambient), "constraint arity");
        HCone { ambient, ineqs: clean(&ineqs), eqs: clean(&eqs), canon: OnceLock::new() }
    }

    pub fn from_rational(ambient: usize, ineqs: &[Vec<Scalar>], eqs: &[Vec<Scalar>]) -> Self {
        Self::new(ambient, ineqs.iter().map(|r| primitive(r)).collect(), eqs.iter().map(|r| primitive(r)).collect())
    }

    pub fn whole_space(ambient: usize) -> Self {
        Self::new(ambient, vec![], vec![])
    }

    /// Cone generated by `rays` plus the linear span of `lineality`.
    pub fn from_rays(ambient: usize, rays: &[Vector], lineality: &[Vector]) -> Self {
        let dual = HCone::new(ambient, rays.to_vec(), lineality.to_vec());
        let dc = dual.canonical();
        HCone::new(ambient, dc.rays.clone(), dc.lineality.clone())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn inequalities(&self) -> &[Vector] {
        &self.ineqs
    }
    pub fn equations_raw(&self) -> &[Vector] {
        &self.eqs
    }

    pub fn canonical(&self) -> &Canonical {
        self.canon.get_or_init(|| Arc::new(canonicalize(self.ambient, &self.eqs, &self.ineqs)))
    }

    pub fn dim(&self) -> usize {
        self.canonical().dim
    }
    pub fn facets(&self) -> &[Vector] {
        &self.canonical().facets
    }
    pub fn equations(&self) -> &[Vector] {
        &self.canonical().equations
    }
    pub fn rays(&self) -> &[Vector] {
        &self.canonical().rays
    }
    pub fn lineality(&self) -> &[Vector] {
        &self.canonical().lineality
    }
    pub fn interior_point(&self) -> &[BigInt] {
        &self.canonical().interior
    }
    pub fn key(&self) -> ConeKey {
        let c = self.canonical();
        (c.equations.clone(), c.facets.clone())
    }
    pub fn is_pointed(&self) -> bool {
        self.lineality().is_empty()
    }

    pub fn contains(&self, p: &[Scalar]) -> bool {
        let q = to_scalars;
        self.equations().iter().all(|e| crate::scalar::dot(&q(e), p).is_zero())
            && self.facets().iter().all(|f| !crate::scalar::dot(&q(f), p).is_negative())
    }

    pub fn contains_int(&self, p: &[BigInt]) -> bool {
        self.contains(&to_scalars(p))
    }

    pub fn in_relative_interior(&self, p: &[Scalar]) -> bool {
        let q = to_scalars;
        self.equations().iter().all(|e| crate::scalar::dot(&q(e), p).is_zero())
            && self.facets().iter().all(|f| crate::scalar::dot(&q(f), p).is_positive())
    }

    /// The cone cut out by canonical constraints (cheaper to combine).
    pub fn canonical_cone(&self) -> HCone {
        let c = self.canonical();
        let out = HCone::new(self.ambient, c.facets.clone(), c.equations.clone());
        let _ = out.canon.set(self.canon.get().unwrap().clone());
        out
    }

    pub fn intersect(&self, other: &HCone) -> Result<HCone, PolyhedraError> {
        if self.ambient != other.ambient {
            return Err(PolyhedraError::DimensionMismatch(self.ambient, other.ambient));
        }
        let mut ineqs = self.facets().to_vec();
        ineqs.extend(other.facets().iter().cloned());
        let mut eqs = self.equations().to_vec();
        eqs.extend(other.equations().iter().cloned());
        Ok(HCone::new(self.ambient, ineqs, eqs))
    }

    pub fn with_constraints(&self, ineqs: &[Vector], eqs: &[Vector]) -> HCone {
        let mut i = self.facets().to_vec();
        i.extend(ineqs.iter().cloned());
        let mut e = self.equations().to_vec();
        e.extend(eqs.iter().cloned());
        HCone::new(self.ambient, i, e)
    }

    /// All faces, including the cone itself and its lineality space.
    pub fn faces(&self) -> Vec<HCone> {
        let c = self.canonical();
        let all: Vec<usize> = (0..c.rays.len()).collect();
        let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
        let mut queue = VecDeque::from([all.clone()]);
        seen.insert(all);
        let mut out = Vec::new();
        while let Some(s) = queue.pop_front() {
            let tight: Vec<Vector> = c
                .facet_rays
                .iter()
                .zip(&c.facets)
                .filter(|(fr, _)| s.iter().all(|r| fr.contains(r)))
                .map(|(_, f)| f.clone())
                .collect();
            let mut eqs = c.equations.clone();
            eqs.extend(tight);
            out.push(HCone::new(self.ambient, c.facets.clone(), eqs));
            for fr in &c.facet_rays {
                let t: Vec<usize> = s.iter().copied().filter(|r| fr.contains(r)).collect();
                if t.len() < s.len() && seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
        }
        out
    }

    pub fn is_face_of(&self, c: &HCone) -> bool {
        let k = self.key();
        self.ambient == c.ambient && c.faces().iter().any(|f| f.key() == k)
    }

    /// Faces of codimension one.
    pub fn facet_cones(&self) -> Vec<HCone> {
        let c = self.canonical();
        c.facets
            .iter()
            .map(|f| {
                let mut eqs = c.equations.clone();
                eqs.push(f.clone());
                HCone::new(self.ambient, c.facets.clone(), eqs)
            })
            .collect()
    }

    /// The cone {y : W y in self} for the ambient-by-parameter matrix W.
    pub fn pullback(&self, w: &[Vector], param_dim: usize) -> HCone {
        let pb = |a: &Vector| -> Vector { (0..param_dim).map(|j| (0..self.ambient).map(|i| &a[i] * &w[i][j]).sum()).collect() };
        HCone::new(param_dim, self.ineqs.iter().map(pb).collect(), self.eqs.iter().map(pb).collect())
    }
}

fn canonicalize(d: usize, eqs: &[Vector], ineqs: &[Vector]) -> Canonical {
    let (lin, raw_rays) = double_description(d, eqs, ineqs);
    let lineality = canonical_row_basis(&lin, d);
    let lin_q: Vec<Vec<Scalar>> = lineality.iter().map(|l| to_scalars(l)).collect();
    let mut rays: Vec<Vector> = raw_rays
        .iter()
        .map(|r| {
            let rq = to_scalars(r);
            let p = project_onto_span(&rq, &lin_q, d);
            primitive(&rq.iter().zip(&p).map(|(a, b)| a - b).collect::<Vec<_>>())
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect();
    rays.sort();
    rays.dedup();
    let mut span_rows = lineality.clone();
    span_rows.extend(rays.iter().cloned());
    let dim = rank_int(&span_rows, d);
    let equations = canonical_row_basis(&nullspace_int(&span_rows, d), d);
    let span_q: Vec<Vec<Scalar>> = span_rows.iter().map(|r| to_scalars(r)).collect();
    let mut facet_map: BTreeMap<Vector, Vec<usize>> = BTreeMap::new();
    for a in ineqs {
        let vals: Vec<BigInt> = rays.iter().map(|r| dot_int(a, r)).collect();
        if vals.iter().all(|v| v.is_zero()) {
            continue;
        }
        let tight: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_zero()).collect();
        let mut rows = lineality.clone();
        rows.extend(tight.iter().map(|&i| rays[i].clone()));
        if rank_int(&rows, d) + 1 != dim {
            continue;
        }
        let proj = primitive(&project_onto_span(&to_scalars(a), &span_q, d));
        facet_map.entry(proj).or_insert(tight);
    }
    let (facets, facet_rays): (Vec<Vector>, Vec<Vec<usize>>) = facet_map.into_iter().unzip();
    let mut interior = vec![BigInt::zero(); d];
    for r in &rays {
        for (x, y) in interior.iter_mut().zip(r) {
            *x += y;
        }
    }
    Canonical { dim, equations, facets, lineality, rays, facet_rays, interior }
}

/// A finite collection of closed cones.
#[derive(Clone, Debug, Default)]
pub struct Fan {
    pub ambient: usize,
    pub cones: Vec<HCone>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FanViolation {
    MissingFace { cone: usize },
    BadIntersection { a: usize, b: usize },
    Duplicate { a: usize, b: usize },
    DimensionMismatch { cone: usize },
}

impl std::fmt::Display for FanViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FanViolation::MissingFace { cone } => write!(f, "a face of cone {cone} is not in the fan"),
            FanViolation::BadIntersection { a, b } => {
                write!(f, "the intersection of cones {a} and {b} is not a face of both")
            }
            FanViolation::Duplicate { a, b } => write!(f, "cones {a} and {b} coincide"),
            FanViolation::DimensionMismatch { cone } => write!(f, "cone {cone} has the wrong ambient dimension"),
        }
    }
}

impl Fan {
    pub fn new(ambient: usize, cones: Vec<HCone>) -> Self {
        Fan { ambient, cones }
    }

    /// Add all faces of all cones, drop duplicates, sort by (dim desc, key).
    pub fn closed(ambient: usize, cones: &[HCone]) -> Self {
        let mut seen: HashSet<ConeKey> = HashSet::new();
        let mut out = Vec::new();
        for c in cones {
            for f in c.faces() {
                if seen.insert(f.key()) {
                    out.push(f);
                }
            }
        }
        out.sort_by(|a, b| b.dim().cmp(&a.dim()).then_with(|| a.key().cmp(&b.key())));
        Fan { ambient, cones: out }
    }

    pub fn maximal(&self) -> Vec<usize> {
        (0..self.cones.len())
            .filter(|&i| {
                !self.cones.iter().enumerate().any(|(j, c)| {
                    j != i && c.dim() > self.cones[i].dim() && self.cones[i].is_face_of(c)
                })
            })
            .collect()
    }

    pub fn count_by_dim(&self) -> BTreeMap<usize, usize> {
        let mut m = BTreeMap::new();
        for c in &self.cones {
            *m.entry(c.dim()).or_insert(0) += 1;
        }
        m
    }

    /// Proper face-of pairs (i, j): cone i is a face of cone j.
    pub fn incidence(&self) -> Vec<(usize, usize)> {
        let index: BTreeMap<ConeKey, usize> = self.cones.iter().enumerate().map(|(i, c)| (c.key(), i)).collect();
        let mut out = Vec::new();
        for (j, c) in self.cones.iter().enumerate() {
            for f in c.faces() {
                if let Some(&i) = index.get(&f.key()) {
                    if i != j {
                        out.push((i, j));
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Check both fan axioms; returns the first violation found.
pub fn validate_fan(fan: &Fan) -> Result<(), FanViolation> {
    let mut keys: BTreeMap<ConeKey, usize> = BTreeMap::new();
    for (i, c) in fan.cones.iter().enumerate() {
        if c.ambient_dim() != fan.ambient {
            return Err(FanViolation::DimensionMismatch { cone: i });
        }
        if let Some(&j) = keys.get(&c.key()) {
            return Err(FanViolation::Duplicate { a: j, b: i });
        }
        keys.insert(c.key(), i);
    }
    for (i, c) in fan.cones.iter().enumerate() {
        if c.faces().iter().any(|f| !keys.contains_key(&f.key())) {
            return Err(FanViolation::MissingFace { cone: i });
        }
    }
    // With axiom 1 in place, checking inclusion-maximal cones suffices.
    let maximal: Vec<usize> = (0..fan.cones.len())
        .filter(|&i| {
            !fan.cones.iter().enumerate().any(|(j, c)| j != i && c.dim() > fan.cones[i].dim() && fan.cones[i].is_face_of(c))
        })
        .collect();
    for (x, &i) in maximal.iter().enumerate() {
        for &j in &maximal[x + 1..] {
            let (a, b) = (&fan.cones[i], &fan.cones[j]);
            let m = a.intersect(b).map_err(|_| FanViolation::DimensionMismatch { cone: j })?;
            if !(m.is_face_of(a) && m.is_face_of(b)) {
                return Err(FanViolation::BadIntersection { a: i, b: j });
            }
        }
    }
    Ok(())
}

/// Which recession cone a Newton polyhedron carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Recession {
    /// The nonnegative orthant; dual to Uloc.
    PositiveOrthant,
    /// Generated by e_i on the x-block and -e_i - e_{n+i}; dual to Wloc.
    WlocStar,
}

/// conv(points) + recession cone, with the point set kept minimal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPolyhedron {
    dim: usize,
    recession: Recession,
    points: Vec<Vec<i64>>,
}

fn rec_generators(dim: usize, rec: Recession) -> Vec<Vec<i64>> {
    match rec {
        Recession::PositiveOrthant => (0..dim)
            .map(|i| {
                let mut e = vec![0; dim];
                e[i] = 1;
                e
            })
            .collect(),
        Recession::WlocStar => {
            let n = dim / 2;
            let mut g = Vec::new();
            for i in 0..n {
                let mut e = vec![0; dim];
                e[i] = 1;
                g.push(e);
            }
            for i in 0..n {
                let mut e = vec![0; dim];
                e[i] = -1;
                e[n + i] = -1;
                g.push(e);
            }
            g
        }
    }
}

/// p in q + recession cone.
fn dominated(p: &[i64], q: &[i64], rec: Recession) -> bool {
    match rec {
        Recession::PositiveOrthant => p.iter().zip(q).all(|(a, b)| a >= b),
        Recession::WlocStar => {
            let n = p.len() / 2;
            (0..n).all(|i| {
                let dx = p[i] - q[i];
                let dd = p[n + i] - q[n + i];
                dd <= 0 && dx - dd >= 0
            })
        }
    }
}

fn minimize(points: Vec<Vec<i64>>, rec: Recession) -> Vec<Vec<i64>> {
    let pts: Vec<Vec<i64>> = points.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
    let mut keep = Vec::new();
    for (i, p) in pts.iter().enumerate() {
        if !pts.iter().enumerate().any(|(j, q)| j != i && dominated(p, q, rec)) {
            keep.push(p.clone());
        }
    }
    keep
}

fn dot_i(a: &[Scalar], p: &[i64]) -> Scalar {
    a.iter().zip(p).fold(Scalar::zero(), |acc, (x, &y)| acc + x * Scalar::from_integer(BigInt::from(y)))
}

/// A face of a Newton polyhedron: conv(points) + cone(recession directions).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolyFace {
    pub points: Vec<Vec<i64>>,
    pub recession: Vec<Vec<i64>>,
}

impl RationalPolyhedron {
    pub fn new(dim: usize, points: Vec<Vec<i64>>, recession: Recession) -> Self {
        assert!(points.iter().all(|p| p.len() == dim), "point arity");
        RationalPolyhedron { dim, recession, points: minimize(points, recession) }
    }
    pub fn points(&self) -> &[Vec<i64>] {
        &self.points
    }
    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn recession(&self) -> Recession {
        self.recession
    }
    pub fn recession_generators(&self) -> Vec<Vec<i64>> {
        rec_generators(self.dim, self.recession)
    }

    pub fn face_of(&self, w: &[Scalar]) -> Result<PolyFace, PolyhedraError> {
        if w.len() != self.dim {
            return Err(PolyhedraError::DimensionMismatch(w.len(), self.dim));
        }
        let mut recession = Vec::new();
        for r in self.recession_generators() {
            let v = dot_i(w, &r);
            if v.is_positive() {
                return Err(PolyhedraError::OutsideRegion);
            }
            if v.is_zero() {
                recession.push(r);
            }
        }
        let vals: Vec<Scalar> = self.points.iter().map(|p| dot_i(w, p)).collect();
        let m = vals.iter().max().cloned().unwrap_or_else(Scalar::zero);
        let points = self.points.iter().zip(&vals).filter(|(_, v)| **v == m).map(|(p, _)| p.clone()).collect();
        Ok(PolyFace { points, recession })
    }

    /// Closed normal cone of face_w within `region`.
    pub fn normal_cone(&self, w: &[Scalar], region: &HCone) -> Result<HCone, PolyhedraError> {
        if region.ambient_dim() != self.dim {
            return Err(PolyhedraError::DimensionMismatch(region.ambient_dim(), self.dim));
        }
        if !region.contains(w) {
            return Err(PolyhedraError::OutsideRegion);
        }
        let face = self.face_of(w)?;
        let big = |v: Vec<i64>| -> Vector { v.into_iter().map(BigInt::from).collect() };
        let e0 = &face.points[0];
        let diff = |a: &[i64], b: &[i64]| -> Vec<i64> { a.iter().zip(b).map(|(x, y)| x - y).collect() };
        let mut eqs: Vec<Vector> = face.points[1..].iter().map(|e| big(diff(e, e0))).collect();
        let mut ineqs: Vec<Vector> =
            self.points.iter().filter(|p| !face.points.contains(p)).map(|a| big(diff(e0, a))).collect();
        for r in self.recession_generators() {
            if face.recession.contains(&r) {
                eqs.push(big(r));
            } else {
                ineqs.push(big(r.iter().map(|x| -x).collect()));
            }
        }
        Ok(region.with_constraints(&ineqs, &eqs))
    }

    pub fn minkowski_sum(&self, other: &RationalPolyhedron) -> Result<RationalPolyhedron, PolyhedraError> {
        if self.dim != other.dim || self.recession != other.recession {
            return Err(PolyhedraError::DimensionMismatch(self.dim, other.dim));
        }
        let mut pts = Vec::new();
        for a in &self.points {
            for b in &other.points {
                pts.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        Ok(RationalPolyhedron::new(self.dim, pts, self.recession))
    }
}

/// Newton polyhedron of g over its x (and derivation) slots; h slots are dropped.
pub fn newton_polyhedron(g: &WeylElement, recession: Recession) -> Result<RationalPolyhedron, PolyhedraError> {
    if g.is_zero() {
        return Err(PolyhedraError::Zero);
    }
    let d = g.signature().weight_dim();
    let pts: Vec<Vec<i64>> = g.terms().keys().map(|e: &Exp| e[..d].iter().map(|&k| i64::from(k)).collect()).collect();
    Ok(RationalPolyhedron::new(d, pts, recession))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::RingSignature;
    use crate::scalar::int;

    fn v(x: &[i64]) -> Vector {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }
    fn q(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&a| int(a)).collect()
    }
    fn uloc(n: usize) -> HCone {
        HCone::new(n, (0..n).map(|i| { let mut e = vec![BigInt::zero(); n]; e[i] = BigInt::from(-1); e }).collect(), vec![])
    }

    #[test]
    fn uloc_canonical() {
        let c = uloc(2);
        assert_eq!(c.dim(), 2);
        assert_eq!(c.facets(), &[v(&[-1, 0]), v(&[0, -1])]);
        assert_eq!(c.rays(), &[v(&[-1, 0]), v(&[0, -1])]);
        assert_eq!(c.interior_point(), v(&[-1, -1]).as_slice());
        assert!(c.is_pointed());
    }

    #[test]
    fn degenerate_inequalities_collapse() {
        let c = HCone::new(2, vec![v(&[1, 0]), v(&[-1, 0])], vec![]);
        assert_eq!(c.dim(), 1);
        assert_eq!(c.equations(), &[v(&[1, 0])]);
        assert!(c.facets().is_empty());
        assert_eq!(c.lineality(), &[v(&[0, 1])]);
        let half = HCone::new(2, vec![v(&[1, 0])], vec![]);
        assert_eq!(half.lineality(), &[v(&[0, 1])]);
        assert_eq!(half.rays(), &[v(&[1, 0])]);
    }

    #[test]
    fn sigma_one_from_rays() {
        let s1 = HCone::from_rays(2, &[v(&[-1, 0]), v(&[-2, -3])], &[]);
        assert_eq!(s1.dim(), 2);
        assert_eq!(s1.facets(), &[v(&[-3, 2]), v(&[0, -1])]);
        let s2 = HCone::from_rays(2, &[v(&[0, -1]), v(&[-2, -3])], &[]);
        let m = s1.intersect(&s2).unwrap();
        assert_eq!(m.dim(), 1);
        assert_eq!(m.rays(), &[v(&[-2, -3])]);
        assert_eq!(s1.intersect(&s1).unwrap(), s1);
        assert_eq!(s1.faces().len(), 4);
        assert!(m.is_face_of(&s1) && m.is_face_of(&s2));
    }

    #[test]
    fn round_trip_in_three_dimensions() {
        let c = HCone::new(3, vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1]), v(&[1, 1, -1])], vec![]);
        let back = HCone::from_rays(3, c.rays(), c.lineality());
        assert_eq!(back, c);
        assert_eq!(c.rays().len(), 4);
        assert_eq!(c.faces().len(), 1 + 4 + 4 + 1);
    }

    #[test]
    fn newton_examples() {
        let s = Arc::new(RingSignature::commutative(2));
        let x = WeylElement::x(&s, 0);
        let y = WeylElement::x(&s, 1);
        let f = &x.pow(3) - &y.pow(2);
        let p = newton_polyhedron(&f, Recession::PositiveOrthant).unwrap();
        assert_eq!(p.points(), &[vec![0, 2], vec![3, 0]]);
        let g = &(&x + &(&x.pow(2) * &y)) + &(&x * &y.pow(2));
        assert_eq!(newton_polyhedron(&g, Recession::PositiveOrthant).unwrap().points(), &[vec![1, 0]]);
        let face = p.face_of(&q(&[-2, -3])).unwrap();
        assert_eq!(face.points.len(), 2);
        let face = p.face_of(&q(&[-1, 0])).unwrap();
        assert_eq!(face, PolyFace { points: vec![vec![0, 2]], recession: vec![vec![0, 1]] });
        assert_eq!(p.face_of(&q(&[0, 0])).unwrap().points.len(), 2);
        assert_eq!(p.face_of(&q(&[1, 0])), Err(PolyhedraError::OutsideRegion));
    }

    #[test]
    fn normal_cones_of_cusp() {
        let s = Arc::new(RingSignature::commutative(2));
        let f = &WeylElement::x(&s, 0).pow(3) - &WeylElement::x(&s, 1).pow(2);
        let p = newton_polyhedron(&f, Recession::PositiveOrthant).unwrap();
        let r = uloc(2);
        let tau2 = p.normal_cone(&q(&[-2, -3]), &r).unwrap();
        assert_eq!(tau2.dim(), 1);
        assert_eq!(tau2.rays(), &[v(&[-2, -3])]);
        let sigma1 = p.normal_cone(&q(&[-1, -1]), &r).unwrap();
        assert_eq!(sigma1, HCone::from_rays(2, &[v(&[-1, 0]), v(&[-2, -3])], &[]));
        let sigma2 = p.normal_cone(&q(&[-1, -2]), &r).unwrap();
        assert_eq!(sigma2, HCone::from_rays(2, &[v(&[0, -1]), v(&[-2, -3])], &[]));
        assert!(sigma1.in_relative_interior(&q(&[-1, -1])));
        let sum = p.minkowski_sum(&p).unwrap();
        for w in [[-1, -1], [-1, -2], [-2, -3], [-5, -1], [0, -1]] {
            assert_eq!(sum.normal_cone(&q(&w), &r).unwrap(), p.normal_cone(&q(&w), &r).unwrap());
        }
        let origin = RationalPolyhedron::new(2, vec![vec![0, 0]], Recession::PositiveOrthant);
        assert_eq!(p.minkowski_sum(&origin).unwrap(), p);
    }

    #[test]
    fn wloc_star_dominance() {
        // (0,0) = (1,1) + e'_1, while (1,0) = (0,0) + e_1.
        let p = RationalPolyhedron::new(2, vec![vec![1, 1], vec![0, 0]], Recession::WlocStar);
        assert_eq!(p.points(), &[vec![1, 1]]);
        let p = RationalPolyhedron::new(2, vec![vec![1, 0], vec![0, 0]], Recession::WlocStar);
        assert_eq!(p.points(), &[vec![0, 0]]);
    }

    #[test]
    fn fan_validation() {
        let s1 = HCone::from_rays(2, &[v(&[-1, 0]), v(&[-2, -3])], &[]);
        let s2 = HCone::from_rays(2, &[v(&[0, -1]), v(&[-2, -3])], &[]);
        let fan = Fan::closed(2, &[s1.clone(), s2.clone()]);
        assert_eq!(fan.cones.len(), 6);
        assert_eq!(validate_fan(&fan), Ok(()));
        assert_eq!(fan.maximal().len(), 2);
        let missing = Fan::new(2, vec![s1.clone(), s2.clone()]);
        assert!(matches!(validate_fan(&missing), Err(FanViolation::MissingFace { .. })));
        let overlap = HCone::from_rays(2, &[v(&[-1, 0]), v(&[-1, -3])], &[]);
        let bad = Fan::closed(2, &[s1, overlap]);
        assert!(matches!(validate_fan(&bad), Err(FanViolation::BadIntersection { .. })));
    }
}
