//! A fan problem: an ideal, a homogenization scheme, and a restricted weight space.
//! Provides per-weight orders, reduced bases, Gröbner cones and local standard bases.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thiserror::Error;

use crate::algebra::{AlgebraError, HVar, Homogenization, Kind, RingSignature, WeightVector, WeylElement};
use crate::groebner::{buchberger, initial_ideal, GroebnerError, Ideal, ReducedBasis};
use crate::linalg::rank_int;
use crate::order::{leading_data, MatrixOrder, OrderError};
use crate::polyhedra::HCone;
use crate::scalar::{big, to_scalars, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProblemError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("scheme {scheme} cannot be used here: {reason}")]
    InvalidScheme { scheme: String, reason: String },
    #[error("subspace generators must be {expected}-dimensional and linearly independent")]
    BadSubspace { expected: usize },
    #[error("weight {0} lies outside the region")]
    OutsideRegion(String),
    #[error("no local order exists for this scheme")]
    NoLocalOrder,
}

/// Which closed weight region the fan lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RegionKind {
    /// u <= 0 (and u + v >= 0 for Weyl signatures).
    Local,
    /// u >= 0 for polynomial rings, u + v >= 0 for Weyl signatures.
    Global,
    /// No sign restriction (polynomial rings only).
    Full,
}

impl std::fmt::Display for RegionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RegionKind::Local => "local",
            RegionKind::Global => "global",
            RegionKind::Full => "full",
        })
    }
}

/// How generators of the homogenized ideal are produced for the (0,1)-to-double route.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoubleRoute {
    /// Homogenize a standard basis for the (0,1)-weight order, computed through h11.
    Factor,
    /// Homogenize the given generators.
    Generators,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    /// Polynomial ring, homogenized by h with alpha-degrees.
    Alpha(Vec<u32>),
    /// Weyl algebra, (1,1)-homogenized.
    H11,
    /// Weyl algebra, (0,1)-homogenized then homogenized again by h'.
    DoubleH(DoubleRoute),
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scheme::Alpha(a) => write!(f, "{}", Homogenization::AlphaH(a.clone())),
            Scheme::H11 => f.write_str("h11"),
            Scheme::DoubleH(DoubleRoute::Factor) => f.write_str("double"),
            Scheme::DoubleH(DoubleRoute::Generators) => f.write_str("double(generators)"),
        }
    }
}

impl Scheme {
    /// Default scheme for a ring and region.
    pub fn auto(sig: &RingSignature, region: RegionKind) -> Scheme {
        match (sig.kind(), region) {
            (Kind::Commutative, _) => Scheme::Alpha(vec![1; sig.n()]),
            (Kind::Weyl, RegionKind::Local) => Scheme::DoubleH(DoubleRoute::Factor),
            (Kind::Weyl, _) => Scheme::H11,
        }
    }
}

fn unit(d: usize, i: usize, c: i64) -> Vec<BigInt> {
    let mut e = vec![BigInt::zero(); d];
    e[i] = BigInt::from(c);
    e
}

/// The closed region as a cone in the full weight space.
pub fn region_cone(sig: &RingSignature, region: RegionKind) -> HCone {
    let n = sig.n();
    let d = sig.weight_dim();
    let mut ineqs = Vec::new();
    match (sig.kind(), region) {
        (_, RegionKind::Full) => {}
        (Kind::Commutative, RegionKind::Local) => ineqs.extend((0..n).map(|i| unit(d, i, -1))),
        (Kind::Commutative, RegionKind::Global) => ineqs.extend((0..n).map(|i| unit(d, i, 1))),
        (Kind::Weyl, r) => {
            if r == RegionKind::Local {
                ineqs.extend((0..n).map(|i| unit(d, i, -1)));
            }
            for i in 0..n {
                let mut e = unit(d, i, 1);
                e[n + i] = BigInt::from(1);
                ineqs.push(e);
            }
        }
    }
    HCone::new(d, ineqs, vec![])
}

/// Weights w = W lambda for a full-column-rank matrix W, restricted to a region.
#[derive(Clone, Debug)]
pub struct WeightSubspace {
    ambient: usize,
    generators: Vec<Vec<BigInt>>,
    region_kind: RegionKind,
    region: HCone,
}

impl WeightSubspace {
    /// `generators` are the images of the parameter basis vectors (None: identity).
    pub fn new(sig: &RingSignature, generators: Option<Vec<Vec<BigInt>>>, region: RegionKind) -> Result<Self, ProblemError> {
        let d = sig.weight_dim();
        let generators = generators.unwrap_or_else(|| (0..d).map(|i| unit(d, i, 1)).collect());
        if generators.is_empty()
            || generators.iter().any(|g| g.len() != d)
            || rank_int(&generators, d) != generators.len()
        {
            return Err(ProblemError::BadSubspace { expected: d });
        }
        let amb = region_cone(sig, region);
        let p = generators.len();
        let pb = |a: &Vec<BigInt>| -> Vec<BigInt> { generators.iter().map(|g| crate::scalar::dot_int(a, g)).collect() };
        let region_param = HCone::new(p, amb.inequalities().iter().map(pb).collect(), vec![]);
        Ok(WeightSubspace { ambient: d, generators, region_kind: region, region: region_param })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }
    pub fn param_dim(&self) -> usize {
        self.generators.len()
    }
    pub fn generators(&self) -> &[Vec<BigInt>] {
        &self.generators
    }
    pub fn region_kind(&self) -> RegionKind {
        self.region_kind
    }
    /// The region in parameter space.
    pub fn region(&self) -> &HCone {
        &self.region
    }
    pub fn to_ambient(&self, lambda: &[Scalar]) -> Vec<Scalar> {
        let mut w = vec![Scalar::zero(); self.ambient];
        for (l, g) in lambda.iter().zip(&self.generators) {
            for (x, y) in w.iter_mut().zip(g) {
                *x += l * big(y);
            }
        }
        w
    }
    /// Covector on the ambient space, expressed on parameters.
    pub fn pull_back(&self, a: &[BigInt]) -> Vec<BigInt> {
        self.generators.iter().map(|g| crate::scalar::dot_int(a, g)).collect()
    }
}

/// A Gröbner cone in parameter space, with the data that produced it.
#[derive(Clone, Debug)]
pub struct GroebnerCone {
    pub cone: HCone,
    pub witness: Vec<Scalar>,
    pub basis: Arc<ReducedBasis>,
    pub initial: Vec<WeylElement>,
}

pub struct FanProblem {
    original: Ideal,
    scheme: Scheme,
    subspace: WeightSubspace,
    /// Signature weights refer to: the un-homogenized ring.
    wsig: RingSignature,
    /// Signature of the dehomogenized (local) objects.
    lsig: Arc<RingSignature>,
    homogenized: Ideal,
    cache: Mutex<HashMap<Vec<Scalar>, Arc<ReducedBasis>>>,
}

impl std::fmt::Debug for FanProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FanProblem").field("scheme", &self.scheme).field("ideal", &self.original).finish()
    }
}

fn scheme_error(s: &Scheme, reason: &str) -> ProblemError {
    ProblemError::InvalidScheme { scheme: s.to_string(), reason: reason.into() }
}

/// (0,1)-standard basis of a Weyl ideal computed through the (1,1)-homogenization.
pub fn weight01_standard_basis(ideal: &Ideal) -> Result<Vec<WeylElement>, ProblemError> {
    let sig = ideal.signature();
    let n = sig.n();
    let hsig = Arc::new(sig.with_homogenization(Homogenization::H11)?);
    let gens: Vec<WeylElement> =
        ideal.generators().iter().map(|g| g.homogenize(&Homogenization::H11)).collect::<Result<_, _>>()?;
    let mut beta = vec![0i64; 2 * n];
    for b in beta.iter_mut().skip(n) {
        *b = 1;
    }
    let order = MatrixOrder::degrevlex(2 * n).refine_by_row(beta).lift_to_h(&hsig);
    let basis = buchberger(&Ideal::new(gens)?, &order)?;
    Ok(basis.elements().iter().map(|g| g.dehomogenize(HVar::H)).collect::<Result<_, _>>()?)
}

impl FanProblem {
    pub fn new(original: Ideal, scheme: Scheme, subspace: WeightSubspace) -> Result<Self, ProblemError> {
        let sig = original.signature().clone();
        let n = sig.n();
        let plain = |k: Kind| sig.kind() == k && *sig.homogenization() == Homogenization::None;
        let homogenized: Vec<WeylElement> = match &scheme {
            Scheme::Alpha(a) => {
                if !plain(Kind::Commutative) || a.len() != n {
                    return Err(scheme_error(&scheme, "needs a polynomial ring and one degree per variable"));
                }
                original.generators().iter().map(|g| g.homogenize(&Homogenization::AlphaH(a.clone()))).collect::<Result<_, _>>()?
            }
            Scheme::H11 => {
                if !plain(Kind::Weyl) {
                    return Err(scheme_error(&scheme, "needs a Weyl algebra"));
                }
                original.generators().iter().map(|g| g.homogenize(&Homogenization::H11)).collect::<Result<_, _>>()?
            }
            Scheme::DoubleH(route) => {
                if sig.kind() != Kind::Weyl {
                    return Err(scheme_error(&scheme, "needs a Weyl algebra"));
                }
                let h01: Vec<WeylElement> = match (route, sig.homogenization()) {
                    (DoubleRoute::Factor, Homogenization::None) => weight01_standard_basis(&original)?
                        .iter()
                        .map(|g| g.homogenize(&Homogenization::H01))
                        .collect::<Result<_, _>>()?,
                    (DoubleRoute::Generators, Homogenization::None) => original
                        .generators()
                        .iter()
                        .map(|g| g.homogenize(&Homogenization::H01))
                        .collect::<Result<_, _>>()?,
                    (DoubleRoute::Generators, Homogenization::H01) => original.generators().to_vec(),
                    _ => return Err(scheme_error(&scheme, "input must be in D, or (0,1)-homogenized for the generator route")),
                };
                h01.iter().map(|g| g.homogenize(&Homogenization::DoubleH)).collect::<Result<_, _>>()?
            }
        };
        if sig.is_weyl() && subspace.region_kind() == RegionKind::Full {
            return Err(scheme_error(&scheme, "Weyl weights must satisfy u + v >= 0; use the local or global region"));
        }
        if matches!(scheme, Scheme::DoubleH(_)) && subspace.region_kind() != RegionKind::Local {
            return Err(scheme_error(&scheme, "the doubly homogenized order is defined on the local region"));
        }
        let wsig = RingSignature::new(n, sig.kind(), Homogenization::None)?;
        if subspace.ambient_dim() != wsig.weight_dim() {
            return Err(ProblemError::BadSubspace { expected: wsig.weight_dim() });
        }
        let homogenized = Ideal::new(homogenized)?;
        let lsig = Arc::new(match scheme {
            Scheme::DoubleH(_) => homogenized.signature().with_homogenization(Homogenization::H01)?,
            _ => wsig.clone(),
        });
        Ok(FanProblem { original, scheme, subspace, wsig, lsig, homogenized, cache: Mutex::new(HashMap::new()) })
    }

    pub fn original(&self) -> &Ideal {
        &self.original
    }
    pub fn homogenized(&self) -> &Ideal {
        &self.homogenized
    }
    pub fn scheme(&self) -> &Scheme {
        &self.scheme
    }
    pub fn subspace(&self) -> &WeightSubspace {
        &self.subspace
    }
    pub fn weight_signature(&self) -> &RingSignature {
        &self.wsig
    }
    /// Ring of the dehomogenized standard bases: k[x] or D (alpha, h11) or h01(D) (double).
    pub fn local_signature(&self) -> &Arc<RingSignature> {
        &self.lsig
    }

    pub fn weight(&self, lambda: &[Scalar]) -> Result<WeightVector, ProblemError> {
        Ok(WeightVector::from_flat(&self.wsig, &self.subspace.to_ambient(lambda))?)
    }

    /// Well order on the homogenized lattice refining the weight.
    pub fn order_at(&self, w: &WeightVector) -> Result<MatrixOrder, ProblemError> {
        let hsig = self.homogenized.signature();
        let n = self.wsig.n();
        Ok(match &self.scheme {
            Scheme::Alpha(a) => {
                let base = match self.subspace.region_kind() {
                    RegionKind::Local => MatrixOrder::local_alpha(a),
                    _ => MatrixOrder::degrevlex(n),
                };
                base.refine_by_weight(w, &self.wsig)?.lift_to_h(hsig)
            }
            Scheme::H11 => MatrixOrder::degrevlex(2 * n).refine_by_weight(w, &self.wsig)?.lift_to_h(hsig),
            Scheme::DoubleH(_) => self.local_order_at(w)?.lift_to_h(hsig),
        })
    }

    /// The order of the dehomogenized ring at w (local for the local region).
    pub fn local_order_at(&self, w: &WeightVector) -> Result<MatrixOrder, ProblemError> {
        let n = self.wsig.n();
        match &self.scheme {
            Scheme::Alpha(a) if self.subspace.region_kind() == RegionKind::Local => {
                Ok(MatrixOrder::local_alpha(a).refine_by_weight(w, &self.wsig)?)
            }
            Scheme::DoubleH(_) => {
                let s = &*self.lsig;
                Ok(MatrixOrder::weyl_admissible(n, s.nslots()).refine_by_weight(w, s)?.lift_to_h(s))
            }
            _ => Err(ProblemError::NoLocalOrder),
        }
    }

    /// Slot degrees measuring écart in the dehomogenized ring.
    pub fn ecart_grading(&self) -> Vec<u32> {
        match &self.scheme {
            Scheme::Alpha(a) => a.clone(),
            _ => vec![1; self.lsig.nslots()],
        }
    }

    pub fn basis_at(&self, w: &WeightVector) -> Result<Arc<ReducedBasis>, ProblemError> {
        let key = w.flat();
        if let Some(b) = self.cache.lock().unwrap().get(&key) {
            return Ok(b.clone());
        }
        let b = Arc::new(buchberger(&self.homogenized, &self.order_at(w)?)?);
        self.cache.lock().unwrap().insert(key, b.clone());
        Ok(b)
    }

    /// Dehomogenized reduced basis at w: a standard basis of the ideal for the local order.
    pub fn local_standard_basis(&self, w: &WeightVector) -> Result<Vec<WeylElement>, ProblemError> {
        let var = match self.scheme {
            Scheme::DoubleH(_) => HVar::HPrime,
            _ => HVar::H,
        };
        let b = self.basis_at(w)?;
        let mut out: Vec<WeylElement> = Vec::new();
        for g in b.elements() {
            let d = g.dehomogenize(var)?;
            if !out.contains(&d) {
                out.push(d);
            }
        }
        Ok(out)
    }

    /// Closed Gröbner cone (in parameter space) of the homogenized ideal at lambda.
    pub fn groebner_cone(&self, lambda: &[Scalar]) -> Result<GroebnerCone, ProblemError> {
        if !self.subspace.region().contains(lambda) {
            return Err(ProblemError::OutsideRegion(fmt_vec(lambda)));
        }
        let w = self.weight(lambda)?;
        let basis = self.basis_at(&w)?;
        let d = self.wsig.weight_dim();
        let wflat = w.flat();
        let mut ineqs = Vec::new();
        let mut eqs = Vec::new();
        for g in basis.elements() {
            let lead = leading_data(g, basis.order())?.exp;
            for a in g.terms().keys() {
                if *a == lead {
                    continue;
                }
                let c: Vec<BigInt> =
                    (0..d).map(|i| BigInt::from(i64::from(lead[i]) - i64::from(a[i]))).collect();
                let val = crate::scalar::dot(&to_scalars(&c), &wflat);
                debug_assert!(!val.is_negative(), "leading term must carry the maximal weight");
                let pc = self.subspace.pull_back(&c);
                if val.is_zero() {
                    eqs.push(pc);
                } else {
                    ineqs.push(pc);
                }
            }
        }
        let cone = self.subspace.region().with_constraints(&ineqs, &eqs);
        let initial = initial_ideal(&basis, &w)?;
        let witness = to_scalars(cone.interior_point());
        Ok(GroebnerCone { cone, witness, basis, initial })
    }
}

pub fn fmt_vec(v: &[Scalar]) -> String {
    let s: Vec<String> = v.iter().map(crate::scalar::fmt_scalar).collect();
    format!("({})", s.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn q(x: &[i64]) -> Vec<Scalar> {
        x.iter().map(|&a| int(a)).collect()
    }

    #[test]
    fn cusp_cones() {
        let s = Arc::new(RingSignature::commutative(2));
        let f = &WeylElement::x(&s, 0).pow(3) - &WeylElement::x(&s, 1).pow(2);
        let sub = WeightSubspace::new(&s, None, RegionKind::Local).unwrap();
        let p = FanProblem::new(Ideal::new(vec![f]).unwrap(), Scheme::Alpha(vec![1, 1]), sub).unwrap();
        let c = p.groebner_cone(&q(&[-1, -1])).unwrap();
        let v = |x: &[i64]| x.iter().map(|&a| BigInt::from(a)).collect::<Vec<_>>();
        assert_eq!(c.cone, HCone::from_rays(2, &[v(&[-1, 0]), v(&[-2, -3])], &[]));
        let c2 = p.groebner_cone(&q(&[-1, -2])).unwrap();
        assert_eq!(c2.cone, HCone::from_rays(2, &[v(&[0, -1]), v(&[-2, -3])], &[]));
        let edge = p.groebner_cone(&q(&[-2, -3])).unwrap();
        assert_eq!(edge.cone.dim(), 1);
        assert!(p.groebner_cone(&q(&[1, 0])).is_err());
    }

    #[test]
    fn monomial_ideal_has_one_cone() {
        let s = Arc::new(RingSignature::commutative(2));
        let sub = WeightSubspace::new(&s, None, RegionKind::Local).unwrap();
        let p = FanProblem::new(Ideal::new(vec![WeylElement::x(&s, 0)]).unwrap(), Scheme::Alpha(vec![1, 1]), sub).unwrap();
        let c = p.groebner_cone(&q(&[-1, -1])).unwrap();
        assert_eq!(c.cone, *p.subspace().region());
    }

    #[test]
    fn local_basis_of_border_example() {
        let s = Arc::new(RingSignature::commutative(3));
        let x = |i| WeylElement::x(&s, i);
        let gens = vec![&WeylElement::one(&s) - &x(2), &x(0) + &x(1)];
        let sub = WeightSubspace::new(&s, None, RegionKind::Local).unwrap();
        let p = FanProblem::new(Ideal::new(gens).unwrap(), Scheme::Alpha(vec![1, 1, 1]), sub).unwrap();
        let w = p.weight(&q(&[-1, -2, 0])).unwrap();
        let g = p.local_standard_basis(&w).unwrap();
        assert!(g.iter().any(|e| *e == &WeylElement::one(&s) - &x(2)));
    }

    #[test]
    fn schemes_check_their_ring() {
        let s = Arc::new(RingSignature::commutative(1));
        let sub = WeightSubspace::new(&s, None, RegionKind::Local).unwrap();
        let i = Ideal::new(vec![WeylElement::x(&s, 0)]).unwrap();
        assert!(matches!(FanProblem::new(i, Scheme::H11, sub), Err(ProblemError::InvalidScheme { .. })));
        let bad = WeightSubspace::new(&s, Some(vec![vec![BigInt::from(0)]]), RegionKind::Local);
        assert!(matches!(bad, Err(ProblemError::BadSubspace { .. })));
    }

    #[test]
    fn weight01_basis_for_weyl() {
        let d = Arc::new(RingSignature::weyl(1));
        let x = WeylElement::x(&d, 0);
        let dx = WeylElement::d(&d, 0);
        let ideal = Ideal::new(vec![&(&x * &dx) - &x.pow(2)]).unwrap();
        let g = weight01_standard_basis(&ideal).unwrap();
        assert_eq!(g.len(), 1);
        let sub = WeightSubspace::new(&d, None, RegionKind::Local).unwrap();
        let p = FanProblem::new(ideal, Scheme::DoubleH(DoubleRoute::Factor), sub).unwrap();
        assert_eq!(p.homogenized().signature().nslots(), 4);
        let c = p.groebner_cone(&q(&[-1, 2])).unwrap();
        assert_eq!(c.cone.dim(), 2);
    }
}
