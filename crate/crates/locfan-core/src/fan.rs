//! Enumeration of the maximal Gröbner cones of a homogenized ideal by facet flipping.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use crate::polyhedra::{ConeKey, Fan, HCone};
use crate::problem::{fmt_vec, FanProblem, GroebnerCone, ProblemError};
use crate::scalar::{frac, int, to_scalars, Scalar};

type Vector = Vec<BigInt>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FanError {
    #[error(transparent)]
    Problem(#[from] ProblemError),
    #[error("the region is not full-dimensional in parameter space")]
    RegionNotFullDimensional,
    #[error("no full-dimensional starting cone after {0} sample points")]
    NoStartingCone(usize),
    #[error("facet {0:?} lies on the border of the region")]
    FacetOnBorder(Vector),
    #[error("flip across facet {facet:?} of the cone at {witness} failed after {halvings} halvings")]
    FlipFailed { facet: Vector, witness: String, halvings: u32 },
}

#[derive(Clone, Debug)]
pub struct EnumerationOptions {
    /// Sample points tried when looking for a full-dimensional start.
    pub start_budget: usize,
    /// Halvings of the perturbation before a flip is declared failed.
    pub max_halvings: u32,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        EnumerationOptions { start_budget: 64, max_halvings: 64 }
    }
}

/// Lineality space of a cone and the pointed cone obtained by intersecting with its orthogonal complement.
pub fn lineality_quotient(c: &HCone) -> (Vec<Vector>, HCone) {
    let lin = c.lineality().to_vec();
    let q = c.with_constraints(&[], &lin);
    (lin, q)
}

/// Does the facet cone lie in the boundary of the region?
pub fn on_border(region: &HCone, facet: &HCone) -> bool {
    let p = facet.interior_point();
    region.facets().iter().any(|r| crate::scalar::dot_int(r, p).is_zero())
}

fn primes(count: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(count);
    let mut k = 2i64;
    while out.len() < count {
        if out.iter().take_while(|&&p| p * p <= k).all(|&p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

/// Deterministic interior sample points of the parameter region.
pub fn sample_points(region: &HCone, count: usize) -> Vec<Vec<Scalar>> {
    let p = region.ambient_dim();
    let base = to_scalars(region.interior_point());
    let pr = primes(count + p + 1);
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut scale = Scalar::one();
        for _ in 0..64 {
            let lam: Vec<Scalar> = (0..p)
                .map(|i| {
                    let s = if (i + k) % 2 == 0 { 1 } else { -1 };
                    &base[i] + &scale * frac(s, pr[k + i])
                })
                .collect();
            if region.in_relative_interior(&lam) {
                out.push(lam);
                break;
            }
            scale /= int(2);
        }
    }
    out
}

/// A full-dimensional Gröbner cone in the region.
pub fn starting_cone(problem: &FanProblem, opts: &EnumerationOptions) -> Result<GroebnerCone, FanError> {
    let region = problem.subspace().region();
    let p = region.ambient_dim();
    if region.dim() != p {
        return Err(FanError::RegionNotFullDimensional);
    }
    for lam in sample_points(region, opts.start_budget) {
        let c = problem.groebner_cone(&lam)?;
        if c.cone.dim() == p {
            return Ok(c);
        }
    }
    Err(FanError::NoStartingCone(opts.start_budget))
}

/// The maximal cone on the other side of the `index`-th facet.
pub fn flip(problem: &FanProblem, cone: &GroebnerCone, index: usize, opts: &EnumerationOptions) -> Result<GroebnerCone, FanError> {
    let region = problem.subspace().region();
    let p = region.ambient_dim();
    let normal = cone.cone.facets()[index].clone();
    let facet = cone.cone.facet_cones().swap_remove(index);
    if on_border(region, &facet) {
        return Err(FanError::FacetOnBorder(normal));
    }
    let fkey = facet.key();
    let base = to_scalars(facet.interior_point());
    let a = to_scalars(&normal);
    let mut eps = Scalar::one();
    for _ in 0..=opts.max_halvings {
        let lam: Vec<Scalar> = base.iter().zip(&a).map(|(b, x)| b - &eps * x).collect();
        if region.contains(&lam) {
            let next = problem.groebner_cone(&lam)?;
            if next.cone.dim() == p && cone.cone.intersect(&next.cone).map(|c| c.key() == fkey).unwrap_or(false) {
                return Ok(next);
            }
        }
        eps /= int(2);
    }
    Err(FanError::FlipFailed { facet: normal, witness: fmt_vec(&cone.witness), halvings: opts.max_halvings })
}

fn neg(v: &Vector) -> Vector {
    v.iter().map(|x| -x).collect()
}

/// All maximal Gröbner cones of the problem, sorted by canonical key.
pub fn enumerate(problem: &FanProblem, opts: &EnumerationOptions) -> Result<Vec<GroebnerCone>, FanError> {
    let region = problem.subspace().region();
    let start = starting_cone(problem, opts)?;
    let mut found: BTreeMap<ConeKey, GroebnerCone> = BTreeMap::new();
    let mut done: BTreeSet<(ConeKey, Vector)> = BTreeSet::new();
    let mut frontier = vec![start.cone.key()];
    found.insert(start.cone.key(), start);
    while !frontier.is_empty() {
        let mut tasks = Vec::new();
        for key in &frontier {
            let c = &found[key];
            for (i, (f, fc)) in c.cone.facets().iter().zip(c.cone.facet_cones()).enumerate() {
                if !done.contains(&(key.clone(), f.clone())) && !on_border(region, &fc) {
                    tasks.push((key.clone(), i));
                }
            }
        }
        let results: Vec<Result<GroebnerCone, FanError>> =
            tasks.par_iter().map(|(k, i)| flip(problem, &found[k], *i, opts)).collect();
        let mut next = Vec::new();
        for ((key, i), r) in tasks.into_iter().zip(results) {
            let c2 = r?;
            let normal = found[&key].cone.facets()[i].clone();
            let k2 = c2.cone.key();
            done.insert((key, normal.clone()));
            done.insert((k2.clone(), neg(&normal)));
            if !found.contains_key(&k2) {
                next.push(k2.clone());
                found.insert(k2, c2);
            }
        }
        next.sort();
        frontier = next;
    }
    Ok(found.into_values().collect())
}

/// Closed fan of the maximal cones and all their faces.
pub fn closed_fan(problem: &FanProblem, cones: &[GroebnerCone]) -> Fan {
    let c: Vec<HCone> = cones.iter().map(|g| g.cone.clone()).collect();
    Fan::closed(problem.subspace().param_dim(), &c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{RingSignature, WeylElement};
    use crate::groebner::Ideal;
    use crate::polyhedra::validate_fan;
    use crate::problem::{RegionKind, Scheme, WeightSubspace};
    use std::sync::Arc;

    fn v(x: &[i64]) -> Vector {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn cusp() -> FanProblem {
        let s = Arc::new(RingSignature::commutative(2));
        let f = &WeylElement::x(&s, 0).pow(3) - &WeylElement::x(&s, 1).pow(2);
        let sub = WeightSubspace::new(&s, None, RegionKind::Local).unwrap();
        FanProblem::new(Ideal::new(vec![f]).unwrap(), Scheme::Alpha(vec![1, 1]), sub).unwrap()
    }

    #[test]
    fn cusp_has_two_cones() {
        let p = cusp();
        let cones = enumerate(&p, &EnumerationOptions::default()).unwrap();
        assert_eq!(cones.len(), 2);
        let fan = closed_fan(&p, &cones);
        validate_fan(&fan).unwrap();
        let mut rays: Vec<Vector> = fan.cones.iter().filter(|c| c.dim() == 1).map(|c| c.rays()[0].clone()).collect();
        rays.sort();
        assert_eq!(rays, vec![v(&[-2, -3]), v(&[-1, 0]), v(&[0, -1])]);
        assert_eq!(fan.cones.len(), 6);
    }

    #[test]
    fn flip_is_an_involution() {
        let p = cusp();
        let opts = EnumerationOptions::default();
        let c = starting_cone(&p, &opts).unwrap();
        let region = p.subspace().region();
        let i = (0..c.cone.facets().len()).find(|&i| !on_border(region, &c.cone.facet_cones()[i])).unwrap();
        let d = flip(&p, &c, i, &opts).unwrap();
        assert_ne!(d.cone, c.cone);
        let j = d.cone.facets().iter().position(|f| *f == neg(&c.cone.facets()[i])).unwrap();
        assert_eq!(flip(&p, &d, j, &opts).unwrap().cone, c.cone);
        let border = (0..c.cone.facets().len()).find(|&k| k != i).unwrap();
        assert!(matches!(flip(&p, &c, border, &opts), Err(FanError::FacetOnBorder(_))));
    }

    #[test]
    fn witnesses_reproduce_cones() {
        let p = cusp();
        for c in enumerate(&p, &EnumerationOptions::default()).unwrap() {
            let again = p.groebner_cone(&c.witness).unwrap();
            assert_eq!(again.cone, c.cone);
            assert_eq!(again.basis.elements(), c.basis.elements());
        }
    }

    #[test]
    fn border_example_global_fan() {
        let s = Arc::new(RingSignature::commutative(3));
        let x = |i| WeylElement::x(&s, i);
        let gens = vec![&WeylElement::one(&s) - &x(2), &x(0) + &x(1)];
        let sub = WeightSubspace::new(&s, Some(vec![v(&[1, 0, 0]), v(&[0, 1, 0])]), RegionKind::Local).unwrap();
        let p = FanProblem::new(Ideal::new(gens).unwrap(), Scheme::Alpha(vec![1, 1, 1]), sub).unwrap();
        let cones = enumerate(&p, &EnumerationOptions::default()).unwrap();
        assert_eq!(cones.len(), 2);
        assert_eq!(closed_fan(&p, &cones).cones.len(), 6);
    }

    #[test]
    fn cover_property() {
        let p = cusp();
        let cones = enumerate(&p, &EnumerationOptions::default()).unwrap();
        for lam in sample_points(p.subspace().region(), 20) {
            let hits = cones.iter().filter(|c| c.cone.in_relative_interior(&lam)).count();
            let on = cones.iter().filter(|c| c.cone.contains(&lam)).count();
            assert!(hits == 1 || (hits == 0 && on >= 2), "{}", fmt_vec(&lam));
        }
    }

    #[test]
    fn quotient_of_halfplane() {
        let h = HCone::new(2, vec![v(&[1, 0])], vec![]);
        let (l, q) = lineality_quotient(&h);
        assert_eq!(l.len(), 1);
        assert_eq!(q.dim(), 1);
        assert!(q.is_pointed());
        let (l, q) = lineality_quotient(&q);
        assert!(l.is_empty());
        assert_eq!(q.dim(), 1);
    }

    fn lauricella(n: usize) -> FanProblem {
        let d = Arc::new(RingSignature::weyl(n));
        let c = |q: Scalar| WeylElement::constant(&d, q);
        let mut euler = c(frac(1, 2));
        for i in 0..n {
            euler = &euler + &(&WeylElement::x(&d, i) * &WeylElement::d(&d, i));
        }
        let gens = (0..n)
            .map(|k| {
                let t = &(&WeylElement::x(&d, k) * &WeylElement::d(&d, k)) + &c(frac(1, 2 * (k as i64 + 1) + 1));
                &WeylElement::d(&d, k) - &(&euler * &t)
            })
            .collect();
        let sub = WeightSubspace::new(&d, None, RegionKind::Global).unwrap();
        FanProblem::new(Ideal::new(gens).unwrap(), Scheme::H11, sub).unwrap()
    }

    #[test]
    fn lauricella_one_variable() {
        let p = lauricella(1);
        let cones = enumerate(&p, &EnumerationOptions::default()).unwrap();
        assert_eq!(cones.len(), 2);
        validate_fan(&closed_fan(&p, &cones)).unwrap();
    }
}
