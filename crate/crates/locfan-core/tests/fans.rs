use std::sync::Arc;

use locfan_core::algebra::{RingSignature, WeightVector, WeylElement};
use locfan_core::fan::{closed_fan, enumerate, EnumerationOptions};
use locfan_core::groebner::Ideal;
use locfan_core::local::{global_fan, local_fan};
use locfan_core::polyhedra::{newton_polyhedron, validate_fan, HCone, Recession};
use locfan_core::problem::{FanProblem, RegionKind, Scheme, WeightSubspace};
use locfan_core::scalar::int;
use num_bigint::BigInt;

fn v(x: &[i64]) -> Vec<BigInt> {
    x.iter().map(|&a| BigInt::from(a)).collect()
}

fn cusp(region: RegionKind) -> FanProblem {
    let s = Arc::new(RingSignature::commutative(2));
    let f = &WeylElement::x(&s, 0).pow(3) - &WeylElement::x(&s, 1).pow(2);
    let sub = WeightSubspace::new(&s, None, region).unwrap();
    FanProblem::new(Ideal::new(vec![f]).unwrap(), Scheme::Alpha(vec![1, 1]), sub).unwrap()
}

#[test]
fn cusp_local_fan_is_the_normal_fan() {
    let p = cusp(RegionKind::Local);
    let lf = local_fan(&p, &EnumerationOptions::default()).unwrap();
    let rays: Vec<_> = lf.fan.cones.iter().filter(|c| c.dim() == 1).map(|c| c.rays()[0].clone()).collect();
    assert_eq!(rays.len(), 3);
    for r in [v(&[-1, 0]), v(&[-2, -3]), v(&[0, -1])] {
        assert!(rays.contains(&r));
    }
    // the same rays from the Newton polyhedron
    let poly = newton_polyhedron(&p.original().generators()[0], Recession::PositiveOrthant).unwrap();
    let region = p.subspace().region().clone();
    for c in lf.classes.iter().map(|c| &c.closure) {
        let w = locfan_core::scalar::to_scalars(c.interior_point());
        assert_eq!(&poly.normal_cone(&w, &region).unwrap(), c);
    }
}

#[test]
fn cusp_global_fan_over_the_orthant() {
    let (cones, fan) = global_fan(&cusp(RegionKind::Global), &EnumerationOptions::default()).unwrap();
    assert_eq!(cones.len(), 2);
    validate_fan(&fan).unwrap();
    let splitting = HCone::new(2, vec![v(&[1, 0])], vec![v(&[3, -2])]);
    assert!(fan.cones.contains(&splitting));
}

#[test]
fn weyl_one_variable_h11_fan() {
    let d = Arc::new(RingSignature::weyl(1));
    let x = WeylElement::x(&d, 0);
    let dx = WeylElement::d(&d, 0);
    let g = &(&x * &dx) - &WeylElement::constant(&d, int(2));
    let sub = WeightSubspace::new(&d, None, RegionKind::Global).unwrap();
    let p = FanProblem::new(Ideal::new(vec![g]).unwrap(), Scheme::H11, sub).unwrap();
    let cones = enumerate(&p, &EnumerationOptions::default()).unwrap();
    let fan = closed_fan(&p, &cones);
    validate_fan(&fan).unwrap();
    let w = WeightVector::weyl(vec![int(1)], vec![int(0)]);
    assert!(p.basis_at(&w).unwrap().elements().len() == 1);
}
