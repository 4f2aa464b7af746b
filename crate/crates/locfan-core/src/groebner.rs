//! Buchberger completion and reduced Gröbner bases for left ideals.

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::{AlgebraError, Exp, RingSignature, WeightVector, WeylElement};
use crate::division::{divide, DivisionError};
use crate::order::{divides, leading_data, MatrixOrder, OrderError};
use crate::sorted::SPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GroebnerError {
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("ideal has no nonzero generator")]
    EmptyIdeal,
    #[error("generators live in different rings")]
    SignatureMismatch,
    #[error("Buchberger completion needs a well order")]
    NotWellOrder,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ideal {
    sig: Arc<RingSignature>,
    gens: Vec<WeylElement>,
}

impl Ideal {
    /// Zero generators are dropped; at least one nonzero generator is required.
    pub fn new(gens: Vec<WeylElement>) -> Result<Self, GroebnerError> {
        let gens: Vec<WeylElement> = gens.into_iter().filter(|g| !g.is_zero()).collect();
        let first = gens.first().ok_or(GroebnerError::EmptyIdeal)?;
        let sig = first.signature().clone();
        if gens.iter().any(|g| **g.signature() != *sig) {
            return Err(GroebnerError::SignatureMismatch);
        }
        Ok(Ideal { sig, gens })
    }
    pub fn signature(&self) -> &Arc<RingSignature> {
        &self.sig
    }
    pub fn generators(&self) -> &[WeylElement] {
        &self.gens
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedBasis {
    order: MatrixOrder,
    elements: Vec<WeylElement>,
    homogeneous: bool,
}

impl ReducedBasis {
    pub fn order(&self) -> &MatrixOrder {
        &self.order
    }
    pub fn elements(&self) -> &[WeylElement] {
        &self.elements
    }
    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }
    pub fn signature(&self) -> &Arc<RingSignature> {
        self.elements[0].signature()
    }
    pub fn leading_exponents(&self) -> Vec<Exp> {
        self.elements.iter().map(|g| leading_data(g, &self.order).unwrap().exp).collect()
    }
    pub fn contains_one(&self) -> bool {
        self.elements.len() == 1 && self.elements[0].terms().keys().all(|e| e.iter().all(|&k| k == 0))
    }
}

fn lcm(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| *x.max(y)).collect()
}

fn sub_exp(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn coprime(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| *x == 0 || *y == 0)
}

/// S-polynomial of two nonzero elements with left monomial multipliers.
pub fn s_pair(g1: &WeylElement, g2: &WeylElement, order: &MatrixOrder) -> Result<WeylElement, GroebnerError> {
    if **g1.signature() != **g2.signature() {
        return Err(GroebnerError::SignatureMismatch);
    }
    let sig = g1.signature().clone();
    let a = SPoly::from_element(g1, order);
    let b = SPoly::from_element(g2, order);
    Ok(spoly(&sig, order, &a, &b)?.to_element(&sig))
}

fn spoly(sig: &RingSignature, order: &MatrixOrder, a: &SPoly, b: &SPoly) -> Result<SPoly, GroebnerError> {
    let la = a.lead().ok_or(OrderError::Zero)?;
    let lb = b.lead().ok_or(OrderError::Zero)?;
    let l = lcm(&la.exp, &lb.exp);
    let pa = a.mul_monomial_left(sig, order, &sub_exp(&l, &la.exp));
    let pb = b.mul_monomial_left(sig, order, &sub_exp(&l, &lb.exp));
    let (ca, cb) = (&pa.lead().unwrap().c, &pb.lead().unwrap().c);
    if pa.lead().unwrap().exp != l || pb.lead().unwrap().exp != l {
        return Err(DivisionError::IncompatibleOrder.into());
    }
    Ok(pa.scale(cb).sub_scaled(ca, &pb))
}

/// Reduce the leading term of `p` against `g` until it is irreducible.
fn top_reduce(sig: &RingSignature, order: &MatrixOrder, mut p: SPoly, g: &[SPoly]) -> Result<SPoly, GroebnerError> {
    while let Some(t) = p.lead().cloned() {
        let Some(r) = g.iter().find(|r| divides(&r.lead().unwrap().exp, &t.exp)) else { break };
        let m = sub_exp(&t.exp, &r.lead().unwrap().exp);
        let prod = r.mul_monomial_left(sig, order, &m);
        let pl = prod.lead().unwrap();
        if pl.exp != t.exp {
            return Err(DivisionError::IncompatibleOrder.into());
        }
        p = p.sub_scaled(&(&t.c / &pl.c), &prod);
    }
    Ok(p)
}

struct Pair {
    i: usize,
    j: usize,
    lcm: Exp,
    key: Vec<i128>,
}

/// Gebauer–Möller pair update after appending element `k`.
fn update(pairs: &mut Vec<Pair>, leads: &[Exp], k: usize, order: &MatrixOrder, commutative: bool) {
    let lk = &leads[k];
    pairs.retain(|p| {
        !(divides(lk, &p.lcm) && lcm(&leads[p.i], lk) != p.lcm && lcm(&leads[p.j], lk) != p.lcm)
    });
    let cands: Vec<(usize, Exp, bool)> =
        (0..k).map(|i| (i, lcm(&leads[i], lk), commutative && coprime(&leads[i], lk))).collect();
    let mut kept: Vec<(usize, Exp, bool)> = Vec::new();
    for (idx, c) in cands.iter().enumerate() {
        if c.2 {
            kept.push(c.clone());
            continue;
        }
        let dominated = cands[idx + 1..].iter().any(|q| divides(&q.1, &c.1))
            || kept.iter().any(|q| divides(&q.1, &c.1));
        if !dominated {
            kept.push(c.clone());
        }
    }
    for (i, l, cop) in kept {
        if !cop {
            pairs.push(Pair { i, j: k, key: order.key(&l), lcm: l });
        }
    }
}

/// Reduced Gröbner basis of the left ideal with respect to a well order.
pub fn buchberger(ideal: &Ideal, order: &MatrixOrder) -> Result<ReducedBasis, GroebnerError> {
    if !order.flags().well_order {
        return Err(GroebnerError::NotWellOrder);
    }
    let sig = ideal.signature().clone();
    if sig.nslots() != order.nslots() {
        return Err(OrderError::Arity { expected: order.nslots(), got: sig.nslots() }.into());
    }
    let commutative = !sig.is_weyl() || sig.commuting().iter().all(|&c| c);
    let mut g: Vec<SPoly> = Vec::new();
    let mut leads: Vec<Exp> = Vec::new();
    let mut pairs: Vec<Pair> = Vec::new();
    let mut gens: Vec<SPoly> = ideal.generators().iter().map(|p| SPoly::from_element(p, order)).collect();
    gens.sort_by(|a, b| a.lead().unwrap().key.cmp(&b.lead().unwrap().key));
    let add = |p: SPoly, g: &mut Vec<SPoly>, leads: &mut Vec<Exp>, pairs: &mut Vec<Pair>| {
        let mut p = p;
        p.make_monic();
        leads.push(p.lead().unwrap().exp.clone());
        g.push(p);
        update(pairs, leads, g.len() - 1, order, commutative);
    };
    for p in gens {
        let r = top_reduce(&sig, order, p, &g)?;
        if !r.is_zero() {
            add(r, &mut g, &mut leads, &mut pairs);
        }
    }
    while !pairs.is_empty() {
        let best = (0..pairs.len())
            .min_by(|&a, &b| pairs[a].key.cmp(&pairs[b].key).then_with(|| pairs[a].lcm.cmp(&pairs[b].lcm)))
            .unwrap();
        let p = pairs.swap_remove(best);
        let s = spoly(&sig, order, &g[p.i], &g[p.j])?;
        let r = top_reduce(&sig, order, s, &g)?;
        if !r.is_zero() {
            add(r, &mut g, &mut leads, &mut pairs);
        }
    }
    finalize(&sig, order, g)
}

fn finalize(sig: &Arc<RingSignature>, order: &MatrixOrder, g: Vec<SPoly>) -> Result<ReducedBasis, GroebnerError> {
    // Minimal: drop elements whose lead is divisible by another (first of equals survives).
    let mut keep: Vec<SPoly> = Vec::new();
    for (i, p) in g.iter().enumerate() {
        let l = &p.lead().unwrap().exp;
        let redundant = g.iter().enumerate().any(|(j, q)| {
            let lq = &q.lead().unwrap().exp;
            j != i && divides(lq, l) && (lq != l || j < i)
        });
        if !redundant {
            keep.push(p.clone());
        }
    }
    let elems: Vec<WeylElement> = keep.iter().map(|p| p.to_element(sig)).collect();
    let mut out = Vec::with_capacity(elems.len());
    for (i, p) in keep.iter().enumerate() {
        let lead = p.lead().unwrap();
        let tail = SPoly { terms: p.terms[1..].to_vec() }.to_element(sig);
        let others: Vec<WeylElement> =
            elems.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, e)| e.clone()).collect();
        let r = if tail.is_zero() || others.is_empty() { tail } else { divide(&tail, &others, order)?.remainder };
        let lt = WeylElement::monomial(sig, lead.exp.clone(), lead.c.clone());
        let mut full = SPoly::from_element(&(&lt + &r), order);
        full.make_monic();
        out.push(full);
    }
    out.sort_by(|a, b| {
        let (x, y) = (a.lead().unwrap(), b.lead().unwrap());
        y.key.cmp(&x.key).then_with(|| y.exp.cmp(&x.exp))
    });
    let elements: Vec<WeylElement> = out.iter().map(|p| p.to_element(sig)).collect();
    let homogeneous = elements.iter().all(|e| e.is_homogeneous());
    Ok(ReducedBasis { order: order.clone(), elements, homogeneous })
}

/// Initial forms of the basis elements; they generate in_w(I) when the basis was
/// computed for an order refining w.
pub fn initial_ideal(basis: &ReducedBasis, w: &WeightVector) -> Result<Vec<WeylElement>, GroebnerError> {
    basis.elements().iter().map(|g| Ok(g.initial_form(w)?)).collect()
}

pub fn normal_form(p: &WeylElement, basis: &ReducedBasis) -> Result<WeylElement, GroebnerError> {
    Ok(divide(p, basis.elements(), basis.order())?.remainder)
}

pub fn membership(p: &WeylElement, basis: &ReducedBasis) -> Result<bool, GroebnerError> {
    Ok(normal_form(p, basis)?.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Homogenization;
    use crate::division::set_checking;
    use crate::scalar::int;

    fn c2() -> Arc<RingSignature> {
        Arc::new(RingSignature::commutative(2))
    }

    #[test]
    fn s_pairs() {
        let s = c2();
        let o = MatrixOrder::degrevlex(2);
        let x = WeylElement::x(&s, 0);
        let y = WeylElement::x(&s, 1);
        assert!(s_pair(&x, &y, &o).unwrap().is_zero());
        let f = &x.pow(3) - &y.pow(2);
        assert!(s_pair(&f, &f, &o).unwrap().is_zero());
        let lex = MatrixOrder::new(vec![vec![1, 0], vec![0, 1]], 2, crate::order::OrderFlags { well_order: true, ..Default::default() });
        let sp = s_pair(&x.pow(2), &(&x + &y), &lex).unwrap();
        assert_eq!(sp, -&(&x * &y));
    }

    #[test]
    fn principal_and_monomial_ideals() {
        set_checking(true);
        let s = c2();
        let o = MatrixOrder::degrevlex(2);
        let x = WeylElement::x(&s, 0);
        let b = buchberger(&Ideal::new(vec![x.clone()]).unwrap(), &o).unwrap();
        assert_eq!(b.elements(), &[x.clone()]);
        let f = &x.pow(3) - &WeylElement::x(&s, 1).pow(2);
        let b = buchberger(&Ideal::new(vec![f.scale(&int(-3))]).unwrap(), &o).unwrap();
        assert_eq!(b.elements(), &[f.clone()]);
        assert!(membership(&(&f * &x), &b).unwrap());
        assert!(!membership(&x, &b).unwrap());
    }

    #[test]
    fn twisted_cubic_is_unique_under_shuffles() {
        set_checking(true);
        let s = Arc::new(RingSignature::commutative(3));
        let v = |i| WeylElement::x(&s, i);
        let gens = vec![&v(0).pow(2) - &v(1), &(&v(0) * &v(1)) - &v(2), &(&v(0) * &v(2)) - &v(1).pow(2)];
        let o = MatrixOrder::degrevlex(3);
        let b1 = buchberger(&Ideal::new(gens.clone()).unwrap(), &o).unwrap();
        let mut rev = gens.clone();
        rev.reverse();
        let combo = vec![&gens[0] + &gens[1], gens[1].clone(), gens[2].clone(), &gens[0] * &v(2)];
        for alt in [rev, combo] {
            assert_eq!(buchberger(&Ideal::new(alt).unwrap(), &o).unwrap().elements(), b1.elements());
        }
        for g in &gens {
            assert!(membership(g, &b1).unwrap());
        }
        for (i, a) in b1.elements().iter().enumerate() {
            for bb in &b1.elements()[i + 1..] {
                assert!(normal_form(&s_pair(a, bb, &o).unwrap(), &b1).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn weyl_basis_closes() {
        set_checking(true);
        // <x d + 1/2, d^2> in h01(D) with a lifted admissible order.
        let d = Arc::new(RingSignature::weyl(1));
        let x = WeylElement::x(&d, 0);
        let dd = WeylElement::d(&d, 0);
        let mode = Homogenization::H11;
        let g1 = (&(&x * &dd) + &WeylElement::constant(&d, crate::scalar::frac(1, 2))).homogenize(&mode).unwrap();
        let g2 = (&x.pow(2) - &dd).homogenize(&mode).unwrap();
        let sig = g1.signature().clone();
        let o = MatrixOrder::degrevlex(2).lift_to_h(&sig);
        let b = buchberger(&Ideal::new(vec![g1.clone(), g2.clone()]).unwrap(), &o).unwrap();
        assert!(b.is_homogeneous());
        for (i, a) in b.elements().iter().enumerate() {
            for bb in &b.elements()[i..] {
                assert!(normal_form(&s_pair(a, bb, &o).unwrap(), &b).unwrap().is_zero());
            }
        }
        assert!(membership(&g1, &b).unwrap() && membership(&g2, &b).unwrap());
        let b2 = buchberger(&Ideal::new(vec![g2, &g1 + &g1]).unwrap(), &o).unwrap();
        assert_eq!(b.elements(), b2.elements());
    }

    #[test]
    fn empty_and_unit_ideals() {
        let s = c2();
        assert_eq!(Ideal::new(vec![WeylElement::zero(&s)]), Err(GroebnerError::EmptyIdeal));
        let one = WeylElement::one(&s);
        let b = buchberger(&Ideal::new(vec![&one + &WeylElement::x(&s, 0), WeylElement::x(&s, 0)]).unwrap(), &MatrixOrder::degrevlex(2)).unwrap();
        assert!(b.contains_one());
        let nw = MatrixOrder::negdegrevlex(2);
        assert_eq!(buchberger(&Ideal::new(vec![one]).unwrap(), &nw), Err(GroebnerError::NotWellOrder));
    }
}

#[cfg(test)]
mod props {
    use super::*;
    use crate::scalar::Scalar;
    use proptest::prelude::*;

    fn element(sig: Arc<RingSignature>) -> impl Strategy<Value = WeylElement> {
        let m = sig.nslots();
        prop::collection::vec((prop::collection::vec(0u32..3, m), 1i64..=3), 1..4).prop_map(move |ts| {
            let f = WeylElement::from_terms(&sig, ts.into_iter().map(|(e, c)| (e, Scalar::from_integer(c.into()))));
            if f.is_zero() { WeylElement::one(&sig) } else { f }
        })
    }

    fn c2() -> Arc<RingSignature> {
        Arc::new(RingSignature::commutative(2))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduced_basis_is_closed_and_canonical(gens in prop::collection::vec(element(c2()), 1..3)) {
            let order = MatrixOrder::degrevlex(2);
            let g = buchberger(&Ideal::new(gens.clone()).unwrap(), &order).unwrap();
            for f in &gens {
                prop_assert!(membership(f, &g).unwrap());
            }
            let es = g.elements();
            for i in 0..es.len() {
                for j in i + 1..es.len() {
                    let sp = s_pair(&es[i], &es[j], &order).unwrap();
                    prop_assert!(normal_form(&sp, &g).unwrap().is_zero());
                }
            }
            let again = buchberger(&Ideal::new(es.to_vec()).unwrap(), &order).unwrap();
            prop_assert_eq!(again.elements(), es);
        }
    }
}
