//! Division with remainder: the global algorithm for well orders on homogenized
//! lattices, and the écart-driven variant for local orders.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_traits::One;
use thiserror::Error;

use crate::algebra::{add_term, Exp, RingSignature, WeylElement};
use crate::order::{divides, DeltaPartition, MatrixOrder, OrderError};
use crate::scalar::Scalar;
use crate::sorted::SPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DivisionError {
    #[error(transparent)]
    Order(#[from] OrderError),
    #[error("divisor {0} is zero")]
    ZeroDivisor(usize),
    #[error("operands live in different rings")]
    SignatureMismatch,
    #[error("global division needs a well order")]
    NotWellOrder,
    #[error("left multiplication does not respect the order (leading exponent moved)")]
    IncompatibleOrder,
    #[error("écart division exceeded {0} reduction steps")]
    IterationLimit(usize),
}

static CHECKING: AtomicBool = AtomicBool::new(false);
static VERIFIED: AtomicUsize = AtomicUsize::new(0);

/// When on, every division re-expands its output and checks the support
/// conditions, panicking on a violation.
pub fn set_checking(on: bool) {
    CHECKING.store(on, AtomicOrdering::SeqCst);
}

pub fn checking() -> bool {
    CHECKING.load(AtomicOrdering::Relaxed)
}

/// Number of divisions verified since start-up while checking was on.
pub fn verified_divisions() -> usize {
    VERIFIED.load(AtomicOrdering::SeqCst)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Division {
    pub quotients: Vec<WeylElement>,
    pub remainder: WeylElement,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoraDivision {
    pub unit: WeylElement,
    pub quotients: Vec<WeylElement>,
    pub remainder: WeylElement,
}

fn check_inputs(p: &WeylElement, divisors: &[WeylElement], order: &MatrixOrder) -> Result<(), DivisionError> {
    let sig = p.signature();
    if sig.nslots() != order.nslots() {
        return Err(OrderError::Arity { expected: order.nslots(), got: sig.nslots() }.into());
    }
    for (j, g) in divisors.iter().enumerate() {
        if **g.signature() != **sig {
            return Err(DivisionError::SignatureMismatch);
        }
        if g.is_zero() {
            return Err(DivisionError::ZeroDivisor(j));
        }
    }
    Ok(())
}

fn sub_exp(a: &[u32], b: &[u32]) -> Exp {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Division of `p` by the ordered list `divisors`: p = sum Q_j P_j + R, with the
/// terms of Q_j shifted by exp(P_j) in Delta_j and the support of R in the complement.
pub fn divide(p: &WeylElement, divisors: &[WeylElement], order: &MatrixOrder) -> Result<Division, DivisionError> {
    check_inputs(p, divisors, order)?;
    if !order.flags().well_order {
        return Err(DivisionError::NotWellOrder);
    }
    let sig = p.signature().clone();
    let gs: Vec<SPoly> = divisors.iter().map(|g| SPoly::from_element(g, order)).collect();
    let leads: Vec<Exp> = gs.iter().map(|g| g.lead().unwrap().exp.clone()).collect();
    let mut h = SPoly::from_element(p, order);
    let mut quots: Vec<BTreeMap<Exp, Scalar>> = vec![BTreeMap::new(); gs.len()];
    let mut rem = BTreeMap::new();
    while let Some(t) = h.lead().cloned() {
        match leads.iter().position(|l| divides(l, &t.exp)) {
            Some(j) => {
                let m = sub_exp(&t.exp, &leads[j]);
                let prod = gs[j].mul_monomial_left(&sig, order, &m);
                let pl = prod.lead().unwrap();
                if pl.exp != t.exp {
                    return Err(DivisionError::IncompatibleOrder);
                }
                let c = &t.c / &pl.c;
                h = h.sub_scaled(&c, &prod);
                add_term(&mut quots[j], m, c);
            }
            None => {
                rem.insert(t.exp, t.c);
                h.terms.remove(0);
            }
        }
    }
    let out = Division {
        quotients: quots.into_iter().map(|q| WeylElement::from_terms(&sig, q)).collect(),
        remainder: WeylElement::from_terms(&sig, rem),
    };
    if checking() {
        verify_division(p, divisors, order, &out);
    }
    Ok(out)
}

fn verify_division(p: &WeylElement, divisors: &[WeylElement], order: &MatrixOrder, d: &Division) {
    let mut sum = d.remainder.clone();
    for (q, g) in d.quotients.iter().zip(divisors) {
        sum = &sum + &(q * g);
    }
    assert_eq!(&sum, p, "division identity fails to re-expand");
    let leads: Vec<Exp> =
        divisors.iter().map(|g| crate::order::leading_data(g, order).unwrap().exp).collect();
    let delta = DeltaPartition::new(leads.clone());
    for (j, q) in d.quotients.iter().enumerate() {
        for e in q.terms().keys() {
            let shifted: Exp = e.iter().zip(&leads[j]).map(|(a, b)| a + b).collect();
            assert!(delta.in_delta(j, &shifted), "quotient {j} leaves its Delta region");
        }
    }
    for e in d.remainder.terms().keys() {
        assert!(delta.in_complement(e), "remainder term outside the complement region");
    }
    VERIFIED.fetch_add(1, AtomicOrdering::SeqCst);
}

/// Parameters of an écart division.
#[derive(Clone, Debug)]
pub struct MoraSetting<'a> {
    pub order: &'a MatrixOrder,
    /// Slot degrees used to measure écart.
    pub grading: &'a [u32],
    /// Slots in which a previously stored intermediate may be multiplied.
    pub allowed: &'a [bool],
    pub max_steps: usize,
}

struct Stored {
    poly: SPoly,
    ecart: u64,
    origin: Origin,
}

enum Origin {
    Divisor(usize),
    Intermediate { unit: SPoly, quots: Vec<SPoly> },
}

fn ecart(p: &SPoly, grading: &[u32]) -> u64 {
    let deg = |e: &Exp| -> u64 { e.iter().zip(grading).map(|(&k, &g)| u64::from(k) * u64::from(g)).sum() };
    let top = p.terms.iter().map(|t| deg(&t.exp)).max().unwrap_or(0);
    top - p.lead().map(|t| deg(&t.exp)).unwrap_or(0)
}

fn monomial(e: Exp, c: Scalar, ord: &MatrixOrder) -> SPoly {
    SPoly::from_map(BTreeMap::from([(e, c)]), ord)
}

/// Écart division: unit * f = sum q_j g_j + remainder, where the unit is 1 plus
/// terms in the allowed slots and no divisor's leading exponent divides that of
/// the remainder.
pub fn mora_divide(f: &WeylElement, divisors: &[WeylElement], s: &MoraSetting<'_>) -> Result<MoraDivision, DivisionError> {
    check_inputs(f, divisors, s.order)?;
    let sig: Arc<RingSignature> = f.signature().clone();
    let ord = s.order;
    let mut t: Vec<Stored> = divisors
        .iter()
        .enumerate()
        .map(|(j, g)| {
            let poly = SPoly::from_element(g, ord);
            Stored { ecart: ecart(&poly, s.grading), poly, origin: Origin::Divisor(j) }
        })
        .collect();
    let one = monomial(vec![0; sig.nslots()], Scalar::one(), ord);
    let mut h = SPoly::from_element(f, ord);
    let mut unit = one.clone();
    let mut quots = vec![SPoly::default(); divisors.len()];
    let mut steps = 0;
    while let Some(lt) = h.lead().cloned() {
        steps += 1;
        if steps > s.max_steps {
            return Err(DivisionError::IterationLimit(s.max_steps));
        }
        let mut best: Option<(usize, Exp)> = None;
        for (i, st) in t.iter().enumerate() {
            let l = &st.poly.lead().unwrap().exp;
            if !divides(l, &lt.exp) {
                continue;
            }
            let m = sub_exp(&lt.exp, l);
            if matches!(st.origin, Origin::Intermediate { .. })
                && m.iter().zip(s.allowed).any(|(&k, &ok)| k > 0 && !ok)
            {
                continue;
            }
            if best.as_ref().map_or(true, |(b, _)| st.ecart < t[*b].ecart) {
                best = Some((i, m));
            }
        }
        let Some((ri, m)) = best else { break };
        let he = ecart(&h, s.grading);
        let prod = t[ri].poly.mul_monomial_left(&sig, ord, &m);
        let pl = prod.lead().unwrap();
        if pl.exp != lt.exp {
            return Err(DivisionError::IncompatibleOrder);
        }
        let c = &lt.c / &pl.c;
        if t[ri].ecart > he {
            t.push(Stored {
                poly: h.clone(),
                ecart: he,
                origin: Origin::Intermediate { unit: unit.clone(), quots: quots.clone() },
            });
        }
        h = h.sub_scaled(&c, &prod);
        match &t[ri].origin {
            Origin::Divisor(j) => {
                quots[*j] = quots[*j].sub_scaled(&-c.clone(), &monomial(m, Scalar::one(), ord));
            }
            Origin::Intermediate { unit: ur, quots: qr } => {
                unit = unit.sub_scaled(&c, &ur.mul_monomial_left(&sig, ord, &m));
                for (q, r) in quots.iter_mut().zip(qr) {
                    *q = q.sub_scaled(&c, &r.mul_monomial_left(&sig, ord, &m));
                }
            }
        }
    }
    let out = MoraDivision {
        unit: unit.to_element(&sig),
        quotients: quots.iter().map(|q| q.to_element(&sig)).collect(),
        remainder: h.to_element(&sig),
    };
    if checking() {
        verify_mora(f, divisors, s, &out);
    }
    Ok(out)
}

fn verify_mora(f: &WeylElement, divisors: &[WeylElement], s: &MoraSetting<'_>, d: &MoraDivision) {
    let mut rhs = d.remainder.clone();
    for (q, g) in d.quotients.iter().zip(divisors) {
        rhs = &rhs + &(q * g);
    }
    assert_eq!(&d.unit * f, rhs, "écart division identity fails to re-expand");
    let zero = vec![0u32; f.signature().nslots()];
    assert!(d.unit.coeff(&zero).is_one(), "unit must have constant term one");
    for e in d.unit.terms().keys() {
        assert!(
            e.iter().zip(s.allowed).all(|(&k, &ok)| k == 0 || ok),
            "unit involves a slot outside the allowed block"
        );
    }
    if !d.remainder.is_zero() {
        let l = crate::order::leading_data(&d.remainder, s.order).unwrap().exp;
        for g in divisors {
            let gl = crate::order::leading_data(g, s.order).unwrap().exp;
            assert!(!divides(&gl, &l), "remainder lead is divisible by a divisor lead");
        }
    }
    VERIFIED.fetch_add(1, AtomicOrdering::SeqCst);
}

/// Membership in the localization: true when the écart remainder vanishes.
pub fn mora_reduces_to_zero(f: &WeylElement, divisors: &[WeylElement], s: &MoraSetting<'_>) -> Result<bool, DivisionError> {
    if f.is_zero() {
        return Ok(true);
    }
    Ok(mora_divide(f, divisors, s)?.remainder.is_zero())
}


#[cfg(test)]
mod props {
    use super::*;
    use crate::algebra::Homogenization;
    use proptest::prelude::*;

    fn element(sig: Arc<RingSignature>, nonzero: bool) -> impl Strategy<Value = WeylElement> {
        let m = sig.nslots();
        prop::collection::vec((prop::collection::vec(0u32..3, m), 1i64..=3, any::<bool>()), (nonzero as usize)..4).prop_map(move |ts| {
            let f = WeylElement::from_terms(
                &sig,
                ts.into_iter().map(|(e, c, neg)| (e, Scalar::from_integer(if neg { -c } else { c }.into()))),
            );
            if f.is_zero() { WeylElement::one(&sig) } else { f }
        })
    }

    fn h11() -> Arc<RingSignature> {
        Arc::new(RingSignature::weyl(1).with_homogenization(Homogenization::H11).unwrap())
    }

    proptest! {
        // checking mode asserts the re-expansion and support conditions
        #[test]
        fn global_division_re_expands(p in element(h11(), false), g in prop::collection::vec(element(h11(), true), 1..3)) {
            set_checking(true);
            let order = MatrixOrder::degrevlex(2).lift_to_h(&h11());
            let d = divide(&p, &g, &order).unwrap();
            let mut sum = d.remainder.clone();
            for (q, gj) in d.quotients.iter().zip(&g) {
                sum = &sum + &(q * gj);
            }
            prop_assert_eq!(sum, p);
        }

        #[test]
        fn mora_division_re_expands(
            f in element(Arc::new(RingSignature::commutative(2)), false),
            g in prop::collection::vec(element(Arc::new(RingSignature::commutative(2)), true), 1..3)
        ) {
            set_checking(true);
            let order = MatrixOrder::negdegrevlex(2);
            let s = MoraSetting { order: &order, grading: &[1, 1], allowed: &[true, true], max_steps: 100_000 };
            let d = mora_divide(&f, &g, &s).unwrap();
            let mut sum = d.remainder.clone();
            for (q, gj) in d.quotients.iter().zip(&g) {
                sum = &sum + &(q * gj);
            }
            prop_assert_eq!(sum, &d.unit * &f);
            prop_assert_eq!(d.unit.coeff(&[0, 0]), Scalar::from_integer(1.into()));
        }
    }
}
