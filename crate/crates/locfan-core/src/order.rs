//! Matrix term orders on exponent vectors.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::algebra::{Exp, RingSignature, WeightVector, WeylElement};
use crate::scalar::{primitive, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("exponent arity {got} does not match order arity {expected}")]
    Arity { expected: usize, got: usize },
    #[error("weight entry too large for a machine order row: {0}")]
    Overflow(String),
    #[error("leading data of the zero element")]
    Zero,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct OrderFlags {
    pub well_order: bool,
    pub local: bool,
    pub admissible: bool,
    pub block_on_hprime: bool,
}

/// Lexicographic comparison of the row products, then of the exponents themselves.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MatrixOrder {
    rows: Vec<Vec<i64>>,
    nslots: usize,
    flags: OrderFlags,
}

fn revlex_rows(nslots: usize, slots: std::ops::Range<usize>) -> Vec<Vec<i64>> {
    // -e_last, ..., -e_{first+1}; the first slot is then determined by a degree row.
    slots
        .skip(1)
        .rev()
        .map(|s| {
            let mut r = vec![0; nslots];
            r[s] = -1;
            r
        })
        .collect()
}

impl MatrixOrder {
    pub fn new(rows: Vec<Vec<i64>>, nslots: usize, flags: OrderFlags) -> Self {
        assert!(rows.iter().all(|r| r.len() == nslots), "order row arity");
        MatrixOrder { rows, nslots, flags }
    }

    /// Rows given as rational covectors; each is scaled to a primitive integer row.
    pub fn from_rational_rows(rows: &[Vec<Scalar>], nslots: usize, flags: OrderFlags) -> Result<Self, OrderError> {
        let rows = rows.iter().map(|r| int_row(r)).collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(rows, nslots, flags))
    }

    pub fn degrevlex(m: usize) -> Self {
        let mut rows = vec![vec![1; m]];
        rows.extend(revlex_rows(m, 0..m));
        Self::new(rows, m, OrderFlags { well_order: true, ..Default::default() })
    }

    pub fn negdegrevlex(m: usize) -> Self {
        let mut rows = vec![vec![-1; m]];
        rows.extend(revlex_rows(m, 0..m));
        Self::new(rows, m, OrderFlags { local: true, ..Default::default() })
    }

    /// Local order on k[x]: negative alpha-degree, then reverse lexicographic.
    pub fn local_alpha(alpha: &[u32]) -> Self {
        let m = alpha.len();
        let mut rows = vec![alpha.iter().map(|&a| -i64::from(a)).collect::<Vec<_>>()];
        rows.extend(revlex_rows(m, 0..m));
        Self::new(rows, m, OrderFlags { local: true, ..Default::default() })
    }

    /// Admissible order on D (or on the x,d slots of a larger lattice):
    /// |beta| first, then -|alpha|, then reverse lexicographic on all given slots.
    pub fn weyl_admissible(n: usize, nslots: usize) -> Self {
        let mut beta = vec![0; nslots];
        let mut alpha = vec![0; nslots];
        for i in 0..n {
            beta[n + i] = 1;
            alpha[i] = -1;
        }
        let mut rows = vec![beta, alpha];
        rows.extend(revlex_rows(nslots, 0..nslots));
        Self::new(rows, nslots, OrderFlags { admissible: true, ..Default::default() })
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }
    pub fn nslots(&self) -> usize {
        self.nslots
    }
    pub fn flags(&self) -> OrderFlags {
        self.flags
    }

    pub fn key(&self, e: &[u32]) -> Vec<i128> {
        self.rows
            .iter()
            .map(|r| r.iter().zip(e).map(|(&w, &k)| i128::from(w) * i128::from(k)).sum())
            .collect()
    }

    pub fn compare(&self, a: &[u32], b: &[u32]) -> Result<Ordering, OrderError> {
        for e in [a, b] {
            if e.len() != self.nslots {
                return Err(OrderError::Arity { expected: self.nslots, got: e.len() });
            }
        }
        Ok(self.cmp_exp(a, b))
    }

    pub(crate) fn cmp_exp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for r in &self.rows {
            let x: i128 = r.iter().zip(a).map(|(&w, &k)| i128::from(w) * i128::from(k)).sum();
            let y: i128 = r.iter().zip(b).map(|(&w, &k)| i128::from(w) * i128::from(k)).sum();
            match x.cmp(&y) {
                Ordering::Equal => {}
                o => return o,
            }
        }
        a.cmp(b)
    }

    /// Prepend a row; the result compares by `row` first.
    pub fn refine_by_row(&self, row: Vec<i64>) -> Self {
        assert_eq!(row.len(), self.nslots, "row arity");
        let mut rows = vec![row];
        rows.extend(self.rows.iter().cloned());
        MatrixOrder { rows, nslots: self.nslots, flags: self.flags }
    }

    /// Compare by the w-weight first (zero on h and h'), then by `self`.
    pub fn refine_by_weight(&self, w: &WeightVector, sig: &RingSignature) -> Result<Self, OrderError> {
        if sig.nslots() != self.nslots {
            return Err(OrderError::Arity { expected: self.nslots, got: sig.nslots() });
        }
        let row = int_row(&w.slot_weights(sig))?;
        if row.iter().all(|&x| x == 0) {
            return Ok(self.clone());
        }
        Ok(self.refine_by_row(row))
    }

    /// Homogenized order on `target`: degree of the target's grading first, then `self`
    /// with zero weight on the new slots.
    pub fn lift_to_h(&self, target: &RingSignature) -> Self {
        let m = target.nslots();
        assert!(m >= self.nslots, "lift target must extend the lattice");
        let deg: Vec<i64> = target.degree_weights().iter().map(|&d| i64::from(d)).collect();
        let mut rows = vec![deg];
        for r in &self.rows {
            let mut r = r.clone();
            r.resize(m, 0);
            rows.push(r);
        }
        let flags = OrderFlags {
            well_order: true,
            block_on_hprime: target.has_hprime(),
            ..self.flags
        };
        MatrixOrder { rows, nslots: m, flags }
    }

    /// Pad every row with zeros up to `m` slots (the added slots fall to the lex fallback).
    pub fn extend_slots(&self, m: usize) -> Self {
        let rows = self.rows.iter().map(|r| {
            let mut r = r.clone();
            r.resize(m, 0);
            r
        });
        MatrixOrder { rows: rows.collect(), nslots: m, flags: self.flags }
    }

    /// Drop a slot from every row (restriction to the face where that slot is zero).
    pub fn drop_slot(&self, slot: usize) -> Self {
        let rows = self.rows.iter().map(|r| {
            let mut r = r.clone();
            r.remove(slot);
            r
        });
        MatrixOrder { rows: rows.collect(), nslots: self.nslots - 1, flags: self.flags }
    }

    pub fn with_flags(mut self, flags: OrderFlags) -> Self {
        self.flags = flags;
        self
    }
}

fn int_row(r: &[Scalar]) -> Result<Vec<i64>, OrderError> {
    primitive(r)
        .iter()
        .map(|x: &BigInt| x.to_i64().ok_or_else(|| OrderError::Overflow(x.to_string())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeadingData {
    pub exp: Exp,
    pub coeff: Scalar,
}

impl LeadingData {
    pub fn term(&self, p: &WeylElement) -> WeylElement {
        WeylElement::monomial(p.signature(), self.exp.clone(), num_traits::One::one())
    }
    pub fn monomial(&self, p: &WeylElement) -> WeylElement {
        WeylElement::monomial(p.signature(), self.exp.clone(), self.coeff.clone())
    }
}

pub fn leading_data(p: &WeylElement, order: &MatrixOrder) -> Result<LeadingData, OrderError> {
    if p.signature().nslots() != order.nslots() {
        return Err(OrderError::Arity { expected: order.nslots(), got: p.signature().nslots() });
    }
    let (e, c) = p
        .terms()
        .iter()
        .max_by(|a, b| order.cmp_exp(a.0, b.0))
        .ok_or(OrderError::Zero)?;
    Ok(LeadingData { exp: e.clone(), coeff: c.clone() })
}

/// The partition of the exponent lattice induced by an ordered list of leading exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaPartition {
    leads: Vec<Exp>,
}

pub fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

impl DeltaPartition {
    pub fn new(leads: Vec<Exp>) -> Self {
        DeltaPartition { leads }
    }
    pub fn leads(&self) -> &[Exp] {
        &self.leads
    }
    /// Index j with e in Delta_j, or None for the complement region.
    pub fn region(&self, e: &[u32]) -> Option<usize> {
        self.leads.iter().position(|l| divides(l, e))
    }
    pub fn in_delta(&self, j: usize, e: &[u32]) -> bool {
        self.region(e) == Some(j)
    }
    pub fn in_complement(&self, e: &[u32]) -> bool {
        self.region(e).is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{Homogenization, RingSignature};
    use crate::scalar::int;
    use std::sync::Arc;

    #[test]
    fn degrevlex_and_local() {
        let o = MatrixOrder::degrevlex(2);
        assert_eq!(o.compare(&[1, 0], &[0, 1]).unwrap(), Ordering::Greater);
        assert_eq!(o.compare(&[2, 1], &[2, 1]).unwrap(), Ordering::Equal);
        assert_eq!(o.compare(&[1, 1, 0], &[0, 1]), Err(OrderError::Arity { expected: 2, got: 3 }));
        let l = MatrixOrder::negdegrevlex(2);
        assert_eq!(l.compare(&[1, 0], &[0, 0]).unwrap(), Ordering::Less);
        // degrevlex: x*y^2... reverse lex: smaller last exponent is larger
        assert_eq!(MatrixOrder::degrevlex(3).compare(&[1, 1, 0], &[2, 0, 0]).unwrap(), Ordering::Less);
        assert_eq!(MatrixOrder::degrevlex(3).compare(&[0, 2, 0], &[1, 0, 1]).unwrap(), Ordering::Greater);
    }

    #[test]
    fn weight_refinement() {
        let sig = RingSignature::commutative(2);
        let base = MatrixOrder::degrevlex(2);
        let w = WeightVector::commutative(vec![int(-1), int(-1)]);
        let o = base.refine_by_weight(&w, &sig).unwrap();
        assert_eq!(o.compare(&[3, 0], &[0, 2]).unwrap(), Ordering::Less);
        let zero = WeightVector::commutative(vec![int(0), int(0)]);
        assert_eq!(base.refine_by_weight(&zero, &sig).unwrap(), base);
        let w = WeightVector::commutative(vec![int(-2), int(-3)]);
        let o = base.refine_by_weight(&w, &sig).unwrap();
        assert_eq!(o.key(&[3, 0])[0], o.key(&[0, 2])[0]);
        assert_eq!(o.compare(&[3, 0], &[0, 2]).unwrap(), base.compare(&[3, 0], &[0, 2]).unwrap());
        let frac = WeightVector::commutative(vec![crate::scalar::frac(-1, 2), crate::scalar::frac(-1, 3)]);
        assert_eq!(base.refine_by_weight(&frac, &sig).unwrap().rows()[0], vec![-3, -2]);
    }

    #[test]
    fn lifted_order() {
        let d = RingSignature::weyl(1);
        let h01 = d.with_homogenization(Homogenization::H01).unwrap();
        let o = MatrixOrder::weyl_admissible(1, 2).lift_to_h(&h01);
        // (alpha, beta, k): equal k + |beta| falls through to the base order.
        assert_eq!(o.compare(&[0, 0, 2], &[0, 1, 1]).unwrap(), Ordering::Less);
        assert_eq!(o.key(&[0, 0, 2])[0], o.key(&[0, 1, 1])[0]);
        assert_eq!(o.compare(&[0, 0, 1], &[0, 0, 0]).unwrap(), Ordering::Greater);
        let base = MatrixOrder::weyl_admissible(1, 2);
        for (a, b) in [([2u32, 1u32], [0u32, 1u32]), ([1, 0], [0, 0]), ([0, 1], [1, 1])] {
            let la = [a[0], a[1], 0];
            let lb = [b[0], b[1], 0];
            assert_eq!(o.compare(&la, &lb).unwrap(), base.compare(&a, &b).unwrap());
        }
        assert!(o.flags().well_order && o.flags().admissible);
    }

    #[test]
    fn leading_data_of_cusp() {
        let s = Arc::new(RingSignature::commutative(2));
        let f = &WeylElement::x(&s, 0).pow(3) - &WeylElement::x(&s, 1).pow(2);
        let w = WeightVector::commutative(vec![int(-1), int(-1)]);
        let o = MatrixOrder::degrevlex(2).refine_by_weight(&w, &s).unwrap();
        let ld = leading_data(&f, &o).unwrap();
        assert_eq!(ld.exp, vec![0, 2]);
        assert_eq!(ld.coeff, int(-1));
        let g = WeylElement::x(&s, 0).scale(&int(5));
        let ld = leading_data(&g, &o).unwrap();
        assert_eq!((ld.exp, ld.coeff), (vec![1, 0], int(5)));
        assert_eq!(leading_data(&WeylElement::zero(&s), &o), Err(OrderError::Zero));
    }

    #[test]
    fn lead_of_homogeneous_is_lead_of_initial_form() {
        let d = Arc::new(RingSignature::weyl(2));
        let x = |i| WeylElement::x(&d, i);
        let dd = |i| WeylElement::d(&d, i);
        let p = &(&(&x(0) * &dd(0)) + &(&x(1) * &dd(1))) + &(&dd(0) + &(&x(0) * &x(1)));
        let hp = p.homogenize(&Homogenization::H01).unwrap();
        let sig = hp.signature().clone();
        let w = WeightVector::weyl(vec![int(-1), int(-2)], vec![int(2), int(3)]);
        let base = MatrixOrder::weyl_admissible(2, 4).lift_to_h(&sig);
        let refined = MatrixOrder::weyl_admissible(2, 4)
            .refine_by_weight(&w, &RingSignature::weyl(2))
            .unwrap()
            .lift_to_h(&sig);
        let lhs = leading_data(&hp, &refined).unwrap().exp;
        let rhs = leading_data(&hp.initial_form(&w).unwrap(), &base).unwrap().exp;
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn delta_partition() {
        let p = DeltaPartition::new(vec![vec![1, 0], vec![0, 1]]);
        assert_eq!(p.region(&[1, 1]), Some(0));
        assert_eq!(p.region(&[0, 3]), Some(1));
        assert!(p.in_complement(&[0, 0]));
    }

    #[test]
    fn order_is_multiplicative() {
        let o = MatrixOrder::weyl_admissible(2, 4);
        let es = [[0u32, 1, 2, 0], [1, 0, 0, 1], [2, 2, 0, 0], [0, 0, 1, 1]];
        for a in &es {
            for b in &es {
                for d in &es {
                    let ad: Vec<u32> = a.iter().zip(d).map(|(x, y)| x + y).collect();
                    let bd: Vec<u32> = b.iter().zip(d).map(|(x, y)| x + y).collect();
                    assert_eq!(o.cmp_exp(a, b), o.cmp_exp(&ad, &bd));
                }
            }
        }
    }
}
