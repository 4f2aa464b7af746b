//! Term lists kept sorted by a fixed matrix order, with cached order keys.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{mul_monomials, Exp, RingSignature, WeylElement};
use crate::order::MatrixOrder;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Term {
    pub key: Vec<i128>,
    pub exp: Exp,
    pub c: Scalar,
}

fn cmp_terms(a: &Term, b: &Term) -> Ordering {
    a.key.cmp(&b.key).then_with(|| a.exp.cmp(&b.exp))
}

/// Terms in strictly decreasing order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct SPoly {
    pub terms: Vec<Term>,
}

impl SPoly {
    pub fn from_map(map: BTreeMap<Exp, Scalar>, ord: &MatrixOrder) -> Self {
        let mut terms: Vec<Term> =
            map.into_iter().filter(|(_, c)| !c.is_zero()).map(|(e, c)| Term { key: ord.key(&e), exp: e, c }).collect();
        terms.sort_by(|a, b| cmp_terms(b, a));
        SPoly { terms }
    }

    pub fn from_element(p: &WeylElement, ord: &MatrixOrder) -> Self {
        Self::from_map(p.terms().clone(), ord)
    }

    pub fn to_element(&self, sig: &Arc<RingSignature>) -> WeylElement {
        WeylElement::from_terms(sig, self.terms.iter().map(|t| (t.exp.clone(), t.c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn lead(&self) -> Option<&Term> {
        self.terms.first()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return SPoly::default();
        }
        SPoly { terms: self.terms.iter().map(|t| Term { c: &t.c * c, ..t.clone() }).collect() }
    }

    pub fn make_monic(&mut self) {
        if let Some(l) = self.terms.first() {
            let inv = Scalar::one() / &l.c;
            for t in &mut self.terms {
                t.c = &t.c * &inv;
            }
        }
    }

    /// self - c * other, by merging.
    pub fn sub_scaled(&self, c: &Scalar, other: &SPoly) -> SPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let a = &self.terms;
        let b = &other.terms;
        while i < a.len() || j < b.len() {
            let ord = if i == a.len() {
                Ordering::Less
            } else if j == b.len() {
                Ordering::Greater
            } else {
                cmp_terms(&a[i], &b[j])
            };
            match ord {
                Ordering::Greater => {
                    out.push(a[i].clone());
                    i += 1;
                }
                Ordering::Less => {
                    out.push(Term { c: -(&b[j].c * c), ..b[j].clone() });
                    j += 1;
                }
                Ordering::Equal => {
                    let v = &a[i].c - &b[j].c * c;
                    if !v.is_zero() {
                        out.push(Term { c: v, ..a[i].clone() });
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        SPoly { terms: out }
    }

    /// Left product m * self for the monomial m (coefficient one).
    pub fn mul_monomial_left(&self, sig: &RingSignature, ord: &MatrixOrder, m: &[u32]) -> SPoly {
        let commutes = !sig.is_weyl() || {
            let n = sig.n();
            (0..n).all(|i| sig.commuting()[i] || m[n + i] == 0)
        };
        if commutes {
            // Exponent shift: the order is multiplicative, so sortedness is kept.
            let km = ord.key(m);
            let terms = self
                .terms
                .iter()
                .map(|t| Term {
                    key: t.key.iter().zip(&km).map(|(a, b)| a + b).collect(),
                    exp: t.exp.iter().zip(m).map(|(a, b)| a + b).collect(),
                    c: t.c.clone(),
                })
                .collect();
            return SPoly { terms };
        }
        let mut out = BTreeMap::new();
        for t in &self.terms {
            mul_monomials(sig, m, &t.exp, &t.c, &mut out);
        }
        SPoly::from_map(out, ord)
    }
}
