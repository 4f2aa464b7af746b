//! Polynomial rings and rings of differential operators, possibly homogenized.
//!
//! Exponent vectors are laid out as `[x_1..x_n, d_1..d_n, h, h']`, with the
//! derivation block present only for Weyl signatures and the trailing slots
//! only when the homogenization introduces them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::scalar::{big, fmt_scalar, primitive, Scalar};

pub type Exp = Vec<u32>;
pub type SupportSet = BTreeSet<Exp>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("ring signature mismatch: {0} vs {1}")]
    SignatureMismatch(String, String),
    #[error("invalid ring signature: {0}")]
    InvalidSignature(String),
    #[error("homogenization {mode} does not apply to {sig}")]
    ModeMismatch { mode: String, sig: String },
    #[error("operation undefined on the zero element")]
    Zero,
    #[error("weight vector has length {got}, expected {expected}")]
    WeightArity { expected: usize, got: usize },
    #[error("element is not homogeneous: {0}")]
    NotHomogeneous(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Commutative,
    Weyl,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Homogenization {
    None,
    H01,
    H11,
    DoubleH,
    AlphaH(Vec<u32>),
}

impl fmt::Display for Homogenization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Homogenization::None => write!(f, "none"),
            Homogenization::H01 => write!(f, "h01"),
            Homogenization::H11 => write!(f, "h11"),
            Homogenization::DoubleH => write!(f, "double"),
            Homogenization::AlphaH(a) => {
                let s: Vec<String> = a.iter().map(|x| x.to_string()).collect();
                write!(f, "alpha({})", s.join(","))
            }
        }
    }
}

/// The homogenizing variable to specialize at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum HVar {
    H,
    HPrime,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RingSignature {
    n: usize,
    kind: Kind,
    homog: Homogenization,
    /// Pairs (x_i, d_i) that commute; set for associated graded rings.
    commuting: Vec<bool>,
}

impl RingSignature {
    pub fn new(n: usize, kind: Kind, homog: Homogenization) -> Result<Self, AlgebraError> {
        match (&homog, kind) {
            (Homogenization::H01 | Homogenization::H11 | Homogenization::DoubleH, Kind::Commutative) => {
                return Err(AlgebraError::InvalidSignature(format!(
                    "{homog} requires a Weyl signature"
                )))
            }
            (Homogenization::AlphaH(a), Kind::Commutative) => {
                if a.len() != n || a.iter().any(|&x| x == 0) {
                    return Err(AlgebraError::InvalidSignature(
                        "alpha must have n strictly positive entries".into(),
                    ));
                }
            }
            (Homogenization::AlphaH(_), Kind::Weyl) => {
                return Err(AlgebraError::InvalidSignature(
                    "alpha homogenization requires a commutative signature".into(),
                ))
            }
            _ => {}
        }
        Ok(RingSignature { n, kind, homog, commuting: vec![false; n] })
    }

    pub fn commutative(n: usize) -> Self {
        RingSignature { n, kind: Kind::Commutative, homog: Homogenization::None, commuting: vec![false; n] }
    }

    pub fn weyl(n: usize) -> Self {
        RingSignature { n, kind: Kind::Weyl, homog: Homogenization::None, commuting: vec![false; n] }
    }

    pub fn with_homogenization(&self, homog: Homogenization) -> Result<Self, AlgebraError> {
        let mut s = RingSignature::new(self.n, self.kind, homog)?;
        s.commuting = self.commuting.clone();
        Ok(s)
    }

    /// Same ring with the listed pairs made commutative.
    pub fn with_commuting(&self, mask: &[bool]) -> Self {
        let mut s = self.clone();
        s.commuting = mask.to_vec();
        s
    }

    /// The associated graded ring for `w`: pairs with u_i + v_i > 0 commute.
    pub fn graded(&self, w: &WeightVector) -> Self {
        if self.kind == Kind::Commutative {
            return self.clone();
        }
        let mask: Vec<bool> = (0..self.n)
            .map(|i| self.commuting[i] || (&w.u()[i] + &w.v()[i]).is_positive())
            .collect();
        self.with_commuting(&mask)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn kind(&self) -> Kind {
        self.kind
    }
    pub fn is_weyl(&self) -> bool {
        self.kind == Kind::Weyl
    }
    pub fn homogenization(&self) -> &Homogenization {
        &self.homog
    }
    pub fn commuting(&self) -> &[bool] {
        &self.commuting
    }
    pub fn has_h(&self) -> bool {
        self.homog != Homogenization::None
    }
    pub fn has_hprime(&self) -> bool {
        self.homog == Homogenization::DoubleH
    }
    /// Number of x and derivation slots: the arity of weight vectors.
    pub fn weight_dim(&self) -> usize {
        if self.is_weyl() {
            2 * self.n
        } else {
            self.n
        }
    }
    pub fn nslots(&self) -> usize {
        self.weight_dim() + usize::from(self.has_h()) + usize::from(self.has_hprime())
    }
    pub fn h_slot(&self) -> Option<usize> {
        self.has_h().then(|| self.weight_dim())
    }
    pub fn hprime_slot(&self) -> Option<usize> {
        self.has_hprime().then(|| self.weight_dim() + 1)
    }

    /// Per-slot degrees of the grading that the homogenization makes homogeneous.
    /// Unhomogenized signatures use total degree.
    pub fn degree_weights(&self) -> Vec<u32> {
        let n = self.n;
        let mut d = vec![1u32; self.nslots()];
        match &self.homog {
            Homogenization::H01 => {
                for x in d.iter_mut().take(n) {
                    *x = 0;
                }
            }
            Homogenization::AlphaH(a) => d[..n].copy_from_slice(a),
            _ => {}
        }
        d
    }

    /// Slot increments produced by one commutator `d_i x_i - x_i d_i`.
    fn commutator(&self) -> (u32, u32) {
        match self.homog {
            Homogenization::H01 => (1, 0),
            Homogenization::H11 => (2, 0),
            Homogenization::DoubleH => (1, 1),
            _ => (0, 0),
        }
    }
}

impl fmt::Display for RingSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = match self.kind {
            Kind::Commutative => "poly",
            Kind::Weyl => "weyl",
        };
        write!(f, "{k}(n={}, {})", self.n, self.homog)
    }
}

/// Weight on the x-slots (u) and, for Weyl rings, the derivation slots (v).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeightVector {
    u: Vec<Scalar>,
    v: Option<Vec<Scalar>>,
}

impl WeightVector {
    pub fn commutative(u: Vec<Scalar>) -> Self {
        WeightVector { u, v: None }
    }
    pub fn weyl(u: Vec<Scalar>, v: Vec<Scalar>) -> Self {
        assert_eq!(u.len(), v.len(), "u and v must have equal length");
        WeightVector { u, v: Some(v) }
    }
    /// Split a flat vector `(u, v)` according to the signature.
    pub fn from_flat(sig: &RingSignature, w: &[Scalar]) -> Result<Self, AlgebraError> {
        if w.len() != sig.weight_dim() {
            return Err(AlgebraError::WeightArity { expected: sig.weight_dim(), got: w.len() });
        }
        Ok(if sig.is_weyl() {
            WeightVector::weyl(w[..sig.n()].to_vec(), w[sig.n()..].to_vec())
        } else {
            WeightVector::commutative(w.to_vec())
        })
    }
    pub fn from_ints(sig: &RingSignature, w: &[i64]) -> Result<Self, AlgebraError> {
        let q: Vec<Scalar> = w.iter().map(|&x| crate::scalar::int(x)).collect();
        Self::from_flat(sig, &q)
    }
    pub fn u(&self) -> &[Scalar] {
        &self.u
    }
    /// Derivation weights; zero-length for commutative weights.
    pub fn v(&self) -> &[Scalar] {
        self.v.as_deref().unwrap_or(&[])
    }
    pub fn is_weyl(&self) -> bool {
        self.v.is_some()
    }
    pub fn flat(&self) -> Vec<Scalar> {
        let mut f = self.u.clone();
        f.extend(self.v().iter().cloned());
        f
    }
    pub fn dim(&self) -> usize {
        self.u.len() + self.v().len()
    }
    pub fn in_uloc(&self) -> bool {
        self.u.iter().all(|x| !x.is_positive())
    }
    pub fn in_uloc_open(&self) -> bool {
        self.u.iter().all(|x| x.is_negative())
    }
    pub fn in_wloc(&self) -> bool {
        self.in_uloc() && self.u.iter().zip(self.v()).all(|(a, b)| !(a + b).is_negative())
    }
    pub fn in_wloc_open(&self) -> bool {
        self.in_uloc_open() && self.u.iter().zip(self.v()).all(|(a, b)| (a + b).is_positive())
    }
    /// Weight on every exponent slot of `sig` (zero on h and h').
    pub fn slot_weights(&self, sig: &RingSignature) -> Vec<Scalar> {
        let mut s = self.flat();
        s.resize(sig.nslots(), Scalar::zero());
        s
    }
    /// Positive integer multiple of `slot_weights`.
    pub fn integer_slot_weights(&self, sig: &RingSignature) -> Vec<BigInt> {
        primitive(&self.slot_weights(sig))
    }
    fn check(&self, sig: &RingSignature) -> Result<(), AlgebraError> {
        if self.dim() != sig.weight_dim() || self.is_weyl() != sig.is_weyl() {
            return Err(AlgebraError::WeightArity { expected: sig.weight_dim(), got: self.dim() });
        }
        Ok(())
    }
    pub fn weight_of(&self, e: &[u32]) -> Scalar {
        self.flat()
            .iter()
            .zip(e)
            .filter(|(_, &k)| k != 0)
            .fold(Scalar::zero(), |acc, (w, &k)| acc + w * Scalar::from_integer(BigInt::from(k)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    sig: Arc<RingSignature>,
    terms: BTreeMap<Exp, Scalar>,
}

fn binomial(n: u32, k: u32) -> BigInt {
    let mut r = BigInt::one();
    for i in 0..k {
        r = r * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    r
}

fn falling(n: u32, k: u32) -> BigInt {
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i))
}

/// Normally ordered product of two monomials, accumulated into `out` with factor `c`.
pub(crate) fn mul_monomials(sig: &RingSignature, a: &[u32], b: &[u32], c: &Scalar, out: &mut BTreeMap<Exp, Scalar>) {
    if !sig.is_weyl() {
        let e: Exp = a.iter().zip(b).map(|(x, y)| x + y).collect();
        add_term(out, e, c.clone());
        return;
    }
    let n = sig.n();
    let (hinc, hpinc) = sig.commutator();
    // Per index: list of (k, coefficient) for d_i^{a} x_i^{b} expansion.
    let mut choices: Vec<Vec<(u32, BigInt)>> = Vec::with_capacity(n);
    for i in 0..n {
        let da = a[n + i];
        let xb = b[i];
        let kmax = if sig.commuting()[i] { 0 } else { da.min(xb) };
        choices.push((0..=kmax).map(|k| (k, binomial(da, k) * falling(xb, k))).collect());
    }
    let mut idx = vec![0usize; n];
    loop {
        let mut e: Exp = a.iter().zip(b).map(|(x, y)| x + y).collect();
        let mut coef = BigInt::one();
        let mut ksum = 0u32;
        for i in 0..n {
            let (k, ref cf) = choices[i][idx[i]];
            e[i] -= k;
            e[n + i] -= k;
            ksum += k;
            coef *= cf;
        }
        if ksum > 0 {
            if let Some(hs) = sig.h_slot() {
                e[hs] += hinc * ksum;
            }
            if let Some(hp) = sig.hprime_slot() {
                e[hp] += hpinc * ksum;
            }
        }
        add_term(out, e, c * big(&coef));
        // advance odometer
        let mut i = 0;
        loop {
            if i == n {
                return;
            }
            idx[i] += 1;
            if idx[i] < choices[i].len() {
                break;
            }
            idx[i] = 0;
            i += 1;
        }
    }
}

pub(crate) fn add_term(out: &mut BTreeMap<Exp, Scalar>, e: Exp, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match out.entry(e) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

impl WeylElement {
    pub fn zero(sig: &Arc<RingSignature>) -> Self {
        WeylElement { sig: sig.clone(), terms: BTreeMap::new() }
    }
    pub fn constant(sig: &Arc<RingSignature>, c: Scalar) -> Self {
        Self::monomial(sig, vec![0; sig.nslots()], c)
    }
    pub fn one(sig: &Arc<RingSignature>) -> Self {
        Self::constant(sig, Scalar::one())
    }
    pub fn monomial(sig: &Arc<RingSignature>, e: Exp, c: Scalar) -> Self {
        assert_eq!(e.len(), sig.nslots(), "exponent arity does not match the signature");
        let mut terms = BTreeMap::new();
        add_term(&mut terms, e, c);
        WeylElement { sig: sig.clone(), terms }
    }
    pub fn from_terms<I: IntoIterator<Item = (Exp, Scalar)>>(sig: &Arc<RingSignature>, it: I) -> Self {
        let mut terms = BTreeMap::new();
        for (e, c) in it {
            assert_eq!(e.len(), sig.nslots(), "exponent arity does not match the signature");
            add_term(&mut terms, e, c);
        }
        WeylElement { sig: sig.clone(), terms }
    }
    pub(crate) fn from_map(sig: &Arc<RingSignature>, terms: BTreeMap<Exp, Scalar>) -> Self {
        WeylElement { sig: sig.clone(), terms }
    }
    fn unit_exp(sig: &RingSignature, slot: usize) -> Exp {
        let mut e = vec![0; sig.nslots()];
        e[slot] = 1;
        e
    }
    pub fn x(sig: &Arc<RingSignature>, i: usize) -> Self {
        Self::monomial(sig, Self::unit_exp(sig, i), Scalar::one())
    }
    pub fn d(sig: &Arc<RingSignature>, i: usize) -> Self {
        assert!(sig.is_weyl(), "derivations exist only in Weyl signatures");
        Self::monomial(sig, Self::unit_exp(sig, sig.n() + i), Scalar::one())
    }
    pub fn h(sig: &Arc<RingSignature>) -> Self {
        Self::monomial(sig, Self::unit_exp(sig, sig.h_slot().expect("no h slot")), Scalar::one())
    }
    pub fn hprime(sig: &Arc<RingSignature>) -> Self {
        Self::monomial(sig, Self::unit_exp(sig, sig.hprime_slot().expect("no h' slot")), Scalar::one())
    }

    pub fn signature(&self) -> &Arc<RingSignature> {
        &self.sig
    }
    pub fn terms(&self) -> &BTreeMap<Exp, Scalar> {
        &self.terms
    }
    pub fn into_terms(self) -> BTreeMap<Exp, Scalar> {
        self.terms
    }
    pub fn support(&self) -> SupportSet {
        self.terms.keys().cloned().collect()
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn len(&self) -> usize {
        self.terms.len()
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_else(Scalar::zero)
    }

    fn same_sig(&self, other: &Self) -> Result<(), AlgebraError> {
        if self.sig != other.sig && *self.sig != *other.sig {
            return Err(AlgebraError::SignatureMismatch(self.sig.to_string(), other.sig.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_sig(other)?;
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            add_term(&mut terms, e.clone(), c.clone());
        }
        Ok(WeylElement { sig: self.sig.clone(), terms })
    }

    pub fn sub(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(&self.sig);
        }
        WeylElement { sig: self.sig.clone(), terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, AlgebraError> {
        self.same_sig(other)?;
        let mut out = BTreeMap::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                mul_monomials(&self.sig, a, b, &(ca * cb), &mut out);
            }
        }
        Ok(WeylElement { sig: self.sig.clone(), terms: out })
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut r = Self::one(&self.sig);
        for _ in 0..k {
            r = r.multiply(self).expect("same signature");
        }
        r
    }

    /// Reinterpret the terms in another signature with the same slot layout.
    pub fn with_signature(&self, sig: &Arc<RingSignature>) -> Self {
        assert_eq!(sig.nslots(), self.sig.nslots(), "slot layouts differ");
        WeylElement { sig: sig.clone(), terms: self.terms.clone() }
    }

    /// Degree in the grading associated with the signature's homogenization.
    pub fn degree_of(&self, e: &[u32]) -> u64 {
        self.sig.degree_weights().iter().zip(e).map(|(&w, &k)| u64::from(w) * u64::from(k)).sum()
    }

    pub fn degree(&self) -> Option<u64> {
        self.terms.keys().map(|e| self.degree_of(e)).max()
    }

    /// Homogeneity in the sense of the signature (|beta|+k for h01, total degree
    /// for h11 and double, alpha-degree for alpha homogenization).
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| self.degree_of(e));
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn homogenize(&self, mode: &Homogenization) -> Result<Self, AlgebraError> {
        let sig = &*self.sig;
        let mismatch = || AlgebraError::ModeMismatch { mode: mode.to_string(), sig: sig.to_string() };
        let n = sig.n();
        let target = match (mode, sig.kind(), sig.homogenization()) {
            (Homogenization::H01 | Homogenization::H11, Kind::Weyl, Homogenization::None) => {
                sig.with_homogenization(mode.clone())?
            }
            (Homogenization::DoubleH, Kind::Weyl, Homogenization::H01) => {
                if !self.is_homogeneous() {
                    return Err(AlgebraError::NotHomogeneous(self.to_string()));
                }
                sig.with_homogenization(Homogenization::DoubleH)?
            }
            (Homogenization::AlphaH(_), Kind::Commutative, Homogenization::None) => {
                sig.with_homogenization(mode.clone())?
            }
            _ => return Err(mismatch()),
        };
        let deg = |e: &[u32]| -> u64 {
            match mode {
                Homogenization::H01 => e[n..2 * n].iter().map(|&k| u64::from(k)).sum(),
                Homogenization::H11 => e[..2 * n].iter().map(|&k| u64::from(k)).sum(),
                Homogenization::DoubleH => e.iter().map(|&k| u64::from(k)).sum(),
                Homogenization::AlphaH(a) => a.iter().zip(e).map(|(&w, &k)| u64::from(w) * u64::from(k)).sum(),
                Homogenization::None => 0,
            }
        };
        let d = self.terms.keys().map(|e| deg(e)).max().unwrap_or(0);
        let target = Arc::new(target);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = e.clone();
            ne.push((d - deg(e)) as u32);
            (ne, c.clone())
        });
        Ok(Self::from_terms(&target, terms))
    }

    pub fn dehomogenize(&self, var: HVar) -> Result<Self, AlgebraError> {
        let sig = &*self.sig;
        let (slot, homog) = match (var, sig.homogenization()) {
            (HVar::H, Homogenization::H01 | Homogenization::H11 | Homogenization::AlphaH(_)) => {
                (sig.h_slot().unwrap(), Homogenization::None)
            }
            (HVar::HPrime, Homogenization::DoubleH) => (sig.hprime_slot().unwrap(), Homogenization::H01),
            _ => {
                return Err(AlgebraError::ModeMismatch { mode: format!("{var:?}=1"), sig: sig.to_string() })
            }
        };
        let target = Arc::new(sig.with_homogenization(homog)?);
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = e.clone();
            ne.remove(slot);
            (ne, c.clone())
        });
        Ok(Self::from_terms(&target, terms))
    }

    pub fn weight_order_of(&self, w: &WeightVector) -> Result<Scalar, AlgebraError> {
        w.check(&self.sig)?;
        self.terms.keys().map(|e| w.weight_of(e)).max().ok_or(AlgebraError::Zero)
    }

    pub fn initial_form(&self, w: &WeightVector) -> Result<Self, AlgebraError> {
        w.check(&self.sig)?;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let m = self.weight_order_of(w)?;
        let terms = self.terms.iter().filter(|(e, _)| w.weight_of(e) == m).map(|(e, c)| (e.clone(), c.clone()));
        Ok(Self::from_terms(&self.sig, terms))
    }

    /// Split into components that are homogeneous for `w`, heaviest first.
    pub fn weight_components(&self, w: &WeightVector) -> Vec<Self> {
        let mut parts: BTreeMap<Scalar, BTreeMap<Exp, Scalar>> = BTreeMap::new();
        for (e, c) in &self.terms {
            parts.entry(w.weight_of(e)).or_default().insert(e.clone(), c.clone());
        }
        parts.into_iter().rev().map(|(_, t)| Self::from_map(&self.sig, t)).collect()
    }

    /// Substitute x_i -> x_i + x0_i (derivations and h untouched).
    pub fn shift_x(&self, x0: &[Scalar]) -> Self {
        let n = self.sig.n();
        assert_eq!(x0.len(), n, "base point arity");
        let mut out = BTreeMap::new();
        for (e, c) in &self.terms {
            // Expand prod_i (x_i + a_i)^{e_i}, keep the rest of the exponent.
            let mut partial: Vec<(Exp, Scalar)> = vec![(e.clone(), c.clone())];
            for i in 0..n {
                let k = e[i];
                if k == 0 || x0[i].is_zero() {
                    continue;
                }
                let mut next = Vec::new();
                for (pe, pc) in &partial {
                    for j in 0..=k {
                        let mut ne = pe.clone();
                        ne[i] = j;
                        let coef = big(&binomial(k, j)) * pow_scalar(&x0[i], k - j);
                        next.push((ne, pc * coef));
                    }
                }
                partial = next;
            }
            for (pe, pc) in partial {
                add_term(&mut out, pe, pc);
            }
        }
        WeylElement { sig: self.sig.clone(), terms: out }
    }

    pub fn display_with(&self, names: &VarNames) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = names.monomial(&self.sig, e);
            let neg = c.is_negative();
            let a = c.abs();
            let body = if mono.is_empty() {
                fmt_scalar(&a)
            } else if a.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_scalar(&a), mono)
            };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            out.push_str(&body);
        }
        out
    }
}

fn pow_scalar(x: &Scalar, k: u32) -> Scalar {
    (0..k).fold(Scalar::one(), |acc, _| acc * x)
}

/// Variable names used for printing; derivations print as `d<name>`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarNames {
    pub x: Vec<String>,
}

impl VarNames {
    pub fn new(x: Vec<String>) -> Self {
        VarNames { x }
    }
    pub fn default_for(n: usize) -> Self {
        VarNames { x: (1..=n).map(|i| format!("x{i}")).collect() }
    }
    pub fn slot_name(&self, sig: &RingSignature, slot: usize) -> String {
        let n = sig.n();
        if slot < n {
            self.x[slot].clone()
        } else if sig.is_weyl() && slot < 2 * n {
            format!("d{}", self.x[slot - n])
        } else if Some(slot) == sig.h_slot() {
            "h".into()
        } else {
            "hp".into()
        }
    }
    pub fn monomial(&self, sig: &RingSignature, e: &[u32]) -> String {
        let mut parts = Vec::new();
        for (s, &k) in e.iter().enumerate() {
            if k == 0 {
                continue;
            }
            let name = self.slot_name(sig, s);
            parts.push(if k == 1 { name } else { format!("{name}^{k}") });
        }
        parts.join("*")
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&VarNames::default_for(self.sig.n())))
    }
}

impl std::ops::Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        WeylElement::add(self, rhs).expect("signature mismatch in +")
    }
}

impl std::ops::Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        WeylElement::sub(self, rhs).expect("signature mismatch in -")
    }
}

impl std::ops::Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.multiply(rhs).expect("signature mismatch in *")
    }
}

impl std::ops::Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        WeylElement::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn sig(s: RingSignature) -> Arc<RingSignature> {
        Arc::new(s)
    }

    #[test]
    fn additive_inverse_and_merge() {
        let s = sig(RingSignature::commutative(2));
        let x = WeylElement::x(&s, 0);
        assert!((&x + &(-&x)).is_zero());
        let y = WeylElement::x(&s, 1);
        let f = &x.pow(3) - &y.pow(2);
        assert_eq!(f.len(), 2);
        let h = sig(RingSignature::weyl(1).with_homogenization(Homogenization::H01).unwrap());
        let xd = &WeylElement::x(&h, 0) * &WeylElement::d(&h, 0);
        let p = &(&xd + &WeylElement::h(&h)) + &xd;
        assert_eq!(p.coeff(&[1, 1, 0]), int(2));
        assert_eq!(p.coeff(&[0, 0, 1]), int(1));
    }

    #[test]
    fn commutators() {
        let h01 = sig(RingSignature::weyl(1).with_homogenization(Homogenization::H01).unwrap());
        let p = &WeylElement::d(&h01, 0) * &WeylElement::x(&h01, 0);
        assert_eq!(p, WeylElement::from_terms(&h01, [(vec![1, 1, 0], int(1)), (vec![0, 0, 1], int(1))]));

        let h11 = sig(RingSignature::weyl(1).with_homogenization(Homogenization::H11).unwrap());
        let p = &WeylElement::d(&h11, 0) * &WeylElement::x(&h11, 0);
        assert_eq!(p, WeylElement::from_terms(&h11, [(vec![1, 1, 0], int(1)), (vec![0, 0, 2], int(1))]));

        let hd = sig(RingSignature::weyl(1).with_homogenization(Homogenization::H01).unwrap()
            .with_homogenization(Homogenization::DoubleH).unwrap());
        let p = &WeylElement::d(&hd, 0) * &WeylElement::x(&hd, 0).pow(2);
        assert_eq!(
            p,
            WeylElement::from_terms(&hd, [(vec![2, 1, 0, 0], int(1)), (vec![1, 0, 1, 1], int(2))])
        );
    }

    #[test]
    fn graded_ring_commutes() {
        let s = RingSignature::weyl(1);
        let w = WeightVector::weyl(vec![int(-1)], vec![int(2)]);
        let g = sig(s.graded(&w));
        let p = &WeylElement::d(&g, 0) * &WeylElement::x(&g, 0);
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn homogenizations() {
        let d = sig(RingSignature::weyl(1));
        let x = WeylElement::x(&d, 0);
        let dx = WeylElement::d(&d, 0);
        let p = &(&x * &dx) + &WeylElement::one(&d);
        let hp = p.homogenize(&Homogenization::H01).unwrap();
        let s01 = hp.signature().clone();
        assert_eq!(hp, WeylElement::from_terms(&s01, [(vec![1, 1, 0], int(1)), (vec![0, 0, 1], int(1))]));
        assert_eq!(hp.dehomogenize(HVar::H).unwrap(), p);

        let q = &dx + &x.pow(2);
        let hq = q.homogenize(&Homogenization::H11).unwrap();
        let s11 = hq.signature().clone();
        assert_eq!(hq, WeylElement::from_terms(&s11, [(vec![0, 1, 1], int(1)), (vec![2, 0, 0], int(1))]));

        let c = sig(RingSignature::commutative(2));
        let f = &(&WeylElement::x(&c, 0).pow(2) + &WeylElement::x(&c, 1)) + &WeylElement::one(&c);
        let hf = f.homogenize(&Homogenization::AlphaH(vec![1, 2])).unwrap();
        assert!(hf.is_homogeneous());
        assert_eq!(hf.degree(), Some(2));
        assert_eq!(hf.dehomogenize(HVar::H).unwrap(), f);
    }

    #[test]
    fn double_homogenization_requires_h01_form() {
        let d = sig(RingSignature::weyl(1));
        let p = &WeylElement::d(&d, 0) + &WeylElement::x(&d, 0);
        let p01 = p.homogenize(&Homogenization::H01).unwrap();
        assert!(p01.homogenize(&Homogenization::DoubleH).is_ok());
        assert!(p.homogenize(&Homogenization::DoubleH).is_err());
        assert!(p.homogenize(&Homogenization::AlphaH(vec![1])).is_err());
    }

    #[test]
    fn initial_forms_of_cusp() {
        let c = sig(RingSignature::commutative(2));
        let f = &WeylElement::x(&c, 0).pow(3) - &WeylElement::x(&c, 1).pow(2);
        let w = WeightVector::commutative(vec![int(-2), int(-3)]);
        assert_eq!(f.initial_form(&w).unwrap(), f);
        let w = WeightVector::commutative(vec![int(-1), int(-1)]);
        assert_eq!(f.initial_form(&w).unwrap(), -&WeylElement::x(&c, 1).pow(2));
        assert_eq!(f.weight_order_of(&w).unwrap(), int(-2));
        assert!(WeylElement::zero(&c).weight_order_of(&w).is_err());
    }

    #[test]
    fn shift_base_point() {
        let c = sig(RingSignature::commutative(2));
        let f = &(&WeylElement::one(&c) + &WeylElement::x(&c, 0)) + &WeylElement::x(&c, 1);
        let g = f.shift_x(&[int(-1), int(0)]);
        assert_eq!(g, &WeylElement::x(&c, 0) + &WeylElement::x(&c, 1));
        assert_eq!(f.shift_x(&[int(0), int(0)]), f);
    }

    #[test]
    fn display_round() {
        let c = sig(RingSignature::commutative(2));
        let f = &WeylElement::x(&c, 0).pow(3) - &WeylElement::x(&c, 1).pow(2).scale(&int(2));
        assert_eq!(f.display_with(&VarNames::new(vec!["x".into(), "y".into()])), "x^3 - 2*y^2");
    }
}
