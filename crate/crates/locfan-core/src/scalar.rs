//! Exact rational scalars and small helpers for integer vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    Scalar::new(BigInt::from(p), BigInt::from(q))
}

pub fn big(n: &BigInt) -> Scalar {
    Scalar::from_integer(n.clone())
}

/// Lowest common multiple of the denominators.
pub fn common_denominator(v: &[Scalar]) -> BigInt {
    v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

/// Scale a rational vector by a positive factor to a primitive integer vector.
/// The zero vector maps to the zero vector.
pub fn primitive(v: &[Scalar]) -> Vec<BigInt> {
    let d = common_denominator(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * big(&d)).to_integer()).collect();
    primitive_int(&ints)
}

pub fn primitive_int(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

pub fn to_scalars(v: &[BigInt]) -> Vec<Scalar> {
    v.iter().map(big).collect()
}

pub fn dot_int(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| acc + x * y)
}

/// Integer vector converted to machine integers, if every entry fits.
pub fn to_i128(v: &[BigInt]) -> Option<Vec<i128>> {
    v.iter().map(|x| x.to_i128()).collect()
}

pub fn fmt_scalar(x: &Scalar) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn is_nonneg(x: &Scalar) -> bool {
    !x.is_negative()
}
