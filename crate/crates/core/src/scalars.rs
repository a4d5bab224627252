//! Exact scalars over the rationals, prime fields of odd characteristic, and
//! quadratic extensions `k(√d)` of either.
//!
//! A [`Field`] is a cheap shared handle; every [`FieldElement`] carries one, so
//! elements can be combined with the usual operators. Mixing elements of
//! different fields is a programming error and panics.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Serializable description of a field, as found in configuration files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum FieldDescriptor {
    Rational,
    Prime { p: u64 },
    Quadratic { base: Box<FieldDescriptor>, d: String },
}

/// Shared handle to a validated field.
#[derive(Clone)]
pub struct Field(Arc<Kind>);

#[derive(Debug, PartialEq, Eq)]
enum Kind {
    Rational,
    Prime(u64),
    Quadratic { base: Field, d: Value },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Value {
    Rat(BigRational),
    Mod(u64),
    Quad(Box<(Value, Value)>),
}

/// An exact scalar together with the field it lives in.
#[derive(Clone)]
pub struct FieldElement {
    field: Field,
    value: Value,
}

const MAX_PRIME: u64 = 1 << 31;

fn is_odd_prime(p: u64) -> bool {
    if p < 3 || p % 2 == 0 {
        return false;
    }
    let mut q = 3;
    while q * q <= p {
        if p % q == 0 {
            return false;
        }
        q += 2;
    }
    true
}

fn mod_mul(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn mod_pow(mut base: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mod_mul(acc, base, p);
        }
        base = mod_mul(base, base, p);
        e >>= 1;
    }
    acc
}

/// Tonelli–Shanks. `x` must be a nonzero quadratic residue mod the odd prime `p`.
fn tonelli_shanks(x: u64, p: u64) -> u64 {
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while mod_pow(z, (p - 1) / 2, p) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = mod_pow(z, q, p);
    let mut t = mod_pow(x, q, p);
    let mut r = mod_pow(x, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0;
        let mut t2 = t;
        while t2 != 1 {
            t2 = mod_mul(t2, t2, p);
            i += 1;
        }
        let b = mod_pow(c, 1 << (m - i - 1), p);
        m = i;
        c = mod_mul(b, b, p);
        t = mod_mul(t, c, p);
        r = mod_mul(r, b, p);
    }
    r
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    let (num, den) = match s.split_once('/') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (s, "1"),
    };
    let num = BigInt::from_str(num).map_err(|_| bad())?;
    let den = BigInt::from_str(den).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(Error::DivisionByZero);
    }
    Ok(BigRational::new(num, den))
}

fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

fn rational_sqrt(q: &BigRational) -> Option<BigRational> {
    if q.is_negative() {
        return None;
    }
    let a = q.numer().sqrt();
    let b = q.denom().sqrt();
    (&a * &a == *q.numer() && &b * &b == *q.denom()).then(|| BigRational::new(a, b))
}

impl Field {
    pub fn rational() -> Field {
        Field(Arc::new(Kind::Rational))
    }

    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::CharTwo);
        }
        if !is_odd_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if p >= MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        Ok(Field(Arc::new(Kind::Prime(p))))
    }

    /// `base(√d)`; `d` must be a non-square of `base`.
    pub fn quadratic(base: &Field, d: &FieldElement) -> Result<Field> {
        if matches!(*base.0, Kind::Quadratic { .. }) {
            return Err(Error::NestedExtension);
        }
        if d.field != *base {
            return Err(Error::FieldMismatch);
        }
        if d.sqrt().is_some() {
            return Err(Error::SquareParameter(d.to_string()));
        }
        Ok(Field(Arc::new(Kind::Quadratic {
            base: base.clone(),
            d: d.value.clone(),
        })))
    }

    pub fn from_descriptor(desc: &FieldDescriptor) -> Result<Field> {
        match desc {
            FieldDescriptor::Rational => Ok(Field::rational()),
            FieldDescriptor::Prime { p } => Field::prime(*p),
            FieldDescriptor::Quadratic { base, d } => {
                let base = Field::from_descriptor(base)?;
                let d = base.parse(d)?;
                Field::quadratic(&base, &d)
            }
        }
    }

    pub fn descriptor(&self) -> FieldDescriptor {
        match &*self.0 {
            Kind::Rational => FieldDescriptor::Rational,
            Kind::Prime(p) => FieldDescriptor::Prime { p: *p },
            Kind::Quadratic { base, d } => FieldDescriptor::Quadratic {
                base: Box::new(base.descriptor()),
                d: base.elem(d.clone()).to_string(),
            },
        }
    }

    /// 0 for the rationals and their extensions.
    pub fn characteristic(&self) -> u64 {
        match &*self.0 {
            Kind::Rational => 0,
            Kind::Prime(p) => *p,
            Kind::Quadratic { base, .. } => base.characteristic(),
        }
    }

    /// Number of elements, for finite fields.
    pub fn order(&self) -> Option<u64> {
        match &*self.0 {
            Kind::Rational => None,
            Kind::Prime(p) => Some(*p),
            Kind::Quadratic { base, .. } => base.order().map(|q| q * q),
        }
    }

    /// The `i`-th element of a finite field in canonical order.
    pub fn element_at(&self, i: u64) -> Option<FieldElement> {
        let q = self.order()?;
        if i >= q {
            return None;
        }
        let value = match &*self.0 {
            Kind::Prime(_) => Value::Mod(i),
            Kind::Quadratic { base, .. } => {
                let p = base.order()?;
                Value::Quad(Box::new((Value::Mod(i / p), Value::Mod(i % p))))
            }
            Kind::Rational => unreachable!(),
        };
        Some(self.elem(value))
    }

    /// All elements of a finite field in canonical order.
    pub fn elements(&self) -> Option<Vec<FieldElement>> {
        let q = self.order()?;
        Some((0..q).map(|i| self.element_at(i).unwrap()).collect())
    }

    fn elem(&self, value: Value) -> FieldElement {
        FieldElement {
            field: self.clone(),
            value,
        }
    }

    fn zero_value(&self) -> Value {
        match &*self.0 {
            Kind::Rational => Value::Rat(BigRational::zero()),
            Kind::Prime(_) => Value::Mod(0),
            Kind::Quadratic { base, .. } => {
                Value::Quad(Box::new((base.zero_value(), base.zero_value())))
            }
        }
    }

    fn int_value(&self, k: i64) -> Value {
        match &*self.0 {
            Kind::Rational => Value::Rat(BigRational::from_integer(k.into())),
            Kind::Prime(p) => Value::Mod(k.rem_euclid(*p as i64) as u64),
            Kind::Quadratic { base, .. } => {
                Value::Quad(Box::new((base.int_value(k), base.zero_value())))
            }
        }
    }

    pub fn zero(&self) -> FieldElement {
        self.elem(self.zero_value())
    }

    pub fn one(&self) -> FieldElement {
        self.elem(self.int_value(1))
    }

    pub fn from_i64(&self, k: i64) -> FieldElement {
        self.elem(self.int_value(k))
    }

    /// `num/den` reduced into this field.
    pub fn from_ratio(&self, num: i64, den: i64) -> Result<FieldElement> {
        self.from_i64(num).div(&self.from_i64(den))
    }

    /// The distinguished `√d` of a quadratic extension.
    pub fn sqrt_d(&self) -> Option<FieldElement> {
        match &*self.0 {
            Kind::Quadratic { base, .. } => Some(
                self.elem(Value::Quad(Box::new((base.zero_value(), base.int_value(1))))),
            ),
            _ => None,
        }
    }

    /// Parse the canonical string form: `"a"`, `"a/b"`, or `"(a,b)"` for
    /// `a + b√d` in a quadratic extension.
    pub fn parse(&self, s: &str) -> Result<FieldElement> {
        let s = s.trim();
        match &*self.0 {
            Kind::Rational => Ok(self.elem(Value::Rat(parse_rational(s)?))),
            Kind::Prime(p) => {
                let q = parse_rational(s)?;
                let reduce = |x: &BigInt| -> u64 {
                    x.mod_floor(&BigInt::from(*p)).to_u64().expect("residue fits")
                };
                let num = reduce(q.numer());
                let den = reduce(q.denom());
                if den == 0 {
                    return Err(Error::DivisionByZero);
                }
                Ok(self.elem(Value::Mod(mod_mul(num, mod_pow(den, p - 2, *p), *p))))
            }
            Kind::Quadratic { base, .. } => {
                if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
                    let (a, b) = inner
                        .split_once(',')
                        .ok_or_else(|| Error::Parse(format!("expected (a,b), got {s:?}")))?;
                    let a = base.parse(a)?;
                    let b = base.parse(b)?;
                    Ok(self.elem(Value::Quad(Box::new((a.value, b.value)))))
                } else {
                    let a = base.parse(s)?;
                    Ok(self.elem(Value::Quad(Box::new((a.value, base.zero_value())))))
                }
            }
        }
    }

    fn add(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (Kind::Rational, Value::Rat(x), Value::Rat(y)) => Value::Rat(x + y),
            (Kind::Prime(p), Value::Mod(x), Value::Mod(y)) => Value::Mod((x + y) % p),
            (Kind::Quadratic { base, .. }, Value::Quad(x), Value::Quad(y)) => {
                Value::Quad(Box::new((base.add(&x.0, &y.0), base.add(&x.1, &y.1))))
            }
            _ => unreachable!("value does not match its field"),
        }
    }

    fn neg(&self, a: &Value) -> Value {
        match (&*self.0, a) {
            (Kind::Rational, Value::Rat(x)) => Value::Rat(-x),
            (Kind::Prime(p), Value::Mod(x)) => Value::Mod((p - x) % p),
            (Kind::Quadratic { base, .. }, Value::Quad(x)) => {
                Value::Quad(Box::new((base.neg(&x.0), base.neg(&x.1))))
            }
            _ => unreachable!("value does not match its field"),
        }
    }

    fn sub(&self, a: &Value, b: &Value) -> Value {
        self.add(a, &self.neg(b))
    }

    fn mul(&self, a: &Value, b: &Value) -> Value {
        match (&*self.0, a, b) {
            (Kind::Rational, Value::Rat(x), Value::Rat(y)) => Value::Rat(x * y),
            (Kind::Prime(p), Value::Mod(x), Value::Mod(y)) => Value::Mod(mod_mul(*x, *y, *p)),
            (Kind::Quadratic { base, d }, Value::Quad(x), Value::Quad(y)) => {
                let re = base.add(
                    &base.mul(&x.0, &y.0),
                    &base.mul(d, &base.mul(&x.1, &y.1)),
                );
                let im = base.add(&base.mul(&x.0, &y.1), &base.mul(&x.1, &y.0));
                Value::Quad(Box::new((re, im)))
            }
            _ => unreachable!("value does not match its field"),
        }
    }

    fn is_zero(&self, a: &Value) -> bool {
        match a {
            Value::Rat(x) => x.is_zero(),
            Value::Mod(x) => *x == 0,
            Value::Quad(x) => {
                let base = match &*self.0 {
                    Kind::Quadratic { base, .. } => base,
                    _ => unreachable!(),
                };
                base.is_zero(&x.0) && base.is_zero(&x.1)
            }
        }
    }

    fn inv(&self, a: &Value) -> Result<Value> {
        if self.is_zero(a) {
            return Err(Error::DivisionByZero);
        }
        Ok(match (&*self.0, a) {
            (Kind::Rational, Value::Rat(x)) => Value::Rat(x.recip()),
            (Kind::Prime(p), Value::Mod(x)) => Value::Mod(mod_pow(*x, p - 2, *p)),
            (Kind::Quadratic { base, d }, Value::Quad(x)) => {
                // (a + b√d)⁻¹ = (a − b√d) / (a² − d b²)
                let norm = base.sub(&base.mul(&x.0, &x.0), &base.mul(d, &base.mul(&x.1, &x.1)));
                let ninv = base.inv(&norm)?;
                Value::Quad(Box::new((
                    base.mul(&x.0, &ninv),
                    base.neg(&base.mul(&x.1, &ninv)),
                )))
            }
            _ => unreachable!("value does not match its field"),
        })
    }

    fn sqrt(&self, a: &Value) -> Option<Value> {
        match (&*self.0, a) {
            (Kind::Rational, Value::Rat(x)) => rational_sqrt(x).map(Value::Rat),
            (Kind::Prime(p), Value::Mod(x)) => {
                if *x == 0 {
                    return Some(Value::Mod(0));
                }
                if mod_pow(*x, (p - 1) / 2, *p) != 1 {
                    return None;
                }
                let r = tonelli_shanks(*x, *p);
                Some(Value::Mod(r.min(p - r)))
            }
            (Kind::Quadratic { base, d }, Value::Quad(x)) => {
                let (a, b) = (&x.0, &x.1);
                let pair = |u: Value, v: Value| Some(Value::Quad(Box::new((u, v))));
                if base.is_zero(b) {
                    if let Some(r) = base.sqrt(a) {
                        return pair(r, base.zero_value());
                    }
                    // (v√d)² = d v²
                    let v = base.sqrt(&base.mul(a, &base.inv(d).ok()?))?;
                    return pair(base.zero_value(), v);
                }
                // u² + d v² = a and 2uv = b give 4u⁴ − 4a u² + d b² = 0.
                let norm = base.sub(&base.mul(a, a), &base.mul(d, &base.mul(b, b)));
                let s = base.sqrt(&norm)?;
                let half = base.inv(&base.int_value(2)).ok()?;
                for cand in [base.add(a, &s), base.sub(a, &s)] {
                    let u2 = base.mul(&cand, &half);
                    if base.is_zero(&u2) {
                        continue;
                    }
                    if let Some(u) = base.sqrt(&u2) {
                        let v = base.mul(b, &base.inv(&base.mul(&base.int_value(2), &u)).ok()?);
                        return pair(u, v);
                    }
                }
                None
            }
            _ => unreachable!("value does not match its field"),
        }
    }

    fn cmp(&self, a: &Value, b: &Value) -> Ordering {
        match (&*self.0, a, b) {
            (Kind::Rational, Value::Rat(x), Value::Rat(y)) => x.cmp(y),
            (Kind::Prime(_), Value::Mod(x), Value::Mod(y)) => x.cmp(y),
            (Kind::Quadratic { base, .. }, Value::Quad(x), Value::Quad(y)) => {
                base.cmp(&x.0, &y.0).then_with(|| base.cmp(&x.1, &y.1))
            }
            _ => unreachable!("value does not match its field"),
        }
    }

    fn render(&self, a: &Value) -> String {
        match (&*self.0, a) {
            (Kind::Rational, Value::Rat(x)) => rational_to_string(x),
            (Kind::Prime(_), Value::Mod(x)) => x.to_string(),
            (Kind::Quadratic { base, .. }, Value::Quad(x)) => {
                if base.is_zero(&x.1) {
                    base.render(&x.0)
                } else {
                    format!("({},{})", base.render(&x.0), base.render(&x.1))
                }
            }
            _ => unreachable!("value does not match its field"),
        }
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            Kind::Rational => write!(f, "Q"),
            Kind::Prime(p) => write!(f, "GF({p})"),
            Kind::Quadratic { base, d } => write!(f, "{base:?}(sqrt {})", base.render(d)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.field.is_zero(&self.value)
    }

    pub fn is_one(&self) -> bool {
        *self == self.field.one()
    }

    pub fn invert(&self) -> Result<FieldElement> {
        Ok(self.field.elem(self.field.inv(&self.value)?))
    }

    pub fn div(&self, rhs: &FieldElement) -> Result<FieldElement> {
        Ok(self * &rhs.invert()?)
    }

    pub fn pow(&self, mut e: u64) -> FieldElement {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Some square root when one exists in the field. The choice is
    /// deterministic (the smaller residue over a prime field).
    pub fn sqrt(&self) -> Option<FieldElement> {
        self.field.sqrt(&self.value).map(|v| self.field.elem(v))
    }

    pub fn is_square(&self) -> bool {
        self.sqrt().is_some()
    }

    /// Total order used for canonical representatives: numeric for the
    /// rationals, by residue for prime fields, lexicographic on `(a, b)` for
    /// extensions.
    pub fn canonical_cmp(&self, other: &FieldElement) -> Ordering {
        self.check(other);
        self.field.cmp(&self.value, &other.value)
    }

    fn check(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "mixed fields: {:?} and {:?}",
            self.field,
            other.field
        );
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.field.render(&self.value))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value && self.field == other.field
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state);
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.check(rhs);
                self.field.elem(self.field.$op(&self.value, &rhs.value))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add);
binop!(Sub, sub, sub);
binop!(Mul, mul, mul);

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.field.elem(self.field.neg(&self.value))
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        self.check(rhs);
        self.value = self.field.add(&self.value, &rhs.value);
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        self.check(rhs);
        self.value = self.field.sub(&self.value, &rhs.value);
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        self.check(rhs);
        self.value = self.field.mul(&self.value, &rhs.value);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(p: u64) -> Field {
        Field::prime(p).unwrap()
    }

    #[test]
    fn inverse_in_gf7() {
        let f = gf(7);
        assert_eq!(f.from_i64(2).invert().unwrap(), f.from_i64(4));
        assert_eq!(f.zero().invert(), Err(Error::DivisionByZero));
    }

    #[test]
    fn inverse_of_sqrt2() {
        let q = Field::rational();
        let k = Field::quadratic(&q, &q.from_i64(2)).unwrap();
        let r = k.sqrt_d().unwrap();
        let inv = r.invert().unwrap();
        assert_eq!(inv.to_string(), "(0,1/2)");
        assert!((&inv * &r).is_one());
    }

    #[test]
    fn square_roots() {
        let f = gf(7);
        assert_eq!(f.from_i64(2).sqrt(), Some(f.from_i64(3)));
        assert_eq!(f.zero().sqrt(), Some(f.zero()));
        let q = Field::rational();
        assert_eq!(q.from_i64(2).sqrt(), None);
        assert_eq!(q.parse("9/4").unwrap().sqrt(), Some(q.parse("3/2").unwrap()));
        assert_eq!(q.from_i64(-4).sqrt(), None);
    }

    #[test]
    fn extension_square_roots() {
        let q = Field::rational();
        let k = Field::quadratic(&q, &q.from_i64(2)).unwrap();
        // 2 = (√2)², 3 + 2√2 = (1 + √2)², 3 is not a square in Q(√2)
        let two = k.from_i64(2);
        let r = two.sqrt().unwrap();
        assert_eq!(&r * &r, two);
        let x = k.parse("(3,2)").unwrap();
        let r = x.sqrt().unwrap();
        assert_eq!(&r * &r, x);
        assert!(k.from_i64(3).sqrt().is_none());
        assert!(k.from_i64(-1).sqrt().is_none());
    }

    #[test]
    fn rejects_bad_fields() {
        assert_eq!(Field::prime(2).err(), Some(Error::CharTwo));
        assert_eq!(Field::prime(9).err(), Some(Error::NotPrime(9)));
        let q = Field::rational();
        assert!(matches!(
            Field::quadratic(&q, &q.from_i64(4)),
            Err(Error::SquareParameter(_))
        ));
    }

    #[test]
    fn descriptor_json_round_trip() {
        let json = r#"{"kind":"quadratic","base":{"kind":"prime","p":7},"d":"3"}"#;
        let desc: FieldDescriptor = serde_json::from_str(json).unwrap();
        let f = Field::from_descriptor(&desc).unwrap();
        assert_eq!(f.descriptor(), desc);
        assert_eq!(f.order(), Some(49));
        assert!(serde_json::from_str::<FieldDescriptor>(r#"{"kind":"prime","p":5,"q":1}"#).is_err());
    }

    #[test]
    fn canonical_strings() {
        let q = Field::rational();
        assert_eq!(q.parse(" 4/-6 ").unwrap().to_string(), "-2/3");
        assert_eq!(gf(5).parse("1/2").unwrap().to_string(), "3");
        assert_eq!(gf(5).parse("-1").unwrap().to_string(), "4");
        assert!(gf(5).parse("1/5").is_err());
        assert!(q.parse("abc").is_err());
    }

    #[test]
    fn euler_criterion_agrees() {
        for p in (3..=97).filter(|&p| is_odd_prime(p)) {
            let f = gf(p);
            for x in 1..p {
                let euler = mod_pow(x, (p - 1) / 2, p) == 1;
                let root = f.from_i64(x as i64).sqrt();
                assert_eq!(root.is_some(), euler, "p={p} x={x}");
                if let Some(r) = root {
                    assert_eq!(r.pow(2), f.from_i64(x as i64));
                }
            }
        }
    }

    #[test]
    fn gf25_square_roots_exhaustive() {
        let f = gf(5);
        let k = Field::quadratic(&f, &f.from_i64(2)).unwrap();
        let elems = k.elements().unwrap();
        let squares: std::collections::HashSet<_> = elems.iter().map(|x| x * x).collect();
        for x in &elems {
            assert_eq!(x.sqrt().is_some(), squares.contains(x), "{x}");
        }
    }
}
