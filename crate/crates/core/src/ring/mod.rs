//! Commutative rings and their elements.
//!
//! A [`RingDescriptor`] names one concrete ring: `Z`, `Q`, a prime field
//! `F_p`, a residue ring `Z/N`, a flat product of those, or the polynomial
//! ring `Z[x0, ..., x_{k-1}]`. Ring elements pair a descriptor with a
//! canonical [`Value`] payload.
//!
//! The value-level methods on [`RingDescriptor`] (`add`, `mul`, ...) assume
//! their arguments already belong to the ring; they are what the matrix and
//! identity engines run in their inner loops. [`RingElement`] is the checked
//! surface.

pub mod arith;
pub mod poly;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
pub use poly::SparsePoly;

/// The kind of a ring together with its parameters.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RingKind {
    Integers,
    Rationals,
    /// `F_p`, `p` certified prime.
    PrimeField(u64),
    /// `Z/N`, `N >= 2`.
    ModRing(u64),
    /// Flat product; components are never themselves products.
    Product(Vec<RingDescriptor>),
    /// `Z[x0, ..., x_{vars-1}]`.
    PolyOverZ(usize),
}

/// Shared, immutable handle to a ring.
#[derive(Clone)]
pub struct RingDescriptor(Arc<RingKind>);

impl PartialEq for RingDescriptor {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for RingDescriptor {}

impl Hash for RingDescriptor {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &*self.0 {
            RingKind::Integers => write!(f, "Z"),
            RingKind::Rationals => write!(f, "Q"),
            RingKind::PrimeField(p) => write!(f, "F_{p}"),
            RingKind::ModRing(n) => write!(f, "Z/{n}"),
            RingKind::Product(cs) => {
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{c}")?;
                }
                Ok(())
            }
            RingKind::PolyOverZ(k) => write!(f, "Z[{k} vars]"),
        }
    }
}

/// Canonical payload of a ring element. Which variant is valid depends on the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Value {
    Int(BigInt),
    /// Always in lowest terms with positive denominator.
    Rat(BigRational),
    /// Residue in `[0, p)` or `[0, N)`.
    Residue(u64),
    Tuple(Vec<Value>),
    Poly(SparsePoly),
}

macro_rules! payload {
    ($v:expr, $variant:ident) => {
        match $v {
            Value::$variant(x) => x,
            other => panic!("expected {} payload, found {:?}", stringify!($variant), other),
        }
    };
}

impl RingDescriptor {
    fn from_kind(kind: RingKind) -> Self {
        RingDescriptor(Arc::new(kind))
    }

    pub fn integers() -> Self {
        Self::from_kind(RingKind::Integers)
    }

    pub fn rationals() -> Self {
        Self::from_kind(RingKind::Rationals)
    }

    /// `F_p`; fails with [`Error::NotPrime`] unless `p` is prime.
    pub fn prime_field(p: u64) -> Result<Self> {
        if !arith::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Self::from_kind(RingKind::PrimeField(p)))
    }

    /// `Z/N` for `N >= 2`.
    pub fn mod_ring(n: u64) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidDescriptor(format!(
                "modulus must be at least 2, got {n}"
            )));
        }
        Ok(Self::from_kind(RingKind::ModRing(n)))
    }

    /// Product ring; nested products are flattened.
    pub fn product(components: Vec<RingDescriptor>) -> Result<Self> {
        let mut flat = Vec::with_capacity(components.len());
        for c in components {
            match &*c.0 {
                RingKind::Product(inner) => flat.extend(inner.iter().cloned()),
                _ => flat.push(c),
            }
        }
        if flat.is_empty() {
            return Err(Error::InvalidDescriptor(
                "product ring needs at least one component".into(),
            ));
        }
        Ok(Self::from_kind(RingKind::Product(flat)))
    }

    /// Product of prime fields `F_{p_1} x ... x F_{p_k}`.
    pub fn product_of_prime_fields(primes: &[u64]) -> Result<Self> {
        let cs = primes
            .iter()
            .map(|&p| Self::prime_field(p))
            .collect::<Result<Vec<_>>>()?;
        Self::product(cs)
    }

    pub fn poly_over_z(vars: usize) -> Self {
        Self::from_kind(RingKind::PolyOverZ(vars))
    }

    pub fn kind(&self) -> &RingKind {
        &self.0
    }

    pub fn components(&self) -> Option<&[RingDescriptor]> {
        match &*self.0 {
            RingKind::Product(cs) => Some(cs),
            _ => None,
        }
    }

    pub fn is_field(&self) -> bool {
        matches!(&*self.0, RingKind::Rationals | RingKind::PrimeField(_))
    }

    /// Whether the ring has a unique maximal ideal.
    pub fn is_local(&self) -> bool {
        match &*self.0 {
            RingKind::Rationals | RingKind::PrimeField(_) => true,
            RingKind::ModRing(n) => arith::prime_power_base(*n).is_some(),
            RingKind::Product(cs) => cs.len() == 1 && cs[0].is_local(),
            RingKind::Integers | RingKind::PolyOverZ(_) => false,
        }
    }

    /// The modulus of a residue ring (`F_p` or `Z/N`).
    pub fn modulus(&self) -> Option<u64> {
        match &*self.0 {
            RingKind::PrimeField(p) => Some(*p),
            RingKind::ModRing(n) => Some(*n),
            _ => None,
        }
    }

    pub fn zero(&self) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(BigInt::zero()),
            RingKind::Rationals => Value::Rat(BigRational::zero()),
            RingKind::PrimeField(_) | RingKind::ModRing(_) => Value::Residue(0),
            RingKind::Product(cs) => Value::Tuple(cs.iter().map(|c| c.zero()).collect()),
            RingKind::PolyOverZ(k) => Value::Poly(SparsePoly::zero(*k)),
        }
    }

    pub fn one(&self) -> Value {
        self.from_integer(&BigInt::one())
    }

    /// Image of an integer under the unique ring map `Z -> R`.
    pub fn from_integer(&self, k: &BigInt) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(k.clone()),
            RingKind::Rationals => Value::Rat(BigRational::from_integer(k.clone())),
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                let r = k.mod_floor(&BigInt::from(*n));
                Value::Residue(r.to_u64().expect("residue fits in u64"))
            }
            RingKind::Product(cs) => Value::Tuple(cs.iter().map(|c| c.from_integer(k)).collect()),
            RingKind::PolyOverZ(v) => Value::Poly(SparsePoly::constant(*v, k.clone())),
        }
    }

    pub fn from_i64(&self, k: i64) -> Value {
        match &*self.0 {
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                Value::Residue((k as i128).rem_euclid(*n as i128) as u64)
            }
            _ => self.from_integer(&BigInt::from(k)),
        }
    }

    /// Checked element from an integer.
    pub fn int(&self, k: i64) -> RingElement {
        RingElement {
            ring: self.clone(),
            value: self.from_i64(k),
        }
    }

    /// Element of `Q` from a numerator and a nonzero denominator.
    pub fn rational(&self, num: i64, den: i64) -> Result<RingElement> {
        if !matches!(&*self.0, RingKind::Rationals) {
            return Err(Error::UnsupportedRing(self.to_string()));
        }
        if den == 0 {
            return Err(Error::InvalidParameters("zero denominator".into()));
        }
        Ok(RingElement {
            ring: self.clone(),
            value: Value::Rat(BigRational::new(num.into(), den.into())),
        })
    }

    /// Element of a product ring with one integer per component.
    pub fn tuple(&self, parts: &[i64]) -> Result<RingElement> {
        let cs = self
            .components()
            .ok_or_else(|| Error::UnsupportedRing(self.to_string()))?;
        if cs.len() != parts.len() {
            return Err(Error::ArityMismatch {
                expected: cs.len(),
                got: parts.len(),
            });
        }
        Ok(RingElement {
            ring: self.clone(),
            value: Value::Tuple(cs.iter().zip(parts).map(|(c, &k)| c.from_i64(k)).collect()),
        })
    }

    /// Wraps a payload after checking it is canonical for this ring.
    pub fn element(&self, value: Value) -> Result<RingElement> {
        if !self.contains(&value) {
            return Err(Error::InvalidParameters(format!(
                "{value:?} is not a canonical element of {self}"
            )));
        }
        Ok(RingElement {
            ring: self.clone(),
            value,
        })
    }

    /// Whether `value` is a canonical payload of this ring.
    pub fn contains(&self, value: &Value) -> bool {
        match (&*self.0, value) {
            (RingKind::Integers, Value::Int(_)) => true,
            (RingKind::Rationals, Value::Rat(q)) => {
                q.denom().is_positive() && q.numer().gcd(q.denom()).is_one()
            }
            (RingKind::PrimeField(n) | RingKind::ModRing(n), Value::Residue(r)) => r < n,
            (RingKind::Product(cs), Value::Tuple(vs)) => {
                cs.len() == vs.len() && cs.iter().zip(vs).all(|(c, v)| c.contains(v))
            }
            (RingKind::PolyOverZ(k), Value::Poly(p)) => p.vars() == *k,
            _ => false,
        }
    }

    pub fn add(&self, a: &Value, b: &Value) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(payload!(a, Int) + payload!(b, Int)),
            RingKind::Rationals => Value::Rat(payload!(a, Rat) + payload!(b, Rat)),
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                Value::Residue(arith::add_mod(*payload!(a, Residue), *payload!(b, Residue), *n))
            }
            RingKind::Product(cs) => Value::Tuple(
                cs.iter()
                    .zip(payload!(a, Tuple).iter().zip(payload!(b, Tuple)))
                    .map(|(c, (x, y))| c.add(x, y))
                    .collect(),
            ),
            RingKind::PolyOverZ(_) => Value::Poly(payload!(a, Poly).add(payload!(b, Poly))),
        }
    }

    pub fn add_assign(&self, a: &mut Value, b: &Value) {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => *x += y,
            (Value::Rat(x), Value::Rat(y)) => *x += y,
            (Value::Poly(x), Value::Poly(y)) => x.add_assign_ref(y),
            (a, b) => *a = self.add(a, b),
        }
    }

    pub fn sub_assign(&self, a: &mut Value, b: &Value) {
        match (a, b) {
            (Value::Int(x), Value::Int(y)) => *x -= y,
            (Value::Rat(x), Value::Rat(y)) => *x -= y,
            (Value::Poly(x), Value::Poly(y)) => x.sub_assign_ref(y),
            (a, b) => *a = self.sub(a, b),
        }
    }

    pub fn sub(&self, a: &Value, b: &Value) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(payload!(a, Int) - payload!(b, Int)),
            RingKind::Rationals => Value::Rat(payload!(a, Rat) - payload!(b, Rat)),
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                Value::Residue(arith::sub_mod(*payload!(a, Residue), *payload!(b, Residue), *n))
            }
            RingKind::Product(cs) => Value::Tuple(
                cs.iter()
                    .zip(payload!(a, Tuple).iter().zip(payload!(b, Tuple)))
                    .map(|(c, (x, y))| c.sub(x, y))
                    .collect(),
            ),
            RingKind::PolyOverZ(_) => Value::Poly(payload!(a, Poly).sub(payload!(b, Poly))),
        }
    }

    pub fn neg(&self, a: &Value) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(-payload!(a, Int).clone()),
            RingKind::Rationals => Value::Rat(-payload!(a, Rat).clone()),
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                Value::Residue(arith::neg_mod(*payload!(a, Residue), *n))
            }
            RingKind::Product(cs) => {
                Value::Tuple(cs.iter().zip(payload!(a, Tuple)).map(|(c, x)| c.neg(x)).collect())
            }
            RingKind::PolyOverZ(_) => Value::Poly(payload!(a, Poly).neg()),
        }
    }

    pub fn mul(&self, a: &Value, b: &Value) -> Value {
        match &*self.0 {
            RingKind::Integers => Value::Int(payload!(a, Int) * payload!(b, Int)),
            RingKind::Rationals => Value::Rat(payload!(a, Rat) * payload!(b, Rat)),
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                Value::Residue(arith::mul_mod(*payload!(a, Residue), *payload!(b, Residue), *n))
            }
            RingKind::Product(cs) => Value::Tuple(
                cs.iter()
                    .zip(payload!(a, Tuple).iter().zip(payload!(b, Tuple)))
                    .map(|(c, (x, y))| c.mul(x, y))
                    .collect(),
            ),
            RingKind::PolyOverZ(_) => Value::Poly(payload!(a, Poly).mul(payload!(b, Poly))),
        }
    }

    pub fn pow(&self, a: &Value, mut exp: u64) -> Value {
        let mut acc = self.one();
        let mut base = a.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            exp >>= 1;
            if exp > 0 {
                base = self.mul(&base, &base);
            }
        }
        acc
    }

    /// `k * a` with `k` an integer, by the image of `k` in the ring.
    pub fn scalar_mul(&self, k: &BigInt, a: &Value) -> Value {
        self.mul(&self.from_integer(k), a)
    }

    pub fn is_zero(&self, a: &Value) -> bool {
        match a {
            Value::Int(x) => x.is_zero(),
            Value::Rat(x) => x.is_zero(),
            Value::Residue(x) => *x == 0,
            Value::Tuple(vs) => {
                let cs = self.components().expect("tuple payload in product ring");
                cs.iter().zip(vs).all(|(c, v)| c.is_zero(v))
            }
            Value::Poly(p) => p.is_zero(),
        }
    }

    pub fn is_unit(&self, a: &Value) -> bool {
        match &*self.0 {
            RingKind::Integers => payload!(a, Int).magnitude().is_one(),
            RingKind::Rationals => !payload!(a, Rat).is_zero(),
            RingKind::PrimeField(_) => *payload!(a, Residue) != 0,
            RingKind::ModRing(n) => arith::gcd(*payload!(a, Residue), *n) == 1,
            RingKind::Product(cs) => cs.iter().zip(payload!(a, Tuple)).all(|(c, x)| c.is_unit(x)),
            RingKind::PolyOverZ(_) => payload!(a, Poly)
                .constant_value()
                .is_some_and(|c| c.magnitude().is_one()),
        }
    }

    pub fn inverse(&self, a: &Value) -> Option<Value> {
        match &*self.0 {
            RingKind::Integers => {
                let x = payload!(a, Int);
                x.magnitude().is_one().then(|| Value::Int(x.clone()))
            }
            RingKind::Rationals => {
                let x = payload!(a, Rat);
                (!x.is_zero()).then(|| Value::Rat(x.recip()))
            }
            RingKind::PrimeField(n) | RingKind::ModRing(n) => {
                arith::inv_mod(*payload!(a, Residue), *n).map(Value::Residue)
            }
            RingKind::Product(cs) => cs
                .iter()
                .zip(payload!(a, Tuple))
                .map(|(c, x)| c.inverse(x))
                .collect::<Option<Vec<_>>>()
                .map(Value::Tuple),
            RingKind::PolyOverZ(_) => {
                let p = payload!(a, Poly);
                let c = p.constant_value()?;
                c.magnitude().is_one().then(|| Value::Poly(p.clone()))
            }
        }
    }

    /// Evaluates `f` at a point given as payloads of this ring.
    pub fn eval_poly(&self, f: &SparsePoly, point: &[Value]) -> Result<Value> {
        if point.len() != f.vars() {
            return Err(Error::ArityMismatch {
                expected: f.vars(),
                got: point.len(),
            });
        }
        let mut acc = self.zero();
        for (e, c) in f.terms() {
            let mut t = self.from_integer(c);
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t = self.mul(&t, &self.pow(x, k as u64));
                }
            }
            self.add_assign(&mut acc, &t);
        }
        Ok(acc)
    }

    /// Component `i` of a product payload.
    pub fn project(&self, a: &Value, i: usize) -> Value {
        payload!(a, Tuple)[i].clone()
    }

    pub(crate) fn check_same(&self, other: &RingDescriptor) -> Result<()> {
        if self != other {
            return Err(Error::RingMismatch {
                left: self.to_string(),
                right: other.to_string(),
            });
        }
        Ok(())
    }

    /// Renders a payload of this ring for humans.
    pub fn format_value(&self, v: &Value) -> String {
        match v {
            Value::Int(x) => x.to_string(),
            Value::Rat(q) => {
                if q.denom().is_one() {
                    q.numer().to_string()
                } else {
                    format!("{}/{}", q.numer(), q.denom())
                }
            }
            Value::Residue(r) => r.to_string(),
            Value::Tuple(vs) => {
                let cs = self.components().expect("tuple payload in product ring");
                let parts: Vec<String> = cs.iter().zip(vs).map(|(c, v)| c.format_value(v)).collect();
                format!("({})", parts.join(", "))
            }
            Value::Poly(p) => p.to_string(),
        }
    }
}

/// A value tagged with the ring it lives in.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RingElement {
    ring: RingDescriptor,
    value: Value,
}

impl RingElement {
    /// Pairs a ring with a payload known to be canonical for it.
    pub(crate) fn from_parts(ring: RingDescriptor, value: Value) -> Self {
        debug_assert!(ring.contains(&value), "{value:?} not in {ring}");
        RingElement { ring, value }
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn into_value(self) -> Value {
        self.value
    }

    pub fn zero(ring: &RingDescriptor) -> Self {
        Self::from_parts(ring.clone(), ring.zero())
    }

    pub fn one(ring: &RingDescriptor) -> Self {
        Self::from_parts(ring.clone(), ring.one())
    }

    fn binary(&self, other: &Self, f: impl FnOnce(&RingDescriptor, &Value, &Value) -> Value) -> Result<Self> {
        self.ring.check_same(&other.ring)?;
        Ok(Self::from_parts(
            self.ring.clone(),
            f(&self.ring, &self.value, &other.value),
        ))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.binary(other, RingDescriptor::add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.binary(other, RingDescriptor::sub)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.binary(other, RingDescriptor::mul)
    }

    pub fn neg(&self) -> Self {
        Self::from_parts(self.ring.clone(), self.ring.neg(&self.value))
    }

    pub fn pow(&self, exp: u64) -> Self {
        Self::from_parts(self.ring.clone(), self.ring.pow(&self.value, exp))
    }

    pub fn is_zero(&self) -> bool {
        self.ring.is_zero(&self.value)
    }

    pub fn is_one(&self) -> bool {
        self.value == self.ring.one()
    }

    pub fn is_unit(&self) -> bool {
        self.ring.is_unit(&self.value)
    }

    pub fn try_inverse(&self) -> Option<Self> {
        self.ring
            .inverse(&self.value)
            .map(|v| Self::from_parts(self.ring.clone(), v))
    }

    /// Component `i` of a product-ring element.
    pub fn component(&self, i: usize) -> Option<Self> {
        let cs = self.ring.components()?;
        let c = cs.get(i)?;
        Some(Self::from_parts(c.clone(), self.ring.project(&self.value, i)))
    }

    /// The integer payload, when the ring is `Z`.
    pub fn as_integer(&self) -> Option<&BigInt> {
        match &self.value {
            Value::Int(x) => Some(x),
            _ => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self.value {
            Value::Residue(r) => Some(r),
            _ => None,
        }
    }

    pub fn as_poly(&self) -> Option<&SparsePoly> {
        match &self.value {
            Value::Poly(p) => Some(p),
            _ => None,
        }
    }
}

impl fmt::Debug for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.ring)
    }
}

impl fmt::Display for RingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ring.format_value(&self.value))
    }
}

/// Evaluates `f` at `point` in `ring`, mapping integer coefficients through `Z -> ring`.
pub fn poly_eval(f: &SparsePoly, ring: &RingDescriptor, point: &[RingElement]) -> Result<RingElement> {
    for x in point {
        ring.check_same(x.ring())?;
    }
    let values: Vec<Value> = point.iter().map(|x| x.value.clone()).collect();
    Ok(RingElement::from_parts(ring.clone(), ring.eval_poly(f, &values)?))
}

/// Nonnegative gcd with `gcd(0, 0) = 0`.
pub fn gcd_nonneg(a: &BigInt, b: &BigInt) -> BigInt {
    let g = a.gcd(b);
    debug_assert!(g.sign() != Sign::Minus);
    g
}
