//! Sparse multivariate polynomials with arbitrary-precision integer coefficients.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exponent vector `[e0, e1, ...]` standing for `x0^e0 * x1^e1 * ...`.
pub type Exponents = Vec<u32>;

/// A polynomial in `Z[x0, ..., x_{vars-1}]`.
///
/// Terms live in a `BTreeMap` keyed by exponent vector and zero coefficients
/// are never stored, so two equal polynomials always have identical maps.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SparsePoly {
    vars: usize,
    terms: BTreeMap<Exponents, BigInt>,
}

impl SparsePoly {
    pub fn zero(vars: usize) -> Self {
        SparsePoly {
            vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(vars: usize) -> Self {
        Self::constant(vars, BigInt::one())
    }

    pub fn constant(vars: usize, c: BigInt) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars], c);
        }
        p
    }

    /// The variable `x_index`. Panics if `index >= vars`.
    pub fn var(vars: usize, index: usize) -> Self {
        assert!(index < vars, "variable x{index} outside {vars} variables");
        let mut e = vec![0; vars];
        e[index] = 1;
        let mut p = Self::zero(vars);
        p.terms.insert(e, BigInt::one());
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging repeats.
    pub fn from_terms<I>(vars: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponents, BigInt)>,
    {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            if e.len() != vars {
                return Err(Error::ArityMismatch {
                    expected: vars,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, e: Exponents, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &BigInt)> {
        self.terms.iter().map(|(e, c)| (e.as_slice(), c))
    }

    /// The value of a constant polynomial (zero included); `None` otherwise.
    pub fn constant_value(&self) -> Option<BigInt> {
        match self.terms.len() {
            0 => Some(BigInt::zero()),
            1 => {
                let (e, c) = self.terms.iter().next()?;
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    /// Common total degree of every term, if there is one. Zero counts as degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let first = match degrees.next() {
            None => return Some(0),
            Some(d) => d,
        };
        degrees.all(|d| d == first).then_some(first)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum::<u32>()).max()
    }

    fn check_vars(&self, other: &Self) {
        assert_eq!(
            self.vars, other.vars,
            "polynomials over different variable counts"
        );
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        self.check_vars(other);
        for (e, c) in &other.terms {
            match self.terms.get_mut(e) {
                Some(mine) => {
                    *mine += c;
                    if mine.is_zero() {
                        self.terms.remove(e);
                    }
                }
                None => {
                    self.terms.insert(e.clone(), c.clone());
                }
            }
        }
    }

    pub fn sub_assign_ref(&mut self, other: &Self) {
        self.check_vars(other);
        for (e, c) in &other.terms {
            match self.terms.get_mut(e) {
                Some(mine) => {
                    *mine -= c;
                    if mine.is_zero() {
                        self.terms.remove(e);
                    }
                }
                None => {
                    self.terms.insert(e.clone(), -c);
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.add_assign_ref(other);
        r
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut r = self.clone();
        r.sub_assign_ref(other);
        r
    }

    pub fn neg(&self) -> Self {
        SparsePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        if k.is_zero() {
            return Self::zero(self.vars);
        }
        SparsePoly {
            vars: self.vars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_vars(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.vars);
        }
        let mut out = Self::zero(self.vars);
        let mut e = vec![0u32; self.vars];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                for ((slot, x), y) in e.iter_mut().zip(ea).zip(eb) {
                    *slot = x + y;
                }
                match out.terms.get_mut(&e) {
                    Some(c) => *c += ca * cb,
                    None => {
                        out.terms.insert(e.clone(), ca * cb);
                    }
                }
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    pub fn pow(&self, mut exp: u32) -> Self {
        let mut acc = Self::one(self.vars);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Evaluates at an integer point.
    pub fn eval_integers(&self, point: &[BigInt]) -> Result<BigInt> {
        if point.len() != self.vars {
            return Err(Error::ArityMismatch {
                expected: self.vars,
                got: point.len(),
            });
        }
        let mut acc = BigInt::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(x.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly[{}]({})", self.vars, self)
    }
}

impl fmt::Display for SparsePoly {
    /// Terms are printed from the largest exponent vector down, e.g. `x0^2 - x1^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let is_const = e.iter().all(|&x| x == 0);
            let mag = c.abs();
            if k == 0 {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut wrote = false;
            if !mag.is_one() || is_const {
                write!(f, "{mag}")?;
                wrote = true;
            }
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                if wrote {
                    write!(f, "*")?;
                }
                write!(f, "x{i}")?;
                if x > 1 {
                    write!(f, "^{x}")?;
                }
                wrote = true;
            }
        }
        Ok(())
    }
}
