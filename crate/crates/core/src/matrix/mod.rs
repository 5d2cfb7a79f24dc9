//! Square matrices over the rings of [`crate::ring`].

mod det;

use std::fmt;

pub use det::{DetAlgorithm, AUTO_LEIBNIZ_MAX, FIELD_SIZE_LIMIT, GENERAL_SIZE_LIMIT, LEIBNIZ_SIZE_LIMIT};

use crate::error::{Error, Result};
use crate::mask::SubsetMask;
use crate::ring::{RingDescriptor, RingElement, Value};

/// An `n x n` matrix, `n >= 1`, with entries stored row-major as canonical payloads.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    ring: RingDescriptor,
    n: usize,
    entries: Vec<Value>,
}

impl SquareMatrix {
    pub fn new(ring: &RingDescriptor, n: usize, entries: Vec<RingElement>) -> Result<Self> {
        for e in &entries {
            ring.check_same(e.ring())?;
        }
        Self::from_values(
            ring,
            n,
            entries.into_iter().map(RingElement::into_value).collect(),
        )
    }

    pub fn from_values(ring: &RingDescriptor, n: usize, entries: Vec<Value>) -> Result<Self> {
        if n == 0 {
            return Err(Error::ShapeMismatch("matrix size must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::ShapeMismatch(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !ring.contains(v)) {
            return Err(Error::InvalidParameters(format!(
                "{bad:?} is not a canonical element of {ring}"
            )));
        }
        Ok(SquareMatrix {
            ring: ring.clone(),
            n,
            entries,
        })
    }

    pub fn from_fn(
        ring: &RingDescriptor,
        n: usize,
        mut f: impl FnMut(usize, usize) -> Value,
    ) -> Result<Self> {
        let entries = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self::from_values(ring, n, entries)
    }

    /// Matrix from integer rows, each mapped through `Z -> ring`.
    pub fn from_i64_rows(ring: &RingDescriptor, rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::ShapeMismatch("rows must have length n".into()));
        }
        Self::from_fn(ring, n, |i, j| ring.from_i64(rows[i][j]))
    }

    pub fn zero(ring: &RingDescriptor, n: usize) -> Self {
        Self::from_fn(ring, n, |_, _| ring.zero()).expect("valid zero matrix")
    }

    pub fn identity(ring: &RingDescriptor, n: usize) -> Self {
        Self::from_fn(ring, n, |i, j| if i == j { ring.one() } else { ring.zero() })
            .expect("valid identity matrix")
    }

    pub fn diagonal(ring: &RingDescriptor, diag: &[Value]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(ring, n, |i, j| if i == j { diag[i].clone() } else { ring.zero() })
    }

    /// The matrix unit `E_ii` (zero-based `i`).
    pub fn elementary(ring: &RingDescriptor, n: usize, i: usize) -> Self {
        assert!(i < n);
        Self::from_fn(
            ring,
            n,
            |r, c| if r == i && c == i { ring.one() } else { ring.zero() },
        )
        .expect("valid matrix unit")
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn value(&self, i: usize, j: usize) -> &Value {
        &self.entries[i * self.n + j]
    }

    pub fn entry(&self, i: usize, j: usize) -> RingElement {
        RingElement::from_parts(self.ring.clone(), self.value(i, j).clone())
    }

    pub fn values(&self) -> &[Value] {
        &self.entries
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        self.ring.check_same(&other.ring)?;
        if self.n != other.n {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.n, self.n, other.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        out.add_assign_unchecked(other);
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| self.ring.sub(a, b))
            .collect();
        Ok(SquareMatrix {
            ring: self.ring.clone(),
            n: self.n,
            entries,
        })
    }

    pub(crate) fn add_assign_unchecked(&mut self, other: &Self) {
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            self.ring.add_assign(a, b);
        }
    }

    pub fn scale(&self, c: &RingElement) -> Result<Self> {
        self.ring.check_same(c.ring())?;
        let entries = self.entries.iter().map(|a| self.ring.mul(c.value(), a)).collect();
        Ok(SquareMatrix {
            ring: self.ring.clone(),
            n: self.n,
            entries,
        })
    }

    /// Matrix product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.n;
        let ring = &self.ring;
        Self::from_fn(ring, n, |i, j| {
            let mut acc = ring.zero();
            for k in 0..n {
                ring.add_assign(&mut acc, &ring.mul(self.value(i, k), other.value(k, j)));
            }
            acc
        })
    }

    /// Component `i` of a matrix over a product ring.
    pub fn project(&self, i: usize) -> Option<SquareMatrix> {
        let c = self.ring.components()?.get(i)?.clone();
        let entries = self.entries.iter().map(|v| self.ring.project(v, i)).collect();
        Some(SquareMatrix {
            ring: c,
            n: self.n,
            entries,
        })
    }

    pub fn det_with(&self, algorithm: DetAlgorithm) -> Result<RingElement> {
        let v = det::determinant(&self.ring, self.n, &self.entries, algorithm)?;
        Ok(RingElement::from_parts(self.ring.clone(), v))
    }

    /// Determinant with automatic algorithm choice.
    pub fn det(&self) -> Result<RingElement> {
        self.det_with(DetAlgorithm::Auto)
    }

    /// Invertible exactly when the determinant is a unit.
    pub fn is_invertible(&self) -> Result<bool> {
        Ok(self.det()?.is_unit())
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SquareMatrix<{}>{}", self.ring, self)
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.n)
                .map(|j| self.ring.format_value(self.value(i, j)))
                .collect();
            write!(f, "{}", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Ring and size shared by a nonempty family, or an error naming the mismatch.
pub fn family_shape(matrices: &[SquareMatrix]) -> Result<(RingDescriptor, usize)> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::ShapeMismatch("empty matrix family".into()))?;
    for m in &matrices[1..] {
        first.check_compatible(m)?;
    }
    Ok((first.ring.clone(), first.n))
}

/// `sum_{i in mask} matrices[i]`; the empty mask gives the zero matrix.
pub fn subset_sum(matrices: &[SquareMatrix], mask: SubsetMask) -> Result<SquareMatrix> {
    let (ring, n) = family_shape(matrices)?;
    if mask.family_size() > matrices.len() {
        if let Some(bit) = mask.indices().find(|&i| i >= matrices.len()) {
            return Err(Error::MaskOutOfRange {
                bit: bit as u32,
                m: matrices.len(),
            });
        }
    }
    Ok(subset_sum_unchecked(&ring, n, matrices, mask))
}

pub(crate) fn subset_sum_unchecked(
    ring: &RingDescriptor,
    n: usize,
    matrices: &[SquareMatrix],
    mask: SubsetMask,
) -> SquareMatrix {
    let mut idx = mask.indices();
    let mut acc = match idx.next() {
        Some(i) => matrices[i].clone(),
        None => return SquareMatrix::zero(ring, n),
    };
    for i in idx {
        acc.add_assign_unchecked(&matrices[i]);
    }
    acc
}
