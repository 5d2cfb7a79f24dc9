//! Determinant algorithms over row-major payload slices.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::ring::{RingDescriptor, RingKind, Value};

/// Largest `n` for division-free algorithms.
pub const GENERAL_SIZE_LIMIT: usize = 16;
/// Largest `n` for elimination-based algorithms over fields and `Z`.
pub const FIELD_SIZE_LIMIT: usize = 64;
/// Largest `n` for an explicitly requested permutation expansion.
pub const LEIBNIZ_SIZE_LIMIT: usize = 8;
/// Auto dispatch uses the permutation expansion up to this size.
pub const AUTO_LEIBNIZ_MAX: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DetAlgorithm {
    Auto,
    Leibniz,
    MinorExpansion,
    Bareiss,
    Elimination,
}

impl DetAlgorithm {
    pub fn name(self) -> &'static str {
        match self {
            DetAlgorithm::Auto => "auto",
            DetAlgorithm::Leibniz => "leibniz",
            DetAlgorithm::MinorExpansion => "minor_expansion",
            DetAlgorithm::Bareiss => "bareiss",
            DetAlgorithm::Elimination => "elimination",
        }
    }

    /// Every explicit algorithm that may run on matrices over `ring`.
    pub fn applicable(ring: &RingDescriptor) -> Vec<DetAlgorithm> {
        let mut out = vec![DetAlgorithm::Leibniz, DetAlgorithm::MinorExpansion];
        match ring.kind() {
            RingKind::Integers => out.push(DetAlgorithm::Bareiss),
            RingKind::Rationals | RingKind::PrimeField(_) => {
                out.push(DetAlgorithm::Bareiss);
                out.push(DetAlgorithm::Elimination);
            }
            _ => {}
        }
        out
    }
}

impl std::str::FromStr for DetAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "auto" => DetAlgorithm::Auto,
            "leibniz" => DetAlgorithm::Leibniz,
            "minor_expansion" => DetAlgorithm::MinorExpansion,
            "bareiss" => DetAlgorithm::Bareiss,
            "elimination" => DetAlgorithm::Elimination,
            other => {
                return Err(Error::InvalidParameters(format!(
                    "unknown determinant algorithm {other:?}"
                )))
            }
        })
    }
}

fn unsupported(alg: DetAlgorithm, ring: &RingDescriptor) -> Error {
    Error::UnsupportedAlgorithm {
        algorithm: alg.name().to_string(),
        ring: ring.to_string(),
    }
}

fn size_limit(alg: &str, n: usize, limit: usize) -> Error {
    Error::SizeLimit(format!("{alg} determinant of size {n} exceeds limit {limit}"))
}

pub(crate) fn determinant(ring: &RingDescriptor, n: usize, a: &[Value], alg: DetAlgorithm) -> Result<Value> {
    debug_assert_eq!(a.len(), n * n);
    match alg {
        DetAlgorithm::Auto => auto(ring, n, a),
        DetAlgorithm::Leibniz => {
            if n > LEIBNIZ_SIZE_LIMIT {
                return Err(size_limit("leibniz", n, LEIBNIZ_SIZE_LIMIT));
            }
            Ok(leibniz(ring, n, a))
        }
        DetAlgorithm::MinorExpansion => {
            if n > GENERAL_SIZE_LIMIT {
                return Err(size_limit("minor_expansion", n, GENERAL_SIZE_LIMIT));
            }
            Ok(minor_expansion(ring, n, a))
        }
        DetAlgorithm::Bareiss => match ring.kind() {
            RingKind::Integers | RingKind::Rationals | RingKind::PrimeField(_) => {
                if n > FIELD_SIZE_LIMIT {
                    return Err(size_limit("bareiss", n, FIELD_SIZE_LIMIT));
                }
                Ok(bareiss(ring, n, a))
            }
            _ => Err(unsupported(alg, ring)),
        },
        DetAlgorithm::Elimination => match ring.kind() {
            RingKind::Rationals | RingKind::PrimeField(_) => {
                if n > FIELD_SIZE_LIMIT {
                    return Err(size_limit("elimination", n, FIELD_SIZE_LIMIT));
                }
                Ok(elimination(ring, n, a))
            }
            _ => Err(unsupported(alg, ring)),
        },
    }
}

fn auto(ring: &RingDescriptor, n: usize, a: &[Value]) -> Result<Value> {
    match ring.kind() {
        RingKind::PrimeField(_) => determinant(ring, n, a, DetAlgorithm::Elimination),
        RingKind::Integers | RingKind::Rationals => determinant(ring, n, a, DetAlgorithm::Bareiss),
        RingKind::Product(cs) => {
            let parts = cs
                .iter()
                .enumerate()
                .map(|(i, c)| {
                    let proj: Vec<Value> = a.iter().map(|v| ring.project(v, i)).collect();
                    auto(c, n, &proj)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Value::Tuple(parts))
        }
        RingKind::ModRing(_) | RingKind::PolyOverZ(_) => {
            if n <= AUTO_LEIBNIZ_MAX {
                Ok(leibniz(ring, n, a))
            } else if n <= GENERAL_SIZE_LIMIT {
                Ok(minor_expansion(ring, n, a))
            } else {
                Err(size_limit("division-free", n, GENERAL_SIZE_LIMIT))
            }
        }
    }
}

/// Signed sum over all permutations, enumerated by Heap's algorithm.
fn leibniz(ring: &RingDescriptor, n: usize, a: &[Value]) -> Value {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut counters = vec![0usize; n];
    let mut odd = false;
    let mut acc = ring.zero();

    let add_term = |perm: &[usize], odd: bool, acc: &mut Value| {
        let mut t = a[perm[0]].clone();
        for (row, &col) in perm.iter().enumerate().skip(1) {
            if ring.is_zero(&t) {
                return;
            }
            t = ring.mul(&t, &a[row * n + col]);
        }
        if odd {
            ring.sub_assign(acc, &t);
        } else {
            ring.add_assign(acc, &t);
        }
    };

    add_term(&perm, odd, &mut acc);
    let mut i = 1;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            odd = !odd;
            add_term(&perm, odd, &mut acc);
            counters[i] += 1;
            i = 1;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    acc
}

/// Division-free Laplace expansion by rows, memoised over the set of used columns.
///
/// `dp[mask]` holds the signed sum of partial products that place the first
/// `|mask|` rows into the columns of `mask`.
fn minor_expansion(ring: &RingDescriptor, n: usize, a: &[Value]) -> Value {
    let full = (1usize << n) - 1;
    let mut dp: Vec<Option<Value>> = vec![None; 1 << n];
    dp[0] = Some(ring.one());
    for mask in 0..full {
        let Some(cur) = dp[mask].take() else { continue };
        if ring.is_zero(&cur) {
            continue;
        }
        let row = mask.count_ones() as usize;
        for col in 0..n {
            if mask >> col & 1 == 1 {
                continue;
            }
            let entry = &a[row * n + col];
            if ring.is_zero(entry) {
                continue;
            }
            // Columns already used that lie to the right of `col` form inversions.
            let odd = (mask >> (col + 1)).count_ones() % 2 == 1;
            let t = ring.mul(entry, &cur);
            let slot = &mut dp[mask | 1 << col];
            match (slot.as_mut(), odd) {
                (Some(s), false) => ring.add_assign(s, &t),
                (Some(s), true) => ring.sub_assign(s, &t),
                (None, false) => *slot = Some(t),
                (None, true) => *slot = Some(ring.neg(&t)),
            }
        }
    }
    dp[full].take().unwrap_or_else(|| ring.zero())
}

fn exact_div(ring: &RingDescriptor, a: &Value, b: &Value) -> Value {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => {
            debug_assert!((x % y) == BigInt::from(0));
            Value::Int(x / y)
        }
        (Value::Rat(x), Value::Rat(y)) => Value::Rat(x / y),
        (Value::Residue(_), Value::Residue(_)) => {
            let inv = ring.inverse(b).expect("nonzero pivot in a prime field");
            ring.mul(a, &inv)
        }
        _ => unreachable!("exact division only over Z, Q and F_p"),
    }
}

/// Fraction-free elimination; every intermediate entry is a minor of the input.
fn bareiss(ring: &RingDescriptor, n: usize, a: &[Value]) -> Value {
    let mut m: Vec<Vec<Value>> = (0..n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect();
    let mut negate = false;
    let mut prev = ring.one();
    for k in 0..n.saturating_sub(1) {
        if ring.is_zero(&m[k][k]) {
            match (k + 1..n).find(|&i| !ring.is_zero(&m[i][k])) {
                Some(i) => {
                    m.swap(k, i);
                    negate = !negate;
                }
                None => return ring.zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = ring.sub(&ring.mul(&m[i][j], &m[k][k]), &ring.mul(&m[i][k], &m[k][j]));
                m[i][j] = exact_div(ring, &t, &prev);
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        ring.neg(&d)
    } else {
        d
    }
}

/// Gaussian elimination over a field.
fn elimination(ring: &RingDescriptor, n: usize, a: &[Value]) -> Value {
    let mut m: Vec<Vec<Value>> = (0..n).map(|i| a[i * n..(i + 1) * n].to_vec()).collect();
    let mut det = ring.one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !ring.is_zero(&m[i][k])) else {
            return ring.zero();
        };
        if p != k {
            m.swap(k, p);
            det = ring.neg(&det);
        }
        det = ring.mul(&det, &m[k][k]);
        let inv = ring.inverse(&m[k][k]).expect("nonzero pivot in a field");
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot = &top[k];
        for row in rest {
            if ring.is_zero(&row[k]) {
                continue;
            }
            let factor = ring.mul(&row[k], &inv);
            for (x, p) in row[k + 1..].iter_mut().zip(&pivot[k + 1..]) {
                ring.sub_assign(x, &ring.mul(&factor, p));
            }
        }
    }
    det
}
