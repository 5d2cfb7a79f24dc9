//! Alternating subset-sum identities, checked symbolically and numerically.
//!
//! The central quantity is
//!
//! ```text
//!     sum_{S subset [m]} (-1)^|S| det( sum_{i in S} A_i )
//! ```
//!
//! which is the zero polynomial in the entries whenever `m > n` for `n x n`
//! matrices. Symbolic checks run over generic matrices in `Z[x]`, where the
//! entry `(beta, gamma)` of matrix `i` (all zero-based) is the variable
//! `x_{i*n^2 + beta*n + gamma}`. Numeric checks evaluate the same sum in any
//! supported ring.
//!
//! Subset terms are independent, so sums over `2^m` subsets are split across
//! the rayon pool. Ring addition is exact and payloads are canonical, which
//! makes the result identical to a sequential evaluation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mask::{subsets_by_cardinality, SubsetMask, MAX_FAMILY};
use crate::matrix::{family_shape, subset_sum_unchecked, SquareMatrix};
use crate::ring::{RingDescriptor, RingElement, SparsePoly, Value};

/// Largest `m * n` accepted by the symbolic combinatorial check.
pub const LEMMA3_MAX_PRODUCT: usize = 36;
/// Largest `m` accepted by the symbolic combinatorial check (`2^m` subset terms).
pub const LEMMA3_MAX_M: usize = 20;
/// Largest family size for the symbolic determinant check and certificates.
pub const LEMMA2_MAX_M: usize = 5;
/// Largest matrix size for the symbolic determinant check and certificates.
pub const LEMMA2_MAX_N: usize = 3;
/// Largest `m` for the brute-force coefficient enumeration.
pub const COEFFICIENT_MAX_M: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityParams {
    Sizes { m: usize, n: usize },
    Instance(String),
}

/// Outcome of evaluating one identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdentityReport {
    pub identity_name: String,
    pub parameters: IdentityParams,
    pub residual: RingElement,
    /// True iff `residual` is zero.
    pub holds: bool,
    /// Number of subset terms evaluated.
    pub term_count: u128,
}

impl IdentityReport {
    fn new(name: &str, parameters: IdentityParams, residual: RingElement, term_count: u128) -> Self {
        IdentityReport {
            identity_name: name.to_string(),
            parameters,
            holds: residual.is_zero(),
            residual,
            term_count,
        }
    }
}

fn subset_count(m: usize) -> u128 {
    1u128 << m
}

/// `sum_S (-1)^|S| term(S)` over every subset of `{0..m}`.
fn alternating_sum<F>(ring: &RingDescriptor, m: usize, term: F) -> Result<Value>
where
    F: Fn(SubsetMask) -> Result<Value> + Sync,
{
    assert!(m <= MAX_FAMILY);
    let split = m.min(10);
    let chunk_bits = m - split;
    let chunk_sum = |chunk: u64| -> Result<Value> {
        let start = chunk << chunk_bits;
        let len: u128 = 1u128 << chunk_bits;
        let mut acc = ring.zero();
        let mut offset: u128 = 0;
        while offset < len {
            let bits = start | offset as u64;
            let mask = SubsetMask::new(bits, m).expect("bits below family size");
            let t = term(mask)?;
            if mask.cardinality() % 2 == 1 {
                ring.sub_assign(&mut acc, &t);
            } else {
                ring.add_assign(&mut acc, &t);
            }
            offset += 1;
        }
        Ok(acc)
    };
    if split <= 4 {
        return (0..1u64 << split).try_fold(ring.zero(), |mut acc, c| {
            ring.add_assign(&mut acc, &chunk_sum(c)?);
            Ok(acc)
        });
    }
    (0..1u64 << split).into_par_iter().map(chunk_sum).try_reduce(
        || ring.zero(),
        |mut a, b| {
            ring.add_assign(&mut a, &b);
            Ok(a)
        },
    )
}

/// `sum_{S subset [m]} (-1)^|S| det(sum_{i in S} A_i)`.
///
/// The empty subset contributes `det(0) = 0`. The result is zero whenever
/// `m > n`, over any commutative ring.
pub fn alternating_subset_det_sum(matrices: &[SquareMatrix]) -> Result<RingElement> {
    if matrices.len() > MAX_FAMILY {
        return Err(Error::TooManyMatrices {
            got: matrices.len(),
            limit: MAX_FAMILY,
        });
    }
    let (ring, n) = family_shape(matrices)?;
    let m = matrices.len();
    // Surface determinant errors (size limits) before fanning out.
    subset_sum_unchecked(&ring, n, matrices, SubsetMask::full(m)).det()?;
    let v = alternating_sum(&ring, m, |mask| {
        if mask.is_empty() {
            return Ok(ring.zero());
        }
        Ok(subset_sum_unchecked(&ring, n, matrices, mask).det()?.into_value())
    })?;
    Ok(RingElement::from_parts(ring, v))
}

/// Same as [`alternating_subset_det_sum`], packaged as a report. `holds` is
/// only meaningful as a contract when `m > n`.
pub fn alternating_sum_report(matrices: &[SquareMatrix]) -> Result<IdentityReport> {
    let residual = alternating_subset_det_sum(matrices)?;
    let m = matrices.len();
    let n = matrices[0].n();
    Ok(IdentityReport::new(
        "alternating_subset_det_sum",
        IdentityParams::Sizes { m, n },
        residual,
        subset_count(m),
    ))
}

/// Flat index of `z_{i,j}` (zero-based) in `Z[z]` with `m * n` variables.
pub fn z_index(n: usize, i: usize, j: usize) -> usize {
    i * n + j
}

/// Flat index of entry `(beta, gamma)` of generic matrix `i` (zero-based).
pub fn generic_index(n: usize, i: usize, beta: usize, gamma: usize) -> usize {
    i * n * n + beta * n + gamma
}

/// `m` generic `n x n` matrices over `Z[x]` with `m * n^2` variables.
pub fn generic_matrices(m: usize, n: usize) -> Vec<SquareMatrix> {
    let vars = m * n * n;
    let ring = RingDescriptor::poly_over_z(vars);
    (0..m)
        .map(|i| {
            SquareMatrix::from_fn(&ring, n, |b, g| {
                Value::Poly(SparsePoly::var(vars, generic_index(n, i, b, g)))
            })
            .expect("generic matrix is valid")
        })
        .collect()
}

/// `sum_{S subset [m]} (-1)^|S| prod_{j<n} sum_{i in S} z_{i,j}` without hypothesis or size checks.
pub fn lemma3_polynomial(m: usize, n: usize) -> SparsePoly {
    let vars = m * n;
    let ring = RingDescriptor::poly_over_z(vars);
    let z: Vec<SparsePoly> = (0..vars).map(|k| SparsePoly::var(vars, k)).collect();
    let v = alternating_sum(&ring, m, |mask| {
        if mask.is_empty() || n == 0 {
            return Ok(if n == 0 { ring.one() } else { ring.zero() });
        }
        let column = |j: usize| {
            let mut col = SparsePoly::zero(vars);
            for i in mask.indices() {
                col.add_assign_ref(&z[z_index(n, i, j)]);
            }
            col
        };
        let mut prod = column(0);
        for j in 1..n {
            prod = prod.mul(&column(j));
        }
        Ok(Value::Poly(prod))
    })
    .expect("polynomial terms are infallible");
    match v {
        Value::Poly(p) => p,
        _ => unreachable!(),
    }
}

fn lemma3_limits(m: usize, n: usize) -> Result<()> {
    if m * n > LEMMA3_MAX_PRODUCT || m > LEMMA3_MAX_M {
        return Err(Error::SizeLimit(format!(
            "combinatorial identity needs m*n <= {LEMMA3_MAX_PRODUCT} and m <= {LEMMA3_MAX_M}, got m={m}, n={n}"
        )));
    }
    Ok(())
}

fn require_m_gt_n(m: usize, n: usize) -> Result<()> {
    if m <= n {
        return Err(Error::HypothesisViolation(format!(
            "identity requires m > n, got m={m}, n={n}"
        )));
    }
    Ok(())
}

/// Expands the combinatorial identity in `Z[z_{i,j}]` and reports whether it vanishes.
pub fn lemma3_symbolic_check(m: usize, n: usize) -> Result<IdentityReport> {
    require_m_gt_n(m, n)?;
    lemma3_symbolic_unchecked(m, n)
}

/// [`lemma3_symbolic_check`] without the `m > n` hypothesis, to exhibit failures.
pub fn lemma3_symbolic_unchecked(m: usize, n: usize) -> Result<IdentityReport> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameters("m and n must be positive".into()));
    }
    lemma3_limits(m, n)?;
    let p = lemma3_polynomial(m, n);
    let ring = RingDescriptor::poly_over_z(m * n);
    Ok(IdentityReport::new(
        "lemma3_symbolic",
        IdentityParams::Sizes { m, n },
        RingElement::from_parts(ring, Value::Poly(p)),
        subset_count(m),
    ))
}

/// Coefficient of `z_{i_1,1} ... z_{i_n,n}` in the combinatorial sum, computed
/// by enumerating every subset containing the indices and again from the
/// binomial closed form. Indices are zero-based. Returns the common value.
pub fn lemma3_coefficient_check(m: usize, n: usize, indices: &[usize]) -> Result<BigInt> {
    require_m_gt_n(m, n)?;
    if indices.len() != n {
        return Err(Error::ArityMismatch {
            expected: n,
            got: indices.len(),
        });
    }
    if m > COEFFICIENT_MAX_M {
        return Err(Error::SizeLimit(format!(
            "coefficient enumeration needs m <= {COEFFICIENT_MAX_M}"
        )));
    }
    let required = SubsetMask::from_indices(indices, m)?;

    let mut enumerated = 0i64;
    for bits in 0..1u64 << m {
        if bits & required.bits() == required.bits() {
            enumerated += if bits.count_ones() % 2 == 0 { 1 } else { -1 };
        }
    }

    let distinct = required.cardinality();
    let free = m - distinct;
    let mut closed = BigInt::zero();
    let mut binom = BigInt::one();
    for l in 0..=free {
        if l > 0 {
            binom = binom * BigInt::from(free - l + 1) / BigInt::from(l);
        }
        if (l + distinct) % 2 == 0 {
            closed += &binom;
        } else {
            closed -= &binom;
        }
    }

    let enumerated = BigInt::from(enumerated);
    if enumerated != closed {
        return Err(Error::ContractViolation(format!(
            "coefficient mismatch: enumeration {enumerated}, closed form {closed}"
        )));
    }
    Ok(closed)
}

fn lemma2_limits(m: usize, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    if n > LEMMA2_MAX_N || m > LEMMA2_MAX_M {
        return Err(Error::SizeLimit(format!(
            "symbolic determinant identity needs n <= {LEMMA2_MAX_N} and m <= {LEMMA2_MAX_M}, got m={m}, n={n}"
        )));
    }
    Ok(())
}

/// Alternating determinant sum over `m` generic `n x n` matrices in `Z[x]`.
pub fn lemma2_symbolic_check(m: usize, n: usize) -> Result<IdentityReport> {
    require_m_gt_n(m, n)?;
    lemma2_limits(m, n)?;
    let residual = alternating_subset_det_sum(&generic_matrices(m, n))?;
    Ok(IdentityReport::new(
        "lemma2_symbolic",
        IdentityParams::Sizes { m, n },
        residual,
        subset_count(m),
    ))
}

/// `det(M_1 + ... + M_m)` written as an integer combination of
/// `det(sum_{i in S} M_i)` with `1 <= |S| <= n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub m: usize,
    pub n: usize,
    /// Terms in (cardinality, mask) order; coefficients are nonzero.
    pub terms: Vec<(SubsetMask, BigInt)>,
    /// Number of rewriting rounds, `m - n`.
    pub rounds: usize,
}

/// Rewrites the full-family determinant through smaller subsets until every
/// remaining subset has at most `n` members.
///
/// Each round takes every subset `T` of the current largest size `k > n` and
/// replaces `det(sum_T)` by `sum_{S proper subset T} (-1)^(k-|S|+1) det(sum_S)`,
/// which is the vanishing alternating sum for the family `T` solved for its
/// top term. Empty subsets are dropped since `det(0) = 0`. The result is
/// verified by symbolic expansion over generic matrices before it is returned.
pub fn lemma2_membership_certificate(m: usize, n: usize) -> Result<MembershipCertificate> {
    require_m_gt_n(m, n)?;
    lemma2_limits(m, n)?;

    let mut coeffs: BTreeMap<u64, BigInt> = BTreeMap::new();
    coeffs.insert(SubsetMask::full(m).bits(), BigInt::one());
    for k in (n + 1..=m).rev() {
        let top: Vec<(u64, BigInt)> = coeffs
            .iter()
            .filter(|(bits, _)| bits.count_ones() as usize == k)
            .map(|(b, c)| (*b, c.clone()))
            .collect();
        for (t, c) in top {
            coeffs.remove(&t);
            // Proper nonempty submasks of t.
            let mut s = (t - 1) & t;
            while s != 0 {
                let flip = (k - s.count_ones() as usize + 1) % 2 == 1;
                let delta = if flip { -c.clone() } else { c.clone() };
                let slot = coeffs.entry(s).or_insert_with(BigInt::zero);
                *slot += delta;
                if slot.is_zero() {
                    coeffs.remove(&s);
                }
                s = (s - 1) & t;
            }
        }
    }

    let mut terms: Vec<(SubsetMask, BigInt)> = coeffs
        .into_iter()
        .map(|(bits, c)| (SubsetMask::new(bits, m).expect("bits below m"), c))
        .collect();
    terms.sort_by_key(|(mask, _)| mask.order_key());

    let cert = MembershipCertificate {
        m,
        n,
        terms,
        rounds: m - n,
    };
    if !verify_certificate(&cert)? {
        return Err(Error::ContractViolation(format!(
            "membership certificate for m={m}, n={n} does not expand to the full determinant"
        )));
    }
    Ok(cert)
}

/// Expands a certificate over generic matrices and compares with `det(sum M_i)`.
pub fn verify_certificate(cert: &MembershipCertificate) -> Result<bool> {
    let ms = generic_matrices(cert.m, cert.n);
    let ring = ms[0].ring().clone();
    let mut combo = ring.zero();
    for (mask, c) in &cert.terms {
        let d = crate::matrix::subset_sum(&ms, *mask)?.det()?;
        combo = ring.add(&combo, &ring.scalar_mul(c, d.value()));
    }
    let full = crate::matrix::subset_sum(&ms, SubsetMask::full(cert.m))?.det()?;
    Ok(&combo == full.value())
}

fn perturbation_shape(a: &[SquareMatrix], b: &SquareMatrix) -> Result<(RingDescriptor, usize)> {
    let n = b.n();
    if a.len() != n {
        return Err(Error::ShapeMismatch(format!(
            "expected {n} matrices A_i for an {n}x{n} perturbation, got {}",
            a.len()
        )));
    }
    let mut all = a.to_vec();
    all.push(b.clone());
    family_shape(&all)
}

/// `sum_{S nonempty} (-1)^|S| (det(A_S) - det(A_S + B)) - det(B)` with `A_S = sum_{i in S} A_i`.
///
/// Always zero: it is the alternating sum for the family `A_1, ..., A_n, B`.
pub fn perturbation_identity_residual(a: &[SquareMatrix], b: &SquareMatrix) -> Result<RingElement> {
    let (ring, n) = perturbation_shape(a, b)?;
    let det_b = b.det()?;
    let sum = alternating_sum(&ring, n, |mask| {
        if mask.is_empty() {
            return Ok(ring.zero());
        }
        let s = subset_sum_unchecked(&ring, n, a, mask);
        let d0 = s.det()?;
        let mut shifted = s;
        shifted.add_assign_unchecked(b);
        let d1 = shifted.det()?;
        Ok(ring.sub(d0.value(), d1.value()))
    })?;
    Ok(RingElement::from_parts(
        ring.clone(),
        ring.sub(&sum, det_b.value()),
    ))
}

/// Smallest nonempty `S` (by cardinality, then mask value) with
/// `det(A_S + B) != det(A_S)`.
///
/// Such an `S` exists whenever `det(B) != 0`; `None` is returned only when
/// `det(B) = 0` and no subset moves the determinant.
pub fn find_perturbing_subset(a: &[SquareMatrix], b: &SquareMatrix) -> Result<Option<SubsetMask>> {
    let (ring, n) = perturbation_shape(a, b)?;
    for mask in subsets_by_cardinality(n, 1, n) {
        let s = subset_sum_unchecked(&ring, n, a, mask);
        let d0 = s.det()?;
        let mut shifted = s;
        shifted.add_assign_unchecked(b);
        if shifted.det()? != d0 {
            return Ok(Some(mask));
        }
    }
    if !b.det()?.is_zero() {
        return Err(Error::ContractViolation(
            "det(B) is nonzero but no nonempty subset changes the determinant".into(),
        ));
    }
    Ok(None)
}

/// `sum_{S subset [m]} (-1)^|S| f(sum_{i in S} v_i)` for homogeneous `f`.
///
/// Zero whenever `m` exceeds the degree of `f`.
pub fn homogeneous_alternating_sum(
    f: &SparsePoly,
    ring: &RingDescriptor,
    vectors: &[Vec<RingElement>],
) -> Result<RingElement> {
    if f.homogeneous_degree().is_none() {
        return Err(Error::NotHomogeneous);
    }
    if vectors.len() > MAX_FAMILY {
        return Err(Error::TooManyElements {
            got: vectors.len(),
            limit: MAX_FAMILY,
        });
    }
    let vars = f.vars();
    let mut points: Vec<Vec<Value>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        if v.len() != vars {
            return Err(Error::ArityMismatch {
                expected: vars,
                got: v.len(),
            });
        }
        for x in v {
            ring.check_same(x.ring())?;
        }
        points.push(v.iter().map(|x| x.value().clone()).collect());
    }
    let sum = alternating_sum(ring, vectors.len(), |mask| {
        let mut p = vec![ring.zero(); vars];
        for i in mask.indices() {
            for (acc, x) in p.iter_mut().zip(&points[i]) {
                ring.add_assign(acc, x);
            }
        }
        ring.eval_poly(f, &p)
    })?;
    Ok(RingElement::from_parts(ring.clone(), sum))
}

/// Determinant polynomial of a generic `n x n` matrix in `Z[x_0, ..., x_{n^2-1}]`, row-major.
pub fn determinant_polynomial(n: usize) -> SparsePoly {
    let m = &generic_matrices(1, n)[0];
    match m.det().expect("generic determinant within limits").into_value() {
        Value::Poly(p) => p,
        _ => unreachable!(),
    }
}

/// Vertex check for a simplex `p_0, ..., p_n` of `n x n` rational matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplexReport {
    /// All subdivision vertices other than the centroid lie on `det = 0`.
    pub premise_holds: bool,
    pub centroid_on_x: bool,
    /// Nonempty proper subsets whose sum has nonzero determinant, in search order.
    pub failing_subsets: Vec<SubsetMask>,
}

impl SimplexReport {
    /// Whether the report agrees with "premise implies centroid on the cone".
    pub fn consistent(&self) -> bool {
        !self.premise_holds || self.centroid_on_x
    }
}

/// Tests every nonempty proper face sum `sum_{i in S} p_i` for lying on the
/// determinantal cone, and the full sum for the centroid. The `1/|S|` scaling
/// of barycentres is dropped since `det` is homogeneous.
pub fn simplex_centroid_check(points: &[SquareMatrix]) -> Result<SimplexReport> {
    let (ring, n) = family_shape(points)?;
    if !matches!(ring.kind(), crate::ring::RingKind::Rationals) {
        return Err(Error::UnsupportedRing(format!(
            "simplex check runs over Q, got {ring}"
        )));
    }
    if points.len() != n + 1 {
        return Err(Error::ShapeMismatch(format!(
            "a simplex of {n}x{n} matrices has {} vertices, got {}",
            n + 1,
            points.len()
        )));
    }
    let m = points.len();
    let mut failing = Vec::new();
    for mask in subsets_by_cardinality(m, 1, m - 1) {
        if !subset_sum_unchecked(&ring, n, points, mask).det()?.is_zero() {
            failing.push(mask);
        }
    }
    let centroid_on_x = subset_sum_unchecked(&ring, n, points, SubsetMask::full(m))
        .det()?
        .is_zero();
    Ok(SimplexReport {
        premise_holds: failing.is_empty(),
        centroid_on_x,
        failing_subsets: failing,
    })
}
