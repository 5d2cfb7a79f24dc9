//! Unit subset sums in finite products of prime fields.

use crate::error::{Error, Result};
use crate::mask::{subsets_by_cardinality, SubsetMask, MAX_FAMILY};
use crate::matrix::{SquareMatrix, GENERAL_SIZE_LIMIT};
use crate::ring::{RingDescriptor, RingElement, RingKind, Value};

/// Most component fields the miner accepts.
pub const MINER_MAX_FIELDS: usize = 4;
/// Largest component field the miner accepts.
pub const MINER_MAX_FIELD_SIZE: u64 = 7;
/// Largest multiset size the miner accepts.
pub const MINER_MAX_ELEMENTS: usize = 5;
/// Upper bound on the number of candidate multisets the miner may visit.
pub const MINER_MAX_TUPLES: u128 = 50_000_000;

/// A finite family of elements of `F_{p_1} x ... x F_{p_r}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemilocalInstance {
    ring: RingDescriptor,
    elements: Vec<RingElement>,
}

fn component_primes(ring: &RingDescriptor) -> Result<Vec<u64>> {
    let not_semilocal = || Error::UnsupportedRing(format!("expected a product of prime fields, got {ring}"));
    match ring.kind() {
        RingKind::PrimeField(p) => Ok(vec![*p]),
        RingKind::Product(cs) => cs
            .iter()
            .map(|c| match c.kind() {
                RingKind::PrimeField(p) => Ok(*p),
                _ => Err(not_semilocal()),
            })
            .collect(),
        _ => Err(not_semilocal()),
    }
}

impl SemilocalInstance {
    pub fn new(ring: &RingDescriptor, elements: Vec<RingElement>) -> Result<Self> {
        component_primes(ring)?;
        for e in &elements {
            e.ring().check_same(ring)?;
        }
        Ok(SemilocalInstance {
            ring: ring.clone(),
            elements,
        })
    }

    /// Builds an instance from residue tuples over the product of `primes`.
    pub fn from_tuples(primes: &[u64], tuples: &[Vec<i64>]) -> Result<Self> {
        let ring = RingDescriptor::product_of_prime_fields(primes)?;
        let elements = tuples.iter().map(|t| ring.tuple(t)).collect::<Result<Vec<_>>>()?;
        Self::new(&ring, elements)
    }

    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn elements(&self) -> &[RingElement] {
        &self.elements
    }

    pub fn n_components(&self) -> usize {
        self.ring.components().map_or(1, <[_]>::len)
    }

    pub fn primes(&self) -> Vec<u64> {
        component_primes(&self.ring).expect("validated on construction")
    }

    /// All component fields have the same characteristic.
    pub fn equal_characteristic(&self) -> bool {
        let ps = self.primes();
        ps.windows(2).all(|w| w[0] == w[1])
    }

    pub fn subset_sum(&self, mask: SubsetMask) -> Value {
        let mut acc = self.ring.zero();
        for i in mask.indices() {
            self.ring.add_assign(&mut acc, self.elements[i].value());
        }
        acc
    }

    pub fn total_is_unit(&self) -> bool {
        let m = self.elements.len();
        m <= MAX_FAMILY && self.ring.is_unit(&self.subset_sum(SubsetMask::full(m)))
    }

    /// Whether a bounded search must succeed: the total is a unit, `bound`
    /// reaches the number of components, and either the characteristic is
    /// shared or there are at most two components.
    pub fn guarantee_applies(&self, bound: usize) -> bool {
        self.total_is_unit()
            && bound >= self.n_components()
            && (self.equal_characteristic() || self.n_components() <= 2)
    }

    /// Every nonempty subset of at most `bound` members sums to a non-unit.
    pub fn no_unit_subsum_up_to(&self, bound: usize) -> bool {
        let m = self.elements.len();
        subsets_by_cardinality(m, 1, bound.min(m)).all(|s| !self.ring.is_unit(&self.subset_sum(s)))
    }
}

/// First nonempty `S` with `|S| <= bound` whose sum is a unit.
pub fn semilocal_find_unit_subsum(instance: &SemilocalInstance, bound: usize) -> Result<Option<SubsetMask>> {
    let m = instance.elements.len();
    if m > MAX_FAMILY {
        return Err(Error::TooManyElements {
            got: m,
            limit: MAX_FAMILY,
        });
    }
    Ok(subsets_by_cardinality(m, 1, bound.min(m)).find(|&s| instance.ring.is_unit(&instance.subset_sum(s))))
}

/// Sends each element to the diagonal matrix of its components.
///
/// All components must be the same field `F_p`; the result lives in
/// `M_r(F_p)` and a subset sum is a unit exactly when its image is invertible.
pub fn embed_product_to_matrices(instance: &SemilocalInstance) -> Result<Vec<SquareMatrix>> {
    let primes = instance.primes();
    if !instance.equal_characteristic() {
        return Err(Error::MixedComponentFields(format!(
            "components have characteristics {primes:?}"
        )));
    }
    let r = primes.len();
    if r > GENERAL_SIZE_LIMIT {
        return Err(Error::SizeLimit(format!(
            "{r} components exceed matrix size limit {GENERAL_SIZE_LIMIT}"
        )));
    }
    let field = RingDescriptor::prime_field(primes[0])?;
    instance
        .elements
        .iter()
        .map(|e| {
            let diag: Vec<Value> = (0..r).map(|i| instance.ring.project(e.value(), i)).collect();
            SquareMatrix::diagonal(&field, &diag)
        })
        .collect()
}

/// The two mixed-characteristic families whose total is a unit although no
/// small subset sum is.
///
/// The first lives in `F_2 x F_3 x F_5` with four elements and no unit subset
/// sum of size at most three. The second lives in `F_2 x F_3 x F_5 x F_7` with
/// five elements and no unit proper subset sum.
pub fn example8_instances() -> Result<Vec<SemilocalInstance>> {
    let a = SemilocalInstance::from_tuples(
        &[2, 3, 5],
        &[vec![0, 1, 1], vec![1, 2, 0], vec![1, 2, 0], vec![1, 2, 0]],
    )?;
    let b = SemilocalInstance::from_tuples(
        &[2, 3, 5, 7],
        &[
            vec![0, 0, 0, 1],
            vec![1, 2, 0, 0],
            vec![1, 2, 0, 1],
            vec![1, 2, 0, 2],
            vec![0, 1, 1, 4],
        ],
    )?;
    for inst in [&a, &b] {
        let m = inst.elements.len();
        if !inst.total_is_unit() || !inst.no_unit_subsum_up_to(m - 1) {
            return Err(Error::ContractViolation(format!(
                "built-in instance over {} fails its defining property",
                inst.ring
            )));
        }
    }
    Ok(vec![a, b])
}

fn binomial(n: u128, k: u128) -> u128 {
    let k = k.min(n.saturating_sub(k));
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

struct Miner<'a> {
    primes: &'a [u64],
    non_units: Vec<Vec<u64>>,
    m: usize,
    small: usize,
    found: Vec<Vec<usize>>,
}

impl Miner<'_> {
    fn add(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        a.iter()
            .zip(b)
            .zip(self.primes)
            .map(|((x, y), p)| (x + y) % p)
            .collect()
    }

    fn is_unit(v: &[u64]) -> bool {
        v.iter().all(|&x| x != 0)
    }

    /// `sums` holds the sums of all subsets of the prefix with at most
    /// `small - 1` members, tagged by size. Every subset of at most `small`
    /// members seen so far sums to a non-unit.
    fn dfs(&mut self, start: usize, prefix: &mut Vec<usize>, sums: &[(Vec<u64>, usize)], total: &[u64]) {
        if prefix.len() == self.m {
            if Self::is_unit(total) {
                self.found.push(prefix.clone());
            }
            return;
        }
        for idx in start..self.non_units.len() {
            let x = &self.non_units[idx];
            let mut next = sums.to_vec();
            let mut ok = true;
            for (s, k) in sums {
                let t = self.add(s, x);
                if Self::is_unit(&t) {
                    ok = false;
                    break;
                }
                if k + 1 < self.small {
                    next.push((t, k + 1));
                }
            }
            if !ok {
                continue;
            }
            let new_total = self.add(total, x);
            prefix.push(idx);
            self.dfs(idx, prefix, &next, &new_total);
            prefix.pop();
        }
    }
}

/// All multisets of `m` elements of `F_{p_1} x ... x F_{p_r}` whose total is
/// a unit while no subset of at most `bound` members sums to a unit.
///
/// Members are listed in lexicographic order of their residue tuples and the
/// instances in lexicographic order of member lists.
pub fn mixed_char_counterexample_search(
    primes: &[u64],
    m: usize,
    bound: usize,
) -> Result<Vec<SemilocalInstance>> {
    if primes.is_empty() || primes.len() > MINER_MAX_FIELDS {
        return Err(Error::InvalidParameters(format!(
            "between 1 and {MINER_MAX_FIELDS} component fields required, got {}",
            primes.len()
        )));
    }
    if let Some(p) = primes.iter().find(|&&p| p > MINER_MAX_FIELD_SIZE) {
        return Err(Error::InvalidParameters(format!(
            "component field F_{p} exceeds size {MINER_MAX_FIELD_SIZE}"
        )));
    }
    if m == 0 || m > MINER_MAX_ELEMENTS {
        return Err(Error::InvalidParameters(format!(
            "multiset size must be in 1..={MINER_MAX_ELEMENTS}, got {m}"
        )));
    }
    if bound == 0 {
        return Err(Error::InvalidParameters("bound must be positive".into()));
    }
    let ring = RingDescriptor::product_of_prime_fields(primes)?;

    let mut all: Vec<Vec<u64>> = vec![vec![]];
    for &p in primes {
        all = all
            .into_iter()
            .flat_map(|t| {
                (0..p).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    let non_units: Vec<Vec<u64>> = all.into_iter().filter(|t| !Miner::is_unit(t)).collect();
    let tuples = binomial((non_units.len() + m - 1) as u128, m as u128);
    if tuples > MINER_MAX_TUPLES {
        return Err(Error::SearchSpaceTooLarge(format!(
            "{tuples} candidate multisets exceed {MINER_MAX_TUPLES}"
        )));
    }

    let r = primes.len();
    let mut miner = Miner {
        primes,
        non_units,
        m,
        small: bound.min(m),
        found: Vec::new(),
    };
    let zero = vec![0u64; r];
    miner.dfs(0, &mut Vec::new(), &[(zero.clone(), 0)], &zero);

    let found = std::mem::take(&mut miner.found);
    found
        .into_iter()
        .map(|idxs| {
            let elements = idxs
                .iter()
                .map(|&i| {
                    let v = Value::Tuple(miner.non_units[i].iter().map(|&x| Value::Residue(x)).collect());
                    ring.element(v)
                })
                .collect::<Result<Vec<_>>>()?;
            SemilocalInstance::new(&ring, elements)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sorted_residues(inst: &SemilocalInstance) -> Vec<String> {
        let mut v: Vec<String> = inst.elements().iter().map(|e| e.to_string()).collect();
        v.sort();
        v
    }

    #[test]
    fn example8_properties() {
        let insts = example8_instances().unwrap();
        assert_eq!(insts.len(), 2);
        let (a, b) = (&insts[0], &insts[1]);
        assert_eq!(a.n_components(), 3);
        assert_eq!(semilocal_find_unit_subsum(a, 3).unwrap(), None);
        assert_eq!(
            semilocal_find_unit_subsum(a, 4).unwrap(),
            Some(SubsetMask::full(4))
        );
        assert!(!a.guarantee_applies(3));
        assert_eq!(b.n_components(), 4);
        assert_eq!(semilocal_find_unit_subsum(b, 4).unwrap(), None);
        assert_eq!(
            semilocal_find_unit_subsum(b, 5).unwrap(),
            Some(SubsetMask::full(5))
        );
        // b is a counterexample even with bound equal to the component count.
        assert!(b.total_is_unit() && !b.equal_characteristic());
    }

    #[test]
    fn miner_rediscovers_first_example() {
        let found = mixed_char_counterexample_search(&[2, 3, 5], 4, 3).unwrap();
        let target = sorted_residues(&example8_instances().unwrap()[0]);
        assert!(found.iter().any(|i| sorted_residues(i) == target));
        for inst in &found {
            assert!(inst.total_is_unit());
            assert!(inst.no_unit_subsum_up_to(3));
        }
    }

    #[test]
    fn miner_finds_nothing_in_equal_characteristic() {
        assert!(mixed_char_counterexample_search(&[3, 3, 3], 4, 3)
            .unwrap()
            .is_empty());
        assert!(mixed_char_counterexample_search(&[2, 2], 3, 2)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn two_components_always_have_a_small_witness() {
        for primes in [[2u64, 3], [2, 2], [3, 5]] {
            for m in 1..=4 {
                assert!(mixed_char_counterexample_search(&primes, m, 2)
                    .unwrap()
                    .is_empty());
            }
        }
    }

    #[test]
    fn miner_rejects_large_requests() {
        assert!(matches!(
            mixed_char_counterexample_search(&[2, 3, 5, 7], 5, 4),
            Err(Error::SearchSpaceTooLarge(_))
        ));
        assert!(matches!(
            mixed_char_counterexample_search(&[11], 2, 1),
            Err(Error::InvalidParameters(_))
        ));
        assert!(matches!(
            mixed_char_counterexample_search(&[2, 3, 5, 7, 2], 2, 1),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn embedding_matches_unit_test() {
        let inst = SemilocalInstance::from_tuples(
            &[3, 3, 3],
            &[vec![1, 0, 0], vec![0, 2, 0], vec![0, 0, 1], vec![1, 1, 0]],
        )
        .unwrap();
        let mats = embed_product_to_matrices(&inst).unwrap();
        assert_eq!(mats.len(), 4);
        for bits in 1..16u64 {
            let s = SubsetMask::new(bits, 4).unwrap();
            let unit = inst.ring().is_unit(&inst.subset_sum(s));
            let inv = crate::subset_sum(&mats, s).unwrap().is_invertible().unwrap();
            assert_eq!(unit, inv, "{s}");
        }
        let mixed = &example8_instances().unwrap()[0];
        assert!(matches!(
            embed_product_to_matrices(mixed),
            Err(Error::MixedComponentFields(_))
        ));
    }

    #[test]
    fn instance_validation() {
        let z6 = RingDescriptor::mod_ring(6).unwrap();
        assert!(matches!(
            SemilocalInstance::new(&z6, vec![]),
            Err(Error::UnsupportedRing(_))
        ));
        let f = RingDescriptor::product_of_prime_fields(&[2, 3]).unwrap();
        let g = RingDescriptor::product_of_prime_fields(&[2, 5]).unwrap();
        assert!(SemilocalInstance::new(&f, vec![g.tuple(&[1, 1]).unwrap()]).is_err());
        let many = vec![f.tuple(&[0, 1]).unwrap(); 65];
        let inst = SemilocalInstance::new(&f, many).unwrap();
        assert!(matches!(
            semilocal_find_unit_subsum(&inst, 2),
            Err(Error::TooManyElements { .. })
        ));
    }
}
