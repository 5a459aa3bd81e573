//! Congruences of finite lattices as normalized partitions.
//!
//! Principal congruences are computed two ways: by the closed-form
//! characterization valid on distributive lattices (`x ≡ y` iff
//! `b∨x = b∨y` and `a∧x = a∧y` for `a ≤ b`), and by a closure oracle that
//! works on any lattice. The full congruence lattice is generated as the
//! join-closure of the principal congruences.

use std::collections::BTreeSet;
use std::fmt;

use petgraph::unionfind::UnionFind;
use thiserror::Error;

use crate::lattice::{ElementId, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceError {
    #[error("partition covers {partition} elements but the lattice has {lattice}")]
    SizeMismatch { partition: usize, lattice: usize },
    #[error("lattice `{0}` is not distributive")]
    NotDistributive(String),
    #[error("partition is not compatible with meet and join")]
    NotCompatible,
    #[error("exhaustive partition enumeration is limited to {limit} elements, got {size}")]
    TooLarge { size: usize, limit: usize },
}

/// An equivalence relation on `0..len`, stored as a class index per element.
///
/// Class indices are normalized so they appear in order of each class's
/// smallest member; two partitions are equal iff their vectors are equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    class_of: Vec<usize>,
}

impl Partition {
    /// Normalizes an arbitrary labelling: elements with equal keys share a class.
    pub fn from_keys<K: PartialEq>(keys: &[K]) -> Self {
        let mut firsts: Vec<usize> = Vec::new();
        let class_of = keys
            .iter()
            .enumerate()
            .map(|(i, k)| match firsts.iter().position(|&r| keys[r] == *k) {
                Some(c) => c,
                None => {
                    firsts.push(i);
                    firsts.len() - 1
                }
            })
            .collect();
        Partition { class_of }
    }

    pub fn from_blocks(len: usize, blocks: &[&[usize]]) -> Self {
        let mut keys: Vec<usize> = (0..len).map(|i| usize::MAX - i).collect();
        for (b, block) in blocks.iter().enumerate() {
            for &i in *block {
                keys[i] = b;
            }
        }
        Partition::from_keys(&keys)
    }

    fn from_union_find(len: usize, uf: &UnionFind<usize>) -> Self {
        let roots: Vec<usize> = (0..len).map(|i| uf.find(i)).collect();
        Partition::from_keys(&roots)
    }

    /// Δ: every element in its own class.
    pub fn identity(len: usize) -> Self {
        Partition {
            class_of: (0..len).collect(),
        }
    }

    /// ∇: a single class.
    pub fn total(len: usize) -> Self {
        Partition {
            class_of: vec![0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.class_of.len()
    }

    pub fn is_empty(&self) -> bool {
        self.class_of.is_empty()
    }

    pub fn class_of(&self, e: ElementId) -> usize {
        self.class_of[e.index()]
    }

    pub fn same_class(&self, a: ElementId, b: ElementId) -> bool {
        self.class_of[a.index()] == self.class_of[b.index()]
    }

    pub fn num_classes(&self) -> usize {
        self.class_of.iter().max().map_or(0, |m| m + 1)
    }

    pub fn classes(&self) -> Vec<Vec<ElementId>> {
        let mut out = vec![Vec::new(); self.num_classes()];
        for (i, &c) in self.class_of.iter().enumerate() {
            out[c].push(ElementId::new(i));
        }
        out
    }

    /// Smallest member of each element's class.
    pub fn representatives(&self) -> Vec<ElementId> {
        let firsts: Vec<ElementId> = self.classes().iter().map(|c| c[0]).collect();
        self.class_of.iter().map(|&c| firsts[c]).collect()
    }

    /// True iff every class of `self` lies inside a class of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        self.len() == other.len()
            && (0..self.len()).all(|i| {
                (0..self.len()).all(|j| {
                    self.class_of[i] != self.class_of[j] || other.class_of[i] == other.class_of[j]
                })
            })
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for class in self.classes() {
            f.write_str("{")?;
            for (k, e) in class.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        Ok(())
    }
}

/// A partition known to be compatible with the lattice operations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Congruence(Partition);

impl Congruence {
    /// Validates `partition` against `lattice`.
    pub fn new(lattice: &Lattice, partition: Partition) -> Result<Self, CongruenceError> {
        if is_congruence(lattice, &partition)? {
            Ok(Congruence(partition))
        } else {
            Err(CongruenceError::NotCompatible)
        }
    }

    pub fn identity(lattice: &Lattice) -> Self {
        Congruence(Partition::identity(lattice.size()))
    }

    pub fn total(lattice: &Lattice) -> Self {
        Congruence(Partition::total(lattice.size()))
    }

    pub fn partition(&self) -> &Partition {
        &self.0
    }

    pub fn into_partition(self) -> Partition {
        self.0
    }

    /// Classes are intervals of the order: `x ≡ y` and `x ≤ z ≤ y` give `x ≡ z`.
    pub fn is_convex(&self, lattice: &Lattice) -> bool {
        lattice.elements().all(|x| {
            lattice.elements().all(|y| {
                !self.0.same_class(x, y)
                    || lattice
                        .elements()
                        .filter(|&z| lattice.leq(x, z) && lattice.leq(z, y))
                        .all(|z| self.0.same_class(x, z))
            })
        })
    }
}

impl std::ops::Deref for Congruence {
    type Target = Partition;
    fn deref(&self) -> &Partition {
        &self.0
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_size(lattice: &Lattice, p: &Partition) -> Result<(), CongruenceError> {
    if p.len() != lattice.size() {
        return Err(CongruenceError::SizeMismatch {
            partition: p.len(),
            lattice: lattice.size(),
        });
    }
    Ok(())
}

/// Checks that `x ≡ y` implies `x∨c ≡ y∨c` and `x∧c ≡ y∧c` for every `c`.
///
/// One-variable substitution suffices for an equivalence, and comparing each
/// element against its class representative covers all related pairs.
pub fn is_congruence(lattice: &Lattice, p: &Partition) -> Result<bool, CongruenceError> {
    check_size(lattice, p)?;
    let reps = p.representatives();
    Ok(lattice.elements().all(|x| {
        let r = reps[x.index()];
        x == r
            || lattice.elements().all(|c| {
                p.same_class(lattice.join(x, c), lattice.join(r, c))
                    && p.same_class(lattice.meet(x, c), lattice.meet(r, c))
            })
    }))
}

/// The relation `x ≡ y` iff `b∨x = b∨y` and `a∧x = a∧y`, for `a ≤ b`.
///
/// Always an equivalence (it is the kernel of `x ↦ (b∨x, a∧x)`); it is a
/// congruence on distributive lattices but not in general.
pub fn closed_form_relation(lattice: &Lattice, a: ElementId, b: ElementId) -> Partition {
    let (a, b) = (lattice.meet(a, b), lattice.join(a, b));
    let keys: Vec<(ElementId, ElementId)> = lattice
        .elements()
        .map(|x| (lattice.join(b, x), lattice.meet(a, x)))
        .collect();
    Partition::from_keys(&keys)
}

pub fn closed_form_is_congruence(lattice: &Lattice, a: ElementId, b: ElementId) -> bool {
    is_congruence(lattice, &closed_form_relation(lattice, a, b)).expect("sizes agree")
}

/// Θ(a,b) on a distributive lattice, via the closed-form characterization.
///
/// Arbitrary pairs are first replaced by `(a∧b, a∨b)`, which generates the
/// same congruence.
pub fn principal_congruence(
    lattice: &Lattice,
    a: ElementId,
    b: ElementId,
) -> Result<Congruence, CongruenceError> {
    if !lattice.is_distributive() {
        return Err(CongruenceError::NotDistributive(lattice.name().to_string()));
    }
    Ok(Congruence(closed_form_relation(lattice, a, b)))
}

/// Θ(a,b) on any lattice, as the least fixpoint of the compatibility closure.
pub fn principal_congruence_oracle(lattice: &Lattice, a: ElementId, b: ElementId) -> Congruence {
    let n = lattice.size();
    let mut uf = UnionFind::new(n);
    uf.union(a.index(), b.index());
    close(lattice, &mut uf);
    Congruence(Partition::from_union_find(n, &uf))
}

/// Merges classes until the partition is compatible.
fn close(lattice: &Lattice, uf: &mut UnionFind<usize>) {
    loop {
        let mut changed = false;
        for x in lattice.elements() {
            let r = ElementId::new(uf.find(x.index()));
            if r == x {
                continue;
            }
            for c in lattice.elements() {
                changed |= uf.union(lattice.join(x, c).index(), lattice.join(r, c).index());
                changed |= uf.union(lattice.meet(x, c).index(), lattice.meet(r, c).index());
            }
        }
        if !changed {
            break;
        }
    }
}

/// Least congruence containing both arguments.
pub fn congruence_join(
    lattice: &Lattice,
    theta: &Congruence,
    psi: &Congruence,
) -> Result<Congruence, CongruenceError> {
    check_size(lattice, theta)?;
    check_size(lattice, psi)?;
    let n = lattice.size();
    let mut uf = UnionFind::new(n);
    for p in [theta, psi] {
        for (x, r) in p.representatives().into_iter().enumerate() {
            uf.union(x, r.index());
        }
    }
    // The transitive closure of two congruences is already compatible; the
    // closure pass is a no-op kept so the result is a congruence by construction.
    close(lattice, &mut uf);
    let joined = Partition::from_union_find(n, &uf);
    debug_assert!(is_congruence(lattice, &joined).unwrap_or(false));
    Ok(Congruence(joined))
}

/// Every principal congruence Θ(a,b) with `a < b`, deduplicated and sorted.
pub fn principal_congruences(lattice: &Lattice) -> Vec<Congruence> {
    let distributive = lattice.is_distributive();
    let mut out = BTreeSet::new();
    for a in lattice.elements() {
        for b in lattice.elements().filter(|&b| lattice.lt(a, b)) {
            out.insert(if distributive {
                Congruence(closed_form_relation(lattice, a, b))
            } else {
                principal_congruence_oracle(lattice, a, b)
            });
        }
    }
    out.into_iter().collect()
}

/// Con L, sorted: the join-closure of Δ and all principal congruences.
pub fn all_congruences(lattice: &Lattice) -> Vec<Congruence> {
    let principals = principal_congruences(lattice);
    let mut seen = BTreeSet::new();
    let delta = Congruence::identity(lattice);
    seen.insert(delta.clone());
    let mut frontier = vec![delta];
    while let Some(theta) = frontier.pop() {
        for p in &principals {
            let j = congruence_join(lattice, &theta, p).expect("same lattice");
            if seen.insert(j.clone()) {
                frontier.push(j);
            }
        }
    }
    seen.into_iter().collect()
}

/// Largest lattice accepted by [`all_congruences_by_partition_filter`].
pub const PARTITION_FILTER_LIMIT: usize = 8;

/// Con L by brute force: enumerate every set partition and keep the
/// compatible ones. Exponential (Bell numbers), so gated by size.
pub fn all_congruences_by_partition_filter(
    lattice: &Lattice,
) -> Result<Vec<Congruence>, CongruenceError> {
    let n = lattice.size();
    if n > PARTITION_FILTER_LIMIT {
        return Err(CongruenceError::TooLarge {
            size: n,
            limit: PARTITION_FILTER_LIMIT,
        });
    }
    let mut out = Vec::new();
    for_each_partition(n, &mut |p| {
        if is_congruence(lattice, p).expect("sizes agree") {
            out.push(Congruence(p.clone()));
        }
    });
    out.sort();
    Ok(out)
}

/// Visits all set partitions of `0..n` as restricted growth strings.
pub fn for_each_partition(n: usize, visit: &mut dyn FnMut(&Partition)) {
    fn go(i: usize, max: usize, rgs: &mut Vec<usize>, visit: &mut dyn FnMut(&Partition)) {
        if i == rgs.len() {
            visit(&Partition {
                class_of: rgs.clone(),
            });
            return;
        }
        for c in 0..=max {
            rgs[i] = c;
            go(i + 1, max.max(c + 1), rgs, visit);
        }
    }
    if n == 0 {
        visit(&Partition {
            class_of: Vec::new(),
        });
        return;
    }
    let mut rgs = vec![0; n];
    go(1, 1, &mut rgs, visit);
}

/// Outcome of comparing the closed-form relation with the least congruence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosedFormOutcome {
    Agrees,
    NotCongruence,
    StrictlyCoarser,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedFormFinding {
    pub a: ElementId,
    pub b: ElementId,
    pub relation: Partition,
    pub least: Congruence,
    pub outcome: ClosedFormOutcome,
}

/// Evaluates the closed-form relation against the oracle for every `a ≤ b`.
pub fn closed_form_findings(lattice: &Lattice) -> Vec<ClosedFormFinding> {
    let mut out = Vec::new();
    for a in lattice.elements() {
        for b in lattice.elements().filter(|&b| lattice.leq(a, b)) {
            let relation = closed_form_relation(lattice, a, b);
            let least = principal_congruence_oracle(lattice, a, b);
            let outcome = if !is_congruence(lattice, &relation).expect("sizes agree") {
                ClosedFormOutcome::NotCongruence
            } else if relation == *least.partition() {
                ClosedFormOutcome::Agrees
            } else {
                ClosedFormOutcome::StrictlyCoarser
            };
            out.push(ClosedFormFinding {
                a,
                b,
                relation,
                least,
                outcome,
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> ElementId {
        ElementId::new(i)
    }

    fn c3() -> Lattice {
        Lattice::chain(3).unwrap()
    }

    #[test]
    fn chain_partitions() {
        let l = c3();
        assert!(is_congruence(&l, &Partition::identity(3)).unwrap());
        assert!(is_congruence(&l, &Partition::total(3)).unwrap());
        assert!(!is_congruence(&l, &Partition::from_blocks(3, &[&[0, 2], &[1]])).unwrap());
        assert_eq!(
            is_congruence(&l, &Partition::identity(4)),
            Err(CongruenceError::SizeMismatch {
                partition: 4,
                lattice: 3
            })
        );
    }

    #[test]
    fn normalization() {
        let p = Partition::from_keys(&['x', 'y', 'x', 'z']);
        assert_eq!(p.to_string(), "{0,2}{1}{3}");
        assert_eq!(p, Partition::from_blocks(4, &[&[3], &[1], &[2, 0]]));
        assert_eq!(p.num_classes(), 3);
    }

    #[test]
    fn principal_on_small_lattices() {
        let l = c3();
        let t = principal_congruence(&l, e(0), e(1)).unwrap();
        assert_eq!(t.to_string(), "{0,1}{2}");
        assert_eq!(principal_congruence_oracle(&l, e(0), e(1)), t);
        // reversed pair reduces to the same comparable pair
        assert_eq!(principal_congruence(&l, e(1), e(0)).unwrap(), t);

        let b2 = Lattice::boolean(2).unwrap();
        let t = principal_congruence(&b2, e(0), e(1)).unwrap();
        assert_eq!(t.to_string(), "{0,1}{2,3}");
        assert_eq!(principal_congruence_oracle(&b2, e(0), e(1)), t);

        for x in l.elements() {
            assert_eq!(
                principal_congruence(&l, x, x).unwrap(),
                Congruence::identity(&l)
            );
            assert_eq!(
                principal_congruence_oracle(&l, x, x),
                Congruence::identity(&l)
            );
        }
    }

    #[test]
    fn m3_is_simple() {
        let m3 = Lattice::m3();
        assert_eq!(
            principal_congruence_oracle(&m3, e(0), e(1)),
            Congruence::total(&m3)
        );
        assert_eq!(all_congruences(&m3).len(), 2);
        assert!(matches!(
            principal_congruence(&m3, e(0), e(1)),
            Err(CongruenceError::NotDistributive(_))
        ));
    }

    #[test]
    fn closed_form_holds_on_chain_fails_off_distributive() {
        let c4 = Lattice::chain(4).unwrap();
        for a in c4.elements() {
            for b in c4.elements().filter(|&b| c4.leq(a, b)) {
                assert!(closed_form_is_congruence(&c4, a, b));
            }
        }
        for l in [Lattice::n5(), Lattice::m3()] {
            assert!(closed_form_findings(&l)
                .iter()
                .any(|f| f.outcome != ClosedFormOutcome::Agrees));
        }
    }

    #[test]
    fn closed_form_matches_oracle_on_distributive_catalogue() {
        let mut lattices: Vec<Lattice> = (1..=8).map(|k| Lattice::chain(k).unwrap()).collect();
        lattices.extend((0..=3).map(|k| Lattice::boolean(k).unwrap()));
        for l in &lattices {
            for a in l.elements() {
                for b in l.elements() {
                    assert_eq!(
                        principal_congruence(l, a, b).unwrap(),
                        principal_congruence_oracle(l, a, b),
                        "{} ({a},{b})",
                        l.name()
                    );
                }
            }
        }
    }

    #[test]
    fn joins() {
        let c4 = Lattice::chain(4).unwrap();
        let t01 = principal_congruence_oracle(&c4, e(0), e(1));
        let t23 = principal_congruence_oracle(&c4, e(2), e(3));
        let j = congruence_join(&c4, &t01, &t23).unwrap();
        assert_eq!(j.to_string(), "{0,1}{2,3}");
        let delta = Congruence::identity(&c4);
        assert_eq!(congruence_join(&c4, &t01, &delta).unwrap(), t01);
        assert_eq!(congruence_join(&c4, &t01, &t01).unwrap(), t01);
        let other = Congruence::identity(&c3());
        assert!(matches!(
            congruence_join(&c4, &t01, &other),
            Err(CongruenceError::SizeMismatch { .. })
        ));
    }

    #[test]
    fn congruence_counts() {
        assert_eq!(all_congruences(&Lattice::chain(2).unwrap()).len(), 2);
        assert_eq!(all_congruences(&c3()).len(), 4);
        assert_eq!(all_congruences(&Lattice::boolean(2).unwrap()).len(), 4);
        for k in 2..=6 {
            let l = Lattice::chain(k).unwrap();
            let con = all_congruences(&l);
            assert_eq!(con.len(), 1 << (k - 1));
            if k <= 5 {
                assert_eq!(all_congruences_by_partition_filter(&l).unwrap(), con);
            }
        }
    }

    #[test]
    fn enumerated_congruences_are_convex_and_bounded() {
        let mut lattices: Vec<Lattice> = (1..=5).map(|k| Lattice::chain(k).unwrap()).collect();
        lattices.extend((0..=3).map(|k| Lattice::boolean(k).unwrap()));
        lattices.push(Lattice::m3());
        lattices.push(Lattice::n5());
        for l in &lattices {
            let con = all_congruences(l);
            assert!(con.contains(&Congruence::identity(l)));
            assert!(con.contains(&Congruence::total(l)));
            for c in &con {
                assert!(is_congruence(l, c).unwrap());
                assert!(c.is_convex(l));
            }
            if l.size() <= PARTITION_FILTER_LIMIT {
                assert_eq!(
                    all_congruences_by_partition_filter(l).unwrap(),
                    con,
                    "{}",
                    l.name()
                );
            }
        }
    }

    #[test]
    fn partition_enumeration_counts_bell_numbers() {
        let bell = [1, 1, 2, 5, 15, 52, 203];
        for (n, &b) in bell.iter().enumerate() {
            let mut count = 0;
            for_each_partition(n, &mut |_| count += 1);
            assert_eq!(count, b);
        }
    }

    #[test]
    fn partition_filter_is_gated() {
        let b4 = Lattice::boolean(4).unwrap();
        assert!(matches!(
            all_congruences_by_partition_filter(&b4),
            Err(CongruenceError::TooLarge { .. })
        ));
    }
}
