//! Finite bounded lattices given by their Hasse diagram.
//!
//! A [`Lattice`] is built once from a list of cover pairs and validated at
//! construction time: the order is the reflexive-transitive closure of the
//! covers, and every pair of elements must have a unique meet and join.
//! All tables are materialized, so queries are plain lookups.

use std::cmp::Reverse;
use std::collections::BinaryHeap;
use std::fmt;

use petgraph::algo::toposort;
use petgraph::graph::DiGraph;
use thiserror::Error;

/// Position of an element inside its owning [`Lattice`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
#[serde(transparent)]
pub struct ElementId(usize);

impl ElementId {
    pub const fn new(index: usize) -> Self {
        ElementId(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for ElementId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("a lattice needs at least one element")]
    Empty,
    #[error("cover ({lower}, {upper}) references an element outside 0..{size}")]
    IndexOutOfRange {
        lower: usize,
        upper: usize,
        size: usize,
    },
    #[error("cover relation contains a cycle")]
    CyclicCovers,
    #[error("order has no unique {0}")]
    NotBounded(&'static str),
    #[error("elements {a} and {b} have no unique {op}")]
    NotALattice {
        a: usize,
        b: usize,
        op: &'static str,
    },
    #[error("unknown catalogue lattice `{0}`")]
    UnknownName(String),
    #[error("label index {index} outside 0..{size}")]
    LabelOutOfRange { index: usize, size: usize },
    #[error("label `{0}` must not be empty, contain whitespace or be all digits")]
    BadLabel(String),
}

/// A finite bounded lattice with precomputed order, meet and join tables.
///
/// Elements are identified by position; labels are decoration for I/O only.
#[derive(Clone, Debug)]
pub struct Lattice {
    name: String,
    size: usize,
    leq: Vec<bool>,
    meet: Vec<ElementId>,
    join: Vec<ElementId>,
    bottom: ElementId,
    top: ElementId,
    upper_covers: Vec<Vec<ElementId>>,
    lower_covers: Vec<Vec<ElementId>>,
    labels: Vec<Option<String>>,
}

impl Lattice {
    /// Builds a lattice from cover pairs `(i, j)` meaning `i` is covered by `j`.
    ///
    /// Redundant pairs (ones implied by transitivity) are accepted; the stored
    /// covers are always the transitive reduction of the resulting order.
    pub fn from_covers(
        name: impl Into<String>,
        size: usize,
        covers: &[(usize, usize)],
    ) -> Result<Self, LatticeError> {
        if size == 0 {
            return Err(LatticeError::Empty);
        }
        let mut graph = DiGraph::<(), ()>::with_capacity(size, covers.len());
        let nodes: Vec<_> = (0..size).map(|_| graph.add_node(())).collect();
        for &(lower, upper) in covers {
            if lower >= size || upper >= size {
                return Err(LatticeError::IndexOutOfRange { lower, upper, size });
            }
            if lower == upper {
                return Err(LatticeError::CyclicCovers);
            }
            graph.add_edge(nodes[lower], nodes[upper], ());
        }
        let topo = toposort(&graph, None).map_err(|_| LatticeError::CyclicCovers)?;

        // Up-sets, filled in reverse topological order.
        let mut leq = vec![false; size * size];
        for node in topo.iter().rev() {
            let i = node.index();
            leq[i * size + i] = true;
            for succ in graph.neighbors(*node) {
                let j = succ.index();
                for k in 0..size {
                    if leq[j * size + k] {
                        leq[i * size + k] = true;
                    }
                }
            }
        }

        let bottom = (0..size)
            .find(|&i| (0..size).all(|k| leq[i * size + k]))
            .ok_or(LatticeError::NotBounded("minimum"))?;
        let top = (0..size)
            .find(|&i| (0..size).all(|k| leq[k * size + i]))
            .ok_or(LatticeError::NotBounded("maximum"))?;

        let below_count: Vec<usize> = (0..size)
            .map(|i| (0..size).filter(|&k| leq[k * size + i]).count())
            .collect();
        let above_count: Vec<usize> = (0..size)
            .map(|i| (0..size).filter(|&k| leq[i * size + k]).count())
            .collect();

        let mut meet = vec![ElementId(0); size * size];
        let mut join = vec![ElementId(0); size * size];
        let mut bounds = Vec::with_capacity(size);
        for a in 0..size {
            for b in a..size {
                bounds.clear();
                bounds.extend((0..size).filter(|&c| leq[c * size + a] && leq[c * size + b]));
                let m = greatest(&bounds, &below_count, |x, y| leq[x * size + y])
                    .ok_or(LatticeError::NotALattice { a, b, op: "meet" })?;
                bounds.clear();
                bounds.extend((0..size).filter(|&c| leq[a * size + c] && leq[b * size + c]));
                let j = greatest(&bounds, &above_count, |x, y| leq[y * size + x])
                    .ok_or(LatticeError::NotALattice { a, b, op: "join" })?;
                meet[a * size + b] = ElementId(m);
                meet[b * size + a] = ElementId(m);
                join[a * size + b] = ElementId(j);
                join[b * size + a] = ElementId(j);
            }
        }

        let mut upper_covers = vec![Vec::new(); size];
        let mut lower_covers = vec![Vec::new(); size];
        for a in 0..size {
            for b in 0..size {
                if a != b
                    && leq[a * size + b]
                    && !(0..size)
                        .any(|c| c != a && c != b && leq[a * size + c] && leq[c * size + b])
                {
                    upper_covers[a].push(ElementId(b));
                    lower_covers[b].push(ElementId(a));
                }
            }
        }

        Ok(Lattice {
            name: name.into(),
            size,
            leq,
            meet,
            join,
            bottom: ElementId(bottom),
            top: ElementId(top),
            upper_covers,
            lower_covers,
            labels: vec![None; size],
        })
    }

    /// Attaches a label to an element. Labels never affect semantics.
    ///
    /// All-digit labels are rejected so that numeric tokens always mean
    /// indices.
    pub fn set_label(
        &mut self,
        index: usize,
        label: impl Into<String>,
    ) -> Result<(), LatticeError> {
        let label = label.into();
        if label.is_empty()
            || label.contains(char::is_whitespace)
            || label.bytes().all(|b| b.is_ascii_digit())
        {
            return Err(LatticeError::BadLabel(label));
        }
        let size = self.size;
        let slot = self
            .labels
            .get_mut(index)
            .ok_or(LatticeError::LabelOutOfRange { index, size })?;
        *slot = Some(label);
        Ok(())
    }

    pub fn with_labels<S: Into<String>>(
        mut self,
        labels: impl IntoIterator<Item = (usize, S)>,
    ) -> Result<Self, LatticeError> {
        for (i, l) in labels {
            self.set_label(i, l)?;
        }
        Ok(self)
    }

    pub fn rename(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> ElementId {
        self.bottom
    }

    pub fn top(&self) -> ElementId {
        self.top
    }

    pub fn elements(&self) -> impl DoubleEndedIterator<Item = ElementId> + ExactSizeIterator {
        (0..self.size).map(ElementId)
    }

    /// Returns the element at `index` if it belongs to this lattice.
    pub fn element(&self, index: usize) -> Option<ElementId> {
        (index < self.size).then_some(ElementId(index))
    }

    pub fn contains(&self, e: ElementId) -> bool {
        e.0 < self.size
    }

    pub fn label(&self, e: ElementId) -> Option<&str> {
        self.labels.get(e.0).and_then(|l| l.as_deref())
    }

    /// Resolves a 0-based index or an element label.
    pub fn resolve(&self, token: &str) -> Option<ElementId> {
        if let Ok(i) = token.parse::<usize>() {
            return self.element(i);
        }
        self.labels
            .iter()
            .position(|l| l.as_deref() == Some(token))
            .map(ElementId)
    }

    #[inline]
    pub fn leq(&self, a: ElementId, b: ElementId) -> bool {
        self.leq[a.0 * self.size + b.0]
    }

    #[inline]
    pub fn lt(&self, a: ElementId, b: ElementId) -> bool {
        a != b && self.leq(a, b)
    }

    #[inline]
    pub fn meet(&self, a: ElementId, b: ElementId) -> ElementId {
        self.meet[a.0 * self.size + b.0]
    }

    #[inline]
    pub fn join(&self, a: ElementId, b: ElementId) -> ElementId {
        self.join[a.0 * self.size + b.0]
    }

    /// Meet of all elements in `items`; the empty meet is top.
    pub fn meet_all(&self, items: impl IntoIterator<Item = ElementId>) -> ElementId {
        items.into_iter().fold(self.top, |acc, x| self.meet(acc, x))
    }

    /// Join of all elements in `items`; the empty join is bottom.
    pub fn join_all(&self, items: impl IntoIterator<Item = ElementId>) -> ElementId {
        items
            .into_iter()
            .fold(self.bottom, |acc, x| self.join(acc, x))
    }

    /// `(x ∨ y) ∧ (y ∨ z) ∧ (z ∨ x)`
    pub fn med(&self, x: ElementId, y: ElementId, z: ElementId) -> ElementId {
        self.meet(self.meet(self.join(x, y), self.join(y, z)), self.join(z, x))
    }

    /// `(x ∧ y) ∨ (y ∧ z) ∨ (z ∧ x)`, which agrees with [`Lattice::med`]
    /// exactly on distributive lattices.
    pub fn med_dual(&self, x: ElementId, y: ElementId, z: ElementId) -> ElementId {
        self.join(self.join(self.meet(x, y), self.meet(y, z)), self.meet(z, x))
    }

    pub fn upper_covers(&self, e: ElementId) -> &[ElementId] {
        &self.upper_covers[e.0]
    }

    pub fn lower_covers(&self, e: ElementId) -> &[ElementId] {
        &self.lower_covers[e.0]
    }

    /// Cover pairs of the Hasse diagram, sorted.
    pub fn covers(&self) -> Vec<(ElementId, ElementId)> {
        self.elements()
            .flat_map(|a| self.upper_covers[a.0].iter().map(move |&b| (a, b)))
            .collect()
    }

    /// Checks `a ∧ (b ∨ c) = (a ∧ b) ∨ (a ∧ c)` over all triples.
    pub fn is_distributive(&self) -> bool {
        self.find_distributivity_violation().is_none()
    }

    pub fn find_distributivity_violation(&self) -> Option<(ElementId, ElementId, ElementId)> {
        for a in self.elements() {
            for b in self.elements() {
                for c in self.elements() {
                    if self.meet(a, self.join(b, c)) != self.join(self.meet(a, b), self.meet(a, c))
                    {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    /// True iff both median forms agree on every triple.
    pub fn med_dual_check(&self) -> bool {
        self.elements().all(|x| {
            self.elements().all(|y| {
                self.elements()
                    .all(|z| self.med(x, y, z) == self.med_dual(x, y, z))
            })
        })
    }

    pub fn is_chain(&self) -> bool {
        self.elements()
            .all(|a| self.elements().all(|b| self.leq(a, b) || self.leq(b, a)))
    }

    /// Elements sorted so that `a < b` implies `a` comes first.
    ///
    /// Among valid orders this is the lexicographically smallest, so it is
    /// the identity whenever element indices already respect the order.
    pub fn linear_extension(&self) -> Vec<ElementId> {
        let mut pending: Vec<usize> = self
            .elements()
            .map(|e| self.lower_covers(e).len())
            .collect();
        let mut ready: BinaryHeap<Reverse<ElementId>> = self
            .elements()
            .filter(|e| pending[e.0] == 0)
            .map(Reverse)
            .collect();
        let mut order = Vec::with_capacity(self.size);
        while let Some(Reverse(e)) = ready.pop() {
            order.push(e);
            for &u in self.upper_covers(e) {
                pending[u.0] -= 1;
                if pending[u.0] == 0 {
                    ready.push(Reverse(u));
                }
            }
        }
        order
    }

    /// Finds an order isomorphism `self → other`, returned as the image of
    /// each element of `self`.
    pub fn isomorphism(&self, other: &Lattice) -> Option<Vec<ElementId>> {
        if self.size != other.size {
            return None;
        }
        let degree = |l: &Lattice, e: ElementId| {
            (
                l.elements().filter(|&d| l.leq(d, e)).count(),
                l.elements().filter(|&d| l.leq(e, d)).count(),
            )
        };
        let mut image = vec![None; self.size];
        let mut used = vec![false; self.size];
        fn extend(
            src: &Lattice,
            dst: &Lattice,
            i: usize,
            image: &mut Vec<Option<ElementId>>,
            used: &mut Vec<bool>,
            degree: &dyn Fn(&Lattice, ElementId) -> (usize, usize),
        ) -> bool {
            if i == src.size {
                return true;
            }
            let a = ElementId(i);
            for b in dst.elements() {
                if used[b.0] || degree(src, a) != degree(dst, b) {
                    continue;
                }
                let consistent = (0..i).all(|k| {
                    let c = ElementId(k);
                    let d = image[k].expect("assigned");
                    src.leq(a, c) == dst.leq(b, d) && src.leq(c, a) == dst.leq(d, b)
                });
                if consistent {
                    image[i] = Some(b);
                    used[b.0] = true;
                    if extend(src, dst, i + 1, image, used, degree) {
                        return true;
                    }
                    image[i] = None;
                    used[b.0] = false;
                }
            }
            false
        }
        extend(self, other, 0, &mut image, &mut used, &degree)
            .then(|| image.into_iter().map(|e| e.expect("complete")).collect())
    }

    /// The k-element chain `0 < 1 < … < k-1`.
    pub fn chain(k: usize) -> Result<Self, LatticeError> {
        let covers: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
        Lattice::from_covers(format!("chain({k})"), k, &covers)
    }

    /// The Boolean lattice of subsets of a k-element set; element index is the
    /// subset's bitmask.
    pub fn boolean(k: usize) -> Result<Self, LatticeError> {
        let size = 1usize << k;
        let covers: Vec<_> = (0..size)
            .flat_map(|m| {
                (0..k)
                    .filter(move |b| m & (1 << b) == 0)
                    .map(move |b| (m, m | (1 << b)))
            })
            .collect();
        Lattice::from_covers(format!("boolean({k})"), size, &covers)
    }

    /// The diamond: bottom, three pairwise incomparable atoms, top.
    pub fn m3() -> Self {
        Lattice::from_covers("M3", 5, &[(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])
            .and_then(|l| l.with_labels([(0, "bot"), (1, "a"), (2, "b"), (3, "c"), (4, "top")]))
            .expect("M3 is a lattice")
    }

    /// The pentagon: `0 < a < c < 1` and `0 < b < 1` with `b` incomparable to `a`, `c`.
    pub fn n5() -> Self {
        Lattice::from_covers("N5", 5, &[(0, 1), (1, 3), (0, 2), (3, 4), (2, 4)])
            .and_then(|l| l.with_labels([(0, "bot"), (1, "a"), (2, "b"), (3, "c"), (4, "top")]))
            .expect("N5 is a lattice")
    }

    /// Looks up a named test lattice: `chain(k)`, `boolean(k)`, `M3` or `N5`.
    pub fn catalogue(name: &str) -> Result<Self, LatticeError> {
        let unknown = || LatticeError::UnknownName(name.to_string());
        let trimmed = name.trim();
        let arg = |prefix: &str| -> Option<usize> {
            trimmed
                .strip_prefix(prefix)?
                .strip_prefix('(')?
                .strip_suffix(')')?
                .trim()
                .parse()
                .ok()
        };
        match trimmed {
            "M3" | "m3" => Ok(Lattice::m3()),
            "N5" | "n5" => Ok(Lattice::n5()),
            _ => {
                if let Some(k) = arg("chain") {
                    if k == 0 {
                        return Err(unknown());
                    }
                    Lattice::chain(k)
                } else if let Some(k) = arg("boolean") {
                    if k > 8 {
                        return Err(unknown());
                    }
                    Lattice::boolean(k)
                } else {
                    Err(unknown())
                }
            }
        }
    }

    /// Structural equality of the order (and hence of meet and join), ignoring
    /// names and labels.
    pub fn same_structure(&self, other: &Lattice) -> bool {
        self.size == other.size && self.leq == other.leq
    }
}

/// Picks the element of `candidates` with the largest `rank` and checks it
/// dominates every other candidate under `below(x, top)`.
fn greatest(
    candidates: &[usize],
    rank: &[usize],
    below: impl Fn(usize, usize) -> bool,
) -> Option<usize> {
    let best = *candidates.iter().max_by_key(|&&c| rank[c])?;
    candidates.iter().all(|&c| below(c, best)).then_some(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> ElementId {
        ElementId(i)
    }

    fn catalogue() -> Vec<Lattice> {
        let mut all: Vec<Lattice> = (1..=6).map(|k| Lattice::chain(k).unwrap()).collect();
        all.extend((0..=3).map(|k| Lattice::boolean(k).unwrap()));
        all.push(Lattice::m3());
        all.push(Lattice::n5());
        all
    }

    #[test]
    fn three_chain() {
        let c3 = Lattice::from_covers("c3", 3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(c3.bottom(), e(0));
        assert_eq!(c3.top(), e(2));
        assert!(c3.leq(e(0), e(2)));
        assert!(!c3.leq(e(2), e(0)));
        assert_eq!(c3.meet(e(1), e(2)), e(1));
        assert_eq!(c3.join(e(1), e(2)), e(2));
        assert_eq!(c3.med(e(0), e(2), e(1)), e(1));
        assert!(c3.is_distributive());
    }

    #[test]
    fn pentagon_has_unique_bounds_for_every_pair() {
        let n5 = Lattice::n5();
        // exhaustive oracle: the set of lower bounds has exactly one maximal element
        for a in n5.elements() {
            for b in n5.elements() {
                let lower: Vec<_> = n5
                    .elements()
                    .filter(|&c| n5.leq(c, a) && n5.leq(c, b))
                    .collect();
                let maximal: Vec<_> = lower
                    .iter()
                    .filter(|&&c| !lower.iter().any(|&d| n5.lt(c, d)))
                    .collect();
                assert_eq!(maximal, vec![&n5.meet(a, b)]);
                let upper: Vec<_> = n5
                    .elements()
                    .filter(|&c| n5.leq(a, c) && n5.leq(b, c))
                    .collect();
                let minimal: Vec<_> = upper
                    .iter()
                    .filter(|&&c| !upper.iter().any(|&d| n5.lt(d, c)))
                    .collect();
                assert_eq!(minimal, vec![&n5.join(a, b)]);
            }
        }
        assert!(!n5.leq(e(1), e(2)) && !n5.leq(e(2), e(1)));
        assert!(!n5.is_distributive());
    }

    #[test]
    fn rejects_two_maximal_elements() {
        let err = Lattice::from_covers("v", 3, &[(0, 1), (0, 2)]).unwrap_err();
        assert!(matches!(
            err,
            LatticeError::NotBounded(_) | LatticeError::NotALattice { .. }
        ));
    }

    #[test]
    fn rejects_bounded_non_lattice() {
        // 0 < a,b < c,d < 1 with a,b both below c and d: join(a,b) not unique
        let covers = [
            (0, 1),
            (0, 2),
            (1, 3),
            (1, 4),
            (2, 3),
            (2, 4),
            (3, 5),
            (4, 5),
        ];
        let err = Lattice::from_covers("x", 6, &covers).unwrap_err();
        assert!(matches!(err, LatticeError::NotALattice { .. }));
    }

    #[test]
    fn rejects_cycles_and_bad_indices() {
        assert_eq!(
            Lattice::from_covers("c", 2, &[(0, 1), (1, 0)]).unwrap_err(),
            LatticeError::CyclicCovers
        );
        assert_eq!(
            Lattice::from_covers("c", 2, &[(1, 1)]).unwrap_err(),
            LatticeError::CyclicCovers
        );
        assert!(matches!(
            Lattice::from_covers("c", 2, &[(0, 2)]).unwrap_err(),
            LatticeError::IndexOutOfRange { .. }
        ));
        assert_eq!(
            Lattice::from_covers("c", 0, &[]).unwrap_err(),
            LatticeError::Empty
        );
    }

    #[test]
    fn redundant_covers_are_reduced() {
        let l = Lattice::from_covers("c", 3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(l.covers(), vec![(e(0), e(1)), (e(1), e(2))]);
    }

    #[test]
    fn named_lattices() {
        let b2 = Lattice::catalogue("boolean(2)").unwrap();
        assert_eq!(b2.size(), 4);
        assert_eq!(b2.meet(e(1), e(2)), b2.bottom());
        assert_eq!(b2.med(e(1), e(2), b2.top()), b2.top());
        let m3 = Lattice::catalogue("M3").unwrap();
        assert_eq!(m3.size(), 5);
        assert_eq!(m3.join(e(1), e(2)), m3.top());
        assert!(!m3.is_distributive());
        assert!(!m3.med_dual_check());
        assert_eq!(Lattice::catalogue("chain(2)").unwrap().size(), 2);
        assert!(Lattice::catalogue("chain(4)").unwrap().med_dual_check());
        assert!(Lattice::catalogue("boolean(3)").unwrap().med_dual_check());
        assert!(matches!(
            Lattice::catalogue("Z7"),
            Err(LatticeError::UnknownName(_))
        ));
        assert!(Lattice::catalogue("chain(0)").is_err());
    }

    #[test]
    fn distributivity_of_catalogue() {
        for k in 1..=6 {
            assert!(Lattice::chain(k).unwrap().is_distributive());
        }
        for k in 0..=3 {
            assert!(Lattice::boolean(k).unwrap().is_distributive());
        }
        assert!(!Lattice::m3().is_distributive());
        assert!(!Lattice::n5().is_distributive());
    }

    #[test]
    fn bounds_are_greatest_and_least() {
        for l in catalogue() {
            for a in l.elements() {
                assert!(l.leq(l.bottom(), a) && l.leq(a, l.top()));
                for b in l.elements() {
                    let m = l.meet(a, b);
                    let j = l.join(a, b);
                    assert!(l.leq(m, a) && l.leq(m, b) && l.leq(a, j) && l.leq(b, j));
                    for c in l.elements() {
                        if l.leq(c, a) && l.leq(c, b) {
                            assert!(l.leq(c, m));
                        }
                        if l.leq(a, c) && l.leq(b, c) {
                            assert!(l.leq(j, c));
                        }
                    }
                    assert_eq!(l.meet(a, l.join(a, b)), a);
                    assert_eq!(l.join(a, l.meet(a, b)), a);
                    assert_eq!(m, l.meet(b, a));
                }
            }
        }
    }

    #[test]
    fn median_is_symmetric_and_absorbs() {
        for l in catalogue() {
            for x in l.elements() {
                for y in l.elements() {
                    assert_eq!(l.med(x, y, x), x);
                    for z in l.elements() {
                        let m = l.med(x, y, z);
                        for p in [
                            l.med(x, z, y),
                            l.med(y, x, z),
                            l.med(y, z, x),
                            l.med(z, x, y),
                            l.med(z, y, x),
                        ] {
                            assert_eq!(p, m);
                        }
                        if l.is_distributive() && l.leq(x, z) {
                            assert_eq!(m, l.meet(l.join(x, y), z));
                            assert_eq!(m, l.join(x, l.meet(y, z)));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn isomorphism_detection() {
        let b2 = Lattice::boolean(2).unwrap();
        let square = Lattice::from_covers("sq", 4, &[(0, 2), (0, 1), (2, 3), (1, 3)]).unwrap();
        assert!(b2.isomorphism(&square).is_some());
        assert!(b2.isomorphism(&Lattice::chain(4).unwrap()).is_none());
        assert!(Lattice::m3().isomorphism(&Lattice::n5()).is_none());
    }

    #[test]
    fn labels_resolve() {
        let n5 = Lattice::n5();
        assert_eq!(n5.resolve("c"), Some(e(3)));
        assert_eq!(n5.resolve("4"), Some(e(4)));
        assert_eq!(n5.resolve("9"), None);
        assert_eq!(n5.label(e(2)), Some("b"));
        assert_eq!(n5.resolve("1"), Some(e(1)));
        assert_eq!(n5.resolve("top"), Some(e(4)));
        let mut c = Lattice::chain(2).unwrap();
        for bad in ["1", "", "two words"] {
            assert!(matches!(
                c.set_label(0, bad),
                Err(LatticeError::BadLabel(_))
            ));
        }
    }
}
