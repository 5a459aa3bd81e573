//! Direct products and horizontal sums, and the corresponding splittings of
//! the Sugeno integral.

use thiserror::Error;

use crate::compat::for_each_input;
use crate::lattice::{ElementId, Lattice, LatticeError};
use crate::sugeno::{sugeno_eval, Capacity, SugenoError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConstructionError {
    #[error("summand {index} has {size} element(s); horizontal sums need at least 2")]
    SummandTooSmall { index: usize, size: usize },
    #[error("horizontal sum `{0}` is not distributive")]
    NotDistributive(String),
    #[error("capacity has arity {got}, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Sugeno(#[from] SugenoError),
}

/// A direct product together with the tuple coordinates of each element.
///
/// Elements are numbered in mixed radix, first factor most significant.
#[derive(Clone, Debug)]
pub struct ProductLattice {
    lattice: Lattice,
    factors: Vec<Lattice>,
    coordinates: Vec<Vec<ElementId>>,
}

impl ProductLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn factors(&self) -> &[Lattice] {
        &self.factors
    }

    pub fn coordinates(&self, e: ElementId) -> &[ElementId] {
        &self.coordinates[e.index()]
    }

    pub fn element_of(&self, tuple: &[ElementId]) -> ElementId {
        let index = tuple
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (t, f)| acc * f.size() + t.index());
        ElementId::new(index)
    }

    /// k-th coordinate of `e`.
    pub fn project(&self, e: ElementId, k: usize) -> ElementId {
        self.coordinates[e.index()][k]
    }
}

pub fn direct_product(factors: &[Lattice]) -> Result<ProductLattice, ConstructionError> {
    let mut coordinates: Vec<Vec<ElementId>> = vec![Vec::new()];
    for f in factors {
        coordinates = coordinates
            .into_iter()
            .flat_map(|prefix| {
                f.elements().map(move |e| {
                    let mut t = prefix.clone();
                    t.push(e);
                    t
                })
            })
            .collect();
    }
    let index_of = |t: &[ElementId]| {
        t.iter()
            .zip(factors)
            .fold(0, |acc, (e, f)| acc * f.size() + e.index())
    };
    let mut covers = Vec::new();
    for (i, t) in coordinates.iter().enumerate() {
        for (k, f) in factors.iter().enumerate() {
            for &up in f.upper_covers(t[k]) {
                let mut u = t.clone();
                u[k] = up;
                covers.push((i, index_of(&u)));
            }
        }
    }
    let name = if factors.is_empty() {
        "trivial".to_string()
    } else {
        factors
            .iter()
            .map(|f| f.name())
            .collect::<Vec<_>>()
            .join("x")
    };
    let lattice = Lattice::from_covers(name, coordinates.len(), &covers)?;
    Ok(ProductLattice {
        lattice,
        factors: factors.to_vec(),
        coordinates,
    })
}

/// Summands glued along a shared bottom and top.
///
/// Element 0 is the shared bottom, then each summand's interior in argument
/// order, then the shared top.
#[derive(Clone, Debug)]
pub struct HorizontalSumLattice {
    lattice: Lattice,
    summands: Vec<Lattice>,
    /// `(summand, element within summand)` for interior elements.
    provenance: Vec<Option<(usize, ElementId)>>,
    distributive: bool,
}

impl HorizontalSumLattice {
    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn summands(&self) -> &[Lattice] {
        &self.summands
    }

    pub fn is_distributive(&self) -> bool {
        self.distributive
    }

    /// Origin of an interior element; `None` for the shared bounds.
    pub fn provenance(&self, e: ElementId) -> Option<(usize, ElementId)> {
        self.provenance[e.index()]
    }

    /// Whether `e` belongs to summand `k`; the bounds belong to every summand.
    pub fn belongs_to(&self, e: ElementId, k: usize) -> bool {
        self.provenance[e.index()].is_none_or(|(s, _)| s == k)
    }

    /// The element of summand `k` corresponding to `e`, or that summand's
    /// bottom when `e` lies elsewhere.
    pub fn restrict(&self, e: ElementId, k: usize) -> ElementId {
        let s = &self.summands[k];
        match self.provenance[e.index()] {
            None if e == self.lattice.top() => s.top(),
            None => s.bottom(),
            Some((owner, local)) if owner == k => local,
            Some(_) => s.bottom(),
        }
    }

    /// Image in the sum of an element of summand `k`.
    pub fn embed(&self, k: usize, local: ElementId) -> ElementId {
        let s = &self.summands[k];
        if local == s.bottom() {
            return self.lattice.bottom();
        }
        if local == s.top() {
            return self.lattice.top();
        }
        let pos = self
            .provenance
            .iter()
            .position(|p| *p == Some((k, local)))
            .expect("interior element of summand");
        ElementId::new(pos)
    }
}

pub fn horizontal_sum(summands: &[Lattice]) -> Result<HorizontalSumLattice, ConstructionError> {
    if let Some((index, s)) = summands.iter().enumerate().find(|(_, s)| s.size() < 2) {
        return Err(ConstructionError::SummandTooSmall {
            index,
            size: s.size(),
        });
    }
    let mut provenance = vec![None];
    let mut local_to_global: Vec<Vec<usize>> = Vec::with_capacity(summands.len());
    for (k, s) in summands.iter().enumerate() {
        let mut map = vec![0; s.size()];
        for e in s.elements().filter(|&e| e != s.bottom() && e != s.top()) {
            map[e.index()] = provenance.len();
            provenance.push(Some((k, e)));
        }
        local_to_global.push(map);
    }
    let top = provenance.len();
    provenance.push(None);
    let mut covers = Vec::new();
    for (k, s) in summands.iter().enumerate() {
        let global = |e: ElementId| match e {
            e if e == s.bottom() => 0,
            e if e == s.top() => top,
            e => local_to_global[k][e.index()],
        };
        for (a, b) in s.covers() {
            covers.push((global(a), global(b)));
        }
    }
    let name = if summands.is_empty() {
        "chain(2)".to_string()
    } else {
        summands
            .iter()
            .map(|s| s.name())
            .collect::<Vec<_>>()
            .join("+")
    };
    let lattice = Lattice::from_covers(name, provenance.len(), &covers)?;
    let distributive = lattice.is_distributive();
    Ok(HorizontalSumLattice {
        lattice,
        summands: summands.to_vec(),
        provenance,
        distributive,
    })
}

/// For every input `u`, coordinate `k` of `Su_m(u)` equals `Su_{m_k}(u^k)`,
/// with `m_k` and `u^k` the coordinatewise projections.
pub fn product_decomposition_check(
    p: &ProductLattice,
    m: &Capacity,
) -> Result<bool, ConstructionError> {
    let l = &p.lattice;
    let n = m.arity();
    let projected: Vec<Capacity> = p
        .factors
        .iter()
        .enumerate()
        .map(|(k, f)| Capacity::new(f, n, m.values().iter().map(|&v| p.project(v, k)).collect()))
        .collect::<Result<_, _>>()?;
    let mut ok = true;
    for_each_input(l.size(), n, |_, u| {
        if !ok {
            return;
        }
        let whole = sugeno_eval(l, m, u).expect("arity checked");
        for (k, f) in p.factors.iter().enumerate() {
            let uk: Vec<ElementId> = u.iter().map(|&x| p.project(x, k)).collect();
            let part = sugeno_eval(f, &projected[k], &uk).expect("arity checked");
            ok &= p.project(whole, k) == part;
        }
    });
    Ok(ok)
}

/// Runs the horizontal-sum splitting regardless of distributivity:
/// `Su_m(u) = ⋁_k Su_{m_k}(u^k)`, where `m_k(I) = m(I)` if `m(I)` lies in
/// summand `k` and bottom otherwise, and `u^k` is split the same way.
pub fn horizontal_sum_decomposition_report(
    h: &HorizontalSumLattice,
    m: &Capacity,
) -> Result<bool, ConstructionError> {
    let l = &h.lattice;
    let n = m.arity();
    let parts: Vec<Capacity> = h
        .summands
        .iter()
        .enumerate()
        .map(|(k, s)| Capacity::new(s, n, m.values().iter().map(|&v| h.restrict(v, k)).collect()))
        .collect::<Result<_, _>>()?;
    let mut ok = true;
    for_each_input(l.size(), n, |_, u| {
        if !ok {
            return;
        }
        let whole = sugeno_eval(l, m, u).expect("arity checked");
        let split = l.join_all(h.summands.iter().enumerate().map(|(k, s)| {
            let uk: Vec<ElementId> = u.iter().map(|&x| h.restrict(x, k)).collect();
            h.embed(k, sugeno_eval(s, &parts[k], &uk).expect("arity checked"))
        }));
        ok &= whole == split;
    });
    Ok(ok)
}

/// As [`horizontal_sum_decomposition_report`], but refuses non-distributive
/// sums, where the splitting is not claimed to hold.
pub fn horizontal_sum_decomposition_check(
    h: &HorizontalSumLattice,
    m: &Capacity,
) -> Result<bool, ConstructionError> {
    if !h.distributive {
        return Err(ConstructionError::NotDistributive(
            h.lattice.name().to_string(),
        ));
    }
    horizontal_sum_decomposition_report(h, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(k: usize) -> Lattice {
        Lattice::chain(k).unwrap()
    }

    #[test]
    fn products() {
        let sq = direct_product(&[chain(2), chain(2)]).unwrap();
        assert!(sq
            .lattice()
            .isomorphism(&Lattice::boolean(2).unwrap())
            .is_some());
        let one = direct_product(&[chain(1), Lattice::n5()]).unwrap();
        assert!(one.lattice().isomorphism(&Lattice::n5()).is_some());
        let p = direct_product(&[chain(2), chain(3)]).unwrap();
        assert_eq!(p.lattice().size(), 6);
        assert!(p.lattice().is_distributive());
        assert_eq!(direct_product(&[]).unwrap().lattice().size(), 1);
    }

    #[test]
    fn product_operations_are_componentwise() {
        for factors in [
            vec![chain(2), chain(3)],
            vec![Lattice::n5(), chain(2)],
            vec![chain(2), Lattice::m3()],
        ] {
            let p = direct_product(&factors).unwrap();
            let l = p.lattice();
            for a in l.elements() {
                assert_eq!(p.element_of(p.coordinates(a)), a);
                for b in l.elements() {
                    for (k, f) in factors.iter().enumerate() {
                        let (ak, bk) = (p.project(a, k), p.project(b, k));
                        assert_eq!(p.project(l.meet(a, b), k), f.meet(ak, bk));
                        assert_eq!(p.project(l.join(a, b), k), f.join(ak, bk));
                    }
                    let leq = factors
                        .iter()
                        .enumerate()
                        .all(|(k, f)| f.leq(p.project(a, k), p.project(b, k)));
                    assert_eq!(l.leq(a, b), leq);
                }
            }
            let expected = factors.iter().all(|f| f.is_distributive());
            assert_eq!(l.is_distributive(), expected);
        }
    }

    #[test]
    fn horizontal_sums() {
        let h = horizontal_sum(&[chain(3), chain(3)]).unwrap();
        assert_eq!(h.lattice().size(), 4);
        assert!(h
            .lattice()
            .isomorphism(&Lattice::boolean(2).unwrap())
            .is_some());
        assert!(h.is_distributive());
        let m3 = horizontal_sum(&[chain(3), chain(3), chain(3)]).unwrap();
        assert!(m3.lattice().isomorphism(&Lattice::m3()).is_some());
        assert!(!m3.is_distributive());
        let same = horizontal_sum(&[chain(2), Lattice::n5()]).unwrap();
        assert!(same.lattice().isomorphism(&Lattice::n5()).is_some());
        assert!(matches!(
            horizontal_sum(&[chain(3), chain(1)]),
            Err(ConstructionError::SummandTooSmall { index: 1, size: 1 })
        ));
        let c4c4 = horizontal_sum(&[chain(4), chain(4)]).unwrap();
        assert!(!c4c4.is_distributive());
    }

    #[test]
    fn cross_summand_pairs_meet_at_bounds() {
        let h = horizontal_sum(&[chain(4), chain(3), Lattice::boolean(2).unwrap()]).unwrap();
        let l = h.lattice();
        for a in l.elements() {
            for b in l.elements() {
                if let (Some((i, _)), Some((j, _))) = (h.provenance(a), h.provenance(b)) {
                    if i != j {
                        assert_eq!(l.join(a, b), l.top());
                        assert_eq!(l.meet(a, b), l.bottom());
                        assert!(!l.leq(a, b));
                    }
                }
            }
        }
        for k in 0..3 {
            for e in h.summands()[k].elements() {
                assert_eq!(h.restrict(h.embed(k, e), k), e);
            }
        }
    }

    #[test]
    fn product_splitting() {
        for factors in [vec![chain(2), chain(2)], vec![chain(2), chain(3)]] {
            let p = direct_product(&factors).unwrap();
            for m in Capacity::all(p.lattice(), 2) {
                assert!(product_decomposition_check(&p, &m).unwrap());
            }
        }
    }

    #[test]
    fn horizontal_splitting() {
        let h = horizontal_sum(&[chain(3), chain(3)]).unwrap();
        for m in Capacity::all(h.lattice(), 2) {
            assert!(horizontal_sum_decomposition_check(&h, &m).unwrap());
        }
        let bad = horizontal_sum(&[chain(4), chain(4)]).unwrap();
        let m = Capacity::all(bad.lattice(), 2).remove(0);
        assert!(matches!(
            horizontal_sum_decomposition_check(&bad, &m),
            Err(ConstructionError::NotDistributive(_))
        ));
        assert!(horizontal_sum_decomposition_report(&bad, &m).is_ok());
    }
}
