//! Lattice-valued capacities and the discrete Sugeno integral.
//!
//! The integral is available in three forms:
//!
//! * [`sugeno_eval`]: `⋁_I m(I) ∧ ⋀_{i∈I} u_i` over all subsets `I`;
//! * [`sugeno_eval_levels`]: `⋁_t t ∧ m({i : u_i ≥ t})` with `t` ranging
//!   over every element of the lattice;
//! * [`sugeno_eval_pointwise`]: `⋁_i u_i ∧ m({j : u_j ≥ u_i})`.
//!
//! All three agree on chains. On other distributive lattices they can
//! differ, and [`formulas_comparator`] lists where.

use serde::Serialize;
use thiserror::Error;

use crate::compat::{boolean_vertex, is_aggregation, table_len, CompatError, FunctionTable};
use crate::lattice::{ElementId, Lattice};
use crate::polynomial::NormalForm;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SugenoError {
    #[error("capacity of arity {arity} needs {expected} values, got {got}")]
    WrongLength {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("element {0} does not belong to the lattice")]
    ForeignElement(usize),
    #[error("boundary violated: m({subset}) must be {expected}")]
    Boundary {
        subset: &'static str,
        expected: &'static str,
    },
    #[error("capacity not monotone: m({}) ≰ m({})", fmt_mask(*.subset), fmt_mask(*.superset))]
    NotMonotone { subset: usize, superset: usize },
    #[error("input has {got} coordinates, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("function is not an aggregation function")]
    NotAggregation,
    #[error("lattice `{0}` is not a chain")]
    NotAChain(String),
    #[error(transparent)]
    Table(#[from] CompatError),
}

/// Renders a subset mask as `{1,3}` with 1-based indices.
pub fn fmt_mask(mask: usize) -> String {
    let items: Vec<String> = (0..usize::BITS as usize)
        .filter(|i| mask >> i & 1 == 1)
        .map(|i| (i + 1).to_string())
        .collect();
    format!("{{{}}}", items.join(","))
}

/// A monotone lattice-valued set function on subsets of `{1,…,n}` with
/// `m(∅) = 0` and `m({1,…,n}) = 1`. Subsets are bitmasks, bit `i` for
/// criterion `i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Capacity {
    arity: usize,
    values: Vec<ElementId>,
}

impl Capacity {
    pub fn new(
        lattice: &Lattice,
        arity: usize,
        values: Vec<ElementId>,
    ) -> Result<Self, SugenoError> {
        let expected = u32::try_from(arity)
            .ok()
            .and_then(|a| 1usize.checked_shl(a))
            .unwrap_or(usize::MAX);
        if values.len() != expected {
            return Err(SugenoError::WrongLength {
                arity,
                expected,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !lattice.contains(**v)) {
            return Err(SugenoError::ForeignElement(v.index()));
        }
        if values[0] != lattice.bottom() {
            return Err(SugenoError::Boundary {
                subset: "∅",
                expected: "bottom",
            });
        }
        if values[expected - 1] != lattice.top() {
            return Err(SugenoError::Boundary {
                subset: "full set",
                expected: "top",
            });
        }
        for mask in 0..expected {
            for i in (0..arity).filter(|i| mask >> i & 1 == 0) {
                if !lattice.leq(values[mask], values[mask | 1 << i]) {
                    return Err(SugenoError::NotMonotone {
                        subset: mask,
                        superset: mask | 1 << i,
                    });
                }
            }
        }
        Ok(Capacity { arity, values })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn values(&self) -> &[ElementId] {
        &self.values
    }

    pub fn value(&self, mask: usize) -> ElementId {
        self.values[mask]
    }

    pub fn full_mask(&self) -> usize {
        self.values.len() - 1
    }

    pub fn to_normal_form(&self) -> NormalForm {
        NormalForm::from_coefficients(self.arity, self.values.clone()).expect("2^n values")
    }

    /// Every capacity of arity `n` on `lattice`, in lexicographic order of
    /// their value vectors (element index order).
    pub fn all(lattice: &Lattice, arity: usize) -> Vec<Capacity> {
        let len = 1usize << arity;
        let mut out = Vec::new();
        let mut values = vec![lattice.bottom(); len];
        fn fill(
            lattice: &Lattice,
            arity: usize,
            mask: usize,
            values: &mut Vec<ElementId>,
            out: &mut Vec<Capacity>,
        ) {
            let len = values.len();
            if mask == len {
                out.push(Capacity {
                    arity,
                    values: values.clone(),
                });
                return;
            }
            for v in lattice.elements() {
                let forced =
                    (mask == 0 && v != lattice.bottom()) || (mask == len - 1 && v != lattice.top());
                let monotone = (0..arity)
                    .filter(|i| mask >> i & 1 == 1)
                    .all(|i| lattice.leq(values[mask & !(1 << i)], v));
                if !forced && monotone {
                    values[mask] = v;
                    fill(lattice, arity, mask + 1, values, out);
                }
            }
        }
        fill(lattice, arity, 0, &mut values, &mut out);
        out
    }
}

fn check_input(lattice: &Lattice, m: &Capacity, u: &[ElementId]) -> Result<(), SugenoError> {
    if u.len() != m.arity {
        return Err(SugenoError::ArityMismatch {
            expected: m.arity,
            got: u.len(),
        });
    }
    if let Some(e) = u.iter().find(|e| !lattice.contains(**e)) {
        return Err(SugenoError::ForeignElement(e.index()));
    }
    Ok(())
}

fn subsets_form(lattice: &Lattice, m: &Capacity, u: &[ElementId]) -> ElementId {
    lattice.join_all(m.values.iter().enumerate().map(|(mask, &w)| {
        let inputs = (0..m.arity).filter(|i| mask >> i & 1 == 1).map(|i| u[i]);
        lattice.meet(w, lattice.meet_all(inputs))
    }))
}

fn upper_level_set(lattice: &Lattice, u: &[ElementId], t: ElementId) -> usize {
    u.iter()
        .enumerate()
        .filter(|(_, &ui)| lattice.leq(t, ui))
        .fold(0, |mask, (i, _)| mask | 1 << i)
}

/// `⋁_I m(I) ∧ ⋀_{i∈I} u_i`, with the empty meet equal to top.
pub fn sugeno_eval(
    lattice: &Lattice,
    m: &Capacity,
    u: &[ElementId],
) -> Result<ElementId, SugenoError> {
    check_input(lattice, m, u)?;
    Ok(subsets_form(lattice, m, u))
}

/// `⋁_t t ∧ m({i : u_i ≥ t})`, `t` over all lattice elements.
pub fn sugeno_eval_levels(
    lattice: &Lattice,
    m: &Capacity,
    u: &[ElementId],
) -> Result<ElementId, SugenoError> {
    check_input(lattice, m, u)?;
    Ok(lattice.join_all(
        lattice
            .elements()
            .map(|t| lattice.meet(t, m.values[upper_level_set(lattice, u, t)])),
    ))
}

/// `⋁_i u_i ∧ m({j : u_j ≥ u_i})`.
pub fn sugeno_eval_pointwise(
    lattice: &Lattice,
    m: &Capacity,
    u: &[ElementId],
) -> Result<ElementId, SugenoError> {
    check_input(lattice, m, u)?;
    Ok(lattice.join_all(
        u.iter()
            .map(|&ui| lattice.meet(ui, m.values[upper_level_set(lattice, u, ui)])),
    ))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Formula {
    #[default]
    Subsets,
    Levels,
    Pointwise,
}

impl std::str::FromStr for Formula {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "subsets" => Ok(Formula::Subsets),
            "levels" => Ok(Formula::Levels),
            "pointwise" => Ok(Formula::Pointwise),
            other => Err(format!(
                "unknown formula `{other}` (expected subsets, levels or pointwise)"
            )),
        }
    }
}

pub fn sugeno_eval_with(
    formula: Formula,
    lattice: &Lattice,
    m: &Capacity,
    u: &[ElementId],
) -> Result<ElementId, SugenoError> {
    match formula {
        Formula::Subsets => sugeno_eval(lattice, m, u),
        Formula::Levels => sugeno_eval_levels(lattice, m, u),
        Formula::Pointwise => sugeno_eval_pointwise(lattice, m, u),
    }
}

/// The integral tabulated over all of `L^n`.
pub fn sugeno_table(lattice: &Lattice, m: &Capacity) -> FunctionTable {
    FunctionTable::from_fn(lattice, m.arity, |u| subsets_form(lattice, m, u))
}

/// `m(I) = A(1_I)`, where `1_I` is top on `I` and bottom elsewhere.
pub fn capacity_from_function(
    lattice: &Lattice,
    a: &FunctionTable,
) -> Result<Capacity, SugenoError> {
    if !a.fits(lattice) || !is_aggregation(lattice, a) {
        return Err(SugenoError::NotAggregation);
    }
    let n = a.arity();
    let values = (0..1usize << n)
        .map(|mask| a.value_at(a.encode(&boolean_vertex(lattice, n, mask))))
        .collect();
    Capacity::new(lattice, n, values)
}

/// One `(m, u)` pair on which the formulas do not all agree.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Disagreement {
    pub capacity: Vec<ElementId>,
    pub input: Vec<ElementId>,
    pub levels: ElementId,
    pub pointwise: ElementId,
    pub subsets: ElementId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComparatorReport {
    pub lattice: String,
    pub arity: usize,
    pub capacities: usize,
    pub pairs: usize,
    pub disagreement_count: usize,
    /// First [`MAX_RECORDED`] disagreements, in enumeration order.
    pub disagreements: Vec<Disagreement>,
}

pub const MAX_RECORDED: usize = 1000;

/// Evaluates the three formulas on every capacity and input.
pub fn formulas_comparator(
    lattice: &Lattice,
    arity: usize,
) -> Result<ComparatorReport, SugenoError> {
    table_len(lattice.size(), arity)?;
    let capacities = Capacity::all(lattice, arity);
    let mut report = ComparatorReport {
        lattice: lattice.name().to_string(),
        arity,
        capacities: capacities.len(),
        pairs: 0,
        disagreement_count: 0,
        disagreements: Vec::new(),
    };
    for m in &capacities {
        crate::compat::for_each_input(lattice.size(), arity, |_, u| {
            report.pairs += 1;
            let subsets = subsets_form(lattice, m, u);
            let levels = sugeno_eval_levels(lattice, m, u).expect("checked");
            let pointwise = sugeno_eval_pointwise(lattice, m, u).expect("checked");
            if levels != subsets || pointwise != subsets {
                report.disagreement_count += 1;
                if report.disagreements.len() < MAX_RECORDED {
                    report.disagreements.push(Disagreement {
                        capacity: m.values.clone(),
                        input: u.to_vec(),
                        levels,
                        pointwise,
                        subsets,
                    });
                }
            }
        });
    }
    Ok(report)
}

fn require_chain(lattice: &Lattice) -> Result<(), SugenoError> {
    if lattice.is_chain() {
        Ok(())
    } else {
        Err(SugenoError::NotAChain(lattice.name().to_string()))
    }
}

/// `Su_m(c,…,c) = c` for every `c`.
pub fn check_idempotent(lattice: &Lattice, m: &Capacity) -> bool {
    lattice
        .elements()
        .all(|c| subsets_form(lattice, m, &vec![c; m.arity]) == c)
}

/// `Su_m(1_E) = m(E)` for every subset `E`.
pub fn check_boolean_values(lattice: &Lattice, m: &Capacity) -> bool {
    (0..m.values.len()).all(|mask| {
        subsets_form(lattice, m, &boolean_vertex(lattice, m.arity, mask)) == m.values[mask]
    })
}

/// `Su_m(c ∧ u) = c ∧ Su_m(u)` for every constant `c` and input `u`.
pub fn check_min_homogeneous(lattice: &Lattice, m: &Capacity) -> bool {
    let table = sugeno_table(lattice, m);
    let mut ok = true;
    table.for_each_input(|idx, u| {
        for c in lattice.elements() {
            let cu: Vec<ElementId> = u.iter().map(|&x| lattice.meet(c, x)).collect();
            ok &= table.value_at(table.encode(&cu)) == lattice.meet(c, table.value_at(idx));
        }
    });
    ok
}

/// No pair of indices is ordered one way by `u` and the other way by `v`.
pub fn comonotone(lattice: &Lattice, u: &[ElementId], v: &[ElementId]) -> bool {
    (0..u.len()).all(|i| (0..u.len()).all(|j| !(lattice.lt(u[i], u[j]) && lattice.lt(v[j], v[i]))))
}

/// `Su_m(u ∨ v) = Su_m(u) ∨ Su_m(v)` for every comonotone pair. Chains only.
pub fn check_comonotone_maxitive(lattice: &Lattice, m: &Capacity) -> Result<bool, SugenoError> {
    require_chain(lattice)?;
    let table = sugeno_table(lattice, m);
    let inputs: Vec<Vec<ElementId>> = {
        let mut v = Vec::with_capacity(table.len());
        table.for_each_input(|_, x| v.push(x.to_vec()));
        v
    };
    for (i, u) in inputs.iter().enumerate() {
        for (j, v) in inputs.iter().enumerate() {
            if !comonotone(lattice, u, v) {
                continue;
            }
            let joined: Vec<ElementId> =
                u.iter().zip(v).map(|(&a, &b)| lattice.join(a, b)).collect();
            if table.value_at(table.encode(&joined))
                != lattice.join(table.value_at(i), table.value_at(j))
            {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// `Su_m(u) = Su_m(c ∧ u) ∨ Su_m(u_c)`, where `u_c` zeroes the coordinates
/// with `u_i ≤ c`. Chains only.
pub fn check_horizontally_maxitive(lattice: &Lattice, m: &Capacity) -> Result<bool, SugenoError> {
    require_chain(lattice)?;
    let table = sugeno_table(lattice, m);
    let mut ok = true;
    table.for_each_input(|idx, u| {
        for c in lattice.elements() {
            let cu: Vec<ElementId> = u.iter().map(|&x| lattice.meet(c, x)).collect();
            let uc: Vec<ElementId> = u
                .iter()
                .map(|&x| {
                    if lattice.leq(x, c) {
                        lattice.bottom()
                    } else {
                        x
                    }
                })
                .collect();
            let rhs = lattice.join(
                table.value_at(table.encode(&cu)),
                table.value_at(table.encode(&uc)),
            );
            ok &= table.value_at(idx) == rhs;
        }
    });
    Ok(ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compat::{is_compatible, CompatMode};
    use crate::polynomial::eval_normal_form;

    fn e(i: usize) -> ElementId {
        ElementId::new(i)
    }

    fn cap(l: &Lattice, arity: usize, v: &[usize]) -> Capacity {
        Capacity::new(l, arity, v.iter().map(|&x| e(x)).collect()).unwrap()
    }

    /// Independent count of capacities: all 2^n-length vectors filtered by
    /// the boundary and pairwise subset-monotonicity conditions.
    fn brute_capacity_count(l: &Lattice, n: usize) -> usize {
        let len = 1usize << n;
        let mut count = 0;
        crate::compat::for_each_input(l.size(), len, |_, v| {
            let ok = v[0] == l.bottom()
                && v[len - 1] == l.top()
                && (0..len).all(|a| (0..len).all(|b| a & b != a || l.leq(v[a], v[b])));
            count += usize::from(ok);
        });
        count
    }

    #[test]
    fn running_example() {
        let l = Lattice::chain(3).unwrap();
        let m = cap(&l, 2, &[0, 1, 1, 2]);
        let u = [e(2), e(0)];
        assert_eq!(sugeno_eval(&l, &m, &u).unwrap(), e(1));
        assert_eq!(sugeno_eval_pointwise(&l, &m, &u).unwrap(), e(1));
        assert_eq!(sugeno_eval_levels(&l, &m, &u).unwrap(), e(1));
        for c in l.elements() {
            assert_eq!(sugeno_eval(&l, &m, &[c, c]).unwrap(), c);
            assert_eq!(sugeno_eval_pointwise(&l, &m, &[c, c]).unwrap(), c);
        }
        assert!(matches!(
            sugeno_eval(&l, &m, &[e(0)]),
            Err(SugenoError::ArityMismatch { .. })
        ));
        assert!(matches!(
            sugeno_eval(&l, &m, &[e(0), e(9)]),
            Err(SugenoError::ForeignElement(9))
        ));
    }

    #[test]
    fn capacity_validation() {
        let l = Lattice::chain(3).unwrap();
        assert!(matches!(
            Capacity::new(&l, 2, vec![e(1), e(1), e(1), e(2)]),
            Err(SugenoError::Boundary { .. })
        ));
        assert!(matches!(
            Capacity::new(&l, 2, vec![e(0), e(1), e(1), e(1)]),
            Err(SugenoError::Boundary { .. })
        ));
        assert!(matches!(
            Capacity::new(&l, 2, vec![e(0), e(1), e(1)]),
            Err(SugenoError::WrongLength { .. })
        ));
        let b2 = Lattice::boolean(2).unwrap();
        assert!(matches!(
            Capacity::new(&b2, 2, vec![e(0), e(3), e(1), e(2)]),
            Err(SugenoError::Boundary { .. })
        ));
        let err =
            Capacity::new(&l, 3, vec![e(0), e(2), e(0), e(1), e(0), e(0), e(0), e(2)]).unwrap_err();
        assert!(matches!(err, SugenoError::NotMonotone { .. }));
        assert!(err.to_string().contains('{'));
    }

    #[test]
    fn capacity_enumeration_matches_brute_force() {
        for l in [
            Lattice::chain(2).unwrap(),
            Lattice::chain(3).unwrap(),
            Lattice::boolean(2).unwrap(),
            Lattice::n5(),
        ] {
            for n in 0..=3 {
                assert_eq!(
                    Capacity::all(&l, n).len(),
                    brute_capacity_count(&l, n),
                    "{} n={n}",
                    l.name()
                );
            }
        }
        assert_eq!(Capacity::all(&Lattice::chain(3).unwrap(), 2).len(), 9);
        assert_eq!(Capacity::all(&Lattice::chain(2).unwrap(), 2).len(), 4);
    }

    #[test]
    fn extraction_examples() {
        let l = Lattice::chain(3).unwrap();
        let min = FunctionTable::from_fn(&l, 2, |x| l.meet(x[0], x[1]));
        assert_eq!(
            capacity_from_function(&l, &min).unwrap().values(),
            &[e(0), e(0), e(0), e(2)]
        );
        let max = FunctionTable::from_fn(&l, 2, |x| l.join(x[0], x[1]));
        assert_eq!(
            capacity_from_function(&l, &max).unwrap().values(),
            &[e(0), e(2), e(2), e(2)]
        );
        let proj = FunctionTable::from_fn(&l, 2, |x| x[0]);
        // bit 0 is criterion 1
        assert_eq!(
            capacity_from_function(&l, &proj).unwrap().values(),
            &[e(0), e(2), e(0), e(2)]
        );
        let constant = FunctionTable::from_fn(&l, 2, |_| e(1));
        assert_eq!(
            capacity_from_function(&l, &constant),
            Err(SugenoError::NotAggregation)
        );
    }

    #[test]
    fn round_trip_and_normal_form_agreement() {
        for l in [Lattice::chain(3).unwrap(), Lattice::boolean(2).unwrap()] {
            for n in 1..=2 {
                for m in Capacity::all(&l, n) {
                    let table = sugeno_table(&l, &m);
                    assert_eq!(capacity_from_function(&l, &table).unwrap(), m);
                    assert!(is_compatible(&l, &table, CompatMode::PrincipalOnly));
                    let nf = m.to_normal_form();
                    table.for_each_input(|idx, u| {
                        assert_eq!(eval_normal_form(&l, &nf, u).unwrap(), table.value_at(idx));
                    });
                    assert!(check_idempotent(&l, &m));
                    assert!(check_boolean_values(&l, &m));
                    assert!(check_min_homogeneous(&l, &m));
                }
            }
        }
    }

    #[test]
    fn chain_properties() {
        for (k, n) in [(3, 2), (4, 2)] {
            let l = Lattice::chain(k).unwrap();
            for m in Capacity::all(&l, n) {
                assert!(check_comonotone_maxitive(&l, &m).unwrap());
                assert!(check_horizontally_maxitive(&l, &m).unwrap());
            }
        }
        let b2 = Lattice::boolean(2).unwrap();
        let m = Capacity::all(&b2, 2).remove(0);
        assert!(matches!(
            check_comonotone_maxitive(&b2, &m),
            Err(SugenoError::NotAChain(_))
        ));
        assert!(matches!(
            check_horizontally_maxitive(&b2, &m),
            Err(SugenoError::NotAChain(_))
        ));
    }

    #[test]
    fn chain_formulas_agree() {
        for k in [3, 4] {
            let l = Lattice::chain(k).unwrap();
            for n in 2..=3 {
                let r = formulas_comparator(&l, n).unwrap();
                assert_eq!(r.disagreement_count, 0);
                assert!(r.pairs > 0);
            }
        }
    }

    #[test]
    fn non_chain_formulas_differ_on_boolean_cube() {
        // B3, n = 2: u = ({1,2}, {2,3}) with m({1}) = m({2}) = ∅ has
        // subsets form {2} but pointwise form ∅
        let b3 = Lattice::boolean(3).unwrap();
        let m = cap(&b3, 2, &[0, 0, 0, 7]);
        let u = [e(0b011), e(0b110)];
        assert_eq!(sugeno_eval(&b3, &m, &u).unwrap(), e(0b010));
        assert_eq!(sugeno_eval_levels(&b3, &m, &u).unwrap(), e(0b010));
        assert_eq!(sugeno_eval_pointwise(&b3, &m, &u).unwrap(), e(0));
        assert!(formulas_comparator(&b3, 2).unwrap().disagreement_count > 0);
    }

    #[test]
    fn mask_rendering() {
        assert_eq!(fmt_mask(0), "{}");
        assert_eq!(fmt_mask(0b101), "{1,3}");
    }
}
