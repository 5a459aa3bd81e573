//! Compatible functions on finite lattices.
//!
//! A [`FunctionTable`] stores an n-ary function `L^n → L` explicitly. This
//! module checks whether such a table preserves every congruence, whether it
//! satisfies the coordinatewise median decomposition
//! `f(x) = med(f(x[k:=0]), x_k, f(x[k:=1]))`, and rebuilds it from its values
//! at the boolean vertices `{0,1}^n`. For monotone tables on a distributive
//! lattice the three properties coincide, and [`verify_equivalence_suite`]
//! checks that exhaustively.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::congruence::{all_congruences, principal_congruences, Congruence};
use crate::lattice::{ElementId, Lattice};
use crate::polynomial::{eval_normal_form, is_monotone, NormalForm};
use crate::sugeno::{capacity_from_function, sugeno_table, Capacity};

/// Default cap on the number of tables an enumeration may emit.
pub const DEFAULT_BUDGET: usize = 1_000_000;

/// Largest input space (`size^n`) a table may have.
pub const MAX_TABLE_LEN: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompatError {
    #[error("table has {got} entries, expected {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("value {0} is not an element of the lattice")]
    ForeignElement(usize),
    #[error("input has {got} coordinates, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("function is not monotone")]
    NotMonotone,
    #[error("enumeration exceeded the budget of {0} tables")]
    BudgetExceeded(usize),
    #[error("input space {size}^{arity} is too large")]
    InputSpaceTooLarge { size: usize, arity: usize },
}

/// Explicit n-ary function on a lattice.
///
/// Inputs are encoded in mixed radix with the first coordinate most
/// significant, so index order is lexicographic order of input tuples.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionTable {
    arity: usize,
    lattice_size: usize,
    values: Vec<ElementId>,
}

pub(crate) fn table_len(size: usize, arity: usize) -> Result<usize, CompatError> {
    u32::try_from(arity)
        .ok()
        .and_then(|a| size.checked_pow(a))
        .filter(|&len| len <= MAX_TABLE_LEN)
        .ok_or(CompatError::InputSpaceTooLarge { size, arity })
}

impl FunctionTable {
    pub fn new(
        lattice: &Lattice,
        arity: usize,
        values: Vec<ElementId>,
    ) -> Result<Self, CompatError> {
        let expected = table_len(lattice.size(), arity)?;
        if values.len() != expected {
            return Err(CompatError::WrongLength {
                expected,
                got: values.len(),
            });
        }
        if let Some(v) = values.iter().find(|v| !lattice.contains(**v)) {
            return Err(CompatError::ForeignElement(v.index()));
        }
        Ok(FunctionTable {
            arity,
            lattice_size: lattice.size(),
            values,
        })
    }

    /// Tabulates `f` over every input. Panics if the input space exceeds
    /// [`MAX_TABLE_LEN`].
    pub fn from_fn(
        lattice: &Lattice,
        arity: usize,
        mut f: impl FnMut(&[ElementId]) -> ElementId,
    ) -> Self {
        let len = table_len(lattice.size(), arity).expect("input space within limits");
        let mut values = Vec::with_capacity(len);
        for_each_input(lattice.size(), arity, |_, x| values.push(f(x)));
        FunctionTable {
            arity,
            lattice_size: lattice.size(),
            values,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn lattice_size(&self) -> usize {
        self.lattice_size
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[ElementId] {
        &self.values
    }

    pub fn value_at(&self, index: usize) -> ElementId {
        self.values[index]
    }

    /// Weight of coordinate `k` in the input encoding.
    pub fn stride(&self, k: usize) -> usize {
        self.lattice_size.pow((self.arity - 1 - k) as u32)
    }

    pub fn encode(&self, x: &[ElementId]) -> usize {
        x.iter()
            .fold(0, |acc, e| acc * self.lattice_size + e.index())
    }

    pub fn decode(&self, mut index: usize) -> Vec<ElementId> {
        let mut x = vec![ElementId::new(0); self.arity];
        for slot in x.iter_mut().rev() {
            *slot = ElementId::new(index % self.lattice_size);
            index /= self.lattice_size;
        }
        x
    }

    pub fn get(&self, x: &[ElementId]) -> Result<ElementId, CompatError> {
        if x.len() != self.arity {
            return Err(CompatError::ArityMismatch {
                expected: self.arity,
                got: x.len(),
            });
        }
        if let Some(e) = x.iter().find(|e| e.index() >= self.lattice_size) {
            return Err(CompatError::ForeignElement(e.index()));
        }
        Ok(self.values[self.encode(x)])
    }

    /// Calls `visit(index, input)` for every input in index order.
    pub fn for_each_input(&self, visit: impl FnMut(usize, &[ElementId])) {
        for_each_input(self.lattice_size, self.arity, visit)
    }

    /// Whether the table belongs to (has the shape of) `lattice`.
    pub fn fits(&self, lattice: &Lattice) -> bool {
        self.lattice_size == lattice.size()
    }
}

/// Visits every tuple in `{0..size}^arity` in lexicographic order.
impl std::fmt::Display for FunctionTable {
    /// The value column in input order, e.g. `[0 1 1]`.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.values.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

pub fn for_each_input(size: usize, arity: usize, mut visit: impl FnMut(usize, &[ElementId])) {
    let mut x = vec![ElementId::new(0); arity];
    let mut index = 0;
    loop {
        visit(index, &x);
        index += 1;
        let mut k = arity;
        loop {
            if k == 0 {
                return;
            }
            k -= 1;
            if x[k].index() + 1 < size {
                x[k] = ElementId::new(x[k].index() + 1);
                break;
            }
            x[k] = ElementId::new(0);
        }
    }
}

/// The boolean vertex for `mask`: top at set bits, bottom elsewhere.
/// Bit `i` is coordinate `i`.
pub fn boolean_vertex(lattice: &Lattice, arity: usize, mask: usize) -> Vec<ElementId> {
    (0..arity)
        .map(|i| {
            if mask >> i & 1 == 1 {
                lattice.top()
            } else {
                lattice.bottom()
            }
        })
        .collect()
}

/// Which congruences [`is_compatible`] tests against.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompatMode {
    /// Principal congruences only; sufficient because every congruence is a
    /// join of principal ones.
    #[default]
    PrincipalOnly,
    /// Every member of Con L.
    All,
}

impl std::str::FromStr for CompatMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "principal-only" | "principal" => Ok(CompatMode::PrincipalOnly),
            "all" => Ok(CompatMode::All),
            other => Err(format!(
                "unknown mode `{other}` (expected principal-only or all)"
            )),
        }
    }
}

pub fn congruences_for(lattice: &Lattice, mode: CompatMode) -> Vec<Congruence> {
    match mode {
        CompatMode::PrincipalOnly => principal_congruences(lattice),
        CompatMode::All => all_congruences(lattice),
    }
}

/// A witness that `f` does not preserve `congruence`: changing coordinate
/// `coordinate` of `input` to the congruent `replacement` moves the output
/// to another class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatViolation {
    pub congruence: Congruence,
    pub input: Vec<ElementId>,
    pub coordinate: usize,
    pub replacement: ElementId,
}

pub fn find_compat_violation_against(
    f: &FunctionTable,
    congruences: &[Congruence],
) -> Option<CompatViolation> {
    for theta in congruences {
        let reps = theta.representatives();
        let mut found = None;
        f.for_each_input(|idx, x| {
            if found.is_some() {
                return;
            }
            for (k, &xk) in x.iter().enumerate() {
                let r = reps[xk.index()];
                if r == xk {
                    continue;
                }
                let stride = f.stride(k);
                let other = idx - xk.index() * stride + r.index() * stride;
                if !theta.same_class(f.values[idx], f.values[other]) {
                    found = Some((x.to_vec(), k, r));
                    return;
                }
            }
        });
        if let Some((input, coordinate, replacement)) = found {
            return Some(CompatViolation {
                congruence: theta.clone(),
                input,
                coordinate,
                replacement,
            });
        }
    }
    None
}

pub fn find_compat_violation(
    lattice: &Lattice,
    f: &FunctionTable,
    mode: CompatMode,
) -> Option<CompatViolation> {
    find_compat_violation_against(f, &congruences_for(lattice, mode))
}

/// True iff `f` maps pointwise-congruent inputs to congruent outputs for
/// every congruence selected by `mode`.
///
/// Checked one coordinate at a time: each input is compared with the input
/// obtained by moving a single coordinate to its class representative.
pub fn is_compatible(lattice: &Lattice, f: &FunctionTable, mode: CompatMode) -> bool {
    find_compat_violation(lattice, f, mode).is_none()
}

/// First `(input, coordinate)` where the median decomposition fails.
pub fn find_median_violation(
    lattice: &Lattice,
    f: &FunctionTable,
) -> Option<(Vec<ElementId>, usize)> {
    let (bottom, top) = (lattice.bottom().index(), lattice.top().index());
    let mut found = None;
    f.for_each_input(|idx, x| {
        if found.is_some() {
            return;
        }
        for (k, &xk) in x.iter().enumerate() {
            let stride = f.stride(k);
            let base = idx - xk.index() * stride;
            let low = f.values[base + bottom * stride];
            let high = f.values[base + top * stride];
            if f.values[idx] != lattice.med(low, xk, high) {
                found = Some((x.to_vec(), k));
                return;
            }
        }
    });
    found
}

/// `f(x) = med(f(x with x_k = 0), x_k, f(x with x_k = 1))` for every `k` and `x`.
pub fn median_decomposition_check(lattice: &Lattice, f: &FunctionTable) -> bool {
    find_median_violation(lattice, f).is_none()
}

/// Values of `f` at the boolean vertices, as a coefficient table.
pub fn boolean_restriction(lattice: &Lattice, f: &FunctionTable) -> NormalForm {
    let coefficients = (0..1usize << f.arity)
        .map(|mask| f.values[f.encode(&boolean_vertex(lattice, f.arity, mask))])
        .collect();
    NormalForm::from_coefficients(f.arity, coefficients).expect("2^n coefficients")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Synthesis {
    pub normal_form: NormalForm,
    /// Whether the join-of-meets rebuilt from the boolean vertices equals `f`.
    pub verified: bool,
    /// First input where the rebuilt function differs from `f`.
    pub mismatch: Option<Vec<ElementId>>,
}

/// Rebuilds a monotone `f` as `⋁_b f(b) ∧ ⋀{x_i : b_i = 1}`.
///
/// The reconstruction equals `f` exactly when `f` is compatible.
pub fn synthesize(lattice: &Lattice, f: &FunctionTable) -> Result<Synthesis, CompatError> {
    if !is_monotone(lattice, f) {
        return Err(CompatError::NotMonotone);
    }
    let normal_form = boolean_restriction(lattice, f);
    let mut mismatch = None;
    f.for_each_input(|idx, x| {
        if mismatch.is_none()
            && eval_normal_form(lattice, &normal_form, x).expect("arity matches") != f.values[idx]
        {
            mismatch = Some(x.to_vec());
        }
    });
    Ok(Synthesis {
        normal_form,
        verified: mismatch.is_none(),
        mismatch,
    })
}

/// Monotone with `f(0,…,0) = 0` and `f(1,…,1) = 1`.
pub fn is_aggregation(lattice: &Lattice, f: &FunctionTable) -> bool {
    let n = f.arity;
    f.values[f.encode(&vec![lattice.bottom(); n])] == lattice.bottom()
        && f.values[f.encode(&vec![lattice.top(); n])] == lattice.top()
        && is_monotone(lattice, f)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TableFilter {
    #[default]
    All,
    /// Only tables satisfying the aggregation boundary conditions.
    Aggregation,
}

/// Streams every monotone table `L^n → L` by depth-first search.
///
/// Inputs are assigned in a linear extension of the product order and values
/// are tried in index order; when element indices already respect the order
/// of `L` (true for every catalogue lattice) tables come out in
/// lexicographic order of their value vectors.
pub struct MonotoneTables<'a> {
    lattice: &'a Lattice,
    arity: usize,
    order: Vec<usize>,
    lower: Vec<Vec<usize>>,
    forced: Vec<Option<ElementId>>,
    values: Vec<ElementId>,
    next_candidate: Vec<usize>,
    depth: usize,
    done: bool,
}

impl<'a> MonotoneTables<'a> {
    pub fn new(
        lattice: &'a Lattice,
        arity: usize,
        filter: TableFilter,
    ) -> Result<Self, CompatError> {
        let size = lattice.size();
        let len = table_len(size, arity)?;
        let rank: Vec<usize> = {
            let mut r = vec![0; size];
            for (i, e) in lattice.linear_extension().into_iter().enumerate() {
                r[e.index()] = i;
            }
            r
        };
        let shape = FunctionTable {
            arity,
            lattice_size: size,
            values: Vec::new(),
        };
        let mut keyed: Vec<(Vec<usize>, usize)> = Vec::with_capacity(len);
        let mut lower = vec![Vec::new(); len];
        for_each_input(size, arity, |idx, x| {
            keyed.push((x.iter().map(|e| rank[e.index()]).collect(), idx));
            for (k, &xk) in x.iter().enumerate() {
                let stride = shape.stride(k);
                for &c in lattice.lower_covers(xk) {
                    lower[idx].push(idx - xk.index() * stride + c.index() * stride);
                }
            }
        });
        keyed.sort();
        let order = keyed.into_iter().map(|(_, idx)| idx).collect();
        let mut forced = vec![None; len];
        if filter == TableFilter::Aggregation {
            forced[shape.encode(&vec![lattice.bottom(); arity])] = Some(lattice.bottom());
            forced[shape.encode(&vec![lattice.top(); arity])] = Some(lattice.top());
        }
        Ok(MonotoneTables {
            lattice,
            arity,
            order,
            lower,
            forced,
            values: vec![lattice.bottom(); len],
            next_candidate: vec![0; len],
            depth: 0,
            done: false,
        })
    }

    fn feasible(&self, pos: usize, v: ElementId) -> bool {
        self.forced[pos].is_none_or(|f| f == v)
            && self.lower[pos]
                .iter()
                .all(|&q| self.lattice.leq(self.values[q], v))
    }
}

impl Iterator for MonotoneTables<'_> {
    type Item = FunctionTable;

    fn next(&mut self) -> Option<FunctionTable> {
        let total = self.order.len();
        let size = self.lattice.size();
        while !self.done {
            if self.depth == total {
                self.depth -= 1;
                return Some(FunctionTable {
                    arity: self.arity,
                    lattice_size: size,
                    values: self.values.clone(),
                });
            }
            let pos = self.order[self.depth];
            let mut c = self.next_candidate[self.depth];
            while c < size && !self.feasible(pos, ElementId::new(c)) {
                c += 1;
            }
            if c < size {
                self.values[pos] = ElementId::new(c);
                self.next_candidate[self.depth] = c + 1;
                self.depth += 1;
                if self.depth < total {
                    self.next_candidate[self.depth] = 0;
                }
            } else if self.depth == 0 {
                self.done = true;
            } else {
                self.depth -= 1;
            }
        }
        None
    }
}

/// Collects every monotone table, failing once more than `budget` are found.
pub fn enumerate_monotone_tables(
    lattice: &Lattice,
    arity: usize,
    filter: TableFilter,
    budget: usize,
) -> Result<Vec<FunctionTable>, CompatError> {
    let mut out = Vec::new();
    for t in MonotoneTables::new(lattice, arity, filter)? {
        if out.len() == budget {
            return Err(CompatError::BudgetExceeded(budget));
        }
        out.push(t);
    }
    Ok(out)
}

/// Counts and findings from [`verify_equivalence_suite`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub lattice: String,
    pub arity: usize,
    pub monotone: usize,
    pub compatible: usize,
    pub median_decomposable: usize,
    pub reconstructed: usize,
    pub aggregation: usize,
    pub compatible_aggregation: usize,
    pub capacities: usize,
    pub violations: Vec<String>,
}

impl EquivalenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Exhaustively cross-checks, over all monotone tables on `lattice`:
///
/// * compatibility (principal-only and all-congruence modes), the median
///   decomposition, and exact reconstruction from boolean vertices agree;
/// * compatible tables are determined by their boolean restriction;
/// * compatible aggregation tables are exactly the Sugeno integrals, in
///   bijection with the capacities via `m(I) = A(1_I)`.
///
/// Meaningful on distributive lattices; on others the violations describe
/// where the equivalences break.
pub fn verify_equivalence_suite(
    lattice: &Lattice,
    arity: usize,
    budget: usize,
) -> Result<EquivalenceReport, CompatError> {
    let principal = congruences_for(lattice, CompatMode::PrincipalOnly);
    let every = congruences_for(lattice, CompatMode::All);
    let mut report = EquivalenceReport {
        lattice: lattice.name().to_string(),
        arity,
        ..Default::default()
    };
    let mut by_restriction: HashMap<NormalForm, FunctionTable> = HashMap::new();
    let mut extracted: BTreeSet<Capacity> = BTreeSet::new();
    let note = |report: &mut EquivalenceReport, msg: String| {
        if report.violations.len() < 20 {
            report.violations.push(msg);
        }
    };

    for (count, f) in MonotoneTables::new(lattice, arity, TableFilter::All)?.enumerate() {
        if count == budget {
            return Err(CompatError::BudgetExceeded(budget));
        }
        report.monotone += 1;
        let compatible = find_compat_violation_against(&f, &principal).is_none();
        let compatible_all = find_compat_violation_against(&f, &every).is_none();
        let median = median_decomposition_check(lattice, &f);
        let synthesis = synthesize(lattice, &f).expect("enumerated tables are monotone");
        report.compatible += usize::from(compatible);
        report.median_decomposable += usize::from(median);
        report.reconstructed += usize::from(synthesis.verified);
        if compatible != compatible_all {
            note(&mut report, format!("modes disagree on {f}"));
        }
        if compatible != median {
            note(
                &mut report,
                format!("compatible={compatible} but median={median} on {f}"),
            );
        }
        if compatible != synthesis.verified {
            note(
                &mut report,
                format!(
                    "compatible={compatible} but reconstructed={} on {}",
                    synthesis.verified, f
                ),
            );
        }
        if compatible {
            if let Some(prev) = by_restriction.insert(synthesis.normal_form.clone(), f.clone()) {
                note(
                    &mut report,
                    format!("tables {prev} and {f} share a boolean restriction"),
                );
            }
        }
        if is_aggregation(lattice, &f) {
            report.aggregation += 1;
            let m = capacity_from_function(lattice, &f).expect("aggregation table");
            let is_sugeno = sugeno_table(lattice, &m) == f;
            if compatible {
                report.compatible_aggregation += 1;
                extracted.insert(m);
            }
            if is_sugeno != compatible {
                note(
                    &mut report,
                    format!(
                        "compatible={compatible} but equals Sugeno integral={is_sugeno} on {f}"
                    ),
                );
            }
        }
    }

    let all_capacities = Capacity::all(lattice, arity);
    report.capacities = all_capacities.len();
    if extracted.len() != report.compatible_aggregation {
        note(
            &mut report,
            "capacity extraction is not injective".to_string(),
        );
    }
    if extracted.into_iter().ne(all_capacities) {
        note(
            &mut report,
            "extracted capacities differ from the set of all capacities".to_string(),
        );
    }
    Ok(report)
}
