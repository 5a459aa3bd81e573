//! Deterministic batch verification over the built-in lattice catalogue.
//!
//! [`run`] executes a family of brute-force checks and returns a
//! [`VerifyReport`] whose text and JSON renderings depend only on the
//! [`VerifyConfig`].

use std::fmt::Write as _;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::compat::{
    find_compat_violation, median_decomposition_check, synthesize, verify_equivalence_suite,
    CompatError, CompatMode, DEFAULT_BUDGET,
};
use crate::congruence::{
    all_congruences, all_congruences_by_partition_filter, closed_form_findings,
    principal_congruence, principal_congruence_oracle, ClosedFormOutcome, PARTITION_FILTER_LIMIT,
};
use crate::constructions::{
    direct_product, horizontal_sum, horizontal_sum_decomposition_check,
    horizontal_sum_decomposition_report, product_decomposition_check, ConstructionError,
};
use crate::lattice::Lattice;
use crate::polynomial::{random_polynomial, to_normal_form};
use crate::sugeno::{
    check_boolean_values, check_comonotone_maxitive, check_horizontally_maxitive, check_idempotent,
    check_min_homogeneous, formulas_comparator, Capacity,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    All,
    Lattices,
    Congruences,
    Compat,
    Sugeno,
    Constructions,
    Polynomials,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Lattices,
        Suite::Congruences,
        Suite::Compat,
        Suite::Sugeno,
        Suite::Constructions,
        Suite::Polynomials,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Lattices => "lattices",
            Suite::Congruences => "congruences",
            Suite::Compat => "compat",
            Suite::Sugeno => "sugeno",
            Suite::Constructions => "constructions",
            Suite::Polynomials => "polynomials",
        }
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        std::iter::once(Suite::All)
            .chain(Suite::ALL)
            .find(|x| x.as_str() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct VerifyConfig {
    pub suite: Suite,
    /// Largest catalogue lattice to include.
    pub max_size: usize,
    pub max_arity: usize,
    /// Cap on enumerated tables per equivalence run.
    pub budget: usize,
    pub seed: u64,
    /// Random polynomials per lattice in the polynomial suite.
    pub samples: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suite: Suite::All,
            max_size: 4,
            max_arity: 2,
            budget: DEFAULT_BUDGET,
            seed: 0,
            samples: 1000,
        }
    }
}

/// `Info` records an observation that is not expected to hold either way,
/// such as the behaviour of a construction outside its hypotheses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Info,
    Skip,
}

impl Status {
    fn from_bool(ok: bool) -> Status {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Info => "INFO",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub suite: Suite,
    pub check: String,
    pub subject: String,
    pub status: Status,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub config: VerifyConfig,
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != Status::Fail)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_text(&self) -> String {
        let c = &self.config;
        let mut out = String::new();
        writeln!(
            out,
            "verify suite={} max-size={} max-arity={} budget={} seed={} samples={}",
            c.suite.as_str(),
            c.max_size,
            c.max_arity,
            c.budget,
            c.seed,
            c.samples
        )
        .unwrap();
        let width = |f: fn(&CheckResult) -> usize| self.checks.iter().map(f).max().unwrap_or(0);
        let (w_suite, w_check, w_subject) = (
            width(|r| r.suite.as_str().len()),
            width(|r| r.check.len()),
            width(|r| r.subject.len()),
        );
        for r in &self.checks {
            let line = format!(
                "{}  {:w_suite$}  {:w_check$}  {:w_subject$}  {}",
                r.status.as_str(),
                r.suite.as_str(),
                r.check,
                r.subject,
                r.detail
            );
            writeln!(out, "{}", line.trim_end()).unwrap();
        }
        writeln!(
            out,
            "summary: {} passed, {} failed, {} info, {} skipped",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Info),
            self.count(Status::Skip)
        )
        .unwrap();
        out
    }

    pub fn to_json(&self) -> String {
        crate::io::to_json(self)
    }
}

struct Ctx {
    suite: Suite,
    checks: Vec<CheckResult>,
}

impl Ctx {
    fn push(&mut self, check: &str, subject: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            suite: self.suite,
            check: check.to_string(),
            subject: subject.to_string(),
            status,
            detail: detail.into(),
        });
    }
}

/// Catalogue lattices of at most `max_size` elements, smallest families first.
pub fn catalogue_lattices(max_size: usize) -> Vec<Lattice> {
    let mut out: Vec<Lattice> = (1..=max_size)
        .map(|k| Lattice::chain(k).expect("k ≥ 1"))
        .collect();
    out.extend(
        (2..=8)
            .take_while(|&k| 1usize << k <= max_size)
            .map(|k| Lattice::boolean(k).expect("k ≤ 8")),
    );
    if max_size >= 5 {
        out.push(Lattice::m3());
        out.push(Lattice::n5());
    }
    out
}

fn arities(max_arity: usize) -> std::ops::RangeInclusive<usize> {
    1..=max_arity
}

pub fn run(config: &VerifyConfig) -> VerifyReport {
    let lattices = catalogue_lattices(config.max_size);
    let mut checks = Vec::new();
    for suite in Suite::ALL {
        if config.suite != Suite::All && config.suite != suite {
            continue;
        }
        let mut ctx = Ctx {
            suite,
            checks: Vec::new(),
        };
        match suite {
            Suite::Lattices => lattices_suite(&mut ctx, &lattices),
            Suite::Congruences => congruences_suite(&mut ctx, &lattices),
            Suite::Compat => compat_suite(&mut ctx, &lattices, config),
            Suite::Sugeno => sugeno_suite(&mut ctx, &lattices, config),
            Suite::Constructions => constructions_suite(&mut ctx, config),
            Suite::Polynomials => polynomials_suite(&mut ctx, &lattices, config),
            Suite::All => unreachable!(),
        }
        checks.append(&mut ctx.checks);
    }
    VerifyReport {
        config: config.clone(),
        checks,
    }
}

fn expected_distributive(l: &Lattice) -> Option<bool> {
    match l.name() {
        "M3" | "N5" => Some(false),
        n if n.starts_with("chain(") || n.starts_with("boolean(") => Some(true),
        _ => None,
    }
}

fn lattices_suite(ctx: &mut Ctx, lattices: &[Lattice]) {
    for l in lattices {
        let d = l.is_distributive();
        let detail = match l.find_distributivity_violation() {
            None => "distributive".to_string(),
            Some((a, b, c)) => format!("not distributive: witness ({a}, {b}, {c})"),
        };
        let ok = expected_distributive(l).is_none_or(|want| want == d);
        ctx.push("distributivity", l.name(), Status::from_bool(ok), detail);
        if d {
            ctx.push(
                "median self-dual",
                l.name(),
                Status::from_bool(l.med_dual_check()),
                "",
            );
        }
    }
}

fn congruences_suite(ctx: &mut Ctx, lattices: &[Lattice]) {
    for l in lattices {
        let all = all_congruences(l);
        if l.size() <= PARTITION_FILTER_LIMIT {
            let filtered = all_congruences_by_partition_filter(l).expect("size checked");
            ctx.push(
                "lattice of congruences",
                l.name(),
                Status::from_bool(filtered == all),
                if filtered == all {
                    format!("count {} (partition filter agrees)", all.len())
                } else {
                    format!(
                        "count {} (partition filter finds {})",
                        all.len(),
                        filtered.len()
                    )
                },
            );
        } else {
            ctx.push(
                "lattice of congruences",
                l.name(),
                Status::Info,
                format!("count {}", all.len()),
            );
        }
        if l.is_chain() {
            let want = 1usize << (l.size() - 1);
            ctx.push(
                "chain congruence count",
                l.name(),
                Status::from_bool(all.len() == want),
                format!("{} (expected {want})", all.len()),
            );
        }
        let findings = closed_form_findings(l);
        let count = |o: ClosedFormOutcome| findings.iter().filter(|f| f.outcome == o).count();
        let detail = format!(
            "{} pairs: {} agree, {} not a congruence, {} strictly coarser",
            findings.len(),
            count(ClosedFormOutcome::Agrees),
            count(ClosedFormOutcome::NotCongruence),
            count(ClosedFormOutcome::StrictlyCoarser)
        );
        if l.is_distributive() {
            let closed_form_ok = l.elements().all(|a| {
                l.elements().all(|b| {
                    principal_congruence(l, a, b).expect("distributive")
                        == principal_congruence_oracle(l, a, b)
                })
            });
            let ok = closed_form_ok && count(ClosedFormOutcome::Agrees) == findings.len();
            ctx.push(
                "principal closed form",
                l.name(),
                Status::from_bool(ok),
                detail,
            );
        } else {
            ctx.push("principal closed form", l.name(), Status::Info, detail);
        }
    }
}

fn compat_suite(ctx: &mut Ctx, lattices: &[Lattice], config: &VerifyConfig) {
    for l in lattices {
        for n in arities(config.max_arity) {
            let subject = format!("{} n={n}", l.name());
            match verify_equivalence_suite(l, n, config.budget) {
                Ok(r) => {
                    let mut detail = format!(
                        "monotone={} compatible={} median={} reconstructed={} aggregation={} compatible-aggregation={} capacities={}",
                        r.monotone,
                        r.compatible,
                        r.median_decomposable,
                        r.reconstructed,
                        r.aggregation,
                        r.compatible_aggregation,
                        r.capacities
                    );
                    if let Some(v) = r.violations.first() {
                        write!(detail, " violations={} first: {v}", r.violations.len()).unwrap();
                    }
                    let status = if l.is_distributive() {
                        Status::from_bool(r.passed())
                    } else {
                        Status::Info
                    };
                    ctx.push("equivalences", &subject, status, detail);
                }
                Err(
                    e @ (CompatError::BudgetExceeded(_) | CompatError::InputSpaceTooLarge { .. }),
                ) => {
                    ctx.push("equivalences", &subject, Status::Skip, e.to_string());
                }
                Err(e) => ctx.push("equivalences", &subject, Status::Fail, e.to_string()),
            }
        }
    }
}

/// Sugeno checks are skipped when `size^(2^n - 2)`, an upper bound on the
/// number of capacities, exceeds this.
const CAPACITY_BOUND: usize = 2_000_000;

fn capacity_count_small(l: &Lattice, n: usize) -> bool {
    n < usize::BITS as usize
        && u32::try_from((1usize << n) - 2)
            .ok()
            .and_then(|e| l.size().checked_pow(e))
            .is_some_and(|b| b <= CAPACITY_BOUND)
}

fn sugeno_suite(ctx: &mut Ctx, lattices: &[Lattice], config: &VerifyConfig) {
    for l in lattices
        .iter()
        .filter(|l| l.is_distributive() && l.size() >= 2)
    {
        for n in arities(config.max_arity) {
            let subject = format!("{} n={n}", l.name());
            if !capacity_count_small(l, n) {
                ctx.push(
                    "formulas agree",
                    &subject,
                    Status::Skip,
                    "too many capacities",
                );
                continue;
            }
            let report = formulas_comparator(l, n).expect("arity is small");
            let detail = format!(
                "{} capacities, {} pairs, {} disagreements",
                report.capacities, report.pairs, report.disagreement_count
            );
            let status = if l.is_chain() {
                Status::from_bool(report.disagreement_count == 0)
            } else {
                Status::Info
            };
            ctx.push("formulas agree", &subject, status, detail);

            let capacities = Capacity::all(l, n);
            let all = |f: &dyn Fn(&Capacity) -> bool| capacities.iter().all(f);
            ctx.push(
                "idempotent",
                &subject,
                Status::from_bool(all(&|m| check_idempotent(l, m))),
                "",
            );
            ctx.push(
                "boolean values",
                &subject,
                Status::from_bool(all(&|m| check_boolean_values(l, m))),
                "",
            );
            ctx.push(
                "min-homogeneous",
                &subject,
                Status::from_bool(all(&|m| check_min_homogeneous(l, m))),
                "",
            );
            if l.is_chain() {
                ctx.push(
                    "comonotone maxitive",
                    &subject,
                    Status::from_bool(all(&|m| check_comonotone_maxitive(l, m).expect("chain"))),
                    "",
                );
                ctx.push(
                    "horizontally maxitive",
                    &subject,
                    Status::from_bool(all(&|m| check_horizontally_maxitive(l, m).expect("chain"))),
                    "",
                );
            }
        }
    }
}

fn chain(k: usize) -> Lattice {
    Lattice::chain(k).expect("k ≥ 1")
}

fn constructions_suite(ctx: &mut Ctx, config: &VerifyConfig) {
    let max_arity = config.max_arity.min(2);
    let products = [
        vec![chain(2), chain(2)],
        vec![chain(2), chain(3)],
        vec![chain(3), chain(2)],
    ];
    for factors in &products {
        let p = direct_product(factors).expect("non-empty factors");
        for n in arities(max_arity) {
            let caps = Capacity::all(p.lattice(), n);
            let ok = caps
                .iter()
                .all(|m| product_decomposition_check(&p, m).expect("capacities match"));
            let subject = format!("{} n={n}", p.lattice().name());
            ctx.push(
                "product splitting",
                &subject,
                Status::from_bool(ok),
                format!("{} capacities", caps.len()),
            );
        }
    }

    let pool = [
        chain(2),
        chain(3),
        Lattice::boolean(2).expect("k ≤ 8"),
        Lattice::m3(),
        Lattice::n5(),
    ];
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i..] {
            let p = direct_product(&[a.clone(), b.clone()]).expect("non-empty factors");
            let want = a.is_distributive() && b.is_distributive();
            let got = p.lattice().is_distributive();
            ctx.push(
                "product distributivity",
                p.lattice().name(),
                Status::from_bool(got == want),
                format!("distributive={got}"),
            );
        }
    }

    let sums = [
        vec![chain(2), chain(3)],
        vec![chain(3), chain(3)],
        vec![chain(3), chain(4)],
        vec![chain(4), chain(4)],
    ];
    for summands in &sums {
        let h = horizontal_sum(summands).expect("summands have two elements");
        for n in arities(max_arity) {
            let subject = format!("{} n={n}", h.lattice().name());
            let caps = Capacity::all(h.lattice(), n);
            let holds = caps
                .iter()
                .filter(|m| horizontal_sum_decomposition_report(&h, m).expect("capacities match"))
                .count();
            let detail = format!("splitting holds for {holds} of {} capacities", caps.len());
            if h.is_distributive() {
                let ok = caps
                    .iter()
                    .all(|m| horizontal_sum_decomposition_check(&h, m).expect("distributive"));
                ctx.push(
                    "horizontal-sum splitting",
                    &subject,
                    Status::from_bool(ok),
                    detail,
                );
            } else {
                let refused = caps.first().is_some_and(|m| {
                    matches!(
                        horizontal_sum_decomposition_check(&h, m),
                        Err(ConstructionError::NotDistributive(_))
                    )
                });
                ctx.push(
                    "non-distributive sum refused",
                    &subject,
                    Status::from_bool(refused),
                    "",
                );
                ctx.push(
                    "horizontal-sum splitting (report)",
                    &subject,
                    Status::Info,
                    detail,
                );
            }
        }
    }
}

fn polynomials_suite(ctx: &mut Ctx, lattices: &[Lattice], config: &VerifyConfig) {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let max_arity = config.max_arity.clamp(1, 3);
    for l in lattices
        .iter()
        .filter(|l| l.is_distributive() && l.size() >= 2)
    {
        let mut failures = 0usize;
        let mut first = None;
        for i in 0..config.samples {
            let n = rng.gen_range(1..=max_arity);
            let p = random_polynomial(&mut rng, l, n, 4);
            let f = p.table(l).expect("constants belong to the lattice");
            let nf = to_normal_form(l, &p).expect("arity matches");
            let synthesis = synthesize(l, &f).expect("polynomials are monotone");
            let ok = find_compat_violation(l, &f, CompatMode::PrincipalOnly).is_none()
                && median_decomposition_check(l, &f)
                && synthesis.verified
                && synthesis.normal_form == nf;
            if !ok {
                failures += 1;
                first.get_or_insert_with(|| format!(" first: #{i} {p}"));
            }
        }
        let detail = format!(
            "{} samples, {failures} failures{}",
            config.samples,
            first.unwrap_or_default()
        );
        ctx.push(
            "random polynomials",
            l.name(),
            Status::from_bool(failures == 0),
            detail,
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            max_size: 3,
            max_arity: 1,
            samples: 50,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn suites_parse() {
        for s in std::iter::once(Suite::All).chain(Suite::ALL) {
            assert_eq!(s.as_str().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn catalogue_respects_size() {
        let names: Vec<String> = catalogue_lattices(5)
            .iter()
            .map(|l| l.name().to_string())
            .collect();
        assert_eq!(
            names,
            [
                "chain(1)",
                "chain(2)",
                "chain(3)",
                "chain(4)",
                "chain(5)",
                "boolean(2)",
                "M3",
                "N5"
            ]
        );
        assert!(catalogue_lattices(5).iter().all(|l| l.size() <= 5));
    }

    #[test]
    fn small_run_passes_and_is_deterministic() {
        let a = run(&small());
        assert!(a.passed(), "{}", a.to_text());
        assert_eq!(a.to_text(), run(&small()).to_text());
        assert_eq!(a.to_json(), run(&small()).to_json());
    }

    #[test]
    fn single_suite_filter() {
        let r = run(&VerifyConfig {
            suite: Suite::Lattices,
            ..small()
        });
        assert!(r.checks.iter().all(|c| c.suite == Suite::Lattices));
        assert!(!r.checks.is_empty());
    }

    #[test]
    fn budget_skips() {
        let r = run(&VerifyConfig {
            suite: Suite::Compat,
            budget: 3,
            ..small()
        });
        assert!(r.checks.iter().any(|c| c.status == Status::Skip));
        assert!(r.passed());
    }

    #[test]
    fn seed_changes_samples_only() {
        let cfg = VerifyConfig {
            suite: Suite::Polynomials,
            ..small()
        };
        let a = run(&cfg);
        let b = run(&VerifyConfig { seed: 7, ..cfg });
        assert!(a.passed() && b.passed());
        assert_eq!(a.checks.len(), b.checks.len());
    }
}
