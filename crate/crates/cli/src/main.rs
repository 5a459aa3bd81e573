//! `latcong`: command-line front end for lattice congruences, compatible
//! functions and Sugeno integrals.
//!
//! Exit codes: 0 for success or a true verdict, 1 for a false verdict or a
//! counterexample, 2 for usage and parse errors.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use latcong::compat::{
    find_compat_violation, find_median_violation, is_aggregation, synthesize, CompatError,
};
use latcong::congruence::{all_congruences, principal_congruence, principal_congruence_oracle};
use latcong::constructions::{
    direct_product, horizontal_sum, horizontal_sum_decomposition_check,
    horizontal_sum_decomposition_report, ConstructionError,
};
use latcong::io::{
    parse_capacity, parse_function, parse_lattice, parse_polynomial, to_json, write_capacity,
    write_lattice,
};
use latcong::polynomial::normal_form_to_polynomial;
use latcong::sugeno::{
    capacity_from_function, fmt_mask, formulas_comparator, sugeno_eval_with, Formula,
};
use latcong::verify::{self, Suite, VerifyConfig};
use latcong::{Capacity, CompatMode, ElementId, FunctionTable, Lattice};

#[derive(Parser)]
#[command(
    name = "latcong",
    version,
    about = "Finite lattices, congruences and Sugeno integrals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct LatticeArg {
    /// Lattice file, or a catalogue name: chain(k), boolean(k), M3, N5.
    #[arg(long)]
    lattice: String,
}

#[derive(Args)]
struct FunctionArg {
    /// Function table file.
    #[arg(long, conflicts_with = "poly", required_unless_present = "poly")]
    function: Option<PathBuf>,
    /// Polynomial file, or an inline S-expression starting with `(`.
    #[arg(long)]
    poly: Option<String>,
    /// Arity of the polynomial; defaults to its highest variable index + 1.
    #[arg(long, requires = "poly")]
    arity: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Summarize a lattice.
    Info(LatticeArg),
    /// Test distributivity; prints a violating triple when there is one.
    Distributive(LatticeArg),
    /// List every congruence, one per line.
    Congruences(LatticeArg),
    /// The least congruence identifying `a` and `b`.
    Principal {
        #[command(flatten)]
        lattice: LatticeArg,
        a: String,
        b: String,
    },
    /// Test whether a function preserves every congruence.
    Compat {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        function: FunctionArg,
        #[arg(long, default_value = "principal-only")]
        mode: CompatMode,
    },
    /// Test the coordinatewise median decomposition.
    MedianCheck {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        function: FunctionArg,
    },
    /// Rebuild a monotone function from its boolean vertices.
    Synthesize {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        function: FunctionArg,
    },
    /// Evaluate a Sugeno integral.
    Sugeno {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long)]
        capacity: PathBuf,
        /// Input elements, one per criterion.
        #[arg(long, num_args = 1.., allow_hyphen_values = false)]
        input: Vec<String>,
        #[arg(long, default_value = "subsets")]
        formula: Formula,
    },
    /// Compare the three Sugeno formulas over every capacity and input.
    SugenoCompare {
        #[command(flatten)]
        lattice: LatticeArg,
        #[arg(long, default_value_t = 2)]
        arity: usize,
        #[arg(long)]
        json: bool,
    },
    /// Direct product of the given lattices.
    Product {
        #[arg(long, required = true)]
        lattice: Vec<String>,
    },
    /// Horizontal sum of the given lattices, or a check of the Sugeno
    /// splitting over it.
    Hsum {
        #[arg(long, required = true)]
        lattice: Vec<String>,
        /// Check the splitting for all capacities; refused unless the sum is distributive.
        #[arg(long, conflicts_with = "report_only")]
        check: bool,
        /// Run the splitting check regardless of distributivity.
        #[arg(long)]
        report_only: bool,
        #[arg(long, default_value_t = 2)]
        arity: usize,
    },
    /// Extract the capacity `m(I) = A(1_I)` of an aggregation function.
    CapacityOf {
        #[command(flatten)]
        lattice: LatticeArg,
        #[command(flatten)]
        function: FunctionArg,
        #[arg(long, default_value = "m")]
        name: String,
    },
    /// Run the brute-force verification suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = VerifyConfig::default().max_size)]
        max_size: usize,
        #[arg(long, default_value_t = VerifyConfig::default().max_arity)]
        max_arity: usize,
        #[arg(long, default_value_t = VerifyConfig::default().budget)]
        budget: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = VerifyConfig::default().samples)]
        samples: usize,
        #[arg(long)]
        json: bool,
    },
}

type Outcome = Result<bool, String>;

macro_rules! outln {
    ($out:expr, $($arg:tt)*) => {
        writeln!($out, $($arg)*).expect("writing to a String")
    };
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_lattice(spec: &str) -> Result<Lattice, String> {
    let path = Path::new(spec);
    if path.is_file() {
        return parse_lattice(&read(path)?).map_err(|e| format!("{spec}: {e}"));
    }
    Lattice::catalogue(spec)
        .map_err(|_| format!("`{spec}` is neither a lattice file nor a catalogue lattice"))
}

fn load_function(lattice: &Lattice, arg: &FunctionArg) -> Result<FunctionTable, String> {
    if let Some(path) = &arg.function {
        let (_, f) = parse_function(&read(path)?, lattice)
            .map_err(|e| format!("{}: {e}", path.display()))?;
        return Ok(f);
    }
    let spec = arg
        .poly
        .as_deref()
        .expect("clap requires --function or --poly");
    let (text, shown) = if spec.trim_start().starts_with('(') {
        (spec.to_string(), "--poly".to_string())
    } else {
        (read(Path::new(spec))?, spec.to_string())
    };
    let p = parse_polynomial(&text, arg.arity).map_err(|e| format!("{shown}: {e}"))?;
    p.table(lattice).map_err(|e| format!("{shown}: {e}"))
}

fn load_capacity(lattice: &Lattice, path: &Path) -> Result<Capacity, String> {
    parse_capacity(&read(path)?, lattice)
        .map(|(_, m)| m)
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn element(lattice: &Lattice, token: &str) -> Result<ElementId, String> {
    lattice
        .resolve(token)
        .ok_or_else(|| format!("`{token}` is not an element of {}", lattice.name()))
}

fn tuple(x: &[ElementId]) -> String {
    let parts: Vec<String> = x.iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn verdict(out: &mut String, ok: bool) -> Outcome {
    outln!(out, "{ok}");
    Ok(ok)
}

fn run(cli: Cli, out: &mut String) -> Outcome {
    match cli.command {
        Command::Info(arg) => {
            let l = load_lattice(&arg.lattice)?;
            let covers: Vec<String> = l.covers().iter().map(|(a, b)| format!("{a}<{b}")).collect();
            let labels: Vec<String> = l
                .elements()
                .filter_map(|e| l.label(e).map(|t| format!("{e}={t}")))
                .collect();
            outln!(out, "name: {}", l.name());
            outln!(out, "size: {}", l.size());
            outln!(out, "bottom: {}", l.bottom());
            outln!(out, "top: {}", l.top());
            outln!(out, "covers: {}", covers.join(" "));
            if !labels.is_empty() {
                outln!(out, "labels: {}", labels.join(" "));
            }
            outln!(out, "chain: {}", l.is_chain());
            outln!(out, "distributive: {}", l.is_distributive());
            outln!(out, "congruences: {}", all_congruences(&l).len());
            Ok(true)
        }
        Command::Distributive(arg) => {
            let l = load_lattice(&arg.lattice)?;
            match l.find_distributivity_violation() {
                None => verdict(out, true),
                Some((a, b, c)) => {
                    outln!(out, "false");
                    outln!(
                        out,
                        "witness: {a} meet ({b} join {c}) != ({a} meet {b}) join ({a} meet {c})"
                    );
                    Ok(false)
                }
            }
        }
        Command::Congruences(arg) => {
            let l = load_lattice(&arg.lattice)?;
            let mut lines: Vec<String> = all_congruences(&l)
                .iter()
                .map(ToString::to_string)
                .collect();
            lines.sort();
            for line in lines {
                outln!(out, "{line}");
            }
            Ok(true)
        }
        Command::Principal { lattice, a, b } => {
            let l = load_lattice(&lattice.lattice)?;
            let (a, b) = (element(&l, &a)?, element(&l, &b)?);
            let theta = if l.is_distributive() {
                principal_congruence(&l, a, b).map_err(|e| e.to_string())?
            } else {
                principal_congruence_oracle(&l, a, b)
            };
            outln!(out, "{theta}");
            Ok(true)
        }
        Command::Compat {
            lattice,
            function,
            mode,
        } => {
            let l = load_lattice(&lattice.lattice)?;
            let f = load_function(&l, &function)?;
            match find_compat_violation(&l, &f, mode) {
                None => verdict(out, true),
                Some(v) => {
                    outln!(out, "false");
                    outln!(
                        out,
                        "witness: congruence {} input {} coordinate {} replaced by {}",
                        v.congruence,
                        tuple(&v.input),
                        v.coordinate + 1,
                        v.replacement
                    );
                    Ok(false)
                }
            }
        }
        Command::MedianCheck { lattice, function } => {
            let l = load_lattice(&lattice.lattice)?;
            let f = load_function(&l, &function)?;
            match find_median_violation(&l, &f) {
                None => verdict(out, true),
                Some((x, k)) => {
                    outln!(out, "false");
                    outln!(out, "witness: input {} coordinate {}", tuple(&x), k + 1);
                    Ok(false)
                }
            }
        }
        Command::Synthesize { lattice, function } => {
            let l = load_lattice(&lattice.lattice)?;
            let f = load_function(&l, &function)?;
            let s = match synthesize(&l, &f) {
                Ok(s) => s,
                Err(CompatError::NotMonotone) => {
                    outln!(out, "false");
                    outln!(out, "function is not monotone");
                    return Ok(false);
                }
                Err(e) => return Err(e.to_string()),
            };
            outln!(out, "{}", normal_form_to_polynomial(&s.normal_form));
            match s.mismatch {
                None => outln!(out, "verified: true"),
                Some(x) => outln!(out, "verified: false (differs at {})", tuple(&x)),
            }
            Ok(s.verified)
        }
        Command::Sugeno {
            lattice,
            capacity,
            input,
            formula,
        } => {
            let l = load_lattice(&lattice.lattice)?;
            let m = load_capacity(&l, &capacity)?;
            let u = input
                .iter()
                .map(|t| element(&l, t))
                .collect::<Result<Vec<_>, _>>()?;
            let v = sugeno_eval_with(formula, &l, &m, &u).map_err(|e| e.to_string())?;
            outln!(out, "{v}");
            Ok(true)
        }
        Command::SugenoCompare {
            lattice,
            arity,
            json,
        } => {
            let l = load_lattice(&lattice.lattice)?;
            let r = formulas_comparator(&l, arity).map_err(|e| e.to_string())?;
            if json {
                out.push_str(&to_json(&r));
            } else {
                outln!(out, "lattice: {}", r.lattice);
                outln!(out, "arity: {}", r.arity);
                outln!(out, "capacities: {}", r.capacities);
                outln!(out, "pairs: {}", r.pairs);
                outln!(out, "disagreements: {}", r.disagreement_count);
                for d in r.disagreements.iter().take(20) {
                    let m: Vec<String> = d
                        .capacity
                        .iter()
                        .enumerate()
                        .map(|(mask, v)| format!("{}={v}", fmt_mask(mask)))
                        .collect();
                    outln!(
                        out,
                        "  m [{}] u {}: subsets {} levels {} pointwise {}",
                        m.join(" "),
                        tuple(&d.input),
                        d.subsets,
                        d.levels,
                        d.pointwise
                    );
                }
            }
            Ok(r.disagreement_count == 0)
        }
        Command::Product { lattice } => {
            let factors = lattice
                .iter()
                .map(|s| load_lattice(s))
                .collect::<Result<Vec<_>, _>>()?;
            let p = direct_product(&factors).map_err(|e| e.to_string())?;
            let names: Vec<&str> = factors.iter().map(Lattice::name).collect();
            let mut comments = vec![format!("direct product of {}", names.join(", "))];
            comments.extend(
                p.lattice()
                    .elements()
                    .map(|e| format!("element {e} = {}", tuple(p.coordinates(e)))),
            );
            out.push_str(&write_lattice(p.lattice(), &comments));
            Ok(true)
        }
        Command::Hsum {
            lattice,
            check,
            report_only,
            arity,
        } => {
            let summands = lattice
                .iter()
                .map(|s| load_lattice(s))
                .collect::<Result<Vec<_>, _>>()?;
            let h = horizontal_sum(&summands).map_err(|e| e.to_string())?;
            let l = h.lattice();
            if !check && !report_only {
                let names: Vec<&str> = summands.iter().map(Lattice::name).collect();
                let mut comments = vec![format!("horizontal sum of {}", names.join(", "))];
                comments.extend(l.elements().map(|e| match h.provenance(e) {
                    Some((k, local)) => format!("element {e} = summand {} element {local}", k + 1),
                    None if e == l.bottom() => format!("element {e} = shared bottom"),
                    None => format!("element {e} = shared top"),
                }));
                out.push_str(&write_lattice(l, &comments));
                return Ok(true);
            }
            let caps = Capacity::all(l, arity);
            if check {
                let Some(first) = caps.first() else {
                    return Err("no capacities to check".to_string());
                };
                if let Err(ConstructionError::NotDistributive(name)) =
                    horizontal_sum_decomposition_check(&h, first)
                {
                    outln!(out, "refused: {name} is not distributive");
                    if let Some((a, b, c)) = l.find_distributivity_violation() {
                        outln!(out, "witness: {a} meet ({b} join {c}) != ({a} meet {b}) join ({a} meet {c})");
                    }
                    return Ok(false);
                }
            }
            let mut holds = 0;
            for m in &caps {
                holds += usize::from(
                    horizontal_sum_decomposition_report(&h, m).map_err(|e| e.to_string())?,
                );
            }
            outln!(out, "lattice: {}", l.name());
            outln!(out, "distributive: {}", h.is_distributive());
            outln!(
                out,
                "splitting holds for {holds} of {} capacities",
                caps.len()
            );
            Ok(holds == caps.len())
        }
        Command::CapacityOf {
            lattice,
            function,
            name,
        } => {
            let l = load_lattice(&lattice.lattice)?;
            let f = load_function(&l, &function)?;
            if !is_aggregation(&l, &f) {
                outln!(out, "false");
                outln!(out, "function is not an aggregation function");
                return Ok(false);
            }
            let m = capacity_from_function(&l, &f).map_err(|e| e.to_string())?;
            out.push_str(&write_capacity(&name, &m));
            Ok(true)
        }
        Command::Verify {
            suite,
            max_size,
            max_arity,
            budget,
            seed,
            samples,
            json,
        } => {
            let report = verify::run(&VerifyConfig {
                suite,
                max_size,
                max_arity,
                budget,
                seed,
                samples,
            });
            if json {
                out.push_str(&report.to_json());
            } else {
                out.push_str(&report.to_text());
            }
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut out = String::new();
    let outcome = run(cli, &mut out);
    // A closed pipe (e.g. `| head`) is not an error worth reporting.
    let _ = std::io::stdout().write_all(out.as_bytes());
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
