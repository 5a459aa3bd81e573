//! Weighted lattice polynomials and their boolean-vertex normal form.
//!
//! A [`Polynomial`] is a term built from variables, constants, meet and join.
//! Its [`NormalForm`] records the value at each boolean vertex; evaluating
//! the normal form as `⋁_b g(b) ∧ ⋀{x_i : b_i = 1}` reproduces the
//! polynomial everywhere on a distributive lattice.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use thiserror::Error;

use crate::compat::{boolean_vertex, table_len, CompatError, FunctionTable};
use crate::lattice::{ElementId, Lattice};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolynomialError {
    #[error("input has {got} coordinates, expected {expected}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("element {0} does not belong to the lattice")]
    ForeignElement(usize),
    #[error("variable {var} out of range for arity {arity}")]
    VariableOutOfRange { var: usize, arity: usize },
    #[error("normal form of arity {arity} needs {expected} coefficients, got {got}")]
    WrongLength {
        arity: usize,
        expected: usize,
        got: usize,
    },
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error(transparent)]
    Table(#[from] CompatError),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Const(ElementId),
    Meet(Box<Term>, Box<Term>),
    Join(Box<Term>, Box<Term>),
}

impl Term {
    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Box::new(a), Box::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Box::new(a), Box::new(b))
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Const(_) => None,
            Term::Meet(a, b) | Term::Join(a, b) => a.max_var().max(b.max_var()),
        }
    }

    fn max_const(&self) -> Option<usize> {
        match self {
            Term::Var(_) => None,
            Term::Const(c) => Some(c.index()),
            Term::Meet(a, b) | Term::Join(a, b) => a.max_const().max(b.max_const()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) | Term::Const(_) => 0,
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    fn eval(&self, lattice: &Lattice, x: &[ElementId]) -> ElementId {
        match self {
            Term::Var(i) => x[*i],
            Term::Const(c) => *c,
            Term::Meet(a, b) => lattice.meet(a.eval(lattice, x), b.eval(lattice, x)),
            Term::Join(a, b) => lattice.join(a.eval(lattice, x), b.eval(lattice, x)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "(var {i})"),
            Term::Const(c) => write!(f, "(const {c})"),
            Term::Meet(a, b) => write!(f, "(meet {a} {b})"),
            Term::Join(a, b) => write!(f, "(join {a} {b})"),
        }
    }
}

/// An n-ary weighted lattice polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    arity: usize,
    root: Term,
}

impl Polynomial {
    pub fn new(arity: usize, root: Term) -> Result<Self, PolynomialError> {
        if let Some(var) = root.max_var().filter(|&v| v >= arity) {
            return Err(PolynomialError::VariableOutOfRange { var, arity });
        }
        Ok(Polynomial { arity, root })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn root(&self) -> &Term {
        &self.root
    }

    /// Smallest arity that covers every variable in `root`.
    pub fn inferred_arity(root: &Term) -> usize {
        root.max_var().map_or(0, |v| v + 1)
    }

    fn check_constants(&self, lattice: &Lattice) -> Result<(), PolynomialError> {
        match self.root.max_const() {
            Some(c) if c >= lattice.size() => Err(PolynomialError::ForeignElement(c)),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, lattice: &Lattice, x: &[ElementId]) -> Result<ElementId, PolynomialError> {
        if x.len() != self.arity {
            return Err(PolynomialError::ArityMismatch {
                expected: self.arity,
                got: x.len(),
            });
        }
        if let Some(e) = x.iter().find(|e| !lattice.contains(**e)) {
            return Err(PolynomialError::ForeignElement(e.index()));
        }
        self.check_constants(lattice)?;
        Ok(self.root.eval(lattice, x))
    }

    /// Tabulates the polynomial over all of `L^n`.
    pub fn table(&self, lattice: &Lattice) -> Result<FunctionTable, PolynomialError> {
        self.check_constants(lattice)?;
        table_len(lattice.size(), self.arity)?;
        Ok(FunctionTable::from_fn(lattice, self.arity, |x| {
            self.root.eval(lattice, x)
        }))
    }

    /// Parses the S-expression syntax, inferring arity from the variables used.
    pub fn parse(text: &str) -> Result<Self, PolynomialError> {
        let root = parse_term(text)?;
        let arity = Polynomial::inferred_arity(&root);
        Polynomial::new(arity, root)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

impl FromStr for Polynomial {
    type Err = PolynomialError;
    fn from_str(s: &str) -> Result<Self, PolynomialError> {
        Polynomial::parse(s)
    }
}

/// Parses `(join (meet (const 1) (var 0)) (var 1))`-style terms.
pub fn parse_term(text: &str) -> Result<Term, PolynomialError> {
    let tokens = tokenize(text);
    let mut pos = 0;
    let term = parse_at(&tokens, &mut pos, text.len())?;
    if let Some(&(at, tok)) = tokens.get(pos) {
        return Err(PolynomialError::Syntax {
            pos: at,
            msg: format!("unexpected trailing `{tok}`"),
        });
    }
    Ok(term)
}

fn tokenize(text: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in text.char_indices() {
        if ch == '(' || ch == ')' || ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s, &text[s..i]));
            }
            if !ch.is_whitespace() {
                out.push((i, &text[i..i + 1]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s, &text[s..]));
    }
    out
}

fn parse_at(
    tokens: &[(usize, &str)],
    pos: &mut usize,
    end: usize,
) -> Result<Term, PolynomialError> {
    let syntax = |at: usize, msg: String| PolynomialError::Syntax { pos: at, msg };
    let mut next = |what: &str| -> Result<(usize, &str), PolynomialError> {
        let t = tokens
            .get(*pos)
            .copied()
            .ok_or_else(|| syntax(end, format!("expected {what}, found end of input")))?;
        *pos += 1;
        Ok(t)
    };
    let (at, open) = next("`(`")?;
    if open != "(" {
        return Err(syntax(at, format!("expected `(`, found `{open}`")));
    }
    let (at, head) = next("operator")?;
    let term = match head {
        "var" | "const" => {
            let (at, arg) = next("index")?;
            let n: usize = arg.parse().map_err(|_| {
                syntax(
                    at,
                    format!("expected a non-negative integer, found `{arg}`"),
                )
            })?;
            if head == "var" {
                Term::Var(n)
            } else {
                Term::Const(ElementId::new(n))
            }
        }
        "meet" | "join" => {
            let a = parse_at(tokens, pos, end)?;
            let b = parse_at(tokens, pos, end)?;
            if head == "meet" {
                Term::meet(a, b)
            } else {
                Term::join(a, b)
            }
        }
        other => return Err(syntax(at, format!("unknown operator `{other}`"))),
    };
    let (at, close) = tokens
        .get(*pos)
        .copied()
        .ok_or_else(|| syntax(end, "expected `)`, found end of input".to_string()))?;
    if close != ")" {
        return Err(syntax(at, format!("expected `)`, found `{close}`")));
    }
    *pos += 1;
    Ok(term)
}

/// Coefficient table `g(b)` over all boolean vertices `b ∈ {0,1}^n`,
/// indexed by bitmask with bit `i` for coordinate `i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NormalForm {
    arity: usize,
    coefficients: Vec<ElementId>,
}

impl NormalForm {
    pub fn from_coefficients(
        arity: usize,
        coefficients: Vec<ElementId>,
    ) -> Result<Self, PolynomialError> {
        let expected = u32::try_from(arity)
            .ok()
            .and_then(|a| 1usize.checked_shl(a))
            .ok_or(PolynomialError::WrongLength {
                arity,
                expected: usize::MAX,
                got: coefficients.len(),
            })?;
        if coefficients.len() != expected {
            return Err(PolynomialError::WrongLength {
                arity,
                expected,
                got: coefficients.len(),
            });
        }
        Ok(NormalForm {
            arity,
            coefficients,
        })
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn coefficients(&self) -> &[ElementId] {
        &self.coefficients
    }

    pub fn coefficient(&self, mask: usize) -> ElementId {
        self.coefficients[mask]
    }

    /// `b ⊆ b'` implies `g(b) ≤ g(b')`.
    pub fn is_monotone(&self, lattice: &Lattice) -> bool {
        (0..self.coefficients.len()).all(|m| {
            (0..self.arity)
                .filter(|i| m >> i & 1 == 0)
                .all(|i| lattice.leq(self.coefficients[m], self.coefficients[m | 1 << i]))
        })
    }
}

/// Values of `p` at the boolean vertices.
pub fn to_normal_form(lattice: &Lattice, p: &Polynomial) -> Result<NormalForm, PolynomialError> {
    let coefficients = (0..1usize << p.arity)
        .map(|mask| p.eval(lattice, &boolean_vertex(lattice, p.arity, mask)))
        .collect::<Result<_, _>>()?;
    NormalForm::from_coefficients(p.arity, coefficients)
}

/// `⋁_b g(b) ∧ ⋀{x_i : b_i = 1}`, with the empty meet equal to top.
pub fn eval_normal_form(
    lattice: &Lattice,
    nf: &NormalForm,
    x: &[ElementId],
) -> Result<ElementId, PolynomialError> {
    if x.len() != nf.arity {
        return Err(PolynomialError::ArityMismatch {
            expected: nf.arity,
            got: x.len(),
        });
    }
    if let Some(e) = x
        .iter()
        .chain(&nf.coefficients)
        .find(|e| !lattice.contains(**e))
    {
        return Err(PolynomialError::ForeignElement(e.index()));
    }
    Ok(
        lattice.join_all(nf.coefficients.iter().enumerate().map(|(mask, &g)| {
            let vars = (0..nf.arity).filter(|i| mask >> i & 1 == 1).map(|i| x[i]);
            lattice.meet(g, lattice.meet_all(vars))
        })),
    )
}

/// Writes the normal form back as a term: a join over masks of
/// `const(g(b)) ∧ ⋀ var(i)`.
pub fn normal_form_to_polynomial(nf: &NormalForm) -> Polynomial {
    let summand = |mask: usize| {
        (0..nf.arity)
            .filter(|i| mask >> i & 1 == 1)
            .fold(Term::Const(nf.coefficients[mask]), |acc, i| {
                Term::meet(acc, Term::Var(i))
            })
    };
    let root =
        (1..nf.coefficients.len()).fold(summand(0), |acc, mask| Term::join(acc, summand(mask)));
    Polynomial {
        arity: nf.arity,
        root,
    }
}

/// Checks monotonicity against the cover-adjacent input pairs only
/// (one coordinate moved up by a cover); transitivity does the rest.
pub fn is_monotone(lattice: &Lattice, f: &FunctionTable) -> bool {
    if !f.fits(lattice) {
        return false;
    }
    let mut ok = true;
    f.for_each_input(|idx, x| {
        if !ok {
            return;
        }
        for (k, &xk) in x.iter().enumerate() {
            let stride = f.stride(k);
            for &up in lattice.upper_covers(xk) {
                let other = idx - xk.index() * stride + up.index() * stride;
                if !lattice.leq(f.value_at(idx), f.value_at(other)) {
                    ok = false;
                    return;
                }
            }
        }
    });
    ok
}

/// A random term over `arity` variables with depth at most `max_depth`.
pub fn random_term<R: Rng + ?Sized>(
    rng: &mut R,
    lattice: &Lattice,
    arity: usize,
    max_depth: usize,
) -> Term {
    let leaf = |rng: &mut R| {
        if arity > 0 && rng.gen_bool(0.7) {
            Term::Var(rng.gen_range(0..arity))
        } else {
            Term::Const(ElementId::new(rng.gen_range(0..lattice.size())))
        }
    };
    if max_depth == 0 || rng.gen_bool(0.25) {
        return leaf(rng);
    }
    let a = random_term(rng, lattice, arity, max_depth - 1);
    let b = random_term(rng, lattice, arity, max_depth - 1);
    if rng.gen_bool(0.5) {
        Term::meet(a, b)
    } else {
        Term::join(a, b)
    }
}

pub fn random_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    lattice: &Lattice,
    arity: usize,
    max_depth: usize,
) -> Polynomial {
    Polynomial {
        arity,
        root: random_term(rng, lattice, arity, max_depth),
    }
}
