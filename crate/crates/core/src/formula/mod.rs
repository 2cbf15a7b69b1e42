//! Prenex existential formulas: a block of `(E x)` quantifiers over the last
//! `k` variables of the ordering and a matrix split into equational
//! constraints and a quantifier-free remainder.

mod parse;

use std::fmt;

use crate::algnum::{sign_at, SamplePoint};
use crate::poly::Poly;

pub use parse::{parse, parse_poly, parse_qf, ParseError, ParseMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Lt,
    Le,
    Eq,
    Ne,
    Ge,
    Gt,
}

impl Relation {
    pub fn holds(self, sign: i32) -> bool {
        match self {
            Relation::Lt => sign < 0,
            Relation::Le => sign <= 0,
            Relation::Eq => sign == 0,
            Relation::Ne => sign != 0,
            Relation::Ge => sign >= 0,
            Relation::Gt => sign > 0,
        }
    }

    pub fn negate(self) -> Relation {
        match self {
            Relation::Lt => Relation::Ge,
            Relation::Le => Relation::Gt,
            Relation::Eq => Relation::Ne,
            Relation::Ne => Relation::Eq,
            Relation::Ge => Relation::Lt,
            Relation::Gt => Relation::Le,
        }
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Relation::Lt => "<",
            Relation::Le => "<=",
            Relation::Eq => "=",
            Relation::Ne => "/=",
            Relation::Ge => ">=",
            Relation::Gt => ">",
        }
    }
}

/// `poly rel 0`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub poly: Poly,
    pub rel: Relation,
}

/// Quantifier-free formula without negation; negation is pushed to atoms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Qf {
    True,
    False,
    Atom(Atom),
    And(Vec<Qf>),
    Or(Vec<Qf>),
}

impl Qf {
    /// Builds an atom, folding constant polynomials to truth values.
    pub fn atom(poly: Poly, rel: Relation) -> Qf {
        if poly.is_constant() {
            let s = poly.constant_value().sign();
            let s = match s {
                num_bigint::Sign::Minus => -1,
                num_bigint::Sign::NoSign => 0,
                num_bigint::Sign::Plus => 1,
            };
            return if rel.holds(s) { Qf::True } else { Qf::False };
        }
        Qf::Atom(Atom { poly, rel })
    }

    pub fn and(parts: Vec<Qf>) -> Qf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Qf::True => {}
                Qf::False => return Qf::False,
                Qf::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Qf::True,
            1 => out.pop().unwrap(),
            _ => Qf::And(out),
        }
    }

    pub fn or(parts: Vec<Qf>) -> Qf {
        let mut out = Vec::new();
        for p in parts {
            match p {
                Qf::False => {}
                Qf::True => return Qf::True,
                Qf::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Qf::False,
            1 => out.pop().unwrap(),
            _ => Qf::Or(out),
        }
    }

    pub fn negate(&self) -> Qf {
        match self {
            Qf::True => Qf::False,
            Qf::False => Qf::True,
            Qf::Atom(a) => Qf::Atom(Atom {
                poly: a.poly.clone(),
                rel: a.rel.negate(),
            }),
            Qf::And(v) => Qf::or(v.iter().map(Qf::negate).collect()),
            Qf::Or(v) => Qf::and(v.iter().map(Qf::negate).collect()),
        }
    }

    /// Evaluates with a caller-supplied sign oracle.
    pub fn eval_with(&self, sign: &mut dyn FnMut(&Poly) -> i32) -> bool {
        match self {
            Qf::True => true,
            Qf::False => false,
            Qf::Atom(a) => a.rel.holds(sign(&a.poly)),
            Qf::And(v) => v.iter().all(|q| q.eval_with(sign)),
            Qf::Or(v) => v.iter().any(|q| q.eval_with(sign)),
        }
    }

    pub fn atoms(&self) -> Vec<&Atom> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<&'a Atom>) {
        match self {
            Qf::Atom(a) => out.push(a),
            Qf::And(v) | Qf::Or(v) => v.iter().for_each(|q| q.collect_atoms(out)),
            Qf::True | Qf::False => {}
        }
    }

    /// Highest level among the atoms, 0 for constant formulas.
    pub fn level(&self) -> usize {
        self.atoms().iter().map(|a| a.poly.level()).max().unwrap_or(0)
    }

    /// Matrix text: clauses joined by `/\`, disjunctions in brackets.
    pub fn to_text(&self, names: &[String]) -> String {
        match self {
            Qf::True => "0 = 0".to_string(),
            Qf::False => "1 = 0".to_string(),
            Qf::Atom(a) => format!("{} {} 0", a.poly.to_text(names), a.rel.symbol()),
            Qf::And(v) => v
                .iter()
                .map(|q| q.to_text(names))
                .collect::<Vec<_>>()
                .join(" /\\ "),
            Qf::Or(v) => format!(
                "[{}]",
                v.iter()
                    .map(|q| q.to_text(names))
                    .collect::<Vec<_>>()
                    .join(" \\/ ")
            ),
        }
    }
}

/// Truth of a quantifier-free formula at a sample point, by exact signs.
pub fn evaluate_qf(psi: &Qf, point: &SamplePoint) -> bool {
    psi.eval_with(&mut |p| sign_at(p, point))
}

/// `(E x_{s+1}) ... (E x_n) [f_1 = 0 /\ ... /\ f_t = 0 /\ psi]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrenexFormula {
    pub vars: Vec<String>,
    pub k: usize,
    pub ecs: Vec<Poly>,
    pub psi: Qf,
    pub assumption: Option<Qf>,
}

impl PrenexFormula {
    pub fn n(&self) -> usize {
        self.vars.len()
    }

    /// Number of free variables (parameters).
    pub fn s(&self) -> usize {
        self.vars.len() - self.k
    }

    pub fn t(&self) -> usize {
        self.ecs.len()
    }

    /// The whole matrix as one quantifier-free formula.
    pub fn matrix(&self) -> Qf {
        let mut parts: Vec<Qf> = self
            .ecs
            .iter()
            .map(|f| Qf::atom(f.clone(), Relation::Eq))
            .collect();
        parts.push(self.psi.clone());
        Qf::and(parts)
    }

    /// Every polynomial occurring in the matrix, ECs first.
    pub fn polynomials(&self) -> Vec<Poly> {
        let mut out = self.ecs.clone();
        out.extend(self.psi.atoms().into_iter().map(|a| a.poly.clone()));
        out
    }

    /// Canonical text accepted by [`parse`].
    pub fn to_text(&self) -> String {
        let mut out = format!("vars: {};\n", self.vars.join(", "));
        if let Some(a) = &self.assumption {
            out.push_str(&format!("assume [{}]\n", a.to_text(&self.vars)));
        }
        for name in &self.vars[self.s()..] {
            out.push_str(&format!("(E {name})"));
        }
        let mut clauses: Vec<String> = self
            .ecs
            .iter()
            .map(|f| format!("{} = 0", f.to_text(&self.vars)))
            .collect();
        match &self.psi {
            Qf::True => {}
            psi => clauses.push(psi.to_text(&self.vars)),
        }
        if clauses.is_empty() {
            clauses.push("0 = 0".to_string());
        }
        out.push_str(&format!("[{}]\n", clauses.join(" /\\ ")));
        out
    }
}

impl fmt::Display for PrenexFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
