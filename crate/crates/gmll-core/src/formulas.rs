//! Formula syntax and structural duality.
//!
//! Formulas are kept in negation normal form: negation occurs on atoms
//! only, and `~` applied to a compound is rewritten through the duality
//! `~(C(A1,...,An)) = C*(~A1,...,~An)`. The binary built-ins keep their
//! own constructors (`tensor`, `par`); `tensor2(A,B)` written in the text
//! grammar is normalized to `(A * B)`.
//!
//! Concrete grammar (whitespace insignificant):
//!
//! ```text
//! formula := IDENT                      atom
//!          | '~' formula                dual
//!          | '(' formula '*' formula ')'
//!          | '(' formula '|' formula ')'
//!          | NAME '(' formula,... ')'   generalized application
//! ```
//!
//! A connective name may end in `*` (e.g. `G*`); the trailing star is
//! consumed only when the name is registered, so `(A*(B|C))` still parses
//! as a tensor.

use crate::catalog::Catalog;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    Atom(String),
    NegAtom(String),
    Tensor(Box<Formula>, Box<Formula>),
    Par(Box<Formula>, Box<Formula>),
    Apply(String, Vec<Formula>),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("unknown connective `{0}`")]
    UnknownConnective(String),
    #[error("connective `{name}` expects {expected} arguments, got {got}")]
    ArityMismatch {
        name: String,
        expected: usize,
        got: usize,
    },
}

impl Formula {
    pub fn atom(name: impl Into<String>) -> Self {
        Formula::Atom(name.into())
    }

    pub fn neg_atom(name: impl Into<String>) -> Self {
        Formula::NegAtom(name.into())
    }

    pub fn tensor(l: Formula, r: Formula) -> Self {
        Formula::Tensor(Box::new(l), Box::new(r))
    }

    pub fn par(l: Formula, r: Formula) -> Self {
        Formula::Par(Box::new(l), Box::new(r))
    }

    /// Builds an application, normalizing the binary built-in names to
    /// the dedicated tensor/par constructors.
    pub fn apply(name: impl Into<String>, args: Vec<Formula>) -> Self {
        let name = name.into();
        match (name.as_str(), args.len()) {
            ("tensor2", 2) => {
                let mut it = args.into_iter();
                let l = it.next().unwrap();
                let r = it.next().unwrap();
                Formula::tensor(l, r)
            }
            ("par2", 2) => {
                let mut it = args.into_iter();
                let l = it.next().unwrap();
                let r = it.next().unwrap();
                Formula::par(l, r)
            }
            _ => Formula::Apply(name, args),
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::NegAtom(_))
    }

    /// The catalog name of the outermost connective, when compound.
    pub fn connective_name(&self) -> Option<&str> {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => None,
            Formula::Tensor(_, _) => Some("tensor2"),
            Formula::Par(_, _) => Some("par2"),
            Formula::Apply(name, _) => Some(name),
        }
    }

    /// Immediate subformulas as owned clones, in argument order.
    pub fn argument_vec(&self) -> Vec<Formula> {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => Vec::new(),
            Formula::Tensor(l, r) | Formula::Par(l, r) => vec![(**l).clone(), (**r).clone()],
            Formula::Apply(_, args) => args.clone(),
        }
    }

    /// Number of connective occurrences (atoms count zero).
    pub fn connective_count(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => 0,
            Formula::Tensor(l, r) | Formula::Par(l, r) => {
                1 + l.connective_count() + r.connective_count()
            }
            Formula::Apply(_, args) => 1 + args.iter().map(Formula::connective_count).sum::<usize>(),
        }
    }

    /// Symbol size: atoms count one, compounds one plus their arguments.
    pub fn size(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::NegAtom(_) => 1,
            Formula::Tensor(l, r) | Formula::Par(l, r) => 1 + l.size() + r.size(),
            Formula::Apply(_, args) => 1 + args.iter().map(Formula::size).sum::<usize>(),
        }
    }

    /// Structural dual: swaps atom/negated atom, tensor/par, and each
    /// generalized connective with its registered dual.
    pub fn dual(&self, catalog: &Catalog) -> Result<Formula, FormulaError> {
        Ok(match self {
            Formula::Atom(a) => Formula::NegAtom(a.clone()),
            Formula::NegAtom(a) => Formula::Atom(a.clone()),
            Formula::Tensor(l, r) => Formula::par(l.dual(catalog)?, r.dual(catalog)?),
            Formula::Par(l, r) => Formula::tensor(l.dual(catalog)?, r.dual(catalog)?),
            Formula::Apply(name, args) => {
                let conn = catalog
                    .get(name)
                    .ok_or_else(|| FormulaError::UnknownConnective(name.clone()))?;
                let dual_args = args
                    .iter()
                    .map(|a| a.dual(catalog))
                    .collect::<Result<Vec<_>, _>>()?;
                Formula::apply(conn.dual_name.clone(), dual_args)
            }
        })
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Atom(a) => write!(f, "{a}"),
            Formula::NegAtom(a) => write!(f, "~{a}"),
            Formula::Tensor(l, r) => write!(f, "({l} * {r})"),
            Formula::Par(l, r) => write!(f, "({l} | {r})"),
            Formula::Apply(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// A one-sided sequent: an ordered list of formulas with multiset
/// semantics. Order matters only as presentation; use [`Sequent::multiset_eq`]
/// for logical equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sequent(pub Vec<Formula>);

impl Sequent {
    pub fn new(formulas: Vec<Formula>) -> Self {
        Sequent(formulas)
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn sorted(&self) -> Vec<Formula> {
        let mut v = self.0.clone();
        v.sort();
        v
    }

    pub fn multiset_eq(&self, other: &Sequent) -> bool {
        self.sorted() == other.sorted()
    }
}

impl fmt::Display for Sequent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, formula) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{formula}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("parse error at {pos}: {message}")]
pub struct ParseError {
    pub pos: usize,
    pub message: String,
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    catalog: &'a Catalog,
}

impl<'a> Parser<'a> {
    fn new(text: &str, catalog: &'a Catalog) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            catalog,
        }
    }

    fn err<T>(&self, message: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError {
            pos: self.pos,
            message: message.into(),
        })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => self.err(format!("expected `{c}`, found `{got}`")),
            None => self.err(format!("expected `{c}`, found end of input")),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.chars.len() {
            let c = self.chars[self.pos];
            if c.is_alphanumeric() || c == '_' {
                self.pos += 1;
            } else {
                break;
            }
        }
        if self.pos == start {
            return self.err("expected an identifier");
        }
        Ok(self.chars[start..self.pos].iter().collect())
    }

    fn formula(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            None => self.err("expected a formula, found end of input"),
            Some('~') => {
                self.bump();
                let inner = self.formula()?;
                match inner {
                    Formula::Atom(a) => Ok(Formula::NegAtom(a)),
                    Formula::NegAtom(a) => Ok(Formula::Atom(a)),
                    other => other.dual(self.catalog).map_err(|e| ParseError {
                        pos: self.pos,
                        message: e.to_string(),
                    }),
                }
            }
            Some('(') => {
                self.bump();
                let left = self.formula()?;
                let op = match self.peek() {
                    Some('*') => {
                        self.bump();
                        '*'
                    }
                    Some('|') => {
                        self.bump();
                        '|'
                    }
                    _ => return self.err("expected `*` or `|`"),
                };
                let right = self.formula()?;
                self.expect(')')?;
                Ok(if op == '*' {
                    Formula::tensor(left, right)
                } else {
                    Formula::par(left, right)
                })
            }
            Some(c) if c.is_alphanumeric() || c == '_' => {
                let name = self.ident()?;
                // Trailing `*` belongs to the name only when the starred
                // name is a registered connective applied to arguments;
                // otherwise it is the tensor operator of an enclosing pair.
                let mut conn_name = None;
                if self.chars.get(self.pos) == Some(&'*') {
                    let starred = format!("{name}*");
                    let after = self
                        .chars
                        .iter()
                        .skip(self.pos + 1)
                        .find(|c| !c.is_whitespace());
                    if after == Some(&'(') && self.catalog.contains(&starred) {
                        self.pos += 1;
                        conn_name = Some(starred);
                    }
                } else if self.peek() == Some('(') {
                    conn_name = Some(name.clone());
                }
                match conn_name {
                    None => Ok(Formula::Atom(name)),
                    Some(conn_name) => {
                        let name_pos = self.pos;
                        self.expect('(')?;
                        let mut args = vec![self.formula()?];
                        while self.peek() == Some(',') {
                            self.bump();
                            args.push(self.formula()?);
                        }
                        self.expect(')')?;
                        let conn = self.catalog.get(&conn_name).ok_or(ParseError {
                            pos: name_pos,
                            message: format!("unknown connective `{conn_name}`"),
                        })?;
                        if conn.arity != args.len() {
                            return Err(ParseError {
                                pos: name_pos,
                                message: format!(
                                    "connective `{conn_name}` expects {} arguments, got {}",
                                    conn.arity,
                                    args.len()
                                ),
                            });
                        }
                        Ok(Formula::apply(conn_name, args))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected `{c}`")),
        }
    }

    fn end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            return self.err("trailing input after formula");
        }
        Ok(())
    }
}

/// Parses a single formula against the given catalog.
pub fn parse_formula(text: &str, catalog: &Catalog) -> Result<Formula, ParseError> {
    let mut p = Parser::new(text, catalog);
    let f = p.formula()?;
    p.end()?;
    Ok(f)
}

/// Parses a comma-separated sequent.
pub fn parse_sequent(text: &str, catalog: &Catalog) -> Result<Sequent, ParseError> {
    let mut p = Parser::new(text, catalog);
    let mut formulas = vec![p.formula()?];
    while p.peek() == Some(',') {
        p.bump();
        formulas.push(p.formula()?);
    }
    p.end()?;
    Ok(Sequent(formulas))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::Catalog;
    use proptest::prelude::*;

    fn cat() -> Catalog {
        Catalog::builtin()
    }

    #[test]
    fn dual_examples() {
        let c = cat();
        assert_eq!(Formula::atom("A").dual(&c).unwrap(), Formula::neg_atom("A"));
        assert_eq!(
            Formula::tensor(Formula::atom("A"), Formula::atom("B"))
                .dual(&c)
                .unwrap(),
            Formula::par(Formula::neg_atom("A"), Formula::neg_atom("B"))
        );
        let g = Formula::apply(
            "G",
            vec![
                Formula::atom("A"),
                Formula::atom("B"),
                Formula::atom("C"),
                Formula::atom("D"),
            ],
        );
        let dual = g.dual(&c).unwrap();
        assert_eq!(
            dual,
            Formula::apply(
                "G*",
                vec![
                    Formula::neg_atom("A"),
                    Formula::neg_atom("B"),
                    Formula::neg_atom("C"),
                    Formula::neg_atom("D"),
                ],
            )
        );
        assert_eq!(dual.dual(&c).unwrap(), g);
    }

    #[test]
    fn dual_rejects_unregistered() {
        let c = cat();
        let f = Formula::Apply("Nope".into(), vec![Formula::atom("A")]);
        assert!(f.dual(&c).is_err());
    }

    #[test]
    fn parse_examples() {
        let c = cat();
        assert_eq!(
            parse_formula("(A * B)", &c).unwrap(),
            Formula::tensor(Formula::atom("A"), Formula::atom("B"))
        );
        assert_eq!(
            parse_formula("~(A * B)", &c).unwrap(),
            Formula::par(Formula::neg_atom("A"), Formula::neg_atom("B"))
        );
        assert_eq!(
            parse_formula("G(A,B,C,D)", &c).unwrap(),
            Formula::apply(
                "G",
                vec![
                    Formula::atom("A"),
                    Formula::atom("B"),
                    Formula::atom("C"),
                    Formula::atom("D"),
                ],
            )
        );
    }

    #[test]
    fn parse_starred_names_and_tensor_disambiguation() {
        let c = cat();
        let f = parse_formula("G*(~A,~B,~C,~D)", &c).unwrap();
        assert_eq!(f.connective_name(), Some("G*"));
        // `A*` is not a connective, so the star is the tensor operator
        let g = parse_formula("(A*(B|C))", &c).unwrap();
        assert_eq!(
            g,
            Formula::tensor(
                Formula::atom("A"),
                Formula::par(Formula::atom("B"), Formula::atom("C"))
            )
        );
    }

    #[test]
    fn parse_normalizes_binary_builtins() {
        let c = cat();
        assert_eq!(
            parse_formula("tensor2(A,B)", &c).unwrap(),
            parse_formula("(A * B)", &c).unwrap()
        );
        assert_eq!(
            parse_formula("par2(A,B)", &c).unwrap(),
            parse_formula("(A | B)", &c).unwrap()
        );
    }

    #[test]
    fn parse_errors_carry_positions() {
        let c = cat();
        let err = parse_formula("(A *", &c).unwrap_err();
        assert!(err.pos >= 4, "{err}");
        assert!(parse_formula("G(A,B)", &c).is_err()); // arity
        assert!(parse_formula("H(A,B)", &c).is_err()); // unknown
        assert!(parse_formula("(A * B) C", &c).is_err()); // trailing
    }

    #[test]
    fn parse_sequent_splits_on_commas() {
        let c = cat();
        let s = parse_sequent("G(A,B,C,D), ~A, ~B, ~C, ~D", &c).unwrap();
        assert_eq!(s.len(), 5);
    }

    fn arb_formula() -> impl Strategy<Value = Formula> {
        let leaf = prop_oneof![
            "[A-E]".prop_map(Formula::Atom),
            "[A-E]".prop_map(Formula::NegAtom),
        ];
        leaf.prop_recursive(4, 24, 4, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone())
                    .prop_map(|(l, r)| Formula::tensor(l, r)),
                (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::par(l, r)),
                proptest::collection::vec(inner.clone(), 3)
                    .prop_map(|args| Formula::Apply("C3".into(), args)),
                proptest::collection::vec(inner, 4)
                    .prop_map(|args| Formula::Apply("G".into(), args)),
            ]
        })
    }

    proptest! {
        #[test]
        fn dual_is_an_involution(f in arb_formula()) {
            let c = cat();
            prop_assert_eq!(f.dual(&c).unwrap().dual(&c).unwrap(), f);
        }

        #[test]
        fn print_parse_round_trip(f in arb_formula()) {
            let c = cat();
            let text = f.to_string();
            prop_assert_eq!(parse_formula(&text, &c).unwrap(), f);
        }
    }
}
