//! Negation-normal-form modal formulas, their text syntax and complexity measures.
//!
//! Negation only ever appears on atoms: `~p3` is a literal, and the negation of
//! a compound formula is computed with [`Formula::nnf_negate`].
//!
//! Text grammar (whitespace-insensitive):
//!
//! ```text
//! phi ::= "T" | "F" | VAR | "~" VAR
//!       | "(" phi "|" phi ")" | "(" phi "&" phi ")"
//!       | "<>" phi | "[]" phi | "E" phi | "A" phi
//! VAR ::= "p" [1-9][0-9]*
//! ```
//!
//! A redundant pair of parentheses around any formula is accepted on input but
//! never produced on output.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Highest variable index accepted; valuations are stored as 64-bit masks.
pub const MAX_VAR: u32 = 64;

/// A propositional variable `p<index>`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var(u32);

impl Var {
    pub fn new(index: u32) -> Var {
        assert!(
            (1..=MAX_VAR).contains(&index),
            "variable index {index} out of range"
        );
        Var(index)
    }

    pub fn index(self) -> u32 {
        self.0
    }

    /// Bit of this variable in a valuation mask.
    pub fn mask(self) -> u64 {
        1u64 << (self.0 - 1)
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p{}", self.0)
    }
}

/// The two modal languages: the basic one, and its extension by the
/// universal modalities `E` (somewhere) and `A` (everywhere).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Language {
    Basic,
    Global,
}

impl Language {
    pub fn name(self) -> &'static str {
        match self {
            Language::Basic => "basic",
            Language::Global => "global",
        }
    }

    pub fn allows_global(self) -> bool {
        self == Language::Global
    }
}

impl FromStr for Language {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "basic" | "L" | "ld" => Ok(Language::Basic),
            "global" | "LA" | "lda" => Ok(Language::Global),
            other => Err(Error::Usage(format!("unknown language `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Top,
    Bot,
    Pos(Var),
    Neg(Var),
    Or(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Dia(Box<Formula>),
    Box(Box<Formula>),
    Exists(Box<Formula>),
    Forall(Box<Formula>),
}

/// Node symbols other than literals.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Symbol {
    Bot,
    Top,
    Or,
    And,
    Dia,
    Box,
    Exists,
    Forall,
}

impl Symbol {
    pub const ALL: [Symbol; 8] = [
        Symbol::Bot,
        Symbol::Top,
        Symbol::Or,
        Symbol::And,
        Symbol::Dia,
        Symbol::Box,
        Symbol::Exists,
        Symbol::Forall,
    ];

    pub fn slot(self) -> usize {
        self as usize
    }

    pub fn is_global(self) -> bool {
        matches!(self, Symbol::Exists | Symbol::Forall)
    }

    pub fn is_modal(self) -> bool {
        matches!(
            self,
            Symbol::Dia | Symbol::Box | Symbol::Exists | Symbol::Forall
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Symbol::Bot => "bot",
            Symbol::Top => "top",
            Symbol::Or => "or",
            Symbol::And => "and",
            Symbol::Dia => "dia",
            Symbol::Box => "box",
            Symbol::Exists => "exists",
            Symbol::Forall => "forall",
        }
    }

    pub fn glyph(self) -> &'static str {
        match self {
            Symbol::Bot => "F",
            Symbol::Top => "T",
            Symbol::Or => "|",
            Symbol::And => "&",
            Symbol::Dia => "<>",
            Symbol::Box => "[]",
            Symbol::Exists => "E",
            Symbol::Forall => "A",
        }
    }

    /// The De Morgan dual.
    pub fn dual(self) -> Symbol {
        match self {
            Symbol::Bot => Symbol::Top,
            Symbol::Top => Symbol::Bot,
            Symbol::Or => Symbol::And,
            Symbol::And => Symbol::Or,
            Symbol::Dia => Symbol::Box,
            Symbol::Box => Symbol::Dia,
            Symbol::Exists => Symbol::Forall,
            Symbol::Forall => Symbol::Exists,
        }
    }
}

/// A complexity measure on formulas.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MeasureKind {
    /// Number of nodes of the syntax tree, leaves included.
    Length,
    /// Maximal nesting of modal operators (`<>`, `[]`, `E`, `A`).
    ModalDepth,
    /// Number of distinct variables.
    VarCount,
    /// Number of occurrences of one symbol.
    Count(Symbol),
}

impl MeasureKind {
    /// Every measure that applies to formulas of `lang`: nine for the basic
    /// language, eleven with the universal modalities.
    pub fn applicable(lang: Language) -> Vec<MeasureKind> {
        let mut kinds = vec![
            MeasureKind::Length,
            MeasureKind::ModalDepth,
            MeasureKind::VarCount,
        ];
        kinds.extend(
            Symbol::ALL
                .iter()
                .filter(|s| lang.allows_global() || !s.is_global())
                .map(|&s| MeasureKind::Count(s)),
        );
        kinds
    }

    pub fn applies_to(self, lang: Language) -> bool {
        match self {
            MeasureKind::Count(s) => lang.allows_global() || !s.is_global(),
            _ => true,
        }
    }

    pub fn name(self) -> String {
        match self {
            MeasureKind::Length => "length".into(),
            MeasureKind::ModalDepth => "depth".into(),
            MeasureKind::VarCount => "vars".into(),
            MeasureKind::Count(s) => s.name().into(),
        }
    }
}

impl fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for MeasureKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "length" | "size" => MeasureKind::Length,
            "depth" | "modal-depth" => MeasureKind::ModalDepth,
            "vars" | "var-count" => MeasureKind::VarCount,
            other => MeasureKind::Count(
                Symbol::ALL
                    .into_iter()
                    .find(|sym| sym.name() == other)
                    .ok_or_else(|| Error::Usage(format!("unknown measure `{other}`")))?,
            ),
        })
    }
}

/// All measures of one formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct MeasureVector {
    pub length: u32,
    pub depth: u32,
    pub vars: u32,
    pub counts: [u32; 8],
}

impl MeasureVector {
    pub fn get(&self, kind: MeasureKind) -> u32 {
        match kind {
            MeasureKind::Length => self.length,
            MeasureKind::ModalDepth => self.depth,
            MeasureKind::VarCount => self.vars,
            MeasureKind::Count(s) => self.counts[s.slot()],
        }
    }

    /// The applicable components for `lang`, in [`MeasureKind::applicable`] order.
    pub fn entries(&self, lang: Language) -> Vec<(MeasureKind, u32)> {
        MeasureKind::applicable(lang)
            .into_iter()
            .map(|k| (k, self.get(k)))
            .collect()
    }
}

impl Formula {
    pub fn pos(index: u32) -> Formula {
        Formula::Pos(Var::new(index))
    }

    pub fn neg(index: u32) -> Formula {
        Formula::Neg(Var::new(index))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn dia(a: Formula) -> Formula {
        Formula::Dia(Box::new(a))
    }

    pub fn boxed(a: Formula) -> Formula {
        Formula::Box(Box::new(a))
    }

    pub fn exists(a: Formula) -> Formula {
        Formula::Exists(Box::new(a))
    }

    pub fn forall(a: Formula) -> Formula {
        Formula::Forall(Box::new(a))
    }

    /// `<>` applied `times` times.
    pub fn dia_n(times: usize, a: Formula) -> Formula {
        (0..times).fold(a, |f, _| Formula::dia(f))
    }

    /// `[]` applied `times` times.
    pub fn box_n(times: usize, a: Formula) -> Formula {
        (0..times).fold(a, |f, _| Formula::boxed(f))
    }

    /// Right-associated disjunction; `F` when empty.
    pub fn big_or(items: Vec<Formula>) -> Formula {
        items
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::or(f, acc))
            .unwrap_or(Formula::Bot)
    }

    /// Right-associated conjunction; `T` when empty.
    pub fn big_and(items: Vec<Formula>) -> Formula {
        items
            .into_iter()
            .rev()
            .reduce(|acc, f| Formula::and(f, acc))
            .unwrap_or(Formula::Top)
    }

    /// Root symbol, or `None` for a literal.
    pub fn symbol(&self) -> Option<Symbol> {
        Some(match self {
            Formula::Top => Symbol::Top,
            Formula::Bot => Symbol::Bot,
            Formula::Pos(_) | Formula::Neg(_) => return None,
            Formula::Or(..) => Symbol::Or,
            Formula::And(..) => Symbol::And,
            Formula::Dia(_) => Symbol::Dia,
            Formula::Box(_) => Symbol::Box,
            Formula::Exists(_) => Symbol::Exists,
            Formula::Forall(_) => Symbol::Forall,
        })
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Top | Formula::Bot | Formula::Pos(_) | Formula::Neg(_) => vec![],
            Formula::Or(a, b) | Formula::And(a, b) => vec![a, b],
            Formula::Dia(a) | Formula::Box(a) | Formula::Exists(a) | Formula::Forall(a) => {
                vec![a]
            }
        }
    }

    /// The smallest language containing this formula.
    pub fn language(&self) -> Language {
        if self.contains_global() {
            Language::Global
        } else {
            Language::Basic
        }
    }

    fn contains_global(&self) -> bool {
        match self {
            Formula::Exists(_) | Formula::Forall(_) => true,
            _ => self.children().into_iter().any(Formula::contains_global),
        }
    }

    /// Bit mask of the variables occurring in the formula.
    pub fn var_mask(&self) -> u64 {
        match self {
            Formula::Pos(v) | Formula::Neg(v) => v.mask(),
            _ => self.children().into_iter().fold(0, |m, c| m | c.var_mask()),
        }
    }

    /// Occurring variables in increasing index order.
    pub fn vars(&self) -> Vec<Var> {
        let mask = self.var_mask();
        (1..=MAX_VAR)
            .filter(|i| mask >> (i - 1) & 1 == 1)
            .map(Var)
            .collect()
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        1 + self.children().into_iter().map(Formula::len).sum::<usize>()
    }

    pub fn modal_depth(&self) -> u32 {
        let below = self
            .children()
            .into_iter()
            .map(Formula::modal_depth)
            .max()
            .unwrap_or(0);
        below + self.symbol().is_some_and(Symbol::is_modal) as u32
    }

    pub fn measure(&self, kind: MeasureKind) -> u32 {
        match kind {
            MeasureKind::Length => self.len() as u32,
            MeasureKind::ModalDepth => self.modal_depth(),
            MeasureKind::VarCount => self.var_mask().count_ones(),
            MeasureKind::Count(s) => self.count_symbol(s),
        }
    }

    fn count_symbol(&self, s: Symbol) -> u32 {
        (self.symbol() == Some(s)) as u32
            + self
                .children()
                .into_iter()
                .map(|c| c.count_symbol(s))
                .sum::<u32>()
    }

    pub fn measure_all(&self) -> MeasureVector {
        let mut counts = [0u32; 8];
        for s in Symbol::ALL {
            counts[s.slot()] = self.count_symbol(s);
        }
        MeasureVector {
            length: self.len() as u32,
            depth: self.modal_depth(),
            vars: self.var_mask().count_ones(),
            counts,
        }
    }

    /// NNF of the negation: swaps dual symbols and literal polarities.
    pub fn nnf_negate(&self) -> Formula {
        match self {
            Formula::Top => Formula::Bot,
            Formula::Bot => Formula::Top,
            Formula::Pos(v) => Formula::Neg(*v),
            Formula::Neg(v) => Formula::Pos(*v),
            Formula::Or(a, b) => Formula::and(a.nnf_negate(), b.nnf_negate()),
            Formula::And(a, b) => Formula::or(a.nnf_negate(), b.nnf_negate()),
            Formula::Dia(a) => Formula::boxed(a.nnf_negate()),
            Formula::Box(a) => Formula::dia(a.nnf_negate()),
            Formula::Exists(a) => Formula::forall(a.nnf_negate()),
            Formula::Forall(a) => Formula::exists(a.nnf_negate()),
        }
    }

    /// Renames variables to `p1, p2, ...` in order of first occurrence.
    pub fn canonical(&self) -> Formula {
        let mut order: Vec<Var> = Vec::new();
        self.collect_first_occurrences(&mut order);
        self.rename(&|v| {
            let pos = order.iter().position(|&w| w == v).expect("collected");
            Var(pos as u32 + 1)
        })
    }

    fn collect_first_occurrences(&self, order: &mut Vec<Var>) {
        match self {
            Formula::Pos(v) | Formula::Neg(v) => {
                if !order.contains(v) {
                    order.push(*v);
                }
            }
            _ => {
                for c in self.children() {
                    c.collect_first_occurrences(order);
                }
            }
        }
    }

    pub fn rename(&self, f: &dyn Fn(Var) -> Var) -> Formula {
        match self {
            Formula::Top => Formula::Top,
            Formula::Bot => Formula::Bot,
            Formula::Pos(v) => Formula::Pos(f(*v)),
            Formula::Neg(v) => Formula::Neg(f(*v)),
            Formula::Or(a, b) => Formula::or(a.rename(f), b.rename(f)),
            Formula::And(a, b) => Formula::and(a.rename(f), b.rename(f)),
            Formula::Dia(a) => Formula::dia(a.rename(f)),
            Formula::Box(a) => Formula::boxed(a.rename(f)),
            Formula::Exists(a) => Formula::exists(a.rename(f)),
            Formula::Forall(a) => Formula::forall(a.rename(f)),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Top => f.write_str("T"),
            Formula::Bot => f.write_str("F"),
            Formula::Pos(v) => write!(f, "{v}"),
            Formula::Neg(v) => write!(f, "~{v}"),
            Formula::Or(a, b) => write!(f, "({a} | {b})"),
            Formula::And(a, b) => write!(f, "({a} & {b})"),
            Formula::Dia(a) => write!(f, "<> {a}"),
            Formula::Box(a) => write!(f, "[] {a}"),
            Formula::Exists(a) => write!(f, "E {a}"),
            Formula::Forall(a) => write!(f, "A {a}"),
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

/// Parses a formula of either language.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let f = p.formula()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(f)
}

/// Parses a formula and rejects universal modalities when `lang` is basic.
pub fn parse_in(text: &str, lang: Language) -> Result<Formula> {
    let f = parse(text)?;
    if !lang.allows_global() && f.language() == Language::Global {
        return Err(Error::UniversalInBasic);
    }
    Ok(f)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Syntax {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn formula(&mut self) -> Result<Formula> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'T') => {
                self.pos += 1;
                Ok(Formula::Top)
            }
            Some(b'F') => {
                self.pos += 1;
                Ok(Formula::Bot)
            }
            Some(b'p') => Ok(Formula::Pos(self.var()?)),
            Some(b'~') => {
                self.pos += 1;
                if self.peek() != Some(b'p') {
                    return Err(self.error("negation is only allowed in front of a variable"));
                }
                Ok(Formula::Neg(self.var()?))
            }
            Some(b'E') => {
                self.pos += 1;
                Ok(Formula::exists(self.formula()?))
            }
            Some(b'A') => {
                self.pos += 1;
                Ok(Formula::forall(self.formula()?))
            }
            Some(b'<') => {
                if !self.eat("<>") {
                    return Err(self.error("expected `<>`"));
                }
                Ok(Formula::dia(self.formula()?))
            }
            Some(b'[') => {
                if !self.eat("[]") {
                    return Err(self.error("expected `[]`"));
                }
                Ok(Formula::boxed(self.formula()?))
            }
            Some(b'(') => {
                self.pos += 1;
                let left = self.formula()?;
                let f = match self.peek() {
                    Some(b'|') => {
                        self.pos += 1;
                        Formula::or(left, self.formula()?)
                    }
                    Some(b'&') => {
                        self.pos += 1;
                        Formula::and(left, self.formula()?)
                    }
                    // redundant grouping
                    Some(b')') => left,
                    _ => return Err(self.error("expected `|`, `&` or `)`")),
                };
                if !self.eat(")") {
                    return Err(self.error("expected `)`"));
                }
                Ok(f)
            }
            Some(_) => Err(self.error("unexpected character")),
        }
    }

    fn var(&mut self) -> Result<Var> {
        debug_assert_eq!(self.src[self.pos], b'p');
        self.pos += 1;
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let digits = &self.src[start..self.pos];
        if digits.is_empty() || digits[0] == b'0' {
            self.pos = start;
            return Err(
                self.error("variable index must be a positive integer without leading zeros")
            );
        }
        let index: u32 = std::str::from_utf8(digits)
            .ok()
            .and_then(|d| d.parse().ok())
            .filter(|&i| i <= MAX_VAR)
            .ok_or_else(|| Error::Syntax {
                pos: start,
                msg: format!("variable index above {MAX_VAR}"),
            })?;
        Ok(Var(index))
    }
}
