use std::fmt;

use super::Ltl;

/// Positive Boolean combination of threshold atoms `P>r [ body ]`.
///
/// Only the strict `>` relation is represented. An upper bound on a body is
/// expressed through the dual body instead.
#[derive(Debug, Clone, PartialEq)]
pub enum Pltl {
    Atom { threshold: f64, body: Ltl },
    And(Box<Pltl>, Box<Pltl>),
    Or(Box<Pltl>, Box<Pltl>),
}

impl Pltl {
    pub fn atom(threshold: f64, body: Ltl) -> Self {
        Pltl::Atom { threshold, body }
    }

    pub fn and(l: Pltl, r: Pltl) -> Self {
        Pltl::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Pltl, r: Pltl) -> Self {
        Pltl::Or(Box::new(l), Box::new(r))
    }

    /// The quantifier itself adds nothing; each connective adds one.
    pub fn size(&self) -> usize {
        match self {
            Pltl::Atom { body, .. } => body.size(),
            Pltl::And(l, r) | Pltl::Or(l, r) => l.size() + r.size() + 1,
        }
    }

    /// Threshold atoms from left to right.
    pub fn atoms(&self) -> Vec<(f64, &Ltl)> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms<'a>(&'a self, out: &mut Vec<(f64, &'a Ltl)>) {
        match self {
            Pltl::Atom { threshold, body } => out.push((*threshold, body)),
            Pltl::And(l, r) | Pltl::Or(l, r) => {
                l.collect_atoms(out);
                r.collect_atoms(out);
            }
        }
    }

    /// Evaluate the Boolean structure given the truth value of each atom,
    /// supplied in left-to-right order.
    pub fn eval_with(&self, atom_truth: &mut impl FnMut(f64, &Ltl) -> bool) -> bool {
        match self {
            Pltl::Atom { threshold, body } => atom_truth(*threshold, body),
            Pltl::And(l, r) => {
                let a = l.eval_with(atom_truth);
                let b = r.eval_with(atom_truth);
                a && b
            }
            Pltl::Or(l, r) => {
                let a = l.eval_with(atom_truth);
                let b = r.eval_with(atom_truth);
                a || b
            }
        }
    }

    fn fmt_nested(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pltl::Atom { threshold, body } => {
                write!(f, "P>{} [{body}]", format_threshold(*threshold))
            }
            Pltl::And(l, r) => {
                write!(f, "(")?;
                l.fmt_nested(f)?;
                write!(f, " & ")?;
                r.fmt_nested(f)?;
                write!(f, ")")
            }
            Pltl::Or(l, r) => {
                write!(f, "(")?;
                l.fmt_nested(f)?;
                write!(f, " | ")?;
                r.fmt_nested(f)?;
                write!(f, ")")
            }
        }
    }
}

impl fmt::Display for Pltl {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pltl::Atom { threshold, body } => {
                write!(f, "P>{} [ {body} ]", format_threshold(*threshold))
            }
            _ => self.fmt_nested(f),
        }
    }
}

/// Print a threshold with six significant digits and no trailing zeros.
pub fn format_threshold(r: f64) -> String {
    if r == 0.0 || !r.is_finite() {
        return format!("{r}");
    }
    let magnitude = r.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let mut s = format!("{r:.decimals$}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    s
}
