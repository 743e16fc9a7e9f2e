//! Script syntax tree. `Display` prints canonical source that parses back
//! to an equal tree.

use std::fmt;

use chowkit_core::Preset;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Script {
    pub statements: Vec<Located>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Located {
    /// 1-based source line.
    pub line: usize,
    pub stmt: Statement,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    /// `base [NAME =] P2 * P2`
    Base { name: String, dims: Vec<u32> },
    /// `bundle NAME [over SPACE] = EXPR`
    Bundle { name: String, over: Option<String>, expr: BundleExpr },
    /// `space NAME = proj([SPACE,] EXPR)`
    Proj { name: String, over: Option<String>, expr: BundleExpr },
    /// `space NAME = zero(SPACE, EXPR)`
    Zero { name: String, over: String, expr: BundleExpr },
    /// `preset NAME [= PRESET]`
    Preset { name: String, preset: Preset },
    /// `query SPACE ITEM...`
    Query { space: String, items: Vec<QueryItem> },
    /// `ffcheck key=value... CHECK...`
    FfCheck(FfCheck),
}

/// `term + term + ...`
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleExpr {
    pub terms: Vec<BundleTerm>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BundleTerm {
    pub atom: Atom,
    /// `^k`: direct sum of `k` copies.
    pub copies: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Line(LineExpr),
    Named(String),
    Dual(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LineExpr {
    /// `O`
    Trivial,
    /// `K` (`sign = 1`) or `-K` (`sign = -1`).
    Canonical { sign: i64 },
    /// `O(d1,...,dn)` in all generators.
    Degrees(Vec<i64>),
    /// `O{gen}(k)`.
    Generator { name: String, degree: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QueryItem {
    Dim,
    Euler,
    Canonical,
    Chiy,
    Fano,
    Degree(LineExpr),
    Chi(LineExpr),
    H0(LineExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FfKind {
    BlowupIdentity,
    Stratified,
    Jacobian,
    Generic,
}

impl FfKind {
    pub const ALL: [FfKind; 4] = [FfKind::BlowupIdentity, FfKind::Stratified, FfKind::Jacobian, FfKind::Generic];

    pub fn keyword(self) -> &'static str {
        match self {
            FfKind::BlowupIdentity => "blowup_identity",
            FfKind::Stratified => "stratified",
            FfKind::Jacobian => "jacobian",
            FfKind::Generic => "generic",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FfCheck {
    pub p: Option<u32>,
    pub seed: Option<u64>,
    pub seeds: Option<u64>,
    pub trials: Option<u64>,
    pub checks: Vec<FfKind>,
}

fn join<T: fmt::Display>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for LineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LineExpr::Trivial => write!(f, "O"),
            LineExpr::Canonical { sign } if *sign < 0 => write!(f, "-K"),
            LineExpr::Canonical { .. } => write!(f, "K"),
            LineExpr::Degrees(d) => write!(f, "O({})", join(d, ",")),
            LineExpr::Generator { name, degree } => write!(f, "O{{{name}}}({degree})"),
        }
    }
}

impl fmt::Display for BundleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let atom = match &t.atom {
                    Atom::Line(l) => l.to_string(),
                    Atom::Named(n) => n.clone(),
                    Atom::Dual(n) => format!("dual({n})"),
                };
                if t.copies == 1 {
                    atom
                } else {
                    format!("{atom}^{}", t.copies)
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Display for QueryItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QueryItem::Dim => write!(f, "dim"),
            QueryItem::Euler => write!(f, "euler"),
            QueryItem::Canonical => write!(f, "canonical"),
            QueryItem::Chiy => write!(f, "chiy"),
            QueryItem::Fano => write!(f, "fano"),
            QueryItem::Degree(l) => write!(f, "degree({l})"),
            QueryItem::Chi(l) => write!(f, "chi({l})"),
            QueryItem::H0(l) => write!(f, "h0({l})"),
        }
    }
}

impl fmt::Display for Statement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Statement::Base { name, dims } => {
                let factors: Vec<String> = dims.iter().map(|n| format!("P{n}")).collect();
                write!(f, "base {name} = {}", factors.join(" * "))
            }
            Statement::Bundle { name, over, expr } => match over {
                Some(s) => write!(f, "bundle {name} over {s} = {expr}"),
                None => write!(f, "bundle {name} = {expr}"),
            },
            Statement::Proj { name, over, expr } => match over {
                Some(s) => write!(f, "space {name} = proj({s}, {expr})"),
                None => write!(f, "space {name} = proj({expr})"),
            },
            Statement::Zero { name, over, expr } => write!(f, "space {name} = zero({over}, {expr})"),
            Statement::Preset { name, preset } => write!(f, "preset {name} = {preset}"),
            Statement::Query { space, items } => write!(f, "query {space} {}", join(items, " ")),
            Statement::FfCheck(c) => {
                write!(f, "ffcheck")?;
                if let Some(p) = c.p {
                    write!(f, " p={p}")?;
                }
                if let Some(s) = c.seed {
                    write!(f, " seed={s}")?;
                }
                if let Some(s) = c.seeds {
                    write!(f, " seeds={s}")?;
                }
                if let Some(t) = c.trials {
                    write!(f, " trials={t}")?;
                }
                for k in &c.checks {
                    write!(f, " {}", k.keyword())?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.statements {
            writeln!(f, "{}", s.stmt)?;
        }
        Ok(())
    }
}
