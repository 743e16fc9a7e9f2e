//! Line-oriented parser with name and arity checking.
//!
//! ```text
//! base X = P2 * P2
//! bundle F = O(2,0) + O(0,2)
//! bundle Fdual = dual(F)
//! space P = proj(Fdual)
//! space S = zero(P, O{xi}(1)^3)
//! preset Y
//! query Y euler degree(-K) chi(O) h0(-K) chiy fano
//! ffcheck p=3 seed=42 blowup_identity
//! ```

use std::collections::HashMap;

use chowkit_core::fforacle::is_prime;
use chowkit_core::Preset;
use thiserror::Error;

use crate::ast::*;
use crate::lexer::{lex_line, Tok, Token};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError { line, col, message: message.into() }
    }
}

/// What the checker knows about a declared space.
#[derive(Debug, Clone)]
struct SpaceInfo {
    generators: Vec<String>,
    /// The space itself and every space it was built on.
    lineage: Vec<String>,
}

#[derive(Debug, Clone)]
struct BundleInfo {
    space: String,
    arity: usize,
}

#[derive(Debug, Default)]
struct Env {
    spaces: HashMap<String, SpaceInfo>,
    bundles: HashMap<String, BundleInfo>,
    current: Option<String>,
}

impl Env {
    fn declare_space(&mut self, name: &str, info: SpaceInfo, line: usize, col: usize) -> Result<(), ParseError> {
        if self.spaces.contains_key(name) || self.bundles.contains_key(name) {
            return Err(ParseError::new(line, col, format!("`{name}` is already declared")));
        }
        self.spaces.insert(name.to_string(), info);
        self.current = Some(name.to_string());
        Ok(())
    }
}

fn preset_generators(p: Preset) -> Vec<String> {
    let names: &[&str] = match p {
        Preset::X => &["h1", "h2"],
        Preset::Y => &["h1", "h2", "h3"],
        Preset::S | Preset::PE | Preset::PFdual => &["h1", "h2", "xi"],
        Preset::T => &["h1", "h2", "h3", "xi"],
    };
    names.iter().map(|s| s.to_string()).collect()
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    /// Column just past the end of the line, for "unexpected end" errors.
    eol: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, k: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + k)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.eol, |t| t.col)
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), message)
    }

    fn err_at(&self, col: usize, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, col, message)
    }

    fn next(&mut self, expected: &str) -> Result<&'a Token, ParseError> {
        let t = self.peek().ok_or_else(|| self.err(format!("expected {expected}, found end of line")))?;
        self.pos += 1;
        Ok(t)
    }

    fn is_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn is_sym_at(&self, k: usize, c: char) -> bool {
        matches!(self.peek_at(k), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        let t = self.next(&format!("`{c}`"))?;
        match &t.tok {
            Tok::Sym(s) if *s == c => Ok(()),
            other => Err(self.err_at(t.col, format!("expected `{c}`, found {other}"))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, usize), ParseError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.col)),
            other => Err(self.err_at(t.col, format!("expected {what}, found {other}"))),
        }
    }

    fn uint(&mut self, what: &str) -> Result<(u64, usize), ParseError> {
        let t = self.next(what)?;
        match &t.tok {
            Tok::Int(n) => Ok((*n, t.col)),
            other => Err(self.err_at(t.col, format!("expected {what}, found {other}"))),
        }
    }

    fn int(&mut self, what: &str) -> Result<(i64, usize), ParseError> {
        let col = self.col();
        let negative = self.is_sym('-');
        if negative {
            self.pos += 1;
        }
        let (n, _) = self.uint(what)?;
        let n = i64::try_from(n).map_err(|_| self.err_at(col, "integer literal is too large"))?;
        Ok((if negative { -n } else { n }, col))
    }

    fn done(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(self.err_at(t.col, format!("unexpected {} after the end of the statement", t.tok))),
        }
    }
}

/// Parses a whole script, stopping at the first error.
pub fn parse(text: &str) -> Result<Script, ParseError> {
    let mut env = Env::default();
    let mut statements = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let toks = lex_line(raw, line)?;
        if toks.is_empty() {
            continue;
        }
        let mut c = Cursor { toks: &toks, pos: 0, line, eol: raw.chars().count() + 1 };
        let stmt = statement(&mut c, &mut env)?;
        c.done()?;
        statements.push(Located { line, stmt });
    }
    Ok(Script { statements })
}

fn statement(c: &mut Cursor, env: &mut Env) -> Result<Statement, ParseError> {
    let (head, col) = c.ident("a statement keyword")?;
    match head.as_str() {
        "base" => base(c, env),
        "bundle" => bundle(c, env),
        "space" => {
            let (name, ncol) = c.ident("a space name")?;
            space(c, env, name, ncol)
        }
        "preset" => preset(c, env),
        "query" => query(c, env),
        "ffcheck" => ffcheck(c),
        _ if c.is_sym('=') => space(c, env, head, col),
        other => Err(c.err_at(col, format!("unknown statement `{other}`"))),
    }
}

fn base(c: &mut Cursor, env: &mut Env) -> Result<Statement, ParseError> {
    let (name, name_col) = if matches!(c.peek(), Some(Token { tok: Tok::Ident(_), .. })) && c.is_sym_at(1, '=') {
        let named = c.ident("a space name")?;
        c.sym('=')?;
        named
    } else {
        ("X".to_string(), c.col())
    };
    let mut dims = Vec::new();
    loop {
        let (factor, col) = c.ident("a factor such as `P2`")?;
        let n = factor
            .strip_prefix('P')
            .and_then(|d| d.parse::<u32>().ok())
            .ok_or_else(|| c.err_at(col, format!("expected a factor such as `P2`, found `{factor}`")))?;
        if n == 0 {
            return Err(c.err_at(col, "factor P0 is a point; use a positive dimension"));
        }
        dims.push(n);
        if c.is_sym('*') {
            c.pos += 1;
        } else {
            break;
        }
    }
    let generators = (1..=dims.len()).map(|i| format!("h{i}")).collect();
    env.declare_space(&name, SpaceInfo { generators, lineage: vec![name.clone()] }, c.line, name_col)?;
    Ok(Statement::Base { name, dims })
}

fn lookup_space<'e>(env: &'e Env, c: &Cursor, name: &str, col: usize) -> Result<&'e SpaceInfo, ParseError> {
    env.spaces.get(name).ok_or_else(|| c.err_at(col, format!("undeclared space `{name}`")))
}

fn current_space(env: &Env, c: &Cursor) -> Result<String, ParseError> {
    env.current.clone().ok_or_else(|| c.err("no space declared yet; start with `base` or `preset`"))
}

fn bundle(c: &mut Cursor, env: &mut Env) -> Result<Statement, ParseError> {
    let (name, name_col) = c.ident("a bundle name")?;
    let over = if matches!(c.peek(), Some(Token { tok: Tok::Ident(s), .. }) if s == "over") {
        c.pos += 1;
        let (s, col) = c.ident("a space name")?;
        lookup_space(env, c, &s, col)?;
        Some(s)
    } else {
        None
    };
    c.sym('=')?;
    let context = match &over {
        Some(s) => s.clone(),
        None => current_space(env, c)?,
    };
    let expr = bundle_expr(c, env, &context)?;
    if env.spaces.contains_key(&name) || env.bundles.contains_key(&name) {
        return Err(c.err_at(name_col, format!("`{name}` is already declared")));
    }
    let arity = env.spaces[&context].generators.len();
    env.bundles.insert(name.clone(), BundleInfo { space: context, arity });
    Ok(Statement::Bundle { name, over, expr })
}

fn space(c: &mut Cursor, env: &mut Env, name: String, name_col: usize) -> Result<Statement, ParseError> {
    c.sym('=')?;
    let (kind, kcol) = c.ident("`proj` or `zero`")?;
    c.sym('(')?;
    let stmt = match kind.as_str() {
        "proj" => {
            let over = if matches!(c.peek(), Some(Token { tok: Tok::Ident(_), .. })) && c.is_sym_at(1, ',') {
                let (s, col) = c.ident("a space name")?;
                lookup_space(env, c, &s, col)?;
                c.sym(',')?;
                Some(s)
            } else {
                None
            };
            let context = match &over {
                Some(s) => s.clone(),
                None => implicit_context(c, env)?,
            };
            let expr = bundle_expr(c, env, &context)?;
            let parent = &env.spaces[&context];
            let relative = parent.generators.iter().filter(|g| g.starts_with("xi")).count();
            let mut generators = parent.generators.clone();
            generators.push(if relative == 0 { "xi".into() } else { format!("xi{}", relative + 1) });
            let mut lineage = parent.lineage.clone();
            lineage.insert(0, name.clone());
            c.sym(')')?;
            env.declare_space(&name, SpaceInfo { generators, lineage }, c.line, name_col)?;
            Statement::Proj { name, over, expr }
        }
        "zero" => {
            let (over, col) = c.ident("a space name")?;
            lookup_space(env, c, &over, col)?;
            c.sym(',')?;
            let expr = bundle_expr(c, env, &over)?;
            let parent = &env.spaces[&over];
            let mut lineage = parent.lineage.clone();
            lineage.insert(0, name.clone());
            let generators = parent.generators.clone();
            c.sym(')')?;
            env.declare_space(&name, SpaceInfo { generators, lineage }, c.line, name_col)?;
            Statement::Zero { name, over, expr }
        }
        other => return Err(c.err_at(kcol, format!("expected `proj` or `zero`, found `{other}`"))),
    };
    Ok(stmt)
}

/// `proj(F)` lives over `F`'s space when the argument is a single named
/// bundle, and over the current space otherwise.
fn implicit_context(c: &Cursor, env: &Env) -> Result<String, ParseError> {
    let single = |k: usize| c.is_sym_at(k, ')');
    match (c.peek(), c.peek_at(1)) {
        (Some(Token { tok: Tok::Ident(n), .. }), _) if single(1) && env.bundles.contains_key(n) => {
            Ok(env.bundles[n].space.clone())
        }
        (Some(Token { tok: Tok::Ident(d), .. }), Some(Token { tok: Tok::Sym('('), .. })) if d == "dual" => {
            match c.peek_at(2) {
                Some(Token { tok: Tok::Ident(n), .. }) if single(4) && env.bundles.contains_key(n) => {
                    Ok(env.bundles[n].space.clone())
                }
                _ => current_space(env, c),
            }
        }
        _ => current_space(env, c),
    }
}

fn bundle_expr(c: &mut Cursor, env: &Env, context: &str) -> Result<BundleExpr, ParseError> {
    let mut terms = Vec::new();
    loop {
        let atom = match c.peek() {
            Some(Token { tok: Tok::Ident(s), .. }) if s == "O" => Atom::Line(line_expr(c, env, context, false)?),
            Some(Token { tok: Tok::Ident(s), .. }) if s == "dual" && c.is_sym_at(1, '(') => {
                c.pos += 2;
                let (n, ncol) = c.ident("a bundle name")?;
                check_bundle_use(c, env, &n, ncol, context)?;
                c.sym(')')?;
                Atom::Dual(n)
            }
            Some(Token { tok: Tok::Ident(_), .. }) => {
                let (n, ncol) = c.ident("a bundle")?;
                check_bundle_use(c, env, &n, ncol, context)?;
                Atom::Named(n)
            }
            _ => return Err(c.err("expected a bundle term such as `O(1,0)`, `O{xi}(1)`, `dual(F)` or a bundle name")),
        };
        let copies = if c.is_sym('^') {
            c.pos += 1;
            let (k, kcol) = c.uint("a multiplicity")?;
            if k == 0 || k > 64 {
                return Err(c.err_at(kcol, "multiplicity must be between 1 and 64"));
            }
            k as u32
        } else {
            1
        };
        terms.push(BundleTerm { atom, copies });
        if c.is_sym('+') {
            c.pos += 1;
        } else {
            return Ok(BundleExpr { terms });
        }
    }
}

fn check_bundle_use(c: &Cursor, env: &Env, name: &str, col: usize, context: &str) -> Result<(), ParseError> {
    let info = env.bundles.get(name).ok_or_else(|| c.err_at(col, format!("undeclared bundle `{name}`")))?;
    let ctx = &env.spaces[context];
    if !ctx.lineage.contains(&info.space) {
        return Err(c.err_at(
            col,
            format!("bundle `{name}` lives on `{}`, which `{context}` is not built on", info.space),
        ));
    }
    debug_assert!(info.arity <= ctx.generators.len());
    Ok(())
}

/// `O`, `O(d,...)`, `O{gen}(k)`, and in queries also `K` / `-K`.
fn line_expr(c: &mut Cursor, env: &Env, context: &str, allow_canonical: bool) -> Result<LineExpr, ParseError> {
    let gens = &env.spaces[context].generators;
    if allow_canonical && c.is_sym('-') {
        c.pos += 1;
        let (k, col) = c.ident("`K`")?;
        if k != "K" {
            return Err(c.err_at(col, format!("expected `K` after `-`, found `{k}`")));
        }
        return Ok(LineExpr::Canonical { sign: -1 });
    }
    let (head, col) = c.ident("a line bundle")?;
    match head.as_str() {
        "K" if allow_canonical => Ok(LineExpr::Canonical { sign: 1 }),
        "O" if c.is_sym('(') => {
            c.pos += 1;
            let mut degrees = Vec::new();
            let open = col;
            loop {
                degrees.push(c.int("a degree")?.0);
                if c.is_sym(',') {
                    c.pos += 1;
                } else {
                    break;
                }
            }
            c.sym(')')?;
            if degrees.len() != gens.len() {
                return Err(c.err_at(
                    open,
                    format!(
                        "degree vector has {} entries but `{context}` has {} generators ({})",
                        degrees.len(),
                        gens.len(),
                        gens.join(", ")
                    ),
                ));
            }
            Ok(LineExpr::Degrees(degrees))
        }
        "O" if c.is_sym('{') => {
            c.pos += 1;
            let (g, gcol) = c.ident("a generator name")?;
            if !gens.contains(&g) {
                return Err(c.err_at(gcol, format!("`{context}` has no generator `{g}` (has {})", gens.join(", "))));
            }
            c.sym('}')?;
            c.sym('(')?;
            let (degree, _) = c.int("a degree")?;
            c.sym(')')?;
            Ok(LineExpr::Generator { name: g, degree })
        }
        "O" => Ok(LineExpr::Trivial),
        other => Err(c.err_at(col, format!("expected a line bundle, found `{other}`"))),
    }
}

fn preset(c: &mut Cursor, env: &mut Env) -> Result<Statement, ParseError> {
    let (name, name_col) = c.ident("a preset name")?;
    let (which, wcol) = if c.is_sym('=') {
        c.pos += 1;
        c.ident("a preset name")?
    } else {
        (name.clone(), name_col)
    };
    let preset: Preset = which.parse().map_err(|e: chowkit_core::tower::TowerError| c.err_at(wcol, e.to_string()))?;
    let info = SpaceInfo { generators: preset_generators(preset), lineage: vec![name.clone()] };
    env.declare_space(&name, info, c.line, name_col)?;
    Ok(Statement::Preset { name, preset })
}

fn query(c: &mut Cursor, env: &mut Env) -> Result<Statement, ParseError> {
    let (space, col) = c.ident("a space name")?;
    lookup_space(env, c, &space, col)?;
    let mut items = Vec::new();
    while c.peek().is_some() {
        let (kw, kcol) = c.ident("a query item")?;
        let item = match kw.as_str() {
            "dim" => QueryItem::Dim,
            "euler" => QueryItem::Euler,
            "canonical" => QueryItem::Canonical,
            "chiy" => QueryItem::Chiy,
            "fano" => QueryItem::Fano,
            "degree" | "chi" | "h0" => {
                c.sym('(')?;
                let l = line_expr(c, env, &space, true)?;
                c.sym(')')?;
                match kw.as_str() {
                    "degree" => QueryItem::Degree(l),
                    "chi" => QueryItem::Chi(l),
                    _ => QueryItem::H0(l),
                }
            }
            other => {
                return Err(c.err_at(
                    kcol,
                    format!("unknown query `{other}` (expected dim, euler, canonical, chiy, fano, degree(..), chi(..), h0(..))"),
                ))
            }
        };
        items.push(item);
    }
    if items.is_empty() {
        return Err(c.err("a query needs at least one item"));
    }
    Ok(Statement::Query { space, items })
}

fn ffcheck(c: &mut Cursor) -> Result<Statement, ParseError> {
    let mut check = FfCheck::default();
    while c.peek().is_some() {
        let (kw, col) = c.ident("an ffcheck parameter or check name")?;
        if c.is_sym('=') {
            c.pos += 1;
            let (v, vcol) = c.uint("a non-negative integer")?;
            let dup = || c.err_at(col, format!("parameter `{kw}` given twice"));
            match kw.as_str() {
                "p" => {
                    let p = u32::try_from(v).ok().filter(|&p| is_prime(p)).ok_or_else(|| c.err_at(vcol, format!("p = {v} is not a prime")))?;
                    if check.p.replace(p).is_some() {
                        return Err(dup());
                    }
                }
                "seed" => {
                    if check.seed.replace(v).is_some() {
                        return Err(dup());
                    }
                }
                "seeds" => {
                    if v == 0 {
                        return Err(c.err_at(vcol, "seeds must be positive"));
                    }
                    if check.seeds.replace(v).is_some() {
                        return Err(dup());
                    }
                }
                "trials" => {
                    if v == 0 {
                        return Err(c.err_at(vcol, "trials must be positive"));
                    }
                    if check.trials.replace(v).is_some() {
                        return Err(dup());
                    }
                }
                other => return Err(c.err_at(col, format!("unknown ffcheck parameter `{other}` (expected p, seed, seeds, trials)"))),
            }
        } else {
            let kind = FfKind::ALL.into_iter().find(|k| k.keyword() == kw).ok_or_else(|| {
                c.err_at(col, format!("unknown check `{kw}` (expected blowup_identity, stratified, jacobian, generic)"))
            })?;
            if !check.checks.contains(&kind) {
                check.checks.push(kind);
            }
        }
    }
    Ok(Statement::FfCheck(check))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn stmts(text: &str) -> Vec<Statement> {
        parse(text).unwrap().statements.into_iter().map(|l| l.stmt).collect()
    }

    #[test]
    fn base_statement() {
        assert_eq!(stmts("base P2 * P2"), vec![Statement::Base { name: "X".into(), dims: vec![2, 2] }]);
        assert_eq!(stmts("base B = P1"), vec![Statement::Base { name: "B".into(), dims: vec![1] }]);
        let e = parse("base P0").unwrap_err();
        assert_eq!((e.line, e.col), (1, 6));
    }

    #[test]
    fn arity_errors_point_at_the_token() {
        let e = parse("base P2 * P2\nbundle F = O(2,0,0)").unwrap_err();
        assert_eq!((e.line, e.col), (2, 12));
        assert!(e.message.contains("3 entries"), "{e}");
        let e = parse("base P2 * P2\nspace P = proj(O(1,0) + O(0,1))\nspace Z = zero(P, O{xi2}(1))").unwrap_err();
        assert_eq!((e.line, e.col), (3, 21));
    }

    #[test]
    fn undeclared_names() {
        let e = parse("query Y euler").unwrap_err();
        assert_eq!((e.line, e.col), (1, 7));
        let e = parse("base P2\nspace P = proj(G)").unwrap_err();
        assert!(e.message.contains("undeclared bundle `G`"));
        let e = parse("base P2\nbase P2").unwrap_err();
        assert!(e.message.contains("already declared"));
        let e = parse("base A = P1\nbundle L = O(1)\nbase B = P1\nspace Q = proj(B, L + O(0))").unwrap_err();
        assert!(e.message.contains("not built on"), "{e}");
    }

    #[test]
    fn enriques_script() {
        let text = "base X = P2 * P2\nbundle F = O(2,0) + O(0,2)\nbundle Fdual = dual(F)\nspace P = proj(Fdual)\nS = zero(P, O{xi}(1)^3)\nquery S euler chi(O) chiy dim\n";
        let s = parse(text).unwrap();
        assert_eq!(s.statements.len(), 6);
        assert_eq!(
            s.statements[4].stmt,
            Statement::Zero {
                name: "S".into(),
                over: "P".into(),
                expr: BundleExpr {
                    terms: vec![BundleTerm { atom: Atom::Line(LineExpr::Generator { name: "xi".into(), degree: 1 }), copies: 3 }]
                }
            }
        );
    }

    #[test]
    fn queries_and_ffcheck() {
        let s = stmts("preset Y\nquery Y euler degree(-K) chi(O) h0(-K) chiy fano\nffcheck p=3 seed=42 blowup_identity");
        assert_eq!(s[0], Statement::Preset { name: "Y".into(), preset: Preset::Y });
        match &s[1] {
            Statement::Query { items, .. } => assert_eq!(items.len(), 6),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            s[2],
            Statement::FfCheck(FfCheck { p: Some(3), seed: Some(42), checks: vec![FfKind::BlowupIdentity], ..Default::default() })
        );
        assert!(parse("ffcheck p=4").is_err());
        assert!(parse("ffcheck p=3 p=5").is_err());
        assert!(parse("ffcheck nonsense").is_err());
        assert!(parse("preset Q").is_err());
        assert!(parse("preset Y\nquery Y degree(O(1,1))").is_err());
    }

    #[test]
    fn print_parse_fixpoint() {
        let text = "base P2 * P2 # X\nbundle F = O(2,0) + O(0,2)\nbundle Fd over X = dual(F)\nP = proj(X, Fd + O(0,0)^2)\nspace Z = zero(P, O{xi}(1) + O(1,-1,0))\npreset T\nquery Z dim euler canonical chiy fano degree(K) chi(O{h1}(-2)) h0(O)\nffcheck seeds=3 trials=5 generic jacobian\n";
        let a = parse(text).unwrap();
        let printed = a.to_string();
        let b = parse(&printed).unwrap();
        let strip = |s: &Script| s.statements.iter().map(|l| l.stmt.clone()).collect::<Vec<_>>();
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(printed, b.to_string());
    }

    #[test]
    fn empty_script() {
        assert!(parse("").unwrap().statements.is_empty());
        assert!(parse("# only a comment\n\n").unwrap().statements.is_empty());
    }
}
