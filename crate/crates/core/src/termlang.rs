//! Signatures, terms, identities and their evaluation over finite algebras.
//!
//! Terms use prefix notation: `mul(x,inv(y))`. Identifiers that are not
//! declared in the signature are variables. Constants may be written bare
//! (`e`) or applied to nothing (`e()`).

use std::collections::HashMap;
use std::fmt;

use crate::algebra::FiniteAlgebra;
use crate::error::{Error, Result};

/// An operation symbol with fixed arity.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
}

/// An ordered list of operation symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
    difference_symbol: Option<usize>,
}

impl Signature {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].iter().any(|t| t.name == s.name) {
                return Err(Error::DuplicateSymbol(s.name.clone()));
            }
        }
        Ok(Signature { symbols, difference_symbol: None })
    }

    /// Builds a signature from `(name, arity)` pairs.
    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Self::new(
            pairs
                .iter()
                .map(|&(n, a)| Symbol { name: n.to_string(), arity: a })
                .collect(),
        )
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn arity(&self, sym: usize) -> usize {
        self.symbols[sym].arity
    }

    pub fn name(&self, sym: usize) -> &str {
        &self.symbols[sym].name
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.name == name)
    }

    pub fn difference_symbol(&self) -> Option<usize> {
        self.difference_symbol
    }

    /// Marks `name` as the designated difference-term symbol; it must be ternary.
    pub fn designate_difference(&mut self, name: &str) -> Result<()> {
        let i = self.lookup(name).ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        if self.symbols[i].arity != 3 {
            return Err(Error::ArityMismatch {
                symbol: name.to_string(),
                expected: 3,
                got: self.symbols[i].arity,
            });
        }
        self.difference_symbol = Some(i);
        Ok(())
    }

    /// Same symbols with the same arities, ignoring the difference designation.
    pub fn same_symbols(&self, other: &Signature) -> bool {
        self.symbols == other.symbols
    }

    /// Appends a symbol, returning its index.
    pub fn push(&mut self, name: &str, arity: usize) -> Result<usize> {
        if self.lookup(name).is_some() {
            return Err(Error::DuplicateSymbol(name.to_string()));
        }
        self.symbols.push(Symbol { name: name.to_string(), arity });
        Ok(self.symbols.len() - 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> =
            self.symbols.iter().map(|s| format!("{}/{}", s.name, s.arity)).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// A term over a signature. Symbols are stored by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    App(usize, Vec<Term>),
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(name.to_string())
    }

    /// Variables in order of first occurrence.
    pub fn vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    /// Renders the term in the parser's grammar.
    pub fn display(&self, sig: &Signature) -> String {
        match self {
            Term::Var(v) => v.clone(),
            Term::App(s, args) if args.is_empty() => sig.name(*s).to_string(),
            Term::App(s, args) => {
                let inner: Vec<String> = args.iter().map(|a| a.display(sig)).collect();
                format!("{}({})", sig.name(*s), inner.join(","))
            }
        }
    }

    /// Replaces variables according to `map`; unmapped variables stay.
    pub fn substitute(&self, map: &HashMap<String, Term>) -> Term {
        match self {
            Term::Var(v) => map.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::App(s, args) => Term::App(*s, args.iter().map(|a| a.substitute(map)).collect()),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::App(_, args) => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }
}

/// An equation `lhs = rhs` universally quantified over `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
    pub vars: Vec<String>,
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        let mut vars = lhs.vars();
        for v in rhs.vars() {
            if !vars.contains(&v) {
                vars.push(v);
            }
        }
        Identity { lhs, rhs, vars }
    }

    pub fn display(&self, sig: &Signature) -> String {
        format!("{} = {}", self.lhs.display(sig), self.rhs.display(sig))
    }
}

/// A finitely axiomatized variety with a difference term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VarietySpec {
    pub signature: Signature,
    pub axioms: Vec<Identity>,
    /// Ternary term; its variables are `difference_vars` in argument order.
    pub difference_term: Term,
    pub difference_vars: [String; 3],
}

impl VarietySpec {
    pub fn new(signature: Signature, axioms: Vec<Identity>, difference_term: Term) -> Result<Self> {
        let vars = ["x".to_string(), "y".to_string(), "z".to_string()];
        for v in difference_term.vars() {
            if !vars.contains(&v) {
                return Err(Error::MissingVariable(v));
            }
        }
        Ok(VarietySpec { signature, axioms, difference_term, difference_vars: vars })
    }

    /// The difference term compiled over `(x, y, z)`.
    pub fn compiled_difference(&self) -> CompiledTerm {
        CompiledTerm::compile(&self.difference_term, &self.difference_vars)
            .expect("difference term variables are checked at construction")
    }
}

// ---------------------------------------------------------------------------
// Lexing and parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Num(usize),
    LParen,
    RParen,
    Comma,
    Slash,
    Eq,
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let (line, col) = (li + 1, i + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            let single = match c {
                '(' => Some(Tok::LParen),
                ')' => Some(Tok::RParen),
                ',' => Some(Tok::Comma),
                '/' => Some(Tok::Slash),
                '=' => Some(Tok::Eq),
                _ => None,
            };
            if let Some(tok) = single {
                out.push(Token { tok, line, col });
                i += 1;
            } else if c.is_ascii_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token { tok: Tok::Ident(chars[start..i].iter().collect()), line, col });
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                let n = s.parse().map_err(|_| Error::Syntax { line, col, msg: "number too large".into() })?;
                out.push(Token { tok: Tok::Num(n), line, col });
            } else {
                return Err(Error::Syntax { line, col, msg: format!("unexpected character `{c}`") });
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a Signature,
    end: (usize, usize),
}

impl<'a> Parser<'a> {
    fn new(text: &str, sig: &'a Signature) -> Result<Self> {
        let toks = lex(text)?;
        let lines = text.lines().count().max(1);
        let last = text.lines().last().map(|l| l.chars().count() + 1).unwrap_or(1);
        Ok(Parser { toks, pos: 0, sig, end: (lines, last) })
    }

    fn err(&self, msg: impl Into<String>) -> Error {
        let (line, col) = self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end);
        Error::Syntax { line, col, msg: msg.into() }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.tok)
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        if self.peek() == Some(&want) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.err(format!("expected {what}")))
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn term(&mut self) -> Result<Term> {
        let name = match self.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(self.err("expected identifier")),
        };
        self.pos += 1;
        let sym = self.sig.lookup(&name);
        if self.peek() == Some(&Tok::LParen) {
            self.pos += 1;
            let sym = sym.ok_or_else(|| Error::UnknownSymbol(name.clone()))?;
            let mut args = Vec::new();
            if self.peek() == Some(&Tok::RParen) {
                self.pos += 1;
            } else {
                loop {
                    args.push(self.term()?);
                    match self.peek() {
                        Some(Tok::Comma) => self.pos += 1,
                        Some(Tok::RParen) => {
                            self.pos += 1;
                            break;
                        }
                        _ => return Err(self.err("expected `,` or `)`")),
                    }
                }
            }
            let expected = self.sig.arity(sym);
            if args.len() != expected {
                return Err(Error::ArityMismatch { symbol: name, expected, got: args.len() });
            }
            Ok(Term::App(sym, args))
        } else {
            match sym {
                Some(s) if self.sig.arity(s) == 0 => Ok(Term::App(s, vec![])),
                Some(s) => Err(Error::ArityMismatch {
                    symbol: name,
                    expected: self.sig.arity(s),
                    got: 0,
                }),
                None => Ok(Term::Var(name)),
            }
        }
    }
}

/// Parses `name/arity` declarations separated by commas.
pub fn parse_signature(text: &str) -> Result<Signature> {
    let empty = Signature::default();
    let mut p = Parser::new(text, &empty)?;
    let mut syms = Vec::new();
    while !p.at_end() {
        let name = match p.peek() {
            Some(Tok::Ident(s)) => s.clone(),
            _ => return Err(p.err("expected symbol name")),
        };
        p.pos += 1;
        p.expect(Tok::Slash, "`/`")?;
        let arity = match p.peek() {
            Some(Tok::Num(n)) => *n,
            _ => return Err(p.err("expected arity")),
        };
        p.pos += 1;
        if syms.iter().any(|s: &Symbol| s.name == name) {
            return Err(Error::DuplicateSymbol(name));
        }
        syms.push(Symbol { name, arity });
        if !p.at_end() {
            p.expect(Tok::Comma, "`,`")?;
        }
    }
    Signature::new(syms)
}

/// Parses a single term over `sig`.
pub fn parse_term(text: &str, sig: &Signature) -> Result<Term> {
    let mut p = Parser::new(text, sig)?;
    let t = p.term()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(t)
}

/// Parses `lhs = rhs`.
pub fn parse_identity(text: &str, sig: &Signature) -> Result<Identity> {
    let mut p = Parser::new(text, sig)?;
    let lhs = p.term()?;
    p.expect(Tok::Eq, "`=`")?;
    let rhs = p.term()?;
    if !p.at_end() {
        return Err(p.err("trailing input"));
    }
    Ok(Identity::new(lhs, rhs))
}

/// Parses `m(a,b,c) = <term>` into a difference term over `(x,y,z)`.
fn parse_difference_definition(text: &str, sig: &Signature, line: usize) -> Result<Term> {
    let eq = text.find('=').ok_or(Error::Syntax { line, col: 1, msg: "expected `=`".into() })?;
    let (head, body) = (&text[..eq], &text[eq + 1..]);
    let open = head.find('(').ok_or(Error::Syntax { line, col: 1, msg: "expected `(`".into() })?;
    let close = head.rfind(')').ok_or(Error::Syntax { line, col: 1, msg: "expected `)`".into() })?;
    let params: Vec<String> = head[open + 1..close].split(',').map(|s| s.trim().to_string()).collect();
    if params.len() != 3 {
        return Err(Error::ArityMismatch {
            symbol: head[..open].trim().to_string(),
            expected: 3,
            got: params.len(),
        });
    }
    for p in &params {
        if let Some(s) = sig.lookup(p) {
            if sig.arity(s) == 0 {
                return Err(Error::VariableCollision(p.clone()));
            }
        }
    }
    let rhs = parse_term(body, sig).map_err(|e| shift_line(e, line))?;
    let canon = ["x", "y", "z"];
    let map: HashMap<String, Term> =
        params.iter().zip(canon).map(|(p, c)| (p.clone(), Term::var(c))).collect();
    for v in rhs.vars() {
        if !params.contains(&v) {
            return Err(Error::MissingVariable(v));
        }
    }
    Ok(rhs.substitute(&map))
}

fn shift_line(e: Error, line: usize) -> Error {
    match e {
        Error::Syntax { col, msg, .. } => Error::Syntax { line, col, msg },
        other => other,
    }
}

/// Parses a variety file: a `signature:` line, an `axioms:` block and a
/// `difference_term:` or `difference_term_symbol:` line. `#` starts a comment.
pub fn parse_variety(text: &str) -> Result<VarietySpec> {
    let mut sig: Option<Signature> = None;
    let mut axiom_lines: Vec<(usize, String)> = Vec::new();
    let mut diff: Option<(usize, String, bool)> = None;
    let mut in_axioms = false;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix("signature:") {
            sig = Some(parse_signature(rest).map_err(|e| shift_line(e, line_no))?);
            in_axioms = false;
        } else if line == "axioms:" {
            in_axioms = true;
        } else if let Some(rest) = line.strip_prefix("difference_term_symbol:") {
            diff = Some((line_no, rest.trim().to_string(), true));
            in_axioms = false;
        } else if let Some(rest) = line.strip_prefix("difference_term:") {
            diff = Some((line_no, rest.trim().to_string(), false));
            in_axioms = false;
        } else if in_axioms {
            axiom_lines.push((line_no, line.to_string()));
        } else {
            return Err(Error::Syntax { line: line_no, col: 1, msg: format!("unexpected line `{line}`") });
        }
    }
    let mut sig = sig.ok_or(Error::Format("variety file lacks a `signature:` line".into()))?;
    let (dl, dtext, is_symbol) =
        diff.ok_or(Error::Format("variety file lacks a difference term".into()))?;
    let dterm = if is_symbol {
        sig.designate_difference(&dtext)?;
        let s = sig.lookup(&dtext).expect("designated above");
        Term::App(s, vec![Term::var("x"), Term::var("y"), Term::var("z")])
    } else {
        parse_difference_definition(&dtext, &sig, dl)?
    };
    let mut axioms = Vec::new();
    for (ln, l) in axiom_lines {
        axioms.push(parse_identity(&l, &sig).map_err(|e| shift_line(e, ln))?);
    }
    VarietySpec::new(sig, axioms, dterm)
}

/// Renders a variety in the file format accepted by [`parse_variety`].
pub fn write_variety(v: &VarietySpec) -> String {
    let mut out = format!("signature: {}\naxioms:\n", v.signature);
    for a in &v.axioms {
        out.push_str(&a.display(&v.signature));
        out.push('\n');
    }
    match v.signature.difference_symbol() {
        Some(s) => out.push_str(&format!("difference_term_symbol: {}\n", v.signature.name(s))),
        None => out.push_str(&format!(
            "difference_term: m(x,y,z) = {}\n",
            v.difference_term.display(&v.signature)
        )),
    }
    out
}

// ---------------------------------------------------------------------------
// Evaluation

/// Evaluates `t` in `a` under `env`.
pub fn eval_term(t: &Term, a: &FiniteAlgebra, env: &HashMap<String, usize>) -> Result<usize> {
    match t {
        Term::Var(v) => env.get(v).copied().ok_or_else(|| Error::MissingVariable(v.clone())),
        Term::App(s, args) => {
            let vals = args.iter().map(|x| eval_term(x, a, env)).collect::<Result<Vec<_>>>()?;
            Ok(a.apply(*s, &vals))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Instr {
    Var(usize),
    App(usize, usize),
}

/// A term flattened to postfix code over a fixed variable order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledTerm {
    code: Vec<Instr>,
    nvars: usize,
}

impl CompiledTerm {
    pub fn compile(t: &Term, var_order: &[String]) -> Result<Self> {
        let mut code = Vec::new();
        fn go(t: &Term, order: &[String], code: &mut Vec<Instr>) -> Result<()> {
            match t {
                Term::Var(v) => {
                    let i = order
                        .iter()
                        .position(|o| o == v)
                        .ok_or_else(|| Error::MissingVariable(v.clone()))?;
                    code.push(Instr::Var(i));
                }
                Term::App(s, args) => {
                    for a in args {
                        go(a, order, code)?;
                    }
                    code.push(Instr::App(*s, args.len()));
                }
            }
            Ok(())
        }
        go(t, var_order, &mut code)?;
        Ok(CompiledTerm { code, nvars: var_order.len() })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// Evaluates with variable values `vals`, reusing `stack`.
    pub fn eval_with(&self, a: &FiniteAlgebra, vals: &[usize], stack: &mut Vec<usize>) -> usize {
        stack.clear();
        for ins in &self.code {
            match *ins {
                Instr::Var(i) => stack.push(vals[i]),
                Instr::App(s, k) => {
                    let base = stack.len() - k;
                    let v = a.apply(s, &stack[base..]);
                    stack.truncate(base);
                    stack.push(v);
                }
            }
        }
        stack[0]
    }

    pub fn eval(&self, a: &FiniteAlgebra, vals: &[usize]) -> usize {
        let mut stack = Vec::with_capacity(self.code.len());
        self.eval_with(a, vals, &mut stack)
    }
}

/// Tabulates `t` over `A^{|var_order|}` in lex order (first variable most significant).
pub fn term_operation(t: &Term, a: &FiniteAlgebra, var_order: &[String]) -> Result<Vec<usize>> {
    let c = CompiledTerm::compile(t, var_order)?;
    let n = a.size();
    let k = var_order.len();
    let total = n.checked_pow(k as u32).ok_or(Error::LimitExceeded(usize::MAX))?;
    let mut out = Vec::with_capacity(total);
    let mut vals = vec![0usize; k];
    let mut stack = Vec::new();
    for _ in 0..total {
        out.push(c.eval_with(a, &vals, &mut stack));
        for j in (0..k).rev() {
            vals[j] += 1;
            if vals[j] < n {
                break;
            }
            vals[j] = 0;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::groups;

    fn gsig() -> Signature {
        parse_signature("mul/2, inv/1, e/0").unwrap()
    }

    #[test]
    fn signature_parsing() {
        let s = gsig();
        assert_eq!(s.len(), 3);
        assert_eq!(s.arity(s.lookup("mul").unwrap()), 2);
        assert_eq!(s.arity(s.lookup("e").unwrap()), 0);
        assert_eq!(parse_signature("m/3").unwrap().arity(0), 3);
        assert_eq!(parse_signature("mul/2, mul/1"), Err(Error::DuplicateSymbol("mul".into())));
        assert!(matches!(parse_signature("mul 2"), Err(Error::Syntax { line: 1, col: 5, .. })));
    }

    #[test]
    fn term_parsing() {
        let s = parse_signature("m/3, mul/2, inv/1, e/0").unwrap();
        let t = parse_term("m(x,x,y)", &s).unwrap();
        assert_eq!(t, Term::App(0, vec![Term::var("x"), Term::var("x"), Term::var("y")]));
        let t = parse_term("mul(x,inv(x))", &s).unwrap();
        assert_eq!(t, Term::App(1, vec![Term::var("x"), Term::App(2, vec![Term::var("x")])]));
        assert_eq!(
            parse_term("m(x,y)", &s),
            Err(Error::ArityMismatch { symbol: "m".into(), expected: 3, got: 2 })
        );
        assert_eq!(parse_term("e", &s).unwrap(), parse_term("e()", &s).unwrap());
        assert!(matches!(parse_term("foo(x)", &s), Err(Error::UnknownSymbol(_))));
        assert!(matches!(parse_term("mul", &s), Err(Error::ArityMismatch { .. })));
        assert!(matches!(parse_term("mul(x,y", &s), Err(Error::Syntax { .. })));
    }

    #[test]
    fn eval_examples() {
        let z4 = groups::cyclic(4);
        let m = parse_term("mul(mul(x,inv(y)),z)", z4.signature()).unwrap();
        let env: HashMap<String, usize> =
            [("x".to_string(), 1), ("y".to_string(), 3), ("z".to_string(), 2)].into();
        assert_eq!(eval_term(&m, &z4, &env).unwrap(), 0);
        let x = Term::var("x");
        let env: HashMap<String, usize> = [("x".to_string(), 3)].into();
        assert_eq!(eval_term(&x, &z4, &env).unwrap(), 3);
        assert_eq!(
            eval_term(&Term::var("q"), &z4, &env),
            Err(Error::MissingVariable("q".into()))
        );
    }

    #[test]
    fn term_operation_examples() {
        let z2 = groups::cyclic(2);
        let z3 = groups::cyclic(3);
        let xs = vec!["x".to_string()];
        assert_eq!(term_operation(&Term::var("x"), &z2, &xs).unwrap(), vec![0, 1]);
        let dbl = parse_term("mul(x,x)", z3.signature()).unwrap();
        assert_eq!(term_operation(&dbl, &z3, &xs).unwrap(), vec![0, 2, 1]);
        let m = parse_term("mul(mul(x,inv(y)),z)", z2.signature()).unwrap();
        let xyz: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let tab = term_operation(&m, &z2, &xyz).unwrap();
        let expect: Vec<usize> =
            (0..8).map(|i| ((i >> 2) + ((i >> 1) & 1) + (i & 1)) % 2).collect();
        assert_eq!(tab, expect);
    }

    #[test]
    fn variety_file() {
        let text = "# groups\nsignature: mul/2, inv/1, e/0\naxioms:\n  mul(mul(x,y),z) = mul(x,mul(y,z))\n  mul(e,x) = x\n  mul(inv(x),x) = e\ndifference_term: m(a,b,c) = mul(mul(a,inv(b)),c)\n";
        let v = parse_variety(text).unwrap();
        assert_eq!(v.axioms.len(), 3);
        assert_eq!(v.difference_term.display(&v.signature), "mul(mul(x,inv(y)),z)");
        let again = parse_variety(&write_variety(&v)).unwrap();
        assert_eq!(again, v);
        let sym = parse_variety("signature: m/3\naxioms:\nm(x,x,y) = y\ndifference_term_symbol: m\n").unwrap();
        assert_eq!(sym.signature.difference_symbol(), Some(0));
        let bad = parse_variety("signature: mul/2, e/0\ndifference_term: m(x,e,z) = x\n");
        assert_eq!(bad, Err(Error::VariableCollision("e".into())));
        let bad = parse_variety("signature: mul/2\naxioms:\nmul(x) = x\ndifference_term: m(x,y,z) = x\n");
        assert!(matches!(bad, Err(Error::ArityMismatch { .. })));
    }
}
