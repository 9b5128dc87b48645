//! Line-oriented readers for phase files and germ files.
//!
//! Both formats share the lexer: words, unsigned integers and the
//! punctuation `= + - * / ( ) ,`. A `#` starts a comment running to the end
//! of the line. Every error carries the 1-based line and column of the
//! offending token, or of the end of the line when a token is missing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use toric_core::exact::{
    phase_from_terms, GaussianRational, PhaseScalar, PhaseVector, Rational, SymbolBasis,
};
use toric_core::germ::{recognize_symbol_values, Germ, Monomial, Poly, Spectrum};

use crate::error::ParseError;

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Word(String),
    Int(BigInt),
    Punct(char),
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Word(w) => format!("`{w}`"),
            Tok::Int(i) => format!("`{i}`"),
            Tok::Punct(c) => format!("`{c}`"),
        }
    }
}

const PUNCT: &[char] = &['=', '+', '-', '*', '/', '(', ')', ','];

/// Tokens of one line with their 1-based columns.
struct Cursor {
    line: usize,
    toks: Vec<(Tok, usize)>,
    end_column: usize,
    pos: usize,
}

fn lex(line: usize, text: &str) -> Result<Cursor, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let mut i = 0;
    let mut end_column = chars.len() + 1;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            end_column = col;
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            toks.push((Tok::Int(digits.parse().expect("ascii digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            toks.push((Tok::Word(chars[start..i].iter().collect()), col));
        } else if PUNCT.contains(&c) {
            toks.push((Tok::Punct(c), col));
            i += 1;
        } else {
            return Err(ParseError::new(line, col, format!("unexpected character `{c}`")));
        }
    }
    // Trailing whitespace does not move the end-of-line position.
    let trimmed = chars[..end_column - 1].iter().rev().take_while(|c| c.is_whitespace()).count();
    Ok(Cursor {
        line,
        toks,
        end_column: end_column - trimmed,
        pos: 0,
    })
}

impl Cursor {
    fn is_empty(&self) -> bool {
        self.toks.is_empty()
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn column(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_column, |t| t.1)
    }

    fn error(&self, message: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.column(), message)
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        match self.toks.get(self.pos) {
            Some((t, _)) => self.error(format!("expected {wanted}, found {}", t.describe())),
            None => self.error(format!("expected {wanted}, found end of line")),
        }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn peek_punct(&self, c: char) -> bool {
        self.peek() == Some(&Tok::Punct(c))
    }

    fn punct(&mut self, c: char) -> Result<(), ParseError> {
        if self.peek_punct(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.unexpected(&format!("`{c}`")))
        }
    }

    fn word(&mut self) -> Result<(String, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Word(w), col)) => {
                let out = (w.clone(), *col);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match self.peek() {
            Some(Tok::Word(w)) if w == kw => {
                self.pos += 1;
                Ok(())
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    fn int(&mut self) -> Result<(BigInt, usize), ParseError> {
        match self.toks.get(self.pos) {
            Some((Tok::Int(v), col)) => {
                let out = (v.clone(), *col);
                self.pos += 1;
                Ok(out)
            }
            _ => Err(self.unexpected("an integer")),
        }
    }

    fn small(&mut self, what: &str) -> Result<(usize, usize), ParseError> {
        let col = self.column();
        let (v, _) = self.int()?;
        v.to_usize()
            .map(|v| (v, col))
            .ok_or_else(|| ParseError::new(self.line, col, format!("{what} {v} is too large")))
    }

    /// `p` or `p/q`, optionally signed.
    fn rational(&mut self) -> Result<Rational, ParseError> {
        let negative = if self.peek_punct('-') {
            self.pos += 1;
            true
        } else {
            if self.peek_punct('+') {
                self.pos += 1;
            }
            false
        };
        let (num, _) = self.int().map_err(|_| self.unexpected("a rational"))?;
        let den = if self.peek_punct('/') {
            self.pos += 1;
            let col = self.column();
            let (d, _) = self.int()?;
            if d.is_zero() {
                return Err(ParseError::new(self.line, col, "zero denominator"));
            }
            d
        } else {
            BigInt::from(1)
        };
        let r = Rational::new(num, den);
        Ok(if negative { -r } else { r })
    }

    /// `+` or `-` between terms, as a sign.
    fn sign(&mut self) -> Result<bool, ParseError> {
        match self.peek() {
            Some(Tok::Punct('+')) => {
                self.pos += 1;
                Ok(false)
            }
            Some(Tok::Punct('-')) => {
                self.pos += 1;
                Ok(true)
            }
            _ => Err(self.unexpected("`+` or `-`")),
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.unexpected("end of line"))
        }
    }

    /// `<re> (+|-) <im> I`.
    fn gaussian(&mut self) -> Result<GaussianRational, ParseError> {
        let re = self.rational()?;
        let negative = self.sign()?;
        let im = self.rational()?;
        self.keyword("I")?;
        Ok(GaussianRational::new(re, if negative { -im } else { im }))
    }
}

fn lines(text: &str) -> Result<Vec<Cursor>, ParseError> {
    let mut out = Vec::new();
    for (k, l) in text.lines().enumerate() {
        let c = lex(k + 1, l)?;
        if !c.is_empty() {
            out.push(c);
        }
    }
    Ok(out)
}

/// Position past the last line, for errors about missing declarations.
fn eof(text: &str) -> (usize, usize) {
    (text.lines().count().max(1), 1)
}

/// Accumulates `symbols` and `phi` lines.
#[derive(Default)]
struct PhaseLines {
    basis: Option<(SymbolBasis, usize)>,
    /// coordinate → (value, line, column of the coordinate)
    entries: BTreeMap<usize, (PhaseScalar, usize, usize)>,
}

impl PhaseLines {
    fn symbols(&mut self, c: &mut Cursor) -> Result<(), ParseError> {
        if let Some((_, line)) = &self.basis {
            return Err(ParseError::new(c.line, 1, format!("symbols already declared on line {line}")));
        }
        if !self.entries.is_empty() {
            return Err(ParseError::new(c.line, 1, "symbols must be declared before any phi line"));
        }
        let mut names: Vec<String> = Vec::new();
        while !c.at_end() {
            let (name, col) = c.word()?;
            if name == "I" {
                return Err(ParseError::new(c.line, col, "`I` is reserved for the imaginary unit of germ coefficients"));
            }
            if names.contains(&name) {
                return Err(ParseError::new(c.line, col, format!("symbol `{name}` declared twice")));
            }
            names.push(name);
        }
        let basis = SymbolBasis::new(names).map_err(|e| ParseError::new(c.line, 1, e.to_string()))?;
        self.basis = Some((basis, c.line));
        Ok(())
    }

    fn basis(&self) -> SymbolBasis {
        self.basis.as_ref().map(|b| b.0.clone()).unwrap_or_default()
    }

    fn phi(&mut self, c: &mut Cursor) -> Result<(), ParseError> {
        let (j, jcol) = c.small("coordinate")?;
        if j == 0 {
            return Err(ParseError::new(c.line, jcol, "coordinates start at 1"));
        }
        if let Some((_, line, _)) = self.entries.get(&j) {
            return Err(ParseError::new(c.line, jcol, format!("coordinate {j} already defined on line {line}")));
        }
        c.punct('=')?;
        let basis = self.basis();
        let mut terms: Vec<(Rational, Option<String>)> = Vec::new();
        let mut negative = false;
        loop {
            let r = c.rational()?;
            let r = if negative { -r } else { r };
            let sym = if c.peek_punct('*') {
                c.pos += 1;
                let (name, col) = c.word()?;
                if basis.index_of(&name).is_none() {
                    return Err(ParseError::new(c.line, col, format!("undeclared symbol `{name}`")));
                }
                Some(name)
            } else {
                None
            };
            terms.push((r, sym));
            if c.at_end() {
                break;
            }
            negative = c.sign()?;
        }
        let borrowed: Vec<(Rational, Option<&str>)> = terms.iter().map(|(r, s)| (r.clone(), s.as_deref())).collect();
        let value = phase_from_terms(&basis, &borrowed).map_err(|e| ParseError::new(c.line, jcol, e.to_string()))?;
        self.entries.insert(j, (value, c.line, jcol));
        Ok(())
    }

    /// The phases in coordinate order; coordinates must be exactly `1..=n`.
    fn finish(self, text: &str) -> Result<Option<PhaseVector>, ParseError> {
        if self.entries.is_empty() {
            return Ok(None);
        }
        let n = self.entries.len();
        if let Some((&j, (_, line, col))) = self.entries.iter().find(|(&j, _)| j > n) {
            let missing = (1..=n).find(|k| !self.entries.contains_key(k)).expect("a gap exists");
            return Err(ParseError::new(
                *line,
                *col,
                format!("coordinates must be contiguous from 1: coordinate {missing} is missing before {j}"),
            ));
        }
        let basis = self.basis();
        let values = self.entries.into_values().map(|(v, _, _)| v).collect();
        PhaseVector::new(basis, values).map(Some).map_err(|e| {
            let (l, c) = eof(text);
            ParseError::new(l, c, e.to_string())
        })
    }
}

/// Reads a phase file: one optional `symbols` line followed by `phi` lines.
pub fn parse_phase_file(text: &str) -> Result<PhaseVector, ParseError> {
    let mut acc = PhaseLines::default();
    for mut c in lines(text)? {
        let (kw, col) = c.word()?;
        match kw.as_str() {
            "symbols" => acc.symbols(&mut c)?,
            "phi" => acc.phi(&mut c)?,
            _ => return Err(ParseError::new(c.line, col, format!("unknown directive `{kw}`"))),
        }
    }
    acc.finish(text)?.ok_or_else(|| {
        let (l, c) = eof(text);
        ParseError::new(l, c, "no phi lines")
    })
}

#[derive(Debug, Clone)]
enum Lambda {
    Exact(GaussianRational),
    Phase(usize),
}

struct Positioned<T> {
    value: T,
    line: usize,
    column: usize,
}

fn positioned<T>(value: T, line: usize, column: usize) -> Positioned<T> {
    Positioned { value, line, column }
}

/// Reads a germ file into a germ with Jordan linear part.
///
/// A phase-linked eigenvalue `lambda j = phase k` stands for `e^{2πiφ_k}`,
/// with `φ_k` given by `symbols`/`phi` lines in the same file.
pub fn parse_germ_file(text: &str) -> Result<Germ, ParseError> {
    let mut phases = PhaseLines::default();
    let mut dim: Option<Positioned<usize>> = None;
    let mut maxdeg: Option<Positioned<u32>> = None;
    let mut lambdas: BTreeMap<usize, Positioned<Lambda>> = BTreeMap::new();
    let mut eps: BTreeMap<usize, Positioned<bool>> = BTreeMap::new();
    let mut terms: BTreeMap<(usize, Monomial), (GaussianRational, usize)> = BTreeMap::new();

    let coordinate = |c: &mut Cursor, dim: &Option<Positioned<usize>>, what: &str| -> Result<(usize, usize), ParseError> {
        let Some(d) = dim else {
            return Err(ParseError::new(c.line, 1, format!("`dim` must precede {what} lines")));
        };
        let (j, col) = c.small("coordinate")?;
        if j == 0 || j > d.value {
            return Err(ParseError::new(c.line, col, format!("coordinate {j} outside 1..={}", d.value)));
        }
        Ok((j, col))
    };

    for mut c in lines(text)? {
        let (kw, kcol) = c.word()?;
        match kw.as_str() {
            "symbols" => phases.symbols(&mut c)?,
            "phi" => phases.phi(&mut c)?,
            "dim" => {
                if let Some(d) = &dim {
                    return Err(ParseError::new(c.line, kcol, format!("dim already declared on line {}", d.line)));
                }
                let (n, col) = c.small("dimension")?;
                if n == 0 {
                    return Err(ParseError::new(c.line, col, "dimension must be at least 1"));
                }
                c.finish()?;
                dim = Some(positioned(n, c.line, col));
            }
            "maxdeg" => {
                if let Some(d) = &maxdeg {
                    return Err(ParseError::new(c.line, kcol, format!("maxdeg already declared on line {}", d.line)));
                }
                let (dd, col) = c.small("degree")?;
                let dd = u32::try_from(dd).ok().filter(|&d| d >= 1).ok_or_else(|| {
                    ParseError::new(c.line, col, "maxdeg must lie in 1..=4294967295")
                })?;
                c.finish()?;
                maxdeg = Some(positioned(dd, c.line, col));
            }
            "lambda" => {
                let (j, jcol) = coordinate(&mut c, &dim, "lambda")?;
                if let Some(p) = lambdas.get(&j) {
                    return Err(ParseError::new(c.line, jcol, format!("eigenvalue {j} already given on line {}", p.line)));
                }
                c.punct('=')?;
                let (mode, mcol) = c.word()?;
                let value = match mode.as_str() {
                    "exact" => {
                        let g = c.gaussian()?;
                        if g.is_zero() {
                            return Err(ParseError::new(c.line, mcol, "eigenvalues must be nonzero"));
                        }
                        Lambda::Exact(g)
                    }
                    "phase" => {
                        let (k, kcol) = c.small("phase index")?;
                        if k == 0 {
                            return Err(ParseError::new(c.line, kcol, "phase indices start at 1"));
                        }
                        Lambda::Phase(k)
                    }
                    _ => return Err(ParseError::new(c.line, mcol, format!("expected `exact` or `phase`, found `{mode}`"))),
                };
                c.finish()?;
                if let Some(first) = lambdas.values().next() {
                    if matches!(first.value, Lambda::Exact(_)) != matches!(value, Lambda::Exact(_)) {
                        return Err(ParseError::new(
                            c.line,
                            mcol,
                            format!("eigenvalues must be all exact or all phase-linked (line {} differs)", first.line),
                        ));
                    }
                }
                lambdas.insert(j, positioned(value, c.line, mcol));
            }
            "eps" => {
                let (j, jcol) = coordinate(&mut c, &dim, "eps")?;
                if let Some(p) = eps.get(&j) {
                    return Err(ParseError::new(c.line, jcol, format!("eps {j} already given on line {}", p.line)));
                }
                c.punct('=')?;
                let (v, vcol) = c.int()?;
                let flag = if v == BigInt::from(0) {
                    false
                } else if v == BigInt::from(1) {
                    true
                } else {
                    return Err(ParseError::new(c.line, vcol, "eps must be 0 or 1"));
                };
                c.finish()?;
                if flag && j == 1 {
                    return Err(ParseError::new(c.line, jcol, "the first coordinate cannot carry a nilpotent entry"));
                }
                eps.insert(j, positioned(flag, c.line, jcol));
            }
            "term" => {
                let (j, _) = coordinate(&mut c, &dim, "term")?;
                let n = dim.as_ref().expect("checked by coordinate").value;
                let Some(deg) = &maxdeg else {
                    return Err(ParseError::new(c.line, kcol, "`maxdeg` must precede term lines"));
                };
                let qcol = c.column();
                c.punct('(')?;
                let mut q: Vec<u32> = Vec::new();
                loop {
                    let (e, ecol) = c.small("exponent")?;
                    q.push(u32::try_from(e).map_err(|_| ParseError::new(c.line, ecol, "exponent is too large"))?);
                    if c.peek_punct(',') {
                        c.pos += 1;
                    } else {
                        break;
                    }
                }
                c.punct(')')?;
                if q.len() != n {
                    return Err(ParseError::new(c.line, qcol, format!("multi-index has {} entries, expected {n}", q.len())));
                }
                let total: u64 = q.iter().map(|&e| u64::from(e)).sum();
                if total < 2 || total > u64::from(deg.value) {
                    return Err(ParseError::new(
                        c.line,
                        qcol,
                        format!("term degree {total} outside [2, {}]", deg.value),
                    ));
                }
                let g = c.gaussian()?;
                c.finish()?;
                let key = (j, Monomial(q));
                if let Some((_, line)) = terms.get(&key) {
                    return Err(ParseError::new(c.line, qcol, format!("term already given on line {line}")));
                }
                terms.insert(key, (g, c.line));
            }
            _ => return Err(ParseError::new(c.line, kcol, format!("unknown directive `{kw}`"))),
        }
    }

    let (el, ec) = eof(text);
    let dim = dim.ok_or_else(|| ParseError::new(el, ec, "missing `dim` line"))?;
    let maxdeg = maxdeg.ok_or_else(|| ParseError::new(el, ec, "missing `maxdeg` line"))?;
    let n = dim.value;
    if let Some(j) = (1..=n).find(|j| !lambdas.contains_key(j)) {
        return Err(ParseError::new(dim.line, dim.column, format!("no eigenvalue given for coordinate {j}")));
    }
    let symbols_line = phases.basis.as_ref().map_or(el, |b| b.1);
    let first_phi = phases.entries.values().map(|e| e.1).min();
    let phase_vector = phases.finish(text)?;
    let spectrum = match &lambdas[&1].value {
        Lambda::Exact(_) => {
            if let Some(line) = first_phi {
                return Err(ParseError::new(line, 1, "phi lines are only used by phase-linked eigenvalues"));
            }
            Spectrum::Exact(
                lambdas
                    .values()
                    .map(|p| match &p.value {
                        Lambda::Exact(g) => g.clone(),
                        Lambda::Phase(_) => unreachable!("mixed modes rejected"),
                    })
                    .collect(),
            )
        }
        Lambda::Phase(_) => {
            let Some(pv) = phase_vector else {
                return Err(ParseError::new(lambdas[&1].line, lambdas[&1].column, "phase-linked eigenvalues need phi lines"));
            };
            let mut entries = Vec::with_capacity(n);
            for p in lambdas.values() {
                let Lambda::Phase(k) = p.value else { unreachable!("mixed modes rejected") };
                if k > pv.dim() {
                    return Err(ParseError::new(p.line, p.column, format!("phase {k} is not defined ({} phi lines)", pv.dim())));
                }
                entries.push(pv.entry(k - 1).clone());
            }
            let phases = PhaseVector::new(pv.basis().clone(), entries).map_err(|e| ParseError::new(el, ec, e.to_string()))?;
            let values = recognize_symbol_values(phases.basis())
                .map_err(|e| ParseError::new(symbols_line, 1, e.to_string()))?;
            Spectrum::Phase { phases, values }
        }
    };
    let same = |a: usize, b: usize| match &spectrum {
        Spectrum::Exact(l) => l[a] == l[b],
        Spectrum::Phase { phases, .. } => phases.same_class(a, b),
    };
    for (&j, p) in &eps {
        if p.value && !same(j - 1, j - 2) {
            return Err(ParseError::new(
                p.line,
                p.column,
                format!("eps {j} = 1 joins unequal eigenvalues {} and {j}", j - 1),
            ));
        }
    }
    let flags: Vec<bool> = (1..=n).map(|j| eps.get(&j).is_some_and(|p| p.value)).collect();
    let mut polys: Vec<Poly<GaussianRational>> = vec![Poly::zero(n, ()); n];
    for ((j, q), (g, _)) in terms {
        polys[j - 1].add_term(q, g);
    }
    Germ::new(maxdeg.value, spectrum, flags, polys).map_err(|e| ParseError::new(el, ec, e.to_string()))
}
