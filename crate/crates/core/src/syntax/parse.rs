use std::collections::BTreeMap;

use super::{check_expr, check_formula, Expr, Formula, Language, Syntax, SyntaxError, Var, VarKind, UNKNOWN_LEVEL};

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    LParen,
    RParen,
    Comma,
    Dot,
    Plus,
    Star,
    And,
    Or,
    Arrow,
    Iff,
    Tilde,
    Bot,
    Eq(u32),
    In(u32),
    Num(u64),
    Ident(String),
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::Comma => "','".into(),
            Tok::Dot => "'.'".into(),
            Tok::Plus => "'+'".into(),
            Tok::Star => "'*'".into(),
            Tok::And => "'&'".into(),
            Tok::Or => "'|'".into(),
            Tok::Arrow => "'->'".into(),
            Tok::Iff => "'<->'".into(),
            Tok::Tilde => "'~'".into(),
            Tok::Bot => "'_|_'".into(),
            Tok::Eq(l) if *l == UNKNOWN_LEVEL => "'='".into(),
            Tok::Eq(l) => format!("'={l}'"),
            Tok::In(l) => format!("'in{l}'"),
            Tok::Num(n) => format!("numeral {n}"),
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Eof => "end of input".into(),
        }
    }
}

fn syntax_err(pos: usize, expected: &str, found: &Tok) -> SyntaxError {
    SyntaxError::Syntax {
        pos,
        expected: expected.to_string(),
        found: found.describe(),
    }
}

fn digits(s: &str) -> Option<u32> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, SyntaxError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if c == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        let rest = &text[i..];
        let (tok, len) = if rest.starts_with("_|_") {
            (Tok::Bot, 3)
        } else if rest.starts_with("<->") {
            (Tok::Iff, 3)
        } else if rest.starts_with("->") {
            (Tok::Arrow, 2)
        } else if c == b'=' {
            let n = rest[1..].bytes().take_while(|b| b.is_ascii_digit()).count();
            if n == 0 {
                (Tok::Eq(UNKNOWN_LEVEL), 1)
            } else {
                match digits(&rest[1..1 + n]) {
                    Some(l) => (Tok::Eq(l), 1 + n),
                    None => {
                        return Err(SyntaxError::Syntax {
                            pos: start,
                            expected: "level after '='".into(),
                            found: rest[1..1 + n].to_string(),
                        })
                    }
                }
            }
        } else if c.is_ascii_digit() {
            let n = rest.bytes().take_while(|b| b.is_ascii_digit()).count();
            let v: u64 = rest[..n].parse().map_err(|_| SyntaxError::Syntax {
                pos: start,
                expected: "numeral".into(),
                found: rest[..n].to_string(),
            })?;
            (Tok::Num(v), n)
        } else if c.is_ascii_alphabetic() {
            let n = rest
                .bytes()
                .take_while(|b| b.is_ascii_alphanumeric() || *b == b'_')
                .count();
            let word = &rest[..n];
            match word.strip_prefix("in").and_then(digits) {
                Some(l) => (Tok::In(l), n),
                None => (Tok::Ident(word.to_string()), n),
            }
        } else {
            let t = match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b',' => Tok::Comma,
                b'.' => Tok::Dot,
                b'+' => Tok::Plus,
                b'*' => Tok::Star,
                b'&' => Tok::And,
                b'|' => Tok::Or,
                b'~' => Tok::Tilde,
                _ => {
                    return Err(SyntaxError::Syntax {
                        pos: start,
                        expected: "a token".into(),
                        found: format!("'{}'", rest.chars().next().unwrap_or(' ')),
                    })
                }
            };
            (t, 1)
        };
        out.push((tok, start));
        i += len;
    }
    out.push((Tok::Eof, text.len()));
    Ok(out)
}

/// What an identifier denotes.
enum Word {
    Var(Var),
    K(u32),
    N(u32),
    Ap(u32),
    Succ,
    All,
    Ex,
    Proves,
    Kleene,
    Seg,
    Snoc,
    Name(String),
}

fn level_index(rest: &str) -> Option<(u32, u32)> {
    match rest.split_once('_') {
        Some((l, i)) => Some((digits(l)?, digits(i)?)),
        None => Some((digits(rest)?, 1)),
    }
}

fn classify(word: &str) -> Result<Word, String> {
    let w = match word {
        "S" => return Ok(Word::Succ),
        "all" => return Ok(Word::All),
        "ex" => return Ok(Word::Ex),
        "proves" => return Ok(Word::Proves),
        "kleene" => return Ok(Word::Kleene),
        "seg" => return Ok(Word::Seg),
        "snoc" => return Ok(Word::Snoc),
        w => w,
    };
    if let Some(i) = w.strip_prefix('x').and_then(digits) {
        return Ok(Word::Var(Var::num(i)));
    }
    if let Some(l) = w.strip_prefix("Ap").and_then(digits) {
        return Ok(Word::Ap(l));
    }
    if let Some(l) = w.strip_prefix('K').and_then(digits) {
        return Ok(Word::K(l));
    }
    if let Some(l) = w.strip_prefix('N').and_then(digits) {
        return Ok(Word::N(l));
    }
    let var_of = |prefix: &str, kind: VarKind| -> Option<Result<Word, String>> {
        let (l, i) = level_index(w.strip_prefix(prefix)?)?;
        Some(if kind == VarKind::Set {
            Ok(Word::Var(Var::set(l, i)))
        } else if l == 0 {
            Err(format!("{w}: functional variables need level >= 1"))
        } else {
            Ok(Word::Var(Var { index: i, level: l, kind }))
        })
    };
    for (prefix, kind) in [
        ("LF", VarKind::Lawless),
        ("F", VarKind::Functional),
        ("A", VarKind::Lawlike),
        ("X", VarKind::Set),
    ] {
        if let Some(r) = var_of(prefix, kind) {
            return r;
        }
    }
    if w.starts_with(|c: char| c.is_ascii_lowercase()) {
        return Ok(Word::Name(w.to_string()));
    }
    Err(format!("unknown identifier '{w}'"))
}

struct Parser {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    furthest: Option<SyntaxError>,
}

type PResult<T> = Result<T, SyntaxError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn at(&self) -> usize {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&mut self, expected: &str) -> PResult<T> {
        let err = syntax_err(self.at(), expected, self.peek());
        self.record(&err);
        Err(err)
    }

    fn record(&mut self, err: &SyntaxError) {
        let pos = |e: &SyntaxError| match e {
            SyntaxError::Syntax { pos, .. } => *pos,
            _ => 0,
        };
        if self.furthest.as_ref().map_or(true, |f| pos(err) >= pos(f)) {
            self.furthest = Some(err.clone());
        }
    }

    fn expect(&mut self, tok: Tok) -> PResult<()> {
        if *self.peek() == tok {
            self.bump();
            Ok(())
        } else {
            self.fail(&tok.describe())
        }
    }

    fn word(&mut self) -> PResult<Option<Word>> {
        if let Tok::Ident(w) = self.peek().clone() {
            match classify(&w) {
                Ok(word) => Ok(Some(word)),
                Err(msg) => {
                    let e = if msg.contains("level") {
                        SyntaxError::Sort(msg)
                    } else {
                        syntax_err(self.at(), "identifier", self.peek())
                    };
                    Err(e)
                }
            }
        } else {
            Ok(None)
        }
    }

    fn formula(&mut self) -> PResult<Formula> {
        let mut lhs = self.implication()?;
        while *self.peek() == Tok::Iff {
            self.bump();
            let rhs = self.implication()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implication(&mut self) -> PResult<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(Formula::imp(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            let rhs = self.conjunction()?;
            lhs = Formula::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> PResult<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            let rhs = self.unary()?;
            lhs = Formula::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Formula> {
        if *self.peek() == Tok::Tilde {
            self.bump();
            return Ok(Formula::not(self.unary()?));
        }
        match self.word()? {
            Some(Word::All) | Some(Word::Ex) => {
                let universal = matches!(self.bump(), Tok::Ident(ref w) if w == "all");
                let v = match self.word()? {
                    Some(Word::Var(v)) => {
                        self.bump();
                        v
                    }
                    _ => return self.fail("a variable"),
                };
                self.expect(Tok::Dot)?;
                let body = self.formula()?;
                Ok(if universal {
                    Formula::forall(v, body)
                } else {
                    Formula::exists(v, body)
                })
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> PResult<Formula> {
        match self.peek() {
            Tok::Bot => {
                self.bump();
                return Ok(Formula::Falsum);
            }
            Tok::Ident(w) if w == "proves" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let t = self.term()?;
                self.expect(Tok::Comma)?;
                let inner = self.formula()?;
                self.expect(Tok::RParen)?;
                return Ok(Formula::proves(t, inner));
            }
            Tok::Ident(w) if w == "kleene" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let e = self.term()?;
                self.expect(Tok::Comma)?;
                let x = self.term()?;
                self.expect(Tok::Comma)?;
                let y = self.term()?;
                self.expect(Tok::RParen)?;
                return Ok(Formula::Kleene(e, x, y));
            }
            _ => {}
        }
        let save = self.pos;
        match self.relation() {
            Ok(f) => return Ok(f),
            Err(SyntaxError::Syntax { .. }) => self.pos = save,
            Err(e) => return Err(e),
        }
        match self.peek().clone() {
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(w) if matches!(classify(&w), Ok(Word::Name(_))) => {
                self.bump();
                Ok(Formula::Prop(w))
            }
            _ => self.fail("a formula"),
        }
    }

    fn relation(&mut self) -> PResult<Formula> {
        let lhs = self.term()?;
        match self.peek().clone() {
            Tok::Eq(l) => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::Eq(l, lhs, rhs))
            }
            Tok::In(l) => {
                self.bump();
                let rhs = self.term()?;
                Ok(Formula::Mem(l, lhs, rhs))
            }
            _ => self.fail("'=<level>' or 'in<level>'"),
        }
    }

    fn term(&mut self) -> PResult<Expr> {
        let mut lhs = self.product()?;
        while *self.peek() == Tok::Plus {
            self.bump();
            let rhs = self.product()?;
            lhs = Expr::plus(lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> PResult<Expr> {
        let mut lhs = self.postfix()?;
        while *self.peek() == Tok::Star {
            self.bump();
            let rhs = self.postfix()?;
            lhs = Expr::times(lhs, rhs);
        }
        Ok(lhs)
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        while *self.peek() == Tok::LParen {
            self.bump();
            let arg = self.term()?;
            self.expect(Tok::RParen)?;
            e = Expr::Ap(UNKNOWN_LEVEL, Box::new(e), Box::new(arg));
        }
        Ok(e)
    }

    fn args2(&mut self) -> PResult<(Expr, Expr)> {
        self.expect(Tok::LParen)?;
        let a = self.term()?;
        self.expect(Tok::Comma)?;
        let b = self.term()?;
        self.expect(Tok::RParen)?;
        Ok((a, b))
    }

    fn primary(&mut self) -> PResult<Expr> {
        match self.peek().clone() {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::numeral(n))
            }
            Tok::LParen => {
                self.bump();
                let e = self.term()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(_) => {
                let word = self.word()?.expect("identifier");
                let name = match self.bump() {
                    Tok::Ident(w) => w,
                    _ => unreachable!(),
                };
                match word {
                    Word::Var(v) => Ok(Expr::Var(v)),
                    Word::K(l) => Ok(Expr::K(l)),
                    Word::Succ => {
                        self.expect(Tok::LParen)?;
                        let a = self.term()?;
                        self.expect(Tok::RParen)?;
                        Ok(Expr::succ(a))
                    }
                    Word::N(l) => {
                        self.expect(Tok::LParen)?;
                        let a = self.term()?;
                        self.expect(Tok::RParen)?;
                        Ok(Expr::n(l, a))
                    }
                    Word::Ap(l) => {
                        let (f, t) = self.args2()?;
                        Ok(Expr::ap(l, f, t))
                    }
                    Word::Seg => {
                        let (f, t) = self.args2()?;
                        Ok(Expr::Seg(Box::new(f), Box::new(t)))
                    }
                    Word::Snoc => {
                        let (a, b) = self.args2()?;
                        Ok(Expr::Snoc(Box::new(a), Box::new(b)))
                    }
                    Word::Name(n) => Ok(Expr::Sym(n, UNKNOWN_LEVEL)),
                    _ => {
                        self.pos -= 1;
                        let _ = name;
                        self.fail("a term")
                    }
                }
            }
            _ => self.fail("a term"),
        }
    }
}

fn known_level(e: &Expr) -> Option<u32> {
    match e {
        Expr::Sym(_, l) if *l == UNKNOWN_LEVEL => None,
        Expr::Ap(l, f, _) if *l == UNKNOWN_LEVEL => known_level(f).map(|l| l.saturating_sub(1)),
        other => Some(other.level()),
    }
}

fn resolve_expr(e: Expr, expected: Option<u32>) -> PResult<Expr> {
    let need = |what: &str| {
        expected.ok_or_else(|| SyntaxError::Sort(format!("cannot determine the level of {what}")))
    };
    Ok(match e {
        Expr::Sym(name, l) if l == UNKNOWN_LEVEL => {
            let l = need(&format!("symbol '{name}'"))?;
            Expr::Sym(name, l)
        }
        Expr::Ap(l, f, t) => {
            let l = if l == UNKNOWN_LEVEL {
                match known_level(&f) {
                    Some(k) => k,
                    None => need("an application")? + 1,
                }
            } else {
                l
            };
            Expr::ap(l, resolve_expr(*f, Some(l))?, resolve_expr(*t, Some(0))?)
        }
        Expr::N(l, f) => Expr::n(l, resolve_expr(*f, Some(l))?),
        Expr::Succ(a) => Expr::succ(resolve_expr(*a, Some(0))?),
        Expr::Plus(a, b) => Expr::plus(resolve_expr(*a, Some(0))?, resolve_expr(*b, Some(0))?),
        Expr::Times(a, b) => Expr::times(resolve_expr(*a, Some(0))?, resolve_expr(*b, Some(0))?),
        Expr::Seg(a, b) => Expr::Seg(
            Box::new(resolve_expr(*a, Some(1))?),
            Box::new(resolve_expr(*b, Some(0))?),
        ),
        Expr::Snoc(a, b) => Expr::Snoc(
            Box::new(resolve_expr(*a, Some(0))?),
            Box::new(resolve_expr(*b, Some(0))?),
        ),
        other => other,
    })
}

fn resolve_formula(f: Formula) -> PResult<Formula> {
    Ok(match f {
        Formula::Eq(l, a, b) => {
            let l = if l == UNKNOWN_LEVEL { known_level(&a).or(known_level(&b)).unwrap_or(0) } else { l };
            Formula::Eq(l, resolve_expr(a, Some(l))?, resolve_expr(b, Some(l))?)
        }
        Formula::Mem(l, a, b) => {
            Formula::Mem(l, resolve_expr(a, Some(l))?, resolve_expr(b, Some(l + 1))?)
        }
        Formula::Proves(t, inner) => Formula::proves(resolve_expr(t, Some(0))?, resolve_formula(*inner)?),
        Formula::Kleene(e, x, y) => Formula::Kleene(
            resolve_expr(e, Some(0))?,
            resolve_expr(x, Some(0))?,
            resolve_expr(y, Some(0))?,
        ),
        Formula::And(a, b) => Formula::and(resolve_formula(*a)?, resolve_formula(*b)?),
        Formula::Or(a, b) => Formula::or(resolve_formula(*a)?, resolve_formula(*b)?),
        Formula::Implies(a, b) => Formula::imp(resolve_formula(*a)?, resolve_formula(*b)?),
        Formula::Forall(v, b) => Formula::forall(v, resolve_formula(*b)?),
        Formula::Exists(v, b) => Formula::exists(v, resolve_formula(*b)?),
        other => other,
    })
}

fn collect_symbols_expr(e: &Expr, out: &mut BTreeMap<String, u32>) -> PResult<()> {
    match e {
        Expr::Sym(n, l) => {
            if let Some(prev) = out.insert(n.clone(), *l) {
                if prev != *l {
                    return Err(SyntaxError::Sort(format!(
                        "symbol '{n}' used at levels {prev} and {l}"
                    )));
                }
            }
            Ok(())
        }
        Expr::Succ(a) | Expr::N(_, a) => collect_symbols_expr(a, out),
        Expr::Plus(a, b) | Expr::Times(a, b) | Expr::Ap(_, a, b) | Expr::Seg(a, b) | Expr::Snoc(a, b) => {
            collect_symbols_expr(a, out)?;
            collect_symbols_expr(b, out)
        }
        _ => Ok(()),
    }
}

fn collect_symbols(f: &Formula, out: &mut BTreeMap<String, u32>) -> PResult<()> {
    match f {
        Formula::Eq(_, a, b) | Formula::Mem(_, a, b) => {
            collect_symbols_expr(a, out)?;
            collect_symbols_expr(b, out)
        }
        Formula::Proves(t, g) => {
            collect_symbols_expr(t, out)?;
            collect_symbols(g, out)
        }
        Formula::Kleene(a, b, c) => {
            collect_symbols_expr(a, out)?;
            collect_symbols_expr(b, out)?;
            collect_symbols_expr(c, out)
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_symbols(a, out)?;
            collect_symbols(b, out)
        }
        Formula::Forall(_, b) | Formula::Exists(_, b) => collect_symbols(b, out),
        _ => Ok(()),
    }
}

fn finish<T>(p: &mut Parser, r: PResult<T>) -> PResult<T> {
    match r {
        Ok(v) if *p.peek() == Tok::Eof => Ok(v),
        Ok(_) => p.fail("end of input").map(|()| unreachable!()),
        Err(SyntaxError::Syntax { .. }) => Err(p.furthest.clone().expect("recorded error")),
        Err(e) => Err(e),
    }
}

/// In TI every lowercase name is a number variable; names are numbered after
/// the largest explicit `x<i>`.
fn name_ti_variables(toks: &mut [(Tok, usize)], lang: Language) {
    if !lang.is_ti() {
        return;
    }
    let mut next = toks
        .iter()
        .filter_map(|(t, _)| match t {
            Tok::Ident(w) => match classify(w) {
                Ok(Word::Var(v)) if v.level == 0 => Some(v.index),
                _ => None,
            },
            _ => None,
        })
        .max()
        .unwrap_or(0);
    let mut names: BTreeMap<String, u32> = BTreeMap::new();
    for (t, _) in toks.iter_mut() {
        if let Tok::Ident(w) = t {
            if matches!(classify(w), Ok(Word::Name(_))) {
                let i = *names.entry(w.clone()).or_insert_with(|| {
                    next += 1;
                    next
                });
                *w = format!("x{i}");
            }
        }
    }
}

pub fn parse_formula(text: &str, lang: Language, s: u32) -> Result<Formula, SyntaxError> {
    let mut toks = lex(text)?;
    name_ti_variables(&mut toks, lang);
    let mut p = Parser {
        toks,
        pos: 0,
        furthest: None,
    };
    let r = p.formula();
    let f = finish(&mut p, r)?;
    let f = resolve_formula(f)?;
    collect_symbols(&f, &mut BTreeMap::new())?;
    check_formula(&f, lang, s)?;
    Ok(f)
}

pub fn parse_expr(text: &str, lang: Language, s: u32) -> Result<Expr, SyntaxError> {
    let mut toks = lex(text)?;
    name_ti_variables(&mut toks, lang);
    let mut p = Parser {
        toks,
        pos: 0,
        furthest: None,
    };
    let r = p.term();
    let e = finish(&mut p, r)?;
    let expected = known_level(&e).or(Some(0));
    let e = resolve_expr(e, expected)?;
    collect_symbols_expr(&e, &mut BTreeMap::new())?;
    check_expr(&e, lang, s)?;
    Ok(e)
}

/// Parses a formula, falling back to an expression.
pub fn parse(text: &str, lang: Language, s: u32) -> Result<Syntax, SyntaxError> {
    match parse_formula(text, lang, s) {
        Ok(f) => Ok(Syntax::Formula(f)),
        Err(formula_err) => match parse_expr(text, lang, s) {
            Ok(e) => Ok(Syntax::Expr(e)),
            Err(_) => Err(formula_err),
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(text: &str) -> Formula {
        parse_formula(text, Language::SLP, 3).unwrap()
    }

    #[test]
    fn ti_names_and_bare_equality() {
        let g = parse_formula("all z0. (z0 in0 X1_1 -> z0 = 0)", Language::TI, 1).unwrap();
        let x = Expr::Var(Var::num(1));
        let body = Formula::imp(
            Formula::mem(0, x.clone(), Expr::Var(Var::set(1, 1))),
            Formula::eq(0, x, Expr::Zero),
        );
        assert_eq!(g, Formula::forall(Var::num(1), body));
        let h = parse_formula("ex y. x2 = y & X1 = X1_2", Language::TI, 1).unwrap();
        assert_eq!(h.to_string(), parse_formula(&h.to_string(), Language::TI, 1).unwrap().to_string());
        assert!(matches!(h, Formula::Exists(v, _) if v == Var::num(3)));
    }

    #[test]
    fn grammar_examples() {
        assert_eq!(
            parse_formula("Ap1(K1, 0) =0 0", Language::L, 1).unwrap(),
            Formula::eq(0, Expr::ap(1, Expr::K(1), Expr::Zero), Expr::Zero)
        );
        assert_eq!(
            parse_formula("x1 in0 X1", Language::TI, 1).unwrap(),
            Formula::mem(0, Expr::Var(Var::num(1)), Expr::Var(Var::set(1, 1)))
        );
        assert!(matches!(
            parse_formula("Ap1(x1, 0) =0 0", Language::L, 1),
            Err(SyntaxError::Sort(_))
        ));
    }

    #[test]
    fn language_restrictions() {
        assert!(matches!(
            parse_formula("x1 in0 X1_1", Language::L, 1),
            Err(SyntaxError::Language(_))
        ));
        assert!(matches!(
            parse_formula("proves(0, 0 =0 0)", Language::TI, 1),
            Err(SyntaxError::Language(_))
        ));
        assert!(parse_formula("proves(0, 0 =0 0)", Language::LP, 1).is_ok());
        assert!(matches!(
            parse_formula("proves(0, proves(0, 0 =0 0))", Language::LP, 1),
            Err(SyntaxError::Language(_))
        ));
    }

    #[test]
    fn levels_are_bounded_by_s() {
        assert!(matches!(
            parse_formula("F2_1 =2 F2_1", Language::L, 1),
            Err(SyntaxError::Sort(_))
        ));
    }

    #[test]
    fn precedence() {
        let p = f("~p & q | r -> s");
        let expected = Formula::imp(
            Formula::or(
                Formula::and(Formula::not(Formula::prop("p")), Formula::prop("q")),
                Formula::prop("r"),
            ),
            Formula::prop("s"),
        );
        assert_eq!(p, expected);
    }

    #[test]
    fn quantifier_body_extends_right() {
        let p = f("all x1. p & q");
        assert!(matches!(p, Formula::Forall(_, ref b) if matches!(**b, Formula::And(..))));
    }

    #[test]
    fn parenthesised_term_versus_formula() {
        let a = f("(x1 + 0) =0 x1");
        assert!(matches!(a, Formula::Eq(0, Expr::Plus(..), _)));
        let b = f("(x1 =0 0)");
        assert!(matches!(b, Formula::Eq(0, Expr::Var(_), Expr::Zero)));
    }

    #[test]
    fn postfix_application_and_symbols() {
        let p = f("f(x1) =0 0");
        assert_eq!(
            p,
            Formula::eq(
                0,
                Expr::ap(1, Expr::Sym("f".into(), 1), Expr::Var(Var::num(1))),
                Expr::Zero
            )
        );
        let q = f("F2_1(x1)(0) =0 0");
        assert_eq!(
            q,
            Formula::eq(
                0,
                Expr::ap(1, Expr::ap(2, Expr::Var(Var::functional(2, 1)), Expr::Var(Var::num(1))), Expr::Zero),
                Expr::Zero
            )
        );
        assert!(matches!(
            parse_formula("Ap1(f, 0) =0 0 & f =2 f", Language::L, 2),
            Err(SyntaxError::Sort(_))
        ));
    }

    #[test]
    fn iff_sugar() {
        let p = f("p <-> q");
        assert_eq!(p.as_iff().map(|(a, b)| (a.clone(), b.clone())), Some((Formula::prop("p"), Formula::prop("q"))));
    }

    #[test]
    fn syntax_error_reports_position() {
        match parse_formula("p & ", Language::L, 1) {
            Err(SyntaxError::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn parse_falls_back_to_expression() {
        assert_eq!(parse("S(0)", Language::L, 1).unwrap(), Syntax::Expr(Expr::numeral(1)));
        assert!(matches!(parse("0 =0 0", Language::L, 1).unwrap(), Syntax::Formula(_)));
    }

    #[test]
    fn round_trip_through_printer() {
        for text in [
            "all x1. ex x2. x1 + S(x2) =0 x2 * x1",
            "~(p | q) -> ~p & ~q",
            "proves(x1 + 2, all x2. x2 =0 x2) | ~proves(x1, 0 =0 0)",
            "ex LF1_1. all x1. (ex x3. x1 + x3 =0 x2 -> Ap1(LF1_1, x1) =0 Ap1(F1_1, x1))",
            "N2(F2_1) =2 K2 -> _|_",
            "seg(A1_1, 3) =0 snoc(0, 1)",
        ] {
            let p = f(text);
            let printed = p.to_string();
            assert_eq!(f(&printed), p, "{text} -> {printed}");
            assert_eq!(f(&printed).to_string(), printed);
        }
    }
}
