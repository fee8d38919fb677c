//! Gödel numbering of expressions and formulas.
//!
//! A tree is written in prefix form as a word over the 62-letter alphabet
//!
//! | digit | symbol | digit | symbol |
//! |-------|--------|-------|--------|
//! | 1 | `0` | 12 | `_|_` |
//! | 2 | `K` | 13 | prop |
//! | 3 | var | 14 | `=` |
//! | 4 | sym | 15 | `in` |
//! | 5 | `S` | 16 | proves |
//! | 6 | `+` | 17 | kleene |
//! | 7 | `*` | 18 | `&` |
//! | 8 | `N` | 19 | `\|` |
//! | 9 | `Ap` | 20 | `->` |
//! | 10 | seg | 21 | all |
//! | 11 | snoc | 22 | ex |
//!
//! followed by 23 = tick, 24 = stop, 25..=50 = `a`..`z`, 51..=60 = `0`..`9`,
//! 61 = `_` and 62 = end of name. A natural number `n` is written as `n` ticks
//! and a stop; a variable as its kind (0 number, 1 functional, 2 lawlike,
//! 3 lawless, 4 set), level and index; names letter by letter. Levels come
//! right after the `K`, `N`, `Ap`, sym, `=` and `in` tags. The code of a word
//! `d_1 ... d_m` is its value in bijective base 62, `d_1` most significant.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use super::{Expr, Formula, Syntax, SyntaxError, Var, VarKind};

pub type GodelCode = BigUint;

const BASE: u32 = 62;

const ZERO: u8 = 1;
const K: u8 = 2;
const VAR: u8 = 3;
const SYM: u8 = 4;
const SUCC: u8 = 5;
const PLUS: u8 = 6;
const TIMES: u8 = 7;
const N: u8 = 8;
const AP: u8 = 9;
const SEG: u8 = 10;
const SNOC: u8 = 11;
const FALSUM: u8 = 12;
const PROP: u8 = 13;
const EQ: u8 = 14;
const MEM: u8 = 15;
const PROVES: u8 = 16;
const KLEENE: u8 = 17;
const AND: u8 = 18;
const OR: u8 = 19;
const IMP: u8 = 20;
const ALL: u8 = 21;
const EX: u8 = 22;
const TICK: u8 = 23;
const STOP: u8 = 24;
const NAME_END: u8 = 62;

fn char_digit(c: char) -> Option<u8> {
    match c {
        'a'..='z' => Some(25 + (c as u8 - b'a')),
        '0'..='9' => Some(51 + (c as u8 - b'0')),
        '_' => Some(61),
        _ => None,
    }
}

fn digit_char(d: u8) -> Option<char> {
    match d {
        25..=50 => Some((b'a' + d - 25) as char),
        51..=60 => Some((b'0' + d - 51) as char),
        61 => Some('_'),
        _ => None,
    }
}

fn kind_id(k: VarKind) -> u32 {
    match k {
        VarKind::Number => 0,
        VarKind::Functional => 1,
        VarKind::Lawlike => 2,
        VarKind::Lawless => 3,
        VarKind::Set => 4,
    }
}

fn kind_of(id: u32) -> Option<VarKind> {
    Some(match id {
        0 => VarKind::Number,
        1 => VarKind::Functional,
        2 => VarKind::Lawlike,
        3 => VarKind::Lawless,
        4 => VarKind::Set,
        _ => return None,
    })
}

fn put_nat(out: &mut Vec<u8>, n: u32) {
    out.extend(std::iter::repeat(TICK).take(n as usize));
    out.push(STOP);
}

fn put_var(out: &mut Vec<u8>, v: &Var) {
    put_nat(out, kind_id(v.kind));
    put_nat(out, v.level);
    put_nat(out, v.index);
}

fn put_name(out: &mut Vec<u8>, name: &str) {
    for c in name.chars() {
        out.push(char_digit(c).unwrap_or(61));
    }
    out.push(NAME_END);
}

fn word_expr(e: &Expr, out: &mut Vec<u8>) {
    match e {
        Expr::Zero => out.push(ZERO),
        Expr::K(l) => {
            out.push(K);
            put_nat(out, *l);
        }
        Expr::Var(v) => {
            out.push(VAR);
            put_var(out, v);
        }
        Expr::Sym(name, l) => {
            out.push(SYM);
            put_nat(out, *l);
            put_name(out, name);
        }
        Expr::Succ(a) => {
            out.push(SUCC);
            word_expr(a, out);
        }
        Expr::Plus(a, b) | Expr::Times(a, b) | Expr::Seg(a, b) | Expr::Snoc(a, b) => {
            out.push(match e {
                Expr::Plus(..) => PLUS,
                Expr::Times(..) => TIMES,
                Expr::Seg(..) => SEG,
                _ => SNOC,
            });
            word_expr(a, out);
            word_expr(b, out);
        }
        Expr::N(l, a) => {
            out.push(N);
            put_nat(out, *l);
            word_expr(a, out);
        }
        Expr::Ap(l, a, b) => {
            out.push(AP);
            put_nat(out, *l);
            word_expr(a, out);
            word_expr(b, out);
        }
    }
}

fn word_formula(f: &Formula, out: &mut Vec<u8>) {
    match f {
        Formula::Falsum => out.push(FALSUM),
        Formula::Prop(p) => {
            out.push(PROP);
            put_name(out, p);
        }
        Formula::Eq(l, a, b) | Formula::Mem(l, a, b) => {
            out.push(if matches!(f, Formula::Eq(..)) { EQ } else { MEM });
            put_nat(out, *l);
            word_expr(a, out);
            word_expr(b, out);
        }
        Formula::Proves(t, g) => {
            out.push(PROVES);
            word_expr(t, out);
            word_formula(g, out);
        }
        Formula::Kleene(a, b, c) => {
            out.push(KLEENE);
            word_expr(a, out);
            word_expr(b, out);
            word_expr(c, out);
        }
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            out.push(match f {
                Formula::And(..) => AND,
                Formula::Or(..) => OR,
                _ => IMP,
            });
            word_formula(a, out);
            word_formula(b, out);
        }
        Formula::Forall(v, b) | Formula::Exists(v, b) => {
            out.push(if matches!(f, Formula::Forall(..)) { ALL } else { EX });
            put_var(out, v);
            word_formula(b, out);
        }
    }
}

fn word_to_code(word: &[u8]) -> BigUint {
    let base = BigUint::from(BASE);
    let mut c = BigUint::zero();
    for &d in word {
        c = c * &base + BigUint::from(d);
    }
    c
}

fn code_to_word(code: &BigUint) -> Vec<u8> {
    let base = BigUint::from(BASE);
    let mut c = code.clone();
    let mut word = Vec::new();
    while !c.is_zero() {
        let d = ((&c - BigUint::one()) % &base) + BigUint::one();
        c = (c - &d) / &base;
        word.push(d.to_u8().expect("digit below base"));
    }
    word.reverse();
    word
}

pub fn encode_expr(e: &Expr) -> GodelCode {
    let mut w = Vec::new();
    word_expr(e, &mut w);
    word_to_code(&w)
}

pub fn encode_formula(f: &Formula) -> GodelCode {
    let mut w = Vec::new();
    word_formula(f, &mut w);
    word_to_code(&w)
}

pub fn encode(s: &Syntax) -> GodelCode {
    match s {
        Syntax::Expr(e) => encode_expr(e),
        Syntax::Formula(f) => encode_formula(f),
    }
}

fn bad(msg: &str) -> SyntaxError {
    SyntaxError::Decode(msg.to_string())
}

struct Reader<'a> {
    w: &'a [u8],
    i: usize,
}

impl Reader<'_> {
    fn next(&mut self) -> Result<u8, SyntaxError> {
        let d = *self.w.get(self.i).ok_or_else(|| bad("word ends early"))?;
        self.i += 1;
        Ok(d)
    }

    fn peek(&self) -> Option<u8> {
        self.w.get(self.i).copied()
    }

    fn nat(&mut self) -> Result<u32, SyntaxError> {
        let mut n = 0u32;
        loop {
            match self.next()? {
                TICK => n = n.checked_add(1).ok_or_else(|| bad("number too large"))?,
                STOP => return Ok(n),
                _ => return Err(bad("malformed number")),
            }
        }
    }

    fn var(&mut self) -> Result<Var, SyntaxError> {
        let kind = kind_of(self.nat()?).ok_or_else(|| bad("unknown variable kind"))?;
        let level = self.nat()?;
        let index = self.nat()?;
        Ok(Var { index, level, kind })
    }

    fn name(&mut self) -> Result<String, SyntaxError> {
        let mut s = String::new();
        loop {
            let d = self.next()?;
            if d == NAME_END {
                return if s.is_empty() { Err(bad("empty name")) } else { Ok(s) };
            }
            s.push(digit_char(d).ok_or_else(|| bad("malformed name"))?);
        }
    }

    fn expr(&mut self) -> Result<Expr, SyntaxError> {
        Ok(match self.next()? {
            ZERO => Expr::Zero,
            K => Expr::K(self.nat()?),
            VAR => Expr::Var(self.var()?),
            SYM => {
                let l = self.nat()?;
                Expr::Sym(self.name()?, l)
            }
            SUCC => Expr::succ(self.expr()?),
            PLUS => Expr::plus(self.expr()?, self.expr()?),
            TIMES => Expr::times(self.expr()?, self.expr()?),
            SEG => Expr::Seg(Box::new(self.expr()?), Box::new(self.expr()?)),
            SNOC => Expr::Snoc(Box::new(self.expr()?), Box::new(self.expr()?)),
            N => {
                let l = self.nat()?;
                Expr::n(l, self.expr()?)
            }
            AP => {
                let l = self.nat()?;
                Expr::ap(l, self.expr()?, self.expr()?)
            }
            _ => return Err(bad("expected an expression symbol")),
        })
    }

    fn formula(&mut self) -> Result<Formula, SyntaxError> {
        Ok(match self.next()? {
            FALSUM => Formula::Falsum,
            PROP => Formula::Prop(self.name()?),
            EQ => {
                let l = self.nat()?;
                Formula::Eq(l, self.expr()?, self.expr()?)
            }
            MEM => {
                let l = self.nat()?;
                Formula::Mem(l, self.expr()?, self.expr()?)
            }
            PROVES => Formula::proves(self.expr()?, self.formula()?),
            KLEENE => Formula::Kleene(self.expr()?, self.expr()?, self.expr()?),
            AND => Formula::and(self.formula()?, self.formula()?),
            OR => Formula::or(self.formula()?, self.formula()?),
            IMP => Formula::imp(self.formula()?, self.formula()?),
            ALL => Formula::forall(self.var()?, self.formula()?),
            EX => Formula::exists(self.var()?, self.formula()?),
            _ => return Err(bad("expected a formula symbol")),
        })
    }

    /// Skips one complete subtree of either category.
    fn skip(&mut self) -> Result<(), SyntaxError> {
        match self.peek().ok_or_else(|| bad("word ends early"))? {
            ZERO..=SNOC => self.expr().map(|_| ()),
            FALSUM..=EX => self.formula().map(|_| ()),
            _ => Err(bad("expected a tree")),
        }
    }

    fn sub_code(&mut self) -> Result<GodelCode, SyntaxError> {
        let start = self.i;
        self.skip()?;
        Ok(word_to_code(&self.w[start..self.i]))
    }
}

fn is_expr_tag(d: u8) -> bool {
    (ZERO..=SNOC).contains(&d)
}

pub fn decode(code: &GodelCode) -> Result<Syntax, SyntaxError> {
    let w = code_to_word(code);
    let first = *w.first().ok_or_else(|| bad("0 codes nothing"))?;
    let mut r = Reader { w: &w, i: 0 };
    let s = if is_expr_tag(first) {
        Syntax::Expr(r.expr()?)
    } else {
        Syntax::Formula(r.formula()?)
    };
    if r.i != w.len() {
        return Err(bad("trailing symbols"));
    }
    Ok(s)
}

pub fn decode_formula(code: &GodelCode) -> Result<Formula, SyntaxError> {
    match decode(code)? {
        Syntax::Formula(f) => Ok(f),
        Syntax::Expr(_) => Err(bad("code of an expression, not a formula")),
    }
}

pub fn decode_expr(code: &GodelCode) -> Result<Expr, SyntaxError> {
    match decode(code)? {
        Syntax::Expr(e) => Ok(e),
        Syntax::Formula(_) => Err(bad("code of a formula, not an expression")),
    }
}

/// The outermost constructor of a coded tree, with its immediate subtrees as codes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum View {
    Zero,
    K(u32),
    Var(Var),
    Sym(String, u32),
    Succ(GodelCode),
    Plus(GodelCode, GodelCode),
    Times(GodelCode, GodelCode),
    N(u32, GodelCode),
    Ap(u32, GodelCode, GodelCode),
    Seg(GodelCode, GodelCode),
    Snoc(GodelCode, GodelCode),
    Falsum,
    Prop(String),
    Eq(u32, GodelCode, GodelCode),
    Mem(u32, GodelCode, GodelCode),
    Proves(GodelCode, GodelCode),
    Kleene(GodelCode, GodelCode, GodelCode),
    And(GodelCode, GodelCode),
    Or(GodelCode, GodelCode),
    Implies(GodelCode, GodelCode),
    Forall(Var, GodelCode),
    Exists(Var, GodelCode),
}

/// Reads the top constructor of `code` without decoding the subtrees.
pub fn view(code: &GodelCode) -> Result<View, SyntaxError> {
    let w = code_to_word(code);
    let mut r = Reader { w: &w, i: 0 };
    let v = match r.next()? {
        ZERO => View::Zero,
        K => View::K(r.nat()?),
        VAR => View::Var(r.var()?),
        SYM => {
            let l = r.nat()?;
            View::Sym(r.name()?, l)
        }
        SUCC => View::Succ(r.sub_code()?),
        PLUS => View::Plus(r.sub_code()?, r.sub_code()?),
        TIMES => View::Times(r.sub_code()?, r.sub_code()?),
        SEG => View::Seg(r.sub_code()?, r.sub_code()?),
        SNOC => View::Snoc(r.sub_code()?, r.sub_code()?),
        N => {
            let l = r.nat()?;
            View::N(l, r.sub_code()?)
        }
        AP => {
            let l = r.nat()?;
            View::Ap(l, r.sub_code()?, r.sub_code()?)
        }
        FALSUM => View::Falsum,
        PROP => View::Prop(r.name()?),
        EQ => {
            let l = r.nat()?;
            View::Eq(l, r.sub_code()?, r.sub_code()?)
        }
        MEM => {
            let l = r.nat()?;
            View::Mem(l, r.sub_code()?, r.sub_code()?)
        }
        PROVES => View::Proves(r.sub_code()?, r.sub_code()?),
        KLEENE => View::Kleene(r.sub_code()?, r.sub_code()?, r.sub_code()?),
        AND => View::And(r.sub_code()?, r.sub_code()?),
        OR => View::Or(r.sub_code()?, r.sub_code()?),
        IMP => View::Implies(r.sub_code()?, r.sub_code()?),
        ALL => View::Forall(r.var()?, r.sub_code()?),
        EX => View::Exists(r.var()?, r.sub_code()?),
        _ => return Err(bad("no tree starts with this symbol")),
    };
    if r.i != w.len() {
        return Err(bad("trailing symbols"));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Language};

    #[test]
    fn round_trip_examples() {
        let f = parse_formula("0 =0 0", Language::L, 1).unwrap();
        assert_eq!(decode_formula(&encode_formula(&f)).unwrap(), f);
        assert_ne!(encode_expr(&Expr::Zero), encode_expr(&Expr::numeral(1)));
        assert_eq!(encode_expr(&Expr::Zero), BigUint::from(1u32));
    }

    #[test]
    fn zero_and_garbage_are_rejected() {
        assert!(decode(&BigUint::zero()).is_err());
        assert!(decode(&BigUint::from(23u32)).is_err());
        let f = parse_formula("p & q", Language::L, 1).unwrap();
        let c = encode_formula(&f) * BigUint::from(BASE) + BigUint::from(1u32);
        assert!(decode(&c).is_err());
    }

    #[test]
    fn view_exposes_subcodes() {
        let f = parse_formula("all x1. x1 =0 S(0) & p", Language::L, 1).unwrap();
        match view(&encode_formula(&f)).unwrap() {
            View::Forall(v, body) => {
                assert_eq!(v, Var::num(1));
                match view(&body).unwrap() {
                    View::And(a, b) => {
                        assert_eq!(decode_formula(&a).unwrap(), parse_formula("x1 =0 1", Language::L, 1).unwrap());
                        assert_eq!(view(&b).unwrap(), View::Prop("p".into()));
                    }
                    other => panic!("{other:?}"),
                }
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn names_round_trip() {
        let f = parse_formula("f_2(x1) =0 0 & my_prop", Language::L, 1).unwrap();
        assert_eq!(decode_formula(&encode_formula(&f)).unwrap(), f);
    }
}
