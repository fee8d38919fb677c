//! Plain-text frame files.
//!
//! ```text
//! # comment
//! states r t
//! root r
//! succ r -> r t
//! atoms t: p
//! numbers 3
//! token g 1
//! table g @ r: 0=1
//! table g @ t: 0=1 1=0
//! reader f: r=0 t=1
//! ```
//!
//! `succ` lines may be omitted for leaves. Table values at level 1 are
//! numbers; at higher levels they are token names, `K<l>` or `N<l>(v)`.

use std::collections::BTreeMap;
use std::fmt::Write;

use super::{BethError, BethFrame, Token, TokenKind, Value};

fn err(line: usize, msg: impl Into<String>) -> BethError {
    BethError::Format { line, msg: msg.into() }
}

fn parse_value(text: &str, frame: &BethFrame, line: usize) -> Result<Value, BethError> {
    let text = text.trim();
    if let Ok(n) = text.parse::<u32>() {
        return Ok(Value::Num(n));
    }
    if let Some(rest) = text.strip_prefix('N') {
        if let Some(open) = rest.find('(') {
            if let (Ok(l), Some(inner)) = (rest[..open].parse::<u32>(), rest[open + 1..].strip_suffix(')')) {
                return Ok(Value::N(l, Box::new(parse_value(inner, frame, line)?)));
            }
        }
    }
    if let Some(l) = text.strip_prefix('K').and_then(|r| r.parse::<u32>().ok()) {
        return Ok(Value::K(l));
    }
    frame
        .token_index(text)
        .map(Value::Tok)
        .ok_or_else(|| err(line, format!("unknown value '{text}'")))
}

fn state(frame: &BethFrame, name: &str, line: usize) -> Result<usize, BethError> {
    frame
        .state_index(name)
        .ok_or_else(|| err(line, format!("unknown state '{name}'")))
}

/// Parses a frame file. The result is not validated.
pub fn parse_frame(text: &str) -> Result<BethFrame, BethError> {
    let mut frame = BethFrame::new(&[]);
    let mut have_states = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (head, rest) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let rest = rest.trim();
        if head != "states" && !have_states {
            return Err(err(line, "the first directive must be 'states'"));
        }
        match head {
            "states" => {
                if have_states {
                    return Err(err(line, "duplicate 'states'"));
                }
                let names: Vec<&str> = rest.split_whitespace().collect();
                frame = BethFrame::new(&names);
                have_states = true;
            }
            "root" => frame.root = state(&frame, rest, line)?,
            "succ" => {
                let (from, to) = rest
                    .split_once("->")
                    .ok_or_else(|| err(line, "expected 'succ s -> t ...'"))?;
                let s = state(&frame, from.trim(), line)?;
                let mut next = Vec::new();
                for t in to.split_whitespace() {
                    next.push(state(&frame, t, line)?);
                }
                frame.succ[s] = next;
            }
            "atoms" => {
                let (s, atoms) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected 'atoms s: p q'"))?;
                let s = state(&frame, s.trim(), line)?;
                frame.props[s].extend(atoms.split_whitespace().map(str::to_string));
            }
            "numbers" => {
                frame.numbers = rest
                    .parse()
                    .ok()
                    .filter(|&n: &u32| n >= 1)
                    .ok_or_else(|| err(line, "expected a positive number"))?
            }
            "token" => {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                let [name, level] = parts[..] else {
                    return Err(err(line, "expected 'token name level'"));
                };
                let level: u32 = level
                    .parse()
                    .ok()
                    .filter(|&l| l >= 1)
                    .ok_or_else(|| err(line, "token levels start at 1"))?;
                if frame.token_index(name).is_some() {
                    return Err(err(line, format!("duplicate token '{name}'")));
                }
                let rows = vec![BTreeMap::new(); frame.states.len()];
                frame.tokens.push(Token { name: name.into(), level, kind: TokenKind::Table(rows) });
            }
            "table" => {
                let (lhs, entries) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected 'table g @ s: n=v ...'"))?;
                let (tok, s) = lhs
                    .split_once('@')
                    .ok_or_else(|| err(line, "expected 'table g @ s: n=v ...'"))?;
                let t = frame
                    .token_index(tok.trim())
                    .ok_or_else(|| err(line, format!("undeclared token '{}'", tok.trim())))?;
                let s = state(&frame, s.trim(), line)?;
                let mut parsed = Vec::new();
                for entry in entries.split_whitespace() {
                    let (n, v) = entry
                        .split_once('=')
                        .ok_or_else(|| err(line, format!("bad entry '{entry}'")))?;
                    let n: u32 = n.parse().map_err(|_| err(line, format!("bad argument '{n}'")))?;
                    parsed.push((n, parse_value(v, &frame, line)?));
                }
                match &mut frame.tokens[t].kind {
                    TokenKind::Table(rows) => rows[s].extend(parsed),
                    TokenKind::Reader(_) => return Err(err(line, "readers have no tables")),
                }
            }
            "reader" => {
                let (name, entries) = rest
                    .split_once(':')
                    .ok_or_else(|| err(line, "expected 'reader f: s=d ...'"))?;
                let mut digits = vec![0; frame.states.len()];
                for entry in entries.split_whitespace() {
                    let (s, d) = entry
                        .split_once('=')
                        .ok_or_else(|| err(line, format!("bad entry '{entry}'")))?;
                    let s = state(&frame, s, line)?;
                    digits[s] = d.parse().map_err(|_| err(line, format!("bad digit '{d}'")))?;
                }
                frame.tokens.push(Token {
                    name: name.trim().into(),
                    level: 1,
                    kind: TokenKind::Reader(digits),
                });
            }
            other => return Err(err(line, format!("unknown directive '{other}'"))),
        }
    }
    if !have_states {
        return Err(err(0, "no states"));
    }
    Ok(frame)
}

/// Renders a frame in the file format; `parse_frame` reads it back unchanged.
pub fn print_frame(frame: &BethFrame) -> String {
    let mut out = String::new();
    let name = |s: usize| frame.states[s].as_str();
    writeln!(out, "states {}", frame.states.join(" ")).unwrap();
    writeln!(out, "root {}", name(frame.root)).unwrap();
    for (s, next) in frame.succ.iter().enumerate() {
        let to: Vec<&str> = next.iter().map(|&t| name(t)).collect();
        writeln!(out, "succ {} -> {}", name(s), to.join(" ")).unwrap();
    }
    for (s, props) in frame.props.iter().enumerate() {
        if !props.is_empty() {
            let ps: Vec<&str> = props.iter().map(String::as_str).collect();
            writeln!(out, "atoms {}: {}", name(s), ps.join(" ")).unwrap();
        }
    }
    writeln!(out, "numbers {}", frame.numbers).unwrap();
    for tok in &frame.tokens {
        match &tok.kind {
            TokenKind::Table(_) => writeln!(out, "token {} {}", tok.name, tok.level).unwrap(),
            TokenKind::Reader(digits) => {
                let ds: Vec<String> = digits
                    .iter()
                    .enumerate()
                    .map(|(s, d)| format!("{}={d}", name(s)))
                    .collect();
                writeln!(out, "reader {}: {}", tok.name, ds.join(" ")).unwrap();
            }
        }
    }
    for tok in &frame.tokens {
        if let TokenKind::Table(rows) = &tok.kind {
            for (s, row) in rows.iter().enumerate() {
                if row.is_empty() {
                    continue;
                }
                let es: Vec<String> = row
                    .iter()
                    .map(|(n, v)| format!("{n}={}", frame.render_value(v)))
                    .collect();
                writeln!(out, "table {} @ {}: {}", tok.name, name(s), es.join(" ")).unwrap();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::beth::{lem_fixture, mp_fixture, Violation};

    #[test]
    fn fixtures_round_trip() {
        for f in [lem_fixture(), mp_fixture()] {
            assert_eq!(parse_frame(&print_frame(&f)).unwrap(), f);
        }
    }

    #[test]
    fn tables_and_levels() {
        let text = "states r t\nsucc r -> t\nsucc t -> t\nnumbers 2\ntoken g 1\ntoken h 2\n\
                    table g @ r: 0=1\ntable g @ t: 0=1 1=0\ntable h @ t: 0=g 1=K1\n";
        let f = parse_frame(text).unwrap();
        assert_eq!(parse_frame(&print_frame(&f)).unwrap(), f);
        let v = f.validate();
        // h is undefined at r but the path r, t, t, ... defines it at t.
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn monotonicity_violation_is_reported() {
        let f = parse_frame("states a b\nsucc a -> b\natoms a: p\n").unwrap();
        let v = f.validate();
        assert_eq!(v.len(), 1);
        assert!(matches!(&v[0], Violation::Monotonicity { atom, .. } if atom == "p"));
    }

    #[test]
    fn empty_frame_has_no_root() {
        assert_eq!(BethFrame::new(&[]).validate(), vec![Violation::NoRoot]);
        assert!(parse_frame("").is_err());
    }

    #[test]
    fn errors_carry_lines() {
        let e = parse_frame("states a\nsucc a -> b\n").unwrap_err();
        assert!(matches!(e, BethError::Format { line: 2, .. }));
    }
}
