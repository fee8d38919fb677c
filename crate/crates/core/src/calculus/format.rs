//! Line-oriented proof files.
//!
//! ```text
//! # comment
//! a1: assume [] |- p => p
//! a2: impI [a1] |- => p -> p
//! a3: allI{x1} [a2] |- all x1. ...
//! a4: axiom L1 [] |- all x1. ~S(x1) =0 0
//! ```
//!
//! A line is `<id>: <rule> [<premise ids>] |- <assumptions> => <conclusion>`,
//! where the assumptions are separated by `;` and `=>` may be omitted when
//! there are none. Rules carrying data write it in braces: `allI{v}`,
//! `exE{v}`, `allE{t}`, `exI{t}`, `eqSubst{v; phi}`. Premises must be defined
//! on earlier lines; the last line is the conclusion of the proof.

use std::collections::{BTreeSet, HashMap};

use super::{CalcError, Family, ProofTree, Rule, Sequent, Theory};
use crate::syntax::{parse_expr, parse_formula, Expr, Formula, Var};

fn err(line: usize, msg: impl Into<String>) -> CalcError {
    CalcError::Format { line, msg: msg.into() }
}

struct Ctx<'a> {
    th: &'a Theory,
    line: usize,
}

impl Ctx<'_> {
    fn formula(&self, text: &str) -> Result<Formula, CalcError> {
        parse_formula(text.trim(), self.th.language(), self.th.s)
            .map_err(|e| err(self.line, format!("{e} in '{}'", text.trim())))
    }

    fn expr(&self, text: &str) -> Result<Expr, CalcError> {
        parse_expr(text.trim(), self.th.language(), self.th.s)
            .map_err(|e| err(self.line, format!("{e} in '{}'", text.trim())))
    }

    fn var(&self, text: &str) -> Result<Var, CalcError> {
        match self.expr(text)? {
            Expr::Var(v) => Ok(v),
            other => Err(err(self.line, format!("{other} is not a variable"))),
        }
    }

    fn rule(&self, head: &str) -> Result<Rule, CalcError> {
        let head = head.trim();
        let (name, arg) = match head.find('{') {
            Some(i) => {
                let inner = head[i + 1..]
                    .strip_suffix('}')
                    .ok_or_else(|| err(self.line, "unclosed '{' in rule"))?;
                (head[..i].trim(), Some(inner))
            }
            None => (head, None),
        };
        let mut words = name.split_whitespace();
        let word = words.next().ok_or_else(|| err(self.line, "missing rule"))?;
        let rest: Vec<&str> = words.collect();
        let missing = || err(self.line, format!("{word} needs an argument in braces"));
        let rule = match word {
            "assume" => Rule::Assume,
            "weaken" => Rule::Weaken,
            "andI" => Rule::AndI,
            "andE1" => Rule::AndE1,
            "andE2" => Rule::AndE2,
            "orI1" => Rule::OrI1,
            "orI2" => Rule::OrI2,
            "orE" => Rule::OrE,
            "impI" => Rule::ImpI,
            "impE" => Rule::ImpE,
            "falsumE" => Rule::FalsumE,
            "refl" => Rule::Refl,
            "dne" => Rule::Dne,
            "allI" => Rule::AllI(self.var(arg.ok_or_else(missing)?)?),
            "exE" => Rule::ExE(self.var(arg.ok_or_else(missing)?)?),
            "allE" => Rule::AllE(self.expr(arg.ok_or_else(missing)?)?),
            "exI" => Rule::ExI(self.expr(arg.ok_or_else(missing)?)?),
            "eqSubst" => {
                let a = arg.ok_or_else(missing)?;
                let (v, phi) = a
                    .split_once(';')
                    .ok_or_else(|| err(self.line, "eqSubst expects {variable; formula}"))?;
                Rule::EqSubst(self.var(v)?, self.formula(phi)?)
            }
            "axiom" => {
                let family = match rest.first() {
                    Some(name) => Some(name.parse::<Family>().map_err(|e| err(self.line, e))?),
                    None => None,
                };
                return Ok(Rule::Axiom(family));
            }
            other => return Err(err(self.line, format!("unknown rule '{other}'"))),
        };
        if !rest.is_empty() {
            return Err(err(self.line, format!("unexpected '{}' after rule", rest.join(" "))));
        }
        Ok(rule)
    }

    fn sequent(&self, text: &str) -> Result<Sequent, CalcError> {
        let (ctx, concl) = match text.split_once("=>") {
            Some((a, c)) => (a, c),
            None => ("", text),
        };
        let context = ctx
            .split(';')
            .filter(|s| !s.trim().is_empty())
            .map(|s| self.formula(s))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Sequent::new(context, self.formula(concl)?))
    }
}

/// Parses a proof file in the language of `th`.
pub fn parse_proof(text: &str, th: &Theory) -> Result<ProofTree, CalcError> {
    let mut nodes: HashMap<String, ProofTree> = HashMap::new();
    let mut last = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let cx = Ctx { th, line };
        let (id, rest) = body.split_once(':').ok_or_else(|| err(line, "expected '<id>:'"))?;
        let id = id.trim().to_string();
        if id.is_empty() || nodes.contains_key(&id) {
            return Err(err(line, format!("missing or repeated node id '{id}'")));
        }
        let open = rest.find('[').ok_or_else(|| err(line, "expected '[premises]'"))?;
        let close = rest[open..].find(']').map(|j| open + j).ok_or_else(|| err(line, "unclosed '['"))?;
        let rule = cx.rule(&rest[..open])?;
        let premises = rest[open + 1..close]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(|p| nodes.get(p).cloned().ok_or_else(|| err(line, format!("unknown premise '{p}'"))))
            .collect::<Result<Vec<_>, _>>()?;
        let seq = rest[close + 1..]
            .trim_start()
            .strip_prefix("|-")
            .ok_or_else(|| err(line, "expected '|-'"))?;
        let node = ProofTree::new(id.clone(), rule, premises, cx.sequent(seq)?);
        nodes.insert(id.clone(), node);
        last = Some(id);
    }
    let last = last.ok_or_else(|| err(0, "empty proof"))?;
    Ok(nodes.remove(&last).expect("last node was inserted"))
}

fn rule_text(rule: &Rule) -> String {
    match rule {
        Rule::Assume => "assume".into(),
        Rule::Weaken => "weaken".into(),
        Rule::AndI => "andI".into(),
        Rule::AndE1 => "andE1".into(),
        Rule::AndE2 => "andE2".into(),
        Rule::OrI1 => "orI1".into(),
        Rule::OrI2 => "orI2".into(),
        Rule::OrE => "orE".into(),
        Rule::ImpI => "impI".into(),
        Rule::ImpE => "impE".into(),
        Rule::FalsumE => "falsumE".into(),
        Rule::Refl => "refl".into(),
        Rule::Dne => "dne".into(),
        Rule::AllI(v) => format!("allI{{{v}}}"),
        Rule::ExE(v) => format!("exE{{{v}}}"),
        Rule::AllE(t) => format!("allE{{{t}}}"),
        Rule::ExI(t) => format!("exI{{{t}}}"),
        Rule::EqSubst(v, phi) => format!("eqSubst{{{v}; {phi}}}"),
        Rule::Axiom(None) => "axiom".into(),
        Rule::Axiom(Some(f)) => format!("axiom {f}"),
    }
}

/// Prints a proof in file form, premises first. Node ids are kept when they
/// are unique and renumbered otherwise.
pub fn print_proof(p: &ProofTree) -> String {
    fn ids(p: &ProofTree, seen: &mut BTreeSet<String>) -> bool {
        p.premises.iter().all(|q| ids(q, seen)) && seen.insert(p.id.clone())
    }
    let keep = ids(p, &mut BTreeSet::new());
    fn go(p: &ProofTree, keep: bool, counter: &mut usize, out: &mut String) -> String {
        let prem: Vec<String> = p.premises.iter().map(|q| go(q, keep, counter, out)).collect();
        *counter += 1;
        let id = if keep { p.id.clone() } else { format!("n{counter}") };
        let ctx: Vec<String> = p.sequent.context.iter().map(|f| f.to_string()).collect();
        let seq = if ctx.is_empty() {
            p.sequent.conclusion.to_string()
        } else {
            format!("{} => {}", ctx.join("; "), p.sequent.conclusion)
        };
        out.push_str(&format!("{id}: {} [{}] |- {seq}\n", rule_text(&p.rule), prem.join(", ")));
        id
    }
    let mut out = String::new();
    go(p, keep, &mut 0, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{check_proof, TheoryId};

    const TEXT: &str = "\
# p -> p, then a universal closure
a1: assume [] |- p; x1 =0 x1 => p
a2: impI [a1] |- x1 =0 x1 => p -> p
a3: refl [] |- x1 =0 x1
a4: andI [a2, a3] |- x1 =0 x1 => (p -> p) & x1 =0 x1
a5: weaken [a4] |- x1 =0 x1 => (p -> p) & x1 =0 x1
a6: impI [a5] |- x1 =0 x1 -> (p -> p) & x1 =0 x1
a7: allI{x1} [a6] |- all x2. (x2 =0 x2 -> (p -> p) & x2 =0 x2)
";

    #[test]
    fn parse_check_print_round_trip() {
        let th = Theory::new(TheoryId::L, 1);
        let p = parse_proof(TEXT, &th).unwrap();
        assert!(check_proof(&th, &p).is_ok());
        let printed = print_proof(&p);
        assert_eq!(parse_proof(&printed, &th).unwrap(), p);
    }

    #[test]
    fn unknown_premise() {
        let th = Theory::new(TheoryId::L, 1);
        let e = parse_proof("a: weaken [b] |- p", &th).unwrap_err();
        assert!(matches!(e, CalcError::Format { line: 1, .. }));
    }

    #[test]
    fn axiom_family_citation() {
        let th = Theory::new(TheoryId::L, 1);
        let p = parse_proof("a: axiom L2 [] |- all x1. x1 + 0 =0 x1", &th).unwrap();
        assert_eq!(p.rule, Rule::Axiom(Some(Family::L2)));
        assert!(check_proof(&th, &p).is_ok());
    }
}
