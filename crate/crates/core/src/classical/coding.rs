use std::collections::{BTreeMap, BTreeSet};

use super::{Assignment, EvalError, TypedUniverse};
use crate::syntax::{Var, VarKind};

/// A hereditarily finite object over the natural numbers. Sets carry their
/// level so that the empty set of each level is distinct.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Obj {
    Num(u64),
    Set(u32, BTreeSet<Obj>),
}

impl Obj {
    pub fn level(&self) -> u32 {
        match self {
            Obj::Num(_) => 0,
            Obj::Set(l, _) => *l,
        }
    }

    pub fn empty(level: u32) -> Obj {
        Obj::Set(level, BTreeSet::new())
    }

    pub fn from_universe(u: &TypedUniverse, level: u32, x: u64) -> Obj {
        if level == 0 {
            return Obj::Num(x);
        }
        Obj::Set(level, u.members(level, x).map(|z| Obj::from_universe(u, level - 1, z)).collect())
    }

    pub fn to_universe(&self, u: &TypedUniverse) -> Result<u64, EvalError> {
        match self {
            Obj::Num(n) if *n < u.n => Ok(*n),
            Obj::Set(l, members) if *l <= u.s => {
                let idx = members.iter().map(|m| m.to_universe(u)).collect::<Result<Vec<_>, _>>()?;
                u.set_of(*l, &idx)
            }
            other => Err(EvalError::Capacity(format!("{other:?} is not in the universe"))),
        }
    }

    fn members(&self) -> Result<&BTreeSet<Obj>, EvalError> {
        match self {
            Obj::Set(_, m) => Ok(m),
            Obj::Num(_) => Err(EvalError::Decode("a number where a set was expected".into())),
        }
    }

    fn num(&self) -> Result<u64, EvalError> {
        match self {
            Obj::Num(n) => Ok(*n),
            Obj::Set(..) => Err(EvalError::Decode("a set where a number was expected".into())),
        }
    }
}

/// `{x}^n`: `x` wrapped in `n` singletons.
pub fn lift(n: u32, x: Obj) -> Obj {
    (0..n).fold(x, |acc, _| {
        let l = acc.level() + 1;
        Obj::Set(l, BTreeSet::from([acc]))
    })
}

fn unlift(n: u32, x: &Obj) -> Result<Obj, EvalError> {
    let mut cur = x.clone();
    for _ in 0..n {
        let m = cur.members()?;
        if m.len() != 1 {
            return Err(EvalError::Decode("expected a singleton".into()));
        }
        cur = m.iter().next().expect("one member").clone();
    }
    Ok(cur)
}

pub fn cantor_pair(x: u64, y: u64) -> Option<u64> {
    let s = x.checked_add(y)?;
    s.checked_mul(s.checked_add(1)?).map(|p| p / 2)?.checked_add(y)
}

pub fn cantor_unpair(z: u64) -> (u64, u64) {
    let mut w = (((8.0 * z as f64 + 1.0).sqrt() - 1.0) / 2.0) as u64;
    while w * (w + 1) / 2 > z {
        w -= 1;
    }
    while (w + 1) * (w + 2) / 2 <= z {
        w += 1;
    }
    let y = z - w * (w + 1) / 2;
    (w - y, y)
}

/// Pair and sequence codings at every level; level-0 codes above `limit`
/// are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Coder {
    pub limit: u64,
}

impl Default for Coder {
    fn default() -> Self {
        Coder { limit: u64::MAX }
    }
}

impl Coder {
    fn code(&self, c: Option<u64>) -> Result<u64, EvalError> {
        match c {
            Some(c) if c <= self.limit => Ok(c),
            _ => Err(EvalError::Capacity(format!("level-0 code exceeds {}", self.limit))),
        }
    }

    fn need_level(k: u32, xs: &[&Obj]) -> Result<(), EvalError> {
        match xs.iter().find(|x| x.level() != k) {
            Some(x) => Err(EvalError::Sort(format!("level-{} object where level {k} was expected", x.level()))),
            None => Ok(()),
        }
    }

    /// `[x, y]` at level `k`.
    pub fn pair(&self, k: u32, x: &Obj, y: &Obj) -> Result<Obj, EvalError> {
        Coder::need_level(k, &[x, y])?;
        if k == 0 {
            return Ok(Obj::Num(self.code(cantor_pair(x.num()?, y.num()?))?));
        }
        let n = k - 1;
        let mut out = BTreeSet::new();
        for (tag, set) in [(0, x), (1, y)] {
            for z in set.members()? {
                out.insert(self.pair(n, &lift(n, Obj::Num(tag)), z)?);
            }
        }
        Ok(Obj::Set(k, out))
    }

    pub fn unpair(&self, k: u32, p: &Obj) -> Result<(Obj, Obj), EvalError> {
        Coder::need_level(k, &[p])?;
        if k == 0 {
            let (x, y) = cantor_unpair(p.num()?);
            return Ok((Obj::Num(x), Obj::Num(y)));
        }
        let n = k - 1;
        let (mut x, mut y) = (BTreeSet::new(), BTreeSet::new());
        for m in p.members()? {
            let (tag, z) = self.unpair(n, m)?;
            match unlift(n, &tag)?.num()? {
                0 => x.insert(z),
                1 => y.insert(z),
                t => return Err(EvalError::Decode(format!("pair tag {t}"))),
            };
        }
        Ok((Obj::Set(k, x), Obj::Set(k, y)))
    }

    /// `<x_1, ..., x_m>` at level `k`.
    pub fn seq(&self, k: u32, xs: &[Obj]) -> Result<Obj, EvalError> {
        Coder::need_level(k, &xs.iter().collect::<Vec<_>>())?;
        if k == 0 {
            let mut code = 0u64;
            for x in xs.iter().rev() {
                code = self.code(cantor_pair(x.num()?, code).and_then(|c| c.checked_add(1)))?;
            }
            return Ok(Obj::Num(code));
        }
        let n = k - 1;
        let num = |i: usize| lift(n, Obj::Num(i as u64));
        let mut out = BTreeSet::from([self.pair(n, &num(0), &num(xs.len()))?]);
        for (i, x) in xs.iter().enumerate() {
            for z in x.members()? {
                out.insert(self.pair(n, &num(i + 1), z)?);
            }
        }
        Ok(Obj::Set(k, out))
    }

    pub fn unseq(&self, k: u32, s: &Obj) -> Result<Vec<Obj>, EvalError> {
        Coder::need_level(k, &[s])?;
        if k == 0 {
            let mut out = Vec::new();
            let mut code = s.num()?;
            while code > 0 {
                let (x, rest) = cantor_unpair(code - 1);
                out.push(Obj::Num(x));
                code = rest;
            }
            return Ok(out);
        }
        let n = k - 1;
        let mut len = None;
        let mut parts: Vec<(u64, Obj)> = Vec::new();
        for m in s.members()? {
            let (tag, z) = self.unpair(n, m)?;
            match unlift(n, &tag)?.num()? {
                0 => {
                    if len.replace(unlift(n, &z)?.num()?).is_some() {
                        return Err(EvalError::Decode("two length entries".into()));
                    }
                }
                i => parts.push((i, z)),
            }
        }
        let len = len.ok_or_else(|| EvalError::Decode("no length entry".into()))?;
        let mut out = vec![BTreeSet::new(); len as usize];
        for (i, z) in parts {
            if i > len {
                return Err(EvalError::Decode(format!("entry {i} beyond length {len}")));
            }
            out[i as usize - 1].insert(z);
        }
        Ok(out.into_iter().map(|m| Obj::Set(k, m)).collect())
    }

    /// Sequence of objects of mixed levels, each lifted to the highest one.
    pub fn seq_mixed(&self, xs: &[Obj]) -> Result<Obj, EvalError> {
        let m = xs.iter().map(Obj::level).max().unwrap_or(0);
        let lifted: Vec<Obj> = xs.iter().map(|x| lift(m - x.level(), x.clone())).collect();
        self.seq(m, &lifted)
    }

    /// Codes the values of the level-`k` variables as one object: a level-1 set of
    /// `<i, n>` for `k = 0`, and the level-`k` set of `<i, z>` for `z` in the
    /// value of `x_i` otherwise.
    pub fn encode_eval(&self, k: u32, vals: &BTreeMap<u32, Obj>) -> Result<Obj, EvalError> {
        let mut out = BTreeSet::new();
        for (&i, v) in vals {
            if k == 0 {
                out.insert(self.seq(0, &[Obj::Num(i as u64), Obj::Num(v.num()?)])?);
            } else {
                Coder::need_level(k, &[v])?;
                for z in v.members()? {
                    out.insert(self.seq_mixed(&[Obj::Num(i as u64), z.clone()])?);
                }
            }
        }
        Ok(Obj::Set(k.max(1), out))
    }

    fn entry(&self, k: u32, m: &Obj) -> Result<(u64, Obj), EvalError> {
        let level = if k == 0 { 0 } else { k - 1 };
        match self.unseq(level, m)?.as_slice() {
            [i, z] => Ok((unlift(level, i)?.num()?, z.clone())),
            _ => Err(EvalError::Decode("evaluation entry is not a pair".into())),
        }
    }

    /// `Val_k(f, i)`.
    pub fn val(&self, k: u32, f: &Obj, i: u32) -> Result<Obj, EvalError> {
        let mut found = BTreeSet::new();
        for m in f.members()? {
            let (j, z) = self.entry(k, m)?;
            if j == i as u64 {
                found.insert(z);
            }
        }
        if k > 0 {
            return Ok(Obj::Set(k, found));
        }
        match found.len() {
            0 => Ok(Obj::Num(0)),
            1 => Ok(found.into_iter().next().expect("one value")),
            _ => Err(EvalError::Decode(format!("x{i} has several values"))),
        }
    }

    /// `Subst_k(f, i, y)`.
    pub fn subst(&self, k: u32, f: &Obj, i: u32, y: &Obj) -> Result<Obj, EvalError> {
        let mut out = BTreeSet::new();
        for m in f.members()? {
            if self.entry(k, m)?.0 != i as u64 {
                out.insert(m.clone());
            }
        }
        let single = BTreeMap::from([(i, y.clone())]);
        if let Obj::Set(_, added) = self.encode_eval(k, &single)? {
            out.extend(added);
        }
        Ok(Obj::Set(k.max(1), out))
    }
}

/// A place where the coded evaluations and the native assignment differ.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub level: u32,
    pub note: String,
}

/// Encodes the assignment level by level and checks `Val_k` against the native
/// values and the `Subst_k` equations for every variable and every candidate
/// value in `u`. Structural differences between the two forms are reported.
pub fn crosscheck_assignment(u: &TypedUniverse, e: &Assignment<u64>, coder: &Coder) -> Result<Vec<Divergence>, EvalError> {
    let mut out = Vec::new();
    for k in 0..=u.s {
        let vals: BTreeMap<u32, Obj> = e
            .iter()
            .filter(|(v, _)| v.level == k && matches!(v.kind, VarKind::Number | VarKind::Set))
            .map(|(v, x)| (v.index, Obj::from_universe(u, k, *x)))
            .collect();
        let f = coder.encode_eval(k, &vals)?;
        if k == 0 {
            out.push(Divergence {
                level: 0,
                note: format!("the level-0 evaluation is coded as a level-1 set ({} entries)", vals.len()),
            });
        }
        for (&i, v) in &vals {
            if coder.val(k, &f, i)? != *v {
                out.push(Divergence { level: k, note: format!("Val_{k}(f, {i}) differs from {}", Var::set(k, i)) });
            }
            for y in 0..u.size(k) {
                let y = Obj::from_universe(u, k, y);
                let g = coder.subst(k, &f, i, &y)?;
                if coder.val(k, &g, i)? != y {
                    out.push(Divergence { level: k, note: format!("Val_{k}(Subst_{k}(f, {i}, y), {i}) != y") });
                }
                for &j in vals.keys().filter(|&&j| j != i) {
                    if coder.val(k, &g, j)? != coder.val(k, &f, j)? {
                        out.push(Divergence { level: k, note: format!("Subst_{k} at {i} changed x{j}") });
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all(u: &TypedUniverse, k: u32) -> Vec<Obj> {
        (0..u.size(k)).map(|x| Obj::from_universe(u, k, x)).collect()
    }

    #[test]
    fn cantor_examples() {
        assert_eq!(cantor_pair(0, 0), Some(0));
        assert_eq!(cantor_pair(1, 0), Some(1));
        assert_eq!(cantor_pair(0, 1), Some(2));
        for z in 0..500 {
            let (x, y) = cantor_unpair(z);
            assert_eq!(cantor_pair(x, y), Some(z));
        }
        assert_eq!(cantor_pair(u64::MAX, 1), None);
    }

    #[test]
    fn pairs_round_trip_and_are_injective() {
        let u = TypedUniverse::new(2, 2).unwrap();
        let c = Coder::default();
        for k in 0..=2 {
            let objs = all(&u, k);
            let mut seen = BTreeSet::new();
            for x in &objs {
                for y in &objs {
                    let p = c.pair(k, x, y).unwrap();
                    assert_eq!(p.level(), k);
                    assert_eq!(c.unpair(k, &p).unwrap(), (x.clone(), y.clone()));
                    assert!(seen.insert(p));
                }
            }
        }
    }

    #[test]
    fn sequences_round_trip() {
        let u = TypedUniverse::new(2, 2).unwrap();
        let c = Coder::default();
        for k in 0..=2 {
            let objs = all(&u, k);
            assert_eq!(c.unseq(k, &c.seq(k, &[]).unwrap()).unwrap(), Vec::<Obj>::new());
            for x in &objs {
                for y in &objs {
                    let xs = vec![x.clone(), y.clone(), x.clone()];
                    let s = c.seq(k, &xs).unwrap();
                    assert_eq!(s.level(), k);
                    assert_eq!(c.unseq(k, &s).unwrap(), xs);
                }
            }
        }
    }

    #[test]
    fn level_zero_capacity() {
        let c = Coder { limit: 3 };
        assert_eq!(c.pair(0, &Obj::Num(0), &Obj::Num(0)).unwrap(), Obj::Num(0));
        assert!(matches!(c.pair(0, &Obj::Num(1), &Obj::Num(1)), Err(EvalError::Capacity(_))));
    }

    #[test]
    fn mixed_levels_lift() {
        let c = Coder::default();
        let s = c.seq_mixed(&[Obj::Num(1), Obj::empty(1)]).unwrap();
        assert_eq!(s.level(), 1);
        assert_eq!(c.unseq(1, &s).unwrap(), vec![lift(1, Obj::Num(1)), Obj::empty(1)]);
    }

    #[test]
    fn evaluations_and_substitution() {
        let u = TypedUniverse::new(2, 2).unwrap();
        let c = Coder::default();
        let e = Assignment::new()
            .with(Var::num(1), 1)
            .with(Var::num(2), 0)
            .with(Var::set(1, 1), 0b10)
            .with(Var::set(2, 1), 0b1001)
            .with(Var::set(2, 3), 0);
        let d = crosscheck_assignment(&u, &e, &c).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].level, 0);
    }
}
