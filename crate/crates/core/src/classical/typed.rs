use super::{Arith, Assignment, EvalError, Scope};
use crate::syntax::{Expr, Formula, Var, VarKind};

/// The full finite type structure: `U_0 = {0..N-1}`, `U_{k+1}` all subsets
/// of `U_k`. An element of `U_{k+1}` is the bit mask of its members' indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypedUniverse {
    pub s: u32,
    pub n: u64,
    pub arith: Arith,
    sizes: Vec<u64>,
}

const MAX_CARRIER: u64 = 1 << 16;

impl TypedUniverse {
    /// Universe with `s <= 2` and `N <= 3`.
    pub fn new(s: u32, n: u64) -> Result<TypedUniverse, EvalError> {
        if s > 2 || n > 3 {
            return Err(EvalError::Capacity(format!("s = {s}, N = {n} exceeds s <= 2, N <= 3")));
        }
        TypedUniverse::unchecked(s, n)
    }

    /// Universe bounded only by carrier sizes of at most 2^16.
    pub fn unchecked(s: u32, n: u64) -> Result<TypedUniverse, EvalError> {
        if n == 0 {
            return Err(EvalError::Capacity("N must be positive".into()));
        }
        let mut sizes = vec![n];
        for k in 0..s as usize {
            if sizes[k] > 64 || (1u64 << sizes[k]) > MAX_CARRIER {
                return Err(EvalError::Capacity(format!("U_{} has 2^{} elements", k + 1, sizes[k])));
            }
            sizes.push(1u64 << sizes[k]);
        }
        Ok(TypedUniverse { s, n, arith: Arith { cap: n - 1 }, sizes })
    }

    pub fn size(&self, level: u32) -> u64 {
        self.sizes[level as usize]
    }

    /// Indices of the members of `x`, an element of `U_level` with `level >= 1`.
    pub fn members(&self, level: u32, x: u64) -> impl Iterator<Item = u64> + '_ {
        (0..self.sizes[level as usize - 1]).filter(move |&i| (x >> i) & 1 == 1)
    }

    pub fn is_member(&self, level: u32, z: u64, x: u64) -> bool {
        z < self.sizes[level as usize] && (x >> z) & 1 == 1
    }

    /// Builds the element of `U_{level}` with the given members.
    pub fn set_of(&self, level: u32, members: &[u64]) -> Result<u64, EvalError> {
        let below = self.sizes[level as usize - 1];
        let mut x = 0u64;
        for &m in members {
            if m >= below {
                return Err(EvalError::Sort(format!("{m} is not an element of U_{}", level - 1)));
            }
            x |= 1 << m;
        }
        Ok(x)
    }

    /// Writes an element as nested braces.
    pub fn render(&self, level: u32, x: u64) -> String {
        if level == 0 {
            return x.to_string();
        }
        let inner: Vec<String> = self.members(level, x).map(|z| self.render(level - 1, z)).collect();
        format!("{{{}}}", inner.join(","))
    }

    /// Reads an element written as by `render`.
    pub fn parse_element(&self, level: u32, text: &str) -> Result<u64, EvalError> {
        let text = text.trim();
        let bad = || EvalError::Sort(format!("'{text}' is not an element of U_{level}"));
        if level == 0 {
            let v: u64 = text.parse().map_err(|_| bad())?;
            return if v < self.n { Ok(v) } else { Err(bad()) };
        }
        let inner = text.strip_prefix('{').and_then(|t| t.strip_suffix('}')).ok_or_else(bad)?;
        let mut members = Vec::new();
        let (mut depth, mut start) = (0i32, 0usize);
        for (i, c) in inner.char_indices() {
            match c {
                '{' => depth += 1,
                '}' => depth -= 1,
                ',' if depth == 0 => {
                    members.push(self.parse_element(level - 1, &inner[start..i])?);
                    start = i + 1;
                }
                _ => {}
            }
        }
        if !inner[start..].trim().is_empty() {
            members.push(self.parse_element(level - 1, &inner[start..])?);
        }
        self.set_of(level, &members)
    }

    pub(crate) fn term(&self, e: &Expr, scope: &Scope<u64>) -> Result<u64, EvalError> {
        let a = self.arith;
        Ok(match e {
            Expr::Zero => 0,
            Expr::Var(v) => *scope.lookup(v)?,
            Expr::Succ(x) => a.succ(self.term(x, scope)?),
            Expr::Plus(x, y) => a.add(self.term(x, scope)?, self.term(y, scope)?),
            Expr::Times(x, y) => a.mul(self.term(x, scope)?, self.term(y, scope)?),
            other => return Err(EvalError::Unsupported(format!("{other} is not a TI term"))),
        })
    }

    fn domain(&self, v: &Var) -> Result<u64, EvalError> {
        match v.kind {
            VarKind::Number | VarKind::Set if v.level <= self.s => Ok(self.sizes[v.level as usize]),
            _ => Err(EvalError::Sort(format!("{v} does not range over U"))),
        }
    }

    fn eval(&self, f: &Formula, scope: &mut Scope<u64>) -> Result<bool, EvalError> {
        Ok(match f {
            Formula::Falsum => false,
            Formula::Eq(_, a, b) => self.term(a, scope)? == self.term(b, scope)?,
            Formula::Mem(l, a, b) => {
                let z = self.term(a, scope)?;
                let x = self.term(b, scope)?;
                self.is_member(*l, z, x)
            }
            Formula::And(a, b) => self.eval(a, scope)? && self.eval(b, scope)?,
            Formula::Or(a, b) => self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Implies(a, b) => !self.eval(a, scope)? || self.eval(b, scope)?,
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let universal = matches!(f, Formula::Forall(..));
                for x in 0..self.domain(v)? {
                    scope.push(*v, x);
                    let r = self.eval(b, scope);
                    scope.pop();
                    if r? != universal {
                        return Ok(!universal);
                    }
                }
                universal
            }
            other => return Err(EvalError::Unsupported(format!("{other} is not a TI formula"))),
        })
    }
}

/// Classical truth of a TI formula in `u` under `e`.
pub fn eval_ti(u: &TypedUniverse, phi: &Formula, e: &Assignment<u64>) -> Result<bool, EvalError> {
    u.eval(phi, &mut Scope::new(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_formula, Language};

    fn ti(text: &str) -> Formula {
        parse_formula(text, Language::TI, 2).unwrap()
    }

    #[test]
    fn carrier_sizes() {
        let u = TypedUniverse::new(2, 2).unwrap();
        assert_eq!((u.size(0), u.size(1), u.size(2)), (2, 4, 16));
        assert!(TypedUniverse::new(3, 2).is_err());
        assert_eq!(TypedUniverse::unchecked(3, 2).unwrap().size(3), 65536);
        assert!(TypedUniverse::unchecked(3, 3).is_err());
    }

    #[test]
    fn examples() {
        let e = Assignment::new();
        let u2 = TypedUniverse::new(2, 2).unwrap();
        assert!(eval_ti(&u2, &ti("0 = 0"), &e).unwrap());
        assert!(eval_ti(&u2, &ti("ex X1_1. all z. (z in0 X1_1 <-> z = 0)"), &e).unwrap());
        let u3 = TypedUniverse::new(1, 3).unwrap();
        assert!(eval_ti(&u3, &ti("all x1. ~S(x1) = 0"), &e).unwrap());
        assert!(eval_ti(&u3, &ti("S(S(S(0))) = S(S(0))"), &e).unwrap());
        assert!(!eval_ti(&u2, &ti("_|_"), &e).unwrap());
    }

    #[test]
    fn unbound_variable() {
        let u = TypedUniverse::new(1, 2).unwrap();
        assert_eq!(eval_ti(&u, &ti("x1 = 0"), &Assignment::new()), Err(EvalError::Unbound(Var::num(1))));
        let e = Assignment::new().with(Var::num(1), 0);
        assert!(eval_ti(&u, &ti("x1 = 0"), &e).unwrap());
    }

    #[test]
    fn render_and_parse() {
        let u = TypedUniverse::new(2, 2).unwrap();
        for x in 0..u.size(2) {
            let text = u.render(2, x);
            assert_eq!(u.parse_element(2, &text).unwrap(), x);
        }
        assert_eq!(u.render(1, u.set_of(1, &[0]).unwrap()), "{0}");
        assert!(u.parse_element(1, "{2}").is_err());
    }

    #[test]
    fn extensional_membership() {
        let u = TypedUniverse::new(2, 2).unwrap();
        let f = ti("all X1_1. all X1_2. ((all z. (z in0 X1_1 <-> z in0 X1_2)) -> X1_1 = X1_2)");
        assert!(eval_ti(&u, &f, &Assignment::new()).unwrap());
    }
}
