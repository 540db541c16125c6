use super::poly::{BigQ, MultiPoly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use crate::numerics::{Scalar, C64};
use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

/// Shared expression tree over the rationals with integer powers.
///
/// Formulas are written once against the [`Scalar`] trait and instantiated
/// either with `Complex64` or with `Expr`; the latter is then reduced exactly.
#[derive(Clone)]
pub struct Expr(Arc<Node>);

pub enum Node {
    Var(String),
    Const(BigQ),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Expr, i64),
}

impl Expr {
    pub fn node(&self) -> &Node {
        &self.0
    }

    pub(crate) fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn var(name: &str) -> Expr {
        Expr(Arc::new(Node::Var(name.to_string())))
    }

    pub fn constant(c: BigQ) -> Expr {
        Expr(Arc::new(Node::Const(c)))
    }

    pub fn int(n: i64) -> Expr {
        Expr::constant(BigQ::from_integer(BigInt::from(n)))
    }

    pub fn rat(n: i64, d: i64) -> Expr {
        Expr::constant(BigQ::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn as_const(&self) -> Option<&BigQ> {
        match self.node() {
            Node::Const(c) => Some(c),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.as_const().is_some_and(|c| c.is_zero())
    }

    pub fn sum(items: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        let mut k = BigQ::zero();
        for e in items {
            match e.node() {
                Node::Const(c) => k += c,
                Node::Add(xs) => {
                    for x in xs {
                        match x.as_const() {
                            Some(c) => k += c,
                            None => out.push(x.clone()),
                        }
                    }
                }
                _ => out.push(e),
            }
        }
        if !k.is_zero() {
            out.push(Expr::constant(k));
        }
        match out.len() {
            0 => Expr::int(0),
            1 => out.pop().unwrap(),
            _ => Expr(Arc::new(Node::Add(out))),
        }
    }

    pub fn product(items: Vec<Expr>) -> Expr {
        let mut out = Vec::new();
        let mut k = BigQ::one();
        for e in items {
            match e.node() {
                Node::Const(c) => k *= c,
                Node::Mul(xs) => {
                    for x in xs {
                        match x.as_const() {
                            Some(c) => k *= c,
                            None => out.push(x.clone()),
                        }
                    }
                }
                _ => out.push(e),
            }
        }
        if k.is_zero() {
            return Expr::int(0);
        }
        if !k.is_one() || out.is_empty() {
            out.insert(0, Expr::constant(k));
        }
        match out.len() {
            1 => out.pop().unwrap(),
            _ => Expr(Arc::new(Node::Mul(out))),
        }
    }

    pub fn pow(&self, n: i64) -> Expr {
        if n == 0 {
            return Expr::int(1);
        }
        if n == 1 {
            return self.clone();
        }
        match self.node() {
            Node::Const(c) => {
                if c.is_zero() {
                    assert!(n > 0, "zero to a negative power");
                    return Expr::int(0);
                }
                let base = if n < 0 { BigQ::one() / c } else { c.clone() };
                Expr::constant(num_traits::pow(base, n.unsigned_abs() as usize))
            }
            Node::Pow(b, m) => b.pow(m * n),
            _ => Expr(Arc::new(Node::Pow(self.clone(), n))),
        }
    }

    pub fn inv(&self) -> Expr {
        self.pow(-1)
    }

    /// Variables occurring in the expression.
    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut seen = HashMap::new();
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out, &mut seen);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>, seen: &mut HashMap<usize, ()>) {
        if seen.insert(self.id(), ()).is_some() {
            return;
        }
        match self.node() {
            Node::Var(v) => {
                out.insert(v.clone());
            }
            Node::Const(_) => {}
            Node::Add(xs) | Node::Mul(xs) => xs.iter().for_each(|x| x.collect_vars(out, seen)),
            Node::Pow(b, _) => b.collect_vars(out, seen),
        }
    }

    /// True when no negative power occurs.
    pub fn is_polynomial(&self) -> bool {
        match self.node() {
            Node::Var(_) | Node::Const(_) => true,
            Node::Add(xs) | Node::Mul(xs) => xs.iter().all(Expr::is_polynomial),
            Node::Pow(b, n) => *n > 0 && b.is_polynomial(),
        }
    }

    pub fn eval_complex(&self, env: &HashMap<String, C64>) -> Result<C64> {
        let mut memo = HashMap::new();
        self.eval_c(env, &mut memo)
    }

    fn eval_c(&self, env: &HashMap<String, C64>, memo: &mut HashMap<usize, C64>) -> Result<C64> {
        if let Some(v) = memo.get(&self.id()) {
            return Ok(*v);
        }
        let v = match self.node() {
            Node::Var(name) => *env
                .get(name)
                .ok_or_else(|| Error::InvalidArgument(format!("no value for {name}")))?,
            Node::Const(c) => C64::new(c.to_f64().unwrap_or(f64::NAN), 0.0),
            Node::Add(xs) => {
                let mut s = C64::new(0.0, 0.0);
                for x in xs {
                    s += x.eval_c(env, memo)?;
                }
                s
            }
            Node::Mul(xs) => {
                let mut s = C64::new(1.0, 0.0);
                for x in xs {
                    s *= x.eval_c(env, memo)?;
                }
                s
            }
            Node::Pow(b, n) => {
                let v = b.eval_c(env, memo)?;
                if *n < 0 && v.norm() == 0.0 {
                    return Err(Error::DivisionByZero("expression pole".into()));
                }
                v.powi(*n as i32)
            }
        };
        memo.insert(self.id(), v);
        Ok(v)
    }

    /// Replace variables by expressions; untouched subtrees are shared.
    pub fn substitute(&self, bindings: &HashMap<String, Expr>) -> Expr {
        let mut memo = HashMap::new();
        self.subst(bindings, &mut memo)
    }

    fn subst(&self, b: &HashMap<String, Expr>, memo: &mut HashMap<usize, Expr>) -> Expr {
        if let Some(v) = memo.get(&self.id()) {
            return v.clone();
        }
        let v = match self.node() {
            Node::Var(name) => b.get(name).cloned().unwrap_or_else(|| self.clone()),
            Node::Const(_) => self.clone(),
            Node::Add(xs) => Expr::sum(xs.iter().map(|x| x.subst(b, memo)).collect()),
            Node::Mul(xs) => Expr::product(xs.iter().map(|x| x.subst(b, memo)).collect()),
            Node::Pow(x, n) => x.subst(b, memo).pow(*n),
        };
        memo.insert(self.id(), v.clone());
        v
    }

    /// Symbolic derivative.
    pub fn differentiate(&self, var: &str) -> Expr {
        let mut memo = HashMap::new();
        self.diff(var, &mut memo)
    }

    fn diff(&self, var: &str, memo: &mut HashMap<usize, Expr>) -> Expr {
        if let Some(v) = memo.get(&self.id()) {
            return v.clone();
        }
        let v = match self.node() {
            Node::Var(name) => Expr::int(if name == var { 1 } else { 0 }),
            Node::Const(_) => Expr::int(0),
            Node::Add(xs) => Expr::sum(xs.iter().map(|x| x.diff(var, memo)).collect()),
            Node::Mul(xs) => {
                let mut terms = Vec::new();
                for i in 0..xs.len() {
                    let d = xs[i].diff(var, memo);
                    if d.is_zero() {
                        continue;
                    }
                    let mut f: Vec<Expr> = xs.to_vec();
                    f[i] = d;
                    terms.push(Expr::product(f));
                }
                Expr::sum(terms)
            }
            Node::Pow(b, n) => {
                let d = b.diff(var, memo);
                if d.is_zero() {
                    Expr::int(0)
                } else {
                    Expr::product(vec![Expr::int(*n), b.pow(n - 1), d])
                }
            }
        };
        memo.insert(self.id(), v.clone());
        v
    }

    /// Full expansion into a rational function.
    pub fn to_ratfunc(&self) -> Result<RatFunc> {
        let mut memo = HashMap::new();
        self.to_rf(&mut memo)
    }

    fn to_rf(&self, memo: &mut HashMap<usize, RatFunc>) -> Result<RatFunc> {
        if let Some(v) = memo.get(&self.id()) {
            return Ok(v.clone());
        }
        let v = match self.node() {
            Node::Var(name) => RatFunc::var(name),
            Node::Const(c) => RatFunc::constant(c.clone()),
            Node::Add(xs) => {
                let mut s = RatFunc::int(0);
                for x in xs {
                    s = s.add(&x.to_rf(memo)?);
                }
                s
            }
            Node::Mul(xs) => {
                let mut s = RatFunc::int(1);
                for x in xs {
                    s = s.mul(&x.to_rf(memo)?);
                }
                s
            }
            Node::Pow(b, n) => b.to_rf(memo)?.pow(*n)?,
        };
        memo.insert(self.id(), v.clone());
        Ok(v)
    }

    /// Expansion of a polynomial expression over the given variables.
    pub fn to_poly(&self, vars: &[String]) -> Result<MultiPoly> {
        let mut memo = HashMap::new();
        self.to_p(vars, &mut memo)
    }

    fn to_p(&self, vars: &[String], memo: &mut HashMap<usize, MultiPoly>) -> Result<MultiPoly> {
        if let Some(v) = memo.get(&self.id()) {
            return Ok(v.clone());
        }
        let v = match self.node() {
            Node::Var(name) => MultiPoly::var_in(vars, name)?,
            Node::Const(c) => MultiPoly::constant(vars, c.clone()),
            Node::Add(xs) => {
                let mut s = MultiPoly::zero(vars);
                for x in xs {
                    s = s.add(&x.to_p(vars, memo)?);
                }
                s
            }
            Node::Mul(xs) => {
                let mut s = MultiPoly::one(vars);
                for x in xs {
                    s = s.try_mul(&x.to_p(vars, memo)?)?;
                }
                s
            }
            Node::Pow(b, n) => {
                if *n < 0 {
                    return Err(Error::InvalidArgument(
                        "negative power in polynomial".into(),
                    ));
                }
                b.to_p(vars, memo)?.try_pow(*n as u32)?
            }
        };
        memo.insert(self.id(), v.clone());
        Ok(v)
    }
}

impl Scalar for Expr {
    fn from_i64(n: i64) -> Self {
        Expr::int(n)
    }
    fn powi(&self, n: i64) -> Self {
        self.pow(n)
    }
    fn ratio(n: i64, d: i64) -> Self {
        Expr::rat(n, d)
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $f:ident, $body:expr) => {
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(self, rhs)
            }
        }
        impl $tr<&Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(self.clone(), rhs.clone())
            }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(self, rhs.clone())
            }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(self.clone(), rhs)
            }
        }
        impl $tr<i64> for Expr {
            type Output = Expr;
            fn $f(self, rhs: i64) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(self, Expr::int(rhs))
            }
        }
        impl $tr<i64> for &Expr {
            type Output = Expr;
            fn $f(self, rhs: i64) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(self.clone(), Expr::int(rhs))
            }
        }
        impl $tr<Expr> for i64 {
            type Output = Expr;
            fn $f(self, rhs: Expr) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(Expr::int(self), rhs)
            }
        }
        impl $tr<&Expr> for i64 {
            type Output = Expr;
            fn $f(self, rhs: &Expr) -> Expr {
                let g: fn(Expr, Expr) -> Expr = $body;
                g(Expr::int(self), rhs.clone())
            }
        }
    };
}

binop!(Add, add, |a, b| Expr::sum(vec![a, b]));
binop!(Sub, sub, |a, b| Expr::sum(vec![a, -b]));
binop!(Mul, mul, |a, b| Expr::product(vec![a, b]));
binop!(Div, div, |a, b| Expr::product(vec![a, b.inv()]));

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        match self.node() {
            Node::Const(c) => Expr::constant(-c),
            _ => Expr::product(vec![Expr::int(-1), self]),
        }
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -(self.clone())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.node() {
            Node::Var(v) => write!(f, "{v}"),
            Node::Const(c) => {
                if c.is_negative() || !c.is_integer() {
                    write!(f, "({c})")
                } else {
                    write!(f, "{c}")
                }
            }
            Node::Add(xs) => {
                write!(f, "(")?;
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " + ")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Node::Mul(xs) => {
                for (i, x) in xs.iter().enumerate() {
                    if i > 0 {
                        write!(f, "*")?;
                    }
                    write!(f, "{x}")?;
                }
                Ok(())
            }
            Node::Pow(b, n) => match b.node() {
                Node::Var(_) => write!(f, "{b}^{n}"),
                Node::Add(_) => write!(f, "{b}^{n}"),
                _ => write!(f, "({b})^{n}"),
            },
        }
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    #[allow(clippy::erasing_op)]
    fn folding() {
        let x = Expr::var("x");
        assert!((&x * 0).is_zero());
        assert_eq!((&x * 1).to_string(), "x");
        assert_eq!((Expr::int(2) + 3).to_string(), "5");
        assert_eq!(x.pow(2).pow(3).to_string(), "x^6");
    }

    #[test]
    fn ratfunc_and_derivative() {
        let x = Expr::var("x");
        let y = Expr::var("y");
        let f = (&x * &x - &y * &y) / (&x - &y);
        assert!(f
            .to_ratfunc()
            .unwrap()
            .equal(&(&x + &y).to_ratfunc().unwrap()));
        let d = (1 / &x).differentiate("x");
        assert!(d
            .to_ratfunc()
            .unwrap()
            .equal(&(-1 / (&x * &x)).to_ratfunc().unwrap()));
    }

    #[test]
    fn numeric_evaluation() {
        let x = Expr::var("x");
        let f = (&x + 1).pow(3) / &x;
        let mut env = HashMap::new();
        env.insert("x".to_string(), C64::new(2.0, 0.0));
        assert!((f.eval_complex(&env).unwrap() - 13.5).norm() < 1e-14);
    }

    #[test]
    fn substitution_shares_structure() {
        let x = Expr::var("x");
        let t = Expr::var("t");
        let f = x.pow(2) + &x;
        let mut b = HashMap::new();
        b.insert("x".to_string(), &t + 1);
        let g = f.substitute(&b);
        assert!(g
            .to_ratfunc()
            .unwrap()
            .equal(&((&t + 1).pow(2) + &t + 1).to_ratfunc().unwrap()));
        assert_eq!(
            g.free_vars().into_iter().collect::<Vec<_>>(),
            vec!["t".to_string()]
        );
    }
}
