use super::expr::{Expr, Node};
use super::poly::{invmod, mulmod, submod, BigQ, MultiPoly};
use super::ratfunc::RatFunc;
use crate::error::{Error, Result};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;

/// Rational function kept as `coeff · Π atom_i^{e_i}` over the atoms of a
/// [`FactorCtx`]. Products are free; sums expand only the non-common part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factored {
    coeff: BigQ,
    exps: BTreeMap<usize, i64>,
}

impl Factored {
    pub fn zero() -> Self {
        Factored {
            coeff: BigQ::zero(),
            exps: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigQ) -> Self {
        Factored {
            coeff: c,
            exps: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigQ {
        &self.coeff
    }

    pub fn exps(&self) -> &BTreeMap<usize, i64> {
        &self.exps
    }

    pub fn mul(&self, other: &Factored) -> Factored {
        if self.is_zero() || other.is_zero() {
            return Factored::zero();
        }
        let mut e = self.exps.clone();
        for (k, v) in &other.exps {
            let s = e.entry(*k).or_insert(0);
            *s += v;
            if *s == 0 {
                e.remove(k);
            }
        }
        Factored {
            coeff: &self.coeff * &other.coeff,
            exps: e,
        }
    }

    pub fn pow(&self, n: i64) -> Result<Factored> {
        if n == 0 {
            return Ok(Factored::constant(BigQ::one()));
        }
        if self.is_zero() {
            return if n > 0 {
                Ok(Factored::zero())
            } else {
                Err(Error::DivisionByZeroPoly)
            };
        }
        let base = if n < 0 {
            BigQ::one() / &self.coeff
        } else {
            self.coeff.clone()
        };
        Ok(Factored {
            coeff: num_traits::pow(base, n.unsigned_abs() as usize),
            exps: self.exps.iter().map(|(k, v)| (*k, v * n)).collect(),
        })
    }

    pub fn neg(&self) -> Factored {
        Factored {
            coeff: -&self.coeff,
            exps: self.exps.clone(),
        }
    }
}

struct Probe {
    var: usize,
    a1: MultiPoly,
    a0: MultiPoly,
}

/// Atom basis plus caches for exact evaluation of [`Expr`] trees.
pub struct FactorCtx {
    vars: Vec<String>,
    atoms: Vec<MultiPoly>,
    probes: Vec<Option<Probe>>,
    pow_cache: HashMap<(usize, u32), MultiPoly>,
    memo: HashMap<usize, Factored>,
    keep: Vec<Expr>,
    point: Vec<u64>,
}

impl FactorCtx {
    pub fn new(vars: &[&str]) -> Self {
        let vars: Vec<String> = vars.iter().map(|s| s.to_string()).collect();
        // fixed pseudo-random evaluation point for the divisibility probe
        let mut x = 0x9e37_79b9_7f4a_7c15u64;
        let point = (0..vars.len())
            .map(|_| {
                x ^= x << 13;
                x ^= x >> 7;
                x ^= x << 17;
                x % super::poly::MODP
            })
            .collect();
        FactorCtx {
            vars,
            atoms: Vec::new(),
            probes: Vec::new(),
            pow_cache: HashMap::new(),
            memo: HashMap::new(),
            keep: Vec::new(),
            point,
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn atoms(&self) -> &[MultiPoly] {
        &self.atoms
    }

    /// Register the factors of a polynomial expression as atoms. Seeds should
    /// be irreducible; otherwise they may shadow finer factors found later.
    pub fn seed(&mut self, e: &Expr) -> Result<()> {
        let p = e.to_poly(&self.vars)?;
        self.factor_poly(&p);
        Ok(())
    }

    fn register(&mut self, p: MultiPoly) -> usize {
        let mut probe = None;
        for i in 0..self.vars.len() {
            if p.degree_in(i) == 1 {
                let mut a1 = Vec::new();
                let mut a0 = Vec::new();
                for (m, c) in p.terms() {
                    let mut e = m.0.clone();
                    if e[i] == 1 {
                        e[i] = 0;
                        a1.push((e, c.clone()));
                    } else {
                        a0.push((e, c.clone()));
                    }
                }
                probe = Some(Probe {
                    var: i,
                    a1: MultiPoly::from_terms(&self.vars, a1),
                    a0: MultiPoly::from_terms(&self.vars, a0),
                });
                break;
            }
        }
        self.atoms.push(p);
        self.probes.push(probe);
        self.atoms.len() - 1
    }

    /// Cheap necessary condition for `atom | p` via a root of the atom in
    /// one variable modulo a large prime.
    fn may_divide(&self, id: usize, p: &MultiPoly) -> bool {
        let Some(pr) = &self.probes[id] else {
            return true;
        };
        let (Some(a1), Some(a0)) = (pr.a1.eval_mod(&self.point), pr.a0.eval_mod(&self.point))
        else {
            return true;
        };
        let Some(inv) = invmod(a1) else { return true };
        let root = mulmod(submod(0, a0), inv);
        let mut pt = self.point.clone();
        pt[pr.var] = root;
        match p.eval_mod(&pt) {
            Some(v) => v == 0,
            None => true,
        }
    }

    /// Factor a polynomial over the current atoms; an unfactored remainder
    /// becomes a new atom.
    pub fn factor_poly(&mut self, p: &MultiPoly) -> Factored {
        if p.is_zero() {
            return Factored::zero();
        }
        let p = if p.vars() == self.vars.as_slice() {
            p.clone()
        } else {
            p.with_vars(&self.vars).expect("variables of the context")
        };
        let (mut c, mut rest) = p.primitive();
        let mut exps = BTreeMap::new();
        for id in 0..self.atoms.len() {
            if rest.is_constant() {
                break;
            }
            while self.may_divide(id, &rest) {
                match rest.div_exact(&self.atoms[id]) {
                    Some(q) => {
                        rest = q;
                        *exps.entry(id).or_insert(0) += 1;
                    }
                    None => break,
                }
            }
        }
        if rest.is_constant() {
            c *= rest.constant_value().unwrap();
        } else {
            let (k, prim) = rest.primitive();
            c *= k;
            let id = self.register(prim);
            exps.insert(id, 1);
        }
        Factored { coeff: c, exps }
    }

    fn atom_pow(&mut self, id: usize, e: u32) -> MultiPoly {
        if let Some(p) = self.pow_cache.get(&(id, e)) {
            return p.clone();
        }
        let p = if e == 1 {
            self.atoms[id].clone()
        } else {
            let half = self.atom_pow(id, e / 2);
            let sq = half.mul(&half);
            if e % 2 == 1 {
                sq.mul(&self.atoms[id])
            } else {
                sq
            }
        };
        self.pow_cache.insert((id, e), p.clone());
        p
    }

    fn expand_exps(&mut self, exps: &BTreeMap<usize, i64>) -> Result<(MultiPoly, MultiPoly)> {
        let mut num = MultiPoly::one(&self.vars);
        let mut den = MultiPoly::one(&self.vars);
        let mut items: Vec<(usize, i64)> = exps.iter().map(|(k, v)| (*k, *v)).collect();
        items.sort_by_key(|(k, v)| self.atoms[*k].len() * v.unsigned_abs() as usize);
        for (k, v) in items {
            let p = self.atom_pow(k, v.unsigned_abs() as u32);
            if v > 0 {
                num = num.try_mul(&p)?;
            } else {
                den = den.try_mul(&p)?;
            }
        }
        Ok((num, den))
    }

    /// Expanded numerator and denominator.
    pub fn expand(&mut self, f: &Factored) -> Result<RatFunc> {
        let (n, d) = self.expand_exps(&f.exps)?;
        RatFunc::new(n.scale(&f.coeff), d)
    }

    pub fn add(&mut self, a: &Factored, b: &Factored) -> Result<Factored> {
        self.add_many(&[a.clone(), b.clone()])
    }

    /// Sum via the common factor: `Σ f_i = g · Σ (f_i / g)` with `g` the
    /// exponent-wise minimum, so that only the remainders are expanded.
    pub fn add_many(&mut self, items: &[Factored]) -> Result<Factored> {
        let items: Vec<&Factored> = items.iter().filter(|f| !f.is_zero()).collect();
        match items.len() {
            0 => return Ok(Factored::zero()),
            1 => return Ok(items[0].clone()),
            _ => {}
        }
        let mut keys: Vec<usize> = items.iter().flat_map(|f| f.exps.keys().copied()).collect();
        keys.sort_unstable();
        keys.dedup();
        let mut g = BTreeMap::new();
        for k in &keys {
            let m = items
                .iter()
                .map(|f| *f.exps.get(k).unwrap_or(&0))
                .min()
                .unwrap();
            if m != 0 {
                g.insert(*k, m);
            }
        }
        let mut sum = MultiPoly::zero(&self.vars);
        for f in &items {
            let mut rem = BTreeMap::new();
            for k in &keys {
                let e = f.exps.get(k).unwrap_or(&0) - g.get(k).unwrap_or(&0);
                if e != 0 {
                    rem.insert(*k, e);
                }
            }
            let (n, _) = self.expand_exps(&rem)?;
            sum = sum.add(&n.scale(&f.coeff));
        }
        if sum.is_zero() {
            return Ok(Factored::zero());
        }
        let s = self.factor_poly(&sum);
        Ok(s.mul(&Factored {
            coeff: BigQ::one(),
            exps: g,
        }))
    }

    /// Exact value of an expression.
    pub fn eval(&mut self, e: &Expr) -> Result<Factored> {
        if let Some(v) = self.memo.get(&e.id()) {
            return Ok(v.clone());
        }
        let v = match e.node() {
            Node::Var(_) => {
                let p = e.to_poly(&self.vars)?;
                self.factor_poly(&p)
            }
            Node::Const(c) => Factored::constant(c.clone()),
            Node::Mul(xs) => {
                let mut acc = Factored::constant(BigQ::one());
                for x in xs {
                    acc = acc.mul(&self.eval(x)?);
                    if acc.is_zero() {
                        break;
                    }
                }
                acc
            }
            Node::Pow(b, n) => self.eval(b)?.pow(*n)?,
            Node::Add(xs) => {
                if e.is_polynomial() {
                    let p = e.to_poly(&self.vars)?;
                    self.factor_poly(&p)
                } else {
                    let parts = xs
                        .iter()
                        .map(|x| self.eval(x))
                        .collect::<Result<Vec<_>>>()?;
                    self.add_many(&parts)?
                }
            }
        };
        self.keep.push(e.clone());
        self.memo.insert(e.id(), v.clone());
        Ok(v)
    }

    /// Exact zero test of `lhs - rhs`. On failure the leading term of the
    /// expanded residual numerator is returned.
    pub fn difference(
        &mut self,
        lhs: &Expr,
        rhs: &Expr,
    ) -> Result<std::result::Result<(), String>> {
        let a = self.eval(lhs)?;
        let b = self.eval(rhs)?;
        let d = self.add(&a, &b.neg())?;
        if d.is_zero() {
            return Ok(Ok(()));
        }
        let r = self.expand(&d)?;
        let lt = r
            .num()
            .leading()
            .map(|(m, c)| {
                let t = MultiPoly::from_terms(r.num().vars(), vec![(m.0.clone(), c.clone())]);
                t.to_string()
            })
            .unwrap_or_default();
        Ok(Err(lt))
    }

    pub fn display(&self, f: &Factored) -> String {
        if f.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        let _ = write!(s, "{}", f.coeff);
        for (k, v) in &f.exps {
            let _ = write!(s, " * ({})^{}", self.atoms[*k], v);
        }
        if f.coeff.is_negative() {
            s.insert(0, ' ');
        }
        s.trim().to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products_factor_over_seeds() {
        let mut ctx = FactorCtx::new(&["x", "y"]);
        let x = Expr::var("x");
        let y = Expr::var("y");
        ctx.seed(&(&x - 1)).unwrap();
        ctx.seed(&(&x - &y)).unwrap();
        let e = ((&x - 1).pow(3) * (&x - &y)).to_poly(ctx.vars()).unwrap();
        let f = ctx.factor_poly(&e);
        assert_eq!(f.exps().values().copied().collect::<Vec<_>>(), vec![3, 1]);
    }

    #[test]
    fn sums_with_common_factors() {
        let mut ctx = FactorCtx::new(&["x", "y"]);
        let x = Expr::var("x");
        let y = Expr::var("y");
        // x/(x-y) - y/(x-y) = 1
        let e = &x / (&x - &y) - &y / (&x - &y);
        let f = ctx.eval(&e).unwrap();
        assert_eq!(f, Factored::constant(BigQ::one()));
        assert!(ctx
            .difference(&((&x + &y).pow(2)), &(x.pow(2) + 2 * &x * &y + y.pow(2)))
            .unwrap()
            .is_ok());
        let bad = ctx
            .difference(&((&x + &y).pow(2)), &(x.pow(2) + y.pow(2)))
            .unwrap();
        assert_eq!(bad.unwrap_err(), "2*x*y");
    }

    #[test]
    fn agrees_with_direct_expansion() {
        let mut ctx = FactorCtx::new(&["a", "b"]);
        let a = Expr::var("a");
        let b = Expr::var("b");
        let e = (&a + 1) / (&b - 2) + (&a * &b) / ((&b - 2) * (&a + &b)) - 3 / (&a + &b);
        let f = ctx.eval(&e).unwrap();
        let r = ctx.expand(&f).unwrap();
        assert!(r.equal(&e.to_ratfunc().unwrap()));
    }
}
