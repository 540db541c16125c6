use crate::error::{Error, Result};
use crate::numerics::C64;
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

pub type BigQ = BigRational;

/// Default bound on the number of terms of any intermediate polynomial.
pub const TERM_GUARD: usize = 2_000_000;

/// Exponent vector, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mono(pub Vec<u32>);

impl Mono {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn sub(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    fn add(&self, other: &Mono) -> Mono {
        Mono(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over the rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Mono, BigQ>,
}

fn q(n: i64) -> BigQ {
    BigQ::from_integer(BigInt::from(n))
}

impl MultiPoly {
    pub fn zero(vars: &[String]) -> Self {
        MultiPoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: BigQ) -> Self {
        let mut p = MultiPoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Mono(vec![0; vars.len()]), c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        MultiPoly::constant(vars, BigQ::one())
    }

    /// The polynomial `name` over the single variable `name`.
    pub fn variable(name: &str) -> Self {
        let vars = vec![name.to_string()];
        let mut p = MultiPoly::zero(&vars);
        p.terms.insert(Mono(vec![1]), BigQ::one());
        p
    }

    /// The variable `name` embedded in the given variable list.
    pub fn var_in(vars: &[String], name: &str) -> Result<Self> {
        let i = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown variable {name}")))?;
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        let mut p = MultiPoly::zero(vars);
        p.terms.insert(Mono(e), BigQ::one());
        Ok(p)
    }

    pub fn from_terms(vars: &[String], terms: Vec<(Vec<u32>, BigQ)>) -> Self {
        let mut p = MultiPoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent length");
            let slot = p.terms.entry(Mono(e)).or_insert_with(BigQ::zero);
            *slot += c;
        }
        p.terms.retain(|_, c| !c.is_zero());
        p
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Mono, &BigQ)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
            || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    pub fn constant_value(&self) -> Option<BigQ> {
        if self.is_zero() {
            Some(BigQ::zero())
        } else if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    /// Leading term in graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &BigQ)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Mono::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.0[i]).max().unwrap_or(0)
    }

    fn is_integral(&self) -> bool {
        self.terms.values().all(|c| c.is_integer())
    }

    /// Re-express over `vars`, which must contain every variable of `self`
    /// in which `self` actually depends.
    pub fn with_vars(&self, vars: &[String]) -> Result<Self> {
        if self.vars == vars {
            return Ok(self.clone());
        }
        let map: Vec<Option<usize>> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v))
            .collect();
        let mut out = MultiPoly::zero(vars);
        for (m, c) in &self.terms {
            let mut e = vec![0; vars.len()];
            for (k, &x) in m.0.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                match map[k] {
                    Some(j) => e[j] = x,
                    None => {
                        return Err(Error::InvalidArgument(format!(
                            "variable {} missing from target list",
                            self.vars[k]
                        )))
                    }
                }
            }
            out.terms.insert(Mono(e), c.clone());
        }
        Ok(out)
    }

    /// Union of the variable lists, in first-seen order.
    pub fn merged_vars(a: &[String], b: &[String]) -> Vec<String> {
        let mut v = a.to_vec();
        for x in b {
            if !v.contains(x) {
                v.push(x.clone());
            }
        }
        v
    }

    fn align(a: &MultiPoly, b: &MultiPoly) -> (MultiPoly, MultiPoly) {
        if a.vars == b.vars {
            return (a.clone(), b.clone());
        }
        let v = MultiPoly::merged_vars(&a.vars, &b.vars);
        (
            a.with_vars(&v).expect("superset"),
            b.with_vars(&v).expect("superset"),
        )
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        if self.vars != other.vars {
            let (a, b) = MultiPoly::align(self, other);
            return a.add(&b);
        }
        let (mut big, small) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            match big.terms.get_mut(m) {
                Some(slot) => {
                    *slot += c;
                    if slot.is_zero() {
                        big.terms.remove(m);
                    }
                }
                None => {
                    big.terms.insert(m.clone(), c.clone());
                }
            }
        }
        big
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, k: &BigQ) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    /// Product with the term guard applied.
    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly> {
        if self.vars != other.vars {
            let (a, b) = MultiPoly::align(self, other);
            return a.try_mul(&b);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(MultiPoly::zero(&self.vars));
        }
        if let Some(c) = self.constant_value() {
            return Ok(other.scale(&c));
        }
        if let Some(c) = other.constant_value() {
            return Ok(self.scale(&c));
        }
        let terms: BTreeMap<Mono, BigQ> = if self.is_integral() && other.is_integral() {
            let mut acc: HashMap<Mono, BigInt> = HashMap::new();
            for (ma, ca) in &self.terms {
                let ca = ca.numer();
                for (mb, cb) in &other.terms {
                    let m = ma.add(mb);
                    let v = ca * cb.numer();
                    match acc.get_mut(&m) {
                        Some(s) => *s += v,
                        None => {
                            acc.insert(m, v);
                        }
                    }
                }
            }
            acc.into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|(m, c)| (m, BigQ::from_integer(c)))
                .collect()
        } else {
            let mut acc: HashMap<Mono, BigQ> = HashMap::new();
            for (ma, ca) in &self.terms {
                for (mb, cb) in &other.terms {
                    let m = ma.add(mb);
                    let v = ca * cb;
                    match acc.get_mut(&m) {
                        Some(s) => *s += v,
                        None => {
                            acc.insert(m, v);
                        }
                    }
                }
            }
            acc.into_iter().filter(|(_, c)| !c.is_zero()).collect()
        };
        if terms.len() > TERM_GUARD {
            return Err(Error::ComplexityLimit { terms: terms.len() });
        }
        Ok(MultiPoly {
            vars: self.vars.clone(),
            terms,
        })
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.try_mul(other).expect("term guard exceeded")
    }

    pub fn try_pow(&self, n: u32) -> Result<MultiPoly> {
        let mut result = MultiPoly::one(&self.vars);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.try_mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn pow(&self, n: u32) -> MultiPoly {
        self.try_pow(n).expect("term guard exceeded")
    }

    /// Exact quotient `self / g`, or `None` when `g` does not divide.
    pub fn div_exact(&self, g: &MultiPoly) -> Option<MultiPoly> {
        if self.vars != g.vars {
            let (a, b) = MultiPoly::align(self, g);
            return a.div_exact(&b);
        }
        if g.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(MultiPoly::zero(&self.vars));
        }
        if let Some(c) = g.constant_value() {
            return Some(self.scale(&(BigQ::one() / c)));
        }
        for i in 0..self.vars.len() {
            if g.degree_in(i) > self.degree_in(i) {
                return None;
            }
        }
        let (gm, gc) = g.leading().map(|(m, c)| (m.clone(), c.clone())).unwrap();
        let g_unit = gc.is_integer() && gc.numer().abs().is_one();
        let mut r = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((rm, rc)) = r.iter().next_back().map(|(m, c)| (m.clone(), c.clone())) {
            if !gm.divides(&rm) {
                return None;
            }
            let tm = rm.sub(&gm);
            let tc = if g_unit {
                if gc.is_positive() {
                    rc
                } else {
                    -rc
                }
            } else {
                rc / &gc
            };
            for (m, c) in &g.terms {
                let mm = m.add(&tm);
                let v = c * &tc;
                match r.get_mut(&mm) {
                    Some(s) => {
                        *s -= v;
                        if s.is_zero() {
                            r.remove(&mm);
                        }
                    }
                    None => {
                        r.insert(mm, -v);
                    }
                }
            }
            quot.insert(tm, tc);
            if r.len() > TERM_GUARD {
                return None;
            }
        }
        Some(MultiPoly {
            vars: self.vars.clone(),
            terms: quot,
        })
    }

    /// `(c, p)` with `self = c·p`, `p` integral, primitive and with positive
    /// leading coefficient. The zero polynomial gives `(0, 0)`.
    pub fn primitive(&self) -> (BigQ, MultiPoly) {
        if self.is_zero() {
            return (BigQ::zero(), self.clone());
        }
        let mut den = BigInt::one();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in self.terms.values() {
            let v = c.numer() * (&den / c.denom());
            num = num.gcd(&v);
        }
        let mut content = BigQ::new(num, den);
        if self.leading().unwrap().1.is_negative() {
            content = -content;
        }
        let inv = BigQ::one() / &content;
        (content, self.scale(&inv))
    }

    pub fn differentiate(&self, var: &str) -> MultiPoly {
        let Some(i) = self.vars.iter().position(|v| v == var) else {
            return MultiPoly::zero(&self.vars);
        };
        let mut out = MultiPoly::zero(&self.vars);
        for (m, c) in &self.terms {
            if m.0[i] == 0 {
                continue;
            }
            let mut e = m.0.clone();
            let k = e[i];
            e[i] -= 1;
            out.terms.insert(Mono(e), c * q(k as i64));
        }
        out
    }

    /// Evaluate with values given in variable order.
    pub fn eval_complex(&self, x: &[C64]) -> C64 {
        let mut s = C64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            let mut t = C64::new(c.to_f64().unwrap_or(f64::NAN), 0.0);
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= x[k].powi(e as i32);
                }
            }
            s += t;
        }
        s
    }

    pub fn eval_rational(&self, x: &[BigQ]) -> BigQ {
        let mut s = BigQ::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t *= num_traits::pow(x[k].clone(), e as usize);
                }
            }
            s += t;
        }
        s
    }

    /// Evaluate modulo the Mersenne prime 2^61 - 1; `None` if a coefficient
    /// denominator vanishes there.
    pub fn eval_mod(&self, x: &[u64]) -> Option<u64> {
        let mut s = 0u64;
        for (m, c) in &self.terms {
            let mut t = rational_mod(c)?;
            for (k, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    t = mulmod(t, powmod(x[k], e as u64));
                }
            }
            s = addmod(s, t);
        }
        Some(s)
    }

    /// Canonical text, highest term first.
    pub fn to_canonical_string(&self) -> String {
        self.to_string()
    }
}

pub(crate) const MODP: u64 = (1u64 << 61) - 1;

pub(crate) fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % MODP as u128) as u64
}

pub(crate) fn addmod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= MODP {
        s - MODP
    } else {
        s
    }
}

pub(crate) fn submod(a: u64, b: u64) -> u64 {
    addmod(a, MODP - b % MODP)
}

pub(crate) fn powmod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1u64;
    b %= MODP;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b);
        }
        b = mulmod(b, b);
        e >>= 1;
    }
    r
}

pub(crate) fn invmod(a: u64) -> Option<u64> {
    if a.is_multiple_of(MODP) {
        None
    } else {
        Some(powmod(a, MODP - 2))
    }
}

fn bigint_mod(n: &BigInt) -> u64 {
    let p = BigInt::from(MODP);
    let r = n.mod_floor(&p);
    r.to_u64().expect("reduced")
}

pub(crate) fn rational_mod(c: &BigQ) -> Option<u64> {
    let n = bigint_mod(c.numer());
    let d = invmod(bigint_mod(c.denom()))?;
    Some(mulmod(n, d))
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mono: Vec<String> =
                m.0.iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(k, &e)| {
                        if e == 1 {
                            self.vars[k].clone()
                        } else {
                            format!("{}^{}", self.vars[k], e)
                        }
                    })
                    .collect();
            if mono.is_empty() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", a, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn binomial_square() {
        let x = MultiPoly::variable("x");
        let y = MultiPoly::variable("y");
        let s = x.add(&y).pow(2);
        assert_eq!(s.to_string(), "x^2 + 2*x*y + y^2");
        assert!(s.sub(&s).is_zero());
    }

    #[test]
    fn constant_coefficient_of_power() {
        let x = MultiPoly::variable("x");
        let one = MultiPoly::one(x.vars());
        let p = one.add(&x).pow(5);
        let c = p
            .terms()
            .find(|(m, _)| m.degree() == 0)
            .map(|(_, c)| c.clone())
            .unwrap();
        assert_eq!(c, BigQ::one());
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn exact_division() {
        let vars = v(&["x", "y"]);
        let x = MultiPoly::var_in(&vars, "x").unwrap();
        let y = MultiPoly::var_in(&vars, "y").unwrap();
        let a = x.sub(&y);
        let b = x.add(&y).add(&MultiPoly::one(&vars));
        let p = a.mul(&b).mul(&a);
        assert_eq!(p.div_exact(&a).unwrap(), a.mul(&b));
        assert!(p.div_exact(&x).is_none());
        assert!(b.div_exact(&a).is_none());
    }

    #[test]
    fn primitive_part() {
        let vars = v(&["x"]);
        let x = MultiPoly::var_in(&vars, "x").unwrap();
        let p = x
            .scale(&BigQ::new((-4).into(), 3.into()))
            .add(&MultiPoly::constant(&vars, q(2)));
        let (c, pp) = p.primitive();
        assert_eq!(c, BigQ::new((-2).into(), 3.into()));
        assert_eq!(pp.to_string(), "2*x - 3");
    }

    #[test]
    fn variable_merge_by_name() {
        let x = MultiPoly::variable("x");
        let y = MultiPoly::variable("y");
        let s = x.mul(&y);
        assert_eq!(s.vars(), &["x".to_string(), "y".to_string()]);
        let t = y.mul(&x);
        assert_eq!(t.with_vars(s.vars()).unwrap(), s);
    }

    #[test]
    fn modular_evaluation_matches_rational() {
        let vars = v(&["x", "y"]);
        let x = MultiPoly::var_in(&vars, "x").unwrap();
        let y = MultiPoly::var_in(&vars, "y").unwrap();
        let p = x.pow(3).sub(&y.scale(&BigQ::new(1.into(), 2.into())));
        let r = p.eval_rational(&[q(3), q(4)]);
        assert_eq!(r, q(25));
        assert_eq!(p.eval_mod(&[3, 4]), Some(25));
    }
}
