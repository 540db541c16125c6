use super::poly::{BigQ, MultiPoly};
use crate::error::{Error, Result};
use crate::numerics::C64;
use num_traits::{One, Zero};
use std::collections::HashMap;
use std::fmt;

/// Exact rational function `num / den`, normalized so that `den` is integral,
/// primitive and has a positive leading coefficient. No gcd is cancelled.
#[derive(Clone, Debug)]
pub struct RatFunc {
    num: MultiPoly,
    den: MultiPoly,
}

impl RatFunc {
    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let vars = MultiPoly::merged_vars(num.vars(), den.vars());
        let num = num.with_vars(&vars)?;
        let den = den.with_vars(&vars)?;
        let (c, den) = den.primitive();
        let num = num.scale(&(BigQ::one() / c));
        Ok(RatFunc { num, den })
    }

    pub fn from_poly(p: MultiPoly) -> Self {
        let den = MultiPoly::one(p.vars());
        RatFunc { num: p, den }
    }

    pub fn constant(c: BigQ) -> Self {
        RatFunc::from_poly(MultiPoly::constant(&[], c))
    }

    pub fn int(n: i64) -> Self {
        RatFunc::constant(BigQ::from_integer(n.into()))
    }

    pub fn var(name: &str) -> Self {
        RatFunc::from_poly(MultiPoly::variable(name))
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn vars(&self) -> &[String] {
        self.num.vars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn aligned(&self, other: &RatFunc) -> (RatFunc, RatFunc) {
        if self.vars() == other.vars() {
            return (self.clone(), other.clone());
        }
        let v = MultiPoly::merged_vars(self.vars(), other.vars());
        let f = |r: &RatFunc| RatFunc {
            num: r.num.with_vars(&v).expect("superset"),
            den: r.den.with_vars(&v).expect("superset"),
        };
        (f(self), f(other))
    }

    pub fn add(&self, other: &RatFunc) -> RatFunc {
        let (a, b) = self.aligned(other);
        if a.den == b.den {
            return RatFunc {
                num: a.num.add(&b.num),
                den: a.den,
            };
        }
        let num = a.num.mul(&b.den).add(&b.num.mul(&a.den));
        RatFunc::new(num, a.den.mul(&b.den)).expect("nonzero denominators")
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> RatFunc {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> RatFunc {
        let (a, b) = self.aligned(other);
        RatFunc::new(a.num.mul(&b.num), a.den.mul(&b.den)).expect("nonzero denominators")
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        if other.is_zero() {
            return Err(Error::DivisionByZeroPoly);
        }
        let (a, b) = self.aligned(other);
        RatFunc::new(a.num.mul(&b.den), a.den.mul(&b.num))
    }

    pub fn inv(&self) -> Result<RatFunc> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, n: i64) -> Result<RatFunc> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = n.unsigned_abs() as u32;
        Ok(RatFunc {
            num: base.num.pow(k),
            den: base.den.pow(k),
        })
    }

    /// Equality by cross-multiplication.
    pub fn equal(&self, other: &RatFunc) -> bool {
        let (a, b) = self.aligned(other);
        a.num.mul(&b.den).sub(&b.num.mul(&a.den)).is_zero()
    }

    pub fn differentiate(&self, var: &str) -> RatFunc {
        let dn = self.num.differentiate(var);
        let dd = self.den.differentiate(var);
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        RatFunc::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }

    /// Composition: every variable named in `bindings` is replaced.
    pub fn substitute(&self, bindings: &HashMap<String, RatFunc>) -> Result<RatFunc> {
        let n = substitute_poly(&self.num, bindings)?;
        let d = substitute_poly(&self.den, bindings)?;
        n.div(&d).map_err(|_| Error::DivisionByZeroPoly)
    }

    pub fn eval_complex(&self, env: &HashMap<String, C64>) -> Result<C64> {
        let x: Vec<C64> = self
            .vars()
            .iter()
            .map(|v| {
                env.get(v)
                    .copied()
                    .ok_or_else(|| Error::InvalidArgument(format!("no value for {v}")))
            })
            .collect::<Result<_>>()?;
        let d = self.den.eval_complex(&x);
        if d.norm() == 0.0 {
            return Err(Error::DivisionByZero(
                "rational function denominator".into(),
            ));
        }
        Ok(self.num.eval_complex(&x) / d)
    }

    pub fn eval_rational(&self, env: &HashMap<String, BigQ>) -> Result<BigQ> {
        let x: Vec<BigQ> = self
            .vars()
            .iter()
            .map(|v| {
                env.get(v)
                    .cloned()
                    .ok_or_else(|| Error::InvalidArgument(format!("no value for {v}")))
            })
            .collect::<Result<_>>()?;
        let d = self.den.eval_rational(&x);
        if d.is_zero() {
            return Err(Error::DivisionByZero(
                "rational function denominator".into(),
            ));
        }
        Ok(self.num.eval_rational(&x) / d)
    }
}

/// `p(b)` where each bound variable `x` is replaced by `n_x / d_x`, computed
/// over the common denominator `Π d_x^{deg_x p}`.
fn substitute_poly(p: &MultiPoly, bindings: &HashMap<String, RatFunc>) -> Result<RatFunc> {
    let pv = p.vars().to_vec();
    let mut out_vars: Vec<String> = pv
        .iter()
        .filter(|v| !bindings.contains_key(*v))
        .cloned()
        .collect();
    for v in &pv {
        if let Some(b) = bindings.get(v) {
            out_vars = MultiPoly::merged_vars(&out_vars, b.vars());
        }
    }
    let bound: Vec<Option<(MultiPoly, MultiPoly)>> = pv
        .iter()
        .map(|v| {
            bindings.get(v).map(|b| {
                (
                    b.num.with_vars(&out_vars).expect("superset"),
                    b.den.with_vars(&out_vars).expect("superset"),
                )
            })
        })
        .collect();
    let degs: Vec<u32> = (0..pv.len()).map(|i| p.degree_in(i)).collect();
    let mut num_pows: Vec<Vec<MultiPoly>> = Vec::new();
    let mut den_pows: Vec<Vec<MultiPoly>> = Vec::new();
    for (i, b) in bound.iter().enumerate() {
        let (n, d) = match b {
            Some((n, d)) => (n.clone(), d.clone()),
            None => (
                MultiPoly::var_in(&out_vars, &pv[i])?,
                MultiPoly::one(&out_vars),
            ),
        };
        let mut np = vec![MultiPoly::one(&out_vars)];
        let mut dp = vec![MultiPoly::one(&out_vars)];
        for k in 1..=degs[i] as usize {
            np.push(np[k - 1].try_mul(&n)?);
            dp.push(dp[k - 1].try_mul(&d)?);
        }
        num_pows.push(np);
        den_pows.push(dp);
    }
    let mut acc = MultiPoly::zero(&out_vars);
    let one = MultiPoly::one(&out_vars);
    for (m, c) in p.terms() {
        let mut t = MultiPoly::constant(&out_vars, c.clone());
        for (i, &e) in m.0.iter().enumerate() {
            let e = e as usize;
            let d = degs[i] as usize;
            t = t.try_mul(&num_pows[i][e])?;
            if d > e {
                t = t.try_mul(&den_pows[i][d - e])?;
            }
        }
        acc = acc.add(&t);
    }
    let mut den = one;
    for (i, dp) in den_pows.iter().enumerate() {
        den = den.try_mul(&dp[degs[i] as usize])?;
    }
    RatFunc::new(acc, den)
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(
                f,
                "{}",
                self.num
                    .scale(&(BigQ::one() / self.den.constant_value().unwrap()))
            )
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> RatFunc {
        RatFunc::var("x")
    }
    fn y() -> RatFunc {
        RatFunc::var("y")
    }
    fn int(n: i64) -> RatFunc {
        RatFunc::int(n)
    }

    #[test]
    fn cancellation_by_cross_multiplication() {
        let f = x()
            .mul(&x())
            .sub(&y().mul(&y()))
            .div(&x().sub(&y()))
            .unwrap();
        assert!(f.equal(&x().add(&y())));
        assert!(!int(1).div(&x()).unwrap().equal(&int(1).div(&y()).unwrap()));
    }

    #[test]
    fn substitution_examples() {
        let z = RatFunc::var("z");
        let b = int(1).add(&z).pow(2).unwrap().div(&int(4).mul(&z)).unwrap();
        let mut m = HashMap::new();
        m.insert("u".to_string(), b.clone());
        assert!(RatFunc::var("u").substitute(&m).unwrap().equal(&b));

        let mut id = HashMap::new();
        id.insert("x".to_string(), x());
        let f = x().div(&x().sub(&int(1))).unwrap();
        assert!(f.substitute(&id).unwrap().equal(&f));

        let xt = RatFunc::var("xt");
        let mut m = HashMap::new();
        m.insert("x".to_string(), int(1).div(&int(1).sub(&xt)).unwrap());
        let g = f.substitute(&m).unwrap();
        assert!(g.equal(&int(1).div(&xt).unwrap()));
    }

    #[test]
    fn vanishing_denominator() {
        let f = int(1).div(&x().sub(&y())).unwrap();
        let mut m = HashMap::new();
        m.insert("x".to_string(), y());
        assert!(matches!(f.substitute(&m), Err(Error::DivisionByZeroPoly)));
    }

    #[test]
    fn derivatives() {
        let d = x().mul(&x()).differentiate("x");
        assert!(d.equal(&int(2).mul(&x())));
        let d = int(1).div(&x()).unwrap().differentiate("x");
        assert!(d.equal(&int(-1).div(&x().mul(&x())).unwrap()));
    }

    #[test]
    fn moduli_map_in_lambda() {
        let l1 = RatFunc::var("L1");
        let l2 = RatFunc::var("L2");
        let s = l1.add(&l2);
        let z1 = int(4).mul(&l1).mul(&l2).div(&s.mul(&s)).unwrap();
        // z1 = 1/A with A = (L1+L2)^2/(4 L1 L2)
        let a = s.mul(&s).div(&int(4).mul(&l1).mul(&l2)).unwrap();
        assert!(z1.equal(&a.inv().unwrap()));
        let mut env = HashMap::new();
        env.insert("L1".to_string(), BigQ::new(1.into(), 3.into()));
        env.insert("L2".to_string(), BigQ::new(1.into(), 2.into()));
        assert_eq!(
            z1.eval_rational(&env).unwrap(),
            BigQ::new(24.into(), 25.into())
        );
    }
}
