//! Rational functions `num / den` over the rationals.
//!
//! No multivariate GCD is computed. Normalization strips the common
//! monomial factor, divides out `den` when it divides `num` exactly, and
//! makes `den` monic. Equality is decided by cross-multiplication.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{Monomial, Polynomial};
use super::symbol::{Direction, Symbol};
use crate::error::Error;

#[derive(Clone)]
pub struct RatFunc {
    num: Polynomial,
    den: Polynomial,
}

impl RatFunc {
    pub fn new(num: Polynomial, den: Polynomial) -> Result<RatFunc, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc { num, den }.normalized())
    }

    pub fn from_poly(p: Polynomial) -> RatFunc {
        RatFunc {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn var(s: Symbol) -> RatFunc {
        RatFunc::from_poly(Polynomial::var(s))
    }

    pub fn int(n: i64) -> RatFunc {
        RatFunc::from_poly(Polynomial::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> RatFunc {
        assert!(d != 0, "zero denominator in RatFunc::ratio");
        RatFunc::constant(BigRational::new(n.into(), d.into()))
    }

    pub fn constant(q: BigRational) -> RatFunc {
        RatFunc::from_poly(Polynomial::constant(q))
    }

    pub fn numer(&self) -> &Polynomial {
        &self.num
    }

    pub fn denom(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_constant(&self) -> Option<BigRational> {
        let n = self.num.as_constant()?;
        let d = self.den.as_constant()?;
        Some(n / d)
    }

    pub fn as_symbol(&self) -> Option<Symbol> {
        if !self.den.is_one() || self.num.len() != 1 {
            return None;
        }
        let (m, c) = self.num.leading()?;
        match m.factors() {
            [(s, 1)] if c.is_one() => Some(*s),
            _ => None,
        }
    }

    pub fn symbols(&self) -> Vec<Symbol> {
        let mut v = self.num.symbols();
        v.extend(self.den.symbols());
        v.sort();
        v.dedup();
        v
    }

    pub fn contains(&self, s: Symbol) -> bool {
        self.num.contains(s) || self.den.contains(s)
    }

    fn normalized(self) -> RatFunc {
        let RatFunc { mut num, mut den } = self;
        if num.is_zero() {
            return RatFunc::from_poly(Polynomial::zero());
        }
        let g = num.monomial_content().gcd(&den.monomial_content());
        if !g.is_one() {
            num = num.div_monomial(&g).expect("gcd divides numerator");
            den = den.div_monomial(&g).expect("gcd divides denominator");
        }
        if let Some(d) = den.as_constant() {
            return RatFunc::from_poly(num.scale(&d.recip()));
        }
        if let Some(q) = num.div_exact(&den) {
            return RatFunc::from_poly(q);
        }
        let lc = den.leading_coeff();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn recip(&self) -> Result<RatFunc, Error> {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn checked_div(&self, rhs: &RatFunc) -> Result<RatFunc, Error> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if rhs.den.is_one() && self.den.is_one() {
            return RatFunc::new(self.num.clone(), rhs.num.clone());
        }
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn pow(&self, e: u32) -> RatFunc {
        RatFunc {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
        .normalized()
    }

    pub fn scale(&self, q: &BigRational) -> RatFunc {
        RatFunc {
            num: self.num.scale(q),
            den: self.den.clone(),
        }
        .normalized()
    }

    /// Simultaneous substitution of every bound symbol.
    pub fn substitute(&self, bindings: &BTreeMap<Symbol, RatFunc>) -> Result<RatFunc, Error> {
        let n = subst_poly(&self.num, bindings);
        let d = subst_poly(&self.den, bindings);
        n.checked_div(&d)
    }

    /// Formal directional derivative; symbols map to their jets and `c`
    /// is constant.
    pub fn derivative(&self, dir: Direction) -> Result<RatFunc, Error> {
        let dn = poly_derivative(&self.num, dir)?;
        if self.den.is_one() {
            return Ok(RatFunc::from_poly(dn));
        }
        let dd = poly_derivative(&self.den, dir)?;
        let top = &(&dn * &self.den) - &(&self.num * &dd);
        RatFunc::new(top, &self.den * &self.den)
    }

    /// Evaluates with float values for every symbol.
    pub fn eval_f64(&self, value: &dyn Fn(Symbol) -> Option<f64>) -> Option<f64> {
        Some(self.num.eval_f64(value)? / self.den.eval_f64(value)?)
    }
}

fn subst_poly(p: &Polynomial, bindings: &BTreeMap<Symbol, RatFunc>) -> RatFunc {
    let mut acc = RatFunc::int(0);
    for (m, c) in p.terms() {
        let mut keep = Monomial::one();
        let mut t = RatFunc::constant(c.clone());
        for &(s, e) in m.factors() {
            match bindings.get(&s) {
                Some(v) => t = &t * &v.pow(e),
                None => keep = keep.mul(&Monomial::pow(s, e)),
            }
        }
        let t = &t * &RatFunc::from_poly(Polynomial::term(keep, BigRational::one()));
        acc = &acc + &t;
    }
    acc
}

/// Product-rule derivative of a polynomial.
pub(crate) fn poly_derivative(p: &Polynomial, dir: Direction) -> Result<Polynomial, Error> {
    let mut out = Polynomial::zero();
    for (m, c) in p.terms() {
        for &(s, e) in m.factors() {
            if s.is_constant() {
                continue;
            }
            let (_, rest) = m.split(s);
            let lowered = rest
                .mul(&Monomial::pow(s, e - 1))
                .mul(&Monomial::var(s.differentiated(dir)?));
            let coeff = c * BigRational::from_integer(e.into());
            out = &out + &Polynomial::term(lowered, coeff);
        }
    }
    Ok(out)
}

impl PartialEq for RatFunc {
    fn eq(&self, other: &Self) -> bool {
        if self.den == other.den {
            return self.num == other.num;
        }
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let r = if self.den == rhs.den {
            RatFunc {
                num: &self.num + &rhs.num,
                den: self.den.clone(),
            }
        } else if let Some(q) = self.den.div_exact(&rhs.den) {
            RatFunc {
                num: &self.num + &(&rhs.num * &q),
                den: self.den.clone(),
            }
        } else if let Some(q) = rhs.den.div_exact(&self.den) {
            RatFunc {
                num: &(&self.num * &q) + &rhs.num,
                den: rhs.den.clone(),
            }
        } else {
            RatFunc {
                num: &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
                den: &self.den * &rhs.den,
            }
        };
        r.normalized()
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::int(0);
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from_poly(&self.num * &rhs.num);
        }
        RatFunc {
            num: &self.num * &rhs.num,
            den: &self.den * &rhs.den,
        }
        .normalized()
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: RatFunc) -> RatFunc {
        &self + &rhs
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: RatFunc) -> RatFunc {
        &self - &rhs
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: RatFunc) -> RatFunc {
        &self * &rhs
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl From<Polynomial> for RatFunc {
    fn from(p: Polynomial) -> RatFunc {
        RatFunc::from_poly(p)
    }
}

impl From<Symbol> for RatFunc {
    fn from(s: Symbol) -> RatFunc {
        RatFunc::var(s)
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> RatFunc {
        RatFunc::int(n)
    }
}

fn wrap_poly(p: &Polynomial, parens_if_signed: bool) -> String {
    let s = p.to_string();
    let compound = p.len() > 1;
    let signed = parens_if_signed && s.starts_with('-');
    let product = p.len() == 1 && p.leading().is_some_and(|(m, q)| !q.is_one() && !m.is_one());
    if compound || signed || (parens_if_signed && product) {
        format!("({})", s)
    } else {
        s
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        let den_s = {
            let s = self.den.to_string();
            let single = self.den.len() == 1 && self.den.leading().is_some_and(|(m, _)| m.factors().len() == 1);
            if single {
                s
            } else {
                format!("({})", s)
            }
        };
        write!(f, "{}/{}", wrap_poly(&self.num, false), den_s)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::int(0)
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::symbol::sym::*;

    fn v(s: Symbol) -> RatFunc {
        RatFunc::var(s)
    }

    #[test]
    fn cancels_monomial_and_exact_factors() {
        let t = v(T);
        let num = &(&t * &t) - &RatFunc::int(1);
        let q = num.checked_div(&t).unwrap();
        let back = &q * &t;
        assert_eq!(back.denom(), &Polynomial::one());
        let r = (&num.checked_div(&(&t - &RatFunc::int(1))).unwrap()) - &(&t + &RatFunc::int(1));
        assert!(r.is_zero());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert!(matches!(
            v(ALPHA).checked_div(&RatFunc::int(0)),
            Err(Error::DivisionByZero)
        ));
        assert!(RatFunc::new(Polynomial::one(), Polynomial::zero()).is_err());
    }

    #[test]
    fn equality_by_cross_multiplication() {
        let a = RatFunc::new(Polynomial::var(ALPHA), Polynomial::var(BETA)).unwrap();
        let b = RatFunc::new(
            &Polynomial::var(ALPHA) * &Polynomial::from_int(3),
            &Polynomial::var(BETA) * &Polynomial::from_int(3),
        )
        .unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn denominator_is_monic() {
        let r = RatFunc::new(Polynomial::one(), &Polynomial::var(T) * &Polynomial::from_int(-2)).unwrap();
        assert_eq!(r.to_string(), "-1/2/t");
        let r = (&(&v(T) * &v(T)) - &RatFunc::int(1)).checked_div(&v(T)).unwrap();
        assert_eq!(r.to_string(), "(t^2 - 1)/t");
    }

    #[test]
    fn beta_sq_minus_quarter_c_over_beta() {
        let e = &(&v(BETA) * &v(BETA)) - &(&v(C) * &RatFunc::ratio(1, 4));
        let r = e.checked_div(&v(BETA)).unwrap();
        assert_eq!(r.denom(), &Polynomial::var(BETA));
    }

    #[test]
    fn quotient_rule_derivative() {
        let r = v(BETA).checked_div(&v(ALPHA)).unwrap();
        let d = r.derivative(Direction::U).unwrap();
        let db = RatFunc::var(BETA.differentiated(Direction::U).unwrap());
        let da = RatFunc::var(ALPHA.differentiated(Direction::U).unwrap());
        let expected = (&(&db * &v(ALPHA)) - &(&v(BETA) * &da))
            .checked_div(&(&v(ALPHA) * &v(ALPHA)))
            .unwrap();
        assert_eq!(d, expected);
        assert!(v(C).derivative(Direction::Xi).unwrap().is_zero());
    }
}
