//! Substitution, linear solving and constant-multiple matching.

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::Zero;

use super::poly::{Monomial, Polynomial};
use super::ratfunc::RatFunc;
use super::symbol::Symbol;
use crate::error::Error;

pub type Bindings = BTreeMap<Symbol, RatFunc>;

/// Replaces every bound symbol simultaneously, once.
pub fn substitute(e: &RatFunc, bindings: &Bindings) -> Result<RatFunc, Error> {
    e.substitute(bindings)
}

/// Root of a relation that is linear in one symbol.
#[derive(Clone, Debug, PartialEq)]
pub enum LinearSolution {
    /// The leading coefficient is a nonzero constant.
    Unconditional(RatFunc),
    /// Valid wherever `nonzero` does not vanish.
    Conditional { value: RatFunc, nonzero: RatFunc },
}

impl LinearSolution {
    pub fn value(&self) -> &RatFunc {
        match self {
            LinearSolution::Unconditional(v) => v,
            LinearSolution::Conditional { value, .. } => value,
        }
    }

    pub fn condition(&self) -> Option<&RatFunc> {
        match self {
            LinearSolution::Unconditional(_) => None,
            LinearSolution::Conditional { nonzero, .. } => Some(nonzero),
        }
    }
}

/// Solves `rel = 0` for `x`, where the numerator of `rel` is `a*x + b`.
pub fn solve_linear(rel: &RatFunc, x: Symbol) -> Result<LinearSolution, Error> {
    if rel.denom().contains(x) {
        return Err(Error::NotLinear {
            symbol: x.to_string(),
            degree: rel.numer().degree_in(x),
        });
    }
    let coeffs = rel.numer().coefficients_in(x);
    if coeffs.len() != 2 {
        return Err(Error::NotLinear {
            symbol: x.to_string(),
            degree: (coeffs.len() - 1) as u32,
        });
    }
    let a = RatFunc::from_poly(coeffs[1].clone());
    let b = RatFunc::from_poly(coeffs[0].clone());
    let value = (-&b).checked_div(&a)?;
    Ok(match a.as_constant() {
        Some(_) => LinearSolution::Unconditional(value),
        None => LinearSolution::Conditional { value, nonzero: a },
    })
}

/// Largest `k` with `m^k | t`, and the cofactor.
fn monomial_power(t: &Monomial, m: &Monomial) -> (u32, Monomial) {
    let mut k = 0;
    let mut rest = t.clone();
    while let Some(q) = rest.div(m) {
        rest = q;
        k += 1;
    }
    (k, rest)
}

/// `p = a*m + b` where no term of `a` or `b` is divisible by `m`.
fn split_linear(p: &Polynomial, m: &Monomial) -> Option<(Polynomial, Polynomial)> {
    let mut a = Polynomial::zero();
    let mut b = Polynomial::zero();
    for (t, q) in p.terms() {
        match monomial_power(t, m) {
            (0, _) => b = &b + &Polynomial::term(t.clone(), q.clone()),
            (1, rest) => a = &a + &Polynomial::term(rest, q.clone()),
            _ => return None,
        }
    }
    Some((a, b))
}

/// Solves `rel = 0` for a monomial `m` that occurs linearly, e.g. `beta^2`
/// or `lambda*nu`. For a single symbol this agrees with [`solve_linear`].
pub fn solve_for_monomial(rel: &RatFunc, m: &Monomial) -> Result<LinearSolution, Error> {
    let name = || m.to_string();
    if rel.denom().terms().any(|(t, _)| t.div(m).is_some()) {
        return Err(Error::NotLinear {
            symbol: name(),
            degree: 0,
        });
    }
    let (a, b) = split_linear(rel.numer(), m).ok_or_else(|| Error::NotLinear {
        symbol: name(),
        degree: 2,
    })?;
    if a.is_zero() {
        return Err(Error::NotLinear {
            symbol: name(),
            degree: 0,
        });
    }
    let a = RatFunc::from_poly(a);
    let value = (-&RatFunc::from_poly(b)).checked_div(&a)?;
    Ok(match a.as_constant() {
        Some(_) => LinearSolution::Unconditional(value),
        None => LinearSolution::Conditional { value, nonzero: a },
    })
}

fn rewrite_poly(p: &Polynomial, m: &Monomial, v: &RatFunc) -> RatFunc {
    let mut out = RatFunc::int(0);
    for (t, q) in p.terms() {
        let (k, rest) = monomial_power(t, m);
        let term = RatFunc::from_poly(Polynomial::term(rest, q.clone()));
        out = &out + &(&term * &v.pow(k));
    }
    out
}

/// Replaces every power `m^k` inside `e` by `v^k`.
pub fn substitute_monomial(e: &RatFunc, m: &Monomial, v: &RatFunc) -> Result<RatFunc, Error> {
    rewrite_poly(e.numer(), m, v).checked_div(&rewrite_poly(e.denom(), m, v))
}

/// Whether some term of `e` is divisible by `m`.
pub fn contains_monomial(e: &RatFunc, m: &Monomial) -> bool {
    e.numer()
        .terms()
        .chain(e.denom().terms())
        .any(|(t, _)| t.div(m).is_some())
}

/// Finds the rational `k != 0` with `e == k * template`, if any.
pub fn factor_match(e: &RatFunc, template: &RatFunc) -> Option<BigRational> {
    if template.is_zero() || e.is_zero() {
        return None;
    }
    let lhs = e.numer() * template.denom();
    let rhs = template.numer() * e.denom();
    let k = lhs.leading_coeff() / rhs.leading_coeff();
    if k.is_zero() {
        return None;
    }
    (&lhs - &rhs.scale(&k)).is_zero().then_some(k)
}

/// Result of stripping known-nonzero factors from a polynomial.
#[derive(Clone, Debug)]
pub struct Stripped {
    pub rest: Polynomial,
    /// `(factor, multiplicity)` pairs that were divided out.
    pub removed: Vec<(Polynomial, u32)>,
}

/// Divides `p` by each factor as many times as it goes exactly.
pub fn strip_factors(p: &Polynomial, factors: &[Polynomial]) -> Stripped {
    let mut rest = p.clone();
    let mut removed = Vec::new();
    if rest.is_zero() {
        return Stripped { rest, removed };
    }
    for f in factors {
        if f.is_zero() || f.as_constant().is_some() {
            continue;
        }
        let mut k = 0;
        while let Some(q) = rest.div_exact(f) {
            rest = q;
            k += 1;
        }
        if k > 0 {
            removed.push((f.clone(), k));
        }
    }
    Stripped { rest, removed }
}

/// True when `p` is provably nonzero given that every entry of `nonzero`
/// is: after stripping those factors only a nonzero constant remains.
pub fn provably_nonzero(p: &Polynomial, nonzero: &[Polynomial]) -> bool {
    if p.is_zero() {
        return false;
    }
    let s = strip_factors(p, nonzero);
    s.rest.as_constant().is_some_and(|q| !q.is_zero())
}

/// True when `p = 0` contradicts the standing assumptions over the reals:
/// either `p` is provably nonzero, or what remains after stripping is a
/// positive sum of even monomials with at least one strictly positive term.
pub fn contradicts(p: &Polynomial, nonzero: &[Polynomial]) -> bool {
    if p.is_zero() {
        return false;
    }
    let s = strip_factors(p, nonzero);
    if s.rest.as_constant().is_some_and(|q| !q.is_zero()) {
        return true;
    }
    let rest = if s.rest.leading_coeff() < BigRational::zero() {
        -&s.rest
    } else {
        s.rest.clone()
    };
    if !rest.is_sum_of_even_squares() {
        return false;
    }
    let nonzero_syms: Vec<Symbol> = nonzero
        .iter()
        .filter_map(|f| RatFunc::from_poly(f.clone()).as_symbol())
        .collect();
    let positive = rest
        .terms()
        .any(|(m, _)| m.factors().iter().all(|(s, _)| nonzero_syms.contains(s)));
    positive
}

/// A registry of expressions assumed not to vanish.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Assumptions {
    factors: Vec<Polynomial>,
}

impl Assumptions {
    pub fn new() -> Assumptions {
        Assumptions::default()
    }

    /// Registers `e != 0`. Monomial factors are split into single symbols
    /// so that each can be stripped independently.
    pub fn add(&mut self, e: &RatFunc) {
        let num = e.numer();
        if num.as_constant().is_some() {
            return;
        }
        let content = num.monomial_content();
        for (s, _) in content.factors() {
            self.push(Polynomial::var(*s));
        }
        let rest = num.div_monomial(&content).expect("content divides");
        if rest.as_constant().is_none() {
            let lc = rest.leading_coeff();
            self.push(rest.scale(&lc.recip()));
        }
    }

    pub fn with(mut self, e: &RatFunc) -> Assumptions {
        self.add(e);
        self
    }

    pub fn parse(exprs: &[&str]) -> Result<Assumptions, Error> {
        let mut a = Assumptions::new();
        for e in exprs {
            a.add(&super::parse::parse_expr(e)?);
        }
        Ok(a)
    }

    fn push(&mut self, p: Polynomial) {
        if !self.factors.contains(&p) {
            self.factors.push(p);
        }
    }

    pub fn factors(&self) -> &[Polynomial] {
        &self.factors
    }

    pub fn remove_last(&mut self) -> Option<Polynomial> {
        self.factors.pop()
    }

    pub fn extend(&mut self, other: &Assumptions) {
        for f in &other.factors {
            self.push(f.clone());
        }
    }

    pub fn provably_nonzero(&self, e: &RatFunc) -> bool {
        provably_nonzero(e.numer(), &self.factors)
    }

    pub fn contradicts(&self, e: &RatFunc) -> bool {
        contradicts(e.numer(), &self.factors)
    }

    pub fn strip(&self, e: &RatFunc) -> Polynomial {
        strip_factors(e.numer(), &self.factors).rest
    }
}
