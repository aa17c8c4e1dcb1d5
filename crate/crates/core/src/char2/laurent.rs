use std::collections::BTreeMap;
use std::fmt;

use super::field::{Gf, Gf2nField};
use super::Char2Error;

/// Coefficient rings of characteristic 2 used by the Laurent-polynomial
/// machinery: the finite field itself, or truncated series over it.
///
/// Three-valued zero test: a coefficient is either exactly zero, certainly
/// nonzero, or *negligible* (zero to the precision it is known at).
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn field(&self) -> &'static Gf2nField;
    /// Embeds a field constant (exactly).
    fn constant(c: Gf) -> Self;
    fn plus(&self, rhs: &Self) -> Self;
    fn times(&self, rhs: &Self) -> Self;
    fn scale(&self, c: Gf) -> Self;
    fn square(&self) -> Self {
        self.times(self)
    }
    fn inverse(&self) -> Result<Self, Char2Error>;
    fn sqrt(&self) -> Result<Self, Char2Error>;
    fn is_zero(&self) -> bool;
    fn is_negligible(&self) -> bool;
    fn is_one(&self) -> bool;

    fn is_certainly_nonzero(&self) -> bool {
        !self.is_negligible()
    }

    fn zero_of(&self) -> Self {
        Self::constant(self.field().zero())
    }

    fn one_of(&self) -> Self {
        Self::constant(self.field().one())
    }
}

impl Coeff for Gf {
    fn field(&self) -> &'static Gf2nField {
        Gf::field(self)
    }
    fn constant(c: Gf) -> Self {
        c
    }
    fn plus(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn times(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn scale(&self, c: Gf) -> Self {
        *self * c
    }
    fn inverse(&self) -> Result<Self, Char2Error> {
        self.inv().ok_or(Char2Error::DivisionByZero)
    }
    fn sqrt(&self) -> Result<Self, Char2Error> {
        Ok(Gf::sqrt(self))
    }
    fn is_zero(&self) -> bool {
        Gf::is_zero(self)
    }
    fn is_negligible(&self) -> bool {
        Gf::is_zero(self)
    }
    fn is_one(&self) -> bool {
        Gf::is_one(self)
    }
}

/// Which indeterminate a Laurent polynomial is written in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Variable {
    T,
    /// Exponent `d` stands for `t^-d`.
    TInv,
    Varpi,
    /// `X = T^-1` on the characteristic-zero side.
    X,
    /// A local parameter at a place.
    U,
    /// Exponent `d` stands for `u^-d`.
    UInv,
}

impl Variable {
    fn symbol(self) -> &'static str {
        match self {
            Variable::T | Variable::TInv => "t",
            Variable::Varpi => "w",
            Variable::X => "X",
            Variable::U | Variable::UInv => "u",
        }
    }
}

#[derive(Clone, PartialEq, Debug)]
pub struct LaurentPolynomial<C> {
    var: Variable,
    terms: BTreeMap<i64, C>,
}

impl<C: Coeff> LaurentPolynomial<C> {
    pub fn zero(var: Variable) -> Self {
        LaurentPolynomial {
            var,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(var: Variable, exp: i64, c: C) -> Self {
        Self::from_terms(var, [(exp, c)])
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_terms(var: Variable, terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut p = Self::zero(var);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn var(&self) -> Variable {
        self.var
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> Option<&C> {
        self.terms.get(&exp)
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &C)> + '_ {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn leading(&self) -> Option<(i64, &C)> {
        self.terms.iter().next_back().map(|(e, c)| (*e, c))
    }

    pub fn add_term(&mut self, exp: i64, c: &C) {
        if c.is_zero() {
            return;
        }
        let sum = match self.terms.get(&exp) {
            Some(old) => old.plus(c),
            None => c.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&exp);
        } else {
            self.terms.insert(exp, sum);
        }
    }

    /// Removes and returns the coefficient at `exp`.
    pub fn remove(&mut self, exp: i64) -> Option<C> {
        self.terms.remove(&exp)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.var, rhs.var, "adding polynomials in different variables");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.var, rhs.var, "multiplying polynomials in different variables");
        let mut out = Self::zero(self.var);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                out.add_term(ea + eb, &ca.times(cb));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::from_terms(self.var, self.terms.iter().map(|(e, x)| (*e, x.times(c))))
    }

    pub fn scale_const(&self, c: Gf) -> Self {
        Self::from_terms(self.var, self.terms.iter().map(|(e, x)| (*e, x.scale(c))))
    }

    /// Multiplies by `var^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPolynomial {
            var: self.var,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn relabel(&self, var: Variable) -> Self {
        LaurentPolynomial {
            var,
            terms: self.terms.clone(),
        }
    }

    /// Rewrites a polynomial in `t` as one in `t^-1` and back.
    pub fn invert_variable(&self) -> Self {
        let var = match self.var {
            Variable::T => Variable::TInv,
            Variable::TInv => Variable::T,
            Variable::U => Variable::UInv,
            Variable::UInv => Variable::U,
            other => other,
        };
        LaurentPolynomial {
            var,
            terms: self.terms.iter().map(|(e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn filter(&self, keep: impl Fn(i64) -> bool) -> Self {
        LaurentPolynomial {
            var: self.var,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| keep(**e))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Multiplies the coefficient of `var^i` by `z^(i*j)`: the substitution
    /// `var -> z^j var`.
    pub fn twist(&self, z: Gf, j: i64) -> Self {
        Self::from_terms(
            self.var,
            self.terms.iter().map(|(e, c)| (*e, c.scale(z.pow(e * j)))),
        )
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> LaurentPolynomial<D> {
        LaurentPolynomial::from_terms(self.var, self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn try_map_coeffs<D: Coeff, E>(
        &self,
        f: impl Fn(&C) -> Result<D, E>,
    ) -> Result<LaurentPolynomial<D>, E> {
        let mut out = LaurentPolynomial::zero(self.var);
        for (e, c) in &self.terms {
            out.add_term(*e, &f(c)?);
        }
        Ok(out)
    }

    /// Drops coefficients that are zero to working precision.
    pub fn without_negligible(&self) -> Self {
        LaurentPolynomial {
            var: self.var,
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| !c.is_negligible())
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }
}

impl<C: Coeff> fmt::Display for LaurentPolynomial<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let sym = self.var.symbol();
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let e = if matches!(self.var, Variable::TInv | Variable::UInv) {
                -e
            } else {
                *e
            };
            let mono = match e {
                0 => String::new(),
                1 => sym.to_string(),
                _ => format!("{sym}^{e}"),
            };
            let coef = c.to_string();
            let needs_parens = coef.contains(' ');
            match (c.is_one(), mono.is_empty()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{mono}")?,
                (false, true) if needs_parens => write!(f, "({coef})")?,
                (false, true) => write!(f, "{coef}")?,
                (false, false) if needs_parens => write!(f, "({coef})*{mono}")?,
                (false, false) => write!(f, "{coef}*{mono}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k() -> &'static Gf2nField {
        Gf2nField::get(8).unwrap()
    }

    #[test]
    fn cancelling_terms_are_not_stored() {
        let one = k().one();
        let p = LaurentPolynomial::monomial(Variable::T, 3, one);
        let s = p.add(&p);
        assert!(s.is_zero());
    }

    #[test]
    fn display_uses_negative_exponents_for_t_inverse() {
        let p = LaurentPolynomial::from_terms(
            Variable::TInv,
            [(5, k().one()), (1, k().gen_pow(3))],
        );
        assert_eq!(p.to_string(), "t^-5 + g^3*t^-1");
    }

    #[test]
    fn twist_three_times_is_identity() {
        let z = k().zeta3();
        let p = LaurentPolynomial::from_terms(
            Variable::TInv,
            [(7, k().gen_pow(11)), (2, k().one()), (1, k().gen_pow(200))],
        );
        assert_eq!(p.twist(z, 1).twist(z, 1).twist(z, 1), p);
    }
}
