//! Rational functions in `t` and their Laurent expansions at the places
//! `(t)` and `(zeta3^alpha t - mu)`.

use std::fmt;

use super::field::Gf;
use super::laurent::{Coeff, LaurentPolynomial, Variable};
use super::Char2Error;

/// A rational function `num / den` in `t`, kept reduced: both parts are
/// polynomials, their gcd is a unit, and `den` is monic.
#[derive(Clone, PartialEq, Debug)]
pub struct RationalFunction<C> {
    num: LaurentPolynomial<C>,
    den: LaurentPolynomial<C>,
}

fn divrem<C: Coeff>(
    a: &LaurentPolynomial<C>,
    b: &LaurentPolynomial<C>,
) -> Result<(LaurentPolynomial<C>, LaurentPolynomial<C>), Char2Error> {
    let b = b.without_negligible();
    let (db, lb) = match b.leading() {
        Some((d, c)) => (d, c.clone()),
        None => return Err(Char2Error::DivisionByZero),
    };
    let lb_inv = lb.inverse()?;
    let mut q = LaurentPolynomial::zero(a.var());
    let mut r = a.without_negligible();
    while let Some((d, c)) = r.leading() {
        if d < db {
            break;
        }
        let factor = c.times(&lb_inv);
        let shift = d - db;
        q.add_term(shift, &factor);
        let mut sub = b.scale(&factor).shift(shift);
        // the top terms cancel by construction
        sub.remove(d);
        r.remove(d);
        r = r.add(&sub).without_negligible();
    }
    Ok((q, r))
}

fn monic<C: Coeff>(p: &LaurentPolynomial<C>) -> Result<LaurentPolynomial<C>, Char2Error> {
    let (d, lc) = match p.leading() {
        Some((d, c)) => (d, c.clone()),
        None => return Ok(p.clone()),
    };
    let inv = lc.inverse()?;
    let mut out = p.scale(&inv);
    out.remove(d);
    out.add_term(d, &lc.one_of());
    Ok(out)
}

/// Monic gcd of two polynomials in `t` with nonnegative exponents.
pub fn poly_gcd<C: Coeff>(
    a: &LaurentPolynomial<C>,
    b: &LaurentPolynomial<C>,
) -> Result<LaurentPolynomial<C>, Char2Error> {
    let mut x = a.without_negligible();
    let mut y = b.without_negligible();
    if x.max_exp() < y.max_exp() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_zero() {
        let (_, r) = divrem(&x, &y)?;
        x = y;
        y = r;
    }
    monic(&x)
}

impl<C: Coeff> RationalFunction<C> {
    /// Reduces `num / den`, where both are Laurent polynomials in `t`.
    ///
    /// Coefficients that are zero to working precision count as zero.
    pub fn new(num: LaurentPolynomial<C>, den: LaurentPolynomial<C>) -> Result<Self, Char2Error> {
        Self::build(num, den, true)
    }

    /// Like [`RationalFunction::new`] but trusts the caller that the parts
    /// share no factor other than powers of `t`. Over truncated series the
    /// Euclidean algorithm loses precision at every step, so callers that
    /// know coprimality by construction should use this.
    pub fn from_coprime(
        num: LaurentPolynomial<C>,
        den: LaurentPolynomial<C>,
    ) -> Result<Self, Char2Error> {
        Self::build(num, den, false)
    }

    fn build(
        num: LaurentPolynomial<C>,
        den: LaurentPolynomial<C>,
        reduce: bool,
    ) -> Result<Self, Char2Error> {
        let num = num.without_negligible().relabel(Variable::T);
        let den = den.without_negligible().relabel(Variable::T);
        let den_low = match den.min_exp() {
            Some(e) => e,
            None => return Err(Char2Error::DivisionByZero),
        };
        if num.is_zero() {
            let one = den.leading().expect("nonzero").1.one_of();
            return Ok(RationalFunction {
                num,
                den: LaurentPolynomial::monomial(Variable::T, 0, one),
            });
        }
        let num_low = num.min_exp().expect("nonzero");
        // strip the t-adic parts, then take the gcd of what is left
        let mut num_core = num.shift(-num_low);
        let mut den_core = den.shift(-den_low);
        if reduce {
            let g = poly_gcd(&num_core, &den_core)?;
            if g.max_exp() != Some(0) {
                let (qn, rn) = divrem(&num_core, &g)?;
                let (qd, rd) = divrem(&den_core, &g)?;
                debug_assert!(rn.is_zero() && rd.is_zero());
                num_core = qn;
                den_core = qd;
            }
        }
        let t_power = num_low - den_low;
        let (num, den) = if t_power >= 0 {
            (num_core.shift(t_power), den_core)
        } else {
            (num_core, den_core.shift(-t_power))
        };
        let (d, lc) = den.leading().map(|(d, c)| (d, c.clone())).expect("nonzero");
        let inv = lc.inverse()?;
        let mut den = den.scale(&inv);
        den.remove(d);
        den.add_term(d, &lc.one_of());
        Ok(RationalFunction {
            num: num.scale(&inv),
            den,
        })
    }

    /// Wraps a Laurent polynomial in `t` (or `t^-1`) as a rational function.
    pub fn from_laurent(p: &LaurentPolynomial<C>, one: C) -> Result<Self, Char2Error> {
        let p = match p.var() {
            Variable::TInv => p.invert_variable(),
            _ => p.clone(),
        };
        Self::new(p, LaurentPolynomial::monomial(Variable::T, 0, one))
    }

    pub fn numerator(&self) -> &LaurentPolynomial<C> {
        &self.num
    }

    pub fn denominator(&self) -> &LaurentPolynomial<C> {
        &self.den
    }

    /// The substitution `t -> zeta^j t`.
    pub fn twist(&self, zeta: Gf, j: i64) -> Self {
        let d = self.den.max_exp().expect("nonzero denominator");
        let renorm = zeta.pow(-d * j);
        RationalFunction {
            num: self.num.twist(zeta, j).scale_const(renorm),
            den: self.den.twist(zeta, j).scale_const(renorm),
        }
    }

    pub fn map_coeffs<D: Coeff>(
        &self,
        f: impl Fn(&C) -> Result<D, Char2Error>,
    ) -> Result<RationalFunction<D>, Char2Error> {
        RationalFunction::new(self.num.try_map_coeffs(&f)?, self.den.try_map_coeffs(&f)?)
    }
}

impl<C: Coeff> fmt::Display for RationalFunction<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.len() == 1 && self.den.max_exp() == Some(0) {
            write!(f, "{}", self.num)
        } else {
            let wrap = |p: &LaurentPolynomial<C>| {
                if p.len() > 1 {
                    format!("({p})")
                } else {
                    p.to_string()
                }
            };
            write!(f, "{} / {}", wrap(&self.num), wrap(&self.den))
        }
    }
}

/// A place of `k((w))(t)` at which ramification is examined.
#[derive(Clone, PartialEq, Debug)]
pub enum Place<C> {
    /// The ideal `(t)`; local parameter `u = t`.
    AtT,
    /// The ideal `(zeta3^alpha t - mu)`, `alpha` in `{1, 2, 3}`; local
    /// parameter `u = zeta3^alpha t - mu`.
    AtLinear { alpha: u8, mu: C },
}

impl<C: Coeff> Place<C> {
    pub fn at_linear(alpha: u8, mu: C) -> Result<Self, Char2Error> {
        if !(1..=3).contains(&alpha) {
            return Err(Char2Error::InvalidPlace(format!("alpha = {alpha} is not in {{1, 2, 3}}")));
        }
        if mu.is_negligible() {
            return Err(Char2Error::InvalidPlace("mu must be nonzero".into()));
        }
        Ok(Place::AtLinear { alpha, mu })
    }

    pub fn label(&self) -> String {
        match self {
            Place::AtT => "(t)".to_string(),
            Place::AtLinear { alpha, .. } => format!("(zeta3^{alpha} t - mu)"),
        }
    }

    /// `t` written in the local parameter `u`.
    fn t_in_local_parameter(&self, one: &C) -> LaurentPolynomial<C> {
        match self {
            Place::AtT => LaurentPolynomial::monomial(Variable::U, 1, one.clone()),
            Place::AtLinear { alpha, mu } => {
                let zinv = one.field().zeta3().pow(-i64::from(*alpha));
                LaurentPolynomial::from_terms(
                    Variable::U,
                    [(1, one.scale(zinv)), (0, mu.scale(zinv))],
                )
            }
        }
    }

    /// Substitutes `t` by its expression in the local parameter. `p` must
    /// have nonnegative exponents.
    pub fn substitute(&self, p: &LaurentPolynomial<C>) -> LaurentPolynomial<C> {
        let Some((top, lc)) = p.leading() else {
            return LaurentPolynomial::zero(Variable::U);
        };
        assert!(p.min_exp().unwrap_or(0) >= 0, "substitute expects a polynomial");
        let t = self.t_in_local_parameter(&lc.one_of());
        let mut acc = LaurentPolynomial::zero(Variable::U);
        for e in (0..=top).rev() {
            acc = acc.mul(&t);
            if let Some(c) = p.coeff(e) {
                acc.add_term(0, c);
            }
        }
        acc
    }
}

/// A Laurent series in a local parameter `u`, exact through `u^exact_through`.
#[derive(Clone, PartialEq, Debug)]
pub struct LocalSeries<C> {
    pub series: LaurentPolynomial<C>,
    pub exact_through: i64,
    /// `ord_u` of the function; negative for a pole.
    pub valuation: i64,
}

impl<C: Coeff> LocalSeries<C> {
    pub fn pole_order(&self) -> i64 {
        (-self.valuation).max(0)
    }

    /// Negative-exponent part, rewritten with exponent `d` standing for `u^-d`.
    pub fn principal_part(&self) -> LaurentPolynomial<C> {
        self.series.filter(|e| e < 0).invert_variable()
    }
}

/// Index and value of the lowest coefficient that is certainly nonzero;
/// lower coefficients must be zero to working precision.
fn lowest_nonzero<C: Coeff>(p: &LaurentPolynomial<C>) -> Option<(i64, C)> {
    p.terms()
        .find(|(_, c)| c.is_certainly_nonzero())
        .map(|(e, c)| (e, c.clone()))
}

/// Expands `f` in the local parameter at `place`, exactly through `u^order`.
pub fn local_expansion<C: Coeff>(
    f: &RationalFunction<C>,
    place: &Place<C>,
    order: i64,
) -> Result<LocalSeries<C>, Char2Error> {
    let nu = place.substitute(&f.num);
    let du = place.substitute(&f.den);
    let Some((md, d0)) = lowest_nonzero(&du) else {
        return Err(Char2Error::PrecisionExhausted(format!(
            "denominator vanishes to working precision at {}",
            place.label()
        )));
    };
    let Some((mn, _)) = lowest_nonzero(&nu) else {
        if f.num.is_zero() {
            return Ok(LocalSeries {
                series: LaurentPolynomial::zero(Variable::U),
                exact_through: order,
                valuation: i64::MAX,
            });
        }
        return Err(Char2Error::PrecisionExhausted(format!(
            "numerator vanishes to working precision at {}",
            place.label()
        )));
    };
    let valuation = mn - md;
    let d0_inv = d0.inverse()?;
    let count = order - valuation + 1;
    let mut q: Vec<C> = Vec::with_capacity(count.max(0) as usize);
    let zero = d0.zero_of();
    for k in 0..count.max(0) {
        let mut acc = nu.coeff(mn + k).cloned().unwrap_or_else(|| zero.clone());
        for j in 1..=k {
            if let Some(dj) = du.coeff(md + j) {
                acc = acc.plus(&dj.times(&q[(k - j) as usize]));
            }
        }
        q.push(acc.times(&d0_inv));
    }
    Ok(LocalSeries {
        series: LaurentPolynomial::from_terms(
            Variable::U,
            q.into_iter().enumerate().map(|(k, c)| (valuation + k as i64, c)),
        ),
        exact_through: order,
        valuation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::char2::field::Gf2nField;
    use crate::char2::series::TruncatedSeries;

    fn k() -> &'static Gf2nField {
        Gf2nField::get(8).unwrap()
    }

    fn t_poly(terms: &[(i64, Gf)]) -> LaurentPolynomial<Gf> {
        LaurentPolynomial::from_terms(Variable::T, terms.iter().copied())
    }

    #[test]
    fn reduces_common_factors() {
        let one = k().one();
        let a = k().gen_pow(9);
        // (t + a)(t + 1) / (t + a) t
        let tpa = t_poly(&[(1, one), (0, a)]);
        let num = tpa.mul(&t_poly(&[(1, one), (0, one)]));
        let den = tpa.mul(&t_poly(&[(1, one)]));
        let f = RationalFunction::new(num, den).unwrap();
        assert_eq!(f.numerator(), &t_poly(&[(1, one), (0, one)]));
        assert_eq!(f.denominator(), &t_poly(&[(1, one)]));
    }

    #[test]
    fn t_inverse_at_t_is_already_local() {
        let one = k().one();
        let f = RationalFunction::new(t_poly(&[(-1, one)]), t_poly(&[(0, one)])).unwrap();
        let e = local_expansion(&f, &Place::AtT, 5).unwrap();
        assert_eq!(e.valuation, -1);
        assert_eq!(
            e.series,
            LaurentPolynomial::monomial(Variable::U, -1, one)
        );
    }

    #[test]
    fn t_inverse_at_mu_expands_geometrically() {
        let f = k();
        let one = TruncatedSeries::constant(f.one());
        let mu = TruncatedSeries::monomial(f.one(), 2, Some(40));
        let tinv = RationalFunction::new(
            LaurentPolynomial::monomial(Variable::T, -1, one.clone()),
            LaurentPolynomial::monomial(Variable::T, 0, one),
        )
        .unwrap();
        let place = Place::at_linear(3, mu).unwrap();
        let e = local_expansion(&tinv, &place, 4).unwrap();
        assert_eq!(e.valuation, 0);
        for k in 0..=4 {
            let c = e.series.coeff(k).unwrap();
            // mu^-(k+1) = w^(-2k-2)
            assert_eq!(c.valuation(), Some(-2 * k - 2));
            assert_eq!(c.leading_coefficient(), Some(f.one()));
            assert_eq!(c.terms().count(), 1);
        }
    }
}
