//! Characteristic-zero lifts of `A4`-extensions: verification of a candidate
//! `(F, H, A)` and the explicit lifts for breaks 1 and 5.
//!
//! Everything is a polynomial in `X = T^-1` over `R`. With
//! `Phi = F(zeta3 X) F(zeta3^2 X)`, a candidate is accepted when
//! `Phi - H^2 - 4A` has all coefficients of valuation `> 2`, `Phi` has simple
//! roots, `Phi` and `Phi(zeta3 X)` share exactly `(nu + 1) / 2` roots, and
//! `(Phi - H^2) / 4` reduces to the target class.

use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::artin_schreier::{to_standard_form, AsError, StandardForm};
use crate::char2::{Gf, LaurentPolynomial, Variable};
use crate::padic::{PadicConfig, PadicError, PadicPolynomial, PadicRing, RamifiedElement, Valuation};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LiftError {
    #[error("degree mismatch: {0}")]
    DegreeMismatch(String),
    #[error("coefficient of t^-{degree} must be nonzero")]
    ZeroCoefficient { degree: u32 },
    #[error("ramification index {e} is not divisible by 5")]
    RamificationIndexIncompatible { e: u32 },
    #[error("indeterminate at precision: {0}")]
    IndeterminateAtPrecision(String),
    #[error("reduction mismatch: expected {expected}, found {found}")]
    ReductionMismatch { expected: String, found: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("invalid lift datum: {0}")]
    InvalidDatum(String),
    #[error(transparent)]
    ArtinSchreier(#[from] AsError),
}

impl From<PadicError> for LiftError {
    fn from(e: PadicError) -> Self {
        match e {
            PadicError::IndeterminateAtPrecision(s) => LiftError::IndeterminateAtPrecision(s),
            PadicError::PrecisionExhausted(s) => LiftError::PrecisionExhausted(s),
            other => LiftError::InvalidDatum(other.to_string()),
        }
    }
}

/// A candidate lift of the class of `target` (break `nu`).
#[derive(Clone, Debug, PartialEq)]
pub struct LiftDatum {
    pub f: PadicPolynomial,
    pub h: PadicPolynomial,
    pub a: PadicPolynomial,
    pub nu: u32,
    pub target: StandardForm<Gf>,
}

impl LiftDatum {
    /// Checks degrees and takes the target class from the reduction of `a`.
    pub fn new(
        f: PadicPolynomial,
        h: PadicPolynomial,
        a: PadicPolynomial,
        nu: u32,
    ) -> Result<LiftDatum, LiftError> {
        if nu.is_multiple_of(2) {
            return Err(LiftError::DegreeMismatch(format!("break {nu} is even")));
        }
        let want_f = (nu as usize).div_ceil(2);
        if f.degree() != Some(want_f) {
            return Err(LiftError::DegreeMismatch(format!(
                "deg F = {}, expected (nu + 1) / 2 = {want_f}",
                fmt_degree(f.degree())
            )));
        }
        if a.degree() != Some(nu as usize) {
            return Err(LiftError::DegreeMismatch(format!(
                "deg A = {}, expected nu = {nu}",
                fmt_degree(a.degree())
            )));
        }
        let target = to_standard_form(&a.reduce_mod_m())?;
        if target.break_() != nu {
            return Err(LiftError::DegreeMismatch(format!(
                "A reduces to {target} with break {}, expected {nu}",
                target.break_()
            )));
        }
        if h.is_zero() {
            return Err(LiftError::InvalidDatum("H is zero".into()));
        }
        Ok(LiftDatum { f, h, a, nu, target })
    }

    pub fn ring(&self) -> &Arc<PadicRing> {
        self.f.ring()
    }
}

fn fmt_degree(d: Option<usize>) -> String {
    d.map_or_else(|| "-inf".to_string(), |d| d.to_string())
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftCertificate {
    pub nu: u32,
    pub target: StandardForm<Gf>,
    pub phi: PadicPolynomial,
    /// `Phi - H^2 - 4A`.
    pub residual: PadicPolynomial,
    pub residual_min_valuation: Valuation,
    /// Valuations of the coefficients of `F` in degrees `1..=deg F`.
    pub f_valuations: Vec<Valuation>,
    pub gcd_degree: usize,
    pub discriminant_valuation: Valuation,
    /// Standard form of `(Phi - H^2) / 4 mod m`, if the division is exact.
    pub reduced_form: Option<StandardForm<Gf>>,
    pub shape_pass: bool,
    pub o4_pass: bool,
    pub separable_pass: bool,
    pub gcd_degree_pass: bool,
    pub reduction_pass: bool,
    pub kummer_dim2_pass: bool,
    pub config: PadicConfig,
    /// Degree of the characteristic-2 field the target lives in.
    pub field_degree: u32,
}

impl LiftCertificate {
    pub fn is_valid(&self) -> bool {
        self.shape_pass
            && self.o4_pass
            && self.separable_pass
            && self.gcd_degree_pass
            && self.reduction_pass
            && self.kummer_dim2_pass
    }

    /// `(name, verdict)` for every check, in a fixed order.
    pub fn checks(&self) -> [(&'static str, bool); 6] {
        [
            ("shape", self.shape_pass),
            ("o4", self.o4_pass),
            ("separable", self.separable_pass),
            ("gcd_degree", self.gcd_degree_pass),
            ("reduction", self.reduction_pass),
            ("kummer_dim2", self.kummer_dim2_pass),
        ]
    }

    pub fn failed_checks(&self) -> Vec<&'static str> {
        self.checks().iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect()
    }

    /// Turns a failed reduction check into an error carrying both forms.
    pub fn ensure_reduction(&self) -> Result<(), LiftError> {
        if self.reduction_pass {
            return Ok(());
        }
        Err(LiftError::ReductionMismatch {
            expected: self.target.to_string(),
            found: self
                .reduced_form
                .as_ref()
                .map_or_else(|| "(Phi - H^2 not divisible by 4)".into(), ToString::to_string),
        })
    }
}

/// `F, H in 1 + X m[X]`.
fn in_one_plus_m(p: &PadicPolynomial) -> bool {
    let ring = p.ring();
    p.coeff(0) == ring.one() && p.coeffs().iter().skip(1).all(|c| !c.is_unit())
}

pub fn verify_lift(d: &LiftDatum) -> Result<LiftCertificate, LiftError> {
    let ring = d.ring().clone();
    if ring.precision() < 4 {
        return Err(LiftError::IndeterminateAtPrecision(format!(
            "lift verification needs 2-adic precision at least 4, got {}",
            ring.precision()
        )));
    }
    let phi = d.f.substitute_zeta3(1).mul(&d.f.substitute_zeta3(2));
    let h2 = d.h.mul(&d.h);
    let four = ring.from_int(4);
    let residual = phi.sub(&h2).sub(&d.a.scale(&four));

    let o4_pass = residual.is_o4()?;
    let discriminant_valuation = phi.discriminant_valuation()?;
    let separable_pass = discriminant_valuation.finite().is_some();
    let gcd_degree = phi.gcd_degree(&phi.substitute_zeta3(1))?;
    let gcd_degree_pass = gcd_degree == (d.nu as usize).div_ceil(2);

    let reduced_form = match phi.sub(&h2).halve().and_then(|p| p.halve()) {
        Ok(y) => Some(to_standard_form(&y.reduce_mod_m())?),
        Err(PadicError::NotDivisible(_)) => None,
        Err(e) => return Err(e.into()),
    };
    let reduction_pass = reduced_form.as_ref() == Some(&d.target);

    Ok(LiftCertificate {
        nu: d.nu,
        target: d.target.clone(),
        residual_min_valuation: residual.min_valuation(),
        f_valuations: (1..=d.f.degree().unwrap_or(0)).map(|i| d.f.coeff(i).valuation()).collect(),
        phi,
        residual,
        gcd_degree,
        discriminant_valuation,
        reduced_form,
        shape_pass: in_one_plus_m(&d.f) && in_one_plus_m(&d.h),
        o4_pass,
        separable_pass,
        gcd_degree_pass,
        reduction_pass,
        kummer_dim2_pass: separable_pass && gcd_degree_pass,
        config: ring.config(),
        field_degree: d.target.poly().leading().map_or(ring.config().residue_degree, |(_, c)| {
            c.field().degree()
        }),
    })
}

fn residue_in(ring: &Arc<PadicRing>, x: Gf) -> Result<Gf, LiftError> {
    if x.field().degree() != ring.residue_field().degree() {
        return Err(LiftError::InvalidDatum(format!(
            "coefficient {x} lives in GF(2^{}), residue field is GF(2^{})",
            x.field().degree(),
            ring.residue_field().degree()
        )));
    }
    Ok(x)
}

fn target_poly(terms: &[(i64, Gf)]) -> LaurentPolynomial<Gf> {
    LaurentPolynomial::from_terms(Variable::TInv, terms.iter().copied())
}

/// `F = 1 - 4 c1 X`, `H = 1`, `A = c1 X` for the class of `c1 t^-1`.
pub fn base_lift_nu1(ring: &Arc<PadicRing>, c1_bar: Gf) -> Result<LiftDatum, LiftError> {
    let c1_bar = residue_in(ring, c1_bar)?;
    if c1_bar.is_zero() {
        return Err(LiftError::ZeroCoefficient { degree: 1 });
    }
    let c1 = ring.teichmuller(c1_bar);
    let f = PadicPolynomial::new(ring, vec![ring.one(), c1.mul(&ring.from_int(-4))]);
    let h = PadicPolynomial::one(ring);
    let a = PadicPolynomial::new(ring, vec![ring.zero(), c1]);
    let datum = LiftDatum::new(f, h, a, 1)?;
    debug_assert_eq!(datum.target.poly(), &target_poly(&[(1, c1_bar)]));
    Ok(datum)
}

/// The lift for `c1 t^-1 + c5 t^-5` with `b = unit * pi^(2e/5)`:
/// `F = 1 + a1 X + a2 X^2 + a3 X^3` where `a1 = -2b - 4c1`, `a2 = b^2`,
/// `a3 = -4 c5 / b^2`, and `H = 1 + b X + b^2 X^2`.
pub fn base_lift_nu5(
    ring: &Arc<PadicRing>,
    c1_bar: Gf,
    c5_bar: Gf,
    unit: Option<&RamifiedElement>,
) -> Result<LiftDatum, LiftError> {
    let e = ring.config().ram_index;
    if !e.is_multiple_of(5) {
        return Err(LiftError::RamificationIndexIncompatible { e });
    }
    let (c1_bar, c5_bar) = (residue_in(ring, c1_bar)?, residue_in(ring, c5_bar)?);
    if c5_bar.is_zero() {
        return Err(LiftError::ZeroCoefficient { degree: 5 });
    }
    let one = ring.one();
    let unit = unit.cloned().unwrap_or_else(|| one.clone());
    if !unit.is_unit() {
        return Err(LiftError::InvalidDatum(format!("b-multiplier {unit} is not a unit")));
    }
    let e = e as usize;
    let b = unit.mul(&ring.pi_pow(2 * e / 5));
    let b2 = b.mul(&b);
    let (c1, c5) = (ring.teichmuller(c1_bar), ring.teichmuller(c5_bar));
    let a1 = b.mul(&ring.from_int(-2)).sub(&c1.mul(&ring.from_int(4)));
    // 4 / b^2 = pi^(6e/5) / unit^2, computed without division
    let unit_inv = unit.inverse()?;
    let a3 = c5.mul(&ring.pi_pow(6 * e / 5)).mul(&unit_inv.mul(&unit_inv)).neg();
    let f = PadicPolynomial::new(ring, vec![one.clone(), a1, b2.clone(), a3]);
    let h = PadicPolynomial::new(ring, vec![one, b, b2]);
    let a = PadicPolynomial::from_sparse(ring, [(1, c1), (5, c5)]);
    LiftDatum::new(f, h, a, 5)
}

/// The valuation profile `(v(a1), v(a2), v(a3))` expected of the break-5 lift.
pub fn nu5_expected_profile() -> [Ratio<i64>; 3] {
    [Ratio::new(7, 5), Ratio::new(4, 5), Ratio::new(6, 5)]
}
