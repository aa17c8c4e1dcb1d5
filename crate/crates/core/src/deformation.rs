//! The break-lowering deformation: `a` of break `nu > 6` is deformed over
//! `k[[w]]` to `a~ = a t^6 (t^3 - mu^3)^-2`, whose generic fiber has break
//! `nu - 6` at `(t)` and break 1 at each of the three places
//! `(zeta3^alpha t - mu)`. The audit recomputes every break from local
//! expansions and checks that the different is preserved.

use std::fmt;

use thiserror::Error;

use crate::artin_schreier::{satisfies_a4_degree_criterion, to_standard_form, AsError, StandardForm};
use crate::char2::{
    local_expansion, Char2Error, Coeff, Gf, Gf2nField, LaurentPolynomial, Place, RationalFunction,
    TruncatedSeries, Variable,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DeformError {
    #[error("break {nu} is at most 6; the deformation needs nu > 6")]
    BreakTooSmall { nu: u32 },
    #[error("invalid mu: {0}")]
    InvalidMu(String),
    #[error("{0} does not give rise to an A4-extension")]
    NotA4(String),
    #[error("principal part vanished at {place}")]
    PrincipalPartVanished { place: String },
    #[error("different mismatch: generic fiber {generic}, special fiber {special}")]
    DifferentMismatch { generic: u32, special: u32 },
    #[error("A4 criterion lost on the generic fiber: {0}")]
    A4CriterionLost(String),
    #[error("reduction mismatch: a~ mod w is {found}, expected {expected}")]
    ReductionMismatch { expected: String, found: String },
    #[error("precision exhausted: {0}")]
    PrecisionExhausted(String),
    #[error(transparent)]
    ArtinSchreier(AsError),
    #[error(transparent)]
    Char2(Char2Error),
}

impl From<Char2Error> for DeformError {
    fn from(e: Char2Error) -> Self {
        match e {
            Char2Error::PrecisionExhausted(s) => DeformError::PrecisionExhausted(s),
            other => DeformError::Char2(other),
        }
    }
}

impl From<AsError> for DeformError {
    fn from(e: AsError) -> Self {
        match e {
            AsError::PrecisionExhausted(s) => DeformError::PrecisionExhausted(s),
            AsError::Char2(c) => c.into(),
            other => DeformError::ArtinSchreier(other),
        }
    }
}

/// `w^2 + O(w^P)`.
pub fn default_mu(field: &'static Gf2nField, precision: i64) -> TruncatedSeries {
    TruncatedSeries::monomial(field.one(), 2, Some(precision))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationParams {
    source: StandardForm<Gf>,
    mu: TruncatedSeries,
}

impl DeformationParams {
    /// `mu` must be a nonzero element of `w^2 k[[w^2]]` over the field of `source`.
    pub fn new(source: StandardForm<Gf>, mu: TruncatedSeries) -> Result<Self, DeformError> {
        let nu = source.break_();
        if !satisfies_a4_degree_criterion(&source) {
            return Err(DeformError::NotA4(source.to_string()));
        }
        if nu <= 6 {
            return Err(DeformError::BreakTooSmall { nu });
        }
        let Some(v) = mu.valuation() else {
            return Err(DeformError::InvalidMu("mu must be nonzero".into()));
        };
        if v < 2 {
            return Err(DeformError::InvalidMu(format!("mu = {mu} has valuation {v} < 2")));
        }
        if !mu.exponents_divisible_by(2) {
            return Err(DeformError::InvalidMu(format!("mu = {mu} is not a series in w^2")));
        }
        let field = source.poly().leading().expect("nonzero").1.field();
        if !std::ptr::eq(mu.field(), field) {
            return Err(DeformError::InvalidMu(format!(
                "mu is over GF(2^{}), a is over GF(2^{})",
                mu.field().degree(),
                field.degree()
            )));
        }
        Ok(DeformationParams { source, mu })
    }

    pub fn source(&self) -> &StandardForm<Gf> {
        &self.source
    }

    pub fn mu(&self) -> &TruncatedSeries {
        &self.mu
    }

    pub fn nu(&self) -> u32 {
        self.source.break_()
    }

    fn field(&self) -> &'static Gf2nField {
        self.mu.field()
    }
}

/// `a~ = a t^6 / (t^6 + mu^6)`, which is `a t^6 (t^3 - mu^3)^-2` in
/// characteristic 2.
pub fn deform(params: &DeformationParams) -> Result<RationalFunction<TruncatedSeries>, DeformError> {
    let k = params.field();
    let lift = |c: &Gf| TruncatedSeries::monomial(*c, 0, None);
    // a t^6 as a polynomial in t (negative exponents allowed)
    let num = params.source.poly().map_coeffs(lift).invert_variable().shift(6);
    let mu6 = params.mu.square().mul(&params.mu.square().square());
    let den = LaurentPolynomial::from_terms(
        Variable::T,
        [(6, TruncatedSeries::monomial(k.one(), 0, None)), (0, mu6)],
    );
    // the roots of t^6 + mu^6 are not roots of a t^6 since mu is transcendental
    // over k; the pole orders audited below certify this
    Ok(RationalFunction::from_coprime(num, den)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inertia {
    /// `Z/2 x Z/2`.
    KleinFour,
}

impl fmt::Display for Inertia {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/2 x Z/2")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct BranchDatum {
    pub place: Place<TruncatedSeries>,
    pub inertia: Inertia,
    pub pole_order: i64,
    /// Break of the `a~`-subextension at this place.
    pub brk: u32,
    /// Breaks of `a~`, `sigma(a~)`, `sigma^2(a~)` at this place.
    pub conjugate_breaks: [u32; 3],
    pub all_conjugates_ramify: bool,
    /// Reduced principal part of `a~` at the place.
    pub standard_form: StandardForm<TruncatedSeries>,
    /// At `(zeta3^alpha t - mu)`: `c = C mu` where `C` is the top
    /// coefficient of the pole of order 2.
    pub leading_datum: Option<TruncatedSeries>,
}

impl BranchDatum {
    pub fn label(&self) -> String {
        self.place.label()
    }

    /// Whether every `w`-exponent of the leading datum is divisible by 4.
    pub fn leading_datum_in_w4(&self) -> Option<bool> {
        self.leading_datum.as_ref().map(|c| c.exponents_divisible_by(4))
    }
}

fn reduced_principal_part(
    f: &RationalFunction<TruncatedSeries>,
    place: &Place<TruncatedSeries>,
) -> Result<(i64, StandardForm<TruncatedSeries>, LaurentPolynomial<TruncatedSeries>), DeformError> {
    let local = local_expansion(f, place, 0)?;
    let principal = local.principal_part();
    let sf = to_standard_form(&principal)?;
    Ok((local.pole_order(), sf, principal))
}

/// Break of `a~` at `place`, with the same computation for the two
/// conjugates `a~(zeta3 t)` and `a~(zeta3^2 t)`.
pub fn branch_break(
    a_tilde: &RationalFunction<TruncatedSeries>,
    place: &Place<TruncatedSeries>,
) -> Result<BranchDatum, DeformError> {
    let (_, lc) = a_tilde
        .denominator()
        .leading()
        .ok_or_else(|| DeformError::PrincipalPartVanished { place: place.label() })?;
    let zeta = lc.field().zeta3();
    let (pole_order, standard_form, principal) = reduced_principal_part(a_tilde, place)?;
    if standard_form.is_trivial() {
        return Err(DeformError::PrincipalPartVanished { place: place.label() });
    }
    let mut conjugate_breaks = [standard_form.break_(), 0, 0];
    for j in 1..3 {
        let (_, sf, _) = reduced_principal_part(&a_tilde.twist(zeta, j), place)?;
        conjugate_breaks[j as usize] = sf.break_();
    }
    let leading_datum = match place {
        Place::AtT => None,
        Place::AtLinear { mu, .. } => principal.coeff(2).map(|c| c.mul(mu)),
    };
    Ok(BranchDatum {
        place: place.clone(),
        inertia: Inertia::KleinFour,
        pole_order,
        brk: standard_form.break_(),
        conjugate_breaks,
        all_conjugates_ramify: conjugate_breaks.iter().all(|&b| b >= 1),
        standard_form,
        leading_datum,
    })
}

/// Serre's formula for Klein-four inertia with a single break `h`: each
/// branch contributes `3 (h + 1)`.
pub fn different_via_serre(branches: &[BranchDatum]) -> u32 {
    branches.iter().map(|b| 3 * (b.brk + 1)).sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct DeformationResult {
    pub nu: u32,
    pub mu: TruncatedSeries,
    pub a_tilde: RationalFunction<TruncatedSeries>,
    /// `(t)` first, then `alpha = 1, 2, 3`.
    pub branches: Vec<BranchDatum>,
    pub different_generic: u32,
    pub different_special: u32,
    pub generic_rep_at_t: StandardForm<TruncatedSeries>,
    /// `a~` with `w = 0`.
    pub reduction: RationalFunction<Gf>,
    /// The break-`(nu - 6)` form over `k` that the chain continues with.
    pub next_source: StandardForm<Gf>,
}

impl DeformationResult {
    pub fn generic_break(&self) -> u32 {
        self.generic_rep_at_t.break_()
    }

    pub fn branch_breaks(&self) -> Vec<u32> {
        self.branches.iter().map(|b| b.brk).collect()
    }

    pub fn all_conjugates_ramify(&self) -> bool {
        self.branches.iter().all(|b| b.all_conjugates_ramify)
    }

    pub fn leading_data_in_w4(&self) -> bool {
        self.branches.iter().filter_map(BranchDatum::leading_datum_in_w4).all(|ok| ok)
    }
}

/// Replaces each coefficient of the generic representative by its initial
/// term, giving a form over `k` with the same support.
pub fn specialize_initial_forms(
    sf: &StandardForm<TruncatedSeries>,
) -> Result<StandardForm<Gf>, DeformError> {
    let mut out = LaurentPolynomial::zero(Variable::TInv);
    for (d, c) in sf.poly().terms() {
        let lead = c.leading_coefficient().ok_or_else(|| {
            DeformError::PrecisionExhausted(format!("coefficient of pole order {d} is negligible"))
        })?;
        out.add_term(d, &lead);
    }
    Ok(to_standard_form(&out)?)
}

fn reduce_mod_varpi(f: &RationalFunction<TruncatedSeries>) -> Result<RationalFunction<Gf>, DeformError> {
    Ok(f.map_coeffs(TruncatedSeries::reduce_mod_varpi)?)
}

/// Runs the deformation and audits every claim about its generic fiber.
pub fn verify_deformation(params: &DeformationParams) -> Result<DeformationResult, DeformError> {
    let nu = params.nu();
    let a_tilde = deform(params)?;

    let reduction = reduce_mod_varpi(&a_tilde)?;
    let one = params.field().one();
    let expected = RationalFunction::from_laurent(params.source.poly(), one)?;
    if reduction != expected {
        return Err(DeformError::ReductionMismatch {
            expected: expected.to_string(),
            found: reduction.to_string(),
        });
    }

    let mut places = vec![Place::AtT];
    for alpha in 1..=3 {
        places.push(Place::at_linear(alpha, params.mu.clone())?);
    }
    let branches = places
        .iter()
        .map(|p| branch_break(&a_tilde, p))
        .collect::<Result<Vec<_>, _>>()?;

    let generic_rep_at_t = branches[0].standard_form.clone();
    let gb = generic_rep_at_t.break_();
    if gb + 6 != nu {
        return Err(DeformError::A4CriterionLost(format!(
            "generic break at (t) is {gb}, expected {}",
            nu - 6
        )));
    }
    if !satisfies_a4_degree_criterion(&generic_rep_at_t) {
        return Err(DeformError::A4CriterionLost(format!(
            "generic representative {generic_rep_at_t} has a degree divisible by 3"
        )));
    }
    if let Some(b) = branches.iter().find(|b| !b.all_conjugates_ramify) {
        return Err(DeformError::PrincipalPartVanished {
            place: format!("{} for a conjugate", b.label()),
        });
    }

    let different_generic = different_via_serre(&branches);
    let different_special = 3 * (nu + 1);
    if different_generic != different_special {
        return Err(DeformError::DifferentMismatch {
            generic: different_generic,
            special: different_special,
        });
    }

    let next_source = specialize_initial_forms(&generic_rep_at_t)?;
    Ok(DeformationResult {
        nu,
        mu: params.mu.clone(),
        a_tilde,
        branches,
        different_generic,
        different_special,
        generic_rep_at_t,
        reduction,
        next_source,
    })
}
