use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;

use super::ring::{PadicRing, RamifiedElement, Valuation};
use super::PadicError;
use crate::char2::{Gf, LaurentPolynomial, Variable};

/// Polynomial over `R` in `X = T^-1`. Coefficients that vanish modulo
/// `2^N` are trimmed, so the leading coefficient is always nonzero at
/// working precision.
#[derive(Clone)]
pub struct PadicPolynomial {
    ring: Arc<PadicRing>,
    coeffs: Vec<RamifiedElement>,
}

impl PartialEq for PadicPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.ring.config() == other.ring.config() && self.coeffs == other.coeffs
    }
}

impl PadicPolynomial {
    pub fn new(ring: &Arc<PadicRing>, mut coeffs: Vec<RamifiedElement>) -> Self {
        while coeffs.last().is_some_and(RamifiedElement::is_zero) {
            coeffs.pop();
        }
        PadicPolynomial {
            ring: ring.clone(),
            coeffs,
        }
    }

    pub fn zero(ring: &Arc<PadicRing>) -> Self {
        Self::new(ring, Vec::new())
    }

    pub fn one(ring: &Arc<PadicRing>) -> Self {
        Self::new(ring, vec![ring.one()])
    }

    /// From `(exponent, coefficient)` pairs; repeated exponents are summed.
    pub fn from_sparse(
        ring: &Arc<PadicRing>,
        terms: impl IntoIterator<Item = (usize, RamifiedElement)>,
    ) -> Self {
        let mut coeffs: Vec<RamifiedElement> = Vec::new();
        for (i, c) in terms {
            if coeffs.len() <= i {
                coeffs.resize(i + 1, ring.zero());
            }
            coeffs[i] = coeffs[i].add(&c);
        }
        Self::new(ring, coeffs)
    }

    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> RamifiedElement {
        self.coeffs.get(i).cloned().unwrap_or_else(|| self.ring.zero())
    }

    pub fn coeffs(&self) -> &[RamifiedElement] {
        &self.coeffs
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn sparse(&self) -> Vec<(usize, &RamifiedElement)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new(&self.ring, (0..n).map(|i| self.coeff(i).add(&rhs.coeff(i))).collect())
    }

    pub fn neg(&self) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(RamifiedElement::neg).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero(&self.ring);
        }
        let mut out = vec![self.ring.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        Self::new(&self.ring, out)
    }

    pub fn scale(&self, c: &RamifiedElement) -> Self {
        Self::new(&self.ring, self.coeffs.iter().map(|x| x.mul(c)).collect())
    }

    /// `p(zeta3^j X)`.
    pub fn substitute_zeta3(&self, j: i64) -> Self {
        let z = [
            self.ring.one(),
            self.ring.zeta3_pow(j),
            self.ring.zeta3_pow(2 * j),
        ];
        Self::new(
            &self.ring,
            self.coeffs.iter().enumerate().map(|(i, c)| c.mul(&z[i % 3])).collect(),
        )
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            &self.ring,
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul(&self.ring.from_int(i as i64)))
                .collect(),
        )
    }

    /// Minimum coefficient valuation; `AtLeast(N)` for the zero polynomial.
    pub fn min_valuation(&self) -> Valuation {
        self.coeffs
            .iter()
            .filter_map(|c| c.valuation().finite())
            .min()
            .map_or(Valuation::AtLeast(i64::from(self.ring.precision())), Valuation::Finite)
    }

    /// Whether every coefficient lies in `4m`, that is has valuation `> 2`.
    pub fn is_o4(&self) -> Result<bool, PadicError> {
        let two = Ratio::from_integer(2);
        for c in &self.coeffs {
            match c.valuation().exceeds(two) {
                Some(true) => {}
                Some(false) => return Ok(false),
                None => {
                    return Err(PadicError::IndeterminateAtPrecision(format!(
                        "cannot decide v > 2 with 2-adic precision {}",
                        self.ring.precision()
                    )))
                }
            }
        }
        if self.ring.precision() <= 2 {
            return Err(PadicError::IndeterminateAtPrecision(format!(
                "cannot decide v > 2 with 2-adic precision {}",
                self.ring.precision()
            )));
        }
        Ok(true)
    }

    /// Divides every coefficient by 2.
    pub fn halve(&self) -> Result<Self, PadicError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(RamifiedElement::halve)
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self::new(&self.ring, coeffs))
    }

    /// Image in `k[t^-1]`, with `X^i` read as `t^-i`.
    pub fn reduce_mod_m(&self) -> LaurentPolynomial<Gf> {
        LaurentPolynomial::from_terms(
            Variable::TInv,
            self.coeffs.iter().enumerate().map(|(i, c)| (i as i64, c.reduce())),
        )
    }

    /// Degree of `gcd(self, other)` over the fraction field.
    pub fn gcd_degree(&self, other: &Self) -> Result<usize, PadicError> {
        let (Some(dp), Some(dq)) = (self.degree(), other.degree()) else {
            return Err(PadicError::PrecisionExhausted(
                "gcd with a polynomial that is zero to working precision".into(),
            ));
        };
        if dp == 0 || dq == 0 {
            return Ok(0);
        }
        let pivots = elimination_pivots(sylvester(self, other));
        Ok(dp + dq - pivots.len())
    }

    /// Whether `Res(p, p')` is nonzero at working precision. A rank-deficient
    /// Sylvester matrix reads as a repeated root.
    pub fn is_separable(&self) -> Result<bool, PadicError> {
        Ok(self.discriminant_valuation()?.finite().is_some())
    }

    /// Valuation of `Res(p, p')`; `AtLeast(N)` if the Sylvester matrix is
    /// singular modulo `2^N`.
    pub fn discriminant_valuation(&self) -> Result<Valuation, PadicError> {
        let d = self.degree().ok_or_else(|| {
            PadicError::PrecisionExhausted("discriminant of the zero polynomial".into())
        })?;
        if d == 0 {
            return Ok(Valuation::Finite(Ratio::from_integer(0)));
        }
        let dp = self.derivative();
        if dp.degree() != Some(d - 1) {
            return Err(PadicError::PrecisionExhausted(format!(
                "leading coefficient of the derivative vanishes mod 2^{}",
                self.ring.precision()
            )));
        }
        if d == 1 {
            return Ok(Valuation::Finite(Ratio::from_integer(0)));
        }
        let n = 2 * d - 1;
        let pivots = elimination_pivots(sylvester(self, &dp));
        if pivots.len() < n {
            return Ok(Valuation::AtLeast(i64::from(self.ring.precision())));
        }
        let total: u64 = pivots.iter().sum();
        Ok(Valuation::Finite(Ratio::new(total as i64, self.ring.ram_index() as i64)))
    }
}

/// Sylvester matrix of `p`, `q`: `deg q` shifted copies of `p`, then
/// `deg p` shifted copies of `q`.
fn sylvester(p: &PadicPolynomial, q: &PadicPolynomial) -> Vec<Vec<RamifiedElement>> {
    let (dp, dq) = (p.coeffs.len() - 1, q.coeffs.len() - 1);
    let n = dp + dq;
    let mut rows = Vec::with_capacity(n);
    for (poly, copies) in [(p, dq), (q, dp)] {
        for s in 0..copies {
            let mut row = vec![p.ring.zero(); n];
            for (i, c) in poly.coeffs.iter().enumerate() {
                row[s + i] = c.clone();
            }
            rows.push(row);
        }
    }
    rows
}

/// Gaussian elimination with minimum-valuation pivoting over `R / 2^N`.
/// Returns the `ord_pi` of each pivot; their number is the rank over the
/// fraction field at working precision. Since `R / 2^N` is a chain ring
/// and every pivot divides the rest of its submatrix, no step loses
/// information.
fn elimination_pivots(mut a: Vec<Vec<RamifiedElement>>) -> Vec<u64> {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    for r in 0..rows.min(cols) {
        let mut best: Option<(u64, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(r) {
            for (j, x) in row.iter().enumerate().skip(r) {
                if let Some(k) = x.ord_pi() {
                    if best.is_none_or(|(bk, _, _)| k < bk) {
                        best = Some((k, i, j));
                    }
                }
            }
        }
        let Some((k, pi, pj)) = best else { break };
        a.swap(r, pi);
        for row in a.iter_mut() {
            row.swap(r, pj);
        }
        let pivot = a[r][r].clone();
        for i in r + 1..rows {
            if a[i][r].is_zero() {
                continue;
            }
            let q = a[i][r].div_exact(&pivot).expect("pivot has minimal valuation");
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][r..cols].iter_mut().zip(&top[r][r..cols]) {
                *x = x.sub(&q.mul(y));
            }
        }
        pivots.push(k);
    }
    pivots
}

impl fmt::Display for PadicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.sparse();
        if terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = terms
            .iter()
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*X"),
                _ => format!("{c}*X^{i}"),
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for PadicPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
