//! `R = W(F_q)[pi] / (pi^e - 2)` modulo `2^N`, with `W(F_q)` realized as
//! `(Z/2^N)[x] / (f)` for the 0/1 lift `f` of the residue field's modulus.
//!
//! An element is stored as `e` Witt coefficients of `m` integers each, all
//! reduced mod `2^N`; word arithmetic wraps mod `2^64` and is masked, which
//! is a ring homomorphism onto `Z/2^N`.

use std::fmt;
use std::sync::Arc;

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use super::PadicError;
use crate::char2::{Gf, Gf2nField};

pub const DEFAULT_RESIDUE_DEGREE: u32 = 4;
pub const DEFAULT_PADIC_PRECISION: u32 = 8;
pub const DEFAULT_RAM_INDEX: u32 = 10;
const MAX_PADIC_PRECISION: u32 = 62;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PadicConfig {
    /// `m`: residue field is `GF(2^m)`.
    pub residue_degree: u32,
    /// `N`: elements are known modulo `2^N`.
    pub precision: u32,
    /// `e`: ramification index over `W`.
    pub ram_index: u32,
}

impl Default for PadicConfig {
    fn default() -> Self {
        PadicConfig {
            residue_degree: DEFAULT_RESIDUE_DEGREE,
            precision: DEFAULT_PADIC_PRECISION,
            ram_index: DEFAULT_RAM_INDEX,
        }
    }
}

impl PadicConfig {
    pub fn with_precision(self, precision: u32) -> Self {
        PadicConfig { precision, ..self }
    }
}

pub struct PadicRing {
    config: PadicConfig,
    field: &'static Gf2nField,
    m: usize,
    e: usize,
    mask: u64,
    /// Low coefficients `f_0..f_{m-1}` of the monic modulus.
    modulus: Vec<u64>,
    zeta3: Vec<u64>,
}

impl fmt::Debug for PadicRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "W(GF(2^{}))[pi]/(pi^{} - 2) mod 2^{}",
            self.m, self.e, self.config.precision
        )
    }
}

impl PadicRing {
    pub fn new(config: PadicConfig) -> Result<Arc<PadicRing>, PadicError> {
        let field = Gf2nField::get(config.residue_degree)?;
        if config.precision == 0 || config.precision > MAX_PADIC_PRECISION {
            return Err(PadicError::InvalidConfig(format!(
                "2-adic precision must be in 1..={MAX_PADIC_PRECISION}, got {}",
                config.precision
            )));
        }
        if config.ram_index == 0 {
            return Err(PadicError::InvalidConfig("ramification index must be positive".into()));
        }
        let m = config.residue_degree as usize;
        let modulus = (0..m).map(|j| u64::from(field.modulus() >> j & 1)).collect();
        let mut ring = PadicRing {
            config,
            field,
            m,
            e: config.ram_index as usize,
            mask: (1u64 << config.precision) - 1,
            modulus,
            zeta3: Vec::new(),
        };
        ring.zeta3 = ring.teichmuller_witt(field.zeta3());
        Ok(Arc::new(ring))
    }

    pub fn config(&self) -> PadicConfig {
        self.config
    }

    pub fn residue_field(&self) -> &'static Gf2nField {
        self.field
    }

    pub fn ram_index(&self) -> usize {
        self.e
    }

    pub fn precision(&self) -> u32 {
        self.config.precision
    }

    fn witt_mul(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let m = self.m;
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = prod[i + j].wrapping_add(x.wrapping_mul(y));
            }
        }
        // x^m = -sum f_j x^j
        for k in (m..2 * m - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..m {
                if self.modulus[j] != 0 {
                    prod[k - m + j] = prod[k - m + j].wrapping_sub(c);
                }
            }
        }
        prod.truncate(m);
        prod.iter_mut().for_each(|c| *c &= self.mask);
        prod
    }

    fn witt_pow_q(&self, a: &[u64]) -> Vec<u64> {
        let mut y = a.to_vec();
        for _ in 0..self.m {
            y = self.witt_mul(&y, &y);
        }
        y
    }

    fn teichmuller_witt(&self, x: Gf) -> Vec<u64> {
        let mut y: Vec<u64> = (0..self.m).map(|j| u64::from(x.bits() >> j & 1)).collect();
        for _ in 0..=self.config.precision {
            y = self.witt_pow_q(&y);
        }
        y
    }

    pub fn zero(self: &Arc<Self>) -> RamifiedElement {
        RamifiedElement {
            ring: self.clone(),
            c: vec![0; self.e * self.m],
        }
    }

    pub fn one(self: &Arc<Self>) -> RamifiedElement {
        self.from_int(1)
    }

    pub fn from_int(self: &Arc<Self>, n: i64) -> RamifiedElement {
        let mut z = self.zero();
        z.c[0] = (n as u64) & self.mask;
        z
    }

    /// `pi^k` for `k >= 0`, using `pi^e = 2`.
    pub fn pi_pow(self: &Arc<Self>, k: usize) -> RamifiedElement {
        let (q, r) = (k / self.e, k % self.e);
        let mut z = self.zero();
        if q < self.config.precision as usize {
            z.c[r * self.m] = (1u64 << q) & self.mask;
        }
        z
    }

    pub fn pi(self: &Arc<Self>) -> RamifiedElement {
        self.pi_pow(1)
    }

    /// The multiplicative lift of a residue-field element.
    pub fn teichmuller(self: &Arc<Self>, x: Gf) -> RamifiedElement {
        assert!(
            std::ptr::eq(x.field(), self.field),
            "residue element from a different field"
        );
        let mut z = self.zero();
        z.c[..self.m].copy_from_slice(&self.teichmuller_witt(x));
        z
    }

    /// The lifted primitive cube root of unity in `W`.
    pub fn zeta3(self: &Arc<Self>) -> RamifiedElement {
        let mut z = self.zero();
        z.c[..self.m].copy_from_slice(&self.zeta3);
        z
    }

    /// `zeta3^j`, `j` taken mod 3.
    pub fn zeta3_pow(self: &Arc<Self>, j: i64) -> RamifiedElement {
        match j.rem_euclid(3) {
            0 => self.one(),
            1 => self.zeta3(),
            _ => {
                let z = self.zeta3();
                z.mul(&z)
            }
        }
    }

    /// Builds an element from `e` Witt coefficients, each a list of `m`
    /// integers; shorter lists are zero-padded, values are reduced mod `2^N`.
    pub fn element_from_digits(
        self: &Arc<Self>,
        digits: &[Vec<i64>],
    ) -> Result<RamifiedElement, PadicError> {
        if digits.len() > self.e {
            return Err(PadicError::MalformedElement(format!(
                "{} pi-coefficients given, ramification index is {}",
                digits.len(),
                self.e
            )));
        }
        let mut z = self.zero();
        for (i, w) in digits.iter().enumerate() {
            if w.len() > self.m {
                return Err(PadicError::MalformedElement(format!(
                    "Witt coefficient with {} entries, residue degree is {}",
                    w.len(),
                    self.m
                )));
            }
            for (j, &v) in w.iter().enumerate() {
                z.c[i * self.m + j] = (v as u64) & self.mask;
            }
        }
        Ok(z)
    }
}

/// `v(x)` with `v(2) = 1`; `AtLeast(N)` when `x` is zero at working precision.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Valuation {
    Finite(Ratio<i64>),
    AtLeast(i64),
}

impl Valuation {
    /// Whether `v > bound`; `None` when the precision cannot decide.
    pub fn exceeds(&self, bound: Ratio<i64>) -> Option<bool> {
        match self {
            Valuation::Finite(v) => Some(*v > bound),
            Valuation::AtLeast(n) if Ratio::from_integer(*n) > bound => Some(true),
            Valuation::AtLeast(_) => None,
        }
    }

    pub fn finite(&self) -> Option<Ratio<i64>> {
        match self {
            Valuation::Finite(v) => Some(*v),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

#[derive(Clone)]
pub struct RamifiedElement {
    ring: Arc<PadicRing>,
    /// Index `i * m + j` holds the coefficient of `pi^i x^j`.
    c: Vec<u64>,
}

impl PartialEq for RamifiedElement {
    fn eq(&self, other: &Self) -> bool {
        self.ring.config == other.ring.config && self.c == other.c
    }
}

impl RamifiedElement {
    pub fn ring(&self) -> &Arc<PadicRing> {
        &self.ring
    }

    fn check_same(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.ring, &other.ring) || self.ring.config == other.ring.config,
            "elements of different rings"
        );
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        let mask = self.ring.mask;
        RamifiedElement {
            ring: self.ring.clone(),
            c: self
                .c
                .iter()
                .zip(&rhs.c)
                .map(|(a, b)| a.wrapping_add(*b) & mask)
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        let mask = self.ring.mask;
        RamifiedElement {
            ring: self.ring.clone(),
            c: self.c.iter().map(|a| a.wrapping_neg() & mask).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_same(rhs);
        let r = &self.ring;
        let (m, e) = (r.m, r.e);
        let mut out = vec![0u64; e * m];
        for i in 0..e {
            let a = &self.c[i * m..(i + 1) * m];
            if a.iter().all(|&x| x == 0) {
                continue;
            }
            for j in 0..e {
                let b = &rhs.c[j * m..(j + 1) * m];
                if b.iter().all(|&x| x == 0) {
                    continue;
                }
                let p = r.witt_mul(a, b);
                let (k, twice) = if i + j >= e { (i + j - e, true) } else { (i + j, false) };
                for (t, v) in p.into_iter().enumerate() {
                    let v = if twice { v.wrapping_mul(2) } else { v };
                    out[k * m + t] = out[k * m + t].wrapping_add(v);
                }
            }
        }
        out.iter_mut().for_each(|x| *x &= r.mask);
        RamifiedElement {
            ring: r.clone(),
            c: out,
        }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = self.ring.one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// The image in the residue field.
    pub fn reduce(&self) -> Gf {
        let bits = (0..self.ring.m).fold(0u32, |acc, j| acc | (((self.c[j] & 1) as u32) << j));
        self.ring.field.from_bits(bits).expect("m bits fit the residue field")
    }

    /// Valuation in units of `1/e` (that is, `ord_pi`), `None` for zero.
    pub fn ord_pi(&self) -> Option<u64> {
        let (m, e) = (self.ring.m, self.ring.e);
        (0..e)
            .filter_map(|i| {
                let tz = self.c[i * m..(i + 1) * m]
                    .iter()
                    .filter(|&&x| x != 0)
                    .map(|x| x.trailing_zeros())
                    .min()?;
                Some(u64::from(tz) * e as u64 + i as u64)
            })
            .min()
    }

    pub fn valuation(&self) -> Valuation {
        match self.ord_pi() {
            Some(k) => Valuation::Finite(Ratio::new(k as i64, self.ring.e as i64)),
            None => Valuation::AtLeast(i64::from(self.ring.config.precision)),
        }
    }

    pub fn is_unit(&self) -> bool {
        self.ord_pi() == Some(0)
    }

    /// Division by `pi`; the element must lie in the maximal ideal. The
    /// result is determined modulo `pi^(eN - 1)`.
    fn div_pi(&self) -> Self {
        let (m, e) = (self.ring.m, self.ring.e);
        debug_assert!(self.c[..m].iter().all(|x| x & 1 == 0));
        let mut out = vec![0u64; e * m];
        out[..(e - 1) * m].copy_from_slice(&self.c[m..]);
        // pi^-1 = pi^(e-1) / 2
        for j in 0..m {
            out[(e - 1) * m + j] = self.c[j] >> 1;
        }
        RamifiedElement {
            ring: self.ring.clone(),
            c: out,
        }
    }

    /// Division by 2; every coefficient must be even. The result is
    /// determined modulo `2^(N-1)`.
    pub fn halve(&self) -> Result<Self, PadicError> {
        if self.c.iter().any(|x| x & 1 == 1) {
            return Err(PadicError::NotDivisible(format!("{self} by 2")));
        }
        Ok(RamifiedElement {
            ring: self.ring.clone(),
            c: self.c.iter().map(|x| x >> 1).collect(),
        })
    }

    /// Writes a nonzero element as `pi^k * u` with `u` a unit.
    pub fn split_uniformizer(&self) -> Option<(u64, Self)> {
        let k = self.ord_pi()?;
        let mut u = self.clone();
        let e = self.ring.e as u64;
        for _ in 0..k / e {
            u = u.halve().expect("valuation guarantees divisibility");
        }
        for _ in 0..k % e {
            u = u.div_pi();
        }
        Some((k, u))
    }

    /// Inverse of a unit, by Newton iteration from the residue inverse.
    pub fn inverse(&self) -> Result<Self, PadicError> {
        let r = &self.ring;
        let res = self.reduce();
        let Some(res_inv) = res.inv() else {
            return Err(PadicError::NotAUnit(self.to_string()));
        };
        let two = r.from_int(2);
        let mut z = r.teichmuller(res_inv);
        for _ in 0..2 * (r.e + r.config.precision as usize) {
            let next = z.mul(&two.sub(&self.mul(&z)));
            if next == z {
                return Ok(z);
            }
            z = next;
        }
        debug_assert!(self.mul(&z) == r.one());
        Ok(z)
    }

    /// `self / rhs` when `v(self) >= v(rhs)`. The quotient is determined
    /// modulo `pi^(eN - ord_pi(rhs))`.
    pub fn div_exact(&self, rhs: &Self) -> Result<Self, PadicError> {
        let Some((kd, ud)) = rhs.split_uniformizer() else {
            return Err(PadicError::PrecisionExhausted(
                "division by an element that is zero to working precision".into(),
            ));
        };
        let Some((kn, un)) = self.split_uniformizer() else {
            return Ok(self.ring.zero());
        };
        if kn < kd {
            return Err(PadicError::NotDivisible(format!("{self} by {rhs}")));
        }
        Ok(un.mul(&ud.inverse()?).mul(&self.ring.pi_pow((kn - kd) as usize)))
    }

    /// The `e` Witt coefficients, each as `m` integers in `[0, 2^N)`.
    pub fn digits(&self) -> Vec<Vec<u64>> {
        self.c.chunks(self.ring.m).map(<[u64]>::to_vec).collect()
    }

    /// Digits with trailing zeros trimmed at both levels.
    pub fn compact_digits(&self) -> Vec<Vec<u64>> {
        let mut d: Vec<Vec<u64>> = self
            .digits()
            .into_iter()
            .map(|mut w| {
                while w.last() == Some(&0) {
                    w.pop();
                }
                w
            })
            .collect();
        while d.last().is_some_and(Vec::is_empty) {
            d.pop();
        }
        d
    }
}

impl fmt::Display for RamifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = self.compact_digits();
        if d.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = d
            .iter()
            .map(|w| format!("[{}]", w.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        write!(f, "[{}]", parts.join(","))
    }
}

impl fmt::Debug for RamifiedElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} (v = {})", self.valuation())
    }
}
