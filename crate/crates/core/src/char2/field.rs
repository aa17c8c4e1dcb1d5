//! Binary extension fields `GF(2^n)` for even `n`.
//!
//! Every field is built once, on first use, from the smallest primitive
//! modulus of its degree, so `x` (written `g`) generates the multiplicative
//! group and every element has a canonical `g^k` spelling. Fields live for the
//! whole program and elements carry a `&'static` pointer to theirs, which
//! keeps [`Gf`] `Copy`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Sub};
use std::sync::OnceLock;

use super::Char2Error;

/// Largest supported extension degree (log/exp tables are `2^n` entries).
pub const MAX_FIELD_DEGREE: u32 = 16;

/// Default extension degree for the characteristic-2 coefficient field.
pub const DEFAULT_FIELD_DEGREE: u32 = 8;

pub struct Gf2nField {
    degree: u32,
    modulus: u32,
    order: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

static FIELDS: [OnceLock<Gf2nField>; (MAX_FIELD_DEGREE / 2) as usize] =
    [const { OnceLock::new() }; (MAX_FIELD_DEGREE / 2) as usize];

impl Gf2nField {
    /// Returns the field `GF(2^n)`. `n` must be even and at most 16, so the
    /// field contains a primitive cube root of unity.
    pub fn get(n: u32) -> Result<&'static Gf2nField, Char2Error> {
        if n == 0 || !n.is_multiple_of(2) || n > MAX_FIELD_DEGREE {
            return Err(Char2Error::UnsupportedFieldDegree(n));
        }
        Ok(FIELDS[(n / 2 - 1) as usize].get_or_init(|| Gf2nField::build(n)))
    }

    fn build(n: u32) -> Gf2nField {
        let order = 1u32 << n;
        let group = order - 1;
        // smallest modulus for which x has full multiplicative order
        for low in (1..order).step_by(2) {
            let modulus = order | low;
            let mut exp = Vec::with_capacity(2 * group as usize);
            let mut x = 1u32;
            let mut primitive = true;
            for i in 0..group {
                if i > 0 && x == 1 {
                    primitive = false;
                    break;
                }
                exp.push(x);
                x <<= 1;
                if x & order != 0 {
                    x ^= modulus;
                }
            }
            if !primitive || x != 1 {
                continue;
            }
            let mut log = vec![0u32; order as usize];
            for (i, &v) in exp.iter().enumerate() {
                log[v as usize] = i as u32;
            }
            let wrap = exp.clone();
            exp.extend(wrap);
            return Gf2nField {
                degree: n,
                modulus,
                order,
                exp,
                log,
            };
        }
        unreachable!("primitive polynomials exist in every degree")
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// The modulus as a bit pattern, including the leading `x^n` bit.
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Number of elements, `2^n`.
    pub fn size(&self) -> u32 {
        self.order
    }

    pub fn zero(&'static self) -> Gf {
        Gf { bits: 0, field: self }
    }

    pub fn one(&'static self) -> Gf {
        Gf { bits: 1, field: self }
    }

    /// The generator `g = x`.
    pub fn generator(&'static self) -> Gf {
        self.gen_pow(1)
    }

    /// `g^k` for any integer `k`.
    pub fn gen_pow(&'static self, k: i64) -> Gf {
        let group = i64::from(self.order - 1);
        let k = k.rem_euclid(group) as usize;
        Gf {
            bits: self.exp[k],
            field: self,
        }
    }

    /// Element from its polynomial-basis bit pattern.
    pub fn from_bits(&'static self, bits: u32) -> Result<Gf, Char2Error> {
        if bits >= self.order {
            return Err(Char2Error::BitsOutOfRange {
                bits,
                degree: self.degree,
            });
        }
        Ok(Gf { bits, field: self })
    }

    /// The primitive cube root of unity `g^((2^n - 1)/3)`.
    pub fn zeta3(&'static self) -> Gf {
        self.gen_pow(i64::from((self.order - 1) / 3))
    }

    /// All field elements in bit-pattern order.
    pub fn elements(&'static self) -> impl Iterator<Item = Gf> {
        (0..self.order).map(move |bits| Gf { bits, field: self })
    }
}

impl fmt::Debug for Gf2nField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF(2^{}) mod {:#x}", self.degree, self.modulus)
    }
}

/// An element of a [`Gf2nField`].
#[derive(Clone, Copy)]
pub struct Gf {
    bits: u32,
    field: &'static Gf2nField,
}

impl Gf {
    pub fn field(&self) -> &'static Gf2nField {
        self.field
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn is_zero(&self) -> bool {
        self.bits == 0
    }

    pub fn is_one(&self) -> bool {
        self.bits == 1
    }

    /// Discrete logarithm to base `g`; `None` for zero.
    pub fn log(&self) -> Option<u32> {
        (self.bits != 0).then(|| self.field.log[self.bits as usize])
    }

    pub fn inv(&self) -> Option<Gf> {
        let l = self.log()?;
        let group = self.field.order - 1;
        Some(Gf {
            bits: self.field.exp[((group - l) % group) as usize],
            field: self.field,
        })
    }

    pub fn pow(&self, k: i64) -> Gf {
        match self.log() {
            None if k == 0 => self.field.one(),
            None => *self,
            Some(l) => self.field.gen_pow(i64::from(l) * k),
        }
    }

    pub fn square(&self) -> Gf {
        *self * *self
    }

    /// The unique square root, `x^(2^(n-1))`.
    pub fn sqrt(&self) -> Gf {
        let mut r = *self;
        for _ in 1..self.field.degree {
            r = r.square();
        }
        r
    }

    fn check_same(&self, other: &Gf) {
        assert!(
            std::ptr::eq(self.field, other.field),
            "mixed arithmetic between GF(2^{}) and GF(2^{})",
            self.field.degree,
            other.field.degree
        );
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Gf) -> bool {
        self.bits == other.bits && std::ptr::eq(self.field, other.field)
    }
}

impl Eq for Gf {}

impl std::hash::Hash for Gf {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.field.degree.hash(state);
        self.bits.hash(state);
    }
}

impl Add for Gf {
    type Output = Gf;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: Gf) -> Gf {
        self.check_same(&rhs);
        Gf {
            bits: self.bits ^ rhs.bits,
            field: self.field,
        }
    }
}

// characteristic 2
impl Sub for Gf {
    type Output = Gf;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn sub(self, rhs: Gf) -> Gf {
        self + rhs
    }
}

impl AddAssign for Gf {
    fn add_assign(&mut self, rhs: Gf) {
        *self = *self + rhs;
    }
}

impl Mul for Gf {
    type Output = Gf;
    fn mul(self, rhs: Gf) -> Gf {
        self.check_same(&rhs);
        if self.bits == 0 || rhs.bits == 0 {
            return self.field.zero();
        }
        let f = self.field;
        let l = f.log[self.bits as usize] + f.log[rhs.bits as usize];
        Gf {
            bits: f.exp[l as usize],
            field: f,
        }
    }
}

impl MulAssign for Gf {
    fn mul_assign(&mut self, rhs: Gf) {
        *self = *self * rhs;
    }
}

/// Prints `0`, `1`, `g` or `g^k`.
impl fmt::Display for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.log() {
            None => write!(f, "0"),
            Some(0) => write!(f, "1"),
            Some(1) => write!(f, "g"),
            Some(k) => write!(f, "g^{k}"),
        }
    }
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_odd_and_oversized_degrees() {
        assert!(Gf2nField::get(3).is_err());
        assert!(Gf2nField::get(0).is_err());
        assert!(Gf2nField::get(18).is_err());
        assert!(Gf2nField::get(16).is_ok());
    }

    #[test]
    fn sqrt_of_zero_and_one() {
        let k = Gf2nField::get(8).unwrap();
        assert_eq!(k.zero().sqrt(), k.zero());
        assert_eq!(k.one().sqrt(), k.one());
    }

    #[test]
    fn sqrt_is_exact_on_all_of_gf256() {
        let k = Gf2nField::get(8).unwrap();
        for x in k.elements() {
            assert_eq!(x.sqrt().square(), x, "sqrt({x})");
        }
    }

    #[test]
    fn zeta3_is_a_primitive_cube_root() {
        for n in (2..=MAX_FIELD_DEGREE).step_by(2) {
            let k = Gf2nField::get(n).unwrap();
            let z = k.zeta3();
            assert_ne!(z, k.one());
            assert_eq!(z.pow(3), k.one());
            assert_eq!(k.one() + z + z.square(), k.zero());
        }
    }

    #[test]
    fn generator_logs_round_trip() {
        let k = Gf2nField::get(4).unwrap();
        for e in 0..15 {
            assert_eq!(k.gen_pow(e).log(), Some(e as u32));
        }
        assert_eq!(k.gen_pow(-1) * k.generator(), k.one());
    }

    #[test]
    fn multiplication_matches_carryless_reference() {
        let k = Gf2nField::get(6).unwrap();
        let reference = |a: u32, b: u32| {
            let mut acc = 0u32;
            for i in 0..6 {
                if b >> i & 1 == 1 {
                    acc ^= a << i;
                }
            }
            for i in (6..12).rev() {
                if acc >> i & 1 == 1 {
                    acc ^= k.modulus() << (i - 6);
                }
            }
            acc
        };
        for a in k.elements() {
            for b in k.elements() {
                assert_eq!((a * b).bits(), reference(a.bits(), b.bits()));
            }
        }
    }
}
