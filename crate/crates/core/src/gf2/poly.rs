use std::fmt;
use std::ops::{Add, Mul};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::{Error, Result};

/// A polynomial over GF(2).
///
/// Coefficients are bit-packed little-endian by exponent: bit `i` of the
/// packed words is the coefficient of `x^i`. The word vector is always
/// trimmed so that its last word is nonzero; the zero polynomial has no words.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Gf2Poly {
    words: Vec<u64>,
}

impl Gf2Poly {
    pub fn zero() -> Self {
        Gf2Poly { words: Vec::new() }
    }

    pub fn one() -> Self {
        Gf2Poly::from_mask(1)
    }

    pub fn x() -> Self {
        Gf2Poly::from_mask(2)
    }

    /// `x^n`.
    pub fn monomial(n: usize) -> Self {
        let mut p = Gf2Poly::zero();
        p.flip(n);
        p
    }

    pub fn from_mask(mask: u64) -> Self {
        let mut p = Gf2Poly { words: vec![mask] };
        p.trim();
        p
    }

    pub fn from_words(words: Vec<u64>) -> Self {
        let mut p = Gf2Poly { words };
        p.trim();
        p
    }

    /// Sum of `x^e` over `exponents`; repeated exponents cancel in pairs.
    pub fn from_exponents<I: IntoIterator<Item = usize>>(exponents: I) -> Self {
        let mut p = Gf2Poly::zero();
        for e in exponents {
            p.flip(e);
        }
        p
    }

    /// The coefficient mask, if the polynomial has degree below 64.
    pub fn to_mask(&self) -> Option<u64> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0]),
            _ => None,
        }
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn is_zero(&self) -> bool {
        self.words.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.words == [1]
    }

    /// Index of the highest set coefficient; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        let top = *self.words.last()?;
        Some((self.words.len() - 1) * 64 + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| (w >> (i % 64)) & 1 == 1)
    }

    pub fn constant_term(&self) -> bool {
        self.coeff(0)
    }

    /// Number of nonzero terms.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Exponents of the nonzero terms, highest first.
    pub fn exponents(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.weight());
        for (wi, &w) in self.words.iter().enumerate().rev() {
            let mut w = w;
            while w != 0 {
                let b = 63 - w.leading_zeros() as usize;
                out.push(wi * 64 + b);
                w ^= 1 << b;
            }
        }
        out
    }

    fn flip(&mut self, i: usize) {
        let wi = i / 64;
        if self.words.len() <= wi {
            self.words.resize(wi + 1, 0);
        }
        self.words[wi] ^= 1 << (i % 64);
        self.trim();
    }

    fn trim(&mut self) {
        while self.words.last() == Some(&0) {
            self.words.pop();
        }
    }

    /// `self ^= other * x^shift`, without trimming.
    fn xor_shifted(&mut self, other: &Gf2Poly, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        let need = other.words.len() + ws + 1;
        if self.words.len() < need {
            self.words.resize(need, 0);
        }
        for (i, &w) in other.words.iter().enumerate() {
            self.words[i + ws] ^= w << bs;
            if bs != 0 {
                self.words[i + ws + 1] ^= w >> (64 - bs);
            }
        }
    }

    /// Quotient and remainder of division by `m`.
    pub fn div_rem(&self, m: &Gf2Poly) -> Result<(Gf2Poly, Gf2Poly)> {
        let dm = m.degree().ok_or(Error::ZeroModulus)?;
        let mut r = self.clone();
        let mut q = Gf2Poly::zero();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            q.flip(dr - dm);
            r.xor_shifted(m, dr - dm);
            r.trim();
        }
        Ok((q, r))
    }

    /// Remainder of division by `m`.
    pub fn rem(&self, m: &Gf2Poly) -> Result<Gf2Poly> {
        Ok(self.div_rem(m)?.1)
    }

    pub fn divides(&self, other: &Gf2Poly) -> Result<bool> {
        Ok(other.rem(self)?.is_zero())
    }

    pub fn gcd(&self, other: &Gf2Poly) -> Gf2Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a
    }

    pub fn mul_mod(&self, other: &Gf2Poly, m: &Gf2Poly) -> Result<Gf2Poly> {
        (self * other).rem(m)
    }

    /// `x^n mod m` by square-and-multiply.
    pub fn x_pow_mod(n: u64, m: &Gf2Poly) -> Result<Gf2Poly> {
        let mut result = Gf2Poly::one().rem(m)?;
        let mut base = Gf2Poly::x().rem(m)?;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul_mod(&base, m)?;
            }
            base = base.mul_mod(&base, m)?;
            n >>= 1;
        }
        Ok(result)
    }

    /// Lower-case hexadecimal coefficient mask with a `0x` prefix.
    pub fn to_hex(&self) -> String {
        match self.words.split_last() {
            None => "0x0".to_string(),
            Some((top, rest)) => {
                let mut s = format!("0x{top:x}");
                for w in rest.iter().rev() {
                    s.push_str(&format!("{w:016x}"));
                }
                s
            }
        }
    }

    fn parse_hex(input: &str, digits: &str) -> Result<Self> {
        let err = |reason: &str| Error::Parse {
            input: input.to_string(),
            reason: reason.to_string(),
        };
        let digits = digits.trim_start_matches('0');
        if digits.is_empty() {
            return Ok(Gf2Poly::zero());
        }
        let bytes = digits.as_bytes();
        let mut words = Vec::with_capacity(bytes.len().div_ceil(16));
        for chunk in bytes.rchunks(16) {
            let s = std::str::from_utf8(chunk).map_err(|_| err("non-ASCII digit"))?;
            words.push(u64::from_str_radix(s, 16).map_err(|_| err("bad hex digit"))?);
        }
        Ok(Gf2Poly::from_words(words))
    }

    fn parse_caret(input: &str) -> Result<Self> {
        let err = |reason: String| Error::Parse {
            input: input.to_string(),
            reason,
        };
        let compact: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(err("empty expression".into()));
        }
        if compact == "0" {
            return Ok(Gf2Poly::zero());
        }
        let mut p = Gf2Poly::zero();
        for term in compact.split('+') {
            let e = match term {
                "" => return Err(err("empty term".into())),
                "1" => 0,
                "x" | "X" => 1,
                t => {
                    let rest = t
                        .strip_prefix("x^")
                        .or_else(|| t.strip_prefix("X^"))
                        .ok_or_else(|| err(format!("unrecognised term {t:?}")))?;
                    let rest = rest.trim_start_matches('{').trim_end_matches('}');
                    rest.parse::<usize>()
                        .map_err(|_| err(format!("bad exponent in {t:?}")))?
                }
            };
            if e > 1 << 24 {
                return Err(err(format!("exponent {e} too large")));
            }
            p.flip(e);
        }
        Ok(p)
    }
}

impl FromStr for Gf2Poly {
    type Err = Error;

    /// Accepts a caret expression such as `x^4+x+1` or a hexadecimal
    /// coefficient mask such as `0x13`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if let Some(hex) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            Gf2Poly::parse_hex(s, hex)
        } else {
            Gf2Poly::parse_caret(s)
        }
    }
}

impl fmt::Display for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for e in self.exponents() {
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match e {
                0 => f.write_str("1")?,
                1 => f.write_str("x")?,
                _ => write!(f, "x^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Poly({self})")
    }
}

impl fmt::LowerHex for Gf2Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Add for &Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        let (long, short) = if self.words.len() >= rhs.words.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w ^= s;
        }
        Gf2Poly::from_words(words)
    }
}

impl Add<&Gf2Poly> for Gf2Poly {
    type Output = Gf2Poly;

    fn add(self, rhs: &Gf2Poly) -> Gf2Poly {
        &self + rhs
    }
}

/// Carry-less product of two words.
fn clmul(a: u64, b: u64) -> u128 {
    let mut acc = 0u128;
    let mut a = a;
    let wide = b as u128;
    while a != 0 {
        let i = a.trailing_zeros();
        acc ^= wide << i;
        a &= a - 1;
    }
    acc
}

impl Mul for &Gf2Poly {
    type Output = Gf2Poly;

    fn mul(self, rhs: &Gf2Poly) -> Gf2Poly {
        if self.is_zero() || rhs.is_zero() {
            return Gf2Poly::zero();
        }
        let mut out = vec![0u64; self.words.len() + rhs.words.len()];
        for (i, &a) in self.words.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in rhs.words.iter().enumerate() {
                let p = clmul(a, b);
                out[i + j] ^= p as u64;
                out[i + j + 1] ^= (p >> 64) as u64;
            }
        }
        Gf2Poly::from_words(out)
    }
}

impl Serialize for Gf2Poly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Gf2Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn multiplication() {
        assert_eq!(&p("x+1") * &p("x+1"), p("x^2+1"));
        assert_eq!(&p("x^2+x+1") * &p("x^3+x+1"), p("x^5+x^4+1"));
        assert_eq!(
            &p("x^4+x+1") * &p("x^9+x^6+x^4+x^3+1"),
            p("x^13+x^9+x^8+x^6+x^5+x^4+x^3+x+1")
        );
        assert_eq!(&p("x^4+x+1") * &Gf2Poly::zero(), Gf2Poly::zero());
    }

    #[test]
    fn wide_multiplication() {
        let a = Gf2Poly::monomial(70) + &Gf2Poly::one();
        let b = Gf2Poly::monomial(63) + &Gf2Poly::x();
        let prod = &a * &b;
        assert_eq!(prod, Gf2Poly::from_exponents([133, 71, 63, 1]));
        assert_eq!(prod.degree(), Some(133));
    }

    #[test]
    fn remainders() {
        // x^3 = 1 mod x^2+x+1, so x^5 = x^2 = x + 1.
        assert_eq!(Gf2Poly::monomial(5).rem(&p("x^2+x+1")).unwrap(), p("x+1"));
        assert_eq!(Gf2Poly::monomial(3).rem(&p("x^3+x+1")).unwrap(), p("x+1"));
        assert!(p("x^3+x+1").rem(&p("x^3+x+1")).unwrap().is_zero());
        assert_eq!(p("x^3").rem(&Gf2Poly::zero()), Err(Error::ZeroModulus));
    }

    #[test]
    fn x_pow_mod_matches_repeated_reduction() {
        let m = p("x^5+x^2+1");
        let mut acc = Gf2Poly::one();
        for n in 0..100u64 {
            assert_eq!(Gf2Poly::x_pow_mod(n, &m).unwrap(), acc);
            acc = (&acc * &Gf2Poly::x()).rem(&m).unwrap();
        }
    }

    #[test]
    fn gcd_of_coprime_and_shared() {
        let a = p("x^2+x+1");
        let b = p("x^3+x+1");
        assert!(a.gcd(&b).is_one());
        assert_eq!((&a * &b).gcd(&(&a * &p("x+1"))), a);
    }

    #[test]
    fn text_formats() {
        assert_eq!(p("0x13"), p("x^4+x+1"));
        assert_eq!(p(" x^4 + x + 1 "), p("x^4+x+1"));
        assert_eq!(p("x^4+x+1").to_string(), "x^4+x+1");
        assert_eq!(p("x^4+x+1").to_hex(), "0x13");
        assert_eq!(p("x^{12}+1"), Gf2Poly::from_exponents([12, 0]));
        assert_eq!(p("0"), Gf2Poly::zero());
        assert_eq!(Gf2Poly::zero().to_string(), "0");
        assert_eq!(p("x+x+1"), Gf2Poly::one());
        assert!("x^".parse::<Gf2Poly>().is_err());
        assert!("y+1".parse::<Gf2Poly>().is_err());
        assert!("x++1".parse::<Gf2Poly>().is_err());
        assert!("0xzz".parse::<Gf2Poly>().is_err());
        assert!("".parse::<Gf2Poly>().is_err());
    }

    #[test]
    fn degree_and_weight() {
        assert_eq!(Gf2Poly::zero().degree(), None);
        assert_eq!(Gf2Poly::one().degree(), Some(0));
        let f = p("x^13+x^9+x^8+x^6+x^5+x^4+x^3+x+1");
        assert_eq!(f.degree(), Some(13));
        assert_eq!(f.weight(), 9);
        assert_eq!(f.exponents(), vec![13, 9, 8, 6, 5, 4, 3, 1, 0]);
    }

    fn poly_strategy(max_words: usize) -> impl Strategy<Value = Gf2Poly> {
        proptest::collection::vec(any::<u64>(), 0..=max_words).prop_map(Gf2Poly::from_words)
    }

    proptest! {
        #[test]
        fn text_round_trip(a in poly_strategy(3)) {
            prop_assert_eq!(a.to_string().parse::<Gf2Poly>().unwrap(), a.clone());
            prop_assert_eq!(a.to_hex().parse::<Gf2Poly>().unwrap(), a);
        }

        #[test]
        fn reduction_is_a_ring_homomorphism(
            a in poly_strategy(3),
            b in poly_strategy(3),
            m in poly_strategy(2).prop_filter("nonzero", |m| !m.is_zero()),
        ) {
            let lhs = (&a * &b).rem(&m).unwrap();
            let rhs = (&a.rem(&m).unwrap() * &b.rem(&m).unwrap()).rem(&m).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn division_identity(a in poly_strategy(3), m in poly_strategy(2).prop_filter("nonzero", |m| !m.is_zero())) {
            let (q, r) = a.div_rem(&m).unwrap();
            prop_assert_eq!(&(&q * &m) + &r, a);
            prop_assert!(r.degree().is_none_or(|dr| dr < m.degree().unwrap()));
        }
    }
}
