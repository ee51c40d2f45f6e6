use std::collections::HashMap;

use super::{is_order, is_primitive, order, FactorSpec, Gf2Poly};
use crate::{Error, Result};

/// Upper bound on the number of entries in any residue or Zech table.
pub const MAX_TABLE_LEN: u64 = 1 << 26;

/// Largest modulus degree for which the residue index is a flat array.
const DENSE_INDEX_DEGREE: usize = 22;

/// Multiply a residue by x and reduce; `mask` is the full modulus mask and
/// `top` its leading bit.
#[inline]
pub(crate) fn times_x(r: u64, mask: u64, top: u64) -> u64 {
    let r = r << 1;
    if r & top != 0 {
        r ^ mask
    } else {
        r
    }
}

fn modulus_mask(m: &Gf2Poly) -> Result<(u64, u64, usize)> {
    let d = m.degree().ok_or(Error::ZeroModulus)?;
    if d == 0 || !m.constant_term() {
        return Err(Error::OrderUndefined(m.to_string()));
    }
    if d > 63 {
        return Err(Error::DegreeUnsupported(d, 63));
    }
    Ok((m.to_mask().expect("degree below 64"), 1u64 << d, d))
}

fn check_len(e: u64) -> Result<()> {
    if e > MAX_TABLE_LEN {
        return Err(Error::CapExceeded {
            what: "table length",
            value: e,
            cap: MAX_TABLE_LEN,
            hint: "; use the closed-form route",
        });
    }
    Ok(())
}

#[derive(Debug, Clone)]
enum ResidueIndex {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// Residues `x^i mod m` for `0 <= i < e`, where `e` is the order of `m`,
/// packed as coefficient masks, plus the inverse map residue -> `i`.
///
/// Because `e` is the order, the residues are pairwise distinct and every
/// residue has at most one index.
#[derive(Debug, Clone)]
pub struct ResidueTable {
    modulus: Gf2Poly,
    exponent: u64,
    residues: Vec<u64>,
    index: ResidueIndex,
}

impl ResidueTable {
    pub fn new(m: &Gf2Poly, e: u64) -> Result<Self> {
        let (mask, top, d) = modulus_mask(m)?;
        check_len(e)?;
        if !is_order(m, e)? {
            return Err(Error::ExponentMismatch {
                poly: m.to_string(),
                given: e,
                actual: order(m)?,
            });
        }
        let mut residues = Vec::with_capacity(e as usize);
        let mut r = 1u64;
        for _ in 0..e {
            residues.push(r);
            r = times_x(r, mask, top);
        }
        debug_assert_eq!(r, 1);
        let index = if d <= DENSE_INDEX_DEGREE {
            let mut dense = vec![u32::MAX; 1 << d];
            for (i, &r) in residues.iter().enumerate() {
                dense[r as usize] = i as u32;
            }
            ResidueIndex::Dense(dense)
        } else {
            ResidueIndex::Sparse(residues.iter().enumerate().map(|(i, &r)| (r, i as u32)).collect())
        };
        Ok(ResidueTable {
            modulus: m.clone(),
            exponent: e,
            residues,
            index,
        })
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn residues(&self) -> &[u64] {
        &self.residues
    }

    #[inline]
    pub fn residue(&self, i: usize) -> u64 {
        self.residues[i]
    }

    /// The unique `i < e` with `x^i = r`, if any.
    #[inline]
    pub fn index_of(&self, r: u64) -> Option<usize> {
        match &self.index {
            ResidueIndex::Dense(v) => match v.get(r as usize) {
                Some(&i) if i != u32::MAX => Some(i as usize),
                _ => None,
            },
            ResidueIndex::Sparse(h) => h.get(&r).map(|&i| i as usize),
        }
    }
}

/// Discrete logarithms and Zech logarithms for the field defined by a
/// primitive polynomial.
///
/// With `a` a root of the modulus, `zech(i)` is the exponent with
/// `a^zech(i) = a^i + 1`, defined for `1 <= i < e`.
#[derive(Debug, Clone)]
pub struct ZechTable {
    modulus: Gf2Poly,
    exponent: u64,
    antilog: Vec<u32>,
    dlog: Vec<u32>,
    zech: Vec<u32>,
}

impl ZechTable {
    pub fn new(f: &Gf2Poly) -> Result<Self> {
        if !is_primitive(f) {
            return Err(Error::NotPrimitive(f.to_string()));
        }
        ZechTable::from_factor(&FactorSpec::new(f.clone())?)
    }

    pub fn from_factor(f: &FactorSpec) -> Result<Self> {
        check_len(f.exponent)?;
        let (mask, top, d) = modulus_mask(&f.poly)?;
        let e = f.exponent as usize;
        let mut antilog = Vec::with_capacity(e);
        let mut dlog = vec![u32::MAX; 1 << d];
        let mut r = 1u64;
        for i in 0..e {
            antilog.push(r as u32);
            dlog[r as usize] = i as u32;
            r = times_x(r, mask, top);
        }
        let mut zech = vec![u32::MAX; e];
        for i in 1..e {
            zech[i] = dlog[(antilog[i] ^ 1) as usize];
        }
        Ok(ZechTable {
            modulus: f.poly.clone(),
            exponent: f.exponent,
            antilog,
            dlog,
            zech,
        })
    }

    pub fn modulus(&self) -> &Gf2Poly {
        &self.modulus
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// `x^i mod f` as a coefficient mask.
    pub fn antilog(&self, i: usize) -> u32 {
        self.antilog[i % self.antilog.len()]
    }

    /// Discrete log of a nonzero residue.
    pub fn dlog(&self, r: u32) -> Option<u32> {
        match self.dlog.get(r as usize) {
            Some(&i) if i != u32::MAX => Some(i),
            _ => None,
        }
    }

    /// Zech logarithm; `None` for `i = 0` (where `a^0 + 1 = 0`) or out of range.
    pub fn zech(&self, i: usize) -> Option<u32> {
        match self.zech.get(i) {
            Some(&z) if z != u32::MAX => Some(z),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::primitive_polynomials;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    #[test]
    fn zech_small_fields() {
        let z = ZechTable::new(&p("x^2+x+1")).unwrap();
        assert_eq!(z.zech(1), Some(2));
        assert_eq!(z.zech(2), Some(1));
        assert_eq!(z.zech(0), None);
        let z = ZechTable::new(&p("x^3+x+1")).unwrap();
        assert_eq!(z.zech(1), Some(3));
        assert!(matches!(
            ZechTable::new(&p("x^4+x^3+x^2+x+1")),
            Err(Error::NotPrimitive(_))
        ));
    }

    #[test]
    fn zech_is_a_fixed_point_free_involution() {
        for d in 2..=10 {
            for f in primitive_polynomials(d) {
                let z = ZechTable::new(&f).unwrap();
                let e = z.exponent() as usize;
                let res = ResidueTable::new(&f, e as u64).unwrap();
                for i in 1..e {
                    let zi = z.zech(i).unwrap() as usize;
                    assert_ne!(zi, i);
                    assert_eq!(z.zech(zi), Some(i as u32));
                    assert_eq!(res.residue(zi), res.residue(i) ^ 1);
                }
                for i in 0..e {
                    assert_eq!(z.dlog(z.antilog(i)), Some(i as u32));
                }
            }
        }
    }

    #[test]
    fn residue_tables() {
        let t = ResidueTable::new(&p("x^2+x+1"), 3).unwrap();
        assert_eq!(t.residues(), &[1, 2, 3]);
        assert_eq!(t.index_of(3), Some(2));
        assert_eq!(t.index_of(0), None);

        let m = &p("x^2+x+1") * &p("x^3+x+1");
        let t = ResidueTable::new(&m, 21).unwrap();
        assert_eq!(t.residues().len(), 21);
        assert_eq!(t.residue(0), 1);
        // direct reduction of x^i for every i
        for i in 0..21 {
            let direct = Gf2Poly::monomial(i).rem(&m).unwrap();
            assert_eq!(direct.to_mask().unwrap(), t.residue(i));
            assert!(t.residue(i) != 0 && t.residue(i) < 32);
        }
        assert!(matches!(
            ResidueTable::new(&m, 7),
            Err(Error::ExponentMismatch { actual: 21, .. })
        ));
        assert!(ResidueTable::new(&p("x^3+x"), 3).is_err());
    }

    #[test]
    fn sparse_index_for_wide_moduli() {
        // degree 23, order 2^23 - 1 is too long; use a product of small factors
        let m = &(&p("x^9+x^4+1") * &p("x^7+x+1")) * &p("x^7+x^3+1");
        let e = order(&m).unwrap();
        assert_eq!(m.degree(), Some(23));
        let t = ResidueTable::new(&m, e).unwrap();
        for i in [0usize, 1, 17, 1000, e as usize - 1] {
            assert_eq!(t.index_of(t.residue(i)), Some(i));
        }
    }
}
