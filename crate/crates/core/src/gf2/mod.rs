//! Arithmetic in GF(2)[x] and the lookup tables built on top of it.

mod order;
mod poly;
mod tables;

pub use order::{
    factor_u64, first_primitive, is_irreducible, is_order, is_primitive, order,
    primitive_polynomials, product_order, MAX_IRREDUCIBLE_DEGREE,
};
pub use poly::Gf2Poly;
pub use tables::{ResidueTable, ZechTable, MAX_TABLE_LEN};
pub(crate) use tables::times_x;

use serde::Serialize;

use crate::{Error, Result};

/// A polynomial paired with its order `e` (least `e` with `poly | x^e + 1`).
///
/// This is the only thing the counting machinery needs to know about a
/// factor or a running product of factors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrderedPoly {
    pub poly: Gf2Poly,
    pub order: u64,
}

impl OrderedPoly {
    pub fn new(poly: Gf2Poly) -> Result<Self> {
        let order = order(&poly)?;
        Ok(OrderedPoly { poly, order })
    }

    /// Pairs `poly` with a claimed order, checking the claim.
    pub fn with_order(poly: Gf2Poly, e: u64) -> Result<Self> {
        if poly.degree().unwrap_or(0) == 0 || !poly.constant_term() {
            return Err(Error::OrderUndefined(poly.to_string()));
        }
        if !is_order(&poly, e)? {
            let actual = order(&poly)?;
            return Err(Error::ExponentMismatch {
                poly: poly.to_string(),
                given: e,
                actual,
            });
        }
        Ok(OrderedPoly { poly, order: e })
    }

    pub fn degree(&self) -> usize {
        self.poly.degree().expect("nonzero")
    }
}

/// A primitive factor of degree `d` and exponent `2^d - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorSpec {
    pub poly: Gf2Poly,
    pub degree: usize,
    pub exponent: u64,
}

impl FactorSpec {
    pub fn new(poly: Gf2Poly) -> Result<Self> {
        if !is_primitive(&poly) {
            return Err(Error::NotPrimitive(poly.to_string()));
        }
        let degree = poly.degree().expect("primitive is nonzero");
        Ok(FactorSpec {
            poly,
            degree,
            exponent: (1u64 << degree) - 1,
        })
    }

    /// The lexicographically first primitive polynomial of degree `d`.
    pub fn first_of_degree(d: usize) -> Result<Self> {
        FactorSpec::new(first_primitive(d)?)
    }

    pub fn ordered(&self) -> OrderedPoly {
        OrderedPoly {
            poly: self.poly.clone(),
            order: self.exponent,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_spec_requires_primitive() {
        let f = FactorSpec::new("x^4+x+1".parse().unwrap()).unwrap();
        assert_eq!((f.degree, f.exponent), (4, 15));
        assert_eq!(
            FactorSpec::new("x^4+x^3+x^2+x+1".parse().unwrap()),
            Err(Error::NotPrimitive("x^4+x^3+x^2+x+1".into()))
        );
    }

    #[test]
    fn ordered_poly_checks_claimed_order() {
        let p: Gf2Poly = "x^5+x^4+1".parse().unwrap();
        assert_eq!(OrderedPoly::new(p.clone()).unwrap().order, 21);
        assert!(OrderedPoly::with_order(p.clone(), 21).is_ok());
        assert!(matches!(
            OrderedPoly::with_order(p, 42),
            Err(Error::ExponentMismatch { actual: 21, .. })
        ));
    }
}
