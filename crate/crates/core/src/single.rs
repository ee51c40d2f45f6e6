//! t-nomial multiples of a single polynomial.
//!
//! Every multiple considered here has degree below the order `e` of the
//! polynomial; beyond that the multiples repeat with period `e`. The search
//! works on the residue table `x^i mod f`: a set of distinct exponents
//! `0 < i_1 < ... < i_{t-1} < e` gives a multiple exactly when the residues
//! of its terms XOR to the residue of the constant term, which is `1`.

use std::fmt;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::gf2::{is_primitive, FactorSpec, Gf2Poly, OrderedPoly, ResidueTable, ZechTable};
use crate::{Error, Result};

/// Refuse to materialise more multiples than this.
pub const MAX_ENUMERATED: usize = 1 << 25;

/// A polynomial `x^{a_1} + ... + x^{a_{t-1}} + 1` of weight `t`, stored as its
/// nonconstant exponents in strictly decreasing order.
///
/// The derived ordering compares the exponent lists lexicographically, so
/// a lower degree sorts first and ties go to the smaller second exponent.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tnomial {
    exponents: Vec<u64>,
}

impl Tnomial {
    /// Builds a t-nomial from its nonconstant exponents, in any order.
    pub fn new(mut exponents: Vec<u64>) -> Result<Self> {
        exponents.sort_unstable_by(|a, b| b.cmp(a));
        if exponents.is_empty() {
            return Err(Error::Invalid("a t-nomial needs at least one nonconstant term".into()));
        }
        if exponents.last() == Some(&0) {
            return Err(Error::Invalid("exponent 0 duplicates the constant term".into()));
        }
        if exponents.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("repeated exponent in {exponents:?}")));
        }
        Ok(Tnomial { exponents })
    }

    /// From exponents already known to be distinct, nonzero and ascending.
    pub(crate) fn from_ascending(asc: &[u32]) -> Self {
        debug_assert!(asc.windows(2).all(|w| w[0] < w[1]) && asc[0] > 0);
        Tnomial {
            exponents: asc.iter().rev().map(|&i| i as u64).collect(),
        }
    }

    /// Nonconstant exponents, highest first.
    pub fn exponents(&self) -> &[u64] {
        &self.exponents
    }

    pub fn weight(&self) -> usize {
        self.exponents.len() + 1
    }

    pub fn degree(&self) -> u64 {
        self.exponents[0]
    }

    pub fn to_poly(&self) -> Gf2Poly {
        Gf2Poly::from_exponents(
            self.exponents
                .iter()
                .map(|&e| e as usize)
                .chain(std::iter::once(0)),
        )
    }

    /// Comma-separated exponents, e.g. `19,17,8,4`.
    pub fn to_csv(&self) -> String {
        self.exponents
            .iter()
            .map(u64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    }
}

impl fmt::Display for Tnomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for e in &self.exponents {
            match e {
                1 => f.write_str("x+")?,
                _ => write!(f, "x^{e}+")?,
            }
        }
        f.write_str("1")
    }
}

impl Serialize for Tnomial {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.exponents.serialize(s)
    }
}

pub(crate) fn check_weight(t: usize) -> Result<()> {
    if (3..=5).contains(&t) {
        Ok(())
    } else {
        Err(Error::UnsupportedWeight(t, "3, 4 or 5"))
    }
}

/// Calls `emit` once per multiple of weight `t` (3, 4 or 5) whose exponents
/// all lie in `1..=limit`, passing the exponents in ascending order. Each
/// multiple is produced exactly once: the last exponent is looked up from the
/// others and must exceed them.
pub(crate) fn scan_multiples<F: FnMut(&[u32])>(
    table: &ResidueTable,
    t: usize,
    limit: usize,
    first: std::ops::Range<usize>,
    mut emit: F,
) {
    let r = table.residues();
    let hit = |target: u64, above: usize| -> Option<u32> {
        match table.index_of(target) {
            Some(k) if k > above && k <= limit => Some(k as u32),
            _ => None,
        }
    };
    for i in first {
        match t {
            3 => {
                if let Some(j) = hit(r[i] ^ 1, i) {
                    emit(&[i as u32, j]);
                }
            }
            4 => {
                for j in i + 1..=limit {
                    if let Some(k) = hit(1 ^ r[i] ^ r[j], j) {
                        emit(&[i as u32, j as u32, k]);
                    }
                }
            }
            5 => {
                for j in i + 1..=limit {
                    let rij = 1 ^ r[i] ^ r[j];
                    for (k, &rk) in r.iter().enumerate().take(limit + 1).skip(j + 1) {
                        if let Some(l) = hit(rij ^ rk, k) {
                            emit(&[i as u32, j as u32, k as u32, l]);
                        }
                    }
                }
            }
            _ => unreachable!("weight checked by caller"),
        }
    }
}

/// Number of weight-`t` multiples with degree below the table's exponent.
/// The outer loop is split across threads; partial counts are summed.
pub fn count_with_table(table: &ResidueTable, t: usize) -> Result<u64> {
    check_weight(t)?;
    let limit = table.exponent() as usize - 1;
    Ok((1..=limit)
        .into_par_iter()
        .map(|i| {
            let mut n = 0u64;
            scan_multiples(table, t, limit, i..i + 1, |_| n += 1);
            n
        })
        .sum())
}

/// Sum of the degrees of all weight-`t` multiples with degree below `e`.
pub fn degree_sum_with_table(table: &ResidueTable, t: usize) -> Result<u64> {
    check_weight(t)?;
    let limit = table.exponent() as usize - 1;
    Ok((1..=limit)
        .into_par_iter()
        .map(|i| {
            let mut s = 0u64;
            scan_multiples(table, t, limit, i..i + 1, |asc| {
                s += *asc.last().expect("nonempty") as u64
            });
            s
        })
        .sum())
}

/// All weight-`t` multiples of `p` with exponents in `1..=degree_cap`
/// (default `e - 1`), sorted by their descending exponent lists.
pub fn enumerate_tnomials(p: &OrderedPoly, t: usize, degree_cap: Option<u64>) -> Result<Vec<Tnomial>> {
    check_weight(t)?;
    let e = p.order;
    let limit = match degree_cap {
        Some(c) if c >= e => {
            return Err(Error::Invalid(format!(
                "degree cap {c} must be below the order {e}"
            )))
        }
        Some(c) => c,
        None => e - 1,
    } as usize;
    let table = ResidueTable::new(&p.poly, e)?;
    let mut out = Vec::new();
    let mut overflow = false;
    scan_multiples(&table, t, limit, 1..limit + 1, |asc| {
        if out.len() < MAX_ENUMERATED {
            out.push(Tnomial::from_ascending(asc));
        } else {
            overflow = true;
        }
    });
    if overflow {
        return Err(Error::cap("enumerated multiples", MAX_ENUMERATED as u64 + 1, MAX_ENUMERATED as u64));
    }
    out.sort_unstable();
    Ok(out)
}

/// Number of weight-`t` multiples of `p` with degree below its order.
pub fn count_tnomials(p: &OrderedPoly, t: usize) -> Result<u64> {
    check_weight(t)?;
    if t == 3 {
        return count_trinomials(p);
    }
    count_with_table(&ResidueTable::new(&p.poly, p.order)?, t)
}

/// Number of trinomial multiples `x^a + x^b + 1`, `0 < b < a < e`.
///
/// For a primitive polynomial the trinomials correspond to the unordered
/// pairs `{i, Z(i)}` of the Zech logarithm, giving `(e - 1) / 2`; other
/// polynomials go through residue matching.
pub fn count_trinomials(p: &OrderedPoly) -> Result<u64> {
    if is_primitive(&p.poly) {
        let f = FactorSpec::new(p.poly.clone())?;
        if f.exponent != p.order {
            return Err(Error::ExponentMismatch {
                poly: p.poly.to_string(),
                given: p.order,
                actual: f.exponent,
            });
        }
        let z = ZechTable::from_factor(&f)?;
        let e = f.exponent as usize;
        return Ok((1..e)
            .filter(|&i| z.zech(i).is_some_and(|zi| zi as usize > i))
            .count() as u64);
    }
    count_with_table(&ResidueTable::new(&p.poly, p.order)?, 3)
}

/// Sum of degrees of all weight-`t` multiples with degree below the order.
pub fn degree_sum(p: &OrderedPoly, t: usize) -> Result<u64> {
    degree_sum_with_table(&ResidueTable::new(&p.poly, p.order)?, t)
}

/// `(e/3 - 1) * n3`, the number of nonzero shifts of trinomial multiples that
/// stay below degree `e`.
pub fn shift_set_size(e: u64, n3: u64) -> Result<u64> {
    let num = (e as u128 - 3) * n3 as u128;
    if e < 3 || !num.is_multiple_of(3) {
        return Err(Error::Invalid(format!(
            "(e/3 - 1) * N3 is not integral for e = {e}, N3 = {n3}"
        )));
    }
    Ok((num / 3) as u64)
}

/// The shifted trinomials `x^l * h(x)` for every trinomial multiple `h` of
/// degree `d` and every shift `1 <= l <= e - 1 - d`.
#[derive(Debug, Clone, Serialize)]
pub struct ShiftSet {
    pub base: OrderedPoly,
    /// `(l + d, l + b, l)` for `h = x^d + x^b + 1`.
    pub elements: Vec<[u64; 3]>,
    pub cardinality: u64,
}

pub fn build_shift_set(p: &OrderedPoly) -> Result<ShiftSet> {
    let e = p.order;
    let trinomials = enumerate_tnomials(p, 3, None)?;
    let mut elements = Vec::new();
    for h in &trinomials {
        let (d, b) = (h.exponents()[0], h.exponents()[1]);
        for shift in 1..e - d {
            elements.push([shift + d, shift + b, shift]);
        }
    }
    elements.sort_unstable();
    let cardinality = elements.len() as u64;
    let closed = shift_set_size(e, trinomials.len() as u64)?;
    if closed != cardinality {
        return Err(Error::Invalid(format!(
            "shift set has {cardinality} elements, closed form gives {closed}"
        )));
    }
    Ok(ShiftSet {
        base: p.clone(),
        elements,
        cardinality,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf2::primitive_polynomials;

    fn op(s: &str) -> OrderedPoly {
        OrderedPoly::new(s.parse().unwrap()).unwrap()
    }

    /// Reference count: test every exponent set with polynomial reduction.
    fn brute_multiples(p: &OrderedPoly, t: usize) -> Vec<Tnomial> {
        fn rec(p: &OrderedPoly, t: usize, start: u64, cur: &mut Vec<u64>, out: &mut Vec<Tnomial>) {
            if cur.len() == t - 1 {
                let tn = Tnomial::new(cur.clone()).unwrap();
                if tn.to_poly().rem(&p.poly).unwrap().is_zero() {
                    out.push(tn);
                }
                return;
            }
            for i in start..p.order {
                cur.push(i);
                rec(p, t, i + 1, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(p, t, 1, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    #[test]
    fn tnomial_basics() {
        let t = Tnomial::new(vec![4, 19, 8, 17]).unwrap();
        assert_eq!(t.exponents(), &[19, 17, 8, 4]);
        assert_eq!(t.to_string(), "x^19+x^17+x^8+x^4+1");
        assert_eq!(t.to_csv(), "19,17,8,4");
        assert_eq!(t.weight(), 5);
        assert_eq!(t.degree(), 19);
        assert_eq!(t.to_poly(), "x^19+x^17+x^8+x^4+1".parse().unwrap());
        assert_eq!(Tnomial::new(vec![2, 1]).unwrap().to_string(), "x^2+x+1");
        assert!(Tnomial::new(vec![3, 3]).is_err());
        assert!(Tnomial::new(vec![3, 0]).is_err());
        assert!(Tnomial::new(vec![]).is_err());
        assert!(Tnomial::new(vec![5, 1]).unwrap() < Tnomial::new(vec![5, 2]).unwrap());
        assert_eq!(serde_json::to_string(&t).unwrap(), "[19,17,8,4]");
    }

    #[test]
    fn trinomial_counts() {
        assert_eq!(count_trinomials(&op("x^2+x+1")).unwrap(), 1);
        assert_eq!(count_trinomials(&op("x^3+x+1")).unwrap(), 3);
        assert_eq!(count_trinomials(&op("x^5+x^2+1")).unwrap(), 15);
        let prod = OrderedPoly::new(&"x^2+x+1".parse::<Gf2Poly>().unwrap() * &"x^3+x+1".parse().unwrap()).unwrap();
        assert_eq!(prod.order, 21);
        assert_eq!(count_trinomials(&prod).unwrap(), 6);
        let bad = OrderedPoly { poly: "x^3+x+1".parse().unwrap(), order: 14 };
        assert!(matches!(count_trinomials(&bad), Err(Error::ExponentMismatch { .. })));
    }

    #[test]
    fn trinomial_count_formula_for_primitive_polynomials() {
        for d in 2..=9 {
            for f in primitive_polynomials(d) {
                let p = OrderedPoly::new(f).unwrap();
                let zech = count_trinomials(&p).unwrap();
                let table = count_with_table(&ResidueTable::new(&p.poly, p.order).unwrap(), 3).unwrap();
                assert_eq!(zech, (1 << (d - 1)) - 1);
                assert_eq!(table, zech);
            }
        }
    }

    #[test]
    fn enumeration_examples() {
        assert!(enumerate_tnomials(&op("x^2+x+1"), 5, None).unwrap().is_empty());
        assert!(enumerate_tnomials(&op("x^2+x+1"), 4, None).unwrap().is_empty());
        let five = enumerate_tnomials(&op("x^5+x^2+1"), 5, None).unwrap();
        assert_eq!(five.len(), 840);
        assert!(five.windows(2).all(|w| w[0] < w[1]));
        assert!(matches!(enumerate_tnomials(&op("x^2+x+1"), 6, None), Err(Error::UnsupportedWeight(6, _))));
        assert!(enumerate_tnomials(&op("x^3+x+1"), 3, Some(7)).is_err());
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let polys = [
            op("x^3+x+1"),
            op("x^4+x+1"),
            op("x^4+x^3+x^2+x+1"),
            op("x^5+x^4+1"),
            op("x^5+x^2+1"),
            op("x^6+x^4+x^3+x+1"),
        ];
        for p in &polys {
            for t in 3..=5 {
                let fast = enumerate_tnomials(p, t, None).unwrap();
                assert_eq!(fast, brute_multiples(p, t), "{} t={t}", p.poly);
                assert_eq!(count_tnomials(p, t).unwrap(), fast.len() as u64);
                for tn in &fast {
                    assert!(tn.to_poly().rem(&p.poly).unwrap().is_zero());
                }
            }
        }
    }

    #[test]
    fn degree_cap_truncates_the_scan() {
        let p = op("x^5+x^2+1");
        let all = enumerate_tnomials(&p, 4, None).unwrap();
        let capped = enumerate_tnomials(&p, 4, Some(12)).unwrap();
        let expected: Vec<_> = all.into_iter().filter(|t| t.degree() <= 12).collect();
        assert_eq!(capped, expected);
        assert!(!capped.is_empty());
    }

    #[test]
    fn degree_sums() {
        // x^3+x+1 has trinomial multiples of degrees 3, 5, 6
        assert_eq!(degree_sum(&op("x^3+x+1"), 3).unwrap(), 14);
        assert_eq!(degree_sum(&op("x^2+x+1"), 5).unwrap(), 0);
        assert_eq!(degree_sum(&op("x^5+x^2+1"), 5).unwrap(), 20832);
    }

    #[test]
    fn shift_sets() {
        assert_eq!(build_shift_set(&op("x^2+x+1")).unwrap().cardinality, 0);
        let s = build_shift_set(&op("x^3+x+1")).unwrap();
        assert_eq!(s.cardinality, 4);
        let prod = OrderedPoly::new("x^5+x^4+1".parse().unwrap()).unwrap();
        assert_eq!(build_shift_set(&prod).unwrap().cardinality, 36);
        assert_eq!(build_shift_set(&op("x^5+x^2+1")).unwrap().cardinality, 140);
        for el in &s.elements {
            let p = Gf2Poly::from_exponents(el.iter().map(|&e| e as usize));
            assert!(!p.constant_term());
            assert!(p.rem(&s.base.poly).unwrap().is_zero());
            assert!(el[0] < 7);
        }
        assert_eq!(shift_set_size(651, 180).unwrap(), 38880);
        assert!(shift_set_size(8, 1).is_err());
    }
}
