//! Exact counts of t-nomial multiples of products of primitive polynomials.
//!
//! For two factors with coprime orders `e1`, `e2` there are closed forms for
//! weights 3, 4 and 5 in terms of per-factor counts. A product of `k` factors
//! is handled by folding: the running prefix `f_1...f_r` is itself a
//! polynomial with order `e1...er` coprime to the next factor, so the pair
//! formulas apply again with the prefix's own counts.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::gf2::{FactorSpec, Gf2Poly, OrderedPoly, ResidueTable};
use crate::single::{check_weight, count_tnomials, count_with_table, shift_set_size};
use crate::{Error, Result};

/// Default bound on the product order for the residue-matching oracle.
pub const DEFAULT_ORACLE_CAP: u64 = 1024;

/// Header of the CSV form of a count, including the oracle columns the
/// command line appends.
pub const CSV_HEADER: &str = "degrees;t;exact;lower_bound;route;oracle;agree";

/// Serializes big counts as JSON numbers while they fit in 128 bits.
pub mod big {
    use num_bigint::BigUint;
    use num_traits::ToPrimitive;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(n: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        match n.to_u128() {
            Some(v) if v <= u64::MAX as u128 => s.serialize_u64(v as u64),
            Some(v) => s.serialize_u128(v),
            None => s.collect_str(n),
        }
    }
}

/// A product of primitive polynomials with pairwise coprime orders.
#[derive(Debug, Clone, Serialize)]
pub struct ProductSpec {
    pub factors: Vec<FactorSpec>,
    pub product_poly: Gf2Poly,
    pub product_exponent: u64,
}

impl ProductSpec {
    pub fn new(factors: Vec<FactorSpec>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Invalid("a product needs at least one factor".into()));
        }
        for (i, a) in factors.iter().enumerate() {
            for b in &factors[i + 1..] {
                if a.exponent.gcd(&b.exponent) != 1 {
                    return Err(Error::ExponentsNotCoprime(a.exponent, b.exponent));
                }
                if !a.poly.gcd(&b.poly).is_one() {
                    return Err(Error::NotCoprime(a.poly.to_string(), b.poly.to_string()));
                }
            }
        }
        let mut product_poly = Gf2Poly::one();
        let mut product_exponent = 1u64;
        for f in &factors {
            product_poly = &product_poly * &f.poly;
            product_exponent = product_exponent
                .checked_mul(f.exponent)
                .ok_or_else(|| Error::Invalid("product order overflows 64 bits".into()))?;
        }
        Ok(ProductSpec {
            factors,
            product_poly,
            product_exponent,
        })
    }

    pub fn from_polys(polys: Vec<Gf2Poly>) -> Result<Self> {
        ProductSpec::new(polys.into_iter().map(FactorSpec::new).collect::<Result<_>>()?)
    }

    /// One lexicographically first primitive polynomial per degree.
    pub fn from_degrees(degrees: &[usize]) -> Result<Self> {
        ProductSpec::new(
            degrees
                .iter()
                .map(|&d| FactorSpec::first_of_degree(d))
                .collect::<Result<_>>()?,
        )
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree).collect()
    }

    pub fn total_degree(&self) -> usize {
        self.factors.iter().map(|f| f.degree).sum()
    }

    pub fn ordered(&self) -> OrderedPoly {
        OrderedPoly {
            poly: self.product_poly.clone(),
            order: self.product_exponent,
        }
    }

    /// The same factors in a different order.
    pub fn reordered(&self, order: &[usize]) -> Result<Self> {
        ProductSpec::new(order.iter().map(|&i| self.factors[i].clone()).collect())
    }
}

fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

/// `((t-1)!)^(k-1) * prod N_{r,t}` for `k = counts.len()` factors.
pub fn lower_bound_t(counts: &[BigUint], t: usize) -> Result<BigUint> {
    if counts.is_empty() || t < 2 {
        return Err(Error::Invalid("lower bound needs k >= 1 and t >= 2".into()));
    }
    let perms = factorial(t - 1).pow(counts.len() as u32 - 1);
    Ok(counts.iter().fold(perms, |acc, n| acc * n))
}

/// Exact trinomial count of a product: `2^(k-1) * prod N_{r,3}`.
pub fn count3_product(counts3: &[BigUint]) -> Result<BigUint> {
    lower_bound_t(counts3, 3)
}

fn check_coprime(e1: &BigUint, e2: &BigUint) -> Result<()> {
    if !e1.gcd(e2).is_one() {
        let as_u64 = |e: &BigUint| e.to_u64_digits().first().copied().unwrap_or(0);
        return Err(Error::ExponentsNotCoprime(as_u64(e1), as_u64(e2)));
    }
    Ok(())
}

fn to_unsigned(v: BigInt) -> Result<BigUint> {
    v.to_biguint()
        .ok_or_else(|| Error::Invalid("closed form evaluated to a negative count".into()))
}

/// Exact 4-nomial count of `f1 * f2` from the orders and 4-nomial counts of
/// the two factors.
pub fn count4_pair(e1: &BigUint, e2: &BigUint, n14: &BigUint, n24: &BigUint) -> Result<BigUint> {
    check_coprime(e1, e2)?;
    let (e1, e2) = (BigInt::from(e1.clone()), BigInt::from(e2.clone()));
    let (n1, n2) = (BigInt::from(n14.clone()), BigInt::from(n24.clone()));
    let one = BigInt::one();
    let v = 6 * &n1 * &n2
        + (&e1 - &one) * (&e2 - &one)
        + (3 * (&e1 - &one) + &one) * &n2
        + (3 * (&e2 - &one) + &one) * &n1;
    to_unsigned(v)
}

/// What the 5-nomial pair formula needs to know about one side.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiveInputs {
    #[serde(with = "big")]
    pub exponent: BigUint,
    #[serde(with = "big")]
    pub n3: BigUint,
    #[serde(with = "big")]
    pub n5: BigUint,
    /// Size of the shifted-trinomial set, `(e/3 - 1) * n3`.
    #[serde(with = "big")]
    pub shifts: BigUint,
}

impl FiveInputs {
    pub fn new(e: u64, n3: u64, n5: u64, shifts: u64) -> Self {
        FiveInputs {
            exponent: e.into(),
            n3: n3.into(),
            n5: n5.into(),
            shifts: shifts.into(),
        }
    }
}

/// The nine contributions to the 5-nomial count of a two-factor product,
/// named by the shapes of the two residue patterns (left factor first):
/// a 5-nomial, a trinomial padded with a repeated exponent, or a shifted
/// trinomial padded with the constant term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FiveTerm {
    FiveFive,
    TrinomialFive,
    FiveTrinomial,
    ShiftFive,
    FiveShift,
    ShiftShift,
    ShiftTrinomial,
    TrinomialShift,
    TrinomialTrinomial,
}

impl FiveTerm {
    pub const ALL: [FiveTerm; 9] = [
        FiveTerm::FiveFive,
        FiveTerm::TrinomialFive,
        FiveTerm::FiveTrinomial,
        FiveTerm::ShiftFive,
        FiveTerm::FiveShift,
        FiveTerm::ShiftShift,
        FiveTerm::ShiftTrinomial,
        FiveTerm::TrinomialShift,
        FiveTerm::TrinomialTrinomial,
    ];

    pub fn label(self) -> &'static str {
        match self {
            FiveTerm::FiveFive => "five x five",
            FiveTerm::TrinomialFive => "padded trinomial x five",
            FiveTerm::FiveTrinomial => "five x padded trinomial",
            FiveTerm::ShiftFive => "shift x five",
            FiveTerm::FiveShift => "five x shift",
            FiveTerm::ShiftShift => "shift x shift",
            FiveTerm::ShiftTrinomial => "shift x padded trinomial",
            FiveTerm::TrinomialShift => "padded trinomial x shift",
            FiveTerm::TrinomialTrinomial => "padded trinomial x padded trinomial",
        }
    }
}

/// Each of the nine closed-form terms of the 5-nomial pair count.
pub fn count5_terms(a: &FiveInputs, b: &FiveInputs) -> Result<Vec<(FiveTerm, BigUint)>> {
    check_coprime(&a.exponent, &b.exponent)?;
    let i = |x: &BigUint| BigInt::from(x.clone());
    let (e1, e2) = (i(&a.exponent), i(&b.exponent));
    let (n13, n23) = (i(&a.n3), i(&b.n3));
    let (n15, n25) = (i(&a.n5), i(&b.n5));
    let (s1, s2) = (i(&a.shifts), i(&b.shifts));
    let terms = [
        (FiveTerm::FiveFive, 24 * &n15 * &n25),
        (FiveTerm::TrinomialFive, &n13 * &n25 * (12 * (&e1 - 2) + 8)),
        (FiveTerm::FiveTrinomial, &n23 * &n15 * (12 * (&e2 - 2) + 8)),
        (FiveTerm::ShiftFive, 24 * &s1 * &n25),
        (FiveTerm::FiveShift, 24 * &s2 * &n15),
        (FiveTerm::ShiftShift, 18 * &s1 * &s2),
        (FiveTerm::ShiftTrinomial, &s1 * &n23 * (12 * (&e2 - 3) + 14)),
        (FiveTerm::TrinomialShift, &s2 * &n13 * (12 * (&e1 - 3) + 14)),
        (
            FiveTerm::TrinomialTrinomial,
            &n13 * &n23 * (5 * (&e1 - 3) * (&e2 - 3) + 7 * (&e1 - 3) + 7 * (&e2 - 3) + 5),
        ),
    ];
    terms
        .into_iter()
        .map(|(term, v)| Ok((term, to_unsigned(v)?)))
        .collect()
}

/// Exact 5-nomial count of `f1 * f2`: the sum of [`count5_terms`].
pub fn count5_pair(a: &FiveInputs, b: &FiveInputs) -> Result<BigUint> {
    Ok(count5_terms(a, b)?.into_iter().map(|(_, v)| v).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    ClosedFormPair,
    Recursion,
    Oracle,
}

impl Route {
    pub fn as_str(self) -> &'static str {
        match self {
            Route::ClosedFormPair => "closed_form_pair",
            Route::Recursion => "recursion",
            Route::Oracle => "oracle",
        }
    }
}

/// Counts attached to one factor or one prefix `f_1...f_r` of the product.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    pub degrees: Vec<usize>,
    #[serde(with = "big")]
    pub exponent: BigUint,
    #[serde(with = "big")]
    pub n3: BigUint,
    /// Count at the requested weight.
    #[serde(with = "big")]
    pub nt: BigUint,
    /// Size of the shifted-trinomial set.
    #[serde(with = "big")]
    pub shifts: BigUint,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountReport {
    pub factors: Vec<FactorSpec>,
    pub weight: usize,
    #[serde(with = "big")]
    pub exact_count: BigUint,
    #[serde(with = "big")]
    pub lower_bound: BigUint,
    pub route: Route,
    /// Per-factor counts, in factor order.
    pub factor_counts: Vec<StageCounts>,
    /// Counts of each prefix `f_1...f_r`, `r = 1..k`.
    pub intermediates: Vec<StageCounts>,
}

impl CountReport {
    pub fn degrees(&self) -> Vec<usize> {
        self.factors.iter().map(|f| f.degree).collect()
    }

    /// `degrees;t;exact;lower_bound;route`.
    pub fn csv_row(&self) -> String {
        let degrees = self
            .degrees()
            .iter()
            .map(usize::to_string)
            .collect::<Vec<_>>()
            .join(",");
        format!(
            "{degrees};{};{};{};{}",
            self.weight,
            self.exact_count,
            self.lower_bound,
            self.route.as_str()
        )
    }
}

fn single_counts(f: &FactorSpec, t: usize) -> Result<StageCounts> {
    let p = f.ordered();
    let n3 = count_tnomials(&p, 3)?;
    let nt = if t == 3 { n3 } else { count_tnomials(&p, t)? };
    Ok(StageCounts {
        degrees: vec![f.degree],
        exponent: f.exponent.into(),
        n3: n3.into(),
        nt: nt.into(),
        shifts: shift_set_size(f.exponent, n3)?.into(),
    })
}

fn shifts_of(e: &BigUint, n3: &BigUint) -> Result<BigUint> {
    let num = (e - 3u32) * n3;
    if !(&num % 3u32).is_zero() {
        return Err(Error::Invalid("(e/3 - 1) * N3 is not integral".into()));
    }
    Ok(num / 3u32)
}

/// Combines prefix counts with the next factor's counts.
fn fold_step(prefix: &StageCounts, next: &StageCounts, t: usize) -> Result<StageCounts> {
    let exponent = &prefix.exponent * &next.exponent;
    let n3 = count3_product(&[prefix.n3.clone(), next.n3.clone()])?;
    let nt = match t {
        3 => n3.clone(),
        4 => count4_pair(&prefix.exponent, &next.exponent, &prefix.nt, &next.nt)?,
        5 => {
            let side = |s: &StageCounts| FiveInputs {
                exponent: s.exponent.clone(),
                n3: s.n3.clone(),
                n5: s.nt.clone(),
                shifts: s.shifts.clone(),
            };
            count5_pair(&side(prefix), &side(next))?
        }
        _ => unreachable!("weight checked"),
    };
    let shifts = shifts_of(&exponent, &n3)?;
    let mut degrees = prefix.degrees.clone();
    degrees.extend(&next.degrees);
    Ok(StageCounts {
        degrees,
        exponent,
        n3,
        nt,
        shifts,
    })
}

/// Exact count of weight-`t` multiples of the product, folding the factors
/// left to right with the pair formulas. Per-factor counts come from direct
/// enumeration.
pub fn count_product_recursive(spec: &ProductSpec, t: usize) -> Result<CountReport> {
    check_weight(t)?;
    let factor_counts = spec
        .factors
        .iter()
        .map(|f| single_counts(f, t))
        .collect::<Result<Vec<_>>>()?;
    let mut intermediates = vec![factor_counts[0].clone()];
    for next in &factor_counts[1..] {
        let step = fold_step(intermediates.last().expect("nonempty"), next, t)?;
        intermediates.push(step);
    }
    let exact_count = intermediates.last().expect("nonempty").nt.clone();
    let per_factor: Vec<BigUint> = factor_counts.iter().map(|c| c.nt.clone()).collect();
    let lower_bound = lower_bound_t(&per_factor, t)?;
    debug_assert!(lower_bound <= exact_count);
    let route = match spec.factors.len() {
        1 => Route::Oracle,
        2 => Route::ClosedFormPair,
        _ => Route::Recursion,
    };
    Ok(CountReport {
        factors: spec.factors.clone(),
        weight: t,
        exact_count,
        lower_bound,
        route,
        factor_counts,
        intermediates,
    })
}

/// Direct count of weight-`t` multiples of the product polynomial by residue
/// matching, independent of every closed form. Refuses products whose order
/// exceeds `cap`.
pub fn oracle_count_product(spec: &ProductSpec, t: usize, cap: u64) -> Result<u64> {
    check_weight(t)?;
    if spec.product_exponent > cap {
        return Err(Error::CapExceeded {
            what: "product order",
            value: spec.product_exponent,
            cap,
            hint: "; use the recursion route instead",
        });
    }
    let table = ResidueTable::new(&spec.product_poly, spec.product_exponent)?;
    count_with_table(&table, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(n: u64) -> BigUint {
        n.into()
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(lower_bound_t(&[b(1), b(3)], 3).unwrap(), b(6));
        assert_eq!(lower_bound_t(&[b(0), b(0)], 5).unwrap(), b(0));
        assert_eq!(lower_bound_t(&[b(840)], 5).unwrap(), b(840));
        assert_eq!(lower_bound_t(&[b(2), b(3), b(5)], 4).unwrap(), b(36 * 30));
        assert!(lower_bound_t(&[], 4).is_err());
    }

    #[test]
    fn trinomial_products() {
        assert_eq!(count3_product(&[b(1), b(3)]).unwrap(), b(6));
        assert_eq!(count3_product(&[b(1), b(3), b(15)]).unwrap(), b(180));
        assert_eq!(count3_product(&[b(7)]).unwrap(), b(7));
    }

    #[test]
    fn four_term_pairs() {
        assert_eq!(count4_pair(&b(3), &b(7), &b(0), &b(0)).unwrap(), b(12));
        assert_eq!(
            count4_pair(&b(3), &b(9), &b(0), &b(0)),
            Err(Error::ExponentsNotCoprime(3, 9))
        );
    }

    #[test]
    fn five_term_pairs() {
        let f1 = FiveInputs::new(3, 1, 0, 0);
        let f2 = FiveInputs::new(7, 3, 0, 4);
        assert_eq!(count5_pair(&f1, &f2).unwrap(), b(155));
        let terms = count5_terms(&f1, &f2).unwrap();
        let nonzero: Vec<_> = terms.iter().filter(|(_, v)| !v.is_zero()).collect();
        assert_eq!(
            nonzero,
            vec![
                &(FiveTerm::TrinomialShift, b(56)),
                &(FiveTerm::TrinomialTrinomial, b(99))
            ]
        );

        let f12 = FiveInputs::new(21, 6, 155, 36);
        let f3 = FiveInputs::new(31, 15, 840, 140);
        assert_eq!(count5_pair(&f12, &f3).unwrap(), b(7_117_650));

        let zero = FiveInputs::new(5, 0, 0, 0);
        assert_eq!(count5_pair(&zero, &FiveInputs::new(7, 0, 0, 0)).unwrap(), b(0));
        assert!(count5_pair(&FiveInputs::new(21, 0, 0, 0), &FiveInputs::new(7, 0, 0, 0)).is_err());
    }

    #[test]
    fn product_spec_validation() {
        let s = ProductSpec::from_degrees(&[2, 3, 5]).unwrap();
        assert_eq!(s.product_exponent, 651);
        assert_eq!(s.total_degree(), 10);
        assert_eq!(
            ProductSpec::from_degrees(&[2, 4]).unwrap_err(),
            Error::ExponentsNotCoprime(3, 15)
        );
        assert!(matches!(
            ProductSpec::from_polys(vec!["x^4+x^3+x^2+x+1".parse().unwrap()]),
            Err(Error::NotPrimitive(_))
        ));
        assert_eq!(
            crate::gf2::order(&s.product_poly).unwrap(),
            s.product_exponent
        );
    }

    #[test]
    fn recursion_on_the_worked_example() {
        let s = ProductSpec::from_degrees(&[2, 3, 5]).unwrap();
        let r = count_product_recursive(&s, 5).unwrap();
        assert_eq!(r.exact_count, b(7_117_650));
        assert_eq!(r.lower_bound, b(0));
        assert_eq!(r.route, Route::Recursion);
        let pre = &r.intermediates[1];
        assert_eq!((pre.exponent.clone(), pre.n3.clone(), pre.nt.clone(), pre.shifts.clone()), (b(21), b(6), b(155), b(36)));
        assert_eq!(r.csv_row(), "2,3,5;5;7117650;0;recursion");

        let r3 = count_product_recursive(&ProductSpec::from_degrees(&[2, 3]).unwrap(), 3).unwrap();
        assert_eq!(r3.exact_count, b(6));
        assert_eq!(r3.lower_bound, b(6));
        assert_eq!(r3.route, Route::ClosedFormPair);
    }

    #[test]
    fn oracle_small_products() {
        let s = ProductSpec::from_degrees(&[2, 3]).unwrap();
        assert_eq!(oracle_count_product(&s, 5, DEFAULT_ORACLE_CAP).unwrap(), 155);
        assert_eq!(oracle_count_product(&s, 3, DEFAULT_ORACLE_CAP).unwrap(), 6);
        let r4 = count_product_recursive(&s, 4).unwrap();
        assert_eq!(b(oracle_count_product(&s, 4, DEFAULT_ORACLE_CAP).unwrap()), r4.exact_count);
        assert!(matches!(
            oracle_count_product(&s, 5, 20),
            Err(Error::CapExceeded { value: 21, cap: 20, .. })
        ));
    }

    #[test]
    fn report_json_uses_plain_numbers() {
        let r = count_product_recursive(&ProductSpec::from_degrees(&[2, 3, 5]).unwrap(), 5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&r).unwrap();
        assert_eq!(v["exact_count"], 7_117_650);
        assert_eq!(v["route"], "recursion");
        assert_eq!(v["intermediates"][1]["shifts"], 36);
        assert_eq!(v["factors"][0]["poly"], "x^2+x+1");
    }
}
