//! Least-degree multiples, degree estimates, and the residue collision check
//! on least multiples of products.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::gf2::{times_x, FactorSpec, Gf2Poly};
use crate::product::{big, count_product_recursive, ProductSpec};
use crate::single::{count_tnomials, Tnomial};
use crate::{Error, Result};

/// Default ceiling on the degree explored by the least-degree search.
pub const DEFAULT_DEGREE_CAP: u64 = 1 << 20;

/// All weight-`t` multiples of `poly` of the least possible degree, in
/// ascending order of their descending exponent lists.
///
/// Degrees are scanned upward from `max(deg poly, t - 1)`; at degree `j`
/// every choice of `t - 3` middle exponents below `j` is tried and the last
/// exponent is looked up from the residues `x^i mod poly`, `1 <= i < j`.
/// The scan stops at `min(order - 1, cap)`.
pub fn least_multiples(poly: &Gf2Poly, order: u64, t: usize, cap: u64) -> Result<Vec<Tnomial>> {
    if t < 3 {
        return Err(Error::UnsupportedWeight(t, "at least 3"));
    }
    let d = match poly.degree() {
        Some(d) if d >= 1 && poly.constant_term() => d,
        _ => return Err(Error::OrderUndefined(poly.to_string())),
    };
    if d > 63 {
        return Err(Error::DegreeUnsupported(d, 63));
    }
    let mask = poly.to_mask().expect("degree below 64");
    let top = 1u64 << d;
    let limit = order.saturating_sub(1).min(cap);

    // residues[i] = x^i mod poly; index maps residues of exponents 1..j-1
    let mut residues: Vec<u64> = vec![1];
    let mut index: HashMap<u64, u32> = HashMap::new();
    let start = (d as u64).max(t as u64 - 1);
    let mut j = 1u64;
    while j <= limit {
        let r = times_x(*residues.last().expect("nonempty"), mask, top);
        if j >= start {
            let found = multiples_at_degree(&residues, &index, r, j as u32, t);
            if !found.is_empty() {
                return Ok(found);
            }
        }
        index.insert(r, j as u32);
        residues.push(r);
        j += 1;
    }
    Err(Error::NoMultiple { t, limit })
}

fn multiples_at_degree(
    residues: &[u64],
    index: &HashMap<u64, u32>,
    rj: u64,
    j: u32,
    t: usize,
) -> Vec<Tnomial> {
    struct Scan<'a> {
        residues: &'a [u64],
        index: &'a HashMap<u64, u32>,
        j: u32,
        chosen: Vec<u32>,
        out: Vec<Tnomial>,
    }

    impl Scan<'_> {
        fn rec(&mut self, left: usize, lo: u32, acc: u64) {
            if left == 0 {
                if let Some(&last) = self.index.get(&acc) {
                    if last >= lo && last < self.j {
                        let mut asc = self.chosen.clone();
                        asc.push(last);
                        asc.push(self.j);
                        self.out.push(Tnomial::from_ascending(&asc));
                    }
                }
                return;
            }
            for a in lo..self.j {
                self.chosen.push(a);
                self.rec(left - 1, a + 1, acc ^ self.residues[a as usize]);
                self.chosen.pop();
            }
        }
    }

    let mut scan = Scan { residues, index, j, chosen: Vec::new(), out: Vec::new() };
    scan.rec(t - 3, 1, rj ^ 1);
    scan.out.sort_unstable();
    scan.out
}

/// The weight-`t` multiple of the product with least degree; ties go to the
/// lexicographically smallest descending exponent list.
pub fn least_tnomial_multiple(spec: &ProductSpec, t: usize, cap: u64) -> Result<Tnomial> {
    let all = least_multiples(&spec.product_poly, spec.product_exponent, t, cap)?;
    Ok(all.into_iter().next().expect("nonempty on success"))
}

/// Binomial coefficient with exact big integers.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    #[serde(with = "big")]
    pub exact_n: BigUint,
    pub product_exponent: u64,
    pub total_degree: usize,
    pub weight: usize,
    /// `2^(d/(t-1))`, the estimate from the lower bound.
    pub crude_c: f64,
    /// Least `c` with `C(c, t-1) * N >= C(e-1, t-1)`.
    pub refined_c: u64,
    pub observed_least_degree: Option<u64>,
}

/// Degree at which about one multiple is expected, if the `N` multiples were
/// spread uniformly over the `C(e-1, t-1)` exponent tuples.
pub fn estimate_least_degree(n: &BigUint, e: u64, d: usize, t: usize) -> Result<EstimateReport> {
    if n.is_zero() {
        return Err(Error::NoMultiples);
    }
    if t < 3 {
        return Err(Error::UnsupportedWeight(t, "at least 3"));
    }
    if e <= d as u64 {
        return Err(Error::Invalid(format!("order {e} must exceed degree {d}")));
    }
    let k = t as u64 - 1;
    let total = binomial(e - 1, k);
    let enough = |c: u64| binomial(c, k) * n >= total;
    // smallest c in [k, e-1] with enough(c); enough(e-1) holds since n >= 1
    let (mut lo, mut hi) = (k, e - 1);
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if enough(mid) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(EstimateReport {
        exact_n: n.clone(),
        product_exponent: e,
        total_degree: d,
        weight: t,
        crude_c: 2f64.powf(d as f64 / (t as f64 - 1.0)),
        refined_c: lo,
        observed_least_degree: None,
    })
}

/// Estimate for a product, with the exact count from the pair formulas and,
/// when `search_cap` is given, the observed least degree.
pub fn estimate_for_product(spec: &ProductSpec, t: usize, search_cap: Option<u64>) -> Result<EstimateReport> {
    let count = count_product_recursive(spec, t)?;
    let mut report = estimate_least_degree(
        &count.exact_count,
        spec.product_exponent,
        spec.total_degree(),
        t,
    )?;
    if let Some(cap) = search_cap {
        report.observed_least_degree = Some(least_tnomial_multiple(spec, t, cap)?.degree());
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    ConjectureHolds,
    Counterexample,
    NotApplicable,
}

/// Exponents `I_v`, `I_w` (1-based, highest first) congruent modulo the
/// order of factor `factor` (1-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub factor: usize,
    pub v: usize,
    pub w: usize,
    pub modulus: u64,
    pub residue: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `4 <= t < tau`.
    pub weight_in_range: bool,
    /// `N_{r,t}` for each factor.
    pub factor_counts: Vec<u64>,
    pub counts_positive: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjectureReport {
    pub factors: Vec<FactorSpec>,
    pub weight: usize,
    /// Weight of the product polynomial itself.
    pub product_weight: usize,
    pub least_multiple: Tnomial,
    /// Per factor, `I_v mod e_r` for `v = 1..t-1`.
    pub residue_matrix: Vec<Vec<u64>>,
    pub collisions: Vec<Collision>,
    /// `(factor, v)` pairs with `I_v = 0 mod e_r`; reported, not counted as
    /// collisions.
    pub zero_residues: Vec<(usize, usize)>,
    pub hypotheses: Hypotheses,
    pub verdict: Verdict,
}

/// Finds the least weight-`t` multiple of the product and reports every pair
/// of its exponents that agree modulo some factor's order.
pub fn check_conjecture(spec: &ProductSpec, t: usize, cap: u64) -> Result<ConjectureReport> {
    let product_weight = spec.product_poly.weight();
    let factor_counts = if (3..=5).contains(&t) {
        spec.factors
            .iter()
            .map(|f| count_tnomials(&f.ordered(), t))
            .collect::<Result<Vec<_>>>()?
    } else {
        return Err(Error::UnsupportedWeight(t, "3, 4 or 5"));
    };
    let hypotheses = Hypotheses {
        weight_in_range: 4 <= t && t < product_weight,
        counts_positive: factor_counts.iter().all(|&n| n > 0),
        factor_counts,
    };
    let least = least_tnomial_multiple(spec, t, cap)?;
    let mut residue_matrix = Vec::new();
    let mut collisions = Vec::new();
    let mut zero_residues = Vec::new();
    for (r, f) in spec.factors.iter().enumerate() {
        let row: Vec<u64> = least.exponents().iter().map(|i| i % f.exponent).collect();
        for v in 0..row.len() {
            if row[v] == 0 {
                zero_residues.push((r + 1, v + 1));
            }
            for w in v + 1..row.len() {
                if row[v] == row[w] {
                    collisions.push(Collision {
                        factor: r + 1,
                        v: v + 1,
                        w: w + 1,
                        modulus: f.exponent,
                        residue: row[v],
                    });
                }
            }
        }
        residue_matrix.push(row);
    }
    let verdict = if !(hypotheses.weight_in_range && hypotheses.counts_positive) {
        Verdict::NotApplicable
    } else if collisions.is_empty() {
        Verdict::ConjectureHolds
    } else {
        Verdict::Counterexample
    };
    Ok(ConjectureReport {
        factors: spec.factors.clone(),
        weight: t,
        product_weight,
        least_multiple: least,
        residue_matrix,
        collisions,
        zero_residues,
        hypotheses,
        verdict,
    })
}
