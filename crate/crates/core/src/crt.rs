//! Constructive generation of the 5-nomial multiples of a two-factor product
//! by Chinese-remainder lifting.
//!
//! A 5-nomial multiple `x^I1 + ... + x^I4 + 1` of `f1 * f2` reduces modulo
//! each order `e_r` to a multiple of `f_r` whose four exponent residues form
//! one of three shapes:
//!
//! * a 5-nomial multiple of `f_r` (four distinct nonzero residues),
//! * a trinomial multiple `x^a + x^b + 1` padded with a repeated residue
//!   `k` (`x^k + x^k` cancels), with `0 <= k < e_r`,
//! * a shifted trinomial `x^a + x^b + x^c` from the shift set, padded with
//!   residue `0` (which cancels against the constant term).
//!
//! Conversely, pairing the slots of a left pattern with an arrangement of a
//! right pattern and lifting each slot pair with the CRT gives a multiple of
//! the product, provided no two slot pairs coincide and no slot pair is
//! `(0, 0)`. Enumerating every pattern pair and every distinct arrangement,
//! and deduplicating the lifted exponent sets, therefore produces every
//! 5-nomial multiple exactly once per shape pair.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::gf2::{OrderedPoly, ResidueTable};
use crate::product::{big, count5_terms, FiveInputs, FiveTerm};
use crate::single::{build_shift_set, count_with_table, enumerate_tnomials, scan_multiples, Tnomial};
use crate::{Error, Result};

/// Largest product order the case generator accepts; lifted exponent sets
/// are packed four to a 64-bit word.
pub const MAX_CASE_ORDER: u64 = 1 << 16;

/// The unique `I < e1*e2` with `I = r1 mod e1` and `I = r2 mod e2`.
pub fn crt_combine(r1: u64, e1: u64, r2: u64, e2: u64) -> Result<u64> {
    CrtBasis::new(e1, e2)?.combine(r1, r2)
}

/// Precomputed idempotents `u1 = 1 mod e1, 0 mod e2` and
/// `u2 = 0 mod e1, 1 mod e2`, so that `I = r1*u1 + r2*u2 mod e1*e2`.
#[derive(Debug, Clone, Copy)]
pub struct CrtBasis {
    e1: u64,
    e2: u64,
    u1: u128,
    u2: u128,
    modulus: u128,
}

impl CrtBasis {
    pub fn new(e1: u64, e2: u64) -> Result<Self> {
        if e1 == 0 || e2 == 0 {
            return Err(Error::Invalid("moduli must be positive".into()));
        }
        let g = (e1 as i128).extended_gcd(&(e2 as i128));
        if g.gcd != 1 {
            return Err(Error::ExponentsNotCoprime(e1, e2));
        }
        // g.x * e1 + g.y * e2 = 1
        let modulus = e1 as i128 * e2 as i128;
        let u1 = (g.y * e2 as i128).rem_euclid(modulus);
        let u2 = (g.x * e1 as i128).rem_euclid(modulus);
        Ok(CrtBasis {
            e1,
            e2,
            u1: u1 as u128,
            u2: u2 as u128,
            modulus: modulus as u128,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus as u64
    }

    pub fn combine(&self, r1: u64, r2: u64) -> Result<u64> {
        if r1 >= self.e1 || r2 >= self.e2 {
            return Err(Error::Invalid(format!(
                "residues ({r1}, {r2}) out of range for moduli ({}, {})",
                self.e1, self.e2
            )));
        }
        Ok(self.combine_unchecked(r1, r2))
    }

    #[inline]
    fn combine_unchecked(&self, r1: u64, r2: u64) -> u64 {
        ((r1 as u128 * self.u1 + r2 as u128 * self.u2) % self.modulus) as u64
    }
}

/// One slot-by-slot pairing of residues of `p1` (mod `e1`) with residues of
/// `p2` (mod `e2`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LiftPlan {
    pub moduli: (u64, u64),
    pub left: Vec<u64>,
    pub right: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rejection {
    /// Slots `0`-based `(l, m)` lift to the same exponent.
    Collision(usize, usize),
    /// Slot lifts to exponent 0, which would cancel the constant term.
    ZeroExponent(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Lift {
    Accepted(Tnomial),
    Rejected(Rejection),
}

/// Lifts every slot pair of `plan` with the CRT. The result is a t-nomial
/// when the lifted exponents are distinct and nonzero.
pub fn lift_pair(plan: &LiftPlan) -> Result<Lift> {
    if plan.left.len() != plan.right.len() || plan.left.is_empty() {
        return Err(Error::Invalid("slot counts differ".into()));
    }
    let basis = CrtBasis::new(plan.moduli.0, plan.moduli.1)?;
    let lifted = plan
        .left
        .iter()
        .zip(&plan.right)
        .map(|(&a, &b)| basis.combine(a, b))
        .collect::<Result<Vec<_>>>()?;
    if let Some(s) = lifted.iter().position(|&i| i == 0) {
        return Ok(Lift::Rejected(Rejection::ZeroExponent(s)));
    }
    for l in 0..lifted.len() {
        for m in l + 1..lifted.len() {
            if lifted[l] == lifted[m] {
                return Ok(Lift::Rejected(Rejection::Collision(l, m)));
            }
        }
    }
    Ok(Lift::Accepted(Tnomial::new(lifted)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Five,
    Trinomial,
    Shift,
}

/// A four-slot residue pattern on one side.
#[derive(Debug, Clone)]
struct Pattern {
    shape: Shape,
    slots: [u32; 4],
}

fn term_for(left: Shape, right: Shape) -> FiveTerm {
    use Shape::*;
    match (left, right) {
        (Five, Five) => FiveTerm::FiveFive,
        (Trinomial, Five) => FiveTerm::TrinomialFive,
        (Five, Trinomial) => FiveTerm::FiveTrinomial,
        (Shift, Five) => FiveTerm::ShiftFive,
        (Five, Shift) => FiveTerm::FiveShift,
        (Shift, Shift) => FiveTerm::ShiftShift,
        (Shift, Trinomial) => FiveTerm::ShiftTrinomial,
        (Trinomial, Shift) => FiveTerm::TrinomialShift,
        (Trinomial, Trinomial) => FiveTerm::TrinomialTrinomial,
    }
}

fn case_label(term: FiveTerm) -> &'static str {
    match term {
        FiveTerm::FiveFive => "case 1",
        FiveTerm::TrinomialFive => "case 2 (left padded)",
        FiveTerm::FiveTrinomial => "case 2 (right padded)",
        FiveTerm::ShiftFive => "case 3 (left shift)",
        FiveTerm::FiveShift => "case 3 (right shift)",
        FiveTerm::ShiftShift => "case 4",
        FiveTerm::ShiftTrinomial => "case 5 (left shift)",
        FiveTerm::TrinomialShift => "case 5 (right shift)",
        FiveTerm::TrinomialTrinomial => "case 6",
    }
}

/// Every pattern of one factor, together with the inputs of the closed form.
struct SideData {
    patterns: Vec<Pattern>,
    inputs: FiveInputs,
}

fn side_data(f: &OrderedPoly) -> Result<SideData> {
    let e = f.order;
    let five = enumerate_tnomials(f, 5, None)?;
    let three = enumerate_tnomials(f, 3, None)?;
    let shifts = build_shift_set(f)?;
    let mut patterns = Vec::new();
    for p in &five {
        let x = p.exponents();
        patterns.push(Pattern {
            shape: Shape::Five,
            slots: [x[0] as u32, x[1] as u32, x[2] as u32, x[3] as u32],
        });
    }
    for p in &three {
        let x = p.exponents();
        for k in 0..e as u32 {
            patterns.push(Pattern {
                shape: Shape::Trinomial,
                slots: [x[0] as u32, x[1] as u32, k, k],
            });
        }
    }
    for a in &shifts.elements {
        patterns.push(Pattern {
            shape: Shape::Shift,
            slots: [a[0] as u32, a[1] as u32, a[2] as u32, 0],
        });
    }
    Ok(SideData {
        patterns,
        inputs: FiveInputs::new(e, three.len() as u64, five.len() as u64, shifts.cardinality),
    })
}

const PERMUTATIONS: [[usize; 4]; 24] = [
    [0, 1, 2, 3], [0, 1, 3, 2], [0, 2, 1, 3], [0, 2, 3, 1], [0, 3, 1, 2], [0, 3, 2, 1],
    [1, 0, 2, 3], [1, 0, 3, 2], [1, 2, 0, 3], [1, 2, 3, 0], [1, 3, 0, 2], [1, 3, 2, 0],
    [2, 0, 1, 3], [2, 0, 3, 1], [2, 1, 0, 3], [2, 1, 3, 0], [2, 3, 0, 1], [2, 3, 1, 0],
    [3, 0, 1, 2], [3, 0, 2, 1], [3, 1, 0, 2], [3, 1, 2, 0], [3, 2, 0, 1], [3, 2, 1, 0],
];

/// Distinct arrangements of a four-slot multiset.
fn arrangements(slots: &[u32; 4]) -> Vec<[u32; 4]> {
    let mut out: Vec<[u32; 4]> = PERMUTATIONS
        .iter()
        .map(|p| [slots[p[0]], slots[p[1]], slots[p[2]], slots[p[3]]])
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn pack(mut x: [u32; 4]) -> u64 {
    x.sort_unstable();
    x.iter().fold(0u64, |acc, &v| (acc << 16) | v as u64)
}

fn unpack(k: u64) -> Tnomial {
    let asc = [(k >> 48) as u32, (k >> 32) as u32 & 0xffff, (k >> 16) as u32 & 0xffff, k as u32 & 0xffff];
    Tnomial::from_ascending(&asc)
}

/// Outcome of one shape pair.
#[derive(Debug, Clone, Serialize)]
pub struct CaseTally {
    pub case: &'static str,
    pub term: FiveTerm,
    /// Arrangements tried.
    pub generated: u64,
    /// Arrangements whose lift is a 5-nomial.
    pub lifted: u64,
    /// Distinct 5-nomials after canonical deduplication.
    pub accepted: u64,
    #[serde(with = "big")]
    pub closed_form: BigUint,
}

impl CaseTally {
    pub fn matches_closed_form(&self) -> bool {
        BigUint::from(self.accepted) == self.closed_form
    }
}

#[derive(Debug, Clone)]
pub struct CaseEnumeration {
    pub tallies: Vec<CaseTally>,
    union: Vec<u64>,
    /// Number of (case, multiple) incidences beyond the union: zero exactly
    /// when the cases are pairwise disjoint.
    pub overlaps: u64,
}

impl CaseEnumeration {
    pub fn len(&self) -> usize {
        self.union.len()
    }

    pub fn is_empty(&self) -> bool {
        self.union.is_empty()
    }

    /// The deduplicated union, sorted by ascending exponent sets.
    pub fn multiples(&self) -> impl Iterator<Item = Tnomial> + '_ {
        self.union.iter().map(|&k| unpack(k))
    }

    /// Same multiples as [`multiples`](Self::multiples), in the canonical
    /// order used by [`enumerate_tnomials`].
    pub fn sorted_multiples(&self) -> Vec<Tnomial> {
        let mut v: Vec<Tnomial> = self.multiples().collect();
        v.sort_unstable();
        v
    }

    pub fn tally(&self, term: FiveTerm) -> &CaseTally {
        self.tallies.iter().find(|t| t.term == term).expect("every term is tallied")
    }
}

fn lift4(basis: &CrtBasis, left: &[u32; 4], right: &[u32; 4]) -> Option<[u32; 4]> {
    let pairs = [
        (left[0], right[0]),
        (left[1], right[1]),
        (left[2], right[2]),
        (left[3], right[3]),
    ];
    for (s, p) in pairs.iter().enumerate() {
        if *p == (0, 0) || pairs[s + 1..].contains(p) {
            return None;
        }
    }
    Some(pairs.map(|(a, b)| basis.combine_unchecked(a as u64, b as u64) as u32))
}

/// Generates every 5-nomial multiple of `f1 * f2` (degree below `e1 * e2`)
/// from the residue patterns of the two factors, one tally per shape pair.
pub fn enumerate_5nomials_by_cases(f1: &OrderedPoly, f2: &OrderedPoly) -> Result<CaseEnumeration> {
    let basis = CrtBasis::new(f1.order, f2.order)?;
    if !f1.poly.gcd(&f2.poly).is_one() {
        return Err(Error::NotCoprime(f1.poly.to_string(), f2.poly.to_string()));
    }
    if basis.modulus() >= MAX_CASE_ORDER {
        return Err(Error::cap("product order", basis.modulus(), MAX_CASE_ORDER - 1));
    }
    let left = side_data(f1)?;
    let right = side_data(f2)?;
    let right_arrangements: Vec<(Shape, Vec<[u32; 4]>)> = right
        .patterns
        .iter()
        .map(|p| (p.shape, arrangements(&p.slots)))
        .collect();

    // per term: (generated, lifted, packed outputs)
    type Acc = HashMap<FiveTerm, (u64, u64, Vec<u64>)>;
    let merged: Acc = left
        .patterns
        .par_iter()
        .fold(Acc::new, |mut acc, lp| {
            for (rshape, arrs) in &right_arrangements {
                let entry = acc.entry(term_for(lp.shape, *rshape)).or_default();
                for r in arrs {
                    entry.0 += 1;
                    if let Some(lifted) = lift4(&basis, &lp.slots, r) {
                        entry.1 += 1;
                        entry.2.push(pack(lifted));
                    }
                }
            }
            acc
        })
        .reduce(Acc::new, |mut a, b| {
            for (term, (g, l, mut v)) in b {
                let entry = a.entry(term).or_default();
                entry.0 += g;
                entry.1 += l;
                entry.2.append(&mut v);
            }
            a
        });

    let closed: HashMap<FiveTerm, BigUint> = count5_terms(&left.inputs, &right.inputs)?.into_iter().collect();
    let mut tallies = Vec::with_capacity(9);
    let mut union = Vec::new();
    let mut merged = merged;
    for term in FiveTerm::ALL {
        let (generated, lifted, mut keys) = merged.remove(&term).unwrap_or_default();
        keys.par_sort_unstable();
        keys.dedup();
        tallies.push(CaseTally {
            case: case_label(term),
            term,
            generated,
            lifted,
            accepted: keys.len() as u64,
            closed_form: closed[&term].clone(),
        });
        union.append(&mut keys);
    }
    let total = union.len() as u64;
    union.par_sort_unstable();
    union.dedup();
    Ok(CaseEnumeration {
        tallies,
        overlaps: total - union.len() as u64,
        union,
    })
}

/// Direct enumeration of the 5-nomial multiples of the product `f1 * f2`,
/// packed the same way as the case generator's union (for set comparison).
pub fn direct_5nomials_packed(product: &OrderedPoly) -> Result<Vec<u64>> {
    if product.order >= MAX_CASE_ORDER {
        return Err(Error::cap("product order", product.order, MAX_CASE_ORDER - 1));
    }
    let table = ResidueTable::new(&product.poly, product.order)?;
    let limit = product.order as usize - 1;
    let mut out: Vec<u64> = (1..=limit)
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut local = Vec::new();
            scan_multiples(&table, 5, limit, i..i + 1, |asc| {
                local.push(pack([asc[0], asc[1], asc[2], asc[3]]))
            });
            local
        })
        .collect();
    out.par_sort_unstable();
    debug_assert_eq!(out.len() as u64, count_with_table(&table, 5).unwrap_or(0));
    Ok(out)
}

impl CaseEnumeration {
    /// Packed union, sorted ascending; comparable with
    /// [`direct_5nomials_packed`].
    pub fn packed(&self) -> &[u64] {
        &self.union
    }
}
