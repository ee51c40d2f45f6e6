//! Orders (exponents), irreducibility and primitivity.

use num_integer::Integer;

use super::Gf2Poly;
use crate::{Error, Result};

/// Largest irreducible degree whose order we compute. `2^40 - 1` is fully
/// factored by trial division up to `2^20`.
pub const MAX_IRREDUCIBLE_DEGREE: usize = 40;

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime factorization of `n` as `(prime, multiplicity)` pairs, ascending.
///
/// Complete for `n < 2^40`; a cofactor left over after trial division by
/// everything below `2^20` is then necessarily prime.
pub fn factor_u64(mut n: u64) -> Result<Vec<(u64, u32)>> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n && p <= TRIAL_LIMIT {
        if n.is_multiple_of(p) {
            let mut m = 0;
            while n.is_multiple_of(p) {
                n /= p;
                m += 1;
            }
            out.push((p, m));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        if p * p <= n {
            return Err(Error::Invalid(format!(
                "cannot certify {n} prime by trial division"
            )));
        }
        out.push((n, 1));
    }
    Ok(out)
}

fn x_pow_is_one(n: u64, m: &Gf2Poly) -> Result<bool> {
    Ok(Gf2Poly::x_pow_mod(n, m)?.is_one())
}

/// Rabin's test: `f` of degree `d` is irreducible iff `x^(2^d) = x mod f` and
/// `gcd(x^(2^(d/p)) - x, f) = 1` for every prime `p | d`.
pub fn is_irreducible(f: &Gf2Poly) -> bool {
    let d = match f.degree() {
        None | Some(0) => return false,
        Some(1) => return true,
        Some(d) => d,
    };
    if !f.constant_term() {
        return false;
    }
    let x = Gf2Poly::x();
    // frobenius[i] = x^(2^i) mod f
    let mut frobenius = Vec::with_capacity(d + 1);
    let mut cur = x.clone();
    frobenius.push(cur.clone());
    for _ in 0..d {
        cur = cur.mul_mod(&cur, f).expect("nonzero modulus");
        frobenius.push(cur.clone());
    }
    if frobenius[d] != x {
        return false;
    }
    let primes = factor_u64(d as u64).expect("small degree factors");
    primes.iter().all(|&(p, _)| {
        let h = &frobenius[d / p as usize] + &x;
        h.gcd(f).is_one()
    })
}

fn check_order_defined(f: &Gf2Poly) -> Result<usize> {
    match f.degree() {
        Some(d) if d >= 1 && f.constant_term() => Ok(d),
        _ => Err(Error::OrderUndefined(f.to_string())),
    }
}

/// Order of an irreducible polynomial: start from `2^d - 1` and strip prime
/// factors while `x^(e/p) = 1` persists.
fn irreducible_order(f: &Gf2Poly, d: usize) -> Result<u64> {
    if d > MAX_IRREDUCIBLE_DEGREE {
        return Err(Error::DegreeUnsupported(d, MAX_IRREDUCIBLE_DEGREE));
    }
    let mut e = (1u64 << d) - 1;
    for (p, _) in factor_u64(e)? {
        while e.is_multiple_of(p) && x_pow_is_one(e / p, f)? {
            e /= p;
        }
    }
    Ok(e)
}

/// Splits `f` (with `f(0) = 1`) into irreducible factors with multiplicity,
/// by trial division in increasing degree.
fn irreducible_factors(f: &Gf2Poly) -> Result<Vec<(Gf2Poly, u32)>> {
    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut deg = 1usize;
    loop {
        let dr = rest.degree().unwrap_or(0);
        if dr == 0 {
            break;
        }
        if 2 * deg > dr {
            out.push((rest, 1));
            break;
        }
        if deg > MAX_IRREDUCIBLE_DEGREE / 2 {
            return Err(Error::DegreeUnsupported(dr, MAX_IRREDUCIBLE_DEGREE));
        }
        // candidates with constant term 1 and exact degree `deg`
        let lo = (1u64 << deg) | 1;
        let hi = 1u64 << (deg + 1);
        let mut cand = lo;
        while cand < hi {
            let g = Gf2Poly::from_mask(cand);
            let mut mult = 0;
            loop {
                let (q, r) = rest.div_rem(&g)?;
                if !r.is_zero() {
                    break;
                }
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                out.push((g, mult));
            }
            cand += 2;
        }
        deg += 1;
    }
    Ok(out)
}

/// The least `e > 0` with `f | x^e + 1`.
///
/// Irreducible inputs go through the factorization of `2^d - 1`; reducible
/// inputs are split into irreducible powers and combined with
/// `ord(g^m) = ord(g) * 2^ceil(log2 m)` and the lcm rule for coprime parts.
pub fn order(f: &Gf2Poly) -> Result<u64> {
    let d = check_order_defined(f)?;
    if is_irreducible(f) {
        return irreducible_order(f, d);
    }
    let mut e = 1u64;
    for (g, m) in irreducible_factors(f)? {
        let dg = g.degree().expect("nonconstant factor");
        let mut og = irreducible_order(&g, dg)?;
        let mut cover = 1u32;
        while cover < m {
            og *= 2;
            cover *= 2;
        }
        e = e.lcm(&og);
    }
    Ok(e)
}

/// Order of a product of pairwise coprime polynomials: the lcm of the factor
/// orders.
pub fn product_order(factors: &[Gf2Poly]) -> Result<u64> {
    if factors.is_empty() {
        return Err(Error::Invalid("empty factor list".into()));
    }
    for f in factors {
        check_order_defined(f)?;
    }
    for (i, a) in factors.iter().enumerate() {
        for b in &factors[i + 1..] {
            if !a.gcd(b).is_one() {
                return Err(Error::NotCoprime(a.to_string(), b.to_string()));
            }
        }
    }
    factors
        .iter()
        .try_fold(1u64, |acc, f| Ok(acc.lcm(&order(f)?)))
}

/// Checks that `e` is the order of `m` without factoring `m`: `x^e = 1` and
/// `x^(e/p) != 1` for every prime `p | e`.
pub fn is_order(m: &Gf2Poly, e: u64) -> Result<bool> {
    if e == 0 || !x_pow_is_one(e, m)? {
        return Ok(false);
    }
    for (p, _) in factor_u64(e)? {
        if x_pow_is_one(e / p, m)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Irreducible of degree `d` with order `2^d - 1`.
pub fn is_primitive(f: &Gf2Poly) -> bool {
    let d = match f.degree() {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if !f.constant_term() || d > MAX_IRREDUCIBLE_DEGREE || !is_irreducible(f) {
        return false;
    }
    matches!(irreducible_order(f, d), Ok(e) if e == (1u64 << d) - 1)
}

/// All primitive polynomials of degree `d`, ascending by coefficient mask.
pub fn primitive_polynomials(d: usize) -> Vec<Gf2Poly> {
    assert!((1..=MAX_IRREDUCIBLE_DEGREE).contains(&d));
    let lo = (1u64 << d) | 1;
    let hi = 1u64 << (d + 1);
    (lo..hi)
        .step_by(2)
        .map(Gf2Poly::from_mask)
        .filter(is_primitive)
        .collect()
}

/// The primitive polynomial of degree `d` with the smallest coefficient mask.
pub fn first_primitive(d: usize) -> Result<Gf2Poly> {
    if d == 0 || d > MAX_IRREDUCIBLE_DEGREE {
        return Err(Error::DegreeUnsupported(d, MAX_IRREDUCIBLE_DEGREE));
    }
    let lo = (1u64 << d) | 1;
    let hi = 1u64 << (d + 1);
    (lo..hi)
        .step_by(2)
        .map(Gf2Poly::from_mask)
        .find(is_primitive)
        .ok_or_else(|| Error::Invalid(format!("no primitive polynomial of degree {d}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Gf2Poly {
        s.parse().unwrap()
    }

    /// Smallest `e` with `x^e = 1 mod f`, by stepping through powers of x.
    fn brute_order(f: &Gf2Poly) -> u64 {
        let one = Gf2Poly::one();
        let mut cur = Gf2Poly::x().rem(f).unwrap();
        let mut e = 1;
        while cur != one {
            cur = (&cur * &Gf2Poly::x()).rem(f).unwrap();
            e += 1;
        }
        e
    }

    /// Irreducible iff no polynomial of degree 1..=d/2 divides it.
    fn brute_irreducible(f: &Gf2Poly) -> bool {
        let d = f.degree().unwrap();
        d >= 1
            && (2u64..(1 << (d / 2 + 1))).all(|m| {
                let g = Gf2Poly::from_mask(m);
                g.degree().unwrap() == 0 || !f.rem(&g).unwrap().is_zero()
            })
    }

    #[test]
    fn orders() {
        assert_eq!(order(&p("x^2+x+1")).unwrap(), 3);
        assert_eq!(order(&p("x^4+x+1")).unwrap(), 15);
        assert_eq!(order(&p("x^4+x^3+x^2+x+1")).unwrap(), 5);
        assert_eq!(brute_order(&p("x^4+x^3+x^2+x+1")), 5);
        assert_eq!(order(&p("x+1")).unwrap(), 1);
        // (x+1)^2 = x^2+1 divides x^2+1
        assert_eq!(order(&p("x^2+1")).unwrap(), 2);
        assert_eq!(order(&p("x^5+x^4+1")).unwrap(), 21);
    }

    #[test]
    fn order_errors() {
        assert!(matches!(order(&p("x^3+x")), Err(Error::OrderUndefined(_))));
        assert!(matches!(order(&Gf2Poly::one()), Err(Error::OrderUndefined(_))));
        assert!(matches!(order(&Gf2Poly::zero()), Err(Error::OrderUndefined(_))));
    }

    #[test]
    fn orders_match_brute_force_for_all_small_polynomials() {
        for mask in (3u64..1 << 11).step_by(2) {
            let f = Gf2Poly::from_mask(mask);
            assert_eq!(order(&f).unwrap(), brute_order(&f), "{f}");
        }
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        for mask in 2u64..1 << 11 {
            let f = Gf2Poly::from_mask(mask);
            assert_eq!(is_irreducible(&f), brute_irreducible(&f), "{f}");
        }
    }

    #[test]
    fn primitivity_is_full_order_for_irreducibles() {
        for d in 1..=10 {
            for mask in ((1u64 << d) | 1..1 << (d + 1)).step_by(2) {
                let f = Gf2Poly::from_mask(mask);
                if brute_irreducible(&f) {
                    let e = brute_order(&f);
                    assert_eq!(((1u64 << d) - 1) % e, 0);
                    assert_eq!(is_primitive(&f), e == (1 << d) - 1, "{f}");
                } else {
                    assert!(!is_primitive(&f));
                }
            }
        }
    }

    #[test]
    fn primitive_examples() {
        assert!(is_primitive(&p("x^4+x+1")));
        assert!(is_primitive(&p("x^2+x+1")));
        assert!(!is_primitive(&p("x^4+x^3+x^2+x+1")));
        assert!(!is_primitive(&p("x")));
        assert!(is_primitive(&p("x^9+x^6+x^4+x^3+1")));
        assert!(is_primitive(&p("x^5+x^4+x^3+x^2+1")));
        assert!(is_primitive(&p("x^9+x^8+x^6+x^5+1")));
        assert!(is_primitive(&p("x^7+x+1")));
    }

    #[test]
    fn primitive_counts_are_phi_over_d() {
        // phi(2^d - 1) / d
        let expected = [1, 1, 2, 2, 6, 6, 18, 16, 48, 60];
        for (d, &n) in (1..=10).zip(&expected) {
            assert_eq!(primitive_polynomials(d).len(), n, "degree {d}");
        }
        assert_eq!(first_primitive(5).unwrap(), p("x^5+x^2+1"));
        assert_eq!(first_primitive(3).unwrap(), p("x^3+x+1"));
    }

    #[test]
    fn product_orders() {
        let a = p("x^2+x+1");
        let b = p("x^3+x+1");
        let c = p("x^5+x^2+1");
        assert_eq!(product_order(&[a.clone(), b.clone()]).unwrap(), 21);
        assert_eq!(product_order(std::slice::from_ref(&a)).unwrap(), 3);
        let abc = [a.clone(), b.clone(), c.clone()];
        assert_eq!(product_order(&abc).unwrap(), 651);
        let prod = &(&a * &b) * &c;
        assert_eq!(brute_order(&prod), 651);
        assert!(matches!(
            product_order(&[a.clone(), &a * &b]),
            Err(Error::NotCoprime(..))
        ));
    }

    #[test]
    fn product_orders_match_brute_force() {
        let prims: Vec<Gf2Poly> = (2..=5).flat_map(primitive_polynomials).collect();
        for (i, a) in prims.iter().enumerate() {
            for b in &prims[i + 1..] {
                let prod = a * b;
                let e = product_order(&[a.clone(), b.clone()]).unwrap();
                assert_eq!(e, brute_order(&prod), "{a} * {b}");
                assert_eq!(order(&prod).unwrap(), e);
                assert!(is_order(&prod, e).unwrap());
                assert!(!is_order(&prod, 2 * e).unwrap());
            }
        }
    }

    #[test]
    fn factoring_integers() {
        assert_eq!(factor_u64(1).unwrap(), vec![]);
        assert_eq!(factor_u64(651).unwrap(), vec![(3, 1), (7, 1), (31, 1)]);
        assert_eq!(factor_u64(1 << 10).unwrap(), vec![(2, 10)]);
        // 2^40 - 1 = 3 * 5^2 * 11 * 17 * 31 * 41 * 61681
        assert_eq!(
            factor_u64((1 << 40) - 1).unwrap(),
            vec![(3, 1), (5, 2), (11, 1), (17, 1), (31, 1), (41, 1), (61681, 1)]
        );
        // 2^37 - 1 = 223 * 616318177
        assert_eq!(factor_u64((1 << 37) - 1).unwrap(), vec![(223, 1), (616318177, 1)]);
    }
}
