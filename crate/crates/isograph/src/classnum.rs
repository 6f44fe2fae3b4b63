//! Class numbers of imaginary quadratic orders, Hurwitz and p-modified
//! Hurwitz class numbers, trace identities, bounds and estimates, and the
//! ideal-theoretic count of principal squarefree-degree isogeny cycles.

use crate::brandt::DegreeVector;
use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use std::collections::HashMap;

/// An imaginary quadratic order of discriminant disc = fundamental * f^2.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadOrder {
    pub disc: i64,
    pub fundamental_disc: i64,
    pub conductor: u64,
}

impl QuadOrder {
    pub fn from_disc(disc: i64) -> Result<QuadOrder> {
        if disc >= 0 || disc.rem_euclid(4) > 1 {
            return Err(Error::InvalidDiscriminant(disc));
        }
        let mut f = 1u64;
        let mut best = None;
        while (f * f) as i64 <= -disc {
            if disc % ((f * f) as i64) == 0 {
                let d0 = disc / ((f * f) as i64);
                if is_fundamental(d0) {
                    best = Some((d0, f));
                }
            }
            f += 1;
        }
        let (fundamental_disc, conductor) =
            best.ok_or(Error::InvalidDiscriminant(disc))?;
        Ok(QuadOrder { disc, fundamental_disc, conductor })
    }
}

fn is_squarefree(mut n: i64) -> bool {
    n = n.abs();
    let mut d = 2i64;
    while d * d <= n {
        if n % (d * d) == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn is_fundamental(d: i64) -> bool {
    if d >= 0 {
        return false;
    }
    let m = d.rem_euclid(4);
    if m == 1 {
        is_squarefree(d)
    } else if m == 0 {
        let q = d / 4;
        let qm = q.rem_euclid(4);
        (qm == 2 || qm == 3) && is_squarefree(q)
    } else {
        false
    }
}

/// Kronecker symbol (a | n).
pub fn kronecker(a: i64, n: i64) -> i32 {
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    let mut a = a;
    let mut n = n;
    let mut result = 1i32;
    if n < 0 {
        n = -n;
        if a < 0 {
            result = -result;
        }
    }
    while n % 2 == 0 {
        n /= 2;
        if a % 2 == 0 {
            return 0;
        }
        let am = a.rem_euclid(8);
        if am == 3 || am == 5 {
            result = -result;
        }
    }
    a = a.rem_euclid(n);
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let nm = n.rem_euclid(8);
            if nm == 3 || nm == 5 {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.rem_euclid(4) == 3 && n.rem_euclid(4) == 3 {
            result = -result;
        }
        a = a.rem_euclid(n);
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Class number h and unit index u = |O^x / Z^x| of the order of
/// discriminant d, by enumeration of reduced primitive forms.
pub fn class_number(d: i64) -> Result<(u64, u64)> {
    if d >= 0 || d.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(d));
    }
    let mut h = 0u64;
    let bound = (((-d) as f64 / 3.0).sqrt()) as i64 + 1;
    for a in 1..=bound {
        for b in -a..=a {
            if (b * b - d) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b - d) / (4 * a);
            if c < a {
                continue;
            }
            // reduced: |b| <= a <= c with b >= 0 when |b| = a or a = c
            if (b.abs() == a || a == c) && b < 0 {
                continue;
            }
            if gcd3(a, b.abs(), c) != 1 {
                continue;
            }
            h += 1;
        }
    }
    let u = match d {
        -3 => 3,
        -4 => 2,
        _ => 1,
    };
    Ok((h, u))
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(x: i64, y: i64) -> i64 {
        if y == 0 {
            x
        } else {
            gcd(y, x % y)
        }
    }
    gcd(gcd(a, b), c)
}

/// Memoized class-number lookups shared across the Hurwitz sums.
#[derive(Default)]
pub struct ClassNumberCache {
    cache: HashMap<i64, (u64, u64)>,
}

impl ClassNumberCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&mut self, d: i64) -> Result<(u64, u64)> {
        if let Some(&v) = self.cache.get(&d) {
            return Ok(v);
        }
        let v = class_number(d)?;
        self.cache.insert(d, v);
        Ok(v)
    }
}

fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Hurwitz class number H(D) for D >= 0 with -D a discriminant (or D = 0):
/// H(0) = -1/12, otherwise the sum of h/u over orders containing O_{-D}.
pub fn hurwitz(d_pos: u64, cache: &mut ClassNumberCache) -> Result<BigRational> {
    if d_pos == 0 {
        return Ok(ratio(-1, 12));
    }
    let neg = -(d_pos as i64);
    if neg.rem_euclid(4) > 1 {
        return Err(Error::InvalidDiscriminant(neg));
    }
    let mut acc = BigRational::zero();
    let mut f = 1u64;
    while f * f <= d_pos {
        if d_pos % (f * f) == 0 {
            let d = neg / ((f * f) as i64);
            if d.rem_euclid(4) <= 1 {
                let (h, u) = cache.get(d)?;
                acc += ratio(h as i64, u as i64);
            }
        }
        f += 1;
    }
    Ok(acc)
}

/// Modified Hurwitz class number H_p(D): 0 / H(D) / H(D)/2 / H(D/p^2)
/// according to the splitting of p in O_{-D}, with H_p(0) = (p-1)/24.
/// The conductor case is checked first; the split/inert/ramified cases are
/// decided by the Kronecker symbol of the fundamental discriminant at p.
pub fn hurwitz_p(d_pos: u64, p: u64, cache: &mut ClassNumberCache) -> Result<BigRational> {
    if p < 3 || p % 2 == 0 {
        return Err(Error::InvalidInput(format!("modified class numbers need odd p, got {p}")));
    }
    if d_pos == 0 {
        return Ok(ratio(p as i64 - 1, 24));
    }
    let order = QuadOrder::from_disc(-(d_pos as i64))?;
    if order.conductor % p == 0 {
        return hurwitz(d_pos / (p * p), cache);
    }
    match kronecker(order.fundamental_disc, p as i64) {
        1 => Ok(BigRational::zero()),
        -1 => hurwitz(d_pos, cache),
        _ => Ok(hurwitz(d_pos, cache)? / BigRational::from_integer(BigInt::from(2))),
    }
}

/// Tr B(m) = sum over s^2 <= 4m of H_p(4m - s^2).
pub fn trace_via_hurwitz(m: u64, p: u64) -> Result<BigRational> {
    if p % 2 == 0 || m % p == 0 {
        return Err(Error::InvalidInput("trace formula requires odd p with gcd(m, p) = 1".into()));
    }
    let mut cache = ClassNumberCache::new();
    let mut acc = BigRational::zero();
    let mut s = 0i64;
    while (s * s) as u64 <= 4 * m {
        let d = 4 * m - (s * s) as u64;
        acc += hurwitz_p(d, p, &mut cache)?;
        if s > 0 {
            acc += hurwitz_p(d, p, &mut cache)?;
        }
        s += 1;
    }
    Ok(acc)
}

/// The closed form for sum over s^2 <= 4m of the plain Hurwitz numbers:
/// 2 sigma(m) - sum over d | m of min(d, m/d).
pub fn hurwitz_sum_identity(m: u64) -> BigRational {
    let mut sigma = 0u64;
    let mut min_sum = 0u64;
    for d in 1..=m {
        if m % d == 0 {
            sigma += d;
            min_sum += d.min(m / d);
        }
    }
    BigRational::from_integer(BigInt::from(2 * sigma as i64 - min_sum as i64))
}

/// Upper bound 2 prod (ell^(e+1) - 1)/(ell - 1) for Tr B(prod ell^e).
pub fn trace_upper_bound(d: &DegreeVector) -> BigRational {
    BigRational::from_integer(BigInt::from(2)) * sigma_product(d)
}

/// Estimate prod (ell^(e+1) - 1)/(ell - 1) - (1/2) sum over divisors of
/// min(d, m/d), from the heuristic that p splits half the time.
pub fn trace_estimate(d: &DegreeVector) -> BigRational {
    let m = d.product();
    let mut min_sum = BigInt::zero();
    for t in divisors(m) {
        min_sum += BigInt::from(t.min(m / t) as i64);
    }
    sigma_product(d) - BigRational::new(min_sum, BigInt::from(2))
}

fn sigma_product(d: &DegreeVector) -> BigRational {
    let mut acc = BigRational::from_integer(BigInt::from(1));
    for &(l, e) in d.pairs() {
        let num = BigInt::from(l).pow(e + 1) - 1;
        let den = BigInt::from(l as i64 - 1);
        acc *= BigRational::new(num, den);
    }
    acc
}

fn divisors(m: u128) -> Vec<u128> {
    let mut out = Vec::new();
    let mut d = 1u128;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            if d != m / d {
                out.push(m / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Number of elements of norm n in the order, counted with sign.
pub fn norm_count(order: &QuadOrder, n: u64) -> u64 {
    let d = (-order.disc) as u64;
    let mut count = 0u64;
    if order.disc.rem_euclid(4) == 0 {
        // norm x^2 + (D/4) y^2
        let q = d / 4;
        let mut y = 0u64;
        while q * y * y <= n {
            let rem = n - q * y * y;
            if let Some(x) = exact_sqrt(rem) {
                let xs = if x == 0 { 1 } else { 2 };
                let ys = if y == 0 { 1 } else { 2 };
                count += xs * ys;
            }
            y += 1;
        }
    } else {
        // norm x^2 + xy + ((1+D)/4) y^2; integer x iff 4n - D y^2 = s^2 with
        // s = 2x + y, so count solutions of s^2 + D y^2 = 4n with s = y mod 2
        let mut y = 0i64;
        while d as i64 * y * y <= 4 * n as i64 {
            let rem = (4 * n as i64 - d as i64 * y * y) as u64;
            if let Some(s) = exact_sqrt(rem) {
                let s = s as i64;
                if (s - y).rem_euclid(2) == 0 {
                    let svals = if s == 0 { 1 } else { 2 };
                    let yvals = if y == 0 { 1 } else { 2 };
                    count += svals * yvals;
                }
            }
            y += 1;
        }
    }
    count
}

fn exact_sqrt(n: u64) -> Option<u64> {
    let r = (n as f64).sqrt() as u64;
    for c in r.saturating_sub(2)..=r + 2 {
        if c * c == n {
            return Some(c);
        }
    }
    None
}

/// One order's contribution to the ideal-theoretic count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealContribution {
    pub disc: i64,
    pub class_number: u64,
    pub norm_count: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IdealCycleCount {
    pub total: BigRational,
    pub contributions: Vec<IdealContribution>,
}

/// Ideal-theoretic count of distinct canonical decompositions of principal
/// {ell_1, ..., ell_r}-isogeny cycles (squarefree degree n = prod ell_i):
/// sum over orders O with p inert and p not dividing the conductor of
/// h_O * r_O(n) / 2, over discriminants -D with 3 <= D <= 4n.
pub fn ideal_cycle_count(p: u64, ells: &[u64]) -> Result<IdealCycleCount> {
    if p % 12 != 1 {
        return Err(Error::UnsupportedCharacteristic(p));
    }
    let mut seen = std::collections::BTreeSet::new();
    for &l in ells {
        if !seen.insert(l) {
            return Err(Error::NonSquarefreeDegree(l));
        }
        if l == p {
            return Err(Error::InvalidInput("p must not be an edge degree".into()));
        }
    }
    let n = ells.iter().fold(1u64, |acc, &l| acc * l);
    let mut cache = ClassNumberCache::new();
    let mut total = BigRational::zero();
    let mut contributions = Vec::new();
    for d_pos in 3..=4 * n {
        if (-(d_pos as i64)).rem_euclid(4) > 1 {
            continue;
        }
        let order = QuadOrder::from_disc(-(d_pos as i64))?;
        // orders where p is inert in the fraction field and prime to the conductor
        if kronecker(order.fundamental_disc, p as i64) != -1 || order.conductor % p == 0 {
            continue;
        }
        let r = norm_count(&order, n);
        if r == 0 {
            continue;
        }
        let (h, _) = cache.get(order.disc)?;
        total += ratio((h * r) as i64, 2);
        contributions.push(IdealContribution { disc: order.disc, class_number: h, norm_count: r });
    }
    Ok(IdealCycleCount { total, contributions })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(n: i64, d: i64) -> BigRational {
        ratio(n, d)
    }

    #[test]
    fn class_numbers_table() {
        assert_eq!(class_number(-7).unwrap(), (1, 1));
        assert_eq!(class_number(-8).unwrap(), (1, 1));
        assert_eq!(class_number(-11).unwrap(), (1, 1));
        assert_eq!(class_number(-23).unwrap(), (3, 1));
        assert_eq!(class_number(-24).unwrap(), (2, 1));
        assert_eq!(class_number(-3).unwrap(), (1, 3));
        assert_eq!(class_number(-4).unwrap(), (1, 2));
        assert_eq!(class_number(-47).unwrap(), (5, 1));
        assert!(matches!(class_number(-5), Err(Error::InvalidDiscriminant(-5))));
    }

    #[test]
    fn hurwitz_values() {
        let mut cache = ClassNumberCache::new();
        assert_eq!(hurwitz(0, &mut cache).unwrap(), rat(-1, 12));
        assert_eq!(hurwitz(3, &mut cache).unwrap(), rat(1, 3));
        assert_eq!(hurwitz(4, &mut cache).unwrap(), rat(1, 2));
        assert_eq!(hurwitz(23, &mut cache).unwrap(), rat(3, 1));
        assert_eq!(hurwitz(24, &mut cache).unwrap(), rat(2, 1));
        // H(12): orders of disc -12 (h=1) and -3 (h=1, u=3)
        assert_eq!(hurwitz(12, &mut cache).unwrap(), rat(4, 3));
        assert!(hurwitz(5, &mut cache).is_err());
    }

    #[test]
    fn hurwitz_p_cases() {
        let mut cache = ClassNumberCache::new();
        // H_61(0) = 60/24 = 5/2
        assert_eq!(hurwitz_p(0, 61, &mut cache).unwrap(), rat(5, 2));
        // -23 is inert at 61
        assert_eq!(kronecker(-23, 61), -1);
        assert_eq!(hurwitz_p(23, 61, &mut cache).unwrap(), rat(3, 1));
        // split case gives zero: -15 splits at 61
        assert_eq!(kronecker(-15, 61), 1);
        assert_eq!(hurwitz_p(15, 61, &mut cache).unwrap(), rat(0, 1));
        // H_p(D) <= H(D) over a sweep
        for d in 3..200u64 {
            if (-(d as i64)).rem_euclid(4) > 1 {
                continue;
            }
            let hp = hurwitz_p(d, 61, &mut cache).unwrap();
            let h = hurwitz(d, &mut cache).unwrap();
            assert!(hp <= h, "D = {d}");
        }
    }

    #[test]
    fn trace_m6_p61_is_ten() {
        assert_eq!(trace_via_hurwitz(6, 61).unwrap(), rat(10, 1));
    }

    #[test]
    fn trace_m1_is_vertex_count() {
        // class number of the quaternion algebra = (p-1)/12 for p = 1 mod 12
        assert_eq!(trace_via_hurwitz(1, 61).unwrap(), rat(5, 1));
        assert_eq!(trace_via_hurwitz(1, 2689).unwrap(), rat(224, 1));
    }

    #[test]
    fn hurwitz_sum_identity_values() {
        assert_eq!(hurwitz_sum_identity(6), rat(18, 1));
        assert_eq!(hurwitz_sum_identity(1), rat(1, 1));
    }

    #[test]
    fn hurwitz_sum_identity_cross_check() {
        // both sides computed independently for m <= 60
        let mut cache = ClassNumberCache::new();
        for m in 1..=60u64 {
            let mut lhs = BigRational::zero();
            let mut s = 0i64;
            while (s * s) as u64 <= 4 * m {
                let d = 4 * m - (s * s) as u64;
                lhs += hurwitz(d, &mut cache).unwrap();
                if s > 0 {
                    lhs += hurwitz(d, &mut cache).unwrap();
                }
                s += 1;
            }
            assert_eq!(lhs, hurwitz_sum_identity(m), "m = {m}");
        }
    }

    #[test]
    fn bound_and_estimate_example() {
        let d = DegreeVector::parse("2:1,3:1").unwrap();
        assert_eq!(trace_upper_bound(&d), rat(24, 1));
        assert_eq!(trace_estimate(&d), rat(9, 1));
        let empty = DegreeVector::parse("").unwrap();
        assert_eq!(trace_upper_bound(&empty), rat(2, 1));
        assert_eq!(trace_estimate(&empty), rat(1, 2));
    }

    #[test]
    fn norm_counts_table_rows() {
        let o8 = QuadOrder::from_disc(-8).unwrap();
        assert_eq!(norm_count(&o8, 6), 4);
        let o7 = QuadOrder::from_disc(-7).unwrap();
        assert_eq!(norm_count(&o7, 6), 0);
        let o24 = QuadOrder::from_disc(-24).unwrap();
        assert_eq!(norm_count(&o24, 6), 2);
        let o11 = QuadOrder::from_disc(-11).unwrap();
        assert_eq!(norm_count(&o11, 6), 0);
        let o23 = QuadOrder::from_disc(-23).unwrap();
        assert_eq!(norm_count(&o23, 6), 4);
    }

    #[test]
    fn ideal_count_p61() {
        let res = ideal_cycle_count(61, &[2, 3]).unwrap();
        assert_eq!(res.total, rat(10, 1));
        let expected = vec![
            IdealContribution { disc: -8, class_number: 1, norm_count: 4 },
            IdealContribution { disc: -23, class_number: 3, norm_count: 4 },
            IdealContribution { disc: -24, class_number: 2, norm_count: 2 },
        ];
        assert_eq!(res.contributions, expected);
    }

    #[test]
    fn ideal_count_guards() {
        assert!(matches!(ideal_cycle_count(61, &[2, 2]), Err(Error::NonSquarefreeDegree(2))));
        assert!(matches!(ideal_cycle_count(419, &[2, 3]), Err(Error::UnsupportedCharacteristic(419))));
    }

    #[test]
    fn quad_order_decomposition() {
        let o = QuadOrder::from_disc(-12).unwrap();
        assert_eq!(o.fundamental_disc, -3);
        assert_eq!(o.conductor, 2);
        let o = QuadOrder::from_disc(-23).unwrap();
        assert_eq!(o.fundamental_disc, -23);
        assert_eq!(o.conductor, 1);
        assert!(QuadOrder::from_disc(-5).is_err());
    }
}
