//! Exact arithmetic over F_p and F_p^2 = `F_p[i]/(i^2 - ns)`.
//!
//! `FpParams` is the field context: every operation takes it explicitly, and
//! domain values (`Fp2Element`, `Polynomial`, `ExtElement`) are plain data.
//! All intermediates fit in 128 bits for p below 2^62.

mod ext;
mod poly;

pub use ext::{ExtElement, ExtTower};
pub use poly::poly_order_key;
pub use poly::Polynomial;

use crate::error::{Error, Result};
use std::fmt;

/// Prime field parameters: the characteristic p and the least positive
/// quadratic non-residue ns defining F_p^2 = `F_p[i]/(i^2 - ns)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpParams {
    pub p: u64,
    pub ns: u64,
}

impl FpParams {
    /// Builds the field context for an odd prime p < 2^62.
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p % 2 == 0 || p >= (1 << 62) {
            return Err(Error::InvalidInput(format!("p = {p} must be an odd prime below 2^62")));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidInput(format!("p = {p} is not prime")));
        }
        let mut ns = 2;
        while pow_mod(ns, (p - 1) / 2, p) != p - 1 {
            ns += 1;
        }
        Ok(FpParams { p, ns })
    }

    #[inline]
    pub fn add(&self, x: u64, y: u64) -> u64 {
        let s = x + y;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, x: u64, y: u64) -> u64 {
        if x >= y {
            x - y
        } else {
            x + self.p - y
        }
    }

    #[inline]
    pub fn mul(&self, x: u64, y: u64) -> u64 {
        ((x as u128 * y as u128) % self.p as u128) as u64
    }

    #[inline]
    pub fn neg(&self, x: u64) -> u64 {
        if x == 0 {
            0
        } else {
            self.p - x
        }
    }

    pub fn pow(&self, x: u64, e: u64) -> u64 {
        pow_mod(x, e, self.p)
    }

    pub fn inv(&self, x: u64) -> Result<u64> {
        if x == 0 {
            return Err(Error::DivisionByZero);
        }
        Ok(pow_mod(x, self.p - 2, self.p))
    }

    /// Legendre symbol of x mod p: 1, 0, or -1.
    pub fn legendre(&self, x: u64) -> i32 {
        if x % self.p == 0 {
            return 0;
        }
        if pow_mod(x % self.p, (self.p - 1) / 2, self.p) == 1 {
            1
        } else {
            -1
        }
    }
}

/// An element a + b*i of F_p^2, with i^2 = ns; both coordinates reduced mod p.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp2Element {
    pub a: u64,
    pub b: u64,
}

impl Fp2Element {
    pub const ZERO: Fp2Element = Fp2Element { a: 0, b: 0 };
    pub const ONE: Fp2Element = Fp2Element { a: 1, b: 0 };

    pub fn new(a: u64, b: u64, fp: &FpParams) -> Self {
        Fp2Element { a: a % fp.p, b: b % fp.p }
    }

    pub fn from_u64(a: u64, fp: &FpParams) -> Self {
        Fp2Element { a: a % fp.p, b: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    /// True when the element lies in the prime field.
    pub fn in_fp(&self) -> bool {
        self.b == 0
    }

    pub fn add(&self, o: &Fp2Element, fp: &FpParams) -> Fp2Element {
        Fp2Element { a: fp.add(self.a, o.a), b: fp.add(self.b, o.b) }
    }

    pub fn sub(&self, o: &Fp2Element, fp: &FpParams) -> Fp2Element {
        Fp2Element { a: fp.sub(self.a, o.a), b: fp.sub(self.b, o.b) }
    }

    pub fn neg(&self, fp: &FpParams) -> Fp2Element {
        Fp2Element { a: fp.neg(self.a), b: fp.neg(self.b) }
    }

    pub fn mul(&self, o: &Fp2Element, fp: &FpParams) -> Fp2Element {
        // (a + bi)(c + di) = ac + ns*bd + (ad + bc) i
        let ac = fp.mul(self.a, o.a);
        let bd = fp.mul(self.b, o.b);
        let ad = fp.mul(self.a, o.b);
        let bc = fp.mul(self.b, o.a);
        Fp2Element { a: fp.add(ac, fp.mul(fp.ns, bd)), b: fp.add(ad, bc) }
    }

    pub fn mul_u64(&self, k: u64, fp: &FpParams) -> Fp2Element {
        let k = k % fp.p;
        Fp2Element { a: fp.mul(self.a, k), b: fp.mul(self.b, k) }
    }

    pub fn square(&self, fp: &FpParams) -> Fp2Element {
        self.mul(self, fp)
    }

    /// Galois conjugate a - b*i (the Frobenius x -> x^p).
    pub fn conj(&self, fp: &FpParams) -> Fp2Element {
        Fp2Element { a: self.a, b: fp.neg(self.b) }
    }

    /// Field norm a^2 - ns*b^2, an element of F_p.
    pub fn norm(&self, fp: &FpParams) -> u64 {
        fp.sub(fp.mul(self.a, self.a), fp.mul(fp.ns, fp.mul(self.b, self.b)))
    }

    pub fn inv(&self, fp: &FpParams) -> Result<Fp2Element> {
        let n = self.norm(fp);
        if n == 0 {
            return Err(Error::DivisionByZero);
        }
        let ninv = fp.inv(n)?;
        Ok(Fp2Element { a: fp.mul(self.a, ninv), b: fp.mul(fp.neg(self.b), ninv) })
    }

    pub fn div(&self, o: &Fp2Element, fp: &FpParams) -> Result<Fp2Element> {
        Ok(self.mul(&o.inv(fp)?, fp))
    }

    /// x^e with a 128-bit exponent (enough for (p^2 - 1)/2).
    pub fn pow(&self, mut e: u128, fp: &FpParams) -> Fp2Element {
        let mut base = *self;
        let mut acc = Fp2Element::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, fp);
            }
            base = base.square(fp);
            e >>= 1;
        }
        acc
    }

    /// Canonical text form: "a" when b = 0, else "a+b*i".
    pub fn render(&self) -> String {
        if self.b == 0 {
            format!("{}", self.a)
        } else {
            format!("{}+{}*i", self.a, self.b)
        }
    }

    /// Parses the canonical text form.
    pub fn parse(s: &str, fp: &FpParams) -> Result<Fp2Element> {
        let bad = || Error::InvalidInput(format!("cannot parse F_p^2 element '{s}'"));
        let s = s.trim();
        if let Some((lhs, rhs)) = s.split_once('+') {
            let a: u64 = lhs.trim().parse().map_err(|_| bad())?;
            let rhs = rhs.trim();
            let b_str = rhs.strip_suffix("*i").or_else(|| rhs.strip_suffix('i')).ok_or_else(bad)?;
            let b: u64 = b_str.trim().parse().map_err(|_| bad())?;
            Ok(Fp2Element::new(a, b, fp))
        } else {
            let a: u64 = s.parse().map_err(|_| bad())?;
            Ok(Fp2Element::from_u64(a, fp))
        }
    }
}

impl fmt::Display for Fp2Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % m as u128) as u64;
        }
        b = ((b as u128 * b as u128) % m as u128) as u64;
        e >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d % 2 == 0 {
        d /= 2;
        r += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn f61() -> FpParams {
        FpParams::new(61).unwrap()
    }

    #[test]
    fn least_non_residue() {
        assert_eq!(f61().ns, 2);
        assert_eq!(FpParams::new(5).unwrap().ns, 2);
        assert_eq!(FpParams::new(7).unwrap().ns, 3);
        assert_eq!(FpParams::new(2689).unwrap().ns, 13);
    }

    #[test]
    fn rejects_non_prime() {
        assert!(FpParams::new(91).is_err());
        assert!(FpParams::new(4).is_err());
    }

    #[test]
    fn mul_identity_and_i_squared() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let x = Fp2Element::new(rng.gen_range(0..61), rng.gen_range(0..61), &fp);
            assert_eq!(Fp2Element::ONE.mul(&x, &fp), x);
        }
        let i = Fp2Element::new(0, 1, &fp);
        assert_eq!(i.mul(&i, &fp), Fp2Element::from_u64(2, &fp));
    }

    #[test]
    fn conjugate_product() {
        // (3+4i)(3-4i) = 9 - 2*16 = -23 = 38 mod 61
        let fp = f61();
        let x = Fp2Element::new(3, 4, &fp);
        let prod = x.mul(&x.conj(&fp), &fp);
        assert_eq!(prod, Fp2Element::from_u64(38, &fp));
    }

    #[test]
    fn field_axioms_random() {
        let fp = FpParams::new(2689).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let rand_el = |rng: &mut ChaCha8Rng| {
            Fp2Element::new(rng.gen_range(0..fp.p), rng.gen_range(0..fp.p), &fp)
        };
        for _ in 0..1000 {
            let x = rand_el(&mut rng);
            let y = rand_el(&mut rng);
            let z = rand_el(&mut rng);
            // associativity and distributivity
            assert_eq!(x.mul(&y, &fp).mul(&z, &fp), x.mul(&y.mul(&z, &fp), &fp));
            assert_eq!(
                x.mul(&y.add(&z, &fp), &fp),
                x.mul(&y, &fp).add(&x.mul(&z, &fp), &fp)
            );
            // multiplicative inverse
            if !x.is_zero() {
                assert_eq!(x.mul(&x.inv(&fp).unwrap(), &fp), Fp2Element::ONE);
            }
        }
    }

    #[test]
    fn division_by_zero() {
        let fp = f61();
        assert!(matches!(
            Fp2Element::ONE.div(&Fp2Element::ZERO, &fp),
            Err(Error::DivisionByZero)
        ));
    }

    #[test]
    fn render_parse_round_trip() {
        let fp = f61();
        for (a, b) in [(0, 0), (5, 0), (0, 3), (17, 42)] {
            let x = Fp2Element::new(a, b, &fp);
            assert_eq!(Fp2Element::parse(&x.render(), &fp).unwrap(), x);
        }
        assert_eq!(Fp2Element::new(5, 0, &fp).render(), "5");
        assert_eq!(Fp2Element::new(5, 1, &fp).render(), "5+1*i");
    }

    #[test]
    fn frobenius_is_conjugation() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let x = Fp2Element::new(rng.gen_range(0..61), rng.gen_range(0..61), &fp);
            assert_eq!(x.pow(fp.p as u128, &fp), x.conj(&fp));
        }
    }
}
