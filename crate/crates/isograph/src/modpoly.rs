//! Vendored classical modular polynomials Phi_ell for ell in {2,3,5,7,11,13}.
//!
//! Coefficients are kept as decimal strings (Phi_13 has coefficients of
//! hundreds of digits) and reduced mod p by Horner digit folding on demand.

use crate::algebra::{Fp2Element, FpParams, Polynomial};
use crate::error::{Error, Result};

pub const SUPPORTED_ELLS: [u64; 6] = [2, 3, 5, 7, 11, 13];

const PHI2: &str = include_str!("../data/phi2.txt");
const PHI3: &str = include_str!("../data/phi3.txt");
const PHI5: &str = include_str!("../data/phi5.txt");
const PHI7: &str = include_str!("../data/phi7.txt");
const PHI11: &str = include_str!("../data/phi11.txt");
const PHI13: &str = include_str!("../data/phi13.txt");

/// One bivariate term: X^deg_x * Y^deg_y with a signed decimal coefficient.
#[derive(Clone, Debug)]
pub struct ModPolyTerm {
    pub deg_x: usize,
    pub deg_y: usize,
    pub coefficient: String,
}

#[derive(Clone, Debug)]
pub struct ModularPolynomial {
    pub ell: u64,
    pub terms: Vec<ModPolyTerm>,
}

/// Loads Phi_ell from the vendored data, verifying the structural invariants
/// (X/Y symmetry, monic of X-degree ell + 1, absent top mixed term).
pub fn load_modpoly(ell: u64) -> Result<ModularPolynomial> {
    let data = match ell {
        2 => PHI2,
        3 => PHI3,
        5 => PHI5,
        7 => PHI7,
        11 => PHI11,
        13 => PHI13,
        _ => return Err(Error::UnsupportedPrime(ell)),
    };
    let mut terms = Vec::new();
    for (lineno, line) in data.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        fn expect<'a>(s: Option<&'a str>, line: usize) -> Result<&'a str> {
            s.ok_or(Error::FormatError { line, msg: "expected 'degX degY coefficient'".into() })
        }
        let deg_x: usize = expect(parts.next(), lineno + 1)?
            .parse()
            .map_err(|_| Error::FormatError { line: lineno + 1, msg: "bad X degree".into() })?;
        let deg_y: usize = expect(parts.next(), lineno + 1)?
            .parse()
            .map_err(|_| Error::FormatError { line: lineno + 1, msg: "bad Y degree".into() })?;
        let coefficient = expect(parts.next(), lineno + 1)?.to_string();
        if !coefficient.trim_start_matches('-').bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::FormatError { line: lineno + 1, msg: "bad coefficient".into() });
        }
        terms.push(ModPolyTerm { deg_x, deg_y, coefficient });
    }
    let mp = ModularPolynomial { ell, terms };
    mp.verify()?;
    Ok(mp)
}

impl ModularPolynomial {
    fn verify(&self) -> Result<()> {
        let d = self.ell as usize + 1;
        let bad = |msg: &str| Error::FormatError { line: 0, msg: msg.to_string() };
        let mut seen = std::collections::BTreeMap::new();
        for t in &self.terms {
            if t.deg_x > d || t.deg_y > d {
                return Err(bad("term degree exceeds ell + 1"));
            }
            if seen.insert((t.deg_x, t.deg_y), t.coefficient.clone()).is_some() {
                return Err(bad("duplicate term"));
            }
        }
        for ((a, b), c) in &seen {
            match seen.get(&(*b, *a)) {
                Some(c2) if c2 == c => {}
                _ => return Err(bad("terms are not symmetric in X and Y")),
            }
        }
        if seen.get(&(d, 0)).map(String::as_str) != Some("1") {
            return Err(bad("X^(ell+1) coefficient must be 1"));
        }
        if seen.contains_key(&(d, d)) {
            return Err(bad("X^(ell+1) Y^(ell+1) term must be absent"));
        }
        Ok(())
    }

    /// Phi_ell(j, Y) mod p: a monic polynomial of degree ell + 1 over F_p^2.
    pub fn specialize(&self, j: &Fp2Element, fp: &FpParams) -> Polynomial {
        let d = self.ell as usize + 1;
        let mut jpow = Vec::with_capacity(d + 1);
        jpow.push(Fp2Element::ONE);
        for _ in 0..d {
            let last = *jpow.last().unwrap();
            jpow.push(last.mul(j, fp));
        }
        let mut coeffs = vec![Fp2Element::ZERO; d + 1];
        for t in &self.terms {
            let c = fold_decimal_mod(&t.coefficient, fp);
            let term = jpow[t.deg_x].mul_u64(c, fp);
            coeffs[t.deg_y] = coeffs[t.deg_y].add(&term, fp);
        }
        Polynomial::from_coeffs(coeffs)
    }

    /// Phi_ell(j1, j2) mod p, used by the symmetry checks.
    pub fn eval2(&self, j1: &Fp2Element, j2: &Fp2Element, fp: &FpParams) -> Fp2Element {
        self.specialize(j1, fp).eval(j2, fp)
    }
}

/// Reduces a signed decimal string mod p by Horner folding over the digits.
fn fold_decimal_mod(s: &str, fp: &FpParams) -> u64 {
    let (neg, digits) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let mut acc: u64 = 0;
    for b in digits.bytes() {
        let d = (b - b'0') as u64;
        acc = ((acc as u128 * 10 + d as u128) % fp.p as u128) as u64;
    }
    if neg {
        fp.neg(acc)
    } else {
        acc
    }
}
