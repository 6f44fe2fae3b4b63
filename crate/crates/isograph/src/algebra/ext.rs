//! Small extension towers F_p^2[t]/(g) for torsion not rational over F_p^2.

use super::{Fp2Element, FpParams, Polynomial};
use crate::error::{Error, Result};

/// Largest supported tower degree over F_p^2.
pub const MAX_TOWER_DEGREE: usize = 24;

/// The tower context: a monic irreducible modulus over F_p^2.
#[derive(Clone, Debug)]
pub struct ExtTower {
    modulus: Polynomial,
}

impl ExtTower {
    pub fn new(modulus: Polynomial, fp: &FpParams) -> Result<Self> {
        let deg = modulus.degree().unwrap_or(0);
        if deg == 0 {
            return Err(Error::InvalidInput("tower modulus must be non-constant".into()));
        }
        if deg > MAX_TOWER_DEGREE {
            return Err(Error::TorsionExtensionTooLarge(deg, MAX_TOWER_DEGREE));
        }
        Ok(ExtTower { modulus: modulus.make_monic(fp) })
    }

    pub fn degree(&self) -> usize {
        self.modulus.degree().unwrap()
    }

    pub fn modulus(&self) -> &Polynomial {
        &self.modulus
    }

    pub fn zero(&self) -> ExtElement {
        ExtElement { coords: vec![Fp2Element::ZERO; self.degree()] }
    }

    pub fn one(&self) -> ExtElement {
        self.from_fp2(Fp2Element::ONE)
    }

    /// The residue class of t, a root of the modulus.
    pub fn generator(&self, fp: &FpParams) -> ExtElement {
        if self.degree() == 1 {
            return ExtElement { coords: vec![self.modulus.coeff(0).neg(fp)] };
        }
        let mut coords = vec![Fp2Element::ZERO; self.degree()];
        coords[1] = Fp2Element::ONE;
        ExtElement { coords }
    }

    pub fn from_fp2(&self, c: Fp2Element) -> ExtElement {
        let mut coords = vec![Fp2Element::ZERO; self.degree()];
        coords[0] = c;
        ExtElement { coords }
    }

    pub fn add(&self, x: &ExtElement, y: &ExtElement, fp: &FpParams) -> ExtElement {
        let coords = x.coords.iter().zip(&y.coords).map(|(a, b)| a.add(b, fp)).collect();
        ExtElement { coords }
    }

    pub fn sub(&self, x: &ExtElement, y: &ExtElement, fp: &FpParams) -> ExtElement {
        let coords = x.coords.iter().zip(&y.coords).map(|(a, b)| a.sub(b, fp)).collect();
        ExtElement { coords }
    }

    pub fn neg(&self, x: &ExtElement, fp: &FpParams) -> ExtElement {
        ExtElement { coords: x.coords.iter().map(|a| a.neg(fp)).collect() }
    }

    pub fn mul(&self, x: &ExtElement, y: &ExtElement, fp: &FpParams) -> ExtElement {
        let px = Polynomial::from_coeffs(x.coords.clone());
        let py = Polynomial::from_coeffs(y.coords.clone());
        let prod = px.mul(&py, fp).rem(&self.modulus, fp).expect("monic modulus");
        self.reduce_poly(prod)
    }

    pub fn inv(&self, x: &ExtElement, fp: &FpParams) -> Result<ExtElement> {
        // extended Euclid on (x, modulus)
        let a = Polynomial::from_coeffs(x.coords.clone());
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.modulus.clone(), a);
        let (mut s0, mut s1) = (Polynomial::zero(), Polynomial::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, fp)?;
            let s = s0.sub(&q.mul(&s1, fp), fp);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        // r0 = gcd, a unit since the modulus is irreducible
        let lc_inv = r0.leading().inv(fp)?;
        Ok(self.reduce_poly(s0.scale(&lc_inv, fp)))
    }

    pub fn div(&self, x: &ExtElement, y: &ExtElement, fp: &FpParams) -> Result<ExtElement> {
        Ok(self.mul(x, &self.inv(y, fp)?, fp))
    }

    /// Evaluates a polynomial with F_p^2 coefficients at a tower element.
    pub fn eval_poly(&self, f: &Polynomial, x: &ExtElement, fp: &FpParams) -> ExtElement {
        let mut acc = self.zero();
        for c in f.coeffs().iter().rev() {
            acc = self.mul(&acc, x, fp);
            acc.coords[0] = acc.coords[0].add(c, fp);
        }
        acc
    }

    fn reduce_poly(&self, f: Polynomial) -> ExtElement {
        let mut coords = f.coeffs().to_vec();
        coords.resize(self.degree(), Fp2Element::ZERO);
        ExtElement { coords }
    }
}

/// An element of the tower, as coordinates in the power basis of t.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElement {
    pub coords: Vec<Fp2Element>,
}

impl ExtElement {
    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    /// Some(c) when the element lies in the base field F_p^2.
    pub fn as_fp2(&self) -> Option<Fp2Element> {
        if self.coords[1..].iter().all(|c| c.is_zero()) {
            Some(self.coords[0])
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp() -> FpParams {
        FpParams::new(61).unwrap()
    }

    #[test]
    fn tower_inverse() {
        let fp = fp();
        // t^2 - i is irreducible over F_61^2 when i is a non-square there
        let i = Fp2Element::new(0, 1, &fp);
        let modulus = Polynomial::from_coeffs(vec![i.neg(&fp), Fp2Element::ZERO, Fp2Element::ONE]);
        let tower = ExtTower::new(modulus, &fp).unwrap();
        let t = tower.generator(&fp);
        let x = tower.add(&t, &tower.from_fp2(Fp2Element::from_u64(5, &fp)), &fp);
        let xi = tower.inv(&x, &fp).unwrap();
        assert_eq!(tower.mul(&x, &xi, &fp), tower.one());
    }

    #[test]
    fn degree_cap() {
        let fp = fp();
        let mut coeffs = vec![Fp2Element::ONE];
        coeffs.resize(26, Fp2Element::ZERO);
        coeffs.push(Fp2Element::ONE);
        let modulus = Polynomial::from_coeffs(coeffs);
        assert!(matches!(
            ExtTower::new(modulus, &fp),
            Err(Error::TorsionExtensionTooLarge(26, MAX_TOWER_DEGREE))
        ));
    }
}
