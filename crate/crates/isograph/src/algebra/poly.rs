//! Dense univariate polynomials over F_p^2, coefficients lowest degree first.

use super::{Fp2Element, FpParams};
use crate::error::{Error, Result};
use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the randomized splitting steps; fixed so factorizations and root
/// orders are reproducible run to run.
const FACTOR_SEED: u64 = 0x5eed_1509;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<Fp2Element>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial { coeffs: vec![Fp2Element::ONE] }
    }

    pub fn x() -> Self {
        Polynomial { coeffs: vec![Fp2Element::ZERO, Fp2Element::ONE] }
    }

    pub fn constant(c: Fp2Element) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    /// x - r
    pub fn linear_from_root(r: Fp2Element, fp: &FpParams) -> Self {
        Polynomial { coeffs: vec![r.neg(fp), Fp2Element::ONE] }
    }

    pub fn from_coeffs(mut coeffs: Vec<Fp2Element>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn coeffs(&self) -> &[Fp2Element] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Fp2Element {
        self.coeffs.get(k).copied().unwrap_or(Fp2Element::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn deg_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> Fp2Element {
        *self.coeffs.last().unwrap_or(&Fp2Element::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fp2Element::ONE
    }

    pub fn add(&self, o: &Polynomial, fp: &FpParams) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add(&o.coeff(k), fp));
        }
        Polynomial::from_coeffs(out)
    }

    pub fn sub(&self, o: &Polynomial, fp: &FpParams) -> Polynomial {
        let n = self.coeffs.len().max(o.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).sub(&o.coeff(k), fp));
        }
        Polynomial::from_coeffs(out)
    }

    pub fn neg(&self, fp: &FpParams) -> Polynomial {
        Polynomial { coeffs: self.coeffs.iter().map(|c| c.neg(fp)).collect() }
    }

    pub fn scale(&self, c: &Fp2Element, fp: &FpParams) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|x| x.mul(c, fp)).collect())
    }

    pub fn mul(&self, o: &Polynomial, fp: &FpParams) -> Polynomial {
        if self.is_zero() || o.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Fp2Element::ZERO; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, fp), fp);
            }
        }
        Polynomial::from_coeffs(out)
    }

    /// Multiplies by x^k.
    pub fn shift(&self, k: usize) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Fp2Element::ZERO; k];
        out.extend_from_slice(&self.coeffs);
        Polynomial { coeffs: out }
    }

    /// Euclidean division; the divisor need not be monic.
    pub fn divrem(&self, d: &Polynomial, fp: &FpParams) -> Result<(Polynomial, Polynomial)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.degree().unwrap();
        let lc_inv = d.leading().inv(fp)?;
        let mut rem = self.coeffs.clone();
        if rem.len() < d.coeffs.len() {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut quot = vec![Fp2Element::ZERO; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            let c = rem[k];
            if c.is_zero() {
                continue;
            }
            let q = c.mul(&lc_inv, fp);
            quot[k - dd] = q;
            for (idx, dc) in d.coeffs.iter().enumerate() {
                let t = q.mul(dc, fp);
                rem[k - dd + idx] = rem[k - dd + idx].sub(&t, fp);
            }
        }
        Ok((Polynomial::from_coeffs(quot), Polynomial::from_coeffs(rem)))
    }

    pub fn rem(&self, d: &Polynomial, fp: &FpParams) -> Result<Polynomial> {
        Ok(self.divrem(d, fp)?.1)
    }

    pub fn divides(&self, other: &Polynomial, fp: &FpParams) -> bool {
        match other.divrem(self, fp) {
            Ok((_, r)) => r.is_zero(),
            Err(_) => false,
        }
    }

    pub fn make_monic(&self, fp: &FpParams) -> Polynomial {
        if self.is_zero() || self.is_monic() {
            return self.clone();
        }
        let inv = self.leading().inv(fp).expect("nonzero leading coefficient");
        self.scale(&inv, fp)
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Polynomial, fp: &FpParams) -> Polynomial {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, fp).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.make_monic(fp)
    }

    pub fn derivative(&self, fp: &FpParams) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul_u64(k as u64, fp));
        }
        Polynomial::from_coeffs(out)
    }

    pub fn eval(&self, x: &Fp2Element, fp: &FpParams) -> Fp2Element {
        let mut acc = Fp2Element::ZERO;
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(x, fp).add(c, fp);
        }
        acc
    }

    /// self^e mod m, with an arbitrary-size exponent.
    pub fn pow_mod(&self, e: &BigUint, m: &Polynomial, fp: &FpParams) -> Result<Polynomial> {
        let mut base = self.rem(m, fp)?;
        let mut acc = Polynomial::one();
        for k in 0..e.bits() {
            if e.bit(k) {
                acc = acc.mul(&base, fp).rem(m, fp)?;
            }
            if k + 1 < e.bits() {
                base = base.mul(&base, fp).rem(m, fp)?;
            }
        }
        Ok(acc)
    }

    /// x^(p^2) mod self, the Frobenius power used for root extraction.
    fn frobenius_power(&self, fp: &FpParams) -> Result<Polynomial> {
        let p = BigUint::from(fp.p);
        let xp = Polynomial::x().pow_mod(&p, self, fp)?;
        xp.pow_mod(&p, self, fp)
    }

    /// All F_p^2-rational roots with algebraic multiplicity, sorted by (a, b).
    pub fn roots(&self, fp: &FpParams) -> Result<Vec<(Fp2Element, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("root finding needs a nonzero polynomial".into()));
        }
        if self.degree() == Some(0) {
            return Ok(Vec::new());
        }
        let f = self.make_monic(fp);
        // product of the distinct linear factors: gcd(f, x^(p^2) - x)
        let frob = f.frobenius_power(fp)?;
        let lin = f.gcd(&frob.sub(&Polynomial::x(), fp), fp);
        let mut distinct = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
        split_linear(&lin, fp, &mut rng, &mut distinct)?;
        let mut out = Vec::with_capacity(distinct.len());
        for r in distinct {
            let lin = Polynomial::linear_from_root(r, fp);
            let mut m = 0;
            let mut g = f.clone();
            loop {
                let (q, rem) = g.divrem(&lin, fp)?;
                if !rem.is_zero() {
                    break;
                }
                m += 1;
                g = q;
            }
            out.push((r, m));
        }
        out.sort_by_key(|(r, _)| (r.a, r.b));
        Ok(out)
    }

    /// Squarefree decomposition of a monic polynomial: pairwise-coprime monic
    /// squarefree factors with exponents whose product recomposes the input.
    pub fn squarefree_decomposition(&self, fp: &FpParams) -> Result<Vec<(Polynomial, usize)>> {
        if self.is_zero() {
            return Err(Error::InvalidInput("squarefree decomposition needs nonzero input".into()));
        }
        let f = self.make_monic(fp);
        let mut out = Vec::new();
        sff(&f, 1, fp, &mut out)?;
        out.sort_by_key(|(g, e)| (*e, g.deg_or_zero()));
        Ok(out)
    }

    /// f / gcd(f, f'), the monic squarefree part.
    pub fn radical(&self, fp: &FpParams) -> Result<Polynomial> {
        let f = self.make_monic(fp);
        if f.deg_or_zero() == 0 {
            return Ok(f);
        }
        let d = f.derivative(fp);
        if d.is_zero() {
            // a perfect p-th power; strip the exponent and recurse
            return pth_root(&f, fp)?.radical(fp);
        }
        let g = f.gcd(&d, fp);
        Ok(f.divrem(&g, fp)?.0.make_monic(fp))
    }

    /// Full factorization into monic irreducibles with multiplicity,
    /// deterministic order (degree, then coefficient-lexicographic).
    pub fn factor(&self, fp: &FpParams) -> Result<Vec<(Polynomial, usize)>> {
        let mut out: Vec<(Polynomial, usize)> = Vec::new();
        for (sqfree, e) in self.squarefree_decomposition(fp)? {
            if sqfree.degree() == Some(0) {
                continue;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(FACTOR_SEED);
            for (d, prod) in distinct_degree(&sqfree, fp)? {
                let mut irreducibles = Vec::new();
                equal_degree_split(&prod, d, fp, &mut rng, &mut irreducibles)?;
                for g in irreducibles {
                    out.push((g, e));
                }
            }
        }
        out.sort_by(|(f, _), (g, _)| poly_order_key(f).cmp(&poly_order_key(g)));
        Ok(out)
    }

    /// Resultant Res_x(f(x), Y*den(x) - num(x)) as a polynomial in Y.
    ///
    /// Computed from the fixed-shape Sylvester matrix by evaluation at
    /// deg(f) + 1 points of F_p^2 followed by Lagrange interpolation.
    pub fn resultant_linear_in_y(
        &self,
        num: &Polynomial,
        den: &Polynomial,
        fp: &FpParams,
    ) -> Result<Polynomial> {
        if self.is_zero() {
            return Err(Error::InvalidInput("resultant needs a nonzero polynomial".into()));
        }
        let df = self.degree().unwrap();
        let dg = num.deg_or_zero().max(den.deg_or_zero());
        if df == 0 {
            return Ok(Polynomial::one());
        }
        if dg == 0 {
            // Res(f, c) = c^(deg f)
            let c = den.coeff(0);
            let n = num.coeff(0);
            // constant polynomial in Y: (c*Y - n)^df expanded is still needed;
            // with dg = 0 the Sylvester matrix is diagonal in the constant.
            let mut acc = Polynomial::one();
            let lin = Polynomial::from_coeffs(vec![n.neg(fp), c]);
            for _ in 0..df {
                acc = acc.mul(&lin, fp);
            }
            return Ok(acc);
        }
        let npts = df + 1;
        let mut ys = Vec::with_capacity(npts);
        let mut vals = Vec::with_capacity(npts);
        for idx in 0..npts as u64 {
            let y = index_to_fp2(idx, fp);
            let g = den.scale(&y, fp).sub(num, fp);
            let det = sylvester_det(self, &g, df, dg, fp)?;
            ys.push(y);
            vals.push(det);
        }
        lagrange_interpolate(&ys, &vals, fp)
    }

    /// Renders coefficients lowest-first, comma separated.
    pub fn render(&self) -> String {
        self.coeffs.iter().map(|c| c.render()).collect::<Vec<_>>().join(",")
    }
}

/// Deterministic enumeration of F_p^2 used for evaluation points.
fn index_to_fp2(idx: u64, fp: &FpParams) -> Fp2Element {
    Fp2Element { a: idx % fp.p, b: idx / fp.p }
}

/// Total order on polynomials: by degree, then lexicographic on (a, b)
/// coefficient pairs from the top coefficient down.
pub fn poly_order_key(f: &Polynomial) -> Vec<(u64, u64)> {
    let mut key = vec![(f.coeffs.len() as u64, 0)];
    key.extend(f.coeffs.iter().rev().map(|c| (c.a, c.b)));
    key
}

fn sff(f: &Polynomial, mult: usize, fp: &FpParams, out: &mut Vec<(Polynomial, usize)>) -> Result<()> {
    if f.degree() == Some(0) {
        return Ok(());
    }
    let fprime = f.derivative(fp);
    if fprime.is_zero() {
        let g = pth_root(f, fp)?;
        return sff(&g, mult * fp.p as usize, fp, out);
    }
    let mut c = f.gcd(&fprime, fp);
    let mut w = f.divrem(&c, fp)?.0.make_monic(fp);
    let mut i = 1usize;
    while w.degree() != Some(0) {
        let y = w.gcd(&c, fp);
        let fac = w.divrem(&y, fp)?.0.make_monic(fp);
        if fac.degree() != Some(0) {
            out.push((fac, mult * i));
        }
        w = y.clone();
        c = c.divrem(&y, fp)?.0.make_monic(fp);
        i += 1;
    }
    if c.degree() != Some(0) {
        let g = pth_root(&c, fp)?;
        sff(&g, mult * fp.p as usize, fp, out)?;
    }
    Ok(())
}

/// p-th root of f(x) = g(x^p); over F_p^2 the coefficient root is c^p.
fn pth_root(f: &Polynomial, fp: &FpParams) -> Result<Polynomial> {
    let p = fp.p as usize;
    let d = f.degree().unwrap();
    if d % p != 0 && d != 0 {
        return Err(Error::InvalidInput("polynomial is not a p-th power".into()));
    }
    let mut out = vec![Fp2Element::ZERO; d / p + 1];
    for (k, c) in f.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        if k % p != 0 {
            return Err(Error::InvalidInput("polynomial is not a p-th power".into()));
        }
        out[k / p] = c.pow(fp.p as u128, fp);
    }
    Ok(Polynomial::from_coeffs(out))
}

/// Splits a product of distinct linear factors into its roots.
fn split_linear(
    g: &Polynomial,
    fp: &FpParams,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Fp2Element>,
) -> Result<()> {
    match g.degree() {
        None | Some(0) => return Ok(()),
        Some(1) => {
            let r = g.coeff(0).neg(fp).div(&g.coeff(1), fp)?;
            out.push(r);
            return Ok(());
        }
        _ => {}
    }
    // random evaluation of the quadratic character splits the roots
    let e = (fp.p as u128 * fp.p as u128 - 1) / 2;
    let e_big = BigUint::from(e);
    loop {
        let shift = Fp2Element::new(rng.gen_range(0..fp.p), rng.gen_range(0..fp.p), fp);
        let base = Polynomial::from_coeffs(vec![shift, Fp2Element::ONE]);
        let h = base.pow_mod(&e_big, g, fp)?;
        let h1 = h.sub(&Polynomial::one(), fp);
        let d = g.gcd(&h1, fp);
        let dd = d.deg_or_zero();
        if dd > 0 && dd < g.degree().unwrap() {
            let rest = g.divrem(&d, fp)?.0.make_monic(fp);
            split_linear(&d, fp, rng, out)?;
            split_linear(&rest, fp, rng, out)?;
            return Ok(());
        }
    }
}

/// Distinct-degree factorization of a monic squarefree polynomial:
/// returns (d, product of all irreducible factors of degree d).
fn distinct_degree(f: &Polynomial, fp: &FpParams) -> Result<Vec<(usize, Polynomial)>> {
    let mut out = Vec::new();
    let mut rest = f.make_monic(fp);
    let q = BigUint::from(fp.p) * BigUint::from(fp.p);
    let mut d = 0usize;
    // x^(q^d) mod rest, recomputed from scratch whenever rest shrinks
    let mut xq = Polynomial::x().rem(&rest, fp)?;
    while rest.degree().map_or(false, |deg| deg > 0) {
        d += 1;
        if rest.degree() == Some(d) || rest.deg_or_zero() < 2 * d {
            out.push((rest.deg_or_zero(), rest.clone()));
            break;
        }
        xq = xq.pow_mod(&q, &rest, fp)?;
        let g = rest.gcd(&xq.sub(&Polynomial::x(), fp), fp);
        if g.deg_or_zero() > 0 {
            out.push((d, g.clone()));
            rest = rest.divrem(&g, fp)?.0.make_monic(fp);
            xq = xq.rem(&rest, fp)?;
        }
    }
    Ok(out)
}

/// Cantor-Zassenhaus equal-degree splitting: f is monic squarefree, all of
/// whose irreducible factors have degree d.
fn equal_degree_split(
    f: &Polynomial,
    d: usize,
    fp: &FpParams,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Polynomial>,
) -> Result<()> {
    let deg = f.deg_or_zero();
    if deg == 0 {
        return Ok(());
    }
    if deg == d {
        out.push(f.make_monic(fp));
        return Ok(());
    }
    // exponent (q^d - 1) / 2 with q = p^2
    let q = BigUint::from(fp.p) * BigUint::from(fp.p);
    let e = (q.pow(d as u32) - 1u32) / 2u32;
    loop {
        let mut coeffs = Vec::with_capacity(2 * d);
        for _ in 0..2 * d {
            coeffs.push(Fp2Element::new(rng.gen_range(0..fp.p), rng.gen_range(0..fp.p), fp));
        }
        let r = Polynomial::from_coeffs(coeffs);
        if r.deg_or_zero() == 0 {
            continue;
        }
        let h = r.pow_mod(&e, f, fp)?;
        let g = f.gcd(&h.sub(&Polynomial::one(), fp), fp);
        let gd = g.deg_or_zero();
        if gd > 0 && gd < deg {
            let rest = f.divrem(&g, fp)?.0.make_monic(fp);
            equal_degree_split(&g, d, fp, rng, out)?;
            equal_degree_split(&rest, d, fp, rng, out)?;
            return Ok(());
        }
    }
}

/// Determinant of the (df + dg)-square Sylvester matrix of f (degree df) and
/// g (formal degree dg), by Gaussian elimination over F_p^2.
fn sylvester_det(
    f: &Polynomial,
    g: &Polynomial,
    df: usize,
    dg: usize,
    fp: &FpParams,
) -> Result<Fp2Element> {
    let n = df + dg;
    let mut m = vec![vec![Fp2Element::ZERO; n]; n];
    for row in 0..dg {
        for k in 0..=df {
            m[row][row + k] = f.coeff(df - k);
        }
    }
    for row in 0..df {
        for k in 0..=dg {
            m[dg + row][row + k] = g.coeff(dg - k);
        }
    }
    let mut det = Fp2Element::ONE;
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero());
        let Some(pr) = pivot else {
            return Ok(Fp2Element::ZERO);
        };
        if pr != col {
            m.swap(pr, col);
            det = det.neg(fp);
        }
        let pv = m[col][col];
        det = det.mul(&pv, fp);
        let pv_inv = pv.inv(fp)?;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].mul(&pv_inv, fp);
            for c in col..n {
                let t = factor.mul(&m[col][c], fp);
                m[r][c] = m[r][c].sub(&t, fp);
            }
        }
    }
    Ok(det)
}

fn lagrange_interpolate(
    xs: &[Fp2Element],
    ys: &[Fp2Element],
    fp: &FpParams,
) -> Result<Polynomial> {
    let mut acc = Polynomial::zero();
    for (k, (xk, yk)) in xs.iter().zip(ys.iter()).enumerate() {
        if yk.is_zero() {
            continue;
        }
        let mut basis = Polynomial::one();
        let mut denom = Fp2Element::ONE;
        for (j, xj) in xs.iter().enumerate() {
            if j == k {
                continue;
            }
            basis = basis.mul(&Polynomial::linear_from_root(*xj, fp), fp);
            denom = denom.mul(&xk.sub(xj, fp), fp);
        }
        acc = acc.add(&basis.scale(&yk.div(&denom, fp)?, fp), fp);
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn f61() -> FpParams {
        FpParams::new(61).unwrap()
    }

    fn c(v: u64, fp: &FpParams) -> Fp2Element {
        Fp2Element::from_u64(v, fp)
    }

    fn rand_poly(deg: usize, rng: &mut ChaCha8Rng, fp: &FpParams) -> Polynomial {
        let mut coeffs: Vec<Fp2Element> = (0..deg)
            .map(|_| Fp2Element::new(rng.gen_range(0..fp.p), rng.gen_range(0..fp.p), fp))
            .collect();
        coeffs.push(Fp2Element::ONE);
        Polynomial::from_coeffs(coeffs)
    }

    #[test]
    fn divrem_round_trip() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let a = rand_poly(rng.gen_range(1..10), &mut rng, &fp);
            let b = rand_poly(rng.gen_range(1..6), &mut rng, &fp);
            let (q, r) = a.divrem(&b, &fp).unwrap();
            assert_eq!(q.mul(&b, &fp).add(&r, &fp), a);
            assert!(r.deg_or_zero() < b.deg_or_zero() || r.is_zero());
        }
    }

    #[test]
    fn double_root_multiplicity() {
        let fp = f61();
        let cc = c(7, &fp);
        let lin = Polynomial::linear_from_root(cc, &fp);
        let f = lin.mul(&lin, &fp);
        assert_eq!(f.roots(&fp).unwrap(), vec![(cc, 2)]);
    }

    #[test]
    fn defining_relation_roots() {
        // Y^2 - ns has roots i and -i
        let fp = f61();
        let f = Polynomial::from_coeffs(vec![c(fp.ns, &fp).neg(&fp), Fp2Element::ZERO, Fp2Element::ONE]);
        let roots = f.roots(&fp).unwrap();
        let i = Fp2Element::new(0, 1, &fp);
        let mi = i.neg(&fp);
        assert_eq!(roots.len(), 2);
        assert!(roots.contains(&(i, 1)));
        assert!(roots.contains(&(mi, 1)));
    }

    #[test]
    fn roots_then_deflation_leaves_no_roots() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..20 {
            let f = rand_poly(rng.gen_range(2..8), &mut rng, &fp);
            let roots = f.roots(&fp).unwrap();
            let mut g = f.clone();
            for (r, m) in &roots {
                for _ in 0..*m {
                    g = g.divrem(&Polynomial::linear_from_root(*r, &fp), &fp).unwrap().0;
                }
            }
            assert!(g.roots(&fp).unwrap().is_empty());
        }
    }

    #[test]
    fn squarefree_decomposition_examples() {
        let fp = f61();
        let l1 = Polynomial::linear_from_root(c(1, &fp), &fp);
        let l2 = Polynomial::linear_from_root(c(2, &fp), &fp);
        let f = l1.mul(&l1, &fp).mul(&l2, &fp);
        let decomp = f.squarefree_decomposition(&fp).unwrap();
        assert_eq!(decomp, vec![(l2.clone(), 1), (l1.clone(), 2)]);

        // irreducible quadratic stays intact
        let irr = Polynomial::from_coeffs(vec![c(fp.ns, &fp).neg(&fp).neg(&fp), Fp2Element::ZERO, Fp2Element::ONE]);
        // x^2 - ns splits over F_p^2; use x^2 - i (a non-square generically) instead:
        let i = Fp2Element::new(0, 1, &fp);
        let maybe_irr = Polynomial::from_coeffs(vec![i.neg(&fp), Fp2Element::ZERO, Fp2Element::ONE]);
        let d = maybe_irr.squarefree_decomposition(&fp).unwrap();
        let recomposed = d.iter().fold(Polynomial::one(), |acc, (g, e)| {
            let mut t = acc;
            for _ in 0..*e {
                t = t.mul(g, &fp);
            }
            t
        });
        assert_eq!(recomposed, maybe_irr);
        let _ = irr;
    }

    #[test]
    fn squarefree_multiply_back_random_cubic() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..40 {
            let f = rand_poly(3, &mut rng, &fp);
            let d = f.squarefree_decomposition(&fp).unwrap();
            let mut recomposed = Polynomial::one();
            for (g, e) in &d {
                assert!(g.is_monic());
                for _ in 0..*e {
                    recomposed = recomposed.mul(g, &fp);
                }
            }
            assert_eq!(recomposed, f);
        }
    }

    #[test]
    fn squarefree_decomposition_pth_power() {
        // (Y - 2)^5 over F_5 has zero derivative; the p-th-root branch applies
        let fp = FpParams::new(5).unwrap();
        let lin = Polynomial::linear_from_root(c(2, &fp), &fp);
        let mut f = Polynomial::one();
        for _ in 0..5 {
            f = f.mul(&lin, &fp);
        }
        assert!(f.derivative(&fp).is_zero());
        assert_eq!(f.squarefree_decomposition(&fp).unwrap(), vec![(lin.clone(), 5)]);
        assert_eq!(f.radical(&fp).unwrap(), lin);
    }

    #[test]
    fn factor_recomposes_and_orders() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..15 {
            let f = rand_poly(rng.gen_range(2..9), &mut rng, &fp);
            let factors = f.factor(&fp).unwrap();
            let mut recomposed = Polynomial::one();
            for (g, e) in &factors {
                for _ in 0..*e {
                    recomposed = recomposed.mul(g, &fp);
                }
            }
            assert_eq!(recomposed, f.make_monic(&fp));
        }
    }

    #[test]
    fn resultant_degree_one_is_evaluation() {
        // f = x - r: Res(f, Y*D - N) = Y*D(r) - N(r)
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let r = Fp2Element::new(rng.gen_range(0..61), rng.gen_range(0..61), &fp);
            let f = Polynomial::linear_from_root(r, &fp);
            let num = rand_poly(3, &mut rng, &fp);
            let den = rand_poly(2, &mut rng, &fp);
            let res = f.resultant_linear_in_y(&num, &den, &fp).unwrap();
            let expected = Polynomial::from_coeffs(vec![num.eval(&r, &fp).neg(&fp), den.eval(&r, &fp)]);
            // equal up to a unit
            let lc = res.leading().div(&expected.leading(), &fp).unwrap();
            assert_eq!(expected.scale(&lc, &fp), res);
        }
    }

    #[test]
    fn resultant_matches_root_product() {
        let fp = f61();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..20 {
            let r1 = Fp2Element::new(rng.gen_range(0..61), rng.gen_range(0..61), &fp);
            let mut r2 = Fp2Element::new(rng.gen_range(0..61), rng.gen_range(0..61), &fp);
            if r1 == r2 {
                r2 = r2.add(&Fp2Element::ONE, &fp);
            }
            let f = Polynomial::linear_from_root(r1, &fp).mul(&Polynomial::linear_from_root(r2, &fp), &fp);
            let num = rand_poly(2, &mut rng, &fp);
            let den = rand_poly(1, &mut rng, &fp);
            let res = f.resultant_linear_in_y(&num, &den, &fp).unwrap();
            let e1 = Polynomial::from_coeffs(vec![num.eval(&r1, &fp).neg(&fp), den.eval(&r1, &fp)]);
            let e2 = Polynomial::from_coeffs(vec![num.eval(&r2, &fp).neg(&fp), den.eval(&r2, &fp)]);
            let expected = e1.mul(&e2, &fp);
            if expected.is_zero() {
                assert!(res.is_zero());
            } else {
                let lc = res.leading().div(&expected.leading(), &fp).unwrap();
                assert_eq!(expected.scale(&lc, &fp), res);
            }
        }
    }

    #[test]
    fn resultant_constant_second_argument() {
        let fp = f61();
        let f = Polynomial::from_coeffs(vec![c(1, &fp), c(2, &fp), Fp2Element::ONE]);
        let res = f
            .resultant_linear_in_y(&Polynomial::constant(c(5, &fp)), &Polynomial::zero(), &fp)
            .unwrap();
        assert_eq!(res.degree(), Some(0));
    }
}
