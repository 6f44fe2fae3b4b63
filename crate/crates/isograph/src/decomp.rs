//! Walks, backtracking detection, isogeny swapping, and the canonical
//! decomposition of isogeny cycles, with principality testing.
//!
//! Every j-invariant is assigned one canonical curve model per session (the
//! first model encountered, cached in a `ModelRegistry`); all isogenies are
//! renormalised to map between canonical models, which makes literal model
//! chaining and dual-pair comparison well-defined across walks.

use crate::algebra::{Fp2Element, FpParams, Polynomial};
use crate::curves::{dual, ell_kernels, pushforward, velu, Curve, Isogeny, Walk};
use crate::error::{Error, Result};
use std::collections::HashMap;

/// Session cache: canonical curve model per j-invariant, plus computed kernel
/// polynomial lists per (curve, ell).
#[derive(Default)]
pub struct ModelRegistry {
    models: HashMap<(u64, u64), Curve>,
    kernels: HashMap<((u64, u64, u64, u64), u64), Vec<Polynomial>>,
}

impl ModelRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// The canonical model for j, registering `candidate` if j is new.
    pub fn canonical(&mut self, j: &Fp2Element, candidate: &Curve) -> Curve {
        *self.models.entry((j.a, j.b)).or_insert(*candidate)
    }

    pub fn lookup(&self, j: &Fp2Element) -> Option<&Curve> {
        self.models.get(&(j.a, j.b))
    }

    /// Kernel polynomials of E for degree ell, cached.
    pub fn kernels(&mut self, e: &Curve, ell: u64, fp: &FpParams) -> Result<Vec<Polynomial>> {
        let key = ((e.a.a, e.a.b, e.b.a, e.b.b), ell);
        if let Some(k) = self.kernels.get(&key) {
            return Ok(k.clone());
        }
        let k = ell_kernels(e, ell, fp)?;
        self.kernels.insert(key, k.clone());
        Ok(k)
    }
}

/// One requested step of a walk: degree, target j, and which of the parallel
/// edges to that j to take (0-based, in deterministic kernel order).
#[derive(Clone, Debug)]
pub struct PathStep {
    pub ell: u64,
    pub target_j: Fp2Element,
    pub branch: usize,
}

/// Parses a walk file:
///   line 1: `p=<p>`
///   line 2: `start <a> <b>` (the starting model y^2 = x^3 + ax + b)
///   then one step per line: `<ell> <target_j as a+b*i> [branch]`
pub fn read_walk_file(text: &str) -> Result<(FpParams, Curve, Vec<PathStep>)> {
    let fail = |line: usize, msg: &str| Error::FormatError { line, msg: msg.to_string() };
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (ln, first) = lines.next().ok_or_else(|| fail(1, "empty walk file"))?;
    let p: u64 = first
        .strip_prefix("p=")
        .ok_or_else(|| fail(ln, "expected 'p=<p>'"))?
        .trim()
        .parse()
        .map_err(|_| fail(ln, "bad p"))?;
    let fp = FpParams::new(p).map_err(|_| fail(ln, "p is not an odd prime"))?;
    let (ln, second) = lines.next().ok_or_else(|| fail(2, "missing start line"))?;
    let toks: Vec<&str> = second.split_whitespace().collect();
    if toks.len() != 3 || toks[0] != "start" {
        return Err(fail(ln, "expected 'start <a> <b>'"));
    }
    let a = Fp2Element::parse(toks[1], &fp).map_err(|_| fail(ln, "bad coefficient a"))?;
    let b = Fp2Element::parse(toks[2], &fp).map_err(|_| fail(ln, "bad coefficient b"))?;
    let start = Curve::new(a, b, &fp).map_err(|_| fail(ln, "start curve is singular"))?;
    let mut path = Vec::new();
    for (ln, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 || toks.len() > 3 {
            return Err(fail(ln, "expected '<ell> <target_j> [branch]'"));
        }
        let ell: u64 = toks[0].parse().map_err(|_| fail(ln, "bad ell"))?;
        let target_j = Fp2Element::parse(toks[1], &fp).map_err(|_| fail(ln, "bad target j"))?;
        let branch: usize = match toks.get(2) {
            Some(t) => t.parse().map_err(|_| fail(ln, "bad branch index"))?,
            None => 0,
        };
        path.push(PathStep { ell, target_j, branch });
    }
    if path.is_empty() {
        return Err(fail(3, "walk file has no steps"));
    }
    Ok((fp, start, path))
}

/// Builds a walk from explicit (ell, target_j, branch) steps, with every
/// codomain renormalised to the session-canonical model of its j-invariant.
pub fn walk_from_path(
    start: &Curve,
    path: &[PathStep],
    registry: &mut ModelRegistry,
    fp: &FpParams,
) -> Result<Walk> {
    let j0 = start.j_invariant(fp);
    let mut current = registry.canonical(&j0, start);
    if current != *start {
        return Err(Error::ModelMismatch(
            "start curve differs from the registered canonical model for its j".into(),
        ));
    }
    let mut steps = Vec::with_capacity(path.len());
    for step in path {
        let kernels = registry.kernels(&current, step.ell, fp)?;
        let mut candidates = Vec::new();
        for k in &kernels {
            let phi = velu(&current, k, step.ell, fp)?;
            if phi.codomain.j_invariant(fp) == step.target_j {
                candidates.push(phi);
            }
        }
        if candidates.is_empty() {
            return Err(Error::NoSuchEdge {
                ell: step.ell,
                from: current.j_invariant(fp).render(),
                to: step.target_j.render(),
            });
        }
        if step.branch >= candidates.len() {
            return Err(Error::BranchOutOfRange {
                given: step.branch,
                available: candidates.len(),
            });
        }
        let phi = candidates.swap_remove(step.branch);
        let canonical_target = registry.canonical(&step.target_j, &phi.codomain);
        let phi = phi.renormalize_codomain(&canonical_target, fp)?;
        current = canonical_target;
        steps.push(phi);
    }
    Walk::new(steps)
}

/// True when phi2 immediately undoes phi1: equal prime degree and
/// `ker(phi2) = phi1(E[ell])`, i.e. phi2 = +-dual(phi1), so the composite kills
/// the full ell-torsion of phi1's domain.
pub fn is_backtracking_pair(phi1: &Isogeny, phi2: &Isogeny, fp: &FpParams) -> Result<bool> {
    if phi1.codomain != phi2.domain {
        return Err(Error::ModelMismatch(
            "backtracking test needs codomain(phi1) = domain(phi2)".into(),
        ));
    }
    if phi1.degree != phi2.degree {
        return Ok(false);
    }
    let d = dual(phi1, fp)?;
    Ok(d.kernel_poly == phi2.kernel_poly)
}

/// Isogeny swapping across a diamond: given psi then phi_prime of coprime
/// degrees, produces (phi, psi_prime) with phi first, the same composite
/// x-map up to sign, ker(phi) = dual(psi)(ker(phi_prime)) and
/// ker(psi_prime) = phi(ker(psi)). The middle curve is renormalised to the
/// session-canonical model of its j, and the final codomain to phi_prime's.
pub fn swap(
    psi: &Isogeny,
    phi_prime: &Isogeny,
    registry: &mut ModelRegistry,
    fp: &FpParams,
) -> Result<(Isogeny, Isogeny)> {
    if psi.codomain != phi_prime.domain {
        return Err(Error::ModelMismatch("swap needs codomain(psi) = domain(phi_prime)".into()));
    }
    // degrees are prime, so coprime means distinct
    if psi.degree == phi_prime.degree {
        return Err(Error::NotCoprime);
    }
    let psi_hat = dual(psi, fp)?;
    let ker_phi = pushforward(&psi_hat, &phi_prime.kernel_poly, fp)?;
    let phi_fresh = velu(&psi.domain, &ker_phi, phi_prime.degree, fp)?;
    let fresh_mid = phi_fresh.codomain;
    let mut ker_psi_prime = pushforward(&phi_fresh, &psi.kernel_poly, fp)?;
    let mid = registry.canonical(&fresh_mid.j_invariant(fp), &fresh_mid);
    let phi = phi_fresh.renormalize_codomain(&mid, fp)?;
    if fresh_mid != mid {
        let v = crate::curves::isomorphism_twist(&fresh_mid, &mid, fp)?
            .ok_or(Error::NormalizationFailed)?;
        ker_psi_prime = transport_kernel(&ker_psi_prime, &v, fp);
    }
    let psi_prime = velu(&mid, &ker_psi_prime, psi.degree, fp)?
        .renormalize_codomain(&phi_prime.codomain, fp)
        .map_err(|_| Error::NormalizationFailed)?;
    Ok((phi, psi_prime))
}

/// ker on a model M becomes prod (x - v x_i) on the twist of M by v.
fn transport_kernel(ker: &Polynomial, v: &Fp2Element, fp: &FpParams) -> Polynomial {
    let k = ker.deg_or_zero();
    let mut out = Vec::with_capacity(k + 1);
    let mut vpow = Fp2Element::ONE;
    // coefficient of x^e picks up v^(k - e); iterate from the top down
    let mut scales = vec![Fp2Element::ONE; k + 1];
    for e in (0..k).rev() {
        vpow = vpow.mul(v, fp);
        scales[e] = vpow;
    }
    for (e, c) in ker.coeffs().iter().enumerate() {
        out.push(c.mul(&scales[e], fp));
    }
    Polynomial::from_coeffs(out)
}

/// The canonical decomposition: steps of non-decreasing prime degree with no
/// adjacent dual pair inside equal-degree runs, and the scalar n pulled out.
#[derive(Clone, Debug)]
pub struct CanonicalDecomposition {
    pub sorted_steps: Vec<Isogeny>,
    pub scalar: u64,
}

impl CanonicalDecomposition {
    pub fn degrees(&self) -> Vec<u64> {
        self.sorted_steps.iter().map(|s| s.degree).collect()
    }

    /// Comparable identity of a decomposition: scalar plus the per-step
    /// (degree, domain model, kernel polynomial) data.
    pub fn signature(&self) -> Vec<String> {
        let mut sig = vec![format!("[{}]", self.scalar)];
        for s in &self.sorted_steps {
            sig.push(format!(
                "{}|{},{},{},{}|{}",
                s.degree, s.domain.a.a, s.domain.a.b, s.domain.b.a, s.domain.b.b,
                s.kernel_poly.render()
            ));
        }
        sig
    }
}

/// Algorithm: bubble-sort the steps by degree using adjacent coprime swaps,
/// then scan for adjacent dual pairs, folding each into the scalar with the
/// index backed off by one.
pub fn canonical_decompose(
    walk: &Walk,
    registry: &mut ModelRegistry,
    fp: &FpParams,
) -> Result<CanonicalDecomposition> {
    if fp.p % 12 != 1 {
        return Err(Error::UnsupportedCharacteristic(fp.p));
    }
    walk.validate_chain()?;
    if walk.steps.is_empty() || !walk.is_closed() {
        return Err(Error::NotClosed);
    }
    let mut steps = walk.steps.clone();
    // BubbleSort with adjacent swaps only
    let n = steps.len();
    for pass in 0..n {
        let mut swapped = false;
        for k in 0..n - 1 - pass {
            if steps[k].degree > steps[k + 1].degree {
                let (phi, psi_prime) = swap(&steps[k], &steps[k + 1], registry, fp)?;
                steps[k] = phi;
                steps[k + 1] = psi_prime;
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
    // remove adjacent dual pairs into the scalar
    let mut scalar = 1u64;
    let mut i = 0usize;
    while i + 1 < steps.len() {
        if is_backtracking_pair(&steps[i], &steps[i + 1], fp)? {
            scalar *= steps[i].degree;
            steps.drain(i..=i + 1);
            i = i.saturating_sub(1);
        } else {
            i += 1;
        }
    }
    Ok(CanonicalDecomposition { sorted_steps: steps, scalar })
}

/// True when the canonical decomposition has scalar factor 1.
pub fn is_principal(walk: &Walk, registry: &mut ModelRegistry, fp: &FpParams) -> Result<bool> {
    Ok(canonical_decompose(walk, registry, fp)?.scalar == 1)
}

/// Number of prime decompositions of a primitive isogeny of degree
/// prod ell^e: the multinomial (sum e)! / prod e!.
pub fn decomposition_count(d: &crate::brandt::DegreeVector) -> u128 {
    let total: u32 = d.pairs().iter().map(|&(_, e)| e).sum();
    let mut acc = 1u128;
    let mut seen = 0u32;
    for &(_, e) in d.pairs() {
        for k in 1..=e {
            seen += 1;
            acc = acc * seen as u128 / k as u128;
        }
    }
    debug_assert_eq!(seen, total);
    acc
}
