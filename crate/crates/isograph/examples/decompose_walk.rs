//! Canonically decompose a non-principal isogeny cycle over F_2689: a closed
//! (2, 5, 2, 13)-walk whose two 2-isogenies fold into the scalar [2] after
//! sorting, leaving a principal {5,13}-cycle.
//!
//! Run with: cargo run --release --example decompose_walk

use isograph::algebra::{Fp2Element, FpParams};
use isograph::curves::Curve;
use isograph::decomp::{canonical_decompose, read_walk_file, walk_from_path, ModelRegistry};

fn main() -> isograph::Result<()> {
    let fp = FpParams::new(2689)?;
    let curve = |a: u64, b: u64| {
        Curve::new(Fp2Element::from_u64(a, &fp), Fp2Element::from_u64(b, &fp), &fp)
    };
    let e0 = curve(2236, 1886)?;
    let e1 = curve(732, 2243)?;
    let e2 = curve(750, 791)?;
    let e3 = curve(1996, 1015)?;

    // the walk is given degree-by-degree through target j-invariants;
    // this is also the on-disk walk file format
    let mut file = format!("p={}\nstart {} {}\n", fp.p, e0.a.render(), e0.b.render());
    for (ell, target) in [(2, &e1), (5, &e2), (2, &e3), (13, &e0)] {
        file.push_str(&format!("{} {}\n", ell, target.j_invariant(&fp).render()));
    }
    println!("walk file:\n{file}");

    let (fp2, start, path) = read_walk_file(&file)?;
    let mut registry = ModelRegistry::new();
    registry.canonical(&start.j_invariant(&fp2), &start);
    let walk = walk_from_path(&start, &path, &mut registry, &fp2)?;
    println!("closed: {}", walk.is_closed());

    let d = canonical_decompose(&walk, &mut registry, &fp2)?;
    println!("scalar  = {}", d.scalar);
    println!("degrees = {:?}", d.degrees());
    println!("principal = {}", d.scalar == 1);
    for s in &d.sorted_steps {
        println!("  step deg {}: kernel = [{}]", s.degree, s.kernel_poly.render());
    }
    Ok(())
}
