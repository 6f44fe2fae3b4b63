//! Spectral sweep cut and Cheeger bounds on G(419, {2,3}).
//!
//! Run with: cargo run --release --example spectral_cut

use isograph::algebra::FpParams;
use isograph::cuts::{
    cheeger_bounds, edge_expansion, eigen_symmetric, fiedler_sweep, fiedler_sweep_with,
    spectral_laplacian, FiedlerConvention,
};
use isograph::graph::build_graph;

fn main() -> isograph::Result<()> {
    let fp = FpParams::new(419)?;
    let g = build_graph(&fp, &[2, 3])?;
    let n = g.n_vertices();
    println!("G(419, {{2,3}}): {} vertices, d = {}", n, g.regularity());

    let spec = eigen_symmetric(&spectral_laplacian(&g))?;
    println!("laplacian spectrum extremes:");
    println!("  smallest:       {:.4}", spec.eigenvalues[0]);
    println!("  second smallest: {:.4}", spec.eigenvalues[1]);
    println!("  second largest:  {:.4}", spec.eigenvalues[n - 2]);
    println!("  largest:        {:.4}", spec.eigenvalues[n - 1]);

    let (cut, phi) = fiedler_sweep(&g)?;
    println!("sweep via second-largest eigenvector: size {} of {}, phi = {:.4}", cut.size(), n, phi);
    println!("  h(C) = {:.4}", edge_expansion(&g, &cut)?);

    let (cut2, phi2) = fiedler_sweep_with(&g, FiedlerConvention::SecondSmallest)?;
    println!("sweep via second-smallest eigenvector: size {} of {}, phi = {:.4}", cut2.size(), n, phi2);

    let (lo, hi) = cheeger_bounds(&g)?;
    println!("cheeger bracket: [{lo:.4}, {hi:.4}]");
    Ok(())
}
